mod common;

use proptest::prelude::*;
use rand::Rng;

use tdakit::complex::{betti_numbers, boundary_matrix, euler_characteristic};
use tdakit::distance::{bottleneck_distance, pwgk_gram, wasserstein_distance};
use tdakit::image::{label_components, sublevel_filtration, GrayImage};
use tdakit::mapper::{cover_for, lens_values, mapper_pointcloud, Clustering, Lens};
use tdakit::persistence::{betti_at, compute_persistence, PersistenceDiagram};
use tdakit::pointcloud::{pairwise_distances, rips_filtration, Metric, PointCloud};
use tdakit::vectorize::{landscape, persistence_image, silhouette, uniform_grid, ImageBounds};

fn diagram(points: Vec<(f64, f64)>) -> PersistenceDiagram {
    PersistenceDiagram::from_points(0, points.into_iter().map(|(b, l)| (b, b + l))).unwrap()
}

fn small_diagram(max: usize) -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0.0..8.0f64, 0.01..4.0f64), 0..=max).prop_map(diagram)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn euler_identity(seed in any::<u64>()) {
        let fc = common::random_filtered_complex(&mut common::rng(seed), 7, 40);
        let cx = fc.complex();
        let top = cx.max_dim().unwrap();
        let betti = betti_numbers(&cx, top).unwrap();
        let alternating: i64 = betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(euler_characteristic(&cx), alternating);
    }

    #[test]
    fn boundary_of_boundary_vanishes(seed in any::<u64>()) {
        let fc = common::random_filtered_complex(&mut common::rng(seed), 7, 40);
        let bm = boundary_matrix(&fc).unwrap();
        prop_assert!(bm.is_strictly_upper_triangular());
        for col in bm.columns() {
            let mut parity = std::collections::BTreeMap::new();
            for &f in col {
                for &g in bm.column(f) {
                    *parity.entry(g).or_insert(0u8) ^= 1;
                }
            }
            prop_assert!(parity.values().all(|&p| p == 0));
        }
    }

    #[test]
    fn betti_matches_chain_enumeration(seed in any::<u64>()) {
        let fc = common::random_filtered_complex(&mut common::rng(seed), 5, 12);
        let cx = fc.complex();
        let top = cx.max_dim().unwrap();
        prop_assert_eq!(betti_numbers(&cx, top).unwrap(), common::brute_force_betti(&cx, top));
    }

    #[test]
    fn diagrams_agree_with_prefix_homology(seed in any::<u64>()) {
        let fc = common::random_filtered_complex(&mut common::rng(seed), 8, 60);
        let top = fc.complex().max_dim().unwrap();
        let dgms = compute_persistence(&fc, top).unwrap();
        for t in fc.values() {
            let pre = fc.prefix(t);
            let want = common::rank_betti(&pre, top);
            for (k, &w) in want.iter().enumerate() {
                prop_assert_eq!(betti_at(&dgms, k, t), w);
            }
        }
    }

    #[test]
    fn wasserstein_matches_exhaustive_matching(a in small_diagram(5), b in small_diagram(5)) {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let w = wasserstein_distance(&a, &b, p).unwrap();
            prop_assert!((w - common::exhaustive_distance(&a, &b, p)).abs() <= 1e-9);
        }
    }

    #[test]
    fn wasserstein_is_a_metric(a in small_diagram(6), b in small_diagram(6), c in small_diagram(6)) {
        for p in [1.0, 2.0, f64::INFINITY] {
            let d = |x: &PersistenceDiagram, y: &PersistenceDiagram| wasserstein_distance(x, y, p).unwrap();
            prop_assert!(d(&a, &a) <= 1e-12);
            prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-9);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
            prop_assert!(bottleneck_distance(&a, &b).unwrap() <= d(&a, &b) + 1e-9);
        }
    }

    #[test]
    fn pwgk_gram_is_positive_semidefinite(ds in prop::collection::vec(small_diagram(5), 2..6), seed in any::<u64>()) {
        let k = pwgk_gram(&ds, 0.7, 1.0).unwrap();
        let mut r = common::rng(seed);
        for _ in 0..20 {
            let x: Vec<f64> = (0..ds.len()).map(|_| r.gen_range(-1.0..1.0)).collect();
            let q: f64 = (0..ds.len()).flat_map(|i| (0..ds.len()).map(move |j| (i, j))).map(|(i, j)| x[i] * k[i][j] * x[j]).sum();
            prop_assert!(q >= -1e-9, "quadratic form {}", q);
        }
        for (i, row) in k.iter().enumerate() {
            for (j, &kij) in row.iter().enumerate() {
                prop_assert!((kij - k[j][i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn landscapes_and_silhouettes(a in small_diagram(8), b in small_diagram(8)) {
        let grid = uniform_grid(0.0, 12.0, 241).unwrap();
        let l1 = landscape(&a, 1, &grid).unwrap();
        let l2 = landscape(&a, 2, &grid).unwrap();
        prop_assert!(l1.values.iter().zip(&l2.values).all(|(x, y)| x >= y));
        let sil = silhouette(&a, 1.0, &grid).unwrap();
        prop_assert!(sil.values.iter().zip(&l1.values).all(|(s, l)| *s >= 0.0 && *s <= l + 1e-12));
        let lb = landscape(&b, 1, &grid).unwrap();
        let sup = l1.values.iter().zip(&lb.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(sup <= bottleneck_distance(&a, &b).unwrap() + 1e-9);
    }

    #[test]
    fn persistence_image_mass(a in small_diagram(8), sigma in 0.05..0.5f64, power in 0.0..2.0f64) {
        let bounds = ImageBounds::covering(std::slice::from_ref(&a), 12.0 * sigma);
        let img = persistence_image(&a, (15, 25), bounds, sigma, power).unwrap();
        let mass: f64 = a.pairs().iter().map(|q| q.lifespan().powf(power)).sum();
        prop_assert!((img.total() - mass).abs() <= 1e-6);
    }

    #[test]
    fn rips_is_stable_under_perturbation(seed in any::<u64>(), eps in 0.0..0.1f64) {
        let mut r = common::rng(seed);
        let n = r.gen_range(3..=9);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(0.0..2.0), r.gen_range(0.0..2.0)]).collect();
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| {
            let t: f64 = r.gen_range(0.0..std::f64::consts::TAU);
            vec![p[0] + eps * t.cos(), p[1] + eps * t.sin()]
        }).collect();
        let pd = |pts: Vec<Vec<f64>>| {
            let dm = pairwise_distances(&PointCloud::new(pts).unwrap(), Metric::Euclidean);
            compute_persistence(&rips_filtration(&dm, 1e9, 2).unwrap(), 1).unwrap()
        };
        let (a, b) = (pd(pts), pd(moved));
        for d in 0..=1 {
            prop_assert!(bottleneck_distance(&a[d], &b[d]).unwrap() <= 2.0 * eps + 1e-9);
        }
    }

    #[test]
    fn cubical_components(values in prop::collection::vec(0u8..8, 36)) {
        let vals: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        let img = GrayImage::new(6, 6, vals.clone()).unwrap();
        let thresholds: Vec<f64> = (0..8).map(f64::from).collect();
        let cf = sublevel_filtration(&img, &thresholds).unwrap();
        let pd0 = &compute_persistence(cf.cells(), 0).unwrap()[0];
        for &t in &thresholds {
            let mask: Vec<bool> = vals.iter().map(|&v| v <= t).collect();
            let want = common::components_8(6, 6, &mask);
            prop_assert_eq!(pd0.betti_at(t), want);
            prop_assert_eq!(label_components(6, 6, &mask).0, want);
        }
    }

    #[test]
    fn mapper_is_a_nerve_and_deterministic(seed in any::<u64>(), n in 1usize..8, g in 0.0..0.6f64, eps in 0.1..1.0f64) {
        let pc = common::blobs(&[(0.0, 0.0), (3.0, 1.0)], 25, 1.0, seed);
        let lens = lens_values(&pc, &Lens::Coordinate { axis: 0 }).unwrap();
        let cover = cover_for(&lens, n, g).unwrap();
        let m = mapper_pointcloud(&pc, &lens, &cover, &Clustering::SingleLinkage { eps }).unwrap();
        prop_assert!(common::check_nerve(&m).is_ok(), "{:?}", common::check_nerve(&m));
        let covered: std::collections::BTreeSet<usize> = m.nodes.iter().flat_map(|x| x.members.iter().copied()).collect();
        prop_assert_eq!(covered.len(), pc.len());
        let again = mapper_pointcloud(&pc, &lens, &cover, &Clustering::SingleLinkage { eps }).unwrap();
        prop_assert_eq!(serde_json::to_string(&m).unwrap(), serde_json::to_string(&again).unwrap());
    }
}
