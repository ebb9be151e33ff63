// Betti numbers, Euler characteristic and boundary matrices of the square
// cycle and the hollow tetrahedron.

use tdakit::complex::{betti_numbers, boundary_matrix, euler_characteristic, FilteredComplex, Simplex, SimplicialComplex};

fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

pub fn run() -> tdakit::Result<()> {
    let square = SimplicialComplex::closure([s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[0, 3])]);
    let tetra = SimplicialComplex::closure([s(&[0, 1, 2]), s(&[1, 2, 3]), s(&[0, 1, 3]), s(&[0, 2, 3])]);
    for (name, cx, top) in [("square", &square, 1), ("hollow tetrahedron", &tetra, 2)] {
        println!("{name}: betti {:?}, euler {}", betti_numbers(cx, top)?, euler_characteristic(cx));
    }

    let fc = FilteredComplex::new(tetra.simplices().map(|x| (x.clone(), 0.0)).collect())?;
    let bm = boundary_matrix(&fc)?;
    let edges: Vec<usize> = [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2], [1, 3]].iter().map(|e| fc.position(&s(e)).unwrap()).collect();
    let tris: Vec<usize> = [[0, 1, 2], [1, 2, 3], [0, 1, 3], [0, 2, 3]].iter().map(|t| fc.position(&s(t)).unwrap()).collect();
    println!("∂2 (rows e1..e6, columns τ1..τ4):");
    for row in bm.dense_block(&edges, &tris) {
        println!("  {row:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
