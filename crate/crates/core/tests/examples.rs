macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run().expect(concat!($file, " should run"));
        }
    };
}

example!(simplicial_homology, "simplicial_homology.rs");
example!(rips_persistence, "rips_persistence.rs");
example!(cech_vs_rips, "cech_vs_rips.rs");
example!(cubical_image, "cubical_image.rs");
example!(graph_filtrations, "graph_filtrations.rs");
example!(diagram_distances, "diagram_distances.rs");
example!(vectorizations, "vectorizations.rs");
example!(multiparameter, "multiparameter.rs");
example!(mapper_circle, "mapper_circle.rs");
example!(file_pipeline, "file_pipeline.rs");
example!(serve_api, "serve_api.rs");
