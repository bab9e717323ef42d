macro_rules! example_test {
    ($module:ident, $test:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(closure_example, closure_example_runs, "closure.rs");
example_test!(safety_example, safety_check_example_runs, "safety_check.rs");
example_test!(
    explain_example,
    explain_minsets_example_runs,
    "explain_minsets.rs"
);
example_test!(
    two_matroid_example,
    two_matroid_example_runs,
    "two_matroid.rs"
);
example_test!(reduction_example, reduction_example_runs, "reduction.rs");
example_test!(
    tree_example,
    augmenting_tree_example_runs,
    "augmenting_tree.rs"
);
example_test!(sanitize_example, sanitize_example_runs, "sanitize.rs");
