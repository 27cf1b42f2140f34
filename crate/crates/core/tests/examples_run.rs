macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(kostka_tables, "kostka_tables.rs");
example!(theta_tables, "theta_tables.rs");
example!(delta_coefficients, "delta_coefficients.rs");
example!(sympow_local_factors, "sympow_local_factors.rs");
example!(u_factor, "u_factor.rs");
example!(class_group_characters, "class_group_characters.rs");
example!(moment_sums, "moment_sums.rs");

#[test]
fn kostka_tables_runs() {
    kostka_tables::run_example().expect("kostka_tables example should run");
}

#[test]
fn theta_tables_runs() {
    theta_tables::run_example().expect("theta_tables example should run");
}

#[test]
fn delta_coefficients_runs() {
    delta_coefficients::run_example().expect("delta_coefficients example should run");
}

#[test]
fn sympow_local_factors_runs() {
    sympow_local_factors::run_example().expect("sympow_local_factors example should run");
}

#[test]
fn u_factor_runs() {
    u_factor::run_example().expect("u_factor example should run");
}

#[test]
fn class_group_characters_runs() {
    class_group_characters::run_example().expect("class_group_characters example should run");
}

#[test]
fn moment_sums_runs() {
    moment_sums::run_example().expect("moment_sums example should run");
}
