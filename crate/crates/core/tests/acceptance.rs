//! Acceptance criteria 1 to 13, one test each.
//!
//! Every test prints a `criterion N ... PASS|FAIL` line (visible with
//! `--nocapture`) and then asserts on it. Run them all with
//! `cargo test --test acceptance -- --nocapture --test-threads=1`.

use apery_moments::selfcheck::{run, Criterion};

const PREC: usize = 256;

fn check(id: usize) -> Criterion {
    let c = run(id, PREC);
    println!("{}", c.line());
    c
}

macro_rules! criterion {
    ($name:ident, $id:expr) => {
        #[test]
        fn $name() {
            let c = check($id);
            assert!(c.pass, "criterion {} failed: {}", c.id, c.detail);
        }
    };
}

criterion!(c01_sequence_equivalence, 1);
criterion!(c02_heun_square_identity, 2);
criterion!(c03_positivity_certificates, 3);
criterion!(c04_moment_identity, 4);
criterion!(c05_s0_s1_product, 5);
criterion!(c06_gauss_asymptotic, 6);
criterion!(c07_representation_consistency, 7);
criterion!(c08_ode_residuals, 8);
criterion!(c09_frobenius_data, 9);
criterion!(c10_endpoint_asymptotics, 10);
criterion!(c11_modular_formal_identities, 11);
criterion!(c12_special_values, 12);
criterion!(c13_hankel_positivity, 13);
