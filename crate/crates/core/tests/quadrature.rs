//! Moment quadrature beyond the headline criterion: mesh misconfiguration,
//! precision degradation, positivity, mass distribution and refinement.

use apery_moments::moments::{moment, moment_suite, QuadratureSpec};

#[test]
fn unsplit_mesh_is_flagged() {
    let good = moment_suite(2, &QuadratureSpec::default()).unwrap();
    let spec = QuadratureSpec { split_at_c0: false, ..QuadratureSpec::default() };
    let bad = moment_suite(2, &spec).unwrap();
    assert!(!good.flagged());
    assert!(bad.flagged() && bad.kink_inside_panel);
    for (g, b) in good.reports.iter().zip(&bad.reports) {
        assert!(b.rel_error > 100.0 * g.rel_error, "k = {}: {} vs {}", g.k, b.rel_error, g.rel_error);
    }
}

#[test]
fn halved_precision_still_passes() {
    let spec = QuadratureSpec { prec: 128, tol: 1e-4, ..QuadratureSpec::default() };
    let r = moment(0, &spec).unwrap();
    assert!(r.pass, "{}", r.rel_error);
}

#[test]
fn suite_structure() {
    let s = moment_suite(12, &QuadratureSpec::default()).unwrap();
    assert_eq!(s.nonpositive_nodes, 0);
    // A_{k+1}/A_k → c, so the weight moves to the right end.
    assert!(s.upper_half_mass[12] > 0.99, "{}", s.upper_half_mass[12]);
    assert!(s.upper_half_mass.windows(2).all(|w| w[1] > w[0]));
    let coarse = moment_suite(12, &QuadratureSpec { levels: 20, ..QuadratureSpec::default() }).unwrap();
    for (f, c) in s.reports.iter().zip(&coarse.reports) {
        assert!(f.estimate < c.estimate, "k = {}: {} vs {}", f.k, f.estimate, c.estimate);
        assert!(f.rel_error < c.rel_error);
    }
    assert_eq!(s.reports[4].exact, 33001.into());
}
