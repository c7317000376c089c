use compdyn_core::geometry::{min_separation, verify_structure, CarlemanFamily, GShape, Gap, Window};
use compdyn_core::Exec;

#[test]
fn paper_family_is_certified() {
    let cert = verify_structure(&CarlemanFamily::paper(), Window::square(30.0), 0.1, Exec::default());
    assert!(cert.condition_i.passed, "{:?}", cert.condition_i);
    assert!(cert.condition_ii.passed, "{:?}", cert.condition_ii);
    assert_eq!(cert.condition_iii_bound, Some(2));
    assert_eq!(cert.min_gap, Gap::int(1));
    assert!(cert.passed);
}

#[test]
fn half_plane_fixture_fails_bounded_interiors() {
    let fam = CarlemanFamily { g_shape: GShape::UpperHalfPlane, ..CarlemanFamily::paper() };
    let cert = verify_structure(&fam, Window::square(20.0), 0.25, Exec::default());
    assert!(!cert.condition_iii_passed());
    assert!(!cert.passed);
}

#[test]
fn overlapping_disks_fail_disjointness() {
    let fam = CarlemanFamily { extra_disks: vec![(-6, 1)], ..CarlemanFamily::paper() };
    let cert = verify_structure(&fam, Window::square(20.0), 0.25, Exec::default());
    assert!(!cert.disjoint);
    assert!(!cert.passed);
    assert!(cert.condition_iii_passed());
}

#[test]
fn strategies_agree_on_certificate() {
    let certs: Vec<_> = Exec::all_strategies()
        .into_iter()
        .map(|e| verify_structure(&CarlemanFamily::paper(), Window::square(12.0), 0.2, e))
        .collect();
    assert!(certs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn gap_grows_with_no_index() {
    let fam = CarlemanFamily::paper();
    for k in [1, 5, 50, 500] {
        assert_eq!(min_separation(&fam, k), Gap::int(1));
    }
}

#[test]
fn empty_window_has_nothing_to_check() {
    let w = Window { min_re: 1.0, max_re: 1.0, min_im: 0.0, max_im: 0.0 };
    assert!(w.is_empty());
    let cert = verify_structure(&CarlemanFamily::paper(), w, 0.5, Exec::Sequential);
    assert_eq!(cert.condition_i.complement_cells, 0);
    assert!(cert.condition_ii.rings.is_empty());
}
