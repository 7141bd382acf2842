use serde_json::Value;

use xi_core::pseudocover::crosscheck::hull_intersections;
use xi_core::pseudocover::verify::verify_bundle;
use xi_core::pseudocover::{build_h, pi_projection, restrict_pseudocovering, BuildConfig, LabelPredicate, PcTruncation};
use xi_core::suite;
use xi_core::topology::XiWindow;

#[test]
fn f_claims_in_five_dimensions() {
    let checks = suite::f_claims(1, 2).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
}

#[test]
fn n1_depth1_round_trip() {
    let cfg = BuildConfig {
        n: 1,
        depth: 1,
        seed: 11,
        ..Default::default()
    };
    let (bundle, checks) = suite::pc_certify(&cfg, 2000).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    assert_eq!(bundle.pieces.len(), 32);
}

#[test]
fn verifier_reads_text_only() {
    let bundle = build_h(&BuildConfig { depth: 2, seed: 5, ..Default::default() }).unwrap();
    let text = serde_json::to_string(&bundle).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let rep = verify_bundle(&v);
    assert!(rep.pass(), "{:?}", rep.failures);
    assert_eq!(rep.pieces, 72);

    // moving one target by 1/1024 breaks the recorded mod-V data or the estimates
    let mut bad = v.clone();
    let piece = &mut bad["pieces"][40];
    let t = piece["target"][0].as_str().unwrap().to_string();
    piece["target"][0] = Value::String(if t == "0" { "1/1024".into() } else { "0".into() });
    assert!(!verify_bundle(&bad).pass());
}

#[test]
fn hulls_meet_only_on_faces_for_several_seeds() {
    for seed in 0..4 {
        let bundle = build_h(&BuildConfig { depth: 2, seed, ..Default::default() }).unwrap();
        let h = hull_intersections(&bundle);
        assert!(h.violations.is_empty(), "seed {seed}: {:?}", h.violations);
        assert_eq!(h.pairs, 72 * 71 / 2);
    }
}

#[test]
fn truncation_restricts_and_projects() {
    let bundle = build_h(&BuildConfig { depth: 2, seed: 3, ..Default::default() }).unwrap();
    let pc = PcTruncation::from_bundle(&bundle, 8, 3).unwrap();
    let w = XiWindow::integer_range(1, 2).unwrap();
    let (even, certs) = restrict_pseudocovering(&pc, &LabelPredicate::Even, w.window(), 4).unwrap();
    assert!(certs.iter().all(|c| c.pass));
    assert!(even.fibers.keys().all(|p| LabelPredicate::Even.holds(p)));
    let proj = pi_projection(&pc.thin(6, 8), &w).unwrap();
    assert!(proj.certificate.pass, "{:?}", proj.certificate);
    assert!(proj.map.is_surjective());
}
