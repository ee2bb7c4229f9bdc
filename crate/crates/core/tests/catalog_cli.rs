use ckl_core::catalog::{example, EXAMPLES};
use ckl_core::ckl::{
    appendix_identity_check, bipyramid_volume_of_link, verify_ckl, verify_example, MethodKind, VerifyConfig,
};
use ckl_core::report::{run_report, Format, Selection, CSV_HEADER};
use ckl_core::special_functions::{V_OCT, V_TET};
use ckl_core::Error;

#[test]
fn link_volumes_from_face_multisets() {
    assert!((bipyramid_volume_of_link(&[3, 3, 6]).unwrap() - 10.0 * V_TET).abs() < 1e-9);
    assert!((bipyramid_volume_of_link(&[3, 3, 6]).unwrap() - 10.1494).abs() < 1e-4);
    let mut f = vec![12];
    f.extend([3; 8]);
    // quoted to four decimals from rounded bipyramid volumes
    assert!((bipyramid_volume_of_link(&f).unwrap() - 26.6109).abs() < 1e-3);
    assert_eq!(bipyramid_volume_of_link(&[2, 2]).unwrap(), 0.0);
    assert!(matches!(bipyramid_volume_of_link(&[3, 1]), Err(Error::BipyramidDegree(1))));
}

#[test]
fn equality_cases() {
    let config = VerifyConfig::default();
    let t = verify_ckl("triaxial", &config).unwrap();
    assert!((t.two_pi_m - 10.1494).abs() < 1e-4 && t.margin.abs() < 1e-4 && t.pass);
    assert!((t.vol_bipyramid - 10.0 * V_TET).abs() < 1e-9);
    assert!((t.gauge_shift.unwrap() + 3f64.ln()).abs() < 1e-12);
    let w = verify_ckl("weave", &config).unwrap();
    assert!((w.two_pi_m - 7.3277).abs() < 1e-4 && w.margin.abs() < 1e-4 && w.pass);
    assert!((w.vol_bipyramid - 2.0 * V_OCT).abs() < 1e-9);
    assert_eq!(w.methods.len(), 4);
}

#[test]
fn strict_margins_match_the_quoted_differences() {
    let config = VerifyConfig { methods: vec![MethodKind::Jensen], ..VerifyConfig::default() };
    for (name, diff) in [
        ("three-twelve-twelve", 27.164592 - 26.6109),
        ("nine", 18.859756 - 18.7326),
        ("four-eight-eight", 19.7715323218 - 19.6379),
        ("kite", 42.287446 - 41.6207),
    ] {
        let r = verify_ckl(name, &config).unwrap();
        assert!(r.margin > 0.0 && r.pass, "{name}");
        assert!((r.margin - diff).abs() < 5e-3, "{name}: {} vs {diff}", r.margin);
    }
    let k = verify_ckl("kite", &config).unwrap();
    assert!((k.two_pi_m - 42.287446).abs() < 1e-5 && (k.vol_bipyramid - 41.6207).abs() < 5e-3);
}

#[test]
fn rhombitrihexagonal_uses_derived_faces() {
    let ex = example("rhombitrihexagonal").unwrap();
    assert_eq!(ex.face_degrees.as_deref(), Some(&[6, 4, 4, 4, 3, 3][..]));
    let r = verify_ckl("rhombitrihexagonal", &VerifyConfig::default()).unwrap();
    assert!((r.two_pi_m - 21.407368).abs() < 1e-5);
    assert!(r.margin > 0.0 && r.pass);
}

#[test]
fn disagreement_and_missing_volume_are_errors() {
    let strict = VerifyConfig { agreement: 1e-14, ..VerifyConfig::default() };
    assert!(matches!(verify_ckl("kite", &strict), Err(Error::MethodDisagreement { .. })));
    let mut ex = example("nine").unwrap();
    ex.face_degrees = None;
    ex.expected.vol_bipyramid = None;
    let jensen = VerifyConfig { methods: vec![MethodKind::Jensen], ..VerifyConfig::default() };
    assert!(matches!(verify_example(&ex, &jensen), Err(Error::MissingVolume(_))));
    ex.expected.vol_bipyramid = Some(18.7326);
    assert_eq!(verify_example(&ex, &jensen).unwrap().vol_bipyramid, 18.7326);
    assert!(matches!(verify_ckl("foo", &jensen), Err(Error::UnknownExample(_))));
}

#[test]
fn full_report() {
    let r = run_report(&Selection::all(), &VerifyConfig::default()).unwrap();
    assert_eq!(r.examples.len(), 7);
    assert!(r.pass && r.appendix.as_ref().unwrap().pass);
    let mut names: Vec<&str> = EXAMPLES.to_vec();
    names.sort_unstable();
    assert_eq!(r.examples.iter().map(|e| e.example.as_str()).collect::<Vec<_>>(), names);

    let mut csv = Vec::new();
    r.write(Format::Csv, &mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), 8);

    let mut json = Vec::new();
    r.write(Format::Json, &mut json).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v["examples"].as_array().unwrap().len(), 7);
    assert!(v["appendix"]["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn appendix_identities() {
    let r = appendix_identity_check(1e-9).unwrap();
    let find = |prefix: &str| r.checks.iter().find(|c| c.name.starts_with(prefix)).unwrap();
    assert!(find("log(17+12*sqrt2) = 4").residual < 1e-12);
    assert!(find("8D(").residual < 1e-9);
    assert!((find("dilogarithm form = 19").lhs - 19.7715323218).abs() < 1e-9);
    assert!(matches!(appendix_identity_check(0.0), Err(Error::AppendixResidual { .. })));
}
