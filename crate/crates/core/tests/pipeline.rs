//! Document in, ML degree out.

use mldeg_core::faces::{classify_face, FaceCase};
use mldeg_core::ml::{build_ml_system, hat_transform, ml_degree_mixed_volume};
use mldeg_core::model::{parse_system, serialize_system, DataVector, RandomSeed};
use mldeg_core::polytope::WeightVector;
use mldeg_core::solver::{solve_ml_system, TrackerConfig};
use mldeg_core::{Error, ErrorClass};

const QUARTIC: &str = r#"{
  "n": 2,
  "polynomials": [{"terms": [
    {"exponent": [4, 0], "re": "2", "im": "0"},
    {"exponent": [0, 3], "re": "3", "im": "0"},
    {"exponent": [0, 0], "re": "-5", "im": "0"}
  ]}],
  "u": ["0.75", "1.25"],
  "seed": 8
}"#;

#[test]
fn document_to_ml_degree() {
    let doc = parse_system(QUARTIC).unwrap();
    let u = doc.u.unwrap();
    let seed = doc.seed.unwrap();
    assert_eq!(ml_degree_mixed_volume(&doc.system, &u, seed).unwrap(), 12);
    let r = solve_ml_system(&doc.system, &u, seed, &TrackerConfig::default()).unwrap();
    assert_eq!((r.count, r.mixed_volume, r.agreement), (12, 12, true));
    assert_eq!(r.variables, ["x1", "x2", "lambda1"]);
}

#[test]
fn ml_system_document_round_trips() {
    let doc = parse_system(QUARTIC).unwrap();
    let ml = build_ml_system(&doc.system, doc.u.as_ref().unwrap()).unwrap();
    let text = serialize_system(ml.equations(), None, Some(RandomSeed(8)));
    let back = parse_system(&text).unwrap();
    assert_eq!(&back.system, ml.equations());
    assert_eq!(back.seed, Some(RandomSeed(8)));
}

#[test]
fn exact_data_enters_the_constant_term() {
    let doc = parse_system(QUARTIC).unwrap();
    let ml = build_ml_system(&doc.system, doc.u.as_ref().unwrap()).unwrap();
    let text = serialize_system(ml.equations(), None, None);
    assert!(text.contains("\"3/4\""), "{text}");
    assert!(text.contains("\"5/4\""), "{text}");
}

#[test]
fn hat_of_parsed_document_classifies() {
    let doc = parse_system(QUARTIC).unwrap();
    let f_hat = hat_transform(&doc.system).unwrap();
    let ml = build_ml_system(&f_hat, &DataVector::sample(2, RandomSeed(1))).unwrap();
    let case = |w: [i64; 3]| classify_face(&ml, &WeightVector(w.to_vec())).unwrap().case;
    assert_eq!(case([-3, 14, 3]), FaceCase::Origin);
    assert_eq!(case([-3, -4, 3]), FaceCase::PureFaceMix);
    assert_eq!(case([-3, 12, 3]), FaceCase::MixedWithOrigin);

    // The un-hatted system is refused rather than silently transformed.
    let plain = build_ml_system(&doc.system, &DataVector::sample(2, RandomSeed(1))).unwrap();
    assert!(matches!(
        classify_face(&plain, &WeightVector(vec![1, 0, 0])),
        Err(Error::NotHatForm { index: 0 })
    ));
}

#[test]
fn malformed_documents_are_input_errors() {
    let cases = [
        (r#"{"n": 1, "polynomials": [{"terms": [{"exponent": [-1], "re": "1", "im": "0"}]}]}"#, "negative exponent"),
        (r#"{"n": 1, "polynomials": [{"terms": [{"exponent": [1, 0], "re": "1", "im": "0"}]}]}"#, "length"),
        (r#"{"n": 1, "polynomials": [{"terms": [{"exponent": [1], "re": "0", "im": "0"}]}]}"#, "zero coefficient"),
        (r#"{"n": 1, "polynomials": []}"#, "no polynomials"),
        (r#"{"n": 1, "polynomials": [{"terms": [{"exponent": [1], "re": "1", "im": "0"}]}], "u": ["-1"]}"#, "positive"),
        (r#"{"n": 1"#, "malformed"),
    ];
    for (text, needle) in cases {
        let e = parse_system(text).unwrap_err();
        assert_eq!(e.class(), ErrorClass::Input);
        assert!(e.to_string().contains(needle), "{e} lacks {needle:?}");
    }
}
