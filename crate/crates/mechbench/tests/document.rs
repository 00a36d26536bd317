use std::fs;
use std::path::PathBuf;

use mechbench::document::{parse_instance, DocumentError};

fn fixtures() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
}

fn fixture(name: &str) -> String {
    fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(name),
    )
    .unwrap()
}

#[test]
fn round_trip_is_identity_on_fixtures() {
    let paths = fixtures();
    assert!(paths.len() >= 3);
    for p in paths {
        let first = parse_instance(&fs::read_to_string(&p).unwrap()).unwrap();
        let text = first.to_json();
        let second = parse_instance(&text).unwrap();
        assert_eq!(first, second, "{}", p.display());
        assert_eq!(second.to_json(), text, "{}", p.display());
    }
}

fn three_type_doc(prior: [&str; 3]) -> String {
    format!(
        r#"{{
  "format": "mechbench/1",
  "environment": {{
    "outcomes": ["x"],
    "agents": [{{ "types": ["a", "b", "c"], "utilities": [["0", "0", "0"]] }}],
    "prior": [
      {{ "profile": ["a"], "p": "{}" }},
      {{ "profile": ["b"], "p": "{}" }},
      {{ "profile": ["c"], "p": "{}" }}
    ]
  }},
  "mechanism": {{
    "strategy_format": "oral",
    "strategies": [["s"]],
    "outcome_fn": [{{ "profile": ["s"], "outcome": "x" }}]
  }}
}}"#,
        prior[0], prior[1], prior[2]
    )
}

#[test]
fn prior_not_summing_to_one_is_reported_exactly() {
    let err = parse_instance(&three_type_doc(["1/3", "1/3", "1/4"])).unwrap_err();
    match err {
        DocumentError::Invalid(v) => {
            let msgs: Vec<String> = v.iter().map(|v| v.to_string()).collect();
            assert_eq!(msgs, ["prior sums to 11/12"]);
        }
        other => panic!("unexpected {other}"),
    }
    assert!(parse_instance(&three_type_doc(["1/3", "1/3", "1/3"])).is_ok());
}

#[test]
fn negative_probability_is_a_violation() {
    let err = parse_instance(&three_type_doc(["-1/3", "2/3", "2/3"])).unwrap_err();
    let DocumentError::Invalid(v) = err else {
        panic!()
    };
    assert_eq!(v.len(), 1);
    assert!(v[0].to_string().contains("negative"), "{}", v[0]);
}

#[test]
fn empty_input_is_a_syntax_error() {
    assert!(matches!(
        parse_instance(""),
        Err(DocumentError::Syntax { .. })
    ));
    assert!(matches!(
        parse_instance("{"),
        Err(DocumentError::Syntax { .. })
    ));
}

#[test]
fn wrong_version_is_refused() {
    let text = fixture("g1.json").replace("mechbench/1", "mechbench/2");
    assert_eq!(
        parse_instance(&text),
        Err(DocumentError::Version("mechbench/2".into()))
    );
}

#[test]
fn unknown_fields_are_refused() {
    let text = fixture("g1.json").replace("\"designer_budget\"", "\"budget\"");
    assert!(parse_instance(&text).is_err());
}

#[test]
fn missing_outcome_entry_names_the_profile() {
    let text = fixture("g1.json").replace(
        "      { \"profile\": [\"b\", \"c\"], \"outcome\": \"x1\" }\n",
        "",
    );
    let text = text.replace("\"x0\" },\n    ]", "\"x0\" }\n    ]");
    let err = parse_instance(&text).unwrap_err();
    let DocumentError::Invalid(v) = err else {
        panic!("{err}")
    };
    assert_eq!(v.len(), 1);
    assert!(v[0].to_string().contains("(b, c)"), "{}", v[0]);
}

#[test]
fn bad_rational_points_at_the_field() {
    let text = fixture("g1.json").replace("\"p\": \"1/2\" }\n", "\"p\": \"0.5\" }\n");
    match parse_instance(&text) {
        Err(DocumentError::Field { path, .. }) => assert_eq!(path, "environment.prior[1].p"),
        other => panic!("{other:?}"),
    }
}
