//! Bundled example files must stay byte-stable.

use std::path::PathBuf;
use std::sync::Arc;

use nflrc::code_params::CodeSpec;
use nflrc::codec;
use nflrc::wire;
use nflrc::NumberField;

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn read(name: &str) -> Vec<u8> {
    std::fs::read(testdata(name)).unwrap()
}

fn spec() -> CodeSpec {
    serde_json::from_slice(&read("example_spec.json")).unwrap()
}

#[test]
fn field_file_round_trips() {
    let text = String::from_utf8(read("example_field.json")).unwrap();
    let k: NumberField = serde_json::from_str(&text).unwrap();
    assert_eq!(k, NumberField::from_i64(&[2, 0, -4, 0]).unwrap());
    assert_eq!(serde_json::to_string_pretty(&k).unwrap() + "\n", text);
}

#[test]
fn spec_file_is_reproduced() {
    let k = Arc::new(NumberField::from_i64(&[2, 0, -4, 0]).unwrap());
    let fresh = CodeSpec::from_primes(k, 3, 3, 2u32.into(), &[17, 31, 47]).unwrap();
    assert_eq!(spec(), fresh);
    let text = serde_json::to_string_pretty(&fresh).unwrap() + "\n";
    assert_eq!(text.as_bytes(), read("example_spec.json"));
}

#[test]
fn reference_codewords_are_reproduced() {
    let spec = spec();
    let msgs: Vec<_> = b"LRC"
        .chunks(codec::capacity_bytes(&spec))
        .map(|c| codec::msg_from_bytes(&spec, c).unwrap())
        .collect();
    let bytes = wire::to_bytes(&codec::encode_many(&spec, &msgs)).unwrap();
    assert_eq!(bytes, read("example.nflc"));
}

#[test]
fn reference_codewords_decode() {
    let spec = spec();
    let records = wire::from_bytes(&read("example.nflc")).unwrap();
    assert_eq!(records.len(), 3);
    let mut out = Vec::new();
    for cw in &records {
        assert!(codec::verify(&spec, cw));
        out.extend(codec::msg_to_bytes(&spec, &codec::global_decode(&spec, cw).unwrap()).unwrap());
    }
    assert_eq!(out, b"LRC");
}

#[test]
fn tampered_derived_block_is_rejected() {
    let text = String::from_utf8(read("example_spec.json")).unwrap();
    let bad = text.replace("\"m\": 8", "\"m\": 7");
    assert_ne!(bad, text);
    assert!(serde_json::from_str::<CodeSpec>(&bad).is_err());
}
