//! Replays the bundled SNOW 3G known-answer file (keystream words derived
//! from the 3GPP TS 35.217 confidentiality test data).

use snowlab_core::vectors::{parse_vector_file, run_entry, CaseOutcome};

fn vector_text() -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/vectors_snow3g.txt");
    std::fs::read_to_string(path).expect("vector file present in the repository")
}

#[test]
fn published_keystream_vectors_pass() {
    let entries = parse_vector_file(&vector_text()).unwrap();
    assert!(entries.len() >= 2, "expected both reference entries");
    for entry in &entries {
        assert_eq!(
            run_entry(entry).unwrap(),
            CaseOutcome::Pass,
            "entry at line {} diverged",
            entry.line
        );
    }
}

#[test]
fn corrupting_a_reference_word_is_detected() {
    let mut entries = parse_vector_file(&vector_text()).unwrap();
    let entry = &mut entries[0];
    entry.ks[3] ^= 1;
    match run_entry(entry).unwrap() {
        CaseOutcome::Mismatch { index: 3, expected, actual } => {
            assert_eq!(expected ^ 1, actual);
        }
        other => panic!("expected a word-3 mismatch, got {other:?}"),
    }
}
