use negforge::{
    emit_conllu, is_negated, negate, parse_conllu, Branch, NegationEngine, NegatorOptions,
    ParserProvider,
};

const FIXTURE: &str = include_str!("fixtures/table2.conllu");

fn options(prefer_contractions: bool) -> NegatorOptions {
    NegatorOptions { prefer_contractions }
}

#[test]
fn external_style_parses_reproduce_table_rows() {
    let doc = parse_conllu(FIXTURE).unwrap();
    let expected = [
        ("I knew what to do.", Branch::RemoveDo, true),
        ("I have been to Paris.", Branch::RemoveCue, true),
        ("I did not enjoy it so much.", Branch::AddDo, false),
        ("I won't be there.", Branch::NegateFirstAux, true),
        ("I'm not very hungry.", Branch::NegateRootAux, true),
        ("Ray Charles isn't legendary.", Branch::NegateRootAux, true),
    ];
    assert_eq!(doc.sentences.len(), expected.len());
    for (sentence, (text, branch, contract)) in doc.sentences.iter().zip(expected) {
        let out = negate(sentence, &options(contract)).unwrap();
        assert_eq!(out.text, text, "{}", sentence.text());
        assert_eq!(out.branch, branch, "{}", sentence.text());
        assert_eq!(is_negated(sentence), branch.removes_negation());
    }
}

#[test]
fn fixture_provider_looks_up_by_text() {
    let provider = ParserProvider::from_conllu_str(FIXTURE).unwrap();
    let engine = NegationEngine::new(provider, options(true));
    let out = engine.negate_text("I didn't know what to do.").unwrap();
    assert_eq!(out.text, "I knew what to do.");
}

#[test]
fn fixture_emits_byte_identical() {
    assert_eq!(emit_conllu(&parse_conllu(FIXTURE).unwrap()), FIXTURE);
}

#[test]
fn external_command_provider_reads_conllu_from_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("parse.conllu");
    std::fs::write(&path, FIXTURE).unwrap();
    // ignores its input and replays the fixture
    let cmd = format!("cat > /dev/null; cat '{}'", path.display());
    let engine = NegationEngine::new(ParserProvider::ExternalCommand(cmd), options(true));
    let inputs = [
        "I didn't know what to do.",
        "I have never been to Paris.",
        "I enjoyed it so much.",
        "I will be there.",
        "I'm very hungry.",
        "Ray Charles is legendary.",
    ];
    let out = engine.negate_batch(&inputs);
    assert_eq!(out[3].as_ref().unwrap().text, "I won't be there.");
    assert_eq!(out[5].as_ref().unwrap().text, "Ray Charles isn't legendary.");
}

#[test]
fn failing_external_command_is_a_parse_error() {
    let engine = NegationEngine::new(ParserProvider::ExternalCommand("exit 3".into()), options(true));
    let err = engine.negate_text("I will be there.").unwrap_err();
    assert!(err.to_string().starts_with("parse stage:"), "{err}");
}
