//! Checked-in renderings of the worked examples. Set `VERTMUL_UPDATE_GOLDEN=1`
//! to rewrite them after an intentional format change.

use std::fs;
use std::path::PathBuf;

use vertmul::digits::parse_number;
use vertmul::trace::{golden_corpus, render_trace, trace_vertical, TraceFormat, TraceOptions};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(file: &str, actual: &str) {
    let path = golden_dir().join(file);
    if std::env::var_os("VERTMUL_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {file}");
}

#[test]
fn corpus_text_goldens() {
    for example in golden_corpus().unwrap() {
        check(&format!("{}.txt", example.name), &render_trace(&example.trace, TraceFormat::Text));
    }
}

#[test]
fn other_formats() {
    let a = parse_number("67", 10).unwrap().1;
    let b = parse_number("89", 10).unwrap().1;
    let t = trace_vertical(&a, &b, TraceOptions::default()).unwrap();
    check("vertical_67x89.md", &render_trace(&t, TraceFormat::Markdown));
    check("vertical_67x89.json", &render_trace(&t, TraceFormat::Json));
}

#[test]
fn goldens_keep_the_self_consistent_tares() {
    let read = |name: &str| fs::read_to_string(golden_dir().join(name)).unwrap();
    assert!(read("vertical_6789x6789.txt").contains("(0,1,4,10,4,1,0) = 150410"));
    assert!(read("vertical_67x89.txt").lines().any(|l| l == "tare: 10"));
    assert!(read("vertical_6162x8384_s2.txt").contains("(0,1,0) = (01,00)"));
}

#[test]
fn goldens_annotate_the_two_inconsistencies() {
    let read = |name: &str| fs::read_to_string(golden_dir().join(name)).unwrap();
    let t = read("vertical_4657x86.txt");
    assert!(t.contains("note: the worked solution labels its subtraction with (0,0,1,5,0,4,1,0)"));
    assert!(t.lines().any(|l| l == "tare: 90560"));
    let t = read("binary_111101x101011_identity.txt");
    assert!(t.contains("would count the pair (0,1) twice at i = 0"));
}
