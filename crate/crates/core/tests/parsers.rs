//! Parser properties shared with the fuzz targets, replayed over the checked-in
//! corpus and over random strings.

use std::fs;
use std::path::Path;

use proptest::prelude::*;
use ptseries::io::{parse_moments, parse_region, MAX_MOMENT};
use ptseries::precision::parse_real_bits;
use ptseries::series::CoefficientTable;

fn check_table(text: &str) {
    if let Ok(t) = CoefficientTable::from_text(text) {
        assert!(t.verify().is_ok());
        assert_eq!(CoefficientTable::from_text(&t.to_text()).unwrap(), t);
    }
}

fn check_real(text: &str) {
    if let Ok(x) = parse_real_bits(text, 128) {
        assert!(x.is_finite());
    }
}

fn check_region(text: &str) {
    if let Ok(r) = parse_region(text) {
        assert!(r.x0 < r.x1 && r.y0 < r.y1);
        assert!([r.x0, r.x1, r.y0, r.y1].iter().all(|v| v.is_finite()));
    }
}

fn check_moments(text: &str) {
    if let Ok(ms) = parse_moments(text) {
        assert!(!ms.is_empty() && ms.iter().all(|&m| m <= MAX_MOMENT));
        let mut s = ms.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), ms.len());
    }
}

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_seeds() {
    for (name, text) in corpus("table_text") {
        check_table(&text);
        let ok = CoefficientTable::from_text(&text).is_ok();
        assert_eq!(ok, name != "missing_rows", "{name}");
    }
    for (_, text) in corpus("parse_real") {
        check_real(&text);
        assert!(parse_real_bits(&text, 128).is_ok());
    }
    for (name, text) in corpus("parse_region") {
        check_region(&text);
        assert_eq!(parse_region(&text).is_ok(), name != "reversed", "{name}");
    }
    for (name, text) in corpus("parse_moments") {
        check_moments(&text);
        assert_eq!(parse_moments(&text).is_ok(), name != "dup", "{name}");
    }
}

#[test]
fn corrupted_table_rows_are_rejected() {
    let text = CoefficientTable::build(3, 6).unwrap().to_text();
    let lines: Vec<&str> = text.lines().collect();
    for i in 1..lines.len() {
        // drop one row
        let mut v = lines.clone();
        v.remove(i);
        assert!(CoefficientTable::from_text(&v.join("\n")).is_err());
        // duplicate one row
        let mut v = lines.clone();
        v.insert(i, lines[i]);
        assert!(CoefficientTable::from_text(&v.join("\n")).is_err());
    }
}

proptest! {
    #[test]
    fn random_text(s in "\\PC{0,80}") {
        check_table(&s);
        check_real(&s);
        check_region(&s);
        check_moments(&s);
    }

    #[test]
    fn numeric_looking_text(s in "[-+0-9.eE, ]{0,40}") {
        check_real(&s);
        check_region(&s);
        check_moments(&s);
    }

    #[test]
    fn table_like_text(rows in proptest::collection::vec("[0-9]{1,3} [0-9]{1,3} -?[0-9]{1,4} [0-9]{1,4} -?[0-9]{1,4} [0-9]{1,4}", 0..6)) {
        let text = format!("3 2\n{}", rows.join("\n"));
        check_table(&text);
    }
}
