use nilrep_cli::build::Built;
use nilrep_cli::catalog::*;
use nilrep_cli::parse::{parse_str, CatalogError};
use nilrep_cli::DEFAULT_CATALOG;

#[test]
fn empty_file() {
    let c = parse_str("").unwrap();
    assert!(c.is_empty());
    assert!(parse_str("# only a comment\n\n").unwrap().is_empty());
}

#[test]
fn ring_and_ideal() {
    let c = parse_str("ring R1 rank=1 char=5\nideal I1 in R1 = x1^2 - 2\n").unwrap();
    assert_eq!(c.len(), 2);
    match &c.entries[1].kind {
        EntryKind::Ideal(i) => {
            assert_eq!(i.ring, "R1");
            assert_eq!(i.gens, vec!["x1^2 - 2".to_string()]);
        }
        k => panic!("unexpected entry {k:?}"),
    }
    let b = Built::from_catalog(&c).unwrap();
    assert_eq!(b.ideals["I1"].generators.len(), 1);
}

#[test]
fn dangling_reference() {
    let e = parse_str("ideal I1 in R9 = x1 - 1\n").unwrap_err();
    assert!(matches!(e, CatalogError::DanglingReference { line: 1, ref name, .. } if name == "R9"));
    let e = parse_str("group G\ngens a b\nsubgroup H of G = a*z\n").unwrap_err();
    assert!(matches!(e, CatalogError::DanglingReference { line: 3, ref name, .. } if name == "z"));
}

#[test]
fn duplicate_name() {
    let e = parse_str("ring R rank=1 char=5\nring R rank=2 char=5\n").unwrap_err();
    assert_eq!(e, CatalogError::DuplicateName { line: 2, name: "R".into() });
}

#[test]
fn syntax_errors_are_located() {
    let e = parse_str("ring R rank=x char=5\n").unwrap_err();
    assert_eq!(e, CatalogError::SyntaxError { line: 1, column: 13, expected: "an integer".into() });
    let e = parse_str("\n\nfrobnicate X\n").unwrap_err();
    assert!(matches!(e, CatalogError::SyntaxError { line: 3, column: 1, .. }));
    let e = parse_str("ring R rank=1 char=5\nideal I in R = x1^2 - , x1\n").unwrap_err();
    assert!(matches!(e, CatalogError::SyntaxError { line: 2, .. }));
    let e = parse_str("act x = [[1]]\n").unwrap_err();
    assert!(matches!(e, CatalogError::SyntaxError { line: 1, .. }));
}

#[test]
fn invalid_entries_report_their_line() {
    let c = parse_str("group G\ngens a b\npow a^2 = b*a\n").unwrap();
    assert!(matches!(Built::from_catalog(&c), Err(CatalogError::Invalid { line: 1, .. })));
    let c = parse_str("group G\ngens x\nmodule M over G field=GF(5) dim=1\n").unwrap();
    assert!(matches!(Built::from_catalog(&c), Err(CatalogError::Invalid { line: 3, .. })));
}

#[test]
fn default_catalog_builds_and_round_trips() {
    let c = parse_str(DEFAULT_CATALOG).unwrap();
    let b = Built::from_catalog(&c).unwrap();
    assert_eq!(b.groups.len(), 6);
    assert!(c.cases().filter(|(_, k)| matches!(k.body, CaseBody::Lemma7 { .. })).count() >= 25);
    let again = parse_str(&c.render()).unwrap();
    assert_eq!(again, c);
    assert_eq!(again.render(), c.render());
}

#[test]
fn expectations_keep_the_whole_tail() {
    let c = parse_str(DEFAULT_CATALOG).unwrap();
    let (_, case) = c.cases().find(|(_, k)| k.name == "DLemma8").unwrap();
    assert_eq!(case.expect.as_deref(), Some("HypothesisFailed(2,\"unique P\")"));
}
