use branchgroups_core::quotient::{generator_set_hash, parse_golden};
use branchgroups_core::{builtin, quotient, Engine, Word};

const GOLDEN: &str = include_str!("golden/quotient_orders.txt");

const GENERATOR_SETS: &[&[&str]] = &[
    &["a", "b"],
    &["b0", "b1", "b2"],
    &["b0", "b1"],
    &["a", "b0 b1 b2"],
    &["a", "b", "c", "d"],
];

#[test]
fn quotient_orders_match_golden_file() {
    let entries = parse_golden(GOLDEN).unwrap();
    assert!(entries.len() >= 20);
    for entry in entries {
        let gens = GENERATOR_SETS
            .iter()
            .find(|g| generator_set_hash(g) == entry.generators_hash)
            .unwrap_or_else(|| panic!("no generator set hashes to {:016x}", entry.generators_hash));
        let engine = Engine::new(builtin(&entry.preset).unwrap());
        let words: Vec<Word> = gens.iter().map(|g| engine.word(g).unwrap()).collect();
        let order = quotient(&engine, &words, entry.level).unwrap().order();
        assert_eq!(order, entry.order, "{} level {} generators {gens:?}", entry.preset, entry.level);
    }
}

#[test]
fn golden_lines_round_trip() {
    for entry in parse_golden(GOLDEN).unwrap() {
        assert_eq!(entry.to_string().parse::<branchgroups_core::quotient::GoldenEntry>().unwrap(), entry);
    }
}
