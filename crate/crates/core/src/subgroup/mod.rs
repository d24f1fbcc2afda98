//! Finitely generated subgroups: Schreier generators of level stabilizers,
//! vertex sections, closure enumeration and the membership semi-decision.

mod finiteness;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::automorphism::Engine;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::preset::{Family, GroupPreset};
use crate::quotient::coset_separated;
use crate::vertex::Vertex;
use crate::word::Word;

pub use finiteness::{
    classify, is_finite_grigorchuk, is_finite_gs3, is_finite_gs3_with, replay_certificate, Certificate,
    CertificateProduct, Classification, DeciderConfig, FinitenessVerdict, GrigorchukCaps, StepKind, TraceStep,
};

/// A subgroup given by generator words. Trivial generators and exact
/// duplicates are dropped on construction.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    preset: Arc<GroupPreset>,
    generators: Vec<Word>,
    max_length: usize,
}

impl SubgroupSpec {
    pub fn new(engine: &Engine, generators: impl IntoIterator<Item = Word>) -> Self {
        let mut kept: Vec<Word> = Vec::new();
        for g in generators {
            if g.is_identity() || kept.contains(&g) {
                continue;
            }
            if engine.try_is_trivial(&g).unwrap_or(false) {
                continue;
            }
            kept.push(g);
        }
        let max_length = engine.preset().max_syllable_length(&kept);
        SubgroupSpec {
            preset: engine.shared_preset(),
            generators: kept,
            max_length,
        }
    }

    /// Parses a subgroup file: one word per line, `#` starts a comment.
    pub fn parse(engine: &Engine, text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (number, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let word = engine.word(content).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position,
                    message: format!("line {}: {message}", number + 1),
                },
                other => other,
            })?;
            words.push(word);
        }
        Ok(SubgroupSpec::new(engine, words))
    }

    pub fn preset(&self) -> &GroupPreset {
        &self.preset
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// Largest syllable length among the generators, the `D` of the recursion.
    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn in_stab1(&self, engine: &Engine) -> bool {
        self.generators.iter().all(|g| engine.in_stab1(g))
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.preset.format_word(g)).collect()
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.generator_strings().join(", "))
    }
}

/// Orbits of the level-1 action together with transversal words.
#[derive(Clone, Debug)]
pub struct Level1Orbits {
    pub orbits: Vec<Vec<usize>>,
    /// `transversal[x]` maps the least point of the orbit of `x` to `x`.
    pub transversal: Vec<Word>,
}

/// Generators in order of syllable length, each followed by its inverse,
/// so breadth-first transversals prefer short words such as `t` and `t⁻¹`.
fn search_letters(engine: &Engine, gens: &[Word]) -> Vec<(Word, Perm)> {
    let mut sorted: Vec<&Word> = gens.iter().collect();
    sorted.sort_by_key(|g| engine.syllable_length(g));
    sorted
        .into_iter()
        .flat_map(|g| {
            let inv = engine.preset().inverse(g);
            [g.clone(), inv]
        })
        .map(|w| {
            let root = engine.root_perm(&w);
            (w, root)
        })
        .collect()
}

pub fn level1_orbit_and_transversal(engine: &Engine, h: &SubgroupSpec) -> Level1Orbits {
    let p = engine.arity();
    let letters = search_letters(engine, h.generators());
    let mut transversal: Vec<Option<Word>> = vec![None; p];
    let mut orbits = Vec::new();
    for start in 0..p {
        if transversal[start].is_some() {
            continue;
        }
        transversal[start] = Some(Word::identity());
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (w, root) in &letters {
                let y = root.apply(x);
                if transversal[y].is_none() {
                    let word = engine.preset().mul(transversal[x].as_ref().unwrap(), w);
                    transversal[y] = Some(word);
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Level1Orbits {
        orbits,
        transversal: transversal.into_iter().map(Option::unwrap).collect(),
    }
}

fn push_schreier(engine: &Engine, out: &mut Vec<Word>, x: Word) {
    if x.is_identity() || out.contains(&x) || engine.try_is_trivial(&x).unwrap_or(false) {
        return;
    }
    out.push(x);
}

/// Schreier generators `u s u'⁻¹` of the kernel of the level-1 action,
/// with coset representatives indexed by the level-1 image.
pub fn stabilizer1_generators(engine: &Engine, h: &SubgroupSpec) -> Vec<Word> {
    if h.in_stab1(engine) {
        return h.generators().to_vec();
    }
    let preset = engine.preset();
    let letters = search_letters(engine, h.generators());
    let identity = Perm::identity(engine.arity());
    let mut reps: Vec<(Perm, Word)> = vec![(identity.clone(), Word::identity())];
    let mut index: HashMap<Perm, usize> = HashMap::from([(identity, 0)]);
    let mut next = 0;
    while next < reps.len() {
        let (sigma, u) = reps[next].clone();
        next += 1;
        for (w, root) in &letters {
            let tau = sigma.then(root);
            if !index.contains_key(&tau) {
                index.insert(tau.clone(), reps.len());
                reps.push((tau, preset.mul(&u, w)));
            }
        }
    }
    let mut out = Vec::new();
    for (sigma, u) in &reps {
        for s in h.generators() {
            let tau = sigma.then(&engine.root_perm(s));
            let v = &reps[index[&tau]].1;
            push_schreier(engine, &mut out, preset.product([u, s, &preset.inverse(v)]));
        }
    }
    out
}

/// Schreier generators of the stabilizer of a first-level vertex.
pub fn point_stabilizer_generators(engine: &Engine, h: &SubgroupSpec, point: usize) -> Vec<Word> {
    if h.in_stab1(engine) {
        return h.generators().to_vec();
    }
    let preset = engine.preset();
    let letters = search_letters(engine, h.generators());
    let mut transversal: Vec<Option<Word>> = vec![None; engine.arity()];
    transversal[point] = Some(Word::identity());
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for (w, root) in &letters {
            let y = root.apply(x);
            if transversal[y].is_none() {
                transversal[y] = Some(preset.mul(transversal[x].as_ref().unwrap(), w));
                queue.push_back(y);
            }
        }
    }
    let mut out = Vec::new();
    for (x, u) in transversal.iter().enumerate() {
        let Some(u) = u else { continue };
        for s in h.generators() {
            let y = engine.root_perm(s).apply(x);
            let v = transversal[y].as_ref().expect("orbit is closed");
            push_schreier(engine, &mut out, preset.product([u, s, &preset.inverse(v)]));
        }
    }
    out
}

/// `H_v`: sections at `v` of a generating set of the stabilizer of `v`,
/// computed one level at a time.
pub fn vertex_section_subgroup(engine: &Engine, h: &SubgroupSpec, v: &Vertex) -> SubgroupSpec {
    let mut current = h.clone();
    for &digit in v.path() {
        let stab = point_stabilizer_generators(engine, &current, digit as usize);
        let sections = stab
            .iter()
            .map(|x| engine.decompose(x).sections.swap_remove(digit as usize));
        current = SubgroupSpec::new(engine, sections);
    }
    current
}

/// Outcome of the first-level dichotomy for a subgroup with root action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Roadmap {
    /// A Schreier generator has a section with nontrivial root action at
    /// `vertex`, so every first-level vertex section is the whole group.
    SectionsEqualWholeGroup {
        vertex: usize,
        schreier_generator: Word,
        section: Word,
    },
    /// Every first-level vertex section lies in `St(1)`; `sections[u]` holds
    /// the section words at `u` of the Schreier generators.
    SectionsInStab1 { sections: Vec<Vec<Word>> },
}

pub fn roadmap_dichotomy(engine: &Engine, h: &SubgroupSpec) -> Result<Roadmap> {
    if h.in_stab1(engine) {
        return Err(Error::RequiresRootAction);
    }
    let x = stabilizer1_generators(engine, h);
    Ok(roadmap_from_schreier(engine, &x))
}

pub(crate) fn roadmap_from_schreier(engine: &Engine, x: &[Word]) -> Roadmap {
    let p = engine.arity();
    let decomposed: Vec<_> = x.iter().map(|g| engine.decompose(g)).collect();
    for u in 0..p {
        for (g, d) in x.iter().zip(&decomposed) {
            if !engine.in_stab1(&d.sections[u]) {
                return Roadmap::SectionsEqualWholeGroup {
                    vertex: u,
                    schreier_generator: g.clone(),
                    section: d.sections[u].clone(),
                };
            }
        }
    }
    Roadmap::SectionsInStab1 {
        sections: (0..p)
            .map(|u| decomposed.iter().map(|d| d.sections[u].clone()).collect())
            .collect(),
    }
}

/// Level at which elements are bucketed before the word problem is asked.
fn bucket_level(engine: &Engine) -> usize {
    let mut level = 1;
    while level < 8 {
        match engine.arity().checked_pow(level as u32 + 1) {
            Some(n) if n <= 128.min(engine.config().max_points) => level += 1,
            _ => break,
        }
    }
    level
}

/// A set of group elements, bucketed by a level action and compared with
/// the word problem inside a bucket.
pub(crate) struct ElementSet<'e> {
    engine: &'e Engine,
    level: usize,
    buckets: HashMap<Perm, Vec<Word>>,
    len: usize,
}

impl<'e> ElementSet<'e> {
    pub(crate) fn new(engine: &'e Engine) -> Self {
        ElementSet {
            engine,
            level: bucket_level(engine),
            buckets: HashMap::new(),
            len: 0,
        }
    }

    pub(crate) fn level(&self) -> usize {
        self.level
    }

    pub(crate) fn action(&self, g: &Word) -> Perm {
        self.engine
            .level_action(g, self.level)
            .expect("bucket level is within the point cap")
    }

    /// Inserts `g` with its precomputed bucket action; returns whether it was new.
    pub(crate) fn insert(&mut self, g: &Word, action: Perm) -> Result<bool> {
        let bucket = self.buckets.entry(action).or_default();
        for other in bucket.iter() {
            if self.engine.try_equal(g, other)? {
                return Ok(false);
            }
        }
        bucket.push(g.clone());
        self.len += 1;
        Ok(true)
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }
}

fn is_torsion(preset: &GroupPreset) -> bool {
    matches!(preset.family(), Family::GuptaSidki | Family::Grigorchuk)
}

/// Letters for products over generators: the generators, plus inverses for
/// presets not known to be torsion. Each entry records `(index, ±1)`.
fn product_letters(engine: &Engine, gens: &[Word]) -> Vec<((usize, i64), Word)> {
    let mut letters: Vec<((usize, i64), Word)> =
        gens.iter().enumerate().map(|(i, g)| ((i, 1), g.clone())).collect();
    if !is_torsion(engine.preset()) {
        letters.extend(gens.iter().enumerate().map(|(i, g)| ((i, -1), engine.preset().inverse(g))));
    }
    letters
}

/// Order of `H` by breadth-first closure, or `ExceedsCap` once more than
/// `cap` distinct elements have been seen.
pub fn enumerate_elements(engine: &Engine, h: &SubgroupSpec, cap: u64) -> Result<u64> {
    closure(engine, h.generators(), cap).map(|elements| elements.len() as u64)
}

pub(crate) fn closure(engine: &Engine, gens: &[Word], cap: u64) -> Result<Vec<Word>> {
    let preset = engine.preset();
    let mut set = ElementSet::new(engine);
    let level = set.level();
    let letters: Vec<(Word, Perm)> = product_letters(engine, gens)
        .into_iter()
        .map(|(_, w)| {
            let action = engine.level_action(&w, level).expect("bucket level is within the point cap");
            (w, action)
        })
        .collect();
    let identity = Word::identity();
    let id_action = set.action(&identity);
    set.insert(&identity, id_action.clone())?;
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([(identity, id_action)]);
    while let Some((x, action)) = queue.pop_front() {
        for (s, s_action) in &letters {
            let y = preset.mul(&x, s);
            let y_action = action.then(s_action);
            if set.insert(&y, y_action.clone())? {
                if set.len() as u64 > cap {
                    return Err(Error::ExceedsCap { cap });
                }
                elements.push(y.clone());
                queue.push_back((y, y_action));
            }
        }
    }
    Ok(elements)
}

/// Result of the membership semi-decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MembershipVerdict {
    /// `witness` lists `(generator index, ±1)` factors whose product equals the element.
    In { witness: Vec<(usize, i64)>, word: String },
    /// The images are separated in `G/St(level)`.
    NotIn { level: usize },
    Unknown { word_cap: usize, level_cap: usize },
}

impl MembershipVerdict {
    /// Evaluates an `In` witness over the generators of `k`.
    pub fn evaluate_witness(engine: &Engine, k: &SubgroupSpec, witness: &[(usize, i64)]) -> Word {
        let preset = engine.preset();
        let factors: Vec<Word> = witness
            .iter()
            .map(|&(i, e)| preset.pow(&k.generators()[i], e))
            .collect();
        preset.product(&factors)
    }
}

/// Largest number of distinct products kept per membership search.
const MEMBERSHIP_ELEMENT_CAP: usize = 50_000;

/// Dovetails a search for `h` among products of at most `word_cap`
/// generators of `k` with separation tests in `G/St(n)` for `n ≤ level_cap`.
pub fn membership(
    engine: &Engine,
    h: &Word,
    k: &SubgroupSpec,
    word_cap: usize,
    level_cap: usize,
) -> Result<MembershipVerdict> {
    let preset = engine.preset();
    if engine.try_is_trivial(h)? {
        return Ok(MembershipVerdict::In {
            witness: Vec::new(),
            word: "1".into(),
        });
    }
    let mut set = ElementSet::new(engine);
    let h_action = set.action(h);
    let letters: Vec<((usize, i64), Word, Perm)> = product_letters(engine, k.generators())
        .into_iter()
        .map(|(tag, w)| {
            let action = set.action(&w);
            (tag, w, action)
        })
        .collect();
    let identity = Word::identity();
    let id_action = set.action(&identity);
    set.insert(&identity, id_action.clone())?;
    let mut layer = vec![(identity, id_action, Vec::<(usize, i64)>::new())];
    let mut levels_open = true;
    for step in 1..=word_cap.max(level_cap) {
        if levels_open && step <= level_cap {
            match coset_separated(engine, h, k.generators(), step) {
                Ok(true) => return Ok(MembershipVerdict::NotIn { level: step }),
                Ok(false) => {}
                Err(Error::DepthLimit { .. }) => levels_open = false,
                Err(e) => return Err(e),
            }
        }
        if step > word_cap || layer.is_empty() {
            continue;
        }
        let mut next = Vec::new();
        for (x, action, path) in &layer {
            for (tag, s, s_action) in &letters {
                if set.len() >= MEMBERSHIP_ELEMENT_CAP {
                    break;
                }
                let y = preset.mul(x, s);
                let y_action = action.then(s_action);
                if !set.insert(&y, y_action.clone())? {
                    continue;
                }
                let mut y_path = path.clone();
                y_path.push(*tag);
                if y_action == h_action && engine.try_equal(&y, h)? {
                    let word = y_path
                        .iter()
                        .map(|&(i, e)| {
                            let g = preset.format_word(&k.generators()[i]);
                            let g = if g.chars().count() > 1 { format!("({g})") } else { g };
                            if e == 1 { g } else { format!("{g}^{e}") }
                        })
                        .collect::<Vec<_>>()
                        .join(" ");
                    return Ok(MembershipVerdict::In { witness: y_path, word });
                }
                next.push((y, y_action, y_path));
            }
        }
        layer = next;
    }
    Ok(MembershipVerdict::Unknown { word_cap, level_cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{grigorchuk, gupta_sidki};

    fn gs3() -> Engine {
        Engine::new(gupta_sidki(3).unwrap())
    }

    fn spec(e: &Engine, gens: &[&str]) -> SubgroupSpec {
        SubgroupSpec::new(e, gens.iter().map(|t| e.word(t).unwrap()))
    }

    fn contains_equal(e: &Engine, set: &[Word], want: &str) -> bool {
        let w = e.word(want).unwrap();
        set.iter().any(|x| e.equal(x, &w))
    }

    #[test]
    fn normalization_drops_identities() {
        let e = gs3();
        let h = spec(&e, &["a^3", "b", "b", "(a b)^9", "1"]);
        assert_eq!(h.generators().len(), 1);
        assert_eq!(h.max_length(), 1);
        let parsed = SubgroupSpec::parse(&e, "# comment\nb0 # first\n\n  b1\n").unwrap();
        assert_eq!(parsed.generator_strings(), ["b", "a^-1 b a"]);
        let err = SubgroupSpec::parse(&e, "a\nb (").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn level1_orbits() {
        let e = gs3();
        let o = level1_orbit_and_transversal(&e, &spec(&e, &["a", "b"]));
        assert_eq!(o.orbits, vec![vec![0, 1, 2]]);
        assert_eq!(e.show(&o.transversal[1]), "a");
        assert_eq!(e.show(&o.transversal[2]), "a^-1");
        let o = level1_orbit_and_transversal(&e, &spec(&e, &["b"]));
        assert_eq!(o.orbits.len(), 3);
        assert!(o.transversal.iter().all(Word::is_identity));
        let o = level1_orbit_and_transversal(&e, &spec(&e, &["b0 a"]));
        assert_eq!(o.orbits.len(), 1);
    }

    #[test]
    fn schreier_generators() {
        let e = gs3();
        assert!(stabilizer1_generators(&e, &spec(&e, &["a"])).is_empty());
        let x = stabilizer1_generators(&e, &spec(&e, &["a", "b"]));
        for want in ["b", "b1", "b2"] {
            assert!(contains_equal(&e, &x, want), "{want} missing");
        }
        let x = stabilizer1_generators(&e, &spec(&e, &["b0 a"]));
        assert!(!x.is_empty());
        let cube = e.word("(b0 a)^3").unwrap();
        for g in &x {
            assert!(e.equal(g, &cube) || e.equal(g, &e.preset().inverse(&cube)));
        }
        assert!(e.equal(&cube, &e.word("b0 b2 b1").unwrap()));
    }

    #[test]
    fn schreier_lengths_bounded() {
        let e = gs3();
        let h = spec(&e, &["b a", "b1 b2^-1 a^-1", "b0 b1"]);
        let d = h.max_length();
        for x in stabilizer1_generators(&e, &h) {
            assert!(e.in_stab1(&x));
            assert!(e.syllable_length(&x) <= 3 * d);
        }
    }

    #[test]
    fn vertex_sections() {
        let e = gs3();
        let v2 = Vertex::parse("2", 3).unwrap();
        let hb = vertex_section_subgroup(&e, &spec(&e, &["b"]), &v2);
        assert_eq!(hb.generator_strings(), ["b"]);
        let h = vertex_section_subgroup(&e, &spec(&e, &["b0", "b1"]), &v2);
        assert!(contains_equal(&e, h.generators(), "b"));
        assert!(contains_equal(&e, h.generators(), "a^-1"));
        let h = vertex_section_subgroup(&e, &spec(&e, &["a"]), &Vertex::parse("0", 3).unwrap());
        assert!(h.is_trivial());
    }

    #[test]
    fn dichotomy() {
        let e = gs3();
        assert!(matches!(
            roadmap_dichotomy(&e, &spec(&e, &["a", "b"])).unwrap(),
            Roadmap::SectionsEqualWholeGroup { .. }
        ));
        let Roadmap::SectionsInStab1 { sections } = roadmap_dichotomy(&e, &spec(&e, &["b0 a"])).unwrap() else {
            panic!("expected sections in St(1)");
        };
        assert!(sections.iter().flatten().all(|s| e.in_stab1(s)));
        assert_eq!(roadmap_dichotomy(&e, &spec(&e, &["b"])), Err(Error::RequiresRootAction));
    }

    #[test]
    fn enumeration() {
        let e = gs3();
        assert_eq!(enumerate_elements(&e, &spec(&e, &["a"]), 10), Ok(3));
        assert_eq!(enumerate_elements(&e, &spec(&e, &["b b1 b2"]), 10), Ok(3));
        assert_eq!(
            enumerate_elements(&e, &spec(&e, &["b0", "b1"]), 100),
            Err(Error::ExceedsCap { cap: 100 })
        );
        assert_eq!(enumerate_elements(&e, &spec(&e, &[]), 1), Ok(1));
        let g = Engine::new(grigorchuk());
        assert_eq!(enumerate_elements(&g, &spec(&g, &["b", "c"]), 10), Ok(4));
        assert_eq!(enumerate_elements(&g, &spec(&g, &["a", "d"]), 100), Ok(8));
    }

    #[test]
    fn membership_examples() {
        let e = gs3();
        let v = membership(&e, &e.word("a^2").unwrap(), &spec(&e, &["a"]), 6, 3).unwrap();
        assert_eq!(
            v,
            MembershipVerdict::In {
                witness: vec![(0, 1), (0, 1)],
                word: "a a".into()
            }
        );
        let v = membership(&e, &e.word("a").unwrap(), &spec(&e, &["b0", "b1", "b2"]), 6, 3).unwrap();
        assert_eq!(v, MembershipVerdict::NotIn { level: 1 });
        let v = membership(&e, &e.word("b").unwrap(), &spec(&e, &["a"]), 6, 3).unwrap();
        assert_eq!(v, MembershipVerdict::NotIn { level: 2 });
        let k = spec(&e, &["b0", "b1 a"]);
        let h = e.word("b0 b1 a b0").unwrap();
        let MembershipVerdict::In { witness, .. } = membership(&e, &h, &k, 6, 3).unwrap() else {
            panic!("expected a witness");
        };
        assert!(e.equal(&MembershipVerdict::evaluate_witness(&e, &k, &witness), &h));
    }
}
