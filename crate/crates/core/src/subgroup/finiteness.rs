//! Finiteness of finitely generated subgroups.
//!
//! For the Gupta–Sidki 3-group the decision recurses on vertex sections,
//! driven by the syllable length `D` of the generators: at most one syllable
//! is settled by a case table, a subgroup of `St(1)` splits into its three
//! first-level sections, and otherwise either some first-level section has
//! root action (and then every first-level section is the whole group) or
//! the second-level sections below some first-level vertex are generated by
//! strictly shorter words. A subgroup is infinite exactly when some vertex
//! section is the whole group, and infinite verdicts carry a replayable
//! certificate for such a vertex.
//!
//! For the Grigorchuk group only a two-sided semi-decision is available:
//! terminating closure enumeration certifies finiteness, and a vertex section
//! containing all four generators certifies infiniteness.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{
    closure, enumerate_elements, roadmap_from_schreier, stabilizer1_generators, vertex_section_subgroup,
    ElementSet, Roadmap, SubgroupSpec,
};
use crate::automorphism::Engine;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::preset::Family;
use crate::vertex::Vertex;
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct DeciderConfig {
    /// Closure cap for the order attached to finite verdicts.
    pub order_cap: u64,
    /// Sweeps of pairwise products in the shortening pass.
    pub shortening_sweeps: usize,
    /// Distinct products explored when searching for a certificate.
    pub certificate_budget: usize,
    /// Recursion nodes visited before giving up with an unknown verdict.
    pub max_nodes: usize,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            order_cap: 20_000,
            shortening_sweeps: 2,
            certificate_budget: 4_000,
            max_nodes: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Normalize,
    BaseCase,
    Descend,
    Schreier,
    Roadmap,
    SecondLevel,
    Shorten,
    Memo,
    Order,
    Certificate,
}

/// One recursion step: where it happened and the generators before and after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub vertex: Vertex,
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub note: String,
}

/// A product of generators of a vertex section, with its claimed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateProduct {
    /// `(generator index, ±1)` factors, applied left to right.
    pub factors: Vec<(usize, i64)>,
    pub value: String,
}

/// Evidence that the vertex section at the witness vertex is the whole group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Products of the section generators equal to elements that generate
    /// the group: a nontrivial power of `a` and a nontrivial power of some
    /// `b_i` for Gupta–Sidki, each of `a, b, c, d` for Grigorchuk.
    Generates {
        generators: Vec<String>,
        products: Vec<CertificateProduct>,
    },
    /// The section at `parent` has root action, and the section at `digit`
    /// of one of its first-level Schreier generators has root action too, so
    /// every first-level section below `parent` is the whole group.
    Roadmap {
        parent: Vertex,
        digit: u8,
        schreier_generator: String,
        section: String,
    },
    /// No certificate could be produced within the budget.
    Missing { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FinitenessVerdict {
    /// `order` is the closure count, absent when it exceeded the configured cap.
    Finite { order: Option<u64>, trace: Vec<TraceStep> },
    Infinite {
        witness: Vertex,
        certificate: Certificate,
        trace: Vec<TraceStep>,
    },
    Unknown { reason: String, trace: Vec<TraceStep> },
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessVerdict::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, FinitenessVerdict::Infinite { .. })
    }

    pub fn trace(&self) -> &[TraceStep] {
        match self {
            FinitenessVerdict::Finite { trace, .. }
            | FinitenessVerdict::Infinite { trace, .. }
            | FinitenessVerdict::Unknown { trace, .. } => trace,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FinitenessVerdict::Finite { .. } => "FINITE",
            FinitenessVerdict::Infinite { .. } => "INFINITE",
            FinitenessVerdict::Unknown { .. } => "UNKNOWN",
        }
    }
}

/// Shape of a word with at most one syllable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ShortForm {
    /// `a^k`
    Rooted(u8),
    /// `b_i^r`
    Directed(u8, u8),
    /// `b_i^r a`, after inverting `b_i^r a^2`
    Mixed(u8, u8),
}

struct Gs3Decider<'e> {
    engine: &'e Engine,
    config: &'e DeciderConfig,
    /// Normalized generator set to the relative witness, `None` when finite.
    memo: HashMap<Vec<Word>, Option<Vertex>>,
    active: HashSet<Vec<Word>>,
    trace: Vec<TraceStep>,
    nodes: usize,
}

impl<'e> Gs3Decider<'e> {
    fn show_all(&self, gens: &[Word]) -> Vec<String> {
        gens.iter().map(|g| self.engine.show(g)).collect()
    }

    fn step(&mut self, kind: StepKind, vertex: &Vertex, before: &[Word], after: &[Word], note: impl Into<String>) {
        let step = TraceStep {
            kind,
            vertex: vertex.clone(),
            before: self.show_all(before),
            after: self.show_all(after),
            note: note.into(),
        };
        self.trace.push(step);
    }

    fn normalize(&self, gens: Vec<Word>) -> Result<Vec<Word>> {
        let mut kept = Vec::new();
        for g in gens {
            if g.is_identity() || kept.contains(&g) || self.engine.try_is_trivial(&g)? {
                continue;
            }
            kept.push(g);
        }
        Ok(kept)
    }

    fn key(&self, gens: &[Word]) -> Vec<Word> {
        let preset = self.engine.preset();
        let mut key: Vec<Word> = gens
            .iter()
            .map(|g| {
                let inv = preset.inverse(g);
                if inv < *g { inv } else { g.clone() }
            })
            .collect();
        key.sort();
        key.dedup();
        key
    }

    fn max_len(&self, gens: &[Word]) -> usize {
        self.engine.preset().max_syllable_length(gens)
    }

    fn decide(&mut self, gens: Vec<Word>, at: &Vertex) -> Result<Option<Vertex>> {
        self.nodes += 1;
        if self.nodes > self.config.max_nodes {
            return Err(Error::RecursionLimit(self.config.max_nodes));
        }
        let gens = self.normalize(gens)?;
        if gens.is_empty() {
            self.step(StepKind::BaseCase, at, &[], &[], "trivial subgroup");
            return Ok(None);
        }
        let key = self.key(&gens);
        if let Some(known) = self.memo.get(&key).cloned() {
            self.step(StepKind::Memo, at, &gens, &[], "seen before");
            return Ok(known);
        }
        if !self.active.insert(key.clone()) {
            return Err(Error::InternalLengthAssertionFailure(format!(
                "generators {:?} revisited at vertex {at}",
                self.show_all(&gens)
            )));
        }
        let d = self.max_len(&gens);
        let result = if d <= 1 {
            self.base_case(&gens, at)
        } else if gens.iter().all(|g| self.engine.in_stab1(g)) {
            self.descend(&gens, d, at)
        } else {
            self.branch(&gens, d, at)
        };
        self.active.remove(&key);
        if let Ok(outcome) = &result {
            self.memo.insert(key, outcome.clone());
        }
        result
    }

    fn short_form(&self, g: &Word) -> ShortForm {
        let preset = self.engine.preset();
        let s = preset.gs_syllables(g);
        match (s.syllables.as_slice(), s.a_exponent) {
            ([], k) => ShortForm::Rooted(k),
            ([(i, r)], 0) => ShortForm::Directed(*i, *r),
            ([(i, r)], 1) => ShortForm::Mixed(*i, *r),
            _ => {
                let t = preset.gs_syllables(&preset.inverse(g));
                let [(i, r)] = t.syllables[..] else {
                    unreachable!("inverse of a one-syllable word has one syllable")
                };
                ShortForm::Mixed(i, r)
            }
        }
    }

    /// Generators of syllable length at most one.
    fn base_case(&mut self, gens: &[Word], at: &Vertex) -> Result<Option<Vertex>> {
        let forms: Vec<ShortForm> = gens.iter().map(|g| self.short_form(g)).collect();
        let rooted = forms.iter().any(|f| matches!(f, ShortForm::Rooted(_)));
        let mut directed: Vec<(u8, u8)> = Vec::new();
        let mut mixed: Vec<(u8, u8)> = Vec::new();
        for f in &forms {
            match *f {
                ShortForm::Directed(i, r) => directed.push((i, r)),
                ShortForm::Mixed(i, r) => mixed.push((i, r)),
                ShortForm::Rooted(_) => {}
            }
        }
        directed.sort_unstable();
        directed.dedup();
        mixed.sort_unstable();
        mixed.dedup();
        let directed_indices: HashSet<u8> = directed.iter().map(|&(i, _)| i).collect();
        let mixed_indices: HashSet<u8> = mixed.iter().map(|&(i, _)| i).collect();

        let (verdict, note): (Option<Option<()>>, &str) = if directed.is_empty() && mixed.is_empty() {
            (Some(None), "powers of a: cyclic of order 3")
        } else if rooted {
            (Some(Some(())), "a power of a with a conjugate of b: the whole group")
        } else if mixed.is_empty() {
            if directed_indices.len() == 1 {
                (Some(None), "powers of one b_i: cyclic of order 3")
            } else {
                (None, "two distinct b_i: a first-level section is the whole group")
            }
        } else if directed_indices.iter().any(|i| mixed_indices.contains(i)) {
            (Some(Some(())), "b_i^q and b_i^r a give a: the whole group")
        } else if !directed.is_empty() {
            (None, "b_j^q and b_i^r a with i ≠ j: first-level sections are the whole group")
        } else if mixed.len() == 1 {
            (Some(None), "a single b_i^r a up to inversion: cyclic")
        } else if mixed_indices.len() < mixed.len() {
            (Some(Some(())), "b_i^r a and b_i^q a give a: the whole group")
        } else {
            (None, "b_i^r a and b_j^q a with i ≠ j: first-level sections are the whole group")
        };
        self.step(StepKind::BaseCase, at, gens, &[], note);
        match verdict {
            Some(None) => Ok(None),
            Some(Some(())) => Ok(Some(Vertex::root())),
            None => {
                let h = SubgroupSpec::new(self.engine, gens.iter().cloned());
                for u in 0..self.engine.arity() as u8 {
                    let v = Vertex::new(vec![u]);
                    let section = vertex_section_subgroup(self.engine, &h, &v);
                    if search_generators(self.engine, section.generators(), self.config.certificate_budget)?.is_some() {
                        return Ok(Some(v));
                    }
                }
                Err(Error::InternalLengthAssertionFailure(format!(
                    "case table claims a first-level section of {:?} is the whole group, none found",
                    self.show_all(gens)
                )))
            }
        }
    }

    /// `H ≤ St(1)`: the first-level sections are generated by shorter words.
    fn descend(&mut self, gens: &[Word], d: usize, at: &Vertex) -> Result<Option<Vertex>> {
        let p = self.engine.arity();
        let decomposed: Vec<_> = gens.iter().map(|g| self.engine.decompose(g)).collect();
        let mut children = Vec::with_capacity(p);
        for u in 0..p {
            let sections = self.normalize(decomposed.iter().map(|x| x.sections[u].clone()).collect())?;
            let d_u = self.max_len(&sections);
            if d_u >= d {
                return Err(Error::InternalLengthAssertionFailure(format!(
                    "first-level section {u} of {:?} has length {d_u} ≥ {d}",
                    self.show_all(gens)
                )));
            }
            children.push(sections);
        }
        self.step(StepKind::Descend, at, gens, &children.concat(), format!("inside St(1), D = {d}"));
        for (u, sections) in children.into_iter().enumerate() {
            if let Some(w) = self.decide(sections, &at.child(u as u8))? {
                return Ok(Some(Vertex::new(vec![u as u8]).concat(&w)));
            }
        }
        Ok(None)
    }

    /// Schreier generators of `St_H(1)` for the transversal `{1, t, t⁻¹}`.
    fn schreier(&self, gens: &[Word], t: &Word) -> Result<Vec<Word>> {
        let preset = self.engine.preset();
        let p = self.engine.arity();
        let t_root = self.engine.root_perm(t);
        let reps: Vec<(Perm, Word)> = (0..p as i64)
            .map(|k| {
                let e = if k <= p as i64 / 2 { k } else { k - p as i64 };
                (t_root.pow(k), preset.pow(t, e))
            })
            .collect();
        let mut out = Vec::new();
        for (sigma, u) in &reps {
            for s in gens {
                let tau = sigma.then(&self.engine.root_perm(s));
                let v = &reps
                    .iter()
                    .find(|(r, _)| *r == tau)
                    .expect("the level-1 image is generated by the root of t")
                    .1;
                out.push(preset.product([u, s, &preset.inverse(v)]));
            }
        }
        self.normalize(out)
    }

    /// Nielsen moves `g_i ← g_i g_j^{±1}` or `g_j^{±1} g_i` whenever they
    /// strictly shorten `g_i`.
    fn shorten(&self, gens: Vec<Word>) -> Result<Vec<Word>> {
        let preset = self.engine.preset();
        let mut gens = self.normalize(gens)?;
        for _ in 0..self.config.shortening_sweeps {
            let mut improved = false;
            let mut i = 0;
            while i < gens.len() {
                let mut replaced = false;
                for j in 0..gens.len() {
                    if i == j {
                        continue;
                    }
                    let len_i = self.engine.syllable_length(&gens[i]);
                    let inv_j = preset.inverse(&gens[j]);
                    let candidates = [
                        preset.mul(&gens[i], &gens[j]),
                        preset.mul(&gens[i], &inv_j),
                        preset.mul(&gens[j], &gens[i]),
                        preset.mul(&inv_j, &gens[i]),
                    ];
                    if let Some(best) = candidates
                        .into_iter()
                        .filter(|c| self.engine.syllable_length(c) < len_i)
                        .min_by_key(|c| (self.engine.syllable_length(c), c.len()))
                    {
                        gens[i] = best;
                        improved = true;
                        replaced = true;
                        break;
                    }
                }
                if replaced && (gens[i].is_identity() || self.engine.try_is_trivial(&gens[i])?) {
                    gens.remove(i);
                    continue;
                }
                if !replaced {
                    i += 1;
                }
            }
            if !improved {
                break;
            }
        }
        self.normalize(gens)
    }

    /// `H ⊄ St(1)` with `D ≥ 2`.
    fn branch(&mut self, gens: &[Word], d: usize, at: &Vertex) -> Result<Option<Vertex>> {
        let p = self.engine.arity();
        let mut candidates: Vec<&Word> = gens.iter().filter(|g| !self.engine.in_stab1(g)).collect();
        candidates.sort_by_key(|g| self.engine.syllable_length(g));

        let x = self.schreier(gens, candidates[0])?;
        self.step(
            StepKind::Schreier,
            at,
            gens,
            &x,
            format!("transversal {{1, t, t^-1}} with t = {}", self.engine.show(candidates[0])),
        );
        if let Roadmap::SectionsEqualWholeGroup { vertex, schreier_generator, section } =
            roadmap_from_schreier(self.engine, &x)
        {
            self.step(
                StepKind::Roadmap,
                at,
                &[schreier_generator],
                &[section],
                format!("section at {vertex} has root action: first-level sections are the whole group"),
            );
            return Ok(Some(Vertex::new(vec![vertex as u8])));
        }
        self.step(StepKind::Roadmap, at, &[], &[], "first-level sections lie in St(1)");

        for t in &candidates {
            let x = self.schreier(gens, t)?;
            let decomposed: Vec<_> = x.iter().map(|g| self.engine.decompose(g)).collect();
            for k in 0..p {
                let first: Vec<_> = decomposed.iter().map(|dx| self.engine.decompose(&dx.sections[k])).collect();
                let mut raw = Vec::with_capacity(p);
                let mut shortened = Vec::with_capacity(p);
                for j in 0..p {
                    let z = self.normalize(first.iter().map(|f| f.sections[j].clone()).collect())?;
                    shortened.push(self.shorten(z.clone())?);
                    raw.push(z);
                }
                if shortened.iter().all(|z| self.max_len(z) < d) {
                    for (j, (before, after)) in raw.iter().zip(&shortened).enumerate() {
                        if before != after {
                            let v = at.child(k as u8).child(j as u8);
                            self.step(StepKind::Shorten, &v, before, after, "pairwise products");
                        }
                    }
                    self.step(
                        StepKind::SecondLevel,
                        at,
                        gens,
                        &shortened.concat(),
                        format!("t = {}, vertex {k}, D = {d}", self.engine.show(t)),
                    );
                    for (j, z) in shortened.into_iter().enumerate() {
                        let v = Vertex::new(vec![k as u8, j as u8]);
                        if let Some(w) = self.decide(z, &at.concat(&v))? {
                            return Ok(Some(v.concat(&w)));
                        }
                    }
                    return Ok(None);
                }
            }
        }
        // No strict decrease: a second-level section may itself be the whole group.
        let x = self.schreier(gens, candidates[0])?;
        let h = SubgroupSpec::new(self.engine, x);
        for k in 0..p as u8 {
            for j in 0..p as u8 {
                let v = Vertex::new(vec![k, j]);
                let section = vertex_section_subgroup(self.engine, &h, &v);
                if search_generators(self.engine, section.generators(), self.config.certificate_budget)?.is_some() {
                    self.step(StepKind::SecondLevel, at, gens, section.generators(), "second-level section is the whole group");
                    return Ok(Some(v));
                }
            }
        }
        Err(Error::InternalLengthAssertionFailure(format!(
            "no first-level vertex gives shorter second-level sections for {:?} (D = {d})",
            self.show_all(gens)
        )))
    }
}

/// Words whose presence in a subgroup shows it is the whole group, grouped
/// by the role they play. One word from every group must be found.
fn whole_group_targets(engine: &Engine) -> Vec<Vec<Word>> {
    let preset = engine.preset();
    match preset.family() {
        Family::Grigorchuk => preset
            .generators()
            .iter()
            .enumerate()
            .map(|(i, _)| vec![preset.letter_word(i as u8, 1)])
            .collect(),
        _ => {
            let p = engine.arity() as i64;
            let a = preset.rooted_symbol();
            let rooted = (1..p).map(|k| preset.letter_word(a, k)).collect();
            let mut directed = Vec::new();
            for (sym, g) in preset.generators().iter().enumerate() {
                if g.rooted {
                    continue;
                }
                for i in 0..p {
                    for r in 1..g.order as i64 {
                        directed.push(preset.pow(&preset.indexed(sym as u8, i), r));
                    }
                }
            }
            vec![rooted, directed]
        }
    }
}

/// Breadth-first search over short products of `gens` and their inverses for
/// elements covering every target group.
pub(crate) fn search_generators(engine: &Engine, gens: &[Word], budget: usize) -> Result<Option<Vec<CertificateProduct>>> {
    if gens.is_empty() {
        return Ok(None);
    }
    let preset = engine.preset();
    let targets = whole_group_targets(engine);
    let mut set = ElementSet::new(engine);
    let target_actions: Vec<Vec<(Word, Perm)>> = targets
        .iter()
        .map(|group| group.iter().map(|t| (t.clone(), set.action(t))).collect())
        .collect();
    let mut found: Vec<Option<CertificateProduct>> = vec![None; targets.len()];
    let letters: Vec<((usize, i64), Word, Perm)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [((i, 1), g.clone()), ((i, -1), preset.inverse(g))])
        .map(|(tag, w)| {
            let action = set.action(&w);
            (tag, w, action)
        })
        .collect();
    let identity = Word::identity();
    let id_action = set.action(&identity);
    set.insert(&identity, id_action.clone())?;
    let mut frontier = vec![(identity, id_action, Vec::<(usize, i64)>::new())];
    while !frontier.is_empty() && set.len() < budget {
        let mut next = Vec::new();
        for (x, action, path) in &frontier {
            for (tag, s, s_action) in &letters {
                if set.len() >= budget {
                    break;
                }
                let y = preset.mul(x, s);
                let y_action = action.then(s_action);
                if !set.insert(&y, y_action.clone())? {
                    continue;
                }
                let mut y_path = path.clone();
                y_path.push(*tag);
                for (slot, group) in found.iter_mut().zip(&target_actions) {
                    if slot.is_some() {
                        continue;
                    }
                    for (t, t_action) in group {
                        if *t_action == y_action && engine.try_equal(&y, t)? {
                            *slot = Some(CertificateProduct {
                                factors: y_path.clone(),
                                value: engine.show(t),
                            });
                            break;
                        }
                    }
                }
                if found.iter().all(Option::is_some) {
                    return Ok(Some(found.into_iter().map(Option::unwrap).collect()));
                }
                next.push((y, y_action, y_path));
            }
        }
        frontier = next;
    }
    Ok(None)
}

fn certify(engine: &Engine, h: &SubgroupSpec, witness: &Vertex, budget: usize) -> Result<Certificate> {
    let section = vertex_section_subgroup(engine, h, witness);
    if let Some(products) = search_generators(engine, section.generators(), budget)? {
        return Ok(Certificate::Generates {
            generators: section.generator_strings(),
            products,
        });
    }
    if engine.preset().is_gupta_sidki() {
        if let Some((parent, digit)) = witness.parent() {
            let above = vertex_section_subgroup(engine, h, &parent);
            if !above.is_trivial() && !above.in_stab1(engine) {
                for x in stabilizer1_generators(engine, &above) {
                    let s = engine.decompose(&x).sections.swap_remove(digit as usize);
                    if !engine.in_stab1(&s) {
                        return Ok(Certificate::Roadmap {
                            parent,
                            digit,
                            schreier_generator: engine.show(&x),
                            section: engine.show(&s),
                        });
                    }
                }
            }
        }
    }
    Ok(Certificate::Missing {
        reason: format!("no generating products among {budget} elements of the section at {witness}"),
    })
}

/// Whether a set of values covers every target group.
fn covers_targets(engine: &Engine, values: &[Word]) -> bool {
    whole_group_targets(engine)
        .iter()
        .all(|group| group.iter().any(|t| values.iter().any(|v| engine.equal(v, t))))
}

/// Recomputes the vertex section at `witness` from `h` and checks the certificate.
pub fn replay_certificate(engine: &Engine, h: &SubgroupSpec, witness: &Vertex, certificate: &Certificate) -> Result<bool> {
    match certificate {
        Certificate::Generates { generators, products } => {
            let section = vertex_section_subgroup(engine, h, witness);
            if section.generator_strings() != *generators {
                return Ok(false);
            }
            let preset = engine.preset();
            let mut values = Vec::new();
            for product in products {
                let mut acc = Word::identity();
                for &(i, e) in &product.factors {
                    let Some(g) = section.generators().get(i) else {
                        return Ok(false);
                    };
                    acc = preset.mul(&acc, &preset.pow(g, e));
                }
                let claimed = engine.word(&product.value)?;
                if !engine.try_equal(&acc, &claimed)? {
                    return Ok(false);
                }
                values.push(claimed);
            }
            Ok(covers_targets(engine, &values))
        }
        Certificate::Roadmap {
            parent,
            digit,
            schreier_generator,
            section,
        } => {
            if !engine.preset().is_gupta_sidki() || parent.child(*digit) != *witness {
                return Ok(false);
            }
            let above = vertex_section_subgroup(engine, h, parent);
            if above.in_stab1(engine) {
                return Ok(false);
            }
            let Some(x) = stabilizer1_generators(engine, &above)
                .into_iter()
                .find(|x| engine.show(x) == *schreier_generator)
            else {
                return Ok(false);
            };
            let s = engine.decompose(&x).sections.swap_remove(*digit as usize);
            Ok(engine.try_equal(&s, &engine.word(section)?)? && !engine.in_stab1(&s))
        }
        Certificate::Missing { .. } => Ok(false),
    }
}

fn require_gs3(engine: &Engine) -> Result<()> {
    let preset = engine.preset();
    if preset.is_gupta_sidki() && preset.arity() == 3 {
        Ok(())
    } else {
        Err(Error::WrongPreset {
            expected: "gs3",
            found: preset.name().to_string(),
        })
    }
}

pub fn is_finite_gs3(engine: &Engine, h: &SubgroupSpec) -> Result<FinitenessVerdict> {
    is_finite_gs3_with(engine, h, &DeciderConfig::default())
}

pub fn is_finite_gs3_with(engine: &Engine, h: &SubgroupSpec, config: &DeciderConfig) -> Result<FinitenessVerdict> {
    require_gs3(engine)?;
    let mut decider = Gs3Decider {
        engine,
        config,
        memo: HashMap::new(),
        active: HashSet::new(),
        trace: Vec::new(),
        nodes: 0,
    };
    let outcome = decider.decide(h.generators().to_vec(), &Vertex::root());
    let mut trace = std::mem::take(&mut decider.trace);
    match outcome {
        Ok(None) => {
            let order = enumerate_elements(engine, h, config.order_cap).ok();
            trace.push(TraceStep {
                kind: StepKind::Order,
                vertex: Vertex::root(),
                before: h.generator_strings(),
                after: Vec::new(),
                note: match order {
                    Some(n) => format!("closure has {n} elements"),
                    None => format!("closure exceeds {}", config.order_cap),
                },
            });
            Ok(FinitenessVerdict::Finite { order, trace })
        }
        Ok(Some(witness)) => {
            let certificate = certify(engine, h, &witness, config.certificate_budget)?;
            trace.push(TraceStep {
                kind: StepKind::Certificate,
                vertex: witness.clone(),
                before: Vec::new(),
                after: Vec::new(),
                note: match &certificate {
                    Certificate::Generates { .. } => "explicit generating products".into(),
                    Certificate::Roadmap { .. } => "root action one level below the parent section".into(),
                    Certificate::Missing { reason } => reason.clone(),
                },
            });
            Ok(FinitenessVerdict::Infinite {
                witness,
                certificate,
                trace,
            })
        }
        Err(Error::RecursionLimit(n)) => Ok(FinitenessVerdict::Unknown {
            reason: format!("recursion visited more than {n} subgroups"),
            trace,
        }),
        Err(e) => Err(e),
    }
}

/// Caps for the Grigorchuk semi-decision.
#[derive(Clone, Debug)]
pub struct GrigorchukCaps {
    /// Largest closure tried before giving up on finiteness.
    pub element_cap: u64,
    /// Deepest level searched for a vertex section containing `a, b, c, d`.
    pub depth: usize,
    /// Distinct products explored per vertex.
    pub search_budget: usize,
}

impl Default for GrigorchukCaps {
    fn default() -> Self {
        GrigorchukCaps {
            element_cap: 4_096,
            depth: 3,
            search_budget: 2_000,
        }
    }
}

/// Alternates closure enumeration with growing caps and a level-by-level
/// search for a vertex section containing every generator.
pub fn is_finite_grigorchuk(engine: &Engine, h: &SubgroupSpec, caps: &GrigorchukCaps) -> Result<FinitenessVerdict> {
    if engine.preset().family() != Family::Grigorchuk {
        return Err(Error::WrongPreset {
            expected: "grigorchuk",
            found: engine.preset().name().to_string(),
        });
    }
    let mut trace = Vec::new();
    let mut frontier = vec![(Vertex::root(), h.clone())];
    for round in 0..=caps.depth {
        let cap = if round == caps.depth {
            caps.element_cap
        } else {
            caps.element_cap.min(64 << (2 * round))
        };
        match closure(engine, h.generators(), cap) {
            Ok(elements) => {
                trace.push(TraceStep {
                    kind: StepKind::Order,
                    vertex: Vertex::root(),
                    before: h.generator_strings(),
                    after: Vec::new(),
                    note: format!("closure terminated with {} elements", elements.len()),
                });
                return Ok(FinitenessVerdict::Finite {
                    order: Some(elements.len() as u64),
                    trace,
                });
            }
            Err(Error::ExceedsCap { .. }) => {}
            Err(e) => return Err(e),
        }
        let mut next = Vec::new();
        for (v, k) in &frontier {
            if let Some(products) = search_generators(engine, k.generators(), caps.search_budget)? {
                trace.push(TraceStep {
                    kind: StepKind::Certificate,
                    vertex: v.clone(),
                    before: k.generator_strings(),
                    after: products.iter().map(|p| p.value.clone()).collect(),
                    note: "vertex section contains every generator".into(),
                });
                return Ok(FinitenessVerdict::Infinite {
                    witness: v.clone(),
                    certificate: Certificate::Generates {
                        generators: k.generator_strings(),
                        products,
                    },
                    trace,
                });
            }
            for digit in 0..engine.arity() as u8 {
                let child = vertex_section_subgroup(engine, k, &Vertex::new(vec![digit]));
                if !child.is_trivial() {
                    next.push((v.child(digit), child));
                }
            }
        }
        trace.push(TraceStep {
            kind: StepKind::Descend,
            vertex: Vertex::root(),
            before: Vec::new(),
            after: Vec::new(),
            note: format!("round {round}: closure exceeds {cap}, no vertex section at level {round} is the whole group"),
        });
        frontier = next;
    }
    Ok(FinitenessVerdict::Unknown {
        reason: format!(
            "closure exceeds {} and no section down to level {} contains every generator",
            caps.element_cap, caps.depth
        ),
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    Finite { order: Option<u64> },
    /// Infinite; every such subgroup is commensurable with `G` or `G × G`.
    /// Which of the two is not computed.
    InfiniteCommensurableWithGOrGxG { witness: Vertex },
    Unknown { reason: String },
}

pub fn classify(engine: &Engine, h: &SubgroupSpec) -> Classification {
    match is_finite_gs3(engine, h) {
        Ok(FinitenessVerdict::Finite { order, .. }) => Classification::Finite { order },
        Ok(FinitenessVerdict::Infinite { witness, .. }) => Classification::InfiniteCommensurableWithGOrGxG { witness },
        Ok(FinitenessVerdict::Unknown { reason, .. }) => Classification::Unknown { reason },
        Err(e) => Classification::Unknown { reason: e.to_string() },
    }
}
