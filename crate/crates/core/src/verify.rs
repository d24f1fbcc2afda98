//! Reproducible checks of the structural facts the algorithms rely on.
//!
//! Every check returns a [`CheckReport`]. Randomized checks take an explicit
//! seed and record it, so a failing report can be replayed exactly. Each
//! family of checks carries a negative control: a deliberately wrong variant
//! that must be rejected, which guards against checks that pass vacuously.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::abelianization_image;
use crate::automorphism::Engine;
use crate::error::{Error, Result};
use crate::preset::{gupta_sidki, GroupPreset};
use crate::quotient::{derived_quotient, level_stabilizer_image, quotient, subgroup_contained};
use crate::vertex::Vertex;
use crate::word::Word;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// First failing input, when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Wall time in milliseconds.
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CheckReport {
    fn timed(name: impl Into<String>, seed: Option<u64>, started: Instant, outcome: Outcome) -> Self {
        CheckReport {
            name: name.into(),
            pass: outcome.pass,
            detail: outcome.detail,
            counterexample: outcome.counterexample,
            ms: started.elapsed().as_millis() as u64,
            seed,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    counterexample: Option<String>,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            pass: true,
            detail: detail.into(),
            counterexample: None,
        }
    }

    fn fail(detail: impl Into<String>, counterexample: impl Into<String>) -> Self {
        Outcome {
            pass: false,
            detail: detail.into(),
            counterexample: Some(counterexample.into()),
        }
    }
}

/// Summary of a harness run, sorted by check name.
#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub reports: Vec<CheckReport>,
}

impl VerifySummary {
    pub fn new(seed: u64, mut reports: Vec<CheckReport>) -> Self {
        reports.sort_by(|x, y| x.name.cmp(&y.name));
        VerifySummary {
            seed,
            total: reports.len(),
            passed: reports.iter().filter(|r| r.pass).count(),
            failed: reports.iter().filter(|r| !r.pass).map(|r| r.name.clone()).collect(),
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed.is_empty()
    }
}

fn require_gupta_sidki(preset: &GroupPreset) -> Result<()> {
    if preset.is_gupta_sidki() {
        Ok(())
    } else {
        Err(Error::WrongPreset {
            expected: "gupta-sidki",
            found: preset.name().to_string(),
        })
    }
}

// ---- decomposition of St(1) elements ----

/// Exponents `n_i` of an element of `St(1)` written as a product of
/// `b_i`-syllables, with one flag per coordinate confirming that section `i`
/// is `a^(n_i - n_{i-1}) b^(n_{i+1})` modulo `G'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BDecomposition {
    pub exponents: Vec<u8>,
    pub residuals: Vec<bool>,
}

impl BDecomposition {
    pub fn is_consistent(&self) -> bool {
        self.residuals.iter().all(|&r| r)
    }

    /// The abelianization image `(a, b)` every section must have.
    pub fn expected_section_image(&self, i: usize) -> (u32, u32) {
        let p = self.exponents.len();
        let n = |j: usize| self.exponents[j % p] as u32;
        ((n(i) + p as u32 - n(i + p - 1)) % p as u32, n(i + 1))
    }
}

pub fn b_decompose(engine: &Engine, g: &Word) -> Result<BDecomposition> {
    let preset = engine.preset();
    require_gupta_sidki(preset)?;
    if !engine.in_stab1(g) {
        return Err(Error::NotInStab1);
    }
    let p = engine.arity();
    let form = preset.gs_syllables(g);
    debug_assert_eq!(form.a_exponent, 0);
    let mut exponents = vec![0u8; p];
    for (i, r) in form.syllables {
        exponents[i as usize] = ((exponents[i as usize] as usize + r as usize) % p) as u8;
    }
    let mut decomposition = BDecomposition {
        exponents,
        residuals: Vec::with_capacity(p),
    };
    let a = preset.rooted_symbol() as usize;
    let b = 1 - a;
    for (i, s) in engine.decompose(g).sections.iter().enumerate() {
        let image = abelianization_image(s, preset);
        let found = (image.coords[a], image.coords[b]);
        decomposition
            .residuals
            .push(found == decomposition.expected_section_image(i));
    }
    Ok(decomposition)
}

// ---- the circulant linear system ----

/// Nullity over `F_p` of the `p × p` system `r_i = k r_{i-1} - k r_{i-2}`,
/// indices mod `p`, by Gaussian elimination.
pub fn solve_circulant_system(k: u64, p: u64) -> usize {
    let rows = circulant_matrix(p, &[(1, k), (2, p - k % p)]);
    p as usize - rank_mod_p(rows, p)
}

/// Rows of `r_i - Σ c · r_{i-shift} = 0`.
fn circulant_matrix(p: u64, terms: &[(usize, u64)]) -> Vec<Vec<u64>> {
    let n = p as usize;
    (0..n)
        .map(|i| {
            let mut row = vec![0u64; n];
            row[i] = 1;
            for &(shift, c) in terms {
                let j = (i + n - shift) % n;
                row[j] = (row[j] + p - c % p) % p;
            }
            row
        })
        .collect()
}

fn inverse_mod(x: u64, p: u64) -> u64 {
    // p is prime: x^(p-2)
    let (mut base, mut exp, mut acc) = (x % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inverse_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn run_circulant_checks() -> Vec<CheckReport> {
    let mut reports = Vec::new();
    for p in [3u64, 5] {
        let started = Instant::now();
        let nullities: Vec<usize> = (0..p).map(|k| solve_circulant_system(k, p)).collect();
        let outcome = match nullities.iter().position(|&n| n != 0) {
            None => Outcome::pass(format!("nullity 0 for k = 0..{}", p - 1)),
            Some(k) => Outcome::fail("nonzero nullity", format!("k = {k}, nullity {}", nullities[k])),
        };
        reports.push(CheckReport::timed(format!("circulant/p{p}"), None, started, outcome));
    }
    // r_i = r_{i-1} has the constant vectors as solutions.
    let started = Instant::now();
    let control = 3 - rank_mod_p(circulant_matrix(3, &[(1, 1)]), 3);
    let outcome = if control == 1 {
        Outcome::pass("r_i = r_{i-1} rejected with nullity 1")
    } else {
        Outcome::fail("control system misjudged", format!("nullity {control}"))
    };
    reports.push(CheckReport::timed("circulant/negative-control", None, started, outcome));
    reports
}

// ---- the identity suite ----

/// A claimed wreath recursion `lhs = (sections)` with trivial root permutation.
#[derive(Clone, Debug)]
pub struct Identity {
    pub name: &'static str,
    pub arity: usize,
    pub lhs: &'static str,
    pub sections: Vec<&'static str>,
}

impl Identity {
    fn new(name: &'static str, arity: usize, lhs: &'static str, sections: &[&'static str]) -> Self {
        Identity {
            name,
            arity,
            lhs,
            sections: sections.to_vec(),
        }
    }
}

/// The six tabulated identities for `p = 3`, in order.
pub fn tabulated_identities() -> Vec<Identity> {
    vec![
        Identity::new("psi(b)", 3, "b", &["a", "a^-1", "b"]),
        Identity::new("psi(b1)", 3, "b1", &["b", "a", "a^-1"]),
        Identity::new("product-of-conjugates", 3, "b0 b1 b2", &["a b a^-1", "b", "b"]),
        Identity::new("commutator-into-coordinate", 3, "[b0 b1, b1^-1 b2]", &["1", "1", "[b, a]"]),
        Identity::new("conjugated-commutator", 3, "[a, b]^(a^-1)", &["a", "a b", "b^-1 a"]),
        Identity::new("double-commutator", 3, "[[b^-1, a], b1 b2]", &["1", "[a, b]", "1"]),
    ]
}

/// Companions of the tabulated identities: the `p = 5` instance of
/// `commutator-into-coordinate` and the value it actually takes for `p = 3`.
pub fn companion_identities() -> Vec<Identity> {
    vec![
        Identity::new(
            "commutator-into-coordinate-p5",
            5,
            "[b0 b1, b1^-1 b4]",
            &["1", "1", "1", "1", "[b, a]"],
        ),
        Identity::new(
            "commutator-into-coordinate-p3-exact",
            3,
            "[b0 b1, b1^-1 b2]",
            &["1", "1", "[b a^-1, a^-1]"],
        ),
    ]
}

/// Checks one identity with the word problem. `Err` carries the mismatch.
pub fn check_identity(engine: &Engine, identity: &Identity) -> Result<std::result::Result<(), String>> {
    let lhs = engine.word(identity.lhs)?;
    let d = engine.decompose(&lhs);
    if !d.root_perm.is_identity() {
        return Ok(Err(format!("root permutation {}", d.root_perm)));
    }
    for (i, (got, want)) in d.sections.iter().zip(&identity.sections).enumerate() {
        if !engine.try_equal(got, &engine.word(want)?)? {
            return Ok(Err(format!("section {i} is {}, expected {want}", engine.show(got))));
        }
    }
    Ok(Ok(()))
}

pub fn run_identity_suite() -> Result<Vec<CheckReport>> {
    let gs3 = Engine::new(gupta_sidki(3)?);
    let gs5 = Engine::new(gupta_sidki(5)?);
    let engine_for = |id: &Identity| if id.arity == 3 { &gs3 } else { &gs5 };
    let mut reports = Vec::new();
    for identity in tabulated_identities().iter().chain(&companion_identities()) {
        let started = Instant::now();
        let outcome = match check_identity(engine_for(identity), identity)? {
            Ok(()) => Outcome::pass(format!("{} = ({})", identity.lhs, identity.sections.join(", "))),
            Err(mismatch) => Outcome::fail(format!("{} ≠ ({})", identity.lhs, identity.sections.join(", ")), mismatch),
        };
        reports.push(CheckReport::timed(format!("identity/{}", identity.name), None, started, outcome));
    }
    let started = Instant::now();
    let mutated = Identity::new("psi(b)-sign-flipped", 3, "b", &["a^-1", "a", "b"]);
    let outcome = match check_identity(&gs3, &mutated)? {
        Err(mismatch) => Outcome::pass(format!("mutation rejected: {mismatch}")),
        Ok(()) => Outcome::fail("mutated identity accepted", "b = (a^-1, a, b)"),
    };
    reports.push(CheckReport::timed("identity/negative-control", None, started, outcome));
    Ok(reports)
}

// ---- random elements ----

/// A random word `b_{i_1}^{r_1} ⋯ b_{i_m}^{r_m} a^v` with uniform indices,
/// exponents and `v`, and `m` uniform in `1..=max_syllables`.
pub fn random_gs_word<R: Rng + ?Sized>(preset: &GroupPreset, rng: &mut R, max_syllables: usize, rooted: bool) -> Word {
    let p = preset.arity() as i64;
    let a = preset.rooted_symbol();
    let b = 1 - a;
    let m = rng.gen_range(1..=max_syllables);
    let mut w = Word::identity();
    for _ in 0..m {
        let i = rng.gen_range(0..p);
        let r = rng.gen_range(1..p);
        w = preset.mul(&w, &preset.pow(&preset.indexed(b, i), r));
    }
    if rooted {
        w = preset.mul(&w, &preset.letter_word(a, rng.gen_range(0..p)));
    }
    w
}

/// Rejection-samples a random word into `St(level)`.
pub fn random_stabilizer_word<R: Rng + ?Sized>(
    engine: &Engine,
    rng: &mut R,
    level: usize,
    max_syllables: usize,
) -> Result<Word> {
    loop {
        let w = random_gs_word(engine.preset(), rng, max_syllables, true);
        if engine.in_level_stabilizer(&w, level)? {
            return Ok(w);
        }
    }
}

// ---- length contraction ----

/// Sections at level `level` of `g`, paired with their vertices.
fn level_sections(engine: &Engine, g: &Word, level: usize) -> Result<Vec<(Vertex, Word)>> {
    let p = engine.arity();
    (0..p.pow(level as u32))
        .map(|index| {
            let v = Vertex::from_index(index, level, p);
            let s = engine.section(g, &v)?;
            Ok((v, s))
        })
        .collect()
}

/// `St(1)`: every first-level section has `2 l ≤ m + 1`. `St(2)`: every
/// second-level section has `4 l ≤ m + 3`. `m` and `l` count syllables.
pub fn length_bound_holds(engine: &Engine, g: &Word, level: usize) -> Result<Option<String>> {
    let m = engine.syllable_length(g);
    let scale = 1usize << level;
    let slack = scale - 1;
    for (v, s) in level_sections(engine, g, level)? {
        let l = engine.syllable_length(&s);
        if scale * l > m + slack {
            return Ok(Some(format!(
                "g = {} (m = {m}), section at {v} = {} (l = {l})",
                engine.show(g),
                engine.show(&s)
            )));
        }
    }
    Ok(None)
}

pub fn run_length_lemma_check(samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let engine = Engine::new(gupta_sidki(3)?);
    let mut reports = Vec::new();
    for level in [1usize, 2] {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(level as u64));
        let mut outcome = Outcome::pass(format!("{samples} samples in St({level}), zero violations"));
        for _ in 0..samples {
            let g = random_stabilizer_word(&engine, &mut rng, level, 16)?;
            if let Some(violation) = length_bound_holds(&engine, &g, level)? {
                outcome = Outcome::fail(format!("bound violated in St({level})"), violation);
                break;
            }
        }
        reports.push(CheckReport::timed(format!("length/st{level}"), Some(seed), started, outcome));
    }
    // A bound one syllable tighter must be violated somewhere.
    let started = Instant::now();
    let g = engine.word("b0 b1 b0 b1 b0")?;
    let m = engine.syllable_length(&g);
    let tightest = level_sections(&engine, &g, 1)?
        .iter()
        .map(|(_, s)| engine.syllable_length(s))
        .max()
        .unwrap_or(0);
    let outcome = if 2 * tightest > m - 1 {
        Outcome::pass(format!("2 l ≤ m - 1 fails for {} (m = {m}, l = {tightest})", engine.show(&g)))
    } else {
        Outcome::fail("tightened bound never violated", engine.show(&g))
    };
    reports.push(CheckReport::timed("length/negative-control", Some(seed), started, outcome));
    Ok(reports)
}

// ---- decomposition uniqueness ----

/// A random relator: a random word raised to its order, then conjugated.
fn random_relator<R: Rng + ?Sized>(engine: &Engine, rng: &mut R) -> Result<Word> {
    let preset = engine.preset();
    let w = random_gs_word(preset, rng, 3, true);
    let n = engine.order(&w, 3u64.pow(7))?;
    let c = random_gs_word(preset, rng, 2, true);
    Ok(preset.conj(&preset.pow(&w, n as i64), &c))
}

/// Inserts `relator` into `g` at a random letter boundary.
fn insert_at_random<R: Rng + ?Sized>(engine: &Engine, rng: &mut R, g: &Word, relator: &Word) -> Word {
    let preset = engine.preset();
    let cut = rng.gen_range(0..=g.len());
    let (head, tail) = g.letters().split_at(cut);
    let head = Word::from_reduced(head.to_vec());
    let tail = Word::from_reduced(tail.to_vec());
    preset.product([&head, relator, &tail])
}

pub fn run_decomposition_check(samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let engine = Engine::new(gupta_sidki(3)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let started = Instant::now();
    let mut outcome = Outcome::pass(format!("{samples} elements of St(1): exponents unchanged by relator insertion"));
    for _ in 0..samples {
        let g = random_stabilizer_word(&engine, &mut rng, 1, 10)?;
        let relator = random_relator(&engine, &mut rng)?;
        let h = insert_at_random(&engine, &mut rng, &g, &relator);
        let before = b_decompose(&engine, &g)?;
        let after = b_decompose(&engine, &h)?;
        if before.exponents != after.exponents || !before.is_consistent() || !after.is_consistent() {
            outcome = Outcome::fail(
                "exponents differ",
                format!(
                    "{} ↦ {:?}, {} ↦ {:?}",
                    engine.show(&g),
                    before,
                    engine.show(&h),
                    after
                ),
            );
            break;
        }
    }
    let mut reports = vec![CheckReport::timed("decomposition/uniqueness", Some(seed), started, outcome)];

    let started = Instant::now();
    let examples: [(&str, [u8; 3]); 3] = [("b", [1, 0, 0]), ("1", [0, 0, 0]), ("b0 b1 b2", [1, 1, 1])];
    let mut outcome = Outcome::pass("b ↦ (1,0,0), 1 ↦ (0,0,0), b0 b1 b2 ↦ (1,1,1)");
    for (text, want) in examples {
        let d = b_decompose(&engine, &engine.word(text)?)?;
        if d.exponents != want || !d.is_consistent() {
            outcome = Outcome::fail("worked example mismatch", format!("{text} ↦ {d:?}"));
            break;
        }
    }
    reports.push(CheckReport::timed("decomposition/examples", None, started, outcome));

    // Shifting the exponents by one index must break the section pattern.
    let started = Instant::now();
    let mut d = b_decompose(&engine, &engine.word("b")?)?;
    d.exponents.rotate_right(1);
    let recomputed = b_decompose(&engine, &engine.word("b")?)?;
    let mismatched = (0..3).any(|i| d.expected_section_image(i) != recomputed.expected_section_image(i));
    let outcome = if mismatched {
        Outcome::pass("rotated exponents rejected")
    } else {
        Outcome::fail("rotated exponents accepted", format!("{d:?}"))
    };
    reports.push(CheckReport::timed("decomposition/negative-control", None, started, outcome));
    Ok(reports)
}

// ---- containments in congruence quotients ----

/// Generators of `St(2)` inside `G/St(n)`: `b_0 b_1 b_2`, whose sections
/// are `b` modulo `G'`, together with the commutators `[b_i, b_j]`
/// generating `B'` as a normal subgroup.
fn st2_family(engine: &Engine) -> Result<Vec<Word>> {
    let preset = engine.preset();
    let mut family = vec![engine.word("b0 b1 b2")?];
    for i in 0..3 {
        for j in i + 1..3 {
            family.push(preset.comm(&engine.word(&format!("b{i}"))?, &engine.word(&format!("b{j}"))?));
        }
    }
    Ok(family)
}

pub fn run_containment_checks(engine: &Engine, level_budget: usize) -> Result<Vec<CheckReport>> {
    require_gupta_sidki(engine.preset())?;
    if engine.arity() != 3 {
        return Err(Error::WrongPreset {
            expected: "gs3",
            found: engine.preset().name().to_string(),
        });
    }
    engine.check_points(level_budget)?;
    let whole = [engine.word("a")?, engine.word("b")?];
    let mut reports = Vec::new();

    let started = Instant::now();
    let q3 = quotient(engine, &whole, 3)?;
    let derived = derived_quotient(&q3, 1);
    let family = quotient(engine, &st2_family(engine)?, 3)?;
    let st2 = q3.normal_closure(family.generators().iter().cloned());
    let exact = level_stabilizer_image(engine, &whole, 2, 3)?;
    let outcome = if subgroup_contained(&exact, &st2)? && subgroup_contained(&st2, &exact)? {
        if subgroup_contained(&st2, &derived)? {
            Outcome::pass(format!(
                "|St(2) image| = {} inside |G' image| = {}",
                st2.order(),
                derived.order()
            ))
        } else {
            Outcome::fail("St(2) image not inside G' image", format!("|St(2)| = {}", st2.order()))
        }
    } else {
        Outcome::fail(
            "generating family does not give St(2)",
            format!("family closure {} vs kernel {}", st2.order(), exact.order()),
        )
    };
    reports.push(CheckReport::timed("containment/derived-contains-st2", None, started, outcome));

    let started = Instant::now();
    let b = quotient(engine, &[engine.word("b0")?, engine.word("b1")?, engine.word("b2")?], 3)?;
    let b_derived = q3.normal_closure(derived_quotient(&b, 1).generators().iter().cloned());
    let index = q3.order() / b_derived.order();
    let outcome = if index == 81u32.into() {
        Outcome::pass(format!("|G/St(3)| = {}, |B' image| = {}, index 81", q3.order(), b_derived.order()))
    } else {
        Outcome::fail("index of the B' image is not 81", index.to_string())
    };
    reports.push(CheckReport::timed("containment/quotient-by-b-derived-order-81", None, started, outcome));

    // Negative control: St(1) is not inside G'.
    let started = Instant::now();
    let st1 = level_stabilizer_image(engine, &whole, 1, 3)?;
    let outcome = if subgroup_contained(&st1, &derived)? {
        Outcome::fail("St(1) image accepted inside G' image", st1.order().to_string())
    } else {
        Outcome::pass("St(1) image rejected: b ∉ G'")
    };
    reports.push(CheckReport::timed("containment/negative-control", None, started, outcome));

    if level_budget >= 5 {
        let started = Instant::now();
        let q5 = quotient(engine, &whole, 5)?;
        let second = derived_quotient(&q5, 2);
        let st4 = level_stabilizer_image(engine, &whole, 4, 5)?;
        let outcome = if subgroup_contained(&st4, &second)? {
            Outcome::pass(format!("|St(4) image| = {} inside |G'' image| = {}", st4.order(), second.order()))
        } else {
            Outcome::fail("St(4) image not inside G'' image", format!("|St(4)| = {}", st4.order()))
        };
        reports.push(CheckReport::timed("containment/second-derived-contains-st4", None, started, outcome));
    }
    Ok(reports)
}

// ---- the whole harness ----

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub length_samples: usize,
    pub decomposition_samples: usize,
    pub level_budget: usize,
    /// Only checks whose name contains this substring run.
    pub filter: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            length_samples: 1000,
            decomposition_samples: 200,
            level_budget: 5,
            filter: None,
        }
    }
}

/// Runs every check family whose name can match the filter.
pub fn run_all(engine: &Engine, options: &VerifyOptions) -> Result<VerifySummary> {
    let wants = |family: &str| match &options.filter {
        None => true,
        Some(f) => family.contains(f.as_str()) || f.contains(family),
    };
    let mut reports = Vec::new();
    if wants("identity/") {
        reports.extend(run_identity_suite()?);
    }
    if wants("circulant/") {
        reports.extend(run_circulant_checks());
    }
    if wants("length/") {
        reports.extend(run_length_lemma_check(options.length_samples, options.seed)?);
    }
    if wants("decomposition/") {
        reports.extend(run_decomposition_check(options.decomposition_samples, options.seed)?);
    }
    if wants("containment/") {
        reports.extend(run_containment_checks(engine, options.level_budget)?);
    }
    if let Some(f) = &options.filter {
        reports.retain(|r| r.name.contains(f.as_str()));
    }
    Ok(VerifySummary::new(options.seed, reports))
}
