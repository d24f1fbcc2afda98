//! Congruence quotients `G/St(n)` as permutation groups on the `p^n` leaves.

use std::fmt;
use std::hash::Hasher;
use std::str::FromStr;

use fnv::FnvHasher;
use num_bigint::BigUint;
use rand::Rng;

use crate::automorphism::Engine;
use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::Word;

/// The image of a finitely generated subgroup in `Sym(p^n)`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    level: usize,
    arity: usize,
    labels: Vec<String>,
    generators: Vec<Perm>,
    chain: StabChain,
}

impl QuotientGroup {
    pub fn from_permutations(level: usize, arity: usize, labels: Vec<String>, generators: Vec<Perm>) -> Self {
        let degree = arity.pow(level as u32);
        assert!(generators.iter().all(|g| g.degree() == degree));
        assert_eq!(labels.len(), generators.len());
        let chain = StabChain::from_generators(degree, &generators);
        QuotientGroup {
            level,
            arity,
            labels,
            generators,
            chain,
        }
    }

    pub fn trivial(level: usize, arity: usize) -> Self {
        Self::from_permutations(level, arity, Vec::new(), Vec::new())
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.chain.degree()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.is_trivial()
    }

    pub fn contains_perm(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain.random_element(rng)
    }

    /// Normal closure of `seeds` under conjugation by the generators of `self`.
    pub fn normal_closure(&self, seeds: impl IntoIterator<Item = Perm>) -> QuotientGroup {
        let mut chain = StabChain::new(self.degree());
        let mut generators = Vec::new();
        let mut queue: Vec<Perm> = seeds.into_iter().collect();
        queue.reverse();
        while let Some(x) = queue.pop() {
            if !chain.insert(&x) {
                continue;
            }
            for g in &self.generators {
                queue.push(g.inverse().then(&x).then(g));
            }
            generators.push(x);
        }
        let labels = (0..generators.len()).map(|i| format!("n{i}")).collect();
        QuotientGroup {
            level: self.level,
            arity: self.arity,
            labels,
            generators,
            chain,
        }
    }

    /// The derived subgroup: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> QuotientGroup {
        let mut commutators = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            for h in &self.generators[i + 1..] {
                let c = g.inverse().then(&h.inverse()).then(g).then(h);
                if !c.is_identity() {
                    commutators.push(c);
                }
            }
        }
        let mut derived = self.normal_closure(commutators);
        derived.labels = (0..derived.generators.len()).map(|i| format!("c{i}")).collect();
        derived
    }
}

/// Image of `⟨gens⟩` in `G/St(n)`.
pub fn quotient(engine: &Engine, gens: &[Word], n: usize) -> Result<QuotientGroup> {
    engine.check_points(n)?;
    let perms = gens
        .iter()
        .map(|g| engine.level_action(g, n))
        .collect::<Result<Vec<_>>>()?;
    let labels = gens.iter().map(|g| engine.show(g)).collect();
    Ok(QuotientGroup::from_permutations(n, engine.arity(), labels, perms))
}

pub fn quotient_order(q: &QuotientGroup) -> BigUint {
    q.order()
}

/// Whether the level action of `g` lies in `q`.
pub fn quotient_contains(engine: &Engine, q: &QuotientGroup, g: &Word) -> Result<bool> {
    Ok(q.contains_perm(&engine.level_action(g, q.level())?))
}

/// `true` certifies `h ∉ ⟨k⟩`: the images are already separated in `G/St(n)`.
/// `false` is inconclusive.
pub fn coset_separated(engine: &Engine, h: &Word, k: &[Word], n: usize) -> Result<bool> {
    let q = quotient(engine, k, n)?;
    Ok(!quotient_contains(engine, &q, h)?)
}

/// The `k`-th term of the derived series of `q`.
pub fn derived_quotient(q: &QuotientGroup, k: usize) -> QuotientGroup {
    let mut current = q.clone();
    for _ in 0..k {
        current = current.derived_subgroup();
    }
    current
}

/// Whether every generator of `sub` lies in `sup`.
pub fn subgroup_contained(sub: &QuotientGroup, sup: &QuotientGroup) -> Result<bool> {
    if sub.level != sup.level || sub.arity != sup.arity {
        return Err(Error::LevelMismatch(sub.level, sup.level));
    }
    Ok(sub.generators.iter().all(|g| sup.contains_perm(g)))
}

/// Image of `⟨gens⟩ ∩ St(m)` in `G/St(n)` for `m ≤ n`.
///
/// The group acts on the level-`m` vertices and the level-`n` leaves at once,
/// with the vertices first in the base; the stabilizer of the vertices in that
/// chain is exactly the kernel onto `G/St(m)`.
pub fn level_stabilizer_image(engine: &Engine, gens: &[Word], m: usize, n: usize) -> Result<QuotientGroup> {
    assert!(m <= n, "stabilizer level {m} above quotient level {n}");
    let top = engine.check_points(m)?;
    let leaves = engine.check_points(n)?;
    let union: Vec<Perm> = gens
        .iter()
        .map(|g| {
            let upper = engine.level_action(g, m)?;
            let lower = engine.level_action(g, n)?;
            let images = upper
                .images()
                .iter()
                .copied()
                .chain(lower.images().iter().map(|&x| x + top as u32))
                .collect();
            Perm::from_images(images)
        })
        .collect::<Result<_>>()?;
    let chain = StabChain::from_generators(top + leaves, &union);
    let kernel: Vec<Perm> = chain
        .stabilizer_generators(top)
        .into_iter()
        .map(|g| {
            let images = g.images()[top..].iter().map(|&x| x - top as u32).collect();
            Perm::from_images(images).expect("restriction of a union permutation")
        })
        .filter(|g| !g.is_identity())
        .collect();
    let labels = (0..kernel.len()).map(|i| format!("k{i}")).collect();
    Ok(QuotientGroup::from_permutations(n, engine.arity(), labels, kernel))
}

/// FNV-1a hash of a generator set, as written in golden files.
pub fn generator_set_hash<S: AsRef<str>>(words: &[S]) -> u64 {
    let mut hasher = FnvHasher::default();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            hasher.write(b",");
        }
        hasher.write(w.as_ref().trim().as_bytes());
    }
    hasher.finish()
}

/// One golden-file line: `preset level hash order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenEntry {
    pub preset: String,
    pub level: usize,
    pub generators_hash: u64,
    pub order: BigUint,
}

impl fmt::Display for GoldenEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {:016x} {}", self.preset, self.level, self.generators_hash, self.order)
    }
}

impl FromStr for GoldenEntry {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Parse {
            position: 1,
            message: format!("malformed golden line `{line}`"),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [preset, level, hash, order] = fields[..] else {
            return Err(bad());
        };
        Ok(GoldenEntry {
            preset: preset.to_string(),
            level: level.parse().map_err(|_| bad())?,
            generators_hash: u64::from_str_radix(hash, 16).map_err(|_| bad())?,
            order: order.parse().map_err(|_| bad())?,
        })
    }
}

/// Parses a golden file, skipping blank lines and `#` comments.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}
