//! Stabilizer chains for permutation groups.
//!
//! The base is fixed to `0, 1, …, n-1`, so transversals are reproducible.
//! Generators are added with the incremental Schreier–Sims scheme: level `k`
//! keeps its own generators `S_k` and a transversal of the orbit of `k` under
//! `⟨S_k⟩`, and every Schreier generator of level `k` is pushed into level
//! `k + 1`. The work is driven by an explicit stack, so chain depth never
//! turns into recursion depth.

use fnv::FnvHashMap;
use num_bigint::BigUint;
use rand::Rng;

use crate::perm::Perm;

#[derive(Clone, Debug, Default)]
struct Level {
    generators: Vec<Perm>,
    /// Orbit of the base point, base point first.
    orbit: Vec<u32>,
    /// `point ↦ (u, u⁻¹)` with `base^u = point`; the base point itself is implicit.
    transversal: FnvHashMap<u32, (Perm, Perm)>,
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

enum Task {
    Add(usize, Perm),
    Orbit(usize, Perm),
}

impl StabChain {
    /// The chain of the trivial group.
    pub fn new(degree: usize) -> Self {
        StabChain {
            degree,
            levels: (0..degree)
                .map(|k| Level {
                    orbit: vec![k as u32],
                    ..Level::default()
                })
                .collect(),
        }
    }

    pub fn from_generators<'a>(degree: usize, generators: impl IntoIterator<Item = &'a Perm>) -> Self {
        let mut chain = StabChain::new(degree);
        for g in generators {
            chain.insert(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Strips `g` through the chain from level `from` on. Returns the level
    /// where stripping failed together with the residue.
    fn sift_from(&self, g: &Perm, from: usize) -> Option<(usize, Perm)> {
        let mut g = g.clone();
        for k in from..self.degree {
            let j = g.apply(k);
            if j == k {
                continue;
            }
            match self.levels[k].transversal.get(&(j as u32)) {
                Some((_, inv)) => g = g.then(inv),
                None => return Some((k, g)),
            }
        }
        None
    }

    pub fn contains(&self, g: &Perm) -> bool {
        debug_assert_eq!(g.degree(), self.degree);
        self.sift_from(g, 0).is_none()
    }

    /// Adds `g` to the group. Returns whether the group grew.
    pub fn insert(&mut self, g: &Perm) -> bool {
        if self.contains(g) {
            return false;
        }
        let mut stack = vec![Task::Add(0, g.clone())];
        while let Some(task) = stack.pop() {
            match task {
                Task::Add(k, pi) => {
                    if self.sift_from(&pi, k).is_none() {
                        continue;
                    }
                    let level = &mut self.levels[k];
                    for &j in &level.orbit {
                        let sigma = match level.transversal.get(&j) {
                            Some((u, _)) => u.then(&pi),
                            None => pi.clone(),
                        };
                        stack.push(Task::Orbit(k, sigma));
                    }
                    level.generators.push(pi);
                }
                Task::Orbit(k, pi) => {
                    let j = pi.apply(k);
                    let level = &mut self.levels[k];
                    let residue = if j == k {
                        pi
                    } else if let Some((_, inv)) = level.transversal.get(&(j as u32)) {
                        pi.then(inv)
                    } else {
                        for tau in &level.generators {
                            stack.push(Task::Orbit(k, pi.then(tau)));
                        }
                        level.orbit.push(j as u32);
                        let inv = pi.inverse();
                        level.transversal.insert(j as u32, (pi, inv));
                        continue;
                    };
                    if !residue.is_identity() {
                        stack.push(Task::Add(k + 1, residue));
                    }
                }
            }
        }
        true
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Orbit lengths of the base points, one per level.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of the pointwise stabilizer of `0, …, k-1`. Only meaningful
    /// once the chain is complete, which it is after every [`StabChain::insert`].
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Perm> {
        self.levels[k.min(self.degree)..]
            .iter()
            .flat_map(|l| l.generators.iter().cloned())
            .collect()
    }

    /// A uniformly random element: one random coset representative per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let j = level.orbit[rng.gen_range(0..level.orbit.len())];
            if let Some((u, _)) = level.transversal.get(&j) {
                g = g.then(u);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn closure(gens: &[Perm]) -> HashSet<Perm> {
        let degree = gens[0].degree();
        let mut seen = HashSet::from([Perm::identity(degree)]);
        let mut frontier = vec![Perm::identity(degree)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    fn cycles(text: &str, n: usize) -> Perm {
        Perm::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn symmetric_and_alternating() {
        let s5 = StabChain::from_generators(5, &[cycles("(0 1)", 5), cycles("(0 1 2 3 4)", 5)]);
        assert_eq!(s5.order(), BigUint::from(120u32));
        let a5 = StabChain::from_generators(5, &[cycles("(0 1 2)", 5), cycles("(2 3 4)", 5)]);
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(!a5.contains(&cycles("(0 1)", 5)));
        assert!(a5.contains(&cycles("(0 1)(3 4)", 5)));
    }

    #[test]
    fn matches_closure_on_small_groups() {
        let cases = [
            vec![cycles("(0 1 2)(3 4 5)", 7), cycles("(1 3)(2 6)", 7)],
            vec![cycles("(0 1 2 3)", 6), cycles("(4 5)", 6), cycles("(0 2)", 6)],
            vec![cycles("(0 1)(2 3)", 4), cycles("(0 2)(1 3)", 4)],
        ];
        for gens in cases {
            let chain = StabChain::from_generators(gens[0].degree(), &gens);
            let elements = closure(&gens);
            assert_eq!(chain.order(), BigUint::from(elements.len()));
            assert!(elements.iter().all(|x| chain.contains(x)));
        }
    }

    #[test]
    fn random_elements_stay_inside() {
        let gens = [cycles("(0 1 2)", 6), cycles("(3 4 5)", 6)];
        let chain = StabChain::from_generators(6, &gens);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let seen: HashSet<Perm> = (0..200).map(|_| chain.random_element(&mut rng)).collect();
        assert_eq!(seen.len(), 9);
        assert!(seen.iter().all(|x| chain.contains(x)));
    }

    #[test]
    fn stabilizer_generators_fix_prefix() {
        let chain = StabChain::from_generators(5, &[cycles("(0 1 2 3 4)", 5), cycles("(0 1)", 5)]);
        let stab = chain.stabilizer_generators(2);
        assert!(stab.iter().all(|g| g.apply(0) == 0 && g.apply(1) == 1));
        assert_eq!(StabChain::from_generators(5, &stab).order(), BigUint::from(6u32));
    }
}
