//! Exact arithmetic for tree automorphisms given by words.
//!
//! Conventions: words act on the right and left to right, so `g·h` applies
//! `g` first. The section rule is `(gh)_v = g_v · h_{v^g}`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::abelian;
use crate::error::{Error, Result};
use crate::perm::{lcm, Perm};
use crate::preset::{Family, GroupPreset};
use crate::vertex::Vertex;
use crate::word::{Letter, Word};

/// Environment variable overriding [`EngineConfig::max_points`].
pub const MAX_POINTS_ENV: &str = "BRANCHGROUP_MAX_POINTS";

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Largest number of leaves a level action may have.
    pub max_points: usize,
    /// Recursion depth at which the word problem and order computation give up.
    pub max_recursion_depth: usize,
    /// Entries kept in each memo table before it is flushed.
    pub cache_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_points: 729,
            max_recursion_depth: 4096,
            cache_limit: 1 << 20,
        }
    }
}

impl EngineConfig {
    /// Defaults, with `max_points` taken from `BRANCHGROUP_MAX_POINTS` when set.
    pub fn from_env() -> Self {
        let mut config = EngineConfig::default();
        if let Some(n) = std::env::var(MAX_POINTS_ENV).ok().and_then(|v| v.parse().ok()) {
            config.max_points = n;
        }
        config
    }
}

/// Root permutation together with the `p` first-level sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathDecomposition {
    pub root_perm: Perm,
    pub sections: Vec<Word>,
}

/// Precomputed recursion of one letter `s^e`.
#[derive(Debug)]
struct LetterTable {
    root: Perm,
    sections: Vec<Vec<Letter>>,
}

/// The word problem engine for one preset. Memo tables are shared behind
/// locks, so one engine can serve many threads.
#[derive(Debug)]
pub struct Engine {
    preset: Arc<GroupPreset>,
    config: EngineConfig,
    /// Indexed by symbol, then exponent.
    letters: Vec<Vec<Option<LetterTable>>>,
    trivial_cache: RwLock<HashMap<Word, bool>>,
    order_cache: RwLock<HashMap<Word, u64>>,
    level_cache: RwLock<HashMap<(Letter, usize), Arc<Perm>>>,
}

impl Engine {
    pub fn new(preset: GroupPreset) -> Self {
        Self::with_config(preset, EngineConfig::from_env())
    }

    pub fn with_config(preset: GroupPreset, config: EngineConfig) -> Self {
        let p = preset.arity();
        let letters = preset
            .generators()
            .iter()
            .map(|gen| {
                let mut by_exp = vec![None];
                for e in 1..gen.order {
                    let root = gen.root.pow(e as i64);
                    // (s^e)_v = s_v · s_{v^s} ⋯ s_{v^{s^{e-1}}}
                    let sections = (0..p)
                        .map(|v| {
                            let mut raw = Vec::new();
                            let mut at = v;
                            for _ in 0..e {
                                raw.extend(gen.sections[at].letters().iter().map(|l| (l.sym, l.exp as i64)));
                                at = gen.root.apply(at);
                            }
                            preset.reduce_raw(raw).letters().to_vec()
                        })
                        .collect();
                    by_exp.push(Some(LetterTable { root, sections }));
                }
                by_exp
            })
            .collect();
        Engine {
            preset: Arc::new(preset),
            config,
            letters,
            trivial_cache: RwLock::new(HashMap::new()),
            order_cache: RwLock::new(HashMap::new()),
            level_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn preset(&self) -> &GroupPreset {
        &self.preset
    }

    pub fn shared_preset(&self) -> Arc<GroupPreset> {
        Arc::clone(&self.preset)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn arity(&self) -> usize {
        self.preset.arity()
    }

    fn table(&self, l: Letter) -> &LetterTable {
        self.letters[l.sym as usize][l.exp as usize]
            .as_ref()
            .expect("letters are reduced")
    }

    /// Parses a word in the grammar; convenience over [`GroupPreset::parse_word`].
    pub fn word(&self, text: &str) -> Result<Word> {
        self.preset.parse_word(text)
    }

    pub fn show(&self, g: &Word) -> String {
        self.preset.format_word(g)
    }

    pub fn root_perm(&self, g: &Word) -> Perm {
        let mut perm = Perm::identity(self.arity());
        for &l in g.letters() {
            perm = perm.then(&self.table(l).root);
        }
        perm
    }

    pub fn in_stab1(&self, g: &Word) -> bool {
        self.root_perm(g).is_identity()
    }

    pub fn decompose(&self, g: &Word) -> WreathDecomposition {
        let p = self.arity();
        let mut raw: Vec<Vec<(u8, i64)>> = vec![Vec::new(); p];
        let mut at: Vec<usize> = (0..p).collect();
        for &l in g.letters() {
            let table = self.table(l);
            for v in 0..p {
                raw[v].extend(table.sections[at[v]].iter().map(|x| (x.sym, x.exp as i64)));
                at[v] = table.root.apply(at[v]);
            }
        }
        let root_perm = Perm::from_images(at.iter().map(|&x| x as u32).collect())
            .expect("product of permutations");
        WreathDecomposition {
            root_perm,
            sections: raw.into_iter().map(|r| self.preset.reduce_raw(r)).collect(),
        }
    }

    /// The restriction of `g` to the subtree at `v`, for `g` fixing `v`.
    pub fn section(&self, g: &Word, v: &Vertex) -> Result<Word> {
        let mut current = g.clone();
        for &digit in v.path() {
            if digit as usize >= self.arity() {
                return Err(Error::BadVertex {
                    digit: digit as u32,
                    arity: self.arity(),
                });
            }
            let d = self.decompose(&current);
            if d.root_perm.apply(digit as usize) != digit as usize {
                return Err(Error::VertexNotStabilized(v.clone()));
            }
            current = d.sections.into_iter().nth(digit as usize).unwrap();
        }
        Ok(current)
    }

    /// The state of `g` at `v`: the automorphism induced from `T_v` to `T_{v^g}`,
    /// together with the image vertex. Defined for every vertex.
    pub fn state(&self, g: &Word, v: &Vertex) -> (Vertex, Word) {
        let mut current = g.clone();
        let mut image = Vec::with_capacity(v.level());
        for &digit in v.path() {
            let d = self.decompose(&current);
            image.push(d.root_perm.apply(digit as usize) as u8);
            current = d.sections.into_iter().nth(digit as usize).unwrap();
        }
        (Vertex::new(image), current)
    }

    pub fn check_points(&self, level: usize) -> Result<usize> {
        let points = self
            .arity()
            .checked_pow(level as u32)
            .filter(|&n| n <= self.config.max_points)
            .ok_or(Error::DepthLimit {
                level,
                points: self.arity().saturating_pow(level as u32),
                cap: self.config.max_points,
            })?;
        Ok(points)
    }

    /// Action of `g` on the `p^n` leaves of level `n`, leaves indexed by their
    /// path read as a base-`p` numeral, most significant digit first.
    pub fn level_action(&self, g: &Word, n: usize) -> Result<Perm> {
        self.check_points(n)?;
        Ok(self.word_perm(g, n))
    }

    fn word_perm(&self, g: &Word, n: usize) -> Perm {
        let points = self.arity().pow(n as u32);
        let mut perm = Perm::identity(points);
        for &l in g.letters() {
            perm = perm.then(&self.letter_perm(l, n));
        }
        perm
    }

    fn letter_perm(&self, l: Letter, n: usize) -> Arc<Perm> {
        if let Some(p) = self.level_cache.read().unwrap().get(&(l, n)) {
            return Arc::clone(p);
        }
        let p = self.arity();
        let table = self.table(l);
        let perm = if n == 0 {
            Perm::identity(1)
        } else {
            let block = p.pow(n as u32 - 1);
            let mut images = vec![0u32; p * block];
            for v in 0..p {
                let below = self.word_perm(&Word::from_reduced(table.sections[v].clone()), n - 1);
                let target = table.root.apply(v) * block;
                for rest in 0..block {
                    images[v * block + rest] = (target + below.apply(rest)) as u32;
                }
            }
            Perm::from_images(images).expect("recursion yields a bijection")
        };
        let perm = Arc::new(perm);
        self.level_cache
            .write()
            .unwrap()
            .insert((l, n), Arc::clone(&perm));
        perm
    }

    /// Whether `g` lies in `St(n)`.
    pub fn in_level_stabilizer(&self, g: &Word, n: usize) -> Result<bool> {
        Ok(self.level_action(g, n)?.is_identity())
    }

    /// Decides `g = 1` by recursing into sections. A word met again on the
    /// active recursion stack is assumed trivial; a consistent set of such
    /// assumptions forces trivial action on every level.
    pub fn try_is_trivial(&self, g: &Word) -> Result<bool> {
        if g.is_identity() {
            return Ok(true);
        }
        let mut search = Search {
            engine: self,
            stack: HashMap::new(),
            depth: 0,
        };
        search.trivial(g).map(|(t, _)| t)
    }

    /// [`Engine::try_is_trivial`] for the built-in groups, where the recursion
    /// always terminates.
    ///
    /// # Panics
    /// If the recursion limit is reached, which only user presets can trigger.
    pub fn is_trivial(&self, g: &Word) -> bool {
        self.try_is_trivial(g)
            .unwrap_or_else(|e| panic!("word problem did not terminate: {e}"))
    }

    pub fn try_equal(&self, g: &Word, h: &Word) -> Result<bool> {
        if g == h {
            return Ok(true);
        }
        self.try_is_trivial(&self.preset.mul(g, &self.preset.inverse(h)))
    }

    pub fn equal(&self, g: &Word, h: &Word) -> bool {
        g == h || self.is_trivial(&self.preset.mul(g, &self.preset.inverse(h)))
    }

    /// Least `n ≥ 1` with `g^n = 1`.
    ///
    /// Outside `St(1)` with root permutation of order `m`, `|g| = m·|g^m|`;
    /// inside, `|g|` is the lcm of the section orders. A word revisited on the
    /// stack with no power step in between contributes 1; a revisit across a
    /// power step means infinite order and is reported as exceeding the cap.
    pub fn order(&self, g: &Word, cap: u64) -> Result<u64> {
        if g.is_identity() {
            return Ok(1);
        }
        let mut search = Search {
            engine: self,
            stack: HashMap::new(),
            depth: 0,
        };
        let mut orders = OrderSearch {
            stack: HashMap::new(),
            cap,
        };
        let (order, _) = search.order(&mut orders, g, 1)?;
        if order > cap {
            return Err(Error::ExceedsCap { cap });
        }
        Ok(order)
    }

    pub fn syllable_length(&self, g: &Word) -> usize {
        self.preset.syllable_length(g)
    }

    fn cache_get<V: Copy>(&self, cache: &RwLock<HashMap<Word, V>>, g: &Word) -> Option<V> {
        cache.read().unwrap().get(g).copied()
    }

    fn cache_put<V>(&self, cache: &RwLock<HashMap<Word, V>>, g: Word, v: V) {
        let mut map = cache.write().unwrap();
        if map.len() >= self.config.cache_limit {
            map.clear();
        }
        map.insert(g, v);
    }

    /// Cheap certificate of nontriviality for the built-in families.
    fn abelian_nontrivial(&self, g: &Word) -> bool {
        match self.preset.family() {
            Family::GuptaSidki | Family::Grigorchuk => {
                !abelian::abelianization_image(g, &self.preset).is_zero()
            }
            Family::Custom => false,
        }
    }
}

struct Search<'a> {
    engine: &'a Engine,
    /// Words on the active recursion stack with their depth.
    stack: HashMap<Word, usize>,
    depth: usize,
}

struct OrderSearch {
    /// Multiplier accumulated from the root of the search when the word was entered.
    stack: HashMap<Word, (usize, u64)>,
    cap: u64,
}

impl Search<'_> {
    /// Returns the verdict and the shallowest stack depth it relied on
    /// (`usize::MAX` when it relied on nothing still open).
    fn trivial(&mut self, g: &Word) -> Result<(bool, usize)> {
        let engine = self.engine;
        if g.is_identity() {
            return Ok((true, usize::MAX));
        }
        if let Some(v) = engine.cache_get(&engine.trivial_cache, g) {
            return Ok((v, usize::MAX));
        }
        if let Some(&depth) = self.stack.get(g) {
            return Ok((true, depth));
        }
        if self.depth >= engine.config.max_recursion_depth {
            return Err(Error::RecursionLimit(engine.config.max_recursion_depth));
        }
        if engine.abelian_nontrivial(g) {
            engine.cache_put(&engine.trivial_cache, g.clone(), false);
            return Ok((false, usize::MAX));
        }
        let d = engine.decompose(g);
        if !d.root_perm.is_identity() {
            engine.cache_put(&engine.trivial_cache, g.clone(), false);
            return Ok((false, usize::MAX));
        }
        let my_depth = self.depth;
        self.stack.insert(g.clone(), my_depth);
        self.depth += 1;
        let mut low = usize::MAX;
        let mut verdict = true;
        for s in &d.sections {
            let result = self.trivial(s);
            let (t, l) = match result {
                Ok(x) => x,
                Err(e) => {
                    self.depth -= 1;
                    self.stack.remove(g);
                    return Err(e);
                }
            };
            low = low.min(l);
            if !t {
                verdict = false;
                break;
            }
        }
        self.depth -= 1;
        self.stack.remove(g);
        if !verdict {
            engine.cache_put(&engine.trivial_cache, g.clone(), false);
            return Ok((false, usize::MAX));
        }
        if low >= my_depth {
            engine.cache_put(&engine.trivial_cache, g.clone(), true);
            low = usize::MAX;
        }
        Ok((true, low))
    }

    fn order(&mut self, os: &mut OrderSearch, g: &Word, mult: u64) -> Result<(u64, usize)> {
        let engine = self.engine;
        if g.is_identity() {
            return Ok((1, usize::MAX));
        }
        if let Some(v) = engine.cache_get(&engine.order_cache, g) {
            return Ok((v, usize::MAX));
        }
        if let Some(&(depth, entered)) = os.stack.get(g) {
            if entered == mult {
                return Ok((1, depth));
            }
            return Err(Error::ExceedsCap { cap: os.cap });
        }
        if self.depth >= engine.config.max_recursion_depth {
            return Err(Error::RecursionLimit(engine.config.max_recursion_depth));
        }
        let d = engine.decompose(g);
        let m = d.root_perm.order();
        let my_depth = self.depth;
        os.stack.insert(g.clone(), (my_depth, mult));
        self.depth += 1;
        let result = (|| -> Result<(u64, usize)> {
            if m > 1 {
                let next_mult = mult.saturating_mul(m);
                if next_mult > os.cap {
                    return Err(Error::ExceedsCap { cap: os.cap });
                }
                let power = engine.preset.pow(g, m as i64);
                let (r, low) = self.order(os, &power, next_mult)?;
                Ok((m.saturating_mul(r), low))
            } else {
                let mut acc = 1u64;
                let mut low = usize::MAX;
                for s in &d.sections {
                    let (r, l) = self.order(os, s, mult)?;
                    acc = lcm(acc, r);
                    low = low.min(l);
                    if mult.saturating_mul(acc) > os.cap {
                        return Err(Error::ExceedsCap { cap: os.cap });
                    }
                }
                Ok((acc, low))
            }
        })();
        self.depth -= 1;
        os.stack.remove(g);
        let (order, mut low) = result?;
        if mult.saturating_mul(order) > os.cap {
            return Err(Error::ExceedsCap { cap: os.cap });
        }
        if low >= my_depth {
            engine.cache_put(&engine.order_cache, g.clone(), order);
            low = usize::MAX;
        }
        Ok((order, low))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{grigorchuk, gupta_sidki};

    fn gs3() -> Engine {
        Engine::new(gupta_sidki(3).unwrap())
    }

    fn shown(e: &Engine, d: &WreathDecomposition) -> (String, Vec<String>) {
        (
            d.root_perm.to_string(),
            d.sections.iter().map(|w| e.show(w)).collect(),
        )
    }

    #[test]
    fn decompose_generators() {
        let e = gs3();
        let d = e.decompose(&e.word("a").unwrap());
        assert_eq!(shown(&e, &d), ("(0 1 2)".into(), vec!["1".into(), "1".into(), "1".into()]));
        let d = e.decompose(&e.word("b").unwrap());
        assert_eq!(shown(&e, &d), ("()".into(), vec!["a".into(), "a^-1".into(), "b".into()]));
        let d = e.decompose(&e.word("a^-1 b a").unwrap());
        assert_eq!(shown(&e, &d), ("()".into(), vec!["b".into(), "a".into(), "a^-1".into()]));
        let d = e.decompose(&e.word("b b1 b2").unwrap());
        assert_eq!(shown(&e, &d), ("()".into(), vec!["a b a^-1".into(), "b".into(), "b".into()]));
    }

    #[test]
    fn gs5_decomposition() {
        let e = Engine::new(gupta_sidki(5).unwrap());
        let d = e.decompose(&e.word("b").unwrap());
        assert_eq!(d.sections.iter().map(|w| e.show(w)).collect::<Vec<_>>(), ["a", "a^-1", "1", "1", "b"]);
    }

    #[test]
    fn sections_along_paths() {
        let e = gs3();
        let b = e.word("b").unwrap();
        assert_eq!(e.section(&b, &Vertex::parse("2", 3).unwrap()).unwrap(), b);
        assert_eq!(e.section(&b, &Vertex::parse("22", 3).unwrap()).unwrap(), b);
        let a = e.word("a").unwrap();
        assert_eq!(
            e.section(&a, &Vertex::parse("0", 3).unwrap()),
            Err(Error::VertexNotStabilized(Vertex::parse("0", 3).unwrap()))
        );
        // For p = 3 the third section is [b a^-1, a^-1], not [b,a].
        let g = e.word("[b0 b1, b1^-1 b2]").unwrap();
        let s2 = e.section(&g, &Vertex::parse("2", 3).unwrap()).unwrap();
        assert!(e.equal(&s2, &e.word("[b a^-1, a^-1]").unwrap()));
        assert!(!e.equal(&s2, &e.word("[b,a]").unwrap()));
        for v in ["0", "1"] {
            assert!(e.is_trivial(&e.section(&g, &Vertex::parse(v, 3).unwrap()).unwrap()));
        }
        let e5 = Engine::new(gupta_sidki(5).unwrap());
        let g = e5.word("[b0 b1, b1^-1 b4]").unwrap();
        let d = e5.decompose(&g);
        assert!(d.root_perm.is_identity());
        assert!(e5.equal(&d.sections[4], &e5.word("[b,a]").unwrap()));
        assert!(d.sections[..4].iter().all(|s| e5.is_trivial(s)));
    }

    #[test]
    fn level_actions() {
        let e = gs3();
        assert_eq!(e.level_action(&e.word("a").unwrap(), 1).unwrap().to_string(), "(0 1 2)");
        assert!(e.level_action(&e.word("b").unwrap(), 1).unwrap().is_identity());
        // (00 01 02)(12 11 10) on leaves 0..9
        let b2 = e.level_action(&e.word("b").unwrap(), 2).unwrap();
        assert_eq!(b2, Perm::parse_cycles("(0 1 2)(5 4 3)", 9).unwrap());
        let small = Engine::with_config(
            gupta_sidki(3).unwrap(),
            EngineConfig {
                max_points: 27,
                ..EngineConfig::default()
            },
        );
        assert!(matches!(
            small.level_action(&small.word("a").unwrap(), 4),
            Err(Error::DepthLimit { level: 4, points: 81, cap: 27 })
        ));
    }

    #[test]
    fn triviality() {
        let e = gs3();
        assert!(e.is_trivial(&e.word("a^3").unwrap()));
        assert!(!e.is_trivial(&e.word("b").unwrap()));
        assert!(e.is_trivial(&e.word("b^3").unwrap()));
        assert!(e.equal(&e.word("a").unwrap(), &e.word("a^4").unwrap()));
        // [a,b]^(a^-1) = (a, ab, b^-1 a)
        let d = e.decompose(&e.word("[a,b]^(a^-1)").unwrap());
        assert!(d.root_perm.is_identity());
        for (s, want) in d.sections.iter().zip(["a", "a b", "b^-1 a"]) {
            assert!(e.equal(s, &e.word(want).unwrap()));
        }
    }

    #[test]
    fn orders() {
        let e = gs3();
        assert_eq!(e.order(&e.word("a").unwrap(), 100).unwrap(), 3);
        assert_eq!(e.order(&e.word("b").unwrap(), 100).unwrap(), 3);
        assert_eq!(e.order(&Word::identity(), 1).unwrap(), 1);
        assert_eq!(
            e.order(&e.word("a b").unwrap(), 2),
            Err(Error::ExceedsCap { cap: 2 })
        );
    }

    #[test]
    fn grigorchuk_relations() {
        let e = Engine::new(grigorchuk());
        for g in ["a", "b", "c", "d"] {
            assert_eq!(e.order(&e.word(g).unwrap(), 16).unwrap(), 2);
        }
        assert_eq!(e.level_action(&e.word("a").unwrap(), 1).unwrap().to_string(), "(0 1)");
        // (ab) has order 16 in the Grigorchuk group
        assert_eq!(e.order(&e.word("a b").unwrap(), 1 << 10).unwrap(), 16);
    }
}
