//! Self-similar groups given by a recursion table.
//!
//! A preset lists each generator with its order, its action on the first
//! level and its `p` first-level sections. Presets are plain data: the
//! built-ins below are also expressible in the TOML preset format.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{self, Expr};
use crate::perm::Perm;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GuptaSidki,
    Grigorchuk,
    Custom,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: char,
    pub order: u8,
    pub root: Perm,
    pub sections: Vec<Word>,
    /// Rooted generators act only on the first level (all sections trivial).
    pub rooted: bool,
}

#[derive(Clone, Debug)]
pub struct GroupPreset {
    name: String,
    family: Family,
    arity: usize,
    generators: Vec<Generator>,
    /// Adjacent pairs that collapse to at most one letter (`b c → d` in the Grigorchuk group).
    rewrites: HashMap<(Letter, Letter), Option<Letter>>,
}

/// On-disk form of a preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub name: String,
    pub p: usize,
    #[serde(default = "custom_family")]
    pub family: Family,
    #[serde(rename = "generator")]
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, rename = "rewrite", skip_serializing_if = "Vec::is_empty")]
    pub rewrites: Vec<RewriteEntry>,
}

fn custom_family() -> Family {
    Family::Custom
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub symbol: char,
    pub order: u8,
    /// Cycle notation on `0..p`, e.g. `"(0 1 2)"`.
    pub root: String,
    /// `p` words in the word grammar.
    pub sections: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewriteEntry {
    pub lhs: String,
    pub rhs: String,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The Gupta–Sidki group on the `p`-regular tree: `a` is the rooted cycle
/// `i ↦ i+1` and `b = (a, a⁻¹, 1, …, 1, b)`.
pub fn gupta_sidki(p: usize) -> Result<GroupPreset> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let mut sections = vec![String::new(); p];
    sections[0] = "a".into();
    sections[1] = "a^-1".into();
    sections[p - 1] = "b".into();
    let file = PresetFile {
        name: format!("gs{p}"),
        p,
        family: Family::GuptaSidki,
        generators: vec![
            GeneratorEntry {
                symbol: 'a',
                order: p as u8,
                root: Perm::rotation(p, 1).to_string(),
                sections: vec![String::new(); p],
            },
            GeneratorEntry {
                symbol: 'b',
                order: p as u8,
                root: "()".into(),
                sections,
            },
        ],
        rewrites: Vec::new(),
    };
    GroupPreset::from_file(&file)
}

/// The first Grigorchuk group: `a` swaps the two subtrees,
/// `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
pub fn grigorchuk() -> GroupPreset {
    let gen = |symbol, root: &str, s0: &str, s1: &str| GeneratorEntry {
        symbol,
        order: 2,
        root: root.into(),
        sections: vec![s0.into(), s1.into()],
    };
    let rw = |lhs: &str, rhs: &str| RewriteEntry {
        lhs: lhs.into(),
        rhs: rhs.into(),
    };
    let file = PresetFile {
        name: "grigorchuk".into(),
        p: 2,
        family: Family::Grigorchuk,
        generators: vec![
            gen('a', "(0 1)", "", ""),
            gen('b', "()", "a", "c"),
            gen('c', "()", "a", "d"),
            gen('d', "()", "", "b"),
        ],
        rewrites: vec![
            rw("b c", "d"),
            rw("c b", "d"),
            rw("b d", "c"),
            rw("d b", "c"),
            rw("c d", "b"),
            rw("d c", "b"),
        ],
    };
    GroupPreset::from_file(&file).expect("built-in Grigorchuk table is well formed")
}

/// Looks up a built-in preset by id: `gs3`, `gs5`, `gs7`, … or `grigorchuk`.
pub fn builtin(id: &str) -> Option<GroupPreset> {
    if id == "grigorchuk" {
        return Some(grigorchuk());
    }
    let p: usize = id.strip_prefix("gs")?.parse().ok()?;
    gupta_sidki(p).ok()
}

impl GroupPreset {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: PresetFile =
            toml::from_str(text).map_err(|e| Error::InvalidPreset(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("preset tables always serialize")
    }

    pub fn from_file(file: &PresetFile) -> Result<Self> {
        let p = file.p;
        if p < 2 {
            return Err(Error::InvalidPreset(format!("arity {p} is below 2")));
        }
        if file.generators.is_empty() || file.generators.len() > 26 {
            return Err(Error::InvalidPreset("need between 1 and 26 generators".into()));
        }
        let mut preset = GroupPreset {
            name: file.name.clone(),
            family: file.family,
            arity: p,
            generators: Vec::with_capacity(file.generators.len()),
            rewrites: HashMap::new(),
        };
        // Roots and orders first, so section words can be parsed against the alphabet.
        for entry in &file.generators {
            if !entry.symbol.is_ascii_lowercase() {
                return Err(Error::InvalidPreset(format!(
                    "symbol `{}` must be a lowercase ASCII letter",
                    entry.symbol
                )));
            }
            if preset.generators.iter().any(|g| g.name == entry.symbol) {
                return Err(Error::InvalidPreset(format!("duplicate symbol `{}`", entry.symbol)));
            }
            if entry.order < 2 {
                return Err(Error::InvalidPreset(format!(
                    "symbol `{}` has order {} (< 2)",
                    entry.symbol, entry.order
                )));
            }
            if entry.sections.len() != p {
                return Err(Error::InvalidPreset(format!(
                    "symbol `{}` has {} sections, expected {p}",
                    entry.symbol,
                    entry.sections.len()
                )));
            }
            preset.generators.push(Generator {
                name: entry.symbol,
                order: entry.order,
                root: Perm::parse_cycles(&entry.root, p)?,
                sections: Vec::new(),
                rooted: false,
            });
        }
        for rewrite in &file.rewrites {
            let lhs = preset.parse_raw(&rewrite.lhs)?;
            let rhs = preset.parse_raw(&rewrite.rhs)?;
            let as_letter = |(sym, exp): (u8, i64)| -> Result<Letter> {
                let order = preset.generators[sym as usize].order as i64;
                let exp = exp.rem_euclid(order);
                if exp == 0 {
                    return Err(Error::InvalidPreset(format!("rewrite `{}` has a trivial letter", rewrite.lhs)));
                }
                Ok(Letter::new(sym, exp as u8))
            };
            if lhs.len() != 2 || lhs[0].0 == lhs[1].0 || rhs.len() > 1 {
                return Err(Error::InvalidPreset(format!(
                    "rewrite `{} -> {}` must replace two distinct letters by at most one",
                    rewrite.lhs, rewrite.rhs
                )));
            }
            let key = (as_letter(lhs[0])?, as_letter(lhs[1])?);
            let value = rhs.first().copied().map(as_letter).transpose()?;
            preset.rewrites.insert(key, value);
        }
        for (i, entry) in file.generators.iter().enumerate() {
            let sections = entry
                .sections
                .iter()
                .map(|s| preset.parse_word(s))
                .collect::<Result<Vec<_>>>()?;
            let rooted = sections.iter().all(Word::is_identity);
            let g = &mut preset.generators[i];
            g.sections = sections;
            g.rooted = rooted;
        }
        if !preset.generators.iter().any(|g| g.rooted && !g.root.is_identity()) {
            return Err(Error::InvalidPreset("no rooted generator".into()));
        }
        Ok(preset)
    }

    pub fn to_file(&self) -> PresetFile {
        let mut rewrites: Vec<RewriteEntry> = self
            .rewrites
            .iter()
            .map(|(&(x, y), z)| RewriteEntry {
                lhs: self.format_word(&Word::from_reduced(vec![x, y])),
                rhs: match z {
                    Some(z) => self.format_word(&Word::from_reduced(vec![*z])),
                    None => String::new(),
                },
            })
            .collect();
        rewrites.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        PresetFile {
            name: self.name.clone(),
            p: self.arity,
            family: self.family,
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorEntry {
                    symbol: g.name,
                    order: g.order,
                    root: g.root.to_string(),
                    sections: g.sections.iter().map(|w| self.format_word(w)).collect(),
                })
                .collect(),
            rewrites,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Branching degree `p` of the tree.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, sym: u8) -> &Generator {
        &self.generators[sym as usize]
    }

    pub fn symbol_index(&self, name: char) -> Result<u8> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// The first rooted generator with nontrivial root action (`a` in both built-in families).
    pub fn rooted_symbol(&self) -> u8 {
        self.generators
            .iter()
            .position(|g| g.rooted && !g.root.is_identity())
            .expect("validated at construction") as u8
    }

    pub fn is_gupta_sidki(&self) -> bool {
        self.family == Family::GuptaSidki
    }

    // ---- word algebra ----

    /// Free reduction with exponents folded modulo symbol orders and preset rewrites applied.
    pub fn reduce_raw(&self, raw: impl IntoIterator<Item = (u8, i64)>) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for (sym, exp) in raw {
            let order = self.generators[sym as usize].order as i64;
            let exp = exp.rem_euclid(order);
            if exp != 0 {
                self.push_letter(&mut stack, Letter::new(sym, exp as u8));
            }
        }
        Word::from_reduced(stack)
    }

    fn push_letter(&self, stack: &mut Vec<Letter>, mut letter: Letter) {
        loop {
            let Some(&top) = stack.last() else {
                stack.push(letter);
                return;
            };
            if top.sym == letter.sym {
                stack.pop();
                let order = self.generators[letter.sym as usize].order;
                let exp = (top.exp as u16 + letter.exp as u16) % order as u16;
                if exp == 0 {
                    return;
                }
                letter = Letter::new(letter.sym, exp as u8);
                continue;
            }
            match self.rewrites.get(&(top, letter)) {
                Some(&replacement) => {
                    stack.pop();
                    match replacement {
                        Some(l) => letter = l,
                        None => return,
                    }
                }
                None => {
                    stack.push(letter);
                    return;
                }
            }
        }
    }

    /// Reduces a sequence of `(symbol, exponent)` letters given by name.
    pub fn reduce(&self, letters: &[(char, i64)]) -> Result<Word> {
        let raw = letters
            .iter()
            .map(|&(name, exp)| Ok((self.symbol_index(name)?, exp)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.reduce_raw(raw))
    }

    pub fn letter_word(&self, sym: u8, exp: i64) -> Word {
        self.reduce_raw([(sym, exp)])
    }

    pub fn mul(&self, g: &Word, h: &Word) -> Word {
        let mut stack = g.letters().to_vec();
        for &l in h.letters() {
            self.push_letter(&mut stack, l);
        }
        Word::from_reduced(stack)
    }

    pub fn product<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut stack = Vec::new();
        for w in words {
            for &l in w.letters() {
                self.push_letter(&mut stack, l);
            }
        }
        Word::from_reduced(stack)
    }

    pub fn inverse(&self, g: &Word) -> Word {
        self.reduce_raw(g.letters().iter().rev().map(|l| (l.sym, -(l.exp as i64))))
    }

    pub fn pow(&self, g: &Word, e: i64) -> Word {
        let base = if e < 0 { self.inverse(g) } else { g.clone() };
        let mut stack = Vec::new();
        for _ in 0..e.unsigned_abs() {
            for &l in base.letters() {
                self.push_letter(&mut stack, l);
            }
        }
        Word::from_reduced(stack)
    }

    /// `g^h = h⁻¹ g h`.
    pub fn conj(&self, g: &Word, h: &Word) -> Word {
        self.product([&self.inverse(h), g, h])
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`.
    pub fn comm(&self, g: &Word, h: &Word) -> Word {
        self.product([&self.inverse(g), &self.inverse(h), g, h])
    }

    /// `b_i = b^(a^i)` in a Gupta–Sidki preset; more generally the symbol
    /// conjugated by a power of the rooted generator.
    pub fn indexed(&self, sym: u8, index: i64) -> Word {
        let a = self.rooted_symbol();
        self.reduce_raw([(a, -index), (sym, 1), (a, index)])
    }

    /// Number of maximal runs of non-rooted letters; an upper bound for the
    /// minimal syllable length of the element.
    pub fn syllable_length(&self, g: &Word) -> usize {
        let mut count = 0;
        let mut in_run = false;
        for l in g.letters() {
            let directed = !self.generators[l.sym as usize].rooted;
            if directed && !in_run {
                count += 1;
            }
            in_run = directed;
        }
        count
    }

    /// Maximum syllable length over a set of words.
    pub fn max_syllable_length<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> usize {
        words.into_iter().map(|w| self.syllable_length(w)).max().unwrap_or(0)
    }

    /// Rewrites a Gupta–Sidki word as `b_{i_1}^{r_1} ⋯ b_{i_m}^{r_m} a^v`.
    pub fn gs_syllables(&self, g: &Word) -> GsSyllables {
        let a = self.rooted_symbol();
        let p = self.arity as i64;
        let mut shift = 0i64;
        let mut syllables = Vec::new();
        for l in g.letters() {
            if l.sym == a {
                shift += l.exp as i64;
            } else {
                syllables.push(((-shift).rem_euclid(p) as u8, l.exp));
            }
        }
        GsSyllables {
            syllables,
            a_exponent: shift.rem_euclid(p) as u8,
        }
    }

    // ---- text form ----

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Ok(self.reduce_raw(self.parse_raw(text)?))
    }

    fn parse_raw(&self, text: &str) -> Result<Vec<(u8, i64)>> {
        let expr = parse::parse(text)?;
        let mut out = Vec::new();
        self.eval(&expr, &mut out)?;
        Ok(out)
    }

    fn eval(&self, expr: &Expr, out: &mut Vec<(u8, i64)>) -> Result<()> {
        match expr {
            Expr::Identity => {}
            Expr::Symbol { name, .. } => out.push((self.symbol_index(*name)?, 1)),
            Expr::Indexed { name, index, .. } => {
                let sym = self.symbol_index(*name)?;
                let a = self
                    .generators
                    .iter()
                    .position(|g| g.rooted && !g.root.is_identity())
                    .ok_or_else(|| Error::UnknownSymbol(format!("{name}{index}")))?
                    as u8;
                let i = *index as i64;
                out.extend([(a, -i), (sym, 1), (a, i)]);
            }
            Expr::Product(terms) => {
                for t in terms {
                    self.eval(t, out)?;
                }
            }
            Expr::Power(base, e) => {
                let mut inner = Vec::new();
                self.eval(base, &mut inner)?;
                let piece: Vec<(u8, i64)> = if *e < 0 {
                    inner.iter().rev().map(|&(s, x)| (s, -x)).collect()
                } else {
                    inner
                };
                // Long powers are folded through reduction so `a^1000000` stays cheap.
                let reduced = self.reduce_raw(piece);
                let folded = self.pow(&reduced, e.unsigned_abs() as i64);
                out.extend(folded.letters().iter().map(|l| (l.sym, l.exp as i64)));
            }
            Expr::Conjugate(g, h) => {
                let mut gw = Vec::new();
                let mut hw = Vec::new();
                self.eval(g, &mut gw)?;
                self.eval(h, &mut hw)?;
                out.extend(hw.iter().rev().map(|&(s, x)| (s, -x)));
                out.extend(gw);
                out.extend(hw);
            }
            Expr::Commutator(g, h) => {
                let mut gw = Vec::new();
                let mut hw = Vec::new();
                self.eval(g, &mut gw)?;
                self.eval(h, &mut hw)?;
                out.extend(gw.iter().rev().map(|&(s, x)| (s, -x)));
                out.extend(hw.iter().rev().map(|&(s, x)| (s, -x)));
                out.extend(gw);
                out.extend(hw);
            }
        }
        Ok(())
    }

    /// Prints a word in the grammar accepted by [`GroupPreset::parse_word`];
    /// exponents are shown in the symmetric range, the identity as `1`.
    pub fn format_word(&self, g: &Word) -> String {
        if g.is_identity() {
            return "1".into();
        }
        let parts: Vec<String> = g
            .letters()
            .iter()
            .map(|l| {
                let gen = &self.generators[l.sym as usize];
                let order = gen.order as i32;
                let e = l.exp as i32;
                let e = if 2 * e > order { e - order } else { e };
                if e == 1 {
                    gen.name.to_string()
                } else {
                    format!("{}^{}", gen.name, e)
                }
            })
            .collect();
        parts.join(" ")
    }

    pub fn display<'a>(&'a self, g: &'a Word) -> WordDisplay<'a> {
        WordDisplay { preset: self, word: g }
    }
}

/// `b_{i_1}^{r_1} ⋯ b_{i_m}^{r_m} a^v` form of a Gupta–Sidki word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsSyllables {
    /// `(i_j, r_j)` pairs in order.
    pub syllables: Vec<(u8, u8)>,
    pub a_exponent: u8,
}

pub struct WordDisplay<'a> {
    preset: &'a GroupPreset,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.preset.format_word(self.word))
    }
}
