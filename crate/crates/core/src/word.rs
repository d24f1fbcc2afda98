use std::fmt;

/// One syllable `symbol^exponent` with `1 ≤ exponent < order(symbol)`.
///
/// `sym` indexes the owning preset's alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub sym: u8,
    pub exp: u8,
}

impl Letter {
    pub const fn new(sym: u8, exp: u8) -> Self {
        Letter { sym, exp }
    }
}

/// A reduced word: adjacent letters carry distinct symbols and no preset
/// rewrite rule applies to any adjacent pair. The empty word is the identity.
///
/// Words are only produced by a [`GroupPreset`](crate::GroupPreset), which
/// owns the symbol orders needed to keep them reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same as [`Word::is_empty`]; reads better at call sites about group elements.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Word[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}^{}", l.sym, l.exp)?;
        }
        f.write_str("]")
    }
}
