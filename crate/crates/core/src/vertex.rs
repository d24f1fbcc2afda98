use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex of the regular rooted tree, addressed by its path from the root.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(path: Vec<u8>) -> Self {
        Vertex(path)
    }

    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "root" {
            return Ok(Vertex::root());
        }
        text.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if (d as usize) < arity => Ok(d as u8),
                Some(d) => Err(Error::BadVertex { digit: d, arity }),
                None => Err(Error::Parse {
                    position: 0,
                    message: format!("`{text}` is not a vertex path"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Vertex)
    }

    pub fn path(&self) -> &[u8] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, digit: u8) -> Vertex {
        let mut path = self.0.clone();
        path.push(digit);
        Vertex(path)
    }

    /// The parent vertex and the last digit of the path; `None` at the root.
    pub fn parent(&self) -> Option<(Vertex, u8)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Vertex(rest.to_vec()), last))
    }

    /// `self · other`: the vertex `other` of the subtree hanging at `self`.
    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut path = self.0.clone();
        path.extend_from_slice(&other.0);
        Vertex(path)
    }

    /// Index of this vertex among its level, reading the path as a base-`arity` numeral.
    pub fn index(&self, arity: usize) -> usize {
        self.0.iter().fold(0, |acc, &d| acc * arity + d as usize)
    }

    pub fn from_index(mut index: usize, level: usize, arity: usize) -> Vertex {
        let mut path = vec![0u8; level];
        for slot in path.iter_mut().rev() {
            *slot = (index % arity) as u8;
            index /= arity;
        }
        Vertex(path)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Parses a path with digits up to 9; callers that know the arity should use [`Vertex::parse`].
    fn from_str(s: &str) -> Result<Self> {
        Vertex::parse(s, 10)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Serialized as its path string, `"ε"` for the root.
impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_most_significant_first() {
        let v = Vertex::parse("12", 3).unwrap();
        assert_eq!(v.index(3), 5);
        assert_eq!(Vertex::from_index(5, 2, 3), v);
        assert_eq!(Vertex::root().index(3), 0);
        assert_eq!(v.level(), 2);
    }

    #[test]
    fn parse_checks_arity() {
        assert!(matches!(
            Vertex::parse("3", 3),
            Err(Error::BadVertex { digit: 3, arity: 3 })
        ));
        assert!(Vertex::parse("", 3).unwrap().is_root());
        assert_eq!(Vertex::parse("2", 3).unwrap().to_string(), "2");
    }
}
