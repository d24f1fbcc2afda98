use std::fmt::Write as _;

use serde::Serialize;

use crate::automorphism::Engine;
use crate::error::Result;
use crate::perm::Perm;
use crate::vertex::Vertex;
use crate::word::Word;

/// The root permutations of an element down to a fixed depth, with the
/// states at the vertices of that depth left as words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    pub depth: usize,
    pub arity: usize,
    /// `perms[l][i]` is the permutation at the `i`-th vertex of level `l`, for `l < depth`.
    pub perms: Vec<Vec<Perm>>,
    /// States at the `p^depth` vertices of level `depth`, in vertex index order.
    pub boundary: Vec<Word>,
}

impl Engine {
    pub fn portrait(&self, g: &Word, depth: usize) -> Result<Portrait> {
        self.check_points(depth)?;
        let mut states = vec![g.clone()];
        let mut perms = Vec::with_capacity(depth);
        for _ in 0..depth {
            let mut level = Vec::with_capacity(states.len());
            let mut next = Vec::with_capacity(states.len() * self.arity());
            for s in &states {
                let d = self.decompose(s);
                level.push(d.root_perm);
                next.extend(d.sections);
            }
            perms.push(level);
            states = next;
        }
        Ok(Portrait {
            depth,
            arity: self.arity(),
            perms,
            boundary: states,
        })
    }
}

impl Portrait {
    /// Recomposes the action on level `n ≤ depth` from the stored permutations.
    pub fn level_action(&self, n: usize) -> Perm {
        assert!(n <= self.depth, "portrait only reaches level {}", self.depth);
        let p = self.arity;
        let points = p.pow(n as u32);
        let images = (0..points)
            .map(|leaf| {
                let path = Vertex::from_index(leaf, n, p);
                let mut image = 0usize;
                let mut vertex_index = 0usize;
                for (level, &digit) in path.path().iter().enumerate() {
                    let perm = &self.perms[level][vertex_index];
                    image = image * p + perm.apply(digit as usize);
                    vertex_index = vertex_index * p + digit as usize;
                }
                image as u32
            })
            .collect();
        Perm::from_images(images).expect("portrait permutations compose to a bijection")
    }

    pub fn is_trivial_to_depth(&self) -> bool {
        self.perms.iter().flatten().all(Perm::is_identity)
    }

    /// Indented rendering, one vertex per line.
    pub fn render(&self, engine: &Engine) -> String {
        let mut out = String::new();
        self.render_vertex(engine, &Vertex::root(), &mut out);
        out
    }

    fn render_vertex(&self, engine: &Engine, v: &Vertex, out: &mut String) {
        let indent = "  ".repeat(v.level());
        let index = v.index(self.arity);
        if v.level() == self.depth {
            let _ = writeln!(out, "{indent}{v}: {}", engine.show(&self.boundary[index]));
            return;
        }
        let _ = writeln!(out, "{indent}{v}: {}", self.perms[v.level()][index]);
        for digit in 0..self.arity {
            self.render_vertex(engine, &v.child(digit as u8), out);
        }
    }

    pub fn to_json(&self, engine: &Engine) -> PortraitJson {
        PortraitJson {
            depth: self.depth,
            perms: self
                .perms
                .iter()
                .map(|level| level.iter().map(|p| p.to_string()).collect())
                .collect(),
            boundary: self.boundary.iter().map(|w| engine.show(w)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PortraitJson {
    pub depth: usize,
    pub perms: Vec<Vec<String>>,
    pub boundary: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::gupta_sidki;

    #[test]
    fn identity_portrait_is_trivial() {
        let e = Engine::new(gupta_sidki(3).unwrap());
        let p = e.portrait(&Word::identity(), 2).unwrap();
        assert!(p.is_trivial_to_depth());
        assert!(p.boundary.iter().all(Word::is_identity));
        assert_eq!(p.boundary.len(), 9);
    }

    #[test]
    fn portrait_of_b_and_a() {
        let e = Engine::new(gupta_sidki(3).unwrap());
        let p = e.portrait(&e.word("b").unwrap(), 1).unwrap();
        assert!(p.perms[0][0].is_identity());
        let words: Vec<String> = p.boundary.iter().map(|w| e.show(w)).collect();
        assert_eq!(words, ["a", "a^-1", "b"]);

        let p = e.portrait(&e.word("a").unwrap(), 2).unwrap();
        assert_eq!(p.perms[0][0].to_string(), "(0 1 2)");
        assert!(p.perms[1].iter().all(Perm::is_identity));
    }

    #[test]
    fn recomposition_matches_level_action() {
        let e = Engine::new(gupta_sidki(3).unwrap());
        for text in ["b", "a b1 b^-1 a", "[a,b]^(a^-1) b2"] {
            let g = e.word(text).unwrap();
            let p = e.portrait(&g, 3).unwrap();
            for n in 1..=3 {
                assert_eq!(p.level_action(n), e.level_action(&g, n).unwrap(), "{text} level {n}");
            }
        }
    }

    #[test]
    fn render_lists_every_vertex() {
        let e = Engine::new(gupta_sidki(3).unwrap());
        let text = e.portrait(&e.word("b").unwrap(), 2).unwrap().render(&e);
        assert_eq!(text.lines().count(), 1 + 3 + 9);
        assert!(text.contains("  0: (0 1 2)"));
        assert!(text.contains("    22: b"));
    }
}
