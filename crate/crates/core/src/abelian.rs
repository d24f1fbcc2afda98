//! Abelianization maps.
//!
//! For a Gupta–Sidki group `G/G' ≅ C_p × C_p` with coordinates the exponent
//! sums of `a` and `b`. The Grigorchuk group abelianizes to `C_2^3`; there `b`,
//! `c`, `d` map to `(0,1,0)`, `(0,0,1)`, `(0,1,1)` so that `bcd ↦ 0`.

use serde::Serialize;

use crate::preset::{Family, GroupPreset};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianImage {
    pub modulus: u32,
    pub coords: Vec<u32>,
}

impl AbelianImage {
    pub fn zero(modulus: u32, dim: usize) -> Self {
        AbelianImage {
            modulus,
            coords: vec![0; dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &AbelianImage) -> AbelianImage {
        AbelianImage {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| (x + y) % self.modulus)
                .collect(),
        }
    }
}

pub fn abelianization_image(g: &Word, preset: &GroupPreset) -> AbelianImage {
    match preset.family() {
        Family::Grigorchuk => {
            let mut image = AbelianImage::zero(2, 3);
            for l in g.letters() {
                let bump: &[usize] = match preset.generator(l.sym).name {
                    'a' => &[0],
                    'b' => &[1],
                    'c' => &[2],
                    _ => &[1, 2],
                };
                for &i in bump {
                    image.coords[i] ^= (l.exp % 2) as u32;
                }
            }
            image
        }
        // Gupta–Sidki and custom GGS-shaped presets: exponent sum per symbol.
        _ => {
            let n = preset.generators().len();
            let modulus = preset.arity() as u32;
            let mut image = AbelianImage::zero(modulus, n);
            for l in g.letters() {
                let c = &mut image.coords[l.sym as usize];
                *c = (*c + l.exp as u32) % modulus;
            }
            image
        }
    }
}

/// Exact `G'` membership: the abelianization is the full invariant of `G/G'`.
pub fn in_derived_subgroup_image(g: &Word, preset: &GroupPreset) -> bool {
    abelianization_image(g, preset).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{grigorchuk, gupta_sidki};

    #[test]
    fn gupta_sidki_images() {
        let g = gupta_sidki(3).unwrap();
        let img = |t: &str| abelianization_image(&g.parse_word(t).unwrap(), &g).coords;
        assert_eq!(img("a"), vec![1, 0]);
        assert_eq!(img("[a,b]"), vec![0, 0]);
        assert_eq!(img("b1 b2"), vec![0, 2]);
        assert_eq!(img("b"), vec![0, 1]);
    }

    #[test]
    fn derived_membership() {
        let g = gupta_sidki(3).unwrap();
        let is_in = |t: &str| in_derived_subgroup_image(&g.parse_word(t).unwrap(), &g);
        assert!(is_in("[b,a]"));
        assert!(!is_in("b"));
        assert!(is_in("b b1 b2"));
    }

    #[test]
    fn grigorchuk_relation_dies() {
        let g = grigorchuk();
        // Built letter by letter so the rewrite rules do not fold it first.
        let w = Word::from_reduced(vec![
            crate::word::Letter::new(1, 1),
            crate::word::Letter::new(0, 1),
            crate::word::Letter::new(2, 1),
            crate::word::Letter::new(0, 1),
            crate::word::Letter::new(3, 1),
        ]);
        assert_eq!(abelianization_image(&w, &g).coords, vec![0, 0, 0]);
    }
}
