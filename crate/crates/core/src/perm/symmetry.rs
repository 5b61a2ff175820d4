//! The eight symmetries of the permutation diagram (the dihedral group of the
//! square), acting on permutations and on insertion slots.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{Permutation, Slot};
use crate::error::{Error, Result};

/// An isometry of the square applied to permutation diagrams.
///
/// Each element is realised as an optional transpose (swap position and
/// value), followed by an optional reversal of positions, followed by an
/// optional complement of values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    Identity,
    /// Quarter turn counter-clockwise.
    Rotate90,
    Rotate180,
    Rotate270,
    Reverse,
    Complement,
    Inverse,
    /// Reflection in the anti-diagonal (reverse ∘ complement ∘ inverse).
    AntiDiagonal,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::Reverse,
        Symmetry::Complement,
        Symmetry::Inverse,
        Symmetry::AntiDiagonal,
    ];

    /// (transpose, reverse, complement)
    fn flags(self) -> (bool, bool, bool) {
        match self {
            Symmetry::Identity => (false, false, false),
            Symmetry::Rotate90 => (true, true, false),
            Symmetry::Rotate180 => (false, true, true),
            Symmetry::Rotate270 => (true, false, true),
            Symmetry::Reverse => (false, true, false),
            Symmetry::Complement => (false, false, true),
            Symmetry::Inverse => (true, false, false),
            Symmetry::AntiDiagonal => (true, true, true),
        }
    }

    fn from_flags(flags: (bool, bool, bool)) -> Symmetry {
        Symmetry::ALL
            .into_iter()
            .find(|s| s.flags() == flags)
            .expect("all eight flag combinations are named")
    }

    /// Signed permutation matrix acting on centred coordinates.
    fn matrix(self) -> [[i8; 2]; 2] {
        let (t, r, c) = self.flags();
        let mut m = if t {
            [[0, 1], [1, 0]]
        } else {
            [[1, 0], [0, 1]]
        };
        if r {
            m[0] = [-m[0][0], -m[0][1]];
        }
        if c {
            m[1] = [-m[1][0], -m[1][1]];
        }
        m
    }

    fn from_matrix(m: [[i8; 2]; 2]) -> Symmetry {
        let t = m[0][0] == 0;
        let (r, c) = if t {
            (m[0][1] < 0, m[1][0] < 0)
        } else {
            (m[0][0] < 0, m[1][1] < 0)
        };
        Symmetry::from_flags((t, r, c))
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(self, other: Symmetry) -> Symmetry {
        let a = self.matrix();
        let b = other.matrix();
        let mut m = [[0i8; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Symmetry::from_matrix(m)
    }

    pub fn inverse(self) -> Symmetry {
        match self {
            Symmetry::Rotate90 => Symmetry::Rotate270,
            Symmetry::Rotate270 => Symmetry::Rotate90,
            other => other,
        }
    }

    /// Maps a point `(x, y)` of an `size × size` grid (1-based) to its image.
    fn map_point(self, x: usize, y: usize, size: usize) -> (usize, usize) {
        let (t, r, c) = self.flags();
        let (mut x, mut y) = if t { (y, x) } else { (x, y) };
        if r {
            x = size + 1 - x;
        }
        if c {
            y = size + 1 - y;
        }
        (x, y)
    }

    pub fn apply(self, p: &Permutation) -> Permutation {
        let n = p.len();
        let mut out = vec![0u16; n];
        for (i, &v) in p.values().iter().enumerate() {
            let (x, y) = self.map_point(i + 1, v as usize, n);
            out[x - 1] = y as u16;
        }
        Permutation::from_vec_unchecked(out)
    }

    /// Image of an insertion slot of a length-`n` permutation. Slots live on
    /// the `(n+1) × (n+1)` grid of gaps, which the symmetry acts on in the
    /// same way as on points.
    pub fn apply_slot(self, slot: Slot, n: usize) -> Slot {
        let (x, y) = self.map_point(slot.pos_slot, slot.val_slot, n + 1);
        Slot::new(x, y)
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Identity => "identity",
            Symmetry::Rotate90 => "r",
            Symmetry::Rotate180 => "r2",
            Symmetry::Rotate270 => "r3",
            Symmetry::Reverse => "reverse",
            Symmetry::Complement => "complement",
            Symmetry::Inverse => "inverse",
            Symmetry::AntiDiagonal => "antidiagonal",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let sym = match key.as_str() {
            "identity" | "id" | "e" => Symmetry::Identity,
            "r" | "r1" | "rot90" | "rotate90" => Symmetry::Rotate90,
            "r2" | "rot180" | "rotate180" => Symmetry::Rotate180,
            "r3" | "rot270" | "rotate270" => Symmetry::Rotate270,
            "reverse" | "rev" => Symmetry::Reverse,
            "complement" | "comp" => Symmetry::Complement,
            "inverse" | "inv" => Symmetry::Inverse,
            "antidiagonal" | "anti-diagonal" | "rci" => Symmetry::AntiDiagonal,
            _ => {
                return Err(Error::Parse {
                    token: s.to_string(),
                    reason: "unknown symmetry".into(),
                })
            }
        };
        Ok(sym)
    }
}

impl Serialize for Symmetry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn named_examples() {
        assert_eq!(Symmetry::Inverse.apply(&p("2413")), p("3142"));
        assert_eq!(Symmetry::Reverse.apply(&p("123")), p("321"));
        assert_eq!(Symmetry::Identity.apply(&p("25173486")), p("25173486"));
        assert_eq!(Symmetry::Complement.apply(&p("132")), p("312"));
    }

    #[test]
    fn rotation_is_reverse_after_inverse() {
        let q = p("25314");
        let rot = Symmetry::Rotate90.apply(&q);
        assert_eq!(rot, Symmetry::Reverse.apply(&Symmetry::Inverse.apply(&q)));
        let four = (0..4).fold(q.clone(), |acc, _| Symmetry::Rotate90.apply(&acc));
        assert_eq!(four, q);
    }

    #[test]
    fn group_law() {
        // 12453 has eight distinct images, so each map is identified by its image.
        let probe = p("12453");
        let images: Vec<_> = Symmetry::ALL.iter().map(|s| s.apply(&probe)).collect();
        for i in 0..8 {
            for j in (i + 1)..8 {
                assert_ne!(images[i], images[j]);
            }
        }
        for a in Symmetry::ALL {
            assert_eq!(a.compose(a.inverse()), Symmetry::Identity);
            for b in Symmetry::ALL {
                let c = a.compose(b);
                assert_eq!(c.apply(&probe), a.apply(&b.apply(&probe)), "{a} ∘ {b}");
            }
        }
    }

    #[test]
    fn parse_aliases() {
        assert_eq!("inv".parse::<Symmetry>().unwrap(), Symmetry::Inverse);
        assert_eq!("R2".parse::<Symmetry>().unwrap(), Symmetry::Rotate180);
        assert!("flip".parse::<Symmetry>().is_err());
        for s in Symmetry::ALL {
            assert_eq!(s.name().parse::<Symmetry>().unwrap(), s);
        }
    }
}
