//! The level tree: a vertex at level n ≥ 1 is a cyclic subgroup of order 2ⁿ
//! in (ℤ/2ⁿ)², written in a row/column normal form. Children refine a vertex
//! one level deeper, the twin is the sibling sharing its parent, and level-1
//! twins rotate cyclically through the three 2-torsion directions.

use crate::{Error, Result};

/// Levels are capped so generators fit comfortably in u64 arithmetic.
pub const MAX_LEVEL: u32 = 32;

/// Normal form of a cyclic order-2ⁿ subgroup of (ℤ/2ⁿ)².
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    /// ⟨(1, b)⟩ with b taken mod 2ⁿ.
    Row(u64),
    /// ⟨(2c, 1)⟩ with c taken mod 2ⁿ⁻¹.
    Col(u64),
}

/// A tree vertex: a level together with a normal-form label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    level: u32,
    label: Label,
}

impl Vertex {
    pub fn new(level: u32, label: Label) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level,
                max: MAX_LEVEL,
            });
        }
        match label {
            Label::Row(b) if b < (1u64 << level) => Ok(Vertex { level, label }),
            Label::Col(c) if c < (1u64 << (level - 1)) => Ok(Vertex { level, label }),
            _ => Err(Error::Config(format!(
                "label out of range at level {level}: {label:?}"
            ))),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// The three level-1 vertices in torsion order: directions 1, 2, 3.
    pub fn roots() -> [Vertex; 3] {
        [
            Vertex {
                level: 1,
                label: Label::Row(0),
            },
            Vertex {
                level: 1,
                label: Label::Col(0),
            },
            Vertex {
                level: 1,
                label: Label::Row(1),
            },
        ]
    }

    /// Which of the three level-1 subtrees this vertex belongs to (1, 2, 3).
    pub fn alpha_index(&self) -> usize {
        match self.label {
            Label::Row(b) => {
                if b & 1 == 0 {
                    1
                } else {
                    3
                }
            }
            Label::Col(_) => 2,
        }
    }

    /// The two children, one level deeper, in canonical order.
    pub fn children(&self) -> Result<[Vertex; 2]> {
        let n = self.level;
        if n + 1 > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level: n + 1,
                max: MAX_LEVEL,
            });
        }
        Ok(match self.label {
            Label::Row(b) => [
                Vertex {
                    level: n + 1,
                    label: Label::Row(b),
                },
                Vertex {
                    level: n + 1,
                    label: Label::Row(b + (1 << n)),
                },
            ],
            Label::Col(c) => [
                Vertex {
                    level: n + 1,
                    label: Label::Col(c),
                },
                Vertex {
                    level: n + 1,
                    label: Label::Col(c + (1 << (n - 1))),
                },
            ],
        })
    }

    /// The parent, one level up; `None` for level-1 vertices.
    pub fn parent(&self) -> Option<Vertex> {
        let n = self.level;
        if n == 1 {
            return None;
        }
        Some(match self.label {
            Label::Row(b) => Vertex {
                level: n - 1,
                label: Label::Row(b & ((1 << (n - 1)) - 1)),
            },
            Label::Col(c) => Vertex {
                level: n - 1,
                label: Label::Col(c & ((1 << (n - 2)) - 1)),
            },
        })
    }

    /// The twin: at level ≥ 2 the sibling under the same parent (an
    /// involution); at level 1 the cyclic shift 1 → 2 → 3 → 1.
    pub fn twin(&self) -> Vertex {
        let n = self.level;
        if n == 1 {
            let [v1, v2, v3] = Vertex::roots();
            return match self.label {
                Label::Row(0) => v2,
                Label::Col(0) => v3,
                Label::Row(1) => v1,
                _ => unreachable!("level-1 labels are Row(0), Col(0), Row(1)"),
            };
        }
        match self.label {
            Label::Row(b) => Vertex {
                level: n,
                label: Label::Row(b ^ (1 << (n - 1))),
            },
            Label::Col(c) => Vertex {
                level: n,
                label: Label::Col(c ^ (1 << (n - 2))),
            },
        }
    }

    /// Path bits below level 1: entry j is the child index chosen at level
    /// j + 2 along the root-to-vertex path.
    pub fn path_bits(&self) -> Vec<u8> {
        let n = self.level as usize;
        match self.label {
            Label::Row(b) => (1..n).map(|k| ((b >> k) & 1) as u8).collect(),
            Label::Col(c) => (0..n - 1).map(|k| ((c >> k) & 1) as u8).collect(),
        }
    }

    /// Render as "level:σ b₂…bₙ" with σ the level-1 direction, e.g. "3:102".
    pub fn path_string(&self) -> String {
        let bits: String = self
            .path_bits()
            .iter()
            .map(|b| char::from(b'0' + b))
            .collect();
        format!("{}:{}{}", self.level, self.alpha_index(), bits)
    }

    /// Parse the format produced by [`Vertex::path_string`].
    pub fn from_path(s: &str) -> Result<Vertex> {
        let bad = || Error::Config(format!("bad vertex path: {s:?}"));
        let (lvl, rest) = s.split_once(':').ok_or_else(bad)?;
        let level: u32 = lvl.parse().map_err(|_| bad())?;
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level,
                max: MAX_LEVEL,
            });
        }
        let mut chars = rest.chars();
        let sigma = chars.next().ok_or_else(bad)?;
        let bits: Vec<u8> = chars
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        if bits.len() != (level - 1) as usize {
            return Err(bad());
        }
        let packed = |shift: usize| -> u64 {
            bits.iter()
                .enumerate()
                .map(|(j, &b)| (b as u64) << (j + shift))
                .sum()
        };
        let label = match sigma {
            '1' => Label::Row(packed(1)),
            '3' => Label::Row(1 + packed(1)),
            '2' => Label::Col(packed(0)),
            _ => return Err(bad()),
        };
        Vertex::new(level, label)
    }

    /// Generator of the subgroup, reduced mod 2^level.
    pub fn generator(&self) -> (u64, u64) {
        let m = 1u64 << self.level;
        match self.label {
            Label::Row(b) => (1, b % m),
            Label::Col(c) => ((2 * c) % m, 1),
        }
    }

    /// All 2^level elements of the subgroup, sorted (small levels only).
    pub fn subgroup(&self) -> Vec<(u64, u64)> {
        assert!(self.level <= 16, "subgroup enumeration is for small levels");
        let m = 1u64 << self.level;
        let (gx, gy) = self.generator();
        let mut elems: Vec<(u64, u64)> = (0..m).map(|k| ((k * gx) % m, (k * gy) % m)).collect();
        elems.sort_unstable();
        elems.dedup();
        elems
    }

    /// All vertices at level n in canonical order (direction, then path bits).
    pub fn level_vertices(n: u32) -> Result<Vec<Vertex>> {
        if n == 0 || n > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level: n,
                max: MAX_LEVEL,
            });
        }
        let mut out: Vec<Vertex> = Vec::new();
        for b in 0..(1u64 << n) {
            out.push(Vertex {
                level: n,
                label: Label::Row(b),
            });
        }
        for c in 0..(1u64 << (n - 1)) {
            out.push(Vertex {
                level: n,
                label: Label::Col(c),
            });
        }
        out.sort_by_key(|v| v.sort_key());
        Ok(out)
    }

    /// Canonical ordering key: (level, direction, path bits left-to-right).
    pub fn sort_key(&self) -> (u32, usize, u64) {
        let bits = self.path_bits();
        let packed = bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | (b as u64));
        (self.level, self.alpha_index(), packed)
    }
}
