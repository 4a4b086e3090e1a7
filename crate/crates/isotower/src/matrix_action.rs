//! GL₂ over ℤ/2ⁿ acting on the level tree: a matrix moves a level-k vertex
//! by transforming its generator mod 2^k and re-normalizing the label.

use crate::tree::{Label, Vertex};
use crate::{Error, Result};

/// A 2×2 integer matrix acting through reduction mod 2^level.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mat2 {
    /// Row-major entries [[a, b], [c, d]].
    pub m: [[u64; 2]; 2],
}

impl Mat2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn scalar(r: u64) -> Self {
        Mat2::new(r, 0, 0, r)
    }

    pub fn reduce(&self, modulus: u64) -> Self {
        Mat2::new(
            self.m[0][0] % modulus,
            self.m[0][1] % modulus,
            self.m[1][0] % modulus,
            self.m[1][1] % modulus,
        )
    }

    pub fn det_mod(&self, modulus: u64) -> u64 {
        let ad = self.m[0][0].wrapping_mul(self.m[1][1]) % modulus;
        let bc = self.m[0][1].wrapping_mul(self.m[1][0]) % modulus;
        (ad + modulus - bc) % modulus
    }

    /// Invertible mod a power of two iff the determinant is odd.
    pub fn is_invertible_pow2(&self, modulus: u64) -> bool {
        self.det_mod(modulus) % 2 == 1
    }

    pub fn mul_mod(&self, other: &Mat2, modulus: u64) -> Mat2 {
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..2).fold(0u64, |acc, k| {
                    (acc + self.m[i][k] * other.m[k][j]) % modulus
                });
            }
        }
        Mat2 { m: out }
    }

    /// Apply to a vertex: transform the generator column mod 2^level and
    /// renormalize. Requires invertibility mod 2^level.
    pub fn act(&self, v: &Vertex) -> Result<Vertex> {
        let n = v.level();
        let modulus = 1u64 << n;
        if !self.is_invertible_pow2(modulus) {
            return Err(Error::Config(format!(
                "matrix {:?} is not invertible mod 2^{n}",
                self.m
            )));
        }
        let (x, y) = v.generator();
        let mm = self.reduce(modulus);
        let xp = (mm.m[0][0] * x % modulus + mm.m[0][1] * y % modulus) % modulus;
        let yp = (mm.m[1][0] * x % modulus + mm.m[1][1] * y % modulus) % modulus;
        let label = if xp % 2 == 1 {
            let inv = inv_mod_pow2(xp, modulus);
            Label::Row((yp * inv) % modulus)
        } else {
            debug_assert_eq!(
                yp % 2,
                1,
                "an invertible matrix keeps generators primitive"
            );
            let inv = inv_mod_pow2(yp, modulus);
            let twice_c = (xp * inv) % modulus;
            Label::Col((twice_c / 2) % (modulus / 2).max(1))
        };
        Vertex::new(n, label)
    }
}

/// Inverse of an odd residue mod a power of two ≤ 2³² (Newton iteration:
/// the number of correct low bits doubles each round, working mod 2⁶⁴).
pub fn inv_mod_pow2(x: u64, modulus: u64) -> u64 {
    assert!(x % 2 == 1 && modulus.is_power_of_two() && modulus <= (1u64 << 32));
    let mut inv: u64 = 1;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(x.wrapping_mul(inv)));
    }
    inv % modulus
}

/// All invertible matrices mod 2ⁿ (exhaustive; small n only).
pub fn gl2_elements(n: u32) -> Vec<Mat2> {
    assert!(n <= 4, "exhaustive enumeration is for small levels");
    let m = 1u64 << n;
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mat = Mat2::new(a, b, c, d);
                    if mat.is_invertible_pow2(m) {
                        out.push(mat);
                    }
                }
            }
        }
    }
    out
}

/// Order of GL₂(ℤ/2ⁿ) by the closed formula 6·2^{4(n−1)}.
pub fn gl2_order_formula(n: u32) -> u64 {
    6 * (1u64 << (4 * (n - 1)))
}

/// Matrices mod 2ⁿ fixing every vertex at levels 1..=n (exhaustive search).
pub fn full_level_stabilizer(n: u32) -> Result<Vec<Mat2>> {
    let mut verts = Vec::new();
    for k in 1..=n {
        verts.extend(Vertex::level_vertices(k)?);
    }
    let mut out = Vec::new();
    for mat in gl2_elements(n) {
        let fixes_all = verts
            .iter()
            .all(|v| mat.act(v).map(|w| w == *v).unwrap_or(false));
        if fixes_all {
            out.push(mat);
        }
    }
    Ok(out)
}

/// The odd scalar matrices mod 2ⁿ.
pub fn odd_scalars(n: u32) -> Vec<Mat2> {
    let m = 1u64 << n;
    (1..m).step_by(2).map(Mat2::scalar).collect()
}

/// Determinant-one matrices mod 2^{n+1} congruent to the identity mod 2ⁿ.
/// Writing M = I + 2ⁿA, the determinant is 1 + 2ⁿ·tr(A) mod 2^{n+1}, so the
/// condition is that tr(A) is even; the eight solutions form an elementary
/// abelian group of exponent 2.
pub fn relative_kernel(n: u32) -> Vec<Mat2> {
    assert!(n + 1 <= 32);
    let modulus = 1u64 << (n + 1);
    let step = 1u64 << n;
    let mut out = Vec::new();
    for a in 0..2u64 {
        for b in 0..2u64 {
            for c in 0..2u64 {
                for d in 0..2u64 {
                    let mat = Mat2::new(
                        (1 + a * step) % modulus,
                        b * step,
                        c * step,
                        (1 + d * step) % modulus,
                    );
                    if mat.det_mod(modulus) == 1 {
                        out.push(mat);
                    }
                }
            }
        }
    }
    out
}
