//! Context-passing field abstraction with exact rational, rational-function,
//! and iterated-quadratic-tower implementations.

mod func;
mod poly;
mod rat;
mod tower;

pub use func::{FuncField, RatFunc};
pub use poly::MultiPoly;
pub use rat::{Rat, RatField};
pub use tower::{Adjoined, TowerElem, TowerField};

use crate::Result;

/// A field given as a context object; elements are passive data.
///
/// Implementations keep elements in canonical form so that structural equality
/// of `Elem` coincides with equality in the field.
pub trait Field: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_rat(&self, r: &Rat) -> Self::Elem;

    /// Complete square decision: `Some(w)` with `w·w = a` iff `a` is a square.
    /// The witness is deterministic for a fixed field value.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rat(&Rat::from(n))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn is_square(&self, a: &Self::Elem) -> bool {
        self.sqrt(a).is_some()
    }
    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }
    fn pow(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        let mut acc = self.one();
        for bit in (0..32).rev() {
            acc = self.mul(&acc, &acc);
            if n & (1 << bit) != 0 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
    /// Split `a = s²·m` with `m` kept small where the field supports it.
    /// The default performs no splitting.
    fn square_content_split(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        (self.one(), a.clone())
    }
}

/// Solve the linear system `Σ xᵢ·colsᵢ = rhs` over `f` by Gaussian elimination.
/// Returns one solution if the system is consistent.
pub fn solve_linear<C: Field>(
    f: &C,
    cols: &[Vec<C::Elem>],
    rhs: &[C::Elem],
) -> Option<Vec<C::Elem>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    debug_assert!(cols.iter().all(|c| c.len() == nrows));
    // Augmented matrix, row-major.
    let mut m: Vec<Vec<C::Elem>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<C::Elem> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next_row..nrows).find(|&r| !f.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(next_row, pr);
        let inv = f
            .inv(&m[next_row][col])
            .expect("pivot is nonzero by selection");
        for x in m[next_row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for r in 0..nrows {
            if r != next_row && !f.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in 0..=ncols {
                    let delta = f.mul(&factor, &m[next_row][c]);
                    m[r][c] = f.sub(&m[r][c], &delta);
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    // Inconsistent iff some zero row has nonzero rhs.
    for r in 0..nrows {
        if m[r][..ncols].iter().all(|x| f.is_zero(x)) && !f.is_zero(&m[r][ncols]) {
            return None;
        }
    }
    let mut sol = vec![f.zero(); ncols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pr {
            sol[col] = m[*r][ncols].clone();
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_linear_consistent() {
        let f = RatField;
        // x·(1,2) + y·(0,1) = (3,8) → x=3, y=2.
        let cols = vec![
            vec![f.from_i64(1), f.from_i64(2)],
            vec![f.from_i64(0), f.from_i64(1)],
        ];
        let rhs = vec![f.from_i64(3), f.from_i64(8)];
        let sol = solve_linear(&f, &cols, &rhs).unwrap();
        assert_eq!(sol, vec![f.from_i64(3), f.from_i64(2)]);
    }

    #[test]
    fn solve_linear_inconsistent() {
        let f = RatField;
        let cols = vec![vec![f.from_i64(1), f.from_i64(2)]];
        let rhs = vec![f.from_i64(1), f.from_i64(3)];
        assert!(solve_linear(&f, &cols, &rhs).is_none());
    }

    #[test]
    fn solve_linear_redundant_columns() {
        let f = RatField;
        // Dependent columns, consistent system.
        let cols = vec![
            vec![f.from_i64(1), f.from_i64(1)],
            vec![f.from_i64(2), f.from_i64(2)],
        ];
        let rhs = vec![f.from_i64(3), f.from_i64(3)];
        let sol = solve_linear(&f, &cols, &rhs).unwrap();
        // Verify the combination reproduces rhs.
        let mut acc = vec![f.zero(); 2];
        for (x, col) in sol.iter().zip(&cols) {
            for r in 0..2 {
                acc[r] = f.add(&acc[r], &f.mul(x, &col[r]));
            }
        }
        assert_eq!(acc, rhs);
    }
}
