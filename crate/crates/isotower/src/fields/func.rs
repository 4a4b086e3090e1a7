//! Rational function fields k(x₁,…,xₘ) over an abstract coefficient field.

use super::poly::MultiPoly;
use super::rat::Rat;
use super::Field;
use crate::{Error, Result};

/// The field of rational functions in `nvars` variables over `coeff`.
#[derive(Clone, PartialEq, Debug)]
pub struct FuncField<C: Field> {
    coeff: C,
    nvars: usize,
    names: Vec<String>,
}

/// A reduced fraction of polynomials: gcd(num, den) = 1 and den is monic in
/// the lexicographic sense, so structural equality is field equality.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<E> {
    num: MultiPoly<E>,
    den: MultiPoly<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug + Send + Sync> RatFunc<E> {
    pub fn num(&self) -> &MultiPoly<E> {
        &self.num
    }
    pub fn den(&self) -> &MultiPoly<E> {
        &self.den
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
}

impl<C: Field> FuncField<C> {
    pub fn new(coeff: C, names: &[&str]) -> Self {
        FuncField {
            coeff,
            nvars: names.len(),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn coeff_field(&self) -> &C {
        &self.coeff
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, v: usize) -> RatFunc<C::Elem> {
        self.from_poly(MultiPoly::var(&self.coeff, self.nvars, v))
    }

    pub fn from_poly(&self, p: MultiPoly<C::Elem>) -> RatFunc<C::Elem> {
        self.reduce(p, MultiPoly::one(&self.coeff, self.nvars))
    }

    pub fn from_coeff(&self, c: C::Elem) -> RatFunc<C::Elem> {
        self.from_poly(MultiPoly::constant(&self.coeff, self.nvars, c))
    }

    fn reduce(&self, num: MultiPoly<C::Elem>, den: MultiPoly<C::Elem>) -> RatFunc<C::Elem> {
        assert!(!den.is_zero(), "zero denominator");
        let f = &self.coeff;
        if num.is_zero() {
            return RatFunc {
                num,
                den: MultiPoly::one(f, self.nvars),
            };
        }
        let g = MultiPoly::gcd(f, &num, &den);
        let mut num = num.div_exact(f, &g).expect("gcd divides");
        let mut den = den.div_exact(f, &g).expect("gcd divides");
        let lc = den.lex_lead().expect("nonzero").1.clone();
        if !f.is_one(&lc) {
            let inv = f.inv(&lc).expect("leading coefficient nonzero");
            num = num.mul_elem(f, &inv);
            den = den.mul_elem(f, &inv);
        }
        RatFunc { num, den }
    }
}

impl<C: Field> Field for FuncField<C> {
    type Elem = RatFunc<C::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFunc {
            num: MultiPoly::zero(self.nvars),
            den: MultiPoly::one(&self.coeff, self.nvars),
        }
    }

    fn one(&self) -> Self::Elem {
        RatFunc {
            num: MultiPoly::one(&self.coeff, self.nvars),
            den: MultiPoly::one(&self.coeff, self.nvars),
        }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.coeff;
        let num = a
            .num
            .mul(f, &b.den)
            .add(f, &b.num.mul(f, &a.den));
        self.reduce(num, a.den.mul(f, &b.den))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc {
            num: a.num.neg(&self.coeff),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.coeff;
        self.reduce(a.num.mul(f, &b.num), a.den.mul(f, &b.den))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.reduce(a.den.clone(), a.num.clone()))
    }

    fn from_rat(&self, r: &Rat) -> Self::Elem {
        self.from_coeff(self.coeff.from_rat(r))
    }

    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.coeff;
        if self.is_zero(a) {
            return Some(self.zero());
        }
        // a = (num·den)/den², so a is a square iff num·den = c·t² with c a
        // square in the coefficient field.
        let s = a.num.mul(f, &a.den);
        let (t, c) = s.poly_sqrt(f)?;
        let w = f.sqrt(&c)?;
        let root = self.reduce(t.mul_elem(f, &w), a.den.clone());
        debug_assert_eq!(self.mul(&root, &root), *a);
        Some(root)
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        let f = &self.coeff;
        let n = a.num.fmt_with(f, &self.names);
        if a.den.is_constant() && f.is_one(&a.den.constant_value(f)) {
            n
        } else {
            format!("({})/({})", n, a.den.fmt_with(f, &self.names))
        }
    }

    fn square_content_split(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let f = &self.coeff;
        if self.is_zero(a) {
            return (self.one(), self.zero());
        }
        // a = (num·den)/den² = (u/den)²·v with num·den = u²·v.
        let s = a.num.mul(f, &a.den);
        let (u, v) = s.strip_square_part(f);
        let su = self.reduce(u, a.den.clone());
        let sv = self.from_poly(v);
        debug_assert_eq!(self.mul(&self.mul(&su, &su), &sv), *a);
        (su, sv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::RatField;

    fn ff() -> FuncField<RatField> {
        FuncField::new(RatField, &["x", "y"])
    }

    #[test]
    fn reduced_canonical_form() {
        let f = ff();
        let x = f.var(0);
        let y = f.var(1);
        // (x²−y²)/(x−y) reduces to x+y.
        let num = f.sub(&f.mul(&x, &x), &f.mul(&y, &y));
        let den = f.sub(&x, &y);
        let q = f.div(&num, &den).unwrap();
        assert_eq!(q, f.add(&x, &y));
        assert!(q.is_polynomial());
    }

    #[test]
    fn denominator_normalized() {
        let f = ff();
        let x = f.var(0);
        // 1/(2x) and (1/2)·(1/x) are structurally identical.
        let two_x = f.mul(&f.from_i64(2), &x);
        let a = f.inv(&two_x).unwrap();
        let b = f.mul(&f.from_rat(&"1/2".parse().unwrap()), &f.inv(&x).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn field_identities() {
        let f = ff();
        let x = f.var(0);
        let y = f.var(1);
        let e = f.div(&f.add(&x, &f.one()), &f.sub(&x, &y)).unwrap();
        assert_eq!(f.sub(&e, &e), f.zero());
        assert_eq!(f.mul(&e, &f.inv(&e).unwrap()), f.one());
        let lhs = f.mul(&e, &f.add(&x, &y));
        let rhs = f.add(&f.mul(&e, &x), &f.mul(&e, &y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sqrt_decides_squares() {
        let f = ff();
        let x = f.var(0);
        let y = f.var(1);
        let e = f.div(&f.add(&x, &y), &x).unwrap();
        let sq = f.mul(&e, &e);
        let w = f.sqrt(&sq).expect("square of an element");
        assert_eq!(f.mul(&w, &w), sq);
        assert!(f.sqrt(&f.mul(&sq, &f.from_i64(2))).is_none());
        assert!(f.sqrt(&x).is_none());
        assert!(f.sqrt(&f.mul(&x, &y)).is_none());
        assert_eq!(f.sqrt(&f.from_i64(9)), Some(f.from_i64(3)));
        assert_eq!(f.sqrt(&f.zero()), Some(f.zero()));
    }

    #[test]
    fn square_content_split_reconstructs() {
        let f = ff();
        let x = f.var(0);
        let y = f.var(1);
        // x³(x+y)² / y² → split pulls out x²(x+y)²/y², leaving x.
        let e = f
            .div(
                &f.mul(&f.pow(&x, 3), &f.square(&f.add(&x, &y))),
                &f.square(&y),
            )
            .unwrap();
        let (s, m) = f.square_content_split(&e);
        assert_eq!(f.mul(&f.square(&s), &m), e);
        assert_eq!(m, x);
    }

    #[test]
    fn formatting() {
        let f = ff();
        let x = f.var(0);
        let y = f.var(1);
        let e = f.div(&f.sub(&f.mul(&x, &x), &f.one()), &y).unwrap();
        assert_eq!(f.fmt_elem(&e), "(x^2 - 1)/(y)");
        assert_eq!(f.fmt_elem(&f.from_i64(-3)), "-3");
    }
}
