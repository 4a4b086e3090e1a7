//! Arbitrary-precision rationals in canonical reduced form.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use super::Field;
use crate::{Error, Result};

/// Exact rational number; always reduced, denominator positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    /// Convenience constructor from small integers; panics on zero denominator.
    pub fn from_frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn add(&self, o: &Self) -> Self {
        Rat(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Rat(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Self {
        Rat(-self.0.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Rat(&self.0 * &o.0)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &o.0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    /// Canonical square root: the nonnegative one, if the value is a square.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let sn = int_sqrt_exact(self.numer())?;
        let sd = int_sqrt_exact(self.denom())?;
        Some(Rat(BigRational::new(sn, sd)))
    }

    /// Split `self = s²·m` with `m` a squarefree-leaning integer carrying the
    /// sign. Primes above the trial bound stay in `m` unless the leftover
    /// cofactor is itself a perfect square.
    pub fn square_content_split(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Rat::one(), Rat::zero());
        }
        // p/q = (p·q)/q², so it suffices to split the integer p·q.
        let n = self.numer() * self.denom();
        let (sign, mag) = (n.sign(), n.abs());
        let (mut s_int, mut m_int) = (BigInt::one(), BigInt::one());
        let mut rest = mag;
        for p in small_primes() {
            let pb = BigInt::from(p);
            if &pb * &pb > rest {
                break;
            }
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if r.is_zero() {
                    rest = q;
                    e += 1;
                } else {
                    break;
                }
            }
            if e > 0 {
                s_int *= pb.pow(e / 2);
                if e % 2 == 1 {
                    m_int *= pb;
                }
            }
        }
        if let Some(r) = int_sqrt_exact(&rest) {
            s_int *= r;
        } else {
            m_int *= rest;
        }
        if sign == Sign::Minus {
            m_int = -m_int;
        }
        let s = Rat(BigRational::new(s_int, self.denom().clone()));
        let m = Rat(BigRational::from(m_int));
        debug_assert_eq!(s.mul(&s).mul(&m), *self);
        (s, m)
    }
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

fn small_primes() -> impl Iterator<Item = u32> {
    // Primes below 1000 by trial sieve; cheap and allocation-free enough.
    (2u32..1000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat(BigRational::from(BigInt::from(n)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_int = |t: &str| {
            BigInt::from_str(t.trim())
                .map_err(|_| Error::Config(format!("not an integer: {t:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rat::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Rat(BigRational::from(parse_int(s)?))),
        }
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RatField;

impl Field for RatField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn inv(&self, a: &Rat) -> Result<Rat> {
        a.inv()
    }
    fn from_rat(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn sqrt(&self, a: &Rat) -> Option<Rat> {
        a.sqrt()
    }
    fn fmt_elem(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn square_content_split(&self, a: &Rat) -> (Rat, Rat) {
        a.square_content_split()
    }
}
