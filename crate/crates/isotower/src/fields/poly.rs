//! Sparse multivariate polynomials over an abstract coefficient field, with
//! exact division, primitive-sequence gcd, and square detection.

use std::collections::BTreeMap;

use super::Field;

/// Sparse polynomial; each key is an exponent vector of length `nvars`
/// (lexicographic order on keys is the monomial order). Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<E> {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug + Send + Sync> MultiPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<C: Field<Elem = E>>(f: &C, nvars: usize, c: E) -> Self {
        let mut p = Self::zero(nvars);
        if !f.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one<C: Field<Elem = E>>(f: &C, nvars: usize) -> Self {
        Self::constant(f, nvars, f.one())
    }

    pub fn var<C: Field<Elem = E>>(f: &C, nvars: usize, v: usize) -> Self {
        assert!(v < nvars, "variable index out of range");
        let mut exps = vec![0u16; nvars];
        exps[v] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, f.one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value<C: Field<Elem = E>>(&self, f: &C) -> E {
        debug_assert!(self.is_constant());
        self.terms.values().next().cloned().unwrap_or_else(|| f.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &E)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn deg_in(&self, v: usize) -> usize {
        self.terms.keys().map(|e| e[v] as usize).max().unwrap_or(0)
    }

    /// Highest variable index with positive degree, if any.
    pub fn main_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, _)| i)
            })
            .max()
    }

    fn insert_term<C: Field<Elem = E>>(&mut self, f: &C, exps: Vec<u16>, c: E) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add<C: Field<Elem = E>>(&self, f: &C, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(f, e.clone(), c.clone());
        }
        out
    }

    pub fn neg<C: Field<Elem = E>>(&self, f: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), f.neg(c));
        }
        out
    }

    pub fn sub<C: Field<Elem = E>>(&self, f: &C, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn mul<C: Field<Elem = E>>(&self, f: &C, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(f, exps, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_elem<C: Field<Elem = E>>(&self, f: &C, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), f.mul(x, c));
        }
        out
    }

    pub fn mul_var_pow(&self, v: usize, k: u16) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[v] += k;
            out.terms.insert(exps, c.clone());
        }
        out
    }

    pub fn pow<C: Field<Elem = E>>(&self, f: &C, n: u32) -> Self {
        let mut acc = Self::one(f, self.nvars);
        for _ in 0..n {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn partial<C: Field<Elem = E>>(&self, f: &C, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[v] -= 1;
            let k = f.from_i64(e[v] as i64);
            out.insert_term(f, exps, f.mul(c, &k));
        }
        out
    }

    /// Lexicographically largest term.
    pub fn lex_lead(&self) -> Option<(&Vec<u16>, &E)> {
        self.terms.iter().next_back()
    }

    /// Scale so the lexicographically leading coefficient is 1.
    pub fn monic_lex<C: Field<Elem = E>>(&self, f: &C) -> Self {
        match self.lex_lead() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = f.inv(c).expect("leading coefficient is nonzero");
                self.mul_elem(f, &inv)
            }
        }
    }

    /// Coefficients as polynomials (with variable `v` zeroed), indexed by the
    /// exponent of `v`. The zero polynomial yields an empty vector.
    pub fn coeffs_wrt(&self, v: usize) -> Vec<Self> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.deg_in(v);
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut exps = e.clone();
            exps[v] = 0;
            out[k].terms.insert(exps, c.clone());
        }
        out
    }

    pub fn from_coeffs_wrt(nvars: usize, v: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, p) in coeffs.iter().enumerate() {
            for (e, c) in &p.terms {
                debug_assert_eq!(e[v], 0);
                let mut exps = e.clone();
                exps[v] = k as u16;
                out.terms.insert(exps, c.clone());
            }
        }
        out
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact<C: Field<Elem = E>>(&self, f: &C, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        match other.main_var() {
            None => {
                let c = other.constant_value(f);
                let inv = f.inv(&c).expect("nonzero constant");
                Some(self.mul_elem(f, &inv))
            }
            Some(v) => {
                let dg = other.deg_in(v);
                let gl = other.coeffs_wrt(v).pop().expect("nonzero");
                let mut r = self.clone();
                let mut q = Self::zero(self.nvars);
                while !r.is_zero() {
                    let dr = r.deg_in(v);
                    if dr < dg {
                        return None;
                    }
                    let rl = r.coeffs_wrt(v).pop().expect("nonzero");
                    let qc = rl.div_exact(f, &gl)?;
                    let shift = qc.mul_var_pow(v, (dr - dg) as u16);
                    q = q.add(f, &shift);
                    r = r.sub(f, &shift.mul(f, other));
                    if !r.is_zero() && r.deg_in(v) >= dr {
                        return None;
                    }
                }
                Some(q)
            }
        }
    }

    /// Pseudo-remainder of `self` by `other` with respect to variable `v`:
    /// repeatedly cancels the leading term after scaling by `other`'s leading
    /// coefficient, so the result has smaller `v`-degree than `other`.
    fn pseudo_rem<C: Field<Elem = E>>(&self, f: &C, other: &Self, v: usize) -> Self {
        let dg = other.deg_in(v);
        let gl = other.coeffs_wrt(v).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() && r.deg_in(v) >= dg {
            let dr = r.deg_in(v);
            let rl = r.coeffs_wrt(v).pop().expect("nonzero");
            let lead = rl.mul_var_pow(v, (dr - dg) as u16);
            r = r.mul(f, &gl).sub(f, &lead.mul(f, other));
            debug_assert!(r.is_zero() || r.deg_in(v) < dr);
        }
        r
    }

    /// Content with respect to `v`: gcd of the `v`-coefficients.
    fn content_wrt<C: Field<Elem = E>>(&self, f: &C, v: usize) -> Self {
        let mut g = Self::zero(self.nvars);
        for c in self.coeffs_wrt(v) {
            g = Self::gcd(f, &g, &c);
        }
        g
    }

    /// Gcd normalized to lex-leading coefficient 1 (primitive pseudo-remainder
    /// sequences over the main variable; recursion over remaining variables).
    pub fn gcd<C: Field<Elem = E>>(f: &C, a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic_lex(f);
        }
        if b.is_zero() {
            return a.monic_lex(f);
        }
        let v = match a.main_var().into_iter().chain(b.main_var()).max() {
            None => return Self::one(f, a.nvars), // both nonzero constants
            Some(v) => v,
        };
        let ca = a.content_wrt(f, v);
        let cb = b.content_wrt(f, v);
        let pa = a.div_exact(f, &ca).expect("content divides");
        let pb = b.div_exact(f, &cb).expect("content divides");
        let cg = Self::gcd(f, &ca, &cb);
        let (mut p, mut q) = if pa.deg_in(v) >= pb.deg_in(v) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        loop {
            let r = p.pseudo_rem(f, &q, v);
            if r.is_zero() {
                break;
            }
            let rc = r.content_wrt(f, v);
            p = q;
            q = r.div_exact(f, &rc).expect("content divides");
        }
        cg.mul(f, &q).monic_lex(f)
    }

    /// Gcd of `self` with all its partial derivatives; for a factorization
    /// ∏ pᵢ^{eᵢ} this equals ∏ pᵢ^{eᵢ−1} up to a constant (characteristic 0).
    fn gcd_with_partials<C: Field<Elem = E>>(&self, f: &C) -> Self {
        let mut g = self.monic_lex(f);
        for v in 0..self.nvars {
            if self.deg_in(v) > 0 {
                g = Self::gcd(f, &g, &self.partial(f, v));
            }
        }
        g
    }

    /// Decide whether `self = c·t²` for a polynomial `t` and constant `c`;
    /// squareness in the fraction field then reduces to squareness of `c`.
    pub fn poly_sqrt<C: Field<Elem = E>>(&self, f: &C) -> Option<(Self, E)> {
        assert!(!self.is_zero(), "zero handled by the caller");
        if self.is_constant() {
            return Some((Self::one(f, self.nvars), self.constant_value(f)));
        }
        let g = self.gcd_with_partials(f);
        let radical = self.div_exact(f, &g).expect("gcd divides");
        let quotient = self.div_exact(f, &radical.mul(f, &radical))?;
        let (t, c) = quotient.poly_sqrt(f)?;
        Some((radical.mul(f, &t), c))
    }

    /// Split `self = u²·v` with `v` free of repeated factors of even share;
    /// used to keep stored radicands small. Constants are left untouched.
    pub fn strip_square_part<C: Field<Elem = E>>(&self, f: &C) -> (Self, Self) {
        assert!(!self.is_zero());
        if self.is_constant() {
            return (Self::one(f, self.nvars), self.clone());
        }
        let g = self.gcd_with_partials(f);
        if g.is_constant() {
            return (Self::one(f, self.nvars), self.clone());
        }
        let radical = self.div_exact(f, &g).expect("gcd divides");
        let d = Self::gcd(f, &g, &radical); // factors of multiplicity ≥ 2
        if d.is_constant() {
            return (Self::one(f, self.nvars), self.clone());
        }
        let rest = self
            .div_exact(f, &d)
            .and_then(|t| t.div_exact(f, &d))
            .expect("square factor divides");
        let (u, v) = rest.strip_square_part(f);
        (d.mul(f, &u), v)
    }

    pub fn fmt_with<C: Field<Elem = E>>(&self, f: &C, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let cs = f.fmt_elem(c);
            let term = if mono.is_empty() {
                cs
            } else if f.is_one(c) {
                mono
            } else if f.is_one(&f.neg(c)) {
                format!("-{mono}")
            } else if cs.contains('+') || cs.contains(' ') || cs.contains('*') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        let mut out = parts[0].clone();
        for t in &parts[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}
