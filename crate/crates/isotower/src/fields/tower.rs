//! Iterated quadratic extensions B(√r₀)(√r₁)…(√r_{h−1}) over an exact base
//! field, with a complete square decision, deterministic embeddings,
//! composita, and exact membership via linear algebra over the base.

use std::sync::atomic::{AtomicU64, Ordering};

use super::rat::Rat;
use super::{solve_linear, Field};
use crate::{Error, Result};

static NEXT_TOWER_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_TOWER_ID.fetch_add(1, Ordering::Relaxed)
}

/// A tower of quadratic extensions of `base`. The `j`-th stage adjoins a
/// square root of `radicands[j]`, a nonzero non-square element of the height-j
/// prefix stored as its coordinate vector (length 2^j) over `base`.
///
/// Elements are coordinate vectors of length 2^height indexed by subsets of
/// the generators; they carry the identity of their owning tower, and may be
/// lifted along the ancestor chain but never mixed across unrelated towers.
#[derive(Clone, Debug)]
pub struct TowerField<B: Field> {
    base: B,
    id: u64,
    /// `ancestor_ids[h]` is the id of the height-`h` prefix tower.
    ancestor_ids: Vec<u64>,
    radicands: Vec<Vec<B::Elem>>,
    labels: Vec<String>,
}

impl<B: Field> PartialEq for TowerField<B> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.radicands == other.radicands
    }
}

/// An element of a specific [`TowerField`].
#[derive(Clone, PartialEq, Debug)]
pub struct TowerElem<B: Field> {
    owner: u64,
    c: Vec<B::Elem>,
}

impl<B: Field> TowerElem<B> {
    pub fn owner(&self) -> u64 {
        self.owner
    }
    pub fn coords(&self) -> &[B::Elem] {
        &self.c
    }
}

/// Outcome of requesting a square root adjunction.
pub enum Adjoined<B: Field> {
    /// The element was already a square; no extension was made.
    Already { sqrt: TowerElem<B> },
    /// A fresh quadratic stage was added; `sqrt` lives in the new tower.
    Extended {
        tower: TowerField<B>,
        sqrt: TowerElem<B>,
    },
}

impl<B: Field> TowerField<B> {
    /// The height-0 tower: the base field itself.
    pub fn over(base: B) -> Self {
        TowerField {
            base,
            id: fresh_id(),
            ancestor_ids: Vec::new(),
            radicands: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn base_field(&self) -> &B {
        &self.base
    }

    pub fn height(&self) -> usize {
        self.radicands.len()
    }

    /// Extension degree over the base: 2^height.
    pub fn degree(&self) -> u64 {
        1u64 << self.height()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        1usize << self.height()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The generator adjoined at stage `j`, as an element of this tower.
    pub fn generator(&self, j: usize) -> TowerElem<B> {
        assert!(j < self.height(), "generator index out of range");
        let mut c = vec![self.base.zero(); self.dim()];
        c[1 << j] = self.base.one();
        TowerElem { owner: self.id, c }
    }

    /// The radicand of stage `j`, lifted into this tower.
    pub fn radicand(&self, j: usize) -> TowerElem<B> {
        assert!(j < self.height(), "radicand index out of range");
        let mut c = self.radicands[j].clone();
        c.resize(self.dim(), self.base.zero());
        TowerElem { owner: self.id, c }
    }

    /// Wrap a base-field scalar.
    pub fn scalar(&self, x: B::Elem) -> TowerElem<B> {
        let mut c = vec![self.base.zero(); self.dim()];
        c[0] = x;
        TowerElem { owner: self.id, c }
    }

    /// True when the element has no component along any generator.
    pub fn is_scalar(&self, e: &TowerElem<B>) -> bool {
        self.check(e);
        e.c[1..].iter().all(|x| self.base.is_zero(x))
    }

    fn check(&self, e: &TowerElem<B>) {
        assert_eq!(
            e.owner, self.id,
            "element owned by tower {} used with tower {}",
            e.owner, self.id
        );
    }

    /// Lift an element owned by this tower or any ancestor into this tower.
    pub fn lift(&self, e: &TowerElem<B>) -> Result<TowerElem<B>> {
        if e.owner == self.id {
            return Ok(e.clone());
        }
        match self.ancestor_ids.iter().position(|&a| a == e.owner) {
            Some(h) => {
                debug_assert_eq!(e.c.len(), 1 << h);
                let mut c = e.c.clone();
                c.resize(self.dim(), self.base.zero());
                Ok(TowerElem { owner: self.id, c })
            }
            None => Err(Error::OwnerMismatch {
                elem_owner: e.owner,
                expected: self.id,
            }),
        }
    }

    // ----- slice arithmetic (height-indexed, coordinate vectors) -----

    fn add_s(&self, a: &[B::Elem], b: &[B::Elem]) -> Vec<B::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub_s(&self, a: &[B::Elem], b: &[B::Elem]) -> Vec<B::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn neg_s(&self, a: &[B::Elem]) -> Vec<B::Elem> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn scale_s(&self, a: &[B::Elem], k: &B::Elem) -> Vec<B::Elem> {
        a.iter().map(|x| self.base.mul(x, k)).collect()
    }

    fn is_zero_s(&self, a: &[B::Elem]) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    fn mul_s(&self, h: usize, a: &[B::Elem], b: &[B::Elem]) -> Vec<B::Elem> {
        if h == 0 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let half = 1usize << (h - 1);
        let (a0, a1) = a.split_at(half);
        let (b0, b1) = b.split_at(half);
        // (a0 + a1·g)(b0 + b1·g) = (a0b0 + r·a1b1) + ((a0+a1)(b0+b1) − a0b0 − a1b1)·g
        let p00 = self.mul_s(h - 1, a0, b0);
        let p11 = self.mul_s(h - 1, a1, b1);
        let psum = self.mul_s(h - 1, &self.add_s(a0, a1), &self.add_s(b0, b1));
        let cross = self.sub_s(&self.sub_s(&psum, &p00), &p11);
        let r = &self.radicands[h - 1];
        let lo = self.add_s(&p00, &self.mul_s(h - 1, r, &p11));
        let mut out = lo;
        out.extend(cross);
        out
    }

    fn inv_s(&self, h: usize, a: &[B::Elem]) -> Result<Vec<B::Elem>> {
        if h == 0 {
            return Ok(vec![self.base.inv(&a[0])?]);
        }
        let half = 1usize << (h - 1);
        let (a0, a1) = a.split_at(half);
        if self.is_zero_s(a1) {
            let mut out = self.inv_s(h - 1, a0)?;
            out.extend(vec![self.base.zero(); half]);
            return Ok(out);
        }
        // (a0 + a1·g)⁻¹ = (a0 − a1·g)/(a0² − r·a1²); the norm is nonzero for
        // nonzero input because r is not a square at its stage.
        let r = &self.radicands[h - 1];
        let n = self.sub_s(
            &self.mul_s(h - 1, a0, a0),
            &self.mul_s(h - 1, r, &self.mul_s(h - 1, a1, a1)),
        );
        let ninv = self.inv_s(h - 1, &n)?;
        let mut out = self.mul_s(h - 1, a0, &ninv);
        out.extend(self.neg_s(&self.mul_s(h - 1, a1, &ninv)));
        Ok(out)
    }

    /// Complete square decision inside the height-`h` prefix.
    ///
    /// For x = a + b·g over the previous stage with g² = d:
    /// with b = 0, x is a square iff a or a·d is a square below;
    /// with b ≠ 0, a necessary condition is that the norm a² − d·b² is a
    /// square c² below, and then x is a square iff one of (a±c)/2 is a square
    /// s² below, with witness s + (b/2s)·g. Both candidates are nonzero since
    /// their product is b²d/4.
    fn sqrt_s(&self, h: usize, x: &[B::Elem]) -> Option<Vec<B::Elem>> {
        if h == 0 {
            return self.base.sqrt(&x[0]).map(|w| vec![w]);
        }
        let half = 1usize << (h - 1);
        let (a, b) = x.split_at(half);
        let d = &self.radicands[h - 1];
        if self.is_zero_s(b) {
            if let Some(s) = self.sqrt_s(h - 1, a) {
                let mut out = s;
                out.extend(vec![self.base.zero(); half]);
                return Some(out);
            }
            let ad = self.mul_s(h - 1, a, d);
            if let Some(s) = self.sqrt_s(h - 1, &ad) {
                // (s/d · g)² = (s²/d²)·d = a.
                let dinv = self
                    .inv_s(h - 1, d)
                    .expect("radicands are nonzero by construction");
                let mut out = vec![self.base.zero(); half];
                out.extend(self.mul_s(h - 1, &s, &dinv));
                return Some(out);
            }
            return None;
        }
        let norm = self.sub_s(
            &self.mul_s(h - 1, a, a),
            &self.mul_s(h - 1, d, &self.mul_s(h - 1, b, b)),
        );
        let c = self.sqrt_s(h - 1, &norm)?;
        let half_scalar = self.base.from_rat(&Rat::from_frac(1, 2));
        for cand in [
            self.scale_s(&self.add_s(a, &c), &half_scalar),
            self.scale_s(&self.sub_s(a, &c), &half_scalar),
        ] {
            if self.is_zero_s(&cand) {
                continue;
            }
            if let Some(s) = self.sqrt_s(h - 1, &cand) {
                let two_s = self.scale_s(&s, &self.base.from_i64(2));
                let u = self.mul_s(
                    h - 1,
                    b,
                    &self
                        .inv_s(h - 1, &two_s)
                        .expect("candidate is nonzero, so its root is nonzero"),
                );
                let mut out = s;
                out.extend(u);
                return Some(out);
            }
        }
        None
    }

    // ----- adjunction -----

    /// Adjoin a square root of `x`, unless `x` is already a square here.
    /// The stored radicand is normalized by stripping square content where the
    /// base supports it; the returned witness always squares to `x` exactly.
    pub fn with_sqrt(&self, x: &TowerElem<B>, label: Option<&str>) -> Result<Adjoined<B>> {
        let x = self.lift(x)?;
        if self.is_zero(&x) {
            return Err(Error::ZeroRadicand);
        }
        if let Some(w) = self.sqrt(&x) {
            return Ok(Adjoined::Already { sqrt: w });
        }
        let (s, m) = self.square_content_split(&x);
        let j = self.height();
        let mut radicands = self.radicands.clone();
        radicands.push(m.c.clone());
        let mut labels = self.labels.clone();
        labels.push(label.map(str::to_owned).unwrap_or_else(|| format!("g{j}")));
        let mut ancestor_ids = self.ancestor_ids.clone();
        ancestor_ids.push(self.id);
        let tower = TowerField {
            base: self.base.clone(),
            id: fresh_id(),
            ancestor_ids,
            radicands,
            labels,
        };
        // Witness: g·s where g² = m and x = s²·m.
        let g = tower.generator(j);
        let w = tower.mul(&g, &tower.lift(&s)?);
        debug_assert_eq!(tower.mul(&w, &w), tower.lift(&x).unwrap());
        Ok(Adjoined::Extended { tower, sqrt: w })
    }

    /// Like [`TowerField::with_sqrt`], but always yields a (tower, witness) pair, cloning
    /// the tower when no extension was needed.
    pub fn adjoin_sqrt(
        &self,
        x: &TowerElem<B>,
        label: Option<&str>,
    ) -> Result<(Self, TowerElem<B>)> {
        match self.with_sqrt(x, label)? {
            Adjoined::Already { sqrt } => Ok((self.clone(), sqrt)),
            Adjoined::Extended { tower, sqrt } => Ok((tower, sqrt)),
        }
    }

    /// Tower containing ζ_{2^m} together with that root of unity, built by
    /// iterated square roots of −1's square-root chain: ζ₂ = −1 and
    /// ζ_{2^{j+1}} = √ζ_{2^j}.
    pub fn with_zeta_pow2(&self, m: u32) -> Result<(Self, TowerElem<B>)> {
        assert!(m >= 1);
        if m == 1 {
            return Ok((self.clone(), self.neg(&self.one())));
        }
        let (t, z) = self.with_zeta_pow2(m - 1)?;
        let (t2, z2) = t.adjoin_sqrt(&z, Some(&format!("zeta{}", 1u64 << m)))?;
        debug_assert_eq!(t2.mul(&z2, &z2), t2.lift(&z).unwrap());
        Ok((t2, z2))
    }

    /// A square root of −1 in this tower, if one exists.
    pub fn zeta4(&self) -> Option<TowerElem<B>> {
        self.sqrt(&self.neg(&self.one()))
    }

    // ----- embeddings, composita, membership -----

    /// Map an element of this tower through generator images into `target`.
    pub fn map_elem(
        &self,
        e: &TowerElem<B>,
        images: &[TowerElem<B>],
        target: &TowerField<B>,
    ) -> Result<TowerElem<B>> {
        self.check(e);
        assert_eq!(images.len(), self.height());
        Self::map_coords(&self.base, &e.c, images, target)
    }

    /// Map a coordinate vector (length 2^j over the base, `j ≤ images.len()`)
    /// through generator images into `target`.
    fn map_coords(
        base: &B,
        coords: &[B::Elem],
        images: &[TowerElem<B>],
        target: &TowerField<B>,
    ) -> Result<TowerElem<B>> {
        // Subset products of images, filled lazily in index order:
        // prod[S] = prod[S without lowest bit] · images[lowest bit].
        let n = coords.len();
        let mut prods: Vec<TowerElem<B>> = Vec::with_capacity(n);
        prods.push(target.one());
        for idx in 1..n {
            let low = idx.trailing_zeros() as usize;
            let rest = idx & (idx - 1);
            prods.push(target.mul(&prods[rest], &images[low]));
        }
        let mut acc = target.zero();
        for (idx, co) in coords.iter().enumerate() {
            if base.is_zero(co) {
                continue;
            }
            acc = target.add(&acc, &target.mul(&target.scalar(co.clone()), &prods[idx]));
        }
        Ok(acc)
    }

    /// Find a base-field embedding of this tower into `target`, as the list
    /// of generator images. Searches both signs of each stage's root, so the
    /// answer is complete: `None` means no embedding exists.
    pub fn embed_into(&self, target: &TowerField<B>) -> Result<Option<Vec<TowerElem<B>>>> {
        if self.base != target.base {
            return Err(Error::BaseMismatch);
        }
        fn dfs<B: Field>(
            src: &TowerField<B>,
            target: &TowerField<B>,
            images: &mut Vec<TowerElem<B>>,
        ) -> Result<bool> {
            let j = images.len();
            if j == src.height() {
                return Ok(true);
            }
            let r_img = TowerField::map_coords(&src.base, &src.radicands[j], images, target)?;
            let Some(w) = target.sqrt(&r_img) else {
                return Ok(false);
            };
            for cand in [w.clone(), target.neg(&w)] {
                images.push(cand);
                if dfs(src, target, images)? {
                    return Ok(true);
                }
                images.pop();
            }
            Ok(false)
        }
        let mut images = Vec::new();
        if dfs(self, target, &mut images)? {
            Ok(Some(images))
        } else {
            Ok(None)
        }
    }

    /// Whether `sub` embeds into `self` over the common base.
    pub fn contains_field(&self, sub: &TowerField<B>) -> Result<bool> {
        Ok(sub.embed_into(self)?.is_some())
    }

    /// Whether the two towers present the same extension of the base, decided
    /// by mutual embeddings (equivalently, equal degree plus one embedding).
    pub fn same_field(&self, other: &TowerField<B>) -> Result<bool> {
        Ok(self.height() == other.height() && self.contains_field(other)?)
    }

    /// Compositum: extend `self` by all stages of `other` (greedy choice at
    /// stages whose radicand image is already a square). Returns the combined
    /// tower and the images of `other`'s generators; elements of `self` lift
    /// into the result structurally.
    pub fn compositum(&self, other: &TowerField<B>) -> Result<(Self, Vec<TowerElem<B>>)> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let mut cur = self.clone();
        let mut images: Vec<TowerElem<B>> = Vec::new();
        for j in 0..other.height() {
            let r_img = Self::map_coords(&self.base, &other.radicands[j], &images, &cur)?;
            match cur.with_sqrt(&r_img, Some(&format!("c{j}")))? {
                Adjoined::Already { sqrt } => images.push(sqrt),
                Adjoined::Extended { tower, sqrt } => {
                    images = images
                        .into_iter()
                        .map(|e| tower.lift(&e))
                        .collect::<Result<_>>()?;
                    cur = tower;
                    images.push(sqrt);
                }
            }
        }
        Ok((cur, images))
    }

    /// Exact membership: the element of `sub` equal to `x`, if `x` lies in
    /// the image of `sub` inside the compositum of `self` and `sub`.
    pub fn member_of(&self, x: &TowerElem<B>, sub: &TowerField<B>) -> Result<Option<TowerElem<B>>> {
        self.check(x);
        let (comp, images) = self.compositum(sub)?;
        let x_c = comp.lift(x)?;
        // Columns: compositum coordinates of sub's basis subset-products.
        let cols: Vec<Vec<B::Elem>> = (0..sub.dim())
            .map(|idx| {
                let mut coords = vec![self.base.zero(); sub.dim()];
                coords[idx] = self.base.one();
                Self::map_coords(&self.base, &coords, &images, &comp).map(|e| e.c)
            })
            .collect::<Result<_>>()?;
        match solve_linear(&self.base, &cols, &x_c.c) {
            None => Ok(None),
            Some(sol) => Ok(Some(TowerElem {
                owner: sub.id,
                c: sol,
            })),
        }
    }

    /// Decide whether two value multisets agree under some identification of
    /// the towers over their common base: searches sign choices at compositum
    /// stages whose radicand image is already a square, accepting a branch
    /// when the mapped multisets match.
    pub fn multiset_matches(
        &self,
        vals_self: &[TowerElem<B>],
        other: &TowerField<B>,
        vals_other: &[TowerElem<B>],
    ) -> Result<bool> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        if vals_self.len() != vals_other.len() {
            return Ok(false);
        }
        fn multiset_eq<B: Field>(t: &TowerField<B>, a: &[TowerElem<B>], b: &[TowerElem<B>]) -> bool {
            let mut used = vec![false; b.len()];
            'outer: for x in a {
                for (i, y) in b.iter().enumerate() {
                    if !used[i] && t.eq_elems(x, y) {
                        used[i] = true;
                        continue 'outer;
                    }
                }
                return false;
            }
            true
        }
        fn dfs<B: Field>(
            src: &TowerField<B>, // tower being embedded (owner of vals_other)
            cur: &TowerField<B>,
            images: &Vec<TowerElem<B>>,
            vals_self: &[TowerElem<B>],
            vals_other: &[TowerElem<B>],
        ) -> Result<bool> {
            let j = images.len();
            if j == src.height() {
                let lifted: Vec<TowerElem<B>> = vals_self
                    .iter()
                    .map(|e| cur.lift(e))
                    .collect::<Result<_>>()?;
                let mapped: Vec<TowerElem<B>> = vals_other
                    .iter()
                    .map(|e| src.map_elem(e, images, cur))
                    .collect::<Result<_>>()?;
                return Ok(multiset_eq(cur, &lifted, &mapped));
            }
            let r_img = TowerField::map_coords(&src.base, &src.radicands[j], images, cur)?;
            match cur.with_sqrt(&r_img, Some(&format!("m{j}")))? {
                Adjoined::Already { sqrt } => {
                    for cand in [sqrt.clone(), cur.neg(&sqrt)] {
                        let mut next = images.clone();
                        next.push(cand);
                        if dfs(src, cur, &next, vals_self, vals_other)? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                }
                Adjoined::Extended { tower, sqrt } => {
                    // A fresh stage: both signs are related by an automorphism
                    // fixing everything constructed so far, so one suffices.
                    let mut next: Vec<TowerElem<B>> = images
                        .iter()
                        .map(|e| tower.lift(e))
                        .collect::<Result<_>>()?;
                    next.push(sqrt);
                    dfs(src, &tower, &next, vals_self, vals_other)
                }
            }
        }
        dfs(other, self, &Vec::new(), vals_self, vals_other)
    }

    fn eq_elems(&self, a: &TowerElem<B>, b: &TowerElem<B>) -> bool {
        a.c == b.c
    }

    // ----- display -----

    fn fmt_coords(&self, coords: &[B::Elem]) -> String {
        if coords.iter().all(|x| self.base.is_zero(x)) {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (idx, co) in coords.iter().enumerate() {
            if self.base.is_zero(co) {
                continue;
            }
            let mono: Vec<&str> = (0..self.height())
                .filter(|j| idx & (1 << j) != 0)
                .map(|j| self.labels[j].as_str())
                .collect();
            let mono = mono.join("*");
            let cs = self.base.fmt_elem(co);
            parts.push(if mono.is_empty() {
                cs
            } else if self.base.is_one(co) {
                mono
            } else if self.base.is_one(&self.base.neg(co)) {
                format!("-{mono}")
            } else if cs.contains('+') || cs.contains(' ') || cs.contains('*') || cs.contains('/')
            {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
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

    /// Human-readable description of the tower's stages.
    pub fn describe(&self) -> Vec<String> {
        (0..self.height())
            .map(|j| {
                format!(
                    "{} = sqrt({})",
                    self.labels[j],
                    self.fmt_coords(&self.radicands[j])
                )
            })
            .collect()
    }
}

impl<B: Field> Field for TowerField<B> {
    type Elem = TowerElem<B>;

    fn zero(&self) -> Self::Elem {
        TowerElem {
            owner: self.id,
            c: vec![self.base.zero(); self.dim()],
        }
    }

    fn one(&self) -> Self::Elem {
        self.scalar(self.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.check(a);
        self.is_zero_s(&a.c)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.check(a);
        self.check(b);
        TowerElem {
            owner: self.id,
            c: self.add_s(&a.c, &b.c),
        }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.check(a);
        TowerElem {
            owner: self.id,
            c: self.neg_s(&a.c),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.check(a);
        self.check(b);
        TowerElem {
            owner: self.id,
            c: self.mul_s(self.height(), &a.c, &b.c),
        }
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.check(a);
        Ok(TowerElem {
            owner: self.id,
            c: self.inv_s(self.height(), &a.c)?,
        })
    }

    fn from_rat(&self, r: &Rat) -> Self::Elem {
        self.scalar(self.base.from_rat(r))
    }

    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.check(a);
        let w = self.sqrt_s(self.height(), &a.c)?;
        let w = TowerElem {
            owner: self.id,
            c: w,
        };
        debug_assert_eq!(self.mul(&w, &w), *a);
        Some(w)
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        self.check(a);
        self.fmt_coords(&a.c)
    }

    fn square_content_split(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        if self.is_scalar(a) {
            let (s, m) = self.base.square_content_split(&a.c[0]);
            (self.scalar(s), self.scalar(m))
        } else {
            (self.one(), a.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::RatField;

    type T = TowerField<RatField>;

    fn q() -> T {
        T::over(RatField)
    }

    /// ℚ extended by one square root.
    fn qext(n: i64, label: Option<&str>) -> (T, TowerElem<RatField>) {
        let t = q();
        let x = t.from_i64(n);
        t.adjoin_sqrt(&x, label).unwrap()
    }

    #[test]
    fn quadratic_arithmetic() {
        let (t, s2) = qext(2, Some("sqrt2"));
        assert_eq!(t.degree(), 2);
        assert_eq!(t.mul(&s2, &s2), t.from_i64(2));
        // (1+√2)² = 3 + 2√2
        let x = t.add(&t.one(), &s2);
        let sq = t.mul(&x, &x);
        let expected = t.add(&t.from_i64(3), &t.mul(&t.from_i64(2), &s2));
        assert_eq!(sq, expected);
        // inverse: 1/(1+√2) = √2 − 1
        let inv = t.inv(&x).unwrap();
        assert_eq!(inv, t.sub(&s2, &t.one()));
        assert_eq!(t.mul(&x, &inv), t.one());
    }

    #[test]
    fn sqrt_complete_in_quadratic() {
        let (t, s2) = qext(2, None);
        // 3+2√2 is a square; the witness squares back.
        let x = t.add(&t.from_i64(3), &t.mul(&t.from_i64(2), &s2));
        let w = t.sqrt(&x).expect("(1+√2)² detected");
        assert_eq!(t.mul(&w, &w), x);
        // 2 is a square (of √2), 8 is a square (of 2√2), 3 is not.
        assert!(t.is_square(&t.from_i64(2)));
        let w8 = t.sqrt(&t.from_i64(8)).unwrap();
        assert_eq!(t.mul(&w8, &w8), t.from_i64(8));
        assert!(!t.is_square(&t.from_i64(3)));
        assert!(!t.is_square(&t.neg(&t.one())));
        // 1−√2 has negative-rational norm: not a square.
        assert!(!t.is_square(&t.sub(&t.one(), &s2)));
    }

    #[test]
    fn adjoining_a_square_is_refused() {
        let (t, _) = qext(2, None);
        match t.with_sqrt(&t.from_i64(8), None).unwrap() {
            Adjoined::Already { sqrt } => assert_eq!(t.mul(&sqrt, &sqrt), t.from_i64(8)),
            Adjoined::Extended { .. } => panic!("8 is already a square in ℚ(√2)"),
        }
        assert!(matches!(
            t.with_sqrt(&t.zero(), None),
            Err(Error::ZeroRadicand)
        ));
    }

    #[test]
    fn radicand_normalization_strips_square_content() {
        // Adjoining √12 stores radicand 3 and returns witness 2·g with g²=3.
        let (t, w) = qext(12, None);
        assert_eq!(t.mul(&w, &w), t.from_i64(12));
        assert_eq!(t.radicand(0), t.from_i64(3));
    }

    #[test]
    fn two_is_a_square_in_q_sqrt_m6_m3() {
        let t0 = q();
        let (t1, _) = t0.adjoin_sqrt(&t0.from_i64(-6), None).unwrap();
        let (t2, _) = t1.adjoin_sqrt(&t1.from_i64(-3), None).unwrap();
        assert_eq!(t2.degree(), 4);
        let w = t2.sqrt(&t2.from_i64(2)).expect("√−6·√−3 = −3√2");
        assert_eq!(t2.mul(&w, &w), t2.from_i64(2));
        // −1 and −2 are not squares there.
        assert!(!t2.is_square(&t2.from_i64(-1)));
        assert!(!t2.is_square(&t2.from_i64(-2)));
    }

    #[test]
    fn i_appears_after_adjoining_sqrt_m2() {
        let t0 = q();
        let (t1, _) = t0.adjoin_sqrt(&t0.from_i64(-6), None).unwrap();
        let (t2, _) = t1.adjoin_sqrt(&t1.from_i64(-3), None).unwrap();
        let (t3, _) = t2.adjoin_sqrt(&t2.from_i64(-2), None).unwrap();
        assert_eq!(t3.degree(), 8);
        let i = t3.zeta4().expect("i = √−6·√−3·√−2 / −6");
        assert_eq!(t3.mul(&i, &i), t3.neg(&t3.one()));
    }

    #[test]
    fn nested_radicand_tower() {
        // ℚ(√3, √(6√3−12)): the second radicand is not a square in ℚ(√3).
        let (t1, s3) = qext(3, None);
        let inner = t1.sub(&t1.mul(&t1.from_i64(6), &s3), &t1.from_i64(12));
        let (t2, w) = t1.adjoin_sqrt(&inner, None).unwrap();
        assert_eq!(t2.degree(), 4);
        assert_eq!(t2.mul(&w, &w), t2.lift(&inner).unwrap());
        // −3(√3−1)² = 6√3−12, so −3·(6√3−12) is a square in ℚ(√3) already.
        let m3_inner = t1.mul(&t1.from_i64(-3), &inner);
        assert!(t1.is_square(&m3_inner));
    }

    #[test]
    fn zeta_chain() {
        let (t, z8) = q().with_zeta_pow2(3).unwrap();
        assert_eq!(t.degree(), 4);
        let z4 = t.mul(&z8, &z8);
        assert_eq!(t.mul(&z4, &z4), t.neg(&t.one()));
        assert_eq!(t.pow(&z8, 8), t.one());
        assert_ne!(t.pow(&z8, 4), t.one());
        // √2 = ζ₈ + ζ₈⁻¹ lives in ℚ(ζ₈).
        assert!(t.is_square(&t.from_i64(2)));
        // And so does √−2.
        assert!(t.is_square(&t.from_i64(-2)));
    }

    #[test]
    fn lift_and_owner_guard() {
        let t0 = q();
        let x = t0.from_i64(5);
        let (t1, _) = t0.adjoin_sqrt(&t0.from_i64(2), None).unwrap();
        let lifted = t1.lift(&x).unwrap();
        assert_eq!(lifted, t1.from_i64(5));
        let (other, _) = qext(3, None);
        assert!(matches!(
            other.lift(&lifted),
            Err(Error::OwnerMismatch { .. })
        ));
    }

    #[test]
    fn embedding_respects_field_structure() {
        // ℚ(√8) embeds into ℚ(√2) and vice versa (same field).
        let (a, _) = qext(8, None);
        let (b, _) = qext(2, None);
        assert!(a.same_field(&b).unwrap());
        // ℚ(√2) does not embed into ℚ(√3).
        let (c, _) = qext(3, None);
        assert!(!b.contains_field(&c).unwrap());
        assert!(!b.same_field(&c).unwrap());
        // ℚ(√2) embeds into ℚ(√−6, √−3) (which contains √2).
        let t0 = q();
        let (t1, _) = t0.adjoin_sqrt(&t0.from_i64(-6), None).unwrap();
        let (t2, _) = t1.adjoin_sqrt(&t1.from_i64(-3), None).unwrap();
        assert!(t2.contains_field(&b).unwrap());
        assert!(!t2.same_field(&b).unwrap());
    }

    #[test]
    fn embedding_backtracks_over_sign_choices() {
        // A = ℚ(√2)(√(1 − √2)) embeds into B = ℚ(√2)(√(1 + √2)) only by
        // sending √2 to the opposite of the canonical root, since 1 − √2 is
        // not a square in B but 1 + √2 is. The search must backtrack.
        let (a1, ga) = qext(2, None);
        let rad_a = a1.sub(&a1.one(), &ga);
        let (a2, _) = a1.adjoin_sqrt(&rad_a, None).unwrap();

        let (b1, gb) = qext(2, None);
        let rad_b = b1.add(&b1.one(), &gb);
        let (b2, _) = b1.adjoin_sqrt(&rad_b, None).unwrap();

        let images = a2.embed_into(&b2).unwrap().expect("embedding exists");
        let g_img = &images[0];
        assert_eq!(b2.mul(g_img, g_img), b2.from_i64(2));
        // The canonical square root of 2 in B is rejected; its negative works.
        assert_eq!(*g_img, b2.neg(&b2.sqrt(&b2.from_i64(2)).unwrap()));
        // And indeed the two towers are distinct presentations of one field:
        assert!(a2.same_field(&b2).unwrap());
    }

    #[test]
    fn compositum_and_membership() {
        let (a, _) = qext(2, None);
        let (b, _) = qext(3, None);
        let (c, imgs) = a.compositum(&b).unwrap();
        assert_eq!(c.degree(), 4);
        assert_eq!(c.mul(&imgs[0], &imgs[0]), c.from_i64(3));
        // √2·√3 is a member of ℚ(√6).
        let (d, _) = qext(6, None);
        let s2 = c.lift(&a.generator(0)).unwrap();
        let prod = c.mul(&s2, &imgs[0]);
        let back = c.member_of(&prod, &d).unwrap().expect("√6 ∈ ℚ(√6)");
        assert_eq!(d.mul(&back, &back), d.from_i64(6));
        // √2 itself is not a member of ℚ(√6).
        assert!(c.member_of(&s2, &d).unwrap().is_none());
    }

    #[test]
    fn multiset_matching_across_presentations() {
        // {√8, −√8} in ℚ(√8) matches {2√2, −2√2} in ℚ(√2).
        let (a, ga) = qext(8, None);
        let (b, gb) = qext(2, None);
        let two_s2 = b.mul(&b.from_i64(2), &gb);
        assert!(a
            .multiset_matches(
                &[ga.clone(), a.neg(&ga)],
                &b,
                &[two_s2.clone(), b.neg(&two_s2)]
            )
            .unwrap());
        // But not {2√2, 2√2} (multiplicity mismatch).
        assert!(!a
            .multiset_matches(&[ga.clone(), a.neg(&ga)], &b, &[two_s2.clone(), two_s2])
            .unwrap());
    }

    #[test]
    fn scalar_display() {
        let (t1, _) = qext(3, Some("s3"));
        let x = t1.add(
            &t1.from_rat(&"1/2".parse().unwrap()),
            &t1.mul(&t1.from_i64(-2), &t1.generator(0)),
        );
        assert_eq!(t1.fmt_elem(&x), "1/2 - 2*s3");
        assert_eq!(t1.describe(), vec!["s3 = sqrt(3)".to_string()]);
        assert_eq!(t1.fmt_elem(&t1.zero()), "0");
    }

    #[test]
    fn degrees_double_only_for_nonsquares() {
        let mut t = q();
        for (v, expect_height) in [(2i64, 1), (3, 2), (6, 2), (-1, 3), (-6, 3)] {
            let x = t.from_i64(v);
            t = t.adjoin_sqrt(&x, None).unwrap().0;
            assert_eq!(t.height(), expect_height, "after adjoining sqrt({v})");
        }
        assert_eq!(t.degree(), 8);
    }
}
