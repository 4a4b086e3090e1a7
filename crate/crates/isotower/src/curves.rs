//! Elliptic curves y² = x³ + c₂x² + c₁x + c₀ over quadratic towers: exact
//! chord–tangent arithmetic, the degree-2 isogeny with split kernel in three
//! sign conventions, its dual, fiber computation, and point halving with
//! on-demand tower extension.

use crate::fields::{Field, TowerElem, TowerField};
use crate::{Error, Result};

/// A projective point in affine-or-infinity form.
#[derive(Clone, PartialEq, Debug)]
pub enum Point<B: Field> {
    Infinity,
    Affine {
        x: TowerElem<B>,
        y: TowerElem<B>,
    },
}

impl<B: Field> Point<B> {
    pub fn affine(x: TowerElem<B>, y: TowerElem<B>) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn xy(&self) -> Option<(&TowerElem<B>, &TowerElem<B>)> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn lift_to(&self, t: &TowerField<B>) -> Result<Self> {
        Ok(match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: t.lift(x)?,
                y: t.lift(y)?,
            },
        })
    }

    pub fn fmt_with(&self, t: &TowerField<B>) -> String {
        match self {
            Point::Infinity => "inf".into(),
            Point::Affine { x, y } => format!("({}, {})", t.fmt_elem(x), t.fmt_elem(y)),
        }
    }
}

/// y² = x³ + c₂x² + c₁x + c₀, optionally remembering an ordered triple of
/// roots of the cubic (required for halving and torsion enumeration).
#[derive(Clone, PartialEq, Debug)]
pub struct Curve<B: Field> {
    pub c2: TowerElem<B>,
    pub c1: TowerElem<B>,
    pub c0: TowerElem<B>,
    pub roots: Option<[TowerElem<B>; 3]>,
}

impl<B: Field> Curve<B> {
    pub fn from_coeffs(c2: TowerElem<B>, c1: TowerElem<B>, c0: TowerElem<B>) -> Self {
        Curve {
            c2,
            c1,
            c0,
            roots: None,
        }
    }

    /// Build y² = (x−e₁)(x−e₂)(x−e₃) from pairwise-distinct roots.
    pub fn from_roots(t: &TowerField<B>, e: [TowerElem<B>; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if t.is_zero(&t.sub(&e[i], &e[j])) {
                    return Err(Error::DistinctRootsRequired);
                }
            }
        }
        let s1 = t.add(&t.add(&e[0], &e[1]), &e[2]);
        let s2 = t.add(
            &t.add(&t.mul(&e[0], &e[1]), &t.mul(&e[0], &e[2])),
            &t.mul(&e[1], &e[2]),
        );
        let s3 = t.mul(&t.mul(&e[0], &e[1]), &e[2]);
        Ok(Curve {
            c2: t.neg(&s1),
            c1: s2,
            c0: t.neg(&s3),
            roots: Some(e),
        })
    }

    pub fn lift_to(&self, t: &TowerField<B>) -> Result<Self> {
        let lift3 = |e: &[TowerElem<B>; 3]| -> Result<[TowerElem<B>; 3]> {
            Ok([t.lift(&e[0])?, t.lift(&e[1])?, t.lift(&e[2])?])
        };
        Ok(Curve {
            c2: t.lift(&self.c2)?,
            c1: t.lift(&self.c1)?,
            c0: t.lift(&self.c0)?,
            roots: self.roots.as_ref().map(lift3).transpose()?,
        })
    }

    /// The cubic x³ + c₂x² + c₁x + c₀ at x.
    pub fn rhs(&self, t: &TowerField<B>, x: &TowerElem<B>) -> TowerElem<B> {
        let mut acc = t.add(x, &self.c2);
        acc = t.add(&t.mul(&acc, x), &self.c1);
        t.add(&t.mul(&acc, x), &self.c0)
    }

    pub fn is_on(&self, t: &TowerField<B>, p: &Point<B>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => t.mul(y, y) == self.rhs(t, x),
        }
    }

    pub fn require_on(&self, t: &TowerField<B>, p: &Point<B>) -> Result<()> {
        if self.is_on(t, p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.fmt_with(t)))
        }
    }

    /// Validated point construction.
    pub fn point(
        &self,
        t: &TowerField<B>,
        x: TowerElem<B>,
        y: TowerElem<B>,
    ) -> Result<Point<B>> {
        let p = Point::Affine { x, y };
        self.require_on(t, &p)?;
        Ok(p)
    }

    pub fn neg_pt(&self, t: &TowerField<B>, p: &Point<B>) -> Point<B> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.clone(),
                y: t.neg(y),
            },
        }
    }

    /// Chord–tangent addition.
    pub fn add_pts(&self, t: &TowerField<B>, p: &Point<B>, q: &Point<B>) -> Result<Point<B>> {
        let (x1, y1) = match p.xy() {
            None => return Ok(q.clone()),
            Some(v) => v,
        };
        let (x2, y2) = match q.xy() {
            None => return Ok(p.clone()),
            Some(v) => v,
        };
        let lambda = if x1 == x2 {
            if t.is_zero(&t.add(y1, y2)) {
                return Ok(Point::Infinity);
            }
            // Tangent: (3x² + 2c₂x + c₁) / 2y.
            let num = t.add(
                &t.add(
                    &t.mul(&t.from_i64(3), &t.mul(x1, x1)),
                    &t.mul(&t.mul(&t.from_i64(2), &self.c2), x1),
                ),
                &self.c1,
            );
            t.div(&num, &t.mul(&t.from_i64(2), y1))?
        } else {
            t.div(&t.sub(y2, y1), &t.sub(x2, x1))?
        };
        let x3 = t.sub(
            &t.sub(&t.sub(&t.mul(&lambda, &lambda), &self.c2), x1),
            x2,
        );
        let y3 = t.sub(&t.mul(&lambda, &t.sub(x1, &x3)), y1);
        let out = Point::Affine { x: x3, y: y3 };
        debug_assert!(self.is_on(t, &out));
        Ok(out)
    }

    pub fn double_pt(&self, t: &TowerField<B>, p: &Point<B>) -> Result<Point<B>> {
        self.add_pts(t, p, p)
    }

    /// The 2-torsion subgroup, in root order after the identity.
    pub fn two_torsion(&self, t: &TowerField<B>) -> Result<Vec<Point<B>>> {
        let e = self.roots.as_ref().ok_or(Error::MissingRoots)?;
        let mut out = vec![Point::Infinity];
        for r in e {
            out.push(Point::Affine {
                x: r.clone(),
                y: t.zero(),
            });
        }
        Ok(out)
    }

    /// Coordinate change x ↦ x − delta (roots move by −delta).
    pub fn translate(&self, t: &TowerField<B>, delta: &TowerElem<B>) -> Result<Self> {
        match &self.roots {
            Some(e) => Curve::from_roots(
                t,
                [
                    t.sub(&e[0], delta),
                    t.sub(&e[1], delta),
                    t.sub(&e[2], delta),
                ],
            ),
            None => Err(Error::MissingRoots),
        }
    }

    pub fn translate_point(&self, t: &TowerField<B>, p: &Point<B>, delta: &TowerElem<B>) -> Point<B> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: t.sub(x, delta),
                y: y.clone(),
            },
        }
    }
}

/// Sign convention for the degree-2 isogeny with kernel (0,0) on
/// y² = x(x−β)(x−γ).
///
/// The classical map is (x, y) ↦ (x − (β+γ) + βγ/x, y(1 − βγ/x²)).
/// Its image satisfies Y² = X³ + 2(β+γ)X² + (β−γ)²X. A widely circulated
/// variant writes the target with −2(β+γ) instead; the map and that target
/// are incompatible, which [`Convention::Literal`] demonstrates. The twisted
/// convention repairs the −2(β+γ) target by post-composing with
/// (X, Y) ↦ (−X, ζ₄Y), at the price of needing a fourth root of unity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    CorrectedTarget,
    TwistedMap,
    Literal,
}

impl Convention {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Convention::CorrectedTarget),
            "twisted" => Ok(Convention::TwistedMap),
            "literal" => Ok(Convention::Literal),
            _ => Err(Error::Config(format!(
                "unknown convention {s:?} (expected corrected|twisted|literal)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Convention::CorrectedTarget => "corrected",
            Convention::TwistedMap => "twisted",
            Convention::Literal => "literal",
        }
    }
}

/// The degree-2 isogeny from y² = x(x−β)(x−γ) with kernel {∞, (0,0)}.
#[derive(Clone, Debug)]
pub struct TwoIsogeny<B: Field> {
    pub beta: TowerElem<B>,
    pub gamma: TowerElem<B>,
    pub conv: Convention,
    pub zeta4: Option<TowerElem<B>>,
}

impl<B: Field> TwoIsogeny<B> {
    pub fn new(
        t: &TowerField<B>,
        beta: TowerElem<B>,
        gamma: TowerElem<B>,
        conv: Convention,
        zeta4: Option<TowerElem<B>>,
    ) -> Result<Self> {
        if t.is_zero(&beta) || t.is_zero(&gamma) || t.is_zero(&t.sub(&beta, &gamma)) {
            return Err(Error::DistinctRootsRequired);
        }
        // ζ₄ is only needed to move points; validate it if supplied.
        if let Some(z) = &zeta4 {
            if t.mul(z, z) != t.neg(&t.one()) {
                return Err(Error::NeedsZeta4);
            }
        }
        Ok(TwoIsogeny {
            beta,
            gamma,
            conv,
            zeta4,
        })
    }

    pub fn lift_to(&self, t: &TowerField<B>) -> Result<Self> {
        Ok(TwoIsogeny {
            beta: t.lift(&self.beta)?,
            gamma: t.lift(&self.gamma)?,
            conv: self.conv,
            zeta4: self.zeta4.as_ref().map(|z| t.lift(z)).transpose()?,
        })
    }

    pub fn source_curve(&self, t: &TowerField<B>) -> Result<Curve<B>> {
        Curve::from_roots(t, [t.zero(), self.beta.clone(), self.gamma.clone()])
    }

    fn sum_bg(&self, t: &TowerField<B>) -> TowerElem<B> {
        t.add(&self.beta, &self.gamma)
    }

    fn prod_bg(&self, t: &TowerField<B>) -> TowerElem<B> {
        t.mul(&self.beta, &self.gamma)
    }

    fn diff_sq(&self, t: &TowerField<B>) -> TowerElem<B> {
        let d = t.sub(&self.beta, &self.gamma);
        t.mul(&d, &d)
    }

    /// Target in the convention's normal form: Y² = X³ ± 2(β+γ)X² + (β−γ)²X.
    pub fn target_curve(&self, t: &TowerField<B>) -> Curve<B> {
        let two_sum = t.mul(&t.from_i64(2), &self.sum_bg(t));
        let c2 = match self.conv {
            Convention::CorrectedTarget => two_sum,
            Convention::TwistedMap | Convention::Literal => t.neg(&two_sum),
        };
        Curve::from_coeffs(c2, self.diff_sq(t), t.zero())
    }

    fn corrected_target(&self, t: &TowerField<B>) -> Curve<B> {
        Curve::from_coeffs(
            t.mul(&t.from_i64(2), &self.sum_bg(t)),
            self.diff_sq(t),
            t.zero(),
        )
    }

    /// The classical map before any sign fix; lands on the corrected target.
    fn apply_raw(&self, t: &TowerField<B>, x: &TowerElem<B>, y: &TowerElem<B>) -> Result<(TowerElem<B>, TowerElem<B>)> {
        let b = self.prod_bg(t);
        let x_inv = t.inv(x)?;
        let xx = t.add(&t.sub(x, &self.sum_bg(t)), &t.mul(&b, &x_inv));
        let yy = t.mul(
            y,
            &t.sub(&t.one(), &t.mul(&b, &t.mul(&x_inv, &x_inv))),
        );
        Ok((xx, yy))
    }

    /// Apply the isogeny in the chosen convention.
    pub fn apply(&self, t: &TowerField<B>, p: &Point<B>) -> Result<Point<B>> {
        self.source_curve(t)?.require_on(t, p)?;
        let (x, y) = match p.xy() {
            None => return Ok(Point::Infinity),
            Some(v) => v,
        };
        if t.is_zero(x) {
            return Ok(Point::Infinity); // (0,0) generates the kernel
        }
        let (xx, yy) = self.apply_raw(t, x, y)?;
        let target = self.target_curve(t);
        match self.conv {
            Convention::CorrectedTarget => {
                let q = Point::Affine { x: xx, y: yy };
                target.require_on(t, &q).map_err(|_| {
                    Error::Internal("corrected image left its target".into())
                })?;
                Ok(q)
            }
            Convention::TwistedMap => {
                let z = self.zeta4.as_ref().ok_or(Error::NeedsZeta4)?;
                let q = Point::Affine {
                    x: t.neg(&xx),
                    y: t.mul(z, &yy),
                };
                target.require_on(t, &q).map_err(|_| {
                    Error::Internal("twisted image left its target".into())
                })?;
                Ok(q)
            }
            Convention::Literal => {
                let q = Point::Affine { x: xx, y: yy };
                // Generically off the stated target; report the defect.
                target.require_on(t, &q)?;
                Ok(q)
            }
        }
    }

    /// Pull a point of this convention's target back to the corrected target.
    fn to_corrected(&self, t: &TowerField<B>, p: &Point<B>) -> Result<Point<B>> {
        match self.conv {
            Convention::CorrectedTarget => Ok(p.clone()),
            Convention::TwistedMap => {
                let z = self.zeta4.as_ref().ok_or(Error::NeedsZeta4)?;
                let q = match p {
                    Point::Infinity => Point::Infinity,
                    // Inverse twist: (X, Y) ↦ (−X, ζ₄⁻¹Y) with ζ₄⁻¹ = −ζ₄.
                    Point::Affine { x, y } => Point::Affine {
                        x: t.neg(x),
                        y: t.neg(&t.mul(z, y)),
                    },
                };
                self.corrected_target(t).require_on(t, &q)?;
                Ok(q)
            }
            Convention::Literal => Err(Error::Unsupported(
                "the literal convention is not an isogeny".into(),
            )),
        }
    }

    /// The dual map back to the source; composing with [`TwoIsogeny::apply`] doubles.
    pub fn dual_apply(&self, t: &TowerField<B>, p: &Point<B>) -> Result<Point<B>> {
        self.target_curve(t).require_on(t, p)?;
        let q = self.to_corrected(t, p)?;
        let (x, y) = match q.xy() {
            None => return Ok(Point::Infinity),
            Some(v) => v,
        };
        if t.is_zero(x) {
            return Ok(Point::Infinity); // (0,0) generates the dual kernel
        }
        let dsq = self.diff_sq(t);
        let x_inv = t.inv(x)?;
        let quarter = t.from_rat(&crate::fields::Rat::from_frac(1, 4));
        let eighth = t.from_rat(&crate::fields::Rat::from_frac(1, 8));
        let px = t.mul(
            &quarter,
            &t.add(
                &t.add(x, &t.mul(&t.from_i64(2), &self.sum_bg(t))),
                &t.mul(&dsq, &x_inv),
            ),
        );
        let py = t.mul(
            &eighth,
            &t.mul(
                y,
                &t.sub(&t.one(), &t.mul(&dsq, &t.mul(&x_inv, &x_inv))),
            ),
        );
        let out = Point::Affine { x: px, y: py };
        self.source_curve(t)?
            .require_on(t, &out)
            .map_err(|_| Error::Internal("dual image left the source curve".into()))?;
        Ok(out)
    }

    /// The full fiber over a target point, extending the tower as needed.
    /// Returns the (possibly extended) tower and the source points.
    pub fn preimages(
        &self,
        t: &TowerField<B>,
        p: &Point<B>,
    ) -> Result<(TowerField<B>, Vec<Point<B>>)> {
        self.target_curve(t).require_on(t, p)?;
        let q = self.to_corrected(t, p)?;
        let b = self.prod_bg(t);
        let sum = self.sum_bg(t);
        let (u, yv) = match q.xy() {
            None => {
                // Fiber over ∞ is the kernel.
                let zero = Point::Affine {
                    x: t.zero(),
                    y: t.zero(),
                };
                return Ok((t.clone(), vec![Point::Infinity, zero]));
            }
            Some(v) => v,
        };
        if t.is_zero(u) {
            // Fiber over (0,0): the other two 2-torsion points.
            let pts = vec![
                Point::Affine {
                    x: self.beta.clone(),
                    y: t.zero(),
                },
                Point::Affine {
                    x: self.gamma.clone(),
                    y: t.zero(),
                },
            ];
            return Ok((t.clone(), pts));
        }
        let source = self.source_curve(t)?;
        if t.is_zero(yv) {
            // Double root x = (u+β+γ)/2 with x² = βγ; the two fiber points
            // differ in y = ±√(cubic at x).
            let x = t.mul(
                &t.add(u, &sum),
                &t.from_rat(&crate::fields::Rat::from_frac(1, 2)),
            );
            debug_assert_eq!(t.mul(&x, &x), b);
            let yy = source.rhs(t, &x);
            let (t2, w) = t.adjoin_sqrt(&yy, None)?;
            let x2 = t2.lift(&x)?;
            let pts = vec![
                Point::Affine {
                    x: x2.clone(),
                    y: w.clone(),
                },
                Point::Affine {
                    x: x2,
                    y: t2.neg(&w),
                },
            ];
            return Ok((t2, pts));
        }
        // Generic fiber: x² − (u+β+γ)x + βγ = 0, y = Y·x²/(x² − βγ).
        let s = t.add(u, &sum);
        let disc = t.sub(&t.mul(&s, &s), &t.mul(&t.from_i64(4), &b));
        debug_assert!(!t.is_zero(&disc));
        let (t2, sd) = t.adjoin_sqrt(&disc, None)?;
        let s2 = t2.lift(&s)?;
        let b2 = t2.lift(&b)?;
        let yv2 = t2.lift(yv)?;
        let half = t2.from_rat(&crate::fields::Rat::from_frac(1, 2));
        let mut pts = Vec::new();
        for sign in [sd.clone(), t2.neg(&sd)] {
            let x = t2.mul(&t2.add(&s2, &sign), &half);
            let xsq = t2.mul(&x, &x);
            let y = t2.div(&t2.mul(&yv2, &xsq), &t2.sub(&xsq, &b2))?;
            pts.push(Point::Affine { x, y });
        }
        // Confirm the fiber maps back to the given point.
        let lifted = self.lift_to(&t2)?;
        let p2 = p.lift_to(&t2)?;
        for q in &pts {
            let img = lifted.apply(&t2, q)?;
            if img != p2 {
                return Err(Error::Internal("fiber point missed its image".into()));
            }
        }
        Ok((t2, pts))
    }
}

/// All four halves of `p` on a curve with ordered roots, in one shared tower
/// extension. Each returned point doubles back to `p` (verified exactly).
pub fn halve_all<B: Field>(
    t: &TowerField<B>,
    curve: &Curve<B>,
    p: &Point<B>,
) -> Result<(TowerField<B>, Vec<Point<B>>)> {
    let e = curve.roots.clone().ok_or(Error::MissingRoots)?;
    curve.require_on(t, p)?;
    // Shift to y² = x(x−β)(x−γ) with β = e₂−e₁, γ = e₃−e₁.
    let beta = t.sub(&e[1], &e[0]);
    let gamma = t.sub(&e[2], &e[0]);
    let p0 = curve.translate_point(t, p, &e[0]);
    let a = t.neg(&t.add(&beta, &gamma));
    let b = t.mul(&beta, &gamma);
    let phi = TwoIsogeny::new(t, beta.clone(), gamma.clone(), Convention::CorrectedTarget, None)?;
    let target = phi.corrected_target(t);

    // Fiber of the dual over p0.
    let (t1, duals): (TowerField<B>, Vec<Point<B>>) = match p0.xy() {
        None => {
            let zero = Point::Affine {
                x: t.zero(),
                y: t.zero(),
            };
            (t.clone(), vec![Point::Infinity, zero])
        }
        Some((px, py)) => {
            if t.is_zero(py) && t.is_zero(px) {
                // X² + 2(β+γ)X + (β−γ)² = 0 → X = −(β+γ) ± 2√(βγ), Y = 0.
                let (t1, sb) = t.adjoin_sqrt(&b, None)?;
                let msum = t1.neg(&t1.lift(&t.add(&beta, &gamma))?);
                let two_sb = t1.mul(&t1.from_i64(2), &sb);
                let pts = vec![
                    Point::Affine {
                        x: t1.add(&msum, &two_sb),
                        y: t1.zero(),
                    },
                    Point::Affine {
                        x: t1.sub(&msum, &two_sb),
                        y: t1.zero(),
                    },
                ];
                (t1, pts)
            } else if t.is_zero(py) {
                // Double root X = 2p + a; Y = ±√(target cubic at X).
                let x = t.add(&t.mul(&t.from_i64(2), px), &a);
                let yy = target.rhs(t, &x);
                let (t1, w) = t.adjoin_sqrt(&yy, None)?;
                let x1 = t1.lift(&x)?;
                let pts = vec![
                    Point::Affine {
                        x: x1.clone(),
                        y: w.clone(),
                    },
                    Point::Affine {
                        x: x1,
                        y: t1.neg(&w),
                    },
                ];
                (t1, pts)
            } else {
                // X² − (4p+2a)X + (a²−4b) = 0, Y = 8qX²/(X² − (a²−4b)); the
                // discriminant 16(p²+ap+b) is nonzero exactly when q ≠ 0.
                let s = t.add(
                    &t.mul(&t.from_i64(4), px),
                    &t.mul(&t.from_i64(2), &a),
                );
                let c = t.sub(
                    &t.mul(&a, &a),
                    &t.mul(&t.from_i64(4), &b),
                );
                let disc = t.sub(&t.mul(&s, &s), &t.mul(&t.from_i64(4), &c));
                debug_assert!(!t.is_zero(&disc));
                let (t1, sd) = t.adjoin_sqrt(&disc, None)?;
                let s1 = t1.lift(&s)?;
                let c1 = t1.lift(&c)?;
                let q8 = t1.mul(&t1.from_i64(8), &t1.lift(py)?);
                let half = t1.from_rat(&crate::fields::Rat::from_frac(1, 2));
                let mut pts = Vec::new();
                for sign in [sd.clone(), t1.neg(&sd)] {
                    let x = t1.mul(&t1.add(&s1, &sign), &half);
                    let xsq = t1.mul(&x, &x);
                    let y = t1.div(&t1.mul(&q8, &xsq), &t1.sub(&xsq, &c1))?;
                    pts.push(Point::Affine { x, y });
                }
                (t1, pts)
            }
        }
    };

    // Sanity: each dual-fiber point lies on the target and maps to p0.
    let phi1 = phi.lift_to(&t1)?;
    let target1 = target.lift_to(&t1)?;
    let p0_1 = p0.lift_to(&t1)?;
    for r in &duals {
        target1
            .require_on(&t1, r)
            .map_err(|_| Error::Internal("dual fiber left the target curve".into()))?;
        if phi1.dual_apply(&t1, r)? != p0_1 {
            return Err(Error::Internal("dual fiber missed its image".into()));
        }
    }

    // Pull each dual-fiber point back through the isogeny.
    let mut cur = t1;
    let mut halves: Vec<Point<B>> = Vec::new();
    for r in &duals {
        let phi_cur = phi.lift_to(&cur)?;
        let r_cur = r.lift_to(&cur)?;
        let (next, qs) = phi_cur.preimages(&cur, &r_cur)?;
        halves = halves
            .into_iter()
            .map(|q| q.lift_to(&next))
            .collect::<Result<_>>()?;
        halves.extend(qs);
        cur = next;
    }

    // Shift back and verify 2·Q = P exactly.
    let e0 = cur.lift(&e[0])?;
    let curve_cur = curve.lift_to(&cur)?;
    let p_cur = p.lift_to(&cur)?;
    let delta = cur.neg(&e0);
    let mut out = Vec::new();
    for q in halves {
        let shifted = curve_cur.translate_point(&cur, &q, &delta);
        curve_cur.require_on(&cur, &shifted)?;
        if curve_cur.double_pt(&cur, &shifted)? != p_cur {
            return Err(Error::Internal("halving failed verification".into()));
        }
        out.push(shifted);
    }
    if out.len() != 4 {
        return Err(Error::Internal(format!(
            "expected 4 halves, found {}",
            out.len()
        )));
    }
    Ok((cur, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FuncField, Rat, RatField};

    type T = TowerField<RatField>;

    fn q() -> T {
        T::over(RatField)
    }

    fn curve_013(t: &T) -> Curve<RatField> {
        Curve::from_roots(t, [t.from_i64(0), t.from_i64(1), t.from_i64(3)]).unwrap()
    }

    #[test]
    fn root_construction_expands_coefficients() {
        let t = q();
        let c = curve_013(&t);
        // y² = x(x−1)(x−3) = x³ − 4x² + 3x.
        assert_eq!(c.c2, t.from_i64(-4));
        assert_eq!(c.c1, t.from_i64(3));
        assert_eq!(c.c0, t.from_i64(0));
        let dup = Curve::from_roots(&t, [t.from_i64(0), t.from_i64(1), t.from_i64(1)]);
        assert!(matches!(dup, Err(Error::DistinctRootsRequired)));
    }

    #[test]
    fn two_torsion_addition() {
        let t = q();
        let c = curve_013(&t);
        let p = c.point(&t, t.from_i64(0), t.from_i64(0)).unwrap();
        let r = c.point(&t, t.from_i64(1), t.from_i64(0)).unwrap();
        let sum = c.add_pts(&t, &p, &r).unwrap();
        assert_eq!(sum, c.point(&t, t.from_i64(3), t.from_i64(0)).unwrap());
        // Each 2-torsion point doubles to ∞.
        for v in c.two_torsion(&t).unwrap() {
            assert!(c.double_pt(&t, &v).unwrap().is_infinity());
        }
        assert!(c.point(&t, t.from_i64(2), t.from_i64(1)).is_err());
    }

    #[test]
    fn group_law_identities() {
        // On y² = x(x−1)(x−3) over ℚ(√3): P = (4, 2√3).
        let t0 = q();
        let three = t0.from_i64(3);
        let (t, s3) = t0.adjoin_sqrt(&three, None).unwrap();
        let c = curve_013(&t);
        let p = c
            .point(&t, t.from_i64(4), t.mul(&t.from_i64(2), &s3))
            .unwrap();
        let minus_p = c.neg_pt(&t, &p);
        assert!(c.add_pts(&t, &p, &minus_p).unwrap().is_infinity());
        // (P + P) + P = P + (P + P).
        let p2 = c.double_pt(&t, &p).unwrap();
        let lhs = c.add_pts(&t, &p2, &p).unwrap();
        let rhs = c.add_pts(&t, &p, &p2).unwrap();
        assert_eq!(lhs, rhs);
        // Mixed associativity with a 2-torsion point.
        let r = c.point(&t, t.from_i64(1), t.zero()).unwrap();
        let lhs = c.add_pts(&t, &c.add_pts(&t, &p, &r).unwrap(), &p2).unwrap();
        let rhs = c.add_pts(&t, &p, &c.add_pts(&t, &r, &p2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    fn witness_setup() -> (T, TwoIsogeny<RatField>, Point<RatField>) {
        let t0 = q();
        let three = t0.from_i64(3);
        let (t, s3) = t0.adjoin_sqrt(&three, None).unwrap();
        let phi = TwoIsogeny::new(
            &t,
            t.from_i64(1),
            t.from_i64(3),
            Convention::CorrectedTarget,
            None,
        )
        .unwrap();
        let p = Point::affine(t.from_i64(4), t.mul(&t.from_i64(2), &s3));
        (t, phi, p)
    }

    #[test]
    fn corrected_image_of_witness() {
        let (t, phi, p) = witness_setup();
        let img = phi.apply(&t, &p).unwrap();
        let (x, y) = img.xy().unwrap();
        // X = 4 − 4 + 3/4 = 3/4, Y = 2√3·(1 − 3/16) = 13√3/8.
        assert_eq!(*x, t.from_rat(&Rat::from_frac(3, 4)));
        let expect_y = t.mul(
            &t.from_rat(&Rat::from_frac(13, 8)),
            &t.sqrt(&t.from_i64(3)).unwrap(),
        );
        assert_eq!(t.mul(y, y), t.from_rat(&Rat::from_frac(507, 64)));
        assert!(*y == expect_y || *y == t.neg(&expect_y));
        // Kernel and 2-torsion behavior.
        assert!(phi
            .apply(&t, &Point::affine(t.zero(), t.zero()))
            .unwrap()
            .is_infinity());
        assert!(phi.apply(&t, &Point::Infinity).unwrap().is_infinity());
        let img1 = phi.apply(&t, &Point::affine(t.from_i64(1), t.zero())).unwrap();
        assert_eq!(img1, Point::affine(t.zero(), t.zero()));
    }

    #[test]
    fn literal_convention_fails_off_two_torsion() {
        let (t, _, p) = witness_setup();
        let lit = TwoIsogeny::new(
            &t,
            t.from_i64(1),
            t.from_i64(3),
            Convention::Literal,
            None,
        )
        .unwrap();
        // The classical map image (3/4, ±13√3/8) misses the −2(β+γ) target:
        // X³ − 8X² + 4X at 3/4 is −69/64 ≠ 507/64.
        match lit.apply(&t, &p) {
            Err(Error::NotOnCurve(_)) => {}
            other => panic!("expected an off-curve defect, got {other:?}"),
        }
        // But 2-torsion still lands correctly even literally.
        let img = lit
            .apply(&t, &Point::affine(t.from_i64(1), t.zero()))
            .unwrap();
        assert_eq!(img, Point::affine(t.zero(), t.zero()));
    }

    #[test]
    fn twisted_convention_lands_on_stated_target() {
        let (t0, phi0, p) = witness_setup();
        let (t, z) = t0.with_zeta_pow2(2).unwrap();
        let phi = TwoIsogeny::new(
            &t,
            t.lift(&phi0.beta).unwrap(),
            t.lift(&phi0.gamma).unwrap(),
            Convention::TwistedMap,
            Some(z),
        )
        .unwrap();
        let img = phi.apply(&t, &p.lift_to(&t).unwrap()).unwrap();
        let (x, _) = img.xy().unwrap();
        assert_eq!(*x, t.from_rat(&Rat::from_frac(-3, 4)));
        // Moving points without ζ₄ is rejected.
        let no_z = TwoIsogeny::new(
            &t,
            t.from_i64(1),
            t.from_i64(3),
            Convention::TwistedMap,
            None,
        )
        .unwrap();
        assert!(matches!(
            no_z.apply(&t, &p.lift_to(&t).unwrap()),
            Err(Error::NeedsZeta4)
        ));
    }

    #[test]
    fn dual_composed_with_map_doubles() {
        let (t, phi, p) = witness_setup();
        let img = phi.apply(&t, &p).unwrap();
        let back = phi.dual_apply(&t, &img).unwrap();
        let c = phi.source_curve(&t).unwrap();
        assert_eq!(back, c.double_pt(&t, &p).unwrap());
        // Dual kernel: (0,0) on the target goes to ∞.
        let z = Point::affine(t.zero(), t.zero());
        assert!(phi.dual_apply(&t, &z).unwrap().is_infinity());
    }

    #[test]
    fn twisted_dual_also_doubles() {
        let (t0, _, p0) = witness_setup();
        let (t, z) = t0.with_zeta_pow2(2).unwrap();
        let phi = TwoIsogeny::new(
            &t,
            t.from_i64(1),
            t.from_i64(3),
            Convention::TwistedMap,
            Some(z),
        )
        .unwrap();
        let p = p0.lift_to(&t).unwrap();
        let img = phi.apply(&t, &p).unwrap();
        let back = phi.dual_apply(&t, &img).unwrap();
        let c = phi.source_curve(&t).unwrap();
        assert_eq!(back, c.double_pt(&t, &p).unwrap());
    }

    #[test]
    fn fibers_have_size_two_and_map_back() {
        let (t, phi, p) = witness_setup();
        let img = phi.apply(&t, &p).unwrap();
        let (t2, fiber) = phi.preimages(&t, &img).unwrap();
        assert_eq!(fiber.len(), 2);
        let p2 = p.lift_to(&t2).unwrap();
        assert!(fiber.contains(&p2));
        // The two fiber points differ by the kernel point (0,0).
        let c = phi.source_curve(&t2).unwrap();
        let zero = Point::affine(t2.zero(), t2.zero());
        let other = c.add_pts(&t2, &p2, &zero).unwrap();
        assert!(fiber.contains(&other));
        // Fiber over ∞ is the kernel.
        let (_, ker) = phi.preimages(&t, &Point::Infinity).unwrap();
        assert_eq!(ker.len(), 2);
        assert!(ker.contains(&Point::Infinity));
    }

    #[test]
    fn halving_the_origin_point() {
        // Halving (0,0) on y² = x(x−1)(x−3): x = ±√3 with y² = ±6√3 − 12;
        // the second radicand collapses, leaving a degree-4 tower.
        let t = q();
        let c = curve_013(&t);
        let p = c.point(&t, t.zero(), t.zero()).unwrap();
        let (t2, halves) = halve_all(&t, &c, &p).unwrap();
        assert_eq!(halves.len(), 4);
        assert_eq!(t2.degree(), 4);
        let s3 = t2.sqrt(&t2.from_i64(3)).unwrap();
        for h in &halves {
            let (x, _) = h.xy().unwrap();
            assert!(*x == s3 || *x == t2.neg(&s3));
        }
        // Two halves over each x value.
        let on_plus = halves
            .iter()
            .filter(|h| *h.xy().unwrap().0 == s3)
            .count();
        assert_eq!(on_plus, 2);
    }

    #[test]
    fn halving_a_nonzero_two_torsion_point() {
        // Halving (1,0) on y² = x(x−1)(x−3) needs only ℚ(√−2):
        // x = 1 ± √−2, y = ±(2 − √−2) and conjugates.
        let t = q();
        let c = curve_013(&t);
        let p = c.point(&t, t.from_i64(1), t.zero()).unwrap();
        let (t2, halves) = halve_all(&t, &c, &p).unwrap();
        assert_eq!(halves.len(), 4);
        assert_eq!(t2.degree(), 2);
        assert_eq!(t2.radicand(0), t2.from_i64(-2));
        let sm2 = t2.generator(0);
        let expect = Point::affine(
            t2.add(&t2.one(), &sm2),
            t2.sub(&t2.from_i64(2), &sm2),
        );
        assert!(halves.contains(&expect) || halves.contains(&c.lift_to(&t2).unwrap().neg_pt(&t2, &expect)));
    }

    #[test]
    fn halving_infinity_gives_two_torsion() {
        let t = q();
        let c = curve_013(&t);
        let (t2, halves) = halve_all(&t, &c, &Point::Infinity).unwrap();
        assert_eq!(t2.degree(), 1);
        let tor = c.two_torsion(&t2).unwrap();
        for v in &tor {
            assert!(halves.contains(v));
        }
    }

    #[test]
    fn halving_a_generic_point() {
        // P = (4, 2√3) on y² = x(x−1)(x−3); all four halves double back
        // (checked internally), and the fiber splits 2/2 over the dual fiber.
        let t0 = q();
        let three = t0.from_i64(3);
        let (t, s3) = t0.adjoin_sqrt(&three, None).unwrap();
        let c = curve_013(&t);
        let p = c
            .point(&t, t.from_i64(4), t.mul(&t.from_i64(2), &s3))
            .unwrap();
        let (t2, halves) = halve_all(&t, &c, &p).unwrap();
        assert_eq!(halves.len(), 4);
        // Pairwise distinct.
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert_ne!(halves[i], halves[j]);
            }
        }
        // x − 0 = 2², x − 1 = (√3)², x − 3 = 1², so no extension is needed:
        // the halves stay in ℚ(√3) with x ∈ {6 ± 3√3, 2 ± √3}.
        assert_eq!(t2.degree(), 2);
        let s3_2 = t2.lift(&s3).unwrap();
        let mut xs: Vec<_> = halves
            .iter()
            .map(|h| h.xy().unwrap().0.clone())
            .collect();
        for expect in [
            t2.add(&t2.from_i64(6), &t2.mul(&t2.from_i64(3), &s3_2)),
            t2.sub(&t2.from_i64(6), &t2.mul(&t2.from_i64(3), &s3_2)),
            t2.add(&t2.from_i64(2), &s3_2),
            t2.sub(&t2.from_i64(2), &s3_2),
        ] {
            let pos = xs.iter().position(|x| *x == expect).expect("missing half");
            xs.remove(pos);
        }
        assert!(xs.is_empty());
    }

    #[test]
    fn halving_extends_when_coordinates_are_not_squares() {
        // P = (−1, 2√−2) on y² = x(x−1)(x−3): x − 1 = −2 is not a square in
        // ℚ(√−2), so halving must extend the tower.
        let t0 = q();
        let m2 = t0.from_i64(-2);
        let (t, sm2) = t0.adjoin_sqrt(&m2, None).unwrap();
        let c = curve_013(&t);
        let p = c
            .point(&t, t.from_i64(-1), t.mul(&t.from_i64(2), &sm2))
            .unwrap();
        let (t2, halves) = halve_all(&t, &c, &p).unwrap();
        assert_eq!(halves.len(), 4);
        assert!(t2.degree() > 2);
    }

    // ----- symbolic certification over function fields -----

    type FQ = FuncField<RatField>;
    type TS = TowerField<FQ>;

    fn sym3() -> (TS, TowerElem<FQ>, TowerElem<FQ>, TowerElem<FQ>) {
        // Height-0 tower over ℚ(β, γ, x): pure rational-function arithmetic.
        let f = FuncField::new(RatField, &["b", "g", "x"]);
        let t = TS::over(f.clone());
        let (b, g, x) = (t.scalar(f.var(0)), t.scalar(f.var(1)), t.scalar(f.var(2)));
        (t, b, g, x)
    }

    /// Image of a generic point under the classical map, as (X, Y/y) with
    /// y² = x(x−β)(x−γ) eliminated; returns (X, Y∕y, y²).
    fn generic_image(
        t: &TS,
        b: &TowerElem<FQ>,
        g: &TowerElem<FQ>,
        x: &TowerElem<FQ>,
    ) -> (TowerElem<FQ>, TowerElem<FQ>, TowerElem<FQ>) {
        let prod = t.mul(b, g);
        let sum = t.add(b, g);
        let xinv = t.inv(x).unwrap();
        let xx = t.add(&t.sub(x, &sum), &t.mul(&prod, &xinv));
        let yy_over_y = t.sub(&t.one(), &t.mul(&prod, &t.mul(&xinv, &xinv)));
        let ysq = t.mul(&t.mul(x, &t.sub(x, b)), &t.sub(x, g));
        (xx, yy_over_y, ysq)
    }

    #[test]
    fn symbolic_forward_map_certificate() {
        // Y² − (X³ + 2(β+γ)X² + (β−γ)²X) vanishes identically, while the
        // −2(β+γ) variant leaves a nonzero defect.
        let (t, b, g, x) = sym3();
        let (xx, yy_over_y, ysq) = generic_image(&t, &b, &g, &x);
        let ysq_img = t.mul(&ysq, &t.mul(&yy_over_y, &yy_over_y));
        let two_sum = t.mul(&t.from_i64(2), &t.add(&b, &g));
        let dsq = t.square(&t.sub(&b, &g));
        let cubic = |c2: &TowerElem<FQ>| {
            t.mul(
                &t.add(&t.add(&t.mul(&xx, &xx), &t.mul(c2, &xx)), &dsq),
                &xx,
            )
        };
        assert_eq!(ysq_img, cubic(&two_sum));
        let defect = t.sub(&ysq_img, &cubic(&t.neg(&two_sum)));
        assert!(!t.is_zero(&defect));
    }

    #[test]
    fn symbolic_dual_certificate() {
        // The dual of the image equals doubling, coordinate by coordinate,
        // as rational functions of (β, γ, x).
        let (t, b, g, x) = sym3();
        let (xx, yy_over_y, ysq) = generic_image(&t, &b, &g, &x);
        let sum = t.add(&b, &g);
        let dsq = t.square(&t.sub(&b, &g));
        let quarter = t.from_rat(&Rat::from_frac(1, 4));
        let eighth = t.from_rat(&Rat::from_frac(1, 8));
        let xxinv = t.inv(&xx).unwrap();
        let dual_x = t.mul(
            &quarter,
            &t.add(
                &t.add(&xx, &t.mul(&t.from_i64(2), &sum)),
                &t.mul(&dsq, &xxinv),
            ),
        );
        // Dual Y divided by y.
        let dual_y_over_y = t.mul(
            &eighth,
            &t.mul(
                &yy_over_y,
                &t.sub(&t.one(), &t.mul(&dsq, &t.mul(&xxinv, &xxinv))),
            ),
        );
        // Doubling on y² = x(x−β)(x−γ): a = −(β+γ), with
        // λ = f′(x)/(2y), X₂ = λ² − a − 2x, Y₂ = λ(x − X₂) − y.
        let a = t.neg(&sum);
        let bb = t.mul(&b, &g);
        let fprime = t.add(
            &t.add(
                &t.mul(&t.from_i64(3), &t.mul(&x, &x)),
                &t.mul(&t.mul(&t.from_i64(2), &a), &x),
            ),
            &bb,
        );
        // λ² = f′(x)²/(4y²), rational in x.
        let lam_sq = t
            .div(&t.square(&fprime), &t.mul(&t.from_i64(4), &ysq))
            .unwrap();
        let x2 = t.sub(&t.sub(&lam_sq, &a), &t.mul(&t.from_i64(2), &x));
        assert_eq!(dual_x, x2);
        // Y₂/y = f′(x)(x − X₂)/(2y²) − 1.
        let y2_over_y = t.sub(
            &t.div(
                &t.mul(&fprime, &t.sub(&x, &x2)),
                &t.mul(&t.from_i64(2), &ysq),
            )
            .unwrap(),
            &t.one(),
        );
        assert_eq!(dual_y_over_y, y2_over_y);
    }

    #[test]
    fn symbolic_twisted_certificate() {
        // Over a coefficient field containing i, the twisted image satisfies
        // the −2(β+γ) target identically.
        let (qi, z) = TowerField::over(RatField).with_zeta_pow2(2).unwrap();
        let f: FuncField<TowerField<RatField>> = FuncField::new(qi.clone(), &["b", "g", "x"]);
        let t = TowerField::over(f.clone());
        let (b, g, x) = (t.scalar(f.var(0)), t.scalar(f.var(1)), t.scalar(f.var(2)));
        let zi = t.scalar(f.from_coeff(z));
        let prod = t.mul(&b, &g);
        let sum = t.add(&b, &g);
        let xinv = t.inv(&x).unwrap();
        let xx = t.add(&t.sub(&x, &sum), &t.mul(&prod, &xinv));
        let yy_over_y = t.sub(&t.one(), &t.mul(&prod, &t.mul(&xinv, &xinv)));
        let ysq = t.mul(&t.mul(&x, &t.sub(&x, &b)), &t.sub(&x, &g));
        // Twisted image: (−X, ζ₄·Y).
        let tx = t.neg(&xx);
        let ty_sq = t.mul(
            &t.square(&zi),
            &t.mul(&ysq, &t.square(&yy_over_y)),
        );
        let two_sum = t.mul(&t.from_i64(2), &sum);
        let dsq = t.square(&t.sub(&b, &g));
        let rhs = t.mul(
            &t.add(&t.sub(&t.mul(&tx, &tx), &t.mul(&two_sum, &tx)), &dsq),
            &tx,
        );
        assert_eq!(ty_sq, rhs);
    }
}
