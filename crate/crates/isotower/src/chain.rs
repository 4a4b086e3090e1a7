//! The recursive 2-isogeny chain over the level tree. Every vertex carries a
//! curve in split normal form; each edge is the degree-2 isogeny whose kernel
//! is generated by the child's declared 2-torsion point. Descent is verified
//! as it goes: constructed targets must equal the recursion's normal form,
//! kernel generators must die, and the four halves of each generator must
//! map onto the child's two remaining 2-torsion points, two apiece.

use crate::curves::{halve_all, Convention, Curve, Point, TwoIsogeny};
use crate::decoration::{child_quadratic, level_one_values, Policy, Variant};
use crate::fields::{Field, TowerElem, TowerField};
use crate::tree::Vertex;
use crate::{Error, Result};

/// The curve attached to a vertex at `level` carrying `a`, with twin value
/// `a_twin`: y² = x(x² + C₂x + C₁) whose nonzero roots are the children's
/// values. The corrected convention negates the printed C₂.
pub fn normal_form_curve<B: Field>(
    t: &TowerField<B>,
    level: u32,
    a: &TowerElem<B>,
    a_twin: &TowerElem<B>,
    conv: Convention,
) -> Result<Curve<B>> {
    let (s, p) = child_quadratic(t, level, a, a_twin, Variant::ConstructionConsistent);
    let c2 = match conv {
        Convention::CorrectedTarget => s,
        Convention::TwistedMap => t.neg(&s),
        Convention::Literal => {
            return Err(Error::Unsupported(
                "the literal convention is not an isogeny; no chain exists".into(),
            ))
        }
    };
    Ok(Curve::from_coeffs(c2, p, t.zero()))
}

#[derive(Clone, Debug)]
pub struct ChainVertex<B: Field> {
    pub vertex: Vertex,
    pub a: TowerElem<B>,
    pub a_twin: TowerElem<B>,
    pub curve: Curve<B>,
}

/// All vertices down to some level, decorated with curves, in one shared
/// tower.
#[derive(Clone, Debug)]
pub struct Chain<B: Field> {
    pub conv: Convention,
    pub tower: TowerField<B>,
    pub levels: Vec<Vec<ChainVertex<B>>>,
}

impl<B: Field> Chain<B> {
    pub fn level_vertices(&self, level: u32) -> &[ChainVertex<B>] {
        &self.levels[(level - 1) as usize]
    }

    pub fn level_values(&self, level: u32) -> Vec<TowerElem<B>> {
        self.level_vertices(level)
            .iter()
            .map(|c| c.a.clone())
            .collect()
    }
}

fn lift_chain_vertex<B: Field>(t: &TowerField<B>, v: &ChainVertex<B>) -> Result<ChainVertex<B>> {
    Ok(ChainVertex {
        vertex: v.vertex,
        a: t.lift(&v.a)?,
        a_twin: t.lift(&v.a_twin)?,
        curve: v.curve.lift_to(t)?,
    })
}

/// Split the nonzero 2-torsion of `curve` (y² = x(x² + C₂x + C₁)), extending
/// the tower as needed; the `+√disc` root comes first under `PlusFirst`.
fn split_curve_torsion<B: Field>(
    t: &TowerField<B>,
    at: &Vertex,
    curve: &Curve<B>,
    policy: Policy,
) -> Result<(TowerField<B>, TowerElem<B>, TowerElem<B>)> {
    let disc = t.sub(
        &t.square(&curve.c2),
        &t.mul(&t.from_i64(4), &curve.c1),
    );
    if t.is_zero(&disc) {
        return Err(Error::DegenerateQuadratic(format!(
            "coincident 2-torsion below vertex {}",
            at.path_string()
        )));
    }
    let (t2, w) = t.adjoin_sqrt(&disc, None)?;
    let half = t2.from_rat(&crate::fields::Rat::from_frac(1, 2));
    let msum = t2.neg(&t2.lift(&curve.c2)?);
    let plus = t2.mul(&t2.add(&msum, &w), &half);
    let minus = t2.mul(&t2.sub(&msum, &w), &half);
    Ok(match policy {
        Policy::PlusFirst => (t2, plus, minus),
        Policy::MinusFirst => (t2, minus, plus),
    })
}

/// Build the chain down to `max_level` in one shared tower, verifying at
/// every edge that the translated isogeny target equals the normal form the
/// recursion predicts.
pub fn descend<B: Field>(
    t: &TowerField<B>,
    alphas: &[TowerElem<B>; 3],
    max_level: u32,
    conv: Convention,
    policy: Policy,
) -> Result<Chain<B>> {
    if conv == Convention::Literal {
        return Err(Error::Unsupported(
            "the literal convention is not an isogeny; no chain exists".into(),
        ));
    }
    if max_level < 1 {
        return Err(Error::Config("chain needs at least level 1".into()));
    }
    let root_curve = Curve::from_roots(t, alphas.clone())?;
    let a1 = level_one_values(t, alphas);
    let roots = Vertex::roots();
    let mut level1 = Vec::new();
    for i in 0..3 {
        let a = a1[i].clone();
        let a_twin = a1[(i + 1) % 3].clone();
        let nf = normal_form_curve(t, 1, &a, &a_twin, conv)?;
        // The same curve must fall out of translating the root curve to put
        // α_i at the origin and applying the isogeny there.
        let translated = root_curve.translate(t, &alphas[i])?;
        let e = translated.roots.clone().unwrap();
        let phi = TwoIsogeny::new(t, e[(i + 1) % 3].clone(), e[(i + 2) % 3].clone(), conv, None)?;
        let target = phi.target_curve(t);
        if target != nf {
            return Err(Error::Internal(format!(
                "level-1 target mismatch in direction {}",
                i + 1
            )));
        }
        level1.push(ChainVertex {
            vertex: roots[i],
            a,
            a_twin,
            curve: nf,
        });
    }
    let mut tower = t.clone();
    let mut levels = vec![level1];
    for parent_level in 1..max_level {
        let cur = levels.last().unwrap().clone();
        let mut next: Vec<ChainVertex<B>> = Vec::new();
        let mut cur_l = cur;
        for i in 0..cur_l.len() {
            let parent = cur_l[i].clone();
            let (t2, r_first, r_second) =
                split_curve_torsion(&tower, &parent.vertex, &parent.curve, policy)?;
            if t2.id() != tower.id() {
                next = next
                    .iter()
                    .map(|c| lift_chain_vertex(&t2, c))
                    .collect::<Result<_>>()?;
                cur_l = cur_l
                    .iter()
                    .map(|c| lift_chain_vertex(&t2, c))
                    .collect::<Result<_>>()?;
                for lev in levels.iter_mut() {
                    *lev = lev
                        .iter()
                        .map(|c| lift_chain_vertex(&t2, c))
                        .collect::<Result<_>>()?;
                }
                tower = t2;
            }
            let parent = cur_l[i].clone();
            let [c0, c1] = parent.vertex.children()?;
            for (child_vertex, a, a_twin) in [
                (c0, r_first.clone(), r_second.clone()),
                (c1, r_second.clone(), r_first.clone()),
            ] {
                let nf = normal_form_curve(&tower, parent_level + 1, &a, &a_twin, conv)?;
                // Construction check: translate the parent curve so the
                // child's kernel point sits at the origin, and compare the
                // isogeny target with the normal form.
                let parent_with_roots = Curve {
                    roots: Some([tower.zero(), a.clone(), a_twin.clone()]),
                    ..parent.curve.clone()
                };
                let translated = parent_with_roots.translate(&tower, &a)?;
                let e = translated.roots.clone().unwrap();
                // Roots are [−a, 0, a′−a]; the kernel is at the origin.
                let phi = TwoIsogeny::new(&tower, e[0].clone(), e[2].clone(), conv, None)?;
                let target = phi.target_curve(&tower);
                if target != nf {
                    return Err(Error::Internal(format!(
                        "target mismatch under vertex {}",
                        child_vertex.path_string()
                    )));
                }
                next.push(ChainVertex {
                    vertex: child_vertex,
                    a,
                    a_twin,
                    curve: nf,
                });
            }
        }
        next.sort_by_key(|c| c.vertex.sort_key());
        levels.push(next);
    }
    Ok(Chain {
        conv,
        tower,
        levels,
    })
}

/// One certified edge of the labeled descent.
#[derive(Clone, Copy, Debug)]
pub struct EdgeCertificate {
    /// `None` for the three edges out of the root curve.
    pub parent: Option<Vertex>,
    pub child: Vertex,
    /// The kernel generator maps to ∞.
    pub kernel_killed: bool,
    /// No half of the kernel generator maps to ∞.
    pub halves_survive: bool,
    /// The four halves map onto exactly two points, two each.
    pub split_two_two: bool,
    /// Those two points are the child's remaining 2-torsion points.
    pub images_match_child_torsion: bool,
}

impl EdgeCertificate {
    pub fn holds(&self) -> bool {
        self.kernel_killed
            && self.halves_survive
            && self.split_two_two
            && self.images_match_child_torsion
    }
}

struct CertifyCtx {
    max_level: u32,
    conv: Convention,
    policy: Policy,
}

/// Certify every edge of the tree down to `max_level`: per-branch towers,
/// each edge checked by halving its kernel generator and pushing the halves
/// through the isogeny.
pub fn certify_edges<B: Field>(
    t: &TowerField<B>,
    alphas: &[TowerElem<B>; 3],
    max_level: u32,
    conv: Convention,
    policy: Policy,
) -> Result<Vec<EdgeCertificate>> {
    if conv == Convention::Literal {
        return Err(Error::Unsupported(
            "the literal convention is not an isogeny; nothing to certify".into(),
        ));
    }
    // The twisted maps move points through ζ₄; put it in the base once.
    let (tw, zeta) = match conv {
        Convention::TwistedMap => {
            let (tw, z) = t.with_zeta_pow2(2)?;
            (tw, Some(z))
        }
        _ => (t.clone(), None),
    };
    let alphas_l = [tw.lift(&alphas[0])?, tw.lift(&alphas[1])?, tw.lift(&alphas[2])?];
    let root_curve = Curve::from_roots(&tw, alphas_l.clone())?;
    let a1 = level_one_values(&tw, &alphas_l);
    let ctx = CertifyCtx {
        max_level,
        conv,
        policy,
    };
    let mut certs = Vec::new();
    for i in 0..3 {
        let child = Vertex::roots()[i];
        let a = a1[i].clone();
        let a_twin = a1[(i + 1) % 3].clone();
        certify_below(
            &ctx, &tw, &zeta, &root_curve, i, None, child, &a, &a_twin, &mut certs,
        )?;
    }
    Ok(certs)
}

/// Certify the edge into `child` (whose kernel is the `kernel_idx`-th root
/// of `parent_curve`), then recurse into the child's own edges.
#[allow(clippy::too_many_arguments)]
fn certify_below<B: Field>(
    ctx: &CertifyCtx,
    t: &TowerField<B>,
    zeta: &Option<TowerElem<B>>,
    parent_curve: &Curve<B>,
    kernel_idx: usize,
    parent: Option<Vertex>,
    child: Vertex,
    a_child: &TowerElem<B>,
    a_child_twin: &TowerElem<B>,
    certs: &mut Vec<EdgeCertificate>,
) -> Result<()> {
    let e = parent_curve.roots.clone().ok_or(Error::MissingRoots)?;
    let kernel_root = e[kernel_idx].clone();
    let gen = Point::affine(kernel_root.clone(), t.zero());

    // Halve the kernel generator; this may extend the tower.
    let (th, halves) = halve_all(t, parent_curve, &gen)?;
    let kr = th.lift(&kernel_root)?;
    let beta = th.sub(&th.lift(&e[(kernel_idx + 1) % 3])?, &kr);
    let gamma = th.sub(&th.lift(&e[(kernel_idx + 2) % 3])?, &kr);
    let zeta_h = zeta.as_ref().map(|z| th.lift(z)).transpose()?;
    let phi = TwoIsogeny::new(&th, beta, gamma, ctx.conv, zeta_h)?;
    let target = phi.target_curve(&th);
    let nf = normal_form_curve(&th, child.level(), &th.lift(a_child)?, &th.lift(a_child_twin)?, ctx.conv)?;
    if target != nf {
        return Err(Error::Internal(format!(
            "target mismatch under vertex {}",
            child.path_string()
        )));
    }

    let curve_h = parent_curve.lift_to(&th)?;
    let shift = |p: &Point<B>| curve_h.translate_point(&th, p, &kr);
    let kernel_killed = phi.apply(&th, &shift(&gen.lift_to(&th)?))?.is_infinity();

    let mut images: Vec<Point<B>> = Vec::new();
    let mut halves_survive = true;
    for q in &halves {
        let img = phi.apply(&th, &shift(q))?;
        if img.is_infinity() {
            halves_survive = false;
        }
        images.push(img);
    }
    let mut distinct: Vec<(Point<B>, usize)> = Vec::new();
    for img in &images {
        match distinct.iter_mut().find(|(p, _)| p == img) {
            Some((_, n)) => *n += 1,
            None => distinct.push((img.clone(), 1)),
        }
    }
    let split_two_two = distinct.len() == 2 && distinct.iter().all(|(_, n)| *n == 2);
    // The images must be the child's other 2-torsion: (r, 0) with r a root
    // of x² + C₂x + C₁.
    let images_match_child_torsion = images.iter().all(|img| match img.xy() {
        Some((x, y)) => {
            th.is_zero(y)
                && !th.is_zero(x)
                && th.is_zero(&th.add(
                    &th.add(&th.square(x), &th.mul(&target.c2, x)),
                    &target.c1,
                ))
        }
        None => false,
    });

    certs.push(EdgeCertificate {
        parent,
        child,
        kernel_killed,
        halves_survive,
        split_two_two,
        images_match_child_torsion,
    });

    if child.level() >= ctx.max_level {
        return Ok(());
    }
    // Recurse: split the child's torsion over the lean tower (dropping the
    // halving extensions) and certify its two edges.
    let nf_lean = normal_form_curve(t, child.level(), a_child, a_child_twin, ctx.conv)?;
    let (t2, r_first, r_second) = split_curve_torsion(t, &child, &nf_lean, ctx.policy)?;
    let child_curve = Curve {
        roots: Some([t2.zero(), t2.lift(&r_first)?, t2.lift(&r_second)?]),
        ..nf_lean.lift_to(&t2)?
    };
    let zeta2 = zeta.as_ref().map(|z| t2.lift(z)).transpose()?;
    let [c0, c1] = child.children()?;
    for (idx, (grandchild, a, a_twin)) in [
        (1usize, (c0, r_first.clone(), r_second.clone())),
        (2usize, (c1, r_second, r_first)),
    ] {
        certify_below(
            ctx,
            &t2,
            &zeta2,
            &child_curve,
            idx,
            Some(child),
            grandchild,
            &a,
            &a_twin,
            certs,
        )?;
    }
    Ok(())
}

/// Whether the chain's per-level values equal the decoration's, as
/// multisets, at the given level.
pub fn matches_decoration<B: Field>(
    chain: &Chain<B>,
    dec: &crate::decoration::Decoration<B>,
    level: u32,
) -> Result<bool> {
    let cv = chain.level_values(level);
    let dv: Vec<_> = dec
        .level_values(level)
        .iter()
        .map(|(_, a)| a.clone())
        .collect();
    chain.tower.multiset_matches(&cv, &dec.tower, &dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoration::{decorate, Decoration};
    use crate::fields::{FuncField, RatField};

    type T = TowerField<RatField>;

    fn q() -> T {
        T::over(RatField)
    }

    fn alphas_013(t: &T) -> [TowerElem<RatField>; 3] {
        [t.from_i64(0), t.from_i64(1), t.from_i64(3)]
    }

    #[test]
    fn level_one_curves_in_both_conventions() {
        let t = q();
        let tw = descend(
            &t,
            &alphas_013(&t),
            1,
            Convention::TwistedMap,
            Policy::PlusFirst,
        )
        .unwrap();
        // Direction 1: y² = x³ − 8x² + 4x as printed.
        let c = &tw.level_vertices(1)[0].curve;
        assert_eq!(c.c2, t.from_i64(-8));
        assert_eq!(c.c1, t.from_i64(4));
        let co = descend(
            &t,
            &alphas_013(&t),
            1,
            Convention::CorrectedTarget,
            Policy::PlusFirst,
        )
        .unwrap();
        assert_eq!(co.level_vertices(1)[0].curve.c2, t.from_i64(8));
        // The literal convention supports no chain.
        assert!(matches!(
            descend(&t, &alphas_013(&t), 1, Convention::Literal, Policy::PlusFirst),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn level_two_values_and_vieta() {
        let t = q();
        let ch = descend(
            &t,
            &alphas_013(&t),
            2,
            Convention::TwistedMap,
            Policy::PlusFirst,
        )
        .unwrap();
        let tw = &ch.tower;
        assert_eq!(tw.degree(), 8);
        // Sibling products recover the parents' squares (4, 9, 1).
        for pair in ch.level_vertices(2).chunks(2) {
            let (u, v) = (&pair[0], &pair[1]);
            assert_eq!(u.vertex.twin(), v.vertex);
            let parent_a = ch
                .level_vertices(1)
                .iter()
                .find(|c| Some(c.vertex) == u.vertex.parent())
                .unwrap()
                .a
                .clone();
            assert_eq!(tw.mul(&u.a, &v.a), tw.square(&parent_a));
        }
        // Frozen: the direction-1 children are 4 ± 2√3.
        let s3 = tw.sqrt(&tw.from_i64(3)).unwrap();
        let expect = tw.add(&tw.from_i64(4), &tw.mul(&tw.from_i64(2), &s3));
        let vals = ch.level_values(2);
        assert!(vals.contains(&expect));
    }

    #[test]
    fn chain_agrees_with_consistent_decoration() {
        let t = q();
        let ch = descend(
            &t,
            &alphas_013(&t),
            3,
            Convention::TwistedMap,
            Policy::PlusFirst,
        )
        .unwrap();
        let dec: Decoration<RatField> = decorate(
            &t,
            &alphas_013(&t),
            3,
            Variant::ConstructionConsistent,
            Policy::MinusFirst,
        )
        .unwrap();
        for level in [1u32, 2, 3] {
            assert!(matches_decoration(&ch, &dec, level).unwrap());
        }
    }

    #[test]
    fn corrected_chain_negates_even_levels() {
        let t = q();
        let tw = descend(
            &t,
            &alphas_013(&t),
            3,
            Convention::TwistedMap,
            Policy::PlusFirst,
        )
        .unwrap();
        let co = descend(
            &t,
            &alphas_013(&t),
            3,
            Convention::CorrectedTarget,
            Policy::PlusFirst,
        )
        .unwrap();
        assert!(tw.tower.same_field(&co.tower).unwrap());
        // Level 1 and 3 agree; level 2 is negated.
        for (level, negate) in [(1u32, false), (2, true), (3, false)] {
            let a = tw.level_values(level);
            let b: Vec<_> = co
                .level_values(level)
                .iter()
                .map(|x| if negate { co.tower.neg(x) } else { x.clone() })
                .collect();
            assert!(tw.tower.multiset_matches(&a, &co.tower, &b).unwrap());
        }
    }

    #[test]
    fn edges_certify_to_level_two() {
        let t = q();
        for conv in [Convention::TwistedMap, Convention::CorrectedTarget] {
            let certs = certify_edges(&t, &alphas_013(&t), 2, conv, Policy::PlusFirst).unwrap();
            assert_eq!(certs.len(), 9); // 3 root edges + 6 below
            for c in &certs {
                assert!(c.holds(), "edge into {} failed", c.child.path_string());
            }
        }
    }

    #[test]
    fn edges_certify_at_another_specialization() {
        let t = q();
        let alphas = [t.from_i64(1), t.from_i64(3), t.from_i64(8)];
        let certs =
            certify_edges(&t, &alphas, 2, Convention::TwistedMap, Policy::PlusFirst).unwrap();
        assert_eq!(certs.len(), 9);
        assert!(certs.iter().all(|c| c.holds()));
    }

    #[test]
    fn symbolic_descent_to_level_two() {
        // Fully generic roots: every construction check runs symbolically
        // over ℚ(α₁, α₂, α₃).
        let f = FuncField::new(RatField, &["a1", "a2", "a3"]);
        let tw = TowerField::over(f.clone());
        let alphas = [
            tw.scalar(f.var(0)),
            tw.scalar(f.var(1)),
            tw.scalar(f.var(2)),
        ];
        let ch = descend(&tw, &alphas, 2, Convention::TwistedMap, Policy::PlusFirst).unwrap();
        assert_eq!(ch.level_vertices(2).len(), 6);
        let t2 = &ch.tower;
        for pair in ch.level_vertices(2).chunks(2) {
            let parent_a = ch
                .level_vertices(1)
                .iter()
                .find(|c| Some(c.vertex) == pair[0].vertex.parent())
                .unwrap()
                .a
                .clone();
            assert_eq!(t2.mul(&pair[0].a, &pair[1].a), t2.square(&parent_a));
        }
    }
}
