//! Claim registry and dispatch. Each claim id names one machine-checked
//! statement; a run produces a [`Verdict`] whose pass/fail is decided by
//! exact arithmetic — containments by embedding every generator, degrees by
//! counting accepted adjunctions, demonstrations of failure by exhibiting the
//! defect.

use std::time::Instant;

use crate::curves::Convention;
use crate::decoration::{
    child_quadratic, decorate, decorate_path, level_one_values, Policy, Variant,
};
use crate::fields::{Field, FuncField, Rat, RatField, TowerElem, TowerField};
use crate::matrix_action::{
    full_level_stabilizer, gl2_elements, gl2_order_formula, odd_scalars, relative_kernel, Mat2,
};
use crate::towers::{
    verify_eighth_roots, verify_index_two, verify_k2_explicit, verify_k2_radicals,
    verify_kx_explicit, verify_value_in_division, verify_value_in_x, verify_value_products,
    verify_x_adjoin, Verdict,
};
use crate::tree::Vertex;
use crate::{chain, Error, Result};

/// Whether a run works over one explicit curve or over the generic curve
/// whose roots are independent transcendentals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Specialized,
    Generic,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "specialized" => Ok(Mode::Specialized),
            "generic" => Ok(Mode::Generic),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected 'specialized' or 'generic')"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Specialized => "specialized",
            Mode::Generic => "generic",
        }
    }
}

/// Everything a claim run depends on.
#[derive(Clone, Debug)]
pub struct Setup {
    pub mode: Mode,
    pub alphas: [i64; 3],
    pub max_level: u32,
    pub convention: Convention,
    pub variant: Variant,
    pub policy: Policy,
}

impl Setup {
    pub fn validate(&self) -> Result<()> {
        if self.max_level < 1 {
            return Err(Error::Config("level must be at least 1".into()));
        }
        let [a, b, c] = self.alphas;
        if a == b || a == c || b == c {
            return Err(Error::Config("Weierstrass roots must be distinct".into()));
        }
        Ok(())
    }

    fn mode_string(&self) -> String {
        match self.mode {
            Mode::Specialized => format!(
                "specialized ({},{},{})",
                self.alphas[0], self.alphas[1], self.alphas[2]
            ),
            Mode::Generic => "generic".into(),
        }
    }

    fn is_base_example(&self) -> bool {
        self.mode == Mode::Specialized && self.alphas == [0, 1, 3]
    }
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            mode: Mode::Specialized,
            alphas: [0, 1, 3],
            max_level: 2,
            convention: Convention::TwistedMap,
            variant: Variant::ConstructionConsistent,
            policy: Policy::PlusFirst,
        }
    }
}

/// Registry entry: a claim id, its statement, the minimum level at which it
/// is meaningful, and whether it is a long-running opt-in computation.
pub struct ClaimInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub min_level: u32,
    pub long: bool,
}

pub const REGISTRY: &[ClaimInfo] = &[
    ClaimInfo {
        id: "tree-invariants",
        summary: "Level counts are 3·2^(n−1), parents and twins behave, and level labels \
                  biject with the cyclic subgroup lattice.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "scalar-stabilizer",
        summary: "A matrix fixing every vertex of every level up to n is an odd scalar.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "relative-kernel",
        summary: "Determinant-one matrices trivial one level down form a group of order 8.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "isogeny-symbolic",
        summary: "The 2-isogeny formulas are certified symbolically, the dual doubles, and \
                  the sign-defective target is demonstrated to fail on a witness point.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "decoration-soundness",
        summary: "Every decoration value is a root of its defining quadratic, discriminants \
                  certify the splits, and the discriminant recursion is a symbolic identity.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "chain-decoration",
        summary: "The isogeny chain reproduces the decoration's values level by level; the \
                  alternative level-2 recursion shape does not.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "policy-independence",
        summary: "Root-ordering policies change nothing: value multisets agree and the \
                  towers are the same field.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "kernel-labeled",
        summary: "Every chain edge kills exactly its labeled kernel and sends the kernel's \
                  halves onto the child's surviving 2-torsion.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "central-products",
        summary: "Over a base containing i, the level-2 value field is the level-1 field \
                  plus square roots of the three pairwise value products, of degree 4.",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "k2-radicals",
        summary: "Square roots of the level-1 values generate the 4-division field over a \
                  base containing i; square roots of the curve's roots do not.",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "x-adjoin",
        summary: "The 4-division field is the x-coordinate field plus the square root of \
                  any one level-1 value.",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "central-in-x",
        summary: "The level-2 value field extended by i lies inside the x-coordinate field.",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "central-in-full",
        summary: "Each level's value field lies inside the matching division field, with \
                  equality at level 1.",
        min_level: 1,
        long: false,
    },
    ClaimInfo {
        id: "index-two",
        summary: "The value field plus one value root and a matching root of unity sits \
                  inside the division field with the expected small index.",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "eighth-roots",
        summary: "The 8-division field contains the eighth roots of unity.",
        min_level: 3,
        long: false,
    },
    ClaimInfo {
        id: "k2-explicit",
        summary: "At roots (0,1,3) the 4-division field is exactly Q(i, sqrt2, sqrt3).",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "kx-explicit",
        summary: "At roots (0,1,3) the x-coordinate field is exactly Q(sqrt3, sqrt-2, sqrt6).",
        min_level: 2,
        long: false,
    },
    ClaimInfo {
        id: "index-two-generic",
        summary: "Over the generic curve with eighth roots of unity in the scalars, the \
                  8-division field has index exactly 2 over the extended value field.",
        min_level: 1,
        long: true,
    },
    ClaimInfo {
        id: "kernel-labeled-deep",
        summary: "Labeled kernel certificates extended down to chain level 4.",
        min_level: 1,
        long: true,
    },
];

pub fn find(id: &str) -> Option<&'static ClaimInfo> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Ids selected by default: every non-long claim.
pub fn default_ids() -> Vec<&'static str> {
    REGISTRY.iter().filter(|c| !c.long).map(|c| c.id).collect()
}

/// Ids selected with the long suite opted in.
pub fn all_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

/// Run one claim under the given setup.
pub fn run(id: &str, s: &Setup) -> Result<Verdict> {
    s.validate()?;
    let info = find(id).ok_or_else(|| Error::Config(format!("unknown claim id '{id}'")))?;
    if s.max_level < info.min_level {
        return Ok(Verdict::skipped(
            id,
            info.summary,
            &s.mode_string(),
            s.max_level,
            &format!("needs level >= {}", info.min_level),
        ));
    }
    let start = Instant::now();
    let mut v = dispatch(id, info, s)?;
    v.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(v)
}

fn dispatch(id: &str, info: &ClaimInfo, s: &Setup) -> Result<Verdict> {
    match id {
        "tree-invariants" => run_tree_invariants(info),
        "scalar-stabilizer" => run_scalar_stabilizer(info),
        "relative-kernel" => run_relative_kernel(info),
        "isogeny-symbolic" => run_isogeny_symbolic(info),
        "index-two-generic" => run_index_two_generic(info),
        _ => match s.mode {
            Mode::Specialized => {
                let t = TowerField::over(RatField);
                let al = [
                    t.from_i64(s.alphas[0]),
                    t.from_i64(s.alphas[1]),
                    t.from_i64(s.alphas[2]),
                ];
                dispatch_on(id, info, s, &t, &al)
            }
            Mode::Generic => {
                // Scalars carry a 2^(level+1)-th root of unity so every claim
                // that needs one finds it ready.
                let (t, al) = generic_stack(s.max_level.min(3) + 1)?;
                dispatch_on(id, info, s, &t, &al)
            }
        },
    }
}

/// The generic curve: coefficients in Q(zeta_{2^m}), roots three independent
/// transcendentals r1, r2, r3.
pub fn generic_stack(
    zeta_level: u32,
) -> Result<(
    TowerField<FuncField<TowerField<RatField>>>,
    [TowerElem<FuncField<TowerField<RatField>>>; 3],
)> {
    let coeff = TowerField::over(RatField);
    let (coeff, _) = coeff.with_zeta_pow2(zeta_level)?;
    let f = FuncField::new(coeff, &["r1", "r2", "r3"]);
    let t = TowerField::over(f.clone());
    let al = [t.scalar(f.var(0)), t.scalar(f.var(1)), t.scalar(f.var(2))];
    Ok((t, al))
}

/// Claims that must halve points (division fields, edge certificates) are
/// hours-scale over the generic function field; in the standard suite they
/// run specialized only, and the opt-in long claim carries the generic case.
const NEEDS_HALVING: &[&str] = &[
    "kernel-labeled",
    "kernel-labeled-deep",
    "x-adjoin",
    "k2-radicals",
    "index-two",
    "eighth-roots",
];

fn dispatch_on<B: Field>(
    id: &str,
    info: &ClaimInfo,
    s: &Setup,
    t: &TowerField<B>,
    al: &[TowerElem<B>; 3],
) -> Result<Verdict> {
    let mode = s.mode_string();
    if s.mode == Mode::Generic && NEEDS_HALVING.contains(&id) {
        return Ok(Verdict::skipped(
            id,
            info.summary,
            &mode,
            s.max_level,
            "halving generic points runs for hours; the opt-in claim 'index-two-generic' \
             carries the generic division-field computation",
        ));
    }
    match id {
        "decoration-soundness" => run_decoration_soundness(t, al, s, &mode),
        "chain-decoration" => run_chain_decoration(t, al, s, &mode),
        "policy-independence" => run_policy_independence(t, al, s, &mode),
        "kernel-labeled" => run_kernel_labeled(t, al, s, &mode, s.max_level.min(3)),
        "kernel-labeled-deep" => {
            let mut v = run_kernel_labeled(t, al, s, &mode, 4)?;
            v.id = "kernel-labeled-deep".into();
            v.statement = info.summary.into();
            Ok(v)
        }
        "central-products" => {
            verify_value_products(t, al, &mode, s.mode == Mode::Generic)
        }
        "k2-radicals" => verify_k2_radicals(t, al, &mode, s.is_base_example()),
        "x-adjoin" => verify_x_adjoin(t, al, &mode),
        "central-in-x" => verify_value_in_x(t, al, &mode),
        "central-in-full" => {
            // Generic division fields past level 1 require halving; the
            // level-1 equality (linear root recovery) is still symbolic.
            let n_max = match s.mode {
                Mode::Specialized => s.max_level.min(3),
                Mode::Generic => 1,
            };
            let mut v = verify_value_in_division(t, al, n_max, s.variant, s.policy, &mode)?;
            if s.mode == Mode::Generic && s.max_level > 1 {
                v.note(
                    "  generic run stops at level 1; deeper containments run specialized \
                     or in the long suite"
                        .into(),
                );
            }
            Ok(v)
        }
        "index-two" => {
            let n = s.max_level.min(3);
            let strict = match s.mode {
                Mode::Generic => Some(if n == 2 { 1 } else { 2 }),
                Mode::Specialized => None,
            };
            verify_index_two(t, al, n, s.variant, s.policy, &mode, strict)
        }
        "eighth-roots" => verify_eighth_roots(t, al, &mode),
        "k2-explicit" => {
            if s.is_base_example() {
                verify_k2_explicit(t, al, &mode)
            } else {
                Ok(Verdict::skipped(
                    id,
                    info.summary,
                    &mode,
                    2,
                    "only stated at roots (0,1,3)",
                ))
            }
        }
        "kx-explicit" => {
            if s.is_base_example() {
                verify_kx_explicit(t, al, &mode)
            } else {
                Ok(Verdict::skipped(
                    id,
                    info.summary,
                    &mode,
                    2,
                    "only stated at roots (0,1,3)",
                ))
            }
        }
        other => Err(Error::Config(format!("unknown claim id '{other}'"))),
    }
}

// ----- structural claims (independent of the curve) -----

fn run_tree_invariants(info: &ClaimInfo) -> Result<Verdict> {
    let mut v = Verdict::new("tree-invariants", info.summary, "structural", 8);
    for n in 1..=8u32 {
        let vs = Vertex::level_vertices(n)?;
        v.require(
            vs.len() as u64 == 3 << (n - 1),
            format!("level {n} has 3·2^{} = {} vertices", n - 1, vs.len()),
        );
    }
    for n in 1..=6u32 {
        let vs = Vertex::level_vertices(n)?;
        let mut parent_ok = true;
        let mut twin_ok = true;
        for u in &vs {
            match u.parent() {
                None => {
                    if n > 1 {
                        parent_ok = false;
                    }
                }
                Some(p) => {
                    parent_ok &= p.level() + 1 == n && p.children()?.contains(u);
                }
            }
            let w = u.twin();
            if n == 1 {
                // The three roots close a 3-cycle under twinning.
                twin_ok &= w != *u && w.twin().twin() == *u;
            } else {
                twin_ok &= w != *u && w.twin() == *u && w.parent() == u.parent();
            }
        }
        v.require(parent_ok, format!("level {n}: parents are unique and consistent"));
        v.require(
            twin_ok,
            format!(
                "level {n}: twins are {}",
                if n == 1 {
                    "a 3-cycle of the roots"
                } else {
                    "a fixed-point-free sibling involution"
                }
            ),
        );
    }
    for n in 1..=4u32 {
        let modulus = 1u64 << n;
        let mut brute: Vec<Vec<(u64, u64)>> = Vec::new();
        for a in 0..modulus {
            for b in 0..modulus {
                if a % 2 == 0 && b % 2 == 0 {
                    continue; // not of exact order 2^n
                }
                let mut sub: Vec<(u64, u64)> = (0..modulus)
                    .map(|k| ((k * a) % modulus, (k * b) % modulus))
                    .collect();
                sub.sort_unstable();
                if !brute.contains(&sub) {
                    brute.push(sub);
                }
            }
        }
        let mut labeled: Vec<Vec<(u64, u64)>> = Vec::new();
        for u in Vertex::level_vertices(n)? {
            let mut sub = u.subgroup();
            sub.sort_unstable();
            v.require(
                !labeled.contains(&sub),
                format!("level {n}: vertex {} has a fresh subgroup", u.path_string()),
            );
            labeled.push(sub);
        }
        labeled.sort_unstable();
        brute.sort_unstable();
        v.require(
            labeled == brute,
            format!(
                "level {n}: the {} labels biject with the {} cyclic subgroups of order 2^{n}",
                labeled.len(),
                brute.len()
            ),
        );
    }
    Ok(v)
}

fn sorted(mut ms: Vec<Mat2>) -> Vec<Mat2> {
    ms.sort_unstable();
    ms
}

fn run_scalar_stabilizer(info: &ClaimInfo) -> Result<Verdict> {
    let mut v = Verdict::new("scalar-stabilizer", info.summary, "structural", 3);
    for n in 1..=3u32 {
        let candidates = gl2_elements(n);
        v.require(
            candidates.len() as u64 == gl2_order_formula(n),
            format!(
                "level {n}: searched all {} invertible matrices",
                candidates.len()
            ),
        );
        let stab = sorted(full_level_stabilizer(n)?);
        let scalars = sorted(odd_scalars(n));
        let fixed: u64 = (1..=n).map(|m| 3 << (m - 1)).sum();
        v.require(
            stab == scalars,
            format!(
                "level {n}: exactly the {} odd scalars fix all {} nonroot vertices",
                scalars.len(),
                fixed
            ),
        );
    }
    Ok(v)
}

fn run_relative_kernel(info: &ClaimInfo) -> Result<Verdict> {
    let mut v = Verdict::new("relative-kernel", info.summary, "structural", 2);
    for n in 1..=2u32 {
        let ker = relative_kernel(n);
        let modulus = 1u64 << (n + 1);
        v.require(
            ker.len() == 8,
            format!("level {n}: {} matrices in the relative kernel", ker.len()),
        );
        let mut elementary = true;
        for m in &ker {
            elementary &= m.det_mod(modulus) == 1;
            elementary &= m.mul_mod(m, modulus) == Mat2::identity().reduce(modulus);
            let id_down = m.reduce(1 << n) == Mat2::identity().reduce(1 << n);
            elementary &= id_down;
        }
        v.require(
            elementary,
            format!("level {n}: determinant 1, square = identity, trivial mod 2^{n}"),
        );
    }
    Ok(v)
}

// ----- symbolic isogeny certification -----

fn run_isogeny_symbolic(info: &ClaimInfo) -> Result<Verdict> {
    let mut v = Verdict::new("isogeny-symbolic", info.summary, "symbolic", 1);

    // Generic point (x, y) on y² = x(x−β)(x−γ) over Q(β, γ, x); the classical
    // map's image, with y eliminated through y².
    let f = FuncField::new(RatField, &["b", "g", "x"]);
    let t: TowerField<FuncField<RatField>> = TowerField::over(f.clone());
    let (b, g, x) = (t.scalar(f.var(0)), t.scalar(f.var(1)), t.scalar(f.var(2)));
    let prod = t.mul(&b, &g);
    let sum = t.add(&b, &g);
    let xinv = t.inv(&x)?;
    let xx = t.add(&t.sub(&x, &sum), &t.mul(&prod, &xinv));
    let yy_over_y = t.sub(&t.one(), &t.mul(&prod, &t.mul(&xinv, &xinv)));
    let ysq = t.mul(&t.mul(&x, &t.sub(&x, &b)), &t.sub(&x, &g));
    let ysq_img = t.mul(&ysq, &t.square(&yy_over_y));
    let dsq = t.square(&t.sub(&b, &g));
    let two_sum = t.mul(&t.from_i64(2), &sum);
    let cubic = |c2: &TowerElem<FuncField<RatField>>, at: &TowerElem<FuncField<RatField>>| {
        t.mul(
            &t.add(&t.add(&t.square(at), &t.mul(c2, at)), &dsq),
            at,
        )
    };
    v.require(
        ysq_img == cubic(&two_sum, &xx),
        "forward map lands identically on Y² = X³ + 2(β+γ)X² + (β−γ)²X".into(),
    );
    let defect = t.sub(&ysq_img, &cubic(&t.neg(&two_sum), &xx));
    v.require(
        !t.is_zero(&defect),
        "the −2(β+γ) variant leaves a nonzero defect polynomial".into(),
    );

    // Dual composed with the map doubles, coordinate by coordinate.
    let quarter = t.from_rat(&Rat::from_frac(1, 4));
    let eighth = t.from_rat(&Rat::from_frac(1, 8));
    let xxinv = t.inv(&xx)?;
    let dual_x = t.mul(
        &quarter,
        &t.add(&t.add(&xx, &two_sum), &t.mul(&dsq, &xxinv)),
    );
    let dual_y_over_y = t.mul(
        &eighth,
        &t.mul(
            &yy_over_y,
            &t.sub(&t.one(), &t.mul(&dsq, &t.square(&xxinv))),
        ),
    );
    let a_coef = t.neg(&sum);
    let fprime = t.add(
        &t.add(
            &t.mul(&t.from_i64(3), &t.square(&x)),
            &t.mul(&t.mul(&t.from_i64(2), &a_coef), &x),
        ),
        &prod,
    );
    let lam_sq = t.div(&t.square(&fprime), &t.mul(&t.from_i64(4), &ysq))?;
    let x2 = t.sub(&t.sub(&lam_sq, &a_coef), &t.mul(&t.from_i64(2), &x));
    let y2_over_y = t.sub(
        &t.div(&t.mul(&fprime, &t.sub(&x, &x2)), &t.mul(&t.from_i64(2), &ysq))?,
        &t.one(),
    );
    v.require(dual_x == x2, "dual ∘ map doubles the x-coordinate".into());
    v.require(
        dual_y_over_y == y2_over_y,
        "dual ∘ map doubles the y-coordinate".into(),
    );

    // Twisted repair: over scalars containing i, (X, Y) ↦ (−X, iY) moves the
    // image onto the −2(β+γ) target identically.
    let (qi, z) = TowerField::over(RatField).with_zeta_pow2(2)?;
    let fi = FuncField::new(qi, &["b", "g", "x"]);
    let ti: TowerField<FuncField<TowerField<RatField>>> = TowerField::over(fi.clone());
    let (bi, gi, xi) = (
        ti.scalar(fi.var(0)),
        ti.scalar(fi.var(1)),
        ti.scalar(fi.var(2)),
    );
    let zi = ti.scalar(fi.from_coeff(z));
    let prod_i = ti.mul(&bi, &gi);
    let sum_i = ti.add(&bi, &gi);
    let xinv_i = ti.inv(&xi)?;
    let xx_i = ti.add(&ti.sub(&xi, &sum_i), &ti.mul(&prod_i, &xinv_i));
    let yy_over_y_i = ti.sub(&ti.one(), &ti.mul(&prod_i, &ti.square(&xinv_i)));
    let ysq_i = ti.mul(&ti.mul(&xi, &ti.sub(&xi, &bi)), &ti.sub(&xi, &gi));
    let x_tw = ti.neg(&xx_i);
    let y_tw_sq = ti.mul(
        &ti.square(&ti.mul(&zi, &yy_over_y_i)),
        &ysq_i,
    );
    let dsq_i = ti.square(&ti.sub(&bi, &gi));
    let c2_tw = ti.neg(&ti.mul(&ti.from_i64(2), &sum_i));
    let rhs_tw = ti.mul(
        &ti.add(&ti.add(&ti.square(&x_tw), &ti.mul(&c2_tw, &x_tw)), &dsq_i),
        &x_tw,
    );
    v.require(
        y_tw_sq == rhs_tw,
        "twist (X, Y) ↦ (−X, iY) lands identically on the −2(β+γ) target".into(),
    );

    // Witness demonstration at β = 1, γ = 3, P = (4, 2√3): the corrected
    // image satisfies its curve, the uncorrected target misses it.
    let t0: TowerField<RatField> = TowerField::over(RatField);
    let (tw, s3) = t0.adjoin_sqrt(&t0.from_i64(3), Some("s3"))?;
    let phi = crate::curves::TwoIsogeny::new(
        &tw,
        tw.from_i64(1),
        tw.from_i64(3),
        Convention::CorrectedTarget,
        None,
    )?;
    let p = crate::curves::Point::affine(tw.from_i64(4), tw.mul(&tw.from_i64(2), &s3));
    let img = phi.apply(&tw, &p)?;
    let (ix, iy) = img.xy().ok_or_else(|| Error::Internal("image at infinity".into()))?;
    v.require(
        *ix == tw.from_rat(&Rat::from_frac(3, 4))
            && tw.square(iy) == tw.from_rat(&Rat::from_frac(507, 64)),
        "corrected image of (4, 2√3) is (3/4, ±13√3/8) with Y² = 507/64".into(),
    );
    let lit = crate::curves::TwoIsogeny::new(
        &tw,
        tw.from_i64(1),
        tw.from_i64(3),
        Convention::Literal,
        None,
    )?;
    match lit.apply(&tw, &p) {
        Err(Error::NotOnCurve(msg)) => {
            v.require(
                true,
                format!("uncorrected target rejects the image as expected: {msg}"),
            );
            // The defect in numbers: the target cubic at X = 3/4 is −69/64.
            let target = lit.target_curve(&tw);
            let at = target.rhs(&tw, ix);
            v.require(
                at == tw.from_rat(&Rat::from_frac(-69, 64)),
                "uncorrected cubic evaluates to −69/64 ≠ 507/64 at X = 3/4".into(),
            );
        }
        other => v.require(
            false,
            format!("uncorrected target unexpectedly accepted the image: {other:?}"),
        ),
    }
    let two_torsion_img = lit.apply(&tw, &crate::curves::Point::affine(tw.from_i64(1), tw.zero()))?;
    v.require(
        two_torsion_img == crate::curves::Point::affine(tw.zero(), tw.zero()),
        "2-torsion still maps correctly even without the sign fix".into(),
    );
    Ok(v)
}

// ----- decoration and chain claims (generic over the base) -----

fn run_decoration_soundness<B: Field>(
    t: &TowerField<B>,
    al: &[TowerElem<B>; 3],
    s: &Setup,
    mode: &str,
) -> Result<Verdict> {
    let info = find("decoration-soundness").unwrap();
    let mut v = Verdict::new("decoration-soundness", info.summary, mode, s.max_level);
    let ambient_cap = match s.mode {
        Mode::Specialized => 3,
        Mode::Generic => 2,
    };
    let m_ambient = s.max_level.min(ambient_cap);

    // Shared-tower decoration: check every twin pair at every level.
    let dec = decorate(t, al, m_ambient, s.variant, s.policy)?;
    let dt = &dec.tower;
    let a1 = level_one_values(dt, &[dt.lift(&al[0])?, dt.lift(&al[1])?, dt.lift(&al[2])?]);
    for (u, value) in dec.level_values(1) {
        v.require(
            *value == a1[u.alpha_index() - 1],
            format!(
                "level 1 vertex {} carries the root difference it names",
                u.path_string()
            ),
        );
    }
    let mut pairs_checked = 0usize;
    for level in 2..=m_ambient {
        for (u, value) in dec.level_values(level) {
            let parent = u.parent().ok_or_else(|| {
                Error::Internal("non-root vertex without parent".into())
            })?;
            let siblings = parent.children()?;
            if siblings[0] != *u {
                continue; // handle each sibling pair once
            }
            let co_value = dec
                .value_of(&siblings[1])
                .ok_or_else(|| Error::Internal("missing sibling value".into()))?;
            let pa = dec
                .value_of(&parent)
                .ok_or_else(|| Error::Internal("missing parent value".into()))?;
            let ptwin = dec
                .value_of(&parent.twin())
                .ok_or_else(|| Error::Internal("missing parent twin value".into()))?;
            let (sum, prod) = child_quadratic(dt, parent.level(), pa, ptwin, s.variant);
            let ok_sum = dt.add(value, co_value) == sum;
            let ok_prod = dt.mul(value, co_value) == prod;
            let disc = dt.sub(&dt.square(&sum), &dt.mul(&dt.from_i64(4), &prod));
            let ok_disc = dt.square(&dt.sub(value, co_value)) == disc;
            if !(ok_sum && ok_prod && ok_disc) {
                v.require(
                    false,
                    format!(
                        "children of {} are the roots of their quadratic",
                        parent.path_string()
                    ),
                );
            }
            pairs_checked += 1;
        }
        v.degree(
            &format!("decoration degree after level {level}"),
            {
                let part = decorate(t, al, level, s.variant, s.policy)?;
                1u64 << (part.tower.height() - t.height())
            },
        );
    }
    v.require(
        true,
        format!("{pairs_checked} sibling pairs verified against their quadratics (shared tower, levels <= {m_ambient})"),
    );

    // Deeper levels: per-path towers, one path per vertex at the deepest level.
    if s.max_level > m_ambient {
        let mut paths = 0usize;
        for target in Vertex::level_vertices(s.max_level)? {
            let pd = decorate_path(t, al, &target, s.variant, s.policy)?;
            let pt = &pd.tower;
            let mut prev: Option<(TowerElem<B>, TowerElem<B>)> = None;
            for (idx, step) in pd.steps.iter().enumerate() {
                let value = pt.lift(&step.value)?;
                let twin = pt.lift(&step.twin_value)?;
                if let Some((pa, ptw)) = &prev {
                    let (sum, prod) =
                        child_quadratic(pt, idx as u32, pa, ptw, s.variant);
                    let ok = pt.add(&value, &twin) == sum
                        && pt.mul(&value, &twin) == prod;
                    if !ok {
                        v.require(
                            false,
                            format!(
                                "path {}: step {} solves its quadratic",
                                target.path_string(),
                                idx + 1
                            ),
                        );
                    }
                }
                prev = Some((value, twin));
            }
            paths += 1;
        }
        v.require(
            true,
            format!(
                "{paths} root-to-vertex paths decorated to level {} in per-path towers",
                s.max_level
            ),
        );
    }

    // The discriminant recursion as a polynomial identity: for a parent at
    // level >= 2 with value a and twin value a', the child quadratic's
    // discriminant is 16·a·(a − a').
    let fsym = FuncField::new(RatField, &["a", "at"]);
    let ts: TowerField<FuncField<RatField>> = TowerField::over(fsym.clone());
    let (sa, sat) = (ts.scalar(fsym.var(0)), ts.scalar(fsym.var(1)));
    let (ssum, sprod) = child_quadratic(&ts, 2, &sa, &sat, s.variant);
    let sdisc = ts.sub(&ts.square(&ssum), &ts.mul(&ts.from_i64(4), &sprod));
    let claimed = ts.mul(
        &ts.mul(&ts.from_i64(16), &sa),
        &ts.sub(&sa, &sat),
    );
    v.require(
        sdisc == claimed,
        "below level 2 the split discriminant is identically 16·a·(a − a')".into(),
    );
    if s.variant == Variant::ConstructionConsistent {
        let (s1, p1) = child_quadratic(&ts, 1, &sa, &sat, s.variant);
        let d1 = ts.sub(&ts.square(&s1), &ts.mul(&ts.from_i64(4), &p1));
        let claimed1 = ts.mul(
            &ts.mul(&ts.from_i64(16), &sat),
            &ts.add(&sat, &sa),
        );
        v.require(
            d1 == claimed1,
            "at level 1 the split discriminant is identically 16·a'·(a' + a)".into(),
        );
    }
    Ok(v)
}

fn run_chain_decoration<B: Field>(
    t: &TowerField<B>,
    al: &[TowerElem<B>; 3],
    s: &Setup,
    mode: &str,
) -> Result<Verdict> {
    let info = find("chain-decoration").unwrap();
    let m_max = s.max_level.min(3);
    let mut v = Verdict::new("chain-decoration", info.summary, mode, m_max);
    let conv = if s.convention == Convention::Literal {
        v.note(
            "the literal convention admits no chain; certifying with the twisted map".into(),
        );
        Convention::TwistedMap
    } else {
        s.convention
    };
    let ch = chain::descend(t, al, m_max, conv, s.policy)?;
    let dec_cc = decorate(t, al, m_max, Variant::ConstructionConsistent, s.policy)?;
    // The corrected-target convention carries its values negated on even
    // levels; undo that before comparing.
    let negate_even = conv == Convention::CorrectedTarget;
    for level in 1..=m_max {
        let matches = if negate_even && level % 2 == 0 {
            let cv: Vec<_> = ch
                .level_values(level)
                .iter()
                .map(|x| ch.tower.neg(x))
                .collect();
            let dv: Vec<_> = dec_cc
                .level_values(level)
                .iter()
                .map(|(_, a)| a.clone())
                .collect();
            ch.tower.multiset_matches(&cv, &dec_cc.tower, &dv)?
        } else {
            chain::matches_decoration(&ch, &dec_cc, level)?
        };
        let negated_note = if negate_even && level % 2 == 0 {
            " (corrected convention: even level compared after negation)"
        } else {
            ""
        };
        v.require(
            matches,
            format!("level {level}: chain values equal the decoration's (as multisets){negated_note}"),
        );
    }
    if m_max >= 2 {
        // The two recursion shapes write different constant terms for the
        // level-2 quadratic: the chain realizes a², the alternative shape
        // a'². (Fully decorating with the alternative shape can degenerate
        // to a double root, so the comparison stays on the realized values.)
        let ct = &ch.tower;
        let mut off_shape = 0usize;
        for cv in ch.level_vertices(1).to_vec() {
            let a = ct.lift(&cv.a)?;
            let a_twin = ct.lift(&cv.a_twin)?;
            let kids = cv.vertex.children()?;
            let mut realized = ct.one();
            for kid in kids {
                let child = ch
                    .level_vertices(2)
                    .iter()
                    .find(|cw| cw.vertex == kid)
                    .ok_or_else(|| Error::Internal("chain child missing".into()))?;
                realized = ct.mul(&realized, &ct.lift(&child.a)?);
            }
            let a_sq = ct.square(&a);
            let alt_sq = ct.square(&a_twin);
            v.require(
                realized == a_sq,
                format!(
                    "vertex {}: its children's values multiply to the square of its own \
                     value ({})",
                    cv.vertex.path_string(),
                    ct.fmt_elem(&a_sq)
                ),
            );
            if realized != alt_sq {
                off_shape += 1;
                v.note(format!(
                    "  vertex {}: realized constant {} vs alternative shape {}",
                    cv.vertex.path_string(),
                    ct.fmt_elem(&realized),
                    ct.fmt_elem(&alt_sq)
                ));
            }
        }
        let gate = s.mode == Mode::Generic || s.is_base_example();
        if gate {
            v.require(
                off_shape > 0,
                "level 2: the alternative recursion shape does NOT reproduce the chain's \
                 constant terms"
                    .into(),
            );
        } else {
            v.note(format!(
                "  alternative shape differs from the chain at {off_shape} of 3 level-1 \
                 vertices at this specialization"
            ));
        }
    }
    Ok(v)
}

fn run_policy_independence<B: Field>(
    t: &TowerField<B>,
    al: &[TowerElem<B>; 3],
    s: &Setup,
    mode: &str,
) -> Result<Verdict> {
    let info = find("policy-independence").unwrap();
    let cap = match s.mode {
        Mode::Specialized => 3,
        Mode::Generic => 2,
    };
    let m_max = s.max_level.min(cap);
    let mut v = Verdict::new("policy-independence", info.summary, mode, m_max);
    let dp = decorate(t, al, m_max, s.variant, Policy::PlusFirst)?;
    let dm = decorate(t, al, m_max, s.variant, Policy::MinusFirst)?;
    v.degree("plus-first tower", 1u64 << (dp.tower.height() - t.height()));
    v.degree("minus-first tower", 1u64 << (dm.tower.height() - t.height()));
    for level in 1..=m_max {
        let vp: Vec<_> = dp.level_values(level).iter().map(|(_, a)| a.clone()).collect();
        let vm: Vec<_> = dm.level_values(level).iter().map(|(_, a)| a.clone()).collect();
        let same = dp.tower.multiset_matches(&vp, &dm.tower, &vm)?;
        v.require(
            same,
            format!("level {level}: value multisets agree across policies"),
        );
    }
    let same_field = dp.tower.same_field(&dm.tower)?;
    v.require(same_field, "both policies generate the same field".into());
    Ok(v)
}

fn run_kernel_labeled<B: Field>(
    t: &TowerField<B>,
    al: &[TowerElem<B>; 3],
    s: &Setup,
    mode: &str,
    m_max: u32,
) -> Result<Verdict> {
    let info = find("kernel-labeled").unwrap();
    let mut v = Verdict::new("kernel-labeled", info.summary, mode, m_max);
    let conv = if s.convention == Convention::Literal {
        v.note(
            "the literal convention admits no chain; certifying with the corrected target"
                .into(),
        );
        Convention::CorrectedTarget
    } else {
        s.convention
    };
    let certs = chain::certify_edges(t, al, m_max, conv, s.policy)?;
    let mut per_level = vec![0usize; m_max as usize + 1];
    let mut all_hold = true;
    for c in &certs {
        all_hold &= c.holds();
        per_level[c.child.level() as usize] += 1;
        if !c.holds() {
            v.require(
                false,
                format!(
                    "edge into {}: kernel_killed={} halves_survive={} split_two_two={} \
                     images_match={}",
                    c.child.path_string(),
                    c.kernel_killed,
                    c.halves_survive,
                    c.split_two_two,
                    c.images_match_child_torsion
                ),
            );
        }
    }
    v.require(
        all_hold,
        format!(
            "all {} edges certified: kernel generator dies, its halves survive onto the \
             child's remaining 2-torsion, two-to-two",
            certs.len()
        ),
    );
    for level in 1..=m_max {
        v.note(format!(
            "  level {level}: {} edges certified",
            per_level[level as usize]
        ));
    }
    Ok(v)
}

// ----- the long generic computation -----

fn run_index_two_generic(info: &ClaimInfo) -> Result<Verdict> {
    let (t, al) = generic_stack(3)?;
    let mut v = verify_index_two(
        &t,
        &al,
        3,
        Variant::ConstructionConsistent,
        Policy::PlusFirst,
        "generic over Q(zeta8)(r1,r2,r3)",
        Some(2),
    )?;
    v.id = "index-two-generic".into();
    v.statement = info.summary.into();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_resolvable() {
        let mut seen = std::collections::HashSet::new();
        for c in REGISTRY {
            assert!(seen.insert(c.id), "duplicate id {}", c.id);
        }
        assert!(find("tree-invariants").is_some());
        assert!(find("nonexistent").is_none());
        assert_eq!(default_ids().len() + 2, all_ids().len());
    }

    #[test]
    fn structural_claims_pass() {
        for id in ["tree-invariants", "scalar-stabilizer", "relative-kernel"] {
            let v = run(id, &Setup::default()).unwrap();
            assert!(v.passed(), "{id}: {:#?}", v.witnesses);
        }
    }

    #[test]
    fn symbolic_isogeny_claim_passes() {
        let v = run("isogeny-symbolic", &Setup::default()).unwrap();
        assert!(v.passed(), "{:#?}", v.witnesses);
    }

    #[test]
    fn default_suite_passes_at_level_two() {
        let s = Setup::default();
        for id in default_ids() {
            let v = run(id, &s).unwrap();
            assert_ne!(v.status, "fail", "{id}: {:#?}", v.witnesses);
        }
    }

    #[test]
    fn eighth_roots_skipped_below_level_three() {
        let v = run("eighth-roots", &Setup::default()).unwrap();
        assert_eq!(v.status, "skipped");
    }

    #[test]
    fn explicit_claims_skip_off_base_example() {
        let s = Setup {
            alphas: [0, 2, 5],
            ..Setup::default()
        };
        let v = run("k2-explicit", &s).unwrap();
        assert_eq!(v.status, "skipped");
        let v = run("kx-explicit", &s).unwrap();
        assert_eq!(v.status, "skipped");
    }

    #[test]
    fn bad_setup_is_rejected() {
        let s = Setup {
            alphas: [0, 0, 1],
            ..Setup::default()
        };
        match run("tree-invariants", &s) {
            Err(Error::Config(msg)) => assert!(msg.contains("distinct")),
            other => panic!("expected a config error, got {other:?}"),
        }
        let s = Setup {
            max_level: 0,
            ..Setup::default()
        };
        assert!(run("tree-invariants", &s).is_err());
    }

    #[test]
    fn unknown_claim_is_a_config_error() {
        match run("no-such-claim", &Setup::default()) {
            Err(Error::Config(_)) => {}
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn generic_mode_skips_halving_claims() {
        let s = Setup {
            mode: Mode::Generic,
            ..Setup::default()
        };
        for id in ["kernel-labeled", "x-adjoin", "index-two"] {
            let v = run(id, &s).unwrap();
            assert_eq!(v.status, "skipped", "{id}");
        }
        let v = run("central-in-x", &s).unwrap();
        assert!(v.passed(), "{:#?}", v.witnesses);
        let v = run("central-in-full", &s).unwrap();
        assert!(v.passed(), "{:#?}", v.witnesses);
        assert_eq!(v.level, 1);
    }

    #[test]
    fn chain_decoration_passes_in_every_convention() {
        for conv in [
            Convention::TwistedMap,
            Convention::CorrectedTarget,
            Convention::Literal,
        ] {
            let s = Setup {
                convention: conv,
                max_level: 3,
                ..Setup::default()
            };
            let v = run("chain-decoration", &s).unwrap();
            assert!(v.passed(), "{}: {:#?}", conv.name(), v.witnesses);
        }
    }

    #[test]
    fn second_specialization_runs_clean() {
        let s = Setup {
            alphas: [0, 2, 5],
            ..Setup::default()
        };
        for id in [
            "decoration-soundness",
            "chain-decoration",
            "policy-independence",
            "central-products",
            "central-in-full",
        ] {
            let v = run(id, &s).unwrap();
            assert!(v.passed(), "{id}: {:#?}", v.witnesses);
        }
    }
}
