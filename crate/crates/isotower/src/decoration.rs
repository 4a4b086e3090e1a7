//! Recursive decoration of the level tree: each vertex carries an exact
//! value, and the two children of a vertex receive the roots of a quadratic
//! built from the vertex value and its twin's value. Two published shapes of
//! the level-2 step are kept side by side, along with the root-ordering
//! policy, so their consequences can be compared machine-exactly.

use crate::fields::{Field, TowerElem, TowerField};
use crate::tree::Vertex;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Shape of the level-1 → level-2 step.
///
/// Both shapes share the child sum 2(2a′ + a); they differ in the constant
/// term: `ConstructionConsistent` uses a² (what the isogeny targets actually
/// produce), `PrintedLevelTwo` uses a′² (the shape the higher levels use,
/// applied one level early).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    ConstructionConsistent,
    PrintedLevelTwo,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cc" | "construction-consistent" => Ok(Variant::ConstructionConsistent),
            "pl" | "printed-level-two" => Ok(Variant::PrintedLevelTwo),
            _ => Err(Error::Config(format!(
                "unknown variant {s:?} (expected cc|pl)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::ConstructionConsistent => "cc",
            Variant::PrintedLevelTwo => "pl",
        }
    }
}

/// Which quadratic root is assigned to the first (label-preserving) child.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Policy {
    PlusFirst,
    MinusFirst,
}

impl Policy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plus-first" | "plus" => Ok(Policy::PlusFirst),
            "minus-first" | "minus" => Ok(Policy::MinusFirst),
            _ => Err(Error::Config(format!(
                "unknown policy {s:?} (expected plus-first|minus-first)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::PlusFirst => "plus-first",
            Policy::MinusFirst => "minus-first",
        }
    }
}

/// Level-1 values (α₂−α₃, α₃−α₁, α₁−α₂), indexed by direction − 1.
pub fn level_one_values<B: Field>(
    t: &TowerField<B>,
    alphas: &[TowerElem<B>; 3],
) -> [TowerElem<B>; 3] {
    [
        t.sub(&alphas[1], &alphas[2]),
        t.sub(&alphas[2], &alphas[0]),
        t.sub(&alphas[0], &alphas[1]),
    ]
}

/// Sum and product of the two child values of a vertex at `parent_level`
/// carrying `a`, whose twin carries `a_twin`.
pub fn child_quadratic<B: Field>(
    t: &TowerField<B>,
    parent_level: u32,
    a: &TowerElem<B>,
    a_twin: &TowerElem<B>,
    variant: Variant,
) -> (TowerElem<B>, TowerElem<B>) {
    let two = t.from_i64(2);
    let sum = if parent_level == 1 {
        t.mul(&two, &t.add(&t.mul(&two, a_twin), a))
    } else {
        t.mul(&two, &t.sub(a_twin, &t.mul(&two, a)))
    };
    let prod = match (parent_level, variant) {
        (1, Variant::ConstructionConsistent) => t.square(a),
        _ => t.square(a_twin),
    };
    (sum, prod)
}

/// Split x² − sum·x + prod, extending the tower as needed. Returns the
/// extended tower and the roots, the `+√disc` root first under `PlusFirst`.
pub fn split_children<B: Field>(
    t: &TowerField<B>,
    at: &Vertex,
    sum: &TowerElem<B>,
    prod: &TowerElem<B>,
    policy: Policy,
) -> Result<(TowerField<B>, TowerElem<B>, TowerElem<B>)> {
    let disc = t.sub(&t.square(sum), &t.mul(&t.from_i64(4), prod));
    if t.is_zero(&disc) {
        return Err(Error::DegenerateQuadratic(format!(
            "double child value {} at vertex {}",
            t.fmt_elem(&t.div(sum, &t.from_i64(2))?),
            at.path_string()
        )));
    }
    let (t2, w) = t.adjoin_sqrt(&disc, Some(&format!("d({})", at.path_string())))?;
    let half = t2.from_rat(&crate::fields::Rat::from_frac(1, 2));
    let s2 = t2.lift(sum)?;
    let plus = t2.mul(&t2.add(&s2, &w), &half);
    let minus = t2.mul(&t2.sub(&s2, &w), &half);
    Ok(match policy {
        Policy::PlusFirst => (t2, plus, minus),
        Policy::MinusFirst => (t2, minus, plus),
    })
}

/// A full decoration of the tree down to some level, in one shared tower.
#[derive(Clone, Debug)]
pub struct Decoration<B: Field> {
    pub tower: TowerField<B>,
    /// `levels[k]` lists level k+1 in canonical vertex order.
    pub levels: Vec<Vec<(Vertex, TowerElem<B>)>>,
}

impl<B: Field> Decoration<B> {
    pub fn level_values(&self, level: u32) -> &[(Vertex, TowerElem<B>)] {
        &self.levels[(level - 1) as usize]
    }

    pub fn value_of(&self, v: &Vertex) -> Option<&TowerElem<B>> {
        self.levels
            .get((v.level() - 1) as usize)?
            .iter()
            .find(|(u, _)| u == v)
            .map(|(_, a)| a)
    }
}

fn lift_entries<B: Field>(
    t: &TowerField<B>,
    entries: &[(Vertex, TowerElem<B>)],
) -> Result<Vec<(Vertex, TowerElem<B>)>> {
    entries
        .iter()
        .map(|(v, a)| Ok((*v, t.lift(a)?)))
        .collect()
}

/// Decorate every vertex down to `max_level` in one shared tower.
pub fn decorate<B: Field>(
    t: &TowerField<B>,
    alphas: &[TowerElem<B>; 3],
    max_level: u32,
    variant: Variant,
    policy: Policy,
) -> Result<Decoration<B>> {
    if max_level < 1 {
        return Err(Error::Config("decoration needs at least level 1".into()));
    }
    let a1 = level_one_values(t, alphas);
    for v in &a1 {
        if t.is_zero(v) {
            return Err(Error::DistinctRootsRequired);
        }
    }
    let mut tower = t.clone();
    let mut levels: Vec<Vec<(Vertex, TowerElem<B>)>> = vec![Vertex::roots()
        .iter()
        .zip(a1.iter())
        .map(|(v, a)| (*v, a.clone()))
        .collect()];
    for parent_level in 1..max_level {
        let cur = levels.last().unwrap().clone();
        let index: BTreeMap<Vertex, usize> =
            cur.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
        let mut next: Vec<(Vertex, TowerElem<B>)> = Vec::new();
        let mut cur_l = cur.clone();
        for i in 0..cur_l.len() {
            let v = cur_l[i].0;
            let a = cur_l[i].1.clone();
            let a_twin = cur_l[index[&v.twin()]].1.clone();
            let (sum, prod) = child_quadratic(&tower, parent_level, &a, &a_twin, variant);
            let (t2, first, second) = split_children(&tower, &v, &sum, &prod, policy)?;
            if t2.id() != tower.id() {
                next = lift_entries(&t2, &next)?;
                cur_l = lift_entries(&t2, &cur_l)?;
                for lev in levels.iter_mut() {
                    *lev = lift_entries(&t2, lev)?;
                }
                tower = t2;
            }
            let [c0, c1] = v.children()?;
            next.push((c0, first));
            next.push((c1, second));
        }
        next.sort_by_key(|(v, _)| v.sort_key());
        levels.push(next);
    }
    Ok(Decoration { tower, levels })
}

/// One step of a root-to-vertex walk.
#[derive(Clone, Debug)]
pub struct PathStep<B: Field> {
    pub vertex: Vertex,
    pub value: TowerElem<B>,
    pub twin_value: TowerElem<B>,
}

/// Decoration along a single root-to-vertex path, in a tower that only
/// grows with that path's own splits.
#[derive(Clone, Debug)]
pub struct PathDecoration<B: Field> {
    pub tower: TowerField<B>,
    pub steps: Vec<PathStep<B>>,
}

/// Decorate one root-to-vertex path. The sibling value rides along, since
/// each quadratic needs the twin; at level 1 the twin is the cyclic one.
pub fn decorate_path<B: Field>(
    t: &TowerField<B>,
    alphas: &[TowerElem<B>; 3],
    target: &Vertex,
    variant: Variant,
    policy: Policy,
) -> Result<PathDecoration<B>> {
    let a1 = level_one_values(t, alphas);
    for v in &a1 {
        if t.is_zero(v) {
            return Err(Error::DistinctRootsRequired);
        }
    }
    // Ancestor chain from level 1 down to the target.
    let mut chain = vec![*target];
    while let Some(p) = chain.last().unwrap().parent() {
        chain.push(p);
    }
    chain.reverse();
    let bits = target.path_bits();

    let root = chain[0];
    let idx = root.alpha_index() - 1;
    let twin_idx = root.twin().alpha_index() - 1;
    let mut tower = t.clone();
    let mut steps = vec![PathStep {
        vertex: root,
        value: a1[idx].clone(),
        twin_value: a1[twin_idx].clone(),
    }];
    for (k, v) in chain.iter().enumerate().skip(1) {
        let prev = steps.last().unwrap();
        let (sum, prod) = child_quadratic(
            &tower,
            prev.vertex.level(),
            &prev.value,
            &prev.twin_value,
            variant,
        );
        let (t2, first, second) = split_children(&tower, &prev.vertex, &sum, &prod, policy)?;
        if t2.id() != tower.id() {
            for s in steps.iter_mut() {
                s.value = t2.lift(&s.value)?;
                s.twin_value = t2.lift(&s.twin_value)?;
            }
            tower = t2;
        }
        let (value, twin_value) = if bits[k - 1] == 0 {
            (first, second)
        } else {
            (second, first)
        };
        steps.push(PathStep {
            vertex: *v,
            value,
            twin_value,
        });
    }
    Ok(PathDecoration { tower, steps })
}
