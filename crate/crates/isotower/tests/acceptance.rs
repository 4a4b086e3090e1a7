//! Acceptance suite: one test per numbered acceptance item, each printing a
//! single pass/fail line and holding a wall-clock budget. Item 11 carries the
//! multi-hour generic division-field computation and is opt-in (`--ignored`).

use std::time::{Duration, Instant};

use isotower::claims::{run, Mode, Setup};
use isotower::curves::Convention;
use isotower::decoration::{Policy, Variant};
use isotower::fields::{Field, RatField, TowerField};
use isotower::towers::{verify_index_two, Verdict};

fn specialized(alphas: [i64; 3], max_level: u32) -> Setup {
    Setup {
        mode: Mode::Specialized,
        alphas,
        max_level,
        ..Setup::default()
    }
}

fn generic(max_level: u32) -> Setup {
    Setup {
        mode: Mode::Generic,
        max_level,
        ..Setup::default()
    }
}

fn conclude(item: u32, verdicts: &[Verdict], detail: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    let ok = verdicts.iter().all(|v| v.passed());
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance {item}: {status} — {detail} ({elapsed:.2?})");
    for v in verdicts {
        assert!(
            v.passed(),
            "item {item}: claim '{}' ended '{}'\n{}",
            v.id,
            v.status,
            v.witnesses.join("\n")
        );
    }
    assert!(
        elapsed <= budget,
        "item {item} took {elapsed:?}, budget {budget:?}"
    );
}

#[test]
fn a01_symbolic_isogeny_identities() {
    let start = Instant::now();
    let v = run("isogeny-symbolic", &Setup::default()).unwrap();
    conclude(
        1,
        &[v],
        "curve-to-curve map, dual composition, and twisted variant verified symbolically",
        start,
        Duration::from_secs(5),
    );
}

#[test]
fn a02_decoration_soundness_deep_and_generic() {
    let start = Instant::now();
    let mut vs = Vec::new();
    for alphas in [[0, 1, 3], [0, 2, 5], [1, 3, 8]] {
        vs.push(run("decoration-soundness", &specialized(alphas, 5)).unwrap());
    }
    vs.push(run("decoration-soundness", &generic(2)).unwrap());
    conclude(
        2,
        &vs,
        "recursion verified to level 5 on three curves and level 2 generically, \
         with the symbolic discriminant identities",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn a03_chain_values_match_decoration() {
    let start = Instant::now();
    let mut vs = Vec::new();
    for convention in [Convention::TwistedMap, Convention::CorrectedTarget] {
        let s = Setup {
            convention,
            ..specialized([0, 1, 3], 3)
        };
        vs.push(run("chain-decoration", &s).unwrap());
    }
    let separated = vs[0]
        .witnesses
        .iter()
        .any(|w| w.contains("alternative shape"));
    assert!(separated, "expected a realized-constant separation witness");
    conclude(
        3,
        &vs,
        "chain coefficients reproduce the decoration through level 3 and the \
         realized constants reject the alternative recursion shape",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn a04_decoration_is_policy_independent() {
    let start = Instant::now();
    let vs = vec![
        run("policy-independence", &specialized([0, 1, 3], 3)).unwrap(),
        run("policy-independence", &generic(2)).unwrap(),
    ];
    conclude(
        4,
        &vs,
        "root-ordering policies give the same value multisets and the same fields, \
         level 3 on the explicit curve and level 2 generically",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn a05_edges_certified_against_labeled_kernels() {
    let start = Instant::now();
    let v = run("kernel-labeled", &specialized([0, 1, 3], 3)).unwrap();
    conclude(
        5,
        &[v],
        "every chain edge through level 3 annihilates exactly its labeled kernel",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn a06_central_value_products() {
    let start = Instant::now();
    let mut vs = Vec::new();
    for alphas in [[0, 1, 3], [0, 2, 5], [1, 3, 8]] {
        vs.push(run("central-products", &specialized(alphas, 2)).unwrap());
    }
    vs.push(run("central-products", &generic(2)).unwrap());
    conclude(
        6,
        &vs,
        "pair products of level-2 values generate the same degree-4 field on \
         three curves and generically",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn a07_explicit_towers_and_containment_chain() {
    let start = Instant::now();
    let mut vs = vec![
        run("k2-explicit", &specialized([0, 1, 3], 2)).unwrap(),
        run("kx-explicit", &specialized([0, 1, 3], 2)).unwrap(),
        run("x-adjoin", &specialized([0, 1, 3], 2)).unwrap(),
        run("central-in-x", &specialized([0, 1, 3], 2)).unwrap(),
        run("central-in-full", &specialized([0, 1, 3], 3)).unwrap(),
    ];
    let t = TowerField::over(RatField);
    let al = [t.from_i64(0), t.from_i64(1), t.from_i64(3)];
    vs.push(
        verify_index_two(
            &t,
            &al,
            2,
            Variant::ConstructionConsistent,
            Policy::PlusFirst,
            "specialized (0,1,3)",
            Some(1),
        )
        .unwrap(),
    );
    conclude(
        7,
        &vs,
        "explicit level-2 towers match, x- and value-fields interlock, and the \
         level-2 index is exactly 1",
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn a08_k2_as_radical_extension() {
    let start = Instant::now();
    let vs: Vec<_> = [[0, 1, 3], [0, 2, 5], [1, 3, 8]]
        .into_iter()
        .map(|alphas| run("k2-radicals", &specialized(alphas, 2)).unwrap())
        .collect();
    conclude(
        8,
        &vs,
        "square roots of the level-1 values generate K2 on three curves; the \
         naive root-of-alpha reading fails on the base curve",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn a09_matrix_groups_and_stabilizers() {
    let start = Instant::now();
    let vs = vec![
        run("scalar-stabilizer", &Setup::default()).unwrap(),
        run("relative-kernel", &Setup::default()).unwrap(),
    ];
    conclude(
        9,
        &vs,
        "full-level stabilizers are the odd scalars (orders 6, 96, 1536) and the \
         relative kernel has 8 involutions",
        start,
        Duration::from_secs(10),
    );
}

#[test]
fn a10_tree_combinatorics() {
    let start = Instant::now();
    let v = run("tree-invariants", &Setup::default()).unwrap();
    conclude(
        10,
        &[v],
        "level counts 3·2^(n−1) to depth 8, twin/parent structure to depth 6, \
         cyclic-subgroup bijection to depth 4",
        start,
        Duration::from_secs(5),
    );
}

/// Generic division tower at level 3: exact function-field halving, runs for
/// hours. Opt in with `cargo test -p isotower --test acceptance -- --ignored`.
#[test]
#[ignore]
fn a11_generic_index_two() {
    let start = Instant::now();
    let v = run("index-two-generic", &generic(3)).unwrap();
    conclude(
        11,
        &[v],
        "generic 8-division field contains the extended level-3 value field with index 2",
        start,
        Duration::from_secs(24 * 3600),
    );
}
