//! Kernel properties shared by the property and acceptance suites.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deformkit::algebra::{catalog_get, AlgebraDef};
use deformkit::field::Scalar;
use deformkit::pbw::{reduce_mod_center, Element, Mono, ReductionStatus, Uea};
use deformkit::rep::{build_rep, substitute_rep, KappaSign, RepKind, RepParams, Representation, Spin};

pub const CASES: u32 = 200;

/// Runs `test` on `CASES` inputs drawn with a fixed seed.
pub fn run<S: Strategy>(
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases: CASES, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

const ALGEBRAS: [&str; 5] = ["galilei", "galilei-extended", "poincare", "ds", "nh-plus"];

pub fn algebra(i: usize) -> &'static AlgebraDef {
    static DEFS: OnceLock<Vec<AlgebraDef>> = OnceLock::new();
    &DEFS.get_or_init(|| ALGEBRAS.iter().map(|n| catalog_get(n).unwrap()).collect())[i]
}

/// `Σ c · word`, letters are generator slots.
pub type Words = Vec<(i64, Vec<usize>)>;

pub fn words(n: usize, max_len: usize, max_terms: usize) -> impl Strategy<Value = Words> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0..n, 0..=max_len)), 1..=max_terms)
}

pub fn element(uea: &Arc<Uea>, w: &Words) -> Element {
    let raw: Vec<(Scalar, Vec<(usize, i32)>)> =
        w.iter().map(|(c, x)| (Scalar::from_int(*c), x.iter().map(|&g| (g, 1)).collect())).collect();
    Element::normal_order(uea, &raw).unwrap()
}

fn concat(a: &Words, b: &Words) -> Words {
    let mut out = Vec::new();
    for (c, x) in a {
        for (d, y) in b {
            out.push((c * d, x.iter().chain(y).copied().collect()));
        }
    }
    out
}

/// Normal ordering by naive rewriting `ab → ba + [a,b]` at a randomly chosen
/// inversion each step; independent of the engine's multiplication.
pub fn brute_force(uea: &Arc<Uea>, w: &Words, rng: &mut ChaCha8Rng) -> Element {
    let n = uea.n();
    let mut todo: Vec<(Scalar, Vec<usize>)> = w.iter().map(|(c, x)| (Scalar::from_int(*c), x.clone())).collect();
    let mut done: HashMap<Vec<i32>, Scalar> = HashMap::new();
    while let Some((c, x)) = todo.pop() {
        if c.is_zero() {
            continue;
        }
        let inversions: Vec<usize> = (0..x.len().saturating_sub(1)).filter(|&i| x[i] > x[i + 1]).collect();
        if inversions.is_empty() {
            let mut e = vec![0i32; n];
            for &g in &x {
                e[g] += 1;
            }
            let slot = done.entry(e).or_insert_with(Scalar::zero);
            *slot = &*slot + &c;
            continue;
        }
        let i = inversions[rng.gen_range(0..inversions.len())];
        let mut swapped = x.clone();
        swapped.swap(i, i + 1);
        todo.push((c.clone(), swapped));
        for (m, k) in uea.bracket(x[i], x[i + 1]) {
            let mut y = x[..i].to_vec();
            for (g, &e) in m.exponents().iter().enumerate() {
                y.extend(std::iter::repeat_n(g, e as usize));
            }
            y.extend_from_slice(&x[i + 2..]);
            todo.push((&c * k, y));
        }
    }
    let mut acc = Element::zero(uea);
    for (e, c) in done {
        acc = &acc + &Element::from_monomial(uea, Mono::from_exponents(&e), c);
    }
    acc
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

/// Normal forms do not depend on the rewriting order.
pub fn pbw_confluence(seed: u64) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len(), any::<u64>()).prop_flat_map(|(a, s)| {
        let n = algebra(a).uea.n();
        (Just(a), Just(s), words(n, 5, 3))
    });
    run(seed, strat, |(a, s, w)| {
        let uea = &algebra(a).uea;
        let engine = element(uea, &w);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let first = brute_force(uea, &w, &mut rng);
        let second = brute_force(uea, &w, &mut rng);
        check(first == second && first == engine, || format!("{}: {engine} vs {first} vs {second}", ALGEBRAS[a]))
    })
}

pub fn associativity(seed: u64) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len()).prop_flat_map(|a| {
        let n = algebra(a).uea.n();
        (Just(a), words(n, 2, 2), words(n, 2, 2), words(n, 2, 2))
    });
    run(seed, strat, |(a, x, y, z)| {
        let uea = &algebra(a).uea;
        let (ex, ey, ez) = (element(uea, &x), element(uea, &y), element(uea, &z));
        let left = &(&ex * &ey) * &ez;
        let right = &ex * &(&ey * &ez);
        let brute = brute_force(uea, &concat(&concat(&x, &y), &z), &mut ChaCha8Rng::seed_from_u64(0));
        check(left == right && left == brute, || format!("{}: {left} | {right} | {brute}", ALGEBRAS[a]))
    })
}

/// `[a, bc] = [a,b]c + b[a,c]` and the Jacobi identity on random elements.
pub fn leibniz_jacobi(seed: u64) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len()).prop_flat_map(|a| {
        let n = algebra(a).uea.n();
        (Just(a), words(n, 2, 2), words(n, 2, 2), words(n, 2, 2))
    });
    run(seed, strat, |(a, x, y, z)| {
        let uea = &algebra(a).uea;
        let (ex, ey, ez) = (element(uea, &x), element(uea, &y), element(uea, &z));
        let lhs = ex.commutator(&(&ey * &ez));
        let rhs = &(&ex.commutator(&ey) * &ez) + &(&ey * &ex.commutator(&ez));
        check(lhs == rhs, || format!("Leibniz in {}: {lhs} ≠ {rhs}", ALGEBRAS[a]))?;
        let jac = &(&ex.commutator(&ey.commutator(&ez)) + &ey.commutator(&ez.commutator(&ex)))
            + &ez.commutator(&ex.commutator(&ey));
        check(jac.is_zero(), || format!("Jacobi in {}: {jac}", ALGEBRAS[a]))
    })
}

/// `r = reduced + Σ q_t (C_t − c_t)` for the returned cofactors.
pub fn reduction_soundness(seed: u64) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len()).prop_flat_map(|a| {
        let def = algebra(a);
        let (n, k) = (def.uea.n(), def.casimirs.len());
        (Just(a), words(n, 3, 3), prop::collection::vec(words(n, 2, 2), k))
    });
    run(seed, strat, |(a, w, qs)| {
        let def = algebra(a);
        let uea = &def.uea;
        let rels: Vec<(Element, Scalar)> =
            def.casimirs.iter().map(|c| (c.element.clone(), Scalar::from_symbol(c.eigenvalue))).collect();
        // bias towards the ideal so reduction has work to do
        let mut r = element(uea, &w);
        for ((c, v), q) in rels.iter().zip(&qs) {
            r = &r + &(&element(uea, q) * &(c - &Element::scalar(uea, v.clone())));
        }
        let red = reduce_mod_center(&r, &rels, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(red.status == ReductionStatus::Reduced, || format!("not reduced: {r}"))?;
        let mut rebuilt = red.reduced.clone();
        for (q, (c, v)) in red.cofactors.iter().zip(&rels) {
            rebuilt = &rebuilt + &(q * &(c - &Element::scalar(uea, v.clone())));
        }
        check(rebuilt == r, || format!("{}: cofactors do not rebuild {r}", ALGEBRAS[a]))?;
        check(red.reduced.degree() <= r.degree(), || format!("degree grew for {r}"))
    })
}

const REP_CASES: [(RepKind, Spin, KappaSign); 7] = [
    (RepKind::GalileiBacry, Spin::HALF, KappaSign::Minus),
    (RepKind::NhDeformed, Spin::ZERO, KappaSign::Plus),
    (RepKind::PoincareMassive, Spin::ZERO, KappaSign::Minus),
    (RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus),
    (RepKind::AdsDeformed, Spin::ZERO, KappaSign::Minus),
    (RepKind::AdsDeformed, Spin::ONE, KappaSign::Plus),
    (RepKind::AdsDeformed, Spin::HALF, KappaSign::Plus),
];

/// Spinning (A)dS products spend minutes in rational-function gcds, so the
/// morphism check takes (A)dS at spin 0 only.
const MORPHISM_REPS: [usize; 5] = [0, 1, 2, 3, 4];

pub fn rep(i: usize) -> &'static Representation {
    static REPS: OnceLock<Vec<Representation>> = OnceLock::new();
    &REPS.get_or_init(|| {
        REP_CASES.iter().map(|&(k, s, g)| build_rep(k, s, g, &RepParams::default()).unwrap()).collect()
    })[i]
}

/// `ρ(ab) = ρ(a)ρ(b)` with `a` of degree ≤ 3 and `b` of degree ≤ 1, and
/// `ρ(a + b) = ρ(a) + ρ(b)`.
pub fn substitute_morphism(seed: u64) -> Result<(), String> {
    let strat = prop::sample::select(MORPHISM_REPS.to_vec()).prop_flat_map(|i| {
        let n = rep(i).algebra.uea.n();
        (Just(i), words(n, 3, 2), words(n, 1, 2))
    });
    run(seed, strat, |(i, x, y)| {
        let r = rep(i);
        let uea = &r.algebra.uea;
        let (a, b) = (element(uea, &x), element(uea, &y));
        let fail = |e: deformkit::rep::RepError| TestCaseError::fail(e.to_string());
        let (ra, rb) = (substitute_rep(&a, r).map_err(fail)?, substitute_rep(&b, r).map_err(fail)?);
        let prod = substitute_rep(&(&a * &b), r).map_err(fail)?;
        let composed = ra.compose(&rb).map_err(fail)?;
        check(prod == composed, || format!("{}: ρ({a} · {b})", REP_CASES[i].0))?;
        let sum = substitute_rep(&(&a + &b), r).map_err(fail)?;
        check(sum == ra.try_add(&rb).map_err(fail)?, || format!("{}: ρ({a} + {b})", REP_CASES[i].0))
    })
}

/// Every exactly verified identity of every representation also holds at
/// sampled rational points against random test functions.
pub fn spot_oracle(seed: u64) -> Result<(), String> {
    run(seed, (0..REP_CASES.len(), any::<u64>()), |(i, s)| {
        let checks = rep(i).spot_check(s, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
        match checks.iter().find(|c| !c.passed()) {
            None => Ok(()),
            Some(c) => Err(TestCaseError::fail(format!("{}: {} {:?}", REP_CASES[i].0, c.name, c.witness))),
        }
    })
}

/// Positive control for the oracle: corrupting one image is caught.
pub fn spot_oracle_detects_corruption(seed: u64) -> bool {
    let mut r = build_rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus, &RepParams::default()).unwrap();
    let k = r.index_of("K1").unwrap();
    let j = r.index_of("J1").unwrap();
    r.images[k] = r.images[k].try_add(&r.images[j]).unwrap();
    r.spot_check(seed, 1).unwrap().iter().any(|c| !c.passed())
}

pub const PROPERTIES: [(&str, fn(u64) -> Result<(), String>); 6] = [
    ("PBW confluence", pbw_confluence),
    ("associativity vs brute force", associativity),
    ("commutator Leibniz/Jacobi", leibniz_jacobi),
    ("reduce_mod_center soundness", reduction_soundness),
    ("substitute_rep morphism", substitute_morphism),
    ("spot-oracle agreement", spot_oracle),
];
