//! Classical deformations inside a universal enveloping algebra: seed from
//! the curvature expansion of the target Casimirs, deformed generators by
//! commutation with the seed, closure residuals reduced modulo the center,
//! and the resulting constraints on the seed constants.

mod constraints;
mod kappa;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

pub use constraints::{apply_relations, normalize, solve_constraints, Solution};
pub use kappa::{extract_kappa_expansion, recombine, KappaForm};

use crate::algebra::{AlgebraDef, AlgebraError};
use crate::field::{positive_root, FieldError, Relation, Scalar, Symbol};
use crate::pbw::{Element, PbwError, Reducer, ReductionStatus, Uea};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("curvature `{0}` is not of the form c·t^n in a free parameter")]
    CurvatureForm(String),
    #[error("non-polynomial curvature dependence in coefficient {0}")]
    NonPolynomial(String),
    #[error("seed needs {expected} first-order terms, got {got}")]
    SeedLength { expected: usize, got: usize },
    #[error("rank {rank} exceeds the {available} target Casimirs")]
    RankTooLarge { rank: usize, available: usize },
    #[error("target generator `{0}` has no deformed image")]
    MissingGenerator(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("no exact root for {0}")]
    NoRoot(String),
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Everything a deformation run needs.
#[derive(Clone, Debug)]
pub struct DeformationSpec {
    pub source: AlgebraDef,
    pub target: AlgebraDef,
    pub kappa: KappaForm,
    pub rank: usize,
    pub alphas: Vec<Symbol>,
    /// Central relations `C = c` of the source irreducible representation.
    pub relations: Vec<(Element, Scalar)>,
    /// Target Casimirs used for the seed, read in the source algebra.
    pub target_casimirs: Vec<Element>,
    pub degree_bound: Option<u32>,
}

impl DeformationSpec {
    /// Uses the first `rank` target Casimirs and every source Casimir.
    pub fn new(source: AlgebraDef, target: AlgebraDef, kappa: &str, rank: usize) -> Result<Self, DeformError> {
        let available = target.casimirs.len();
        if rank > available {
            return Err(DeformError::RankTooLarge { rank, available });
        }
        let kappa = KappaForm::from_params(&target.params, Symbol::new(kappa))?;
        let target_casimirs = target.casimirs[..rank]
            .iter()
            .map(|c| c.evaluate_in(&source.uea, &target.params))
            .collect::<Result<Vec<_>, _>>()?;
        let relations =
            source.casimirs.iter().map(|c| (c.element.clone(), Scalar::from_symbol(c.eigenvalue))).collect();
        let alphas = (1..=rank).map(|s| Symbol::new(&format!("α{s}"))).collect();
        Ok(DeformationSpec { source, target, kappa, rank, alphas, relations, target_casimirs, degree_bound: None })
    }

    /// Rescales the seed Casimirs `C′_s → k_s C′_s`.
    pub fn rescale_casimirs(mut self, factors: &[Scalar]) -> Self {
        for (c, k) in self.target_casimirs.iter_mut().zip(factors) {
            *c = c.scale(k);
        }
        self
    }
}

/// Verification record for one target bracket `[X, Y]`.
#[derive(Clone, Debug)]
pub struct BracketRecord {
    pub x: String,
    pub y: String,
    /// `[X′, Y′] - rhs(gens′)` before central reduction.
    pub residual: Element,
    pub reduced: Element,
    pub cofactors: Vec<Element>,
    pub status: ReductionStatus,
    /// Reduced residual once the solved relations are applied.
    pub verified: Element,
}

impl BracketRecord {
    pub fn closed(&self) -> bool {
        self.status == ReductionStatus::Reduced && self.verified.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct DeformationResult {
    pub expansions: Vec<Vec<Element>>,
    pub seed: Element,
    /// Deformed images of every source generator, in source order.
    pub generators: Vec<(String, Element)>,
    pub unchanged: Vec<String>,
    pub solution: Solution,
    pub records: Vec<BracketRecord>,
    /// Nonvanishing conditions the relations rely on, e.g. `c1 ≠ 0`.
    pub preconditions: Vec<String>,
}

impl DeformationResult {
    pub fn closed(&self) -> bool {
        self.solution.unsolved.is_empty() && self.records.iter().all(|r| r.closed())
    }

    pub fn generator(&self, name: &str) -> Option<&Element> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn record(&self, x: &str, y: &str) -> Option<&BracketRecord> {
        self.records.iter().find(|r| (r.x == x && r.y == y) || (r.x == y && r.y == x))
    }
}

/// `𝒥 = Σ α_s 𝒥_s^{(1)}`.
pub fn build_seed(first_order: &[Element], alphas: &[Symbol]) -> Result<Element, DeformError> {
    if first_order.len() != alphas.len() {
        return Err(DeformError::SeedLength { expected: alphas.len(), got: first_order.len() });
    }
    let mut it = first_order.iter().zip(alphas);
    let Some((j0, a0)) = it.next() else {
        return Err(DeformError::SeedLength { expected: 1, got: 0 });
    };
    let mut acc = j0.scale(&Scalar::from_symbol(*a0));
    for (j, a) in it {
        acc = &acc + &j.scale(&Scalar::from_symbol(*a));
    }
    Ok(acc)
}

/// `X′ = [𝒥, X]`, or `X` itself when that commutator vanishes.
pub fn deform_generators(seed: &Element, uea: &Arc<Uea>) -> Vec<(String, Element)> {
    uea.names()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let x = Element::gen(uea, i);
            let c = seed.commutator(&x);
            (n.clone(), if c.is_zero() { x } else { c })
        })
        .collect()
}

/// `[X′, Y′] - rhs(gens′)` for every unordered pair of target generators.
pub fn closure_residuals(
    gens: &[(String, Element)],
    target: &AlgebraDef,
) -> Result<Vec<(String, String, Element)>, DeformError> {
    let tu = &target.uea;
    let lookup: HashMap<&str, &Element> = gens.iter().map(|(n, e)| (n.as_str(), e)).collect();
    let mut images = Vec::with_capacity(tu.n());
    for n in tu.names() {
        images.push(*lookup.get(n.as_str()).ok_or_else(|| DeformError::MissingGenerator(n.clone()))?);
    }
    let src = images[0].uea().clone();
    let pairs: Vec<(usize, usize)> = (0..tu.n()).flat_map(|i| (i + 1..tu.n()).map(move |j| (i, j))).collect();
    let out: Vec<(String, String, Element)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let lhs = images[i].commutator(images[j]);
            let mut rhs = Element::zero(&src);
            for (m, c) in tu.bracket(i, j) {
                let term = match m.first_slot() {
                    Some(s) => images[s].scale(c),
                    None => Element::scalar(&src, c.clone()),
                };
                rhs = &rhs + &term;
            }
            (tu.name(i).to_string(), tu.name(j).to_string(), &lhs - &rhs)
        })
        .collect();
    Ok(out)
}

/// Scalar equations from reduced residuals: one per PBW monomial.
fn split_equations(reduced: &[Element]) -> Vec<Scalar> {
    let mut out = Vec::new();
    for r in reduced {
        for c in r.terms().values() {
            out.push(c.clone());
        }
    }
    out
}

fn preconditions(rels: &[Relation], unknowns: &[Symbol]) -> Vec<String> {
    let mut syms = BTreeSet::new();
    for r in rels {
        for v in r.value().denom().vars() {
            if !unknowns.contains(&v) {
                syms.insert(v);
            }
        }
        if let Relation::Square(_, v) = r {
            for x in v.numer().vars() {
                if !unknowns.contains(&x) {
                    syms.insert(x);
                }
            }
        }
    }
    syms.into_iter().map(|s| format!("{} ≠ 0", s.name())).collect()
}

fn verify(reduced: &Element, rels: &[Relation]) -> Element {
    reduced
        .try_map_coeffs(|c| Ok(apply_relations(c, rels)))
        .expect("relations keep coefficients finite")
}

/// extract → seed → deform → residuals → reduce → solve → re-verify.
pub fn run_deformation(spec: &DeformationSpec) -> Result<DeformationResult, DeformError> {
    let src = &spec.source.uea;
    let mut expansions = Vec::new();
    for c in &spec.target_casimirs {
        expansions.push(extract_kappa_expansion(c, &spec.kappa)?);
    }
    let first: Vec<Element> =
        expansions.iter().map(|e| e.get(1).cloned().unwrap_or_else(|| Element::zero(src))).collect();
    let seed = build_seed(&first, &spec.alphas)?;
    let generators = deform_generators(&seed, src);
    let unchanged = generators
        .iter()
        .filter(|(n, e)| Element::named(src, n).map(|g| g == *e).unwrap_or(false))
        .map(|(n, _)| n.clone())
        .collect();
    let residuals = closure_residuals(&generators, &spec.target)?;
    let reducer = Reducer::new(src, &spec.relations)?;
    let reductions = residuals
        .par_iter()
        .map(|(_, _, r)| reducer.reduce(r, spec.degree_bound))
        .collect::<Result<Vec<_>, _>>()?;
    let reduced: Vec<Element> = reductions.iter().map(|r| r.reduced.clone()).collect();
    let solution = solve_constraints(&split_equations(&reduced), &spec.alphas);
    let records = residuals
        .into_iter()
        .zip(reductions)
        .map(|((x, y, residual), red)| BracketRecord {
            x,
            y,
            residual,
            verified: verify(&red.reduced, &solution.relations),
            reduced: red.reduced,
            cofactors: red.cofactors,
            status: red.status,
        })
        .collect();
    let preconditions = preconditions(&solution.relations, &spec.alphas);
    Ok(DeformationResult { expansions, seed, generators, unchanged, solution, records, preconditions })
}

/// Picks roots of the solved relations after writing eigenvalues through
/// primitives (e.g. `c1 → u²`). Returns `α_s ↦ value`, in solve order.
pub fn root_determination(
    result: &DeformationResult,
    eigen: &HashMap<Symbol, Scalar>,
) -> Result<Vec<(Symbol, Scalar)>, DeformError> {
    let mut out: Vec<(Symbol, Scalar)> = Vec::new();
    for r in &result.solution.relations {
        let mut v = r.value().subs(eigen)?;
        for (s, val) in &out {
            v = v.subs_one(*s, val)?;
        }
        let rel = match r {
            Relation::Value(x, _) => Relation::Value(*x, v),
            Relation::Square(x, _) => Relation::Square(*x, v),
        };
        let root = positive_root(&rel).ok_or_else(|| DeformError::NoRoot(rel.to_string()))?;
        out.push((r.unknown(), root));
    }
    // earlier values may mention later unknowns
    let all: HashMap<Symbol, Scalar> = out.iter().cloned().collect();
    for (_, v) in out.iter_mut() {
        *v = v.subs(&all)?;
    }
    Ok(out)
}

/// Re-runs closure with the seed constants and eigenvalues bound to exact
/// values: residuals are recomputed from substituted generators and reduced
/// modulo the substituted central relations.
pub fn verify_with_roots(
    spec: &DeformationSpec,
    result: &DeformationResult,
    bindings: &HashMap<Symbol, Scalar>,
) -> Result<Vec<BracketRecord>, DeformError> {
    let src = &spec.source.uea;
    let gens = result
        .generators
        .iter()
        .map(|(n, e)| Ok((n.clone(), e.subs(bindings)?)))
        .collect::<Result<Vec<_>, FieldError>>()?;
    let residuals = closure_residuals(&gens, &spec.target)?;
    let rels = spec
        .relations
        .iter()
        .map(|(c, v)| Ok((c.clone(), v.subs(bindings)?)))
        .collect::<Result<Vec<_>, FieldError>>()?;
    let reducer = Reducer::new(src, &rels)?;
    residuals
        .into_par_iter()
        .map(|(x, y, residual)| {
            let residual = residual.subs(bindings)?;
            let red = reducer.reduce(&residual, spec.degree_bound)?;
            Ok(BracketRecord {
                x,
                y,
                residual,
                verified: red.reduced.clone(),
                reduced: red.reduced,
                cofactors: red.cofactors,
                status: red.status,
            })
        })
        .collect()
}
