//! Reduction modulo central relations `C_t = c_t`.
//!
//! The relations are central, so the two-sided ideal they generate is the
//! set of sums `Σ q_t (C_t - c_t)`. Reduction is a division algorithm over
//! PBW monomials with a degree-compatible order. The order is picked so
//! that the leading monomials of the relations are pairwise coprime; their
//! symbols then form a Gröbner basis of the associated graded ideal and the
//! remainder is a canonical normal form.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::Element;
use super::mono::Mono;
use super::uea::{add_term, Terms, Uea};
use super::PbwError;
use crate::field::Scalar;

const ITERATION_CAP: usize = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStatus {
    Reduced,
    NotReducedAtBound,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: Element,
    pub cofactors: Vec<Element>,
    pub status: ReductionStatus,
    pub bound: u32,
}

struct Rel {
    poly: Element,
    lm: Mono,
    lc: Scalar,
    degree: u32,
}

pub struct Reducer {
    uea: Arc<Uea>,
    rels: Vec<Rel>,
    ranking: Vec<usize>,
    groebner: bool,
}

/// Family of a generator name: the name without trailing digits.
fn family(name: &str) -> &str {
    name.trim_end_matches(|c: char| c.is_ascii_digit())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn order_key(uea: &Uea, ranking: &[usize], m: &Mono) -> Vec<i32> {
    let e = m.exponents();
    let mut key = Vec::with_capacity(e.len() + 1);
    let deg: i32 = (0..e.len()).filter(|i| !uea.is_invertible(*i)).map(|i| e[i].max(0)).sum();
    key.push(deg);
    for &s in ranking {
        key.push(e[s]);
    }
    for (i, &x) in e.iter().enumerate() {
        if uea.is_invertible(i) {
            key.push(x);
        }
    }
    key
}

fn leading(uea: &Uea, ranking: &[usize], el: &Element) -> Option<(Mono, Scalar)> {
    el.terms()
        .iter()
        .max_by(|a, b| order_key(uea, ranking, a.0).cmp(&order_key(uea, ranking, b.0)))
        .map(|(m, c)| (m.clone(), c.clone()))
}

fn coprime(a: &Mono, b: &Mono) -> bool {
    a.exponents().iter().zip(b.exponents()).all(|(x, y)| *x <= 0 || *y <= 0)
}

impl Reducer {
    /// Prepares reduction modulo `C_t - c_t` for each `(C_t, c_t)`.
    pub fn new(uea: &Arc<Uea>, relations: &[(Element, Scalar)]) -> Result<Reducer, PbwError> {
        let mut polys = Vec::new();
        for (c, v) in relations {
            if c.uea().id() != uea.id() {
                return Err(PbwError::AlgebraMismatch);
            }
            polys.push(c - &Element::scalar(uea, v.clone()));
        }
        // generator families, preferred order first
        let mut fams: Vec<&str> = Vec::new();
        for i in 0..uea.n() {
            if uea.is_invertible(i) {
                continue;
            }
            let f = family(uea.name(i));
            if !fams.contains(&f) {
                fams.push(f);
            }
        }
        let pref = ["K", "P", "J", "H"];
        fams.sort_by_key(|f| pref.iter().position(|p| p == f).unwrap_or(pref.len()));
        let idx: Vec<usize> = (0..fams.len()).collect();
        let slots_for = |perm: &[usize]| -> Vec<usize> {
            let mut r = Vec::new();
            for &fi in perm {
                for i in 0..uea.n() {
                    if !uea.is_invertible(i) && family(uea.name(i)) == fams[fi] {
                        r.push(i);
                    }
                }
            }
            r
        };
        let mut chosen: Option<Vec<usize>> = None;
        if polys.len() > 1 && fams.len() <= 8 {
            for perm in permutations(&idx) {
                let ranking = slots_for(&perm);
                let lms: Vec<Mono> = polys.iter().filter_map(|p| leading(uea, &ranking, p).map(|x| x.0)).collect();
                let ok = (0..lms.len()).all(|i| (i + 1..lms.len()).all(|j| coprime(&lms[i], &lms[j])));
                if ok {
                    chosen = Some(ranking);
                    break;
                }
            }
        }
        let groebner = chosen.is_some() || polys.len() <= 1;
        let ranking = chosen.unwrap_or_else(|| slots_for(&idx));
        let mut rels = Vec::new();
        for p in polys {
            let (lm, lc) = leading(uea, &ranking, &p).ok_or(PbwError::TrivialRelation)?;
            if lm.is_unit() {
                return Err(PbwError::TrivialRelation);
            }
            if lm.exponents().iter().enumerate().any(|(i, e)| uea.is_invertible(i) && *e != 0) {
                return Err(PbwError::TrivialRelation);
            }
            let degree = p.degree();
            rels.push(Rel { poly: p, lm, lc, degree });
        }
        Ok(Reducer { uea: uea.clone(), rels, ranking, groebner })
    }

    /// True when the leading monomials are pairwise coprime, so remainders
    /// are canonical.
    pub fn is_groebner(&self) -> bool {
        self.groebner
    }

    pub fn ranking_names(&self) -> Vec<String> {
        self.ranking.iter().map(|i| self.uea.name(*i).to_string()).collect()
    }

    /// Reduces `r`; cofactor degrees are capped by `degree_bound` (default
    /// `deg r`), raised once before giving up.
    pub fn reduce(&self, r: &Element, degree_bound: Option<u32>) -> Result<Reduction, PbwError> {
        if r.uea().id() != self.uea.id() {
            return Err(PbwError::AlgebraMismatch);
        }
        let bound = degree_bound.unwrap_or_else(|| r.degree());
        if let Some(out) = self.try_reduce(r, bound) {
            return Ok(out);
        }
        let max_rel = self.rels.iter().map(|x| x.degree).max().unwrap_or(0);
        let raised = bound + max_rel.max(1);
        if let Some(out) = self.try_reduce(r, raised) {
            return Ok(out);
        }
        Ok(Reduction {
            reduced: r.clone(),
            cofactors: self.rels.iter().map(|_| Element::zero(&self.uea)).collect(),
            status: ReductionStatus::NotReducedAtBound,
            bound: raised,
        })
    }

    fn try_reduce(&self, r: &Element, bound: u32) -> Option<Reduction> {
        let uea = &*self.uea;
        let mut work: BTreeMap<Vec<i32>, (Mono, Scalar)> = BTreeMap::new();
        for (m, c) in r.terms() {
            work.insert(order_key(uea, &self.ranking, m), (m.clone(), c.clone()));
        }
        let mut rem = Terms::new();
        let mut cof: Vec<Terms> = vec![Terms::new(); self.rels.len()];
        let mut iters = 0usize;
        while let Some((key, (m, c))) = work.pop_last() {
            iters += 1;
            if iters > ITERATION_CAP {
                return None;
            }
            let hit = self.rels.iter().enumerate().find(|(_, rel)| {
                m.exponents().iter().zip(rel.lm.exponents()).enumerate().all(|(i, (a, b))| {
                    if uea.is_invertible(i) {
                        *b == 0
                    } else {
                        a >= b
                    }
                })
            });
            let Some((t, rel)) = hit else {
                rem.insert(m, c);
                continue;
            };
            let q: Vec<i32> = m.exponents().iter().zip(rel.lm.exponents()).map(|(a, b)| a - b).collect();
            let q = Mono::from_exponents(&q);
            if q.degree() > bound {
                return None;
            }
            let coef = &c / &rel.lc;
            let mut qt = Terms::new();
            qt.insert(q.clone(), coef.clone());
            let prod = uea.mul_terms(&qt, rel.poly.terms());
            add_term(&mut cof[t], q, coef);
            work.insert(key, (m, c));
            for (pm, pc) in prod {
                let k = order_key(uea, &self.ranking, &pm);
                match work.get_mut(&k) {
                    Some(entry) => {
                        let v = &entry.1 - &pc;
                        if v.is_zero() {
                            work.remove(&k);
                        } else {
                            entry.1 = v;
                        }
                    }
                    None => {
                        work.insert(k, (pm, -pc));
                    }
                }
            }
        }
        Some(Reduction {
            reduced: Element::from_terms(&self.uea, rem),
            cofactors: cof.into_iter().map(|t| Element::from_terms(&self.uea, t)).collect(),
            status: ReductionStatus::Reduced,
            bound,
        })
    }

    /// `Σ q_t (C_t - c_t)` for the given cofactors.
    pub fn recombine(&self, cofactors: &[Element]) -> Element {
        let mut acc = Element::zero(&self.uea);
        for (q, rel) in cofactors.iter().zip(&self.rels) {
            acc = &acc + &(q * &rel.poly);
        }
        acc
    }
}

/// One-shot reduction of `r` modulo the central relations.
pub fn reduce_mod_center(
    r: &Element,
    relations: &[(Element, Scalar)],
    degree_bound: Option<u32>,
) -> Result<Reduction, PbwError> {
    Reducer::new(r.uea(), relations)?.reduce(r, degree_bound)
}
