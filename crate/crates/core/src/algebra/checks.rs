use std::collections::HashMap;

use super::def::{AlgebraDef, CartanSplit, Involution, Pattern};
use crate::field::{Scalar, Symbol};
use crate::pbw::{Element, Terms};

/// A located failure: the generators involved and the nonzero witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub at: Vec<String>,
    pub witness: Element,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn new(check: impl Into<String>) -> CheckReport {
        CheckReport { check: check.into(), failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, at: &[&str], witness: Element) {
        self.failures.push(Failure { at: at.iter().map(|s| s.to_string()).collect(), witness });
    }
}

/// Cyclic sum `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` over every triple.
pub fn check_jacobi(def: &AlgebraDef) -> CheckReport {
    let u = &def.uea;
    let n = u.n();
    let g: Vec<Element> = (0..n).map(|i| Element::gen(u, i)).collect();
    let mut r = CheckReport::new("jacobi");
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (&g[i], &g[j], &g[k]);
                let s = &(&x.commutator(&y.commutator(z)) + &y.commutator(&z.commutator(x)))
                    + &z.commutator(&x.commutator(y));
                if !s.is_zero() {
                    r.fail(&[u.name(i), u.name(j), u.name(k)], s);
                }
            }
        }
    }
    r
}

/// `[c, g] = 0` for every generator `g`.
pub fn check_central(def: &AlgebraDef, name: &str, c: &Element) -> CheckReport {
    let u = &def.uea;
    let mut r = CheckReport::new(format!("central {name}"));
    for i in 0..u.n() {
        let w = c.commutator(&Element::gen(u, i));
        if !w.is_zero() {
            r.fail(&[name, u.name(i)], w);
        }
    }
    r
}

pub fn check_casimirs(def: &AlgebraDef) -> CheckReport {
    let mut r = CheckReport::new("casimirs");
    for c in &def.casimirs {
        r.failures.extend(check_central(def, &c.name, &c.element).failures);
    }
    r
}

/// Part of `t` supported outside the generator slots in `allowed`.
fn outside(t: &Terms, allowed: &[usize]) -> Terms {
    t.iter()
        .filter(|(m, _)| match m.first_slot() {
            Some(s) => !allowed.contains(&s),
            None => true,
        })
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

/// Checks `[𝔥,𝔥] ⊂ 𝔥`, `[𝔥,𝔭] ⊂ 𝔭` and the declared `[𝔭,𝔭]` pattern.
pub fn check_cartan(def: &AlgebraDef, split: &CartanSplit) -> CheckReport {
    let u = &def.uea;
    let mut r = CheckReport::new(format!("cartan {}", split.label));
    let mut all: Vec<usize> = split.p.iter().chain(&split.h).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != split.p.len() + split.h.len() || all != (0..u.n()).collect::<Vec<_>>() {
        r.fail(&["partition"], Element::zero(u));
        return r;
    }
    let empty: Vec<usize> = Vec::new();
    let pp_allowed = match split.pattern {
        Pattern::Zero => &empty,
        Pattern::SubH => &split.h,
    };
    let cases: [(&[usize], &[usize], &[usize]); 3] =
        [(&split.h, &split.h, &split.h), (&split.h, &split.p, &split.p), (&split.p, &split.p, pp_allowed)];
    for (a, b, allowed) in cases {
        for &x in a {
            for &y in b {
                if x >= y && std::ptr::eq(a, b) {
                    continue;
                }
                let bad = outside(u.bracket(x, y), allowed);
                if !bad.is_empty() {
                    r.fail(&[u.name(x), u.name(y)], Element::from_terms(u, bad));
                }
            }
        }
    }
    r
}

/// `σ∘σ = id` on generators and `[σx, σy] = σ[x, y]`.
pub fn check_involution(def: &AlgebraDef, inv: &Involution) -> CheckReport {
    let u = &def.uea;
    let n = u.n();
    let mut r = CheckReport::new(format!("involution {}", inv.name));
    if inv.image.len() != n {
        r.fail(&["arity"], Element::zero(u));
        return r;
    }
    let g: Vec<Element> = (0..n).map(|i| Element::gen(u, i)).collect();
    for i in 0..n {
        let back = &inv.apply(&inv.apply(&g[i])) - &g[i];
        if !back.is_zero() {
            r.fail(&[u.name(i), u.name(i)], back);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let lhs = inv.apply(&g[i]).commutator(&inv.apply(&g[j]));
            let rhs = inv.apply(&g[i].commutator(&g[j]));
            let w = &lhs - &rhs;
            if !w.is_zero() {
                r.fail(&[u.name(i), u.name(j)], w);
            }
        }
    }
    r
}

/// Brackets of `deformed` with `param → 0` must match those of `contracted`,
/// generators matched by name. Catches a stray term that survives the limit.
pub fn check_contraction(deformed: &AlgebraDef, contracted: &AlgebraDef, param: &str) -> CheckReport {
    let mut r = CheckReport::new(format!("contraction {param}→0"));
    let du = &deformed.uea;
    let cu = &contracted.uea;
    let mut zero = HashMap::new();
    zero.insert(Symbol::new(param), Scalar::zero());
    let names = cu.names();
    for (a, x) in names.iter().enumerate() {
        for (b, y) in names.iter().enumerate().skip(a + 1) {
            let (Some(i), Some(j)) = (du.index_of(x), du.index_of(y)) else {
                r.fail(&[x, y], Element::zero(cu));
                continue;
            };
            let lim = Element::from_terms(du, du.bracket(i, j).clone()).subs(&zero);
            let lim = match lim.map(|e| e.transfer(cu)) {
                Ok(Ok(e)) => e,
                _ => {
                    r.fail(&[x, y], Element::zero(cu));
                    continue;
                }
            };
            let want = Element::from_terms(cu, cu.bracket(a, b).clone());
            let w = &lim - &want;
            if !w.is_zero() {
                r.fail(&[x, y], w);
            }
        }
    }
    r
}

/// Every check for the definition's declared metadata.
pub fn check_all(def: &AlgebraDef) -> Vec<CheckReport> {
    let mut out = vec![check_jacobi(def), check_casimirs(def)];
    out.extend(def.cartans.iter().map(|c| check_cartan(def, c)));
    out.extend(def.involutions.iter().map(|i| check_involution(def, i)));
    out
}
