//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Terms are kept sorted in decreasing graded-lexicographic order, where the
//! variable priority follows symbol names (`a` outranks `b`). Zero
//! coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use smallvec::SmallVec;

use super::gauss::GaussRat;
use super::symbol::Symbol;

/// Monomial in the parameters: `(symbol, exponent)` pairs sorted by symbol.
pub type PMono = SmallVec<[(Symbol, u32); 4]>;

pub fn mono_degree(m: &PMono) -> u32 {
    m.iter().map(|(_, e)| *e).sum()
}

/// Graded lexicographic comparison.
pub fn mono_cmp(a: &PMono, b: &PMono) -> Ordering {
    let da = mono_degree(a);
    let db = mono_degree(b);
    if da != db {
        return da.cmp(&db);
    }
    let mut i = 0;
    let mut j = 0;
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => {
                if va == vb {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                } else if va < vb {
                    return Ordering::Greater;
                } else {
                    return Ordering::Less;
                }
            }
        }
    }
}

pub fn mono_mul(a: &PMono, b: &PMono) -> PMono {
    let mut out = PMono::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                out.push((x.0, x.1 + y.1));
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) => {
                if x.0 < y.0 {
                    out.push(*x);
                    i += 1;
                } else {
                    out.push(*y);
                    j += 1;
                }
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// `a / b` when `b` divides `a`.
pub fn mono_div(a: &PMono, b: &PMono) -> Option<PMono> {
    let mut out = PMono::new();
    let mut j = 0;
    for &(v, e) in a.iter() {
        if let Some(&(w, f)) = b.get(j) {
            if w < v {
                return None;
            }
            if w == v {
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
                continue;
            }
        }
        out.push((v, e));
    }
    if j < b.len() {
        return None;
    }
    Some(out)
}

pub fn mono_gcd(a: &PMono, b: &PMono) -> PMono {
    let mut out = PMono::new();
    let mut j = 0;
    for &(v, e) in a.iter() {
        while j < b.len() && b[j].0 < v {
            j += 1;
        }
        if j < b.len() && b[j].0 == v {
            out.push((v, e.min(b[j].1)));
        }
    }
    out
}

pub fn mono_exponent(m: &PMono, x: Symbol) -> u32 {
    m.iter().find(|(v, _)| *v == x).map(|(_, e)| *e).unwrap_or(0)
}

fn mono_without(m: &PMono, x: Symbol) -> PMono {
    m.iter().filter(|(v, _)| *v != x).copied().collect()
}

fn mono_with(m: &PMono, x: Symbol, e: u32) -> PMono {
    if e == 0 {
        return m.clone();
    }
    mono_mul(m, &smallvec::smallvec![(x, e)])
}

/// Target ring for polynomial evaluation.
pub trait EvalRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn from_coeff(c: &GaussRat) -> Self;
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(PMono, GaussRat)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(PMono::new(), c)] }
        }
    }

    pub fn var(x: Symbol) -> Poly {
        Poly { terms: vec![(smallvec::smallvec![(x, 1)], GaussRat::one())] }
    }

    pub fn monomial(m: PMono, c: GaussRat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(mut terms: Vec<(PMono, GaussRat)>) -> Poly {
        terms.sort_by(|a, b| mono_cmp(&b.0, &a.0));
        let mut out: Vec<(PMono, GaussRat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += &c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(PMono, GaussRat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_empty())
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            Some(GaussRat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(PMono, GaussRat)> {
        self.terms.first()
    }

    pub fn lc(&self) -> GaussRat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(GaussRat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| mono_degree(m)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        self.terms.iter().flat_map(|(m, _)| m.iter().map(|(v, _)| *v)).collect()
    }

    pub fn contains_var(&self, x: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.iter().any(|(v, _)| *v == x))
    }

    pub fn degree_in(&self, x: Symbol) -> u32 {
        self.terms.iter().map(|(m, _)| mono_exponent(m, x)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_term(&self, m: &PMono, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplying every monomial by the same monomial preserves the order
        Poly { terms: self.terms.iter().map(|(n, d)| (mono_mul(n, m), d * c)).collect() }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match mono_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: BTreeMap<MonoKey, GaussRat> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let k = MonoKey(mono_mul(m, n));
                let v = c * d;
                match acc.get_mut(&k) {
                    Some(x) => *x += &v,
                    None => {
                        acc.insert(k, v);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.0, c))
            .collect();
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.inv().expect("nonzero leading coefficient"))
    }

    /// Gcd of all monomials (the largest monomial dividing every term).
    pub fn mono_content(&self) -> PMono {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return PMono::new();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_empty() {
                break;
            }
            g = mono_gcd(&g, m);
        }
        g
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.inv()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((mono_div(m, dm)?, c * &inv));
            }
            return Some(Poly { terms });
        }
        let (dlm, dlc) = d.terms[0].clone();
        let dinv = dlc.inv()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((lm, lc)) = r.terms.first().cloned() {
            let m = mono_div(&lm, &dlm)?;
            let c = &lc * &dinv;
            r = r.sub(&d.mul_term(&m, &c));
            q.push((m, c));
        }
        Some(Poly::from_terms(q))
    }

    pub fn div_mono(&self, m: &PMono) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            terms.push((mono_div(n, m)?, c.clone()));
        }
        Some(Poly { terms })
    }

    /// Coefficients as a polynomial in `x`: index k holds the coefficient of `x^k`.
    pub fn split_in(&self, x: Symbol) -> Vec<Poly> {
        let deg = self.degree_in(x) as usize;
        let mut buckets: Vec<Vec<(PMono, GaussRat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = mono_exponent(m, x) as usize;
            buckets[e].push((mono_without(m, x), c.clone()));
        }
        // removing one variable from every term of a bucket keeps them distinct
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn join_in(x: Symbol, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                terms.push((mono_with(m, x, k as u32), v.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn derivative(&self, x: Symbol) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = mono_exponent(m, x);
            if e == 0 {
                continue;
            }
            let mut n = mono_without(m, x);
            if e > 1 {
                n = mono_with(&n, x, e - 1);
            }
            terms.push((n, c * &GaussRat::from_int(e as i64)));
        }
        Poly::from_terms(terms)
    }

    /// Evaluates the polynomial in another ring, mapping each variable through `var`.
    pub fn eval<R: EvalRing>(&self, var: &dyn Fn(Symbol) -> R) -> R {
        let mut powers: HashMap<(Symbol, u32), R> = HashMap::new();
        let mut base: HashMap<Symbol, R> = HashMap::new();
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_coeff(c);
            for &(v, e) in m.iter() {
                let p = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let b = base.entry(v).or_insert_with(|| var(v)).clone();
                        let mut p = b.clone();
                        for _ in 1..e {
                            p = p.ring_mul(&b);
                        }
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                t = t.ring_mul(&p);
            }
            acc = acc.ring_add(&t);
        }
        acc
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        gcd_rec(a, b).monic()
    }
}

#[derive(PartialEq, Eq)]
struct MonoKey(PMono);

impl PartialOrd for MonoKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonoKey {
    fn cmp(&self, other: &Self) -> Ordering {
        mono_cmp(&self.0, &other.0)
    }
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let g = mono_gcd(&m.terms[0].0, &other.mono_content());
        return Poly::monomial(g, GaussRat::one());
    }
    if a == b {
        return a.clone();
    }
    // pull out the monomial parts first, they are cheap
    let ma = a.mono_content();
    let mb = b.mono_content();
    let mg = mono_gcd(&ma, &mb);
    let a1 = a.div_mono(&ma).expect("monomial content divides");
    let b1 = b.div_mono(&mb).expect("monomial content divides");
    let rest = gcd_primitive(&a1, &b1);
    rest.mul_term(&mg, &GaussRat::one())
}

fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.vars();
    let vb = b.vars();
    // a variable present in only one argument cannot occur in the gcd
    if let Some(x) = va.iter().find(|v| !vb.contains(v)) {
        let c = content_in(a, *x);
        return gcd_rec(&c, b);
    }
    if let Some(x) = vb.iter().find(|v| !va.contains(v)) {
        let c = content_in(b, *x);
        return gcd_rec(a, &c);
    }
    let x = *va.iter().next().expect("non-constant polynomial has a variable");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let gc = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut r0, mut r1) = if pa.degree_in(x) >= pb.degree_in(x) { (pa, pb) } else { (pb, pa) };
    loop {
        if r1.degree_in(x) == 0 {
            // r1 primitive of degree 0 in x is a unit, unless it is zero
            return gc;
        }
        let r = prem_in(&r0, &r1, x);
        if r.is_zero() {
            break;
        }
        let r = primitive_in(&r, x);
        r0 = r1;
        r1 = r;
    }
    let g = primitive_in(&r1, x);
    gc.mul(&g)
}

fn content_in(p: &Poly, x: Symbol) -> Poly {
    let coeffs = p.split_in(x);
    let mut g = Poly::zero();
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

fn primitive_in(p: &Poly, x: Symbol) -> Poly {
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` with respect to `x`.
fn prem_in(a: &Poly, b: &Poly, x: Symbol) -> Poly {
    let db = b.degree_in(x);
    let bs = b.split_in(x);
    let lcb = bs[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lcr = r.split_in(x)[dr as usize].clone();
        let shift: PMono = if dr > db { smallvec::smallvec![(x, dr - db)] } else { PMono::new() };
        let t = b.mul(&lcr).mul_term(&shift, &GaussRat::one());
        r = r.mul(&lcb).sub(&t);
    }
    r
}
