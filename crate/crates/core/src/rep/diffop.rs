use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::coeff::{CoeffFn, OmegaField};
use super::spin::SpinBlock;
use super::RepError;
use crate::field::Scalar;

/// Exponents of `∂₁, ∂₂, ∂₃`.
pub type MultiIndex = [u32; 3];

type Mat = Vec<CoeffFn>;

/// `Σ_α M_α(p, ω) ∂^α` acting on `ℂⁿ`-valued functions of `p`, with
/// `M_α` an `n×n` matrix of [`CoeffFn`]. Derivatives always sit rightmost.
#[derive(Clone, Debug)]
pub struct DiffOp {
    field: Arc<OmegaField>,
    n: usize,
    terms: BTreeMap<MultiIndex, Mat>,
}

impl PartialEq for DiffOp {
    fn eq(&self, o: &DiffOp) -> bool {
        self.n == o.n && self.terms == o.terms
    }
}

fn zero_mat(n: usize) -> Mat {
    vec![CoeffFn::zero(); n * n]
}

fn is_zero_mat(m: &Mat) -> bool {
    m.iter().all(CoeffFn::is_zero)
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl DiffOp {
    pub fn zero(field: &Arc<OmegaField>, n: usize) -> DiffOp {
        DiffOp { field: field.clone(), n, terms: BTreeMap::new() }
    }

    /// Multiplication by `c·id`.
    pub fn coeff(field: &Arc<OmegaField>, n: usize, c: CoeffFn) -> DiffOp {
        DiffOp::coeff_partial(field, n, c, [0, 0, 0])
    }

    pub fn identity(field: &Arc<OmegaField>, n: usize) -> DiffOp {
        DiffOp::coeff(field, n, CoeffFn::one())
    }

    pub fn scalar(field: &Arc<OmegaField>, n: usize, c: Scalar) -> DiffOp {
        DiffOp::coeff(field, n, CoeffFn::scalar(c))
    }

    /// `c·id·∂^α`.
    pub fn coeff_partial(field: &Arc<OmegaField>, n: usize, c: CoeffFn, alpha: MultiIndex) -> DiffOp {
        let mut op = DiffOp::zero(field, n);
        if !c.is_zero() {
            let mut m = zero_mat(n);
            for i in 0..n {
                m[i * n + i] = c.clone();
            }
            op.terms.insert(alpha, m);
        }
        op
    }

    /// `∂ᵢ`.
    pub fn partial(field: &Arc<OmegaField>, n: usize, i: usize) -> DiffOp {
        let mut a = [0; 3];
        a[i] = 1;
        DiffOp::coeff_partial(field, n, CoeffFn::one(), a)
    }

    /// Multiplication by `pᵢ`.
    pub fn momentum(field: &Arc<OmegaField>, n: usize, i: usize) -> DiffOp {
        DiffOp::coeff(field, n, field.p(i))
    }

    /// Multiplication by a constant matrix.
    pub fn block(field: &Arc<OmegaField>, b: &SpinBlock) -> DiffOp {
        DiffOp::scalar(field, 1, Scalar::one()).tensor(b)
    }

    pub fn field(&self) -> &Arc<OmegaField> {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &[CoeffFn])> {
        self.terms.iter().map(|(a, m)| (a, m.as_slice()))
    }

    /// Entry `(i, j)` of the coefficient matrix of `∂^α`.
    pub fn entry(&self, alpha: &MultiIndex, i: usize, j: usize) -> CoeffFn {
        self.terms.get(alpha).map(|m| m[i * self.n + j].clone()).unwrap_or_default()
    }

    /// `Some(c)` when the operator is multiplication by `c·id`.
    pub fn as_scalar(&self) -> Option<CoeffFn> {
        match self.terms.len() {
            0 => Some(CoeffFn::zero()),
            1 => {
                let m = self.terms.get(&[0, 0, 0])?;
                let c = m[0].clone();
                let n = self.n;
                let ok = (0..n).all(|i| (0..n).all(|j| if i == j { m[i * n + j] == c } else { m[i * n + j].is_zero() }));
                ok.then_some(c)
            }
            _ => None,
        }
    }

    /// Scalar operator `A` (size 1) to `A ⊗ B`.
    pub fn tensor(&self, b: &SpinBlock) -> DiffOp {
        assert_eq!(self.n, 1, "tensor of a scalar operator");
        let n = b.size();
        let mut out = DiffOp::zero(&self.field, n);
        for (a, m) in &self.terms {
            let c = &m[0];
            let mut t = zero_mat(n);
            for i in 0..n {
                for j in 0..n {
                    let e = b.get(i, j);
                    if !e.is_zero() {
                        t[i * n + j] = c.scale(&Scalar::constant(e.clone()));
                    }
                }
            }
            if !is_zero_mat(&t) {
                out.terms.insert(*a, t);
            }
        }
        out
    }

    fn check(&self, o: &DiffOp) -> Result<(), RepError> {
        if self.n != o.n {
            return Err(RepError::SizeMismatch(self.n, o.n));
        }
        Ok(())
    }

    fn combine(&self, o: &DiffOp, sign: bool) -> Result<DiffOp, RepError> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (a, m) in &o.terms {
            let e = terms.entry(*a).or_insert_with(|| zero_mat(self.n));
            for (x, y) in e.iter_mut().zip(m) {
                *x = if sign { &*x - y } else { &*x + y };
            }
            if is_zero_mat(e) {
                terms.remove(a);
            }
        }
        Ok(DiffOp { field: self.field.clone(), n: self.n, terms })
    }

    pub fn try_add(&self, o: &DiffOp) -> Result<DiffOp, RepError> {
        self.combine(o, false)
    }

    pub fn try_sub(&self, o: &DiffOp) -> Result<DiffOp, RepError> {
        self.combine(o, true)
    }

    pub fn neg(&self) -> DiffOp {
        let terms = self.terms.iter().map(|(a, m)| (*a, m.iter().map(|c| -c).collect())).collect();
        DiffOp { field: self.field.clone(), n: self.n, terms }
    }

    /// `c·self`, with `c` a multiplication operator.
    pub fn scale(&self, c: &CoeffFn) -> DiffOp {
        let mut out = DiffOp::zero(&self.field, self.n);
        if c.is_zero() {
            return out;
        }
        for (a, m) in &self.terms {
            let t: Mat = m.iter().map(|x| if x.is_zero() { CoeffFn::zero() } else { self.field.mul(c, x) }).collect();
            if !is_zero_mat(&t) {
                out.terms.insert(*a, t);
            }
        }
        out
    }

    fn mat_mul(&self, x: &Mat, y: &Mat) -> Mat {
        let n = self.n;
        let mut out = zero_mat(n);
        for i in 0..n {
            for k in 0..n {
                let a = &x[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &y[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = &out[i * n + j] + &self.field.mul(a, b);
                    }
                }
            }
        }
        out
    }

    /// Composition `self ∘ o`, by Leibniz:
    /// `M∂^α ∘ N∂^β = Σ_{γ≤α} C(α,γ) M(∂^γN) ∂^{α−γ+β}`.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp, RepError> {
        self.check(o)?;
        let n = self.n;
        let mut acc: BTreeMap<MultiIndex, Mat> = BTreeMap::new();
        for (beta, nm) in &o.terms {
            let mut derivs: HashMap<MultiIndex, Mat> = HashMap::new();
            derivs.insert([0, 0, 0], nm.clone());
            for (alpha, mm) in &self.terms {
                for g0 in 0..=alpha[0] {
                    for g1 in 0..=alpha[1] {
                        for g2 in 0..=alpha[2] {
                            let g = [g0, g1, g2];
                            let d = self.derivative_of(&mut derivs, g);
                            if is_zero_mat(&d) {
                                continue;
                            }
                            let k = binom(alpha[0], g0) * binom(alpha[1], g1) * binom(alpha[2], g2);
                            let mut prod = self.mat_mul(mm, &d);
                            if k != 1 {
                                let s = Scalar::from_int(k);
                                prod.iter_mut().for_each(|c| *c = c.scale(&s));
                            }
                            let idx = [alpha[0] - g0 + beta[0], alpha[1] - g1 + beta[1], alpha[2] - g2 + beta[2]];
                            let e = acc.entry(idx).or_insert_with(|| zero_mat(n));
                            for (x, y) in e.iter_mut().zip(&prod) {
                                if !y.is_zero() {
                                    *x = &*x + y;
                                }
                            }
                        }
                    }
                }
            }
        }
        acc.retain(|_, m| !is_zero_mat(m));
        Ok(DiffOp { field: self.field.clone(), n, terms: acc })
    }

    fn derivative_of(&self, cache: &mut HashMap<MultiIndex, Mat>, g: MultiIndex) -> Mat {
        if let Some(m) = cache.get(&g) {
            return m.clone();
        }
        let v = (0..3).find(|&v| g[v] > 0).expect("nonzero index");
        let mut prev = g;
        prev[v] -= 1;
        let base = self.derivative_of(cache, prev);
        let d: Mat = base.iter().map(|c| self.field.derivative(c, v)).collect();
        cache.insert(g, d.clone());
        d
    }

    /// `self∘o − o∘self`.
    pub fn commutator(&self, o: &DiffOp) -> Result<DiffOp, RepError> {
        self.compose(o)?.try_sub(&o.compose(self)?)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let n = self.n;
        let mut parts = Vec::new();
        for (a, m) in &self.terms {
            let coeff = if n == 1 {
                format!("({})", m[0])
            } else {
                let rows: Vec<String> = (0..n)
                    .map(|i| (0..n).map(|j| m[i * n + j].to_string()).collect::<Vec<_>>().join(", "))
                    .collect();
                format!("[{}]", rows.join("; "))
            };
            let mut d = String::new();
            for (v, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => d.push_str(&format!("*∂{}", v + 1)),
                    _ => d.push_str(&format!("*∂{}^{e}", v + 1)),
                }
            }
            parts.push(format!("{coeff}{d}"));
        }
        parts.join(" + ")
    }
}
