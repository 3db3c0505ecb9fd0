//! Numeric spot checks by truncated Taylor jets.
//!
//! Each generator image is applied to a random polynomial test function as a
//! jet around a sample point, one operator at a time; words of operators are
//! never composed symbolically. With exact scalars the sample points are
//! chosen so that `ω` is rational.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::coeff::{CoeffFn, OmegaField};
use super::diffop::{DiffOp, MultiIndex};
use super::{RepError, SpinAffine};
use crate::field::{GaussRat, Poly, Scalar, Symbol};

/// Scalars the jets are built over.
pub trait JetScalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_gauss(c: &GaussRat) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Equality, up to the floating tolerance where there is one.
    fn agrees(&self, o: &Self) -> bool;
    fn render(&self) -> String;
}

impl JetScalar for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn one() -> Self {
        GaussRat::one()
    }
    fn from_gauss(c: &GaussRat) -> Self {
        c.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        GaussRat::inv(self)
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn agrees(&self, o: &Self) -> bool {
        self == o
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Relative tolerance of the floating-point fallback.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl JetScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_gauss(c: &GaussRat) -> Self {
        let (re, im) = c.to_f64_parts();
        Complex64::new(re, im)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| Complex64::new(1.0, 0.0) / self)
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
    fn agrees(&self, o: &Self) -> bool {
        (self - o).norm() <= FLOAT_TOLERANCE * self.norm().max(o.norm()).max(1.0)
    }
    fn render(&self) -> String {
        format!("{:.12e}{:+.12e}i", self.re, self.im)
    }
}

/// Monomials `x^a` with `|a| ≤ order`, and their products.
struct Shape {
    order: u32,
    monos: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    /// Sorted by the degree of the product slot.
    products: Vec<(usize, usize, usize)>,
    /// `cut[d]`: number of products landing in degree `≤ d`.
    cut: Vec<usize>,
}

impl Shape {
    fn new(order: u32) -> Shape {
        let mut monos = Vec::new();
        for d in 0..=order {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    monos.push([a, b, d - a - b]);
                }
            }
        }
        let index: HashMap<MultiIndex, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut products = Vec::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let c = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                if let Some(&k) = index.get(&c) {
                    products.push((i, j, k));
                }
            }
        }
        let deg = |k: usize| monos[k].iter().sum::<u32>() as usize;
        products.sort_by_key(|&(_, _, k)| deg(k));
        let cut = (0..=order as usize).map(|d| products.iter().filter(|p| deg(p.2) <= d).count()).collect();
        Shape { order, monos, index, products, cut }
    }

    fn len(&self) -> usize {
        self.monos.len()
    }
}

/// Truncated Taylor series in `x = p − p₀`.
#[derive(Clone, Debug)]
struct Jet<F>(Vec<F>);

impl Shape {
    fn constant<F: JetScalar>(&self, c: F) -> Jet<F> {
        let mut v = vec![F::zero(); self.len()];
        v[0] = c;
        Jet(v)
    }

    fn zero<F: JetScalar>(&self) -> Jet<F> {
        Jet(vec![F::zero(); self.len()])
    }

    fn add<F: JetScalar>(&self, a: &Jet<F>, b: &Jet<F>) -> Jet<F> {
        Jet(a.0.iter().zip(&b.0).map(|(x, y)| x.add(y)).collect())
    }

    fn scale<F: JetScalar>(&self, a: &Jet<F>, c: &F) -> Jet<F> {
        Jet(a.0.iter().map(|x| x.mul(c)).collect())
    }

    fn mul<F: JetScalar>(&self, a: &Jet<F>, b: &Jet<F>) -> Jet<F> {
        self.mul_upto(a, b, self.order)
    }

    /// Product with only degrees `≤ d` filled in.
    fn mul_upto<F: JetScalar>(&self, a: &Jet<F>, b: &Jet<F>, d: u32) -> Jet<F> {
        let mut out = vec![F::zero(); self.len()];
        for &(i, j, k) in &self.products[..self.cut[d as usize]] {
            if a.0[i].is_zero() || b.0[j].is_zero() {
                continue;
            }
            out[k] = out[k].add(&a.0[i].mul(&b.0[j]));
        }
        Jet(out)
    }

    /// `∂/∂xᵥ`; the top degree becomes unknown and is left zero.
    fn derivative<F: JetScalar>(&self, a: &Jet<F>, v: usize) -> Jet<F> {
        let mut out = vec![F::zero(); self.len()];
        for (i, m) in self.monos.iter().enumerate() {
            if m.iter().sum::<u32>() == self.order {
                continue;
            }
            let mut up = *m;
            up[v] += 1;
            let c = &a.0[self.index[&up]];
            if !c.is_zero() {
                out[i] = c.mul(&F::from_gauss(&GaussRat::from_int(up[v] as i64)));
            }
        }
        Jet(out)
    }

    fn inv<F: JetScalar>(&self, a: &Jet<F>) -> Option<Jet<F>> {
        // 1/(c + h) = (1/c) Σ (−h/c)^k
        let u = a.0[0].inv()?;
        let mut h = self.scale(a, &u);
        h.0[0] = F::zero();
        let minus_h = Jet(h.0.iter().map(|x| F::zero().sub(x)).collect());
        let mut acc = self.constant(F::one());
        let mut pow = self.constant(F::one());
        for _ in 0..self.order {
            pow = self.mul(&pow, &minus_h);
            acc = self.add(&acc, &pow);
        }
        Some(self.scale(&acc, &u))
    }

    /// `√a` given `√a(0) = root`, by the binomial series.
    fn sqrt<F: JetScalar>(&self, a: &Jet<F>, root: &F) -> Option<Jet<F>> {
        let u = a.0[0].inv()?;
        let mut h = self.scale(a, &u);
        h.0[0] = F::zero();
        let mut acc = self.constant(F::one());
        let mut pow = self.constant(F::one());
        let mut coef = GaussRat::one();
        for k in 0..self.order {
            coef = &(&coef * &GaussRat::from_frac(1 - 2 * k as i64, 2)) * &GaussRat::from_frac(1, k as i64 + 1);
            pow = self.mul(&pow, &h);
            acc = self.add(&acc, &self.scale(&pow, &F::from_gauss(&coef)));
        }
        Some(self.scale(&acc, root))
    }
}

/// A sample point: momenta, parameter values and `ω(p₀)`.
#[derive(Clone, Debug)]
pub struct Point<F> {
    pub momenta: [F; 3],
    pub values: HashMap<Symbol, F>,
    pub omega: F,
}

/// Evaluation context at one point and truncation order.
struct AtPoint<'a, F> {
    shape: Shape,
    field: &'a OmegaField,
    point: &'a Point<F>,
    omega: Jet<F>,
    monomials: RefCell<HashMap<MultiIndex, Jet<F>>>,
    scalars: RefCell<HashMap<Scalar, Jet<F>>>,
}

impl<'a, F: JetScalar> AtPoint<'a, F> {
    fn new(field: &'a OmegaField, point: &'a Point<F>, order: u32) -> Result<Self, RepError> {
        let shape = Shape::new(order);
        let mut at = AtPoint {
            shape,
            field,
            point,
            omega: Jet(Vec::new()),
            monomials: RefCell::new(HashMap::new()),
            scalars: RefCell::new(HashMap::new()),
        };
        let r = at.poly(field.radicand().numer())?;
        let d = at.poly(field.radicand().denom())?;
        let r = at.shape.mul(&r, &at.shape.inv(&d).ok_or_else(|| singular("radicand"))?);
        at.omega = at.shape.sqrt(&r, &point.omega).ok_or_else(|| singular("ω"))?;
        Ok(at)
    }

    /// Jet of `(p₀ + x)^a`.
    fn monomial(&self, a: MultiIndex) -> Jet<F> {
        if let Some(j) = self.monomials.borrow().get(&a) {
            return j.clone();
        }
        let j = match (0..3).find(|&v| a[v] > 0) {
            None => self.shape.constant(F::one()),
            Some(v) => {
                let mut prev = a;
                prev[v] -= 1;
                let mut lin = self.shape.constant(self.point.momenta[v].clone());
                let mut e = [0; 3];
                e[v] = 1;
                if let Some(&k) = self.shape.index.get(&e) {
                    lin.0[k] = F::one();
                }
                self.shape.mul(&self.monomial(prev), &lin)
            }
        };
        self.monomials.borrow_mut().insert(a, j.clone());
        j
    }

    fn poly(&self, p: &Poly) -> Result<Jet<F>, RepError> {
        let momenta = self.field.momenta();
        // group terms by their momentum part, parameters folded into constants
        let mut groups: HashMap<MultiIndex, F> = HashMap::new();
        for (m, c) in p.terms() {
            let mut a = [0; 3];
            let mut k = F::from_gauss(c);
            for &(v, e) in m.iter() {
                match momenta.iter().position(|&x| x == v) {
                    Some(i) => a[i] = e,
                    None => {
                        let x = self.point.values.get(&v).ok_or_else(|| RepError::UnboundSymbol(v.name().to_string()))?;
                        for _ in 0..e {
                            k = k.mul(x);
                        }
                    }
                }
            }
            let slot = groups.entry(a).or_insert_with(F::zero);
            *slot = slot.add(&k);
        }
        let mut acc = self.shape.zero();
        for (a, k) in groups {
            acc = self.shape.add(&acc, &self.shape.scale(&self.monomial(a), &k));
        }
        Ok(acc)
    }

    fn scalar(&self, s: &Scalar) -> Result<Jet<F>, RepError> {
        if let Some(j) = self.scalars.borrow().get(s) {
            return Ok(j.clone());
        }
        let n = self.poly(s.numer())?;
        let j = if s.denom().is_one() {
            n
        } else {
            let d = self.shape.inv(&self.poly(s.denom())?).ok_or_else(|| singular(&s.to_string()))?;
            self.shape.mul(&n, &d)
        };
        self.scalars.borrow_mut().insert(s.clone(), j.clone());
        Ok(j)
    }

    fn coeff(&self, c: &CoeffFn) -> Result<Jet<F>, RepError> {
        let a = self.scalar(c.rational_part())?;
        if c.omega_part().is_zero() {
            return Ok(a);
        }
        let b = self.scalar(c.omega_part())?;
        Ok(self.shape.add(&a, &self.shape.mul(&b, &self.omega)))
    }
}

fn singular(what: &str) -> RepError {
    RepError::Singular(what.to_string())
}

/// An operator on `n` components at a point: `Σ_α M_α ∂^α`.
struct JetOp<F> {
    n: usize,
    order: u32,
    terms: Vec<(MultiIndex, Vec<Option<Jet<F>>>)>,
}

/// Where an operator's coefficients come from.
pub enum Source<'a, F> {
    Exact(&'a DiffOp),
    /// Scalar operators tensored with numeric spin matrices.
    Affine(&'a SpinAffine, &'a [Vec<F>; 3]),
}

impl<'a, F: JetScalar> AtPoint<'a, F> {
    fn op(&self, src: &Source<'_, F>) -> Result<JetOp<F>, RepError> {
        match src {
            Source::Exact(d) => {
                let n = d.size();
                let mut terms = Vec::new();
                for (a, m) in d.terms() {
                    let mut ent = Vec::with_capacity(n * n);
                    for c in m {
                        ent.push(if c.is_zero() { None } else { Some(self.coeff(c)?) });
                    }
                    terms.push((*a, ent));
                }
                Ok(JetOp { n, order: d.order(), terms })
            }
            Source::Affine(aff, mats) => {
                let n = (mats[0].len() as f64).sqrt().round() as usize;
                let mut acc: HashMap<MultiIndex, Vec<Option<Jet<F>>>> = HashMap::new();
                let mut put = |a: MultiIndex, i: usize, j: usize, v: Jet<F>| {
                    let e = acc.entry(a).or_insert_with(|| vec![None; n * n]);
                    e[i * n + j] = Some(match e[i * n + j].take() {
                        Some(x) => self.shape.add(&x, &v),
                        None => v,
                    });
                };
                for (a, m) in aff.base.terms() {
                    let c = self.coeff(&m[0])?;
                    for i in 0..n {
                        put(*a, i, i, c.clone());
                    }
                }
                for (k, op) in aff.spin.iter().enumerate() {
                    for (a, m) in op.terms() {
                        let c = self.coeff(&m[0])?;
                        for i in 0..n {
                            for j in 0..n {
                                let s = &mats[k][i * n + j];
                                if !s.is_zero() {
                                    put(*a, i, j, self.shape.scale(&c, s));
                                }
                            }
                        }
                    }
                }
                let mut terms: Vec<_> = acc.into_iter().collect();
                terms.sort_by_key(|x| x.0);
                let order = terms.iter().map(|(a, _)| a.iter().sum::<u32>()).max().unwrap_or(0);
                Ok(JetOp { n, order, terms })
            }
        }
    }

    /// `op f`, correct in degrees `≤ limit`.
    fn apply(&self, op: &JetOp<F>, f: &[Jet<F>], limit: u32) -> Vec<Jet<F>> {
        let n = op.n;
        let mut out: Vec<Jet<F>> = (0..n).map(|_| self.shape.zero()).collect();
        for (alpha, m) in &op.terms {
            let df: Vec<Jet<F>> = f
                .iter()
                .map(|g| {
                    let mut g = g.clone();
                    for (v, &e) in alpha.iter().enumerate() {
                        for _ in 0..e {
                            g = self.shape.derivative(&g, v);
                        }
                    }
                    g
                })
                .collect();
            for i in 0..n {
                for j in 0..n {
                    if let Some(c) = &m[i * n + j] {
                        out[i] = self.shape.add(&out[i], &self.shape.mul_upto(c, &df[j], limit));
                    }
                }
            }
        }
        out
    }
}

/// `Σ c·w₁∘w₂∘…` with `wᵢ` indices into the operator list; the empty word
/// is the identity.
pub type Words = Vec<(Scalar, Vec<usize>)>;

/// One spot-checked identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpotCheck {
    pub name: String,
    pub points: usize,
    /// First disagreement, rendered.
    pub witness: Option<String>,
}

impl SpotCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Evaluates `lhs` and `rhs` at `points`, each against a fresh random
/// polynomial test function, and compares values at the point.
pub fn spot_check<F: JetScalar>(
    field: &OmegaField,
    ops: &[Source<'_, F>],
    identities: &[(String, Words, Words)],
    points: &[Point<F>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SpotCheck>, RepError> {
    let orders: Vec<u32> = ops
        .iter()
        .map(|s| match s {
            Source::Exact(d) => d.order(),
            Source::Affine(a, _) => a.spin.iter().map(DiffOp::order).chain([a.base.order()]).max().unwrap_or(0),
        })
        .collect();
    let word_order = |w: &Words| w.iter().map(|(_, x)| x.iter().map(|&i| orders[i]).sum::<u32>()).max().unwrap_or(0);
    let order = identities.iter().map(|(_, l, r)| word_order(l).max(word_order(r))).max().unwrap_or(0);
    let mut out: Vec<SpotCheck> =
        identities.iter().map(|(n, _, _)| SpotCheck { name: n.clone(), points: 0, witness: None }).collect();
    for point in points {
        let at = AtPoint::new(field, point, order)?;
        let jops: Vec<JetOp<F>> = ops.iter().map(|s| at.op(s)).collect::<Result<_, _>>()?;
        let n = jops.first().map(|o| o.n).unwrap_or(1);
        let f: Vec<Jet<F>> = (0..n).map(|_| random_jet(&at.shape, rng)).collect();
        let mut memo: HashMap<Vec<usize>, Vec<Jet<F>>> = HashMap::new();
        for ((_, lhs, rhs), check) in identities.iter().zip(out.iter_mut()) {
            let l = eval_words(&at, &jops, lhs, &f, &mut memo)?;
            let r = eval_words(&at, &jops, rhs, &f, &mut memo)?;
            check.points += 1;
            if check.witness.is_none() {
                if let Some(k) = (0..n).find(|&k| !l[k].agrees(&r[k])) {
                    check.witness = Some(format!(
                        "component {k} at p = ({}): {} ≠ {}",
                        point.momenta.iter().map(F::render).collect::<Vec<_>>().join(", "),
                        l[k].render(),
                        r[k].render()
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn random_jet<F: JetScalar>(shape: &Shape, rng: &mut ChaCha8Rng) -> Jet<F> {
    Jet((0..shape.len()).map(|_| F::from_gauss(&GaussRat::from_int(rng.gen_range(-5..=5)))).collect())
}

fn eval_words<F: JetScalar>(
    at: &AtPoint<'_, F>,
    ops: &[JetOp<F>],
    words: &Words,
    f: &[Jet<F>],
    memo: &mut HashMap<Vec<usize>, Vec<Jet<F>>>,
) -> Result<Vec<F>, RepError> {
    let n = f.len();
    let mut acc = vec![F::zero(); n];
    for (c, w) in words {
        let c = at.scalar(c)?.0[0].clone();
        // rightmost operator acts first; suffixes are shared across words
        let mut cur = f.to_vec();
        let mut limit = at.shape.order;
        for start in (0..w.len()).rev() {
            limit = limit.saturating_sub(ops[w[start]].order);
            let key = w[start..].to_vec();
            cur = match memo.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = at.apply(&ops[w[start]], &cur, limit);
                    memo.insert(key, v.clone());
                    v
                }
            };
        }
        for k in 0..n {
            acc[k] = acc[k].add(&c.mul(&cur[k].0[0]));
        }
    }
    Ok(acc)
}

/// Small integers keep the jet arithmetic cheap; the identities are
/// polynomial in the sample values, so height does not matter for coverage.
fn small_int(rng: &mut ChaCha8Rng, nonzero: bool) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-3..=3);
        if !(nonzero && n == 0) {
            return BigRational::from_integer(BigInt::from(n));
        }
    }
}

fn g(x: BigRational) -> GaussRat {
    GaussRat::from_rational(x)
}

/// Exact points where `ω = √(p² + m²/γ²)` is rational: for `s > 0`,
/// `ω = (s + p²/s)/2` and `m/γ = (p²/s − s)/2`. `mass` and `gamma` name the
/// free symbols (either may be absent when fixed by a number).
pub fn exact_points(
    rng: &mut ChaCha8Rng,
    count: usize,
    mass: &Scalar,
    gamma: &Scalar,
    free: &[Symbol],
) -> Result<Vec<Point<GaussRat>>, RepError> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 1000 * count.max(1) {
            return Err(RepError::Singular("no admissible sample point".into()));
        }
        let p: [BigRational; 3] = std::array::from_fn(|_| small_int(rng, false));
        let p2: BigRational = p.iter().map(|x| x * x).sum();
        let s = small_int(rng, true).abs();
        let ratio = (&p2 / &s - &s) / BigRational::from_integer(2.into());
        if p2 == BigRational::from_integer(0.into()) || ratio == BigRational::from_integer(0.into()) {
            continue;
        }
        let omega = (&s + &p2 / &s) / BigRational::from_integer(2.into());
        let mut values: HashMap<Symbol, GaussRat> = HashMap::new();
        for &x in free {
            values.insert(x, g(small_int(rng, true)));
        }
        // tie m and γ through m/γ = ratio
        match (mass.as_constant(), gamma.as_constant()) {
            (None, _) => {
                let gam = match gamma.as_constant() {
                    Some(c) => c,
                    None => values[&single_symbol(gamma)?].clone(),
                };
                values.insert(single_symbol(mass)?, &gam * &g(ratio));
            }
            (Some(mv), None) => {
                values.insert(single_symbol(gamma)?, &mv * &g(ratio).inv().expect("nonzero"));
            }
            (Some(_), Some(_)) => return Err(RepError::Singular("m and γ both fixed".into())),
        }
        out.push(Point { momenta: p.map(g), values, omega: g(omega) });
    }
    Ok(out)
}

fn single_symbol(s: &Scalar) -> Result<Symbol, RepError> {
    let vars = s.vars();
    match (vars.len(), vars.iter().next()) {
        (1, Some(&v)) if *s == Scalar::from_symbol(v) => Ok(v),
        _ => Err(RepError::Singular(format!("{s} is not a bare parameter"))),
    }
}

/// Floating-point points; `ω` is the principal root.
pub fn float_points(
    rng: &mut ChaCha8Rng,
    count: usize,
    field: &OmegaField,
    free: &[Symbol],
) -> Result<Vec<Point<Complex64>>, RepError> {
    let mut out = Vec::new();
    while out.len() < count {
        let p: [Complex64; 3] = std::array::from_fn(|_| Complex64::new(rng.gen_range(-2.0..2.0), 0.0));
        let mut values = HashMap::new();
        for &x in free {
            let mag: f64 = rng.gen_range(0.5..2.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            values.insert(x, Complex64::new(sign * mag, 0.0));
        }
        let mut point = Point { momenta: p, values, omega: Complex64::new(1.0, 0.0) };
        let at = AtPoint::new(field, &point, 0);
        // ω is only needed as a constant here; recompute from the radicand
        let r = match at {
            Ok(a) => a.scalar(field.radicand())?.0[0],
            Err(_) => continue,
        };
        if r.norm() < 1e-6 {
            continue;
        }
        point.omega = r.sqrt();
        out.push(point);
    }
    Ok(out)
}
