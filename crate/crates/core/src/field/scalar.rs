//! Canonical rational functions over the Gaussian rationals.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussRat;
use super::poly::{mono_gcd, EvalRing, PMono, Poly};
use super::symbol::Symbol;
use super::FieldError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Inner {
    num: Poly,
    den: Poly,
}

/// A rational function `num / den` kept in canonical form: the fraction is
/// reduced and the leading coefficient of `den` is 1, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Arc<Inner>);

impl Scalar {
    fn raw(num: Poly, den: Poly) -> Scalar {
        Scalar(Arc::new(Inner { num, den }))
    }

    pub fn zero() -> Scalar {
        Scalar::raw(Poly::zero(), Poly::one())
    }

    pub fn one() -> Scalar {
        Scalar::raw(Poly::one(), Poly::one())
    }

    pub fn i() -> Scalar {
        Scalar::constant(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::constant(GaussRat::from_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Scalar {
        Scalar::constant(GaussRat::from_frac(n, d))
    }

    pub fn constant(c: GaussRat) -> Scalar {
        Scalar::raw(Poly::constant(c), Poly::one())
    }

    pub fn var(name: &str) -> Scalar {
        Scalar::from_symbol(Symbol::new(name))
    }

    pub fn from_symbol(x: Symbol) -> Scalar {
        Scalar::raw(Poly::var(x), Poly::one())
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar::raw(p, Poly::one())
    }

    /// Builds `num / den`, reducing to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Scalar, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn numer(&self) -> &Poly {
        &self.0.num
    }

    pub fn denom(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    /// The value when the scalar is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.0.den.is_one() {
            self.0.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Symbol> {
        let mut v = self.0.num.vars();
        v.extend(self.0.den.vars());
        v
    }

    pub fn contains_var(&self, x: Symbol) -> bool {
        self.0.num.contains_var(x) || self.0.den.contains_var(x)
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(normalize(self.0.den.clone(), self.0.num.clone()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar::raw(self.0.num.scale(c), self.0.den.clone())
    }

    pub fn powi(&self, e: i32) -> Result<Scalar, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of symbols by scalars.
    pub fn subs(&self, bindings: &HashMap<Symbol, Scalar>) -> Result<Scalar, FieldError> {
        if bindings.is_empty() || !self.vars().iter().any(|v| bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let f = |x: Symbol| bindings.get(&x).cloned().unwrap_or_else(|| Scalar::from_symbol(x));
        let n = self.0.num.eval(&f);
        let d = self.0.den.eval(&f);
        n.checked_div(&d)
    }

    pub fn subs_one(&self, x: Symbol, v: &Scalar) -> Result<Scalar, FieldError> {
        let mut b = HashMap::new();
        b.insert(x, v.clone());
        self.subs(&b)
    }

    pub fn derivative(&self, x: Symbol) -> Scalar {
        let n = &self.0.num;
        let d = &self.0.den;
        if d.is_one() {
            return Scalar::from_poly(n.derivative(x));
        }
        let top = n.derivative(x).mul(d).sub(&n.mul(&d.derivative(x)));
        normalize(top, d.mul(d))
    }

    /// Rewrites every power `x^k` with `k ≥ 2` using `x² = value`.
    pub fn reduce_square(&self, x: Symbol, value: &Scalar) -> Scalar {
        let n = reduce_square_poly(&self.0.num, x, value);
        let d = reduce_square_poly(&self.0.den, x, value);
        &n / &d
    }

    /// Exact square root when the scalar is `±c·m²/(c'·m'²)` with rational
    /// `c, c'` squares and monomial `m, m'`.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        let root = |p: &Poly| -> Option<Poly> {
            if !p.is_monomial() {
                return None;
            }
            let (m, c) = &p.terms()[0];
            let mut r = PMono::new();
            for &(v, e) in m.iter() {
                if e % 2 != 0 {
                    return None;
                }
                r.push((v, e / 2));
            }
            Some(Poly::monomial(r, c.sqrt_exact()?))
        };
        let n = root(&self.0.num)?;
        let d = root(&self.0.den)?;
        Some(normalize(n, d))
    }

    pub fn is_negative_lead(&self) -> bool {
        self.0.num.lc().is_negative_lead()
    }
}

fn reduce_square_poly(p: &Poly, x: Symbol, value: &Scalar) -> Scalar {
    if p.degree_in(x) < 2 {
        return Scalar::from_poly(p.clone());
    }
    let parts = p.split_in(x);
    let xs = Scalar::from_symbol(x);
    let mut acc = Scalar::zero();
    let mut pow = Scalar::one();
    for (k, c) in parts.iter().enumerate() {
        if k > 0 && k % 2 == 0 {
            pow = &pow * value;
        }
        if c.is_zero() {
            continue;
        }
        let mut t = &Scalar::from_poly(c.clone()) * &pow;
        if k % 2 == 1 {
            t = &t * &xs;
        }
        acc = &acc + &t;
    }
    acc
}

fn normalize(num: Poly, den: Poly) -> Scalar {
    if num.is_zero() {
        return Scalar::zero();
    }
    if let Some(c) = den.constant_value() {
        let inv = c.inv().expect("nonzero denominator");
        return Scalar::raw(num.scale(&inv), Poly::one());
    }
    let (num, den) = if den.is_monomial() {
        let dm = den.terms()[0].0.clone();
        let g = mono_gcd(&dm, &num.mono_content());
        if g.is_empty() {
            (num, den)
        } else {
            (num.div_mono(&g).expect("divides"), den.div_mono(&g).expect("divides"))
        }
    } else {
        let g = Poly::gcd(&num, &den);
        if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        }
    };
    let lc = den.lc();
    if lc.is_one() {
        if den.is_one() {
            return Scalar::raw(num, Poly::one());
        }
        return Scalar::raw(num, den);
    }
    let inv = lc.inv().expect("nonzero leading coefficient");
    let den = den.scale(&inv);
    let num = num.scale(&inv);
    if den.is_one() {
        Scalar::raw(num, Poly::one())
    } else {
        Scalar::raw(num, den)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0.num, &self.0.den);
        let (c, d) = (&o.0.num, &o.0.den);
        if b == d {
            let n = a.add(c);
            if b.is_one() {
                return Scalar::raw(n, Poly::one());
            }
            return normalize(n, b.clone());
        }
        if b.is_one() {
            return Scalar::raw(a.mul(d).add(c), d.clone());
        }
        if d.is_one() {
            return Scalar::raw(c.mul(b).add(a), b.clone());
        }
        let g = Poly::gcd(b, d);
        let bg = b.div_exact(&g).expect("gcd divides");
        let dg = d.div_exact(&g).expect("gcd divides");
        let n = a.mul(&dg).add(&c.mul(&bg));
        normalize(n, b.mul(&dg))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let (a, b) = (&self.0.num, &self.0.den);
        let (c, d) = (&o.0.num, &o.0.den);
        if b.is_one() && d.is_one() {
            return Scalar::raw(a.mul(c), Poly::one());
        }
        // cross-cancel before multiplying to keep the gcd work small
        let g1 = Poly::gcd(a, d);
        let g2 = Poly::gcd(c, b);
        let a1 = a.div_exact(&g1).expect("divides");
        let d1 = d.div_exact(&g1).expect("divides");
        let c1 = c.div_exact(&g2).expect("divides");
        let b1 = b.div_exact(&g2).expect("divides");
        let num = a1.mul(&c1);
        let den = b1.mul(&d1);
        let lc = den.lc();
        let inv = lc.inv().expect("nonzero");
        let den = den.scale(&inv);
        let num = num.scale(&inv);
        if den.is_one() {
            Scalar::raw(num, Poly::one())
        } else {
            Scalar::raw(num, den)
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] for a fallible form.
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("scalar division by zero")
    }
}

// mixed owned/borrowed operands
macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::raw(self.0.num.neg(), self.0.den.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl EvalRing for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_coeff(c: &GaussRat) -> Self {
        Scalar::constant(c.clone())
    }
}

// ---------------------------------------------------------------------------
// rendering

/// Clears rational denominators so the printed form has integer coefficients,
/// e.g. `γ/(2*u*w)` rather than `1/2*γ/(u*w)`.
fn integral_pair(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let mut l = BigInt::one();
    for p in [num, den] {
        for (_, c) in p.terms() {
            l = l.lcm(c.re().denom());
            l = l.lcm(c.im().denom());
        }
    }
    let lr = GaussRat::from_rational(BigRational::from_integer(l));
    let n = num.scale(&lr);
    let d = den.scale(&lr);
    let mut g = BigInt::zero();
    for p in [&n, &d] {
        for (_, c) in p.terms() {
            g = g.gcd(c.re().numer());
            g = g.gcd(c.im().numer());
        }
    }
    if g.is_zero() || g.is_one() {
        return (n, d);
    }
    let gi = GaussRat::from_rational(BigRational::new(BigInt::one(), g.abs()));
    (n.scale(&gi), d.scale(&gi))
}

fn fmt_mono(m: &PMono, out: &mut String) {
    let mut first = true;
    for (v, e) in m.iter() {
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(v.name());
        if *e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Renders a polynomial as a sum of terms.
pub fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative_lead() && !c.is_compound();
        let mag = if neg { -c } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if m.is_empty() {
            if mag.is_compound() {
                out.push_str(&format!("({mag})"));
            } else {
                out.push_str(&mag.to_string());
            }
            continue;
        }
        if !mag.is_one() {
            if mag.is_compound() {
                out.push_str(&format!("({mag})*"));
            } else {
                out.push_str(&format!("{mag}*"));
            }
        }
        fmt_mono(m, &mut out);
    }
    out
}

fn needs_parens(p: &Poly) -> bool {
    if p.len() > 1 {
        return true;
    }
    match p.leading() {
        Some((m, c)) => {
            let factors = m.len() + usize::from(!c.is_one()) + m.iter().filter(|(_, e)| *e > 1).count();
            factors > 1 || c.is_compound()
        }
        None => false,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.den.is_one() {
            return f.write_str(&render_poly(&self.0.num));
        }
        let (n, d) = integral_pair(&self.0.num, &self.0.den);
        let ns = render_poly(&n);
        let ds = render_poly(&d);
        let ns = if n.len() > 1 { format!("({ns})") } else { ns };
        let ds = if needs_parens(&d) { format!("({ds})") } else { ds };
        write!(f, "{ns}/{ds}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<GaussRat> for Scalar {
    fn from(c: GaussRat) -> Scalar {
        Scalar::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Scalar {
        Scalar::var(n)
    }

    #[test]
    fn inverse_cancellation() {
        let a2 = &s("γ") / &(&Scalar::from_int(2) * &(&s("u") * &s("w")));
        let back = &a2 * &(&Scalar::from_int(2) * &(&s("u") * &s("w")));
        assert_eq!(back, s("γ"));
    }

    #[test]
    fn alpha_two_squared_against_casimirs() {
        let (g, u, w) = (s("γ"), s("u"), s("w"));
        let a2 = &g / &(&Scalar::from_int(2) * &(&u * &w));
        // 4 * (1/γ²) * u² * w²  (c² = 1/γ²)
        let four = Scalar::from_int(4);
        let inv_c2 = (&g * &g).inv().unwrap();
        let factor = &(&four * &inv_c2) * &(&(&u * &u) * &(&w * &w));
        assert!((&(&a2 * &a2) * &factor).is_one());
    }

    #[test]
    fn sign_identity() {
        let l = s("λ");
        let k = -(&l * &l);
        assert_eq!(&k * &Scalar::from_int(-1), &l * &l);
    }

    #[test]
    fn rational_evaluation() {
        let a2 = &s("γ") / &(&Scalar::from_int(2) * &(&s("u") * &s("w")));
        let mut b = HashMap::new();
        b.insert(Symbol::new("u"), Scalar::from_int(2));
        b.insert(Symbol::new("w"), Scalar::from_int(3));
        b.insert(Symbol::new("γ"), Scalar::from_int(1));
        assert_eq!(a2.subs(&b).unwrap(), Scalar::from_frac(1, 12));
    }

    #[test]
    fn imaginary_swap() {
        let g = s("γ");
        let e = -(&g * &g);
        let out = e.subs_one(Symbol::new("γ"), &(&Scalar::i() * &s("γ̂"))).unwrap();
        assert_eq!(out, &s("γ̂") * &s("γ̂"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(Scalar::var("x").checked_div(&Scalar::zero()).is_err());
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn renders_canonically() {
        let a2 = &s("γ") / &(&Scalar::from_int(2) * &(&s("u") * &s("w")));
        assert_eq!(a2.to_string(), "γ/(2*u*w)");
        let x = &(&s("a") + &s("b")) / &s("c");
        assert_eq!(x.to_string(), "(a + b)/c");
        assert_eq!(Scalar::from_frac(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn nonmonomial_denominators_cancel() {
        let (x, y) = (s("x"), s("y"));
        let num = &(&x * &x) - &(&y * &y);
        let den = &x + &y;
        assert_eq!(&num / &den, &x - &y);
    }

    #[test]
    fn square_reduction() {
        let a = s("α");
        let e = &(&a * &a) * &s("x") + a.clone();
        let r = e.reduce_square(Symbol::new("α"), &Scalar::from_int(3));
        assert_eq!(r, &(&Scalar::from_int(3) * &s("x")) + &a);
    }

    #[test]
    fn exact_roots_of_monomials() {
        let e = &(&s("λ") * &s("λ")) / &(&Scalar::from_int(4) * &(&s("m") * &s("m")));
        assert_eq!(e.sqrt_exact(), Some(&s("λ") / &(&Scalar::from_int(2) * &s("m"))));
    }
}
