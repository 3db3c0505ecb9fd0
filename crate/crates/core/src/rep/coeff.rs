use std::fmt;

use crate::field::{FieldError, Scalar, Symbol};

/// `ℚ(i)(params, p₁, p₂, p₃)[ω]` with `ω² = R`.
///
/// Elements are stored as `a + b·ω` with `a, b` free of `ω`; since `R` is
/// not a square this form is unique, so equality is componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaField {
    momenta: [Symbol; 3],
    radicand: Scalar,
}

impl OmegaField {
    pub fn new(momenta: [Symbol; 3], radicand: Scalar) -> OmegaField {
        OmegaField { momenta, radicand }
    }

    /// On-shell radical `ω = √(p² + m²/γ²)`, i.e. `√(p² + m²c²)`.
    pub fn on_shell(m: &Scalar, gamma: &Scalar) -> Result<OmegaField, FieldError> {
        let p = momenta();
        let mut r = (m * m).checked_div(&(gamma * gamma))?;
        for x in p {
            let v = Scalar::from_symbol(x);
            r = &r + &(&v * &v);
        }
        Ok(OmegaField::new(p, r))
    }

    pub fn momenta(&self) -> [Symbol; 3] {
        self.momenta
    }

    pub fn radicand(&self) -> &Scalar {
        &self.radicand
    }

    pub fn p(&self, i: usize) -> CoeffFn {
        CoeffFn::scalar(Scalar::from_symbol(self.momenta[i]))
    }

    pub fn mul(&self, x: &CoeffFn, y: &CoeffFn) -> CoeffFn {
        if x.b.is_zero() {
            return CoeffFn { a: &x.a * &y.a, b: &x.a * &y.b };
        }
        if y.b.is_zero() {
            return CoeffFn { a: &x.a * &y.a, b: &x.b * &y.a };
        }
        let bd = &x.b * &y.b;
        CoeffFn { a: &(&x.a * &y.a) + &(&bd * &self.radicand), b: &(&x.a * &y.b) + &(&x.b * &y.a) }
    }

    /// `(a + bω)⁻¹ = (a − bω)/(a² − b²R)`.
    pub fn inv(&self, x: &CoeffFn) -> Result<CoeffFn, FieldError> {
        if x.b.is_zero() {
            return Ok(CoeffFn::scalar(x.a.inv()?));
        }
        let norm = &(&x.a * &x.a) - &(&(&x.b * &x.b) * &self.radicand);
        let k = norm.inv()?;
        Ok(CoeffFn { a: &x.a * &k, b: -(&x.b * &k) })
    }

    pub fn div(&self, x: &CoeffFn, y: &CoeffFn) -> Result<CoeffFn, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// `∂ᵢ(a + bω) = ∂ᵢa + (∂ᵢb + b·∂ᵢR/(2R))ω`.
    pub fn derivative(&self, x: &CoeffFn, i: usize) -> CoeffFn {
        let p = self.momenta[i];
        let a = x.a.derivative(p);
        if x.b.is_zero() {
            return CoeffFn { a, b: Scalar::zero() };
        }
        let dr = self.radicand.derivative(p);
        let half = &(&x.b * &dr) / &(&self.radicand * &Scalar::from_int(2));
        CoeffFn { a, b: &x.b.derivative(p) + &half }
    }

    pub fn subs(&self, x: &CoeffFn, bindings: &std::collections::HashMap<Symbol, Scalar>) -> Result<CoeffFn, FieldError> {
        Ok(CoeffFn { a: x.a.subs(bindings)?, b: x.b.subs(bindings)? })
    }
}

/// The momenta symbols `p1, p2, p3`.
pub fn momenta() -> [Symbol; 3] {
    [Symbol::new("p1"), Symbol::new("p2"), Symbol::new("p3")]
}

/// `a + b·ω`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoeffFn {
    pub(crate) a: Scalar,
    pub(crate) b: Scalar,
}

impl CoeffFn {
    pub fn zero() -> CoeffFn {
        CoeffFn { a: Scalar::zero(), b: Scalar::zero() }
    }

    pub fn one() -> CoeffFn {
        CoeffFn::scalar(Scalar::one())
    }

    pub fn omega() -> CoeffFn {
        CoeffFn { a: Scalar::zero(), b: Scalar::one() }
    }

    pub fn scalar(a: Scalar) -> CoeffFn {
        CoeffFn { a, b: Scalar::zero() }
    }

    pub fn new(a: Scalar, b: Scalar) -> CoeffFn {
        CoeffFn { a, b }
    }

    pub fn rational_part(&self) -> &Scalar {
        &self.a
    }

    pub fn omega_part(&self) -> &Scalar {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value when no `ω` is involved.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn scale(&self, c: &Scalar) -> CoeffFn {
        CoeffFn { a: &self.a * c, b: &self.b * c }
    }
}

impl std::ops::Add for &CoeffFn {
    type Output = CoeffFn;
    fn add(self, o: &CoeffFn) -> CoeffFn {
        CoeffFn { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl std::ops::Sub for &CoeffFn {
    type Output = CoeffFn;
    fn sub(self, o: &CoeffFn) -> CoeffFn {
        CoeffFn { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl std::ops::Neg for &CoeffFn {
    type Output = CoeffFn;
    fn neg(self) -> CoeffFn {
        CoeffFn { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_one() => write!(f, "ω"),
            (true, false) => write!(f, "({})*ω", self.b),
            (false, false) => write!(f, "{} + ({})*ω", self.a, self.b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> OmegaField {
        OmegaField::on_shell(&Scalar::var("m"), &Scalar::var("γ")).unwrap()
    }

    #[test]
    fn omega_squares_to_radicand() {
        let f = field();
        let w2 = f.mul(&CoeffFn::omega(), &CoeffFn::omega());
        assert_eq!(w2, CoeffFn::scalar(f.radicand().clone()));
    }

    #[test]
    fn inverse_of_mc_plus_omega() {
        let f = field();
        let mc = &Scalar::var("m") / &Scalar::var("γ");
        let x = CoeffFn::new(mc, Scalar::one());
        assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), CoeffFn::one());
    }

    #[test]
    fn chain_rule() {
        // ∂₁ω = p₁/ω = (p₁/R)·ω
        let f = field();
        let d = f.derivative(&CoeffFn::omega(), 0);
        let want = CoeffFn::new(Scalar::zero(), &Scalar::var("p1") / f.radicand());
        assert_eq!(d, want);
        assert_eq!(f.mul(&d, &CoeffFn::omega()), f.p(0));
    }
}
