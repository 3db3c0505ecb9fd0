//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `a² + b²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussRat { re: self.re.recip(), im: BigRational::zero() });
        }
        let n = self.norm();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact square root when `self` is `q²` or `-q²` for a rational `q`.
    /// The root with non-negative real part (or positive imaginary part for
    /// negative inputs) is returned.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if !self.im.is_zero() {
            return None;
        }
        let neg = self.re.is_negative();
        let a = self.re.abs();
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        if &(&n * &n) != a.numer() || &(&d * &d) != a.denom() {
            return None;
        }
        let root = BigRational::new(n, d);
        Some(if neg {
            GaussRat { re: BigRational::zero(), im: root }
        } else {
            GaussRat { re: root, im: BigRational::zero() }
        })
    }

    /// A canonical "sign" used to normalize leading coefficients: true when
    /// the first nonzero of (re, im) is negative.
    pub fn is_negative_lead(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// True when this coefficient needs parentheses when printed as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::one()
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat { re: &self.re * &o.re, im: BigRational::zero() };
        }
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        &self * &o
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division of Gaussian rational by zero")
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_ratio(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// `3`, `-1/2`, `i`, `-2*i`, `3/4*i`, `1+2*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |f: &mut fmt::Formatter<'_>, im: &BigRational| -> fmt::Result {
            if im.is_one() {
                write!(f, "i")
            } else if (-im).is_one() {
                write!(f, "-i")
            } else {
                fmt_ratio(im, f)?;
                write!(f, "*i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_ratio(&self.re, f),
            (true, false) => im_part(f, &self.im),
            (false, false) => {
                fmt_ratio(&self.re, f)?;
                if self.im.is_negative() {
                    im_part(f, &self.im)
                } else {
                    write!(f, "+")?;
                    im_part(f, &self.im)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gaussian() {
        let z = GaussRat::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, GaussRat::from_int(-1));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(GaussRat::from_frac(9, 4).sqrt_exact(), Some(GaussRat::from_frac(3, 2)));
        assert_eq!(
            GaussRat::from_int(-4).sqrt_exact(),
            Some(&GaussRat::i() * &GaussRat::from_int(2))
        );
        assert_eq!(GaussRat::from_int(2).sqrt_exact(), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::from_frac(-3, 2).to_string(), "-3/2");
        assert_eq!(GaussRat::i().to_string(), "i");
        let z = GaussRat::new(BigRational::from_integer(1.into()), BigRational::from_integer((-2).into()));
        assert_eq!(z.to_string(), "1-2*i");
    }
}
