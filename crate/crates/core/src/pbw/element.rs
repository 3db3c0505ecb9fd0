use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::mono::Mono;
use super::uea::{add_scaled, add_term, Terms, Uea};
use super::PbwError;
use crate::field::{FieldError, Scalar, Symbol};

/// Element of a universal enveloping algebra in PBW normal form.
#[derive(Clone)]
pub struct Element {
    uea: Arc<Uea>,
    terms: Terms,
}

/// One factor of a raw word: generator slot and (signed) power.
pub type Letter = (usize, i32);

impl Element {
    pub fn zero(uea: &Arc<Uea>) -> Element {
        Element { uea: uea.clone(), terms: Terms::new() }
    }

    pub fn one(uea: &Arc<Uea>) -> Element {
        Element::scalar(uea, Scalar::one())
    }

    pub fn scalar(uea: &Arc<Uea>, c: Scalar) -> Element {
        let mut terms = Terms::new();
        add_term(&mut terms, Mono::unit(uea.n()), c);
        Element { uea: uea.clone(), terms }
    }

    pub fn gen(uea: &Arc<Uea>, i: usize) -> Element {
        let mut terms = Terms::new();
        terms.insert(Mono::atom(uea.n(), i, 1), Scalar::one());
        Element { uea: uea.clone(), terms }
    }

    pub fn named(uea: &Arc<Uea>, name: &str) -> Result<Element, PbwError> {
        let i = uea.index_of(name).ok_or_else(|| PbwError::UnknownGenerator(name.to_string()))?;
        Ok(Element::gen(uea, i))
    }

    /// Formal inverse of a generator; the algebra must have it adjoined.
    pub fn inverse_gen(uea: &Arc<Uea>, i: usize) -> Result<Element, PbwError> {
        if !uea.is_invertible(i) {
            return Err(PbwError::NotInvertible(uea.name(i).to_string()));
        }
        let mut terms = Terms::new();
        terms.insert(Mono::atom(uea.n(), i, -1), Scalar::one());
        Ok(Element { uea: uea.clone(), terms })
    }

    pub(crate) fn from_terms(uea: &Arc<Uea>, terms: Terms) -> Element {
        Element { uea: uea.clone(), terms }
    }

    pub fn from_monomial(uea: &Arc<Uea>, m: Mono, c: Scalar) -> Element {
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        Element { uea: uea.clone(), terms }
    }

    /// Normal-orders a sum of raw words `c · x_1^{e_1} x_2^{e_2} …`.
    pub fn normal_order(uea: &Arc<Uea>, words: &[(Scalar, Vec<Letter>)]) -> Result<Element, PbwError> {
        let mut acc = Element::zero(uea);
        for (c, word) in words {
            let mut cur = Element::scalar(uea, c.clone());
            for &(g, e) in word {
                if g >= uea.n() {
                    return Err(PbwError::UnknownGenerator(format!("#{g}")));
                }
                if e < 0 && !uea.is_invertible(g) {
                    return Err(PbwError::NotInvertible(uea.name(g).to_string()));
                }
                let f = Element::from_monomial(uea, Mono::atom(uea.n(), g, e), Scalar::one());
                cur = cur.try_mul(&f)?;
            }
            acc = &acc + &cur;
        }
        Ok(acc)
    }

    /// Parses a product of generator names such as `K1*H` or `H^-1 K1`.
    pub fn parse_word(uea: &Arc<Uea>, text: &str) -> Result<Vec<Letter>, PbwError> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (name, pow) = match tok.split_once('^') {
                Some((n, p)) => (n, p.parse::<i32>().map_err(|_| PbwError::UnknownGenerator(tok.to_string()))?),
                None => (tok, 1),
            };
            let i = uea.index_of(name).ok_or_else(|| PbwError::UnknownGenerator(name.to_string()))?;
            out.push((i, pow));
        }
        Ok(out)
    }

    pub fn uea(&self) -> &Arc<Uea> {
        &self.uea
    }

    pub fn terms(&self) -> &Terms {
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

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The scalar value when the element is a multiple of 1.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check(&self, other: &Element) -> Result<(), PbwError> {
        if self.uea.id() != other.uea.id() {
            return Err(PbwError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, PbwError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &Scalar::one());
        Ok(Element { uea: self.uea.clone(), terms })
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, PbwError> {
        self.check(other)?;
        let terms = self.uea.mul_terms(&self.terms, &other.terms);
        Ok(Element { uea: self.uea.clone(), terms })
    }

    pub fn try_commutator(&self, other: &Element) -> Result<Element, PbwError> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        Ok(&ab - &ba)
    }

    /// `[self, other]`; panics on an algebra mismatch.
    pub fn commutator(&self, other: &Element) -> Element {
        self.try_commutator(other).expect("commutator of elements from different algebras")
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.uea);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect();
        Element { uea: self.uea.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut acc = Element::one(&self.uea);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a map to every coefficient, dropping zeros.
    pub fn try_map_coeffs<F>(&self, f: F) -> Result<Element, FieldError>
    where
        F: Fn(&Scalar) -> Result<Scalar, FieldError>,
    {
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            add_term(&mut terms, m.clone(), f(c)?);
        }
        Ok(Element { uea: self.uea.clone(), terms })
    }

    pub fn subs(&self, bindings: &HashMap<Symbol, Scalar>) -> Result<Element, FieldError> {
        self.try_map_coeffs(|c| c.subs(bindings))
    }

    pub fn reduce_square(&self, x: Symbol, value: &Scalar) -> Element {
        self.try_map_coeffs(|c| Ok(c.reduce_square(x, value))).expect("square reduction is total")
    }

    /// Re-reads the element in another algebra, matching generators by name.
    pub fn transfer(&self, target: &Arc<Uea>) -> Result<Element, PbwError> {
        if self.uea.id() == target.id() {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.uea.names().iter().map(|n| target.index_of(n)).collect();
        let mut words = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut w = Vec::new();
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let t = map[slot].ok_or_else(|| PbwError::UnknownGenerator(self.uea.name(slot).to_string()))?;
                w.push((t, e));
            }
            words.push((c.clone(), w));
        }
        Element::normal_order(target, &words)
    }

    /// Moves an element into a localization of its own algebra.
    pub fn lift(&self, target: &Arc<Uea>) -> Result<Element, PbwError> {
        if self.uea.family() != target.family() {
            return Err(PbwError::AlgebraMismatch);
        }
        Ok(Element { uea: target.clone(), terms: self.terms.clone() })
    }

    pub fn render(&self) -> String {
        render_terms(&self.uea, &self.terms)
    }
}

fn render_mono(uea: &Uea, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (slot, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(uea.name(slot).to_string()),
            _ => parts.push(format!("{}^{}", uea.name(slot), e)),
        }
    }
    parts.join("*")
}

fn coeff_parts(c: &Scalar) -> (bool, String, bool) {
    // (negative, magnitude text, magnitude is one)
    let simple = c.numer().len() == 1;
    let neg = simple && c.is_negative_lead();
    let mag = if neg { -c } else { c.clone() };
    let s = mag.to_string();
    let is_one = mag.is_one();
    let s = if mag.numer().len() > 1 && mag.denom().is_one() { format!("({s})") } else { s };
    (neg, s, is_one)
}

pub(crate) fn render_terms(uea: &Uea, terms: &Terms) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in terms.iter().rev().enumerate() {
        let (neg, mag, one) = coeff_parts(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let gens = render_mono(uea, m);
        if gens.is_empty() {
            out.push_str(&mag);
        } else if one {
            out.push_str(&gens);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&gens);
        }
    }
    out
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.uea.id() == other.uea.id() && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.render())
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        self.try_add(o).expect("sum of elements from different algebras")
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        self.try_add(&-o).expect("difference of elements from different algebras")
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.try_mul(o).expect("product of elements from different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Element { uea: self.uea.clone(), terms }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $m(self, o: Element) -> Element {
                (&self).$m(&o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);
