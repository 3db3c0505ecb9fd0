use crate::field::{ParamContext, ParamKind, Scalar, Symbol};
use crate::pbw::{Element, Terms};

use super::DeformError;

/// A curvature written as `κ = c·t^n` in a free primitive `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaForm {
    pub kappa: Symbol,
    pub t: Symbol,
    pub c: Scalar,
    pub n: u32,
}

impl KappaForm {
    pub fn from_params(params: &ParamContext, kappa: Symbol) -> Result<KappaForm, DeformError> {
        let bad = || DeformError::CurvatureForm(kappa.name().to_string());
        match params.get(kappa) {
            Some(ParamKind::Free) => Ok(KappaForm { kappa, t: kappa, c: Scalar::one(), n: 1 }),
            Some(ParamKind::Defined(d)) => {
                let vars: Vec<Symbol> = d.vars().into_iter().collect();
                if vars.len() != 1 || !d.is_polynomial() || !d.numer().is_monomial() {
                    return Err(bad());
                }
                let t = vars[0];
                let n = d.numer().degree_in(t);
                let (_, lc) = &d.numer().terms()[0];
                let c = &Scalar::constant(lc.clone()) / &Scalar::from_poly(d.denom().clone());
                Ok(KappaForm { kappa, t, c, n })
            }
            None => Err(DeformError::UnknownParam(kappa.name().to_string())),
        }
    }

    pub fn value(&self) -> Scalar {
        &self.c * &Scalar::from_symbol(self.t).powi(self.n as i32).expect("positive power")
    }
}

/// Coefficients `𝒥^{(k)}` of `C = Σ_k κ^k 𝒥^{(k)}`, each free of `κ`.
pub fn extract_kappa_expansion(casimir: &Element, form: &KappaForm) -> Result<Vec<Element>, DeformError> {
    let uea = casimir.uea();
    let mut buckets: Vec<Terms> = Vec::new();
    for (m, coef) in casimir.terms() {
        if coef.denom().contains_var(form.t) {
            return Err(DeformError::NonPolynomial(coef.to_string()));
        }
        let den = Scalar::from_poly(coef.denom().clone());
        for (p, part) in coef.numer().split_in(form.t).into_iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            if !(p as u32).is_multiple_of(form.n) {
                return Err(DeformError::NonPolynomial(coef.to_string()));
            }
            let k = p / form.n as usize;
            let ck = form.c.powi(k as i32).expect("nonzero curvature constant");
            let v = &(&Scalar::from_poly(part) / &den) / &ck;
            if buckets.len() <= k {
                buckets.resize(k + 1, Terms::new());
            }
            let e = buckets[k].entry(m.clone()).or_insert_with(Scalar::zero);
            *e = &*e + &v;
        }
    }
    if buckets.is_empty() {
        buckets.push(Terms::new());
    }
    Ok(buckets
        .into_iter()
        .map(|mut t| {
            t.retain(|_, c| !c.is_zero());
            Element::from_terms(uea, t)
        })
        .collect())
}

/// `Σ_k κ^k 𝒥^{(k)}` with `κ` written through its primitive.
pub fn recombine(parts: &[Element], form: &KappaForm) -> Option<Element> {
    let mut acc = Element::zero(parts.first()?.uea());
    let k = form.value();
    let mut pw = Scalar::one();
    for p in parts {
        acc = &acc + &p.scale(&pw);
        pw = &pw * &k;
    }
    Some(acc)
}
