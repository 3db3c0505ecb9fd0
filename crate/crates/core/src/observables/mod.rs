//! Relativistic operators inside the Galilei enveloping algebra: the
//! Galilei → Poincaré deformed generators with the positive roots chosen,
//! helicities along the moving frame, Bacry positions, kinematical
//! observables and velocity. Everything lives in `U(g)` with `H⁻¹`
//! adjoined and is compared modulo `P² = u²`, `W² = w²`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{catalog_get, evaluate, AlgebraError};
use crate::deform::{
    apply_relations, root_determination, run_deformation, DeformError, DeformationResult, DeformationSpec,
};
use crate::field::{FieldError, ParamContext, Scalar, Symbol};
use crate::pbw::{Element, PbwError, Reducer, ReductionStatus, Uea};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObservableError {
    #[error("Casimir primitive `{0}` is zero; the construction needs an ordinary representation")]
    ZeroPrimitive(&'static str),
    #[error("no observable named `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One operator identity `lhs = rhs`, stored as its reduced difference.
#[derive(Clone, Debug)]
pub struct Identity {
    pub name: String,
    pub residue: Element,
    pub status: ReductionStatus,
}

impl Identity {
    pub fn holds(&self) -> bool {
        self.status == ReductionStatus::Reduced && self.residue.is_zero()
    }
}

/// Value of a target Casimir on the deformed generators.
#[derive(Clone, Debug)]
pub struct CasimirValue {
    pub name: String,
    /// `None` when the reduced element is not a scalar.
    pub value: Option<Scalar>,
    pub residue: Element,
}

fn eps(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn cross(a: &[Element], b: &[Element]) -> Vec<Element> {
    (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            &(&a[j] * &b[k]) - &(&a[k] * &b[j])
        })
        .collect()
}

fn dot(a: &[Element], b: &[Element]) -> Element {
    let mut acc = &a[0] * &b[0];
    for i in 1..a.len() {
        acc = &acc + &(&a[i] * &b[i]);
    }
    acc
}

/// Named operators of the Galilei → Poincaré construction.
pub struct ObservableSet {
    /// Galilei algebra with `H⁻¹` adjoined.
    pub uea: Arc<Uea>,
    pub params: ParamContext,
    /// Seed constants after the positive root choice.
    pub roots: Vec<(Symbol, Scalar)>,
    pub u: Scalar,
    pub w: Scalar,
    pub items: Vec<(String, Element)>,
    relations: Vec<(Element, Scalar)>,
    reducer: Reducer,
}

impl std::fmt::Debug for ObservableSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ObservableSet").field("roots", &self.roots).field("items", &self.items.len()).finish()
    }
}

/// Builds the set with `|P| = u`, `|W| = w` as free primitives.
pub fn build_observables() -> Result<ObservableSet, ObservableError> {
    build_observables_at(&Scalar::var("u"), &Scalar::var("w"))
}

/// Builds the set for given values of `|P|` and `|W|`.
pub fn build_observables_at(u: &Scalar, w: &Scalar) -> Result<ObservableSet, ObservableError> {
    if u.is_zero() {
        return Err(ObservableError::ZeroPrimitive("u"));
    }
    if w.is_zero() {
        return Err(ObservableError::ZeroPrimitive("w"));
    }
    let galilei = catalog_get("galilei")?;
    let spec = DeformationSpec::new(galilei.clone(), catalog_get("poincare")?, "κ2", 2)?;
    let result = run_deformation(&spec)?;
    let eigen = HashMap::from([(Symbol::new("c1"), u * u), (Symbol::new("c2"), w * w)]);
    let roots = root_determination(&result, &eigen)?;
    let mut bind: HashMap<Symbol, Scalar> = roots.iter().cloned().collect();
    bind.extend(eigen.clone());

    let h = galilei.uea.index_of("H").expect("Galilei has H");
    let uea = galilei.uea.adjoin_inverse(h)?;
    let mut params = galilei.params.clone();
    for s in u.vars().into_iter().chain(w.vars()).chain([Symbol::new("γ")]) {
        if !params.contains(s) {
            params.declare_free(s.name())?;
        }
    }
    // DSL text always spells the primitives `u` and `w`
    for (name, val) in [("u", u), ("w", w)] {
        if !params.contains(Symbol::new(name)) {
            params.declare_defined(name, val.clone())?;
        }
    }
    let relations = galilei
        .casimirs
        .iter()
        .map(|c| Ok((c.element.lift(&uea)?, Scalar::from_symbol(c.eigenvalue).subs(&eigen)?)))
        .collect::<Result<Vec<_>, ObservableError>>()?;
    let reducer = Reducer::new(&uea, &relations)?;

    let mut set = ObservableSet {
        uea: uea.clone(),
        params,
        roots,
        u: u.clone(),
        w: w.clone(),
        items: Vec::new(),
        relations,
        reducer,
    };
    for (n, e) in &result.generators {
        set.items.push((format!("{}′{}", &n[..1], &n[1..]), e.subs(&bind)?.lift(&uea)?));
    }
    set.derive()?;
    Ok(set)
}

impl ObservableSet {
    pub fn get(&self, name: &str) -> Result<&Element, ObservableError> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, e)| e).ok_or_else(|| ObservableError::Unknown(name.into()))
    }

    /// Components `name1..name3`.
    pub fn vector(&self, stem: &str) -> Result<Vec<Element>, ObservableError> {
        (1..=3).map(|i| self.get(&format!("{stem}{i}")).cloned()).collect()
    }

    /// Evaluates DSL text in the localized algebra; `u`, `w` and `γ` are
    /// available, and `H^-1` is the adjoined inverse.
    pub fn eval(&self, text: &str) -> Result<Element, ObservableError> {
        Ok(evaluate(text, &self.params, &self.uea)?)
    }

    fn scalar(&self, s: Scalar) -> Element {
        Element::scalar(&self.uea, s)
    }

    fn put(&mut self, name: &str, e: Element) {
        self.items.push((name.to_string(), e));
    }

    fn put_vector(&mut self, stem: &str, v: Vec<Element>) {
        for (i, e) in v.into_iter().enumerate() {
            self.put(&format!("{stem}{}", i + 1), e);
        }
    }

    fn derive(&mut self) -> Result<(), ObservableError> {
        let g = Scalar::var("γ");
        let (u, w) = (self.u.clone(), self.w.clone());
        let gen = |n: &str| Element::named(&self.uea, n);
        let p: Vec<Element> = (1..=3).map(|i| gen(&format!("P{i}"))).collect::<Result<_, _>>()?;
        let k: Vec<Element> = (1..=3).map(|i| gen(&format!("K{i}"))).collect::<Result<_, _>>()?;
        let j: Vec<Element> = (1..=3).map(|i| gen(&format!("J{i}"))).collect::<Result<_, _>>()?;
        let hinv = Element::inverse_gen(&self.uea, self.uea.index_of("H").expect("H"))?;

        let pp = self.vector("P′")?;
        let kp = self.vector("K′")?;
        let jp = self.vector("J′")?;
        let hp = self.get("H′")?.clone();

        self.put("W′0", dot(&jp, &pp));
        let kxp = cross(&kp, &pp);
        let wp: Vec<Element> = (0..3).map(|i| &(&hp * &jp[i]).scale(&-(&g * &g)) + &kxp[i]).collect();
        self.put_vector("W′", wp);

        let wv = cross(&k, &p);
        let pw = cross(&p, &wv);
        let uinv = u.inv()?;
        let winv = w.inv()?;
        let up: Vec<Element> = p.iter().map(|x| x.scale(&uinv)).collect();
        let uw: Vec<Element> = wv.iter().map(|x| x.scale(&winv)).collect();
        let upw: Vec<Element> = pw.iter().map(|x| x.scale(&(&uinv * &winv))).collect();
        self.put("λp", dot(&j, &up));
        self.put("λw", dot(&j, &uw));
        self.put("λpw", dot(&j, &upw));
        self.put_vector("up", up);
        self.put_vector("uw", uw);
        self.put_vector("upw", upw);

        // Q′ = (c²/2)(H′⁻¹K′ + K′H′⁻¹), with H′ = H
        let half_c2 = (&g * &g * int(2)).inv()?;
        let q: Vec<Element> = kp.iter().map(|x| (&(&hinv * x) + &(x * &hinv)).scale(&half_c2)).collect();
        let mut sigma = Vec::new();
        for kk in 0..3 {
            let mut acc = jp[kk].clone();
            for i in 0..3 {
                for jj in 0..3 {
                    let e = eps(i, jj, kk);
                    if e != 0 {
                        acc = &acc - &(&q[i] * &pp[jj]).scale(&int(e));
                    }
                }
            }
            sigma.push(acc);
        }
        let v: Vec<Element> = q.iter().map(|x| x.commutator(&hp)).collect();
        self.put_vector("Q′", q);
        self.put_vector("Σ′", sigma);
        self.put_vector("V′", v);
        Ok(())
    }

    /// `lhs - rhs` reduced modulo the central relations.
    pub fn identity(&self, name: &str, lhs: &Element, rhs: &Element) -> Result<Identity, ObservableError> {
        let red = self.reducer.reduce(&(lhs - rhs), None)?;
        Ok(Identity { name: name.to_string(), residue: red.reduced, status: red.status })
    }

    /// Same as [`identity`](Self::identity) with the right side in DSL text.
    pub fn identity_text(&self, name: &str, lhs: &Element, rhs: &str) -> Result<Identity, ObservableError> {
        self.identity(name, lhs, &self.eval(rhs)?)
    }

    /// Vector forms of the deformed generators and the Pauli–Lubanski
    /// components.
    pub fn check_vector_forms(&self) -> Result<Vec<Identity>, ObservableError> {
        let g = Scalar::var("γ");
        let ginv = g.inv()?;
        let c2 = (&g * &g).inv()?;
        let pre = "vector W = cross(K, P); vector PW = cross(P, W); vector KW = cross(K, W); \
                   vector JPW = cross(J, PW);";
        let pp = self.vector("P′")?;
        let kp = self.vector("K′")?;
        let wp = self.vector("W′")?;
        let upw = self.vector("upw")?;
        let hp = self.get("H′")?;
        let w0 = self.get("W′0")?;
        let lpw = self.get("λpw")?;
        let mut out = Vec::new();
        for i in 0..3 {
            let n = i + 1;
            out.push(self.identity_text(&format!("c P′{n} = H (P∧W){n}/(uw)"), &pp[i].scale(&ginv), &format!("{pre} H*PW{n}/(u*w)"))?);
            let rhs = format!("{pre} (H*(w^2/u^2*P{n} + KW{n}) - JPW{n} + 3/2*PW{n})/(u*w)");
            out.push(self.identity_text(&format!("c K′{n} = vector form"), &kp[i].scale(&ginv), &rhs)?);
        }
        out.push(self.identity("c² P′² = H′²", &dot(&pp, &pp).scale(&c2), &(hp * hp))?);
        let kxp = cross(&kp, &pp);
        for i in 0..3 {
            let n = i + 1;
            let rhs = &(hp * &self.eval(&format!("J{n}"))?) - &(&(hp * lpw) * &upw[i]);
            out.push(self.identity(&format!("c² (K′∧P′){n} = HJ{n} - H λpw upw{n}"), &kxp[i].scale(&c2), &rhs)?);
        }
        out.push(self.identity("W′0 = (1/c) H λpw", w0, &(hp * lpw).scale(&g))?);
        for i in 0..3 {
            let n = i + 1;
            let rhs = (w0 * &upw[i]).scale(&-&g);
            out.push(self.identity(&format!("W′{n} = -(1/c) W′0 upw{n}"), &wp[i], &rhs)?);
        }
        out.push(self.identity("c² W′² = W′0²", &dot(&wp, &wp).scale(&c2), &(w0 * w0))?);
        Ok(out)
    }

    /// The helicities along `P`, `W` and `P∧W` close `so(3)`.
    pub fn check_so3_helicities(&self) -> Result<Vec<Identity>, ObservableError> {
        let (lp, lw, lpw) = (self.get("λp")?, self.get("λw")?, self.get("λpw")?);
        let h = self.get("H′")?;
        Ok(vec![
            self.identity("[λw, λp] = λpw", &lw.commutator(lp), lpw)?,
            self.identity("[λpw, λw] = λp", &lpw.commutator(lw), lp)?,
            self.identity("[λp, λpw] = λw", &lp.commutator(lpw), lw)?,
            self.identity("[λp, λp] = 0", &lp.commutator(lp), &Element::zero(&self.uea))?,
            self.identity("[λpw, H] = 0", &lpw.commutator(h), &Element::zero(&self.uea))?,
        ])
    }

    /// Bacry positions: rotations, canonical pairs, `[Q′,Q′]`, and the
    /// kinematical observables `Σ′`.
    pub fn check_position_algebra(&self) -> Result<Vec<Identity>, ObservableError> {
        let g = Scalar::var("γ");
        let c2 = (&g * &g).inv()?;
        let q = self.vector("Q′")?;
        let pp = self.vector("P′")?;
        let jp = self.vector("J′")?;
        let sigma = self.vector("Σ′")?;
        let hinv = Element::inverse_gen(&self.uea, self.uea.index_of("H").expect("H"))?;
        let zero = Element::zero(&self.uea);
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (i + 1, j + 1);
                let mut rot = zero.clone();
                for k in 0..3 {
                    rot = &rot + &q[k].scale(&int(eps(i, j, k)));
                }
                out.push(self.identity(&format!("[J′{a}, Q′{b}] = ε Q′"), &jp[i].commutator(&q[j]), &rot)?);
                let delta = if i == j { Element::one(&self.uea) } else { zero.clone() };
                out.push(self.identity(&format!("[Q′{a}, P′{b}] = δ"), &q[i].commutator(&pp[j]), &delta)?);
            }
        }
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            let mut inner = &(&q[i] * &pp[j]) - &(&q[j] * &pp[i]);
            inner = &inner - &jp[k].scale(&int(eps(i, j, k)));
            let rhs = (&(&hinv * &hinv) * &inner).scale(&c2);
            let name = format!("[Q′{}, Q′{}] = (c²/H′²)(Q′P′ - Q′P′ - εJ′)", i + 1, j + 1);
            out.push(self.identity(&name, &q[i].commutator(&q[j]), &rhs)?);
        }
        let (lp, lw) = (self.get("λp")?, self.get("λw")?);
        let (up, uw, upw) = (self.vector("up")?, self.vector("uw")?, self.vector("upw")?);
        for i in 0..3 {
            let n = i + 1;
            let head = self.eval(&format!("vector W = cross(K, P); vector KW = cross(K, W); w/u^2*P{n}/u + KW{n}/(u*w)"))?;
            let tail = &(&(lp * &uw[i]) - &(lw * &up[i])) + &upw[i];
            let rhs = &head + &(&hinv * &tail);
            out.push(self.identity(&format!("(1/c) Q′{n} = frame form"), &q[i].scale(&g), &rhs)?);
        }
        for i in 0..3 {
            let rhs = &(&self.eval(&format!("J{}", i + 1))? - &(lp * &up[i])) - &(lw * &uw[i]);
            out.push(self.identity(&format!("Σ′{} = J - λp up - λw uw", i + 1), &sigma[i], &rhs)?);
        }
        Ok(out)
    }

    /// `V′ = [Q′, H′]` against `c (P∧W)/(uw)` and `c² P′/H′`, and `V′² = c²`.
    pub fn velocity_operator(&self) -> Result<(Vec<Element>, Vec<Identity>), ObservableError> {
        let g = Scalar::var("γ");
        let ginv = g.inv()?;
        let c2 = (&g * &g).inv()?;
        let v = self.vector("V′")?;
        let upw = self.vector("upw")?;
        let pp = self.vector("P′")?;
        let hinv = Element::inverse_gen(&self.uea, self.uea.index_of("H").expect("H"))?;
        let mut out = Vec::new();
        for i in 0..3 {
            let n = i + 1;
            out.push(self.identity(&format!("V′{n} = c upw{n}"), &v[i], &upw[i].scale(&ginv))?);
            out.push(self.identity(&format!("V′{n} = c² P′{n}/H′"), &v[i], &(&pp[i] * &hinv).scale(&c2))?);
        }
        out.push(self.identity("V′² = c²", &dot(&v, &v), &self.scalar(c2))?);
        Ok((v, out))
    }

    /// Poincaré Casimirs on the deformed generators; both vanish.
    pub fn deformed_casimirs(&self) -> Result<Vec<CasimirValue>, ObservableError> {
        let poincare = catalog_get("poincare")?;
        let images = poincare
            .generators()
            .iter()
            .map(|n| self.get(&format!("{}′{}", &n[..1], &n[1..])).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Vec::new();
        for c in &poincare.casimirs {
            let e = c.evaluate_on(&poincare.params, &poincare.uea, &images)?;
            let red = self.reducer.reduce(&e, None)?;
            out.push(CasimirValue { name: c.name.clone(), value: red.reduced.as_scalar(), residue: red.reduced });
        }
        Ok(out)
    }

    pub fn relations(&self) -> &[(Element, Scalar)] {
        &self.relations
    }

    /// Every identity of the suite, in a fixed order.
    pub fn all_identities(&self) -> Result<Vec<Identity>, ObservableError> {
        let mut out = self.check_vector_forms()?;
        out.extend(self.check_so3_helicities()?);
        out.extend(self.check_position_algebra()?);
        out.extend(self.velocity_operator()?.1);
        Ok(out)
    }
}

/// Target Casimirs evaluated on the deformed generators of a run, reduced
/// modulo the source relations and with the solved seed constants applied.
pub fn evaluate_deformed_casimirs(
    spec: &DeformationSpec,
    result: &DeformationResult,
) -> Result<Vec<CasimirValue>, ObservableError> {
    let target = &spec.target;
    let images = target
        .generators()
        .iter()
        .map(|n| result.generator(n).cloned().ok_or_else(|| DeformError::MissingGenerator(n.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let reducer = Reducer::new(&spec.source.uea, &spec.relations)?;
    let mut out = Vec::new();
    for c in &target.casimirs {
        let e = c.evaluate_on(&target.params, &target.uea, &images)?;
        let red = reducer.reduce(&e, None)?;
        let fixed = red.reduced.try_map_coeffs(|x| Ok(apply_relations(x, &result.solution.relations)))?;
        out.push(CasimirValue { name: c.name.clone(), value: fixed.as_scalar(), residue: fixed });
    }
    Ok(out)
}
