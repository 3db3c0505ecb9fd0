use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::parser::{parse_expr, Expr};
use super::AlgebraError;
use crate::field::{ParamContext, ParamKind, Scalar, Symbol};
use crate::pbw::{Element, PbwError, Terms, Uea};

#[derive(Clone, Debug)]
pub struct Casimir {
    pub name: String,
    pub element: Element,
    pub eigenvalue: Symbol,
    /// Defining formula with vector macros inlined.
    pub(crate) formula: Expr,
}

impl PartialEq for Casimir {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.eigenvalue == o.eigenvalue
            && self.element.terms() == o.element.terms()
            && self.formula.to_string() == o.formula.to_string()
    }
}

impl Casimir {
    pub fn formula(&self) -> String {
        self.formula.to_string()
    }

    /// Evaluates the defining formula in another algebra, generators matched
    /// by name. Unlike transferring the normal-ordered element, no
    /// reordering terms of this algebra leak into the result.
    pub fn evaluate_in(&self, uea: &Arc<Uea>, params: &ParamContext) -> Result<Element, AlgebraError> {
        super::eval::eval_formula(&self.formula, params, uea)
    }

    /// Evaluates the formula with generator `i` of `names` replaced by
    /// `images[i]`, e.g. deformed generators.
    pub fn evaluate_on(
        &self,
        params: &ParamContext,
        names: &Arc<Uea>,
        images: &[Element],
    ) -> Result<Element, AlgebraError> {
        super::eval::eval_formula_on(&self.formula, params, names, images)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `[𝔭,𝔭] = 0`
    Zero,
    /// `[𝔭,𝔭] ⊂ 𝔥`
    SubH,
}

impl Pattern {
    pub fn keyword(self) -> &'static str {
        match self {
            Pattern::Zero => "zero",
            Pattern::SubH => "subh",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanSplit {
    pub label: String,
    pub p: Vec<usize>,
    pub h: Vec<usize>,
    pub pattern: Pattern,
}

/// Signed generator permutation: generator `i` maps to `±g_{image[i].0}`,
/// negated when `image[i].1` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub name: String,
    pub image: Vec<(usize, bool)>,
}

impl Involution {
    pub fn identity(name: &str, n: usize) -> Involution {
        Involution { name: name.into(), image: (0..n).map(|i| (i, false)).collect() }
    }

    /// Image of an element under the induced algebra map.
    pub fn apply(&self, x: &Element) -> Element {
        let uea = x.uea();
        let mut words = Vec::new();
        for (m, c) in x.terms() {
            let mut c = c.clone();
            let mut w = Vec::new();
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (t, neg) = self.image[slot];
                if neg && e % 2 != 0 {
                    c = -c;
                }
                w.push((t, e));
            }
            words.push((c, w));
        }
        Element::normal_order(uea, &words).expect("involution maps generators to generators")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceRecord {
    pub label: String,
    pub dim: u32,
    pub curvature: Scalar,
    pub rank: u32,
    pub quotient: Option<String>,
}

/// A Lie algebra given by its bracket table, with Casimirs and metadata.
#[derive(Clone, Debug)]
pub struct AlgebraDef {
    pub name: String,
    pub params: ParamContext,
    pub uea: Arc<Uea>,
    pub casimirs: Vec<Casimir>,
    pub cartans: Vec<CartanSplit>,
    pub involutions: Vec<Involution>,
    pub spaces: Vec<SpaceRecord>,
}

impl PartialEq for AlgebraDef {
    fn eq(&self, o: &Self) -> bool {
        let n = self.uea.n();
        let same_table = self.uea.names() == o.uea.names()
            && (0..n).all(|i| (0..n).all(|j| self.uea.bracket(i, j) == o.uea.bracket(i, j)));
        self.name == o.name
            && self.params == o.params
            && same_table
            && self.casimirs == o.casimirs
            && self.cartans == o.cartans
            && self.involutions == o.involutions
            && self.spaces == o.spaces
    }
}

impl AlgebraDef {
    pub fn generators(&self) -> &[String] {
        self.uea.names()
    }

    pub fn gen(&self, name: &str) -> Result<Element, PbwError> {
        Element::named(&self.uea, name)
    }

    pub fn casimir(&self, name: &str) -> Option<&Casimir> {
        self.casimirs.iter().find(|c| c.name == name)
    }

    pub fn involution(&self, name: &str) -> Option<&Involution> {
        self.involutions.iter().find(|c| c.name == name)
    }

    pub fn cartan(&self, label: &str) -> Option<&CartanSplit> {
        self.cartans.iter().find(|c| c.label == label)
    }

    /// `[x, y]` for generator names, as an element.
    pub fn bracket(&self, x: &str, y: &str) -> Result<Element, PbwError> {
        self.gen(x)?.try_commutator(&self.gen(y)?)
    }

    /// Evaluates an expression in the DSL syntax against this algebra.
    pub fn parse_element(&self, text: &str) -> Result<Element, AlgebraError> {
        super::eval::element_in(self, text)
    }

    /// Same definition with one bracket replaced.
    pub fn with_bracket(&self, x: &str, y: &str, value: &Element) -> Result<AlgebraDef, AlgebraError> {
        let i = self.uea.index_of(x).ok_or_else(|| PbwError::UnknownGenerator(x.into()))?;
        let j = self.uea.index_of(y).ok_or_else(|| PbwError::UnknownGenerator(y.into()))?;
        let mut table = self.upper_table();
        table.retain(|(a, b, _)| !((*a, *b) == (i, j) || (*a, *b) == (j, i)));
        table.push((i, j, value.terms().clone()));
        let uea = Uea::new(self.uea.names().to_vec(), table)?;
        self.rebuild(uea, self.name.clone(), self.params.clone(), &|c: &Scalar| Ok(c.clone()), &|e: &Expr| e.clone())
    }

    fn upper_table(&self) -> Vec<(usize, usize, Terms)> {
        let n = self.uea.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let t = self.uea.bracket(i, j);
                if !t.is_empty() {
                    out.push((i, j, t.clone()));
                }
            }
        }
        out
    }

    fn rebuild(
        &self,
        uea: Arc<Uea>,
        name: String,
        params: ParamContext,
        f: &dyn Fn(&Scalar) -> Result<Scalar, AlgebraError>,
        g: &dyn Fn(&Expr) -> Expr,
    ) -> Result<AlgebraDef, AlgebraError> {
        let mut casimirs = Vec::new();
        for c in &self.casimirs {
            let formula = g(&c.formula);
            casimirs.push(Casimir {
                name: c.name.clone(),
                element: super::eval::eval_formula(&formula, &params, &uea)?,
                eigenvalue: c.eigenvalue,
                formula,
            });
        }
        let mut spaces = Vec::new();
        for s in &self.spaces {
            spaces.push(SpaceRecord { curvature: f(&s.curvature)?, ..s.clone() });
        }
        Ok(AlgebraDef {
            name,
            params,
            uea,
            casimirs,
            cartans: self.cartans.clone(),
            involutions: self.involutions.clone(),
            spaces,
        })
    }

    /// Substitutes free parameters by scalars in fresh symbols, e.g.
    /// `λ → i·λ̂`. Fresh symbols are declared where the bound one was.
    pub fn substitute(&self, name: &str, bindings: &HashMap<Symbol, Scalar>) -> Result<AlgebraDef, AlgebraError> {
        let mut params = ParamContext::new();
        for (s, kind) in self.params.iter() {
            match kind {
                ParamKind::Free => match bindings.get(&s) {
                    Some(v) => {
                        for fresh in v.vars() {
                            if !params.contains(fresh) && !self.params.contains(fresh) {
                                params.declare_free(fresh.name())?;
                            }
                        }
                    }
                    None => {
                        params.declare_free(s.name())?;
                    }
                },
                ParamKind::Defined(d) => {
                    params.declare_defined(s.name(), d.subs(bindings)?)?;
                }
            }
        }
        let mut table = self.upper_table();
        for (_, _, t) in table.iter_mut() {
            let mut out = Terms::new();
            for (m, c) in t.iter() {
                let v = self.params.substitute(c, bindings)?;
                if !v.is_zero() {
                    out.insert(m.clone(), v);
                }
            }
            *t = out;
        }
        let uea = Uea::new(self.uea.names().to_vec(), table)?;
        let f = |c: &Scalar| -> Result<Scalar, AlgebraError> { Ok(self.params.substitute(c, bindings)?) };
        let mut exprs = HashMap::new();
        for (s, v) in bindings {
            exprs.insert(s.name().to_string(), parse_expr(&format!("({v})"))?);
        }
        let g = |e: &Expr| e.replace(&|n: &str| exprs.get(n).cloned());
        self.rebuild(uea, name.to_string(), params, &f, &g)
    }

    /// Canonical DSL text; parsing it gives back an equal definition.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algebra {} {{", self.name);
        let mut free: Vec<&str> = Vec::new();
        let flush = |out: &mut String, free: &mut Vec<&str>| {
            if !free.is_empty() {
                let _ = writeln!(out, "  params [{}];", free.join(", "));
                free.clear();
            }
        };
        for (s, kind) in self.params.iter() {
            match kind {
                ParamKind::Free => free.push(s.name()),
                ParamKind::Defined(d) => {
                    flush(&mut out, &mut free);
                    let _ = writeln!(out, "  define {} = {};", s.name(), d);
                }
            }
        }
        flush(&mut out, &mut free);
        let names = self.uea.names();
        let _ = writeln!(out, "  generators [{}];", names.join(", "));
        for (i, j, t) in self.upper_table() {
            let e = Element::from_terms(&self.uea, t);
            let _ = writeln!(out, "  bracket [{},{}] = {};", names[i], names[j], e.render());
        }
        for c in &self.casimirs {
            let _ = writeln!(out, "  casimir {} = {} eigenvalue {};", c.name, c.formula, c.eigenvalue.name());
        }
        let list = |v: &[usize]| v.iter().map(|i| names[*i].as_str()).collect::<Vec<_>>().join(", ");
        for c in &self.cartans {
            let _ = writeln!(
                out,
                "  cartan {}: p=[{}], h=[{}] pattern={};",
                c.label,
                list(&c.p),
                list(&c.h),
                c.pattern.keyword()
            );
        }
        for inv in &self.involutions {
            let maps: Vec<String> = inv
                .image
                .iter()
                .enumerate()
                .filter(|(i, (t, neg))| *i != *t || *neg)
                .map(|(i, (t, neg))| format!("{}->{}{}", names[i], if *neg { "-" } else { "" }, names[*t]))
                .collect();
            if maps.is_empty() {
                let _ = writeln!(out, "  involution {};", inv.name);
            } else {
                let _ = writeln!(out, "  involution {}: {};", inv.name, maps.join(", "));
            }
        }
        for s in &self.spaces {
            let _ = write!(out, "  space {}: dim={} curvature={} rank={}", s.label, s.dim, s.curvature, s.rank);
            if let Some(q) = &s.quotient {
                let _ = write!(out, " quotient=\"{q}\"");
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
        out
    }
}
