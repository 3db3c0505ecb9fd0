use std::collections::HashMap;
use std::sync::Arc;

use super::def::{AlgebraDef, CartanSplit, Casimir, Involution, Pattern, SpaceRecord};
use super::parser::{parse, Expr, MapItem, Name, Pos, Stmt};
use super::AlgebraError;
use crate::field::{ParamContext, ParamKind, Scalar, Symbol};
use crate::pbw::{Element, Terms, Uea};

#[derive(Clone)]
enum Val {
    S(Scalar),
    E(Element),
    V(Vec<Val>),
}

struct Env<'a> {
    params: &'a ParamContext,
    uea: &'a Arc<Uea>,
    vectors: &'a [(Name, Expr)],
    /// Vectors visible at this point: only earlier definitions.
    visible: usize,
    /// Values substituted for the generators, living in `out`.
    images: Option<&'a [Element]>,
    out: &'a Arc<Uea>,
}

fn unknown(n: &str, pos: Pos) -> AlgebraError {
    AlgebraError::UnknownSymbol { line: pos.line, col: pos.col, name: n.to_string() }
}

impl<'a> Env<'a> {
    fn new(params: &'a ParamContext, uea: &'a Arc<Uea>, vectors: &'a [(Name, Expr)], visible: usize) -> Self {
        Env { params, uea, vectors, visible, images: None, out: uea }
    }

    fn gen(&self, i: usize) -> Element {
        match self.images {
            Some(v) => v[i].clone(),
            None => Element::gen(self.uea, i),
        }
    }
    fn family(&self, name: &str) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        for k in 1.. {
            match self.uea.index_of(&format!("{name}{k}")) {
                Some(i) => out.push(i),
                None => break,
            }
        }
        (!out.is_empty()).then_some(out)
    }

    fn ident(&self, name: &str, pos: Pos) -> Result<Val, AlgebraError> {
        if let Some(i) = self.uea.index_of(name) {
            return Ok(Val::E(self.gen(i)));
        }
        let s = Symbol::new(name);
        match self.params.get(s) {
            Some(ParamKind::Free) => return Ok(Val::S(Scalar::from_symbol(s))),
            Some(ParamKind::Defined(d)) => return Ok(Val::S(d.clone())),
            None => {}
        }
        if let Some(k) = self.vectors[..self.visible].iter().rposition(|(n, _)| n.name == name) {
            let sub = Env { visible: k, ..*self };
            return sub.eval(&self.vectors[k].1);
        }
        if let Some(f) = self.family(name) {
            return Ok(Val::V(f.into_iter().map(|i| Val::E(self.gen(i))).collect()));
        }
        // component of a vector macro, e.g. W1
        let split = name.trim_end_matches(|c: char| c.is_ascii_digit());
        if split.len() < name.len() {
            if let Ok(k) = name[split.len()..].parse::<usize>() {
                if self.vectors[..self.visible].iter().any(|(n, _)| n.name == split) {
                    if let Val::V(v) = self.ident(split, pos)? {
                        if k >= 1 && k <= v.len() {
                            return Ok(v[k - 1].clone());
                        }
                    }
                }
            }
        }
        if name == "i" {
            return Ok(Val::S(Scalar::i()));
        }
        Err(unknown(name, pos))
    }

    fn eval(&self, e: &Expr) -> Result<Val, AlgebraError> {
        match e {
            Expr::Int(v, _) => Ok(Val::S(Scalar::from_int(*v))),
            Expr::Ident(n, p) => self.ident(n, *p),
            Expr::Neg(a) => self.neg(self.eval(a)?),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?, a.pos()),
            Expr::Sub(a, b) => {
                let nb = self.neg(self.eval(b)?)?;
                self.add(self.eval(a)?, nb, a.pos())
            }
            Expr::Mul(a, b, p) => self.mul(self.eval(a)?, self.eval(b)?, *p),
            Expr::Div(a, b, p) => match self.eval(b)? {
                Val::S(d) => {
                    let inv = d.inv()?;
                    self.mul(self.eval(a)?, Val::S(inv), *p)
                }
                _ => Err(AlgebraError::at(*p, "division by a non-scalar")),
            },
            Expr::Pow(a, k, p) => match self.eval(a)? {
                Val::S(s) => Ok(Val::S(s.powi(*k)?)),
                Val::E(x) if *k >= 0 => Ok(Val::E(x.pow(*k as u32))),
                Val::E(x) => match inverse_of(&x) {
                    Some(inv) => Ok(Val::E(inv.pow(k.unsigned_abs()))),
                    None => Err(AlgebraError::at(*p, "negative power of a non-invertible element")),
                },
                Val::V(_) => Err(AlgebraError::at(*p, "power of a vector; use sq or dot")),
            },
            Expr::Bracket(a, b, p) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match (x, y) {
                    (Val::V(_), _) | (_, Val::V(_)) => Err(AlgebraError::at(*p, "bracket of a vector")),
                    (Val::S(_), _) | (_, Val::S(_)) => Ok(Val::S(Scalar::zero())),
                    (Val::E(x), Val::E(y)) => Ok(Val::E(x.commutator(&y))),
                }
            }
            Expr::Call(f, args, p) => self.call(f, args, *p),
        }
    }

    fn call(&self, f: &str, args: &[Expr], p: Pos) -> Result<Val, AlgebraError> {
        let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
        let vec = |v: &Val| -> Result<Vec<Val>, AlgebraError> {
            match v {
                Val::V(x) if x.len() == 3 || f != "cross" => Ok(x.clone()),
                _ => Err(AlgebraError::at(p, format!("{f} expects vector arguments"))),
            }
        };
        match (f, vals.as_slice()) {
            ("dot", [a, b]) => self.dot(vec(a)?, vec(b)?, p),
            ("sq", [a]) => self.dot(vec(a)?, vec(a)?, p),
            ("cross", [a, b]) => {
                let (a, b) = (vec(a)?, vec(b)?);
                let mut out = Vec::new();
                for i in 0..3 {
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    let l = self.mul(a[j].clone(), b[k].clone(), p)?;
                    let r = self.mul(a[k].clone(), b[j].clone(), p)?;
                    out.push(self.add(l, self.neg(r)?, p)?);
                }
                Ok(Val::V(out))
            }
            ("comp", [Val::V(v), _]) => match &args[1] {
                Expr::Int(k, _) if *k >= 1 && (*k as usize) <= v.len() => Ok(v[*k as usize - 1].clone()),
                _ => Err(AlgebraError::at(p, "comp expects a literal index")),
            },
            ("dot" | "sq" | "cross" | "comp", _) => Err(AlgebraError::at(p, format!("wrong number of arguments to {f}"))),
            _ => Err(unknown(f, p)),
        }
    }

    fn dot(&self, a: Vec<Val>, b: Vec<Val>, p: Pos) -> Result<Val, AlgebraError> {
        if a.len() != b.len() {
            return Err(AlgebraError::at(p, "vector lengths differ"));
        }
        let mut acc = Val::S(Scalar::zero());
        for (x, y) in a.into_iter().zip(b) {
            let t = self.mul(x, y, p)?;
            acc = self.add(acc, t, p)?;
        }
        Ok(acc)
    }

    fn neg(&self, a: Val) -> Result<Val, AlgebraError> {
        Ok(match a {
            Val::S(s) => Val::S(-s),
            Val::E(x) => Val::E(-x),
            Val::V(v) => Val::V(v.into_iter().map(|x| self.neg(x)).collect::<Result<_, _>>()?),
        })
    }

    fn add(&self, a: Val, b: Val, p: Pos) -> Result<Val, AlgebraError> {
        Ok(match (a, b) {
            (Val::S(x), Val::S(y)) => Val::S(&x + &y),
            (Val::E(x), Val::E(y)) => Val::E(&x + &y),
            (Val::S(s), Val::E(x)) | (Val::E(x), Val::S(s)) => Val::E(&x + &Element::scalar(self.out, s)),
            (Val::V(x), Val::V(y)) if x.len() == y.len() => {
                Val::V(x.into_iter().zip(y).map(|(a, b)| self.add(a, b, p)).collect::<Result<_, _>>()?)
            }
            _ => return Err(AlgebraError::at(p, "cannot add a vector and a non-vector")),
        })
    }

    fn mul(&self, a: Val, b: Val, p: Pos) -> Result<Val, AlgebraError> {
        Ok(match (a, b) {
            (Val::S(x), Val::S(y)) => Val::S(&x * &y),
            (Val::E(x), Val::E(y)) => Val::E(&x * &y),
            (Val::S(s), Val::E(x)) | (Val::E(x), Val::S(s)) => Val::E(x.scale(&s)),
            (s @ (Val::S(_) | Val::E(_)), Val::V(v)) => {
                Val::V(v.into_iter().map(|x| self.mul(s.clone(), x, p)).collect::<Result<_, _>>()?)
            }
            (Val::V(v), s @ (Val::S(_) | Val::E(_))) => {
                Val::V(v.into_iter().map(|x| self.mul(x, s.clone(), p)).collect::<Result<_, _>>()?)
            }
            (Val::V(_), Val::V(_)) => return Err(AlgebraError::at(p, "product of two vectors; use dot or cross")),
        })
    }

    fn element(&self, e: &Expr) -> Result<Element, AlgebraError> {
        match self.eval(e)? {
            Val::E(x) => Ok(x),
            Val::S(s) => Ok(Element::scalar(self.out, s)),
            Val::V(_) => Err(AlgebraError::at(e.pos(), "expected an algebra element, found a vector")),
        }
    }

    fn scalar(&self, e: &Expr) -> Result<Scalar, AlgebraError> {
        match self.eval(e)? {
            Val::S(s) => Ok(s),
            _ => Err(AlgebraError::at(e.pos(), "expected a scalar")),
        }
    }
}

/// `g⁻¹` for a bare generator with an adjoined inverse.
fn inverse_of(x: &Element) -> Option<Element> {
    let (m, c) = x.terms().iter().next().filter(|_| x.len() == 1)?;
    let slot = m.first_slot()?;
    if !c.is_one() || m.degree() != 1 || m.exponents()[slot] != 1 {
        return None;
    }
    Element::inverse_gen(x.uea(), slot).ok()
}

fn slots(uea: &Uea, names: &[Name]) -> Result<Vec<usize>, AlgebraError> {
    let mut out = Vec::new();
    for n in names {
        if let Some(i) = uea.index_of(&n.name) {
            out.push(i);
            continue;
        }
        let mut fam = Vec::new();
        for k in 1.. {
            match uea.index_of(&format!("{}{k}", n.name)) {
                Some(i) => fam.push(i),
                None => break,
            }
        }
        if fam.is_empty() {
            return Err(unknown(&n.name, n.pos));
        }
        out.extend(fam);
    }
    Ok(out)
}

fn involution(uea: &Uea, name: &Name, maps: &[MapItem]) -> Result<Involution, AlgebraError> {
    let mut inv = Involution::identity(&name.name, uea.n());
    for m in maps {
        let from = slots(uea, std::slice::from_ref(&m.from))?;
        let to = slots(uea, std::slice::from_ref(&m.to))?;
        if from.len() != to.len() {
            return Err(AlgebraError::at(m.from.pos, "involution maps families of different sizes"));
        }
        for (f, t) in from.into_iter().zip(to) {
            inv.image[f] = (t, m.negate);
        }
    }
    Ok(inv)
}

/// Inlines vector macros so the formula stands on its own.
fn inline(e: &Expr, vectors: &[(Name, Expr)], visible: usize, uea: &Uea) -> Expr {
    let lookup = |n: &str| -> Option<Expr> {
        if uea.index_of(n).is_some() {
            return None;
        }
        if let Some(k) = vectors[..visible].iter().rposition(|(v, _)| v.name == n) {
            return Some(inline(&vectors[k].1, vectors, k, uea));
        }
        let stem = n.trim_end_matches(|c: char| c.is_ascii_digit());
        if stem.len() < n.len() {
            if let Some(k) = vectors[..visible].iter().rposition(|(v, _)| v.name == stem) {
                let idx: i64 = n[stem.len()..].parse().ok()?;
                let pos = vectors[k].0.pos;
                let inner = inline(&vectors[k].1, vectors, k, uea);
                return Some(Expr::Call("comp".into(), vec![inner, Expr::Int(idx, pos)], pos));
            }
        }
        None
    };
    e.replace(&lookup)
}

pub(crate) fn eval_formula(e: &Expr, params: &ParamContext, uea: &Arc<Uea>) -> Result<Element, AlgebraError> {
    Env::new(params, uea, &[], 0).element(e)
}

/// Evaluates with each generator of `names` replaced by `images[i]`.
pub(crate) fn eval_formula_on(
    e: &Expr,
    params: &ParamContext,
    names: &Arc<Uea>,
    images: &[Element],
) -> Result<Element, AlgebraError> {
    let out = images.first().map(|x| x.uea()).unwrap_or(names);
    Env { images: Some(images), out, ..Env::new(params, names, &[], 0) }.element(e)
}

pub fn build(ast: &super::parser::Ast) -> Result<AlgebraDef, AlgebraError> {
    let mut gens: Option<&Vec<Name>> = None;
    for s in &ast.stmts {
        if let Stmt::Generators(g, pos) = s {
            if gens.is_some() {
                return Err(AlgebraError::at(*pos, "generators declared twice"));
            }
            gens = Some(g);
        }
    }
    let gens = gens.ok_or(AlgebraError::NoGenerators)?;
    if gens.is_empty() {
        return Err(AlgebraError::NoGenerators);
    }
    let names: Vec<String> = gens.iter().map(|n| n.name.clone()).collect();
    let abelian = Uea::new(names.clone(), Vec::new())?;

    let vectors: Vec<(Name, Expr)> = ast
        .stmts
        .iter()
        .filter_map(|s| match s {
            Stmt::Vector(n, e) => Some((n.clone(), e.clone())),
            _ => None,
        })
        .collect();

    let mut params = ParamContext::new();
    for s in &ast.stmts {
        match s {
            Stmt::Params(list) => {
                for n in list {
                    params.declare_free(&n.name).map_err(|e| AlgebraError::at(n.pos, e.to_string()))?;
                }
            }
            Stmt::Define(n, e) => {
                let env = Env::new(&params, &abelian, &[], 0);
                let v = env.scalar(e)?;
                params.declare_defined(&n.name, v).map_err(|e| AlgebraError::at(n.pos, e.to_string()))?;
            }
            _ => {}
        }
    }

    // brackets are read in the abelian algebra, then the real one is built
    let env = Env::new(&params, &abelian, &vectors, vectors.len());
    let mut seen: HashMap<(usize, usize), (usize, usize, Terms)> = HashMap::new();
    let mut table = Vec::new();
    for s in &ast.stmts {
        if let Stmt::Bracket(x, y, e) = s {
            let i = abelian.index_of(&x.name).ok_or_else(|| unknown(&x.name, x.pos))?;
            let j = abelian.index_of(&y.name).ok_or_else(|| unknown(&y.name, y.pos))?;
            let t = env.element(e)?.terms().clone();
            let (line, col) = (x.pos.line, x.pos.col);
            let (xs, ys) = (x.name.clone(), y.name.clone());
            if i == j && !t.is_empty() {
                return Err(AlgebraError::InconsistentBracket { line, col, x: xs, y: ys });
            }
            let key = (i.min(j), i.max(j));
            if let Some((pi, _, pt)) = seen.get(&key) {
                let neg: Terms = t.iter().map(|(m, c)| (m.clone(), -c)).collect();
                let agrees = if *pi == i { *pt == t } else { *pt == neg };
                return Err(if agrees {
                    AlgebraError::DuplicateBracket { line, col, x: xs, y: ys }
                } else {
                    AlgebraError::InconsistentBracket { line, col, x: xs, y: ys }
                });
            }
            seen.insert(key, (i, j, t.clone()));
            table.push((i, j, t));
        }
    }
    let uea = Uea::new(names, table)?;
    let env = Env::new(&params, &uea, &vectors, vectors.len());

    let mut def = AlgebraDef {
        name: ast.name.clone(),
        params: params.clone(),
        uea: uea.clone(),
        casimirs: Vec::new(),
        cartans: Vec::new(),
        involutions: Vec::new(),
        spaces: Vec::new(),
    };
    for s in &ast.stmts {
        match s {
            Stmt::Casimir(n, e, ev) => {
                let sym = Symbol::new(&ev.name);
                if !params.is_free(sym) {
                    return Err(unknown(&ev.name, ev.pos));
                }
                let formula = inline(e, &vectors, vectors.len(), &uea);
                let element = eval_formula(&formula, &params, &uea)?;
                def.casimirs.push(Casimir { name: n.name.clone(), element, eigenvalue: sym, formula });
            }
            Stmt::Cartan { label, p, h, pattern } => {
                let pattern = match pattern.name.as_str() {
                    "zero" => Pattern::Zero,
                    "subh" => Pattern::SubH,
                    _ => return Err(AlgebraError::at(pattern.pos, "pattern must be `zero` or `subh`")),
                };
                let (p, h) = (slots(&uea, p)?, slots(&uea, h)?);
                let mut all: Vec<usize> = p.iter().chain(&h).copied().collect();
                all.sort_unstable();
                if all != (0..uea.n()).collect::<Vec<_>>() {
                    return Err(AlgebraError::at(label.pos, "cartan split must partition the generators"));
                }
                def.cartans.push(CartanSplit { label: label.name.clone(), p, h, pattern });
            }
            Stmt::Involution(n, maps) => def.involutions.push(involution(&uea, n, maps)?),
            Stmt::Space { label, dim, rank, curvature, quotient } => {
                let need = |v: &Option<i64>, what: &str| -> Result<u32, AlgebraError> {
                    let v = v.ok_or_else(|| AlgebraError::at(label.pos, format!("space needs {what}")))?;
                    u32::try_from(v).map_err(|_| AlgebraError::at(label.pos, format!("{what} out of range")))
                };
                let curvature = match curvature {
                    Some(e) => env.scalar(e)?,
                    None => Scalar::zero(),
                };
                def.spaces.push(SpaceRecord {
                    label: label.name.clone(),
                    dim: need(dim, "dim")?,
                    curvature,
                    rank: need(rank, "rank")?,
                    quotient: quotient.clone(),
                });
            }
            _ => {}
        }
    }
    Ok(def)
}

/// Evaluates `stmt; …; expr` in `uea`. Leading `params`, `define` and
/// `vector` statements extend the context for the final expression.
pub fn evaluate(text: &str, params: &ParamContext, uea: &Arc<Uea>) -> Result<Element, AlgebraError> {
    let (head, expr) = match text.rfind(';') {
        Some(k) => (&text[..=k], &text[k + 1..]),
        None => ("", text),
    };
    let ast = parse(&format!("algebra _ {{ {head} vector _v = ({expr}); }}"))?;
    let mut params = params.clone();
    let mut vectors = Vec::new();
    for s in &ast.stmts {
        match s {
            Stmt::Params(list) => {
                for n in list {
                    if !params.contains(Symbol::new(&n.name)) {
                        params.declare_free(&n.name).map_err(|e| AlgebraError::at(n.pos, e.to_string()))?;
                    }
                }
            }
            Stmt::Define(n, e) => {
                let v = Env::new(&params, uea, &[], 0).scalar(e)?;
                params.declare_defined(&n.name, v).map_err(|e| AlgebraError::at(n.pos, e.to_string()))?;
            }
            Stmt::Vector(n, e) => vectors.push((n.clone(), e.clone())),
            _ => return Err(AlgebraError::syntax(1, 1, "only params, define and vector may precede the expression")),
        }
    }
    let Some((_, e)) = vectors.pop() else {
        return Err(AlgebraError::syntax(1, 1, "expected expression"));
    };
    Env::new(&params, uea, &vectors, vectors.len()).element(&e)
}

/// Evaluates a DSL expression against an existing definition.
pub fn element_in(def: &AlgebraDef, text: &str) -> Result<Element, AlgebraError> {
    evaluate(text, &def.params, &def.uea)
}
