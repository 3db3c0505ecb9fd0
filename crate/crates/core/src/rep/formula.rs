//! Casimir formulas evaluated directly on operators.

use super::{CoeffFn, DiffOp, RepError, Representation};
use crate::algebra::Expr;
use crate::field::{ParamKind, Scalar, Symbol};

#[derive(Clone)]
enum Val {
    S(Scalar),
    O(DiffOp),
    V(Vec<Val>),
}

fn bad(what: &str) -> RepError {
    RepError::NonScalar(format!("cannot evaluate formula: {what}"))
}

struct Env<'a> {
    rep: &'a Representation,
}

impl Env<'_> {
    fn op(&self, s: Scalar) -> DiffOp {
        DiffOp::scalar(&self.rep.field, self.rep.spin.dim(), s)
    }

    fn ident(&self, name: &str) -> Result<Val, RepError> {
        if let Some(op) = self.rep.image(name) {
            return Ok(Val::O(op.clone()));
        }
        let s = Symbol::new(name);
        match self.rep.algebra.params.get(s) {
            Some(ParamKind::Free) => return Ok(Val::S(Scalar::from_symbol(s))),
            Some(ParamKind::Defined(d)) => return Ok(Val::S(d.clone())),
            None => {}
        }
        let family: Vec<Val> = (1..).map_while(|k| self.rep.image(&format!("{name}{k}"))).map(|o| Val::O(o.clone())).collect();
        if !family.is_empty() {
            return Ok(Val::V(family));
        }
        if name == "i" {
            return Ok(Val::S(Scalar::i()));
        }
        Err(RepError::MissingImage(name.to_string()))
    }

    fn eval(&self, e: &Expr) -> Result<Val, RepError> {
        match e {
            Expr::Int(v, _) => Ok(Val::S(Scalar::from_int(*v))),
            Expr::Ident(n, _) => self.ident(n),
            Expr::Neg(a) => self.scale(self.eval(a)?, &-Scalar::one()),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => {
                let nb = self.scale(self.eval(b)?, &-Scalar::one())?;
                self.add(self.eval(a)?, nb)
            }
            Expr::Mul(a, b, _) => self.mul(self.eval(a)?, self.eval(b)?),
            Expr::Div(a, b, _) => match self.eval(b)? {
                Val::S(d) => self.scale(self.eval(a)?, &d.inv()?),
                _ => Err(bad("division by an operator")),
            },
            Expr::Pow(a, k, _) => match self.eval(a)? {
                Val::S(s) => Ok(Val::S(s.powi(*k)?)),
                Val::O(x) if *k >= 0 => {
                    let mut acc = self.op(Scalar::one());
                    for _ in 0..*k {
                        acc = acc.compose(&x)?;
                    }
                    Ok(Val::O(acc))
                }
                _ => Err(bad("negative or vector power")),
            },
            Expr::Bracket(a, b, _) => match (self.eval(a)?, self.eval(b)?) {
                (Val::O(x), Val::O(y)) => Ok(Val::O(x.commutator(&y)?)),
                (Val::S(_), _) | (_, Val::S(_)) => Ok(Val::S(Scalar::zero())),
                _ => Err(bad("bracket of a vector")),
            },
            Expr::Call(f, args, _) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                let vec = |v: &Val| match v {
                    Val::V(x) => Ok(x.clone()),
                    _ => Err(bad("vector function of a non-vector")),
                };
                match (f.as_str(), vals.as_slice()) {
                    ("dot", [a, b]) => self.dot(vec(a)?, vec(b)?),
                    ("sq", [a]) => self.dot(vec(a)?, vec(a)?),
                    ("cross", [a, b]) => {
                        let (a, b) = (vec(a)?, vec(b)?);
                        let mut out = Vec::new();
                        for i in 0..3 {
                            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                            let l = self.mul(a[j].clone(), b[k].clone())?;
                            let r = self.mul(a[k].clone(), b[j].clone())?;
                            out.push(self.add(l, self.scale(r, &-Scalar::one())?)?);
                        }
                        Ok(Val::V(out))
                    }
                    ("comp", [Val::V(v), _]) => match &args[1] {
                        Expr::Int(k, _) if *k >= 1 && (*k as usize) <= v.len() => Ok(v[*k as usize - 1].clone()),
                        _ => Err(bad("component index")),
                    },
                    _ => Err(bad(f)),
                }
            }
        }
    }

    fn dot(&self, a: Vec<Val>, b: Vec<Val>) -> Result<Val, RepError> {
        let mut acc = Val::S(Scalar::zero());
        for (x, y) in a.into_iter().zip(b) {
            acc = self.add(acc, self.mul(x, y)?)?;
        }
        Ok(acc)
    }

    fn scale(&self, a: Val, s: &Scalar) -> Result<Val, RepError> {
        Ok(match a {
            Val::S(x) => Val::S(&x * s),
            Val::O(x) => Val::O(x.scale(&CoeffFn::scalar(s.clone()))),
            Val::V(v) => Val::V(v.into_iter().map(|x| self.scale(x, s)).collect::<Result<_, _>>()?),
        })
    }

    fn add(&self, a: Val, b: Val) -> Result<Val, RepError> {
        Ok(match (a, b) {
            (Val::S(x), Val::S(y)) => Val::S(&x + &y),
            (Val::O(x), Val::O(y)) => Val::O(x.try_add(&y)?),
            (Val::S(s), Val::O(x)) | (Val::O(x), Val::S(s)) => Val::O(x.try_add(&self.op(s))?),
            (Val::V(x), Val::V(y)) if x.len() == y.len() => {
                Val::V(x.into_iter().zip(y).map(|(a, b)| self.add(a, b)).collect::<Result<_, _>>()?)
            }
            _ => return Err(bad("sum of a vector and a non-vector")),
        })
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val, RepError> {
        Ok(match (a, b) {
            (Val::S(x), Val::S(y)) => Val::S(&x * &y),
            (Val::O(x), Val::O(y)) => Val::O(x.compose(&y)?),
            (Val::S(s), x) | (x, Val::S(s)) => self.scale(x, &s)?,
            (o @ Val::O(_), Val::V(v)) => Val::V(v.into_iter().map(|x| self.mul(o.clone(), x)).collect::<Result<_, _>>()?),
            (Val::V(v), o @ Val::O(_)) => Val::V(v.into_iter().map(|x| self.mul(x, o.clone())).collect::<Result<_, _>>()?),
            (Val::V(_), Val::V(_)) => return Err(bad("product of two vectors")),
        })
    }
}

/// The operator of a Casimir's defining formula.
pub(crate) fn formula_operator(rep: &Representation, e: &Expr) -> Result<DiffOp, RepError> {
    let env = Env { rep };
    match env.eval(e)? {
        Val::O(x) => Ok(x),
        Val::S(s) => Ok(env.op(s)),
        Val::V(_) => Err(bad("vector-valued formula")),
    }
}
