//! Solving single-unknown equations of degree one or pure quadratics.

use std::fmt;

use super::poly::Poly;
use super::scalar::Scalar;
use super::symbol::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `x = value`
    Value(Symbol, Scalar),
    /// `x² = value`; no root is chosen.
    Square(Symbol, Scalar),
}

impl Relation {
    pub fn unknown(&self) -> Symbol {
        match self {
            Relation::Value(x, _) | Relation::Square(x, _) => *x,
        }
    }

    pub fn value(&self) -> &Scalar {
        match self {
            Relation::Value(_, v) | Relation::Square(_, v) => v,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Value(x, v) => write!(f, "{x} = {v}"),
            Relation::Square(x, v) => write!(f, "{x}^2 = {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Relation(Relation),
    /// The equation (`expr = 0`) is not of a supported shape.
    Unsolved(Scalar),
}

/// Solves `eq = 0` for `x`, accepting `a·x + b` and `A·x² - B`.
pub fn solve_binomial(eq: &Scalar, x: Symbol) -> Solved {
    // only the numerator matters for `eq = 0`
    let n = eq.numer();
    let parts = n.split_in(x);
    let coeff = |k: usize| parts.get(k).cloned().unwrap_or_else(Poly::zero);
    match parts.len() {
        2 => {
            let a = Scalar::from_poly(coeff(1));
            let b = Scalar::from_poly(coeff(0));
            Solved::Relation(Relation::Value(x, -(&b / &a)))
        }
        3 if coeff(1).is_zero() => {
            let a = Scalar::from_poly(coeff(2));
            let b = Scalar::from_poly(coeff(0));
            Solved::Relation(Relation::Square(x, -(&b / &a)))
        }
        _ => Solved::Unsolved(eq.clone()),
    }
}

/// Root selection for `x² = v` when `v` is an exact square in the primitives.
pub fn positive_root(rel: &Relation) -> Option<Scalar> {
    match rel {
        Relation::Value(_, v) => Some(v.clone()),
        Relation::Square(_, v) => v.sqrt_exact(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Scalar {
        Scalar::var(n)
    }

    #[test]
    fn quadratic_relation() {
        // 4 c² α2² c1 c2 = 1 written with c = 1/γ
        let a = s("α2");
        let lhs = &(&Scalar::from_int(4) * &(&(&a * &a) * &(&s("c1") * &s("c2")))) / &(&s("γ") * &s("γ"));
        let eq = &lhs - &Scalar::one();
        let want = &(&s("γ") * &s("γ")) / &(&Scalar::from_int(4) * &(&s("c1") * &s("c2")));
        assert_eq!(solve_binomial(&eq, Symbol::new("α2")), Solved::Relation(Relation::Square(Symbol::new("α2"), want)));
    }

    #[test]
    fn linear_relation() {
        let eq = &(&s("α1") * &s("c1")) + &(&s("α2") * &s("c2"));
        let want = -(&(&s("α2") * &s("c2")) / &s("c1"));
        assert_eq!(solve_binomial(&eq, Symbol::new("α1")), Solved::Relation(Relation::Value(Symbol::new("α1"), want)));
    }

    #[test]
    fn cubic_is_unsolved() {
        let x = s("x");
        let eq = &(&(&x * &x) * &x) - &Scalar::one();
        assert!(matches!(solve_binomial(&eq, Symbol::new("x")), Solved::Unsolved(_)));
    }
}
