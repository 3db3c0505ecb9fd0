//! Parameter contexts: free symbols and symbols defined by a formula.

use std::collections::{BTreeMap, HashMap};

use super::scalar::Scalar;
use super::symbol::Symbol;
use super::FieldError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Free,
    Defined(Scalar),
}

/// Declared parameters. Defined parameters (such as `κ1 := -λ^2`) are
/// expanded eagerly, so engine scalars only ever mention free symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamContext {
    params: BTreeMap<Symbol, ParamKind>,
    order: Vec<Symbol>,
}

impl ParamContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_free(&mut self, name: &str) -> Result<Symbol, FieldError> {
        let s = Symbol::new(name);
        if self.params.contains_key(&s) {
            return Err(FieldError::DuplicateParam(name.to_string()));
        }
        self.params.insert(s, ParamKind::Free);
        self.order.push(s);
        Ok(s)
    }

    /// Declares `name := definition`. The definition may only mention
    /// already-declared parameters, which keeps definitions acyclic.
    pub fn declare_defined(&mut self, name: &str, definition: Scalar) -> Result<Symbol, FieldError> {
        let s = Symbol::new(name);
        if self.params.contains_key(&s) {
            return Err(FieldError::DuplicateParam(name.to_string()));
        }
        for v in definition.vars() {
            if !self.params.contains_key(&v) {
                return Err(FieldError::UnknownParam(v.name().to_string()));
            }
        }
        let expanded = self.expand(&definition)?;
        self.params.insert(s, ParamKind::Defined(expanded));
        self.order.push(s);
        Ok(s)
    }

    pub fn get(&self, s: Symbol) -> Option<&ParamKind> {
        self.params.get(&s)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.params.contains_key(&s)
    }

    pub fn is_free(&self, s: Symbol) -> bool {
        matches!(self.params.get(&s), Some(ParamKind::Free))
    }

    /// Parameters in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &ParamKind)> {
        self.order.iter().map(move |s| (*s, &self.params[s]))
    }

    pub fn free_symbols(&self) -> Vec<Symbol> {
        self.iter().filter(|(_, k)| **k == ParamKind::Free).map(|(s, _)| s).collect()
    }

    pub fn definition(&self, s: Symbol) -> Option<&Scalar> {
        match self.params.get(&s) {
            Some(ParamKind::Defined(d)) => Some(d),
            _ => None,
        }
    }

    /// Replaces every defined symbol by its definition.
    pub fn expand(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        let mut b = HashMap::new();
        for v in a.vars() {
            if let Some(ParamKind::Defined(d)) = self.params.get(&v) {
                b.insert(v, d.clone());
            }
        }
        a.subs(&b)
    }

    /// Substitutes free parameters. Binding a defined parameter is an error;
    /// rebind the free symbols it is built from instead.
    pub fn substitute(&self, a: &Scalar, bindings: &HashMap<Symbol, Scalar>) -> Result<Scalar, FieldError> {
        for k in bindings.keys() {
            if let Some(ParamKind::Defined(_)) = self.params.get(k) {
                return Err(FieldError::BindDefined(k.name().to_string()));
            }
        }
        self.expand(a)?.subs(bindings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParamContext {
        let mut c = ParamContext::new();
        c.declare_free("λ").unwrap();
        c.declare_free("x").unwrap();
        let l = Scalar::var("λ");
        c.declare_defined("κ1", -(&l * &l)).unwrap();
        c
    }

    #[test]
    fn defined_symbols_expand() {
        let c = ctx();
        let k = Scalar::var("κ1");
        let l = Scalar::var("λ");
        assert_eq!(c.expand(&k).unwrap(), -(&l * &l));
    }

    #[test]
    fn binding_a_defined_symbol_fails() {
        let c = ctx();
        let mut b = HashMap::new();
        b.insert(Symbol::new("κ1"), Scalar::from_int(1));
        assert!(matches!(c.substitute(&Scalar::var("κ1"), &b), Err(FieldError::BindDefined(_))));
    }

    #[test]
    fn unknown_symbols_in_definitions_are_rejected() {
        let mut c = ParamContext::new();
        assert!(c.declare_defined("k", Scalar::var("nope")).is_err());
        c.declare_free("a").unwrap();
        assert!(c.declare_free("a").is_err());
    }
}
