use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::checks::check_all;
use super::def::AlgebraDef;
use super::{parse_algebra, AlgebraError};
use crate::field::{Scalar, Symbol};

pub const CATALOG: [&str; 10] = [
    "galilei",
    "galilei-extended",
    "poincare",
    "nh-plus",
    "nh-minus",
    "ads",
    "ds",
    "euclidean4",
    "so5",
    "so41-euclidean-chain",
];

const SOURCES: &[(&str, &str)] = &[
    ("galilei", include_str!("../../catalog/galilei.alg")),
    ("galilei-extended", include_str!("../../catalog/galilei-extended.alg")),
    ("poincare", include_str!("../../catalog/poincare.alg")),
    ("nh-minus", include_str!("../../catalog/nh-minus.alg")),
    ("ds", include_str!("../../catalog/ds.alg")),
];

/// Entries obtained from a source by `x → i·x̂` on the listed primitives,
/// with the homogeneous-space names replaced.
struct Derived {
    name: &'static str,
    base: &'static str,
    rotate: &'static [&'static str],
    quotients: [&'static str; 2],
}

const DERIVED: &[Derived] = &[
    Derived {
        name: "nh-plus",
        base: "nh-minus",
        rotate: &["λ"],
        quotients: ["T6(SO(2)⊗SO(3))/ISO(3)", "T6(SO(2)⊗SO(3))/(SO(2)⊗SO(3))"],
    },
    Derived {
        name: "ads",
        base: "ds",
        rotate: &["λ"],
        quotients: ["SO(3,2)/SO(3,1)", "SO(3,2)/(SO(2)⊗SO(3))"],
    },
    Derived {
        name: "euclidean4",
        base: "poincare",
        rotate: &["γ"],
        quotients: ["ISO(4)/SO(4)", "ISO(4)/(R⊗SO(3))"],
    },
    Derived {
        name: "so5",
        base: "ds",
        rotate: &["γ", "λ"],
        quotients: ["SO(5)/SO(4)", "SO(5)/(SO(2)⊗SO(3))"],
    },
    Derived {
        name: "so41-euclidean-chain",
        base: "ds",
        rotate: &["γ"],
        quotients: ["SO(4,1)/SO(4)", "SO(4,1)/(SO(1,1)⊗SO(3))"],
    },
];

/// Name of the fresh primitive replacing `x` under `x → i·x̂`.
pub(crate) fn hatted(x: &str) -> String {
    format!("{x}\u{0302}")
}

/// Bindings `x → i·x̂` for each listed primitive.
pub(crate) fn rotation(names: &[&str]) -> HashMap<Symbol, Scalar> {
    names
        .iter()
        .map(|x| (Symbol::new(x), &Scalar::i() * &Scalar::var(&hatted(x))))
        .collect()
}

fn build(name: &str) -> Result<AlgebraDef, AlgebraError> {
    if let Some((_, src)) = SOURCES.iter().find(|(n, _)| *n == name) {
        return parse_algebra(src);
    }
    let d = DERIVED.iter().find(|d| d.name == name).ok_or_else(|| AlgebraError::UnknownAlgebra(name.into()))?;
    let base = catalog_get(d.base)?;
    let mut def = base.substitute(d.name, &rotation(d.rotate))?;
    for (s, q) in def.spaces.iter_mut().zip(d.quotients) {
        s.quotient = Some(q.to_string());
    }
    Ok(def)
}

fn cache() -> &'static Mutex<HashMap<String, AlgebraDef>> {
    static CACHE: OnceLock<Mutex<HashMap<String, AlgebraDef>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A catalog algebra; checked once on first use.
pub fn catalog_get(name: &str) -> Result<AlgebraDef, AlgebraError> {
    if let Some(d) = cache().lock().expect("catalog cache").get(name) {
        return Ok(d.clone());
    }
    let def = build(name)?;
    for r in check_all(&def) {
        if !r.passed() {
            return Err(AlgebraError::CheckFailed(name.into(), r.check));
        }
    }
    cache().lock().expect("catalog cache").insert(name.to_string(), def.clone());
    Ok(def)
}

pub fn catalog_names() -> &'static [&'static str] {
    &CATALOG
}

/// The `.alg` text of a catalog entry.
pub fn catalog_source(name: &str) -> Result<String, AlgebraError> {
    Ok(catalog_get(name)?.render())
}
