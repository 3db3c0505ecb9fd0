//! Noncommutative arithmetic in universal enveloping algebras: PBW normal
//! ordering, products, commutators, localization at a generator and
//! reduction modulo central relations.

mod element;
mod mono;
mod reduce;
mod uea;

pub use element::{Element, Letter};
pub use mono::Mono;
pub use reduce::{reduce_mod_center, Reducer, Reduction, ReductionStatus};
pub use uea::{Terms, Uea};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PbwError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("an algebra needs at least one generator")]
    NoGenerators,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("bracket [{0},{1}] must be linear in the generators")]
    BracketDegree(String, String),
    #[error("bracket [{0},{1}] is not antisymmetric")]
    InconsistentBracket(String, String),
    #[error("inverse of `{0}` does not terminate: ad({0}) is not nilpotent")]
    NonTerminatingInverse(String),
    #[error("generator `{0}` has no inverse in this algebra")]
    NotInvertible(String),
    #[error("relation has no non-constant leading term")]
    TrivialRelation,
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::field::Scalar;

    fn dot(u: &std::sync::Arc<Uea>, a: &str, b: &str) -> Element {
        let mut acc = Element::zero(u);
        for i in 1..=3 {
            acc = &acc + &(&g(u, &format!("{a}{i}")) * &g(u, &format!("{b}{i}")));
        }
        acc
    }

    fn w(u: &std::sync::Arc<Uea>, i: usize) -> Element {
        let (j, k) = ((i % 3) + 1, ((i + 1) % 3) + 1);
        &(&g(u, &format!("K{j}")) * &g(u, &format!("P{k}"))) - &(&g(u, &format!("K{k}")) * &g(u, &format!("P{j}")))
    }

    #[test]
    fn boost_past_time_translation() {
        let u = galilei(false);
        let lhs = &g(&u, "K1") * &g(&u, "H");
        let rhs = &(&g(&u, "H") * &g(&u, "K1")) + &g(&u, "P1");
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.render(), "H*K1 + P1");
    }

    #[test]
    fn ordered_word_is_untouched() {
        let u = galilei(false);
        let w = Element::parse_word(&u, "H P1 J3").unwrap();
        let e = Element::normal_order(&u, &[(Scalar::one(), w)]).unwrap();
        assert_eq!(e.render(), "H*P1*J3");
        assert!(Element::parse_word(&u, "H Q1").is_err());
    }

    #[test]
    fn central_charge_appears_in_extension() {
        let u = galilei(true);
        let pk = &g(&u, "P1") * &g(&u, "K1");
        let kp = &g(&u, "K1") * &g(&u, "P1");
        let xi = &g(&u, "Ξ").scale(&Scalar::var("m"));
        assert_eq!(pk, &kp - xi);
    }

    #[test]
    fn p_dot_w_vanishes() {
        let u = galilei(false);
        let mut acc = Element::zero(&u);
        for i in 1..=3 {
            acc = &acc + &(&g(&u, &format!("P{i}")) * &w(&u, i));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn j_dot_p_against_boost_gives_w() {
        let u = galilei(false);
        let jp = dot(&u, "J", "P");
        assert_eq!(jp.commutator(&g(&u, "K1")), w(&u, 1));
    }

    #[test]
    fn casimirs_are_central() {
        let u = galilei(false);
        let c1 = dot(&u, "P", "P");
        let mut c2 = Element::zero(&u);
        for i in 1..=3 {
            c2 = &c2 + &(&w(&u, i) * &w(&u, i));
        }
        for name in u.names().to_vec() {
            let x = g(&u, &name);
            assert!(c1.commutator(&x).is_zero(), "P^2 with {name}");
            assert!(c2.commutator(&x).is_zero(), "W^2 with {name}");
        }
    }

    #[test]
    fn inverse_of_time_translation() {
        let u = galilei(false);
        let h = u.index_of("H").unwrap();
        let v = u.adjoin_inverse(h).unwrap();
        let hinv = Element::inverse_gen(&v, h).unwrap();
        let k1 = g(&v, "K1");
        let p1 = g(&v, "P1");
        // [K1, H^-1] = -H^-2 P1
        assert_eq!(k1.commutator(&hinv), -(&(&hinv * &hinv) * &p1));
        assert!(p1.commutator(&hinv).is_zero());
        assert_eq!(&(&g(&v, "H") * &hinv) * &k1, k1);
    }

    #[test]
    fn inverse_of_rotation_is_rejected() {
        let u = galilei(false);
        // ad(J3) rotates J1 -> J2 -> -J1 forever
        let j3 = u.index_of("J3").unwrap();
        assert!(matches!(u.adjoin_inverse(j3), Err(PbwError::NonTerminatingInverse(_))));
    }

    #[test]
    fn reduction_with_trivial_identity() {
        let u = galilei(false);
        let c1 = dot(&u, "P", "P");
        let mut c2 = Element::zero(&u);
        for i in 1..=3 {
            c2 = &c2 + &(&w(&u, i) * &w(&u, i));
        }
        let (a, b) = (Scalar::var("c1"), Scalar::var("c2"));
        let r = &(&c1 * &c2) - &Element::scalar(&u, &a * &b);
        let rels = vec![(c1.clone(), a.clone()), (c2.clone(), b.clone())];
        let red = reduce_mod_center(&r, &rels, None).unwrap();
        assert_eq!(red.status, ReductionStatus::Reduced);
        assert!(red.reduced.is_zero());
        let reducer = Reducer::new(&u, &rels).unwrap();
        assert!(reducer.is_groebner());
        assert_eq!(reducer.recombine(&red.cofactors), r);
    }
}
