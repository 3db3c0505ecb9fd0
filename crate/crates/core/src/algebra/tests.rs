use super::*;
use crate::field::{Scalar, Symbol};
use crate::pbw::Element;

fn gal() -> AlgebraDef {
    catalog_get("galilei").unwrap()
}

#[test]
fn galilei_source_shape() {
    let g = gal();
    assert_eq!(g.generators().len(), 10);
    assert_eq!(g.casimirs.len(), 2);
    assert_eq!(g.bracket("K1", "H").unwrap(), g.gen("P1").unwrap());
}

#[test]
fn empty_generator_list_is_rejected() {
    assert_eq!(parse_algebra("algebra a { generators []; }").unwrap_err(), AlgebraError::NoGenerators);
}

#[test]
fn bracket_declarations_must_be_antisymmetric_and_unique() {
    let bad = "algebra a { generators [A, B, C]; bracket [A,B] = C; bracket [B,A] = C; }";
    assert!(matches!(parse_algebra(bad), Err(AlgebraError::InconsistentBracket { .. })));
    let dup = "algebra a { generators [A, B, C]; bracket [A,B] = C; bracket [B,A] = -C; }";
    assert!(matches!(parse_algebra(dup), Err(AlgebraError::DuplicateBracket { .. })));
    let selfb = "algebra a { generators [A, B]; bracket [A,A] = B; }";
    assert!(matches!(parse_algebra(selfb), Err(AlgebraError::InconsistentBracket { .. })));
}

#[test]
fn unknown_symbols_carry_positions() {
    let e = parse_algebra("algebra a {\n generators [A, B];\n bracket [A,B] = q*A;\n}").unwrap_err();
    assert_eq!(e, AlgebraError::UnknownSymbol { line: 3, col: 18, name: "q".into() });
    let e = parse_algebra("algebra a { generators [A]; casimir C = A eigenvalue z; }").unwrap_err();
    assert!(matches!(e, AlgebraError::UnknownSymbol { .. }));
}

#[test]
fn ascii_aliases_match_greek() {
    let a = parse_algebra("algebra a { params [gamma]; define kappa2 = -gamma^2; generators [X, Y]; bracket [X,Y] = kappa2*X; }")
        .unwrap();
    let b = parse_algebra("algebra a { params [γ]; define κ2 = -γ^2; generators [X, Y]; bracket [X,Y] = -γ^2*X; }").unwrap();
    assert_eq!(a, b);
}

#[test]
fn whole_catalog_passes_checks_and_round_trips() {
    for name in catalog_names() {
        let def = catalog_get(name).unwrap();
        for r in check_all(&def) {
            assert!(r.passed(), "{name}: {} {:?}", r.check, r.failures);
        }
        let text = def.render();
        let again = parse_algebra(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(again, def, "{name}");
        assert_eq!(again.render(), text);
    }
}

#[test]
fn unknown_catalog_name() {
    assert_eq!(catalog_get("sl2").unwrap_err(), AlgebraError::UnknownAlgebra("sl2".into()));
}

#[test]
fn overridden_bracket_breaks_jacobi() {
    let g = gal();
    let j1 = g.gen("J1").unwrap();
    let bad = g.with_bracket("P1", "K1", &j1).unwrap();
    let r = check_jacobi(&bad);
    assert!(!r.passed());
    // the cyclic sum is invariant under cyclic shifts: (J2,P1,K1) ~ (P1,K1,J2)
    let f = r.failures.iter().find(|f| f.at == ["P1", "K1", "J2"]).expect("triple reported");
    assert_eq!(f.witness, -g.gen("J3").unwrap().lift(&bad.uea).unwrap_or_else(|_| bad.gen("J3").unwrap()));
}

#[test]
fn abelian_table_passes_jacobi() {
    let a = parse_algebra("algebra ab { generators [A, B, C, D]; }").unwrap();
    assert!(check_jacobi(&a).passed());
}

#[test]
fn p_squared_is_not_central_in_poincare() {
    let p = catalog_get("poincare").unwrap();
    let p2 = p.parse_element("sq(P)").unwrap();
    let r = check_central(&p, "P2", &p2);
    assert!(!r.passed());
    // [P², K1] = P1[P1,K1] + [P1,K1]P1 = -2γ² H P1
    let f = r.failures.iter().find(|f| f.at[1] == "K1").unwrap();
    let g2 = Scalar::var("γ").powi(2).unwrap();
    let want = (&p.gen("H").unwrap() * &p.gen("P1").unwrap()).scale(&(&Scalar::from_int(-2) * &g2));
    assert_eq!(f.witness, want);
    assert!(r.failures.iter().all(|f| f.at[1].starts_with('K')));
}

#[test]
fn quartic_casimirs_are_central() {
    let g = gal();
    assert!(check_central(&g, "C2", &g.casimir("C2").unwrap().element).passed());
    let ds = catalog_get("ds").unwrap();
    assert!(check_central(&ds, "C2", &ds.casimir("C2").unwrap().element).passed());
    // without the κ1 (J·K)^2 term it fails
    let partial = ds.parse_element("sq(κ2*H*J + cross(K,P)) + κ2*dot(J,P)^2").unwrap();
    assert!(!check_central(&ds, "partial", &partial).passed());
}

#[test]
fn cartan_patterns() {
    let g = gal();
    for s in &g.cartans {
        assert_eq!(s.pattern, Pattern::Zero);
        assert!(check_cartan(&g, s).passed());
    }
    let p = catalog_get("poincare").unwrap();
    let s2 = p.cartan("S2").unwrap();
    assert_eq!(s2.pattern, Pattern::SubH);
    assert!(check_cartan(&p, s2).passed());
    let strict = CartanSplit { pattern: Pattern::Zero, ..s2.clone() };
    assert!(!check_cartan(&p, &strict).passed());
}

#[test]
fn mixing_rotations_into_p_violates_the_pattern() {
    let g = gal();
    let ix = |n: &str| g.uea.index_of(n).unwrap();
    let split = CartanSplit {
        label: "mixed".into(),
        p: vec![ix("H"), ix("P1"), ix("P2"), ix("P3"), ix("J1")],
        h: vec![ix("K1"), ix("K2"), ix("K3"), ix("J2"), ix("J3")],
        pattern: Pattern::Zero,
    };
    let r = check_cartan(&g, &split);
    assert!(!r.passed());
    // [J2, J3] = J1 leaves 𝔥
    let f = r.failures.iter().find(|f| f.at == ["J2", "J3"]).unwrap();
    assert_eq!(f.witness, g.gen("J1").unwrap());
}

#[test]
fn involutions() {
    let g = gal();
    let pt = g.involution("PT").unwrap();
    assert!(check_involution(&g, pt).passed());
    assert!(check_involution(&g, &Involution::identity("id", 10)).passed());
    let mut flip_h = Involution::identity("flipH", 10);
    flip_h.image[0] = (0, true);
    let r = check_involution(&g, &flip_h);
    assert!(r.failures.iter().any(|f| f.at == ["H", "K1"]));
}

#[test]
fn poincare_boost_momentum_bracket() {
    let p = catalog_get("poincare").unwrap();
    let g2 = Scalar::var("γ").powi(2).unwrap();
    assert_eq!(p.bracket("P1", "K1").unwrap(), p.gen("H").unwrap().scale(&-g2));
    assert!(p.bracket("P1", "K2").unwrap().is_zero());
}

#[test]
fn sign_variants_are_substitutions() {
    let rot = |x: &str| {
        let mut m = std::collections::HashMap::new();
        m.insert(Symbol::new(x), &Scalar::i() * &Scalar::var(&format!("{x}\u{302}")));
        m
    };
    let minus = catalog_get("nh-minus").unwrap();
    let plus = catalog_get("nh-plus").unwrap();
    let mut sub = minus.substitute("nh-plus", &rot("λ")).unwrap();
    for (s, t) in sub.spaces.iter_mut().zip(&plus.spaces) {
        s.quotient = t.quotient.clone();
    }
    assert_eq!(sub, plus);
    let lh2 = Scalar::var("λ̂").powi(2).unwrap();
    assert_eq!(plus.bracket("H", "P1").unwrap(), plus.gen("K1").unwrap().scale(&lh2));
    assert_eq!(plus.spaces[0].curvature, lh2);

    let e = catalog_get("euclidean4").unwrap();
    let mut sub = catalog_get("poincare").unwrap().substitute("euclidean4", &rot("γ")).unwrap();
    for (s, t) in sub.spaces.iter_mut().zip(&e.spaces) {
        s.quotient = t.quotient.clone();
    }
    assert_eq!(sub, e);
    assert_eq!(e.bracket("P1", "K1").unwrap(), e.gen("H").unwrap().scale(&Scalar::var("γ̂").powi(2).unwrap()));
}

#[test]
fn contractions_are_syntactic_limits() {
    let g = gal();
    let p = catalog_get("poincare").unwrap();
    assert!(check_contraction(&p, &g, "γ").passed());
    let ds = catalog_get("ds").unwrap();
    assert!(check_contraction(&ds, &p, "λ").passed());
    assert!(check_contraction(&catalog_get("nh-minus").unwrap(), &g, "λ").passed());
    assert!(!check_contraction(&ds, &g, "λ").passed());
}

#[test]
fn extended_galilei_has_central_charge() {
    let e = catalog_get("galilei-extended").unwrap();
    let w = e.bracket("K2", "P2").unwrap();
    assert_eq!(w, e.gen("Ξ").unwrap().scale(&Scalar::var("m")));
    assert_eq!(e.casimirs.len(), 3);
    let _ = Element::one(&e.uea);
}
