use super::*;
use crate::deform::{root_determination, run_deformation, DeformationSpec};

fn rep(kind: RepKind, spin: Spin, sign: KappaSign) -> Representation {
    build_rep(kind, spin, sign, &RepParams::default()).unwrap()
}

fn open_brackets(r: &Representation) -> Vec<String> {
    let checks = r.verify_brackets().unwrap();
    checks.iter().filter(|c| !c.holds()).map(|c| format!("[{},{}]: {}", c.x, c.y, c.residue.render())).collect()
}

const SPINS: [Spin; 3] = [Spin::ZERO, Spin::HALF, Spin::ONE];

#[test]
fn galilei_bacry_brackets() {
    for s in SPINS {
        let r = rep(RepKind::GalileiBacry, s, KappaSign::Minus);
        assert_eq!(r.verify_brackets().unwrap().len(), 55);
        assert!(open_brackets(&r).is_empty(), "spin {s}: {:#?}", open_brackets(&r));
    }
    let r = rep(RepKind::GalileiBacry, Spin::ZERO, KappaSign::Minus);
    let hk = r.image("H").unwrap().commutator(r.image("K1").unwrap()).unwrap();
    assert_eq!(hk, r.image("P1").unwrap().neg());
}

#[test]
fn newton_hooke_brackets() {
    for sign in [KappaSign::Minus, KappaSign::Plus] {
        for s in SPINS {
            let r = rep(RepKind::NhDeformed, s, sign);
            assert!(open_brackets(&r).is_empty(), "{:?} spin {s}: {:#?}", sign, open_brackets(&r));
        }
    }
    // [H′, P′₁] = κ₁K′₁ with κ₁ = −λ²
    let r = rep(RepKind::NhDeformed, Spin::ZERO, KappaSign::Minus);
    let hp = r.image("H").unwrap().commutator(r.image("P1").unwrap()).unwrap();
    let l = Scalar::var("λ");
    assert_eq!(hp, r.image("K1").unwrap().scale(&CoeffFn::scalar(-(&l * &l))));
}

#[test]
fn poincare_brackets() {
    for s in SPINS {
        let r = rep(RepKind::PoincareMassive, s, KappaSign::Minus);
        assert_eq!(r.verify_brackets().unwrap().len(), 45);
        assert!(open_brackets(&r).is_empty(), "spin {s}: {:#?}", open_brackets(&r));
    }
}

#[test]
fn de_sitter_brackets() {
    for sign in [KappaSign::Minus, KappaSign::Plus] {
        for s in SPINS {
            let r = rep(RepKind::AdsDeformed, s, sign);
            assert!(open_brackets(&r).is_empty(), "{:?} spin {s}: {:#?}", sign, open_brackets(&r));
        }
    }
}

#[test]
fn translations_close_on_rotations() {
    // [P″₁, P″₂] = −(κ₁/c²) J″₃ = κ₁κ₂ J″₃
    let r = rep(RepKind::AdsDeformed, Spin::HALF, KappaSign::Plus);
    let pp = r.image("P1").unwrap().commutator(r.image("P2").unwrap()).unwrap();
    let g = Scalar::var("γ");
    let k = -(&r.kappa1() * &g * &g);
    assert_eq!(pp, r.image("J3").unwrap().scale(&CoeffFn::scalar(k)));
}

#[test]
fn rotations_close() {
    let r = rep(RepKind::PoincareMassive, Spin::ONE, KappaSign::Minus);
    let j = |n: &str| r.image(n).unwrap().clone();
    assert_eq!(j("J1").commutator(&j("J2")).unwrap(), j("J3"));
    assert_eq!(j("J2").commutator(&j("J3")).unwrap(), j("J1"));
    assert_eq!(j("J3").commutator(&j("J1")).unwrap(), j("J2"));
}

fn values(r: &Representation) -> Vec<(String, Scalar)> {
    r.casimir_values()
        .unwrap()
        .into_iter()
        .map(|(n, v)| (n, v.as_scalar().expect("ω-free eigenvalue").clone()))
        .collect()
}

#[test]
fn poincare_casimirs() {
    let (m, g) = (Scalar::var("m"), Scalar::var("γ"));
    for s in SPINS {
        let r = rep(RepKind::PoincareMassive, s, KappaSign::Minus);
        let v = values(&r);
        // C′₁ = −m²c², C′₂ = m²·S²
        assert_eq!(v[0].1, -(&(&m * &m) / &(&g * &g)), "spin {s}");
        assert_eq!(v[1].1, &m * &m * Scalar::constant(r.spin_square.clone()), "spin {s}");
        assert_eq!(r.spin_square, s.casimir());
    }
}

#[test]
fn element_and_formula_paths_agree() {
    for r in [rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus), rep(RepKind::AdsDeformed, Spin::ZERO, KappaSign::Minus)] {
        for (c, (name, v)) in r.algebra.casimirs.iter().zip(r.casimir_values().unwrap()) {
            assert_eq!(casimir_eigenvalue(&r, &c.element).unwrap(), v, "{} {name}", r.kind);
        }
    }
}

#[test]
fn galilei_and_newton_hooke_casimirs() {
    for s in SPINS {
        for r in [rep(RepKind::GalileiBacry, s, KappaSign::Minus), rep(RepKind::NhDeformed, s, KappaSign::Plus)] {
            assert_eq!(values(&r), r.expected_casimirs().unwrap(), "{} spin {s}", r.kind);
        }
    }
}

#[test]
fn de_sitter_casimirs_follow_from_poincare_ones() {
    let g = Scalar::var("γ");
    for sign in [KappaSign::Minus, KappaSign::Plus] {
        for s in SPINS {
            let p = values(&rep(RepKind::PoincareMassive, s, sign));
            let r = rep(RepKind::AdsDeformed, s, sign);
            let d = values(&r);
            let k1 = r.kappa1();
            let (c1, c2) = de_sitter_transform(&k1, &g, &p[0].1, &p[1].1).unwrap();
            assert_eq!(d[0].1, c1, "{sign:?} spin {s}");
            assert_eq!(d[1].1, c2, "{sign:?} spin {s}");
            // −(κ₁/c²)(9/4 + S²) and (κ₁/(4c⁴)) S²
            let s2 = Scalar::constant(r.spin_square.clone());
            let g2 = &g * &g;
            assert_eq!(d[0].1, -(&k1 * &g2) * (&Scalar::from_frac(9, 4) + &s2));
            assert_eq!(d[1].1, &k1 * &g2 * &g2 * &s2 * Scalar::from_frac(1, 4));
        }
    }
}

#[test]
fn identity_element() {
    let r = rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus);
    let one = Element::one(&r.algebra.uea);
    assert_eq!(substitute_rep(&one, &r).unwrap(), DiffOp::identity(&r.field, 2));
}

fn sym(n: &str) -> Symbol {
    Symbol::new(n)
}

#[test]
fn newton_hooke_generators_through_the_galilei_rep() {
    let s = DeformationSpec::new(catalog_get("galilei-extended").unwrap(), catalog_get("nh-minus").unwrap(), "κ1", 1)
        .unwrap();
    let res = run_deformation(&s).unwrap();
    let roots: HashMap<Symbol, Scalar> = root_determination(&res, &HashMap::new()).unwrap().into_iter().collect();
    // α₁ = λ/(2mξ) at ξ = 1
    let xi = HashMap::from([(sym("ξ"), Scalar::one())]);
    let gal = rep(RepKind::GalileiBacry, Spin::HALF, KappaSign::Minus);
    let nh = rep(RepKind::NhDeformed, Spin::HALF, KappaSign::Minus);
    for name in nh.generators() {
        let e = res.generator(name).unwrap().subs(&roots).unwrap().subs(&xi).unwrap();
        assert_eq!(substitute_rep(&e, &gal).unwrap(), *nh.image(name).unwrap(), "{name}");
    }
}

#[test]
fn de_sitter_generators_through_the_poincare_rep() {
    let s = DeformationSpec::new(catalog_get("poincare").unwrap(), catalog_get("ds").unwrap(), "κ1", 1).unwrap();
    let res = run_deformation(&s).unwrap();
    let (m, g) = (Scalar::var("m"), Scalar::var("γ"));
    let eigen = HashMap::from([(sym("c′1"), -(&(&m * &m) / &(&g * &g)))]);
    let roots: HashMap<Symbol, Scalar> = root_determination(&res, &eigen).unwrap().into_iter().collect();
    for spin in SPINS {
        let poi = rep(RepKind::PoincareMassive, spin, KappaSign::Minus);
        let ds = rep(RepKind::AdsDeformed, spin, KappaSign::Minus);
        for name in ds.generators() {
            let e = res.generator(name).unwrap().subs(&roots).unwrap();
            assert_eq!(substitute_rep(&e, &poi).unwrap(), *ds.image(name).unwrap(), "{name} spin {spin}");
        }
    }
}

#[test]
fn errors() {
    let p = RepParams { m: Scalar::zero(), ..RepParams::default() };
    assert_eq!(build_rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus, &p).unwrap_err(), RepError::ZeroMass);
    assert_eq!(
        build_rep(RepKind::PoincareMassive, Spin(7), KappaSign::Minus, &RepParams::default()).unwrap_err(),
        RepError::UnsupportedSpin(Spin(7))
    );
    assert!("de-sitter".parse::<RepKind>().is_err());
    // Ξ has no image in a Poincaré representation
    let r = rep(RepKind::PoincareMassive, Spin::ZERO, KappaSign::Minus);
    let gal = catalog_get("galilei-extended").unwrap();
    let x = gal.gen("Ξ").unwrap();
    assert_eq!(substitute_rep(&x, &r).unwrap_err(), RepError::MissingImage("Ξ".into()));
    let non_central = r.algebra.gen("K1").unwrap();
    assert!(matches!(casimir_eigenvalue(&r, &non_central), Err(RepError::NonScalar(_))));
}

#[test]
fn numeric_mass() {
    let p = RepParams { m: Scalar::from_int(3), a: Scalar::from_frac(1, 2) };
    let r = build_rep(RepKind::GalileiBacry, Spin::HALF, KappaSign::Minus, &p).unwrap();
    assert!(open_brackets(&r).is_empty());
    assert_eq!(values(&r)[1].1, Scalar::from_int(3));
    let r = build_rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus, &p).unwrap();
    let g = Scalar::var("γ");
    assert_eq!(values(&r)[0].1, -(Scalar::from_int(9) / (&g * &g)));
}

fn failed(c: &[SpotCheck]) -> Vec<String> {
    c.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.name, c.witness.as_ref().unwrap())).collect()
}

#[test]
fn spot_checks_agree() {
    for kind in [RepKind::GalileiBacry, RepKind::NhDeformed, RepKind::PoincareMassive, RepKind::AdsDeformed] {
        for s in [Spin::HALF, Spin::ONE] {
            let r = rep(kind, s, KappaSign::Minus);
            let checks = r.spot_check(7, 2).unwrap();
            assert_eq!(checks.len(), r.verify_brackets().unwrap().len() + r.algebra.casimirs.len());
            assert!(failed(&checks).is_empty(), "{kind} spin {s}: {:#?}", failed(&checks));
        }
    }
}

#[test]
fn spot_check_catches_a_wrong_image() {
    let mut r = rep(RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus);
    // drop the spin term of K′₁
    let i = r.index_of("K1").unwrap();
    let f = r.field.clone();
    r.images[i] = DiffOp::coeff_partial(&f, 2, CoeffFn::new(Scalar::zero(), Scalar::var("γ")), [1, 0, 0]);
    let bad = failed(&r.spot_check(3, 1).unwrap());
    assert!(bad.iter().any(|b| b.starts_with("[K1,K2]")), "{bad:#?}");
}

#[test]
fn float_fallback_for_higher_spin() {
    for kind in [RepKind::PoincareMassive, RepKind::AdsDeformed] {
        for t in [1, 3, 4] {
            let checks = float_check(kind, Spin(t), KappaSign::Minus, &RepParams::default(), 11, 2).unwrap();
            assert!(failed(&checks).is_empty(), "{kind} 2s={t}: {:#?}", failed(&checks));
        }
    }
}
