//! One verdict line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use deformkit::algebra::{catalog_get, catalog_names, check_all};
use deformkit::deform::{run_deformation, DeformationResult, DeformationSpec};
use deformkit::field::{Relation, Scalar, Symbol};
use deformkit::observables::{build_observables, evaluate_deformed_casimirs};
use deformkit::report::{deform_report, DeformOptions};
use deformkit::rep::{build_rep, de_sitter_transform, spin_matrices, spin_square, KappaSign, RepKind, RepParams, Spin};

type Outcome = Result<String, String>;

fn v(n: &str) -> Scalar {
    Scalar::var(n)
}

fn sym(n: &str) -> Symbol {
    Symbol::new(n)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_frac(n, d)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn deform(src: &str, dst: &str, kappa: &str, rank: usize) -> Result<(DeformationSpec, DeformationResult), String> {
    let spec = DeformationSpec::new(catalog_get(src).unwrap(), catalog_get(dst).unwrap(), kappa, rank)
        .map_err(|e| e.to_string())?;
    let result = run_deformation(&spec).map_err(|e| e.to_string())?;
    Ok((spec, result))
}

fn all_closed(r: &DeformationResult, what: &str) -> Result<(), String> {
    let open: Vec<_> = r.records.iter().filter(|x| !x.closed()).map(|x| format!("[{},{}]", x.x, x.y)).collect();
    ensure(open.is_empty() && r.solution.unsolved.is_empty(), || format!("{what}: open {open:?}"))
}

/// `κ₁` of the minus/plus member of a curvature pair.
fn kappa1(sign: KappaSign) -> Scalar {
    match sign {
        KappaSign::Minus => -(&v("λ") * &v("λ")),
        KappaSign::Plus => &v("λ\u{302}") * &v("λ\u{302}"),
    }
}

fn catalog_soundness() -> Outcome {
    let mut checks = 0;
    for name in catalog_names() {
        let def = catalog_get(name).map_err(|e| e.to_string())?;
        let reports = check_all(&def);
        for kind in ["jacobi", "casimirs", "cartan", "involution"] {
            ensure(reports.iter().any(|r| r.check.starts_with(kind)), || format!("{name}: no {kind} check"))?;
        }
        for r in &reports {
            ensure(r.passed(), || format!("{name}: {} fails at {:?}", r.check, r.failures.first().map(|f| &f.at)))?;
        }
        checks += reports.len();
    }
    // the (A)dS second Casimir carries the κ₁(J·K)² term
    let ads = catalog_get("ads").unwrap();
    let c2 = ads.casimirs[1].formula();
    ensure(c2.contains("κ1*κ2*dot(J, K)^2"), || format!("ads C2 = {c2}"))?;
    Ok(format!("{} algebras, {checks} checks exact", catalog_names().len()))
}

fn galilei_to_poincare() -> Outcome {
    let (_, r) = deform("galilei", "poincare", "κ2", 2)?;
    let (a1, a2, c1, c2, g) = (v("α1"), v("α2"), v("c1"), v("c2"), v("γ"));
    // α₁C₁ + α₂C₂ = 0 and α₂² = 1/(4c²C₁C₂), with 1/c = γ
    let linear = &(&a1 * &c1) + &(&a2 * &c2);
    let square = &(&(&a2 * &a2) * &(&c1 * &c2)) - &(&g * &g * q(1, 4));
    let got: BTreeSet<String> = r.solution.constraints.iter().map(|c| c.to_string()).collect();
    let want: BTreeSet<String> = [linear, square].iter().map(|c| c.to_string()).collect();
    ensure(got == want, || format!("constraints {got:?}"))?;
    let a2sq = &(&g * &g) / &(&c1 * &c2 * q(4, 1));
    ensure(r.solution.relations.first() == Some(&Relation::Square(sym("α2"), a2sq)), || {
        format!("relations {:?}", r.solution.relations)
    })?;
    ensure(r.records.len() == 45, || format!("{} brackets", r.records.len()))?;
    all_closed(&r, "galilei → poincare")?;
    let mut intermediate = 0;
    for i in 1..=3 {
        for j in 1..=3 {
            if i == j {
                continue;
            }
            for (x, y) in [(format!("P{i}"), format!("P{j}")), (format!("P{i}"), format!("K{j}"))] {
                let rec = r.record(&x, &y).unwrap();
                ensure(rec.residual.is_zero(), || format!("[{x}′,{y}′] = {} before reduction", rec.residual))?;
                intermediate += 1;
            }
        }
    }
    Ok(format!("constraints match, 45/45 closed, {intermediate} intermediate identities zero"))
}

fn observable_suite() -> Outcome {
    let set = build_observables().map_err(|e| e.to_string())?;
    let ids = set.all_identities().map_err(|e| e.to_string())?;
    let names: BTreeSet<&str> = ids.iter().map(|i| i.name.as_str()).collect();
    let mut required = vec![
        "c² P′² = H′²".to_string(),
        "W′0 = (1/c) H λpw".to_string(),
        "[λw, λp] = λpw".to_string(),
        "[λpw, λw] = λp".to_string(),
        "[λp, λpw] = λw".to_string(),
        "V′² = c²".to_string(),
    ];
    for i in 1..=3 {
        required.push(format!("V′{i} = c² P′{i}/H′"));
        for j in 1..=3 {
            required.push(format!("[Q′{i}, P′{j}] = δ"));
            required.push(format!("[J′{i}, Q′{j}] = ε Q′"));
        }
    }
    for (i, j) in [(1, 2), (2, 3), (1, 3)] {
        required.push(format!("[Q′{i}, Q′{j}] = (c²/H′²)(Q′P′ - Q′P′ - εJ′)"));
    }
    for n in &required {
        ensure(names.contains(n.as_str()), || format!("missing identity `{n}`"))?;
    }
    for id in &ids {
        ensure(id.holds(), || format!("`{}` leaves {}", id.name, id.residue))?;
    }
    let cas = set.deformed_casimirs().map_err(|e| e.to_string())?;
    ensure(cas.len() == 2 && cas.iter().all(|c| c.value.as_ref().is_some_and(Scalar::is_zero)), || {
        format!("deformed Casimirs {:?}", cas.iter().map(|c| c.residue.to_string()).collect::<Vec<_>>())
    })?;
    Ok(format!("{} identities exact, C′1 = C′2 = 0", ids.len()))
}

fn galilei_to_newton_hooke() -> Outcome {
    for (dst, sign) in [("nh-minus", KappaSign::Minus), ("nh-plus", KappaSign::Plus)] {
        let (spec, r) = deform("galilei-extended", dst, "κ1", 1)?;
        let (m, xi) = (v("m"), v("ξ"));
        let want = -(&kappa1(sign) / &(&m * &m * &xi * &xi * q(4, 1)));
        ensure(r.solution.relations == [Relation::Square(sym("α1"), want)], || {
            format!("{dst}: {:?}", r.solution.relations)
        })?;
        all_closed(&r, dst)?;
        let cas = evaluate_deformed_casimirs(&spec, &r).map_err(|e| e.to_string())?;
        ensure(cas.iter().all(|c| c.value.as_ref().is_some_and(Scalar::is_zero)), || {
            format!("{dst} Casimirs {:?}", cas.iter().map(|c| c.residue.to_string()).collect::<Vec<_>>())
        })?;
        let plain = deform_report("galilei", dst, DeformOptions::default()).map_err(|e| e.to_string())?;
        let span = plain.section("constraints").iter().any(|i| {
            i.witness.as_deref().is_some_and(|w| w.contains("do not span"))
        });
        ensure(plain.exit_code() == 1 && span, || format!("galilei → {dst} not reported as non-spanning"))?;
    }
    Ok("α1² = -κ1/(4m²ξ²) for NH±, closed, Casimirs zero; unextended Galilei does not span".into())
}

fn poincare_to_de_sitter() -> Outcome {
    let (k1, g, c1, c2) = (v("κ1"), v("γ"), v("c′1"), v("c′2"));
    for (dst, sign) in [("ds", KappaSign::Minus), ("ads", KappaSign::Plus)] {
        let (spec, r) = deform("poincare", dst, "κ1", 1)?;
        let kappa = kappa1(sign);
        // α₁² = κ₁c²/(4C′₁)
        let want = &kappa / &(&g * &g * &c1 * q(4, 1));
        ensure(r.solution.relations == [Relation::Square(sym("α1"), want)], || {
            format!("{dst}: {:?}", r.solution.relations)
        })?;
        all_closed(&r, dst)?;
        let cas = evaluate_deformed_casimirs(&spec, &r).map_err(|e| e.to_string())?;
        let vals: Vec<Scalar> = cas.iter().map(|c| c.value.clone().ok_or(format!("{dst}: {} not scalar", c.name))).collect::<Result<_, _>>()?;
        let bind = HashMap::from([(sym("κ1"), kappa.clone())]);
        let g2 = &g * &g;
        let w1 = (&(&(&k1 * &g2) * &q(-9, 4)) + &(&(&k1 * &c2) / &c1)).subs(&bind).unwrap();
        let w2 = (-(&(&(&k1 * &g2) * &c2) / &(&c1 * &q(4, 1)))).subs(&bind).unwrap();
        ensure(vals == [w1.clone(), w2.clone()], || format!("{dst}: C″ = {vals:?}, want {w1}, {w2}"))?;
        // C″₁ vanishes on C′₂ = 9C′₁/(4c²)
        let locus = HashMap::from([(sym("c′2"), &(&c1 * &g2) * &q(9, 4))]);
        let at = vals[0].subs(&locus).map_err(|e| e.to_string())?;
        ensure(at.is_zero(), || format!("{dst}: C″1 on the locus = {at}"))?;
    }
    Ok("α1² = κ1c²/(4C′1); C″ in terms of C′; C″1 = 0 on C′2 = 9C′1/(4c²)".into())
}

fn representation_suite() -> Outcome {
    let params = RepParams::default();
    let mut brackets = 0;
    let mut notes = Vec::new();
    let cases: Vec<(RepKind, Spin, KappaSign)> = vec![
        (RepKind::GalileiBacry, Spin::ZERO, KappaSign::Minus),
        (RepKind::GalileiBacry, Spin::HALF, KappaSign::Minus),
        (RepKind::NhDeformed, Spin::ZERO, KappaSign::Minus),
        (RepKind::NhDeformed, Spin::ZERO, KappaSign::Plus),
        (RepKind::PoincareMassive, Spin::ZERO, KappaSign::Minus),
        (RepKind::PoincareMassive, Spin::HALF, KappaSign::Minus),
        (RepKind::PoincareMassive, Spin::ONE, KappaSign::Minus),
        (RepKind::AdsDeformed, Spin::ZERO, KappaSign::Minus),
        (RepKind::AdsDeformed, Spin::HALF, KappaSign::Plus),
        (RepKind::AdsDeformed, Spin::ONE, KappaSign::Minus),
    ];
    for (kind, spin, sign) in cases {
        let rep = build_rep(kind, spin, sign, &params).map_err(|e| e.to_string())?;
        let table = rep.verify_brackets().map_err(|e| e.to_string())?;
        let n = rep.generators().len();
        ensure(table.len() == n * (n - 1) / 2, || format!("{kind}: {} brackets", table.len()))?;
        for b in &table {
            ensure(b.holds(), || format!("{kind} {spin}: [{}, {}] leaves {}", b.x, b.y, b.residue.render()))?;
        }
        brackets += table.len();
    }
    let (m, g) = (v("m"), v("γ"));
    for spin in [Spin::ZERO, Spin::HALF, Spin::ONE] {
        let s2 = spin_square(&spin_matrices(spin).unwrap()).as_scalar().ok_or("S² not scalar")?;
        notes.push(format!("S²({spin}) = {s2}"));
        let p = build_rep(RepKind::PoincareMassive, spin, KappaSign::Minus, &params).map_err(|e| e.to_string())?;
        let pc: Vec<Scalar> = p
            .casimir_values()
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(n, c)| c.as_scalar().cloned().ok_or(format!("poincare {n} not scalar")))
            .collect::<Result<_, _>>()?;
        // C′₁ = −m²c², C′₂ = m²·S²
        let want1 = -(&(&m * &m) / &(&g * &g));
        let want2 = &(&m * &m) * &Scalar::constant(s2.clone());
        ensure(pc == [want1.clone(), want2.clone()], || format!("spin {spin}: C′ = {pc:?}"))?;
        for sign in [KappaSign::Minus, KappaSign::Plus] {
            if spin == Spin::ONE && sign == KappaSign::Plus {
                continue;
            }
            let a = build_rep(RepKind::AdsDeformed, spin, sign, &params).map_err(|e| e.to_string())?;
            let ac: Vec<Scalar> = a
                .casimir_values()
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|(n, c)| c.as_scalar().cloned().ok_or(format!("ads {n} not scalar")))
                .collect::<Result<_, _>>()?;
            let (t1, t2) = de_sitter_transform(&kappa1(sign), &g, &pc[0], &pc[1]).map_err(|e| e.to_string())?;
            ensure(ac == [t1.clone(), t2.clone()], || format!("spin {spin} {sign:?}: C″ = {ac:?}, transform {t1}, {t2}"))?;
        }
    }
    Ok(format!("{brackets} brackets exact; C′1 = -m²c², C′2 = m²S²; C″ = transform(C′); {}", notes.join(", ")))
}

fn sign_swap_chain() -> Outcome {
    // iso(4) is the Poincaré table under γ → i·γ̂
    let hat = v("γ\u{302}");
    let poincare = catalog_get("poincare").unwrap();
    let swapped = poincare
        .substitute("swapped", &HashMap::from([(sym("γ"), &Scalar::i() * &hat)]))
        .map_err(|e| e.to_string())?;
    let euclid = catalog_get("euclidean4").unwrap();
    let gens = euclid.generators().to_vec();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let (a, b) = (swapped.bracket(x, y).unwrap().to_string(), euclid.bracket(x, y).unwrap().to_string());
            ensure(a == b, || format!("[{x},{y}]: {a} vs {b}"))?;
        }
    }
    let (_, r) = deform("galilei", "euclidean4", "κ2", 2)?;
    ensure(r.records.len() == 45, || format!("{} brackets", r.records.len()))?;
    all_closed(&r, "galilei → euclidean4")?;
    let want = -(&(&hat * &hat) / &(&v("c1") * &v("c2") * q(4, 1)));
    ensure(r.solution.relations.first() == Some(&Relation::Square(sym("α2"), want)), || {
        format!("relations {:?}", r.solution.relations)
    })?;
    for dst in ["so5", "so41-euclidean-chain"] {
        let (_, r) = deform("euclidean4", dst, "κ1", 1)?;
        all_closed(&r, dst)?;
        ensure(matches!(r.solution.relations.as_slice(), [Relation::Square(a, _)] if *a == sym("α1")), || {
            format!("{dst}: {:?}", r.solution.relations)
        })?;
    }
    Ok("iso(4) = Poincaré(γ → iγ̂), 45/45 closed; so(5) and so(4,1) closed".into())
}

fn kernel_properties() -> Outcome {
    let mut done = Vec::new();
    for (k, (name, prop)) in common::PROPERTIES.iter().enumerate() {
        prop(0xacce_0000 + k as u64).map_err(|e| format!("{name}: {e}"))?;
        done.push(*name);
    }
    ensure(common::spot_oracle_detects_corruption(5), || "oracle missed a corrupted image".into())?;
    Ok(format!("{} × {} cases: {}; corrupted image caught", done.len(), common::CASES, done.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("catalog soundness", catalog_soundness),
        ("galilei → poincare", galilei_to_poincare),
        ("observable suite", observable_suite),
        ("extended galilei → newton-hooke", galilei_to_newton_hooke),
        ("poincare → (a)ds", poincare_to_de_sitter),
        ("representation suite", representation_suite),
        ("sign-swap chain", sign_swap_chain),
        ("kernel properties", kernel_properties),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.1}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.1}s) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
