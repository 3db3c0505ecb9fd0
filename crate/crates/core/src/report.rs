//! Deterministic reports for the command-line front end.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{catalog_get, check_all, check_central, AlgebraDef, AlgebraError};
use crate::deform::{
    root_determination, run_deformation, verify_with_roots, BracketRecord, DeformError, DeformationResult,
    DeformationSpec,
};
use crate::field::{Scalar, Symbol};
use crate::observables::{build_observables, evaluate_deformed_casimirs, ObservableError};
use crate::rep::{build_rep, float_check, KappaSign, RepError, RepKind, RepParams, Spin, SpotCheck};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no chain from `{src}` to `{dst}`; supported: {}", supported_chains())]
    UnsupportedChain { src: String, dst: String },
    #[error("--observables applies to galilei → poincare only")]
    ObservablesUnavailable,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Closed,
    Failed,
    UnsolvedConstraint,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Closed
        } else {
            Status::Failed
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Closed => "closed",
            Status::Failed => "failed",
            Status::UnsolvedConstraint => "unsolved-constraint",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Item {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Item {
    fn new(name: impl Into<String>, status: Status) -> Item {
        Item { name: name.into(), status, value: None, witness: None }
    }

    fn value(mut self, v: impl ToString) -> Item {
        self.value = Some(v.to_string());
        self
    }

    fn witness(mut self, w: Option<String>) -> Item {
        self.witness = w;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub notes: Vec<String>,
    pub sections: BTreeMap<String, Vec<Item>>,
}

impl Report {
    fn new(command: &str, name: impl Into<String>) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            name: name.into(),
            seed: None,
            notes: Vec::new(),
            sections: BTreeMap::new(),
        }
    }

    fn push(&mut self, section: &str, item: Item) {
        self.sections.entry(section.to_string()).or_default().push(item);
    }

    pub fn items(&self) -> impl Iterator<Item = (&str, &Item)> {
        self.sections.iter().flat_map(|(s, v)| v.iter().map(move |i| (s.as_str(), i)))
    }

    pub fn section(&self, name: &str) -> &[Item] {
        self.sections.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all_closed(&self) -> bool {
        self.items().all(|(_, i)| i.status == Status::Closed)
    }

    /// `0` when every item closed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_closed() {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with keys sorted.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}", self.tool, self.command, self.name);
        if let Some(s) = self.seed {
            let _ = write!(out, " (seed {s})");
        }
        out.push('\n');
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for (section, items) in &self.sections {
            let _ = writeln!(out, "\n[{section}]");
            for i in items {
                let _ = write!(out, "{:<20} {}", i.status.label(), i.name);
                if let Some(v) = &i.value {
                    let _ = write!(out, " = {v}");
                }
                out.push('\n');
                if let Some(w) = &i.witness {
                    let _ = writeln!(out, "{:<20}   witness: {w}", "");
                }
            }
        }
        let (closed, total) =
            (self.items().filter(|(_, i)| i.status == Status::Closed).count(), self.items().count());
        let _ = writeln!(out, "\n{closed}/{total} closed");
        out
    }
}

/// `check`: Jacobi, Casimir centrality, Cartan patterns, involutions.
pub fn check_report(def: &AlgebraDef) -> Report {
    let mut r = Report::new("check", def.name.clone());
    for c in check_all(def) {
        let witness = c.failures.first().map(|f| format!("at ({}): {}", f.at.join(", "), f.witness));
        let mut item = Item::new(c.check.clone(), Status::of(c.passed())).witness(witness);
        if c.failures.len() > 1 {
            item = item.value(format!("{} failures", c.failures.len()));
        }
        r.push("checks", item);
    }
    for c in &def.casimirs {
        let central = check_central(def, &c.name, &c.element);
        let witness = central.failures.first().map(|f| format!("at ({}): {}", f.at.join(", "), f.witness));
        r.push("casimirs", Item::new(c.name.clone(), Status::of(central.passed())).value(c.formula()).witness(witness));
    }
    r
}

/// A supported deformation: curvature parameter, rank, and the eigenvalue
/// substitution used before picking positive roots.
#[derive(Clone, Copy, Debug)]
pub struct Chain {
    pub src: &'static str,
    pub dst: &'static str,
    pub kappa: &'static str,
    pub rank: usize,
    eigen: fn() -> Vec<(&'static str, Scalar)>,
}

fn squares() -> Vec<(&'static str, Scalar)> {
    let (u, w) = (Scalar::var("u"), Scalar::var("w"));
    vec![("c1", &u * &u), ("c2", &w * &w)]
}

fn no_eigen() -> Vec<(&'static str, Scalar)> {
    Vec::new()
}

fn massive() -> Vec<(&'static str, Scalar)> {
    let (m, g) = (Scalar::var("m"), Scalar::var("γ"));
    vec![("c′1", -(&(&m * &m) / &(&g * &g)))]
}

fn euclidean_massive() -> Vec<(&'static str, Scalar)> {
    let (m, g) = (Scalar::var("m"), Scalar::var("γ\u{302}"));
    vec![("c′1", &(&m * &m) / &(&g * &g))]
}

pub const CHAINS: &[Chain] = &[
    Chain { src: "galilei", dst: "poincare", kappa: "κ2", rank: 2, eigen: squares },
    Chain { src: "galilei-extended", dst: "nh-minus", kappa: "κ1", rank: 1, eigen: no_eigen },
    Chain { src: "galilei-extended", dst: "nh-plus", kappa: "κ1", rank: 1, eigen: no_eigen },
    Chain { src: "galilei", dst: "nh-minus", kappa: "κ1", rank: 1, eigen: no_eigen },
    Chain { src: "galilei", dst: "nh-plus", kappa: "κ1", rank: 1, eigen: no_eigen },
    Chain { src: "poincare", dst: "ds", kappa: "κ1", rank: 1, eigen: massive },
    Chain { src: "poincare", dst: "ads", kappa: "κ1", rank: 1, eigen: massive },
    Chain { src: "galilei", dst: "euclidean4", kappa: "κ2", rank: 2, eigen: squares },
    Chain { src: "euclidean4", dst: "so5", kappa: "κ1", rank: 1, eigen: euclidean_massive },
    Chain { src: "euclidean4", dst: "so41-euclidean-chain", kappa: "κ1", rank: 1, eigen: euclidean_massive },
];

pub fn supported_chains() -> String {
    CHAINS.iter().map(|c| format!("{} → {}", c.src, c.dst)).collect::<Vec<_>>().join(", ")
}

/// Resolves the sign-dependent aliases `nh` and `desitter`.
pub fn resolve_target(dst: &str, sign: KappaSign) -> &str {
    match (dst, sign) {
        ("nh", KappaSign::Minus) => "nh-minus",
        ("nh", KappaSign::Plus) => "nh-plus",
        ("desitter", KappaSign::Minus) => "ds",
        ("desitter", KappaSign::Plus) => "ads",
        _ => dst,
    }
}

pub fn find_chain(src: &str, dst: &str) -> Result<&'static Chain, ReportError> {
    CHAINS
        .iter()
        .find(|c| c.src == src && c.dst == dst)
        .ok_or_else(|| ReportError::UnsupportedChain { src: src.into(), dst: dst.into() })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DeformOptions {
    pub observables: bool,
    pub casimirs: bool,
    pub positive_roots: bool,
}

/// A finished run together with its spec, for callers that need both.
pub struct DeformRun {
    pub spec: DeformationSpec,
    pub result: DeformationResult,
}

pub fn run_chain(chain: &Chain) -> Result<DeformRun, ReportError> {
    let spec = DeformationSpec::new(catalog_get(chain.src)?, catalog_get(chain.dst)?, chain.kappa, chain.rank)?;
    let result = run_deformation(&spec)?;
    Ok(DeformRun { spec, result })
}

fn bracket_item(r: &BracketRecord) -> Item {
    let status = if r.closed() { Status::Closed } else { Status::Failed };
    let witness = (!r.closed()).then(|| r.verified.to_string());
    Item::new(format!("[{}, {}]", r.x, r.y), status).witness(witness)
}

/// `deform`: constraints, solved relations, deformed generators and the
/// per-bracket closure table.
pub fn deform_report(src: &str, dst: &str, opts: DeformOptions) -> Result<Report, ReportError> {
    let chain = find_chain(src, dst)?;
    if opts.observables && !(src == "galilei" && dst == "poincare") {
        return Err(ReportError::ObservablesUnavailable);
    }
    let DeformRun { spec, result } = run_chain(chain)?;
    let mut r = Report::new("deform", format!("{src} → {dst}"));
    r.notes.push(format!("curvature parameter {}, rank {}", chain.kappa, chain.rank));
    r.notes.extend(result.preconditions.iter().map(|p| format!("assumes {p}")));
    r.push("constraints", Item::new("seed", Status::Closed).value(&result.seed));
    for c in &result.solution.constraints {
        let open = result.solution.unsolved.contains(c);
        let status = if open { Status::UnsolvedConstraint } else { Status::Closed };
        r.push("constraints", Item::new("constraint", status).value(format!("{c} = 0")));
    }
    for rel in &result.solution.relations {
        r.push("constraints", Item::new("relation", Status::Closed).value(rel));
    }
    for u in result.solution.unsolved.iter().filter(|u| !result.solution.constraints.contains(u)) {
        r.push("constraints", Item::new("constraint", Status::UnsolvedConstraint).value(format!("{u} = 0")));
    }
    if result.solution.unsolved.iter().any(|u| u.as_constant().is_some()) {
        r.push(
            "constraints",
            Item::new("span", Status::Failed)
                .witness(Some("new generators do not span the target algebra".to_string())),
        );
    }
    for (name, e) in &result.generators {
        let unchanged = result.unchanged.contains(name);
        let shown = if unchanged { format!("{name} (unchanged)") } else { format!("{name}′") };
        r.push("generators", Item::new(shown, Status::Closed).value(e));
    }
    for rec in &result.records {
        r.push("brackets", bracket_item(rec));
    }
    if opts.positive_roots && result.closed() {
        let listed = (chain.eigen)();
        for (n, v) in &listed {
            r.notes.push(format!("eigenvalue {n} = {v}"));
        }
        let eigen: HashMap<Symbol, Scalar> = listed.into_iter().map(|(n, v)| (Symbol::new(n), v)).collect();
        match root_determination(&result, &eigen) {
            Ok(roots) => {
                for (s, v) in &roots {
                    r.push("roots", Item::new(s.to_string(), Status::Closed).value(v));
                }
                let mut bind: HashMap<Symbol, Scalar> = roots.into_iter().collect();
                bind.extend(eigen);
                let recs = verify_with_roots(&spec, &result, &bind)?;
                let open = recs.iter().filter(|x| !x.closed()).count();
                let item = Item::new("brackets with roots", Status::of(open == 0))
                    .value(format!("{}/{} closed", recs.len() - open, recs.len()))
                    .witness(recs.iter().find(|x| !x.closed()).map(|x| format!("[{}, {}]: {}", x.x, x.y, x.verified)));
                r.push("roots", item);
            }
            Err(e) => r.push("roots", Item::new("root", Status::UnsolvedConstraint).witness(Some(e.to_string()))),
        }
    }
    if opts.casimirs {
        for c in evaluate_deformed_casimirs(&spec, &result)? {
            let item = match &c.value {
                Some(v) => Item::new(format!("{}′", c.name), Status::Closed).value(v),
                None => Item::new(format!("{}′", c.name), Status::Failed).witness(Some(c.residue.to_string())),
            };
            r.push("casimirs", item);
        }
    }
    if opts.observables {
        let set = build_observables()?;
        for id in set.all_identities()? {
            let witness = (!id.holds()).then(|| id.residue.to_string());
            r.push("observables", Item::new(id.name.clone(), Status::of(id.holds())).witness(witness));
        }
        for c in set.deformed_casimirs()? {
            let zero = c.value.as_ref().is_some_and(Scalar::is_zero);
            let item = Item::new(format!("{}′ = 0", c.name), Status::of(zero))
                .witness((!zero).then(|| c.residue.to_string()));
            r.push("observables", item);
        }
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct RepOptions {
    pub spin: Spin,
    pub seed: u64,
    pub sign: KappaSign,
    pub points: usize,
    /// Floating-point spin matrices, any spin.
    pub numeric: bool,
}

impl Default for RepOptions {
    fn default() -> Self {
        RepOptions { spin: Spin::ZERO, seed: 0, sign: KappaSign::Minus, points: 2, numeric: false }
    }
}

fn spot_items(r: &mut Report, section: &str, checks: Vec<SpotCheck>) {
    for c in checks {
        let item = Item::new(c.name.clone(), Status::of(c.passed()))
            .value(format!("{} points", c.points))
            .witness(c.witness.clone());
        r.push(section, item);
    }
}

/// `rep`: exact bracket table and Casimir values, then the sampled oracle.
/// With `numeric`, only the floating-point oracle runs.
pub fn rep_report(kind: RepKind, opts: &RepOptions) -> Result<Report, ReportError> {
    let mut r = Report::new("rep", kind.name());
    r.seed = Some(opts.seed);
    r.notes.push(format!("spin {}, realizes {}", opts.spin, kind.algebra(opts.sign)));
    let params = RepParams::default();
    if opts.numeric {
        let checks = float_check(kind, opts.spin, opts.sign, &params, opts.seed, opts.points)?;
        spot_items(&mut r, "numeric-fallback", checks);
        return Ok(r);
    }
    let rep = build_rep(kind, opts.spin, opts.sign, &params)?;
    r.notes.push(format!("S² = {}", rep.spin_square));
    for b in rep.verify_brackets()? {
        let witness = (!b.holds()).then(|| b.residue.render());
        r.push("representations", Item::new(format!("[{}, {}]", b.x, b.y), Status::of(b.holds())).witness(witness));
    }
    let want: HashMap<String, Scalar> = rep.expected_casimirs()?.into_iter().collect();
    for (name, got) in rep.casimir_values()? {
        let item = match (got.as_scalar(), want.get(&name)) {
            (Some(g), Some(w)) if g == w => Item::new(name, Status::Closed).value(g),
            (g, w) => Item::new(name, Status::Failed).value(&got).witness(Some(match (g, w) {
                (Some(_), Some(w)) => format!("expected {w}"),
                _ => "not a multiple of the identity".to_string(),
            })),
        };
        r.push("casimirs", item);
    }
    spot_items(&mut r, "spot-checks", rep.spot_check(opts.seed, opts.points)?);
    Ok(r)
}

/// `catalog list`.
pub fn catalog_report() -> Result<Report, ReportError> {
    let mut r = Report::new("catalog", "list");
    for name in crate::algebra::catalog_names() {
        let def = catalog_get(name)?;
        r.push("algebras", Item::new(*name, Status::Closed).value(format!("{} generators", def.generators().len())));
    }
    Ok(r)
}
