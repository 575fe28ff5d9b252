//! Built-in catalog of worked structures and their expected outcomes.
//!
//! Payloads are structure files; expectations live in `manifest.toml` as
//! ordered `[key, value]` pairs. Each key is evaluated by one engine
//! operation, see [`evaluate`]. Where an originally published value differs
//! from the verified one, the entry carries it under `stated`.

use std::cell::OnceCell;
use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use crate::algebras::{parse_compact, parse_equations, parse_form, LieAlgebra, StructureFile};
use crate::connection::{
    bismut_connection, check_connection, covariant_derivative_curvature, curvature, form_derivative,
    holonomy_algebra, nabla_omega, torsion_form, ConnectionSheet, CurvatureSheet, HolonomyReport, MetricFrame,
    Tensor,
};
use crate::error::{Error, Result};
use crate::evolution::{
    family_volume, suspend_family, verify_balanced_evolution, verify_hypo_evolution, verify_orthonormal_coframe,
    ParamFamily,
};
use crate::exterior::{CoframeMap, Form};
use crate::linalg;
use crate::scalars::{fmt_rational, Rational, Scalar};
use crate::structures::{
    circle_bundle_structure, is_balanced_su2, is_hypo, su2_residual_table, validate_su2, Su2Structure,
};

#[cfg(test)]
mod tests;

/// Holonomy generations explored for `holonomy_*` keys.
pub const HOLONOMY_ORDER: usize = 4;

const MANIFEST: &str = include_str!("../../catalog/manifest.toml");

macro_rules! payloads {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../../catalog/", $file)))),*]
    };
}

const FILES: &[(&str, &str)] = payloads!(
    "circle_bundles_flat.alg",
    "circle_bundles_kodaira_thurston.alg",
    "completely_solvable6.alg",
    "complex_solvable6.alg",
    "family_0_0_0_12_14.alg",
    "family_0_0_12_13_23.alg",
    "family_kodaira_thurston.alg",
    "h19_minus.alg",
    "h2.alg",
    "iwasawa.alg",
    "jacobi_failure.alg",
    "nilpotent5_0_0_0_12_14.alg",
    "nilpotent5_0_0_12_13_14_23.alg",
    "nilpotent5_0_0_12_13_23.alg",
    "parallelizable8_family.alg.in",
    "parallelizable8_mixed.alg",
    "parallelizable8_nilpotent.alg",
    "parallelizable8_solvable.alg",
    "solvable5.alg",
    "suspension_0_0_0_12_14.alg",
    "suspension_0_0_12_13_23.alg",
    "suspension_kodaira_thurston.alg",
);

/// Raw text of a bundled structure file.
pub fn bundled_file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Deserialize)]
struct Manifest {
    entry: Vec<CatalogEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    /// Where the example sits and what it illustrates.
    pub topic: String,
    pub file: String,
    /// Second payload (the suspension of a family).
    #[serde(default)]
    pub companion: Option<String>,
    /// `{key}` placeholders in the payload and their replacements.
    #[serde(default)]
    pub substitute: Vec<(String, String)>,
    pub expect: Vec<(String, String)>,
    /// Originally published values that disagree with `expect`.
    #[serde(default)]
    pub stated: Vec<(String, String)>,
}

impl CatalogEntry {
    pub fn payload(&self) -> Result<String> {
        let mut text = bundled_file(&self.file)
            .ok_or_else(|| Error::Missing(format!("bundled file {}", self.file)))?
            .to_string();
        for (k, v) in &self.substitute {
            text = text.replace(&format!("{{{k}}}"), &format!("({v})"));
        }
        Ok(text)
    }

    pub fn companion_payload(&self) -> Result<Option<&'static str>> {
        self.companion
            .as_ref()
            .map(|c| bundled_file(c).ok_or_else(|| Error::Missing(format!("bundled file {c}"))))
            .transpose()
    }

    pub fn stated(&self, key: &str) -> Option<&str> {
        self.stated.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn expected(&self, key: &str) -> Option<&str> {
        self.expect.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// All entries, sorted by name.
pub fn manifest() -> Vec<CatalogEntry> {
    let m: Manifest = toml::from_str(MANIFEST).expect("bundled manifest is valid");
    let mut entries = m.entry;
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    entries
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    manifest().into_iter().find(|e| e.name == name)
}

/// Outcome of a single key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Form(Form),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Form(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub key: String,
    pub expected: String,
    /// Rendered value, or the error that prevented evaluation.
    pub actual: String,
    pub pass: bool,
    pub stated: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryResult {
    pub name: String,
    pub topic: String,
    pub checks: Vec<CheckOutcome>,
    /// Set when the payload itself could not be loaded.
    pub error: Option<String>,
}

impl EntryResult {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for EntryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.name, self.topic)?;
        if let Some(e) = &self.error {
            return writeln!(f, "  error: {e}");
        }
        for c in &self.checks {
            if c.pass {
                writeln!(f, "  ok    {} = {}", c.key, c.actual)?;
            } else {
                writeln!(f, "  FAIL  {}: expected {}, got {}", c.key, c.expected, c.actual)?;
            }
            if let Some(s) = &c.stated {
                writeln!(f, "        stated: {s}")?;
            }
        }
        writeln!(f, "  {}", if self.pass() { "pass" } else { "FAIL" })
    }
}

/// Lazily computed engine objects for one payload.
struct Context {
    file: StructureFile,
    companion: Option<StructureFile>,
    listed: Vec<String>,
    su2: OnceCell<Result<Su2Structure>>,
    family: OnceCell<Result<ParamFamily>>,
    frame: OnceCell<Result<(MetricFrame, Form)>>,
    connection: OnceCell<Result<ConnectionSheet>>,
    curvature: OnceCell<Result<CurvatureSheet>>,
    derivative: OnceCell<Result<Tensor>>,
    holonomy: OnceCell<Result<HolonomyReport>>,
}

fn cached<'a, T>(cell: &'a OnceCell<Result<T>>, f: impl FnOnce() -> Result<T>) -> Result<&'a T> {
    cell.get_or_init(f).as_ref().map_err(Clone::clone)
}

fn yes_no(b: bool) -> Value {
    Value::Text(if b { "yes" } else { "no" }.into())
}

fn text(s: impl Into<String>) -> Value {
    Value::Text(s.into())
}

fn indices_2(spec: &str) -> Option<(usize, usize)> {
    let (i, j) = spec.split_once('_')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

/// `E<m> Omega^i_j` → `(m, i, j)`.
fn nabla_key(rest: &str) -> Option<(usize, usize, usize)> {
    let (dir, form) = rest.split_once(' ')?;
    let m = dir.strip_prefix('E')?.parse().ok()?;
    let (i, j) = indices_2(form.strip_prefix("Omega^")?)?;
    Some((m, i, j))
}

fn rank(forms: &[Form]) -> Result<usize> {
    let rows = forms.iter().map(Form::rational_vector).collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(&rows))
}

fn rational_setting(sec: &crate::algebras::Section, name: &str) -> Result<Rational> {
    sec.require(name)?
        .coeff_of(&[])
        .as_rational()
        .ok_or_else(|| Error::Invalid(format!("{name} must be rational")))
}

impl Context {
    fn new(entry: &CatalogEntry) -> Result<Context> {
        let file = parse_equations(&entry.payload()?)?;
        let companion = entry.companion_payload()?.map(parse_equations).transpose()?;
        let listed = entry
            .expect
            .iter()
            .map(|(k, _)| k.clone())
            .filter(|k| k.starts_with("Omega^") || k.starts_with("form nabla_"))
            .collect();
        Ok(Context {
            file,
            companion,
            listed,
            su2: OnceCell::new(),
            family: OnceCell::new(),
            frame: OnceCell::new(),
            connection: OnceCell::new(),
            curvature: OnceCell::new(),
            derivative: OnceCell::new(),
            holonomy: OnceCell::new(),
        })
    }

    fn algebra(&self) -> &LieAlgebra {
        &self.file.algebra
    }

    fn su2(&self) -> Result<&Su2Structure> {
        cached(&self.su2, || {
            let sec = self.file.section("su2").ok_or_else(|| Error::Missing("[su2] section".into()))?;
            Su2Structure::new(
                self.algebra().clone(),
                sec.require("eta")?.clone(),
                sec.require("omega1")?.clone(),
                sec.require("omega2")?.clone(),
                sec.require("omega3")?.clone(),
            )
        })
    }

    fn family(&self) -> Result<&ParamFamily> {
        cached(&self.family, || ParamFamily::from_file(&self.file))
    }

    fn companion(&self) -> Result<&StructureFile> {
        self.companion.as_ref().ok_or_else(|| Error::Missing("companion structure file".into()))
    }

    fn frame(&self) -> Result<&(MetricFrame, Form)> {
        cached(&self.frame, || MetricFrame::from_file(&self.file))
    }

    fn connection(&self) -> Result<&ConnectionSheet> {
        cached(&self.connection, || {
            let (m, f) = self.frame()?;
            bismut_connection(m, f)
        })
    }

    fn curvature(&self) -> Result<&CurvatureSheet> {
        cached(&self.curvature, || curvature(&self.frame()?.0, self.connection()?))
    }

    fn derivative(&self) -> Result<&Tensor> {
        cached(&self.derivative, || {
            let mut d = covariant_derivative_curvature(self.connection()?, self.curvature()?, 1)?;
            Ok(d.remove(0))
        })
    }

    fn holonomy(&self) -> Result<&HolonomyReport> {
        cached(&self.holonomy, || holonomy_algebra(&self.frame()?.0, self.connection()?, HOLONOMY_ORDER))
    }

    fn bundle(&self, label: &str) -> Result<crate::structures::CircleBundleReport> {
        let base = self.file.section("base").ok_or_else(|| Error::Missing("[base] section".into()))?;
        let sec = self
            .file
            .sections_of("bundle")
            .find(|s| s.label.as_deref() == Some(label))
            .ok_or_else(|| Error::Missing(format!("[bundle {label}]")))?;
        let (c, s) = (rational_setting(sec, "cos")?, rational_setting(sec, "sin")?);
        circle_bundle_structure(
            self.algebra(),
            base.require("omega1")?,
            base.require("omega2")?,
            base.require("omega3")?,
            sec.require("Omega")?,
            (&c, &s),
        )
    }

    fn check_n(&self) -> Result<usize> {
        Ok(self.frame()?.0.dim())
    }
}

/// Evaluate one key against a payload.
fn evaluate(ctx: &Context, key: &str) -> Result<Value> {
    let alg = ctx.algebra();
    if let Some(rest) = key.strip_prefix("omega^") {
        let (i, j) = indices_2(rest).ok_or_else(|| bad_key(key))?;
        check_range(ctx.check_n()?, &[i, j])?;
        return Ok(Value::Form(ctx.connection()?.omega(i, j)));
    }
    if let Some(rest) = key.strip_prefix("Omega^") {
        let (i, j) = indices_2(rest).ok_or_else(|| bad_key(key))?;
        check_range(ctx.check_n()?, &[i, j])?;
        return Ok(Value::Form(ctx.curvature()?.form(i, j).clone()));
    }
    if let Some(rest) = key.strip_prefix("nabla_") {
        let (m, i, j) = nabla_key(rest).ok_or_else(|| bad_key(key))?;
        check_range(ctx.check_n()?, &[m, i, j])?;
        return Ok(Value::Form(nabla_omega(ctx.derivative()?, m, i, j)));
    }
    if let Some(rest) = key.strip_prefix("form nabla_") {
        let (m, i, j) = nabla_key(rest).ok_or_else(|| bad_key(key))?;
        check_range(ctx.check_n()?, &[m, i, j])?;
        return Ok(Value::Form(form_derivative(ctx.connection()?, ctx.curvature()?.form(i, j), m)));
    }
    if let Some(rest) = key.strip_prefix("T_") {
        let idx: Vec<usize> = rest.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(|| bad_key(key))?;
        let n = ctx.check_n()?;
        if idx.len() != 3 {
            return Err(bad_key(key));
        }
        check_range(n, &idx)?;
        let (m, f) = ctx.frame()?;
        let (_, comps) = torsion_form(m, f)?;
        return Ok(text(fmt_rational(&comps[idx[0] - 1][idx[1] - 1][idx[2] - 1])));
    }
    if let Some(rest) = key.strip_prefix("d(F^").and_then(|r| r.strip_suffix(')')) {
        let k: usize = rest.parse().map_err(|_| bad_key(key))?;
        let f = &ctx.frame()?.1;
        return Ok(Value::Form(alg.d(&f.power(k))?));
    }
    if let Some(rest) = key.strip_prefix("d^2 e") {
        let k: usize = rest.parse().map_err(|_| bad_key(key))?;
        check_range(alg.dim(), &[k])?;
        return Ok(Value::Form(alg.d(alg.de(k))?));
    }
    if let Some(rest) = key.strip_prefix("d f") {
        let k: usize = rest.parse().map_err(|_| bad_key(key))?;
        check_range(alg.dim(), &[k])?;
        let (report, _) = basis_change(ctx)?;
        return Ok(Value::Form(report.computed[k - 1].clone()));
    }
    if let Some(name) = key.strip_prefix("residual ") {
        let table = su2_residual_table(ctx.su2()?)?;
        return table.get(name).cloned().map(Value::Form).ok_or_else(|| bad_key(key));
    }
    if let Some(label) = key.strip_prefix("bundle_hypo ") {
        let r = ctx.bundle(label)?;
        let s = r.structure.ok_or_else(|| Error::Invalid("curvature form is not closed".into()))?;
        return Ok(yes_no(is_hypo(&s)?.pass()));
    }
    if let Some(label) = key.strip_prefix("bundle ") {
        return Ok(text(if ctx.bundle(label)?.pass() { "balanced" } else { "fails" }));
    }
    if let Some(k) = key.strip_prefix('b').and_then(|r| r.parse::<usize>().ok()) {
        return Ok(text(alg.ce_cohomology(k)?.betti(k).unwrap_or(0).to_string()));
    }
    if let Some(k) = key.strip_prefix('H').and_then(|r| r.parse::<usize>().ok()) {
        let report = alg.ce_cohomology(k)?;
        let reps: Vec<String> = report.degrees[k].representatives.iter().map(|f| f.to_string()).collect();
        return Ok(text(reps.join(", ")));
    }
    Ok(match key {
        "jacobi" => text(if alg.check_jacobi().pass() { "pass" } else { "fail" }),
        "su2" => text(if validate_su2(ctx.su2()?, None)?.pass() { "valid" } else { "invalid" }),
        "standard" => yes_no(*ctx.su2()? == Su2Structure::standard(alg.clone())?),
        "balanced_su2" => yes_no(is_balanced_su2(ctx.su2()?)?.pass()),
        "hypo" => yes_no(is_hypo(ctx.su2()?)?.pass()),
        "balanced_evolution" => yes_no(verify_balanced_evolution(ctx.family()?)?.pass()),
        "hypo_evolution" => yes_no(verify_hypo_evolution(ctx.family()?)?.pass()),
        "suspension" => {
            let (s, _) = suspend_family(ctx.family()?)?;
            let sec = ctx.companion()?.section("sun").ok_or_else(|| Error::Missing("[sun] section".into()))?;
            let same = s.f == *sec.require("F")?
                && s.psi_plus == *sec.require("psi_plus")?
                && s.psi_minus == *sec.require("psi_minus")?;
            text(if same { "matches" } else { "differs" })
        }
        "suspension_closed" => yes_no(suspend_family(ctx.family()?)?.1.pass()),
        "coframe" => {
            let (s, _) = suspend_family(ctx.family()?)?;
            let sec =
                ctx.companion()?.section("coframe").ok_or_else(|| Error::Missing("[coframe] section".into()))?;
            let alphas = (1..=6).map(|i| sec.require(&format!("alpha{i}")).cloned()).collect::<Result<Vec<_>>>()?;
            text(if verify_orthonormal_coframe(&s, &alphas)?.pass() { "orthonormal" } else { "not orthonormal" })
        }
        "volume" => Value::Form(Form::scalar(alg.dim(), family_volume(ctx.family()?)?.coefficient)),
        "volume_sign" => {
            let signs: Vec<&str> = family_volume(ctx.family()?)?
                .domain_signs()
                .into_iter()
                .map(|s| match s {
                    Some(1) => "+",
                    Some(_) => "-",
                    None => "mixed",
                })
                .collect();
            text(signs.join(", "))
        }
        "dF" => Value::Form(alg.d(&ctx.frame()?.1)?),
        "T" => {
            let (m, f) = ctx.frame()?;
            Value::Form(torsion_form(m, f)?.0)
        }
        "connection_checks" => {
            let c = check_connection(&ctx.frame()?.0, ctx.connection()?)?;
            text(if c.pass() { "pass" } else { "fail" })
        }
        "connection_forms" => text(ctx.connection()?.nonzero_forms().len().to_string()),
        "curvature_forms" => text(ctx.curvature()?.nonzero_forms().len().to_string()),
        "curvature_rank" => {
            let forms: Vec<Form> = ctx.curvature()?.nonzero_forms().into_iter().map(|(_, _, f)| f.clone()).collect();
            text(rank(&forms)?.to_string())
        }
        "listed_rank" => {
            let forms = ctx
                .listed
                .iter()
                .map(|k| match evaluate(ctx, k)? {
                    Value::Form(f) => Ok(f),
                    Value::Text(_) => Err(bad_key(k)),
                })
                .collect::<Result<Vec<_>>>()?;
            text(rank(&forms)?.to_string())
        }
        "holonomy_dim" => text(ctx.holonomy()?.span_dimension.to_string()),
        "holonomy_su_n" => yes_no(ctx.holonomy()?.contained_in_su_n),
        "holonomy_full_su_n" => yes_no(ctx.holonomy()?.is_full_su_n()),
        "holonomy_stabilized" => {
            text(ctx.holonomy()?.stabilized_at_order.map_or("no".to_string(), |o| o.to_string()))
        }
        "basis_change" => text(if basis_change(ctx)?.0.pass { "exact" } else { "fails" }),
        _ => return Err(bad_key(key)),
    })
}

fn bad_key(key: &str) -> Error {
    Error::Invalid(format!("unknown catalog key {key:?}"))
}

fn check_range(n: usize, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&i| i == 0 || i > n) {
        Some(&i) => Err(Error::IndexOutOfRange { index: i, dim: n }),
        None => Ok(()),
    }
}

fn basis_change(ctx: &Context) -> Result<(crate::algebras::BasisChangeReport, LieAlgebra)> {
    let sec = ctx.file.section("basis").ok_or_else(|| Error::Missing("[basis] section".into()))?;
    let target = parse_compact(sec.setting("target").ok_or_else(|| Error::Missing("basis target".into()))?)?;
    let n = ctx.algebra().dim();
    let rows = (1..=n)
        .map(|i| sec.require(&format!("f{i}")).map(|f| (1..=n).map(|j| f.coeff_of(&[j])).collect::<Vec<Scalar>>()))
        .collect::<Result<Vec<_>>>()?;
    let m = CoframeMap::new(rows)?;
    Ok((ctx.algebra().verify_basis_change(&m, &target)?, target))
}

fn compare(expected: &str, actual: &Value) -> bool {
    match actual {
        Value::Form(f) => parse_form(expected, f.dim(), f.degree()).is_ok_and(|e| e == *f),
        Value::Text(s) => s == expected.trim(),
    }
}

/// Evaluate every expectation of an entry.
pub fn run(entry: &CatalogEntry) -> EntryResult {
    let expect: Vec<(&str, &str)> = entry.expect.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    check_against(entry, &expect)
}

/// Evaluate the given expectations, instead of the entry's own list, on the
/// entry's payload.
pub fn check_against(entry: &CatalogEntry, expect: &[(&str, &str)]) -> EntryResult {
    let ctx = match Context::new(entry) {
        Ok(c) => c,
        Err(e) => {
            return EntryResult { name: entry.name.clone(), topic: entry.topic.clone(), checks: vec![], error: Some(e.to_string()) }
        }
    };
    let checks = expect
        .iter()
        .map(|&(key, expected)| {
            let (actual, pass) = match evaluate(&ctx, key) {
                Ok(v) => {
                    let pass = compare(expected, &v);
                    (v.to_string(), pass)
                }
                Err(e) => (format!("error: {e}"), false),
            };
            CheckOutcome {
                key: key.to_string(),
                expected: expected.to_string(),
                actual,
                pass,
                stated: entry.stated(key).map(str::to_string),
            }
        })
        .collect();
    EntryResult { name: entry.name.clone(), topic: entry.topic.clone(), checks, error: None }
}

/// Evaluate a single key on an arbitrary entry, outside its expectation list.
pub fn probe(entry: &CatalogEntry, key: &str) -> Result<Value> {
    evaluate(&Context::new(entry)?, key)
}

/// Run every entry on `jobs` worker threads (all cores when `None`); results
/// are in name order whatever the scheduling.
pub fn run_all(jobs: Option<usize>) -> Result<Vec<EntryResult>> {
    let entries = manifest();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let mut results: Vec<EntryResult> = pool.install(|| entries.par_iter().map(run).collect());
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(results)
}

/// One line per entry followed by a total.
pub fn summary(results: &[EntryResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let passed = r.checks.iter().filter(|c| c.pass).count();
        let status = if r.pass() { "pass" } else { "FAIL" };
        out.push_str(&format!("{:<width$}  {status}  {passed}/{}\n", r.name, r.checks.len()));
    }
    let ok = results.iter().filter(|r| r.pass()).count();
    out.push_str(&format!("{ok}/{} entries pass\n", results.len()));
    out
}
