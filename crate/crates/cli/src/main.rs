use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use balanced::algebras::render_expr;
use balanced::catalog::{self, CatalogEntry};
use balanced::connection::{
    bismut_connection, check_connection, covariant_derivative_curvature, curvature, holonomy_algebra, nabla_omega,
    torsion_form, MetricFrame,
};
use balanced::evolution::{suspend_family, verify_balanced_evolution, verify_hypo_evolution, ParamFamily};
use balanced::structures::{
    is_balanced_su2, is_balanced_sun, is_hypo, suspend_su2, validate_su2, validate_sun, Su2Structure, SunStructure,
};
use balanced::{CoframeMap, Error, Form, LieAlgebra, Rational, StructureFile};

/// Exact invariant geometry on Lie algebras: SU(2)/SU(n)-structures,
/// balanced metrics, Bismut connections and holonomy.
#[derive(Parser)]
#[command(name = "balanced", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a structure file, check d^2 = 0 and validate every structure in it
    Validate {
        file: PathBuf,
        /// Value of t for parametric structures
        #[arg(long, allow_hyphen_values = true)]
        at: Option<Rational>,
    },
    /// Chevalley-Eilenberg cohomology with representatives
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Check structure conditions; without flags every applicable one
    Check {
        file: PathBuf,
        #[command(flatten)]
        which: CheckFlags,
    },
    /// Verify the balanced evolution equations of a [family]
    EvolveVerify { file: PathBuf },
    /// Suspend a [family] or an [su2] structure to an SU(3)-structure file
    Suspend {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Bismut connection of the [structure] section
    Bismut {
        file: PathBuf,
        #[arg(long, value_enum)]
        show: Vec<Show>,
    },
    /// Infinitesimal holonomy of the Bismut connection
    Holonomy {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Built-in catalog of worked structures
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Full report of a catalog entry
    Report { name: String },
}

#[derive(Args)]
struct CheckFlags {
    /// Validate the [su2] quadruplet
    #[arg(long)]
    su2: bool,
    /// Validate the [sun] section as an SU(3)-structure
    #[arg(long)]
    su3: bool,
    /// Validate the [sun] section as an SU(4)-structure
    #[arg(long)]
    su4: bool,
    /// Balanced condition for the SU(2) or SU(n) structure
    #[arg(long)]
    balanced: bool,
    /// Hypo condition for the [su2] quadruplet
    #[arg(long)]
    hypo: bool,
    /// Value of t for parametric structures
    #[arg(long, allow_hyphen_values = true)]
    at: Option<Rational>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Show {
    Torsion,
    Connection,
    Curvature,
    Nabla,
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Run { name: String },
    RunAll {
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Anything that stops a computation from producing a verdict (exit 2).
enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = dispatch(cli.command, &mut out);
    print!("{out}");
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Outcome {
    match cmd {
        Command::Validate { file, at } => validate(&load(&file)?, at.as_ref(), out),
        Command::Cohomology { file, max_degree } => {
            let f = load(&file)?;
            let k = max_degree.unwrap_or(f.algebra.dim());
            write!(out, "{}", f.algebra.ce_cohomology(k)?).unwrap();
            Ok(true)
        }
        Command::Check { file, which } => check(&load(&file)?, &which, out),
        Command::EvolveVerify { file } => evolve(&load(&file)?, out),
        Command::Suspend { file, out: target } => suspend(&load(&file)?, target.as_deref(), out),
        Command::Bismut { file, show } => bismut(&load(&file)?, &show, out),
        Command::Holonomy { file, max_order } => holonomy(&load(&file)?, max_order, out),
        Command::Catalog { command } => match command {
            CatalogCommand::List => {
                let entries = catalog::manifest();
                let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
                for e in entries {
                    writeln!(out, "{:<width$}  {}", e.name, e.topic).unwrap();
                }
                Ok(true)
            }
            CatalogCommand::Run { name } => {
                let r = catalog::run(&find(&name)?);
                write!(out, "{r}").unwrap();
                Ok(r.pass())
            }
            CatalogCommand::RunAll { jobs } => {
                let results = catalog::run_all(jobs)?;
                write!(out, "{}", catalog::summary(&results)).unwrap();
                for r in results.iter().filter(|r| !r.pass()) {
                    write!(out, "\n{r}").unwrap();
                }
                Ok(results.iter().all(|r| r.pass()))
            }
        },
        Command::Report { name } => report(&find(&name)?, out),
    }
}

fn find(name: &str) -> Result<CatalogEntry, Failure> {
    catalog::entry(name).ok_or_else(|| Failure::Input(format!("no catalog entry named {name:?}; see `catalog list`")))
}

fn load(path: &Path) -> Result<StructureFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    balanced::parse_equations(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn su2_of(f: &StructureFile) -> Result<Option<Su2Structure>, Failure> {
    let Some(sec) = f.section("su2") else { return Ok(None) };
    Ok(Some(Su2Structure::new(
        f.algebra.clone(),
        sec.require("eta")?.clone(),
        sec.require("omega1")?.clone(),
        sec.require("omega2")?.clone(),
        sec.require("omega3")?.clone(),
    )?))
}

fn sun_of(f: &StructureFile) -> Result<Option<SunStructure>, Failure> {
    let Some(sec) = f.section("sun") else { return Ok(None) };
    let j = sec.j.clone().or_else(|| f.section("structure").and_then(|s| s.j.clone()));
    Ok(Some(SunStructure::new(
        f.algebra.clone(),
        sec.require("F")?.clone(),
        sec.require("psi_plus")?.clone(),
        sec.require("psi_minus")?.clone(),
        j,
    )?))
}

fn validate(f: &StructureFile, at: Option<&Rational>, out: &mut String) -> Outcome {
    let jac = f.algebra.check_jacobi();
    let mut ok = jac.pass();
    if ok {
        writeln!(out, "d^2 = 0: yes").unwrap();
    }
    for (i, dd) in &jac.offending {
        writeln!(out, "d^2 e{i} = {dd}").unwrap();
    }
    if let Some(s) = su2_of(f)? {
        let r = validate_su2(&s, at)?;
        write!(out, "[su2]\n{r}").unwrap();
        ok &= r.pass();
    }
    if let Some(s) = sun_of(f)? {
        if at.is_some() || (s.f.is_constant() && s.psi_plus.is_constant()) {
            let r = validate_sun(&s, at)?;
            write!(out, "[sun]\n{r}").unwrap();
            ok &= r.pass();
        }
    }
    if f.section("structure").is_some() {
        MetricFrame::from_file(f)?;
        writeln!(out, "[structure]\northonormal frame with orthogonal J: yes").unwrap();
    }
    if f.section("family").is_some() {
        ParamFamily::from_file(f)?;
        writeln!(out, "[family]\nvalid SU(2)-structure on the domain: yes").unwrap();
    }
    Ok(ok)
}

fn check(f: &StructureFile, w: &CheckFlags, out: &mut String) -> Outcome {
    let any = w.su2 || w.su3 || w.su4 || w.balanced || w.hypo;
    let su2 = su2_of(f)?;
    let sun = sun_of(f)?;
    let mut ok = true;
    let mut ran = false;
    if w.su2 || (!any && su2.is_some()) {
        let s = su2.as_ref().ok_or_else(|| Failure::Input("--su2 needs an [su2] section".into()))?;
        let r = validate_su2(s, w.at.as_ref())?;
        write!(out, "SU(2)-structure:\n{r}").unwrap();
        ok &= r.pass();
        ran = true;
    }
    for (flag, n) in [(w.su3, 3), (w.su4, 4)] {
        if !flag {
            continue;
        }
        let s = sun.as_ref().ok_or_else(|| Failure::Input(format!("--su{n} needs an [sun] section")))?;
        if s.n() != n {
            return Err(Failure::Input(format!("--su{n} on a {}-dimensional algebra", s.algebra.dim())));
        }
        let r = validate_sun(s, w.at.as_ref())?;
        write!(out, "SU({n})-structure:\n{r}").unwrap();
        ok &= r.pass();
        ran = true;
    }
    if !any {
        if let Some(s) = &sun {
            let r = validate_sun(s, w.at.as_ref())?;
            write!(out, "SU({})-structure:\n{r}", s.n()).unwrap();
            ok &= r.pass();
            ran = true;
        }
    }
    if w.balanced || !any {
        if let Some(s) = &su2 {
            let r = is_balanced_su2(s)?;
            write!(out, "balanced SU(2):\n{r}").unwrap();
            ok &= r.pass();
            ran = true;
        } else if let Some(s) = &sun {
            let r = is_balanced_sun(s)?;
            write!(out, "balanced SU({}):\n{r}", s.n()).unwrap();
            ok &= r.pass();
            ran = true;
        } else if let Some(sec) = f.section("structure") {
            let form = sec.require("F")?;
            let n = f.algebra.dim() / 2;
            let d = f.algebra.d(&form.power(n - 1))?;
            writeln!(out, "balanced Hermitian:\nd(F^{}) = {d}", n - 1).unwrap();
            ok &= d.is_zero();
            ran = true;
        } else if w.balanced {
            return Err(Failure::Input("--balanced needs an [su2], [sun] or [structure] section".into()));
        }
    }
    if w.hypo || (!any && su2.is_some()) {
        let s = su2.as_ref().ok_or_else(|| Failure::Input("--hypo needs an [su2] section".into()))?;
        let r = is_hypo(s)?;
        write!(out, "hypo:\n{r}").unwrap();
        // without flags hypo is informative only
        if w.hypo {
            ok &= r.pass();
        }
        ran = true;
    }
    if !ran {
        return Err(Failure::Input("nothing to check: no [su2], [sun] or [structure] section".into()));
    }
    Ok(ok)
}

fn evolve(f: &StructureFile, out: &mut String) -> Outcome {
    let fam = ParamFamily::from_file(f)?;
    let r = verify_balanced_evolution(&fam)?;
    write!(out, "balanced evolution:\n{r}").unwrap();
    let h = verify_hypo_evolution(&fam)?;
    writeln!(out, "hypo evolution: {}", yes(h.pass())).unwrap();
    Ok(r.pass())
}

fn algebra_text(l: &LieAlgebra) -> String {
    let mut s = String::from("[algebra]\n");
    if let Some(n) = l.name() {
        writeln!(s, "name = {n}").unwrap();
    }
    writeln!(s, "dim = {}", l.dim()).unwrap();
    for (i, d) in l.differentials().iter().enumerate() {
        if !d.is_zero() {
            writeln!(s, "d e{} = {}", i + 1, render_expr(d)).unwrap();
        }
    }
    s
}

fn j_text(j: &CoframeMap) -> String {
    let items: Vec<String> = (1..=j.dim()).map(|i| format!("e{i} -> {}", render_expr(&j.image(i)))).collect();
    format!("J: {}\n", items.join(", "))
}

fn suspend(f: &StructureFile, target: Option<&Path>, out: &mut String) -> Outcome {
    let (algebra, forms, j, checks, ok): (LieAlgebra, [Form; 3], Option<CoframeMap>, String, bool) =
        if f.section("family").is_some() {
            let fam = ParamFamily::from_file(f)?;
            let (s, closed) = suspend_family(&fam)?;
            (s.ambient, [s.f, s.psi_plus, s.psi_minus], s.j, closed.residuals.to_string(), closed.pass())
        } else if let Some(s) = su2_of(f)? {
            let up = suspend_su2(&s)?;
            let r = validate_sun(&up, None)?;
            (up.algebra, [up.f, up.psi_plus, up.psi_minus], up.j, r.to_string(), r.pass())
        } else {
            return Err(Failure::Input("suspend needs a [family] or an [su2] section".into()));
        };
    let mut text = String::new();
    for line in checks.lines() {
        writeln!(text, "# {line}").unwrap();
    }
    text.push_str(&algebra_text(&algebra));
    text.push_str("\n[sun]\n");
    for (name, form) in ["F", "psi_plus", "psi_minus"].iter().zip(&forms) {
        writeln!(text, "{name} = {}", render_expr(form)).unwrap();
    }
    if let Some(j) = &j {
        text.push_str(&j_text(j));
    }
    match target {
        Some(p) => {
            fs::write(p, &text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            for line in checks.lines() {
                writeln!(out, "{line}").unwrap();
            }
            writeln!(out, "wrote {}", p.display()).unwrap();
        }
        None => out.push_str(&text),
    }
    Ok(ok)
}

fn bismut(f: &StructureFile, show: &[Show], out: &mut String) -> Outcome {
    let (m, form) = MetricFrame::from_file(f)?;
    let c = bismut_connection(&m, &form)?;
    let checks = check_connection(&m, &c)?;
    let all = [Show::Torsion, Show::Connection, Show::Curvature];
    let show = if show.is_empty() { &all[..] } else { show };
    for s in show {
        match s {
            Show::Torsion => writeln!(out, "T = {}", torsion_form(&m, &form)?.0).unwrap(),
            Show::Connection => write!(out, "{c}").unwrap(),
            Show::Curvature => write!(out, "{}", curvature(&m, &c)?).unwrap(),
            Show::Nabla => {
                let r = curvature(&m, &c)?;
                let d = covariant_derivative_curvature(&c, &r, 1)?;
                let n = m.dim();
                for dir in 1..=n {
                    for i in 1..=n {
                        for j in i + 1..=n {
                            let w = nabla_omega(&d[0], dir, i, j);
                            if !w.is_zero() {
                                writeln!(out, "nabla_E{dir} Omega^{i}_{j} = {w}").unwrap();
                            }
                        }
                    }
                }
            }
        }
    }
    if !checks.pass() {
        writeln!(
            out,
            "connection checks: skew {}, structure equations {}, Hermitian {}, direct solve {}",
            yes(checks.skew),
            yes(checks.cartan),
            yes(checks.hermitian),
            yes(checks.matches_direct_solve)
        )
        .unwrap();
    }
    Ok(checks.pass())
}

fn holonomy(f: &StructureFile, max_order: usize, out: &mut String) -> Outcome {
    let (m, form) = MetricFrame::from_file(f)?;
    let c = bismut_connection(&m, &form)?;
    let h = holonomy_algebra(&m, &c, max_order)?;
    for g in &h.generations {
        writeln!(out, "order {}: +{} -> {}", g.order, g.new_elements.len(), g.span_dimension).unwrap();
    }
    writeln!(out, "{h}").unwrap();
    writeln!(out, "u({}): {}, full su({}): {}", h.n, yes(h.contained_in_u_n), h.n, yes(h.is_full_su_n())).unwrap();
    Ok(h.all_skew)
}

fn report(e: &CatalogEntry, out: &mut String) -> Outcome {
    let r = catalog::run(e);
    write!(out, "{r}").unwrap();
    let file = balanced::parse_equations(&e.payload()?)?;
    writeln!(out, "\n{}", algebra_text(&file.algebra).trim_end()).unwrap();
    if file.section("structure").is_some() {
        writeln!(out).unwrap();
        bismut(&file, &[Show::Torsion, Show::Connection, Show::Curvature], out)?;
        holonomy(&file, catalog::HOLONOMY_ORDER, out)?;
    }
    Ok(r.pass())
}
