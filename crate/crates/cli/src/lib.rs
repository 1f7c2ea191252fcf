//! Command-line surface for the V_L^+ engine.
//!
//! `run` never prints; it returns the exit code with the text meant for
//! stdout and stderr. Exit codes: 0 every requested check passed
//! (inconclusive certificates included), 1 some check failed, 2 usage or
//! input error.

pub mod expr;
pub mod report;

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use vlplus_core::checks::{Check, Provenance, Status};
use vlplus_core::error::Error as CoreError;
use vlplus_core::exact::{approx, fmt_rat, int, Rational};
use vlplus_core::lattice::{ModuleId, RANK_ONE_NOTICE};
use vlplus_core::suites::{commutator_suite, Space, SuiteConfig};
use vlplus_core::zhu::{
    certify_in_ov, classify, e_star_e_check, lemma51_check, relation_target, scalar_table,
    table_checks, verify_relations, zhu_basis_certificate, CertifyOutcome, CharacterEvaluator,
    ERelation,
};

use report::{Report, Timing};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "vlplus",
    version,
    about = "Exact computations for the rank-one lattice VOA V_L^+ and its Zhu algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// `<alpha, alpha> = 2k` with `k >= 1`.
fn k_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Module catalog, basis certificate and the dimension of A(V_L^+).
    Classify {
        #[arg(long, value_parser = k_arg())]
        k: u32,
        #[arg(long)]
        json: bool,
        /// Also show decimal approximations (display only).
        #[arg(long)]
        approx: bool,
    },
    /// Top-level scalars of omega, E and J on every irreducible module.
    Table {
        #[arg(long, value_parser = k_arg())]
        k: u32,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        approx: bool,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_parser = k_arg())]
        k: u32,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        json: bool,
    },
    /// Searches for an O(V) certificate of an E-relation.
    Certify {
        #[arg(long, value_parser = k_arg())]
        k: u32,
        #[arg(long, value_enum, ignore_case = true)]
        relation: RelationArg,
        /// Largest output weight of a residue generator; defaults to k + 8.
        #[arg(long)]
        cutoff: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluates a state expression, optionally its character on a module.
    Eval {
        #[arg(long, value_parser = k_arg())]
        k: u32,
        #[arg(long)]
        expr: String,
        /// VL+, VL-, VL(r), VLhalf+, VLhalf-, T1+, T1-, T2+ or T2-.
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        approx: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Relations,
    Lemma51,
    Estare,
    Commutators,
    Twisted,
    Basis,
    All,
}

impl SuiteArg {
    /// The suites aggregated by `all`, in output order.
    pub const PARTS: [SuiteArg; 6] = [
        SuiteArg::Relations,
        SuiteArg::Lemma51,
        SuiteArg::Estare,
        SuiteArg::Commutators,
        SuiteArg::Twisted,
        SuiteArg::Basis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteArg::Relations => "relations",
            SuiteArg::Lemma51 => "lemma51",
            SuiteArg::Estare => "estare",
            SuiteArg::Commutators => "commutators",
            SuiteArg::Twisted => "twisted",
            SuiteArg::Basis => "basis",
            SuiteArg::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RelationArg {
    #[value(name = "L1")]
    L1,
    #[value(name = "L2")]
    L2,
}

impl From<RelationArg> for ERelation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::L1 => ERelation::L1,
            RelationArg::L2 => ERelation::L2,
        }
    }
}

fn timing(start: Instant) -> Timing {
    Timing {
        elapsed_us: start.elapsed().as_micros().try_into().unwrap_or(u64::MAX),
    }
}

fn show(q: &Rational, with_approx: bool) -> String {
    if with_approx {
        format!("{} (~{:.6})", fmt_rat(q), approx(q))
    } else {
        fmt_rat(q)
    }
}

/// Checks of one suite for one `k`.
pub fn suite_checks(k: u32, suite: SuiteArg) -> Result<Vec<Check>, CoreError> {
    Ok(match suite {
        SuiteArg::Relations => verify_relations(k)?.checks,
        SuiteArg::Lemma51 => {
            let l = lemma51_check(k)?;
            vec![
                Check::new(
                    "11x11 matrix equals the closed form",
                    l.matrix_matches(),
                    &l.expected,
                    &l.matrix,
                    Provenance::Stated,
                ),
                Check::equal("det = 6144(1-k)k^2", &l.expected_det, &l.determinant, Provenance::Stated),
            ]
        }
        SuiteArg::Estare => {
            let ee = e_star_e_check(k)?;
            vec![Check::new(
                "E*E = sum_j C(k,j) q_{2k-j}",
                ee.pass(),
                &ee.closed_form,
                &ee.computed,
                Provenance::Stated,
            )]
        }
        SuiteArg::Commutators => {
            let cfg = SuiteConfig::new(k);
            let mut v = commutator_suite(Space::Fock, &cfg)?;
            v.extend(commutator_suite(Space::Lattice, &cfg)?);
            v
        }
        SuiteArg::Twisted => {
            let mut v: Vec<Check> = table_checks(k)?
                .into_iter()
                .filter(|c| c.name.starts_with('T'))
                .collect();
            v.extend(commutator_suite(Space::Twisted, &SuiteConfig::new(k))?);
            v
        }
        SuiteArg::Basis => {
            let b = zhu_basis_certificate(k)?;
            let names: Vec<String> = b.basis.iter().map(ToString::to_string).collect();
            vec![
                Check::new(
                    format!("evaluation matrix nonsingular ({} class)", b.class.as_str()),
                    !b.determinant.is_zero(),
                    "nonzero",
                    fmt_rat(&b.determinant),
                    Provenance::Derived,
                ),
                Check::new(
                    "characters pairwise distinct",
                    b.characters_distinct,
                    "true",
                    b.characters_distinct,
                    Provenance::Derived,
                ),
                Check::new(
                    "spanning set size = k + 7",
                    b.basis.len() == k as usize + 7,
                    k + 7,
                    format!("{} [{}]", b.basis.len(), names.join(", ")),
                    Provenance::Stated,
                ),
            ]
        }
        SuiteArg::All => {
            let mut v = Vec::new();
            for part in SuiteArg::PARTS {
                for mut c in suite_checks(k, part)? {
                    c.name = format!("{}: {}", part.name(), c.name);
                    v.push(c);
                }
            }
            v
        }
    })
}

fn report_outcome(report: &Report, json: bool) -> Outcome {
    Outcome {
        code: if report.all_pass { EXIT_PASS } else { EXIT_FAIL },
        stdout: if json { report.to_json() } else { report.to_text() },
        stderr: String::new(),
    }
}

fn core_error(e: CoreError) -> Outcome {
    Outcome::usage(format!("error: {e}\n"))
}

fn cmd_verify(k: u32, suite: SuiteArg, json: bool) -> Outcome {
    let start = Instant::now();
    match suite_checks(k, suite) {
        Ok(checks) => report_outcome(&Report::from_checks(k, suite.name(), &checks, timing(start)), json),
        Err(e) => core_error(e),
    }
}

fn cmd_table(k: u32, json: bool, with_approx: bool) -> Outcome {
    let start = Instant::now();
    if k == 1 {
        return Outcome::usage(format!("{RANK_ONE_NOTICE}\nerror: the table needs k >= 2\n"));
    }
    let (rows, checks) = match scalar_table(k).and_then(|r| Ok((r, table_checks(k)?))) {
        Ok(x) => x,
        Err(e) => return core_error(e),
    };
    let report = Report::from_checks(k, "table", &checks, timing(start));
    if json {
        return report_outcome(&report, true);
    }
    let header = ["module", "top weight", "omega", "E", "J"];
    let body: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            let c = &r.computed.character;
            [
                r.computed.id.to_string(),
                show(&r.computed.top_weight, with_approx),
                show(&c.omega, with_approx),
                show(&c.e, with_approx),
                show(&c.j, with_approx),
            ]
        })
        .collect();
    let mut out = format!("k = {k}: top-level scalars on the {} irreducible modules\n", rows.len());
    out.push_str(&columns(&header, &body));
    let failed: Vec<&Check> = checks.iter().filter(|c| c.status.is_failure()).collect();
    let _ = writeln!(
        out,
        "closed-form comparison: {}/{} entries match",
        checks.len() - failed.len(),
        checks.len()
    );
    for c in &failed {
        let _ = writeln!(out, "  MISMATCH {}: expected {} computed {}", c.name, c.expected, c.actual);
    }
    Outcome {
        code: if failed.is_empty() { EXIT_PASS } else { EXIT_FAIL },
        stdout: out,
        stderr: String::new(),
    }
}

/// Left-aligned columns separated by two spaces.
fn columns<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths = header.map(str::len);
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn cmd_classify(k: u32, json: bool, with_approx: bool) -> Outcome {
    let start = Instant::now();
    let c = match classify(k) {
        Ok(c) => c,
        Err(e) => return core_error(e),
    };
    let dim_check = Check::equal(
        "dim A(V_L^+) = k + 7",
        &(k as usize + 7),
        &c.dimension,
        Provenance::Stated,
    );
    let mut checks = Vec::new();
    if c.notice.is_none() {
        match (table_checks(k), suite_checks(k, SuiteArg::Basis)) {
            (Ok(t), Ok(b)) => {
                checks.extend(t);
                checks.extend(b);
            }
            (Err(e), _) | (_, Err(e)) => return core_error(e),
        }
    }
    checks.push(dim_check);
    checks.push(Check::new(
        "commutative semisimple",
        c.commutative_semisimple,
        "true",
        c.commutative_semisimple,
        Provenance::Derived,
    ));
    let report = Report::from_checks(k, "classify", &checks, timing(start));
    if json {
        return report_outcome(&report, true);
    }
    let mut out = String::new();
    if let Some(notice) = c.notice {
        let _ = writeln!(out, "{notice}");
    } else {
        let _ = writeln!(out, "k = {k}: {} irreducible V_L^+-modules", c.modules.len());
        let body: Vec<[String; 5]> = c
            .modules
            .iter()
            .map(|d| {
                [
                    d.id.to_string(),
                    show(&d.top_weight, with_approx),
                    show(&d.character.omega, with_approx),
                    show(&d.character.e, with_approx),
                    show(&d.character.j, with_approx),
                ]
            })
            .collect();
        out.push_str(&columns(&["module", "top weight", "omega", "E", "J"], &body));
        if let Some(b) = &c.basis {
            let names: Vec<String> = b.basis.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "square class of k: {}", b.class.as_str());
            let _ = writeln!(out, "spanning set: {}", names.join(", "));
            let _ = writeln!(out, "evaluation determinant: {}", fmt_rat(&b.determinant));
        }
        let _ = writeln!(
            out,
            "A(V_L^+) is {}commutative semisimple",
            if c.commutative_semisimple { "" } else { "NOT verified " }
        );
    }
    let _ = writeln!(out, "dim A(V_L^+) = {}", c.dimension);
    let failed: Vec<&Check> = checks.iter().filter(|c| c.status.is_failure()).collect();
    for f in &failed {
        let _ = writeln!(out, "FAIL {}: expected {} actual {}", f.name, f.expected, f.actual);
    }
    Outcome {
        code: if failed.is_empty() { EXIT_PASS } else { EXIT_FAIL },
        stdout: out,
        stderr: String::new(),
    }
}

/// Character oracle plus certificate search; an inconclusive search is
/// reported but does not fail.
pub fn certify_checks(k: u32, rel: ERelation, cutoff: i64) -> Result<Vec<Check>, CoreError> {
    let target = relation_target(k, rel)?;
    let mut ev = CharacterEvaluator::new(k);
    let mut bad = Vec::new();
    let ids = ModuleId::all(k);
    for id in &ids {
        let v = ev.eval(&target, *id)?;
        if v != int(0) {
            bad.push(format!("{id}: {}", fmt_rat(&v)));
        }
    }
    let mut checks = vec![Check::new(
        format!("{rel:?} target vanishes on all {} tops", ids.len()),
        bad.is_empty(),
        "0",
        if bad.is_empty() { "0".to_string() } else { bad.join("; ") },
        Provenance::Derived,
    )];
    let name = format!("{rel:?} target in O(V) at cutoff {cutoff}");
    checks.push(match certify_in_ov(&target, cutoff)? {
        CertifyOutcome::Certified(cert) => {
            let replays = cert.replays()?;
            let gens: Vec<String> = cert
                .generators
                .iter()
                .map(|g| format!("{} * res({}, {}, n = {})", fmt_rat(&g.coeff), g.u, g.v, g.n))
                .collect();
            Check::new(
                name,
                replays,
                "replayable certificate",
                format!(
                    "{} generators, replay {}: {}",
                    gens.len(),
                    if replays { "exact" } else { "MISMATCH" },
                    gens.join(" + ")
                ),
                Provenance::Derived,
            )
        }
        CertifyOutcome::Inconclusive { generators, rank } => Check {
            name,
            status: Status::Inconclusive,
            expected: "replayable certificate".into(),
            actual: format!("no combination of {generators} generators (rank {rank})"),
            provenance: Provenance::Derived,
        },
    });
    Ok(checks)
}

fn cmd_certify(k: u32, rel: RelationArg, cutoff: Option<i64>, json: bool) -> Outcome {
    let start = Instant::now();
    let cutoff = cutoff.unwrap_or(k as i64 + 8);
    match certify_checks(k, rel.into(), cutoff) {
        Ok(checks) => report_outcome(
            &Report::from_checks(k, format!("certify {rel:?}"), &checks, timing(start)),
            json,
        ),
        Err(e) => core_error(e),
    }
}

fn cmd_eval(k: u32, src: &str, module: Option<&str>, with_approx: bool) -> Outcome {
    let parsed = match expr::parse(src) {
        Ok(e) => e,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let state = match expr::eval(&parsed, k) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let mut out = format!("k = {k}\n{parsed}\n= {state}\n");
    if let Some(m) = module {
        let id: ModuleId = match m.parse() {
            Ok(id) => id,
            Err(e) => return core_error(e),
        };
        if !id.valid_for(k) {
            return Outcome::usage(format!("error: module {id} does not exist for k = {k}\n"));
        }
        match CharacterEvaluator::new(k).eval(&state, id) {
            Ok(v) => {
                let _ = writeln!(out, "character on {id}: {}", show(&v, with_approx));
            }
            Err(e) => return core_error(e),
        }
    }
    Outcome {
        code: EXIT_PASS,
        stdout: out,
        stderr: String::new(),
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match cli.command {
        Command::Classify { k, json, approx } => cmd_classify(k, json, approx),
        Command::Table { k, json, approx } => cmd_table(k, json, approx),
        Command::Verify { k, suite, json } => cmd_verify(k, suite, json),
        Command::Certify {
            k,
            relation,
            cutoff,
            json,
        } => cmd_certify(k, relation, cutoff, json),
        Command::Eval {
            k,
            expr,
            module,
            approx,
        } => cmd_eval(k, &expr, module.as_deref(), approx),
    }
}
