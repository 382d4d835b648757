//! Command-line driver for `stagedtoric`.
//!
//! [`run`] parses arguments and returns the exit code with the text that
//! should go to stdout and stderr, so tests can call it in-process.
//! Exit codes: 0 success, 1 domain failure, 2 input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use stagedtoric::groebner::MarkedBasis;
use stagedtoric::interpolation::is_balanced;
use stagedtoric::oracle::{fiber_partition, kernel_binomials, kernel_covered_by, standard_monomial_count, OracleError};
use stagedtoric::polyring::TermOrder;
use stagedtoric::stagedtree::StagedTree;
use stagedtoric::statmodel::{ci_quadrics, contraction_equivalence, vanishing_check, CiStatement};
use stagedtoric::tfp::{assemble_f, binomials, monomial_map, TfpError};
use stagedtoric::verify::{verify, VerifyError};

#[derive(Parser, Debug)]
#[command(name = "stagedtoric", version, about = "Toric ideals of staged trees")]
struct Cli {
    /// Emit a JSON object {command, input, results, witnesses}.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Tree document (JSON).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a tree document.
    Validate(Input),
    /// Stages, stratification, balance and only-child edges.
    Analyze(Input),
    /// The quadratic Gröbner basis F of a balanced stratified tree.
    Groebner(Input),
    /// Recompute F and check membership, marking, Buchberger and the initial ideal.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Also compare against the fiber oracle in degrees 2..=degree.
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Fibers of the toric map in one degree.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Check that F reduces every kernel binomial of this degree to zero.
        #[arg(long)]
        against_groebner: bool,
    },
    /// Evaluate F at sampled model points.
    Model {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quadrics of the statement X_A ⫫ X_B | X_C.
    Ci {
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<usize>,
        #[arg(long = "B", value_delimiter = ',', required = true)]
        b: Vec<usize>,
        #[arg(long = "C", value_delimiter = ',')]
        c: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u32>,
    },
    /// Contract only-child edges and compare the two trees.
    Contract(Input),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Analyze(_) => "analyze",
            Command::Groebner(_) => "groebner",
            Command::Verify { .. } => "verify",
            Command::Oracle { .. } => "oracle",
            Command::Model { .. } => "model",
            Command::Ci { .. } => "ci",
            Command::Contract(_) => "contract",
        }
    }

    fn input(&self) -> Option<&PathBuf> {
        match self {
            Command::Validate(i) | Command::Analyze(i) | Command::Groebner(i) | Command::Contract(i) => Some(&i.input),
            Command::Verify { input, .. } | Command::Oracle { input, .. } | Command::Model { input, .. } => {
                Some(&input.input)
            }
            Command::Ci { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// What a command produced: text for humans, results and witnesses for JSON.
struct Report {
    ok: bool,
    text: String,
    results: Value,
    witnesses: Value,
}

impl Report {
    fn new(ok: bool, text: String, results: Value) -> Self {
        Report { ok, text, results, witnesses: json!([]) }
    }
}

enum Failure {
    Input(String),
    Domain(Report),
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Input(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let command = cli.command.name();
    let input = cli.command.input().map(|p| p.display().to_string());
    let (code, report) = match dispatch(&cli.command) {
        Ok(r) => (if r.ok { 0 } else { 1 }, r),
        Err(Failure::Domain(r)) => (1, r),
        Err(Failure::Input(msg)) => {
            if !cli.json {
                return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") };
            }
            (2, Report::new(false, msg.clone(), json!({ "error": msg })))
        }
    };
    let stdout = if cli.json {
        let doc = json!({
            "command": command,
            "input": input,
            "results": report.results,
            "witnesses": report.witnesses,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize"))
    } else {
        report.text
    };
    Outcome { code, stdout, stderr: String::new() }
}

fn load(input: &Input) -> Result<StagedTree, Failure> {
    let path = &input.input;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    StagedTree::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Validate(i) => validate(&load(i)?),
        Command::Analyze(i) => analyze(&load(i)?),
        Command::Groebner(i) => groebner(&load(i)?),
        Command::Verify { input, deep, degree } => verify_cmd(&load(input)?, deep.then_some(*degree)),
        Command::Oracle { input, degree, against_groebner } => oracle(&load(input)?, *degree, *against_groebner),
        Command::Model { input, sample, seed } => model(&load(input)?, *sample, *seed),
        Command::Ci { a, b, c, sizes } => ci(sizes, a, b, c),
        Command::Contract(i) => contract(&load(i)?),
    }
}

fn validate(t: &StagedTree) -> Result<Report, Failure> {
    let text = format!(
        "{}: valid staged tree, {} vertices, {} leaves, {} labels, {} stages\n",
        t.name(),
        t.num_vertices(),
        t.leaves().len(),
        t.labels().len(),
        t.stages().len()
    );
    let results = json!({
        "valid": true,
        "name": t.name(),
        "vertices": t.num_vertices(),
        "leaves": t.leaves().len(),
        "labels": t.labels().len(),
        "stages": t.stages().len(),
    });
    Ok(Report::new(true, text, results))
}

fn analyze(t: &StagedTree) -> Result<Report, Failure> {
    let strat = t.stratification();
    let balance = is_balanced(t);
    let e1 = t.e1_edges().len();
    let mut text = String::new();
    writeln!(text, "tree: {}", t.name()).unwrap();
    writeln!(text, "stratified: {} ({strat})", strat.is_stratified()).unwrap();
    writeln!(
        text,
        "balanced: {}{}",
        balance.balanced,
        if balance.fast_path { " (all stages in one position)" } else { "" }
    )
    .unwrap();
    writeln!(text, "only-child edges: {e1}").unwrap();
    let mut stages = Vec::new();
    for s in t.stages().iter().filter(|s| !s.labels.is_empty()) {
        let members: Vec<&str> = s.members.iter().map(|&v| t.vertex_name(v)).collect();
        let labels: Vec<String> = s.labels.iter().map(|l| l.to_string()).collect();
        writeln!(text, "stage {{{}}}: {}", labels.join(", "), members.join(" ")).unwrap();
        stages.push(json!({ "labels": labels, "members": members }));
    }
    for w in &balance.failures {
        writeln!(text, "witness: {w}").unwrap();
    }
    let mut r = Report::new(
        true,
        text,
        json!({
            "name": t.name(),
            "stratified": strat.is_stratified(),
            "stratification": strat.to_string(),
            "depth": t.depth(),
            "balanced": balance.balanced,
            "fast_path": balance.fast_path,
            "only_child_edges": e1,
            "stages": stages,
        }),
    );
    r.witnesses = json!(balance.failures);
    Ok(r)
}

/// Domain failure for trees that have no `F`.
fn no_basis(e: TfpError) -> Failure {
    let (message, witnesses) = match &e {
        TfpError::NotBalanced(ws) => ("tree is not balanced".to_string(), json!(ws)),
        TfpError::NotStratified(why) => (format!("tree is not stratified: {why}"), json!([])),
        other => (other.to_string(), json!([])),
    };
    let mut text = format!("{message}\n");
    if let TfpError::NotBalanced(ws) = &e {
        for w in ws {
            writeln!(text, "witness: {w}").unwrap();
        }
    }
    Failure::Domain(Report { ok: false, text, results: json!({ "error": message }), witnesses })
}

fn groebner(t: &StagedTree) -> Result<Report, Failure> {
    let f = assemble_f(t).map_err(no_basis)?;
    let text: String = f.iter().map(|e| format!("{}\n", e.binomial)).collect();
    Ok(Report::new(true, text, json!({ "size": f.len(), "order": "path_lex", "basis": f })))
}

fn verify_cmd(t: &StagedTree, deep: Option<u32>) -> Result<Report, Failure> {
    let report = verify(t, deep).map_err(|e| match e {
        VerifyError::Tfp(e) => no_basis(e),
        VerifyError::Oracle(e) => e.into(),
    })?;
    let mut text = String::new();
    for c in &report.checks {
        writeln!(text, "{:<18} {:<4}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail).unwrap();
    }
    let ok = report.passed();
    writeln!(text, "verify: {} ({} elements)", if ok { "PASS" } else { "FAIL" }, report.basis_size).unwrap();
    Ok(Report::new(ok, text, json!({ "passed": ok, "basis_size": report.basis_size, "checks": report.checks })))
}

fn oracle(t: &StagedTree, d: u32, against: bool) -> Result<Report, Failure> {
    let map = monomial_map(t);
    let fp = fiber_partition(&map, d)?;
    let kernel = kernel_binomials(&fp);
    let mut text = format!(
        "degree {d}: {} monomials, {} fibers, {} non-singleton, {} kernel binomials\n",
        fp.monomial_count(),
        fp.fiber_count(),
        fp.non_singleton().count(),
        kernel.len()
    );
    let mut results = json!({
        "degree": d,
        "monomials": fp.monomial_count(),
        "fibers": fp.fiber_count(),
        "non_singleton": fp.non_singleton().count(),
        "kernel_binomials": kernel.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    });
    let mut ok = true;
    let mut witnesses = json!([]);
    if against {
        let f = assemble_f(t).map_err(no_basis)?;
        let basis = MarkedBasis::new(binomials(&f), TermOrder::PathLex).expect("F is marked by path_lex");
        let cover = kernel_covered_by(&fp, &basis);
        let standard = standard_monomial_count(&basis, &map.variables(), d)?;
        ok = cover.covered && standard == fp.fiber_count();
        writeln!(text, "covered by F: {}", cover.covered).unwrap();
        writeln!(text, "standard monomials: {standard}").unwrap();
        if let Some(c) = &cover.counterexample {
            writeln!(text, "counterexample: {} has normal form {}", c.binomial, c.normal_form).unwrap();
            witnesses = json!([c]);
        }
        results["covered"] = json!(cover.covered);
        results["standard_monomials"] = json!(standard);
    }
    Ok(Report { ok, text, results, witnesses })
}

fn model(t: &StagedTree, trials: usize, seed: u64) -> Result<Report, Failure> {
    let f = binomials(&assemble_f(t).map_err(no_basis)?);
    let r = vanishing_check(&f, t, trials, seed);
    let mut text = format!(
        "{} elements, {} samples (seed {seed}): {}\n",
        r.binomials,
        r.trials,
        if r.passed { "all vanish" } else { "FAIL" }
    );
    if let Some(fl) = &r.failure {
        writeln!(text, "trial {} (seed {}): {} evaluates to {}", fl.trial, fl.seed, fl.binomial, fl.value).unwrap();
    }
    let witnesses = json!(r.failure.iter().collect::<Vec<_>>());
    Ok(Report {
        ok: r.passed,
        text,
        results: json!({ "passed": r.passed, "trials": r.trials, "binomials": r.binomials, "seed": seed }),
        witnesses,
    })
}

fn ci(sizes: &[u32], a: &[usize], b: &[usize], c: &[usize]) -> Result<Report, Failure> {
    let s = CiStatement::new(sizes.to_vec(), a.to_vec(), b.to_vec(), c.to_vec())
        .map_err(|e| Failure::Input(e.to_string()))?;
    let qs: Vec<String> = ci_quadrics(&s).iter().map(|q| q.to_string()).collect();
    let text: String = qs.iter().map(|q| format!("{q}\n")).collect();
    Ok(Report::new(true, text, json!({ "statement": s, "quadrics": qs })))
}

fn contract(t: &StagedTree) -> Result<Report, Failure> {
    let r = contraction_equivalence(t)?;
    let ok = r.passed();
    let mut text = String::new();
    writeln!(text, "only-child edges: {} -> {}", r.e1_before, r.e1_after).unwrap();
    writeln!(text, "leaves: {} -> {} (bijective: {})", r.leaves_before, r.leaves_after, r.bijective).unwrap();
    writeln!(text, "images correspond: {}", r.images_correspond).unwrap();
    writeln!(text, "balanced: {} -> {}", r.balanced_before, r.balanced_after).unwrap();
    writeln!(text, "degree-2 kernels correspond: {}", r.kernels_correspond_degree_2).unwrap();
    if let Some(bs) = &r.transported {
        writeln!(text, "transported F ({} elements, vanish: {}):", bs.len(), r.transported_vanish.unwrap_or(false))
            .unwrap();
        for b in bs {
            writeln!(text, "  {b}").unwrap();
        }
    }
    for (a, b) in &r.leaf_map {
        writeln!(text, "leaf {a} -> {b}").unwrap();
    }
    writeln!(text, "contract: {}", if ok { "PASS" } else { "FAIL" }).unwrap();
    let leaf_map: Vec<Value> = r.leaf_map.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect();
    let tree: Value = serde_json::from_str(&r.contracted.to_json()).expect("tree documents are JSON");
    Ok(Report::new(ok, text, json!({ "passed": ok, "report": r, "leaf_map": leaf_map, "contracted": tree })))
}
