use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hermsig::algebra::{goldman_element, Algebra, Ordering, TensorElement};
use hermsig::forms::ProductForm;
use hermsig::json;
use hermsig::pairing::{involution_trace_form, nil_kill, star, sylvester_decompose};
use hermsig::signature::{max_sig_element, product_signature_table, signature, Search, SignatureTable};
use hermsig::suites::{run_suite, SuiteConfig, SUITES};
use hermsig::witt::{is_hyperbolic_product, plg_minimal_n, witt_equal_product, PlgOutcome, Verdict, DEFAULT_N_MAX};
use hermsig::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "hermsig", version, about = "Signatures, trace pairings and Witt classes of hermitian forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Algebra descriptor (JSON file).
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Form (JSON file).
    #[arg(long)]
    form: Option<PathBuf>,
    /// Second form, for pair and decide.
    #[arg(long)]
    form2: Option<PathBuf>,
    /// Ordering id "component/sign", e.g. 0/+.
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    /// Candidate budget of randomized searches.
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    nmax: u32,
    /// Emit JSON (the only output format).
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Signatures of a form at every ordering, or at --ordering.
    Sig(Common),
    /// The pairing h₁ * h₂, or the involution trace form without forms.
    Pair(Common),
    /// Sylvester decomposition at a non-nil ordering, or the kill form at a nil one.
    Sylvester(Common),
    /// Smallest n with 2ⁿ × h hyperbolic.
    Plg(Common),
    /// The Goldman element and its identities.
    Goldman(Common),
    /// Hyperbolicity of --form, or Witt equality with --form2.
    Decide(Common),
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    body: Value,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if matches!(e, Error::Internal(_)) { EXIT_FAILURE } else { EXIT_USAGE };
        Fail { code, body: json!({"error": error_kind(&e), "message": e.to_string()}) }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ']).next().unwrap_or_default().to_string()
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail { code: EXIT_USAGE, body: json!({"error": "Usage", "message": msg.into()}) }
}

type Run = Result<(Value, u8), Fail>;

fn read_json(path: &Path) -> Result<Value, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_algebra(c: &Common) -> Result<Algebra, Fail> {
    let path = c.algebra.as_ref().ok_or_else(|| usage("--algebra is required"))?;
    Ok(json::parse_algebra(&read_json(path)?)?)
}

fn load_form(alg: &Algebra, path: &Option<PathBuf>, flag: &str) -> Result<ProductForm, Fail> {
    let path = path.as_ref().ok_or_else(|| usage(format!("{flag} is required")))?;
    Ok(json::parse_form(&read_json(path)?, alg)?)
}

fn ordering(c: &Common) -> Result<Option<Ordering>, Fail> {
    c.ordering.as_deref().map(|s| s.parse::<Ordering>().map_err(Fail::from)).transpose()
}

fn search(c: &Common) -> Search {
    Search { seed: c.seed, budget: c.budget }
}

fn sig(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let h = load_form(&alg, &c.form, "--form")?;
    let table = match ordering(c)? {
        Some(p) => {
            let part = h.parts.get(p.component).ok_or_else(|| usage(format!("no component {}", p.component)))?;
            SignatureTable([(p, signature(part, &p)?)].into_iter().collect())
        }
        None => product_signature_table(&h)?,
    };
    Ok((json!({"signatures": table}), 0))
}

fn pair(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let a = alg.connected()?;
    let out = match (&c.form, &c.form2) {
        (None, None) => involution_trace_form(a)?,
        (Some(_), Some(_)) => {
            let h1 = load_form(&alg, &c.form, "--form")?;
            let h2 = load_form(&alg, &c.form2, "--form2")?;
            star(&h1.parts[0], &h2.parts[0])?
        }
        _ => return Err(usage("pair takes both --form and --form2, or neither")),
    };
    Ok((json!({"rank": out.rank(), "form": json::form_json(&out)}), 0))
}

fn sylvester(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let a = alg.connected()?;
    let h = load_form(&alg, &c.form, "--form")?.parts.remove(0);
    let p = match ordering(c)? {
        Some(p) => p,
        None => *a.orderings().first().ok_or_else(|| usage("the base has no orderings"))?,
    };
    if a.is_nil(&p)? {
        let nk = nil_kill(&h, &p, &search(c))?;
        let undecided = nk.verification.as_ref().map_or(true, |d| !d.is_decided());
        let code = if undecided { EXIT_UNDECIDED } else if nk.is_psd && nk.verification.as_ref().is_some_and(|d| d.is_hyperbolic()) { 0 } else { EXIT_FAILURE };
        return Ok((json!({"ordering": p, "nil": true, "kill_form": json::nil_kill_json(a, &nk)}), code));
    }
    let cert = max_sig_element(a, &p, &search(c))?;
    let elem = cert.element.ok_or_else(|| Fail::from(Error::NilOrdering))?;
    let sd = sylvester_decompose(&h, &elem, &p)?;
    let code = match sd.witt_check.as_ref().map(|d| d.verdict) {
        _ if !sd.signatures_agree => EXIT_FAILURE,
        Some(Verdict::NotHyperbolic) => EXIT_FAILURE,
        Some(Verdict::Undecided) | None => EXIT_UNDECIDED,
        Some(Verdict::Hyperbolic) => 0,
    };
    Ok((json!({"ordering": p, "nil": false, "decomposition": json::sylvester_json(a, &sd)}), code))
}

fn plg(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let h = load_form(&alg, &c.form, "--form")?;
    let out = plg_minimal_n(&h, c.nmax)?;
    let code = if out == PlgOutcome::Undecided { EXIT_UNDECIDED } else { 0 };
    Ok((json::plg_json(out), code))
}

fn goldman(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let a = alg.connected()?;
    let g = goldman_element(a)?;
    let squared = g.mul(a, &g) == TensorElement::one(a);
    let fixed = g.sigma_sigma(a) == g;
    let sandwich = (0..a.t()).all(|p| {
        let e = a.basis(p);
        g.sandwich(a, &e) == a.from_scalar(&a.trd(&e))
    });
    let code = if squared && fixed && sandwich { 0 } else { EXIT_FAILURE };
    Ok((
        json!({
            "terms": json::tensor_json(a, &g),
            "g_squared_is_one": squared,
            "sigma_fixed": fixed,
            "sandwich_is_trd": sandwich,
        }),
        code,
    ))
}

fn decide(c: &Common) -> Run {
    let alg = load_algebra(c)?;
    let h = load_form(&alg, &c.form, "--form")?;
    let d = match &c.form2 {
        Some(_) => witt_equal_product(&h, &load_form(&alg, &c.form2, "--form2")?)?,
        None => is_hyperbolic_product(&h)?,
    };
    let code = if d.is_decided() { 0 } else { EXIT_UNDECIDED };
    Ok((json::decision_json(&d), code))
}

fn verify(suite: &str, c: &Common) -> Run {
    let cfg = SuiteConfig { search: search(c), n_max: c.nmax };
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    if !names.iter().all(|n| SUITES.contains(n)) {
        return Err(usage(format!("unknown suite {suite:?}; expected one of {} or all", SUITES.join(", "))));
    }
    let reports = names
        .iter()
        .map(|n| run_suite(n, c.seed, c.iters, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let failed = reports.iter().any(|r| !r.ok());
    let only_undecided = reports.iter().all(|r| r.passed == 0 && r.undecided > 0);
    let code = if failed { EXIT_FAILURE } else if only_undecided { EXIT_UNDECIDED } else { 0 };
    let body = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .map_err(|e| usage(e.to_string()))?;
    Ok((body, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sig(c) => sig(c),
        Command::Pair(c) => pair(c),
        Command::Sylvester(c) => sylvester(c),
        Command::Plg(c) => plg(c),
        Command::Goldman(c) => goldman(c),
        Command::Decide(c) => decide(c),
        Command::Verify { suite, common } => verify(suite, common),
    };
    match result {
        Ok((body, code)) => {
            // a closed pipe (e.g. `| head`) is not an error of the computation
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&body).expect("JSON values serialize"));
            ExitCode::from(code)
        }
        Err(Fail { code, body }) => {
            let _ = writeln!(std::io::stderr(), "{}", serde_json::to_string_pretty(&body).expect("JSON values serialize"));
            ExitCode::from(code)
        }
    }
}
