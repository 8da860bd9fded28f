//! Command-line front end: code documents, output formatting and the
//! `genweights` subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::GuardConfig;
use crate::delsarte::{self, DelsarteCode};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec, Tower};
use crate::hamming::{self, LinearCode};
use crate::linalg::{dual_subspace, BilinearForm, Matrix};
use crate::oracle::{self, Report, SearchReport};
use crate::profile::{Metric, WeightProfile};
use crate::rankmetric::{self, GabidulinCode};

/// On-disk description of a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDocument {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub metric: Metric,
    #[serde(default)]
    pub generators: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Code {
    Hamming(LinearCode),
    Gabidulin(GabidulinCode),
    Delsarte(DelsarteCode),
}

/// A parsed document: the code, the field tower it lives over, and its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCode {
    pub code: Code,
    pub tower: Arc<Tower>,
    pub label: Option<String>,
}

impl ParsedCode {
    pub fn metric(&self) -> Metric {
        match self.code {
            Code::Hamming(_) => Metric::Hamming,
            Code::Gabidulin(_) => Metric::Gabidulin,
            Code::Delsarte(_) => Metric::Delsarte,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.code {
            Code::Hamming(c) => c.dim(),
            Code::Gabidulin(c) => c.dim(),
            Code::Delsarte(c) => c.dim(),
        }
    }
}

fn required(v: Option<usize>, name: &str, metric: Metric) -> Result<usize> {
    v.ok_or_else(|| Error::Invalid(format!("{metric} code document needs \"{name}\"")))
}

fn array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected an array")))
}

fn base_elem(v: &Value, ctx: &str, f: &Field) -> Result<Elem> {
    let x = v
        .as_u64()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected a non-negative integer")))?;
    match u32::try_from(x) {
        Ok(x) if f.contains(x) => Ok(x),
        _ => Err(Error::Invalid(format!(
            "{ctx}: {x} is not an element of F_{}",
            f.order()
        ))),
    }
}

fn top_elem(v: &Value, ctx: &str, tower: &Tower) -> Result<Elem> {
    if v.is_array() {
        let coords = array(v, ctx)?
            .iter()
            .enumerate()
            .map(|(i, c)| base_elem(c, &format!("{ctx}[{i}]"), tower.base()))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() > tower.m() {
            return Err(Error::Invalid(format!(
                "{ctx}: {} coordinates for an extension of degree {}",
                coords.len(),
                tower.m()
            )));
        }
        let mut padded = coords;
        padded.resize(tower.m(), 0);
        tower
            .from_coords(&padded)
            .map_err(|e| Error::Invalid(format!("{ctx}: {e}")))
    } else {
        base_elem(v, ctx, tower.top())
    }
}

fn vector(
    v: &Value,
    ctx: &str,
    len: usize,
    mut elem: impl FnMut(&Value, &str) -> Result<Elem>,
) -> Result<Vec<Elem>> {
    let items = array(v, ctx)?;
    if items.len() != len {
        return Err(Error::Invalid(format!(
            "{ctx}: expected {len} entries, got {}",
            items.len()
        )));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| elem(x, &format!("{ctx}[{i}]")))
        .collect()
}

/// Builds a code from a document, checking every shape and field constraint.
pub fn parse_document(doc: &CodeDocument) -> Result<ParsedCode> {
    let metric = doc.metric;
    let m_ext = if metric == Metric::Gabidulin {
        required(doc.m, "m", metric)?
    } else {
        1
    };
    let spec = FieldSpec {
        p: doc.p,
        e: doc.e,
        m: u32::try_from(m_ext).map_err(|_| Error::Invalid("m is too large".into()))?,
        f: doc.f.clone(),
        g: doc.g.clone(),
    };
    let tower = Arc::new(Tower::from_spec(&spec)?);
    let base = tower.base().clone();
    let code = match metric {
        Metric::Hamming => {
            let n = required(doc.n, "n", metric)?;
            let rows = doc
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    vector(g, &format!("generators[{i}]"), n, |x, c| {
                        base_elem(x, c, &base)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Code::Hamming(LinearCode::from_generators(base, n, &rows)?)
        }
        Metric::Gabidulin => {
            let k = required(doc.k, "k", metric)?;
            if k > m_ext {
                return Err(Error::KExceedsM { k, m: m_ext });
            }
            let rows = doc
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    vector(g, &format!("generators[{i}]"), k, |x, c| {
                        top_elem(x, c, &tower)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Code::Gabidulin(GabidulinCode::from_generators(tower.clone(), k, &rows)?)
        }
        Metric::Delsarte => {
            let k = required(doc.k, "k", metric)?;
            let m = required(doc.m, "m", metric)?;
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let mut mats = Vec::with_capacity(doc.generators.len());
            for (i, g) in doc.generators.iter().enumerate() {
                let ctx = format!("generators[{i}]");
                let rows = array(g, &ctx)?;
                if rows.len() != k {
                    return Err(Error::Invalid(format!(
                        "{ctx}: expected {k} rows, got {}",
                        rows.len()
                    )));
                }
                let mut data = Vec::with_capacity(k * m);
                for (r, row) in rows.iter().enumerate() {
                    data.extend(vector(row, &format!("{ctx}[{r}]"), m, |x, c| {
                        base_elem(x, c, &base)
                    })?);
                }
                mats.push(Matrix::from_vec(k, m, data)?);
            }
            Code::Delsarte(DelsarteCode::from_matrices(base, k, m, &mats)?)
        }
    };
    Ok(ParsedCode {
        code,
        tower,
        label: doc.label.clone(),
    })
}

/// Parses a JSON code document; syntax errors carry line and column.
pub fn parse_code(text: &str) -> Result<ParsedCode> {
    let doc: CodeDocument = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("malformed code document: {e}")))?;
    parse_document(&doc)
}

pub fn read_code(path: &Path) -> Result<ParsedCode> {
    parse_code(&read(path)?).map_err(|e| match e {
        Error::Invalid(msg) => Error::Invalid(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn to_values(rows: &[Elem]) -> Value {
    Value::from(rows.to_vec())
}

/// Canonical document of a code: generators are the reduced echelon basis,
/// field elements are integer indices and the defining polynomials explicit.
pub fn emit_code(code: &ParsedCode) -> CodeDocument {
    let spec = code.tower.spec();
    let (n, k, m, generators) = match &code.code {
        Code::Hamming(c) => (
            Some(c.length()),
            None,
            None,
            c.space()
                .basis()
                .row_vecs()
                .iter()
                .map(|r| to_values(r))
                .collect(),
        ),
        Code::Gabidulin(c) => (
            None,
            Some(c.k()),
            Some(c.m()),
            c.space()
                .basis()
                .row_vecs()
                .iter()
                .map(|r| to_values(r))
                .collect(),
        ),
        Code::Delsarte(c) => (
            None,
            Some(c.k()),
            Some(c.m()),
            c.matrices()
                .iter()
                .map(|a| {
                    Value::from(
                        a.row_vecs()
                            .into_iter()
                            .map(Value::from)
                            .collect::<Vec<_>>(),
                    )
                })
                .collect(),
        ),
    };
    CodeDocument {
        p: spec.p,
        e: spec.e,
        n,
        k,
        m,
        metric: code.metric(),
        generators,
        f: spec.f.clone(),
        g: if code.metric() == Metric::Gabidulin {
            spec.g.clone()
        } else {
            Vec::new()
        },
        label: code.label.clone(),
    }
}

fn delsarte_document(c: DelsarteCode, tower: &Tower, label: Option<String>) -> Result<ParsedCode> {
    let spec = tower.spec();
    let base = Arc::new(Tower::from_spec(&FieldSpec {
        p: spec.p,
        e: spec.e,
        m: 1,
        f: spec.f.clone(),
        g: Vec::new(),
    })?);
    Ok(ParsedCode {
        code: Code::Delsarte(c),
        tower: base,
        label,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

pub fn emit_profile(profile: &WeightProfile, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string(profile).expect("profiles serialize"),
        OutputFormat::Csv => {
            let mut out = String::from("r,weight\n");
            for (i, w) in profile.weights.iter().enumerate() {
                let _ = writeln!(out, "{},{w}", i + 1);
            }
            out.trim_end().to_string()
        }
        OutputFormat::Table => {
            let mut out = format!("{} weights\n  r  weight\n", profile.metric);
            for (i, w) in profile.weights.iter().enumerate() {
                let _ = writeln!(out, "{:>3}  {w:>6}", i + 1);
            }
            out.trim_end().to_string()
        }
    }
}

pub fn emit_reports(reports: &[Report], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(reports).expect("reports serialize"),
        OutputFormat::Csv => {
            let mut out = String::from("suite,checked,violations,passed\n");
            for r in reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.suite,
                    r.checked,
                    r.violations.len(),
                    r.passed()
                );
            }
            out.trim_end().to_string()
        }
        OutputFormat::Table => {
            let mut out = String::new();
            for r in reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{verdict} {}: {} checked, {} violations",
                    r.suite,
                    r.checked,
                    r.violations.len()
                );
                for v in &r.violations {
                    let _ = writeln!(out, "  {}: {}", v.clause, v.detail);
                }
            }
            out.trim_end().to_string()
        }
    }
}

/// Parses `q` given as `p^e` or as a prime power such as `4`.
pub fn parse_q(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Invalid(format!("cannot read field size {s:?}"));
    if let Some((p, e)) = s.split_once('^') {
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        if !crate::field::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        return Ok((p, e));
    }
    let q: u32 = s.trim().parse().map_err(|_| bad())?;
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(bad)?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}

#[derive(Debug, Parser)]
#[command(
    name = "genweights",
    version,
    about = "Generalized weights of linear, Gabidulin and Delsarte codes"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "json",
        env = "GENWEIGHTS_FORMAT"
    )]
    pub format: OutputFormat,
    /// Worker threads for verification and search.
    #[arg(long, global = true, env = "GENWEIGHTS_THREADS")]
    pub threads: Option<usize>,
    /// Maximum number of subspaces one enumeration may produce.
    #[arg(long, global = true, env = "GENWEIGHTS_GUARD_SUBSPACES")]
    pub guard_subspaces: Option<u64>,
    /// Maximum number of vectors scanned in one sweep.
    #[arg(long, global = true, env = "GENWEIGHTS_GUARD_CODEWORDS")]
    pub guard_codewords: Option<u64>,
    /// Seed for random codes and sampled searches.
    #[arg(long, global = true, default_value_t = 0, env = "GENWEIGHTS_SEED")]
    pub seed: u64,
    /// Wall-clock budget for searches, in seconds.
    #[arg(long, global = true, env = "GENWEIGHTS_BUDGET_SECS")]
    pub budget_secs: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsKind {
    Hamming,
    Rank,
    Delsarte,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Casino,
    Dan,
    Paz,
    Propr,
    Finer,
    Duality,
    Wei,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Field size, as `p^e` or a prime power.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Maximum rank for the anticode suite; all ranks when omitted.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized weights of a code.
    Weights {
        #[arg(value_enum)]
        metric: WeightsKind,
        #[arg(long)]
        code: PathBuf,
        /// Compute through the optimal anticodes instead of the fast path.
        #[arg(long)]
        via_anticodes: bool,
        /// Oggier–Sboui weights instead (Gabidulin or Delsarte codes).
        #[arg(long)]
        oggier_sboui: bool,
        /// Cross-check against the brute-force oracle.
        #[arg(long)]
        check: bool,
    },
    /// Delsarte weights of the dual code from those of the code.
    DualWeights {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Defaults to the profile length.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Worst-case security profile of a Gabidulin code.
    SecurityProfile {
        #[arg(long)]
        code: PathBuf,
    },
    /// Whether a Gabidulin code is closed under the Frobenius map.
    CheckFrobenius {
        #[arg(long)]
        code: PathBuf,
    },
    /// The Delsarte code associated with a Gabidulin code.
    Associate {
        #[arg(long)]
        code: PathBuf,
        /// JSON array of `m` field elements; defaults to the polynomial basis.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// The dual code.
    Dual {
        #[arg(long)]
        code: PathBuf,
    },
    /// Runs a verification suite.
    Verify(VerifyArgs),
    /// Searches for codes with prescribed Delsarte weights.
    SearchProfiles {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        t: usize,
        /// JSON array of target profiles.
        #[arg(long)]
        targets: PathBuf,
        /// Writes the report with its witnesses here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        _ => EXIT_INPUT,
    }
}

/// Text printed on success and the exit status.
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn pass(output: String) -> Self {
        Self {
            output,
            status: EXIT_PASS,
        }
    }
}

impl Cli {
    pub fn guard(&self) -> GuardConfig {
        let mut g = GuardConfig::default();
        if let Some(s) = self.guard_subspaces {
            g.max_subspaces = s as u128;
        }
        if let Some(c) = self.guard_codewords {
            g.max_codewords = c as u128;
        }
        g.time_budget = self.budget_secs.map(Duration::from_secs);
        g
    }
}

fn doc_json(code: &ParsedCode) -> String {
    serde_json::to_string_pretty(&emit_code(code)).expect("documents serialize")
}

fn read_profile(path: &Path) -> Result<Vec<usize>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let arr = match &v {
        Value::Object(o) => o.get("weights").unwrap_or(&Value::Null),
        other => other,
    };
    serde_json::from_value(arr.clone())
        .map_err(|_| Error::Invalid(format!("{}: expected an array of weights", path.display())))
}

fn read_targets(path: &Path) -> Result<Vec<Vec<usize>>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let arr = match &v {
        Value::Object(o) => o.get("targets").unwrap_or(&Value::Null),
        other => other,
    };
    serde_json::from_value(arr.clone())
        .map_err(|_| Error::Invalid(format!("{}: expected an array of profiles", path.display())))
}

fn wrong_metric(expected: &str, got: Metric) -> Error {
    Error::Invalid(format!("expected a {expected} code document, got {got}"))
}

fn prime_field(q: &str) -> Result<Arc<Field>> {
    let (p, e) = parse_q(q)?;
    Ok(Tower::from_spec(&FieldSpec::new(p, e, 1))?.base().clone())
}

fn weights(
    cli: &Cli,
    kind: WeightsKind,
    path: &Path,
    via: bool,
    os: bool,
    check: bool,
) -> Result<Outcome> {
    let guard = cli.guard();
    let parsed = read_code(path)?;
    let (profile, oracle) = match (kind, &parsed.code) {
        (WeightsKind::Hamming, Code::Hamming(c)) => {
            if os {
                return Err(Error::Invalid(
                    "--oggier-sboui applies to rank-metric codes".into(),
                ));
            }
            let p = if via {
                hamming::ghw_via_anticodes(c, &guard)?
            } else {
                hamming::generalized_hamming_weights(c, &guard)?
            };
            let o = if check {
                Some(oracle::ghw_bruteforce(c, &guard)?)
            } else {
                None
            };
            (p, o)
        }
        (WeightsKind::Rank, Code::Gabidulin(c)) => {
            let p = if os {
                rankmetric::oggier_sboui_rank_weights(c, &guard)?
            } else if via {
                rankmetric::rank_weights_via_anticodes(c, &guard)?
            } else {
                rankmetric::generalized_rank_weights(c, &guard)?
            };
            let o = if check && !os {
                Some(oracle::grw_bruteforce(c, &guard)?)
            } else {
                None
            };
            (p, o)
        }
        (WeightsKind::Delsarte, Code::Delsarte(c)) => {
            let p = if os {
                delsarte::oggier_sboui_delsarte_weights(c, &guard)?
            } else {
                delsarte::delsarte_generalized_weights(c, &guard)?
            };
            let o = if check && !os {
                Some(oracle::dgw_bruteforce(c, &guard)?)
            } else {
                None
            };
            (p, o)
        }
        (WeightsKind::Hamming, _) => return Err(wrong_metric("hamming", parsed.metric())),
        (WeightsKind::Rank, _) => return Err(wrong_metric("gabidulin", parsed.metric())),
        (WeightsKind::Delsarte, _) => return Err(wrong_metric("delsarte", parsed.metric())),
    };
    let mut out = Outcome::pass(emit_profile(&profile, cli.format));
    if let Some(o) = oracle {
        if o != profile {
            out.status = EXIT_CHECK_FAILED;
            out.output.push_str(&format!("\noracle disagrees: {o}"));
        }
    }
    Ok(out)
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome> {
    let VerifyArgs {
        suite,
        k,
        m,
        n,
        rank,
        samples,
        ..
    } = *args;
    let q = args.q.as_deref();
    let guard = cli.guard();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut reports = Vec::new();
    match suite {
        Suite::Casino => {
            let (p, e) = parse_q(q.unwrap_or("2"))?;
            let (k, m) = (k.unwrap_or(2), m.unwrap_or(2));
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let tower = Tower::from_spec(&FieldSpec::new(p, e, m as u32))?;
            reports.push(oracle::verify_casino(&tower, k, &guard)?);
        }
        Suite::Dan => {
            let field = prime_field(q.unwrap_or("2"))?;
            reports.push(oracle::verify_dan(
                &field,
                k.unwrap_or(2),
                m.unwrap_or(3),
                &guard,
            )?);
        }
        Suite::Paz => {
            let field = prime_field(q.unwrap_or("2"))?;
            let (k, m) = (k.unwrap_or(2), m.unwrap_or(2));
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let ranks: Vec<usize> = match rank {
                Some(r) => vec![r],
                None => (0..=k).collect(),
            };
            for r in ranks {
                let p = oracle::verify_paz(&field, k, m, r, &guard)?;
                let mut rep = Report::new(&format!("paz k={k} m={m} R={r}"));
                rep.checked = p.exhaustive_count;
                rep.expect(p.equal, "exhaustive set equals described set", || {
                    format!(
                        "{} exhaustive vs {} described",
                        p.exhaustive_count, p.descriptor_count
                    )
                });
                reports.push(rep);
            }
        }
        Suite::Propr => {
            let field = prime_field(q.unwrap_or("2"))?;
            let (k, m) = (k.unwrap_or(3), m.unwrap_or(3));
            let n = n.unwrap_or(6);
            let lin: Vec<LinearCode> = (0..samples)
                .map(|_| {
                    let n = rng.gen_range(1..=n);
                    let t = rng.gen_range(1..=n);
                    oracle::random_linear_code(&field, n, t, &mut rng)
                })
                .collect();
            reports.push(oracle::verify_hamming_suite(&lin, &guard)?);
            let (p, e) = parse_q(q.unwrap_or("2"))?;
            let tower = Arc::new(Tower::from_spec(&FieldSpec::new(p, e, m as u32))?);
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let gab = (0..samples)
                .map(|_| {
                    let t = rng.gen_range(1..=k);
                    oracle::random_gabidulin_code(&tower, k, t, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            reports.push(oracle::verify_gabidulin_suite(&gab, &guard)?);
            let del = (0..samples)
                .map(|_| {
                    let t = rng.gen_range(1..k * m);
                    oracle::random_delsarte_code(&field, k, m, t, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            reports.push(oracle::verify_delsarte_suite(&del, &guard, cli.seed)?);
        }
        Suite::Finer => {
            let (p, e) = parse_q(q.unwrap_or("2"))?;
            let (k, m) = (k.unwrap_or(2), m.unwrap_or(3));
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let tower = Arc::new(Tower::from_spec(&FieldSpec::new(p, e, m as u32))?);
            let gab = (0..samples)
                .map(|_| {
                    let t = rng.gen_range(1..=k);
                    oracle::random_gabidulin_code(&tower, k, t, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            reports.push(oracle::verify_finer(&gab, &guard, cli.seed)?);
        }
        Suite::Duality => {
            let field = prime_field(q.unwrap_or("2"))?;
            let (k, m) = (k.unwrap_or(3), m.unwrap_or(3));
            if k > m {
                return Err(Error::KExceedsM { k, m });
            }
            let del = (0..samples)
                .map(|_| {
                    let t = rng.gen_range(1..k * m);
                    oracle::random_delsarte_code(&field, k, m, t, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            reports.push(oracle::verify_duality(&del, &guard)?);
        }
        Suite::Wei => {
            let field = prime_field(q.unwrap_or("3"))?;
            let n = n.unwrap_or(6);
            let lin: Vec<LinearCode> = (0..samples)
                .map(|_| {
                    let n = rng.gen_range(2..=n.max(2));
                    let t = rng.gen_range(1..n);
                    oracle::random_linear_code(&field, n, t, &mut rng)
                })
                .collect();
            reports.push(oracle::verify_wei(&lin, &guard)?);
        }
    }
    let status = if reports.iter().all(Report::passed) {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Outcome {
        output: emit_reports(&reports, cli.format),
        status,
    })
}

fn emit_search(report: &SearchReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        OutputFormat::Csv => {
            let mut out = String::from("profile,status\n");
            let quote = |p: &[usize]| format!("\"{p:?}\"");
            for w in &report.found {
                let _ = writeln!(out, "{},found", quote(&w.profile));
            }
            for p in &report.unfound {
                let _ = writeln!(out, "{},unfound", quote(p));
            }
            for u in &report.unfindable {
                let _ = writeln!(out, "{},unfindable", quote(&u.profile));
            }
            out.trim_end().to_string()
        }
        OutputFormat::Table => {
            let mut out = format!(
                "{:?} search over {} codes of dimension {} in Mat({}x{}, F_{})\n",
                report.mode, report.examined, report.t, report.k, report.m, report.q
            );
            for w in &report.found {
                let _ = writeln!(out, "found      {:?}", w.profile);
            }
            for p in &report.unfound {
                let _ = writeln!(out, "unfound    {p:?}");
            }
            for u in &report.unfindable {
                let _ = writeln!(out, "unfindable {:?}: {}", u.profile, u.reason);
            }
            out.trim_end().to_string()
        }
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let guard = cli.guard();
    match &cli.command {
        Command::Weights {
            metric,
            code,
            via_anticodes,
            oggier_sboui,
            check,
        } => weights(cli, *metric, code, *via_anticodes, *oggier_sboui, *check),
        Command::DualWeights { profile, k, m, t } => {
            let a = read_profile(profile)?;
            let t = t.unwrap_or(a.len());
            let dual = delsarte::dual_weights_from_weights(&a, *k, *m, t)?;
            Ok(Outcome::pass(emit_profile(
                &WeightProfile::new(Metric::Delsarte, dual),
                cli.format,
            )))
        }
        Command::SecurityProfile { code } => {
            let parsed = read_code(code)?;
            let Code::Gabidulin(c) = &parsed.code else {
                return Err(wrong_metric("gabidulin", parsed.metric()));
            };
            let deltas = rankmetric::security_profile(c, &guard)?;
            let drops = rankmetric::drops_of(&deltas);
            let v = serde_json::json!({ "deltas": deltas, "drops": drops });
            Ok(Outcome::pass(match cli.format {
                OutputFormat::Json => v.to_string(),
                OutputFormat::Csv => {
                    let mut out = String::from("mu,delta,drop\n");
                    for (mu, d) in deltas.iter().enumerate() {
                        let _ = writeln!(out, "{mu},{d},{}", drops.contains(&mu));
                    }
                    out.trim_end().to_string()
                }
                OutputFormat::Table => {
                    let mut out = String::from(" mu  delta  drop\n");
                    for (mu, d) in deltas.iter().enumerate() {
                        let mark = if drops.contains(&mu) { "*" } else { "" };
                        let _ = writeln!(out, "{mu:>3}  {d:>5}  {mark}");
                    }
                    out.trim_end().to_string()
                }
            }))
        }
        Command::CheckFrobenius { code } => {
            let parsed = read_code(code)?;
            let Code::Gabidulin(c) = &parsed.code else {
                return Err(wrong_metric("gabidulin", parsed.metric()));
            };
            let closed = rankmetric::is_frobenius_closed(c.tower(), c.space());
            let v = serde_json::json!({
                "frobenius_closed": closed,
                "basis": c.space().basis().row_vecs(),
            });
            Ok(Outcome {
                output: match cli.format {
                    OutputFormat::Json => v.to_string(),
                    _ => format!("frobenius-closed: {closed}"),
                },
                status: if closed { EXIT_PASS } else { EXIT_CHECK_FAILED },
            })
        }
        Command::Associate { code, basis } => {
            let parsed = read_code(code)?;
            let Code::Gabidulin(c) = &parsed.code else {
                return Err(wrong_metric("gabidulin", parsed.metric()));
            };
            let tower = &parsed.tower;
            let b = match basis {
                Some(path) => {
                    let v: Value = serde_json::from_str(&read(path)?)
                        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                    array(&v, "basis")?
                        .iter()
                        .enumerate()
                        .map(|(i, x)| top_elem(x, &format!("basis[{i}]"), tower))
                        .collect::<Result<Vec<_>>>()?
                }
                None => delsarte::polynomial_basis(tower),
            };
            let d = delsarte::associate(c, &b)?;
            Ok(Outcome::pass(doc_json(&delsarte_document(
                d,
                tower,
                parsed.label.clone(),
            )?)))
        }
        Command::Dual { code } => {
            let parsed = read_code(code)?;
            let code = match &parsed.code {
                Code::Hamming(c) => Code::Hamming(hamming::hamming_dual(c)),
                Code::Gabidulin(c) => {
                    let space =
                        dual_subspace(parsed.tower.top(), c.space(), BilinearForm::Standard)?;
                    Code::Gabidulin(GabidulinCode::new(c.tower().clone(), space)?)
                }
                Code::Delsarte(c) => Code::Delsarte(delsarte::delsarte_dual(c)),
            };
            Ok(Outcome::pass(doc_json(&ParsedCode {
                code,
                tower: parsed.tower.clone(),
                label: parsed.label.clone(),
            })))
        }
        Command::Verify(args) => verify(cli, args),
        Command::SearchProfiles {
            k,
            m,
            q,
            t,
            targets,
            out,
        } => {
            let field = prime_field(q)?;
            let targets = read_targets(targets)?;
            let mut guard = guard;
            guard.time_budget.get_or_insert(Duration::from_secs(600));
            let report = oracle::search_profiles(&field, *k, *m, *t, &targets, &guard, cli.seed)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&report).expect("reports serialize");
                fs::write(path, text)
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            }
            Ok(Outcome::pass(emit_search(&report, cli.format)))
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    }
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.output);
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q5: &str = r#"{"p":5,"k":3,"m":3,"metric":"delsarte","generators":[
        [[1,0,0],[0,0,0],[0,0,0]],
        [[0,0,0],[0,3,0],[0,0,0]]]}"#;

    #[test]
    fn parses_the_q5_document() {
        let c = parse_code(Q5).unwrap();
        assert_eq!(c.metric(), Metric::Delsarte);
        assert_eq!(c.dim(), 2);
        let Code::Delsarte(d) = &c.code else { panic!() };
        assert_eq!((d.k(), d.m(), d.field().order()), (3, 3, 5));
    }

    #[test]
    fn round_trips() {
        let docs = [
            Q5,
            r#"{"p":2,"n":3,"metric":"hamming","generators":[[1,0,1],[0,1,1]],"label":"x"}"#,
            r#"{"p":2,"m":4,"k":2,"metric":"gabidulin","generators":[[[0,1],[1,0,1]]]}"#,
            r#"{"p":2,"e":2,"m":2,"k":2,"metric":"gabidulin","generators":[[5,1]]}"#,
            r#"{"p":3,"k":2,"m":2,"metric":"delsarte","generators":[]}"#,
        ];
        for d in docs {
            let c = parse_code(d).unwrap();
            let text = serde_json::to_string(&emit_code(&c)).unwrap();
            assert_eq!(parse_code(&text).unwrap(), c, "{text}");
        }
    }

    #[test]
    fn coordinate_and_index_elements_agree() {
        let a =
            parse_code(r#"{"p":2,"m":2,"k":2,"metric":"gabidulin","generators":[[[0,1],[1,1]]]}"#)
                .unwrap();
        let b =
            parse_code(r#"{"p":2,"m":2,"k":2,"metric":"gabidulin","generators":[[2,3]]}"#).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejections() {
        let e =
            parse_code(r#"{"p":2,"k":4,"m":3,"metric":"gabidulin","generators":[]}"#).unwrap_err();
        assert!(e.to_string().contains("k ≤ m required"), "{e}");
        let e =
            parse_code(r#"{"p":2,"k":4,"m":3,"metric":"delsarte","generators":[]}"#).unwrap_err();
        assert!(e.to_string().contains("k ≤ m required"));
        let e = parse_code(r#"{"p":2,"n":3,"metric":"hamming","generators":[[1,0]]}"#).unwrap_err();
        assert!(e.to_string().contains("generators[0]"), "{e}");
        let e =
            parse_code(r#"{"p":2,"n":3,"metric":"hamming","generators":[[1,0,2]]}"#).unwrap_err();
        assert!(e.to_string().contains("generators[0][2]"), "{e}");
        let e = parse_code("{\"p\":2,\n\"n\":}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_code(r#"{"p":4,"n":1,"metric":"hamming"}"#).is_err());
        assert!(parse_code(r#"{"p":2,"metric":"hamming"}"#).is_err());
    }

    #[test]
    fn profile_formats() {
        let p = WeightProfile::new(Metric::Delsarte, vec![1, 2]);
        assert_eq!(
            emit_profile(&p, OutputFormat::Json),
            r#"{"metric":"delsarte","weights":[1,2]}"#
        );
        assert_eq!(emit_profile(&p, OutputFormat::Csv), "r,weight\n1,1\n2,2");
        assert!(emit_profile(&p, OutputFormat::Table).contains("delsarte weights"));
    }

    #[test]
    fn field_sizes() {
        assert_eq!(parse_q("2").unwrap(), (2, 1));
        assert_eq!(parse_q("9").unwrap(), (3, 2));
        assert_eq!(parse_q("2^3").unwrap(), (2, 3));
        assert!(parse_q("6").is_err());
        assert!(parse_q("4^1").is_err());
        assert!(parse_q("x").is_err());
    }
}
