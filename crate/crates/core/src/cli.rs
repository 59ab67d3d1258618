//! Command-line front end. `main_with_args` parses, runs and returns the exit code:
//! 0 success, 1 verification mismatch, 2 usage error, 3 prefix exhausted,
//! 4 precision cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cf::{self, parse_rational, rat_string, ten_pow_neg, AlphaSpec, Expansion};
use crate::error::{Error, Result};
use crate::legendre::{self, ParityConvention};
use crate::psi::{self, jump_json, PsiVariant};
use crate::rules;
use crate::spectra::{self, report_human, report_json, report_tsv, Options};
use crate::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Tsv,
    Human,
}

#[derive(Parser, Debug)]
#[command(name = "second-best", version, about = "Exact second-best approximation toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Decimal digits of precision for reported enclosures.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with defaults (horizon, precision, max_q, seed, format).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report scan throughput on stderr.
    #[arg(long, global = true)]
    pub profile: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partial quotients a_0..a_count.
    Digits {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Rows -1..=count of the convergent recurrence: n, p_n, q_n and the sign of q_n α - p_n.
    Convergents {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Minimizer (q, p) of the chosen function at t, with the enclosure of |qα - p|.
    Psi {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value = "pair")]
        variant: String,
    },
    /// Jump points q <= max-q: q, p, enclosures of |qα - p| and q|qα - p|, and the source
    /// (scan, or the generating rule case).
    Jumps {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "pair")]
        variant: String,
        #[arg(long)]
        max_q: Option<u64>,
        /// Emit the rule-generated list instead of the scan.
        #[arg(long)]
        rules: bool,
        /// Compare rules and scan on [𝔱, max-q]; exit 1 on any difference.
        #[arg(long)]
        diff: bool,
    },
    /// κ^j_n by lattice products and by tails, with the digit a_n.
    Kappa {
        #[arg(long)]
        alpha: String,
        /// Single index; omit to list 1..=max-n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Single j in 1..=4; omit for all four.
        #[arg(long)]
        j: Option<u8>,
    },
    /// Estimates of λ, 𝔧, 𝔨, 𝔧*, 𝔨* with the index or jump point attaining each.
    Spectrum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        horizon: Option<usize>,
        /// Window start as a fraction of the horizon.
        #[arg(long, default_value = "3/4")]
        window: String,
        /// Use the tail window even for periodic α.
        #[arg(long)]
        no_periodic_exact: bool,
    },
    /// Legendre inequality and Farey verdict for p/q, or for every fraction near qα with q <= max-q.
    Legendre {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        max_q: Option<u64>,
        #[arg(long, default_value = "swapped")]
        convention: String,
    },
    /// Lucas inequality |α - p/q| < 1/(q(q + q_prev)) for a unimodular pair.
    Lucas {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        p_prev: String,
        #[arg(long)]
        q_prev: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Verification sweeps; exit 1 on any mismatch.
    Verify(VerifyArgs),
    /// Points x, y of the digit-2-free Cantor set with H(x, y) near k, and the α built from them.
    Hall {
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 20)]
        cap: usize,
        #[arg(long, default_value = "1e-9")]
        tol: String,
    },
    /// Spectrum witnesses.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[arg(long)]
        lambda0: Option<String>,
        #[arg(long, default_value_t = 20)]
        cap: usize,
        #[arg(long, default_value = "1e-9")]
        tol: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    L2,
    L2star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Rules,
    Legendre,
    Invariants,
    Implications,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Single α; omit to use the named set plus random instances.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub max_q: Option<u64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Number of random instances.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

/// Defaults from flags, then the config file, then built-ins.
#[derive(Clone, Debug)]
struct Settings {
    format: Format,
    precision: u32,
    seed: u64,
    horizon: usize,
    max_q: u64,
}

fn load_settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings {
        format: Format::Jsonl,
        precision: 20,
        seed: 0,
        horizon: 200,
        max_q: 10_000,
    };
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
        let int = |k: &str, v: &toml::Value| {
            v.as_integer()
                .filter(|x| *x >= 0)
                .ok_or_else(|| Error::InvalidArgument(format!("config key {k} must be a nonnegative integer")))
        };
        for (k, v) in &table {
            match k.as_str() {
                "horizon" => s.horizon = int(k, v)? as usize,
                "precision" => s.precision = int(k, v)? as u32,
                "max_q" => s.max_q = int(k, v)? as u64,
                "seed" => s.seed = int(k, v)? as u64,
                "format" => {
                    let name = v.as_str().unwrap_or_default();
                    s.format = Format::from_str(name, true)
                        .map_err(|_| Error::InvalidArgument(format!("config format '{name}'")))?;
                }
                _ => return Err(Error::InvalidArgument(format!("unknown config key '{k}'"))),
            }
        }
    }
    if let Some(f) = cli.format {
        s.format = f;
    }
    if let Some(p) = cli.precision {
        s.precision = p;
    }
    if let Some(x) = cli.seed {
        s.seed = x;
    }
    if s.precision == 0 || s.precision > 10_000 {
        return Err(Error::InvalidArgument("precision must be in 1..=10000".into()));
    }
    Ok(s)
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrefixExhausted { .. } => 3,
        Error::PrecisionCap(_) => 4,
        _ => 2,
    }
}

/// Table of rows plus the exit status.
struct Output {
    rows: Vec<Value>,
    /// Preformatted text for formats that have a custom view.
    tsv: Option<String>,
    human: Option<String>,
    status: i32,
}

impl Output {
    fn rows(rows: Vec<Value>) -> Self {
        Output {
            rows,
            tsv: None,
            human: None,
            status: 0,
        }
    }

    fn failing_if(mut self, bad: bool) -> Self {
        if bad {
            self.status = 1;
        }
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(".."),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if k != "schema" && !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols
}

fn table(rows: &[Value]) -> Vec<Vec<String>> {
    let cols = columns(rows);
    let mut out = vec![cols.clone()];
    for r in rows {
        out.push(cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect());
    }
    out
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Jsonl => out.rows.iter().map(|r| format!("{r}\n")).collect(),
        Format::Tsv => out.tsv.clone().unwrap_or_else(|| {
            table(&out.rows)
                .into_iter()
                .map(|r| r.join("\t") + "\n")
                .collect()
        }),
        Format::Human => out.human.clone().unwrap_or_else(|| {
            let t = table(&out.rows);
            let widths: Vec<usize> = (0..t[0].len())
                .map(|i| t.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
                .collect();
            t.into_iter()
                .map(|r| {
                    let cells: Vec<String> = r
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect();
                    cells.join("  ").trim_end().to_string() + "\n"
                })
                .collect()
        }),
    }
}

fn alpha(s: &str) -> Result<AlphaSpec> {
    s.parse()
}

fn int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("'{s}' is not an integer")))
}

fn variant(s: &str) -> Result<PsiVariant> {
    s.parse()
}

fn named_set() -> Vec<AlphaSpec> {
    ["golden", "sqrt:2", "quad:1,1,17,2", "e", "cf:[0;(3)]"]
        .iter()
        .map(|s| s.parse().expect("valid named spec"))
        .collect()
}

fn num(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

fn run(cli: &Cli, st: &Settings) -> Result<Output> {
    let goal = ten_pow_neg(st.precision);
    match &cli.command {
        Command::Digits { alpha: a, count } => {
            let a = alpha(a)?;
            let mut rows = vec![json!({"schema": 1, "n": 0, "a": num(a.a0())})];
            for (i, d) in a.digits(*count)?.into_iter().enumerate() {
                rows.push(json!({"schema": 1, "n": i + 1, "a": d}));
            }
            Ok(Output::rows(rows))
        }
        Command::Convergents { alpha: a, count } => {
            let rows = cf::convergents(&alpha(a)?, *count)?
                .into_iter()
                .map(|c| json!({"schema": 1, "n": c.n, "p": num(&c.p), "q": num(&c.q), "sign": c.sign}))
                .collect();
            Ok(Output::rows(rows))
        }
        Command::Psi { alpha: a, t, variant: v } => {
            let a = alpha(a)?;
            let t = parse_rational(t)?;
            let v = variant(v)?;
            let f = match v {
                PsiVariant::Best => psi::psi(&a, &t, &goal)?,
                _ => psi::psi_second(&a, &t, v, &goal)?,
            };
            Ok(Output::rows(vec![json!({
                "schema": 1,
                "t": rat_string(&t),
                "variant": v.to_string(),
                "q": num(&f.q),
                "p": num(&f.p),
                "value_lo": rat_string(f.value.lo()),
                "value_hi": rat_string(f.value.hi()),
            })]))
        }
        Command::Jumps {
            alpha: a,
            variant: v,
            max_q,
            rules: use_rules,
            diff,
        } => {
            let a = alpha(a)?;
            let v = variant(v)?;
            if v == PsiVariant::Best {
                return Err(Error::InvalidArgument("jumps needs variant pair or fraction".into()));
            }
            let t = max_q.unwrap_or(st.max_q);
            let tb = BigInt::from(t);
            let rule_list = || match v {
                PsiVariant::SecondPair => rules::build_q(&a, &tb),
                _ => rules::build_x(&a, &tb),
            };
            let mut exp = Expansion::new(&a);
            if *diff {
                let r = rule_list()?.points;
                let s = psi::jump_scan(&a, t, v)?;
                let th = BigInt::from(psi::t_threshold(&a)?);
                let key = |p: &psi::JumpPoint| (p.q.clone(), p.p.clone());
                let rk: Vec<_> = r.iter().filter(|p| p.q >= th).map(key).collect();
                let sk: Vec<_> = s.iter().filter(|p| p.q >= th).map(key).collect();
                let mut rows = Vec::new();
                for (q, p) in rk.iter().filter(|x| !sk.contains(x)) {
                    rows.push(json!({"schema": 1, "q": num(q), "p": num(p), "only_in": "rules"}));
                }
                for (q, p) in sk.iter().filter(|x| !rk.contains(x)) {
                    rows.push(json!({"schema": 1, "q": num(q), "p": num(p), "only_in": "scan"}));
                }
                let bad = !rows.is_empty();
                rows.push(json!({"schema": 1, "alpha": a.to_string(), "variant": v.to_string(),
                    "max_q": t, "rules": rk.len(), "scan": sk.len(), "agree": !bad}));
                return Ok(Output::rows(rows).failing_if(bad));
            }
            let points = if *use_rules {
                rule_list()?.points
            } else {
                let (pts, prof) = psi::jump_scan_profiled(&a, t, v)?;
                if cli.profile {
                    eprintln!(
                        "forms={} elapsed_s={:.3} forms_per_second={:.0}",
                        prof.forms,
                        prof.elapsed.as_secs_f64(),
                        prof.forms_per_second()
                    );
                }
                pts
            };
            Ok(Output::rows(jump_json(&mut exp, &points, &goal)?))
        }
        Command::Kappa { alpha: a, n, max_n, j } => {
            let a = alpha(a)?;
            let mut exp = Expansion::new(&a);
            let ns: Vec<usize> = match n {
                Some(n) => vec![*n],
                None => (1..=*max_n).collect(),
            };
            let js: Vec<u8> = match j {
                Some(j) => vec![*j],
                None => vec![1, 2, 3, 4],
            };
            let mut samples = Vec::new();
            for &n in &ns {
                for &j in &js {
                    samples.push(spectra::kappa(&mut exp, n, j, &goal)?);
                }
            }
            let mut out = Output::rows(samples.iter().map(spectra::kappa_json).collect());
            out.tsv = Some(spectra::kappa_table_tsv(&samples));
            Ok(out)
        }
        Command::Spectrum {
            alpha: a,
            horizon,
            window,
            no_periodic_exact,
        } => {
            let a = alpha(a)?;
            let opts = Options {
                goal: goal.clone(),
                periodic_exact: !no_periodic_exact,
                window_fraction: parse_rational(window)?,
            };
            if opts.window_fraction < BigRational::from_integer(0.into())
                || opts.window_fraction > BigRational::from_integer(1.into())
            {
                return Err(Error::InvalidArgument("window must be in [0, 1]".into()));
            }
            let r = spectra::spectrum_estimates(&a, horizon.unwrap_or(st.horizon), &opts)?;
            let mut out = Output::rows(vec![report_json(&r)]);
            out.tsv = Some(report_tsv(&r));
            out.human = Some(report_human(&r));
            Ok(out)
        }
        Command::Legendre {
            alpha: a,
            p,
            q,
            max_q,
            convention,
        } => {
            let a = alpha(a)?;
            let conv: ParityConvention = convention.parse()?;
            match (p, q, max_q) {
                (Some(p), Some(q), None) => {
                    let c = legendre::legendre_test(&a, &int(p)?, &int(q)?, conv)?;
                    Ok(Output::rows(vec![c.to_json(None)]))
                }
                (None, None, Some(m)) => {
                    let s = legendre::equivalence_sweep(&a, *m, conv, 0, true)?;
                    Ok(Output::rows(s.rows))
                }
                _ => Err(Error::InvalidArgument("give either --p and --q, or --max-q".into())),
            }
        }
        Command::Lucas {
            alpha: a,
            p_prev,
            q_prev,
            p,
            q,
        } => {
            let a = alpha(a)?;
            let (pp, qp, p, q) = (int(p_prev)?, int(q_prev)?, int(p)?, int(q)?);
            let v = legendre::lucas_test(&a, &pp, &qp, &p, &q)?;
            Ok(Output::rows(vec![json!({
                "schema": 1, "p_prev": num(&pp), "q_prev": num(&qp),
                "p": num(&p), "q": num(&q), "lucas": v,
            })]))
        }
        Command::Verify(args) => run_verify(args, st),
        Command::Hall { k, cap, tol } => {
            let k = parse_rational(k)?;
            let h = spectra::hall_construct(&k, *cap, &parse_rational(tol)?)?;
            Ok(Output::rows(vec![json!({
                "schema": 1,
                "k": rat_string(&k),
                "x_digits": h.x_digits,
                "y_digits": h.y_digits,
                "h_lo": h.value.decimal(st.precision as usize).split("..").next().unwrap_or_default(),
                "h_hi": h.value.decimal(st.precision as usize).split("..").nth(1).unwrap_or_default(),
                "alpha": h.alpha.to_string(),
            })]))
        }
        Command::Witness {
            kind,
            lambda0,
            cap,
            tol,
        } => match kind {
            WitnessKind::L2 => {
                let l = lambda0
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("witness l2 needs --lambda0".into()))?;
                let l = parse_rational(l)?;
                let w = spectra::witness_l2(&l, *cap, &parse_rational(tol)?)?;
                Ok(Output::rows(vec![json!({
                    "schema": 1,
                    "lambda0": rat_string(&l),
                    "center": w.center,
                    "x_digits": w.x_digits,
                    "y_digits": w.y_digits,
                    "sum": w.sum.decimal(st.precision as usize),
                    "alpha": w.alpha.to_string(),
                })]))
            }
            WitnessKind::L2star => {
                let a = spectra::witness_l2star_min();
                Ok(Output::rows(vec![json!({"schema": 1, "alpha": a.to_string()})]))
            }
        },
    }
}

fn run_verify(args: &VerifyArgs, st: &Settings) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed);
    let single = args.alpha.as_deref().map(alpha).transpose()?;
    let mut rows = Vec::new();
    let mut bad = false;
    match args.suite {
        Suite::Rules => {
            let t = args.max_q.unwrap_or(100_000);
            let mut set = single.map(|a| vec![a]).unwrap_or_else(|| {
                let mut v = named_set();
                v.extend((0..args.count).map(|_| verify::random_prefix(&mut rng, 400, 1, 9)));
                v
            });
            for a in set.drain(..) {
                let m = verify::rules_vs_scan(&a, t)?;
                bad |= !m.is_empty();
                rows.push(json!({"schema": 1, "alpha": a.to_string(), "max_q": t,
                    "mismatches": m.iter().map(|x| json!({
                        "variant": x.variant.to_string(),
                        "rules_only": x.rules_only.iter().map(num).collect::<Vec<_>>(),
                        "scan_only": x.scan_only.iter().map(num).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>()}));
            }
        }
        Suite::Legendre => {
            let m = args.max_q.unwrap_or(st.max_q);
            let set = single.map(|a| vec![a]).unwrap_or_else(|| named_set()[..4].to_vec());
            for a in &set {
                let s = legendre::equivalence_sweep(a, m, ParityConvention::Swapped, 200, false)?;
                bad |= !s.disagreements.is_empty() || !s.lucas_failures.is_empty();
                rows.push(json!({"schema": 1, "alpha": a.to_string(), "max_q": m,
                    "checked": s.checked, "disagreements": s.disagreements.len(),
                    "lucas_failures": s.lucas_failures.len()}));
            }
        }
        Suite::Invariants => {
            let set = single.map(|a| vec![a]).unwrap_or_else(|| {
                (0..args.count).map(|_| verify::random_periodic(&mut rng, 1, 9)).collect()
            });
            for a in &set {
                let mut fails = verify::check_invariants(a, args.horizon.unwrap_or(12))?;
                if a.eventual_period().is_some() {
                    fails.extend(verify::check_spectrum_order(a)?);
                }
                bad |= !fails.is_empty();
                rows.push(json!({"schema": 1, "alpha": a.to_string(), "failures": fails}));
            }
        }
        Suite::Implications => {
            let h = args.horizon.unwrap_or(60);
            let set = single.map(|a| vec![a]).unwrap_or_else(|| {
                (0..args.count).map(|_| verify::random_periodic(&mut rng, 1, 12)).collect()
            });
            for a in &set {
                let fails = verify::check_implications(a, h)?;
                bad |= !fails.is_empty();
                rows.push(json!({"schema": 1, "alpha": a.to_string(), "horizon": h, "violations": fails}));
            }
        }
    }
    Ok(Output::rows(rows).failing_if(bad))
}

/// Parses `args` (including the program name), runs, writes output, returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = load_settings(&cli).and_then(|st| run(&cli, &st).map(|o| (o, st)));
    let (out, st) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&out, st.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 2;
    }
    out.status
}
