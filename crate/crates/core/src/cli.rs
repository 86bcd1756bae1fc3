//! Command-line front end.
//!
//! Every command produces a [`Report`] holding a text rendering, a JSON
//! value (with `schema_version`) and an exit code: 0 on success, 2 when a
//! verification finds a mismatch, 1 on errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arcspaces::{
    arc_count, milnor_monomial, twisted_arc_count, verify_fermat_arc_map, zeta_monomial, ArcError, ArcSetSpec, PolyFn,
    Strategy,
};
use crate::convolution::{conv, conv_unsimplified, ts_combine, ConvError};
use crate::expr::{parse_class, ExprError};
use crate::gammatools::{
    alpha_m, lattice_points, ominimal_chi, parse_set, AffineFunctional, GammaError, Q,
};
use crate::ff::Budget;
use crate::gring::{Bindings, FermatKind, GringError, MotClass, Realizer};
use crate::resolution::{
    cusp_cover_bindings, milnor_from_strata, parse_strata, ResolutionError, CUSP_MINIMAL,
};
use crate::sampling::ClassSampler;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Gring(#[from] GringError),
    #[error(transparent)]
    Conv(#[from] ConvError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "motivic", version, about = "Motivic zeta functions, Milnor fibers and convolution")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Full,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Milnor,
    Z1star,
    Z0,
}

/// Field sizes and twists to realize at.
#[derive(Debug, Args)]
pub struct Grid {
    /// Comma-separated field sizes.
    #[arg(long, value_delimiter = ',', default_value = "7,13")]
    pub q: Vec<u64>,
    /// Every twist `k` modulo the action order, where it divides `q - 1`.
    #[arg(long)]
    pub all_twists: bool,
    /// Specific twists.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u64>,
    /// Opaque value table (`name q k value` lines).
    #[arg(long)]
    pub bindings: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeta function of a pure power `x1^n` at the origin.
    Zeta {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "origin")]
        point: String,
    },
    /// Milnor fiber of a sum of pure powers in separate variables.
    Milnor {
        #[arg(long)]
        poly: String,
    },
    /// Convolution product of two classes.
    Convolve { x: String, y: String },
    /// Compares the convolution route with an independent route for
    /// `x1^a + x2^b`, at every point of the grid.
    VerifyTs {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Strata file for the second route; the cusp data is built in.
        #[arg(long)]
        strata: Option<PathBuf>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Counts truncated arcs over `F_q`.
    ArcCount {
        #[arg(long)]
        poly: String,
        /// Second polynomial for the `z1star` and `z0` sets.
        #[arg(long)]
        poly2: Option<String>,
        #[arg(long, value_enum, default_value = "milnor")]
        set: SetKind,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "full")]
        strategy: StrategyArg,
        /// Twisted count of the Milnor set.
        #[arg(long)]
        twist: Option<u64>,
    },
    /// Exhaustive check of the arc map onto the Fermat-twisted arc set.
    ArcMap {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        poly2: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: u64,
        /// 1 for the `u^m + v^m = 1` set, 0 for `u^m + v^m = 0`.
        #[arg(long, default_value_t = 1)]
        kind: u8,
    },
    /// Milnor fiber from a strata file.
    StrataEval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        localized: bool,
        /// Realize the result on the grid.
        #[arg(long)]
        realize: bool,
        #[command(flatten)]
        grid: Grid,
    },
    /// Realizes a class expression.
    Realize {
        expr: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Value-group tools.
    Gamma {
        #[command(subcommand)]
        command: GammaCommand,
    },
    /// Random homomorphism checks of the realizations.
    RandomCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, value_delimiter = ',', default_value = "7,13")]
        q: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GammaCommand {
    /// O-minimal Euler characteristic.
    Chi {
        #[arg(long)]
        set: String,
    },
    /// The lattice sum `alpha_m(set, l)`, `l = coeffs . x + constant`.
    Alpha {
        #[arg(long)]
        set: String,
        #[arg(long)]
        m: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<i64>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        constant: String,
    },
    /// Points of the set on the `(1/m)Z` grid.
    Lattice {
        #[arg(long)]
        set: String,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit_code: i32,
}

impl Report {
    fn ok(text: String, mut json: Value) -> Report {
        json["schema_version"] = json!(SCHEMA_VERSION);
        Report { text, json, exit_code: 0 }
    }

    fn verdict(text: String, json: Value, pass: bool) -> Report {
        let mut r = Report::ok(text, json);
        r.exit_code = if pass { 0 } else { 2 };
        r
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize"),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_bindings(grid: &Grid) -> Result<Bindings, CliError> {
    match &grid.bindings {
        Some(p) => Ok(Bindings::parse(&read(p)?)?),
        None => Ok(Bindings::new()),
    }
}

fn fmt_rat(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `(q, k)` points, sorted by `q` then `k`, with `None` (plain) first.
fn grid_points(grid: &Grid, order: u64) -> Vec<(u64, Option<u64>)> {
    let mut qs = grid.q.clone();
    qs.sort_unstable();
    qs.dedup();
    let mut out = Vec::new();
    for q in qs {
        out.push((q, None));
        let twists: Vec<u64> = if grid.all_twists {
            (0..order).collect()
        } else {
            let mut k = grid.k.clone();
            k.sort_unstable();
            k.dedup();
            k
        };
        if q >= 2 && (q - 1) % order == 0 {
            out.extend(twists.into_iter().map(|k| (q, Some(k))));
        }
    }
    out
}

fn k_label(k: Option<u64>) -> String {
    k.map_or("plain".to_string(), |k| k.to_string())
}

/// Parses a sum of pure powers `x_i^n` with unit coefficients in distinct
/// variables, returning the exponents in variable order.
fn pure_power_sum(f: &PolyFn) -> Result<Vec<u32>, CliError> {
    let mut exps = vec![None; f.nvars()];
    for (e, c) in f.terms() {
        let used: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
        match used[..] {
            [i] if c == 1 && exps[i].is_none() => exps[i] = Some(e[i]),
            _ => {
                return Err(CliError::Usage(format!(
                    "{f} is not a sum of pure powers x_i^n in separate variables"
                )))
            }
        }
    }
    Ok(exps.into_iter().flatten().collect())
}

fn cmd_zeta(poly: &str, point: &str) -> Result<Report, CliError> {
    if point != "origin" {
        return Err(CliError::Usage("only the origin is supported".into()));
    }
    let f = PolyFn::parse(poly)?;
    let exps = pure_power_sum(&f)?;
    let [n] = exps[..] else {
        return Err(CliError::Usage(format!("{f}: zeta needs a single pure power")));
    };
    let z = zeta_monomial(n);
    Ok(Report::ok(
        format!("poly: {f}\nzeta: {z}\n"),
        json!({"command": "zeta", "poly": f.to_string(), "zeta": z.to_string()}),
    ))
}

/// Milnor fiber of `x1^n1 + x2^n2 + ...` by repeated combination.
pub fn milnor_of_pure_powers(exps: &[u32]) -> Result<MotClass, CliError> {
    let mut iter = exps.iter();
    let first = *iter.next().ok_or_else(|| CliError::Usage("empty polynomial".into()))?;
    let mut acc = milnor_monomial(first);
    for (dim, &n) in (1..).zip(iter) {
        acc = ts_combine(&acc, &milnor_monomial(n), dim, 1)?;
    }
    Ok(acc)
}

fn cmd_milnor(poly: &str) -> Result<Report, CliError> {
    let f = PolyFn::parse(poly)?;
    let s = milnor_of_pure_powers(&pure_power_sum(&f)?)?;
    Ok(Report::ok(
        format!("{s}\n"),
        json!({"command": "milnor", "poly": f.to_string(), "milnor_fiber": s.to_string()}),
    ))
}

fn cmd_convolve(x: &str, y: &str) -> Result<Report, CliError> {
    let (x, y) = (parse_class(x)?, parse_class(y)?);
    let c = conv(&x, &y)?;
    Ok(Report::ok(
        format!("{c}\n"),
        json!({"command": "convolve", "x": x.to_string(), "y": y.to_string(), "result": c.to_string()}),
    ))
}

/// Realizes both classes on the grid and tabulates agreement.
fn compare_on_grid(
    realizer: &Realizer,
    a: &MotClass,
    b: &MotClass,
    grid: &Grid,
) -> Result<(Vec<Value>, Vec<String>, bool), CliError> {
    let order = Realizer::required_order(a).lcm(&Realizer::required_order(b));
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for (q, k) in grid_points(grid, order) {
        let (va, vb) = (realizer.at(a, q, k)?, realizer.at(b, q, k)?);
        let agree = va == vb;
        pass &= agree;
        lines.push(format!(
            "{q:>4} {:>6} {:>12} {:>12}  {}",
            k_label(k),
            fmt_rat(&va),
            fmt_rat(&vb),
            if agree { "ok" } else { "MISMATCH" }
        ));
        rows.push(json!({"q": q, "k": k, "route_a": fmt_rat(&va), "route_b": fmt_rat(&vb), "agree": agree}));
    }
    Ok((rows, lines, pass))
}

fn cmd_verify_ts(a: u64, b: u64, strata: Option<&PathBuf>, grid: &Grid) -> Result<Report, CliError> {
    if a == 0 || b == 0 || a > u32::MAX as u64 || b > u32::MAX as u64 {
        return Err(CliError::Usage("exponents must be positive".into()));
    }
    let route_a = ts_combine(&MotClass::mu(a), &MotClass::mu(b), 1, 1)?;
    let cusp = (a.min(b), a.max(b)) == (2, 3);
    // the cusp cover values are built in; user bindings take precedence
    let mut bindings = if cusp { cusp_cover_bindings(&grid.q)? } else { Bindings::new() };
    bindings.extend(&load_bindings(grid)?);
    let (route_b, label) = match strata {
        Some(path) => (milnor_from_strata(&parse_strata(&read(path)?)?), format!("strata file {}", path.display())),
        None if cusp => (milnor_from_strata(&parse_strata(CUSP_MINIMAL)?), "cusp resolution strata".to_string()),
        None => {
            let raw = conv_unsimplified(&MotClass::mu(a), &MotClass::mu(b))?;
            (&(MotClass::mu(a) + MotClass::mu(b)) - &raw, "unsimplified Fermat classes".to_string())
        }
    };
    let realizer = Realizer::with_bindings(bindings);
    let (rows, lines, pass) = compare_on_grid(&realizer, &route_a, &route_b, grid)?;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let text = format!(
        "route A (convolution): {route_a}\nroute B ({label}): {route_b}\n   q      k      route A      route B\n{}\n{verdict}\n",
        lines.join("\n")
    );
    Ok(Report::verdict(
        text,
        json!({
            "command": "verify-ts", "a": a, "b": b,
            "route_a": route_a.to_string(), "route_b": route_b.to_string(), "route_b_source": label,
            "rows": rows, "pass": pass,
        }),
        pass,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_arc_count(
    poly: &str,
    poly2: Option<&str>,
    set: SetKind,
    m: u32,
    q: u64,
    strategy: StrategyArg,
    twist: Option<u64>,
) -> Result<Report, CliError> {
    let f = PolyFn::parse(poly)?;
    let strategy = match strategy {
        StrategyArg::Full => Strategy::Full,
        StrategyArg::Structured => Strategy::Structured,
    };
    let second = || -> Result<PolyFn, CliError> {
        Ok(PolyFn::parse(poly2.ok_or_else(|| CliError::Usage("--poly2 is required for this set".into()))?)?)
    };
    let (count, echo) = match (set, twist) {
        (SetKind::Milnor, Some(k)) => (twisted_arc_count(&f, m, q, k)?, f.to_string()),
        (_, Some(_)) => return Err(CliError::Usage("--twist applies to the milnor set".into())),
        (SetKind::Milnor, None) => (arc_count(&ArcSetSpec::Milnor { f: f.clone(), m }, q, strategy)?, f.to_string()),
        (SetKind::Z1star, None) => {
            let g = second()?;
            let echo = format!("{f}; {g}");
            (arc_count(&ArcSetSpec::Z1Star { f, g, m }, q, strategy)?, echo)
        }
        (SetKind::Z0, None) => {
            let g = second()?;
            let echo = format!("{f}; {g}");
            (arc_count(&ArcSetSpec::Z0Set { f, g, m }, q, strategy)?, echo)
        }
    };
    Ok(Report::ok(
        format!("poly: {echo}\ncount: {count}\n"),
        json!({"command": "arc-count", "poly": echo, "m": m, "q": q, "twist": twist, "count": count.to_string()}),
    ))
}

fn cmd_arc_map(poly: &str, poly2: &str, m: u32, q: u64, kind: u8) -> Result<Report, CliError> {
    let (f, g) = (PolyFn::parse(poly)?, PolyFn::parse(poly2)?);
    let kind = FermatKind::from_index(kind).ok_or_else(|| CliError::Usage("--kind must be 0 or 1".into()))?;
    let r = verify_fermat_arc_map(&f, &g, m, q, kind, &Budget::from_env())?;
    let pass = r.passes();
    let fibers: Vec<String> = r.fiber_sizes.iter().map(|n| n.to_string()).collect();
    let text = format!(
        "f: {f}\ng: {g}\ndomain: {}\nimage: {}\ntarget: {}\nwell defined: {}\nfiber sizes: {{{}}}\n\
         extension degree: {}\nsurjective over F_{q}^{}: {}\n{}\n",
        r.domain_size,
        r.image_size,
        r.target_size,
        r.well_defined,
        fibers.join(","),
        r.extension_degree,
        r.extension_degree,
        r.surjective_over_extension,
        if pass { "PASS" } else { "FAIL" },
    );
    let mut out = serde_json::to_value(&r).expect("report serializes");
    out["command"] = json!("arc-map");
    out["pass"] = json!(pass);
    Ok(Report::verdict(text, out, pass))
}

fn cmd_strata_eval(file: &PathBuf, localized: bool, realize: bool, grid: &Grid) -> Result<Report, CliError> {
    let data = parse_strata(&read(file)?)?;
    let mut s = milnor_from_strata(&data);
    if localized {
        s = s.localized();
    }
    let mut text = format!("{s}\n");
    let mut out = json!({"command": "strata-eval", "entries": data.entries().len(), "milnor_fiber": s.to_string()});
    if realize {
        let realizer = Realizer::with_bindings(load_bindings(grid)?);
        let mut rows = Vec::new();
        for (q, k) in grid_points(grid, Realizer::required_order(&s)) {
            let v = realizer.at(&s, q, k)?;
            text.push_str(&format!("{q:>4} {:>6} {:>12}\n", k_label(k), fmt_rat(&v)));
            rows.push(json!({"q": q, "k": k, "value": fmt_rat(&v)}));
        }
        out["rows"] = json!(rows);
    }
    Ok(Report::ok(text, out))
}

fn cmd_realize(expr: &str, grid: &Grid) -> Result<Report, CliError> {
    let x = parse_class(expr)?;
    let realizer = Realizer::with_bindings(load_bindings(grid)?);
    let mut text = format!("class: {x}\n");
    let mut rows = Vec::new();
    for (q, k) in grid_points(grid, Realizer::required_order(&x)) {
        let v = realizer.at(&x, q, k)?;
        text.push_str(&format!("{q:>4} {:>6} {:>12}\n", k_label(k), fmt_rat(&v)));
        rows.push(json!({"q": q, "k": k, "value": fmt_rat(&v)}));
    }
    Ok(Report::ok(text, json!({"command": "realize", "class": x.to_string(), "rows": rows})))
}

fn parse_constant(s: &str) -> Result<Q, CliError> {
    let bad = || CliError::Usage(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n.parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn cmd_gamma(cmd: &GammaCommand) -> Result<Report, CliError> {
    match cmd {
        GammaCommand::Chi { set } => {
            let s = parse_set(set)?;
            let chi = ominimal_chi(&s);
            Ok(Report::ok(format!("{chi}\n"), json!({"command": "gamma chi", "set": s.to_string(), "chi": chi})))
        }
        GammaCommand::Alpha { set, m, coeffs, constant } => {
            let s = parse_set(set)?;
            let coeffs = if coeffs.is_empty() { vec![0; s.dimension()] } else { coeffs.clone() };
            let l = AffineFunctional::new(coeffs, parse_constant(constant)?);
            let a = alpha_m(&s, &l, *m)?;
            Ok(Report::ok(
                format!("{a}\n"),
                json!({"command": "gamma alpha", "set": s.to_string(), "m": m, "alpha": a.to_string()}),
            ))
        }
        GammaCommand::Lattice { set, m } => {
            let s = parse_set(set)?;
            let pts: Vec<String> = lattice_points(&s, *m)?
                .iter()
                .map(|p| {
                    let c: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("({})", c.join(","))
                })
                .collect();
            Ok(Report::ok(
                format!("{}\n", pts.join(" ")),
                json!({"command": "gamma lattice", "set": s.to_string(), "m": m, "points": pts}),
            ))
        }
    }
}

/// Outcome of [`random_realization_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomCheckOutcome {
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Samples `cases` pairs of fragment classes and checks that both
/// realizations respect `+` and `*`, that `k = 0` matches the plain count,
/// and that rewriting convolutions does not change realized values.
pub fn random_realization_check(seed: u64, cases: usize, qs: &[u64]) -> Result<RandomCheckOutcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = ClassSampler::default();
    let r = Realizer::new();
    let mut out = RandomCheckOutcome { checks: 0, failures: Vec::new() };
    for case in 0..cases {
        let x = sampler.fragment_class(&mut rng);
        let y = sampler.fragment_class(&mut rng);
        let (sum, prod) = (&x + &y, &x * &y);
        let c = conv(&x, &y)?;
        let raw = conv_unsimplified(&x, &y)?;
        for &q in qs {
            let mut check = |what: &str, ok: bool| {
                out.checks += 1;
                if !ok {
                    out.failures.push(format!("case {case} q={q}: {what} for x = {x}, y = {y}"));
                }
            };
            let (px, py) = (r.plain(&x, q)?, r.plain(&y, q)?);
            check("plain sum", r.plain(&sum, q)? == &px + &py);
            check("plain product", r.plain(&prod, q)? == &px * &py);
            check("plain rewrite", r.plain(&c, q)? == r.plain(&raw, q)?);
            let order = Realizer::required_order(&raw).lcm(&Realizer::required_order(&prod));
            if (q - 1) % order != 0 {
                continue;
            }
            for k in 0..order {
                let (tx, ty) = (r.twisted(&x, q, k)?, r.twisted(&y, q, k)?);
                check("twisted sum", r.twisted(&sum, q, k)? == &tx + &ty);
                check("twisted product", r.twisted(&prod, q, k)? == &tx * &ty);
                check("twisted rewrite", r.twisted(&c, q, k)? == r.twisted(&raw, q, k)?);
            }
            check("k = 0 is plain", r.twisted(&x, q, 0)? == px && r.twisted(&prod, q, 0)? == r.plain(&prod, q)?);
        }
    }
    Ok(out)
}

fn cmd_random_check(seed: u64, cases: usize, qs: &[u64]) -> Result<Report, CliError> {
    let mut qs = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let o = random_realization_check(seed, cases, &qs)?;
    let pass = o.failures.is_empty();
    let mut text = format!("seed {seed}: {} checks over {cases} pairs, {} failures\n", o.checks, o.failures.len());
    for f in &o.failures {
        text.push_str(f);
        text.push('\n');
    }
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    Ok(Report::verdict(
        text,
        json!({"command": "random-check", "seed": seed, "cases": cases, "checks": o.checks, "failures": o.failures, "pass": pass}),
        pass,
    ))
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Zeta { poly, point } => cmd_zeta(poly, point),
        Command::Milnor { poly } => cmd_milnor(poly),
        Command::Convolve { x, y } => cmd_convolve(x, y),
        Command::VerifyTs { a, b, strata, grid } => cmd_verify_ts(*a, *b, strata.as_ref(), grid),
        Command::ArcCount { poly, poly2, set, m, q, strategy, twist } => {
            cmd_arc_count(poly, poly2.as_deref(), *set, *m, *q, *strategy, *twist)
        }
        Command::ArcMap { poly, poly2, m, q, kind } => cmd_arc_map(poly, poly2, *m, *q, *kind),
        Command::StrataEval { file, localized, realize, grid } => cmd_strata_eval(file, *localized, *realize, grid),
        Command::Realize { expr, grid } => cmd_realize(expr, grid),
        Command::Gamma { command } => cmd_gamma(command),
        Command::RandomCheck { seed, cases, q } => cmd_random_check(*seed, *cases, q),
    }
}

/// Parses arguments, runs, prints and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            let out = report.render(cli.format);
            print!("{out}");
            if cli.format == Format::Json {
                println!();
            }
            report.exit_code
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!(
                    "{}",
                    json!({"schema_version": SCHEMA_VERSION, "error": e.to_string()})
                ),
            }
            1
        }
    }
}
