//! `canonfan`: canonical bases, divisions, fans and semigroup gaps from the
//! command line.
//!
//! Exit codes: 0 on success, 1 when the mathematics refuses (an incomplete
//! fan, an inexact basis where an exact one is needed), 2 on bad input.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use canonfan_core::{
    complete, parse_polynomial, parse_scalar, reduced_basis, single_poly_fan, subduct,
    toric_kernel, traverse, universal_basis, AffineSemigroup, AlgebraPresentation,
    CanonicalBasis, Error, Exponent, GapReport, Polynomial, Scalar, StandardFan, TieBreak,
    TieBreakOrder, VarNames, WeightVector, WeightedOrder,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use input::{infer_names, parse_exponents, plain, split_list, AlgebraFile};
use report::RunReport;

const DEFAULT_CAP: i64 = 30;

#[derive(Parser)]
#[command(
    name = "canonfan",
    version,
    about = "Canonical bases and standard fans of power-series subalgebras"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Tie-break order: grlex, lex or grevlex.
    #[arg(long, global = true)]
    order: Option<String>,
    /// Variable precedence, most significant first, e.g. `y,x`.
    #[arg(long, global = true)]
    varorder: Option<String>,
    /// Valuation cap, an integer or a fraction.
    #[arg(long, global = true)]
    cap: Option<String>,
    /// Weight vector with positive entries, e.g. `1,2` or `3/2,1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Add wall-clock milliseconds to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete the generators to a canonical basis at one weight.
    Basis {
        #[arg(long)]
        algebra: PathBuf,
        /// Minimalize and reduce the completed basis.
        #[arg(long)]
        reduce: bool,
    },
    /// Subduct a polynomial by the generators.
    Divide {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Traverse the standard fan of the algebra.
    Fan {
        #[arg(long)]
        algebra: PathBuf,
        /// Emit the sector data of a two-variable fan as JSON.
        #[arg(long)]
        plot: bool,
    },
    /// Union of the reduced bases over all cells of the fan.
    Universal {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Gaps of the leading-exponent semigroup, or of given generators.
    Gaps {
        #[arg(long, conflicts_with = "generators", required_unless_present = "generators")]
        algebra: Option<PathBuf>,
        /// Semigroup generators such as `(2,0); (0,3); (1,1)`.
        #[arg(long)]
        generators: Option<String>,
    },
    /// Valuations and initial forms.
    Initial {
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        algebra: Option<PathBuf>,
        /// A `;` separated list of polynomials.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Variable names for `--poly`, e.g. `x,y`.
        #[arg(long)]
        vars: Option<String>,
        /// List every initial form over the weight orthant instead.
        #[arg(long)]
        faces: bool,
    },
    /// Binomial generators of the relations among monomials.
    Relations {
        /// A `;` separated list of monomials, e.g. `x; x*y; x*y^2`.
        #[arg(long)]
        monomials: String,
        /// Variable names, e.g. `x,y`.
        #[arg(long)]
        vars: Option<String>,
    },
}

/// Failure with its exit code.
enum Failure {
    Refusal(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Refusal(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Refusal(m) | Failure::Input(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IncompleteFan
            | Error::BasisNotExact
            | Error::BasisNotMinimal
            | Error::BasisNotReduced
            | Error::InconsistentFan(_) => Failure::Refusal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn input_err(message: impl Into<String>) -> Failure {
    Failure::Input(message.into())
}

/// Everything an algebra command needs, after merging flags over the file.
struct Setup {
    names: VarNames,
    algebra: AlgebraPresentation,
    weight: WeightVector,
    tie: TieBreakOrder,
    cap: Scalar,
}

impl Setup {
    fn load(cli: &Cli, path: &Path) -> Outcome<Setup> {
        let label = path.display().to_string();
        let src = std::fs::read_to_string(path)
            .map_err(|e| input_err(format!("{label}: cannot read: {e}")))?;
        let file = AlgebraFile::parse(&src, &label).map_err(Failure::Input)?;
        let names = file.names(&label).map_err(Failure::Input)?;
        let gens = file.polynomials(&names, &label).map_err(Failure::Input)?;
        let algebra = AlgebraPresentation::new(gens)
            .map_err(|e| input_err(format!("{label}: {}", plain(&e))))?;
        let n = names.len();

        let weight = match cli.weight.as_ref().or(file.weight.as_ref()) {
            Some(w) => WeightVector::parse(w)
                .map_err(|e| input_err(format!("weight `{w}`: {}", plain(&e))))?,
            None => WeightVector::from_integers(&vec![1; n]).map_err(Failure::from)?,
        };
        if weight.dim() != n {
            return Err(input_err(format!(
                "weight has {} entries but the algebra has {n} variables",
                weight.dim()
            )));
        }
        let tie = tie_order(
            &names,
            cli.order.as_ref().or(file.order.as_ref()),
            cli.varorder.as_ref().or(file.varorder.as_ref()),
        )?;
        let cap = match cli.cap.as_ref().or(file.cap.as_ref()) {
            Some(c) => parse_scalar(c).map_err(|e| input_err(format!("cap: {}", plain(&e))))?,
            None => Scalar::from_integer(DEFAULT_CAP.into()),
        };
        Ok(Setup {
            names,
            algebra,
            weight,
            tie,
            cap,
        })
    }

    fn order(&self) -> Outcome<WeightedOrder> {
        Ok(WeightedOrder::new(self.weight.clone(), self.tie.clone())?)
    }

    fn fmt(&self, f: &Polynomial) -> String {
        self.names.format(f)
    }

    fn fmt_all(&self, fs: &[Polynomial]) -> Value {
        fs.iter().map(|f| self.fmt(f)).collect::<Vec<_>>().into()
    }

    /// Header fields. `with_weight` is false for commands that range over
    /// all weights.
    fn config(&self, with_weight: bool) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("vars".into(), self.names.names().join(", ").into());
        if with_weight {
            m.insert("weight".into(), self.weight.to_string().into());
        }
        m.insert("order".into(), self.tie.kind().name().into());
        let prec: Vec<&str> = self
            .tie
            .precedence()
            .iter()
            .map(|&i| self.names.names()[i].as_str())
            .collect();
        m.insert("varorder".into(), prec.join(" > ").into());
        m.insert("cap".into(), self.cap.to_string().into());
        m
    }
}

fn tie_order(names: &VarNames, order: Option<&String>, varorder: Option<&String>) -> Outcome<TieBreakOrder> {
    let kind: TieBreak = match order {
        Some(o) => o.trim().parse()?,
        None => TieBreak::GradedLex,
    };
    let n = names.len();
    let precedence = match varorder {
        None => (0..n).collect(),
        Some(text) => text
            .split(',')
            .map(|s| {
                let s = s.trim();
                names
                    .lookup(s)
                    .ok_or_else(|| input_err(format!("varorder: unknown variable `{s}`")))
            })
            .collect::<Outcome<Vec<usize>>>()?,
    };
    if precedence.len() != n {
        return Err(input_err(format!(
            "varorder lists {} variables, expected {n}",
            precedence.len()
        )));
    }
    Ok(TieBreakOrder::new(kind, precedence)?)
}

fn exponent_value(e: &Exponent) -> Value {
    e.coords().to_vec().into()
}

fn exponents_value(es: &[Exponent]) -> Value {
    es.iter().map(exponent_value).collect::<Vec<_>>().into()
}

fn basis_payload(s: &Setup, b: &CanonicalBasis) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("minimal".into(), b.minimal.into());
    m.insert("reduced".into(), b.reduced.into());
    m.insert("elements".into(), s.fmt_all(&b.elements));
    m.insert("leading_exponents".into(), exponents_value(&b.leading_exponents()));
    m.insert("adjoined".into(), s.fmt_all(&b.adjoined));
    m.insert(
        "semigroup_generators".into(),
        exponents_value(&b.semigroup().minimal_generators()),
    );
    m
}

fn run_basis(cli: &Cli, path: &Path, reduce: bool) -> Outcome<RunReport> {
    let s = Setup::load(cli, path)?;
    let ord = s.order()?;
    let b = if reduce {
        reduced_basis(&s.algebra, &ord, &s.cap)?
    } else {
        complete(&s.algebra, &ord, &s.cap)?
    };
    Ok(RunReport {
        command: "basis",
        config: s.config(true),
        status: b.status.name().into(),
        result: basis_payload(&s, &b),
        timing_ms: None,
    })
}

fn run_divide(cli: &Cli, path: &Path, text: &str) -> Outcome<RunReport> {
    let s = Setup::load(cli, path)?;
    let f = parse_polynomial(text, &s.names).map_err(|e| match &e {
        Error::Parse { offset, message } => input_err(format!("--input: byte {offset}: {message}")),
        _ => input_err(format!("--input: {e}")),
    })?;
    let ord = s.order()?;
    let r = subduct(&f, s.algebra.generators(), &ord, &s.cap)?;
    let quotient: Vec<Value> = r
        .quotient_terms
        .iter()
        .map(|q| {
            json!({
                "coefficient": q.coefficient.to_string(),
                "multiplicities": q.multiplicities,
            })
        })
        .collect();
    let mut m = Map::new();
    m.insert("input".into(), s.fmt(&f).into());
    m.insert("generators".into(), s.fmt_all(s.algebra.generators()));
    m.insert("remainder".into(), s.fmt(&r.remainder).into());
    m.insert("tail".into(), s.fmt(&r.tail).into());
    m.insert("quotient".into(), quotient.into());
    Ok(RunReport {
        command: "divide",
        config: s.config(true),
        status: r.status.name().into(),
        result: m,
        timing_ms: None,
    })
}

fn fan_status(fan: &StandardFan) -> &'static str {
    if fan.complete_flag {
        "complete"
    } else {
        "cap_reached"
    }
}

fn run_fan(cli: &Cli, path: &Path) -> Outcome<(RunReport, StandardFan, Setup)> {
    let s = Setup::load(cli, path)?;
    let fan = traverse(&s.algebra, &s.tie, &s.cap)?;
    let cells: Vec<Value> = fan
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "cell": i,
                "dim": c.cone.dim,
                "equalities": c.cone.equalities,
                "inequalities": c.cone.inequalities,
                "interior_point": c.cone.interior_point.to_string(),
                "multihomogeneous": c.multihomogeneous,
                "status": c.basis.status.name(),
                "basis": s.fmt_all(&c.basis.elements),
                "semigroup_generators": exponents_value(&c.semigroup.minimal_generators()),
            })
        })
        .collect();
    let walls: Vec<Value> = fan
        .walls
        .iter()
        .map(|w| json!({"cells": [w.cells.0, w.cells.1], "normal": w.normal, "point": w.point}))
        .collect();
    let mut m = Map::new();
    m.insert("cells".into(), cells.into());
    m.insert("walls".into(), walls.into());
    let report = RunReport {
        command: "fan",
        config: s.config(false),
        status: fan_status(&fan).into(),
        result: m,
        timing_ms: None,
    };
    Ok((report, fan, s))
}

/// Sector data for plotting a two-variable fan in the `(b1, b2)` quadrant.
fn plot_json(fan: &StandardFan, s: &Setup) -> Value {
    let sectors: Vec<Value> = fan
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut rays = c.cone.rays().to_vec();
            // counterclockwise from the b1 axis
            rays.sort_by(|r, t| (r[1] * t[0]).cmp(&(t[1] * r[0])));
            let gens: Vec<String> = c
                .semigroup
                .minimal_generators()
                .iter()
                .map(|e| e.to_string())
                .collect();
            json!({
                "cell": i,
                "dim": c.cone.dim,
                "start": rays.first(),
                "end": rays.last(),
                "label": format!("<{}>", gens.join(", ")),
                "multihomogeneous": c.multihomogeneous,
                "status": c.basis.status.name(),
            })
        })
        .collect();
    json!({
        "schema": "canonfan-fan-plot/1",
        "axes": s.names.names(),
        "cap": s.cap.to_string(),
        "complete": fan.complete_flag,
        "sectors": sectors,
    })
}

fn run_universal(cli: &Cli, path: &Path) -> Outcome<RunReport> {
    let s = Setup::load(cli, path)?;
    let fan = traverse(&s.algebra, &s.tie, &s.cap)?;
    let u = universal_basis(&fan)?;
    let mut m = Map::new();
    m.insert("cells".into(), fan.cells.len().into());
    m.insert("elements".into(), s.fmt_all(&u));
    Ok(RunReport {
        command: "universal",
        config: s.config(false),
        status: "exact".into(),
        result: m,
        timing_ms: None,
    })
}

fn gap_payload(sg: &AffineSemigroup, r: &GapReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("semigroup_generators".into(), exponents_value(&sg.minimal_generators()));
    m.insert("cofinite".into(), r.cofinite.into());
    m.insert("limited".into(), r.limited.into());
    if let Some(note) = &r.note {
        m.insert("note".into(), note.clone().into());
    }
    if r.cofinite {
        m.insert("gap_count".into(), r.gap_count().into());
        m.insert("gaps".into(), exponents_value(&r.gaps));
        m.insert("bound".into(), r.bound.clone().into());
    }
    let axis: Vec<Value> = r.axis_powers.iter().map(|p| json!(p)).collect();
    m.insert("axis_powers".into(), axis.into());
    let cert: Vec<Value> = r
        .certificate
        .iter()
        .map(|c| {
            json!({
                "axis": c.axis,
                "modulus": c.modulus,
                "states": c.states,
                "largest_minimum": c.largest_minimum,
            })
        })
        .collect();
    m.insert("certificate".into(), cert.into());
    if let Some(apery) = &r.apery {
        m.insert("apery".into(), apery.clone().into());
    }
    m
}

fn run_gaps(cli: &Cli, algebra: Option<&Path>, generators: Option<&str>) -> Outcome<RunReport> {
    let (config, sg) = match (algebra, generators) {
        (Some(path), _) => {
            let s = Setup::load(cli, path)?;
            let b = complete(&s.algebra, &s.order()?, &s.cap)?;
            if !b.is_exact() {
                return Err(Error::BasisNotExact.into());
            }
            (s.config(true), b.semigroup())
        }
        (None, Some(text)) => {
            let gens = parse_exponents(text).map_err(Failure::Input)?;
            let n = gens[0].dim();
            if n == 0 {
                return Err(input_err("--generators: vectors need at least one coordinate"));
            }
            (Map::new(), AffineSemigroup::new(n, gens)?)
        }
        (None, None) => return Err(input_err("gaps needs --algebra or --generators")),
    };
    let r = sg.gap_report();
    let status = match (r.cofinite, r.limited) {
        (_, true) => "limited",
        (true, false) => "cofinite",
        (false, false) => "not_cofinite",
    };
    Ok(RunReport {
        command: "gaps",
        config,
        status: status.into(),
        result: gap_payload(&sg, &r),
        timing_ms: None,
    })
}

fn parse_vars(text: &str) -> Outcome<VarNames> {
    let names = text.split(',').map(|s| s.trim().to_string()).collect();
    VarNames::new(names).map_err(|e| input_err(format!("--vars: {}", plain(&e))))
}

fn run_initial(
    cli: &Cli,
    algebra: Option<&Path>,
    poly: Option<&str>,
    vars: Option<&str>,
    faces: bool,
) -> Outcome<RunReport> {
    let (names, polys, config, weight, tie) = match (algebra, poly) {
        (Some(path), _) => {
            let s = Setup::load(cli, path)?;
            let config = s.config(!faces);
            (s.names, s.algebra.generators().to_vec(), config, s.weight, s.tie)
        }
        (None, Some(text)) => {
            let items = split_list(text);
            let names = match vars {
                Some(v) => parse_vars(v)?,
                None => infer_names(items.iter().copied()).map_err(Failure::Input)?,
            };
            let polys = items
                .iter()
                .map(|p| {
                    parse_polynomial(p, &names)
                        .map_err(|e| input_err(format!("--poly `{p}`: {}", plain(&e))))
                })
                .collect::<Outcome<Vec<_>>>()?;
            if polys.is_empty() {
                return Err(input_err("--poly: empty list"));
            }
            let n = names.len();
            let weight = match &cli.weight {
                Some(w) => WeightVector::parse(w)
                    .map_err(|e| input_err(format!("weight `{w}`: {}", plain(&e))))?,
                None => WeightVector::from_integers(&vec![1; n])?,
            };
            let tie = tie_order(&names, cli.order.as_ref(), cli.varorder.as_ref())?;
            let mut config = Map::new();
            config.insert("vars".into(), names.names().join(", ").into());
            if !faces {
                config.insert("weight".into(), weight.to_string().into());
                config.insert("order".into(), tie.kind().name().into());
            }
            (names, polys, config, weight, tie)
        }
        (None, None) => return Err(input_err("initial needs --algebra or --poly")),
    };
    if weight.dim() != names.len() {
        return Err(input_err(format!(
            "weight has {} entries but there are {} variables",
            weight.dim(),
            names.len()
        )));
    }
    let ord = WeightedOrder::new(weight.clone(), tie)?;
    let mut entries = Vec::new();
    for f in &polys {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial.into());
        }
        let entry = if faces {
            let list: Vec<Value> = single_poly_fan(f)?
                .iter()
                .map(|(cone, init)| {
                    json!({
                        "dim": cone.dim,
                        "equalities": cone.equalities,
                        "inequalities": cone.inequalities,
                        "interior_point": cone.interior_point.to_string(),
                        "initial_form": names.format(init),
                    })
                })
                .collect();
            json!({"polynomial": names.format(f), "faces": list})
        } else {
            let (e, c) = f.leading_term(&ord)?;
            let lead = Polynomial::monomial(e.clone(), c.clone());
            json!({
                "polynomial": names.format(f),
                "valuation": f.valuation(&weight)?.to_string(),
                "initial_form": names.format(&f.initial_form(&weight)?),
                "leading_term": names.format(&lead),
                "leading_exponent": exponent_value(e),
            })
        };
        entries.push(entry);
    }
    let mut m = Map::new();
    m.insert("polynomials".into(), entries.into());
    Ok(RunReport {
        command: "initial",
        config,
        status: "ok".into(),
        result: m,
        timing_ms: None,
    })
}

fn run_relations(monomials: &str, vars: Option<&str>) -> Outcome<RunReport> {
    let items = split_list(monomials);
    if items.is_empty() {
        return Err(input_err("--monomials: empty list"));
    }
    let names = match vars {
        Some(v) => parse_vars(v)?,
        None => infer_names(items.iter().copied()).map_err(Failure::Input)?,
    };
    let mut thetas = Vec::new();
    for item in &items {
        let p = parse_polynomial(item, &names)
            .map_err(|e| input_err(format!("--monomials `{item}`: {}", plain(&e))))?;
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((e, c)), None) if c == &Scalar::from_integer(1.into()) => thetas.push(e.clone()),
            _ => return Err(input_err(format!("--monomials: `{item}` is not a monic monomial"))),
        }
    }
    let kernel = toric_kernel(&thetas)?;
    let mut config = Map::new();
    config.insert("vars".into(), names.names().join(", ").into());
    let mut m = Map::new();
    let shown: Vec<String> = thetas.iter().map(|e| names.format_monomial(e)).collect();
    m.insert("monomials".into(), shown.into());
    let rels: Vec<String> = kernel.iter().map(|r| r.to_string()).collect();
    m.insert("relations".into(), rels.into());
    Ok(RunReport {
        command: "relations",
        config,
        status: "ok".into(),
        result: m,
        timing_ms: None,
    })
}

/// Runs the command and returns the text to print on stdout.
fn run(cli: &Cli) -> Outcome<String> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Basis { algebra, reduce } => run_basis(cli, algebra, *reduce)?,
        Command::Divide { algebra, input } => run_divide(cli, algebra, input)?,
        Command::Fan { algebra, plot } => {
            let (report, fan, setup) = run_fan(cli, algebra)?;
            if *plot {
                if setup.names.len() != 2 {
                    return Err(input_err(format!(
                        "--plot needs exactly 2 variables, the algebra has {}",
                        setup.names.len()
                    )));
                }
                let mut v = plot_json(&fan, &setup);
                if cli.timing {
                    v["timing_ms"] = (start.elapsed().as_millis() as u64).into();
                }
                return Ok(pretty(&v));
            }
            report
        }
        Command::Universal { algebra } => run_universal(cli, algebra)?,
        Command::Gaps {
            algebra,
            generators,
        } => run_gaps(cli, algebra.as_deref(), generators.as_deref())?,
        Command::Initial {
            algebra,
            poly,
            vars,
            faces,
        } => run_initial(cli, algebra.as_deref(), poly.as_deref(), vars.as_deref(), *faces)?,
        Command::Relations { monomials, vars } => run_relations(monomials, vars.as_deref())?,
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(if cli.json {
        pretty(&report.to_json())
    } else {
        report.to_text()
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
