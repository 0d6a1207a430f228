use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ifp_core::analysis::{standard_eps_grid, uniform_continuity_modulus, SequenceTrace, TraceTarget};
use ifp_core::document::{load_instance, LoadedInstance};
use ifp_core::format::to_json_pretty;
use ifp_core::maps::{
    enumerate_contractive_maps, fixed_points, is_locally_contractive, is_ts_if_contractive,
    min_contraction_constant, DEFAULT_ENUM_CAP,
};
use ifp_core::solvers::{ball_solve, build_chain, chain_solve, picard_solve, power_solve, EvalAt};
use ifp_core::space::{check_ifm_axioms, AxiomOptions};
use ifp_core::{Ball, Certification, Error, FiniteInstance, PointId, SelfMap, SolverConfig};
use serde::Serialize;

use crate::args::{CertifyArgs, CertifyKind, ChainArgs, Cli, Command, GlobalOpts, Mode, SolveArgs};
use crate::output::{trace_beside, write_atomic};
use crate::report::*;

pub const ENUM_CAP_VAR: &str = "IFP_ENUM_CAP";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Hypothesis { .. }
                | Error::NotChainable { .. }
                | Error::WitnessNotFound(_)
                | Error::InvariantViolation(_) => 1,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Outcome = Result<u8, CliError>;

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol {} must be positive", g.tol)));
    }
    match &cli.command {
        Command::CheckAxioms { path } => check_axioms(g, path),
        Command::Certify(args) => certify(g, args),
        Command::Solve(args) => solve(g, args),
        Command::Chain(args) => chain(g, args),
        Command::Enumerate { path, k } => enumerate(g, path, *k),
    }
}

fn load(g: &GlobalOpts, path: &Path) -> Result<LoadedInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", path.display())))?;
    Ok(load_instance(&text, g.t_grid.clone())?)
}

fn require_map(loaded: &LoadedInstance) -> Result<&SelfMap, CliError> {
    loaded
        .map
        .as_ref()
        .ok_or_else(|| CliError::Usage("the document declares no `map`".into()))
}

fn require<T: Copy>(v: Option<T>, flag: &str, why: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{flag} is required {why}")))
}

fn base_options(g: &GlobalOpts, inst: &FiniteInstance) -> Options {
    Options {
        tol: g.tol,
        t_grid: inst.t_grid().to_vec(),
        strict_xii: g.strict_xii(),
        ..Options::default()
    }
}

struct Emit<'a, T: Serialize> {
    g: &'a GlobalOpts,
    command: &'static str,
    input: &'a Path,
    options: Options,
    status: Status,
    result: T,
    trace: Option<(String, Option<PathBuf>)>,
}

impl<T: Serialize> Emit<'_, T> {
    fn write(self) -> Outcome {
        let exit_code = self.status.exit_code();
        let trace_path = match &self.trace {
            Some((_, Some(p))) => Some(p.clone()),
            Some((_, None)) => self.g.out.as_deref().map(trace_beside),
            None => None,
        };
        let envelope = Envelope {
            schema_version: SCHEMA_VERSION,
            command: self.command,
            status: self.status,
            manifest: Manifest {
                input: self.input.display().to_string(),
                options: self.options,
                exit_code,
                report_path: self.g.out.as_ref().map(|p| p.display().to_string()),
                trace_path: trace_path.as_ref().map(|p| p.display().to_string()),
            },
            meta: (!self.g.no_meta).then(Meta::now),
            result: self.result,
        };
        let json = to_json_pretty(&envelope)
            .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
        if let (Some((csv, _)), Some(p)) = (&self.trace, &trace_path) {
            write_atomic(p, csv)
                .map_err(|e| CliError::Io(format!("cannot write `{}`: {e}", p.display())))?;
        }
        match &self.g.out {
            Some(p) => write_atomic(p, &json)
                .map_err(|e| CliError::Io(format!("cannot write `{}`: {e}", p.display())))?,
            None => std::io::stdout()
                .write_all(json.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write report: {e}")))?,
        }
        Ok(exit_code)
    }
}

fn check_axioms(g: &GlobalOpts, path: &Path) -> Outcome {
    let loaded = load(g, path)?;
    let inst = &loaded.instance;
    let options = AxiomOptions::new(g.tol).with_xii(g.strict_xii().unwrap_or(false));
    let report = check_ifm_axioms(inst, &options);
    let result = AxiomsResult::new(inst, &report);
    eprintln!("{:<8} {:<13} statement", "axiom", "verdict");
    for row in &result.rows {
        eprintln!("{:<8} {:<13} {}", row.axiom, row.verdict, row.statement);
    }
    for w in &result.witnesses {
        eprintln!("witness {} at {:?}, t = {:?}: {} vs {}", w.axiom, w.points, w.t, w.lhs, w.rhs);
    }
    Emit {
        g,
        command: "check-axioms",
        input: path,
        options: base_options(g, inst),
        status: if report.all_pass() { Status::Ok } else { Status::VerdictFalse },
        result,
        trace: None,
    }
    .write()
}

fn certify(g: &GlobalOpts, args: &CertifyArgs) -> Outcome {
    let loaded = load(g, &args.path)?;
    let inst = &loaded.instance;
    let map = require_map(&loaded)?;
    let mut options = base_options(g, inst);
    options.kind = Some(args.kind.name());

    let mut constant = None;
    let certification = match args.kind {
        CertifyKind::TsIf => {
            let k = if args.auto_k {
                options.auto_k = Some(true);
                let c = min_contraction_constant(inst, map)?;
                let k = c.certifying_k();
                constant = Some(ConstantBody::new(inst, &c));
                k
            } else {
                Some(require(args.k, "--k", "for --kind ts-if (or pass --auto-k)")?)
            };
            options.k = k;
            match k {
                Some(k) => Some(is_ts_if_contractive(inst, map, k)?),
                None => None,
            }
        }
        CertifyKind::Local => {
            let eps = require(args.eps, "--eps", "for --kind local")?;
            let lambda = require(args.lambda, "--lambda", "for --kind local")?;
            options.eps = Some(eps);
            options.lambda = Some(lambda);
            Some(is_locally_contractive(inst, map, eps, lambda)?)
        }
    };

    let certified = certification.as_ref().is_some_and(Certification::is_certified);
    let result = CertifyResult {
        kind: args.kind.name(),
        map: map_entries(inst, map),
        constant,
        certified,
        certificate: certification
            .as_ref()
            .and_then(|c| c.certificate())
            .map(CertificateBody::new),
        counterexample: certification
            .as_ref()
            .and_then(|c| c.counterexample())
            .map(|c| CounterexampleBody::new(inst, c)),
    };
    match &result.counterexample {
        Some(c) => eprintln!("refuted at ({}, {}), t = {}: {} clause", c.x, c.y, c.t, c.clause),
        None if certified => eprintln!("certified"),
        None => eprintln!("not contractive"),
    }
    Emit {
        g,
        command: "certify",
        input: &args.path,
        options,
        status: if certified { Status::Ok } else { Status::VerdictFalse },
        result,
        trace: None,
    }
    .write()
}

fn point(inst: &FiniteInstance, label: &str) -> Result<PointId, CliError> {
    inst.point(label)
        .map_err(|_| CliError::Usage(format!("unknown point `{label}`")))
}

fn solve(g: &GlobalOpts, args: &SolveArgs) -> Outcome {
    let loaded = load(g, &args.path)?;
    let inst = &loaded.instance;
    let map = require_map(&loaded)?;
    let x0 = match &args.x0 {
        Some(label) => point(inst, label)?,
        None => PointId(0),
    };
    let mut config = SolverConfig::new(x0)
        .with_tol(g.tol)
        .with_max_iter(args.max_iter)
        .with_m(args.m);
    if let Some(strict) = g.strict_xii() {
        config = config.with_strict_xii(strict);
    }

    let mut options = base_options(g, inst);
    options.mode = Some(match args.mode {
        Mode::Picard => "picard",
        Mode::Ball => "ball",
        Mode::Power => "power",
        Mode::Chain => "chain",
    });
    options.max_iter = Some(args.max_iter);
    options.k = args.k;

    let outcome = match args.mode {
        Mode::Picard => {
            options.x0 = Some(inst.label(x0).to_string());
            picard_solve(inst, map, &config, args.k)
        }
        Mode::Ball => {
            let center = match args.center.as_ref().or(args.x0.as_ref()) {
                Some(label) => point(inst, label)?,
                None => PointId(0),
            };
            let r = require(args.r, "--r", "for --mode ball")?;
            let t = require(args.t, "--t", "for --mode ball")?;
            options.center = Some(inst.label(center).to_string());
            options.r = Some(r);
            options.t = Some(t);
            let ball = Ball::closed(center, r, t)?;
            ball_solve(inst, map, &ball, args.k, &config)
        }
        Mode::Power => {
            options.x0 = Some(inst.label(x0).to_string());
            options.m = Some(args.m);
            power_solve(inst, map, &config, args.k)
        }
        Mode::Chain => {
            let eps = require(args.eps, "--eps", "for --mode chain")?;
            let lambda = require(args.lambda, "--lambda", "for --mode chain")?;
            let t = require(args.t, "--t", "for --mode chain")?;
            options.x0 = Some(inst.label(x0).to_string());
            options.eps = Some(eps);
            options.lambda = Some(lambda);
            options.t = Some(t);
            chain_solve(inst, map, eps, lambda, &config, t)
        }
    };

    let report = match outcome {
        Ok(report) => report,
        Err(Error::Hypothesis { premise, detail }) => {
            eprintln!("hypothesis `{premise}` not satisfied: {detail}");
            return Emit {
                g,
                command: "solve",
                input: &args.path,
                options,
                status: Status::HypothesisFailed,
                result: HypothesisFailure { premise, detail },
                trace: None,
            }
            .write();
        }
        Err(e) => return Err(e.into()),
    };

    let oracle: Vec<PointId> = fixed_points(inst, map)?.into_iter().collect();
    let mut result = SolveResult::new(inst, &report, &oracle);
    if args.mode == Mode::Power {
        let table = uniform_continuity_modulus(inst, map, &standard_eps_grid())?;
        result.modulus = Some(modulus_rows(&table));
    }
    let ok = report.converged && report.premise_checks.iter().all(|p| p.holds);
    match &result.fixed_point {
        Some(p) => eprintln!("fixed point {p} after {} steps", report.iterations_used),
        None => eprintln!("no fixed point after {} steps", report.iterations_used),
    }
    let csv = SequenceTrace::new(inst, &report.iterates, TraceTarget::Offset(1))?.to_csv()?;
    Emit {
        g,
        command: "solve",
        input: &args.path,
        options,
        status: if ok { Status::Ok } else { Status::VerdictFalse },
        result,
        trace: Some((csv, args.trace.clone())),
    }
    .write()
}

fn chain(g: &GlobalOpts, args: &ChainArgs) -> Outcome {
    let loaded = load(g, &args.path)?;
    let inst = &loaded.instance;
    let from = point(inst, &args.from)?;
    let to = point(inst, &args.to)?;
    let (eval, eval_body) = if args.all_grid {
        (EvalAt::AllGrid, EvalBody::AllGrid(inst.t_grid().to_vec()))
    } else {
        let t = require(args.t, "--t", "unless --all-grid is given")?;
        (EvalAt::At(t), EvalBody::T(t))
    };
    let mut options = base_options(g, inst);
    options.from = Some(args.from.clone());
    options.to = Some(args.to.clone());
    options.eta = Some(args.eta);
    options.t = args.t;
    options.all_grid = Some(args.all_grid);

    let mut result = ChainResult {
        from: args.from.clone(),
        to: args.to.clone(),
        eta: args.eta,
        eval: eval_body,
        chainable: false,
        points: None,
        links: None,
        components: None,
    };
    match build_chain(inst, from, to, args.eta, eval) {
        Ok(c) => {
            eprintln!("chain of {} links", c.links.len());
            result.chainable = true;
            result.points = Some(inst.labels_of(&c.points));
            result.links = Some(chain_links(inst, &c));
        }
        Err(Error::NotChainable { components, .. }) => {
            eprintln!("not chainable; components {components:?}");
            result.components = Some(components);
        }
        Err(e) => return Err(e.into()),
    }
    let status = if result.chainable { Status::Ok } else { Status::VerdictFalse };
    Emit {
        g,
        command: "chain",
        input: &args.path,
        options,
        status,
        result,
        trace: None,
    }
    .write()
}

fn enum_cap() -> Result<u64, CliError> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{ENUM_CAP_VAR}=`{v}` is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn enumerate(g: &GlobalOpts, path: &Path, k: f64) -> Outcome {
    let loaded = load(g, path)?;
    let inst = &loaded.instance;
    let cap = enum_cap()?;
    let maps = enumerate_contractive_maps(inst, k, cap)?;
    let mut entries = Vec::with_capacity(maps.len());
    for m in &maps {
        let fixed: Vec<PointId> = fixed_points(inst, m)?.into_iter().collect();
        entries.push(EnumeratedMap {
            images: inst.labels_of(m.images()),
            fixed_points: inst.labels_of(&fixed),
        });
    }
    eprintln!("{} certified maps", entries.len());
    let mut options = base_options(g, inst);
    options.k = Some(k);
    options.enum_cap = Some(cap);
    Emit {
        g,
        command: "enumerate",
        input: path,
        options,
        status: Status::Ok,
        result: EnumerateResult {
            k,
            cap,
            count: entries.len(),
            maps: entries,
        },
        trace: None,
    }
    .write()
}
