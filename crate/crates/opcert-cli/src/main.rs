//! `opcert` command-line front end.
//!
//! Exit codes: 0 certified/success, 1 usage or parse error, 2 property
//! check failed (the queried property was refuted), 3 indeterminate
//! (an evaluation/domain error stopped the check).

mod args;

use clap::Parser;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use args::{Cli, Command, DomainArgs, FieldKind, OutputArgs, Property, SourceArgs};
use opcert::certify::{self, Certificate, Verdict, SCHEMA_VERSION};
use opcert::counterexample::{self, PipelineConfig, PipelineVerdict};
use opcert::dynamics;
use opcert::field::{ScalarField, VectorField};
use opcert::geom::{Grid, GridSpec, Mat2, Region, Vec2};
use opcert::{builtin, report};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

enum CliError {
    Usage(String),
    Lib(opcert::Error),
    Io(PathBuf, std::io::Error),
}

impl From<opcert::Error> for CliError {
    fn from(e: opcert::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Lib(e) => match e {
                opcert::Error::Syntax { .. }
                | opcert::Error::UnknownIdentifier { .. }
                | opcert::Error::NonIntegerExponent { .. }
                | opcert::Error::Region(_)
                | opcert::Error::Grid(_)
                | opcert::Error::EmptySearch { .. } => EXIT_USAGE,
                opcert::Error::Domain { .. } => EXIT_INDETERMINATE,
                opcert::Error::NotGradient { .. } => EXIT_FAILED,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error: {m}"),
            CliError::Lib(e) => format!("error: {e}"),
            CliError::Io(path, e) => format!("error: cannot write {}: {e}", path.display()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version go to stdout with success; real usage errors
            // follow the documented exit table (clap's default would be 2)
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        opcert::sweep::configure_threads(n);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Eval { source, point, json } => eval_cmd(&source, point, json.as_deref()),
        Command::Certify { property } => certify_cmd(property),
        Command::FitSkew { source, domain, out } => fit_cmd(&source, domain, &out),
        Command::RefuteSkew { source, domain, a_search, threshold, out } => {
            refute_cmd(&source, domain, a_search, threshold, &out)
        }
        Command::Reconstruct { source, domain, anchor, quad_step, curl_tol, out } => {
            reconstruct_cmd(&source, domain, anchor, quad_step, curl_tol, &out)
        }
        Command::Counterexample {
            u,
            domain,
            quad_step,
            pair_samples,
            seed,
            threshold,
            json,
            csv_dir,
        } => counterexample_cmd(
            &u,
            domain,
            quad_step,
            pair_samples,
            seed,
            threshold,
            json.as_deref(),
            csv_dir.as_deref(),
        ),
        Command::Solve { source, start, tol, max_iter, trace_every, trace_csv, json } => {
            solve_cmd(&source, start, tol, max_iter, trace_every, trace_csv.as_deref(), json.as_deref())
        }
    }
}

/// Exactly one of --op/--u/--f selects the operator.
fn selection<'a>(source: &'a SourceArgs) -> Result<(&'static str, &'a str), CliError> {
    let mut picked = Vec::new();
    if let Some(op) = &source.op {
        picked.push(("op", op.as_str()));
    }
    if let Some(u) = &source.u {
        picked.push(("u", u.as_str()));
    }
    if let Some(f) = &source.f {
        picked.push(("f", f.as_str()));
    }
    match picked.as_slice() {
        [one] => Ok(*one),
        [] => Err(CliError::Usage(
            "select an operator with exactly one of --op, --u, --f".into(),
        )),
        _ => Err(CliError::Usage(
            "options --op, --u, --f are mutually exclusive".into(),
        )),
    }
}

fn resolve_vector(source: &SourceArgs) -> Result<VectorField, CliError> {
    let (way, text) = selection(source)?;
    match way {
        "op" => {
            if source.kind.is_some() {
                return Err(CliError::Usage("--kind only applies to --f".into()));
            }
            match text {
                "fplus" => Ok(builtin::field_plus()),
                "fminus" => Ok(builtin::field_minus()),
                "sum" => Ok(builtin::field_sum()),
                "identity" => Ok(builtin::identity_field()),
                other => Err(CliError::Usage(format!(
                    "unknown built-in operator `{other}` (expected fplus, fminus, sum, identity)"
                ))),
            }
        }
        "u" => Ok(counterexample::make_pair(text)?.field_plus),
        "f" => {
            let f = ScalarField::parse(text, text)?;
            match source.kind {
                Some(FieldKind::Gradient) => Ok(VectorField::gradient(f)),
                Some(FieldKind::Saddle) => Ok(VectorField::saddle(f)),
                None => Err(CliError::Usage(
                    "--f needs --kind gradient or --kind saddle in this context".into(),
                )),
            }
        }
        _ => unreachable!(),
    }
}

fn resolve_scalar(source: &SourceArgs) -> Result<ScalarField, CliError> {
    if source.kind.is_some() {
        return Err(CliError::Usage(
            "--kind does not apply to scalar-field properties".into(),
        ));
    }
    let (way, text) = selection(source)?;
    match way {
        "op" => match text {
            "fplus" => Ok(builtin::f_plus()),
            "fminus" => Ok(builtin::f_minus()),
            other => Err(CliError::Usage(format!(
                "`{other}` is not a built-in scalar field (expected fplus or fminus)"
            ))),
        },
        "u" => Ok(counterexample::make_pair(text)?.f_plus),
        "f" => Ok(ScalarField::parse(text, text)?),
        _ => unreachable!(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit_certificate(cert: &Certificate, out: &OutputArgs, csv: Option<String>) -> Result<u8, CliError> {
    if let Some(path) = &out.json {
        write_file(path, &report::to_json(cert))?;
    }
    if let (Some(path), Some(data)) = (&out.csv, csv) {
        write_file(path, &data)?;
    }
    let headline = cert
        .checks
        .iter()
        .map(|c| match c.observed {
            Some(v) => format!("{}={v:.16e}", c.metric),
            None => c.details.clone(),
        })
        .collect::<Vec<_>>()
        .join(", ");
    println!(
        "{} {}: {} ({headline})",
        cert.property,
        cert.operator,
        match cert.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    );
    Ok(match cert.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAILED,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    })
}

#[derive(Serialize)]
struct EvalReport<'a> {
    schema_version: u32,
    operator: &'a str,
    point: Vec2,
    value: Vec2,
    jacobian: Mat2,
    jacobian_exact: bool,
}

fn eval_cmd(source: &SourceArgs, point: Vec2, json: Option<&Path>) -> Result<u8, CliError> {
    let field = resolve_vector(source)?;
    let (value, jacobian) = field.eval(point)?;
    if let Some(path) = json {
        let rep = EvalReport {
            schema_version: SCHEMA_VERSION,
            operator: field.name(),
            point,
            value,
            jacobian,
            jacobian_exact: field.jacobian_exact(),
        };
        write_file(path, &report::to_json(&rep))?;
    }
    println!(
        "{} at ({:.16e}, {:.16e}): value ({:.16e}, {:.16e}), jacobian [[{:.16e}, {:.16e}], [{:.16e}, {:.16e}]]",
        field.name(),
        point.x,
        point.y,
        value.x,
        value.y,
        jacobian.a11,
        jacobian.a12,
        jacobian.a21,
        jacobian.a22
    );
    Ok(EXIT_OK)
}

fn certify_cmd(property: Property) -> Result<u8, CliError> {
    match property {
        Property::Monotone { source, domain, tol, pair_samples, seed, out } => {
            let field = resolve_vector(&source)?;
            let cert = certify::certify_monotone(
                &field,
                domain.region,
                domain.grid,
                pair_samples,
                seed,
                tol,
            );
            let csv = grid_csv_for(&out, || {
                certify::min_sym_eig_grid(&field, domain.region, domain.grid)
            }, domain)?;
            emit_certificate(&cert, &out, csv)
        }
        Property::Convex { source, domain, tol, out } => {
            let f = resolve_scalar(&source)?;
            let cert = certify::certify_convex(&f, domain.region, domain.grid, tol);
            let csv = grid_csv_for(&out, || {
                certify::hessian_eig_grid(&f, domain.region, domain.grid)
            }, domain)?;
            emit_certificate(&cert, &out, csv)
        }
        Property::ConvexConcave { source, domain, tol, out } => {
            let f = resolve_scalar(&source)?;
            let cert = certify::certify_convex_concave(&f, domain.region, domain.grid, tol);
            let csv = grid_csv_for(&out, || {
                certify::separable_margin_grid(&f, domain.region, domain.grid)
            }, domain)?;
            emit_certificate(&cert, &out, csv)
        }
        Property::Gradient { source, domain, tol, out } => {
            let field = resolve_vector(&source)?;
            let cert = certify::certify_gradient(&field, domain.region, domain.grid, tol);
            let csv = grid_csv_for(&out, || {
                certify::asymmetry_grid(&field, domain.region, domain.grid)
            }, domain)?;
            emit_certificate(&cert, &out, csv)
        }
    }
}

/// Render the per-point metric CSV only when requested; metric errors fall
/// back to no dump (the certificate already reports them).
fn grid_csv_for(
    out: &OutputArgs,
    metric: impl FnOnce() -> opcert::Result<Vec<f64>>,
    domain: DomainArgs,
) -> Result<Option<String>, CliError> {
    if out.csv.is_none() {
        return Ok(None);
    }
    match metric() {
        Ok(values) => Ok(Some(report::grid_csv(domain.region, domain.grid, &values))),
        Err(_) => Ok(None),
    }
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    operator: &'a str,
    region: Region,
    grid: GridSpec,
    fit: &'a certify::SkewAffineFit,
}

fn fit_cmd(source: &SourceArgs, domain: DomainArgs, out: &OutputArgs) -> Result<u8, CliError> {
    let field = resolve_vector(source)?;
    let fit = certify::fit_skew_affine(&field, domain.region, domain.grid)?;
    if let Some(path) = &out.json {
        let rep = FitReport {
            schema_version: SCHEMA_VERSION,
            operator: field.name(),
            region: domain.region,
            grid: domain.grid,
            fit: &fit,
        };
        write_file(path, &report::to_json(&rep))?;
    }
    if let Some(path) = &out.csv {
        let g = Grid::new(domain.region, domain.grid);
        let mut residuals = Vec::with_capacity(g.len());
        for k in 0..g.len() {
            let p = g.point(k);
            let v = field.value(p)?;
            let model = Vec2::new(fit.a * p.y + fit.b1, -fit.a * p.x + fit.b2);
            residuals.push((v - model).norm());
        }
        write_file(path, &report::grid_csv(domain.region, domain.grid, &residuals))?;
    }
    println!(
        "fit-skew {}: a={:.16e} b=({:.16e}, {:.16e}) rms={:.16e} max={:.16e}",
        field.name(),
        fit.a,
        fit.b1,
        fit.b2,
        fit.rms_residual,
        fit.max_residual
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RefuteReport<'a> {
    schema_version: u32,
    operator: &'a str,
    region: Region,
    grid: GridSpec,
    witness: &'a certify::RefutationWitness,
}

fn refute_cmd(
    source: &SourceArgs,
    domain: DomainArgs,
    a_search: Option<(f64, f64)>,
    threshold: f64,
    out: &OutputArgs,
) -> Result<u8, CliError> {
    let field = resolve_vector(source)?;
    let witness =
        certify::refute_skew_affine(&field, domain.region, domain.grid, a_search, threshold)?;
    if let Some(path) = &out.json {
        let rep = RefuteReport {
            schema_version: SCHEMA_VERSION,
            operator: field.name(),
            region: domain.region,
            grid: domain.grid,
            witness: &witness,
        };
        write_file(path, &report::to_json(&rep))?;
    }
    if let Some(path) = &out.csv {
        let values = certify::asymmetry_signed_grid(&field, domain.region, domain.grid)?;
        write_file(path, &report::grid_csv(domain.region, domain.grid, &values))?;
    }
    println!(
        "refute-skew {}: {} (min_sup_residual={:.16e} at a={:.16e}, threshold={:.16e})",
        field.name(),
        if witness.refuted { "REFUTED" } else { "NOT REFUTED" },
        witness.min_sup_residual,
        witness.best_a,
        witness.threshold
    );
    Ok(if witness.refuted { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct ReconstructReport<'a> {
    schema_version: u32,
    operator: &'a str,
    table: &'a certify::PotentialTable,
}

fn reconstruct_cmd(
    source: &SourceArgs,
    domain: DomainArgs,
    anchor: Vec2,
    quad_step: f64,
    curl_tol: f64,
    out: &OutputArgs,
) -> Result<u8, CliError> {
    let field = resolve_vector(source)?;
    let table = certify::reconstruct_potential(
        &field,
        domain.region,
        domain.grid,
        anchor,
        quad_step,
        curl_tol,
    )?;
    if let Some(path) = &out.json {
        let rep = ReconstructReport {
            schema_version: SCHEMA_VERSION,
            operator: field.name(),
            table: &table,
        };
        write_file(path, &report::to_json(&rep))?;
    }
    if let Some(path) = &out.csv {
        write_file(path, &report::grid_csv(domain.region, domain.grid, &table.values))?;
    }
    println!(
        "reconstruct {}: potential anchored at ({:.16e}, {:.16e}), gradient match {:.16e}",
        field.name(),
        anchor.x,
        anchor.y,
        table.gradient_match_sup
    );
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn counterexample_cmd(
    u: &str,
    domain: DomainArgs,
    quad_step: f64,
    pair_samples: usize,
    seed: u64,
    threshold: f64,
    json: Option<&Path>,
    csv_dir: Option<&Path>,
) -> Result<u8, CliError> {
    let config = PipelineConfig {
        quad_step,
        pair_samples,
        seed,
        refute_threshold: threshold,
        ..PipelineConfig::default()
    };
    let cert = counterexample::refute_additivity(u, domain.region, domain.grid, config.clone())?;
    if let Some(path) = json {
        write_file(path, &report::to_json(&cert))?;
    }
    if let Some(dir) = csv_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
        let pair = counterexample::make_pair(u)?;
        let dumps: [(&str, opcert::Result<Vec<f64>>); 4] = [
            ("monotone_plus_eig.csv", certify::min_sym_eig_grid(&pair.field_plus, domain.region, domain.grid)),
            ("monotone_minus_eig.csv", certify::min_sym_eig_grid(&pair.field_minus, domain.region, domain.grid)),
            ("sum_asymmetry.csv", certify::asymmetry_grid(&pair.sum_field(), domain.region, domain.grid)),
            ("coupling_mixed_partial.csv", {
                let g = Grid::new(domain.region, domain.grid);
                let u_field = pair.u.clone();
                opcert::sweep::first_error(opcert::sweep::map_indexed(g.len(), |k| {
                    u_field.jet(g.point(k)).map(|j| j.hxy)
                }))
                .map_err(|(_, e)| e)
            }),
        ];
        for (name, values) in dumps {
            if let Ok(values) = values {
                write_file(&dir.join(name), &report::grid_csv(domain.region, domain.grid, &values))?;
            }
        }
        if let Some(summary) = &cert.potential {
            // re-run the reconstruction for the value dump; cheap relative
            // to the pipeline and keeps the certificate self-contained
            let table = certify::reconstruct_potential(
                &pair.sum_field(),
                domain.region,
                domain.grid,
                summary.anchor,
                summary.quad_step,
                config.tol_quad,
            )?;
            write_file(
                &dir.join("sum_potential.csv"),
                &report::grid_csv(domain.region, domain.grid, &table.values),
            )?;
        }
    }
    let (line, code) = match cert.verdict {
        PipelineVerdict::CounterexampleCertified => ("counterexample certified".to_string(), EXIT_OK),
        PipelineVerdict::Failed => (
            format!(
                "counterexample FAILED at {}",
                cert.first_failed.as_deref().unwrap_or("unknown")
            ),
            EXIT_FAILED,
        ),
        PipelineVerdict::Indeterminate => ("counterexample INDETERMINATE".to_string(), EXIT_INDETERMINATE),
    };
    println!("{line}");
    Ok(code)
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    operator: &'a str,
    trace: &'a dynamics::SolveTrace,
}

fn solve_cmd(
    source: &SourceArgs,
    start: Vec2,
    tol: f64,
    max_iter: usize,
    trace_every: Option<usize>,
    trace_csv: Option<&Path>,
    json: Option<&Path>,
) -> Result<u8, CliError> {
    let field = resolve_vector(source)?;
    let keep = trace_every.or(if trace_csv.is_some() { Some(1) } else { None });
    let trace = dynamics::extragradient(&field, start, tol, max_iter, keep)?;
    if let Some(path) = json {
        let rep = SolveReport {
            schema_version: SCHEMA_VERSION,
            operator: field.name(),
            trace: &trace,
        };
        write_file(path, &report::to_json(&rep))?;
    }
    if let (Some(path), Some(iterates)) = (trace_csv, &trace.iterates) {
        write_file(path, &report::trace_csv(iterates))?;
    }
    println!(
        "solve {}: {} after {} iterations, residual {:.16e} at ({:.16e}, {:.16e})",
        field.name(),
        if trace.converged { "converged" } else { "NOT converged" },
        trace.iterations,
        trace.final_residual,
        trace.final_point.x,
        trace.final_point.y
    );
    Ok(if trace.converged { EXIT_OK } else { EXIT_FAILED })
}
