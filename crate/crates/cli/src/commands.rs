//! The subcommands.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde_json::{json, Value};
use starprod_core::catalog::CatalogId;
use starprod_core::params::{parse_hbar, Evaluation, ParamScalar, ParameterCatalog};
use starprod_core::parse::parse_poly;
use starprod_core::reduction::{star_by_reduction_with, ReductionOptions};
use starprod_core::scalar::{CRational, Complex64, RationalQ, Scalar, TruncSeries, DEFAULT_TRUNCATION};
use starprod_core::states::{gns_build, psd_check, DMatrix, StateFunctional, WickPoint, PSD_TOLERANCE};
use starprod_core::topology::digest;
use starprod_core::{Error as CoreError, Polynomial};

use crate::args::{EvalArgs, GnsArgs, ReportArgs, SourceArgs, StateArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::report::{hbar_text, merge, summary_json, write_summary_csv, SuiteRow, VerifyReport};
use crate::source::{LoadedPhi, Source};
use crate::spec::{Expect, OneOrMany, PhiRef, ProbeConfig, Ring, RunConfig, RunSpec, DEFAULT_HBAR, DEFAULT_SEED, DEFAULT_SPEC};
use crate::suites::{default_probes, hbar_use, run_probe, wick_state_q_check, HbarUse, Run};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "STARPROD_SEED";

fn parameters(list: &[String]) -> CliResult<ParameterCatalog> {
    let mut p = ParameterCatalog::new();
    for text in list {
        p.extend_from_text(text)?;
    }
    Ok(p)
}

/// Builds a run from a catalog id or table plus bindings.
pub fn build_run(
    catalog: Option<&str>,
    phi: Option<&PhiRef>,
    base_dir: &Path,
    dim: Option<usize>,
    params: &ParameterCatalog,
    ring: Option<&str>,
    truncation: Option<usize>,
) -> CliResult<Run> {
    match (catalog, phi) {
        (Some(id), None) => {
            let source = Source::catalog(id, dim, params)?;
            let (_, inline) = CatalogId::parse(id)?;
            let mut bound: BTreeMap<String, String> = inline.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
            bound.extend(params.iter().map(|(k, v)| (k.clone(), v.to_string())));
            let mut label = source.label();
            if !bound.is_empty() {
                let list: Vec<String> = bound.iter().map(|(k, v)| format!("{k}={v}")).collect();
                label = format!("{label}[{}]", list.join(","));
            }
            let ring = Ring::parse(ring.unwrap_or("complex"))?;
            Ok(Run { source, ring, truncation: truncation.unwrap_or(DEFAULT_TRUNCATION), label, notes: Vec::new() })
        }
        (None, Some(phi)) => {
            let (mut loaded, label) = match phi {
                PhiRef::Path(p) => {
                    let path = if p.is_absolute() { p.clone() } else { base_dir.join(p) };
                    let name = p.file_name().map_or_else(|| "table".into(), |n| n.to_string_lossy().into_owned());
                    (LoadedPhi::load(&path)?, format!("phi:{name}"))
                }
                PhiRef::Inline(file) => {
                    let text = serde_json::to_string(file)?;
                    let tag = format!("{:08x}", digest([text.as_str()]) & 0xffff_ffff);
                    (LoadedPhi::from_json(&text)?, format!("phi:{tag}"))
                }
            };
            if let Some(d) = dim {
                if d != loaded.file.dimension {
                    return Err(CliError::Config(format!("--d {d} disagrees with the table dimension {}", loaded.file.dimension)));
                }
            }
            for (name, rule) in params.iter() {
                loaded.params.bind(name, rule.clone());
            }
            let ring = Ring::parse(ring.or(loaded.file.ring.as_deref()).unwrap_or("complex"))?;
            let truncation = truncation.or(loaded.file.truncation_order).unwrap_or(DEFAULT_TRUNCATION);
            let notes = loaded
                .normalized
                .iter()
                .map(|(j, i)| format!("tail of x{j} x{i} was rewritten in standard order"))
                .collect();
            Ok(Run { source: Source::Phi(Box::new(loaded)), ring, truncation, label, notes })
        }
        _ => Err(CliError::Usage("give exactly one of --catalog and --phi".into())),
    }
}

fn run_from_args(args: &SourceArgs) -> CliResult<Run> {
    let phi = args.phi.clone().map(PhiRef::Path);
    build_run(
        args.catalog.as_deref(),
        phi.as_ref(),
        Path::new("."),
        args.dim,
        &parameters(&args.params)?,
        args.ring.as_deref(),
        args.truncation,
    )
}

fn hbar_list(text: &str) -> CliResult<Vec<CRational>> {
    let values: Vec<CRational> = text
        .split(',')
        .map(|t| parse_hbar(t.trim()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad --hbar: {e}")))?;
    if values.is_empty() {
        return Err(CliError::Usage("--hbar needs a value".into()));
    }
    Ok(values)
}

fn emit(out: Option<&PathBuf>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn hbar_json(h: &CRational) -> Value {
    let (re, im) = h.to_f64_pair();
    if im == 0.0 {
        json!(re)
    } else {
        json!(h.to_string())
    }
}

fn eval_in<S: ParamScalar>(
    source: &Source,
    at: &Evaluation,
    lhs: &str,
    rhs: &str,
    step_limit: Option<u64>,
    full: bool,
) -> CliResult<(String, u64)> {
    let (d, kind) = (source.dim(), source.kind());
    let f: Polynomial<S> = parse_poly(lhs, d, kind).map_err(|e| CliError::Usage(format!("--lhs: {e}")))?;
    let g: Polynomial<S> = parse_poly(rhs, d, kind).map_err(|e| CliError::Usage(format!("--rhs: {e}")))?;
    let (result, count) = match source.table::<S>(at)? {
        Some(phi) => {
            let mut options = ReductionOptions::default();
            if let Some(limit) = step_limit {
                options.step_limit = limit;
            }
            let trace = star_by_reduction_with(&f, &g, &phi, &options)?;
            (trace.result, trace.reduction_count)
        }
        None => (source.engine::<S>(at)?.star(&f, &g)?, 0),
    };
    Ok((result.format(full), count))
}

pub fn eval(args: &EvalArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let run = run_from_args(&args.source)?;
    let points: Vec<Option<CRational>> = if run.ring.is_formal() {
        vec![None]
    } else {
        hbar_list(&args.hbar)?.into_iter().map(Some).collect()
    };
    let mut results = Vec::new();
    for h in &points {
        let at = match (run.ring, h) {
            (Ring::Series, _) => Evaluation::Series(run.truncation),
            (Ring::RationalQ, _) => Evaluation::Formal,
            (_, Some(h)) => Evaluation::Point(h.clone()),
            (_, None) => unreachable!("numeric rings carry a point"),
        };
        let computed = match run.ring {
            Ring::Complex => eval_in::<Complex64>(&run.source, &at, &args.lhs, &args.rhs, args.step_limit, args.exact),
            Ring::Rational => eval_in::<CRational>(&run.source, &at, &args.lhs, &args.rhs, args.step_limit, args.exact),
            Ring::Series => {
                eval_in::<TruncSeries<CRational>>(&run.source, &at, &args.lhs, &args.rhs, args.step_limit, args.exact)
            }
            Ring::RationalQ => eval_in::<RationalQ>(&run.source, &at, &args.lhs, &args.rhs, args.step_limit, args.exact),
        };
        let (text, count) = computed.map_err(|e| match e {
            CliError::Core(CoreError::NotRepresentable { rule }) => {
                CliError::Usage(format!("rule `{rule}` has no value in the {} ring at this hbar", run.ring.name()))
            }
            other => other,
        })?;
        results.push((h.clone(), text, count));
    }
    let text = if args.json {
        let rows: Vec<Value> = results
            .iter()
            .map(|(h, r, c)| {
                json!({
                    "result": r,
                    "reduction_count": c,
                    "hbar": h.as_ref().map_or(Value::Null, hbar_json),
                    "catalog": run.label,
                })
            })
            .collect();
        let value = if rows.len() == 1 { rows.into_iter().next().unwrap() } else { Value::Array(rows) };
        format!("{}\n", serde_json::to_string_pretty(&value)?)
    } else if results.len() == 1 {
        format!("{}\n", results[0].1)
    } else {
        results.iter().map(|(h, r, _)| format!("{}\t{r}\n", h.as_ref().map_or_else(String::new, |h| h.to_string()))).collect()
    };
    emit(args.out.as_ref(), stdout, &text)
}

/// Knobs for [`verify_spec`] that do not live in the spec.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: Option<u64>,
    pub jobs: usize,
    pub timings: bool,
    pub base_dir: PathBuf,
}

struct Job {
    run: usize,
    probe: ProbeConfig,
    hbar: Option<f64>,
    expect: Expect,
    seed: u64,
}

/// Errors that mean the spec itself is wrong (exit 2) rather than a probe
/// that did not hold.
fn is_config_error(e: &CliError) -> bool {
    match e {
        CliError::Core(c) => matches!(
            c,
            CoreError::NotRepresentable { .. }
                | CoreError::Parameter { .. }
                | CoreError::InvalidNorm(_)
                | CoreError::DimensionMismatch { .. }
                | CoreError::KindMismatch
                | CoreError::Parse { .. }
                | CoreError::GeneratorOutOfRange { .. }
                | CoreError::InvalidTable(_)
                | CoreError::SizeGuard(_)
                | CoreError::InvalidState(_)
                | CoreError::Unsupported(_)
        ),
        CliError::Failed(_) => false,
        _ => true,
    }
}

fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

/// Runs every probe of `spec`. Rows come out in spec order whatever the
/// number of workers.
pub fn verify_spec(spec: &RunSpec, options: &VerifyOptions) -> CliResult<VerifyReport> {
    let base_seed = match options.seed.or(spec.seed) {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let mut runs = Vec::new();
    let mut jobs = Vec::new();
    for (index, cfg) in spec.runs.iter().enumerate() {
        let params: Vec<String> = cfg.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let run = build_run(
            cfg.catalog.as_deref(),
            cfg.phi.as_ref(),
            &options.base_dir,
            cfg.dimension,
            &parameters(&params)?,
            cfg.ring.as_deref(),
            cfg.truncation,
        )?;
        let probes = cfg.probes.clone().unwrap_or_else(|| default_probes(&run.source));
        let run_seed = cfg.seed.unwrap_or(base_seed);
        let run_hbars = cfg.hbar.as_ref().map_or_else(|| vec![DEFAULT_HBAR], OneOrMany::values);
        for probe in probes {
            let expect = probe.expect.or(cfg.expect).unwrap_or_default();
            let hbars: Vec<Option<f64>> = match hbar_use(&probe.kind, run.ring)? {
                HbarUse::Once => vec![None],
                HbarUse::PerValue => probe.hbar.as_ref().map_or_else(|| run_hbars.clone(), OneOrMany::values).into_iter().map(Some).collect(),
            };
            for hbar in hbars {
                let seed = probe.seed.unwrap_or_else(|| {
                    run_seed ^ digest([run.label.as_str(), &probe.kind, &hbar_text(hbar), &index.to_string()])
                });
                jobs.push(Job { run: runs.len(), probe: probe.clone(), hbar, expect, seed });
            }
        }
        runs.push(run);
    }
    let started = Instant::now();
    let rows = execute(&runs, &jobs, options)?;
    let mut report = VerifyReport::new(base_seed, rows);
    if options.timings {
        report.runtime_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn execute(runs: &[Run], jobs: &[Job], options: &VerifyOptions) -> CliResult<Vec<SuiteRow>> {
    let one = |job: &Job| -> CliResult<SuiteRow> {
        let run = &runs[job.run];
        let ring = run.ring.name();
        let started = Instant::now();
        let mut row = match run_probe(run, &job.probe, job.hbar, job.seed) {
            Ok(report) => {
                let mut row = SuiteRow::from_report(&run.label, ring, job.hbar, job.seed, job.expect, &report);
                row.notes.splice(0..0, run.notes.iter().cloned());
                row
            }
            Err(e) if is_config_error(&e) => {
                return Err(CliError::Config(format!("{} / {}: {e}", run.label, job.probe.kind)));
            }
            Err(e) => SuiteRow::from_error(&run.label, &job.probe.kind, ring, job.hbar, job.seed, job.expect, e.to_string()),
        };
        if options.timings {
            row.runtime_ms = Some(started.elapsed().as_secs_f64() * 1e3);
        }
        Ok(row)
    };
    let workers = options.jobs.clamp(1, jobs.len().max(1));
    if workers == 1 {
        return jobs.iter().map(one).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CliResult<SuiteRow>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let row = one(&jobs[i]);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(row);
            });
        }
    });
    slots.into_inner().expect("workers finished").into_iter().map(|r| r.expect("every job ran")).collect()
}

fn spec_from_args(args: &VerifyArgs) -> CliResult<(RunSpec, PathBuf)> {
    if args.source.catalog.is_some() || args.source.phi.is_some() {
        if args.spec.is_some() {
            return Err(CliError::Usage("give a spec file or --catalog/--phi, not both".into()));
        }
        let s = &args.source;
        let mut params = BTreeMap::new();
        for text in &s.params {
            for item in text.split(',').filter(|t| !t.trim().is_empty()) {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--param expects NAME=RULE, got `{item}`")))?;
                params.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        let hbar = match &args.hbar {
            Some(text) => {
                let values: Vec<f64> = text
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::Usage(format!("--hbar expects real numbers, got `{text}`")))?;
                Some(OneOrMany::Many(values))
            }
            None => None,
        };
        let probes = args
            .probes
            .as_ref()
            .map(|kinds| kinds.iter().filter(|k| !k.is_empty()).map(|k| ProbeConfig::of_kind(k)).collect());
        let run = RunConfig {
            catalog: s.catalog.clone(),
            phi: s.phi.clone().map(PhiRef::Path),
            dimension: s.dim,
            params,
            ring: s.ring.clone(),
            truncation: s.truncation,
            hbar,
            probes,
            ..RunConfig::default()
        };
        return Ok((RunSpec { runs: vec![run], ..RunSpec::default() }, PathBuf::from(".")));
    }
    match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let base = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
            Ok((RunSpec::from_json(&text)?, base))
        }
        None => Ok((RunSpec::bundled(), PathBuf::from("."))),
    }
}

pub fn verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if args.print_default {
        stdout.write_all(DEFAULT_SPEC.as_bytes())?;
        return Ok(());
    }
    let (spec, base_dir) = spec_from_args(args)?;
    let options = VerifyOptions { seed: args.seed, jobs: args.jobs, timings: args.timings, base_dir };
    let report = verify_spec(&spec, &options)?;
    for s in &report.suites {
        let status = match (s.ok, s.pass) {
            (true, true) => "ok",
            (true, false) => "ok (failed as expected)",
            (false, true) => "UNEXPECTED PASS",
            (false, false) => "FAIL",
        };
        writeln!(stderr, "{:<40} {:<24} hbar={:<8} {status}", s.catalog, s.probe, hbar_text(s.hbar))?;
    }
    let out = args.output.out.as_ref().or(spec.out.as_ref());
    if args.output.csv {
        let mut buf = Vec::new();
        report.write_cases_csv(&mut buf)?;
        emit(out, stdout, &String::from_utf8(buf).expect("csv is utf-8"))?;
    } else {
        emit(out, stdout, &report.to_json()?)?;
        if let Some(csv_path) = &spec.csv {
            let mut buf = Vec::new();
            report.write_cases_csv(&mut buf)?;
            std::fs::write(csv_path, buf)?;
        }
    }
    if report.ok {
        Ok(())
    } else {
        let bad = report.suites.iter().filter(|s| !s.ok).count();
        Err(CliError::Failed(format!("{bad} suite(s) did not come out as expected")))
    }
}

pub fn report(args: &ReportArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let mut reports = Vec::new();
    for path in &args.inputs {
        let text = std::fs::read_to_string(path)?;
        let r = VerifyReport::from_json(&text)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        reports.push(r);
    }
    let merged = merge(&reports);
    for (catalog, probe, hbar) in &merged.overridden {
        writeln!(stderr, "warning: duplicate row ({catalog}, {probe}, {hbar}); keeping the later file")?;
    }
    let text = if args.output.json {
        summary_json(&merged.rows)?
    } else {
        let mut buf = Vec::new();
        write_summary_csv(&merged.rows, &mut buf)?;
        String::from_utf8(buf).expect("csv is utf-8")
    };
    emit(args.output.out.as_ref(), stdout, &text)
}

fn parse_point(text: &str) -> CliResult<WickPoint<Complex64>> {
    let coords: Vec<Complex64> = text
        .split(',')
        .map(|t| parse_hbar(t.trim()).map(|c| Complex64::from_crational(&c)))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad --z: {e}")))?;
    Ok(WickPoint::new(coords)?)
}

fn state_from(args: &StateArgs) -> CliResult<(StateFunctional<Complex64>, String)> {
    let z = parse_point(&args.z)?;
    let source = Source::catalog(&args.catalog, Some(z.dim()), &parameters(&args.params)?)?;
    wick_state_q_check(&source, args.hbar)?;
    Ok((StateFunctional::new(z, args.hbar)?, source.label()))
}

/// Row-major complex pairs.
pub fn matrix_json(m: &DMatrix<Complex64>) -> Value {
    let data: Vec<Value> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| json!([m[(i, j)].re, m[(i, j)].im]))
        .collect();
    json!({"rows": m.nrows(), "cols": m.ncols(), "data": data})
}

fn state_header(args: &StateArgs, label: &str, state: &StateFunctional<Complex64>, kind: &str) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), json!(crate::spec::SCHEMA));
    map.insert("kind".into(), json!(kind));
    map.insert("catalog".into(), json!(label));
    map.insert("hbar".into(), json!(args.hbar));
    map.insert("z".into(), json!(state.point().coords().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    map.insert("degree".into(), json!(args.degree));
    map
}

fn basis_json(basis: &[starprod_core::MultiIndex]) -> Value {
    json!(basis.iter().map(|k| k.exponents().to_vec()).collect::<Vec<_>>())
}

pub fn gram(args: &StateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (state, label) = state_from(args)?;
    let (basis, gram) = state.gram(args.degree);
    let check = psd_check(&gram, PSD_TOLERANCE)?;
    let mut map = state_header(args, &label, &state, "gram");
    map.insert("basis".into(), basis_json(&basis));
    map.insert("gram".into(), matrix_json(&gram));
    map.insert("min_eigenvalue".into(), json!(check.min_eigenvalue));
    map.insert("psd".into(), json!(check.pass));
    emit(args.out.as_ref(), stdout, &format!("{}\n", serde_json::to_string_pretty(&Value::Object(map))?))
}

pub fn gns(args: &GnsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (state, label) = state_from(&args.state)?;
    let data = gns_build(&state, args.state.degree)?;
    let d = state.dim();
    let residuals = (0..d)
        .map(|i| data.adjoint_residual(&state, &Polynomial::generator(d, starprod_core::GeneratorKind::W, i)))
        .collect::<Result<Vec<f64>, _>>()?;
    let mut map = state_header(&args.state, &label, &state, "gns");
    map.insert("basis".into(), basis_json(&data.basis));
    map.insert("gram".into(), matrix_json(&data.gram));
    map.insert("eigenvalues".into(), json!(data.eigenvalues));
    map.insert("rank".into(), json!(data.rank));
    map.insert("warning".into(), json!(data.warning));
    map.insert("operators".into(), json!(data.operators.iter().map(matrix_json).collect::<Vec<_>>()));
    map.insert("adjoint_residuals".into(), json!(residuals));
    let out = args.report.as_ref().or(args.state.out.as_ref());
    emit(out, stdout, &format!("{}\n", serde_json::to_string_pretty(&Value::Object(map))?))
}
