//! Probe runners behind `star verify`.

use starprod_core::catalog::{
    log_canonical_table, sigma_oracle_star, CatalogId, Nonquadratic,
    NonquadraticParams,
};
use starprod_core::params::{Evaluation, ParamScalar};
use starprod_core::poisson::{jacobiators, poisson_bracket};
use starprod_core::reduction::{check_overlaps, StarProduct};
use starprod_core::sample::{self, ChaCha8Rng};
use starprod_core::scalar::{CRational, Complex64, RationalQ, Scalar, TruncSeries};
use starprod_core::states::{
    gns_build, nonpositivity_witness, psd_check, state_macgyver_bound, StateFunctional, WickPoint, PSD_TOLERANCE,
};
use starprod_core::topology::{
    at_hbar, classical_limit_probe, default_hbar_sequence, degree_filtration_check, digest, macgyver_continuity_probe,
    nonquadratic_lambda_bound, nonquadratic_rho_prime_probe, submultiplicativity_probe, symmetrized_lambda_probe,
    MacGyverConstants, NormSpec, ProbeCase, ProbeReport, INEQUALITY_SLACK,
};
use starprod_core::{Error as CoreError, GeneratorKind, MultiIndex, Polynomial};

use crate::error::{CliError, CliResult};
use crate::source::Source;
use crate::spec::{ProbeConfig, Ring};

/// Every probe kind `verify` understands.
pub const PROBE_KINDS: &[&str] = &[
    "overlaps",
    "associativity",
    "oracle",
    "jacobi",
    "first_order",
    "filtration",
    "submultiplicativity",
    "macgyver",
    "classical_limit",
    "nonquadratic_rho_prime",
    "symmetrized_lambda",
    "psd",
    "witness",
    "gns_adjoint",
    "state_bound",
];

/// Residual bound for GNS adjointness.
pub const GNS_ADJOINT_TOLERANCE: f64 = 1e-8;

/// Agreement required of the nonpositivity witness.
pub const WITNESS_TOLERANCE: f64 = 1e-12;

/// A source with the ring its exact suites run in.
#[derive(Debug, Clone)]
pub struct Run {
    pub source: Source,
    pub ring: Ring,
    pub truncation: usize,
    pub label: String,
    /// Remarks attached to every suite of the run.
    pub notes: Vec<String>,
}

/// How a probe depends on ℏ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbarUse {
    /// Runs at each requested ℏ.
    PerValue,
    /// Runs once; ℏ is formal or swept internally.
    Once,
}

pub fn hbar_use(kind: &str, ring: Ring) -> CliResult<HbarUse> {
    Ok(match kind {
        "overlaps" | "associativity" | "oracle" if ring.is_formal() => HbarUse::Once,
        "jacobi" | "first_order" | "classical_limit" => HbarUse::Once,
        k if PROBE_KINDS.contains(&k) => HbarUse::PerValue,
        other => return Err(CliError::Config(format!("unknown probe kind `{other}`"))),
    })
}

/// The suite run when a spec lists no probes.
pub fn default_probes(source: &Source) -> Vec<ProbeConfig> {
    let mut kinds: Vec<&str> = Vec::new();
    let has_table = source.table::<CRational>(&Evaluation::Point(CRational::zero())).is_ok_and(|t| t.is_some());
    if has_table {
        kinds.push("overlaps");
    }
    kinds.push("associativity");
    let id = match source {
        Source::Catalog(c) => Some(&c.id),
        Source::Phi(_) => None,
    };
    let closed_form = match id {
        Some(CatalogId::Nonquadratic { .. }) => !source.params().contains("s"),
        Some(_) => true,
        None => false,
    };
    if closed_form {
        kinds.push("oracle");
    }
    kinds.extend(["jacobi", "first_order"]);
    match id {
        Some(CatalogId::LogCanonical) => {
            kinds.extend(["filtration", "submultiplicativity", "macgyver", "classical_limit"])
        }
        Some(CatalogId::WickLogCanonical) => {
            kinds.extend(["filtration", "submultiplicativity", "psd", "witness", "gns_adjoint", "state_bound"])
        }
        Some(CatalogId::Nonquadratic { .. }) => kinds.extend(["macgyver", "classical_limit", "nonquadratic_rho_prime"]),
        Some(CatalogId::QuantumWeyl { .. }) => kinds.push("classical_limit"),
        _ => {}
    }
    kinds.into_iter().map(ProbeConfig::of_kind).collect()
}

/// Runs one probe. `hbar` is `None` exactly for [`HbarUse::Once`] probes.
pub fn run_probe(run: &Run, probe: &ProbeConfig, hbar: Option<f64>, seed: u64) -> CliResult<ProbeReport> {
    let mut report = dispatch(run, probe, hbar, seed)?;
    report.probe = probe.kind.clone();
    Ok(report)
}

fn dispatch(run: &Run, probe: &ProbeConfig, hbar: Option<f64>, seed: u64) -> CliResult<ProbeReport> {
    let mut rng = sample::rng(seed);
    let h = || hbar.ok_or_else(|| CliError::Config(format!("probe `{}` needs an hbar value", probe.kind)));
    match probe.kind.as_str() {
        "overlaps" | "associativity" | "oracle" => {
            let at = match run.ring {
                Ring::Series => Evaluation::Series(run.truncation),
                Ring::RationalQ => Evaluation::Formal,
                _ => at_hbar(h()?)?,
            };
            match run.ring {
                Ring::Complex => exact_probe::<Complex64>(run, probe, &at, &mut rng),
                Ring::Rational => exact_probe::<CRational>(run, probe, &at, &mut rng),
                Ring::Series => exact_probe::<TruncSeries<CRational>>(run, probe, &at, &mut rng),
                Ring::RationalQ => exact_probe::<RationalQ>(run, probe, &at, &mut rng),
            }
        }
        "jacobi" => jacobi(run),
        "first_order" => first_order(run, probe, &mut rng),
        "classical_limit" => classical_limit(run, probe, &mut rng),
        "psd" | "witness" | "gns_adjoint" | "state_bound" => states(run, probe, h()?, &mut rng),
        _ => numeric(run, probe, h()?, &mut rng),
    }
}

fn lift<S: Scalar>(p: &Polynomial<CRational>) -> Polynomial<S> {
    p.map_coeffs(S::from_crational)
}

fn exact_sample<S: Scalar>(rng: &mut ChaCha8Rng, run: &Run, probe: &ProbeConfig, deg: u32, terms: usize) -> Polynomial<S> {
    let p = sample::polynomial::<CRational>(
        rng,
        run.source.dim(),
        run.source.kind(),
        probe.max_degree.unwrap_or(deg),
        probe.max_terms.unwrap_or(terms),
    );
    lift(&p)
}

/// `‖diff‖` against zero: exact rings allow nothing, floats a relative slack.
fn residual_case<S: Scalar>(id: u64, diff: &Polynomial<S>, scale: f64) -> ProbeCase {
    let tol = if S::EXACT { 0.0 } else { INEQUALITY_SLACK * scale.max(1.0) };
    ProbeCase::new(id, diff.max_coeff_magnitude(), 0.0, tol)
}

fn size<S: Scalar>(polys: &[&Polynomial<S>]) -> f64 {
    polys.iter().map(|p| p.max_coeff_magnitude()).fold(1.0, f64::max)
}

fn monomial<S: Scalar>(dim: usize, kind: GeneratorKind, k: &MultiIndex) -> Polynomial<S> {
    Polynomial::monomial(dim, kind, k.clone(), S::one())
}

fn exact_probe<S: ParamScalar>(
    run: &Run,
    probe: &ProbeConfig,
    at: &Evaluation,
    rng: &mut ChaCha8Rng,
) -> CliResult<ProbeReport> {
    let src = &run.source;
    match probe.kind.as_str() {
        "overlaps" => {
            let phi = src
                .table::<S>(at)?
                .ok_or_else(|| CliError::Config(format!("`{}` has no generating table", run.label)))?;
            let report = check_overlaps(&phi)?;
            let mut cases: Vec<ProbeCase> = report
                .failures
                .iter()
                .map(|f| {
                    let id = digest(["overlap", &format!("{},{},{}", f.i, f.j, f.k)]);
                    ProbeCase::new(id, f.difference.max_coeff_magnitude().max(f64::MIN_POSITIVE), 0.0, 0.0)
                })
                .collect();
            if cases.is_empty() {
                cases.push(ProbeCase::new(digest(["overlap", "all"]), 0.0, 0.0, 0.0));
            }
            let mut out = ProbeReport::from_cases("overlaps", cases);
            for f in &report.failures {
                out = out.with_note(format!("x{} x{} x{}: {}", f.k, f.j, f.i, f.difference.format(false)));
            }
            Ok(out)
        }
        "associativity" => {
            let star = src.engine::<S>(at)?;
            let mut cases = Vec::new();
            for _ in 0..probe.samples.unwrap_or(20) {
                let f: Polynomial<S> = exact_sample(rng, run, probe, 3, 3);
                let g: Polynomial<S> = exact_sample(rng, run, probe, 3, 3);
                let k: Polynomial<S> = exact_sample(rng, run, probe, 3, 3);
                let left = star.star(&star.star(&f, &g)?, &k)?;
                let right = star.star(&f, &star.star(&g, &k)?)?;
                let id = digest(["assoc", &f.format(true), &g.format(true), &k.format(true)]);
                cases.push(residual_case(id, &left.checked_sub(&right)?, size(&[&left, &right])));
            }
            Ok(ProbeReport::from_cases("associativity", cases))
        }
        "oracle" => oracle::<S>(run, probe, at),
        _ => unreachable!("dispatched above"),
    }
}

/// The closed form against the reduction engine (or, for the symmetrized
/// family, against the symmetrization oracle) on all monomial pairs.
fn oracle<S: ParamScalar>(run: &Run, probe: &ProbeConfig, at: &Evaluation) -> CliResult<ProbeReport> {
    let src = &run.source;
    let (d, kind) = (src.dim(), src.kind());
    let degree = probe.max_degree.unwrap_or(3);
    let closed = src
        .closed_form::<S>(at)?
        .ok_or_else(|| CliError::Config(format!("`{}` has no closed form here", run.label)))?;
    let symmetrized = matches!(src, Source::Catalog(c) if c.id == CatalogId::SymmetrizedLogCanonical);
    let table = if symmetrized {
        log_canonical_table(d, kind, &src.params().realize::<S>("q", at)?)
    } else {
        src.table::<S>(at)?.expect("tables exist for non-symmetrized catalogs")
    };
    let monomials = MultiIndex::all_up_to(d, degree);
    let mut cases = Vec::new();
    for k in &monomials {
        for l in &monomials {
            let want = closed.star_monomials(k, l)?;
            let got = if symmetrized {
                sigma_oracle_star(k, l, &table)?
            } else {
                starprod_core::reduction::star_by_reduction(&monomial(d, kind, k), &monomial(d, kind, l), &table)?.result
            };
            let id = digest(["oracle", &format!("{k:?}{l:?}")]);
            cases.push(residual_case(id, &want.checked_sub(&got)?, size(&[&want, &got])));
        }
    }
    Ok(ProbeReport::from_cases("oracle", cases))
}

fn jacobi(run: &Run) -> CliResult<ProbeReport> {
    let eta = run.source.poisson(run.truncation)?;
    let cases = jacobiators(&eta)
        .into_iter()
        .map(|((i, j, k), p)| residual_case(digest(["jacobi", &format!("{i},{j},{k}")]), &p, 1.0))
        .collect::<Vec<_>>();
    let cases = if cases.is_empty() { vec![ProbeCase::new(digest(["jacobi", "none"]), 0.0, 0.0, 0.0)] } else { cases };
    Ok(ProbeReport::from_cases("jacobi", cases))
}

/// `B_1(f,g) − B_1(g,f) = i{f,g}` in truncated series.
fn first_order(run: &Run, probe: &ProbeConfig, rng: &mut ChaCha8Rng) -> CliResult<ProbeReport> {
    type T = TruncSeries<CRational>;
    let n = run.truncation.max(2);
    let star = run.source.engine::<T>(&Evaluation::Series(n))?;
    let eta = run.source.poisson(n)?;
    let mut cases = Vec::new();
    for _ in 0..probe.samples.unwrap_or(20) {
        let f: Polynomial<CRational> = exact_sample(rng, run, probe, 3, 3);
        let g: Polynomial<CRational> = exact_sample(rng, run, probe, 3, 3);
        let first = |a: &Polynomial<CRational>, b: &Polynomial<CRational>| -> CliResult<Polynomial<CRational>> {
            Ok(star.star(&lift::<T>(a), &lift::<T>(b))?.map_coeffs(|c| c.coeff(1)))
        };
        let anti = first(&f, &g)?.checked_sub(&first(&g, &f)?)?;
        let bracket = poisson_bracket(&eta, &f, &g)?.scale(&CRational::i());
        let id = digest(["first_order", &f.format(true), &g.format(true)]);
        cases.push(residual_case(id, &anti.checked_sub(&bracket)?, 1.0));
    }
    Ok(ProbeReport::from_cases("first_order", cases))
}

fn rho_norm(probe: &ProbeConfig, dim: usize) -> CliResult<NormSpec> {
    let rho = probe.rho.clone().unwrap_or_else(|| vec![1.0; dim]);
    if rho.len() != dim {
        return Err(CliError::Config(format!("rho has {} entries, dimension is {dim}", rho.len())));
    }
    Ok(NormSpec::rho(rho)?)
}

/// The fastest available product: the closed form where it applies.
fn fast_star(src: &Source, at: &Evaluation) -> CliResult<Box<dyn StarProduct<Complex64>>> {
    match src.closed_form::<Complex64>(at)? {
        Some(s) => Ok(s),
        None => src.engine(at),
    }
}

fn pairs(rng: &mut ChaCha8Rng, run: &Run, probe: &ProbeConfig, count: usize, deg: u32) -> Vec<(Polynomial<Complex64>, Polynomial<Complex64>)> {
    sample::polynomial_pairs(
        rng,
        probe.samples.unwrap_or(count),
        run.source.dim(),
        run.source.kind(),
        probe.max_degree.unwrap_or(deg),
        probe.max_terms.unwrap_or(4),
    )
}

fn numeric(run: &Run, probe: &ProbeConfig, hbar: f64, rng: &mut ChaCha8Rng) -> CliResult<ProbeReport> {
    let src = &run.source;
    let at = at_hbar(hbar)?;
    match probe.kind.as_str() {
        "filtration" => {
            let star = fast_star(src, &at)?;
            Ok(degree_filtration_check(star.as_ref(), &pairs(rng, run, probe, 200, 4))?)
        }
        "submultiplicativity" => {
            let star = fast_star(src, &at)?;
            let rho = rho_norm(probe, src.dim())?;
            Ok(submultiplicativity_probe(star.as_ref(), &rho, &pairs(rng, run, probe, 1000, 4))?)
        }
        "macgyver" => {
            let phi = src
                .table::<Complex64>(&at)?
                .ok_or_else(|| CliError::Config(format!("`{}` has no generating table", run.label)))?;
            let defaults = macgyver_defaults(src, &at)?;
            let constants = MacGyverConstants {
                c: probe.c.unwrap_or(defaults.c),
                alpha: probe.alpha.unwrap_or(defaults.alpha),
                beta: probe.beta.unwrap_or(defaults.beta),
                q: probe.q_bound.unwrap_or(defaults.q),
            };
            let report = macgyver_continuity_probe(&phi, &constants, &pairs(rng, run, probe, 40, 3))?;
            let pass = report.pass();
            let mut merged = ProbeReport::merge("macgyver", [report.inequality, report.hypotheses]);
            merged.pass = pass;
            Ok(merged.with_note(format!(
                "C={} alpha={} beta={} Q={}",
                constants.c, constants.alpha, constants.beta, constants.q
            )))
        }
        "nonquadratic_rho_prime" => {
            let params = nonquadratic_params(src, &at)?;
            let c = match probe.c {
                Some(c) => c,
                None => nonquadratic_lambda_bound(params.p, params.q, params.r, params.n)?,
            };
            let star: Box<dyn StarProduct<Complex64>> = if src.params().contains("s") {
                src.engine(&at)?
            } else {
                Box::new(Nonquadratic { params: params.clone() })
            };
            let samples = pairs(rng, run, probe, 100, 3);
            let report = nonquadratic_rho_prime_probe(star.as_ref(), probe.varrho.unwrap_or(1.0), params.n, c, &samples)?;
            Ok(report.with_note(format!("C={c}")))
        }
        "symmetrized_lambda" => {
            let q = src.params().realize::<Complex64>("q", &at)?;
            let rho = rho_norm(probe, src.dim())?;
            let monomials = MultiIndex::all_up_to(src.dim(), probe.max_degree.unwrap_or(4));
            let pairs: Vec<(MultiIndex, MultiIndex)> = monomials
                .iter()
                .flat_map(|k| monomials.iter().map(move |l| (k.clone(), l.clone())))
                .collect();
            Ok(symmetrized_lambda_probe(q, &rho, &pairs)?)
        }
        _ => unreachable!("dispatched above"),
    }
}

fn nonquadratic_params(src: &Source, at: &Evaluation) -> CliResult<NonquadraticParams<Complex64>> {
    let Source::Catalog(c) = src else {
        return Err(CliError::Config("probe needs the nonquadratic catalog".into()));
    };
    let CatalogId::Nonquadratic { n } = c.id else {
        return Err(CliError::Config("probe needs the nonquadratic catalog".into()));
    };
    let p = c.params.realize("p", at)?;
    let q = c.params.realize("q", at)?;
    let r = c.params.realize("r", at)?;
    Ok(NonquadraticParams { p, q, r, n })
}

fn macgyver_defaults(src: &Source, at: &Evaluation) -> CliResult<MacGyverConstants> {
    let id = match src {
        Source::Catalog(c) => Some(&c.id),
        Source::Phi(_) => None,
    };
    Ok(match id {
        Some(CatalogId::Nonquadratic { n }) => {
            let params = nonquadratic_params(src, at)?;
            let s: Complex64 = if src.params().contains("s") {
                src.params().realize("s", at)?
            } else {
                Scalar::inv(&params.r).ok_or(CoreError::NotInvertible)?
            };
            let one = Complex64::new(1.0, 0.0);
            let q = 3.0 * (params.p - one).norm().max(params.q.norm()).max(params.r.norm()).max(s.norm());
            MacGyverConstants { c: 1.5, alpha: 1.0, beta: (*n as f64).max(1.0), q }
        }
        Some(CatalogId::LogCanonical | CatalogId::WickLogCanonical) => {
            let q: Complex64 = src.params().realize("q", at)?;
            MacGyverConstants { c: 1.5, alpha: 1.0, beta: 1.0, q: q.norm().max(1.0) }
        }
        _ => {
            // a generic table: bound the step count by the largest tail coefficient
            let phi = src.table::<Complex64>(at)?;
            let q = phi.map_or(1.0, |t| 1.0 + t.scale());
            MacGyverConstants { c: 1.5, alpha: 1.0, beta: 1.0, q }
        }
    })
}

fn classical_limit(run: &Run, probe: &ProbeConfig, rng: &mut ChaCha8Rng) -> CliResult<ProbeReport> {
    let src = &run.source;
    let eta = src.poisson(run.truncation)?.map_coeffs(Complex64::from_crational);
    let family = |h: f64| -> starprod_core::Result<Box<dyn StarProduct<Complex64>>> {
        let at = at_hbar(h)?;
        src.engine::<Complex64>(&at).map_err(|e| match e {
            CliError::Core(e) => e,
            other => CoreError::Unsupported(other.to_string()),
        })
    };
    let rho = rho_norm(probe, src.dim())?;
    let hbars = match &probe.hbar {
        Some(list) => list.values(),
        None => default_hbar_sequence(),
    };
    let mut reports = Vec::new();
    let mut worst_order: Option<f64> = None;
    let count = probe.pairs.or(probe.samples).unwrap_or(5);
    for _ in 0..count {
        let f = sample::polynomial::<Complex64>(rng, src.dim(), src.kind(), probe.max_degree.unwrap_or(3), 3);
        let g = sample::polynomial::<Complex64>(rng, src.dim(), src.kind(), probe.max_degree.unwrap_or(3), 3);
        let limit = classical_limit_probe(&family, &eta, &f, &g, &hbars, &rho)?;
        if let Some(p) = limit.order {
            worst_order = Some(worst_order.map_or(p, |w: f64| if (p - 1.0).abs() > (w - 1.0).abs() { p } else { w }));
        }
        reports.push(limit.report);
    }
    let mut merged = ProbeReport::merge("classical_limit", reports);
    merged.notes.clear();
    if let Some(p) = worst_order {
        merged = merged.with_note(format!("order furthest from 1: {p}"));
    }
    Ok(merged)
}

pub fn wick_state_q_check(src: &Source, hbar: f64) -> CliResult<()> {
    if src.kind() != GeneratorKind::W {
        return Err(CliError::Config("states need a Wick-type catalog".into()));
    }
    let q: Complex64 = src.params().realize("q", &at_hbar(hbar)?)?;
    let want = Complex64::new((-hbar).exp(), 0.0);
    if (q - want).norm() > 1e-12 * want.norm().max(1.0) {
        return Err(CliError::Config(format!(
            "states require q(hbar) = e^-hbar; the bound rule gives {q} at hbar = {hbar}"
        )));
    }
    Ok(())
}

fn states(run: &Run, probe: &ProbeConfig, hbar: f64, rng: &mut ChaCha8Rng) -> CliResult<ProbeReport> {
    let src = &run.source;
    wick_state_q_check(src, hbar)?;
    let d = src.dim();
    let degree = probe.degree.unwrap_or(3);
    let default_points = if probe.kind == "gns_adjoint" { 10 } else { 20 };
    let points: Vec<WickPoint<Complex64>> =
        (0..probe.points.unwrap_or(default_points)).map(|_| WickPoint::random(rng, d, 1.0)).collect();
    let mut cases = Vec::new();
    let mut reports = Vec::new();
    for z in points {
        let tag = format!("{:?}", z.coords());
        let state = StateFunctional::new(z.clone(), hbar)?;
        match probe.kind.as_str() {
            "psd" => {
                let (_, gram) = state.gram(degree);
                let check = psd_check(&gram, PSD_TOLERANCE)?;
                cases.push(ProbeCase::new(
                    digest(["psd", &tag]),
                    -check.min_eigenvalue,
                    0.0,
                    PSD_TOLERANCE * check.scale,
                ));
            }
            "witness" => {
                if d < 2 {
                    return Err(CliError::Config("the witness needs d >= 2".into()));
                }
                let got = nonpositivity_witness(&z, hbar, 1)?;
                let want = Complex64::new((-hbar).exp() - 1.0, 0.0);
                cases.push(ProbeCase::new(digest(["witness", &tag]), (got - want).norm(), 0.0, WITNESS_TOLERANCE));
            }
            "gns_adjoint" => {
                let gns = gns_build(&state, degree)?;
                for i in 0..d {
                    let w = Polynomial::generator(d, GeneratorKind::W, i);
                    let r = gns.adjoint_residual(&state, &w)?;
                    cases.push(ProbeCase::new(digest(["gns", &tag, &i.to_string()]), r, 0.0, GNS_ADJOINT_TOLERANCE));
                }
            }
            "state_bound" => reports.push(state_macgyver_bound(&state, hbar, probe.max_degree.unwrap_or(4))),
            _ => unreachable!("dispatched above"),
        }
    }
    if probe.kind == "state_bound" {
        return Ok(ProbeReport::merge("state_bound", reports));
    }
    Ok(ProbeReport::from_cases(&probe.kind, cases))
}
