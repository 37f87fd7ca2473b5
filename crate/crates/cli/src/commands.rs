use std::path::Path;
use std::time::Instant;

use framekit::frame::{self, BoundsVerdict, VectorFamily};
use framekit::linalg::{self, PREDICATE_TOL};
use framekit::matrix_file::{read_matrix, write_matrix_json};
use framekit::orbit::{self, Operator, OrbitConfig};
use framekit::stability::{self, DEFAULT_STABILITY_TOL};
use framekit::surgery;
use framekit::{Complex64, DenseMatrix, DenseVector};
use log::{debug, info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use crate::error::{exit, CliError};
use crate::manifest::RunManifest;
use crate::report::{self, emit};
use crate::{Cli, Command, GlobalArgs};

type Outcome = Result<(Value, u8), CliError>;

pub fn dispatch(cli: Cli) -> Result<u8, CliError> {
    if let Command::Run { manifest } = &cli.command {
        let base = manifest.parent().unwrap_or(Path::new("."));
        info!("running manifest {}", manifest.display());
        return dispatch(RunManifest::load(manifest)?.to_cli(base)?);
    }
    let started = Instant::now();
    let (report, code) = match execute(&cli) {
        Ok(done) => done,
        Err(CliError::Core(e)) => match failure_report(&e) {
            Some(done) => done,
            None => return Err(e.into()),
        },
        Err(e) => return Err(e),
    };
    debug!("command finished in {:?}", started.elapsed());
    emit(&report, cli.global.out.as_deref())?;
    Ok(code)
}

/// Errors that still produce a report document.
fn failure_report(e: &framekit::Error) -> Option<(Value, u8)> {
    use framekit::Error as E;
    let message = e.to_string();
    match *e {
        E::NotAFrame { lambda_min } | E::BaseNotAFrame { lambda_min } => Some((
            json!({ "error": message, "lambda_min": lambda_min, "not_a_frame": true }),
            exit::NOT_A_FRAME,
        )),
        E::TightFrameExcluded { gap } => Some((
            json!({ "error": message, "gap": gap, "tight_frame_excluded": true }),
            exit::CRITERION_FAILED,
        )),
        _ => None,
    }
}

fn execute(cli: &Cli) -> Outcome {
    let global = &cli.global;
    match &cli.command {
        Command::Analyze { frame } => analyze(&read_family(frame)?, global),
        Command::Represent { frame } => represent(&read_family(frame)?, global),
        Command::Orbit {
            operator,
            seed_vector,
            truncation,
            dump,
        } => {
            let config = OrbitConfig::with_limits(
                read_operator(operator)?,
                read_vector(seed_vector)?,
                truncation.n_max,
                truncation.tail_tol,
            )?;
            orbit_report(&config, dump.as_deref())
        }
        Command::Remove { frame, index } => remove(&read_family(frame)?, *index, global),
        Command::Perturb {
            operator,
            base_seed,
            perturbed_seed,
            n,
        } => perturb(
            &read_operator(operator)?,
            &read_vector(base_seed)?,
            &read_vector(perturbed_seed)?,
            *n,
            global,
        ),
        Command::Spectral { operator } => spectral(&read_operator(operator)?),
        Command::Vset {
            operator,
            seeds,
            count,
            ks,
            truncation,
        } => {
            let operator = read_operator(operator)?;
            let seeds = match seeds {
                Some(path) => read_matrix_file(path)?,
                None => random_seeds(&operator, *count, global.seed.unwrap_or(0)),
            };
            vset(&operator, &seeds, ks, truncation.n_max, truncation.tail_tol)
        }
        Command::Run { .. } => Err(CliError::Usage("nested run".into())),
    }
}

fn read_matrix_file(path: &Path) -> Result<DenseMatrix, CliError> {
    let m = read_matrix(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    info!("read {}×{} matrix from {}", m.nrows(), m.ncols(), path.display());
    Ok(m)
}

fn read_family(path: &Path) -> Result<VectorFamily, CliError> {
    Ok(VectorFamily::from_columns(read_matrix_file(path)?)?)
}

fn read_operator(path: &Path) -> Result<Operator, CliError> {
    Ok(Operator::new(read_matrix_file(path)?)?)
}

/// A `d × 1` or `1 × d` matrix file.
fn read_vector(path: &Path) -> Result<DenseVector, CliError> {
    let m = read_matrix_file(path)?;
    match m.shape() {
        (_, 1) => Ok(m.column(0).into_owned()),
        (1, _) => Ok(m.row(0).transpose()),
        (r, c) => Err(CliError::Usage(format!(
            "{}: expected a vector, found a {r}×{c} matrix",
            path.display()
        ))),
    }
}

fn analyze(family: &VectorFamily, global: &GlobalArgs) -> Outcome {
    let tol = global.tol.unwrap_or(PREDICATE_TOL);
    let shape = json!({ "dim": family.dim(), "len": family.len() });
    let bounds = match frame::classify(family)? {
        BoundsVerdict::Frame(b) => b,
        not_a_frame => {
            let report = report::merge(report::bounds(&not_a_frame), shape);
            return Ok((report, exit::NOT_A_FRAME));
        }
    };
    let (lower_witness, upper_witness) = frame::bound_witnesses(family)?;
    let details = json!({
        "dim": family.dim(),
        "len": family.len(),
        "tight": bounds.is_tight(tol),
        "parseval": bounds.is_parseval(tol),
        "riesz_basis": frame::is_riesz_basis(family, tol),
        "frame_operator": report::matrix(&frame::frame_operator(family)),
        "dual": report::matrix(frame::canonical_dual(family)?.as_matrix()),
        "parseval_transform": report::matrix(frame::parseval_transform(family)?.as_matrix()),
        "lower_witness": report::vector(&lower_witness),
        "upper_witness": report::vector(&upper_witness),
    });
    Ok((
        report::merge(report::bounds(&BoundsVerdict::Frame(bounds)), details),
        exit::OK,
    ))
}

fn represent(family: &VectorFamily, global: &GlobalArgs) -> Outcome {
    let tol = global.tol.unwrap_or(PREDICATE_TOL);
    let rep = orbit::build_representation(family, tol)?;
    let shift = &rep.kernel_shift;
    let mut report = json!({
        "exact": rep.operator.is_some(),
        "operator": rep.operator.as_ref().map(|op| report::matrix(op.matrix())),
        "fitted": report::matrix(&rep.fitted),
        "residuals": rep.residuals,
        "max_residual": rep.max_residual,
        "linearly_independent": rep.linearly_independent,
        "kernel_shift": {
            "invariant": shift.invariant,
            "kernel_dim": shift.kernel_dim,
            "testable_dim": shift.testable_dim,
            "witness": shift.witness.as_ref().map(report::vector),
            "residual": shift.residual,
        },
    });
    if rep.operator.is_some() {
        return Ok((report, exit::OK));
    }
    let (step, residual) = rep
        .residuals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, r)| if r > best.1 { (k, r) } else { best });
    report["residual_witness"] = json!({ "step": step + 1, "residual": residual });
    Ok((report, exit::NO_REPRESENTATION))
}

fn orbit_report(config: &OrbitConfig, dump: Option<&Path>) -> Outcome {
    let result = orbit::orbit_frame_report(config)?;
    if let Some(path) = dump {
        let family = orbit::orbit(config).family;
        std::fs::write(path, write_matrix_json(family.as_matrix())).map_err(|source| {
            CliError::Output {
                path: path.to_path_buf(),
                source,
            }
        })?;
    }
    let details = json!({
        "dim": config.operator.dim(),
        "in_V": report::verdict(result.in_v),
        "verdict": report::verdict_name(result.in_v),
        "reason": report::reason(result.reason),
        "truncation_used": result.truncation_used,
        "truncated_at_max": result.truncated_at_max,
        "tail_bound": result.tail_bound,
        "upper_with_tail": result.upper_with_tail,
        "n_max": config.max_length,
        "tail_tol": config.tail_tol,
    });
    Ok((report::merge(report::bounds(&result.bounds_estimate), details), exit::OK))
}

fn remove(family: &VectorFamily, index: usize, global: &GlobalArgs) -> Outcome {
    if index == 0 || index > family.len() {
        return Err(CliError::Usage(format!(
            "--index must be between 1 and {}",
            family.len()
        )));
    }
    let tol = global.tol.unwrap_or(PREDICATE_TOL);
    let r = surgery::removal_test(family, index - 1, tol)?;
    let report = json!({
        "index": index,
        "A": r.bounds.lower,
        "B": r.bounds.upper,
        "criterion_value": r.criterion_value,
        "threshold": r.threshold,
        "removable": r.removable,
        "post_removal": report::bounds(&r.post_removal_bounds),
        "certified_lower_bound": r.certified_lower_bound,
        "transformed_lower_bound": r.transformed_lower_bound,
        "certificate_holds": r.certificate_holds,
    });
    let code = if r.removable { exit::OK } else { exit::CRITERION_FAILED };
    Ok((report, code))
}

fn perturb(
    operator: &Operator,
    base: &DenseVector,
    perturbed: &DenseVector,
    n: usize,
    global: &GlobalArgs,
) -> Outcome {
    let tol = global.tol.unwrap_or(DEFAULT_STABILITY_TOL);
    let r = stability::stability_test(operator, base, perturbed, n, tol)?;
    let report = json!({
        "n": n,
        "operator_norm": operator.norm(),
        "lower_bound_A": r.lower_bound_a,
        "k_inverse": r.radius,
        "equivalent_k": r.equivalent_k,
        "mu": r.mu,
        "sufficient": r.sufficient,
        "certified_lower_bound": r.certified_lower_bound,
        "oracle_bounds": report::bounds(&r.oracle_bounds),
        "bessel_difference": r.bessel_difference,
    });
    Ok((report, exit::OK))
}

fn spectral(operator: &Operator) -> Outcome {
    let neighborhood = match orbit::invertibility_neighborhood(operator) {
        Ok(r) => Some(r),
        Err(framekit::Error::NotInvertible { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "norm": operator.norm(),
        "spectral_radius": linalg::spectral_radius(operator.matrix())?,
        "invertible": neighborhood.is_some(),
        "neighborhood_radius": neighborhood,
    });
    Ok((report, exit::OK))
}

/// Standard normal entries, complex when the operator is.
fn random_seeds(operator: &Operator, count: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complex = operator.matrix().iter().any(|z| z.im != 0.0);
    let mut sample = || -> f64 { StandardNormal.sample(&mut rng) };
    let d = operator.dim();
    let mut seeds = DenseMatrix::zeros(d, count);
    for j in 0..count {
        for i in 0..d {
            let re = sample();
            let im = if complex { sample() } else { 0.0 };
            seeds[(i, j)] = Complex64::new(re, im);
        }
    }
    seeds
}

fn vset(operator: &Operator, seeds: &DenseMatrix, ks: &[u32], n_max: usize, tail_tol: f64) -> Outcome {
    if seeds.nrows() != operator.dim() {
        return Err(framekit::Error::DimensionMismatch {
            expected: operator.dim(),
            found: seeds.nrows(),
        }
        .into());
    }
    let vectors: Vec<DenseVector> = seeds.column_iter().map(|c| c.into_owned()).collect();
    let experiment = orbit::vset_ball_experiment(operator, &vectors, ks, n_max, tail_tol)?;
    if !experiment.violations.is_empty() {
        warn!(
            "{} of {} ball checks found no orbit point within the radius",
            experiment.violations.len(),
            experiment.checks
        );
    }
    let classified: Vec<Value> = experiment
        .seeds
        .iter()
        .map(|s| {
            let details = json!({
                "index": s.index + 1,
                "in_V": report::verdict(s.in_v),
                "verdict": report::verdict_name(s.in_v),
                "reason": report::reason(s.reason),
            });
            report::merge(report::bounds(&s.bounds_estimate), details)
        })
        .collect();
    let violations: Vec<Value> = experiment
        .violations
        .iter()
        .map(|v| {
            json!({
                "seed": v.seed + 1,
                "center": v.center + 1,
                "k": v.k,
                "closest_distance": v.closest_distance,
                "closest_step": v.closest_step,
            })
        })
        .collect();
    let report = json!({
        "seed_vectors": report::matrix(seeds),
        "seeds": classified,
        "ks": ks,
        "n_max": n_max,
        "tail_tol": tail_tol,
        "in_V_count": experiment.in_v_count,
        "checks": experiment.checks,
        "violations": violations,
        "forward_inclusion_holds": experiment.violations.is_empty(),
        "vacuous": experiment.vacuous,
    });
    Ok((report, exit::OK))
}
