//! One function per subcommand. Each builds a report, writes it, and returns
//! the exit status the report implies.

use std::path::Path;

use mldeg_core::faces::{case3_kernel_certificate, classify_face, scan_weight_vectors, FaceCase};
use mldeg_core::mixed::{mixed_cells, mixed_volume_ie, support_polytopes};
use mldeg_core::ml::{build_ml_system, hat_transform, ml_mixed_volume, MlSystem};
use mldeg_core::model::{sample_generic_system, serialize_system, DataVector, PolynomialSystem, RandomSeed};
use mldeg_core::polytope::{LatticePolytope, WeightVector};
use mldeg_core::sampling::{random_supports, FamilyShape};
use mldeg_core::solver::{solve_ml_system, solve_system, with_retry, RetriedSolve, SolveReport, TrackerConfig};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, DegreeMethod, TrackerArgs, VolumeMethod};
use crate::report::{emit, resolve_seed, Input, Report, SeedSource};
use crate::{CliError, Status};

/// Support draws per bkk-check trial before giving up on a nonzero mixed volume.
const SUPPORT_DRAWS: u64 = 100;

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate { input } => validate(cli, input, out),
        Command::MlSystem { input, hat } => ml_system(cli, input, *hat, out),
        Command::MixedVolume { input, method, ml } => mixed_volume(cli, input, *method, *ml, out),
        Command::MlDegree {
            input,
            method,
            no_retry,
            tracker,
        } => ml_degree(cli, input, *method, !*no_retry, tracker, out),
        Command::Classify {
            input,
            weight,
            radius,
            rows,
        } => classify(cli, input, weight.as_deref(), *radius, *rows, out),
        Command::BkkCheck {
            trials,
            max_n,
            max_terms,
            max_degree,
            tracker,
        } => bkk_check(cli, *trials, *max_n, *max_terms, *max_degree, tracker, out),
    }
}

fn open(cli: &Cli, path: &Path) -> Result<(Input, RandomSeed, SeedSource), CliError> {
    let input = Input::read(path)?;
    let (seed, source) = resolve_seed(cli.seed, input.parsed.seed);
    Ok((input, seed, source))
}

/// The document's data vector, or one sampled from the seed.
fn data(input: &Input, seed: RandomSeed) -> (DataVector, &'static str) {
    match &input.parsed.u {
        Some(u) => (u.clone(), "document"),
        None => (DataVector::sample(input.parsed.system.n(), seed), "sampled"),
    }
}

fn tracker_config(args: &TrackerArgs) -> Result<TrackerConfig, CliError> {
    let config = args.config();
    config.validate().map_err(CliError::Usage)?;
    Ok(config)
}

fn vertices(polytopes: &[LatticePolytope]) -> Vec<&[Vec<i64>]> {
    polytopes.iter().map(|p| p.vertices()).collect()
}

fn validate(cli: &Cli, path: &Path, out: Option<&Path>) -> Result<Status, CliError> {
    let (input, seed, source) = open(cli, path)?;
    let system = &input.parsed.system;
    let mut r = Report::new("validate", Some(&input), seed, source);
    r.set("valid", true)
        .set("n", system.n())
        .set("k", system.k())
        .set("square", system.is_square())
        .set("hat_form", system.first_non_hat_index().is_none())
        .set("terms", system.polynomials().iter().map(|p| p.len()).collect::<Vec<_>>())
        .set("u", input.parsed.u.as_ref().map(|u| u.values()));
    emit(&r.render(), out)?;
    Ok(Status::Ok)
}

fn ml_system(cli: &Cli, path: &Path, hat: bool, out: Option<&Path>) -> Result<Status, CliError> {
    let (input, seed, _) = open(cli, path)?;
    let (u, _) = data(&input, seed);
    let f = if hat {
        hat_transform(&input.parsed.system)?
    } else {
        input.parsed.system.clone()
    };
    let ml = build_ml_system(&f, &u)?;
    let mut text = serialize_system(ml.equations(), None, Some(seed));
    text.push('\n');
    emit(&text, out)?;
    Ok(Status::Ok)
}

fn mixed_volume(cli: &Cli, path: &Path, method: VolumeMethod, ml: bool, out: Option<&Path>) -> Result<Status, CliError> {
    let (input, seed, source) = open(cli, path)?;
    let mut r = Report::new("mixed-volume", Some(&input), seed, source);
    let (polytopes, supports) = if ml {
        let (u, u_source) = data(&input, seed);
        let system = build_ml_system(&input.parsed.system, &u)?;
        r.set("u", u.values()).set("u_source", u_source);
        (system.newton_polytopes(), system.equations().supports())
    } else {
        let system = &input.parsed.system;
        if !system.is_square() {
            return Err(mldeg_core::Error::NotSquare {
                equations: system.k(),
                variables: system.n(),
            }
            .into());
        }
        let supports = system.supports();
        (support_polytopes(&supports)?, supports)
    };
    r.set("method", method).set("ml", ml).set("dimension", polytopes.len());
    r.set("newton_polytopes", vertices(&polytopes));

    let ie = match method {
        VolumeMethod::Ie | VolumeMethod::Both => Some(mixed_volume_ie(&polytopes)?),
        VolumeMethod::Cells => None,
    };
    let cells = match method {
        VolumeMethod::Cells | VolumeMethod::Both => Some(mixed_cells(&supports, seed)?),
        VolumeMethod::Ie => None,
    };
    let mut status = Status::Ok;
    if let Some(v) = ie {
        r.set("inclusion_exclusion", v);
    }
    if let Some(s) = &cells {
        r.set("mixed_cells", s.total)
            .set("cells", &s.cells)
            .set("lifting_seed", s.lifting_seed)
            .set("lifting_attempts", s.attempts);
    }
    match (ie, &cells) {
        (Some(a), Some(s)) => {
            let agree = a == s.total;
            r.set("agreement", agree);
            if agree {
                r.set("mixed_volume", a);
            } else {
                log::error!("mixed volume engines disagree: inclusion-exclusion {a}, mixed cells {}", s.total);
                status = Status::Internal;
            }
        }
        (Some(a), None) => {
            r.set("mixed_volume", a);
        }
        (None, Some(s)) => {
            r.set("mixed_volume", s.total);
        }
        (None, None) => unreachable!("every method runs an engine"),
    }
    emit(&r.render(), out)?;
    Ok(status)
}

#[derive(Serialize)]
struct Attempt {
    seed: RandomSeed,
    count: u64,
    mixed_volume: u64,
    agreement: bool,
    paths: mldeg_core::solver::PathStats,
}

impl From<&SolveReport> for Attempt {
    fn from(s: &SolveReport) -> Self {
        Attempt {
            seed: s.seed,
            count: s.count,
            mixed_volume: s.mixed_volume,
            agreement: s.agreement,
            paths: s.paths,
        }
    }
}

fn attempts(solve: &RetriedSolve) -> Vec<Attempt> {
    std::iter::once(&solve.first).chain(solve.retry.as_ref()).map(Attempt::from).collect()
}

fn min_modulus(s: &SolveReport) -> Option<f64> {
    s.solutions.iter().map(|p| p.point.min_modulus()).reduce(f64::min)
}

fn ml_degree(
    cli: &Cli,
    path: &Path,
    method: DegreeMethod,
    retry: bool,
    tracker: &TrackerArgs,
    out: Option<&Path>,
) -> Result<Status, CliError> {
    let (input, seed, source) = open(cli, path)?;
    let config = tracker_config(tracker)?;
    let f = &input.parsed.system;
    let (u, u_source) = data(&input, seed);
    let ml: MlSystem = build_ml_system(f, &u)?;

    let mut r = Report::new("ml-degree", Some(&input), seed, source);
    r.set("method", method)
        .set("n", ml.n())
        .set("k", ml.k())
        .set("u", u.values())
        .set("u_source", u_source)
        .set("variables", ml.variable_names())
        .set("newton_polytopes", vertices(&ml.newton_polytopes()));

    let mut status = Status::Ok;
    match method {
        DegreeMethod::MixedVolume => {
            let check = ml_mixed_volume(&ml, seed)?;
            let mv = check.as_ref().map_or(0, |c| c.mixed_volume);
            r.set("mixed_volume", mv).set("ml_degree", mv);
            if let Some(c) = check {
                r.set("lifting_seed", c.subdivision.lifting_seed);
            }
        }
        DegreeMethod::Solve | DegreeMethod::Both => {
            let solve = |s: RandomSeed| solve_ml_system(f, &u, s, &config);
            let result = if retry {
                with_retry(seed, solve)?
            } else {
                RetriedSolve {
                    first: solve(seed)?,
                    retry: None,
                }
            };
            let last = result.final_report();
            r.set("config", &config)
                .set("count", last.count)
                .set("ml_degree", if method == DegreeMethod::Both { last.mixed_volume } else { last.count })
                .set("attempts", attempts(&result))
                .set("min_modulus", min_modulus(last))
                .set("solutions", &last.solutions);
            if method == DegreeMethod::Both {
                r.set("mixed_volume", last.mixed_volume).set("agreement", last.agreement);
            }
            if !last.agreement {
                status = Status::Anomaly;
            }
        }
    }
    emit(&r.render(), out)?;
    Ok(status)
}

fn classify(
    cli: &Cli,
    path: &Path,
    weight: Option<&[i64]>,
    radius: Option<i64>,
    rows: bool,
    out: Option<&Path>,
) -> Result<Status, CliError> {
    let (input, seed, source) = open(cli, path)?;
    let (u, u_source) = data(&input, seed);
    let hat_applied = input.parsed.system.first_non_hat_index().is_some();
    let f: PolynomialSystem = if hat_applied {
        hat_transform(&input.parsed.system)?
    } else {
        input.parsed.system.clone()
    };
    let ml = build_ml_system(&f, &u)?;

    let mut r = Report::new("classify", Some(&input), seed, source);
    r.set("hat_applied", hat_applied).set("u", u.values()).set("u_source", u_source);
    let mut status = Status::Ok;
    match (weight, radius) {
        (Some(w), None) => {
            let w = WeightVector(w.to_vec());
            let c = classify_face(&ml, &w)?;
            let x_part_zero = w.0[..ml.n()].iter().all(|&v| v == 0);
            r.set("classification", &c);
            if c.case == FaceCase::MixedWithOrigin && !x_part_zero {
                let cert = case3_kernel_certificate(&ml, &w)?;
                r.set("certificate_verified", cert.verify()).set("certificate", cert);
            }
        }
        (None, Some(radius)) => {
            let table = scan_weight_vectors(&ml, radius)?;
            let failed = table.rows.iter().filter(|row| row.certificate == Some(false)).count();
            if failed > 0 {
                status = Status::Internal;
            }
            r.set("radius", table.radius)
                .set("total", table.total)
                .set("counts", &table.counts)
                .set("certificates_verified", table.certificates_verified)
                .set("certificates_failed", failed);
            if rows {
                r.set("rows", &table.rows);
            }
        }
        _ => return Err(CliError::Usage("give exactly one of --weight and --radius".into())),
    }
    emit(&r.render(), out)?;
    Ok(status)
}

#[derive(Serialize)]
struct Trial {
    n: usize,
    supports: Vec<Vec<Vec<i64>>>,
    /// Support draws rejected for a zero mixed volume.
    skipped: u64,
    mixed_volume: u64,
    attempts: Vec<Attempt>,
    agreement: bool,
    min_modulus: Option<f64>,
}

fn bkk_check(
    cli: &Cli,
    trials: usize,
    max_n: usize,
    max_terms: usize,
    max_degree: i64,
    tracker: &TrackerArgs,
    out: Option<&Path>,
) -> Result<Status, CliError> {
    if trials == 0 || max_n == 0 || max_terms < 2 || max_degree < 1 {
        return Err(CliError::Usage(
            "need trials >= 1, max-n >= 1, max-terms >= 2 and max-degree >= 1".into(),
        ));
    }
    let config = tracker_config(tracker)?;
    let (seed, source) = resolve_seed(cli.seed, None);
    let mut results = Vec::with_capacity(trials);
    for i in 0..trials {
        let n = 1 + i % max_n;
        let shape = FamilyShape {
            n,
            k: n,
            max_terms,
            max_degree,
        };
        let trial_seed = seed.derive(i as u64);
        let mut found = None;
        for draw in 0..SUPPORT_DRAWS {
            let supports = random_supports(shape, trial_seed.derive(SUPPORT_DRAWS + draw));
            let mv = mixed_volume_ie(&support_polytopes(&supports)?)?;
            if mv > 0 {
                found = Some((supports, mv, draw));
                break;
            }
        }
        let Some((supports, mv, skipped)) = found else {
            return Err(CliError::Usage(format!("trial {i}: no support family with positive mixed volume")));
        };
        let solve = with_retry(trial_seed, |s| solve_system(&sample_generic_system(&supports, s)?, s, &config))?;
        let last = solve.final_report();
        if last.mixed_volume != mv {
            return Err(mldeg_core::Error::Internal(format!(
                "trial {i}: mixed volume {mv} before solving, {} during",
                last.mixed_volume
            ))
            .into());
        }
        results.push(Trial {
            n,
            supports: supports.iter().map(|s| s.points()).collect(),
            skipped,
            mixed_volume: mv,
            attempts: attempts(&solve),
            agreement: solve.agreement(),
            min_modulus: min_modulus(last),
        });
    }
    let first_pass = results.iter().filter(|t| t.attempts[0].agreement).count();
    let final_pass = results.iter().filter(|t| t.agreement).count();

    let mut r = Report::new("bkk-check", None, seed, source);
    r.set("config", &config)
        .set(
            "shape",
            json!({"trials": trials, "max_n": max_n, "max_terms": max_terms, "max_degree": max_degree}),
        )
        .set("first_pass", first_pass)
        .set("final_pass", final_pass)
        .set("trials", &results);
    emit(&r.render(), out)?;
    Ok(if final_pass == trials { Status::Ok } else { Status::Anomaly })
}
