//! The five subcommands, each producing a report envelope plus optional
//! CSV artifacts.
//!
//! Every stochastic stage derives its seed from the single top-level seed
//! with a fixed stage tag, so one `--seed` pins the whole run and repeated
//! invocations are byte-identical.

use crate::args::{CheckArgs, DemoArgs, EmbedArgs, InduceArgs};
use crate::config::{AtomSpec, FamilySpec, KernelSpec, MeasureSpec, RunConfig};
use crate::csvio;
use crate::error::{usage, Result};
use crate::registry::{build_family, build_kernel, build_m_kernel, build_measure, Point};
use crate::report::{
    CheckDto, EmbeddingDto, Envelope, EstimateDto, InnerProductDto, MatrixDto, Parameters,
};
use metric_forge_core::{
    check_m_negative_definite_with_budget, check_negative_definite, check_separation,
    check_strictly_negative_definite, distance_matrix, induce_distance, inner_product_space,
    mix_seeds, schoenberg_embed, verify_metric_axioms, DistanceMatrix, InducedMetric,
    IntegrationPolicy, Verdict, DEFAULT_EMBED_TOL_REL, DEFAULT_TERM_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;

// Stage tags mixed into the top-level seed, one per stochastic stage.
const STAGE_SAMPLER: u64 = 1;
const STAGE_INTEGRATION: u64 = 2;
const STAGE_CHECK: u64 = 3;
const STAGE_LINEARITY: u64 = 4;
const STAGE_SEPARATION: u64 = 5;
const STAGE_AXIOMS: u64 = 6;
const STAGE_PROBES: u64 = 7;

const DEFAULT_TRIALS: u64 = 1000;
const DEFAULT_TOLERANCE: f64 = 1e-10;
const DEFAULT_MC_SAMPLES: u64 = 10_000;
const DEFAULT_TRIPLE_TRIALS: u64 = 200;
const DEFAULT_SUPPORT_COUNT: usize = 64;
const POLARIZATION_TOLERANCE: f64 = 1e-10;

/// CSV side outputs a command may produce alongside its report.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub matrix: Option<(Vec<String>, Vec<Vec<f64>>)>,
    pub coordinates: Option<(Vec<String>, Vec<Vec<f64>>)>,
}

fn term_budget() -> Result<u64> {
    match std::env::var("METRIC_FORGE_BUDGET") {
        Ok(text) => text.parse::<u64>().map_err(|_| {
            usage(format!("METRIC_FORGE_BUDGET must be a nonnegative integer, got '{text}'"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TERM_BUDGET),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(usage("METRIC_FORGE_BUDGET is not valid unicode"))
        }
    }
}

fn rows_from_flat(entries: &[f64], n: usize) -> Vec<Vec<f64>> {
    entries.chunks(n).map(|row| row.to_vec()).collect()
}

fn matrix_dto(matrix: &DistanceMatrix, max_stderr: f64, clamped: bool) -> MatrixDto {
    MatrixDto {
        labels: matrix.labels().to_vec(),
        rows: rows_from_flat(matrix.entries(), matrix.n()),
        max_stderr,
        clamped,
        file: None,
    }
}

fn path_value(path: &std::path::Path) -> Value {
    Value::String(path.display().to_string())
}

fn spec_value<T: serde::Serialize>(spec: &T) -> Value {
    serde_json::to_value(spec).expect("spec serialization cannot fail")
}

// ======================================================================
// check-ndk / check-m
// ======================================================================

pub fn cmd_check(args: &CheckArgs, as_check_m: bool) -> Result<(Envelope, Artifacts)> {
    let cfg = RunConfig::load_or_default(args.common.config.as_deref())?;
    let kernel_spec = cfg
        .kernel
        .clone()
        .ok_or_else(|| usage("check needs a kernel: set \"kernel\" in the config"))?;
    let points_path = args
        .points
        .clone()
        .or_else(|| cfg.points.clone())
        .ok_or_else(|| usage("check needs --points (CSV, one point per row)"))?;
    let points = csvio::read_points(&points_path)?;
    let seed = args
        .common
        .seed
        .or(cfg.seed)
        .ok_or_else(|| usage("randomized checks need --seed or config.seed"))?;
    let trials = args.trials.or(cfg.trials).unwrap_or(DEFAULT_TRIALS);
    let tolerance = args.common.tolerance.or(cfg.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let strict = args.strict || cfg.strict.unwrap_or(false);
    let m = args.m.or(cfg.m).or(if as_check_m { Some(2) } else { None });
    if let Some(m) = m {
        if m < 2 || m % 2 != 0 {
            return Err(usage(format!("--m must be even and at least 2, got {m}")));
        }
    }
    let budget = term_budget()?;
    let check_seed = mix_seeds(seed, STAGE_CHECK);

    let report = match m {
        None => {
            let kernel = build_kernel(&kernel_spec)?;
            if strict {
                check_strictly_negative_definite(&kernel, &points, trials, check_seed, tolerance)?
            } else {
                check_negative_definite(&kernel, &points, trials, check_seed, tolerance)?
            }
        }
        Some(m) => {
            let kernel = build_m_kernel(&kernel_spec, m)?;
            check_m_negative_definite_with_budget(
                &kernel, &points, trials, check_seed, tolerance, strict, budget,
            )?
        }
    };

    let mut params = Parameters::new();
    params.insert("kernel".into(), spec_value(&kernel_spec));
    if let Some(m) = m {
        params.insert("m".into(), json!(m));
        params.insert("term_budget".into(), json!(budget));
    }
    params.insert("strict".into(), json!(strict));
    params.insert("points".into(), path_value(&points_path));
    params.insert("seed".into(), json!(seed));
    params.insert("trials".into(), json!(trials));
    params.insert("tolerance".into(), json!(tolerance));

    let mut env = Envelope::new(if as_check_m { "check-m" } else { "check-ndk" }, params);
    env.exit_code = match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Degenerate => 3,
    };
    env.check = Some(CheckDto::from_report(&report));
    Ok((env, Artifacts::default()))
}

// ======================================================================
// induce
// ======================================================================

struct InducedSetup {
    metric: InducedMetric<Point, Point, Point>,
    probes: Vec<Point>,
    linearity: Option<&'static str>,
}

/// Build the induced metric shared by `induce`, `embed --config`, and the
/// demo: resolve specs, derive stage seeds, and (for declared-linear
/// families) verify linearity on the probes before anything else trusts it.
fn setup_induced(
    family_spec: &FamilySpec,
    measure_spec: &MeasureSpec,
    base_spec: &KernelSpec,
    probes: Vec<Point>,
    seed: Option<u64>,
    mc_samples: u64,
    quotient: bool,
) -> Result<InducedSetup> {
    let family = build_family(family_spec)?;
    let measure = build_measure(measure_spec, seed.map(|s| mix_seeds(s, STAGE_SAMPLER)))?;
    let base = build_kernel(base_spec)?;
    let policy = IntegrationPolicy {
        mc_samples,
        seed: seed.map(|s| mix_seeds(s, STAGE_INTEGRATION)).unwrap_or(0),
    };
    let metric = induce_distance(family, measure, base, policy)?.with_quotient(quotient);
    let linearity = if metric.family().is_linear() {
        let linearity_seed = seed.map(|s| mix_seeds(s, STAGE_LINEARITY)).unwrap_or(0);
        let index_points = metric.measure().support_sample(8, linearity_seed);
        metric
            .family()
            .verify_linearity(&index_points, &probes, linearity_seed)?;
        Some("verified")
    } else {
        None
    };
    Ok(InducedSetup { metric, probes, linearity })
}

fn induce_params(
    family_spec: &FamilySpec,
    measure_spec: &MeasureSpec,
    base_spec: &KernelSpec,
    points_path: Option<&PathBuf>,
    seed: Option<u64>,
    mc_samples: u64,
    quotient: bool,
) -> Parameters {
    let mut params = Parameters::new();
    params.insert("family".into(), spec_value(family_spec));
    params.insert("measure".into(), spec_value(measure_spec));
    params.insert("base".into(), spec_value(base_spec));
    if let Some(p) = points_path {
        params.insert("points".into(), path_value(p));
    }
    if let Some(seed) = seed {
        params.insert("seed".into(), json!(seed));
    }
    params.insert("mc_samples".into(), json!(mc_samples));
    params.insert("quotient".into(), json!(quotient));
    params
}

pub fn cmd_induce(args: &InduceArgs) -> Result<(Envelope, Artifacts)> {
    let cfg = RunConfig::load_or_default(args.common.config.as_deref())?;
    let family_spec = cfg
        .family
        .clone()
        .ok_or_else(|| usage("induce needs config.family"))?;
    let measure_spec = cfg
        .measure
        .clone()
        .ok_or_else(|| usage("induce needs config.measure"))?;
    let base_spec = cfg
        .base
        .clone()
        .ok_or_else(|| usage("induce needs config.base (a squared-distance kernel)"))?;
    let points_path = args
        .points
        .clone()
        .or_else(|| cfg.points.clone())
        .ok_or_else(|| usage("induce needs --points (CSV, one point per row)"))?;
    let probes = csvio::read_points(&points_path)?;
    let seed = args.common.seed.or(cfg.seed).ok_or_else(|| {
        usage("induce needs --seed or config.seed: separation and axiom checks are randomized")
    })?;
    let tolerance = args.common.tolerance.or(cfg.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let mc_samples = cfg.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let triple_trials = args.trials.or(cfg.triple_trials).unwrap_or(DEFAULT_TRIPLE_TRIALS);
    let support_count = cfg.support_count.unwrap_or(DEFAULT_SUPPORT_COUNT);
    let quotient = cfg.quotient.unwrap_or(false);
    let require_metric = args.require_metric || cfg.require_metric.unwrap_or(false);

    let setup = setup_induced(
        &family_spec,
        &measure_spec,
        &base_spec,
        probes,
        Some(seed),
        mc_samples,
        quotient,
    )?;
    let induced = distance_matrix(&setup.metric, &setup.probes, None)?;
    let separation = check_separation(
        &setup.metric,
        &setup.probes,
        support_count,
        mix_seeds(seed, STAGE_SEPARATION),
        tolerance,
    )?;
    let axioms = verify_metric_axioms(
        &setup.metric,
        &setup.probes,
        triple_trials,
        mix_seeds(seed, STAGE_AXIOMS),
        tolerance,
    )?;

    let mut params = induce_params(
        &family_spec,
        &measure_spec,
        &base_spec,
        Some(&points_path),
        Some(seed),
        mc_samples,
        quotient,
    );
    params.insert("tolerance".into(), json!(tolerance));
    params.insert("triple_trials".into(), json!(triple_trials));
    params.insert("support_count".into(), json!(support_count));
    params.insert("require_metric".into(), json!(require_metric));

    let mut env = Envelope::new("induce", params);
    env.exit_code = if axioms.verdict == Verdict::Fail {
        2
    } else if separation.verdict == Verdict::Fail && require_metric {
        2
    } else {
        0
    };
    env.linearity = setup.linearity;
    env.separation = Some(CheckDto::from_report(&separation));
    env.axioms = Some(CheckDto::from_report(&axioms));
    env.distance_matrix = Some(matrix_dto(&induced.matrix, induced.max_stderr, induced.clamped));

    let artifacts = Artifacts {
        matrix: Some((
            induced.matrix.labels().to_vec(),
            rows_from_flat(induced.matrix.entries(), induced.matrix.n()),
        )),
        coordinates: None,
    };
    Ok((env, artifacts))
}

// ======================================================================
// embed
// ======================================================================

pub fn cmd_embed(args: &EmbedArgs) -> Result<(Envelope, Artifacts)> {
    let cfg = RunConfig::load_or_default(args.common.config.as_deref())?;
    let tol_rel = args.common.tolerance.or(cfg.tolerance).unwrap_or(DEFAULT_EMBED_TOL_REL);
    let matrix_path = args.matrix.clone().or_else(|| cfg.matrix.clone());

    let mut params = Parameters::new();
    let mut env_matrix_dto = None;
    let matrix = if let Some(path) = matrix_path {
        let (rows, labels) = csvio::read_matrix(&path)?;
        params.insert("matrix".into(), path_value(&path));
        DistanceMatrix::from_rows(&rows, labels)?
    } else if cfg.family.is_some() || cfg.measure.is_some() || cfg.base.is_some() {
        let family_spec = cfg
            .family
            .clone()
            .ok_or_else(|| usage("embed from a config needs config.family"))?;
        let measure_spec = cfg
            .measure
            .clone()
            .ok_or_else(|| usage("embed from a config needs config.measure"))?;
        let base_spec = cfg
            .base
            .clone()
            .ok_or_else(|| usage("embed from a config needs config.base"))?;
        let points_path = args
            .points
            .clone()
            .or_else(|| cfg.points.clone())
            .ok_or_else(|| usage("embed from a config needs --points"))?;
        let probes = csvio::read_points(&points_path)?;
        let seed = args.common.seed.or(cfg.seed);
        let mc_samples = cfg.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES);
        let quotient = cfg.quotient.unwrap_or(false);
        let setup = setup_induced(
            &family_spec,
            &measure_spec,
            &base_spec,
            probes,
            seed,
            mc_samples,
            quotient,
        )?;
        let induced = distance_matrix(&setup.metric, &setup.probes, None)?;
        params = induce_params(
            &family_spec,
            &measure_spec,
            &base_spec,
            Some(&points_path),
            seed,
            mc_samples,
            quotient,
        );
        env_matrix_dto = Some(matrix_dto(&induced.matrix, induced.max_stderr, induced.clamped));
        induced.matrix
    } else {
        return Err(usage(
            "embed needs --matrix (CSV) or an induce configuration (family, measure, base, points)",
        ));
    };
    params.insert("tol_rel".into(), json!(tol_rel));

    let result = schoenberg_embed(&matrix, tol_rel)?;

    let mut env = Envelope::new("embed", params);
    env.exit_code = if result.verdict.is_embeddable() { 0 } else { 2 };
    env.distance_matrix = env_matrix_dto;
    env.embedding = Some(EmbeddingDto::from_result(&result));

    let artifacts = Artifacts {
        matrix: None,
        coordinates: Some((matrix.labels().to_vec(), result.coordinates)),
    };
    Ok((env, artifacts))
}

// ======================================================================
// demo-example1
// ======================================================================

fn default_demo_family() -> FamilySpec {
    FamilySpec { name: "linear-functionals".into(), dim: Some(2), value: None }
}

fn default_demo_measure() -> MeasureSpec {
    MeasureSpec {
        kind: "discrete".into(),
        atoms: Some(vec![
            AtomSpec { point: vec![1.0, 0.0], weight: 0.5 },
            AtomSpec { point: vec![0.0, 1.0], weight: 0.5 },
        ]),
        lo: None,
        hi: None,
        nodes: None,
        distribution: None,
        mean: None,
        std_dev: None,
    }
}

fn random_probes(seed: u64, count: usize, dim: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seeds(seed, STAGE_PROBES));
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect()
}

pub fn cmd_demo(args: &DemoArgs) -> Result<(Envelope, Artifacts)> {
    let cfg = RunConfig::load_or_default(args.common.config.as_deref())?;
    let seed = args.common.seed.or(cfg.seed).ok_or_else(|| {
        usage("demo-example1 needs --seed or config.seed: probes and checks are randomized")
    })?;
    let family_spec = cfg.family.clone().unwrap_or_else(default_demo_family);
    let measure_spec = cfg.measure.clone().unwrap_or_else(default_demo_measure);
    let base_spec = cfg
        .base
        .clone()
        .unwrap_or_else(|| KernelSpec::named("squared-euclidean"));
    let tolerance = args.common.tolerance.or(cfg.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let mc_samples = cfg.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let triple_trials = cfg.triple_trials.unwrap_or(DEFAULT_TRIPLE_TRIALS);
    let support_count = cfg.support_count.unwrap_or(DEFAULT_SUPPORT_COUNT);

    let points_path = args.points.clone().or_else(|| cfg.points.clone());
    let dim = family_spec.dim.unwrap_or(2);
    let probes = match &points_path {
        Some(path) => csvio::read_points(path)?,
        None => random_probes(seed, 6, dim),
    };

    // Clones feed the inner-product view after the metric takes ownership.
    let family = build_family(&family_spec)?;
    let measure = build_measure(&measure_spec, Some(mix_seeds(seed, STAGE_SAMPLER)))?;
    let policy = IntegrationPolicy {
        mc_samples,
        seed: mix_seeds(seed, STAGE_INTEGRATION),
    };

    let setup = setup_induced(
        &family_spec,
        &measure_spec,
        &base_spec,
        probes,
        Some(seed),
        mc_samples,
        false,
    )?;
    let induced = distance_matrix(&setup.metric, &setup.probes, None)?;
    let separation = check_separation(
        &setup.metric,
        &setup.probes,
        support_count,
        mix_seeds(seed, STAGE_SEPARATION),
        tolerance,
    )?;
    let axioms = verify_metric_axioms(
        &setup.metric,
        &setup.probes,
        triple_trials,
        mix_seeds(seed, STAGE_AXIOMS),
        tolerance,
    )?;
    let embedding = schoenberg_embed(&induced.matrix, DEFAULT_EMBED_TOL_REL)?;

    let mut polarization_ok = true;
    let inner_dto = if family.is_linear() {
        let space = inner_product_space(family, measure, policy)?;
        let n = setup.probes.len();
        let gram = rows_from_flat(&space.gram(&setup.probes)?, n);
        let mut polarization_residual = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let r = space.polarization_residual(&setup.probes[i], &setup.probes[j])?;
                polarization_residual = polarization_residual.max(r);
            }
        }
        polarization_ok = polarization_residual <= POLARIZATION_TOLERANCE;
        let orthogonal_fixture = if dim == 2 {
            let est = space.inner(&vec![2.0, 0.0], &vec![0.0, 3.0])?;
            Some(EstimateDto { value: est.value, stderr: est.stderr })
        } else {
            None
        };
        Some(InnerProductDto {
            labels: induced.matrix.labels().to_vec(),
            gram,
            polarization_residual,
            orthogonal_fixture,
        })
    } else {
        None
    };

    let mut params = induce_params(
        &family_spec,
        &measure_spec,
        &base_spec,
        points_path.as_ref(),
        Some(seed),
        mc_samples,
        false,
    );
    params.insert("tolerance".into(), json!(tolerance));
    params.insert("triple_trials".into(), json!(triple_trials));
    params.insert("support_count".into(), json!(support_count));
    if points_path.is_none() {
        params.insert("random_probes".into(), json!(6));
    }

    let chain_holds = separation.verdict != Verdict::Fail
        && axioms.verdict != Verdict::Fail
        && embedding.verdict.is_embeddable()
        && polarization_ok;

    let mut env = Envelope::new("demo-example1", params);
    env.exit_code = if chain_holds { 0 } else { 2 };
    env.linearity = setup.linearity;
    env.separation = Some(CheckDto::from_report(&separation));
    env.axioms = Some(CheckDto::from_report(&axioms));
    env.distance_matrix = Some(matrix_dto(&induced.matrix, induced.max_stderr, induced.clamped));
    env.inner_product = inner_dto;
    env.embedding = Some(EmbeddingDto::from_result(&embedding));

    let artifacts = Artifacts {
        matrix: Some((
            induced.matrix.labels().to_vec(),
            rows_from_flat(induced.matrix.entries(), induced.matrix.n()),
        )),
        coordinates: Some((induced.matrix.labels().to_vec(), embedding.coordinates)),
    };
    Ok((env, artifacts))
}
