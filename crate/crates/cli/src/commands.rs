//! Subcommand implementations.

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use pisubspace::diagnostics::{
    consistency_check, eigenvector_sensitivities, log_ridge_matrix, summary_1d, summary_2d,
    summary_csv, summary_svg, SummarySource,
};
use pisubspace::ingest::{load_samples, save_samples_as, Coordinates};
use pisubspace::models::{
    build_model, finite_difference_gradient, CorruptGradient, ModelFunction, ModelKind,
    ParameterSpace, SpaceConfig,
};
use pisubspace::seeding::{uniform_point, Purpose};
use pisubspace::subspace::{
    activity_identity_check, bootstrap_spectrum, eigenvalue_csv, estimate_c_from_samples,
    estimate_c_monte_carlo, estimate_c_quadrature, select_dimension, ActivityReport,
    CMatrixEstimate, GradientSampleSet, Selection, Spectrum, SpectrumReport,
};
use pisubspace::units::{verify_pi_groups, PiReport, QuantitySystem};
use serde::Serialize;

use crate::args::{CheckArgs, PiArgs, SampleArgs, Source, SubspaceArgs, SummaryArgs};
use crate::output::OutDir;

pub const DEFAULT_QUADRATURE: usize = 11;

#[derive(Debug)]
pub struct CliError {
    user: bool,
    message: String,
}

impl CliError {
    pub fn user(message: impl Into<String>) -> Self {
        Self {
            user: true,
            message: message.into(),
        }
    }

    pub fn internal(message: impl fmt::Display) -> Self {
        Self {
            user: false,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.user {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<pisubspace::Error> for CliError {
    fn from(e: pisubspace::Error) -> Self {
        Self {
            user: e.is_user_error(),
            message: e.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load_system(name: &str) -> Result<QuantitySystem> {
    let path = Path::new(name);
    if !path.exists() {
        let builtin = match name {
            "mhd_u_avg" => Some(QuantitySystem::mhd_velocity()),
            "mhd_b_ind" => Some(QuantitySystem::mhd_induced_field()),
            "mhd_b_ind_mu0" => Some(QuantitySystem::mhd_induced_field_with_permeability()),
            "pendulum" => Some(QuantitySystem::pendulum()),
            _ => None,
        };
        return builtin.ok_or_else(|| {
            CliError::user(format!(
                "quantity system `{name}` is neither a file nor a bundled system"
            ))
        });
    }
    Ok(QuantitySystem::load(path)?)
}

pub fn pi(a: &PiArgs) -> Result<ExitCode> {
    let system = load_system(&a.system)?;
    let dm = system.dimension_matrix()?;
    let set = system.pi_groups()?;
    let audit = a.verify.then(|| verify_pi_groups(&set, &dm.d, &dm.u));
    let failed = audit.as_ref().is_some_and(|x| !x.passed());
    let report = PiReport::new(&dm, &set, audit);
    let out = OutDir::create(&a.common.out, a.common.no_timestamp)?;
    out.json("pi.json", &report)?;
    out.stamped_text("pi.txt", &report.to_text())?;
    print!("{}", report.to_text());
    if failed {
        eprintln!("error: Pi-group audit failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// The gradient source resolved from flags.
enum Resolved {
    Model(Box<dyn ModelFunction>),
    Samples(GradientSampleSet),
}

fn parse_model(name: &str) -> Result<ModelKind> {
    match ModelKind::parse(name) {
        Some(ModelKind::External) | None => Err(CliError::user(format!(
            "unknown model `{name}` (expected hartmann_u_avg or hartmann_b_ind)"
        ))),
        Some(k) => Ok(k),
    }
}

fn resolve(s: &Source) -> Result<Resolved> {
    let config = s.space.as_deref().map(SpaceConfig::load).transpose()?;
    if let Some(path) = &s.samples {
        if s.model.is_some() {
            return Err(CliError::user("give either --samples or --model, not both"));
        }
        if s.quadrature.is_some() || s.mc.is_some() {
            return Err(CliError::user(
                "--quadrature and --mc need a model; sample files are used as given",
            ));
        }
        let expected = config.as_ref().map(|c| &c.space);
        return Ok(Resolved::Samples(load_samples(path, expected)?));
    }
    let kind = match (&s.model, &config) {
        (Some(m), _) => parse_model(m)?,
        (None, Some(SpaceConfig { model: Some(k), .. })) => match k {
            ModelKind::External => {
                return Err(CliError::user(
                    "space file names an external model; supply gradients with --samples",
                ))
            }
            k => *k,
        },
        _ => {
            return Err(CliError::user(
                "no gradient source: give --model, a --space file naming a model, or --samples",
            ))
        }
    };
    let space = config
        .map(|c| c.space)
        .unwrap_or_else(ParameterSpace::hartmann);
    Ok(Resolved::Model(build_model(kind, space)?))
}

fn selection(dim: &str, m: usize) -> Result<Selection> {
    if dim == "auto" {
        return Ok(Selection::LargestGap {
            max_n: m.saturating_sub(1),
        });
    }
    dim.parse::<usize>()
        .map(|n| Selection::Explicit { n })
        .map_err(|_| CliError::user(format!("--dim must be a number or `auto`, got `{dim}`")))
}

struct Estimated {
    estimate: CMatrixEstimate,
    samples: Option<GradientSampleSet>,
    model_name: String,
    space: ParameterSpace,
}

fn estimate(s: &Source, resolved: &Resolved) -> Result<Estimated> {
    match resolved {
        Resolved::Samples(set) => Ok(Estimated {
            estimate: estimate_c_from_samples(set)?,
            samples: Some(set.clone()),
            model_name: set.provenance.model.clone(),
            space: set.space.clone(),
        }),
        Resolved::Model(model) => {
            let (estimate, samples) = match (s.mc, s.quadrature) {
                (Some(_), Some(_)) => {
                    return Err(CliError::user("give either --mc or --quadrature, not both"))
                }
                (Some(m), None) => {
                    let seed = s
                        .seed
                        .ok_or_else(|| CliError::user("--mc requires --seed"))?;
                    let (c, set) = estimate_c_monte_carlo(model.as_ref(), m, seed)?;
                    (c, Some(set))
                }
                (None, q) => (
                    estimate_c_quadrature(
                        model.as_ref(),
                        q.unwrap_or(DEFAULT_QUADRATURE),
                        s.force,
                    )?,
                    None,
                ),
            };
            Ok(Estimated {
                estimate,
                samples,
                model_name: model.name().to_string(),
                space: model.space().clone(),
            })
        }
    }
}

pub fn subspace(a: &SubspaceArgs) -> Result<ExitCode> {
    let resolved = resolve(&a.source)?;
    let est = estimate(&a.source, &resolved)?;
    let mut spectrum = est.estimate.spectrum()?;
    if let Some(reps) = a.bootstrap {
        let seed = a
            .source
            .seed
            .ok_or_else(|| CliError::user("--bootstrap requires --seed"))?;
        let set = est.samples.as_ref().ok_or_else(|| {
            CliError::user("--bootstrap needs gradient samples (--mc or --samples), not quadrature")
        })?;
        spectrum = bootstrap_spectrum(set, reps, seed)?.0;
    }
    let m = spectrum.dim();
    let sub = select_dimension(&spectrum, selection(&a.source.dim, m)?)?;
    let mut report =
        SpectrumReport::new(&est.model_name, &est.space, &est.estimate, &spectrum, &sub);
    if let Some(name) = &a.system {
        let system = load_system(name)?;
        let ridge = log_ridge_matrix(&system.pi_groups()?)?;
        let restricted = ridge.restrict_to_space(&est.space)?;
        report.consistency = Some(consistency_check(
            &spectrum,
            &est.space,
            &restricted,
            a.zero_tol,
        )?);
    }
    let names: Vec<String> = est.space.names().into_iter().map(String::from).collect();
    let sens = eigenvector_sensitivities(&spectrum, sub.n, &names)?;

    let out = OutDir::create(&a.common.out, a.common.no_timestamp)?;
    out.json("spectrum.json", &report)?;
    out.text("eigenvalues.csv", &eigenvalue_csv(&spectrum))?;
    out.json("sensitivity.json", &sens)?;
    out.text("sensitivity.txt", &sens.to_text())?;

    println!("model {}, m = {m}, selected n = {}", est.model_name, sub.n);
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        println!("  lambda_{} = {l:.6e}", i + 1);
    }
    print!("{}", sens.to_text());
    if let Some(c) = &report.consistency {
        println!(
            "consistency: {} nonzero eigenvalues <= rank {}: {}; containment distance {:.2e}",
            c.nonzero_eigenvalues, c.restricted_rank, c.count_ok, c.containment_distance
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn spectrum_for(s: &Source, resolved: &Resolved) -> Result<Spectrum> {
    Ok(estimate(s, resolved)?.estimate.spectrum()?)
}

pub fn summary(a: &SummaryArgs) -> Result<ExitCode> {
    if a.plots.is_empty() || a.plots.iter().any(|p| !(1..=2).contains(p)) {
        return Err(CliError::user("--plots takes 1, 2, or 1,2"));
    }
    let resolved = resolve(&a.source)?;
    let spectrum = spectrum_for(&a.source, &resolved)?;
    let sub = select_dimension(&spectrum, selection(&a.source.dim, spectrum.dim())?)?;
    if a.plots.contains(&2) && sub.n < 2 {
        return Err(CliError::user(format!(
            "a 2-D summary needs an active subspace of dimension >= 2, but n = {}; use --plots 1 or --dim 2",
            sub.n
        )));
    }
    let seed = a.source.seed;
    let source = || -> Result<SummarySource<'_>> {
        Ok(match &resolved {
            Resolved::Samples(set) => SummarySource::Samples(set),
            Resolved::Model(model) => SummarySource::Draw {
                model: model.as_ref(),
                count: a.count,
                seed: seed.ok_or_else(|| CliError::user("summary draws require --seed"))?,
            },
        })
    };
    let out = OutDir::create(&a.common.out, a.common.no_timestamp)?;
    let title = match &resolved {
        Resolved::Samples(set) => set.provenance.model.clone(),
        Resolved::Model(m) => m.name().to_string(),
    };
    let w1 = &sub.w1;
    for &p in &a.plots {
        let data = if p == 1 {
            summary_1d(source()?, w1)?
        } else {
            summary_2d(source()?, w1)?
        };
        out.text(&format!("summary{p}.csv"), &summary_csv(&data))?;
        out.text(
            &format!("summary{p}.svg"),
            &summary_svg(&data, &format!("{title}: {p}-D summary")),
        )?;
        println!("summary{p}: {} rows", data.len());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GradientCheck {
    points: usize,
    step: f64,
    tolerance: f64,
    max_relative_error: f64,
    worst_point: usize,
    worst_component: usize,
    passed: bool,
}

#[derive(Serialize)]
struct CheckReport {
    model: String,
    seed: u64,
    gradient: GradientCheck,
    activity: ActivityReport,
    identity_tolerance: f64,
    activity_passed: bool,
    passed: bool,
}

pub fn check(a: &CheckArgs) -> Result<ExitCode> {
    let model = match resolve(&a.source)? {
        Resolved::Model(m) => m,
        Resolved::Samples(_) => {
            return Err(CliError::user("check needs a model, not a sample file"))
        }
    };
    let seed = a
        .source
        .seed
        .ok_or_else(|| CliError::user("check draws random points and requires --seed"))?;
    let model: Box<dyn ModelFunction> = match a.corrupt_gradient {
        Some(i) => {
            let g = model.gradient(&vec![0.0; model.dim()])?;
            let offset = 1e-3 * g.iter().fold(0.0f64, |x, y| x.max(y.abs())).max(1.0);
            Box::new(CorruptGradient::new(model, i, offset)?)
        }
        None => model,
    };
    let m = model.dim();
    let mut worst = (0.0f64, 0, 0);
    for p in 0..a.count {
        let xi = uniform_point(seed, Purpose::GradientCheck, p as u64, m);
        let g = model.gradient(&xi)?;
        let fd = finite_difference_gradient(|x| model.value(x), &xi, a.step)?;
        let scale = g.iter().chain(&fd).fold(0.0f64, |x, y| x.max(y.abs()));
        for (i, (u, v)) in g.iter().zip(&fd).enumerate() {
            let err = if scale > 0.0 {
                (u - v).abs() / scale
            } else {
                0.0
            };
            if err > worst.0 {
                worst = (err, p, i);
            }
        }
    }
    let gradient = GradientCheck {
        points: a.count,
        step: a.step,
        tolerance: a.tol,
        max_relative_error: worst.0,
        worst_point: worst.1,
        worst_component: worst.2,
        passed: worst.0 < a.tol,
    };
    let q = a.source.quadrature.unwrap_or(DEFAULT_QUADRATURE);
    let spectrum = estimate_c_quadrature(model.as_ref(), q, a.source.force)?.spectrum()?;
    let n = match selection(&a.source.dim, m)? {
        Selection::Explicit { n } => n,
        s => select_dimension(&spectrum, s)?.n,
    };
    let activity = activity_identity_check(model.as_ref(), &spectrum, n, q)?;
    let activity_passed = activity.max_residual() < a.identity_tol;
    let report = CheckReport {
        model: model.name().to_string(),
        seed,
        passed: gradient.passed && activity_passed,
        gradient,
        activity,
        identity_tolerance: a.identity_tol,
        activity_passed,
    };
    let out = OutDir::create(&a.common.out, a.common.no_timestamp)?;
    out.json("check.json", &report)?;
    println!(
        "gradient check: max relative error {:.2e} (tolerance {:.1e}) at point {}, component {}: {}",
        report.gradient.max_relative_error,
        a.tol,
        report.gradient.worst_point,
        report.gradient.worst_component,
        if report.gradient.passed { "pass" } else { "FAIL" }
    );
    println!(
        "activity identity (n = {n}): residuals {:.2e} / {:.2e} (tolerance {:.1e}): {}",
        report.activity.active_residual,
        report.activity.inactive_residual,
        a.identity_tol,
        if activity_passed { "pass" } else { "FAIL" }
    );
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        if !report.gradient.passed {
            eprintln!(
                "error: gradient check failed in component {}",
                report.gradient.worst_component
            );
        }
        Ok(ExitCode::from(1))
    }
}

pub fn sample(a: &SampleArgs) -> Result<ExitCode> {
    let source = Source {
        model: a.model.clone(),
        space: a.space.clone(),
        samples: None,
        quadrature: None,
        mc: Some(a.mc),
        seed: Some(a.seed),
        force: false,
        dim: "auto".into(),
    };
    let model = match resolve(&source)? {
        Resolved::Model(m) => m,
        Resolved::Samples(_) => unreachable!("no sample file given"),
    };
    if a.mc == 0 {
        return Err(CliError::user("--mc must be at least 1"));
    }
    let set = GradientSampleSet::draw(model.as_ref(), a.mc, a.seed)?;
    let coords = if a.physical {
        Coordinates::Physical
    } else {
        Coordinates::NormalizedLog
    };
    save_samples_as(&set, &a.file, coords)?;
    println!("wrote {} samples to {}", set.len(), a.file.display());
    Ok(ExitCode::SUCCESS)
}
