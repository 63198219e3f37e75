use rayon::prelude::*;

use super::config::{
    D1ExactConfig, ErosionLimitConfig, ErosionMethod, ExperimentConfig,
    InclusionConvergenceConfig, Tolerances, TwoBallAnomalyConfig, VolumeMomentsConfig,
    ZeroCellSelfCheckConfig,
};
use super::{verdict, Diagnostic, ExperimentOutput, ResultRow};
use crate::boundary_measures::{
    erosion_mu, erosion_mu_mc, hemisphere_contained, lambda_functional, nu_hat, MonteCarloPlan,
    MuMethod,
};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, ConvexBody, HPolytope, SetModel, VCompact, Vector};
use crate::intersection_model::{
    closed_form_inclusion, empirical_inclusion, realize_xn, MomentModel, VolumeSampler, Window,
};
use crate::samplers::{derive_seed, zero_cell, MuSampler, RngStream, ZeroCellSampler};
use crate::stats::{ks_critical_value, ks_statistic, score_stderr, Estimate};

// Stream-family tags mixed into `derive_seed`; one per independent
// computation of a run.
const TAG_EROSION: u64 = 1;
const TAG_INCLUSION: u64 = 2;
const TAG_INCLUSION_MU: u64 = 3;
const TAG_ZERO_CELL: u64 = 4;
const TAG_MOMENT_XN: u64 = 5;
const TAG_MOMENT_Z: u64 = 6;
const TAG_TWO_BALL: u64 = 7;
const TAG_TWO_BALL_INCLUSION: u64 = 8;
const TAG_D1: u64 = 9;

struct Rows<'a> {
    name: &'a str,
    tolerances: &'a Tolerances,
    out: ExperimentOutput,
}

impl<'a> Rows<'a> {
    fn new(name: &'a str, tolerances: &'a Tolerances) -> Self {
        Self {
            name,
            tolerances,
            out: ExperimentOutput::default(),
        }
    }

    /// Appends a row; `series` selects the tolerance override.
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        series: &str,
        label: &str,
        sweep_value: f64,
        est: Estimate,
        reference: f64,
        seed: u64,
        trials: u64,
    ) {
        let threshold = self.tolerances.resolve(series, sweep_value);
        let (z_score, passed) = verdict(est.value, est.stderr, reference, threshold);
        self.out.rows.push(ResultRow {
            experiment: format!("{}:{label}", self.name),
            sweep_value,
            estimate: est.value,
            standard_error: est.stderr,
            reference,
            z_score,
            passed,
            seed,
            trials,
        });
    }

    fn diagnostic(&mut self, key: &str, d: Diagnostic) {
        self.out.diagnostics.insert(key.to_string(), d);
    }
}

/// Estimate of a binomial proportion with the score error at `p0`.
fn proportion(successes: u64, trials: u64, p0: f64) -> Estimate {
    Estimate {
        value: successes as f64 / trials as f64,
        stderr: score_stderr(p0.clamp(0.0, 1.0), trials),
    }
}

fn combined(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Runs `cfg` as is; the root seed is taken from the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match cfg {
        ExperimentConfig::ErosionLimit(c) => run_erosion_limit(c),
        ExperimentConfig::InclusionConvergence(c) => run_inclusion_convergence(c),
        ExperimentConfig::ZeroCellSelfCheck(c) => run_zero_cell_self_check(c),
        ExperimentConfig::VolumeMoments(c) => run_volume_moments(c),
        ExperimentConfig::TwoBallAnomaly(c) => run_two_ball_anomaly(c),
        ExperimentConfig::D1Exact(c) => run_d1_exact(c),
    }
}

/// Per `ε` in descending order: `μ(K ∖ K⊖ε^γL)/ε` against `Λ(L)`.
pub fn run_erosion_limit(cfg: &ErosionLimitConfig) -> Result<ExperimentOutput> {
    let (k, spec) = cfg.model.build()?;
    let nu = nu_hat(&k, &spec)?;
    let lambda = lambda_functional(&nu, &cfg.l, spec.alpha())?;
    let mut sweep: Vec<(usize, f64)> = cfg.sweep.iter().copied().enumerate().collect();
    sweep.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    for (i, eps) in sweep {
        let plan = MonteCarloPlan {
            samples: cfg.mc_samples,
            root_seed: derive_seed(cfg.root_seed, &[TAG_EROSION, i as u64]),
        };
        let scaled = eps.powf(spec.gamma());
        let mu = match cfg.method {
            ErosionMethod::Auto => erosion_mu(&k, &spec, &cfg.l, scaled, &plan)?,
            ErosionMethod::MonteCarlo => erosion_mu_mc(&k, &spec, &cfg.l, scaled, &plan)?,
        };
        let (seed, trials) = match mu.method {
            MuMethod::Exact => (0, 0),
            MuMethod::MonteCarlo => (plan.root_seed, plan.samples),
        };
        let est = Estimate {
            value: mu.value / eps,
            stderr: combined(mu.stderr / eps, lambda.stderr),
        };
        rows.push("ratio", "ratio", eps, est, lambda.value, seed, trials);
    }
    Ok(rows.out)
}

/// Per `n`: the empirical inclusion frequency against the finite-`n` closed
/// form and the limit `exp(−Λ(L))`, and the closed form against the limit.
pub fn run_inclusion_convergence(cfg: &InclusionConvergenceConfig) -> Result<ExperimentOutput> {
    let (k, spec) = cfg.model.build()?;
    let nu = nu_hat(&k, &spec)?;
    let lambda = lambda_functional(&nu, &cfg.l, spec.alpha())?;
    let limit = (-lambda.value).exp();
    let limit_se = limit * lambda.stderr;
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    for (i, &n) in cfg.sweep.iter().enumerate() {
        let seed = derive_seed(cfg.root_seed, &[TAG_INCLUSION, i as u64]);
        let plan = MonteCarloPlan {
            samples: cfg.mc_samples,
            root_seed: derive_seed(cfg.root_seed, &[TAG_INCLUSION_MU, i as u64]),
        };
        let emp = empirical_inclusion(&cfg.l, &k, &spec, n, cfg.trials, seed)?;
        let closed = closed_form_inclusion(&k, &spec, &cfg.l, n, &plan)?;
        let x = n as f64;
        let p = proportion(emp.successes, emp.trials, closed.value);
        rows.push(
            "empirical",
            "empirical",
            x,
            Estimate {
                value: p.value,
                stderr: combined(p.stderr, closed.stderr),
            },
            closed.value,
            seed,
            cfg.trials,
        );
        let p = proportion(emp.successes, emp.trials, limit);
        rows.push(
            "empiricalLimit",
            "empiricalLimit",
            x,
            Estimate {
                value: p.value,
                stderr: combined(p.stderr, limit_se),
            },
            limit,
            seed,
            cfg.trials,
        );
        let closed_seed = if closed.stderr > 0.0 { plan.root_seed } else { 0 };
        let closed_trials = if closed.stderr > 0.0 { plan.samples } else { 0 };
        rows.push(
            "closedFormLimit",
            "closedFormLimit",
            x,
            Estimate {
                value: closed.value,
                stderr: combined(closed.stderr, limit_se),
            },
            limit,
            closed_seed,
            closed_trials,
        );
    }
    Ok(rows.out)
}

/// Frequencies of `L ⊆ Z` over sampled cells against `exp(−Λ(L))`, and the
/// fraction of clipped cells containing the origin against 1.
pub fn run_zero_cell_self_check(cfg: &ZeroCellSelfCheckConfig) -> Result<ExperimentOutput> {
    let (nu, alpha) = cfg.intensity.build()?;
    let d = nu.dim();
    let reach = cfg
        .shapes
        .iter()
        .map(VCompact::radius_about_origin)
        .fold(0.0, f64::max);
    let window = match cfg.window {
        Some(w) => w,
        None => {
            let r0 = crate::samplers::default_radius(nu.total_mass(), alpha);
            AxisBox::centered(d, r0.max(reach))
        }
    };
    if reach > window.max_norm() {
        // the hyperplane radius must cover every test set
        return Err(Error::InvalidInput(format!(
            "window reaches {} but a test set reaches {reach}",
            window.max_norm()
        )));
    }
    let sampler = ZeroCellSampler::new(&nu, alpha, Some(window))?;
    let seed = derive_seed(cfg.root_seed, &[TAG_ZERO_CELL]);
    let shapes = &cfg.shapes;
    let per_trial: Vec<(Vec<bool>, bool, bool)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t);
            let batch = sampler.hyperplanes().sample(&mut rng)?;
            let inside = shapes.iter().map(|l| batch.contains_set(l)).collect();
            let cell = zero_cell(&batch, &window, sampler.possibly_unbounded())?;
            Ok((
                inside,
                cell.cell.contains(&Vector::zeros(d)),
                cell.truncated_by_window,
            ))
        })
        .collect::<Result<_>>()?;
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    for (j, l) in shapes.iter().enumerate() {
        let lambda = lambda_functional(&nu, l, alpha)?;
        let reference = (-lambda.value).exp();
        let hits = per_trial.iter().filter(|r| r.0[j]).count() as u64;
        let p = proportion(hits, cfg.trials, reference);
        rows.push(
            "inclusion",
            &format!("inclusion/{j}"),
            l.radius_about_origin(),
            Estimate {
                value: p.value,
                stderr: combined(p.stderr, reference * lambda.stderr),
            },
            reference,
            seed,
            cfg.trials,
        );
    }
    let origin = per_trial.iter().filter(|r| r.1).count() as u64;
    rows.push(
        "origin",
        "origin",
        0.0,
        Estimate::exact(origin as f64 / cfg.trials as f64),
        1.0,
        seed,
        cfg.trials,
    );
    let truncated = per_trial.iter().filter(|r| r.2).count();
    rows.diagnostic(
        "possiblyUnbounded",
        Diagnostic::Flag(sampler.possibly_unbounded()),
    );
    rows.diagnostic(
        "truncatedFraction",
        Diagnostic::Value(truncated as f64 / cfg.trials as f64),
    );
    Ok(rows.out)
}

fn moment_estimates(volumes: &[Vec<f64>], orders: &[u32]) -> Vec<Estimate> {
    let totals: Vec<f64> = volumes.iter().map(|v| v.iter().sum()).collect();
    orders
        .iter()
        .map(|&m| {
            let powers: Vec<f64> = totals.iter().map(|v| v.powi(m as i32)).collect();
            Estimate::from_samples(&powers)
        })
        .collect()
}

/// `E V_d(n^γXₙ ∩ W)^m` against `E V_d(Z ∩ W)^m`, and both against known
/// values when given. Zero-cell rows have sweep value `inf`.
pub fn run_volume_moments(cfg: &VolumeMomentsConfig) -> Result<ExperimentOutput> {
    let (k, spec) = cfg.model.build()?;
    let (nu, alpha) = match &cfg.intensity {
        Some(i) => i.build()?,
        None => (nu_hat(&k, &spec)?, spec.alpha()),
    };
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    let z_trials = cfg.z_trials.unwrap_or(cfg.trials);
    let z_seed = derive_seed(cfg.root_seed, &[TAG_MOMENT_Z]);
    let z_sampler = VolumeSampler::new(&MomentModel::Z { nu, alpha }, &cfg.window)?;
    let z = moment_estimates(&z_sampler.run(z_trials, z_seed)?, &cfg.orders);
    let known = |m: u32| cfg.references.iter().find(|r| r.m == m).map(|r| r.value);
    for (est, &m) in z.iter().zip(&cfg.orders) {
        if let Some(target) = known(m) {
            rows.push("z", &format!("z/m={m}"), f64::INFINITY, *est, target, z_seed, z_trials);
        }
    }
    for (i, &n) in cfg.sweep.iter().enumerate() {
        let seed = derive_seed(cfg.root_seed, &[TAG_MOMENT_XN, i as u64]);
        let model = MomentModel::Xn {
            k: k.clone(),
            spec: spec.clone(),
            n,
            probes: cfg.probes,
        };
        let xn = moment_estimates(
            &VolumeSampler::new(&model, &cfg.window)?.run(cfg.trials, seed)?,
            &cfg.orders,
        );
        for ((x, zm), &m) in xn.iter().zip(&z).zip(&cfg.orders) {
            rows.push(
                "xnVsZ",
                &format!("xnVsZ/m={m}"),
                n as f64,
                Estimate {
                    value: x.value,
                    stderr: combined(x.stderr, zm.stderr),
                },
                zm.value,
                seed,
                cfg.trials,
            );
            if let Some(target) = known(m) {
                rows.push("xn", &format!("xn/m={m}"), n as f64, *x, target, seed, cfg.trials);
            }
        }
    }
    Ok(rows.out)
}

/// `Σ num / Σ den` with the delta-method standard error.
fn ratio_of_means(num: &[f64], den: &[f64]) -> Estimate {
    let t = num.len() as f64;
    let sd: f64 = den.iter().sum();
    let r = num.iter().sum::<f64>() / sd;
    let resid: Vec<f64> = num.iter().zip(den).map(|(a, b)| a - r * b).collect();
    let spread = Estimate::from_samples(&resid).stderr;
    Estimate {
        value: r,
        stderr: spread / (sd / t),
    }
}

/// Mean volume of the scaled two-ball intersection over both component
/// windows against the single-ball one (reference 2), the same over the
/// first window only (reference 1), and inclusion of small balls against
/// the single-ball zero-cell law.
pub fn run_two_ball_anomaly(cfg: &TwoBallAnomalyConfig) -> Result<ExperimentOutput> {
    let (k, spec, single, single_spec) = cfg.models()?;
    let nu = nu_hat(&single, &single_spec)?;
    let d = cfg.dim;
    let hw = cfg.window_half_width;
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    for (i, &n) in cfg.sweep.iter().enumerate() {
        let seed = derive_seed(cfg.root_seed, &[TAG_TWO_BALL, i as u64]);
        let x = n as f64;
        let near = AxisBox::centered(d, hw);
        let shift = Vector::basis(d, 0).scale(cfg.offset * x);
        let far = AxisBox::new(near.lo + shift, near.hi + shift)?;
        let full = Window::new(vec![near, far])?;
        let first = Window::single(near)?;
        // identical seeds: the first-window probes coincide in both runs
        let union = VolumeSampler::new(
            &MomentModel::Xn {
                k: k.clone(),
                spec: spec.clone(),
                n,
                probes: cfg.probes,
            },
            &full,
        )?
        .run(cfg.trials, seed)?;
        let lone = VolumeSampler::new(
            &MomentModel::Xn {
                k: single.clone(),
                spec: single_spec.clone(),
                n,
                probes: cfg.probes,
            },
            &first,
        )?
        .run(cfg.trials, seed)?;
        let den: Vec<f64> = lone.iter().map(|v| v[0]).collect();
        let both: Vec<f64> = union.iter().map(|v| v.iter().sum()).collect();
        let near_only: Vec<f64> = union.iter().map(|v| v[0]).collect();
        rows.push("ratio", "ratio", x, ratio_of_means(&both, &den), 2.0, seed, cfg.trials);
        rows.push(
            "firstWindowRatio",
            "firstWindowRatio",
            x,
            ratio_of_means(&near_only, &den),
            1.0,
            seed,
            cfg.trials,
        );
        let inc_trials = cfg.inclusion_trials.unwrap_or(cfg.trials);
        for (j, &rho) in cfg.inclusion_radii.iter().enumerate() {
            let l = VCompact::centered_ball(d, rho)?;
            let lambda = lambda_functional(&nu, &l, single_spec.alpha())?;
            let reference = (-lambda.value).exp();
            let s = derive_seed(cfg.root_seed, &[TAG_TWO_BALL_INCLUSION, i as u64, j as u64]);
            let emp = empirical_inclusion(&l, &k, &spec, n, inc_trials, s)?;
            let p = proportion(emp.successes, emp.trials, reference);
            rows.push(
                "inclusion",
                &format!("inclusion/rho={rho}"),
                x,
                Estimate {
                    value: p.value,
                    stderr: combined(p.stderr, reference * lambda.stderr),
                },
                reference,
                s,
                inc_trials,
            );
        }
    }
    rows.diagnostic("possiblyUnbounded", Diagnostic::Flag(hemisphere_contained(&nu)));
    Ok(rows.out)
}

/// The unit interval with uniform `μ`: the realized `n·Xₙ` against the
/// extreme order statistics, KS tests of `n·min ξ` against its exact law
/// and against `Exp(1)`, and inclusion of `[−ρ, ρ]` against `(1 − 2ρ/n)ⁿ`.
pub fn run_d1_exact(cfg: &D1ExactConfig) -> Result<ExperimentOutput> {
    let interval = HPolytope::axis_box(&Vector::new1(0.0), &Vector::new1(1.0))?;
    let k = SetModel::single(ConvexBody::Polytope(interval.clone()))?;
    let sampler = MuSampler::new(&k, &crate::boundary_measures::BoundaryDensitySpec::uniform(&k)?)?;
    let mut rows = Rows::new(&cfg.name, &cfg.tolerances);
    let d_crit = ks_critical_value(cfg.ks_level, cfg.trials as usize);
    for (i, &n) in cfg.sweep.iter().enumerate() {
        let seed = derive_seed(cfg.root_seed, &[TAG_D1, i as u64]);
        let x = n as f64;
        // (n·min ξ, n·(1 − max ξ), realization agrees)
        let per_trial: Vec<(f64, f64, bool)> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(seed, t);
                let pts = (0..n)
                    .map(|_| sampler.sample(&mut rng))
                    .collect::<Result<Vec<_>>>()?;
                let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                    (a.min(p.get(0)), b.max(p.get(0)))
                });
                let cell = realize_xn(&interval, &pts)?.cell;
                let mut ok = true;
                for h in cell.halfspaces() {
                    let expected = if h.normal.get(0) > 0.0 { 1.0 - hi } else { lo };
                    ok &= (h.offset - expected).abs() <= 1e-15;
                }
                Ok((x * lo, x * (1.0 - hi), ok && cell.halfspaces().len() == 2))
            })
            .collect::<Result<_>>()?;
        let trials = cfg.trials;
        let bad = per_trial.iter().filter(|r| !r.2).count();
        rows.push(
            "interval",
            "interval",
            x,
            Estimate::exact(bad as f64 / trials as f64),
            0.0,
            seed,
            trials,
        );
        let mins: Vec<f64> = per_trial.iter().map(|r| r.0).collect();
        // a KS row passes iff D <= the critical value at ksLevel
        let ks_scale = |series: &str| {
            let z = cfg.tolerances.resolve(series, x).z;
            if z > 0.0 {
                d_crit / z
            } else {
                d_crit
            }
        };
        let finite = ks_statistic(&mins, |s| 1.0 - (1.0 - (s / x).clamp(0.0, 1.0)).powf(x));
        rows.push(
            "ksFinite",
            "ksFinite",
            x,
            Estimate {
                value: finite,
                stderr: ks_scale("ksFinite"),
            },
            0.0,
            seed,
            trials,
        );
        let limit = ks_statistic(&mins, |s| 1.0 - (-s.max(0.0)).exp());
        rows.push(
            "ksLimit",
            "ksLimit",
            x,
            Estimate {
                value: limit,
                stderr: ks_scale("ksLimit"),
            },
            0.0,
            seed,
            trials,
        );
        for &rho in &cfg.radii {
            let reference = if 2.0 * rho < x {
                (x * (-2.0 * rho / x).ln_1p()).exp()
            } else {
                0.0
            };
            let hits = per_trial
                .iter()
                .filter(|r| r.0 >= rho && r.1 >= rho)
                .count() as u64;
            rows.push(
                "inclusion",
                &format!("inclusion/rho={rho}"),
                x,
                proportion(hits, trials, reference),
                reference,
                seed,
                trials,
            );
        }
    }
    Ok(rows.out)
}
