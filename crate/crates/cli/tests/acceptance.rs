//! Acceptance suite: one PASS/FAIL line per criterion. Targets are computed
//! here from independent oracles, never read back from the rows under test.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use zerocell::boundary_measures::{
    hemisphere_contained, nu_hat, t_bounds, Atom, BoundaryDensitySpec, DirectionalIntensity,
    ReachData,
};
use zerocell::experiments::{run_experiment, ExperimentOutput, ResultRow};
use zerocell::geometry::{ConvexBody, HPolytope, SetModel, Vector};
use zerocell::stats::wilson_interval;
use zerocell_cli::parse_config;

type Outcome = Result<String, String>;

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run_config(name: &str) -> Result<ExperimentOutput, String> {
    let text = fs::read_to_string(config_path(name)).map_err(|e| format!("{name}: {e}"))?;
    let (cfg, _) = parse_config(&text).map_err(|e| format!("{name}: {e}"))?;
    run_experiment(&cfg).map_err(|e| format!("{name}: {e}"))
}

fn row<'a>(out: &'a ExperimentOutput, label: &str, sweep: f64) -> Result<&'a ResultRow, String> {
    out.rows
        .iter()
        .find(|r| r.series() == label && r.sweep_value == sweep)
        .ok_or_else(|| format!("no row {label} at {sweep}"))
}

/// `p0` inside the Wilson interval at 4σ of the row's proportion.
fn wilson4(r: &ResultRow, p0: f64) -> Result<(f64, f64), String> {
    let successes = (r.estimate * r.trials as f64).round() as u64;
    let (lo, hi) = wilson_interval(successes, r.trials, 4.0);
    if lo <= p0 && p0 <= hi {
        Ok((lo, hi))
    } else {
        Err(format!(
            "{} = {} ({} trials): Wilson 4σ [{lo:.6}, {hi:.6}] misses {p0:.6}",
            r.experiment, r.estimate, r.trials
        ))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let out = run_config("erosion-square.json")?;
    let mut worst: f64 = 0.0;
    for k in 4..=14 {
        let eps = 2f64.powi(-k);
        let r = row(&out, "ratio", eps)?;
        ensure(r.standard_error == 0.0 && r.trials == 0, || {
            format!("ε = 2^-{k}: not on the exact path")
        })?;
        let closed = 4.0 - 4.0 * eps;
        let dev = (r.estimate - closed).abs().max(((r.reference - r.estimate) - 4.0 * eps).abs());
        ensure((r.reference - 4.0).abs() <= 1e-12, || format!("Λ = {}", r.reference))?;
        ensure(dev <= 1e-12, || format!("ε = 2^-{k}: estimate {} vs {closed}", r.estimate))?;
        worst = worst.max(dev);
    }
    Ok(format!("k = 4..14 exact, max |Δ| from 4 - 4ε = {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let out = run_config("erosion-disk-radial.json")?;
    let r = row(&out, "ratio", 1e-3)?;
    // c₁ = 1 / ∫_disk (1 − |x|) dx by midpoint quadrature in the radius
    let m = 1_000_000;
    let integral: f64 = (0..m)
        .map(|i| {
            let t = (i as f64 + 0.5) / m as f64;
            2.0 * PI * t * (1.0 - t) / m as f64
        })
        .sum();
    let c1 = 1.0 / integral;
    let rho: f64 = 0.5;
    let lambda = 2.0 * PI * c1 * rho * rho / 2.0;
    ensure((c1 - 3.0 / PI).abs() < 1e-9, || format!("c₁ = {c1}"))?;
    ensure(r.trials == 1_000_000, || format!("{} MC points", r.trials))?;
    let z = (r.estimate - lambda) / r.standard_error;
    ensure(z.abs() <= 4.0, || {
        format!("estimate {} vs 3ρ² = {lambda}, z = {z:.2}", r.estimate)
    })?;
    Ok(format!("estimate {:.5} vs 3ρ² = {lambda:.5}, z = {z:.2}", r.estimate))
}

fn criterion_3() -> Outcome {
    let out = run_config("inclusion-d1.json")?;
    let closed = row(&out, "closedFormLimit", 1e4)?;
    let oracle = (1.0f64 - 1e-4).powi(10_000);
    ensure((closed.estimate - oracle).abs() <= 1e-12, || {
        format!("closed form {} vs (1 - 1e-4)^1e4 = {oracle}", closed.estimate)
    })?;
    let gap = (closed.estimate - (-1f64).exp()).abs();
    ensure(gap < 1e-4, || format!("|closed form - e^-1| = {gap:.3e}"))?;
    let emp = row(&out, "empirical", 1e3)?;
    ensure(emp.trials == 100_000, || format!("{} trials", emp.trials))?;
    let target = (1.0f64 - 1e-3).powi(1000);
    let (lo, hi) = wilson4(emp, target)?;
    Ok(format!(
        "|closed(1e4) - e^-1| = {gap:.2e}; empirical(1e3) {} in [{lo:.5}, {hi:.5}] ∋ {target:.5}",
        emp.estimate
    ))
}

fn criterion_4() -> Outcome {
    let out = run_config("inclusion-square.json")?;
    let emp = row(&out, "empirical", 1e4)?;
    ensure(emp.trials == 10_000, || format!("{} trials", emp.trials))?;
    let limit = (-1f64).exp();
    let finite = (1.0f64 - 0.5 / 1e4).powi(20_000);
    wilson4(emp, limit)?;
    let (lo, hi) = wilson4(emp, finite)?;
    Ok(format!(
        "p̂ = {} with Wilson 4σ [{lo:.5}, {hi:.5}] ∋ e^-1 = {limit:.5}, (1-2ρ/n)^2n = {finite:.5}",
        emp.estimate
    ))
}

fn criterion_5() -> Outcome {
    let out = run_config("zerocell-square.json")?;
    let mut parts = Vec::new();
    for rho in [0.1f64, 0.25, 0.5] {
        let r = out
            .rows
            .iter()
            .find(|r| r.series().starts_with("inclusion") && r.sweep_value == rho)
            .ok_or_else(|| format!("no inclusion row for ρ = {rho}"))?;
        ensure(r.trials == 10_000, || format!("{} cells", r.trials))?;
        wilson4(r, (-4.0 * rho).exp())?;
        parts.push(format!("ρ={rho}: {:.4} vs {:.4}", r.estimate, (-4.0 * rho).exp()));
    }
    let origin = row(&out, "origin", 0.0)?;
    ensure(origin.estimate == 1.0, || format!("origin in {} of cells", origin.estimate))?;
    Ok(format!("{}; origin in 100% of cells", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let out = run_config("moments-d1.json")?;
    let target = 2.0 * (1.0 - (-1f64).exp());
    let mut parts = Vec::new();
    for (label, sweep) in [("z/m=1", f64::INFINITY), ("xn/m=1", 1e4)] {
        let r = row(&out, label, sweep)?;
        let z = (r.estimate - target) / r.standard_error;
        ensure(z.abs() <= 4.0, || {
            format!("{label}: {} vs {target}, z = {z:.2}", r.estimate)
        })?;
        parts.push(format!("{label} {:.5} (z = {z:.2})", r.estimate));
    }
    Ok(format!("{} vs 2(1-e^-1) = {target:.5}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let tiny = 2f64.powi(-20);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for h in [0.0, 0.5, 1.0] {
        for r in [1.0, 2.0] {
            for dp in [1.0, 2.0] {
                for dm in [1.0, 2.0] {
                    let rd = ReachData::new(dp, dm, r, h).map_err(|e| e.to_string())?;
                    let top = rd.eps_max();
                    for i in 1..1000 {
                        let eps = top * i as f64 / 1000.0;
                        let (tp, tm) = t_bounds(eps, &rd).map_err(|e| e.to_string())?;
                        ensure(tp <= tm, || {
                            format!("t+ > t- at ε = {eps}, (h, r, δ+, δ-) = ({h}, {r}, {dp}, {dm})")
                        })?;
                        checked += 1;
                    }
                    let (tp, tm) = t_bounds(tiny, &rd).map_err(|e| e.to_string())?;
                    let dev = (tp / tiny - h).abs().max((tm / tiny - h).abs());
                    ensure(dev <= 1e-3, || {
                        format!("|t±/ε - h⁺| = {dev} at (h, r, δ+, δ-) = ({h}, {r}, {dp}, {dm})")
                    })?;
                    worst = worst.max(dev);
                }
            }
        }
    }
    Ok(format!(
        "t+ <= t- at {checked} points; max |t±/ε - h⁺| at ε = 2^-20 is {worst:.2e}"
    ))
}

fn criterion_8() -> Outcome {
    let out = run_config("two-ball.json")?;
    let ratio = row(&out, "ratio", 1e3)?;
    ensure(ratio.trials == 1000, || format!("{} trials", ratio.trials))?;
    ensure((1.9..=2.1).contains(&ratio.estimate), || {
        format!("volume ratio {}", ratio.estimate)
    })?;
    let mut parts = Vec::new();
    for rho in [0.1f64, 0.25, 0.5] {
        let r = row(&out, &format!("inclusion/rho={rho}"), 1e3)?;
        // single unit disk, uniform: Λ(B_ρ) = ρ · ν̂(S¹) = 2ρ
        wilson4(r, (-2.0 * rho).exp())?;
        parts.push(format!("ρ={rho}: {:.4} vs {:.4}", r.estimate, (-2.0 * rho).exp()));
    }
    Ok(format!("volume ratio {:.4}; inclusion {}", ratio.estimate, parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let square = SetModel::single(ConvexBody::Polytope(
        HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0))
            .map_err(|e| e.to_string())?,
    ))
    .map_err(|e| e.to_string())?;
    let spec = BoundaryDensitySpec::uniform(&square).map_err(|e| e.to_string())?;
    let nu = nu_hat(&square, &spec).map_err(|e| e.to_string())?;
    ensure(!hemisphere_contained(&nu), || "square ν̂ flagged unbounded".into())?;
    let sq = run_config("zerocell-square.json")?;
    ensure(sq.flag("possiblyUnbounded") == Some(false), || {
        "square run not flagged bounded".into()
    })?;
    let half = run_config("zerocell-half-disk.json")?;
    ensure(half.flag("possiblyUnbounded") == Some(true), || {
        "half-circle density not flagged possiblyUnbounded".into()
    })?;
    let single = DirectionalIntensity::new(
        1,
        vec![Atom {
            direction: Vector::new1(1.0),
            weight: 1.0,
        }],
        vec![],
    )
    .map_err(|e| e.to_string())?;
    ensure(hemisphere_contained(&single), || {
        "d = 1 single atom not flagged possiblyUnbounded".into()
    })?;
    Ok("square bounded; half-circle disk and d = 1 single atom possiblyUnbounded".into())
}

fn run_binary(config: &Path, workers: usize, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_zerocell"))
        .args(["run", "--seed", "42", "--workers", &workers.to_string(), "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("ZEROCELL_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(0), || {
        format!(
            "exit {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        )
    })?;
    let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    fs::read(out.join(format!("{stem}.csv"))).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for name in ["inclusion-square.json", "two-ball.json"] {
        let cfg = config_path(name);
        let one = run_binary(&cfg, 1, &dir.path().join("w1"))?;
        let four = run_binary(&cfg, 4, &dir.path().join("w4"))?;
        let again = run_binary(&cfg, 4, &dir.path().join("w4b"))?;
        ensure(one == four && four == again, || format!("{name}: CSV bytes differ"))?;
        parts.push(format!("{name} ({} bytes)", one.len()));
    }
    Ok(format!("identical CSVs for workers 1, 4, 4: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "erosion ratio, exact path", criterion_1),
        (2, "erosion ratio, Monte Carlo path", criterion_2),
        (3, "inclusion limit, d = 1", criterion_3),
        (4, "inclusion limit, d = 2 square", criterion_4),
        (5, "zero-cell inclusion law", criterion_5),
        (6, "volume moments, d = 1", criterion_6),
        (7, "two-sided displacement bounds", criterion_7),
        (8, "two-ball anomaly", criterion_8),
        (9, "hemisphere criterion", criterion_9),
        (10, "determinism across worker counts", criterion_10),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {id:>2} PASS  {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {title}: {detail}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
