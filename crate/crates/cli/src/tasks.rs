//! Task runners: each builds the pipeline for one task, writes artifacts
//! (report.txt, records.json, CSV point dumps, PBM rasters with sidecars),
//! and returns the process exit code (0 pass, 1 fail, 2 config error —
//! config errors are raised before any task runs).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use fracsum::geom::run_lemma_trials;
use fracsum::grid::{encode_pbm, n_fold_sum, rasterize_inner_capped, sidecar_text, BBox, Raster, SumOpts};
use fracsum::ifs::{expand_cover, CylinderCover, ExpandCfg};
use fracsum::sums::{
    certify_nonmembership, ball_hierarchy_probe, verify_sum_identity, CertificateCfg, SumsError,
    ProbeCfg, IdentityCheckCfg, Verdict,
};
use fracsum::thickness::{certified_self_similar_bound, estimate_thickness, sum_threshold, EstimateCfg, Provenance};

use crate::config::{ExperimentConfig, Task};

pub struct RunOpts {
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub force: bool,
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOpts, out_dir: &Path) -> Result<i32> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let sum_opts = match opts.workers {
        Some(w) => SumOpts { workers: w.max(1), memory_cap: cfg.memory_cap_bytes.unwrap_or(2 << 30) },
        None => SumOpts { memory_cap: cfg.memory_cap_bytes.unwrap_or(2 << 30), ..SumOpts::default() },
    };
    let seed = opts.seed.or(cfg.seed).unwrap_or(0);

    match cfg.task {
        Task::Attractor => run_attractor(cfg, &sum_opts, out_dir),
        Task::Sumset => run_sumset(cfg, &sum_opts, out_dir),
        Task::Thickness => run_thickness(cfg, seed, out_dir),
        Task::SumIdentity => run_sum_identity(cfg, &sum_opts, opts.force, out_dir),
        Task::Counterexample => run_counterexample(cfg, out_dir),
        Task::LemmaCheck => run_lemma_check(cfg, seed, out_dir),
        Task::HierarchyProbe => run_hierarchy_probe(cfg, &sum_opts, out_dir),
    }
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("task requires the `{name}` field"))
}

fn budget(cfg: &ExperimentConfig) -> ExpandCfg {
    ExpandCfg { budget: cfg.budget.unwrap_or(10_000_000), dedup: false }
}

fn write_artifacts(out_dir: &Path, report: &str, record: &serde_json::Value) -> Result<()> {
    std::fs::write(out_dir.join("report.txt"), report)?;
    let mut json = serde_json::to_string_pretty(record)?;
    json.push('\n');
    std::fs::write(out_dir.join("records.json"), json)?;
    Ok(())
}

fn write_points_csv(path: &Path, points: &[fracsum::geom::Point]) -> Result<()> {
    let mut out = String::new();
    for p in points {
        let cols: Vec<String> = p.coords().iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_balls_csv(path: &Path, balls: &[fracsum::geom::Ball]) -> Result<()> {
    let mut out = String::new();
    for b in balls {
        let mut cols: Vec<String> =
            b.center.coords().iter().map(|v| format!("{v:.16e}")).collect();
        cols.push(format!("{:.16e}", b.radius));
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// One PBM (plus text sidecar) per 2-D slice; returns the file names.
fn write_raster(out_dir: &Path, stem: &str, raster: &Raster) -> Result<Vec<String>> {
    let mut files = Vec::new();
    let slices = raster.dims()[2];
    for z in 0..slices {
        let name = if slices == 1 {
            format!("{stem}.pbm")
        } else {
            format!("{stem}_z{z:03}.pbm")
        };
        std::fs::write(out_dir.join(&name), encode_pbm(raster, z))?;
        let sidecar = format!("{}.txt", name.trim_end_matches(".pbm"));
        std::fs::write(out_dir.join(&sidecar), sidecar_text(raster, z))?;
        files.push(name);
        files.push(sidecar);
    }
    Ok(files)
}

fn cover_for(cfg: &ExperimentConfig, depth: u32) -> Result<CylinderCover> {
    let ifs = cfg.build_ifs()?;
    expand_cover(&ifs, depth, &budget(cfg)).map_err(|e| anyhow!("cover expansion failed: {e}"))
}

fn run_attractor(cfg: &ExperimentConfig, sum_opts: &SumOpts, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let cover = cover_for(cfg, depth)?;
    write_points_csv(&out_dir.join("points.csv"), &cover.inner_points)?;
    write_balls_csv(&out_dir.join("outer_balls.csv"), &cover.outer_balls)?;

    let mut files = vec!["points.csv".to_string(), "outer_balls.csv".to_string()];
    let mut raster_info = json!(null);
    if let Some(delta) = cfg.delta {
        let bbox = BBox::of_ball(&cover.root, 4.0 * delta);
        let raster =
            rasterize_inner_capped(&cover.inner_points, delta, &bbox, sum_opts.memory_cap)
                .map_err(|e| anyhow!("rasterization failed: {e}"))?;
        files.extend(write_raster(out_dir, "attractor", &raster)?);
        raster_info = json!({
            "delta": delta,
            "dims": raster.dims(),
            "set_cells": raster.count_ones(),
            "slack": raster.slack(),
        });
    }

    let record = json!({
        "task": "attractor",
        "depth": depth,
        "inner_points": cover.inner_points.len(),
        "outer_balls": cover.outer_balls.len(),
        "eps": cover.eps,
        "root_radius": cover.root.radius,
        "raster": raster_info,
        "files": files,
    });
    let mut report = String::new();
    writeln!(report, "task: attractor")?;
    writeln!(report, "depth: {depth}")?;
    writeln!(report, "inner points: {}", cover.inner_points.len())?;
    writeln!(report, "outer balls: {}", cover.outer_balls.len())?;
    writeln!(report, "certified Hausdorff error eps: {:e}", cover.eps)?;
    writeln!(report, "root ball radius: {:e}", cover.root.radius)?;
    if let Some(delta) = cfg.delta {
        writeln!(report, "raster delta: {delta:e}")?;
    }
    writeln!(report, "result: PASS")?;
    write_artifacts(out_dir, &report, &record)?;
    Ok(0)
}

fn run_sumset(cfg: &ExperimentConfig, sum_opts: &SumOpts, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let n = required(cfg.n, "n")?;
    let delta = required(cfg.delta, "delta")?;
    if n < 1 {
        bail!("n must be at least 1");
    }
    let cover = cover_for(cfg, depth)?;
    let bbox = BBox::of_ball(&cover.root, 4.0 * delta);
    let inner = rasterize_inner_capped(&cover.inner_points, delta, &bbox, sum_opts.memory_cap)
        .map_err(|e| anyhow!("rasterization failed: {e}"))?;
    let sum = n_fold_sum(&inner, n, sum_opts).map_err(|e| anyhow!("dilation failed: {e}"))?;
    let files = write_raster(out_dir, "sumset", &sum)?;

    let record = json!({
        "task": "sumset",
        "depth": depth,
        "n": n,
        "delta": delta,
        "eps": cover.eps,
        "inner_cells": inner.count_ones(),
        "sum_cells": sum.count_ones(),
        "sum_dims": sum.dims(),
        "sum_slack": sum.slack(),
        "files": files,
    });
    let mut report = String::new();
    writeln!(report, "task: sumset")?;
    writeln!(report, "depth: {depth}, n: {n}, delta: {delta:e}")?;
    writeln!(report, "cover eps: {:e}", cover.eps)?;
    writeln!(report, "inner raster cells: {}", inner.count_ones())?;
    writeln!(report, "sum raster cells: {}", sum.count_ones())?;
    writeln!(report, "sum slack: {:e}", sum.slack())?;
    writeln!(report, "result: PASS")?;
    write_artifacts(out_dir, &report, &record)?;
    Ok(0)
}

fn run_thickness(cfg: &ExperimentConfig, seed: u64, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let ifs = cfg.build_ifs()?;
    let cover = expand_cover(&ifs, depth, &budget(cfg))
        .map_err(|e| anyhow!("cover expansion failed: {e}"))?;
    let est_cfg = EstimateCfg {
        radii_per_decade: cfg.radii_per_decade.unwrap_or(8),
        seed,
        ..Default::default()
    };
    let estimate =
        estimate_thickness(&cover, &est_cfg).map_err(|e| anyhow!("estimation failed: {e}"))?;
    let certified = if ifs.is_similitude_system() {
        Some(certified_self_similar_bound(&ifs, &cover).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    let threshold = certified
        .as_ref()
        .filter(|b| !b.flat)
        .map(|b| sum_threshold(b.value))
        .transpose()
        .map_err(|e| anyhow!("{e}"))?;

    let (est_rmin, est_rmax, est_centers) = match &estimate.provenance {
        Provenance::Empirical { r_min, r_max, centers, .. } => (*r_min, *r_max, *centers),
        Provenance::Certified { .. } => unreachable!("estimate is empirical"),
    };
    let cert_json = certified.as_ref().map(|b| match &b.provenance {
        Provenance::Certified { rho_min, r0, diam_ub } => json!({
            "value": b.value,
            "flat": b.flat,
            "rho_min": rho_min,
            "r0": r0,
            "diam_upper_bound": diam_ub,
        }),
        Provenance::Empirical { .. } => unreachable!("bound is certified"),
    });

    let record = json!({
        "task": "thickness",
        "depth": depth,
        "eps": cover.eps,
        "estimate": {
            "value": estimate.value,
            "kind": "EMPIRICAL",
            "flat": estimate.flat,
            "centers": est_centers,
            "r_min": est_rmin,
            "r_max": est_rmax,
        },
        "certified": cert_json,
        "sum_threshold_for_certified": threshold,
        "seed": seed,
    });
    let mut report = String::new();
    writeln!(report, "task: thickness")?;
    writeln!(report, "depth: {depth}, cover eps: {:e}", cover.eps)?;
    writeln!(
        report,
        "empirical estimate: {:e} (upper-style estimate from {est_centers} centers, radii in [{:e}, {:e}]; contaminated below by eps)",
        estimate.value, est_rmin, est_rmax
    )?;
    match &certified {
        Some(b) => {
            writeln!(report, "certified lower bound: {:e} (flat: {})", b.value, b.flat)?;
            if let Some(t) = threshold {
                writeln!(report, "sum threshold for certified bound: {t}")?;
            }
        }
        None => writeln!(report, "certified lower bound: n/a (system is not a similitude system)")?,
    }
    writeln!(report, "result: PASS")?;
    write_artifacts(out_dir, &report, &record)?;
    Ok(0)
}

fn run_sum_identity(cfg: &ExperimentConfig, sum_opts: &SumOpts, force: bool, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let n = required(cfg.n, "n")?;
    let delta = required(cfg.delta, "delta")?;
    let ifs = cfg.build_ifs()?;
    let mut run_cfg = IdentityCheckCfg::new(depth, delta);
    run_cfg.force = force;
    run_cfg.sum = sum_opts.clone();
    run_cfg.word_budget = cfg.budget.unwrap_or(10_000_000);

    let report = match verify_sum_identity(&ifs, n, &run_cfg) {
        Ok(r) => r,
        Err(SumsError::ThresholdNotMet { n, threshold }) => {
            bail!("n = {n} is below the threshold {threshold}; rerun with --force for an informational report")
        }
        Err(e) => return Err(anyhow!("verification failed: {e}")),
    };

    let record = json!({
        "task": "verify-thm71",
        "n": report.n,
        "depth": report.depth,
        "delta": report.delta,
        "threshold": report.threshold,
        "d_h_measured": report.d_h_measured,
        "tolerance": report.tolerance,
        "cover_eps": report.cover_eps,
        "containment_ok": report.containment_ok,
        "verdict": report.verdict.to_string(),
        "informational": report.informational,
    });
    let mut text = String::new();
    writeln!(text, "task: verify-thm71")?;
    writeln!(text, "n: {}, depth: {}, delta: {:e}", report.n, report.depth, report.delta)?;
    writeln!(text, "threshold (smallest n with n ≥ 1 + ℓ/ρ_min): {}", report.threshold)?;
    writeln!(text, "cover eps: {:e}", report.cover_eps)?;
    writeln!(text, "measured two-sided Hausdorff distance: {:e}", report.d_h_measured)?;
    writeln!(
        text,
        "tolerance (n·eps + n·δ·√d + cell diagonal): {:e}",
        report.tolerance
    )?;
    writeln!(text, "containment ⊕ₙ(inner) ⊆ OUTER(n·conv(F)): {}", report.containment_ok)?;
    if report.informational {
        writeln!(text, "note: n below threshold; INFORMATIONAL report (forced run)")?;
    }
    writeln!(text, "result: {}", report.verdict)?;
    write_artifacts(out_dir, &text, &record)?;
    Ok(if report.verdict == Verdict::Pass { 0 } else { 1 })
}

fn run_counterexample(cfg: &ExperimentConfig, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let n = required(cfg.n, "n")?;
    let run_cfg = CertificateCfg { word_budget: cfg.budget.unwrap_or(10_000_000) };
    match certify_nonmembership(n, depth, &run_cfg) {
        Ok(cert) => {
            let steps: Vec<serde_json::Value> = cert
                .steps
                .iter()
                .map(|s| json!({"name": s.name, "margin": s.margin, "detail": s.detail}))
                .collect();
            let record = json!({
                "task": "verify-ex73",
                "point": [0.5, 0.0],
                "n": cert.n,
                "depth": cert.depth,
                "eta": cert.eta,
                "eta_prime": cert.eta_prime,
                "steps": steps,
                "verdict": cert.verdict.to_string(),
            });
            let mut text = String::new();
            writeln!(text, "task: verify-ex73")?;
            writeln!(text, "claim: (1/2, 0) is not in the {}-fold sum of the attractor", cert.n)?;
            writeln!(text, "depth: {}, strip eta: {:e}, cluster inflation eta': {:e}", cert.depth, cert.eta, cert.eta_prime)?;
            for (i, s) in cert.steps.iter().enumerate() {
                writeln!(text, "step {}: {} — margin {:e} ({})", i + 1, s.name, s.margin, s.detail)?;
            }
            writeln!(text, "result: {}", cert.verdict)?;
            std::fs::write(out_dir.join("certificate.txt"), &text)?;
            write_artifacts(out_dir, &text, &record)?;
            Ok(0)
        }
        Err(SumsError::CertificateFailed { step, name, margin }) => {
            let record = json!({
                "task": "verify-ex73",
                "n": n,
                "depth": depth,
                "failed_step": step,
                "failed_step_name": name,
                "margin": margin,
                "verdict": "FAIL",
            });
            let mut text = String::new();
            writeln!(text, "task: verify-ex73")?;
            writeln!(text, "n: {n}, depth: {depth}")?;
            writeln!(text, "certificate FAILED at step {step} ({name}) with margin {margin:e}")?;
            writeln!(text, "hint: increase depth so the strip clusters tighten")?;
            writeln!(text, "result: FAIL")?;
            write_artifacts(out_dir, &text, &record)?;
            Ok(1)
        }
        Err(e) => Err(anyhow!("certification failed: {e}")),
    }
}

fn run_lemma_check(cfg: &ExperimentConfig, seed: u64, out_dir: &Path) -> Result<i32> {
    let trials = cfg.trials.unwrap_or(1000);
    let samples = cfg.samples.unwrap_or(256);
    let report = run_lemma_trials(cfg.dimension, trials, samples, seed)
        .map_err(|e| anyhow!("lemma suite failed to run: {e}"))?;
    let passed = report.all_passed();
    let record = json!({
        "task": "lemma-check",
        "dimension": report.dim,
        "trials": report.trials,
        "samples": samples,
        "seed": seed,
        "absorption_failures": report.absorption_failures,
        "distance_bound_failures": report.distance_bound_failures,
        "perturbation_failures": report.perturbation_failures,
        "ball_absorption_failures": report.ball_absorption_failures,
        "verdict": if passed { "PASS" } else { "FAIL" },
    });
    let mut text = String::new();
    writeln!(text, "task: lemma-check")?;
    writeln!(text, "dimension: {}, trials per lemma: {}, samples per trial: {samples}, seed: {seed}", report.dim, report.trials)?;
    writeln!(text, "sum-absorption failures: {}", report.absorption_failures)?;
    writeln!(text, "distance-bound failures: {}", report.distance_bound_failures)?;
    writeln!(text, "perturbation failures: {}", report.perturbation_failures)?;
    writeln!(text, "ball-absorption failures: {}", report.ball_absorption_failures)?;
    writeln!(text, "result: {}", if passed { "PASS" } else { "FAIL" })?;
    write_artifacts(out_dir, &text, &record)?;
    Ok(if passed { 0 } else { 1 })
}

fn run_hierarchy_probe(cfg: &ExperimentConfig, sum_opts: &SumOpts, out_dir: &Path) -> Result<i32> {
    let depth = required(cfg.depth, "depth")?;
    let n = required(cfg.n, "n")?;
    let c = required(cfg.thickness_c, "thickness_c")?;
    let cover = cover_for(cfg, depth)?;
    let probe_cfg = ProbeCfg { delta: cfg.delta, sum: sum_opts.clone(), ..Default::default() };
    let report = ball_hierarchy_probe(std::slice::from_ref(&cover), c, n, &probe_cfg)
        .map_err(|e| anyhow!("probe failed: {e}"))?;

    let record = json!({
        "task": "thm12-probe",
        "n": report.n,
        "c": report.c,
        "rho": report.rho,
        "r0": report.r0,
        "rad1": report.rad1,
        "rad2": report.rad2,
        "delta": report.delta,
        "inflation": report.inflation,
        "witness_counts": report.witness_counts,
        "verdict": report.verdict.to_string(),
    });
    let mut text = String::new();
    writeln!(text, "task: thm12-probe (one refinement step of the ball hierarchy)")?;
    writeln!(text, "n: {}, claimed thickness c: {:e}, rho = c/4: {:e}", report.n, report.c, report.rho)?;
    writeln!(text, "base scale r0: {:e}", report.r0)?;
    writeln!(text, "ball radii: level-1 {:e}, level-2 {:e}", report.rad1, report.rad2)?;
    writeln!(text, "lattice delta: {:e}, containment inflation: {:e}", report.delta, report.inflation)?;
    writeln!(text, "witness counts (level-1, level-2): {:?}", report.witness_counts)?;
    writeln!(text, "H2 ⊇ H1 raster containment: {}", report.verdict)?;
    writeln!(text, "result: {}", report.verdict)?;
    write_artifacts(out_dir, &text, &record)?;
    Ok(if report.verdict == Verdict::Pass { 0 } else { 1 })
}

pub fn default_out_dir(cfg: &ExperimentConfig, cli_out: Option<PathBuf>) -> PathBuf {
    cli_out
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}
