//! Acceptance suite: runs every criterion against the pinned configuration
//! in `configs/acceptance.json` and prints one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use sparsketch_bench::acceptance::AcceptanceConfig;
use sparsketch_bench::checks::{family_check, fit_planted_constant, planted_table};
use sparsketch_bench::report::ExperimentReport;
use sparsketch_bench::sizing::{gaussian_rows, primary_rows};
use sparsketch_bench::{run_experiment, ExperimentConfig};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run(cfg: &ExperimentConfig) -> Result<(ExperimentReport, f64), String> {
    let start = Instant::now();
    let report = run_experiment(cfg).map_err(|e| e.to_string())?;
    Ok((report, start.elapsed().as_secs_f64()))
}

fn all_aux(report: &ExperimentReport, key: &str, only_successful: bool) -> bool {
    report
        .records
        .iter()
        .filter(|r| r.success || !only_successful)
        .all(|r| r.aux[key] == 1.0)
}

fn embed_l2(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let cfg = &acc.embed_l2;
    let (r, secs) = run(cfg)?;
    let exact: Vec<f64> = r.records.iter().map(|t| t.aux["exact_max_distortion"]).collect();
    let exact_rate = exact.iter().filter(|e| (0.0..=cfg.eps).contains(*e)).count() as f64 / exact.len() as f64;
    let min_rate = cfg.min_success_rate.unwrap_or(1.0);
    let pass = r.summary.thresholds_met
        && exact_rate >= min_rate
        && cfg.c_gauss <= acc.max_c_gauss
        && secs <= acc.runtime.embed_l2_seconds;
    Ok(verdict(
        pass,
        format!(
            "C_gauss {} m {} probe rate {:.2}, exact universal rate {exact_rate:.2}, {secs:.1}s",
            cfg.c_gauss, r.summary.extras["m"], r.summary.success_rate
        ),
    ))
}

fn calibrate(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let (r, secs) = run(&acc.calibrate_stable)?;
    let worst = r.summary.max_value;
    let pass = r.summary.thresholds_met && secs <= acc.runtime.calibrate_seconds;
    Ok(verdict(pass, format!("{} values of p, worst |median - 1| {worst:.5}, {secs:.1}s", r.records.len())))
}

fn median_fixed(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let mut pass = true;
    let mut parts = vec![];
    for cfg in &acc.median_fixed {
        let want = (acc.median_fixed_numerator / (cfg.eps * cfg.eps)).ceil() as usize;
        let m = primary_rows(cfg).map_err(|e| e.to_string())?;
        let (r, _) = run(cfg)?;
        pass &= m == want && cfg.k == 0 && r.summary.thresholds_met;
        parts.push(format!("p {} m {m} rate {:.2}", cfg.p, r.summary.success_rate));
    }
    Ok(verdict(pass, parts.join("; ")))
}

fn embed_lp(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let cfg = &acc.embed_lp;
    let (r, _) = run(cfg)?;
    let pass = r.summary.thresholds_met && cfg.c_med <= acc.max_c_med;
    Ok(verdict(
        pass,
        format!("C_med {} m {} rate {:.2}", cfg.c_med, r.summary.extras["m"], r.summary.success_rate),
    ))
}

fn embed_relu(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let (r, _) = run(&acc.embed_relu)?;
    let bound = all_aux(&r, "l1_bound_ok", true);
    Ok(verdict(
        r.summary.thresholds_met && bound,
        format!(
            "m1 {} rate {:.2}, l1 bound on every successful draw: {bound}",
            r.summary.extras["m"], r.summary.success_rate
        ),
    ))
}

fn embed_hinge(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let (r, _) = run(&acc.embed_hinge)?;
    let lower = all_aux(&r, "lower_bound_ok", false);
    Ok(verdict(
        r.summary.thresholds_met && lower,
        format!(
            "m1 {} m2 {} rate {:.2}, lower bound on every probe: {lower}",
            r.summary.extras["m"], r.summary.extras["m2"], r.summary.success_rate
        ),
    ))
}

fn recover(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let cfg = &acc.recover;
    let (r, secs) = run(cfg)?;
    let measurements = r.summary.extras["measurements"] as usize;
    let gaussian = gaussian_rows(acc.embed_l2.c_gauss, cfg.d, cfg.k, cfg.eps);
    let pass = r.summary.thresholds_met && measurements < gaussian && secs <= acc.runtime.recover_seconds;
    Ok(verdict(
        pass,
        format!(
            "rate {:.2}, {measurements} measurements vs {gaussian} Gaussian rows, {secs:.1}s",
            r.summary.success_rate
        ),
    ))
}

fn lasso(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let cfg = &acc.lasso;
    let (r, _) = run(cfg)?;
    let m = r.summary.extras["m"] as usize;
    let norm = all_aux(&r, "norm_bound_ok", false);
    Ok(verdict(
        r.summary.thresholds_met && norm && 2 * m <= cfg.n,
        format!(
            "C_L {} m {m} (cap {}) rate {:.2}, l1 norm bound on every seed: {norm}",
            cfg.c_l,
            cfg.n / 2,
            r.summary.success_rate
        ),
    ))
}

fn sampling(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let (r, _) = run(&acc.sampling_fail)?;
    Ok(verdict(
        r.summary.thresholds_met,
        format!(
            "exact recovery rate {:.3} (predicted {:.3}) over {} trials",
            r.summary.success_rate,
            r.summary.extras["predicted_rate"],
            r.records.len()
        ),
    ))
}

fn family(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let p = &acc.family;
    let (f, report) = family_check(p.d, p.k, p.t, p.c_overlap, p.seed).map_err(|e| e.to_string())?;
    Ok(verdict(
        report.passed(),
        format!(
            "{} members over d {}, max overlap {:?}",
            f.len(),
            f.d,
            report.max_overlap
        ),
    ))
}

fn planted(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let p = &acc.planted;
    let low = (p.overlap_fraction * p.k as f64).ceil() as usize;
    let rows = planted_table(p.k, p.eps, p.n, &[p.k, low]).map_err(|e| e.to_string())?;
    let tol = p.tolerance_eps_sq * p.eps * p.eps;
    let c = fit_planted_constant(p.k, p.eps, p.n).map_err(|e| e.to_string())?;
    let separated = rows[1].minimum > (1.0 + c * p.eps) * (3.0 - 2.0 * p.eps);
    let within = rows.iter().all(|r| r.deviation().abs() <= tol);
    Ok(verdict(
        within && separated && c > 0.0,
        format!(
            "L({}) = {:.5}, L({low}) = {:.5}, deviations {:.5} {:.5} (tol {tol:.3}), fitted c {c:.4}",
            p.k,
            rows[0].minimum,
            rows[1].minimum,
            rows[0].deviation(),
            rows[1].deviation()
        ),
    ))
}

fn sketched_min(acc: &AcceptanceConfig) -> Result<Verdict, String> {
    let (r, _) = run(&acc.sketched_min)?;
    Ok(verdict(
        r.summary.thresholds_met,
        format!(
            "m {} rate {:.2}, worst cost ratio {:.4}",
            r.summary.extras["m"], r.summary.success_rate, r.summary.max_value
        ),
    ))
}

type Criterion = fn(&AcceptanceConfig) -> Result<Verdict, String>;

fn main() -> ExitCode {
    let acc = AcceptanceConfig::builtin();
    let criteria: [(&str, Criterion); 12] = [
        ("l2 sparse affine embedding", embed_l2),
        ("stable scale calibration", calibrate),
        ("median estimator, fixed vector", median_fixed),
        ("median estimator, sparse subspace", embed_lp),
        ("relu estimator", embed_relu),
        ("hinge-like estimator", embed_hinge),
        ("two-stage sparse recovery", recover),
        ("lasso sketching", lasso),
        ("row sampling failure", sampling),
        ("support family invariants", family),
        ("planted loss", planted),
        ("sketched minimization", sketched_min),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check(&acc) {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("{} {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
