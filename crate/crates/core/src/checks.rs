//! Named identity checks, dispatched by name with `key=value` parameters.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{eval_kernel, k_prime, khat, damped_kernel_integral, KernelId, KhatMethod, Side, Which, BREAKPOINT};
use crate::pair_correlation::{
    lemma5_check, lemma6_eval, lemma6_report, pair_complement, pair_weight, pcf_curve, r_decomposition, TailModel,
};
use crate::primes::build_prime_table;
use crate::quadrature::QuadratureSpec;
use crate::report::{CheckReport, Judge, Params};
use crate::s_of_t::{SEvaluator, ZERO_WINDOW};
use crate::theorem::{damped_k2_transformed, empirical_inputs, lemma_8_9_10_eval, model_inputs, theorem_rhs, FSource};
use crate::zeros::{find_zeros, ZeroSet};

/// Every name accepted by [`check_identity`].
pub const IDENTITIES: [&str; 11] = [
    "w_partition",
    "lemma3",
    "lemma4",
    "lemma5",
    "lemma6",
    "lemma7",
    "lemma8",
    "lemma9",
    "lemma10",
    "lemma11",
    "bracket",
];

/// Inputs shared by the checks beyond their own parameters.
#[derive(Debug, Clone)]
pub struct CheckContext<'a> {
    /// Zeros to use; computed on demand when absent.
    pub zeros: Option<&'a ZeroSet>,
    pub f_source: FSource,
    pub tail_model: TailModel,
    /// Overrides the default tolerance of asserted entries.
    pub tolerance: Option<f64>,
    pub spec: QuadratureSpec,
}

impl Default for CheckContext<'_> {
    fn default() -> Self {
        Self {
            zeros: None,
            f_source: FSource::Empirical,
            tail_model: TailModel::ConstantOne,
            tolerance: None,
            spec: QuadratureSpec::default(),
        }
    }
}

fn allowed_keys(name: &str) -> &'static [&'static str] {
    match name {
        "w_partition" => &["u", "n", "u_max"],
        "lemma3" => &["h"],
        "lemma4" => &["y", "qtol"],
        "lemma5" | "lemma6" | "lemma7" => &["T", "beta"],
        "lemma8" | "lemma9" | "lemma10" => &["T", "beta", "alpha_max", "step"],
        "lemma11" => &["C", "k"],
        "bracket" => &["T", "f_tail"],
        _ => &[],
    }
}

/// Run the named check. Unknown names and parameter keys are usage errors.
pub fn check_identity(name: &str, params: &Params, ctx: &CheckContext) -> Result<CheckReport> {
    if !IDENTITIES.contains(&name) {
        return Err(Error::Usage(format!(
            "unknown identity '{name}'; expected one of {}",
            IDENTITIES.join(", ")
        )));
    }
    let allowed = allowed_keys(name);
    if let Some(bad) = params.keys().find(|k| !allowed.contains(k)) {
        return Err(Error::Usage(format!(
            "identity '{name}' takes parameters {}; got '{bad}'",
            allowed.join(", ")
        )));
    }
    match name {
        "w_partition" => w_partition(params, ctx.tolerance.unwrap_or(1e-15)),
        "lemma3" => kernel_constants(params, ctx.tolerance.unwrap_or(1e-4)),
        "lemma4" => fourier_identity(params, ctx.tolerance.unwrap_or(1e-6)),
        "lemma5" => rearrangement(params, ctx),
        "lemma6" => regrouping(params, ctx),
        "lemma7" => parts_identity(params, &ctx.spec),
        "lemma11" => geometric_moments(params),
        "bracket" => bracket(params, ctx.tolerance.unwrap_or(1e-15)),
        _ => {
            let index = match name {
                "lemma8" => 0,
                "lemma9" => 1,
                _ => 2,
            };
            Ok(conditional_reports(params, ctx)?.swap_remove(index))
        }
    }
}

fn zeros_or_compute<'a>(ctx: &CheckContext<'a>, needed: f64, owned: &'a mut Option<ZeroSet>) -> Result<&'a ZeroSet> {
    match ctx.zeros {
        Some(z) => {
            z.require_coverage(needed)?;
            Ok(z)
        }
        None => Ok(owned.insert(find_zeros(needed.max(15.0))?)),
    }
}

fn w_partition(params: &Params, tol: f64) -> Result<CheckReport> {
    let mut report = CheckReport::new("w_partition", tol, true);
    report.push("u=3", pair_weight(3.0) + pair_complement(3.0), 1.0, Judge::Absolute);
    if params.contains("u") {
        for u in params.list_or("u", &[]) {
            report.push(format!("u={u}"), pair_weight(u) + pair_complement(u), 1.0, Judge::Absolute);
        }
    }
    let n = params.scalar_or("n", 1e4)?;
    let u_max = params.scalar_or("u_max", 100.0)?;
    if !(n >= 2.0) || !(u_max > 0.0) {
        return Err(Error::Usage("w_partition needs n >= 2 and u_max > 0".into()));
    }
    let n = n as usize;
    let worst = (0..n)
        .map(|i| -u_max + 2.0 * u_max * i as f64 / (n - 1) as f64)
        .map(|u| (pair_weight(u) + pair_complement(u) - 1.0).abs())
        .fold(0.0, f64::max);
    report.push("grid_max_deviation", worst, 0.0, Judge::Absolute);
    report.scale("grid_points", n as f64);
    report.scale("u_max", u_max);
    Ok(report)
}

// Second-order difference schemes, combined by Richardson extrapolation.
fn richardson(d: impl Fn(f64) -> f64, h: f64) -> f64 {
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

fn forward_first(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
}

fn forward_second(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2.0 * h) - f(x + 3.0 * h)) / (h * h)
}

fn kernel_constants(params: &Params, tol: f64) -> Result<CheckReport> {
    let h = params.scalar_or("h", 1e-3)?;
    if !(h > 0.0 && h < 0.01) {
        return Err(Error::Usage(format!("lemma3 step must lie in (0, 0.01), got {h}")));
    }
    let k = |u: f64| eval_kernel(KernelId::new(Which::K), u).unwrap_or(f64::NAN);
    let a = BREAKPOINT;
    let p = PI;
    let one_sided_tol = (10.0 * tol).max(1e-3);
    let mut report = CheckReport::new("lemma3", tol, true);

    let d1 = richardson(|s| (k(s) - k(-s)) / (2.0 * s), h);
    report.push_with_tolerance("k'(0)", d1, 0.0, Judge::Absolute, 1e-6);
    let d2 = richardson(|s| (k(s) - 2.0 * k(0.0) + k(-s)) / (s * s), h);
    report.push("k''(0)", d2, p.powi(8) / 18.0, Judge::Relative);

    let right1 = richardson(|s| forward_first(&k, a, s), h);
    let left1 = richardson(|s| forward_first(&k, a, -s), h);
    let right2 = richardson(|s| forward_second(&k, a, s), h);
    let left2 = richardson(|s| forward_second(&k, a, -s), h);
    report.push_with_tolerance("k'(A+)", right1, -4.0 * p.powi(3), Judge::Relative, one_sided_tol);
    report.push_with_tolerance("k'(A-)", left1, -4.0 * p.powi(3) + p.powi(5), Judge::Relative, one_sided_tol);
    report.push_with_tolerance("k''(A+)", right2, 24.0 * p.powi(4), Judge::Relative, one_sided_tol);
    report.push_with_tolerance(
        "k''(A-)",
        left2,
        p.powi(8) / 2.0 - 4.0 * p.powi(6) + 24.0 * p.powi(4),
        Judge::Relative,
        one_sided_tol,
    );
    report.scale("step", h);
    report.note("A = 1/(2 pi); one-sided stencils at A, central differences at 0");
    Ok(report)
}

fn fourier_identity(params: &Params, tol: f64) -> Result<CheckReport> {
    let ys = params.list_or("y", &[0.5, 1.0, 2.0, 5.0, 10.0]);
    let qtol = params.scalar_or("qtol", 1e-9)?;
    if !(qtol > 0.0) {
        return Err(Error::Usage("lemma4 quadrature tolerance must be positive".into()));
    }
    let spec = QuadratureSpec::with_tolerance(qtol);
    let mut report = CheckReport::new("lemma4", tol, true);
    for y in ys {
        let direct = khat(y, KhatMethod::Direct, &spec)?;
        let closed = khat(y, KhatMethod::Closed, &spec)?;
        report.push(format!("y={y}"), direct, closed, Judge::Absolute);
    }
    report.scale("quadrature_tolerance", qtol);
    Ok(report)
}

fn rearrangement(params: &Params, ctx: &CheckContext) -> Result<CheckReport> {
    let t = params.scalar_or("T", 200.0)?;
    let beta = params.scalar_or("beta", 0.5)?;
    let mut owned = None;
    let zeros = zeros_or_compute(ctx, t, &mut owned)?;
    let mut report = lemma5_check(zeros, t, beta, &ctx.spec)?;
    if let Some(tol) = ctx.tolerance {
        rejudge(&mut report, tol);
    }
    Ok(report)
}

fn regrouping(params: &Params, ctx: &CheckContext) -> Result<CheckReport> {
    let t = params.scalar_or("T", 100.0)?;
    let beta = params.scalar_or("beta", 0.4)?;
    if !(t >= 20.0) || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Usage("lemma6 needs T >= 20 and 0 < beta < 1".into()));
    }
    let log_x = beta * t.ln();
    let mut owned = None;
    let d = match ctx.zeros {
        Some(z) if z.t_max() < t + ZERO_WINDOW / log_x => r_decomposition(z, t, beta, &ctx.spec)?,
        _ => {
            let zeros = zeros_or_compute(ctx, t + ZERO_WINDOW / log_x + 1.0, &mut owned)?;
            let primes = build_prime_table(100)?;
            lemma6_eval(&SEvaluator::new(zeros, &primes), t, beta, &ctx.spec)?
        }
    };
    let mut report = lemma6_report(&d, t);
    if let Some(tol) = ctx.tolerance {
        rejudge(&mut report, tol);
    }
    Ok(report)
}

fn rejudge(report: &mut CheckReport, tol: f64) {
    report.tolerance = tol;
    for e in report.entries.iter_mut() {
        if e.pass.is_some() {
            e.pass = Some(e.rel_err <= tol);
        }
    }
}

/// ∫_0^β T^{−2α}k″(α/2πβ)dα against 16π²β²log²T ∫_0^β T^{−2α}k(α/2πβ)dα. The
/// two differ by the boundary terms of the double integration by parts,
/// c T^{−2β} k′(A⁻) + c² λ T^{−2β} π² with c = 2πβ, λ = 2 log T.
fn parts_identity(params: &Params, spec: &QuadratureSpec) -> Result<CheckReport> {
    let t = params.scalar_or("T", 1000.0)?;
    let beta = params.scalar_or("beta", 0.5)?;
    if !(t > 1.0) || !(beta > 0.0) {
        return Err(Error::Usage("lemma7 needs T > 1 and beta > 0".into()));
    }
    let lhs = damped_kernel_integral(2, beta, t, spec)?.value;
    let rhs = damped_k2_transformed(beta, t, spec)?;
    let c = 2.0 * PI * beta;
    let lam = 2.0 * t.ln();
    let decay = t.powf(-2.0 * beta);
    let boundary = c * decay * k_prime(BREAKPOINT, Side::Left) + c * c * lam * decay * PI * PI;

    let mut report = CheckReport::new("lemma7", 0.0, false);
    report.push("as_printed", lhs, rhs, Judge::ReportOnly);
    report.push("with_boundary_terms", lhs, rhs + boundary, Judge::ReportOnly);
    report.scale("boundary_terms", boundary);
    report.scale("T", t);
    report.scale("beta", beta);
    report.note("the printed identity omits the boundary terms at alpha = beta; they are added in with_boundary_terms");
    Ok(report)
}

fn geometric_moments(params: &Params) -> Result<CheckReport> {
    let cs = params.list_or("C", &[2.0, 4.0, 8.0, 16.0]);
    let ks = params.list_or("k", &[1.0, 2.0, 3.0]);
    let mut report = CheckReport::new("lemma11", 0.0, true);
    for &k in &ks {
        if !(k >= 1.0) || k.fract() != 0.0 {
            return Err(Error::Usage(format!("lemma11 needs integer k >= 1, got {k}")));
        }
        let mut largest: f64 = 0.0;
        for &c in &cs {
            if !(c >= 2.0) {
                return Err(Error::Usage(format!("lemma11 needs C >= 2, got {c}")));
            }
            let sum = power_geometric_sum(c, k as i32);
            let factorial: f64 = (1..=k as u32).map(f64::from).product();
            let bound = (k / 2f64.ln()).powf(k) / (c - 1.0) + factorial / c.ln().powf(k + 1.0);
            report.push(format!("C={c},k={k}"), c * sum, c * bound, Judge::AtMost);
            largest = largest.max(c * sum);
        }
        report.scale(format!("max_C_times_sum_k={k}"), largest);
    }
    report.note("entries compare C * sum n^k / C^n with C times the split-sum bound");
    Ok(report)
}

fn power_geometric_sum(c: f64, k: i32) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0;
    loop {
        let term = f64::powi(n, k) / c.powf(n);
        sum += term;
        if term < 1e-18 * sum && n > f64::from(k) {
            return sum;
        }
        n += 1.0;
    }
}

fn bracket(params: &Params, tol: f64) -> Result<CheckReport> {
    let t = params.scalar_or("T", 1000.0)?;
    let mut report = CheckReport::new("bracket", tol, true);
    for f_tail in params.list_or("f_tail", &[0.0, 0.5, 1.0, 2.0]) {
        let rhs = theorem_rhs(t, f_tail)?;
        report.push(format!("f_tail={f_tail}"), rhs.bracket, rhs.signed_bracket, Judge::Absolute);
    }
    Ok(report)
}

/// The three conditional evaluations at (T, β) with F from `ctx.f_source`.
pub fn conditional_reports(params: &Params, ctx: &CheckContext) -> Result<Vec<CheckReport>> {
    let t = params.scalar_or("T", 1000.0)?;
    let beta = params.scalar_or("beta", 0.5)?;
    let alpha_max = params.scalar_or("alpha_max", 4.0)?;
    let step = params.scalar_or("step", 0.01)?;
    if !(t >= 100.0) || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Usage("conditional checks need T >= 100 and 0 < beta < 1".into()));
    }
    let inputs = match ctx.f_source {
        FSource::Model => model_inputs(t, beta, &ctx.spec)?,
        FSource::Empirical => {
            let mut owned = None;
            let zeros = zeros_or_compute(ctx, t, &mut owned)?;
            let d = r_decomposition(zeros, t, beta, &ctx.spec)?;
            let curve = pcf_curve(zeros, t, alpha_max, step)?;
            empirical_inputs(&d, &curve, alpha_max, ctx.tail_model)?
        }
    };
    lemma_8_9_10_eval(t, beta, &inputs, ctx.f_source, &ctx.spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, params: &str) -> CheckReport {
        check_identity(name, &Params::parse(params).unwrap(), &CheckContext::default()).unwrap()
    }

    #[test]
    fn unknown_names_and_keys_are_usage_errors() {
        let ctx = CheckContext::default();
        assert!(matches!(check_identity("lemma12", &Params::new(), &ctx), Err(Error::Usage(_))));
        let p = Params::parse("z=1").unwrap();
        assert!(matches!(check_identity("lemma4", &p, &ctx), Err(Error::Usage(_))));
    }

    #[test]
    fn partition_is_exact_at_three() {
        let r = run("w_partition", "");
        assert!(r.passed());
        assert_eq!(r.entry("u=3").unwrap().abs_err, 0.0);
        assert!(r.entry("grid_max_deviation").unwrap().lhs <= 1e-15);
    }

    #[test]
    fn kernel_constants_by_differences() {
        let r = run("lemma3", "");
        assert!(r.passed(), "{:?}", r.entries);
        assert!(r.entry("k''(0)").unwrap().rel_err < 1e-4);
        // A coarse step without enough accuracy still runs.
        let coarse = run("lemma3", "h=0.009");
        assert_eq!(coarse.entries.len(), 6);
    }

    #[test]
    fn fourier_identity_on_small_grid() {
        let r = run("lemma4", "y=0.5:3");
        assert!(r.passed());
        assert!(r.max_abs_discrepancy() < 1e-6);
    }

    #[test]
    fn geometric_sum_values() {
        assert!((power_geometric_sum(2.0, 1) - 2.0).abs() < 1e-14);
        // Σ n²/2ⁿ = 6, Σ n³/2ⁿ = 26.
        assert!((power_geometric_sum(2.0, 2) - 6.0).abs() < 1e-13);
        assert!((power_geometric_sum(2.0, 3) - 26.0).abs() < 1e-12);
        let r = run("lemma11", "");
        assert!(r.passed());
        assert!((r.entry("C=2,k=1").unwrap().lhs - 4.0).abs() < 1e-14);
    }

    #[test]
    fn parts_identity_differs_by_boundary_terms() {
        let r = run("lemma7", "");
        assert!(!r.assertable && r.passed());
        let with = r.entry("with_boundary_terms").unwrap();
        assert!(with.rel_err < 1e-8, "{with:?}");
        assert!(r.entry("as_printed").unwrap().abs_err > 1.0);
    }

    #[test]
    fn brackets_agree() {
        let r = run("bracket", "");
        assert!(r.passed(), "{:?}", r.entries);
    }

    #[test]
    fn model_conditional_reports_are_report_only() {
        let ctx = CheckContext {
            f_source: FSource::Model,
            ..CheckContext::default()
        };
        let r = check_identity("lemma9", &Params::new(), &ctx).unwrap();
        assert_eq!(r.identity, "lemma9");
        assert!(!r.assertable && r.passed());
        assert!(r.scales.iter().any(|(k, _)| k == "error_scale"));
    }
}
