//! The second-moment asymptotic assembled from its parts: the conjectural
//! shape of F, the closed form of G + H, the conditional evaluations of
//! ∫F k and ∫F k″, and the report comparing ∫_0^T S² with the prediction.

use std::f64::consts::PI;

use serde_json::{Map, Value};

use crate::error::{domain, Result};
use crate::kernels::{damped_kernel_integral, k_double_prime, k_value, Side, BREAKPOINT};
use crate::pair_correlation::{pcf_curve, r_decomposition, tail_integral, PairCorrelationCurve, RDecomposition, TailModel};
use crate::primes::{euler_constant, prime_power_constant, signed_prime_power_constant, PrimeTable};
use crate::quadrature::{integrate_partitioned, QuadratureSpec};
use crate::report::{fmt_sig12, json_number, CheckReport, Judge};
use crate::s_of_t::SEvaluator;
use crate::zeros::ZeroSet;

/// C = −2 log 2π − 2.
pub fn pair_constant() -> f64 {
    -2.0 * (2.0 * PI).ln() - 2.0
}

/// Parameters of the conjectural pair correlation shape at height T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FModel {
    pub t: f64,
    pub epsilon: f64,
    /// 1 − 3 log log T / log T.
    pub regime_boundary: f64,
}

impl FModel {
    pub fn new(t: f64, epsilon: f64) -> Result<Self> {
        if !(t >= 20.0) || !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(domain("model needs T >= 20 and 0 < epsilon < 1/2"));
        }
        let lt = t.ln();
        Ok(Self {
            t,
            epsilon,
            regime_boundary: 1.0 - 3.0 * lt.ln() / lt,
        })
    }

    /// Sizes of the terms dropped from the first branch, at α:
    /// α T^{α−1} + 1/(T^{(1/2−ε)α} log T).
    pub fn dropped_terms(&self, alpha: f64) -> f64 {
        let a = alpha.abs();
        let lt = self.t.ln();
        a * self.t.powf(a - 1.0) + 1.0 / (self.t.powf((0.5 - self.epsilon) * a) * lt)
    }
}

/// Main terms of the conjectured F: α + T^{−2α}(log T + C) up to the regime
/// boundary, α up to 1, and 1 beyond. Even in α.
pub fn conjectural_f(alpha: f64, model: &FModel) -> f64 {
    let a = alpha.abs();
    if a <= model.regime_boundary {
        a + model.t.powf(-2.0 * a) * (model.t.ln() + pair_constant())
    } else if a <= 1.0 {
        a
    } else {
        1.0
    }
}

/// (T/2π²)[−log log x + log(π/2) − π²/8 + 1 − C₀ + Σ(1/m − 1/m²)p^{−m}].
pub fn g_plus_h_closed(t: f64, x: f64) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(domain(format!("closed form needs x >= 16, got {x}")));
    }
    let bracket = -x.ln().ln() + (PI / 2.0).ln() - PI * PI / 8.0 + 1.0 - euler_constant() + prime_power_constant();
    Ok(t / (2.0 * PI * PI) * bracket)
}

/// The predicted ∫_0^T S² split into its four terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremRhs {
    pub loglog: f64,
    pub f_tail: f64,
    pub euler: f64,
    pub prime_sum: f64,
    /// loglog + f_tail + euler + prime_sum, in that order.
    pub total: f64,
    /// The same prediction written with +Σ(−1/m + 1/m²)p^{−m}.
    pub signed_form: f64,
    pub bracket: f64,
    pub signed_bracket: f64,
}

pub fn theorem_rhs(t: f64, f_tail: f64) -> Result<TheoremRhs> {
    if !(t >= 100.0) {
        return Err(domain(format!("prediction needs T >= 100, got {t}")));
    }
    let scale = t / (2.0 * PI * PI);
    let c0 = euler_constant();
    let loglog = scale * t.ln().ln();
    let f_part = scale * f_tail;
    let euler = scale * c0;
    let prime_sum = -scale * prime_power_constant();
    let bracket = f_tail + c0 - prime_power_constant();
    let signed_bracket = f_tail + c0 + signed_prime_power_constant();
    Ok(TheoremRhs {
        loglog,
        f_tail: f_part,
        euler,
        prime_sum,
        total: loglog + f_part + euler + prime_sum,
        signed_form: loglog + scale * signed_bracket,
        bracket,
        signed_bracket,
    })
}

/// Where ∫_1^∞ F/α² comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FSource {
    Empirical,
    Model,
}

impl FSource {
    pub fn as_str(self) -> &'static str {
        match self {
            FSource::Empirical => "empirical",
            FSource::Model => "model",
        }
    }
}

/// 16π²β² log²T ∫_0^β T^{−2α} k(α/2πβ) dα, the integration-by-parts image of
/// ∫_0^β T^{−2α} k″(α/2πβ) dα when boundary terms are ignored.
pub fn damped_k2_transformed(beta: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lt = t.ln();
    Ok(16.0 * PI * PI * beta * beta * lt * lt * damped_kernel_integral(0, beta, t, spec)?.value)
}

/// The F-dependent inputs of the conditional evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FInputs {
    /// ∫_ℝ F(α) k(α/2πβ) dα.
    pub int_f_k: f64,
    /// ∫_ℝ F(α) k″(α/2πβ) dα.
    pub int_f_k2: f64,
    pub f_beta: f64,
    /// ∫_1^∞ F/α² and ∫_1^∞ F/α⁴.
    pub tail2: f64,
    pub tail4: f64,
    /// R assembled from its three terms.
    pub r: f64,
}

fn assemble_r(t: f64, beta: f64, int_f_k: f64, f_beta: f64, int_f_k2: f64) -> f64 {
    let lt = t.ln();
    t / (2.0 * PI * PI * beta).powi(2) * int_f_k + t / (16.0 * lt * lt) * f_beta / beta.powi(3)
        - t / (64.0 * PI.powi(6) * beta.powi(4) * lt * lt) * int_f_k2
}

/// Inputs from the model F: quadrature over [0, 1] split at β and at the
/// regime boundary, exact beyond 1 where F = 1 and k(α/2πβ) = π²β²/α².
pub fn model_inputs(t: f64, beta: f64, spec: &QuadratureSpec) -> Result<FInputs> {
    let model = FModel::new(t, 0.01)?;
    let scale = 2.0 * PI * beta;
    let breaks = [beta, model.regime_boundary];
    let side = |a: f64| if a / scale <= BREAKPOINT { Side::Left } else { Side::Right };
    let half_k = integrate_partitioned(
        |a: f64| conjectural_f(a, &model) * k_value(a / scale),
        0.0,
        1.0,
        &breaks,
        0.05,
        spec,
    )?;
    let half_k2 = integrate_partitioned(
        |a: f64| conjectural_f(a, &model) * k_double_prime(a / scale, side(a)),
        0.0,
        1.0,
        &breaks,
        0.05,
        spec,
    )?;
    let b2 = beta * beta;
    let int_f_k = 2.0 * (half_k.value + PI * PI * b2);
    let int_f_k2 = 2.0 * (half_k2.value + 8.0 * PI.powi(4) * b2 * b2);
    let f_beta = conjectural_f(beta, &model);
    Ok(FInputs {
        int_f_k,
        int_f_k2,
        f_beta,
        tail2: 1.0,
        tail4: 1.0 / 3.0,
        r: assemble_r(t, beta, int_f_k, f_beta, int_f_k2),
    })
}

/// Inputs from the zero pairs up to T; the α tails come from the sampled curve.
pub fn empirical_inputs(d: &RDecomposition, curve: &PairCorrelationCurve, alpha_cut: f64, tail: TailModel) -> Result<FInputs> {
    Ok(FInputs {
        int_f_k: d.moments.int_f_k,
        int_f_k2: d.moments.int_f_k2,
        f_beta: d.moments.f_beta,
        tail2: tail_integral(curve, 2, alpha_cut, tail)?,
        tail4: tail_integral(curve, 4, alpha_cut, tail)?,
        r: d.r_total,
    })
}

/// Both sides of the conditional evaluations of ∫F k, ∫F k″ and R, with the
/// sizes of their error terms. Returned in that order; all report-only.
pub fn lemma_8_9_10_eval(t: f64, beta: f64, inputs: &FInputs, source: FSource, spec: &QuadratureSpec) -> Result<Vec<CheckReport>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    let lt = t.ln();
    let c = pair_constant();
    let b2 = beta * beta;
    let damped = damped_kernel_integral(0, beta, t, spec)?.value;
    let decay = lt / t.powf(0.5 * beta);
    let label = source.as_str();

    let mut l8 = CheckReport::new("lemma8", 0.0, false);
    let rhs8 = 2.0 * PI * PI * b2 * (1.0 - PI * PI / 8.0 + (PI / 2.0).ln() + inputs.tail2 - beta.ln())
        + 2.0 * (lt + c) * damped;
    l8.push(format!("int_F_k_{label}"), inputs.int_f_k, rhs8, Judge::ReportOnly);
    l8.scale("error_scale", 1.0 / (b2 * lt.powi(4)) + decay + b2 / (lt * lt));
    l8.scale("tail2", inputs.tail2);
    l8.scale("damped_integral", damped);

    let mut l9 = CheckReport::new("lemma9", 0.0, false);
    let transformed = damped_k2_transformed(beta, t, spec)?;
    let rhs9 = 4.0 * PI.powi(6) * b2 - 24.0 * PI.powi(4) * b2 * b2
        + 48.0 * PI.powi(4) * b2 * b2 * inputs.tail4
        + 2.0 * (lt + c) * transformed;
    l9.push(format!("int_F_k2_{label}"), inputs.int_f_k2, rhs9, Judge::ReportOnly);
    l9.scale("error_scale", 1.0 / (lt * lt) + decay);
    l9.scale("tail4", inputs.tail4);
    l9.scale("damped_k2_transformed", transformed);

    let mut l10 = CheckReport::new("lemma10", 0.0, false);
    let rhs10 = t / (2.0 * PI * PI) * (1.0 - PI * PI / 8.0 + (PI / 2.0).ln() + inputs.tail2 - beta.ln())
        + 3.0 * t / (8.0 * PI * PI * lt * lt)
        - 3.0 * t / (4.0 * PI * PI * lt * lt) * inputs.tail4;
    l10.push(format!("R_{label}"), inputs.r, rhs10, Judge::ReportOnly);
    l10.scale("error_scale", t / (lt * lt) + t / (b2 * b2 * lt.powi(4)));
    l10.note("the F/alpha^2 integral runs over [1, inf); a lower limit of 0 would diverge");

    for r in [&mut l8, &mut l9, &mut l10] {
        r.scale("T", t);
        r.scale("beta", beta);
        r.note("conditional asymptotic: main terms compared, error terms printed as error_scale");
    }
    Ok(vec![l8, l9, l10])
}

/// Settings for [`full_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub alpha_max: f64,
    pub alpha_step: f64,
    pub tail_model: TailModel,
    pub f_tail_source: FSource,
    /// Also compare ∫_1^T S² + G + H with R.
    pub identity_check: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            alpha_max: 4.0,
            alpha_step: 0.01,
            tail_model: TailModel::ConstantOne,
            f_tail_source: FSource::Empirical,
            identity_check: true,
        }
    }
}

/// ∫_0^T S² against the predicted main terms.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub t: f64,
    pub x: f64,
    pub beta: f64,
    pub lhs: f64,
    pub rhs: TheoremRhs,
    pub f_tail_source: FSource,
    pub discrepancy_abs: f64,
    pub discrepancy_rel: f64,
    pub notes: Vec<String>,
    pub curve: PairCorrelationCurve,
}

impl MomentReport {
    pub fn to_json(&self) -> Value {
        let mut rhs = Map::new();
        rhs.insert("loglog".into(), json_number(self.rhs.loglog));
        rhs.insert("f_tail".into(), json_number(self.rhs.f_tail));
        rhs.insert("euler".into(), json_number(self.rhs.euler));
        rhs.insert("prime_sum".into(), json_number(self.rhs.prime_sum));
        let mut obj = Map::new();
        obj.insert("T".into(), json_number(self.t));
        obj.insert("x".into(), json_number(self.x));
        obj.insert("beta".into(), json_number(self.beta));
        obj.insert("lhs".into(), json_number(self.lhs));
        obj.insert("rhs_theorem".into(), Value::Object(rhs));
        obj.insert("rhs_goldston".into(), json_number(self.rhs.signed_form));
        obj.insert("f_tail_source".into(), Value::String(self.f_tail_source.as_str().into()));
        obj.insert("discrepancy_abs".into(), json_number(self.discrepancy_abs));
        obj.insert("discrepancy_rel".into(), json_number(self.discrepancy_rel));
        obj.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
        );
        Value::Object(obj)
    }
}

/// ∫_0^T S² from the zeros against the prediction with ∫_1^∞ F/α² taken
/// from the sampled pair correlation (or the model value 1). Needs x = T^β
/// with β < 1/2.
pub fn full_report(
    t: f64,
    x: f64,
    zeros: &ZeroSet,
    primes: &PrimeTable,
    spec: &QuadratureSpec,
    opts: &ReportOptions,
) -> Result<MomentReport> {
    if !(t >= 100.0) || !(x >= 16.0) {
        return Err(domain(format!("report needs T >= 100 and x >= 16, got T={t}, x={x}")));
    }
    let beta = x.ln() / t.ln();
    if !(beta < 0.5) {
        return Err(domain(format!("need x < sqrt(T); beta = {beta}")));
    }
    zeros.require_coverage(t)?;
    let ev = SEvaluator::new(zeros, primes);
    let lhs = ev.second_moment(t)?;
    let curve = pcf_curve(zeros, t, opts.alpha_max, opts.alpha_step)?;
    let tail_one = tail_integral(&curve, 2, opts.alpha_max, TailModel::ConstantOne)?;
    let tail_last = tail_integral(&curve, 2, opts.alpha_max, TailModel::LastValue)?;
    let f_tail = match (opts.f_tail_source, opts.tail_model) {
        (FSource::Model, _) => 1.0,
        (FSource::Empirical, TailModel::ConstantOne) => tail_one,
        (FSource::Empirical, TailModel::LastValue) => tail_last,
    };
    let rhs = theorem_rhs(t, f_tail)?;
    let discrepancy_abs = lhs - rhs.total;
    let mut notes = vec![
        format!(
            "F tail integral over [1, inf): {} with F = 1 beyond alpha = {}, {} with F frozen there; using {}",
            fmt_sig12(tail_one),
            fmt_sig12(opts.alpha_max),
            fmt_sig12(tail_last),
            match opts.f_tail_source {
                FSource::Model => "the model value 1".to_string(),
                FSource::Empirical => opts.tail_model.as_str().to_string(),
            }
        ),
        format!(
            "pair correlation sampled on [0, {}] with step {} over {} zeros",
            fmt_sig12(opts.alpha_max),
            fmt_sig12(opts.alpha_step),
            curve.zero_count
        ),
        format!(
            "prediction with the -1/m + 1/m^2 prime sum: {}",
            fmt_sig12(rhs.signed_form)
        ),
        "error term O(T/log^2 T) not included; log log T is nearly constant at this height".to_string(),
    ];
    if opts.identity_check {
        let d = r_decomposition(zeros, t, beta, spec)?;
        let mv = ev.g_and_h_direct(t, x)?;
        let from_one = ev.second_moment_from_one(t)?;
        let left = from_one + mv.g + mv.h;
        notes.push(format!(
            "squared explicit formula: int_1^T S^2 + G + H = {} against R = {}; difference {} on a scale T^(1/2) x^(1/2) = {}",
            fmt_sig12(left),
            fmt_sig12(d.r_total),
            fmt_sig12(left - d.r_total),
            fmt_sig12((t * x).sqrt())
        ));
        notes.push(format!(
            "G = {} (sum formula {}), H = {} (sum formula {}), G + H closed form {}",
            fmt_sig12(mv.g),
            fmt_sig12(mv.g_formula),
            fmt_sig12(mv.h),
            fmt_sig12(mv.h_formula),
            fmt_sig12(g_plus_h_closed(t, x)?)
        ));
    }
    Ok(MomentReport {
        t,
        x,
        beta,
        lhs,
        rhs,
        f_tail_source: opts.f_tail_source,
        discrepancy_abs,
        discrepancy_rel: discrepancy_abs / rhs.total,
        notes,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::build_prime_table;
    use crate::zeros::find_zeros;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn model_branches() {
        let m = FModel::new(10f64.exp(), 0.01).unwrap();
        let want = 8.0 - 2.0 * (2.0 * PI).ln();
        assert!((conjectural_f(0.0, &m) - want).abs() < 1e-12);
        assert!((want - 4.324_245_867_181_309).abs() < 1e-12);
        assert_eq!(conjectural_f(1.0, &m), 1.0);
        assert_eq!(conjectural_f(2.0, &m), 1.0);
        assert_eq!(conjectural_f(-0.3, &m), conjectural_f(0.3, &m));
        assert!(m.regime_boundary > 0.0 && m.regime_boundary < 1.0);
        // the jump at the boundary is the dropped first-branch term, within the dropped sizes
        let b = m.regime_boundary;
        let jump = conjectural_f(b, &m) - conjectural_f(b + 1e-12, &m);
        assert!(jump > 0.0 && jump < m.dropped_terms(b), "{jump}");
    }

    #[test]
    fn brackets_agree() {
        for f in [0.0, 0.5, 1.0, 1.7] {
            let r = theorem_rhs(1000.0, f).unwrap();
            assert!((r.bracket - r.signed_bracket).abs() <= 1e-15);
            assert_eq!(r.total, r.loglog + r.f_tail + r.euler + r.prime_sum);
        }
        let r = theorem_rhs(1000.0, 1.0).unwrap();
        assert!((r.bracket - (1.0 + euler_constant() - prime_power_constant())).abs() < 1e-15);
        assert!(theorem_rhs(50.0, 1.0).is_err());
    }

    #[test]
    fn g_plus_h_is_linear_and_decreasing() {
        let a = g_plus_h_closed(1000.0, 100.0).unwrap();
        assert_eq!(g_plus_h_closed(2000.0, 100.0).unwrap(), 2.0 * a);
        assert!(g_plus_h_closed(1000.0, 1000.0).unwrap() < a);
        assert!(g_plus_h_closed(1000.0, 10.0).is_err());
    }

    #[test]
    fn g_plus_h_matches_sum_formulas() {
        let zeros = find_zeros(1000.0).unwrap();
        let primes = build_prime_table(10_000).unwrap();
        let ev = SEvaluator::new(&zeros, &primes);
        // the sum formulas do not need x ≤ √T; evaluate them through a short range
        let mv = ev.g_and_h_direct(1000.0, 31.0).unwrap();
        let closed = g_plus_h_closed(1000.0, 31.0).unwrap();
        let b = crate::primes::prime_sum_terms(31, &primes).unwrap();
        let lx = 31f64.ln();
        let slack = 1000.0 / (2.0 * PI * PI) * (b.s4 + 1.0 / lx.powi(4) + b.tail_bound_s3);
        assert!((mv.g_formula + mv.h_formula - closed).abs() < 10.0 * slack, "{mv:?} {closed}");
    }

    #[test]
    fn model_gap_shrinks_with_height() {
        let mut gaps = Vec::new();
        for lt in [8.0, 10.0, 12.0] {
            let t = f64::exp(lt);
            let inputs = model_inputs(t, 0.5, &spec()).unwrap();
            let reports = lemma_8_9_10_eval(t, 0.5, &inputs, FSource::Model, &spec()).unwrap();
            gaps.push(reports[0].entries[0].abs_err);
            assert!(reports.iter().all(|r| r.passed()));
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn report_schema_and_model_isolation() {
        let zeros = find_zeros(500.0).unwrap();
        let primes = build_prime_table(100).unwrap();
        let opts = ReportOptions {
            alpha_step: 0.02,
            identity_check: false,
            ..ReportOptions::default()
        };
        let a = full_report(500.0, 20.0, &zeros, &primes, &spec(), &opts).unwrap();
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let keys = [
            "\"T\"", "\"x\"", "\"beta\"", "\"lhs\"", "\"rhs_theorem\"", "\"loglog\"", "\"f_tail\"", "\"euler\"",
            "\"prime_sum\"", "\"rhs_goldston\"", "\"f_tail_source\"", "\"discrepancy_abs\"", "\"discrepancy_rel\"",
            "\"notes\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let model = ReportOptions {
            f_tail_source: FSource::Model,
            ..opts.clone()
        };
        let b = full_report(500.0, 20.0, &zeros, &primes, &spec(), &model).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.rhs.loglog, b.rhs.loglog);
        assert_eq!(a.rhs.euler, b.rhs.euler);
        assert_eq!(a.rhs.prime_sum, b.rhs.prime_sum);
        assert_ne!(a.rhs.f_tail, b.rhs.f_tail);
        assert!(full_report(500.0, 40.0, &zeros, &primes, &spec(), &opts).is_err());
        assert!(full_report(800.0, 20.0, &zeros, &primes, &spec(), &opts).is_err());
    }
}
