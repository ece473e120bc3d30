//! Montgomery's pair correlation F(α, T) over a zero set, weighted k̂ sums
//! over zero pairs, and the rearrangements of those sums through F.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::kernels::{k2_transform, khat, KhatMethod, ASYMPTOTIC_FROM};
use crate::quadrature::QuadratureSpec;
use crate::report::{fmt_sig12, CheckReport, Judge};
use crate::s_of_t::SEvaluator;
use crate::zeros::ZeroSet;

/// Rows of the pair triangle handled by one task.
const ROW_CHUNK: usize = 16;

/// The rotation recurrence restarts from exact values this often.
const RESEED_EVERY: usize = 64;

/// w(u) = 4/(4 + u²).
pub fn pair_weight(u: f64) -> f64 {
    4.0 / (4.0 + u * u)
}

/// u²/(4 + u²) = 1 − w(u).
pub fn pair_complement(u: f64) -> f64 {
    u * u / (4.0 + u * u)
}

/// (T/2π) log T.
pub fn pair_normalizer(t: f64) -> f64 {
    t / (2.0 * PI) * t.ln()
}

/// Sampled F(α, T) for α on a uniform grid from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelationCurve {
    pub t: f64,
    pub alpha_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub zero_count: usize,
}

impl PairCorrelationCurve {
    /// `alpha,F` rows with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,F\n");
        for (a, f) in self.alpha_grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", fmt_sig12(*a), fmt_sig12(*f));
        }
        out
    }

    /// Linear interpolation between samples.
    pub fn value_at(&self, alpha: f64) -> Result<f64> {
        let g = &self.alpha_grid;
        let (first, last) = (g[0], *g.last().unwrap());
        if !(alpha >= first && alpha <= last) {
            return Err(domain(format!("alpha {alpha} outside the curve [{first}, {last}]")));
        }
        let i = g.partition_point(|&a| a <= alpha).clamp(1, g.len() - 1);
        let (a0, a1) = (g[i - 1], g[i]);
        let s = (alpha - a0) / (a1 - a0);
        Ok(self.values[i - 1] * (1.0 - s) + self.values[i] * s)
    }
}

/// What F is taken to be beyond the last sample of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// F ≡ 1, the pair correlation conjecture used as a model.
    ConstantOne,
    /// F frozen at its value at the cut.
    LastValue,
}

impl TailModel {
    pub fn as_str(self) -> &'static str {
        match self {
            TailModel::ConstantOne => "constant_one",
            TailModel::LastValue => "last_value",
        }
    }
}

/// Pair weights for [`weighted_khat_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairWeight {
    None,
    W,
    Complement,
}

impl PairWeight {
    fn apply(self, d: f64) -> f64 {
        match self {
            PairWeight::None => 1.0,
            PairWeight::W => pair_weight(d),
            PairWeight::Complement => pair_complement(d),
        }
    }
}

fn pair_ordinates(zeros: &ZeroSet, t: f64) -> Result<&[f64]> {
    if !(t >= 20.0) {
        return Err(domain(format!("T must be at least 20, got {t}")));
    }
    zeros.require_coverage(t)?;
    let ords = zeros.up_to(t);
    if ords.is_empty() {
        return Err(domain("no ordinates up to T"));
    }
    Ok(ords)
}

/// F(α, T) by the double sum over ordered pairs 0 < γ, γ′ ≤ T.
pub fn pcf(alpha: f64, zeros: &ZeroSet, t: f64) -> Result<f64> {
    let ords = pair_ordinates(zeros, t)?;
    let c = alpha * t.ln();
    let (mut re, mut im) = (0.0, 0.0);
    for &g in ords {
        for &h in ords {
            let d = g - h;
            let w = pair_weight(d);
            let (s, co) = (c * d).sin_cos();
            re += w * co;
            im += w * s;
        }
    }
    let norm = pair_normalizer(t);
    if (im / norm).abs() >= 1e-9 {
        return Err(domain(format!("pair sum has imaginary part {}", im / norm)));
    }
    Ok(re / norm)
}

/// F(α, T) on the grid 0, step, 2·step, … ≤ alpha_max. Each pair advances its
/// phase by a fixed rotation per grid step.
pub fn pcf_curve(zeros: &ZeroSet, t: f64, alpha_max: f64, step: f64) -> Result<PairCorrelationCurve> {
    if !(step > 0.0) || !(alpha_max >= 1.0) {
        return Err(domain("need step > 0 and alpha_max >= 1"));
    }
    let ords = pair_ordinates(zeros, t)?;
    let count = (alpha_max / step + 1e-9).floor() as usize + 1;
    let alpha_grid: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
    let c = step * t.ln();
    let n = ords.len();
    let starts: Vec<usize> = (0..n).step_by(ROW_CHUNK).collect();
    let partials: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&r0| {
            let mut acc = vec![0.0; count];
            for i in r0..(r0 + ROW_CHUNK).min(n) {
                for j in (i + 1)..n {
                    let d = ords[j] - ords[i];
                    let w = pair_weight(d);
                    let (rs, rc) = (c * d).sin_cos();
                    let (mut zr, mut zi) = (1.0, 0.0);
                    for (k, slot) in acc.iter_mut().enumerate() {
                        if k % RESEED_EVERY == 0 && k > 0 {
                            let (s, co) = (k as f64 * c * d).sin_cos();
                            zr = co;
                            zi = s;
                        }
                        *slot += w * zr;
                        let nr = zr * rc - zi * rs;
                        zi = zr * rs + zi * rc;
                        zr = nr;
                    }
                }
            }
            acc
        })
        .collect();
    let norm = pair_normalizer(t);
    let mut values = vec![n as f64; count];
    for part in &partials {
        for (v, p) in values.iter_mut().zip(part) {
            *v += 2.0 * p;
        }
    }
    for v in &mut values {
        *v /= norm;
    }
    Ok(PairCorrelationCurve {
        t,
        alpha_grid,
        values,
        zero_count: n,
    })
}

/// ∫ (a + bα)/α^p over [lo, hi], p ∈ {2, 4}.
fn linear_over_power(a: f64, b: f64, lo: f64, hi: f64, power: u32) -> f64 {
    if power == 2 {
        a * (1.0 / lo - 1.0 / hi) + b * (hi / lo).ln()
    } else {
        a * (lo.powi(-3) - hi.powi(-3)) / 3.0 + b * (lo.powi(-2) - hi.powi(-2)) / 2.0
    }
}

/// ∫_1^∞ F(α)/α^p dα: the piecewise-linear curve integrated exactly against
/// α^{-p} on [1, alpha_cut], then the tail model beyond.
pub fn tail_integral(curve: &PairCorrelationCurve, power: u32, alpha_cut: f64, model: TailModel) -> Result<f64> {
    if power != 2 && power != 4 {
        return Err(domain("power must be 2 or 4"));
    }
    let g = &curve.alpha_grid;
    if !(alpha_cut >= 1.0) || alpha_cut > *g.last().unwrap() + 1e-12 || g[0] > 1.0 {
        return Err(domain(format!("curve does not cover [1, {alpha_cut}]")));
    }
    let alpha_cut = alpha_cut.min(*g.last().unwrap());
    let mut knots = vec![(1.0, curve.value_at(1.0)?)];
    for (&a, &f) in g.iter().zip(&curve.values) {
        if a > 1.0 && a < alpha_cut {
            knots.push((a, f));
        }
    }
    let f_cut = curve.value_at(alpha_cut)?;
    if alpha_cut > 1.0 {
        knots.push((alpha_cut, f_cut));
    }
    let mut total = 0.0;
    for w in knots.windows(2) {
        let ((a0, f0), (a1, f1)) = (w[0], w[1]);
        let slope = (f1 - f0) / (a1 - a0);
        total += linear_over_power(f0 - slope * a0, slope, a0, a1, power);
    }
    let level = match model {
        TailModel::ConstantOne => 1.0,
        TailModel::LastValue => f_cut,
    };
    let p = power as f64;
    Ok(total + level * alpha_cut.powf(1.0 - p) / (p - 1.0))
}

/// Per-task memo of k̂ and of the k″ transform on a 1e-9 grid in y. Large
/// arguments use the jump expansion and are not stored.
struct KhatCache<'s> {
    spec: &'s QuadratureSpec,
    k2_method: KhatMethod,
    khat: HashMap<i64, f64>,
    k2: HashMap<i64, f64>,
}

impl<'s> KhatCache<'s> {
    fn new(spec: &'s QuadratureSpec, k2_method: KhatMethod) -> Self {
        Self {
            spec,
            k2_method,
            khat: HashMap::new(),
            k2: HashMap::new(),
        }
    }

    fn key(y: f64) -> i64 {
        (y.abs() * 1e9).round() as i64
    }

    fn khat(&mut self, y: f64) -> Result<f64> {
        if y.abs() >= ASYMPTOTIC_FROM {
            return khat(y, KhatMethod::Auto, self.spec);
        }
        let key = Self::key(y);
        if let Some(&v) = self.khat.get(&key) {
            return Ok(v);
        }
        let v = khat(y, KhatMethod::Auto, self.spec)?;
        self.khat.insert(key, v);
        Ok(v)
    }

    fn k2(&mut self, y: f64) -> Result<f64> {
        if self.k2_method == KhatMethod::Auto && y.abs() >= ASYMPTOTIC_FROM {
            return k2_transform(y, KhatMethod::Auto, self.spec).map(|e| e.value);
        }
        let key = Self::key(y);
        if let Some(&v) = self.k2.get(&key) {
            return Ok(v);
        }
        let v = k2_transform(y, self.k2_method, self.spec)?.value;
        self.k2.insert(key, v);
        Ok(v)
    }
}

/// Σ over ordered pairs of `term(γ − γ′)`: the diagonal plus twice the upper
/// triangle, reduced in a fixed order.
fn pair_reduce<const M: usize, F>(
    ords: &[f64],
    spec: &QuadratureSpec,
    k2_method: KhatMethod,
    term: F,
) -> Result<[f64; M]>
where
    F: Fn(f64, &mut KhatCache) -> Result<[f64; M]> + Sync,
{
    let n = ords.len();
    let starts: Vec<usize> = (0..n).step_by(ROW_CHUNK).collect();
    let partials: Vec<Result<[f64; M]>> = starts
        .par_iter()
        .map(|&r0| {
            let mut cache = KhatCache::new(spec, k2_method);
            let mut acc = [0.0; M];
            for i in r0..(r0 + ROW_CHUNK).min(n) {
                for j in (i + 1)..n {
                    let v = term(ords[j] - ords[i], &mut cache)?;
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += x;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut cache = KhatCache::new(spec, k2_method);
    let diag = term(0.0, &mut cache)?;
    let mut total = [0.0; M];
    for part in partials {
        let part = part?;
        for (t, p) in total.iter_mut().zip(part) {
            *t += 2.0 * p;
        }
    }
    for (t, d) in total.iter_mut().zip(diag) {
        *t += n as f64 * d;
    }
    Ok(total)
}

/// Σ_{0<γ,γ′≤T} k̂((γ−γ′) log x) · weight(γ−γ′).
pub fn weighted_khat_sum(zeros: &ZeroSet, t: f64, x: f64, weight: PairWeight, spec: &QuadratureSpec) -> Result<f64> {
    if !(x >= 4.0) {
        return Err(domain(format!("x must be at least 4, got {x}")));
    }
    let ords = pair_ordinates(zeros, t)?;
    let l = x.ln();
    let [v] = pair_reduce(ords, spec, KhatMethod::Auto, |d, c| {
        Ok([c.khat(d * l)? * weight.apply(d)])
    })?;
    Ok(v)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// Pair sums shared by the rearrangements: Σ k̂·w, Σ k̂·(1−w), Σ K2·w and
/// Σ w cos(d log x), with K2(y) = ∫k″(u)e(−uy)du.
struct PairSums {
    khat_w: f64,
    khat_comp: f64,
    k2_w: f64,
    cos_w: f64,
}

fn pair_sums(ords: &[f64], l: f64, k2_method: KhatMethod, spec: &QuadratureSpec) -> Result<PairSums> {
    let [khat_w, khat_comp, k2_w, cos_w] = pair_reduce(ords, spec, k2_method, |d, c| {
        let y = d * l;
        let kh = c.khat(y)?;
        let w = pair_weight(d);
        Ok([kh * w, kh * pair_complement(d), c.k2(y)? * w, w * y.cos()])
    })?;
    Ok(PairSums {
        khat_w,
        khat_comp,
        k2_w,
        cos_w,
    })
}

/// ∫F(α) k(α/2πβ) dα and ∫F(α) k″(α/2πβ) dα over ℝ with F expanded as its
/// defining pair sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMoments {
    pub f_beta: f64,
    pub int_f_k: f64,
    pub int_f_k2: f64,
}

fn kernel_moments(sums: &PairSums, t: f64, beta: f64) -> KernelMoments {
    let norm = pair_normalizer(t);
    let scale = 2.0 * PI * beta / norm;
    KernelMoments {
        f_beta: sums.cos_w / norm,
        int_f_k: scale * sums.khat_w,
        int_f_k2: scale * sums.k2_w,
    }
}

/// The complement-weighted k̂ sum against its rewriting through F(β) and
/// ∫F k″. The k″ transform is taken by quadrature, independently of k̂.
pub fn lemma5_check(zeros: &ZeroSet, t: f64, beta: f64, spec: &QuadratureSpec) -> Result<CheckReport> {
    check_beta(beta)?;
    let ords = pair_ordinates(zeros, t)?;
    let l = beta * t.ln();
    let sums = pair_sums(ords, l, KhatMethod::Direct, spec)?;
    let m = kernel_moments(&sums, t, beta);
    let log_t = t.ln();
    let rhs = PI * PI * t / (16.0 * log_t) * m.f_beta / (beta * beta)
        - t / (64.0 * PI.powi(4) * log_t * beta.powi(3)) * m.int_f_k2;
    let mut report = CheckReport::new("lemma5", 1e-4, true);
    report.push("complement_weighted_sum", sums.khat_comp, rhs, Judge::Relative);
    report.scale("T", t);
    report.scale("beta", beta);
    report.scale("zero_count", ords.len() as f64);
    report.scale("F_beta", m.f_beta);
    Ok(report)
}

/// R split into its three terms, with the pair-sum value it regroups and,
/// for small T, R from its time integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RDecomposition {
    pub r_total: f64,
    pub term_main: f64,
    pub term_f_beta: f64,
    pub term_k2_integral: f64,
    pub beta: f64,
    pub x: f64,
    /// Σ k̂((γ−γ′) log x) / (π² log x), summed directly.
    pub pair_sum_value: f64,
    pub moments: KernelMoments,
    pub r_direct: Option<f64>,
}

/// Largest T for which R is also computed from its time integral.
pub const R_DIRECT_MAX_T: f64 = 500.0;

/// The decomposition of R, plus R from its time integral when T ≤ 500 and
/// the zeros reach 50/log x beyond T.
pub fn lemma6_eval(ev: &SEvaluator, t: f64, beta: f64, spec: &QuadratureSpec) -> Result<RDecomposition> {
    let mut d = r_decomposition(ev.zeros(), t, beta, spec)?;
    let l = d.x.ln();
    if t <= R_DIRECT_MAX_T && ev.zeros().t_max() >= t + crate::s_of_t::ZERO_WINDOW / l {
        d.r_direct = Some(ev.r_direct(t, d.x, spec)?);
    }
    Ok(d)
}

/// R's three terms from the zero pairs up to T, and the pair sum they regroup.
pub fn r_decomposition(zeros: &ZeroSet, t: f64, beta: f64, spec: &QuadratureSpec) -> Result<RDecomposition> {
    check_beta(beta)?;
    let ords = pair_ordinates(zeros, t)?;
    let log_t = t.ln();
    let l = beta * log_t;
    let x = l.exp();
    let sums = pair_sums(ords, l, KhatMethod::Auto, spec)?;
    let m = kernel_moments(&sums, t, beta);
    let term_main = t / (2.0 * PI * PI * beta).powi(2) * m.int_f_k;
    let term_f_beta = t / (16.0 * log_t * log_t) * m.f_beta / beta.powi(3);
    let term_k2_integral = t / (64.0 * PI.powi(6) * beta.powi(4) * log_t * log_t) * m.int_f_k2;
    let total = weighted_khat_sum(zeros, t, x, PairWeight::None, spec)?;
    Ok(RDecomposition {
        r_total: term_main + term_f_beta - term_k2_integral,
        term_main,
        term_f_beta,
        term_k2_integral,
        beta,
        x,
        pair_sum_value: total / (PI * PI * l),
        moments: m,
        r_direct: None,
    })
}

/// Report for the R decomposition: the regrouping is asserted, the time
/// integral is compared against the log³T remainder scale only.
pub fn lemma6_report(d: &RDecomposition, t: f64) -> CheckReport {
    let mut report = CheckReport::new("lemma6", 1e-6, true);
    report.push("regrouped_terms", d.r_total, d.pair_sum_value, Judge::Relative);
    let scale = t.ln().powi(3);
    report.scale("T", t);
    report.scale("beta", d.beta);
    report.scale("x", d.x);
    report.scale("term_main", d.term_main);
    report.scale("term_F_beta", d.term_f_beta);
    report.scale("term_k2_integral", d.term_k2_integral);
    report.scale("log3_T", scale);
    match d.r_direct {
        Some(r) => {
            report.push("time_integral", r, d.r_total, Judge::ReportOnly);
            report.note("time_integral compares the literal integral over [1, T] with the pair-sum form; they differ by a remainder of order log^3 T");
        }
        None => report.note("time integral not computed: T too large or zeros do not extend past T by 50/log x"),
    }
    report
}
