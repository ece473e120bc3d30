//! Zeros of ζ on the critical line: the Riemann–Siegel functions θ and Z, a
//! sign-change zero finder validated against the smooth zero count, and the
//! plain-text zeros file format.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::special::{bernoulli_even, ln_gamma};

/// Lowest height at which the asymptotic θ series is used.
pub const THETA_SERIES_FROM: f64 = 10.0;

/// Below this height Z is evaluated from an Euler–Maclaurin ζ instead of the
/// Riemann–Siegel expansion, whose error is about 1e-5 near t = 10.
const EULER_MACLAURIN_BELOW: f64 = 60.0;

/// Riemann–Siegel theta from its asymptotic series, t ≥ 10.
pub fn theta(t: f64) -> Result<f64> {
    if !(t >= THETA_SERIES_FROM) {
        return Err(domain(format!("theta series needs t >= 10, got {t}")));
    }
    Ok(theta_series(t))
}

fn theta_series(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * 127.0 / 430080.0)))
}

/// θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π, valid for every real t.
pub fn theta_exact(t: f64) -> f64 {
    if t < 0.0 {
        return -theta_exact(-t);
    }
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// θ by the series where it is accurate, by log-Gamma below 10.
pub fn theta_any(t: f64) -> f64 {
    if t >= THETA_SERIES_FROM {
        theta_series(t)
    } else {
        theta_exact(t)
    }
}

/// An antiderivative of θ for t ≥ 10, used for exact block averages of S.
pub fn theta_integral(t: f64) -> f64 {
    let t2 = t * t;
    let r2 = 1.0 / t2;
    0.25 * t2 * (t / (2.0 * PI)).ln() - 0.125 * t2 - 0.25 * t2 - PI * t / 8.0 + t.ln() / 48.0
        - r2 * (7.0 / 11520.0 + r2 * (31.0 / 322560.0 + r2 * 127.0 / 2580480.0))
}

/// The smooth zero count θ(t)/π + 1.
pub fn smooth_count(t: f64) -> f64 {
    theta_any(t) / PI + 1.0
}

// Riemann–Siegel correction terms C_k(h), h = p − 1/2, as C_k = h^{k mod 2} P_k(h²).
const RS_C0: [f64; 22] = [
    0.3826834323650898, 1.7489618723100817, 2.118025207685496,
    -0.8707216670511481, -3.4733112243465167, -1.6626947308999325,
    1.216731288919232, 1.3014304161007977, 0.03051102182736167,
    -0.3755803051545095, -0.1085784416564066, 0.051832902999549624,
    0.029999480619902277, -0.0022759396706125644, -0.004382647416580339,
    -0.0004064230183729847, 0.0004006097785422114, 8.971057991388841e-05,
    -2.3025650027239108e-05, -9.380006601906792e-06, 6.323514947609108e-07,
    6.551022819231502e-07,
];
const RS_C1: [f64; 23] = [
    -0.053650205256750697, 0.11027818741081483, 1.2317200154315227,
    1.2634964862799458, -1.695108997559503, -2.9998711967650102,
    -0.10819944959899208, 1.9407662946212714, 0.7838423561500687,
    -0.5054829667900366, -0.38450723496057976, 0.03747264646531532,
    0.09092026610973176, 0.01044923755006451, -0.012582979651583417,
    -0.003399503721151274, 0.0010410950537714891, 0.0005010949051118486,
    -3.956359669003182e-05, -4.7624592453571896e-05, -1.8539355338085133e-06,
    3.1936918080068973e-06, 4.0907807608506065e-07,
];
const RS_C2: [f64; 24] = [
    0.005188542830293168, 0.0012378633552253898, -0.18137505725166997,
    0.14291492748532125, 1.3303391766687565, 0.3522472353403734,
    -2.421001595891951, -1.6760787022538108, 1.3689416723328371,
    1.5539019430222982, -0.1722164273472998, -0.6359068055045431,
    -0.09911649873041208, 0.14033480067387008, 0.04782352019827292,
    -0.017356040641479782, -0.010225012534028593, 0.0009274149159794888,
    0.0013572194372373386, 6.41369012029388e-05, -0.0001230080569819663,
    -1.83135074047892e-05, 7.821628604322627e-06, 2.0087542484759946e-06,
];
const RS_C3: [f64; 24] = [
    -0.0026794321814389136, 0.02995372109103515, -0.042570172541828696,
    -0.28997965779803886, 0.4888831999235446, 1.230855876395746,
    -0.8297560708527408, -2.249763536666567, 0.07845139961005472,
    1.7467492800868893, 0.45968080979749937, -0.6619353471039775,
    -0.31590441036173633, 0.12844792545207495, 0.10073382716626152,
    -0.009530183848825268, -0.019264421687514088, -0.001246463715876929,
    0.0024243969641103086, 0.000437647697741857, -0.00020714032687001792,
    -6.274344504186516e-05, 1.157534381459567e-05, 5.88385492454038e-06,
];
const RS_C4: [f64; 25] = [
    0.00046483389361763383, -0.004022642946136188, 0.003847177051796127,
    0.06581175135809486, -0.19604124343694448, -0.20854053686358853,
    0.9507754185141751, 0.5341535312914873, -1.67634944117634,
    -1.076747157875129, 1.235339301656597, 1.0257825340057276,
    -0.40124095793988546, -0.5036663995108304, 0.03573487795502745,
    0.14431763086785418, 0.01509152741790347, -0.026098874779194363,
    -0.006126628379519262, 0.003077503129870841, 0.0011562478934088753,
    -0.00022775966758472127, -0.00014189637118181445, 7.4648603079559195e-06,
    1.2479701645409117e-05,
];

fn correction(coeffs: &[f64], h: f64, odd: bool) -> f64 {
    let h2 = h * h;
    let v = coeffs.iter().rev().fold(0.0, |acc, &c| acc * h2 + c);
    if odd {
        v * h
    } else {
        v
    }
}

fn riemann_siegel(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor();
    let h = a - n - 0.5;
    let th = theta_series(t);
    let mut main = 0.0;
    for k in 1..=(n as u64) {
        let kf = k as f64;
        main += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    let terms: [(&[f64], bool); 5] = [
        (&RS_C0, false),
        (&RS_C1, true),
        (&RS_C2, false),
        (&RS_C3, true),
        (&RS_C4, false),
    ];
    let inv_a = 1.0 / a;
    let mut rem = 0.0;
    let mut pow = 1.0;
    for (coeffs, odd) in terms {
        rem += correction(coeffs, h, odd) * pow;
        pow *= inv_a;
    }
    let sign = if (n as u64) % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * rem / a.sqrt()
}

/// ζ(s) by Euler–Maclaurin summation with 50 terms and 10 corrections.
fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    const N: u32 = 50;
    let nf = N as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..N {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp(); // N^{−s}
    sum += n_pow * nf / (s - 1.0) + n_pow * 0.5;
    // Σ B_2k/(2k)! s(s+1)…(s+2k−2) N^{−s−2k+1}
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut fact = 2.0; // (2k)!
    let mut np = n_pow / nf;
    for k in 1..=10 {
        sum += rising * np * (bernoulli_even(k) / fact);
        let kf = k as f64;
        rising *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        fact *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
        np /= nf * nf;
    }
    sum
}

/// ζ(1/2 + it) for moderate t, exposed for cross-checks.
pub fn zeta_critical(t: f64) -> Complex64 {
    zeta_euler_maclaurin(Complex64::new(0.5, t))
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real, for t ≥ 10.
pub fn riemann_siegel_z(t: f64) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(domain(format!("Z(t) needs t >= 10, got {t}")));
    }
    Ok(z_unchecked(t))
}

fn z_unchecked(t: f64) -> f64 {
    if t < EULER_MACLAURIN_BELOW {
        let rot = Complex64::from_polar(1.0, theta_series(t));
        (rot * zeta_critical(t)).re
    } else {
        riemann_siegel(t)
    }
}

/// Where a zero set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Computed,
    Imported,
    /// Caller-supplied ordinates for identity tests; taken as complete.
    Synthetic,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Imported => "imported",
            Source::Synthetic => "synthetic",
        }
    }
}

/// Ascending zero ordinates up to `t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    ordinates: Vec<f64>,
    t_max: f64,
    source: Source,
    claimed_complete: bool,
}

fn check_ordinates(ordinates: &[f64], check_gaps: bool) -> Result<()> {
    for (i, &g) in ordinates.iter().enumerate() {
        if !g.is_finite() || g <= 1.0 {
            return Err(domain(format!("ordinate {g} must be finite and > 1")));
        }
        if i > 0 {
            let prev = ordinates[i - 1];
            if g <= prev {
                return Err(domain(format!("ordinates not increasing at {prev}, {g}")));
            }
            if check_gaps && g - prev >= 10.0 {
                return Err(domain(format!("gap of {} after {prev}", g - prev)));
            }
        }
    }
    Ok(())
}

impl ZeroSet {
    /// A complete-by-construction set of arbitrary ordinates.
    pub fn synthetic(ordinates: Vec<f64>, t_max: f64) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(domain("zero set is empty"));
        }
        check_ordinates(&ordinates, false)?;
        if !(t_max >= *ordinates.last().unwrap()) {
            return Err(domain("t_max must not be below the last ordinate"));
        }
        Ok(Self {
            ordinates,
            t_max,
            source: Source::Synthetic,
            claimed_complete: true,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn claimed_complete(&self) -> bool {
        self.claimed_complete
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// #{γ ≤ t}.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Ordinates γ ≤ t.
    pub fn up_to(&self, t: f64) -> &[f64] {
        &self.ordinates[..self.count_up_to(t)]
    }

    /// Error unless the set is complete through height `t`.
    pub fn require_coverage(&self, t: f64) -> Result<()> {
        if !self.claimed_complete {
            return Err(domain("zero set is not known to be complete"));
        }
        if t > self.t_max {
            return Err(Error::Coverage {
                needed: t,
                available: self.t_max,
            });
        }
        Ok(())
    }

    /// Zeros file text. Ordinates use the shortest decimal that round-trips.
    pub fn export(&self) -> String {
        let mut out = String::new();
        out.push_str("# zeta zero ordinates\n");
        let _ = writeln!(out, "# source: {}", self.source.as_str());
        let _ = writeln!(out, "# t_max: {}", self.t_max);
        for g in &self.ordinates {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    /// Compare the count and block averages of S against the smooth count.
    pub fn validate_counts(&self) -> Result<()> {
        count_check(&self.ordinates, 10.0, self.t_max)
    }
}

/// Mean of S over [a, b] (a ≥ 10) from exact integrals of N and θ.
fn block_mean_s(ordinates: &[f64], a: f64, b: f64) -> f64 {
    let start = ordinates.partition_point(|&g| g <= a);
    let end = ordinates.partition_point(|&g| g <= b);
    // ∫_a^b N = N(a)(b − a) + Σ_{a<γ≤b} (b − γ)
    let mut n_integral = start as f64 * (b - a);
    for &g in &ordinates[start..end] {
        n_integral += b - g;
    }
    let theta_part = (theta_integral(b) - theta_integral(a)) / PI;
    (n_integral - theta_part) / (b - a) - 1.0
}

const BLOCK: f64 = 20.0;
const BLOCK_STRIDE: f64 = 10.0;
const BLOCK_LIMIT: f64 = 0.75;
const COUNT_LIMIT: f64 = 3.0;

/// A zero set missing or duplicating zeros shifts S by an integer over every
/// later block; the block means catch this even where the count check cannot.
fn count_check(ordinates: &[f64], from: f64, to: f64) -> Result<()> {
    let mut a = from;
    while a < to {
        let b = (a + BLOCK).min(to);
        if b - a >= 5.0 {
            let mean = block_mean_s(ordinates, a, b);
            if mean.abs() >= BLOCK_LIMIT {
                return Err(Error::MissedZeros { near: a });
            }
        }
        a += BLOCK_STRIDE;
    }
    if to >= THETA_SERIES_FROM {
        let n = ordinates.partition_point(|&g| g <= to) as f64;
        if (n - smooth_count(to)).abs() >= COUNT_LIMIT {
            return Err(Error::MissedZeros { near: to });
        }
    }
    Ok(())
}

/// Zero-search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    /// Initial grid step for the sign scan.
    pub step: f64,
    /// Bisection stops when the bracket is narrower than this.
    pub tolerance: f64,
    /// The scan and the count check extend this far beyond t_max.
    pub margin: f64,
    /// Number of grid halvings tried when the count check fails.
    pub max_refinements: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            tolerance: 1e-9,
            margin: 10.0,
            max_refinements: 4,
        }
    }
}

/// All zeros in (10, t_max] with default search settings.
pub fn find_zeros(t_max: f64) -> Result<ZeroSet> {
    find_zeros_with(t_max, &SearchOptions::default())
}

pub fn find_zeros_with(t_max: f64, opts: &SearchOptions) -> Result<ZeroSet> {
    if !(15.0..=1e5).contains(&t_max) {
        return Err(domain(format!("t_max must lie in [15, 1e5], got {t_max}")));
    }
    if !(opts.step > 0.0 && opts.step <= 0.05) || !(opts.tolerance > 0.0) {
        return Err(domain("grid step must be in (0, 0.05] and tolerance positive"));
    }
    let end = t_max + opts.margin;
    let mut step = opts.step;
    let mut last_err = None;
    for _ in 0..=opts.max_refinements {
        let found = scan(10.0, end, step, opts.tolerance);
        match count_check(&found, 10.0, end) {
            Ok(()) => {
                let ordinates: Vec<f64> = found.into_iter().filter(|&g| g <= t_max).collect();
                check_ordinates(&ordinates, true)?;
                return Ok(ZeroSet {
                    ordinates,
                    t_max,
                    source: Source::Computed,
                    claimed_complete: true,
                });
            }
            Err(e) => {
                last_err = Some(e);
                step *= 0.5;
            }
        }
    }
    Err(last_err.expect("at least one scan"))
}

/// Sign changes of Z on a uniform grid over [from, to], refined by bisection.
fn scan(from: f64, to: f64, step: f64, tol: f64) -> Vec<f64> {
    let cells = ((to - from) / step).ceil() as usize;
    let grid = |i: usize| if i == cells { to } else { from + step * i as f64 };
    const CHUNK: usize = 512;
    let chunks: Vec<usize> = (0..cells).step_by(CHUNK).collect();
    let mut zeros: Vec<f64> = chunks
        .par_iter()
        .flat_map_iter(|&start| {
            let stop = (start + CHUNK).min(cells);
            let mut out = Vec::new();
            let mut lo = grid(start);
            let mut z_lo = z_unchecked(lo);
            for i in start..stop {
                let hi = grid(i + 1);
                let z_hi = z_unchecked(hi);
                if z_lo == 0.0 {
                    out.push(lo);
                } else if z_lo * z_hi < 0.0 {
                    out.push(bisect(lo, hi, z_lo, tol));
                }
                lo = hi;
                z_lo = z_hi;
            }
            out
        })
        .collect();
    zeros.sort_by(f64::total_cmp);
    zeros.dedup();
    zeros
}

fn bisect(mut lo: f64, mut hi: f64, z_lo: f64, tol: f64) -> f64 {
    let positive = z_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let z = z_unchecked(mid);
        if z == 0.0 {
            return mid;
        }
        if (z > 0.0) == positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Parse a zeros file: one ordinate per line, ascending, `#` comments.
/// A `# t_max: <value>` comment sets the covered height; otherwise it is the
/// last ordinate.
pub fn import_zeros(text: &str) -> Result<ZeroSet> {
    let mut ordinates: Vec<f64> = Vec::new();
    let mut t_max: Option<f64> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("t_max:") {
                let v = v.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad t_max value '{}'", v.trim()),
                })?;
                t_max = Some(v);
            }
            continue;
        }
        let g = line.parse::<f64>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("'{line}' is not a number"),
        })?;
        if !g.is_finite() || g <= 1.0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("ordinate {g} must be finite and > 1"),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if g <= prev {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("ordinate {g} does not exceed the previous {prev}"),
                });
            }
            if g - prev >= 10.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("gap of {} after {prev}", g - prev),
                });
            }
        }
        ordinates.push(g);
    }
    let last = *ordinates
        .last()
        .ok_or_else(|| domain("zeros file contains no ordinates"))?;
    let t_max = t_max.unwrap_or(last);
    if t_max < last {
        return Err(domain(format!("t_max {t_max} is below the last ordinate {last}")));
    }
    let claimed_complete = count_check(&ordinates, 10.0, t_max).is_ok();
    Ok(ZeroSet {
        ordinates,
        t_max,
        source: Source::Imported,
        claimed_complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA1: f64 = 14.134_725_141_734_694;

    #[test]
    fn theta_reference_values() {
        let table = [
            (10.0, -3.067_074_396_289_895_3),
            (14.0, -1.782_948_700_416_149_9),
            (50.0, 26.461_366_070_161_41),
            (100.0, 87.972_165_231_787_22),
            (1000.0, 2034.546_428_038_031_6),
        ];
        for (t, v) in table {
            assert!((theta(t).unwrap() - v).abs() < 1e-10, "t={t}");
            assert!((theta_exact(t) - v).abs() < 1e-10 * v.abs().max(1.0), "t={t}");
        }
        for (t, v) in [
            (1.0, -1.767_547_952_812_290_4),
            (5.0, -3.459_620_375_363_462_5),
            (9.5, -3.176_784_698_854_782_7),
        ] {
            assert!((theta_exact(t) - v).abs() < 1e-12, "t={t}");
        }
        assert!(theta(9.9).is_err());
        assert!(theta(100.0).unwrap() > theta(50.0).unwrap());
    }

    #[test]
    fn theta_antiderivative() {
        let h = 1e-4;
        for t in [10.5, 77.0, 4000.0] {
            let d = (theta_integral(t + h) - theta_integral(t - h)) / (2.0 * h);
            assert!((d - theta_series(t)).abs() < 1e-6 * theta_series(t).abs().max(1.0));
        }
    }

    #[test]
    fn z_reference_values() {
        assert!((riemann_siegel_z(100.0).unwrap() - 2.692_697_056_664_463_5).abs() < 1e-7);
        assert!((riemann_siegel_z(30.0).unwrap() - 0.596_028_519_239_884_96).abs() < 1e-9);
        assert!(riemann_siegel_z(GAMMA1).unwrap().abs() < 1e-9);
        assert!(riemann_siegel_z(9.0).is_err());
        // the two evaluation routes agree where they meet
        for t in [60.0, 75.3] {
            let em = (Complex64::from_polar(1.0, theta_series(t)) * zeta_critical(t)).re;
            assert!((em - riemann_siegel(t)).abs() < 5e-7, "t={t}");
        }
    }

    #[test]
    fn z_squared_is_zeta_modulus() {
        let t = 40.0;
        let z = riemann_siegel_z(t).unwrap();
        assert!((z * z - zeta_critical(t).norm_sqr()).abs() < 1e-12);
        // Z is real: e^{iθ}ζ has no imaginary part
        let rot = Complex64::from_polar(1.0, theta_series(t)) * zeta_critical(t);
        assert!(rot.im.abs() < 1e-10);
    }

    #[test]
    fn first_zero_and_count_to_100() {
        let z = find_zeros(20.0).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z.ordinates()[0] - GAMMA1).abs() < 1e-8);
        let z = find_zeros(100.0).unwrap();
        assert_eq!(z.len(), 29);
        assert_eq!(z.len() as f64, smooth_count(100.0).round());
        for &g in z.ordinates() {
            assert!(riemann_siegel_z(g).unwrap().abs() < 1e-6);
        }
        assert_eq!(find_zeros(100.0).unwrap(), z);
        assert!(find_zeros(5.0).is_err());
    }

    #[test]
    fn coarse_grid_is_refined() {
        // gaps near 1000 are about 0.9, so a 0.05 grid is fine; dropping one zero is caught
        let z = find_zeros(300.0).unwrap();
        let mut missing = z.ordinates().to_vec();
        missing.remove(60);
        assert!(matches!(
            count_check(&missing, 10.0, 300.0),
            Err(Error::MissedZeros { .. })
        ));
    }

    #[test]
    fn import_and_export() {
        let z = import_zeros("14.134725\n21.022040\n25.010858\n").unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(z.t_max(), 25.010858);
        assert_eq!(z.source(), Source::Imported);
        match import_zeros("# header\n21.0\n14.1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match import_zeros("14.1\n15.0\n14.9\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(import_zeros("").is_err());
        assert!(import_zeros("# only a comment\n").is_err());
        let computed = find_zeros(60.0).unwrap();
        let back = import_zeros(&computed.export()).unwrap();
        assert_eq!(back.ordinates(), computed.ordinates());
        assert_eq!(back.t_max(), computed.t_max());
        assert!(back.claimed_complete());
        assert_eq!(back.export().replace("imported", "computed"), computed.export());
    }

    #[test]
    fn incomplete_import_is_flagged() {
        let computed = find_zeros(100.0).unwrap();
        let mut text = String::from("# t_max: 100\n");
        for g in &computed.ordinates()[..20] {
            text.push_str(&format!("{g}\n"));
        }
        let z = import_zeros(&text).unwrap();
        assert!(!z.claimed_complete());
        assert!(z.require_coverage(50.0).is_err());
    }

    #[test]
    fn synthetic_sets() {
        let z = ZeroSet::synthetic(vec![10.0, 10.5], 100.0).unwrap();
        assert!(z.claimed_complete());
        assert_eq!(z.count_up_to(10.2), 1);
        assert!(ZeroSet::synthetic(vec![], 10.0).is_err());
        assert!(ZeroSet::synthetic(vec![3.0, 2.0], 10.0).is_err());
        assert!(matches!(z.require_coverage(200.0), Err(Error::Coverage { .. })));
    }
}
