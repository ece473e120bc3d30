//! Special functions used across the crate.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Even-index Bernoulli numbers B_2, B_4, ..., B_30 as exact fractions.
const BERNOULLI_FRACTIONS: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// B_{2k} for 1 ≤ k ≤ 15.
pub fn bernoulli_even(k: usize) -> f64 {
    assert!((1..=15).contains(&k), "B_2k available for 1 <= k <= 15");
    let (n, d) = BERNOULLI_FRACTIONS[k - 1];
    n / d
}

/// Principal-branch continuation of ln Γ(z) for Re z > 0, continuous in z.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = Complex64::new(0.0, 0.0);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=8 {
        let kf = k as f64;
        series += pow * (bernoulli_even(k) / (2.0 * kf * (2.0 * kf - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Sine and cosine integrals (Si(x), Ci(x)) for x > 0.
pub fn si_ci(x: f64) -> (f64, f64) {
    let (s, c) = si_ci_tails(x);
    (FRAC_PI_2 - s, -c)
}

/// (π/2 − Si(x), −Ci(x)), i.e. ∫_x^∞ sin(u)/u du and ∫_x^∞ cos(u)/u du,
/// without the cancellation of forming them from Si and Ci.
fn si_ci_tails(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "si_ci needs x > 0");
    if x <= 2.0 {
        let x2 = x * x;
        let mut si = 0.0;
        let mut ci = 0.0;
        // odd = (-1)^k x^(2k+1)/(2k+1)!, even = (-1)^k x^(2k)/(2k)!
        let mut odd = x;
        let mut even = 1.0;
        for k in 0..40 {
            let kf = k as f64;
            si += odd / (2.0 * kf + 1.0);
            if k > 0 {
                ci += even / (2.0 * kf);
            }
            even = -even * x2 / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
            odd = -odd * x2 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
            if odd.abs() < 1e-18 * si.abs() && even.abs() < 1e-18 {
                break;
            }
        }
        (FRAC_PI_2 - si, -(euler_constant() + x.ln() + ci))
    } else {
        // Lentz continued fraction for E1(ix).
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 2..200 {
            let a = -((i - 1) * (i - 1)) as f64;
            b += 2.0;
            d = (d * a + b).inv();
            c = b + c.inv() * a;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(x.cos(), -x.sin());
        (-h.im, h.re)
    }
}

/// ∫_L^∞ cos(b u) u^{-p} du for integer p ≥ 2 and L > 0.
pub fn cos_power_tail(b: f64, l: f64, p: u32) -> f64 {
    assert!(p >= 2 && l > 0.0);
    let b = b.abs();
    let pf = p as f64;
    if b == 0.0 {
        return l.powf(1.0 - pf) / (pf - 1.0);
    }
    let bl = b * l;
    if bl >= 40.0 {
        // Asymptotic series of ∫_L^∞ e^{ibu} u^{-p} du.
        let mut term = Complex64::new(0.0, 1.0 / b) * l.powf(-pf);
        let mut sum = term;
        for n in 0..200 {
            let next = term * Complex64::new(0.0, -(pf + n as f64) / bl);
            if next.norm() >= term.norm() || next.norm() < 1e-18 * sum.norm() {
                break;
            }
            term = next;
            sum += term;
        }
        return (sum * Complex64::from_polar(1.0, bl)).re;
    }
    let (mut s, mut c) = si_ci_tails(bl);
    let (sn, cs) = bl.sin_cos();
    for q in 2..=p {
        let qm = (q - 1) as f64;
        let lp = l.powf(qm);
        let c_next = cs / (qm * lp) - b / qm * s;
        let s_next = sn / (qm * lp) + b / qm * c;
        c = c_next;
        s = s_next;
    }
    c
}

/// Euler's constant, computed once by Euler–Maclaurin summation of the harmonic series.
pub fn euler_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| euler_constant_by_harmonic(100))
}

/// γ = H_N − ln N − 1/(2N) + Σ B_2k/(2k N^2k).
pub fn euler_constant_by_harmonic(n: u32) -> f64 {
    let nf = n as f64;
    // sum smallest terms first
    let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    let mut corr = 0.0;
    let inv2 = 1.0 / (nf * nf);
    let mut pow = inv2;
    for k in 1..=6 {
        corr += bernoulli_even(k) / (2.0 * k as f64) * pow;
        pow *= inv2;
    }
    h - nf.ln() - 0.5 / nf + corr
}

/// Brent–McMillan: γ ≈ A(n)/B(n) − ln n with error about e^{-4n}.
pub fn euler_constant_by_bessel(n: u32) -> f64 {
    let nf = n as f64;
    let mut a_sum = 0.0;
    let mut b_sum = 0.0;
    let mut term = 1.0; // (n^k / k!)^2
    let mut harmonic = 0.0;
    let mut k = 0u32;
    loop {
        a_sum += term * harmonic;
        b_sum += term;
        k += 1;
        let kf = k as f64;
        term *= (nf / kf) * (nf / kf);
        harmonic += 1.0 / kf;
        if term < 1e-20 * b_sum {
            break;
        }
    }
    a_sum / b_sum - nf.ln()
}
