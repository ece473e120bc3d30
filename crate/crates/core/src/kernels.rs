//! The smoothing weight f, the kernel k with its derivatives, and the Fourier
//! transform of k.
//!
//! k is built from g(u) = 1/(2u) − (π²/2)cot(π²u) as g² on |u| ≤ 1/2π and is
//! 1/(4u²) outside. Writing z = π²u, g = (π²/2)(1/z − cot z), so near 0 the
//! power series of 1/z − cot z avoids the cancellation between the two terms.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_partitioned, Estimate, QuadratureSpec};
use crate::special::{bernoulli_even, cos_power_tail};

/// The kernel breakpoint 1/2π.
pub const BREAKPOINT: f64 = 1.0 / (2.0 * PI);

/// Beyond this |y| the transform is summed from its jump expansion.
pub const ASYMPTOTIC_FROM: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    F,
    K,
    KPrime,
    KDoublePrime,
}

/// One-sided limit selector at u = ±1/2π. `Left` is the limit from below in
/// u, `Right` from above; `Auto` means `Right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelId {
    pub which: Which,
    pub side: Side,
}

impl KernelId {
    pub fn new(which: Which) -> Self {
        Self {
            which,
            side: Side::Auto,
        }
    }

    pub fn sided(which: Which, side: Side) -> Self {
        Self { which, side }
    }
}

/// Coefficients c_n of 1/z − cot z = Σ c_n z^{2n−1}.
fn cot_gap_coeffs() -> &'static [f64; 15] {
    static COEFFS: OnceLock<[f64; 15]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = [0.0; 15];
        let mut fact = 1.0; // (2n)!
        let mut pow2 = 1.0; // 2^{2n}
        for n in 1..=15 {
            let nf = n as f64;
            fact *= (2.0 * nf - 1.0) * (2.0 * nf);
            pow2 *= 4.0;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            c[n - 1] = sign * pow2 * bernoulli_even(n) / fact;
        }
        c
    })
}

/// (1/z − cot z) and its first two derivatives, for 0 ≤ z ≤ π/2.
fn cot_gap(z: f64) -> (f64, f64, f64) {
    if z < 0.5 {
        let c = cot_gap_coeffs();
        let z2 = z * z;
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        // Horner over n = 15..1 of c_n z^{2n−1}, (2n−1)c_n z^{2n−2}, (2n−1)(2n−2)c_n z^{2n−3}
        for n in (1..=15).rev() {
            let nf = n as f64;
            v = v * z2 + c[n - 1];
            d1 = d1 * z2 + (2.0 * nf - 1.0) * c[n - 1];
            if n >= 2 {
                d2 = d2 * z2 + (2.0 * nf - 1.0) * (2.0 * nf - 2.0) * c[n - 1];
            }
        }
        (v * z, d1, d2 * z)
    } else {
        let (s, co) = z.sin_cos();
        let cot = co / s;
        let csc2 = 1.0 / (s * s);
        (
            1.0 / z - cot,
            -1.0 / (z * z) + csc2,
            2.0 / (z * z * z) - 2.0 * csc2 * cot,
        )
    }
}

/// g and its first two derivatives on the inner branch, 0 ≤ u ≤ 1/2π.
fn inner_g(u: f64) -> (f64, f64, f64) {
    let p2 = PI * PI;
    let (v, d1, d2) = cot_gap(p2 * u);
    (0.5 * p2 * v, 0.5 * p2 * p2 * d1, 0.5 * p2 * p2 * p2 * d2)
}

/// k and its first two derivatives for u ≥ 0, on the branch chosen by `inner`.
fn branch(u: f64, inner: bool) -> (f64, f64, f64) {
    if inner {
        let (g, g1, g2) = inner_g(u);
        (g * g, 2.0 * g * g1, 2.0 * (g1 * g1 + g * g2))
    } else {
        let u2 = u * u;
        (0.25 / u2, -0.5 / (u2 * u), 1.5 / (u2 * u2))
    }
}

/// Whether |u| uses the inner branch for a one-sided derivative.
fn uses_inner(u: f64, side: Side) -> bool {
    let a = u.abs();
    if a != BREAKPOINT {
        return a < BREAKPOINT;
    }
    // At |u| = 1/2π a limit from above in u is the inner side only for u < 0.
    match side {
        Side::Left => u > 0.0,
        Side::Right | Side::Auto => u < 0.0,
    }
}

/// k(u), continuous everywhere.
pub fn k_value(u: f64) -> f64 {
    let a = u.abs();
    branch(a, a <= BREAKPOINT).0
}

/// k′(u); `side` matters only at u = ±1/2π.
pub fn k_prime(u: f64, side: Side) -> f64 {
    let d = branch(u.abs(), uses_inner(u, side)).1;
    if u < 0.0 {
        -d
    } else {
        d
    }
}

/// k″(u); `side` matters only at u = ±1/2π.
pub fn k_double_prime(u: f64, side: Side) -> f64 {
    branch(u.abs(), uses_inner(u, side)).2
}

/// f(u) = (π/2)u·cot(πu/2), no domain check.
pub fn f_weight(u: f64) -> f64 {
    let w = 0.5 * PI * u;
    if w.abs() < 0.5 {
        let c = cot_gap_coeffs();
        let w2 = w * w;
        let mut s = 0.0;
        for n in (1..=15).rev() {
            s = s * w2 + c[n - 1];
        }
        1.0 - s * w2
    } else if u.abs() == 1.0 {
        0.0
    } else {
        w / w.tan()
    }
}

/// Evaluate f, k, k′ or k″ at u.
pub fn eval_kernel(id: KernelId, u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(domain("kernel argument must be finite"));
    }
    match id.which {
        Which::F => {
            if !(0.0..=1.0).contains(&u) {
                return Err(domain(format!("f is defined on [0, 1], got u = {u}")));
            }
            Ok(f_weight(u))
        }
        Which::K => Ok(k_value(u)),
        Which::KPrime => Ok(k_prime(u, id.side)),
        Which::KDoublePrime => Ok(k_double_prime(u, id.side)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KhatMethod {
    /// Quadrature of k(u)e(−uy).
    Direct,
    /// −(2πy)^{-2}∫k″(u)e(−uy)du + (π³/2y²)cos y.
    Closed,
    /// Jump expansion for |y| ≥ 40, otherwise quadrature of the inner branch
    /// with the outer branch integrated in closed form.
    Auto,
}

fn panel_width(y: f64) -> f64 {
    if y == 0.0 {
        0.25
    } else {
        0.25f64.min(PI / (2.0 * y.abs()))
    }
}

/// Where quadrature of the outer branch hands over to its exact tail.
fn handover(b: f64, spec: &QuadratureSpec) -> f64 {
    if b == 0.0 {
        spec.infinite_cutoff
    } else {
        (40.0 / b).clamp(BREAKPOINT, spec.infinite_cutoff)
    }
}

/// 2∫_0^∞ k^{(order)}(u)cos(bu)du with quadrature up to `upper` and the exact
/// power-law tail beyond it. `order` is 0 or 2.
fn cosine_transform(order: u8, b: f64, upper: f64, y: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let panel = panel_width(y);
    let inner = integrate_partitioned(
        |u: f64| {
            let (k0, _, k2) = branch(u, true);
            let v = if order == 0 { k0 } else { k2 };
            v * (b * u).cos()
        },
        0.0,
        BREAKPOINT,
        &[],
        panel,
        spec,
    )?;
    let outer = if upper > BREAKPOINT {
        integrate_partitioned(
            |u: f64| {
                let (k0, _, k2) = branch(u, false);
                let v = if order == 0 { k0 } else { k2 };
                v * (b * u).cos()
            },
            BREAKPOINT,
            upper,
            &[],
            panel,
            spec,
        )?
    } else {
        Estimate::new(0.0, 0.0)
    };
    let tail = if order == 0 {
        0.25 * cos_power_tail(b, upper, 2)
    } else {
        1.5 * cos_power_tail(b, upper, 4)
    };
    let tail_err = 1e-15 * tail.abs().max(1e-300);
    Ok(Estimate::new(
        2.0 * (inner.value + outer.value + tail),
        2.0 * (inner.error + outer.error + tail_err),
    ))
}

/// ∫ over [−L, L] of k^{(order)}(u)sin(bu), which must vanish for an even kernel.
fn sine_residue(order: u8, b: f64, upper: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let est = integrate_partitioned(
        |u: f64| {
            let (k0, _, k2) = branch(u.abs(), u.abs() <= BREAKPOINT);
            let v = if order == 0 { k0 } else { k2 };
            v * (b * u).sin()
        },
        -upper,
        upper,
        &[-BREAKPOINT, BREAKPOINT],
        panel_width(y),
        spec,
    )?;
    Ok(est.value)
}

fn check_real(residue: f64, spec: &QuadratureSpec) -> Result<()> {
    if residue.abs() > spec.abs_tol {
        return Err(Error::Accuracy {
            estimate: residue,
            error: residue.abs(),
        });
    }
    Ok(())
}

/// Taylor coefficients of k about 1/2π from each side, combined into
/// J_n = n!(k_n^left − k_n^right), the n-th derivative jump.
fn jump_coeffs() -> &'static [f64] {
    static J: OnceLock<Vec<f64>> = OnceLock::new();
    J.get_or_init(|| {
        const N: usize = 100;
        // tan z = Σ t_n z^n from (n+1)t_{n+1} = [n = 0] + Σ t_j t_{n−j}
        let mut t = vec![0.0f64; N + 1];
        for n in 0..N {
            let conv: f64 = (0..=n).map(|j| t[j] * t[n - j]).sum();
            t[n + 1] = ((n == 0) as u8 as f64 + conv) / (n as f64 + 1.0);
        }
        let p2 = PI * PI;
        // inner g in powers of h = u − 1/2π: 1/(2u) term plus −(π²/2)cot(π/2 + π²h)
        let mut g = vec![0.0f64; N + 1];
        let mut pow_a = 1.0; // (−2π)^n
        let mut pow_p = 1.0; // π^{2n}
        for n in 0..=N {
            g[n] = PI * pow_a + 0.5 * p2 * t[n] * pow_p;
            pow_a *= -2.0 * PI;
            pow_p *= p2;
        }
        let mut j = vec![0.0f64; N + 1];
        let mut fact = 1.0;
        let mut pow_a = 1.0;
        for n in 0..=N {
            let left: f64 = (0..=n).map(|i| g[i] * g[n - i]).sum();
            let right = p2 * (n as f64 + 1.0) * pow_a;
            j[n] = fact * (left - right);
            fact *= n as f64 + 1.0;
            pow_a *= -2.0 * PI;
        }
        j
    })
}

/// 2Re[e^{iba} Σ_{n ≥ 0} (−1)^{n+lag} J_{n+first}/(ib)^{n+lag+1}] with a = 1/2π.
/// The transform of k uses first = 1, lag = 1; that of k″ uses first = 2, lag = 0.
fn jump_series(b: f64, first: usize, lag: u32) -> Estimate {
    let j = jump_coeffs();
    let step = Complex64::new(0.0, 1.0 / b); // (−1)/(ib)
    let mut factor = Complex64::new(0.0, -1.0 / b) * step.powu(lag);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut err = f64::INFINITY;
    // Odd and even jumps differ in size, so terms are taken in pairs.
    for pair in j[first..].chunks_exact(2) {
        let t0 = factor * pair[0];
        let t1 = factor * step * pair[1];
        let size = t0.norm() + t1.norm();
        if size > last {
            break;
        }
        sum += t0 + t1;
        err = size;
        if size <= 1e-17 * sum.norm() {
            break;
        }
        last = size;
        factor *= step * step;
    }
    let phase = Complex64::from_polar(1.0, b * BREAKPOINT);
    Estimate::new(2.0 * (phase * sum).re, 2.0 * err)
}

/// k̂(y) = ∫k(u)e(−uy)du with an error estimate.
pub fn khat_estimate(y: f64, method: KhatMethod, spec: &QuadratureSpec) -> Result<Estimate> {
    if !y.is_finite() {
        return Err(domain("k-hat argument must be finite"));
    }
    let b = 2.0 * PI * y.abs();
    match method {
        KhatMethod::Direct => {
            let upper = handover(b, spec);
            let est = cosine_transform(0, b, upper, y, spec)?;
            check_real(sine_residue(0, b, upper, y, spec)?, spec)?;
            Ok(est)
        }
        KhatMethod::Closed => {
            if y.abs() <= 1e-3 {
                return Err(domain("closed form of k-hat needs |y| > 1e-3"));
            }
            let k2 = k2_transform(y, KhatMethod::Direct, spec)?;
            let jump = PI.powi(3) * y.cos() / (2.0 * y * y);
            Ok(Estimate::new(-k2.value / (b * b) + jump, k2.error / (b * b)))
        }
        KhatMethod::Auto => {
            if y.abs() >= ASYMPTOTIC_FROM {
                Ok(jump_series(b, 1, 1))
            } else {
                cosine_transform(0, b, BREAKPOINT, y, spec)
            }
        }
    }
}

/// k̂(y) by the chosen route.
pub fn khat(y: f64, method: KhatMethod, spec: &QuadratureSpec) -> Result<f64> {
    khat_estimate(y, method, spec).map(|e| e.value)
}

/// ∫k″(u)e(−uy)du over ℝ. `Direct` and `Closed` both mean quadrature here;
/// `Auto` switches to the jump expansion for |y| ≥ 40.
pub fn k2_transform(y: f64, method: KhatMethod, spec: &QuadratureSpec) -> Result<Estimate> {
    if !y.is_finite() {
        return Err(domain("transform argument must be finite"));
    }
    let b = 2.0 * PI * y.abs();
    match method {
        KhatMethod::Direct | KhatMethod::Closed => {
            let upper = handover(b, spec);
            let est = cosine_transform(2, b, upper, y, spec)?;
            check_real(sine_residue(2, b, upper, y, spec)?, spec)?;
            Ok(est)
        }
        KhatMethod::Auto => {
            if y.abs() >= ASYMPTOTIC_FROM {
                Ok(jump_series(b, 2, 0))
            } else {
                cosine_transform(2, b, BREAKPOINT, y, spec)
            }
        }
    }
}

/// ∫_0^β T^{−2α} k^{(order)}(α/2πβ) dα for order 0 or 2. The argument stays on
/// the inner branch, so the integrand is smooth.
pub fn damped_kernel_integral(order: u8, beta: f64, t: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(beta > 0.0) || !(t > 1.0) {
        return Err(domain("need beta > 0 and T > 1"));
    }
    if order != 0 && order != 2 {
        return Err(domain("order must be 0 or 2"));
    }
    let lam = 2.0 * t.ln();
    let scale = 2.0 * PI * beta;
    integrate_partitioned(
        |a: f64| {
            let (k0, _, k2) = branch((a / scale).min(BREAKPOINT), true);
            let v = if order == 0 { k0 } else { k2 };
            (-lam * a).exp() * v
        },
        0.0,
        beta,
        &[],
        beta / 8.0,
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw_k(u: f64) -> f64 {
        let g = 1.0 / (2.0 * u) - 0.5 * PI * PI / (PI * PI * u).tan();
        g * g
    }

    #[test]
    fn kernel_examples() {
        let f = eval_kernel(KernelId::new(Which::F), 1.0).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(eval_kernel(KernelId::new(Which::K), 1.0).unwrap(), 0.25);
        let p2 = PI * PI;
        let left = branch(BREAKPOINT, true).0;
        let right = branch(BREAKPOINT, false).0;
        assert!((left - p2).abs() < 1e-13 && (right - p2).abs() < 1e-13);
        assert!(eval_kernel(KernelId::new(Which::F), 1.5).is_err());
        assert!(eval_kernel(KernelId::new(Which::F), -0.1).is_err());
    }

    #[test]
    fn one_sided_constants() {
        let pi = PI;
        let cases = [
            (Which::KDoublePrime, 0.0, Side::Auto, pi.powi(8) / 18.0),
            (Which::KPrime, BREAKPOINT, Side::Right, -4.0 * pi.powi(3)),
            (Which::KPrime, BREAKPOINT, Side::Left, -4.0 * pi.powi(3) + pi.powi(5)),
            (Which::KDoublePrime, BREAKPOINT, Side::Right, 24.0 * pi.powi(4)),
            (
                Which::KDoublePrime,
                BREAKPOINT,
                Side::Left,
                pi.powi(8) / 2.0 - 4.0 * pi.powi(6) + 24.0 * pi.powi(4),
            ),
        ];
        for (which, u, side, expect) in cases {
            let v = eval_kernel(KernelId::sided(which, side), u).unwrap();
            assert!((v - expect).abs() <= 1e-11 * expect.abs(), "{which:?} {side:?}: {v} vs {expect}");
        }
        assert_eq!(k_prime(0.0, Side::Auto), 0.0);
        // odd derivative mirrors with swapped sides
        let l = k_prime(-BREAKPOINT, Side::Right);
        assert!((l - (4.0 * pi.powi(3) - pi.powi(5))).abs() < 1e-9);
        let r = k_double_prime(-BREAKPOINT, Side::Left);
        assert!((r - 24.0 * pi.powi(4)).abs() < 1e-9);
    }

    #[test]
    fn series_matches_raw_formula() {
        let u = 1e-3;
        let rel = (k_value(u) - raw_k(u)).abs() / k_value(u);
        assert!(rel < 1e-8, "{rel}");
        // both sides of the series switch
        let z_switch = 0.5 / (PI * PI);
        for u in [z_switch * 0.999_999, z_switch * 1.000_001, 0.1] {
            assert!((k_value(u) - raw_k(u)).abs() < 1e-12 * k_value(u).max(1.0));
        }
        // leading behaviour (π⁴u/6)²
        let u = 1e-5;
        let lead = (PI.powi(4) * u / 6.0).powi(2);
        assert!((k_value(u) / lead - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for u in [0.01, 0.05, 0.12, 0.3, 2.0] {
            let d1 = (k_value(u + h) - k_value(u - h)) / (2.0 * h);
            let d2 = (k_prime(u + h, Side::Auto) - k_prime(u - h, Side::Auto)) / (2.0 * h);
            assert!((d1 - k_prime(u, Side::Auto)).abs() < 1e-6 * d1.abs().max(1.0), "u={u}");
            assert!(
                (d2 - k_double_prime(u, Side::Auto)).abs() < 1e-6 * d2.abs().max(1.0),
                "u={u}"
            );
        }
    }

    #[test]
    fn kernel_nonnegative_and_outer_exact() {
        for i in 0..10_000 {
            let u = -10.0 + 20.0 * i as f64 / 9_999.0;
            let k = k_value(u);
            assert!(k >= 0.0);
            if u.abs() > BREAKPOINT {
                assert_eq!(k, 0.25 / (u * u));
            }
        }
    }

    #[test]
    fn first_jump_is_pi_fifth() {
        let j = jump_coeffs();
        assert_eq!(j[0].abs() < 1e-9, true);
        assert!((j[1] - PI.powi(5)).abs() < 1e-9 * PI.powi(5));
        let k2_jump = 24.0 * PI.powi(4) - (PI.powi(8) / 2.0 - 4.0 * PI.powi(6) + 24.0 * PI.powi(4));
        assert!((j[2] + k2_jump).abs() < 1e-9 * k2_jump.abs());
    }

    #[test]
    fn transform_at_zero() {
        let spec = QuadratureSpec::with_tolerance(1e-11);
        let total = khat(0.0, KhatMethod::Direct, &spec).unwrap();
        let inner = crate::quadrature::integrate(|u: f64| branch(u, true).0, 0.0, BREAKPOINT, &spec)
            .unwrap()
            .value;
        assert!((total - (2.0 * inner + PI)).abs() < 1e-9, "{total}");
        let auto = khat(0.0, KhatMethod::Auto, &spec).unwrap();
        assert!((total - auto).abs() < 1e-9);
        let k2 = k2_transform(0.0, KhatMethod::Direct, &spec).unwrap().value;
        assert!((k2 - 2.0 * PI.powi(5)).abs() < 1e-7, "{k2}");
    }

    #[test]
    fn direct_and_closed_agree() {
        let spec = QuadratureSpec::with_tolerance(1e-9);
        for y in [0.5, 1.0, 3.0] {
            let d = khat(y, KhatMethod::Direct, &spec).unwrap();
            let c = khat(y, KhatMethod::Closed, &spec).unwrap();
            assert!((d - c).abs() < 1e-7, "y={y}: {d} vs {c}");
        }
        assert!(khat(1e-4, KhatMethod::Closed, &spec).is_err());
    }

    #[test]
    fn jump_expansion_matches_quadrature() {
        let spec = QuadratureSpec::with_tolerance(1e-12);
        for y in [40.0, 57.3, 120.0, 1000.5] {
            let q = khat(y, KhatMethod::Direct, &spec).unwrap();
            let a = khat(y, KhatMethod::Auto, &spec).unwrap();
            assert!((q - a).abs() < 1e-10 * q.abs().max(1e-3), "y={y}: {q} vs {a}");
            let q2 = k2_transform(y, KhatMethod::Direct, &spec).unwrap().value;
            let a2 = k2_transform(y, KhatMethod::Auto, &spec).unwrap().value;
            assert!((q2 - a2).abs() < 1e-9 * q2.abs().max(1.0), "y={y}: {q2} vs {a2}");
        }
        // handover continuity of the auto route
        let below = khat(ASYMPTOTIC_FROM - 1e-9, KhatMethod::Auto, &spec).unwrap();
        let above = khat(ASYMPTOTIC_FROM, KhatMethod::Auto, &spec).unwrap();
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn transform_decays_like_inverse_square() {
        let spec = QuadratureSpec::with_tolerance(1e-9);
        for i in 0..50 {
            let y = 1.0 + i as f64 * 49.0 / 49.0;
            let v = khat(y, KhatMethod::Auto, &spec).unwrap();
            assert!((v * y * y).abs() <= 2.0 * PI.powi(3), "y={y}");
        }
    }

    #[test]
    fn damped_integral_orders() {
        let spec = QuadratureSpec::with_tolerance(1e-12);
        assert!(damped_kernel_integral(1, 0.5, 100.0, &spec).is_err());
        let v = damped_kernel_integral(0, 0.5, 100.0, &spec).unwrap().value;
        assert!(v > 0.0);
    }

    proptest! {
        #[test]
        fn f_is_one_plus_quadratic(u in 1e-6f64..0.5) {
            prop_assert!((f_weight(u) - 1.0).abs() <= u * u);
        }

        #[test]
        fn k_is_even(u in -5.0f64..5.0) {
            prop_assert_eq!(k_value(u), k_value(-u));
            prop_assert_eq!(k_prime(u, Side::Auto), -k_prime(-u, Side::Auto));
            prop_assert_eq!(k_double_prime(u, Side::Auto), k_double_prime(-u, Side::Auto));
        }

        #[test]
        fn khat_is_even(y in 0.01f64..80.0) {
            let spec = QuadratureSpec::with_tolerance(1e-10);
            let a = khat(y, KhatMethod::Auto, &spec).unwrap();
            let b = khat(-y, KhatMethod::Auto, &spec).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
