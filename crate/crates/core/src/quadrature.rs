//! Numerical integration.
//!
//! Everything in the crate integrates through two entry points:
//!
//! * [`integrate_partitioned`], a globally adaptive 21-point Gauss–Kronrod
//!   integrator. The interval is first cut at every mandatory breakpoint and
//!   then into panels no wider than a caller-supplied width, which is how
//!   oscillatory integrands get resolved; after that the worst panel is bisected
//!   until the error estimate meets the tolerance.
//! * [`GaussLegendre`], a fixed-order rule for integrands known to be smooth
//!   on each piece (the zero-gap intervals of S(t)).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Tolerances and subdivision rules shared by every integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any initial panel.
    pub max_depth: u32,
    /// Points where every integration interval containing them is split.
    pub breakpoints: Vec<f64>,
    /// Where quadrature over an infinite range hands over to an analytic tail.
    pub infinite_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
            breakpoints: Vec::new(),
            infinite_cutoff: 100.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_depth: u32,
        breakpoints: Vec<f64>,
        infinite_cutoff: f64,
    ) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
            breakpoints,
            infinite_cutoff,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default spec with both tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_depth > 60 {
            return Err(domain("max_depth must be at most 60"));
        }
        let largest = self
            .breakpoints
            .iter()
            .fold(f64::NEG_INFINITY, |m, &b| m.max(b.abs()));
        if !(self.infinite_cutoff > largest) || !self.infinite_cutoff.is_finite() {
            return Err(domain(
                "infinite_cutoff must be finite and exceed every breakpoint",
            ));
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_444_764,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 21-point Gauss–Kronrod panel: (value, error, roundoff floor).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    (
        res_k * half,
        rescale_error(err, res_abs, res_asc),
        50.0 * f64::EPSILON * res_abs,
    )
}

#[derive(PartialEq)]
struct ByError(f64, usize);

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

const MAX_PANELS: usize = 400_000;

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_partitioned(f, a, b, &[], f64::INFINITY, spec)
}

/// Integrate `f` over `[a, b]`, splitting first at `spec.breakpoints`, at
/// `breaks`, and then into panels of width at most `max_panel`.
pub fn integrate_partitioned<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_panel: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Estimate::new(0.0, 0.0));
    }
    if a > b {
        let est = integrate_partitioned(f, b, a, breaks, max_panel, spec)?;
        return Ok(Estimate::new(-est.value, est.error));
    }

    let mut cuts: Vec<f64> = spec
        .breakpoints
        .iter()
        .chain(breaks.iter())
        .copied()
        .filter(|&c| c > a && c < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut panels: Vec<Panel> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = if max_panel.is_finite() && max_panel > 0.0 {
            ((hi - lo) / max_panel).ceil().max(1.0) as usize
        } else {
            1
        };
        if panels.len() + pieces > MAX_PANELS {
            return Err(domain("too many initial quadrature panels"));
        }
        let h = (hi - lo) / pieces as f64;
        for k in 0..pieces {
            let pa = lo + h * k as f64;
            let pb = if k + 1 == pieces { hi } else { lo + h * (k + 1) as f64 };
            let (value, error, _) = gk21(&f, pa, pb);
            panels.push(Panel {
                a: pa,
                b: pb,
                value,
                error,
                depth: 0,
            });
        }
    }

    let mut heap: BinaryHeap<ByError> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| ByError(p.error, i))
        .collect();
    let mut total: f64 = panels.iter().map(|p| p.value).sum();
    let mut total_err: f64 = panels.iter().map(|p| p.error).sum();
    // Error that cannot be reduced further: panels already at roundoff level.
    let mut frozen_err = 0.0;

    while total_err > spec.tolerance_for(total) {
        let Some(ByError(_, idx)) = heap.pop() else {
            // Every remaining panel sits at its roundoff floor.
            break;
        };
        let (pa, pb, depth, old_value, old_err) = {
            let p = &panels[idx];
            (p.a, p.b, p.depth, p.value, p.error)
        };
        if depth >= spec.max_depth || panels.len() >= MAX_PANELS {
            return Err(Error::Accuracy {
                estimate: panels.iter().map(|p| p.value).sum(),
                error: total_err,
            });
        }
        let mid = 0.5 * (pa + pb);
        if !(mid > pa && mid < pb) {
            frozen_err += old_err;
            continue;
        }
        let (lv, le, lfloor) = gk21(&f, pa, mid);
        let (rv, re, rfloor) = gk21(&f, mid, pb);
        total += lv + rv - old_value;
        total_err += le + re - old_err;
        panels[idx] = Panel {
            a: pa,
            b: mid,
            value: lv,
            error: le,
            depth: depth + 1,
        };
        panels.push(Panel {
            a: mid,
            b: pb,
            value: rv,
            error: re,
            depth: depth + 1,
        });
        let right = panels.len() - 1;
        for (i, e, floor) in [(idx, le, lfloor), (right, re, rfloor)] {
            if e > floor {
                heap.push(ByError(e, i));
            } else {
                frozen_err += e;
            }
        }
    }
    let _ = frozen_err;

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Estimate::new(value, error))
}

/// Gauss–Legendre rule of fixed order on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
