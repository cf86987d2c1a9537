//! Adaptive Gauss-Kronrod quadrature in one and two dimensions.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Panels before adaptation starts.
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            initial_panels: 32,
            max_panels: 4000,
        }
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst panel until the total
/// error estimate meets `max(abs, rel * |value|)`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Estimate {
    let n0 = tol.initial_panels.max(1);
    let w = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(n0 * 2);
    let (mut value, mut error) = (0.0, 0.0);
    for i in 0..n0 {
        let lo = a + i as f64 * w;
        let hi = if i + 1 == n0 { b } else { lo + w };
        let (v, e) = gk15(&mut f, lo, hi);
        value += v;
        error += e;
        heap.push(Panel { a: lo, b: hi, value: v, error: e });
    }
    let mut evaluations = 15 * n0;
    while error > tol.abs.max(tol.rel * value.abs()) && heap.len() < tol.max_panels {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed the drift of the running totals.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Estimate {
        value,
        error,
        evaluations,
    }
}

/// Nested 2D integral over `[x0, x1] x [y0, y1]`.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    tol: Tolerance,
) -> Estimate {
    let inner_tol = Tolerance {
        rel: tol.rel * 0.1,
        abs: tol.abs * 0.1 / (x1 - x0).abs().max(f64::MIN_POSITIVE),
        ..tol
    };
    let mut evals = 0usize;
    let mut inner_err = 0.0;
    let outer = integrate(
        |x| {
            let r = integrate(|y| f(x, y), y0, y1, inner_tol);
            evals += r.evaluations;
            inner_err = f64::max(inner_err, r.error);
            r.value
        },
        x0,
        x1,
        tol,
    );
    Estimate {
        value: outer.value,
        error: outer.error + inner_err * (x1 - x0).abs(),
        evaluations: evals,
    }
}

/// Integrates `f(z, p)` against a region shaped by the Gaussian with
/// precision matrix `a` (so `exp(-q^T a q / 2)`), centred at `center`.
///
/// The box is `+-n_sigma` along the whitened coordinates u with
/// `q = center + L u`, `L L^T = a^{-1}`, so the integrand is sampled where
/// the Gaussian lives regardless of its tilt or scale.
pub fn integrate_gaussian_box(
    f: impl Fn(f64, f64) -> f64,
    a: [[f64; 2]; 2],
    center: (f64, f64),
    n_sigma: f64,
    tol: Tolerance,
) -> Option<Estimate> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det > 0.0 && a[0][0] > 0.0) {
        return None;
    }
    // covariance = a^{-1}, Cholesky factor L
    let c00 = a[1][1] / det;
    let c01 = -a[0][1] / det;
    let c11 = a[0][0] / det;
    let l00 = c00.sqrt();
    let l10 = c01 / l00;
    let l11 = (c11 - l10 * l10).max(0.0).sqrt();
    let jac = l00 * l11;
    let r = integrate_2d(
        |u, v| {
            let z = center.0 + l00 * u;
            let p = center.1 + l10 * u + l11 * v;
            f(z, p) * jac
        },
        (-n_sigma, n_sigma),
        (-n_sigma, n_sigma),
        tol,
    );
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, Tolerance::default());
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_1d() {
        let r = integrate(|x| (-x * x).exp(), -10.0, 10.0, Tolerance::default());
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand_adapts() {
        let eps = 1e-4;
        let r = integrate(
            |x| eps / (x * x + eps * eps),
            -1.0,
            1.0,
            Tolerance {
                initial_panels: 2,
                ..Tolerance::default()
            },
        );
        let exact = 2.0 * (1.0 / eps).atan();
        assert!(((r.value - exact) / exact).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn tilted_gaussian_box() {
        let a = [[4.0, 1.5], [1.5, 1.0]];
        let det: f64 = 4.0 - 2.25;
        let f = |z: f64, p: f64| (-0.5 * (a[0][0] * z * z + 2.0 * a[0][1] * z * p + a[1][1] * p * p)).exp();
        let r = integrate_gaussian_box(
            |z, p| f(z - 1.0, p + 2.0),
            a,
            (1.0, -2.0),
            10.0,
            Tolerance::default(),
        )
        .unwrap();
        let exact = 2.0 * std::f64::consts::PI / det.sqrt();
        assert!(((r.value - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn indefinite_form_rejected() {
        assert!(integrate_gaussian_box(|_, _| 1.0, [[1.0, 2.0], [2.0, 1.0]], (0.0, 0.0), 5.0, Tolerance::default()).is_none());
    }
}
