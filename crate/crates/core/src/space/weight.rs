//! Numerical checks of the three hypotheses on a weight w for w(x)dx to generate a
//! regular space: w ∈ L¹(dx/(1+x²)), ∫ log w/(1+x²) > −∞, and (H̃ log w)′ bounded, where
//! H̃ f(x) = (1/π) PV∫ (1/(x−t) + t/(t²+1)) f(t) dt.

use crate::error::{Error, Result};
use crate::measure::{block_exponent, Exponent, Verdict, DEAD_ZONE};
use crate::numerics::quad::{gl16, graded_edges, panels};
use crate::numerics::Neumaier;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Weights with closed-form logarithms, so tiny values never underflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Constant { value: f64 },
    /// (1 + x²)^p
    Power { p: f64 },
    /// e^{−c|x|}
    ExpAbs { c: f64 },
}

impl WeightSpec {
    pub fn ln_w(&self, x: f64) -> f64 {
        match *self {
            WeightSpec::Constant { value } => value.ln(),
            WeightSpec::Power { p } => p * x.mul_add(x, 1.0).ln(),
            WeightSpec::ExpAbs { c } => -c * x.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightGrid {
    /// Integrals run over [−radius, radius].
    pub radius: f64,
    /// H̃′ is sampled at ±2^j and ±1.5·2^j for j in this range.
    pub ht_levels: (i32, i32),
}

impl Default for WeightGrid {
    fn default() -> Self {
        WeightGrid { radius: 65536.0, ht_levels: (-3, 12) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShellTrend {
    /// ∫ over 2^j ≤ |x| < 2^{j+1}, j = 0, 1, …
    pub shells: Vec<f64>,
    pub exponent: Option<Exponent>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightDiagnostics {
    /// ∫_{−R}^{R} log w/(1+x²).
    pub log_integral: f64,
    pub l1: ShellTrend,
    /// Shells of (log w)₋/(1+x²); convergence means the log integral is > −∞.
    pub log_negative: ShellTrend,
    /// (x, H̃ log w(x), (H̃ log w)′(x)).
    pub ht_samples: Vec<(f64, f64, f64)>,
    pub ht_derivative_sup: f64,
    pub ht_derivative_bounded: bool,
    pub verdict: bool,
}

/// Diagnostics from a sampler of w itself; nonpositive samples are rejected.
pub fn weight_diagnostics_sampled<W>(w: W, grid: &WeightGrid) -> Result<WeightDiagnostics>
where
    W: Fn(f64) -> f64,
{
    let checked = |x: f64| {
        let v = w(x);
        if !(v > 0.0) || !v.is_finite() {
            Err(Error::Invalid(format!("weight sample {v} at x = {x} is not positive")))
        } else {
            Ok(v.ln())
        }
    };
    // probe the integration nodes once so an invalid sample surfaces as an error
    for x in probe_points(grid) {
        checked(x)?;
    }
    weight_diagnostics(|x| checked(x).unwrap_or(f64::NAN), grid)
}

fn probe_points(grid: &WeightGrid) -> Vec<f64> {
    let mut v = vec![0.0];
    let mut x = 1.0 / 64.0;
    while x <= grid.radius {
        v.push(x);
        v.push(-x);
        x *= 1.25;
    }
    v
}

/// Diagnostics from log w.
pub fn weight_diagnostics<L>(ln_w: L, grid: &WeightGrid) -> Result<WeightDiagnostics>
where
    L: Fn(f64) -> f64,
{
    let r = grid.radius;
    if !(r >= 64.0) {
        return Err(Error::Invalid("weight grid radius must be at least 64".into()));
    }
    let levels = r.log2().floor() as i32;
    let lw = |x: f64| {
        let v = ln_w(x);
        if v.is_nan() || v == f64::INFINITY {
            f64::NAN
        } else {
            v
        }
    };

    let core = |f: &dyn Fn(f64) -> f64| gl16().integrate(|x| f(x), -1.0, 0.0) + gl16().integrate(|x| f(x), 0.0, 1.0);
    let shells = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        (0..levels)
            .map(|j| {
                let a = 2f64.powi(j);
                let edges: Vec<f64> = (0..=8).map(|k| a * (1.0 + k as f64 / 8.0)).collect();
                panels(|x| f(x) + f(-x), &edges).0
            })
            .collect()
    };

    let l1_f = |x: f64| (lw(x) - x.mul_add(x, 1.0).ln()).exp();
    let neg_f = |x: f64| (-lw(x)).max(0.0) / x.mul_add(x, 1.0);
    let log_f = |x: f64| lw(x) / x.mul_add(x, 1.0);

    let l1 = trend(shells(&l1_f));
    let log_negative = trend(shells(&neg_f));
    let mut li = Neumaier::new();
    li.add(core(&log_f));
    for s in shells(&log_f) {
        li.add(s);
    }
    let log_integral = li.value();
    if !log_integral.is_finite() && !log_integral.is_infinite() {
        return Err(Error::Invalid("weight sampler returned an invalid value".into()));
    }

    // H̃ log w: the regularizing term is an x-independent constant
    let reg = {
        let f = |t: f64| t / t.mul_add(t, 1.0) * lw(t);
        let mut acc = core(&f);
        for s in shells(&f) {
            acc += s;
        }
        acc
    };
    let ht = |x: f64| (pv_cauchy(&lw, x, r) + reg) / PI;
    let mut samples = Vec::new();
    let (j0, j1) = grid.ht_levels;
    let j1 = j1.min(levels - 4);
    for j in j0..=j1 {
        for m in [1.0, 1.5] {
            for s in [-1.0, 1.0] {
                let x = s * m * 2f64.powi(j);
                let h = 1e-3 * x.abs().max(0.25);
                let d = (ht(x + h) - ht(x - h)) / (2.0 * h);
                samples.push((x, ht(x), d));
            }
        }
    }
    let split = samples.len() / 2;
    let inner = samples[..split].iter().map(|s| s.2.abs()).fold(0.0, f64::max);
    let outer = samples[split..].iter().map(|s| s.2.abs()).fold(0.0, f64::max);
    let ht_derivative_sup = inner.max(outer);
    let ht_derivative_bounded = outer <= 1.1 * inner + 0.05;

    let verdict = l1.verdict == Verdict::Convergent
        && log_negative.verdict == Verdict::Convergent
        && ht_derivative_bounded;
    Ok(WeightDiagnostics {
        log_integral,
        l1,
        log_negative,
        ht_samples: samples,
        ht_derivative_sup,
        ht_derivative_bounded,
        verdict,
    })
}

/// Shell sums decaying geometrically converge; the slope of log(shell) against log(radius)
/// must clear zero by the dead zone or its uncertainty.
fn trend(shells: Vec<f64>) -> ShellTrend {
    // shells that underflow to zero past a point decay faster than any power
    let live = shells.iter().rposition(|s| *s != 0.0).map_or(0, |i| i + 1);
    if live < shells.len() {
        return ShellTrend { shells, exponent: None, verdict: Verdict::Convergent };
    }
    let k = (shells.len() / 2).max(4).min(shells.len());
    let start = shells.len() - k;
    let exponent = block_exponent(&shells[start..], start as i32).ok();
    let verdict = match exponent {
        None => Verdict::Inconclusive,
        Some(e) => {
            let m = e.half_width.max(DEAD_ZONE);
            if e.value + m < 0.0 {
                Verdict::Convergent
            } else if e.value - m >= 0.0 {
                Verdict::Divergent
            } else {
                Verdict::Inconclusive
            }
        }
    };
    ShellTrend { shells, exponent, verdict }
}

/// PV ∫_{−r}^{r} f(t)/(x − t) dt: symmetric excision of radius ε and 2ε, then
/// Richardson 2I(ε) − I(2ε), since I(ε) = PV + O(ε) with an odd remainder of order ε³.
/// Panels are graded toward the excision and toward t = 0, where log w varies on unit scale.
fn pv_cauchy<F: Fn(f64) -> f64>(f: &F, x: f64, r: f64) -> f64 {
    let eps = 1e-4 * x.abs().max(0.25);
    let g = |t: f64| f(t) / (x - t);
    let excised = |e: f64| {
        let mut acc = 0.0;
        for (lo, hi, h_lo, h_hi) in [(-r, x - e, 0.0, e), (x + e, r, e, 0.0)] {
            if hi <= lo {
                continue;
            }
            let mut breaks = vec![(lo, h_lo)];
            if lo < 0.0 && 0.0 < hi {
                breaks.push((0.0, 1.0 / 32.0));
            }
            breaks.push((hi, h_hi));
            for w in breaks.windows(2) {
                acc += panels(g, &two_sided_edges(w[0], w[1])).0;
            }
        }
        acc
    };
    2.0 * excised(eps) - excised(2.0 * eps)
}

/// Edges on [p, q] graded toward each end whose first width is positive.
fn two_sided_edges((p, hp): (f64, f64), (q, hq): (f64, f64)) -> Vec<f64> {
    let mid = 0.5 * (p + q);
    let left = if hp > 0.0 { graded_edges(p, mid, hp) } else { vec![p, mid] };
    let right = if hq > 0.0 { graded_edges(0.0, q - mid, hq) } else { vec![0.0, q - mid] };
    let mut e = left;
    e.extend(right.iter().rev().skip(1).map(|d| q - d));
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weight_passes() {
        let d = weight_diagnostics(|_| 0.0, &WeightGrid::default()).unwrap();
        assert_eq!(d.log_integral, 0.0);
        assert!(d.ht_derivative_sup < 1e-12);
        assert!(d.verdict, "{d:?}");
    }

    #[test]
    fn power_weight_against_closed_form() {
        // H̃ log(1+t²) = −2 arctan x on the line; cutting at |t| = R adds
        // (1/π)∫_{|t|>R} (x/t²)·2 ln t² dt = 4x(ln R + 1)/(πR) up to O(x³/R²)
        let spec = WeightSpec::Power { p: 1.0 };
        let d = weight_diagnostics(|x| spec.ln_w(x), &WeightGrid::default()).unwrap();
        let r = 65536.0f64;
        let cut = 4.0 * (r.ln() + 1.0) / (PI * r);
        for &(x, v, dv) in &d.ht_samples {
            assert!((v - (-2.0 * x.atan() + cut * x)).abs() < 1e-6 * (1.0 + x.abs()), "x={x}: {v}");
            assert!((dv - (-2.0 / (1.0 + x * x) + cut)).abs() < 1e-5, "x={x}: {dv}");
        }
        // ∫ log(1+x²)/(1+x²) = 2π ln 2 on the line; the grid misses ≈ 4(ln R + 1)/R
        assert!((d.log_integral - (2.0 * PI * 2f64.ln() - 4.0 * (r.ln() + 1.0) / r)).abs() < 1e-6);
        assert!(d.ht_derivative_bounded);
        // w/(1+x²) ≡ 1 is not integrable
        assert_eq!(d.l1.verdict, Verdict::Divergent);
        assert!(!d.verdict);
    }

    #[test]
    fn exponential_weight_fails() {
        let spec = WeightSpec::ExpAbs { c: 1.0 };
        let d = weight_diagnostics(|x| spec.ln_w(x), &WeightGrid::default()).unwrap();
        // ∫|x|/(1+x²) has equal dyadic shells: the borderline case, never called convergent
        assert_ne!(d.log_negative.verdict, Verdict::Convergent);
        assert_eq!(d.l1.verdict, Verdict::Convergent);
        assert!(d.log_integral < -20.0);
        assert!(!d.verdict);
        let small = weight_diagnostics(|x| spec.ln_w(x), &WeightGrid { radius: 1024.0, ..Default::default() }).unwrap();
        assert!(d.log_integral < small.log_integral - 5.0);
    }

    #[test]
    fn nonpositive_samples_are_rejected() {
        assert!(weight_diagnostics_sampled(|x| x, &WeightGrid::default()).is_err());
        let ok = weight_diagnostics_sampled(|x| 2.0 + x.sin(), &WeightGrid { radius: 256.0, ht_levels: (-2, 3) });
        assert!(ok.is_ok());
    }
}
