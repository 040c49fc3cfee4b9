//! Counting functions, ψ_Λ, and the growth band along Im z = 1.

use super::product::{eval_product, ProductModel};
use super::zeros::SymmetricZeroSet;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// n_Λ(x) = card(Λ ∩ (0, x]).
pub fn counting_function(zs: &SymmetricZeroSet, x: f64) -> usize {
    zs.counting(x)
}

/// ∫_{x0}^{x1} ⌊at + b⌋·1_{[1,∞)}(t) dt, exactly.
pub fn floor_integral(a: f64, b: f64, x0: f64, x1: f64) -> f64 {
    let lo = x0.max(1.0);
    if x1 <= lo {
        return 0.0;
    }
    let mut cur = lo;
    let mut m = (a * cur + b).floor();
    let mut acc = 0.0;
    loop {
        let next = (m + 1.0 - b) / a;
        if next >= x1 {
            acc += m * (x1 - cur);
            return acc;
        }
        if next > cur {
            acc += m * (next - cur);
            cur = next;
        }
        m += 1.0;
    }
}

/// ψ_Λ(t) = ∫_0^t (n_Λ(x) − ⌊ax + b⌋·1_{[1,∞)}(x)) dx.
pub fn psi_lambda(zs: &SymmetricZeroSet, a: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let counted: f64 = zs.positive_up_to(t).iter().map(|l| t - l).sum();
    counted - floor_integral(a, b, 0.0, t)
}

/// ψ_Λ sampled at every breakpoint in (0, r]; ψ is linear in between, so these samples
/// carry its extremes.
pub fn psi_profile(zs: &SymmetricZeroSet, a: f64, b: f64, r: f64) -> Vec<(f64, f64)> {
    let zeros = zs.positive_up_to(r);
    let mut out = Vec::with_capacity(zeros.len() + (a * r) as usize + 4);
    let mut x = 0.0;
    let mut psi = 0.0;
    let mut n = 0.0; // count on the current open interval
    let mut zi = 0;
    // floor part: 0 before x = 1, then ⌊ax + b⌋
    let mut fval = 0.0;
    let mut fnext = 1.0;
    loop {
        let zn = zeros.get(zi).copied().unwrap_or(f64::INFINITY);
        let next = zn.min(fnext).min(r);
        psi += (n - fval) * (next - x);
        x = next;
        out.push((x, psi));
        if x >= r {
            break;
        }
        while zi < zeros.len() && zeros[zi] <= x {
            n += 1.0;
            zi += 1;
        }
        while fnext <= x {
            fval = if x == 1.0 && fnext == 1.0 { (a + b).floor() } else { fval + 1.0 };
            fnext = (fval + 1.0 - b) / a;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StrongAsymptotics {
    pub sup: f64,
    pub sup_first_half: f64,
    pub sup_second_half: f64,
    /// Location of the largest |ψ_Λ|.
    pub argmax: f64,
    pub window: f64,
    pub bounded: bool,
}

/// Bounded iff sup |ψ_Λ| over the second half of the window is at most 1.5 times the sup
/// over the first half. The window is the stored extent, or `window` when given.
pub fn verify_strong_asymptotics(zs: &SymmetricZeroSet, a: f64, b: f64, window: Option<f64>) -> StrongAsymptotics {
    let r = window.unwrap_or_else(|| {
        let e = zs.stored_extent();
        if e > 0.0 {
            e
        } else {
            4096.0 / a
        }
    });
    let prof = psi_profile(zs, a, b, r);
    let (mut s1, mut s2, mut arg, mut sup) = (0.0f64, 0.0f64, 0.0, 0.0f64);
    for &(x, p) in &prof {
        let m = p.abs();
        if x <= r / 2.0 {
            s1 = s1.max(m);
        } else {
            s2 = s2.max(m);
        }
        if m > sup {
            sup = m;
            arg = x;
        }
    }
    StrongAsymptotics {
        sup,
        sup_first_half: s1,
        sup_second_half: s2,
        argmax: arg,
        window: r,
        bounded: s2 <= 1.5 * s1 + 1e-9,
    }
}

/// Power of (1 + |x|) used to normalize |𝒞_Λ(x + i)|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BandConvention {
    /// (1 + |x|)^{1+2b}.
    AsStated,
    /// (1 + |x|)^{1−2b}, the rate that the Gamma-function asymptotics give.
    Corrected,
}

impl BandConvention {
    pub fn exponent(self, b: f64) -> f64 {
        match self {
            BandConvention::AsStated => 1.0 + 2.0 * b,
            BandConvention::Corrected => 1.0 - 2.0 * b,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandCheck {
    pub exponent: f64,
    /// ln(max/min) of the normalized magnitude.
    pub ln_ratio: f64,
    pub ratio: f64,
    pub bound: f64,
    pub pass: bool,
}

/// max/min over the grid of |𝒞_Λ(x + i)|·(1 + |x|)^e, compared in log space.
pub fn verify_dfs1_band(
    zs: &Arc<SymmetricZeroSet>,
    b: f64,
    grid: &[f64],
    convention: BandConvention,
    bound: f64,
) -> Result<BandCheck> {
    band_ratio(&ProductModel::Canonical(zs.clone()), grid, convention.exponent(b), bound)
}

pub fn band_ratio(model: &ProductModel, grid: &[f64], exponent: f64, bound: f64) -> Result<BandCheck> {
    if grid.is_empty() {
        return Err(Error::Invalid("empty grid".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in grid {
        let e = eval_product(model, Complex64::new(x, 1.0), 1e-8)?;
        let v = e.ln_abs + exponent * (1.0 + x.abs()).ln();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let ln_ratio = hi - lo;
    Ok(BandCheck { exponent, ln_ratio, ratio: ln_ratio.exp(), bound, pass: ln_ratio <= bound.ln() })
}

/// Geometric grid of `n` points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
}
