//! Λ1 ⊂ Λ ⊂ Λ2 with prescribed strong linear asymptotics.
//!
//! The sweep walks the positive points of Λ2 in order, always keeping Λ1. For a free
//! point it compares keeping and skipping by rolling ψ_Λ forward over the next
//! `horizon` candidates under the rule "keep iff that moves ψ toward 0", and picks the
//! choice with the smaller peak |ψ|. Plain count-matching leaves ψ drifting by the
//! fractional parts of ax + b; the one-step rule alone oscillates when forced points
//! bunch up.

use super::asymptotics::{floor_integral, verify_strong_asymptotics};
use super::zeros::SymmetricZeroSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct InterleaveOptions {
    pub window: f64,
    pub horizon: usize,
}

impl InterleaveOptions {
    pub fn new(window: f64) -> Self {
        InterleaveOptions { window, horizon: 32 }
    }
}

/// Build Λ with n_Λ(x) tracking ⌊ax + b⌋ on (0, window]; Λ continues as ±(j − b)/a
/// past the window.
pub fn interleave(
    inner: &SymmetricZeroSet,
    outer: &SymmetricZeroSet,
    a: f64,
    b: f64,
    opts: InterleaveOptions,
) -> Result<SymmetricZeroSet> {
    if !inner.is_symmetric() || !outer.is_symmetric() {
        return Err(Error::Invalid("interleave expects symmetric zero sets".into()));
    }
    let r = opts.window;
    let cand = outer.positive_up_to(r);
    // a stored inner set stops being a subset of the outer one where its continuation starts
    let stored = inner.positive().stored();
    let forced_pts: Vec<f64> =
        if stored.is_empty() { inner.positive_up_to(r) } else { stored.iter().copied().filter(|t| *t <= r).collect() };
    if cand.is_empty() {
        return Err(Error::Invalid("outer set has no points in the window".into()));
    }
    // density bounds from the sets themselves over the window
    let a1 = forced_pts.len() as f64 / r;
    let a2 = cand.len() as f64 / r;
    let slack = 2.0 / r;
    if a > a2 + slack || a > outer.asymptotics().map_or(f64::INFINITY, |(x, _)| x) + 1e-12 {
        return Err(Error::DensityGap { at: r });
    }
    if a + slack < a1 || a < inner.asymptotics().map_or(0.0, |(x, _)| x) - 1e-12 {
        return Err(Error::Infeasible(format!("target density {a} below the inner density {a1:.4}")));
    }

    let mut forced = vec![false; cand.len()];
    let mut k = 0;
    for &p in &forced_pts {
        while k < cand.len() && cand[k] < p {
            k += 1;
        }
        if k == cand.len() || cand[k] != p {
            return Err(Error::Invalid(format!("inner point {p} is not in the outer set")));
        }
        forced[k] = true;
    }

    // gaps and floor integrals between consecutive candidates (last one runs to r)
    let n = cand.len();
    let mut gap = Vec::with_capacity(n);
    let mut fint = Vec::with_capacity(n);
    for i in 0..n {
        let next = if i + 1 < n { cand[i + 1] } else { r.max(cand[i]) };
        gap.push(next - cand[i]);
        fint.push(floor_integral(a, b, cand[i], next));
    }
    // ψ over the segment after candidate i with count c: c·gap − ∫⌊·⌋
    let seg = |i: usize, c: f64| c * gap[i] - fint[i];

    // a count deficit is made up at rate a₂ − a and a surplus at a − a₁ per unit length, so
    // the look-ahead has to see a few of those recovery times
    let recovery = 1.0 / (a2 - a).min(a - a1).max(1e-3);
    let horizon = opts.horizon.max((4.0 * recovery).ceil() as usize);
    let rollout = |start: usize, mut cnt: f64, mut psi: f64| -> f64 {
        let mut peak = psi.abs();
        for i in start..n.min(start + horizon) {
            if forced[i] {
                cnt += 1.0;
                psi += seg(i, cnt);
            } else {
                let ex = psi + seg(i, cnt);
                if ex < -0.5 * gap[i] {
                    cnt += 1.0;
                    psi = ex + gap[i];
                } else {
                    psi = ex;
                }
            }
            peak = peak.max(psi.abs());
        }
        peak
    };

    let mut keep = Vec::with_capacity(n);
    let mut cnt = 0.0;
    let mut psi = -floor_integral(a, b, 0.0, cand[0]);
    for i in 0..n {
        if forced[i] {
            cnt += 1.0;
            psi += seg(i, cnt);
            keep.push(cand[i]);
            continue;
        }
        let ex = psi + seg(i, cnt);
        let inc = ex + gap[i];
        let pe = rollout(i + 1, cnt, ex).max(ex.abs());
        let pi = rollout(i + 1, cnt + 1.0, inc).max(inc.abs());
        if pi < pe || (pi == pe && inc.abs() < ex.abs()) {
            cnt += 1.0;
            psi = inc;
            keep.push(cand[i]);
        } else {
            psi = ex;
        }
    }

    let out = SymmetricZeroSet::symmetric(keep, Some((a, b)))?;
    // An infeasible target makes ψ drift quadratically; a feasible one still swings by a
    // few gaps 1/a plus half a recovery time, so the half-window comparison gets that slack.
    let check = verify_strong_asymptotics(&out, a, b, Some(r));
    if check.sup_second_half > 1.5 * check.sup_first_half + 4.0 / a + 0.5 * recovery {
        return Err(Error::DensityGap { at: check.argmax });
    }
    Ok(out)
}
