//! Real zero configurations with lattice continuations past the stored window.

use crate::error::{Error, Result};
use crate::numerics::special::{digamma, hurwitz_zeta};
use serde::Serialize;
use std::sync::OnceLock;

/// Number of power sums carried in the tail series log(1 − w) = −Σ w^k/k.
pub(crate) const SERIES_TERMS: usize = 48;

/// Arithmetic continuation of one side: the j-th zero (1-based) is (j − b)/a for j
/// past the stored ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Continuation {
    pub a: f64,
    pub b: f64,
}

/// One side of a zero set: magnitudes, increasing.
#[derive(Debug, Serialize)]
pub struct Side {
    stored: Vec<f64>,
    cont: Option<Continuation>,
    #[serde(skip)]
    suffix: OnceLock<Vec<Vec<f64>>>,
}

impl Clone for Side {
    fn clone(&self) -> Self {
        Side { stored: self.stored.clone(), cont: self.cont, suffix: OnceLock::new() }
    }
}

impl Side {
    fn new(stored: Vec<f64>, cont: Option<(f64, f64)>) -> Result<Self> {
        if stored.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::Invalid("zero magnitudes must be positive and finite".into()));
        }
        if stored.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Invalid("zeros must be strictly increasing".into()));
        }
        let cont = match cont {
            None => None,
            Some((a, b)) => {
                if !(a > 0.0) {
                    return Err(Error::Invalid("continuation density must be positive".into()));
                }
                // first continuation index m with (m − b)/a beyond the last stored zero
                let len = stored.len() as f64;
                let last = stored.last().copied().unwrap_or(0.0);
                let mut m = (len + 1.0).max((a * last + b).floor() + 1.0);
                while (m - b) / a <= last + 1e-9 {
                    m += 1.0;
                }
                // re-index so that the (len+1)-th zero is (m − b)/a
                Some(Continuation { a, b: b + len + 1.0 - m })
            }
        };
        if let Some(c) = cont {
            if (1.0 - c.b) / c.a <= 0.0 && stored.is_empty() {
                return Err(Error::Invalid("continuation would place a zero at t ≤ 0".into()));
            }
        }
        Ok(Side { stored, cont, suffix: OnceLock::new() })
    }

    pub fn stored(&self) -> &[f64] {
        &self.stored
    }

    pub fn continuation(&self) -> Option<Continuation> {
        self.cont
    }

    /// The j-th zero magnitude (1-based), None past a finite side.
    #[inline]
    pub fn zero(&self, j: usize) -> Option<f64> {
        if j <= self.stored.len() {
            Some(self.stored[j - 1])
        } else {
            self.cont.map(|c| (j as f64 - c.b) / c.a)
        }
    }

    /// Number of zeros with magnitude ≤ x.
    pub fn count_le(&self, x: f64) -> usize {
        let s = self.stored.partition_point(|t| *t <= x);
        if s < self.stored.len() {
            return s;
        }
        match self.cont {
            None => s,
            Some(c) => {
                let m = (c.a * x + c.b).floor();
                let m = if m < 0.0 { 0 } else { m as usize };
                // guard against rounding at exact zeros
                let mut m = m.max(s);
                while m > s && (m as f64 - c.b) / c.a > x {
                    m -= 1;
                }
                while (m as f64 + 1.0 - c.b) / c.a <= x {
                    m += 1;
                }
                m
            }
        }
    }

    /// Smallest gap between consecutive zeros within the stored part and at the junction.
    fn min_gap(&self) -> f64 {
        let mut g = f64::INFINITY;
        for w in self.stored.windows(2) {
            g = g.min(w[1] - w[0]);
        }
        if let Some(c) = self.cont {
            g = g.min(1.0 / c.a);
            if let (Some(l), Some(n)) = (self.stored.last(), self.zero(self.stored.len() + 1)) {
                g = g.min(n - l);
            }
        }
        g
    }

    fn suffix_sums(&self) -> &Vec<Vec<f64>> {
        self.suffix.get_or_init(|| {
            let n = self.stored.len();
            let mut out = vec![vec![0.0; n + 1]; SERIES_TERMS];
            for (k, row) in out.iter_mut().enumerate() {
                let p = (k + 1) as i32;
                for i in (0..n).rev() {
                    row[i] = row[i + 1] + self.stored[i].powi(-p);
                }
            }
            out
        })
    }

    /// Σ_{j>J} s_j^{-k} for k ≥ 2 (finite always) or for k = 1 on finite sides.
    /// For k = 1 with a continuation, returns only the stored part; the lattice part is
    /// handled by `first_order_difference`.
    pub(crate) fn power_tail(&self, jj: usize, k: usize) -> f64 {
        let n = self.stored.len();
        let stored = if jj < n { self.suffix_sums()[k - 1][jj] } else { 0.0 };
        let lattice = match self.cont {
            Some(c) if k >= 2 => {
                let start = jj.max(n) + 1;
                c.a.powi(k as i32) * hurwitz_zeta(k as f64, start as f64 - c.b)
            }
            _ => 0.0,
        };
        stored + lattice
    }
}

/// A zero set on the real line, symmetric or not, without a zero at the origin.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricZeroSet {
    pos: Side,
    /// Negative side magnitudes; None when the set is symmetric.
    neg: Option<Side>,
    asymptotics: Option<(f64, f64)>,
    separation: f64,
}

impl SymmetricZeroSet {
    /// Symmetric set ±stored, continued as ±(j − b)/a when `asymptotics = Some((a, b))`.
    pub fn symmetric(positive: Vec<f64>, asymptotics: Option<(f64, f64)>) -> Result<Self> {
        let pos = Side::new(positive, asymptotics)?;
        let mut sep = pos.min_gap();
        if let Some(z) = pos.zero(1) {
            sep = sep.min(2.0 * z);
        }
        Ok(Self { pos, neg: None, asymptotics, separation: sep })
    }

    /// Non-symmetric set; factors are paired by index j across the two sides.
    pub fn general(
        positive: Vec<f64>,
        negative_magnitudes: Vec<f64>,
        pos_cont: Option<(f64, f64)>,
        neg_cont: Option<(f64, f64)>,
    ) -> Result<Self> {
        let pos = Side::new(positive, pos_cont)?;
        let neg = Side::new(negative_magnitudes, neg_cont)?;
        if let (Some(p), Some(n)) = (pos.cont, neg.cont) {
            if (p.a - n.a).abs() > 1e-12 * p.a {
                return Err(Error::Invalid(
                    "paired product needs equal densities on both sides".into(),
                ));
            }
        } else if pos.cont.is_some() != neg.cont.is_some() {
            return Err(Error::Invalid("one-sided infinite zero sets do not converge as paired products".into()));
        }
        let mut sep = pos.min_gap().min(neg.min_gap());
        if let (Some(p), Some(n)) = (pos.zero(1), neg.zero(1)) {
            sep = sep.min(p + n);
        }
        Ok(Self { pos, neg: Some(neg), asymptotics: None, separation: sep })
    }

    /// Λ_{a,b} = {±(n − b)/a : n ≥ 1}.
    pub fn lattice(a: f64, b: f64) -> Result<Self> {
        if !(b < 1.0) {
            return Err(Error::Invalid("Λ_{a,b} needs b < 1".into()));
        }
        Self::symmetric(Vec::new(), Some((a, b)))
    }

    /// ℤ ∖ {0}.
    pub fn integers() -> Self {
        Self::lattice(1.0, 0.0).expect("valid")
    }

    pub fn is_symmetric(&self) -> bool {
        self.neg.is_none()
    }

    pub fn positive(&self) -> &Side {
        &self.pos
    }

    pub fn negative(&self) -> &Side {
        self.neg.as_ref().unwrap_or(&self.pos)
    }

    pub fn asymptotics(&self) -> Option<(f64, f64)> {
        self.asymptotics
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Largest stored positive zero (0 for purely lattice sets).
    pub fn stored_extent(&self) -> f64 {
        let p = self.pos.stored.last().copied().unwrap_or(0.0);
        let n = self.neg.as_ref().and_then(|s| s.stored.last().copied()).unwrap_or(0.0);
        p.max(n)
    }

    /// n_Λ(x) = card(Λ ∩ (0, x]).
    pub fn counting(&self, x: f64) -> usize {
        if x <= 0.0 {
            return 0;
        }
        self.pos.count_le(x)
    }

    /// Positive zeros ≤ r.
    pub fn positive_up_to(&self, r: f64) -> Vec<f64> {
        let n = self.pos.count_le(r);
        (1..=n).filter_map(|j| self.pos.zero(j)).collect()
    }

    /// All zeros in [−r, r], increasing.
    pub fn all_up_to(&self, r: f64) -> Vec<f64> {
        let neg = self.negative();
        let nn = neg.count_le(r);
        let mut v: Vec<f64> = (1..=nn).rev().filter_map(|j| neg.zero(j)).map(|t| -t).collect();
        v.extend(self.positive_up_to(r));
        v
    }

    pub fn contains(&self, t: f64) -> bool {
        let (side, m) = if t > 0.0 { (&self.pos, t) } else if t < 0.0 { (self.negative(), -t) } else { return false };
        let k = side.count_le(m);
        k > 0 && side.zero(k) == Some(m)
    }

    /// Σ_{j>J} (1/p_j − 1/q_j) for the paired first-order tail (q = negative magnitudes).
    pub(crate) fn first_order_difference(&self, jj: usize) -> f64 {
        let neg = match &self.neg {
            None => return 0.0,
            Some(n) => n,
        };
        let p = &self.pos;
        let stored = p.power_tail(jj, 1) - neg.power_tail(jj, 1);
        match (p.cont, neg.cont) {
            (Some(cp), Some(cn)) => {
                let mp = jj.max(p.stored.len()) as f64;
                let mn = jj.max(neg.stored.len()) as f64;
                // a·Σ_{j>mp} 1/(j − bp) − a·Σ_{j>mn} 1/(j − bn)
                stored + cp.a * (digamma(mn + 1.0 - cn.b) - digamma(mp + 1.0 - cp.b))
            }
            _ => stored,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lattice_basics() {
        let z = SymmetricZeroSet::integers();
        assert_eq!(z.counting(2.5), 2);
        assert_eq!(z.counting(3.0), 3);
        assert_eq!(z.positive_up_to(4.0), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(z.contains(-7.0) && !z.contains(0.0) && !z.contains(0.5));
        assert_eq!(z.separation(), 1.0);
    }

    #[test]
    fn continuation_follows_stored_part() {
        let z = SymmetricZeroSet::symmetric(vec![1.0, 3.0, 4.0], Some((0.5, 0.0))).unwrap();
        // three stored zeros already exceed ⌊x/2⌋ at 4, so the continuation resumes at
        // index 4, i.e. 8, keeping n(x) = ⌊x/2⌋ from there on
        assert_eq!(z.positive().zero(4), Some(8.0));
        assert_eq!(z.positive().zero(5), Some(10.0));
        assert_eq!(z.counting(7.0), 3);
    }

    #[test]
    fn power_tails_match_direct_sums() {
        let z = SymmetricZeroSet::symmetric(vec![0.9, 2.1, 2.9], Some((1.0, 0.0))).unwrap();
        let side = z.positive();
        for k in 2..6 {
            let n = 200_000;
            let direct: f64 = (2..=n).rev().map(|j| side.zero(j).unwrap().powi(-(k as i32))).sum::<f64>()
                + (n as f64 + 0.5).powi(1 - k as i32) / (k as f64 - 1.0);
            let t = side.power_tail(1, k);
            assert!((t - direct).abs() < 1e-9 * t, "k={k}");
        }
    }

    #[test]
    fn paired_first_order_tail() {
        // positives 2j−1, negatives 2j: Σ_{j>J} (1/(2j−1) − 1/(2j))
        let z = SymmetricZeroSet::general(vec![], vec![], Some((0.5, 0.5)), Some((0.5, 0.0))).unwrap();
        let jj = 10;
        let n = 2_000_000;
        let direct: f64 = ((jj + 1)..=n).rev().map(|j| 1.0 / (2 * j - 1) as f64 - 1.0 / (2 * j) as f64).sum::<f64>()
            + 1.0 / (4.0 * n as f64);
        assert!((z.first_order_difference(jj) - direct).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SymmetricZeroSet::symmetric(vec![2.0, 1.0], None).is_err());
        assert!(SymmetricZeroSet::symmetric(vec![0.0, 1.0], None).is_err());
        assert!(SymmetricZeroSet::lattice(1.0, 1.0).is_err());
        assert!(SymmetricZeroSet::general(vec![], vec![], Some((1.0, 0.0)), Some((0.5, 0.0))).is_err());
    }
}
