//! Σ over the support of μ past its stored window, for summands f(t)·mass(t).

use crate::measure::{DiscreteMeasure, MassLaw, SupportLaw, TermLaw};
use crate::numerics::em::tail_sum;
use num_complex::Complex64;

/// Sum over the unstored support of `mass(t)·f(t)`.
///
/// With an exact lattice law of power type the sum is evaluated by Euler–Maclaurin on
/// each side; otherwise only a bound is available, from |f(t)| ≤ f_c·(1+|t|)^{f_e} for
/// |t| ≥ `valid_from`. Returns (value, error bound).
pub fn support_tail<F>(mu: &DiscreteMeasure, f: F, f_c: f64, f_e: f64, valid_from: f64) -> (Complex64, f64)
where
    F: Fn(Complex64) -> Complex64,
{
    let zero = Complex64::new(0.0, 0.0);
    let law = match mu.tail_law() {
        None => return (zero, f64::INFINITY),
        Some(l) => l,
    };
    if law.support == SupportLaw::Finite {
        return (zero, 0.0);
    }
    let (pos, neg) = mu.extents();
    let support = mu.support();
    if let (true, SupportLaw::Lattice { step, offset }, MassLaw::Power { c, e }) =
        (law.is_exact(), law.support, &law.mass)
    {
        let (c, e) = (*c, *e);
        let mut value = zero;
        let mut err = 0.0;
        // right side: t = offset + step·m for m > m_hi
        let last = *support.last().expect("nonempty");
        let m_hi = ((last - offset) / step).round();
        let h_right = |m: Complex64| {
            let t = m * step + offset;
            f(t) * c * (t + 1.0).powf(e)
        };
        let first = support[0];
        let m_lo = ((offset - first) / step).round();
        let h_left = |m: Complex64| {
            let t = -m * step + offset;
            f(t) * c * (1.0 - t).powf(e)
        };
        // singularities of f sit within valid_from of the origin; of the mass law at |t| = 1
        let d_right = (last - valid_from.max(1.0)) / step;
        let d_left = (-first - valid_from.max(1.0)) / step;
        if d_right > 1.0 && d_left > 1.0 && m_hi > 0.0 && m_lo > 0.0 {
            let r = tail_sum(h_right, m_hi, d_right);
            let l = tail_sum(h_left, m_lo, d_left);
            value += r.value + l.value;
            err += r.err + l.err;
            return (value, err);
        }
    }
    let Some((mc, me)) = law.mass_envelope() else {
        return (zero, f64::INFINITY);
    };
    if pos < valid_from || neg < valid_from {
        return (zero, f64::INFINITY);
    }
    let tl = TermLaw { c: f_c * mc, e: f_e + me, support: law.support };
    match (tl.one_side_tail(pos), tl.one_side_tail(neg)) {
        (Some(a), Some(b)) => (zero, a + b),
        _ => (zero, f64::INFINITY),
    }
}
