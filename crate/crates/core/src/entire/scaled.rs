use num_complex::Complex64;
use serde::Serialize;

/// A complex number stored as mant·e^{scale}, so products of many factors neither
/// overflow nor underflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scaled {
    pub mant: Complex64,
    pub scale: f64,
}

impl Scaled {
    pub const ONE: Scaled = Scaled { mant: Complex64 { re: 1.0, im: 0.0 }, scale: 0.0 };
    pub const ZERO: Scaled = Scaled { mant: Complex64 { re: 0.0, im: 0.0 }, scale: 0.0 };

    pub fn from_complex(z: Complex64) -> Self {
        Scaled { mant: z, scale: 0.0 }.normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// e^{l} for complex l.
    pub fn exp(l: Complex64) -> Self {
        Scaled { mant: Complex64::from_polar(1.0, l.im), scale: l.re }
    }

    pub fn normalized(self) -> Self {
        let r = self.mant.norm();
        if r == 0.0 || !r.is_finite() {
            return self;
        }
        Scaled { mant: self.mant / r, scale: self.scale + r.ln() }
    }

    pub fn ln_abs(&self) -> f64 {
        self.scale + self.mant.norm().ln()
    }

    pub fn is_zero(&self) -> bool {
        self.mant == Complex64::new(0.0, 0.0)
    }

    /// Plain complex value; may overflow to infinity.
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return self.mant;
        }
        self.mant * self.scale.exp()
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        Scaled { mant: self.mant * o.mant, scale: self.scale + o.scale }.normalized()
    }

    pub fn div(self, o: Scaled) -> Scaled {
        Scaled { mant: self.mant / o.mant, scale: self.scale - o.scale }.normalized()
    }

    pub fn powi(self, k: i32) -> Scaled {
        if k == 0 {
            return Scaled::ONE;
        }
        Scaled { mant: self.mant.powi(k), scale: self.scale * k as f64 }.normalized()
    }

    pub fn conj(self) -> Scaled {
        Scaled { mant: self.mant.conj(), scale: self.scale }
    }
}

/// Local form c·(z − z0)^order of a function near z0; `order = 0` is an ordinary value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Reduced {
    pub order: i32,
    pub lead: Scaled,
}

impl Reduced {
    pub fn value(order: i32, lead: Scaled) -> Self {
        Reduced { order, lead }
    }

    pub fn mul(self, o: Reduced) -> Reduced {
        Reduced { order: self.order + o.order, lead: self.lead.mul(o.lead) }
    }

    pub fn powi(self, k: i32) -> Reduced {
        Reduced { order: self.order * k, lead: self.lead.powi(k) }
    }

    /// Value at z0: the lead for order 0, zero for positive order, infinite for a pole.
    pub fn at_point(&self) -> Scaled {
        match self.order {
            0 => self.lead,
            o if o > 0 => Scaled::ZERO,
            _ => Scaled { mant: Complex64::new(f64::INFINITY, 0.0), scale: 0.0 },
        }
    }
}
