//! The coupling window `g(x)`: zero outside `[x_i, x_f]`, a ramp of width
//! `ε` at each end, and a plateau of height `g` in between.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::integrate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileShape {
    Rectangular,
    SmoothRamp,
}

/// Ramp `s(t)` on `[0, 1]`: the degree-9 smoothstep
/// `t⁵ (126 − 420t + 540t² − 315t³ + 70t⁴)`. `s(0) = 0`, `s(1) = 1`, and
/// derivatives one through four vanish at both ends, so `g` is C⁴ across the
/// ramp joints. Evaluated as `1 − s(1 − t)` above `t = ½` to avoid the
/// cancellation in the expanded polynomial.
fn ramp_value(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let half = |u: f64| u.powi(5) * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + u * 70.0))));
    if t <= 0.5 {
        half(t)
    } else {
        1.0 - half(1.0 - t)
    }
}

/// `∫_a^b s(t)ⁿ dt`; the integrand is a polynomial of degree `9n`, which the
/// composite rule integrates to round-off.
fn ramp_power_integral(n: u32, a: f64, b: f64) -> f64 {
    integrate(&|t| ramp_value(t).powi(n as i32), a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    x_i: f64,
    x_f: f64,
    plateau: f64,
    ramp: f64,
    shape: ProfileShape,
}

impl CouplingProfile {
    pub fn new(x_i: f64, x_f: f64, plateau: f64, ramp: f64, shape: ProfileShape) -> Result<Self> {
        if ![x_i, x_f, plateau, ramp].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite parameter".into()));
        }
        if x_f <= x_i {
            return Err(Error::InvalidProfile(format!("x_f {x_f} must exceed x_i {x_i}")));
        }
        if plateau < 0.0 {
            return Err(Error::InvalidProfile(format!("negative coupling {plateau}")));
        }
        let len = x_f - x_i;
        match shape {
            ProfileShape::Rectangular if ramp != 0.0 => {
                return Err(Error::InvalidProfile("rectangular profile has no ramp".into()))
            }
            ProfileShape::SmoothRamp if !(ramp >= 0.0 && ramp < len / 4.0) => {
                return Err(Error::InvalidProfile(format!(
                    "ramp {ramp} must lie in [0, L/4) with L = {len}"
                )))
            }
            _ => {}
        }
        Ok(Self {
            x_i,
            x_f,
            plateau,
            ramp,
            shape,
        })
    }

    pub fn rectangular(x_i: f64, x_f: f64, plateau: f64) -> Result<Self> {
        Self::new(x_i, x_f, plateau, 0.0, ProfileShape::Rectangular)
    }

    pub fn smooth(x_i: f64, x_f: f64, plateau: f64, ramp: f64) -> Result<Self> {
        Self::new(x_i, x_f, plateau, ramp, ProfileShape::SmoothRamp)
    }

    /// Smooth profile with the default ramp width `L / 100`.
    pub fn smooth_default(x_i: f64, x_f: f64, plateau: f64) -> Result<Self> {
        Self::smooth(x_i, x_f, plateau, (x_f - x_i) / 100.0)
    }

    /// Same window with `g ≡ 0`.
    pub fn decoupled(&self) -> Self {
        Self {
            plateau: 0.0,
            ..*self
        }
    }

    pub fn x_i(&self) -> f64 {
        self.x_i
    }

    pub fn x_f(&self) -> f64 {
        self.x_f
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn ramp(&self) -> f64 {
        self.ramp
    }

    pub fn shape(&self) -> ProfileShape {
        self.shape
    }

    /// Internal duration `L = x_f - x_i`.
    pub fn length(&self) -> f64 {
        self.x_f - self.x_i
    }

    fn eps(&self) -> f64 {
        match self.shape {
            ProfileShape::Rectangular => 0.0,
            ProfileShape::SmoothRamp => self.ramp,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x_i || x >= self.x_f {
            return 0.0;
        }
        let eps = self.eps();
        if eps == 0.0 {
            return self.plateau;
        }
        if x < self.x_i + eps {
            self.plateau * ramp_value((x - self.x_i) / eps)
        } else if x > self.x_f - eps {
            self.plateau * ramp_value((self.x_f - x) / eps)
        } else {
            self.plateau
        }
    }

    /// `∫_{x_i}^{x} g(x')ⁿ dx'` for `n ∈ {1, 2, 3}`: closed form on the
    /// plateau, polynomial quadrature (exact to round-off) on the ramps.
    pub fn integral_power(&self, n: u32, x: f64) -> Result<f64> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedPower(n));
        }
        if x <= self.x_i {
            return Ok(0.0);
        }
        let eps = self.eps();
        let gn = self.plateau.powi(n as i32);
        let xc = x.min(self.x_f);
        let plateau_len = (xc.min(self.x_f - eps) - (self.x_i + eps)).max(0.0);
        if eps == 0.0 {
            return Ok(gn * plateau_len);
        }
        let rise = eps * ramp_power_integral(n, 0.0, ((xc - self.x_i) / eps).min(1.0));
        let fall = if xc > self.x_f - eps {
            let u = (self.x_f - xc) / eps;
            eps * ramp_power_integral(n, u, 1.0)
        } else {
            0.0
        };
        Ok(gn * (rise + plateau_len + fall))
    }

    /// `∫ gⁿ` over the whole window.
    pub fn total_power(&self, n: u32) -> Result<f64> {
        self.integral_power(n, self.x_f)
    }

    /// Largest `g(x')` on `[x_i, x]`.
    fn max_on(&self, x: f64) -> f64 {
        if x <= self.x_i {
            0.0
        } else if x >= self.x_i + self.eps() {
            self.plateau
        } else {
            self.eval(x)
        }
    }

    /// Guard for `1 + q g(x') > 0` along `[x_i, x]`.
    pub fn check_regular(&self, q: f64, x: f64) -> Result<()> {
        if q < 0.0 && 1.0 + q * self.max_on(x) <= 0.0 {
            return Err(Error::SingularCoupling { q });
        }
        Ok(())
    }

    /// `∫_{x_i}^{x} [1/(1 + q g(x')) - 1] dx'`, i.e. the lag of the
    /// reciprocal-lapse clock behind `x - x_i`. Closed form on the plateau,
    /// Gauss–Legendre quadrature on the ramps.
    pub fn integral_reciprocal_excess(&self, q: f64, x: f64) -> Result<f64> {
        self.check_regular(q, x)?;
        if x <= self.x_i {
            return Ok(0.0);
        }
        let gq = self.plateau * q;
        let excess = |s: f64| -gq * s / (1.0 + gq * s);
        let eps = self.eps();
        let xc = x.min(self.x_f);
        let plateau_len = (xc.min(self.x_f - eps) - (self.x_i + eps)).max(0.0);
        let mut total = plateau_len * excess(1.0);
        if eps > 0.0 {
            let integrand = |t: f64| excess(ramp_value(t));
            let r = ((xc - self.x_i) / eps).min(1.0);
            total += eps * integrate(&integrand, 0.0, r);
            if xc > self.x_f - eps {
                let u = (self.x_f - xc) / eps;
                total += eps * integrate(&integrand, u, 1.0);
            }
        }
        Ok(total)
    }
}
