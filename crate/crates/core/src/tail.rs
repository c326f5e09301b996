//! Exact two-sided Pareto innovations and the constants of their limit theory.
//!
//! The law has `P(|Z| > x) = x^(-alpha)` for `x >= 1`, with a fraction `p` of
//! the mass on the positive side. With this choice the normalizing sequence,
//! the truncated first moments and the drift of the stable limit all have
//! closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TailConfig", into = "TailConfig")]
pub struct TailModel {
    alpha: f64,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct TailConfig {
    alpha: f64,
    p: f64,
}

impl TryFrom<TailConfig> for TailModel {
    type Error = Error;
    fn try_from(c: TailConfig) -> Result<Self> {
        TailModel::new(c.alpha, c.p)
    }
}

impl From<TailModel> for TailConfig {
    fn from(m: TailModel) -> Self {
        TailConfig { alpha: m.alpha, p: m.p }
    }
}

impl TailModel {
    /// `alpha` in `(0, 2)`, `p` in `[0, 1]`; `alpha = 1` needs a symmetric law.
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 2), got {alpha}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", format!("must lie in [0, 1], got {p}")));
        }
        if alpha == 1.0 && p != 0.5 {
            return Err(Error::Unsupported(format!(
                "alpha = 1 requires a symmetric law (p = r = 0.5), got p = {p}"
            )));
        }
        Ok(TailModel { alpha, p })
    }

    pub fn symmetric(alpha: f64) -> Result<Self> {
        TailModel::new(alpha, 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        1.0 - self.p
    }

    fn balance(&self) -> f64 {
        self.p - self.r()
    }

    /// Inverse CDF.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain {
                what: "u",
                value: u,
                domain: "(0, 1)",
            });
        }
        Ok(self.quantile_split(u, 1.0 - u))
    }

    /// Inverse CDF given both `u` and `1 - u`, each computed without
    /// cancellation by the caller, so extreme tails keep full precision.
    #[inline]
    pub fn quantile_split(&self, lower: f64, upper: f64) -> f64 {
        let r = self.r();
        if lower < r {
            -(r / lower.max(f64::MIN_POSITIVE)).powf(1.0 / self.alpha)
        } else {
            (self.p / upper.max(f64::MIN_POSITIVE)).powf(1.0 / self.alpha).max(1.0)
        }
    }

    /// `P(Z <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            self.r() * (-x).powf(-self.alpha)
        } else if x < 1.0 {
            self.r()
        } else {
            1.0 - self.p * x.powf(-self.alpha)
        }
    }

    /// `P(|Z| > x)`.
    pub fn abs_tail(&self, x: f64) -> f64 {
        if x < 1.0 {
            1.0
        } else {
            x.powf(-self.alpha)
        }
    }

    /// Normalizing sequence `a_n = n^(1/alpha)`, so `n P(|Z| > a_n) = 1`.
    pub fn a_n(&self, n: u64) -> Result<f64> {
        if n < 1 {
            return Err(Error::param("n", "must be at least 1"));
        }
        Ok((n as f64).powf(1.0 / self.alpha))
    }

    /// `int_{u < |x| <= 1} x mu(dx)` for the limit measure
    /// `mu(dx) = (p 1{x>0} + r 1{x<0}) alpha |x|^(-alpha-1) dx`.
    pub fn mu_integral(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain {
                what: "u",
                value: u,
                domain: "(0, 1]",
            });
        }
        Ok(self.signed_power_integral(u, 1.0))
    }

    /// `(p - r) alpha int_lo^hi x^(-alpha) dx`; zero for the symmetric
    /// `alpha = 1` case.
    fn signed_power_integral(&self, lo: f64, hi: f64) -> f64 {
        if self.alpha == 1.0 || self.balance() == 0.0 || lo >= hi {
            return 0.0;
        }
        let e = 1.0 - self.alpha;
        self.balance() * self.alpha * (hi.powf(e) - lo.powf(e)) / e
    }

    /// Drift of the stable limit: `(p - r) alpha / (1 - alpha)`, zero at `alpha = 1`.
    pub fn drift_b(&self) -> f64 {
        if self.alpha == 1.0 {
            0.0
        } else {
            self.balance() * self.alpha / (1.0 - self.alpha)
        }
    }

    /// Per-unit-time mean of the jumps of size below `u` in the limit point
    /// process, `drift_b - mu_integral(u)`, valid for every `u > 0`.
    pub fn small_jump_rate(&self, u: f64) -> f64 {
        if self.alpha == 1.0 || self.balance() == 0.0 {
            return 0.0;
        }
        self.balance() * self.alpha * u.powf(1.0 - self.alpha) / (1.0 - self.alpha)
    }

    /// `E[(Z/a_n) 1{u < |Z|/a_n <= 1}]`.
    pub fn centering_b_n(&self, n: u64, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain {
                what: "u",
                value: u,
                domain: "(0, 1]",
            });
        }
        let a = self.a_n(n)?;
        let lo = (u * a).max(1.0);
        Ok(self.signed_power_integral(lo, a) / a)
    }

    /// `E[(Z/a_n) 1{|Z|/a_n <= u}]`, the mean of the small-jump part.
    pub fn small_mean_b_n(&self, n: u64, u: f64) -> Result<f64> {
        let a = self.a_n(n)?;
        Ok(self.signed_power_integral(1.0, u * a) / a)
    }

    /// Karamata ratio `E(|Z| 1{|Z| <= y}) / (y P(|Z| > y))`, for `alpha < 1`.
    pub fn karamata_ratio(&self, y: f64) -> Result<f64> {
        if self.alpha >= 1.0 {
            return Err(Error::Unsupported(format!(
                "Karamata ratio is only defined here for alpha in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(y >= 1.0) {
            return Err(Error::Domain {
                what: "y",
                value: y,
                domain: "[1, inf)",
            });
        }
        Ok(self.alpha / (1.0 - self.alpha) * (1.0 - y.powf(self.alpha - 1.0)))
    }
}
