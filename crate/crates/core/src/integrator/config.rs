use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(q, s, r, τ)` together with the derived `α = τ/r` and `δ_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Expansion order.
    pub q: usize,
    /// Number of contour nodes.
    pub s: usize,
    /// Contour radius.
    pub r: f64,
    pub tau: f64,
    pub alpha: f64,
    /// 1 when `s == q`, else 0.
    pub delta_q: u8,
}

impl IntegratorConfig {
    pub fn new(q: usize, s: usize, tau: f64, r: f64) -> Result<Self> {
        let cfg = Self { q, s, r, tau, alpha: tau / r, delta_q: u8::from(s == q) };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `r = τ`, hence `α = 1`.
    pub fn unit_alpha(q: usize, s: usize, tau: f64) -> Result<Self> {
        Self::new(q, s, tau, tau)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::InvalidConfig("q must be at least 1".into()));
        }
        if self.s < self.q {
            return Err(Error::InvalidConfig(format!("s = {} is smaller than q = {}", self.s, self.q)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::InvalidConfig(format!("radius must be positive, got {}", self.r)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!("time step must be positive, got {}", self.tau)));
        }
        if self.alpha != self.tau / self.r {
            return Err(Error::InvalidConfig("alpha must equal tau / r".into()));
        }
        if self.delta_q != u8::from(self.s == self.q) {
            return Err(Error::InvalidConfig("delta_q inconsistent with (q, s)".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_fields() {
        let c = IntegratorConfig::new(2, 2, 0.1, 0.05).unwrap();
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.delta_q, 1);
        let c = IntegratorConfig::unit_alpha(2, 3, 0.1).unwrap();
        assert_eq!(c.alpha, 1.0);
        assert_eq!(c.delta_q, 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IntegratorConfig::new(3, 2, 0.1, 0.1).is_err());
        assert!(IntegratorConfig::new(0, 2, 0.1, 0.1).is_err());
        assert!(IntegratorConfig::new(1, 2, -0.1, 0.1).is_err());
        let mut c = IntegratorConfig::unit_alpha(1, 2, 0.1).unwrap();
        c.delta_q = 1;
        assert!(c.validate().is_err());
    }
}
