//! Physical parameters of the ambient shear flow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gravity, depth, constant vorticity and surface tension of the
/// undisturbed shear flow in a channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Gravitational acceleration (length/time²).
    pub g: f64,
    /// Undisturbed depth (length).
    pub h0: f64,
    /// Constant vorticity (1/time), any sign.
    pub omega: f64,
    /// Surface-tension coefficient (length³/time²).
    pub tension: f64,
}

impl PhysicalParams {
    pub fn new(g: f64, h0: f64, omega: f64, tension: f64) -> Result<Self> {
        let p = Self { g, h0, omega, tension };
        p.validate()?;
        Ok(p)
    }

    /// `g = h0 = 1`, the normalization used by the full-dispersion model.
    pub fn normalized(omega: f64, tension: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega, tension)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.g, self.h0, self.omega, self.tension]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams(format!("non-finite value in {self:?}")));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParams(format!("g must be positive, got {}", self.g)));
        }
        if self.h0 <= 0.0 {
            return Err(Error::InvalidParams(format!("h0 must be positive, got {}", self.h0)));
        }
        if self.tension < 0.0 {
            return Err(Error::InvalidParams(format!(
                "surface tension must be non-negative, got {}",
                self.tension
            )));
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.g == 1.0 && self.h0 == 1.0
    }

    pub(crate) fn require_normalized(&self, what: &str) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{what} requires normalized parameters g = h0 = 1 (got g = {}, h0 = {})",
                self.g, self.h0
            )))
        }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }

    pub fn with_tension(self, tension: f64) -> Self {
        Self { tension, ..self }
    }

    pub fn without_tension(self) -> Self {
        self.with_tension(0.0)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            h0: 1.0,
            omega: 0.0,
            tension: 0.0,
        }
    }
}

/// Root of the quadratic dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    RightMoving,
    LeftMoving,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::RightMoving => 1.0,
            Branch::LeftMoving => -1.0,
        }
    }
}
