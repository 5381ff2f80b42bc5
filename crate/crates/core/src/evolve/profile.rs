//! Gaussian characteristic initial data on the two initial null rays.

use super::grid::GridSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileMode {
    /// Psi is a function of v alone initially (pure infall in flat space).
    Ingoing,
    /// The same Gaussian of r* on both initial rays.
    TimeSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialProfile {
    /// Gaussian center in r*.
    pub center_rstar: f64,
    /// Gaussian width sigma.
    pub sigma: f64,
    pub amplitude: f64,
    pub mode: ProfileMode,
}

impl InitialProfile {
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "profile width must be > 0, got {}",
                self.sigma
            )));
        }
        if self.amplitude == 0.0 {
            return Ok(()); // zero data trivially fits
        }
        // effective support must sit inside the union of the initial rays
        let lo = self.center_rstar - 4.0 * self.sigma;
        let hi = self.center_rstar + 4.0 * self.sigma;
        let ray_lo = 0.5 * (grid.v0 - grid.u_max); // v-ray reaches down to this r*
        let ray_hi = 0.5 * (grid.v_max - grid.u0); // u-ray reaches up to this r*
        if lo < ray_lo || hi > ray_hi {
            return Err(Error::InvalidParameter(format!(
                "profile support [{lo:.2}, {hi:.2}] overflows the initial rays [{ray_lo:.2}, {ray_hi:.2}]"
            )));
        }
        Ok(())
    }

    pub fn value(&self, rstar: f64) -> f64 {
        let s = (rstar - self.center_rstar) / self.sigma;
        self.amplitude * (-0.5 * s * s).exp()
    }

    /// Data on the outgoing ray u = u0, parametrized by j (v = v0 + j h).
    pub fn u_ray(&self, grid: &GridSpec) -> Vec<f64> {
        (0..=grid.nv())
            .map(|j| match self.mode {
                ProfileMode::TimeSymmetric | ProfileMode::Ingoing => {
                    self.value(0.5 * (grid.v(j) - grid.u0))
                }
            })
            .collect()
    }

    /// Data on the ingoing ray v = v0, parametrized by i (u = u0 + i h).
    pub fn v_ray(&self, grid: &GridSpec) -> Vec<f64> {
        (0..=grid.nu())
            .map(|i| match self.mode {
                ProfileMode::TimeSymmetric => self.value(0.5 * (grid.v0 - grid.u(i))),
                // function of v only: constant along u at its v0 value
                ProfileMode::Ingoing => self.value(0.5 * (grid.v0 - grid.u0)),
            })
            .collect()
    }
}
