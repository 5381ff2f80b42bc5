//! Double-null diamond lattice geometry and the per-offset radial cache.
//!
//! Lattice points are (i, j) with u = u0 + i h, v = v0 + j h. Constant-t
//! slices are the diagonals n = i + j (t = (u0+v0)/2 + n h/2); lines of
//! constant r* are labelled by the offset k = j - i (r* = (v0-u0+k h)/2).

use crate::background::{
    inverse_tortoise_shifted, potential_1p1_from_x, BackgroundParams, ModeSpec,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u0: f64,
    pub u_max: f64,
    pub v0: f64,
    pub v_max: f64,
    pub h: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParameter(format!("h must be > 0, got {}", self.h)));
        }
        if !(self.u_max > self.u0) || !(self.v_max > self.v0) {
            return Err(Error::InvalidParameter(
                "grid ranges must satisfy u_max > u0 and v_max > v0".into(),
            ));
        }
        if self.nu() < 4 || self.nv() < 4 {
            return Err(Error::InvalidParameter(
                "grid must span at least 4 steps in each null direction".into(),
            ));
        }
        Ok(())
    }

    pub fn nu(&self) -> usize {
        ((self.u_max - self.u0) / self.h).round() as usize
    }

    pub fn nv(&self) -> usize {
        ((self.v_max - self.v0) / self.h).round() as usize
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.h
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v0 + j as f64 * self.h
    }

    /// Time of the corner diagonal n = 0.
    pub fn t00(&self) -> f64 {
        0.5 * (self.u0 + self.v0)
    }

    /// Time of diagonal n.
    pub fn diag_time(&self, n: usize) -> f64 {
        self.t00() + n as f64 * self.h * 0.5
    }

    /// r* of the offset line k = j - i.
    pub fn rstar_of_k(&self, k: i64) -> f64 {
        0.5 * (self.v0 - self.u0 + k as f64 * self.h)
    }

    /// Real-valued offset index of a given r*.
    pub fn k_of_rstar(&self, rstar: f64) -> f64 {
        (2.0 * rstar - (self.v0 - self.u0)) / self.h
    }
}

/// Radial functions tabulated per offset k in [-nu, nv], indexed by k + nu.
pub(crate) struct RadialCache {
    nu: usize,
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub eta: Vec<f64>,
    pub v_ell: Vec<f64>,
    /// Update coefficient 1 - (h^2/8) V_ell.
    pub coef: Vec<f64>,
}

impl RadialCache {
    pub fn build(
        bg: &BackgroundParams,
        mode: &ModeSpec,
        grid: &GridSpec,
        flat_potential: bool,
    ) -> Result<Self> {
        let nu = grid.nu();
        let nv = grid.nv();
        let len = nu + nv + 1;
        let mut x = Vec::with_capacity(len);
        let mut r = Vec::with_capacity(len);
        let mut eta = Vec::with_capacity(len);
        let mut v_ell = Vec::with_capacity(len);
        let mut coef = Vec::with_capacity(len);
        let q = grid.h * grid.h / 8.0;
        for idx in 0..len {
            let k = idx as i64 - nu as i64;
            let rs = grid.rstar_of_k(k);
            let xx = inverse_tortoise_shifted(bg, rs)?;
            let rr = 2.0 * bg.mass() + xx;
            let v = if flat_potential {
                0.0
            } else {
                potential_1p1_from_x(bg, mode, xx)
            };
            x.push(xx);
            r.push(rr);
            eta.push(xx / rr);
            v_ell.push(v);
            coef.push(1.0 - q * v);
        }
        Ok(Self {
            nu,
            x,
            r,
            eta,
            v_ell,
            coef,
        })
    }

    #[inline]
    pub fn idx(&self, k: i64) -> usize {
        (k + self.nu as i64) as usize
    }
}
