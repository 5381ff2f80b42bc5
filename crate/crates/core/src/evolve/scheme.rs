//! Characteristic march over the diamond lattice with streaming diagnostics.
//!
//! The update integrates d_u d_v Psi = -(V_ell/4) Psi over a lattice cell:
//!
//!   Psi_N = Psi_E + Psi_W - Psi_S - (h^2/8) V_ell(r_c) (Psi_E + Psi_W),
//!
//! local truncation O(h^4), global O(h^2). Marching proceeds by constant-t
//! diagonals n = i + j, so only three diagonals are live at a time and the
//! default 1e9-cell grid needs a few hundred kilobytes of state. Slice
//! diagnostics for diagonal m use the centered u,v stencils built from
//! diagonals m-1 and m+1.

use super::fit::{fit_decay, DecayFit};
use super::grid::{GridSpec, RadialCache};
use super::profile::InitialProfile;
use crate::background::{tortoise, BackgroundParams, ModeSpec};
use crate::error::{Error, Result};
use serde::Serialize;

/// What to record during the march.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsSpec {
    /// Extraction radii (areal r > 2M); the first one is the primary
    /// observable and anchors the outgoing cones.
    pub extract_radii: Vec<f64>,
    /// Cadence of the sampled slice reports.
    pub sample_dt: f64,
    /// First sampled slice time.
    pub sample_start_t: f64,
    /// Inner radius of the decaying local-energy diagnostic (the near-horizon
    /// strip stores the ingoing train forever on t-slices and is excluded).
    pub interior_r_min: f64,
    /// Half-width rbar of the trapping indicator |r - 3M| > rbar.
    pub trapping_halfwidth: f64,
}

impl DiagnosticsSpec {
    pub fn defaults(bg: &BackgroundParams) -> Self {
        let m = bg.mass();
        Self {
            extract_radii: vec![10.0 * m],
            sample_dt: 0.5 * m,
            sample_start_t: 0.0,
            interior_r_min: 2.5 * m,
            trapping_halfwidth: 0.5 * m,
        }
    }
}

/// One sampled constant-t slice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyReport {
    pub t: f64,
    /// Conserved 1+1 energy (1/2) int (dt Psi)^2 + (dr* Psi)^2 + V Psi^2 dr*.
    pub e_conserved: f64,
    /// Non-degenerate energy density integrated over r <= R (reported; does
    /// not decay on pure t-slices because of the near-horizon train).
    pub e_n_interior: f64,
    /// 1+1 energy restricted to interior_r_min <= r <= R; this is the
    /// decaying local-energy observable.
    pub e_t_interior: f64,
    /// Running Morawetz bulk integral up to this slice.
    pub morawetz_cumulative: f64,
    /// r^p-weighted flux through the cone u = t - R* for p = 0, 1, 2.
    pub rp_flux: [f64; 3],
}

/// Time series of psi = Psi/r and dt psi at fixed areal radius.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractionSeries {
    pub r: f64,
    pub rstar: f64,
    pub t: Vec<f64>,
    pub psi: Vec<f64>,
    pub dtpsi: Vec<f64>,
}

impl ExtractionSeries {
    pub fn peak_abs_psi(&self) -> f64 {
        self.psi.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    pub fn fit_psi(&self, window: (f64, f64)) -> Result<DecayFit> {
        fit_decay(&format!("psi(r={})", self.r), &self.t, &self.psi, window)
    }

    pub fn fit_dtpsi(&self, window: (f64, f64)) -> Result<DecayFit> {
        fit_decay(&format!("dtpsi(r={})", self.r), &self.t, &self.dtpsi, window)
    }
}

/// Completed r^p fluxes for every outgoing cone row.
#[derive(Debug, Clone, Serialize)]
pub struct RowFluxes {
    u0: f64,
    h: f64,
    /// start of the flux integral in v: the cone piece with r >= R
    rstar_ref: f64,
    p: [Vec<f64>; 3],
}

impl RowFluxes {
    /// Flux through the cone u = u_cone (nearest lattice row), truncated at
    /// the grid's outer v.
    pub fn at_cone(&self, u_cone: f64, p: usize) -> Option<f64> {
        if p > 2 {
            return None;
        }
        let i = ((u_cone - self.u0) / self.h).round();
        if i < 0.0 || i >= self.p[p].len() as f64 {
            return None;
        }
        Some(self.p[p][i as usize])
    }

    /// Flux through the cone labelled by slice time tau (u = tau - R*).
    pub fn at_tau(&self, tau: f64, p: usize) -> Option<f64> {
        self.at_cone(tau - self.rstar_ref, p)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolveOutput {
    pub grid: GridSpec,
    pub reports: Vec<EnergyReport>,
    pub extractions: Vec<ExtractionSeries>,
    pub fluxes: RowFluxes,
    /// max |Psi| over the whole lattice.
    pub max_abs_psi: f64,
}

impl EvolveOutput {
    pub fn primary_extraction(&self) -> &ExtractionSeries {
        &self.extractions[0]
    }

    /// First report at or after time t.
    pub fn report_at(&self, t: f64) -> Option<&EnergyReport> {
        self.reports.iter().find(|r| r.t >= t - 1e-9)
    }
}

/// A fully specified evolution run.
#[derive(Debug, Clone)]
pub struct EvolveJob {
    pub bg: BackgroundParams,
    pub mode: ModeSpec,
    pub grid: GridSpec,
    pub profile: InitialProfile,
    pub diagnostics: DiagnosticsSpec,
    /// Replace V_ell by zero (exact d'Alembert propagation).
    pub flat_potential: bool,
}

struct ExtractState {
    r: f64,
    rstar: f64,
    kx: f64,
    k_floor: i64,
    t: Vec<f64>,
    psi: Vec<f64>,
    dtpsi: Vec<f64>,
}

impl EvolveJob {
    pub fn new(
        bg: BackgroundParams,
        mode: ModeSpec,
        grid: GridSpec,
        profile: InitialProfile,
    ) -> Self {
        let diagnostics = DiagnosticsSpec::defaults(&bg);
        Self {
            bg,
            mode,
            grid,
            profile,
            diagnostics,
            flat_potential: false,
        }
    }

    pub fn run(&self) -> Result<EvolveOutput> {
        self.grid.validate()?;
        self.profile.validate(&self.grid)?;
        if self.diagnostics.extract_radii.is_empty() {
            return Err(Error::InvalidParameter("at least one extraction radius".into()));
        }

        let grid = &self.grid;
        let h = grid.h;
        let nu = grid.nu();
        let nv = grid.nv();
        let nmax = nu + nv;
        let cache = RadialCache::build(&self.bg, &self.mode, grid, self.flat_potential)?;
        let m_mass = self.bg.mass();
        let llp1 = self.mode.angular_eigenvalue();

        // extraction bookkeeping
        let mut extracts: Vec<ExtractState> = Vec::new();
        for &re in &self.diagnostics.extract_radii {
            let rstar = tortoise(&self.bg, re)?;
            let kx = grid.k_of_rstar(rstar);
            let k_floor = kx.floor() as i64;
            if k_floor <= -(nu as i64) + 2 || k_floor >= nv as i64 - 2 {
                return Err(Error::Domain(format!(
                    "extraction radius r = {re} (r* = {rstar:.3}) does not cross the diamond"
                )));
            }
            extracts.push(ExtractState {
                r: re,
                rstar,
                kx,
                k_floor,
                t: Vec::new(),
                psi: Vec::new(),
                dtpsi: Vec::new(),
            });
        }

        // cone/interior reference indices
        let r_ref = self.diagnostics.extract_radii[0];
        let rstar_ref = tortoise(&self.bg, r_ref)?;
        let k_flux_start = grid.k_of_rstar(rstar_ref).ceil() as i64;
        let k_interior_hi = grid.k_of_rstar(rstar_ref).floor() as i64;
        let k_interior_lo = grid
            .k_of_rstar(tortoise(&self.bg, self.diagnostics.interior_r_min)?)
            .ceil() as i64;

        // sampling schedule
        let stride = ((self.diagnostics.sample_dt * 2.0 / h).round() as usize).max(1);
        let m_first =
            (((self.diagnostics.sample_start_t - grid.t00()) * 2.0 / h).ceil() as i64).max(2);

        // initial rays
        let u_ray = self.profile.u_ray(grid);
        let v_ray = self.profile.v_ray(grid);

        // diagonal buffers indexed by lattice i
        let mut prev2 = vec![0.0f64; nu + 1]; // diagonal n-2
        let mut prev1 = vec![0.0f64; nu + 1]; // diagonal n-1
        let mut cur = vec![0.0f64; nu + 1]; // diagonal n
        prev2[0] = u_ray[0];
        prev1[0] = if nv >= 1 { u_ray[1] } else { 0.0 };
        if nu >= 1 {
            prev1[1] = v_ray[1];
        }

        let mut flux = [
            vec![0.0f64; nu + 1],
            vec![0.0f64; nu + 1],
            vec![0.0f64; nu + 1],
        ];
        let mut morawetz = 0.0f64;
        let mut reports: Vec<EnergyReport> = Vec::new();
        let mut max_abs_psi = 0.0f64;
        let rbar = self.diagnostics.trapping_halfwidth;
        let x_guard = 1e-6 * m_mass;
        let inv2h = 1.0 / (2.0 * h);

        for n in 2..=nmax {
            // ---- build diagonal n into cur ----
            if n <= nv {
                cur[0] = u_ray[n];
            }
            if n <= nu {
                cur[n] = v_ray[n];
            }
            let ilo = if n > nv { n - nv } else { 1 };
            let ihi = (n - 1).min(nu);
            let base_k = n as i64 + nu as i64; // shifted index at i = 0
            for i in ilo..=ihi {
                let kidx = (base_k - 2 * i as i64) as usize;
                let val = cache.coef[kidx] * (prev1[i] + prev1[i - 1]) - prev2[i - 1];
                if !val.is_finite() {
                    return Err(Error::NumericalAbort(format!(
                        "non-finite value at diagonal n = {n} (t = {:.3}), i = {i}",
                        grid.diag_time(n)
                    )));
                }
                let a = val.abs();
                if a > max_abs_psi {
                    max_abs_psi = a;
                }
                cur[i] = val;
            }

            // ---- diagnostics for diagonal m = n - 1 ----
            let m = n - 1;
            let jlo = (m + 1).saturating_sub(nv).max(1);
            let jhi = (m - 1).min(nu.saturating_sub(1));
            if jhi >= jlo {
                let mbase_k = m as i64 + nu as i64;

                // Morawetz bulk increment and cone fluxes, every diagonal
                let mut dbulk = 0.0f64;
                for i in jlo..=jhi {
                    let kidx = (mbase_k - 2 * i as i64) as usize;
                    let du = (cur[i + 1] - prev2[i - 1]) * inv2h;
                    let dv = (cur[i] - prev2[i]) * inv2h;
                    let r = cache.r[kidx];
                    let eta = cache.eta[kidx];
                    let psi_val = prev1[i] / r;
                    let dt_psi = (du + dv) / r;
                    // Delta^2/r^6 (dr psi)^2 in the cancellation-free form
                    let grad = (dv - du) / r - eta * prev1[i] / (r * r);
                    let mut term = grad * grad / (r * r) + psi_val * psi_val / (r * r * r * r);
                    if (r - 3.0 * m_mass).abs() > rbar {
                        term += (dt_psi * dt_psi + llp1 * psi_val * psi_val / (r * r))
                            / (r * r * r);
                    }
                    // measure r^2 dr = eta r^2 dr*
                    dbulk += term * r * r * eta;

                    // outgoing-cone fluxes for this point's row
                    let k = mbase_k - 2 * i as i64 - nu as i64;
                    if k >= k_flux_start {
                        let j = m - i;
                        let wgt = if k == k_flux_start || j == nv - 1 { 0.5 } else { 1.0 };
                        let dv2 = wgt * dv * dv * h;
                        flux[0][i] += dv2;
                        flux[1][i] += r * dv2;
                        flux[2][i] += r * r * dv2;
                    }
                }
                morawetz += dbulk * h * (0.5 * h);

                // extraction at every diagonal
                for ex in extracts.iter_mut() {
                    let base = if (m as i64 - ex.k_floor).rem_euclid(2) == 0 {
                        ex.k_floor
                    } else {
                        ex.k_floor - 1
                    };
                    let i2 = m as i64 - base;
                    debug_assert!(i2 % 2 == 0);
                    let i = (i2 / 2) as usize;
                    if i >= jlo + 1 && i <= jhi {
                        let fr = 0.5 * (ex.kx - base as f64);
                        let psi_lo = prev1[i];
                        let psi_hi = prev1[i - 1];
                        let dt_lo = (cur[i + 1] - prev2[i - 1]) * inv2h
                            + (cur[i] - prev2[i]) * inv2h;
                        let dt_hi = (cur[i] - prev2[i - 2]) * inv2h
                            + (cur[i - 1] - prev2[i - 1]) * inv2h;
                        ex.t.push(grid.diag_time(m));
                        ex.psi.push((psi_lo + fr * (psi_hi - psi_lo)) / ex.r);
                        ex.dtpsi.push((dt_lo + fr * (dt_hi - dt_lo)) / ex.r);
                    }
                }

                // sampled slice energies
                let m_i64 = m as i64;
                if m_i64 >= m_first && (m_i64 - m_first) % stride as i64 == 0 {
                    let mut e = 0.0f64;
                    let mut e_t_int = 0.0f64;
                    let mut e_n_int = 0.0f64;
                    for i in jlo..=jhi {
                        let kidx = (mbase_k - 2 * i as i64) as usize;
                        let k = mbase_k - 2 * i as i64 - nu as i64;
                        let du = (cur[i + 1] - prev2[i - 1]) * inv2h;
                        let dv = (cur[i] - prev2[i]) * inv2h;
                        let dt = du + dv;
                        let drs = dv - du;
                        let wgt = if i == jlo || i == jhi { 0.5 } else { 1.0 };
                        let dens = 0.5
                            * (dt * dt + drs * drs + cache.v_ell[kidx] * prev1[i] * prev1[i]);
                        e += wgt * dens;
                        if k >= k_interior_lo && k <= k_interior_hi {
                            e_t_int += wgt * dens;
                        }
                        if k <= k_interior_hi && cache.x[kidx] >= x_guard {
                            let r = cache.r[kidx];
                            let eta = cache.eta[kidx];
                            let psi_val = prev1[i] / r;
                            let dt_psi = dt / r;
                            let drs_psi = drs / r - eta * prev1[i] / (r * r);
                            let du_psi = du / r + eta * prev1[i] / (2.0 * r * r);
                            let vhat_plus_ang = cache.v_ell[kidx] / eta;
                            let mut dens_n = 0.5
                                * (dt_psi * dt_psi
                                    + drs_psi * drs_psi
                                    + vhat_plus_ang * psi_val * psi_val);
                            let y1 = ((3.0 * m_mass - r) / m_mass).clamp(0.0, 1.0);
                            dens_n += y1 * du_psi * du_psi / (2.0 * eta);
                            e_n_int += wgt * dens_n * r * r;
                        }
                    }
                    reports.push(EnergyReport {
                        t: grid.diag_time(m),
                        e_conserved: e * h,
                        e_n_interior: e_n_int * h,
                        e_t_interior: e_t_int * h,
                        morawetz_cumulative: morawetz,
                        rp_flux: [f64::NAN; 3], // filled after the march
                    });
                }
            }

            // rotate buffers (recycle prev2 as the next scratch)
            std::mem::swap(&mut prev2, &mut prev1);
            std::mem::swap(&mut prev1, &mut cur);
        }

        let fluxes = RowFluxes {
            u0: grid.u0,
            h,
            rstar_ref,
            p: flux,
        };
        for rep in reports.iter_mut() {
            for p in 0..3 {
                rep.rp_flux[p] = fluxes.at_tau(rep.t, p).unwrap_or(f64::NAN);
            }
        }

        Ok(EvolveOutput {
            grid: *grid,
            reports,
            extractions: extracts
                .into_iter()
                .map(|ex| ExtractionSeries {
                    r: ex.r,
                    rstar: ex.rstar,
                    t: ex.t,
                    psi: ex.psi,
                    dtpsi: ex.dtpsi,
                })
                .collect(),
            fluxes,
            max_abs_psi,
        })
    }

    /// Run a small grid and return the dense lattice Psi[i][j]. Raw runner
    /// for test oracles: takes the ray data as-is without the profile
    /// envelope check; refuses grids above 4e6 cells.
    pub fn run_collect(&self) -> Result<Vec<Vec<f64>>> {
        self.grid.validate()?;
        let nu = self.grid.nu();
        let nv = self.grid.nv();
        if (nu + 1) * (nv + 1) > 4_000_000 {
            return Err(Error::InvalidParameter(
                "run_collect is for small grids (> 4e6 cells requested)".into(),
            ));
        }
        let cache = RadialCache::build(&self.bg, &self.mode, &self.grid, self.flat_potential)?;
        let u_ray = self.profile.u_ray(&self.grid);
        let v_ray = self.profile.v_ray(&self.grid);
        let mut psi = vec![vec![0.0f64; nv + 1]; nu + 1];
        psi[0] = u_ray;
        for (i, row) in psi.iter_mut().enumerate() {
            row[0] = v_ray[i];
        }
        for i in 1..=nu {
            for j in 1..=nv {
                let kidx = cache.idx(j as i64 - i as i64);
                let val =
                    cache.coef[kidx] * (psi[i - 1][j] + psi[i][j - 1]) - psi[i - 1][j - 1];
                if !val.is_finite() {
                    return Err(Error::NumericalAbort(format!(
                        "non-finite value at (i, j) = ({i}, {j})"
                    )));
                }
                psi[i][j] = val;
            }
        }
        Ok(psi)
    }
}

/// Result of the three-resolution self-convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub h_values: [f64; 3],
    /// psi sampled at the common lattice point (t_obs, r* line).
    pub values: [f64; 3],
    pub diffs: [f64; 2],
    /// log2(d1/d2); None when the scheme is exact on this data.
    pub observed_order: Option<f64>,
    pub exact: bool,
    pub observe_t: f64,
    pub observe_rstar: f64,
}

/// Run the base job at h, h/2, h/4 and measure the observed convergence
/// order of psi at time `observe_t` on the lattice r* line nearest
/// `observe_r`. The line is common to all three lattices, so the comparison
/// sees the scheme error alone.
pub fn convergence_study(job: &EvolveJob, observe_t: f64, observe_r: f64) -> Result<ConvergenceReport> {
    let grid = &job.grid;
    let h = grid.h;
    let m_c = ((observe_t - grid.t00()) * 2.0 / h).round() as i64;
    if ((observe_t - grid.t00()) * 2.0 / h - m_c as f64).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "observe_t = {observe_t} is not on the coarse time lattice"
        )));
    }
    // nearest offset line with the parity of the observation diagonal
    let kx = grid.k_of_rstar(tortoise(&job.bg, observe_r)?);
    let mut k_c = kx.round() as i64;
    if (m_c - k_c).rem_euclid(2) != 0 {
        k_c += if kx - k_c as f64 >= 0.0 { 1 } else { -1 };
    }
    let rstar_line = grid.rstar_of_k(k_c);
    let r_line = crate::background::inverse_tortoise(&job.bg, rstar_line)?;

    let mut values = [0.0f64; 3];
    let mut h_values = [0.0f64; 3];
    for (s, val) in values.iter_mut().enumerate() {
        let hs = h / 2f64.powi(s as i32);
        let mut sub = job.clone();
        sub.grid.h = hs;
        sub.diagnostics.extract_radii = vec![r_line];
        let out = sub.run()?;
        let series = &out.extractions[0];
        let idx = series
            .t
            .iter()
            .position(|&t| (t - observe_t).abs() < 0.25 * hs)
            .ok_or_else(|| {
                Error::Domain(format!("observation time {observe_t} not in extraction range"))
            })?;
        *val = series.psi[idx];
        h_values[s] = hs;
    }
    let d1 = (values[0] - values[1]).abs();
    let d2 = (values[1] - values[2]).abs();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let exact = d1 <= 1e-13 * scale && d2 <= 1e-13 * scale;
    let observed_order = if exact || d2 == 0.0 {
        None
    } else {
        Some((d1 / d2).log2())
    };
    Ok(ConvergenceReport {
        h_values,
        values,
        diffs: [d1, d2],
        observed_order,
        exact,
        observe_t,
        observe_rstar: rstar_line,
    })
}
