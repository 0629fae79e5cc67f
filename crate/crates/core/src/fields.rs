//! External econo-electromagnetic field work terms.
//!
//! The investment field `e` drives an econo-polarization `p = chi_e * e` and
//! the growth field `h` drives an econo-magnetization `m = chi_m * h` (linear,
//! isotropic, memoryless response). Their wealth contribution along a field
//! trajectory is `sum(e_mid . dp + h_mid . dm)`, which for linear response
//! telescopes to `chi_e/2 (|e_end|^2 - |e_start|^2) + chi_m/2 (|h_end|^2 -
//! |h_start|^2)`.

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldState {
    /// Investment field.
    pub e: Vec3,
    /// Growth field.
    pub h: Vec3,
    /// Polarization susceptibility (>= 0).
    pub chi_e: f64,
    /// Magnetization susceptibility (>= 0).
    pub chi_m: f64,
}

impl FieldState {
    pub fn new(e: Vec3, h: Vec3, chi_e: f64, chi_m: f64) -> Result<Self> {
        check_susceptibility("chi_e", chi_e)?;
        check_susceptibility("chi_m", chi_m)?;
        Ok(Self { e, h, chi_e, chi_m })
    }
}

fn check_susceptibility(name: &str, chi: f64) -> Result<()> {
    if chi < 0.0 || !chi.is_finite() {
        return Err(Error::Argument(format!(
            "susceptibility {name} must be finite and >= 0, got {chi}"
        )));
    }
    Ok(())
}

fn scale(v: Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Econo-polarization `p = chi_e * e`.
pub fn polarization(state: &FieldState) -> Vec3 {
    scale(state.e, state.chi_e)
}

/// Econo-magnetization `m = chi_m * h`.
pub fn magnetization(state: &FieldState) -> Vec3 {
    scale(state.h, state.chi_m)
}

/// An ordered trajectory of (investment field, growth field) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPath {
    samples: Vec<(Vec3, Vec3)>,
}

impl FieldPath {
    pub fn new(samples: Vec<(Vec3, Vec3)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Argument(format!(
                "a field trajectory needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(Vec3, Vec3)] {
        &self.samples
    }

    /// Parse the `ex,ey,ez,hx,hy,hz` CSV format.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Argument("empty field trajectory CSV".into()))?;
        if header.trim() != "ex,ey,ez,hx,hy,hz" {
            return Err(Error::Argument(format!(
                "field trajectory CSV must start with header ex,ey,ez,hx,hy,hz, got {header:?}"
            )));
        }
        let mut samples = Vec::new();
        for (idx, line) in lines.enumerate() {
            let cols: Vec<&str> = line.trim().split(',').collect();
            if cols.len() != 6 {
                return Err(Error::Argument(format!(
                    "field trajectory row {} has {} columns, expected 6",
                    idx + 1,
                    cols.len()
                )));
            }
            let mut vals = [0.0f64; 6];
            for (k, col) in cols.iter().enumerate() {
                vals[k] = col.trim().parse::<f64>().map_err(|e| {
                    Error::Argument(format!("field trajectory row {}: {e}", idx + 1))
                })?;
            }
            samples.push(([vals[0], vals[1], vals[2]], [vals[3], vals[4], vals[5]]));
        }
        Self::new(samples)
    }
}

/// Field wealth contribution along a trajectory under linear response.
pub fn field_work(path: &FieldPath, chi_e: f64, chi_m: f64) -> Result<f64> {
    check_susceptibility("chi_e", chi_e)?;
    check_susceptibility("chi_m", chi_m)?;
    if path.samples.len() < 2 {
        return Err(Error::Argument(
            "field work needs a trajectory with at least 2 samples".into(),
        ));
    }
    let mut total = 0.0;
    for w in path.samples.windows(2) {
        let (e0, h0) = w[0];
        let (e1, h1) = w[1];
        let e_mid = [0.5 * (e0[0] + e1[0]), 0.5 * (e0[1] + e1[1]), 0.5 * (e0[2] + e1[2])];
        let h_mid = [0.5 * (h0[0] + h1[0]), 0.5 * (h0[1] + h1[1]), 0.5 * (h0[2] + h1[2])];
        let dp = [
            chi_e * (e1[0] - e0[0]),
            chi_e * (e1[1] - e0[1]),
            chi_e * (e1[2] - e0[2]),
        ];
        let dm = [
            chi_m * (h1[0] - h0[0]),
            chi_m * (h1[1] - h0[1]),
            chi_m * (h1[2] - h0[2]),
        ];
        total += dot(e_mid, dp) + dot(h_mid, dm);
    }
    Ok(total)
}
