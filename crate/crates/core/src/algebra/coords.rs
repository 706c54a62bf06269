//! Phase-space coordinates: squeeze parameter, Poincaré disk and hyperboloid.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid_param, Result};

/// Displacement `ζ = (τ/2) e^{iχ}` in SU(1,1) phase space.
///
/// `tau` is the hyperbolic polar angle of the point on the upper sheet and
/// `chi` its azimuth, kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    tau: f64,
    chi: f64,
}

impl SqueezeParam {
    pub fn new(tau: f64, chi: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(invalid_param!("tau = {tau} must be finite and nonnegative"));
        }
        if !chi.is_finite() {
            return Err(invalid_param!("chi = {chi} must be finite"));
        }
        Ok(Self {
            tau,
            chi: canonical_angle(chi),
        })
    }

    pub const fn origin() -> Self {
        Self { tau: 0.0, chi: 0.0 }
    }

    /// Parameter for a given `ζ`.
    pub fn from_zeta(zeta: Complex64) -> Self {
        let tau = 2.0 * zeta.norm();
        let chi = if tau == 0.0 { 0.0 } else { zeta.arg() };
        Self {
            tau,
            chi: canonical_angle(chi),
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn zeta(&self) -> Complex64 {
        Complex64::from_polar(0.5 * self.tau, self.chi)
    }

    /// `−ζ`, i.e. the inverse displacement.
    pub fn negated(&self) -> Self {
        Self::from_zeta(-self.zeta())
    }

    /// `ζ` scaled by a nonnegative factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            tau: self.tau * factor.abs(),
            chi: if factor < 0.0 {
                canonical_angle(self.chi + std::f64::consts::PI)
            } else {
                self.chi
            },
        }
    }

    pub fn to_disk(&self) -> DiskPoint {
        DiskPoint {
            xi: Complex64::from_polar((0.5 * self.tau).tanh(), self.chi),
        }
    }

    pub fn to_hyperboloid(&self) -> HyperboloidPoint {
        let (s, c) = (self.tau.sinh(), self.tau.cosh());
        HyperboloidPoint {
            n0: c,
            n1: s * self.chi.cos(),
            n2: s * self.chi.sin(),
        }
    }
}

fn canonical_angle(chi: f64) -> f64 {
    let c = chi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if c >= TAU {
        0.0
    } else {
        c
    }
}

/// Stereographic image `ξ = tanh(τ/2) e^{iχ}` in the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    xi: Complex64,
}

impl DiskPoint {
    pub fn new(xi: Complex64) -> Result<Self> {
        if !(xi.norm() < 1.0) {
            return Err(invalid_param!("|xi| = {} must be below 1", xi.norm()));
        }
        Ok(Self { xi })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }
}

pub fn disk_to_param(x: DiskPoint) -> SqueezeParam {
    let r = x.xi.norm();
    let tau = 2.0 * r.atanh();
    let chi = if r == 0.0 { 0.0 } else { x.xi.arg() };
    SqueezeParam {
        tau,
        chi: canonical_angle(chi),
    }
}

/// Point `n = (cosh τ, sinh τ cos χ, sinh τ sin χ)` on the upper sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidPoint {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

impl HyperboloidPoint {
    /// Minkowski norm `n0² − n1² − n2²`, which is 1 on the sheet.
    pub fn minkowski_norm(&self) -> f64 {
        self.n0 * self.n0 - self.n1 * self.n1 - self.n2 * self.n2
    }

    pub fn to_param(&self) -> SqueezeParam {
        let s = self.n1.hypot(self.n2);
        let tau = s.asinh();
        let chi = if s == 0.0 {
            0.0
        } else {
            self.n2.atan2(self.n1)
        };
        SqueezeParam {
            tau,
            chi: canonical_angle(chi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn origin_maps_to_disk_centre_and_sheet_apex() {
        let p = SqueezeParam::origin();
        assert_eq!(p.to_disk().xi(), Complex64::new(0.0, 0.0));
        let n = p.to_hyperboloid();
        assert_eq!((n.n0, n.n1, n.n2), (1.0, 0.0, 0.0));
    }

    #[test]
    fn half_radius_disk_point() {
        let p = disk_to_param(DiskPoint::new(Complex64::new(0.5, 0.0)).unwrap());
        let n = p.to_hyperboloid();
        assert!((n.n0 - 5.0 / 3.0).abs() < 1e-14);
        assert!((n.n1 - 4.0 / 3.0).abs() < 1e-14);
        assert!(n.n2.abs() < 1e-15);
    }

    #[test]
    fn rejects_points_outside_disk_and_bad_params() {
        assert!(DiskPoint::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(DiskPoint::new(Complex64::new(0.8, 0.7)).is_err());
        assert!(SqueezeParam::new(-0.1, 0.0).is_err());
        assert!(SqueezeParam::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn chi_is_canonicalized() {
        let p = SqueezeParam::new(1.0, -std::f64::consts::FRAC_PI_2).unwrap();
        assert!((p.chi() - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!(SqueezeParam::new(1.0, -1e-300).unwrap().chi() < TAU);
    }

    proptest! {
        #[test]
        fn coordinate_round_trips(tau in 0.0f64..5.0, chi in 0.0f64..TAU) {
            let p = SqueezeParam::new(tau, chi).unwrap();
            let back = disk_to_param(p.to_disk());
            prop_assert!((back.tau() - tau).abs() < 1e-12 * tau.cosh());
            if tau > 1e-6 {
                let dchi = (back.chi() - p.chi()).abs();
                prop_assert!(dchi.min(TAU - dchi) < 1e-12);
            }
            let n = p.to_hyperboloid();
            prop_assert!((n.minkowski_norm() - 1.0).abs() < 1e-10 * n.n0 * n.n0);
            prop_assert!(n.n0 >= 1.0);
            let q = n.to_param();
            prop_assert!((q.tau() - tau).abs() < 1e-9);
        }
    }
}
