//! Analytic derivative bundles ("jets") for profile curves and immersions,
//! plus the centered finite-difference oracle used to validate them.
//!
//! Profile jets carry both profile components and their derivatives to order
//! 3 at one parameter value. Immersion jets carry the surface point and all
//! partials `∂^m_s ∂^n_t r` with `m + n ≤ 3`. No numerical differentiation is
//! involved on the analytic side; the finite-difference functions here exist
//! only as an independent check.

use serde::{Deserialize, Serialize};

use crate::families::SurfaceFamily;
use crate::pseudo::PseudoVector;
use crate::{Error, Result};

/// Default step for first/second-derivative validation stencils.
pub const FD_STEP: f64 = 1e-4;
/// Default step for Gauss-map Laplacian grids.
pub const FD_STEP_LAPLACIAN: f64 = 1e-3;

/// Values and derivatives to order 3 of the two profile components at `s`.
///
/// The meaning of `(c1, c2)` depends on the chart: `(x, w)` for the
/// double-rotational chart in `E^4_1`, `(y, w)` for `M_1(b)` and `(z, x)`
/// for `M_2(b)` in `E^4_2`. Index `k` of each array is the `k`-th
/// `s`-derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub s: f64,
    pub c1: [f64; 4],
    pub c2: [f64; 4],
}

impl ProfileJet {
    /// Plane curvature `κ = c2′ c1″ − c1′ c2″` of an arc-length timelike
    /// profile `(x, w) = (c1, c2)`.
    pub fn curvature(&self) -> f64 {
        self.c2[1] * self.c1[2] - self.c1[1] * self.c2[2]
    }

    /// Residual of the arc-length identity `x′² − w′² = −1`.
    pub fn arc_length_defect(&self) -> f64 {
        self.c1[1] * self.c1[1] - self.c2[1] * self.c2[1] + 1.0
    }
}

/// The immersion value and all its partial derivatives through order 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImmersionJet {
    pub s: f64,
    pub t: f64,
    pub value: PseudoVector,
    pub ds: PseudoVector,
    pub dt: PseudoVector,
    pub dss: PseudoVector,
    pub dst: PseudoVector,
    pub dtt: PseudoVector,
    pub dsss: PseudoVector,
    pub dsst: PseudoVector,
    pub dstt: PseudoVector,
    pub dttt: PseudoVector,
}

impl ImmersionJet {
    /// Partial `∂^m_s ∂^n_t r` for `m + n ≤ 3`.
    pub fn partial(&self, m: usize, n: usize) -> &PseudoVector {
        match (m, n) {
            (0, 0) => &self.value,
            (1, 0) => &self.ds,
            (0, 1) => &self.dt,
            (2, 0) => &self.dss,
            (1, 1) => &self.dst,
            (0, 2) => &self.dtt,
            (3, 0) => &self.dsss,
            (2, 1) => &self.dsst,
            (1, 2) => &self.dstt,
            (0, 3) => &self.dttt,
            _ => panic!("immersion jet stores derivatives up to order 3"),
        }
    }
}

/// Analytic immersion jet of a family at `(s, t)`.
pub fn immersion_jet(family: &SurfaceFamily, s: f64, t: f64) -> Result<ImmersionJet> {
    family.jet(s, t)
}

/// Second-order central difference of a scalar function, error `O(h²)`.
pub fn central_diff<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Direction of a grid-sampled partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDirection {
    S,
    T,
}

/// Centered partial derivative of a map sampled on a uniform grid.
///
/// `values` is stored row-major with `nt` samples per `s`-row. Errors when
/// the centered stencil would leave the grid.
pub fn fd_partial(
    values: &[f64],
    ns: usize,
    nt: usize,
    is: usize,
    it: usize,
    direction: GridDirection,
    step: f64,
) -> Result<f64> {
    if ns * nt != values.len() {
        return Err(Error::InvalidParameter(format!(
            "grid of {}x{} cannot hold {} samples",
            ns,
            nt,
            values.len()
        )));
    }
    let at = |i: usize, j: usize| values[i * nt + j];
    match direction {
        GridDirection::S => {
            if is == 0 || is + 1 >= ns {
                return Err(Error::Stencil(format!(
                    "s-stencil at row {is} of {ns} leaves the grid"
                )));
            }
            Ok((at(is + 1, it) - at(is - 1, it)) / (2.0 * step))
        }
        GridDirection::T => {
            if it == 0 || it + 1 >= nt {
                return Err(Error::Stencil(format!(
                    "t-stencil at column {it} of {nt} leaves the grid"
                )));
            }
            Ok((at(is, it + 1) - at(is, it - 1)) / (2.0 * step))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_diff_on_square() {
        let d = central_diff(|x| Ok(x * x), 1.0, 1e-3).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn central_diff_constant_is_zero() {
        let d = central_diff(|_| Ok(4.5), 0.3, 1e-3).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn fd_partial_linear_field() {
        // f(s, t) = 2s + 3t sampled on a 5x5 grid with steps 0.1.
        let (ns, nt, h) = (5usize, 5usize, 0.1f64);
        let mut values = vec![0.0; ns * nt];
        for i in 0..ns {
            for j in 0..nt {
                values[i * nt + j] = 2.0 * (i as f64) * h + 3.0 * (j as f64) * h;
            }
        }
        let ds = fd_partial(&values, ns, nt, 2, 2, GridDirection::S, h).unwrap();
        let dt = fd_partial(&values, ns, nt, 2, 2, GridDirection::T, h).unwrap();
        assert!((ds - 2.0).abs() < 1e-12);
        assert!((dt - 3.0).abs() < 1e-12);
        assert!(matches!(
            fd_partial(&values, ns, nt, 0, 2, GridDirection::S, h),
            Err(Error::Stencil(_))
        ));
    }
}
