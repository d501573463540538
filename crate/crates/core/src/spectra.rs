//! Dispersion relation and the Fourier multipliers of the linearized problem.
//!
//! All symbols are even in the frequency. Infinite depth is an explicit
//! variant, so `tanh(h|xi|)` is exactly 1 there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of modes swept when certifying the remainder constant.
pub const N_CERT: i64 = 10_000;

/// Fluid depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Depth {
    Finite(f64),
    Infinite,
}

impl Depth {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Depth::Infinite)
    }
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::Finite(h) => write!(f, "{h:.16e}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

/// Gravity, surface tension and depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub g: f64,
    pub kappa: f64,
    pub depth: Depth,
}

impl PhysicalParams {
    /// Validated constructor.
    pub fn new(g: f64, kappa: f64, depth: Depth) -> Result<Self> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParameter(format!("g must be >= 0, got {g}")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
        }
        if let Depth::Finite(h) = depth {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidParameter(format!("depth must be > 0, got {h}")));
            }
        }
        Ok(Self { g, kappa, depth })
    }

    /// Infinite depth shorthand. Panics on invalid input.
    pub fn deep(g: f64, kappa: f64) -> Self {
        Self::new(g, kappa, Depth::Infinite).expect("invalid parameters")
    }

    /// Finite depth shorthand. Panics on invalid input.
    pub fn finite(g: f64, kappa: f64, h: f64) -> Self {
        Self::new(g, kappa, Depth::Finite(h)).expect("invalid parameters")
    }

    /// `tanh(h|xi|)`, exactly 1 in infinite depth.
    pub fn depth_tanh(&self, xi: f64) -> f64 {
        match self.depth {
            Depth::Infinite => 1.0,
            Depth::Finite(h) => stable_tanh(h * xi.abs()),
        }
    }

    /// `1 - tanh(h|xi|)` without cancellation.
    pub fn depth_tanh_complement(&self, xi: f64) -> f64 {
        match self.depth {
            Depth::Infinite => 0.0,
            Depth::Finite(h) => 2.0 / ((2.0 * h * xi.abs()).exp() + 1.0),
        }
    }
}

/// `tanh(x)` as `1 - 2/(e^{2x}+1)` for `x > 0`, odd extension otherwise.
pub fn stable_tanh(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > 0.0 {
        1.0 - 2.0 / ((2.0 * x).exp() + 1.0)
    } else {
        -stable_tanh(-x)
    }
}

/// Dispersion relation `Omega(xi) = ((kappa|xi|^3 + g|xi|) tanh(h|xi|))^{1/2}`.
pub fn omega(params: &PhysicalParams, xi: f64) -> f64 {
    let a = xi.abs();
    (a * (params.g + params.kappa * a * a) * params.depth_tanh(a)).sqrt()
}

/// Symbol of `G(0) = D tanh(hD)` at integer frequency.
pub fn g0_mult(params: &PhysicalParams, j: i64) -> f64 {
    g0_symbol(params, j as f64)
}

/// Symbol of `G(0)` at a real frequency.
pub fn g0_symbol(params: &PhysicalParams, xi: f64) -> f64 {
    let a = xi.abs();
    a * params.depth_tanh(a)
}

/// Order -1/4 multiplier `Lambda(j) = (|j| tanh(h|j|))^{1/4} (g + kappa j^2)^{-1/4}`.
pub fn lambda_mult(params: &PhysicalParams, j: i64) -> Result<f64> {
    if j == 0 {
        return Err(Error::ZeroMode);
    }
    Ok(lambda_symbol(params, j as f64))
}

/// `Lambda` at a real nonzero frequency, without the zero check.
pub fn lambda_symbol(params: &PhysicalParams, xi: f64) -> f64 {
    let a = xi.abs();
    (g0_symbol(params, a) / (params.g + params.kappa * a * a)).powf(0.25)
}

/// Remainder `r(n) = Omega(n) - sqrt(kappa)|n|^{3/2}` together with the
/// certified constant `C` such that `|r(n)| sqrt|n| <= C` for all `n != 0`.
pub fn omega_remainder(params: &PhysicalParams, n: i64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::ZeroMode);
    }
    Ok((remainder(params, n.unsigned_abs() as f64), bound_constant(params)))
}

/// Remainder `r(n)` alone, for sweeps that reuse one bound constant.
pub fn remainder_at(params: &PhysicalParams, n: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroMode);
    }
    Ok(remainder(params, n.unsigned_abs() as f64))
}

/// `Omega(n)^2 - kappa n^3 = g n t - kappa n^3 (1 - t)` divided by
/// `Omega(n) + sqrt(kappa) n^{3/2}`.
fn remainder(params: &PhysicalParams, n: f64) -> f64 {
    let t = params.depth_tanh(n);
    let tc = params.depth_tanh_complement(n);
    let num = params.g * n * t - params.kappa * n * n * n * tc;
    num / (omega(params, n) + params.kappa.sqrt() * n.powf(1.5))
}

/// Certified remainder constant: the maximum of `|r(n)| sqrt(n)` over
/// `1 <= n <= N_CERT` plus the tail bound `g/(2 sqrt(kappa)) + 2 sqrt(kappa) e^{-2h}`.
pub fn bound_constant(params: &PhysicalParams) -> f64 {
    let empirical = (1..=N_CERT)
        .map(|n| {
            let x = n as f64;
            remainder(params, x).abs() * x.sqrt()
        })
        .fold(0.0_f64, f64::max);
    let sk = params.kappa.sqrt();
    let depth_tail = match params.depth {
        Depth::Infinite => 0.0,
        Depth::Finite(h) => 2.0 * sk * (-2.0 * h).exp(),
    };
    empirical + params.g / (2.0 * sk) + depth_tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_trivial_values() {
        let p = PhysicalParams::deep(1.0, 1.0);
        assert_eq!(omega(&p, 0.0), 0.0);
        assert!((omega(&p, 1.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn omega_matches_high_precision() {
        let p = PhysicalParams::finite(1.0, 1.0, 0.5);
        let reference = 5.210_992_958_097_908_727_903_094_277_669_84;
        assert!((omega(&p, 3.0) - reference).abs() < 1e-14 * reference);
    }

    #[test]
    fn lambda_values() {
        let p = PhysicalParams::deep(1.0, 1.0);
        assert!((lambda_mult(&p, 1).unwrap() - 2f64.powf(-0.25)).abs() < 1e-15);
        let q = PhysicalParams::deep(1.0, 0.5);
        assert_eq!(lambda_mult(&q, 2).unwrap(), lambda_mult(&q, -2).unwrap());
        let r = PhysicalParams::finite(9.81, 0.07, 2.0);
        let reference = 0.810_966_738_436_458_732_502_210_618_085_288;
        assert!((lambda_mult(&r, 5).unwrap() - reference).abs() < 1e-14);
        assert_eq!(lambda_mult(&p, 0), Err(Error::ZeroMode));
    }

    #[test]
    fn g0_values() {
        let p = PhysicalParams::deep(1.0, 1.0);
        assert_eq!(g0_mult(&p, 3), 3.0);
        assert_eq!(g0_mult(&p, 0), 0.0);
        let q = PhysicalParams::finite(1.0, 1.0, 1.0);
        assert_eq!(g0_mult(&q, 0), 0.0);
        let tanh1 = 0.761_594_155_955_764_888_119_458_282_604_793_6;
        assert!((g0_mult(&q, 1) - tanh1).abs() < 1e-15);
    }

    #[test]
    fn stable_tanh_large_arguments() {
        assert_eq!(stable_tanh(1000.0), 1.0);
        assert_eq!(stable_tanh(-1000.0), -1.0);
        assert!((stable_tanh(0.3) - 0.3f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn remainder_pure_capillary_is_zero() {
        let p = PhysicalParams::deep(0.0, 1.0);
        let (r, c) = omega_remainder(&p, 4).unwrap();
        assert_eq!(r, 0.0);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn remainder_binomial_asymptotics() {
        let p = PhysicalParams::deep(1.0, 1.0);
        let (r, _) = omega_remainder(&p, 100).unwrap();
        let approx = 1.0 / 2.0 * 100f64.powf(-0.5);
        assert!((r - approx).abs() < 0.01 * approx);
    }

    #[test]
    fn remainder_bound_holds_on_sweep() {
        for p in [
            PhysicalParams::finite(1.0, 1.0, 1.0),
            PhysicalParams::deep(1.0, 0.5),
            PhysicalParams::finite(9.81, 0.07, 0.5),
        ] {
            let c = bound_constant(&p);
            for n in 1..=N_CERT {
                let r = remainder_at(&p, n).unwrap();
                assert!(r.abs() * (n as f64).sqrt() <= c);
                let direct = omega(&p, n as f64) - p.kappa.sqrt() * (n as f64).powf(1.5);
                assert!((r - direct).abs() < 1e-9 * (1.0 + r.abs()));
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(-1.0, 1.0, Depth::Infinite).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, Depth::Infinite).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, Depth::Finite(0.0)).is_err());
        assert!(PhysicalParams::new(0.0, 1.0, Depth::Finite(1.0)).is_ok());
    }
}
