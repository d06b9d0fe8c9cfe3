use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdScheme {
    /// Central differences, error `O(h²)`.
    Central2nd,
    /// Richardson extrapolation of central differences at `h` and `h/2`,
    /// error `O(h⁴)`.
    Richardson4th,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub h: f64,
    pub scheme: FdScheme,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            h: 1e-3,
            scheme: FdScheme::Central2nd,
        }
    }
}

pub const MIN_STEP: f64 = 1e-6;
pub const MAX_STEP: f64 = 1e-1;

impl FdConfig {
    pub fn new(h: f64, scheme: FdScheme) -> Result<Self> {
        let cfg = Self { h, scheme };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_STEP..=MAX_STEP).contains(&self.h) {
            return Err(Error::Input(format!(
                "fd step {} outside [{MIN_STEP:e}, {MAX_STEP:e}]",
                self.h
            )));
        }
        Ok(())
    }

    /// Tolerance for identities that finite differences only satisfy
    /// approximately: truncation `100 h²` plus a roundoff term for second
    /// derivatives.
    pub fn quality_threshold(&self) -> f64 {
        100.0 * self.h * self.h + 1e-14 / (self.h * self.h)
    }

    /// `∂f/∂x_a` for a vector-valued `f` of six coordinates.
    pub fn derivative<F>(&self, f: &F, x: &[f64; 6], a: usize) -> Vec<f64>
    where
        F: Fn(&[f64; 6]) -> Vec<f64>,
    {
        let central = |h: f64| {
            let mut xp = *x;
            let mut xm = *x;
            xp[a] += h;
            xm[a] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            fp.iter().zip(&fm).map(|(p, m)| (p - m) / (2.0 * h)).collect::<Vec<f64>>()
        };
        match self.scheme {
            FdScheme::Central2nd => central(self.h),
            FdScheme::Richardson4th => {
                let coarse = central(self.h);
                let fine = central(self.h / 2.0);
                fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_range() {
        assert!(FdConfig::new(1e-7, FdScheme::Central2nd).is_err());
        assert!(FdConfig::new(0.2, FdScheme::Central2nd).is_err());
        assert!(FdConfig::new(1e-3, FdScheme::Richardson4th).is_ok());
    }

    #[test]
    fn orders_of_accuracy() {
        let f = |x: &[f64; 6]| vec![(2.0 * x[0]).sin() * x[1].exp()];
        let x = [0.3, 0.2, 0.0, 0.0, 0.0, 0.0];
        let exact = 2.0 * (0.6f64).cos() * (0.2f64).exp();
        let err = |cfg: FdConfig| (cfg.derivative(&f, &x, 0)[0] - exact).abs();
        let c1 = err(FdConfig::new(1e-2, FdScheme::Central2nd).unwrap());
        let c2 = err(FdConfig::new(5e-3, FdScheme::Central2nd).unwrap());
        assert!(c1 / c2 > 3.5 && c1 / c2 < 4.5);
        let r1 = err(FdConfig::new(1e-2, FdScheme::Richardson4th).unwrap());
        let r2 = err(FdConfig::new(5e-3, FdScheme::Richardson4th).unwrap());
        assert!(r1 / r2 > 12.0, "{r1} {r2}");
    }
}
