use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of eigenvalues of the curvature operator in real dimension six.
pub const SPECTRUM_LEN: usize = 15;
/// Relative width of the band around the strict inequalities that is
/// reported as a boundary case (and counted as failure).
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BhlResult {
    pub pass: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `7 λ_min − 5 λ_max`; pinching holds iff this and `λ_min` are positive.
    pub pinching_margin: f64,
    /// A strict inequality was within the tie band.
    pub boundary: bool,
}

/// Spectral pinching test `λ_min > 0` and `5 λ_max < 7 λ_min` on an ascending
/// spectrum. Scale-invariant: the tie band is relative to `max |λ|`.
pub fn check_bhl(spectrum: &[f64]) -> Result<BhlResult> {
    if spectrum.len() != SPECTRUM_LEN {
        return Err(Error::Input(format!(
            "spectrum must have {SPECTRUM_LEN} entries, got {}",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("spectrum contains non-finite values".into()));
    }
    if spectrum.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Input("spectrum must be sorted ascending".into()));
    }
    let lambda_min = spectrum[0];
    let lambda_max = spectrum[SPECTRUM_LEN - 1];
    let pinching_margin = 7.0 * lambda_min - 5.0 * lambda_max;
    let scale = lambda_min.abs().max(lambda_max.abs());
    let band = BOUNDARY_TOL * scale;
    let boundary = scale > 0.0 && (lambda_min.abs() <= band || pinching_margin.abs() <= 7.0 * band);
    let pass = !boundary && lambda_min > 0.0 && pinching_margin > 0.0;
    Ok(BhlResult {
        pass,
        lambda_min,
        lambda_max,
        pinching_margin,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_spectrum_passes_with_margin_two() {
        let r = check_bhl(&[1.0; 15]).unwrap();
        assert!(r.pass && !r.boundary);
        assert_eq!(r.pinching_margin, 2.0);
        assert_eq!(r.lambda_min, 1.0);
    }

    #[test]
    fn wide_spectrum_fails() {
        let mut s = [1.0; 15];
        s[14] = 1.5;
        assert!(!check_bhl(&s).unwrap().pass);
    }

    #[test]
    fn pinched_band_passes() {
        let s: Vec<f64> = (0..15)
            .map(|k| 5.0 / 6.0 + 0.01 + (1.0 / 3.0 - 0.02) * k as f64 / 14.0)
            .collect();
        assert!((s[14] - (7.0 / 6.0 - 0.01)).abs() < 1e-15);
        assert!(check_bhl(&s).unwrap().pass);
    }

    #[test]
    fn exact_tie_is_a_boundary_failure() {
        let mut s = [5.0; 15];
        s[14] = 7.0;
        let r = check_bhl(&s).unwrap();
        assert!(!r.pass && r.boundary);
        let z = check_bhl(&[0.0; 15]).unwrap();
        assert!(!z.pass);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(check_bhl(&[1.0; 14]), Err(Error::Input(_))));
        let mut s = [1.0; 15];
        s[0] = 2.0;
        assert!(matches!(check_bhl(&s), Err(Error::Input(_))));
    }

    proptest! {
        #[test]
        fn verdict_is_scale_invariant(
            mut s in proptest::collection::vec(-2.0f64..3.0, 15),
            c in 1e-3f64..1e3,
        ) {
            s.sort_by(f64::total_cmp);
            let scaled: Vec<f64> = s.iter().map(|v| v * c).collect();
            let a = check_bhl(&s).unwrap();
            let b = check_bhl(&scaled).unwrap();
            // away from the tie band the decision cannot depend on rounding
            prop_assume!(a.pinching_margin.abs() > 1e-9 && a.lambda_min.abs() > 1e-9);
            prop_assert_eq!(a.pass, b.pass);
        }
    }
}
