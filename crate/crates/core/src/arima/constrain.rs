//! Unconstrained-to-stationary reparameterization.
//!
//! Maps raw reals to partial autocorrelations via tanh, then through the
//! Durbin-Levinson recursion to polynomial coefficients. The image is the
//! full stationary (AR) / invertible (MA) region, so the optimizer can
//! roam all of R^(p+q).

/// Durbin-Levinson: partial autocorrelations (each in (-1,1)) to the
/// coefficients of a stationary polynomial 1 - c1*z - ... - cp*z^p.
pub(crate) fn pacf_to_coeffs(pacf: &[f64]) -> Vec<f64> {
    let p = pacf.len();
    let mut phi = vec![0.0; p];
    let mut prev = vec![0.0; p];
    for k in 0..p {
        prev[..k].copy_from_slice(&phi[..k]);
        phi[k] = pacf[k];
        for j in 0..k {
            phi[j] = prev[j] - pacf[k] * prev[k - 1 - j];
        }
    }
    phi
}

/// Maps `raw` (length p+q) to stationary AR coefficients and invertible MA
/// coefficients. AR polynomial is 1 - sum(phi_i z^i), MA polynomial is
/// 1 + sum(theta_i z^i); both end up with all roots outside the unit
/// circle. Total function: every input is valid.
pub fn constrain(raw: &[f64], p: usize, q: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(raw.len(), p + q, "raw parameter vector must have length p+q");
    // tanh saturates to exactly +/-1 in f64 around |a| ~ 19; keep the
    // partial autocorrelations strictly inside the open interval
    const PACF_MAX: f64 = 1.0 - 1e-8;
    let squash = |a: &f64| a.tanh().clamp(-PACF_MAX, PACF_MAX);
    let pacf_ar: Vec<f64> = raw[..p].iter().map(squash).collect();
    let pacf_ma: Vec<f64> = raw[p..].iter().map(squash).collect();
    let ar = pacf_to_coeffs(&pacf_ar);
    // 1 + sum(theta z^i) = 1 - sum((-theta) z^i): negate a stationary
    // coefficient vector to land in the invertible region.
    let ma: Vec<f64> = pacf_to_coeffs(&pacf_ma).iter().map(|c| -c).collect();
    (ar, ma)
}
