//! Exact Gaussian ARMA log-likelihood via Kalman filtering.
//!
//! State-space form: state dimension r = max(p, q+1), companion transition
//! matrix T (first column holds the AR coefficients, superdiagonal of
//! ones), noise loading R = (1, theta_1, ..., theta_q, 0, ...), and the
//! observation picks the first state element. The initial state covariance
//! is the exact unconditional covariance, obtained from the discrete
//! Lyapunov equation P = T P T' + R R'.

use nalgebra::{Complex, DMatrix};

type Complex64 = Complex<f64>;

use super::ArimaError;

const LN_2PI: f64 = 1.837877066409345483560659472811235279723;

/// Smallest modulus among the roots of 1 - c1*z - ... - cp*z^p, via a
/// bounded Durand-Kerner iteration. Returns +inf for the empty or
/// identically-constant polynomial.
pub(crate) fn min_root_modulus(coeffs: &[f64]) -> f64 {
    // trailing zero coefficients drop the degree (roots at infinity)
    let p = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    if p == 0 {
        return f64::INFINITY;
    }
    // monic form z^p + b_{p-1} z^{p-1} + ... + b_0 with b_i = -c'_i / c'_p
    // where c'_0 = -1, c'_i = c_i
    let lead = -coeffs[p - 1];
    let mut b: Vec<Complex64> = Vec::with_capacity(p);
    b.push(Complex64::new(1.0 / lead, 0.0));
    for &c in &coeffs[..p - 1] {
        b.push(Complex64::new(-c / lead, 0.0));
    }

    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for bi in b.iter().rev() {
            acc = acc * z + bi;
        }
        acc
    };

    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..p).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut delta = 0.0f64;
        for i in 0..p {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..p {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min)
}

/// Checks that 1 - sum(ar_i z^i) has all roots strictly outside the unit
/// circle, via the inverse Durbin-Levinson map: the polynomial is
/// stationary iff every implied partial autocorrelation lies in (-1, 1).
pub(crate) fn is_stationary(ar: &[f64]) -> bool {
    let mut a = ar.to_vec();
    for k in (1..=a.len()).rev() {
        let r = a[k - 1];
        if !(r.abs() < 1.0) {
            return false; // also rejects NaN
        }
        if k > 1 {
            let denom = 1.0 - r * r;
            let prev: Vec<f64> = (0..k - 1).map(|j| (a[j] + r * a[k - 2 - j]) / denom).collect();
            a[..k - 1].copy_from_slice(&prev);
        }
    }
    true
}

/// Checks that 1 + sum(ma_i z^i) has all roots strictly outside the unit
/// circle.
pub(crate) fn is_invertible(ma: &[f64]) -> bool {
    let neg: Vec<f64> = ma.iter().map(|c| -c).collect();
    is_stationary(&neg)
}

struct StateSpace {
    r: usize,
    /// transition, row-major r*r
    t: Vec<f64>,
    /// noise loading, length r
    load: Vec<f64>,
}

impl StateSpace {
    fn new(ar: &[f64], ma: &[f64]) -> Self {
        let p = ar.len();
        let q = ma.len();
        let r = p.max(q + 1).max(1);
        let mut t = vec![0.0; r * r];
        for (i, &a) in ar.iter().enumerate() {
            t[i * r] = a;
        }
        for i in 0..r.saturating_sub(1) {
            t[i * r + i + 1] = 1.0;
        }
        let mut load = vec![0.0; r];
        load[0] = 1.0;
        for (j, &m) in ma.iter().enumerate() {
            load[j + 1] = m;
        }
        Self { r, t, load }
    }

    /// Unconditional state covariance with unit innovation variance:
    /// solves vec(P) = (I - T (x) T)^{-1} vec(R R').
    fn unconditional_cov(&self) -> Result<Vec<f64>, ArimaError> {
        let r = self.r;
        let t = DMatrix::from_fn(r, r, |i, j| self.t[i * r + j]);
        let kron = t.kronecker(&t);
        let a = DMatrix::identity(r * r, r * r) - kron;
        let rrt = DMatrix::from_fn(r, r, |i, j| self.load[i] * self.load[j]);
        // column-stacked vec; rrt is symmetric so stacking order is moot
        let b = DMatrix::from_fn(r * r, 1, |k, _| rrt[(k % r, k / r)]);
        let lu = a.lu();
        let sol = lu.solve(&b).ok_or(ArimaError::NonStationaryParams)?;
        let mut p0 = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                p0[i * r + j] = sol[(j * r + i, 0)];
            }
        }
        if p0.iter().any(|v| !v.is_finite()) {
            return Err(ArimaError::NonStationaryParams);
        }
        Ok(p0)
    }
}

/// Filter pass with unit innovation variance. Returns
/// (sum of ln f_t, sum of v_t^2 / f_t).
pub(crate) fn kalman_sums(ar: &[f64], ma: &[f64], z: &[f64]) -> Result<(f64, f64), ArimaError> {
    let ss = StateSpace::new(ar, ma);
    let r = ss.r;
    let mut p = ss.unconditional_cov()?;
    let mut x = vec![0.0; r];

    let mut sum_ln_f = 0.0;
    let mut sum_v2f = 0.0;

    let mut gain = vec![0.0; r];
    let mut xu = vec![0.0; r];
    let mut pu = vec![0.0; r * r];
    let mut tmp = vec![0.0; r * r];
    let mut p_next = vec![0.0; r * r];
    // once the covariance recursion reaches its fixed point, f and the
    // gain stop changing and the P update can be skipped
    let mut steady = false;
    let mut f = 0.0;

    for &obs in z {
        if !steady {
            f = p[0];
            if !(f.is_finite() && f > 0.0) {
                return Err(ArimaError::NumericalBreakdown);
            }
            for i in 0..r {
                gain[i] = p[i * r] / f;
            }
        }
        let v = obs - x[0];
        sum_ln_f += f.ln();
        sum_v2f += v * v / f;

        // state update + predict: x <- T (x + K v)
        for i in 0..r {
            xu[i] = x[i] + gain[i] * v;
        }
        for i in 0..r {
            let mut acc = ss.t[i * r] * xu[0];
            if i + 1 < r {
                acc += xu[i + 1];
            }
            x[i] = acc;
        }

        if steady {
            continue;
        }

        // covariance update: Pu = P - K P[0,:], then P <- T Pu T' + RR'
        for i in 0..r {
            for j in 0..r {
                pu[i * r + j] = p[i * r + j] - gain[i] * p[j];
            }
        }
        // tmp = T Pu ; exploit companion structure: row i of T is
        // (ar_i, e_{i+1})
        for i in 0..r {
            for j in 0..r {
                let mut acc = ss.t[i * r] * pu[j];
                if i + 1 < r {
                    acc += pu[(i + 1) * r + j];
                }
                tmp[i * r + j] = acc;
            }
        }
        // p_next = tmp T' + RR'
        for i in 0..r {
            for j in 0..r {
                let mut acc = tmp[i * r] * ss.t[j * r];
                if j + 1 < r {
                    acc += tmp[i * r + j + 1];
                }
                p_next[i * r + j] = acc + ss.load[i] * ss.load[j];
            }
        }
        let delta = p
            .iter()
            .zip(&p_next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        p.copy_from_slice(&p_next);
        if delta < 1e-13 {
            steady = true;
            f = p[0];
            if !(f.is_finite() && f > 0.0) {
                return Err(ArimaError::NumericalBreakdown);
            }
            for i in 0..r {
                gain[i] = p[i * r] / f;
            }
        }
    }
    Ok((sum_ln_f, sum_v2f))
}

/// Exact Gaussian log-likelihood of `z` under a stationary/invertible
/// ARMA(p,q) with innovation variance `sigma2`.
pub fn kalman_loglik(z: &[f64], ar: &[f64], ma: &[f64], sigma2: f64) -> Result<f64, ArimaError> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(ArimaError::NumericalBreakdown);
    }
    if !is_stationary(ar) || !is_invertible(ma) {
        return Err(ArimaError::NonStationaryParams);
    }
    let n = z.len() as f64;
    let (sum_ln_f, sum_v2f) = kalman_sums(ar, ma, z)?;
    Ok(-0.5 * (n * (LN_2PI + sigma2.ln()) + sum_ln_f + sum_v2f / sigma2))
}

/// Profile log-likelihood pieces with sigma2 concentrated out:
/// sigma2_hat = mean(v^2/f), loglik = -n/2 (ln 2pi + 1 + ln sigma2_hat)
/// - 1/2 sum ln f.
pub(crate) fn concentrated_loglik(
    ar: &[f64],
    ma: &[f64],
    z: &[f64],
) -> Result<(f64, f64), ArimaError> {
    let n = z.len() as f64;
    let (sum_ln_f, sum_v2f) = kalman_sums(ar, ma, z)?;
    let sigma2 = sum_v2f / n;
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(ArimaError::NumericalBreakdown);
    }
    let loglik = -0.5 * (n * (LN_2PI + 1.0 + sigma2.ln()) + sum_ln_f);
    Ok((loglik, sigma2))
}
