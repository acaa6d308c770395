//! Nelder-Mead simplex minimizer used by the ARIMA fitter.
//!
//! Derivative-free; robust near the stationarity boundary where the
//! reparameterized likelihood flattens out. Objectives may return
//! non-finite values, which are treated as worse than any finite value.

/// Result of one Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Standard Nelder-Mead with reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5. Converges when the function spread over the simplex drops
/// below `tol` (absolute + relative).
pub fn nelder_mead<F>(mut f: F, x0: &[f64], steps: &[f64], tol: f64, max_iter: usize) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(steps.len(), dim);
    if dim == 0 {
        let fx = f(x0);
        return NmResult { x: x0.to_vec(), fx, iterations: 0, converged: true };
    }

    let clean = |v: f64| if v.is_finite() { v } else { f64::INFINITY };

    // initial simplex: x0 plus one step per coordinate
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| clean(f(v))).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;

        // order: best first, worst last
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap());
        let best = idx[0];
        let worst = idx[dim];
        let second_worst = idx[dim - 1];

        let spread = fvals[worst] - fvals[best];
        if spread.is_finite() && spread <= tol * (1.0 + fvals[best].abs()) {
            converged = true;
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; dim];
        for (k, v) in simplex.iter().enumerate() {
            if k == worst {
                continue;
            }
            for (c, &vi) in centroid.iter_mut().zip(v) {
                *c += vi;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |a: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(&c, &w)| c + a * (c - w))
                .collect()
        };

        let xr = blend(1.0);
        let fr = clean(f(&xr));

        if fr < fvals[best] {
            let xe = blend(2.0);
            let fe = clean(f(&xe));
            if fe < fr {
                simplex[worst] = xe;
                fvals[worst] = fe;
            } else {
                simplex[worst] = xr;
                fvals[worst] = fr;
            }
        } else if fr < fvals[second_worst] {
            simplex[worst] = xr;
            fvals[worst] = fr;
        } else {
            // contraction: outside if reflection improved on worst, else inside
            let (xc, fc) = if fr < fvals[worst] {
                let xc = blend(0.5);
                let fc = clean(f(&xc));
                (xc, fc)
            } else {
                let xc = blend(-0.5);
                let fc = clean(f(&xc));
                (xc, fc)
            };
            if fc < fvals[worst].min(fr) {
                simplex[worst] = xc;
                fvals[worst] = fc;
            } else {
                // shrink toward best
                let xb = simplex[best].clone();
                for (k, v) in simplex.iter_mut().enumerate() {
                    if k == best {
                        continue;
                    }
                    for (vi, &bi) in v.iter_mut().zip(&xb) {
                        *vi = bi + 0.5 * (*vi - bi);
                    }
                    fvals[k] = clean(f(v));
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..=dim {
        if fvals[k] < fvals[best] {
            best = k;
        }
    }
    NmResult {
        x: simplex[best].clone(),
        fx: fvals[best],
        iterations,
        converged,
    }
}
