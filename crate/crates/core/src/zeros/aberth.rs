//! Double-precision Aberth–Ehrlich iteration with Jacobi sweeps.

use num_complex::Complex64;

use crate::par::{self, Execution};

/// Dense real coefficients, constant term first, nonzero at both ends.
pub(crate) struct F64Poly {
    c: Vec<f64>,
}

impl F64Poly {
    pub fn new(c: Vec<f64>) -> Self {
        debug_assert!(c.len() >= 2 && c[0] != 0.0 && *c.last().unwrap() != 0.0);
        F64Poly { c }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// p'(z) / p(z), through the reversed polynomial when |z| > 1.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let n = self.degree() as f64;
        if z.norm_sqr() <= 1.0 {
            let (p, dp) = horner(self.c.iter().rev(), z);
            dp / p
        } else {
            let w = z.inv();
            let (r, dr) = horner(self.c.iter(), w);
            w * (n - w * dr / r)
        }
    }
}

fn horner<'a>(coeffs: impl Iterator<Item = &'a f64>, z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Relative correction below which an approximation stops moving; the
/// multiprecision polish takes it from there.
const FREEZE: f64 = 1e-11;

pub(crate) struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub converged: Vec<bool>,
}

/// Initial points on |z| = radius, slightly rotated so none sits on the real
/// axis and conjugate pairs are not forced.
pub(crate) fn initial_guesses(n: usize, radius: f64) -> Vec<Complex64> {
    let tau = std::f64::consts::TAU;
    (0..n)
        .map(|k| {
            let jitter = 0.4 + 0.1 * ((k as f64) * 0.618_033_988_749_895).fract();
            Complex64::from_polar(radius, tau * (k as f64 + jitter) / n as f64)
        })
        .collect()
}

pub(crate) fn solve(p: &F64Poly, start: Vec<Complex64>, max_sweeps: usize, exec: Execution) -> AberthOutcome {
    let n = start.len();
    let mut z = start;
    let mut converged = vec![false; n];
    for _ in 0..max_sweeps {
        let current = &z;
        let done = &converged;
        let step: Vec<(Complex64, bool)> = par::map_range(exec, n, |k| {
            if done[k] {
                return (current[k], true);
            }
            let zk = current[k];
            let ratio = p.log_derivative(zk);
            if !ratio.is_finite() || ratio.norm_sqr() == 0.0 {
                return (zk, ratio.is_finite());
            }
            let newton = ratio.inv();
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in current.iter().enumerate() {
                if j != k {
                    s += (zk - zj).inv();
                }
            }
            let delta = newton / (1.0 - newton * s);
            let next = zk - delta;
            let small = delta.norm() <= FREEZE * next.norm().max(f64::MIN_POSITIVE);
            (if next.is_finite() { next } else { zk }, small)
        });
        let mut all = true;
        for (k, (v, ok)) in step.into_iter().enumerate() {
            z[k] = v;
            converged[k] = ok;
            all &= ok;
        }
        if all {
            break;
        }
    }
    AberthOutcome { roots: z, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic() {
        let p = F64Poly::new(vec![1.0, 1.0, 0.0, 1.0]);
        let out = solve(&p, initial_guesses(3, 1.0), 200, Execution::Sequential);
        assert!(out.converged.iter().all(|&c| c));
        let mut re: Vec<f64> = out.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 0.6823278038280193).abs() < 1e-12);
        assert!((re[1] - 0.3411639019140096).abs() < 1e-12);
    }

    #[test]
    fn reversed_branch_matches_direct() {
        let p = F64Poly::new(vec![2.0, -1.0, 0.5, 3.0]);
        let z = Complex64::new(1.5, -0.7);
        let direct = {
            let (v, d) = horner(p.c.iter().rev(), z);
            d / v
        };
        assert!((p.log_derivative(z) - direct).norm() < 1e-12);
    }
}
