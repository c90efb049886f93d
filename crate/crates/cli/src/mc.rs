//! Monte-Carlo oracle for the interval-count second moment, independent of
//! the exact kernel-integral path.

use rand::Rng;
use rand_chacha::ChaCha20Rng;

/// Estimate `E_{x,a} (sum_k I_[a,a+z]({n_k x}) - Nz)^2` by uniform sampling
/// of `(x, a)`.
pub fn theorem4_mc(terms: &[u64], z: f64, samples: u64, rng: &mut ChaCha20Rng) -> f64 {
    let n = terms.len() as f64;
    let mut acc = 0.0f64;
    for _ in 0..samples {
        let x: f64 = rng.gen();
        let a: f64 = rng.gen();
        let mut count = 0.0;
        for &nk in terms {
            let t = (nk as f64 * x).fract();
            let rel = (t - a).rem_euclid(1.0);
            if rel <= z {
                count += 1.0;
            }
        }
        let dev = count - n * z;
        acc += dev * dev;
    }
    acc / samples as f64
}

/// Same estimator with the arc position held fixed; oracle for the pointwise
/// integral.
pub fn theorem4_pointwise_mc(
    terms: &[u64],
    z: f64,
    a: f64,
    samples: u64,
    rng: &mut ChaCha20Rng,
) -> f64 {
    let n = terms.len() as f64;
    let mut acc = 0.0f64;
    for _ in 0..samples {
        let x: f64 = rng.gen();
        let mut count = 0.0;
        for &nk in terms {
            let t = (nk as f64 * x).fract();
            let rel = (t - a).rem_euclid(1.0);
            if rel <= z {
                count += 1.0;
            }
        }
        let dev = count - n * z;
        acc += dev * dev;
    }
    acc / samples as f64
}
