//! Seeded random streams and a derivative-free local ascent shared by the
//! randomized extremal searches.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent deterministic stream `stream` of the generator seeded by `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub(crate) fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>())
}

/// Random single-coordinate hill climbing on `x`, maximizing `objective`.
/// Only improving moves are accepted, so the returned value is at least the
/// starting value. The step scale adapts to the acceptance history.
pub(crate) fn hill_climb<F, R>(x: &mut [Complex64], objective: F, steps: usize, rng: &mut R) -> f64
where
    F: Fn(&[Complex64]) -> f64,
    R: Rng + ?Sized,
{
    let mut best = objective(x);
    if x.is_empty() || steps == 0 {
        return best;
    }
    let scale = (x.iter().map(|z| z.norm_sqr()).sum::<f64>() / x.len() as f64)
        .sqrt()
        .max(1e-12);
    // One step size per coordinate: a converged coordinate must not shrink
    // the steps of the others.
    let mut sigma = vec![0.3 * scale; x.len()];
    for _ in 0..steps {
        let i = rng.gen_range(0..x.len());
        let old = x[i];
        x[i] = old + complex_gaussian(rng) * sigma[i];
        let v = objective(x);
        if v > best {
            best = v;
            sigma[i] = (sigma[i] * 1.3).min(4.0 * scale);
        } else {
            x[i] = old;
            sigma[i] = (sigma[i] * 0.85).max(1e-6 * scale);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut r1 = stream_rng(7, 1);
        let mut r2 = stream_rng(7, 2);
        let a: u64 = r1.gen();
        assert_eq!(a, stream_rng(7, 1).gen::<u64>());
        assert_ne!(a, r2.gen::<u64>());
    }

    #[test]
    fn hill_climb_never_decreases() {
        let mut rng = stream_rng(1, 0);
        let mut x = vec![Complex64::new(0.2, 0.0), Complex64::new(-0.4, 0.1)];
        let f = |v: &[Complex64]| -(v[0] - 1.0).norm_sqr() - (v[1] + 2.0).norm_sqr();
        let start = f(&x);
        let best = hill_climb(&mut x, f, 400, &mut rng);
        assert!(best >= start);
        assert!(best > -1e-2);
        assert_eq!(best, f(&x));
    }
}
