use crate::rng::RngStream;

/// Source of scalar step sizes.
pub trait MoveClass: Send {
    fn step(&mut self, rng: &mut RngStream) -> f64;
}

/// Standard normal step.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoltzmannMove;

impl MoveClass for BoltzmannMove {
    #[inline]
    fn step(&mut self, rng: &mut RngStream) -> f64 {
        rng.normal()
    }
}

#[inline]
pub fn boltzmann_move(rng: &mut RngStream) -> f64 {
    rng.normal()
}

impl<F: FnMut(&mut RngStream) -> f64 + Send> MoveClass for F {
    fn step(&mut self, rng: &mut RngStream) -> f64 {
        self(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_normal_steps() {
        let mut rng = RngStream::new(2024);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| boltzmann_move(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // sd(mean) ~ 0.0032, sd(var) ~ 0.0045
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((0.98..=1.02).contains(&var), "var {var}");
    }

    #[test]
    fn reproducible_first_draw() {
        let a = BoltzmannMove.step(&mut RngStream::new(5));
        let b = BoltzmannMove.step(&mut RngStream::new(5));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
