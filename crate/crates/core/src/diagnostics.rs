//! Multi-chain convergence diagnostics.

use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};

/// Minimum sequence length accepted by [`effective_sample_size`].
pub const ESS_MIN_LEN: usize = 10;

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_variance(x: &[f64], m: f64) -> f64 {
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

/// Potential scale reduction `sqrt(((n-1)/n W + B/n) / W)` over `m >= 2`
/// chains of equal length `n >= 2`, where `W` is the mean within-chain
/// variance and `B = n * var(chain means)`.
pub fn gelman_rubin<S: AsRef<[f64]>>(chains: &[S]) -> Result<f64> {
    let m = chains.len();
    if m < 2 {
        return Err(Error::TooShort { len: m, min: 2 });
    }
    let n = chains[0].as_ref().len();
    if n < 2 {
        return Err(Error::TooShort { len: n, min: 2 });
    }
    if let Some(bad) = chains.iter().map(|c| c.as_ref().len()).find(|&l| l != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad });
    }
    let means: Vec<f64> = chains.iter().map(|c| mean(c.as_ref())).collect();
    let w = chains
        .iter()
        .zip(&means)
        .map(|(c, &mu)| sample_variance(c.as_ref(), mu))
        .sum::<f64>()
        / m as f64;
    if !(w > 0.0) {
        return Err(Error::DegenerateChains);
    }
    let nf = n as f64;
    let b = nf * sample_variance(&means, mean(&means));
    let var_plus = (nf - 1.0) / nf * w + b / nf;
    Ok((var_plus / w).sqrt())
}

/// [`gelman_rubin`] per coordinate of vector-valued chains, reduced by max.
/// `chains[c][t]` is the state of chain `c` at step `t`.
pub fn gelman_rubin_vector(chains: &[Vec<Vec<f64>>]) -> Result<f64> {
    let dims = chains
        .first()
        .and_then(|c| c.first())
        .map(Vec::len)
        .ok_or(Error::EmptyStates)?;
    let mut worst = f64::NEG_INFINITY;
    for j in 0..dims {
        let coord: Vec<Vec<f64>> = chains
            .iter()
            .map(|c| c.iter().map(|s| s[j]).collect())
            .collect();
        worst = worst.max(gelman_rubin(&coord)?);
    }
    Ok(worst)
}

/// Normalized autocorrelation at lags `0..n`, via zero-padded FFT.
pub fn autocorrelation(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mu = mean(x);
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .map(|v| Complex::new(v - mu, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(len)
        .collect();
    fwd.process(&mut buf);
    buf.iter_mut().for_each(|c| *c = Complex::new(c.norm_sqr(), 0.0));
    inv.process(&mut buf);
    let c0 = buf[0].re;
    if c0 <= 0.0 {
        return vec![1.0; n];
    }
    buf[..n].iter().map(|c| c.re / c0).collect()
}

/// `n / tau` with `tau = -1 + 2 * sum(Gamma_m)`, summing paired
/// autocorrelations `Gamma_m = rho_{2m} + rho_{2m+1}` while they stay
/// positive and forcing them monotone (Geyer's initial monotone sequence).
/// The result is clamped to `(0, n]`.
pub fn effective_sample_size(x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < ESS_MIN_LEN {
        return Err(Error::TooShort { len: n, min: ESS_MIN_LEN });
    }
    let rho = autocorrelation(x);
    let mut tau = -1.0;
    let mut prev = f64::INFINITY;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = rho[2 * m] + rho[2 * m + 1];
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        tau += 2.0 * pair;
        prev = pair;
        m += 1;
    }
    let nf = n as f64;
    if !(tau > 0.0) {
        return Ok(nf);
    }
    Ok((nf / tau).min(nf))
}
