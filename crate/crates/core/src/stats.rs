//! Kolmogorov-Smirnov goodness-of-fit tests.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Supremum distance between the two distribution functions.
    pub statistic: f64,
    pub p_value: f64,
}

/// Asymptotic Kolmogorov survival function `Q(l) = 2 sum (-1)^(j-1) exp(-2 j^2 l^2)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value for statistic `d` at effective sample size `ne`, with Stephens'
/// small-sample correction.
fn ks_p_value(d: f64, ne: f64) -> f64 {
    let s = ne.sqrt();
    kolmogorov_survival((s + 0.12 + 0.11 / s) * d)
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample test of whether `a` and `b` share a distribution.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    KsResult {
        statistic: d,
        p_value: ks_p_value(d, na * nb / (na + nb)),
    }
}

/// One-sample test of `x` against the continuous CDF `cdf`.
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    let x = sorted(x);
    let n = x.len() as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let f = cdf(xi);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    KsResult {
        statistic: d,
        p_value: ks_p_value(d, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn survival_reference_values() {
        // Q(1) = 0.27, Q(1.36) ~ 0.049, Q(1.63) ~ 0.0098
        assert!((kolmogorov_survival(1.0) - 0.26999967).abs() < 1e-6);
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 5e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = [3.0, 1.0, 2.0];
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_samples_have_unit_distance() {
        let r = ks_two_sample(&[0.0, 1.0, 2.0], &[10.0, 11.0]);
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn uniform_against_its_cdf() {
        let mut rng = RngStream::new(12);
        let x: Vec<f64> = (0..50_000).map(|_| rng.uniform()).collect();
        let ok = ks_one_sample(&x, |v| v.clamp(0.0, 1.0));
        assert!(ok.p_value > 0.01, "{ok:?}");
        let shifted = ks_one_sample(&x, |v| (v - 0.02).clamp(0.0, 1.0));
        assert!(shifted.p_value < 1e-6, "{shifted:?}");
    }
}
