//! Test oracles that do not share code with the samplers they check.

#![allow(dead_code)]

use anneal_core::bounds::Bounds;
use anneal_core::objectives::FnObjective;
use anneal_core::ObjectiveSpec;

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// CDF of the one-dimensional visiting density
/// `[1 + (q_v - 1) x^2 / T^(2/(3-q_v))]^(-1/(q_v-1))`, normalized and
/// integrated numerically in `s = ln|x|`.
pub struct VisitCdf {
    q_v: f64,
    a: f64,
    s_lo: f64,
    h: f64,
    cum: Vec<f64>,
    total: f64,
}

impl VisitCdf {
    pub fn new(q_v: f64, temperature: f64) -> Self {
        assert!(q_v > 1.0 && q_v < 3.0);
        let a = temperature.powf(2.0 / (3.0 - q_v));
        let centre = 0.5 * a.ln();
        let s_lo = centre - 40.0;
        let s_hi = centre + 200.0;
        let h = 0.02;
        let cells = ((s_hi - s_lo) / h).ceil() as usize;
        let mut this = Self {
            q_v,
            a,
            s_lo,
            h,
            cum: Vec::with_capacity(cells + 1),
            total: 0.0,
        };
        // mass on [0, e^s_lo], where the density is flat at 1
        let mut acc = s_lo.exp();
        this.cum.push(acc);
        for k in 0..cells {
            let lo = s_lo + k as f64 * h;
            acc += this.integrate(lo, lo + h);
            this.cum.push(acc);
        }
        this.total = acc;
        this
    }

    fn density(&self, x: f64) -> f64 {
        let u = (self.q_v - 1.0) * x * x / self.a;
        (-u.ln_1p() / (self.q_v - 1.0)).exp()
    }

    fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut sum = 0.0;
        for (n, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for s in [mid - half * n, mid + half * n] {
                let x = s.exp();
                sum += w * self.density(x) * x;
            }
        }
        sum * half
    }

    fn half_mass(&self, m: f64) -> f64 {
        if m <= 0.0 {
            return 0.0;
        }
        let s = m.ln();
        if s <= self.s_lo {
            return m;
        }
        let k = ((s - self.s_lo) / self.h).floor() as usize;
        if k >= self.cum.len() - 1 {
            return self.total;
        }
        self.cum[k] + self.integrate(self.s_lo + k as f64 * self.h, s)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let half = self.half_mass(x.abs()) / (2.0 * self.total);
        if x < 0.0 {
            0.5 - half
        } else {
            0.5 + half
        }
    }
}

/// `x^2 / 2` on `[-half_width, half_width]`.
pub fn half_square(half_width: f64) -> ObjectiveSpec {
    let b = Bounds::uniform(1, -half_width, half_width).unwrap();
    ObjectiveSpec::new(FnObjective::new("half_square", b, |x| 0.5 * x[0] * x[0])).unwrap()
}

pub fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}
