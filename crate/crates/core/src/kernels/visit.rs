//! Visiting distributions: random displacements whose spread is set by the
//! current temperature.

use rand_distr::{ChiSquared, Distribution};

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub trait Visitor: Send {
    fn displacement(&mut self, temperature: f64, dims: usize, rng: &mut RngStream)
        -> Result<Vec<f64>>;
}

/// Independent Cauchy draws with location 0 and scale `t_gen`.
pub fn cauchy_visit(t_gen: f64, dims: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(t_gen > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Cauchy scale must be positive, got {t_gen}"
        )));
    }
    Ok((0..dims)
        .map(|_| t_gen * (std::f64::consts::PI * (rng.uniform() - 0.5)).tan())
        .collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CauchyVisitor;

impl Visitor for CauchyVisitor {
    fn displacement(&mut self, temperature: f64, dims: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
        cauchy_visit(temperature, dims, rng)
    }
}

/// Shape parameters of the generalized (Tsallis) kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsaParams {
    pub q_v: f64,
    pub q_a: f64,
    pub dims: usize,
    /// Inverse temperature.
    pub beta: f64,
}

impl GsaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.q_v >= 1.0 && self.q_v < 3.0) {
            return Err(Error::InvalidParameter(format!(
                "q_v must lie in [1, 3), got {}",
                self.q_v
            )));
        }
        if !self.q_a.is_finite() {
            return Err(Error::InvalidParameter(format!("q_a must be finite, got {}", self.q_a)));
        }
        if self.dims == 0 {
            return Err(Error::InvalidParameter("dims must be >= 1".into()));
        }
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }
}

/// Sampler for the distorted Cauchy-Lorentz visiting density
///
/// ```text
/// g(dx) ∝ [1 + (q_v - 1) |dx|^2 / T^(2/(3-q_v))]^-(1/(q_v-1) + (D-1)/2)
/// ```
///
/// This is a D-variate Student-t with `nu = (3 - q_v)/(q_v - 1)` degrees of
/// freedom and scale `s = sqrt(T^(2/(3-q_v)) / (3 - q_v))`, drawn exactly as
/// `s * z / sqrt(w / nu)` with `z ~ N(0, I_D)` and `w ~ chi^2(nu)`. At
/// `q_v = 2` it is a Cauchy with scale `T`.
#[derive(Debug, Clone)]
pub struct GsaVisitor {
    q_v: f64,
    nu: f64,
    chi2: ChiSquared<f64>,
}

impl GsaVisitor {
    pub fn new(q_v: f64) -> Result<Self> {
        if !(q_v > 1.0 && q_v < 3.0) {
            return Err(Error::InvalidParameter(format!(
                "GSA visiting needs 1 < q_v < 3, got {q_v}"
            )));
        }
        let nu = (3.0 - q_v) / (q_v - 1.0);
        let chi2 = ChiSquared::new(nu)
            .map_err(|e| Error::InvalidParameter(format!("chi-square({nu}): {e}")))?;
        Ok(Self { q_v, nu, chi2 })
    }

    pub fn q_v(&self) -> f64 {
        self.q_v
    }

    /// Degrees of freedom of the equivalent Student-t.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn scale(&self, temperature: f64) -> f64 {
        let e = 3.0 - self.q_v;
        (temperature.powf(2.0 / e) / e).sqrt()
    }

    pub fn sample(&self, temperature: f64, dims: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
        if !(temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "visiting temperature must be positive, got {temperature}"
            )));
        }
        if dims == 0 {
            return Err(Error::InvalidParameter("dims must be >= 1".into()));
        }
        let s = self.scale(temperature);
        let mut out: Vec<f64> = (0..dims).map(|_| rng.normal()).collect();
        let w = loop {
            let w = self.chi2.sample(rng);
            // tiny nu can underflow the chi-square draw
            if w > 0.0 {
                break w;
            }
        };
        let factor = s / (w / self.nu).sqrt();
        out.iter_mut().for_each(|x| *x *= factor);
        Ok(out)
    }
}

impl Visitor for GsaVisitor {
    fn displacement(&mut self, temperature: f64, dims: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
        self.sample(temperature, dims, rng)
    }
}

/// One draw from the generalized visiting distribution.
pub fn gsa_visit(t_qv: f64, q_v: f64, dims: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    GsaVisitor::new(q_v)?.sample(t_qv, dims, rng)
}
