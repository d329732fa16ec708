//! Candidate generators. All of them resample until the candidate passes the
//! bounds check; none clip.

use serde::{Deserialize, Serialize};

use super::moves::{BoltzmannMove, MoveClass};
use super::visit::{CauchyVisitor, GsaVisitor, Visitor};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Resample cap before a neighborhood gives up.
pub const MAX_RESAMPLES: usize = 1000;

pub trait Neighborhood: Send {
    /// Write a feasible candidate near `cur` into `out`.
    fn propose(
        &mut self,
        bounds: &Bounds,
        cur: &[f64],
        temperature: f64,
        rng: &mut RngStream,
        out: &mut Vec<f64>,
    ) -> Result<()>;

    fn name(&self) -> &'static str;
}

/// The projected-normal neighborhood: draw a uniform point `u` in the box,
/// project `cur` onto it, and walk a normal step along the unit projection.
///
/// The candidate lies on the line through the origin and `u`; `cur` only
/// contributes the sign of the projection.
#[derive(Debug, Clone, Default)]
pub struct NormalProjected<M = BoltzmannMove> {
    mover: M,
}

impl<M: MoveClass> NormalProjected<M> {
    pub fn new(mover: M) -> Self {
        Self { mover }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn projected_into<M: MoveClass>(
    bounds: &Bounds,
    cur: &[f64],
    mover: &mut M,
    rng: &mut RngStream,
    out: &mut Vec<f64>,
) -> Result<()> {
    for _ in 0..MAX_RESAMPLES {
        bounds.sample_into(rng, out);
        let scale = dot(cur, out) / dot(out, out);
        out.iter_mut().for_each(|x| *x *= scale);
        let norm = dot(out, out).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            // cur orthogonal to the draw: the direction is undefined
            continue;
        }
        let step = mover.step(rng);
        out.iter_mut().for_each(|x| *x = *x / norm * step);
        if bounds.contains(out) {
            return Ok(());
        }
    }
    Err(Error::NeighborhoodExhausted {
        attempts: MAX_RESAMPLES,
    })
}

pub fn boltzmann_neighbor<M: MoveClass>(
    bounds: &Bounds,
    cur: &[f64],
    mover: &mut M,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    bounds.check(cur)?;
    let mut out = Vec::with_capacity(bounds.dims());
    projected_into(bounds, cur, mover, rng, &mut out)?;
    Ok(out)
}

impl<M: MoveClass> Neighborhood for NormalProjected<M> {
    fn propose(
        &mut self,
        bounds: &Bounds,
        cur: &[f64],
        _temperature: f64,
        rng: &mut RngStream,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        projected_into(bounds, cur, &mut self.mover, rng, out)
    }

    fn name(&self) -> &'static str {
        "normal_projected"
    }
}

/// `cur + displacement`, with the displacement drawn from a [`Visitor`] at the
/// current temperature.
#[derive(Debug, Clone)]
pub struct DisplacementNeighbor<V> {
    visitor: V,
    name: &'static str,
}

impl<V: Visitor> DisplacementNeighbor<V> {
    pub fn new(visitor: V, name: &'static str) -> Self {
        Self { visitor, name }
    }
}

impl DisplacementNeighbor<CauchyVisitor> {
    pub fn cauchy() -> Self {
        Self::new(CauchyVisitor, "cauchy")
    }
}

impl DisplacementNeighbor<GsaVisitor> {
    pub fn gsa(q_v: f64) -> Result<Self> {
        Ok(Self::new(GsaVisitor::new(q_v)?, "gsa"))
    }
}

impl<V: Visitor> Neighborhood for DisplacementNeighbor<V> {
    fn propose(
        &mut self,
        bounds: &Bounds,
        cur: &[f64],
        temperature: f64,
        rng: &mut RngStream,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        for _ in 0..MAX_RESAMPLES {
            let dx = self.visitor.displacement(temperature, cur.len(), rng)?;
            out.clear();
            out.extend(cur.iter().zip(&dx).map(|(c, d)| c + d));
            if bounds.contains(out) {
                return Ok(());
            }
        }
        Err(Error::NeighborhoodExhausted {
            attempts: MAX_RESAMPLES,
        })
    }

    fn name(&self) -> &'static str {
        self.name
    }
}

/// Registry of neighborhood kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VisitorKind {
    NormalProjected,
    Cauchy,
    Gsa,
}

impl VisitorKind {
    pub const ALL: [VisitorKind; 3] = [VisitorKind::NormalProjected, VisitorKind::Cauchy, VisitorKind::Gsa];

    pub fn name(self) -> &'static str {
        match self {
            VisitorKind::NormalProjected => "normal_projected",
            VisitorKind::Cauchy => "cauchy",
            VisitorKind::Gsa => "gsa",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "visitor",
                name: name.to_string(),
            })
    }

    /// `q_v` is only read by the GSA kernel.
    pub fn build(self, q_v: f64) -> Result<Box<dyn Neighborhood>> {
        Ok(match self {
            VisitorKind::NormalProjected => Box::new(NormalProjected::<BoltzmannMove>::default()),
            VisitorKind::Cauchy => Box::new(DisplacementNeighbor::cauchy()),
            VisitorKind::Gsa => Box::new(DisplacementNeighbor::gsa(q_v)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box5() -> Bounds {
        Bounds::uniform(2, -5.0, 5.0).unwrap()
    }

    #[test]
    fn candidates_are_feasible() {
        let b = box5();
        let mut rng = RngStream::new(8);
        let mut cur = vec![-2.0, -2.0];
        let mut mover = BoltzmannMove;
        for _ in 0..10_000 {
            let next = boltzmann_neighbor(&b, &cur, &mut mover, &mut rng).unwrap();
            assert!(b.check(&next).is_ok());
            cur = next;
        }
    }

    #[test]
    fn zero_step_gives_origin() {
        let mut zero = |_: &mut RngStream| 0.0;
        let c = boltzmann_neighbor(&box5(), &[1.0, 2.0], &mut zero, &mut RngStream::new(1)).unwrap();
        assert_eq!(c, vec![0.0, 0.0]);
    }

    #[test]
    fn direction_follows_the_projection() {
        let b = box5();
        let cur = [1.5, -0.7];
        for seed in 0..200 {
            let mut rng = RngStream::new(seed);
            let mut replay = rng.clone();
            let cand = boltzmann_neighbor(&b, &cur, &mut BoltzmannMove, &mut rng).unwrap();
            // replay the draws: uniform point first, then the step
            let u = b.sample(&mut replay);
            let s = dot(&cur, &u) / dot(&u, &u);
            let proj: Vec<f64> = u.iter().map(|x| x * s).collect();
            let pn = dot(&proj, &proj).sqrt();
            let cn = dot(&cand, &cand).sqrt();
            if cn == 0.0 {
                continue;
            }
            let cos = dot(&proj, &cand) / (pn * cn);
            assert!((cos.abs() - 1.0).abs() < 1e-12, "seed {seed}: cos {cos}");
        }
    }

    #[test]
    fn origin_current_exhausts() {
        let r = boltzmann_neighbor(&box5(), &[0.0, 0.0], &mut BoltzmannMove, &mut RngStream::new(0));
        assert!(matches!(r, Err(Error::NeighborhoodExhausted { attempts: MAX_RESAMPLES })));
    }

    #[test]
    fn displacement_candidates_are_feasible() {
        let b = box5();
        let mut rng = RngStream::new(4);
        let mut out = Vec::new();
        for kind in [VisitorKind::Cauchy, VisitorKind::Gsa] {
            let mut n = kind.build(1.7).unwrap();
            let mut cur = vec![4.9, -4.9];
            for _ in 0..10_000 {
                n.propose(&b, &cur, 3.0, &mut rng, &mut out).unwrap();
                assert!(b.check(&out).is_ok());
                cur.clone_from(&out);
            }
        }
    }

    #[test]
    fn visitor_registry() {
        for k in VisitorKind::ALL {
            assert_eq!(VisitorKind::from_name(k.name()).unwrap(), k);
            assert_eq!(k.build(2.0).unwrap().name(), k.name());
        }
        assert!(VisitorKind::from_name("levy").is_err());
        assert!(VisitorKind::Gsa.build(1.0).is_err());
    }
}
