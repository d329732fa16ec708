//! Objective functions.
//!
//! An [`Objective`] supplies the math and its box. [`ObjectiveSpec`] wraps one
//! with an invocation counter and dispatches between single-point and batch
//! evaluation from the length of the flattened input.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::types::EvalPoint;

/// Coordinate of the Styblinski-Tang minimum along every axis.
pub const STYBLINSKI_TANG_ARGMIN: f64 = -2.903534;
/// Styblinski-Tang minimum value per dimension.
pub const STYBLINSKI_TANG_MIN_PER_DIM: f64 = -39.16599;

pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &Bounds;

    /// Known analytic optimum, if any.
    fn global_min(&self) -> Option<&EvalPoint> {
        None
    }

    fn singlepoint(&self, pos: &[f64]) -> Result<f64>;

    /// Row-major batch of `flat.len() / dims` points.
    fn multipoint(&self, flat: &[f64]) -> Result<Vec<f64>> {
        flat.chunks_exact(self.bounds().dims())
            .map(|row| self.singlepoint(row))
            .collect()
    }
}

/// Result of [`ObjectiveSpec::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Single(f64),
    Batch(Vec<f64>),
}

impl Evaluation {
    pub fn single(self) -> Option<f64> {
        match self {
            Evaluation::Single(v) => Some(v),
            Evaluation::Batch(_) => None,
        }
    }

    pub fn batch(self) -> Vec<f64> {
        match self {
            Evaluation::Single(v) => vec![v],
            Evaluation::Batch(v) => v,
        }
    }
}

/// An objective plus its call counter.
///
/// The counter counts invocations, not points: a batch of 1000 rows adds one.
pub struct ObjectiveSpec {
    inner: Box<dyn Objective>,
    calls: AtomicU64,
}

impl ObjectiveSpec {
    pub fn new(objective: impl Objective + 'static) -> Result<Self> {
        Self::from_boxed(Box::new(objective))
    }

    pub fn from_boxed(inner: Box<dyn Objective>) -> Result<Self> {
        if let Some(gm) = inner.global_min() {
            inner.bounds().check(&gm.pos)?;
        }
        Ok(Self {
            inner,
            calls: AtomicU64::new(0),
        })
    }

    pub fn name(&self) -> &str {
        self.inner.name()
    }

    pub fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }

    pub fn dims(&self) -> usize {
        self.inner.bounds().dims()
    }

    pub fn global_min(&self) -> Option<&EvalPoint> {
        self.inner.global_min()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    /// Evaluate one point (`input.len() == dims`) or a row-major batch.
    pub fn evaluate(&self, input: &[f64]) -> Result<Evaluation> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let dims = self.dims();
        if input.len() == dims {
            self.inner.singlepoint(input).map(Evaluation::Single)
        } else if !input.is_empty() && input.len().is_multiple_of(dims) {
            self.inner.multipoint(input).map(Evaluation::Batch)
        } else {
            Err(Error::DimensionMismatch {
                expected: dims,
                got: input.len(),
            })
        }
    }

    /// Single-point evaluation; counts as one call.
    #[inline]
    pub fn value(&self, pos: &[f64]) -> Result<f64> {
        if pos.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: pos.len(),
            });
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.singlepoint(pos)
    }

    pub fn eval_point(&self, pos: Vec<f64>) -> Result<EvalPoint> {
        let val = self.value(&pos)?;
        Ok(EvalPoint { pos, val })
    }
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name())
            .field("dims", &self.dims())
            .field("calls", &self.calls())
            .finish()
    }
}

/// Styblinski-Tang in `d` dimensions on `[-5, 5]^d`.
#[derive(Debug, Clone)]
pub struct StyblinskiTang {
    name: String,
    bounds: Bounds,
    global_min: EvalPoint,
}

impl StyblinskiTang {
    pub fn new(dims: usize) -> Result<Self> {
        Self::with_bounds(Bounds::uniform(dims, -5.0, 5.0)?)
    }

    pub fn with_bounds(bounds: Bounds) -> Result<Self> {
        let dims = bounds.dims();
        Ok(Self {
            name: format!("StybTangNd({dims})"),
            global_min: EvalPoint {
                pos: vec![STYBLINSKI_TANG_ARGMIN; dims],
                val: STYBLINSKI_TANG_MIN_PER_DIM * dims as f64,
            },
            bounds,
        })
    }
}

/// `sum(x^4 - 16 x^2 + 5 x) / 2` without a bounds check.
#[inline]
pub fn styblinski_tang(pos: &[f64]) -> f64 {
    pos.iter()
        .map(|&x| {
            let x2 = x * x;
            x2 * x2 - 16.0 * x2 + 5.0 * x
        })
        .sum::<f64>()
        / 2.0
}

impl Objective for StyblinskiTang {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn global_min(&self) -> Option<&EvalPoint> {
        Some(&self.global_min)
    }

    #[inline]
    fn singlepoint(&self, pos: &[f64]) -> Result<f64> {
        self.bounds.check(pos)?;
        Ok(styblinski_tang(pos))
    }
}

/// `(a - x1)^2 + b (x2 - x1^2)^2` on `[-5, 5]^2`. Note `b` defaults to 5,
/// not the textbook 100.
#[derive(Debug, Clone)]
pub struct Rosenbrock2d {
    a: f64,
    b: f64,
    bounds: Bounds,
    global_min: Option<EvalPoint>,
}

impl Rosenbrock2d {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rosenbrock parameters must be finite, got a={a}, b={b}"
            )));
        }
        let bounds = Bounds::uniform(2, -5.0, 5.0)?;
        let argmin = vec![a, a * a];
        let global_min = bounds
            .contains(&argmin)
            .then(|| EvalPoint::new(argmin, 0.0));
        Ok(Self {
            a,
            b,
            bounds,
            global_min,
        })
    }
}

impl Default for Rosenbrock2d {
    fn default() -> Self {
        Self::new(1.0, 5.0).expect("default rosenbrock parameters are valid")
    }
}

#[inline]
pub fn rosenbrock_2d(pos: &[f64], a: f64, b: f64) -> f64 {
    let (x1, x2) = (pos[0], pos[1]);
    (a - x1).powi(2) + b * (x2 - x1 * x1).powi(2)
}

impl Objective for Rosenbrock2d {
    fn name(&self) -> &str {
        "rosenbrock_2d"
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn global_min(&self) -> Option<&EvalPoint> {
        self.global_min.as_ref()
    }

    fn singlepoint(&self, pos: &[f64]) -> Result<f64> {
        self.bounds.check(pos)?;
        Ok(rosenbrock_2d(pos, self.a, self.b))
    }
}

/// Closure-backed objective for ad-hoc problems.
pub struct FnObjective<F> {
    name: String,
    bounds: Bounds,
    global_min: Option<EvalPoint>,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, bounds: Bounds, f: F) -> Self {
        Self {
            name: name.into(),
            bounds,
            global_min: None,
            f,
        }
    }

    pub fn with_global_min(mut self, global_min: EvalPoint) -> Self {
        self.global_min = Some(global_min);
        self
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn global_min(&self) -> Option<&EvalPoint> {
        self.global_min.as_ref()
    }

    fn singlepoint(&self, pos: &[f64]) -> Result<f64> {
        self.bounds.check(pos)?;
        Ok((self.f)(pos))
    }
}

/// Named numeric parameters for registry constructors (`dims`, `a`, `b`, ...).
pub type ObjectiveParams = BTreeMap<String, f64>;

type Constructor = Box<dyn Fn(&ObjectiveParams) -> Result<Box<dyn Objective>> + Send + Sync>;

/// Name-to-constructor table used by the CLI.
pub struct Registry {
    entries: BTreeMap<String, Constructor>,
}

fn param(params: &ObjectiveParams, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn dims_param(params: &ObjectiveParams, default: usize) -> Result<usize> {
    match params.get("dims") {
        None => Ok(default),
        Some(&d) if d >= 1.0 && d.fract() == 0.0 => Ok(d as usize),
        Some(&d) => Err(Error::InvalidParameter(format!(
            "dims must be a positive integer, got {d}"
        ))),
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("styblinski_tang_2d", |_| {
            Ok(Box::new(StyblinskiTang::new(2)?) as Box<dyn Objective>)
        });
        r.register("styblinski_tang_nd", |p| {
            Ok(Box::new(StyblinskiTang::new(dims_param(p, 2)?)?) as Box<dyn Objective>)
        });
        r.register("rosenbrock_2d", |p| {
            Ok(Box::new(Rosenbrock2d::new(param(p, "a", 1.0), param(p, "b", 5.0))?)
                as Box<dyn Objective>)
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, ctor: F)
    where
        F: Fn(&ObjectiveParams) -> Result<Box<dyn Objective>> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Box::new(ctor));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, params: &ObjectiveParams) -> Result<ObjectiveSpec> {
        let ctor = self.entries.get(name).ok_or_else(|| Error::UnknownName {
            kind: "objective",
            name: name.to_string(),
        })?;
        ObjectiveSpec::from_boxed(ctor(params)?)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
