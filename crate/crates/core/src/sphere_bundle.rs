//! Lifted dynamics `F(x, v) = (f(x), Df_x v / |Df_x v|)` on the unit tangent
//! bundle, the observable `φ(x, v) = log |Df_x v|` and its Birkhoff sums.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{MapSystem, Point};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, norm, scaled};
use crate::real::{Real, CRITICAL_EPS};

/// A base point with a unit tangent direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint<T> {
    base: Point<T>,
    direction: Vec<T>,
}

impl<T: Real> SpherePoint<T> {
    /// Normalizes `direction`; fails on a zero or mismatched vector.
    pub fn new(base: Point<T>, direction: Vec<T>) -> Result<Self> {
        if direction.len() != base.dim() {
            return Err(Error::DimensionMismatch { expected: base.dim(), got: direction.len() });
        }
        let r = norm(&direction);
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter("direction must be a nonzero finite vector".into()));
        }
        Ok(SpherePoint { base, direction: scaled(&direction, T::one() / r) })
    }

    pub(crate) fn from_unit(base: Point<T>, direction: Vec<T>) -> Self {
        SpherePoint { base, direction }
    }

    pub fn base(&self) -> &Point<T> {
        &self.base
    }

    pub fn direction(&self) -> &[T] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Base coordinates followed by direction coordinates.
    pub fn coords(&self) -> impl Iterator<Item = T> + '_ {
        self.base.coords().iter().chain(&self.direction).copied()
    }
}

fn critical<T: Real>(x: &Point<T>, norm: T) -> Error {
    Error::CriticalPointEncountered {
        step: 0,
        base: x.coords().iter().map(|c| c.as_f64()).collect(),
        norm: norm.as_f64(),
        cell: None,
    }
}

/// One application of `F` together with `φ` at the input point.
pub fn lift_with_phi<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>) -> Result<(SpherePoint<T>, T)> {
    sys.check_dim(p.dim())?;
    let jac = sys.derivative(&p.base)?;
    let w = jac.apply(&p.direction);
    let r = norm(&w);
    if !(r > T::lit(CRITICAL_EPS)) {
        return Err(critical(&p.base, r));
    }
    let base = sys.evaluate(&p.base)?;
    Ok((SpherePoint::from_unit(base, scaled(&w, T::one() / r)), r.ln()))
}

pub fn lift_step<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>) -> Result<SpherePoint<T>> {
    lift_with_phi(sys, p).map(|(q, _)| q)
}

/// `φ(x, v) = log |Df_x(v)|`, in nats.
pub fn observable_phi<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>) -> Result<T> {
    sys.check_dim(p.dim())?;
    let w = sys.derivative(&p.base)?.apply(&p.direction);
    let r = norm(&w);
    if !(r > T::lit(CRITICAL_EPS)) {
        return Err(critical(&p.base, r));
    }
    Ok(r.ln())
}

fn require_steps(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of steps must be at least 1".into()));
    }
    Ok(())
}

/// `Σ_{i<n} φ(F^i p)` and the endpoint `F^n p`.
pub fn birkhoff_sum_phi<T: Real>(
    sys: &MapSystem<T>,
    p: &SpherePoint<T>,
    n: usize,
) -> Result<(T, SpherePoint<T>)> {
    let mut sum = T::zero();
    let mut cur = p.clone();
    for step in 0..n {
        let (next, phi) = lift_with_phi(sys, &cur).map_err(|e| e.at_step(step))?;
        sum += phi;
        cur = next;
    }
    Ok((sum, cur))
}

pub fn birkhoff_average_phi<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>, n: usize) -> Result<T> {
    require_steps(n)?;
    let (sum, _) = birkhoff_sum_phi(sys, p, n)?;
    Ok(sum / T::from_usize(n))
}

/// The first `n` points of a lifted orbit and `φ` at each of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedOrbitRecord<T> {
    pub points: Vec<SpherePoint<T>>,
    pub phi_values: Vec<T>,
}

impl<T: Real> LiftedOrbitRecord<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn birkhoff_average(&self) -> T {
        let sum: T = self.phi_values.iter().copied().sum();
        sum / T::from_usize(self.phi_values.len())
    }

    pub fn base_orbit(&self) -> Vec<Point<T>> {
        self.points.iter().map(|p| p.base().clone()).collect()
    }

    /// Rows `step, x0.., v0.., phi`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let d = self.points.first().map_or(0, |p| p.dim());
        let mut header = vec!["step".to_string()];
        header.extend((0..d).map(|i| format!("x{i}")));
        header.extend((0..d).map(|i| format!("v{i}")));
        header.push("phi".into());
        w.write_record(&header)?;
        for (i, (p, phi)) in self.points.iter().zip(&self.phi_values).enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(p.coords().map(|c| c.to_string()));
            row.push(phi.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn lifted_orbit<T: Real>(
    sys: &MapSystem<T>,
    p: &SpherePoint<T>,
    n: usize,
) -> Result<LiftedOrbitRecord<T>> {
    require_steps(n)?;
    let mut points = Vec::with_capacity(n);
    let mut phi_values = Vec::with_capacity(n);
    let mut cur = p.clone();
    for step in 0..n {
        let (next, phi) = lift_with_phi(sys, &cur).map_err(|e| e.at_step(step))?;
        points.push(cur);
        phi_values.push(phi);
        cur = next;
    }
    Ok(LiftedOrbitRecord { points, phi_values })
}

/// `(1/n) log |Df^n_x(v)|` from the raw tangent-vector product, folding the
/// norm into a log accumulator only when it leaves the renormalization band.
pub fn growth_rate_direct<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>, n: usize) -> Result<T> {
    require_steps(n)?;
    sys.check_dim(p.dim())?;
    let (low, high) = T::renorm_bounds();
    let eps = T::lit(CRITICAL_EPS);
    let mut x = p.base().clone();
    let mut w = p.direction().to_vec();
    let mut w_norm = norm(&w);
    let mut log_acc = T::zero();
    for step in 0..n {
        let next = sys.derivative(&x)?.apply(&w);
        let next_norm = norm(&next);
        if !(next_norm > eps * w_norm) {
            return Err(critical(&x, next_norm / w_norm).at_step(step));
        }
        x = sys.evaluate(&x)?;
        w = next;
        w_norm = next_norm;
        if w_norm > high || w_norm < low {
            log_acc += w_norm.ln();
            w = scaled(&w, T::one() / w_norm);
            w_norm = T::one();
        }
    }
    Ok((log_acc + w_norm.ln()) / T::from_usize(n))
}

/// Approximate Lyapunov spectrum along the orbit of `x`, ascending.
///
/// An orthonormal frame is pushed forward and re-orthonormalized every step;
/// the exponents are the averaged logs of the triangular-factor diagonal.
pub fn lyapunov_spectrum_estimate<T: Real>(sys: &MapSystem<T>, x: &Point<T>, n: usize) -> Result<Vec<T>> {
    require_steps(n)?;
    sys.check_dim(x.dim())?;
    let d = sys.dim();
    let eps = T::lit(CRITICAL_EPS);
    let mut frame: Vec<Vec<T>> = (0..d)
        .map(|j| (0..d).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut sums = vec![T::zero(); d];
    let mut cur = x.clone();
    for step in 0..n {
        let jac = sys.derivative(&cur)?;
        let mut cols: Vec<Vec<T>> = frame.iter().map(|q| jac.apply(q)).collect();
        let diag = gram_schmidt(&mut cols);
        for (s, r) in sums.iter_mut().zip(&diag) {
            if !(r.abs() > eps) {
                return Err(critical(&cur, r.abs()).at_step(step));
            }
            *s += r.abs().ln();
        }
        frame = cols;
        cur = sys.evaluate(&cur)?;
    }
    let mut out: Vec<T> = sums.into_iter().map(|s| s / T::from_usize(n)).collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite exponents"));
    Ok(out)
}
