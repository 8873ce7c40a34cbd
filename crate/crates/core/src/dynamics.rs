//! C¹ self-maps of tori and intervals with analytic Jacobians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// A point of the ambient domain. Circle coordinates live in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point { coords }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }
}

impl<T: Real> From<Vec<T>> for Point<T> {
    fn from(coords: Vec<T>) -> Self {
        Point::new(coords)
    }
}

/// Derivative of a map at a point, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jacobian<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> Jacobian<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Jacobian { dim, entries }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        let mut entries = vec![T::zero(); dim * dim];
        for (i, &v) in diag.iter().enumerate() {
            entries[i * dim + i] = v;
        }
        Jacobian { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn det(&self) -> T {
        let a = |i, j| self.get(i, j);
        match self.dim {
            0 => T::one(),
            1 => a(0, 0),
            2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
            3 => {
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                    - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
            _ => unreachable!("dimension checked at construction"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }
}

/// How one coordinate axis of the domain is presented.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis<T> {
    /// `R / Z`, coordinates reduced into `[0, 1)`.
    Circle,
    /// A declared compact invariant interval. Evaluation does not clamp.
    Interval { lo: T, hi: T },
}

impl<T: Real> Axis<T> {
    pub fn bounds(&self) -> (T, T) {
        match *self {
            Axis::Circle => (T::zero(), T::one()),
            Axis::Interval { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind<T> {
    Doubling,
    PerturbedDoubling { epsilon: T },
    ToralEndomorphism { matrix: Vec<Vec<i64>> },
    ProductMap { factors: Vec<MapSystem<T>> },
    CustomPolynomial { coefficients: Vec<T> },
}

/// A map together with its domain. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapSystem<T> {
    kind: MapKind<T>,
    axes: Vec<Axis<T>>,
    #[serde(skip)]
    poly_derivative: Vec<T>,
}

fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

fn differentiate<T: Real>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| T::from_usize(i) * c)
        .collect()
}

impl<T: Real> MapSystem<T> {
    /// `x ↦ 2x mod 1`.
    pub fn doubling() -> Self {
        MapSystem { kind: MapKind::Doubling, axes: vec![Axis::Circle], poly_derivative: vec![] }
    }

    /// `x ↦ 2x + ε sin(2πx) mod 1`.
    pub fn perturbed_doubling(epsilon: T) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter("epsilon must be finite".into()));
        }
        Ok(MapSystem {
            kind: MapKind::PerturbedDoubling { epsilon },
            axes: vec![Axis::Circle],
            poly_derivative: vec![],
        })
    }

    /// Linear endomorphism of `T^d` induced by an integer matrix, `d ∈ {1, 2, 3}`.
    pub fn toral_endomorphism(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let d = matrix.len();
        if !(1..=3).contains(&d) {
            return Err(Error::DimensionUnsupported { dim: d });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        Ok(MapSystem {
            kind: MapKind::ToralEndomorphism { matrix },
            axes: vec![Axis::Circle; d],
            poly_derivative: vec![],
        })
    }

    /// Arnold's cat map `[[2,1],[1,1]]`.
    pub fn cat_map() -> Self {
        Self::toral_endomorphism(vec![vec![2, 1], vec![1, 1]]).expect("valid matrix")
    }

    /// `x ↦ kx mod 1`.
    pub fn linear_circle(k: i64) -> Self {
        Self::toral_endomorphism(vec![vec![k]]).expect("valid matrix")
    }

    /// Product of two one-dimensional maps acting on separate coordinates.
    pub fn product(first: MapSystem<T>, second: MapSystem<T>) -> Result<Self> {
        for f in [&first, &second] {
            if f.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, got: f.dim() });
            }
        }
        let axes = vec![first.axes[0], second.axes[0]];
        Ok(MapSystem {
            kind: MapKind::ProductMap { factors: vec![first, second] },
            axes,
            poly_derivative: vec![],
        })
    }

    /// One-dimensional polynomial `Σ c_i x^i` on a circle or interval.
    ///
    /// On the circle the lift must have integer degree and matching
    /// derivatives at `0` and `1` so that the induced map is C¹.
    pub fn polynomial(coefficients: Vec<T>, axis: Axis<T>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("polynomial needs finite coefficients".into()));
        }
        let poly_derivative = differentiate(&coefficients);
        match axis {
            Axis::Circle => {
                let degree = horner(&coefficients, T::one()) - horner(&coefficients, T::zero());
                let tol = T::lit(1e-9);
                if (degree - degree.round()).abs() > tol {
                    return Err(Error::InvalidParameter(
                        "circle polynomial must have integer degree".into(),
                    ));
                }
                let d0 = horner(&poly_derivative, T::zero());
                let d1 = horner(&poly_derivative, T::one());
                if (d0 - d1).abs() > tol {
                    return Err(Error::InvalidParameter(
                        "circle polynomial derivative must agree at 0 and 1".into(),
                    ));
                }
            }
            Axis::Interval { lo, hi } => {
                if !(lo < hi) {
                    return Err(Error::InvalidParameter("interval needs lo < hi".into()));
                }
            }
        }
        Ok(MapSystem {
            kind: MapKind::CustomPolynomial { coefficients },
            axes: vec![axis],
            poly_derivative,
        })
    }

    /// Degree-two circle map `x ↦ x + 3x² − 2x³` with a neutral fixed point at 0
    /// (`f'(0) = 1`, `f' > 1` elsewhere).
    pub fn intermittent() -> Self {
        let c = |v: f64| T::lit(v);
        Self::polynomial(vec![c(0.0), c(1.0), c(3.0), c(-2.0)], Axis::Circle)
            .expect("valid circle polynomial")
    }

    pub fn kind(&self) -> &MapKind<T> {
        &self.kind
    }

    pub fn axes(&self) -> &[Axis<T>] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn is_torus(&self) -> bool {
        self.axes.iter().all(|a| matches!(a, Axis::Circle))
    }

    /// Build a point in this system's domain, reducing circle coordinates.
    pub fn point(&self, coords: Vec<T>) -> Result<Point<T>> {
        self.check_dim(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        Ok(self.reduce(coords))
    }

    pub(crate) fn reduce(&self, mut coords: Vec<T>) -> Point<T> {
        for (c, axis) in coords.iter_mut().zip(&self.axes) {
            if let Axis::Circle = axis {
                *c = c.frac_unit();
            }
        }
        Point::new(coords)
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }

    /// Unreduced value of the map (the lift, for circle coordinates).
    fn lift_raw(&self, x: &[T]) -> Vec<T> {
        match &self.kind {
            MapKind::Doubling => vec![T::lit(2.0) * x[0]],
            MapKind::PerturbedDoubling { epsilon } => {
                vec![T::lit(2.0) * x[0] + *epsilon * (T::TAU() * x[0]).sin()]
            }
            MapKind::ToralEndomorphism { matrix } => matrix
                .iter()
                .map(|row| row.iter().zip(x).map(|(&a, &xi)| T::lit(a as f64) * xi).sum())
                .collect(),
            MapKind::ProductMap { factors } => {
                vec![factors[0].lift_raw(&x[..1])[0], factors[1].lift_raw(&x[1..2])[0]]
            }
            MapKind::CustomPolynomial { coefficients } => vec![horner(coefficients, x[0])],
        }
    }

    fn derivative_raw(&self, x: &[T]) -> Jacobian<T> {
        match &self.kind {
            MapKind::Doubling => Jacobian::diagonal(&[T::lit(2.0)]),
            MapKind::PerturbedDoubling { epsilon } => Jacobian::diagonal(&[
                T::lit(2.0) + T::TAU() * *epsilon * (T::TAU() * x[0]).cos(),
            ]),
            MapKind::ToralEndomorphism { matrix } => {
                let rows: Vec<Vec<T>> = matrix
                    .iter()
                    .map(|r| r.iter().map(|&a| T::lit(a as f64)).collect())
                    .collect();
                Jacobian::from_rows(&rows)
            }
            MapKind::ProductMap { factors } => Jacobian::diagonal(&[
                factors[0].derivative_raw(&x[..1]).get(0, 0),
                factors[1].derivative_raw(&x[1..2]).get(0, 0),
            ]),
            MapKind::CustomPolynomial { .. } => {
                Jacobian::diagonal(&[horner(&self.poly_derivative, x[0])])
            }
        }
    }

    /// `f(x)`, circle coordinates reduced into `[0, 1)`.
    pub fn evaluate(&self, x: &Point<T>) -> Result<Point<T>> {
        self.check_dim(x.dim())?;
        Ok(self.reduce(self.lift_raw(x.coords())))
    }

    /// `Df_x`, from the analytic formula of each kind.
    pub fn derivative(&self, x: &Point<T>) -> Result<Jacobian<T>> {
        self.check_dim(x.dim())?;
        Ok(self.derivative_raw(x.coords()))
    }

    /// True iff `|det Df_x| ≤ tol`.
    pub fn is_critical(&self, x: &Point<T>, tol: T) -> Result<bool> {
        if !(tol > T::zero()) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(self.derivative(x)?.det().abs() <= tol)
    }

    /// `(x, f(x), …, f^{n-1}(x))`.
    pub fn orbit(&self, x: &Point<T>, n: usize) -> Result<Vec<Point<T>>> {
        self.check_dim(x.dim())?;
        if n == 0 {
            return Err(Error::InvalidParameter("orbit length must be at least 1".into()));
        }
        let mut out = Vec::with_capacity(n);
        let mut cur = self.reduce(x.coords().to_vec());
        for _ in 1..n {
            let next = self.evaluate(&cur)?;
            out.push(cur);
            cur = next;
        }
        out.push(cur);
        Ok(out)
    }

    /// Integer matrix of the map when it is linear on a torus.
    pub fn linear_matrix(&self) -> Option<Vec<Vec<i64>>> {
        match &self.kind {
            MapKind::Doubling => Some(vec![vec![2]]),
            MapKind::ToralEndomorphism { matrix } => Some(matrix.clone()),
            MapKind::ProductMap { factors } => {
                let a = factors[0].linear_matrix()?;
                let b = factors[1].linear_matrix()?;
                Some(vec![vec![a[0][0], 0], vec![0, b[0][0]]])
            }
            MapKind::PerturbedDoubling { epsilon } if *epsilon == T::zero() => {
                Some(vec![vec![2]])
            }
            _ => None,
        }
    }

    /// Lift `R → R` of a one-dimensional circle map, with `F(x + 1) = F(x) + deg`.
    pub fn circle_lift(&self, x: T) -> Option<T> {
        (self.dim() == 1 && self.is_torus()).then(|| self.lift_raw(&[x])[0])
    }

    /// Scalar derivative of a one-dimensional map.
    pub fn derivative_1d(&self, x: T) -> Option<T> {
        (self.dim() == 1).then(|| self.derivative_raw(&[x]).get(0, 0))
    }
}
