//! Continuous splittings `T_x M = E¹_x ⊕ E²_x` given by orthonormal bases.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{MapSystem, Point};
use crate::error::{Error, Result};
use crate::linalg::{norm, orthonormality_defect, scaled};
use crate::real::Real;

pub type Basis<T> = Vec<Vec<T>>;
pub type BasisField<T> = Arc<dyn Fn(&Point<T>) -> (Basis<T>, Basis<T>) + Send + Sync>;

const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Clone)]
enum Source<T> {
    Constant { e1: Basis<T>, e2: Basis<T> },
    Field(BasisField<T>),
}

/// Which eigendirection of a linear map plays the role of `E¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenRole {
    Unstable,
    Stable,
}

#[derive(Clone)]
pub struct Splitting<T> {
    dims: (usize, usize),
    min_angle: T,
    source: Source<T>,
}

impl<T: fmt::Debug> fmt::Debug for Splitting<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Splitting");
        s.field("dims", &self.dims).field("min_angle", &self.min_angle);
        match &self.source {
            Source::Constant { e1, e2 } => s.field("e1", e1).field("e2", e2),
            Source::Field(_) => s.field("source", &"field"),
        };
        s.finish()
    }
}

fn check_basis<T: Real>(b: &[Vec<T>], d: usize) -> Result<()> {
    if let Some(v) = b.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    let dev = orthonormality_defect(b);
    if dev > T::lit(ORTHONORMAL_TOL) {
        return Err(Error::DegenerateBasis { deviation: dev.as_f64() });
    }
    Ok(())
}

impl<T: Real> Splitting<T> {
    /// Constant splitting; each basis must be orthonormal and the dimensions
    /// must add up to the ambient dimension.
    pub fn constant(e1: Basis<T>, e2: Basis<T>, min_angle: T) -> Result<Self> {
        let d = e1.first().or(e2.first()).map_or(0, |v| v.len());
        if e1.is_empty() || e1.len() + e2.len() != d {
            return Err(Error::InvalidParameter(format!(
                "subspace dimensions {} + {} do not add up to {d}",
                e1.len(),
                e2.len()
            )));
        }
        check_basis(&e1, d)?;
        check_basis(&e2, d)?;
        Ok(Splitting { dims: (e1.len(), e2.len()), min_angle, source: Source::Constant { e1, e2 } })
    }

    /// Splitting given by a basis field; orthonormality is checked at each
    /// evaluation.
    pub fn from_field(dims: (usize, usize), min_angle: T, field: BasisField<T>) -> Self {
        Splitting { dims, min_angle, source: Source::Field(field) }
    }

    /// Eigendirections of a two-dimensional linear map with real eigenvalues
    /// of distinct moduli.
    pub fn eigen(sys: &MapSystem<T>, role: EigenRole, min_angle: T) -> Result<Self> {
        let a = sys
            .linear_matrix()
            .filter(|m| m.len() == 2)
            .ok_or_else(|| Error::UnsupportedSystem("eigen splitting needs a 2-d linear map".into()))?;
        let [a00, a01, a10, a11] =
            [a[0][0], a[0][1], a[1][0], a[1][1]].map(|v| T::lit(v as f64));
        let half_tr = (a00 + a11) / T::lit(2.0);
        let det = a00 * a11 - a01 * a10;
        let disc = half_tr * half_tr - det;
        if !(disc > T::zero()) {
            return Err(Error::UnsupportedSystem("eigenvalues are not real and distinct".into()));
        }
        let root = disc.sqrt();
        let (l1, l2) = (half_tr + root, half_tr - root);
        if (l1.abs() - l2.abs()).abs() <= T::epsilon() {
            return Err(Error::UnsupportedSystem("eigenvalues have equal modulus".into()));
        }
        let (big, small) = if l1.abs() > l2.abs() { (l1, l2) } else { (l2, l1) };
        let eigvec = |l: T| -> Vec<T> {
            let c1 = vec![a01, l - a00];
            let c2 = vec![l - a11, a10];
            let v = if norm(&c1) >= norm(&c2) { c1 } else { c2 };
            let r = norm(&v);
            scaled(&v, T::one() / r)
        };
        let (u, s) = (eigvec(big), eigvec(small));
        // Eigenvectors of a non-normal map need not be orthogonal; each
        // subspace is one-dimensional so a unit vector is an orthonormal basis.
        let (e1, e2) = match role {
            EigenRole::Unstable => (u, s),
            EigenRole::Stable => (s, u),
        };
        Ok(Splitting { dims: (1, 1), min_angle, source: Source::Constant { e1: vec![e1], e2: vec![e2] } })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn ambient_dim(&self) -> usize {
        self.dims.0 + self.dims.1
    }

    pub fn min_angle(&self) -> T {
        self.min_angle
    }

    /// Orthonormal bases of `E¹_x` and `E²_x`.
    pub fn bases_at(&self, x: &Point<T>) -> Result<(Basis<T>, Basis<T>)> {
        let d = self.ambient_dim();
        if x.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: x.dim() });
        }
        match &self.source {
            Source::Constant { e1, e2 } => Ok((e1.clone(), e2.clone())),
            Source::Field(f) => {
                let (e1, e2) = f(x);
                if e1.len() != self.dims.0 || e2.len() != self.dims.1 {
                    return Err(Error::InvalidParameter("basis field changed dimension".into()));
                }
                check_basis(&e1, d)?;
                check_basis(&e2, d)?;
                Ok((e1, e2))
            }
        }
    }
}
