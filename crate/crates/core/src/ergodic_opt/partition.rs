//! Partitions of the sphere bundle into product cells (base box × direction cell).

use serde::{Deserialize, Serialize};

use crate::certify::Splitting;
use crate::dynamics::{Axis, MapSystem, Point};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::real::Real;
use crate::sphere_bundle::SpherePoint;

/// How the unit sphere over each base point is cut into cells.
#[derive(Clone, Debug)]
pub enum DirectionCells<T> {
    /// `{+1, −1}` for one-dimensional maps.
    Signs,
    /// `m` equal arcs of the circle of directions, starting at angle 0.
    Arcs(usize),
    /// The two unit vectors `±e¹(x)` of a one-dimensional subbundle.
    Subbundle(Splitting<T>),
}

#[derive(Clone, Debug)]
pub struct SpherePartition<T> {
    axes: Vec<Axis<T>>,
    base_resolution: usize,
    directions: DirectionCells<T>,
}

/// Resolution metadata carried by every grid-based estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub base_resolution: usize,
    pub direction_cells: usize,
    pub samples_per_cell: usize,
    pub seed: u64,
    pub node_count: usize,
    pub edge_count: usize,
}

impl<T: Real> SpherePartition<T> {
    /// `base_resolution` cells per axis; `direction_resolution` arcs when
    /// `d = 2` (ignored when `d = 1`).
    pub fn new(sys: &MapSystem<T>, base_resolution: usize, direction_resolution: usize) -> Result<Self> {
        if base_resolution == 0 {
            return Err(Error::InvalidParameter("base resolution must be positive".into()));
        }
        let directions = match sys.dim() {
            1 => DirectionCells::Signs,
            2 if direction_resolution == 0 => {
                return Err(Error::InvalidParameter("direction resolution must be positive".into()))
            }
            2 => DirectionCells::Arcs(direction_resolution),
            d => return Err(Error::DimensionUnsupported { dim: d }),
        };
        Ok(SpherePartition { axes: sys.axes().to_vec(), base_resolution, directions })
    }

    /// Partition of the unit sphere bundle of `E¹` only.
    pub fn restricted(
        sys: &MapSystem<T>,
        splitting: &Splitting<T>,
        base_resolution: usize,
        direction_resolution: usize,
    ) -> Result<Self> {
        if splitting.ambient_dim() != sys.dim() {
            return Err(Error::DimensionMismatch { expected: sys.dim(), got: splitting.ambient_dim() });
        }
        let mut part = Self::new(sys, base_resolution, direction_resolution)?;
        if splitting.dims().0 == 1 && sys.dim() == 2 {
            part.directions = DirectionCells::Subbundle(splitting.clone());
        }
        Ok(part)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn base_resolution(&self) -> usize {
        self.base_resolution
    }

    pub fn base_cells(&self) -> usize {
        self.base_resolution.pow(self.dim() as u32)
    }

    pub fn direction_cells(&self) -> usize {
        match &self.directions {
            DirectionCells::Signs | DirectionCells::Subbundle(_) => 2,
            DirectionCells::Arcs(m) => *m,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.base_cells() * self.direction_cells()
    }

    /// Width of a base cell along `axis`.
    pub fn cell_width(&self, axis: usize) -> T {
        let (lo, hi) = self.axes[axis].bounds();
        (hi - lo) / T::from_usize(self.base_resolution)
    }

    /// Number of intra-cell offset coordinates a sample needs.
    pub fn offset_dim(&self) -> usize {
        self.dim() + usize::from(matches!(self.directions, DirectionCells::Arcs(_)))
    }

    fn base_index(&self, x: &Point<T>) -> Result<usize> {
        let res = self.base_resolution;
        let mut idx = 0usize;
        for (axis, (&c, a)) in x.coords().iter().zip(&self.axes).enumerate() {
            let (lo, hi) = a.bounds();
            let slack = T::lit(1e-12) * (hi - lo);
            if !(c >= lo - slack && c <= hi + slack) {
                return Err(Error::LeftDomain { point: x.coords().iter().map(|v| v.as_f64()).collect() });
            }
            let t = ((c - lo) / self.cell_width(axis)).floor();
            let i = t.to_usize().unwrap_or(0).min(res - 1);
            idx = idx * res + i;
        }
        Ok(idx)
    }

    fn direction_index(&self, p: &SpherePoint<T>) -> Result<usize> {
        let v = p.direction();
        Ok(match &self.directions {
            DirectionCells::Signs => usize::from(!(v[0] > T::zero())),
            DirectionCells::Arcs(m) => {
                let mut theta = v[1].atan2(v[0]);
                if theta < T::zero() {
                    theta += T::TAU();
                }
                let j = (theta * T::from_usize(*m) / T::TAU()).floor();
                j.to_usize().unwrap_or(0).min(m - 1)
            }
            DirectionCells::Subbundle(sp) => {
                let (e1, _) = sp.bases_at(p.base())?;
                usize::from(dot(v, &e1[0]) < T::zero())
            }
        })
    }

    /// Cell containing `p`, indexed `base_index · direction_cells + direction_index`
    /// with base boxes ordered lexicographically (axis 0 most significant).
    pub fn locate(&self, p: &SpherePoint<T>) -> Result<usize> {
        Ok(self.base_index(p.base())? * self.direction_cells() + self.direction_index(p)?)
    }

    /// The point of `cell` at intra-cell offset `u ∈ [0, 1)^offset_dim`.
    pub fn sample(&self, cell: usize, u: &[f64]) -> Result<SpherePoint<T>> {
        let m = self.direction_cells();
        let (mut base_idx, dir_idx) = (cell / m, cell % m);
        let d = self.dim();
        let mut coords = vec![T::zero(); d];
        for axis in (0..d).rev() {
            let i = base_idx % self.base_resolution;
            base_idx /= self.base_resolution;
            let (lo, _) = self.axes[axis].bounds();
            coords[axis] = lo + (T::from_usize(i) + T::lit(u[axis])) * self.cell_width(axis);
        }
        let base = Point::new(coords);
        let sign = if dir_idx == 0 { T::one() } else { -T::one() };
        let direction = match &self.directions {
            DirectionCells::Signs => vec![sign],
            DirectionCells::Arcs(m) => {
                let theta = T::TAU() * (T::from_usize(dir_idx) + T::lit(u[d])) / T::from_usize(*m);
                vec![theta.cos(), theta.sin()]
            }
            DirectionCells::Subbundle(sp) => {
                let (e1, _) = sp.bases_at(&base)?;
                e1[0].iter().map(|&c| sign * c).collect()
            }
        };
        SpherePoint::new(base, direction)
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        let d = MapSystem::<f64>::doubling();
        assert_eq!(SpherePartition::new(&d, 8, 0).unwrap().cell_count(), 16);
        let cat = MapSystem::<f64>::cat_map();
        assert_eq!(SpherePartition::new(&cat, 16, 32).unwrap().cell_count(), 8192);
        let t3 = MapSystem::<f64>::toral_endomorphism(vec![vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 2]]).unwrap();
        assert!(matches!(SpherePartition::new(&t3, 4, 4), Err(Error::DimensionUnsupported { dim: 3 })));
    }

    #[test]
    fn samples_land_in_their_own_cell() {
        let cat = MapSystem::<f64>::cat_map();
        let part = SpherePartition::new(&cat, 5, 7).unwrap();
        let offsets = crate::lowdisc::offsets(part.offset_dim(), 6, 3);
        for cell in 0..part.cell_count() {
            for u in &offsets {
                let p = part.sample(cell, u).unwrap();
                assert_eq!(part.locate(&p).unwrap(), cell);
            }
        }
    }

    #[test]
    fn interval_domain_rejects_escaped_points() {
        let sq = MapSystem::<f64>::polynomial(vec![0.0, 0.0, 1.0], Axis::Interval { lo: 0.0, hi: 1.0 }).unwrap();
        let part = SpherePartition::new(&sq, 4, 0).unwrap();
        let p = SpherePoint::new(Point::new(vec![1.0]), vec![1.0]).unwrap();
        assert_eq!(part.locate(&p).unwrap(), 3 * 2);
        let out = SpherePoint::new(Point::new(vec![1.5]), vec![1.0]).unwrap();
        assert!(matches!(part.locate(&out), Err(Error::LeftDomain { .. })));
    }
}
