//! Periodic orbits of expanding circle maps (inverse branches) and of
//! hyperbolic linear maps of the 2-torus (exact rational enumeration).

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::dynamics::{MapSystem, Point};
use crate::error::{Error, Result};
use crate::real::Real;

const MAX_PERIOD: usize = 16;
const CONVERGENCE_TOL: f64 = 1e-13;
const MAX_ITERATIONS: usize = 20_000;
const DEDUP_TOL: f64 = 1e-9;
const MAX_WORDS: usize = 1 << 22;
const MAX_LATTICE_POINTS: i128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit<T> {
    /// The orbit in forward order, starting at its smallest point.
    pub points: Vec<Point<T>>,
    /// Lyapunov exponents along the orbit, ascending.
    pub exponents: Vec<T>,
}

impl<T: Real> PeriodicOrbit<T> {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Smallest `φ`-average over lifts of the orbit.
    pub fn min_exponent(&self) -> T {
        self.exponents[0]
    }
}

/// All periodic orbits of minimal period at most `max_period`.
///
/// One-dimensional circle maps of degree at least 2 with positive derivative
/// are handled by iterating compositions of inverse branches to a fixed point;
/// two-dimensional linear toral maps by solving `(A^p − I) x ∈ Z²` exactly.
pub fn enumerate_periodic_orbits<T: Real>(sys: &MapSystem<T>, max_period: usize) -> Result<Vec<PeriodicOrbit<T>>> {
    if !(1..=MAX_PERIOD).contains(&max_period) {
        return Err(Error::InvalidParameter(format!("max_period must be in 1..={MAX_PERIOD}")));
    }
    match sys.dim() {
        1 if sys.is_torus() => circle_orbits(sys, max_period),
        2 => match sys.linear_matrix() {
            Some(a) => torus_orbits(sys, &a, max_period),
            None => Err(Error::UnsupportedSystem("periodic orbits need a linear 2-d map".into())),
        },
        _ => Err(Error::UnsupportedSystem("periodic orbits need a circle map or a linear 2-d map".into())),
    }
}

/// Lyndon words of length at most `n` over `k` letters, in lexicographic
/// order (Duval's generation).
fn lyndon_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last + 1 == k {
                w.pop();
            } else {
                break;
            }
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

struct CircleBranches<'a, T> {
    sys: &'a MapSystem<T>,
    start: T,
}

impl<T: Real> CircleBranches<'_, T> {
    fn lift(&self, y: T) -> T {
        self.sys.circle_lift(y).expect("circle map")
    }

    /// Preimage of `x` in branch `k`: the `y ∈ [0, 1]` with `F(y) = c + k + {x − c}`.
    fn inverse(&self, k: usize, x: T) -> T {
        let target = self.start + T::from_usize(k) + (x - self.start).frac_unit();
        let (mut lo, mut hi) = (T::zero(), T::one());
        let mut y = (target - self.start) / (self.lift(T::one()) - self.start);
        y = y.max(lo).min(hi);
        for _ in 0..200 {
            let r = self.lift(y) - target;
            if r == T::zero() {
                return y;
            }
            if r > T::zero() {
                hi = y;
            } else {
                lo = y;
            }
            let slope = self.sys.derivative_1d(y).expect("1-d");
            let newton = y - r / slope;
            let next = if newton > lo && newton < hi { newton } else { (lo + hi) / T::lit(2.0) };
            if (next - y).abs() <= T::epsilon() * T::lit(4.0) || hi - lo <= T::epsilon() {
                return next;
            }
            y = next;
        }
        y
    }
}

fn circle_distance<T: Real>(a: T, b: T) -> T {
    let d = (a - b).abs().frac_unit();
    d.min(T::one() - d)
}

/// Order-preserving key for a coordinate in `[0, 1]`.
fn unit_key(v: f64) -> u64 {
    if v <= 0.0 {
        0
    } else {
        v.min(1.0).to_bits()
    }
}

/// Whether `keys` holds a point within `tol` of `x` on the circle.
fn has_neighbour(keys: &BTreeSet<u64>, x: f64, tol: f64) -> bool {
    let (lo, hi) = (x - tol, x + tol);
    keys.range(unit_key(lo)..=unit_key(hi)).next().is_some()
        || (lo < 0.0 && keys.range(unit_key(lo + 1.0)..).next().is_some())
        || (hi > 1.0 && keys.range(..=unit_key(hi - 1.0)).next().is_some())
}

fn circle_orbits<T: Real>(sys: &MapSystem<T>, max_period: usize) -> Result<Vec<PeriodicOrbit<T>>> {
    let start = sys.circle_lift(T::zero()).expect("circle map");
    let degree = (sys.circle_lift(T::one()).unwrap() - start).round();
    let d = degree.to_usize().filter(|&d| d >= 2).ok_or_else(|| {
        Error::UnsupportedSystem("inverse branches need an orientation-preserving map of degree ≥ 2".into())
    })?;
    let probes = 4096;
    if (0..probes).any(|i| !(sys.derivative_1d(T::from_usize(i) / T::from_usize(probes)).unwrap() > T::zero())) {
        return Err(Error::UnsupportedSystem("derivative must be positive for inverse branches".into()));
    }
    let words_needed: f64 = (1..=max_period).map(|p| (d as f64).powi(p as i32)).sum();
    if words_needed > MAX_WORDS as f64 {
        return Err(Error::UnsupportedSystem("too many itineraries".into()));
    }
    let branches = CircleBranches { sys, start };
    let tol = T::lit(CONVERGENCE_TOL);
    let dk = T::from_usize(d);
    let mut orbits: Vec<PeriodicOrbit<T>> = Vec::new();
    let mut seen: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); max_period + 1];
    for word in lyndon_words(d, max_period) {
        let p = word.len();
        // Fixed point of the linear model with the same itinerary.
        let guess: T = word
            .iter()
            .enumerate()
            .map(|(i, &c)| T::from_usize(c) / dk.powi(i as i32 + 1))
            .sum::<T>()
            / (T::one() - dk.powi(-(p as i32)));
        let compose = |x: T| word.iter().rev().fold(x, |z, &k| branches.inverse(k, z));
        let mut x = guess.frac_unit();
        let mut converged = false;
        for _ in 0..MAX_ITERATIONS {
            let next = compose(x);
            let step = circle_distance(next, x);
            x = next;
            if step <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NotConverged(format!("itinerary {word:?}")));
        }
        let mut pts = vec![T::zero(); p];
        let mut z = x;
        for i in (0..p).rev() {
            z = branches.inverse(word[i], z);
            pts[i] = z;
        }
        pts[0] = x;
        let pts: Vec<T> = pts.into_iter().map(|v| v.frac_unit()).collect();
        let exponent = pts
            .iter()
            .map(|&v| sys.derivative_1d(v).unwrap().abs().ln())
            .sum::<T>()
            / T::from_usize(p);
        let min_pos = (0..p)
            .min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).expect("finite"))
            .unwrap_or(0);
        let ordered: Vec<T> = (0..p).map(|i| pts[(min_pos + i) % p]).collect();
        if !has_neighbour(&seen[p], ordered[0].as_f64(), DEDUP_TOL) {
            seen[p].extend(ordered.iter().map(|v| unit_key(v.as_f64())));
            orbits.push(PeriodicOrbit {
                points: ordered.into_iter().map(|v| Point::new(vec![v])).collect(),
                exponents: vec![exponent],
            });
        }
    }
    orbits.sort_by(|a, b| {
        (a.period(), a.points[0].coords()[0])
            .partial_cmp(&(b.period(), b.points[0].coords()[0]))
            .expect("finite")
    });
    Ok(orbits)
}

type Mat2 = [[i128; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn linear_exponents<T: Real>(a: &Mat2) -> Vec<T> {
    let [[a00, a01], [a10, a11]] = a.map(|r| r.map(|v| T::lit(v as f64)));
    let half_tr = (a00 + a11) / T::lit(2.0);
    let det = a00 * a11 - a01 * a10;
    let disc = half_tr * half_tr - det;
    let mut ex = if disc >= T::zero() {
        let r = disc.sqrt();
        vec![(half_tr - r).abs().ln(), (half_tr + r).abs().ln()]
    } else {
        vec![det.abs().ln() / T::lit(2.0); 2]
    };
    ex.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    ex
}

fn torus_orbits<T: Real>(_sys: &MapSystem<T>, a: &[Vec<i64>], max_period: usize) -> Result<Vec<PeriodicOrbit<T>>> {
    let a: Mat2 = [[a[0][0] as i128, a[0][1] as i128], [a[1][0] as i128, a[1][1] as i128]];
    let exponents = linear_exponents::<T>(&a);
    let mut power = a;
    let mut orbits = Vec::new();
    for p in 1..=max_period {
        if p > 1 {
            power = mat_mul(&power, &a);
        }
        let b = [[power[0][0] - 1, power[0][1]], [power[1][0], power[1][1] - 1]];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det == 0 {
            return Err(Error::UnsupportedSystem(format!("A^{p} − I is singular")));
        }
        let q = det.abs();
        let sign = det.signum();
        let adj = [[b[1][1], -b[0][1]], [-b[1][0], b[0][0]]];
        // x = adj·m / det lies in [0,1)² iff m ∈ B[0,1)²; scan its bounding box.
        let range = |row: [i128; 2]| {
            let corners = [0, row[0], row[1], row[0] + row[1]];
            (*corners.iter().min().unwrap(), *corners.iter().max().unwrap())
        };
        let (lo0, hi0) = range(b[0]);
        let (lo1, hi1) = range(b[1]);
        if (hi0 - lo0 + 1) * (hi1 - lo1 + 1) > MAX_LATTICE_POINTS {
            return Err(Error::UnsupportedSystem(format!("too many period-{p} points")));
        }
        let step = |n: [i128; 2]| -> [i128; 2] {
            [
                (a[0][0] * n[0] + a[0][1] * n[1]).rem_euclid(q),
                (a[1][0] * n[0] + a[1][1] * n[1]).rem_euclid(q),
            ]
        };
        let mut seen: HashSet<[i128; 2]> = HashSet::new();
        let mut found: Vec<Vec<[i128; 2]>> = Vec::new();
        for m0 in lo0..=hi0 {
            for m1 in lo1..=hi1 {
                let n = [sign * (adj[0][0] * m0 + adj[0][1] * m1), sign * (adj[1][0] * m0 + adj[1][1] * m1)];
                if !(0..q).contains(&n[0]) || !(0..q).contains(&n[1]) || seen.contains(&n) {
                    continue;
                }
                let mut orbit = vec![n];
                let mut cur = step(n);
                while cur != n {
                    orbit.push(cur);
                    cur = step(cur);
                }
                for &pt in &orbit {
                    seen.insert(pt);
                }
                if orbit.len() == p {
                    let min_pos = (0..p).min_by_key(|&i| orbit[i]).unwrap();
                    orbit.rotate_left(min_pos);
                    found.push(orbit);
                }
            }
        }
        found.sort();
        let qf = T::lit(q as f64);
        for orbit in found {
            orbits.push(PeriodicOrbit {
                points: orbit
                    .iter()
                    .map(|n| Point::new(vec![T::lit(n[0] as f64) / qf, T::lit(n[1] as f64) / qf]))
                    .collect(),
                exponents: exponents.clone(),
            });
        }
    }
    Ok(orbits)
}
