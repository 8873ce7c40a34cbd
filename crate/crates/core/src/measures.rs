//! Finitely supported probability measures on the sphere bundle or the base,
//! the projection `π*`, integration and a trigonometric weak-* distance.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{MapSystem, Point};
use crate::error::{Error, Result};
use crate::real::{Real, MERGE_TOL};
use crate::sphere_bundle::{observable_phi, LiftedOrbitRecord, SpherePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Bundle,
    Base,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", content = "points", rename_all = "snake_case")]
pub enum Atoms<T> {
    Bundle(Vec<SpherePoint<T>>),
    Base(Vec<Point<T>>),
}

/// A borrowed atom location.
#[derive(Clone, Copy, Debug)]
pub enum Location<'a, T> {
    Bundle(&'a SpherePoint<T>),
    Base(&'a Point<T>),
}

impl<'a, T: Real> Location<'a, T> {
    pub fn base(&self) -> &'a Point<T> {
        match *self {
            Location::Bundle(p) => p.base(),
            Location::Base(x) => x,
        }
    }

    pub fn direction(&self) -> Option<&'a [T]> {
        match *self {
            Location::Bundle(p) => Some(p.direction()),
            Location::Base(_) => None,
        }
    }
}

/// Integer atom counts of an orbit measure; weights are `count / total`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicities {
    pub counts: Vec<u64>,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure<T> {
    atoms: Atoms<T>,
    weights: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicities: Option<Multiplicities>,
}

/// Groups keys whose coordinates all agree within `MERGE_TOL` with a cluster
/// representative (the first key of the cluster). Returns, for every key, the
/// index of its cluster; clusters are numbered in order of first occurrence.
fn cluster<T: Real>(keys: &[Vec<T>]) -> (Vec<usize>, usize) {
    let tol = T::lit(MERGE_TOL);
    let bucket = |c: T| -> i64 { (c / tol).floor().to_i64().unwrap_or(i64::MAX) };
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(keys.len());
    for (i, key) in keys.iter().enumerate() {
        let b = key.first().map_or(0, |&c| bucket(c));
        let found = [b.saturating_sub(1), b, b.saturating_add(1)].iter().find_map(|nb| {
            buckets.get(nb)?.iter().copied().find(|&cid| {
                keys[reps[cid]].iter().zip(key).all(|(&a, &c)| (a - c).abs() <= tol)
            })
        });
        match found {
            Some(cid) => assignment.push(cid),
            None => {
                let cid = reps.len();
                reps.push(i);
                buckets.entry(b).or_default().push(cid);
                assignment.push(cid);
            }
        }
    }
    (assignment, reps.len())
}

fn check_weights<T: Real>(weights: &[T]) -> Result<()> {
    if weights.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
        return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
    }
    let total: T = weights.iter().copied().sum();
    if (total - T::one()).abs() > T::lit(1e-12) {
        return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

impl<T: Real> EmpiricalMeasure<T> {
    pub fn new(atoms: Atoms<T>, weights: Vec<T>) -> Result<Self> {
        let len = match &atoms {
            Atoms::Bundle(a) => a.len(),
            Atoms::Base(a) => a.len(),
        };
        if len != weights.len() {
            return Err(Error::DimensionMismatch { expected: len, got: weights.len() });
        }
        check_weights(&weights)?;
        Ok(EmpiricalMeasure { atoms, weights, multiplicities: None })
    }

    fn from_counts(atoms: Atoms<T>, counts: Vec<u64>, total: u64) -> Self {
        let denom = T::lit(total as f64);
        let weights = counts.iter().map(|&c| T::lit(c as f64) / denom).collect();
        EmpiricalMeasure { atoms, weights, multiplicities: Some(Multiplicities { counts, total }) }
    }

    /// Uniform measure on the points of a lifted orbit, duplicates merged.
    pub fn from_bundle_orbit(points: &[SpherePoint<T>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty orbit".into()));
        }
        let keys: Vec<Vec<T>> = points.iter().map(|p| p.coords().collect()).collect();
        let (assign, k) = cluster(&keys);
        let (atoms, counts) = gather(points, &assign, k);
        Ok(Self::from_counts(Atoms::Bundle(atoms), counts, points.len() as u64))
    }

    /// Uniform measure on the points of a base orbit, duplicates merged.
    pub fn from_base_orbit(points: &[Point<T>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty orbit".into()));
        }
        let keys: Vec<Vec<T>> = points.iter().map(|p| p.coords().to_vec()).collect();
        let (assign, k) = cluster(&keys);
        let (atoms, counts) = gather(points, &assign, k);
        Ok(Self::from_counts(Atoms::Base(atoms), counts, points.len() as u64))
    }

    pub fn space(&self) -> Space {
        match self.atoms {
            Atoms::Bundle(_) => Space::Bundle,
            Atoms::Base(_) => Space::Base,
        }
    }

    pub fn atoms(&self) -> &Atoms<T> {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn multiplicities(&self) -> Option<&Multiplicities> {
        self.multiplicities.as_ref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn locations(&self) -> Vec<Location<'_, T>> {
        match &self.atoms {
            Atoms::Bundle(a) => a.iter().map(Location::Bundle).collect(),
            Atoms::Base(a) => a.iter().map(Location::Base).collect(),
        }
    }

    /// `Σ w_i g(atom_i)`.
    pub fn integrate<F>(&self, g: F) -> T
    where
        F: Fn(Location<'_, T>) -> T,
    {
        self.locations().into_iter().zip(&self.weights).map(|(loc, &w)| w * g(loc)).sum()
    }

    pub fn try_integrate<F, E>(&self, g: F) -> std::result::Result<T, E>
    where
        F: Fn(Location<'_, T>) -> std::result::Result<T, E>,
    {
        let mut acc = T::zero();
        for (loc, &w) in self.locations().into_iter().zip(&self.weights) {
            acc += w * g(loc)?;
        }
        Ok(acc)
    }

    /// `∫ φ dμ` for a measure on the sphere bundle.
    pub fn integrate_phi(&self, sys: &MapSystem<T>) -> Result<T> {
        match &self.atoms {
            Atoms::Bundle(points) => {
                let mut acc = T::zero();
                for (p, &w) in points.iter().zip(&self.weights) {
                    acc += w * observable_phi(sys, p)?;
                }
                Ok(acc)
            }
            Atoms::Base(_) => Err(Error::SpaceMismatch),
        }
    }

    /// Rows `x0.., [v0..,] weight`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let locs = self.locations();
        let d = locs.first().map_or(0, |l| l.base().dim());
        let mut header: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
        if self.space() == Space::Bundle {
            header.extend((0..d).map(|i| format!("v{i}")));
        }
        header.push("weight".into());
        w.write_record(&header)?;
        for (loc, weight) in locs.iter().zip(&self.weights) {
            let mut row: Vec<String> = loc.base().coords().iter().map(|c| c.to_string()).collect();
            if let Some(v) = loc.direction() {
                row.extend(v.iter().map(|c| c.to_string()));
            }
            row.push(weight.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl<T: Real + Serialize> EmpiricalMeasure<T> {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

fn gather<P: Clone>(points: &[P], assign: &[usize], k: usize) -> (Vec<P>, Vec<u64>) {
    let mut atoms: Vec<Option<P>> = vec![None; k];
    let mut counts = vec![0u64; k];
    for (p, &c) in points.iter().zip(assign) {
        if atoms[c].is_none() {
            atoms[c] = Some(p.clone());
        }
        counts[c] += 1;
    }
    (atoms.into_iter().map(|a| a.expect("every cluster has a member")).collect(), counts)
}

pub fn empirical_from_lifted_orbit<T: Real>(rec: &LiftedOrbitRecord<T>) -> Result<EmpiricalMeasure<T>> {
    EmpiricalMeasure::from_bundle_orbit(&rec.points)
}

/// `π*μ`: replace atoms by their base points and merge atoms sharing a base.
pub fn project_measure<T: Real>(mu: &EmpiricalMeasure<T>) -> Result<EmpiricalMeasure<T>> {
    let points = match &mu.atoms {
        Atoms::Bundle(p) => p,
        Atoms::Base(_) => return Err(Error::SpaceMismatch),
    };
    let keys: Vec<Vec<T>> = points.iter().map(|p| p.base().coords().to_vec()).collect();
    let (assign, k) = cluster(&keys);
    let bases: Vec<Point<T>> = points.iter().map(|p| p.base().clone()).collect();
    let (atoms, _) = gather(&bases, &assign, k);
    if let Some(m) = &mu.multiplicities {
        let mut counts = vec![0u64; k];
        for (&c, &n) in assign.iter().zip(&m.counts) {
            counts[c] += n;
        }
        return Ok(EmpiricalMeasure::from_counts(Atoms::Base(atoms), counts, m.total));
    }
    let mut weights = vec![T::zero(); k];
    for (&c, &w) in assign.iter().zip(&mu.weights) {
        weights[c] += w;
    }
    Ok(EmpiricalMeasure { atoms: Atoms::Base(atoms), weights, multiplicities: None })
}

/// `cos` or `sin` of `2π k·x + (π/2) m·v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigMonomial {
    pub base_freq: Vec<i32>,
    pub dir_freq: Vec<i32>,
    pub sine: bool,
}

impl TrigMonomial {
    pub fn eval<T: Real>(&self, loc: Location<'_, T>) -> T {
        let mut phase = T::zero();
        for (&k, &x) in self.base_freq.iter().zip(loc.base().coords()) {
            phase += T::TAU() * T::lit(f64::from(k)) * x;
        }
        if let Some(v) = loc.direction() {
            for (&m, &c) in self.dir_freq.iter().zip(v) {
                phase += T::FRAC_PI_2() * T::lit(f64::from(m)) * c;
            }
        }
        if self.sine {
            phase.sin()
        } else {
            phase.cos()
        }
    }
}

fn integer_vectors(len: usize, max_l1: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            let used: i32 = v.iter().map(|c: &i32| c.abs()).sum();
            for c in -(max_l1 - used)..=(max_l1 - used) {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All nonconstant trigonometric monomials of total degree at most `degree`,
/// one per `±` frequency pair, each as a cosine and a sine.
pub fn trig_dictionary(base_dim: usize, dir_dim: usize, degree: usize) -> Vec<TrigMonomial> {
    let k = degree as i32;
    let mut out = Vec::new();
    for freq in integer_vectors(base_dim + dir_dim, k) {
        match freq.iter().find(|&&c| c != 0) {
            Some(&lead) if lead > 0 => {}
            _ => continue,
        }
        for sine in [false, true] {
            out.push(TrigMonomial {
                base_freq: freq[..base_dim].to_vec(),
                dir_freq: freq[base_dim..].to_vec(),
                sine,
            });
        }
    }
    out
}

fn dims_of<T: Real>(mu: &EmpiricalMeasure<T>) -> (usize, usize) {
    match &mu.atoms {
        Atoms::Bundle(p) => p.first().map_or((0, 0), |q| (q.dim(), q.dim())),
        Atoms::Base(p) => p.first().map_or((0, 0), |q| (q.dim(), 0)),
    }
}

/// `max_g |∫g dμ₁ − ∫g dμ₂| / |dictionary|` over the degree-`degree`
/// trigonometric dictionary of the measures' space.
pub fn weak_star_distance<T: Real>(
    mu1: &EmpiricalMeasure<T>,
    mu2: &EmpiricalMeasure<T>,
    degree: usize,
) -> Result<T> {
    if mu1.space() != mu2.space() {
        return Err(Error::SpaceMismatch);
    }
    if degree == 0 {
        return Err(Error::InvalidParameter("dictionary degree must be at least 1".into()));
    }
    let (b1, d1) = dims_of(mu1);
    let (b2, d2) = dims_of(mu2);
    if (b1, d1) != (b2, d2) {
        return Err(Error::DimensionMismatch { expected: b1, got: b2 });
    }
    let dict = trig_dictionary(b1, d1, degree);
    let worst = dict
        .iter()
        .map(|g| (mu1.integrate(|l| g.eval(l)) - mu2.integrate(|l| g.eval(l))).abs())
        .fold(T::zero(), T::max);
    Ok(worst / T::from_usize(dict.len().max(1)))
}
