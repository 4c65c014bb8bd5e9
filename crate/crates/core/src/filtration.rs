//! Vietoris–Rips filtrations.
//!
//! A simplex enters the filtration at the largest pairwise distance among its
//! vertices (closed threshold: present once `ε >= value`). Simplices are kept
//! in the canonical order `(value, dim, lexicographic vertices)`, so every
//! face precedes its cofaces and the pairing computed downstream is fully
//! deterministic.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

/// Highest simplex dimension `build_rips` accepts unless told otherwise.
pub const DEFAULT_DIM_LIMIT: usize = 3;

/// An abstract simplex: a strictly increasing list of point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(SmallVec<[u32; 4]>);

impl Simplex {
    pub fn new(vertices: &[u32]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("empty simplex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "simplex vertices {vertices:?} are not strictly increasing"
            )));
        }
        Ok(Self(SmallVec::from_slice(vertices)))
    }

    pub fn vertex(v: u32) -> Self {
        Self(SmallVec::from_slice(&[v]))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The codimension-1 faces, each obtained by dropping one vertex.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..k).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    fn with_vertex(&self, v: u32) -> Self {
        let mut s = self.0.clone();
        s.push(v);
        Self(s)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Truncation radius of a Rips filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    /// Resolves to [`enclosing_radius`]; no finite persistence is lost.
    Auto,
    Finite(f64),
}

impl Radius {
    pub fn resolve(self, dm: &DistanceMatrix) -> Result<f64> {
        match self {
            Radius::Auto => Ok(enclosing_radius(dm)),
            Radius::Finite(r) if r > 0.0 => Ok(r),
            Radius::Finite(r) => Err(Error::InvalidArgument(format!(
                "max radius must be positive, got {r}"
            ))),
        }
    }
}

impl std::str::FromStr for Radius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Radius::Auto);
        }
        let r = s
            .parse::<f64>()
            .map_err(|e| Error::InvalidArgument(format!("radius {s:?}: {e}")))?;
        if r > 0.0 {
            Ok(Radius::Finite(r))
        } else {
            Err(Error::InvalidArgument(format!("max radius must be positive, got {r}")))
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Auto => f.write_str("auto"),
            Radius::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Simplices with their appearance values, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    values: Vec<f64>,
    max_dim: usize,
    max_radius: f64,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.simplices[i].dim()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&Simplex, f64)> + '_ {
        self.simplices.iter().zip(self.values.iter().copied())
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    /// Number of vertices (dimension-0 simplices).
    pub fn n_vertices(&self) -> usize {
        self.simplices.iter().filter(|s| s.dim() == 0).count()
    }

    /// One line per simplex: `value<TAB>v0,v1,...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.iter() {
            let _ = writeln!(out, "{v:?}\t{s}");
        }
        out
    }
}

/// `min_i max_j d(i, j)`: past this radius the Rips complex is a cone.
pub fn enclosing_radius(dm: &DistanceMatrix) -> f64 {
    (0..dm.n())
        .map(|i| dm.row(i).iter().copied().fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

pub fn build_rips(dm: &DistanceMatrix, max_dim: usize, radius: Radius) -> Result<Filtration> {
    build_rips_limited(dm, max_dim, radius, DEFAULT_DIM_LIMIT)
}

/// [`build_rips`] with a caller-chosen guard on the simplex dimension.
pub fn build_rips_limited(
    dm: &DistanceMatrix,
    max_dim: usize,
    radius: Radius,
    dim_limit: usize,
) -> Result<Filtration> {
    if max_dim > dim_limit {
        return Err(Error::InvalidArgument(format!(
            "max_dim {max_dim} exceeds the limit of {dim_limit}"
        )));
    }
    let max_radius = radius.resolve(dm)?;
    let n = dm.n();
    if n > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!("{n} points is too many")));
    }

    // Upper neighbours within the radius; `adjacent` answers clique checks.
    let mut upper: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut adjacent = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dm.get(i, j) <= max_radius {
                upper[i].push(j as u32);
                adjacent[i * n + j] = true;
                adjacent[j * n + i] = true;
            }
        }
    }

    let mut entries: Vec<(f64, Simplex)> =
        (0..n as u32).map(|v| (0.0, Simplex::vertex(v))).collect();
    let mut frontier: Vec<(f64, Simplex)> = entries.clone();
    for _ in 1..=max_dim {
        let mut next = Vec::new();
        for (value, s) in &frontier {
            let last = *s.vertices().last().unwrap() as usize;
            'cand: for &v in &upper[last] {
                let v_us = v as usize;
                let mut val = *value;
                for &u in s.vertices() {
                    let u = u as usize;
                    if !adjacent[u * n + v_us] {
                        continue 'cand;
                    }
                    val = val.max(dm.get(u, v_us));
                }
                next.push((val, s.with_vertex(v)));
            }
        }
        if next.is_empty() {
            break;
        }
        entries.extend(next.iter().cloned());
        frontier = next;
    }

    entries.sort_unstable_by(|a, b| canonical_cmp(a.0, &a.1, b.0, &b.1));
    let (values, simplices) = entries.into_iter().unzip();
    Ok(Filtration {
        simplices,
        values,
        max_dim,
        max_radius,
    })
}

fn canonical_cmp(va: f64, a: &Simplex, vb: f64, b: &Simplex) -> Ordering {
    va.total_cmp(&vb)
        .then(a.dim().cmp(&b.dim()))
        .then_with(|| a.vertices().cmp(b.vertices()))
}
