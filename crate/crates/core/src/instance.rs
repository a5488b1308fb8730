//! City sets, pairwise distances and the on-disk instance format.
//!
//! Instances are stored as pretty-printed JSON:
//!
//! ```json
//! {
//!   "id": "paper8",
//!   "seed": null,
//!   "cities": [{ "label": "A", "x": 2.0, "y": 3.0 }, ...],
//!   "matrix": [[0.0, 4.24, ...], ...]
//! }
//! ```
//!
//! `matrix` is optional. When present it replaces the Euclidean distances and
//! is validated (square, symmetric, zero diagonal, finite and nonnegative)
//! rather than recomputed. Floats are written in shortest round-trip form, so
//! reloading reproduces every coordinate bit for bit.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tour::Tour;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct City {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

impl City {
    pub fn new(label: impl Into<String>, x: f64, y: f64) -> Self {
        City {
            label: label.into(),
            x,
            y,
        }
    }

    pub fn distance_to(&self, other: &City) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A validated city set, optionally carrying an explicit distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    id: String,
    cities: Vec<City>,
    seed: Option<u64>,
    matrix: Option<DistanceMatrix>,
}

impl Instance {
    pub fn new(id: impl Into<String>, cities: Vec<City>) -> Result<Self> {
        Self::build(id.into(), cities, None, None)
    }

    /// Instance whose distances come from `matrix` instead of the coordinates.
    pub fn with_matrix(
        id: impl Into<String>,
        cities: Vec<City>,
        matrix: DistanceMatrix,
    ) -> Result<Self> {
        Self::build(id.into(), cities, None, Some(matrix))
    }

    fn build(
        id: String,
        cities: Vec<City>,
        seed: Option<u64>,
        matrix: Option<DistanceMatrix>,
    ) -> Result<Self> {
        if cities.len() < 3 {
            return Err(Error::InvalidSize(cities.len()));
        }
        let mut labels = HashSet::with_capacity(cities.len());
        for (i, c) in cities.iter().enumerate() {
            if !c.x.is_finite() || !c.y.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "city {i} ({}) has a non-finite coordinate",
                    c.label
                )));
            }
            if !labels.insert(c.label.as_str()) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate city label {:?}",
                    c.label
                )));
            }
        }
        if let Some(m) = &matrix {
            if m.n() != cities.len() {
                return Err(Error::InvalidMatrix(format!(
                    "matrix is {0}x{0} but the instance has {1} cities",
                    m.n(),
                    cities.len()
                )));
            }
        }
        Ok(Instance {
            id,
            cities,
            seed,
            matrix,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cities(&self) -> &[City] {
        &self.cities
    }

    pub fn len(&self) -> usize {
        self.cities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn explicit_matrix(&self) -> Option<&DistanceMatrix> {
        self.matrix.as_ref()
    }

    /// Pairwise distances: the explicit matrix if one was supplied, otherwise
    /// Euclidean distances between the coordinates.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        match &self.matrix {
            Some(m) => m.clone(),
            None => DistanceMatrix::euclidean(&self.cities),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            id: self.id.clone(),
            seed: self.seed,
            cities: self.cities.clone(),
            matrix: self.matrix.as_ref().map(|m| m.rows()),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "<memory>".into(),
            message: e.to_string(),
        })?;
        let matrix = file
            .matrix
            .map(|rows| DistanceMatrix::from_rows(&rows))
            .transpose()?;
        Self::build(file.id, file.cities, file.seed, matrix)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    id: String,
    #[serde(default)]
    seed: Option<u64>,
    cities: Vec<City>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
}

/// `n` cities drawn uniformly from `[0, bound]²`, labelled `C1..Cn`.
pub fn generate_random_instance(n: usize, seed: u64, bound: f64) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidSize(n));
    }
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bound must be a positive finite number, got {bound}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cities = (0..n)
        .map(|i| {
            let x = rng.gen_range(0.0..=bound);
            let y = rng.gen_range(0.0..=bound);
            City::new(format!("C{}", i + 1), x, y)
        })
        .collect();
    Instance::build(format!("random-n{n}-s{seed}"), cities, Some(seed), None)
}

/// Symmetric, zero-diagonal matrix of nonnegative finite distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn euclidean(cities: &[City]) -> Self {
        let n = cities.len();
        let mut d = vec![0.0; n * n];
        for x in 0..n {
            for y in (x + 1)..n {
                let v = cities[x].distance_to(&cities[y]);
                d[x * n + y] = v;
                d[y * n + x] = v;
            }
        }
        DistanceMatrix { n, d }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            d.extend_from_slice(row);
        }
        Self::from_flat(n, d)
    }

    /// Row-major `n*n` entries.
    pub fn from_flat(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "{} entries cannot form a {n}x{n} matrix",
                d.len()
            )));
        }
        for x in 0..n {
            if d[x * n + x] != 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry ({x},{x}) is {}",
                    d[x * n + x]
                )));
            }
            for y in 0..n {
                let v = d[x * n + y];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({x},{y}) = {v} is not a finite nonnegative number"
                    )));
                }
                if v != d[y * n + x] {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({x},{y}) and ({y},{x}) differ"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.n + y]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Every entry divided by the largest one, so the maximum becomes exactly
    /// 1.0 and normalizing twice is a no-op.
    pub fn normalized(&self) -> Result<Self> {
        let max = self.max();
        if max <= 0.0 {
            return Err(Error::DegenerateInstance);
        }
        Ok(DistanceMatrix {
            n: self.n,
            d: self.d.iter().map(|v| v / max).collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DistanceMatrix {
            n: self.n,
            d: self.d.iter().map(|v| v * factor).collect(),
        }
    }

    /// Closed length: consecutive pairs plus the edge back to the first city.
    pub fn tour_length(&self, tour: &Tour) -> Result<f64> {
        if tour.len() != self.n {
            return Err(Error::InvalidTour(format!(
                "tour visits {} cities but the matrix has {}",
                tour.len(),
                self.n
            )));
        }
        Ok(self.closed_length(tour.order()))
    }

    /// Closed length of a raw order. The caller guarantees a valid permutation.
    pub(crate) fn closed_length(&self, order: &[usize]) -> f64 {
        let n = order.len();
        let mut total = 0.0;
        for i in 0..n {
            total += self.get(order[i], order[(i + 1) % n]);
        }
        total
    }
}

pub fn distance_matrix(inst: &Instance) -> DistanceMatrix {
    inst.distance_matrix()
}

pub fn normalize_distances(m: &DistanceMatrix) -> Result<DistanceMatrix> {
    m.normalized()
}

pub fn tour_length(m: &DistanceMatrix, t: &Tour) -> Result<f64> {
    m.tour_length(t)
}
