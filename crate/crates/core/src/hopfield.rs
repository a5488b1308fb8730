//! Discrete Hopfield network for the travelling salesman problem.
//!
//! The network has one binary unit per (city, visit position) pair, laid out
//! as an `n×n` activation grid with rows for cities and columns for positions.
//! Its energy is the penalty function
//!
//! ```text
//! E = A/2 Σx Σi Σj≠i v[x,i] v[x,j]
//!   + B/2 Σi Σx Σy≠x v[x,i] v[y,i]
//!   + C/2 (Σx Σi v[x,i] − n)²
//!   + D/2 Σx Σy≠x Σi d[x,y] v[x,i] (v[y,i+1] + v[y,i−1])
//! ```
//!
//! with positions taken modulo `n`. The connection weights are chosen so that
//! `E = −½ vᵀWv − bᵀv + C n²/2` on binary states, with `W` symmetric and zero
//! on the diagonal. The self-interaction of the count term is folded into the
//! bias (`b = C (n − ½)`), which makes every asynchronous threshold update at
//! threshold 0 a non-increasing step in `E`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::DistanceMatrix;
use crate::tour::{matrix_to_tour, Tour, TourMatrix};

/// Binary unit states; identical layout to [`TourMatrix`].
pub type ActivationGrid = TourMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfieldParams {
    /// Penalty for one city occupying several positions.
    pub a_pen: f64,
    /// Penalty for one position holding several cities.
    pub b_pen: f64,
    /// Penalty on the total number of active units differing from `n`.
    pub c_pen: f64,
    /// Weight of the tour-length term.
    pub d_pen: f64,
    pub threshold: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for HopfieldParams {
    fn default() -> Self {
        HopfieldParams {
            a_pen: 100.0,
            b_pen: 100.0,
            c_pen: 90.0,
            d_pen: 100.0,
            threshold: 0.0,
            max_sweeps: 200,
            seed: 0,
        }
    }
}

/// Symmetric `n²×n²` connection weights plus per-unit bias.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
    bias: Vec<f64>,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn units(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.units() + v]
    }

    #[inline]
    pub fn bias(&self, u: usize) -> f64 {
        self.bias[u]
    }

    /// `Σv w[u][v]·g[v] + bias[u]`.
    pub fn net_input(&self, g: &ActivationGrid, u: usize) -> f64 {
        let units = self.units();
        let row = &self.w[u * units..(u + 1) * units];
        let mut net = self.bias[u];
        for (v, &wv) in row.iter().enumerate() {
            if g.get(v / self.n, v % self.n) == 1 {
                net += wv;
            }
        }
        net
    }

    /// `−½ gᵀWg − bᵀg`, which differs from [`energy`] by the constant `C n²/2`.
    pub fn network_energy(&self, g: &ActivationGrid) -> f64 {
        let active: Vec<usize> = (0..self.units())
            .filter(|&u| g.get(u / self.n, u % self.n) == 1)
            .collect();
        let mut quad = 0.0;
        for &u in &active {
            for &v in &active {
                quad += self.weight(u, v);
            }
        }
        let lin: f64 = active.iter().map(|&u| self.bias[u]).sum();
        -0.5 * quad - lin
    }
}

#[inline]
fn unit_index(n: usize, city: usize, position: usize) -> usize {
    city * n + position
}

pub fn build_weights(m: &DistanceMatrix, p: &HopfieldParams) -> WeightMatrix {
    let n = m.n();
    let units = n * n;
    let mut w = vec![0.0; units * units];
    for x in 0..n {
        for i in 0..n {
            let u = unit_index(n, x, i);
            for y in 0..n {
                for j in 0..n {
                    let v = unit_index(n, y, j);
                    if u == v {
                        continue;
                    }
                    let mut wt = -p.c_pen;
                    if x == y {
                        wt -= p.a_pen;
                    }
                    if i == j {
                        wt -= p.b_pen;
                    }
                    let adjacent =
                        usize::from(j == (i + 1) % n) + usize::from(j == (i + n - 1) % n);
                    if adjacent > 0 {
                        wt -= p.d_pen * m.get(x, y) * adjacent as f64;
                    }
                    w[u * units + v] = wt;
                }
            }
        }
    }
    let b = p.c_pen * (n as f64 - 0.5);
    WeightMatrix {
        n,
        w,
        bias: vec![b; units],
    }
}

/// The four unweighted sums of the energy function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms {
    /// Pairs of active units sharing a city.
    pub row: f64,
    /// Pairs of active units sharing a position.
    pub column: f64,
    /// `(active − n)²`.
    pub count: f64,
    /// Distance between cities in adjacent positions, each edge counted from both ends.
    pub distance: f64,
}

pub fn energy_terms(g: &ActivationGrid, m: &DistanceMatrix) -> EnergyTerms {
    let n = g.n();
    let mut row = 0.0;
    let mut column = 0.0;
    for k in 0..n {
        let r: f64 = (0..n).map(|i| f64::from(g.get(k, i))).sum();
        let c: f64 = (0..n).map(|x| f64::from(g.get(x, k))).sum();
        row += r * r - r;
        column += c * c - c;
    }
    let ones = g.ones() as f64;
    let count = (ones - n as f64).powi(2);
    let mut distance = 0.0;
    for x in 0..n {
        for i in 0..n {
            if g.get(x, i) == 0 {
                continue;
            }
            let next = (i + 1) % n;
            let prev = (i + n - 1) % n;
            for y in (0..n).filter(|&y| y != x) {
                let neighbours = g.get(y, next) + g.get(y, prev);
                if neighbours > 0 {
                    distance += m.get(x, y) * f64::from(neighbours);
                }
            }
        }
    }
    EnergyTerms {
        row,
        column,
        count,
        distance,
    }
}

pub fn energy(g: &ActivationGrid, m: &DistanceMatrix, p: &HopfieldParams) -> f64 {
    let t = energy_terms(g, m);
    0.5 * (p.a_pen * t.row + p.b_pen * t.column + p.c_pen * t.count + p.d_pen * t.distance)
}

/// New activation of `(city, position)`: 1 when its net input reaches the threshold.
pub fn unit_update(
    g: &ActivationGrid,
    w: &WeightMatrix,
    unit: (usize, usize),
    threshold: f64,
) -> u8 {
    let net = w.net_input(g, unit_index(g.n(), unit.0, unit.1));
    u8::from(net >= threshold)
}

pub fn decode(g: &ActivationGrid) -> Option<Tour> {
    matrix_to_tour(g).ok()
}

/// Each unit independently active with probability `1/n`.
pub fn random_grid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ActivationGrid {
    let mut g = ActivationGrid::zeros(n);
    let p = 1.0 / n as f64;
    for x in 0..n {
        for i in 0..n {
            if rng.gen::<f64>() < p {
                g.set(x, i, 1);
            }
        }
    }
    g
}

/// One asynchronous unit update, as seen by a [`run_observed`] observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitUpdate {
    pub sweep: usize,
    pub city: usize,
    pub position: usize,
    pub before: u8,
    pub after: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfieldResult {
    pub grid: ActivationGrid,
    pub converged: bool,
    pub valid: bool,
    pub tour: Option<Tour>,
    /// Closed length of `tour` under the matrix the network ran on.
    pub length: Option<f64>,
    pub initial_energy: f64,
    /// Energy after each sweep.
    pub energy_trace: Vec<f64>,
    pub sweeps_used: usize,
}

pub fn run(
    m: &DistanceMatrix,
    p: &HopfieldParams,
    init: Option<&ActivationGrid>,
) -> HopfieldResult {
    run_observed(m, p, init, |_, _| {})
}

/// [`run`], calling `observe` after every unit update with the grid as it
/// stands after that update.
pub fn run_observed<F>(
    m: &DistanceMatrix,
    p: &HopfieldParams,
    init: Option<&ActivationGrid>,
    mut observe: F,
) -> HopfieldResult
where
    F: FnMut(UnitUpdate, &ActivationGrid),
{
    let n = m.n();
    let weights = build_weights(m, p);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut grid = match init {
        Some(g) => {
            assert_eq!(g.n(), n, "initial grid size does not match the matrix");
            g.clone()
        }
        None => random_grid(n, &mut rng),
    };

    let initial_energy = energy(&grid, m, p);
    let mut energy_trace = Vec::new();
    let mut order: Vec<usize> = (0..n * n).collect();
    let mut converged = false;
    let mut sweeps_used = 0;

    while sweeps_used < p.max_sweeps {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            let (city, position) = (u / n, u % n);
            let before = grid.get(city, position);
            let after = unit_update(&grid, &weights, (city, position), p.threshold);
            if after != before {
                grid.set(city, position, after);
                changed = true;
            }
            observe(
                UnitUpdate {
                    sweep: sweeps_used,
                    city,
                    position,
                    before,
                    after,
                },
                &grid,
            );
        }
        sweeps_used += 1;
        energy_trace.push(energy(&grid, m, p));
        if !changed {
            converged = true;
            break;
        }
    }

    let tour = if converged { decode(&grid) } else { None };
    let length = tour.as_ref().map(|t| m.closed_length(t.order()));
    HopfieldResult {
        valid: tour.is_some(),
        grid,
        converged,
        tour,
        length,
        initial_energy,
        energy_trace,
        sweeps_used,
    }
}

/// Rows of space-separated 0/1 digits, one line per city.
pub fn grid_to_text(g: &ActivationGrid) -> String {
    let mut out = String::with_capacity(g.n() * (2 * g.n() + 1));
    for row in g.rows() {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn grid_from_text(text: &str) -> crate::Result<ActivationGrid> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(r, line)| {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| match s {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(crate::Error::InvalidArgument(format!(
                        "grid line {}: expected 0 or 1, found {other:?}",
                        r + 1
                    ))),
                })
                .collect::<crate::Result<Vec<u8>>>()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    ActivationGrid::from_rows(&rows)
}
