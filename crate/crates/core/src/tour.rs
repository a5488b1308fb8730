//! Tours, their 0/1 tour-matrix encoding and the exhaustive exact solver.

use std::fmt;

use crate::error::{Error, MatrixDefect, Result};
use crate::instance::DistanceMatrix;

/// Largest instance [`brute_force_optimum`] accepts.
pub const MAX_BRUTE_FORCE_CITIES: usize = 12;

/// A closed visiting order: a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n {
                return Err(Error::InvalidTour(format!(
                    "city index {c} out of range for {n} cities"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidTour(format!("city {c} visited twice")));
            }
        }
        Ok(Tour(order))
    }

    /// `0, 1, …, n-1`.
    pub fn identity(n: usize) -> Self {
        Tour((0..n).collect())
    }

    /// Caller guarantees `order` is a permutation.
    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_order(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn canonical(&self) -> Tour {
        canonicalize(self)
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `n×n` 0/1 matrix: rows are cities, columns are visit positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourMatrix {
    n: usize,
    v: Vec<u8>,
}

impl TourMatrix {
    pub fn zeros(n: usize) -> Self {
        TourMatrix {
            n,
            v: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(TourMatrix {
            n,
            v: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, city: usize, position: usize) -> u8 {
        self.v[city * self.n + position]
    }

    #[inline]
    pub fn set(&mut self, city: usize, position: usize, value: u8) {
        self.v[city * self.n + position] = value;
    }

    pub fn ones(&self) -> usize {
        self.v.iter().map(|&e| usize::from(e)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.v.chunks(self.n).map(<[u8]>::to_vec).collect()
    }

    /// First violated condition, checked in the order binary, rows, columns, count.
    pub fn defect(&self) -> Option<MatrixDefect> {
        let n = self.n;
        if self.v.iter().any(|&e| e > 1) {
            return Some(MatrixDefect::NonBinary);
        }
        if let Some(r) = (0..n).find(|&r| (0..n).map(|c| self.get(r, c)).sum::<u8>() != 1) {
            return Some(MatrixDefect::Row(r));
        }
        if let Some(c) = (0..n).find(|&c| (0..n).map(|r| self.get(r, c)).sum::<u8>() != 1) {
            return Some(MatrixDefect::Column(c));
        }
        let ones = self.ones();
        if ones != n {
            return Some(MatrixDefect::Count { ones, expected: n });
        }
        None
    }

    pub fn is_valid_permutation(&self) -> bool {
        self.defect().is_none()
    }
}

pub fn is_valid_permutation_matrix(tm: &TourMatrix) -> bool {
    tm.is_valid_permutation()
}

pub fn tour_to_matrix(t: &Tour) -> TourMatrix {
    let mut m = TourMatrix::zeros(t.len());
    for (position, &city) in t.order().iter().enumerate() {
        m.set(city, position, 1);
    }
    m
}

pub fn matrix_to_tour(tm: &TourMatrix) -> Result<Tour> {
    if let Some(defect) = tm.defect() {
        return Err(Error::InvalidTourMatrix(defect));
    }
    let n = tm.n();
    let order = (0..n)
        .map(|position| {
            (0..n)
                .find(|&city| tm.get(city, position) == 1)
                .expect("column holds exactly one 1")
        })
        .collect();
    Ok(Tour::from_order_unchecked(order))
}

/// Rotates the tour to start at city 0 and orients it so the smaller of 0's
/// two neighbours comes second.
pub fn canonicalize(t: &Tour) -> Tour {
    let order = t.order();
    let n = order.len();
    if n == 0 {
        return t.clone();
    }
    let start = order.iter().position(|&c| c == 0).unwrap_or(0);
    let mut out: Vec<usize> = (0..n).map(|k| order[(start + k) % n]).collect();
    if n > 2 && out[n - 1] < out[1] {
        out[1..].reverse();
    }
    Tour::from_order_unchecked(out)
}

/// Exact optimum by depth-first enumeration of canonical tours (city 0 first,
/// second city smaller than the last), pruning partial tours that already
/// reach the incumbent. Ties go to the lexicographically smallest canonical
/// tour.
pub fn brute_force_optimum(m: &DistanceMatrix) -> Result<(Tour, f64)> {
    let n = m.n();
    if n < 3 {
        return Err(Error::InvalidSize(n));
    }
    if n > MAX_BRUTE_FORCE_CITIES {
        return Err(Error::EnumerationTooLarge(n));
    }

    struct Search<'a> {
        m: &'a DistanceMatrix,
        n: usize,
        order: Vec<usize>,
        used: Vec<bool>,
        best: f64,
        best_order: Vec<usize>,
    }

    impl Search<'_> {
        fn descend(&mut self, partial: f64) {
            let depth = self.order.len();
            let last = self.order[depth - 1];
            if depth == self.n {
                if self.order[1] > self.order[self.n - 1] {
                    return;
                }
                let total = partial + self.m.get(last, self.order[0]);
                if total < self.best {
                    self.best = total;
                    self.best_order.clone_from(&self.order);
                }
                return;
            }
            for next in 1..self.n {
                if self.used[next] {
                    continue;
                }
                // the second city must leave a larger one for the last slot
                if depth == 1 && next == self.n - 1 {
                    continue;
                }
                let extended = partial + self.m.get(last, next);
                if extended >= self.best {
                    continue;
                }
                self.used[next] = true;
                self.order.push(next);
                self.descend(extended);
                self.order.pop();
                self.used[next] = false;
            }
        }
    }

    let mut search = Search {
        m,
        n,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: f64::INFINITY,
        best_order: Vec::new(),
    };
    search.order.push(0);
    search.used[0] = true;
    search.descend(0.0);
    Ok((Tour::from_order_unchecked(search.best_order), search.best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_matrix() -> TourMatrix {
        TourMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn identity_and_zero_matrices() {
        for n in 1..7 {
            assert!(is_valid_permutation_matrix(&TourMatrix::identity(n)));
            assert!(!is_valid_permutation_matrix(&TourMatrix::zeros(n)));
            assert_eq!(
                matrix_to_tour(&TourMatrix::identity(n)).unwrap(),
                Tour::identity(n)
            );
        }
    }

    #[test]
    fn figure_tour_matrix_decodes_to_b_a_d_c() {
        let m = figure_matrix();
        assert!(is_valid_permutation_matrix(&m));
        assert_eq!(matrix_to_tour(&m).unwrap().order(), &[1, 0, 3, 2]);
    }

    #[test]
    fn invalid_matrix_reports_condition() {
        let mut m = TourMatrix::identity(4);
        m.set(0, 1, 1);
        assert!(matches!(
            matrix_to_tour(&m),
            Err(Error::InvalidTourMatrix(MatrixDefect::Row(0)))
        ));
        let mut m = TourMatrix::identity(4);
        m.set(1, 1, 0);
        m.set(1, 0, 1);
        assert!(matches!(
            matrix_to_tour(&m),
            Err(Error::InvalidTourMatrix(MatrixDefect::Column(0)))
        ));
        let mut m = TourMatrix::identity(3);
        m.set(2, 2, 2);
        assert_eq!(m.defect(), Some(MatrixDefect::NonBinary));
    }

    #[test]
    fn tour_rejects_non_permutations() {
        assert!(Tour::new(vec![0, 1, 1]).is_err());
        assert!(Tour::new(vec![0, 3, 1]).is_err());
        assert!(Tour::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn canonicalize_rule() {
        // cycle 2-0-1-3: neighbours of 0 are 2 and 1, so 1 comes second
        let t = Tour::new(vec![2, 0, 1, 3]).unwrap();
        assert_eq!(canonicalize(&t).order(), &[0, 1, 3, 2]);
        let c = canonicalize(&t);
        assert_eq!(canonicalize(&c), c);
        let t = Tour::new(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(canonicalize(&t).order(), &[0, 2, 1, 3]);
    }

    #[test]
    fn brute_force_guards() {
        let m = DistanceMatrix::from_flat(13, vec![0.0; 169]).unwrap();
        assert!(matches!(
            brute_force_optimum(&m),
            Err(Error::EnumerationTooLarge(13))
        ));
        let m = DistanceMatrix::from_flat(2, vec![0.0; 4]).unwrap();
        assert!(matches!(
            brute_force_optimum(&m),
            Err(Error::InvalidSize(2))
        ));
    }

    #[test]
    fn uniform_matrix_optimum_is_n_times_c() {
        let n = 6;
        let c = 2.5;
        let d = (0..n * n)
            .map(|k| if k / n == k % n { 0.0 } else { c })
            .collect();
        let m = DistanceMatrix::from_flat(n, d).unwrap();
        let (t, len) = brute_force_optimum(&m).unwrap();
        assert_eq!(len, n as f64 * c);
        // tie-break: lexicographically smallest canonical tour
        assert_eq!(t, Tour::identity(n));
    }
}
