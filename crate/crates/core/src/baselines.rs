//! Greedy nearest-neighbour construction and 2-opt / 3-opt local search.
//!
//! Both local searches are best-improvement: every pass scans the whole
//! neighbourhood and applies the single best move, stopping once no move
//! shortens the tour by more than [`IMPROVEMENT_EPS`].

use crate::instance::DistanceMatrix;
use crate::tour::Tour;

pub const IMPROVEMENT_EPS: f64 = 1e-12;

/// From `start`, repeatedly move to the nearest unvisited city (lowest index
/// on ties), then close the loop.
pub fn greedy_nearest_neighbor(m: &DistanceMatrix, start: usize) -> Tour {
    let n = m.n();
    assert!(start < n, "start city {start} out of range for {n} cities");
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[current] = true;
    order.push(current);
    while order.len() < n {
        let mut next = None;
        let mut nearest = f64::INFINITY;
        for (city, &seen) in visited.iter().enumerate() {
            if !seen && m.get(current, city) < nearest {
                nearest = m.get(current, city);
                next = Some(city);
            }
        }
        current = next.expect("an unvisited city remains");
        visited[current] = true;
        order.push(current);
    }
    Tour::from_order_unchecked(order)
}

/// Change in length from reversing `order[i+1..=j]`, i.e. replacing edges
/// `(a,b)` and `(c,d)` by `(a,c)` and `(b,d)`.
fn two_opt_delta(m: &DistanceMatrix, order: &[usize], i: usize, j: usize) -> f64 {
    let n = order.len();
    let (a, b) = (order[i], order[i + 1]);
    let (c, d) = (order[j], order[(j + 1) % n]);
    m.get(a, c) + m.get(b, d) - m.get(a, b) - m.get(c, d)
}

pub fn two_opt(m: &DistanceMatrix, t: &Tour) -> Tour {
    let mut order = t.order().to_vec();
    let n = order.len();
    if n < 4 {
        return t.clone();
    }
    loop {
        let mut best = (-IMPROVEMENT_EPS, None);
        for i in 0..n - 2 {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let delta = two_opt_delta(m, &order, i, j);
                if delta < best.0 {
                    best = (delta, Some((i, j)));
                }
            }
        }
        match best.1 {
            Some((i, j)) => order[i + 1..=j].reverse(),
            None => break,
        }
    }
    Tour::from_order_unchecked(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    B,
    BRev,
    C,
    CRev,
}

/// The seven non-identity ways to reconnect `a [B] [C] f`.
const RECONNECTIONS: [(Piece, Piece); 7] = [
    (Piece::BRev, Piece::C),
    (Piece::B, Piece::CRev),
    (Piece::BRev, Piece::CRev),
    (Piece::C, Piece::B),
    (Piece::C, Piece::BRev),
    (Piece::CRev, Piece::B),
    (Piece::CRev, Piece::BRev),
];

struct Cut<'a> {
    order: &'a [usize],
    i: usize,
    j: usize,
    k: usize,
}

impl Cut<'_> {
    fn ends(&self, piece: Piece) -> (usize, usize) {
        let o = self.order;
        match piece {
            Piece::B => (o[self.i + 1], o[self.j]),
            Piece::BRev => (o[self.j], o[self.i + 1]),
            Piece::C => (o[self.j + 1], o[self.k]),
            Piece::CRev => (o[self.k], o[self.j + 1]),
        }
    }

    fn delta(&self, m: &DistanceMatrix, (x, y): (Piece, Piece)) -> f64 {
        let n = self.order.len();
        let a = self.order[self.i];
        let f = self.order[(self.k + 1) % n];
        let (x0, x1) = self.ends(x);
        let (y0, y1) = self.ends(y);
        let removed = m.get(a, self.order[self.i + 1])
            + m.get(self.order[self.j], self.order[self.j + 1])
            + m.get(self.order[self.k], f);
        m.get(a, x0) + m.get(x1, y0) + m.get(y1, f) - removed
    }

    fn extend(&self, out: &mut Vec<usize>, piece: Piece) {
        let o = self.order;
        match piece {
            Piece::B => out.extend_from_slice(&o[self.i + 1..=self.j]),
            Piece::BRev => out.extend(o[self.i + 1..=self.j].iter().rev()),
            Piece::C => out.extend_from_slice(&o[self.j + 1..=self.k]),
            Piece::CRev => out.extend(o[self.j + 1..=self.k].iter().rev()),
        }
    }

    fn apply(&self, (x, y): (Piece, Piece)) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order.len());
        out.extend_from_slice(&self.order[..=self.i]);
        self.extend(&mut out, x);
        self.extend(&mut out, y);
        out.extend_from_slice(&self.order[self.k + 1..]);
        out
    }
}

/// Best-improvement 3-opt over all edge triples and all seven reconnections.
/// Tours with fewer than five cities are handed to [`two_opt`].
pub fn three_opt(m: &DistanceMatrix, t: &Tour) -> Tour {
    let n = t.len();
    if n < 5 {
        return two_opt(m, t);
    }
    let mut order = t.order().to_vec();
    loop {
        let mut best_delta = -IMPROVEMENT_EPS;
        let mut best_move = None;
        for i in 0..n - 2 {
            for j in (i + 1)..n - 1 {
                for k in (j + 1)..n {
                    let cut = Cut {
                        order: &order,
                        i,
                        j,
                        k,
                    };
                    for (r, &recon) in RECONNECTIONS.iter().enumerate() {
                        let delta = cut.delta(m, recon);
                        if delta < best_delta {
                            best_delta = delta;
                            best_move = Some((i, j, k, r));
                        }
                    }
                }
            }
        }
        match best_move {
            Some((i, j, k, r)) => {
                order = Cut {
                    order: &order,
                    i,
                    j,
                    k,
                }
                .apply(RECONNECTIONS[r]);
            }
            None => break,
        }
    }
    Tour::from_order_unchecked(order)
}
