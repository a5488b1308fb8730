//! Named instances shipped with the library.

use crate::error::{Error, Result};
use crate::instance::{City, DistanceMatrix, Instance};
use crate::tour::Tour;

pub const NAMES: [&str; 3] = ["cityset1", "paper8", "matrix4"];

const CITYSET1: [(&str, f64, f64); 10] = [
    ("A", 0.25, 0.16),
    ("B", 0.85, 0.35),
    ("C", 0.65, 0.24),
    ("D", 0.70, 0.50),
    ("E", 0.15, 0.22),
    ("F", 0.25, 0.78),
    ("G", 0.40, 0.45),
    ("H", 0.90, 0.65),
    ("I", 0.55, 0.90),
    ("J", 0.60, 0.28),
];

const PAPER8: [(&str, f64, f64); 8] = [
    ("A", 2.0, 3.0),
    ("B", 5.0, 6.0),
    ("C", 8.0, 5.0),
    ("D", 4.0, 7.0),
    ("E", 6.0, 4.0),
    ("F", 2.0, 1.0),
    ("G", 6.0, 7.0),
    ("H", 5.0, 2.0),
];

const MATRIX4: [[f64; 4]; 4] = [
    [0.0, 15.0, 13.0, 17.0],
    [15.0, 0.0, 14.0, 27.0],
    [13.0, 14.0, 0.0, 25.0],
    [17.0, 27.0, 25.0, 0.0],
];

fn cities(table: &[(&str, f64, f64)]) -> Vec<City> {
    table.iter().map(|&(l, x, y)| City::new(l, x, y)).collect()
}

/// The ten-city benchmark set with coordinates in the unit square.
pub fn cityset1() -> Instance {
    Instance::new("cityset1", cities(&CITYSET1)).expect("built-in instance is valid")
}

/// Eight cities on an integer grid.
pub fn paper8() -> Instance {
    Instance::new("paper8", cities(&PAPER8)).expect("built-in instance is valid")
}

/// Four cities given by an explicit distance matrix. The coordinates only
/// position the cities for plotting.
pub fn matrix4() -> Instance {
    let rows: Vec<Vec<f64>> = MATRIX4.iter().map(|r| r.to_vec()).collect();
    let m = DistanceMatrix::from_rows(&rows).expect("built-in matrix is valid");
    let placement = [
        ("A", 0.0, 0.0),
        ("B", 1.0, 0.0),
        ("C", 1.0, 1.0),
        ("D", 0.0, 1.0),
    ];
    Instance::with_matrix("matrix4", cities(&placement), m).expect("built-in instance is valid")
}

pub fn by_name(name: &str) -> Result<Instance> {
    match name {
        "cityset1" => Ok(cityset1()),
        "paper8" => Ok(paper8()),
        "matrix4" => Ok(matrix4()),
        other => Err(Error::InvalidArgument(format!(
            "unknown built-in instance {other:?} (known: {})",
            NAMES.join(", ")
        ))),
    }
}

/// The three recorded `paper8` visiting orders: the initial listing, the
/// order after annealing, and the final order after the network stage.
pub fn paper8_recorded_orders() -> [Tour; 3] {
    [
        Tour::identity(8),
        Tour::from_order_unchecked(vec![6, 3, 2, 4, 5, 7, 0, 1]),
        Tour::from_order_unchecked(vec![7, 1, 3, 4, 6, 5, 0, 2]),
    ]
}

/// Closed lengths printed alongside [`paper8_recorded_orders`].
pub const PAPER8_RECORDED_LENGTHS: [f64; 3] = [35.9550, 32.6606, 31.7981];
