//! Multiplet bookkeeping: admissible pseudospins of an `N`-qubit register and
//! how many independent copies of each appear.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Label of one multiplet state `|j, m>` together with its copy index, which
/// distinguishes the independent multiplets sharing the same `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PseudospinLabel {
    pub j: HalfInt,
    pub m: HalfInt,
    pub copy: usize,
}

impl PseudospinLabel {
    pub fn new(j: HalfInt, m: HalfInt, copy: usize) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::Domain(format!("negative pseudospin j={j}")));
        }
        if m.twice().abs() > j.twice() {
            return Err(Error::Domain(format!("|m|={m} exceeds j={j}")));
        }
        if (j.twice() - m.twice()) % 2 != 0 {
            return Err(Error::Domain(format!("j={j} and m={m} differ by a non-integer")));
        }
        Ok(PseudospinLabel { j, m, copy })
    }
}

/// Returns the admissible pseudospins of `n` qubits in descending order:
/// `n/2, n/2 - 1, ..., 0 or 1/2`.
pub fn admissible_j(n: usize) -> Vec<HalfInt> {
    let top = n as i32;
    (0..=top)
        .rev()
        .filter(|t| (top - t) % 2 == 0)
        .map(HalfInt::from_twice)
        .collect()
}

pub fn is_admissible(n: usize, j: HalfInt) -> bool {
    let t = j.twice();
    t >= 0 && t <= n as i32 && (n as i32 - t) % 2 == 0
}

/// Number of independent spin-`j` multiplets of `n` qubits:
/// `(2j+1) n! / ((n/2 - j)! (n/2 + j + 1)!)`.
pub fn abundance(n: usize, j: HalfInt) -> Result<u128> {
    if n == 0 {
        return Err(Error::Domain("abundance needs at least one qubit".into()));
    }
    if !is_admissible(n, j) {
        return Err(Error::Domain(format!("j={j} is not admissible for n={n}")));
    }
    // With 2j = t: (t+1) * n! / (((n-t)/2)! * ((n+t)/2 + 1)!)
    let t = j.twice() as u128;
    let n = n as u128;
    let lower = (n - t) / 2;
    let upper = (n + t) / 2 + 1;
    let numerator = (t + 1) * factorial(n);
    Ok(numerator / (factorial(lower) * factorial(upper)))
}

fn factorial(n: u128) -> u128 {
    (1..=n).product::<u128>().max(1)
}

/// Per-`j` multiplet counts of an `n`-qubit register, descending in `j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultipletTable {
    pub n_qubits: usize,
    /// `(j, abundance)` rows, descending `j`.
    pub rows: Vec<(HalfInt, u128)>,
}

impl MultipletTable {
    /// `sum_j (2j+1) Ab_{N,j}`, which must equal `2^N` exactly.
    pub fn dimension_sum(&self) -> u128 {
        self.rows
            .iter()
            .map(|(j, ab)| (j.twice() as u128 + 1) * ab)
            .sum()
    }
}

pub fn multiplet_table(n: usize) -> Result<MultipletTable> {
    if n == 0 {
        return Err(Error::Domain("multiplet table needs at least one qubit".into()));
    }
    let rows = admissible_j(n)
        .into_iter()
        .map(|j| abundance(n, j).map(|ab| (j, ab)))
        .collect::<Result<Vec<_>>>()?;
    let table = MultipletTable { n_qubits: n, rows };
    debug_assert_eq!(table.dimension_sum(), 1u128 << n);
    Ok(table)
}
