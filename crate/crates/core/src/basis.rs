//! Symmetry-adapted bases of the qubit register: the highest-weight
//! construction for any register size, the explicit small-register fixtures,
//! and the block-diagonalization report that certifies the decomposition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockHamiltonian, SystemParams};
use crate::collective::{self, collective_operators, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{eig_hermitian, vectors};
use crate::multiplet::{abundance, admissible_j, PseudospinLabel};
use crate::{blocks, CMatrix, C64};
#[cfg(test)]
use crate::tol;

/// Orthonormal multiplet basis of the `2^N` computational space.
///
/// Columns are grouped by descending `j`, then copy, then `m` descending from
/// `j` to `-j`, and obey the ladder convention
/// `J- |j,m,c> = nu~_{j,m-1} |j,m-1,c>`.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    pub n_qubits: usize,
    pub labels: Vec<PseudospinLabel>,
    /// `2^N x 2^N` unitary whose columns are the labeled states.
    pub matrix: CMatrix,
}

impl SymmetryBasis {
    pub fn column_of(&self, j: HalfInt, m: HalfInt, copy: usize) -> Option<Vec<C64>> {
        self.labels
            .iter()
            .position(|l| l.j == j && l.m == m && l.copy == copy)
            .map(|idx| self.matrix.column(idx))
    }

    /// Copies present for each `j`, descending `j`.
    pub fn multiplicities(&self) -> Vec<(HalfInt, usize)> {
        let mut out: Vec<(HalfInt, usize)> = Vec::new();
        for l in &self.labels {
            if l.m == l.j {
                match out.iter_mut().find(|(j, _)| *j == l.j) {
                    Some((_, c)) => *c += 1,
                    None => out.push((l.j, 1)),
                }
            }
        }
        out.sort_by_key(|row| std::cmp::Reverse(row.0));
        out
    }

    pub fn to_json(&self) -> SymmetryBasisJson {
        SymmetryBasisJson {
            n_qubits: self.n_qubits,
            states: self
                .labels
                .iter()
                .enumerate()
                .map(|(idx, l)| SymmetryStateJson {
                    j: l.j,
                    m: l.m,
                    copy: l.copy,
                    amplitudes: self
                        .matrix
                        .column(idx)
                        .iter()
                        .map(|c| [c.re, c.im])
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Serialization form: one record per basis state with `[re, im]` amplitude
/// pairs over the computational basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryBasisJson {
    pub n_qubits: usize,
    pub states: Vec<SymmetryStateJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryStateJson {
    pub j: HalfInt,
    pub m: HalfInt,
    pub copy: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

use crate::collective::weight_basis;

/// Highest-weight construction of the multiplet basis.
///
/// In each `Jz` weight space the kernel of the restricted `J+` consists of the
/// highest-weight vectors `j = m`.  A canonical orthonormal kernel basis comes
/// from the deterministic eigensolver, and repeated application of `J-` with
/// the exact ladder normalizers fills out each multiplet.
pub fn build_symmetry_basis(n: usize) -> Result<SymmetryBasis> {
    build_symmetry_basis_capped(n, DEFAULT_QUBIT_CAP)
}

pub fn build_symmetry_basis_capped(n: usize, cap: usize) -> Result<SymmetryBasis> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "register of {n} qubits exceeds the cap of {cap}"
        )));
    }
    let dim = 1usize << n;
    let mut labels = Vec::with_capacity(dim);
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(dim);

    for j in admissible_j(n) {
        let expected = abundance(n, j)? as usize;
        let highest = highest_weight_vectors(n, j)?;
        if highest.len() != expected {
            return Err(Error::Domain(format!(
                "found {} highest-weight vectors for j={j}, expected {expected}",
                highest.len()
            )));
        }
        for (copy, top) in highest.into_iter().enumerate() {
            let mut current = top;
            let mut m = j;
            loop {
                labels.push(PseudospinLabel { j, m, copy });
                columns.push(current.clone());
                if m.twice() <= -j.twice() {
                    break;
                }
                let below = HalfInt::from_twice(m.twice() - 2);
                let nu = blocks::nu_tilde(j, below)?;
                let lowered = collective::apply_j_minus(n, &current);
                current = vectors::scaled(&lowered, Complex64::new(1.0 / nu, 0.0));
                m = below;
            }
        }
    }

    let mut matrix = CMatrix::zeros(dim, dim);
    for (idx, col) in columns.iter().enumerate() {
        matrix.set_column(idx, col);
    }
    Ok(SymmetryBasis {
        n_qubits: n,
        labels,
        matrix,
    })
}

/// Canonical orthonormal basis of `ker(J+)` restricted to the weight space
/// `m = j`, embedded in the full `2^N` space.
fn highest_weight_vectors(n: usize, j: HalfInt) -> Result<Vec<Vec<C64>>> {
    let w = ((j.twice() + n as i32) / 2) as usize;
    let lower = weight_basis(n, w);
    if w == n {
        return Ok(vec![vectors::basis(1 << n, (1 << n) - 1)]);
    }
    let upper = weight_basis(n, w + 1);
    let upper_index: std::collections::HashMap<usize, usize> =
        upper.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    // J+ restricted to the weight space, as an upper x lower matrix.
    let mut a = CMatrix::zeros(upper.len(), lower.len());
    for (col, &b) in lower.iter().enumerate() {
        for q in 0..n {
            if !collective::bit(b, n, q) {
                let target = collective::flip_bit(b, n, q);
                let row = upper_index[&target];
                a[(row, col)] += Complex64::new(1.0, 0.0);
            }
        }
    }

    let gram = a.dagger().mul(&a)?;
    let eig = eig_hermitian(&gram)?;
    let scale = eig.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let mut kernel = Vec::new();
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam.abs() < 1e-8 * scale {
            let compact = eig.eigenvectors.column(idx);
            let mut full = vec![Complex64::new(0.0, 0.0); 1 << n];
            for (row, &b) in lower.iter().enumerate() {
                full[b] = compact[row];
            }
            kernel.push(full);
        }
    }
    Ok(kernel)
}

/// Explicit multiplet bases for two, three and four qubits.
///
/// The tables follow the published small-register states: root-of-unity
/// doublets for three qubits and the `T_1..T_3` / `S~_1, S~_2` choice for
/// four.  Upper doublet states of the three-qubit register carry an extra
/// sign so the whole table satisfies the `J-` ladder convention.
pub fn fixture_basis(n: usize) -> Result<SymmetryBasis> {
    match n {
        2 => Ok(assemble_fixture(2, fixture_two())),
        3 => Ok(assemble_fixture(3, fixture_three())),
        4 => Ok(assemble_fixture(4, fixture_four())),
        _ => Err(Error::Domain(format!(
            "fixture bases exist for 2, 3 and 4 qubits, not {n}"
        ))),
    }
}

type FixtureState = (i32, i32, usize, Vec<(usize, C64)>);

fn assemble_fixture(n: usize, states: Vec<FixtureState>) -> SymmetryBasis {
    let dim = 1usize << n;
    let mut labels = Vec::with_capacity(dim);
    let mut matrix = CMatrix::zeros(dim, dim);
    for (idx, (tj, tm, copy, amps)) in states.into_iter().enumerate() {
        labels.push(PseudospinLabel {
            j: HalfInt::from_twice(tj),
            m: HalfInt::from_twice(tm),
            copy,
        });
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for (b, amp) in amps {
            col[b] = amp;
        }
        vectors::normalize(&mut col);
        matrix.set_column(idx, &col);
    }
    SymmetryBasis {
        n_qubits: n,
        labels,
        matrix,
    }
}

fn re(x: f64) -> C64 {
    Complex64::new(x, 0.0)
}

fn phase(angle: f64) -> C64 {
    Complex64::from_polar(1.0, angle)
}

fn fixture_two() -> Vec<FixtureState> {
    vec![
        (2, 2, 0, vec![(0b11, re(1.0))]),
        (2, 0, 0, vec![(0b01, re(1.0)), (0b10, re(1.0))]),
        (2, -2, 0, vec![(0b00, re(1.0))]),
        (0, 0, 0, vec![(0b01, re(1.0)), (0b10, re(-1.0))]),
    ]
}

fn fixture_three() -> Vec<FixtureState> {
    use std::f64::consts::PI;
    let w = phase(2.0 * PI / 3.0);
    let wc = w.conj();
    let mut states = vec![
        (3, 3, 0, vec![(0b111, re(1.0))]),
        (3, 1, 0, vec![(0b011, re(1.0)), (0b101, re(1.0)), (0b110, re(1.0))]),
        (3, -1, 0, vec![(0b001, re(1.0)), (0b010, re(1.0)), (0b100, re(1.0))]),
        (3, -3, 0, vec![(0b000, re(1.0))]),
    ];
    // Root-of-unity doublets; the upper states are negated relative to the
    // bare table so that J- |1/2, 1/2, c> = + |1/2, -1/2, c|.
    states.push((1, 1, 0, vec![(0b011, re(-1.0)), (0b101, -w), (0b110, -wc)]));
    states.push((1, -1, 0, vec![(0b100, re(1.0)), (0b010, w), (0b001, wc)]));
    states.push((1, 1, 1, vec![(0b011, re(-1.0)), (0b101, -wc), (0b110, -w)]));
    states.push((1, -1, 1, vec![(0b100, re(1.0)), (0b010, wc), (0b001, w)]));
    states
}

fn fixture_four() -> Vec<FixtureState> {
    use std::f64::consts::PI;
    let i = Complex64::new(0.0, 1.0);
    let w = phase(2.0 * PI / 3.0);
    let wc = w.conj();
    // Global phase on the T1/T3 m=0 rows, as published.
    let eta = phase(-3.0 * PI / 4.0);
    let mut states = vec![
        (4, 4, 0, vec![(0b1111, re(1.0))]),
        (
            4,
            2,
            0,
            vec![(0b1110, re(1.0)), (0b1101, re(1.0)), (0b1011, re(1.0)), (0b0111, re(1.0))],
        ),
        (
            4,
            0,
            0,
            vec![
                (0b0011, re(1.0)),
                (0b0101, re(1.0)),
                (0b0110, re(1.0)),
                (0b1001, re(1.0)),
                (0b1010, re(1.0)),
                (0b1100, re(1.0)),
            ],
        ),
        (
            4,
            -2,
            0,
            vec![(0b0001, re(1.0)), (0b0010, re(1.0)), (0b0100, re(1.0)), (0b1000, re(1.0))],
        ),
        (4, -4, 0, vec![(0b0000, re(1.0))]),
    ];

    // Triplet T1
    states.push((
        2,
        2,
        0,
        vec![(0b0111, re(1.0)), (0b1011, -i), (0b1101, re(-1.0)), (0b1110, i)],
    ));
    states.push((
        2,
        0,
        0,
        vec![
            (0b0011, eta * i),
            (0b0110, eta * re(-1.0)),
            (0b1001, eta),
            (0b1100, eta * (-i)),
        ],
    ));
    states.push((
        2,
        -2,
        0,
        vec![(0b0001, -i), (0b0010, re(1.0)), (0b0100, i), (0b1000, re(-1.0))],
    ));
    // Triplet T2
    states.push((
        2,
        2,
        1,
        vec![(0b0111, re(1.0)), (0b1011, re(-1.0)), (0b1101, re(1.0)), (0b1110, re(-1.0))],
    ));
    states.push((2, 0, 1, vec![(0b0101, re(1.0)), (0b1010, re(-1.0))]));
    states.push((
        2,
        -2,
        1,
        vec![(0b0001, re(1.0)), (0b0010, re(-1.0)), (0b0100, re(1.0)), (0b1000, re(-1.0))],
    ));
    // Triplet T3
    states.push((
        2,
        2,
        2,
        vec![(0b0111, re(1.0)), (0b1011, i), (0b1101, re(-1.0)), (0b1110, -i)],
    ));
    states.push((
        2,
        0,
        2,
        vec![
            (0b0011, eta * re(-1.0)),
            (0b0110, eta * i),
            (0b1001, eta * (-i)),
            (0b1100, eta),
        ],
    ));
    states.push((
        2,
        -2,
        2,
        vec![(0b0001, i), (0b0010, re(1.0)), (0b0100, -i), (0b1000, re(-1.0))],
    ));
    // Root-of-unity singlets
    states.push((
        0,
        0,
        0,
        vec![
            (0b0011, re(1.0)),
            (0b0101, wc),
            (0b0110, w),
            (0b1001, w),
            (0b1010, wc),
            (0b1100, re(1.0)),
        ],
    ));
    states.push((
        0,
        0,
        1,
        vec![
            (0b0011, re(1.0)),
            (0b0101, w),
            (0b0110, wc),
            (0b1001, wc),
            (0b1010, w),
            (0b1100, re(1.0)),
        ],
    ));
    states
}

/// Residuals of the [`SymmetryBasis`] invariants, all of which must stay below
/// their stated tolerances.
#[derive(Clone, Debug, Serialize)]
pub struct BasisResiduals {
    pub unitarity: f64,
    pub j_squared: f64,
    pub j_z: f64,
    pub ladder: f64,
}

/// Measures unitarity, the `J^2` / `Jz` eigenvector property of every column,
/// and the ladder phase convention.
pub fn basis_residuals(basis: &SymmetryBasis) -> Result<BasisResiduals> {
    let n = basis.n_qubits;
    let ops = collective_operators(n)?;
    let unitarity = basis.matrix.unitarity_defect();

    let mut j_squared: f64 = 0.0;
    let mut j_z: f64 = 0.0;
    let mut ladder: f64 = 0.0;
    for (idx, label) in basis.labels.iter().enumerate() {
        let col = basis.matrix.column(idx);
        let jj = label.j.as_f64() * (label.j.as_f64() + 1.0);
        let jsq_col = ops.j_squared.apply(&col)?;
        let expect = vectors::scaled(&col, Complex64::new(jj, 0.0));
        j_squared = j_squared.max(vectors::max_abs_diff(&jsq_col, &expect));

        let jz_col = ops.j_z.apply(&col)?;
        let expect = vectors::scaled(&col, Complex64::new(label.m.as_f64(), 0.0));
        j_z = j_z.max(vectors::max_abs_diff(&jz_col, &expect));

        if label.m.twice() > -label.j.twice() {
            let below = HalfInt::from_twice(label.m.twice() - 2);
            let nu = blocks::nu_tilde(label.j, below)?;
            let lowered = collective::apply_j_minus(n, &col);
            let target = basis
                .column_of(label.j, below, label.copy)
                .ok_or_else(|| Error::Domain("ladder partner missing".into()))?;
            let expect = vectors::scaled(&target, Complex64::new(nu, 0.0));
            ladder = ladder.max(vectors::max_abs_diff(&lowered, &expect));
        }
    }
    Ok(BasisResiduals {
        unitarity,
        j_squared,
        j_z,
        ladder,
    })
}

/// Result of rotating the interaction Hamiltonian into a multiplet basis.
#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub n_qubits: usize,
    pub n_max: u64,
    /// Largest matrix element connecting different `(j, copy)` blocks.
    pub off_block_max: f64,
    /// Largest deviation of any extracted excitation sector from the ladder
    /// block Hamiltonian.
    pub max_sector_deviation: f64,
    /// Largest deviation between same-`j` copies of the extracted blocks.
    pub max_copy_deviation: f64,
    /// `(j, copies)` seen in the basis, descending `j`.
    pub multiplicities: Vec<(HalfInt, usize)>,
}

/// Rotates `g (J+ a + J- a^dagger) + delta Jz` into the multiplet basis and
/// reports block structure: off-block leakage, per-sector agreement with
/// [`BlockHamiltonian`], and agreement between copies of the same `j`.
pub fn block_diagonalize(
    params: SystemParams,
    basis: &SymmetryBasis,
    n_max: u64,
) -> Result<BlockReport> {
    let n = basis.n_qubits;
    let fock_dim = (n_max + 1) as usize;
    let h = collective::interaction_hamiltonian(n, fock_dim, params.g, params.delta)?;
    let rot = basis.matrix.kron(&CMatrix::identity(fock_dim));
    let h_rot = rot.dagger().mul(&h)?.mul(&rot)?;

    // Column group (start index, j, copy) per multiplet, in label order.
    let mut groups: Vec<(usize, HalfInt, usize)> = Vec::new();
    for (idx, l) in basis.labels.iter().enumerate() {
        if l.m == l.j {
            groups.push((idx, l.j, l.copy));
        }
    }

    let group_of_column: Vec<usize> = {
        let mut v = vec![0usize; basis.labels.len()];
        let mut current = 0;
        for (idx, l) in basis.labels.iter().enumerate() {
            if l.m == l.j {
                current = groups.iter().position(|&(s, _, _)| s == idx).unwrap();
            }
            v[idx] = current;
        }
        v
    };

    let dim = h_rot.rows();
    let mut off_block_max: f64 = 0.0;
    for row in 0..dim {
        let row_group = group_of_column[row / fock_dim];
        for col in 0..dim {
            if group_of_column[col / fock_dim] != row_group {
                off_block_max = off_block_max.max(h_rot[(row, col)].norm());
            }
        }
    }

    // Extract each block and compare its excitation sectors with the ladder
    // Hamiltonian.  Sectors with E <= n_max sit fully inside the truncation.
    let mut max_sector_deviation: f64 = 0.0;
    let mut extracted: Vec<(HalfInt, CMatrix)> = Vec::new();
    for &(start, j, _copy) in &groups {
        let states = j.multiplet_dim();
        let bdim = states * fock_dim;
        let block = CMatrix::from_fn(bdim, bdim, |r, c| {
            h_rot[(start * fock_dim + r, start * fock_dim + c)]
        });
        for e in 0..=n_max {
            let sector = BlockHamiltonian::from_total_excitations(j, e, params)?;
            let indices: Vec<usize> = sector
                .states()
                .iter()
                .map(|(m, p)| {
                    let m_idx = ((j.twice() - m.twice()) / 2) as usize;
                    m_idx * fock_dim + *p as usize
                })
                .collect();
            let sub = CMatrix::from_fn(indices.len(), indices.len(), |r, c| {
                block[(indices[r], indices[c])]
            });
            max_sector_deviation = max_sector_deviation.max(sub.max_abs_diff(sector.matrix()));
        }
        extracted.push((j, block));
    }

    let mut max_copy_deviation: f64 = 0.0;
    for a in 0..extracted.len() {
        for b in (a + 1)..extracted.len() {
            if extracted[a].0 == extracted[b].0 {
                max_copy_deviation =
                    max_copy_deviation.max(extracted[a].1.max_abs_diff(&extracted[b].1));
            }
        }
    }

    Ok(BlockReport {
        n_qubits: n,
        n_max,
        off_block_max,
        max_sector_deviation,
        max_copy_deviation,
        multiplicities: basis.multiplicities(),
    })
}

/// Singular values of the overlap between the `(j, m)` subspaces of two bases.
/// All equal to one exactly when the subspaces coincide.
pub fn subspace_overlap_singular_values(
    a: &SymmetryBasis,
    b: &SymmetryBasis,
    j: HalfInt,
    m: HalfInt,
) -> Result<Vec<f64>> {
    let cols_a: Vec<usize> = a
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.j == j && l.m == m)
        .map(|(i, _)| i)
        .collect();
    let cols_b: Vec<usize> = b
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.j == j && l.m == m)
        .map(|(i, _)| i)
        .collect();
    if cols_a.len() != cols_b.len() || cols_a.is_empty() {
        return Err(Error::Shape(format!(
            "subspace (j={j}, m={m}) has {} vs {} states",
            cols_a.len(),
            cols_b.len()
        )));
    }
    let dim = a.matrix.rows();
    let k = cols_a.len();
    let mut overlap = CMatrix::zeros(k, k);
    for (r, &ca) in cols_a.iter().enumerate() {
        for (c, &cb) in cols_b.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in 0..dim {
                acc += a.matrix[(row, ca)].conj() * b.matrix[(row, cb)];
            }
            overlap[(r, c)] = acc;
        }
    }
    let gram = overlap.dagger().mul(&overlap)?;
    let eig = eig_hermitian(&gram)?;
    Ok(eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect())
}

/// Unitary permutation of two qubits on the computational basis.
pub fn qubit_transposition(n: usize, a: usize, b: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut p = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let ba = collective::bit(idx, n, a);
        let bb = collective::bit(idx, n, b);
        let mut target = idx;
        if ba != bb {
            target = collective::flip_bit(collective::flip_bit(idx, n, a), n, b);
        }
        p[(target, idx)] = Complex64::new(1.0, 0.0);
    }
    p
}
