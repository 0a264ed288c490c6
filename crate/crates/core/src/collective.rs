//! Collective spin and truncated bosonic operators in the computational basis.
//!
//! Bit convention used everywhere in this crate: qubit 0 is the leftmost
//! character of a bitstring, so basis index `b` has qubit `i` excited iff bit
//! `n - 1 - i` of `b` is set.  `|1>` is the excited qubit state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Default cap on the register size for dense `2^N` operator construction.
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// Index of the computational basis state with qubit `q` of `n` toggled in `b`.
pub fn flip_bit(b: usize, n: usize, q: usize) -> usize {
    b ^ (1 << (n - 1 - q))
}

/// Whether qubit `q` (leftmost = 0) is excited in basis index `b`.
pub fn bit(b: usize, n: usize, q: usize) -> bool {
    (b >> (n - 1 - q)) & 1 == 1
}

/// Number of excited qubits in basis index `b`.
pub fn weight(b: usize) -> u32 {
    b.count_ones()
}

/// Bitstring basis indices with `w` excited qubits, ascending.
pub fn weight_basis(n: usize, w: usize) -> Vec<usize> {
    (0..1usize << n)
        .filter(|b| b.count_ones() as usize == w)
        .collect()
}

/// Collective operators of `n` identical qubits, all `2^n x 2^n`.
pub struct CollectiveOps {
    pub n_qubits: usize,
    pub j_plus: CMatrix,
    pub j_minus: CMatrix,
    pub j_z: CMatrix,
    pub j_squared: CMatrix,
}

/// Builds `J+ = sum_i sigma_i^+`, its adjoint, `Jz = [J+, J-]/2` and `J^2`.
pub fn collective_operators(n: usize) -> Result<CollectiveOps> {
    collective_operators_capped(n, DEFAULT_QUBIT_CAP)
}

pub fn collective_operators_capped(n: usize, cap: usize) -> Result<CollectiveOps> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "register of {n} qubits exceeds the cap of {cap}"
        )));
    }
    let dim = 1usize << n;
    let mut j_plus = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        for q in 0..n {
            if !bit(b, n, q) {
                let target = flip_bit(b, n, q);
                j_plus[(target, b)] += Complex64::new(1.0, 0.0);
            }
        }
    }
    let j_minus = j_plus.dagger();
    // Jz is diagonal: (weight - n/2) on each basis state.
    let mut j_z = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        j_z[(b, b)] = Complex64::new(weight(b) as f64 - n as f64 / 2.0, 0.0);
    }
    // J^2 = J- J+ + Jz (Jz + 1)
    let mut j_squared = j_minus.mul(&j_plus)?;
    for b in 0..dim {
        let m = weight(b) as f64 - n as f64 / 2.0;
        j_squared[(b, b)] += Complex64::new(m * (m + 1.0), 0.0);
    }
    Ok(CollectiveOps {
        n_qubits: n,
        j_plus,
        j_minus,
        j_z,
        j_squared,
    })
}

/// Apply `J-` to a state vector over the `2^n` computational basis without
/// materializing the matrix.
pub fn apply_j_minus(n: usize, state: &[C64]) -> Vec<C64> {
    let dim = 1usize << n;
    assert_eq!(state.len(), dim);
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for b in 0..dim {
        let amp = state[b];
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        for q in 0..n {
            if bit(b, n, q) {
                out[flip_bit(b, n, q)] += amp;
            }
        }
    }
    out
}

/// Truncated annihilation operator on Fock states `|0..dim-1>`.
pub fn annihilator(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated creation operator, the adjoint of [`annihilator`].
pub fn creator(dim: usize) -> CMatrix {
    annihilator(dim).dagger()
}

/// Photon number operator on the truncated Fock space.
pub fn number_operator(dim: usize) -> CMatrix {
    let mut n = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        n[(k, k)] = Complex64::new(k as f64, 0.0);
    }
    n
}

/// Interaction-picture Hamiltonian `g (J+ a + J- a^dagger) + delta Jz` on
/// `2^n (x) Fock(fock_dim)`, with `delta` in units of `g`.
pub fn interaction_hamiltonian(n: usize, fock_dim: usize, g: f64, delta: f64) -> Result<CMatrix> {
    let ops = collective_operators(n)?;
    let a = annihilator(fock_dim);
    let ad = creator(fock_dim);
    let eye = CMatrix::identity(fock_dim);
    let mut h = ops
        .j_plus
        .kron(&a)
        .add(&ops.j_minus.kron(&ad))?
        .scale(Complex64::new(g, 0.0));
    if delta != 0.0 {
        h = h.add(&ops.j_z.kron(&eye).scale(Complex64::new(delta * g, 0.0)))?;
    }
    Ok(h)
}

/// Total excitation operator `a^dagger a + (Jz + n/2)` on the same space.
pub fn excitation_operator(n: usize, fock_dim: usize) -> Result<CMatrix> {
    let ops = collective_operators(n)?;
    let dim = 1usize << n;
    let mut qubit_exc = ops.j_z;
    for b in 0..dim {
        qubit_exc[(b, b)] += Complex64::new(n as f64 / 2.0, 0.0);
    }
    qubit_exc
        .kron(&CMatrix::identity(fock_dim))
        .add(&CMatrix::identity(dim).kron(&number_operator(fock_dim)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    #[test]
    fn single_qubit_collective_ops_are_paulis() {
        let ops = collective_operators(1).unwrap();
        assert_eq!(ops.j_plus[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(ops.j_plus[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(ops.j_z[(0, 0)], Complex64::new(-0.5, 0.0));
        assert_eq!(ops.j_z[(1, 1)], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn two_qubit_raising_of_ground() {
        let ops = collective_operators(2).unwrap();
        let v = crate::linalg::vectors::basis::<f64>(4, 0b00);
        let w = ops.j_plus.apply(&v).unwrap();
        assert_eq!(w[0b01], Complex64::new(1.0, 0.0));
        assert_eq!(w[0b10], Complex64::new(1.0, 0.0));
        assert_eq!(w[0b00], Complex64::new(0.0, 0.0));
        assert_eq!(w[0b11], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn jz_is_half_the_commutator() {
        for n in 1..=4 {
            let ops = collective_operators(n).unwrap();
            let comm = ops
                .j_plus
                .mul(&ops.j_minus)
                .unwrap()
                .sub(&ops.j_minus.mul(&ops.j_plus).unwrap())
                .unwrap()
                .scale(Complex64::new(0.5, 0.0));
            assert!(comm.max_abs_diff(&ops.j_z) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn j_squared_commutes_with_components() {
        for n in 1..=4 {
            let ops = collective_operators(n).unwrap();
            for op in [&ops.j_plus, &ops.j_minus, &ops.j_z] {
                let c = ops
                    .j_squared
                    .mul(op)
                    .unwrap()
                    .sub(&op.mul(&ops.j_squared).unwrap())
                    .unwrap();
                assert!(c.max_abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn three_qubit_root_of_unity_state_has_j_one_half() {
        // J^2 (|011> + w |101> + w* |110>) = 3/4 (same), w = exp(2 pi i / 3)
        let ops = collective_operators(3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0b011] = Complex64::new(1.0, 0.0);
        v[0b101] = w;
        v[0b110] = w.conj();
        let jv = ops.j_squared.apply(&v).unwrap();
        for i in 0..8 {
            let expect = v[i] * Complex64::new(0.75, 0.0);
            assert!((jv[i] - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            collective_operators_capped(9, 8),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn excitation_operator_commutes_with_interaction() {
        let h = interaction_hamiltonian(2, 4, 1.0, 0.3).unwrap();
        let exc = excitation_operator(2, 4).unwrap();
        let c = h.mul(&exc).unwrap().sub(&exc.mul(&h).unwrap()).unwrap();
        assert!(c.max_abs() < tol::HERMITICITY);
    }

    #[test]
    fn apply_j_minus_matches_matrix() {
        let ops = collective_operators(3).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        for (i, x) in v.iter_mut().enumerate() {
            *x = Complex64::new(i as f64 * 0.1, 0.3 - i as f64 * 0.05);
        }
        let fast = apply_j_minus(3, &v);
        let slow = ops.j_minus.apply(&v).unwrap();
        assert!(crate::linalg::vectors::max_abs_diff(&fast, &slow) < 1e-14);
    }
}
