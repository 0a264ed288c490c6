//! Single-qubit decay on the register and the detect-and-recover protocol:
//! an exact branching tree over transmittance measurements and conditional
//! phase shifts, plus a spectroscopy report for the many-photon case.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{build_symmetry_basis, SymmetryBasis};
use crate::blocks::{rabi_splittings, BlockHamiltonian, SystemParams};
use crate::collective;
use crate::dynamics::{FullSpaceEvolver, InitialState};
use crate::error::{Error, Result};
use crate::gates::{circuit_from_solution, dft_switch_k1, Circuit};
use crate::halfint::HalfInt;
use crate::linalg::{eig_hermitian, vectors};
use crate::multiplet::admissible_j;
use crate::{tol, CMatrix, C64};

/// Exact rational `num/den` recovered from a float.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: u64,
}

impl Rational {
    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Best rational approximation by continued fractions, accepted only when it
/// reproduces the float to [`tol::EXACT_RATIONAL`].
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    let negative = x < 0.0;
    let mut value = x.abs();
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = value.floor();
        let h2 = a as i64 * h1 + h0;
        let k2 = a as i64 * k1 + k0;
        if k2 as u64 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = value - a;
        if frac.abs() < 1e-15 {
            break;
        }
        value = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let num = if negative { -h1 } else { h1 };
    let candidate = Rational {
        num,
        den: k1 as u64,
    };
    ((candidate.as_f64() - x).abs() < tol::EXACT_RATIONAL).then_some(candidate)
}

/// Density matrix over `2^N (x) Fock`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub n_qubits: usize,
    pub fock_dim: usize,
    pub matrix: CMatrix,
}

impl DensityMatrix {
    pub fn from_pure(n_qubits: usize, fock_dim: usize, state: &[C64]) -> Result<Self> {
        let dim = (1usize << n_qubits) * fock_dim;
        if state.len() != dim {
            return Err(Error::Shape(format!(
                "state of length {} does not fit {} x {}",
                state.len(),
                1 << n_qubits,
                fock_dim
            )));
        }
        let mut matrix = CMatrix::zeros(dim, dim);
        for (r, a) in state.iter().enumerate() {
            for (c, b) in state.iter().enumerate() {
                matrix[(r, c)] = a * b.conj();
            }
        }
        Ok(DensityMatrix {
            n_qubits,
            fock_dim,
            matrix,
        })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).expect("square").trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let e = eig_hermitian(&self.matrix)?;
        Ok(e.eigenvalues[0])
    }

    /// `<a| rho |b>` for dense vectors.
    pub fn sandwich(&self, a: &[C64], b: &[C64]) -> Result<C64> {
        let rb = self.matrix.apply(b)?;
        Ok(vectors::dot(a, &rb))
    }

    fn scale(&self, s: f64) -> Self {
        DensityMatrix {
            n_qubits: self.n_qubits,
            fock_dim: self.fock_dim,
            matrix: self.matrix.scale(Complex64::new(s, 0.0)),
        }
    }
}

/// Instantaneous full decay of one qubit: Kraus pair `K0 = |0><0|`,
/// `K1 = |0><1|` on the given qubit, identity elsewhere.  Trace preserving.
pub fn amplitude_damp(rho: &DensityMatrix, qubit: usize) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    if qubit >= n {
        return Err(Error::Shape(format!("qubit {qubit} outside a {n}-qubit register")));
    }
    let fock = rho.fock_dim;
    let dim = (1usize << n) * fock;
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let (br, pr) = (r / fock, r % fock);
        for c in 0..dim {
            let (bc, pc) = (c / fock, c % fock);
            let v = rho.matrix[(r, c)];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let (er, ec) = (collective::bit(br, n, qubit), collective::bit(bc, n, qubit));
            match (er, ec) {
                // K0 . K0: both ground, stays in place.
                (false, false) => out[(r, c)] += v,
                // K1 . K1: both excited, lands on the ground pair.
                (true, true) => {
                    let tr = collective::flip_bit(br, n, qubit) * fock + pr;
                    let tc = collective::flip_bit(bc, n, qubit) * fock + pc;
                    out[(tr, tc)] += v;
                }
                // Cross terms vanish for this Kraus pair.
                _ => {}
            }
        }
    }
    Ok(DensityMatrix {
        n_qubits: n,
        fock_dim: fock,
        matrix: out,
    })
}

/// One node of the exact protocol tree.
#[derive(Clone, Debug, Serialize)]
pub struct BranchNode {
    pub label: String,
    /// Probability of reaching this node from its parent.
    pub probability: Rational,
    pub probability_float: f64,
    /// What the protocol does at this node.
    pub action: String,
    pub recovered: bool,
    pub children: Vec<BranchNode>,
}

impl BranchNode {
    fn children_probability_defect(&self) -> f64 {
        if self.children.is_empty() {
            return 0.0;
        }
        let sum: f64 = self.children.iter().map(|c| c.probability_float).sum();
        let mut worst = (sum - 1.0).abs();
        for c in &self.children {
            worst = worst.max(c.children_probability_defect());
        }
        worst
    }
}

/// Exact branch tree of the decay detect-and-recover protocol.
#[derive(Clone, Debug, Serialize)]
pub struct BranchTree {
    pub n_qubits: usize,
    pub root: BranchNode,
    /// Joint probability of the first measurement reading "no transmittance".
    pub p_no_transmittance: Rational,
    /// Conditional probabilities inside the transmitting branch.
    pub p_dead: Rational,
    pub p_dormant: Rational,
    /// Total probability of ending in the recovered state.
    pub total_recovery: Rational,
}

impl BranchTree {
    pub fn probability_defect(&self) -> f64 {
        self.root.children_probability_defect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn rational_or_err(x: f64, what: &str) -> Result<Rational> {
    rationalize(x, 1_000_000).ok_or_else(|| {
        Error::Protocol(format!("{what} = {x} is not a small exact rational"))
    })
}

/// Projector weights of `rho` against the dark subspace (`ker J-` on the
/// qubits, any photon number) and its complement.
struct Splitter {
    /// Dark qubit-space states, embedded over `2^N`.
    dark: Vec<Vec<C64>>,
}

impl Splitter {
    fn new(n: usize) -> Result<Self> {
        let ops = collective::collective_operators(n)?;
        let gram = ops.j_plus.mul(&ops.j_minus)?;
        let eig = eig_hermitian(&gram)?;
        let scale = eig.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
        let dark = (0..eig.eigenvalues.len())
            .filter(|&i| eig.eigenvalues[i].abs() < 1e-9 * scale)
            .map(|i| eig.eigenvectors.column(i))
            .collect();
        Ok(Splitter { dark })
    }

    /// Splits into (dark part, bright part) of the density matrix.
    fn split(&self, rho: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
        let n = rho.n_qubits;
        let fock = rho.fock_dim;
        let qdim = 1usize << n;
        let mut proj = CMatrix::zeros(qdim, qdim);
        for d in &self.dark {
            for r in 0..qdim {
                for c in 0..qdim {
                    proj[(r, c)] += d[r] * d[c].conj();
                }
            }
        }
        let full = proj.kron(&CMatrix::identity(fock));
        let dark = full.mul(&rho.matrix)?.mul(&full)?;
        let bright_proj = CMatrix::identity(qdim * fock).sub(&full)?;
        let bright = bright_proj.mul(&rho.matrix)?.mul(&bright_proj)?;
        Ok((
            DensityMatrix {
                n_qubits: n,
                fock_dim: fock,
                matrix: dark,
            },
            DensityMatrix {
                n_qubits: n,
                fock_dim: fock,
                matrix: bright,
            },
        ))
    }
}

/// The root-of-unity phase shift used between measurements, extended over the
/// full register: branch-1 single-excitation switch as a circuit.
fn recovery_circuit(n: usize) -> Result<Circuit> {
    let solution = dft_switch_k1(n, 1)?;
    Ok(circuit_from_solution(&solution))
}

fn apply_circuit_to_density(rho: &DensityMatrix, circuit: &Circuit) -> Result<DensityMatrix> {
    let diag = circuit.diagonal();
    let fock = rho.fock_dim;
    let dim = rho.matrix.rows();
    let mut out = rho.matrix.clone();
    for r in 0..dim {
        for c in 0..dim {
            let phase = diag[r / fock] * diag[c / fock].conj();
            out[(r, c)] *= phase;
        }
    }
    Ok(DensityMatrix {
        n_qubits: rho.n_qubits,
        fock_dim: fock,
        matrix: out,
    })
}

/// Simulates the detect-and-recover protocol for one spontaneous decay.
///
/// The register starts in `|00...0>|1>`, evolves a quarter Rabi period to the
/// first excited symmetric state, and qubit 0 decays.  Probing the resonator
/// at its bare frequency splits the state into a hybridized branch (recovered
/// outright) and a decoupled branch holding the dead all-ground state and the
/// dormant lower-`j` superposition; repeated phase shifts and re-measurements
/// recover the entire dormant weight.  All branch probabilities come out as
/// exact small rationals.
pub fn decay_recovery_protocol(n: usize, params: SystemParams) -> Result<BranchTree> {
    if n < 2 {
        return Err(Error::Domain("the protocol needs at least two qubits".into()));
    }
    if params.delta != 0.0 {
        return Err(Error::Unsupported("the decay protocol assumes resonance".into()));
    }

    // Quarter-period transfer |0..0>|1> -> |N/2, -N/2+1>|0> (up to phase).
    let initial = InitialState::Computational {
        bits: "0".repeat(n),
        photons: 1,
    };
    let evolver = FullSpaceEvolver::new(n, &initial, params)?;
    let t = std::f64::consts::PI / (2.0 * params.g * (n as f64).sqrt());
    let psi = evolver.evolve(t);
    let fock = evolver.fock_dim;
    let rho = DensityMatrix::from_pure(n, fock, &psi)?;

    // The decay.
    let rho_decay = amplitude_damp(&rho, 0)?;

    // Reference states.
    let qdim = 1usize << n;
    let symmetric = crate::gates::symmetric_state(n, 1);
    let mut target = vec![Complex64::new(0.0, 0.0); qdim * fock];
    for (b, amp) in symmetric.iter().enumerate() {
        target[b * fock] = *amp;
    }
    let splitter = Splitter::new(n)?;
    let circuit = recovery_circuit(n)?;

    // First transmittance measurement.
    let (dark, bright) = splitter.split(&rho_decay)?;
    let p_bright = bright.trace();
    let p_dark = dark.trace();
    let p_no_transmittance = rational_or_err(p_bright, "P(no transmittance)")?;

    // Bright branch: should be exactly the recovered target state.
    let bright_fidelity = if p_bright > 1e-12 {
        bright.sandwich(&target, &target)?.re / p_bright
    } else {
        0.0
    };
    if (bright_fidelity - 1.0).abs() > tol::ORACLE {
        return Err(Error::Protocol(format!(
            "hybridized branch is not the recovered state (fidelity {bright_fidelity})"
        )));
    }
    let recovered_node = BranchNode {
        label: "no transmittance".into(),
        probability: p_no_transmittance,
        probability_float: p_bright,
        action: "collapse onto the hybridized state; already recovered".into(),
        recovered: true,
        children: vec![],
    };

    // Dark branch: dead vs dormant split.  The dead state is the basis state
    // |00..0>|0> at index zero; the decay channel never builds coherence
    // between it and the dormant states, so zeroing its row and column is the
    // exact complement projection.
    let p_dead_joint = dark.matrix[(0, 0)].re;
    let p_dormant_joint = p_dark - p_dead_joint;
    let p_dead = rational_or_err(p_dead_joint / p_dark, "P(dead | transmittance)")?;
    let p_dormant = rational_or_err(p_dormant_joint / p_dark, "P(dormant | transmittance)")?;

    let mut dormant = dark.clone();
    let dead_coherence = (1..dormant.matrix.rows())
        .map(|idx| dark.matrix[(0, idx)].norm().max(dark.matrix[(idx, 0)].norm()))
        .fold(0.0f64, f64::max);
    if dead_coherence > 1e-12 {
        return Err(Error::Protocol(format!(
            "unexpected coherence {dead_coherence} between dead and dormant states"
        )));
    }
    for idx in 0..dormant.matrix.rows() {
        dormant.matrix[(0, idx)] = Complex64::new(0.0, 0.0);
        dormant.matrix[(idx, 0)] = Complex64::new(0.0, 0.0);
    }
    let dormant = dormant.scale(1.0 / p_dormant_joint);

    // Recovery loop on the dormant branch.
    let mut loop_nodes: Vec<BranchNode> = Vec::new();
    let mut current = dormant;
    let mut survival = 1.0f64;
    let mut recovered_within_dormant = 0.0f64;
    for step in 1..n {
        let shifted = apply_circuit_to_density(&current, &circuit)?;
        let (dark_part, bright_part) = splitter.split(&shifted)?;
        let p_rec = bright_part.trace();
        let p_stay = dark_part.trace();
        let fidelity = if p_rec > 1e-12 {
            bright_part.sandwich(&target, &target)?.re / p_rec
        } else {
            1.0
        };
        if (fidelity - 1.0).abs() > tol::ORACLE {
            return Err(Error::Protocol(format!(
                "recovered component at step {step} is impure (fidelity {fidelity})"
            )));
        }
        recovered_within_dormant += survival * p_rec;
        loop_nodes.push(BranchNode {
            label: format!("shift {step}: bare line blocked"),
            probability: rational_or_err(p_rec, "P(recover at step)")?,
            probability_float: p_rec,
            action: "phase shift, re-measure; hybridized, recovered".into(),
            recovered: true,
            children: vec![],
        });
        if p_stay < 1e-12 {
            break;
        }
        survival *= p_stay;
        current = dark_part.scale(1.0 / p_stay);
        loop_nodes.push(BranchNode {
            label: format!("shift {step}: still transmitting"),
            probability: rational_or_err(p_stay, "P(stay dormant)")?,
            probability_float: p_stay,
            action: "remain in the decoupled manifold; shift again".into(),
            recovered: false,
            children: vec![],
        });
    }

    // Nest the loop nodes into a chain.
    let mut dormant_chain: Vec<BranchNode> = Vec::new();
    while let Some(node) = loop_nodes.pop() {
        if node.recovered {
            dormant_chain.insert(0, node);
        } else {
            let mut parent = node;
            parent.children = dormant_chain;
            dormant_chain = vec![parent];
        }
    }

    let dormant_node = BranchNode {
        label: "dormant".into(),
        probability: p_dormant,
        probability_float: p_dormant.as_f64(),
        action: "decoupled lower-j ground superposition; recoverable".into(),
        recovered: false,
        children: dormant_chain,
    };
    let dead_node = BranchNode {
        label: "dead".into(),
        probability: p_dead,
        probability_float: p_dead.as_f64(),
        action: "all-ground register with empty cavity; unrecoverable".into(),
        recovered: false,
        children: vec![],
    };
    let transmitting_node = BranchNode {
        label: "transmittance".into(),
        probability: rational_or_err(p_dark, "P(transmittance)")?,
        probability_float: p_dark,
        action: "collapse onto the decoupled manifold".into(),
        recovered: false,
        children: vec![dead_node, dormant_node],
    };

    let total_recovery_float =
        p_bright + p_dark * p_dormant.as_f64() * recovered_within_dormant;
    let total_recovery = rational_or_err(total_recovery_float, "total recovery")?;

    let root = BranchNode {
        label: "after decay of qubit 0".into(),
        probability: Rational { num: 1, den: 1 },
        probability_float: 1.0,
        action: "probe resonator transmittance at the bare frequency".into(),
        recovered: false,
        children: vec![recovered_node, transmitting_node],
    };

    Ok(BranchTree {
        n_qubits: n,
        root,
        p_no_transmittance,
        p_dead,
        p_dormant,
        total_recovery,
    })
}

/// Rabi-splitting sets of every sector populated after a decay event, for a
/// three-qubit register initiated in `|000>|photons>`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectroscopyReport {
    pub photons: u64,
    /// `(j, copy, total excitations, weight, splittings)` rows.
    pub sectors: Vec<SpectroscopySector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectroscopySector {
    pub j: HalfInt,
    pub copy: usize,
    pub excitations: u64,
    pub weight: f64,
    pub splittings: Vec<f64>,
}

/// Evolve `|000>|photons>` a quarter period, decay qubit 0, and decompose the
/// result over `(j, copy, excitation)` sectors with each sector's splitting
/// set; the sets differ between sectors, which is what makes the decay
/// spectroscopically detectable.
pub fn decay_spectroscopy(photons: u64, params: SystemParams) -> Result<SpectroscopyReport> {
    let n = 3usize;
    let initial = InitialState::Computational {
        bits: "000".into(),
        photons,
    };
    let evolver = FullSpaceEvolver::new(n, &initial, params)?;
    let t = std::f64::consts::PI / (2.0 * params.g * 3f64.sqrt());
    let psi = evolver.evolve(t);
    let fock = evolver.fock_dim;
    let rho = amplitude_damp(&DensityMatrix::from_pure(n, fock, &psi)?, 0)?;

    let basis: SymmetryBasis = build_symmetry_basis(n)?;
    let mut sectors = Vec::new();
    for j in admissible_j(n) {
        let copies = basis
            .labels
            .iter()
            .filter(|l| l.j == j && l.m == j)
            .count();
        for copy in 0..copies {
            for e in 0..fock as u64 {
                let block = BlockHamiltonian::from_total_excitations(j, e, params)?;
                let mut weight = 0.0;
                for (m, p) in block.states() {
                    if (p as usize) < fock {
                        let col = basis.column_of(j, m, copy).expect("label exists");
                        let mut state = vec![Complex64::new(0.0, 0.0); (1 << n) * fock];
                        for (b, amp) in col.iter().enumerate() {
                            state[b * fock + p as usize] = *amp;
                        }
                        weight += rho.sandwich(&state, &state)?.re;
                    }
                }
                if weight > 1e-10 {
                    sectors.push(SpectroscopySector {
                        j,
                        copy,
                        excitations: e,
                        weight,
                        splittings: if e >= j.twice() as u64 {
                            rabi_splittings(j, e - j.twice() as u64, params)?.values
                        } else {
                            block.eigenvalues()?
                        },
                    });
                }
            }
        }
    }
    Ok(SpectroscopyReport { photons, sectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn rationalize_finds_small_fractions() {
        assert_eq!(rationalize(4.0 / 9.0, 100), Some(Rational { num: 4, den: 9 }));
        assert_eq!(rationalize(2.0 / 3.0, 100), Some(Rational { num: 2, den: 3 }));
        assert_eq!(rationalize(0.5, 100), Some(Rational { num: 1, den: 2 }));
        assert_eq!(rationalize(1.0, 100), Some(Rational { num: 1, den: 1 }));
        assert!(rationalize(std::f64::consts::PI, 10).is_none());
    }

    #[test]
    fn damping_the_symmetric_state() {
        // (|100>+|010>+|001>)/sqrt3 with qubit 0 damped:
        // 2/3 on |0>(|01>+|10>)/sqrt2, 1/3 on |000>.
        let mut state = vec![Complex64::new(0.0, 0.0); 8];
        let inv = (1.0f64 / 3.0).sqrt();
        state[0b100] = Complex64::new(inv, 0.0);
        state[0b010] = Complex64::new(inv, 0.0);
        state[0b001] = Complex64::new(inv, 0.0);
        let rho = DensityMatrix::from_pure(3, 1, &state).unwrap();
        let damped = amplitude_damp(&rho, 0).unwrap();
        assert!((damped.trace() - 1.0).abs() < 1e-14);

        let mut psi = vec![Complex64::new(0.0, 0.0); 8];
        let inv2 = 0.5f64.sqrt();
        psi[0b010] = Complex64::new(inv2, 0.0);
        psi[0b001] = Complex64::new(inv2, 0.0);
        let p_psi = damped
            .sandwich(&psi, &psi)
            .unwrap()
            .re;
        assert!((p_psi - 2.0 / 3.0).abs() < 1e-13);
        let mut ground = vec![Complex64::new(0.0, 0.0); 8];
        ground[0] = Complex64::new(1.0, 0.0);
        let p_g = damped.sandwich(&ground, &ground).unwrap().re;
        assert!((p_g - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn damping_ground_state_is_identity() {
        let mut state = vec![Complex64::new(0.0, 0.0); 8];
        state[0] = Complex64::new(1.0, 0.0);
        let rho = DensityMatrix::from_pure(3, 1, &state).unwrap();
        let damped = amplitude_damp(&rho, 1).unwrap();
        assert!(damped.matrix.max_abs_diff(&rho.matrix) < 1e-15);
    }

    #[test]
    fn damping_preserves_trace_on_mixed_input() {
        // A random-ish Hermitian positive matrix via psi psi^dagger mixtures.
        let mut rho = CMatrix::zeros(8, 8);
        for seed in 0..3 {
            let mut v = vec![Complex64::new(0.0, 0.0); 8];
            for (i, x) in v.iter_mut().enumerate() {
                *x = Complex64::new(
                    ((seed * 7 + i) as f64 * 0.37).sin(),
                    ((seed * 3 + i) as f64 * 0.59).cos(),
                );
            }
            vectors::normalize(&mut v);
            for r in 0..8 {
                for c in 0..8 {
                    rho[(r, c)] += v[r] * v[c].conj() * Complex64::new(1.0 / 3.0, 0.0);
                }
            }
        }
        let dm = DensityMatrix {
            n_qubits: 3,
            fock_dim: 1,
            matrix: rho,
        };
        let before = dm.trace();
        let damped = amplitude_damp(&dm, 2).unwrap();
        assert!((damped.trace() - before).abs() < 1e-13);
        assert!(damped.matrix.hermiticity_defect() < 1e-13);
    }

    #[test]
    fn three_qubit_protocol_exact_numbers() {
        let tree = decay_recovery_protocol(3, p()).unwrap();
        assert_eq!(tree.p_no_transmittance, Rational { num: 4, den: 9 });
        assert_eq!(tree.p_dead, Rational { num: 3, den: 5 });
        assert_eq!(tree.p_dormant, Rational { num: 2, den: 5 });
        assert_eq!(tree.total_recovery, Rational { num: 2, den: 3 });
        assert!((tree.p_no_transmittance.as_f64() - 4.0 / 9.0).abs() < tol::EXACT_RATIONAL);
        assert!((tree.total_recovery.as_f64() - 2.0 / 3.0).abs() < tol::EXACT_RATIONAL);
        assert!(tree.probability_defect() < tol::EXACT_RATIONAL);
    }

    #[test]
    fn larger_registers_recover_with_probability_one_minus_one_over_n() {
        for n in [2usize, 4, 5] {
            let tree = decay_recovery_protocol(n, p()).unwrap();
            let expect = (n as f64 - 1.0) / n as f64;
            assert!(
                (tree.total_recovery.as_f64() - expect).abs() < 1e-9,
                "n={n}: {:?}",
                tree.total_recovery
            );
        }
    }

    #[test]
    fn tree_serializes_with_exact_rationals() {
        let tree = decay_recovery_protocol(3, p()).unwrap();
        let json = tree.to_json().unwrap();
        assert!(json.contains("\"num\": 4"));
        assert!(json.contains("\"den\": 9"));
        assert!(json.contains("\"den\": 3"));
    }

    #[test]
    fn spectroscopy_sectors_have_distinct_splittings() {
        let report = decay_spectroscopy(3, p()).unwrap();
        let total: f64 = report.sectors.iter().map(|s| s.weight).sum();
        assert!((total - 1.0).abs() < 1e-9, "weights sum to {total}");
        // The post-decay state populates both quartet and doublet sectors.
        assert!(report.sectors.iter().any(|s| s.j == HalfInt::from_twice(3)));
        assert!(report.sectors.iter().any(|s| s.j == HalfInt::from_twice(1)));
        // Distinguishability: splitting sets differ across populated sectors.
        let mut sets: Vec<&Vec<f64>> = report.sectors.iter().map(|s| &s.splittings).collect();
        sets.dedup_by(|a, b| {
            a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-9)
        });
        assert!(sets.len() > 1);
    }
}
