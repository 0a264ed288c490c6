//! Population time series on ladder sectors and the brute-force full-space
//! evolution used as the oracle for every block-decomposition claim.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::build_symmetry_basis;
use crate::blocks::{BlockHamiltonian, SystemParams};
use crate::collective;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{eig_hermitian, vectors};
use crate::{CMatrix, C64, Eigen};

/// Uniform time grid in units of `1/g`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Domain("a time grid needs at least two points".into()));
        }
        Ok(TimeGrid { start, end, points })
    }

    /// 1000 points over `[0, 20/g]`, which resolves the fastest tabulated
    /// splitting frequency for small photon numbers.
    pub fn default_for(g: f64) -> Self {
        TimeGrid {
            start: 0.0,
            end: 20.0 / g,
            points: 1000,
        }
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.start + dt * i as f64).collect()
    }
}

/// Labeled population columns over a time grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `columns[c][k]` is the population of column `c` at `times[k]`.
    pub columns: Vec<Vec<f64>>,
}

impl TimeSeries {
    /// CSV with a `t` column first; full double precision so the files remain
    /// oracle-grade.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t:.17e}"));
            for col in &self.columns {
                out.push_str(&format!(",{:.17e}", col[k]));
            }
            out.push('\n');
        }
        out
    }

    /// Largest deviation of the per-sample population sum from one.
    pub fn conservation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.times.len() {
            let sum: f64 = self.columns.iter().map(|c| c[k]).sum();
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }
}

/// Diagonalize once, evolve to any time.
pub struct SpectralEvolver {
    eig: Eigen,
}

impl SpectralEvolver {
    pub fn new(hamiltonian: &CMatrix) -> Result<Self> {
        Ok(SpectralEvolver {
            eig: eig_hermitian(hamiltonian)?,
        })
    }

    /// `exp(i t H) v`.
    pub fn evolve(&self, v: &[C64], t: f64) -> Vec<C64> {
        let vmat = &self.eig.eigenvectors;
        let n = self.eig.eigenvalues.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += vmat[(i, j)].conj() * v[i];
            }
            coeffs[j] = acc * Complex64::new(0.0, self.eig.eigenvalues[j] * t).exp();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += vmat[(i, j)] * coeffs[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// Populations of every ladder state of the sector containing
/// `|j, m0> |photons0>`, starting from that state.
///
/// Column `i` is `|U(t)[i, i0]|^2`; within the conserved sector the columns
/// sum to one at every sample.
pub fn populations_block(
    j: HalfInt,
    m0: HalfInt,
    photons0: u64,
    params: SystemParams,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let block = BlockHamiltonian::from_initial(j, m0, photons0, params)?;
    let i0 = block
        .index_of_m(m0)
        .ok_or_else(|| Error::Domain(format!("m={m0} not reachable in its own sector")))?;
    let evolver = SpectralEvolver::new(block.matrix())?;
    let times = grid.times();
    let labels: Vec<String> = block
        .states()
        .iter()
        .map(|(m, p)| format!("p(m={m} n={p})"))
        .collect();
    let v0 = vectors::basis(block.dim, i0);
    let mut columns = vec![vec![0.0; times.len()]; block.dim];
    for (k, &t) in times.iter().enumerate() {
        let v = evolver.evolve(&v0, t);
        for (i, col) in columns.iter_mut().enumerate() {
            col[k] = v[i].norm_sqr();
        }
    }
    Ok(TimeSeries {
        times,
        labels,
        columns,
    })
}

/// Population of `|000>` for a three-qubit register initiated in
/// `|000>|photons>` (pure `j = 3/2, m = -3/2` sector).
///
/// One column; with zero photons the state is dark and the column is
/// constant one.
pub fn population_000(photons: u64, params: SystemParams, grid: &TimeGrid) -> Result<TimeSeries> {
    let j = HalfInt::from_twice(3);
    let m0 = HalfInt::from_twice(-3);
    let series = populations_block(j, m0, photons, params, grid)?;
    let block = BlockHamiltonian::from_initial(j, m0, photons, params)?;
    let idx = block.index_of_m(m0).expect("bottom state is in its sector");
    Ok(TimeSeries {
        times: series.times,
        labels: vec!["p(000)".into()],
        columns: vec![series.columns[idx].clone()],
    })
}

/// An initial state of the register-resonator system.
#[derive(Clone, Debug)]
pub enum InitialState {
    /// A multiplet ladder state `|j, m, copy> |photons>`.
    Sector {
        j: HalfInt,
        m: HalfInt,
        copy: usize,
        photons: u64,
    },
    /// A computational product state `|bits> |photons>`; `bits[0]` is qubit 0.
    Computational { bits: String, photons: u64 },
    /// Raw amplitudes over the `2^N (x) Fock` product basis (row-major in the
    /// qubit index, photon index fastest).
    Amplitudes { fock_dim: usize, amplitudes: Vec<C64> },
}

impl InitialState {
    /// Total excitations carried by the state (maximum over support for raw
    /// amplitude lists).
    pub fn total_excitations(&self, n: usize) -> Result<u64> {
        match self {
            InitialState::Sector { j, m, photons, .. } => {
                Ok(((j.twice() + m.twice()) / 2) as u64 + photons)
            }
            InitialState::Computational { bits, photons } => {
                let w = bits.chars().filter(|&c| c == '1').count() as u64;
                Ok(w + photons)
            }
            InitialState::Amplitudes { fock_dim, amplitudes } => {
                let mut top = 0u64;
                for (idx, amp) in amplitudes.iter().enumerate() {
                    if amp.norm_sqr() > 1e-24 {
                        let b = idx / fock_dim;
                        let p = (idx % fock_dim) as u64;
                        let _ = n;
                        top = top.max(collective::weight(b) as u64 + p);
                    }
                }
                Ok(top)
            }
        }
    }

    /// Dense amplitudes over `2^n (x) Fock(fock_dim)`, unit norm.
    pub fn to_vector(&self, n: usize, fock_dim: usize) -> Result<Vec<C64>> {
        let dim = (1usize << n) * fock_dim;
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        match self {
            InitialState::Sector { j, m, copy, photons } => {
                let basis = build_symmetry_basis(n)?;
                let col = basis.column_of(*j, *m, *copy).ok_or_else(|| {
                    Error::Domain(format!("no state (j={j}, m={m}, copy={copy}) for n={n}"))
                })?;
                let p = *photons as usize;
                if p >= fock_dim {
                    return Err(Error::Shape(format!(
                        "photon count {p} outside Fock truncation {fock_dim}"
                    )));
                }
                for (b, amp) in col.iter().enumerate() {
                    v[b * fock_dim + p] = *amp;
                }
            }
            InitialState::Computational { bits, photons } => {
                if bits.len() != n || bits.chars().any(|c| c != '0' && c != '1') {
                    return Err(Error::Domain(format!("bad bitstring '{bits}' for {n} qubits")));
                }
                let b = usize::from_str_radix(bits, 2)
                    .map_err(|e| Error::Domain(format!("bad bitstring '{bits}': {e}")))?;
                let p = *photons as usize;
                if p >= fock_dim {
                    return Err(Error::Shape(format!(
                        "photon count {p} outside Fock truncation {fock_dim}"
                    )));
                }
                v[b * fock_dim + p] = Complex64::new(1.0, 0.0);
            }
            InitialState::Amplitudes { fock_dim: fd, amplitudes } => {
                if *fd != fock_dim || amplitudes.len() != dim {
                    return Err(Error::Shape(format!(
                        "amplitude list of {} entries does not fit {} x {}",
                        amplitudes.len(),
                        1 << n,
                        fock_dim
                    )));
                }
                v.copy_from_slice(amplitudes);
            }
        }
        let norm = vectors::norm(&v);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("initial state norm {norm} is not 1")));
        }
        Ok(v)
    }
}

/// Full-space evolution cap: dense `2^N (x) Fock` exponentials get expensive
/// beyond this register size.
pub const FULL_SPACE_QUBIT_CAP: usize = 8;

/// Brute-force evolution of `|initial>` under the full interaction
/// Hamiltonian, with the Fock space truncated at total excitations + 1
/// (exact, since the interaction conserves the total).
pub fn full_space_evolve(
    n: usize,
    initial: &InitialState,
    params: SystemParams,
    t: f64,
) -> Result<Vec<C64>> {
    let evolver = FullSpaceEvolver::new(n, initial, params)?;
    Ok(evolver.evolve(t))
}

/// Pre-diagonalized full-space evolution for repeated time samples.
pub struct FullSpaceEvolver {
    pub n_qubits: usize,
    pub fock_dim: usize,
    v0: Vec<C64>,
    evolver: SpectralEvolver,
}

impl FullSpaceEvolver {
    pub fn new(n: usize, initial: &InitialState, params: SystemParams) -> Result<Self> {
        if n > FULL_SPACE_QUBIT_CAP {
            return Err(Error::Resource(format!(
                "full-space evolution capped at {FULL_SPACE_QUBIT_CAP} qubits, got {n}"
            )));
        }
        let fock_dim = (initial.total_excitations(n)? + 1) as usize;
        let v0 = initial.to_vector(n, fock_dim)?;
        let h = collective::interaction_hamiltonian(n, fock_dim, params.g, params.delta)?;
        Ok(FullSpaceEvolver {
            n_qubits: n,
            fock_dim,
            v0,
            evolver: SpectralEvolver::new(&h)?,
        })
    }

    pub fn evolve(&self, t: f64) -> Vec<C64> {
        self.evolver.evolve(&self.v0, t)
    }

    /// Population of the computational-Fock product state `|bits>|photons>`.
    pub fn population_of(&self, state: &[C64], bits: usize, photons: usize) -> f64 {
        state[bits * self.fock_dim + photons].norm_sqr()
    }
}

/// Plain discrete Fourier transform magnitudes of a real series sampled on a
/// uniform grid; returns `(angular frequency, magnitude)` for the positive
/// half-spectrum.
pub fn dft_magnitudes(times: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    assert_eq!(times.len(), values.len());
    let n = values.len();
    let dt = times[1] - times[0];
    let span = dt * n as f64;
    let mean: f64 = values.iter().sum::<f64>() / n as f64;
    (1..=n / 2)
        .map(|k| {
            let omega = 2.0 * std::f64::consts::PI * k as f64 / span;
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &v) in values.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (k * idx) as f64 / n as f64;
                acc += Complex64::from_polar(v - mean, phase);
            }
            (omega, acc.norm() / n as f64)
        })
        .collect()
}

/// Local maxima of a magnitude spectrum above `threshold * max`.
pub fn spectral_peaks(spectrum: &[(f64, f64)], threshold: f64) -> Vec<(f64, f64)> {
    let top = spectrum.iter().map(|&(_, m)| m).fold(0.0f64, f64::max);
    let mut peaks = Vec::new();
    for i in 1..spectrum.len().saturating_sub(1) {
        let (_, prev) = spectrum[i - 1];
        let (w, mag) = spectrum[i];
        let (_, next) = spectrum[i + 1];
        if mag > prev && mag >= next && mag >= threshold * top {
            peaks.push((w, mag));
        }
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn p() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn initial_population_is_one() {
        let grid = TimeGrid::new(0.0, 5.0, 11).unwrap();
        let s = populations_block(h(3), h(-3), 4, p(), &grid).unwrap();
        let i0 = s.labels.iter().position(|l| l.contains("m=-3/2")).unwrap();
        assert!((s.columns[i0][0] - 1.0).abs() < 1e-14);
        assert!(s.conservation_defect() < tol::ORACLE);
    }

    #[test]
    fn half_spin_lower_state_oscillation() {
        // Sector of |m=-1/2>|1>: population transfers as sin^2(g t).
        let grid = TimeGrid::new(0.0, 6.0, 200).unwrap();
        let s = populations_block(h(1), h(-1), 1, p(), &grid).unwrap();
        let lower = s.labels.iter().position(|l| l.contains("m=-1/2")).unwrap();
        for (k, &t) in s.times.iter().enumerate() {
            assert!((s.columns[lower][k] - t.cos().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn half_spin_recurrence() {
        for n in [0u64, 2, 5] {
            let period = std::f64::consts::PI / ((n as f64 + 1.0).sqrt());
            let grid = TimeGrid::new(0.0, period, 2).unwrap();
            let s = populations_block(h(1), h(1), n, p(), &grid).unwrap();
            let upper = s
                .labels
                .iter()
                .position(|l| l.contains("m=1/2"))
                .unwrap();
            let last = *s.columns[upper].last().unwrap();
            assert!((last - 1.0).abs() < tol::ORACLE, "n={n}: {last}");
        }
    }

    #[test]
    fn population_000_dark_and_two_level_cases() {
        let grid = TimeGrid::new(0.0, 8.0, 60).unwrap();
        // No photons: |000>|0> is annihilated by both interaction terms.
        let dark = population_000(0, p(), &grid).unwrap();
        for v in &dark.columns[0] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        // One photon: two reachable states, Rabi frequency sqrt(3) g.
        let s = population_000(1, p(), &grid).unwrap();
        for (k, &t) in s.times.iter().enumerate() {
            let expect = (3f64.sqrt() * t).cos().powi(2);
            assert!((s.columns[0][k] - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn beating_series_conserves_probability() {
        let grid = TimeGrid::default_for(1.0);
        let s = populations_block(h(3), h(-3), 4, p(), &grid).unwrap();
        assert_eq!(s.columns.len(), 4);
        assert!(s.conservation_defect() < tol::ORACLE);
    }

    #[test]
    fn full_space_matches_block_for_three_qubits() {
        let initial = InitialState::Computational {
            bits: "000".into(),
            photons: 4,
        };
        let evolver = FullSpaceEvolver::new(3, &initial, p()).unwrap();
        let block = BlockHamiltonian::from_initial(h(3), h(-3), 4, p()).unwrap();
        let basis = build_symmetry_basis(3).unwrap();
        let block_ev = SpectralEvolver::new(block.matrix()).unwrap();
        let v0 = vectors::basis(block.dim, block.index_of_m(h(-3)).unwrap());

        for t in [0.4, 1.7, 3.9, 12.3] {
            let full = evolver.evolve(t);
            let blk = block_ev.evolve(&v0, t);
            for (i, (m, photons)) in block.states().iter().enumerate() {
                // Project the full state onto |j=3/2, m> |photons>.
                let col = basis.column_of(h(3), *m, 0).unwrap();
                let mut amp = Complex64::new(0.0, 0.0);
                for (b, c) in col.iter().enumerate() {
                    amp += c.conj() * full[b * evolver.fock_dim + *photons as usize];
                }
                assert!(
                    (amp.norm_sqr() - blk[i].norm_sqr()).abs() < tol::ORACLE,
                    "t={t} m={m}"
                );
            }
        }
    }

    #[test]
    fn singlet_is_stationary() {
        let initial = InitialState::Sector {
            j: h(0),
            m: h(0),
            copy: 0,
            photons: 3,
        };
        let evolver = FullSpaceEvolver::new(2, &initial, p()).unwrap();
        let v0 = evolver.evolve(0.0);
        let vt = evolver.evolve(7.3);
        for (a, b) in v0.iter().zip(&vt) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn excitation_expectation_is_conserved() {
        let initial = InitialState::Computational {
            bits: "010".into(),
            photons: 2,
        };
        let evolver = FullSpaceEvolver::new(3, &initial, p()).unwrap();
        let exc = collective::excitation_operator(3, evolver.fock_dim).unwrap();
        let expectation = |v: &[C64]| -> f64 {
            let ev = exc.apply(v).unwrap();
            vectors::dot(v, &ev).re
        };
        let e0 = expectation(&evolver.evolve(0.0));
        for t in [0.9, 4.2, 17.0] {
            assert!((expectation(&evolver.evolve(t)) - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn initial_state_validation() {
        assert!(InitialState::Computational {
            bits: "01x".into(),
            photons: 0
        }
        .to_vector(3, 2)
        .is_err());
        assert!(InitialState::Computational {
            bits: "01".into(),
            photons: 5
        }
        .to_vector(2, 3)
        .is_err());
    }

    #[test]
    fn amplitude_list_initial_state() {
        // A raw amplitude list equal to |01>|1> evolves like the product form.
        let fock = 3;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4 * fock];
        let bits = 0b01;
        amps[bits * fock + 1] = Complex64::new(1.0, 0.0);
        let raw = InitialState::Amplitudes {
            fock_dim: fock,
            amplitudes: amps,
        };
        assert_eq!(raw.total_excitations(2).unwrap(), 2);
        let via_raw = FullSpaceEvolver::new(2, &raw, p()).unwrap().evolve(1.3);
        let via_bits = FullSpaceEvolver::new(
            2,
            &InitialState::Computational {
                bits: "01".into(),
                photons: 1,
            },
            p(),
        )
        .unwrap()
        .evolve(1.3);
        assert!(vectors::max_abs_diff(&via_raw, &via_bits) < 1e-12);

        // Unnormalized lists are rejected.
        let bad = InitialState::Amplitudes {
            fock_dim: fock,
            amplitudes: vec![Complex64::new(0.5, 0.0); 4 * fock],
        };
        assert!(bad.to_vector(2, fock).is_err());
    }

    #[test]
    fn dft_finds_the_rabi_line() {
        // cos^2(w t) has spectral weight at 2w.
        let grid = TimeGrid::new(0.0, 80.0, 4000).unwrap();
        let times = grid.times();
        let w = 3f64.sqrt();
        let values: Vec<f64> = times.iter().map(|t| (w * t).cos().powi(2)).collect();
        let spec = dft_magnitudes(&times, &values);
        let peaks = spectral_peaks(&spec, 0.5);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].0 - 2.0 * w).abs() < 0.2);
    }

    #[test]
    fn csv_has_deterministic_full_precision() {
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let s = populations_block(h(1), h(1), 0, p(), &grid).unwrap();
        let csv1 = s.to_csv();
        let csv2 = populations_block(h(1), h(1), 0, p(), &grid).unwrap().to_csv();
        assert_eq!(csv1, csv2);
        assert!(csv1.starts_with("t,"));
        assert!(csv1.contains('e'));
    }
}
