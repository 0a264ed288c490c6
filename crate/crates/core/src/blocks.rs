//! Per-multiplet physics: ladder coefficients, fixed-excitation block
//! Hamiltonians, and Rabi splitting spectra (analytic where available,
//! numerical everywhere).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::eig_hermitian;
use crate::CMatrix;
#[cfg(test)]
use crate::tol;

/// Coupling strength and detuning of the register-resonator system.
///
/// `g` sets the frequency unit; `delta` is the qubit detuning in units of `g`
/// (zero on the resonant main line).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub g: f64,
    pub delta: f64,
}

impl SystemParams {
    pub fn new(g: f64, delta: f64) -> Result<Self> {
        if g <= 0.0 || g.is_nan() {
            return Err(Error::Domain(format!("coupling must be positive, got {g}")));
        }
        Ok(SystemParams { g, delta })
    }

    pub fn resonant(g: f64) -> Result<Self> {
        Self::new(g, 0.0)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams { g: 1.0, delta: 0.0 }
    }
}

/// Ladder coefficient `nu~_{j,m} = sqrt((j - m)(1 + j + m))`, the amplitude of
/// `|j,m> -> |j,m+1>` accompanying one photon exchange.
pub fn nu_tilde(j: HalfInt, m: HalfInt) -> Result<f64> {
    if m.twice().abs() > j.twice() || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::Domain(format!("m={m} outside the j={j} ladder")));
    }
    // (j - m)(1 + j + m) = (tj - tm)(2 + tj + tm)/4 exactly in twice-integers.
    let tj = i64::from(j.twice());
    let tm = i64::from(m.twice());
    let num = (tj - tm) * (2 + tj + tm);
    Ok(((num as f64) / 4.0).sqrt())
}

/// One fixed-excitation block of a spin-`j` Jaynes-Cummings ladder.
///
/// State `i` of the block is `|j, m_top - i> |n_top + i>`: climbing down the
/// ladder deposits photons.  For a full ladder `m_top = j` and `n_top` is the
/// photon count co-resident with the top state.  When the sector holds fewer
/// than `2j` excitations only the bottom `n_exc + 1` states are reachable.
#[derive(Clone, Debug)]
pub struct BlockHamiltonian {
    pub j: HalfInt,
    pub m_top: HalfInt,
    pub n_top: u64,
    pub dim: usize,
    pub params: SystemParams,
    matrix: CMatrix,
}

impl BlockHamiltonian {
    /// Full `(2j+1)`-state ladder with `n_top` photons at the top state.
    pub fn full(j: HalfInt, n_top: u64, params: SystemParams) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::Domain(format!("negative pseudospin j={j}")));
        }
        Self::build(j, j, n_top, params)
    }

    /// Sector with `n_exc` total excitations above `|j,-j>|0>`; the dimension
    /// is `min(2j+1, n_exc+1)`.
    pub fn from_total_excitations(j: HalfInt, n_exc: u64, params: SystemParams) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::Domain(format!("negative pseudospin j={j}")));
        }
        let two_j = j.twice() as u64;
        if n_exc >= two_j {
            Self::build(j, j, n_exc - two_j, params)
        } else {
            let m_top = HalfInt::from_twice(-j.twice() + 2 * n_exc as i32);
            Self::build(j, m_top, 0, params)
        }
    }

    /// Sector containing the initial state `|j, m0> |photons>`.
    pub fn from_initial(j: HalfInt, m0: HalfInt, photons: u64, params: SystemParams) -> Result<Self> {
        if m0.twice().abs() > j.twice() || (j.twice() - m0.twice()) % 2 != 0 {
            return Err(Error::Domain(format!("m={m0} outside the j={j} ladder")));
        }
        let qubit_exc = ((j.twice() + m0.twice()) / 2) as u64;
        Self::from_total_excitations(j, qubit_exc + photons, params)
    }

    fn build(j: HalfInt, m_top: HalfInt, n_top: u64, params: SystemParams) -> Result<Self> {
        let dim = ((m_top.twice() + j.twice()) / 2 + 1) as usize;
        let mut matrix = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            let m = HalfInt::from_twice(m_top.twice() - 2 * i as i32);
            if params.delta != 0.0 {
                matrix[(i, i)] = Complex64::new(params.g * params.delta * m.as_f64(), 0.0);
            }
            if i + 1 < dim {
                let m_below = HalfInt::from_twice(m.twice() - 2);
                let coupling = params.g
                    * nu_tilde(j, m_below)?
                    * ((n_top + i as u64 + 1) as f64).sqrt();
                matrix[(i, i + 1)] = Complex64::new(coupling, 0.0);
                matrix[(i + 1, i)] = Complex64::new(coupling, 0.0);
            }
        }
        Ok(BlockHamiltonian {
            j,
            m_top,
            n_top,
            dim,
            params,
            matrix,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `(m, photons)` of each block state, top of the reachable ladder first.
    pub fn states(&self) -> Vec<(HalfInt, u64)> {
        (0..self.dim)
            .map(|i| {
                (
                    HalfInt::from_twice(self.m_top.twice() - 2 * i as i32),
                    self.n_top + i as u64,
                )
            })
            .collect()
    }

    /// Index of `|j, m>` within the block, if reachable.
    pub fn index_of_m(&self, m: HalfInt) -> Option<usize> {
        let offset = self.m_top.twice() - m.twice();
        if offset < 0 || offset % 2 != 0 {
            return None;
        }
        let i = (offset / 2) as usize;
        (i < self.dim).then_some(i)
    }

    /// Total excitations carried by the sector.
    pub fn total_excitations(&self) -> u64 {
        let qubit_exc = ((self.j.twice() + self.m_top.twice()) / 2) as u64;
        qubit_exc + self.n_top
    }

    /// Eigenvalues in units of `g`, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let e = eig_hermitian(&self.matrix)?;
        Ok(e.eigenvalues.iter().map(|l| l / self.params.g).collect())
    }
}

/// Eigenfrequencies of one block, in units of `g`, sorted ascending.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RabiSpectrum {
    pub j: HalfInt,
    /// Photon count co-resident with the top ladder state.
    pub n: u64,
    pub values: Vec<f64>,
    /// Whether the analytic route produced the values (resonant, `j <= 2`).
    pub analytic: bool,
}

/// Rabi splittings of the full spin-`j` ladder with `n` photons at the top.
///
/// On resonance with `j <= 2` the closed-form frequencies are returned; they
/// agree with the numerical eigensolver to [`crate::tol::RECONSTRUCTION`], which the
/// tests enforce.  Every other case uses the eigensolver.
pub fn rabi_splittings(j: HalfInt, n: u64, params: SystemParams) -> Result<RabiSpectrum> {
    if let Some(mut values) = analytic_splittings(j, n, params) {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Ok(RabiSpectrum {
            j,
            n,
            values,
            analytic: true,
        });
    }
    let block = BlockHamiltonian::full(j, n, params)?;
    Ok(RabiSpectrum {
        j,
        n,
        values: block.eigenvalues()?,
        analytic: false,
    })
}

/// Closed-form splittings (units of `g`) for the resonant `j <= 2` ladders;
/// `None` where no analytic solution exists.
pub fn analytic_splittings(j: HalfInt, n: u64, params: SystemParams) -> Option<Vec<f64>> {
    if params.delta != 0.0 {
        return None;
    }
    let n = n as f64;
    match j.twice() {
        0 => Some(vec![0.0]),
        1 => {
            let r = (n + 1.0).sqrt();
            Some(vec![-r, r])
        }
        2 => {
            let r = 2.0 * (n + 1.5).sqrt();
            Some(vec![-r, 0.0, r])
        }
        3 => {
            let (lo, hi) = lambda_three_half(n);
            Some(vec![-hi.sqrt(), -lo.sqrt(), lo.sqrt(), hi.sqrt()])
        }
        4 => {
            let s = n + 2.5;
            let root = 6.0 * (s * s + 2.0).sqrt();
            let lo = (10.0 * s - root).sqrt();
            let hi = (10.0 * s + root).sqrt();
            Some(vec![-hi, -lo, 0.0, lo, hi])
        }
        _ => None,
    }
}

/// `lambda_{-,+} = 5(n+2) -+ sqrt(16(n+2)^2 + 9)`, the squared j=3/2 Rabi
/// frequencies in units of `g^2`; equivalently
/// `5(n+2) -+ 4 sqrt((n+2)^2 + 9/16)`.  At `n = 0` the square roots are
/// 1.207 and 4.306.
pub fn lambda_three_half(n: f64) -> (f64, f64) {
    let s = n + 2.0;
    let root = (16.0 * s * s + 9.0).sqrt();
    (5.0 * s - root, 5.0 * s + root)
}

/// Large-`n` reference splittings `+-k sqrt(n)` with `k <= 2j` of the parity
/// of `2j`; includes 0 for integer `j`.
pub fn asymptotic_splittings(j: HalfInt, n: u64) -> Vec<f64> {
    let two_j = j.twice();
    let root = (n as f64).sqrt();
    let mut out = Vec::new();
    let start = if two_j % 2 == 0 { 0 } else { 1 };
    let mut k = start;
    while k <= two_j {
        if k == 0 {
            out.push(0.0);
        } else {
            out.push(-(k as f64) * root);
            out.push(k as f64 * root);
        }
        k += 2;
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Shifted fit family `(2j - 2k) sqrt(n - 2k)`, `k = 0, 1, ...` while the
/// prefactor stays positive; `n` counts total excitations.  This is the curve
/// family the positive eigenvalues approach from below as `n` grows.
pub fn fit_reference_splittings(j: HalfInt, n: u64) -> Vec<f64> {
    let two_j = j.twice() as u64;
    let mut out = Vec::new();
    let mut k = 0u64;
    while 2 * k < two_j && 2 * k <= n {
        let prefactor = (two_j - 2 * k) as f64;
        out.push(prefactor * ((n - 2 * k) as f64).sqrt());
        k += 1;
    }
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

/// Spectrum symmetry at resonance: eigenvalues come in `+-` pairs, plus a zero
/// for odd block dimension.
pub fn spectrum_symmetry_defect(values: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let n = values.len();
    for i in 0..n / 2 {
        worst = worst.max((values[i] + values[n - 1 - i]).abs());
    }
    if n % 2 == 1 {
        worst = worst.max(values[n / 2].abs());
    }
    worst
}
