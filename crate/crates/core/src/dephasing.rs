//! Qubit dephasing next to the resonator: the vectorized master equation in
//! the doubled (ket (x) bra) space, its closed-form sector propagator, the
//! infinite-time state, and the detuned characteristic polynomial.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decay::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::expm;
use crate::{CMatrix, C64};
#[cfg(test)]
use crate::tol;

/// Coupling `g`, detuning `delta` and dephasing rate `phi`, the latter two in
/// units of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingParams {
    pub g: f64,
    pub delta: f64,
    pub phi: f64,
}

impl DephasingParams {
    pub fn new(g: f64, delta: f64, phi: f64) -> Result<Self> {
        if g <= 0.0 || g.is_nan() {
            return Err(Error::Domain(format!("coupling must be positive, got {g}")));
        }
        if phi < 0.0 {
            return Err(Error::Domain(format!("dephasing rate must be >= 0, got {phi}")));
        }
        Ok(DephasingParams { g, delta, phi })
    }

    fn phi_abs(&self) -> f64 {
        self.phi * self.g
    }

    fn delta_abs(&self) -> f64 {
        self.delta * self.g
    }
}

/// Block index inside the doubled space: the qubit (ket, bra) pair.
/// Ordering `(rho_11, rho_10, rho_01, rho_00)`, `1` = excited.
const BLOCKS: [(u8, u8); 4] = [(1, 1), (1, 0), (0, 1), (0, 0)];

/// A vectorized density matrix of the qubit-resonator pair: amplitudes over
/// `(qubit ket, qubit bra)` blocks with `(ket photon, bra photon)` pairs.
#[derive(Clone, Debug)]
pub struct DoubledSpaceState {
    pub fock_dim: usize,
    /// Index `block * f^2 + n1 * f + n2`.
    pub data: Vec<C64>,
}

impl DoubledSpaceState {
    pub fn zeros(fock_dim: usize) -> Self {
        DoubledSpaceState {
            fock_dim,
            data: vec![Complex64::new(0.0, 0.0); 4 * fock_dim * fock_dim],
        }
    }

    pub fn index(&self, block: usize, n1: usize, n2: usize) -> usize {
        block * self.fock_dim * self.fock_dim + n1 * self.fock_dim + n2
    }

    /// From a density matrix over qubit (x) Fock, qubit index 1 = excited.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits != 1 {
            return Err(Error::Shape("the dephasing solver treats a single qubit".into()));
        }
        let f = rho.fock_dim;
        let mut out = Self::zeros(f);
        for (block, &(qi, qj)) in BLOCKS.iter().enumerate() {
            for n1 in 0..f {
                for n2 in 0..f {
                    let r = (qi as usize) * f + n1;
                    let c = (qj as usize) * f + n2;
                    let idx = out.index(block, n1, n2);
                    out.data[idx] = rho.matrix[(r, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let f = self.fock_dim;
        let mut m = CMatrix::zeros(2 * f, 2 * f);
        for (block, &(qi, qj)) in BLOCKS.iter().enumerate() {
            for n1 in 0..f {
                for n2 in 0..f {
                    m[((qi as usize) * f + n1, (qj as usize) * f + n2)] =
                        self.data[self.index(block, n1, n2)];
                }
            }
        }
        DensityMatrix {
            n_qubits: 1,
            fock_dim: f,
            matrix: m,
        }
    }
}

/// The doubled-space generator on truncated photon spaces, built block by
/// block: `+-i g` photon ladder couplings between the four qubit blocks and
/// `-phi +- i delta` on the coherences.
///
/// Side-2 (bra) ladder operators act transposed, so raising the bra photon
/// index carries `sqrt(m+1)`.  The `+i delta` diagonal on the upper coherence
/// corresponds to the qubit Hamiltonian `-(delta/2) sigma_z`; the tests pin
/// this convention against an independently vectorized master equation.
pub fn dephasing_generator(params: DephasingParams, n1_max: usize, n2_max: usize) -> CMatrix {
    let (f1, f2) = (n1_max + 1, n2_max + 1);
    let dim = 4 * f1 * f2;
    let idx = |block: usize, n1: usize, n2: usize| block * f1 * f2 + n1 * f2 + n2;
    let g = params.g;
    let phi = params.phi_abs();
    let delta = params.delta_abs();
    let ig = Complex64::new(0.0, g);

    let mut h = CMatrix::zeros(dim, dim);
    for n1 in 0..f1 {
        for n2 in 0..f2 {
            // rho11' = +i g a2^dag rho10 - i g a1 rho01
            if n2 + 1 < f2 {
                let c = ig * ((n2 + 1) as f64).sqrt();
                h[(idx(0, n1, n2), idx(1, n1, n2 + 1))] += c;
            }
            if n1 + 1 < f1 {
                let c = -ig * ((n1 + 1) as f64).sqrt();
                h[(idx(0, n1, n2), idx(2, n1 + 1, n2))] += c;
            }
            // rho10' = +i g a2 rho11 + (-phi + i delta) rho10 - i g a1 rho00
            if n2 >= 1 {
                let c = ig * (n2 as f64).sqrt();
                h[(idx(1, n1, n2), idx(0, n1, n2 - 1))] += c;
            }
            h[(idx(1, n1, n2), idx(1, n1, n2))] += Complex64::new(-phi, delta);
            if n1 + 1 < f1 {
                let c = -ig * ((n1 + 1) as f64).sqrt();
                h[(idx(1, n1, n2), idx(3, n1 + 1, n2))] += c;
            }
            // rho01' = -i g a1^dag rho11 + (-phi - i delta) rho01 + i g a2^dag rho00
            if n1 >= 1 {
                let c = -ig * (n1 as f64).sqrt();
                h[(idx(2, n1, n2), idx(0, n1 - 1, n2))] += c;
            }
            h[(idx(2, n1, n2), idx(2, n1, n2))] += Complex64::new(-phi, -delta);
            if n2 + 1 < f2 {
                let c = ig * ((n2 + 1) as f64).sqrt();
                h[(idx(2, n1, n2), idx(3, n1, n2 + 1))] += c;
            }
            // rho00' = -i g a1^dag rho10 + i g a2 rho01
            if n1 >= 1 {
                let c = -ig * (n1 as f64).sqrt();
                h[(idx(3, n1, n2), idx(1, n1 - 1, n2))] += c;
            }
            if n2 >= 1 {
                let c = ig * (n2 as f64).sqrt();
                h[(idx(3, n1, n2), idx(2, n1, n2 - 1))] += c;
            }
        }
    }
    h
}

/// One conserved sector of the doubled space, labeled by
/// `(n1, n2) >= (-1, -1)`: the members are `rho11(n1,n2)`, `rho10(n1,n2+1)`,
/// `rho01(n1+1,n2)`, `rho00(n1+1,n2+1)`, dropping any with a negative index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sector {
    pub n1: i64,
    pub n2: i64,
}

impl Sector {
    /// `(block, ket photon, bra photon)` members.
    pub fn members(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::with_capacity(4);
        if self.n1 >= 0 && self.n2 >= 0 {
            v.push((0, self.n1 as usize, self.n2 as usize));
        }
        if self.n1 >= 0 {
            v.push((1, self.n1 as usize, (self.n2 + 1) as usize));
        }
        if self.n2 >= 0 {
            v.push((2, (self.n1 + 1) as usize, self.n2 as usize));
        }
        v.push((3, (self.n1 + 1) as usize, (self.n2 + 1) as usize));
        v
    }
}

/// The generator restricted to one sector, in member order.
pub fn sector_generator(params: DephasingParams, sector: Sector) -> CMatrix {
    let g = params.g;
    let phi = params.phi_abs();
    let delta = params.delta_abs();
    let (n1, n2) = (sector.n1, sector.n2);
    let u = g * ((n1 + 1) as f64).sqrt();
    let v = g * ((n2 + 1) as f64).sqrt();
    let i = Complex64::new(0.0, 1.0);

    match (n1 >= 0, n2 >= 0) {
        (true, true) => {
            let mut a = CMatrix::zeros(4, 4);
            a[(0, 1)] = i * v;
            a[(0, 2)] = -i * u;
            a[(1, 0)] = i * v;
            a[(1, 1)] = Complex64::new(-phi, delta);
            a[(1, 3)] = -i * u;
            a[(2, 0)] = -i * u;
            a[(2, 2)] = Complex64::new(-phi, -delta);
            a[(2, 3)] = i * v;
            a[(3, 1)] = -i * u;
            a[(3, 2)] = i * v;
            a
        }
        (true, false) => {
            // [rho10(n1, 0), rho00(n1+1, 0)]
            let mut a = CMatrix::zeros(2, 2);
            a[(0, 0)] = Complex64::new(-phi, delta);
            a[(0, 1)] = -i * u;
            a[(1, 0)] = -i * u;
            a
        }
        (false, true) => {
            // [rho01(0, n2), rho00(0, n2+1)]
            let mut a = CMatrix::zeros(2, 2);
            a[(0, 0)] = Complex64::new(-phi, -delta);
            a[(0, 1)] = i * v;
            a[(1, 0)] = i * v;
            a
        }
        (false, false) => CMatrix::zeros(1, 1),
    }
}

/// `sin(z)/z`, stable near zero.
fn sinc(z: C64) -> C64 {
    if z.norm() < 1e-6 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Closed-form propagator `exp(generator * t)` of one sector on resonance.
///
/// Everything is built from the two mode frequencies
/// `Omega_-+ = sqrt(4 g^2 (sqrt(n1+1) -+ sqrt(n2+1))^2 - phi^2)` through
/// `C = cos(Omega t/2)`, `S = phi sin(Omega t/2)/Omega` and the transfer
/// amplitudes `G = 2 kappa sin(Omega t/2)/Omega`, all damped by
/// `exp(-phi t/2)`.  Overdamped sectors make `Omega` imaginary and the same
/// expressions continue analytically.
pub fn dephasing_closed_form(params: DephasingParams, sector: Sector, t: f64) -> Result<CMatrix> {
    if params.delta != 0.0 {
        return Err(Error::Unsupported(
            "the closed-form dephasing propagator requires delta = 0".into(),
        ));
    }
    let g = params.g;
    let phi = params.phi_abs();
    let damp = Complex64::new((-phi * t / 2.0).exp(), 0.0);
    let (n1, n2) = (sector.n1, sector.n2);
    let u = g * ((n1 + 1) as f64).sqrt();
    let v = g * ((n2 + 1) as f64).sqrt();

    // Half-phase quantities of one damped mode with coupling kappa.
    let mode = |kappa: f64| -> (C64, C64, C64) {
        let omega = Complex64::new(4.0 * kappa * kappa - phi * phi, 0.0).sqrt();
        let half = omega * t / 2.0;
        let c = half.cos();
        let sc = sinc(half) * t / 2.0;
        (c, sc * phi, sc * (2.0 * kappa))
    };

    match (n1 >= 0, n2 >= 0) {
        (true, true) => {
            let (cm, sm, gm) = mode(v - u);
            let (cp, sp, gp) = mode(u + v);
            let half = Complex64::new(0.5, 0.0);
            let i = Complex64::new(0.0, 1.0);
            let diag_pop = (cm + cp + sm + sp) * half;
            let diag_coh = (cm + cp - sm - sp) * half;
            let cross_pop = (cm - cp + sm - sp) * half;
            let cross_coh = (cm - cp - sm + sp) * half;
            let g_sum = i * (gm + gp) * half;
            let g_diff = i * (gm - gp) * half;
            let mut m = CMatrix::zeros(4, 4);
            m[(0, 0)] = diag_pop;
            m[(0, 1)] = g_sum;
            m[(0, 2)] = g_diff;
            m[(0, 3)] = cross_pop;
            m[(1, 0)] = g_sum;
            m[(1, 1)] = diag_coh;
            m[(1, 2)] = cross_coh;
            m[(1, 3)] = g_diff;
            m[(2, 0)] = g_diff;
            m[(2, 1)] = cross_coh;
            m[(2, 2)] = diag_coh;
            m[(2, 3)] = g_sum;
            m[(3, 0)] = cross_pop;
            m[(3, 1)] = g_diff;
            m[(3, 2)] = g_sum;
            m[(3, 3)] = diag_pop;
            Ok(m.scale(damp))
        }
        (true, false) | (false, true) => {
            let kappa = if n1 >= 0 { u } else { v };
            let sign = if n1 >= 0 { -1.0 } else { 1.0 };
            let (c, s, gk) = mode(kappa);
            let i = Complex64::new(0.0, sign);
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = c - s;
            m[(0, 1)] = i * gk;
            m[(1, 0)] = i * gk;
            m[(1, 1)] = c + s;
            Ok(m.scale(damp))
        }
        (false, false) => Ok(CMatrix::identity(1)),
    }
}

/// Evolve a doubled-space state for time `t`, sector by sector (exact within
/// the truncation; sectors cut by the truncation must carry no weight).
pub fn evolve(state: &DoubledSpaceState, params: DephasingParams, t: f64) -> Result<DoubledSpaceState> {
    let f = state.fock_dim as i64;
    let mut out = DoubledSpaceState::zeros(state.fock_dim);
    for n1 in -1..f {
        for n2 in -1..f {
            let sector = Sector { n1, n2 };
            let members = sector.members();
            let complete = members
                .iter()
                .all(|&(_, k1, k2)| (k1 as i64) < f && (k2 as i64) < f);
            if !complete {
                // A cut sector may not carry amplitude.
                for &(b, k1, k2) in &members {
                    if (k1 as i64) < f && (k2 as i64) < f {
                        let amp = state.data[state.index(b, k1, k2)];
                        if amp.norm() > 1e-13 {
                            return Err(Error::Shape(format!(
                                "Fock truncation {f} cuts a populated sector ({n1},{n2})"
                            )));
                        }
                    }
                }
                continue;
            }
            let amps: Vec<C64> = members
                .iter()
                .map(|&(b, k1, k2)| state.data[state.index(b, k1, k2)])
                .collect();
            if amps.iter().all(|a| a.norm_sqr() == 0.0) {
                continue;
            }
            let prop = if params.delta == 0.0 {
                dephasing_closed_form(params, sector, t)?
            } else {
                expm(&sector_generator(params, sector).scale(Complex64::new(t, 0.0)))?
            };
            let moved = prop.apply(&amps)?;
            for (&(b, k1, k2), val) in members.iter().zip(moved) {
                let idx = out.index(b, k1, k2);
                out.data[idx] = val;
            }
        }
    }
    Ok(out)
}

/// Evolve a pure initial state of the qubit-resonator pair and return the
/// density matrix at time `t`.
pub fn evolve_pure(initial: &[C64], fock_dim: usize, params: DephasingParams, t: f64) -> Result<DensityMatrix> {
    let rho = DensityMatrix::from_pure(1, fock_dim, initial)?;
    let doubled = DoubledSpaceState::from_density(&rho)?;
    Ok(evolve(&doubled, params, t)?.to_density())
}

/// The pure initial state `cos(theta)|up, n> + e^(i alpha) sin(theta)|down, m>`.
pub fn superposition_state(theta: f64, alpha: f64, n: u64, m: u64, fock_dim: usize) -> Vec<C64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * fock_dim];
    // Qubit index 1 = excited = "up".
    v[fock_dim + n as usize] = Complex64::new(theta.cos(), 0.0);
    v[m as usize] = Complex64::from_polar(theta.sin(), alpha);
    v
}

/// Infinite-time state of pure dephasing on resonance for the initial state
/// `cos(theta)|up,n> + e^(i alpha) sin(theta)|down,m>`.
///
/// Every coherence dies; each population equilibrates with its ladder partner:
/// the `|up,n>` weight spreads over `|up,n>` and `|down,n+1>`, and for
/// `m >= 1` the `|down,m>` weight spreads over `|down,m>` and `|up,m-1>`
/// (`|down,0>` has no partner and keeps its full weight).
pub fn dephasing_steady_state(
    theta: f64,
    alpha: f64,
    n: u64,
    m: u64,
    params: DephasingParams,
) -> Result<DensityMatrix> {
    let _ = alpha;
    if params.phi <= 0.0 {
        return Err(Error::Domain(
            "without dephasing there is no steady state to relax to".into(),
        ));
    }
    let fock_dim = ((n + 2).max(m + 1)) as usize;
    let c = theta.cos().powi(2);
    let s = theta.sin().powi(2);
    let mut rho = CMatrix::zeros(2 * fock_dim, 2 * fock_dim);
    let up = |p: u64| fock_dim + p as usize;
    let down = |p: u64| p as usize;
    rho[(up(n), up(n))] += Complex64::new(c / 2.0, 0.0);
    rho[(down(n + 1), down(n + 1))] += Complex64::new(c / 2.0, 0.0);
    if m >= 1 {
        rho[(down(m), down(m))] += Complex64::new(s / 2.0, 0.0);
        rho[(up(m - 1), up(m - 1))] += Complex64::new(s / 2.0, 0.0);
    } else {
        rho[(down(0), down(0))] += Complex64::new(s, 0.0);
    }
    Ok(DensityMatrix {
        n_qubits: 1,
        fock_dim,
        matrix: rho,
    })
}

/// Coefficients of the quartic characteristic polynomial of one `(n1, n2)`
/// sector, `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`, highest order first.
///
/// The first four follow the published expansion; the published constant term
/// is typographically truncated and is reconstructed here from the sector
/// matrix as `g^4 (n1 - n2)^2` (the product of the four eigenvalues).
pub fn char_poly_coefficients(params: DephasingParams, n1: u64, n2: u64) -> [f64; 5] {
    let g2 = params.g * params.g;
    let phi = params.phi_abs();
    let delta = params.delta_abs();
    let (n1, n2) = (n1 as f64, n2 as f64);
    [
        1.0,
        2.0 * phi,
        2.0 * n1 * g2 + 2.0 * n2 * g2 + 4.0 * g2 + delta * delta + phi * phi,
        phi * (2.0 * n1 * g2 + 2.0 * n2 * g2 + 4.0 * g2),
        g2 * g2 * (n1 - n2) * (n1 - n2),
    ]
}

/// Roots of the sector characteristic polynomial, with their residual against
/// the explicit sector matrix.
#[derive(Clone, Debug, Serialize)]
pub struct CharPolyRoots {
    pub coefficients: [f64; 5],
    pub roots: Vec<C64>,
    /// `max |det(A - x I)|`, normalized by `max(1, |A|^4)`, over the roots.
    pub det_residual: f64,
}

/// Solve the printed quartic (with the reconstructed constant term) and
/// cross-check each root against the explicit sector matrix.
pub fn char_poly_roots(params: DephasingParams, n1: u64, n2: u64) -> Result<CharPolyRoots> {
    let coefficients = char_poly_coefficients(params, n1, n2);
    let monic: Vec<C64> = coefficients
        .iter()
        .map(|&c| Complex64::new(c, 0.0))
        .collect();
    let roots = durand_kerner(&monic)?;

    let a = sector_generator(
        params,
        Sector {
            n1: n1 as i64,
            n2: n2 as i64,
        },
    );
    let scale = a.max_abs().max(1.0).powi(4);
    let mut det_residual: f64 = 0.0;
    for &r in &roots {
        let mut shifted = a.clone();
        for i in 0..4 {
            shifted[(i, i)] -= r;
        }
        det_residual = det_residual.max(det4(&shifted).norm() / scale);
    }
    Ok(CharPolyRoots {
        coefficients,
        roots,
        det_residual,
    })
}

/// Durand-Kerner simultaneous root iteration on a monic polynomial given by
/// its coefficients, highest order first.
fn durand_kerner(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len() - 1;
    let eval = |x: C64| -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs {
            acc = acc * x + c;
        }
        acc
    };
    let radius = 1.0
        + coeffs[1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..degree).map(|k| seed.powu(k as u32 + 1) * radius).collect();
    for _ in 0..500 {
        let mut shift: f64 = 0.0;
        for k in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 * radius {
            return Ok(roots);
        }
    }
    Err(Error::Domain("root iteration failed to converge".into()))
}

fn det4(m: &CMatrix) -> C64 {
    // LU-free cofactor expansion; fine at this size.
    let minor = |rows: [usize; 3], cols: [usize; 3]| -> C64 {
        let a = |r: usize, c: usize| m[(rows[r], cols[c])];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    let mut det = Complex64::new(0.0, 0.0);
    let all = [1usize, 2, 3];
    for (k, sign) in [(0usize, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)] {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        det += m[(0, k)] * minor(all, [cols[0], cols[1], cols[2]]) * Complex64::new(sign, 0.0);
    }
    det
}

/// Expected sector eigenvalues on resonance: `-phi/2 +- i Omega_-+ / 2`.
pub fn resonant_sector_eigenvalues(params: DephasingParams, n1: u64, n2: u64) -> Vec<C64> {
    let g = params.g;
    let phi = params.phi_abs();
    let u = g * ((n1 + 1) as f64).sqrt();
    let v = g * ((n2 + 1) as f64).sqrt();
    let mut out = Vec::with_capacity(4);
    for kappa in [v - u, u + v] {
        let omega = Complex64::new(4.0 * kappa * kappa - phi * phi, 0.0).sqrt();
        let i = Complex64::new(0.0, 0.5);
        out.push(Complex64::new(-phi / 2.0, 0.0) + i * omega);
        out.push(Complex64::new(-phi / 2.0, 0.0) - i * omega);
    }
    out
}
