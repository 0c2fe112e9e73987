//! Cyclic four-qubit chain with XY and DM nearest-neighbour couplings.
//!
//! Full-space states are indexed with qubit 1 as the most significant bit,
//! so `|b₁b₂b₃b₄⟩` has index `8b₁ + 4b₂ + 2b₃ + b₄`. The effective space
//! uses the interleaved single-excitation basis
//! `B = {|1000⟩, |0010⟩, |0100⟩, |0001⟩}`: the first pair spans `M₀`, the
//! second `M₁`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{c, eigh, pauli_x, pauli_y, pauli_z, ComplexMatrix, C64};

/// Full-space indices of the basis `B`, in order.
pub const BASIS_B: [usize; 4] = [0b1000, 0b0010, 0b0100, 0b0001];

/// Qubit count of the chain.
pub const SITES: usize = 4;

const FULL_DIM: usize = 1 << SITES;

/// Nearest-neighbour couplings. Index `k` is the bond `(k+1, k+2)` with the
/// last bond closing the ring: `[J₁₂, J₂₃, J₃₄, J₄₁]`, likewise for `dz`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CouplingSet {
    pub j: [f64; 4],
    pub dz: [f64; 4],
}

impl CouplingSet {
    pub fn new(j: [f64; 4], dz: [f64; 4]) -> Result<Self> {
        if j.iter().chain(&dz).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("couplings must be finite"));
        }
        Ok(Self { j, dz })
    }

    pub fn is_trivial(&self) -> bool {
        self.j.iter().chain(&self.dz).all(|&x| x == 0.0)
    }
}

/// Single-qubit operators `a` on `site_a` and `b` on `site_b` (0-based),
/// identity elsewhere.
pub fn two_site_operator(a: &ComplexMatrix, site_a: usize, b: &ComplexMatrix, site_b: usize) -> ComplexMatrix {
    debug_assert!(site_a != site_b && site_a < SITES && site_b < SITES);
    let bit = |idx: usize, site: usize| (idx >> (SITES - 1 - site)) & 1;
    let mask = (1 << (SITES - 1 - site_a)) | (1 << (SITES - 1 - site_b));
    ComplexMatrix::from_fn(FULL_DIM, |r, col| {
        if (r & !mask) != (col & !mask) {
            return c(0.0, 0.0);
        }
        a[(bit(r, site_a), bit(col, site_a))] * b[(bit(r, site_b), bit(col, site_b))]
    })
}

/// Single-qubit operator on `site`, identity elsewhere.
pub fn one_site_operator(a: &ComplexMatrix, site: usize) -> ComplexMatrix {
    let shift = SITES - 1 - site;
    let mask = 1 << shift;
    ComplexMatrix::from_fn(FULL_DIM, |r, col| {
        if (r & !mask) != (col & !mask) {
            return c(0.0, 0.0);
        }
        a[((r >> shift) & 1, (col >> shift) & 1)]
    })
}

/// `R^XY = (σ_xσ_x + σ_yσ_y)/2` on a bond.
pub fn xy_term(site_a: usize, site_b: usize) -> ComplexMatrix {
    let (x, y) = (pauli_x(), pauli_y());
    (&two_site_operator(&x, site_a, &x, site_b) + &two_site_operator(&y, site_a, &y, site_b)).scale_re(0.5)
}

/// `R^DM = (σ_xσ_y − σ_yσ_x)/2` on a bond (first factor on `site_a`).
pub fn dm_term(site_a: usize, site_b: usize) -> ComplexMatrix {
    let (x, y) = (pauli_x(), pauli_y());
    (&two_site_operator(&x, site_a, &y, site_b) - &two_site_operator(&y, site_a, &x, site_b)).scale_re(0.5)
}

/// `H = ½ Σ_k (J_{k,k+1} R^XY + D^z_{k,k+1} R^DM)` on the 16-dim space,
/// without the envelope factor.
pub fn build_full_hamiltonian(cs: &CouplingSet) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(FULL_DIM);
    for k in 0..SITES {
        let (a, b) = (k, (k + 1) % SITES);
        if cs.j[k] != 0.0 {
            h = &h + &xy_term(a, b).scale_re(0.5 * cs.j[k]);
        }
        if cs.dz[k] != 0.0 {
            h = &h + &dm_term(a, b).scale_re(0.5 * cs.dz[k]);
        }
    }
    h
}

/// `Σ_k σ_z^k`.
pub fn total_sz() -> ComplexMatrix {
    (0..SITES).fold(ComplexMatrix::zeros(FULL_DIM), |acc, k| {
        &acc + &one_site_operator(&pauli_z(), k)
    })
}

/// `T = [[J₁₂ − iD₁₂, J₄₁ + iD₄₁], [J₂₃ + iD₂₃, J₃₄ − iD₃₄]]`.
pub fn coupling_matrix(cs: &CouplingSet) -> ComplexMatrix {
    let [j12, j23, j34, j41] = cs.j;
    let [d12, d23, d34, d41] = cs.dz;
    ComplexMatrix::from_2x2([[c(j12, -d12), c(j41, d41)], [c(j23, d23), c(j34, -d34)]])
}

/// Inverse of [`coupling_matrix`].
pub fn couplings_from_matrix(t: &ComplexMatrix) -> CouplingSet {
    CouplingSet {
        j: [t[(0, 0)].re, t[(1, 0)].re, t[(1, 1)].re, t[(0, 1)].re],
        dz: [-t[(0, 0)].im, t[(1, 0)].im, -t[(1, 1)].im, t[(0, 1)].im],
    }
}

/// `½[[0, T], [T†, 0]]` in the basis `B`, built directly from `T`.
pub fn effective_hamiltonian(cs: &CouplingSet) -> ComplexMatrix {
    let t = coupling_matrix(cs).scale_re(0.5);
    let z = ComplexMatrix::zeros(2);
    ComplexMatrix::from_blocks(&z, &t, &t.adjoint(), &z)
}

/// Matrix elements `⟨b_i|h|b_j⟩` over the basis `B`.
pub fn project_to_block(h16: &ComplexMatrix) -> Result<ComplexMatrix> {
    assert_eq!(h16.dim(), FULL_DIM, "project_to_block requires a 16x16 operator");
    let dev = h16.hermiticity_deviation();
    if dev > crate::matrix::DEFAULT_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let leak = outside_block_norm(h16);
    if leak > 1e-12 {
        return Err(Error::LeakageDetected { leakage: leak });
    }
    Ok(restrict_to_block(h16))
}

/// `⟨b_i|m|b_j⟩` without any checks.
pub fn restrict_to_block(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |r, col| m[(BASIS_B[r], BASIS_B[col])])
}

/// Embeds a 4×4 operator on span(B) into the full space (zero elsewhere).
pub fn embed_block(m4: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(FULL_DIM);
    for (r, &br) in BASIS_B.iter().enumerate() {
        for (col, &bc) in BASIS_B.iter().enumerate() {
            out[(br, bc)] = m4[(r, col)];
        }
    }
    out
}

/// `(1 − P_B)·m·P_B` as a 16×16 matrix.
fn outside_part(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(FULL_DIM);
    for &bc in &BASIS_B {
        for r in (0..FULL_DIM).filter(|r| !BASIS_B.contains(r)) {
            out[(r, bc)] = m[(r, bc)];
        }
    }
    out
}

fn outside_block_norm(m: &ComplexMatrix) -> f64 {
    outside_part(m).operator_norm()
}

/// `‖(1 − P_B)·u·P_B‖₂`: how much of span(B) an operator sends outside it.
pub fn excitation_leakage(u16: &ComplexMatrix) -> f64 {
    assert_eq!(u16.dim(), FULL_DIM, "excitation_leakage requires a 16x16 operator");
    let m = outside_part(u16);
    let gram = &m.adjoint() * &m;
    match eigh(&gram) {
        Ok(eig) => eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => f64::INFINITY,
    }
}

/// Projector onto `M_q` in the basis `B`.
pub fn subspace_projector(q: usize) -> ComplexMatrix {
    assert!(q < 2, "subspace index must be 0 or 1");
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let d: [C64; 4] = if q == 0 {
        [one, one, zero, zero]
    } else {
        [zero, zero, one, one]
    };
    ComplexMatrix::diag(&d)
}
