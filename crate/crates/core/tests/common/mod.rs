#![allow(dead_code)]

use holonomy_core::chain::CouplingSet;
use holonomy_core::matrix::{su2_rotation, ComplexMatrix, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn random_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let axis = random_axis(rng);
    let phi = rng.random_range(0.0..std::f64::consts::PI);
    let chi = rng.random_range(-3.0..3.0);
    su2_rotation(phi, axis).scale(C64::from_polar(1.0, chi))
}

/// Couplings uniform in `[-1.5, 1.5)`, redrawn until `T` is well conditioned.
pub fn random_couplings(rng: &mut impl Rng) -> CouplingSet {
    loop {
        let mut draw = || -> [f64; 4] { std::array::from_fn(|_| rng.random_range(-1.5..1.5)) };
        let cs = CouplingSet::new(draw(), draw()).unwrap();
        let t = coupling_matrix_oracle(&cs);
        let fro2: f64 = t.entries().iter().map(|z| z.norm_sqr()).sum();
        if t.det2().norm() > 1e-3 * fro2 {
            return cs;
        }
    }
}

/// `T` written out entry by entry with bond order (12, 23, 34, 41).
pub fn coupling_matrix_oracle(cs: &CouplingSet) -> ComplexMatrix {
    let [j12, j23, j34, j41] = cs.j;
    let [d12, d23, d34, d41] = cs.dz;
    ComplexMatrix::from_2x2([[c(j12, -d12), c(j41, d41)], [c(j23, d23), c(j34, -d34)]])
}

fn kron_vec(a: &[[C64; 2]; 2], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = b.len();
    let mut out = vec![vec![c(0.0, 0.0); 2 * n]; 2 * n];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            for r in 0..n {
                for k in 0..n {
                    out[i * n + r][j * n + k] = x * b[r][k];
                }
            }
        }
    }
    out
}

/// `⊗_k ops[k]` with qubit 1 as the leftmost factor.
pub fn kron_chain(ops: [[[C64; 2]; 2]; 4]) -> ComplexMatrix {
    let mut acc = vec![vec![c(1.0, 0.0)]];
    for op in ops.iter().rev() {
        acc = kron_vec(op, &acc);
    }
    let flat: Vec<C64> = acc.into_iter().flatten().collect();
    ComplexMatrix::from_row_major(16, &flat).unwrap()
}

pub const ID: [[C64; 2]; 2] = [
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
];
pub const SX: [[C64; 2]; 2] = [
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
];
pub const SY: [[C64; 2]; 2] = [
    [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
    [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
];

fn pair(a: [[C64; 2]; 2], i: usize, b: [[C64; 2]; 2], j: usize) -> ComplexMatrix {
    let mut ops = [ID; 4];
    ops[i] = a;
    ops[j] = b;
    kron_chain(ops)
}

/// `H = ½ Σ_bonds [J(σxσx + σyσy)/2 + D(σxσy − σyσx)/2]` built from
/// Kronecker products, bonds (12, 23, 34, 41).
pub fn full_hamiltonian_oracle(cs: &CouplingSet) -> ComplexMatrix {
    let bonds = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let mut h = ComplexMatrix::zeros(16);
    for (k, &(a, b)) in bonds.iter().enumerate() {
        let xy = &pair(SX, a, SX, b) + &pair(SY, a, SY, b);
        let dm = &pair(SX, a, SY, b) - &pair(SY, a, SX, b);
        h = &h + &(&xy.scale_re(0.25 * cs.j[k]) + &dm.scale_re(0.25 * cs.dz[k]));
    }
    h
}

/// `e^{-i a H}` by scaling and squaring a Taylor series.
pub fn taylor_exp(h: &ComplexMatrix, a: f64) -> ComplexMatrix {
    let n = h.dim();
    let norm = h.frobenius_norm() * a.abs();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.1 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = h.scale(c(0.0, -a * scale));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..30 {
        term = (&term * &x).scale_re(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Rows/columns `[8, 2, 4, 1]` of a 16-dim operator.
pub fn restrict(m: &ComplexMatrix) -> ComplexMatrix {
    let idx = [8usize, 2, 4, 1];
    ComplexMatrix::from_fn(4, |r, k| m[(idx[r], idx[k])])
}

/// `cos(α/2) I − i sin(α/2)(cos φ σx + sin φ σy)`.
pub fn abelian_pulse_oracle(phi: f64, area: f64) -> ComplexMatrix {
    let (s, co) = (0.5 * area).sin_cos();
    let off = c(0.0, -s) * C64::from_polar(1.0, -phi);
    let off_t = c(0.0, -s) * C64::from_polar(1.0, phi);
    ComplexMatrix::from_2x2([[c(co, 0.0), off], [off_t, c(co, 0.0)]])
}
