//! Small dense complex matrices (2×2, 4×4, 16×16) and the exact
//! decompositions the rest of the crate is built on: Hermitian
//! eigendecomposition, Hermitian exponentials, the 2×2 SVD and the
//! U(2) = U(1)·SU(2) split.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for the unitarity / hermiticity predicates
/// (max absolute entry deviation).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Minimum ratio `s2 / s1` accepted by [`svd2`].
pub const SINGULAR_RATIO: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 60;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix stored row-major. Only the dimensions
/// used by the chain model (2, 4 and 16) can be constructed.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 16 => Ok(()),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

impl ComplexMatrix {
    /// Zero matrix. Panics on an unsupported dimension.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("matrix dimension must be 2, 4 or 16");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self {
            dim,
            data: entries.to_vec(),
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for col in 0..dim {
                m[(r, col)] = f(r, col);
            }
        }
        m
    }

    pub fn from_2x2(rows: [[C64; 2]; 2]) -> Self {
        Self::from_fn(2, |r, col| rows[r][col])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Block matrix `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.dim;
        debug_assert!(b.dim == n && c.dim == n && d.dim == n);
        Self::from_fn(2 * n, |r, col| {
            let blk = match (r < n, col < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(r % n, col % n)]
        })
    }

    /// Block-diagonal direct sum `a ⊕ b`.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let z = Self::zeros(a.dim);
        Self::from_blocks(a, &z, &z, b)
    }

    /// The `size × size` block whose top-left corner is `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, |r, k| self[(row + r, col + k)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, col| self[(col, r)].conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Determinant; only defined for 2×2.
    pub fn det2(&self) -> C64 {
        assert_eq!(self.dim, 2, "det2 requires a 2x2 matrix");
        self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_diff(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `max |M†M − I|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    /// `max |M − M†|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Operator (spectral) norm.
    pub fn operator_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let eig = eigh_unchecked(&gram);
        eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_2x2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

/// σ_y with σ_y|0⟩ = i|1⟩.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_2x2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

/// σ_z with σ_z|n⟩ = (1 − 2n)|n⟩.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_2x2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

/// `n·σ` for a real 3-vector.
pub fn pauli_dot(n: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_2x2([[c(n[2], 0.0), c(n[0], -n[1])], [c(n[0], n[1]), c(-n[2], 0.0)]])
}

/// Spectrum of a Hermitian matrix: ascending eigenvalues and the unitary
/// whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let dev = h.hermiticity_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(eigh_unchecked(h))
}

fn eigh_unchecked(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.dim;
    let mut a = (h + &h.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, col| v[(r, order[col])]);
    HermitianEigen { values, vectors }
}

/// Zeroes `a[p][q]` with `A ← G†AG`, `V ← VG`, where
/// `G = diag(1, e^{-iθ}) · [[c, s], [−s, c]]` on the (p, q) plane.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = apq.conj() / r;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    let g_pp = C64::new(cs, 0.0);
    let g_pq = C64::new(sn, 0.0);
    let g_qp = phase_conj * (-sn);
    let g_qq = phase_conj * cs;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// `e^{-i·a·h}` for Hermitian `h`, via eigendecomposition.
pub fn exp_hermitian(h: &ComplexMatrix, a: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(exp_from_eigen(&eig, a))
}

/// `e^{-i·a·H}` from a precomputed spectrum of `H`.
pub fn exp_from_eigen(eig: &HermitianEigen, a: f64) -> ComplexMatrix {
    let n = eig.vectors.dim();
    if a == 0.0 {
        return ComplexMatrix::identity(n);
    }
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -a * lambda))
        .collect();
    let v = &eig.vectors;
    ComplexMatrix::from_fn(n, |r, col| {
        (0..n).map(|k| v[(r, k)] * phases[k] * v[(col, k)].conj()).sum()
    })
}

/// `T = U·diag(s)·V†` for a 2×2 complex `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdTriple {
    pub u: ComplexMatrix,
    /// Singular values, descending.
    pub s: [f64; 2],
    pub v: ComplexMatrix,
}

impl SvdTriple {
    pub fn s_matrix(&self) -> ComplexMatrix {
        diag_real(self.s)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.u * &self.s_matrix()) * &self.v.adjoint()
    }

    /// True when the two singular values coincide to `rel_tol`.
    pub fn is_isoclinic(&self, rel_tol: f64) -> bool {
        (self.s[0] - self.s[1]).abs() <= rel_tol * self.s[0]
    }
}

pub(crate) fn diag_real(d: [f64; 2]) -> ComplexMatrix {
    ComplexMatrix::diag(&[c(d[0], 0.0), c(d[1], 0.0)])
}

/// Rotates `v` so its largest-magnitude component is real and positive
/// (ties go to the lowest index).
fn fix_phase(v: [C64; 2]) -> [C64; 2] {
    let (m0, m1) = (v[0].norm(), v[1].norm());
    let lead = if m1 > m0 * (1.0 + 1e-12) { v[1] } else { v[0] };
    let r = lead.norm();
    if r == 0.0 {
        return v;
    }
    let ph = lead.conj() / r;
    [v[0] * ph, v[1] * ph]
}

fn normalize2(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Unit vector orthogonal to a unit `v` in C².
fn perp2(v: [C64; 2]) -> [C64; 2] {
    [-v[1].conj(), v[0].conj()]
}

/// Canonical SVD of a 2×2 complex matrix.
///
/// `V` diagonalizes `T†T` with each column's dominant component made real
/// positive; `U = T·V·S⁻¹`. Degenerate spectra give `V = I`.
pub fn svd2(t: &ComplexMatrix) -> Result<SvdTriple> {
    assert_eq!(t.dim(), 2, "svd2 requires a 2x2 matrix");
    // After removing half the determinant phase, A = Q₁ + iQ₂ with Q₁, Q₂
    // real quaternions (Q = q₀I + i q·σ) and s₁,₂ = |q₁| ± |q₂|. This avoids
    // the cancellation in √(‖T‖² − 2|det T|) when s₁ ≈ s₂.
    let det = t.det2();
    let half = if det.norm() > 0.0 {
        C64::from_polar(1.0, -0.5 * det.arg())
    } else {
        c(1.0, 0.0)
    };
    let a = t.scale(half);
    let z0 = (a[(0, 0)] + a[(1, 1)]) * 0.5;
    let z1 = (a[(0, 1)] + a[(1, 0)]) * 0.5;
    let z2 = (a[(0, 1)] - a[(1, 0)]) * c(0.0, 0.5);
    let z3 = (a[(0, 0)] - a[(1, 1)]) * 0.5;
    let q1 = (z0.re * z0.re + z1.im * z1.im + z2.im * z2.im + z3.im * z3.im).sqrt();
    let q2 = (z0.im * z0.im + z1.re * z1.re + z2.re * z2.re + z3.re * z3.re).sqrt();
    let s1 = q1 + q2;
    let s2 = (q1 - q2).abs();
    if s1 == 0.0 || s2 < SINGULAR_RATIO * s1 {
        return Err(Error::SingularCoupling {
            ratio: if s1 > 0.0 { s2 / s1 } else { 0.0 },
        });
    }

    let gram = &t.adjoint() * t;
    let lambda = s1 * s1;
    let (a, b, d) = (gram[(0, 0)].re, gram[(0, 1)], gram[(1, 1)].re);
    let x = [b, C64::new(lambda - a, 0.0)];
    let y = [C64::new(lambda - d, 0.0), b.conj()];
    let nx = x[0].norm_sqr() + x[1].norm_sqr();
    let ny = y[0].norm_sqr() + y[1].norm_sqr();
    let v1 = if nx.max(ny).sqrt() <= 1e-13 * lambda {
        [c(1.0, 0.0), c(0.0, 0.0)]
    } else if nx >= ny {
        fix_phase(normalize2(x))
    } else {
        fix_phase(normalize2(y))
    };
    let v2 = fix_phase(perp2(v1));

    let tv1 = t.mul_vec(&v1);
    let u1 = normalize2([tv1[0], tv1[1]]);
    let w = perp2(u1);
    let tv2 = t.mul_vec(&v2);
    let proj = w[0].conj() * tv2[0] + w[1].conj() * tv2[1];
    let ph = if proj.norm() > 0.0 {
        proj / proj.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let u2 = [w[0] * ph, w[1] * ph];

    Ok(SvdTriple {
        u: ComplexMatrix::from_2x2([[u1[0], u2[0]], [u1[1], u2[1]]]),
        s: [s1, s2],
        v: ComplexMatrix::from_2x2([[v1[0], v2[0]], [v1[1], v2[1]]]),
    })
}

/// `m = e^{-iχ} · e^{-iφ n·σ/2}` with φ ∈ [0, π] and ‖n‖ = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U2Decomposition {
    pub chi: f64,
    pub phi: f64,
    pub axis: [f64; 3],
}

impl U2Decomposition {
    /// The SU(2) factor `e^{-iφ n·σ/2}`.
    pub fn su2(&self) -> ComplexMatrix {
        su2_rotation(self.phi, self.axis)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        self.su2().scale(C64::from_polar(1.0, -self.chi))
    }
}

/// `e^{-iφ n·σ/2} = cos(φ/2)·I − i·sin(φ/2)·n·σ`.
pub fn su2_rotation(phi: f64, axis: [f64; 3]) -> ComplexMatrix {
    let (s, co) = (0.5 * phi).sin_cos();
    let n = pauli_dot(axis).scale(C64::new(0.0, -s));
    &ComplexMatrix::identity(2).scale_re(co) + &n
}

fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut y = x % two_pi;
    if y <= -core::f64::consts::PI {
        y += two_pi;
    } else if y > core::f64::consts::PI {
        y -= two_pi;
    }
    y
}

/// Splits a 2×2 unitary into its U(1) phase and SU(2) rotation.
///
/// The χ mod π ambiguity is resolved by requiring `tr(e^{iχ}m) ≥ 0`; at
/// φ = π (trace zero) the axis is flipped so its first nonzero component
/// is positive.
pub fn decompose_u2(m: &ComplexMatrix) -> Result<U2Decomposition> {
    assert_eq!(m.dim(), 2, "decompose_u2 requires a 2x2 matrix");
    let dev = m.unitarity_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let mut chi = -0.5 * m.det2().arg();
    let mut su = m.scale(C64::from_polar(1.0, chi));
    if su.trace().re < 0.0 {
        chi += core::f64::consts::PI;
        su = su.scale_re(-1.0);
    }
    let cos_half = 0.5 * su.trace().re;
    // i(S − S†)/2 = sin(φ/2)·n·σ
    let herm = (&su - &su.adjoint()).scale(C64::new(0.0, 0.5));
    let mut v = [herm[(1, 0)].re, herm[(1, 0)].im, herm[(0, 0)].re];
    let sin_half = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();

    if sin_half <= 1e-15 {
        return Ok(U2Decomposition {
            chi: wrap_angle(chi),
            phi: 0.0,
            axis: [0.0, 0.0, 1.0],
        });
    }
    for x in v.iter_mut() {
        *x /= sin_half;
    }
    let phi = 2.0 * sin_half.atan2(cos_half.max(0.0));

    if cos_half.abs() <= 1e-12 {
        let first = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
            chi += core::f64::consts::PI;
        }
    }
    Ok(U2Decomposition {
        chi: wrap_angle(chi),
        phi,
        axis: v,
    })
}
