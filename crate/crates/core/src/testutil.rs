//! Random instances shared by the unit tests.

use alloc::vec::Vec;

use rand::Rng;

#[allow(unused_imports)]
use num_traits::Float;

use crate::chain::CouplingSet;
use crate::matrix::{c, su2_rotation, ComplexMatrix, C64};

pub fn random_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let axis = random_axis(rng);
    let phi = rng.random_range(0.0..core::f64::consts::PI);
    let chi = rng.random_range(-3.0..3.0);
    su2_rotation(phi, axis).scale(C64::from_polar(1.0, chi))
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

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + &a.adjoint()).scale_re(0.5)
}

pub fn random_couplings(rng: &mut impl Rng) -> CouplingSet {
    let mut draw = || -> [f64; 4] {
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.5..1.5)).collect();
        [v[0], v[1], v[2], v[3]]
    };
    let j = draw();
    let dz = draw();
    CouplingSet { j, dz }
}
