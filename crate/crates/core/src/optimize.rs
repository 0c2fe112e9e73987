//! Nelder–Mead simplex minimization with an evaluation budget.

/// Simplex coefficients and stopping rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop when `f_worst − f_best` falls below this.
    pub f_tol: f64,
    /// Stop when every vertex lies within this distance of the best one.
    pub x_tol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            f_tol: 1e-10,
            x_tol: 1e-8,
            max_evaluations: 5000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

struct Budgeted<F> {
    f: F,
    used: usize,
    limit: usize,
}

impl<F> Budgeted<F> {
    fn call<const N: usize>(&mut self, x: &[f64; N]) -> Option<f64>
    where
        F: FnMut(&[f64; N]) -> f64,
    {
        if self.used >= self.limit {
            return None;
        }
        self.used += 1;
        let v = (self.f)(x);
        Some(if v.is_nan() { f64::INFINITY } else { v })
    }
}

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    core::array::from_fn(|i| from[i] + t * (to[i] - from[i]))
}

fn dist<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    num_traits::Float::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of size `step`.
pub fn nelder_mead<const N: usize>(
    f: impl FnMut(&[f64; N]) -> f64,
    x0: [f64; N],
    step: [f64; N],
    opts: &NelderMeadOptions,
) -> NelderMeadResult<N> {
    let mut eval = Budgeted {
        f,
        used: 0,
        limit: opts.max_evaluations.max(1),
    };

    // N+1 vertices; const generic arithmetic is not stable, so keep a Vec.
    let mut simplex: alloc::vec::Vec<([f64; N], f64)> = alloc::vec::Vec::with_capacity(N + 1);
    let f0 = eval.call(&x0).expect("budget of at least one evaluation");
    simplex.push((x0, f0));
    for i in 0..N {
        let mut x = x0;
        x[i] += step[i];
        match eval.call(&x) {
            Some(v) => simplex.push((x, v)),
            None => break,
        }
    }

    let mut iterations = 0;
    let mut converged = false;
    if simplex.len() == N + 1 {
        'outer: loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0];
            let worst = simplex[N];
            let spread = worst.1 - best.1;
            let diameter = simplex[1..].iter().map(|(x, _)| dist(x, &best.0)).fold(0.0, f64::max);
            if spread < opts.f_tol || diameter < opts.x_tol {
                converged = true;
                break;
            }
            iterations += 1;

            let centroid: [f64; N] =
                core::array::from_fn(|i| simplex[..N].iter().map(|(x, _)| x[i]).sum::<f64>() / N as f64);

            let xr = lerp(&centroid, &worst.0, -opts.reflection);
            let Some(fr) = eval.call(&xr) else { break };

            if fr < best.1 {
                let xe = lerp(&centroid, &xr, opts.expansion);
                let Some(fe) = eval.call(&xe) else {
                    simplex[N] = (xr, fr);
                    break;
                };
                simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[N - 1].1 {
                simplex[N] = (xr, fr);
                continue;
            }

            let (xc, accept_bound) = if fr < worst.1 {
                (lerp(&centroid, &xr, opts.contraction), fr)
            } else {
                (lerp(&centroid, &worst.0, opts.contraction), worst.1)
            };
            let Some(fc) = eval.call(&xc) else { break };
            if fc <= accept_bound {
                simplex[N] = (xc, fc);
                continue;
            }

            for vertex in simplex.iter_mut().skip(1) {
                let x = lerp(&best.0, &vertex.0, opts.shrink);
                let Some(v) = eval.call(&x) else { break 'outer };
                *vertex = (x, v);
            }
        }
    }

    let (x, value) = simplex
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex is nonempty");
    NelderMeadResult {
        x,
        value,
        evaluations: eval.used,
        iterations,
        converged,
    }
}
