//! Reference computations that share no code with the library's solvers:
//! matrix exponentials by power series, closed-form kinematics, and tensor
//! transports by explicit enumeration of every index assignment.
#![allow(dead_code)]

use std::f64::consts::PI;

use pathtransport::{Domain, Interpolation, Matrix, TensorComponents, TransportLaw};
use rand::Rng;

/// `exp(A)` by scaling and squaring around a Taylor series summed until the
/// terms stop contributing.
pub fn expm_series(a: &Matrix) -> Matrix {
    let n = a.dim();
    let norm: f64 = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..60 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `H(t, s) = exp(-(t - s) Γ)` for a constant law.
pub fn constant_law_transport(gamma: &Matrix, s: f64, t: f64) -> Matrix {
    expm_series(&gamma.scale(-(t - s)))
}

/// Transport of `T` by summing over all index assignments:
/// `T'^{i..}_{j..} = Σ H^i_k .. K^l_j .. T^{k..}_{l..}` with `K = H(s, t)`.
pub fn transport_brute_force(h: &Matrix, k: &Matrix, t: &TensorComponents) -> TensorComponents {
    let (p, q, n) = (t.contravariant_rank(), t.covariant_rank(), t.dim());
    if p + q == 0 {
        return t.clone();
    }
    let r = p + q;
    let tuples: Vec<Vec<usize>> = (0..n.pow(r as u32))
        .map(|mut c| {
            let mut idx = vec![0; r];
            for slot in (0..r).rev() {
                idx[slot] = c % n;
                c /= n;
            }
            idx
        })
        .collect();
    let values = tuples
        .iter()
        .map(|out| {
            tuples
                .iter()
                .map(|inn| {
                    let mut w = t.get(inn);
                    for a in 0..p {
                        w *= h[(out[a], inn[a])];
                    }
                    for b in p..r {
                        w *= k[(inn[b], out[b])];
                    }
                    w
                })
                .sum()
        })
        .collect();
    TensorComponents::new(p, q, n, values).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, amplitude: f64) -> Matrix {
    Matrix::from_fn(n, |_, _| rng.gen_range(-amplitude..=amplitude))
}

/// Well-conditioned random matrix: identity plus a small perturbation.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut m = random_matrix(rng, n, 0.4);
    for i in 0..n {
        m[(i, i)] += 1.5;
    }
    m
}

/// Smooth trigonometric coefficient function with unit-order amplitude and
/// frequencies.
#[derive(Clone, Debug)]
pub struct SmoothMatrixFn {
    n: usize,
    // per entry: (a0, a1, w1, p1, a2, w2)
    coeffs: Vec<[f64; 6]>,
}

impl SmoothMatrixFn {
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let coeffs = (0..n * n)
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.5..3.0),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(0.5..3.0),
                ]
            })
            .collect();
        Self { n, coeffs }
    }

    pub fn eval(&self, s: f64) -> Matrix {
        Matrix::from_fn(self.n, |i, j| {
            let [a0, a1, w1, p1, a2, w2] = self.coeffs[i * self.n + j];
            a0 + a1 * (w1 * s + p1).sin() + a2 * (w2 * s).cos()
        })
    }

    pub fn derivative(&self, s: f64) -> Matrix {
        Matrix::from_fn(self.n, |i, j| {
            let [_, a1, w1, p1, a2, w2] = self.coeffs[i * self.n + j];
            a1 * w1 * (w1 * s + p1).cos() - a2 * w2 * (w2 * s).sin()
        })
    }

    /// Samples on `k` equispaced points of `domain`.
    pub fn samples(&self, domain: Domain, k: usize) -> (Vec<f64>, Vec<Matrix>) {
        let s = domain.linspace(k);
        let m = s.iter().map(|&x| self.eval(x)).collect();
        (s, m)
    }

    pub fn tabulated(&self, domain: Domain, k: usize, interp: Interpolation) -> TransportLaw {
        let (s, m) = self.samples(domain, k);
        TransportLaw::tabulated(s, m, interp).unwrap()
    }

    pub fn law(&self, domain: Domain) -> TransportLaw {
        let f = self.clone();
        TransportLaw::from_fn(self.n, domain, move |s| f.eval(s))
    }
}

/// 2x2 Lorentz boost with rapidity `eta` acting on `(t, x)`.
pub fn boost(eta: f64) -> Matrix {
    Matrix::from_rows(&[[eta.cosh(), eta.sinh()], [eta.sinh(), eta.cosh()]]).unwrap()
}

/// Rotation of a vector by the polar angle `a`.
pub fn rotation(a: f64) -> Matrix {
    Matrix::from_rows(&[[a.cos(), -a.sin()], [a.sin(), a.cos()]]).unwrap()
}

/// Parallel-transport rotation after one loop around the latitude circle
/// at colatitude `theta0`, in the frame `(∂θ, ∂φ/sin θ0)`: `-2π cos θ0`,
/// which is `2π(1 - cos θ0)` (the enclosed solid angle) modulo `2π`.
pub fn latitude_holonomy(theta0: f64) -> f64 {
    -2.0 * PI * theta0.cos()
}

/// Thomas precession of a Fermi-Walker frame per lab orbit, seen in the
/// comoving frame: `2π(1 - γ)`.
pub fn thomas_angle(lorentz_factor: f64) -> f64 {
    2.0 * PI * (1.0 - lorentz_factor)
}

/// Difference of two angles modulo `2π`, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
