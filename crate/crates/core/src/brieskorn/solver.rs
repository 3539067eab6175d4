//! Random-restart search for triples in fixed conjugacy classes with
//! prescribed product.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::assignment::RotationAssignment;
use super::seifert::SeifertPresentation;
use crate::rational::Rational;

pub type C64 = Complex64;
pub type Mat3 = Matrix3<C64>;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    /// Restarts per assignment.
    pub restarts: usize,
    /// Descent iterations per restart.
    pub max_iter: usize,
    /// Acceptance bound on ‖x₁x₂x₃ − c‖²_F.
    pub residual_tol: f64,
    /// Max-norm distance at which character vectors are identified.
    pub cluster_tol: f64,
    /// Descent hands over to the Gauss–Newton polish below this value.
    pub polish_threshold: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 200,
            max_iter: 5000,
            residual_tol: 1e-18,
            cluster_tol: 1e-6,
            polish_threshold: 1e-4,
            seed: 0,
        }
    }
}

fn turn(t: Rational) -> C64 {
    C64::from_polar(1.0, TAU * t.to_f64())
}

fn diag(ts: [Rational; 3]) -> Mat3 {
    Mat3::from_diagonal(&nalgebra::Vector3::new(turn(ts[0]), turn(ts[1]), turn(ts[2])))
}

fn unit(a: usize, b: usize) -> Mat3 {
    let mut m = Mat3::zeros();
    m[(a, b)] = C64::new(1.0, 0.0);
    m
}

/// Real basis of u(3), or of u(2)⊕u(1) when `block`.
fn algebra_basis(block: bool) -> Vec<Mat3> {
    let mut out: Vec<Mat3> = (0..3).map(|k| unit(k, k) * I).collect();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if block && b == 2 {
            continue;
        }
        out.push(unit(a, b) - unit(b, a));
        out.push((unit(a, b) + unit(b, a)) * I);
    }
    out
}

fn skew(g: &Mat3) -> Mat3 {
    (g - g.adjoint()) * C64::new(0.5, 0.0)
}

fn block_project(mut m: Mat3) -> Mat3 {
    for (a, b) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
        m[(a, b)] = C64::new(0.0, 0.0);
    }
    m
}

fn retract(step: &Mat3, u: &Mat3) -> Mat3 {
    let q = (Mat3::identity() + step).qr().q();
    q * u
}

pub fn frob2(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn unitarity_defect(x: &Mat3) -> f64 {
    frob2(&(x.adjoint() * x - Mat3::identity())).sqrt()
}

/// The product problem for one assignment.
#[derive(Clone, Debug)]
pub struct Problem {
    d: [Mat3; 3],
    target: Mat3,
    block: bool,
    basis: Vec<Mat3>,
}

impl Problem {
    pub fn new(p: &SeifertPresentation, ra: &RotationAssignment) -> Self {
        let block = ra.is_split();
        Problem {
            d: ra.turns.map(diag),
            target: diag(ra.target_turns(p)),
            block,
            basis: algebra_basis(block),
        }
    }

    pub fn target(&self) -> &Mat3 {
        &self.target
    }

    pub fn generators(&self, u: &[Mat3; 3]) -> [Mat3; 3] {
        [0, 1, 2].map(|i| u[i] * self.d[i] * u[i].adjoint())
    }

    pub fn objective(&self, u: &[Mat3; 3]) -> f64 {
        let x = self.generators(u);
        frob2(&(x[0] * x[1] * x[2] - self.target))
    }

    /// Random frame, Haar in U(3) or in U(2)×U(1).
    fn random_frame(&self, rng: &mut ChaCha8Rng) -> Mat3 {
        let mut g = Mat3::from_fn(|_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        if self.block {
            g = block_project(g);
        }
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = Mat3::from_diagonal(&r.diagonal().map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }));
        q * phases
    }

    /// Negative Riemannian gradient per frame, and the objective.
    fn descent(&self, u: &[Mat3; 3]) -> ([Mat3; 3], f64) {
        let x = self.generators(u);
        let r = x[0] * x[1] * x[2] - self.target;
        let rh = r.adjoint();
        let left = [Mat3::identity(), x[0], x[0] * x[1]];
        let right = [x[1] * x[2], x[2], Mat3::identity()];
        let dirs = [0, 1, 2].map(|i| {
            let m = right[i] * rh * left[i];
            let g = skew(&(x[i] * m - m * x[i])) * C64::new(2.0, 0.0);
            if self.block {
                block_project(g)
            } else {
                g
            }
        });
        (dirs, frob2(&r))
    }

    fn residual_vec(&self, x: &[Mat3; 3]) -> DVector<f64> {
        let r = x[0] * x[1] * x[2] - self.target;
        DVector::from_iterator(18, r.iter().map(|z| z.re).chain(r.iter().map(|z| z.im)))
    }

    /// Jacobian of the real residual in frame coordinates.
    pub fn jacobian(&self, x: &[Mat3; 3]) -> DMatrix<f64> {
        let left = [Mat3::identity(), x[0], x[0] * x[1]];
        let right = [x[1] * x[2], x[2], Mat3::identity()];
        let nb = self.basis.len();
        let mut j = DMatrix::zeros(18, 3 * nb);
        for i in 0..3 {
            for (k, e) in self.basis.iter().enumerate() {
                let dp = left[i] * (e * x[i] - x[i] * e) * right[i];
                for (n, z) in dp.iter().enumerate() {
                    j[(n, i * nb + k)] = z.re;
                    j[(n + 9, i * nb + k)] = z.im;
                }
            }
        }
        j
    }

    fn apply_params(&self, u: &[Mat3; 3], delta: &DVector<f64>) -> [Mat3; 3] {
        let nb = self.basis.len();
        [0, 1, 2].map(|i| {
            let mut step = Mat3::zeros();
            for (k, e) in self.basis.iter().enumerate() {
                step += e * C64::new(delta[i * nb + k], 0.0);
            }
            retract(&step, &u[i])
        })
    }

    /// Levenberg–Marquardt on the 18 real residuals.
    fn polish(&self, mut u: [Mat3; 3], mut f: f64) -> ([Mat3; 3], f64) {
        let mut mu = 1e-6;
        for _ in 0..80 {
            if f < 1e-30 {
                break;
            }
            let x = self.generators(&u);
            let j = self.jacobian(&x);
            let r = self.residual_vec(&x);
            let jt = j.transpose();
            let a = &jt * &j;
            let g = &jt * r;
            let mut improved = false;
            while mu < 1e8 {
                let mut m = a.clone();
                for d in 0..m.nrows() {
                    m[(d, d)] += mu;
                }
                let Some(ch) = m.cholesky() else {
                    mu *= 10.0;
                    continue;
                };
                let delta = -ch.solve(&g);
                let trial = self.apply_params(&u, &delta);
                let ft = self.objective(&trial);
                if ft < f {
                    u = trial;
                    f = ft;
                    mu = (mu / 10.0).max(1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved {
                break;
            }
        }
        (u, f)
    }

    /// Starting frames of the restart seeded by `seed`.
    pub fn start(&self, seed: u64) -> [Mat3; 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        [0, 1, 2].map(|_| self.random_frame(&mut rng))
    }

    /// One restart from a seeded random start.
    pub fn run(&self, seed: u64, cfg: &SolverConfig) -> RestartOutcome {
        self.run_from(self.start(seed), cfg)
    }

    pub fn run_from(&self, mut u: [Mat3; 3], cfg: &SolverConfig) -> RestartOutcome {
        let mut step = 0.1f64;
        let (mut dirs, mut f) = self.descent(&u);
        let mut checkpoint = f;
        let mut iterations = 0;
        while iterations < cfg.max_iter && f >= cfg.polish_threshold {
            iterations += 1;
            let trial = [0, 1, 2].map(|i| retract(&(dirs[i] * C64::new(step, 0.0)), &u[i]));
            let (tdirs, ft) = self.descent(&trial);
            if ft < f {
                u = trial;
                dirs = tdirs;
                f = ft;
                step = (step * 1.5).min(1.0);
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
            if iterations % 100 == 0 {
                // stuck at a positive local minimum
                if f > 0.99 * checkpoint {
                    break;
                }
                checkpoint = f;
            }
        }
        let descent_converged = f < cfg.polish_threshold;
        if descent_converged {
            (u, f) = self.polish(u, f);
        }
        RestartOutcome { frames: u, residual: f, iterations, descent_converged }
    }
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub frames: [Mat3; 3],
    pub residual: f64,
    pub iterations: usize,
    pub descent_converged: bool,
}

pub const WORDS: [&str; 8] = ["x1", "x2", "x3", "x1x2", "x1x3", "x2x3", "x1x2x3", "[x1,x2]"];

/// Traces of [`WORDS`].
pub fn character(x: &[Mat3; 3]) -> [C64; 8] {
    let [a, b, c] = x;
    [
        a.trace(),
        b.trace(),
        c.trace(),
        (a * b).trace(),
        (a * c).trace(),
        (b * c).trace(),
        (a * b * c).trace(),
        (a * b * a.adjoint() * b.adjoint()).trace(),
    ]
}

/// Character vector plus tr(x₁x₂⁻¹); together these separate conjugacy
/// classes of pairs, and x₃ is determined by the pair.
pub fn clustering_vector(x: &[Mat3; 3]) -> [C64; 9] {
    let ch = character(x);
    let mut out = [C64::new(0.0, 0.0); 9];
    out[..8].copy_from_slice(&ch);
    out[8] = (x[0] * x[1].adjoint()).trace();
    out
}

pub fn max_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// Complex dimension of the commutant of the generators.
pub fn commutant_dim(x: &[Mat3; 3]) -> usize {
    let mut a = DMatrix::<C64>::zeros(27, 9);
    for (i, xi) in x.iter().enumerate() {
        for col in 0..9 {
            let e = unit(col % 3, col / 3);
            let c = xi * e - e * xi;
            for (n, z) in c.iter().enumerate() {
                a[(9 * i + n, col)] = *z;
            }
        }
    }
    let sv = a.svd(false, false).singular_values;
    sv.iter().filter(|&&s| s < 1e-6).count()
}

fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max).max(1.0);
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Dimension of the solution set modulo conjugation at `x` (0 when isolated).
pub fn tangent_dim(problem: &Problem, x: &[Mat3; 3]) -> usize {
    let nb = problem.basis.len();
    let n = 3 * nb;
    let kernel = n - numeric_rank(&problem.jacobian(x), 1e-8);
    let mut trivial: Vec<DVector<f64>> = Vec::new();
    for k in 0..nb {
        let mut v = DVector::zeros(n);
        for i in 0..3 {
            v[i * nb + k] = 1.0;
        }
        trivial.push(v);
    }
    for i in 0..3 {
        // stabilizer of xᵢ inside the frame algebra
        let mut ad = DMatrix::zeros(18, nb);
        for (k, e) in problem.basis.iter().enumerate() {
            let c = e * x[i] - x[i] * e;
            for (r, z) in c.iter().enumerate() {
                ad[(r, k)] = z.re;
                ad[(r + 9, k)] = z.im;
            }
        }
        let svd = ad.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
        for (row, s) in svd.singular_values.iter().enumerate() {
            if *s <= 1e-8 * top {
                let mut v = DVector::zeros(n);
                for k in 0..nb {
                    v[i * nb + k] = vt[(row, k)];
                }
                trivial.push(v);
            }
        }
    }
    let t = DMatrix::from_columns(&trivial);
    kernel.saturating_sub(numeric_rank(&t, 1e-8))
}

/// Conjugates so that x₁ is diagonal (in the assignment's eigenvalue order)
/// and the off-diagonal first-row entries of x₂ are real and nonnegative.
pub fn canonical_form(frames: &[Mat3; 3], x: &[Mat3; 3]) -> [Mat3; 3] {
    let w = frames[0].adjoint();
    let mut y = x.map(|m| w * m * w.adjoint());
    let mut phase = [C64::new(1.0, 0.0); 3];
    for k in 1..3 {
        let z = y[1][(0, k)];
        if z.norm() > 1e-9 {
            phase[k] = z / z.norm();
        }
    }
    let d = Mat3::from_diagonal(&nalgebra::Vector3::new(phase[0], phase[1], phase[2]));
    y = y.map(|m| d * m * d.adjoint());
    y
}
