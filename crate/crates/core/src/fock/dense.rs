//! Small dense complex matrices for the number-basis oracle.
//!
//! The oracle works at cutoffs of a few hundred at most, so plain
//! row-major storage with textbook algorithms (scaled-and-squared Taylor
//! exponential, cyclic Jacobi eigenvalues) is all that is needed.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_complex::Complex64 as C64;
use num_traits::Float;

/// Dense complex matrix over the truncated number basis |0..=cutoff>.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
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

    /// Matrix dimension (`cutoff + 1`).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            *o = row.iter().zip(v).map(|(m, x)| m * x).sum();
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for j in 0..self.dim {
            let s: f64 = (0..self.dim).map(|i| self[(i, j)].norm()).sum();
            best = best.max(s);
        }
        best
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }
}

impl Index<(usize, usize)> for FockMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for FockMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Matrix exponential by scaling and squaring with a norm-controlled
/// Taylor sum on the scaled matrix.
pub fn expm(m: &FockMatrix) -> FockMatrix {
    let norm = m.one_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let b = m.scale(C64::new(scale, 0.0));
    let mut acc = FockMatrix::identity(m.dim());
    let mut term = FockMatrix::identity(m.dim());
    for k in 1..=40 {
        term = term.matmul(&b).scale(C64::new(1.0 / k as f64, 0.0));
        acc = acc.add(&term);
        if term.one_norm() < 1e-18 * acc.one_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc);
    }
    acc
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
/// ascending order. Only the Hermitian part of the input is read.
pub fn hermitian_eigenvalues(m: &FockMatrix) -> Vec<f64> {
    let n = m.dim();
    // work on the explicitly Hermitized copy
    let mut a = FockMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)].conj());
        }
    }
    let fro: f64 = a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-14 * fro.max(1e-300);

    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= tol / (n as f64) {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                let x = -sgn / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + x * x).sqrt();
                let s = x * c;
                let sigma = s * phase;
                // columns: col_p' = c col_p + conj(sigma) col_q,
                //          col_q' = -sigma col_p + c col_q
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip + sigma.conj() * aiq;
                    a[(i, q)] = -sigma * aip + c * aiq;
                }
                // rows: row_p' = c row_p + sigma row_q,
                //       row_q' = -conj(sigma) row_p + c row_q
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj + sigma * aqj;
                    a[(q, j)] = -sigma.conj() * apj + c * aqj;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}
