//! Small dense complex matrices and a Hermitian eigensolver.
//!
//! Every operator in this crate is at most 8×8, so a plain row-major
//! `Vec` and a cyclic Jacobi sweep are both exact enough and fast enough.
//! Jacobi has one property the rest of the crate leans on: a rotation only
//! ever touches rows/columns `p` and `q` when `a[p][q] != 0`, so a
//! block-diagonal input (the parity blocks of a full-space Hamiltonian)
//! produces eigenvectors with exact zeros outside their block.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{re, Cplx, Real};

const MAX_SWEEPS: usize = 64;

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from real rows. Panics if the rows are ragged.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = re(x);
            }
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Cplx<T>], b: &[Cplx<T>]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Cplx<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Complex::zero(), |acc: Cplx<T>, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * rhs[(i % m, j % m)])
    }

    /// Submatrix on the given (ordered) index set.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order and the unitary whose columns
    /// are the matching eigenvectors. Only the Hermitian part of the input is
    /// meaningful; callers validate Hermiticity beforehand.
    pub fn eigh(&self) -> (Vec<T>, CMatrix<T>) {
        let n = self.dim;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let scale = a.frobenius_norm().max(T::min_positive_value());
        let stop = T::epsilon() * scale;

        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = Self::from_fn(n, |i, j| v[(i, order[j])]);
        (values, vectors)
    }
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let mut s = T::zero();
    for i in 0..a.dim {
        for j in 0..a.dim {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation annihilating `a[p][q]`.
///
/// The complex entry is first made real by a diagonal phase on `q`, then a
/// real Givens rotation diagonalises the 2×2 block.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let phase = apq / r;
    let two = T::one() + T::one();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (two * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // J = diag-phase · Givens, restricted to (p, q).
    let j_pp = re(c);
    let j_pq = re(s);
    let j_qp = phase.conj() * (-s);
    let j_qq = phase.conj() * c;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = re(a[(p, p)].re);
    a[(q, q)] = re(a[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cplx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Self::Output {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Self::Output {
        &mut self.data[i * self.dim + j]
    }
}

/// `⟨a|b⟩`.
pub fn inner<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc: Cplx<T>, (x, y)| acc + x.conj() * *y)
}

pub fn norm<T: Real>(a: &[Cplx<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Pauli `σ_y`.
pub fn sigma_y<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(2);
    m[(0, 1)] = Complex::new(T::zero(), -T::one());
    m[(1, 0)] = Complex::new(T::zero(), T::one());
    m
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
/// Eigenvalues below zero (roundoff) are clamped.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let (vals, vecs) = m.eigh();
    let n = m.dim();
    CMatrix::from_fn(n, |i, j| {
        (0..n).fold(Complex::zero(), |acc: Cplx<T>, k| {
            acc + vecs[(i, k)] * vecs[(j, k)].conj() * vals[k].max(T::zero()).sqrt()
        })
    })
}
