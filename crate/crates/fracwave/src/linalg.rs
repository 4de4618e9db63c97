//! Minimal banded LU with partial pivoting, over f64 or Complex64.
//!
//! Both the implicit-midpoint stepper and the shifted resolvent solves
//! reduce to narrow-band systems after the diffusive channels are
//! eliminated analytically, so a band factorization is all the linear
//! algebra the crate needs. Storage and pivoting follow the usual
//! LAPACK band scheme: kl extra rows absorb the fill-in produced by row
//! interchanges.

// banded elimination reads most naturally with explicit indices
#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait Scalar:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    fn modulus_sq(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn modulus_sq(self) -> f64 {
        self * self
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn modulus_sq(self) -> f64 {
        self.norm_sqr()
    }
}

/// Band matrix of size n with kl sub- and ku superdiagonals.
#[derive(Debug, Clone)]
pub struct Banded<T: Scalar> {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    /// column-major: entry (i, j) lives at ab[j * ldab + kl + ku + i - j]
    ab: Vec<T>,
}

impl<T: Scalar> Banded<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Banded { n, kl, ku, ldab, ab: vec![T::ZERO; ldab * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        // storage covers kl + ku superdiagonals (pivoting fill-in) and
        // kl subdiagonals
        debug_assert!(j <= i + self.kl + self.ku && i <= j + self.kl);
        j * self.ldab + self.kl + self.ku + i - j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.ab[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.ab[k] = self.ab[k] + v;
    }

    /// In-place LU with partial pivoting.
    pub fn factor(mut self) -> Result<BandedLu<T>> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let kv = kl + ku; // effective upper bandwidth after fill-in
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let imax = (j + kl).min(n - 1);
            let mut piv = j;
            let mut best = self.get(j, j).modulus_sq();
            for i in j + 1..=imax {
                let m = self.get(i, j).modulus_sq();
                if m > best {
                    best = m;
                    piv = i;
                }
            }
            ipiv[j] = piv;
            if best == 0.0 {
                return Err(Error::Numerical(format!(
                    "banded LU: zero pivot at column {j}"
                )));
            }
            let cmax = (j + kv).min(n - 1);
            if piv != j {
                for c in j..=cmax {
                    let a = self.get(j, c);
                    let b = self.get(piv, c);
                    self.set(j, c, b);
                    self.set(piv, c, a);
                }
            }
            let d = self.get(j, j);
            for i in j + 1..=imax {
                let m = self.get(i, j) / d;
                self.set(i, j, m);
                for c in j + 1..=cmax {
                    let u = self.get(j, c);
                    if u != T::ZERO {
                        let v = self.get(i, c) - m * u;
                        self.set(i, c, v);
                    }
                }
            }
        }
        Ok(BandedLu { mat: self, ipiv })
    }
}

/// Factored form; solves against the original matrix and its transpose.
#[derive(Debug, Clone)]
pub struct BandedLu<T: Scalar> {
    mat: Banded<T>,
    ipiv: Vec<usize>,
}

impl<T: Scalar> BandedLu<T> {
    pub fn n(&self) -> usize {
        self.mat.n
    }

    pub fn solve_in_place(&self, x: &mut [T]) {
        let (n, kl) = (self.mat.n, self.mat.kl);
        let kv = kl + self.mat.ku;
        assert_eq!(x.len(), n);
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                x.swap(j, p);
            }
            let xj = x[j];
            if xj != T::ZERO {
                for i in j + 1..=(j + kl).min(n - 1) {
                    x[i] = x[i] - self.mat.get(i, j) * xj;
                }
            }
        }
        for j in (0..n).rev() {
            let mut s = x[j];
            for c in j + 1..=(j + kv).min(n - 1) {
                s = s - self.mat.get(j, c) * x[c];
            }
            x[j] = s / self.mat.get(j, j);
        }
    }

    /// Solves transpose(A) x = b with the same factorization.
    pub fn solve_transpose_in_place(&self, x: &mut [T]) {
        let (n, kl) = (self.mat.n, self.mat.kl);
        let kv = kl + self.mat.ku;
        assert_eq!(x.len(), n);
        // forward: transpose(U) y = b
        for j in 0..n {
            let lo = j.saturating_sub(kv);
            let mut s = x[j];
            for c in lo..j {
                s = s - self.mat.get(c, j) * x[c];
            }
            x[j] = s / self.mat.get(j, j);
        }
        // backward: transpose(L) with interleaved pivots
        for j in (0..n).rev() {
            let mut s = x[j];
            for i in j + 1..=(j + kl).min(n - 1) {
                s = s - self.mat.get(i, j) * x[i];
            }
            x[j] = s;
            let p = self.ipiv[j];
            if p != j {
                x.swap(j, p);
            }
        }
    }
}

/// Pivot-free pentadiagonal LU over f64, for strictly diagonally
/// dominant systems (the midpoint stepper's velocity system has
/// dominance margin h (1 - s b), checked by the caller). Flat band
/// storage keeps the factor/solve loops free of index arithmetic,
/// which matters at millions of steps.
#[derive(Debug, Clone)]
pub struct Penta {
    n: usize,
    /// subdiagonals of L (distance 1 and 2)
    l1: Vec<f64>,
    l2: Vec<f64>,
    /// reciprocal diagonal and superdiagonals of U (distance 1 and 2)
    inv_d: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl Penta {
    /// Factors the matrix given by its five bands: sub2, sub1, diag,
    /// sup1, sup2 (sub/sup entries aligned with their row index).
    pub fn factor(
        sub2: &[f64],
        sub1: &[f64],
        diag: &[f64],
        sup1: &[f64],
        sup2: &[f64],
    ) -> Result<Self> {
        let n = diag.len();
        assert!(sub1.len() == n && sub2.len() == n && sup1.len() == n && sup2.len() == n);
        let mut l1 = sub1.to_vec();
        let mut l2 = sub2.to_vec();
        let mut d = diag.to_vec();
        let mut u1 = sup1.to_vec();
        let u2 = sup2.to_vec();
        for i in 0..n {
            if d[i] == 0.0 {
                return Err(Error::Numerical(format!(
                    "pentadiagonal factorization: zero pivot at row {i}"
                )));
            }
            if i + 1 < n {
                let m = l1[i + 1] / d[i];
                l1[i + 1] = m;
                d[i + 1] -= m * u1[i];
                if i + 2 < n {
                    u1[i + 1] -= m * u2[i];
                }
            }
            if i + 2 < n {
                let m = l2[i + 2] / d[i];
                l2[i + 2] = m;
                l1[i + 2] -= m * u1[i];
                d[i + 2] -= m * u2[i];
            }
        }
        let inv_d = d.iter().map(|&v| 1.0 / v).collect();
        Ok(Penta { n, l1, l2, inv_d, u1, u2 })
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        assert_eq!(x.len(), n);
        for i in 1..n {
            let mut v = x[i] - self.l1[i] * x[i - 1];
            if i >= 2 {
                v -= self.l2[i] * x[i - 2];
            }
            x[i] = v;
        }
        x[n - 1] *= self.inv_d[n - 1];
        if n >= 2 {
            x[n - 2] = (x[n - 2] - self.u1[n - 2] * x[n - 1]) * self.inv_d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - self.u1[i] * x[i + 1] - self.u2[i] * x[i + 2]) * self.inv_d[i];
        }
    }
}


#[cfg(test)]
mod penta_tests {
    use super::*;

    #[test]
    fn penta_matches_banded_with_pivoting() {
        let n = 200;
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let mut sub2 = vec![0.0; n];
        let mut sub1 = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup1 = vec![0.0; n];
        let mut sup2 = vec![0.0; n];
        let mut band = Banded::<f64>::zeros(n, 2, 2);
        for i in 0..n {
            diag[i] = 5.0 + next();
            band.set(i, i, diag[i]);
            if i >= 1 {
                sub1[i] = next();
                band.set(i, i - 1, sub1[i]);
            }
            if i >= 2 {
                sub2[i] = next();
                band.set(i, i - 2, sub2[i]);
            }
            if i + 1 < n {
                sup1[i] = next();
                band.set(i, i + 1, sup1[i]);
            }
            if i + 2 < n {
                sup2[i] = next();
                band.set(i, i + 2, sup2[i]);
            }
        }
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.21).sin()).collect();
        let penta = Penta::factor(&sub2, &sub1, &diag, &sup1, &sup2).unwrap();
        let lu = band.factor().unwrap();
        let mut a = rhs.clone();
        let mut b = rhs.clone();
        penta.solve_in_place(&mut a);
        lu.solve_in_place(&mut b);
        for i in 0..n {
            assert!((a[i] - b[i]).abs() < 1e-12, "i={i}: {} vs {}", a[i], b[i]);
        }
    }
}
