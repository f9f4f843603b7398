//! Arithmetic in F_n for a prime n.

use crate::error::{Error, Result};
use crate::math::is_prime;

/// The prime field F_n. Elements are plain `u64` values in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    n: u64,
}

impl PrimeField {
    pub fn new(n: u64) -> Result<Self> {
        if !is_prime(n) {
            return Err(Error::BadModulus { n, bound: 1 });
        }
        Ok(PrimeField { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Reduces a signed integer into `0..n`.
    pub fn element(&self, x: i64) -> u64 {
        x.rem_euclid(self.n as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.n
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.n - b) % self.n
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.n - a) % self.n
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.n
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.n;
        base %= self.n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.n;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.n - 2))
        }
    }

    /// Solves the square system `m x = rhs` by Gauss-Jordan elimination.
    /// Returns `None` if `m` is singular.
    pub fn solve(&self, m: &[Vec<u64>], rhs: &[u64]) -> Option<Vec<u64>> {
        let k = m.len();
        let mut aug: Vec<Vec<u64>> = m
            .iter()
            .zip(rhs)
            .map(|(row, &b)| {
                let mut row = row.clone();
                row.push(b);
                row
            })
            .collect();
        for col in 0..k {
            let pivot = (col..k).find(|&i| aug[i][col] != 0)?;
            aug.swap(col, pivot);
            let inv = self.inv(aug[col][col])?;
            for x in aug[col].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = aug[col].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != col && row[col] != 0 {
                    let factor = row[col];
                    for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x = self.sub(*x, self.mul(factor, p));
                    }
                }
            }
        }
        Some(aug.into_iter().map(|row| row[k]).collect())
    }

    /// Determinant by elimination.
    pub fn det(&self, m: &[Vec<u64>]) -> u64 {
        let k = m.len();
        let mut a: Vec<Vec<u64>> = m.to_vec();
        let mut det = 1;
        for col in 0..k {
            let Some(pivot) = (col..k).find(|&i| a[i][col] != 0) else {
                return 0;
            };
            if pivot != col {
                a.swap(col, pivot);
                det = self.neg(det);
            }
            det = self.mul(det, a[col][col]);
            let inv = self.inv(a[col][col]).expect("nonzero pivot");
            let pivot_row = a[col].clone();
            for row in a[col + 1..].iter_mut() {
                let factor = self.mul(row[col], inv);
                if factor != 0 {
                    for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x = self.sub(*x, self.mul(factor, p));
                    }
                }
            }
        }
        det
    }
}
