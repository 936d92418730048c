//! Dense complex matrices for the numerical oracle.
//!
//! Deliberately plain: row-major `Vec<Complex64>` storage, matrix-vector
//! products, adjoint products, and a text export. Windows of atomic
//! representations are stored dense rather than sparse; oversized windows
//! are rejected upstream instead of being subsampled.

use std::io::{self, Write};

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> CMatrix {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// `y = A x`. Skips zero coordinates of `x`; the arithmetic is ordinary
    /// dense column accumulation.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (j, xj) in x.iter().enumerate() {
            if xj.norm_sqr() == 0.0 {
                continue;
            }
            for (i, slot) in y.iter_mut().enumerate() {
                let a = self.data[i * self.dim + j];
                if a.norm_sqr() != 0.0 {
                    *slot += a * xj;
                }
            }
        }
        y
    }

    /// `y = A* x`.
    pub fn apply_adj(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.norm_sqr() == 0.0 {
                continue;
            }
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            for (j, a) in row.iter().enumerate() {
                if a.norm_sqr() != 0.0 {
                    y[j] += a.conj() * xi;
                }
            }
        }
        y
    }

    /// Writes the matrix as text, row-major, entries as `re,im` pairs
    /// separated by spaces.
    pub fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            let mut first = true;
            for z in row {
                if !first {
                    write!(out, " ")?;
                }
                first = false;
                write!(out, "{},{}", z.re, z.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn basis_vector(dim: usize, index: usize) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); dim];
    x[index] = Complex64::new(1.0, 0.0);
    x
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_into(acc: &mut [Complex64], x: &[Complex64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}
