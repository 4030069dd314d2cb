//! Dense matrices over `Q(zeta_n)` and the exact constructions for the
//! Grover walk on the complete graph with self-loops: the coin `G`, the
//! root-of-unity diagonal `S`, the local operators `P_j`, the unnormalized
//! discrete Fourier matrix `F`, and the walk operator `U`.
//!
//! The Fourier matrix `A = F / sqrt(n)` itself is never materialized:
//! `sqrt(n)` is not in `Q(zeta_n)` in general, but every identity we need is
//! a conjugation `A^(-1) X A = (1/n) F^* X F`, which stays in the field.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::cyclotomic::{BigRational, CycError, CycNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] CycError),
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimMismatch { left: usize, right: usize },
    #[error("row index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("matrix is singular")]
    Singular,
}

/// A square matrix over `Q(zeta_n)`, stored dense row-major. Equality and
/// hashing are entrywise canonical equality, so matrices can serve directly
/// as group elements in hash-based closure enumeration.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    modulus: u64,
    dim: usize,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn from_fn(modulus: u64, dim: usize, mut f: impl FnMut(usize, usize) -> CycNum) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let e = f(r, c);
                assert_eq!(e.modulus_n(), modulus, "entry field mismatch");
                entries.push(e);
            }
        }
        CycMatrix { modulus, dim, entries }
    }

    pub fn from_entries(modulus: u64, dim: usize, entries: Vec<CycNum>) -> Result<Self, LinalgError> {
        if entries.len() != dim * dim {
            return Err(LinalgError::DimMismatch { left: dim, right: entries.len() });
        }
        for e in &entries {
            if e.modulus_n() != modulus {
                return Err(CycError::FieldMismatch { left: modulus, right: e.modulus_n() }.into());
            }
        }
        Ok(CycMatrix { modulus, dim, entries })
    }

    pub fn zeros(modulus: u64, dim: usize) -> Self {
        Self::from_fn(modulus, dim, |_, _| CycNum::zero(modulus))
    }

    pub fn identity(modulus: u64, dim: usize) -> Self {
        Self::from_fn(modulus, dim, |r, c| {
            if r == c {
                CycNum::one(modulus)
            } else {
                CycNum::zero(modulus)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus_n(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> &CycNum {
        assert!(row < self.dim && col < self.dim, "index out of range");
        &self.entries[row * self.dim + col]
    }

    fn check_compatible(&self, rhs: &Self) -> Result<(), LinalgError> {
        if self.modulus != rhs.modulus {
            return Err(CycError::FieldMismatch { left: self.modulus, right: rhs.modulus }.into());
        }
        if self.dim != rhs.dim {
            return Err(LinalgError::DimMismatch { left: self.dim, right: rhs.dim });
        }
        Ok(())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(rhs)?;
        let dim = self.dim;
        let mut out = vec![CycNum::zero(self.modulus); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out[r * dim + c].add_assign_ref(&(a * b));
                }
            }
        }
        Ok(CycMatrix { modulus: self.modulus, dim, entries: out })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycMatrix { modulus: self.modulus, dim: self.dim, entries })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(factor)).collect();
        CycMatrix { modulus: self.modulus, dim: self.dim, entries }
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.modulus, self.dim, |r, c| self.get(c, r).conj())
    }

    /// `self^k` by repeated squaring, `k >= 0`.
    pub fn mat_pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.modulus, self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.matmul(&base).expect("power of a square matrix");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.matmul(&base).expect("power of a square matrix");
            }
        }
        acc
    }

    /// Exact inverse by Gauss-Jordan elimination over the field.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let dim = self.dim;
        let mut work = self.entries.clone();
        let mut inv = Self::identity(self.modulus, dim).entries;
        for col in 0..dim {
            let pivot_row = (col..dim)
                .find(|&r| !work[r * dim + col].is_zero())
                .ok_or(LinalgError::Singular)?;
            if pivot_row != col {
                for c in 0..dim {
                    work.swap(pivot_row * dim + c, col * dim + c);
                    inv.swap(pivot_row * dim + c, col * dim + c);
                }
            }
            let pivot_inv = work[col * dim + col].inv().expect("pivot is nonzero");
            for c in 0..dim {
                work[col * dim + c] = &work[col * dim + c] * &pivot_inv;
                inv[col * dim + c] = &inv[col * dim + c] * &pivot_inv;
            }
            for r in 0..dim {
                if r == col {
                    continue;
                }
                let factor = work[r * dim + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    let w = &factor * &work[col * dim + c];
                    work[r * dim + c] = &work[r * dim + c] - &w;
                    let v = &factor * &inv[col * dim + c];
                    inv[r * dim + c] = &inv[r * dim + c] - &v;
                }
            }
        }
        Ok(CycMatrix { modulus: self.modulus, dim, entries: inv })
    }

    /// The commutator `X Y X^(-1) Y^(-1)`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.matmul(rhs)?
            .matmul(&self.inverse()?)?
            .matmul(&rhs.inverse()?)
    }

    /// Kronecker product; the result has dimension `dim(self) * dim(rhs)`.
    pub fn kron(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.modulus != rhs.modulus {
            return Err(CycError::FieldMismatch { left: self.modulus, right: rhs.modulus }.into());
        }
        let (da, db) = (self.dim, rhs.dim);
        Ok(Self::from_fn(self.modulus, da * db, |r, c| {
            let a = self.get(r / db, c / db);
            let b = rhs.get(r % db, c % db);
            a * b
        }))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|r| {
            (0..self.dim).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).is_zero()))
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix(n={}, dim={}) [", self.modulus, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn two_over_n(n: u64) -> BigRational {
    BigRational::new(BigInt::from(2), BigInt::from(n))
}

/// The local operator `P_j`: row `j` holds `2/n` with `2/n - 1` on the
/// diagonal, every other row is zero (`j` is 0-indexed).
pub fn build_p(n: u64, j: usize) -> Result<CycMatrix, LinalgError> {
    assert!(n >= 2, "walk matrices require n >= 2");
    let dim = n as usize;
    if j >= dim {
        return Err(LinalgError::IndexOutOfRange { index: j, size: dim });
    }
    let off = two_over_n(n);
    let diag = &off - &BigRational::one();
    Ok(CycMatrix::from_fn(n, dim, |r, c| {
        if r != j {
            CycNum::zero(n)
        } else if c == j {
            CycNum::from_rational(n, diag.clone())
        } else {
            CycNum::from_rational(n, off.clone())
        }
    }))
}

/// The Grover coin `G = P_0 + ... + P_(n-1)`: diagonal `2/n - 1`,
/// off-diagonal `2/n`. Involutory.
pub fn build_g(n: u64) -> CycMatrix {
    assert!(n >= 2, "walk matrices require n >= 2");
    let off = two_over_n(n);
    let diag = &off - &BigRational::one();
    CycMatrix::from_fn(n, n as usize, |r, c| {
        if r == c {
            CycNum::from_rational(n, diag.clone())
        } else {
            CycNum::from_rational(n, off.clone())
        }
    })
}

/// The diagonal matrix `S = diag(1, w, w^2, ..., w^(n-1))`, `w = zeta_n`.
/// Satisfies `S^n = I`.
pub fn build_s(n: u64) -> CycMatrix {
    assert!(n >= 2, "walk matrices require n >= 2");
    CycMatrix::from_fn(n, n as usize, |r, c| {
        if r == c {
            CycNum::zeta_pow(n, r as i64)
        } else {
            CycNum::zero(n)
        }
    })
}

/// The unnormalized discrete Fourier matrix `F` with entries `w^(r*c)`
/// (0-indexed). The unitary Fourier matrix is `F / sqrt(n)`; the missing
/// scalar is not in the field, so conjugations fold the two `1/sqrt(n)`
/// factors into a single exact `1/n` (see [`conjugate_by_dft`]).
pub fn build_dft(n: u64) -> CycMatrix {
    assert!(n >= 2, "walk matrices require n >= 2");
    CycMatrix::from_fn(n, n as usize, |r, c| CycNum::zeta_pow(n, (r * c) as i64))
}

/// Conjugation by the unitary Fourier matrix: `A^(-1) X A = (1/n) F^* X F`,
/// computed exactly. `X` must be `n x n` over `Q(zeta_n)`.
pub fn conjugate_by_dft(x: &CycMatrix) -> Result<CycMatrix, LinalgError> {
    let n = x.modulus_n();
    if x.dim() != n as usize {
        return Err(LinalgError::DimMismatch { left: x.dim(), right: n as usize });
    }
    let f = build_dft(n);
    let product = f.conj_transpose().matmul(x)?.matmul(&f)?;
    Ok(product.scale(&BigRational::new(BigInt::one(), BigInt::from(n))))
}

/// The walk operator `U`: the `n^2 x n^2` block-circulant matrix whose
/// block `(r, c)` is `P_((c - r) mod n)`.
pub fn build_u(n: u64) -> CycMatrix {
    assert!(n >= 2, "walk matrices require n >= 2");
    let dim = n as usize;
    let blocks: Vec<CycMatrix> = (0..dim)
        .map(|j| build_p(n, j).expect("block index in range"))
        .collect();
    CycMatrix::from_fn(n, dim * dim, |r, c| {
        let (br, bc) = (r / dim, c / dim);
        let block = &blocks[(bc + dim - br) % dim];
        block.get(r % dim, c % dim).clone()
    })
}

/// The block-diagonal matrix `diag(G, SG, S^2 G, ..., S^(n-1) G)` that the
/// Fourier conjugation of `U` must equal.
pub fn expected_block_diagonal(n: u64) -> CycMatrix {
    let dim = n as usize;
    let g = build_g(n);
    let s = build_s(n);
    let mut blocks = Vec::with_capacity(dim);
    let mut prefix = g.clone();
    for _ in 0..dim {
        blocks.push(prefix.clone());
        prefix = s.matmul(&prefix).expect("same field");
    }
    CycMatrix::from_fn(n, dim * dim, |r, c| {
        let (br, bc) = (r / dim, c / dim);
        if br != bc {
            CycNum::zero(n)
        } else {
            blocks[br].get(r % dim, c % dim).clone()
        }
    })
}

/// Applies the `A (x) I_n` conjugation to a candidate walk operator:
/// `(1/n) (F^* (x) I_n) u (F (x) I_n)`.
pub fn fourier_block_conjugate(u: &CycMatrix) -> Result<CycMatrix, LinalgError> {
    let n = u.modulus_n();
    let dim = n as usize;
    if u.dim() != dim * dim {
        return Err(LinalgError::DimMismatch { left: u.dim(), right: dim * dim });
    }
    let eye = CycMatrix::identity(n, dim);
    let f = build_dft(n);
    let right = f.kron(&eye)?;
    let left = f.conj_transpose().kron(&eye)?;
    let product = left.matmul(u)?.matmul(&right)?;
    Ok(product.scale(&BigRational::new(BigInt::one(), BigInt::from(n))))
}

/// True when the given `n^2 x n^2` matrix conjugates to
/// `diag(G, SG, ..., S^(n-1) G)` under `A (x) I_n`, exactly.
pub fn check_diagonalization_of(u: &CycMatrix) -> Result<bool, LinalgError> {
    Ok(fourier_block_conjugate(u)? == expected_block_diagonal(u.modulus_n()))
}

/// [`check_diagonalization_of`] applied to the walk operator itself.
pub fn check_diagonalization(n: u64) -> bool {
    check_diagonalization_of(&build_u(n)).expect("walk operator has valid shape")
}

/// Smallest `m` in `1..=bound` with `x^m = I`, by iterated multiplication.
pub fn min_power_to_identity(x: &CycMatrix, bound: u64) -> Option<u64> {
    let mut acc = CycMatrix::identity(x.modulus_n(), x.dim());
    for m in 1..=bound {
        acc = acc.matmul(x).expect("powers stay square");
        if acc.is_identity() {
            return Some(m);
        }
    }
    None
}
