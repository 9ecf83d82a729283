//! [n, d] MDS erasure code over GF(2^m): a systematic Reed–Solomon code
//! derived from a Vandermonde matrix.
//!
//! The generator G is d × n. A message of d subfiles maps to the n coded
//! subfiles `coded[f] = Σ_i G[i][f] · msg[i]`, i.e. coded = Gᵀ · msg, applied
//! symbol by symbol. The first d columns of G form the identity.

pub mod gf;

use std::collections::BTreeMap;

use itertools::Itertools;

pub use gf::{GfField, Symbol};

use crate::error::{Error, Result};

/// A subfile: a vector of field symbols. Addition is symbolwise XOR.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Subfile(pub Vec<Symbol>);

impl Subfile {
    pub fn zeros(len: usize) -> Self {
        Subfile(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn xor_assign(&mut self, other: &Subfile) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Subfile) -> Subfile {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }
}

type Matrix = Vec<Vec<Symbol>>;

#[derive(Debug, Clone)]
pub struct MdsCode {
    field: GfField,
    n: usize,
    d: usize,
    generator: Matrix,
}

impl MdsCode {
    /// Systematic code over the smallest field with at least `n` elements.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_field(GfField::with_at_least(n)?, n, d)
    }

    pub fn with_field(field: GfField, n: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n {
            return Err(Error::InvalidParameter(format!(
                "MDS dimension d={d} for length n={n}"
            )));
        }
        if n > field.size() {
            return Err(Error::InvalidParameter(format!(
                "length {n} exceeds GF(2^{}) size",
                field.m()
            )));
        }
        // Vandermonde V[i][f] = x_f^i at distinct points x_f = f
        let vandermonde: Matrix = (0..d)
            .map(|i| (0..n).map(|f| field.pow(f as Symbol, i as u32)).collect())
            .collect();
        let head: Matrix = vandermonde.iter().map(|row| row[..d].to_vec()).collect();
        let head_inv = invert(&field, &head).ok_or_else(|| Error::Singular((0..d).collect()))?;
        let generator = mat_mul(&field, &head_inv, &vandermonde);
        Ok(MdsCode {
            field,
            n,
            d,
            generator,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    /// The d × n generator.
    pub fn generator(&self) -> &[Vec<Symbol>] {
        &self.generator
    }

    /// Encodes d equal-length subfiles into n coded subfiles.
    pub fn encode(&self, message: &[Subfile]) -> Result<Vec<Subfile>> {
        if message.len() != self.d {
            return Err(Error::LengthMismatch {
                expected: self.d,
                found: message.len(),
            });
        }
        let len = message[0].len();
        if let Some(bad) = message.iter().find(|m| m.len() != len) {
            return Err(Error::LengthMismatch {
                expected: len,
                found: bad.len(),
            });
        }
        Ok((0..self.n)
            .map(|f| {
                let mut out = Subfile::zeros(len);
                for (i, msg) in message.iter().enumerate() {
                    axpy(&self.field, self.generator[i][f], msg, &mut out);
                }
                out
            })
            .collect())
    }

    /// Recovers the message from any d coded subfiles (extra shares are ignored;
    /// the d smallest indices are used).
    pub fn decode(&self, shares: &BTreeMap<usize, Subfile>) -> Result<Vec<Subfile>> {
        if shares.len() < self.d {
            return Err(Error::InsufficientShares {
                have: shares.len(),
                need: self.d,
            });
        }
        if let Some(&bad) = shares.keys().find(|&&f| f >= self.n) {
            return Err(Error::InvalidParameter(format!(
                "share index {bad} ≥ n={}",
                self.n
            )));
        }
        let used: Vec<(&usize, &Subfile)> = shares.iter().take(self.d).collect();
        let len = used[0].1.len();
        if let Some((_, bad)) = used.iter().find(|(_, s)| s.len() != len) {
            return Err(Error::LengthMismatch {
                expected: len,
                found: bad.len(),
            });
        }
        let cols: Vec<usize> = used.iter().map(|(f, _)| **f).collect();
        // coded[f] = Σ_i G[i][f] msg[i]; with S = G[:, cols], shares = Sᵀ msg
        let sub_t: Matrix = cols
            .iter()
            .map(|&f| (0..self.d).map(|i| self.generator[i][f]).collect())
            .collect();
        let inv = invert(&self.field, &sub_t).ok_or_else(|| Error::Singular(cols.clone()))?;
        Ok((0..self.d)
            .map(|i| {
                let mut out = Subfile::zeros(len);
                for (k, (_, share)) in used.iter().enumerate() {
                    axpy(&self.field, inv[i][k], share, &mut out);
                }
                out
            })
            .collect())
    }

    /// Whether the given d columns of the generator are linearly independent.
    pub fn columns_invertible(&self, cols: &[usize]) -> bool {
        let sub: Matrix = (0..self.d)
            .map(|i| cols.iter().map(|&f| self.generator[i][f]).collect())
            .collect();
        invert(&self.field, &sub).is_some()
    }

    /// Checks every d-subset of columns. Returns the first singular subset.
    pub fn verify_mds(&self) -> std::result::Result<u64, Vec<usize>> {
        let mut checked = 0;
        for cols in (0..self.n).combinations(self.d) {
            if !self.columns_invertible(&cols) {
                return Err(cols);
            }
            checked += 1;
        }
        Ok(checked)
    }
}

/// out += coef · x
fn axpy(field: &GfField, coef: Symbol, x: &Subfile, out: &mut Subfile) {
    match coef {
        0 => {}
        1 => out.xor_assign(x),
        _ => {
            for (o, s) in out.0.iter_mut().zip(&x.0) {
                *o ^= field.mul(coef, *s);
            }
        }
    }
}

fn mat_mul(field: &GfField, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(0, |acc, k| acc ^ field.mul(row[k], b[k][c])))
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse of a square matrix; `None` if singular.
fn invert(field: &GfField, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| Symbol::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = field.inv(a[col][col])?;
        for x in a[col].iter_mut() {
            *x = field.mul(*x, scale);
        }
        for x in inv[col].iter_mut() {
            *x = field.mul(*x, scale);
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let factor = a[r][col];
            for c in 0..n {
                let (av, iv) = (a[col][c], inv[col][c]);
                a[r][c] ^= field.mul(factor, av);
                inv[r][c] ^= field.mul(factor, iv);
            }
        }
    }
    Some(inv)
}

/// How a byte string is cut into d subfiles of m-bit symbols.
///
/// Bytes are read MSB first as a bit stream, grouped into m-bit symbols and
/// zero-padded at the tail; `byte_len` restores the exact original length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileLayout {
    pub m: u32,
    pub d: usize,
    pub byte_len: usize,
    pub symbols_per_subfile: usize,
}

impl FileLayout {
    pub fn new(m: u32, d: usize, byte_len: usize) -> Self {
        let bits = byte_len * 8;
        let symbols = bits.div_ceil(m as usize);
        let symbols_per_subfile = symbols.div_ceil(d).max(1);
        FileLayout {
            m,
            d,
            byte_len,
            symbols_per_subfile,
        }
    }

    /// Bits of padding appended after the payload.
    pub fn padding_bits(&self) -> usize {
        self.d * self.symbols_per_subfile * self.m as usize - self.byte_len * 8
    }

    pub fn split(&self, bytes: &[u8]) -> Result<Vec<Subfile>> {
        if bytes.len() > self.byte_len {
            return Err(Error::LengthMismatch {
                expected: self.byte_len,
                found: bytes.len(),
            });
        }
        let m = self.m as usize;
        let bit = |i: usize| -> Symbol {
            let byte = i / 8;
            if byte >= bytes.len() {
                0
            } else {
                Symbol::from((bytes[byte] >> (7 - i % 8)) & 1)
            }
        };
        Ok((0..self.d)
            .map(|s| {
                Subfile(
                    (0..self.symbols_per_subfile)
                        .map(|k| {
                            let start = (s * self.symbols_per_subfile + k) * m;
                            (0..m).fold(0, |acc, b| (acc << 1) | bit(start + b))
                        })
                        .collect(),
                )
            })
            .collect())
    }

    pub fn join(&self, subfiles: &[Subfile]) -> Result<Vec<u8>> {
        if subfiles.len() != self.d {
            return Err(Error::LengthMismatch {
                expected: self.d,
                found: subfiles.len(),
            });
        }
        let m = self.m as usize;
        let mut out = vec![0u8; self.byte_len];
        let total_bits = self.byte_len * 8;
        for (s, sub) in subfiles.iter().enumerate() {
            if sub.len() != self.symbols_per_subfile {
                return Err(Error::LengthMismatch {
                    expected: self.symbols_per_subfile,
                    found: sub.len(),
                });
            }
            for (k, sym) in sub.0.iter().enumerate() {
                let start = (s * self.symbols_per_subfile + k) * m;
                for b in 0..m {
                    let pos = start + b;
                    if pos >= total_bits {
                        break;
                    }
                    if (sym >> (m - 1 - b)) & 1 == 1 {
                        out[pos / 8] |= 1 << (7 - pos % 8);
                    }
                }
            }
        }
        Ok(out)
    }
}
