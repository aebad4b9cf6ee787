//! Exact dense square-matrix arithmetic: arbitrary-precision integer
//! matrices and canonical-residue matrices over Z/m.
//!
//! Everything here is exact. Integer work uses `BigInt`; modular work keeps
//! entries as canonical residues in `[0, m)` and reduces through `u128`
//! intermediates so no product can wrap.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Largest supported modulus. Keeps `n * (m-1)^2` inside `u128` with a wide
/// margin, so dot products never overflow before reduction.
pub const MAX_MODULUS: u64 = 1 << 60;

/// Shared row-by-row formatter for both matrix types.
macro_rules! fmt_matrix_impl {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for i in 0..self.n {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "[")?;
                for j in 0..self.n {
                    if j > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", self.entries[i * self.n + j])?;
                }
                write!(f, "]")?;
            }
            Ok(())
        }
    };
}

// ---------------------------------------------------------------------------
// IntMatrix
// ---------------------------------------------------------------------------

/// Square matrix over the integers, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n * n,
                n,
                n,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "ragged rows: row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for literal test matrices.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diagonal(blocks: &[&IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::from_fn(n, |_, _| BigInt::zero());
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.entries[(off + i) * n + (off + j)] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        m
    }

    /// Outer product `col * row` of two length-n vectors.
    pub fn outer(col: &[BigInt], row: &[BigInt]) -> Result<Self> {
        if col.len() != row.len() {
            return Err(Error::InvalidInput("outer product needs equal-length vectors".into()));
        }
        Ok(Self::from_fn(col.len(), |i, j| &col[i] * &row[j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..n {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_fn(self.n, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn scalar_mul(&self, s: &BigInt) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) * s)
    }

    pub fn negate(&self) -> Self {
        Self::from_fn(self.n, |i, j| -self.get(i, j))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination; exact at every step.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i * n + j] = q;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        let d = a[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == skip_row {
                continue;
            }
            for j in 0..n {
                if j == skip_col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix { n: n - 1, entries }
    }

    /// Adjugate matrix, satisfying `self * adj = det * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    /// Inverse over the integers; defined exactly when `det = +-1`.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_one() {
            Ok(self.adjugate())
        } else if (-&d).is_one() {
            Ok(self.adjugate().negate())
        } else {
            Err(Error::NotInvertible { det: d.to_string() })
        }
    }

    /// Entry-wise reduction to canonical residues in `[0, m)`.
    pub fn reduce_mod(&self, m: u64) -> Result<ModMatrix> {
        check_modulus(m)?;
        let mb = BigInt::from(m);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let r = e.mod_floor(&mb);
                u64::try_from(r).expect("canonical residue fits u64")
            })
            .collect();
        Ok(ModMatrix { n: self.n, modulus: m, entries })
    }
}

impl fmt::Debug for IntMatrix {
    fmt_matrix_impl!();
}

impl fmt::Display for IntMatrix {
    fmt_matrix_impl!();
}

// ---------------------------------------------------------------------------
// ModMatrix
// ---------------------------------------------------------------------------

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("modulus must be at least 2, got {m}")));
    }
    if m > MAX_MODULUS {
        return Err(Error::InvalidInput(format!("modulus {m} exceeds supported maximum {MAX_MODULUS}")));
    }
    Ok(())
}

/// Square matrix over Z/m with entries stored as canonical residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                n * n,
                n,
                n,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(Self { n, modulus, entries })
    }

    pub fn from_i64_rows(modulus: u64, rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::from_i64_rows(rows)?.reduce_mod(modulus)
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Ok(Self { n, modulus, entries })
    }

    pub(crate) fn from_raw(n: usize, modulus: u64, entries: Vec<u64>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus));
        Self { n, modulus, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: other.modulus });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = vec![0u64; self.n * self.n];
        mod_mul_into(&self.entries, &other.entries, self.n, self.modulus, &mut out);
        Ok(Self { n: self.n, modulus: self.modulus, entries: out })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Self { n, modulus: self.modulus, entries }
    }

    pub fn negate(&self) -> Self {
        let m = self.modulus;
        let entries = self.entries.iter().map(|&e| if e == 0 { 0 } else { m - e }).collect();
        Self { n: self.n, modulus: m, entries }
    }

    pub fn trace(&self) -> u64 {
        let mut acc = 0u128;
        for i in 0..self.n {
            acc += u128::from(self.entries[i * self.n + i]);
        }
        (acc % u128::from(self.modulus)) as u64
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.entries[i * self.n + j] == u64::from(i == j))
        })
    }

    /// Determinant as a canonical residue. Works for composite moduli: small
    /// dimensions expand by minors mod m; larger ones lift to the integers.
    pub fn det_mod(&self) -> u64 {
        if self.n <= 8 {
            det_mod_slice(&self.entries, self.n, self.modulus)
        } else {
            let lifted = IntMatrix::from_fn(self.n, |i, j| BigInt::from(self.get(i, j)));
            lifted
                .det()
                .mod_floor(&BigInt::from(self.modulus))
                .try_into()
                .expect("residue fits u64")
        }
    }

    /// Inverse mod m via the adjugate; requires `gcd(det, m) = 1`.
    pub fn inverse(&self) -> Result<Self> {
        let mut out = vec![0u64; self.n * self.n];
        mod_inverse_into(&self.entries, self.n, self.modulus, &mut out)?;
        Ok(Self { n: self.n, modulus: self.modulus, entries: out })
    }

    /// Lift to the integer matrix with the canonical residues as entries.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| BigInt::from(self.get(i, j)))
    }
}

impl fmt::Debug for ModMatrix {
    fmt_matrix_impl!();
}

impl fmt::Display for ModMatrix {
    fmt_matrix_impl!();
}

// ---------------------------------------------------------------------------
// Raw-slice modular kernels (shared with the group enumeration engine)
// ---------------------------------------------------------------------------

/// `out = a * b` for row-major n x n slices over Z/m. Accumulates in `u128`;
/// with `m <= MAX_MODULUS` the sum of n products cannot wrap.
pub(crate) fn mod_mul_into(a: &[u64], b: &[u64], n: usize, m: u64, out: &mut [u64]) {
    let mm = u128::from(m);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u128;
            for k in 0..n {
                acc += u128::from(a[i * n + k]) * u128::from(b[k * n + j]);
            }
            out[i * n + j] = (acc % mm) as u64;
        }
    }
}

/// Determinant of a row-major slice by expansion along the first active row.
fn det_mod_slice(a: &[u64], n: usize, m: u64) -> u64 {
    fn go(a: &[u64], n: usize, row: usize, cols: &mut Vec<usize>, m: u64) -> u64 {
        if cols.len() == 1 {
            return a[row * n + cols[0]];
        }
        let mut acc = 0u128;
        let mm = u128::from(m);
        for pos in 0..cols.len() {
            let c = cols[pos];
            let coeff = a[row * n + c];
            if coeff != 0 {
                cols.remove(pos);
                let sub = go(a, n, row + 1, cols, m);
                cols.insert(pos, c);
                let term = (u128::from(coeff) * u128::from(sub)) % mm;
                if pos % 2 == 0 {
                    acc = (acc + term) % mm;
                } else {
                    acc = (acc + mm - term) % mm;
                }
            }
        }
        acc as u64
    }
    let mut cols: Vec<usize> = (0..n).collect();
    go(a, n, 0, &mut cols, m)
}

fn mod_unit_inverse(det: u64, m: u64) -> Result<u64> {
    // Extended gcd on i128; det and m both fit comfortably.
    let (mut r0, mut r1) = (i128::from(m), i128::from(det));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { det: format!("{det} (mod {m})") });
    }
    Ok(t0.rem_euclid(i128::from(m)) as u64)
}

/// Inverse of a row-major slice over Z/m, written into `out`.
pub(crate) fn mod_inverse_into(a: &[u64], n: usize, m: u64, out: &mut [u64]) -> Result<()> {
    let det = if n <= 8 {
        det_mod_slice(a, n, m)
    } else {
        ModMatrix::from_raw(n, m, a.to_vec()).det_mod()
    };
    let dinv = u128::from(mod_unit_inverse(det, m)?);
    let mm = u128::from(m);
    if n == 1 {
        out[0] = dinv as u64;
        return Ok(());
    }
    // adj[i][j] = (-1)^(i+j) * minor(j, i)
    let mut sub = vec![0u64; (n - 1) * (n - 1)];
    for i in 0..n {
        for j in 0..n {
            let mut r = 0;
            for ii in 0..n {
                if ii == j {
                    continue;
                }
                let mut c = 0;
                for jj in 0..n {
                    if jj == i {
                        continue;
                    }
                    sub[r * (n - 1) + c] = a[ii * n + jj];
                    c += 1;
                }
                r += 1;
            }
            let cof = u128::from(det_mod_slice(&sub, n - 1, m));
            let val = (cof * dinv) % mm;
            out[i * n + j] = if (i + j) % 2 == 0 { val as u64 } else { ((mm - val) % mm) as u64 };
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Matrix files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<serde_json::Number>>,
}

pub(crate) fn number_to_bigint(num: &serde_json::Number) -> Result<BigInt> {
    let s = num.to_string();
    BigInt::from_str(&s)
        .map_err(|_| Error::InvalidInput(format!("matrix entry {s} is not an integer")))
}

/// Parse a matrix from either supported file format:
/// a JSON object `{"n": 2, "entries": [[...], ...]}`, or plain text whose
/// first line is n followed by n whitespace-separated rows.
pub fn parse_matrix_str(s: &str) -> Result<IntMatrix> {
    let trimmed = s.trim_start();
    if trimmed.starts_with('{') {
        let file: MatrixFile = serde_json::from_str(trimmed)?;
        if file.entries.len() != file.n {
            return Err(Error::InvalidInput(format!(
                "expected {} rows, got {}",
                file.n,
                file.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(file.n);
        for row in &file.entries {
            if row.len() != file.n {
                return Err(Error::InvalidInput(format!(
                    "ragged rows: expected {} entries per row, got {}",
                    file.n,
                    row.len()
                )));
            }
            rows.push(row.iter().map(number_to_bigint).collect::<Result<Vec<_>>>()?);
        }
        return IntMatrix::from_rows(rows);
    }

    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty matrix file".into()))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad dimension line: {header:?}")))?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("expected {n} rows")))?;
        let row: Vec<BigInt> = line
            .split_whitespace()
            .map(|tok| {
                BigInt::from_str(tok)
                    .map_err(|_| Error::InvalidInput(format!("bad entry {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "ragged rows: expected {n} entries, got {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(Error::InvalidInput("trailing content after matrix rows".into()));
    }
    IntMatrix::from_rows(rows)
}

pub fn read_matrix_file(path: &Path) -> Result<IntMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_str(&text)
}

// ---------------------------------------------------------------------------
// SquareMatrix: the shared surface automorphisms act through
// ---------------------------------------------------------------------------

/// Operations an automorphism needs from its element type, implemented by
/// both `IntMatrix` and `ModMatrix` so one symbolic automorphism can act on
/// integral elements and on any finite quotient.
pub trait SquareMatrix: Clone + PartialEq + Eq + fmt::Debug + Sized {
    type Key: std::hash::Hash + Eq + Clone + fmt::Debug;
    type Scalar: PartialEq + Eq + Clone + fmt::Debug + fmt::Display;

    fn dim(&self) -> usize;
    fn mat_mul(&self, other: &Self) -> Result<Self>;
    fn transpose(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn negate(&self) -> Self;
    fn trace(&self) -> Self::Scalar;
    fn is_identity(&self) -> bool;
    fn canonical_key(&self) -> Self::Key;
    /// `+1` / `-1` when the determinant is the corresponding central sign,
    /// `None` otherwise.
    fn det_sign(&self) -> Option<i8>;
    /// diag(1, ..., 1, -1) with the same shape (and modulus) as `self`.
    fn sign_conjugator_like(&self) -> Self;
    /// diag([[0,1],[1,0]], I) with the same shape (and modulus) as `self`.
    fn swap_conjugator_like(&self) -> Result<Self>;
}

impl SquareMatrix for IntMatrix {
    type Key = Vec<BigInt>;
    type Scalar = BigInt;

    fn dim(&self) -> usize {
        self.n
    }
    fn mat_mul(&self, other: &Self) -> Result<Self> {
        IntMatrix::mat_mul(self, other)
    }
    fn transpose(&self) -> Self {
        IntMatrix::transpose(self)
    }
    fn inverse(&self) -> Result<Self> {
        IntMatrix::inverse(self)
    }
    fn negate(&self) -> Self {
        IntMatrix::negate(self)
    }
    fn trace(&self) -> BigInt {
        IntMatrix::trace(self)
    }
    fn is_identity(&self) -> bool {
        IntMatrix::is_identity(self)
    }
    fn canonical_key(&self) -> Vec<BigInt> {
        self.entries.clone()
    }
    fn det_sign(&self) -> Option<i8> {
        let d = self.det();
        if d.is_one() {
            Some(1)
        } else if (-d).is_one() {
            Some(-1)
        } else {
            None
        }
    }
    fn sign_conjugator_like(&self) -> Self {
        IntMatrix::from_fn(self.n, |i, j| match (i == j, i == self.n - 1) {
            (true, true) => BigInt::from(-1),
            (true, false) => BigInt::one(),
            _ => BigInt::zero(),
        })
    }
    fn swap_conjugator_like(&self) -> Result<Self> {
        swap_conjugator_entries(self.n)?;
        Ok(IntMatrix::from_fn(self.n, |i, j| {
            BigInt::from(i64::from(swap_entry(i, j)))
        }))
    }
}

impl SquareMatrix for ModMatrix {
    type Key = Vec<u64>;
    type Scalar = u64;

    fn dim(&self) -> usize {
        self.n
    }
    fn mat_mul(&self, other: &Self) -> Result<Self> {
        ModMatrix::mat_mul(self, other)
    }
    fn transpose(&self) -> Self {
        ModMatrix::transpose(self)
    }
    fn inverse(&self) -> Result<Self> {
        ModMatrix::inverse(self)
    }
    fn negate(&self) -> Self {
        ModMatrix::negate(self)
    }
    fn trace(&self) -> u64 {
        ModMatrix::trace(self)
    }
    fn is_identity(&self) -> bool {
        ModMatrix::is_identity(self)
    }
    fn canonical_key(&self) -> Vec<u64> {
        self.entries.clone()
    }
    fn det_sign(&self) -> Option<i8> {
        let d = self.det_mod();
        if d == 1 {
            Some(1)
        } else if d == self.modulus - 1 {
            Some(-1)
        } else {
            None
        }
    }
    fn sign_conjugator_like(&self) -> Self {
        let m = self.modulus;
        Self::from_raw(
            self.n,
            m,
            (0..self.n * self.n)
                .map(|idx| {
                    let (i, j) = (idx / self.n, idx % self.n);
                    match (i == j, i == self.n - 1) {
                        (true, true) => (m - 1) % m,
                        (true, false) => 1,
                        _ => 0,
                    }
                })
                .collect(),
        )
    }
    fn swap_conjugator_like(&self) -> Result<Self> {
        swap_conjugator_entries(self.n)?;
        Ok(Self::from_raw(
            self.n,
            self.modulus,
            (0..self.n * self.n)
                .map(|idx| u64::from(swap_entry(idx / self.n, idx % self.n)))
                .collect(),
        ))
    }
}

fn swap_conjugator_entries(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput("swap conjugator needs dimension >= 2".into()));
    }
    Ok(())
}

/// Entry (i, j) of diag([[0,1],[1,0]], I_{n-2}).
fn swap_entry(i: usize, j: usize) -> bool {
    match (i, j) {
        (0, 1) | (1, 0) => true,
        (0, _) | (_, 0) | (1, _) | (_, 1) => false,
        _ => i == j,
    }
}
