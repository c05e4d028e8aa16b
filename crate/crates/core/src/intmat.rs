//! Exact integer-matrix primitives: characteristic polynomial, determinants
//! (including rational shifts), matrix discriminant, diagonalisability over
//! the complex numbers, the Gershgorin bound, and polynomial evaluation at a
//! matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::intpoly::{bareiss_det, IntPoly};

/// Square matrix with arbitrary-precision integer entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

/// Square matrix with exact rational entries (reduced, positive denominator
/// as maintained by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be >= 1"));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Companion matrix of a monic polynomial of degree >= 1.
    pub fn companion(f: &IntPoly) -> Result<Self> {
        let n = f.degree().unwrap_or(0);
        if n == 0 || !f.is_monic() {
            return Err(Error::invalid(
                "companion matrix requires a monic polynomial of degree >= 1",
            ));
        }
        let mut m = Self::zero(n);
        for i in 1..n {
            m.entries[i * n + (i - 1)] = BigInt::one();
        }
        for i in 0..n {
            m.entries[i * n + (n - 1)] = -f.coeff(i);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        IntMatrix { n, entries }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * &other.entries[k * n + j];
                }
            }
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        Ok(IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Characteristic polynomial det(X I - A), monic of degree n, by the
    /// Faddeev-LeVerrier recurrence; the interior divisions by k are exact
    /// over the integers.
    pub fn charpoly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.matmul(&m).expect("same dimension");
            let (c, r) = (-am.trace()).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[n - k] = c.clone();
            m = am;
            for i in 0..n {
                m.entries[i * n + i] += &c;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let mut buf = self.entries.clone();
        bareiss_det(&mut buf, self.n)
    }

    /// Discriminant of the characteristic polynomial.
    pub fn discr_matrix(&self) -> BigInt {
        self.charpoly()
            .discriminant()
            .expect("characteristic polynomial has degree n >= 1")
    }

    /// Diagonalisability over C: the squarefree part q of the characteristic
    /// polynomial annihilates A exactly when the minimal polynomial is
    /// squarefree.
    pub fn is_diagonalizable_c(&self) -> bool {
        let q = self.charpoly().squarefree_part();
        self.eval_poly(&q).is_zero()
    }

    /// Horner evaluation f(A), exact.
    pub fn eval_poly(&self, f: &IntPoly) -> IntMatrix {
        let n = self.n;
        let mut acc = Self::zero(n);
        for c in f.coeffs().iter().rev() {
            acc = self.matmul(&acc).expect("same dimension");
            for i in 0..n {
                acc.entries[i * n + i] += c;
            }
        }
        acc
    }

    /// Exact rational determinant det(A - K) via common-denominator scaling
    /// and integer elimination.
    pub fn det_shift(&self, k: &RatMatrix) -> Result<BigRational> {
        if self.n != k.n {
            return Err(Error::DimensionMismatch(format!(
                "det_shift: {}x{} matrix vs {}x{} shift",
                self.n, self.n, k.n, k.n
            )));
        }
        let n = self.n;
        let mut denom_lcm = BigInt::one();
        for e in &k.entries {
            denom_lcm = denom_lcm.lcm(e.denom());
        }
        let mut scaled = Vec::with_capacity(n * n);
        for (a, ke) in self.entries.iter().zip(&k.entries) {
            // L*(a - k) is integral by construction of L.
            let num = (BigRational::from_integer(a.clone()) - ke)
                * BigRational::from_integer(denom_lcm.clone());
            debug_assert!(num.is_integer());
            scaled.push(num.to_integer());
        }
        let det = bareiss_det(&mut scaled, n);
        Ok(BigRational::new(det, denom_lcm.pow(n as u32)))
    }

    /// Gershgorin bound: maximum absolute row sum; every eigenvalue magnitude
    /// is at most this value.
    pub fn gershgorin_bound(&self) -> BigInt {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.entries[i * n + j].abs())
                    .sum::<BigInt>()
            })
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Minimum degree among the irreducible factors of the characteristic
    /// polynomial over Q. Fails when the factorization is incomplete.
    pub fn min_factor_degree(&self) -> Result<usize> {
        let profile = self.charpoly().factor_profile()?;
        if !profile.complete {
            return Err(Error::IncompleteFactorization {
                degree: self.n,
                limit: crate::intpoly::FACTOR_DEGREE_LIMIT,
            });
        }
        Ok(*profile.degrees.iter().min().expect("degree n >= 1"))
    }

    /// Compact text form "n:e11,e12,...,enn".
    pub fn to_compact(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("{}:{}", self.n, body.join(","))
    }

    pub fn parse_compact(s: &str) -> Result<IntMatrix> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid("expected matrix in \"n:e11,e12,...\" form"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad dimension: {head}")))?;
        let mut entries = Vec::with_capacity(n * n);
        for part in body.split(',') {
            let e: BigInt = part
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad integer entry: {part}")))?;
            entries.push(e);
        }
        Self::new(n, entries)
    }

    /// JSON array of arrays of decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.n)
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.n)
                        .map(|j| serde_json::Value::String(self.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IntMatrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::invalid("matrix JSON must be an array of arrays"))?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::invalid("matrix JSON must be an array of arrays"))?;
            if cells.len() != n {
                return Err(Error::DimensionMismatch("matrix JSON is not square".into()));
            }
            for cell in cells {
                let s = cell
                    .as_str()
                    .ok_or_else(|| Error::invalid("matrix entries must be decimal strings"))?;
                entries.push(
                    s.parse()
                        .map_err(|_| Error::invalid(format!("bad integer literal: {s}")))?,
                );
            }
        }
        Self::new(n, entries)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_compact())
    }
}

impl RatMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be >= 1"));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_int_matrix(a: &IntMatrix) -> Self {
        RatMatrix {
            n: a.n,
            entries: a
                .entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    /// Compact text form "n:e11,e12,..." with entries like "1/2" or "3".
    pub fn parse_compact(s: &str) -> Result<RatMatrix> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid("expected matrix in \"n:e11,e12,...\" form"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad dimension: {head}")))?;
        let mut entries = Vec::with_capacity(n * n);
        for part in body.split(',') {
            entries.push(parse_rational(part.trim())?);
        }
        Self::new(n, entries)
    }

    pub fn to_compact(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("{}:{}", self.n, body.join(","))
    }
}

/// Parses "p/q" or a bare integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational numerator: {num}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational denominator: {den}")))?;
        if d.is_zero() {
            return Err(Error::invalid("rational denominator must be nonzero"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::invalid(format!("bad rational literal: {s}")))?;
        Ok(BigRational::from_integer(n))
    }
}
