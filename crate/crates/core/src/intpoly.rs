//! Exact arithmetic on dense integer polynomials: resultants, discriminants,
//! gcd, squarefree structure, bounded factorization over the rationals, and
//! approximate complex roots.
//!
//! Coefficients are arbitrary-precision integers stored constant term first.
//! The zero polynomial is the empty coefficient vector; its degree is `None`
//! rather than any sentinel integer.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Dense integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Degrees (with multiplicity) of the monic irreducible factors over the
/// rationals. `complete` is false when factorization was abandoned beyond
/// the supported degree and only integer-root information was extracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorProfile {
    pub degrees: Vec<usize>,
    pub complete: bool,
}

/// Factorization into monic irreducible factors with multiplicities. When
/// the input degree is beyond the supported limit, `remainder` carries the
/// unfactored part and `complete` is false; the product of the factors times
/// the remainder always reproduces the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(IntPoly, u32)>,
    pub remainder: Option<IntPoly>,
    pub complete: bool,
}

/// Complete profiles are only produced up to this degree.
pub const FACTOR_DEGREE_LIMIT: usize = 6;

impl IntPoly {
    /// Builds a polynomial from coefficients, constant term first.
    /// Trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial X^k.
    pub fn x_pow(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of X^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> IntPoly {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact division; returns `None` when `other` does not divide `self`
    /// over the integers.
    pub fn div_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dn = self.degree().unwrap();
        let dd = other.degree().unwrap();
        if dn < dd {
            return None;
        }
        let lc = other.leading_coeff().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(quot))
    }

    /// Content: gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading_coeff().unwrap().is_negative() {
            g = -g;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Resultant of two nonzero polynomials, computed as the determinant of
    /// the Sylvester matrix by fraction-free (Bareiss) elimination. Uses the
    /// convention Res(f,g) = lc(f)^deg g * lc(g)^deg f * prod (alpha_i - beta_j).
    pub fn resultant(&self, other: &IntPoly) -> Result<BigInt> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.degree().unwrap();
        let n = other.degree().unwrap();
        Ok(sylvester_resultant(&self.coeffs, m, &other.coeffs, n))
    }

    /// Discriminant: (-1)^{m(m-1)/2} Res(f, f') / lc(f) with m = deg f.
    /// The division by the leading coefficient is exact.
    pub fn discriminant(&self) -> Result<BigInt> {
        let m = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(m) => m,
        };
        if m == 1 {
            return Ok(BigInt::one());
        }
        let deriv = self.derivative();
        // Res(f, f') with f' taken at its formal degree m-1; leading zeros of
        // f' only rescale by lc(f), handled by the homogeneity fixup below.
        let res = if deriv.is_zero() {
            BigInt::zero()
        } else {
            let k = deriv.degree().unwrap();
            let raw = sylvester_resultant(&self.coeffs, m, &deriv.coeffs, k);
            // When deg f' < m-1 (only possible here if lc-related cancellation
            // cannot occur over Z with lc*m != 0), k == m-1 always holds.
            debug_assert_eq!(k, m - 1);
            raw
        };
        let sign = if (m * (m - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let lc = self.leading_coeff().unwrap();
        let (q, r) = (BigInt::from(sign) * res).div_rem(lc);
        debug_assert!(r.is_zero(), "discriminant division must be exact");
        Ok(q)
    }

    /// Greatest common divisor over Q, scaled primitive over Z with positive
    /// leading coefficient. gcd(0, 0) = 0.
    pub fn gcd_primitive(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        // Primitive PRS: pseudo-remainder then strip content each step.
        while !b.is_zero() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Squarefree part f / gcd(f, f'), monic-normalized. Requires monic input
    /// of degree >= 1.
    pub fn squarefree_part(&self) -> IntPoly {
        assert!(
            self.is_monic() && self.degree().unwrap_or(0) >= 1,
            "squarefree_part requires a monic polynomial of degree >= 1"
        );
        let g = self.gcd_primitive(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        // g divides monic f, so g is monic by Gauss's lemma and the quotient
        // is an exact integer polynomial.
        self.div_exact(&g)
            .expect("gcd must divide the polynomial exactly")
    }

    /// True iff gcd(f, f') is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd_primitive(&self.derivative()).degree() == Some(0)
    }

    /// Degrees of the monic irreducible factors over Q, with multiplicity.
    /// Complete only up to degree 6; beyond that, integer roots are still
    /// stripped and `complete` is false.
    pub fn factor_profile(&self) -> Result<FactorProfile> {
        let f = self.factor()?;
        let mut degrees: Vec<usize> = Vec::new();
        for (p, mult) in &f.factors {
            for _ in 0..*mult {
                degrees.push(p.degree().unwrap());
            }
        }
        degrees.sort_unstable();
        Ok(FactorProfile {
            degrees,
            complete: f.complete,
        })
    }

    /// Factorization into monic irreducibles over Q for monic input.
    /// Linear factors come from divisor testing of the constant term;
    /// quadratic and cubic factors from a bounded search over divisor pairs
    /// of f(0) within Landau-Mignotte coefficient bounds.
    pub fn factor(&self) -> Result<Factorization> {
        if !self.is_monic() {
            return Err(Error::invalid("factorization requires a monic polynomial"));
        }
        let deg = self.degree().unwrap();
        let mut factors: Vec<(IntPoly, u32)> = Vec::new();
        if deg == 0 {
            return Ok(Factorization {
                factors,
                remainder: None,
                complete: true,
            });
        }

        let mut rest = self.clone();

        // Strip powers of X.
        let mut xmult = 0u32;
        while rest.coeff(0).is_zero() && rest.degree().unwrap() >= 1 {
            rest = rest.div_exact(&IntPoly::x_pow(1)).unwrap();
            xmult += 1;
        }
        if xmult > 0 {
            factors.push((IntPoly::x_pow(1), xmult));
        }

        // Strip integer roots (divisors of the constant term).
        for r in signed_divisors(&rest.coeff(0)) {
            let lin = IntPoly::from_coeffs(vec![-&r, BigInt::one()]);
            let mut mult = 0u32;
            while rest.eval(&r).is_zero() {
                rest = rest.div_exact(&lin).unwrap();
                mult += 1;
            }
            if mult > 0 {
                factors.push((lin, mult));
            }
            if rest.degree() == Some(0) {
                break;
            }
        }

        let m = rest.degree().unwrap();
        if m == 0 {
            sort_factors(&mut factors);
            return Ok(Factorization {
                factors,
                remainder: None,
                complete: true,
            });
        }
        if m > FACTOR_DEGREE_LIMIT {
            // Partial information from integer roots only.
            sort_factors(&mut factors);
            return Ok(Factorization {
                factors,
                remainder: Some(rest),
                complete: false,
            });
        }

        // No rational roots remain, so degree-2 and degree-3 remainders are
        // irreducible, and any quadratic/cubic factor found below is too.
        factor_rootfree(rest, &mut factors);
        sort_factors(&mut factors);
        Ok(Factorization {
            factors,
            remainder: None,
            complete: true,
        })
    }

    /// True iff some irreducible factor over Q has degree <= r. Early-exit
    /// variant of `factor_profile` used by the low-degree census: integer
    /// roots first, then the bounded quadratic/cubic search only as needed.
    pub fn has_irreducible_factor_of_degree_at_most(&self, r: usize) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::invalid("factor test requires a monic polynomial"));
        }
        let deg = self.degree().unwrap();
        if r == 0 || deg == 0 {
            return Ok(false);
        }
        if r >= deg {
            return Ok(true);
        }
        // A zero constant term means X divides f.
        if self.coeff(0).is_zero() {
            return Ok(true);
        }
        for cand in signed_divisors(&self.coeff(0)) {
            if self.eval(&cand).is_zero() {
                return Ok(true);
            }
        }
        if r == 1 {
            return Ok(false);
        }
        // The bounded quadratic search is complete at any degree; deciding
        // r >= 3 beyond the factorization limit is not.
        if r >= 3 && deg > FACTOR_DEGREE_LIMIT {
            return Err(Error::IncompleteFactorization {
                degree: deg,
                limit: FACTOR_DEGREE_LIMIT,
            });
        }
        // No rational roots: a quadratic or cubic factor found below is
        // automatically irreducible, and root-free polynomials of degree
        // 4 and 5 without a quadratic factor are irreducible.
        if find_monic_factor(self, 2).is_some() {
            return Ok(true);
        }
        if r == 2 {
            return Ok(false);
        }
        if deg == 6 && find_monic_factor(self, 3).is_some() {
            return Ok(true);
        }
        // Remaining possibilities all have minimum factor degree > r <= 5.
        Ok(false)
    }

    /// All complex roots by Durand-Kerner simultaneous iteration. Roots at
    /// zero are exact (the X^k factor is stripped first); the rest are
    /// accepted when |f(z)| stays below `tol` scaled by coefficient size.
    pub fn roots_approx(&self, tol: f64) -> Result<Vec<Complex64>> {
        match self.degree() {
            None | Some(0) => return Err(Error::invalid("roots_approx requires degree >= 1")),
            Some(_) => {}
        }
        let zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        if zeros == self.degree().unwrap() {
            return Ok(roots);
        }
        let reduced = IntPoly::from_coeffs(self.coeffs[zeros..].to_vec());
        roots.extend(reduced.roots_nonzero(tol)?);
        Ok(roots)
    }

    fn roots_nonzero(&self, tol: f64) -> Result<Vec<Complex64>> {
        let deg = self.degree().unwrap();
        // Monic normalization in floating point.
        let lc = big_to_f64(self.leading_coeff().unwrap());
        let cf: Vec<f64> = self.coeffs.iter().map(|c| big_to_f64(c) / lc).collect();

        // Cauchy bound on root magnitude.
        let radius = 1.0
            + cf[..deg]
                .iter()
                .map(|c| c.abs())
                .fold(0.0f64, f64::max);

        let mut z: Vec<Complex64> = (0..deg)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
                Complex64::from_polar(radius * 0.7, angle)
            })
            .collect();

        const MAX_ITERS: usize = 1000;
        let eval = |x: Complex64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cf.iter().rev() {
                acc = acc * x + c;
            }
            acc
        };
        for _ in 0..MAX_ITERS {
            let mut max_step = 0.0f64;
            for i in 0..deg {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..deg {
                    if i != j {
                        denom *= z[i] - z[j];
                    }
                }
                if denom.norm() == 0.0 {
                    // Perturb coincident iterates.
                    z[i] += Complex64::new(1e-8, 1e-8);
                    max_step = f64::MAX;
                    continue;
                }
                let step = eval(z[i]) / denom;
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < tol * 1e-3 {
                break;
            }
        }
        // Residual acceptance: |f(z)| <= tol * scale(z).
        for &zi in &z {
            let scale: f64 = cf
                .iter()
                .enumerate()
                .map(|(k, c)| c.abs() * zi.norm().powi(k as i32))
                .sum::<f64>()
                .max(1.0);
            if eval(zi).norm() > tol * scale {
                return Err(Error::NonConvergence {
                    what: "root iteration",
                    iterations: MAX_ITERS,
                });
            }
        }
        Ok(z)
    }

    /// JSON array of decimal strings, constant term first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IntPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::invalid("polynomial JSON must be an array of strings"))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for item in arr {
            let s = item
                .as_str()
                .ok_or_else(|| Error::invalid("polynomial coefficients must be decimal strings"))?;
            let c: BigInt = s
                .parse()
                .map_err(|_| Error::invalid(format!("bad integer literal: {s}")))?;
            coeffs.push(c);
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// Parses either a JSON array of decimal strings or a bare comma list
    /// like "-7,2,0,1", both constant term first.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let t = s.trim();
        if t.starts_with('[') {
            let v: serde_json::Value = serde_json::from_str(t)
                .map_err(|e| Error::invalid(format!("bad polynomial JSON: {e}")))?;
            return Self::from_json(&v);
        }
        let mut coeffs = Vec::new();
        for part in t.split(',') {
            let c: BigInt = part
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad integer literal: {part}")))?;
            coeffs.push(c);
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if k == 1 {
                    write!(f, "X")?;
                } else {
                    write!(f, "X^{k}")?;
                }
            }
        }
        Ok(())
    }
}

fn sort_factors(factors: &mut [(IntPoly, u32)]) {
    factors.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
    });
}

/// Pseudo-remainder: eliminates leading terms of `a` against `b` after
/// scaling by lc(b), so everything stays integral. The result is an integer
/// multiple of the rational remainder, which is all the primitive PRS needs.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().unwrap();
    let lc_b = b.leading_coeff().unwrap().clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lead = r.coeff(dr);
        let mut scaled: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc_b).collect();
        for (j, bc) in b.coeffs.iter().enumerate() {
            scaled[dr - db + j] -= &lead * bc;
        }
        r = IntPoly::from_coeffs(scaled);
    }
    r
}

/// Resultant via Bareiss elimination of the Sylvester matrix of f (formal
/// degree m) and g (formal degree n).
fn sylvester_resultant(f: &[BigInt], m: usize, g: &[BigInt], n: usize) -> BigInt {
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    // Row i (i < n): coefficients of f, descending, shifted i columns.
    // Row n + i (i < m): coefficients of g likewise.
    let mut mat = vec![BigInt::zero(); size * size];
    for i in 0..n {
        for (k, c) in f.iter().enumerate() {
            // descending order: column = i + (m - k)
            mat[i * size + i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().enumerate() {
            mat[(n + i) * size + i + n - k] = c.clone();
        }
    }
    bareiss_det(&mut mat, size)
}

/// Fraction-free determinant; consumes the buffer.
pub(crate) fn bareiss_det(m: &mut [BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r * n + k].is_zero());
            match swap {
                Some(r) => {
                    for j in 0..n {
                        m.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i * n + j] = q;
            }
            m[i * n + k] = BigInt::zero();
        }
        prev = m[k * n + k].clone();
    }
    let det = m[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// All divisors of |v| with both signs; for v = 0 returns just 0.
fn signed_divisors(v: &BigInt) -> Vec<BigInt> {
    if v.is_zero() {
        return vec![BigInt::zero()];
    }
    let a = v.abs();
    let mut divs: Vec<BigInt> = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= a {
        if (&a % &d).is_zero() {
            divs.push(d.clone());
            let e = &a / &d;
            if e != d {
                divs.push(e);
            }
        }
        d += 1;
    }
    let mut all = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        all.push(-&d);
        all.push(d);
    }
    all.sort();
    all
}

/// Integer square root bound sqrt(sum c_i^2) + 1 used in the Mignotte-style
/// factor coefficient bound.
fn norm2_bound(f: &IntPoly) -> BigInt {
    let s: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    s.sqrt() + 1
}

/// Factors a monic polynomial with no rational roots and degree in 2..=6.
fn factor_rootfree(mut rest: IntPoly, out: &mut Vec<(IntPoly, u32)>) {
    loop {
        let m = rest.degree().unwrap();
        if m == 0 {
            return;
        }
        if m <= 3 {
            push_factor(out, rest);
            return;
        }
        if let Some(q) = find_monic_factor(&rest, 2) {
            rest = rest.div_exact(&q).unwrap();
            push_factor(out, q);
            continue;
        }
        // 4 = 2+2, 5 = 2+3 would need a quadratic; only 6 = 3+3 remains.
        if m == 6 {
            if let Some(q) = find_monic_factor(&rest, 3) {
                rest = rest.div_exact(&q).unwrap();
                push_factor(out, q);
                continue;
            }
        }
        push_factor(out, rest);
        return;
    }
}

fn push_factor(out: &mut Vec<(IntPoly, u32)>, f: IntPoly) {
    for (p, mult) in out.iter_mut() {
        if *p == f {
            *mult += 1;
            return;
        }
    }
    out.push((f, 1));
}

/// Bounded search for a monic factor of degree k (2 or 3) of a monic f with
/// nonzero constant term. The factor's constant term divides f(0) and the
/// middle coefficients obey a Landau-Mignotte bound; candidates are pruned
/// by divisibility of the values at +-1 before the exact division test.
fn find_monic_factor(f: &IntPoly, k: usize) -> Option<IntPoly> {
    debug_assert!(k == 2 || k == 3);
    let bound: BigInt = (norm2_bound(f) + 1) << (k - 1);
    let b_max = bound.to_i64().unwrap_or(i64::MAX);
    let f0 = f.coeff(0);
    let f_at_1 = f.eval(&BigInt::one());
    let f_at_m1 = f.eval(&BigInt::from(-1));
    debug_assert!(!f_at_1.is_zero() && !f_at_m1.is_zero());

    let consts: Vec<BigInt> = signed_divisors(&f0)
        .into_iter()
        .filter(|c| c.abs() <= bound)
        .collect();

    for c in &consts {
        if k == 2 {
            for b in -b_max..=b_max {
                let cand = IntPoly::from_coeffs(vec![c.clone(), BigInt::from(b), BigInt::one()]);
                if divides_values(&cand, &f_at_1, &f_at_m1) && f.div_exact(&cand).is_some() {
                    return Some(cand);
                }
            }
        } else {
            for b in -b_max..=b_max {
                for b2 in -b_max..=b_max {
                    let cand = IntPoly::from_coeffs(vec![
                        c.clone(),
                        BigInt::from(b),
                        BigInt::from(b2),
                        BigInt::one(),
                    ]);
                    if divides_values(&cand, &f_at_1, &f_at_m1) && f.div_exact(&cand).is_some() {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

/// Necessary condition for cand | f: cand(1) | f(1) and cand(-1) | f(-1).
fn divides_values(cand: &IntPoly, f_at_1: &BigInt, f_at_m1: &BigInt) -> bool {
    let c1 = cand.eval(&BigInt::one());
    if c1.is_zero() || !(f_at_1 % &c1).is_zero() {
        return false;
    }
    let cm1 = cand.eval(&BigInt::from(-1));
    if cm1.is_zero() || !(f_at_m1 % &cm1).is_zero() {
        return false;
    }
    true
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::MAX)
}
