//! Finite-field verifications: Carlitz's count of monic non-squarefree
//! polynomials, the characteristic-polynomial census over F_p (Reiner's
//! asymptotic), the discriminant-zero matrix count, and the g^2 h
//! factorization census.
//!
//! Field elements are machine integers with explicit modular reduction; the
//! feasible censuses keep p and n small enough that every intermediate fits
//! comfortably in i64/u64. All census loops partition the matrix space by
//! the first row's encoded integer and merge partial counts keywise, so the
//! result is identical for any worker count.

use crate::error::{Error, Result};

/// Monic-polynomial enumeration budget (p^n).
pub const POLY_BUDGET: u128 = 100_000_000;
/// Matrix census budget (p^(n^2)).
pub const MATRIX_BUDGET: u128 = 1_000_000_000;

/// The field F_p for a prime p < 2^31, verified prime at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::invalid("prime must be < 2^31"));
        }
        if !is_prime(p as u64) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.p - b) as u64;
        (s % self.p as u64) as u32
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p as u64 - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Polynomials over F_p: coefficient vectors, constant term first, trimmed.
// ---------------------------------------------------------------------------

fn poly_trim(c: &mut Vec<u32>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn poly_deg(c: &[u32]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

fn poly_derivative(f: &PrimeField, c: &[u32]) -> Vec<u32> {
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<u32> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| f.mul(ck, (k as u64 % f.p as u64) as u32))
        .collect();
    poly_trim(&mut out);
    out
}

/// In-place remainder of a by monic-normalizable b (b nonzero).
fn poly_rem(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let db = poly_deg(b).expect("divisor nonzero");
    let lb_inv = f.inv(b[db]);
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let scale = f.mul(r[dr], lb_inv);
        for (j, &bj) in b.iter().enumerate() {
            let t = f.mul(scale, bj);
            r[dr - db + j] = f.sub(r[dr - db + j], t);
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_divides(f: &PrimeField, divisor: &[u32], a: &[u32]) -> bool {
    poly_rem(f, a, divisor).is_empty()
}

/// Monic gcd (zero polynomial when both inputs are zero).
fn poly_gcd(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = poly_deg(&x) {
        let inv = f.inv(x[d]);
        for c in x.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    x
}

/// Encodes the n low coefficients of a monic degree-n polynomial as a base-p
/// integer, constant term first.
pub fn encode_monic(p: u32, low: &[u32]) -> u64 {
    let mut key = 0u64;
    for &c in low.iter().rev() {
        key = key * p as u64 + c as u64;
    }
    key
}

/// Decodes a key into the full coefficient vector (length n+1, leading 1).
pub fn decode_monic(p: u32, n: usize, key: u64) -> Vec<u32> {
    let mut c = Vec::with_capacity(n + 1);
    let mut k = key;
    for _ in 0..n {
        c.push((k % p as u64) as u32);
        k /= p as u64;
    }
    c.push(1);
    c
}

/// Human-readable form of a monic polynomial over F_p.
pub fn poly_display(coeffs: &[u32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "X".to_string(),
            (1, c) => format!("{c}X"),
            (k, 1) => format!("X^{k}"),
            (k, c) => format!("{c}X^{k}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

// ---------------------------------------------------------------------------
// Carlitz: monic non-squarefree count
// ---------------------------------------------------------------------------

/// Brute-force count of monic non-squarefree polynomials of degree n over
/// F_p; Carlitz's closed form says this is p^(n-1).
pub fn carlitz_count(field: PrimeField, n: usize) -> Result<u64> {
    if n < 1 {
        return Err(Error::invalid("carlitz_count requires n >= 1"));
    }
    let p = field.p;
    let total = (p as u128).checked_pow(n as u32).filter(|&t| t <= POLY_BUDGET);
    let total = match total {
        Some(t) => t as u64,
        None => {
            return Err(Error::BudgetExceeded {
                required: (p as u128).saturating_pow(n as u32),
                budget: POLY_BUDGET,
            })
        }
    };
    let mut count = 0u64;
    for key in 0..total {
        let coeffs = decode_monic(p, n, key);
        let deriv = poly_derivative(&field, &coeffs);
        // gcd(f, 0) = f, so a vanishing derivative (possible in char p) is
        // correctly classified as non-squarefree.
        let g = poly_gcd(&field, &coeffs, &deriv);
        if poly_deg(&g).is_none_or(|d| d >= 1) {
            count += 1;
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Matrix censuses over F_p
// ---------------------------------------------------------------------------

/// Census of characteristic polynomials over all of F_p^{n x n}: the count
/// at a key is the number of matrices with that monic characteristic
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFCensusReport {
    pub p: u32,
    pub n: usize,
    /// Indexed by `encode_monic` key; length p^n.
    pub counts: Vec<u64>,
}

impl FFCensusReport {
    /// p^(n^2), which the counts always sum to.
    pub fn total(&self) -> u128 {
        (self.p as u128).pow((self.n * self.n) as u32)
    }

    pub fn count_for_key(&self, key: u64) -> u64 {
        self.counts[key as usize]
    }

    /// Count for a monic polynomial given by its n low coefficients.
    pub fn count_for_low_coeffs(&self, low: &[u32]) -> u64 {
        self.counts[encode_monic(self.p, low) as usize]
    }

    /// Max over f of |count(f) / p^(n^2-n) - 1|.
    pub fn deviation(&self) -> f64 {
        let expected = (self.p as f64).powi((self.n * self.n - self.n) as i32);
        self.counts
            .iter()
            .map(|&c| (c as f64 / expected - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with columns poly_encoding, poly_display, count, ratio_to_pn2n.
    pub fn to_csv(&self) -> String {
        let expected = (self.p as f64).powi((self.n * self.n - self.n) as i32);
        let mut out = String::from("poly_encoding,poly_display,count,ratio_to_pn2n\n");
        for (key, &c) in self.counts.iter().enumerate() {
            let coeffs = decode_monic(self.p, self.n, key as u64);
            out.push_str(&format!(
                "{key},{},{c},{}\n",
                poly_display(&coeffs),
                c as f64 / expected
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let expected = (self.p as f64).powi((self.n * self.n - self.n) as i32);
        let rows: Vec<serde_json::Value> = self
            .counts
            .iter()
            .enumerate()
            .map(|(key, &c)| {
                let coeffs = decode_monic(self.p, self.n, key as u64);
                serde_json::json!({
                    "encoding": key,
                    "poly": poly_display(&coeffs),
                    "count": c.to_string(),
                    "ratio": c as f64 / expected,
                })
            })
            .collect();
        serde_json::json!({
            "p": self.p,
            "n": self.n,
            "total": self.total().to_string(),
            "deviation": self.deviation(),
            "counts": rows,
        })
    }
}

fn census_budget_check(p: u32, n: usize) -> Result<u128> {
    let total = (p as u128).checked_pow((n * n) as u32);
    match total {
        Some(t) if t <= MATRIX_BUDGET => Ok(t),
        _ => Err(Error::BudgetExceeded {
            required: total.unwrap_or(u128::MAX),
            budget: MATRIX_BUDGET,
        }),
    }
}

/// Exhaustive characteristic-polynomial census over F_p^{n x n}.
pub fn charpoly_census(field: PrimeField, n: usize, workers: usize) -> Result<FFCensusReport> {
    if n < 1 {
        return Err(Error::invalid("census requires n >= 1"));
    }
    if n > 5 {
        return Err(Error::invalid("census charpoly path supports n <= 5"));
    }
    census_budget_check(field.p, n)?;
    let p = field.p;
    let keys = (p as u64).pow(n as u32);
    let first_count = (p as u128).pow(n as u32);
    let workers = workers.max(1);

    let locals: Vec<Vec<u64>> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let lo = first_count * w as u128 / workers as u128;
            let hi = first_count * (w + 1) as u128 / workers as u128;
            handles.push(scope.spawn(move || census_worker(p, n, keys, lo, hi)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });

    let mut counts = vec![0u64; keys as usize];
    for local in locals {
        for (slot, v) in counts.iter_mut().zip(local) {
            *slot += v;
        }
    }
    Ok(FFCensusReport { p, n, counts })
}

/// Enumerates matrices whose first row encodes to [lo, hi) and tallies
/// characteristic polynomials.
fn census_worker(p: u32, n: usize, keys: u64, lo: u128, hi: u128) -> Vec<u64> {
    let mut counts = vec![0u64; keys as usize];
    let mut entries = vec![0i64; n * n];
    let tail = n * n - n;
    let mut idx = lo;
    while idx < hi {
        let mut rem = idx;
        for j in (0..n).rev() {
            entries[j] = (rem % p as u128) as i64;
            rem /= p as u128;
        }
        for slot in entries[n..].iter_mut() {
            *slot = 0;
        }
        loop {
            let low = charpoly_low_modp(&entries, n, p);
            counts[encode_monic(p, &low) as usize] += 1;
            if tail == 0 || !modp_odometer_step(&mut entries[n..], p) {
                break;
            }
        }
        idx += 1;
    }
    counts
}

fn modp_odometer_step(entries: &mut [i64], p: u32) -> bool {
    for slot in entries.iter_mut().rev() {
        if *slot + 1 < p as i64 {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Low n coefficients of det(XI - A) mod p via signed sums of principal
/// minors, computed in i64 (feasible censuses keep n <= 5 and p small, so
/// k! p^k never overflows).
fn charpoly_low_modp(entries: &[i64], n: usize, p: u32) -> Vec<u32> {
    let mut e_sums = vec![0i64; n + 1];
    let masks = 1u32 << n;
    let mut idx = [0usize; 5];
    for mask in 1..masks {
        let mut k = 0;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                idx[k] = i;
                k += 1;
            }
        }
        e_sums[k] = (e_sums[k] + principal_minor(entries, n, &idx[..k])) % p as i64;
    }
    // Coefficient of X^(n-k) is (-1)^k e_k.
    let mut low = vec![0u32; n];
    for k in 1..=n {
        let signed = if k % 2 == 0 { e_sums[k] } else { -e_sums[k] };
        low[n - k] = signed.rem_euclid(p as i64) as u32;
    }
    low
}

/// Determinant of the principal submatrix on `idx`, by Laplace expansion
/// along the first row (no allocation; k <= 5).
fn principal_minor(entries: &[i64], n: usize, idx: &[usize]) -> i64 {
    let k = idx.len();
    match k {
        1 => entries[idx[0] * n + idx[0]],
        2 => {
            let (a, b) = (idx[0], idx[1]);
            entries[a * n + a] * entries[b * n + b] - entries[a * n + b] * entries[b * n + a]
        }
        _ => {
            let mut det = 0i64;
            for (c, &col) in idx.iter().enumerate() {
                let a = entries[idx[0] * n + col];
                if a == 0 {
                    continue;
                }
                // Minor over rows idx[1..] and the columns of idx except col.
                let minor = general_minor(entries, n, &idx[1..], idx, c);
                det += if c % 2 == 0 { a * minor } else { -a * minor };
            }
            det
        }
    }
}

/// Determinant of the submatrix with the given rows and the columns of
/// `cols` except position `skip`, recursively.
fn general_minor(entries: &[i64], n: usize, rows: &[usize], cols: &[usize], skip: usize) -> i64 {
    let mut remaining = [0usize; 5];
    let mut t = 0;
    for (c, &col) in cols.iter().enumerate() {
        if c != skip {
            remaining[t] = col;
            t += 1;
        }
    }
    det_general(entries, n, rows, &remaining[..t])
}

fn det_general(entries: &[i64], n: usize, rows: &[usize], cols: &[usize]) -> i64 {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    match k {
        0 => 1,
        1 => entries[rows[0] * n + cols[0]],
        2 => {
            entries[rows[0] * n + cols[0]] * entries[rows[1] * n + cols[1]]
                - entries[rows[0] * n + cols[1]] * entries[rows[1] * n + cols[0]]
        }
        _ => {
            let mut det = 0i64;
            for c in 0..k {
                let a = entries[rows[0] * n + cols[c]];
                if a == 0 {
                    continue;
                }
                let mut rest = [0usize; 5];
                let mut t = 0;
                for (j, &col) in cols.iter().enumerate() {
                    if j != c {
                        rest[t] = col;
                        t += 1;
                    }
                }
                let minor = det_general(entries, n, &rows[1..], &rest[..t]);
                det += if c % 2 == 0 { a * minor } else { -a * minor };
            }
            det
        }
    }
}

/// Reiner deviation: max over monic f of |P_{n,p}(f)/p^(n^2-n) - 1|.
pub fn reiner_deviation(field: PrimeField, n: usize, workers: usize) -> Result<f64> {
    Ok(charpoly_census(field, n, workers)?.deviation())
}

/// Discriminant of a monic polynomial over F_p, by the formal Sylvester
/// determinant of f and f' with f' kept at formal degree n-1; this is the
/// reduction mod p of the integer discriminant formula.
pub fn discr_monic_modp(field: &PrimeField, coeffs: &[u32]) -> u32 {
    let n = poly_deg(coeffs).expect("nonzero");
    if n == 0 {
        panic!("discriminant requires degree >= 1");
    }
    if n == 1 {
        return 1 % field.p;
    }
    let deriv_full: Vec<u32> = {
        // Formal derivative without trimming: degree slot n-1 kept.
        let mut d = vec![0u32; n];
        for k in 1..=n {
            d[k - 1] = field.mul(coeffs[k], (k as u64 % field.p as u64) as u32);
        }
        d
    };
    let size = n + (n - 1);
    let mut mat = vec![0u32; size * size];
    for i in 0..n - 1 {
        for (k, &c) in coeffs.iter().enumerate() {
            mat[i * size + i + n - k] = c;
        }
    }
    for i in 0..n {
        for (k, &c) in deriv_full.iter().enumerate() {
            mat[(n - 1 + i) * size + i + n - 1 - k] = c;
        }
    }
    let res = det_modp(field, &mut mat, size);
    let sign_flip = (n * (n - 1) / 2) % 2 == 1;
    let res = if sign_flip { field.sub(0, res) } else { res };
    // Monic leading coefficient: no division needed.
    res
}

/// Gaussian-elimination determinant over F_p.
fn det_modp(field: &PrimeField, m: &mut [u32], size: usize) -> u32 {
    let mut det = 1u32;
    let mut negate = false;
    for k in 0..size {
        let pivot = (k..size).find(|&r| m[r * size + k] != 0);
        let pivot = match pivot {
            Some(r) => r,
            None => return 0,
        };
        if pivot != k {
            for j in 0..size {
                m.swap(k * size + j, pivot * size + j);
            }
            negate = !negate;
        }
        let pv = m[k * size + k];
        det = field.mul(det, pv);
        let inv = field.inv(pv);
        for r in k + 1..size {
            let factor = field.mul(m[r * size + k], inv);
            if factor == 0 {
                continue;
            }
            for j in k..size {
                let t = field.mul(factor, m[k * size + j]);
                m[r * size + j] = field.sub(m[r * size + j], t);
            }
        }
    }
    if negate {
        field.sub(0, det)
    } else {
        det
    }
}

/// Exact count of matrices over F_p with vanishing discriminant, expected to
/// be p^(n^2-1)(1 + O(p^(-1/2))) by the Lang-Weil count with one geometric
/// component.
pub fn discr_zero_count_modp(field: PrimeField, n: usize, workers: usize) -> Result<u64> {
    let report = charpoly_census(field, n, workers)?;
    let mut total = 0u64;
    for (key, &c) in report.counts.iter().enumerate() {
        let coeffs = decode_monic(field.p, n, key as u64);
        if discr_monic_modp(&field, &coeffs) == 0 {
            total += c;
        }
    }
    Ok(total)
}

/// Exact count of matrices over F_p whose characteristic polynomial factors
/// as g^2 h with monic g of degree >= r+1 (detected via the square part of
/// the full factorization over F_p). Degree impossibility (r+1 > n/2) gives
/// zero immediately.
pub fn gsq_count_modp(field: PrimeField, n: usize, r: usize, workers: usize) -> Result<u64> {
    if r < 1 {
        return Err(Error::invalid("gsq census requires r >= 1"));
    }
    if 2 * (r + 1) > n {
        return Ok(0);
    }
    let report = charpoly_census(field, n, workers)?;
    let mut total = 0u64;
    for (key, &c) in report.counts.iter().enumerate() {
        let coeffs = decode_monic(field.p, n, key as u64);
        if square_part_degree(&field, &coeffs) > r {
            total += c;
        }
    }
    Ok(total)
}

/// Degree of the largest monic g with g^2 | f, from the exact factorization
/// of f over F_p by trial division against all monic irreducibles of degree
/// <= deg(f)/2.
pub fn square_part_degree(field: &PrimeField, coeffs: &[u32]) -> usize {
    let deg = poly_deg(coeffs).expect("nonzero polynomial");
    let irreducibles = irreducibles_up_to(field, deg / 2);
    let mut rest = coeffs.to_vec();
    let mut sq_deg = 0usize;
    for q in &irreducibles {
        let mut mult = 0usize;
        while poly_deg(&rest).is_some_and(|d| d >= q.len() - 1) && poly_divides(field, q, &rest) {
            rest = poly_quotient(field, &rest, q);
            mult += 1;
        }
        sq_deg += (mult / 2) * (q.len() - 1);
        if poly_deg(&rest) == Some(0) {
            break;
        }
    }
    // Whatever remains is irreducible (degree > deg/2) and contributes no
    // square factor.
    sq_deg
}

fn poly_quotient(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let da = poly_deg(a).expect("nonzero");
    let db = poly_deg(b).expect("nonzero");
    debug_assert!(da >= db);
    let lb_inv = f.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u32; da - db + 1];
    for k in (0..=da - db).rev() {
        if r.len() < k + db + 1 {
            continue;
        }
        let top = r[k + db];
        if top == 0 {
            continue;
        }
        let scale = f.mul(top, lb_inv);
        q[k] = scale;
        for (j, &bj) in b.iter().enumerate() {
            let t = f.mul(scale, bj);
            r[k + j] = f.sub(r[k + j], t);
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// All monic irreducibles over F_p of degree 1..=d, ascending by degree then
/// by encoding.
pub fn irreducibles_up_to(field: &PrimeField, d: usize) -> Vec<Vec<u32>> {
    let p = field.p;
    let mut irr: Vec<Vec<u32>> = Vec::new();
    for deg in 1..=d {
        let keys = (p as u64).pow(deg as u32);
        'next: for key in 0..keys {
            let cand = decode_monic(p, deg, key);
            for q in &irr {
                let qd = q.len() - 1;
                if 2 * qd > deg {
                    break;
                }
                if poly_divides(field, q, &cand) {
                    continue 'next;
                }
            }
            irr.push(cand);
        }
    }
    irr
}
