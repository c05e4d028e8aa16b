//! The lower-bound witness family: upper-triangular matrices with a 2x2
//! Jordan-type block [[a, b], [0, a]] (b != 0) and a tail diagonal avoiding
//! a. Every member has discriminant zero and is not diagonalisable, and the
//! family size grows like H^((n^2+n-2)/2).

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Parameters of one family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    pub n: usize,
    pub h: i64,
    /// Repeated diagonal value of the leading block.
    pub a: i64,
    /// Off-diagonal entry of the leading block, nonzero.
    pub b: i64,
    /// Diagonal entries a_33..a_nn, each different from `a`.
    pub diag_tail: Vec<i64>,
    /// Free strict-upper-triangle entries in row-major order, excluding
    /// position (1,2).
    pub upper: Vec<i64>,
}

impl WitnessSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("witness family requires n >= 2"));
        }
        if self.h < 1 {
            return Err(Error::invalid("witness family requires H >= 1"));
        }
        if self.a.abs() > self.h {
            return Err(Error::invalid("|a| must be <= H"));
        }
        if self.b == 0 || self.b.abs() > self.h {
            return Err(Error::invalid("b must be nonzero with |b| <= H"));
        }
        if self.diag_tail.len() != self.n - 2 {
            return Err(Error::invalid("diag_tail must have n-2 entries"));
        }
        if self
            .diag_tail
            .iter()
            .any(|&d| d == self.a || d.abs() > self.h)
        {
            return Err(Error::invalid(
                "tail diagonal entries must differ from a and satisfy |.| <= H",
            ));
        }
        let free = self.n * (self.n - 1) / 2 - 1;
        if self.upper.len() != free {
            return Err(Error::invalid(format!(
                "expected {free} free upper entries, got {}",
                self.upper.len()
            )));
        }
        if self.upper.iter().any(|&u| u.abs() > self.h) {
            return Err(Error::invalid("free upper entries must satisfy |.| <= H"));
        }
        Ok(())
    }

    /// Builds the upper-triangular witness matrix.
    pub fn build(&self) -> Result<IntMatrix> {
        self.validate()?;
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        entries[0] = self.a;
        entries[n + 1] = self.a;
        entries[1] = self.b;
        for (t, &d) in self.diag_tail.iter().enumerate() {
            let i = t + 2;
            entries[i * n + i] = d;
        }
        let mut upper = self.upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                if i == 0 && j == 1 {
                    continue;
                }
                entries[i * n + j] = *upper.next().expect("length validated");
            }
        }
        IntMatrix::from_i64(n, &entries)
    }
}

/// Exact family cardinality (2H+1)^{n(n-1)/2} * 2H * (2H)^{n-2}: one factor
/// 2H+1 for a, 2H for b, 2H per tail entry, and 2H+1 per remaining free
/// upper entry.
pub fn witness_count(n: usize, h: i64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::invalid("witness family requires n >= 2"));
    }
    if h < 0 {
        return Err(Error::invalid("H must be >= 0"));
    }
    let side = BigInt::from(2 * h + 1);
    let twoh = BigInt::from(2 * h);
    let upper_positions = n * (n - 1) / 2;
    Ok(side.pow(upper_positions as u32) * twoh.pow((n - 1) as u32))
}

/// Draws N uniform family members, deterministic per seed.
pub fn witness_sample(n: usize, h: i64, count: usize, seed: u64) -> Result<Vec<IntMatrix>> {
    if n < 2 || h < 1 {
        return Err(Error::invalid("witness sampling requires n >= 2 and H >= 1"));
    }
    if count == 0 {
        return Err(Error::invalid("sample count must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let spec = random_spec(n, h, &mut rng);
        out.push(spec.build()?);
    }
    Ok(out)
}

fn random_spec(n: usize, h: i64, rng: &mut ChaCha8Rng) -> WitnessSpec {
    let a = rng.random_range(-h..=h);
    let b = nonzero_in_box(h, rng);
    let diag_tail = (0..n - 2).map(|_| in_box_avoiding(h, a, rng)).collect();
    let free = n * (n - 1) / 2 - 1;
    let upper = (0..free).map(|_| rng.random_range(-h..=h)).collect();
    WitnessSpec {
        n,
        h,
        a,
        b,
        diag_tail,
        upper,
    }
}

/// Uniform over the 2H nonzero values in [-H, H].
fn nonzero_in_box(h: i64, rng: &mut ChaCha8Rng) -> i64 {
    let v = rng.random_range(0..2 * h);
    if v < h {
        v - h
    } else {
        v - h + 1
    }
}

/// Uniform over the 2H values in [-H, H] different from `avoid`.
fn in_box_avoiding(h: i64, avoid: i64, rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.random_range(-h..=h);
        if v != avoid {
            return v;
        }
    }
}

/// Series (H, family size) for slope fitting.
pub fn witness_series(n: usize, h_list: &[i64]) -> Result<Vec<(i64, BigInt)>> {
    h_list
        .iter()
        .map(|&h| Ok((h, witness_count(n, h)?)))
        .collect()
}

/// Structural predicate used by exhaustive cross-checks: upper-triangular,
/// leading 2x2 block [[a, b],[0, a]] with b != 0, and tail diagonal != a.
pub fn is_family_member(m: &IntMatrix) -> bool {
    let n = m.n();
    if n < 2 {
        return false;
    }
    for i in 0..n {
        for j in 0..i {
            if !m.get(i, j).is_zero() {
                return false;
            }
        }
    }
    if m.get(0, 0) != m.get(1, 1) || m.get(0, 1).is_zero() {
        return false;
    }
    let a = m.get(0, 0);
    (2..n).all(|i| m.get(i, i) != a)
}

/// Growth exponent (n^2+n-2)/2 of the family size in H.
pub fn family_exponent(n: usize) -> Result<i64> {
    if n < 2 {
        return Err(Error::invalid("witness family requires n >= 2"));
    }
    let n = n as i64;
    Ok((n * n + n - 2) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asympt;
    use crate::census::{self, DEFAULT_BUDGET};
    use crate::intpoly::IntPoly;
    use num_traits::ToPrimitive;

    #[test]
    fn build_examples() {
        let m = WitnessSpec {
            n: 2,
            h: 1,
            a: 0,
            b: 1,
            diag_tail: vec![],
            upper: vec![],
        }
        .build()
        .unwrap();
        assert_eq!(m, IntMatrix::from_i64(2, &[0, 1, 0, 0]).unwrap());

        let m = WitnessSpec {
            n: 3,
            h: 1,
            a: 1,
            b: 1,
            diag_tail: vec![0],
            upper: vec![0, 0],
        }
        .build()
        .unwrap();
        assert_eq!(
            m,
            IntMatrix::from_i64(3, &[1, 1, 0, 0, 1, 0, 0, 0, 0]).unwrap()
        );
    }

    #[test]
    fn spec_validation() {
        let base = WitnessSpec { n: 3, h: 2, a: 1, b: 1, diag_tail: vec![0], upper: vec![0, 0] };
        assert!(base.validate().is_ok());
        let mut bad = base.clone();
        bad.b = 0;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.diag_tail = vec![1]; // equals a
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.upper = vec![3, 0]; // out of box
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.upper = vec![0];
        assert!(bad.validate().is_err());
        let mut bad = base;
        bad.n = 1;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(witness_count(2, 1).unwrap(), BigInt::from(6));
        assert_eq!(witness_count(3, 1).unwrap(), BigInt::from(108));
        // H = 0 leaves no nonzero b.
        assert_eq!(witness_count(4, 0).unwrap(), BigInt::from(0));
    }

    #[test]
    fn count_matches_exhaustive_family_enumeration() {
        // Every box matrix matching the structural predicate, against the
        // closed-form product.
        for (n, h) in [(2usize, 1i64), (2, 2), (3, 1), (3, 2)] {
            let mut found = 0u64;
            for m in census::enumerate_box(n, h, DEFAULT_BUDGET).unwrap() {
                if is_family_member(&m) {
                    found += 1;
                }
            }
            assert_eq!(
                BigInt::from(found),
                witness_count(n, h).unwrap(),
                "n={n} h={h}"
            );
        }
    }

    #[test]
    fn sampled_members_have_the_advertised_properties() {
        for n in [2usize, 3, 4, 5] {
            let sample = witness_sample(n, 3, 50, 99).unwrap();
            assert_eq!(sample.len(), 50);
            for m in &sample {
                assert!(is_family_member(m));
                assert!(m.discr_matrix().is_zero());
                assert!(!m.is_diagonalizable_c());
                assert!(m.entries().iter().all(|e| e.to_i64().unwrap().abs() <= 3));
                // Characteristic polynomial is (X-a)^2 prod (X - a_ii).
                let a = m.get(0, 0).clone();
                let mut expect = IntPoly::from_coeffs(vec![-&a, BigInt::from(1)]);
                expect = expect.mul(&expect.clone());
                for i in 2..n {
                    expect = expect.mul(&IntPoly::from_coeffs(vec![
                        -m.get(i, i),
                        BigInt::from(1),
                    ]));
                }
                assert_eq!(m.charpoly(), expect);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = witness_sample(4, 5, 20, 123).unwrap();
        let b = witness_sample(4, 5, 20, 123).unwrap();
        let c = witness_sample(4, 5, 20, 124).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn family_undercounts_nondiagonalisable() {
        for h in 1..=5i64 {
            let family = witness_count(2, h).unwrap().to_u64().unwrap();
            let nondiag = census::count_nondiag(2, h, DEFAULT_BUDGET, 2)
                .unwrap()
                .count()
                .unwrap();
            assert!(family <= nondiag, "h={h}: {family} > {nondiag}");
        }
    }

    #[test]
    fn family_growth_matches_exponent() {
        // Full integer range 10..=10^4: the integer spacing concentrates the
        // log-space weight at large H, where the (1 + 1/2H) factors fade.
        let hs: Vec<i64> = (10..=10_000).collect();
        for n in [2usize, 3, 5] {
            let series = witness_series(n, &hs).unwrap();
            let points: Vec<(f64, f64)> = series
                .iter()
                .map(|(h, c)| (*h as f64, c.to_f64().unwrap()))
                .collect();
            let fit = asympt::fit_slope(&points).unwrap();
            let expect = family_exponent(n).unwrap() as f64;
            assert!(
                (fit.slope - expect).abs() < 0.05,
                "n={n}: slope {} vs {expect}",
                fit.slope
            );
        }
    }
}
