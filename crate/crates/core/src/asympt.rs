//! Exponent bookkeeping and empirical slope fitting: the gain Delta_n, the
//! proved and conjectured exponents for R_n(d, H), the small-n special-case
//! predicate, and ordinary least squares on log-log series.

use num_rational::Rational64;

use crate::error::{Error, Result};

/// Delta_n = max over r in 1..=n of min(n - r(r+1)/2, r+1).
pub fn delta_n(n: u64) -> Result<i64> {
    if n < 2 {
        return Err(Error::invalid("delta_n requires n >= 2"));
    }
    let n = n as i64;
    Ok((1..=n)
        .map(|r| (n - r * (r + 1) / 2).min(r + 1))
        .max()
        .expect("nonempty range"))
}

/// Proved upper-bound exponent for R_n(d, H).
///
/// For d = 0 this is n^2 - Delta_n, improved to 2, 21, 45, 59 at
/// n = 2, 5, 7, 8; for d != 0 it is n^2 - 2.
pub fn theorem_exponent(n: u64, d_is_zero: bool) -> Result<Rational64> {
    if n < 2 {
        return Err(Error::invalid("theorem_exponent requires n >= 2"));
    }
    let n2 = (n * n) as i64;
    if !d_is_zero {
        return Ok(Rational64::from_integer(n2 - 2));
    }
    let e = match n {
        2 => 2,
        5 => 21,
        7 => 45,
        8 => 59,
        _ => n2 - delta_n(n)?,
    };
    Ok(Rational64::from_integer(e))
}

/// Conjectured exponent n^2 - 2n + 2 for R_n(H).
pub fn conjecture_exponent(n: u64) -> Result<i64> {
    if n < 2 {
        return Err(Error::invalid("conjecture_exponent requires n >= 2"));
    }
    let n = n as i64;
    Ok(n * n - 2 * n + 2)
}

/// Lower-bound exponent (n^2 + n - 2)/2 realized by the witness family.
/// The numerator is always even.
pub fn lower_exponent(n: u64) -> Result<Rational64> {
    if n < 2 {
        return Err(Error::invalid("lower_exponent requires n >= 2"));
    }
    let n = n as i64;
    Ok(Rational64::new(n * n + n - 2, 2))
}

/// The small-n special-case conditions r+1 > n/3 and (r+1)(r+2) < 2n,
/// which can only hold simultaneously for n < 15.
pub fn special_case_ok(n: u64, r: u64) -> bool {
    if n < 2 || r < 1 {
        return false;
    }
    let (n, r) = (n as i64, r as i64);
    3 * (r + 1) > n && (r + 1) * (r + 2) < 2 * n
}

/// Lower bound n(n-1) on the degree of the discriminant of the generic
/// characteristic polynomial, recorded as reference data.
pub fn generic_discr_degree_bound(n: u64) -> u64 {
    n * (n - 1)
}

/// Exponent summary for one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentReport {
    pub n: u64,
    pub delta_n: i64,
    /// Proved exponent for d = 0 (with small-n improvements).
    pub upper_exponent_d0: Rational64,
    /// Proved exponent for d != 0: n^2 - 2.
    pub upper_exponent_dnz: Rational64,
    /// Conjectured exponent n^2 - 2n + 2.
    pub conjecture_exponent: i64,
    /// Witness-family exponent (n^2 + n - 2)/2.
    pub lower_exponent: Rational64,
    /// For n in {2, 5, 7, 8}: the r used by the improved bound (none for the
    /// n = 2 divisor argument) and the improved exponent.
    pub special_case: Option<(Option<u64>, Rational64)>,
    /// Degree bound n(n-1) for the generic discriminant polynomial.
    pub discr_degree_bound: u64,
}

pub fn exponent_report(n: u64) -> Result<ExponentReport> {
    let special_case = match n {
        2 => Some((None, Rational64::from_integer(2))),
        5 => Some((Some(1), Rational64::from_integer(21))),
        7 => Some((Some(2), Rational64::from_integer(45))),
        8 => Some((Some(2), Rational64::from_integer(59))),
        _ => None,
    };
    Ok(ExponentReport {
        n,
        delta_n: delta_n(n)?,
        upper_exponent_d0: theorem_exponent(n, true)?,
        upper_exponent_dnz: theorem_exponent(n, false)?,
        conjecture_exponent: conjecture_exponent(n)?,
        lower_exponent: lower_exponent(n)?,
        special_case,
        discr_degree_bound: generic_discr_degree_bound(n),
    })
}

/// Ordinary least squares fit of ln(count) against ln(H).
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub max_residual: f64,
}

/// Fits a power law count ~ C * H^slope from (H, count) pairs. Points with
/// a nonpositive H or count are rejected, not clamped.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::invalid("slope fit needs at least 2 points"));
    }
    if points.iter().any(|&(h, c)| h <= 0.0 || c <= 0.0) {
        return Err(Error::invalid(
            "slope fit requires positive H and positive counts",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(h, c)| (h.ln(), c.ln())).collect();
    let n = logs.len() as f64;
    let xbar = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs at least 2 distinct H values"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let residuals: Vec<f64> = logs
        .iter()
        .map(|&(x, y)| y - (intercept + slope * x))
        .collect();
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let stderr = if logs.len() > 2 {
        let ss: f64 = residuals.iter().map(|r| r * r).sum();
        (ss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit {
        points: points.to_vec(),
        slope,
        intercept,
        stderr,
        max_residual,
    })
}

/// Table of (n, Delta_n / sqrt(2n)) ratios, which approach 1 for large n.
pub fn delta_limit_check(n_max: u64) -> Result<Vec<(u64, f64)>> {
    if n_max < 2 {
        return Err(Error::invalid("delta_limit_check requires n_max >= 2"));
    }
    (2..=n_max)
        .map(|n| Ok((n, delta_n(n)? as f64 / (2.0 * n as f64).sqrt())))
        .collect()
}
