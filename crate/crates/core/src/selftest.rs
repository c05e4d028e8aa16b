//! Small-instance oracle suite behind the `selftest` subcommand: every check
//! is an exact value confirmed independently (closed form, hand count, or
//! cross-module agreement) and frozen here. A corrupted discriminant sign
//! convention, for example, fails the r2/census cross-check immediately.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::asympt;
use crate::census::{self, DEFAULT_BUDGET};
use crate::ffcount::{self, PrimeField};
use crate::intmat::{IntMatrix, RatMatrix};
use crate::intpoly::IntPoly;
use crate::quadstat;
use crate::witness;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &'static str, pass: bool, detail: String) {
    out.push(Check { name, pass, detail });
}

fn check_eq<T: PartialEq + std::fmt::Display>(
    out: &mut Vec<Check>,
    name: &'static str,
    got: T,
    want: T,
) {
    let pass = got == want;
    check(out, name, pass, format!("got {got}, want {want}"));
}

/// Runs the oracle suite; deterministic and fast.
pub fn run() -> Vec<Check> {
    let mut out = Vec::new();
    let w = 1;

    // Census oracles over the 81-matrix box at n = 2, H = 1.
    let r201 = census::count_discr(2, 1, Some(BigInt::zero()), DEFAULT_BUDGET, w)
        .map(|r| r.count().unwrap_or(0))
        .unwrap_or(0);
    check_eq(&mut out, "census R_2(0,1)", r201, 19);
    let r211 = census::count_discr(2, 1, Some(BigInt::from(1)), DEFAULT_BUDGET, w)
        .map(|r| r.count().unwrap_or(0))
        .unwrap_or(0);
    check_eq(&mut out, "census R_2(1,1)", r211, 20);
    let n21 = census::count_nondiag(2, 1, DEFAULT_BUDGET, w)
        .map(|r| r.count().unwrap_or(0))
        .unwrap_or(0);
    check_eq(&mut out, "census N_2(1)", n21, 16);
    let j2 = census::count_det_shift(
        2,
        1,
        RatMatrix::zero(2),
        BigRational::zero(),
        DEFAULT_BUDGET,
        w,
    )
    .map(|r| r.count().unwrap_or(0))
    .unwrap_or(0);
    check_eq(&mut out, "census J_2(0;1,0)", j2, 33);
    let p2x2 = census::count_charpoly(2, 1, IntPoly::x_pow(2), DEFAULT_BUDGET, w)
        .map(|r| r.count().unwrap_or(0))
        .unwrap_or(0);
    check_eq(&mut out, "census P_2(1;X^2)", p2x2, 9);
    let t2 = census::count_lift(
        2,
        2,
        2,
        IntMatrix::identity(2),
        BigInt::from(1),
        DEFAULT_BUDGET,
        w,
    )
    .map(|r| r.count().unwrap_or(0))
    .unwrap_or(0);
    check_eq(&mut out, "census T_2(1,2;2,I)", t2, 10);

    // Witness family cardinalities.
    check_eq(
        &mut out,
        "witness_count(2,1)",
        witness::witness_count(2, 1).unwrap(),
        BigInt::from(6),
    );
    check_eq(
        &mut out,
        "witness_count(3,1)",
        witness::witness_count(3, 1).unwrap(),
        BigInt::from(108),
    );

    // Finite-field oracles.
    let carlitz32 = ffcount::carlitz_count(PrimeField::new(3).unwrap(), 2).unwrap_or(0);
    check_eq(&mut out, "carlitz(3,2)", carlitz32, 3);
    let carlitz22 = ffcount::carlitz_count(PrimeField::new(2).unwrap(), 2).unwrap_or(0);
    check_eq(&mut out, "carlitz(2,2)", carlitz22, 2);
    match ffcount::charpoly_census(PrimeField::new(2).unwrap(), 2, w) {
        Ok(report) => {
            // X^2 + X + 1 has low coefficients (1, 1); X^2 has (0, 0).
            check_eq(
                &mut out,
                "reiner census p=2 count(X^2+X+1)",
                report.count_for_low_coeffs(&[1, 1]),
                2,
            );
            check_eq(
                &mut out,
                "reiner census p=2 count(X^2)",
                report.count_for_low_coeffs(&[0, 0]),
                4,
            );
            check_eq(
                &mut out,
                "reiner census p=2 total",
                report.counts.iter().map(|&c| c as u128).sum::<u128>(),
                16,
            );
        }
        Err(e) => check(&mut out, "reiner census p=2", false, e.to_string()),
    }
    for p in [2u32, 3, 5] {
        let got = ffcount::discr_zero_count_modp(PrimeField::new(p).unwrap(), 2, w).unwrap_or(0);
        let name: &'static str = match p {
            2 => "ff discr-zero count p=2",
            3 => "ff discr-zero count p=3",
            _ => "ff discr-zero count p=5",
        };
        check_eq(&mut out, name, got, (p as u64).pow(3));
    }

    // Closed-form n=2 counters agree with the census.
    check_eq(&mut out, "quadstat r2(0,1)", quadstat::r2_count(0, 1).unwrap(), 19);
    check_eq(&mut out, "quadstat r2(1,1)", quadstat::r2_count(1, 1).unwrap(), 20);
    check_eq(
        &mut out,
        "quadstat p2(X^2,1)",
        quadstat::p2_count(&IntPoly::x_pow(2), 1).unwrap(),
        9,
    );

    // Polynomial algebra spot values.
    let f = IntPoly::from_i64_coeffs(&[1, 0, 1]);
    let g = IntPoly::from_i64_coeffs(&[-1, 0, 1]);
    check_eq(
        &mut out,
        "resultant(X^2+1, X^2-1)",
        f.resultant(&g).unwrap(),
        BigInt::from(4),
    );
    check_eq(
        &mut out,
        "discriminant(X^3-2)",
        IntPoly::from_i64_coeffs(&[-2, 0, 0, 1]).discriminant().unwrap(),
        BigInt::from(-108),
    );

    // Exponent bookkeeping.
    check_eq(&mut out, "delta_3", asympt::delta_n(3).unwrap(), 2);
    check_eq(&mut out, "delta_10", asympt::delta_n(10).unwrap(), 4);
    check_eq(
        &mut out,
        "theorem exponent n=5 d=0",
        asympt::theorem_exponent(5, true).unwrap(),
        num_rational::Rational64::from_integer(21),
    );
    let fit = asympt::fit_slope(&[(1.0, 1.0), (10.0, 100.0), (100.0, 10000.0)]).unwrap();
    check(
        &mut out,
        "fit_slope exact square law",
        (fit.slope - 2.0).abs() < 1e-12,
        format!("slope {}", fit.slope),
    );

    out
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
