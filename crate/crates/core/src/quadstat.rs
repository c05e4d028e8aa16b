//! Closed-form O(H^2)-time exact counters for 2x2 matrices, scaling the n=2
//! statistics far beyond exhaustive reach.
//!
//! Everything here rests on the 2x2 discriminant identity
//! (a11 - a22)^2 + 4 a12 a21 and divisor-pair counting for b*c = m.

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use num_traits::ToPrimitive;

/// Exact number of pairs (b, c) with |b|, |c| <= H and b*c = m.
/// For m = 0 the closed form is 4H + 1.
pub fn rep_count(m: i64, h: i64) -> u128 {
    debug_assert!(h >= 0);
    if m == 0 {
        return (4 * h as u128) + 1;
    }
    let a = m.unsigned_abs();
    let hu = h as u64;
    let mut ordered: u128 = 0;
    let mut d = 1u64;
    while d.saturating_mul(d) <= a {
        if a.is_multiple_of(d) {
            let e = a / d;
            if d <= hu && e <= hu {
                ordered += if d == e { 1 } else { 2 };
            }
        }
        d += 1;
    }
    // Two sign patterns per positive ordered pair: (+,+)/(-,-) for m > 0,
    // (+,-)/(-,+) for m < 0.
    ordered * 2
}

/// Exact R_2(d, H): 2x2 matrices in the box with discriminant d. Sums
/// rep_count((d - s^2)/4, H) over the trace-difference s with multiplicity
/// 2H+1-|s|, whenever 4 divides d - s^2.
pub fn r2_count(d: i64, h: i64) -> Result<u128> {
    if h < 1 {
        return Err(Error::invalid("r2_count requires H >= 1"));
    }
    let mut total: u128 = 0;
    for s in -2 * h..=2 * h {
        let num = d - s * s;
        if num.rem_euclid(4) != 0 {
            continue;
        }
        let mult = (2 * h + 1 - s.abs()) as u128;
        total += mult * rep_count(num.div_euclid(4), h);
    }
    Ok(total)
}

/// Exact P_2(H; f) for monic f = X^2 - uX + v: matrices with trace u and
/// determinant v. For each diagonal entry a with the partner u - a still in
/// the box, the off-diagonal product is pinned to a(u-a) - v.
pub fn p2_count(f: &IntPoly, h: i64) -> Result<u128> {
    if h < 1 {
        return Err(Error::invalid("p2_count requires H >= 1"));
    }
    if f.degree() != Some(2) || !f.is_monic() {
        return Err(Error::invalid(
            "p2_count requires a monic quadratic polynomial",
        ));
    }
    let u = (-f.coeff(1))
        .to_i64()
        .ok_or_else(|| Error::invalid("trace coefficient out of i64 range"))?;
    let v = f
        .coeff(0)
        .to_i64()
        .ok_or_else(|| Error::invalid("determinant coefficient out of i64 range"))?;
    let mut total: u128 = 0;
    for a in -h..=h {
        let d = u - a;
        if d < -h || d > h {
            continue;
        }
        let m = (a as i128) * (d as i128) - v as i128;
        let m = match i64::try_from(m) {
            Ok(m) => m,
            // |m| > i64::MAX certainly exceeds H^2, so no divisor pair fits.
            Err(_) => continue,
        };
        total += rep_count(m, h);
    }
    Ok(total)
}

/// Series (H, R_2(d, H)) over an increasing list of box sizes.
pub fn r2_series(d: i64, h_list: &[i64]) -> Result<Vec<(i64, u128)>> {
    if h_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("H list must be strictly increasing"));
    }
    h_list.iter().map(|&h| Ok((h, r2_count(d, h)?))).collect()
}

/// Full n=2 discriminant histogram built directly from the (s, b, c)
/// decomposition in O(H^3); independent route used to cross-check both the
/// census and `r2_count`. The attainable d range [-4H^2, 8H^2] is dense, so
/// a flat array does the accumulation.
pub fn r2_histogram_direct(h: i64) -> std::collections::BTreeMap<i64, u128> {
    let offset = 4 * h * h;
    let size = (12 * h * h + 1) as usize;
    let mut slots = vec![0u128; size];
    for s in 0..=2 * h {
        // s and -s contribute identically; s = 0 once.
        let mult = (2 * h + 1 - s) as u128 * if s == 0 { 1 } else { 2 };
        for b in -h..=h {
            for c in -h..=h {
                let d = s * s + 4 * b * c;
                slots[(d + offset) as usize] += mult;
            }
        }
    }
    slots
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v > 0)
        .map(|(i, v)| (i as i64 - offset, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{self, DEFAULT_BUDGET};
    use crate::witness;
    use num_traits::ToPrimitive;

    #[test]
    fn rep_count_examples() {
        assert_eq!(rep_count(0, 1), 5);
        assert_eq!(rep_count(1, 1), 2);
        // Divisor pairs of 6 within |.| <= 3: (2,3),(3,2),(-2,-3),(-3,-2).
        assert_eq!(rep_count(6, 3), 4);
        assert_eq!(rep_count(6, 6), 8);
        assert_eq!(rep_count(4, 2), 2); // (2,2),(-2,-2)
        assert_eq!(rep_count(-4, 2), 2); // (2,-2),(-2,2)
        assert_eq!(rep_count(7, 3), 0);
        assert_eq!(rep_count(0, 0), 1);
    }

    #[test]
    fn rep_count_sign_and_monotonicity() {
        for m in -50..=50i64 {
            for h in 0..=12i64 {
                assert_eq!(rep_count(m, h), rep_count(-m, h));
                assert!(rep_count(m, h) <= rep_count(m, h + 1));
            }
        }
    }

    #[test]
    fn rep_count_brute_force() {
        for m in -40..=40i64 {
            for h in 0..=10i64 {
                let mut want = 0u128;
                for b in -h..=h {
                    for c in -h..=h {
                        if b * c == m {
                            want += 1;
                        }
                    }
                }
                assert_eq!(rep_count(m, h), want, "m={m} h={h}");
            }
        }
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2_count(0, 1).unwrap(), 19);
        assert_eq!(r2_count(1, 1).unwrap(), 20);
        assert!(r2_count(0, 0).is_err());
    }

    #[test]
    fn r2_matches_census_histogram_small() {
        for h in [1i64, 2, 3] {
            let res = census::count_discr(2, h, None, DEFAULT_BUDGET, 1).unwrap();
            let hist = res.histogram().unwrap();
            for (d, &count) in hist {
                let d = d.to_i64().unwrap();
                assert_eq!(r2_count(d, h).unwrap(), count as u128, "d={d} h={h}");
            }
            // And no mass outside the histogram support.
            let sum: u128 = hist.values().map(|&v| v as u128).sum();
            assert_eq!(sum, (2 * h as u128 + 1).pow(4));
        }
    }

    #[test]
    fn r2_direct_histogram_partition_law() {
        // O(H^3) independent construction: the partition law at H = 200,
        // beyond census reach, plus spot equality with r2_count.
        let h = 200i64;
        let hist = r2_histogram_direct(h);
        let total: u128 = hist.values().sum();
        assert_eq!(total, (2 * h as u128 + 1).pow(4));
        for d in [-160_000i64, -100, -4, -3, 0, 1, 4, 5, 64, 1000, 123_456, 480_000] {
            let want = hist.get(&d).copied().unwrap_or(0);
            assert_eq!(r2_count(d, h).unwrap(), want, "d={d}");
        }
        // Small slice, every d.
        let h = 4i64;
        let hist = r2_histogram_direct(h);
        for (&d, &want) in &hist {
            assert_eq!(r2_count(d, h).unwrap(), want, "d={d}");
        }
    }

    #[test]
    fn p2_examples() {
        let x2 = IntPoly::x_pow(2);
        assert_eq!(p2_count(&x2, 1).unwrap(), 9);
        // f = X^2 - 2X + 1.
        let f = IntPoly::from_i64_coeffs(&[1, -2, 1]);
        let census_val = census::count_charpoly(2, 1, f.clone(), DEFAULT_BUDGET, 1)
            .unwrap()
            .count()
            .unwrap();
        assert_eq!(p2_count(&f, 1).unwrap(), census_val as u128);
        // Determinant bound: f = X^2 + 10 is unreachable at H = 1.
        assert_eq!(p2_count(&IntPoly::from_i64_coeffs(&[10, 0, 1]), 1).unwrap(), 0);
        assert!(p2_count(&IntPoly::x_pow(3), 1).is_err());
        assert!(p2_count(&IntPoly::from_i64_coeffs(&[1, 1, 2]), 1).is_err());
    }

    #[test]
    fn p2_matches_census_sample() {
        // A 63-polynomial sample across traces and determinants at H = 10.
        let h = 10i64;
        let mut checked = 0;
        for u in -4i64..=4 {
            for v in [-20i64, -6, -1, 0, 1, 2, 15] {
                let f = IntPoly::from_i64_coeffs(&[v, -u, 1]);
                let want = census::count_charpoly(2, h, f.clone(), DEFAULT_BUDGET, 1)
                    .unwrap()
                    .count()
                    .unwrap();
                assert_eq!(p2_count(&f, h).unwrap(), want as u128, "u={u} v={v}");
                checked += 1;
            }
        }
        assert!(checked >= 50);
    }

    #[test]
    fn r2_series_shape() {
        let series = r2_series(0, &[1, 2, 5]).unwrap();
        assert_eq!(series[0], (1, 19));
        assert!(series.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(r2_series(0, &[5, 2]).is_err());
    }

    #[test]
    fn r2_dominates_witness_family() {
        for h in 1..=20i64 {
            let family = witness::witness_count(2, h).unwrap();
            let family = family.to_u128().unwrap();
            assert!(r2_count(0, h).unwrap() >= family, "h={h}");
            assert_eq!(family, (2 * h as u128 + 1) * 2 * h as u128);
        }
    }
}
