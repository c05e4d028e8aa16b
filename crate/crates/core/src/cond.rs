//! Floating-point condition-number statistics over random box matrices.
//!
//! Singular values come from cyclic Jacobi iteration on the symmetric
//! positive semidefinite matrix A A^T; the Gram matrix itself is formed
//! exactly before conversion to f64.

use num_traits::ToPrimitive;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Relative tolerance below which a singular value counts as zero.
const SINGULAR_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Singular values of A in descending order: square roots of the eigenvalues
/// of A A^T, by cyclic Jacobi with relative off-diagonal residual <= 1e-10.
pub fn singular_values(a: &IntMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    if n > 64 {
        return Err(Error::invalid("singular_values supports n <= 64"));
    }
    let gram = a.matmul(&a.transpose()).expect("same dimension");
    let mut g = vec![0.0f64; n * n];
    for (slot, e) in g.iter_mut().zip(gram.entries()) {
        *slot = e.to_f64().ok_or_else(|| Error::invalid("entry overflow"))?;
    }
    let eigs = jacobi_eigenvalues(&mut g, n)?;
    let mut sv: Vec<f64> = eigs.into_iter().map(|l| l.max(0.0).sqrt()).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    Ok(sv)
}

/// Condition number sigma_max / sigma_min; infinity when sigma_min vanishes
/// within 1e-10 * sigma_max.
pub fn kappa(a: &IntMatrix) -> Result<f64> {
    let sv = singular_values(a)?;
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smin <= SINGULAR_TOL * smax {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

/// Cyclic Jacobi on a symmetric matrix stored row-major; returns the
/// eigenvalues (diagonal after convergence). Standard plane-rotation sweep
/// in the style of Golub & Van Loan section 8.5; foolproof on the small
/// positive semidefinite Gram matrices seen here.
fn jacobi_eigenvalues(g: &mut [f64], n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![g[0]]);
    }
    let frob: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(vec![0.0; n]);
    }
    // Quadratic convergence leaves plenty of margin below the contract's
    // 1e-10 relative residual.
    let target = frob * 1e-13;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * g[p * n + q] * g[p * n + q];
            }
        }
        if off.sqrt() <= target {
            return Ok((0..n).map(|i| g[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = g[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = g[p * n + p];
                let aqq = g[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Stable rotation choice (smaller root).
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let gkp = g[k * n + p];
                    let gkq = g[k * n + q];
                    g[k * n + p] = c * gkp - s * gkq;
                    g[k * n + q] = s * gkp + c * gkq;
                }
                for k in 0..n {
                    let gpk = g[p * n + k];
                    let gqk = g[q * n + k];
                    g[p * n + k] = c * gpk - s * gqk;
                    g[q * n + k] = s * gpk + c * gqk;
                }
            }
        }
    }
    Err(Error::NonConvergence {
        what: "Jacobi eigenvalue iteration",
        iterations: MAX_SWEEPS,
    })
}

/// Sampled condition-number tail at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CondReport {
    pub n: usize,
    pub h: i64,
    pub l: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub workers: usize,
    /// Matrices with kappa > L (singular ones included).
    pub tail_count: u64,
    /// Matrices with kappa = infinity.
    pub singular_count: u64,
    pub tail_fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Fraction of sampled box matrices with kappa > L, with a 95% interval.
/// Deterministic per (seed, workers); each worker draws from its own ChaCha
/// stream (stream index = worker index) and quotas split N as evenly as
/// possible with the remainder on the lowest-indexed workers.
pub fn tail_fraction(
    n: usize,
    h: i64,
    l: f64,
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<CondReport> {
    let reports = tail_curve(n, h, &[l], n_samples, seed, workers)?;
    Ok(reports.into_iter().next().expect("one threshold"))
}

/// Tail fractions across several thresholds from a single sample pass, so
/// monotonicity in L is exact by construction.
pub fn tail_curve(
    n: usize,
    h: i64,
    ls: &[f64],
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<CondReport>> {
    if n == 0 || h < 0 {
        return Err(Error::invalid("tail sampling requires n >= 1 and H >= 0"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("sample size must be >= 1"));
    }
    if workers == 0 {
        return Err(Error::invalid("worker count must be >= 1"));
    }
    if ls.is_empty() {
        return Err(Error::invalid("at least one threshold L is required"));
    }

    let worker_counts: Vec<(u64, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let quota = n_samples / workers as u64
                    + if (w as u64) < n_samples % workers as u64 {
                        1
                    } else {
                        0
                    };
                scope.spawn(move || worker_tail_counts(n, h, ls, seed, w as u64, quota))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Result<Vec<Vec<(u64, u64)>>>>()
            .map(|per_worker| {
                let mut totals = vec![(0u64, 0u64); ls.len()];
                for counts in per_worker {
                    for (t, c) in totals.iter_mut().zip(counts) {
                        t.0 += c.0;
                        t.1 += c.1;
                    }
                }
                totals
            })
    })?;

    Ok(ls
        .iter()
        .zip(worker_counts)
        .map(|(&l, (tail_count, singular_count))| {
            let frac = tail_count as f64 / n_samples as f64;
            let se = (frac * (1.0 - frac) / n_samples as f64).sqrt();
            CondReport {
                n,
                h,
                l,
                n_samples,
                seed,
                workers,
                tail_count,
                singular_count,
                tail_fraction: frac,
                ci_low: (frac - 1.96 * se).max(0.0),
                ci_high: (frac + 1.96 * se).min(1.0),
            }
        })
        .collect())
}

fn worker_tail_counts(
    n: usize,
    h: i64,
    ls: &[f64],
    seed: u64,
    stream: u64,
    quota: u64,
) -> Result<Vec<(u64, u64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts = vec![(0u64, 0u64); ls.len()];
    let mut entries = vec![0i64; n * n];
    for _ in 0..quota {
        for e in entries.iter_mut() {
            *e = rng.random_range(-h..=h);
        }
        let a = IntMatrix::from_i64(n, &entries)?;
        let k = kappa(&a)?;
        for (slot, &l) in counts.iter_mut().zip(ls) {
            if k > l {
                slot.0 += 1;
            }
            if k.is_infinite() {
                slot.1 += 1;
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{RngExt, SeedableRng};

    fn mat(n: usize, entries: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(n, entries).unwrap()
    }

    #[test]
    fn singular_value_examples() {
        let sv = singular_values(&IntMatrix::identity(4)).unwrap();
        assert!(sv.iter().all(|&s| (s - 1.0).abs() < 1e-12));

        let sv = singular_values(&mat(2, &[3, 0, 0, -4])).unwrap();
        assert!((sv[0] - 4.0).abs() < 1e-10);
        assert!((sv[1] - 3.0).abs() < 1e-10);

        // Jordan block: eigenvalues of A A^T = [[2,1],[1,1]] are (3±sqrt5)/2.
        let sv = singular_values(&mat(2, &[1, 1, 0, 1])).unwrap();
        let want_hi = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        let want_lo = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!((sv[0] - want_hi).abs() < 1e-10);
        assert!((sv[1] - want_lo).abs() < 1e-10);
    }

    #[test]
    fn kappa_examples() {
        assert!((kappa(&IntMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-10);
        assert!((kappa(&mat(2, &[1, 0, 0, 2])).unwrap() - 2.0).abs() < 1e-10);
        let want = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((kappa(&mat(2, &[1, 1, 0, 1])).unwrap() - want).abs() < 1e-9);
        // Singular matrices have infinite condition number.
        assert!(kappa(&mat(2, &[1, 2, 2, 4])).unwrap().is_infinite());
        assert!(kappa(&IntMatrix::zero(3)).unwrap().is_infinite());
    }

    #[test]
    fn kappa_scale_invariance() {
        let a = mat(3, &[2, -1, 0, 4, 5, 1, -3, 2, 2]);
        let ka = kappa(&a).unwrap();
        for c in [2i64, -3, 10] {
            let scaled = a.scale(&num_bigint::BigInt::from(c));
            assert!((kappa(&scaled).unwrap() - ka).abs() < 1e-8 * ka);
        }
    }

    #[test]
    fn product_of_singular_values_is_abs_det() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let n = rng.random_range(1..=5usize);
            let entries: Vec<i64> = (0..n * n).map(|_| rng.random_range(-9..=9)).collect();
            let a = mat(n, &entries);
            let det = a.det().to_f64().unwrap().abs();
            let product: f64 = singular_values(&a).unwrap().iter().product();
            if det == 0.0 {
                assert!(product < 1e-6 * (n as f64 * 81.0).powi(n as i32 / 2 + 1));
            } else {
                assert!(
                    (product - det).abs() <= 1e-8 * det.max(1.0),
                    "A={} product={product} det={det}",
                    a.to_compact()
                );
            }
        }
    }

    #[test]
    fn sigma_max_bounded_by_entry_size() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let n = rng.random_range(1..=6usize);
            let entries: Vec<i64> = (0..n * n).map(|_| rng.random_range(-50..=50)).collect();
            let a = mat(n, &entries);
            let max_entry = entries.iter().map(|e| e.abs()).max().unwrap() as f64;
            let sv = singular_values(&a).unwrap();
            assert!(sv[0] <= n as f64 * max_entry + 1e-9);
        }
    }

    #[test]
    fn tail_fraction_basics() {
        // n = 1: kappa is exactly 1 except for the singular zero matrix,
        // which counts toward every tail.
        let r = tail_fraction(1, 10, 1.0, 1000, 5, 1).unwrap();
        assert_eq!(r.tail_count, r.singular_count);
        assert!(r.tail_fraction < 0.1);
        // kappa > 0.5 always.
        let r = tail_fraction(2, 5, 0.5, 500, 5, 1).unwrap();
        assert_eq!(r.tail_count, 500);
        assert!(r.singular_count <= r.tail_count);
    }

    #[test]
    fn tail_curve_is_monotone_and_deterministic() {
        let ls = [1.0, 10.0, 100.0, 1000.0];
        let a = tail_curve(3, 50, &ls, 20_000, 77, 2).unwrap();
        let b = tail_curve(3, 50, &ls, 20_000, 77, 2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        for w in a.windows(2) {
            assert!(w[0].tail_fraction >= w[1].tail_fraction);
        }
        // Separate single-threshold calls see the same sample.
        let single = tail_fraction(3, 50, 10.0, 20_000, 77, 2).unwrap();
        assert_eq!(single.tail_count, a[1].tail_count);
    }

    #[test]
    fn tail_reports_record_configuration() {
        let r = tail_fraction(2, 3, 2.0, 100, 11, 3).unwrap();
        assert_eq!((r.n, r.h, r.n_samples, r.seed, r.workers), (2, 3, 100, 11, 3));
        assert!(r.ci_low <= r.tail_fraction && r.tail_fraction <= r.ci_high);
    }
}
