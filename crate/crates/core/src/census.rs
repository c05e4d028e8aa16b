//! The exact (and sampled) counting engine over the box M_n(Z; H): every
//! counter is computed by exhaustive enumeration in a deterministic odometer
//! order, partitioned across workers by the first row's odometer index so
//! that results are identical for any worker count.
//!
//! For n <= 3 the per-matrix statistics run on fixed-width 128-bit
//! arithmetic; the overflow-freedom gate is checked when the spec is
//! validated (Hadamard and discriminant bounds keep every intermediate well
//! inside i128 for H <= 10^5). Larger n, or rare slow branches such as the
//! diagonalisability test at discriminant zero, fall back to exact
//! big-integer arithmetic, so the counts are exact either way.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

use crate::cond;
use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, RatMatrix};
use crate::intpoly::IntPoly;

/// Default exact-mode iteration budget.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;
/// Full histograms are only permitted up to this box size.
pub const HISTOGRAM_BUDGET: u128 = 1_000_000_000;
/// Entry-size gate for the fixed-width n <= 3 fast paths.
const SMALL_H_LIMIT: i64 = 100_000;

/// What to count over the box.
#[derive(Debug, Clone, PartialEq)]
pub enum Statistic {
    /// Full discriminant histogram.
    DiscrHistogram,
    /// discr(A) = d.
    DiscrEquals(BigInt),
    /// A not diagonalisable over C.
    NonDiag,
    /// Characteristic polynomial has an irreducible factor of degree <= r.
    LowDegree(usize),
    /// Characteristic polynomial equals f exactly.
    CharpolyEquals(IntPoly),
    /// det(A - K) = alpha.
    DetShift { shift: RatMatrix, alpha: BigRational },
    /// A = B (mod q) within the box, det A = d; enumerates the sub-lattice.
    Lift { q: i64, residue: IntMatrix, det: BigInt },
    /// det(F(A)) = 0.
    PolymatrixSingular(IntPoly),
    /// kappa(A) > L.
    CondTail(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusSpec {
    pub n: usize,
    pub h: i64,
    pub statistic: Statistic,
    pub mode: Mode,
    pub budget: u128,
    pub workers: usize,
}

/// Counters of a finished census.
#[derive(Debug, Clone, PartialEq)]
pub enum Counters {
    /// Exact count of a single event statistic.
    Count(u64),
    /// Exact full histogram keyed by discriminant value.
    Histogram(BTreeMap<BigInt, u64>),
    /// Sample-mode estimate with a 95% normal-approximation interval.
    Estimate {
        hits: u64,
        samples: u64,
        estimate: f64,
        ci_low: f64,
        ci_high: f64,
    },
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub n: usize,
    pub h: i64,
    pub statistic: String,
    pub mode: String,
    pub counters: Counters,
    pub matrices_visited: u128,
    pub workers: usize,
    pub wall_time_ms: u128,
}

impl CensusSpec {
    pub fn exact(n: usize, h: i64, statistic: Statistic) -> Self {
        CensusSpec {
            n,
            h,
            statistic,
            mode: Mode::Exact,
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_sample(mut self, count: u64, seed: u64) -> Self {
        self.mode = Mode::Sample { count, seed };
        self
    }

    /// Number of lattice points the exact mode will visit.
    pub fn exact_points(&self) -> Result<u128> {
        match &self.statistic {
            Statistic::Lift { q, residue, .. } => {
                let mut total: u128 = 1;
                for e in residue.entries() {
                    let b = e.to_i64().ok_or_else(|| Error::invalid("residue entry too large"))?;
                    let k = lift_value_count(self.h, b, *q) as u128;
                    total = total
                        .checked_mul(k)
                        .ok_or(Error::BudgetExceeded { required: u128::MAX, budget: self.budget })?;
                }
                Ok(total)
            }
            _ => box_size(self.n, self.h)
                .ok_or(Error::BudgetExceeded { required: u128::MAX, budget: self.budget }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("census requires n >= 1"));
        }
        if self.h < 0 {
            return Err(Error::invalid("census requires H >= 0"));
        }
        if self.workers < 1 {
            return Err(Error::invalid("census requires >= 1 worker"));
        }
        match &self.statistic {
            Statistic::LowDegree(r) => {
                if *r < 1 {
                    return Err(Error::invalid("low_degree requires r >= 1"));
                }
                if *r < self.n && self.n > 6 {
                    return Err(Error::invalid(
                        "low_degree census is limited to n <= 6 (factorization limit)",
                    ));
                }
            }
            Statistic::CharpolyEquals(f) => {
                if f.degree() != Some(self.n) || !f.is_monic() {
                    return Err(Error::invalid(
                        "charpoly census requires a monic polynomial of degree n",
                    ));
                }
            }
            Statistic::DetShift { shift, .. } => {
                if shift.n() != self.n {
                    return Err(Error::DimensionMismatch("det_shift matrix K".into()));
                }
            }
            Statistic::Lift { q, residue, .. } => {
                if *q < 1 {
                    return Err(Error::invalid("lift census requires q >= 1"));
                }
                if residue.n() != self.n {
                    return Err(Error::DimensionMismatch("lift residue matrix B".into()));
                }
                for e in residue.entries() {
                    if e.is_negative() || e >= &BigInt::from(*q) {
                        return Err(Error::invalid("lift residue entries must lie in [0, q)"));
                    }
                }
            }
            Statistic::CondTail(l) => {
                if !l.is_finite() {
                    return Err(Error::invalid("cond tail threshold must be finite"));
                }
                if self.n > 64 {
                    return Err(Error::invalid("cond tail statistic supports n <= 64"));
                }
            }
            _ => {}
        }
        match self.mode {
            Mode::Exact => {
                let points = self.exact_points()?;
                if points > self.budget {
                    return Err(Error::BudgetExceeded { required: points, budget: self.budget });
                }
                if matches!(self.statistic, Statistic::DiscrHistogram) && points > HISTOGRAM_BUDGET
                {
                    return Err(Error::BudgetExceeded {
                        required: points,
                        budget: HISTOGRAM_BUDGET,
                    });
                }
            }
            Mode::Sample { count, .. } => {
                if count == 0 {
                    return Err(Error::invalid("sample mode requires N >= 1"));
                }
                if matches!(self.statistic, Statistic::DiscrHistogram) {
                    return Err(Error::invalid(
                        "sample mode estimates event statistics, not full histograms",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Number of values v in [-H, H] with v = b (mod q).
fn lift_value_count(h: i64, b: i64, q: i64) -> u64 {
    let start = -h + (b - (-h)).rem_euclid(q);
    if start > h {
        0
    } else {
        ((h - start) / q + 1) as u64
    }
}

fn box_size(n: usize, h: i64) -> Option<u128> {
    let side = (2 * h + 1) as u128;
    let mut total: u128 = 1;
    for _ in 0..n * n {
        total = total.checked_mul(side)?;
    }
    Some(total)
}

/// Deterministic stream over the whole box in odometer order: the row-major
/// last entry varies fastest, each entry running from -H to H.
pub struct BoxIter {
    n: usize,
    h: i64,
    entries: Vec<i64>,
    started: bool,
    done: bool,
}

/// Enumerates M_n(Z; H) exactly once per matrix; refuses boxes beyond the
/// budget.
pub fn enumerate_box(n: usize, h: i64, budget: u128) -> Result<BoxIter> {
    if n < 1 || h < 0 {
        return Err(Error::invalid("enumerate_box requires n >= 1 and H >= 0"));
    }
    let points =
        box_size(n, h).ok_or(Error::BudgetExceeded { required: u128::MAX, budget })?;
    if points > budget {
        return Err(Error::BudgetExceeded { required: points, budget });
    }
    Ok(BoxIter {
        n,
        h,
        entries: vec![-h; n * n],
        started: false,
        done: false,
    })
}

impl Iterator for BoxIter {
    type Item = IntMatrix;

    fn next(&mut self) -> Option<IntMatrix> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !odometer_step(&mut self.entries, self.h) {
            self.done = true;
            return None;
        }
        Some(IntMatrix::from_i64(self.n, &self.entries).expect("valid dimensions"))
    }
}

/// Advances the trailing digits; returns false when the odometer wraps.
fn odometer_step(entries: &mut [i64], h: i64) -> bool {
    for slot in entries.iter_mut().rev() {
        if *slot < h {
            *slot += 1;
            return true;
        }
        *slot = -h;
    }
    false
}

/// Runs a census to completion.
pub fn run(spec: &CensusSpec) -> Result<CensusResult> {
    spec.validate()?;
    let started = Instant::now();
    let eval = Evaluator::prepare(spec)?;
    let (counters, visited) = match spec.mode {
        Mode::Exact => run_exact(spec, &eval)?,
        Mode::Sample { count, seed } => run_sample(spec, &eval, count, seed)?,
    };
    Ok(CensusResult {
        n: spec.n,
        h: spec.h,
        statistic: statistic_label(&spec.statistic),
        mode: mode_label(&spec.mode),
        counters,
        matrices_visited: visited,
        workers: spec.workers,
        wall_time_ms: started.elapsed().as_millis(),
    })
}

fn statistic_label(s: &Statistic) -> String {
    match s {
        Statistic::DiscrHistogram => "discr_histogram".into(),
        Statistic::DiscrEquals(d) => format!("discr={d}"),
        Statistic::NonDiag => "nondiag".into(),
        Statistic::LowDegree(r) => format!("low_degree<={r}"),
        Statistic::CharpolyEquals(f) => format!("charpoly={f}"),
        Statistic::DetShift { shift, alpha } => {
            format!("det_shift(K={},alpha={alpha})", shift.to_compact())
        }
        Statistic::Lift { q, residue, det } => {
            format!("lift(q={q},B={},det={det})", residue.to_compact())
        }
        Statistic::PolymatrixSingular(f) => format!("polymatrix_singular({f})"),
        Statistic::CondTail(l) => format!("cond_tail>{l}"),
    }
}

fn mode_label(m: &Mode) -> String {
    match m {
        Mode::Exact => "exact".into(),
        Mode::Sample { count, seed } => format!("sample(N={count},seed={seed})"),
    }
}

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

/// Precomputed per-census context; `Send + Sync` so workers can share it.
struct Evaluator {
    n: usize,
    kind: EvalKind,
}

enum EvalKind {
    Discr {
        /// i128 formula path for n <= 3 within the entry-size gate.
        small: bool,
        /// None = histogram.
        target: Option<BigInt>,
        target_small: Option<i128>,
    },
    NonDiag {
        small: bool,
    },
    LowDegree {
        r: usize,
    },
    Charpoly {
        f: IntPoly,
        /// Low coefficients as i128 when both n <= 3 and they fit.
        small: Option<Vec<i128>>,
    },
    DetShift {
        /// L*K with L the lcm of the denominators.
        scaled_shift: Vec<BigInt>,
        denom: BigInt,
        /// alpha * L^n when integral; otherwise no matrix can match.
        target: Option<BigInt>,
        small: Option<DetShiftSmall>,
    },
    LiftDet {
        det: BigInt,
        det_small: Option<i128>,
        small: bool,
    },
    PolySingular {
        f: IntPoly,
    },
    CondTail {
        l: f64,
    },
}

struct DetShiftSmall {
    scaled_shift: Vec<i128>,
    denom: i128,
    target: i128,
}

/// Outcome of one matrix visit.
enum Outcome {
    Hit(bool),
    KeySmall(i128),
    KeyBig(BigInt),
}

impl Evaluator {
    fn prepare(spec: &CensusSpec) -> Result<Evaluator> {
        let n = spec.n;
        let small_ok = n <= 3 && spec.h <= SMALL_H_LIMIT;
        let kind = match &spec.statistic {
            Statistic::DiscrHistogram => EvalKind::Discr {
                small: small_ok,
                target: None,
                target_small: None,
            },
            Statistic::DiscrEquals(d) => EvalKind::Discr {
                small: small_ok,
                target: Some(d.clone()),
                target_small: d.to_i128(),
            },
            Statistic::NonDiag => EvalKind::NonDiag { small: small_ok },
            Statistic::LowDegree(r) => EvalKind::LowDegree { r: *r },
            Statistic::CharpolyEquals(f) => {
                let small = if small_ok {
                    let low: Option<Vec<i128>> =
                        (0..n).map(|k| f.coeff(k).to_i128()).collect();
                    low
                } else {
                    None
                };
                EvalKind::Charpoly { f: f.clone(), small }
            }
            Statistic::DetShift { shift, alpha } => {
                let mut denom = BigInt::from(1);
                for e in shift.entries() {
                    denom = num_integer::Integer::lcm(&denom, e.denom());
                }
                let scaled_shift: Vec<BigInt> = shift
                    .entries()
                    .iter()
                    .map(|e| {
                        let v = e * BigRational::from_integer(denom.clone());
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect();
                let scaled_alpha = alpha * BigRational::from_integer(denom.pow(n as u32));
                let target = if scaled_alpha.is_integer() {
                    Some(scaled_alpha.to_integer())
                } else {
                    None
                };
                let small = if small_ok {
                    let se: Option<Vec<i128>> =
                        scaled_shift.iter().map(|e| e.to_i128()).collect();
                    match (se, denom.to_i128(), target.as_ref().and_then(|t| t.to_i128())) {
                        (Some(se), Some(d), Some(t))
                            if se.iter().all(|&v| v.unsigned_abs() <= 1 << 40)
                                && d <= 1 << 20 =>
                        {
                            Some(DetShiftSmall { scaled_shift: se, denom: d, target: t })
                        }
                        _ => None,
                    }
                } else {
                    None
                };
                EvalKind::DetShift { scaled_shift, denom, target, small }
            }
            Statistic::Lift { det, .. } => EvalKind::LiftDet {
                det: det.clone(),
                det_small: det.to_i128(),
                small: small_ok,
            },
            Statistic::PolymatrixSingular(f) => EvalKind::PolySingular { f: f.clone() },
            Statistic::CondTail(l) => EvalKind::CondTail { l: *l },
        };
        Ok(Evaluator { n, kind })
    }

    fn is_histogram(&self) -> bool {
        matches!(
            self.kind,
            EvalKind::Discr { target: None, .. }
        )
    }

    fn visit(&self, entries: &[i64]) -> Outcome {
        let n = self.n;
        match &self.kind {
            EvalKind::Discr { small, target, target_small } => {
                if *small {
                    let d = discr_small(entries, n);
                    match target {
                        None => Outcome::KeySmall(d),
                        Some(_) => Outcome::Hit(target_small.is_some_and(|t| t == d)),
                    }
                } else {
                    let d = big_matrix(entries, n).discr_matrix();
                    match target {
                        None => Outcome::KeyBig(d),
                        Some(t) => Outcome::Hit(&d == t),
                    }
                }
            }
            EvalKind::NonDiag { small } => {
                if n == 1 {
                    return Outcome::Hit(false);
                }
                let discr_zero = if *small {
                    discr_small(entries, n) == 0
                } else {
                    big_matrix(entries, n).discr_matrix().is_zero()
                };
                if !discr_zero {
                    // Distinct eigenvalues: always diagonalisable.
                    return Outcome::Hit(false);
                }
                let a = big_matrix(entries, n);
                Outcome::Hit(!a.is_diagonalizable_c())
            }
            EvalKind::LowDegree { r } => {
                if *r >= n {
                    return Outcome::Hit(true);
                }
                let f = big_matrix(entries, n).charpoly();
                let hit = f
                    .has_irreducible_factor_of_degree_at_most(*r)
                    .expect("degree within factorization limit");
                Outcome::Hit(hit)
            }
            EvalKind::Charpoly { f, small } => {
                if let Some(low) = small {
                    let c = charpoly_low_small(entries, n);
                    Outcome::Hit(c[..] == low[..])
                } else {
                    Outcome::Hit(&big_matrix(entries, n).charpoly() == f)
                }
            }
            EvalKind::DetShift { scaled_shift, denom, target, small } => {
                let target = match target {
                    Some(t) => t,
                    None => return Outcome::Hit(false),
                };
                if let Some(s) = small {
                    let mut m = [0i128; 9];
                    for (i, slot) in m[..n * n].iter_mut().enumerate() {
                        *slot = entries[i] as i128 * s.denom - s.scaled_shift[i];
                    }
                    return Outcome::Hit(det_small(&m[..n * n], n) == s.target);
                }
                let scaled: Vec<BigInt> = entries
                    .iter()
                    .zip(scaled_shift)
                    .map(|(&a, sk)| BigInt::from(a) * denom - sk)
                    .collect();
                let det = IntMatrix::new(n, scaled).expect("square").det();
                Outcome::Hit(&det == target)
            }
            EvalKind::LiftDet { det, det_small: det_target, small } => {
                if *small {
                    let mut m = [0i128; 9];
                    for (i, slot) in m[..n * n].iter_mut().enumerate() {
                        *slot = entries[i] as i128;
                    }
                    let d = det_small(&m[..n * n], n);
                    Outcome::Hit(det_target.is_some_and(|t| t == d))
                } else {
                    Outcome::Hit(&big_matrix(entries, n).det() == det)
                }
            }
            EvalKind::PolySingular { f } => {
                let a = big_matrix(entries, n);
                Outcome::Hit(a.eval_poly(f).det().is_zero())
            }
            EvalKind::CondTail { l } => {
                let a = big_matrix(entries, n);
                let k = cond::kappa(&a).expect("n <= 64 and Jacobi converges");
                Outcome::Hit(k > *l)
            }
        }
    }
}

fn big_matrix(entries: &[i64], n: usize) -> IntMatrix {
    IntMatrix::from_i64(n, entries).expect("valid dimensions")
}

/// Discriminant of the characteristic polynomial for n <= 3 in i128.
fn discr_small(e: &[i64], n: usize) -> i128 {
    match n {
        1 => 1,
        2 => {
            let (a, b, c, d) = (e[0] as i128, e[1] as i128, e[2] as i128, e[3] as i128);
            (a - d) * (a - d) + 4 * b * c
        }
        3 => {
            let c = charpoly_low_small(e, 3);
            // f = X^3 + p X^2 + q X + r
            let (r, q, p) = (c[0], c[1], c[2]);
            18 * p * q * r - 4 * p * p * p * r + p * p * q * q - 4 * q * q * q - 27 * r * r
        }
        _ => unreachable!("small discriminant path is limited to n <= 3"),
    }
}

/// Low n coefficients (constant first) of the monic characteristic
/// polynomial for n <= 3 in i128.
fn charpoly_low_small(e: &[i64], n: usize) -> Vec<i128> {
    match n {
        1 => vec![-(e[0] as i128)],
        2 => {
            let (a, b, c, d) = (e[0] as i128, e[1] as i128, e[2] as i128, e[3] as i128);
            vec![a * d - b * c, -(a + d)]
        }
        3 => {
            let m: Vec<i128> = e.iter().map(|&x| x as i128).collect();
            let tr = m[0] + m[4] + m[8];
            let minors = m[0] * m[4] - m[1] * m[3] + m[0] * m[8] - m[2] * m[6]
                + m[4] * m[8]
                - m[5] * m[7];
            let det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6]);
            vec![-det, minors, -tr]
        }
        _ => unreachable!("small charpoly path is limited to n <= 3"),
    }
}

/// Determinant for n <= 3 in i128.
fn det_small(m: &[i128], n: usize) -> i128 {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => unreachable!("small determinant path is limited to n <= 3"),
    }
}

// ---------------------------------------------------------------------------
// Exact runner
// ---------------------------------------------------------------------------

enum LocalCounts {
    Count(u64),
    HistSmall(BTreeMap<i128, u64>),
    HistBig(BTreeMap<BigInt, u64>),
}

fn run_exact(spec: &CensusSpec, eval: &Evaluator) -> Result<(Counters, u128)> {
    let visited = spec.exact_points()?;
    let lift = match &spec.statistic {
        Statistic::Lift { q, residue, .. } => Some(lift_values(spec, *q, residue)?),
        _ => None,
    };

    // First-row partition: the leading n digits of the odometer.
    let first_count: u128 = match &lift {
        Some(values) => values[..spec.n]
            .iter()
            .map(|v| v.len() as u128)
            .product(),
        None => {
            let side = (2 * spec.h + 1) as u128;
            (0..spec.n).map(|_| side).product()
        }
    };

    let workers = spec.workers;
    let locals: Vec<LocalCounts> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let lo = first_count * w as u128 / workers as u128;
            let hi = first_count * (w + 1) as u128 / workers as u128;
            let lift_ref = lift.as_ref();
            handles.push(scope.spawn(move || match lift_ref {
                Some(values) => worker_exact_lift(spec, eval, values, lo, hi),
                None => worker_exact_box(spec, eval, lo, hi),
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });

    let counters = merge_locals(eval, locals);
    Ok((counters, visited))
}

fn merge_locals(eval: &Evaluator, locals: Vec<LocalCounts>) -> Counters {
    if eval.is_histogram() {
        let mut hist: BTreeMap<BigInt, u64> = BTreeMap::new();
        for local in locals {
            match local {
                LocalCounts::HistSmall(m) => {
                    for (k, v) in m {
                        *hist.entry(BigInt::from(k)).or_insert(0) += v;
                    }
                }
                LocalCounts::HistBig(m) => {
                    for (k, v) in m {
                        *hist.entry(k).or_insert(0) += v;
                    }
                }
                LocalCounts::Count(_) => unreachable!("histogram census"),
            }
        }
        Counters::Histogram(hist)
    } else {
        let mut total = 0u64;
        for local in locals {
            match local {
                LocalCounts::Count(c) => total += c,
                _ => unreachable!("event census"),
            }
        }
        Counters::Count(total)
    }
}

/// Enumerates the worker's share of the box: first-row odometer indices in
/// [lo, hi), full odometer over the remaining entries.
fn worker_exact_box(spec: &CensusSpec, eval: &Evaluator, lo: u128, hi: u128) -> LocalCounts {
    let n = spec.n;
    let h = spec.h;
    let side = (2 * h + 1) as u128;
    let mut acc = new_local(eval);
    let mut entries = vec![0i64; n * n];
    let tail_len = n * n - n;
    let mut idx = lo;
    while idx < hi {
        // Decode the first row from the odometer index, most significant
        // digit at position (0, 0).
        let mut rem = idx;
        for j in (0..n).rev() {
            entries[j] = -h + (rem % side) as i64;
            rem /= side;
        }
        for slot in entries[n..].iter_mut() {
            *slot = -h;
        }
        loop {
            visit_into(eval, &entries, &mut acc);
            if tail_len == 0 || !odometer_step(&mut entries[n..], h) {
                break;
            }
        }
        idx += 1;
    }
    acc
}

/// Allowed entry values for the lift sub-lattice, per position.
fn lift_values(spec: &CensusSpec, q: i64, residue: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let h = spec.h;
    residue
        .entries()
        .iter()
        .map(|e| {
            let b = e
                .to_i64()
                .ok_or_else(|| Error::invalid("residue entry too large"))?;
            let start = -h + (b - (-h)).rem_euclid(q);
            let mut vals = Vec::new();
            let mut v = start;
            while v <= h {
                vals.push(v);
                v += q;
            }
            Ok(vals)
        })
        .collect()
}

fn worker_exact_lift(
    spec: &CensusSpec,
    eval: &Evaluator,
    values: &[Vec<i64>],
    lo: u128,
    hi: u128,
) -> LocalCounts {
    let n = spec.n;
    let mut acc = new_local(eval);
    if values.iter().any(|v| v.is_empty()) {
        return acc;
    }
    let mut digits = vec![0usize; n * n];
    let mut entries = vec![0i64; n * n];
    let mut idx = lo;
    while idx < hi {
        let mut rem = idx;
        for j in (0..n).rev() {
            let len = values[j].len() as u128;
            digits[j] = (rem % len) as usize;
            rem /= len;
        }
        for d in digits[n..].iter_mut() {
            *d = 0;
        }
        loop {
            for (slot, (d, vals)) in entries.iter_mut().zip(digits.iter().zip(values)) {
                *slot = vals[*d];
            }
            visit_into(eval, &entries, &mut acc);
            if !mixed_odometer_step(&mut digits[n..], &values[n..]) {
                break;
            }
        }
        idx += 1;
    }
    acc
}

fn mixed_odometer_step(digits: &mut [usize], values: &[Vec<i64>]) -> bool {
    for (d, vals) in digits.iter_mut().zip(values).rev() {
        if *d + 1 < vals.len() {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn new_local(eval: &Evaluator) -> LocalCounts {
    if eval.is_histogram() {
        if matches!(eval.kind, EvalKind::Discr { small: true, .. }) {
            LocalCounts::HistSmall(BTreeMap::new())
        } else {
            LocalCounts::HistBig(BTreeMap::new())
        }
    } else {
        LocalCounts::Count(0)
    }
}

fn visit_into(eval: &Evaluator, entries: &[i64], acc: &mut LocalCounts) {
    match (eval.visit(entries), acc) {
        (Outcome::Hit(true), LocalCounts::Count(c)) => *c += 1,
        (Outcome::Hit(false), LocalCounts::Count(_)) => {}
        (Outcome::KeySmall(k), LocalCounts::HistSmall(m)) => {
            *m.entry(k).or_insert(0) += 1;
        }
        (Outcome::KeyBig(k), LocalCounts::HistBig(m)) => {
            *m.entry(k).or_insert(0) += 1;
        }
        _ => unreachable!("evaluator outcome matches accumulator shape"),
    }
}

// ---------------------------------------------------------------------------
// Sample runner
// ---------------------------------------------------------------------------

/// Uniform sampling of the box. Worker w draws its quota from ChaCha stream
/// w of the seed, so results are reproducible for a fixed (seed, workers).
fn run_sample(
    spec: &CensusSpec,
    eval: &Evaluator,
    count: u64,
    seed: u64,
) -> Result<(Counters, u128)> {
    if matches!(spec.statistic, Statistic::Lift { .. }) {
        return Err(Error::invalid("sample mode does not support the lift statistic"));
    }
    let workers = spec.workers;
    let hits: u64 = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let quota =
                count / workers as u64 + u64::from((w as u64) < count % workers as u64);
            handles.push(scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(w as u64);
                let n = spec.n;
                let h = spec.h;
                let mut entries = vec![0i64; n * n];
                let mut hits = 0u64;
                for _ in 0..quota {
                    for e in entries.iter_mut() {
                        *e = rng.random_range(-h..=h);
                    }
                    if let Outcome::Hit(true) = eval.visit(&entries) {
                        hits += 1;
                    }
                }
                hits
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("sample worker panicked"))
            .sum()
    });
    let estimate = hits as f64 / count as f64;
    let se = (estimate * (1.0 - estimate) / count as f64).sqrt();
    Ok((
        Counters::Estimate {
            hits,
            samples: count,
            estimate,
            ci_low: (estimate - 1.96 * se).max(0.0),
            ci_high: (estimate + 1.96 * se).min(1.0),
        },
        count as u128,
    ))
}

// ---------------------------------------------------------------------------
// Convenience entry points (exact mode)
// ---------------------------------------------------------------------------

pub fn count_discr(
    n: usize,
    h: i64,
    d: Option<BigInt>,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    let statistic = match d {
        Some(d) => Statistic::DiscrEquals(d),
        None => Statistic::DiscrHistogram,
    };
    run(&CensusSpec::exact(n, h, statistic)
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_nondiag(n: usize, h: i64, budget: u128, workers: usize) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::NonDiag)
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_low_degree(
    n: usize,
    h: i64,
    r: usize,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::LowDegree(r))
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_charpoly(
    n: usize,
    h: i64,
    f: IntPoly,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::CharpolyEquals(f))
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_det_shift(
    n: usize,
    h: i64,
    shift: RatMatrix,
    alpha: BigRational,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::DetShift { shift, alpha })
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_lift(
    n: usize,
    h: i64,
    q: i64,
    residue: IntMatrix,
    det: BigInt,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::Lift { q, residue, det })
        .with_budget(budget)
        .with_workers(workers))
}

pub fn count_polymatrix_singular(
    n: usize,
    h: i64,
    f: IntPoly,
    budget: u128,
    workers: usize,
) -> Result<CensusResult> {
    run(&CensusSpec::exact(n, h, Statistic::PolymatrixSingular(f))
        .with_budget(budget)
        .with_workers(workers))
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl CensusResult {
    /// Single event count, when this census produced one.
    pub fn count(&self) -> Option<u64> {
        match &self.counters {
            Counters::Count(c) => Some(*c),
            _ => None,
        }
    }

    pub fn histogram(&self) -> Option<&BTreeMap<BigInt, u64>> {
        match &self.counters {
            Counters::Histogram(h) => Some(h),
            _ => None,
        }
    }

    fn counters_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        match &self.counters {
            Counters::Count(c) => json!({ "count": c.to_string() }),
            Counters::Histogram(h) => {
                let rows: Vec<Value> = h
                    .iter()
                    .map(|(k, v)| json!([k.to_string(), v.to_string()]))
                    .collect();
                json!({ "histogram": rows })
            }
            Counters::Estimate { hits, samples, estimate, ci_low, ci_high } => json!({
                "hits": hits.to_string(),
                "samples": samples.to_string(),
                "estimate": estimate,
                "ci95": [ci_low, ci_high],
            }),
        }
    }

    /// Everything except the timing field; identical runs (and, in exact
    /// mode, any worker split of the same run) serialize identically.
    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "H": self.h.to_string(),
            "statistic": self.statistic,
            "mode": self.mode,
            "counters": self.counters_json(),
            "matrices_visited": self.matrices_visited.to_string(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.canonical_json();
        let obj = v.as_object_mut().expect("object");
        obj.insert("workers".into(), serde_json::json!(self.workers));
        obj.insert(
            "wall_time_ms".into(),
            serde_json::json!(self.wall_time_ms.to_string()),
        );
        v
    }

    /// CSV rows "key,count".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,count\n");
        match &self.counters {
            Counters::Count(c) => {
                out.push_str(&format!("count,{c}\n"));
            }
            Counters::Histogram(h) => {
                for (k, v) in h {
                    out.push_str(&format!("{k},{v}\n"));
                }
            }
            Counters::Estimate { hits, samples, estimate, ci_low, ci_high } => {
                out.push_str(&format!("hits,{hits}\n"));
                out.push_str(&format!("samples,{samples}\n"));
                out.push_str(&format!("estimate,{estimate}\n"));
                out.push_str(&format!("ci_low,{ci_low}\n"));
                out.push_str(&format!("ci_high,{ci_high}\n"));
            }
        }
        out
    }
}
