//! Command-line front door: every operation mapped to a subcommand with
//! reproducible, machine-readable output (JSON or CSV), plus plot-ready
//! two-column data files for slope series.
//!
//! Exit codes: 0 success, 2 validation error, 3 iteration budget exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::io::Write;
use std::process::ExitCode;

use matcensus::asympt;
use matcensus::census::{self, CensusResult, CensusSpec, Statistic, DEFAULT_BUDGET};
use matcensus::cond;
use matcensus::error::Error;
use matcensus::ffcount::{self, PrimeField};
use matcensus::intmat::{parse_rational, IntMatrix, RatMatrix};
use matcensus::intpoly::IntPoly;
use matcensus::quadstat;
use matcensus::selftest;
use matcensus::witness;

#[derive(Parser)]
#[command(
    name = "matcensus",
    about = "Exact counters and estimators for arithmetic statistics of integer matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    /// Exact-mode iteration budget; defaults to MATCENSUS_BUDGET or 10^10.
    #[arg(long, global = true)]
    budget: Option<u128>,

    /// Worker threads for census loops (exact results are identical for any
    /// worker count; sampled results record the count used).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct BoxArgs {
    /// Matrix dimension n >= 1.
    #[arg(long)]
    n: usize,
    /// Entry bound H >= 0: entries range over [-H, H].
    #[arg(long = "H")]
    h: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Count matrices with discriminant d (or the full histogram).
    CountDiscr {
        #[command(flatten)]
        bx: BoxArgs,
        /// Target discriminant; omit for the full histogram (box <= 10^9).
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
    },
    /// Count matrices that are not diagonalisable over C.
    CountNondiag {
        #[command(flatten)]
        bx: BoxArgs,
    },
    /// Count matrices whose characteristic polynomial has an irreducible
    /// factor of degree <= r (n <= 6).
    CountLowdeg {
        #[command(flatten)]
        bx: BoxArgs,
        /// Factor degree bound r >= 1.
        #[arg(long)]
        r: usize,
    },
    /// Count matrices with the given monic characteristic polynomial.
    CountCharpoly {
        #[command(flatten)]
        bx: BoxArgs,
        /// Polynomial, constant term first: JSON array of decimal strings or
        /// a bare comma list like "0,0,1".
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Count matrices with det(A - K) = alpha.
    CountDetshift {
        #[command(flatten)]
        bx: BoxArgs,
        /// Rational shift matrix in compact form "n:e11,e12,...", entries
        /// like "1/2"; defaults to the zero matrix.
        #[arg(long = "K", allow_hyphen_values = true)]
        shift: Option<String>,
        /// Target determinant value (rational); defaults to 0.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
    },
    /// Count matrices congruent to B mod q with determinant d.
    CountLift {
        #[command(flatten)]
        bx: BoxArgs,
        /// Modulus q >= 1.
        #[arg(long)]
        q: i64,
        /// Residue matrix "n:b11,b12,..." with entries in [0, q).
        #[arg(long = "B")]
        residue: String,
        /// Target determinant.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Count matrices with det F(A) = 0.
    CountPolysing {
        #[command(flatten)]
        bx: BoxArgs,
        /// Polynomial F, constant term first.
        #[arg(long = "F", allow_hyphen_values = true)]
        f: String,
    },
    /// Estimate an event probability over the box by seeded uniform
    /// sampling.
    Sample {
        #[command(flatten)]
        bx: BoxArgs,
        /// Event: "discr=<d>", "nondiag", "lowdeg=<r>", "charpoly=<poly>",
        /// "det=<d>", "polysing=<poly>", or "cond-tail=<L>".
        #[arg(long, allow_hyphen_values = true)]
        event: String,
        /// Sample size N >= 1.
        #[arg(long = "N")]
        samples: u64,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form R_2(d, H) (single H or a comma list for a series).
    R2 {
        /// Target discriminant.
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Box bound or comma list: "100" or "10,100,1000".
        #[arg(long = "H")]
        h: String,
    },
    /// Closed-form P_2(H; f) for monic quadratic f.
    P2 {
        /// Monic quadratic, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long = "H")]
        h: i64,
    },
    /// Witness family: exact cardinality, optional sample.
    Witness {
        #[command(flatten)]
        bx: BoxArgs,
        /// Emit this many sampled family members (compact matrix format).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The exponent gain Delta_n.
    Delta {
        #[arg(long)]
        n: u64,
    },
    /// Exponent table for n in 2..=n_max.
    Exponents {
        #[arg(long)]
        n_max: u64,
    },
    /// Log-log slope of a counter series.
    Slope {
        /// Series: "r2" (needs --d) or "witness" (needs --n).
        #[arg(long)]
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long)]
        n: Option<usize>,
        /// Comma list of H values, strictly increasing.
        #[arg(long = "H")]
        h: String,
        /// Also write the series as a two-column "H count" data file.
        #[arg(long)]
        data_out: Option<std::path::PathBuf>,
    },
    /// Brute-force Carlitz count of monic non-squarefree polynomials.
    FfCarlitz {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Characteristic-polynomial census over F_p.
    FfCensus {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Count matrices over F_p with vanishing discriminant.
    FfDiscr0 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Count matrices over F_p whose characteristic polynomial is g^2 h with
    /// deg g >= r+1.
    FfGsq {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Sampled condition-number tail fractions.
    CondTail {
        #[command(flatten)]
        bx: BoxArgs,
        /// Threshold L or comma list "10,100,1000".
        #[arg(long = "L")]
        l: String,
        #[arg(long = "N")]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in oracle suite; non-zero exit on any failure.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                Error::InvalidInput(_) | Error::DimensionMismatch(_) | Error::ZeroPolynomial
                | Error::ConstantPolynomial => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn budget(cli: &Cli) -> u128 {
    cli.budget
        .or_else(|| {
            std::env::var("MATCENSUS_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET)
}

fn emit(cli: &Cli, json: serde_json::Value, csv: String) -> Result<(), Error> {
    let body = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json).expect("valid JSON")),
        Format::Csv => csv,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn emit_census(cli: &Cli, result: &CensusResult) -> Result<(), Error> {
    emit(cli, result.to_json(), result.to_csv())
}

fn parse_bigint(s: &str) -> Result<BigInt, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad integer literal: {s}")))
}

fn parse_h_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad H value: {part}")))
        })
        .collect()
}

fn parse_event(event: &str) -> Result<Statistic, Error> {
    let (kind, arg) = match event.split_once('=') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (event.trim(), None),
    };
    match (kind, arg) {
        ("discr", Some(d)) => Ok(Statistic::DiscrEquals(parse_bigint(d)?)),
        ("nondiag", None) => Ok(Statistic::NonDiag),
        ("lowdeg", Some(r)) => Ok(Statistic::LowDegree(
            r.parse().map_err(|_| Error::invalid("bad r"))?,
        )),
        ("charpoly", Some(f)) => Ok(Statistic::CharpolyEquals(IntPoly::parse(f)?)),
        ("det", Some(d)) => Ok(Statistic::DetShift {
            shift: RatMatrix::zero(1), // re-dimensioned by the caller
            alpha: num_rational::BigRational::from_integer(parse_bigint(d)?),
        }),
        ("polysing", Some(f)) => Ok(Statistic::PolymatrixSingular(IntPoly::parse(f)?)),
        ("cond-tail", Some(l)) => Ok(Statistic::CondTail(
            l.parse().map_err(|_| Error::invalid("bad L"))?,
        )),
        _ => Err(Error::invalid(format!(
            "unknown event \"{event}\" (expected discr=<d>, nondiag, lowdeg=<r>, \
             charpoly=<poly>, det=<d>, polysing=<poly>, cond-tail=<L>)"
        ))),
    }
}

fn dispatch(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::CountDiscr { bx, d } => {
            let d = d.as_deref().map(parse_bigint).transpose()?;
            let result = census::count_discr(bx.n, bx.h, d, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountNondiag { bx } => {
            let result = census::count_nondiag(bx.n, bx.h, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountLowdeg { bx, r } => {
            let result = census::count_low_degree(bx.n, bx.h, *r, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountCharpoly { bx, f } => {
            let f = IntPoly::parse(f)?;
            let result = census::count_charpoly(bx.n, bx.h, f, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountDetshift { bx, shift, alpha } => {
            let shift = match shift {
                Some(s) => RatMatrix::parse_compact(s)?,
                None => RatMatrix::zero(bx.n),
            };
            let alpha = parse_rational(alpha)?;
            let result =
                census::count_det_shift(bx.n, bx.h, shift, alpha, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountLift { bx, q, residue, d } => {
            let residue = IntMatrix::parse_compact(residue)?;
            let d = parse_bigint(d)?;
            let result =
                census::count_lift(bx.n, bx.h, *q, residue, d, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::CountPolysing { bx, f } => {
            let f = IntPoly::parse(f)?;
            let result =
                census::count_polymatrix_singular(bx.n, bx.h, f, budget(cli), cli.workers)?;
            emit_census(cli, &result)
        }
        Command::Sample { bx, event, samples, seed } => {
            let statistic = match parse_event(event)? {
                // det=<d> sugar: zero shift of the right dimension.
                Statistic::DetShift { alpha, .. } => Statistic::DetShift {
                    shift: RatMatrix::zero(bx.n),
                    alpha,
                },
                s => s,
            };
            let spec = CensusSpec::exact(bx.n, bx.h, statistic)
                .with_budget(budget(cli))
                .with_workers(cli.workers)
                .with_sample(*samples, *seed);
            let result = census::run(&spec)?;
            emit_census(cli, &result)
        }
        Command::R2 { d, h } => {
            let hs = parse_h_list(h)?;
            let series = quadstat::r2_series(*d, &hs)?;
            let json = serde_json::json!({
                "d": d.to_string(),
                "series": series
                    .iter()
                    .map(|(h, c)| serde_json::json!([h.to_string(), c.to_string()]))
                    .collect::<Vec<_>>(),
            });
            let mut csv = String::from("H,count\n");
            for (h, c) in &series {
                csv.push_str(&format!("{h},{c}\n"));
            }
            emit(cli, json, csv)
        }
        Command::P2 { f, h } => {
            let f = IntPoly::parse(f)?;
            let count = quadstat::p2_count(&f, *h)?;
            let json = serde_json::json!({
                "f": f.to_json(),
                "H": h.to_string(),
                "count": count.to_string(),
            });
            emit(cli, json, format!("H,count\n{h},{count}\n"))
        }
        Command::Witness { bx, sample, seed } => {
            let count = witness::witness_count(bx.n, bx.h)?;
            let mut sampled = Vec::new();
            if let Some(k) = sample {
                sampled = witness::witness_sample(bx.n, bx.h, *k, *seed)?;
            }
            let json = serde_json::json!({
                "n": bx.n,
                "H": bx.h.to_string(),
                "count": count.to_string(),
                "exponent": witness::family_exponent(bx.n)?,
                "sample": sampled.iter().map(|m| m.to_compact()).collect::<Vec<_>>(),
            });
            let mut csv = format!("key,value\ncount,{count}\n");
            for m in &sampled {
                csv.push_str(&format!("sample,{}\n", m.to_compact()));
            }
            emit(cli, json, csv)
        }
        Command::Delta { n } => {
            let d = asympt::delta_n(*n)?;
            match cli.format {
                Format::Json => emit(
                    cli,
                    serde_json::json!({ "n": n, "delta_n": d }),
                    String::new(),
                ),
                Format::Csv => emit(cli, serde_json::Value::Null, format!("n,delta_n\n{n},{d}\n")),
            }
        }
        Command::Exponents { n_max } => {
            if *n_max < 2 {
                return Err(Error::invalid("exponent table requires n_max >= 2"));
            }
            let mut rows = Vec::new();
            let mut csv = String::from("n,delta_n,thm_d0,thm_dnz,conj,lower\n");
            for n in 2..=*n_max {
                let r = asympt::exponent_report(n)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.delta_n,
                    r.upper_exponent_d0,
                    r.upper_exponent_dnz,
                    r.conjecture_exponent,
                    r.lower_exponent
                ));
                rows.push(serde_json::json!({
                    "n": r.n,
                    "delta_n": r.delta_n,
                    "thm_d0": r.upper_exponent_d0.to_string(),
                    "thm_dnz": r.upper_exponent_dnz.to_string(),
                    "conj": r.conjecture_exponent,
                    "lower": r.lower_exponent.to_string(),
                    "special_case": r.special_case.map(|(r_used, e)| serde_json::json!({
                        "r": r_used,
                        "exponent": e.to_string(),
                    })),
                    "discr_degree_bound": r.discr_degree_bound,
                }));
            }
            emit(cli, serde_json::json!({ "table": rows }), csv)
        }
        Command::Slope { series, d, n, h, data_out } => {
            let hs = parse_h_list(h)?;
            let (label, points): (String, Vec<(f64, f64)>) = match series.as_str() {
                "r2" => {
                    let d = d.ok_or_else(|| Error::invalid("--d is required for series r2"))?;
                    let s = quadstat::r2_series(d, &hs)?;
                    (
                        format!("r2(d={d})"),
                        s.iter().map(|&(h, c)| (h as f64, c as f64)).collect(),
                    )
                }
                "witness" => {
                    let n = n.ok_or_else(|| Error::invalid("--n is required for series witness"))?;
                    let s = witness::witness_series(n, &hs)?;
                    (
                        format!("witness(n={n})"),
                        s.iter()
                            .map(|(h, c)| (*h as f64, c.to_f64().unwrap_or(f64::MAX)))
                            .collect(),
                    )
                }
                other => {
                    return Err(Error::invalid(format!(
                        "unknown series \"{other}\" (expected r2 or witness)"
                    )))
                }
            };
            if let Some(path) = data_out {
                let mut body = String::new();
                for (h, c) in &points {
                    body.push_str(&format!("{h} {c}\n"));
                }
                std::fs::write(path, body)
                    .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            let fit = asympt::fit_slope(&points)?;
            let json = serde_json::json!({
                "series": label,
                "points": points,
                "slope": fit.slope,
                "stderr": fit.stderr,
                "max_residual": fit.max_residual,
            });
            let csv = format!(
                "series,slope,stderr,max_residual\n{label},{},{},{}\n",
                fit.slope, fit.stderr, fit.max_residual
            );
            emit(cli, json, csv)
        }
        Command::FfCarlitz { p, n } => {
            let field = PrimeField::new(*p)?;
            let count = ffcount::carlitz_count(field, *n)?;
            let json = serde_json::json!({
                "p": p, "n": n, "count": count.to_string(),
                "carlitz_closed_form": (*p as u64).pow(*n as u32 - 1).to_string(),
            });
            emit(cli, json, format!("p,n,count\n{p},{n},{count}\n"))
        }
        Command::FfCensus { p, n } => {
            let field = PrimeField::new(*p)?;
            let report = ffcount::charpoly_census(field, *n, cli.workers)?;
            emit(cli, report.to_json(), report.to_csv())
        }
        Command::FfDiscr0 { p, n } => {
            let field = PrimeField::new(*p)?;
            let count = ffcount::discr_zero_count_modp(field, *n, cli.workers)?;
            let json = serde_json::json!({ "p": p, "n": n, "count": count.to_string() });
            emit(cli, json, format!("p,n,count\n{p},{n},{count}\n"))
        }
        Command::FfGsq { p, n, r } => {
            let field = PrimeField::new(*p)?;
            let count = ffcount::gsq_count_modp(field, *n, *r, cli.workers)?;
            let json = serde_json::json!({ "p": p, "n": n, "r": r, "count": count.to_string() });
            emit(cli, json, format!("p,n,r,count\n{p},{n},{r},{count}\n"))
        }
        Command::CondTail { bx, l, samples, seed } => {
            let ls: Result<Vec<f64>, Error> = l
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad L value: {part}")))
                })
                .collect();
            let reports = cond::tail_curve(bx.n, bx.h, &ls?, *samples, *seed, cli.workers)?;
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "L": r.l,
                        "tail_fraction": r.tail_fraction,
                        "ci_low": r.ci_low,
                        "ci_high": r.ci_high,
                        "singular_count": r.singular_count,
                    })
                })
                .collect();
            let json = serde_json::json!({
                "n": bx.n, "H": bx.h.to_string(), "N": samples.to_string(),
                "seed": seed, "workers": cli.workers, "thresholds": rows,
            });
            let mut csv = String::from("L,tail_fraction,ci_low,ci_high,singular_count\n");
            for r in &reports {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.l, r.tail_fraction, r.ci_low, r.ci_high, r.singular_count
                ));
            }
            emit(cli, json, csv)
        }
        Command::Selftest => {
            let checks = selftest::run();
            let mut all_ok = true;
            for c in &checks {
                let status = if c.pass { "pass" } else { "FAIL" };
                println!("{status}  {} ({})", c.name, c.detail);
                all_ok &= c.pass;
            }
            println!(
                "selftest: {}/{} checks passed",
                checks.iter().filter(|c| c.pass).count(),
                checks.len()
            );
            if all_ok {
                Ok(())
            } else {
                Err(Error::invalid("selftest failed"))
            }
        }
    }
}
