//! frob: exact generalized-Frobenius calculations from the command line.
//!
//! Exit codes: 0 success, 1 verification failure or internal inconsistency,
//! 2 usage error, 3 input validation error, 4 resource limit. Errors are
//! reported as one JSON object on stderr.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use frobenius::basis::{gcd_structure, Basis};
use frobenius::closedforms::{detect_threshold, theoremg_bundle, FrobeniusBundle, ThresholdCertificate};
use frobenius::counting::set_cell_cap;
use frobenius::error::Error;
use frobenius::genfun::{f_eq_genfun, f_ge_genfun, series_expand, RationalGF, SparsePoly};
use frobenius::levelsets::{cumulative_stats, level_set, spectrum};
use frobenius::quasipoly::interpolate_quasipoly;
use frobenius::selfcheck;

#[derive(Parser)]
#[command(name = "frob", version, about = "Exact generalized-Frobenius calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate t, f(t) for t = 0..=max-t
    Table {
        /// Comma-separated generators, e.g. 3,4,6
        #[arg(long)]
        basis: String,
        #[arg(long = "max-t")]
        max_t: u64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The gcd/coset skeleton (d, p, m, sigma, reduced vector, t0)
    Structure {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Level set and cumulative statistics for one k
    Levelset {
        #[arg(long)]
        basis: String,
        /// Representation count (decimal, arbitrary size)
        #[arg(long)]
        k: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The values f(sp) for s = 0..=s-max
    Spectrum {
        #[arg(long)]
        basis: String,
        #[arg(long = "s-max")]
        s_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Closed-form bundle at s (detects the threshold first)
    Closed {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        s: u64,
        /// Verification window past s*; default 2m/p
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Detect the certified threshold and constants C1, C2
    Threshold {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Quasi-polynomial constituents as exact fractions
    Quasipoly {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generating functions F_eq and F_ge at s, optionally expanded
    Genfun {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        s: u64,
        /// Also expand F_ge to this degree
        #[arg(long)]
        series: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the cross-module invariant suite; nonzero exit on failure
    Verify {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        horizon: u64,
    },
}

fn main() {
    let code = run(std::env::args_os());
    std::process::exit(code);
}

/// Entry point, separated from `main` so tests can drive it.
fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Ok(cap) = std::env::var("RESOURCE_CAP") {
        match cap.parse::<u64>() {
            Ok(cap) => set_cell_cap(cap),
            Err(_) => {
                emit_error_json("Usage", "RESOURCE_CAP must be a positive integer");
                return 2;
            }
        }
    }

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            emit_error_json("Usage", &e.to_string());
            return 2;
        }
    };

    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let (name, code) = classify(&err);
            emit_error_json(name, &err.to_string());
            code
        }
    }
}

fn classify(err: &Error) -> (&'static str, i32) {
    match err {
        Error::TooFewElements { .. } => ("TooFewElements", 3),
        Error::NonPositiveEntry { .. } => ("NonPositiveEntry", 3),
        Error::NotCoprime { .. } => ("NotCoprime", 3),
        Error::NotPairwiseCoprime { .. } => ("NotPairwiseCoprime", 3),
        Error::BelowRange { .. } => ("BelowRange", 3),
        Error::NotApplicable { .. } => ("NotApplicable", 3),
        Error::NotDivisible { .. } => ("NotDivisible", 3),
        Error::BelowThreshold { .. } => ("BelowThreshold", 3),
        Error::ResourceLimit { .. } => ("ResourceLimit", 4),
        Error::ValidationFailure { .. } => ("ValidationFailure", 1),
        Error::VerificationFailure { .. } => ("VerificationFailure", 1),
        Error::DegenerateLeading { .. } => ("DegenerateLeading", 1),
    }
}

fn emit_error_json(error: &str, message: &str) {
    #[derive(Serialize)]
    struct ErrorOut<'a> {
        error: &'a str,
        message: &'a str,
    }
    let json = serde_json::to_string(&ErrorOut { error, message }).expect("error serializes");
    eprintln!("{json}");
}

fn parse_basis(text: &str) -> Result<Basis, Error> {
    let mut entries = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        let value = i128::from_str(piece).map_err(|_| Error::ValidationFailure {
            detail: format!("cannot parse generator {piece:?}"),
        })?;
        entries.push(value);
    }
    Basis::from_signed(&entries)
}

fn parse_k(text: &str) -> Result<BigUint, Error> {
    BigUint::from_str(text.trim()).map_err(|_| Error::ValidationFailure {
        detail: format!("cannot parse k {text:?} as a nonnegative integer"),
    })
}

fn write_output(output: Option<&PathBuf>, content: &str) -> i32 {
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, content) {
                emit_error_json("Io", &format!("cannot write {}: {e}", path.display()));
                return 1;
            }
            0
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes()).expect("stdout");
            0
        }
    }
}

// serialization mirrors: big integers as decimal strings, keys in
// declaration order

fn ratio_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize)]
struct PolyOut {
    terms: Vec<(u64, String)>,
}

impl PolyOut {
    fn new(p: &SparsePoly) -> Self {
        PolyOut {
            terms: p.terms().iter().map(|(e, c)| (*e, c.to_string())).collect(),
        }
    }
}

#[derive(Serialize)]
struct GfOut {
    numerator: PolyOut,
    denominator_factors: Vec<u64>,
}

impl GfOut {
    fn new(gf: &RationalGF) -> Self {
        GfOut {
            numerator: PolyOut::new(gf.numerator()),
            denominator_factors: gf.denominator_factors().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct CertificateOut {
    s_incr: u64,
    f_small_max: String,
    pre_incr_max: String,
    s_star: u64,
    s_min_empirical: u64,
    c1: String,
    c2: String,
    window: u64,
}

impl CertificateOut {
    fn new(cert: &ThresholdCertificate) -> Self {
        CertificateOut {
            s_incr: cert.s_incr,
            f_small_max: cert.f_small_max.to_string(),
            pre_incr_max: cert.pre_incr_max.to_string(),
            s_star: cert.s_star,
            s_min_empirical: cert.s_min_empirical,
            c1: cert.c1.to_string(),
            c2: ratio_string(&cert.c2),
            window: cert.window,
        }
    }
}

#[derive(Serialize)]
struct BundleOut {
    s: u64,
    k: String,
    g_eq_le: u64,
    h_eq_ge: u64,
    c_eq: u64,
    c_le: String,
    s_eq: String,
    s_le: String,
    f_eq: PolyOut,
    f_ge: GfOut,
}

impl BundleOut {
    fn new(bundle: &FrobeniusBundle) -> Self {
        BundleOut {
            s: bundle.s,
            k: bundle.k.to_string(),
            g_eq_le: bundle.g_eq_le,
            h_eq_ge: bundle.h_eq_ge,
            c_eq: bundle.c_eq,
            c_le: bundle.c_le.to_string(),
            s_eq: bundle.s_eq.to_string(),
            s_le: bundle.s_le.to_string(),
            f_eq: PolyOut::new(&bundle.f_eq),
            f_ge: GfOut::new(&bundle.f_ge),
        }
    }
}

fn rows_output(
    header: (&str, &str),
    rows: &[(u64, String)],
    basis: &[u64],
    format: Format,
) -> String {
    match format {
        Format::Tsv => {
            let mut out = format!("{}\t{}\n", header.0, header.1);
            for (t, v) in rows {
                out.push_str(&format!("{t}\t{v}\n"));
            }
            out
        }
        Format::Csv => {
            let mut out = format!("{},{}\n", header.0, header.1);
            for (t, v) in rows {
                out.push_str(&format!("{t},{v}\n"));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct RowsOut<'a> {
                basis: &'a [u64],
                rows: &'a [(u64, String)],
            }
            let mut out =
                serde_json::to_string_pretty(&RowsOut { basis, rows }).expect("serializes");
            out.push('\n');
            out
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Table {
            basis,
            max_t,
            format,
            output,
        } => {
            let basis = parse_basis(&basis)?;
            let table = frobenius::counting::count_table(&basis, max_t)?;
            let rows: Vec<(u64, String)> = table
                .counts()
                .iter()
                .enumerate()
                .map(|(t, c)| (t as u64, c.to_string()))
                .collect();
            let text = rows_output(("t", "f"), &rows, basis.generators(), format);
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Structure { basis, output } => {
            let basis = parse_basis(&basis)?;
            let st = gcd_structure(&basis);
            #[derive(Serialize)]
            struct StructureOut<'a> {
                basis: &'a [u64],
                d: &'a [u64],
                p: u64,
                m: u64,
                sigma: u64,
                a_reduced: &'a [u64],
                t0: u64,
            }
            let out = StructureOut {
                basis: basis.generators(),
                d: &st.d,
                p: st.p,
                m: st.m,
                sigma: st.sigma,
                a_reduced: &st.a_reduced,
                t0: st.t0,
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Levelset { basis, k, output } => {
            let basis = parse_basis(&basis)?;
            let k = parse_k(&k)?;
            let ls = level_set(&basis, &k)?;
            let cum = cumulative_stats(&basis, &k)?;
            #[derive(Serialize)]
            struct LevelSetOut<'a> {
                basis: &'a [u64],
                k: String,
                members: &'a [u64],
                g_eq: Option<u64>,
                h_eq: Option<u64>,
                c_eq: u64,
                s_eq: String,
                g_le: Option<u64>,
                h_ge: u64,
                c_le: u64,
                s_le: String,
            }
            let out = LevelSetOut {
                basis: basis.generators(),
                k: k.to_string(),
                members: &ls.members,
                g_eq: ls.g_eq,
                h_eq: ls.h_eq,
                c_eq: ls.c_eq,
                s_eq: ls.s_eq.to_string(),
                g_le: cum.g_le,
                h_ge: cum.h_ge,
                c_le: cum.c_le,
                s_le: cum.s_le.to_string(),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Spectrum {
            basis,
            s_max,
            format,
            output,
        } => {
            let basis = parse_basis(&basis)?;
            let rows: Vec<(u64, String)> = spectrum(&basis, s_max)?
                .into_iter()
                .map(|(s, k)| (s, k.to_string()))
                .collect();
            let text = rows_output(("s", "f_sp"), &rows, basis.generators(), format);
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Closed {
            basis,
            s,
            window,
            output,
        } => {
            let basis = parse_basis(&basis)?;
            let cert = detect_threshold(&basis, window)?;
            #[derive(Serialize)]
            struct ClosedOut {
                verdict: &'static str,
                certificate: CertificateOut,
                bundle: Option<BundleOut>,
            }
            let out = match theoremg_bundle(&basis, s, &cert) {
                Ok(bundle) => ClosedOut {
                    verdict: "ok",
                    certificate: CertificateOut::new(&cert),
                    bundle: Some(BundleOut::new(&bundle)),
                },
                Err(Error::BelowThreshold { .. }) => ClosedOut {
                    verdict: "below_threshold",
                    certificate: CertificateOut::new(&cert),
                    bundle: None,
                },
                Err(e) => return Err(e),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Threshold {
            basis,
            window,
            output,
        } => {
            let basis = parse_basis(&basis)?;
            let cert = detect_threshold(&basis, window)?;
            #[derive(Serialize)]
            struct ThresholdOut<'a> {
                basis: &'a [u64],
                #[serde(flatten)]
                certificate: CertificateOut,
            }
            let out = ThresholdOut {
                basis: basis.generators(),
                certificate: CertificateOut::new(&cert),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Quasipoly { basis, output } => {
            let basis = parse_basis(&basis)?;
            let st = gcd_structure(&basis);
            let qp = interpolate_quasipoly(&basis)?;
            #[derive(Serialize)]
            struct ConstituentOut {
                residue: u64,
                coefficients: Vec<String>,
            }
            #[derive(Serialize)]
            struct QuasipolyOut<'a> {
                basis: &'a [u64],
                period: u64,
                independent_mod_p: u64,
                constituents: Vec<ConstituentOut>,
            }
            let out = QuasipolyOut {
                basis: basis.generators(),
                period: qp.period(),
                independent_mod_p: st.m / st.p,
                constituents: qp
                    .constituents()
                    .iter()
                    .enumerate()
                    .map(|(r, c)| ConstituentOut {
                        residue: r as u64,
                        coefficients: c.coeffs().iter().map(ratio_string).collect(),
                    })
                    .collect(),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Genfun {
            basis,
            s,
            series,
            output,
        } => {
            let basis = parse_basis(&basis)?;
            let f_eq = f_eq_genfun(&basis, s);
            let f_ge = f_ge_genfun(&basis, s);
            #[derive(Serialize)]
            struct GenfunOut<'a> {
                basis: &'a [u64],
                s: u64,
                f_eq: PolyOut,
                f_ge: GfOut,
                #[serde(skip_serializing_if = "Option::is_none")]
                series: Option<Vec<String>>,
            }
            let out = GenfunOut {
                basis: basis.generators(),
                s,
                f_eq: PolyOut::new(&f_eq),
                f_ge: GfOut::new(&f_ge),
                series: series.map(|limit| {
                    series_expand(&f_ge, limit)
                        .iter()
                        .map(|c| c.to_string())
                        .collect()
                }),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializes");
            text.push('\n');
            Ok(write_output(output.as_ref(), &text))
        }

        Command::Verify { basis, horizon } => {
            let basis = parse_basis(&basis)?;
            let report = selfcheck::run(&basis, horizon)?;
            let mut stdout = std::io::stdout().lock();
            for check in &report.checks {
                if check.passed {
                    writeln!(stdout, "ok {}", check.name).expect("stdout");
                } else {
                    writeln!(stdout, "FAIL {}: {}", check.name, check.detail).expect("stdout");
                }
            }
            let passed = report.passed();
            writeln!(
                stdout,
                "{}: {} checks on basis {:?} at horizon {}",
                if passed { "PASS" } else { "FAIL" },
                report.checks.len(),
                report.basis,
                report.horizon
            )
            .expect("stdout");
            Ok(if passed { 0 } else { 1 })
        }
    }
}
