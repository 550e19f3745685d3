//! `bott` — dimension tables, splitting criteria, and proof-machinery checks
//! for Bott-class bundles on P^n and P^m x P^n.
//!
//! Exit codes: 0 = success / criterion met / scan clean; 1 = criterion not
//! met or violations found; 2 = usage or input error.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bott_core::bundle::{Bundle, Space};
use bott_core::cohomology::bott_dim;
use bott_core::cohomology::{cohomology, table, TableFormat};
use bott_core::criteria::{
    check_prop13, check_sv, check_thm21, is_acm, scan_ex23, scan_prop13_soundness, scan_soundness,
};
use bott_core::oracle::oracle_cohomology;
use bott_core::sequences::{
    certify_vanishing_chains, default_grid, glued_sequence, koszul_sequence, GluedSide, KoszulKind,
};

#[derive(Parser)]
#[command(name = "bott", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the cohomology vector h^0,...,h^d of a bundle at one twist.
    Cohom {
        #[command(flatten)]
        bundle: BundleSource,
        /// Twist, one integer per factor, e.g. `3` or `0,-2`.
        #[arg(long, allow_hyphen_values = true)]
        twist: String,
    },
    /// Print a table of cohomology vectors over a twist grid.
    Table {
        #[command(flatten)]
        bundle: BundleSource,
        /// Grid as `lo:hi` per factor, comma-separated, e.g. `-5:5,-5:5`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Output format: text, csv, or records.
        #[arg(long, default_value = "text")]
        format: TableFormat,
    },
    /// Decide a splitting or Buchsbaum criterion for a bundle.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Run an exhaustive or randomized scan.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Cross-check the closed-form dimensions against the matrix oracle.
    Oracle {
        /// Ambient dimension n of P^n.
        #[arg(short = 'n', long)]
        n: usize,
        /// Exterior power p of the cotangent sheaf.
        #[arg(short = 'p', long)]
        p: usize,
        /// Twist l.
        #[arg(short = 'l', long, allow_hyphen_values = true)]
        l: i64,
    },
    /// Verify proof machinery: Euler-exactness or vanishing chains.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// One-factor splitting criterion in cohomological degree p.
    Prop13 {
        #[command(flatten)]
        bundle: BundleSource,
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Two-factor splitting criterion at bidegree (p, q).
    Thm21 {
        #[command(flatten)]
        bundle: BundleSource,
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(short = 'q', long)]
        q: usize,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Stückrad–Vogel sufficient condition for Buchsbaumness.
    Sv {
        #[command(flatten)]
        bundle: BundleSource,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// No intermediate cohomology (splits into line bundles per Horrocks).
    Acm {
        #[command(flatten)]
        bundle: BundleSource,
    },
}

#[derive(Subcommand)]
enum ScanCmd {
    /// Exhaustive single-atom scan for the two-factor conditions on P^2 x P^2.
    Ex23 {
        /// Per-factor twist bound for enumerated atoms.
        #[arg(long, default_value_t = 6)]
        bound: i64,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Criterion-implies-containment soundness scan on random sums.
    Soundness {
        /// Space as `n` or `m,n`, e.g. `2,2`.
        #[arg(long)]
        space: String,
        /// Hypothesis degree p (two-factor spaces only).
        #[arg(short = 'p', long)]
        p: Option<usize>,
        /// Hypothesis degree q (two-factor spaces only).
        #[arg(short = 'q', long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 4)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        max_summands: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Alternating Euler sums vanish at every twist in the grid.
    Exactness {
        /// Koszul sequence kind: e1, e2, e3, or e4 (with -n, -r).
        #[arg(long, conflicts_with = "glued")]
        koszul: Option<KoszulKind>,
        #[arg(short = 'n', long, requires = "koszul")]
        n: Option<usize>,
        #[arg(short = 'r', long, requires = "koszul")]
        r: Option<usize>,
        /// Glued sequence side: phi or psi (with --bundle, -p, -q).
        #[arg(long)]
        glued: Option<GluedSide>,
        #[command(flatten)]
        bundle: OptionalBundleSource,
        #[arg(short = 'p', long)]
        p: Option<usize>,
        #[arg(short = 'q', long)]
        q: Option<usize>,
        /// Grid as `lo:hi` per factor; defaults to a sequence-sized window.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Four vanishing chains certifying the two-factor dimension chase.
    Chains {
        #[command(flatten)]
        bundle: BundleSource,
        #[arg(short = 'p', long)]
        p: usize,
        #[arg(short = 'q', long)]
        q: usize,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct BundleSource {
    /// Bundle file path, or inline notation like `W(1,0)xW(1,0) + O(0,-3)*2`.
    #[arg(long, allow_hyphen_values = true)]
    bundle: String,
    /// Space as `n` or `m,n`; defaults to dimension 2 per factor for inline
    /// notation, and must agree with the file for file input.
    #[arg(long)]
    space: Option<String>,
}

#[derive(Args)]
struct OptionalBundleSource {
    /// Bundle file path or inline notation (glued verification only).
    #[arg(long, allow_hyphen_values = true)]
    bundle: Option<String>,
    /// Space as `n` or `m,n`.
    #[arg(long)]
    space: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ReportFormat {
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!(
                "unknown report format `{other}` (use text or json)"
            )),
        }
    }
}

fn parse_space(text: &str) -> Result<Space, String> {
    let dims: Vec<usize> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad space `{text}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    Space::new(dims).map_err(|e| e.to_string())
}

fn parse_ints(text: &str) -> Result<Vec<i64>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer list `{text}`: {e}"))
        })
        .collect()
}

fn parse_ranges(text: &str) -> Result<Vec<(i64, i64)>, String> {
    text.split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| format!("bad range `{part}` (expected lo:hi)"))?;
            let lo = lo
                .trim()
                .parse::<i64>()
                .map_err(|e| format!("bad range `{part}`: {e}"))?;
            let hi = hi
                .trim()
                .parse::<i64>()
                .map_err(|e| format!("bad range `{part}`: {e}"))?;
            Ok((lo, hi))
        })
        .collect()
}

impl BundleSource {
    fn load(&self) -> Result<Bundle, String> {
        load_bundle(&self.bundle, self.space.as_deref())
    }
}

fn load_bundle(source: &str, space: Option<&str>) -> Result<Bundle, String> {
    if Path::new(source).is_file() {
        let text = fs::read_to_string(source).map_err(|e| format!("{source}: {e}"))?;
        let bundle = Bundle::parse_json(&text).map_err(|e| format!("{source}: {e}"))?;
        if let Some(flag) = space {
            let wanted = parse_space(flag)?;
            if *bundle.space() != wanted {
                return Err(format!(
                    "{source} describes a bundle on {}, but --space asked for {wanted}",
                    bundle.space()
                ));
            }
        }
        Ok(bundle)
    } else if source.trim_start().starts_with('{') {
        // Clearly attempted structured input, not a notation string.
        Bundle::parse_json(source).map_err(|e| e.to_string())
    } else {
        let space = match space {
            Some(flag) => parse_space(flag)?,
            None => {
                let arity = Bundle::compact_arity(source).map_err(|e| e.to_string())?;
                Space::new(vec![2; arity]).map_err(|e| e.to_string())?
            }
        };
        Bundle::parse_compact(source, space).map_err(|e| e.to_string())
    }
}

fn join_dims<T: std::fmt::Display>(dims: &[T]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn emit_report(format: ReportFormat, text: String, json: serde_json::Value) {
    match format {
        ReportFormat::Text => print!("{text}"),
        ReportFormat::Json => println!("{json}"),
    }
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Cohom { bundle, twist } => {
            let e = bundle.load()?;
            let t = parse_ints(&twist)?;
            let dims = cohomology(&e, &t).map_err(|e| e.to_string())?;
            println!("{}", join_dims(&dims));
            Ok(0)
        }
        Cmd::Table {
            bundle,
            range,
            format,
        } => {
            let e = bundle.load()?;
            let ranges = parse_ranges(&range)?;
            let tbl = table(&e, &ranges).map_err(|e| e.to_string())?;
            print!("{}", tbl.render(format));
            Ok(0)
        }
        Cmd::Check(check) => run_check(check),
        Cmd::Scan(scan) => run_scan(scan),
        Cmd::Oracle { n, p, l } => {
            let oracle = oracle_cohomology(n, p, l).map_err(|e| e.to_string())?;
            let closed: Vec<_> = (0..=n).map(|i| bott_dim(n, p, l, i)).collect();
            println!("closed form:   {}", join_dims(&closed));
            println!("matrix oracle: {}", join_dims(&oracle));
            if oracle == closed {
                println!("agree");
                Ok(0)
            } else {
                println!("DISAGREE");
                Ok(1)
            }
        }
        Cmd::Verify(verify) => run_verify(verify),
    }
}

fn run_check(cmd: CheckCmd) -> Result<u8, String> {
    match cmd {
        CheckCmd::Prop13 { bundle, p, format } => {
            let e = bundle.load()?;
            let r = check_prop13(&e, p).map_err(|e| e.to_string())?;
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.criterion_met))
        }
        CheckCmd::Thm21 {
            bundle,
            p,
            q,
            format,
        } => {
            let e = bundle.load()?;
            let r = check_thm21(&e, p, q).map_err(|e| e.to_string())?;
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.criterion_met))
        }
        CheckCmd::Sv { bundle, format } => {
            let e = bundle.load()?;
            let r = check_sv(&e).map_err(|e| e.to_string())?;
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.passes))
        }
        CheckCmd::Acm { bundle } => {
            let e = bundle.load()?;
            let (acm, verdict) = is_acm(&e).map_err(|e| e.to_string())?;
            println!("{verdict}");
            Ok(u8::from(!acm))
        }
    }
}

fn run_scan(cmd: ScanCmd) -> Result<u8, String> {
    match cmd {
        ScanCmd::Ex23 { bound, format } => {
            let r = scan_ex23(bound).map_err(|e| e.to_string())?;
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.is_unique_box_of_cotangents()))
        }
        ScanCmd::Soundness {
            space,
            p,
            q,
            bound,
            max_summands,
            samples,
            seed,
            format,
        } => {
            let space = parse_space(&space)?;
            let r = match space.arity() {
                1 => {
                    if p.is_some() || q.is_some() {
                        return Err(
                            "-p/-q apply only to two-factor spaces; the one-factor scan covers all p"
                                .into(),
                        );
                    }
                    scan_prop13_soundness(space.factor_dims()[0], bound)
                        .map_err(|e| e.to_string())?
                }
                _ => {
                    let (p, q) = match (p, q) {
                        (Some(p), Some(q)) => (p, q),
                        _ => return Err("two-factor soundness scans require -p and -q".into()),
                    };
                    scan_soundness(&space, p, q, bound, max_summands, samples, seed)
                        .map_err(|e| e.to_string())?
                }
            };
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.clean()))
        }
    }
}

fn run_verify(cmd: VerifyCmd) -> Result<u8, String> {
    match cmd {
        VerifyCmd::Exactness {
            koszul,
            n,
            r,
            glued,
            bundle,
            p,
            q,
            range,
            format,
        } => {
            let seq = match (koszul, glued) {
                (Some(kind), None) => {
                    let n = n.ok_or("--koszul requires -n")?;
                    let r = r.ok_or("--koszul requires -r")?;
                    koszul_sequence(n, r, kind).map_err(|e| e.to_string())?
                }
                (None, Some(side)) => {
                    let source = bundle
                        .bundle
                        .as_deref()
                        .ok_or("--glued requires --bundle")?;
                    let e = load_bundle(source, bundle.space.as_deref())?;
                    let p = p.ok_or("--glued requires -p")?;
                    let q = q.ok_or("--glued requires -q")?;
                    glued_sequence(&e, p, q, side).map_err(|e| e.to_string())?
                }
                _ => return Err("choose exactly one of --koszul or --glued".into()),
            };
            let ranges = match range {
                Some(text) => parse_ranges(&text)?,
                None => default_grid(seq.space()),
            };
            let rep = seq
                .verify_euler_exactness(&ranges)
                .map_err(|e| e.to_string())?;
            emit_report(format, rep.render_text(), rep.to_json());
            Ok(u8::from(!rep.exact()))
        }
        VerifyCmd::Chains {
            bundle,
            p,
            q,
            format,
        } => {
            let e = bundle.load()?;
            let r = certify_vanishing_chains(&e, p, q).map_err(|e| e.to_string())?;
            emit_report(format, r.render_text(), r.to_json());
            Ok(u8::from(!r.all_pass()))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
