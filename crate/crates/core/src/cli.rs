//! Command line front end.
//!
//! Exit codes: 0 success, 1 a checked statement failed, 2 usage, parse or
//! input errors, 3 a resource cap was exceeded.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::algebra::ConnectedSumAlgebra;
use crate::coboundary::{
    extend_any_cocycle, head_tail, head_tail_law, orbit_decomposition, restrict, solve_coboundary,
    Refinement,
};
use crate::error::{Error, Result};
use crate::format::{
    parse_blocks, parse_element, AlgebraSpec, CochainFile, DgAlgebraFile, GridReport, RunManifest,
};
use crate::gf2::BitVector;
use crate::hochschild::{hh_bar_oracle, kadeishvili_check, HhReport, KoszulCochains};
use crate::koszul::{admissible_count, verify_koszul, Caps, DEFAULT_CAP};
use crate::massey::{massey_product, strong_massey_check, trivial_defining_system, DgAlgebra};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "koszulhh",
    version,
    about = "Bigraded Hochschild cohomology of V ⊓ B over GF(2)"
)]
pub struct Cli {
    /// Guard on the number of admissible sequences enumerated per length.
    #[arg(long, global = true, env = "KOSZULHH_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: u128,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Record wall time in the manifest. Reports are then no longer
    /// byte-identical across runs.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct AlgebraArgs {
    #[arg(long, default_value_t = 0)]
    pub v_dim: usize,
    #[arg(long, default_value_t = 0)]
    pub atoms: usize,
    /// Coefficient subring as a partition of the atoms, e.g. `1,2;3`.
    #[arg(long)]
    pub subring: Option<String>,
}

impl AlgebraArgs {
    fn spec(&self) -> Result<AlgebraSpec> {
        Ok(AlgebraSpec {
            v_dim: self.v_dim,
            atoms: self.atoms,
            subring_blocks: self.subring.as_deref().map(parse_blocks).transpose()?,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// dim HH^{k,s} over a rectangle of bidegrees.
    HhGrid {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, allow_negative_numbers = true)]
        k_max: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -3)]
        s_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        s_max: i64,
    },
    /// Checks HH^{k,2-k} = 0 for 3 ≤ k ≤ k-max.
    Kadeishvili {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
    /// Checks that the Koszul complex is a resolution up to an internal degree.
    Koszul {
        #[arg(long, default_value_t = 0)]
        v_dim: usize,
        #[arg(long, default_value_t = 0)]
        atoms: usize,
        #[arg(long, default_value_t = 6)]
        max_internal_degree: usize,
    },
    /// Cohomology of the weight-truncated normalized bar cochains, compared
    /// with the Koszul answer.
    Bar {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, default_value_t = 8)]
        max_internal_degree: usize,
    },
    /// Writes a cocycle as an explicit coboundary ∂g.
    SolveCoboundary {
        /// Cochain file; otherwise the cochain is given inline.
        #[arg(long, conflicts_with_all = ["v_dim", "atoms", "subring"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        s: Option<i64>,
        /// `SEQ=BITS`, e.g. `x1,x2=011`; repeatable.
        #[arg(long = "value")]
        values: Vec<String>,
    },
    /// Extends a cocycle of bidegree (k, 1-k) from A to A⟨x⟩.
    Extend {
        #[arg(long)]
        input: PathBuf,
        /// The new element `x` as a bit string over the ambient atoms.
        #[arg(long)]
        x: String,
    },
    /// Massey products of H = V ⊓ B or of a dg-algebra file.
    Massey {
        #[arg(long, default_value_t = 2)]
        v_dim: usize,
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        /// Top degree of the truncation of V ⊓ B.
        #[arg(long, default_value_t = 6)]
        top: usize,
        #[arg(long, conflicts_with_all = ["v_dim", "atoms", "top"])]
        algebra: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// An explicit tuple `d:bits,d:bits,...`; disables sampling.
        #[arg(long, value_delimiter = ',')]
        classes: Vec<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Verification(_) | Error::NotAcyclicFibration(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Report {
    body: String,
    passed: bool,
    summary: String,
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let caps = Caps::new(cli.cap);
    let report = match &cli.command {
        Command::HhGrid {
            algebra,
            k_max,
            s_min,
            s_max,
        } => hh_grid(cli, start, &caps, algebra, *k_max, *s_min, *s_max)?,
        Command::Kadeishvili { algebra, k_max } => {
            let spec = algebra.spec()?;
            let r = kadeishvili_check(&spec.pair()?, *k_max, &caps)?;
            let summary = json!({ "passed": r.passed(), "failures": r.failures });
            let params = json!({ "vDim": spec.v_dim, "atoms": spec.atoms, "subringBlocks": spec.subring_blocks, "kMax": k_max });
            structured(
                cli,
                start,
                "kadeishvili",
                params,
                None,
                summary,
                "report",
                &r,
                r.passed(),
            )?
        }
        Command::Koszul {
            v_dim,
            atoms,
            max_internal_degree,
        } => {
            let r = verify_koszul(
                &ConnectedSumAlgebra::new(*v_dim, *atoms),
                *max_internal_degree,
                &caps,
            )?;
            let summary = json!({ "passed": r.passed(), "failures": r.failures });
            let params =
                json!({ "vDim": v_dim, "atoms": atoms, "maxInternalDegree": max_internal_degree });
            structured(
                cli,
                start,
                "koszul",
                params,
                None,
                summary,
                "report",
                &r,
                r.passed(),
            )?
        }
        Command::Bar {
            algebra,
            k,
            s,
            max_internal_degree,
        } => {
            let spec = algebra.spec()?;
            let pair = spec.pair()?;
            let koszul = KoszulCochains::new(pair.clone(), *k, &caps)?.hh(*k, *s);
            let bar = hh_bar_oracle(&pair, *k, *s, 1, *max_internal_degree, &caps)?;
            let agree = bar.stable_factors().all(|f| f.cohomology == koszul.hh);
            let summary = json!({ "koszulHh": koszul.hh, "agree": agree });
            let params = json!({ "vDim": spec.v_dim, "atoms": spec.atoms, "subringBlocks": spec.subring_blocks, "k": k, "s": s, "maxInternalDegree": max_internal_degree });
            structured(
                cli, start, "bar", params, None, summary, "report", &bar, agree,
            )?
        }
        Command::SolveCoboundary {
            input,
            algebra,
            k,
            s,
            values,
        } => {
            let file = match input {
                Some(path) => read_json::<CochainFile>(path)?,
                None => inline_cochain(algebra, *k, *s, values)?,
            };
            solve(cli, start, &caps, &file)?
        }
        Command::Extend { input, x } => extend(cli, start, &caps, &read_json(input)?, x)?,
        Command::Massey {
            v_dim,
            atoms,
            top,
            algebra,
            samples,
            max_n,
            seed,
            classes,
        } => {
            let (alg, source) = match algebra {
                Some(path) => (read_json::<DgAlgebraFile>(path)?.to_algebra()?, json!(path)),
                None => (
                    DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(*v_dim, *atoms), *top),
                    json!({ "vDim": v_dim, "atoms": atoms, "top": top }),
                ),
            };
            if classes.is_empty() {
                let r = strong_massey_check(&alg, *samples, *max_n, *seed)?;
                let summary =
                    json!({ "passed": r.passed(), "counterexamples": r.counterexamples.len() });
                let params = json!({ "algebra": source, "samples": samples, "maxN": max_n });
                structured(
                    cli,
                    start,
                    "massey",
                    params,
                    Some(*seed),
                    summary,
                    "report",
                    &r,
                    r.passed(),
                )?
            } else {
                let tuple = classes
                    .iter()
                    .map(|c| parse_element(&alg, c))
                    .collect::<Result<Vec<_>>>()?;
                let ds = trivial_defining_system(&alg, &tuple)?;
                let class = massey_product(&alg, &ds)?;
                let zero = class.is_zero(&alg);
                let body = json!({
                    "degree": class.degree(),
                    "representative": class.representative.coeffs.to_string(),
                    "reduced": alg.reduce(&class.representative).to_string(),
                    "zero": zero,
                });
                let summary = json!({ "zero": zero });
                let params = json!({ "algebra": source, "classes": classes });
                structured(
                    cli, start, "massey", params, None, summary, "product", &body, true,
                )?
            }
        }
    };
    let mut out = Outcome {
        code: if report.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        },
        stdout: String::new(),
        stderr: String::new(),
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &report.body)?;
            out.stderr = format!("{}\n", report.summary);
        }
        None => out.stdout = report.body,
    }
    Ok(out)
}

fn manifest(
    cli: &Cli,
    start: Instant,
    command: &str,
    params: serde_json::Value,
    seed: Option<u64>,
    summary: serde_json::Value,
) -> RunManifest {
    let mut params = params;
    params["cap"] = json!(cli.cap.to_string());
    let mut m = RunManifest::new(command, params, seed);
    m.summary = summary;
    if cli.timing {
        m.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    m
}

#[allow(clippy::too_many_arguments)]
fn structured(
    cli: &Cli,
    start: Instant,
    command: &str,
    params: serde_json::Value,
    seed: Option<u64>,
    summary: serde_json::Value,
    key: &str,
    payload: &impl Serialize,
    passed: bool,
) -> Result<Report> {
    if cli.format == Format::Csv {
        return Err(Error::InvalidArgument(format!(
            "{command} has no csv report; use --format json"
        )));
    }
    let line = summary.to_string();
    let m = manifest(cli, start, command, params, seed, summary);
    let mut doc = serde_json::Map::new();
    doc.insert("manifest".into(), serde_json::to_value(m)?);
    doc.insert(key.into(), serde_json::to_value(payload)?);
    Ok(Report {
        body: serde_json::to_string_pretty(&doc)? + "\n",
        passed,
        summary: line,
    })
}

fn hh_grid(
    cli: &Cli,
    start: Instant,
    caps: &Caps,
    algebra: &AlgebraArgs,
    k_max: i64,
    s_min: i64,
    s_max: i64,
) -> Result<Report> {
    let spec = algebra.spec()?;
    let pair = spec.pair()?;
    let results: Vec<HhReport> = if k_max < 0 || s_min > s_max {
        Vec::new()
    } else {
        for k in 0..=k_max as usize {
            let count = admissible_count(spec.v_dim, pair.subring().atom_count(), k);
            caps.check(
                format!(
                    "cells (k = {k}, s = {s_min}..={s_max}): admissible sequences of length {k}"
                ),
                count,
            )?;
        }
        let c = KoszulCochains::new(pair, k_max as usize, caps)?;
        let cells: Vec<(usize, i64)> = (0..=k_max as usize)
            .flat_map(|k| (s_min..=s_max).map(move |s| (k, s)))
            .collect();
        cells.par_iter().map(|&(k, s)| c.hh(k, s)).collect()
    };
    let nonzero: Vec<(usize, i64, usize)> = results
        .iter()
        .filter(|r| r.hh != 0)
        .map(|r| (r.k, r.s, r.hh))
        .collect();
    let summary = json!({ "cells": results.len(), "nonzero": nonzero });
    let line = summary.to_string();
    let body = match cli.format {
        Format::Csv => {
            let mut buf = Vec::new();
            crate::format::write_csv(&results, &mut buf)?;
            String::from_utf8(buf).expect("csv is ascii")
        }
        Format::Json => {
            let params = json!({ "vDim": spec.v_dim, "atoms": spec.atoms, "subringBlocks": spec.subring_blocks, "kMax": k_max, "sMin": s_min, "sMax": s_max });
            let report = GridReport {
                manifest: manifest(cli, start, "hh-grid", params, None, summary),
                algebra: spec,
                results,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
    };
    Ok(Report {
        body,
        passed: true,
        summary: line,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn inline_cochain(
    algebra: &AlgebraArgs,
    k: Option<usize>,
    s: Option<i64>,
    values: &[String],
) -> Result<CochainFile> {
    let (Some(k), Some(s)) = (k, s) else {
        return Err(Error::InvalidArgument(
            "an inline cochain needs --k and --s".into(),
        ));
    };
    let values = values
        .iter()
        .map(|v| {
            v.split_once('=')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("expected SEQ=BITS, got {v:?}")))
        })
        .collect::<Result<_>>()?;
    Ok(CochainFile {
        algebra: algebra.spec()?,
        k,
        s,
        values,
    })
}

fn solve(cli: &Cli, start: Instant, caps: &Caps, file: &CochainFile) -> Result<Report> {
    let pair = file.algebra.pair()?;
    let c = KoszulCochains::new(pair, file.k + 1, caps)?;
    let f = file.to_cochain(&c)?;
    let g = solve_coboundary(&c, &f)?;
    let dg = c.differential(&g)?;
    let ht = head_tail(&c, &f)?;
    let orbits = orbit_decomposition(c.basis(f.k));
    let check = json!({
        "differentialEqualsInput": dg == f,
        "headTailLawViolation": head_tail_law(c.basis(f.k), &ht),
        "orbits": orbits.len(),
        "stableOrbits": orbits.iter().filter(|o| o.stable).count(),
    });
    let passed = dg == f;
    let summary = json!({ "verified": passed, "support": g.support().count() });
    let params = json!({ "input": file });
    let payload = json!({ "g": CochainFile::from_cochain(&c, &g), "check": check });
    structured(
        cli,
        start,
        "solve-coboundary",
        params,
        None,
        summary,
        "result",
        &payload,
        passed,
    )
}

fn extend(cli: &Cli, start: Instant, caps: &Caps, file: &CochainFile, x: &str) -> Result<Report> {
    let pair = file.algebra.pair()?;
    let x: BitVector = x.parse()?;
    if x.len() != pair.subring().ambient_atoms() {
        return Err(Error::Parse(format!(
            "x needs {} bits",
            pair.subring().ambient_atoms()
        )));
    }
    let c = KoszulCochains::new(pair.clone(), file.k + 1, caps)?;
    let f = file.to_cochain(&c)?;
    if !c.differential(&f)?.is_zero() {
        return Err(Error::NotACocycle("∂f ≠ 0".into()));
    }
    let (fine, lift) = extend_any_cocycle(&c, &x, &f, caps)?;
    let r = Refinement::new(pair.subring(), &x)?;
    let restricted = restrict(&r, &c, &fine, &lift);
    let cocycle = fine.differential(&lift)?.is_zero();
    let passed = cocycle && restricted == f;
    let check = json!({ "cocycle": cocycle, "restrictsToInput": restricted == f });
    let summary = json!({ "verified": passed });
    let params = json!({ "input": file, "x": x.to_string() });
    let payload = json!({ "lift": CochainFile::from_cochain(&fine, &lift), "check": check });
    structured(
        cli, start, "extend", params, None, summary, "result", &payload, passed,
    )
}
