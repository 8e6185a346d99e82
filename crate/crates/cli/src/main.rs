//! Command-line front end for the primcob calculators.
//!
//! Exit code contract, fixed so CI can consume the tool:
//! 0 success / audit passed, 2 invalid flavor, 3 I/O or malformed input,
//! 4 audit failed, 5 stem outside the table and no extension supplied.
//! Reports go to stdout, errors to stderr. JSON output is byte-identical
//! across runs with the same configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use primcob::poincare::DEFAULT_TRUNCATION;
use primcob::ranks::{
    cobordism_rank, corollary_compare, rank_profile, BettiVector, Flavor, RankError,
};
use primcob::specseq::{
    build_e1_page, odd_torsion_audit, segal_audit, SpecSeqError, StableStemTable,
};
use primcob::umbrella::{run_verification, UmbrellaConfig, DEFAULT_GRID_HEIGHT};

const EXIT_BAD_FLAVOR: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_AUDIT_FAIL: u8 = 4;
const EXIT_STEM_UNKNOWN: u8 = 5;

/// Default audit depth for the odd-torsion check.
const DEFAULT_I_MAX: u32 = 11;

#[derive(Parser)]
#[command(
    name = "primcob",
    version,
    about = "Exact rank calculators for cobordism groups of prim maps with bounded singularities"
)]
struct Cli {
    /// Output format; JSON is schema-stable and byte-identical across runs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Per-degree ranks of the homotopy of the classifying space.
    Ranks {
        /// Normal structure: 'so' (oriented) or 'sp' (quaternionic).
        #[arg(long)]
        flavor: String,
        /// Codimension; required for 'so', fixed to 3 for 'sp'.
        #[arg(long)]
        k: Option<u32>,
        /// Singularity bound.
        #[arg(long)]
        r: u32,
        /// Largest degree to report.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        max_degree: u32,
    },
    /// Betti-weighted cobordism-group rank for a target manifold.
    CobordismRank {
        #[arg(long)]
        flavor: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        r: u32,
        /// JSON file {"dimension": d, "betti": [b0..bd]}.
        #[arg(long)]
        betti: PathBuf,
        /// Profile depth; defaults to the Betti dimension.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// First page of the quaternionic singularity spectral sequence.
    E1Page {
        #[arg(long, default_value_t = 3)]
        p_max: u32,
        #[arg(long, default_value_t = 10)]
        q_max: u32,
        /// JSON extension table for stems above 7.
        #[arg(long)]
        stem_file: Option<PathBuf>,
    },
    /// Enumerate image-order assignments for the differentials leaving
    /// one column of the infinite-order line.
    SegalAudit {
        #[arg(long)]
        p: u32,
        /// Also allow differentials into column 0 (sensitivity analysis).
        #[arg(long)]
        include_p0: bool,
        #[arg(long)]
        stem_file: Option<PathBuf>,
    },
    /// Check that odd torsion through a total degree is forced to die.
    OddTorsionAudit {
        #[arg(long, default_value_t = DEFAULT_I_MAX)]
        i_max: u32,
        #[arg(long)]
        stem_file: Option<PathBuf>,
    },
    /// Exact verification of the umbrella normal form on a rational grid.
    UmbrellaVerify {
        #[arg(long, default_value_t = DEFAULT_GRID_HEIGHT)]
        height: u32,
        /// Orthonormality reporting tolerance for the frames.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 200)]
        sphere_samples: usize,
        #[arg(long, default_value_t = 10_000)]
        pair_samples: usize,
    },
    /// Diff the closed partition formula against the chain-level ranks.
    CorollaryCompare {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        max_degree: u32,
    },
}

struct Output {
    json: serde_json::Value,
    table: String,
    csv: String,
    exit: u8,
}

struct Failure {
    message: String,
    exit: u8,
}

impl Failure {
    fn new(message: impl Into<String>, exit: u8) -> Self {
        Self {
            message: message.into(),
            exit,
        }
    }
}

impl From<RankError> for Failure {
    fn from(err: RankError) -> Self {
        let exit = match err {
            RankError::UnsupportedFlavor
            | RankError::UnknownFlavor(_)
            | RankError::QuaternionicCodimension(_)
            | RankError::MissingCodimension => EXIT_BAD_FLAVOR,
            RankError::BettiFormat(_) => EXIT_IO,
            RankError::DimensionMismatch { .. } => EXIT_IO,
        };
        Failure::new(err.to_string(), exit)
    }
}

impl From<SpecSeqError> for Failure {
    fn from(err: SpecSeqError) -> Self {
        let exit = match err {
            SpecSeqError::StemUnknown(_) => EXIT_STEM_UNKNOWN,
            SpecSeqError::ExtensionInvalid(_) | SpecSeqError::ExtensionOverlap(_) => EXIT_IO,
            _ => 1,
        };
        Failure::new(err.to_string(), exit)
    }
}

/// The centralized defaults, echoed into every report header.
fn defaults() -> serde_json::Value {
    json!({
        "max_degree": DEFAULT_TRUNCATION,
        "grid_height": DEFAULT_GRID_HEIGHT,
        "i_max": DEFAULT_I_MAX,
    })
}

fn defaults_line() -> String {
    format!(
        "# defaults: max_degree={DEFAULT_TRUNCATION} grid_height={DEFAULT_GRID_HEIGHT} i_max={DEFAULT_I_MAX}"
    )
}

fn envelope(
    command: &str,
    config: serde_json::Value,
    body: serde_json::Value,
) -> serde_json::Value {
    json!({
        "command": command,
        "config": config,
        "defaults": defaults(),
        "report": body,
    })
}

fn load_table(stem_file: &Option<PathBuf>) -> Result<StableStemTable, Failure> {
    let mut table = StableStemTable::builtin();
    if let Some(path) = stem_file {
        table.load_extension_file(path)?;
    }
    Ok(table)
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn cmd_ranks(flavor: &str, k: Option<u32>, r: u32, max_degree: u32) -> Result<Output, Failure> {
    let flavor: Flavor = flavor.parse()?;
    let profile = rank_profile(flavor, k, r, max_degree)?;
    let config = json!({
        "flavor": flavor,
        "k": profile.codimension(),
        "r": r,
        "max_degree": max_degree,
    });
    let rows: Vec<serde_json::Value> = (1..=max_degree)
        .map(|j| json!({"j": j, "rank": profile.rank(j)}))
        .collect();

    let mut table = format!(
        "# ranks: flavor={flavor} k={} r={r} max_degree={max_degree}\n{}\n",
        profile.codimension(),
        defaults_line()
    );
    let _ = writeln!(table, "{:>4}  {:>6}", "j", "rank");
    for j in 1..=max_degree {
        let _ = writeln!(table, "{:>4}  {:>6}", j, profile.rank(j));
    }
    let _ = writeln!(table, "nonzero degrees: {:?}", profile.nonzero_degrees());

    let mut csv = String::from("j,rank\n");
    for j in 1..=max_degree {
        let _ = writeln!(csv, "{},{}", j, profile.rank(j));
    }

    Ok(Output {
        json: envelope("ranks", config, json!({"profile": rows})),
        table,
        csv,
        exit: 0,
    })
}

fn cmd_cobordism_rank(
    flavor: &str,
    k: Option<u32>,
    r: u32,
    betti_path: &PathBuf,
    max_degree: Option<u32>,
) -> Result<Output, Failure> {
    let flavor: Flavor = flavor.parse()?;
    let raw = std::fs::read_to_string(betti_path)
        .map_err(|e| Failure::new(format!("{}: {e}", betti_path.display()), EXIT_IO))?;
    let betti = BettiVector::from_json_str(&raw)?;
    let depth = max_degree.unwrap_or(betti.dimension()).max(1);
    let profile = rank_profile(flavor, k, r, depth)?;
    let total = cobordism_rank(&profile, &betti)?;

    let contributions: Vec<serde_json::Value> = (1..=betti.dimension())
        .map(|j| {
            let b = betti.betti()[j as usize];
            let rank = profile.rank(j);
            json!({"j": j, "betti": b, "rank": rank, "product": b * rank})
        })
        .collect();
    let config = json!({
        "flavor": flavor,
        "k": profile.codimension(),
        "r": r,
        "betti_file": betti_path.display().to_string(),
        "max_degree": depth,
    });

    let mut table = format!(
        "# cobordism-rank: flavor={flavor} k={} r={r} betti={}\n{}\n",
        profile.codimension(),
        betti_path.display(),
        defaults_line()
    );
    let _ = writeln!(
        table,
        "{:>4}  {:>8}  {:>6}  {:>8}",
        "j", "betti", "rank", "product"
    );
    for j in 1..=betti.dimension() {
        let b = betti.betti()[j as usize];
        let rank = profile.rank(j);
        let _ = writeln!(table, "{:>4}  {:>8}  {:>6}  {:>8}", j, b, rank, b * rank);
    }
    let _ = writeln!(table, "total rank: {total}");

    let mut csv = String::from("j,betti,rank,product\n");
    for j in 1..=betti.dimension() {
        let b = betti.betti()[j as usize];
        let rank = profile.rank(j);
        let _ = writeln!(csv, "{j},{b},{rank},{}", b * rank);
    }
    let _ = writeln!(csv, "total,,,{total}");

    Ok(Output {
        json: envelope(
            "cobordism-rank",
            config,
            json!({"total": total, "contributions": contributions}),
        ),
        table,
        csv,
        exit: 0,
    })
}

fn cmd_e1_page(p_max: u32, q_max: u32, stem_file: &Option<PathBuf>) -> Result<Output, Failure> {
    let table_data = load_table(stem_file)?;
    let page = build_e1_page(p_max, q_max, &table_data);
    let config = json!({
        "p_max": p_max,
        "q_max": q_max,
        "stem_file": stem_file.as_ref().map(|p| p.display().to_string()),
    });
    let records = page.records();

    let table = format!(
        "# e1-page: p_max={p_max} q_max={q_max}\n{}\n{}",
        defaults_line(),
        page.render_text()
    );

    let mut csv = String::from("p,q,group\n");
    for record in &records {
        let _ = writeln!(
            csv,
            "{},{},{}",
            record.p,
            record.q,
            record.group.as_deref().unwrap_or("?")
        );
    }

    Ok(Output {
        json: envelope("e1-page", config, json!({"cells": to_json(&records)})),
        table,
        csv,
        exit: 0,
    })
}

fn cmd_segal_audit(
    p: u32,
    include_p0: bool,
    stem_file: &Option<PathBuf>,
) -> Result<Output, Failure> {
    let table_data = load_table(stem_file)?;
    // Page just big enough for the targets (p - r, 3p + r - 1).
    let page = build_e1_page(p.max(1), 4 * p, &table_data);
    let report = segal_audit(p, &page, include_p0)?;
    let config = json!({
        "p": p,
        "include_p0": include_p0,
        "stem_file": stem_file.as_ref().map(|f| f.display().to_string()),
    });

    let mut table = format!(
        "# segal-audit: p={p} include_p0={include_p0}\n{}\n",
        defaults_line()
    );
    let _ = writeln!(table, "index h({p}) = {}", report.index);
    for target in &report.targets {
        let _ = writeln!(
            table,
            "d^{} target: ({}, {}) = {} (order {})",
            target.r, target.p, target.q, target.group, target.order
        );
    }
    let _ = writeln!(
        table,
        "consistent assignments: {}",
        report.assignments.len()
    );
    for orders in &report.assignments {
        let _ = writeln!(table, "  {orders:?}");
    }
    for diff in &report.differentials {
        let _ = writeln!(
            table,
            "d^{}: image order in {}..={}, verdict: {}",
            diff.r, diff.min_image_order, diff.max_image_order, diff.verdict
        );
    }
    let _ = writeln!(
        table,
        "result: {}",
        if report.consistent { "PASS" } else { "FAIL" }
    );

    let mut csv = String::from("assignment,r,image_order\n");
    for (i, orders) in report.assignments.iter().enumerate() {
        for (idx, order) in orders.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{}", i, idx + 1, order);
        }
    }

    let exit = if report.consistent {
        0
    } else {
        EXIT_AUDIT_FAIL
    };
    Ok(Output {
        json: envelope("segal-audit", config, to_json(&report)),
        table,
        csv,
        exit,
    })
}

fn cmd_odd_torsion_audit(i_max: u32, stem_file: &Option<PathBuf>) -> Result<Output, Failure> {
    let table_data = load_table(stem_file)?;
    let p_max = ((i_max + 1) / 4).max(1);
    let q_max = i_max.max(3);
    let page = build_e1_page(p_max, q_max, &table_data);
    let report = odd_torsion_audit(i_max, &page)?;
    let config = json!({
        "i_max": i_max,
        "stem_file": stem_file.as_ref().map(|f| f.display().to_string()),
    });

    let mut table = format!("# odd-torsion-audit: i_max={i_max}\n{}\n", defaults_line());
    let _ = writeln!(
        table,
        "{:>3} {:>3} {:>6} {:>7} {:>7} {:>9}  verdict",
        "p", "q", "prime", "needed", "forced", "possible"
    );
    for cell in &report.cells {
        let _ = writeln!(
            table,
            "{:>3} {:>3} {:>6} {:>7} {:>7} {:>9}  {:?}",
            cell.p,
            cell.q,
            cell.prime,
            cell.valuation_needed,
            cell.valuation_forced,
            cell.valuation_possible,
            cell.verdict
        );
    }
    let _ = writeln!(table, "{}", report.conclusion);
    let _ = writeln!(
        table,
        "result: {}",
        if report.pass { "PASS" } else { "FAIL" }
    );

    let mut csv =
        String::from("p,q,prime,valuation_needed,valuation_forced,valuation_possible,verdict\n");
    for cell in &report.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{:?}",
            cell.p,
            cell.q,
            cell.prime,
            cell.valuation_needed,
            cell.valuation_forced,
            cell.valuation_possible,
            cell.verdict
        );
    }

    let exit = if report.pass { 0 } else { EXIT_AUDIT_FAIL };
    Ok(Output {
        json: envelope("odd-torsion-audit", config, to_json(&report)),
        table,
        csv,
        exit,
    })
}

fn cmd_umbrella_verify(
    height: u32,
    tolerance: f64,
    sphere_samples: usize,
    pair_samples: usize,
) -> Result<Output, Failure> {
    let cfg = UmbrellaConfig {
        height,
        tolerance,
        sphere_samples,
        pair_samples,
        ..UmbrellaConfig::default()
    };
    let report = run_verification(&cfg);
    let config = to_json(&cfg);

    let mut table = format!(
        "# umbrella-verify: height={height} tolerance={tolerance} sphere_samples={sphere_samples} pair_samples={pair_samples}\n{}\n",
        defaults_line()
    );
    let _ = writeln!(
        table,
        "grid: {} ({} axis values, {} points)",
        report.grid.axis_scheme, report.grid.axis_values, report.grid.points
    );
    let _ = writeln!(table, "singular points: {:?}", report.singular_points);
    let _ = writeln!(table, "section zero locus: {:?}", report.s1_zero_points);
    let _ = writeln!(
        table,
        "rank/section equivalence mismatches: {}",
        report.rank_equivalence_mismatches
    );
    let _ = writeln!(
        table,
        "origin rank: {} (map), {} (lift)",
        report.origin_rank, report.origin_lift_rank
    );
    let _ = writeln!(table, "second-order stratum empty: {}", report.sigma2_empty);
    let _ = writeln!(
        table,
        "negative control flagged: {}",
        !report.negative_control_sigma2_empty
    );
    let _ = writeln!(
        table,
        "lift injectivity: {} pairs, {} collisions, {} inversion failures",
        report.lift_pairs_checked, report.lift_collisions, report.lift_inversion_failures
    );
    let _ = writeln!(
        table,
        "boundary sweep: {} points, {} membership violations, {} frame failures",
        report.sphere.points,
        report.sphere.membership_violations,
        report.sphere.frame_failures.len()
    );
    let _ = writeln!(
        table,
        "result: {}",
        if report.pass { "PASS" } else { "FAIL" }
    );

    let mut csv = String::from("key,value\n");
    let _ = writeln!(csv, "grid_points,{}", report.grid.points);
    let _ = writeln!(csv, "singular_points,{}", report.singular_points.join(" "));
    let _ = writeln!(csv, "s1_zero_points,{}", report.s1_zero_points.join(" "));
    let _ = writeln!(
        csv,
        "equivalence_mismatches,{}",
        report.rank_equivalence_mismatches
    );
    let _ = writeln!(csv, "origin_rank,{}", report.origin_rank);
    let _ = writeln!(csv, "origin_lift_rank,{}", report.origin_lift_rank);
    let _ = writeln!(csv, "sigma2_empty,{}", report.sigma2_empty);
    let _ = writeln!(
        csv,
        "negative_control_sigma2_empty,{}",
        report.negative_control_sigma2_empty
    );
    let _ = writeln!(csv, "lift_collisions,{}", report.lift_collisions);
    let _ = writeln!(
        csv,
        "membership_violations,{}",
        report.sphere.membership_violations
    );
    let _ = writeln!(csv, "frame_failures,{}", report.sphere.frame_failures.len());
    let _ = writeln!(csv, "pass,{}", report.pass);

    let exit = if report.pass { 0 } else { EXIT_AUDIT_FAIL };
    Ok(Output {
        json: envelope("umbrella-verify", config, to_json(&report)),
        table,
        csv,
        exit,
    })
}

fn cmd_corollary_compare(k: u32, r: u32, max_degree: u32) -> Result<Output, Failure> {
    let report = corollary_compare(k, r, max_degree);
    let config = json!({"k": k, "r": r, "max_degree": max_degree});

    let table = format!(
        "# corollary-compare: k={k} r={r} max_degree={max_degree}\n{}\n{}",
        defaults_line(),
        report.render_text()
    );

    let mut csv = String::from("j,derived,printed,agree\n");
    for row in &report.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            row.j, row.derived, row.printed, row.agree
        );
    }

    // A diff tool: disagreement is reported data, not failure.
    Ok(Output {
        json: envelope("corollary-compare", config, to_json(&report)),
        table,
        csv,
        exit: 0,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Ranks {
            flavor,
            k,
            r,
            max_degree,
        } => cmd_ranks(flavor, *k, *r, *max_degree),
        Command::CobordismRank {
            flavor,
            k,
            r,
            betti,
            max_degree,
        } => cmd_cobordism_rank(flavor, *k, *r, betti, *max_degree),
        Command::E1Page {
            p_max,
            q_max,
            stem_file,
        } => cmd_e1_page(*p_max, *q_max, stem_file),
        Command::SegalAudit {
            p,
            include_p0,
            stem_file,
        } => cmd_segal_audit(*p, *include_p0, stem_file),
        Command::OddTorsionAudit { i_max, stem_file } => cmd_odd_torsion_audit(*i_max, stem_file),
        Command::UmbrellaVerify {
            height,
            tolerance,
            sphere_samples,
            pair_samples,
        } => cmd_umbrella_verify(*height, *tolerance, *sphere_samples, *pair_samples),
        Command::CorollaryCompare { k, r, max_degree } => {
            cmd_corollary_compare(*k, *r, *max_degree)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            match cli.format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&output.json).expect("serializable")
                    );
                }
                Format::Table => print!("{}", output.table),
                Format::Csv => print!("{}", output.csv),
            }
            ExitCode::from(output.exit)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}
