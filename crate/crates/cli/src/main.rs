//! Command-line front end: ingest graph files, run analyses, emit human
//! tables or machine-readable records (one JSON object per line).
//!
//! Exit codes: 0 success, 1 unreadable/invalid input, 2 precondition or
//! numerical failure.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nonweyl::bond::{bond_scattering_with, BondGraph};
use nonweyl::bounds::bound_report;
use nonweyl::error::Error;
use nonweyl::exact::{format_rat, RatMatrix};
use nonweyl::graph::MetricGraph;
use nonweyl::orbits::{expansion_polynomial, orbit_report, DEFAULT_ORBIT_CAP};
use nonweyl::reduction::{apply_reduction, verify_reduction, ReductionPlan};
use nonweyl::secular::{
    classify_weyl, resonance_families, resonances_in_disc, secular_polynomial, secular_value,
    SecularCoeffs, Verdict,
};
use output::{fmt_complex, fmt_in_ell, fmt_sig, parse_complex};

#[derive(Parser)]
#[command(
    name = "nonweyl",
    version,
    about = "Resolvent resonances of quantum graphs with leads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl/non-Weyl verdict, effective size and volume.
    Classify(CommonArgs),
    /// Exact secular polynomial, or the numeric determinant at --k.
    Secular {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluate det(e^{ikL}·S(k) − I) at this k (format `a+bi`)
        /// instead of computing the polynomial.
        #[arg(long)]
        k: Option<String>,
    },
    /// Resonance families; with --radius also all |k| ≤ R lattice points.
    Resonances {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Irreducible pseudo orbits up to a bond count.
    Orbits {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 6)]
        max_bonds: usize,
        /// Enumeration cap on cycles and pseudo-orbit collections.
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// Apply a ghost-edge deletion plan (default: one deletion per
    /// balanced vertex) and dump the reduced matrix.
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Plan file: JSON list of {"vertex": .., "bond": ..} records.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Structural effective-size bounds and the rank criterion.
    Bounds(CommonArgs),
    /// Exact cross-checks: pseudo-orbit expansion against the
    /// characteristic polynomial, and reduction invariance.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Graph input file (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable lines.
    Table,
    /// One JSON object per line.
    Records,
}

/// Append a line to the in-memory output buffer (writing to a `Vec<u8>`
/// cannot fail).
macro_rules! out {
    ($dst:expr, $($arg:tt)*) => {
        writeln!($dst, $($arg)*).expect("write to memory buffer")
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut buffer = Vec::new();
    let code = match run(cli, &mut buffer) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    };
    // A closed pipe downstream (e.g. `nonweyl ... | head`) is not an
    // error; anything else failing on stdout is.
    if let Err(e) = std::io::stdout().write_all(&buffer) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    code
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 1,
        _ => 2,
    }
}

fn load_graph(path: &Path) -> Result<MetricGraph, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let g = MetricGraph::from_json_str(&text)?;
    let report = g.validate();
    if !report.is_valid() {
        let msgs: Vec<&str> = report.violations.iter().map(|v| v.message.as_str()).collect();
        return Err(Error::Parse(msgs.join("; ")));
    }
    Ok(g)
}

fn run(cli: Cli, w: &mut Vec<u8>) -> Result<(), Error> {
    match cli.command {
        Command::Classify(common) => cmd_classify(w, &common),
        Command::Secular { common, k } => cmd_secular(w, &common, k.as_deref()),
        Command::Resonances { common, radius } => cmd_resonances(w, &common, radius),
        Command::Orbits { common, max_bonds, cap } => cmd_orbits(w, &common, max_bonds, cap),
        Command::Reduce { common, plan } => cmd_reduce(w, &common, plan.as_deref()),
        Command::Bounds(common) => cmd_bounds(w, &common),
        Command::Verify { common, cap } => cmd_verify(w, &common, cap),
    }
}

fn cmd_classify(w: &mut Vec<u8>, common: &CommonArgs) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let class = classify_weyl(&g)?;
    let ell = g.common_length()?;
    let n_bal = g.balanced_vertices().len();
    let verdict = match class.verdict {
        Verdict::Weyl => "Weyl",
        Verdict::NonWeyl => "non-Weyl",
    };
    match common.format {
        Format::Table => {
            out!(w,
                "{verdict}, W = {}, vol = {}",
                fmt_in_ell(&class.w, &ell),
                fmt_in_ell(&class.volume, &ell)
            );
            out!(w, "ℓ = {}, balanced vertices: {n_bal}", format_rat(&ell));
        }
        Format::Records => {
            out!(w,
                "{}",
                json!({
                    "analysis": "classify",
                    "verdict": verdict,
                    "w_over_ell": format_rat(&(&class.w / &ell)),
                    "volume_over_ell": format_rat(&(&class.volume / &ell)),
                    "ell": format_rat(&ell),
                    "n_balanced": n_bal,
                })
            );
        }
    }
    Ok(())
}

fn cmd_secular(w: &mut Vec<u8>, common: &CommonArgs, k: Option<&str>) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    if let Some(k_str) = k {
        let k = parse_complex(k_str)
            .ok_or_else(|| Error::Parse(format!("cannot parse k = `{k_str}`")))?;
        let value = secular_value(&g, k)?;
        match common.format {
            Format::Table => {
                out!(w,
                    "det(e^(ikL)·S(k) - I) at k = {}: {}  (|.| = {})",
                    fmt_complex(k),
                    fmt_complex(value),
                    fmt_sig(value.norm())
                );
            }
            Format::Records => {
                out!(w,
                    "{}",
                    json!({
                        "analysis": "secular-value",
                        "k": fmt_complex(k),
                        "value": fmt_complex(value),
                        "abs": value.norm(),
                    })
                );
            }
        }
        return Ok(());
    }
    let sp = secular_polynomial(&g)?;
    let two_n = 2 * g.edge_count();
    match &sp.poly {
        SecularCoeffs::Exact(p) => match common.format {
            Format::Table => {
                out!(w, "P(z) = {},  z = e^(ikℓ), ℓ = {}", p.display_in("z"), format_rat(&sp.ell));
                out!(w,
                    "degree {} of {two_n}, zero eigenvalues of S: {}",
                    p.degree(),
                    sp.n_zero_eigs
                );
            }
            Format::Records => {
                let coeffs: Vec<String> = p.coeffs().iter().map(format_rat).collect();
                out!(w,
                    "{}",
                    json!({
                        "analysis": "secular",
                        "coefficients": coeffs,
                        "degree": p.degree(),
                        "n_zero_eigenvalues": sp.n_zero_eigs,
                        "ell": format_rat(&sp.ell),
                    })
                );
            }
        },
        SecularCoeffs::Complex(p) => {
            let coeffs: Vec<String> = p.coeffs().iter().map(|&c| fmt_complex(c)).collect();
            match common.format {
                Format::Table => {
                    out!(w, "P(z) coefficients (complex, ascending): {}", coeffs.join(", "));
                    out!(w,
                        "degree {} of {two_n}, zero eigenvalues of S: {}",
                        p.degree(),
                        sp.n_zero_eigs
                    );
                }
                Format::Records => {
                    out!(w,
                        "{}",
                        json!({
                            "analysis": "secular",
                            "coefficients": coeffs,
                            "degree": p.degree(),
                            "n_zero_eigenvalues": sp.n_zero_eigs,
                            "ell": format_rat(&sp.ell),
                        })
                    );
                }
            }
        }
    }
    Ok(())
}

fn cmd_resonances(w: &mut Vec<u8>, common: &CommonArgs, radius: Option<f64>) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let sp = secular_polynomial(&g)?;
    let families = resonance_families(&g)?;
    match common.format {
        Format::Table => {
            out!(w,
                "resonance families (k-plane multiplicities, twice the energy-plane count), ℓ = {}:",
                format_rat(&sp.ell)
            );
            for f in &families {
                out!(w,
                    "  c = {} (r = {}, phi = {}), multiplicity {}: k_n = (-phi + 2nπ + i·ln r)/ℓ",
                    fmt_complex(f.c),
                    fmt_sig(f.r),
                    fmt_sig(f.phi),
                    f.multiplicity
                );
            }
            if let Some(radius) = radius {
                let disc = resonances_in_disc(&families, radius, &sp.ell);
                out!(w, "resonances with |k| <= {}: {}", fmt_sig(radius), disc.count);
                for (k, mult) in &disc.points {
                    out!(w, "  k = {} (multiplicity {mult})", fmt_complex(*k));
                }
            }
        }
        Format::Records => {
            for f in &families {
                out!(w,
                    "{}",
                    json!({
                        "analysis": "resonance-family",
                        "c": fmt_complex(f.c),
                        "r": f.r,
                        "phi": f.phi,
                        "multiplicity": f.multiplicity,
                        "convention": "k-plane",
                    })
                );
            }
            if let Some(radius) = radius {
                let disc = resonances_in_disc(&families, radius, &sp.ell);
                for (k, mult) in &disc.points {
                    out!(w,
                        "{}",
                        json!({
                            "analysis": "resonance-point",
                            "k": fmt_complex(*k),
                            "multiplicity": mult,
                        })
                    );
                }
                out!(w,
                    "{}",
                    json!({
                        "analysis": "disc-count",
                        "radius": radius,
                        "count": disc.count,
                    })
                );
            }
        }
    }
    Ok(())
}

fn cmd_orbits(w: &mut Vec<u8>, common: &CommonArgs, max_bonds: usize, cap: usize) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let bg = BondGraph::build(&g);
    let orbits = orbit_report(&g, max_bonds, cap)?;
    let label = |orbit: &nonweyl::orbits::PeriodicOrbit| -> Vec<String> {
        orbit.bonds.iter().map(|&b| bg.label(&g, b)).collect()
    };
    match common.format {
        Format::Table => {
            out!(w, "irreducible pseudo orbits up to {max_bonds} bonds:");
            let mut current = usize::MAX;
            for po in &orbits {
                if po.total_bonds != current {
                    current = po.total_bonds;
                    out!(w, "on {current} bonds:");
                }
                let cycles: Vec<String> = po
                    .orbits
                    .iter()
                    .map(|o| format!("({})", label(o).join(" ")))
                    .collect();
                let cycles = if cycles.is_empty() {
                    "(empty)".to_string()
                } else {
                    cycles.join(" ")
                };
                out!(w,
                    "  m = {}, amplitude = {}: {}",
                    po.m,
                    format_rat(&po.amplitude),
                    cycles
                );
            }
        }
        Format::Records => {
            for po in &orbits {
                let cycles: Vec<Vec<String>> = po.orbits.iter().map(&label).collect();
                out!(w,
                    "{}",
                    json!({
                        "analysis": "pseudo-orbit",
                        "bonds": cycles,
                        "m": po.m,
                        "total_bonds": po.total_bonds,
                        "amplitude": format_rat(&po.amplitude),
                    })
                );
            }
        }
    }
    Ok(())
}

fn matrix_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rat(&m[(i, j)])).collect())
        .collect()
}

fn cmd_reduce(w: &mut Vec<u8>, common: &CommonArgs, plan_path: Option<&Path>) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let bg = BondGraph::build(&g);
    let s = bond_scattering_with(&g, &bg)?;
    let s = s.as_exact()?.clone();
    let plan = match plan_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            ReductionPlan::from_json_str(&text, &g, &bg)?
        }
        None => ReductionPlan::full_default(&g, &bg),
    };
    let reduced = apply_reduction(&g, &bg, &s, &plan)?;
    let verified = verify_reduction(&s, &reduced);
    match common.format {
        Format::Table => {
            for step in &plan.steps {
                out!(w,
                    "delete bond {} at vertex {}",
                    bg.label(&g, step.bond),
                    g.vertices()[step.vertex].id
                );
            }
            for ghost in &reduced.ghost_entries {
                out!(w,
                    "ghost entry: row {}, column {}, amplitude {}",
                    bg.label(&g, ghost.row),
                    bg.label(&g, ghost.col),
                    format_rat(&ghost.amplitude)
                );
            }
            out!(w, "reduced matrix:");
            for row in matrix_rows(&reduced.s_reduced) {
                out!(w, "  [{}]", row.join(", "));
            }
            out!(w,
                "resonance condition preserved: {}",
                if verified { "yes" } else { "NO" }
            );
        }
        Format::Records => {
            for step in &plan.steps {
                out!(w,
                    "{}",
                    json!({
                        "analysis": "reduction-step",
                        "vertex": g.vertices()[step.vertex].id,
                        "bond": bg.label(&g, step.bond),
                    })
                );
            }
            for ghost in &reduced.ghost_entries {
                out!(w,
                    "{}",
                    json!({
                        "analysis": "ghost-entry",
                        "row": bg.label(&g, ghost.row),
                        "col": bg.label(&g, ghost.col),
                        "amplitude": format_rat(&ghost.amplitude),
                    })
                );
            }
            out!(w,
                "{}",
                json!({
                    "analysis": "reduced-matrix",
                    "zero_columns": reduced.zero_columns.iter().map(|&b| bg.label(&g, b)).collect::<Vec<_>>(),
                    "rows": matrix_rows(&reduced.s_reduced),
                    "verified": verified,
                })
            );
        }
    }
    if verified {
        Ok(())
    } else {
        Err(Error::InvariantViolated(
            "reduction changed the resonance condition".into(),
        ))
    }
}

fn cmd_bounds(w: &mut Vec<u8>, common: &CommonArgs) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let report = bound_report(&g)?;
    let ell = g.common_length()?;
    match common.format {
        Format::Table => {
            out!(w,
                "volume = {}, n_bal = {}, n_nonneig = {}",
                fmt_in_ell(&report.volume, &ell),
                report.n_bal,
                report.n_nonneig
            );
            out!(w,
                "bounds: W <= {} (balanced), W <= {} (with isolated balanced)",
                fmt_in_ell(&report.bound_bal, &ell),
                fmt_in_ell(&report.bound_main, &ell)
            );
            match &report.bound_square {
                Some(b) => {
                    let squares: Vec<String> = report
                        .squares
                        .iter()
                        .map(|q| {
                            let ids: Vec<&str> =
                                q.iter().map(|&v| g.vertices()[v].id.as_str()).collect();
                            format!("({})", ids.join(" "))
                        })
                        .collect();
                    out!(w,
                        "balanced squares without diagonals: {} => W <= {}",
                        squares.join(", "),
                        fmt_in_ell(b, &ell)
                    );
                }
                None => out!(w, "balanced squares without diagonals: none"),
            }
            out!(w,
                "rank S = {}, rank S^2 = {}, strict drop: {}",
                report.rank_s,
                report.rank_s2,
                if report.strict { "yes" } else { "no" }
            );
            out!(w, "W = {}", fmt_in_ell(&report.w_actual, &ell));
        }
        Format::Records => {
            out!(w,
                "{}",
                json!({
                    "analysis": "bounds",
                    "volume_over_ell": format_rat(&(&report.volume / &ell)),
                    "n_bal": report.n_bal,
                    "n_nonneig": report.n_nonneig,
                    "bound_bal_over_ell": format_rat(&(&report.bound_bal / &ell)),
                    "bound_main_over_ell": format_rat(&(&report.bound_main / &ell)),
                    "squares": report.squares.iter()
                        .map(|q| q.iter().map(|&v| g.vertices()[v].id.clone()).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "bound_square_over_ell": report.bound_square.as_ref().map(|b| format_rat(&(b / &ell))),
                    "w_over_ell": format_rat(&(&report.w_actual / &ell)),
                    "rank_s": report.rank_s,
                    "rank_s2": report.rank_s2,
                    "strict": report.strict,
                })
            );
        }
    }
    Ok(())
}

fn cmd_verify(w: &mut Vec<u8>, common: &CommonArgs, cap: usize) -> Result<(), Error> {
    let g = load_graph(&common.input)?;
    let expansion = expansion_polynomial(&g, cap)?;
    let secular = secular_polynomial(&g)?;
    let poly_ok = expansion.poly.as_exact()? == secular.poly.as_exact()?;

    let bg = BondGraph::build(&g);
    let s = bond_scattering_with(&g, &bg)?.as_exact()?.clone();
    let plan = ReductionPlan::full_default(&g, &bg);
    let reduced = apply_reduction(&g, &bg, &s, &plan)?;
    let reduction_ok = verify_reduction(&s, &reduced);
    let plan_labels: Vec<String> = plan.steps.iter().map(|st| bg.label(&g, st.bond)).collect();

    match common.format {
        Format::Table => {
            out!(w,
                "pseudo-orbit expansion == characteristic polynomial: {}",
                if poly_ok { "ok" } else { "MISMATCH" }
            );
            out!(w,
                "reduction invariance (plan: {}): {}",
                if plan_labels.is_empty() {
                    "empty".to_string()
                } else {
                    plan_labels.join(", ")
                },
                if reduction_ok { "ok" } else { "MISMATCH" }
            );
        }
        Format::Records => {
            out!(w,
                "{}",
                json!({
                    "analysis": "verify",
                    "expansion_equals_charpoly": poly_ok,
                    "reduction_preserves_polynomial": reduction_ok,
                    "plan": plan_labels,
                })
            );
        }
    }
    if poly_ok && reduction_ok {
        Ok(())
    } else {
        Err(Error::InvariantViolated(
            "exact cross-check failed".into(),
        ))
    }
}
