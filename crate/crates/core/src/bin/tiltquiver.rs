//! Command-line surface for the quiver engine.
//!
//! Deterministic, scriptable output: exit code 0 on success, 1 when a
//! verification fails, 2 on usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tiltquiver::admissible::{
    down_hull, is_down_admissible, is_up_admissible, minimal_down_stretches,
    minimal_up_stretches, reflect_down, reflect_up, AdmissibleSet,
};
use tiltquiver::algebra::{hom_basis, hom_dim, Rewriter};
use tiltquiver::arith::Prime;
use tiltquiver::center::{
    candidate_vector, central_loop, central_products, center_report, check_centrality,
    commutant_solve, restrict_to_interior, spans_equal, unit_candidate, CandidateKind,
    CentralityReport,
};
use tiltquiver::expr::{eval_word, parse_word, ExprError};
use tiltquiver::padic::PadicDigits;
use tiltquiver::quiver::{export_dot, export_json, Block};
use tiltquiver::variants::{
    donkin_factorize, end_basis, variant_center_matches, variant_dot, variant_json,
    variant_solve, variant_vertices, vertex, VariantKind, VARIANT_FIELD,
};

#[derive(Parser)]
#[command(name = "tiltquiver", version, about = "quiver combinatorics and rewriting")]
struct Cli {
    /// Display vertices as weights (v - 1) instead of v.
    #[arg(long, global = true)]
    weights: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantName {
    QuantumGeneric,
    Quantum,
    G1t,
    G2t,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positional expansion, generation, eve status, and digit set.
    Digits {
        v: u64,
        #[arg(short)]
        p: u32,
    },
    /// Minimal stretches and singleton hulls at a vertex.
    Admissible {
        v: u64,
        #[arg(short)]
        p: u32,
    },
    /// Reflect a vertex along a set.
    Reflect {
        v: u64,
        #[arg(short)]
        p: u32,
        #[arg(long, conflicts_with = "up")]
        down: bool,
        #[arg(long)]
        up: bool,
        /// Set in brace syntax, e.g. {2,1} or {5,4|1,0}.
        #[arg(short = 'S')]
        set: String,
    },
    /// Export the block of an eve as DOT or JSON.
    Quiver {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        e: u64,
        #[arg(short = 'N')]
        bound: u64,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Dimension of the morphism space between two vertices.
    Homdim {
        v: u64,
        w: u64,
        #[arg(short)]
        p: u32,
    },
    /// Basis words of the morphism space between two vertices.
    Hombasis {
        v: u64,
        w: u64,
        #[arg(short)]
        p: u32,
    },
    /// Normalize a word expression such as "e[4] U{0} D{1,0} e[16]".
    Normalize {
        #[arg(short)]
        p: u32,
        #[arg(long)]
        word: String,
    },
    /// Verify central elements on a block, optionally solving for the
    /// full commutant.
    Center {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        e: u64,
        #[arg(short = 'N')]
        bound: u64,
        #[arg(short = 'M')]
        margin: u64,
        #[arg(long)]
        solver: bool,
    },
    /// The degenerate variant algebras.
    Variant {
        #[arg(value_enum)]
        kind: VariantName,
        /// Chain or grid base (k for quantum, p for the G-variants).
        #[arg(short, long, default_value_t = 5)]
        base: u32,
        #[command(subcommand)]
        op: VariantOp,
    },
    /// Tensor-product factorization of a vertex.
    Donkin {
        v: u64,
        #[arg(short)]
        p: u32,
    },
}

#[derive(Subcommand)]
enum VariantOp {
    /// Vertices with |value| up to the bound.
    Vertices {
        #[arg(short = 'N')]
        bound: i64,
    },
    /// Quiver window over indices |i| <= bound.
    Quiver {
        #[arg(short = 'N')]
        bound: i64,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Endomorphism basis at an index.
    End { index: i64 },
    /// Solve for the commutant on |i| <= bound and compare with the
    /// predicted central families on |i| <= bound - margin.
    Center {
        #[arg(short = 'N')]
        bound: i64,
        #[arg(short = 'M')]
        margin: i64,
    },
}

fn shown(v: u64, weights: bool) -> u64 {
    if weights {
        v - 1
    } else {
        v
    }
}

fn shown_i(v: i64, weights: bool) -> i64 {
    if weights {
        v - 1
    } else {
        v
    }
}

fn set_string(indices: &[u32]) -> String {
    format!(
        "{{{}}}",
        indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn variant_kind(name: VariantName, base: u32) -> VariantKind {
    match name {
        VariantName::QuantumGeneric => VariantKind::QuantumGeneric,
        VariantName::Quantum => VariantKind::QuantumRoot(base),
        VariantName::G1t => VariantKind::G1T(base),
        VariantName::G2t => VariantKind::G2T(base),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run(cli: Cli) -> ExitCode {
    let weights = cli.weights;
    match cli.cmd {
        Cmd::Digits { v, p } => {
            let p = Prime::new(p);
            let d = PadicDigits::expand(v, p);
            println!(
                "{} gen={} eve={} D={}",
                d,
                d.generation(),
                if d.is_eve() { "yes" } else { "no" },
                set_string(&d.digit_set()),
            );
            ExitCode::SUCCESS
        }
        Cmd::Admissible { v, p } => {
            let p = Prime::new(p);
            let downs: Vec<String> = minimal_down_stretches(v, p)
                .into_iter()
                .map(|s| AdmissibleSet::from_stretch(s).to_string())
                .collect();
            let ups: Vec<String> = minimal_up_stretches(v, p)
                .into_iter()
                .map(|s| AdmissibleSet::from_stretch(s).to_string())
                .collect();
            println!("minimal down: {}", downs.join(" "));
            println!("minimal up:   {}", ups.join(" "));
            for i in PadicDigits::expand(v, p).digit_set() {
                let single = AdmissibleSet::parse(&format!("{{{i}}}")).expect("singleton");
                match down_hull(&single, v, p) {
                    Some(h) => println!("hull({{{i}}}) = {h}"),
                    None => println!("hull({{{i}}}) = none"),
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Reflect { v, p, down, up, set } => {
            let p = Prime::new(p);
            let set = match AdmissibleSet::parse(&set) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            if down == up {
                return usage_error("exactly one of --down/--up is required");
            }
            if down {
                if !is_down_admissible(&set, v, p) {
                    eprintln!("{set} is not down-admissible at {}", shown(v, weights));
                    return ExitCode::from(1);
                }
                println!("{}", shown(reflect_down(v, &set, p), weights));
            } else {
                if !is_up_admissible(&set, v, p) {
                    eprintln!("{set} is not up-admissible at {}", shown(v, weights));
                    return ExitCode::from(1);
                }
                println!("{}", shown(reflect_up(v, &set, p), weights));
            }
            ExitCode::SUCCESS
        }
        Cmd::Quiver { p, e, bound, format } => {
            let p = Prime::new(p);
            let block = Block::explore(e, bound, p);
            match format {
                Format::Dot => print!("{}", export_dot(&block)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&export_json(&block)).unwrap()),
            }
            ExitCode::SUCCESS
        }
        Cmd::Homdim { v, w, p } => {
            let p = Prime::new(p);
            println!("{}", hom_dim(v, w, p));
            ExitCode::SUCCESS
        }
        Cmd::Hombasis { v, w, p } => {
            let p = Prime::new(p);
            for word in hom_basis(v, w, p) {
                println!("{}", word.display(p));
            }
            ExitCode::SUCCESS
        }
        Cmd::Normalize { p, word } => {
            let p = Prime::new(p);
            let parsed = match parse_word(&word) {
                Ok(w) => w,
                Err(e @ ExprError::TargetMismatch { .. }) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
                Err(e) => return usage_error(e),
            };
            let mut rw = Rewriter::new(p);
            let m = match eval_word(&mut rw, &parsed) {
                Ok(m) => m,
                Err(e @ ExprError::TargetMismatch { .. }) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
                Err(e) => return usage_error(e),
            };
            if m.is_zero() {
                println!("0");
            } else {
                for (w, c) in &m.terms {
                    println!("{} * {}", c.value(), w.display(p));
                }
            }
            println!("{}", m.to_json());
            ExitCode::SUCCESS
        }
        Cmd::Center { p, e, bound, margin, solver } => {
            let p = Prime::new(p);
            if margin >= bound {
                return usage_error("margin must be smaller than the bound");
            }
            let interior = bound - margin;
            let block = Block::explore(e, bound, p);
            let mut rw = Rewriter::new(p);
            let mut all_ok = true;
            let mut candidates: Vec<(CandidateKind, CentralityReport)> = Vec::new();
            let mut built = vec![unit_candidate(&block, p)];
            for &v in &block.vertices {
                if PadicDigits::expand(v, p).is_eve() {
                    continue;
                }
                let c = central_loop(v, bound, &mut rw).expect("non-eve vertices carry loops");
                if c.kind == (CandidateKind::Loop { key: v }) {
                    built.push(c);
                }
            }
            for c in &built {
                let rep = check_centrality(c, &block, interior, &mut rw)
                    .expect("centrality check");
                all_ok &= rep.passed();
                candidates.push((c.kind.clone(), rep));
            }
            // All pairwise products of the loop sums must vanish.
            let mut products_ok = true;
            for a in built.iter().skip(1) {
                for b in built.iter().skip(1) {
                    if !central_products(a, b, &mut rw).expect("products").is_empty() {
                        products_ok = false;
                    }
                }
            }
            all_ok &= products_ok;
            let solved = if solver {
                let report = commutant_solve(&block, margin, &mut rw).expect("solver");
                let n = report.unknowns.columns.len();
                let vectors: Vec<Vec<u32>> = built
                    .iter()
                    .map(|c| {
                        restrict_to_interior(
                            &candidate_vector(c, &report.unknowns),
                            &report.unknowns,
                            report.interior_bound,
                        )
                    })
                    .collect();
                let matches = spans_equal(&report.interior_basis, &vectors, n, p);
                all_ok &= matches;
                println!(
                    "solver: unknowns={} rank={} nullity={} interior_dim={} basis_matches={}",
                    n,
                    report.rank,
                    report.basis.len(),
                    report.interior_basis.len(),
                    matches
                );
                Some(report)
            } else {
                None
            };
            println!(
                "candidates={} verified={} products_zero={}",
                candidates.len(),
                candidates.iter().filter(|(_, r)| r.passed()).count(),
                products_ok
            );
            let js = center_report(p, e, bound, margin, &candidates, solved.as_ref());
            println!("{}", serde_json::to_string_pretty(&js).unwrap());
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Variant { kind, base, op } => {
            let kind = variant_kind(kind, base);
            if let Err(e) = kind.validate() {
                return usage_error(e);
            }
            match op {
                VariantOp::Vertices { bound } => {
                    match variant_vertices(kind, bound) {
                        Ok(vs) => {
                            for v in vs {
                                println!(
                                    "i={} value={} row={} col={}",
                                    v.index,
                                    shown_i(v.value, weights),
                                    v.row,
                                    v.col
                                );
                            }
                            ExitCode::SUCCESS
                        }
                        Err(e) => usage_error(e),
                    }
                }
                VariantOp::Quiver { bound, format } => {
                    let window: Vec<i64> = window_indices(kind, bound);
                    match format {
                        Format::Dot => print!("{}", variant_dot(kind, &window, weights)),
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&variant_json(kind, &window, weights))
                                .unwrap()
                        ),
                    }
                    ExitCode::SUCCESS
                }
                VariantOp::End { index } => {
                    if vertex(kind, index).is_err() {
                        return usage_error(format!("no vertex with index {index}"));
                    }
                    for w in end_basis(kind, index) {
                        println!("{}", w.display(kind));
                    }
                    ExitCode::SUCCESS
                }
                VariantOp::Center { bound, margin } => {
                    if margin >= bound {
                        return usage_error("margin must be smaller than the bound");
                    }
                    let window = window_indices(kind, bound);
                    let interior = window_indices(kind, bound - margin);
                    let report = match variant_solve(kind, &window, &interior) {
                        Ok(r) => r,
                        Err(e) => return usage_error(e),
                    };
                    let matches = variant_center_matches(kind, &window, &interior, &report);
                    println!(
                        "variant={} field={} unknowns={} rank={} nullity={} interior_dim={} basis_matches={}",
                        kind.name(),
                        VARIANT_FIELD,
                        report.unknowns.columns.len(),
                        report.rank,
                        report.basis.len(),
                        report.interior_basis.len(),
                        matches
                    );
                    if matches {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
            }
        }
        Cmd::Donkin { v, p } => {
            if v == 0 {
                return usage_error("vertices start at 1");
            }
            let p = Prime::new(p);
            let f = donkin_factorize(v, p);
            println!("T({}) = {}", shown(v, true), f.display());
            let pruned: Vec<String> = f
                .without_steinberg()
                .iter()
                .map(|x| format!("T({})^({})", x.weight(), x.twist))
                .collect();
            println!("pruned: {}", pruned.join(" ⊗ "));
            println!("reconstructs: {}", f.reconstructs());
            if f.reconstructs() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Index window for a variant: naturals for the quantum chains,
/// symmetric integers otherwise.
fn window_indices(kind: VariantKind, bound: i64) -> Vec<i64> {
    match kind {
        VariantKind::QuantumGeneric | VariantKind::QuantumRoot(_) => (0..=bound).collect(),
        _ => (-bound..=bound).collect(),
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
