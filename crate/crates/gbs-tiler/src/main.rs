//! Command-line front end for the gbs-core toolkit.
//!
//! Exit discipline: flag and argument-value problems exit 2 with a
//! message on stderr; failures discovered while working (unreadable or
//! invalid input files, validation violations, unverified witnesses)
//! exit 1. Outputs are deterministic for identical invocations, files
//! are written atomically, and the ball cap honors `GBS_BALL_CAP`.
//!
//! Patch files begin with a one-line header naming the patch kind, its
//! group and its radius (`flowpatch F2 radius 3`); rectangular windows
//! keep their self-describing `window` header. `validate`, `scan-periods`
//! and `render` dispatch on that first line.

mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::panic;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand, ValueEnum};

use gbs_core::flow::{
    approach_sequence, flow_patch_from_word, parse_flow_patch, render_flow_patch,
    validate_flow_patch, FlowWord,
};
use gbs_core::fold::{
    fold, higher_block, parse_folded_patch, parse_tileset, parse_z2_patch, render_folded_patch,
    render_tileset, render_z2_patch, rotate_tileset, unfold, validate_folded, validate_z2_patch,
    Z2Patch, Z2Tileset,
};
use gbs_core::gbs::{
    fundamental_presentation, parse_gbs_graph, spanning_tree, weak_aperiodicity_witness,
    whyte_class, GbsGraph, WitnessOutcome,
};
use gbs_core::group::{default_ball_cap, parse_word, render_word, Group, Letter};
use gbs_core::height::{alpha, beta, lambda_word, HeightContext};
use gbs_core::locked::{
    canonical_locked_patch, parse_locked_patch, parse_quotient, render_locked_patch,
    validate_locked, FiniteQuotient,
};
use gbs_core::patch::{scan_periods, PeriodScan, PeriodStatus};
use gbs_core::rat::{fmt_ratio, parse_ratio};
use gbs_core::verify;
use gbs_core::wang::{
    build_bs_config, parse_bs_patch, render_bs_patch, tile_colors, validate_bs_patch, FTag,
};

const BS23: Group = Group::Bs { m: 2, n: 3 };

#[derive(Parser)]
#[command(
    name = "gbs-tiler",
    version,
    about = "Flows, height functions and aperiodic tilings over generalized Baumslag-Solitar groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Dot,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical normal-form key of a word
    Normalize {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
    },
    /// List the ball of a given radius in breadth-first order
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
    },
    /// Print the fundamental presentation of a labeled graph
    Presentation {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Derive and verify an aperiodicity witness subgroup for a graph
    Witness {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the quasi-isometry class of a graph's group
    Classify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Build the flow patch of a word restricted to a ball
    FlowBuild {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the local flow rules of a flow patch file
    FlowValidate { file: PathBuf },
    /// Print the approach sequence from one flow word toward another
    Approach {
        #[arg(long, default_value = "F2")]
        group: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        steps: usize,
    },
    /// Print the height statistics of a word
    Lambda {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        /// Flow word defining the section for the relative height
        #[arg(long)]
        flow: Option<String>,
    },
    /// Print the Wang tile of a branch tag at a point of the circle
    Tile {
        #[arg(long)]
        tag: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        lambda: String,
    },
    /// Build a tiled configuration patch over BS(2,3)
    BuildBs {
        #[arg(long)]
        word: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate any patch file, dispatching on its header
    Validate {
        file: PathBuf,
        /// Tileset file, required for z2 windows and folded patches
        #[arg(long)]
        tileset: Option<PathBuf>,
        /// Quotient file, required for locked patches
        #[arg(long)]
        quotient: Option<PathBuf>,
        /// Comma-separated kernel generator words, required for locked patches
        #[arg(long)]
        kernel: Option<String>,
    },
    /// Scan a patch for short periods and report the verdicts
    ScanPeriods {
        file: PathBuf,
        #[arg(long)]
        max_len: u32,
        #[arg(long, default_value_t = 5)]
        min_overlap: usize,
        /// Quotient file, required for locked patches
        #[arg(long)]
        quotient: Option<PathBuf>,
    },
    /// Fold a rectangular window along the ray of a word
    Fold {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value = "F2xZ")]
        group: String,
        /// Window file; without it an all-zeros window of matching size is used
        #[arg(long)]
        patch: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfold a folded patch back into a rectangular window
    Unfold {
        file: PathBuf,
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotate a tileset by a quarter turn
    RotateTileset {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recode a tileset by its valid rectangular windows
    HigherBlock {
        file: PathBuf,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the canonical patch of a locked shift
    LockedBuild {
        #[arg(long)]
        quotient: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a locked patch against its quotient and kernel generators
    LockedValidate {
        file: PathBuf,
        #[arg(long)]
        quotient: PathBuf,
        /// Comma-separated kernel generator words
        #[arg(long)]
        kernel: String,
    },
    /// Render a patch file as DOT or SVG
    Render {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: RenderFormat,
        /// Quotient file, required for locked patches
        #[arg(long)]
        quotient: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite and emit a machine-readable report
    VerifyPaper {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated criterion ids to run instead of the whole suite
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CmdError {
    Usage(String),
    Failed(String),
}

fn usage<T, E: fmt::Display>(r: Result<T, E>) -> Result<T, CmdError> {
    r.map_err(|e| CmdError::Usage(e.to_string()))
}

fn failed<T, E: fmt::Display>(r: Result<T, E>) -> Result<T, CmdError> {
    r.map_err(|e| CmdError::Failed(e.to_string()))
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => process::exit(code),
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
        Err(CmdError::Failed(msg)) => {
            eprintln!("error: {msg}");
            process::exit(1);
        }
    }
}

fn parse_group(s: &str) -> Result<Group, CmdError> {
    usage(s.parse::<Group>())
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::Failed(format!("{}: {e}", path.display())))
}

fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut f = tempfile::NamedTempFile::new_in(dir)?;
    f.write_all(content.as_bytes())?;
    f.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CmdError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => write_atomic(path, content)
            .map_err(|e| CmdError::Failed(format!("{}: {e}", path.display()))),
    }
}

fn load_graph(path: &Path) -> Result<GbsGraph, CmdError> {
    failed(parse_gbs_graph(&read_file(path)?))
}

fn load_tileset(path: &Path) -> Result<Z2Tileset, CmdError> {
    failed(parse_tileset(&read_file(path)?))
}

fn load_quotient(path: &Path) -> Result<FiniteQuotient, CmdError> {
    failed(parse_quotient(&read_file(path)?))
}

/// A finite word argument names its periodic infinite extension: repeat
/// it until at least `needed` letters are available. The repetition must
/// itself be a valid flow word, so a word whose last letter cancels its
/// first is rejected here.
fn extend_flow_word(w: &FlowWord, needed: usize) -> Result<FlowWord, CmdError> {
    if w.len() >= needed || w.is_empty() {
        return Ok(w.clone());
    }
    let mut letters = Vec::with_capacity(needed + w.len());
    while letters.len() < needed {
        letters.extend_from_slice(w.letters());
    }
    usage(FlowWord::new(w.group, letters))
}

fn parse_kernel(s: &str) -> Result<Vec<Vec<Letter>>, CmdError> {
    let mut out = Vec::new();
    for w in s.split(',') {
        let w = w.trim();
        if !w.is_empty() {
            out.push(usage(parse_word(w))?);
        }
    }
    if out.is_empty() {
        return Err(CmdError::Usage(
            "the kernel generator list is empty".to_string(),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum PatchKind {
    Flow,
    Bs,
    Folded,
    Locked,
    Z2,
}

impl PatchKind {
    fn name(self) -> &'static str {
        match self {
            PatchKind::Flow => "flowpatch",
            PatchKind::Bs => "bspatch",
            PatchKind::Folded => "foldedpatch",
            PatchKind::Locked => "lockedpatch",
            PatchKind::Z2 => "z2patch",
        }
    }
}

struct RawPatch {
    kind: PatchKind,
    group: Group,
    radius: u32,
    body: String,
}

fn patch_header(kind: PatchKind, group: &Group, radius: u32) -> String {
    format!("{} {group} radius {radius}\n", kind.name())
}

fn read_patch(path: &Path) -> Result<RawPatch, CmdError> {
    let text = read_file(path)?;
    let first = text.lines().next().unwrap_or("").trim().to_string();
    if first.starts_with("window") {
        // Rectangular windows keep their self-describing header; the
        // group field is unused for them.
        return Ok(RawPatch {
            kind: PatchKind::Z2,
            group: Group::Free { rank: 1 },
            radius: 0,
            body: text,
        });
    }
    let bad = || {
        CmdError::Failed(format!(
            "{}: unrecognized patch header {first:?}",
            path.display()
        ))
    };
    let mut parts = first.split_whitespace();
    let kind = match parts.next() {
        Some("flowpatch") => PatchKind::Flow,
        Some("bspatch") => PatchKind::Bs,
        Some("foldedpatch") => PatchKind::Folded,
        Some("lockedpatch") => PatchKind::Locked,
        _ => return Err(bad()),
    };
    let group: Group = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if parts.next() != Some("radius") {
        return Err(bad());
    }
    let radius: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    let body = text
        .split_once('\n')
        .map(|(_, b)| b)
        .unwrap_or("")
        .to_string();
    Ok(RawPatch {
        kind,
        group,
        radius,
        body,
    })
}

fn expect_kind(path: &Path, raw: &RawPatch, kind: PatchKind) -> Result<(), CmdError> {
    if raw.kind == kind {
        Ok(())
    } else {
        Err(CmdError::Failed(format!(
            "{}: expected a {} file, found {}",
            path.display(),
            kind.name(),
            raw.kind.name()
        )))
    }
}

fn require<T>(opt: Option<T>, what: &str, kind: PatchKind) -> Result<T, CmdError> {
    opt.ok_or_else(|| CmdError::Usage(format!("{what} is required for {} files", kind.name())))
}

/// Prints violations and the per-family instance counts, then a one-line
/// verdict. Returns the process exit code.
fn print_report(
    kind: PatchKind,
    violations: Vec<(String, String, String)>,
    checked: Option<&BTreeMap<&'static str, usize>>,
) -> i32 {
    for (rule, at, detail) in &violations {
        println!("violation {rule} at {at}: {detail}");
    }
    if let Some(c) = checked {
        let families: Vec<String> = c.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !families.is_empty() {
            println!("checked {}", families.join(" "));
        }
    }
    if violations.is_empty() {
        println!("{} valid", kind.name());
        0
    } else {
        println!("{} invalid: {} violation(s)", kind.name(), violations.len());
        1
    }
}

fn validate_patch(
    raw: RawPatch,
    tileset: Option<&Path>,
    quotient: Option<&Path>,
    kernel: Option<&str>,
) -> Result<i32, CmdError> {
    match raw.kind {
        PatchKind::Flow => {
            let p = failed(parse_flow_patch(&raw.group, raw.radius, &raw.body))?;
            let report = failed(validate_flow_patch(&p))?;
            let rows = report
                .violations
                .into_iter()
                .map(|v| (v.rule.to_string(), v.cell, v.detail))
                .collect();
            Ok(print_report(raw.kind, rows, Some(&report.checked)))
        }
        PatchKind::Bs => {
            let p = failed(parse_bs_patch(&raw.group, raw.radius, &raw.body))?;
            let report = failed(validate_bs_patch(&p))?;
            let rows = report
                .violations
                .into_iter()
                .map(|v| (v.rule.to_string(), v.cell, v.detail))
                .collect();
            Ok(print_report(raw.kind, rows, Some(&report.checked)))
        }
        PatchKind::Folded => {
            let ts = load_tileset(require(tileset, "--tileset", raw.kind)?)?;
            let p = failed(parse_folded_patch(&raw.group, raw.radius, &raw.body))?;
            let report = failed(validate_folded(&p, &ts))?;
            let rows = report
                .violations
                .into_iter()
                .map(|v| (v.rule.to_string(), v.cell, v.detail))
                .collect();
            Ok(print_report(raw.kind, rows, Some(&report.checked)))
        }
        PatchKind::Locked => {
            let q = load_quotient(require(quotient, "--quotient", raw.kind)?)?;
            let gens = parse_kernel(require(kernel, "--kernel", raw.kind)?)?;
            let p = failed(parse_locked_patch(&q, raw.radius, &raw.body))?;
            let report = failed(validate_locked(&q, &gens, &p))?;
            let rows = report
                .violations
                .into_iter()
                .map(|v| (v.rule.to_string(), v.cell, v.detail))
                .collect();
            Ok(print_report(raw.kind, rows, Some(&report.checked)))
        }
        PatchKind::Z2 => {
            let ts = load_tileset(require(tileset, "--tileset", raw.kind)?)?;
            let p = failed(parse_z2_patch(&raw.body))?;
            let violations = failed(validate_z2_patch(&p, &ts))?;
            let rows = violations
                .into_iter()
                .map(|v| {
                    (
                        v.rule.to_string(),
                        format!("({},{})", v.at.0, v.at.1),
                        v.detail,
                    )
                })
                .collect();
            Ok(print_report(raw.kind, rows, None))
        }
    }
}

fn scan_output(scan: &PeriodScan) -> String {
    let mut out = String::new();
    for c in &scan.candidates {
        let status = match c.status {
            PeriodStatus::Survives => "survives",
            PeriodStatus::Eliminated => "eliminated",
            PeriodStatus::Inconclusive => "inconclusive",
        };
        out.push_str(&format!(
            "{} len={} overlap={} {status}\n",
            c.key, c.word_length, c.overlap
        ));
    }
    let survived = scan.survivors().len();
    let eliminated = scan.with_status(PeriodStatus::Eliminated).len();
    let inconclusive = scan.with_status(PeriodStatus::Inconclusive).len();
    out.push_str(&format!(
        "scanned={} conclusive={} inconclusive={inconclusive} survivors={survived}\n",
        scan.candidates.len(),
        survived + eliminated
    ));
    out
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 8);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "check panicked".to_string()
    }
}

fn run(cmd: Cmd) -> Result<i32, CmdError> {
    let cap = default_ball_cap();
    match cmd {
        Cmd::Normalize { group, word } => {
            let group = parse_group(&group)?;
            let letters = usage(parse_word(&word))?;
            let nf = usage(group.element_from_letters(&letters))?;
            println!("{}", group.key(&nf));
            Ok(0)
        }
        Cmd::Ball { group, radius } => {
            let group = parse_group(&group)?;
            let ball = failed(group.ball(radius, cap))?;
            let mut out = String::new();
            for g in ball.elements() {
                out.push_str(&group.key(g));
                out.push('\n');
            }
            print!("{out}");
            Ok(0)
        }
        Cmd::Presentation { graph } => {
            let g = load_graph(&graph)?;
            let tree = failed(spanning_tree(&g))?;
            let pres = failed(fundamental_presentation(&g, &tree))?;
            println!("{}", pres.render());
            Ok(0)
        }
        Cmd::Witness { graph } => {
            let g = load_graph(&graph)?;
            match failed(weak_aperiodicity_witness(&g))? {
                WitnessOutcome::IsZ => {
                    println!("kind: Z");
                    Ok(0)
                }
                WitnessOutcome::Witness(w) => {
                    println!("kind: {}", w.kind);
                    for (name, word) in &w.words {
                        println!("{name} = {}", render_word(word));
                    }
                    println!("verified: {}", w.verified);
                    Ok(if w.verified { 0 } else { 1 })
                }
            }
        }
        Cmd::Classify { graph } => {
            let g = load_graph(&graph)?;
            println!("{}", failed(whyte_class(&g))?);
            Ok(0)
        }
        Cmd::FlowBuild {
            group,
            word,
            radius,
            out,
        } => {
            let group = parse_group(&group)?;
            let w = usage(FlowWord::parse(group, &word))?;
            let w = extend_flow_word(&w, radius as usize + 1)?;
            let p = failed(flow_patch_from_word(&w, radius, cap))?;
            let content = format!(
                "{}{}",
                patch_header(PatchKind::Flow, &group, radius),
                render_flow_patch(&p)
            );
            emit(out.as_deref(), &content)?;
            Ok(0)
        }
        Cmd::FlowValidate { file } => {
            let raw = read_patch(&file)?;
            expect_kind(&file, &raw, PatchKind::Flow)?;
            validate_patch(raw, None, None, None)
        }
        Cmd::Approach {
            group,
            start,
            target,
            steps,
        } => {
            let group = parse_group(&group)?;
            let s = usage(FlowWord::parse(group, &start))?;
            let s = extend_flow_word(&s, steps + 2)?;
            let t = usage(FlowWord::parse(group, &target))?;
            let t = extend_flow_word(&t, steps + 2)?;
            let list = usage(approach_sequence(&s, &t, steps))?;
            for st in &list {
                println!("n={} e={} g={}", st.n, st.e.to_char(), group.key(&st.g));
            }
            Ok(0)
        }
        Cmd::Lambda { group, word, flow } => {
            let group = parse_group(&group)?;
            let letters = usage(parse_word(&word))?;
            usage(group.element_from_letters(&letters))?;
            println!("beta = {}", beta(&letters));
            println!("alpha = {}", fmt_ratio(&alpha(&letters)));
            println!("lambda = {}", fmt_ratio(&lambda_word(&letters)));
            if let Some(flow) = flow {
                let fw = usage(FlowWord::parse(group, &flow))?;
                let fw = extend_flow_word(&fw, letters.len() + 2)?;
                let ctx = usage(HeightContext::new(fw))?;
                println!("beta_y = {}", failed(ctx.beta_y_word(&letters))?);
            }
            Ok(0)
        }
        Cmd::Tile { tag, x, lambda } => {
            let tag = usage(FTag::parse(&tag))?;
            let x = usage(parse_ratio(&x))?;
            let lam = usage(parse_ratio(&lambda))?;
            let tile = failed(tile_colors(tag, &x, &lam))?;
            println!("{}", tile.render_line());
            Ok(0)
        }
        Cmd::BuildBs {
            word,
            x,
            radius,
            out,
        } => {
            let w = usage(FlowWord::parse(BS23, &word))?;
            let w = extend_flow_word(&w, radius as usize + 2)?;
            let x = usage(parse_ratio(&x))?;
            let p = failed(build_bs_config(&w, &x, radius, cap))?;
            let content = format!(
                "{}{}",
                patch_header(PatchKind::Bs, &BS23, radius),
                render_bs_patch(&p)
            );
            emit(out.as_deref(), &content)?;
            Ok(0)
        }
        Cmd::Validate {
            file,
            tileset,
            quotient,
            kernel,
        } => {
            let raw = read_patch(&file)?;
            validate_patch(
                raw,
                tileset.as_deref(),
                quotient.as_deref(),
                kernel.as_deref(),
            )
        }
        Cmd::ScanPeriods {
            file,
            max_len,
            min_overlap,
            quotient,
        } => {
            let raw = read_patch(&file)?;
            let scan = match raw.kind {
                PatchKind::Flow => {
                    let p = failed(parse_flow_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(scan_periods(&p, max_len, min_overlap, cap))?
                }
                PatchKind::Bs => {
                    let p = failed(parse_bs_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(scan_periods(&p, max_len, min_overlap, cap))?
                }
                PatchKind::Folded => {
                    let p = failed(parse_folded_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(scan_periods(&p, max_len, min_overlap, cap))?
                }
                PatchKind::Locked => {
                    let q = load_quotient(require(quotient.as_deref(), "--quotient", raw.kind)?)?;
                    let p = failed(parse_locked_patch(&q, raw.radius, &raw.body))?;
                    failed(scan_periods(&p, max_len, min_overlap, cap))?
                }
                PatchKind::Z2 => {
                    return Err(CmdError::Usage(
                        "scan-periods covers group patches; fold a window first".to_string(),
                    ))
                }
            };
            print!("{}", scan_output(&scan));
            Ok(0)
        }
        Cmd::Fold {
            tileset,
            word,
            radius,
            group,
            patch,
            out,
        } => {
            let group = parse_group(&group)?;
            let ts = load_tileset(&tileset)?;
            let w = usage(FlowWord::parse(group, &word))?;
            let w = extend_flow_word(&w, radius as usize + 1)?;
            let window = match patch {
                Some(p) => failed(parse_z2_patch(&read_file(&p)?))?,
                None => {
                    let r = radius as i64;
                    let mut win = Z2Patch::new(-r, r, -r, r);
                    for i in -r..=r {
                        for j in -r..=r {
                            win.insert(i, j, 0);
                        }
                    }
                    win
                }
            };
            for (&(i, j), &id) in window.cells() {
                if id >= ts.tiles.len() {
                    return Err(CmdError::Failed(format!(
                        "window cell ({i},{j}) uses tile {id}, but the tileset has {} tiles",
                        ts.tiles.len()
                    )));
                }
            }
            let folded = failed(fold(&window, &w, radius, cap))?;
            let content = format!(
                "{}{}",
                patch_header(PatchKind::Folded, &group, radius),
                render_folded_patch(&folded)
            );
            emit(out.as_deref(), &content)?;
            Ok(0)
        }
        Cmd::Unfold { file, tileset, out } => {
            let raw = read_patch(&file)?;
            expect_kind(&file, &raw, PatchKind::Folded)?;
            let ts = load_tileset(&tileset)?;
            let p = failed(parse_folded_patch(&raw.group, raw.radius, &raw.body))?;
            let window = failed(unfold(&p, &ts))?;
            emit(out.as_deref(), &render_z2_patch(&window))?;
            Ok(0)
        }
        Cmd::RotateTileset { file, out } => {
            let ts = load_tileset(&file)?;
            emit(out.as_deref(), &render_tileset(&rotate_tileset(&ts)))?;
            Ok(0)
        }
        Cmd::HigherBlock {
            file,
            width,
            height,
            out,
        } => {
            let ts = load_tileset(&file)?;
            let hb = failed(higher_block(&ts, width, height))?;
            emit(out.as_deref(), &render_tileset(&hb.tileset))?;
            Ok(0)
        }
        Cmd::LockedBuild {
            quotient,
            radius,
            out,
        } => {
            let q = load_quotient(&quotient)?;
            let p = failed(canonical_locked_patch(&q, radius, cap))?;
            let content = format!(
                "{}{}",
                patch_header(PatchKind::Locked, &q.group, radius),
                render_locked_patch(&q, &p)
            );
            emit(out.as_deref(), &content)?;
            Ok(0)
        }
        Cmd::LockedValidate {
            file,
            quotient,
            kernel,
        } => {
            let raw = read_patch(&file)?;
            expect_kind(&file, &raw, PatchKind::Locked)?;
            validate_patch(raw, None, Some(&quotient), Some(&kernel))
        }
        Cmd::Render {
            file,
            format,
            quotient,
            out,
        } => {
            let raw = read_patch(&file)?;
            let content = match (raw.kind, format) {
                (PatchKind::Flow, RenderFormat::Dot) => {
                    let p = failed(parse_flow_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(render::dot_patch(&p, render::flow_label))?
                }
                (PatchKind::Flow, RenderFormat::Svg) => {
                    let p = failed(parse_flow_patch(&raw.group, raw.radius, &raw.body))?;
                    match p.group {
                        Group::Free { .. } => failed(render::svg_flow_tree(&p))?,
                        Group::Bs { .. } => failed(render::svg_flow_sheets(&p))?,
                        Group::FreeTimesZ { .. } => {
                            return Err(CmdError::Usage(
                                "svg covers free-group trees and BS(2,3) sheets; render this patch as dot"
                                    .to_string(),
                            ))
                        }
                    }
                }
                (PatchKind::Bs, RenderFormat::Dot) => {
                    let p = failed(parse_bs_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(render::dot_patch(&p, render::bs_label))?
                }
                (PatchKind::Bs, RenderFormat::Svg) => {
                    let p = failed(parse_bs_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(render::svg_bs_config(&p))?
                }
                (PatchKind::Folded, RenderFormat::Dot) => {
                    let p = failed(parse_folded_patch(&raw.group, raw.radius, &raw.body))?;
                    failed(render::dot_patch(&p, render::folded_label))?
                }
                (PatchKind::Locked, RenderFormat::Dot) => {
                    let q = load_quotient(require(quotient.as_deref(), "--quotient", raw.kind)?)?;
                    let p = failed(parse_locked_patch(&q, raw.radius, &raw.body))?;
                    let words = q.section_words();
                    failed(render::dot_patch(&p, |label: &usize| {
                        words.get(*label).cloned().unwrap_or_else(|| "?".to_string())
                    }))?
                }
                (PatchKind::Z2, RenderFormat::Svg) => {
                    let p = failed(parse_z2_patch(&raw.body))?;
                    render::svg_z2_patch(&p)
                }
                (PatchKind::Z2, RenderFormat::Dot) => {
                    return Err(CmdError::Usage(
                        "rectangular windows render as svg".to_string(),
                    ))
                }
                (PatchKind::Folded | PatchKind::Locked, RenderFormat::Svg) => {
                    return Err(CmdError::Usage(
                        "svg covers free-group trees, BS(2,3) sheets and rectangular windows; render this patch as dot"
                            .to_string(),
                    ))
                }
            };
            emit(out.as_deref(), &content)?;
            Ok(0)
        }
        Cmd::VerifyPaper { seed, only, out } => {
            let criteria = verify::all();
            let selected: Option<BTreeSet<u8>> = match only {
                None => None,
                Some(s) => {
                    let mut ids = BTreeSet::new();
                    for part in s.split(',') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        let id: u8 = usage(part.parse())?;
                        if !criteria.iter().any(|c| c.id == id) {
                            return Err(CmdError::Usage(format!("unknown criterion {id}")));
                        }
                        ids.insert(id);
                    }
                    if ids.is_empty() {
                        return Err(CmdError::Usage("empty criterion list".to_string()));
                    }
                    Some(ids)
                }
            };
            let hook = panic::take_hook();
            panic::set_hook(Box::new(|_| {}));
            let mut rows = Vec::new();
            for c in &criteria {
                if selected.as_ref().is_some_and(|sel| !sel.contains(&c.id)) {
                    continue;
                }
                let runner = c.run;
                let outcome = panic::catch_unwind(move || runner(seed));
                rows.push((c.id, c.name, outcome));
            }
            panic::set_hook(hook);
            let mut all_passed = true;
            let mut json = String::from("{\n");
            json.push_str(&format!("  \"seed\": {seed},\n  \"criteria\": [\n"));
            for (i, (id, name, outcome)) in rows.iter().enumerate() {
                let (passed, detail) = match outcome {
                    Ok(d) => (true, d.clone()),
                    Err(e) => (false, panic_message(e.as_ref())),
                };
                all_passed &= passed;
                json.push_str(&format!(
                    "    {{\"id\": {id}, \"name\": \"{}\", \"passed\": {passed}, \"detail\": \"{}\"}}{}\n",
                    json_escape(name),
                    json_escape(&detail),
                    if i + 1 == rows.len() { "" } else { "," }
                ));
            }
            json.push_str(&format!("  ],\n  \"passed\": {all_passed}\n}}\n"));
            emit(out.as_deref(), &json)?;
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}
