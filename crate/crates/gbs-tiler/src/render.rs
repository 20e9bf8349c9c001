//! Deterministic structural renderers.
//!
//! DOT output lists every cell as a node and every generator edge whose
//! endpoints are both present; SVG output carries `data-cell`,
//! `data-letter` and `data-tile` attributes so the drawn structure can be
//! checked against the patch without comparing pixels. Iteration follows
//! the patch's ordered cell map, so identical inputs render identically.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use gbs_core::flow::{FlowLetter, FlowPatch};
use gbs_core::fold::Z2Patch;
use gbs_core::group::{Group, Letter};
use gbs_core::height::beta_element;
use gbs_core::patch::Patch;
use gbs_core::wang::{BsConfigPatch, FTag};

const COLORS: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc949", "#9c755f",
];

/// Generators without their inverses, in canonical order.
fn positive_generators(group: &Group) -> Vec<Letter> {
    let mut out = Vec::new();
    match group {
        Group::Free { rank } | Group::FreeTimesZ { rank } => {
            for i in 0..*rank {
                out.push(Letter::s(i));
            }
            if matches!(group, Group::FreeTimesZ { .. }) {
                out.push(Letter::t());
            }
        }
        Group::Bs { .. } => {
            out.push(Letter::s(0));
            out.push(Letter::t());
        }
    }
    out
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT graph of a group patch: one node per cell labeled by the cell's
/// content, one labeled edge per generator between present cells.
pub fn dot_patch<L>(p: &Patch<L>, label: impl Fn(&L) -> String) -> Result<String, String> {
    let mut out =
        String::from("digraph patch {\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
    for (g, l) in p.cells() {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quoted(&p.group.key(g)),
            quoted(&label(l))
        );
    }
    let gens = positive_generators(&p.group);
    for (g, _) in p.cells() {
        for gen in &gens {
            let h = p.group.mul_letter(g, *gen).map_err(|e| e.to_string())?;
            if p.contains(&h) {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quoted(&p.group.key(g)),
                    quoted(&p.group.key(&h)),
                    quoted(&gen.to_char().to_string())
                );
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn svg_open(out: &mut String, x0: f64, y0: f64, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.1} {y0:.1} {w:.1} {h:.1}" width="{w:.0}" height="{h:.0}">"#
    );
    out.push_str(concat!(
        "  <defs><marker id=\"arrow\" viewBox=\"0 0 8 8\" refX=\"7\" refY=\"4\" ",
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#333333\"/></marker></defs>\n"
    ));
}

/// SVG of a rectangular window: one square per present cell, filled by
/// tile id.
pub fn svg_z2_patch(p: &Z2Patch) -> String {
    let cell = 24.0;
    let w = (p.i1 - p.i0 + 1) as f64 * cell;
    let h = (p.j1 - p.j0 + 1) as f64 * cell;
    let mut out = String::new();
    svg_open(&mut out, 0.0, 0.0, w, h);
    for (&(i, j), &id) in p.cells() {
        let x = (i - p.i0) as f64 * cell;
        let y = (p.j1 - j) as f64 * cell;
        let fill = COLORS[id % COLORS.len()];
        let _ = writeln!(
            out,
            r#"  <rect x="{x:.1}" y="{y:.1}" width="22" height="22" fill="{fill}" data-cell="{i},{j}" data-tile="{id}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Position of a free-group element in the standard shrinking-step tree
/// embedding: generator `i` points at angle `i * pi / rank`, inverses
/// point opposite, and step length decays with depth.
fn tree_pos(rank: u8, letters: &[Letter]) -> (f64, f64) {
    let mut x = 0.0f64;
    let mut y = 0.0f64;
    for (depth, l) in letters.iter().enumerate() {
        let c = l.to_char();
        let (idx, inv) = if c.is_ascii_uppercase() {
            (c.to_ascii_lowercase() as u8 - b'a', true)
        } else {
            (c as u8 - b'a', false)
        };
        let mut angle = idx as f64 * PI / rank as f64;
        if inv {
            angle += PI;
        }
        let step = 150.0 * 0.42f64.powi(depth as i32);
        x += step * angle.cos();
        y -= step * angle.sin();
    }
    (x, y)
}

/// SVG of a free-group flow patch: the tree embedding, one arrow per cell
/// pointing along the cell's flow letter.
pub fn svg_flow_tree(p: &FlowPatch) -> Result<String, String> {
    let Group::Free { rank } = p.group else {
        return Err(format!(
            "tree rendering covers free groups, not {}",
            p.group
        ));
    };
    let mut out = String::new();
    svg_open(&mut out, -280.0, -280.0, 560.0, 560.0);
    for (g, letter) in p.cells() {
        let FlowLetter::Fn(l) = letter else {
            return Err("free-group patch carries a coset letter".to_string());
        };
        let from = tree_pos(rank, &p.group.spell(g));
        let target = p.group.mul_letter(g, *l).map_err(|e| e.to_string())?;
        let to = tree_pos(rank, &p.group.spell(&target));
        let _ = writeln!(
            out,
            r##"  <circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#222222" data-node="{}"/>"##,
            from.0,
            from.1,
            p.group.key(g)
        );
        let _ = writeln!(
            out,
            r##"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333333" stroke-width="1.4" marker-end="url(#arrow)" data-cell="{}" data-letter="{}"/>"##,
            from.0 + 0.25 * (to.0 - from.0),
            from.1 + 0.25 * (to.1 - from.1),
            from.0 + 0.75 * (to.0 - from.0),
            from.1 + 0.75 * (to.1 - from.1),
            p.group.key(g),
            letter.render()
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Sheet layout for `BS(2,3)` patches: rows are beta levels, columns the
/// cell order within a level.
fn sheet_positions<L>(p: &Patch<L>) -> Result<BTreeMap<String, (f64, f64)>, String> {
    let mut levels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (g, _) in p.cells() {
        let b = beta_element(&p.group, g).map_err(|e| e.to_string())?;
        levels.entry(b).or_default().push(p.group.key(g));
    }
    let mut pos = BTreeMap::new();
    for (b, keys) in &levels {
        let width = (keys.len() as f64 - 1.0) * 34.0;
        for (i, key) in keys.iter().enumerate() {
            pos.insert(
                key.clone(),
                (i as f64 * 34.0 - width / 2.0, -(*b as f64) * 56.0),
            );
        }
    }
    Ok(pos)
}

fn svg_sheet<L>(
    p: &Patch<L>,
    letter_of: impl Fn(&L) -> FlowLetter,
    fill_of: impl Fn(&L) -> &'static str,
) -> Result<String, String> {
    let pos = sheet_positions(p)?;
    let (mut x0, mut x1, mut y0, mut y1) = (-40.0f64, 40.0f64, -40.0f64, 40.0f64);
    for &(x, y) in pos.values() {
        x0 = x0.min(x - 40.0);
        x1 = x1.max(x + 40.0);
        y0 = y0.min(y - 40.0);
        y1 = y1.max(y + 40.0);
    }
    let mut out = String::new();
    svg_open(&mut out, x0, y0, x1 - x0, y1 - y0);
    for (g, lab) in p.cells() {
        let key = p.group.key(g);
        let &(x, y) = pos.get(&key).expect("every cell was positioned");
        let letter = letter_of(lab);
        let target = gbs_core::flow::step(&p.group, g, &letter).map_err(|e| e.to_string())?;
        let _ = write!(
            out,
            r#"  <g data-cell="{}" data-letter="{}"><circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}"/>"#,
            key,
            letter.render(),
            fill_of(lab)
        );
        if let Some(&(tx, ty)) = pos.get(&p.group.key(&target)) {
            let _ = write!(
                out,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333333" stroke-width="1.4" marker-end="url(#arrow)"/>"##,
                x + 0.2 * (tx - x),
                y + 0.2 * (ty - y),
                x + 0.8 * (tx - x),
                y + 0.8 * (ty - y)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// SVG sheet diagram of a `BS(2,3)` flow patch.
pub fn svg_flow_sheets(p: &FlowPatch) -> Result<String, String> {
    svg_sheet(p, |l| *l, |_| "#222222")
}

/// SVG sheet diagram of a tiled `BS(2,3)` configuration, colored by the
/// branch tag of each cell's tile.
pub fn svg_bs_config(p: &BsConfigPatch) -> Result<String, String> {
    svg_sheet(
        p,
        |(l, _)| *l,
        |(_, tile)| match tile.f_tag {
            FTag::T => COLORS[0],
            FTag::TInv => COLORS[1],
        },
    )
}

/// Node glyph for a cell of a `BS(2,3)` flow patch rendered as DOT.
pub fn flow_label(l: &FlowLetter) -> String {
    l.render()
}

/// Dots never carry the full seven colors; the branch tag and flow letter
/// identify the tile family.
pub fn bs_label(l: &(FlowLetter, gbs_core::wang::WangTile7)) -> String {
    format!("{} {}", l.0.render(), l.1.f_tag.render())
}

pub fn folded_label(l: &(usize, FlowLetter)) -> String {
    format!("{}:{}", l.0, l.1.render())
}
