//! Path folding: transporting Z^2 Wang subshifts onto `F_n x Z`.
//!
//! A configuration over `F_n x Z` is built from a Z^2 Wang configuration
//! `x` and a flow word `W` by placing `x_{(i,j)}` at the cell `w t^i`,
//! where `j = 2 lcp(w, W) - |w|` measures how far `w` travels along the
//! ray spelled by `W`. Local validity is expressed by two pattern
//! families: along `t`-edges the tiles match east to west, and along a
//! generator edge the tiles match north to south in the direction of the
//! flow.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::flow::{
    flow_patch_from_word, parse_flow_letter, validate_flow_patch, word_of_patch, FlowError,
    FlowLetter, FlowWord,
};
use crate::group::{Group, GroupError, Letter, NormalForm};
use crate::patch::Patch;

/// Errors from tileset handling and folds.
#[derive(Debug, Error)]
pub enum FoldError {
    #[error("line {0}: {1}")]
    BadTilesetLine(usize, String),
    #[error("line {0}: color {1:?} is not in the palette")]
    UnknownColor(usize, String),
    #[error("tileset has no tiles")]
    EmptyTileset,
    #[error("bad window header: {0}")]
    BadWindow(String),
    #[error("patch line {0}: {1}")]
    BadPatchLine(usize, String),
    #[error("tile id {0} is out of range for a {1}-tile set")]
    TileIdRange(usize, usize),
    #[error("fold needs cell ({i}, {j}) which the window does not cover")]
    MissingCell { i: i64, j: i64 },
    #[error("folding is defined over free-times-Z groups, not {0}")]
    UnsupportedGroup(String),
    #[error("patch has {0} rule violations")]
    InvalidPatch(usize),
    #[error("block dimensions must be at least 1x1")]
    BadBlockSize,
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A unit square Wang tile; colors are palette entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WangTile4 {
    pub north: String,
    pub east: String,
    pub south: String,
    pub west: String,
}

/// A finite Wang tileset over a declared palette.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Z2Tileset {
    pub name: String,
    pub palette: Vec<String>,
    pub tiles: Vec<WangTile4>,
}

impl Z2Tileset {
    pub fn tile(&self, id: usize) -> Result<&WangTile4, FoldError> {
        self.tiles
            .get(id)
            .ok_or(FoldError::TileIdRange(id, self.tiles.len()))
    }
}

/// Parses a tileset file: optional `name:` line, a `palette:` line, then
/// one `tile: N E S W` line per tile.
pub fn parse_tileset(text: &str) -> Result<Z2Tileset, FoldError> {
    let mut name = String::from("unnamed");
    let mut palette: Vec<String> = Vec::new();
    let mut tiles = Vec::new();
    let mut saw_palette = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name:") {
            name = rest.trim().to_string();
        } else if let Some(rest) = line.strip_prefix("palette:") {
            palette = rest.split_whitespace().map(str::to_string).collect();
            saw_palette = true;
        } else if let Some(rest) = line.strip_prefix("tile:") {
            if !saw_palette {
                return Err(FoldError::BadTilesetLine(
                    lineno,
                    "tile before palette".to_string(),
                ));
            }
            let colors: Vec<&str> = rest.split_whitespace().collect();
            if colors.len() != 4 {
                return Err(FoldError::BadTilesetLine(lineno, raw.to_string()));
            }
            for c in &colors {
                if !palette.iter().any(|p| p == c) {
                    return Err(FoldError::UnknownColor(lineno, c.to_string()));
                }
            }
            tiles.push(WangTile4 {
                north: colors[0].to_string(),
                east: colors[1].to_string(),
                south: colors[2].to_string(),
                west: colors[3].to_string(),
            });
        } else {
            return Err(FoldError::BadTilesetLine(lineno, raw.to_string()));
        }
    }
    if tiles.is_empty() {
        return Err(FoldError::EmptyTileset);
    }
    Ok(Z2Tileset {
        name,
        palette,
        tiles,
    })
}

pub fn render_tileset(ts: &Z2Tileset) -> String {
    let mut out = format!("name: {}\npalette: {}\n", ts.name, ts.palette.join(" "));
    for t in &ts.tiles {
        out.push_str(&format!(
            "tile: {} {} {} {}\n",
            t.north, t.east, t.south, t.west
        ));
    }
    out
}

/// Quarter-turn rotation: `(N, E, S, W)` becomes `(W, N, E, S)`.
pub fn rotate_tileset(ts: &Z2Tileset) -> Z2Tileset {
    Z2Tileset {
        name: ts.name.clone(),
        palette: ts.palette.clone(),
        tiles: ts
            .tiles
            .iter()
            .map(|t| WangTile4 {
                north: t.west.clone(),
                east: t.north.clone(),
                south: t.east.clone(),
                west: t.south.clone(),
            })
            .collect(),
    }
}

/// A rectangular window of tile ids; cells may be absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Z2Patch {
    pub i0: i64,
    pub i1: i64,
    pub j0: i64,
    pub j1: i64,
    cells: BTreeMap<(i64, i64), usize>,
}

impl Z2Patch {
    pub fn new(i0: i64, i1: i64, j0: i64, j1: i64) -> Z2Patch {
        Z2Patch {
            i0,
            i1,
            j0,
            j1,
            cells: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, i: i64, j: i64, id: usize) {
        debug_assert!(i >= self.i0 && i <= self.i1 && j >= self.j0 && j <= self.j1);
        self.cells.insert((i, j), id);
    }

    pub fn get(&self, i: i64, j: i64) -> Option<usize> {
        self.cells.get(&(i, j)).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(i64, i64), &usize)> {
        self.cells.iter()
    }
}

/// Renders as a `window i0 i1 j0 j1` header plus rows from the top row
/// `j1` down to `j0`; absent cells print as `.`.
pub fn render_z2_patch(p: &Z2Patch) -> String {
    let mut out = format!("window {} {} {} {}\n", p.i0, p.i1, p.j0, p.j1);
    for j in (p.j0..=p.j1).rev() {
        let row: Vec<String> = (p.i0..=p.i1)
            .map(|i| p.get(i, j).map_or(".".to_string(), |id| id.to_string()))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_z2_patch(text: &str) -> Result<Z2Patch, FoldError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| FoldError::BadWindow("empty input".to_string()))?;
    let nums: Result<Vec<i64>, _> = header
        .trim()
        .strip_prefix("window")
        .ok_or_else(|| FoldError::BadWindow(header.to_string()))?
        .split_whitespace()
        .map(str::parse::<i64>)
        .collect();
    let nums = nums.map_err(|_| FoldError::BadWindow(header.to_string()))?;
    let [i0, i1, j0, j1] = nums[..] else {
        return Err(FoldError::BadWindow(header.to_string()));
    };
    if i0 > i1 || j0 > j1 {
        return Err(FoldError::BadWindow(header.to_string()));
    }
    let mut p = Z2Patch::new(i0, i1, j0, j1);
    let mut j = j1;
    for (idx, raw) in lines {
        if j < j0 {
            return Err(FoldError::BadPatchLine(
                idx + 1,
                "too many rows".to_string(),
            ));
        }
        let entries: Vec<&str> = raw.split_whitespace().collect();
        if entries.len() != (i1 - i0 + 1) as usize {
            return Err(FoldError::BadPatchLine(idx + 1, raw.to_string()));
        }
        for (offset, e) in entries.iter().enumerate() {
            if *e == "." {
                continue;
            }
            let id: usize = e
                .parse()
                .map_err(|_| FoldError::BadPatchLine(idx + 1, raw.to_string()))?;
            p.insert(i0 + offset as i64, j, id);
        }
        j -= 1;
    }
    if j != j0 - 1 {
        return Err(FoldError::BadWindow("missing rows".to_string()));
    }
    Ok(p)
}

/// One broken adjacency in a Z^2 patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Violation {
    pub at: (i64, i64),
    pub rule: &'static str,
    pub detail: String,
}

/// Checks east/west and north/south matching for every adjacent pair of
/// present cells, and that every id is in range.
pub fn validate_z2_patch(p: &Z2Patch, ts: &Z2Tileset) -> Result<Vec<Z2Violation>, FoldError> {
    let mut out = Vec::new();
    for (&(i, j), &id) in p.cells() {
        if id >= ts.tiles.len() {
            out.push(Z2Violation {
                at: (i, j),
                rule: "tile-range",
                detail: format!("id {id} out of range"),
            });
            continue;
        }
        let tile = &ts.tiles[id];
        if let Some(east_id) = p.get(i + 1, j) {
            if east_id < ts.tiles.len() && tile.east != ts.tiles[east_id].west {
                out.push(Z2Violation {
                    at: (i, j),
                    rule: "east-west",
                    detail: format!("{} vs {}", tile.east, ts.tiles[east_id].west),
                });
            }
        }
        if let Some(north_id) = p.get(i, j + 1) {
            if north_id < ts.tiles.len() && tile.north != ts.tiles[north_id].south {
                out.push(Z2Violation {
                    at: (i, j),
                    rule: "north-south",
                    detail: format!("{} vs {}", tile.north, ts.tiles[north_id].south),
                });
            }
        }
    }
    Ok(out)
}

/// All valid `m x n` windows of a tileset, as `grid[dy][dx]` tile ids,
/// enumerated by backtracking.
pub fn enumerate_windows(ts: &Z2Tileset, m: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut grid = vec![vec![0usize; m]; n];
    fn fill(
        ts: &Z2Tileset,
        m: usize,
        n: usize,
        pos: usize,
        grid: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if pos == m * n {
            out.push(grid.clone());
            return;
        }
        let (dy, dx) = (pos / m, pos % m);
        for id in 0..ts.tiles.len() {
            let tile = &ts.tiles[id];
            if dx > 0 && ts.tiles[grid[dy][dx - 1]].east != tile.west {
                continue;
            }
            if dy > 0 && ts.tiles[grid[dy - 1][dx]].north != tile.south {
                continue;
            }
            grid[dy][dx] = id;
            fill(ts, m, n, pos + 1, grid, out);
        }
    }
    fill(ts, m, n, 0, &mut grid, &mut out);
    out
}

/// A higher-block recoding together with the window each block encodes.
#[derive(Clone, Debug)]
pub struct BlockTileset {
    pub tileset: Z2Tileset,
    pub grids: Vec<Vec<Vec<usize>>>,
}

fn encode_id_strip(grid: &[Vec<usize>], cols: std::ops::Range<usize>, by_col: bool) -> String {
    if by_col {
        cols.map(|dx| {
            grid.iter()
                .map(|row| row[dx].to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
    } else {
        cols.map(|dy| {
            grid[dy]
                .iter()
                .map(|id| id.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
    }
}

/// Recodes a tileset by valid `m x n` windows. Adjacent blocks must agree
/// on their overlap; for `m = 1` (or `n = 1`) there is no horizontal (or
/// vertical) overlap and the underlying edge colors are compared instead.
pub fn higher_block(ts: &Z2Tileset, m: usize, n: usize) -> Result<BlockTileset, FoldError> {
    if m == 0 || n == 0 {
        return Err(FoldError::BadBlockSize);
    }
    let grids = enumerate_windows(ts, m, n);
    if grids.is_empty() {
        return Err(FoldError::EmptyTileset);
    }
    let mut tiles = Vec::new();
    for grid in &grids {
        let (east, west) = if m >= 2 {
            (
                encode_id_strip(grid, 1..m, true),
                encode_id_strip(grid, 0..m - 1, true),
            )
        } else {
            let col = |f: fn(&WangTile4) -> &str| {
                grid.iter()
                    .map(|row| f(&ts.tiles[row[0]]).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            (col(|t| &t.east), col(|t| &t.west))
        };
        let (north, south) = if n >= 2 {
            (
                encode_id_strip(grid, 1..n, false),
                encode_id_strip(grid, 0..n - 1, false),
            )
        } else {
            let row = |f: fn(&WangTile4) -> &str| {
                grid[0]
                    .iter()
                    .map(|id| f(&ts.tiles[*id]).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            (row(|t| &t.north), row(|t| &t.south))
        };
        tiles.push(WangTile4 {
            north,
            east,
            south,
            west,
        });
    }
    let mut palette: Vec<String> = tiles
        .iter()
        .flat_map(|t| {
            [
                t.north.clone(),
                t.east.clone(),
                t.south.clone(),
                t.west.clone(),
            ]
        })
        .collect();
    palette.sort();
    palette.dedup();
    Ok(BlockTileset {
        tileset: Z2Tileset {
            name: format!("{}-block{}x{}", ts.name, m, n),
            palette,
            tiles,
        },
        grids,
    })
}

/// A folded patch: each cell carries a tile id and a flow letter.
pub type FoldedPatch = Patch<(usize, FlowLetter)>;

fn free_letters(word: &FlowWord) -> Result<Vec<Letter>, FoldError> {
    word.letters()
        .iter()
        .map(|l| match l {
            FlowLetter::Fn(l) => Ok(*l),
            FlowLetter::Bs(_) => Err(FoldError::UnsupportedGroup(word.group.to_string())),
        })
        .collect()
}

/// The height `j = 2 lcp(w, W) - |w|` of a reduced free word relative to
/// the ray spelled by `W`.
pub fn fold_height(w: &[Letter], ray: &[Letter]) -> i64 {
    let lcp = w.iter().zip(ray.iter()).take_while(|(a, b)| a == b).count();
    2 * lcp as i64 - w.len() as i64
}

/// Folds a Z^2 window along the ray of `word`: cell `w t^i` receives the
/// tile at `(i, fold_height(w))` and the flow letter of its free part.
pub fn fold(
    x: &Z2Patch,
    word: &FlowWord,
    radius: u32,
    cap: usize,
) -> Result<FoldedPatch, FoldError> {
    let group = word.group;
    if !matches!(group, Group::FreeTimesZ { .. }) {
        return Err(FoldError::UnsupportedGroup(group.to_string()));
    }
    let flow = flow_patch_from_word(word, radius, cap)?;
    let ray = free_letters(word)?;
    let mut out = Patch::new(group, radius);
    for (g, letter) in flow.cells() {
        let NormalForm::FnZ { w, k } = g else {
            return Err(FoldError::UnsupportedGroup(group.to_string()));
        };
        let j = fold_height(w, &ray);
        let id = x.get(*k, j).ok_or(FoldError::MissingCell { i: *k, j })?;
        out.insert(g.clone(), (id, *letter));
    }
    Ok(out)
}

/// One broken rule instance in a folded patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldViolation {
    pub cell: String,
    pub rule: &'static str,
    pub detail: String,
}

/// Validation outcome with per-family instance counts.
#[derive(Clone, Debug, Default)]
pub struct FoldReport {
    pub violations: Vec<FoldViolation>,
    pub checked: BTreeMap<&'static str, usize>,
}

impl FoldReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn tick(&mut self, rule: &'static str) {
        *self.checked.entry(rule).or_insert(0) += 1;
    }
}

/// Checks the flow layer, tile id ranges, east/west matching along
/// `t`-edges, and north/south matching along generator edges oriented by
/// the flow: with the flow the neighbor sits above, against it below.
pub fn validate_folded(p: &FoldedPatch, ts: &Z2Tileset) -> Result<FoldReport, FoldError> {
    let group = p.group;
    if !matches!(group, Group::FreeTimesZ { .. }) {
        return Err(FoldError::UnsupportedGroup(group.to_string()));
    }
    let mut report = FoldReport::default();

    let flow_layer: Patch<FlowLetter> = p.map(|_, (_, l)| *l);
    let flow_report = validate_flow_patch(&flow_layer)?;
    for v in flow_report.violations {
        report.violations.push(FoldViolation {
            cell: v.cell,
            rule: "flow",
            detail: v.detail,
        });
    }
    *report.checked.entry("flow").or_insert(0) += flow_report.checked.values().sum::<usize>();

    let letters: Vec<Letter> = group
        .generators()
        .into_iter()
        .filter(|l| l.sym != crate::group::Sym::T)
        .flat_map(|l| [l, l.inverse()])
        .collect();
    let t = Letter::t();
    for (g, (id, y)) in p.cells() {
        report.tick("tile-range");
        let Ok(tile) = ts.tile(*id) else {
            report.violations.push(FoldViolation {
                cell: group.key(g),
                rule: "tile-range",
                detail: format!("id {id} out of range"),
            });
            continue;
        };
        let gt = group.mul_letter(g, t)?;
        if let Some((other_id, _)) = p.get(&gt) {
            if let Ok(other) = ts.tile(*other_id) {
                report.tick("horizontal");
                if tile.east != other.west {
                    report.violations.push(FoldViolation {
                        cell: group.key(g),
                        rule: "horizontal",
                        detail: format!("east {} vs west {}", tile.east, other.west),
                    });
                }
            }
        }
        for s in &letters {
            let gs = group.mul_letter(g, *s)?;
            let Some((other_id, _)) = p.get(&gs) else {
                continue;
            };
            let Ok(other) = ts.tile(*other_id) else {
                continue;
            };
            report.tick("vertical");
            let with_flow = *y == FlowLetter::Fn(*s);
            let (mine, theirs, rule) = if with_flow {
                (&tile.north, &other.south, "vertical (with flow)")
            } else {
                (&tile.south, &other.north, "vertical (against flow)")
            };
            if mine != theirs {
                report.violations.push(FoldViolation {
                    cell: group.key(g),
                    rule: "vertical",
                    detail: format!("{rule}: {mine} vs {theirs} toward {s}"),
                });
            }
        }
    }
    Ok(report)
}

/// Reconstructs the Z^2 window from a valid folded patch by reading tiles
/// along the canonical path cells `rho(j) t^i`, where `rho(j)` is the
/// length-`j` prefix of the recovered ray for `j >= 0` and the `|j|`-fold
/// inverse of its first letter for `j < 0`.
pub fn unfold(p: &FoldedPatch, ts: &Z2Tileset) -> Result<Z2Patch, FoldError> {
    let report = validate_folded(p, ts)?;
    if !report.is_valid() {
        return Err(FoldError::InvalidPatch(report.violations.len()));
    }
    let flow_layer: Patch<FlowLetter> = p.map(|_, (_, l)| *l);
    let word = word_of_patch(&flow_layer)?;
    let ray = free_letters(&word)?;
    let r = p.radius as i64;
    let mut out = Z2Patch::new(-r, r, -r, r);
    for j in -r..=r {
        let w: Vec<Letter> = if j >= 0 {
            if j as usize > ray.len() {
                continue;
            }
            ray[..j as usize].to_vec()
        } else {
            let Some(first) = ray.first() else { continue };
            vec![first.inverse(); j.unsigned_abs() as usize]
        };
        for i in -r..=r {
            let g = NormalForm::FnZ { w: w.clone(), k: i };
            if let Some((id, _)) = p.get(&g) {
                out.insert(i, j, *id);
            }
        }
    }
    Ok(out)
}

/// Serializes a folded patch as `<key> <tile-id> <flow-letter>` lines.
pub fn render_folded_patch(p: &FoldedPatch) -> String {
    let mut out = String::new();
    for (g, (id, letter)) in p.cells() {
        out.push_str(&format!("{} {} {}\n", p.group.key(g), id, letter.render()));
    }
    out
}

pub fn parse_folded_patch(
    group: &Group,
    radius: u32,
    body: &str,
) -> Result<FoldedPatch, FoldError> {
    let mut p = Patch::new(*group, radius);
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || FoldError::BadPatchLine(i + 1, line.to_string());
        let mut parts = line.split_whitespace();
        let (Some(key), Some(id), Some(letter), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let g = group.parse_element(key)?;
        let id: usize = id.parse().map_err(|_| bad())?;
        let letter = parse_flow_letter(group, letter)?;
        p.insert(g, (id, letter));
    }
    Ok(p)
}
