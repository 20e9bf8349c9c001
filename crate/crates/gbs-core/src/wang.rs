//! Wang tiles over `BS(2,3)` driven by a piecewise-linear circle map.
//!
//! The circle is `I = [1/10, 5/2]` with `1/10 ~ 5/2`, carrying the bijection
//! `T` (slope 5/2 on `[1/10, 1]`, slope 1/10 on `(1, 5/2)`). A tile is a
//! seven-field record of two top colors, three bottom colors and two side
//! carries, derived from a function tag `f` in `{T, T^-1}`, a circle point
//! `x` and a level `lambda`:
//!
//! ```text
//! t_k = floor((2 lambda + k) x)    - floor((2 lambda + k - 1) x)      k = 1, 2
//! b_k = floor((3 lambda + k) f(x)) - floor((3 lambda + k - 1) f(x))   k = 1, 2, 3
//! l   = (s/2) floor(2 lambda x)       - (1/3) floor(3 lambda f(x))
//! r   = (s/2) floor((2 lambda + 2) x) - (1/3) floor((3 lambda + 3) f(x))
//! ```
//!
//! where `s` is the slope of the branch of `f` active at `x`: the floor
//! arguments generally leave the circle, so `f(floor(...))` is read as the
//! active branch extended linearly. Under this reading every tile satisfies
//! `f((t1 + t2)/2) + l = (b1 + b2 + b3)/3 + r` exactly, and a configuration
//! assigning `tile(f_tag(y_g), T^{beta_y(g)}(x), lambda(g))` to each cell
//! satisfies all matching rules.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::flow::{flow_patch_from_word, validate_flow_patch, FlowError, FlowLetter, FlowWord};
use crate::group::{BsLetter, Group, GroupError};
use crate::height::{HeightContext, HeightError};
use crate::patch::Patch;
use crate::rat::{floor_int, fmt_ratio, parse_ratio, ratio};

/// Errors from circle-map and tile operations.
#[derive(Debug, Error)]
pub enum WangError {
    #[error("{0} is outside the circle [1/10, 5/2]")]
    OutsideCircle(String),
    #[error("bad piecewise-linear map: {0}")]
    BadMap(String),
    #[error("no branch covers {0}")]
    NoBranch(String),
    #[error("bad tile line: {0}")]
    BadTileLine(String),
    #[error("bad patch line {0}: {1}")]
    BadPatchLine(usize, String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One linear branch of a circle map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Branch {
    pub lo: BigRational,
    pub hi: BigRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub slope: BigRational,
}

impl Branch {
    fn contains(&self, x: &BigRational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }
}

/// A piecewise-linear bijection of the circle `[lo, hi]` with `lo ~ hi`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLMap {
    lo: BigRational,
    hi: BigRational,
    branches: Vec<Branch>,
}

impl PLMap {
    /// Validates that the branches partition the circle (each interior
    /// boundary covered exactly once, the seam `lo ~ hi` covered exactly
    /// once) and that every slope is positive and avoids 2/3 and 3/2.
    pub fn new(
        lo: BigRational,
        hi: BigRational,
        mut branches: Vec<Branch>,
    ) -> Result<PLMap, WangError> {
        if lo >= hi {
            return Err(WangError::BadMap("empty circle".to_string()));
        }
        if branches.is_empty() {
            return Err(WangError::BadMap("no branches".to_string()));
        }
        branches.sort_by(|a, b| a.lo.cmp(&b.lo));
        for b in &branches {
            if b.lo >= b.hi {
                return Err(WangError::BadMap(format!(
                    "branch [{}, {}] is empty",
                    fmt_ratio(&b.lo),
                    fmt_ratio(&b.hi)
                )));
            }
            if !b.slope.is_positive() {
                return Err(WangError::BadMap(format!(
                    "slope {} is not positive",
                    fmt_ratio(&b.slope)
                )));
            }
            // The tileset for a branch of slope 2/3 (or its inverse) is
            // empty, so such maps are rejected outright.
            if b.slope == ratio(2, 3) || b.slope == ratio(3, 2) {
                return Err(WangError::BadMap(format!(
                    "slope {} collides with the vertical carry ratio",
                    fmt_ratio(&b.slope)
                )));
            }
        }
        let first = &branches[0];
        let last = &branches[branches.len() - 1];
        if first.lo != lo || last.hi != hi {
            return Err(WangError::BadMap(
                "branches do not span the circle".to_string(),
            ));
        }
        if first.lo_closed == last.hi_closed {
            return Err(WangError::BadMap(
                "circle seam must be covered exactly once".to_string(),
            ));
        }
        for pair in branches.windows(2) {
            if pair[0].hi != pair[1].lo {
                return Err(WangError::BadMap(format!(
                    "gap or overlap between branches at {} vs {}",
                    fmt_ratio(&pair[0].hi),
                    fmt_ratio(&pair[1].lo)
                )));
            }
            if pair[0].hi_closed == pair[1].lo_closed {
                return Err(WangError::BadMap(format!(
                    "boundary {} covered {} times",
                    fmt_ratio(&pair[0].hi),
                    if pair[0].hi_closed { "two" } else { "zero" }
                )));
            }
        }
        Ok(PLMap { lo, hi, branches })
    }

    /// The circle map `T`: slope 5/2 on `[1/10, 1]`, slope 1/10 on
    /// `(1, 5/2)`.
    pub fn circle_t() -> PLMap {
        PLMap::new(
            ratio(1, 10),
            ratio(5, 2),
            vec![
                Branch {
                    lo: ratio(1, 10),
                    hi: ratio(1, 1),
                    lo_closed: true,
                    hi_closed: true,
                    slope: ratio(5, 2),
                },
                Branch {
                    lo: ratio(1, 1),
                    hi: ratio(5, 2),
                    lo_closed: false,
                    hi_closed: false,
                    slope: ratio(1, 10),
                },
            ],
        )
        .expect("the reference map is valid")
    }

    /// The inverse map `T^-1`: slope 10 on `(1/10, 1/4)`, slope 2/5 on
    /// `[1/4, 5/2]`.
    pub fn circle_t_inv() -> PLMap {
        PLMap::circle_t().inverse()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The inverse bijection: each branch maps to its image interval with
    /// reciprocal slope.
    pub fn inverse(&self) -> PLMap {
        let branches = self
            .branches
            .iter()
            .map(|b| Branch {
                lo: &b.lo * &b.slope,
                hi: &b.hi * &b.slope,
                lo_closed: b.lo_closed,
                hi_closed: b.hi_closed,
                slope: BigRational::one() / &b.slope,
            })
            .collect();
        PLMap::new(self.lo.clone(), self.hi.clone(), branches)
            .expect("the inverse of a circle bijection is a circle bijection")
    }

    /// Reduces a point into `[lo, hi)` using the seam identification; the
    /// point must already lie in `[lo, hi]`.
    pub fn reduce(&self, x: &BigRational) -> Result<BigRational, WangError> {
        if x < &self.lo || x > &self.hi {
            return Err(WangError::OutsideCircle(fmt_ratio(x)));
        }
        if x == &self.hi {
            Ok(self.lo.clone())
        } else {
            Ok(x.clone())
        }
    }

    /// The branch active at `x`, together with the representative of `x`
    /// that the branch actually covers (the seam point may be covered only
    /// as `hi`).
    fn branch_at(&self, x: &BigRational) -> Result<(&Branch, BigRational), WangError> {
        let x = self.reduce(x)?;
        if let Some(b) = self.branches.iter().find(|b| b.contains(&x)) {
            return Ok((b, x));
        }
        if x == self.lo {
            if let Some(b) = self.branches.iter().find(|b| b.contains(&self.hi)) {
                return Ok((b, self.hi.clone()));
            }
        }
        Err(WangError::NoBranch(fmt_ratio(&x)))
    }

    /// The slope active at `x`.
    pub fn slope_at(&self, x: &BigRational) -> Result<BigRational, WangError> {
        Ok(self.branch_at(x)?.0.slope.clone())
    }

    /// Exact branch evaluation with circle reduction of the output.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational, WangError> {
        let (b, rep) = self.branch_at(x)?;
        self.reduce(&(&b.slope * rep))
    }

    /// The `k`-fold iterate; negative `k` runs the inverse.
    pub fn orbit(&self, x: &BigRational, k: i64) -> Result<BigRational, WangError> {
        let mut cur = self.reduce(x)?;
        if k >= 0 {
            for _ in 0..k {
                cur = self.eval(&cur)?;
            }
        } else {
            let inv = self.inverse();
            for _ in 0..k.unsigned_abs() {
                cur = inv.eval(&cur)?;
            }
        }
        Ok(cur)
    }
}

/// Which map a tile computes along `t`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FTag {
    T,
    TInv,
}

impl FTag {
    pub fn render(self) -> &'static str {
        match self {
            FTag::T => "T",
            FTag::TInv => "T_inv",
        }
    }

    pub fn parse(s: &str) -> Result<FTag, WangError> {
        match s {
            "T" => Ok(FTag::T),
            "T_inv" => Ok(FTag::TInv),
            other => Err(WangError::BadTileLine(format!("unknown f tag {other:?}"))),
        }
    }

    pub fn map(self) -> PLMap {
        match self {
            FTag::T => PLMap::circle_t(),
            FTag::TInv => PLMap::circle_t_inv(),
        }
    }
}

/// A seven-field Wang tile for `BS(2,3)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WangTile7 {
    pub t1: i64,
    pub t2: i64,
    pub l: BigRational,
    pub b1: i64,
    pub b2: i64,
    pub b3: i64,
    pub r: BigRational,
    pub f_tag: FTag,
}

impl WangTile7 {
    /// Whether some branch slope `s` of the tagged map satisfies
    /// `s (t1 + t2)/2 + l = (b1 + b2 + b3)/3 + r`. Tiles produced by
    /// `tile_colors` satisfy it with the branch active at their `x`.
    pub fn computes_tagged_map(&self) -> bool {
        let top = ratio(self.t1 + self.t2, 2);
        let bottom = ratio(self.b1 + self.b2 + self.b3, 3);
        self.f_tag
            .map()
            .branches()
            .iter()
            .any(|b| &b.slope * &top + &self.l == &bottom + &self.r)
    }

    /// One-line serialization: `t1 t2 | l | b1 b2 b3 | r | f_tag`.
    pub fn render_line(&self) -> String {
        format!(
            "{} {} | {} | {} {} {} | {} | {}",
            self.t1,
            self.t2,
            fmt_ratio(&self.l),
            self.b1,
            self.b2,
            self.b3,
            fmt_ratio(&self.r),
            self.f_tag.render()
        )
    }

    pub fn parse_line(s: &str) -> Result<WangTile7, WangError> {
        let bad = || WangError::BadTileLine(s.to_string());
        let parts: Vec<&str> = s.split('|').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(bad());
        }
        let ints = |chunk: &str, want: usize| -> Result<Vec<i64>, WangError> {
            let v: Result<Vec<i64>, _> = chunk.split_whitespace().map(str::parse::<i64>).collect();
            let v = v.map_err(|_| bad())?;
            if v.len() != want {
                return Err(bad());
            }
            Ok(v)
        };
        let tops = ints(parts[0], 2)?;
        let l = parse_ratio(parts[1]).map_err(|_| bad())?;
        let bots = ints(parts[2], 3)?;
        let r = parse_ratio(parts[3]).map_err(|_| bad())?;
        let f_tag = FTag::parse(parts[4])?;
        Ok(WangTile7 {
            t1: tops[0],
            t2: tops[1],
            l,
            b1: bots[0],
            b2: bots[1],
            b3: bots[2],
            r,
            f_tag,
        })
    }
}

fn floor_diff(hi: &BigRational, lo: &BigRational) -> i64 {
    (floor_int(hi) - floor_int(lo))
        .to_i64()
        .expect("consecutive floor difference is tiny")
}

/// Evaluates the tile color equations at level `lam`.
pub fn tile_colors(
    f_tag: FTag,
    x: &BigRational,
    lam: &BigRational,
) -> Result<WangTile7, WangError> {
    let f = f_tag.map();
    let x = f.reduce(x)?;
    let fx = f.eval(&x)?;
    let slope = f.slope_at(&x)?;
    let two_lam = lam * ratio(2, 1);
    let three_lam = lam * ratio(3, 1);

    let top = |k: i64| (&two_lam + ratio(k, 1)) * &x;
    let bot = |k: i64| (&three_lam + ratio(k, 1)) * &fx;

    let t1 = floor_diff(&top(1), &top(0));
    let t2 = floor_diff(&top(2), &top(1));
    let b1 = floor_diff(&bot(1), &bot(0));
    let b2 = floor_diff(&bot(2), &bot(1));
    let b3 = floor_diff(&bot(3), &bot(2));

    let half_s = &slope * ratio(1, 2);
    let third = ratio(1, 3);
    let l = &half_s * BigRational::from(floor_int(&top(0)))
        - &third * BigRational::from(floor_int(&bot(0)));
    let r = &half_s * BigRational::from(floor_int(&top(2)))
        - &third * BigRational::from(floor_int(&bot(3)));

    Ok(WangTile7 {
        t1,
        t2,
        l,
        b1,
        b2,
        b3,
        r,
        f_tag,
    })
}

/// The function tag a flow letter selects: `T` exactly on the plain letter
/// `t`, `T^-1` on everything else.
pub fn f_tag_of(letter: &FlowLetter) -> FTag {
    match letter {
        FlowLetter::Bs(BsLetter { r: 0, up: true }) => FTag::T,
        _ => FTag::TInv,
    }
}

/// A flow-plus-tile patch over `BS(2,3)`.
pub type BsConfigPatch = Patch<(FlowLetter, WangTile7)>;

/// Builds the ball window of the configuration driven by flow word `word`
/// and circle point `x`: cell `g` receives the flow letter `y_g` and the
/// tile `tile(f_tag(y_g), T^{beta_y(g)}(x), lambda(g))`.
pub fn build_bs_config(
    word: &FlowWord,
    x: &BigRational,
    radius: u32,
    cap: usize,
) -> Result<BsConfigPatch, WangError> {
    let flow_patch = flow_patch_from_word(word, radius, cap)?;
    let ctx = HeightContext::new(word.clone())?;
    let t_map = PLMap::circle_t();
    let x = t_map.reduce(x)?;
    let mut out = Patch::new(word.group, radius);
    for (g, letter) in flow_patch.cells() {
        let (beta_y, lam) = ctx.eval(g)?;
        let xg = t_map.orbit(&x, beta_y)?;
        let tile = tile_colors(f_tag_of(letter), &xg, &lam)?;
        out.insert(g.clone(), (*letter, tile));
    }
    Ok(out)
}

/// One broken rule instance in a flow-plus-tile patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WangViolation {
    pub cell: String,
    pub rule: &'static str,
    pub detail: String,
}

/// Validation outcome with per-family instance counts.
#[derive(Clone, Debug, Default)]
pub struct WangReport {
    pub violations: Vec<WangViolation>,
    pub checked: BTreeMap<&'static str, usize>,
}

impl WangReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn tick(&mut self, rule: &'static str) {
        *self.checked.entry(rule).or_insert(0) += 1;
    }
}

/// Checks every fully-supported rule instance: flow-layer validity, the
/// f-tag rule, the per-tile computing identity, the `a^2` side matching and
/// the two top-bottom matchings across `t`-edges.
pub fn validate_bs_patch(p: &BsConfigPatch) -> Result<WangReport, WangError> {
    let group = p.group;
    match group {
        Group::Bs { m: 2, n: 3 } => {}
        g => return Err(WangError::Flow(FlowError::UnsupportedGroup(g.to_string()))),
    }
    let mut report = WangReport::default();

    let flow_layer: Patch<FlowLetter> = p.map(|_, (letter, _)| *letter);
    let flow_report = validate_flow_patch(&flow_layer)?;
    for v in flow_report.violations {
        report.violations.push(WangViolation {
            cell: v.cell,
            rule: "flow",
            detail: v.detail,
        });
    }
    let flow_instances: usize = flow_report.checked.values().sum();
    *report.checked.entry("flow").or_insert(0) += flow_instances;

    let a = crate::group::Letter::s(0);
    let t = crate::group::Letter::t();
    for (g, (letter, tile)) in p.cells() {
        report.tick("f-tag");
        let want = f_tag_of(letter);
        if tile.f_tag != want {
            report.violations.push(WangViolation {
                cell: group.key(g),
                rule: "f-tag",
                detail: format!(
                    "flow letter {} demands {}, tile carries {}",
                    letter.render(),
                    want.render(),
                    tile.f_tag.render()
                ),
            });
        }

        report.tick("tile-identity");
        if !tile.computes_tagged_map() {
            report.violations.push(WangViolation {
                cell: group.key(g),
                rule: "tile-identity",
                detail: format!("tile {} computes no branch", tile.render_line()),
            });
        }

        // Side rule: r of g matches l of g a^2.
        let gaa = group.mul_letter(&group.mul_letter(g, a)?, a)?;
        if let Some((_, other)) = p.get(&gaa) {
            report.tick("match-a2");
            if tile.r != other.l {
                report.violations.push(WangViolation {
                    cell: group.key(g),
                    rule: "match-a2",
                    detail: format!(
                        "r = {} at {} vs l = {} at {}",
                        fmt_ratio(&tile.r),
                        group.key(g),
                        fmt_ratio(&other.l),
                        group.key(&gaa)
                    ),
                });
            }
        }

        // Top-bottom rules across the three cells above g: b_i pairs with
        // t1 of g t a^{i-1} and with t2 of g t a^{i-2}.
        let gt = group.mul_letter(g, t)?;
        let bottoms = [tile.b1, tile.b2, tile.b3];
        for (i, b) in bottoms.iter().enumerate() {
            let mut up = gt.clone();
            for _ in 0..i {
                up = group.mul_letter(&up, a)?;
            }
            // up = g t a^i reads b_{i+1} as its t1; its left neighbor
            // g t a^{i-1} reads the same color as its t2.
            if let Some((_, above)) = p.get(&up) {
                report.tick("match-t1");
                if *b != above.t1 {
                    report.violations.push(WangViolation {
                        cell: group.key(g),
                        rule: "match-t1",
                        detail: format!(
                            "b{} = {} at {} vs t1 = {} at {}",
                            i + 1,
                            b,
                            group.key(g),
                            above.t1,
                            group.key(&up)
                        ),
                    });
                }
            }
            let left = group.mul_letter(&up, a.inverse())?;
            if let Some((_, above)) = p.get(&left) {
                report.tick("match-t2");
                if *b != above.t2 {
                    report.violations.push(WangViolation {
                        cell: group.key(g),
                        rule: "match-t2",
                        detail: format!(
                            "b{} = {} at {} vs t2 = {} at {}",
                            i + 1,
                            b,
                            group.key(g),
                            above.t2,
                            group.key(&left)
                        ),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The distinct tiles used by a patch.
pub fn distinct_tiles(p: &BsConfigPatch) -> BTreeSet<WangTile7> {
    p.cells().map(|(_, (_, tile))| tile.clone()).collect()
}

/// Serializes a patch as `<normal-form-key> <flow-letter> <tile-line>`.
pub fn render_bs_patch(p: &BsConfigPatch) -> String {
    let mut out = String::new();
    for (g, (letter, tile)) in p.cells() {
        out.push_str(&format!(
            "{} {} {}\n",
            p.group.key(g),
            letter.render(),
            tile.render_line()
        ));
    }
    out
}

/// Parses `<normal-form-key> <flow-letter> <tile-line>` lines.
pub fn parse_bs_patch(group: &Group, radius: u32, body: &str) -> Result<BsConfigPatch, WangError> {
    let mut p = Patch::new(*group, radius);
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || WangError::BadPatchLine(i + 1, line.to_string());
        let mut parts = line.splitn(3, char::is_whitespace);
        let key = parts.next().ok_or_else(bad)?;
        let letter = parts.next().ok_or_else(bad)?;
        let tile_line = parts.next().ok_or_else(bad)?;
        let g = group.parse_element(key)?;
        let letter = crate::flow::parse_flow_letter(group, letter)?;
        let tile = WangTile7::parse_line(tile_line)?;
        p.insert(g, (letter, tile));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::lambda_word;
    use crate::patch::{scan_periods, PeriodStatus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const CAP: usize = 200_000;

    fn bs23() -> Group {
        Group::Bs { m: 2, n: 3 }
    }

    fn fw(s: &str) -> FlowWord {
        FlowWord::parse(bs23(), s).unwrap()
    }

    fn sample_lambdas(count: usize, seed: u64) -> Vec<BigRational> {
        use crate::group::Letter;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = [Letter::s(0), Letter::s_inv(0), Letter::t(), Letter::t_inv()];
        (0..count)
            .map(|_| {
                let len = rng.gen_range(0..10);
                let w: Vec<_> = (0..len).map(|_| pool[rng.gen_range(0..4)]).collect();
                lambda_word(&w)
            })
            .collect()
    }

    #[test]
    fn pl_eval_pinned() {
        let t = PLMap::circle_t();
        assert_eq!(t.eval(&ratio(1, 2)).unwrap(), ratio(5, 4));
        assert_eq!(t.eval(&ratio(2, 1)).unwrap(), ratio(1, 5));
        // The closed branch endpoint maps across the seam.
        assert_eq!(t.eval(&ratio(1, 1)).unwrap(), ratio(1, 10));
        let t_inv = PLMap::circle_t_inv();
        assert_eq!(t_inv.eval(&ratio(1, 5)).unwrap(), ratio(2, 1));
        // 1/10 is covered by the inverse only through its seam alias 5/2.
        assert_eq!(t_inv.eval(&ratio(1, 10)).unwrap(), ratio(1, 1));
        assert!(matches!(
            t.eval(&ratio(3, 1)),
            Err(WangError::OutsideCircle(_))
        ));
    }

    #[test]
    fn inverse_matches_reference_branches() {
        let inv = PLMap::circle_t().inverse();
        let b = inv.branches();
        assert_eq!(b.len(), 2);
        assert_eq!((&b[0].lo, &b[0].hi), (&ratio(1, 10), &ratio(1, 4)));
        assert!(!b[0].lo_closed && !b[0].hi_closed);
        assert_eq!(b[0].slope, ratio(10, 1));
        assert_eq!((&b[1].lo, &b[1].hi), (&ratio(1, 4), &ratio(5, 2)));
        assert!(b[1].lo_closed && b[1].hi_closed);
        assert_eq!(b[1].slope, ratio(2, 5));
    }

    #[test]
    fn eval_round_trips_through_inverse() {
        let t = PLMap::circle_t();
        let t_inv = t.inverse();
        for num in 6..150 {
            let x = ratio(num, 60);
            let y = t.eval(&x).unwrap();
            assert_eq!(t_inv.eval(&y).unwrap(), t.reduce(&x).unwrap());
        }
    }

    #[test]
    fn orbit_pinned() {
        let t = PLMap::circle_t();
        let half = ratio(1, 2);
        assert_eq!(t.orbit(&half, 0).unwrap(), half);
        // T(1/2) = 5/4, then T(5/4) = 1/8, which stays inside the circle.
        assert_eq!(t.orbit(&half, 2).unwrap(), ratio(1, 8));
        assert_eq!(t.orbit(&half, -1).unwrap(), ratio(1, 5));
        let x = ratio(7, 6);
        let far = t.orbit(&x, 9).unwrap();
        assert_eq!(t.orbit(&far, -9).unwrap(), x);
    }

    #[test]
    fn t_is_aperiodic_on_samples() {
        let t = PLMap::circle_t();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let x = ratio(rng.gen_range(6..150), 60);
            let x = t.reduce(&x).unwrap();
            let mut cur = x.clone();
            for k in 1..=40 {
                cur = t.eval(&cur).unwrap();
                assert_ne!(cur, x, "period {k} at x = {}", fmt_ratio(&x));
            }
        }
    }

    #[test]
    fn map_construction_guards() {
        let mk = |slope: BigRational| {
            PLMap::new(
                ratio(0, 1),
                ratio(1, 1),
                vec![Branch {
                    lo: ratio(0, 1),
                    hi: ratio(1, 1),
                    lo_closed: true,
                    hi_closed: false,
                    slope,
                }],
            )
        };
        assert!(mk(ratio(2, 1)).is_ok());
        assert!(matches!(mk(ratio(3, 2)), Err(WangError::BadMap(_))));
        assert!(matches!(mk(ratio(2, 3)), Err(WangError::BadMap(_))));
        assert!(matches!(mk(ratio(-1, 2)), Err(WangError::BadMap(_))));

        // A gap between branches is rejected.
        let gappy = PLMap::new(
            ratio(0, 1),
            ratio(2, 1),
            vec![
                Branch {
                    lo: ratio(0, 1),
                    hi: ratio(1, 2),
                    lo_closed: true,
                    hi_closed: true,
                    slope: ratio(2, 1),
                },
                Branch {
                    lo: ratio(1, 1),
                    hi: ratio(2, 1),
                    lo_closed: true,
                    hi_closed: false,
                    slope: ratio(2, 1),
                },
            ],
        );
        assert!(matches!(gappy, Err(WangError::BadMap(_))));

        // Covering an interior boundary twice is rejected.
        let doubled = PLMap::new(
            ratio(0, 1),
            ratio(2, 1),
            vec![
                Branch {
                    lo: ratio(0, 1),
                    hi: ratio(1, 1),
                    lo_closed: true,
                    hi_closed: true,
                    slope: ratio(2, 1),
                },
                Branch {
                    lo: ratio(1, 1),
                    hi: ratio(2, 1),
                    lo_closed: true,
                    hi_closed: false,
                    slope: ratio(2, 1),
                },
            ],
        );
        assert!(matches!(doubled, Err(WangError::BadMap(_))));
    }

    #[test]
    fn tile_pinned_example() {
        let tile = tile_colors(FTag::T, &ratio(1, 2), &ratio(0, 1)).unwrap();
        assert_eq!((tile.t1, tile.t2), (0, 1));
        assert_eq!((tile.b1, tile.b2, tile.b3), (1, 1, 1));
        assert_eq!(tile.l, ratio(0, 1));
        assert_eq!(tile.r, ratio(1, 4));
        assert!(tile.computes_tagged_map());
    }

    #[test]
    fn computing_identity_and_color_bounds_quantified() {
        let xs = [ratio(1, 2), ratio(7, 6), ratio(33, 20), ratio(1, 10)];
        let lambdas = sample_lambdas(200, 22);
        let mut samples = 0usize;
        for f_tag in [FTag::T, FTag::TInv] {
            let f = f_tag.map();
            for x in &xs {
                let lo_x = floor_int(x);
                let hi_x = floor_int(&(x + BigRational::one()));
                let fx = f.eval(x).unwrap();
                let lo_fx = floor_int(&fx);
                let hi_fx = floor_int(&(&fx + BigRational::one()));
                for lam in &lambdas {
                    let tile = tile_colors(f_tag, x, lam).unwrap();
                    assert!(tile.computes_tagged_map(), "{}", tile.render_line());
                    for c in [tile.t1, tile.t2] {
                        let c = num_bigint::BigInt::from(c);
                        assert!(c == lo_x || c == hi_x, "top color out of range");
                    }
                    for c in [tile.b1, tile.b2, tile.b3] {
                        let c = num_bigint::BigInt::from(c);
                        assert!(c == lo_fx || c == hi_fx, "bottom color out of range");
                    }
                    samples += 1;
                }
            }
        }
        assert!(samples >= 1_000);
    }

    #[test]
    fn side_rule_closed_form() {
        let xs = [ratio(1, 2), ratio(7, 6), ratio(12, 5)];
        let lambdas = sample_lambdas(120, 23);
        for f_tag in [FTag::T, FTag::TInv] {
            for x in &xs {
                for lam in &lambdas {
                    let here = tile_colors(f_tag, x, lam).unwrap();
                    let shifted = tile_colors(f_tag, x, &(lam + BigRational::one())).unwrap();
                    assert_eq!(here.r, shifted.l, "lambda = {}", fmt_ratio(lam));
                }
            }
        }
    }

    #[test]
    fn top_bottom_rules_closed_form() {
        let xs = [ratio(1, 2), ratio(7, 6), ratio(33, 20)];
        let lambdas = sample_lambdas(120, 24);
        for f_tag in [FTag::T, FTag::TInv] {
            let f = f_tag.map();
            for x in &xs {
                let fx = f.eval(x).unwrap();
                for lam in &lambdas {
                    let here = tile_colors(f_tag, x, lam).unwrap();
                    let bottoms = [here.b1, here.b2, here.b3];
                    for i in 0..3i64 {
                        // The cell above at offset i has level (3/2)lam + i/2
                        // and circle point f(x); its t1 reads b_{i+1}, its
                        // right neighbor's t2 reads the same color.
                        let lam_up = lam * ratio(3, 2) + ratio(i, 2);
                        for up_tag in [FTag::T, FTag::TInv] {
                            let up = tile_colors(up_tag, &fx, &lam_up).unwrap();
                            assert_eq!(bottoms[i as usize], up.t1);
                            let lam_left = lam * ratio(3, 2) + ratio(i - 1, 2);
                            let left = tile_colors(up_tag, &fx, &lam_left).unwrap();
                            assert_eq!(bottoms[i as usize], left.t2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn build_validates_for_many_words() {
        for s in ["tattat", "TaTTaT", "tataTaT", "ttttt"] {
            let p = build_bs_config(&fw(s), &ratio(1, 2), 3, CAP).unwrap();
            let report = validate_bs_patch(&p).unwrap();
            assert!(
                report.is_valid(),
                "word {s}: {:?}",
                report.violations.first()
            );
            for family in ["f-tag", "tile-identity", "match-a2", "match-t1", "match-t2"] {
                assert!(
                    report.checked.get(family).copied().unwrap_or(0) > 0,
                    "family {family} never checked for {s}"
                );
            }
        }
    }

    #[test]
    fn build_radius_zero_is_vacuously_valid() {
        let p = build_bs_config(&fw("t"), &ratio(1, 2), 0, CAP).unwrap();
        assert_eq!(p.len(), 1);
        assert!(validate_bs_patch(&p).unwrap().is_valid());
    }

    #[test]
    fn f_tag_follows_flow_letter() {
        let g = bs23();
        let p = build_bs_config(&fw("ttt"), &ratio(1, 2), 2, CAP).unwrap();
        let (letter, tile) = p.get(&g.identity()).unwrap();
        assert_eq!(letter.render(), "t");
        assert_eq!(tile.f_tag, FTag::T);
        let a_cell = g.parse_element("a").unwrap();
        let (letter, tile) = p.get(&a_cell).unwrap();
        assert_eq!(letter.render(), "at");
        assert_eq!(tile.f_tag, FTag::TInv);
    }

    #[test]
    fn perturbing_one_carry_is_detected_locally() {
        let g = bs23();
        let mut p = build_bs_config(&fw("tattat"), &ratio(1, 2), 3, CAP).unwrap();
        let id = g.identity();
        let (letter, mut tile) = p.get(&id).cloned().unwrap();
        tile.r += BigRational::one();
        p.insert(id.clone(), (letter, tile));
        let report = validate_bs_patch(&p).unwrap();
        assert!(!report.is_valid());
        for v in &report.violations {
            assert_eq!(v.cell, g.key(&id), "{:?}", v);
            assert!(
                v.rule == "match-a2" || v.rule == "tile-identity",
                "unexpected family {}",
                v.rule
            );
        }
    }

    #[test]
    fn word_too_short_for_radius() {
        let err = build_bs_config(&fw("t"), &ratio(1, 2), 3, CAP);
        assert!(matches!(
            err,
            Err(WangError::Flow(FlowError::PrefixTooShort { .. }))
        ));
    }

    #[test]
    fn tile_line_round_trip() {
        let p = build_bs_config(&fw("tataT"), &ratio(7, 6), 2, CAP).unwrap();
        for tile in distinct_tiles(&p) {
            let line = tile.render_line();
            assert_eq!(WangTile7::parse_line(&line).unwrap(), tile);
        }
        assert!(WangTile7::parse_line("1 2 | x | 3 4 5 | 0 | T").is_err());
        assert!(WangTile7::parse_line("1 2 | 0 | 3 4 5 | 0 | Q").is_err());
    }

    #[test]
    fn patch_serialization_round_trip() {
        let g = bs23();
        let p = build_bs_config(&fw("tattat"), &ratio(1, 2), 2, CAP).unwrap();
        let text = render_bs_patch(&p);
        let back = parse_bs_patch(&g, 2, &text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn tileset_is_small() {
        let p = build_bs_config(&fw("tattattat"), &ratio(1, 2), 4, CAP).unwrap();
        let tiles = distinct_tiles(&p);
        assert!(tiles.len() < p.len());
        assert!(!tiles.is_empty());
    }

    #[test]
    fn no_surviving_periods_at_small_scale() {
        let p = build_bs_config(&fw("tattattat"), &ratio(1, 2), 4, CAP).unwrap();
        let scan = scan_periods(&p, 1, 1, CAP).unwrap();
        assert!(scan.survivors().is_empty(), "{:?}", scan.survivors());
        assert!(!scan.with_status(PeriodStatus::Eliminated).is_empty());
    }

    #[test]
    fn constant_tile_patch_keeps_a2_period() {
        let g = bs23();
        let tile = tile_colors(FTag::T, &ratio(1, 2), &ratio(0, 1)).unwrap();
        let ball = g.ball(3, CAP).unwrap();
        let mut p: Patch<WangTile7> = Patch::new(g, 3);
        for cell in ball.elements() {
            p.insert(cell.clone(), tile.clone());
        }
        let scan = scan_periods(&p, 2, 1, CAP).unwrap();
        let keys: Vec<&str> = scan.survivors().iter().map(|c| c.key.as_str()).collect();
        assert!(keys.contains(&"aa"), "survivors {keys:?}");
    }
}
