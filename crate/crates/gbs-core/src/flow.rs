//! The tree-flow subshift.
//!
//! A configuration assigns to every group element one outgoing direction; the
//! local rules force all directions to point toward a single end, so valid
//! configurations correspond to semi-infinite words:
//!
//! * over `F_n` (and `F_n x Z`, constant along `t`): the alphabet is the
//!   generator letters, consecutive word letters never cancel, and every
//!   off-path cell points back toward the path with the inverse of its last
//!   letter;
//! * over `BS(2,3)`: the alphabet is `A = {t, at, t^-1, at^-1, a^2 t^-1}`,
//!   read as directions between `<a>`-cosets of the Bass-Serre tree. Within a
//!   coset the chosen direction is periodic (period 2 upward, period 3
//!   downward), adjacent cells of one coset aim at the same neighbor coset,
//!   and all non-chosen neighbor cosets point back in.
//!
//! Flow words over `A` must be reduced (no `(up, t^-1)` or `(down, t)`
//! adjacency at offset zero): such a pair crosses a tree edge and
//! immediately crosses it back, exactly as a cancelling pair does over
//! `F_n`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::group::{Ball, BsLetter, Group, GroupError, Letter, NormalForm};
use crate::patch::Patch;

/// Errors from flow-word and flow-patch operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("flow machinery supports F_n, F_n x Z and BS(2,3); got {0}")]
    UnsupportedGroup(String),
    #[error("flow word needs at least {needed} letters for radius {radius}, got {have}")]
    PrefixTooShort {
        radius: u32,
        needed: usize,
        have: usize,
    },
    #[error("flow word exhausted at position {0}")]
    WordExhausted(usize),
    #[error("letters {0} and {1} cancel at position {2}")]
    NotReduced(String, String, usize),
    #[error("letter {0:?} is not in the flow alphabet of {1}")]
    BadLetter(String, String),
    #[error("patch is invalid: {violations} rule violations")]
    InvalidPatch { violations: usize },
    #[error("patch does not contain the identity cell")]
    MissingIdentity,
    #[error("candidate period is the identity")]
    IdentityPeriod,
    #[error("radius {radius} below the conclusive bound 2|g| = {needed}")]
    RadiusTooSmall { radius: u32, needed: u32 },
    #[error("no admissible error letter exists (free rank too small)")]
    NoErrorLetter,
    #[error("flow word is empty")]
    EmptyWord,
    #[error("enumeration budget of {0} nodes exceeded")]
    SearchBudget(usize),
    #[error("bad flow patch line {0}: {1}")]
    BadPatchLine(usize, String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One letter of a flow configuration: a generator direction over free
/// groups, a coset direction over `BS(2,3)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FlowLetter {
    Fn(Letter),
    Bs(BsLetter),
}

impl FlowLetter {
    pub fn render(&self) -> String {
        match self {
            FlowLetter::Fn(l) => l.to_char().to_string(),
            FlowLetter::Bs(b) => b.render(),
        }
    }
}

/// The flow alphabet of a group, in canonical enumeration order.
pub fn flow_alphabet(group: &Group) -> Result<Vec<FlowLetter>, FlowError> {
    match group {
        Group::Free { rank } | Group::FreeTimesZ { rank } => {
            let mut out = Vec::new();
            for i in 0..*rank {
                out.push(FlowLetter::Fn(Letter::s(i)));
                out.push(FlowLetter::Fn(Letter::s_inv(i)));
            }
            Ok(out)
        }
        Group::Bs { m: 2, n: 3 } => Ok(vec![
            FlowLetter::Bs(BsLetter { r: 0, up: true }),
            FlowLetter::Bs(BsLetter { r: 1, up: true }),
            FlowLetter::Bs(BsLetter { r: 0, up: false }),
            FlowLetter::Bs(BsLetter { r: 1, up: false }),
            FlowLetter::Bs(BsLetter { r: 2, up: false }),
        ]),
        g => Err(FlowError::UnsupportedGroup(g.to_string())),
    }
}

/// Whether two consecutive flow letters are admissible.
fn admissible_step(prev: &FlowLetter, next: &FlowLetter) -> bool {
    match (prev, next) {
        (FlowLetter::Fn(p), FlowLetter::Fn(n)) => *n != p.inverse(),
        (FlowLetter::Bs(p), FlowLetter::Bs(n)) => !(n.r == 0 && n.up != p.up),
        _ => false,
    }
}

/// A finite prefix of an infinite flow word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlowWord {
    pub group: Group,
    letters: Vec<FlowLetter>,
}

impl FlowWord {
    /// Validates alphabet membership and reducedness.
    pub fn new(group: Group, letters: Vec<FlowLetter>) -> Result<FlowWord, FlowError> {
        let alphabet = flow_alphabet(&group)?;
        for (i, l) in letters.iter().enumerate() {
            if !alphabet.contains(l) {
                return Err(FlowError::BadLetter(l.render(), group.to_string()));
            }
            if i > 0 && !admissible_step(&letters[i - 1], l) {
                return Err(FlowError::NotReduced(
                    letters[i - 1].render(),
                    l.render(),
                    i,
                ));
            }
        }
        Ok(FlowWord { group, letters })
    }

    /// Parses the plain letter-string serialization.
    pub fn parse(group: Group, s: &str) -> Result<FlowWord, FlowError> {
        let mut letters = Vec::new();
        match group {
            Group::Free { .. } | Group::FreeTimesZ { .. } => {
                for c in s.chars() {
                    if c.is_whitespace() {
                        continue;
                    }
                    let l = Letter::from_char(c).map_err(FlowError::Group)?;
                    letters.push(FlowLetter::Fn(l));
                }
            }
            Group::Bs { .. } => {
                let mut run = 0u32;
                for c in s.chars() {
                    match c {
                        'a' => run += 1,
                        't' => {
                            letters.push(FlowLetter::Bs(BsLetter { r: run, up: true }));
                            run = 0;
                        }
                        'T' => {
                            letters.push(FlowLetter::Bs(BsLetter { r: run, up: false }));
                            run = 0;
                        }
                        c if c.is_whitespace() => {}
                        _ => return Err(FlowError::BadLetter(c.to_string(), group.to_string())),
                    }
                }
                if run != 0 {
                    return Err(FlowError::BadLetter(
                        format!("trailing a^{run}"),
                        group.to_string(),
                    ));
                }
            }
        }
        FlowWord::new(group, letters)
    }

    pub fn letters(&self) -> &[FlowLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters.iter().map(|l| l.render()).collect()
    }

    pub fn prefix(&self, len: usize) -> FlowWord {
        FlowWord {
            group: self.group,
            letters: self.letters[..len.min(self.letters.len())].to_vec(),
        }
    }
}

/// Parses one flow letter (for patch files).
pub fn parse_flow_letter(group: &Group, s: &str) -> Result<FlowLetter, FlowError> {
    let w = FlowWord::parse(*group, s)?;
    if w.len() != 1 {
        return Err(FlowError::BadLetter(s.to_string(), group.to_string()));
    }
    Ok(w.letters[0])
}

/// A flow letter as a group element (for stepping along the flow).
pub fn letter_element(group: &Group, l: &FlowLetter) -> Result<NormalForm, FlowError> {
    match l {
        FlowLetter::Fn(letter) => Ok(group.mul_letter(&group.identity(), *letter)?),
        FlowLetter::Bs(b) => {
            let mut letters = vec![Letter::s(0); b.r as usize];
            letters.push(if b.up { Letter::t() } else { Letter::t_inv() });
            Ok(group.element_from_letters(&letters)?)
        }
    }
}

/// One step along the flow: `g` to `g * letter`.
pub fn step(group: &Group, g: &NormalForm, l: &FlowLetter) -> Result<NormalForm, FlowError> {
    match l {
        FlowLetter::Fn(letter) => Ok(group.mul_letter(g, *letter)?),
        FlowLetter::Bs(_) => {
            let le = letter_element(group, l)?;
            Ok(group.multiply(g, &le)?)
        }
    }
}

fn fn_part<'a>(group: &Group, cell: &'a NormalForm) -> Result<&'a [Letter], FlowError> {
    match (group, cell) {
        (Group::Free { .. }, NormalForm::Free(w)) => Ok(w),
        (Group::FreeTimesZ { .. }, NormalForm::FnZ { w, .. }) => Ok(w),
        _ => Err(FlowError::UnsupportedGroup(group.to_string())),
    }
}

fn word_fn_letters(word: &FlowWord) -> Vec<Letter> {
    word.letters
        .iter()
        .map(|l| match l {
            FlowLetter::Fn(letter) => *letter,
            FlowLetter::Bs(_) => unreachable!("group kind checked at construction"),
        })
        .collect()
}

fn word_bs_letters(word: &FlowWord) -> Vec<BsLetter> {
    word.letters
        .iter()
        .map(|l| match l {
            FlowLetter::Bs(b) => *b,
            FlowLetter::Fn(_) => unreachable!("group kind checked at construction"),
        })
        .collect()
}

fn lcp_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

/// The letter of the configuration built from `word` at a single cell,
/// evaluated in closed form.
///
/// Free case: path cells read the next word letter; off-path cells point
/// back with the inverse of their last letter. `BS(2,3)` case: a cell
/// `w a^k` whose coset lies on the word ray aims at the coset continuing
/// the ray, shifted to its own offset (`a^((r-k) mod 2) t` upward,
/// `a^((r-k) mod 3) t^-1` downward); a cell off the ray aims back at its
/// parent coset (`a^((-k) mod 3) t^-1` above an up-letter, `a^((-k) mod 2)
/// t` below a down-letter).
pub fn flow_letter_at(word: &FlowWord, cell: &NormalForm) -> Result<FlowLetter, FlowError> {
    let group = word.group;
    match group {
        Group::Free { .. } | Group::FreeTimesZ { .. } => {
            let w = fn_part(&group, cell)?;
            let wl = word_fn_letters(word);
            let j = lcp_len(w, &wl);
            if j == w.len() {
                match wl.get(j) {
                    Some(l) => Ok(FlowLetter::Fn(*l)),
                    None => Err(FlowError::WordExhausted(j)),
                }
            } else {
                Ok(FlowLetter::Fn(w[w.len() - 1].inverse()))
            }
        }
        Group::Bs { .. } => {
            let (prefix, k) = match cell {
                NormalForm::Bs { prefix, k } => (prefix, *k),
                _ => return Err(FlowError::UnsupportedGroup(group.to_string())),
            };
            let wl = word_bs_letters(word);
            let j = lcp_len(prefix, &wl);
            if j == prefix.len() {
                let target = wl.get(j).ok_or(FlowError::WordExhausted(j))?;
                let modulus: i64 = if target.up { 2 } else { 3 };
                let r = (target.r as i64 - k).rem_euclid(modulus) as u32;
                Ok(FlowLetter::Bs(BsLetter { r, up: target.up }))
            } else {
                let last = prefix[prefix.len() - 1];
                // Aim back at the parent coset: down if we entered upward.
                let up = !last.up;
                let modulus: i64 = if up { 2 } else { 3 };
                let r = (-k).rem_euclid(modulus) as u32;
                Ok(FlowLetter::Bs(BsLetter { r, up }))
            }
        }
    }
}

/// A flow patch: one flow letter per supported cell.
pub type FlowPatch = Patch<FlowLetter>;

fn patch_on_ball(word: &FlowWord, ball: &Ball) -> Result<FlowPatch, FlowError> {
    let mut p = Patch::new(ball.group, ball.radius);
    for cell in ball.elements() {
        p.insert(cell.clone(), flow_letter_at(word, cell)?);
    }
    Ok(p)
}

/// Builds the radius-`radius` window of the configuration encoded by `word`.
///
/// Over `F_n` this needs exactly `radius + 1` letters; over `BS(2,3)` the
/// demand depends on how fast the word ray leaves the ball, so the word is
/// consumed on demand and a shortfall is reported as `PrefixTooShort`.
pub fn flow_patch_from_word(
    word: &FlowWord,
    radius: u32,
    cap: usize,
) -> Result<FlowPatch, FlowError> {
    let ball = word.group.ball(radius, cap)?;
    match patch_on_ball(word, &ball) {
        Err(FlowError::WordExhausted(j)) => Err(FlowError::PrefixTooShort {
            radius,
            needed: j + 1,
            have: word.len(),
        }),
        other => other,
    }
}

/// Window of the translated configuration `sigma^g(y_word)`: cell `h` reads
/// the letter of `y_word` at `g^-1 h`.
pub fn translate_window(
    word: &FlowWord,
    g: &NormalForm,
    radius: u32,
    cap: usize,
) -> Result<FlowPatch, FlowError> {
    let group = word.group;
    let ball = group.ball(radius, cap)?;
    let g_inv = group.invert(g)?;
    let mut p = Patch::new(group, radius);
    for cell in ball.elements() {
        let source = group.multiply(&g_inv, cell)?;
        p.insert(cell.clone(), flow_letter_at(word, &source)?);
    }
    Ok(p)
}

/// One broken rule instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowViolation {
    pub cell: String,
    pub rule: &'static str,
    pub detail: String,
}

/// Validation outcome: violations plus the number of checked instances per
/// rule family (a patch with no checkable instances is vacuously valid).
#[derive(Clone, Debug, Default)]
pub struct FlowReport {
    pub violations: Vec<FlowViolation>,
    pub checked: BTreeMap<&'static str, usize>,
}

impl FlowReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn tick(&mut self, rule: &'static str) {
        *self.checked.entry(rule).or_insert(0) += 1;
    }
}

fn bs_coset(nf: &NormalForm) -> &[BsLetter] {
    match nf {
        NormalForm::Bs { prefix, .. } => prefix,
        _ => unreachable!("BS cells only"),
    }
}

fn as_fn_letter(group: &Group, l: &FlowLetter) -> Result<Letter, FlowError> {
    match l {
        FlowLetter::Fn(letter) => Ok(*letter),
        FlowLetter::Bs(_) => Err(FlowError::BadLetter(l.render(), group.to_string())),
    }
}

fn as_bs_letter(group: &Group, l: &FlowLetter) -> Result<BsLetter, FlowError> {
    match l {
        FlowLetter::Bs(b) => Ok(*b),
        FlowLetter::Fn(_) => Err(FlowError::BadLetter(l.render(), group.to_string())),
    }
}

/// Checks every rule instance whose support lies inside the patch.
pub fn validate_flow_patch(p: &FlowPatch) -> Result<FlowReport, FlowError> {
    let group = p.group;
    let mut report = FlowReport::default();
    match group {
        Group::Free { .. } | Group::FreeTimesZ { .. } => {
            let alphabet = flow_alphabet(&group)?;
            for (g, lab) in p.cells() {
                let s = as_fn_letter(&group, lab)?;
                for al in &alphabet {
                    let s2 = as_fn_letter(&group, al)?;
                    let neighbor = group.mul_letter(g, s2)?;
                    let Some(nlab) = p.get(&neighbor) else {
                        continue;
                    };
                    let nletter = as_fn_letter(&group, nlab)?;
                    if s2 == s {
                        report.tick("no-backflow");
                        if nletter == s.inverse() {
                            report.violations.push(FlowViolation {
                                cell: group.key(g),
                                rule: "no-backflow",
                                detail: format!(
                                    "cell {} flows {} but {} flows straight back",
                                    group.key(g),
                                    s,
                                    group.key(&neighbor)
                                ),
                            });
                        }
                    } else {
                        report.tick("incoming");
                        if nletter != s2.inverse() {
                            report.violations.push(FlowViolation {
                                cell: group.key(&neighbor),
                                rule: "incoming",
                                detail: format!(
                                    "cell {} must point back with {}, found {}",
                                    group.key(&neighbor),
                                    s2.inverse(),
                                    nletter
                                ),
                            });
                        }
                    }
                }
                if matches!(group, Group::FreeTimesZ { .. }) {
                    for tl in [Letter::t(), Letter::t_inv()] {
                        let neighbor = group.mul_letter(g, tl)?;
                        if let Some(nlab) = p.get(&neighbor) {
                            report.tick("t-invariance");
                            if nlab != lab {
                                report.violations.push(FlowViolation {
                                    cell: group.key(g),
                                    rule: "t-invariance",
                                    detail: format!(
                                        "letters differ along t between {} and {}",
                                        group.key(g),
                                        group.key(&neighbor)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
        Group::Bs { .. } => {
            let alphabet = flow_alphabet(&group)?;
            let a = Letter::s(0);
            for (g, lab) in p.cells() {
                let u = as_bs_letter(&group, lab)?;
                let target = step(&group, g, lab)?;
                let chosen = bs_coset(&target).to_vec();

                // Coset periodicity: period 2 above, period 3 below.
                let period = if u.up { 2 } else { 3 };
                let mut shifted = g.clone();
                for _ in 0..period {
                    shifted = group.mul_letter(&shifted, a)?;
                }
                if let Some(nlab) = p.get(&shifted) {
                    report.tick("coset-period");
                    if *nlab != *lab {
                        report.violations.push(FlowViolation {
                            cell: group.key(g),
                            rule: "coset-period",
                            detail: format!(
                                "letter at {} must repeat at {} with period {}",
                                group.key(g),
                                group.key(&shifted),
                                period
                            ),
                        });
                    }
                }

                // Pair coherence: adjacent cells of one coset aim at the
                // same neighbor coset.
                let ga = group.mul_letter(g, a)?;
                if let Some(nlab) = p.get(&ga) {
                    report.tick("pair-coherence");
                    let their = step(&group, &ga, nlab)?;
                    if bs_coset(&their) != chosen.as_slice() {
                        report.violations.push(FlowViolation {
                            cell: group.key(g),
                            rule: "pair-coherence",
                            detail: format!(
                                "{} and {} aim at different cosets",
                                group.key(g),
                                group.key(&ga)
                            ),
                        });
                    }
                }

                // Incoming: every non-chosen neighbor coset points back in.
                for v in &alphabet {
                    let ve = letter_element(&group, v)?;
                    let v_inv = group.invert(&ve)?;
                    let c = group.multiply(g, &v_inv)?;
                    if bs_coset(&c) == chosen.as_slice() {
                        continue;
                    }
                    if let Some(clab) = p.get(&c) {
                        report.tick("incoming");
                        if clab != v {
                            report.violations.push(FlowViolation {
                                cell: group.key(&c),
                                rule: "incoming",
                                detail: format!(
                                    "cell {} must aim at the coset of {} with {}, found {}",
                                    group.key(&c),
                                    group.key(g),
                                    v.render(),
                                    clab.render()
                                ),
                            });
                        }
                    }
                }

                // No backflow: the chosen coset must not point straight back.
                if let Some(zlab) = p.get(&target) {
                    report.tick("no-backflow");
                    let ztarget = step(&group, &target, zlab)?;
                    if bs_coset(&ztarget) == bs_coset(g) {
                        report.violations.push(FlowViolation {
                            cell: group.key(&target),
                            rule: "no-backflow",
                            detail: format!(
                                "cell {} flows back into the coset of {}",
                                group.key(&target),
                                group.key(g)
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Reads the flow word by following the flow from the identity while the
/// walk stays inside the patch.
///
/// Errors if the patch is invalid or the identity cell is missing. On a
/// full `F_n` ball of radius `r` the result has length `r + 1`; over
/// `BS(2,3)` the walk may leave the ball earlier because `A`-letters have
/// generator length up to 3.
pub fn word_of_patch(p: &FlowPatch) -> Result<FlowWord, FlowError> {
    let report = validate_flow_patch(p)?;
    if !report.is_valid() {
        return Err(FlowError::InvalidPatch {
            violations: report.violations.len(),
        });
    }
    let group = p.group;
    let mut cur = group.identity();
    if !p.contains(&cur) {
        return Err(FlowError::MissingIdentity);
    }
    let mut letters = Vec::new();
    // The walk is a geodesic ray in the coset tree, so it leaves the finite
    // patch after at most `len` steps; the bound is just a guard.
    for _ in 0..=p.len() {
        let Some(lab) = p.get(&cur) else { break };
        letters.push(*lab);
        cur = step(&group, &cur, lab)?;
    }
    FlowWord::new(group, letters)
}

/// Serializes a patch as `<normal-form-key> <letter>` lines.
pub fn render_flow_patch(p: &FlowPatch) -> String {
    let mut out = String::new();
    for (cell, lab) in p.cells() {
        out.push_str(&p.group.key(cell));
        out.push(' ');
        out.push_str(&lab.render());
        out.push('\n');
    }
    out
}

/// Parses `<normal-form-key> <letter>` lines.
pub fn parse_flow_patch(group: &Group, radius: u32, body: &str) -> Result<FlowPatch, FlowError> {
    let mut p = Patch::new(*group, radius);
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(key), Some(letter), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(FlowError::BadPatchLine(i + 1, line.to_string()));
        };
        let cell = group.parse_element(key)?;
        let lab = parse_flow_letter(group, letter)?;
        p.insert(cell, lab);
    }
    Ok(p)
}

/// All valid flow words of exactly the given length, lexicographic in the
/// canonical alphabet order.
pub fn enumerate_flow_words(group: &Group, len: usize) -> Result<Vec<FlowWord>, FlowError> {
    let alphabet = flow_alphabet(group)?;
    fn rec(
        alphabet: &[FlowLetter],
        len: usize,
        cur: &mut Vec<FlowLetter>,
        group: &Group,
        out: &mut Vec<FlowWord>,
    ) {
        if cur.len() == len {
            out.push(FlowWord {
                group: *group,
                letters: cur.clone(),
            });
            return;
        }
        for l in alphabet {
            if let Some(prev) = cur.last() {
                if !admissible_step(prev, l) {
                    continue;
                }
            }
            cur.push(*l);
            rec(alphabet, len, cur, group, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<FlowLetter> = Vec::with_capacity(len);
    rec(&alphabet, len, &mut cur, group, &mut out);
    Ok(out)
}

/// Result of the period-forcing check for one candidate period.
#[derive(Clone, Debug)]
pub struct PeriodForcesReport {
    pub candidate: String,
    pub words_checked: usize,
    /// Words whose configuration is invariant under the candidate on the
    /// ball overlap.
    pub survivors: Vec<FlowWord>,
    /// The admissible words: powers of the candidate or its inverse (free
    /// case), of the coset prefix `w` of `g^-1 = w a^k` (`BS(2,3)` case);
    /// empty when no invariant configuration may exist.
    pub expected: Vec<String>,
    /// True when every survivor is an expected word.
    pub all_forced: bool,
}

fn power_prefix(
    group: &Group,
    g: &NormalForm,
    len: usize,
) -> Result<Option<Vec<FlowLetter>>, FlowError> {
    // Spell g^N for N large enough to cover `len` flow letters; the normal
    // form handles seam cancellation between copies of g. Bail out if the
    // spelling stops growing (g does not translate toward an end).
    let mut acc = group.identity();
    let mut prev_len = usize::MAX;
    loop {
        acc = group.multiply(&acc, g)?;
        let spelled_len = match (group, &acc) {
            (Group::Free { .. }, NormalForm::Free(w)) => w.len(),
            (Group::Bs { .. }, NormalForm::Bs { prefix, .. }) => prefix.len(),
            _ => return Ok(None),
        };
        if spelled_len >= len {
            break;
        }
        if prev_len != usize::MAX && spelled_len <= prev_len {
            return Ok(None);
        }
        prev_len = spelled_len;
    }
    match &acc {
        NormalForm::Free(w) => Ok(Some(w[..len].iter().map(|l| FlowLetter::Fn(*l)).collect())),
        NormalForm::Bs { prefix, .. } => Ok(Some(
            prefix[..len].iter().map(|b| FlowLetter::Bs(*b)).collect(),
        )),
        NormalForm::FnZ { .. } => Ok(None),
    }
}

/// Exhaustively checks that every length-`radius + 1` flow word whose
/// configuration is invariant under translation by `g` on the ball overlap
/// spells a power of `g` or `g^-1` (free case) or of the normal-form coset
/// prefix `w` of `g^-1 = w a^k` (`BS(2,3)` case, where empty `w` means no
/// invariant configuration exists at all).
pub fn period_forces_word(
    group: &Group,
    g: &NormalForm,
    radius: u32,
    cap: usize,
) -> Result<PeriodForcesReport, FlowError> {
    if *g == group.identity() {
        return Err(FlowError::IdentityPeriod);
    }
    let glen = group.word_length(g, radius + 1, cap)?;
    if radius < 2 * glen {
        return Err(FlowError::RadiusTooSmall {
            radius,
            needed: 2 * glen,
        });
    }
    let len = radius as usize + 1;
    let words = enumerate_flow_words(group, len)?;
    let ball = group.ball(radius, cap)?;
    let g_inv = group.invert(g)?;

    let mut expected_letters: Vec<Vec<FlowLetter>> = Vec::new();
    match group {
        Group::Free { .. } => {
            for cand in [g.clone(), g_inv.clone()] {
                if let Some(pref) = power_prefix(group, &cand, len)? {
                    expected_letters.push(pref);
                }
            }
        }
        Group::Bs { .. } => {
            let w = bs_coset(&g_inv).to_vec();
            if !w.is_empty() {
                let w_el = NormalForm::Bs { prefix: w, k: 0 };
                let w_inv = group.invert(&w_el)?;
                for cand in [w_el, w_inv] {
                    if let Some(pref) = power_prefix(group, &cand, len)? {
                        expected_letters.push(pref);
                    }
                }
            }
        }
        Group::FreeTimesZ { .. } => return Err(FlowError::UnsupportedGroup(group.to_string())),
    }
    expected_letters.dedup();

    let mut survivors = Vec::new();
    for word in &words {
        let patch = patch_on_ball(word, &ball)?;
        let mut invariant = true;
        for (h, lab) in patch.cells() {
            let pre = group.multiply(&g_inv, h)?;
            if let Some(other) = patch.get(&pre) {
                if other != lab {
                    invariant = false;
                    break;
                }
            }
        }
        if invariant {
            survivors.push(word.clone());
        }
    }
    let all_forced = survivors
        .iter()
        .all(|w| expected_letters.iter().any(|e| e == w.letters()));
    Ok(PeriodForcesReport {
        candidate: group.key(g),
        words_checked: words.len(),
        survivors,
        expected: expected_letters
            .iter()
            .map(|ls| ls.iter().map(|l| l.render()).collect::<String>())
            .collect(),
        all_forced,
    })
}

/// One step of the approach sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproachStep {
    pub n: usize,
    /// Translation element: `sigma^{g_n}` applied to the configuration of
    /// the start word reads `target[0..=n] . e . start-word`.
    pub g: NormalForm,
    pub e: Letter,
}

/// The minimality approach sequence from the configuration of `word`
/// toward the configuration of `target` (free groups of rank >= 2).
///
/// Step `n` picks the error letter `e_n` among the candidates `eps_i = s_i`
/// (when `word` starts with `s_i`) or `s_i^-1` (otherwise), taking the
/// least index with `eps_i != target[n]^-1`. The candidate rule prevents
/// cancellation against the start word and the index rule prevents
/// cancellation against the target prefix, so `|g_n| = n + 2` exactly.
pub fn approach_sequence(
    word: &FlowWord,
    target: &FlowWord,
    steps: usize,
) -> Result<Vec<ApproachStep>, FlowError> {
    let group = word.group;
    let rank = match group {
        Group::Free { rank } => rank,
        _ => return Err(FlowError::UnsupportedGroup(group.to_string())),
    };
    if target.group != group {
        return Err(FlowError::UnsupportedGroup(target.group.to_string()));
    }
    if word.is_empty() {
        return Err(FlowError::EmptyWord);
    }
    if target.len() <= steps {
        return Err(FlowError::PrefixTooShort {
            radius: steps as u32,
            needed: steps + 1,
            have: target.len(),
        });
    }
    let w0 = as_fn_letter(&group, &word.letters[0])?;
    let candidates: Vec<Letter> = (0..rank)
        .map(|i| {
            if w0 == Letter::s(i) {
                Letter::s(i)
            } else {
                Letter::s_inv(i)
            }
        })
        .collect();
    let mut out = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        let tn = as_fn_letter(&group, &target.letters[n])?;
        let e = *candidates
            .iter()
            .find(|c| **c != tn.inverse())
            .ok_or(FlowError::NoErrorLetter)?;
        let mut letters: Vec<Letter> = target.letters[..=n]
            .iter()
            .map(|l| as_fn_letter(&group, l))
            .collect::<Result<_, _>>()?;
        letters.push(e);
        let g = group.element_from_letters(&letters)?;
        out.push(ApproachStep { n, g, e });
    }
    Ok(out)
}

/// Checks every rule instance that involves `cell`, reading only labels
/// already present; sound for incremental backtracking because each rule
/// constrains a fixed pair of cells.
fn assignment_consistent(p: &FlowPatch, cell: &NormalForm) -> Result<bool, FlowError> {
    let group = p.group;
    let lab = *p.get(cell).expect("cell just assigned");
    match group {
        Group::Free { .. } | Group::FreeTimesZ { .. } => {
            let u = as_fn_letter(&group, &lab)?;
            let alphabet = flow_alphabet(&group)?;
            for al in &alphabet {
                let s = as_fn_letter(&group, al)?;
                let n = group.mul_letter(cell, s)?;
                let Some(nlab) = p.get(&n) else { continue };
                let ln = as_fn_letter(&group, nlab)?;
                // Anchored at `cell` via s: backflow if s is chosen,
                // point-back otherwise.
                if s == u {
                    if ln == u.inverse() {
                        return Ok(false);
                    }
                } else if ln != s.inverse() {
                    return Ok(false);
                }
                // Anchored at the neighbor via s^-1, reading `cell`.
                if ln == s.inverse() {
                    if u == s {
                        return Ok(false);
                    }
                } else if u != s {
                    return Ok(false);
                }
            }
            if matches!(group, Group::FreeTimesZ { .. }) {
                for tl in [Letter::t(), Letter::t_inv()] {
                    let n = group.mul_letter(cell, tl)?;
                    if let Some(nlab) = p.get(&n) {
                        if *nlab != lab {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        Group::Bs { .. } => {
            let u = as_bs_letter(&group, &lab)?;
            let alphabet = flow_alphabet(&group)?;
            let a = Letter::s(0);
            let shift = |x: &NormalForm, by: i32| -> Result<NormalForm, FlowError> {
                let mut cur = x.clone();
                let l = if by >= 0 { a } else { a.inverse() };
                for _ in 0..by.abs() {
                    cur = group.mul_letter(&cur, l)?;
                }
                Ok(cur)
            };
            let target = step(&group, cell, &lab)?;
            let chosen = bs_coset(&target).to_vec();

            // Coset periodicity, anchored here and at the cells below.
            let period = if u.up { 2 } else { 3 };
            if let Some(nlab) = p.get(&shift(cell, period)?) {
                if *nlab != lab {
                    return Ok(false);
                }
            }
            for (back, want_up) in [(2, true), (3, false)] {
                let q = shift(cell, -back)?;
                if let Some(qlab) = p.get(&q) {
                    let lq = as_bs_letter(&group, qlab)?;
                    if lq.up == want_up && *qlab != lab {
                        return Ok(false);
                    }
                }
            }

            // Pair coherence with both a-neighbors.
            for d in [1, -1] {
                let q = shift(cell, d)?;
                if let Some(qlab) = p.get(&q) {
                    let qtarget = step(&group, &q, qlab)?;
                    if bs_coset(&qtarget) != chosen.as_slice() {
                        return Ok(false);
                    }
                }
            }

            for v in &alphabet {
                let ve = letter_element(&group, v)?;
                let v_inv = group.invert(&ve)?;

                // Anchored at `cell`: non-chosen neighbor cosets point in;
                // the chosen cell must not point back.
                let c = group.multiply(cell, &v_inv)?;
                if let Some(clab) = p.get(&c) {
                    if bs_coset(&c) == chosen.as_slice() {
                        if c == target {
                            let ztarget = step(&group, &c, clab)?;
                            if bs_coset(&ztarget) == bs_coset(cell) {
                                return Ok(false);
                            }
                        }
                    } else if clab != v {
                        return Ok(false);
                    }
                }

                // `cell` as the constrained neighbor of anchor g = cell * v.
                let g = group.multiply(cell, &ve)?;
                if let Some(glab) = p.get(&g) {
                    let gtarget = step(&group, &g, glab)?;
                    if bs_coset(&gtarget) == bs_coset(cell) {
                        // cell's coset is g's chosen coset: no backflow.
                        if gtarget == *cell && chosen.as_slice() == bs_coset(&g) {
                            return Ok(false);
                        }
                    } else if lab != *v {
                        // g aims elsewhere, so cell must point at g's coset
                        // with exactly v.
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Exhaustive backtracking enumeration of all valid patches on the ball
/// that extend `fixed` (which may pin any subset of cells); results arrive
/// in lexicographic assignment order. Stops early after `max_results`
/// patches; errors once `node_budget` search nodes are spent.
pub fn enumerate_valid_patches(
    group: &Group,
    radius: u32,
    fixed: &BTreeMap<NormalForm, FlowLetter>,
    cap: usize,
    node_budget: usize,
    max_results: usize,
) -> Result<Vec<FlowPatch>, FlowError> {
    let ball = group.ball(radius, cap)?;
    let alphabet = flow_alphabet(group)?;
    let order: Vec<NormalForm> = ball.elements().to_vec();
    let mut patch: FlowPatch = Patch::new(*group, radius);
    for (k, v) in fixed {
        patch.insert(k.clone(), *v);
    }

    struct Search<'a> {
        order: &'a [NormalForm],
        alphabet: &'a [FlowLetter],
        fixed: &'a BTreeMap<NormalForm, FlowLetter>,
        nodes: usize,
        node_budget: usize,
        results: Vec<FlowPatch>,
        max_results: usize,
    }

    impl Search<'_> {
        fn rec(&mut self, patch: &mut FlowPatch, idx: usize) -> Result<(), FlowError> {
            if self.results.len() >= self.max_results {
                return Ok(());
            }
            if idx == self.order.len() {
                if validate_flow_patch(patch)?.is_valid() {
                    self.results.push(patch.clone());
                }
                return Ok(());
            }
            let cell = &self.order[idx];
            if self.fixed.contains_key(cell) {
                self.nodes += 1;
                if self.nodes > self.node_budget {
                    return Err(FlowError::SearchBudget(self.node_budget));
                }
                if !assignment_consistent(patch, cell)? {
                    return Ok(());
                }
                return self.rec(patch, idx + 1);
            }
            for l in self.alphabet.iter() {
                self.nodes += 1;
                if self.nodes > self.node_budget {
                    return Err(FlowError::SearchBudget(self.node_budget));
                }
                patch.insert(cell.clone(), *l);
                if assignment_consistent(patch, cell)? {
                    self.rec(patch, idx + 1)?;
                }
                patch.remove(cell);
                if self.results.len() >= self.max_results {
                    return Ok(());
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        alphabet: &alphabet,
        order: &order,
        fixed,
        nodes: 0,
        node_budget,
        results: Vec::new(),
        max_results,
    };
    search.rec(&mut patch, 0)?;
    Ok(search.results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    const CAP: usize = 200_000;

    fn f2() -> Group {
        Group::Free { rank: 2 }
    }

    fn bs23() -> Group {
        Group::Bs { m: 2, n: 3 }
    }

    fn fw(group: Group, s: &str) -> FlowWord {
        FlowWord::parse(group, s).unwrap()
    }

    /// Pins the walk cells of a word that lie inside the ball.
    fn path_cells(group: &Group, w: &FlowWord, ball: &Ball) -> BTreeMap<NormalForm, FlowLetter> {
        let mut fixed = BTreeMap::new();
        let mut cur = group.identity();
        for l in w.letters() {
            if !ball.contains(&cur) {
                break;
            }
            fixed.insert(cur.clone(), *l);
            cur = step(group, &cur, l).unwrap();
        }
        fixed
    }

    fn patch_key(p: &FlowPatch) -> String {
        render_flow_patch(p)
    }

    #[test]
    fn flow_word_validation() {
        assert!(FlowWord::parse(f2(), "bab").is_ok());
        assert!(matches!(
            FlowWord::parse(f2(), "baA"),
            Err(FlowError::NotReduced(..))
        ));
        assert!(FlowWord::parse(bs23(), "tat").is_ok());
        assert!(matches!(
            FlowWord::parse(bs23(), "tT"),
            Err(FlowError::NotReduced(..))
        ));
        assert!(matches!(
            FlowWord::parse(bs23(), "Tt"),
            Err(FlowError::NotReduced(..))
        ));
        // No up-letter a^2 t exists (up offsets are mod 2).
        assert!(FlowWord::parse(bs23(), "aatt").is_err());
        // t letters are not flow letters over free groups.
        assert!(FlowWord::parse(f2(), "tab").is_err());
    }

    #[test]
    fn flow_word_render_round_trip() {
        for (g, s) in [(f2(), "bab"), (bs23(), "tataT"), (bs23(), "aaTat")] {
            let w = fw(g, s);
            assert_eq!(w.render(), s);
            assert_eq!(FlowWord::parse(g, &w.render()).unwrap(), w);
        }
    }

    #[test]
    fn pinned_f2_patch_bab() {
        let g = f2();
        let w = fw(g, "bab");
        let p = flow_patch_from_word(&w, 2, CAP).unwrap();
        let expect = [
            ("1", "b"),
            ("b", "a"),
            ("ba", "b"),
            ("a", "A"),
            ("A", "a"),
            ("B", "b"),
        ];
        for (cell, letter) in expect {
            let nf = g.parse_element(cell).unwrap();
            assert_eq!(p.get(&nf).unwrap().render(), letter, "cell {cell}");
        }
        assert!(validate_flow_patch(&p).unwrap().is_valid());
    }

    #[test]
    fn path_cells_follow_the_word() {
        let g = f2();
        let w = fw(g, "aaaaa");
        let p = flow_patch_from_word(&w, 4, CAP).unwrap();
        for j in 0..=4usize {
            let cell = g.parse_element(&"a".repeat(j.max(1))).unwrap();
            let cell = if j == 0 { g.identity() } else { cell };
            assert_eq!(p.get(&cell).unwrap().render(), "a");
        }
    }

    #[test]
    fn pinned_bs_letters_for_word_starting_t() {
        let g = bs23();
        let w = fw(g, "tattat");
        // The identity follows the word.
        assert_eq!(flow_letter_at(&w, &g.identity()).unwrap().render(), "t");
        // Cell a sits in the ray coset at offset 1 and aims at the t-coset:
        // a * (at) = a^2 t lies in t<a>.
        let cell = g.parse_element("a").unwrap();
        assert_eq!(flow_letter_at(&w, &cell).unwrap().render(), "at");
        // Cell t^-1 lies off the ray and aims back up.
        let cell = g.parse_element("T").unwrap();
        assert_eq!(flow_letter_at(&w, &cell).unwrap().render(), "t");
        // Cell t^-1 a aims back up from offset 1: a^((-1) mod 2) t = at.
        let cell = g.parse_element("Ta").unwrap();
        assert_eq!(flow_letter_at(&w, &cell).unwrap().render(), "at");
    }

    #[test]
    fn bs_patches_validate_and_mutations_fail() {
        let g = bs23();
        for s in ["tattat", "TaTTaT", "tataTaT", "aaTatatt"] {
            let w = fw(g, s);
            let p = flow_patch_from_word(&w, 3, CAP).unwrap();
            let report = validate_flow_patch(&p).unwrap();
            assert!(report.is_valid(), "word {s}: {:?}", report.violations);

            // Mutate one interior cell and expect a violation.
            let cell = g.parse_element("a").unwrap();
            let old = *p.get(&cell).unwrap();
            let replacement = flow_alphabet(&g)
                .unwrap()
                .into_iter()
                .find(|l| *l != old)
                .unwrap();
            let mut bad = p.clone();
            bad.insert(cell, replacement);
            assert!(
                !validate_flow_patch(&bad).unwrap().is_valid(),
                "mutation undetected for {s}"
            );
        }
    }

    #[test]
    fn f2_patch_mutations_fail() {
        let g = f2();
        let w = fw(g, "babab");
        let p = flow_patch_from_word(&w, 4, CAP).unwrap();
        let cell = g.parse_element("ab").unwrap();
        let old = *p.get(&cell).unwrap();
        for l in flow_alphabet(&g).unwrap() {
            if l == old {
                continue;
            }
            let mut bad = p.clone();
            bad.insert(cell.clone(), l);
            assert!(!validate_flow_patch(&bad).unwrap().is_valid());
        }
    }

    #[test]
    fn empty_patch_is_vacuously_valid() {
        let p: FlowPatch = Patch::new(f2(), 0);
        assert!(validate_flow_patch(&p).unwrap().is_valid());
    }

    #[test]
    fn word_of_patch_round_trip() {
        let g = f2();
        let w = fw(g, "bab");
        let p = flow_patch_from_word(&w, 2, CAP).unwrap();
        assert_eq!(word_of_patch(&p).unwrap().render(), "bab");

        let g = bs23();
        let w = fw(g, "tataTat");
        let p = flow_patch_from_word(&w, 3, CAP).unwrap();
        // The walk exits the radius-3 ball after t, at, aT (generator
        // lengths 1 + 2 + 2).
        assert_eq!(word_of_patch(&p).unwrap().render(), "tataT");
    }

    #[test]
    fn word_of_radius_zero_patch() {
        let g = f2();
        let mut p: FlowPatch = Patch::new(g, 0);
        p.insert(g.identity(), FlowLetter::Fn(Letter::s(1)));
        assert_eq!(word_of_patch(&p).unwrap().render(), "b");
    }

    #[test]
    fn word_of_patch_requires_validity_and_identity() {
        let g = f2();
        let w = fw(g, "bab");
        let p = flow_patch_from_word(&w, 2, CAP).unwrap();
        let mut bad = p.clone();
        bad.insert(g.parse_element("a").unwrap(), FlowLetter::Fn(Letter::s(0)));
        assert!(matches!(
            word_of_patch(&bad),
            Err(FlowError::InvalidPatch { .. })
        ));

        let mut no_id: FlowPatch = Patch::new(g, 0);
        no_id.insert(g.parse_element("a").unwrap(), FlowLetter::Fn(Letter::s(0)));
        assert!(matches!(
            word_of_patch(&no_id),
            Err(FlowError::MissingIdentity)
        ));
    }

    #[test]
    fn patch_serialization_round_trip() {
        for (g, s, r) in [(f2(), "bab", 2), (bs23(), "tataTat", 3)] {
            let p = flow_patch_from_word(&fw(g, s), r, CAP).unwrap();
            let text = render_flow_patch(&p);
            let back = parse_flow_patch(&g, r, &text).unwrap();
            assert_eq!(back, p);
        }
        assert!(matches!(
            parse_flow_patch(&f2(), 1, "a b c"),
            Err(FlowError::BadPatchLine(1, _))
        ));
    }

    #[test]
    fn enumerate_word_counts() {
        assert_eq!(enumerate_flow_words(&f2(), 1).unwrap().len(), 4);
        assert_eq!(enumerate_flow_words(&f2(), 5).unwrap().len(), 324);
        // BS(2,3): 5 letters, each admitting 4 continuations.
        assert_eq!(enumerate_flow_words(&bs23(), 1).unwrap().len(), 5);
        assert_eq!(enumerate_flow_words(&bs23(), 2).unwrap().len(), 20);
    }

    #[test]
    fn period_forces_word_pinned_f2() {
        let g = f2();
        let ab = g.parse_element("ab").unwrap();
        let report = period_forces_word(&g, &ab, 4, CAP).unwrap();
        assert_eq!(report.words_checked, 324);
        assert_eq!(report.expected, vec!["ababa", "BABAB"]);
        assert!(
            report.all_forced,
            "survivors {:?}",
            report
                .survivors
                .iter()
                .map(|w| w.render())
                .collect::<Vec<_>>()
        );
        assert!(!report.survivors.is_empty());

        let a = g.parse_element("a").unwrap();
        let report = period_forces_word(&g, &a, 2, CAP).unwrap();
        assert_eq!(report.expected, vec!["aaa", "AAA"]);
        assert!(report.all_forced);
        assert_eq!(report.survivors.len(), 2);
    }

    #[test]
    fn period_forces_word_pinned_bs() {
        let g = bs23();
        // g = t: the coset prefix of g^-1 is t^-1, so survivors descend or
        // climb straight along plain t-letters.
        let t = g.parse_element("t").unwrap();
        let report = period_forces_word(&g, &t, 3, CAP).unwrap();
        assert_eq!(report.expected, vec!["TTTT", "tttt"]);
        assert!(
            report.all_forced,
            "survivors {:?}",
            report
                .survivors
                .iter()
                .map(|w| w.render())
                .collect::<Vec<_>>()
        );
        assert!(!report.survivors.is_empty());

        // g = a: g^-1 = a^-1 has empty coset prefix, so nothing survives.
        let a = g.parse_element("a").unwrap();
        let report = period_forces_word(&g, &a, 2, CAP).unwrap();
        assert!(report.expected.is_empty());
        assert!(report.survivors.is_empty());
        assert!(report.all_forced);
    }

    #[test]
    fn period_forces_word_preconditions() {
        let g = f2();
        assert!(matches!(
            period_forces_word(&g, &g.identity(), 4, CAP),
            Err(FlowError::IdentityPeriod)
        ));
        let ab = g.parse_element("ab").unwrap();
        assert!(matches!(
            period_forces_word(&g, &ab, 3, CAP),
            Err(FlowError::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn approach_sequence_pinned_example() {
        let g = f2();
        let start = fw(g, "bababababab");
        let target = fw(g, "BABABABABAB");
        let steps = approach_sequence(&start, &target, 2).unwrap();
        for (n, st) in steps.iter().enumerate() {
            assert_eq!(st.n, n);
            assert_eq!(st.e, Letter::s_inv(0), "e_{n} should be a^-1");
            assert_eq!(g.word_length(&st.g, 30, CAP).unwrap(), n as u32 + 2);
        }
    }

    #[test]
    fn approach_sequence_reads_translated_word() {
        let g = f2();
        let start = fw(g, "babababababab");
        let target = fw(g, "BABABABABABAB");
        let steps = approach_sequence(&start, &target, 2).unwrap();
        for st in &steps {
            let window = translate_window(&start, &st.g, 6, CAP).unwrap();
            let got = word_of_patch(&window).unwrap().render();
            let mut expected = String::new();
            for l in target.letters()[..=st.n].iter() {
                expected.push_str(&l.render());
            }
            expected.push(st.e.to_char());
            expected.push_str(&start.render());
            assert_eq!(got, expected[..got.len()], "step {}", st.n);
        }
    }

    #[test]
    fn approach_sequence_same_word_still_inserts_error() {
        let g = f2();
        let w = fw(g, "ababab");
        let steps = approach_sequence(&w, &w, 2).unwrap();
        for st in steps {
            assert_eq!(g.word_length(&st.g, 30, CAP).unwrap(), st.n as u32 + 2);
        }
    }

    #[test]
    fn approach_sequence_growth_on_word_pairs() {
        let g = f2();
        let words = enumerate_flow_words(&g, 9).unwrap();
        for (i, start) in words.iter().step_by(401).enumerate() {
            let target = &words[(i * 733 + 17) % words.len()];
            let steps = approach_sequence(start, target, 7).unwrap();
            for pair in steps.windows(2) {
                let l0 = g.word_length(&pair[0].g, 30, CAP).unwrap();
                let l1 = g.word_length(&pair[1].g, 30, CAP).unwrap();
                assert_eq!(l1, l0 + 1);
            }
        }
    }

    #[test]
    fn f2_ball_patches_biject_with_words() {
        let g = f2();
        let radius = 2;
        let words = enumerate_flow_words(&g, radius as usize + 1).unwrap();
        let from_words: BTreeSet<String> = words
            .iter()
            .map(|w| patch_key(&flow_patch_from_word(w, radius, CAP).unwrap()))
            .collect();
        assert_eq!(from_words.len(), 36);

        let all =
            enumerate_valid_patches(&g, radius, &BTreeMap::new(), CAP, 10_000_000, usize::MAX)
                .unwrap();
        let enumerated: BTreeSet<String> = all.iter().map(patch_key).collect();
        assert_eq!(enumerated, from_words);
    }

    #[test]
    fn construction_is_unique_extension_of_path_f2() {
        let g = f2();
        let radius = 3;
        let w = fw(g, "abab");
        let p = flow_patch_from_word(&w, radius, CAP).unwrap();
        let ball = g.ball(radius, CAP).unwrap();
        let fixed = path_cells(&g, &w, &ball);
        let all = enumerate_valid_patches(&g, radius, &fixed, CAP, 10_000_000, 4).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], p);
    }

    #[test]
    fn construction_is_unique_extension_of_path_bs() {
        let g = bs23();
        let radius = 2;
        for s in ["ttt", "tat", "taT", "TaT"] {
            let w = fw(g, s);
            let p = flow_patch_from_word(&w, radius, CAP).unwrap();
            let ball = g.ball(radius, CAP).unwrap();
            let fixed = path_cells(&g, &w, &ball);
            let all = enumerate_valid_patches(&g, radius, &fixed, CAP, 10_000_000, 4).unwrap();
            assert_eq!(all.len(), 1, "word {s}");
            assert_eq!(all[0], p, "word {s}");
        }
    }

    #[test]
    fn backtracker_derives_bs_cell_a_letter() {
        // With the flow leaving the identity coset along plain t, every
        // completion labels the cell a with at: the incoming pattern around
        // a's coset admits nothing else.
        let g = bs23();
        let w = fw(g, "ttt");
        let ball = g.ball(2, CAP).unwrap();
        let fixed = path_cells(&g, &w, &ball);
        let all = enumerate_valid_patches(&g, 2, &fixed, CAP, 10_000_000, 8).unwrap();
        assert!(!all.is_empty());
        let a = g.parse_element("a").unwrap();
        for p in &all {
            assert_eq!(p.get(&a).unwrap().render(), "at");
        }
    }

    #[test]
    fn prefix_too_short_errors() {
        let g = f2();
        let w = fw(g, "ba");
        assert!(matches!(
            flow_patch_from_word(&w, 2, CAP),
            Err(FlowError::PrefixTooShort { .. })
        ));
        // Over BS the demand is word-dependent: the ray of at-letters exits
        // the radius-3 ball after three letters, one fewer than 3 + 1.
        let g = bs23();
        let w = fw(g, "atatat");
        assert!(flow_patch_from_word(&w.prefix(3), 3, CAP).is_ok());
        assert!(matches!(
            flow_patch_from_word(&w.prefix(2), 3, CAP),
            Err(FlowError::PrefixTooShort {
                needed: 3,
                have: 2,
                ..
            })
        ));
    }
}
