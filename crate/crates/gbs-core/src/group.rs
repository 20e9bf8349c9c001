//! Elements, canonical normal forms and word-metric balls.
//!
//! Three group families are supported:
//!
//! * `F_n`, free on `s_1..s_n` (printed `a`, `b`, ...);
//! * `F_n x Z`, with a central generator `t`;
//! * `BS(m,n) = < a, t | t^-1 a^m t = a^n >`.
//!
//! Every element carries a unique [`NormalForm`]: a freely reduced word for
//! `F_n`, a pair `(w, k)` with `g = w t^k` for `F_n x Z`, and a Britton form
//! `g = l_1 ... l_p a^k` for `BS(m,n)`, where each prefix letter is `a^r t`
//! (`0 <= r < m`) or `a^r t^-1` (`0 <= r < n`) and no pinch
//! `t^-1 a^{m d} t` / `t a^{n d} t^-1` remains. Rewriting uses the division
//! rules `a^N t = a^r t a^{(N-r)/m * n}` and `a^N t^-1 = a^r t^-1 a^{(N-r)/n * m}`.
//!
//! The canonical ASCII spelling (letters `a`, `A`, `t`, `T`, identity `1`) of
//! a normal form doubles as the patch-file key used by every other module.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Highest free rank supported; generator names use `a..s`, keeping `t`
/// reserved for the stable/central letter in serializations.
pub const MAX_FREE_RANK: u8 = 19;

/// Default ball cap when the `GBS_BALL_CAP` environment variable is unset.
pub const BALL_CAP_DEFAULT: usize = 1_000_000;

/// Reads the ball cap from `GBS_BALL_CAP`, falling back to [`BALL_CAP_DEFAULT`].
pub fn default_ball_cap() -> usize {
    std::env::var("GBS_BALL_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(BALL_CAP_DEFAULT)
}

/// Errors from element arithmetic and enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("character {0:?} is not a generator letter")]
    BadChar(char),
    #[error("letter {letter:?} is not a generator of {group}")]
    LetterOutOfRange { letter: char, group: String },
    #[error("free rank {0} outside 1..={MAX_FREE_RANK}")]
    BadRank(u8),
    #[error("Baumslag-Solitar parameters must be >= 1, got ({0},{1})")]
    BadBsParams(u32, u32),
    #[error("element shape does not belong to {0}")]
    GroupMismatch(String),
    #[error("a-exponent overflow during rewriting")]
    ExponentOverflow,
    #[error("enumeration exceeds the configured cap of {cap} elements")]
    BallCapExceeded { cap: usize },
    #[error("cannot parse group descriptor {0:?}")]
    BadGroupSpec(String),
    #[error("word length exceeds search bound {0}")]
    LengthSearchExhausted(u32),
}

/// Generator symbol: `S(i)` is the i-th free letter, `T` the stable letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    S(u8),
    T,
}

/// A single generator or inverse-generator letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub sym: Sym,
    pub inv: bool,
}

impl Letter {
    pub fn s(i: u8) -> Letter {
        Letter {
            sym: Sym::S(i),
            inv: false,
        }
    }

    pub fn s_inv(i: u8) -> Letter {
        Letter {
            sym: Sym::S(i),
            inv: true,
        }
    }

    pub fn t() -> Letter {
        Letter {
            sym: Sym::T,
            inv: false,
        }
    }

    pub fn t_inv() -> Letter {
        Letter {
            sym: Sym::T,
            inv: true,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            sym: self.sym,
            inv: !self.inv,
        }
    }

    pub fn to_char(self) -> char {
        let base = match self.sym {
            Sym::S(i) => (b'a' + i) as char,
            Sym::T => 't',
        };
        if self.inv {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }

    pub fn from_char(c: char) -> Result<Letter, GroupError> {
        let lower = c.to_ascii_lowercase();
        let inv = c.is_ascii_uppercase();
        match lower {
            't' => Ok(Letter { sym: Sym::T, inv }),
            'a'..='s' => Ok(Letter {
                sym: Sym::S(lower as u8 - b'a'),
                inv,
            }),
            _ => Err(GroupError::BadChar(c)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses a word over the letter alphabet; `1` denotes the empty word.
/// Whitespace and interpunct separators are ignored.
pub fn parse_word(s: &str) -> Result<Vec<Letter>, GroupError> {
    let trimmed = s.trim();
    if trimmed == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for c in trimmed.chars() {
        if c.is_whitespace() || c == '.' || c == '*' {
            continue;
        }
        out.push(Letter::from_char(c)?);
    }
    Ok(out)
}

/// Renders a word; the empty word prints as `1`.
pub fn render_word(letters: &[Letter]) -> String {
    if letters.is_empty() {
        "1".to_string()
    } else {
        letters.iter().map(|l| l.to_char()).collect()
    }
}

/// Free reduction: cancels adjacent inverse pairs until none remain.
/// The result is the unique reduced form (confluence of the stack rewriting).
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last().copied() == Some(l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Inverts a word (reverse and invert letters); reduced input stays reduced.
pub fn invert_word(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// One Britton-prefix letter of a `BS(m,n)` normal form: `a^r t` when `up`,
/// `a^r t^-1` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BsLetter {
    pub r: u32,
    pub up: bool,
}

impl BsLetter {
    pub fn render(self) -> String {
        let mut s = "a".repeat(self.r as usize);
        s.push(if self.up { 't' } else { 'T' });
        s
    }
}

/// Canonical element representation; unique per group element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NormalForm {
    /// Freely reduced word of `F_n`.
    Free(Vec<Letter>),
    /// `g = w t^k` with `w` freely reduced over the free part.
    FnZ { w: Vec<Letter>, k: i64 },
    /// Britton form `g = prefix . a^k`.
    Bs { prefix: Vec<BsLetter>, k: i64 },
}

/// Group descriptor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Group {
    Free { rank: u8 },
    FreeTimesZ { rank: u8 },
    Bs { m: u32, n: u32 },
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Free { rank } => write!(f, "F{rank}"),
            Group::FreeTimesZ { rank } => write!(f, "F{rank}xZ"),
            Group::Bs { m, n } => write!(f, "BS({m},{n})"),
        }
    }
}

impl FromStr for Group {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Group, GroupError> {
        let raw = s.trim();
        let lower = raw.to_ascii_lowercase();
        let make = |g: Group| g.validated();
        if let Some(rest) = lower.strip_prefix("bs") {
            let rest = rest.trim_start_matches([':', '(']).trim_end_matches(')');
            let (m, n) = rest
                .split_once(',')
                .ok_or_else(|| GroupError::BadGroupSpec(raw.to_string()))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| GroupError::BadGroupSpec(raw.to_string()))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| GroupError::BadGroupSpec(raw.to_string()))?;
            return make(Group::Bs { m, n });
        }
        if let Some(rest) = lower.strip_prefix('f') {
            if let Some(rank) = rest.strip_suffix("xz") {
                let rank = rank
                    .parse()
                    .map_err(|_| GroupError::BadGroupSpec(raw.to_string()))?;
                return make(Group::FreeTimesZ { rank });
            }
            let rank = rest
                .parse()
                .map_err(|_| GroupError::BadGroupSpec(raw.to_string()))?;
            return make(Group::Free { rank });
        }
        Err(GroupError::BadGroupSpec(raw.to_string()))
    }
}

impl Group {
    /// Checks the descriptor parameters and returns the group.
    pub fn validated(self) -> Result<Group, GroupError> {
        match self {
            Group::Free { rank } | Group::FreeTimesZ { rank } => {
                if rank == 0 || rank > MAX_FREE_RANK {
                    Err(GroupError::BadRank(rank))
                } else {
                    Ok(self)
                }
            }
            Group::Bs { m, n } => {
                if m == 0 || n == 0 {
                    Err(GroupError::BadBsParams(m, n))
                } else {
                    Ok(self)
                }
            }
        }
    }

    /// Free rank of the `F_n` part, if any.
    pub fn free_rank(&self) -> Option<u8> {
        match self {
            Group::Free { rank } | Group::FreeTimesZ { rank } => Some(*rank),
            Group::Bs { .. } => None,
        }
    }

    /// Generator letters with inverses, in canonical enumeration order.
    pub fn generators(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        match self {
            Group::Free { rank } | Group::FreeTimesZ { rank } => {
                for i in 0..*rank {
                    out.push(Letter::s(i));
                    out.push(Letter::s_inv(i));
                }
                if matches!(self, Group::FreeTimesZ { .. }) {
                    out.push(Letter::t());
                    out.push(Letter::t_inv());
                }
            }
            Group::Bs { .. } => {
                out.push(Letter::s(0));
                out.push(Letter::s_inv(0));
                out.push(Letter::t());
                out.push(Letter::t_inv());
            }
        }
        out
    }

    fn check_letter(&self, l: Letter) -> Result<(), GroupError> {
        let ok = match (self, l.sym) {
            (Group::Free { rank }, Sym::S(i)) => i < *rank,
            (Group::Free { .. }, Sym::T) => false,
            (Group::FreeTimesZ { rank }, Sym::S(i)) => i < *rank,
            (Group::FreeTimesZ { .. }, Sym::T) => true,
            (Group::Bs { .. }, Sym::S(i)) => i == 0,
            (Group::Bs { .. }, Sym::T) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::LetterOutOfRange {
                letter: l.to_char(),
                group: self.to_string(),
            })
        }
    }

    /// The identity element.
    pub fn identity(&self) -> NormalForm {
        match self {
            Group::Free { .. } => NormalForm::Free(Vec::new()),
            Group::FreeTimesZ { .. } => NormalForm::FnZ {
                w: Vec::new(),
                k: 0,
            },
            Group::Bs { .. } => NormalForm::Bs {
                prefix: Vec::new(),
                k: 0,
            },
        }
    }

    /// Normalizes a letter sequence into the canonical form.
    pub fn element_from_letters(&self, letters: &[Letter]) -> Result<NormalForm, GroupError> {
        for &l in letters {
            self.check_letter(l)?;
        }
        match self {
            Group::Free { .. } => Ok(NormalForm::Free(free_reduce(letters))),
            Group::FreeTimesZ { .. } => {
                let mut k: i64 = 0;
                let mut w = Vec::new();
                for &l in letters {
                    match l.sym {
                        Sym::T => {
                            k = k
                                .checked_add(if l.inv { -1 } else { 1 })
                                .ok_or(GroupError::ExponentOverflow)?;
                        }
                        Sym::S(_) => w.push(l),
                    }
                }
                Ok(NormalForm::FnZ {
                    w: free_reduce(&w),
                    k,
                })
            }
            Group::Bs { m, n } => {
                let mut b = BsBuilder::new(*m, *n);
                for &l in letters {
                    b.push_letter(l)?;
                }
                Ok(b.finish())
            }
        }
    }

    /// Parses the canonical ASCII spelling (`1` for the identity).
    pub fn parse_element(&self, s: &str) -> Result<NormalForm, GroupError> {
        self.element_from_letters(&parse_word(s)?)
    }

    fn check_shape(&self, x: &NormalForm) -> Result<(), GroupError> {
        let ok = matches!(
            (self, x),
            (Group::Free { .. }, NormalForm::Free(_))
                | (Group::FreeTimesZ { .. }, NormalForm::FnZ { .. })
                | (Group::Bs { .. }, NormalForm::Bs { .. })
        );
        if ok {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch(self.to_string()))
        }
    }

    /// Group law on normal forms.
    pub fn multiply(&self, x: &NormalForm, y: &NormalForm) -> Result<NormalForm, GroupError> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        match (self, x, y) {
            (Group::Free { .. }, NormalForm::Free(wx), NormalForm::Free(wy)) => {
                let mut letters = wx.clone();
                letters.extend_from_slice(wy);
                Ok(NormalForm::Free(free_reduce(&letters)))
            }
            (
                Group::FreeTimesZ { .. },
                NormalForm::FnZ { w: wx, k: kx },
                NormalForm::FnZ { w: wy, k: ky },
            ) => {
                let mut letters = wx.clone();
                letters.extend_from_slice(wy);
                Ok(NormalForm::FnZ {
                    w: free_reduce(&letters),
                    k: kx.checked_add(*ky).ok_or(GroupError::ExponentOverflow)?,
                })
            }
            (
                Group::Bs { m, n },
                NormalForm::Bs { prefix: px, k: kx },
                NormalForm::Bs { prefix: py, k: ky },
            ) => {
                let mut b = BsBuilder::resume(*m, *n, px.clone(), *kx);
                for &l in py {
                    b.push_bs_letter(l)?;
                }
                b.push_a(*ky)?;
                Ok(b.finish())
            }
            _ => unreachable!("shape checked above"),
        }
    }

    /// Inverse element.
    pub fn invert(&self, x: &NormalForm) -> Result<NormalForm, GroupError> {
        self.check_shape(x)?;
        match (self, x) {
            (Group::Free { .. }, NormalForm::Free(w)) => Ok(NormalForm::Free(invert_word(w))),
            (Group::FreeTimesZ { .. }, NormalForm::FnZ { w, k }) => Ok(NormalForm::FnZ {
                w: invert_word(w),
                k: k.checked_neg().ok_or(GroupError::ExponentOverflow)?,
            }),
            (Group::Bs { m, n }, NormalForm::Bs { prefix, k }) => {
                let mut b = BsBuilder::new(*m, *n);
                b.push_a(k.checked_neg().ok_or(GroupError::ExponentOverflow)?)?;
                for l in prefix.iter().rev() {
                    // (a^r t^e)^-1 = t^-e a^-r
                    b.push_t(!l.up)?;
                    b.push_a(-(l.r as i64))?;
                }
                Ok(b.finish())
            }
            _ => unreachable!("shape checked above"),
        }
    }

    /// Right multiplication by a single generator letter.
    pub fn mul_letter(&self, x: &NormalForm, l: Letter) -> Result<NormalForm, GroupError> {
        self.check_shape(x)?;
        self.check_letter(l)?;
        match (self, x) {
            (Group::Free { .. }, NormalForm::Free(w)) => {
                let mut w = w.clone();
                if w.last().copied() == Some(l.inverse()) {
                    w.pop();
                } else {
                    w.push(l);
                }
                Ok(NormalForm::Free(w))
            }
            (Group::FreeTimesZ { .. }, NormalForm::FnZ { w, k }) => match l.sym {
                Sym::T => Ok(NormalForm::FnZ {
                    w: w.clone(),
                    k: k.checked_add(if l.inv { -1 } else { 1 })
                        .ok_or(GroupError::ExponentOverflow)?,
                }),
                Sym::S(_) => {
                    let mut w = w.clone();
                    if w.last().copied() == Some(l.inverse()) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                    Ok(NormalForm::FnZ { w, k: *k })
                }
            },
            (Group::Bs { m, n }, NormalForm::Bs { prefix, k }) => {
                let mut b = BsBuilder::resume(*m, *n, prefix.clone(), *k);
                b.push_letter(l)?;
                Ok(b.finish())
            }
            _ => unreachable!("shape checked above"),
        }
    }

    /// Canonical spelling of an element as generator letters.
    pub fn spell(&self, x: &NormalForm) -> Vec<Letter> {
        match x {
            NormalForm::Free(w) => w.clone(),
            NormalForm::FnZ { w, k } => {
                let mut out = w.clone();
                let l = if *k >= 0 {
                    Letter::t()
                } else {
                    Letter::t_inv()
                };
                for _ in 0..k.unsigned_abs() {
                    out.push(l);
                }
                out
            }
            NormalForm::Bs { prefix, k } => {
                let mut out = Vec::new();
                for bl in prefix {
                    for _ in 0..bl.r {
                        out.push(Letter::s(0));
                    }
                    out.push(if bl.up { Letter::t() } else { Letter::t_inv() });
                }
                let l = if *k >= 0 {
                    Letter::s(0)
                } else {
                    Letter::s_inv(0)
                };
                for _ in 0..k.unsigned_abs() {
                    out.push(l);
                }
                out
            }
        }
    }

    /// Canonical patch-file key: the ASCII spelling, `1` for the identity.
    pub fn key(&self, x: &NormalForm) -> String {
        render_word(&self.spell(x))
    }

    /// Human-oriented display form (`<prefix>|a^<k>` for BS, `<w>|t^<k>` for
    /// `F_n x Z`, the plain word for free groups).
    pub fn display(&self, x: &NormalForm) -> String {
        match x {
            NormalForm::Free(w) => render_word(w),
            NormalForm::FnZ { w, k } => {
                let wpart: String = w.iter().map(|l| l.to_char()).collect();
                format!("{wpart}|t^{k}")
            }
            NormalForm::Bs { prefix, k } => {
                let p: String = prefix.iter().map(|l| l.render()).collect();
                format!("{p}|a^{k}")
            }
        }
    }

    /// Exact word length where a closed form exists (`F_n`, `F_n x Z`);
    /// breadth-first search bounded by `max_radius` for `BS(m,n)`.
    pub fn word_length(
        &self,
        x: &NormalForm,
        max_radius: u32,
        cap: usize,
    ) -> Result<u32, GroupError> {
        self.check_shape(x)?;
        match x {
            NormalForm::Free(w) => Ok(w.len() as u32),
            NormalForm::FnZ { w, k } => {
                Ok(w.len() as u32 + k.unsigned_abs().min(u32::MAX as u64) as u32)
            }
            NormalForm::Bs { .. } => {
                let mut seen: HashMap<NormalForm, u32> = HashMap::new();
                let mut queue = VecDeque::new();
                let id = self.identity();
                if *x == id {
                    return Ok(0);
                }
                seen.insert(id.clone(), 0);
                queue.push_back(id);
                let gens = self.generators();
                while let Some(cur) = queue.pop_front() {
                    let d = seen[&cur];
                    if d >= max_radius {
                        continue;
                    }
                    for &g in &gens {
                        let next = self.mul_letter(&cur, g)?;
                        if seen.contains_key(&next) {
                            continue;
                        }
                        if next == *x {
                            return Ok(d + 1);
                        }
                        if seen.len() >= cap {
                            return Err(GroupError::BallCapExceeded { cap });
                        }
                        seen.insert(next.clone(), d + 1);
                        queue.push_back(next);
                    }
                }
                Err(GroupError::LengthSearchExhausted(max_radius))
            }
        }
    }

    /// Enumerates the ball of the given radius in the word metric.
    pub fn ball(&self, radius: u32, cap: usize) -> Result<Ball, GroupError> {
        let mut dist_map: HashMap<NormalForm, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let id = self.identity();
        dist_map.insert(id.clone(), 0);
        queue.push_back(id);
        let gens = self.generators();
        while let Some(cur) = queue.pop_front() {
            let d = dist_map[&cur];
            if d >= radius {
                continue;
            }
            for &g in &gens {
                let next = self.mul_letter(&cur, g)?;
                if dist_map.contains_key(&next) {
                    continue;
                }
                if dist_map.len() >= cap {
                    return Err(GroupError::BallCapExceeded { cap });
                }
                dist_map.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
        let mut elements: Vec<(NormalForm, u32)> = dist_map.into_iter().collect();
        elements.sort_by(|(a, da), (b, db)| (da, self.key(a)).cmp(&(db, self.key(b))));
        let mut index = HashMap::with_capacity(elements.len());
        let mut els = Vec::with_capacity(elements.len());
        let mut dist = Vec::with_capacity(elements.len());
        for (i, (nf, d)) in elements.into_iter().enumerate() {
            index.insert(nf.clone(), i as u32);
            els.push(nf);
            dist.push(d);
        }
        Ok(Ball {
            group: *self,
            radius,
            elements: els,
            dist,
            index,
        })
    }
}

/// Streaming Britton-form builder for `BS(m,n)`.
///
/// Maintains a reduced prefix plus a trailing a-power (`carry`). Pushing `t`
/// with carry `N = m d + r` either pinches against a trailing `t^-1` letter
/// (when `r = 0`), replacing `t^-1 a^{m d} t` by `a^{n d}`, or emits the
/// letter `a^r t` and carries `a^{n d}` rightward; symmetrically for `t^-1`.
struct BsBuilder {
    m: i64,
    n: i64,
    prefix: Vec<BsLetter>,
    carry: i64,
}

impl BsBuilder {
    fn new(m: u32, n: u32) -> BsBuilder {
        BsBuilder {
            m: m as i64,
            n: n as i64,
            prefix: Vec::new(),
            carry: 0,
        }
    }

    fn resume(m: u32, n: u32, prefix: Vec<BsLetter>, carry: i64) -> BsBuilder {
        BsBuilder {
            m: m as i64,
            n: n as i64,
            prefix,
            carry,
        }
    }

    fn push_a(&mut self, e: i64) -> Result<(), GroupError> {
        self.carry = self
            .carry
            .checked_add(e)
            .ok_or(GroupError::ExponentOverflow)?;
        Ok(())
    }

    fn push_t(&mut self, up: bool) -> Result<(), GroupError> {
        let (modulus, out_mult) = if up {
            (self.m, self.n)
        } else {
            (self.n, self.m)
        };
        let r = self.carry.rem_euclid(modulus);
        let d = (self.carry - r) / modulus;
        let pinches = r == 0 && self.prefix.last().is_some_and(|l| l.up != up);
        let shifted = out_mult
            .checked_mul(d)
            .ok_or(GroupError::ExponentOverflow)?;
        if pinches {
            let prev = self.prefix.pop().expect("nonempty prefix");
            self.carry = (prev.r as i64)
                .checked_add(shifted)
                .ok_or(GroupError::ExponentOverflow)?;
        } else {
            self.prefix.push(BsLetter { r: r as u32, up });
            self.carry = shifted;
        }
        Ok(())
    }

    fn push_letter(&mut self, l: Letter) -> Result<(), GroupError> {
        match l.sym {
            Sym::S(_) => self.push_a(if l.inv { -1 } else { 1 }),
            Sym::T => self.push_t(!l.inv),
        }
    }

    fn push_bs_letter(&mut self, l: BsLetter) -> Result<(), GroupError> {
        self.push_a(l.r as i64)?;
        self.push_t(l.up)
    }

    fn finish(self) -> NormalForm {
        NormalForm::Bs {
            prefix: self.prefix,
            k: self.carry,
        }
    }
}

/// Finite ball in the word metric, canonically ordered (distance, then key).
#[derive(Clone, Debug)]
pub struct Ball {
    pub group: Group,
    pub radius: u32,
    elements: Vec<NormalForm>,
    dist: Vec<u32>,
    index: HashMap<NormalForm, u32>,
}

impl Ball {
    pub fn elements(&self) -> &[NormalForm] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &NormalForm) -> bool {
        self.index.contains_key(x)
    }

    /// Word-metric distance from the identity, when the element is in the ball.
    pub fn dist(&self, x: &NormalForm) -> Option<u32> {
        self.index.get(x).map(|&i| self.dist[i as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Group {
        Group::Free { rank: 2 }
    }

    fn f2z() -> Group {
        Group::FreeTimesZ { rank: 2 }
    }

    fn bs23() -> Group {
        Group::Bs { m: 2, n: 3 }
    }

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w("aA")), w("1"));
        assert_eq!(free_reduce(&w("baAb")), w("bb"));
        assert_eq!(free_reduce(&w("bab")), w("bab"));
    }

    #[test]
    fn free_reduce_is_confluent_from_either_end() {
        // abBA reduces fully regardless of cancellation order.
        assert_eq!(free_reduce(&w("abBA")), w("1"));
        assert_eq!(free_reduce(&w("aabBAA")), w("1"));
    }

    #[test]
    fn bs_normalize_pinned_examples() {
        let g = bs23();
        assert_eq!(
            g.parse_element("aat").unwrap(),
            NormalForm::Bs {
                prefix: vec![BsLetter { r: 0, up: true }],
                k: 3
            }
        );
        assert_eq!(
            g.parse_element("aaaT").unwrap(),
            NormalForm::Bs {
                prefix: vec![BsLetter { r: 0, up: false }],
                k: 2
            }
        );
        assert_eq!(
            g.parse_element("Taat").unwrap(),
            NormalForm::Bs {
                prefix: vec![],
                k: 3
            }
        );
    }

    #[test]
    fn bs_normalize_display_forms() {
        let g = bs23();
        assert_eq!(g.display(&g.parse_element("aat").unwrap()), "t|a^3");
        assert_eq!(g.display(&g.parse_element("aaaT").unwrap()), "T|a^2");
        assert_eq!(g.display(&g.identity()), "|a^0");
        assert_eq!(g.key(&g.parse_element("aat").unwrap()), "taaa");
        assert_eq!(g.key(&g.identity()), "1");
    }

    #[test]
    fn bs_multiply_pinned_examples() {
        let g = bs23();
        let t = g.parse_element("t").unwrap();
        let tinv = g.parse_element("T").unwrap();
        assert_eq!(g.multiply(&t, &tinv).unwrap(), g.identity());

        let a = g.parse_element("a").unwrap();
        let at = g.parse_element("at").unwrap();
        assert_eq!(
            g.multiply(&a, &at).unwrap(),
            NormalForm::Bs {
                prefix: vec![BsLetter { r: 0, up: true }],
                k: 3
            }
        );
        // at . a = ata, Britton-reduced as is: prefix [at], trailing a^1.
        assert_eq!(
            g.multiply(&at, &a).unwrap(),
            NormalForm::Bs {
                prefix: vec![BsLetter { r: 1, up: true }],
                k: 1
            }
        );
    }

    #[test]
    fn bs_normalize_is_idempotent_on_spellings() {
        let g = bs23();
        for s in ["aat", "TaatTTaa", "ttTaTat", "AAAtttAAT", "aTaTaT"] {
            let nf = g.parse_element(s).unwrap();
            let respelled = g.element_from_letters(&g.spell(&nf)).unwrap();
            assert_eq!(nf, respelled, "respelling {s}");
        }
    }

    #[test]
    fn bs_inverse_law() {
        let g = bs23();
        for s in ["a", "t", "aat", "TaT", "atatA", "TTaaatt"] {
            let x = g.parse_element(s).unwrap();
            let xi = g.invert(&x).unwrap();
            assert_eq!(g.multiply(&x, &xi).unwrap(), g.identity(), "x x^-1 for {s}");
            assert_eq!(g.multiply(&xi, &x).unwrap(), g.identity(), "x^-1 x for {s}");
        }
    }

    #[test]
    fn bs_general_parameters() {
        // BS(1,2): t^-1 a t = a^2.
        let g = Group::Bs { m: 1, n: 2 };
        let lhs = g.parse_element("Tat").unwrap();
        let rhs = g.parse_element("aa").unwrap();
        assert_eq!(lhs, rhs);
        // BS(3,2): t a^2 t^-1 = a^3.
        let g = Group::Bs { m: 3, n: 2 };
        let lhs = g.parse_element("taaT").unwrap();
        let rhs = g.parse_element("aaa").unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fnz_elements() {
        let g = f2z();
        let x = g.parse_element("atbTt").unwrap();
        assert_eq!(x, NormalForm::FnZ { w: w("ab"), k: 1 });
        assert_eq!(g.display(&x), "ab|t^1");
        assert_eq!(g.key(&x), "abt");
        let y = g.parse_element("TTa").unwrap();
        assert_eq!(g.key(&g.multiply(&x, &y).unwrap()), "abaT");
    }

    #[test]
    fn ball_sizes_pinned() {
        let cap = 100_000;
        assert_eq!(f2().ball(0, cap).unwrap().len(), 1);
        assert_eq!(f2().ball(1, cap).unwrap().len(), 5);
        assert_eq!(f2z().ball(1, cap).unwrap().len(), 7);
    }

    #[test]
    fn ball_monotone_and_translation_consistent() {
        let cap = 1_000_000;
        for g in [f2(), f2z(), bs23()] {
            let b2 = g.ball(2, cap).unwrap();
            let b3 = g.ball(3, cap).unwrap();
            assert!(b2.len() <= b3.len());
            for el in b2.elements() {
                assert!(b3.contains(el));
                for gen in g.generators() {
                    let moved = g.mul_letter(el, gen).unwrap();
                    assert!(
                        b3.contains(&moved),
                        "{} * {} leaves Ball(3)",
                        g.key(el),
                        gen
                    );
                }
            }
        }
    }

    #[test]
    fn bs_ball_matches_distinct_normal_forms_of_short_words() {
        // Every element of Ball(2) must be hit by some word of length <= 2 and
        // distinct words with equal normal forms must collapse.
        let g = bs23();
        let ball = g.ball(2, 100_000).unwrap();
        let mut forms = std::collections::HashSet::new();
        let letters = g.generators();
        forms.insert(g.identity());
        for &l1 in &letters {
            forms.insert(g.element_from_letters(&[l1]).unwrap());
            for &l2 in &letters {
                forms.insert(g.element_from_letters(&[l1, l2]).unwrap());
            }
        }
        let from_words: std::collections::HashSet<_> = forms.into_iter().collect();
        let from_ball: std::collections::HashSet<_> = ball.elements().iter().cloned().collect();
        assert_eq!(from_words, from_ball);
    }

    #[test]
    fn word_length_closed_forms_and_bfs() {
        assert_eq!(
            f2().word_length(&f2().parse_element("abA").unwrap(), 10, 1000)
                .unwrap(),
            3
        );
        assert_eq!(
            f2z()
                .word_length(&f2z().parse_element("aTT").unwrap(), 10, 1000)
                .unwrap(),
            3
        );
        let g = bs23();
        assert_eq!(g.word_length(&g.identity(), 10, 100_000).unwrap(), 0);
        assert_eq!(
            g.word_length(&g.parse_element("aaa").unwrap(), 10, 100_000)
                .unwrap(),
            3
        );
        // t^-1 a^2 t = a^3 has length 3, not 4.
        assert_eq!(
            g.word_length(&g.parse_element("Taat").unwrap(), 10, 100_000)
                .unwrap(),
            3
        );
    }

    #[test]
    fn ball_cap_errors() {
        let err = f2().ball(8, 10).unwrap_err();
        assert_eq!(err, GroupError::BallCapExceeded { cap: 10 });
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let g = bs23();
        let big = NormalForm::Bs {
            prefix: vec![],
            k: i64::MAX / 2 + 1,
        };
        assert_eq!(
            g.multiply(&big, &big).unwrap_err(),
            GroupError::ExponentOverflow
        );
    }

    #[test]
    fn group_parsing() {
        assert_eq!("F2".parse::<Group>().unwrap(), f2());
        assert_eq!("f2xz".parse::<Group>().unwrap(), f2z());
        assert_eq!("BS(2,3)".parse::<Group>().unwrap(), bs23());
        assert_eq!("bs:2,3".parse::<Group>().unwrap(), bs23());
        assert!("F0".parse::<Group>().is_err());
        assert!("F25".parse::<Group>().is_err());
        assert!("bs(0,3)".parse::<Group>().is_err());
        assert!("nope".parse::<Group>().is_err());
    }

    #[test]
    fn key_round_trips() {
        let g = bs23();
        for s in ["1", "taaa", "aT", "atTaa", "TT"] {
            let nf = g.parse_element(s).unwrap();
            let key = g.key(&nf);
            assert_eq!(g.parse_element(&key).unwrap(), nf);
        }
    }

    #[test]
    fn letters_reject_out_of_range() {
        assert!(f2().parse_element("c").is_err());
        assert!(f2().parse_element("t").is_err());
        assert!(bs23().parse_element("b").is_err());
        assert!(parse_word("x?").is_err());
    }
}
