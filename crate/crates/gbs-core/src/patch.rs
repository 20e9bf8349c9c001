//! Finite labelled patches over group balls and the translation-period scan.
//!
//! A patch assigns a label to every element of a ball; the translation action
//! is `(sigma^g x)_h = x_{g^-1 h}`. The period scanner compares a patch with
//! its translates on the overlap of supports, which can eliminate a candidate
//! period conclusively but can only ever report "survives at this radius" on
//! the positive side.

use std::collections::BTreeMap;

use crate::group::{Group, GroupError, NormalForm};

/// A labelled patch supported on (a subset of) a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch<L> {
    pub group: Group,
    pub radius: u32,
    cells: BTreeMap<NormalForm, L>,
}

impl<L> Patch<L> {
    pub fn new(group: Group, radius: u32) -> Patch<L> {
        Patch {
            group,
            radius,
            cells: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, at: NormalForm, label: L) -> Option<L> {
        self.cells.insert(at, label)
    }

    pub fn get(&self, at: &NormalForm) -> Option<&L> {
        self.cells.get(at)
    }

    pub fn contains(&self, at: &NormalForm) -> bool {
        self.cells.contains_key(at)
    }

    pub fn remove(&mut self, at: &NormalForm) -> Option<L> {
        self.cells.remove(at)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in canonical (structural) order; deterministic across runs.
    pub fn cells(&self) -> impl Iterator<Item = (&NormalForm, &L)> {
        self.cells.iter()
    }

    pub fn map<M>(&self, mut f: impl FnMut(&NormalForm, &L) -> M) -> Patch<M> {
        let mut out = Patch::new(self.group, self.radius);
        for (k, v) in self.cells() {
            out.insert(k.clone(), f(k, v));
        }
        out
    }
}

/// Verdict for one candidate period at finite radius.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PeriodStatus {
    /// Agrees on an overlap of at least `min_overlap` cells.
    Survives,
    /// Disagrees somewhere on the overlap: conclusively not a period.
    Eliminated,
    /// Overlap smaller than `min_overlap`: no conclusion at this radius.
    Inconclusive,
}

/// One scanned candidate.
#[derive(Clone, Debug)]
pub struct PeriodCandidate {
    pub element: NormalForm,
    pub key: String,
    pub word_length: u32,
    pub overlap: usize,
    pub status: PeriodStatus,
}

/// Scan result over all non-identity candidates up to the given length.
#[derive(Clone, Debug)]
pub struct PeriodScan {
    pub max_len: u32,
    pub min_overlap: usize,
    pub candidates: Vec<PeriodCandidate>,
}

impl PeriodScan {
    pub fn with_status(&self, status: PeriodStatus) -> Vec<&PeriodCandidate> {
        self.candidates
            .iter()
            .filter(|c| c.status == status)
            .collect()
    }

    pub fn survivors(&self) -> Vec<&PeriodCandidate> {
        self.with_status(PeriodStatus::Survives)
    }
}

/// Compares `patch` with `sigma^g(patch)` for every non-identity `g` with
/// `|g| <= max_len`, on the overlap of the supports.
pub fn scan_periods<L: Eq>(
    patch: &Patch<L>,
    max_len: u32,
    min_overlap: usize,
    cap: usize,
) -> Result<PeriodScan, GroupError> {
    let group = patch.group;
    let ball = group.ball(max_len, cap)?;
    let mut candidates = Vec::new();
    for g in ball.elements() {
        if *g == group.identity() {
            continue;
        }
        let g_inv = group.invert(g)?;
        let mut overlap = 0usize;
        let mut agrees = true;
        for (h, label) in patch.cells() {
            let pre = group.multiply(&g_inv, h)?;
            if let Some(other) = patch.get(&pre) {
                overlap += 1;
                if other != label {
                    agrees = false;
                    break;
                }
            }
        }
        let status = if !agrees {
            PeriodStatus::Eliminated
        } else if overlap >= min_overlap {
            PeriodStatus::Survives
        } else {
            PeriodStatus::Inconclusive
        };
        candidates.push(PeriodCandidate {
            element: g.clone(),
            key: group.key(g),
            word_length: ball.dist(g).unwrap_or(max_len),
            overlap,
            status,
        });
    }
    Ok(PeriodScan {
        max_len,
        min_overlap,
        candidates,
    })
}
