//! Locked shifts for finite-index normal subgroups.
//!
//! A subgroup is specified by a homomorphism `phi` onto a finite group
//! given as a multiplication table; the kernel `N` is the subgroup and
//! the image size is its index. Configurations over the section `R` of
//! coset representatives are constrained two ways: `Fix` rules force the
//! label to be constant along `N`-generators, and `sigma` rules forbid
//! equal labels at `g` and `g r` for nontrivial representatives `r`. The
//! canonical configuration `y_{nr} = r` satisfies both families, and
//! translating it by `g` fixes it exactly when `phi(g)` is trivial.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::group::{Group, GroupError, Letter, NormalForm};
use crate::patch::Patch;

/// Errors from quotient construction and locked-shift checks.
#[derive(Debug, Error)]
pub enum LockedError {
    #[error("bad multiplication table: {0}")]
    BadTable(String),
    #[error("generator images do not extend to a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("word {0:?} is not in the kernel")]
    NotInKernel(String),
    #[error("no image assigned to generator {0}")]
    MissingImage(String),
    #[error("patch supports differ at {0}")]
    SupportMismatch(String),
    #[error("lifted layer is not constant on the coset through {0}")]
    NotCosetConstant(String),
    #[error("patches do not overlap under this translation")]
    EmptyOverlap,
    #[error("label {0} is outside the section of size {1}")]
    LabelRange(usize, usize),
    #[error("quotient line {0}: {1}")]
    BadQuotientLine(usize, String),
    #[error("patch line {0}: {1}")]
    BadPatchLine(usize, String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A homomorphism from a generated group onto a finite group, with the
/// kernel's coset section.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub group: Group,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    phi: BTreeMap<Letter, usize>,
    /// `(image element, shortlex-least preimage word)` pairs; entry 0 is
    /// the identity with the empty word.
    section: Vec<(usize, Vec<Letter>)>,
}

fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|l| l.to_char()).collect()
    }
}

impl FiniteQuotient {
    /// Validates the table as a finite group, the generator images as a
    /// homomorphism (relator images must be trivial), and computes the
    /// section of shortlex-least preimages for the image subgroup.
    pub fn build(
        group: Group,
        table: Vec<Vec<usize>>,
        images: &[(Letter, usize)],
    ) -> Result<FiniteQuotient, LockedError> {
        let n = table.len();
        if n == 0 {
            return Err(LockedError::BadTable("empty table".to_string()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(LockedError::BadTable(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| **v >= n) {
                return Err(LockedError::BadTable(format!("entry {v} out of range")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(LockedError::BadTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| LockedError::BadTable("no identity element".to_string()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| LockedError::BadTable(format!("{x} has no inverse")))?;
        }

        let mut phi = BTreeMap::new();
        for (letter, img) in images {
            if *img >= n {
                return Err(LockedError::BadTable(format!("image {img} out of range")));
            }
            phi.insert(*letter, *img);
            phi.insert(letter.inverse(), inverses[*img]);
        }
        let positive: Vec<Letter> = group.generators().into_iter().filter(|l| !l.inv).collect();
        for l in &positive {
            if !phi.contains_key(l) {
                return Err(LockedError::MissingImage(l.to_string()));
            }
        }

        let q = FiniteQuotient {
            group,
            table,
            identity,
            inverses,
            phi,
            section: Vec::new(),
        };

        // Relator images must be trivial for phi to be a homomorphism.
        for rel in group_relators(&group) {
            let img = q.phi_word(&rel)?;
            if img != identity {
                return Err(LockedError::NotHomomorphism(format!(
                    "relator {} maps to {img}",
                    word_string(&rel)
                )));
            }
        }

        // Shortlex BFS over generator words finds the least preimage of
        // each reachable image element; the queue order is shortlex
        // because generators() is sorted and extensions preserve order.
        let mut section: Vec<(usize, Vec<Letter>)> = vec![(identity, Vec::new())];
        let mut seen = vec![false; n];
        seen[identity] = true;
        let mut frontier = 0;
        while frontier < section.len() {
            let (img, word) = section[frontier].clone();
            frontier += 1;
            for l in group.generators() {
                let next = q.table[img][q.phi[&l]];
                if !seen[next] {
                    seen[next] = true;
                    let mut w = word.clone();
                    w.push(l);
                    section.push((next, w));
                }
            }
        }

        Ok(FiniteQuotient { section, ..q })
    }

    /// The order of the target group.
    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// The index of the kernel: the size of the image subgroup.
    pub fn index(&self) -> usize {
        self.section.len()
    }

    pub fn identity_elem(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn section(&self) -> &[(usize, Vec<Letter>)] {
        &self.section
    }

    /// Rendered section words, `"1"` for the identity representative.
    pub fn section_words(&self) -> Vec<String> {
        self.section.iter().map(|(_, w)| word_string(w)).collect()
    }

    pub fn phi_letter(&self, l: Letter) -> Result<usize, LockedError> {
        self.phi
            .get(&l)
            .copied()
            .ok_or_else(|| LockedError::MissingImage(l.to_string()))
    }

    pub fn phi_word(&self, w: &[Letter]) -> Result<usize, LockedError> {
        let mut acc = self.identity;
        for l in w {
            acc = self.table[acc][self.phi_letter(*l)?];
        }
        Ok(acc)
    }

    pub fn phi(&self, g: &NormalForm) -> Result<usize, LockedError> {
        self.phi_word(&self.group.spell(g))
    }

    /// The section index of `phi(g)`: the label the canonical
    /// configuration assigns to `g`.
    pub fn label_of(&self, g: &NormalForm) -> Result<usize, LockedError> {
        let img = self.phi(g)?;
        Ok(self
            .section
            .iter()
            .position(|(e, _)| *e == img)
            .expect("image subgroup is closed under the section BFS"))
    }

    /// The representative word for a section index.
    pub fn rep_word(&self, label: usize) -> Result<&[Letter], LockedError> {
        self.section
            .get(label)
            .map(|(_, w)| w.as_slice())
            .ok_or(LockedError::LabelRange(label, self.section.len()))
    }

    /// The representative as a group element.
    pub fn rep_element(&self, label: usize) -> Result<NormalForm, LockedError> {
        Ok(self.group.element_from_letters(self.rep_word(label)?)?)
    }
}

/// Defining relators of the supported groups, as letter words.
fn group_relators(group: &Group) -> Vec<Vec<Letter>> {
    match group {
        Group::Free { .. } => Vec::new(),
        Group::FreeTimesZ { rank } => (0..*rank)
            .map(|i| vec![Letter::s(i), Letter::t(), Letter::s_inv(i), Letter::t_inv()])
            .collect(),
        Group::Bs { m, n } => {
            let mut rel = vec![Letter::t_inv()];
            rel.extend(std::iter::repeat_n(Letter::s(0), *m as usize));
            rel.push(Letter::t());
            rel.extend(std::iter::repeat_n(Letter::s_inv(0), *n as usize));
            vec![rel]
        }
    }
}

/// The two finite forbidden families defining the locked shift.
#[derive(Clone, Debug)]
pub struct LockedRules {
    /// `(n-generator word, r1, r2)` with `r1 != r2`: the labels at `g`
    /// and `g s` may not be `r1` and `r2`.
    pub fix_rules: Vec<(Vec<Letter>, usize, usize)>,
    /// Section indices `r != 0`: the labels at `g` and `g r` may not be
    /// equal.
    pub sigma_rules: Vec<usize>,
}

/// Builds the rule families from kernel generators, checking each word
/// really lies in the kernel.
pub fn locked_rules(
    q: &FiniteQuotient,
    n_gens: &[Vec<Letter>],
) -> Result<LockedRules, LockedError> {
    for w in n_gens {
        if q.phi_word(w)? != q.identity_elem() {
            return Err(LockedError::NotInKernel(word_string(w)));
        }
    }
    let k = q.index();
    let mut fix_rules = Vec::new();
    for w in n_gens {
        for r1 in 0..k {
            for r2 in 0..k {
                if r1 != r2 {
                    fix_rules.push((w.clone(), r1, r2));
                }
            }
        }
    }
    let sigma_rules = (1..k).collect();
    Ok(LockedRules {
        fix_rules,
        sigma_rules,
    })
}

/// A patch labeled by section indices.
pub type LockedPatch = Patch<usize>;

/// The canonical configuration `y_{nr} = r` restricted to a ball.
pub fn canonical_locked_patch(
    q: &FiniteQuotient,
    radius: u32,
    cap: usize,
) -> Result<LockedPatch, LockedError> {
    let ball = q.group.ball(radius, cap)?;
    let mut p = Patch::new(q.group, radius);
    for g in ball.elements() {
        let label = q.label_of(g)?;
        p.insert(g.clone(), label);
    }
    Ok(p)
}

/// One broken rule instance in a locked patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LockedViolation {
    pub cell: String,
    pub rule: &'static str,
    pub detail: String,
}

/// Validation outcome with per-family instance counts.
#[derive(Clone, Debug, Default)]
pub struct LockedReport {
    pub violations: Vec<LockedViolation>,
    pub checked: BTreeMap<&'static str, usize>,
}

impl LockedReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn tick(&mut self, rule: &'static str) {
        *self.checked.entry(rule).or_insert(0) += 1;
    }
}

/// Checks every fully-supported rule instance: labels in range, constancy
/// along each kernel generator, difference along each nontrivial
/// representative.
pub fn validate_locked(
    q: &FiniteQuotient,
    n_gens: &[Vec<Letter>],
    p: &LockedPatch,
) -> Result<LockedReport, LockedError> {
    let rules = locked_rules(q, n_gens)?;
    let group = q.group;
    let mut report = LockedReport::default();
    let gen_elems: Vec<(String, NormalForm)> = n_gens
        .iter()
        .map(|w| Ok((word_string(w), group.element_from_letters(w)?)))
        .collect::<Result<_, GroupError>>()?;
    let rep_elems: Vec<(usize, NormalForm)> = rules
        .sigma_rules
        .iter()
        .map(|r| Ok((*r, q.rep_element(*r)?)))
        .collect::<Result<_, LockedError>>()?;

    for (g, label) in p.cells() {
        report.tick("label-range");
        if *label >= q.index() {
            report.violations.push(LockedViolation {
                cell: group.key(g),
                rule: "label-range",
                detail: format!("label {label} out of range"),
            });
            continue;
        }
        for (name, s) in &gen_elems {
            let gs = group.multiply(g, s)?;
            if let Some(other) = p.get(&gs) {
                report.tick("fix");
                if other != label {
                    report.violations.push(LockedViolation {
                        cell: group.key(g),
                        rule: "fix",
                        detail: format!(
                            "label changes from {label} to {other} along kernel generator {name}"
                        ),
                    });
                }
            }
        }
        for (r, rep) in &rep_elems {
            let gr = group.multiply(g, rep)?;
            if let Some(other) = p.get(&gr) {
                report.tick("sigma");
                if other == label {
                    report.violations.push(LockedViolation {
                        cell: group.key(g),
                        rule: "sigma",
                        detail: format!(
                            "label {label} repeats across representative {}",
                            word_string(q.rep_word(*r)?)
                        ),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of comparing a patch with its own `g`-translate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    /// Labels agree on the whole overlap (of the given size).
    Fixes { overlap: usize },
    /// Some overlap cell differs.
    Moves { cell: String },
}

/// Compares `p` with `sigma^g(p)` on their overlap: the translate reads
/// label `p(g^-1 h)` at `h`.
pub fn stabilizer_check<L: Eq>(p: &Patch<L>, g: &NormalForm) -> Result<Stabilizer, LockedError> {
    let group = p.group;
    let g_inv = group.invert(g)?;
    let mut overlap = 0;
    for (h, label) in p.cells() {
        let pre = group.multiply(&g_inv, h)?;
        if let Some(other) = p.get(&pre) {
            overlap += 1;
            if other != label {
                return Ok(Stabilizer::Moves { cell: group.key(h) });
            }
        }
    }
    if overlap == 0 {
        return Err(LockedError::EmptyOverlap);
    }
    Ok(Stabilizer::Fixes { overlap })
}

/// Pairs a coset-constant lifted layer with a locked layer over the same
/// support. The lifted layer must assign equal labels to cells whose
/// quotient-corrected positions agree, which is checked by grouping cells
/// by `g rep(phi(g))^-1`.
pub fn product_lift<L: Clone + Eq>(
    xhat: &Patch<L>,
    locked: &LockedPatch,
    q: &FiniteQuotient,
) -> Result<Patch<(L, usize)>, LockedError> {
    let group = q.group;
    if xhat.len() != locked.len() {
        return Err(LockedError::SupportMismatch(format!(
            "{} cells vs {}",
            xhat.len(),
            locked.len()
        )));
    }
    for (g, _) in xhat.cells() {
        if locked.get(g).is_none() {
            return Err(LockedError::SupportMismatch(group.key(g)));
        }
    }

    let mut class_label: BTreeMap<String, (&L, String)> = BTreeMap::new();
    for (g, label) in xhat.cells() {
        let rep = q.rep_element(q.label_of(g)?)?;
        let rep_inv = group.invert(&rep)?;
        let h = group.multiply(g, &rep_inv)?;
        let key = group.key(&h);
        match class_label.get(&key) {
            None => {
                class_label.insert(key, (label, group.key(g)));
            }
            Some((seen, _)) if *seen == label => {}
            Some(_) => {
                return Err(LockedError::NotCosetConstant(group.key(g)));
            }
        }
    }

    let mut out = Patch::new(group, xhat.radius);
    for (g, label) in xhat.cells() {
        let r = *locked.get(g).expect("supports checked equal");
        out.insert(g.clone(), (label.clone(), r));
    }
    Ok(out)
}

/// Serializes a locked patch as `<key> <representative-word>` lines.
pub fn render_locked_patch(q: &FiniteQuotient, p: &LockedPatch) -> String {
    let words = q.section_words();
    let mut out = String::new();
    for (g, label) in p.cells() {
        let w = words.get(*label).map(String::as_str).unwrap_or("?");
        out.push_str(&format!("{} {}\n", p.group.key(g), w));
    }
    out
}

/// Parses `<key> <representative-word>` lines against the quotient's
/// section.
pub fn parse_locked_patch(
    q: &FiniteQuotient,
    radius: u32,
    body: &str,
) -> Result<LockedPatch, LockedError> {
    let words = q.section_words();
    let mut p = Patch::new(q.group, radius);
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || LockedError::BadPatchLine(i + 1, line.to_string());
        let mut parts = line.split_whitespace();
        let (Some(key), Some(word), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let g = q.group.parse_element(key)?;
        let label = words.iter().position(|w| w == word).ok_or_else(bad)?;
        p.insert(g, label);
    }
    Ok(p)
}

/// Parses a quotient file: `group:`, `order:`, `table:` with rows, and a
/// `phi:` line of `letter=image` pairs.
pub fn parse_quotient(text: &str) -> Result<FiniteQuotient, LockedError> {
    let mut group: Option<Group> = None;
    let mut order: Option<usize> = None;
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut images: Vec<(Letter, usize)> = Vec::new();
    let mut in_table = false;
    let mut saw_phi = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| LockedError::BadQuotientLine(lineno, msg.to_string());
        if let Some(rest) = line.strip_prefix("group:") {
            group = Some(rest.trim().parse().map_err(|_| bad("unknown group"))?);
            in_table = false;
        } else if let Some(rest) = line.strip_prefix("order:") {
            order = Some(rest.trim().parse().map_err(|_| bad("bad order"))?);
            in_table = false;
        } else if line == "table:" {
            in_table = true;
        } else if let Some(rest) = line.strip_prefix("phi:") {
            in_table = false;
            saw_phi = true;
            for chunk in rest.split_whitespace() {
                let (name, img) = chunk.split_once('=').ok_or_else(|| bad(chunk))?;
                let mut chars = name.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(bad(name));
                };
                let letter = Letter::from_char(c).map_err(LockedError::Group)?;
                let img: usize = img.parse().map_err(|_| bad(chunk))?;
                images.push((letter, img));
            }
        } else if in_table {
            let row: Result<Vec<usize>, _> =
                line.split_whitespace().map(str::parse::<usize>).collect();
            table.push(row.map_err(|_| bad(line))?);
        } else {
            return Err(bad(line));
        }
    }
    let group = group.ok_or(LockedError::BadQuotientLine(
        0,
        "missing group:".to_string(),
    ))?;
    let order = order.ok_or(LockedError::BadQuotientLine(
        0,
        "missing order:".to_string(),
    ))?;
    if !saw_phi {
        return Err(LockedError::BadQuotientLine(0, "missing phi:".to_string()));
    }
    if table.len() != order {
        return Err(LockedError::BadTable(format!(
            "expected {order} rows, found {}",
            table.len()
        )));
    }
    FiniteQuotient::build(group, table, &images)
}

pub fn render_quotient(q: &FiniteQuotient) -> String {
    let mut out = format!("group: {}\norder: {}\ntable:\n", q.group, q.order());
    for row in &q.table {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    let mut pairs = Vec::new();
    for (l, img) in &q.phi {
        if !l.inv {
            pairs.push(format!("{}={}", l.to_char(), img));
        }
    }
    out.push_str(&format!("phi: {}\n", pairs.join(" ")));
    out
}
