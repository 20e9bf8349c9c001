//! Bounded word-problem oracle, independent of the normal-form rewriting.
//!
//! Three mechanisms with one-sided soundness each:
//!
//! * free reduction: reduced-equal words are equal;
//! * bounded breadth-first search over relator insertions (plus free
//!   cancellation): a meet proves equality, exhaustion proves nothing;
//! * the affine shadow `a -> (x -> x+1)`, `t -> (x -> (m/n) x)`, a
//!   homomorphism `BS(m,n) -> Aff(Q)`: different images prove inequality,
//!   equal images prove nothing (the shadow is not faithful; `BS(2,3)` is not
//!   residually finite, so no faithful finite shadow exists).
//!
//! The oracle is deliberately slow and simple; its only job is to certify the
//! fast normal forms on small words.

use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::One;
use num_traits::Zero;

use crate::group::{free_reduce, invert_word, Letter, Sym};
use crate::rat::ratio;

/// Oracle verdict; `Equal` and `Unequal` are sound, `Unknown` says nothing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Equal,
    Unequal,
    Unknown,
}

/// A finite presentation over the letter alphabet: `n_s` free symbols
/// (`a`, `b`, ...) plus optionally the stable letter `t`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub n_s: u8,
    pub has_t: bool,
    pub relators: Vec<Vec<Letter>>,
}

impl Presentation {
    /// `BS(m,n) = < a, t | t^-1 a^m t a^-n >`.
    pub fn bs(m: u32, n: u32) -> Presentation {
        let mut r = vec![Letter::t_inv()];
        r.extend(std::iter::repeat_n(Letter::s(0), m as usize));
        r.push(Letter::t());
        r.extend(std::iter::repeat_n(Letter::s_inv(0), n as usize));
        Presentation {
            n_s: 1,
            has_t: true,
            relators: vec![r],
        }
    }

    /// Torus-knot group `< a, b | a^n b^-m >`.
    pub fn torus_knot(n: u32, m: u32) -> Presentation {
        let mut r = Vec::new();
        r.extend(std::iter::repeat_n(Letter::s(0), n as usize));
        r.extend(std::iter::repeat_n(Letter::s_inv(1), m as usize));
        Presentation {
            n_s: 2,
            has_t: false,
            relators: vec![r],
        }
    }

    /// Dihedral Artin group `< a, b | prod(a,b;n) = prod(b,a;n) >` where
    /// `prod(x,y;n)` alternates `x y x y ...` for `n` letters.
    pub fn dihedral_artin(n: u32) -> Presentation {
        let prod = |first: u8, second: u8| -> Vec<Letter> {
            (0..n)
                .map(|i| Letter::s(if i % 2 == 0 { first } else { second }))
                .collect()
        };
        let mut r = prod(0, 1);
        r.extend(invert_word(&prod(1, 0)));
        Presentation {
            n_s: 2,
            has_t: false,
            relators: vec![free_reduce(&r)],
        }
    }

    /// `F_n x Z`: commutators `[s_i, t]`.
    pub fn fnz(rank: u8) -> Presentation {
        let mut relators = Vec::new();
        for i in 0..rank {
            relators.push(vec![
                Letter::s(i),
                Letter::t(),
                Letter::s_inv(i),
                Letter::t_inv(),
            ]);
        }
        Presentation {
            n_s: rank,
            has_t: true,
            relators,
        }
    }

    /// All relator variants used by the insertion search: every cyclic
    /// rotation of every relator and of its inverse, freely reduced.
    pub fn relator_variants(&self) -> Vec<Vec<Letter>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for rel in &self.relators {
            for base in [rel.clone(), invert_word(rel)] {
                let len = base.len();
                for shift in 0..len.max(1) {
                    let mut rot: Vec<Letter> = base[shift..].to_vec();
                    rot.extend_from_slice(&base[..shift]);
                    let rot = free_reduce(&rot);
                    if !rot.is_empty() && seen.insert(rot.clone()) {
                        out.push(rot);
                    }
                }
            }
        }
        out
    }
}

/// Bounded search engine for one presentation.
pub struct OracleEngine {
    variants: Vec<Vec<Letter>>,
    /// Reduced intermediate words longer than this are pruned.
    pub len_bound: usize,
    /// Hard cap on visited states.
    pub state_cap: usize,
}

impl OracleEngine {
    pub fn new(pres: &Presentation, len_bound: usize, state_cap: usize) -> OracleEngine {
        OracleEngine {
            variants: pres.relator_variants(),
            len_bound,
            state_cap,
        }
    }

    /// Searches from `start` until every word in `targets` is met or the
    /// budget runs out. Returns the subset of `targets` that was reached
    /// (every reached word is provably equal to `start`).
    pub fn reach(&self, start: &[Letter], targets: &[Vec<Letter>]) -> HashSet<Vec<Letter>> {
        let start = free_reduce(start);
        let mut wanted: HashSet<Vec<Letter>> = targets.iter().map(|t| free_reduce(t)).collect();
        let mut found = HashSet::new();
        if wanted.remove(&start) {
            found.insert(start.clone());
        }
        if wanted.is_empty() {
            return found;
        }
        let mut seen: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for variant in &self.variants {
                for pos in 0..=cur.len() {
                    let mut cand = Vec::with_capacity(cur.len() + variant.len());
                    cand.extend_from_slice(&cur[..pos]);
                    cand.extend_from_slice(variant);
                    cand.extend_from_slice(&cur[pos..]);
                    let cand = free_reduce(&cand);
                    if cand.len() > self.len_bound || seen.contains(&cand) {
                        continue;
                    }
                    if wanted.remove(&cand) {
                        found.insert(cand.clone());
                        if wanted.is_empty() {
                            return found;
                        }
                    }
                    if seen.len() >= self.state_cap {
                        return found;
                    }
                    seen.insert(cand.clone());
                    queue.push_back(cand);
                }
            }
        }
        found
    }

    /// Sound equality check: `true` means `u = v` in the presented group.
    pub fn proves_equal(&self, u: &[Letter], v: &[Letter]) -> bool {
        let target = free_reduce(v);
        !self.reach(u, &[target]).is_empty()
    }
}

/// Affine map `x -> scale * x + offset` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    pub scale: BigRational,
    pub offset: BigRational,
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        AffineMap {
            scale: BigRational::one(),
            offset: BigRational::zero(),
        }
    }

    /// `self` after `other`: `(self . other)(x) = self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            scale: &self.scale * &other.scale,
            offset: &self.scale * &other.offset + &self.offset,
        }
    }
}

/// The affine shadow of a `BS(m,n)` word: `a -> x + 1`, `t -> (m/n) x`.
///
/// This is a homomorphism (check: `t^-1 a^m t` maps to
/// `x -> (n/m)((m/n)x + m) = x + n`), so distinct images certify distinct
/// elements; equal images certify nothing.
pub fn affine_shadow(word: &[Letter], m: u32, n: u32) -> AffineMap {
    let mut acc = AffineMap::identity();
    for &l in word {
        let step = match (l.sym, l.inv) {
            (Sym::S(_), false) => AffineMap {
                scale: ratio(1, 1),
                offset: ratio(1, 1),
            },
            (Sym::S(_), true) => AffineMap {
                scale: ratio(1, 1),
                offset: ratio(-1, 1),
            },
            (Sym::T, false) => AffineMap {
                scale: ratio(m as i64, n as i64),
                offset: ratio(0, 1),
            },
            (Sym::T, true) => AffineMap {
                scale: ratio(n as i64, m as i64),
                offset: ratio(0, 1),
            },
        };
        acc = acc.compose(&step);
    }
    acc
}

/// Internal state cap for [`wp_oracle`]; generous relative to length-bounded
/// frontiers on short inputs while keeping worst cases finite.
const WP_STATE_CAP: usize = 50_000;

/// Bounded word-problem oracle for `BS(m,n)`.
///
/// `bound` limits the length of reduced intermediate words in the insertion
/// search. Verdicts `Equal` and `Unequal` are sound; `Unknown` means the
/// budget was exhausted.
pub fn wp_oracle(u: &[Letter], v: &[Letter], m: u32, n: u32, bound: usize) -> Verdict {
    if affine_shadow(u, m, n) != affine_shadow(v, m, n) {
        return Verdict::Unequal;
    }
    let ru = free_reduce(u);
    let rv = free_reduce(v);
    if ru == rv {
        return Verdict::Equal;
    }
    let engine = OracleEngine::new(&Presentation::bs(m, n), bound, WP_STATE_CAP);
    if engine.proves_equal(&ru, &rv) {
        Verdict::Equal
    } else {
        Verdict::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_word;

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn wp_oracle_pinned_examples() {
        assert_eq!(wp_oracle(&w("Taat"), &w("aaa"), 2, 3, 8), Verdict::Equal);
        assert_eq!(wp_oracle(&w("a"), &w("aa"), 2, 3, 8), Verdict::Unequal);
        assert_eq!(wp_oracle(&w("1"), &w("1"), 2, 3, 0), Verdict::Equal);
    }

    #[test]
    fn shadow_is_a_homomorphism_on_samples() {
        let pairs = [
            ("aTat", "tAAt"),
            ("TTaa", "atat"),
            ("a", "1"),
            ("tA", "AAtt"),
        ];
        for (us, vs) in pairs {
            let u = w(us);
            let v = w(vs);
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let lhs = affine_shadow(&uv, 2, 3);
            let rhs = affine_shadow(&u, 2, 3).compose(&affine_shadow(&v, 2, 3));
            assert_eq!(lhs, rhs, "shadow({us} {vs})");
        }
    }

    #[test]
    fn shadow_kills_the_relator() {
        for (m, n) in [(2u32, 3u32), (1, 2), (3, 3), (4, 2)] {
            let mut rel = vec![Letter::t_inv()];
            rel.extend(std::iter::repeat_n(Letter::s(0), m as usize));
            rel.push(Letter::t());
            rel.extend(std::iter::repeat_n(Letter::s_inv(0), n as usize));
            assert_eq!(
                affine_shadow(&rel, m, n),
                AffineMap::identity(),
                "BS({m},{n})"
            );
        }
    }

    #[test]
    fn oracle_agrees_with_normal_forms_on_spot_checks() {
        use crate::group::Group;
        let g = Group::Bs { m: 2, n: 3 };
        // t a^3 t^-1 = a^2; a^2 t a^-1 = t a^2 differs from a t a.
        let cases = [("taaaT", "aa"), ("aatA", "ata")];
        for (us, vs) in cases {
            let equal_nf = g.parse_element(us).unwrap() == g.parse_element(vs).unwrap();
            let verdict = wp_oracle(&w(us), &w(vs), 2, 3, 10);
            match verdict {
                Verdict::Equal => assert!(equal_nf, "{us} vs {vs}"),
                Verdict::Unequal => assert!(!equal_nf, "{us} vs {vs}"),
                Verdict::Unknown => {}
            }
        }
    }

    #[test]
    fn torus_knot_center_identity() {
        // In < a, b | a^2 b^-3 >, a^2 = b^3 within one insertion.
        let pres = Presentation::torus_knot(2, 3);
        let engine = OracleEngine::new(&pres, 12, 20_000);
        assert!(engine.proves_equal(&w("aa"), &w("bbb")));
        assert!(!engine.proves_equal(&w("a"), &w("b")));
    }

    #[test]
    fn artin_presentation_relator_reduces() {
        let pres = Presentation::dihedral_artin(3);
        // aba = bab within budget.
        let engine = OracleEngine::new(&pres, 10, 20_000);
        assert!(engine.proves_equal(&w("aba"), &w("bab")));
    }

    #[test]
    fn reach_finds_multiple_targets() {
        let pres = Presentation::bs(2, 3);
        let engine = OracleEngine::new(&pres, 10, 20_000);
        let targets = vec![w("aaa"), w("Taat"), w("aTaat" /* not equal to a^3 */)];
        let found = engine.reach(&w("aaa"), &targets);
        assert!(found.contains(&w("aaa")));
        assert!(found.contains(&w("Taat")));
        assert!(!found.contains(&w("aTaat")));
    }
}
