//! The walk group `K = <S, G>` and its commutator subgroup
//! `H = <[S^j, G] : j = 1..n-1>`, generated over a pluggable element
//! backend, plus the named-element checks behind the structure and
//! periodicity results:
//!
//! * `|H| = 2^(n-1)`, every element an involution, `H` normal in `K`;
//! * `K/H` is `Z_n x Z_2` for even `n` and `Z_n` for odd `n`, with
//!   `{S^j G^l}` (even) / `{S^j}` (odd) a complete system of coset
//!   representatives;
//! * `2n` is the least `m` with `(S^j G)^m = I` for all `j`, hence the
//!   walk operator's period.
//!
//! Backends: [`monomial_walk_group`] runs on signed shifts in the Fourier
//! basis (fast, `n <= 14`), [`exact_walk_group`] on dense cyclotomic
//! matrices in the original basis (slow oracle, `n <= 8`). All the facts
//! above are invariant under the basis conjugation, so the two must agree
//! wherever both run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::group::{
    commutator, generate_closure, identify_abelian_structure, is_normal, quotient, ClosureError,
    FiniteGroup, GroupElement, QuotientError, QuotientGroup,
};
use crate::linalg::{build_g, build_s, conjugate_by_dft, CycMatrix};
use crate::monomial::SignedShift;

/// Default ceiling on closure size; covers the fast backend through n = 14.
pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 18;

pub struct WalkGroup<E: GroupElement> {
    n: u64,
    s: E,
    g: E,
    k: FiniteGroup<E>,
    h: FiniteGroup<E>,
}

/// The walk group on signed shifts in the Fourier basis.
pub fn monomial_walk_group(
    n: u64,
    max_elements: usize,
) -> Result<WalkGroup<SignedShift>, ClosureError> {
    WalkGroup::generate(
        n,
        SignedShift::gen_s_hat(n),
        SignedShift::gen_g_hat(n),
        SignedShift::identity(n),
        max_elements,
    )
}

/// The walk group on exact cyclotomic matrices in the original basis.
pub fn exact_walk_group(n: u64, max_elements: usize) -> Result<WalkGroup<CycMatrix>, ClosureError> {
    WalkGroup::generate(
        n,
        build_s(n),
        build_g(n),
        CycMatrix::identity(n, n as usize),
        max_elements,
    )
}

/// The commutators `[s^j, g]` for `j = 1..n-1`, the generators of `H`.
pub fn walk_commutators<E: GroupElement>(n: u64, s: &E, g: &E, identity: &E) -> Vec<E> {
    let mut commutators = Vec::with_capacity(n as usize - 1);
    let mut s_pow = identity.clone();
    for _ in 1..n {
        s_pow = s_pow.compose(s);
        commutators.push(commutator(&s_pow, g));
    }
    commutators
}

/// Closure of the commutators alone, without paying for the full `K`.
pub fn generate_h<E: GroupElement>(
    n: u64,
    s: &E,
    g: &E,
    identity: &E,
    max_elements: usize,
) -> Result<FiniteGroup<E>, ClosureError> {
    assert!(n >= 2, "the walk group requires n >= 2");
    let commutators = walk_commutators(n, s, g, identity);
    generate_closure(identity.clone(), commutators, max_elements)
}

impl<E: GroupElement> WalkGroup<E> {
    /// Generates `K = <s, g>` and `H = <[s^j, g]>` by breadth-first closure.
    pub fn generate(
        n: u64,
        s: E,
        g: E,
        identity: E,
        max_elements: usize,
    ) -> Result<Self, ClosureError> {
        assert!(n >= 2, "the walk group requires n >= 2");
        let k = generate_closure(identity.clone(), vec![s.clone(), g.clone()], max_elements)?;
        let h = generate_h(n, &s, &g, &identity, max_elements)?;
        Ok(WalkGroup { n, s, g, k, h })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> &FiniteGroup<E> {
        &self.k
    }

    pub fn h(&self) -> &FiniteGroup<E> {
        &self.h
    }

    fn s_pow(&self, j: u64) -> E {
        let mut acc = self.k.identity().clone();
        for _ in 0..j {
            acc = acc.compose(&self.s);
        }
        acc
    }

    pub fn is_h_normal_in_k(&self) -> bool {
        is_normal(&self.h, &self.k)
    }

    pub fn quotient(&self) -> Result<QuotientGroup<E>, QuotientError> {
        quotient(&self.k, &self.h)
    }

    /// In-`H` membership of the named elements `G`, `S^j`, `S^j G`, and
    /// whether they fit the parity rule: only `G` (odd `n`) lies in `H`.
    pub fn membership_suite(&self) -> MembershipFacts {
        let mut facts = BTreeMap::new();
        let mut matches = true;

        let g_in = self.h.contains(&self.g);
        matches &= g_in == (self.n % 2 == 1);
        facts.insert("G".to_string(), g_in);

        for j in 1..self.n {
            let s_j = self.s_pow(j);
            let name = if j == 1 { "S".to_string() } else { format!("S^{j}") };
            let s_in = self.h.contains(&s_j);
            matches &= !s_in;
            facts.insert(name.clone(), s_in);

            let sg = s_j.compose(&self.g);
            let sg_name = if j == 1 { "SG".to_string() } else { format!("S^{j}G") };
            let sg_in = self.h.contains(&sg);
            matches &= !sg_in;
            facts.insert(sg_name, sg_in);
        }
        MembershipFacts { facts, matches_expected: matches }
    }

    /// `S^j G^k H = G^k S^j H` for all `j` mod `n` and `k` mod 2, checked
    /// as `(S^j G^k)(G^k S^j)^(-1) in H`.
    pub fn coset_swap_check(&self) -> bool {
        for j in 0..self.n {
            let s_j = self.s_pow(j);
            for k in 0..2u32 {
                let g_k = if k == 0 {
                    self.k.identity().clone()
                } else {
                    self.g.clone()
                };
                let left = s_j.compose(&g_k);
                let right = g_k.compose(&s_j);
                if !self.h.contains(&left.compose(&right.inverse())) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the claimed complete system of coset representatives —
    /// `{S^j G^l : l = 0, 1}` for even `n`, `{S^j}` for odd `n` — hits every
    /// coset exactly once.
    pub fn coset_representative_check(&self, q: &QuotientGroup<E>) -> bool {
        let mut reps = Vec::new();
        for j in 0..self.n {
            let s_j = self.s_pow(j);
            reps.push(s_j.clone());
            if self.n.is_multiple_of(2) {
                reps.push(s_j.compose(&self.g));
            }
        }
        if reps.len() != q.order() {
            return false;
        }
        let mut seen = vec![false; q.order()];
        for rep in &reps {
            match q.coset_id(rep) {
                Some(id) if !seen[id] => seen[id] = true,
                _ => return false,
            }
        }
        true
    }

    /// The smallest `m >= 1` with `(S^j G)^m` equal to the identity for
    /// every `j = 0..n-1`, found by advancing all running powers in
    /// lockstep. Bounded by `|K|` since every element order divides it.
    pub fn minimal_common_exponent(&self) -> u64 {
        let identity = self.k.identity().clone();
        let targets: Vec<E> = (0..self.n).map(|j| self.s_pow(j).compose(&self.g)).collect();
        let mut powers = targets.clone();
        let bound = self.k.order() as u64;
        for m in 1..=bound {
            if powers.iter().all(|p| *p == identity) {
                return m;
            }
            for (p, t) in powers.iter_mut().zip(&targets) {
                *p = p.compose(t);
            }
        }
        unreachable!("the common exponent divides the group order")
    }

    /// The stepping stones of the periodicity argument:
    /// `(S^j G)^n in H` for every `j`; for even `n`, `(SG)^n` is not the
    /// identity; and `n` is the least `k >= 1` with `(SG)^k in H`.
    pub fn power_in_h_checks(&self) -> bool {
        let identity = self.k.identity().clone();
        for j in 0..self.n {
            let base = self.s_pow(j).compose(&self.g);
            let mut acc = identity.clone();
            for _ in 0..self.n {
                acc = acc.compose(&base);
            }
            if !self.h.contains(&acc) {
                return false;
            }
            // for even n, the n-th power of SG must not collapse to the identity
            if j == 1 && self.n.is_multiple_of(2) && acc == identity {
                return false;
            }
        }
        // n is the least k >= 1 with (SG)^k in H
        let sg = self.s.compose(&self.g);
        let mut acc = sg.clone();
        for _ in 1..self.n {
            if self.h.contains(&acc) {
                return false;
            }
            acc = acc.compose(&sg);
        }
        self.h.contains(&acc)
    }

    /// Assembles the orders, quotient structure, membership facts, and
    /// minimal exponent into a serializable report.
    pub fn report(&self, engine: &str) -> Result<GroupReport, QuotientError> {
        let q = self.quotient()?;
        let quotient_structure = match identify_abelian_structure(&q, self.n) {
            Ok(structure) => structure.to_string(),
            Err(err) => format!("unidentified ({err})"),
        };
        let membership = self.membership_suite();
        Ok(GroupReport {
            schema_version: GroupReport::SCHEMA_VERSION,
            n: self.n,
            engine: engine.to_string(),
            order_k: self.k.order(),
            order_h: self.h.order(),
            order_quotient: q.order(),
            quotient_structure,
            membership_facts: membership.facts,
            minimal_exponent_m: self.minimal_common_exponent(),
        })
    }

    /// One-line theorem audit used for exit codes: every structural claim
    /// that the report summarizes, evaluated strictly.
    pub fn theorems_hold(&self) -> bool {
        let expected_h = 1usize << (self.n - 1);
        if self.h.order() != expected_h {
            return false;
        }
        if self.h.element_orders().iter().any(|&o| o > 2) {
            return false;
        }
        if !self.is_h_normal_in_k() {
            return false;
        }
        let q = match self.quotient() {
            Ok(q) => q,
            Err(_) => return false,
        };
        let expected_q = if self.n.is_multiple_of(2) { 2 * self.n } else { self.n } as usize;
        if q.order() != expected_q || q.order() * self.h.order() != self.k.order() {
            return false;
        }
        if identify_abelian_structure(&q, self.n).is_err() {
            return false;
        }
        self.membership_suite().matches_expected
            && self.coset_swap_check()
            && self.coset_representative_check(&q)
            && self.power_in_h_checks()
            && self.minimal_common_exponent() == 2 * self.n
    }
}

/// In-`H` membership of the named elements, plus whether they match the
/// parity rule.
#[derive(Debug, Clone)]
pub struct MembershipFacts {
    pub facts: BTreeMap<String, bool>,
    pub matches_expected: bool,
}

/// Serializable summary of one walk-group run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupReport {
    pub schema_version: u32,
    pub n: u64,
    pub engine: String,
    pub order_k: usize,
    pub order_h: usize,
    pub order_quotient: usize,
    pub quotient_structure: String,
    pub membership_facts: BTreeMap<String, bool>,
    pub minimal_exponent_m: u64,
}

impl GroupReport {
    pub const SCHEMA_VERSION: u32 = 1;
}

/// A letter of a random generator word for cross-engine evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorLetter {
    SHat,
    SHatInv,
    GHat,
}

/// Seeded random words over `{S_hat, S_hat^(-1), G_hat}` of length
/// `1..=max_len`.
pub fn random_generator_words(
    count: usize,
    max_len: usize,
    seed: u64,
) -> Vec<Vec<GeneratorLetter>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| match rng.gen_range(0..3u8) {
                    0 => GeneratorLetter::SHat,
                    1 => GeneratorLetter::SHatInv,
                    _ => GeneratorLetter::GHat,
                })
                .collect()
        })
        .collect()
}

fn fold_word<E: GroupElement>(
    identity: &E,
    s: &E,
    s_inv: &E,
    g: &E,
    word: &[GeneratorLetter],
) -> E {
    let mut acc = identity.clone();
    for letter in word {
        let factor = match letter {
            GeneratorLetter::SHat => s,
            GeneratorLetter::SHatInv => s_inv,
            GeneratorLetter::GHat => g,
        };
        acc = acc.compose(factor);
    }
    acc
}

/// Evaluates a word in the signed-shift engine.
pub fn evaluate_word_monomial(n: u64, word: &[GeneratorLetter]) -> SignedShift {
    let s = SignedShift::gen_s_hat(n);
    let s_inv = GroupElement::inverse(&s);
    let g = SignedShift::gen_g_hat(n);
    fold_word(&SignedShift::identity(n), &s, &s_inv, &g, word)
}

/// Evaluates a word as an exact matrix product of the conjugated
/// generators.
pub fn evaluate_word_exact(n: u64, word: &[GeneratorLetter]) -> CycMatrix {
    let s = conjugate_by_dft(&build_s(n)).expect("shift matrix has matching shape");
    let s_inv = GroupElement::inverse(&s);
    let g = conjugate_by_dft(&build_g(n)).expect("coin matrix has matching shape");
    fold_word(&CycMatrix::identity(n, n as usize), &s, &s_inv, &g, word)
}

/// The oracle-equivalence property: every word evaluates to the same matrix
/// through both engines.
pub fn words_agree_across_engines(n: u64, words: &[Vec<GeneratorLetter>]) -> bool {
    let ms = SignedShift::gen_s_hat(n);
    let ms_inv = GroupElement::inverse(&ms);
    let mg = SignedShift::gen_g_hat(n);
    let mid = SignedShift::identity(n);
    let es = conjugate_by_dft(&build_s(n)).expect("shift matrix has matching shape");
    let es_inv = GroupElement::inverse(&es);
    let eg = conjugate_by_dft(&build_g(n)).expect("coin matrix has matching shape");
    let eid = CycMatrix::identity(n, n as usize);
    words.iter().all(|w| {
        let mono = fold_word(&mid, &ms, &ms_inv, &mg, w);
        let exact = fold_word(&eid, &es, &es_inv, &eg, w);
        mono.to_matrix() == exact
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_across_small_n() {
        for (n, k, h, q) in [(2u64, 8, 2, 4), (3, 12, 4, 3), (4, 64, 8, 8), (5, 80, 16, 5)] {
            let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            assert_eq!(wg.k().order(), k, "order of K at n={n}");
            assert_eq!(wg.h().order(), h, "order of H at n={n}");
            assert_eq!(wg.quotient().unwrap().order(), q, "order of K/H at n={n}");
        }
    }

    #[test]
    fn membership_facts_match_the_parity_rule() {
        let wg = monomial_walk_group(3, DEFAULT_MAX_ELEMENTS).unwrap();
        let facts = wg.membership_suite();
        assert!(facts.matches_expected);
        assert!(facts.facts["G"]);

        let wg = monomial_walk_group(4, DEFAULT_MAX_ELEMENTS).unwrap();
        let facts = wg.membership_suite();
        assert!(facts.matches_expected);
        assert!(!facts.facts["G"]);
        assert!(!facts.facts["S^2"]);
        assert!(!facts.facts["S^3G"]);

        let wg = monomial_walk_group(2, DEFAULT_MAX_ELEMENTS).unwrap();
        let facts = wg.membership_suite();
        assert!(facts.matches_expected);
        assert!(!facts.facts["S"]);
    }

    #[test]
    fn coset_swap_holds() {
        for n in [3u64, 6] {
            let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            assert!(wg.coset_swap_check(), "coset swap at n={n}");
        }
    }

    #[test]
    fn representative_systems_are_complete() {
        for (n, reps) in [(2u64, 4usize), (4, 8), (5, 5)] {
            let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            let q = wg.quotient().unwrap();
            assert_eq!(q.order(), reps);
            assert!(wg.coset_representative_check(&q), "representatives at n={n}");
        }
    }

    #[test]
    fn minimal_common_exponent_is_twice_n() {
        for (n, expected) in [(2u64, 4u64), (3, 6), (4, 8)] {
            let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            assert_eq!(wg.minimal_common_exponent(), expected);
        }
    }

    #[test]
    fn periodicity_stepping_stones() {
        for n in 2u64..=7 {
            let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            assert!(wg.power_in_h_checks(), "power-in-H facts at n={n}");
        }
    }

    #[test]
    fn full_theorem_audit_passes_on_both_backends() {
        for n in 2u64..=6 {
            assert!(monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap().theorems_hold());
        }
        for n in 2u64..=4 {
            assert!(exact_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap().theorems_hold());
        }
    }

    #[test]
    fn exact_and_monomial_closures_have_equal_sizes() {
        for n in 2u64..=5 {
            let fast = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            let slow = exact_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
            assert_eq!(fast.k().order(), slow.k().order(), "|K| at n={n}");
            assert_eq!(fast.h().order(), slow.h().order(), "|H| at n={n}");
        }
    }

    #[test]
    fn report_contents() {
        let wg = monomial_walk_group(3, DEFAULT_MAX_ELEMENTS).unwrap();
        let report = wg.report("monomial").unwrap();
        assert_eq!(report.order_k, 12);
        assert_eq!(report.order_h, 4);
        assert_eq!(report.order_quotient, 3);
        assert_eq!(report.quotient_structure, "Z_3");
        assert_eq!(report.minimal_exponent_m, 6);
        assert!(report.membership_facts["G"]);
    }

    #[test]
    fn random_words_are_reproducible() {
        let a = random_generator_words(10, 30, 7);
        let b = random_generator_words(10, 30, 7);
        assert_eq!(a, b);
        let c = random_generator_words(10, 30, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn words_agree_on_small_n() {
        let words = random_generator_words(50, 20, 1);
        for n in 2u64..=4 {
            assert!(words_agree_across_engines(n, &words), "n={n}");
        }
    }
}
