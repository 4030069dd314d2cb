//! Fast exact normal form for walk-group elements in the Fourier basis.
//!
//! Conjugating by the Fourier matrix turns the generators into monomial
//! matrices: `S` becomes the cyclic shift `e_c -> e_(c+1)` and the coin `G`
//! becomes `diag(1, -1, ..., -1)`. Every word in the generators is then a
//! *signed shift* — a cyclic permutation with a per-column sign — so a group
//! product costs O(n) instead of an O(n^3) matrix product. [`to_matrix`]
//! bridges back to [`CycMatrix`] so the composition law can be checked
//! against the exact engine rather than trusted.
//!
//! [`to_matrix`]: SignedShift::to_matrix

use crate::cyclotomic::{CycError, CycNum};
use crate::linalg::CycMatrix;

/// A monomial matrix `M` with `M e_c = signs[c] * e_((c + shift) mod n)`.
///
/// Structural equality of `(shift, signs)` is faithful: distinct signed
/// shifts are distinct matrices, so the derived `Eq`/`Hash` can key closure
/// enumeration directly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedShift {
    modulus: u64,
    shift: usize,
    signs: Vec<i8>,
}

impl SignedShift {
    pub fn new(modulus: u64, shift: usize, signs: Vec<i8>) -> Self {
        assert!(modulus >= 2, "signed shifts require n >= 2");
        assert_eq!(signs.len(), modulus as usize, "sign vector has wrong length");
        assert!(shift < modulus as usize, "shift must be reduced mod n");
        assert!(signs.iter().all(|&s| s == 1 || s == -1), "signs must be +1 or -1");
        SignedShift { modulus, shift, signs }
    }

    pub fn identity(n: u64) -> Self {
        Self::new(n, 0, vec![1; n as usize])
    }

    /// The conjugated shift generator `A^(-1) S A`: shift 1, all signs +1.
    pub fn gen_s_hat(n: u64) -> Self {
        Self::new(n, 1, vec![1; n as usize])
    }

    /// The conjugated coin `A^(-1) G A = diag(1, -1, ..., -1)`:
    /// shift 0, signs `(+1, -1, ..., -1)`.
    pub fn gen_g_hat(n: u64) -> Self {
        let mut signs = vec![-1; n as usize];
        signs[0] = 1;
        Self::new(n, 0, signs)
    }

    pub fn modulus_n(&self) -> u64 {
        self.modulus
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.signs.iter().all(|&s| s == 1)
    }

    /// Matrix product of the representatives. The sign vector of the left
    /// factor is read through the right factor's shift:
    /// `(a b) e_c = a.signs[(c + b.shift) mod n] * b.signs[c] * e_(c + a.shift + b.shift)`.
    pub fn compose(&self, rhs: &Self) -> Result<Self, CycError> {
        if self.modulus != rhs.modulus {
            return Err(CycError::FieldMismatch { left: self.modulus, right: rhs.modulus });
        }
        let n = self.modulus as usize;
        let shift = (self.shift + rhs.shift) % n;
        let signs = (0..n)
            .map(|c| self.signs[(c + rhs.shift) % n] * rhs.signs[c])
            .collect();
        Ok(SignedShift { modulus: self.modulus, shift, signs })
    }

    pub fn inverse(&self) -> Self {
        let n = self.modulus as usize;
        let shift = (n - self.shift) % n;
        let signs = (0..n).map(|c| self.signs[(c + n - self.shift) % n]).collect();
        SignedShift { modulus: self.modulus, shift, signs }
    }

    /// Membership in the commutator subgroup `H`.
    ///
    /// In the Fourier basis the commutator generators are the diagonal sign
    /// matrices with -1 exactly at positions 0 and j, so `H` consists of the
    /// shift-0 elements whose sign vector has an even number of -1 entries
    /// (those parity vectors span exactly the even-weight subspace). The
    /// test suite proves this fast test equal to brute-force closure
    /// membership before it is relied on.
    pub fn in_h(&self) -> bool {
        self.shift == 0 && self.signs.iter().filter(|&&s| s == -1).count().is_multiple_of(2)
    }

    /// The represented matrix, with `0`/`+1`/`-1` entries as field elements.
    pub fn to_matrix(&self) -> CycMatrix {
        let n = self.modulus as usize;
        CycMatrix::from_fn(self.modulus, n, |r, c| {
            if (c + self.shift) % n == r {
                CycNum::from_integer(self.modulus, self.signs[c] as i64)
            } else {
                CycNum::zero(self.modulus)
            }
        })
    }

    /// Structural read-back of a signed-shift matrix; `None` when the matrix
    /// is not a signed cyclic shift.
    pub fn from_matrix(m: &CycMatrix) -> Option<Self> {
        let n = m.dim();
        if n as u64 != m.modulus_n() || n < 2 {
            return None;
        }
        let one = CycNum::one(m.modulus_n());
        let minus_one = CycNum::from_integer(m.modulus_n(), -1);
        let mut shift = None;
        let mut signs = vec![0i8; n];
        for (c, slot) in signs.iter_mut().enumerate() {
            for r in 0..n {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let sign = if *e == one {
                    1
                } else if *e == minus_one {
                    -1
                } else {
                    return None;
                };
                if *slot != 0 {
                    return None; // second nonzero in this column
                }
                *slot = sign;
                let this_shift = (r + n - c) % n;
                match shift {
                    None => shift = Some(this_shift),
                    Some(s) if s == this_shift => {}
                    Some(_) => return None,
                }
            }
            if *slot == 0 {
                return None; // empty column
            }
        }
        Some(Self::new(m.modulus_n(), shift?, signs))
    }
}

impl std::fmt::Display for SignedShift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let signs: String = self
            .signs
            .iter()
            .map(|&s| if s == 1 { '+' } else { '-' })
            .collect();
        write!(f, "shift {} signs {}", self.shift, signs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{build_g, build_s, conjugate_by_dft};
    use proptest::prelude::*;

    #[test]
    fn generators_match_the_conjugated_matrices() {
        for n in [2u64, 3, 4, 6] {
            let s_hat = SignedShift::gen_s_hat(n);
            assert_eq!(s_hat.to_matrix(), conjugate_by_dft(&build_s(n)).unwrap());
            let g_hat = SignedShift::gen_g_hat(n);
            assert_eq!(g_hat.to_matrix(), conjugate_by_dft(&build_g(n)).unwrap());
        }
    }

    #[test]
    fn generator_shapes() {
        let s_hat = SignedShift::gen_s_hat(5);
        assert_eq!(s_hat.shift(), 1);
        assert!(s_hat.signs().iter().all(|&s| s == 1));

        let g_hat = SignedShift::gen_g_hat(5);
        assert_eq!(g_hat.shift(), 0);
        assert_eq!(g_hat.signs().iter().filter(|&&s| s == -1).count(), 4);
    }

    #[test]
    fn shift_generator_has_order_n() {
        let n = 4u64;
        let s_hat = SignedShift::gen_s_hat(n);
        let mut acc = SignedShift::identity(n);
        for _ in 0..n {
            acc = acc.compose(&s_hat).unwrap();
        }
        assert!(acc.is_identity());
    }

    #[test]
    fn coin_generator_is_involutory() {
        let g_hat = SignedShift::gen_g_hat(5);
        assert!(g_hat.compose(&g_hat).unwrap().is_identity());
        assert_eq!(g_hat.inverse(), g_hat);
    }

    #[test]
    fn compose_against_the_matrix_oracle() {
        let n = 3u64;
        let s_hat = SignedShift::gen_s_hat(n);
        let g_hat = SignedShift::gen_g_hat(n);
        let composed = s_hat.compose(&g_hat).unwrap();
        let oracle = conjugate_by_dft(&build_s(n))
            .unwrap()
            .matmul(&conjugate_by_dft(&build_g(n)).unwrap())
            .unwrap();
        assert_eq!(composed.to_matrix(), oracle);

        // g s g, nested composition
        let n = 4u64;
        let s_hat = SignedShift::gen_s_hat(n);
        let g_hat = SignedShift::gen_g_hat(n);
        let nested = g_hat.compose(&s_hat.compose(&g_hat).unwrap()).unwrap();
        let sm = conjugate_by_dft(&build_s(n)).unwrap();
        let gm = conjugate_by_dft(&build_g(n)).unwrap();
        let oracle = gm.matmul(&sm.matmul(&gm).unwrap()).unwrap();
        assert_eq!(nested.to_matrix(), oracle);
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let a = SignedShift::identity(3);
        let b = SignedShift::identity(4);
        assert_eq!(
            a.compose(&b),
            Err(CycError::FieldMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn inverse_of_shift_matches_repeated_composition() {
        let n = 5u64;
        let s_hat = SignedShift::gen_s_hat(n);
        let mut power = SignedShift::identity(n);
        for _ in 0..n - 1 {
            power = power.compose(&s_hat).unwrap();
        }
        assert_eq!(s_hat.inverse(), power);
        assert_eq!(SignedShift::identity(n).inverse(), SignedShift::identity(n));
    }

    #[test]
    fn membership_fast_test_examples() {
        assert!(SignedShift::identity(6).in_h());

        // conjugated [S, G]: shift 0, -1 at positions 0 and 1
        let n = 4u64;
        let mut signs = vec![1i8; 4];
        signs[0] = -1;
        signs[1] = -1;
        assert!(SignedShift::new(n, 0, signs).in_h());

        // the coin lies in H exactly when n is odd
        assert!(SignedShift::gen_g_hat(3).in_h());
        assert!(!SignedShift::gen_g_hat(4).in_h());

        // nonzero shift is never in H
        assert!(!SignedShift::gen_s_hat(5).in_h());
    }

    fn arb_signed_shift(n: u64) -> impl Strategy<Value = SignedShift> {
        let dim = n as usize;
        (0..dim, proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], dim))
            .prop_map(move |(shift, signs)| SignedShift::new(n, shift, signs))
    }

    fn arb_shift_pair() -> impl Strategy<Value = (SignedShift, SignedShift)> {
        (2u64..=7).prop_flat_map(|n| (arb_signed_shift(n), arb_signed_shift(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compose_matches_matrix_product((a, b) in arb_shift_pair()) {
            let composed = a.compose(&b).unwrap();
            let oracle = a.to_matrix().matmul(&b.to_matrix()).unwrap();
            prop_assert_eq!(composed.to_matrix(), oracle);
        }

        #[test]
        fn identity_laws(x in (2u64..=8).prop_flat_map(arb_signed_shift)) {
            let id = SignedShift::identity(x.modulus_n());
            prop_assert_eq!(x.compose(&id).unwrap(), x.clone());
            prop_assert_eq!(id.compose(&x).unwrap(), x.clone());
            prop_assert!(x.compose(&x.inverse()).unwrap().is_identity());
            prop_assert!(x.inverse().compose(&x).unwrap().is_identity());
        }

        #[test]
        fn matrix_roundtrip(x in (2u64..=6).prop_flat_map(arb_signed_shift)) {
            prop_assert_eq!(SignedShift::from_matrix(&x.to_matrix()), Some(x));
        }
    }

    #[test]
    fn from_matrix_rejects_non_monomial_matrices() {
        assert_eq!(SignedShift::from_matrix(&build_g(4)), None);
        // cyclic shift but with a non-unit entry
        let n = 3u64;
        let m = CycMatrix::from_fn(n, 3, |r, c| {
            if (c + 1) % 3 == r {
                CycNum::zeta(n)
            } else {
                CycNum::zero(n)
            }
        });
        assert_eq!(SignedShift::from_matrix(&m), None);
    }
}
