//! Exact arithmetic in the cyclotomic field `Q(zeta_n)`, `zeta_n = e^(2*pi*i/n)`.
//!
//! Elements are polynomials in `zeta_n` reduced modulo the n-th cyclotomic
//! polynomial `Phi_n`, with arbitrary-precision rational coefficients. The
//! quotient by `Phi_n` (rather than `x^n - 1`) makes the representation
//! canonical: two elements are equal as complex numbers exactly when their
//! coefficient vectors are equal, so every matrix identity downstream is
//! decided by coefficient comparison, never by rounding.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type BigRational = num_rational::BigRational;

/// Error conditions of the field operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero in Q(zeta_{n})")]
    DivisionByZero { n: u64 },
    #[error("incompatible cyclotomic fields: Q(zeta_{left}) vs Q(zeta_{right})")]
    FieldMismatch { left: u64, right: u64 },
}

/// The n-th cyclotomic polynomial `Phi_n` as integer coefficients
/// (index = degree, monic).
///
/// Computed by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`
/// of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial requires n >= 1");
    // x^n - 1
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = int_poly_div_exact(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

/// Euler's totient, as the degree of `Phi_n`.
pub fn euler_phi(n: u64) -> usize {
    FieldContext::get(n).degree
}

/// Long division of integer polynomials where the divisor is monic and
/// divides exactly.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    assert!(rem.len() >= den.len());
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dn].clone();
        if lead.is_zero() {
            continue;
        }
        quot[k] = lead.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &lead * d;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// Shared per-n data: the degree of the extension and every power of
/// `zeta_n` already reduced into the power basis.
struct FieldContext {
    degree: usize,
    /// `zeta^k` in the basis `1, zeta, ..., zeta^(degree-1)`,
    /// for `k = 0 ..= max(n-1, 2*degree-2)`.
    reduced_powers: Vec<Vec<BigRational>>,
}

impl FieldContext {
    fn get(n: u64) -> Arc<FieldContext> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<FieldContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("field context cache poisoned");
        map.entry(n).or_insert_with(|| Arc::new(Self::build(n))).clone()
    }

    fn build(n: u64) -> FieldContext {
        assert!(n >= 1, "cyclotomic field requires n >= 1");
        let modulus: Vec<BigRational> = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let degree = modulus.len() - 1;
        let max_exp = (n as usize - 1).max(2 * degree.saturating_sub(1));
        let mut reduced_powers = Vec::with_capacity(max_exp + 1);
        for k in 0..degree.min(max_exp + 1) {
            let mut v = vec![BigRational::zero(); degree];
            v[k] = BigRational::one();
            reduced_powers.push(v);
        }
        while reduced_powers.len() <= max_exp {
            let prev = reduced_powers.last().unwrap();
            let mut next = vec![BigRational::zero(); degree];
            // multiply by zeta, then fold zeta^degree = -(Phi_n - x^degree)
            let overflow = prev[degree - 1].clone();
            next[1..degree].clone_from_slice(&prev[..degree - 1]);
            if !overflow.is_zero() {
                for i in 0..degree {
                    next[i] -= &overflow * &modulus[i];
                }
            }
            reduced_powers.push(next);
        }
        FieldContext { degree, reduced_powers }
    }
}

/// An element of `Q(zeta_n)` in canonical form: a coefficient vector of
/// length `deg(Phi_n)` over the power basis. Equality and hashing are
/// structural, which is exact equality of complex numbers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero(n: u64) -> Self {
        let ctx = FieldContext::get(n);
        CycNum { n, coeffs: vec![BigRational::zero(); ctx.degree] }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u64, value: BigRational) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[0] = value;
        out
    }

    pub fn from_integer(n: u64, value: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(value)))
    }

    /// `zeta_n^k` in canonical reduced form, for any integer exponent.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let ctx = FieldContext::get(n);
        let e = k.rem_euclid(n as i64) as usize;
        CycNum { n, coeffs: ctx.reduced_powers[e].clone() }
    }

    pub fn zeta(n: u64) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Builds an element from raw power-basis coefficients
    /// (must have length `deg(Phi_n)`).
    pub fn from_coeffs(n: u64, coeffs: Vec<BigRational>) -> Self {
        let ctx = FieldContext::get(n);
        assert_eq!(coeffs.len(), ctx.degree, "coefficient vector has wrong length");
        CycNum { n, coeffs }
    }

    pub fn modulus_n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Q` (only the constant coefficient
    /// may be nonzero).
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn same_field(&self, rhs: &Self) -> Result<(), CycError> {
        if self.n == rhs.n {
            Ok(())
        } else {
            Err(CycError::FieldMismatch { left: self.n, right: rhs.n })
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, CycError> {
        self.same_field(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycNum { n: self.n, coeffs })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, CycError> {
        self.same_field(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycNum { n: self.n, coeffs })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, CycError> {
        self.same_field(rhs)?;
        Ok(self.mul_impl(rhs))
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        let d = self.coeffs.len();
        // raw polynomial product, degree <= 2d - 2
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        let mut coeffs: Vec<BigRational> = raw[..d].to_vec();
        if raw[d..].iter().any(|c| !c.is_zero()) {
            let ctx = FieldContext::get(self.n);
            for (e, c) in raw.iter().enumerate().skip(d) {
                if c.is_zero() {
                    continue;
                }
                for (i, basis) in ctx.reduced_powers[e].iter().enumerate() {
                    if !basis.is_zero() {
                        coeffs[i] += c * basis;
                    }
                }
            }
        }
        CycNum { n: self.n, coeffs }
    }

    pub(crate) fn add_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.n, rhs.n);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * factor).collect();
        CycNum { n: self.n, coeffs }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_n` in `Q[x]`.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero { n: self.n });
        }
        // Fast path for rationals.
        if self.is_rational() {
            let mut out = Self::zero(self.n);
            out.coeffs[0] = self.coeffs[0].recip();
            return Ok(out);
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        // Invariant: t_i * self == r_i (mod Phi_n).
        let mut r0 = phi;
        let mut r1 = poly_trim(self.coeffs.clone());
        let mut t0: Vec<BigRational> = Vec::new();
        let mut t1 = vec![BigRational::one()];
        loop {
            assert!(!r1.is_empty(), "Phi_n must be coprime to a nonzero element");
            if r1.len() == 1 {
                // gcd reached a nonzero constant c: inverse = t1 / c
                let c = r1[0].recip();
                let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
                for (i, t) in t1.iter().enumerate() {
                    coeffs[i] = t * &c;
                }
                return Ok(CycNum { n: self.n, coeffs });
            }
            let (q, r) = poly_divmod(&r0, &r1);
            let t_next = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t_next);
        }
    }

    /// Complex conjugation, the field automorphism `zeta_n -> zeta_n^(n-1)`.
    pub fn conj(&self) -> Self {
        let ctx = FieldContext::get(self.n);
        let mut coeffs = vec![BigRational::zero(); ctx.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (self.n as usize - i) % self.n as usize;
            for (k, basis) in ctx.reduced_powers[e].iter().enumerate() {
                if !basis.is_zero() {
                    coeffs[k] += c * basis;
                }
            }
        }
        CycNum { n: self.n, coeffs }
    }
}

impl std::ops::Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.checked_add(rhs).expect("field mismatch in +")
    }
}

impl std::ops::Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.checked_sub(rhs).expect("field mismatch in -")
    }
}

impl std::ops::Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.checked_mul(rhs).expect("field mismatch in *")
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.n)?;
                    } else {
                        write!(f, "z{}^{}", self.n, i)?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum(n={}, {})", self.n, self)
    }
}

// Dense rational polynomials with trailing zeros trimmed; the zero
// polynomial is the empty vector.

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(out)
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!den.is_empty(), "division by zero polynomial");
    if num.len() < den.len() {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + dn] * &lead;
        if q.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            let delta = &q * d;
            rem[k + i] -= delta;
        }
        quot[k] = q;
    }
    (poly_trim(quot), poly_trim(rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_poly(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn cyclotomic_polynomial_base_cases() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), int_poly(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), int_poly(&[1, -1, 1]));
    }

    #[test]
    fn cyclotomic_polynomial_12() {
        // x^12 - 1 = Phi_1 Phi_2 Phi_3 Phi_4 Phi_6 * Phi_12; dividing out the
        // known factors by hand leaves x^4 - x^2 + 1.
        assert_eq!(cyclotomic_polynomial(12), int_poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn euler_phi_degrees() {
        let expected = [
            (1, 1),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 4),
            (6, 2),
            (7, 6),
            (8, 4),
            (9, 6),
            (10, 4),
            (11, 10),
            (12, 4),
            (13, 12),
            (14, 6),
        ];
        for (n, phi) in expected {
            assert_eq!(euler_phi(n), phi, "phi({n})");
        }
    }

    #[test]
    fn zeta_pow_identities() {
        assert!(CycNum::zeta_pow(5, 0).is_one());
        assert!(CycNum::zeta_pow(5, 5).is_one());
        assert_eq!(CycNum::zeta_pow(4, 2), CycNum::from_integer(4, -1));
        // negative exponents wrap
        assert_eq!(CycNum::zeta_pow(7, -3), CycNum::zeta_pow(7, 4));
    }

    #[test]
    fn geometric_sum_of_all_roots_vanishes() {
        for n in 2..=12u64 {
            let mut sum = CycNum::zero(n);
            for k in 0..n as i64 {
                sum = sum.checked_add(&CycNum::zeta_pow(n, k)).unwrap();
            }
            assert!(sum.is_zero(), "sum of all {n}-th roots");
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycNum::zeta(4);
        assert_eq!(i.checked_mul(&i).unwrap(), CycNum::from_integer(4, -1));
    }

    #[test]
    fn conj_times_self_is_one_on_unit_circle() {
        let z = CycNum::zeta(6);
        assert!(z.conj().checked_mul(&z).unwrap().is_one());
    }

    #[test]
    fn modulus_substituted_into_own_polynomial_vanishes() {
        for n in 1..=16u64 {
            let phi = cyclotomic_polynomial(n);
            let zeta = CycNum::zeta(n);
            let mut acc = CycNum::zero(n);
            let mut power = CycNum::one(n);
            for c in &phi {
                let term = power.scale(&BigRational::from_integer(c.clone()));
                acc = acc.checked_add(&term).unwrap();
                power = power.checked_mul(&zeta).unwrap();
            }
            assert!(acc.is_zero(), "Phi_{n}(zeta_{n}) != 0");
        }
    }

    #[test]
    fn inversion_of_zero_is_an_error() {
        assert_eq!(
            CycNum::zero(5).inv(),
            Err(CycError::DivisionByZero { n: 5 })
        );
    }

    #[test]
    fn mixed_moduli_are_rejected() {
        let a = CycNum::zeta(4);
        let b = CycNum::zeta(6);
        assert_eq!(
            a.checked_add(&b),
            Err(CycError::FieldMismatch { left: 4, right: 6 })
        );
        assert_eq!(
            a.checked_mul(&b),
            Err(CycError::FieldMismatch { left: 4, right: 6 })
        );
    }

    #[test]
    fn display_is_readable() {
        let x = CycNum::zeta(4)
            .scale(&rat(3, 2))
            .checked_add(&CycNum::from_integer(4, -1))
            .unwrap();
        assert_eq!(x.to_string(), "-1 + 3/2*z4");
        assert_eq!(CycNum::zero(4).to_string(), "0");
    }

    fn arb_cyc(n: u64) -> impl Strategy<Value = CycNum> {
        let degree = euler_phi(n);
        proptest::collection::vec((-9i64..=9, 1i64..=9), degree).prop_map(move |cs| {
            CycNum::from_coeffs(n, cs.into_iter().map(|(p, q)| rat(p, q)).collect())
        })
    }

    fn arb_field_pair() -> impl Strategy<Value = (u64, CycNum, CycNum)> {
        (2u64..=12).prop_flat_map(|n| (Just(n), arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #[test]
        fn mul_then_divide_restores((_n, a, b) in arb_field_pair()) {
            prop_assume!(!b.is_zero());
            let prod = a.checked_mul(&b).unwrap();
            let back = prod.checked_mul(&b.inv().unwrap()).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn zeta_pow_is_additive(n in 2u64..=12, k in -20i64..=20, m in -20i64..=20) {
            let lhs = CycNum::zeta_pow(n, k).checked_mul(&CycNum::zeta_pow(n, m)).unwrap();
            prop_assert_eq!(lhs, CycNum::zeta_pow(n, k + m));
        }

        #[test]
        fn conj_is_a_field_automorphism((_n, a, b) in arb_field_pair()) {
            let mul = a.checked_mul(&b).unwrap();
            let add = a.checked_add(&b).unwrap();
            prop_assert_eq!(mul.conj(), a.conj().checked_mul(&b.conj()).unwrap());
            prop_assert_eq!(add.conj(), a.conj().checked_add(&b.conj()).unwrap());
        }

        #[test]
        fn inverse_roundtrip((_n, a, _b) in arb_field_pair()) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert!(a.checked_mul(&inv).unwrap().is_one());
        }
    }
}
