//! Generic finite-group machinery: breadth-first closure from generators,
//! normality, quotient groups, and abelian-structure identification.
//!
//! Everything is parameterized over a [`GroupElement`] backend so the same
//! checks run against both the exact [`CycMatrix`] oracle and the fast
//! [`SignedShift`] normal form, and the two can cross-validate each other.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::linalg::CycMatrix;
use crate::monomial::SignedShift;

/// A group element with canonical (hashable) equality.
///
/// Elements fed to the same engine run must share their modulus; mixing
/// moduli is a programming error and panics, unlike the fallible low-level
/// arithmetic APIs.
pub trait GroupElement: Clone + Eq + std::hash::Hash {
    fn compose(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl GroupElement for SignedShift {
    fn compose(&self, rhs: &Self) -> Self {
        SignedShift::compose(self, rhs).expect("mixed moduli in group composition")
    }

    fn inverse(&self) -> Self {
        SignedShift::inverse(self)
    }
}

impl GroupElement for CycMatrix {
    fn compose(&self, rhs: &Self) -> Self {
        self.matmul(rhs).expect("mixed shapes in group composition")
    }

    fn inverse(&self) -> Self {
        CycMatrix::inverse(self).expect("group elements are invertible")
    }
}

/// The commutator `a b a^(-1) b^(-1)`.
pub fn commutator<E: GroupElement>(a: &E, b: &E) -> E {
    a.compose(b).compose(&a.inverse()).compose(&b.inverse())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("group closure exceeded the element ceiling of {ceiling}")]
    CeilingExceeded { ceiling: usize },
}

/// A finite group enumerated explicitly, elements in breadth-first
/// discovery order with the identity first.
#[derive(Clone)]
pub struct FiniteGroup<E: GroupElement> {
    elements: Vec<Arc<E>>,
    index: HashMap<Arc<E>, usize>,
    generators: Vec<E>,
}

/// Breadth-first closure of the generators (and their inverses) under
/// composition, deduplicated by canonical equality. Deterministic: the
/// element order depends only on the generator list.
pub fn generate_closure<E: GroupElement>(
    identity: E,
    generators: Vec<E>,
    max_elements: usize,
) -> Result<FiniteGroup<E>, ClosureError> {
    assert!(!generators.is_empty(), "closure requires at least one generator");
    let mut step: Vec<E> = generators.clone();
    step.extend(generators.iter().map(GroupElement::inverse));

    let mut elements: Vec<Arc<E>> = Vec::new();
    let mut index: HashMap<Arc<E>, usize> = HashMap::new();
    let first = Arc::new(identity);
    index.insert(first.clone(), 0);
    elements.push(first);

    let mut cursor = 0;
    while cursor < elements.len() {
        let current = elements[cursor].clone();
        cursor += 1;
        for gen in &step {
            let product = current.compose(gen);
            if index.contains_key(&product) {
                continue;
            }
            if elements.len() >= max_elements {
                return Err(ClosureError::CeilingExceeded { ceiling: max_elements });
            }
            let shared = Arc::new(product);
            index.insert(shared.clone(), elements.len());
            elements.push(shared);
        }
    }
    Ok(FiniteGroup { elements, index, generators })
}

impl<E: GroupElement> FiniteGroup<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> &E {
        &self.elements[0]
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.elements.iter().map(|e| e.as_ref())
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn is_subgroup_of(&self, parent: &FiniteGroup<E>) -> bool {
        self.elements().all(|e| parent.contains(e))
    }

    /// Order of an element by iterated composition.
    pub fn element_order(&self, e: &E) -> u64 {
        let identity = self.identity();
        let mut acc = e.clone();
        let mut order = 1u64;
        while acc != *identity {
            acc = acc.compose(e);
            order += 1;
            assert!(
                order as usize <= self.order() + 1,
                "element order exceeds the group order"
            );
        }
        order
    }

    pub fn element_orders(&self) -> Vec<u64> {
        self.elements().map(|e| self.element_order(e)).collect()
    }

    /// Full axiom sweep: identity present, closed under composition and
    /// inverse. Quadratic, intended for small instances in tests.
    pub fn validate_axioms(&self) -> bool {
        self.contains(self.identity())
            && self.elements().all(|e| self.contains(&e.inverse()))
            && self
                .elements()
                .all(|a| self.elements().all(|b| self.contains(&a.compose(b))))
    }
}

impl<E: GroupElement> fmt::Debug for FiniteGroup<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(order={}, generators={})",
            self.order(),
            self.generators.len()
        )
    }
}

/// True when `g h g^(-1)` stays in `sub` for every generator `g` of
/// `parent`. Generator conjugation suffices: the normalizer is a subgroup,
/// and a subgroup containing all generators is the whole group.
pub fn is_normal<E: GroupElement>(sub: &FiniteGroup<E>, parent: &FiniteGroup<E>) -> bool {
    debug_assert!(sub.is_subgroup_of(parent));
    parent.generators().iter().all(|g| {
        let g_inv = g.inverse();
        sub.elements()
            .all(|h| sub.contains(&g.compose(h).compose(&g_inv)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("subgroup is not contained in the parent group")]
    NotASubgroup,
    #[error("subgroup is not normal in the parent group")]
    NotNormal,
}

/// A quotient group as explicit cosets: representatives are the first
/// element of each coset in the parent's breadth-first order, and the
/// multiplication table is on representative indices. Coset 0 is the
/// identity coset.
pub struct QuotientGroup<E: GroupElement> {
    parent: FiniteGroup<E>,
    normal: FiniteGroup<E>,
    representatives: Vec<E>,
    coset_of: Vec<usize>,
    table: Vec<Vec<usize>>,
}

pub fn quotient<E: GroupElement>(
    parent: &FiniteGroup<E>,
    normal: &FiniteGroup<E>,
) -> Result<QuotientGroup<E>, QuotientError> {
    if !normal.is_subgroup_of(parent) {
        return Err(QuotientError::NotASubgroup);
    }
    if !is_normal(normal, parent) {
        return Err(QuotientError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; parent.order()];
    let mut representatives = Vec::new();
    for i in 0..parent.order() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let rep = parent.element(i).clone();
        let id = representatives.len();
        for h in normal.elements() {
            let member = rep.compose(h);
            let j = parent
                .index_of(&member)
                .expect("coset member must lie in the parent group");
            coset_of[j] = id;
        }
        representatives.push(rep);
    }
    let count = representatives.len();
    let mut table = vec![vec![0usize; count]; count];
    for (i, a) in representatives.iter().enumerate() {
        for (j, b) in representatives.iter().enumerate() {
            let product = a.compose(b);
            let idx = parent
                .index_of(&product)
                .expect("products stay in the parent group");
            table[i][j] = coset_of[idx];
        }
    }
    Ok(QuotientGroup {
        parent: parent.clone(),
        normal: normal.clone(),
        representatives,
        coset_of,
        table,
    })
}

impl<E: GroupElement> QuotientGroup<E> {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn parent(&self) -> &FiniteGroup<E> {
        &self.parent
    }

    pub fn normal_subgroup(&self) -> &FiniteGroup<E> {
        &self.normal
    }

    pub fn representatives(&self) -> &[E] {
        &self.representatives
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The coset id of a parent element.
    pub fn coset_id(&self, e: &E) -> Option<usize> {
        self.parent.index_of(e).map(|i| self.coset_of[i])
    }

    pub fn is_abelian(&self) -> bool {
        let k = self.order();
        (0..k).all(|i| (i + 1..k).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Order of coset `i` in the quotient, from the table alone.
    pub fn coset_order(&self, i: usize) -> u64 {
        let mut acc = i;
        let mut order = 1u64;
        while acc != 0 {
            acc = self.table[acc][i];
            order += 1;
            assert!(
                order as usize <= self.order() + 1,
                "coset order exceeds the quotient order"
            );
        }
        order
    }

    pub fn coset_orders(&self) -> Vec<u64> {
        (0..self.order()).map(|i| self.coset_order(i)).collect()
    }

    /// Table sanity: identity coset behaves as identity, rows and columns
    /// are permutations, every coset has an inverse, and the full
    /// associativity sweep holds (the quotients here are small).
    pub fn validate_table(&self) -> bool {
        let k = self.order();
        let latin = (0..k).all(|i| {
            let mut row: Vec<usize> = self.table[i].clone();
            let mut col: Vec<usize> = (0..k).map(|j| self.table[j][i]).collect();
            row.sort_unstable();
            col.sort_unstable();
            row == (0..k).collect::<Vec<_>>() && col == (0..k).collect::<Vec<_>>()
        });
        let identity_ok = (0..k).all(|i| self.table[0][i] == i && self.table[i][0] == i);
        let inverses_ok = (0..k).all(|i| (0..k).any(|j| self.table[i][j] == 0));
        let associative = (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    self.table[self.table[a][b]][c] == self.table[a][self.table[b][c]]
                })
            })
        });
        latin && identity_ok && inverses_ok && associative
    }
}

impl<E: GroupElement> fmt::Debug for QuotientGroup<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuotientGroup(order={}, parent={}, normal={})",
            self.order(),
            self.parent.order(),
            self.normal.order()
        )
    }
}

/// The abelian candidates the quotient is matched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientStructure {
    /// `Z_n`
    Cyclic(u64),
    /// `Z_n x Z_2`
    CyclicTimesZ2(u64),
}

impl fmt::Display for QuotientStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientStructure::Cyclic(n) => write!(f, "Z_{n}"),
            QuotientStructure::CyclicTimesZ2(n) => write!(f, "Z_{n} x Z_2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("quotient group is not abelian")]
    NonAbelian,
    #[error("quotient has order {found}, expected {expected}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("element-order multiset does not match {candidate}")]
    OrderMultisetMismatch { candidate: QuotientStructure },
}

fn cyclic_order_multiset(m: u64) -> Vec<u64> {
    (0..m).map(|k| m / m.gcd(&k)).collect()
}

fn cyclic_times_z2_order_multiset(m: u64) -> Vec<u64> {
    let mut orders = Vec::with_capacity(2 * m as usize);
    for k in 0..m {
        let a = m / m.gcd(&k);
        orders.push(a); // paired with the identity of Z_2
        orders.push(a.lcm(&2)); // paired with the involution
    }
    orders
}

/// Matches the quotient against the parity-determined candidate:
/// `Z_n x Z_2` for even `n`, `Z_n` for odd `n`. Verifies the quotient is
/// abelian, then compares element-order multisets, which determine finite
/// abelian groups up to isomorphism.
pub fn identify_abelian_structure<E: GroupElement>(
    q: &QuotientGroup<E>,
    n: u64,
) -> Result<QuotientStructure, StructureError> {
    if !q.is_abelian() {
        return Err(StructureError::NonAbelian);
    }
    let (candidate, mut expected_orders) = if n.is_multiple_of(2) {
        (QuotientStructure::CyclicTimesZ2(n), cyclic_times_z2_order_multiset(n))
    } else {
        (QuotientStructure::Cyclic(n), cyclic_order_multiset(n))
    };
    if q.order() != expected_orders.len() {
        return Err(StructureError::OrderMismatch {
            expected: expected_orders.len(),
            found: q.order(),
        });
    }
    let mut found_orders = q.coset_orders();
    expected_orders.sort_unstable();
    found_orders.sort_unstable();
    if expected_orders != found_orders {
        return Err(StructureError::OrderMultisetMismatch { candidate });
    }
    Ok(candidate)
}
