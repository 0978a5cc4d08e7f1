//! Finite groups as multiplication tables.
//!
//! Elements are dense ids `0..n-1` with the identity fixed at id 0. All
//! higher layers address elements by id, so products, inverses and
//! conjugation are table lookups.

use rustc_hash::FxHashMap;
use std::sync::Arc;
use thiserror::Error;

/// Orders up to this bound get an exhaustive associativity check at
/// construction; larger tables are spot-checked on `10 n^2` random triples.
pub const EXHAUSTIVE_ASSOC_BOUND: usize = 64;

/// Default cap on the order of a permutation-generated group.
pub const DEFAULT_ORDER_CAP: usize = 5000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square or contains out-of-range ids")]
    MalformedTable,
    #[error("id 0 does not act as a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator is not a permutation")]
    NotAPermutation,
    #[error("closure exceeds order cap {0}")]
    OrderCapExceeded(usize),
    #[error("group is not abelian")]
    NotAbelian,
}

/// Which associativity check ran at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocCheck {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    /// Flattened `order x order` table, `mult[a * order + b] = a * b`.
    mult: Vec<u32>,
    inv: Vec<u32>,
    pub element_names: Option<Vec<String>>,
    pub assoc_check: AssocCheck,
}

impl FiniteGroup {
    /// Validates and wraps a multiplication table. Id 0 must be the identity.
    pub fn from_mult_table(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable);
        }
        let mut mult = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(GroupError::MalformedTable);
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::MalformedTable);
                }
                mult.push(v as u32);
            }
        }
        Self::from_flat(n, mult)
    }

    fn from_flat(n: usize, mult: Vec<u32>) -> Result<FiniteGroup, GroupError> {
        for g in 0..n {
            if mult[g] as usize != g || mult[g * n] as usize != g {
                return Err(GroupError::NoIdentity);
            }
        }
        let mut inv = vec![u32::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| mult[g * n + h] == 0) {
                Some(h) => {
                    if mult[h * n + g] != 0 {
                        return Err(GroupError::NoInverse(g));
                    }
                    inv[g] = h as u32;
                }
                None => return Err(GroupError::NoInverse(g)),
            }
        }
        let assoc_check = if n <= EXHAUSTIVE_ASSOC_BOUND {
            for a in 0..n {
                for b in 0..n {
                    let ab = mult[a * n + b] as usize;
                    for c in 0..n {
                        let bc = mult[b * n + c] as usize;
                        if mult[ab * n + c] != mult[a * n + bc] {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
            AssocCheck::Exhaustive
        } else {
            // deterministic low-discrepancy sweep, 10 n^2 triples
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize
            };
            for _ in 0..10 * n * n {
                let (a, b, c) = (next() % n, next() % n, next() % n);
                let ab = mult[a * n + b] as usize;
                let bc = mult[b * n + c] as usize;
                if mult[ab * n + c] != mult[a * n + bc] {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
            AssocCheck::Sampled
        };
        Ok(FiniteGroup { order: n, mult, inv, element_names: None, assoc_check })
    }

    /// Closure of a set of permutations of `0..degree`, with identity first.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        Self::from_permutations_capped(generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<FiniteGroup, GroupError> {
        let degree = generators.first().map_or(1, |g| g.len());
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::NotAPermutation);
            }
            let mut seen = vec![false; degree];
            for &i in g {
                if i >= degree || seen[i] {
                    return Err(GroupError::NotAPermutation);
                }
                seen[i] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
        let mut index: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
        index.insert(identity, 0);
        let mut frontier = 0;
        while frontier < elems.len() {
            let current = elems[frontier].clone();
            for gen in generators {
                let prod: Vec<usize> = current.iter().map(|&i| gen[i]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(GroupError::OrderCapExceeded(cap));
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            frontier += 1;
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                // composition: (a*b)(i) = a(b(i))
                let prod: Vec<usize> = elems[b].iter().map(|&i| elems[a][i]).collect();
                mult[a * n + b] = index[&prod] as u32;
            }
        }
        Self::from_flat(n, mult)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^-1 g x`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut cur = g;
        while cur != 0 {
            cur = self.mul(cur, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |e, g| crate::phase::lcm(e, self.element_order(g) as u64))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Raw table rows, for serialization and hashing.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_mult_table(&[vec![0]]).unwrap()
    }
}

/// A subgroup given by its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, mut elements: Vec<usize>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let sg = Subgroup { elements };
        debug_assert!(sg.is_closed(group));
        sg
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_closed(&self, group: &FiniteGroup) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&a| {
                self.contains(group.inv(a))
                    && self.elements.iter().all(|&b| self.contains(group.mul(a, b)))
            })
    }

    /// Closure of a generating set.
    pub fn generated(group: &FiniteGroup, generators: &[usize]) -> Subgroup {
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(g) = stack.pop() {
            for &s in generators {
                let h = group.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        Subgroup {
            elements: (0..group.order()).filter(|&g| seen[g]).collect(),
        }
    }
}

pub fn center(group: &FiniteGroup) -> Subgroup {
    let elems = group
        .elements()
        .filter(|&z| group.elements().all(|g| group.mul(z, g) == group.mul(g, z)))
        .collect();
    Subgroup { elements: elems }
}

pub fn centralizer(group: &FiniteGroup, g: usize) -> Subgroup {
    let elems = group
        .elements()
        .filter(|&x| group.mul(x, g) == group.mul(g, x))
        .collect();
    Subgroup { elements: elems }
}

/// Subgroup generated by all commutators.
pub fn derived_subgroup(group: &FiniteGroup) -> Subgroup {
    let mut comms = Vec::new();
    for g in group.elements() {
        for h in group.elements() {
            // g^-1 h^-1 g h
            let c = group.mul(group.mul(group.inv(g), group.inv(h)), group.mul(g, h));
            comms.push(c);
        }
    }
    comms.sort_unstable();
    comms.dedup();
    Subgroup::generated(group, &comms)
}

/// Conjugacy classes with coset representatives.
///
/// For class `j` of the class containing `s`, `coset_reps[j] = t_j` satisfies
/// `t_j s t_j^-1 = s_j`, with `t_0 = 0` (identity) by convention and
/// `s_0 = s` the smallest element id in the class.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    /// `(representative, members)` per class; members ordered so that
    /// `members[j]` is `t_j s t_j^-1`.
    pub classes: Vec<(usize, Vec<usize>)>,
    pub centralizers: Vec<Subgroup>,
    pub coset_reps: Vec<Vec<usize>>,
    /// element id -> (class index, position within the class)
    pub position: Vec<(usize, usize)>,
}

impl ConjugacyData {
    pub fn class_of(&self, g: usize) -> usize {
        self.position[g].0
    }
}

pub fn conjugacy_data(group: &FiniteGroup) -> ConjugacyData {
    let n = group.order();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    let mut centralizers = Vec::new();
    let mut coset_reps = Vec::new();
    let mut position = vec![(0usize, 0usize); n];
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let mut members = vec![s];
        let mut reps = vec![0usize];
        assigned[s] = true;
        position[s] = (classes.len(), 0);
        for x in 1..n {
            // t s t^-1 with t = x^-1, so that t_j s t_j^-1 enumerates the class
            let t = group.inv(x);
            let sj = group.mul(group.mul(t, s), x);
            if !assigned[sj] {
                assigned[sj] = true;
                position[sj] = (classes.len(), members.len());
                members.push(sj);
                reps.push(t);
            }
        }
        centralizers.push(centralizer(group, s));
        classes.push((s, members));
        coset_reps.push(reps);
    }
    let data = ConjugacyData { classes, centralizers, coset_reps, position };
    debug_assert!(data.classes.iter().enumerate().all(|(c, (s, members))| {
        members.iter().enumerate().all(|(j, &sj)| {
            let t = data.coset_reps[c][j];
            group.mul(group.mul(t, *s), group.inv(t)) == sj
        })
    }));
    data
}

/// Result of `x t_j = t_k h` for the class of `s`: `(k, h)` with `h` in the
/// centralizer of `s`.
pub fn coset_action(
    group: &FiniteGroup,
    conj: &ConjugacyData,
    class: usize,
    x: usize,
    j: usize,
) -> (usize, usize) {
    let s = conj.classes[class].0;
    let xtj = group.mul(x, conj.coset_reps[class][j]);
    // x t_j conjugates s to the member at position k
    let sk = group.mul(group.mul(xtj, s), group.inv(xtj));
    let k = conj.position[sk].1;
    debug_assert_eq!(conj.position[sk].0, class);
    let h = group.mul(group.inv(conj.coset_reps[class][k]), xtj);
    debug_assert!(conj.centralizers[class].contains(h));
    (k, h)
}

/// A direct product with its recorded factor structure. `factors[0]` is the
/// merged abelian part (possibly trivial); the remaining factors are the
/// non-abelian inputs in their given order.
#[derive(Debug, Clone)]
pub struct DirectProductStructure {
    pub factors: Vec<Arc<FiniteGroup>>,
    /// Per factor: factor element id -> product element id.
    pub embeddings: Vec<Vec<usize>>,
    /// Number of non-abelian factors.
    pub n: usize,
}

impl DirectProductStructure {
    /// Structure of a group treated as a single indecomposable factor
    /// (trivial abelian part when `group` is non-abelian).
    pub fn single(group: &Arc<FiniteGroup>) -> DirectProductStructure {
        if group.is_abelian() {
            DirectProductStructure {
                factors: vec![group.clone()],
                embeddings: vec![group.elements().collect()],
                n: 0,
            }
        } else {
            DirectProductStructure {
                factors: vec![Arc::new(FiniteGroup::trivial()), group.clone()],
                embeddings: vec![vec![0], group.elements().collect()],
                n: 1,
            }
        }
    }

    /// Component of a product element in factor `i` (by projection through
    /// the mixed-radix element encoding).
    pub fn project(&self, product_order: usize, g: usize, i: usize) -> usize {
        let mut rest = g;
        let mut radix = product_order;
        let mut comp = 0;
        for (k, f) in self.factors.iter().enumerate() {
            radix /= f.order();
            let digit = rest / radix;
            rest %= radix;
            if k == i {
                comp = digit;
            }
        }
        comp
    }
}

fn raw_product(groups: &[Arc<FiniteGroup>]) -> (FiniteGroup, Vec<Vec<usize>>) {
    let n: usize = groups.iter().map(|g| g.order()).product();
    // mixed-radix encoding: id = ((d_0 * |G_1| + d_1) * |G_2| + d_2) ...
    let decode = |mut id: usize| -> Vec<usize> {
        let mut digits = vec![0usize; groups.len()];
        for (k, g) in groups.iter().enumerate().rev() {
            digits[k] = id % g.order();
            id /= g.order();
        }
        digits
    };
    let encode = |digits: &[usize]| -> usize {
        digits
            .iter()
            .zip(groups.iter())
            .fold(0usize, |acc, (&d, g)| acc * g.order() + d)
    };
    let mut mult = vec![0u32; n * n];
    for a in 0..n {
        let da = decode(a);
        for b in 0..n {
            let db = decode(b);
            let prod: Vec<usize> = da
                .iter()
                .zip(db.iter())
                .zip(groups.iter())
                .map(|((&x, &y), g)| g.mul(x, y))
                .collect();
            mult[a * n + b] = encode(&prod) as u32;
        }
    }
    let group = FiniteGroup::from_flat(n, mult).expect("product of valid groups is valid");
    let embeddings = groups
        .iter()
        .enumerate()
        .map(|(k, g)| {
            (0..g.order())
                .map(|x| {
                    let mut digits = vec![0usize; groups.len()];
                    digits[k] = x;
                    encode(&digits)
                })
                .collect()
        })
        .collect();
    (group, embeddings)
}

/// Direct product with abelian inputs merged into the leading abelian slot.
pub fn direct_product(
    groups: &[Arc<FiniteGroup>],
) -> Result<(Arc<FiniteGroup>, DirectProductStructure), GroupError> {
    if groups.is_empty() {
        return Err(GroupError::MalformedTable);
    }
    let (abelian, nonabelian): (Vec<_>, Vec<_>) =
        groups.iter().cloned().partition(|g| g.is_abelian());
    let g0 = if abelian.is_empty() {
        Arc::new(FiniteGroup::trivial())
    } else if abelian.len() == 1 {
        abelian[0].clone()
    } else {
        Arc::new(raw_product(&abelian).0)
    };
    let mut factors = vec![g0];
    factors.extend(nonabelian.iter().cloned());
    let (product, embeddings) = raw_product(&factors);
    let n = nonabelian.len();
    let product = Arc::new(product);
    Ok((product.clone(), DirectProductStructure { factors, embeddings, n }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    #[test]
    fn z2_from_table() {
        let g = FiniteGroup::from_mult_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn malformed_tables() {
        assert_eq!(
            FiniteGroup::from_mult_table(&[vec![0, 1], vec![1, 2]]).unwrap_err(),
            GroupError::MalformedTable
        );
        // identity not at id 0
        assert_eq!(
            FiniteGroup::from_mult_table(&[vec![1, 0], vec![0, 1]]).unwrap_err(),
            GroupError::NoIdentity
        );
        // Z3 table corrupted to break associativity while keeping identity row/col
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(matches!(
            FiniteGroup::from_mult_table(&t).unwrap_err(),
            GroupError::NotAssociative(..) | GroupError::NoInverse(..)
        ));
    }

    #[test]
    fn s3_from_permutations() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        let conj = conjugacy_data(&g);
        assert_eq!(conj.classes.len(), 3);
        let mut sizes: Vec<usize> = conj.classes.iter().map(|(_, m)| m.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn s5_closure_and_caps() {
        let five_cycle = vec![1, 2, 3, 4, 0];
        let swap = vec![1, 0, 2, 3, 4];
        let g = FiniteGroup::from_permutations(&[five_cycle.clone(), swap.clone()]).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(
            FiniteGroup::from_permutations_capped(&[five_cycle, swap], 100).unwrap_err(),
            GroupError::OrderCapExceeded(100)
        );
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::from_permutations(&[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn not_a_permutation() {
        assert_eq!(
            FiniteGroup::from_permutations(&[vec![0, 0, 1]]).unwrap_err(),
            GroupError::NotAPermutation
        );
    }

    #[test]
    fn center_and_derived() {
        let s3 = catalog::catalog("S3").unwrap().group;
        assert_eq!(center(&s3).order(), 1);
        assert_eq!(derived_subgroup(&s3).order(), 3);
        let q8 = catalog::catalog("Q8").unwrap().group;
        assert_eq!(center(&q8).order(), 2);
        assert_eq!(derived_subgroup(&q8).order(), 2);
    }

    #[test]
    fn s3_centralizer_of_transposition() {
        let s3 = catalog::catalog("S3").unwrap().group;
        let t = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        assert_eq!(centralizer(&s3, t).order(), 2);
    }

    #[test]
    fn class_size_times_centralizer_is_order() {
        for name in ["S3", "S4", "D4", "Q8"] {
            let g = catalog::catalog(name).unwrap().group;
            let conj = conjugacy_data(&g);
            for (c, (_, members)) in conj.classes.iter().enumerate() {
                assert_eq!(members.len() * conj.centralizers[c].order(), g.order());
            }
        }
    }

    #[test]
    fn s4_class_data() {
        let s4 = catalog::catalog("S4").unwrap().group;
        let conj = conjugacy_data(&s4);
        assert_eq!(conj.classes.len(), 5);
        let mut cents: Vec<usize> = conj.centralizers.iter().map(|c| c.order()).collect();
        cents.sort_unstable();
        assert_eq!(cents, vec![3, 4, 4, 8, 24]);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let z6 = catalog::catalog("Z6").unwrap().group;
        let conj = conjugacy_data(&z6);
        assert_eq!(conj.classes.len(), 6);
        assert_eq!(center(&z6).order(), 6);
        assert_eq!(derived_subgroup(&z6).order(), 1);
    }

    #[test]
    fn coset_action_equations() {
        let s4 = catalog::catalog("S4").unwrap().group;
        let conj = conjugacy_data(&s4);
        for class in 0..conj.classes.len() {
            for x in s4.elements() {
                for j in 0..conj.classes[class].1.len() {
                    let (k, h) = coset_action(&s4, &conj, class, x, j);
                    let lhs = s4.mul(x, conj.coset_reps[class][j]);
                    let rhs = s4.mul(conj.coset_reps[class][k], h);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn direct_products() {
        let s3 = catalog::catalog("S3").unwrap().group;
        let z2 = catalog::catalog("Z2").unwrap().group;
        let z3 = catalog::catalog("Z3").unwrap().group;

        let (g, st) = direct_product(&[s3.clone(), z2.clone()]).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(st.n, 1);
        assert_eq!(st.factors[0].order(), 2);

        let (g, st) = direct_product(&[s3.clone(), s3.clone()]).unwrap();
        assert_eq!(g.order(), 36);
        assert_eq!(st.n, 2);
        assert_eq!(st.factors[0].order(), 1);

        let (g, st) = direct_product(&[z2, z3]).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.order(), 6);
        assert_eq!(st.n, 0);
    }

    #[test]
    fn embeddings_commute_and_generate() {
        let s3 = catalog::catalog("S3").unwrap().group;
        let z2 = catalog::catalog("Z2").unwrap().group;
        let (g, st) = direct_product(&[s3, z2]).unwrap();
        for (i, e1) in st.embeddings.iter().enumerate() {
            for (j, e2) in st.embeddings.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &a in e1 {
                    for &b in e2 {
                        assert_eq!(g.mul(a, b), g.mul(b, a));
                    }
                }
            }
        }
        let all: Vec<usize> = st.embeddings.iter().flatten().copied().collect();
        assert_eq!(Subgroup::generated(&g, &all).order(), g.order());
    }

    fn shuffled(degree: usize, mut seed: u64) -> Vec<usize> {
        let mut p: Vec<usize> = (0..degree).collect();
        for i in (1..degree).rev() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.swap(i, (seed >> 33) as usize % (i + 1));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn permutation_closure_is_a_group(seeds in proptest::collection::vec(any::<u64>(), 0..3)) {
            let perms: Vec<Vec<usize>> = seeds.iter().map(|&s| shuffled(5, s)).collect();
            let g = FiniteGroup::from_permutations(&perms).unwrap();
            // Lagrange: the closure order divides |S5|
            prop_assert!(g.order() >= 1 && 120 % g.order() == 0);
        }
    }
}
