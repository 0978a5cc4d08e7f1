//! Finite abelian groups in invariant-factor coordinates, and the morphism
//! arithmetic built on them: homomorphism enumeration, characters,
//! bicharacters, dual maps, and the support data (A, B, sigma) of a
//! Hopf-algebra map from functions on the center to the center.
//!
//! Every map here is an integer matrix between coordinate groups, so
//! composition, addition, duals and fixed-point iteration are exact.

use crate::group::{FiniteGroup, Subgroup};
use crate::phase::Phase;
use rustc_hash::FxHashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("sigma reconstruction failed; support arithmetic is inconsistent")]
    SigmaMismatch,
}

/// All tuples `(x_0, ..)` with `0 <= x_i < radices[i]`; a single empty tuple
/// when `radices` is empty.
pub fn mixed_radix(radices: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &r in radices {
        let mut next = Vec::with_capacity(out.len() * r as usize);
        for prefix in &out {
            for v in 0..r {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Invariant-factor coordinates for an abelian subgroup (or quotient): orders
/// `d_1 | d_2 | ... | d_k`, generator ids in the ambient group, and the
/// two-way element/coordinate dictionary.
#[derive(Debug, Clone)]
pub struct AbelianStructure {
    pub elements: Vec<usize>,
    pub orders: Vec<u64>,
    pub generators: Vec<usize>,
    coords_of: FxHashMap<usize, Vec<u64>>,
    element_of: FxHashMap<Vec<u64>, usize>,
}

fn quotient_by_cyclic(
    group: &FiniteGroup,
    powers: &[usize],
) -> (FiniteGroup, Vec<usize>, Vec<usize>) {
    // cosets keyed by minimal member; returns (quotient, g -> quot id, quot id -> rep)
    let n = group.order();
    let mut coset_min = vec![usize::MAX; n];
    for g in 0..n {
        if coset_min[g] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = powers.iter().map(|&h| group.mul(g, h)).collect();
        let m = *members.iter().min().unwrap();
        for x in members {
            coset_min[x] = m;
        }
    }
    let mut reps: Vec<usize> = (0..n).filter(|&g| coset_min[g] == g).collect();
    reps.sort_unstable();
    let rep_index: FxHashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let proj: Vec<usize> = (0..n).map(|g| rep_index[&coset_min[g]]).collect();
    let q = reps.len();
    let mut table = vec![vec![0usize; q]; q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i][j] = rep_index[&coset_min[group.mul(a, b)]];
        }
    }
    let quot = FiniteGroup::from_mult_table(&table).expect("quotient of a group is a group");
    (quot, proj, reps)
}

/// Basis `(generator, order)` with orders in decreasing divisibility,
/// obtained by peeling a maximal-order element and lifting a basis of the
/// quotient.
fn peel_basis(group: &FiniteGroup) -> Vec<(usize, u64)> {
    if group.order() == 1 {
        return vec![];
    }
    let gen = group
        .elements()
        .skip(1)
        .max_by_key(|&g| (group.element_order(g), std::cmp::Reverse(g)))
        .unwrap();
    let e = group.element_order(gen);
    let mut powers = Vec::with_capacity(e);
    let mut log = FxHashMap::default();
    let mut cur = 0usize;
    for s in 0..e {
        powers.push(cur);
        log.insert(cur, s);
        cur = group.mul(cur, gen);
    }
    let (quot, proj, reps) = quotient_by_cyclic(group, &powers);
    let mut basis = vec![(gen, e as u64)];
    for (qgen, m) in peel_basis(&quot) {
        let a = reps[qgen];
        debug_assert_eq!(proj[a], qgen);
        // adjust the lift so its order in the group equals its quotient order
        let mut am = 0usize;
        for _ in 0..m {
            am = group.mul(am, a);
        }
        let s = log[&am];
        debug_assert_eq!(s as u64 % m, 0);
        let shift = (s as u64 / m) as usize;
        let adjusted = group.mul(a, group.inv(powers[shift]));
        basis.push((adjusted, m));
    }
    basis
}

/// Invariant-factor decomposition of an abelian subgroup.
pub fn abelian_structure(
    group: &FiniteGroup,
    sub: &Subgroup,
) -> Result<AbelianStructure, AbelianError> {
    for &a in &sub.elements {
        for &b in &sub.elements {
            if group.mul(a, b) != group.mul(b, a) {
                return Err(AbelianError::NotAbelian);
            }
        }
    }
    let local_of: FxHashMap<usize, usize> =
        sub.elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let m = sub.elements.len();
    let mut table = vec![vec![0usize; m]; m];
    for (i, &a) in sub.elements.iter().enumerate() {
        for (j, &b) in sub.elements.iter().enumerate() {
            table[i][j] = local_of[&group.mul(a, b)];
        }
    }
    let local = FiniteGroup::from_mult_table(&table).expect("subgroup is a group");
    let mut basis = peel_basis(&local);
    basis.reverse(); // increasing divisibility d_1 | d_2 | ...
    let orders: Vec<u64> = basis.iter().map(|&(_, d)| d).collect();
    let generators: Vec<usize> = basis.iter().map(|&(g, _)| sub.elements[g]).collect();
    let mut coords_of = FxHashMap::default();
    let mut element_of = FxHashMap::default();
    for tuple in mixed_radix(&orders) {
        let mut g = 0usize;
        for (i, &c) in tuple.iter().enumerate() {
            for _ in 0..c {
                g = group.mul(g, generators[i]);
            }
        }
        coords_of.insert(g, tuple.clone());
        element_of.insert(tuple, g);
    }
    assert_eq!(coords_of.len(), m, "invariant-factor basis must enumerate the subgroup");
    Ok(AbelianStructure { elements: sub.elements.clone(), orders, generators, coords_of, element_of })
}

impl AbelianStructure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn coords(&self, g: usize) -> &[u64] {
        &self.coords_of[&g]
    }

    pub fn contains(&self, g: usize) -> bool {
        self.coords_of.contains_key(&g)
    }

    pub fn element(&self, coords: &[u64]) -> usize {
        let reduced: Vec<u64> =
            coords.iter().zip(&self.orders).map(|(&c, &d)| c % d).collect();
        self.element_of[&reduced]
    }

    /// The dual group has identical invariant factors; its elements are
    /// characters represented by exponent vectors over these orders.
    pub fn dual_orders(&self) -> Vec<u64> {
        self.orders.clone()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }
}

/// A character of an abelian coordinate group, stored as an exponent vector:
/// the value on coordinates `x` is `exp(2 pi i * sum_i exps[i] x_i / orders[i])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbCharacter {
    pub orders: Vec<u64>,
    pub exps: Vec<u64>,
}

impl AbCharacter {
    pub fn trivial(orders: &[u64]) -> AbCharacter {
        AbCharacter { orders: orders.to_vec(), exps: vec![0; orders.len()] }
    }

    pub fn eval(&self, coords: &[u64]) -> Phase {
        self.exps
            .iter()
            .zip(coords)
            .zip(&self.orders)
            .map(|((&k, &x), &d)| Phase::new((k * x) as i64, d as i64))
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }

    pub fn mul(&self, other: &AbCharacter) -> AbCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        AbCharacter { orders: self.orders.clone(), exps }
    }
}

pub fn enumerate_characters(orders: &[u64]) -> Vec<AbCharacter> {
    mixed_radix(orders)
        .into_iter()
        .map(|exps| AbCharacter { orders: orders.to_vec(), exps })
        .collect()
}

/// A homomorphism between abelian coordinate groups. `mat[i][j]` is the
/// coefficient of target generator `i` in the image of source generator `j`;
/// well-definedness requires `mat[i][j] * src[j] = 0 mod dst[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbHom {
    pub src: Vec<u64>,
    pub dst: Vec<u64>,
    pub mat: Vec<Vec<u64>>,
}

impl AbHom {
    pub fn zero(src: &[u64], dst: &[u64]) -> AbHom {
        AbHom { src: src.to_vec(), dst: dst.to_vec(), mat: vec![vec![0; src.len()]; dst.len()] }
    }

    pub fn identity(orders: &[u64]) -> AbHom {
        let mut h = AbHom::zero(orders, orders);
        for i in 0..orders.len() {
            h.mat[i][i] = 1;
        }
        h
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|row| row.iter().all(|&x| x == 0))
    }

    pub fn is_well_defined(&self) -> bool {
        self.mat.iter().zip(&self.dst).all(|(row, &e)| {
            row.iter().zip(&self.src).all(|(&x, &d)| (x * d) % e == 0)
        })
    }

    pub fn apply(&self, coords: &[u64]) -> Vec<u64> {
        self.mat
            .iter()
            .zip(&self.dst)
            .map(|(row, &e)| {
                row.iter().zip(coords).map(|(&m, &x)| (m * x) % e).sum::<u64>() % e
            })
            .collect()
    }

    pub fn add(&self, other: &AbHom) -> AbHom {
        debug_assert_eq!(self.src, other.src);
        debug_assert_eq!(self.dst, other.dst);
        let mat = self
            .mat
            .iter()
            .zip(&other.mat)
            .zip(&self.dst)
            .map(|((r1, r2), &e)| r1.iter().zip(r2).map(|(&a, &b)| (a + b) % e).collect())
            .collect();
        AbHom { src: self.src.clone(), dst: self.dst.clone(), mat }
    }

    pub fn neg(&self) -> AbHom {
        let mat = self
            .mat
            .iter()
            .zip(&self.dst)
            .map(|(row, &e)| row.iter().map(|&a| (e - a % e) % e).collect())
            .collect();
        AbHom { src: self.src.clone(), dst: self.dst.clone(), mat }
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &AbHom) -> AbHom {
        debug_assert_eq!(other.dst, self.src);
        let mat = (0..self.dst.len())
            .map(|i| {
                (0..other.src.len())
                    .map(|k| {
                        let mut acc: u64 = 0;
                        for j in 0..self.src.len() {
                            acc = (acc + self.mat[i][j] * other.mat[j][k]) % self.dst[i];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        AbHom { src: other.src.clone(), dst: self.dst.clone(), mat }
    }

    /// Dual map between the dual coordinate groups. For `f: A -> B` the dual
    /// `f*: B^ -> A^` satisfies `f*(eta) = eta . f`; in coordinates
    /// `dual.mat[j][i] = mat[i][j] * src[j] / dst[i]`.
    pub fn dual(&self) -> AbHom {
        let mat = (0..self.src.len())
            .map(|j| {
                (0..self.dst.len())
                    .map(|i| {
                        let v = self.mat[i][j] * self.src[j];
                        debug_assert_eq!(v % self.dst[i], 0);
                        (v / self.dst[i]) % self.src[j].max(1)
                    })
                    .collect()
            })
            .collect();
        AbHom { src: self.dst.clone(), dst: self.src.clone(), mat }
    }

    /// Image of a character under the hom, as a character of the source:
    /// `chi . f` for `chi` on the target.
    pub fn pull_character(&self, chi: &AbCharacter) -> AbCharacter {
        debug_assert_eq!(chi.orders, self.dst);
        let exps = (0..self.src.len())
            .map(|j| {
                // chi(f(gen_j)) = exp(2 pi i sum_i exps[i] mat[i][j] / dst[i]); as a
                // character of the source this is exponent * src[j] / dst[i]
                let mut p = Phase::ZERO;
                for i in 0..self.dst.len() {
                    p = p.add(Phase::new((chi.exps[i] * self.mat[i][j]) as i64, self.dst[i] as i64));
                }
                // p = k / src[j] for some integer k
                let d = self.src[j] as i64;
                debug_assert_eq!((p.numerator() * d) % p.denominator(), 0);
                ((p.numerator() * d / p.denominator()) as u64) % self.src[j].max(1)
            })
            .collect();
        AbCharacter { orders: self.src.clone(), exps }
    }
}

/// All homomorphisms; the count is the product of `gcd(src[j], dst[i])`.
pub fn enumerate_homs(src: &[u64], dst: &[u64]) -> Vec<AbHom> {
    let mut entries: Vec<Vec<u64>> = Vec::new(); // allowed values per (i, j)
    for &e in dst {
        for &d in src {
            let g = {
                let (mut a, mut b) = (d, e);
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                a
            };
            entries.push((0..g).map(|k| k * (e / g)).collect());
        }
    }
    let radices: Vec<u64> = entries.iter().map(|v| v.len() as u64).collect();
    mixed_radix(&radices)
        .into_iter()
        .map(|choice| {
            let mat = (0..dst.len())
                .map(|i| {
                    (0..src.len())
                        .map(|j| entries[i * src.len() + j][choice[i * src.len() + j] as usize])
                        .collect()
                })
                .collect();
            AbHom { src: src.to_vec(), dst: dst.to_vec(), mat }
        })
        .collect()
}

/// A bilinear form on an abelian coordinate group, valued in roots of unity.
/// `mat[i][j] < gcd(d_i, d_j)` and the value on `(x, y)` is
/// `exp(2 pi i * sum mat[i][j] x_i y_j / gcd(d_i, d_j))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bicharacter {
    pub orders: Vec<u64>,
    pub mat: Vec<Vec<u64>>,
}

fn gcd_u(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Bicharacter {
    pub fn trivial(orders: &[u64]) -> Bicharacter {
        Bicharacter { orders: orders.to_vec(), mat: vec![vec![0; orders.len()]; orders.len()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.mat.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> Phase {
        let mut p = Phase::ZERO;
        for i in 0..self.orders.len() {
            for j in 0..self.orders.len() {
                let g = gcd_u(self.orders[i], self.orders[j]);
                p = p.add(Phase::new((self.mat[i][j] * x[i] * y[j]) as i64, g as i64));
            }
        }
        p
    }

    pub fn add(&self, other: &Bicharacter) -> Bicharacter {
        let mat = (0..self.orders.len())
            .map(|i| {
                (0..self.orders.len())
                    .map(|j| {
                        let g = gcd_u(self.orders[i], self.orders[j]);
                        (self.mat[i][j] + other.mat[i][j]) % g.max(1)
                    })
                    .collect()
            })
            .collect();
        Bicharacter { orders: self.orders.clone(), mat }
    }

    pub fn neg(&self) -> Bicharacter {
        let mat = (0..self.orders.len())
            .map(|i| {
                (0..self.orders.len())
                    .map(|j| {
                        let g = gcd_u(self.orders[i], self.orders[j]).max(1);
                        (g - self.mat[i][j] % g) % g
                    })
                    .collect()
            })
            .collect();
        Bicharacter { orders: self.orders.clone(), mat }
    }

    pub fn transpose(&self) -> Bicharacter {
        let n = self.orders.len();
        let mat = (0..n).map(|i| (0..n).map(|j| self.mat[j][i]).collect()).collect();
        Bicharacter { orders: self.orders.clone(), mat }
    }

    /// As a homomorphism into the dual group (first slot fixed):
    /// `g -> value(g, .)`.
    pub fn to_hom(&self) -> AbHom {
        let n = self.orders.len();
        let mat = (0..n)
            .map(|j| {
                // row j of the hom: coefficient of dual generator j in the image of gen i
                (0..n)
                    .map(|i| {
                        let g = gcd_u(self.orders[i], self.orders[j]).max(1);
                        (self.mat[i][j] * (self.orders[j] / g)) % self.orders[j].max(1)
                    })
                    .collect()
            })
            .collect();
        AbHom { src: self.orders.clone(), dst: self.orders.clone(), mat }
    }
}

/// All bilinear forms; the count is the product of `gcd(d_i, d_j)`.
pub fn enumerate_bicharacters(orders: &[u64]) -> Vec<Bicharacter> {
    let n = orders.len();
    let radices: Vec<u64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| gcd_u(orders[i], orders[j]).max(1))
        .collect();
    mixed_radix(&radices)
        .into_iter()
        .map(|flat| {
            let mat = (0..n).map(|i| (0..n).map(|j| flat[i * n + j]).collect()).collect();
            Bicharacter { orders: orders.to_vec(), mat }
        })
        .collect()
}
