//! Named group constructors.
//!
//! Catalog names: `Z<n>`, `S<n>`, `A<n>`, `D4`, `Q8`, `Zp_rtimes_Z16:p=<p>`.
//! Each entry comes with its recorded direct-factor structure so that proper
//! chiralities are available for product-built groups.

use crate::group::{direct_product, DirectProductStructure, FiniteGroup, GroupError};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog group `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A group together with its factor structure.
#[derive(Debug, Clone)]
pub struct GroupData {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub product: DirectProductStructure,
}

impl GroupData {
    pub fn new(name: impl Into<String>, group: Arc<FiniteGroup>) -> GroupData {
        let product = DirectProductStructure::single(&group);
        GroupData { name: name.into(), group, product }
    }

    pub fn from_product(
        name: impl Into<String>,
        groups: &[Arc<FiniteGroup>],
    ) -> Result<GroupData, GroupError> {
        let (group, product) = direct_product(groups)?;
        Ok(GroupData { name: name.into(), group, product })
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_mult_table(&table).unwrap()
}

pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n <= 1 {
        return Ok(FiniteGroup::trivial());
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    FiniteGroup::from_permutations(&[swap, cycle])
}

pub fn alternating(n: usize) -> Result<FiniteGroup, GroupError> {
    if n <= 2 {
        return Ok(FiniteGroup::trivial());
    }
    let gens: Vec<Vec<usize>> = (0..n - 2)
        .map(|i| {
            let mut p: Vec<usize> = (0..n).collect();
            p[i] = i + 1;
            p[i + 1] = i + 2;
            p[i + 2] = i;
            p
        })
        .collect();
    FiniteGroup::from_permutations(&gens)
}

pub fn dihedral4() -> FiniteGroup {
    FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![2, 1, 0, 3]]).unwrap()
}

/// Q8 with elements 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion8() -> FiniteGroup {
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    // signed basis: id 2m+s is (-1)^s * e_m with e_0=1, e_1=i, e_2=j, e_3=k
    let basis_mul = |a: usize, b: usize| -> (usize, usize) {
        // returns (basis index, sign flip)
        match (a, b) {
            (0, x) => (x, 0),
            (x, 0) => (x, 0),
            (1, 1) => (0, 1),
            (2, 2) => (0, 1),
            (3, 3) => (0, 1),
            (1, 2) => (3, 0),
            (2, 1) => (3, 1),
            (2, 3) => (1, 0),
            (3, 2) => (1, 1),
            (3, 1) => (2, 0),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (ma, sa) = (a / 2, a % 2);
            let (mb, sb) = (b / 2, b % 2);
            let (m, flip) = basis_mul(ma, mb);
            table[a][b] = 2 * m + (sa + sb + flip) % 2;
        }
    }
    let mut g = FiniteGroup::from_mult_table(&table).unwrap();
    g.element_names = Some(names.iter().map(|s| s.to_string()).collect());
    g
}

/// `<a, b | a^p = b^16 = 1, b a b^-1 = a^-1>`, order 16p. Element
/// `(i, j) = a^i b^j` has id `i * 16 + j`.
pub fn zp_rtimes_z16(p: usize) -> FiniteGroup {
    assert!(p >= 1);
    let n = 16 * p;
    let id = |i: usize, j: usize| (i % p) * 16 + (j % 16);
    let mut table = vec![vec![0usize; n]; n];
    for i1 in 0..p {
        for j1 in 0..16 {
            for i2 in 0..p {
                for j2 in 0..16 {
                    // a^i1 b^j1 a^i2 b^j2 = a^(i1 + (-1)^j1 i2) b^(j1 + j2)
                    let i = if j1 % 2 == 0 { (i1 + i2) % p } else { (i1 + p - i2 % p) % p };
                    table[id(i1, j1)][id(i2, j2)] = id(i, j1 + j2);
                }
            }
        }
    }
    FiniteGroup::from_mult_table(&table).unwrap()
}

pub fn catalog(name: &str) -> Result<GroupData, CatalogError> {
    let arc = |g: FiniteGroup| Arc::new(g);
    if let Some(ns) = name.strip_prefix('Z') {
        if let Ok(n) = ns.parse::<usize>() {
            if n >= 1 {
                return Ok(GroupData::new(name, arc(cyclic(n))));
            }
        }
    }
    if let Some(ns) = name.strip_prefix('S') {
        if let Ok(n) = ns.parse::<usize>() {
            return Ok(GroupData::new(name, arc(symmetric(n)?)));
        }
    }
    if let Some(ns) = name.strip_prefix('A') {
        if let Ok(n) = ns.parse::<usize>() {
            return Ok(GroupData::new(name, arc(alternating(n)?)));
        }
    }
    if name == "D4" {
        return Ok(GroupData::new(name, arc(dihedral4())));
    }
    if name == "Q8" {
        return Ok(GroupData::new(name, arc(quaternion8())));
    }
    if let Some(ps) = name.strip_prefix("Zp_rtimes_Z16:p=") {
        if let Ok(p) = ps.parse::<usize>() {
            if p >= 1 {
                return Ok(GroupData::new(name, arc(zp_rtimes_z16(p))));
            }
        }
    }
    Err(CatalogError::Unknown(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, conjugacy_data, derived_subgroup};

    #[test]
    fn catalog_orders() {
        for (name, order) in [
            ("Z1", 1),
            ("Z8", 8),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("D4", 8),
            ("Q8", 8),
            ("Zp_rtimes_Z16:p=3", 48),
        ] {
            assert_eq!(catalog(name).unwrap().group.order(), order, "{name}");
        }
        assert!(catalog("nope").is_err());
    }

    #[test]
    fn q8_structure() {
        let q8 = quaternion8();
        assert_eq!(q8.element_order(2), 4); // i
        assert_eq!(q8.mul(2, 2), 1); // i*i = -1
        assert_eq!(q8.mul(2, 4), 6); // i*j = k
        assert_eq!(q8.mul(4, 2), 7); // j*i = -k
        assert_eq!(conjugacy_data(&q8).classes.len(), 5);
    }

    #[test]
    fn semidirect_center_and_derived() {
        // center = <b^2> of order 8, derived = <a> of order p
        let g = zp_rtimes_z16(3);
        let z = center(&g);
        assert_eq!(z.order(), 8);
        assert!(z.contains(2)); // b^2 has id 2
        let d = derived_subgroup(&g);
        assert_eq!(d.order(), 3);
        assert!(d.contains(16)); // a has id 16
    }

    #[test]
    fn d4_has_five_classes() {
        assert_eq!(conjugacy_data(&dihedral4()).classes.len(), 5);
    }
}
