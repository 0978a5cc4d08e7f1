//! The Drinfeld double D(G): sparse element arithmetic over the basis
//! `e_g # x`, simple modules and their characters, fusion rules, degree
//! data, and the construction of R-elements and ribbon elements from
//! component data.
//!
//! Conventions, fixed once and verified by the axiom oracle below:
//! multiplication `(e_g # x)(e_h # y) = [h = x^-1 g x] e_g # xy`, coproduct
//! `D(e_g # x) = sum_{ab=g} (e_b # x) (x) (e_a # x)`, antipode
//! `S(e_g # x) = e_{x^-1 g^-1 x} # x^-1`.

use crate::abelian::{AbCharacter, AbelianError, Bicharacter};
use crate::group::{coset_action, FiniteGroup, Subgroup};
use crate::phase::Phase;
use crate::rep::{
    central_character, explicit_irreps_seeded, CharacterTable, ExplicitIrrep, RepError,
};
use crate::structure::{PSupport, StructuredGroup};
use nalgebra::DVector;
use num_complex::Complex64;
use rustc_hash::FxHashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DoubleError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("irreducible double characters are not orthonormal (deviation {0:.2e})")]
    OrthonormalityFailure(f64),
    #[error("no dual found for label {0}")]
    DualNotFound(usize),
    #[error("fusion multiplicity {0:.6} is not a nonnegative integer")]
    NonIntegerFusion(f64),
    #[error("fusion tensor for {0} labels exceeds the materialization cap {1}")]
    FusionCapExceeded(usize, usize),
    #[error("invalid R-matrix components: {0}")]
    InvalidComponents(String),
}

const PRUNE_EPS: f64 = 1e-12;

#[inline]
fn pack(g: usize, x: usize) -> u64 {
    ((g as u64) << 32) | x as u64
}

#[inline]
fn unpack(k: u64) -> (usize, usize) {
    ((k >> 32) as usize, (k & 0xffff_ffff) as usize)
}

/// A sparse element of the N-fold tensor power of D(G); keys are packed
/// `(g, x)` basis labels per slot, coefficients are pruned at 1e-12.
#[derive(Debug, Clone)]
pub struct SparseTensor<const N: usize> {
    coeffs: FxHashMap<[u64; N], Complex64>,
}

pub type SparseDoubleElement = SparseTensor<1>;
pub type SparseDoublePair = SparseTensor<2>;

impl<const N: usize> Default for SparseTensor<N> {
    fn default() -> Self {
        SparseTensor { coeffs: FxHashMap::default() }
    }
}

impl<const N: usize> SparseTensor<N> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn arity(&self) -> usize {
        N
    }

    /// The unit `1 (x) ... (x) 1` with `1 = sum_g e_g # 1`.
    pub fn unit(group: &FiniteGroup) -> Self {
        let mut out = Self::zero();
        let mut stack: Vec<([u64; N], usize)> = vec![([0; N], 0)];
        while let Some((key, slot)) = stack.pop() {
            if slot == N {
                out.coeffs.insert(key, Complex64::new(1.0, 0.0));
                continue;
            }
            for g in group.elements() {
                let mut k = key;
                k[slot] = pack(g, 0);
                stack.push((k, slot + 1));
            }
        }
        out
    }

    pub fn insert_add(&mut self, key: [u64; N], c: Complex64) {
        let entry = self.coeffs.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_EPS {
            self.coeffs.remove(&key);
        }
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u64; N], &Complex64)> {
        self.coeffs.iter()
    }

    /// Entries in sorted key order, for deterministic summation and output.
    pub fn sorted_entries(&self) -> Vec<([u64; N], Complex64)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (*k, *c)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn scale(&mut self, s: Complex64) {
        for c in self.coeffs.values_mut() {
            *c *= s;
        }
    }

    /// Slot-wise product in the tensor power of D(G).
    pub fn mul(&self, other: &Self, group: &FiniteGroup) -> Self {
        // bucket the right factor by its function parts
        let mut buckets: FxHashMap<[u32; N], Vec<(&[u64; N], Complex64)>> = FxHashMap::default();
        for (k, &c) in other.coeffs.iter() {
            let mut fns = [0u32; N];
            for i in 0..N {
                fns[i] = (k[i] >> 32) as u32;
            }
            buckets.entry(fns).or_default().push((k, c));
        }
        let mut out = Self::zero();
        for (ka, &ca) in self.coeffs.iter() {
            let mut need = [0u32; N];
            let mut xs = [0usize; N];
            for i in 0..N {
                let (g, x) = unpack(ka[i]);
                need[i] = group.conj(g, x) as u32;
                xs[i] = x;
            }
            if let Some(list) = buckets.get(&need) {
                for (kb, cb) in list {
                    let mut key = [0u64; N];
                    for i in 0..N {
                        let (g, x) = unpack(ka[i]);
                        let (_, y) = unpack(kb[i]);
                        key[i] = pack(g, group.mul(x, y));
                    }
                    out.insert_add(key, ca * cb);
                }
            }
        }
        out
    }

    /// Apply the antipode to one slot.
    pub fn antipode_slot(&self, slot: usize, group: &FiniteGroup) -> Self {
        let mut out = Self::zero();
        for (k, &c) in self.coeffs.iter() {
            let mut key = *k;
            let (g, x) = unpack(k[slot]);
            let xi = group.inv(x);
            key[slot] = pack(group.conj(group.inv(g), x), xi);
            out.insert_add(key, c);
        }
        out
    }

    /// Largest coefficient difference against another element.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let mut dev = 0.0f64;
        for (k, &c) in self.coeffs.iter() {
            let d = other.coeffs.get(k).copied().unwrap_or_default();
            dev = dev.max((c - d).norm());
        }
        for (k, &c) in other.coeffs.iter() {
            if !self.coeffs.contains_key(k) {
                dev = dev.max(c.norm());
            }
        }
        dev
    }

    /// Exact coefficient-level equality (no tolerance).
    pub fn coefficients_equal(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().all(|(k, c)| other.coeffs.get(k) == Some(c))
    }
}

impl SparseTensor<2> {
    pub fn swap(&self) -> Self {
        let mut out = Self::zero();
        for (k, &c) in self.coeffs.iter() {
            out.insert_add([k[1], k[0]], c);
        }
        out
    }
}

/// Coproduct of a basis element: `sum_{ab=g} (e_b # x) (x) (e_a # x)`.
pub fn coproduct_basis(group: &FiniteGroup, g: usize, x: usize) -> SparseTensor<2> {
    let mut out = SparseTensor::zero();
    for a in group.elements() {
        let b = group.mul(group.inv(a), g);
        out.insert_add([pack(b, x), pack(a, x)], Complex64::new(1.0, 0.0));
    }
    out
}

pub fn coproduct(elem: &SparseTensor<1>, group: &FiniteGroup) -> SparseTensor<2> {
    let mut out = SparseTensor::zero();
    for (k, &c) in elem.iter() {
        let (g, x) = unpack(k[0]);
        for a in group.elements() {
            let b = group.mul(group.inv(a), g);
            out.insert_add([pack(b, x), pack(a, x)], c);
        }
    }
    out
}

/// `(Delta (x) id)` of an arity-2 element.
pub fn coproduct_first(elem: &SparseTensor<2>, group: &FiniteGroup) -> SparseTensor<3> {
    let mut out = SparseTensor::zero();
    for (k, &c) in elem.iter() {
        let (g, x) = unpack(k[0]);
        for a in group.elements() {
            let b = group.mul(group.inv(a), g);
            out.insert_add([pack(b, x), pack(a, x), k[1]], c);
        }
    }
    out
}

/// `(id (x) Delta)` of an arity-2 element.
pub fn coproduct_second(elem: &SparseTensor<2>, group: &FiniteGroup) -> SparseTensor<3> {
    let mut out = SparseTensor::zero();
    for (k, &c) in elem.iter() {
        let (g, x) = unpack(k[1]);
        for a in group.elements() {
            let b = group.mul(group.inv(a), g);
            out.insert_add([k[0], pack(b, x), pack(a, x)], c);
        }
    }
    out
}

/// `R13 R23 = sum (a (x) c (x) b d)` over keys `(a, b)`, `(c, d)` of `R`.
pub fn r13_r23(r: &SparseTensor<2>, group: &FiniteGroup) -> SparseTensor<3> {
    let mut buckets: FxHashMap<u32, Vec<([u64; 2], Complex64)>> = FxHashMap::default();
    for (k, &c) in r.iter() {
        buckets.entry((k[1] >> 32) as u32).or_default().push((*k, c));
    }
    let mut out = SparseTensor::zero();
    for (ka, &ca) in r.iter() {
        let (gb, xb) = unpack(ka[1]);
        let need = group.conj(gb, xb) as u32;
        if let Some(list) = buckets.get(&need) {
            for (kc, cc) in list {
                let (_, yd) = unpack(kc[1]);
                out.insert_add([ka[0], kc[0], pack(gb, group.mul(xb, yd))], ca * cc);
            }
        }
    }
    out
}

/// `R13 R12 = sum (a c (x) d (x) b)` over keys `(a, b)`, `(c, d)` of `R`.
pub fn r13_r12(r: &SparseTensor<2>, group: &FiniteGroup) -> SparseTensor<3> {
    let mut buckets: FxHashMap<u32, Vec<([u64; 2], Complex64)>> = FxHashMap::default();
    for (k, &c) in r.iter() {
        buckets.entry((k[0] >> 32) as u32).or_default().push((*k, c));
    }
    let mut out = SparseTensor::zero();
    for (ka, &ca) in r.iter() {
        let (g, x) = unpack(ka[0]);
        let need = group.conj(g, x) as u32;
        if let Some(list) = buckets.get(&need) {
            for (kc, cc) in list {
                let (_, y) = unpack(kc[0]);
                out.insert_add([pack(g, group.mul(x, y)), kc[1], ka[1]], ca * cc);
            }
        }
    }
    out
}

/// Deviations of an element from the quasitriangularity axioms: intertwining
/// of the coproduct, both compatibility identities, and invertibility with
/// `R^-1 = (S (x) id) R`.
#[derive(Debug, Clone, Copy)]
pub struct AxiomReport {
    pub comultiplication: f64,
    pub coassoc_first: f64,
    pub coassoc_second: f64,
    pub inverse: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        self.comultiplication.max(self.coassoc_first).max(self.coassoc_second).max(self.inverse)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() < tol
    }
}

pub fn quasitriangular_axioms(group: &FiniteGroup, r: &SparseTensor<2>) -> AxiomReport {
    let mut comult_dev = 0.0f64;
    // generators: e_g # 1 and the group-likes (sum_g e_g) # x
    for g in group.elements() {
        let delta = coproduct_basis(group, g, 0);
        let lhs = delta.swap().mul(r, group);
        let rhs = r.mul(&delta, group);
        comult_dev = comult_dev.max(lhs.max_deviation(&rhs));
    }
    for x in group.elements() {
        let mut delta = SparseTensor::<2>::zero();
        for g in group.elements() {
            for a in group.elements() {
                let b = group.mul(group.inv(a), g);
                delta.insert_add([pack(b, x), pack(a, x)], Complex64::new(1.0, 0.0));
            }
        }
        let lhs = delta.swap().mul(r, group);
        let rhs = r.mul(&delta, group);
        comult_dev = comult_dev.max(lhs.max_deviation(&rhs));
    }
    let first = coproduct_first(r, group).max_deviation(&r13_r23(r, group));
    let second = coproduct_second(r, group).max_deviation(&r13_r12(r, group));
    let rinv = r.antipode_slot(0, group);
    let inverse = r.mul(&rinv, group).max_deviation(&SparseTensor::unit(group));
    AxiomReport {
        comultiplication: comult_dev,
        coassoc_first: first,
        coassoc_second: second,
        inverse,
    }
}

/// `x^-1` central in the tensor square: commutation with `h (x) 1` and
/// `1 (x) h` for every basis element `h`, at exact coefficient level.
pub fn is_central_in_tensor_square(group: &FiniteGroup, elem: &SparseTensor<2>) -> bool {
    let unit1: SparseTensor<1> = SparseTensor::unit(group);
    for g in group.elements() {
        for x in group.elements() {
            for slot in 0..2 {
                let mut gen = SparseTensor::<2>::zero();
                for (u, &c) in unit1.iter() {
                    let mut key = [0u64; 2];
                    key[slot] = pack(g, x);
                    key[1 - slot] = u[0];
                    gen.insert_add(key, c);
                }
                if !gen.mul(elem, group).coefficients_equal(&elem.mul(&gen, group)) {
                    return false;
                }
            }
        }
    }
    true
}

/// A simple object of Rep(D(G)): a conjugacy class and an irreducible
/// character of the class representative's centralizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimpleLabel {
    pub class: usize,
    pub irrep: usize,
    pub dim: u64,
}

/// Degree of a simple object under the universal grading: the coset of the
/// class in G/G' and the central character of the irrep on Z(G).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLabel {
    pub coset: Vec<u64>,
    pub central: AbCharacter,
}

impl DegreeLabel {
    pub fn inverse(&self, quotient_orders: &[u64]) -> DegreeLabel {
        let coset = self
            .coset
            .iter()
            .zip(quotient_orders)
            .map(|(&c, &d)| (d - c % d) % d)
            .collect();
        let exps = self
            .central
            .exps
            .iter()
            .zip(&self.central.orders)
            .map(|(&c, &d)| (d - c % d) % d)
            .collect();
        DegreeLabel {
            coset,
            central: AbCharacter { orders: self.central.orders.clone(), exps },
        }
    }

    pub fn compose(&self, other: &DegreeLabel, quotient_orders: &[u64]) -> DegreeLabel {
        let coset = self
            .coset
            .iter()
            .zip(&other.coset)
            .zip(quotient_orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        DegreeLabel { coset, central: self.central.mul(&other.central) }
    }
}

/// Everything about Rep(D(G)) that downstream layers consult: centralizer
/// tables and irreps, the simple labels with degrees, and character values
/// on the commuting-pair support.
#[derive(Clone)]
pub struct DoubleData {
    pub sg: StructuredGroup,
    pub tables: Vec<CharacterTable>,
    pub irreps: Vec<Vec<ExplicitIrrep>>,
    /// per class: ambient element -> local centralizer id (usize::MAX outside)
    local_of: Vec<Vec<usize>>,
    /// per class: local centralizer id -> ambient element
    pub cent_elements: Vec<Vec<usize>>,
    pub simples: Vec<SimpleLabel>,
    pub degrees: Vec<DegreeLabel>,
    /// all pairs (g, x) with gx = xg, sorted
    pub commuting: Vec<(usize, usize)>,
    pair_index: FxHashMap<u64, usize>,
    /// char_vectors[label][pair] = character value on the commuting pair
    pub char_vectors: Vec<Vec<Complex64>>,
}

impl DoubleData {
    pub fn new(sg: StructuredGroup) -> Result<DoubleData, DoubleError> {
        DoubleData::with_options(sg, crate::DEFAULT_SEED, None)
    }

    pub fn with_options(
        sg: StructuredGroup,
        seed: u64,
        cache_dir: Option<&Path>,
    ) -> Result<DoubleData, DoubleError> {
        let group = sg.group.clone();
        let nclasses = sg.conj.classes.len();
        let mut tables = Vec::with_capacity(nclasses);
        let mut irreps = Vec::with_capacity(nclasses);
        let mut local_of = Vec::with_capacity(nclasses);
        let mut cent_elements = Vec::with_capacity(nclasses);
        let mut local_groups = Vec::with_capacity(nclasses);
        for c in 0..nclasses {
            let cent = &sg.conj.centralizers[c];
            let elems = cent.elements.clone();
            let index: FxHashMap<usize, usize> =
                elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let m = elems.len();
            let mut table = vec![vec![0usize; m]; m];
            for (i, &a) in elems.iter().enumerate() {
                for (j, &b) in elems.iter().enumerate() {
                    table[i][j] = index[&group.mul(a, b)];
                }
            }
            let local = FiniteGroup::from_mult_table(&table).expect("centralizer is a group");
            let local_conj = crate::group::conjugacy_data(&local);
            let chtab = crate::cache::character_table_cached(&local, &local_conj, seed, cache_dir)?;
            let reps = explicit_irreps_seeded(&local, &chtab, seed)?;
            let mut ambient_to_local = vec![usize::MAX; group.order()];
            for (i, &g) in elems.iter().enumerate() {
                ambient_to_local[g] = i;
            }
            tables.push(chtab);
            irreps.push(reps);
            local_of.push(ambient_to_local);
            cent_elements.push(elems);
            local_groups.push(local);
        }
        let mut simples = Vec::new();
        let mut degrees = Vec::new();
        for c in 0..nclasses {
            let class_size = sg.conj.classes[c].1.len() as u64;
            let rep = sg.conj.classes[c].0;
            let coset = sg.coset_coords(rep).to_vec();
            // Z(G) sits inside every centralizer; express it in local ids
            let local_group = &local_groups[c];
            let central_local = Subgroup::new(
                local_group,
                sg.center.elements.iter().map(|&z| local_of[c][z]).collect(),
            );
            let central_ab = crate::abelian::abelian_structure(local_group, &central_local)?;
            for r in 0..tables[c].num_irreps() {
                let dim = class_size * tables[c].degrees[r];
                simples.push(SimpleLabel { class: c, irrep: r, dim });
                // central character, then rewrite exponents onto the ambient
                // Z(G) coordinates
                let local_char = central_character(local_group, &tables[c], r, &central_ab)?;
                let exps = sg
                    .center_ab
                    .generators
                    .iter()
                    .zip(&sg.center_ab.orders)
                    .map(|(&z, &d)| {
                        let v = local_char.eval(central_ab.coords(local_of[c][z]));
                        (v.numerator() * (d as i64 / v.denominator())).rem_euclid(d as i64) as u64
                    })
                    .collect();
                degrees.push(DegreeLabel {
                    coset: coset.clone(),
                    central: AbCharacter { orders: sg.center_ab.orders.clone(), exps },
                });
            }
        }
        let mut commuting = Vec::new();
        for g in group.elements() {
            for x in group.elements() {
                if group.mul(g, x) == group.mul(x, g) {
                    commuting.push((g, x));
                }
            }
        }
        let pair_index: FxHashMap<u64, usize> = commuting
            .iter()
            .enumerate()
            .map(|(i, &(g, x))| (pack(g, x), i))
            .collect();
        let mut dd = DoubleData {
            sg,
            tables,
            irreps,
            local_of,
            cent_elements,
            simples,
            degrees,
            commuting,
            pair_index,
            char_vectors: Vec::new(),
        };
        dd.char_vectors = (0..dd.simples.len())
            .map(|l| dd.commuting.iter().map(|&(g, x)| dd.char_value_raw(l, g, x)).collect())
            .collect();
        Ok(dd)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.sg.group
    }

    pub fn num_simples(&self) -> usize {
        self.simples.len()
    }

    /// The unit object (identity class, trivial character).
    pub fn unit_label(&self) -> usize {
        0
    }

    pub fn dims(&self) -> Vec<u64> {
        self.simples.iter().map(|s| s.dim).collect()
    }

    pub fn global_dim(&self) -> f64 {
        let n = self.group().order() as f64;
        n * n
    }

    fn char_value_raw(&self, label: usize, g: usize, x: usize) -> Complex64 {
        let lab = &self.simples[label];
        let (c, j) = self.sg.conj.position[g];
        if c != lab.class {
            return Complex64::new(0.0, 0.0);
        }
        let tj = self.sg.conj.coset_reps[c][j];
        let group = self.group();
        let conj_x = group.mul(group.mul(group.inv(tj), x), tj);
        let local = self.local_of[c][conj_x];
        if local == usize::MAX {
            return Complex64::new(0.0, 0.0);
        }
        self.tables[c].value(lab.irrep, local)
    }

    /// Character of a simple on a basis element; vanishes off commuting
    /// pairs with the group part in the label's class.
    pub fn char_value(&self, label: usize, g: usize, x: usize) -> Complex64 {
        match self.pair_index.get(&pack(g, x)) {
            Some(&i) => self.char_vectors[label][i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval_char(&self, label: usize, elem: &SparseTensor<1>) -> Complex64 {
        elem.sorted_entries()
            .iter()
            .map(|(k, c)| {
                let (g, x) = unpack(k[0]);
                c * self.char_value(label, g, x)
            })
            .sum()
    }

    /// `(chi_i (x) chi_j)` on an arity-2 element.
    pub fn eval_char_pair(&self, i: usize, j: usize, elem: &SparseTensor<2>) -> Complex64 {
        elem.sorted_entries()
            .iter()
            .map(|(k, c)| {
                let (g, x) = unpack(k[0]);
                let (h, y) = unpack(k[1]);
                c * self.char_value(i, g, x) * self.char_value(j, h, y)
            })
            .sum()
    }

    /// Value of the product character `chi_i chi_k` on a basis element,
    /// through the coproduct.
    pub fn product_char_value(&self, i: usize, k: usize, g: usize, x: usize) -> Complex64 {
        let group = self.group();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in group.elements() {
            let b = group.mul(group.inv(a), g);
            let ci = self.char_value(i, b, x);
            if ci.norm_sqr() > 0.0 {
                acc += ci * self.char_value(k, a, x);
            }
        }
        acc
    }

    /// Inner product `(1/|G|) sum_{gx=xg} phi (g,x) conj(psi (g,x))` of two
    /// label characters; irreducibles are orthonormal under it.
    pub fn char_inner(&self, i: usize, j: usize) -> Complex64 {
        let n = self.group().order() as f64;
        self.char_vectors[i]
            .iter()
            .zip(&self.char_vectors[j])
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            / n
    }

    /// Validates the inner-product convention on the irreducible characters.
    pub fn verify_orthonormality(&self) -> Result<(), DoubleError> {
        let m = self.num_simples();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let ip = self.char_inner(i, j);
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(expected, 0.0)).norm());
            }
        }
        if worst > 1e-8 {
            return Err(DoubleError::OrthonormalityFailure(worst));
        }
        Ok(())
    }

    /// Multiplicity of simple `j` inside `X_i (x) X_k`.
    pub fn fusion_multiplicity(&self, i: usize, k: usize, j: usize) -> Result<u32, DoubleError> {
        let n = self.group().order() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, &(g, x)) in self.commuting.iter().enumerate() {
            let cj = self.char_vectors[j][p];
            if cj.norm_sqr() == 0.0 {
                continue;
            }
            acc += self.product_char_value(i, k, g, x) * cj.conj();
        }
        let val = acc / n;
        let rounded = val.re.round();
        if (val.re - rounded).abs() > crate::TOL_SNAP || val.im.abs() > crate::TOL_SNAP || rounded < 0.0
        {
            return Err(DoubleError::NonIntegerFusion(val.re));
        }
        Ok(rounded as u32)
    }

    /// Dual label via fusion with the unit: `N_{i,k}^0 = [k = i*]`.
    pub fn dual_of(&self, i: usize) -> Result<usize, DoubleError> {
        let mut found = None;
        for k in 0..self.num_simples() {
            let n = self.fusion_multiplicity(i, k, self.unit_label())?;
            if n > 1 || (n == 1 && found.replace(k).is_some()) {
                return Err(DoubleError::DualNotFound(i));
            }
        }
        found.ok_or(DoubleError::DualNotFound(i))
    }

    pub fn degree(&self, label: usize) -> &DegreeLabel {
        &self.degrees[label]
    }
}

/// Dense nonnegative-integer fusion coefficients `N_{i,k}^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTensor {
    pub m: usize,
    n: Vec<u32>,
}

impl FusionTensor {
    pub fn from_fn(
        m: usize,
        mut f: impl FnMut(usize, usize, usize) -> Result<u32, DoubleError>,
    ) -> Result<FusionTensor, DoubleError> {
        let mut n = vec![0u32; m * m * m];
        for i in 0..m {
            for k in 0..m {
                for j in 0..m {
                    n[(i * m + k) * m + j] = f(i, k, j)?;
                }
            }
        }
        Ok(FusionTensor { m, n })
    }

    pub fn get(&self, i: usize, k: usize, j: usize) -> u32 {
        self.n[(i * self.m + k) * self.m + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        (0..self.m).flat_map(move |i| {
            (0..self.m).flat_map(move |k| {
                (0..self.m).map(move |j| (i, k, j, self.get(i, k, j)))
            })
        })
    }
}

/// Materialization cap for dense fusion tensors.
pub const FUSION_CAP: usize = 64;

/// Fusion rules through the character route, validated by orthonormality of
/// the irreducible double characters.
pub fn fusion_rules(dd: &DoubleData) -> Result<FusionTensor, DoubleError> {
    let m = dd.num_simples();
    if m > FUSION_CAP {
        return Err(DoubleError::FusionCapExceeded(m, FUSION_CAP));
    }
    dd.verify_orthonormality()?;
    // product-character vectors per (i,k) reused across all j
    let n = dd.group().order() as f64;
    let mut tensor = vec![0u32; m * m * m];
    for i in 0..m {
        for k in 0..m {
            let prod: Vec<Complex64> = dd
                .commuting
                .iter()
                .map(|&(g, x)| dd.product_char_value(i, k, g, x))
                .collect();
            for j in 0..m {
                let acc: Complex64 = prod
                    .iter()
                    .zip(&dd.char_vectors[j])
                    .map(|(p, cj)| p * cj.conj())
                    .sum();
                let val = acc / n;
                let rounded = val.re.round();
                if (val.re - rounded).abs() > crate::TOL_SNAP
                    || val.im.abs() > crate::TOL_SNAP
                    || rounded < 0.0
                {
                    return Err(DoubleError::NonIntegerFusion(val.re));
                }
                tensor[(i * m + k) * m + j] = rounded as u32;
            }
        }
    }
    Ok(FusionTensor { m, n: tensor })
}

/// Components of an R-element in the normal form: element maps `u`, `v`,
/// a bilinear form `r` on G/G', and the support data of `p`.
pub struct RComponents<'a> {
    pub sg: &'a StructuredGroup,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub r: &'a Bicharacter,
    pub p: &'a PSupport,
}

impl<'a> RComponents<'a> {
    fn validate(&self) -> Result<(), DoubleError> {
        let n = self.sg.group.order();
        if self.u.len() != n || self.v.len() != n {
            return Err(DoubleError::InvalidComponents(
                "component maps must be defined on every element".into(),
            ));
        }
        if self.r.orders != self.sg.quotient_ab.orders {
            return Err(DoubleError::InvalidComponents(
                "bilinear form lives on the wrong abelianization".into(),
            ));
        }
        Ok(())
    }

    fn r_value(&self, s: usize, t: usize) -> Phase {
        self.r.eval(self.sg.coset_coords(s), self.sg.coset_coords(t))
    }
}

/// The element `sum_{s,t,a} e_s # a u(t) (x) r(s) e_t # p(e_a) v(s^-1)`.
pub fn r_element(c: &RComponents) -> Result<SparseTensor<2>, DoubleError> {
    c.validate()?;
    let group = &c.sg.group;
    let inv_asize = 1.0 / c.p.a_elements.len() as f64;
    let mut out = SparseTensor::zero();
    for s in group.elements() {
        let vs = c.v[group.inv(s)];
        for t in group.elements() {
            let rst = c.r_value(s, t);
            let ut = c.u[t];
            for &a in &c.p.a_elements {
                let first = pack(s, group.mul(a, ut));
                for &b in &c.p.b_elements {
                    let coeff = rst.add(c.p.sigma(a, b)).to_complex() * inv_asize;
                    out.insert_add([first, pack(t, group.mul(b, vs))], coeff);
                }
            }
        }
    }
    Ok(out)
}

/// The ribbon element `sum_{a,s} r(s) e_{s^-1} # p(e_a) a^-1 v(s^-1) u(s)`.
pub fn ribbon_element(c: &RComponents) -> Result<SparseTensor<1>, DoubleError> {
    c.validate()?;
    let group = &c.sg.group;
    let inv_asize = 1.0 / c.p.a_elements.len() as f64;
    let mut out = SparseTensor::zero();
    for s in group.elements() {
        let si = group.inv(s);
        let rss = c.r_value(s, si);
        let tail = group.mul(c.v[si], c.u[s]);
        for &a in &c.p.a_elements {
            let ai = group.inv(a);
            for &b in &c.p.b_elements {
                let coeff = rss.add(c.p.sigma(a, b)).to_complex() * inv_asize;
                let grp = group.mul(group.mul(b, ai), tail);
                out.insert_add([pack(si, grp)], coeff);
            }
        }
    }
    Ok(out)
}

/// The normalized integral `e_1 # (1/|G|) sum_x x`.
pub fn integral(group: &FiniteGroup) -> SparseTensor<1> {
    let mut out = SparseTensor::zero();
    let c = Complex64::new(1.0 / group.order() as f64, 0.0);
    for x in group.elements() {
        out.insert_add([pack(0, x)], c);
    }
    out
}

/// m-th Sweedler power of the integral, through iterated coproduct and
/// multiplication. Characters evaluated on it give the degree-m indicators.
pub fn sweedler_power_integral(group: &FiniteGroup, m: u32) -> SparseTensor<1> {
    assert!(m >= 1);
    let lambda = integral(group);
    if m == 1 {
        return lambda;
    }
    // chain = sum (first m-1 legs multiplied) (x) (last leg)
    let mut chain = coproduct(&lambda, group);
    for _ in 2..m {
        let mut next = SparseTensor::<2>::zero();
        for (k, &c) in chain.iter() {
            let (g, x) = unpack(k[1]);
            for a in group.elements() {
                let b = group.mul(group.inv(a), g);
                // multiply the (b, x) piece onto the accumulated first slot
                let (g1, x1) = unpack(k[0]);
                if b == group.conj(g1, x1) {
                    next.insert_add([pack(g1, group.mul(x1, x)), pack(a, x)], c);
                }
            }
        }
        chain = next;
    }
    let mut out = SparseTensor::<1>::zero();
    for (k, &c) in chain.iter() {
        let (g1, x1) = unpack(k[0]);
        let (g2, x2) = unpack(k[1]);
        if g2 == group.conj(g1, x1) {
            out.insert_add([pack(g1, group.mul(x1, x2))], c);
        }
    }
    out
}

/// Explicit module underlying a simple label: basis `|t_j, w_mu>` indexed by
/// `j * irrep_dim + mu`.
#[derive(Debug, Clone, Copy)]
pub struct DoubleModule {
    pub label: usize,
    pub class: usize,
    pub irrep: usize,
    pub class_size: usize,
    pub irrep_dim: usize,
}

impl DoubleModule {
    pub fn new(dd: &DoubleData, label: usize) -> DoubleModule {
        let lab = dd.simples[label];
        DoubleModule {
            label,
            class: lab.class,
            irrep: lab.irrep,
            class_size: dd.sg.conj.classes[lab.class].1.len(),
            irrep_dim: dd.tables[lab.class].degrees[lab.irrep] as usize,
        }
    }

    pub fn dim(&self) -> usize {
        self.class_size * self.irrep_dim
    }

    /// Apply `e_g # x` to a vector in the module basis.
    pub fn apply_basis(
        &self,
        dd: &DoubleData,
        g: usize,
        x: usize,
        input: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let group = dd.group();
        let conj = &dd.sg.conj;
        let mut out = DVector::zeros(self.dim());
        let rho = &dd.irreps[self.class][self.irrep];
        for j in 0..self.class_size {
            let base = j * self.irrep_dim;
            let nonzero =
                (0..self.irrep_dim).any(|mu| input[base + mu].norm_sqr() > 0.0);
            if !nonzero {
                continue;
            }
            let (k, h) = coset_action(group, conj, self.class, x, j);
            // fires when g equals the class member at position k
            if conj.classes[self.class].1[k] != g {
                continue;
            }
            let h_local = dd.local_of[self.class][h];
            let mat = &rho.matrices[h_local];
            let target = k * self.irrep_dim;
            for mu in 0..self.irrep_dim {
                let amp = input[base + mu];
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                for nu in 0..self.irrep_dim {
                    out[target + nu] += mat[(nu, mu)] * amp;
                }
            }
        }
        out
    }

    /// Apply a sparse element of D(G).
    pub fn apply(
        &self,
        dd: &DoubleData,
        elem: &SparseTensor<1>,
        input: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.dim());
        for (k, c) in elem.sorted_entries() {
            let (g, x) = unpack(k[0]);
            out += self.apply_basis(dd, g, x, input) * c;
        }
        out
    }

    /// Trace of the action of a sparse element.
    pub fn trace(&self, dd: &DoubleData, elem: &SparseTensor<1>) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..self.dim() {
            let mut e = DVector::zeros(self.dim());
            e[b] = Complex64::new(1.0, 0.0);
            acc += self.apply(dd, elem, &e)[b];
        }
        acc
    }
}

pub fn key1(g: usize, x: usize) -> [u64; 1] {
    [pack(g, x)]
}

pub fn key2(g1: usize, x1: usize, g2: usize, x2: usize) -> [u64; 2] {
    [pack(g1, x1), pack(g2, x2)]
}

pub fn unpack_key(k: u64) -> (usize, usize) {
    unpack(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Bicharacter;
    use crate::catalog::catalog;
    use crate::structure::{p_support, StructuredGroup};
    use proptest::prelude::*;

    fn data(name: &str) -> DoubleData {
        DoubleData::new(StructuredGroup::new(catalog(name).unwrap()).unwrap()).unwrap()
    }

    fn standard_components<'a>(
        sg: &'a StructuredGroup,
        right_handed: bool,
        r: &'a Bicharacter,
        p: &'a PSupport,
    ) -> RComponents<'a> {
        let n = sg.group.order();
        let (u, v): (Vec<usize>, Vec<usize>) = if right_handed {
            ((0..n).map(|_| 0).collect(), (0..n).collect())
        } else {
            ((0..n).collect(), (0..n).map(|_| 0).collect())
        };
        RComponents { sg, u, v, r, p }
    }

    #[test]
    fn simple_counts_and_dimensions() {
        let dd = data("S3");
        assert_eq!(dd.num_simples(), 8);
        let mut dims = dd.dims();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
        assert_eq!(dims.iter().map(|d| d * d).sum::<u64>(), 36);

        let dd = data("S4");
        assert_eq!(dd.num_simples(), 21);
        assert_eq!(dd.dims().iter().map(|d| d * d).sum::<u64>(), 576);

        let dd = data("Z2");
        assert_eq!(dd.num_simples(), 4);
        assert!(dd.dims().iter().all(|&d| d == 1));

        for name in ["D4", "Q8"] {
            let dd = data(name);
            assert_eq!(dd.num_simples(), 22);
            assert_eq!(dd.dims().iter().map(|d| d * d).sum::<u64>(), 64);
        }
    }

    #[test]
    fn unit_character_is_support_of_identity() {
        let dd = data("S3");
        let unit = dd.unit_label();
        for g in dd.group().elements() {
            for x in dd.group().elements() {
                let v = dd.char_value(unit, g, x);
                let expected = if g == 0 && dd.group().mul(g, x) == dd.group().mul(x, g) {
                    1.0
                } else {
                    0.0
                };
                assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn characters_match_module_traces() {
        let dd = data("S3");
        for label in 0..dd.num_simples() {
            let module = DoubleModule::new(&dd, label);
            assert_eq!(module.dim() as u64, dd.simples[label].dim);
            for g in dd.group().elements() {
                for x in dd.group().elements() {
                    let mut elem = SparseTensor::<1>::zero();
                    elem.insert_add(key1(g, x), Complex64::new(1.0, 0.0));
                    let tr = module.trace(&dd, &elem);
                    assert!((tr - dd.char_value(label, g, x)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn module_action_is_a_representation() {
        // exhaustive check of the action identity on all basis products
        let dd = data("S3");
        let group = dd.group().clone();
        for label in 0..dd.num_simples() {
            let module = DoubleModule::new(&dd, label);
            let dim = module.dim();
            for g in group.elements() {
                for x in group.elements() {
                    for h in group.elements() {
                        for y in group.elements() {
                            for b in 0..dim {
                                let mut e = DVector::zeros(dim);
                                e[b] = Complex64::new(1.0, 0.0);
                                let composed =
                                    module.apply_basis(&dd, g, x, &module.apply_basis(&dd, h, y, &e));
                                // product (e_g#x)(e_h#y)
                                let direct = if h == group.conj(g, x) {
                                    module.apply_basis(&dd, g, group.mul(x, y), &e)
                                } else {
                                    DVector::zeros(dim)
                                };
                                assert!((composed - direct).norm() < 1e-9);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormality_of_double_characters() {
        for name in ["S3", "D4", "Q8"] {
            data(name).verify_orthonormality().unwrap();
        }
    }

    #[test]
    fn fusion_basics() {
        let dd = data("S3");
        let n = fusion_rules(&dd).unwrap();
        let m = dd.num_simples();
        let dims = dd.dims();
        for k in 0..m {
            for j in 0..m {
                assert_eq!(n.get(dd.unit_label(), k, j), u32::from(k == j));
            }
        }
        for i in 0..m {
            for k in 0..m {
                let total: u64 = (0..m).map(|j| n.get(i, k, j) as u64 * dims[j]).sum();
                assert_eq!(total, dims[i] * dims[k]);
                for j in 0..m {
                    // commutativity and Frobenius reciprocity
                    assert_eq!(n.get(i, k, j), n.get(k, i, j));
                    let kd = dd.dual_of(k).unwrap();
                    let jd = dd.dual_of(j).unwrap();
                    assert_eq!(n.get(i, k, j), n.get(i, jd, kd));
                }
            }
        }
    }

    #[test]
    fn duals_are_involutive_on_s4() {
        let dd = data("S4");
        for i in 0..dd.num_simples() {
            let d = dd.dual_of(i).unwrap();
            assert_eq!(dd.dual_of(d).unwrap(), i);
        }
    }

    #[test]
    fn degrees_multiply_along_fusion() {
        let dd = data("S3");
        let n = fusion_rules(&dd).unwrap();
        let q = &dd.sg.quotient_ab.orders;
        assert!(dd.degree(dd.unit_label()).coset.iter().all(|&c| c == 0));
        assert!(dd.degree(dd.unit_label()).central.is_trivial());
        for i in 0..dd.num_simples() {
            for k in 0..dd.num_simples() {
                let expected = dd.degree(i).compose(dd.degree(k), q);
                for j in 0..dd.num_simples() {
                    if n.get(i, k, j) > 0 {
                        assert_eq!(dd.degree(j), &expected);
                    }
                }
            }
        }
        // a transposition label lies in the odd coset
        let odd = dd
            .simples
            .iter()
            .position(|s| dd.group().element_order(dd.sg.conj.classes[s.class].0) == 2)
            .unwrap();
        assert_eq!(dd.degree(odd).coset, vec![1]);
    }

    #[test]
    fn standard_r_elements() {
        let sg = StructuredGroup::new(catalog("S3").unwrap()).unwrap();
        let triv_r = Bicharacter::trivial(&sg.quotient_ab.orders);
        let zero_p = crate::abelian::AbHom::zero(&sg.center_ab.orders, &sg.center_ab.orders);
        let p = p_support(&sg, &zero_p).unwrap();

        // <1,0,0,0> is sum_g eps # g (x) e_g # 1
        let r0 = r_element(&standard_components(&sg, false, &triv_r, &p)).unwrap();
        let mut expected = SparseTensor::<2>::zero();
        for s in sg.group.elements() {
            for t in sg.group.elements() {
                expected.insert_add(key2(s, t, t, 0), Complex64::new(1.0, 0.0));
            }
        }
        assert!(r0.coefficients_equal(&expected));

        // <0,0,0,1> is tau(R0^-1) = sum_g e_g # 1 (x) eps # g^-1
        let r1 = r_element(&standard_components(&sg, true, &triv_r, &p)).unwrap();
        let swapped_inverse = r0.antipode_slot(0, &sg.group).swap();
        assert!(r1.max_deviation(&swapped_inverse) < 1e-12);

        // ribbon elements: sum e_g # g^-1 and sum e_g # g
        let u0 = ribbon_element(&standard_components(&sg, false, &triv_r, &p)).unwrap();
        let u1 = ribbon_element(&standard_components(&sg, true, &triv_r, &p)).unwrap();
        let mut exp0 = SparseTensor::<1>::zero();
        let mut exp1 = SparseTensor::<1>::zero();
        for g in sg.group.elements() {
            exp0.insert_add(key1(g, sg.group.inv(g)), Complex64::new(1.0, 0.0));
            exp1.insert_add(key1(g, g), Complex64::new(1.0, 0.0));
        }
        assert!(u0.coefficients_equal(&exp0));
        assert!(u1.coefficients_equal(&exp1));
    }

    #[test]
    fn standard_elements_pass_axioms() {
        for name in ["S3", "Q8"] {
            let sg = StructuredGroup::new(catalog(name).unwrap()).unwrap();
            let triv_r = Bicharacter::trivial(&sg.quotient_ab.orders);
            let zero_p = crate::abelian::AbHom::zero(&sg.center_ab.orders, &sg.center_ab.orders);
            let p = p_support(&sg, &zero_p).unwrap();
            for right in [false, true] {
                let r = r_element(&standard_components(&sg, right, &triv_r, &p)).unwrap();
                let report = quasitriangular_axioms(&sg.group, &r);
                assert!(report.passes(1e-9), "{name} right={right}: {report:?}");
            }
        }
    }

    #[test]
    fn standard_braidings_are_not_symmetric_on_nonabelian_groups() {
        let sg = StructuredGroup::new(catalog("S3").unwrap()).unwrap();
        let triv_r = Bicharacter::trivial(&sg.quotient_ab.orders);
        let zero_p = crate::abelian::AbHom::zero(&sg.center_ab.orders, &sg.center_ab.orders);
        let p = p_support(&sg, &zero_p).unwrap();
        let unit = SparseTensor::<2>::unit(&sg.group);
        for right in [false, true] {
            let r = r_element(&standard_components(&sg, right, &triv_r, &p)).unwrap();
            let r_tau_r = r.mul(&r.swap(), &sg.group);
            assert!(r_tau_r.max_deviation(&unit) > 0.5);
        }
    }

    #[test]
    fn ribbon_elements_are_central_and_act_by_scalars() {
        let sg = StructuredGroup::new(catalog("S3").unwrap()).unwrap();
        let dd = data("S3");
        let triv_r = Bicharacter::trivial(&sg.quotient_ab.orders);
        let zero_p = crate::abelian::AbHom::zero(&sg.center_ab.orders, &sg.center_ab.orders);
        let p = p_support(&sg, &zero_p).unwrap();
        for right in [false, true] {
            let u = ribbon_element(&standard_components(&sg, right, &triv_r, &p)).unwrap();
            for g in sg.group.elements() {
                for x in sg.group.elements() {
                    let mut basis = SparseTensor::<1>::zero();
                    basis.insert_add(key1(g, x), Complex64::new(1.0, 0.0));
                    let left = u.mul(&basis, &sg.group);
                    let right_prod = basis.mul(&u, &sg.group);
                    assert!(left.coefficients_equal(&right_prod));
                }
            }
            for label in 0..dd.num_simples() {
                let module = DoubleModule::new(&dd, label);
                let scalar = dd.eval_char(label, &u) / dd.simples[label].dim as f64;
                assert!((scalar.norm() - 1.0).abs() < 1e-9);
                // action matrix equals scalar * identity
                for b in 0..module.dim() {
                    let mut e = DVector::zeros(module.dim());
                    e[b] = Complex64::new(1.0, 0.0);
                    let out = module.apply(&dd, &u, &e);
                    for c in 0..module.dim() {
                        let expected = if c == b { scalar } else { Complex64::new(0.0, 0.0) };
                        assert!((out[c] - expected).norm() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn sweedler_powers() {
        let dd = data("S3");
        let group = dd.group().clone();
        // m = 1: character evaluations pick out the unit label
        let lam = sweedler_power_integral(&group, 1);
        for label in 0..dd.num_simples() {
            let v = dd.eval_char(label, &lam);
            let expected = if label == dd.unit_label() { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-10);
        }
        // m = 2: all indicator values in {0, 1} for D(S3)
        let lam2 = sweedler_power_integral(&group, 2);
        for label in 0..dd.num_simples() {
            let v = dd.eval_char(label, &lam2);
            assert!(v.im.abs() < 1e-9);
            assert!((v.re - v.re.round()).abs() < 1e-9);
            assert!(v.re.round() == 0.0 || v.re.round() == 1.0);
        }
        // m = 3 kills labels over transpositions
        let lam3 = sweedler_power_integral(&group, 3);
        for (label, s) in dd.simples.iter().enumerate() {
            if group.element_order(dd.sg.conj.classes[s.class].0) == 2 {
                assert!(dd.eval_char(label, &lam3).norm() < 1e-9);
            }
        }
    }

    fn random_element(seed: u64, group: &FiniteGroup) -> SparseTensor<1> {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        let mut out = SparseTensor::zero();
        for _ in 0..6 {
            let g = next() % group.order();
            let x = next() % group.order();
            let c = Complex64::new(
                (next() % 17) as f64 / 7.0 - 1.0,
                (next() % 13) as f64 / 5.0 - 1.0,
            );
            out.insert_add(key1(g, x), c);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sparse_multiplication_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let group = catalog("S3").unwrap().group;
            let a = random_element(s1, &group);
            let b = random_element(s2, &group);
            let c = random_element(s3, &group);
            let lhs = a.mul(&b, &group).mul(&c, &group);
            let rhs = a.mul(&b.mul(&c, &group), &group);
            prop_assert!(lhs.max_deviation(&rhs) < 1e-9);
        }

        #[test]
        fn unit_is_neutral(s in any::<u64>()) {
            let group = catalog("S3").unwrap().group;
            let a = random_element(s, &group);
            let one = SparseTensor::<1>::unit(&group);
            prop_assert!(a.mul(&one, &group).max_deviation(&a) < 1e-12);
            prop_assert!(one.mul(&a, &group).max_deviation(&a) < 1e-12);
        }
    }
}
