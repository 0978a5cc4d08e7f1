//! Per-group context: conjugacy data, center and abelianization coordinates,
//! restriction maps, the support data of central Hopf maps, and the
//! purely-non-abelian test.

use crate::abelian::{
    abelian_structure, enumerate_characters, enumerate_homs, AbCharacter, AbHom, AbelianError,
    AbelianStructure, Bicharacter,
};
use crate::catalog::GroupData;
use crate::group::{
    center, conjugacy_data, derived_subgroup, ConjugacyData, DirectProductStructure, FiniteGroup,
    Subgroup,
};
use crate::phase::Phase;
use rustc_hash::FxHashMap;
use std::sync::Arc;

/// A finite group with the derived structure everything downstream needs.
#[derive(Debug, Clone)]
pub struct StructuredGroup {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub product: DirectProductStructure,
    pub conj: ConjugacyData,
    pub center: Subgroup,
    pub center_ab: AbelianStructure,
    pub derived: Subgroup,
    /// G/G' as a group in its own right.
    pub quotient: FiniteGroup,
    pub quotient_ab: AbelianStructure,
    /// element id -> id of its coset in the quotient
    coset_of: Vec<usize>,
    pub exponent: u64,
}

impl StructuredGroup {
    pub fn new(data: GroupData) -> Result<StructuredGroup, AbelianError> {
        let GroupData { name, group, product } = data;
        let conj = conjugacy_data(&group);
        let z = center(&group);
        let center_ab = abelian_structure(&group, &z)?;
        let derived = derived_subgroup(&group);
        let (quotient, coset_of) = quotient_group(&group, &derived);
        let full = Subgroup::new(&quotient, quotient.elements().collect());
        let quotient_ab = abelian_structure(&quotient, &full)?;
        let exponent = group.exponent();
        Ok(StructuredGroup {
            name,
            group,
            product,
            conj,
            center: z,
            center_ab,
            derived,
            quotient,
            quotient_ab,
            coset_of,
            exponent,
        })
    }

    pub fn from_group(name: impl Into<String>, group: Arc<FiniteGroup>) -> StructuredGroup {
        StructuredGroup::new(GroupData::new(name, group)).expect("quotient and center are abelian")
    }

    /// Coordinates of `g G'` in the abelianization.
    pub fn coset_coords(&self, g: usize) -> &[u64] {
        self.quotient_ab.coords(self.coset_of[g])
    }

    /// Coordinates of a central element.
    pub fn center_coords(&self, z: usize) -> &[u64] {
        self.center_ab.coords(z)
    }

    pub fn center_element(&self, coords: &[u64]) -> usize {
        self.center_ab.element(coords)
    }

    /// Orders of Hom(G, Z(G)) members' source/target coordinate groups.
    pub fn hom_orders(&self) -> (Vec<u64>, Vec<u64>) {
        (self.quotient_ab.orders.clone(), self.center_ab.orders.clone())
    }

    /// All of Hom(G, Z(G)), represented through the abelianization.
    pub fn central_homs(&self) -> Vec<AbHom> {
        enumerate_homs(&self.quotient_ab.orders, &self.center_ab.orders)
    }

    /// All of Hom(Z(G)^, Z(G)).
    pub fn p_homs(&self) -> Vec<AbHom> {
        enumerate_homs(&self.center_ab.orders, &self.center_ab.orders)
    }

    pub fn bicharacters(&self) -> Vec<Bicharacter> {
        crate::abelian::enumerate_bicharacters(&self.quotient_ab.orders)
    }

    /// Evaluate `w` in Hom(G, Z(G)) at a group element.
    pub fn eval_central_hom(&self, w: &AbHom, g: usize) -> usize {
        self.center_element(&w.apply(self.coset_coords(g)))
    }

    /// Restriction G^ -> Z(G)^ of characters killing G', as a map of
    /// coordinate groups.
    pub fn restriction_hom(&self) -> AbHom {
        let dq = &self.quotient_ab.orders;
        let dz = &self.center_ab.orders;
        let mat = (0..dz.len())
            .map(|i| {
                let q = self.coset_coords(self.center_ab.generators[i]).to_vec();
                (0..dq.len())
                    .map(|j| {
                        let v = q[j] * dz[i];
                        debug_assert_eq!(v % dq[j], 0);
                        (v / dq[j]) % dz[i].max(1)
                    })
                    .collect()
            })
            .collect();
        AbHom { src: dq.clone(), dst: dz.clone(), mat }
    }

    /// The composite Z(G) -> G -> G/G' in coordinates.
    pub fn center_to_quotient(&self) -> AbHom {
        let dz = &self.center_ab.orders;
        let dq = &self.quotient_ab.orders;
        let mat = (0..dq.len())
            .map(|j| {
                (0..dz.len())
                    .map(|i| self.coset_coords(self.center_ab.generators[i])[j])
                    .collect()
            })
            .collect();
        AbHom { src: dz.clone(), dst: dq.clone(), mat }
    }

    /// Fitting criterion: every member of Hom(G, Z(G)) is nilpotent under
    /// composition, checked by iterating each to the set-size cap.
    pub fn is_purely_nonabelian(&self) -> bool {
        let homs = self.central_homs();
        let cap = homs.len();
        let c = self.center_to_quotient();
        homs.iter().all(|m| {
            let mut cur = m.clone();
            for _ in 1..cap {
                if cur.is_zero() {
                    return true;
                }
                cur = m.compose(&c.compose(&cur));
            }
            cur.is_zero()
        })
    }
}

/// Quotient of a group by a normal subgroup; cosets keyed by their least
/// member, identity coset first.
pub fn quotient_group(group: &FiniteGroup, normal: &Subgroup) -> (FiniteGroup, Vec<usize>) {
    let n = group.order();
    let mut coset_min = vec![usize::MAX; n];
    for g in 0..n {
        if coset_min[g] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = normal.elements.iter().map(|&h| group.mul(g, h)).collect();
        let m = *members.iter().min().unwrap();
        for x in members {
            debug_assert!(coset_min[x] == usize::MAX || coset_min[x] == m);
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
    let quot = FiniteGroup::from_mult_table(&table).expect("quotient by a normal subgroup");
    (quot, proj)
}

/// Support data of a Hopf map `p` from functions on the center to the center:
/// subgroups `A, B` of `Z(G)` with `|A| = |B|`, and the pairing `sigma` with
/// `p(e_a) = (1/|A|) sum_b sigma(a, b) b`.
#[derive(Debug, Clone)]
pub struct PSupport {
    pub hom: AbHom,
    pub a_elements: Vec<usize>,
    pub b_elements: Vec<usize>,
    /// (a, b) -> exact root-of-unity exponent of sigma(a, b)
    sigma: FxHashMap<(usize, usize), Phase>,
}

impl PSupport {
    pub fn sigma(&self, a: usize, b: usize) -> Phase {
        self.sigma[&(a, b)]
    }

    /// Expansion of `p(e_a)` as `(coefficient phase, element)` pairs with an
    /// overall `1/|A|` scale; empty when `a` is outside `A`.
    pub fn expansion(&self, a: usize) -> Vec<(Phase, usize)> {
        if !self.a_elements.contains(&a) {
            return vec![];
        }
        self.b_elements.iter().map(|&b| (self.sigma[&(a, b)], b)).collect()
    }
}

/// Compute the support subgroups and pairing of `p`, verifying the expansion
/// of `p(e_a)` in the group basis against direct Fourier summation.
pub fn p_support(sg: &StructuredGroup, p: &AbHom) -> Result<PSupport, AbelianError> {
    let dz = &sg.center_ab.orders;
    let chars = enumerate_characters(dz);
    // fibers of lambda -> p(lambda) over the image subgroup B
    let mut fibers: FxHashMap<usize, Vec<&AbCharacter>> = FxHashMap::default();
    for lam in &chars {
        let b = sg.center_element(&p.apply(&lam.exps));
        fibers.entry(b).or_default().push(lam);
    }
    let mut b_elements: Vec<usize> = fibers.keys().copied().collect();
    b_elements.sort_unstable();
    let kernel: Vec<&AbCharacter> = fibers[&0].clone();
    // A is the joint kernel of the characters killing p
    let a_elements: Vec<usize> = sg
        .center
        .elements
        .iter()
        .copied()
        .filter(|&a| kernel.iter().all(|k| k.eval(sg.center_coords(a)).is_zero()))
        .collect();
    if a_elements.len() != b_elements.len() {
        return Err(AbelianError::SigmaMismatch);
    }
    let mut sigma = FxHashMap::default();
    for &b in &b_elements {
        let mu = fibers[&b][0];
        for &a in &a_elements {
            // sigma(a, b) = mu_b(a^-1), independent of the preimage choice on A
            let inv_a = sg.group.inv(a);
            sigma.insert((a, b), mu.eval(sg.center_coords(inv_a)));
        }
    }
    let support = PSupport { hom: p.clone(), a_elements, b_elements, sigma };
    // verify p(e_a) = (1/|A|) sum_b sigma(a,b) b against the Fourier expansion
    let zn = sg.center.order() as f64;
    let asize = support.a_elements.len() as f64;
    for &a in &sg.center.elements {
        let mut direct: FxHashMap<usize, num_complex::Complex64> = FxHashMap::default();
        for lam in &chars {
            let b = sg.center_element(&p.apply(&lam.exps));
            let inv_a = sg.group.inv(a);
            *direct.entry(b).or_default() += lam.eval(sg.center_coords(inv_a)).to_complex() / zn;
        }
        for &b in &support.b_elements {
            let claimed = if support.a_elements.contains(&a) {
                support.sigma(a, b).to_complex() / asize
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            };
            let got = direct.get(&b).copied().unwrap_or_default();
            if (claimed - got).norm() > 1e-10 {
                return Err(AbelianError::SigmaMismatch);
            }
        }
    }
    Ok(support)
}

/// The element `p(lambda)` for a character `lambda` of the center: the
/// inverse of the unique `y` in `B` whose sigma-column restricts to
/// `lambda` on `A`.
pub fn p_on_character(sg: &StructuredGroup, support: &PSupport, lambda: &AbCharacter) -> usize {
    let y = support
        .b_elements
        .iter()
        .copied()
        .find(|&y| {
            support
                .a_elements
                .iter()
                .all(|&a| lambda.eval(sg.center_coords(a)) == support.sigma(a, y))
        })
        .expect("every character of A matches exactly one sigma column");
    sg.group.inv(y)
}

/// Both swap identities relating `p`, a bilinear form and central characters:
/// `lambda(p(alpha)) = alpha(p*(lambda))` and, for all h,
/// `beta(p(lambda), h) = lambda((p* beta*)(h))`.
pub fn char_swap_check(
    sg: &StructuredGroup,
    p: &AbHom,
    beta: &Bicharacter,
    lambda: &AbCharacter,
    alpha: &AbCharacter,
) -> bool {
    let pd = p.dual();
    let lhs = lambda.eval(&p.apply(&alpha.exps));
    let rhs = alpha.eval(&pd.apply(&lambda.exps));
    if lhs != rhs {
        return false;
    }
    let res = sg.restriction_hom();
    let beta_t_hom = beta.transpose().to_hom();
    let p_of_lambda = p.apply(&lambda.exps);
    let p_lambda_elem = sg.center_element(&p_of_lambda);
    for h in sg.group.elements() {
        let left = beta.eval(sg.coset_coords(p_lambda_elem), sg.coset_coords(h));
        // (p* beta*)(h): h -> beta(. , h) -> restrict -> p*
        let bh = beta_t_hom.apply(sg.coset_coords(h));
        let central = pd.apply(&res.apply(&bh));
        let right = lambda.eval(&central);
        if left != right {
            return false;
        }
    }
    true
}
