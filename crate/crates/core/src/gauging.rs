//! Braid gaugings of Rep(D(G)) as component quadruples (w, r, p, z),
//! chirality data, the enumeration of all quasitriangular structures as
//! gauged standard braidings, bicentrality verification, and the
//! fixed-point solvers available over purely non-abelian groups.

use crate::abelian::{AbCharacter, AbHom, Bicharacter};
use crate::double::{
    quasitriangular_axioms, r_element, ribbon_element, DegreeLabel, DoubleError, RComponents,
    SparseTensor,
};
use crate::phase::{lcm, Phase};
use crate::structure::{p_support, StructuredGroup};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaugingError {
    #[error("enumeration would produce {0} items, over the cap {1}")]
    EnumerationCapExceeded(u64, u64),
    #[error("group is not purely non-abelian; the fixed-point iteration need not converge")]
    NotPurelyNonAbelian,
    #[error("chirality set requests factor {0} but only {1} non-abelian factors are recorded")]
    NoFactorData(usize, usize),
    #[error(transparent)]
    Double(#[from] DoubleError),
    #[error(transparent)]
    Abelian(#[from] crate::abelian::AbelianError),
}

pub const DEFAULT_GAUGING_CAP: u64 = 1_000_000;

/// A braid gauging of Rep(D(G)): two central-valued class maps, a bilinear
/// form on the abelianization, and a central Hopf map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugingQuadruple {
    pub w: AbHom,
    pub r: Bicharacter,
    pub p: AbHom,
    pub z: AbHom,
}

impl GaugingQuadruple {
    pub fn trivial(sg: &StructuredGroup) -> GaugingQuadruple {
        let (q, c) = sg.hom_orders();
        GaugingQuadruple {
            w: AbHom::zero(&q, &c),
            r: Bicharacter::trivial(&q),
            p: AbHom::zero(&c, &c),
            z: AbHom::zero(&q, &c),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.w.is_zero() && self.r.is_trivial() && self.p.is_zero() && self.z.is_zero()
    }

    /// Componentwise group law.
    pub fn add(&self, other: &GaugingQuadruple) -> GaugingQuadruple {
        GaugingQuadruple {
            w: self.w.add(&other.w),
            r: self.r.add(&other.r),
            p: self.p.add(&other.p),
            z: self.z.add(&other.z),
        }
    }

    pub fn neg(&self) -> GaugingQuadruple {
        GaugingQuadruple { w: self.w.neg(), r: self.r.neg(), p: self.p.neg(), z: self.z.neg() }
    }

    /// `z_R = z_u - z_v = w - z` for the structure `(w,r,p,z) R_E`.
    pub fn z_r(&self) -> AbHom {
        self.w.add(&self.z.neg())
    }
}

/// All gaugings; the count is `|Hom(G,Z(G))|^2 |BCh(G)| |Hom(Z(G)^,Z(G))|`.
pub fn enumerate_gaugings(sg: &StructuredGroup) -> Result<Vec<GaugingQuadruple>, GaugingError> {
    enumerate_gaugings_capped(sg, DEFAULT_GAUGING_CAP)
}

pub fn enumerate_gaugings_capped(
    sg: &StructuredGroup,
    cap: u64,
) -> Result<Vec<GaugingQuadruple>, GaugingError> {
    let homs = sg.central_homs();
    let bchs = sg.bicharacters();
    let ps = sg.p_homs();
    let total = homs.len() as u64 * homs.len() as u64 * bchs.len() as u64 * ps.len() as u64;
    if total > cap {
        return Err(GaugingError::EnumerationCapExceeded(total, cap));
    }
    let mut out = Vec::with_capacity(total as usize);
    for w in &homs {
        for r in &bchs {
            for p in &ps {
                for z in &homs {
                    out.push(GaugingQuadruple {
                        w: w.clone(),
                        r: r.clone(),
                        p: p.clone(),
                        z: z.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The gauging evaluated on a pair of degrees:
/// `b((g,lambda),(h,alpha)) = r(h^-1,g) lambda(p(alpha)^-1 z(h)) alpha(w(g^-1))`.
pub fn gauging_value(quad: &GaugingQuadruple, x: &DegreeLabel, y: &DegreeLabel) -> Phase {
    let lambda = &x.central;
    let alpha = &y.central;
    let r_part = quad.r.eval(&y.coset, &x.coset).neg();
    let p_alpha = quad.p.apply(&alpha.exps);
    let z_h = quad.z.apply(&y.coset);
    let lam_part = lambda.eval(&p_alpha).neg().add(lambda.eval(&z_h));
    let w_g = quad.w.apply(&x.coset);
    let alpha_part = alpha.eval(&w_g).neg();
    r_part.add(lam_part).add(alpha_part)
}

/// The same value through the swapped form
/// `r(h^-1,g) lambda(z(h)) alpha(p*(lambda)^-1 w(g^-1))`; the two forms
/// coincide identically.
pub fn gauging_value_swapped(
    quad: &GaugingQuadruple,
    x: &DegreeLabel,
    y: &DegreeLabel,
) -> Phase {
    let lambda = &x.central;
    let alpha = &y.central;
    let r_part = quad.r.eval(&y.coset, &x.coset).neg();
    let lam_part = lambda.eval(&quad.z.apply(&y.coset));
    let pd_lambda = quad.p.dual().apply(&lambda.exps);
    let alpha_part = alpha.eval(&pd_lambda).neg().add(alpha.eval(&quad.w.apply(&x.coset)).neg());
    r_part.add(lam_part).add(alpha_part)
}

/// Least common order of all gauging values over a set of degrees.
pub fn value_group_exponent(quad: &GaugingQuadruple, degrees: &[DegreeLabel]) -> u64 {
    let mut e = 1u64;
    for x in degrees {
        for y in degrees {
            e = lcm(e, gauging_value(quad, x, y).order());
        }
    }
    e
}

/// A chirality set: the subset of non-abelian factors on which a structure
/// follows the standard braiding, with its projections and twist map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiralitySet {
    /// membership of factors 1..n
    pub members: Vec<bool>,
    /// retraction onto G_0 x prod_{i in E} G_i
    pub pi_e: Vec<usize>,
    /// retraction onto prod_{i not in E} G_i
    pub pi_ec: Vec<usize>,
    /// identity on G_E, inversion on the complement
    pub twist: Vec<usize>,
}

impl ChiralitySet {
    pub fn new(sg: &StructuredGroup, members: Vec<bool>) -> Result<ChiralitySet, GaugingError> {
        let n = sg.product.n;
        if members.len() != n {
            return Err(GaugingError::NoFactorData(members.len(), n));
        }
        let group = &sg.group;
        let order = group.order();
        let mut pi_e = Vec::with_capacity(order);
        let mut pi_ec = Vec::with_capacity(order);
        let mut twist = Vec::with_capacity(order);
        for g in group.elements() {
            let mut e_part = 0usize;
            let mut ec_part = 0usize;
            for (i, factor_embedding) in sg.product.embeddings.iter().enumerate() {
                let digit = sg.product.project(order, g, i);
                let comp = factor_embedding[digit];
                if i == 0 || members[i - 1] {
                    e_part = group.mul(e_part, comp);
                } else {
                    ec_part = group.mul(ec_part, comp);
                }
            }
            debug_assert_eq!(group.mul(e_part, ec_part), g);
            pi_e.push(e_part);
            pi_ec.push(ec_part);
            twist.push(group.mul(e_part, group.inv(ec_part)));
        }
        Ok(ChiralitySet { members, pi_e, pi_ec, twist })
    }

    /// Full set: the standard braiding R0.
    pub fn full(sg: &StructuredGroup) -> ChiralitySet {
        ChiralitySet::new(sg, vec![true; sg.product.n]).expect("sizes match")
    }

    /// Empty set: the reverse braiding R1.
    pub fn empty(sg: &StructuredGroup) -> ChiralitySet {
        ChiralitySet::new(sg, vec![false; sg.product.n]).expect("sizes match")
    }

    pub fn from_bitmask(sg: &StructuredGroup, mask: u32) -> Result<ChiralitySet, GaugingError> {
        let n = sg.product.n;
        if mask as u64 >= (1u64 << n) {
            return Err(GaugingError::NoFactorData(32 - mask.leading_zeros() as usize, n));
        }
        ChiralitySet::new(sg, (0..n).map(|i| mask & (1 << i) != 0).collect())
    }
}

/// A quasitriangular structure `(z_u, r, p, z_v) R_E`.
#[derive(Debug, Clone)]
pub struct QTStructure {
    pub chirality: ChiralitySet,
    pub quad: GaugingQuadruple,
}

impl QTStructure {
    /// The standard E-chiral structure `<pi_E, 0, 0, pi_Ec>`.
    pub fn standard(sg: &StructuredGroup, chirality: ChiralitySet) -> QTStructure {
        QTStructure { chirality, quad: GaugingQuadruple::trivial(sg) }
    }

    pub fn r0(sg: &StructuredGroup) -> QTStructure {
        QTStructure::standard(sg, ChiralitySet::full(sg))
    }

    pub fn r1(sg: &StructuredGroup) -> QTStructure {
        QTStructure::standard(sg, ChiralitySet::empty(sg))
    }

    /// Component maps `u = w + pi_E`, `v = z + pi_Ec` as element tables.
    pub fn component_maps(&self, sg: &StructuredGroup) -> (Vec<usize>, Vec<usize>) {
        let group = &sg.group;
        let u = group
            .elements()
            .map(|g| group.mul(sg.eval_central_hom(&self.quad.w, g), self.chirality.pi_e[g]))
            .collect();
        let v = group
            .elements()
            .map(|g| group.mul(sg.eval_central_hom(&self.quad.z, g), self.chirality.pi_ec[g]))
            .collect();
        (u, v)
    }

    pub fn realize(&self, sg: &StructuredGroup) -> Result<SparseTensor<2>, GaugingError> {
        let support = p_support(sg, &self.quad.p)?;
        let (u, v) = self.component_maps(sg);
        Ok(r_element(&RComponents { sg, u, v, r: &self.quad.r, p: &support })?)
    }

    pub fn ribbon(&self, sg: &StructuredGroup) -> Result<SparseTensor<1>, GaugingError> {
        let support = p_support(sg, &self.quad.p)?;
        let (u, v) = self.component_maps(sg);
        Ok(ribbon_element(&RComponents { sg, u, v, r: &self.quad.r, p: &support })?)
    }
}

/// All quasitriangular structures: every gauging applied to every standard
/// E-chiral structure.
pub fn enumerate_qts(sg: &StructuredGroup) -> Result<Vec<QTStructure>, GaugingError> {
    enumerate_qts_capped(sg, DEFAULT_GAUGING_CAP)
}

pub fn enumerate_qts_capped(
    sg: &StructuredGroup,
    cap: u64,
) -> Result<Vec<QTStructure>, GaugingError> {
    let gaugings = enumerate_gaugings_capped(sg, cap)?;
    let n = sg.product.n;
    let total = (1u64 << n) * gaugings.len() as u64;
    if total > cap {
        return Err(GaugingError::EnumerationCapExceeded(total, cap));
    }
    let mut out = Vec::with_capacity(total as usize);
    for mask in 0..(1u32 << n) {
        let chirality = ChiralitySet::from_bitmask(sg, mask)?;
        for quad in &gaugings {
            out.push(QTStructure { chirality: chirality.clone(), quad: quad.clone() });
        }
    }
    Ok(out)
}

/// The quadruple realized as an element of D(G) (x) D(G):
/// `sum_{s,a,b} e_s # a w(b) (x) r(s) e_b # p(e_a) z(s^-1)`.
pub fn quadruple_element(
    sg: &StructuredGroup,
    quad: &GaugingQuadruple,
) -> Result<SparseTensor<2>, GaugingError> {
    let support = p_support(sg, &quad.p)?;
    let group = &sg.group;
    let inv_asize = 1.0 / support.a_elements.len() as f64;
    let w_table: Vec<usize> =
        group.elements().map(|g| sg.eval_central_hom(&quad.w, g)).collect();
    let z_table: Vec<usize> =
        group.elements().map(|g| sg.eval_central_hom(&quad.z, g)).collect();
    let mut out = SparseTensor::zero();
    for s in group.elements() {
        let zs = z_table[group.inv(s)];
        for b in group.elements() {
            let rsb = quad.r.eval(sg.coset_coords(s), sg.coset_coords(b));
            let wb = w_table[b];
            for &a in &support.a_elements {
                let first = crate::double::key2(s, group.mul(a, wb), 0, 0)[0];
                for &c in &support.b_elements {
                    let coeff = rsb.add(support.sigma(a, c)).to_complex() * inv_asize;
                    let second = crate::double::key2(0, 0, b, group.mul(c, zs))[1];
                    out.insert_add([first, second], coeff);
                }
            }
        }
    }
    Ok(out)
}

/// Whether the realized quadruple element lies in the center of the tensor
/// square (exact coefficient arithmetic).
pub fn bicentrality_check(sg: &StructuredGroup, quad: &GaugingQuadruple) -> Result<bool, GaugingError> {
    let elem = quadruple_element(sg, quad)?;
    Ok(crate::double::is_central_in_tensor_square(&sg.group, &elem))
}

/// Number of members of Hom(G, Z(G)) without enumerating them.
pub fn central_hom_count(sg: &StructuredGroup) -> u64 {
    let (q, c) = sg.hom_orders();
    let mut total = 1u64;
    for &d in &q {
        for &e in &c {
            let mut a = d;
            let mut b = e;
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            total *= a;
        }
    }
    total
}

/// The unique fixed point of `z = w + sum_{s=1}^t sum_i f_i (z*)^s g_i`
/// over a purely non-abelian group, found as the stabilized iterate
/// `f^(2N)(0)` with `N = |Hom(G, Z(G))|`.
pub fn solve_recursion(
    sg: &StructuredGroup,
    w: &AbHom,
    fs: &[AbHom],
    gs: &[Bicharacter],
    t: u32,
) -> Result<AbHom, GaugingError> {
    solve_recursion_from(sg, w, fs, gs, t, &AbHom::zero(&w.src, &w.dst))
}

pub fn solve_recursion_from(
    sg: &StructuredGroup,
    w: &AbHom,
    fs: &[AbHom],
    gs: &[Bicharacter],
    t: u32,
    start: &AbHom,
) -> Result<AbHom, GaugingError> {
    if !sg.is_purely_nonabelian() {
        return Err(GaugingError::NotPurelyNonAbelian);
    }
    let res = sg.restriction_hom();
    // the bilinear forms land in characters of the whole group; the
    // restriction to central characters is explicit here
    let g_homs: Vec<AbHom> = gs.iter().map(|g| res.compose(&g.to_hom())).collect();
    let step = |z: &AbHom| -> AbHom {
        let zstar = res.compose(&z.dual());
        let mut acc = w.clone();
        let mut power = AbHom::identity(&res.dst);
        for _ in 1..=t {
            power = zstar.compose(&power);
            for (f, g) in fs.iter().zip(&g_homs) {
                acc = acc.add(&f.compose(&power).compose(g));
            }
        }
        acc
    };
    let n = central_hom_count(sg);
    let mut z = start.clone();
    for _ in 0..2 * n {
        z = step(&z);
    }
    assert_eq!(step(&z), z, "fixed point must satisfy the equation exactly");
    Ok(z)
}

/// A central automorphism `1 - z` with its underlying hom.
#[derive(Debug, Clone)]
pub struct CentralAutomorphism {
    pub map: Vec<usize>,
    pub z: AbHom,
}

/// The central automorphism solving `delta = 1 + p (delta^-1)* r`, obtained
/// as `1 - z` with `z` the fixed point of `z = -pr + sum_j -p (z^j)* r`.
pub fn solve_central_fixed_point(
    sg: &StructuredGroup,
    p: &AbHom,
    r: &Bicharacter,
) -> Result<CentralAutomorphism, GaugingError> {
    let res = sg.restriction_hom();
    // p r means p . res . r with the central restriction made explicit
    let pr = p.compose(&res.compose(&r.to_hom()));
    let t = central_hom_count(sg) as u32;
    let z = solve_recursion(sg, &pr.neg(), &[p.neg()], std::slice::from_ref(r), t)?;
    let group = &sg.group;
    let map: Vec<usize> = group
        .elements()
        .map(|g| group.mul(g, group.inv(sg.eval_central_hom(&z, g))))
        .collect();
    // delta must be a bijection (central automorphism)
    let mut seen = vec![false; group.order()];
    for &image in &map {
        assert!(!seen[image], "1 - z failed to be injective");
        seen[image] = true;
    }
    let delta = CentralAutomorphism { map, z };
    assert!(
        central_fixed_point_holds(sg, p, r, &delta),
        "solver output must satisfy the fixed-point identity"
    );
    Ok(delta)
}

/// Pointwise check of `delta(g) = g * (p (delta^-1)* r)(g)` for all g.
pub fn central_fixed_point_holds(
    sg: &StructuredGroup,
    p: &AbHom,
    r: &Bicharacter,
    delta: &CentralAutomorphism,
) -> bool {
    let group = &sg.group;
    let mut inverse = vec![0usize; group.order()];
    for g in group.elements() {
        inverse[delta.map[g]] = g;
    }
    let r_hom = r.to_hom();
    for g in group.elements() {
        // character r(g) composed with delta^-1, restricted to the center
        let lam = AbCharacter { orders: sg.quotient_ab.orders.clone(), exps: r_hom.apply(sg.coset_coords(g)) };
        let exps: Vec<u64> = sg
            .center_ab
            .generators
            .iter()
            .zip(&sg.center_ab.orders)
            .map(|(&zi, &d)| {
                let v = lam.eval(sg.coset_coords(inverse[zi]));
                ((v.numerator() * (d as i64) / v.denominator()).rem_euclid(d as i64)) as u64
            })
            .collect();
        let central = sg.center_element(&p.apply(&exps));
        if delta.map[g] != group.mul(g, central) {
            return false;
        }
    }
    true
}

/// Dual action of an endomorphism `1 + y` (central-valued `y`) on a bilinear
/// form: `(delta* beta)(g, h) = beta(g, delta(h))`.
pub fn pull_bicharacter(
    sg: &StructuredGroup,
    beta: &Bicharacter,
    delta_map: &[usize],
) -> Bicharacter {
    let orders = &sg.quotient_ab.orders;
    let k = orders.len();
    // evaluate on generator pairs of the abelianization via coset
    // representatives of the generators
    let gen_reps: Vec<usize> = (0..k)
        .map(|j| {
            sg.group
                .elements()
                .find(|&g| {
                    let c = sg.coset_coords(g);
                    (0..k).all(|i| c[i] == u64::from(i == j))
                })
                .expect("every coset has a representative")
        })
        .collect();
    let mut mat = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let g = {
                let mut a = orders[i];
                let mut b = orders[j];
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                a
            };
            let v = beta.eval(
                sg.coset_coords(gen_reps[i]),
                sg.coset_coords(delta_map[gen_reps[j]]),
            );
            debug_assert_eq!((v.numerator() * g as i64) % v.denominator(), 0);
            mat[i][j] =
                ((v.numerator() * g as i64 / v.denominator()).rem_euclid(g as i64)) as u64;
        }
    }
    Bicharacter { orders: orders.clone(), mat }
}

/// The coset-union identity over a purely non-abelian group: with
/// `T_p(beta) = p beta`, coset representatives `beta_k` of its kernel, and
/// `delta_k = 1 + p beta_k`, the sets `delta_k*(beta_k ker T_p)` cover all
/// bilinear forms.
pub fn bch_coset_union_covers(sg: &StructuredGroup, p: &AbHom) -> Result<bool, GaugingError> {
    if !sg.is_purely_nonabelian() {
        return Err(GaugingError::NotPurelyNonAbelian);
    }
    let res = sg.restriction_hom();
    let bchs = sg.bicharacters();
    // T_p(beta) = p . res . beta, restriction explicit
    let t_p = |beta: &Bicharacter| p.compose(&res.compose(&beta.to_hom()));
    let kernel: Vec<&Bicharacter> = bchs.iter().filter(|b| t_p(b).is_zero()).collect();
    // coset decomposition of BCh(G) by the kernel
    let mut reps: Vec<Bicharacter> = Vec::new();
    let mut assigned: std::collections::HashSet<Vec<Vec<u64>>> = std::collections::HashSet::new();
    for b in &bchs {
        if assigned.contains(&b.mat) {
            continue;
        }
        reps.push(b.clone());
        for ker in &kernel {
            assigned.insert(b.add(ker).mat.clone());
        }
    }
    let group = &sg.group;
    let mut covered: std::collections::HashSet<Vec<Vec<u64>>> = std::collections::HashSet::new();
    for beta_k in &reps {
        let pbk = t_p(beta_k);
        let delta_map: Vec<usize> = group
            .elements()
            .map(|g| group.mul(g, sg.eval_central_hom(&pbk, g)))
            .collect();
        for ker in &kernel {
            let member = beta_k.add(ker);
            covered.insert(pull_bicharacter(sg, &member, &delta_map).mat);
        }
    }
    Ok(covered.len() == bchs.len())
}

/// Axiom report for a structure, via its realized sparse element.
pub fn verify_qts(sg: &StructuredGroup, qts: &QTStructure) -> Result<crate::double::AxiomReport, GaugingError> {
    let elem = qts.realize(sg)?;
    Ok(quasitriangular_axioms(&sg.group, &elem))
}
