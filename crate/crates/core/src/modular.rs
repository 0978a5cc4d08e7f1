//! Modular data of a quasitriangular structure on D(G): the T vector from
//! the ribbon element, the un-normalized S-matrix from the double braiding,
//! the gauging transformation laws, the modularity test, indicator formulas
//! (both the fusion/T route and the Sweedler-power oracle), the Verlinde
//! formula, and the gauged partition identities.

use crate::double::{
    sweedler_power_integral, DegreeLabel, DoubleData, DoubleError, FusionTensor, SparseTensor,
};
use crate::gauging::{
    gauging_value, GaugingError, GaugingQuadruple, QTStructure,
};
use crate::phase::{snap_to_root, Phase};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("S-matrix is not invertible")]
    NotModular,
    #[error("Verlinde output {0:.6} is not a nonnegative integer")]
    NonIntegerFusion(f64),
    #[error("fusion/T-route indicators disagree with the Sweedler oracle (deviation {0:.2e})")]
    OracleMismatch(f64),
    #[error(transparent)]
    Gauging(#[from] GaugingError),
    #[error(transparent)]
    Double(#[from] DoubleError),
}

/// S, T and dimensions for one braiding. S is un-normalized: the global
/// dimension `|G|^2` enters only in the indicator and Verlinde denominators.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub t: Vec<Complex64>,
    /// exact exponents for T entries that snapped to roots of unity
    pub t_exact: Vec<Option<Phase>>,
    pub s: DMatrix<Complex64>,
    pub dims: Vec<u64>,
    pub global_dim: f64,
}

fn labels_by_class(dd: &DoubleData) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); dd.sg.conj.classes.len()];
    for (l, s) in dd.simples.iter().enumerate() {
        out[s.class].push(l);
    }
    out
}

/// S-matrix from the sparse expansion of `R^-1 tau(R^-1)`; entries are
/// `sum chi_X(u_i) chi_Y(v_i)` over the expansion, character-level.
fn s_matrix(dd: &DoubleData, braiding: &SparseTensor<2>) -> DMatrix<Complex64> {
    let group = dd.group();
    let rinv = braiding.antipode_slot(0, group);
    let double_braiding = rinv.mul(&rinv.swap(), group);
    let by_class = labels_by_class(dd);
    let m = dd.num_simples();
    let mut s = DMatrix::<Complex64>::zeros(m, m);
    for (key, coeff) in double_braiding.sorted_entries() {
        let (g, x) = crate::double::unpack_key(key[0]);
        let (h, y) = crate::double::unpack_key(key[1]);
        let row_labels = &by_class[dd.sg.conj.position[g].0];
        let col_labels = &by_class[dd.sg.conj.position[h].0];
        for &lx in row_labels {
            let vx = dd.char_value(lx, g, x);
            if vx.norm_sqr() == 0.0 {
                continue;
            }
            let scaled = vx * coeff;
            for &ly in col_labels {
                let vy = dd.char_value(ly, h, y);
                if vy.norm_sqr() != 0.0 {
                    s[(lx, ly)] += scaled * vy;
                }
            }
        }
    }
    s
}

/// T entry snapping order: gauged twists live among roots of unity of order
/// dividing `exp(G)^2` at desk scale.
fn t_snap_order(dd: &DoubleData) -> u64 {
    let e = dd.sg.exponent;
    e.saturating_mul(e)
}

pub fn modular_data(dd: &DoubleData, qts: &QTStructure) -> Result<ModularData, ModularError> {
    let ribbon = qts.ribbon(&dd.sg)?;
    let snap_order = t_snap_order(dd);
    let mut t = Vec::with_capacity(dd.num_simples());
    let mut t_exact = Vec::with_capacity(dd.num_simples());
    for label in 0..dd.num_simples() {
        let scalar = dd.eval_char(label, &ribbon) / dd.simples[label].dim as f64;
        debug_assert!((scalar.norm() - 1.0).abs() < 1e-8, "ribbon acts by a unit scalar");
        // T is the scalar of the inverse ribbon
        let t_val = scalar.conj() / scalar.norm_sqr();
        match snap_to_root(t_val, snap_order, crate::TOL_SNAP) {
            Some(p) => {
                t.push(p.to_complex());
                t_exact.push(Some(p));
            }
            None => {
                t.push(t_val);
                t_exact.push(None);
            }
        }
    }
    let braiding = qts.realize(&dd.sg)?;
    let s = s_matrix(dd, &braiding);
    Ok(ModularData { t, t_exact, s, dims: dd.dims(), global_dim: dd.global_dim() })
}

/// Rank test with singular-value threshold `1e-8 * ||S||`.
pub fn is_modular(md: &ModularData) -> bool {
    let m = md.s.nrows();
    let svd = md.s.clone().svd(false, false);
    let max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return m == 0;
    }
    svd.singular_values.iter().filter(|&&v| v > 1e-8 * max).count() == m
}

pub fn s_rank(md: &ModularData) -> usize {
    let svd = md.s.clone().svd(false, false);
    let max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    svd.singular_values.iter().filter(|&&v| v > 1e-8 * max).count()
}

/// Transformation of the modular data under a gauging:
/// `T' = b(X,X)^-1 T`, `S' = b(X,Y) b(Y,X) S`.
pub fn gauge_transform(
    dd: &DoubleData,
    md: &ModularData,
    quad: &GaugingQuadruple,
) -> ModularData {
    let m = dd.num_simples();
    let mut t = Vec::with_capacity(m);
    let mut t_exact = Vec::with_capacity(m);
    for i in 0..m {
        let b = gauging_value(quad, &dd.degrees[i], &dd.degrees[i]);
        match md.t_exact[i] {
            Some(p) => {
                let q = p.add(b.neg());
                t.push(q.to_complex());
                t_exact.push(Some(q));
            }
            None => {
                t.push(md.t[i] * b.neg().to_complex());
                t_exact.push(None);
            }
        }
    }
    let mut s = md.s.clone();
    for i in 0..m {
        for j in 0..m {
            let factor = gauging_value(quad, &dd.degrees[i], &dd.degrees[j])
                .add(gauging_value(quad, &dd.degrees[j], &dd.degrees[i]));
            s[(i, j)] *= factor.to_complex();
        }
    }
    ModularData { t, t_exact, s, dims: md.dims.clone(), global_dim: md.global_dim }
}

/// T transformation factor of a gauged chiral structure in expanded form:
/// `r(g,g) lambda(p(lambda)) lambda(z_R(g))` with `z_R = w - z`.
pub fn chiral_t_factor(quad: &GaugingQuadruple, deg: &DegreeLabel) -> Phase {
    let lambda = &deg.central;
    let r_part = quad.r.eval(&deg.coset, &deg.coset);
    let p_part = lambda.eval(&quad.p.apply(&lambda.exps));
    let zr_part = lambda.eval(&quad.z_r().apply(&deg.coset));
    r_part.add(p_part).add(zr_part)
}

/// S transformation factor in expanded form:
/// `lambda(p(alpha)^-1 z_R(h^-1)) alpha(p(lambda)^-1 z_R(g^-1)) / (r(g,h) r(h,g))`.
pub fn chiral_s_factor(quad: &GaugingQuadruple, x: &DegreeLabel, y: &DegreeLabel) -> Phase {
    let lambda = &x.central;
    let alpha = &y.central;
    let zr = quad.z_r();
    let lam_part = lambda
        .eval(&quad.p.apply(&alpha.exps))
        .neg()
        .add(lambda.eval(&zr.apply(&y.coset)).neg());
    let alpha_part = alpha
        .eval(&quad.p.apply(&lambda.exps))
        .neg()
        .add(alpha.eval(&zr.apply(&x.coset)).neg());
    let r_part = quad.r.eval(&x.coset, &y.coset).add(quad.r.eval(&y.coset, &x.coset)).neg();
    lam_part.add(alpha_part).add(r_part)
}

/// Indicator values per label for one power.
#[derive(Debug, Clone)]
pub struct IndicatorTable {
    pub m: u32,
    pub values: Vec<Complex64>,
}

impl IndicatorTable {
    /// All values snapped to integers, when they are integers.
    pub fn rounded(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                if v.im.abs() < crate::TOL_SNAP {
                    crate::phase::snap_to_int(v.re, crate::TOL_SNAP)
                } else {
                    None
                }
            })
            .collect()
    }
}

fn t_ratio_power(md: &ModularData, i: usize, k: usize, m: i32) -> Complex64 {
    match (md.t_exact[i], md.t_exact[k]) {
        (Some(a), Some(b)) => a.sub(b).scale(m as i64).to_complex(),
        _ => (md.t[i] / md.t[k]).powi(m),
    }
}

/// Indicators from the fusion rules and the T-matrix:
/// `nu_m(X_j) = (1/dim) sum_{i,k} N_{i,k}^j d_i d_k (T_i/T_k)^m`.
pub fn bns_indicators(md: &ModularData, n: &FusionTensor, m: u32) -> IndicatorTable {
    let labels = md.dims.len();
    let values = (0..labels)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..labels {
                for k in 0..labels {
                    let mult = n.get(i, k, j);
                    if mult == 0 {
                        continue;
                    }
                    acc += t_ratio_power(md, i, k, m as i32)
                        * (mult as f64 * (md.dims[i] * md.dims[k]) as f64);
                }
            }
            acc / md.global_dim
        })
        .collect();
    IndicatorTable { m, values }
}

/// Indicators from the Sweedler powers of the integral, the
/// braiding-independent oracle.
pub fn sweedler_indicators(dd: &DoubleData, m: u32) -> IndicatorTable {
    let power = sweedler_power_integral(dd.group(), m);
    let values = (0..dd.num_simples()).map(|l| dd.eval_char(l, &power)).collect();
    IndicatorTable { m, values }
}

/// Fusion/T-route indicators cross-checked against the Sweedler oracle.
pub fn indicators_checked(
    dd: &DoubleData,
    md: &ModularData,
    n: &FusionTensor,
    m: u32,
) -> Result<IndicatorTable, ModularError> {
    let bns = bns_indicators(md, n, m);
    let oracle = sweedler_indicators(dd, m);
    let dev = bns
        .values
        .iter()
        .zip(&oracle.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    if dev > crate::TOL_SNAP {
        return Err(ModularError::OracleMismatch(dev));
    }
    Ok(bns)
}

/// Fusion rules from the S-matrix:
/// `N_{i,k}^{j*} = (1/dim) sum_a S_{i,a} S_{k,a} S_{j,a} / S_{0,a}`.
pub fn verlinde(dd: &DoubleData, md: &ModularData) -> Result<FusionTensor, ModularError> {
    verlinde_with_deviation(dd, md).map(|(n, _)| n)
}

pub fn verlinde_with_deviation(
    dd: &DoubleData,
    md: &ModularData,
) -> Result<(FusionTensor, f64), ModularError> {
    if !is_modular(md) {
        return Err(ModularError::NotModular);
    }
    let m = dd.num_simples();
    let unit = dd.unit_label();
    let duals: Vec<usize> =
        (0..m).map(|j| dd.dual_of(j)).collect::<Result<_, _>>().map_err(ModularError::Double)?;
    let mut worst = 0.0f64;
    let tensor = FusionTensor::from_fn(m, |i, k, j| {
        let jd = duals[j];
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..m {
            acc += md.s[(i, a)] * md.s[(k, a)] * md.s[(jd, a)] / md.s[(unit, a)];
        }
        let val = acc / md.global_dim;
        let rounded = val.re.round();
        let dev = (val.re - rounded).abs().max(val.im.abs());
        worst = worst.max(dev);
        if dev > crate::TOL_SNAP || rounded < 0.0 {
            return Err(DoubleError::NonIntegerFusion(val.re));
        }
        Ok(rounded as u32)
    });
    match tensor {
        Ok(t) => Ok((t, worst)),
        Err(DoubleError::NonIntegerFusion(v)) => Err(ModularError::NonIntegerFusion(v)),
        Err(e) => Err(ModularError::Double(e)),
    }
}

/// Whether the cyclic group generated by a gauging keeps the category
/// modular (always true over purely non-abelian groups).
pub fn gauging_subgroup_is_modular(
    dd: &DoubleData,
    md: &ModularData,
    quad: &GaugingQuadruple,
) -> bool {
    if dd.sg.is_purely_nonabelian() {
        return true;
    }
    let mut power = quad.clone();
    loop {
        if power.is_trivial() {
            return true;
        }
        if !is_modular(&gauge_transform(dd, md, &power)) {
            return false;
        }
        power = power.add(quad);
    }
}

/// The indicator partition sum over pairs with
/// `b(X_i,X_i)^m = mu b(X_k,X_k)^m`; equals `delta_{1,mu} dim nu_m(X_j)`.
/// Membership is decided at exact exponent level; `mu` is given as an exact
/// exponent (values outside the image group produce the empty sum).
pub fn gauged_bns_partition(
    dd: &DoubleData,
    md: &ModularData,
    n: &FusionTensor,
    quad: &GaugingQuadruple,
    m: u32,
    mu: Phase,
    j: usize,
) -> Complex64 {
    debug_assert!(gauging_subgroup_is_modular(dd, md, quad));
    let labels = dd.num_simples();
    let bdiag: Vec<Phase> = (0..labels)
        .map(|i| gauging_value(quad, &dd.degrees[i], &dd.degrees[i]).scale(m as i64))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..labels {
        for k in 0..labels {
            if bdiag[i] != mu.add(bdiag[k]) {
                continue;
            }
            let mult = n.get(i, k, j);
            if mult == 0 {
                continue;
            }
            acc += t_ratio_power(md, i, k, m as i32)
                * (mult as f64 * (md.dims[i] * md.dims[k]) as f64);
        }
    }
    acc
}

/// The same partition sum without materializing the fusion tensor: the sum
/// is rearranged through aggregated class functions on commuting pairs,
/// grouped by the exact diagonal gauging values.
pub fn gauged_bns_partition_large(
    dd: &DoubleData,
    md: &ModularData,
    quad: &GaugingQuadruple,
    m: u32,
    mu: Phase,
    j: usize,
) -> Complex64 {
    debug_assert!(gauging_subgroup_is_modular(dd, md, quad));
    let labels = dd.num_simples();
    let group = dd.group();
    let npairs = dd.commuting.len();
    let bdiag: Vec<Phase> = (0..labels)
        .map(|i| gauging_value(quad, &dd.degrees[i], &dd.degrees[i]).scale(m as i64))
        .collect();
    let mut classes: Vec<Phase> = bdiag.clone();
    classes.sort_unstable();
    classes.dedup();
    // F_v = sum over labels with diagonal value mu+v of d_i T_i^m chi_i;
    // G_v = sum over labels with value v of d_k T_k^-m chi_k
    let mut f_agg: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); npairs]; classes.len()];
    let mut g_agg: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); npairs]; classes.len()];
    for l in 0..labels {
        let t_pos = match md.t_exact[l] {
            Some(p) => p.scale(m as i64).to_complex(),
            None => md.t[l].powi(m as i32),
        };
        let t_neg = t_pos.conj() / t_pos.norm_sqr();
        let d = md.dims[l] as f64;
        for (ci, v) in classes.iter().enumerate() {
            if bdiag[l] == mu.add(*v) {
                for p in 0..npairs {
                    f_agg[ci][p] += dd.char_vectors[l][p] * t_pos * d;
                }
            }
            if bdiag[l] == *v {
                for p in 0..npairs {
                    g_agg[ci][p] += dd.char_vectors[l][p] * t_neg * d;
                }
            }
        }
    }
    // pair lookup table for (element, element) -> commuting pair index
    let order = group.order();
    let mut pair_at = vec![usize::MAX; order * order];
    for (idx, &(g, x)) in dd.commuting.iter().enumerate() {
        pair_at[g * order + x] = idx;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (pi, &(g, x)) in dd.commuting.iter().enumerate() {
        let vj = dd.char_vectors[j][pi].conj();
        if vj.norm_sqr() == 0.0 {
            continue;
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for ci in 0..classes.len() {
            let mut conv = Complex64::new(0.0, 0.0);
            for a in group.elements() {
                let b = group.mul(group.inv(a), g);
                let pa = pair_at[a * order + x];
                let pb = pair_at[b * order + x];
                if pa != usize::MAX && pb != usize::MAX {
                    conv += f_agg[ci][pb] * g_agg[ci][pa];
                }
            }
            inner += conv;
        }
        acc += vj * inner;
    }
    acc / group.order() as f64
}

/// The Verlinde partition sum over simples `A` with
/// `b(X Y Z, A) = mu b(A*, X Y Z)`; equals `delta_{1,mu} dim N_{X,Y}^{Z*}`.
pub fn gauged_verlinde_partition(
    dd: &DoubleData,
    md: &ModularData,
    quad: &GaugingQuadruple,
    x: usize,
    y: usize,
    z: usize,
    mu: Phase,
) -> Complex64 {
    debug_assert!(gauging_subgroup_is_modular(dd, md, quad));
    let q = &dd.sg.quotient_ab.orders;
    let xyz = dd.degrees[x].compose(&dd.degrees[y], q).compose(&dd.degrees[z], q);
    let unit = dd.unit_label();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..dd.num_simples() {
        let lhs = gauging_value(quad, &xyz, &dd.degrees[a]);
        let rhs = gauging_value(quad, &dd.degrees[a].inverse(q), &xyz);
        if lhs != mu.add(rhs) {
            continue;
        }
        acc += md.s[(x, a)] * md.s[(y, a)] * md.s[(z, a)] / md.s[(unit, a)];
    }
    acc
}

/// Labels `A` participating in the Verlinde partition for `mu`.
pub fn verlinde_partition_members(
    dd: &DoubleData,
    quad: &GaugingQuadruple,
    x: usize,
    y: usize,
    z: usize,
    mu: Phase,
) -> Vec<usize> {
    let q = &dd.sg.quotient_ab.orders;
    let xyz = dd.degrees[x].compose(&dd.degrees[y], q).compose(&dd.degrees[z], q);
    (0..dd.num_simples())
        .filter(|&a| {
            let lhs = gauging_value(quad, &xyz, &dd.degrees[a]);
            let rhs = gauging_value(quad, &dd.degrees[a].inverse(q), &xyz);
            lhs == mu.add(rhs)
        })
        .collect()
}
