//! Ordinary character tables and explicit unitary irreducible
//! representations of finite groups.
//!
//! Tables come from the simultaneous eigen-decomposition of a random real
//! linear combination of class-sum multiplication matrices (Hermitized in
//! the normalized class-sum basis, so a single Hermitian eigensolve yields
//! the common eigenbasis). Explicit irreps are carved out of the regular
//! representation by the central idempotent of each character, splitting the
//! isotypic block with a random Hermitian commutant element.

use crate::abelian::{AbCharacter, AbelianStructure};
use crate::group::{ConjugacyData, FiniteGroup};
use crate::phase::snap_to_root;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("class-matrix spectrum stayed degenerate after {0} reseeds")]
    DegenerateSpectrum(u32),
    #[error("isotypic block of degree {0} failed to split after {1} reseeds")]
    SplitFailure(u64, u32),
    #[error("subgroup is not central")]
    NotCentral,
}

const RESEED_ATTEMPTS: u32 = 8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTable {
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<u64>,
    /// element id -> class index
    pub class_of: Vec<usize>,
    pub degrees: Vec<u64>,
    /// rows[irrep][class]
    pub rows: Vec<Vec<Complex64>>,
    /// whether the entry was snapped to an exact root of unity
    pub snapped: Vec<Vec<bool>>,
}

impl CharacterTable {
    pub fn value(&self, row: usize, g: usize) -> Complex64 {
        self.rows[row][self.class_of[g]]
    }

    pub fn num_irreps(&self) -> usize {
        self.rows.len()
    }
}

fn is_all_ones(row: &[Complex64]) -> bool {
    row.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-6)
}

fn row_sort_key(degree: u64, row: &[Complex64]) -> (u64, bool, Vec<(i64, i64)>) {
    let rounded = row
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect();
    (degree, !is_all_ones(row), rounded)
}

pub fn character_table(
    group: &FiniteGroup,
    conj: &ConjugacyData,
) -> Result<CharacterTable, RepError> {
    character_table_seeded(group, conj, crate::DEFAULT_SEED)
}

pub fn character_table_seeded(
    group: &FiniteGroup,
    conj: &ConjugacyData,
    seed: u64,
) -> Result<CharacterTable, RepError> {
    let k = conj.classes.len();
    let n = group.order();
    let sizes: Vec<f64> = conj.classes.iter().map(|(_, m)| m.len() as f64).collect();
    // pair count[i][j][l] = #{(x,y) in C_i x C_j : xy in C_l}
    let mut count = vec![0u64; k * k * k];
    for (i, (_, members)) in conj.classes.iter().enumerate() {
        for &x in members {
            for y in group.elements() {
                let j = conj.class_of(y);
                let l = conj.class_of(group.mul(x, y));
                count[(i * k + j) * k + l] += 1;
            }
        }
    }
    // multiplication matrices in the orthonormal class-sum basis:
    // M[i][l][j] = a_{ijl} sqrt(|C_l| / |C_j|) with a_{ijl} = count / |C_l|
    let class_mats: Vec<DMatrix<f64>> = (0..k)
        .map(|i| {
            DMatrix::from_fn(k, k, |l, j| {
                let a = count[(i * k + j) * k + l] as f64 / sizes[l];
                a * (sizes[l] / sizes[j]).sqrt()
            })
        })
        .collect();
    let inverse_class: Vec<usize> =
        (0..k).map(|i| conj.class_of(group.inv(conj.classes[i].0))).collect();

    let exponent = group.exponent();
    for attempt in 0..RESEED_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64 * 0x9e3779b9));
        let mut h = DMatrix::<Complex64>::zeros(k, k);
        for i in 0..k {
            let s: f64 = rng.random::<f64>() - 0.5;
            let t: f64 = rng.random::<f64>() - 0.5;
            let mi = &class_mats[i];
            let mit = &class_mats[inverse_class[i]];
            for r in 0..k {
                for c in 0..k {
                    let sym = s * (mi[(r, c)] + mit[(r, c)]);
                    let asym = t * (mi[(r, c)] - mit[(r, c)]);
                    h[(r, c)] += Complex64::new(sym, asym);
                }
            }
        }
        let eig = nalgebra::linalg::SymmetricEigen::new(h);
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if vals.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-8 * scale) {
            continue;
        }
        let mut rows = Vec::with_capacity(k);
        let mut degrees = Vec::with_capacity(k);
        let mut ok = true;
        for c in 0..k {
            let v: DVector<Complex64> = eig.eigenvectors.column(c).into();
            let pivot = (0..k).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
            // simultaneous eigenvalues omega_i with M_i v = omega_i v
            let omegas: Vec<Complex64> = (0..k)
                .map(|i| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..k {
                        acc += class_mats[i][(pivot, j)] * v[j];
                    }
                    acc / v[pivot]
                })
                .collect();
            let norm_sq: f64 = (0..k).map(|i| omegas[i].norm_sqr() / sizes[i]).sum();
            let deg_f = (n as f64 / norm_sq).sqrt();
            let deg = deg_f.round();
            if (deg_f - deg).abs() > 1e-6 || deg < 1.0 {
                ok = false;
                break;
            }
            let row: Vec<Complex64> = (0..k).map(|i| omegas[i] * deg / sizes[i]).collect();
            degrees.push(deg as u64);
            rows.push(row);
        }
        if !ok || degrees.iter().map(|d| d * d).sum::<u64>() != n as u64 {
            continue;
        }
        // orthonormality of rows under the class-weighted inner product
        let gram_ok = (0..k).all(|r| {
            (0..k).all(|s| {
                let ip: Complex64 = (0..k)
                    .map(|i| sizes[i] * rows[r][i] * rows[s][i].conj())
                    .sum::<Complex64>()
                    / n as f64;
                let expected = if r == s { 1.0 } else { 0.0 };
                (ip - Complex64::new(expected, 0.0)).norm() < 1e-8
            })
        });
        if !gram_ok {
            continue;
        }
        let mut snapped = vec![vec![false; k]; k];
        for (r, row) in rows.iter_mut().enumerate() {
            for (i, z) in row.iter_mut().enumerate() {
                if let Some(p) = snap_to_root(*z, exponent, crate::TOL_SNAP) {
                    *z = p.to_complex();
                    snapped[r][i] = true;
                }
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&r| row_sort_key(degrees[r], &rows[r]));
        let table = CharacterTable {
            class_reps: conj.classes.iter().map(|(s, _)| *s).collect(),
            class_sizes: sizes.iter().map(|&s| s as u64).collect(),
            class_of: (0..n).map(|g| conj.class_of(g)).collect(),
            degrees: order.iter().map(|&r| degrees[r]).collect(),
            rows: order.iter().map(|&r| rows[r].clone()).collect(),
            snapped: order.iter().map(|&r| snapped[r].clone()).collect(),
        };
        debug_assert!(is_all_ones(&table.rows[0]));
        return Ok(table);
    }
    Err(RepError::DegenerateSpectrum(RESEED_ATTEMPTS))
}

/// One unitary matrix model per irreducible character.
#[derive(Debug, Clone)]
pub struct ExplicitIrrep {
    pub row: usize,
    pub dim: usize,
    /// matrices[g] is the image of element g
    pub matrices: Vec<DMatrix<Complex64>>,
}

pub fn explicit_irreps(
    group: &FiniteGroup,
    table: &CharacterTable,
) -> Result<Vec<ExplicitIrrep>, RepError> {
    explicit_irreps_seeded(group, table, crate::DEFAULT_SEED)
}

pub fn explicit_irreps_seeded(
    group: &FiniteGroup,
    table: &CharacterTable,
    seed: u64,
) -> Result<Vec<ExplicitIrrep>, RepError> {
    let n = group.order();
    (0..table.num_irreps())
        .map(|row| {
            let d = table.degrees[row] as usize;
            if d == 1 {
                let matrices = (0..n)
                    .map(|g| DMatrix::from_element(1, 1, table.value(row, g)))
                    .collect();
                return Ok(ExplicitIrrep { row, dim: 1, matrices });
            }
            isotypic_split(group, table, row, d, seed)
        })
        .collect()
}

fn isotypic_split(
    group: &FiniteGroup,
    table: &CharacterTable,
    row: usize,
    d: usize,
    seed: u64,
) -> Result<ExplicitIrrep, RepError> {
    let n = group.order();
    // central idempotent of the character in the left regular representation
    let mut proj = DMatrix::<Complex64>::zeros(n, n);
    for g in group.elements() {
        let coeff = table.value(row, g).conj() * d as f64 / n as f64;
        for x in group.elements() {
            proj[(group.mul(g, x), x)] += coeff;
        }
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(proj);
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    if keep.len() != d * d {
        return Err(RepError::SplitFailure(d as u64, 0));
    }
    let basis = DMatrix::<Complex64>::from_fn(n, d * d, |r, c| eig.eigenvectors[(r, keep[c])]);

    for attempt in 0..RESEED_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(0xABCD)
                .wrapping_add(attempt as u64)
                .wrapping_add((row as u64) << 8),
        );
        // random Hermitian element of the commutant (right multiplications)
        let mut comm = DMatrix::<Complex64>::zeros(n, n);
        for h in group.elements() {
            let gamma = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            for x in group.elements() {
                comm[(group.mul(x, h), x)] += gamma;
                comm[(x, group.mul(x, h))] += gamma.conj();
            }
        }
        let block = basis.adjoint() * &comm * &basis;
        let eig = nalgebra::linalg::SymmetricEigen::new(block);
        let mut idx: Vec<usize> = (0..d * d).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let scale = idx.iter().map(|&i| eig.eigenvalues[i].abs()).fold(1.0, f64::max);
        // the lowest eigenvalue must carry multiplicity exactly d
        let cluster_tight =
            (eig.eigenvalues[idx[d - 1]] - eig.eigenvalues[idx[0]]).abs() < 1e-9 * scale;
        let gap_clear =
            (eig.eigenvalues[idx[d]] - eig.eigenvalues[idx[d - 1]]).abs() > 1e-7 * scale;
        if !cluster_tight || !gap_clear {
            continue;
        }
        let sub = DMatrix::<Complex64>::from_fn(d * d, d, |r, c| eig.eigenvectors[(r, idx[c])]);
        let q = &basis * sub;
        let matrices: Vec<DMatrix<Complex64>> = group
            .elements()
            .map(|g| {
                let mut lg_q = DMatrix::<Complex64>::zeros(n, d);
                for x in group.elements() {
                    let gx = group.mul(g, x);
                    for c in 0..d {
                        lg_q[(gx, c)] += q[(x, c)];
                    }
                }
                q.adjoint() * lg_q
            })
            .collect();
        if verify_irrep(group, table, row, d, &matrices) {
            return Ok(ExplicitIrrep { row, dim: d, matrices });
        }
    }
    Err(RepError::SplitFailure(d as u64, RESEED_ATTEMPTS))
}

fn verify_irrep(
    group: &FiniteGroup,
    table: &CharacterTable,
    row: usize,
    d: usize,
    matrices: &[DMatrix<Complex64>],
) -> bool {
    let id = DMatrix::<Complex64>::identity(d, d);
    for g in group.elements() {
        if ((&matrices[g] * matrices[g].adjoint()) - &id).norm() > 1e-8 {
            return false;
        }
        let trace: Complex64 = matrices[g].diagonal().iter().sum();
        if (trace - table.value(row, g)).norm() > 1e-8 {
            return false;
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            if ((&matrices[g] * &matrices[h]) - &matrices[group.mul(g, h)]).norm() > 1e-8 {
                return false;
            }
        }
    }
    true
}

/// Restriction-and-rescaling of a character to a central subgroup:
/// `lambda(z) * chi(1) = chi(z)`, snapped to exact exponent form.
pub fn central_character(
    group: &FiniteGroup,
    table: &CharacterTable,
    row: usize,
    central: &AbelianStructure,
) -> Result<AbCharacter, RepError> {
    for &z in &central.elements {
        if group.elements().any(|g| group.mul(z, g) != group.mul(g, z)) {
            return Err(RepError::NotCentral);
        }
    }
    let deg = table.degrees[row] as f64;
    let exps = central
        .generators
        .iter()
        .zip(&central.orders)
        .map(|(&z, &d)| {
            let scalar = table.value(row, z) / deg;
            let p = snap_to_root(scalar, d, crate::TOL_SNAP)
                .expect("a central element acts by a root of unity of order dividing its own");
            (p.numerator() * (d as i64 / p.denominator())).rem_euclid(d as i64) as u64
        })
        .collect();
    Ok(AbCharacter { orders: central.orders.clone(), exps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::group::{center, conjugacy_data, Subgroup};

    fn table_for(name: &str) -> (std::sync::Arc<FiniteGroup>, ConjugacyData, CharacterTable) {
        let g = catalog(name).unwrap().group;
        let conj = conjugacy_data(&g);
        let t = character_table(&g, &conj).unwrap();
        (g, conj, t)
    }

    #[test]
    fn degrees_of_small_groups() {
        let (_, _, t) = table_for("Z3");
        assert_eq!(t.degrees, vec![1, 1, 1]);
        assert!(t.rows.iter().flatten().all(|z| (z.norm() - 1.0).abs() < 1e-9));

        let (_, _, t) = table_for("S3");
        assert_eq!(t.degrees, vec![1, 1, 2]);

        let (_, _, t) = table_for("Q8");
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);

        let (_, _, t) = table_for("S4");
        assert_eq!(t.degrees, vec![1, 1, 2, 3, 3]);

        let (_, _, t) = table_for("Zp_rtimes_Z16:p=3");
        assert_eq!(t.degrees.iter().filter(|&&d| d == 1).count(), 16);
        assert_eq!(t.degrees.iter().filter(|&&d| d == 2).count(), 8);
    }

    #[test]
    fn column_bound_and_first_column() {
        for name in ["S3", "S4", "D4", "Q8"] {
            let (_, _, t) = table_for(name);
            for (r, row) in t.rows.iter().enumerate() {
                assert_eq!(row[0].re.round() as u64, t.degrees[r]);
                assert!(row[0].im.abs() < 1e-9);
                for z in row {
                    assert!(z.norm() <= t.degrees[r] as f64 + 1e-8);
                }
            }
        }
    }

    #[test]
    fn tables_are_deterministic() {
        let g = catalog("S4").unwrap().group;
        let conj = conjugacy_data(&g);
        let t1 = character_table(&g, &conj).unwrap();
        let t2 = character_table(&g, &conj).unwrap();
        for (r1, r2) in t1.rows.iter().zip(&t2.rows) {
            for (a, b) in r1.iter().zip(r2) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn explicit_irreps_are_homomorphisms() {
        for name in ["S3", "D4", "Q8", "S4"] {
            let (g, _, t) = table_for(name);
            let irreps = explicit_irreps(&g, &t).unwrap();
            for irrep in &irreps {
                for a in g.elements() {
                    for b in g.elements() {
                        let prod = &irrep.matrices[a] * &irrep.matrices[b];
                        assert!((prod - &irrep.matrices[g.mul(a, b)]).norm() < 1e-8, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn sign_irrep_of_s3_is_parity() {
        let (g, conj, t) = table_for("S3");
        let irreps = explicit_irreps(&g, &t).unwrap();
        // row 1 is the sign character (degree 1, not trivial)
        let sign = &irreps[1];
        for x in g.elements() {
            let expected = t.rows[1][conj.class_of(x)];
            assert!((sign.matrices[x][(0, 0)] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn central_characters() {
        let (g, _, t) = table_for("Q8");
        let z = center(&g);
        let central = crate::abelian::abelian_structure(&g, &z).unwrap();
        let triv = central_character(&g, &t, 0, &central).unwrap();
        assert!(triv.is_trivial());
        // the 2-dimensional irrep sends -1 to the scalar -1
        let two = t.degrees.iter().position(|&d| d == 2).unwrap();
        let lam = central_character(&g, &t, two, &central).unwrap();
        let minus_one = central.generators[0];
        assert_eq!(g.element_order(minus_one), 2);
        assert_eq!(lam.eval(central.coords(minus_one)), crate::phase::Phase::new(1, 2));
        // linear characters restrict by plain restriction
        let lin = central_character(&g, &t, 1, &central).unwrap();
        let direct = t.value(1, minus_one);
        assert!((lin.eval(central.coords(minus_one)).to_complex() - direct).norm() < 1e-9);
    }

    #[test]
    fn not_central_rejected() {
        let (g, _, t) = table_for("S3");
        let refl = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let sub = Subgroup::generated(&g, &[refl]);
        let st = crate::abelian::abelian_structure(&g, &sub).unwrap();
        assert!(matches!(central_character(&g, &t, 0, &st), Err(RepError::NotCentral)));
    }
}
