//! Exact fixed points of the Hurwitz action of a braid, their intersection
//! indices, and the signed count λ.
//!
//! Fixed points are solved on the gauge slice with multi-start damped
//! Gauss–Newton and only afterwards grouped into conjugacy classes. Solving
//! `β(X) = X` exactly (not up to conjugation) keeps the one-parameter
//! families of twisted solutions `β(X) = gXg⁻¹` out of the answer.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{require_knot, BraidWord};
use crate::error::{Error, Result};
use crate::lattice::coplanar_fixed_angles;
use crate::rep::{
    fingerprint, gauge_fix, hurwitz, hurwitz_vecs, hurwitz_with_tangents, is_irreducible,
    product, second_singular_value, slice_representative, tangent_basis, Configuration,
    Fingerprint, IRREDUCIBLE_TOL,
};
use crate::su2::{align, qmul, Quaternion};

/// Orientation anchor: chosen once so that the right-handed trefoil
/// `σ_1³` gets `λ = signature/2 = −1`.
pub const INDEX_CALIBRATION: i32 = -1;
/// Smallest singular value below which an intersection is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Residual above which a record is not treated as a solution at all.
const NON_SOLUTION_TOL: f64 = 1e-8;
/// Largest denominator used by the coplanar seed family.
pub const COPLANAR_MAX_DEN: i128 = 64;
const COPLANAR_CAP: usize = 4096;
const MAX_HALVINGS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub seeds: usize,
    pub max_iters: usize,
    pub residual_tol: f64,
    pub dedup_tol: f64,
    pub fd_step: f64,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seeds: 4000,
            max_iters: 80,
            residual_tol: 1e-11,
            dedup_tol: 1e-6,
            fd_step: 1e-6,
            rng_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {v}")))
            }
        };
        positive("residual_tol", self.residual_tol)?;
        positive("dedup_tol", self.dedup_tol)?;
        positive("fd_step", self.fd_step)?;
        if self.seeds == 0 {
            return Err(Error::Domain("seeds must be at least 1".into()));
        }
        Ok(())
    }
}

/// Local intersection sign of a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Index {
    #[serde(rename = "+1")]
    Positive,
    #[serde(rename = "-1")]
    Negative,
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl Index {
    pub fn value(self) -> Option<i64> {
        match self {
            Index::Positive => Some(1),
            Index::Negative => Some(-1),
            Index::Degenerate => None,
        }
    }

    fn from_sign(s: f64) -> Self {
        if s > 0.0 {
            Index::Positive
        } else {
            Index::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointRecord {
    /// Slice representative of the class.
    pub config: Configuration,
    /// Euclidean norm of `β(X) − X`.
    pub residual: f64,
    pub index: Index,
    pub fingerprint: Fingerprint,
    /// Smallest singular value of the represented `Dβ − I`.
    pub min_singular_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassCounts {
    pub total: usize,
    pub essential: usize,
    pub degenerate: usize,
}

/// `lower = |λ|`, `upper = #essential classes`. The Nielsen number of the
/// induced map lies in between; it is never reported as a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NielsenBracket {
    pub lower: u64,
    pub upper: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaResult {
    /// `None` when some class is degenerate.
    pub lambda: Option<i64>,
    pub records: Vec<FixedPointRecord>,
    pub counts: ClassCounts,
    pub nielsen_bracket: NielsenBracket,
}

impl LambdaResult {
    pub fn is_degenerate(&self) -> bool {
        self.lambda.is_none()
    }
}

/// Working state of one Gauss–Newton run: a slice point.
struct SliceState {
    v: Vec<Vector3<f64>>,
    pivot: usize,
}

impl SliceState {
    fn from_config(c: &Configuration) -> Option<Self> {
        let (s, _) = gauge_fix(c).ok()?;
        let v = slice_representative(c).ok()?.vectors();
        Some(Self { v, pivot: s.pivot })
    }

    /// Directions spanning the slice tangent space: the in-plane rotation
    /// of the pivot, then two sphere tangents per free vector.
    fn directions(&self) -> Vec<(usize, Vector3<f64>)> {
        let n = self.v.len();
        let mut dirs = Vec::with_capacity(2 * n - 3);
        let p = self.v[self.pivot];
        dirs.push((self.pivot, Vector3::new(-p.y, p.x, 0.0).normalize()));
        for k in 1..n {
            if k != self.pivot {
                let (t1, t2) = tangent_basis(&self.v[k]);
                dirs.push((k, t1));
                dirs.push((k, t2));
            }
        }
        dirs
    }

    fn stepped(&self, dirs: &[(usize, Vector3<f64>)], step: &DVector<f64>) -> Option<Self> {
        let mut v = self.v.clone();
        let (phi0, dphi) = (self.v[self.pivot].y.atan2(self.v[self.pivot].x), step[0]);
        v[self.pivot] = Vector3::new((phi0 + dphi).cos(), (phi0 + dphi).sin(), 0.0);
        let mut delta = vec![Vector3::zeros(); v.len()];
        for (c, (k, d)) in dirs.iter().enumerate().skip(1) {
            delta[*k] += step[c] * d;
        }
        for (k, dv) in delta.iter().enumerate() {
            if k != 0 && k != self.pivot {
                let moved = v[k] + dv;
                v[k] = moved / moved.norm();
            }
        }
        let c = Configuration::from_vectors(&v).ok()?;
        if !is_irreducible(&c, IRREDUCIBLE_TOL) {
            return None;
        }
        Self::from_config(&c)
    }
}

fn residual_vec(letters: &[i32], v: &[Vector3<f64>]) -> DVector<f64> {
    let mut w = v.to_vec();
    hurwitz_vecs(letters, &mut w);
    let diffs: Vec<Vector3<f64>> = w.iter().zip(v).map(|(a, b)| a - b).collect();
    DVector::from_iterator(3 * v.len(), diffs.iter().flat_map(|d| [d.x, d.y, d.z]))
}

fn jacobian(letters: &[i32], s: &SliceState, dirs: &[(usize, Vector3<f64>)]) -> DMatrix<f64> {
    let n = s.v.len();
    let mut tangents: Vec<Vec<Vector3<f64>>> = dirs
        .iter()
        .map(|(k, d)| {
            let mut t = vec![Vector3::zeros(); n];
            t[*k] = *d;
            t
        })
        .collect();
    let mut base = s.v.clone();
    hurwitz_with_tangents(letters, &mut base, &mut tangents);
    let mut j = DMatrix::zeros(3 * n, dirs.len());
    for (c, (t, (k, d))) in tangents.iter().zip(dirs).enumerate() {
        for (l, tv) in t.iter().enumerate() {
            let mut col = *tv;
            if l == *k {
                col -= d;
            }
            for r in 0..3 {
                j[(3 * l + r, c)] = col[r];
            }
        }
    }
    j
}

/// Damped Gauss–Newton from one seed; returns the converged slice point.
fn newton(letters: &[i32], seed: &Configuration, cfg: &SolverConfig) -> Option<(Configuration, f64)> {
    let mut state = SliceState::from_config(seed)?;
    let mut r = residual_vec(letters, &state.v);
    let mut norm = r.norm();
    for _ in 0..cfg.max_iters {
        if norm < cfg.residual_tol {
            break;
        }
        let dirs = state.directions();
        let j = jacobian(letters, &state, &dirs);
        let svd = j.svd(true, true);
        let step = svd.solve(&(-&r), 1e-14).ok()?;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            if let Some(next) = state.stepped(&dirs, &(&step * scale)) {
                let rn = residual_vec(letters, &next.v);
                if rn.norm() < norm {
                    accepted = Some((next, rn));
                    break;
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((next, rn)) => {
                state = next;
                norm = rn.norm();
                r = rn;
            }
            None => break,
        }
    }
    let c = Configuration::from_vectors(&state.v).ok()?;
    (norm <= cfg.residual_tol && is_irreducible(&c, IRREDUCIBLE_TOL)).then_some((c, norm))
}

fn random_configuration(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let vs: Vec<Vector3<f64>> = (0..n)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).sqrt();
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect();
    Configuration::from_vectors(&vs).expect("unit vectors")
}

/// Exactly fixed coplanar tuples: the binary dihedral candidates.
pub fn coplanar_seeds(b: &BraidWord) -> Vec<Configuration> {
    let Some(sols) = coplanar_fixed_angles(b, COPLANAR_MAX_DEN, COPLANAR_CAP) else {
        return Vec::new();
    };
    sols.into_iter()
        .map(|(nums, den)| {
            let angles: Vec<f64> = nums
                .iter()
                .map(|&k| 2.0 * PI * (k as f64) / (den as f64))
                .collect();
            Configuration::planar(&angles)
        })
        .filter(|c| is_irreducible(c, IRREDUCIBLE_TOL))
        .collect()
}

/// All seeds in a fixed order: coplanar family first, then random ones.
fn seed_configurations(b: &BraidWord, cfg: &SolverConfig) -> Vec<Configuration> {
    let n = b.strands();
    let mut seeds = coplanar_seeds(b);
    seeds.extend((0..cfg.seeds).map(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(k as u64);
        random_configuration(n, &mut rng)
    }));
    seeds
}

/// Converged irreducible solutions of `β(X) = X` on the slice, one per
/// conjugacy class, sorted by fingerprint, each with its index.
pub fn solve_fixed_points(b: &BraidWord, cfg: &SolverConfig) -> Result<Vec<FixedPointRecord>> {
    cfg.validate()?;
    let n = b.strands();
    if n < 2 {
        return Ok(Vec::new());
    }
    let letters = b.letters();
    let seeds = seed_configurations(b, cfg);
    let solutions: Vec<Option<(Configuration, f64)>> =
        seeds.par_iter().map(|s| newton(letters, s, cfg)).collect();

    let mut classes: Vec<(Configuration, f64, Fingerprint)> = Vec::new();
    for (c, res) in solutions.into_iter().flatten() {
        let fp = fingerprint(&c);
        let seen = classes.iter().any(|(other, _, ofp)| {
            ofp.distance(&fp) < cfg.dedup_tol
                && align(other.elems(), c.elems()).is_ok_and(|(_, d)| d.sqrt() < cfg.dedup_tol)
        });
        if !seen {
            classes.push((c, res, fp));
        }
    }
    classes.sort_by(|a, b| a.2.lex_cmp(&b.2));
    classes
        .into_iter()
        .map(|(config, residual, fingerprint)| {
            let (index, min_singular_value) = index_with_margin(b, &config, cfg.fd_step)?;
            Ok(FixedPointRecord {
                config,
                residual,
                index,
                fingerprint,
                min_singular_value,
            })
        })
        .collect()
}

/// Coordinates of a per-sphere tangent field in the `(t1, t2)` bases.
fn tangent_coords(bases: &[(Vector3<f64>, Vector3<f64>)], field: &[Vector3<f64>]) -> DVector<f64> {
    DVector::from_iterator(
        2 * bases.len(),
        bases
            .iter()
            .zip(field)
            .flat_map(|((t1, t2), v)| [v.dot(t1), v.dot(t2)]),
    )
}

/// Orthonormal basis of the orthogonal complement of the column span of `a`
/// (of full column rank) inside `R^m`.
fn orthogonal_complement(a: &DMatrix<f64>) -> DMatrix<f64> {
    let m = a.nrows();
    let gram = a.transpose() * a;
    let inv = gram.try_inverse().expect("full column rank");
    let proj = DMatrix::identity(m, m) - a * inv * a.transpose();
    let eig = SymmetricEigen::new(proj);
    let cols: Vec<DVector<f64>> = (0..m)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}

/// Flips the first column of `basis` if `[lead | basis]` (or
/// `[basis | tail]`) is negatively oriented.
fn orient(basis: &mut DMatrix<f64>, lead: Option<&DMatrix<f64>>, tail: Option<&DMatrix<f64>>) {
    let mut cols: Vec<DVector<f64>> = Vec::new();
    if let Some(l) = lead {
        cols.extend(l.column_iter().map(|c| c.into_owned()));
    }
    cols.extend(basis.column_iter().map(|c| c.into_owned()));
    if let Some(t) = tail {
        cols.extend(t.column_iter().map(|c| c.into_owned()));
    }
    if DMatrix::from_columns(&cols).determinant() < 0.0 {
        let mut c0 = basis.column_mut(0);
        c0.neg_mut();
    }
}

/// How the differential of the braid action is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Differential {
    /// Central differences with the given step.
    CentralDifference(f64),
    /// Exact pushforward through the reflection formula.
    Analytic,
}

/// `Dβ` at `x` in the per-sphere tangent bases (a `2n × 2n` matrix).
fn braid_differential(
    letters: &[i32],
    x: &[Vector3<f64>],
    bases: &[(Vector3<f64>, Vector3<f64>)],
    mode: Differential,
) -> DMatrix<f64> {
    let n = x.len();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for (k, t) in [bases[j].0, bases[j].1].iter().enumerate() {
            let col = match mode {
                Differential::CentralDifference(h) => {
                    let push = |s: f64| {
                        let mut w = x.to_vec();
                        let moved = w[j] + s * t;
                        w[j] = moved / moved.norm();
                        hurwitz_vecs(letters, &mut w);
                        w
                    };
                    let (plus, minus) = (push(h), push(-h));
                    let diff: Vec<Vector3<f64>> =
                        plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect();
                    tangent_coords(bases, &diff)
                }
                Differential::Analytic => {
                    let mut w = x.to_vec();
                    let mut tan = vec![vec![Vector3::zeros(); n]];
                    tan[0][j] = *t;
                    hurwitz_with_tangents(letters, &mut w, &mut tan);
                    tangent_coords(bases, &tan[0])
                }
            };
            d.set_column(2 * j + k, &col);
        }
    }
    d
}

/// Left-translated differential of the product map, `3 × 2n`.
fn product_differential(x: &[Vector3<f64>], bases: &[(Vector3<f64>, Vector3<f64>)]) -> DMatrix<f64> {
    let n = x.len();
    let c = Configuration::from_vectors(x).expect("unit vectors");
    let mu_inv = product(&c).inverse();
    let mut m = DMatrix::zeros(3, 2 * n);
    for j in 0..n {
        for (k, t) in [bases[j].0, bases[j].1].iter().enumerate() {
            let dmu = x.iter().enumerate().fold(Quaternion::ONE, |acc, (i, v)| {
                let f = if i == j { Quaternion::pure(t) } else { Quaternion::pure(v) };
                qmul(&acc, &f)
            });
            let lt = qmul(&mu_inv, &dmu);
            m[(0, 2 * j + k)] = lt.x;
            m[(1, 2 * j + k)] = lt.y;
            m[(2, 2 * j + k)] = lt.z;
        }
    }
    m
}

/// Sign and smallest singular value of `Dβ − I` as a map from the tangent
/// space modulo the gauge orbit to the kernel of the product differential.
pub fn oriented_index(b: &BraidWord, x: &Configuration, mode: Differential) -> Result<(Index, f64)> {
    if b.strands() != x.n() {
        return Err(Error::StrandMismatch {
            expected: b.strands(),
            found: x.n(),
        });
    }
    if !is_irreducible(x, IRREDUCIBLE_TOL) {
        return Err(Error::Domain(format!(
            "reducible configuration (second singular value {:e})",
            second_singular_value(x)
        )));
    }
    let image = hurwitz(b, x)?;
    let res = image.distance(x);
    if res > NON_SOLUTION_TOL {
        return Err(Error::Domain(format!("not a fixed point (residual {res:e})")));
    }
    let v = x.vectors();
    let n = v.len();
    let bases: Vec<_> = v.iter().map(tangent_basis).collect();

    let lin = braid_differential(b.letters(), &v, &bases, mode) - DMatrix::identity(2 * n, 2 * n);

    let orbit_fields: Vec<DVector<f64>> = [Vector3::x(), Vector3::y(), Vector3::z()]
        .iter()
        .map(|e| {
            let field: Vec<Vector3<f64>> = v.iter().map(|vi| e.cross(vi)).collect();
            tangent_coords(&bases, &field)
        })
        .collect();
    let orbit = DMatrix::from_columns(&orbit_fields);
    let mut complement = orthogonal_complement(&orbit);
    orient(&mut complement, Some(&orbit), None);

    let dmu = product_differential(&v, &bases);
    let preimage = dmu
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|e| Error::Internal(format!("pseudo-inverse failed: {e}")))?;
    let mut kernel = orthogonal_complement(&dmu.transpose());
    orient(&mut kernel, None, Some(&preimage));

    let represented = kernel.transpose() * lin * complement;
    let smin = represented
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smin < DEGENERACY_TOL {
        return Ok((Index::Degenerate, smin));
    }
    let raw = represented.determinant().signum() * f64::from(INDEX_CALIBRATION);
    Ok((Index::from_sign(raw), smin))
}

fn index_with_margin(b: &BraidWord, x: &Configuration, h: f64) -> Result<(Index, f64)> {
    oriented_index(b, x, Differential::CentralDifference(h))
}

/// Index of a solved record, recomputed with `cfg.fd_step`.
pub fn intersection_index(b: &BraidWord, r: &FixedPointRecord, cfg: &SolverConfig) -> Result<Index> {
    Ok(index_with_margin(b, &r.config, cfg.fd_step)?.0)
}

/// Signed count of the fixed classes of a knot braid.
pub fn casson_lin(b: &BraidWord, cfg: &SolverConfig) -> Result<LambdaResult> {
    require_knot(b)?;
    let records = solve_fixed_points(b, cfg)?;
    Ok(summarize(records))
}

pub(crate) fn summarize(records: Vec<FixedPointRecord>) -> LambdaResult {
    let degenerate = records.iter().filter(|r| r.index == Index::Degenerate).count();
    let essential = records.len() - degenerate;
    let lambda = (degenerate == 0).then(|| records.iter().filter_map(|r| r.index.value()).sum::<i64>());
    LambdaResult {
        lambda,
        counts: ClassCounts {
            total: records.len(),
            essential,
            degenerate,
        },
        nielsen_bracket: NielsenBracket {
            lower: lambda.map_or(0, |l| l.unsigned_abs()),
            upper: essential as u64,
        },
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    fn quick() -> SolverConfig {
        SolverConfig {
            seeds: 200,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn unknot_has_no_classes() {
        let b = parse_braid("1", None).unwrap();
        assert!(solve_fixed_points(&b, &quick()).unwrap().is_empty());
        let r = casson_lin(&b, &quick()).unwrap();
        assert_eq!(r.lambda, Some(0));
        assert_eq!(r.nielsen_bracket, NielsenBracket { lower: 0, upper: 0 });
    }

    #[test]
    fn trefoil_single_class() {
        let b = parse_braid("1 1 1", None).unwrap();
        let recs = solve_fixed_points(&b, &quick()).unwrap();
        assert_eq!(recs.len(), 1);
        assert!((recs[0].fingerprint.0[0] + 0.5).abs() < 1e-9);
        assert_eq!(recs[0].index, Index::Negative);
        assert!(recs[0].residual <= 1e-11);
    }

    #[test]
    fn link_rejected() {
        let b = parse_braid("1 1", None).unwrap();
        assert!(matches!(casson_lin(&b, &quick()), Err(Error::NotAKnot { .. })));
    }

    #[test]
    fn analytic_and_fd_indices_agree() {
        let b = parse_braid("1 -2 1 -2", None).unwrap();
        for r in solve_fixed_points(&b, &quick()).unwrap() {
            let (a, sa) = oriented_index(&b, &r.config, Differential::Analytic).unwrap();
            let (f, sf) = oriented_index(&b, &r.config, Differential::CentralDifference(1e-6)).unwrap();
            assert_eq!(a, f);
            assert!((sa - sf).abs() < 1e-6);
        }
    }

    #[test]
    fn index_rejects_non_solutions() {
        let b = parse_braid("1 1 1", None).unwrap();
        let twisted = Configuration::planar(&[0.0, 1.0]);
        assert!(oriented_index(&b, &twisted, Differential::Analytic).is_err());
        let reducible = Configuration::planar(&[0.0, 0.0]);
        assert!(oriented_index(&b, &reducible, Differential::Analytic).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            residual_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            seeds: 0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
