//! Tuples of traceless elements: the Hurwitz action of braids, the product
//! map, reducibility, the gauge slice and conjugation-invariant fingerprints.

use nalgebra::{DMatrix, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::su2::{qmul, reflect_vec, rotate, Quaternion, TracelessElement};

/// Default second-singular-value threshold for irreducibility.
pub const IRREDUCIBLE_TOL: f64 = 1e-8;
/// Default tolerance for slice encode/decode round trips.
pub const SLICE_TOL: f64 = 1e-10;
/// A vector counts as off the `v_1` axis (and may be planarized) above this.
const PIVOT_TOL: f64 = 1e-6;

/// A point of the space of `n`-tuples of traceless elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration {
    elems: Vec<TracelessElement>,
}

impl Configuration {
    pub fn new(elems: Vec<TracelessElement>) -> Self {
        Self { elems }
    }

    /// Normalizes each vector.
    pub fn from_vectors(vs: &[Vector3<f64>]) -> Result<Self> {
        let elems = vs
            .iter()
            .map(|v| TracelessElement::new(*v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { elems })
    }

    /// All elements in the xy-plane at the given angles.
    pub fn planar(angles: &[f64]) -> Self {
        Self {
            elems: angles.iter().map(|&t| TracelessElement::planar(t)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[TracelessElement] {
        &self.elems
    }

    pub fn vectors(&self) -> Vec<Vector3<f64>> {
        self.elems.iter().map(|e| e.0).collect()
    }

    pub(crate) fn from_vectors_unchecked(vs: Vec<Vector3<f64>>) -> Self {
        Self {
            elems: vs.into_iter().map(TracelessElement::new_unchecked).collect(),
        }
    }

    /// Simultaneous conjugation by a unit quaternion.
    pub fn conjugated(&self, g: &Quaternion) -> Configuration {
        let g = g.normalized();
        Self {
            elems: self.elems.iter().map(|t| rotate(&g, t)).collect(),
        }
    }

    /// Largest coordinate difference to `other` (no gauge freedom).
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.elems
            .iter()
            .zip(&other.elems)
            .map(|(a, b)| (a.0 - b.0).amax())
            .fold(0.0, f64::max)
    }

    /// Appends one element; used by stabilization.
    pub fn extended(&self, t: TracelessElement) -> Configuration {
        let mut elems = self.elems.clone();
        elems.push(t);
        Self { elems }
    }

    pub fn truncated(&self, n: usize) -> Configuration {
        Self {
            elems: self.elems[..n].to_vec(),
        }
    }
}

/// A pair of tuples with equal products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: Configuration,
    pub y: Configuration,
}

impl HPoint {
    pub fn new(x: Configuration, y: Configuration) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::StrandMismatch {
                expected: x.n(),
                found: y.n(),
            });
        }
        let gap = product(&x).distance(&product(&y));
        if gap > 1e-9 {
            return Err(Error::Domain(format!("products differ by {gap:e}")));
        }
        Ok(Self { x, y })
    }
}

#[inline]
pub(crate) fn apply_letter(g: i32, v: &mut [Vector3<f64>]) {
    let i = g.unsigned_abs() as usize - 1;
    let (a, b) = (v[i], v[i + 1]);
    if g > 0 {
        v[i] = reflect_vec(&a, &b);
        v[i + 1] = a;
    } else {
        v[i] = b;
        v[i + 1] = reflect_vec(&b, &a);
    }
}

/// Hurwitz action on raw vectors, letters left to right.
pub(crate) fn hurwitz_vecs(letters: &[i32], v: &mut [Vector3<f64>]) {
    for &g in letters {
        apply_letter(g, v);
    }
}

/// Pushes a base point together with a batch of tangent vectors through the
/// word. `tangents[k]` is a full `n`-vector of 3-vectors.
pub(crate) fn hurwitz_with_tangents(
    letters: &[i32],
    v: &mut [Vector3<f64>],
    tangents: &mut [Vec<Vector3<f64>>],
) {
    for &g in letters {
        let i = g.unsigned_abs() as usize - 1;
        let (a, b) = (v[i], v[i + 1]);
        // d(2(u·w)u − w) = 2(du·w + u·dw)u + 2(u·w)du − dw
        if g > 0 {
            let ab = a.dot(&b);
            for t in tangents.iter_mut() {
                let (da, db) = (t[i], t[i + 1]);
                t[i] = 2.0 * (da.dot(&b) + a.dot(&db)) * a + 2.0 * ab * da - db;
                t[i + 1] = da;
            }
            v[i] = 2.0 * ab * a - b;
            v[i + 1] = a;
        } else {
            let ba = b.dot(&a);
            for t in tangents.iter_mut() {
                let (da, db) = (t[i], t[i + 1]);
                t[i] = db;
                t[i + 1] = 2.0 * (db.dot(&a) + b.dot(&da)) * b + 2.0 * ba * db - da;
            }
            v[i] = b;
            v[i + 1] = 2.0 * ba * b - a;
        }
    }
}

/// Braid action on tuples: `σ_i` sends `(…, v_i, v_{i+1}, …)` to
/// `(…, v_i v_{i+1} v_i^{-1}, v_i, …)`.
pub fn hurwitz(b: &BraidWord, c: &Configuration) -> Result<Configuration> {
    if b.strands() != c.n() {
        return Err(Error::StrandMismatch {
            expected: b.strands(),
            found: c.n(),
        });
    }
    let mut v = c.vectors();
    hurwitz_vecs(b.letters(), &mut v);
    Ok(Configuration::from_vectors_unchecked(v))
}

/// Ordered product `X_1 X_2 ⋯ X_n`.
pub fn product(c: &Configuration) -> Quaternion {
    c.elems
        .iter()
        .fold(Quaternion::ONE, |acc, t| qmul(&acc, &t.quaternion()))
}

/// Second singular value of the 3×n matrix of vectors.
pub fn second_singular_value(c: &Configuration) -> f64 {
    if c.n() < 2 {
        return 0.0;
    }
    let m = DMatrix::from_fn(3, c.n(), |r, k| c.elems[k].0[r]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s[1]
}

/// True iff the vectors do not all share one axis.
pub fn is_irreducible(c: &Configuration, tol: f64) -> bool {
    second_singular_value(c) > tol
}

/// Gauge-fixed coordinates: `v_1 = (1,0,0)`, the first vector off that axis
/// (index `pivot`) in the upper half of the xy-plane, the rest free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    /// 0-based index of the planarized vector.
    pub pivot: usize,
    /// Pivot angle in `(0, π)`, then `(azimuth, polar)` for every other
    /// vector after the first, in index order. Length `2n − 3`.
    pub params: Vec<f64>,
}

impl SlicePoint {
    pub fn decode(&self) -> Configuration {
        let n = (self.params.len() + 3) / 2;
        let mut vs = Vec::with_capacity(n);
        vs.push(Vector3::new(1.0, 0.0, 0.0));
        let mut rest = self.params[1..].chunks_exact(2);
        for k in 1..n {
            if k == self.pivot {
                let phi = self.params[0];
                vs.push(Vector3::new(phi.cos(), phi.sin(), 0.0));
            } else {
                let p = rest.next().expect("slice parameter count");
                let (az, pol) = (p[0], p[1]);
                vs.push(Vector3::new(pol.sin() * az.cos(), pol.sin() * az.sin(), pol.cos()));
            }
        }
        Configuration::from_vectors_unchecked(vs)
    }
}

fn rotation_to_x(v: &Vector3<f64>) -> Quaternion {
    let ex = Vector3::x();
    match UnitQuaternion::rotation_between(v, &ex) {
        Some(q) => Quaternion::from_unit(&q),
        // antiparallel: half-turn about z
        None => Quaternion::K,
    }
}

/// Rotates `c` into the slice. Returns slice coordinates and the rotation
/// `g` with `conj(g, c)` equal to the decoded slice point.
pub fn gauge_fix(c: &Configuration) -> Result<(SlicePoint, Quaternion)> {
    if !is_irreducible(c, IRREDUCIBLE_TOL) {
        return Err(Error::Domain("reducible configuration has no slice point".into()));
    }
    let g1 = rotation_to_x(&c.elems[0].0);
    let rotated: Vec<Vector3<f64>> = c.elems.iter().map(|t| rotate(&g1, t).0).collect();
    let off_axis = |v: &Vector3<f64>| v.y.hypot(v.z);
    let pivot = (1..c.n())
        .find(|&k| off_axis(&rotated[k]) > PIVOT_TOL)
        .or_else(|| {
            (1..c.n()).max_by(|&a, &b| off_axis(&rotated[a]).total_cmp(&off_axis(&rotated[b])))
        })
        .expect("n >= 2 for irreducible input");
    let p = rotated[pivot];
    // rotate about x so that (y, z) of the pivot lands on (+r, 0)
    let theta = -p.z.atan2(p.y);
    let g2 = Quaternion::new((theta / 2.0).cos(), (theta / 2.0).sin(), 0.0, 0.0);
    let g = qmul(&g2, &g1).normalized();
    let fixed: Vec<Vector3<f64>> = c.elems.iter().map(|t| rotate(&g, t).0).collect();

    let mut params = Vec::with_capacity(2 * c.n() - 3);
    params.push(fixed[pivot].y.atan2(fixed[pivot].x));
    for (k, v) in fixed.iter().enumerate().skip(1) {
        if k == pivot {
            continue;
        }
        params.push(v.y.atan2(v.x));
        params.push(v.x.hypot(v.y).atan2(v.z));
    }
    Ok((SlicePoint { pivot, params }, g))
}

/// Slice representative of the conjugacy class of `c`.
pub fn slice_representative(c: &Configuration) -> Result<Configuration> {
    let (s, g) = gauge_fix(c)?;
    // pin the first vector and the pivot plane exactly
    let mut vs = c.conjugated(&g).vectors();
    vs[0] = Vector3::x();
    vs[s.pivot].z = 0.0;
    let norm = vs[s.pivot].norm();
    vs[s.pivot] /= norm;
    Ok(Configuration::from_vectors_unchecked(vs))
}

/// Orthonormal tangent basis `(t1, t2)` at unit `v` with `t1 × t2 = v`.
pub(crate) fn tangent_basis(v: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if v.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let t1 = v.cross(&helper).normalize();
    let t2 = v.cross(&t1);
    (t1, t2)
}

/// Pairwise dot products `v_i·v_j` (i < j), then `v_1·(v_2 × v_j)` for `j ≥ 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fingerprint(pub Vec<f64>);

impl Fingerprint {
    /// Largest componentwise difference.
    pub fn distance(&self, other: &Fingerprint) -> f64 {
        if self.0.len() != other.0.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn lex_cmp(&self, other: &Fingerprint) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

pub fn fingerprint(c: &Configuration) -> Fingerprint {
    let v = c.vectors();
    let n = v.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2 + n.saturating_sub(2));
    for i in 0..n {
        for j in i + 1..n {
            out.push(v[i].dot(&v[j]));
        }
    }
    for j in 2..n {
        out.push(v[0].dot(&v[1].cross(&v[j])));
    }
    Fingerprint(out)
}
