//! Exact geometry of the two-strand case: the pillowcase chart of pairs of
//! traceless tuples with equal products, the graph curves of a braid, their
//! intersections and the lift to the torus double cover.
//!
//! Angles that are rational multiples of π are kept exact.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::{require_knot, BraidWord};
use crate::error::{Error, Result};
use crate::lattice::angle_action;
use crate::rep::{Configuration, HPoint};

/// Text attached to every torus lift.
pub const PERTURBATION_CAVEAT: &str = "Degenerate: f_beta conserves the product coordinate, so det(I - L) = 0. \
A compactly supported isotopy perturbing f_beta is required before fixed points can be counted by Nielsen theory; \
no Nielsen number is reported.";

/// `r·π`, reduced into `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PiMultiple(Rational64);

impl PiMultiple {
    pub fn new(r: Rational64) -> Self {
        let two = Rational64::from_integer(2);
        let k = (r / two).floor();
        Self(r - k * two)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(Rational64::new(num, den))
    }

    pub fn zero() -> Self {
        Self(Rational64::zero())
    }

    pub fn pi() -> Self {
        Self::from_ratio(1, 1)
    }

    pub fn ratio(&self) -> Rational64 {
        self.0
    }

    pub fn radians(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }

    /// `2π − self`, the image under the hyperelliptic involution.
    pub fn reflected(&self) -> Self {
        Self::new(-self.0)
    }

    pub fn is_cone_coordinate(&self) -> bool {
        self.0.is_zero() || self.0 == Rational64::from_integer(1)
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else if self.0.is_integer() {
            f.write_str("π")
        } else {
            write!(f, "{}/{} π", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for PiMultiple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            token: s.to_string(),
            reason: "expected a rational multiple of π such as \"1/3 π\"".into(),
        };
        let t = s.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        let body = t.strip_suffix('π').ok_or_else(bad)?.trim();
        let (num, den) = match body.split_once('/') {
            None if body.is_empty() => (1, 1),
            Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
            None => (body.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if den == 0 {
            return Err(bad());
        }
        Ok(Self::from_ratio(num, den))
    }
}

impl TryFrom<String> for PiMultiple {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PiMultiple> for String {
    fn from(p: PiMultiple) -> String {
        p.to_string()
    }
}

/// An angle that is either an exact multiple of π or a plain decimal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "exactness", rename_all = "snake_case", deny_unknown_fields)]
pub enum Angle {
    Exact { value: PiMultiple },
    Decimal { radians: f64 },
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match self {
            Angle::Exact { value } => value.radians(),
            Angle::Decimal { radians } => *radians,
        }
    }
}

impl From<PiMultiple> for Angle {
    fn from(value: PiMultiple) -> Self {
        Angle::Exact { value }
    }
}

/// Pillowcase coordinates: `alpha` is the product (holonomy) angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PillowPoint {
    pub alpha: Angle,
    pub theta: Angle,
}

impl PillowPoint {
    pub fn exact(alpha: PiMultiple, theta: PiMultiple) -> Self {
        Self {
            alpha: alpha.into(),
            theta: theta.into(),
        }
    }

    pub fn decimal(alpha: f64, theta: f64) -> Self {
        Self {
            alpha: Angle::Decimal { radians: alpha },
            theta: Angle::Decimal { radians: theta },
        }
    }
}

fn planar_vec(t: f64) -> [f64; 2] {
    [t.cos(), t.sin()]
}

/// `X = (P(0), P(π − α))`, `Y = (P(θ), P(θ + π − α))` with
/// `P(t) = cos t·i + sin t·j`.
pub fn chart(p: &PillowPoint) -> HPoint {
    let (a, t) = (p.alpha.radians(), p.theta.radians());
    let x = Configuration::planar(&[0.0, std::f64::consts::PI - a]);
    let y = Configuration::planar(&[t, t + std::f64::consts::PI - a]);
    HPoint { x, y }
}

/// Components `(cos α, sin α)` of the product `cos α + sin α·k` of the
/// chart tuples.
pub fn chart_product(alpha: f64) -> [f64; 2] {
    planar_vec(alpha)
}

fn require_two_strands(b: &BraidWord) -> Result<()> {
    if b.strands() != 2 {
        return Err(Error::StrandMismatch {
            expected: 2,
            found: b.strands(),
        });
    }
    Ok(())
}

/// Integer matrix of the angle action of a two-strand braid.
pub fn angle_matrix(b: &BraidWord) -> Result<[[i64; 2]; 2]> {
    require_two_strands(b)?;
    let a = angle_action(b);
    Ok([[a[0][0], a[0][1]], [a[1][0], a[1][1]]])
}

fn q_of(b: &BraidWord) -> Result<i64> {
    Ok(angle_matrix(b)?[0][1])
}

/// `θ ≡ slope·α + offset (mod 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleRelation {
    pub slope: i64,
    pub offset: PiMultiple,
}

impl AngleRelation {
    pub fn theta(&self, alpha: f64) -> f64 {
        (self.slope as f64 * alpha + self.offset.radians()).rem_euclid(2.0 * std::f64::consts::PI)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaCurves {
    pub q: i64,
    pub id_curve: AngleRelation,
    pub beta_curve: AngleRelation,
    /// The curves coincide (`q = 0`), so the intersection is not isolated.
    pub coincident: bool,
}

/// The diagonal `θ ≡ 0` and the graph `θ ≡ q(π − α)`.
pub fn gamma_curves(b: &BraidWord) -> Result<GammaCurves> {
    let q = q_of(b)?;
    let id_curve = AngleRelation {
        slope: 0,
        offset: PiMultiple::zero(),
    };
    let beta_curve = AngleRelation {
        slope: -q,
        offset: PiMultiple::from_ratio(q, 1),
    };
    Ok(GammaCurves {
        q,
        id_curve,
        beta_curve,
        coincident: q == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Irreducible,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PillowClass {
    pub alpha: PiMultiple,
    pub theta: PiMultiple,
    pub kind: PointKind,
}

impl PillowClass {
    pub fn point(&self) -> PillowPoint {
        PillowPoint::exact(self.alpha, self.theta)
    }
}

/// Intersections of the two curves, folded by the involution into
/// `α ∈ [0, π]` and sorted by `α`.
pub fn exact_classes(b: &BraidWord) -> Result<Vec<PillowClass>> {
    require_two_strands(b)?;
    require_knot(b)?;
    let q = q_of(b)?;
    let mut out: Vec<PillowClass> = Vec::new();
    for k in 0..q.abs() {
        let a = PiMultiple::new(Rational64::from_integer(1) - Rational64::new(2 * k, q));
        let folded = if a.ratio() > Rational64::from_integer(1) {
            a.reflected()
        } else {
            a
        };
        if out.iter().any(|c| c.alpha == folded) {
            continue;
        }
        let kind = if folded.is_cone_coordinate() {
            PointKind::Cone
        } else {
            PointKind::Irreducible
        };
        out.push(PillowClass {
            alpha: folded,
            theta: PiMultiple::zero(),
            kind,
        });
    }
    out.sort_by_key(|c| c.alpha);
    Ok(out)
}

pub fn irreducible_count(classes: &[PillowClass]) -> usize {
    classes.iter().filter(|c| c.kind == PointKind::Irreducible).count()
}

/// Signed count of the irreducible intersections: every one carries the
/// sign of `q`.
pub fn signed_count(b: &BraidWord) -> Result<i64> {
    let classes = exact_classes(b)?;
    let q = q_of(b)?;
    Ok(q.signum() * irreducible_count(&classes) as i64)
}

/// Affine lift `(α, θ) ↦ L(α, θ) + shift` of `(X, Y) ↦ (Y, β(X))` to the
/// torus cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusLift {
    pub l: [[i64; 2]; 2],
    pub shift: (PiMultiple, PiMultiple),
    pub det_i_minus_l: i64,
    pub degenerate: bool,
    pub caveat: String,
}

pub fn torus_lift(b: &BraidWord) -> Result<TorusLift> {
    let q = q_of(b)?;
    let l = [[1, 0], [-q, -1]];
    let det = (1 - l[0][0]) * (1 - l[1][1]) - l[0][1] * l[1][0];
    Ok(TorusLift {
        l,
        shift: (PiMultiple::zero(), PiMultiple::from_ratio(q, 1)),
        det_i_minus_l: det,
        degenerate: det == 0,
        caveat: PERTURBATION_CAVEAT.to_string(),
    })
}

/// Applies the lift to a point given in radians.
pub fn apply_lift(lift: &TorusLift, alpha: f64, theta: f64) -> (f64, f64) {
    let tau = 2.0 * std::f64::consts::PI;
    let [[a, b], [c, d]] = lift.l;
    let x = a as f64 * alpha + b as f64 * theta + lift.shift.0.radians();
    let y = c as f64 * alpha + d as f64 * theta + lift.shift.1.radians();
    (x.rem_euclid(tau), y.rem_euclid(tau))
}

/// Evenly spaced samples of both curves for plotting, as CSV text with
/// columns `curve,alpha,theta`.
pub fn curve_samples_csv(b: &BraidWord, samples: usize) -> Result<String> {
    let curves = gamma_curves(b)?;
    let tau = 2.0 * std::f64::consts::PI;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(["curve", "alpha", "theta"]).map_err(io)?;
    for (name, rel) in [("id", curves.id_curve), ("beta", curves.beta_curve)] {
        for k in 0..samples {
            let alpha = tau * k as f64 / samples as f64;
            w.serialize((name, alpha, rel.theta(alpha))).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

/// Exact membership test for the graph curve.
pub fn on_beta_curve(curves: &GammaCurves, alpha: PiMultiple, theta: PiMultiple) -> bool {
    let rhs = PiMultiple::new(Rational64::from_integer(curves.q) * (Rational64::from_integer(1) - alpha.ratio()));
    rhs == theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::rep::product;
    use crate::su2::align;

    fn w(s: &str) -> BraidWord {
        parse_braid(s, None).unwrap()
    }

    #[test]
    fn chart_examples() {
        let h = chart(&PillowPoint::exact(PiMultiple::from_ratio(1, 2), PiMultiple::zero()));
        let v = h.x.vectors();
        assert!((v[0] - nalgebra::Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((v[1] - nalgebra::Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!(h.x.distance(&h.y) < 1e-15);
        let cone = chart(&PillowPoint::exact(PiMultiple::zero(), PiMultiple::zero()));
        let v = cone.x.vectors();
        assert!((v[0] + v[1]).norm() < 1e-15);
    }

    #[test]
    fn chart_product_expansion() {
        for alpha in [0.3, 1.0, 2.5, 4.0] {
            let h = chart(&PillowPoint::decimal(alpha, 0.7));
            let [c, s] = chart_product(alpha);
            for m in [product(&h.x), product(&h.y)] {
                assert!((m.w - c).abs() < 1e-14 && (m.z - s).abs() < 1e-14);
                assert!(m.x.abs() < 1e-14 && m.y.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn involution_gives_conjugate_points() {
        let a = PillowPoint::decimal(1.1, 0.4);
        let b = PillowPoint::decimal(2.0 * std::f64::consts::PI - 1.1, 2.0 * std::f64::consts::PI - 0.4);
        let (ha, hb) = (chart(&a), chart(&b));
        let mut xa = ha.x.vectors();
        xa.extend(ha.y.vectors());
        let mut xb = hb.x.vectors();
        xb.extend(hb.y.vectors());
        let ca = Configuration::from_vectors(&xa).unwrap();
        let cb = Configuration::from_vectors(&xb).unwrap();
        assert!(align(ca.elems(), cb.elems()).unwrap().1 < 1e-12);
    }

    #[test]
    fn angle_matrix_examples() {
        assert_eq!(angle_matrix(&w("1")).unwrap(), [[2, -1], [1, 0]]);
        assert_eq!(angle_matrix(&w("1 1 1")).unwrap(), [[4, -3], [3, -2]]);
        assert_eq!(angle_matrix(&w("1 -1")).unwrap(), [[1, 0], [0, 1]]);
        assert_eq!(angle_matrix(&w("-1")).unwrap(), [[0, 1], [-1, 2]]);
        assert!(angle_matrix(&w("1 2")).is_err());
    }

    #[test]
    fn curve_examples() {
        let c = gamma_curves(&w("1 1 1")).unwrap();
        assert_eq!(c.q, -3);
        assert_eq!(c.beta_curve, AngleRelation { slope: 3, offset: PiMultiple::pi() });
        let c = gamma_curves(&BraidWord::identity(2)).unwrap();
        assert!(c.coincident);
        let c = gamma_curves(&w("1")).unwrap();
        assert_eq!(c.beta_curve, AngleRelation { slope: 1, offset: PiMultiple::pi() });
    }

    #[test]
    fn class_examples() {
        let t = exact_classes(&w("1 1 1")).unwrap();
        assert_eq!(irreducible_count(&t), 1);
        let irr: Vec<_> = t.iter().filter(|c| c.kind == PointKind::Irreducible).collect();
        assert_eq!(irr[0].alpha, PiMultiple::from_ratio(1, 3));
        assert_eq!(irr[0].alpha.to_string(), "1/3 π");
        assert!(t.iter().any(|c| c.kind == PointKind::Cone && c.alpha == PiMultiple::pi()));
        assert_eq!(irreducible_count(&exact_classes(&w("1")).unwrap()), 0);
        assert_eq!(irreducible_count(&exact_classes(&w("1 1 1 1 1")).unwrap()), 2);
        assert!(exact_classes(&w("1 1")).is_err());
        let curves = gamma_curves(&w("1 1 1")).unwrap();
        for c in t {
            assert!(on_beta_curve(&curves, c.alpha, c.theta));
        }
    }

    #[test]
    fn lift_examples() {
        let l = torus_lift(&w("1 1 1")).unwrap();
        assert_eq!(l.l, [[1, 0], [3, -1]]);
        assert_eq!(l.shift, (PiMultiple::zero(), PiMultiple::pi()));
        assert_eq!(l.det_i_minus_l, 0);
        let l = torus_lift(&BraidWord::identity(2)).unwrap();
        assert_eq!(l.l, [[1, 0], [0, -1]]);
        assert_eq!(l.shift, (PiMultiple::zero(), PiMultiple::zero()));
    }

    #[test]
    fn lift_fixed_points_are_classes() {
        let b = w("1 1 1 1 1");
        let lift = torus_lift(&b).unwrap();
        for c in exact_classes(&b).unwrap() {
            let (a, t) = (c.alpha.radians(), c.theta.radians());
            let (a2, t2) = apply_lift(&lift, a, t);
            let tau = 2.0 * std::f64::consts::PI;
            let close = |x: f64, y: f64| {
                let d = (x - y).rem_euclid(tau);
                d.min(tau - d) < 1e-12
            };
            assert!(close(a, a2) && close(t, t2));
        }
    }

    #[test]
    fn pi_multiple_text_round_trip() {
        for (n, d) in [(1, 3), (0, 1), (5, 3), (-1, 4), (7, 7)] {
            let p = PiMultiple::from_ratio(n, d);
            assert_eq!(p.to_string().parse::<PiMultiple>().unwrap(), p);
        }
        assert!("1/0 π".parse::<PiMultiple>().is_err());
        assert!("pi".parse::<PiMultiple>().is_err());
    }
}
