#![allow(dead_code)]

use braidfix::braid::{is_knot_closure, BraidWord};
use braidfix::rep::Configuration;
use braidfix::su2::Quaternion;
use nalgebra::Vector3;
use proptest::prelude::*;

pub fn unit_vector() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

pub fn configuration(n: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(unit_vector(), n).prop_map(|vs| Configuration::from_vectors(&vs).unwrap())
}

pub fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
    (unit_vector(), 0.0f64..std::f64::consts::TAU).prop_map(|(axis, angle)| {
        let (s, c) = (angle / 2.0).sin_cos();
        Quaternion::new(c, s * axis.x, s * axis.y, s * axis.z)
    })
}

pub fn letter(strands: usize) -> impl Strategy<Value = i32> {
    (1..strands as i32, any::<bool>()).prop_map(|(g, pos)| if pos { g } else { -g })
}

pub fn braid_on(strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(letter(strands), 0..=max_len).prop_map(move |l| BraidWord::new(strands, l).unwrap())
}

pub fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| braid_on(n, max_len))
}

/// Braids whose closure is a knot and which use every column.
pub fn knot_braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    braid(max_strands, max_len).prop_filter("knot closure using every column", |b| {
        is_knot_closure(b) && (1..b.strands()).all(|c| b.column_count(c) > 0)
    })
}
