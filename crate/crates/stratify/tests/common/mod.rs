#![allow(dead_code)]

use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;
use stratify::exact_arith::{int, LaurentPoly};
use stratify::shipped::{self, Example};

/// Bundled examples whose charts carry an ambient coordinate map.
pub const AMBIENT: [&str; 7] = ["gr24", "sl3b", "pset-p2", "quadric", "elliptic1", "elliptic2", "psl2"];

pub fn examples() -> &'static [Example] {
    static EX: OnceLock<Vec<Example>> = OnceLock::new();
    EX.get_or_init(|| AMBIENT.iter().map(|n| shipped::load(n).unwrap()).collect())
}

pub fn example(name: &str) -> &'static Example {
    examples().iter().find(|e| e.name == name).unwrap()
}

/// Raw material for a random homogeneous ambient polynomial.
#[derive(Clone, Debug)]
pub struct PolySeed {
    pub degree: u32,
    pub terms: Vec<(usize, i64)>,
}

pub fn poly_seed(max_degree: u32) -> impl Strategy<Value = PolySeed> {
    (1..=max_degree, prop::collection::vec((any::<usize>(), prop_oneof![-3i64..=-1, 1i64..=3]), 1..=3))
        .prop_map(|(degree, terms)| PolySeed { degree, terms })
}

pub fn build(ex: &Example, seed: &PolySeed) -> LaurentPoly {
    let ring = ex.ring.as_ref().unwrap();
    let monos = ring.monomials(seed.degree).unwrap();
    let mut p = LaurentPoly::zero();
    for (i, c) in &seed.terms {
        p = &p + &LaurentPoly::term(monos[i % monos.len()].clone(), int(*c));
    }
    p
}

/// Nonzero on the variety: the normal form in the ring model does not vanish.
pub fn nonzero_on(ex: &Example, g: &LaurentPoly) -> bool {
    let ring = ex.ring.as_ref().unwrap();
    !g.is_zero() && ring.normal_form(g).unwrap().1.iter().any(|x| !x.is_zero())
}
