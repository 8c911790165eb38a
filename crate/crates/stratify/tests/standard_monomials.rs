//! Subduction and restriction of standard monomials on the Grassmannian of
//! planes in 4-space.

mod common;

use std::cmp::Ordering;

use common::{build, example, nonzero_on, poly_seed};
use num_traits::Zero;
use proptest::prelude::*;
use stratify::coord_ring::{GradedQuotient, VarSpec};
use stratify::exact_arith::{lex_compare, LaurentPoly};
use stratify::fan_monoids::hodge_fan;
use stratify::smt_subduction::{rank, restrict_to_stratum, standard_monomials, Subductor};

/// Ring model of the stratum X_p: the Plücker relation plus x_q = 0 for q ≰ p.
fn stratum_ring(p: &str) -> GradedQuotient {
    let ex = example("gr24");
    let ring = ex.ring.as_ref().unwrap();
    let vars: Vec<VarSpec> = ring.vars().iter().map(|v| VarSpec { name: v.clone(), degree: 1 }).collect();
    let mut rels: Vec<LaurentPoly> = ring.relations().cloned().collect();
    for q in ex.poset.ids() {
        if !ex.poset.le(&q, p).unwrap() {
            rels.push(LaurentPoly::var(&format!("x{q}")));
        }
    }
    GradedQuotient::new(vars, &rels).unwrap()
}

#[test]
fn restriction_dichotomy_on_every_stratum() {
    let ex = example("gr24");
    let ring = ex.ring.as_ref().unwrap();
    let fan = hodge_fan(&ex.poset).unwrap();
    let sub = Subductor::with_extremal(&ex.poset, ring, &ex.atlas, &fan, ex.poset.default_order(Default::default())).unwrap();
    for p in ex.poset.ids() {
        let sr = stratum_ring(&p);
        for m in 1..=3 {
            let monos = standard_monomials(&ex.poset, &fan, m).unwrap();
            let rows = restrict_to_stratum(&sub, &monos, &p, &sr, m as u32).unwrap();
            let kept: Vec<_> = rows.iter().filter(|(s, _)| *s).map(|(_, v)| v.clone()).collect();
            for (s, v) in &rows {
                if !s {
                    assert!(v.iter().all(|x| x.is_zero()), "nonstandard monomial survives on X_{p}");
                }
            }
            assert_eq!(rank(&kept), kept.len(), "dependent restrictions on X_{p} m={m}");
            assert_eq!(kept.len(), sr.hilbert(m as u32).unwrap(), "X_{p} m={m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn subduction_reexpands_to_the_input(seed in poly_seed(3)) {
        let ex = example("gr24");
        let ring = ex.ring.as_ref().unwrap();
        let f = build(ex, &seed);
        prop_assume!(nonzero_on(ex, &f));
        let fan = hodge_fan(&ex.poset).unwrap();
        let ord = ex.poset.default_order(Default::default());
        let sub = Subductor::with_extremal(&ex.poset, ring, &ex.atlas, &fan, ord.clone()).unwrap();
        let exp = sub.subduction(&f).unwrap();
        let slice = ring.slice(seed.degree).unwrap();
        prop_assert_eq!(slice.reduce(&sub.expand(&exp.terms).unwrap()).unwrap(), slice.reduce(&f).unwrap());
        for w in exp.trace.windows(2) {
            prop_assert_eq!(lex_compare(&w[0], &w[1], &ord).unwrap(), Ordering::Less);
        }
        for t in &exp.terms {
            prop_assert!(stratify::smt_subduction::is_standard(&t.monomial.factors, &ex.poset).unwrap());
        }
    }
}
