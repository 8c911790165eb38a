//! Standard monomials, subduction and straightening over a ring model with a
//! valuation oracle.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chart_valuation::{attaining, quasi_valuation, raw_leading, Atlas};
use crate::coord_ring::{DegreeSlice, GradedQuotient};
use crate::error::{Error, Result};
use crate::exact_arith::{lex_compare, serialize_rational, AVector, LaurentPoly, Rational, TotalOrder};
use crate::fan_monoids::MonoidFan;
use crate::strat_poset::{Chain, StratPoset};

/// An ordered list of indecomposables a_1, ..., a_n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StdMonomial {
    pub factors: Vec<AVector>,
}

impl StdMonomial {
    pub fn total(&self) -> AVector {
        self.factors.iter().fold(AVector::zero(), |acc, a| &acc + a)
    }
}

impl std::fmt::Display for StdMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn extreme(ps: &StratPoset, a: &AVector, want_max: bool) -> Result<String> {
    let s = a.support();
    if s.is_empty() {
        return Err(Error::Fan("zero factor".into()));
    }
    if !ps.is_chain(&s)? {
        return Err(Error::Fan(format!("support of {a} is not a chain")));
    }
    for p in &s {
        let ok = s.iter().all(|q| if want_max { ps.le(q, p).unwrap_or(false) } else { ps.le(p, q).unwrap_or(false) });
        if ok {
            return Ok(p.clone());
        }
    }
    Err(Error::Internal("chain without extreme element".into()))
}

pub fn max_supp(ps: &StratPoset, a: &AVector) -> Result<String> {
    extreme(ps, a, true)
}

pub fn min_supp(ps: &StratPoset, a: &AVector) -> Result<String> {
    extreme(ps, a, false)
}

/// min supp a_j ≥ max supp a_{j+1} for every consecutive pair.
pub fn is_standard(seq: &[AVector], ps: &StratPoset) -> Result<bool> {
    for a in seq {
        max_supp(ps, a)?;
    }
    for w in seq.windows(2) {
        if !ps.le(&max_supp(ps, &w[1])?, &min_supp(ps, &w[0])?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// max supp a_1 ≤ p (vacuous for the empty monomial).
pub fn standard_on_stratum(mono: &StdMonomial, p: &str, ps: &StratPoset) -> Result<bool> {
    match mono.factors.first() {
        None => Ok(true),
        Some(a) => ps.le(&max_supp(ps, a)?, p),
    }
}

/// All standard monomials of total degree m in the indecomposables of the
/// fan. Two factors with the same single-element support commute, so such
/// runs are listed in nonincreasing order to avoid double counting.
pub fn standard_monomials(ps: &StratPoset, fan: &MonoidFan, m: i64) -> Result<Vec<StdMonomial>> {
    let ind = fan.all_indecomposables(m.max(0))?;
    let info = ind
        .iter()
        .map(|a| Ok((fan.degree(a), max_supp(ps, a)?, min_supp(ps, a)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    std_rec(ps, &ind, &info, &Rational::from_integer(m.into()), &mut cur, &mut out)?;
    Ok(out)
}

fn std_rec(
    ps: &StratPoset,
    ind: &[AVector],
    info: &[(Rational, String, String)],
    left: &Rational,
    cur: &mut Vec<usize>,
    out: &mut Vec<StdMonomial>,
) -> Result<()> {
    if left.is_zero() {
        out.push(StdMonomial { factors: cur.iter().map(|&i| ind[i].clone()).collect() });
        return Ok(());
    }
    for i in 0..ind.len() {
        if &info[i].0 > left {
            continue;
        }
        if let Some(&j) = cur.last() {
            if !ps.le(&info[i].1, &info[j].2)? {
                continue;
            }
            let single = |k: usize| info[k].1 == info[k].2;
            if single(i) && single(j) && info[i].1 == info[j].1 && ind[i] > ind[j] {
                continue;
            }
        }
        cur.push(i);
        std_rec(ps, ind, info, &(left - &info[i].0), cur, out)?;
        cur.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    #[serde(serialize_with = "serialize_rational")]
    pub coeff: Rational,
    pub monomial: StdMonomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub terms: Vec<Term>,
    /// 𝒱 of the successive remainders, strictly increasing.
    pub trace: Vec<AVector>,
}

/// The data subduction works over: a ring model, charts, the fan, a total
/// order, and one representative per indecomposable.
pub struct Subductor<'a> {
    ps: &'a StratPoset,
    ring: &'a GradedQuotient,
    atlas: &'a Atlas,
    fan: &'a MonoidFan,
    ord: TotalOrder,
    reps: BTreeMap<AVector, LaurentPoly>,
}

impl<'a> Subductor<'a> {
    /// Checks 𝒱(x_a) = a for every representative.
    pub fn new(
        ps: &'a StratPoset,
        ring: &'a GradedQuotient,
        atlas: &'a Atlas,
        fan: &'a MonoidFan,
        ord: TotalOrder,
        reps: BTreeMap<AVector, LaurentPoly>,
    ) -> Result<Self> {
        let s = Self { ps, ring, atlas, fan, ord, reps };
        for (a, x) in &s.reps {
            let v = s.valuation(x)?;
            if &v != a {
                return Err(Error::Subduction(format!("representative `{x}` has value {v}, expected {a}")));
            }
        }
        Ok(s)
    }

    /// Extremal functions as representatives of the e_p (Hodge type).
    pub fn with_extremal(ps: &'a StratPoset, ring: &'a GradedQuotient, atlas: &'a Atlas, fan: &'a MonoidFan, ord: TotalOrder) -> Result<Self> {
        let reps = atlas.extremal().iter().map(|(p, f)| (AVector::unit(p), f.clone())).collect();
        Self::new(ps, ring, atlas, fan, ord, reps)
    }

    pub fn order(&self) -> &TotalOrder {
        &self.ord
    }

    pub fn valuation(&self, g: &LaurentPoly) -> Result<AVector> {
        quasi_valuation(g, self.atlas, &self.ord)
    }

    pub fn representative(&self, a: &AVector) -> Result<&LaurentPoly> {
        self.reps.get(a).ok_or_else(|| Error::Subduction(format!("no representative for indecomposable {a}")))
    }

    pub fn product(&self, mono: &StdMonomial) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::one();
        for a in &mono.factors {
            p = &p * self.representative(a)?;
        }
        Ok(p)
    }

    /// Expresses f as a combination of standard monomials in the representatives.
    pub fn subduction(&self, f: &LaurentPoly) -> Result<Expansion> {
        let m = self.ring.homogeneous_degree(f)?.ok_or(Error::ZeroPolynomial)?;
        let slice = self.ring.slice(m)?;
        self.subduction_in(f, &slice)
    }

    pub fn subduction_in(&self, f: &LaurentPoly, slice: &DegreeSlice) -> Result<Expansion> {
        let guard = slice.dim() + 1;
        let mut rem = slice.reduce(f)?;
        let mut terms: Vec<Term> = Vec::new();
        let mut trace: Vec<AVector> = Vec::new();
        for _ in 0..guard {
            if rem.is_zero() {
                return Ok(Expansion { terms, trace });
            }
            let results = self.atlas.chain_values(&rem)?;
            let chains = attaining(&results, &self.ord)?;
            let a = results.iter().find(|r| r.chain == chains[0]).unwrap().value.clone();
            if let Some(prev) = trace.last() {
                if lex_compare(prev, &a, &self.ord)? != Ordering::Less {
                    return Err(Error::Subduction(format!("value did not increase: {prev} then {a}")));
                }
            }
            trace.push(a.clone());
            let (chain, factors) = self.decompose_on(&a, &chains)?;
            let mono = StdMonomial { factors };
            let prod = self.product(&mono)?;
            let chart = self.atlas.chart(&chain)?;
            let (o1, c1) = raw_leading(&chart.pull_back(&rem)?, chart)?;
            let (o2, c2) = raw_leading(&chart.pull_back(&prod)?, chart)?;
            if o1 != o2 {
                return Err(Error::Subduction(format!("leading orders differ on {chain} for {mono}")));
            }
            let lambda = match (c1.as_constant(), c2.as_constant()) {
                (Some(x), Some(y)) => x / y,
                _ => return Err(Error::Subduction(format!("leading coefficient ratio on {chain} is not constant"))),
            };
            rem = slice.reduce(&(&rem - &prod.scale(&lambda)))?;
            match terms.iter_mut().find(|t| t.monomial == mono) {
                Some(t) => t.coeff += &lambda,
                None => terms.push(Term { coeff: lambda, monomial: mono }),
            }
            terms.retain(|t| !t.coeff.is_zero());
        }
        Err(Error::Subduction(format!("no convergence after {guard} steps")))
    }

    fn decompose_on(&self, a: &AVector, chains: &[Chain]) -> Result<(Chain, Vec<AVector>)> {
        for c in chains {
            if self.fan.generators(c).is_ok() && self.fan.contains_in(c, a)? {
                return Ok((c.clone(), self.fan.decompose(a, c)?));
            }
        }
        Err(Error::Subduction(format!("{a} is not in the generated fan")))
    }

    /// Subduction of x_a·x_b with ≤^t certificates on every right-hand leaf.
    pub fn straighten(&self, a: &AVector, b: &AVector) -> Result<Straightening> {
        let prod = self.representative(a)? * self.representative(b)?;
        let exp = self.subduction(&prod)?;
        let left = a + b;
        let mut certified = true;
        for t in &exp.terms {
            if lex_compare(&left, &t.monomial.total(), &self.ord)? == Ordering::Greater {
                certified = false;
            }
        }
        Ok(Straightening { left: (a.clone(), b.clone()), right: exp.terms, leading_certified: certified })
    }

    /// Reassembles an expansion as a polynomial.
    pub fn expand(&self, terms: &[Term]) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for t in terms {
            p = &p + &self.product(&t.monomial)?.scale(&t.coeff);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Straightening {
    pub left: (AVector, AVector),
    pub right: Vec<Term>,
    /// Every right-hand value c satisfies a + b ≤^t c.
    pub leading_certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KhovanskiiReport {
    pub pass: bool,
    pub max_degree: i64,
    pub images: Vec<AVector>,
    pub missing: Vec<AVector>,
}

/// Checks that {𝒱(b)} generates every degree slice of the fan up to `max_degree`.
pub fn khovanskii_check(b: &[LaurentPoly], atlas: &Atlas, fan: &MonoidFan, ord: &TotalOrder, max_degree: i64) -> Result<KhovanskiiReport> {
    let images: Vec<AVector> = b
        .iter()
        .map(|g| quasi_valuation(g, atlas, ord))
        .collect::<Result<BTreeSet<_>>>()?
        .into_iter()
        .collect();
    let mut missing = Vec::new();
    for m in 1..=max_degree {
        for a in fan.gamma_degree_slice(m)? {
            let s = a.support();
            let generated = fan.chains().filter(|c| s.iter().all(|p| c.contains(p))).any(|c| {
                let local: Vec<AVector> =
                    images.iter().filter(|x| x.support().iter().all(|p| c.contains(p))).cloned().collect();
                member(&local, &a, 0)
            });
            if !generated {
                missing.push(a);
            }
        }
    }
    Ok(KhovanskiiReport { pass: missing.is_empty(), max_degree, images, missing })
}

fn member(gens: &[AVector], a: &AVector, start: usize) -> bool {
    if a.is_zero() {
        return true;
    }
    gens.iter().enumerate().skip(start).any(|(i, g)| {
        let rest = a - g;
        !g.is_zero() && rest.is_nonnegative() && member(gens, &rest, i)
    })
}

/// Coordinates of the restricted standard monomials in a stratum's ring model:
/// returns (standard on the stratum, reduced products) for every input.
pub fn restrict_to_stratum(
    sub: &Subductor<'_>,
    monos: &[StdMonomial],
    p: &str,
    stratum_ring: &GradedQuotient,
    m: u32,
) -> Result<Vec<(bool, Vec<Rational>)>> {
    let slice = stratum_ring.slice(m)?;
    monos
        .iter()
        .map(|mono| {
            let std = standard_on_stratum(mono, p, sub.ps)?;
            let prod = sub.product(mono)?;
            Ok((std, slice.normal_form(&prod)?))
        })
        .collect()
}

/// Rank of a list of rational vectors.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &piv;
            let row = rows[r].clone();
            for (x, y) in rows[i].iter_mut().zip(&row) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeff == Rational::one() {
            write!(f, "{}", self.monomial)
        } else {
            write!(f, "{}*{}", crate::exact_arith::fmt_rational(&self.coeff), self.monomial)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan_monoids::hodge_fan;
    use crate::shipped;

    fn e(p: &str) -> AVector {
        AVector::unit(p)
    }

    #[test]
    fn standardness_on_grassmannian() {
        let ex = shipped::load("gr24").unwrap();
        let ps = &ex.poset;
        assert!(is_standard(&[e("24"), e("13")], ps).unwrap());
        assert!(!is_standard(&[e("14"), e("23")], ps).unwrap());
        assert!(is_standard(&[], ps).unwrap());
        let m = StdMonomial { factors: vec![e("24"), e("13")] };
        assert!(!standard_on_stratum(&m, "14", ps).unwrap());
        assert!(standard_on_stratum(&StdMonomial { factors: vec![e("13")] }, "14", ps).unwrap());
    }

    #[test]
    fn plucker_subduction() {
        let ex = shipped::load("gr24").unwrap();
        let ring = ex.ring.as_ref().unwrap();
        let fan = hodge_fan(&ex.poset).unwrap();
        let ord = ex.poset.default_order(Default::default());
        let sub = Subductor::with_extremal(&ex.poset, ring, &ex.atlas, &fan, ord).unwrap();
        let f = LaurentPoly::parse("x14*x23").unwrap();
        let exp = sub.subduction(&f).unwrap();
        let got: BTreeMap<StdMonomial, Rational> = exp.terms.iter().map(|t| (t.monomial.clone(), t.coeff.clone())).collect();
        let want: BTreeMap<StdMonomial, Rational> = [
            (StdMonomial { factors: vec![e("24"), e("13")] }, Rational::one()),
            (StdMonomial { factors: vec![e("34"), e("12")] }, -Rational::one()),
        ]
        .into();
        assert_eq!(got, want);
        let s = ring.slice(2).unwrap();
        assert_eq!(s.reduce(&sub.expand(&exp.terms).unwrap()).unwrap(), s.reduce(&f).unwrap());
    }
}
