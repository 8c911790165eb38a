//! Chain valuations on per-chain Laurent charts and the quasi-valuation obtained
//! as their lexicographic minimum.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{int, lex_compare, AVector, LaurentPoly, Rational, TotalOrder};
use crate::strat_poset::{Chain, StratPoset};

/// A quotient of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RatFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Internal("rational function with zero denominator".into()));
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(self) -> Self {
        if let Some((m, c)) = self.den.as_monomial() {
            let inv: BTreeMap<String, i64> = m.iter().map(|(v, e)| (v.clone(), -e)).collect();
            let scale = LaurentPoly::term(inv, c.recip());
            return Self { num: &self.num * &scale, den: LaurentPoly::one() };
        }
        self
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        Self { num: &self.num * &other.num, den: &self.den * &other.den }.normalized()
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<RatFn> {
        let e = u32::try_from(k.unsigned_abs()).map_err(|_| Error::Bound("exponent overflow".into()))?;
        if k >= 0 {
            Ok(Self { num: self.num.pow(e), den: self.den.pow(e) }.normalized())
        } else {
            if self.num.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(Self { num: self.den.pow(e), den: self.num.pow(e) }.normalized())
        }
    }

    /// Order of vanishing along `{var = 0}`.
    pub fn order(&self, var: &str) -> Result<i64> {
        Ok(self.num.min_exponent(var)? - self.den.min_exponent(var)?)
    }

    /// Restriction to `{var = 0}` of a function of order zero along it.
    pub fn restrict(&self, var: &str) -> Result<RatFn> {
        let a = self.num.min_exponent(var)?;
        let b = self.den.min_exponent(var)?;
        if a != b {
            return Err(Error::Internal(format!("restriction of a function of order {} along {var}", a - b)));
        }
        let num = self.num.divide_by_power(var, a).set_zero(var)?;
        let den = self.den.divide_by_power(var, b).set_zero(var)?;
        RatFn::new(num, den)
    }

    /// The value as a constant, if it has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }
}

impl std::fmt::Display for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == LaurentPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub chain: Vec<String>,
    pub divisor_vars: Vec<String>,
    #[serde(default)]
    pub extra_vars: Vec<String>,
    pub f_exprs: BTreeMap<String, String>,
    #[serde(default)]
    pub ambient_map: BTreeMap<String, String>,
}

/// A coordinate model along one maximal chain. `divisor_vars[j]` (top-down)
/// cuts the next stratum out of the current one; the last variable cuts the
/// vertex of the cone over the bottom stratum.
#[derive(Clone, Debug)]
pub struct ChainChart {
    chain: Chain,
    divisor_vars: Vec<String>,
    extra_vars: Vec<String>,
    f_exprs: BTreeMap<String, LaurentPoly>,
    ambient_map: BTreeMap<String, LaurentPoly>,
    bonds: Vec<u64>,
    // f_{p_j} restricted through the divisors above p_j.
    f_restricted: Vec<LaurentPoly>,
}

impl ChainChart {
    pub fn new(file: &ChartFile, ps: &StratPoset) -> Result<Self> {
        let chain = Chain(file.chain.clone());
        let name = chain.to_string();
        let err = |msg: String| Error::Chart { chain: name.clone(), msg };
        if !ps.maximal_chains().contains(&chain) {
            return Err(err("not a maximal chain of the poset".into()));
        }
        if file.divisor_vars.len() != chain.len() {
            return Err(err(format!(
                "expected {} divisor variables, found {}",
                chain.len(),
                file.divisor_vars.len()
            )));
        }
        let vars: BTreeSet<&String> = file.divisor_vars.iter().chain(&file.extra_vars).collect();
        if vars.len() != file.divisor_vars.len() + file.extra_vars.len() {
            return Err(err("chart variables are not distinct".into()));
        }
        let parse = |s: &str| -> Result<LaurentPoly> {
            let p = LaurentPoly::parse(s)?;
            if let Some(v) = p.variables().into_iter().find(|v| !vars.contains(v)) {
                return Err(err(format!("`{v}` is not a chart variable")));
            }
            Ok(p)
        };
        let mut f_exprs = BTreeMap::new();
        for (id, s) in &file.f_exprs {
            if !ps.contains(id) {
                return Err(Error::UnknownId(id.clone()));
            }
            f_exprs.insert(id.clone(), parse(s)?);
        }
        let mut ambient_map = BTreeMap::new();
        for (name, s) in &file.ambient_map {
            ambient_map.insert(name.clone(), parse(s)?);
        }
        let bonds = ps.chain_bonds(&chain)?;
        let mut f_restricted = Vec::with_capacity(chain.len());
        for (j, p) in chain.ids().iter().enumerate() {
            let mut f = f_exprs.get(p).cloned().ok_or_else(|| err(format!("missing f_exprs entry for `{p}`")))?;
            for k in 0..j {
                let t = &file.divisor_vars[k];
                let o = f.min_exponent(t).map_err(|_| err(format!("f_{p} vanishes on the chart")))?;
                if o != 0 {
                    return Err(err(format!("f_{p} has order {o} along {t}, expected 0")));
                }
                f = f.set_zero(t)?;
            }
            let t = &file.divisor_vars[j];
            let o = f.min_exponent(t).map_err(|_| err(format!("f_{p} restricts to zero")))?;
            if o != bonds[j] as i64 {
                return Err(err(format!("f_{p} has order {o} along {t}, but the bond is {}", bonds[j])));
            }
            f_restricted.push(f);
        }
        Ok(Self {
            chain,
            divisor_vars: file.divisor_vars.clone(),
            extra_vars: file.extra_vars.clone(),
            f_exprs,
            ambient_map,
            bonds,
            f_restricted,
        })
    }

    pub fn from_json(s: &str, ps: &StratPoset) -> Result<Self> {
        let f: ChartFile = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Self::new(&f, ps)
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn divisor_vars(&self) -> &[String] {
        &self.divisor_vars
    }

    pub fn extra_vars(&self) -> &[String] {
        &self.extra_vars
    }

    pub fn f_expr(&self, id: &str) -> Option<&LaurentPoly> {
        self.f_exprs.get(id)
    }

    pub fn ambient_map(&self) -> &BTreeMap<String, LaurentPoly> {
        &self.ambient_map
    }

    /// b_r, ..., b_1, b_0 = deg f_{p_0}.
    pub fn bonds(&self) -> &[u64] {
        &self.bonds
    }

    /// Pulls an ambient polynomial back to the chart.
    pub fn pull_back(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        if let Some(v) = g.variables().into_iter().find(|v| !self.ambient_map.contains_key(v)) {
            return Err(Error::Chart { chain: self.chain.to_string(), msg: format!("no ambient coordinate `{v}`") });
        }
        g.substitute(&self.ambient_map)
    }
}

#[derive(Clone, Debug)]
pub struct ValResult {
    pub value: AVector,
    pub chain: Chain,
    /// g̃_r, ..., g̃_0.
    pub sequence: Vec<RatFn>,
    /// ν_j(g̃_j), top-down.
    pub nu: Vec<i64>,
    /// Renormalized entries ν_j / (b_r ⋯ b_j), top-down.
    pub d: Vec<Rational>,
}

/// Runs the bond-power recursion g̃_{j-1} = (g̃_j^{b_j} / f_j^{ν_j})|_{t_j = 0}
/// on a chart-local function.
pub fn sequence_of_functions(g: &LaurentPoly, chart: &ChainChart) -> Result<ValResult> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut cur = RatFn::from_poly(g.clone());
    let mut prod = Rational::one();
    let mut value = AVector::zero();
    let mut sequence = Vec::new();
    let mut nu = Vec::new();
    let mut d = Vec::new();
    let n = chart.chain.len();
    for j in 0..n {
        let t = &chart.divisor_vars[j];
        let p = &chart.chain.ids()[j];
        let b = chart.bonds[j];
        let v = cur.order(t)?;
        prod *= int(b as i64);
        let entry = int(v) / &prod;
        value.set(p, entry.clone());
        sequence.push(cur.clone());
        nu.push(v);
        d.push(entry);
        if j + 1 < n {
            let f = RatFn::from_poly(chart.f_restricted[j].clone());
            let next = cur.powi(b as i64)?.mul(&f.powi(-v)?);
            cur = next.restrict(t)?;
        }
    }
    Ok(ValResult { value, chain: chart.chain.clone(), sequence, nu, d })
}

/// Coefficient of the lowest term obtained by dividing out t_j^{order} and
/// restricting, for every divisor in turn. Two functions with equal chain
/// values differ at leading order by the ratio of these coefficients.
pub fn raw_leading(g: &LaurentPoly, chart: &ChainChart) -> Result<(Vec<i64>, RatFn)> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut cur = RatFn::from_poly(g.clone());
    let mut orders = Vec::new();
    for t in &chart.divisor_vars {
        let o = cur.order(t)?;
        orders.push(o);
        let shifted = RatFn::new(cur.num.divide_by_power(t, o), cur.den.clone())?;
        cur = shifted.restrict(t)?;
    }
    Ok((orders, cur))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasFile {
    pub charts: Vec<ChartFile>,
    #[serde(default)]
    pub extremal: BTreeMap<String, String>,
}

/// One chart per maximal chain, plus optional ambient expressions of the
/// extremal functions.
#[derive(Clone, Debug)]
pub struct Atlas {
    charts: BTreeMap<Chain, ChainChart>,
    extremal: BTreeMap<String, LaurentPoly>,
}

impl Atlas {
    pub fn new(charts: Vec<ChainChart>, extremal: BTreeMap<String, LaurentPoly>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for c in charts {
            let key = c.chain.clone();
            if map.insert(key.clone(), c).is_some() {
                return Err(Error::Chart { chain: key.to_string(), msg: "duplicate chart".into() });
            }
        }
        let atlas = Self { charts: map, extremal };
        atlas.check_extremal()?;
        Ok(atlas)
    }

    pub fn from_file(f: &AtlasFile, ps: &StratPoset) -> Result<Self> {
        let charts = f.charts.iter().map(|c| ChainChart::new(c, ps)).collect::<Result<Vec<_>>>()?;
        let mut extremal = BTreeMap::new();
        for (id, s) in &f.extremal {
            if !ps.contains(id) {
                return Err(Error::UnknownId(id.clone()));
            }
            extremal.insert(id.clone(), LaurentPoly::parse(s)?);
        }
        Self::new(charts, extremal)
    }

    /// Reads every `*.json` chart in `dir`; `extremal.json` holds the ambient
    /// extremal functions.
    pub fn load_dir(dir: &Path, ps: &StratPoset) -> Result<Self> {
        let mut entries: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| Error::Schema(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        let mut file = AtlasFile { charts: Vec::new(), extremal: BTreeMap::new() };
        for p in entries {
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Schema(format!("{}: {e}", p.display())))?;
            let located = |e: serde_json::Error| Error::Schema(format!("{}: {e}", p.display()));
            if p.file_name().is_some_and(|n| n == "extremal.json") {
                file.extremal = serde_json::from_str(&text).map_err(located)?;
            } else {
                file.charts.push(serde_json::from_str(&text).map_err(located)?);
            }
        }
        Self::from_file(&file, ps)
    }

    fn check_extremal(&self) -> Result<()> {
        for chart in self.charts.values() {
            for (id, amb) in &self.extremal {
                let Some(local) = chart.f_exprs.get(id) else { continue };
                if chart.ambient_map.is_empty() {
                    continue;
                }
                let pulled = chart.pull_back(amb)?;
                if &pulled != local {
                    return Err(Error::Chart {
                        chain: chart.chain.to_string(),
                        msg: format!("f_exprs[{id}] disagrees with the pulled-back extremal function"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn charts(&self) -> impl Iterator<Item = &ChainChart> {
        self.charts.values()
    }

    pub fn chart(&self, c: &Chain) -> Result<&ChainChart> {
        self.charts.get(c).ok_or_else(|| Error::MissingChart(c.to_string()))
    }

    pub fn extremal(&self) -> &BTreeMap<String, LaurentPoly> {
        &self.extremal
    }

    /// Fails unless every maximal chain of `ps` has a chart.
    pub fn check_covers(&self, ps: &StratPoset) -> Result<()> {
        for c in ps.maximal_chains() {
            self.chart(&c)?;
        }
        Ok(())
    }

    /// Chain values of an ambient polynomial on every chart, in chain order.
    pub fn chain_values(&self, g: &LaurentPoly) -> Result<Vec<ValResult>> {
        self.chain_values_with(|chart| chart.pull_back(g))
    }

    /// Chain values of a function given per chart.
    pub fn chain_values_with<F>(&self, local: F) -> Result<Vec<ValResult>>
    where
        F: Fn(&ChainChart) -> Result<LaurentPoly> + Sync,
    {
        let charts: Vec<&ChainChart> = self.charts.values().collect();
        charts.par_iter().map(|c| sequence_of_functions(&local(c)?, c)).collect()
    }
}

fn min_value(results: &[ValResult], ord: &TotalOrder) -> Result<AVector> {
    let mut best: Option<&AVector> = None;
    for r in results {
        best = match best {
            None => Some(&r.value),
            Some(b) if lex_compare(&r.value, b, ord)? == Ordering::Less => Some(&r.value),
            keep => keep,
        };
    }
    best.cloned().ok_or_else(|| Error::MissingChart("atlas is empty".into()))
}

/// The quasi-valuation 𝒱(g): lexicographic minimum of the chain values.
pub fn quasi_valuation(g: &LaurentPoly, atlas: &Atlas, ord: &TotalOrder) -> Result<AVector> {
    min_value(&atlas.chain_values(g)?, ord)
}

pub fn quasi_valuation_with<F>(atlas: &Atlas, ord: &TotalOrder, local: F) -> Result<AVector>
where
    F: Fn(&ChainChart) -> Result<LaurentPoly> + Sync,
{
    min_value(&atlas.chain_values_with(local)?, ord)
}

/// 𝒱(f_q), computed from the chart-local extremal expressions.
pub fn extremal_valuation(q: &str, atlas: &Atlas, ord: &TotalOrder) -> Result<AVector> {
    quasi_valuation_with(atlas, ord, |c| {
        c.f_expr(q).cloned().ok_or_else(|| Error::Chart { chain: c.chain.to_string(), msg: format!("no f_exprs entry for `{q}`") })
    })
}

pub fn support(v: &AVector) -> BTreeSet<String> {
    v.support()
}

/// Chains on which the minimum defining 𝒱(g) is attained.
pub fn chains_attaining(g: &LaurentPoly, atlas: &Atlas, ord: &TotalOrder) -> Result<Vec<Chain>> {
    let results = atlas.chain_values(g)?;
    attaining(&results, ord)
}

pub fn attaining(results: &[ValResult], ord: &TotalOrder) -> Result<Vec<Chain>> {
    let best = min_value(results, ord)?;
    Ok(results.iter().filter(|r| r.value == best).map(|r| r.chain.clone()).collect())
}

/// min over covers q of p of ν_{p,q}(g) / b_{p,q}, with g an ambient polynomial.
pub fn rees_min(g: &LaurentPoly, p: &str, ps: &StratPoset, atlas: &Atlas) -> Result<Rational> {
    rees_min_with(p, ps, atlas, |c| c.pull_back(g))
}

pub fn rees_min_with<F>(p: &str, ps: &StratPoset, atlas: &Atlas, local: F) -> Result<Rational>
where
    F: Fn(&ChainChart) -> Result<LaurentPoly>,
{
    let covers: Vec<_> = ps.covers().iter().filter(|c| c.upper == p).collect();
    if covers.is_empty() {
        return Err(Error::InvalidPoset(format!("`{p}` has no covers")));
    }
    let mut best: Option<Rational> = None;
    for cv in covers {
        let chart = atlas
            .charts()
            .find(|c| {
                let pos = c.chain.position(p);
                pos.is_some() && c.chain.ids().get(pos.unwrap() + 1) == Some(&cv.lower)
            })
            .ok_or_else(|| Error::MissingChart(format!("through {} > {}", p, cv.lower)))?;
        let j = chart.chain.position(p).unwrap();
        let mut f = local(chart)?;
        for k in 0..j {
            let t = &chart.divisor_vars[k];
            if f.is_zero() || f.min_exponent(t)? != 0 {
                return Err(Error::Chart {
                    chain: chart.chain.to_string(),
                    msg: format!("function vanishes on the stratum of `{p}`"),
                });
            }
            f = f.set_zero(t)?;
        }
        let o = f.min_exponent(&chart.divisor_vars[j])?;
        let ratio = int(o) / int(cv.bond as i64);
        best = Some(match best {
            Some(b) if b <= ratio => b,
            _ => ratio,
        });
    }
    Ok(best.unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::strat_poset::{Cover, Element};

    fn elliptic1() -> (StratPoset, ChainChart) {
        let ps = StratPoset::new(
            vec![
                Element { id: "X1".into(), label: String::new(), fdeg: 1 },
                Element { id: "X0".into(), label: String::new(), fdeg: 1 },
            ],
            vec![Cover { upper: "X1".into(), lower: "X0".into(), bond: 3 }],
            true,
        )
        .unwrap();
        let file = ChartFile {
            chain: vec!["X1".into(), "X0".into()],
            divisor_vars: vec!["u".into(), "a".into()],
            extra_vars: vec![],
            f_exprs: [("X1".to_string(), "a*u^3".to_string()), ("X0".to_string(), "a".to_string())].into(),
            ambient_map: [
                ("x".to_string(), "a*u".to_string()),
                ("y".to_string(), "a".to_string()),
                ("z".to_string(), "a*u^3".to_string()),
            ]
            .into(),
        };
        let chart = ChainChart::new(&file, &ps).unwrap();
        (ps, chart)
    }

    #[test]
    fn elliptic_values() {
        let (_, chart) = elliptic1();
        let x = chart.pull_back(&LaurentPoly::parse("x").unwrap()).unwrap();
        let r = sequence_of_functions(&x, &chart).unwrap();
        assert_eq!(r.value, AVector::from_pairs([("X1", rat(1, 3)), ("X0", rat(2, 3))]));
        let c = sequence_of_functions(&LaurentPoly::constant(int(5)), &chart).unwrap();
        assert!(c.value.is_zero());
        assert!(sequence_of_functions(&LaurentPoly::zero(), &chart).is_err());
    }

    #[test]
    fn bond_mismatch_is_rejected() {
        let (ps, _) = elliptic1();
        let file = ChartFile {
            chain: vec!["X1".into(), "X0".into()],
            divisor_vars: vec!["u".into(), "a".into()],
            extra_vars: vec![],
            f_exprs: [("X1".to_string(), "a*u^2".to_string()), ("X0".to_string(), "a".to_string())].into(),
            ambient_map: BTreeMap::new(),
        };
        assert!(matches!(ChainChart::new(&file, &ps), Err(Error::Chart { .. })));
    }

    #[test]
    fn ratfn_order_and_restriction() {
        let f = RatFn::new(LaurentPoly::parse("t*u + t^2").unwrap(), LaurentPoly::parse("t + t*u").unwrap()).unwrap();
        assert_eq!(f.order("t").unwrap(), 0);
        let r = f.restrict("t").unwrap();
        assert_eq!(r.num, LaurentPoly::parse("u").unwrap());
        assert_eq!(r.den, LaurentPoly::parse("1 + u").unwrap());
    }
}
