//! Fans of monoids Γ = ∪ Γ_C and their lattices.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chart_valuation::{quasi_valuation, Atlas};
use crate::error::{Error, Result};
use crate::exact_arith::{int, AVector, LaurentPoly, Rational, TotalOrder};
use crate::lattice::LatticeQ;
use crate::strat_poset::{Chain, StratPoset};

/// L^C: the lattice with basis e_{p_j} / (b_r ⋯ b_j) along a maximal chain.
pub fn lattice_lc(ps: &StratPoset, c: &Chain) -> Result<LatticeQ> {
    if !ps.maximal_chains().contains(c) {
        return Err(Error::Lattice(format!("{c} is not a maximal chain")));
    }
    let bonds = ps.chain_bonds(c)?;
    let mut prod = Rational::one();
    let basis: Vec<AVector> = c
        .ids()
        .iter()
        .zip(&bonds)
        .map(|(p, b)| {
            prod *= int(*b as i64);
            AVector::single(p, prod.recip())
        })
        .collect();
    LatticeQ::generated(c.ids(), &basis)
}

/// 𝓛^C: the Z-span of the given vectors, in the coordinates of `c`.
pub fn lattice_generated(c: &Chain, vectors: &[AVector]) -> Result<LatticeQ> {
    LatticeQ::generated(c.ids(), vectors)
}

/// Generators of each Γ_C, plus the lattice used for saturation checks.
#[derive(Clone, Debug)]
pub struct MonoidFan {
    gens: BTreeMap<Chain, Vec<AVector>>,
    lattices: BTreeMap<Chain, LatticeQ>,
    fdeg: BTreeMap<String, u64>,
}

impl MonoidFan {
    pub fn new(ps: &StratPoset, gens: BTreeMap<Chain, Vec<AVector>>) -> Result<Self> {
        let chains = ps.maximal_chains();
        let mut lattices = BTreeMap::new();
        for (c, gs) in &gens {
            if !chains.contains(c) {
                return Err(Error::Fan(format!("{c} is not a maximal chain")));
            }
            for g in gs {
                if !g.is_nonnegative() || g.support().iter().any(|p| !c.contains(p)) {
                    return Err(Error::Fan(format!("generator {g} does not lie in Q_{{>=0}}^{c}")));
                }
            }
            let nonzero: Vec<AVector> = gs.iter().filter(|g| !g.is_zero()).cloned().collect();
            if nonzero.is_empty() {
                return Err(Error::Fan(format!("no generators on {c}")));
            }
            lattices.insert(c.clone(), lattice_generated(c, &nonzero)?);
        }
        let gens = gens
            .into_iter()
            .map(|(c, gs)| {
                let set: BTreeSet<AVector> = gs.into_iter().filter(|g| !g.is_zero()).collect();
                (c, set.into_iter().collect())
            })
            .collect();
        Ok(Self { gens, lattices, fdeg: ps.fdeg_map() })
    }

    /// Collects valuation images into every chain containing their support.
    pub fn from_images(ps: &StratPoset, images: &[AVector]) -> Result<Self> {
        let mut gens: BTreeMap<Chain, Vec<AVector>> = BTreeMap::new();
        for a in images {
            let through = ps.chains_through(&a.support());
            if through.is_empty() {
                return Err(Error::Fan(format!("support of {a} is not a chain")));
            }
            for c in through {
                gens.entry(c).or_default().push(a.clone());
            }
        }
        Self::new(ps, gens)
    }

    /// Overrides the lattice used by [`is_saturated`] on one chain.
    pub fn set_lattice(&mut self, c: &Chain, l: LatticeQ) -> Result<()> {
        if !self.gens.contains_key(c) {
            return Err(Error::Fan(format!("{c} is not part of the fan")));
        }
        self.lattices.insert(c.clone(), l);
        Ok(())
    }

    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.gens.keys()
    }

    pub fn generators(&self, c: &Chain) -> Result<&[AVector]> {
        self.gens.get(c).map(Vec::as_slice).ok_or_else(|| Error::Fan(format!("{c} is not part of the fan")))
    }

    pub fn lattice(&self, c: &Chain) -> Result<&LatticeQ> {
        self.lattices.get(c).ok_or_else(|| Error::Fan(format!("{c} is not part of the fan")))
    }

    pub fn degree(&self, a: &AVector) -> Rational {
        a.entries().iter().map(|(p, q)| q * int(*self.fdeg.get(p).unwrap_or(&0) as i64)).sum()
    }

    /// Whether `a` lies in the monoid generated by Γ_C's generators.
    pub fn contains_in(&self, c: &Chain, a: &AVector) -> Result<bool> {
        let gens = self.generators(c)?;
        if a.support().iter().any(|p| !c.contains(p)) || !a.is_nonnegative() {
            return Ok(false);
        }
        Ok(monoid_member(gens, a, 0))
    }

    pub fn contains(&self, a: &AVector) -> bool {
        let s = a.support();
        self.gens.keys().any(|c| s.iter().all(|p| c.contains(p)) && self.contains_in(c, a).unwrap_or(false))
    }

    /// All elements of Γ_C of degree at most `max` (as a sorted set).
    pub fn elements_up_to(&self, c: &Chain, max: &Rational) -> Result<BTreeSet<AVector>> {
        let gens = self.generators(c)?;
        let degs: Vec<Rational> = gens.iter().map(|g| self.degree(g)).collect();
        if degs.iter().any(|d| d <= &Rational::zero()) {
            return Err(Error::Fan(format!("a generator on {c} has nonpositive degree")));
        }
        let mut out = BTreeSet::new();
        let mut frontier = vec![AVector::zero()];
        out.insert(AVector::zero());
        while let Some(a) = frontier.pop() {
            let da = self.degree(&a);
            for (g, dg) in gens.iter().zip(&degs) {
                if &(&da + dg) <= max {
                    let b = &a + g;
                    if out.insert(b.clone()) {
                        frontier.push(b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Elements of Γ of degree exactly `m`, deduplicated across chains.
    pub fn gamma_degree_slice(&self, m: i64) -> Result<Vec<AVector>> {
        if m < 0 {
            return Err(Error::Fan("negative degree".into()));
        }
        let target = int(m);
        let per_chain: Vec<BTreeSet<AVector>> = self
            .gens
            .keys()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|c| self.elements_up_to(c, &target))
            .collect::<Result<_>>()?;
        let mut all = BTreeSet::new();
        for set in per_chain {
            all.extend(set.into_iter().filter(|a| self.degree(a) == target));
        }
        Ok(all.into_iter().collect())
    }

    fn pos(&self, c: &Chain, p: &str) -> usize {
        c.position(p).unwrap_or(usize::MAX)
    }

    /// True if min supp a1 ≥ max supp a2 along `c` (a1 sits weakly above a2).
    fn above(&self, c: &Chain, a1: &AVector, a2: &AVector) -> bool {
        let low1 = a1.support().iter().map(|p| self.pos(c, p)).max();
        let high2 = a2.support().iter().map(|p| self.pos(c, p)).min();
        match (low1, high2) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        }
    }

    /// Elements of Γ_C of degree ≤ max_degree with no split a = a1 + a2,
    /// a1, a2 ∈ Γ_C nonzero, min supp a1 ≥ max supp a2.
    pub fn indecomposables(&self, c: &Chain, max_degree: i64) -> Result<Vec<AVector>> {
        let elems = self.elements_up_to(c, &int(max_degree))?;
        let mut out = Vec::new();
        for a in elems.iter().filter(|a| !a.is_zero()) {
            let split = elems.iter().any(|a1| {
                if a1.is_zero() || a1 == a {
                    return false;
                }
                let a2 = a - a1;
                !a2.is_zero() && a2.is_nonnegative() && elems.contains(&a2) && self.above(c, a1, &a2)
            });
            if !split {
                out.push(a.clone());
            }
        }
        Ok(out)
    }

    /// Indecomposables over all chains, deduplicated.
    pub fn all_indecomposables(&self, max_degree: i64) -> Result<Vec<AVector>> {
        let mut set = BTreeSet::new();
        for c in self.gens.keys() {
            set.extend(self.indecomposables(c, max_degree)?);
        }
        Ok(set.into_iter().collect())
    }

    /// Writes a ∈ Γ_C as a top-down sequence of indecomposables.
    pub fn decompose(&self, a: &AVector, c: &Chain) -> Result<Vec<AVector>> {
        if a.is_zero() {
            return Ok(Vec::new());
        }
        if !self.contains_in(c, a)? {
            return Err(Error::Fan(format!("{a} is not in the monoid of {c}")));
        }
        let deg = self.degree(a);
        let bound = deg.ceil().to_integer().try_into().map_err(|_| Error::Bound("degree too large".into()))?;
        let mut ind = self.indecomposables(c, bound)?;
        // Prefer factors sitting highest on the chain, then the largest ones.
        ind.sort_by(|x, y| {
            let kx = x.support().iter().map(|p| self.pos(c, p)).min();
            let ky = y.support().iter().map(|p| self.pos(c, p)).min();
            kx.cmp(&ky).then_with(|| y.cmp(x))
        });
        let mut out = Vec::new();
        if self.decompose_rec(a, c, &ind, None, &mut out) {
            Ok(out)
        } else {
            Err(Error::Fan(format!("no standard decomposition of {a} on {c}")))
        }
    }

    fn decompose_rec(&self, a: &AVector, c: &Chain, ind: &[AVector], prev: Option<&AVector>, out: &mut Vec<AVector>) -> bool {
        if a.is_zero() {
            return true;
        }
        for x in ind {
            let rest = a - x;
            if !rest.is_nonnegative() {
                continue;
            }
            if let Some(p) = prev {
                if !self.above(c, p, x) {
                    continue;
                }
            }
            if !rest.is_zero() && !self.above(c, x, &rest) {
                continue;
            }
            if !rest.is_zero() && !self.contains_in(c, &rest).unwrap_or(false) {
                continue;
            }
            out.push(x.clone());
            if self.decompose_rec(&rest, c, ind, Some(x), out) {
                return true;
            }
            out.pop();
        }
        false
    }
}

fn monoid_member(gens: &[AVector], a: &AVector, start: usize) -> bool {
    if a.is_zero() {
        return true;
    }
    for (i, g) in gens.iter().enumerate().skip(start) {
        let rest = a - g;
        if rest.is_nonnegative() && monoid_member(gens, &rest, i) {
            return true;
        }
    }
    false
}

/// Product in the fan algebra: a + b when the joint support is a chain.
pub fn fan_mult(a: &AVector, b: &AVector, ps: &StratPoset) -> Result<Option<AVector>> {
    let s: BTreeSet<String> = a.support().union(&b.support()).cloned().collect();
    Ok(ps.is_chain(&s)?.then(|| a + b))
}

/// Γ_C = ℕ^C on every maximal chain; requires all bonds of the extended
/// diagram to be 1.
pub fn hodge_fan(ps: &StratPoset) -> Result<MonoidFan> {
    if !ps.all_bonds_one() {
        return Err(Error::NotHodge("a bond differs from 1".into()));
    }
    let gens = ps
        .maximal_chains()
        .into_iter()
        .map(|c| {
            let g = c.ids().iter().map(|p| AVector::unit(p)).collect();
            (c, g)
        })
        .collect();
    MonoidFan::new(ps, gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub chain: String,
    pub saturated: bool,
    pub bound: i64,
    pub checked: usize,
    pub witness: Option<AVector>,
}

/// Bounded saturation certificate: every point of the chain lattice in the
/// nonnegative orthant of degree ≤ bound lies in the monoid.
pub fn is_saturated(fan: &MonoidFan, c: &Chain, bound: i64) -> Result<SaturationReport> {
    let lattice = fan.lattice(c)?;
    let gens = fan.generators(c)?;
    let den = lattice
        .basis()
        .iter()
        .flat_map(|v| v.entries().values().map(|q| q.denom().clone()).collect::<Vec<_>>())
        .fold(num_bigint::BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
    let den: i64 = den.try_into().map_err(|_| Error::Bound("lattice denominator too large".into()))?;
    let ids = c.ids();
    let step = Rational::new(1.into(), den.into());
    let max = int(bound);
    let mut checked = 0usize;
    let mut cur = vec![0i64; ids.len()];
    loop {
        let v = AVector::from_pairs(ids.iter().zip(&cur).map(|(p, k)| (p.as_str(), &step * int(*k))));
        if fan.degree(&v) <= max
            && lattice.contains(&v) {
                checked += 1;
                if !monoid_member(gens, &v, 0) {
                    return Ok(SaturationReport { chain: c.to_string(), saturated: false, bound, checked, witness: Some(v) });
                }
            }
        // Odometer over coordinates with degree pruning.
        let mut i = 0;
        loop {
            if i == cur.len() {
                return Ok(SaturationReport { chain: c.to_string(), saturated: true, bound, checked, witness: None });
            }
            cur[i] += 1;
            let v = AVector::from_pairs(ids.iter().zip(&cur).map(|(p, k)| (p.as_str(), &step * int(*k))));
            if fan.degree(&v) <= max {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// A core P_C: generators in Q_{≥0}^C.
#[derive(Clone, Debug)]
pub struct Core {
    pub chain: Chain,
    pub gens: Vec<AVector>,
}

impl Core {
    pub fn new(chain: Chain, gens: Vec<AVector>) -> Result<Self> {
        for g in &gens {
            if !g.is_nonnegative() || g.support().iter().any(|p| !chain.contains(p)) {
                return Err(Error::Fan(format!("core generator {g} outside Q_{{>=0}}^{chain}")));
            }
        }
        Ok(Self { chain, gens })
    }

    /// Checks g + e_p lies in the generated monoid for every generator g and p ∈ C.
    pub fn is_closed(&self) -> bool {
        self.gens
            .iter()
            .all(|g| self.chain.ids().iter().all(|p| monoid_member(&self.gens, &(g + &AVector::unit(p)), 0)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum OrderRegime {
    Exhaustive { orders: usize },
    Sampled { orders: usize, total: u128, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedReport {
    pub balanced: bool,
    pub regime: OrderRegime,
    /// An order under which the images differ, top-ranked first.
    pub witness: Option<Vec<String>>,
}

/// Number of total orders refining the length grading.
pub fn compatible_order_count(ps: &StratPoset) -> u128 {
    ps.levels().iter().map(|l| (1..=l.len() as u128).product::<u128>()).product()
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// Recomputes the valuation images of `elements` under length-compatible
/// total orders and compares with the default order. Exhaustive when at most
/// `limit` orders exist, else `samples` seeded random orders.
pub fn balanced_check(
    ps: &StratPoset,
    atlas: &Atlas,
    elements: &[LaurentPoly],
    limit: u128,
    samples: usize,
    seed: u64,
) -> Result<BalancedReport> {
    let levels = ps.levels();
    let total = compatible_order_count(ps);
    let orders: Vec<Vec<String>> = if total <= limit {
        let mut acc: Vec<Vec<String>> = vec![Vec::new()];
        for l in &levels {
            let perms = permutations(l);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend(p.iter().cloned());
                        v
                    })
                })
                .collect();
        }
        acc
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                levels
                    .iter()
                    .flat_map(|l| {
                        let mut l = l.clone();
                        l.shuffle(&mut rng);
                        l
                    })
                    .collect()
            })
            .collect()
    };
    let regime = if total <= limit {
        OrderRegime::Exhaustive { orders: orders.len() }
    } else {
        OrderRegime::Sampled { orders: orders.len(), total, seed }
    };
    let images = |ord: &TotalOrder| -> Result<BTreeSet<AVector>> {
        elements.iter().map(|g| quasi_valuation(g, atlas, ord)).collect()
    };
    let reference = images(&ps.default_order(Default::default()))?;
    for o in orders {
        let ord = TotalOrder::new(o.clone())?;
        if images(&ord)? != reference {
            return Ok(BalancedReport { balanced: false, regime, witness: Some(o) });
        }
    }
    Ok(BalancedReport { balanced: true, regime, witness: None })
}
