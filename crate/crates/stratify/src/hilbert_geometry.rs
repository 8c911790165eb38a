//! The Newton-Okounkov simplicial complex, rational structures on its
//! simplexes, volumes, degrees and Hilbert functions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chart_valuation::{quasi_valuation, Atlas};
use crate::coord_ring::GradedQuotient;
use crate::error::{Error, Result};
use crate::exact_arith::{int, serialize_rational, AVector, LaurentPoly, Rational, TotalOrder};
use crate::fan_monoids::{is_saturated, lattice_lc, MonoidFan};
use crate::lattice::{det, int_kernel, solve, LatticeQ};
use crate::strat_poset::{Chain, StratPoset};

/// Refuse Ehrhart enumerations with more candidates than this.
pub const MAX_CANDIDATES: f64 = 1e7;

/// Convex hull of e_p / deg f_p over a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexQ {
    pub chain: Chain,
    pub vertices: Vec<AVector>,
}

pub fn simplex(ps: &StratPoset, c: &Chain) -> Result<SimplexQ> {
    let vertices = c
        .ids()
        .iter()
        .map(|p| Ok(AVector::single(p, Rational::new(1.into(), ps.fdeg(p)?.into()))))
        .collect::<Result<_>>()?;
    Ok(SimplexQ { chain: c.clone(), vertices })
}

/// One maximal simplex per maximal chain.
pub fn no_complex(ps: &StratPoset) -> Result<Vec<SimplexQ>> {
    ps.maximal_chains().iter().map(|c| simplex(ps, c)).collect()
}

/// A simplex on the poset elements `face` with lattice Λ, presented as a
/// lattice simplex D in Z^k after translating by a base point of minimal
/// positive degree g and choosing a basis of Λ ∩ ker(deg).
#[derive(Clone, Debug)]
pub struct RationalStructure {
    pub face: Vec<String>,
    pub lattice: LatticeQ,
    pub base: AVector,
    /// Degree of the base point; nΔ meets Λ only when g divides n.
    pub g: Rational,
    pub l0_basis: Vec<AVector>,
    /// Vertices of D: coordinates of g·e_p/deg f_p − base.
    pub vertices: Vec<Vec<Rational>>,
}

fn degree_of(ps: &StratPoset, v: &AVector) -> Result<Rational> {
    let mut d = Rational::zero();
    for (p, q) in v.entries() {
        d += q * int(ps.fdeg(p)? as i64);
    }
    Ok(d)
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Rational structure on the simplex of a maximal chain, based at
/// ℓ₁ = e_{p_0} / deg f_{p_0}, which must lie in the lattice.
pub fn rational_structure(ps: &StratPoset, c: &Chain, lattice: &LatticeQ) -> Result<RationalStructure> {
    let bottom = c.bottom();
    let l1 = AVector::single(bottom, Rational::new(1.into(), ps.fdeg(bottom)?.into()));
    if !lattice.contains(&l1) {
        return Err(Error::Lattice(format!("e_{bottom}/deg f_{bottom} is not in the lattice of {c}")));
    }
    structure_with_base(ps, c.ids(), lattice, l1)
}

/// Rational structure on an arbitrary face, based at a lattice point of
/// minimal positive degree.
pub fn face_structure(ps: &StratPoset, face: &[String], lattice: &LatticeQ) -> Result<RationalStructure> {
    let basis = lattice.basis();
    if basis.is_empty() {
        return Err(Error::Lattice("zero lattice".into()));
    }
    let degs = basis.iter().map(|b| degree_of(ps, b)).collect::<Result<Vec<_>>>()?;
    let den = degs.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    let ints: Vec<BigInt> = degs.iter().map(|d| (d * Rational::from(den.clone())).to_integer()).collect();
    // Extended gcd over the basis degrees.
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); ints.len()];
    for (i, x) in ints.iter().enumerate() {
        let (d, s, t) = ext_gcd(&g, x);
        for c in coeffs.iter_mut().take(i) {
            *c *= &s;
        }
        coeffs[i] = t;
        g = d;
    }
    if g.is_negative() {
        g = -g;
        coeffs.iter_mut().for_each(|c| *c = -c.clone());
    }
    if g.is_zero() {
        return Err(Error::Lattice("lattice has no point of positive degree".into()));
    }
    let mut base = AVector::zero();
    for (c, b) in coeffs.iter().zip(&basis) {
        base = &base + &b.scale(&Rational::from(c.clone()));
    }
    structure_with_base(ps, face, lattice, base)
}

fn structure_with_base(ps: &StratPoset, face: &[String], lattice: &LatticeQ, base: AVector) -> Result<RationalStructure> {
    let g = degree_of(ps, &base)?;
    if g <= Rational::zero() {
        return Err(Error::Lattice("base point must have positive degree".into()));
    }
    let basis = lattice.basis();
    if basis.len() != face.len() {
        return Err(Error::Lattice(format!("lattice has rank {} on a face of size {}", basis.len(), face.len())));
    }
    // 𝓛₀ = Λ ∩ ker deg, via the integer kernel of deg∘B.
    let degs = basis.iter().map(|b| degree_of(ps, b)).collect::<Result<Vec<_>>>()?;
    let den = degs.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    let row: Vec<BigInt> = degs.iter().map(|d| (d * Rational::from(den.clone())).to_integer()).collect();
    let kernel = int_kernel(&[row], basis.len());
    let l0_basis: Vec<AVector> = kernel
        .iter()
        .map(|k| {
            k.iter().zip(&basis).fold(AVector::zero(), |acc, (ki, b)| &acc + &b.scale(&Rational::from(ki.clone())))
        })
        .collect();
    let r = l0_basis.len();
    let mut vertices = Vec::with_capacity(face.len());
    for p in face {
        let v = &AVector::single(p, &g / int(ps.fdeg(p)? as i64)) - &base;
        vertices.push(coords_in(&l0_basis, face, &v)?);
    }
    debug_assert!(vertices.iter().all(|v| v.len() == r));
    Ok(RationalStructure { face: face.to_vec(), lattice: lattice.clone(), base, g, l0_basis, vertices })
}

/// Coordinates of v in an independent family w_i, via the normal equations.
fn coords_in(w: &[AVector], coords: &[String], v: &AVector) -> Result<Vec<Rational>> {
    let r = w.len();
    if r == 0 {
        return if v.is_zero() { Ok(Vec::new()) } else { Err(Error::Internal("vector outside a zero span".into())) };
    }
    let dot = |a: &AVector, b: &AVector| -> Rational { coords.iter().map(|c| a.get(c) * b.get(c)).sum() };
    let gram: Vec<Vec<Rational>> = w.iter().map(|a| w.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<Rational> = w.iter().map(|a| dot(a, v)).collect();
    let y = solve(&gram, &rhs).ok_or_else(|| Error::Internal("dependent lattice basis".into()))?;
    let back = y.iter().zip(w).fold(AVector::zero(), |acc, (yi, wi)| &acc + &wi.scale(yi));
    if &back != v {
        return Err(Error::Internal("vertex not in the span of the degree-zero lattice".into()));
    }
    Ok(y)
}

/// Euclidean volume of D: |det(v_i − v_0)| / r!; a point has volume 1.
pub fn volume(rs: &RationalStructure) -> Result<Rational> {
    let r = rs.vertices.len().saturating_sub(1);
    if r == 0 {
        return Ok(Rational::one());
    }
    let v0 = &rs.vertices[0];
    let m: Vec<Vec<Rational>> = rs.vertices[1..].iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
    let d = det(m).abs();
    if d.is_zero() {
        return Err(Error::Lattice("degenerate simplex".into()));
    }
    Ok(d / factorial(r))
}

fn factorial(r: usize) -> Rational {
    (1..=r as i64).map(int).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainVolume {
    pub chain: String,
    #[serde(serialize_with = "serialize_rational")]
    pub volume: Rational,
}

/// r!·Σ_C vol(D_C), with L^C wherever `lattices` has no entry.
pub fn degree(ps: &StratPoset, lattices: &BTreeMap<Chain, LatticeQ>) -> Result<(Rational, Vec<ChainVolume>)> {
    let chains = ps.maximal_chains();
    let rows = chains
        .par_iter()
        .map(|c| {
            let l = match lattices.get(c) {
                Some(l) => l.clone(),
                None => lattice_lc(ps, c)?,
            };
            let rs = rational_structure(ps, c, &l)?;
            Ok(ChainVolume { chain: c.to_string(), volume: volume(&rs)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let r = chains.iter().map(|c| c.rank()).max().unwrap_or(0);
    let total: Rational = rows.iter().map(|x| x.volume.clone()).sum::<Rational>() * factorial(r);
    Ok((total, rows))
}

/// 𝓛^C approximated by the Z-span of 𝒱(g) over the nonzero monomials g of
/// degree ≤ `max_degree` whose value is supported on C. Chains without any
/// such value, or whose images have deficient rank, are left out, so
/// [`degree`] falls back to L^C there.
pub fn image_lattices(
    ps: &StratPoset,
    atlas: &Atlas,
    ring: &GradedQuotient,
    ord: &TotalOrder,
    max_degree: u32,
) -> Result<BTreeMap<Chain, LatticeQ>> {
    let mut monos = Vec::new();
    for d in 1..=max_degree {
        let slice = ring.slice(d)?;
        for m in ring.monomials(d)? {
            let g = LaurentPoly::term(m, Rational::one());
            if slice.normal_form(&g)?.iter().any(|x| !x.is_zero()) {
                monos.push(g);
            }
        }
    }
    let images = monos.par_iter().map(|g| quasi_valuation(g, atlas, ord)).collect::<Result<BTreeSet<AVector>>>()?;
    let mut per_chain: BTreeMap<Chain, Vec<AVector>> = BTreeMap::new();
    for a in images {
        for c in ps.chains_through(&a.support()) {
            per_chain.entry(c).or_default().push(a.clone());
        }
    }
    let mut out = BTreeMap::new();
    for (c, v) in per_chain {
        let l = LatticeQ::generated(c.ids(), &v)?;
        if l.rank() == c.len() {
            out.insert(c, l);
        }
    }
    Ok(out)
}

/// Σ_C 1 / Π_{q∈C} deg f_q for Hodge-type posets.
pub fn hodge_degree(ps: &StratPoset) -> Result<Rational> {
    if !ps.all_bonds_one() {
        return Err(Error::NotHodge("a bond differs from 1".into()));
    }
    let mut total = Rational::zero();
    for c in ps.maximal_chains() {
        let mut prod = Rational::one();
        for p in c.ids() {
            prod *= int(ps.fdeg(p)? as i64);
        }
        total += prod.recip();
    }
    Ok(total)
}

/// #(nΔ ∩ Λ) = #((n/g)·D ∩ Z^r), by enumerating the bounding box.
pub fn ehrhart_count(rs: &RationalStructure, n: u64) -> Result<u64> {
    let q = int(n as i64) / &rs.g;
    if !q.is_integer() {
        return Ok(0);
    }
    let k = q.to_integer();
    let r = rs.l0_basis.len();
    if r == 0 {
        return Ok(1);
    }
    let scaled: Vec<Vec<Rational>> =
        rs.vertices.iter().map(|v| v.iter().map(|x| x * Rational::from(k.clone())).collect()).collect();
    let lo: Vec<BigInt> = (0..r).map(|i| scaled.iter().map(|v| v[i].floor().to_integer()).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..r).map(|i| scaled.iter().map(|v| v[i].ceil().to_integer()).max().unwrap()).collect();
    let mut cands = 1f64;
    for (a, b) in lo.iter().zip(&hi) {
        cands *= (b - a + 1u32).to_f64().unwrap_or(f64::INFINITY);
    }
    if cands > MAX_CANDIDATES {
        return Err(Error::Bound(format!("{cands:.0} lattice candidates exceed the limit of {MAX_CANDIDATES:.0}")));
    }
    if k.is_zero() {
        return Ok(1);
    }
    // Barycentric coordinates: λ = M⁻¹ (y, 1) with M columns (v_i, 1).
    let m = r + 1;
    let cols: Vec<Vec<Rational>> = scaled.iter().map(|v| v.iter().cloned().chain([Rational::one()]).collect()).collect();
    let mat: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|j| cols[j][i].clone()).collect()).collect();
    let inv = invert(&mat).ok_or_else(|| Error::Lattice("degenerate simplex".into()))?;
    let mut count = 0u64;
    let mut y: Vec<BigInt> = lo.clone();
    loop {
        let point: Vec<Rational> = y.iter().map(|v| Rational::from(v.clone())).chain([Rational::one()]).collect();
        let inside = inv.iter().all(|row| row.iter().zip(&point).map(|(a, b)| a * b).sum::<Rational>() >= Rational::zero());
        if inside {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(count);
            }
            y[i] += 1;
            if y[i] <= hi[i] {
                break;
            }
            y[i] = lo[i].clone();
            i += 1;
        }
    }
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
            solve(m, &e)
        })
        .collect::<Option<_>>()?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Lattice of a face S = ∩I: the intersection of the chain lattices restricted to S.
fn face_lattice(chains: &[&Chain], face: &BTreeSet<String>, lattices: &BTreeMap<Chain, LatticeQ>) -> Result<LatticeQ> {
    let mut acc: Option<LatticeQ> = None;
    for c in chains {
        let l = lattices.get(*c).ok_or_else(|| Error::Lattice(format!("no lattice for {c}")))?.restrict_to(face);
        acc = Some(match acc {
            None => l,
            Some(a) => a.intersect(&l)?,
        });
    }
    acc.ok_or_else(|| Error::Internal("empty chain subset".into()))
}

/// Σ over nonempty sets I of maximal chains of (−1)^{|I|−1}·#(n·Δ_{∩I} ∩ Λ_{∩I}).
/// Assumes the stratification is normal; see [`hilbert_for_fan`].
pub fn hilbert_incl_excl(ps: &StratPoset, lattices: &BTreeMap<Chain, LatticeQ>, n: u64) -> Result<i64> {
    let chains = ps.maximal_chains();
    let mut full = lattices.clone();
    for c in &chains {
        if !full.contains_key(c) {
            full.insert(c.clone(), lattice_lc(ps, c)?);
        }
    }
    let k = chains.len();
    if k > 20 {
        return Err(Error::Bound(format!("{k} maximal chains is too many for inclusion-exclusion")));
    }
    let masks: Vec<u32> = (1..(1u32 << k)).collect();
    let terms = masks
        .par_iter()
        .map(|&mask| -> Result<i64> {
            let subset: Vec<&Chain> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &chains[i]).collect();
            let mut face: BTreeSet<String> = subset[0].ids().iter().cloned().collect();
            for c in &subset[1..] {
                face.retain(|p| c.contains(p));
            }
            if face.is_empty() {
                return Ok(0);
            }
            let ordered: Vec<String> = subset[0].ids().iter().filter(|p| face.contains(*p)).cloned().collect();
            let lat = face_lattice(&subset, &face, &full)?;
            let rs = face_structure(ps, &ordered, &lat)?;
            let cnt = ehrhart_count(&rs, n)? as i64;
            Ok(if subset.len() % 2 == 1 { cnt } else { -cnt })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().sum())
}

/// Inclusion-exclusion with the fan's lattices, refusing when a chain monoid
/// fails the bounded saturation check.
pub fn hilbert_for_fan(ps: &StratPoset, fan: &MonoidFan, n: u64, bound: i64) -> Result<i64> {
    let mut lattices = BTreeMap::new();
    for c in fan.chains() {
        let rep = is_saturated(fan, c, bound)?;
        if !rep.saturated {
            return Err(Error::Fan(format!(
                "monoid of {c} is not saturated (witness {}); the Hilbert function formula needs a normal fan",
                rep.witness.map(|w| w.to_string()).unwrap_or_default()
            )));
        }
        lattices.insert(c.clone(), fan.lattice(c)?.clone());
    }
    hilbert_incl_excl(ps, &lattices, n)
}

/// Stanley-Reisner count: monomials Π t_p^{a_p} of weighted degree n with
/// support a chain.
pub fn sr_hilbert(ps: &StratPoset, n: u64) -> Result<u64> {
    let mut total: u64 = if n == 0 { 1 } else { 0 };
    for face in ps.order_complex() {
        let weights = face.ids().iter().map(|p| ps.fdeg(p)).collect::<Result<Vec<_>>>()?;
        let base: u64 = weights.iter().sum();
        if base > n {
            continue;
        }
        // Every weight used at least once; distribute the rest freely.
        let rest = (n - base) as usize;
        let mut ways = vec![0u64; rest + 1];
        ways[0] = 1;
        for w in &weights {
            let w = *w as usize;
            for s in w..=rest {
                ways[s] += ways[s - w];
            }
        }
        total += ways[rest];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat_poset::generic_model;

    #[test]
    fn generic_model_degrees() {
        for s in 2..=5 {
            for r in 2..=3 {
                let ps = generic_model(s, r).unwrap();
                let (d, _) = degree(&ps, &BTreeMap::new()).unwrap();
                assert_eq!(d, int(s as i64), "s={s} r={r}");
            }
        }
    }

    #[test]
    fn chain_sr_counts() {
        let ps = generic_model(1, 1).unwrap();
        for n in 0..6 {
            assert_eq!(sr_hilbert(&ps, n).unwrap(), n + 1);
            assert_eq!(hilbert_incl_excl(&ps, &BTreeMap::new(), n).unwrap(), n as i64 + 1);
        }
    }
}
