//! Graded quotient rings K[x_1..x_n]/I given by homogeneous relations, with
//! per-degree bases and normal forms by exact elimination.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{LaurentPoly, Monomial, Rational};

/// Refuse slices with more monomials than this.
pub const MAX_SLICE: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarSpec {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub vars: Vec<VarSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct GradedQuotient {
    vars: Vec<String>,
    degrees: Vec<u32>,
    relations: Vec<(u32, LaurentPoly)>,
}

/// One graded piece R(m): monomials (largest first), the reduced echelon form
/// of the ideal slice, and the standard (non-pivot) monomials.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    rows: Vec<(usize, Vec<Rational>)>,
    basis: Vec<usize>,
}

impl GradedQuotient {
    pub fn new(vars: Vec<VarSpec>, relations: &[LaurentPoly]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if v.degree == 0 {
                return Err(Error::Ring(format!("variable `{}` has degree 0", v.name)));
            }
            if !seen.insert(v.name.clone()) {
                return Err(Error::Ring(format!("duplicate variable `{}`", v.name)));
            }
        }
        let mut q = Self {
            vars: vars.iter().map(|v| v.name.clone()).collect(),
            degrees: vars.iter().map(|v| v.degree).collect(),
            relations: Vec::new(),
        };
        for r in relations {
            let d = q.homogeneous_degree(r)?.ok_or_else(|| Error::Ring("zero relation".into()))?;
            q.relations.push((d, r.clone()));
        }
        Ok(q)
    }

    pub fn from_file(f: &RingFile) -> Result<Self> {
        let rels = f.relations.iter().map(|s| LaurentPoly::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(f.vars.clone(), &rels)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: RingFile = serde_json::from_str(s).map_err(|e| Error::Schema(format!("ring: {e}")))?;
        Self::from_file(&f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        let f: RingFile = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        Self::from_file(&f)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.relations.iter().map(|(_, r)| r)
    }

    fn var_index(&self, v: &str) -> Result<usize> {
        self.vars.iter().position(|x| x == v).ok_or_else(|| Error::Ring(format!("unknown variable `{v}`")))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Result<u32> {
        let mut d: i64 = 0;
        for (v, e) in m {
            if *e < 0 {
                return Err(Error::Ring(format!("negative exponent of `{v}`")));
            }
            d += self.degrees[self.var_index(v)?] as i64 * e;
        }
        u32::try_from(d).map_err(|_| Error::Bound("degree overflow".into()))
    }

    /// The common degree of all terms; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self, p: &LaurentPoly) -> Result<Option<u32>> {
        let mut deg = None;
        for m in p.terms().keys() {
            let d = self.monomial_degree(m)?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Ring(format!("`{p}` is not homogeneous"))),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Graded reverse lexicographic comparison in declaration order.
    pub fn grevlex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let da = self.monomial_degree(a).unwrap_or(0);
        let db = self.monomial_degree(b).unwrap_or(0);
        da.cmp(&db).then_with(|| {
            for v in self.vars.iter().rev() {
                let ea = a.get(v).copied().unwrap_or(0);
                let eb = b.get(v).copied().unwrap_or(0);
                if ea != eb {
                    return eb.cmp(&ea);
                }
            }
            Ordering::Equal
        })
    }

    /// Monomials of degree m, largest first.
    pub fn monomials(&self, m: u32) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        let mut cur = Monomial::new();
        self.monomials_rec(0, m, &mut cur, &mut out)?;
        out.sort_by(|a, b| self.grevlex(b, a));
        Ok(out)
    }

    fn monomials_rec(&self, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) -> Result<()> {
        if i == self.vars.len() {
            if left == 0 {
                if out.len() >= MAX_SLICE {
                    return Err(Error::Bound(format!("more than {MAX_SLICE} monomials in one degree")));
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        let d = self.degrees[i];
        for e in 0..=left / d {
            if e > 0 {
                cur.insert(self.vars[i].clone(), e as i64);
            } else {
                cur.remove(&self.vars[i]);
            }
            self.monomials_rec(i + 1, left - e * d, cur, out)?;
        }
        cur.remove(&self.vars[i]);
        Ok(())
    }

    pub fn slice(&self, m: u32) -> Result<DegreeSlice> {
        let monomials = self.monomials(m)?;
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let n = monomials.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (d, rel) in &self.relations {
            if *d > m {
                continue;
            }
            for shift in self.monomials(m - d)? {
                let shifted = &LaurentPoly::term(shift, Rational::one()) * rel;
                rows.push(integer_row(&shifted, &index, n));
            }
        }
        let echelon = fraction_free_rref(rows, n);
        let pivots: Vec<usize> = echelon.iter().map(|(p, _)| *p).collect();
        let basis = (0..n).filter(|i| !pivots.contains(i)).collect();
        let rows = echelon
            .into_iter()
            .map(|(p, r)| {
                let piv = Rational::from(r[p].clone());
                (p, r.into_iter().map(|x| Rational::from(x) / &piv).collect())
            })
            .collect();
        Ok(DegreeSlice { degree: m, monomials, index, rows, basis })
    }

    pub fn degree_basis(&self, m: u32) -> Result<Vec<Monomial>> {
        Ok(self.slice(m)?.basis_monomials())
    }

    pub fn hilbert(&self, m: u32) -> Result<usize> {
        Ok(self.slice(m)?.dim())
    }

    /// Coordinates of a homogeneous polynomial in the degree basis.
    pub fn normal_form(&self, p: &LaurentPoly) -> Result<(u32, Vec<Rational>)> {
        let m = self.homogeneous_degree(p)?.ok_or(Error::ZeroPolynomial)?;
        let s = self.slice(m)?;
        Ok((m, s.normal_form(p)?))
    }
}

fn integer_row(p: &LaurentPoly, index: &HashMap<Monomial, usize>, n: usize) -> Vec<BigInt> {
    let den = p.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut row = vec![BigInt::zero(); n];
    for (m, c) in p.terms() {
        row[index[m]] = (c * Rational::from(den.clone())).to_integer();
    }
    row
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Fraction-free reduced row echelon form; pivots taken leftmost (largest
/// monomial first). Returns (pivot column, row) pairs.
fn fraction_free_rref(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut out: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut top = 0;
    for col in 0..n {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(top, p);
        let pivot = rows[top].clone();
        for i in 0..rows.len() {
            if i == top || rows[i][col].is_zero() {
                continue;
            }
            let a = rows[i][col].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot) {
                *x = &*x * &pivot[col] - &a * y;
            }
            primitive(&mut rows[i]);
        }
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    for r in rows.into_iter().take(top) {
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            let mut r = r;
            if r[p].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push((p, r));
        }
    }
    out.sort_by_key(|(p, _)| *p);
    out
}

impl DegreeSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|&i| self.monomials[i].clone()).collect()
    }

    /// Full coordinate vector over all monomials of the slice.
    pub fn dense(&self, p: &LaurentPoly) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            let i = self
                .index
                .get(m)
                .ok_or_else(|| Error::Ring(format!("`{p}` is not homogeneous of degree {}", self.degree)))?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    pub fn normal_form(&self, p: &LaurentPoly) -> Result<Vec<Rational>> {
        let mut v = self.dense(p)?;
        for (piv, row) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let f = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        Ok(self.basis.iter().map(|&i| v[i].clone()).collect())
    }

    /// The polynomial with the given basis coordinates.
    pub fn from_coords(&self, coords: &[Rational]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&i, c) in self.basis.iter().zip(coords) {
            if !c.is_zero() {
                p = &p + &LaurentPoly::term(self.monomials[i].clone(), c.clone());
            }
        }
        p
    }

    /// Normal-form representative of `p`.
    pub fn reduce(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        Ok(self.from_coords(&self.normal_form(p)?))
    }
}

/// Monomial from (variable, exponent) pairs.
pub fn monomial<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Monomial {
    pairs.into_iter().filter(|(_, e)| *e != 0).map(|(v, e)| (v.to_string(), e)).collect::<BTreeMap<_, _>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;

    fn plucker() -> GradedQuotient {
        GradedQuotient::from_json(
            r#"{"vars":[{"name":"x12","degree":1},{"name":"x13","degree":1},{"name":"x14","degree":1},
                {"name":"x23","degree":1},{"name":"x24","degree":1},{"name":"x34","degree":1}],
                "relations":["x12*x34 - x13*x24 + x14*x23"]}"#,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_ring_counts() {
        let q = GradedQuotient::from_json(r#"{"vars":[{"name":"a","degree":1},{"name":"b","degree":1},{"name":"c","degree":1}]}"#).unwrap();
        assert_eq!(q.hilbert(2).unwrap(), 6);
        assert_eq!(q.hilbert(0).unwrap(), 1);
    }

    #[test]
    fn plucker_hilbert_and_normal_form() {
        let q = plucker();
        assert_eq!(q.hilbert(1).unwrap(), 6);
        assert_eq!(q.hilbert(2).unwrap(), 20);
        assert_eq!(q.hilbert(3).unwrap(), 50);
        let s = q.slice(2).unwrap();
        let nf = s.reduce(&LaurentPoly::parse("x14*x23").unwrap()).unwrap();
        assert_eq!(nf, LaurentPoly::parse("x13*x24 - x12*x34").unwrap());
        assert!(s.normal_form(&LaurentPoly::zero()).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn weighted_and_inhomogeneous() {
        let q = GradedQuotient::from_json(r#"{"vars":[{"name":"a","degree":1},{"name":"b","degree":2}]}"#).unwrap();
        assert_eq!(q.hilbert(4).unwrap(), 3);
        assert!(q.normal_form(&LaurentPoly::parse("a + b").unwrap()).is_err());
        let (m, v) = q.normal_form(&LaurentPoly::parse("3*a^2").unwrap()).unwrap();
        assert_eq!(m, 2);
        assert!(v.contains(&int(3)));
    }
}
