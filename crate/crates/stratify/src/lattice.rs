//! Exact integer and rational linear algebra: Hermite normal form, integer
//! kernels, and full-rank-or-not lattices in Q^S.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{AVector, Rational};

/// Row-style Hermite normal form: returns the nonzero rows of an echelon basis
/// of the row lattice, pivots positive, entries above each pivot reduced.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            // Smallest nonzero |entry| in this column among the unprocessed rows.
            let pick = (top..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(p) = pick else { break };
            rows.swap(top, p);
            let mut done = true;
            for i in top + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && !rows[top][col].is_zero() {
            if rows[top][col].is_negative() {
                for x in rows[top].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = rows[top].clone();
            for i in 0..top {
                let q = rows[i][col].div_floor(&pivot_row[col]);
                if !q.is_zero() {
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            top += 1;
        }
    }
    rows.truncate(top);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// Basis of the integer relations {c ∈ Z^k : Σ c_i rows_i = 0}.
pub fn left_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let k = rows.len();
    let aug: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let reduced = hnf_rows(aug, ncols + k);
    reduced
        .into_iter()
        .filter(|r| r[..ncols].iter().all(Zero::is_zero))
        .map(|r| r[ncols..].to_vec())
        .collect()
}

/// Basis of {x ∈ Z^n : A x = 0} for an integer matrix A with n columns.
pub fn int_kernel(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let transposed: Vec<Vec<BigInt>> = (0..ncols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    left_kernel(&transposed, a.len())
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            let row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Unique solution of the square system A x = b, if A is invertible.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, y)| r.iter().cloned().chain([y.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn lcm_all<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// A lattice in Q^coords: the Z-span of `basis / den`, `basis` in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeQ {
    coords: Vec<String>,
    den: BigInt,
    basis: Vec<Vec<BigInt>>,
}

impl LatticeQ {
    /// The Z-span of `vectors`, all supported in `coords`.
    pub fn generated(coords: &[String], vectors: &[AVector]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Lattice("no generators".into()));
        }
        let allowed: BTreeSet<&String> = coords.iter().collect();
        for v in vectors {
            if let Some(id) = v.support().iter().find(|id| !allowed.contains(id)) {
                return Err(Error::Lattice(format!("generator {v} has `{id}` outside the coordinates")));
            }
        }
        let den = lcm_all(vectors.iter().flat_map(|v| v.entries().values()));
        let rows = vectors
            .iter()
            .map(|v| coords.iter().map(|c| (v.get(c) * Rational::from(den.clone())).to_integer()).collect())
            .collect();
        Ok(Self::from_rows(coords.to_vec(), den, rows))
    }

    fn from_rows(coords: Vec<String>, den: BigInt, rows: Vec<Vec<BigInt>>) -> Self {
        let n = coords.len();
        let basis = hnf_rows(rows, n);
        // Shrink the common denominator when possible.
        let g = basis.iter().flatten().fold(den.clone(), |acc, x| acc.gcd(x));
        let (den, basis) = if g > BigInt::one() {
            (&den / &g, basis.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect())
        } else {
            (den, basis)
        };
        Self { coords, den, basis }
    }

    /// Z^coords.
    pub fn standard(coords: &[String]) -> Self {
        let n = coords.len();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        Self::from_rows(coords.to_vec(), BigInt::one(), rows)
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<AVector> {
        self.basis.iter().map(|r| self.row_vector(r)).collect()
    }

    fn row_vector(&self, r: &[BigInt]) -> AVector {
        let den = Rational::from(self.den.clone());
        AVector::from_pairs(self.coords.iter().zip(r).map(|(c, x)| (c.as_str(), Rational::from(x.clone()) / &den)))
    }

    fn scaled(&self, v: &AVector, den: &BigInt) -> Option<Vec<BigInt>> {
        let s = Rational::from(den.clone());
        if v.support().iter().any(|id| !self.coords.contains(id)) {
            return None;
        }
        self.coords
            .iter()
            .map(|c| {
                let x = v.get(c) * &s;
                x.is_integer().then(|| x.to_integer())
            })
            .collect()
    }

    pub fn contains(&self, v: &AVector) -> bool {
        let Some(mut x) = self.scaled(v, &self.den) else { return false };
        for row in &self.basis {
            let col = row.iter().position(|e| !e.is_zero()).expect("hermite rows are nonzero");
            if x[col].is_zero() {
                continue;
            }
            let (q, r) = x[col].div_rem(&row[col]);
            if !r.is_zero() {
                return false;
            }
            for (a, b) in x.iter_mut().zip(row) {
                *a -= &q * b;
            }
        }
        x.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in `basis()`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &AVector) -> Option<Vec<BigInt>> {
        let mut x = self.scaled(v, &self.den)?;
        let mut out = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let col = row.iter().position(|e| !e.is_zero())?;
            let (q, r) = x[col].div_rem(&row[col]);
            if !r.is_zero() {
                return None;
            }
            for (a, b) in x.iter_mut().zip(row) {
                *a -= &q * b;
            }
            out.push(q);
        }
        x.iter().all(Zero::is_zero).then_some(out)
    }

    fn common(&self, other: &LatticeQ) -> Result<(BigInt, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
        if self.coords != other.coords {
            return Err(Error::Lattice("coordinate sets differ".into()));
        }
        let den = self.den.lcm(&other.den);
        let up = |l: &LatticeQ| -> Vec<Vec<BigInt>> {
            let f = &den / &l.den;
            l.basis.iter().map(|r| r.iter().map(|x| x * &f).collect()).collect()
        };
        let (b1, b2) = (up(self), up(other));
        Ok((den, b1, b2))
    }

    pub fn intersect(&self, other: &LatticeQ) -> Result<LatticeQ> {
        let (den, b1, b2) = self.common(other)?;
        let n = self.coords.len();
        let mut stacked = b1.clone();
        stacked.extend(b2.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let kernel = left_kernel(&stacked, n);
        let rows: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|c| {
                let mut v = vec![BigInt::zero(); n];
                for (ci, row) in c.iter().zip(&b1) {
                    for (a, b) in v.iter_mut().zip(row) {
                        *a += ci * b;
                    }
                }
                v
            })
            .collect();
        Ok(Self::from_rows(self.coords.clone(), den, rows))
    }

    /// The sublattice of vectors supported in `subset`, expressed in the
    /// coordinates of `subset` (kept in the original order).
    pub fn restrict_to(&self, subset: &BTreeSet<String>) -> LatticeQ {
        let keep: Vec<usize> = (0..self.coords.len()).filter(|&i| subset.contains(&self.coords[i])).collect();
        let drop: Vec<usize> = (0..self.coords.len()).filter(|&i| !subset.contains(&self.coords[i])).collect();
        let outside: Vec<Vec<BigInt>> = self.basis.iter().map(|r| drop.iter().map(|&i| r[i].clone()).collect()).collect();
        let kernel = left_kernel(&outside, drop.len());
        let rows = kernel
            .iter()
            .map(|c| {
                keep.iter()
                    .map(|&i| c.iter().zip(&self.basis).map(|(ci, r)| ci * &r[i]).sum::<BigInt>())
                    .collect()
            })
            .collect();
        let coords = keep.iter().map(|&i| self.coords[i].clone()).collect();
        Self::from_rows(coords, self.den.clone(), rows)
    }
}
