//! Exact rationals, sparse vectors indexed by poset elements, lexicographic
//! comparison under a total order, and Laurent polynomials over Q.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// serde `serialize_with` helper writing a rational as "n/d".
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Parse { input: s.to_string(), pos: 0, msg: msg.to_string() };
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad("bad integer"))?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// An element of Q^A with sparse storage; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AVector {
    entries: BTreeMap<String, Rational>,
}

impl AVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(id: &str) -> Self {
        Self::single(id, Rational::one())
    }

    pub fn single(id: &str, q: Rational) -> Self {
        let mut v = Self::zero();
        v.set(id, q);
        v
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut v = Self::zero();
        for (k, q) in pairs {
            let k = k.into();
            let cur = v.get(&k);
            v.set(&k, cur + q);
        }
        v
    }

    pub fn get(&self, id: &str) -> Rational {
        self.entries.get(id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, id: &str, q: Rational) {
        if q.is_zero() {
            self.entries.remove(id);
        } else {
            self.entries.insert(id.to_string(), q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<String, Rational> {
        &self.entries
    }

    pub fn support(&self) -> BTreeSet<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * q)).collect() }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|q| !q.is_negative())
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &AVector) -> bool {
        let keys: BTreeSet<&String> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().all(|k| self.get(k) <= other.get(k))
    }
}

impl Add for &AVector {
    type Output = AVector;
    fn add(self, rhs: &AVector) -> AVector {
        let mut out = self.clone();
        for (k, q) in &rhs.entries {
            let s = out.get(k) + q;
            out.set(k, s);
        }
        out
    }
}

impl Sub for &AVector {
    type Output = AVector;
    fn sub(self, rhs: &AVector) -> AVector {
        let mut out = self.clone();
        for (k, q) in &rhs.entries {
            let s = out.get(k) - q;
            out.set(k, s);
        }
        out
    }
}

impl Neg for &AVector {
    type Output = AVector;
    fn neg(self) -> AVector {
        self.scale(&int(-1))
    }
}

impl fmt::Display for AVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, q)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", k, fmt_rational(q))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for AVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&String, String> =
            self.entries.iter().map(|(k, q)| (k, fmt_rational(q))).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut v = AVector::zero();
        for (k, s) in m {
            let q = parse_rational(&s).map_err(serde::de::Error::custom)?;
            v.set(&k, q);
        }
        Ok(v)
    }
}

/// A ranking of all poset elements, strictly decreasing under the total order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalOrder {
    ranked: Vec<String>,
    index: HashMap<String, usize>,
}

impl TotalOrder {
    pub fn new(ranked: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, id) in ranked.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate id `{id}` in total order")));
            }
        }
        Ok(Self { ranked, index })
    }

    pub fn ranked(&self) -> &[String] {
        &self.ranked
    }

    /// Position in the ranking; 0 is the largest element.
    pub fn rank(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownId(id.to_string()))
    }
}

/// Lexicographic comparison: entries are visited in the order's sequence and the
/// first differing entry decides.
pub fn lex_compare(u: &AVector, v: &AVector, ord: &TotalOrder) -> Result<Ordering> {
    let mut first: Option<(usize, Ordering)> = None;
    let ids: BTreeSet<&String> = u.entries.keys().chain(v.entries.keys()).collect();
    for id in ids {
        let r = ord.rank(id)?;
        let c = u.get(id).cmp(&v.get(id));
        if c != Ordering::Equal && first.is_none_or(|(fr, _)| r < fr) {
            first = Some((r, c));
        }
    }
    Ok(first.map_or(Ordering::Equal, |(_, c)| c))
}

/// `Σ_p u_p · deg f_p`.
pub fn degree_of(u: &AVector, degs: &BTreeMap<String, u64>) -> Result<Rational> {
    let mut s = Rational::zero();
    for (k, q) in &u.entries {
        let d = degs.get(k).ok_or_else(|| Error::MissingDegree(k.clone()))?;
        s += q * Rational::from_integer(BigInt::from(*d));
    }
    Ok(s)
}

/// Exponent vector of a Laurent monomial; zero exponents are never stored.
pub type Monomial = BTreeMap<String, i64>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = a.clone();
    for (v, e) in b {
        let n = out.get(v).copied().unwrap_or(0) + e;
        if n == 0 {
            out.remove(v);
        } else {
            out.insert(v.clone(), n);
        }
    }
    out
}

/// Laurent polynomial with rational coefficients over named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::new(), c)
    }

    pub fn var(name: &str) -> Self {
        Self::var_pow(name, 1)
    }

    pub fn var_pow(name: &str, e: i64) -> Self {
        let mut m = Monomial::new();
        if e != 0 {
            m.insert(name.to_string(), e);
        }
        Self::term(m, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.keys().cloned()).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Least exponent of `var` over all terms.
    pub fn min_exponent(&self, var: &str) -> Result<i64> {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn max_exponent(&self, var: &str) -> Result<i64> {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Multiplies by `var^{-k}`.
    pub fn divide_by_power(&self, var: &str, k: i64) -> Self {
        let shift = Monomial::from([(var.to_string(), -k)]);
        if k == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|(m, q)| (mono_mul(m, &shift), q.clone())).collect() }
    }

    /// Restriction to `{var = 0}`: drops terms with positive `var`-exponent and
    /// erases `var` from the rest.
    pub fn set_zero(&self, var: &str) -> Result<Self> {
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            match m.get(var).copied().unwrap_or(0) {
                0 => out.add_term(m.clone(), q.clone()),
                e if e > 0 => {}
                _ => return Err(Error::NegativeExponent { var: var.to_string() }),
            }
        }
        Ok(out)
    }

    /// Substitutes every variable by the mapped polynomial. Variables with
    /// negative exponents must map to monomials; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<String, LaurentPoly>) -> Result<Self> {
        let mut cache: BTreeMap<(String, i64), LaurentPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            let mut t = Self::constant(q.clone());
            for (v, &e) in m {
                let key = (v.clone(), e);
                if !cache.contains_key(&key) {
                    let p = match map.get(v) {
                        None => Self::var_pow(v, e),
                        Some(img) if e >= 0 => img.pow(e as u32),
                        Some(img) => img.invert_monomial()?.pow((-e) as u32),
                    };
                    cache.insert(key.clone(), p);
                }
                t = &t * &cache[&key];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    fn invert_monomial(&self) -> Result<Self> {
        let (m, q) = self.as_monomial().ok_or_else(|| {
            Error::Ring(format!("cannot invert non-monomial `{self}`"))
        })?;
        let inv: Monomial = m.iter().map(|(v, e)| (v.clone(), -e)).collect();
        Ok(Self::term(inv, q.recip()))
    }

    /// Weighted degree of a monomial; unknown variables are an error.
    pub fn monomial_degree(m: &Monomial, weights: &BTreeMap<String, i64>) -> Result<i64> {
        let mut d = 0;
        for (v, e) in m {
            let w = weights.get(v).ok_or_else(|| Error::UnknownId(v.clone()))?;
            d += w * e;
        }
        Ok(d)
    }

    /// Splits into weighted-homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self, weights: &BTreeMap<String, i64>) -> Result<BTreeMap<i64, LaurentPoly>> {
        let mut parts: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, q) in &self.terms {
            let d = Self::monomial_degree(m, weights)?;
            parts.entry(d).or_default().add_term(m.clone(), q.clone());
        }
        Ok(parts)
    }

    /// The common weighted degree, or `None` if zero or inhomogeneous.
    pub fn homogeneous_degree(&self, weights: &BTreeMap<String, i64>) -> Result<Option<i64>> {
        let parts = self.homogeneous_parts(weights)?;
        Ok(if parts.len() == 1 { parts.keys().next().copied() } else { None })
    }

    pub fn parse(input: &str) -> Result<Self> {
        Parser::new(input).parse_all()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(m.clone(), -q.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                *acc.entry(mono_mul(ma, mb)).or_insert_with(Rational::zero) += qa * qb;
            }
        }
        acc.retain(|_, q| !q.is_zero());
        LaurentPoly { terms: acc }
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.iter()
        .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest monomials first so that output reads like the usual notation.
        for (i, (m, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let ms = fmt_monomial(m);
            if ms.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{ms}")?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), ms)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<LaurentPoly> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?.to_i64().ok_or_else(|| self.err("exponent too large"))?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            if neg {
                return base.invert_monomial().map(|m| m.pow(e)).map_err(|_| self.err("negative power of a non-monomial"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                // `a/b` is a rational literal only when directly followed by digits.
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    if let Some(d) = self.peek().filter(|c| c.is_ascii_digit()) {
                        let _ = d;
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        return Ok(LaurentPoly::constant(Rational::new(n, den)));
                    }
                    self.pos = save;
                    return Err(self.err("expected denominator"));
                }
                Ok(LaurentPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(LaurentPoly::var(&self.src[start..self.pos]))
            }
            _ => Err(self.err("expected number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(ids: &[&str]) -> TotalOrder {
        TotalOrder::new(ids.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn lex_examples() {
        let o = ord(&["34", "24", "14", "23", "13", "12"]);
        let z = AVector::zero();
        assert_eq!(lex_compare(&z, &z, &o).unwrap(), Ordering::Equal);
        let e = |s| AVector::unit(s);
        assert_eq!(lex_compare(&e("34"), &e("24"), &o).unwrap(), Ordering::Greater);
        let u = &e("13") + &e("24");
        let v = &e("12") + &e("34");
        assert_eq!(lex_compare(&u, &v, &o).unwrap(), Ordering::Less);
        assert!(lex_compare(&e("99"), &z, &o).is_err());
    }

    #[test]
    fn degree_examples() {
        let degs: BTreeMap<String, u64> = [("X1".to_string(), 1), ("X0".to_string(), 1)].into();
        assert_eq!(degree_of(&AVector::zero(), &degs).unwrap(), int(0));
        let u = AVector::from_pairs([("X1", rat(1, 3)), ("X0", rat(2, 3))]);
        assert_eq!(degree_of(&u, &degs).unwrap(), int(1));
        let degs5: BTreeMap<String, u64> = [("p".to_string(), 5)].into();
        assert_eq!(degree_of(&AVector::unit("p"), &degs5).unwrap(), int(5));
        assert!(degree_of(&AVector::unit("q"), &degs5).is_err());
    }

    #[test]
    fn laurent_basics() {
        let t2 = LaurentPoly::parse("t^2").unwrap();
        assert_eq!(t2.min_exponent("t").unwrap(), 2);
        let g = LaurentPoly::parse("1 + t*u").unwrap();
        assert_eq!(g.set_zero("t").unwrap(), LaurentPoly::one());
        let x14 = LaurentPoly::parse("a*b*d + a*b*c*d").unwrap();
        assert_eq!(x14.min_exponent("d").unwrap(), 1);
        assert_eq!(LaurentPoly::zero().min_exponent("t"), Err(Error::ZeroPolynomial));
        assert!(LaurentPoly::parse("t^-1 + 1").unwrap().set_zero("t").is_err());
    }

    #[test]
    fn parser_grammar() {
        let p = LaurentPoly::parse("3*a^2*b^-1 - 2/3*c + 5").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.min_exponent("b").unwrap(), -1);
        let q = LaurentPoly::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
        let r = LaurentPoly::parse("(a+b)^2 - a^2 - 2*a*b").unwrap();
        assert_eq!(r, LaurentPoly::parse("b^2").unwrap());
        assert!(LaurentPoly::parse("a +").is_err());
        assert!(LaurentPoly::parse("(a+b)^-1").is_err());
        assert!(LaurentPoly::parse("a $ b").is_err());
    }

    #[test]
    fn substitution() {
        let map: BTreeMap<String, LaurentPoly> = [
            ("x".to_string(), LaurentPoly::parse("a*u").unwrap()),
            ("y".to_string(), LaurentPoly::parse("a").unwrap()),
        ]
        .into();
        let g = LaurentPoly::parse("x^2*y^-1 + x").unwrap();
        assert_eq!(g.substitute(&map).unwrap(), LaurentPoly::parse("a*u^2 + a*u").unwrap());
    }

    #[test]
    fn homogeneous_split() {
        let w: BTreeMap<String, i64> = [("x".to_string(), 1), ("y".to_string(), 2)].into();
        let g = LaurentPoly::parse("x^2 + y + x").unwrap();
        let parts = g.homogeneous_parts(&w).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&2], LaurentPoly::parse("x^2 + y").unwrap());
        assert_eq!(g.homogeneous_degree(&w).unwrap(), None);
    }
}
