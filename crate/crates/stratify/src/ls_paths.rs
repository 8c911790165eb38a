//! Root systems, Weyl groups with Bruhat order, Pieri-Chevalley bonds and
//! LS paths. Weights are written in the basis of
//! fundamental weights.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{int, AVector, Rational};
use crate::lattice::LatticeQ;
use crate::strat_poset::{Chain, Cover, Element, StratPoset};

pub const MAX_WEYL: usize = 10_000;

pub type Weight = Vec<i64>;

#[derive(Clone, Debug)]
pub struct RootSystem {
    /// cartan[i][j] = ⟨α_j, α_i^∨⟩, so α_j has ω-coordinates given by column j.
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates.
    roots: Vec<Vec<i64>>,
    /// Matching positive coroots in simple-coroot coordinates.
    coroots: Vec<Vec<i64>>,
    /// (α_i, α_i)/2, normalized so the first entry is 1.
    sym: Vec<Rational>,
}

impl RootSystem {
    pub fn new(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 || cartan.iter().any(|r| r.len() != n) {
            return Err(Error::RootSystem("Cartan matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(Error::RootSystem("Cartan diagonal must be 2".into()));
            }
            for j in 0..n {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::RootSystem(format!("invalid off-diagonal entries at ({i},{j})")));
                }
            }
        }
        let sym = symmetrizer(&cartan)?;
        let mut rs = Self { cartan, roots: Vec::new(), coroots: Vec::new(), sym };
        rs.build_roots()?;
        Ok(rs)
    }

    /// Parses names like "A2", "B3", "C2", "D4", "G2".
    pub fn from_type(name: &str) -> Result<Self> {
        let bad = || Error::RootSystem(format!("unsupported type `{name}`"));
        let (t, n) = name.split_at(1);
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            c[i][i] = 2;
        }
        let chain = |c: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..upto.saturating_sub(1) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        };
        match t {
            "A" if n >= 1 => chain(&mut c, n),
            "B" if n >= 2 => {
                chain(&mut c, n);
                c[n - 1][n - 2] = -2;
            }
            "C" if n >= 2 => {
                chain(&mut c, n);
                c[n - 2][n - 1] = -2;
            }
            "D" if n >= 4 => {
                chain(&mut c, n - 1);
                c[n - 3][n - 1] = -1;
                c[n - 1][n - 3] = -1;
            }
            "G" if n == 2 => {
                c[0][1] = -3;
                c[1][0] = -1;
            }
            _ => return Err(bad()),
        }
        Self::new(c)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn rho(&self) -> Weight {
        vec![1; self.rank()]
    }

    /// ω-coordinates of a root given in simple-root coordinates.
    pub fn root_weight(&self, root: &[i64]) -> Weight {
        (0..self.rank()).map(|i| (0..self.rank()).map(|j| self.cartan[i][j] * root[j]).sum()).collect()
    }

    /// ⟨μ, β^∨⟩ for a coroot in simple-coroot coordinates.
    pub fn pair(mu: &[i64], coroot: &[i64]) -> i64 {
        mu.iter().zip(coroot).map(|(a, b)| a * b).sum()
    }

    pub fn reflect(&self, i: usize, mu: &[i64]) -> Weight {
        let k = mu[i];
        (0..self.rank()).map(|r| mu[r] - k * self.cartan[r][i]).collect()
    }

    /// s_β(μ) = μ − ⟨μ, β^∨⟩ β.
    pub fn reflect_root(&self, k: usize, mu: &[i64]) -> Weight {
        let c = Self::pair(mu, &self.coroots[k]);
        let b = self.root_weight(&self.roots[k]);
        mu.iter().zip(&b).map(|(m, x)| m - c * x).collect()
    }

    fn build_roots(&mut self) -> Result<()> {
        let n = self.rank();
        let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for j in 0..n {
            let e: Vec<i64> = (0..n).map(|k| (k == j) as i64).collect();
            seen.insert(e.clone(), e.clone());
            queue.push_back((e.clone(), e));
        }
        while let Some((root, coroot)) = queue.pop_front() {
            for i in 0..n {
                // s_i on roots: β − ⟨β, α_i^∨⟩ α_i; on coroots: γ − ⟨α_i, γ⟩ α_i^∨.
                let c: i64 = (0..n).map(|j| self.cartan[i][j] * root[j]).sum();
                let d: i64 = (0..n).map(|k| self.cartan[k][i] * coroot[k]).sum();
                let mut r2 = root.clone();
                r2[i] -= c;
                let mut c2 = coroot.clone();
                c2[i] -= d;
                if r2.iter().all(|x| *x >= 0) && r2.iter().any(|x| *x > 0) && !seen.contains_key(&r2) {
                    if seen.len() > 1000 {
                        return Err(Error::RootSystem("root system is not of finite type".into()));
                    }
                    seen.insert(r2.clone(), c2.clone());
                    queue.push_back((r2, c2));
                }
            }
        }
        for (r, c) in seen {
            self.roots.push(r);
            self.coroots.push(c);
        }
        Ok(())
    }

    /// (μ, ν) for the invariant form with (α_i, α_i)/2 = sym[i].
    pub fn inner(&self, mu: &[i64], nu: &[i64]) -> Rational {
        // ν in root coordinates, then (μ, α_i) = μ_i·sym[i].
        let c = self.to_root_coords(nu);
        (0..self.rank()).map(|i| &c[i] * int(mu[i]) * &self.sym[i]).sum()
    }

    fn to_root_coords(&self, mu: &[i64]) -> Vec<Rational> {
        let a: Vec<Vec<Rational>> = self.cartan.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect();
        let b: Vec<Rational> = mu.iter().map(|x| int(*x)).collect();
        crate::lattice::solve(&a, &b).expect("Cartan matrix of finite type is invertible")
    }

    pub fn is_regular_dominant(&self, lambda: &[i64]) -> bool {
        lambda.len() == self.rank() && lambda.iter().all(|x| *x > 0)
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        lambda.len() == self.rank() && lambda.iter().all(|x| *x >= 0)
    }
}

fn symmetrizer(c: &[Vec<i64>]) -> Result<Vec<Rational>> {
    let n = c.len();
    let mut d: Vec<Option<Rational>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rational::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                // d_i c_ij = d_j c_ji
                let want = d[i].clone().unwrap() * int(c[i][j]) / int(c[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(want);
                        stack.push(j);
                    }
                    Some(x) if *x != want => return Err(Error::RootSystem("Cartan matrix is not symmetrizable".into())),
                    _ => {}
                }
            }
        }
    }
    Ok(d.into_iter().map(Option::unwrap).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylElt {
    /// A reduced word, applied right to left: w = s_{word[0]} ⋯ s_{word[k-1]}.
    pub word: Vec<usize>,
    pub length: usize,
    /// w(ρ), which identifies w.
    pub rho_image: Weight,
}

impl WeylElt {
    pub fn name(&self) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }

    pub fn act(&self, rs: &RootSystem, mu: &[i64]) -> Weight {
        let mut v = mu.to_vec();
        for &i in self.word.iter().rev() {
            v = rs.reflect(i, &v);
        }
        v
    }
}

/// The Weyl group with its Bruhat covers σ ⋖ s_β σ.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElt>,
    index: HashMap<Weight, usize>,
    /// (lower, upper, positive root index).
    pub covers: Vec<(usize, usize, usize)>,
}

impl WeylGroup {
    pub fn lookup(&self, rho_image: &[i64]) -> Option<usize> {
        self.index.get(rho_image).copied()
    }

    pub fn from_word(&self, rs: &RootSystem, word: &[usize]) -> Result<usize> {
        if word.iter().any(|&i| i >= rs.rank()) {
            return Err(Error::RootSystem("reflection index out of range".into()));
        }
        let mut v = rs.rho();
        for &i in word.iter().rev() {
            v = rs.reflect(i, &v);
        }
        self.lookup(&v).ok_or_else(|| Error::Internal("word outside the group".into()))
    }

    pub fn longest(&self) -> usize {
        (0..self.elements.len()).max_by_key(|&i| self.elements[i].length).unwrap_or(0)
    }
}

pub fn weyl_group(rs: &RootSystem, bound: usize) -> Result<WeylGroup> {
    let rho = rs.rho();
    let mut elements = vec![WeylElt { word: Vec::new(), length: 0, rho_image: rho.clone() }];
    let mut index = HashMap::from([(rho, 0usize)]);
    let mut q = VecDeque::from([0usize]);
    while let Some(k) = q.pop_front() {
        for i in 0..rs.rank() {
            let img = rs.reflect(i, &elements[k].rho_image);
            if index.contains_key(&img) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::Bound(format!("Weyl group has more than {bound} elements")));
            }
            let mut word = vec![i];
            word.extend(&elements[k].word);
            index.insert(img.clone(), elements.len());
            q.push_back(elements.len());
            elements.push(WeylElt { word, length: elements[k].length + 1, rho_image: img });
        }
    }
    let mut covers = Vec::new();
    for (s, e) in elements.iter().enumerate() {
        for k in 0..rs.positive_roots().len() {
            let img = rs.reflect_root(k, &e.rho_image);
            if let Some(&t) = index.get(&img) {
                if elements[t].length == e.length + 1 {
                    covers.push((s, t, k));
                }
            }
        }
    }
    Ok(WeylGroup { elements, index, covers })
}

/// Cycle notation of a type A element acting on {1, ..., n+1}; "id" for e.
pub fn type_a_cycles(word: &[usize], n: usize) -> String {
    let mut perm: Vec<usize> = (0..=n).collect();
    // w = s_{word[0]} ∘ ... ∘ s_{word[k-1]}; perm[x] = w(x).
    for &i in word.iter().rev() {
        for p in perm.iter_mut() {
            if *p == i {
                *p = i + 1;
            } else if *p == i + 1 {
                *p = i;
            }
        }
    }
    let mut seen = vec![false; n + 1];
    let mut out = String::new();
    for s in 0..=n {
        if seen[s] || perm[s] == s {
            continue;
        }
        let mut cyc = String::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            cyc.push_str(&(x + 1).to_string());
            x = perm[x];
        }
        out.push_str(&cyc);
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

/// The bonded Bruhat poset on W: the cover σ ⋖ τ = s_β σ has bond ⟨σ(λ), β^∨⟩.
pub fn bonds(rs: &RootSystem, w: &WeylGroup, lambda: &[i64]) -> Result<StratPoset> {
    if !rs.is_regular_dominant(lambda) {
        return Err(Error::RootSystem("λ must be regular dominant".into()));
    }
    let elements = w.elements.iter().map(|e| Element { id: e.name(), label: String::new(), fdeg: 1 }).collect();
    let mut covers = Vec::new();
    for &(s, t, k) in &w.covers {
        let sl = w.elements[s].act(rs, lambda);
        let b = RootSystem::pair(&sl, &rs.positive_coroots()[k]);
        if b <= 0 {
            return Err(Error::Internal(format!("nonpositive bond {b}")));
        }
        covers.push(Cover { upper: w.elements[t].name(), lower: w.elements[s].name(), bond: b as u64 });
    }
    StratPoset::new(elements, covers, true)
}

/// A flag stratification: root system, Weyl group, λ and the bonded poset.
#[derive(Clone, Debug)]
pub struct FlagData {
    pub rs: RootSystem,
    pub w: WeylGroup,
    pub lambda: Weight,
    pub poset: StratPoset,
    by_name: HashMap<String, usize>,
}

impl FlagData {
    pub fn new(rs: RootSystem, lambda: Weight) -> Result<Self> {
        let w = weyl_group(&rs, MAX_WEYL)?;
        let poset = bonds(&rs, &w, &lambda)?;
        let by_name = w.elements.iter().enumerate().map(|(i, e)| (e.name(), i)).collect();
        Ok(Self { rs, w, lambda, poset, by_name })
    }

    pub fn element(&self, name: &str) -> Result<&WeylElt> {
        self.by_name.get(name).map(|&i| &self.w.elements[i]).ok_or_else(|| Error::UnknownId(name.into()))
    }

    pub fn image(&self, name: &str) -> Result<Weight> {
        Ok(self.element(name)?.act(&self.rs, &self.lambda))
    }
}

/// Points u ∈ L_{C,λ} ∩ Q^C_{≥0} of degree m: partial sums from the top
/// S_j = u_r + ... + u_j satisfy b_j S_j ∈ Z, with S_0 = m.
pub fn ls_lattice_points(ps: &StratPoset, c: &Chain, m: u64) -> Result<Vec<AVector>> {
    let bonds = ps.chain_bonds(c)?;
    let ids = c.ids();
    let mut out = Vec::new();
    let mut sums: Vec<Rational> = Vec::with_capacity(ids.len());
    lattice_rec(ids, &bonds, &int(m as i64), &Rational::zero(), &mut sums, &mut out);
    Ok(out)
}

fn lattice_rec(ids: &[String], bonds: &[u64], m: &Rational, prev: &Rational, sums: &mut Vec<Rational>, out: &mut Vec<AVector>) {
    let j = sums.len();
    if j == ids.len() {
        let mut v = AVector::zero();
        let mut last = Rational::zero();
        for (p, s) in ids.iter().zip(sums.iter()) {
            v.set(p, s - &last);
            last = s.clone();
        }
        out.push(v);
        return;
    }
    let b = int(bonds[j] as i64);
    if j + 1 == ids.len() {
        if (m * &b).is_integer() {
            sums.push(m.clone());
            lattice_rec(ids, bonds, m, m, sums, out);
            sums.pop();
        }
        return;
    }
    // S_j ranges over (1/b)Z ∩ [prev, m].
    let lo = (prev * &b).ceil().to_integer();
    let hi = (m * &b).floor().to_integer();
    let mut k = lo;
    while k <= hi {
        let s = Rational::from(k.clone()) / &b;
        sums.push(s.clone());
        lattice_rec(ids, bonds, m, &s, sums, out);
        sums.pop();
        k += 1;
    }
}

/// L_{C,λ}: generated by (e_{p_j} − e_{p_{j-1}})/b_j along the chain and
/// e_{p_0}/b_0 at the bottom.
pub fn ls_lattice(ps: &StratPoset, c: &Chain) -> Result<LatticeQ> {
    let bonds = ps.chain_bonds(c)?;
    let ids = c.ids();
    let gens: Vec<AVector> = (0..ids.len())
        .map(|j| {
            let inv = int(bonds[j] as i64).recip();
            let mut v = AVector::single(&ids[j], inv.clone());
            if j + 1 < ids.len() {
                v.set(&ids[j + 1], -inv);
            }
            v
        })
        .collect();
    LatticeQ::generated(ids, &gens)
}

/// Degree of the flag stratification from the lattices L_{C,λ}.
pub fn flag_degree(fd: &FlagData) -> Result<Rational> {
    let lattices = fd
        .poset
        .maximal_chains()
        .into_iter()
        .map(|c| Ok((c.clone(), ls_lattice(&fd.poset, &c)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(crate::hilbert_geometry::degree(&fd.poset, &lattices)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LSPath {
    /// σ_p > ... > σ_1, Bruhat-decreasing.
    pub dirs: Vec<String>,
    /// a_p < ... < a_1 = m.
    #[serde(serialize_with = "serialize_rationals")]
    pub cuts: Vec<Rational>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&crate::exact_arith::fmt_rational(q))?;
    }
    seq.end()
}

impl LSPath {
    pub fn degree(&self) -> Rational {
        self.cuts.last().cloned().unwrap_or_else(Rational::zero)
    }
}

/// ν(π) = Σ (a_j − a_{j+1}) e_{σ_j}, with a_{p+1} = 0.
pub fn nu(pi: &LSPath) -> AVector {
    let mut v = AVector::zero();
    let mut last = Rational::zero();
    for (d, a) in pi.dirs.iter().zip(&pi.cuts) {
        v.set(d, a - &last);
        last = a.clone();
    }
    v
}

/// The inverse of ν: support read top-down, cuts are partial sums.
pub fn path_of(u: &AVector, c: &Chain) -> LSPath {
    let mut dirs = Vec::new();
    let mut cuts = Vec::new();
    let mut acc = Rational::zero();
    for p in c.ids() {
        let x = u.get(p);
        if !x.is_zero() {
            acc += &x;
            dirs.push(p.clone());
            cuts.push(acc.clone());
        }
    }
    LSPath { dirs, cuts }
}

/// π(1) = Σ (a_j − a_{j+1}) σ_j(λ); integral for genuine LS paths.
pub fn weight(pi: &LSPath, fd: &FlagData) -> Result<Weight> {
    let mut total = vec![Rational::zero(); fd.rs.rank()];
    let u = nu(pi);
    for (d, q) in u.entries() {
        let img = fd.image(d)?;
        for (t, x) in total.iter_mut().zip(img) {
            *t += q * int(x);
        }
    }
    total
        .into_iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer().try_into().unwrap_or(i64::MAX)) } else { Err(Error::Internal("non-integral path weight".into())) })
        .collect()
}

/// One maximal chain from `hi` down to `lo` through covers.
fn descend(ps: &StratPoset, hi: &str, lo: &str) -> Result<Vec<(String, String, u64)>> {
    let mut out = Vec::new();
    let mut cur = hi.to_string();
    while cur != lo {
        let next = ps
            .covers()
            .iter()
            .filter(|c| c.upper == cur)
            .find(|c| ps.le(lo, &c.lower).unwrap_or(false))
            .ok_or_else(|| Error::Internal(format!("no descent from {cur} to {lo}")))?;
        out.push((next.upper.clone(), next.lower.clone(), next.bond));
        cur = next.lower.clone();
    }
    Ok(out)
}

/// Checks every adjacent pair σ_{j+1} > σ_j admits an (a, λ)-chain, tested on
/// one maximal chain between them.
pub fn validate_path(pi: &LSPath, ps: &StratPoset) -> Result<bool> {
    for k in 0..pi.dirs.len().saturating_sub(1) {
        let (hi, lo, a) = (&pi.dirs[k], &pi.dirs[k + 1], &pi.cuts[k]);
        if hi == lo || !ps.le(lo, hi)? {
            return Ok(false);
        }
        for (_, _, b) in descend(ps, hi, lo)? {
            if !(a * int(b as i64)).is_integer() {
                return Ok(false);
            }
        }
    }
    Ok(pi.cuts.windows(2).all(|w| w[0] < w[1]) && pi.cuts.first().is_none_or(|a| a.is_positive()))
}

/// LS paths of shape λ and degree m, via the lattice points of every chain.
pub fn enumerate_ls(fd: &FlagData, m: u64) -> Result<Vec<LSPath>> {
    let chains = fd.poset.maximal_chains();
    let per_chain = chains
        .par_iter()
        .map(|c| Ok(ls_lattice_points(&fd.poset, c, m)?.into_iter().map(|u| path_of(&u, c)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let paths: BTreeSet<LSPath> = per_chain.into_iter().flatten().collect();
    let paths: Vec<LSPath> = paths.into_iter().collect();
    let bad = paths.par_iter().map(|p| validate_path(p, &fd.poset).map(|ok| (!ok).then(|| p.clone()))).collect::<Result<Vec<_>>>()?;
    if let Some(p) = bad.into_iter().flatten().next() {
        return Err(Error::Internal(format!("lattice point gives a path failing the chain condition: {:?}", p.dirs)));
    }
    Ok(paths)
}

/// Dominant weights and multiplicities of V(λ) by Freudenthal's formula,
/// then the full character by W-orbits.
pub fn freudenthal_character(rs: &RootSystem, w: &WeylGroup, lambda: &[i64], bound: usize) -> Result<BTreeMap<Weight, u64>> {
    if !rs.is_dominant(lambda) {
        return Err(Error::RootSystem("highest weight must be dominant".into()));
    }
    let n = rs.rank();
    let rho = rs.rho();
    let lr: Weight = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let norm_lr = rs.inner(&lr, &lr);
    let root_w: Vec<Weight> = rs.positive_roots().iter().map(|r| rs.root_weight(r)).collect();
    // Dominant weights below λ, found by subtracting positive roots.
    let mut dominant: BTreeSet<Weight> = BTreeSet::from([lambda.to_vec()]);
    let mut all: BTreeSet<Weight> = BTreeSet::from([lambda.to_vec()]);
    let mut stack = vec![lambda.to_vec()];
    while let Some(mu) = stack.pop() {
        for a in &root_w {
            let nu: Weight = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            // Stay in the convex hull: some W-conjugate must be ≤ λ; prune by norm.
            if rs.inner(&nu, &nu) > rs.inner(lambda, lambda) {
                continue;
            }
            if all.insert(nu.clone()) {
                if all.len() > bound {
                    return Err(Error::Bound(format!("more than {bound} candidate weights")));
                }
                if rs.is_dominant(&nu) {
                    dominant.insert(nu.clone());
                }
                stack.push(nu);
            }
        }
    }
    let depth = |mu: &Weight| -> Rational {
        let d: Weight = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
        rs.to_root_coords(&d).into_iter().sum()
    };
    let below = |mu: &Weight| -> bool {
        let d: Weight = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
        rs.to_root_coords(&d).iter().all(|c| c.is_integer() && !c.is_negative())
    };
    let mut order: Vec<Weight> = dominant.into_iter().filter(|m| below(m)).collect();
    order.sort_by_key(|m| depth(m));
    let dominant_rep = |mu: &Weight| -> Weight {
        let mut v = mu.clone();
        while let Some(i) = (0..n).find(|&i| v[i] < 0) {
            v = rs.reflect(i, &v);
        }
        v
    };
    let mut mult: BTreeMap<Weight, Rational> = BTreeMap::new();
    for mu in &order {
        if mu.as_slice() == lambda {
            mult.insert(mu.clone(), Rational::one());
            continue;
        }
        let mr: Weight = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let denom = &norm_lr - rs.inner(&mr, &mr);
        let mut sum = Rational::zero();
        for a in &root_w {
            let mut k = 1;
            loop {
                let nu: Weight = mu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                let rep = dominant_rep(&nu);
                if !below(&rep) {
                    break;
                }
                if let Some(m) = mult.get(&rep) {
                    sum += m * rs.inner(&nu, a);
                }
                k += 1;
            }
        }
        let m = sum * int(2) / denom;
        if !m.is_zero() {
            mult.insert(mu.clone(), m);
        }
    }
    let mut out = BTreeMap::new();
    for (mu, m) in mult {
        if !m.is_integer() || m.is_negative() {
            return Err(Error::Internal(format!("non-integral multiplicity at {mu:?}")));
        }
        let m: u64 = m.to_integer().try_into().unwrap_or(0);
        let orbit: BTreeSet<Weight> = w.elements.iter().map(|e| e.act(rs, &mu)).collect();
        for nu in orbit {
            out.insert(nu, m);
        }
    }
    Ok(out)
}

/// Π_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩.
pub fn weyl_dimension(rs: &RootSystem, lambda: &[i64]) -> Rational {
    let rho = rs.rho();
    let lr: Weight = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    rs.positive_coroots()
        .iter()
        .map(|c| int(RootSystem::pair(&lr, c)) / int(RootSystem::pair(&rho, c)))
        .product()
}

/// d!·Π_{α>0} ⟨λ, α^∨⟩ / ⟨ρ, α^∨⟩, with d the number of positive roots.
pub fn weyl_degree(rs: &RootSystem, lambda: &[i64]) -> Rational {
    let rho = rs.rho();
    let d = rs.positive_roots().len() as i64;
    let fact: Rational = (1..=d).map(int).product();
    fact * rs
        .positive_coroots()
        .iter()
        .map(|c| int(RootSystem::pair(lambda, c)) / int(RootSystem::pair(&rho, c)))
        .product::<Rational>()
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    pub degree: u64,
    pub paths: usize,
    pub weyl_dimension: String,
    pub matches: bool,
    /// (weight, LS count, oracle multiplicity) where they differ.
    pub discrepancies: Vec<(Weight, u64, u64)>,
}

/// Compares the weights of LS paths of degree m with the character of V(mλ).
pub fn character_check(fd: &FlagData, m: u64) -> Result<CharacterReport> {
    let paths = enumerate_ls(fd, m)?;
    let mut ls: BTreeMap<Weight, u64> = BTreeMap::new();
    for p in &paths {
        *ls.entry(weight(p, fd)?).or_default() += 1;
    }
    let ml: Weight = fd.lambda.iter().map(|x| x * m as i64).collect();
    let oracle = freudenthal_character(&fd.rs, &fd.w, &ml, 1_000_000)?;
    let keys: BTreeSet<&Weight> = ls.keys().chain(oracle.keys()).collect();
    let discrepancies: Vec<(Weight, u64, u64)> = keys
        .into_iter()
        .filter_map(|k| {
            let (a, b) = (ls.get(k).copied().unwrap_or(0), oracle.get(k).copied().unwrap_or(0));
            (a != b).then(|| (k.clone(), a, b))
        })
        .collect();
    let dim = weyl_dimension(&fd.rs, &ml);
    Ok(CharacterReport {
        degree: m,
        paths: paths.len(),
        weyl_dimension: crate::exact_arith::fmt_rational(&dim),
        matches: discrepancies.is_empty() && int(paths.len() as i64) == dim,
        discrepancies,
    })
}

/// Σ over maximal chains of [e, τ] of the product of bonds.
pub fn schubert_degree(fd: &FlagData, tau: &str) -> Result<u64> {
    let sub = fd.poset.lower_interval(tau)?;
    let mut total = 0u64;
    for c in sub.maximal_chains() {
        let mut prod = 1u64;
        for w in c.ids().windows(2) {
            prod *= sub.bond(&w[0], &w[1])?.unwrap_or(1);
        }
        total += prod;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        for (t, n) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("G2", 12), ("C3", 48), ("D4", 192)] {
            let rs = RootSystem::from_type(t).unwrap();
            assert_eq!(weyl_group(&rs, MAX_WEYL).unwrap().elements.len(), n, "{t}");
        }
    }

    #[test]
    fn a2_bonds_at_rho() {
        let rs = RootSystem::from_type("A2").unwrap();
        let fd = FlagData::new(rs, vec![1, 1]).unwrap();
        let twos: Vec<(String, String)> =
            fd.poset.covers().iter().filter(|c| c.bond == 2).map(|c| (c.upper.clone(), c.lower.clone())).collect();
        assert_eq!(twos.len(), 2);
        assert!(twos.contains(&("s2s1".into(), "s1".into())));
        assert!(twos.contains(&("s1s2".into(), "s2".into())));
        assert_eq!(type_a_cycles(&[1, 0], 2), "132");
        assert_eq!(type_a_cycles(&[0, 1], 2), "123");
        assert_eq!(flag_degree(&fd).unwrap(), int(6));
        for c in fd.poset.maximal_chains() {
            let l = ls_lattice(&fd.poset, &c).unwrap();
            for u in ls_lattice_points(&fd.poset, &c, 2).unwrap() {
                assert!(l.contains(&u));
            }
        }
    }

    #[test]
    fn freudenthal_small_cases() {
        let rs = RootSystem::from_type("A2").unwrap();
        let w = weyl_group(&rs, MAX_WEYL).unwrap();
        let ch = freudenthal_character(&rs, &w, &[1, 1], 1000).unwrap();
        assert_eq!(ch.values().sum::<u64>(), 8);
        assert_eq!(ch[&vec![0, 0]], 2);
        let g2 = RootSystem::from_type("G2").unwrap();
        let wg = weyl_group(&g2, MAX_WEYL).unwrap();
        for lam in [[1, 0], [0, 1], [1, 1]] {
            let ch = freudenthal_character(&g2, &wg, &lam, 10_000).unwrap();
            assert_eq!(int(ch.values().sum::<u64>() as i64), weyl_dimension(&g2, &lam));
        }
    }
}
