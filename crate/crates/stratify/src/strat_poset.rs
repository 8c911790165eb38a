//! Bonded graded posets: chain enumeration, validation, the order complex and
//! the generic hyperplane model.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::TotalOrder;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub fdeg: u64,
}

/// `lower` is covered by `upper`, with the bond between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub upper: String,
    pub lower: String,
    pub bond: u64,
}

/// On-disk form of a stratification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratFile {
    pub elements: Vec<Element>,
    pub covers: Vec<Cover>,
    #[serde(default)]
    pub extend_bottom: bool,
}

/// A maximal or partial chain, listed from the top down.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain(pub Vec<String>);

impl Chain {
    pub fn ids(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rank r of a chain p_r > ... > p_0.
    pub fn rank(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.iter().any(|x| x == id)
    }

    /// Position from the top (0 = p_r).
    pub fn position(&self, id: &str) -> Option<usize> {
        self.0.iter().position(|x| x == id)
    }

    pub fn top(&self) -> &str {
        &self.0[0]
    }

    pub fn bottom(&self) -> &str {
        &self.0[self.0.len() - 1]
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(">"))
    }
}

#[derive(Clone, Debug)]
pub struct StratPoset {
    elements: Vec<Element>,
    covers: Vec<Cover>,
    extend_bottom: bool,
    index: HashMap<String, usize>,
    down: Vec<Vec<(usize, u64)>>,
    up: Vec<Vec<usize>>,
    // leq[a][b] <=> a <= b
    leq: Vec<Vec<bool>>,
}

/// Tie rule among elements of equal length in the default total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Ascending,
    Descending,
}

impl StratPoset {
    pub fn new(elements: Vec<Element>, covers: Vec<Cover>, extend_bottom: bool) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if e.id.is_empty() {
                return Err(Error::InvalidPoset("empty element id".into()));
            }
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element `{}`", e.id)));
            }
        }
        let n = elements.len();
        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for c in &covers {
            let u = *index.get(&c.upper).ok_or_else(|| Error::UnknownId(c.upper.clone()))?;
            let l = *index.get(&c.lower).ok_or_else(|| Error::UnknownId(c.lower.clone()))?;
            if u == l {
                return Err(Error::InvalidPoset(format!("self-cover on `{}`", c.upper)));
            }
            if !seen.insert((u, l)) {
                return Err(Error::InvalidPoset(format!("duplicate cover {} > {}", c.upper, c.lower)));
            }
            down[u].push((l, c.bond));
            up[l].push(u);
        }
        for d in &mut down {
            d.sort_by(|a, b| elements[a.0].id.cmp(&elements[b.0].id));
        }
        let leq = closure(n, &down)?;
        Ok(Self { elements, covers, extend_bottom, index, down, up, leq })
    }

    pub fn from_file(f: StratFile) -> Result<Self> {
        Self::new(f.elements, f.covers, f.extend_bottom)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: StratFile = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_file(f)
    }

    pub fn to_file(&self) -> StratFile {
        StratFile { elements: self.elements.clone(), covers: self.covers.clone(), extend_bottom: self.extend_bottom }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn extend_bottom(&self) -> bool {
        self.extend_bottom
    }

    pub fn ids(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.id.clone()).collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    fn idx(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn fdeg(&self, id: &str) -> Result<u64> {
        Ok(self.elements[self.idx(id)?].fdeg)
    }

    pub fn fdeg_map(&self) -> BTreeMap<String, u64> {
        self.elements.iter().map(|e| (e.id.clone(), e.fdeg)).collect()
    }

    /// `p <= q` in the poset.
    pub fn le(&self, p: &str, q: &str) -> Result<bool> {
        Ok(self.leq[self.idx(p)?][self.idx(q)?])
    }

    pub fn comparable(&self, p: &str, q: &str) -> Result<bool> {
        Ok(self.le(p, q)? || self.le(q, p)?)
    }

    /// True when the ids are pairwise comparable.
    pub fn is_chain<'a>(&self, ids: impl IntoIterator<Item = &'a String>) -> Result<bool> {
        let v: Vec<&String> = ids.into_iter().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if !self.comparable(v[i], v[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Bond of the cover `lower ⋖ upper`; `None` if not a cover.
    pub fn bond(&self, upper: &str, lower: &str) -> Result<Option<u64>> {
        let u = self.idx(upper)?;
        let l = self.idx(lower)?;
        Ok(self.down[u].iter().find(|(x, _)| *x == l).map(|(_, b)| *b))
    }

    /// Bonds b_r, ..., b_1 along a maximal chain followed by b_0 = deg f_{p_0}.
    pub fn chain_bonds(&self, c: &Chain) -> Result<Vec<u64>> {
        let ids = c.ids();
        let mut out = Vec::with_capacity(ids.len());
        for w in ids.windows(2) {
            let b = self.bond(&w[0], &w[1])?.ok_or_else(|| {
                Error::InvalidPoset(format!("{} > {} is not a cover", w[0], w[1]))
            })?;
            out.push(b);
        }
        out.push(self.fdeg(c.bottom())?);
        Ok(out)
    }

    pub fn maximal_elements(&self) -> Vec<String> {
        let mut v: Vec<String> = (0..self.elements.len())
            .filter(|&i| self.up[i].is_empty())
            .map(|i| self.elements[i].id.clone())
            .collect();
        v.sort();
        v
    }

    pub fn minimal_elements(&self) -> Vec<String> {
        let mut v: Vec<String> = (0..self.elements.len())
            .filter(|&i| self.down[i].is_empty())
            .map(|i| self.elements[i].id.clone())
            .collect();
        v.sort();
        v
    }

    /// Longest descending path from `p` to a minimal element.
    pub fn length(&self, p: &str) -> Result<usize> {
        let i = self.idx(p)?;
        let mut memo = vec![None; self.elements.len()];
        Ok(self.len_rec(i, &mut memo))
    }

    fn len_rec(&self, i: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(l) = memo[i] {
            return l;
        }
        let l = self.down[i].iter().map(|(j, _)| 1 + self.len_rec(*j, memo)).max().unwrap_or(0);
        memo[i] = Some(l);
        l
    }

    /// All maximal chains, sorted lexicographically by their id sequences.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        let mut out = Vec::new();
        for top in self.maximal_elements() {
            let mut path = vec![self.index[&top]];
            self.chains_rec(&mut path, &mut out);
        }
        out.sort();
        out
    }

    fn chains_rec(&self, path: &mut Vec<usize>, out: &mut Vec<Chain>) {
        let last = *path.last().unwrap();
        if self.down[last].is_empty() {
            out.push(Chain(path.iter().map(|&i| self.elements[i].id.clone()).collect()));
            return;
        }
        for &(j, _) in &self.down[last] {
            path.push(j);
            self.chains_rec(path, out);
            path.pop();
        }
    }

    /// Maximal chains containing every id in `s`.
    pub fn chains_through(&self, s: &BTreeSet<String>) -> Vec<Chain> {
        self.maximal_chains().into_iter().filter(|c| s.iter().all(|p| c.contains(p))).collect()
    }

    /// All nonempty chains of the poset, each listed top-down; sorted.
    pub fn order_complex(&self) -> Vec<Chain> {
        let n = self.elements.len();
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| self.elements[*a].id.cmp(&self.elements[*b].id));
        for &top in &order {
            let mut path = vec![top];
            self.faces_rec(&mut path, &order, &mut out);
        }
        out.sort();
        out
    }

    fn faces_rec(&self, path: &mut Vec<usize>, order: &[usize], out: &mut Vec<Chain>) {
        out.push(Chain(path.iter().map(|&i| self.elements[i].id.clone()).collect()));
        let last = *path.last().unwrap();
        for &j in order {
            if j != last && self.leq[j][last] {
                path.push(j);
                self.faces_rec(path, order, out);
                path.pop();
            }
        }
    }

    /// Decreasing length, ties broken by id under `tie`.
    pub fn default_order(&self, tie: TieRule) -> TotalOrder {
        let mut ids: Vec<(usize, String)> =
            self.elements.iter().map(|e| (self.length(&e.id).unwrap_or(0), e.id.clone())).collect();
        ids.sort_by(|a, b| {
            b.0.cmp(&a.0).then_with(|| match tie {
                TieRule::Ascending => a.1.cmp(&b.1),
                TieRule::Descending => b.1.cmp(&a.1),
            })
        });
        TotalOrder::new(ids.into_iter().map(|x| x.1).collect()).expect("ids are unique")
    }

    /// Checks that `ord` refines the partial order and ranks longer elements first.
    pub fn check_order(&self, ord: &TotalOrder) -> Result<()> {
        if ord.ranked().len() != self.elements.len() {
            return Err(Error::InvalidPoset("total order does not list every element".into()));
        }
        for p in ord.ranked() {
            for q in ord.ranked() {
                let (rp, rq) = (ord.rank(p)?, ord.rank(q)?);
                if rp < rq && (self.le(p, q)? && p != q || self.length(p)? < self.length(q)?) {
                    return Err(Error::InvalidPoset(format!("total order ranks {p} above {q}")));
                }
            }
        }
        Ok(())
    }

    /// Elements grouped by length, longest first.
    pub fn levels(&self) -> Vec<Vec<String>> {
        let mut by: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for e in &self.elements {
            by.entry(self.length(&e.id).unwrap_or(0)).or_default().push(e.id.clone());
        }
        by.into_values().rev().map(|mut v| {
            v.sort();
            v
        }).collect()
    }

    /// Bonds of the extended diagram: every cover plus `p_{-1}` below each minimal element.
    pub fn all_bonds_one(&self) -> bool {
        self.covers.iter().all(|c| c.bond == 1)
            && self.minimal_elements().iter().all(|m| self.fdeg(m) == Ok(1))
    }

    /// Subposet of elements below `p` (inclusive).
    pub fn lower_interval(&self, p: &str) -> Result<StratPoset> {
        let pi = self.idx(p)?;
        let keep: BTreeSet<String> = (0..self.elements.len())
            .filter(|&i| self.leq[i][pi])
            .map(|i| self.elements[i].id.clone())
            .collect();
        let elements = self.elements.iter().filter(|e| keep.contains(&e.id)).cloned().collect();
        let covers = self
            .covers
            .iter()
            .filter(|c| keep.contains(&c.upper) && keep.contains(&c.lower))
            .cloned()
            .collect();
        StratPoset::new(elements, covers, self.extend_bottom)
    }
}

fn closure(n: usize, down: &[Vec<(usize, u64)>]) -> Result<Vec<Vec<bool>>> {
    // Topological order via DFS, detecting cycles.
    let mut state = vec![0u8; n];
    let mut topo = Vec::with_capacity(n);
    fn visit(i: usize, down: &[Vec<(usize, u64)>], state: &mut [u8], topo: &mut Vec<usize>) -> bool {
        match state[i] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        state[i] = 1;
        for &(j, _) in &down[i] {
            if !visit(j, down, state, topo) {
                return false;
            }
        }
        state[i] = 2;
        topo.push(i);
        true
    }
    for i in 0..n {
        if !visit(i, down, &mut state, &mut topo) {
            return Err(Error::InvalidPoset("cover relation contains a cycle".into()));
        }
    }
    let mut leq = vec![vec![false; n]; n];
    // topo lists elements after everything below them.
    for &i in &topo {
        leq[i][i] = true;
        for &(j, _) in &down[i] {
            for k in 0..n {
                if leq[k][j] {
                    leq[k][i] = true;
                }
            }
        }
    }
    Ok(leq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub rank: Option<usize>,
    pub failures: Vec<Failure>,
}

/// Checks unique maximum, gradedness, genuine covers and positive bonds/degrees.
pub fn validate(ps: &StratPoset) -> ValidationReport {
    let mut failures = Vec::new();
    let maxima = ps.maximal_elements();
    if maxima.len() != 1 {
        failures.push(Failure {
            kind: "unique-maximum".into(),
            message: format!("expected one maximal element, found {}", maxima.len()),
            witness: maxima.clone(),
        });
    }
    for c in ps.covers() {
        if c.bond == 0 {
            failures.push(Failure {
                kind: "bond".into(),
                message: format!("bond of {} > {} must be at least 1", c.upper, c.lower),
                witness: vec![c.upper.clone(), c.lower.clone()],
            });
        }
        // A listed cover with a longer path between its ends is not a cover.
        let u = ps.index[&c.upper];
        let l = ps.index[&c.lower];
        let via = ps.down[u].iter().any(|&(m, _)| m != l && ps.leq[l][m]);
        if via {
            failures.push(Failure {
                kind: "cover".into(),
                message: format!("{} > {} is implied by a longer path", c.upper, c.lower),
                witness: vec![c.upper.clone(), c.lower.clone()],
            });
        }
    }
    for e in ps.elements() {
        if e.fdeg == 0 {
            failures.push(Failure {
                kind: "degree".into(),
                message: format!("deg f_{} must be positive", e.id),
                witness: vec![e.id.clone()],
            });
        }
    }
    let chains = ps.maximal_chains();
    let mut rank = None;
    if let Some(first) = chains.first() {
        let r = first.rank();
        rank = Some(r);
        for c in &chains {
            if c.rank() != r {
                failures.push(Failure {
                    kind: "graded".into(),
                    message: format!("maximal chains of lengths {} and {}", r, c.rank()),
                    witness: c.ids().to_vec(),
                });
                rank = None;
                break;
            }
        }
    }
    ValidationReport { ok: failures.is_empty(), rank, failures }
}

/// The generic hyperplane model: q_r > ... > q_1 > {q_{0,1}, ..., q_{0,s}}.
pub fn generic_model(s: usize, r: usize) -> Result<StratPoset> {
    if s == 0 || r == 0 {
        return Err(Error::InvalidPoset("generic model needs s >= 1 and r >= 1".into()));
    }
    let bottom_deg = if s == 1 { 1 } else { (s - 1) as u64 };
    let mut elements = Vec::new();
    let mut covers = Vec::new();
    for j in (1..=r).rev() {
        elements.push(Element { id: format!("q{j}"), label: format!("q_{j}"), fdeg: 1 });
        if j > 1 {
            covers.push(Cover { upper: format!("q{j}"), lower: format!("q{}", j - 1), bond: 1 });
        }
    }
    for k in 1..=s {
        let id = format!("q0_{k}");
        elements.push(Element { id: id.clone(), label: format!("q_{{0,{k}}}"), fdeg: bottom_deg });
        covers.push(Cover { upper: "q1".into(), lower: id, bond: 1 });
    }
    StratPoset::new(elements, covers, true)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Bonded Hasse diagram in DOT; edges point from the covered element upwards.
pub fn hasse_dot(ps: &StratPoset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    let mut els: Vec<&Element> = ps.elements().iter().collect();
    els.sort_by(|a, b| a.id.cmp(&b.id));
    for e in &els {
        let label = if e.label.is_empty() { e.id.clone() } else { e.label.clone() };
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\ndeg {}\"];\n",
            dot_escape(&e.id),
            dot_escape(&label),
            e.fdeg
        ));
    }
    let mut covers: Vec<&Cover> = ps.covers().iter().collect();
    covers.sort_by(|a, b| (&a.upper, &a.lower).cmp(&(&b.upper, &b.lower)));
    for c in covers {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            dot_escape(&c.lower),
            dot_escape(&c.upper),
            c.bond
        ));
    }
    if ps.extend_bottom() {
        out.push_str("  \"p_-1\" [label=\"p_-1\", shape=point];\n");
        for m in ps.minimal_elements() {
            let d = ps.fdeg(&m).unwrap_or(0);
            out.push_str(&format!("  \"p_-1\" -> \"{}\" [label=\"{}\"];\n", dot_escape(&m), d));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> StratPoset {
        StratPoset::new(
            vec![
                Element { id: "1".into(), label: String::new(), fdeg: 1 },
                Element { id: "0".into(), label: String::new(), fdeg: 1 },
            ],
            vec![Cover { upper: "1".into(), lower: "0".into(), bond: 1 }],
            false,
        )
        .unwrap()
    }

    #[test]
    fn single_element() {
        let ps = StratPoset::new(vec![Element { id: "p".into(), label: String::new(), fdeg: 1 }], vec![], false).unwrap();
        let rep = validate(&ps);
        assert!(rep.ok);
        assert_eq!(rep.rank, Some(0));
        assert_eq!(ps.length("p").unwrap(), 0);
        assert_eq!(ps.order_complex().len(), 1);
    }

    #[test]
    fn diamond_with_long_leg_is_not_graded() {
        let e = |id: &str| Element { id: id.into(), label: String::new(), fdeg: 1 };
        let c = |u: &str, l: &str| Cover { upper: u.into(), lower: l.into(), bond: 1 };
        let ps = StratPoset::new(
            vec![e("top"), e("a"), e("b"), e("b2"), e("bot")],
            vec![c("top", "a"), c("top", "b"), c("b", "b2"), c("a", "bot"), c("b2", "bot")],
            false,
        )
        .unwrap();
        let rep = validate(&ps);
        assert!(!rep.ok);
        assert!(rep.failures.iter().any(|f| f.kind == "graded"));
    }

    #[test]
    fn cycle_rejected() {
        let e = |id: &str| Element { id: id.into(), label: String::new(), fdeg: 1 };
        let c = |u: &str, l: &str| Cover { upper: u.into(), lower: l.into(), bond: 1 };
        assert!(StratPoset::new(vec![e("a"), e("b")], vec![c("a", "b"), c("b", "a")], false).is_err());
    }

    #[test]
    fn generic_model_shape() {
        let ps = generic_model(3, 2).unwrap();
        assert!(validate(&ps).ok);
        let chains = ps.maximal_chains();
        assert_eq!(chains.len(), 3);
        assert!(chains.iter().all(|c| c.rank() == 2));
        assert_eq!(ps.fdeg("q0_2").unwrap(), 2);
        let one = generic_model(1, 1).unwrap();
        assert_eq!(one.maximal_chains(), vec![Chain(vec!["q1".into(), "q0_1".into()])]);
        assert_eq!(one.fdeg("q0_1").unwrap(), 1);
    }

    #[test]
    fn dot_two_chain() {
        let dot = hasse_dot(&chain2());
        assert_eq!(dot.matches("->").count(), 1);
        assert_eq!(dot.matches("[label=").count(), 3);
    }
}
