//! Finite quivers: directed multigraphs with loops and parallel arrows.
//!
//! Vertex and arrow identifiers are user-facing strings; internally both are
//! interned to dense indices so that the rest of the crate can use plain
//! `Vec` lookups. All derived orderings (path enumeration, block listings)
//! are lexicographic on the user-facing names, so output is stable across
//! runs and insertion orders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Dense vertex index.
pub type VIdx = usize;
/// Dense arrow index.
pub type AIdx = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references unknown vertex `{vertex}`")]
    UnknownEndpoint { arrow: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows do not compose at position {0}")]
    NonComposable(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VIdx,
    pub target: VIdx,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: BTreeMap<String, VIdx>,
    arrow_index: BTreeMap<String, AIdx>,
}

impl Quiver {
    pub fn new() -> Quiver {
        Quiver::default()
    }

    /// Convenience constructor from name lists; arrow triples are
    /// `(arrow id, source id, target id)`.
    pub fn build(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver, QuiverError> {
        let mut q = Quiver::new();
        for v in vertices {
            q.add_vertex(v)?;
        }
        for (a, s, t) in arrows {
            q.add_arrow(a, s, t)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VIdx, QuiverError> {
        if self.vertex_index.contains_key(name) {
            return Err(QuiverError::DuplicateVertex(name.to_string()));
        }
        let idx = self.vertex_names.len();
        self.vertex_names.push(name.to_string());
        self.vertex_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn add_arrow(
        &mut self,
        name: &str,
        source: &str,
        target: &str,
    ) -> Result<AIdx, QuiverError> {
        if self.arrow_index.contains_key(name) {
            return Err(QuiverError::DuplicateArrow(name.to_string()));
        }
        let s = *self
            .vertex_index
            .get(source)
            .ok_or_else(|| QuiverError::UnknownEndpoint {
                arrow: name.to_string(),
                vertex: source.to_string(),
            })?;
        let t = *self
            .vertex_index
            .get(target)
            .ok_or_else(|| QuiverError::UnknownEndpoint {
                arrow: name.to_string(),
                vertex: target.to_string(),
            })?;
        let idx = self.arrows.len();
        self.arrows.push(Arrow {
            name: name.to_string(),
            source: s,
            target: t,
        });
        self.arrow_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VIdx) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> impl Iterator<Item = &str> {
        self.vertex_names.iter().map(|s| s.as_str())
    }

    pub fn vertex(&self, name: &str) -> Result<VIdx, QuiverError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn arrow(&self, a: AIdx) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<AIdx, QuiverError> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    /// Arrow indices out of `v`, sorted by arrow name.
    pub fn arrows_from(&self, v: VIdx) -> Vec<AIdx> {
        self.sorted_arrows(|a| a.source == v)
    }

    /// Arrow indices into `v`, sorted by arrow name.
    pub fn arrows_into(&self, v: VIdx) -> Vec<AIdx> {
        self.sorted_arrows(|a| a.target == v)
    }

    pub fn arrows_between(&self, s: VIdx, t: VIdx) -> Vec<AIdx> {
        self.sorted_arrows(|a| a.source == s && a.target == t)
    }

    fn sorted_arrows(&self, keep: impl Fn(&Arrow) -> bool) -> Vec<AIdx> {
        let mut out: Vec<AIdx> = (0..self.arrows.len())
            .filter(|&i| keep(&self.arrows[i]))
            .collect();
        out.sort_by(|&a, &b| self.arrows[a].name.cmp(&self.arrows[b].name));
        out
    }

    pub fn out_degree(&self, v: VIdx) -> usize {
        self.arrows.iter().filter(|a| a.source == v).count()
    }

    pub fn in_degree(&self, v: VIdx) -> usize {
        self.arrows.iter().filter(|a| a.target == v).count()
    }

    /// Connectivity of the underlying undirected graph. Reported, never
    /// enforced.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Returns a copy with the given arrow removed.
    pub fn without_arrow(&self, a: AIdx) -> Quiver {
        let mut q = Quiver::new();
        for v in &self.vertex_names {
            q.add_vertex(v).unwrap();
        }
        for (i, arrow) in self.arrows.iter().enumerate() {
            if i != a {
                q.add_arrow(
                    &arrow.name,
                    &self.vertex_names[arrow.source],
                    &self.vertex_names[arrow.target],
                )
                .unwrap();
            }
        }
        q
    }
}

/// Regularity class of a vertex: in- and out-degree both 1, both 2, or
/// anything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    OneRegular,
    TwoRegular,
    NonRegular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexProfile {
    pub vertex: VIdx,
    pub name: String,
    pub in_degree: usize,
    pub out_degree: usize,
    pub regularity: Regularity,
}

/// Exact in/out counts and regularity class for every vertex, indexed by
/// vertex.
pub fn degree_profile(quiver: &Quiver) -> Vec<VertexProfile> {
    (0..quiver.vertex_count())
        .map(|v| {
            let ind = quiver.in_degree(v);
            let outd = quiver.out_degree(v);
            let regularity = match (ind, outd) {
                (1, 1) => Regularity::OneRegular,
                (2, 2) => Regularity::TwoRegular,
                _ => Regularity::NonRegular,
            };
            VertexProfile {
                vertex: v,
                name: quiver.vertex_name(v).to_string(),
                in_degree: ind,
                out_degree: outd,
                regularity,
            }
        })
        .collect()
}

/// True iff every vertex is 1- or 2-regular; offenders are returned sorted
/// by name.
pub fn is_biregular(quiver: &Quiver) -> (bool, Vec<VIdx>) {
    let mut offenders: Vec<VIdx> = degree_profile(quiver)
        .into_iter()
        .filter(|p| p.regularity == Regularity::NonRegular)
        .map(|p| p.vertex)
        .collect();
    offenders.sort_by(|&a, &b| quiver.vertex_name(a).cmp(quiver.vertex_name(b)));
    (offenders.is_empty(), offenders)
}

/// All vertices that are 1-regular, in name order.
pub fn one_regular_vertices(quiver: &Quiver) -> Vec<VIdx> {
    let mut vs: Vec<VIdx> = degree_profile(quiver)
        .into_iter()
        .filter(|p| p.regularity == Regularity::OneRegular)
        .map(|p| p.vertex)
        .collect();
    vs.sort_by(|&a, &b| quiver.vertex_name(a).cmp(quiver.vertex_name(b)));
    vs
}

/// A composable arrow sequence; the empty sequence is the trivial path at
/// its source vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub source: VIdx,
    pub arrows: Vec<AIdx>,
}

impl Path {
    pub fn trivial(v: VIdx) -> Path {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn of_arrow(quiver: &Quiver, a: AIdx) -> Path {
        Path {
            source: quiver.arrow(a).source,
            arrows: vec![a],
        }
    }

    /// Builds a path and validates composability.
    pub fn new(quiver: &Quiver, source: VIdx, arrows: Vec<AIdx>) -> Result<Path, QuiverError> {
        let mut at = source;
        for (k, &a) in arrows.iter().enumerate() {
            if quiver.arrow(a).source != at {
                return Err(QuiverError::NonComposable(k));
            }
            at = quiver.arrow(a).target;
        }
        Ok(Path { source, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, quiver: &Quiver) -> VIdx {
        self.arrows
            .last()
            .map(|&a| quiver.arrow(a).target)
            .unwrap_or(self.source)
    }

    /// Concatenation `self` then `other`; None when the endpoints do not
    /// match.
    pub fn compose(&self, quiver: &Quiver, other: &Path) -> Option<Path> {
        if self.target(quiver) != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(&other.arrows);
        Some(Path {
            source: self.source,
            arrows,
        })
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e({})", quiver.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Ordering key: length first, then the arrow-name sequence, then the
    /// source name (relevant for trivial paths only).
    pub fn order_key(&self, quiver: &Quiver) -> (usize, Vec<String>, String) {
        (
            self.len(),
            self.arrows
                .iter()
                .map(|&a| quiver.arrow(a).name.clone())
                .collect(),
            quiver.vertex_name(self.source).to_string(),
        )
    }
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regularity::OneRegular => write!(f, "1-regular"),
            Regularity::TwoRegular => write!(f, "2-regular"),
            Regularity::NonRegular => write!(f, "non-regular"),
        }
    }
}

/// All composable paths of length `<= max_len`, filtered by the optional
/// endpoints, ordered by length and then lexicographically by arrow names.
pub fn enumerate_paths(
    quiver: &Quiver,
    max_len: usize,
    source: Option<VIdx>,
    target: Option<VIdx>,
) -> Vec<Path> {
    let mut out = Vec::new();
    let sources: Vec<VIdx> = match source {
        Some(s) => vec![s],
        None => {
            let mut vs: Vec<VIdx> = (0..quiver.vertex_count()).collect();
            vs.sort_by(|&a, &b| quiver.vertex_name(a).cmp(quiver.vertex_name(b)));
            vs
        }
    };
    for s in sources {
        let mut frontier = vec![Path::trivial(s)];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for p in &frontier {
                if target.map(|t| p.target(quiver) == t).unwrap_or(true) {
                    out.push(p.clone());
                }
                if len < max_len {
                    for a in quiver.arrows_from(p.target(quiver)) {
                        let mut arrows = p.arrows.clone();
                        arrows.push(a);
                        next.push(Path { source: s, arrows });
                    }
                }
            }
            frontier = next;
        }
    }
    out.sort_by_key(|a| a.order_key(quiver));
    out
}

/// Directed triangles through a vertex: pairwise-distinct `(x, i, j)` with
/// arrows x->i, i->j, j->x, reported as the arrow triples, sorted.
pub fn triangles_through(quiver: &Quiver, i: VIdx) -> Vec<(AIdx, AIdx, AIdx)> {
    let mut out = BTreeSet::new();
    for &ga in &quiver.arrows_into(i) {
        let x = quiver.arrow(ga).source;
        if x == i {
            continue;
        }
        for &al in &quiver.arrows_from(i) {
            let j = quiver.arrow(al).target;
            if j == i || j == x {
                continue;
            }
            for &be in &quiver.arrows_between(j, x) {
                out.insert((ga, al, be));
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_quiver() -> Quiver {
        Quiver::build(&["v"], &[("x", "v", "v")]).unwrap()
    }

    fn two_cycle() -> Quiver {
        Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap()
    }

    fn three_cycle() -> Quiver {
        Quiver::build(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
        )
        .unwrap()
    }

    #[test]
    fn loop_counts_once_each_way() {
        let q = loop_quiver();
        let prof = degree_profile(&q);
        assert_eq!(prof[0].in_degree, 1);
        assert_eq!(prof[0].out_degree, 1);
        assert_eq!(prof[0].regularity, Regularity::OneRegular);
    }

    #[test]
    fn four_cycle_is_one_regular() {
        let q = Quiver::build(
            &["1", "2", "3", "4"],
            &[
                ("a", "1", "2"),
                ("b", "2", "3"),
                ("c", "3", "4"),
                ("d", "4", "1"),
            ],
        )
        .unwrap();
        for p in degree_profile(&q) {
            assert_eq!(p.regularity, Regularity::OneRegular);
        }
        assert!(is_biregular(&q).0);
    }

    #[test]
    fn offender_reported() {
        let q = Quiver::build(
            &["1", "2", "3", "4"],
            &[
                ("a", "1", "2"),
                ("b", "1", "3"),
                ("c", "1", "4"),
                ("d", "2", "1"),
            ],
        )
        .unwrap();
        let (ok, off) = is_biregular(&q);
        assert!(!ok);
        // vertex 2 keeps in = out = 1; the other three are unbalanced
        assert_eq!(off.len(), 3);
        assert_eq!(q.vertex_name(off[0]), "1");
    }

    #[test]
    fn degree_sums_match_arrow_count() {
        let q = three_cycle();
        let prof = degree_profile(&q);
        let ins: usize = prof.iter().map(|p| p.in_degree).sum();
        let outs: usize = prof.iter().map(|p| p.out_degree).sum();
        assert_eq!(ins, q.arrow_count());
        assert_eq!(outs, q.arrow_count());
    }

    #[test]
    fn path_enumeration_loop() {
        let q = loop_quiver();
        let ps = enumerate_paths(&q, 2, None, None);
        let shown: Vec<String> = ps.iter().map(|p| p.display(&q)).collect();
        assert_eq!(shown, vec!["e(v)", "x", "x.x"]);
    }

    #[test]
    fn path_enumeration_with_endpoints() {
        let q = two_cycle();
        let v1 = q.vertex("1").unwrap();
        let ps = enumerate_paths(&q, 2, Some(v1), Some(v1));
        let shown: Vec<String> = ps.iter().map(|p| p.display(&q)).collect();
        assert_eq!(shown, vec!["e(1)", "a.b"]);
    }

    #[test]
    fn path_enumeration_three_cycle() {
        let q = three_cycle();
        let v1 = q.vertex("1").unwrap();
        let ps = enumerate_paths(&q, 3, Some(v1), Some(v1));
        let shown: Vec<String> = ps.iter().map(|p| p.display(&q)).collect();
        assert_eq!(shown, vec!["e(1)", "a.b.c"]);
    }

    /// Path counts must agree with powers of the arrow-count adjacency
    /// matrix.
    #[test]
    #[allow(clippy::needless_range_loop)]
    fn path_counts_match_adjacency_powers() {
        let q = Quiver::build(
            &["1", "2", "3"],
            &[
                ("a", "1", "2"),
                ("b", "1", "2"),
                ("c", "2", "3"),
                ("d", "3", "1"),
                ("l", "2", "2"),
            ],
        )
        .unwrap();
        let n = q.vertex_count();
        let mut adj = vec![vec![0u64; n]; n];
        for a in q.arrows() {
            adj[a.source][a.target] += 1;
        }
        let max_len = 5;
        // total[s][t] = sum over k<=max_len of (adj^k)[s][t]
        let mut total = vec![vec![0u64; n]; n];
        let mut power = vec![vec![0u64; n]; n];
        for (i, row) in power.iter_mut().enumerate() {
            row[i] = 1;
        }
        for v in total.iter_mut().enumerate() {
            v.1[v.0] = 1;
        }
        for _ in 1..=max_len {
            let mut next = vec![vec![0u64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        next[i][j] += power[i][k] * adj[k][j];
                    }
                }
            }
            power = next;
            for i in 0..n {
                for j in 0..n {
                    total[i][j] += power[i][j];
                }
            }
        }
        for s in 0..n {
            for t in 0..n {
                let count = enumerate_paths(&q, max_len, Some(s), Some(t)).len() as u64;
                assert_eq!(count, total[s][t], "mismatch at ({s},{t})");
            }
        }
    }

    #[test]
    fn triangles_found() {
        let q = three_cycle();
        let v1 = q.vertex("1").unwrap();
        let tris = triangles_through(&q, v1);
        assert_eq!(tris.len(), 1);
    }

    #[test]
    fn path_validation() {
        let q = two_cycle();
        let a = q.arrow_by_name("a").unwrap();
        let b = q.arrow_by_name("b").unwrap();
        assert!(Path::new(&q, 0, vec![a, b]).is_ok());
        assert_eq!(
            Path::new(&q, 0, vec![b]).unwrap_err(),
            QuiverError::NonComposable(0)
        );
    }

    #[test]
    fn connectivity_reported() {
        let q = Quiver::build(&["1", "2"], &[]).unwrap();
        assert!(!q.is_connected());
        assert!(two_cycle().is_connected());
    }
}
