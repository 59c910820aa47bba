//! Annotated subquiver pattern matching.
//!
//! A [`PatternSpec`] is a small quiver together with optional per-vertex
//! ambient-degree constraints and relation annotations on its paths. An
//! embedding maps pattern vertices and arrows injectively into an ambient
//! quiver, preserving sources and targets. Embeddings are counted as
//! subquiver occurrences: two arrow assignments that pick the same ambient
//! arrow set (necessarily permuting parallel arrows) are the same
//! occurrence.
//!
//! Relation annotations are evaluated against a caller-supplied `precedes`
//! predicate on ambient paths; an occurrence satisfies its annotations when
//! some arrow assignment inside the occurrence does.

use crate::quiver::{AIdx, Path, Quiver, VIdx};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern `{0}` carries relation annotations but no precedes predicate was supplied")]
    MissingPrecedes(String),
    #[error("annotation path does not compose in the pattern quiver")]
    BadAnnotationPath,
}

/// Per-vertex constraint, checked against degrees in the *ambient* quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeConstraint {
    Free,
    Exact { in_degree: usize, out_degree: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnotationKind {
    MustPrecede,
    MustNotPrecede,
}

/// A path of the pattern quiver that must (or must not) appear as a
/// relation summand under the embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub path: Path,
    pub kind: AnnotationKind,
}

#[derive(Clone, Debug)]
pub struct PatternSpec {
    pub name: String,
    pub quiver: Quiver,
    pub constraints: Vec<DegreeConstraint>,
    pub annotations: Vec<Annotation>,
    pub description: String,
}

impl PatternSpec {
    pub fn new(
        name: &str,
        quiver: Quiver,
        constraints: Vec<DegreeConstraint>,
        annotations: Vec<Annotation>,
        description: &str,
    ) -> Result<PatternSpec, PatternError> {
        assert_eq!(constraints.len(), quiver.vertex_count());
        for a in &annotations {
            Path::new(&quiver, a.path.source, a.path.arrows.clone())
                .map_err(|_| PatternError::BadAnnotationPath)?;
        }
        Ok(PatternSpec {
            name: name.to_string(),
            quiver,
            constraints,
            annotations,
            description: description.to_string(),
        })
    }

    /// Pattern with all vertices free and no annotations.
    pub fn plain(name: &str, quiver: Quiver, description: &str) -> PatternSpec {
        let constraints = vec![DegreeConstraint::Free; quiver.vertex_count()];
        PatternSpec::new(name, quiver, constraints, Vec::new(), description).unwrap()
    }

    pub fn is_annotated(&self) -> bool {
        !self.annotations.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} vertices, {} arrows{} - {}",
            self.name,
            self.quiver.vertex_count(),
            self.quiver.arrow_count(),
            if self.is_annotated() {
                format!(", {} annotations", self.annotations.len())
            } else {
                String::new()
            },
            self.description
        )
    }
}

/// One subquiver occurrence: vertex map plus a representative arrow map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_map: Vec<VIdx>,
    pub arrow_map: Vec<AIdx>,
}

#[derive(Clone, Debug)]
pub struct AnnotationVerdict {
    pub kind: AnnotationKind,
    pub image: Path,
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub pattern: String,
    /// Occurrences with their annotation verdicts (empty verdict list when
    /// the pattern has no annotations).
    pub embeddings: Vec<(Embedding, Vec<AnnotationVerdict>)>,
}

impl MatchReport {
    /// An occurrence "hits" when every annotation is satisfied.
    pub fn hits(&self) -> Vec<&Embedding> {
        self.embeddings
            .iter()
            .filter(|(_, vs)| vs.iter().all(|v| v.satisfied))
            .map(|(e, _)| e)
            .collect()
    }
}

pub type Precedes<'a> = &'a dyn Fn(&Path) -> bool;

/// Finds every occurrence of the pattern in the ambient quiver,
/// deterministically ordered. `precedes` is required when the pattern
/// carries annotations.
pub fn match_pattern(
    quiver: &Quiver,
    spec: &PatternSpec,
    precedes: Option<Precedes>,
) -> Result<MatchReport, PatternError> {
    if spec.is_annotated() && precedes.is_none() {
        return Err(PatternError::MissingPrecedes(spec.name.clone()));
    }
    let mut report = MatchReport {
        pattern: spec.name.clone(),
        embeddings: Vec::new(),
    };
    let pq = &spec.quiver;
    let pn = pq.vertex_count();
    if pn > quiver.vertex_count() || pq.arrow_count() > quiver.arrow_count() {
        return Ok(report);
    }

    // visit pattern vertices connectivity-first so pruning bites early
    let order = visit_order(pq);
    // ambient candidates in name order for deterministic output
    let mut ambient: Vec<VIdx> = (0..quiver.vertex_count()).collect();
    ambient.sort_by(|&a, &b| quiver.vertex_name(a).cmp(quiver.vertex_name(b)));

    let mut vmap: Vec<Option<VIdx>> = vec![None; pn];
    let mut used: Vec<bool> = vec![false; quiver.vertex_count()];
    backtrack(
        quiver,
        spec,
        &order,
        0,
        &ambient,
        &mut vmap,
        &mut used,
        precedes,
        &mut report,
    );
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    quiver: &Quiver,
    spec: &PatternSpec,
    order: &[VIdx],
    depth: usize,
    ambient: &[VIdx],
    vmap: &mut Vec<Option<VIdx>>,
    used: &mut Vec<bool>,
    precedes: Option<Precedes>,
    report: &mut MatchReport,
) {
    if depth == order.len() {
        let vertex_map: Vec<VIdx> = vmap.iter().map(|v| v.unwrap()).collect();
        finish_arrows(quiver, spec, &vertex_map, precedes, report);
        return;
    }
    let pv = order[depth];
    let pq = &spec.quiver;
    for &cand in ambient {
        if used[cand] {
            continue;
        }
        match spec.constraints[pv] {
            DegreeConstraint::Free => {
                if quiver.in_degree(cand) < pq.in_degree(pv)
                    || quiver.out_degree(cand) < pq.out_degree(pv)
                {
                    continue;
                }
            }
            DegreeConstraint::Exact {
                in_degree,
                out_degree,
            } => {
                if quiver.in_degree(cand) != in_degree || quiver.out_degree(cand) != out_degree {
                    continue;
                }
            }
        }
        vmap[pv] = Some(cand);
        used[cand] = true;
        if arrows_feasible(quiver, pq, vmap) {
            backtrack(
                quiver,
                spec,
                order,
                depth + 1,
                ambient,
                vmap,
                used,
                precedes,
                report,
            );
        }
        vmap[pv] = None;
        used[cand] = false;
    }
}

/// Parallel-class multiplicities must fit wherever both endpoints are
/// already mapped.
fn arrows_feasible(quiver: &Quiver, pq: &Quiver, vmap: &[Option<VIdx>]) -> bool {
    let mut need: BTreeMap<(VIdx, VIdx), usize> = BTreeMap::new();
    for a in pq.arrows() {
        if let (Some(s), Some(t)) = (vmap[a.source], vmap[a.target]) {
            *need.entry((s, t)).or_default() += 1;
        }
    }
    need.into_iter()
        .all(|((s, t), k)| quiver.arrows_between(s, t).len() >= k)
}

fn finish_arrows(
    quiver: &Quiver,
    spec: &PatternSpec,
    vertex_map: &[VIdx],
    precedes: Option<Precedes>,
    report: &mut MatchReport,
) {
    let pq = &spec.quiver;
    // group pattern arrows by endpoint pair; groups draw from disjoint
    // ambient pools, so injectivity reduces to per-group choices
    let mut groups: BTreeMap<(VIdx, VIdx), Vec<AIdx>> = BTreeMap::new();
    for (i, a) in pq.arrows().iter().enumerate() {
        groups
            .entry((vertex_map[a.source], vertex_map[a.target]))
            .or_default()
            .push(i);
    }
    let group_list: Vec<(Vec<AIdx>, Vec<AIdx>)> = groups
        .into_iter()
        .map(|((s, t), pat)| (pat, quiver.arrows_between(s, t)))
        .collect();
    // occurrences = one ambient subset per group
    let mut subset_choice: Vec<Vec<AIdx>> = Vec::new();
    enumerate_subsets(
        quiver,
        spec,
        vertex_map,
        &group_list,
        0,
        &mut subset_choice,
        precedes,
        report,
    );
}

#[allow(clippy::too_many_arguments)]
fn enumerate_subsets(
    quiver: &Quiver,
    spec: &PatternSpec,
    vertex_map: &[VIdx],
    groups: &[(Vec<AIdx>, Vec<AIdx>)],
    depth: usize,
    chosen: &mut Vec<Vec<AIdx>>,
    precedes: Option<Precedes>,
    report: &mut MatchReport,
) {
    if depth == groups.len() {
        emit_occurrence(quiver, spec, vertex_map, groups, chosen, precedes, report);
        return;
    }
    let (pat, pool) = &groups[depth];
    let k = pat.len();
    if pool.len() < k {
        return;
    }
    for combo in combinations(pool, k) {
        chosen.push(combo);
        enumerate_subsets(
            quiver,
            spec,
            vertex_map,
            groups,
            depth + 1,
            chosen,
            precedes,
            report,
        );
        chosen.pop();
    }
}

fn emit_occurrence(
    quiver: &Quiver,
    spec: &PatternSpec,
    vertex_map: &[VIdx],
    groups: &[(Vec<AIdx>, Vec<AIdx>)],
    chosen: &[Vec<AIdx>],
    precedes: Option<Precedes>,
    report: &mut MatchReport,
) {
    // walk the per-group bijections, looking for an assignment whose
    // annotation verdicts are all satisfied; keep the first assignment
    // otherwise
    let mut best: Option<(Vec<AIdx>, Vec<AnnotationVerdict>)> = None;
    let mut assignment = vec![0usize; spec.quiver.arrow_count()];
    let perms: Vec<Vec<Vec<AIdx>>> = chosen.iter().map(|c| permutations(c)).collect();
    let mut idx = vec![0usize; groups.len()];
    loop {
        for (g, (pat, _)) in groups.iter().enumerate() {
            let perm = &perms[g][idx[g]];
            for (slot, &pa) in pat.iter().enumerate() {
                assignment[pa] = perm[slot];
            }
        }
        let verdicts = evaluate_annotations(quiver, spec, &assignment, precedes);
        let all_ok = verdicts.iter().all(|v| v.satisfied);
        if best.is_none() || all_ok {
            best = Some((assignment.clone(), verdicts));
        }
        if all_ok {
            break;
        }
        // next combination of permutation indices
        let mut g = 0;
        loop {
            if g == groups.len() {
                // exhausted
                let (arrow_map, verdicts) = best.take().unwrap();
                report.embeddings.push((
                    Embedding {
                        vertex_map: vertex_map.to_vec(),
                        arrow_map,
                    },
                    verdicts,
                ));
                return;
            }
            idx[g] += 1;
            if idx[g] < perms[g].len() {
                break;
            }
            idx[g] = 0;
            g += 1;
        }
    }
    let (arrow_map, verdicts) = best.take().unwrap();
    report.embeddings.push((
        Embedding {
            vertex_map: vertex_map.to_vec(),
            arrow_map,
        },
        verdicts,
    ));
}

fn evaluate_annotations(
    quiver: &Quiver,
    spec: &PatternSpec,
    assignment: &[AIdx],
    precedes: Option<Precedes>,
) -> Vec<AnnotationVerdict> {
    spec.annotations
        .iter()
        .map(|ann| {
            let arrows: Vec<AIdx> = ann.path.arrows.iter().map(|&pa| assignment[pa]).collect();
            let source = quiver.arrow(arrows[0]).source;
            let image = Path::new(quiver, source, arrows).expect("homomorphic image composes");
            let holds = precedes.expect("checked at entry")(&image);
            let satisfied = match ann.kind {
                AnnotationKind::MustPrecede => holds,
                AnnotationKind::MustNotPrecede => !holds,
            };
            AnnotationVerdict {
                kind: ann.kind,
                image,
                satisfied,
            }
        })
        .collect()
}

fn visit_order(pq: &Quiver) -> Vec<VIdx> {
    let n = pq.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<VIdx> = pq
                .arrows()
                .iter()
                .filter_map(|a| {
                    if a.source == v {
                        Some(a.target)
                    } else if a.target == v {
                        Some(a.source)
                    } else {
                        None
                    }
                })
                .collect();
            nbrs.sort_unstable();
            for w in nbrs {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn combinations(pool: &[AIdx], k: usize) -> Vec<Vec<AIdx>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(pool: &[AIdx], k: usize, start: usize, cur: &mut Vec<AIdx>, out: &mut Vec<Vec<AIdx>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(pool, k, 0, &mut cur, &mut out);
    out
}

fn permutations(items: &[AIdx]) -> Vec<Vec<AIdx>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest: Vec<AIdx> = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn k2_plus() -> PatternSpec {
        let q = Quiver::build(
            &["l", "m", "r"],
            &[("a1", "m", "l"), ("a2", "m", "l"), ("b", "m", "r")],
        )
        .unwrap();
        PatternSpec::plain(
            "K2_plus",
            q,
            "double arrow and a second arrow out of one vertex",
        )
    }

    #[test]
    fn k2_plus_needs_the_branching_shape() {
        // double arrow 1 -> 2 followed by 2 -> 3: branching shape absent
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("u", "1", "2"), ("v", "1", "2"), ("w", "2", "3")],
        )
        .unwrap();
        let rep = match_pattern(&q, &k2_plus(), None).unwrap();
        assert!(rep.embeddings.is_empty());
        // double arrow 2 -> 1 plus 2 -> 3: exactly the branching shape
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("u", "2", "1"), ("v", "2", "1"), ("w", "2", "3")],
        )
        .unwrap();
        let rep = match_pattern(&q, &k2_plus(), None).unwrap();
        assert_eq!(rep.embeddings.len(), 1);
    }

    #[test]
    fn triple_arrow_missing_in_3_cycle() {
        let pat = {
            let q = Quiver::build(
                &["s", "t"],
                &[("a", "s", "t"), ("b", "s", "t"), ("c", "s", "t")],
            )
            .unwrap();
            PatternSpec::plain("triple_arrow", q, "three parallel arrows")
        };
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
        )
        .unwrap();
        let rep = match_pattern(&q, &pat, None).unwrap();
        assert!(rep.embeddings.is_empty());
    }

    #[test]
    fn annotations_require_predicate() {
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("al", "1", "2"), ("ab", "1", "2"), ("be", "2", "3")],
        )
        .unwrap();
        let al = q.arrow_by_name("al").unwrap();
        let be = q.arrow_by_name("be").unwrap();
        let ann = Annotation {
            path: Path::new(&q, 0, vec![al, be]).unwrap(),
            kind: AnnotationKind::MustNotPrecede,
        };
        let spec = PatternSpec::new(
            "K2_star_right",
            q,
            vec![DegreeConstraint::Free; 3],
            vec![ann],
            "composable double arrow",
        )
        .unwrap();
        let ambient = Quiver::build(
            &["1", "2", "3"],
            &[("u", "1", "2"), ("v", "1", "2"), ("w", "2", "3")],
        )
        .unwrap();
        assert_eq!(
            match_pattern(&ambient, &spec, None).unwrap_err(),
            PatternError::MissingPrecedes("K2_star_right".into())
        );
        let no = |_p: &Path| false;
        let rep = match_pattern(&ambient, &spec, Some(&no)).unwrap();
        assert_eq!(rep.embeddings.len(), 1);
        assert_eq!(rep.hits().len(), 1);
        let yes = |_p: &Path| true;
        let rep = match_pattern(&ambient, &spec, Some(&yes)).unwrap();
        assert_eq!(rep.hits().len(), 0);
    }

    #[test]
    fn exact_degree_constraints_check_ambient() {
        // pattern: one vertex required to be 1-regular in the ambient quiver
        let pq = Quiver::build(&["v"], &[]).unwrap();
        let spec = PatternSpec::new(
            "one_regular_vertex",
            pq,
            vec![DegreeConstraint::Exact {
                in_degree: 1,
                out_degree: 1,
            }],
            Vec::new(),
            "a 1-regular vertex",
        )
        .unwrap();
        let q = Quiver::build(
            &["1", "2"],
            &[("a", "1", "2"), ("b", "2", "1"), ("l", "2", "2")],
        )
        .unwrap();
        let rep = match_pattern(&q, &spec, None).unwrap();
        assert_eq!(rep.embeddings.len(), 1);
        assert_eq!(q.vertex_name(rep.embeddings[0].0.vertex_map[0]), "1");
    }

    #[test]
    fn parallel_arrows_counted_as_occurrences() {
        // pattern: a double arrow; ambient has a triple arrow -> C(3,2) = 3
        let pq = Quiver::build(&["s", "t"], &[("a", "s", "t"), ("b", "s", "t")]).unwrap();
        let spec = PatternSpec::plain("double", pq, "double arrow");
        let q = Quiver::build(
            &["1", "2"],
            &[("u", "1", "2"), ("v", "1", "2"), ("w", "1", "2")],
        )
        .unwrap();
        let rep = match_pattern(&q, &spec, None).unwrap();
        assert_eq!(rep.embeddings.len(), 3);
    }

    #[test]
    fn loops_in_patterns_match_loops_only() {
        let pq = Quiver::build(&["v"], &[("l", "v", "v")]).unwrap();
        let spec = PatternSpec::plain("loop", pq, "a loop");
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "2")]).unwrap();
        let rep = match_pattern(&q, &spec, None).unwrap();
        assert_eq!(rep.embeddings.len(), 1);
        assert_eq!(q.vertex_name(rep.embeddings[0].0.vertex_map[0]), "2");
    }
}
