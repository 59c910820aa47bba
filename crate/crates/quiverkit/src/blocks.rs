//! Block structure of biregular quivers.
//!
//! A block is a subquiver whose vertex set splits into black (interior)
//! vertices and white outlets such that every ambient arrow incident to a
//! black vertex lies inside the block. The five shipped kinds:
//!
//! * `I`   - a single white vertex carrying a loop,
//! * `II`  - a black vertex with a loop and a 2-cycle to a white outlet,
//! * `III` - a directed triangle of white outlets,
//! * `V1`  - a 2-cycle with one black 1-regular vertex,
//! * `V2`  - a directed 4-cycle with two black 1-regular vertices at
//!   opposite positions.
//!
//! For V1/V2 the search additionally demands that every white outlet is
//! 2-regular in the ambient quiver: an outlet with no capacity left for the
//! rest of the quiver is not an outlet, which is what rules out e.g. a bare
//! 4-cycle being its own V2 block. Shapes that satisfy the closure condition
//! but miss that requirement are still reported, as rejected candidates.

use crate::quiver::{degree_profile, one_regular_vertices, AIdx, Quiver, Regularity, VIdx};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockKind {
    I,
    II,
    III,
    V1,
    V2,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockKind::I => "I",
            BlockKind::II => "II",
            BlockKind::III => "III",
            BlockKind::V1 => "V1",
            BlockKind::V2 => "V2",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub black: BTreeSet<VIdx>,
    pub white: BTreeSet<VIdx>,
    pub arrows: BTreeSet<AIdx>,
    /// Degeneracy or rejection notes (e.g. coinciding white outlets).
    pub notes: Vec<String>,
}

impl Block {
    /// Checks the block invariants against the ambient quiver: the closure
    /// condition at black vertices and the kind-specific shape.
    pub fn validate(&self, quiver: &Quiver) -> Result<(), String> {
        for &b in &self.black {
            for (idx, a) in quiver.arrows().iter().enumerate() {
                if (a.source == b || a.target == b) && !self.arrows.contains(&idx) {
                    return Err(format!(
                        "arrow `{}` incident to black vertex `{}` is outside the block",
                        a.name,
                        quiver.vertex_name(b)
                    ));
                }
            }
        }
        let prof = degree_profile(quiver);
        let shape_err = |msg: &str| Err(format!("kind {} shape violated: {msg}", self.kind));
        match self.kind {
            BlockKind::I => {
                if !self.black.is_empty() || self.white.len() != 1 || self.arrows.len() != 1 {
                    return shape_err("expected one white vertex with one loop");
                }
                let v = *self.white.iter().next().unwrap();
                let a = *self.arrows.iter().next().unwrap();
                let arrow = quiver.arrow(a);
                if arrow.source != v || arrow.target != v {
                    return shape_err("arrow is not a loop at the white vertex");
                }
            }
            BlockKind::II => {
                if self.black.len() != 1 || self.white.len() != 1 || self.arrows.len() != 3 {
                    return shape_err("expected loop plus 2-cycle");
                }
                let b = *self.black.iter().next().unwrap();
                let w = *self.white.iter().next().unwrap();
                let mut have_loop = false;
                let mut have_out = false;
                let mut have_in = false;
                for &a in &self.arrows {
                    let arr = quiver.arrow(a);
                    match (arr.source, arr.target) {
                        (s, t) if s == b && t == b => have_loop = true,
                        (s, t) if s == b && t == w => have_out = true,
                        (s, t) if s == w && t == b => have_in = true,
                        _ => return shape_err("stray arrow"),
                    }
                }
                if !(have_loop && have_out && have_in) {
                    return shape_err("expected loop plus 2-cycle");
                }
            }
            BlockKind::III => {
                if !self.black.is_empty() || self.white.len() != 3 || self.arrows.len() != 3 {
                    return shape_err("expected directed triangle of whites");
                }
                if !is_directed_cycle(quiver, &self.arrows, &self.white) {
                    return shape_err("arrows do not form a 3-cycle on the whites");
                }
            }
            BlockKind::V1 => {
                if self.black.len() != 1 || self.white.len() != 1 || self.arrows.len() != 2 {
                    return shape_err("expected a 2-cycle");
                }
                let i = *self.black.iter().next().unwrap();
                let w = *self.white.iter().next().unwrap();
                if i == w {
                    return shape_err("black and white coincide");
                }
                let mut have_out = false;
                let mut have_in = false;
                for &a in &self.arrows {
                    let arr = quiver.arrow(a);
                    if arr.source == i && arr.target == w {
                        have_out = true;
                    } else if arr.source == w && arr.target == i {
                        have_in = true;
                    } else {
                        return shape_err("stray arrow");
                    }
                }
                if !(have_out && have_in) {
                    return shape_err("expected a 2-cycle");
                }
                if prof[i].regularity != Regularity::OneRegular {
                    return shape_err("black vertex is not 1-regular");
                }
            }
            BlockKind::V2 => {
                if self.black.len() != 2 || self.arrows.len() != 4 || self.white.is_empty() {
                    return shape_err("expected a 4-cycle with two blacks");
                }
                let mut verts = self.black.clone();
                verts.extend(self.white.iter());
                if !is_directed_cycle(quiver, &self.arrows, &verts) {
                    return shape_err("arrows do not form a cycle");
                }
                for &a in &self.arrows {
                    let arr = quiver.arrow(a);
                    let sb = self.black.contains(&arr.source);
                    let tb = self.black.contains(&arr.target);
                    if sb == tb {
                        return shape_err("blacks are not at opposite positions");
                    }
                }
                for &b in &self.black {
                    if prof[b].regularity != Regularity::OneRegular {
                        return shape_err("black vertex is not 1-regular");
                    }
                }
            }
        }
        Ok(())
    }

    fn sort_key(&self, quiver: &Quiver) -> (BlockKind, Vec<String>, Vec<String>) {
        (
            self.kind,
            self.black
                .iter()
                .map(|&v| quiver.vertex_name(v).to_string())
                .collect(),
            self.arrows
                .iter()
                .map(|&a| quiver.arrow(a).name.clone())
                .collect(),
        )
    }

    pub fn describe(&self, quiver: &Quiver) -> String {
        let names = |vs: &BTreeSet<VIdx>| {
            vs.iter()
                .map(|&v| quiver.vertex_name(v))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut s = format!(
            "{} black={{{}}} white={{{}}} arrows={{{}}}",
            self.kind,
            names(&self.black),
            names(&self.white),
            self.arrows
                .iter()
                .map(|&a| quiver.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        );
        for n in &self.notes {
            s.push_str(&format!(" [{n}]"));
        }
        s
    }
}

fn is_directed_cycle(quiver: &Quiver, arrows: &BTreeSet<AIdx>, verts: &BTreeSet<VIdx>) -> bool {
    // every vertex has exactly one in and one out among the arrows, and the
    // arrows connect exactly these vertices
    for &a in arrows {
        let arr = quiver.arrow(a);
        if !verts.contains(&arr.source) || !verts.contains(&arr.target) {
            return false;
        }
    }
    for &v in verts {
        let ins = arrows
            .iter()
            .filter(|&&a| quiver.arrow(a).target == v)
            .count();
        let outs = arrows
            .iter()
            .filter(|&&a| quiver.arrow(a).source == v)
            .count();
        if ins * outs == 0 {
            return false;
        }
    }
    true
}

/// Output of [`find_blocks`].
#[derive(Clone, Debug, Default)]
pub struct BlockReport {
    /// Chosen block per 1-regular vertex (deduplicated) plus every block of
    /// kind I, II, III found in the quiver.
    pub blocks: Vec<Block>,
    /// Valid V1/V2 blocks beyond the chosen assignment (ties).
    pub alternatives: Vec<Block>,
    /// Closure-satisfying shapes that fail the outlet requirement.
    pub rejected: Vec<Block>,
    /// 1-regular vertices contained in no valid V1/V2 block.
    pub unassigned: Vec<VIdx>,
}

/// Identifies blocks: V1/V2 around every 1-regular vertex, and kinds I, II,
/// III wherever their shapes occur. Absence is data, not an error.
pub fn find_blocks(quiver: &Quiver) -> BlockReport {
    let prof = degree_profile(quiver);
    let two_regular = |v: VIdx| prof[v].regularity == Regularity::TwoRegular;
    let mut report = BlockReport::default();
    let mut chosen: Vec<Block> = Vec::new();
    let mut covered: BTreeSet<VIdx> = BTreeSet::new();

    for i in one_regular_vertices(quiver) {
        let outs = quiver.arrows_from(i);
        let ins = quiver.arrows_into(i);
        let (al, ga) = (outs[0], ins[0]);
        let w_out = quiver.arrow(al).target;
        let w_in = quiver.arrow(ga).source;
        let mut found: Vec<Block> = Vec::new();

        // V1: 2-cycle i <-> w
        if w_out == w_in && w_out != i {
            let mut block = Block {
                kind: BlockKind::V1,
                black: BTreeSet::from([i]),
                white: BTreeSet::from([w_out]),
                arrows: BTreeSet::from([al, ga]),
                notes: Vec::new(),
            };
            if two_regular(w_out) {
                found.push(block);
            } else {
                block.notes.push("white outlet is not 2-regular".into());
                report.rejected.push(block);
            }
        }

        // V2: 4-cycle i -> w1 -> b -> w2 -> i with b 1-regular
        if w_out != i && w_in != i {
            for &beta in &quiver.arrows_from(w_out) {
                let b = quiver.arrow(beta).target;
                if b == i || b == w_out || b == w_in {
                    continue;
                }
                if prof[b].regularity != Regularity::OneRegular {
                    continue;
                }
                for &eps in &quiver.arrows_from(b) {
                    if quiver.arrow(eps).target != w_in {
                        continue;
                    }
                    let mut block = Block {
                        kind: BlockKind::V2,
                        black: BTreeSet::from([i, b]),
                        white: BTreeSet::from([w_out, w_in]),
                        arrows: BTreeSet::from([al, beta, eps, ga]),
                        notes: Vec::new(),
                    };
                    if w_out == w_in {
                        block
                            .notes
                            .push("degenerate: white outlets coincide".into());
                    }
                    if two_regular(w_out) && two_regular(w_in) {
                        found.push(block);
                    } else {
                        block.notes.push("white outlet is not 2-regular".into());
                        report.rejected.push(block);
                    }
                }
            }
        }

        if found.is_empty() {
            report.unassigned.push(i);
        } else if covered.contains(&i) {
            // already black in a chosen block; remaining shapes are ties
            found.sort_by_key(|a| a.sort_key(quiver));
            for alt in found {
                if !chosen.contains(&alt) && !report.alternatives.contains(&alt) {
                    report.alternatives.push(alt);
                }
            }
        } else {
            // prefer blocks whose blacks are all still uncovered, so that a
            // glued quiver decomposes the way it was assembled
            found.sort_by(|a, b| {
                let fresh = |blk: &Block| blk.black.iter().any(|v| covered.contains(v));
                (fresh(a), a.sort_key(quiver)).cmp(&(fresh(b), b.sort_key(quiver)))
            });
            let first = found.remove(0);
            covered.extend(first.black.iter().copied());
            if !chosen.contains(&first) {
                chosen.push(first);
            }
            for alt in found {
                if !chosen.contains(&alt) && !report.alternatives.contains(&alt) {
                    report.alternatives.push(alt);
                }
            }
        }
    }

    // kinds I and II at loops
    for (idx, a) in quiver.arrows().iter().enumerate() {
        if a.source != a.target {
            continue;
        }
        let v = a.source;
        chosen.push(Block {
            kind: BlockKind::I,
            black: BTreeSet::new(),
            white: BTreeSet::from([v]),
            arrows: BTreeSet::from([idx]),
            notes: Vec::new(),
        });
        // II: the loop vertex is 2-regular and its other two arrows form a
        // 2-cycle with a single partner
        let outs = quiver.arrows_from(v);
        let ins = quiver.arrows_into(v);
        if outs.len() == 2 && ins.len() == 2 {
            let other_out: Vec<AIdx> = outs.iter().copied().filter(|&x| x != idx).collect();
            let other_in: Vec<AIdx> = ins.iter().copied().filter(|&x| x != idx).collect();
            if other_out.len() == 1 && other_in.len() == 1 {
                let w = quiver.arrow(other_out[0]).target;
                if w != v && quiver.arrow(other_in[0]).source == w {
                    chosen.push(Block {
                        kind: BlockKind::II,
                        black: BTreeSet::from([v]),
                        white: BTreeSet::from([w]),
                        arrows: BTreeSet::from([idx, other_out[0], other_in[0]]),
                        notes: Vec::new(),
                    });
                }
            }
        }
    }

    // kind III at directed triangles
    let mut seen_triangles: BTreeSet<BTreeSet<AIdx>> = BTreeSet::new();
    for v in 0..quiver.vertex_count() {
        for (ga, al, be) in crate::quiver::triangles_through(quiver, v) {
            let arrows = BTreeSet::from([ga, al, be]);
            if seen_triangles.insert(arrows.clone()) {
                let mut white = BTreeSet::new();
                for &a in &arrows {
                    white.insert(quiver.arrow(a).source);
                }
                chosen.push(Block {
                    kind: BlockKind::III,
                    black: BTreeSet::new(),
                    white,
                    arrows,
                    notes: Vec::new(),
                });
            }
        }
    }

    chosen.sort_by_key(|a| a.sort_key(quiver));
    chosen.dedup();
    report.blocks = chosen;
    report.alternatives.sort_by_key(|a| a.sort_key(quiver));
    report.rejected.sort_by_key(|a| a.sort_key(quiver));
    report
}
