//! Test-corpus construction: block glueings, named examples and seeded
//! random biregular quivers.

use crate::algebra::{Presentation, Relation};
use crate::blocks::BlockKind;
use crate::quiver::{degree_profile, is_biregular, Quiver, Regularity, VIdx};
use crate::rng::SplitMix64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("block {index} of kind {kind} expects {expected} vertices, got {got}")]
    BadArity {
        index: usize,
        kind: BlockKind,
        expected: usize,
        got: usize,
    },
    #[error("vertex name `{0}` is used by more than one block")]
    DuplicateVertexName(String),
    #[error("`{0}` is not a white outlet of any block")]
    NotAnOutlet(String),
    #[error("outlet `{0}` is left unmatched")]
    UnmatchedOutlet(String),
    #[error("outlet `{0}` is matched more than once")]
    OverMatchedOutlet(String),
    #[error("outlet `{0}` cannot be matched with itself")]
    SelfMatch(String),
    #[error("no biregular quiver of the requested size exists")]
    InfeasibleSize,
}

/// One block instance: a kind plus fresh vertex names, black vertices first.
///
/// Arities (black; white): I (0;1), II (1;1), III (0;3), V1 (1;1),
/// V2 (2;2). For III the whites form the directed triangle `w1->w2->w3->w1`;
/// for V2 the 4-cycle is `w1->b1->w2->b2->w1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub kind: BlockKind,
    pub vertices: Vec<String>,
}

impl BlockSpec {
    fn arity(kind: BlockKind) -> (usize, usize) {
        match kind {
            BlockKind::I => (0, 1),
            BlockKind::II => (1, 1),
            BlockKind::III => (0, 3),
            BlockKind::V1 => (1, 1),
            BlockKind::V2 => (2, 2),
        }
    }

    pub fn blacks(&self) -> &[String] {
        let (b, _) = Self::arity(self.kind);
        &self.vertices[..b]
    }

    pub fn whites(&self) -> &[String] {
        let (b, _) = Self::arity(self.kind);
        &self.vertices[b..]
    }
}

/// Blocks plus a perfect matching of their white outlets; matched outlets
/// are identified into a single vertex named after the first of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueSpec {
    pub blocks: Vec<BlockSpec>,
    pub matching: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub quiver: Quiver,
    pub biregular: bool,
    pub offenders: Vec<String>,
}

pub fn glue_blocks(spec: &GlueSpec) -> Result<GlueResult, GlueError> {
    // validate arities and name freshness
    let mut names: BTreeMap<&str, ()> = BTreeMap::new();
    let mut outlets: Vec<&str> = Vec::new();
    for (index, b) in spec.blocks.iter().enumerate() {
        let (blacks, whites) = BlockSpec::arity(b.kind);
        if b.vertices.len() != blacks + whites {
            return Err(GlueError::BadArity {
                index,
                kind: b.kind,
                expected: blacks + whites,
                got: b.vertices.len(),
            });
        }
        for v in &b.vertices {
            if names.insert(v, ()).is_some() {
                return Err(GlueError::DuplicateVertexName(v.clone()));
            }
        }
        outlets.extend(b.whites().iter().map(|s| s.as_str()));
    }
    // validate the matching
    let mut match_count: BTreeMap<&str, usize> = outlets.iter().map(|&o| (o, 0)).collect();
    for (p, q) in &spec.matching {
        if p == q {
            return Err(GlueError::SelfMatch(p.clone()));
        }
        for name in [p, q] {
            match match_count.get_mut(name.as_str()) {
                None => return Err(GlueError::NotAnOutlet(name.clone())),
                Some(c) => {
                    *c += 1;
                    if *c > 1 {
                        return Err(GlueError::OverMatchedOutlet(name.clone()));
                    }
                }
            }
        }
    }
    if let Some((o, _)) = match_count.iter().find(|(_, &c)| c == 0) {
        return Err(GlueError::UnmatchedOutlet(o.to_string()));
    }

    // identified outlet pairs keep the first name
    let rename: BTreeMap<&str, &str> = spec
        .matching
        .iter()
        .map(|(p, q)| (q.as_str(), p.as_str()))
        .collect();
    let resolve = |v: &str| -> String { rename.get(v).unwrap_or(&v).to_string() };

    let mut quiver = Quiver::new();
    for b in &spec.blocks {
        for v in &b.vertices {
            let name = resolve(v);
            if quiver.vertex(&name).is_err() {
                quiver.add_vertex(&name).unwrap();
            }
        }
    }
    for (k, b) in spec.blocks.iter().enumerate() {
        let arrow = |q: &mut Quiver, role: &str, s: &str, t: &str| {
            q.add_arrow(&format!("B{k}{role}"), &resolve(s), &resolve(t))
                .unwrap();
        };
        let vs: Vec<&str> = b.vertices.iter().map(|s| s.as_str()).collect();
        match b.kind {
            BlockKind::I => {
                arrow(&mut quiver, "l", vs[0], vs[0]);
            }
            BlockKind::II => {
                arrow(&mut quiver, "l", vs[0], vs[0]);
                arrow(&mut quiver, "f", vs[0], vs[1]);
                arrow(&mut quiver, "g", vs[1], vs[0]);
            }
            BlockKind::III => {
                arrow(&mut quiver, "f", vs[0], vs[1]);
                arrow(&mut quiver, "g", vs[1], vs[2]);
                arrow(&mut quiver, "h", vs[2], vs[0]);
            }
            BlockKind::V1 => {
                arrow(&mut quiver, "f", vs[0], vs[1]);
                arrow(&mut quiver, "g", vs[1], vs[0]);
            }
            BlockKind::V2 => {
                arrow(&mut quiver, "f", vs[2], vs[0]);
                arrow(&mut quiver, "g", vs[0], vs[3]);
                arrow(&mut quiver, "h", vs[3], vs[1]);
                arrow(&mut quiver, "k", vs[1], vs[2]);
            }
        }
    }
    let (biregular, offender_idx) = is_biregular(&quiver);
    let offenders = offender_idx
        .into_iter()
        .map(|v| quiver.vertex_name(v).to_string())
        .collect();
    Ok(GlueResult {
        quiver,
        biregular,
        offenders,
    })
}

pub fn spherical_glue_spec() -> GlueSpec {
    GlueSpec {
        blocks: vec![
            BlockSpec {
                kind: BlockKind::V2,
                vertices: vec!["a1".into(), "a2".into(), "p1".into(), "p2".into()],
            },
            BlockSpec {
                kind: BlockKind::V2,
                vertices: vec!["b1".into(), "b2".into(), "q1".into(), "q2".into()],
            },
        ],
        matching: vec![("p1".into(), "q1".into()), ("p2".into(), "q2".into())],
    }
}

/// The 6-vertex spherical quiver: two V2 blocks with both outlet pairs
/// identified.
pub fn spherical_quiver() -> Quiver {
    glue_blocks(&spherical_glue_spec()).unwrap().quiver
}

/// Seeded random legal glue spec. Kinds are drawn uniformly, the outlet
/// matching is a random perfect matching that never pairs two kind-I loops
/// (which would stack two loops on one vertex, a configuration the scan
/// registry rejects).
pub fn random_glue_spec(seed: u64) -> GlueSpec {
    let mut rng = SplitMix64::new(seed);
    let kinds = [
        BlockKind::I,
        BlockKind::II,
        BlockKind::III,
        BlockKind::V1,
        BlockKind::V2,
    ];
    let mut blocks: Vec<BlockSpec> = Vec::new();
    let mut fresh = 0usize;
    let n_blocks = 1 + rng.below(5) as usize;
    for _ in 0..n_blocks {
        let kind = kinds[rng.below(5) as usize];
        blocks.push(make_block(kind, &mut fresh));
    }
    // a matching with no I-I pair exists iff the loop outlets do not
    // outnumber the rest and the total is even; pad with V1 blocks until
    // both hold
    let counts = |blocks: &[BlockSpec]| {
        let loops: usize = blocks
            .iter()
            .filter(|b| b.kind == BlockKind::I)
            .map(|b| b.whites().len())
            .sum();
        let total: usize = blocks.iter().map(|b| b.whites().len()).sum();
        (loops, total - loops)
    };
    loop {
        let (loops, others) = counts(&blocks);
        if loops <= others && (loops + others) % 2 == 0 {
            break;
        }
        blocks.push(make_block(BlockKind::V1, &mut fresh));
    }
    let is_loop_outlet: BTreeMap<String, bool> = blocks
        .iter()
        .flat_map(|b| {
            let k = b.kind;
            b.whites()
                .iter()
                .map(move |w| (w.clone(), k == BlockKind::I))
        })
        .collect();
    let mut outlets: Vec<String> = blocks
        .iter()
        .flat_map(|b| b.whites().iter().cloned())
        .collect();
    let mut attempts = 0;
    loop {
        rng.shuffle(&mut outlets);
        let ok = outlets
            .chunks(2)
            .all(|pair| !(is_loop_outlet[&pair[0]] && is_loop_outlet[&pair[1]]));
        if ok {
            break;
        }
        attempts += 1;
        if attempts > 1000 {
            // deterministic fallback: pair each loop outlet with a
            // non-loop outlet, then the remaining outlets in order
            let (mut loops, mut others): (Vec<String>, Vec<String>) =
                outlets.iter().cloned().partition(|o| is_loop_outlet[o]);
            let mut paired = Vec::new();
            while let Some(l) = loops.pop() {
                paired.push(l);
                paired.push(others.pop().expect("loop outlets are outnumbered"));
            }
            paired.extend(others);
            outlets = paired;
            break;
        }
    }
    let matching = outlets
        .chunks(2)
        .map(|pair| (pair[0].clone(), pair[1].clone()))
        .collect();
    GlueSpec { blocks, matching }
}

fn make_block(kind: BlockKind, fresh: &mut usize) -> BlockSpec {
    let (b, w) = BlockSpec::arity(kind);
    let vertices = (0..b + w)
        .map(|_| {
            *fresh += 1;
            format!("v{fresh}")
        })
        .collect();
    BlockSpec { kind, vertices }
}

/// Seeded biregular quiver: a full permutation gives every vertex one
/// in/out pair, a permutation of a random subset gives the 2-regular
/// vertices their second pair. Same seed, same quiver, bit for bit.
pub fn random_biregular(n_vertices: usize, seed: u64) -> Result<Quiver, GlueError> {
    if n_vertices == 0 {
        return Err(GlueError::InfeasibleSize);
    }
    let mut rng = SplitMix64::new(seed);
    let mut quiver = Quiver::new();
    for i in 0..n_vertices {
        quiver.add_vertex(&format!("v{}", i + 1)).unwrap();
    }
    let mut targets: Vec<usize> = (0..n_vertices).collect();
    rng.shuffle(&mut targets);
    for (i, &t) in targets.iter().enumerate() {
        quiver
            .add_arrow(
                &format!("p{}", i + 1),
                &format!("v{}", i + 1),
                &format!("v{}", t + 1),
            )
            .unwrap();
    }
    let doubled: Vec<usize> = (0..n_vertices).filter(|_| rng.coin()).collect();
    let mut second: Vec<usize> = doubled.clone();
    rng.shuffle(&mut second);
    for (&s, &t) in doubled.iter().zip(second.iter()) {
        quiver
            .add_arrow(
                &format!("q{}", s + 1),
                &format!("v{}", s + 1),
                &format!("v{}", t + 1),
            )
            .unwrap();
    }
    Ok(quiver)
}

/// Seeded single-arrow mutations that provably break biregularity or block
/// closure; used by the mutation test suite.
pub fn breaking_mutations(quiver: &Quiver, count: usize, seed: u64) -> Vec<(String, Quiver)> {
    let mut rng = SplitMix64::new(seed);
    let prof = degree_profile(quiver);
    let non_loop_arrows: Vec<usize> = (0..quiver.arrow_count())
        .filter(|&a| quiver.arrow(a).source != quiver.arrow(a).target)
        .collect();
    let two_regular: Vec<VIdx> = prof
        .iter()
        .filter(|p| p.regularity == Regularity::TwoRegular)
        .map(|p| p.vertex)
        .collect();
    let mut out = Vec::new();
    let mut fresh = 0;
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 100 * (count + 1),
            "quiver admits no breaking single-arrow mutation"
        );
        match rng.below(3) {
            0 if !non_loop_arrows.is_empty() => {
                let a = non_loop_arrows[rng.below(non_loop_arrows.len() as u64) as usize];
                let name = quiver.arrow(a).name.clone();
                out.push((format!("delete arrow {name}"), quiver.without_arrow(a)));
            }
            1 => {
                // inserting any non-loop arrow unbalances both endpoints
                let s = rng.below(quiver.vertex_count() as u64) as usize;
                let t = rng.below(quiver.vertex_count() as u64) as usize;
                if s == t {
                    continue;
                }
                fresh += 1;
                let mut q = quiver.clone();
                q.add_arrow(
                    &format!("mut{fresh}"),
                    quiver.vertex_name(s),
                    quiver.vertex_name(t),
                )
                .unwrap();
                out.push((
                    format!(
                        "insert arrow {} -> {}",
                        quiver.vertex_name(s),
                        quiver.vertex_name(t)
                    ),
                    q,
                ));
            }
            2 if !two_regular.is_empty() => {
                let v = two_regular[rng.below(two_regular.len() as u64) as usize];
                fresh += 1;
                let mut q = quiver.clone();
                q.add_arrow(
                    &format!("mut{fresh}"),
                    quiver.vertex_name(v),
                    quiver.vertex_name(v),
                )
                .unwrap();
                out.push((format!("insert loop at {}", quiver.vertex_name(v)), q));
            }
            _ => continue,
        }
    }
    out
}

/// Parses the compact glue-spec syntax used by the CLI: block instances
/// like `V2(b1,b2;p,q)` (blacks before the semicolon) or `III(x,y,z)`,
/// followed by outlet matchings `p=q`, all whitespace-separated.
pub fn parse_glue_spec(text: &str) -> Result<GlueSpec, String> {
    let mut blocks = Vec::new();
    let mut matching = Vec::new();
    for token in text.split_whitespace() {
        if let Some((kind, rest)) = token.split_once('(') {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("missing `)` in `{token}`"))?;
            let kind = match kind {
                "I" => BlockKind::I,
                "II" => BlockKind::II,
                "III" => BlockKind::III,
                "V1" => BlockKind::V1,
                "V2" => BlockKind::V2,
                other => return Err(format!("unknown block kind `{other}`")),
            };
            let vertices: Vec<String> = inner
                .split([',', ';'])
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            blocks.push(BlockSpec { kind, vertices });
        } else if let Some((p, q)) = token.split_once('=') {
            matching.push((p.trim().to_string(), q.trim().to_string()));
        } else {
            return Err(format!("cannot parse glue token `{token}`"));
        }
    }
    if blocks.is_empty() {
        return Err("glue spec contains no blocks".into());
    }
    Ok(GlueSpec { blocks, matching })
}

/// A corpus entry is either a bare quiver or a full presentation.
#[derive(Clone, Debug)]
pub enum CorpusEntry {
    Quiver(Quiver),
    Presentation(Presentation),
}

#[derive(Clone, Debug)]
pub struct NamedEntry {
    pub name: &'static str,
    pub entry: CorpusEntry,
    /// Whether the symmetry diagnostics are expected to pass.
    pub symmetric_expected: bool,
}

/// The shipped example algebras and figure quivers.
pub fn named_corpus() -> Vec<NamedEntry> {
    let mut out = Vec::new();

    // K[x]/(x^2)
    {
        let q = Quiver::build(&["v"], &[("x", "v", "v")]).unwrap();
        let r = Relation::of_paths(&q, "r", &[(1, &["x", "x"])]).unwrap();
        out.push(NamedEntry {
            name: "loop_x2",
            entry: CorpusEntry::Presentation(Presentation::new(q, vec![r], 2).unwrap()),
            symmetric_expected: true,
        });
    }
    // cyclic 2-vertex algebra, all length-3 paths zero
    {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let r1 = Relation::of_paths(&q, "r1", &[(1, &["a", "b", "a"])]).unwrap();
        let r2 = Relation::of_paths(&q, "r2", &[(1, &["b", "a", "b"])]).unwrap();
        out.push(NamedEntry {
            name: "cycle2_len3",
            entry: CorpusEntry::Presentation(Presentation::new(q, vec![r1, r2], 3).unwrap()),
            symmetric_expected: true,
        });
    }
    // cyclic 3-vertex algebra, all length-4 paths zero
    {
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
        )
        .unwrap();
        let rels = vec![
            Relation::of_paths(&q, "r1", &[(1, &["a", "b", "c", "a"])]).unwrap(),
            Relation::of_paths(&q, "r2", &[(1, &["b", "c", "a", "b"])]).unwrap(),
            Relation::of_paths(&q, "r3", &[(1, &["c", "a", "b", "c"])]).unwrap(),
        ];
        out.push(NamedEntry {
            name: "cycle3_len4",
            entry: CorpusEntry::Presentation(Presentation::new(q, rels, 4).unwrap()),
            symmetric_expected: true,
        });
    }
    // quaternion-type local algebra of dimension 8
    {
        let q = Quiver::build(&["v"], &[("x", "v", "v"), ("y", "v", "v")]).unwrap();
        let rels = vec![
            Relation::of_paths(&q, "r1", &[(1, &["x", "x"]), (-1, &["y", "x", "y"])]).unwrap(),
            Relation::of_paths(&q, "r2", &[(1, &["y", "y"]), (-1, &["x", "y", "x"])]).unwrap(),
            Relation::of_paths(&q, "r3", &[(1, &["x", "x", "y"])]).unwrap(),
            Relation::of_paths(&q, "r4", &[(1, &["y", "x", "x"])]).unwrap(),
        ];
        out.push(NamedEntry {
            name: "quaternion_local",
            entry: CorpusEntry::Presentation(Presentation::new(q, rels, 5).unwrap()),
            symmetric_expected: true,
        });
    }
    // 2-vertex instance whose Cartan matrix has four equal entries
    {
        let q = Quiver::build(
            &["x", "j"],
            &[("ga", "x", "j"), ("b1", "j", "x"), ("b2", "j", "x")],
        )
        .unwrap();
        let rels = vec![
            Relation::of_paths(&q, "r1", &[(1, &["ga", "b2"])]).unwrap(),
            Relation::of_paths(&q, "r2", &[(1, &["b2", "ga"])]).unwrap(),
            Relation::of_paths(&q, "r3", &[(1, &["b1", "ga", "b1"])]).unwrap(),
        ];
        out.push(NamedEntry {
            name: "lemma42_instance",
            entry: CorpusEntry::Presentation(Presentation::new(q, rels, 4).unwrap()),
            symmetric_expected: false,
        });
    }
    out.push(NamedEntry {
        name: "spherical_quiver",
        entry: CorpusEntry::Quiver(spherical_quiver()),
        symmetric_expected: false,
    });
    // two triangles over a common base with 1-regular apexes
    {
        let q = Quiver::build(
            &["x", "i", "j", "y", "istar"],
            &[
                ("ga", "x", "i"),
                ("al", "i", "j"),
                ("de", "j", "x"),
                ("dd", "j", "y"),
                ("ap", "y", "istar"),
                ("as", "istar", "j"),
            ],
        )
        .unwrap();
        out.push(NamedEntry {
            name: "lemma41_figure",
            entry: CorpusEntry::Quiver(q),
            symmetric_expected: false,
        });
    }
    // the 5-vertex quiver whose single 1-vertex admits no block
    {
        let q = Quiver::build(
            &["a", "i", "x", "j", "ibar"],
            &[
                ("ga", "x", "i"),
                ("al", "i", "j"),
                ("be", "j", "x"),
                ("bb", "j", "a"),
                ("bs", "a", "x"),
                ("gb", "x", "ibar"),
                ("as", "ibar", "j"),
                ("eta", "a", "ibar"),
                ("sg", "ibar", "a"),
            ],
        )
        .unwrap();
        out.push(NamedEntry {
            name: "cor43_figure",
            entry: CorpusEntry::Quiver(q),
            symmetric_expected: false,
        });
    }
    // double arrows under a 1-vertex
    {
        let q = Quiver::build(
            &["i", "x", "j", "a"],
            &[
                ("ga", "x", "i"),
                ("al", "i", "j"),
                ("gb", "x", "a"),
                ("as", "a", "j"),
                ("b1", "j", "x"),
                ("b2", "j", "x"),
            ],
        )
        .unwrap();
        out.push(NamedEntry {
            name: "lemma44_figure",
            entry: CorpusEntry::Quiver(q),
            symmetric_expected: false,
        });
    }
    // the 5-vertex block around a 1-vertex in a triangle (one white outlet)
    {
        let q = Quiver::build(
            &["a", "i", "x", "j", "ibar"],
            &[
                ("bs", "a", "x"),
                ("ga", "x", "i"),
                ("al", "i", "j"),
                ("be", "j", "x"),
                ("bb", "j", "a"),
                ("gb", "x", "ibar"),
                ("as", "ibar", "j"),
            ],
        )
        .unwrap();
        out.push(NamedEntry {
            name: "prop5_figure",
            entry: CorpusEntry::Quiver(q),
            symmetric_expected: false,
        });
    }
    out
}

pub fn corpus_entry(name: &str) -> Option<NamedEntry> {
    named_corpus().into_iter().find(|e| e.name == name)
}
