//! Text format for quivers and presentations, plus dot export.
//!
//! ```text
//! # comment
//! quiver
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! arrow b: 2 -> 1
//! relations
//! rel r1: 1*a.b.a
//! rel r2: 1*b.a.b - 1/2*b.a.b   # coefficients are exact rationals
//! bound 3
//! ```
//!
//! A file without a `relations` section and without a `bound` line denotes a
//! bare quiver. `bound` is required as soon as relations appear. Identifiers
//! are `[A-Za-z0-9_]+`; paths are arrow ids joined by dots, written in
//! composition order (first arrow first).

use crate::algebra::{Presentation, Relation};
use crate::pattern::PatternSpec;
use crate::quiver::{degree_profile, Path, Quiver, Regularity};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{source_name}:{line}:{col}: {msg}")]
pub struct ParseError {
    pub source_name: String,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A parsed input file: either a bare quiver or a presentation, tagged with
/// where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub source_name: String,
    pub content: DocContent,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DocContent {
    Quiver(Quiver),
    Presentation(Presentation),
}

impl InputDocument {
    pub fn quiver(&self) -> &Quiver {
        match &self.content {
            DocContent::Quiver(q) => q,
            DocContent::Presentation(p) => &p.quiver,
        }
    }

    pub fn has_relations(&self) -> bool {
        matches!(&self.content, DocContent::Presentation(_))
    }

    /// The presentation view: bare quivers wrap into an empty presentation
    /// with the minimal bound.
    pub fn presentation(&self) -> Presentation {
        match &self.content {
            DocContent::Quiver(q) => {
                Presentation::new(q.clone(), Vec::new(), 2).expect("empty presentation is valid")
            }
            DocContent::Presentation(p) => p.clone(),
        }
    }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_coefficient(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn parse_input(text: &str, source_name: &str) -> Result<InputDocument, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    // column of a token within the raw source line (1-based; 1 when the
    // error has no specific token)
    let col_of = |line: usize, token: &str| -> usize {
        if line == 0 || token.is_empty() {
            return 1;
        }
        // tokens follow their keyword, so search from the right
        lines
            .get(line - 1)
            .and_then(|raw| raw.rfind(token))
            .map(|i| i + 1)
            .unwrap_or(1)
    };
    let err = |line: usize, token: &str, msg: String| ParseError {
        source_name: source_name.to_string(),
        line,
        col: col_of(line, token),
        msg,
    };
    #[derive(PartialEq)]
    enum Section {
        Start,
        Quiver,
        Relations,
    }
    let mut section = Section::Start;
    let mut quiver = Quiver::new();
    let mut relations: Vec<Relation> = Vec::new();
    let mut saw_relations_section = false;
    let mut bound: Option<usize> = None;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "quiver" => {
                if section != Section::Start {
                    return Err(err(ln, keyword, "duplicate `quiver` section".into()));
                }
                section = Section::Quiver;
            }
            "vertex" => {
                if section != Section::Quiver {
                    return Err(err(
                        ln,
                        keyword,
                        "`vertex` outside the quiver section".into(),
                    ));
                }
                if !valid_id(rest) {
                    return Err(err(ln, rest, format!("invalid vertex id `{rest}`")));
                }
                quiver
                    .add_vertex(rest)
                    .map_err(|e| err(ln, rest, e.to_string()))?;
            }
            "arrow" => {
                if section != Section::Quiver {
                    return Err(err(
                        ln,
                        keyword,
                        "`arrow` outside the quiver section".into(),
                    ));
                }
                let (name, spec) = rest
                    .split_once(':')
                    .ok_or_else(|| err(ln, rest, "expected `arrow <id>: <src> -> <tgt>`".into()))?;
                let name = name.trim();
                let (src, tgt) = spec
                    .split_once("->")
                    .ok_or_else(|| err(ln, spec, "expected `<src> -> <tgt>`".into()))?;
                let (src, tgt) = (src.trim(), tgt.trim());
                if !valid_id(name) || !valid_id(src) || !valid_id(tgt) {
                    return Err(err(
                        ln,
                        rest,
                        format!("invalid identifier in arrow line `{rest}`"),
                    ));
                }
                quiver
                    .add_arrow(name, src, tgt)
                    .map_err(|e| err(ln, name, e.to_string()))?;
            }
            "relations" => {
                if section == Section::Start {
                    return Err(err(
                        ln,
                        keyword,
                        "`relations` before the quiver section".into(),
                    ));
                }
                if saw_relations_section {
                    return Err(err(ln, keyword, "duplicate `relations` section".into()));
                }
                saw_relations_section = true;
                section = Section::Relations;
            }
            "rel" => {
                if section != Section::Relations {
                    return Err(err(
                        ln,
                        keyword,
                        "`rel` outside the relations section".into(),
                    ));
                }
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err(ln, rest, "expected `rel <name>: <terms>`".into()))?;
                let name = name.trim();
                if !valid_id(name) {
                    return Err(err(ln, name, format!("invalid relation name `{name}`")));
                }
                let rel = parse_relation(&quiver, name, body.trim())
                    .map_err(|msg| err(ln, body.trim(), msg))?;
                rel.validate(&quiver)
                    .map_err(|e| err(ln, name, e.to_string()))?;
                relations.push(rel);
            }
            "bound" => {
                if bound.is_some() {
                    return Err(err(ln, keyword, "duplicate `bound` line".into()));
                }
                let m: usize = rest
                    .parse()
                    .map_err(|_| err(ln, rest, format!("invalid bound `{rest}`")))?;
                bound = Some(m);
            }
            other => return Err(err(ln, other, format!("unknown keyword `{other}`"))),
        }
    }

    if section == Section::Start {
        return Err(err(0, "", "missing `quiver` section".into()));
    }
    let content = match (saw_relations_section || bound.is_some(), bound) {
        (false, _) => DocContent::Quiver(quiver),
        (true, None) => {
            return Err(err(
                0,
                "",
                "a file with relations needs a `bound <m>` line".into(),
            ))
        }
        (true, Some(m)) => DocContent::Presentation(
            Presentation::new(quiver, relations, m).map_err(|e| err(0, "", e.to_string()))?,
        ),
    };
    Ok(InputDocument {
        source_name: source_name.to_string(),
        content,
    })
}

fn parse_relation(quiver: &Quiver, name: &str, body: &str) -> Result<Relation, String> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(format!("relation `{name}` has no terms"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut sign = BigRational::new(BigInt::from(1), BigInt::from(1));
    loop {
        let term = tokens
            .get(i)
            .ok_or_else(|| format!("relation `{name}`: dangling operator"))?;
        let (coef_str, path_str) = term
            .split_once('*')
            .ok_or_else(|| format!("expected `<coef>*<path>`, got `{term}`"))?;
        let coef = parse_coefficient(coef_str)
            .ok_or_else(|| format!("invalid coefficient `{coef_str}`"))?;
        let mut arrows = Vec::new();
        for part in path_str.split('.') {
            arrows.push(
                quiver
                    .arrow_by_name(part)
                    .map_err(|_| format!("unknown arrow `{part}` in relation `{name}`"))?,
            );
        }
        let source = quiver.arrow(arrows[0]).source;
        let path = Path::new(quiver, source, arrows)
            .map_err(|_| format!("non-composable path `{path_str}` in relation `{name}`"))?;
        terms.push((&sign * coef, path));
        i += 1;
        match tokens.get(i) {
            None => break,
            Some(&"+") => sign = BigRational::new(BigInt::from(1), BigInt::from(1)),
            Some(&"-") => sign = BigRational::new(BigInt::from(-1), BigInt::from(1)),
            Some(tok) => return Err(format!("expected `+` or `-`, got `{tok}`")),
        }
        i += 1;
    }
    Ok(Relation {
        name: name.to_string(),
        terms,
    })
}

/// Canonical text form; `parse_input(print_document(d)) == d`.
pub fn print_document(doc: &InputDocument) -> String {
    let mut out = String::new();
    let q = doc.quiver();
    out.push_str("quiver\n");
    for v in q.vertex_names() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for a in q.arrows() {
        writeln!(
            out,
            "arrow {}: {} -> {}",
            a.name,
            q.vertex_name(a.source),
            q.vertex_name(a.target)
        )
        .unwrap();
    }
    if let DocContent::Presentation(p) = &doc.content {
        if !p.relations.is_empty() {
            out.push_str("relations\n");
            for r in &p.relations {
                write!(out, "rel {}:", r.name).unwrap();
                for (k, (c, path)) in r.terms.iter().enumerate() {
                    let (sign, abs) = if c < &BigRational::zero() {
                        ("-", -c)
                    } else {
                        ("+", c.clone())
                    };
                    let coef = if abs.is_integer() {
                        abs.numer().to_string()
                    } else {
                        format!("{}/{}", abs.numer(), abs.denom())
                    };
                    if k == 0 {
                        if sign == "-" {
                            write!(out, " -{coef}*{}", path.display(q)).unwrap();
                        } else {
                            write!(out, " {coef}*{}", path.display(q)).unwrap();
                        }
                    } else {
                        write!(out, " {sign} {coef}*{}", path.display(q)).unwrap();
                    }
                }
                out.push('\n');
            }
        }
        writeln!(out, "bound {}", p.bound).unwrap();
    }
    out
}

/// Parses a pattern file: the quiver grammar extended with a `pattern
/// <name>` header and optional `describe`, `constraint` and `annotate`
/// lines.
///
/// ```text
/// pattern my_shape
/// describe a doubled arrow under a 1-regular vertex
/// quiver
/// vertex i
/// vertex j
/// arrow f: i -> j
/// arrow g: i -> j
/// constraint i exact 1 1
/// annotate must_not_precede f.g   # paths as in relations
/// ```
pub fn parse_pattern(text: &str, source_name: &str) -> Result<PatternSpec, ParseError> {
    use crate::pattern::{Annotation, AnnotationKind, DegreeConstraint};
    let err = |line: usize, msg: String| ParseError {
        source_name: source_name.to_string(),
        line,
        col: 1,
        msg,
    };
    let mut name: Option<String> = None;
    let mut describe = String::new();
    let mut quiver = Quiver::new();
    let mut in_quiver = false;
    // constraints and annotations are resolved once the quiver is complete
    let mut constraint_lines: Vec<(usize, String)> = Vec::new();
    let mut annotate_lines: Vec<(usize, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "pattern" => {
                if !valid_id(rest) {
                    return Err(err(ln, format!("invalid pattern name `{rest}`")));
                }
                name = Some(rest.to_string());
            }
            "describe" => describe = rest.to_string(),
            "quiver" => in_quiver = true,
            "vertex" => {
                if !in_quiver || !valid_id(rest) {
                    return Err(err(ln, format!("invalid vertex line `{line}`")));
                }
                quiver
                    .add_vertex(rest)
                    .map_err(|e| err(ln, e.to_string()))?;
            }
            "arrow" => {
                let (aname, spec) = rest
                    .split_once(':')
                    .ok_or_else(|| err(ln, "expected `arrow <id>: <src> -> <tgt>`".into()))?;
                let (src, tgt) = spec
                    .split_once("->")
                    .ok_or_else(|| err(ln, "expected `<src> -> <tgt>`".into()))?;
                quiver
                    .add_arrow(aname.trim(), src.trim(), tgt.trim())
                    .map_err(|e| err(ln, e.to_string()))?;
            }
            "constraint" => constraint_lines.push((ln, rest.to_string())),
            "annotate" => annotate_lines.push((ln, rest.to_string())),
            other => return Err(err(ln, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| err(0, "missing `pattern <name>` line".into()))?;
    let mut constraints = vec![DegreeConstraint::Free; quiver.vertex_count()];
    for (ln, rest) in constraint_lines {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        match parts.as_slice() {
            [v, "free"] => {
                let vi = quiver.vertex(v).map_err(|e| err(ln, e.to_string()))?;
                constraints[vi] = DegreeConstraint::Free;
            }
            [v, "exact", ind, outd] => {
                let vi = quiver.vertex(v).map_err(|e| err(ln, e.to_string()))?;
                let in_degree = ind.parse().map_err(|_| err(ln, "bad in-degree".into()))?;
                let out_degree = outd.parse().map_err(|_| err(ln, "bad out-degree".into()))?;
                constraints[vi] = DegreeConstraint::Exact {
                    in_degree,
                    out_degree,
                };
            }
            _ => {
                return Err(err(
                    ln,
                    "expected `constraint <vertex> free` or `constraint <vertex> exact <in> <out>`"
                        .into(),
                ))
            }
        }
    }
    let mut annotations = Vec::new();
    for (ln, rest) in annotate_lines {
        let (kind, path_str) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(ln, "expected `annotate <kind> <path>`".into()))?;
        let kind = match kind {
            "must_precede" => AnnotationKind::MustPrecede,
            "must_not_precede" => AnnotationKind::MustNotPrecede,
            other => return Err(err(ln, format!("unknown annotation kind `{other}`"))),
        };
        let arrows: Vec<usize> = path_str
            .trim()
            .split('.')
            .map(|part| quiver.arrow_by_name(part))
            .collect::<Result<_, _>>()
            .map_err(|e| err(ln, e.to_string()))?;
        let source = quiver.arrow(arrows[0]).source;
        let path = Path::new(&quiver, source, arrows)
            .map_err(|_| err(ln, format!("non-composable annotation path `{path_str}`")))?;
        annotations.push(Annotation { path, kind });
    }
    PatternSpec::new(&name, quiver, constraints, annotations, &describe)
        .map_err(|e| err(0, e.to_string()))
}

/// Graphviz export; 1-regular vertices are drawn filled.
pub fn to_dot(q: &Quiver) -> String {
    let prof = degree_profile(q);
    let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
    for p in &prof {
        if p.regularity == Regularity::OneRegular {
            writeln!(
                out,
                "  \"{}\" [shape=circle, style=filled, fillcolor=black, fontcolor=white];",
                p.name
            )
            .unwrap();
        } else {
            writeln!(out, "  \"{}\" [shape=circle];", p.name).unwrap();
        }
    }
    for a in q.arrows() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            q.vertex_name(a.source),
            q.vertex_name(a.target),
            a.name
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Renders a corpus entry in the file format.
pub fn document_of_entry(entry: &crate::corpus::NamedEntry) -> InputDocument {
    let content = match &entry.entry {
        crate::corpus::CorpusEntry::Quiver(q) => DocContent::Quiver(q.clone()),
        crate::corpus::CorpusEntry::Presentation(p) => DocContent::Presentation(p.clone()),
    };
    InputDocument {
        source_name: format!("corpus:{}", entry.name),
        content,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_quiver() {
        let doc = parse_input("quiver\nvertex v\narrow x: v -> v\n", "test").unwrap();
        assert!(!doc.has_relations());
        assert_eq!(doc.quiver().vertex_count(), 1);
        assert_eq!(doc.quiver().arrow_count(), 1);
    }

    #[test]
    fn parse_presentation_with_comments() {
        let text = "
# quaternion-type local algebra
quiver
vertex v
arrow x: v -> v
arrow y: v -> v
relations
rel r1: 1*x.x - 1*y.x.y
rel r2: 1*y.y - 1*x.y.x
rel r3: 1*x.x.y   # socle-level monomial
rel r4: 1*y.x.x
bound 5
";
        let doc = parse_input(text, "test").unwrap();
        let DocContent::Presentation(p) = &doc.content else {
            panic!()
        };
        assert_eq!(p.relations.len(), 4);
        assert_eq!(p.bound, 5);
    }

    #[test]
    fn error_locations_are_reported() {
        let e = parse_input("quiver\nvertex v\narrow x v -> v\n", "f").unwrap_err();
        assert_eq!((e.line, e.col), (3, 7));
        let e = parse_input("quiver\nvertex v\nvertex v\n", "f").unwrap_err();
        assert_eq!((e.line, e.col), (3, 8));
        assert!(e.msg.contains("duplicate"));
        let e = parse_input("quiver\nvertex v\nbogus line\n", "f").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        assert!(e.to_string().starts_with("f:3:1:"));
    }

    #[test]
    fn non_parallel_relation_rejected() {
        let text = "quiver
vertex 1
vertex 2
arrow a: 1 -> 2
arrow b: 2 -> 1
relations
rel r: 1*a.b - 1*b.a
bound 3
";
        let e = parse_input(text, "f").unwrap_err();
        assert!(e.msg.contains("non-parallel"), "{}", e.msg);
    }

    #[test]
    fn short_relation_path_rejected() {
        let text = "quiver\nvertex v\narrow x: v -> v\nrelations\nrel r: 1*x\nbound 2\n";
        let e = parse_input(text, "f").unwrap_err();
        assert!(e.msg.contains("length"), "{}", e.msg);
    }

    #[test]
    fn relations_need_bound() {
        let text = "quiver\nvertex v\narrow x: v -> v\nrelations\nrel r: 1*x.x\n";
        let e = parse_input(text, "f").unwrap_err();
        assert!(e.msg.contains("bound"), "{}", e.msg);
    }

    #[test]
    fn roundtrip_corpus_documents() {
        for entry in crate::corpus::named_corpus() {
            let doc = document_of_entry(&entry);
            let printed = print_document(&doc);
            let reparsed = parse_input(&printed, &doc.source_name).unwrap();
            assert_eq!(reparsed.content, doc.content, "entry {}", entry.name);
        }
    }

    #[test]
    fn fractional_coefficients_roundtrip() {
        let text = "quiver
vertex v
arrow x: v -> v
arrow y: v -> v
relations
rel r: 1/2*x.x - 3*y.x.y + 2/7*x.y.x
bound 5
";
        let doc = parse_input(text, "f").unwrap();
        let printed = print_document(&doc);
        let again = parse_input(&printed, "f").unwrap();
        assert_eq!(doc.content, again.content);
    }

    #[test]
    fn dot_marks_one_regular_vertices() {
        let q = crate::corpus::spherical_quiver();
        let dot = to_dot(&q);
        assert_eq!(dot.matches("fillcolor=black").count(), 4);
    }
}
