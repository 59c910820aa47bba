//! Command-line front end.
//!
//! Exit codes: 0 = pass/success, 1 = violations or negative verdicts found,
//! 2 = usage, parse or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use quiverkit::algebra::{cartan_matrix, compute_basis, idempotent_algebra, symmetry_diagnostics};
use quiverkit::blocks::find_blocks;
use quiverkit::corpus;
use quiverkit::format::{
    document_of_entry, parse_input, print_document, to_dot, DocContent, InputDocument,
};
use quiverkit::homology::{period4_diagnostics, syzygy_chain};
use quiverkit::quiver::{degree_profile, is_biregular, Quiver};
use quiverkit::registry::{registry_list, scan_forbidden};
use quiverkit::scalar::FieldSpec;
use quiverkit::verify::{main_theorem_report, run_battery, BatteryOptions, Verdict, VerifyError};
use serde_json::json;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "quiverkit",
    version,
    about = "Workbench for bound quiver algebras: bases, Cartan matrices, syzygies, blocks and forbidden-configuration scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Args)]
struct InputArgs {
    /// Input file in the quiver/presentation format
    file: Option<PathBuf>,
    /// Use a named corpus entry as input instead of a file
    #[arg(long, conflicts_with = "file")]
    corpus: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Ground field: `rational` or a prime modulus
    #[arg(long, default_value = "rational")]
    field: String,
}

#[derive(Subcommand)]
enum Command {
    /// Degree profile, biregularity, connectivity and block structure
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scan the forbidden-configuration registry
    Scan {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Additional pattern files to scan alongside the registry
        #[arg(long = "pattern", value_name = "FILE")]
        patterns: Vec<PathBuf>,
    },
    /// Cartan matrix of the presented algebra
    Cartan {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Syzygy chain of one simple module
    Syzygy {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Vertex of the simple module
        #[arg(long)]
        simple: String,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Periods of the simple modules
    Period {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        /// Restrict to one vertex
        #[arg(long)]
        simple: Option<String>,
    },
    /// Period-4 matrix identities around one simple
    Diag4 {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        simple: String,
    },
    /// Run the full structural check battery
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        /// Include the optional successor-overlap diagnostic
        #[arg(long)]
        extra: bool,
    },
    /// Classify 1-regular vertices into V1/V2 blocks
    MainTheorem {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Assemble a quiver from glued blocks, e.g. "V2(a,b;p,q) V2(c,d;r,s) p=r q=s"
    Gen {
        #[arg(long)]
        blocks: String,
    },
    /// Print a named corpus entry, or list all entries
    Corpus {
        #[arg(long)]
        name: Option<String>,
    },
    /// Basis and Gabriel quiver of an idempotent cut e.Lambda.e
    Idem {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated vertex ids
        #[arg(long)]
        vertices: String,
    },
    /// List the shipped pattern registry
    Registry,
    /// Export the quiver in dot format
    Dot {
        #[command(flatten)]
        input: InputArgs,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_input(input: &InputArgs) -> Result<InputDocument, String> {
    match (&input.file, &input.corpus) {
        (Some(path), None) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_input(&text, &path.display().to_string()).map_err(|e| e.to_string())
        }
        (None, Some(name)) => corpus::corpus_entry(name)
            .map(|e| document_of_entry(&e))
            .ok_or_else(|| format!("no corpus entry named `{name}`")),
        _ => Err("provide an input file or --corpus <name>".into()),
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "rational" {
        return Ok(FieldSpec::Rational);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| format!("--field expects `rational` or a prime, got `{s}`"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

fn vertex_of(q: &Quiver, name: &str) -> Result<usize, String> {
    q.vertex(name).map_err(|e| e.to_string())
}

fn basis_of(
    doc: &InputDocument,
    field: FieldSpec,
) -> Result<quiverkit::algebra::AlgebraBasis, String> {
    match &doc.content {
        DocContent::Presentation(p) => compute_basis(p, field).map_err(|e| e.to_string()),
        DocContent::Quiver(_) => {
            Err("this command needs relations and a bound, not a bare quiver".into())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { input, common } => {
            let doc = load_input(&input)?;
            let q = doc.quiver();
            let prof = degree_profile(q);
            let (bireg, offenders) = is_biregular(q);
            let report = find_blocks(q);
            if common.format == OutputFormat::Structured {
                let blocks: Vec<_> = report
                    .blocks
                    .iter()
                    .map(|b| {
                        json!({
                            "kind": b.kind.to_string(),
                            "description": b.describe(q),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({
                        "vertices": q.vertex_count(),
                        "arrows": q.arrow_count(),
                        "connected": q.is_connected(),
                        "biregular": bireg,
                        "profile": prof.iter().map(|p| json!({
                            "vertex": p.name,
                            "in": p.in_degree,
                            "out": p.out_degree,
                            "regularity": p.regularity.to_string(),
                        })).collect::<Vec<_>>(),
                        "blocks": blocks,
                        "unassigned_one_regular": report.unassigned.iter()
                            .map(|&v| q.vertex_name(v)).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!(
                    "{} vertices, {} arrows, {}connected",
                    q.vertex_count(),
                    q.arrow_count(),
                    if q.is_connected() { "" } else { "not " }
                );
                for p in &prof {
                    println!(
                        "  {}: in {}, out {} ({})",
                        p.name, p.in_degree, p.out_degree, p.regularity
                    );
                }
                if bireg {
                    println!("biregular: yes");
                } else {
                    let names: Vec<&str> = offenders.iter().map(|&v| q.vertex_name(v)).collect();
                    println!("biregular: no ({})", names.join(", "));
                }
                println!("blocks:");
                for b in &report.blocks {
                    println!("  {}", b.describe(q));
                }
                for b in &report.alternatives {
                    println!("  (alternative) {}", b.describe(q));
                }
                for b in &report.rejected {
                    println!("  (rejected) {}", b.describe(q));
                }
                for &v in &report.unassigned {
                    println!("  unassigned 1-regular vertex: {}", q.vertex_name(v));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            input,
            common,
            patterns,
        } => {
            let doc = load_input(&input)?;
            let q = doc.quiver();
            let pres = doc.presentation();
            let precedes = |p: &quiverkit::quiver::Path| pres.path_precedes(p);
            // the precedes predicate is relative to the supplied generators;
            // warn when they are not minimal
            if doc.has_relations() {
                if let Ok(basis) = compute_basis(&pres, parse_field(&common.field)?) {
                    for v in quiverkit::algebra::minimality_check(&pres, &basis)
                        .map_err(|e| e.to_string())?
                    {
                        if v.redundant {
                            eprintln!(
                                "warning: relation `{}` is redundant; precedes verdicts are \
                                 relative to this non-minimal generating set",
                                v.relation
                            );
                        }
                    }
                }
            }
            let mut items = if doc.has_relations() {
                scan_forbidden(q, Some(&precedes))
            } else {
                scan_forbidden(q, None)
            };
            for path in &patterns {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let spec = quiverkit::format::parse_pattern(&text, &path.display().to_string())
                    .map_err(|e| e.to_string())?;
                let item = if spec.is_annotated() && !doc.has_relations() {
                    quiverkit::registry::ScanItem {
                        pattern: spec.name.clone(),
                        report: None,
                        skipped: Some("annotation-gated: no relation data supplied".into()),
                    }
                } else {
                    let pred: quiverkit::pattern::Precedes = &precedes;
                    let rep = quiverkit::pattern::match_pattern(
                        q,
                        &spec,
                        doc.has_relations().then_some(pred),
                    )
                    .map_err(|e| e.to_string())?;
                    quiverkit::registry::ScanItem {
                        pattern: spec.name.clone(),
                        report: Some(rep),
                        skipped: None,
                    }
                };
                items.push(item);
            }
            let mut hits = 0usize;
            for item in &items {
                let n = item.hit_count();
                hits += n;
                if common.format == OutputFormat::Structured {
                    println!(
                        "{}",
                        json!({
                            "pattern": item.pattern,
                            "hits": n,
                            "skipped": item.skipped,
                        })
                    );
                } else if let Some(reason) = &item.skipped {
                    println!("{}: skipped ({reason})", item.pattern);
                } else if n > 0 {
                    println!("{}: {} hit(s)", item.pattern, n);
                    if let Some(rep) = &item.report {
                        for e in rep.hits() {
                            let verts: Vec<&str> =
                                e.vertex_map.iter().map(|&v| q.vertex_name(v)).collect();
                            println!("  at vertices [{}]", verts.join(", "));
                        }
                    }
                } else {
                    println!("{}: clean", item.pattern);
                }
            }
            Ok(if hits > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Cartan { input, common } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let basis = basis_of(&doc, field)?;
            let c = cartan_matrix(&basis);
            if common.format == OutputFormat::Structured {
                println!(
                    "{}",
                    json!({
                        "vertices": c.vertex_names,
                        "entries": c.entries,
                        "symmetric": c.is_symmetric(),
                        "dimension": basis.dim(),
                    })
                );
            } else {
                println!("dimension {}", basis.dim());
                for (name, row) in c.vertex_names.iter().zip(&c.entries) {
                    let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
                    println!("  {name}: [{}]", cells.join(", "));
                }
                let sym = symmetry_diagnostics(&basis);
                println!("symmetric: {}", c.is_symmetric());
                println!(
                    "symmetry diagnostics (necessary conditions): {}",
                    if sym.passed() { "pass" } else { "fail" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Syzygy {
            input,
            common,
            simple,
            kmax,
        } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let basis = basis_of(&doc, field)?;
            let v = vertex_of(doc.quiver(), &simple)?;
            let chain = syzygy_chain(&basis, v, kmax).map_err(|e| e.to_string())?;
            for (k, m) in chain.modules.iter().enumerate() {
                println!("omega^{k}: dim {:?} (total {})", m.dims, m.total_dim());
            }
            if let Some(d) = chain.recurrence {
                println!("recurrence at {d}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Period {
            input,
            common,
            kmax,
            simple,
        } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let basis = basis_of(&doc, field)?;
            let q = doc.quiver();
            let vertices: Vec<usize> = match &simple {
                Some(s) => vec![vertex_of(q, s)?],
                None => (0..q.vertex_count()).collect(),
            };
            let mut inconclusive = false;
            let mut results = Vec::new();
            for v in vertices {
                match quiverkit::homology::period_of_simple(&basis, v, kmax) {
                    Ok(Some(d)) => results.push((q.vertex_name(v).to_string(), Some(d))),
                    Ok(None) => results.push((q.vertex_name(v).to_string(), None)),
                    Err(e) => {
                        eprintln!("{}: {e}", q.vertex_name(v));
                        inconclusive = true;
                    }
                }
            }
            if common.format == OutputFormat::Structured {
                println!(
                    "{}",
                    json!({
                        "kmax": kmax,
                        "periods": results.iter().map(|(n, d)| json!({
                            "vertex": n, "period": d,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                for (name, d) in &results {
                    match d {
                        Some(d) => println!("{name}: {d}"),
                        None => println!("{name}: no period within kmax {kmax}"),
                    }
                }
            }
            Ok(if inconclusive {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Diag4 {
            input,
            common,
            simple,
        } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let basis = basis_of(&doc, field)?;
            let v = vertex_of(doc.quiver(), &simple)?;
            let rep = period4_diagnostics(&basis, v).map_err(|e| e.to_string())?;
            println!("p+ = {:?}, p- = {:?}", rep.p_plus, rep.p_minus);
            match (&rep.p_hat, rep.margin) {
                (Some(h), Some(m)) => println!("p_hat = {h:?}, margin |p_hat| - |p| = {m}"),
                _ => println!("p_hat undefined (p+ != p-)"),
            }
            println!(
                "cover of first syzygy matches out-arrows: {}",
                rep.omega1_cover_matches
            );
            println!(
                "second-syzygy generators over in-arrow sources: {}",
                rep.omega2_top_matches
            );
            println!("(alpha alpha-bar) . M = 0: {}", rep.left_identity);
            match &rep.right_identity_choice {
                Some(choice) => println!(
                    "M . (gamma gamma*)^T = 0 with arrows ({})",
                    choice.join(", ")
                ),
                None => println!("M . (gamma gamma*)^T = 0: no valid arrow choice"),
            }
            for f in &rep.findings {
                println!("finding: {f}");
            }
            Ok(if rep.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Check {
            input,
            common,
            kmax,
            extra,
        } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let pres = doc.presentation();
            let opts = BatteryOptions {
                kmax,
                extra,
                has_relations: doc.has_relations(),
            };
            let results = run_battery(&pres, field, opts);
            let mut counts = (0usize, 0usize, 0usize);
            for c in &results {
                match c.verdict {
                    Verdict::Pass => counts.0 += 1,
                    Verdict::Fail => counts.1 += 1,
                    Verdict::Skipped => counts.2 += 1,
                }
                if common.format == OutputFormat::Structured {
                    println!("{}", serde_json::to_string(c).unwrap());
                } else {
                    let tag = match c.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "FAIL",
                        Verdict::Skipped => "skip",
                    };
                    println!("[{tag}] {}", c.check);
                    for w in &c.witnesses {
                        println!("       {w}");
                    }
                }
            }
            if common.format == OutputFormat::Text {
                println!("{} pass, {} fail, {} skipped", counts.0, counts.1, counts.2);
            }
            Ok(if counts.1 > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::MainTheorem { input, common } => {
            let doc = load_input(&input)?;
            let q = doc.quiver();
            let pres = doc.presentation();
            match main_theorem_report(q, Some(&pres)) {
                Ok(rep) => {
                    if common.format == OutputFormat::Structured {
                        println!(
                            "{}",
                            json!({
                                "verdict": if rep.passes() { "pass" } else { "fail" },
                                "assignments": rep.assignments.iter().map(|(v, b)| json!({
                                    "vertex": q.vertex_name(*v),
                                    "block": b.describe(q),
                                })).collect::<Vec<_>>(),
                                "violations": rep.violations.iter()
                                    .map(|&v| q.vertex_name(v)).collect::<Vec<_>>(),
                                "cross_references": rep.cross_references,
                            })
                        );
                    } else {
                        for (v, b) in &rep.assignments {
                            println!("{}: {}", q.vertex_name(*v), b.describe(q));
                        }
                        for &v in &rep.violations {
                            println!("{}: VIOLATION, no containing V1/V2 block", q.vertex_name(v));
                        }
                        for c in &rep.cross_references {
                            println!("related failure: {} ({})", c.check, c.witnesses.join("; "));
                        }
                        println!("verdict: {}", if rep.passes() { "pass" } else { "fail" });
                    }
                    Ok(if rep.passes() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
                Err(VerifyError::NonBiregular(offenders)) => {
                    if common.format == OutputFormat::Structured {
                        println!(
                            "{}",
                            json!({"verdict": "error", "non_biregular": offenders})
                        );
                    } else {
                        println!("not biregular: {}", offenders.join(", "));
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Gen { blocks } => {
            let spec = corpus::parse_glue_spec(&blocks)?;
            let res = corpus::glue_blocks(&spec).map_err(|e| e.to_string())?;
            let doc = InputDocument {
                source_name: "gen".into(),
                content: DocContent::Quiver(res.quiver.clone()),
            };
            print!("{}", print_document(&doc));
            if res.biregular {
                println!("# biregular");
            } else {
                println!("# not biregular: {}", res.offenders.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { name } => match name {
            Some(name) => {
                let entry = corpus::corpus_entry(&name)
                    .ok_or_else(|| format!("no corpus entry named `{name}`"))?;
                print!("{}", print_document(&document_of_entry(&entry)));
                Ok(ExitCode::SUCCESS)
            }
            None => {
                for e in corpus::named_corpus() {
                    let kind = match &e.entry {
                        corpus::CorpusEntry::Quiver(_) => "quiver",
                        corpus::CorpusEntry::Presentation(_) => "presentation",
                    };
                    println!("{} ({kind})", e.name);
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Idem {
            input,
            common,
            vertices,
        } => {
            let doc = load_input(&input)?;
            let field = parse_field(&common.field)?;
            let basis = basis_of(&doc, field)?;
            let q = doc.quiver();
            let mut set = BTreeSet::new();
            for name in vertices.split(',') {
                set.insert(vertex_of(q, name.trim())?);
            }
            let idem = idempotent_algebra(&basis, &set);
            println!("dimension {}", idem.dim);
            println!("gabriel quiver arrows:");
            for ((a, b), n) in &idem.gabriel_arrows {
                println!("  {} -> {}: {n}", q.vertex_name(*a), q.vertex_name(*b));
            }
            println!("basis:");
            for &i in &idem.basis {
                println!("  {}", basis.basis_paths[i].display(q));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Registry => {
            for (_, summary) in registry_list() {
                println!("{summary}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { input } => {
            let doc = load_input(&input)?;
            print!("{}", to_dot(doc.quiver()));
            Ok(ExitCode::SUCCESS)
        }
    }
}
