use clap::{Parser, Subcommand, ValueEnum};
use regmol::flow::{flow_graph, DiGraph};
use regmol::io::{self, RawPosetFile};
use regmol::ogposet::{Element, Orientation};
use regmol::rewrite::{self, strings};
use regmol::submolecule::{self, DecisionMode};
use regmol::{
    acyclicity_profile, enumerate_layerings, generate, match_subdiagram, matching,
};
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

/// Higher-dimensional diagram rewriting over regular molecules.
///
/// Molecules are referenced as `examples:NAME`, a built-in name
/// (`point`, `arrow`, `binary`, `cobinary`, `whisker`, `round_example`,
/// `globe(n)`, ...), `FILE#DEF` for constructor-expression files, or a
/// raw-poset JSON file.  Diagrams are `word:LETTERS` or `FILE#DEF`.
#[derive(Parser)]
#[command(name = "regmol", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "-")]
    Input,
    #[value(name = "+")]
    Output,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKind {
    Chains,
    Dim3,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical face data of a molecule.
    Canon { molecule: String },
    /// Decide isomorphism; prints the unique isomorphism or "none".
    Iso { left: String, right: String },
    /// Print a boundary of a molecule.
    Boundary {
        molecule: String,
        /// Boundary dimension; defaults to dim - 1.
        #[arg(long)]
        n: Option<isize>,
        #[arg(long, default_value = "both")]
        side: SideArg,
    },
    /// Print a flow graph, the maximal flow graph, or the Hasse diagram.
    Flow {
        molecule: String,
        #[arg(long, conflicts_with = "hasse")]
        k: Option<isize>,
        /// Restrict vertices to maximal elements.
        #[arg(long)]
        maximal: bool,
        /// Print the Hasse diagram instead of a flow graph.
        #[arg(long)]
        hasse: bool,
        /// Orient Hasse edges by input/output (only with --hasse).
        #[arg(long)]
        oriented: bool,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Enumerate k-layerings; prints each layering as constructor
    /// expressions for its layers.
    Layerings {
        molecule: String,
        #[arg(long)]
        k: isize,
        /// Print only the number of layerings.
        #[arg(long)]
        count: bool,
    },
    /// Match a labelled subdiagram; exit 1 when there are no matches.
    Match {
        target: String,
        pattern: String,
        #[arg(long)]
        json: bool,
        /// Force the general decision procedure and print certificates.
        #[arg(long)]
        cert: bool,
    },
    /// Decide whether a closed image is a rewritable submolecule.
    Submolecule {
        molecule: String,
        /// Top cells whose closure is the candidate image, e.g. "(2,0),(2,1)".
        #[arg(long)]
        image: String,
        #[arg(long, default_value = "auto")]
        mode: ModeArg,
        /// Write the certificate (general mode) to this file.
        #[arg(long)]
        cert: Option<String>,
    },
    /// Apply up to N rewrite steps.
    Rewrite {
        target: String,
        rules: String,
        #[arg(long)]
        steps: usize,
        /// Write the recorded trace to this file.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Rewrite to normal form within a step budget.
    Normalize {
        target: String,
        rules: String,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        trace: Option<String>,
    },
    /// Show a built-in example.
    Examples {
        name: Option<String>,
        /// Print the face data table.
        #[arg(long)]
        face_data: bool,
    },
    /// Deterministic benchmark CSV over generated molecules.
    Bench {
        #[arg(long, default_value = "chains")]
        kind: BenchKind,
        /// Sizes to run, e.g. --sizes 10,50,100.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Add wall-clock columns (breaks run-to-run CSV equality).
        #[arg(long)]
        wall_time: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn side_of(arg: SideArg) -> Option<Orientation> {
    match arg {
        SideArg::Input => Some(Orientation::Input),
        SideArg::Output => Some(Orientation::Output),
        SideArg::Both => None,
    }
}

fn print_graph(graph: &DiGraph<Element>, name: &str, dot: bool) {
    if dot {
        print!("{}", graph.to_dot(name));
        return;
    }
    println!(
        "{name}: {} vertices, {} edges",
        graph.vertex_count(),
        graph.edge_count()
    );
    for v in graph.vertices() {
        println!("  {v}");
    }
    for (a, b) in graph.edges() {
        println!("  {a} -> {b}");
    }
}

fn parse_elements(spec: &str) -> regmol::Result<Vec<Element>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut token = String::new();
    for c in spec.chars() {
        match c {
            '(' => {
                depth += 1;
                token.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                token.push(c);
            }
            ',' if depth == 0 => {
                if !token.trim().is_empty() {
                    out.push(parse_one_element(token.trim())?);
                }
                token.clear();
            }
            _ => token.push(c),
        }
    }
    if !token.trim().is_empty() {
        out.push(parse_one_element(token.trim())?);
    }
    Ok(out)
}

fn parse_one_element(text: &str) -> regmol::Result<Element> {
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(regmol::Error::Input(format!("bad element: {text}")));
    }
    match (parts[0].parse(), parts[1].parse()) {
        (Ok(d), Ok(i)) => Ok(Element::new(d, i)),
        _ => Err(regmol::Error::Input(format!("bad element: {text}"))),
    }
}

fn run(cli: Cli) -> regmol::Result<ExitCode> {
    match cli.command {
        Command::Canon { molecule } => {
            let m = io::resolve_molecule(&molecule)?;
            let json = serde_json::to_string_pretty(&RawPosetFile::of(m.poset()))
                .expect("serializable");
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso { left, right } => {
            let a = io::resolve_molecule(&left)?;
            let b = io::resolve_molecule(&right)?;
            match a.find_isomorphism(&b) {
                Some(map) => {
                    for (d, level) in map.mapping().iter().enumerate() {
                        for (i, img) in level.iter().enumerate() {
                            println!("({d}, {i}) -> {img}");
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("none");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Boundary { molecule, n, side } => {
            let m = io::resolve_molecule(&molecule)?;
            let subset = match side_of(side) {
                Some(o) => m.boundary_subset(n, o),
                None => m.total_subset().boundary_both(n),
            };
            let elements: Vec<String> = subset.elements().map(|e| e.to_string()).collect();
            println!("{{{}}}", elements.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow {
            molecule,
            k,
            maximal,
            hasse,
            oriented,
            dot,
        } => {
            let m = io::resolve_molecule(&molecule)?;
            if hasse {
                let g = m.poset().hasse(oriented);
                let name = if oriented { "oriented-hasse" } else { "hasse" };
                print_graph(&g, name, dot);
            } else {
                let k = k.unwrap_or(m.dim() - 1);
                let g = flow_graph(&m.total_subset(), k, maximal);
                let name = if maximal {
                    format!("maximal-flow-{k}")
                } else {
                    format!("flow-{k}")
                };
                print_graph(&g, &name, dot);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Layerings { molecule, k, count } => {
            let m = io::resolve_molecule(&molecule)?;
            let layerings = enumerate_layerings(&m, k)?;
            if count {
                println!("{}", layerings.len());
            } else {
                for (i, layering) in layerings.iter().enumerate() {
                    println!("layering {}:", i + 1);
                    for (j, (layer, _)) in layering.layers.iter().enumerate() {
                        let expr = io::expression_of(layer)?;
                        let text = serde_json::to_string(&expr).expect("serializable");
                        println!("  layer {}: {text}", j + 1);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Match {
            target,
            pattern,
            json,
            cert,
        } => {
            let t = io::resolve_diagram(&target)?;
            let s = io::resolve_diagram(&pattern)?;
            let found = if cert {
                matching::match_subdiagram_certified(&t, &s)?
            } else {
                match_subdiagram(&t, &s)?
            };
            if json {
                let rows: Vec<serde_json::Value> = found
                    .iter()
                    .map(|m| {
                        let image: Vec<String> = m
                            .matched
                            .inclusion
                            .image()
                            .elements()
                            .map(io::element_key)
                            .collect();
                        serde_json::json!({
                            "anchor": io::element_key(m.matched.anchor),
                            "image": image,
                            "certificate": m.certificate,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
            } else {
                for m in &found {
                    let image: Vec<String> = m
                        .matched
                        .inclusion
                        .image()
                        .elements()
                        .map(|e| e.to_string())
                        .collect();
                    let witness = match &m.certificate {
                        Some(c) => format!("certificate with {} slices", c.children.len()),
                        None => "fast-path verdict (dim <= 3)".to_string(),
                    };
                    println!(
                        "anchor {}: image {{{}}} [{witness}]",
                        m.matched.anchor,
                        image.join(", ")
                    );
                }
            }
            if found.is_empty() {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Submolecule {
            molecule,
            image,
            mode,
            cert,
        } => {
            let m = io::resolve_molecule(&molecule)?;
            let seeds = parse_elements(&image)?;
            let subset = m.subset(&seeds)?;
            let (_, inclusion) = m.materialize(&subset)?;
            let mode = match mode {
                ModeArg::Auto => DecisionMode::Auto,
                ModeArg::General => DecisionMode::General,
            };
            let (ok, certificate) = submolecule::is_rewritable_submolecule(&m, &inclusion, mode)?;
            println!("{}", if ok { "submolecule" } else { "not a submolecule" });
            if let Some(path) = cert {
                match certificate {
                    Some(c) => {
                        let json = serde_json::to_string_pretty(&c).expect("serializable");
                        std::fs::write(&path, json)
                            .map_err(|e| regmol::Error::Input(format!("{path}: {e}")))?;
                    }
                    None => eprintln!("no certificate (fast path or negative verdict)"),
                }
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Rewrite {
            target,
            rules,
            steps,
            trace,
        } => run_rewrite(&target, &rules, steps, trace.as_deref()),
        Command::Normalize {
            target,
            rules,
            max,
            trace,
        } => run_rewrite(&target, &rules, max, trace.as_deref()),
        Command::Examples { name, face_data } => {
            match name {
                None => {
                    for n in regmol::fixtures::names() {
                        println!("{n}");
                    }
                }
                Some(name) => {
                    let m = regmol::fixtures::named(&name)
                        .ok_or_else(|| regmol::Error::Input(format!("unknown example: {name}")))?;
                    println!("{name}: dimension {}, {} elements", m.dim(), m.size());
                    let profile = acyclicity_profile(&m.total_subset());
                    println!(
                        "round: {}, pure: {}, lydim: {}, frdim: {}, hasse-acyclic: {}, dimension-wise acyclic: {}",
                        m.is_round(),
                        m.is_pure(),
                        m.lydim(),
                        m.frdim(),
                        profile.hasse_acyclic,
                        profile.dimensionwise_acyclic,
                    );
                    if face_data {
                        println!("face_data:");
                        for (d, grade) in m.poset().face_data().iter().enumerate() {
                            for (i, pair) in grade.iter().enumerate() {
                                println!(
                                    "  ({d}, {i}): ({:?}, {:?})",
                                    pair.input, pair.output
                                );
                            }
                        }
                        println!("coface_data:");
                        for (d, grade) in m.poset().coface_data().iter().enumerate() {
                            for (i, pair) in grade.iter().enumerate() {
                                println!(
                                    "  ({d}, {i}): ({:?}, {:?})",
                                    pair.input, pair.output
                                );
                            }
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            kind,
            sizes,
            seed,
            wall_time,
        } => run_bench(kind, sizes, seed, wall_time),
    }
}

fn run_rewrite(
    target: &str,
    rules: &str,
    budget: usize,
    trace_path: Option<&str>,
) -> regmol::Result<ExitCode> {
    let t = io::resolve_diagram(target)?;
    let system = io::resolve_rules(rules)?;
    let trace = rewrite::normalize(&t, &system, budget, trace_path.is_some())?;
    for (i, step) in trace.steps.iter().enumerate() {
        println!(
            "step {}: rule {} at anchor {}",
            i + 1,
            step.rule_name,
            step.anchor
        );
    }
    println!(
        "{} after {} step(s)",
        if trace.reached_normal_form {
            "normal form"
        } else {
            "budget exhausted"
        },
        trace.steps.len()
    );
    if trace.final_diagram().dim() == 1 {
        println!(
            "result word: {}",
            strings::word_of_diagram(trace.final_diagram())?
        );
    }
    if let Some(path) = trace_path {
        let steps: Vec<serde_json::Value> = trace
            .steps
            .iter()
            .map(|s| {
                serde_json::json!({
                    "rule": s.rule_name,
                    "rule_index": s.rule_index,
                    "anchor": io::element_key(s.anchor),
                })
            })
            .collect();
        let composite = trace
            .composite
            .as_ref()
            .map(io::diagram_expr_of)
            .transpose()?;
        let payload = serde_json::json!({
            "initial": io::diagram_expr_of(&trace.initial)?,
            "steps": steps,
            "final": io::diagram_expr_of(trace.final_diagram())?,
            "composite": composite,
            "reached_normal_form": trace.reached_normal_form,
        });
        let json = serde_json::to_string_pretty(&payload).expect("serializable");
        std::fs::write(path, json).map_err(|e| regmol::Error::Input(format!("{path}: {e}")))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bench(
    kind: BenchKind,
    sizes: Vec<usize>,
    seed: Option<u64>,
    wall_time: bool,
) -> regmol::Result<ExitCode> {
    let seed = seed.unwrap_or_else(|| {
        std::env::var(generate::SEED_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(7)
    });
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match kind {
        BenchKind::Chains => {
            let sizes = if sizes.is_empty() {
                vec![10, 50, 100, 500]
            } else {
                sizes
            };
            let mut header =
                "kind,size,elements,traversal_iterations,iteration_bound".to_string();
            if wall_time {
                header.push_str(",traversal_us");
            }
            writeln!(out, "{header}").ok();
            for m in sizes {
                let chain = generate::arrow_chain(m);
                let start = Instant::now();
                let outcome = regmol::molecule::traverse(chain.poset())?;
                let micros = start.elapsed().as_micros();
                let mut row = format!(
                    "chains,{m},{},{},{}",
                    chain.size(),
                    outcome.iterations,
                    5 * chain.size()
                );
                if wall_time {
                    row.push_str(&format!(",{micros}"));
                }
                writeln!(out, "{row}").ok();
            }
        }
        BenchKind::Dim3 => {
            let sizes = if sizes.is_empty() {
                vec![10, 50, 100, 250, 500]
            } else {
                sizes
            };
            let _ = seed;
            let mut header = "kind,size,elements,e3_edges,decision_verdict".to_string();
            if wall_time {
                header.push_str(",decision_us");
            }
            writeln!(out, "{header}").ok();
            for m in sizes {
                let chain = generate::globe3_chain(m);
                // the middle third of the stack is a round submolecule
                let from = m / 3;
                let to = (2 * m) / 3;
                let seeds: Vec<Element> =
                    (from..=to).map(|i| Element::new(3, i)).collect();
                let subset = chain.subset(&seeds)?;
                let (_, inclusion) = chain.materialize(&subset)?;
                let start = Instant::now();
                let verdict = submolecule::is_dim3_fast(&chain, &inclusion)?;
                let micros = start.elapsed().as_micros();
                let mut row = format!(
                    "dim3,{m},{},{},{}",
                    chain.size(),
                    generate::e3_edges(chain.poset()),
                    verdict
                );
                if wall_time {
                    row.push_str(&format!(",{micros}"));
                }
                writeln!(out, "{row}").ok();
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
