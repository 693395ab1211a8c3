//! dirseg: build, inspect, and colour-check segment families from the
//! command line. Exit codes: 0 for a definitive result, 1 for errors, 2 when
//! a search ran out of budget and the answer is unknown.

mod output;
mod svg;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dirseg::coloring::{adversary_palette_cap, AdversarySat};
use dirseg::geom::slope_set;
use dirseg::graph::{
    clique_number, intersection_graph, is_triangle_free, max_clique, slope_partition,
};
use dirseg::io::{
    graph_dimacs, graph_json, graph_text, parse_configuration, parse_graph_text,
    serialize_coloring, serialize_configuration,
};
use dirseg::{
    blowup, chromatic_number, color_odd, color_slope_disjoint, construct, mixed_blowup,
    pillar_adversary, probe_adversary, tfold_chromatic, verify_coloring, AdversaryOutcome,
    ChromaticOutcome, Coloring, Configuration, ConstructionParams, Decision, Graph, SearchBudget,
};
use output::{write_atomic, Emission};

#[derive(Parser)]
#[command(name = "dirseg", version, about = "Exact toolkit for segment families with few slopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the layered probe-carrying family for a fold count and slope budget
    Construct(ConstructArgs),
    /// Replace every segment by t identical copies
    Blowup(BlowupArgs),
    /// Blow up to multiplicity t with one side of the last slope class at t+1
    MixedBlowup(MixedBlowupArgs),
    /// Check configuration wellformedness, slope number, and triangle-freeness
    Verify(VerifyArgs),
    /// Export the intersection graph
    Graph(GraphArgs),
    /// Exact clique number with a witness
    Omega(OmegaArgs),
    /// Exact chromatic number, budget permitting
    Chi(ChiArgs),
    /// Decide t-fold a-colourability
    Tfold(TfoldArgs),
    /// Decide whether any proper t-fold colouring keeps every probe under s colours
    Adversary(AdversaryArgs),
    /// Colour a segment family within the slope-count guarantee
    ColorUpper(ColorUpperArgs),
    /// Draw a configuration
    ExportSvg(SvgArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Fold count the family is built to defeat
    #[arg(long)]
    t: u32,
    /// Number of stages, one new slope per stage
    #[arg(long)]
    d: u32,
    /// Copy-power order per stage; default 4t+1
    #[arg(long)]
    copies: Option<u32>,
    /// Insertion rounds per stage; default floor(log2(2t)) + 1
    #[arg(long)]
    iterations: Option<u32>,
    /// Refuse when the projected segment count exceeds this
    #[arg(long)]
    budget: Option<u64>,
    /// Placement margin in (0, 1), a rational like "1/16"
    #[arg(long)]
    margin: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BlowupArgs {
    #[arg(long)]
    t: u32,
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MixedBlowupArgs {
    /// Base multiplicity; 0 keeps only the boosted side
    #[arg(long)]
    t: u32,
    /// Slope budget the base family must fit in
    #[arg(long)]
    d: u32,
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Text,
    Json,
    Dimacs,
}

#[derive(Args)]
struct GraphArgs {
    /// Configuration JSON or adjacency text
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OmegaArgs {
    /// Configuration JSON or adjacency text
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChiArgs {
    /// Configuration JSON or adjacency text
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Search nodes before giving up; DIRSEG_BUDGET overrides the default
    #[arg(long)]
    budget: Option<u64>,
    /// Write the colouring certificate here
    #[arg(long, value_name = "FILE")]
    cert: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TfoldArgs {
    /// Configuration JSON or adjacency text
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Colours per vertex
    #[arg(long)]
    t: u32,
    /// Palette size
    #[arg(long)]
    a: u32,
    /// Search nodes before giving up; DIRSEG_BUDGET overrides the default
    #[arg(long)]
    budget: Option<u64>,
    /// Write the colouring certificate here on SAT
    #[arg(long, value_name = "FILE")]
    cert: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Configuration JSON
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Colours per vertex
    #[arg(long)]
    t: u32,
    /// Colour count every probe must stay under
    #[arg(long)]
    s: usize,
    /// Palette size; omitted, the decision runs at the closure palette,
    /// which settles every palette at once
    #[arg(long)]
    a: Option<u32>,
    /// Quantify over pillars: some probe has every pillar seeing >= s colours
    #[arg(long)]
    pillars: bool,
    /// Search nodes before giving up; DIRSEG_BUDGET overrides the default
    #[arg(long)]
    budget: Option<u64>,
    /// Write the evading colouring with its probe audit here on SAT
    #[arg(long, value_name = "FILE")]
    cert: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ColorUpperArgs {
    /// Configuration JSON
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Use the odd-clique layering instead of per-class disjoint palettes
    #[arg(long)]
    odd: bool,
    /// Write the colouring certificate here
    #[arg(long, value_name = "FILE")]
    cert: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SvgArgs {
    /// Configuration JSON
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Label probes with their indices
    #[arg(long)]
    labels: bool,
    /// Decimal digits for rendered coordinates
    #[arg(long, default_value_t = 3)]
    precision: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Construct(args) => cmd_construct(args),
        Cmd::Blowup(args) => cmd_blowup(args),
        Cmd::MixedBlowup(args) => cmd_mixed_blowup(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Graph(args) => cmd_graph(args),
        Cmd::Omega(args) => cmd_omega(args),
        Cmd::Chi(args) => cmd_chi(args),
        Cmd::Tfold(args) => cmd_tfold(args),
        Cmd::Adversary(args) => cmd_adversary(args),
        Cmd::ColorUpper(args) => cmd_color_upper(args),
        Cmd::ExportSvg(args) => cmd_export_svg(args),
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(path: &Path) -> Result<Configuration> {
    let text = read_input(path)?;
    parse_configuration(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Configuration JSON or adjacency text, told apart by the leading brace.
fn load_any(path: &Path) -> Result<(Graph, Option<Configuration>)> {
    let text = read_input(path)?;
    if text.trim_start().starts_with('{') {
        let config =
            parse_configuration(&text).with_context(|| format!("parsing {}", path.display()))?;
        let g = intersection_graph(&config.segments);
        Ok((g, Some(config)))
    } else {
        let g =
            parse_graph_text(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok((g, None))
    }
}

fn solver_budget(flag: Option<u64>) -> Result<SearchBudget> {
    let nodes = match flag {
        Some(n) => Some(n),
        None => match std::env::var("DIRSEG_BUDGET") {
            Ok(v) => Some(
                v.parse()
                    .with_context(|| format!("DIRSEG_BUDGET={v} is not a node count"))?,
            ),
            Err(_) => None,
        },
    };
    Ok(nodes.map(|nodes| SearchBudget { nodes }).unwrap_or_default())
}

fn segment_config(segments: Vec<dirseg::Segment>) -> Configuration {
    Configuration {
        segments,
        probes: Vec::new(),
    }
}

fn audit(g: &Graph, c: &Coloring) -> Result<()> {
    verify_coloring(g, c).map_err(|v| anyhow!("internal: certificate failed its audit: {v}"))
}

fn cmd_construct(args: ConstructArgs) -> Result<i32> {
    if args.t == 0 {
        bail!("--t must be at least 1");
    }
    let mut params = ConstructionParams::new(args.t, args.d);
    if let Some(c) = args.copies {
        if c == 0 {
            bail!("--copies must be at least 1");
        }
        params.copies = c;
    }
    if let Some(i) = args.iterations {
        params.iterations = i;
    }
    if let Some(b) = args.budget {
        params.budget = b;
    }
    if let Some(m) = &args.margin {
        let margin = dirseg::geom::parse_rational(m)
            .map_err(|e| anyhow!("--margin: {e}"))?;
        params.placement = dirseg::PlacementPolicy::new(margin);
    }
    let mut em = Emission::new("construct");
    em.param("t", params.t);
    em.param("d", params.d);
    em.param("copies", params.copies);
    em.param("iterations", params.iterations);
    em.param("budget", params.budget);
    em.param(
        "margin",
        dirseg::geom::format_rational(&params.placement.margin),
    );
    let config = construct(&params)?;
    em.stat("segments", config.segments.len() as u64);
    em.stat("probes", config.probes.len() as u64);
    em.stat(
        "slope_number",
        slope_set(&config.segments).len() as u64,
    );
    em.deliver(args.out.as_deref(), &serialize_configuration(&config))?;
    Ok(0)
}

fn cmd_blowup(args: BlowupArgs) -> Result<i32> {
    if args.t == 0 {
        bail!("--t must be at least 1");
    }
    let config = load_config(&args.input)?;
    let blown = segment_config(blowup(&config.segments, args.t));
    let mut em = Emission::new("blowup");
    em.param("t", args.t);
    em.input(&args.input);
    em.stat("segments", blown.segments.len() as u64);
    em.deliver(args.out.as_deref(), &serialize_configuration(&blown))?;
    Ok(0)
}

fn cmd_mixed_blowup(args: MixedBlowupArgs) -> Result<i32> {
    if args.d == 0 {
        bail!("--d must be at least 1");
    }
    let config = load_config(&args.input)?;
    let blown = segment_config(mixed_blowup(args.t, args.d, &config)?);
    let mut em = Emission::new("mixed-blowup");
    em.param("t", args.t);
    em.param("d", args.d);
    em.input(&args.input);
    em.stat("segments", blown.segments.len() as u64);
    em.deliver(args.out.as_deref(), &serialize_configuration(&blown))?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let config = load_config(&args.input)?;
    let violations = config.validate();
    let g = intersection_graph(&config.segments);
    let slope_number = slope_set(&config.segments).len();
    let triangle_free = is_triangle_free(&g);
    let mut payload = String::new();
    for v in &violations {
        let _ = writeln!(payload, "violation: {v}");
    }
    if violations.is_empty() {
        let _ = writeln!(
            payload,
            "OK, slope_number={slope_number}, triangle_free={triangle_free}"
        );
    } else {
        let _ = writeln!(
            payload,
            "INVALID ({} violations), slope_number={slope_number}, triangle_free={triangle_free}",
            violations.len()
        );
    }
    let mut em = Emission::new("verify");
    em.input(&args.input);
    em.stat("segments", config.segments.len() as u64);
    em.stat("probes", config.probes.len() as u64);
    em.stat("violations", violations.len() as u64);
    em.stat("slope_number", slope_number as u64);
    em.stat("triangle_free", triangle_free as u64);
    em.deliver(args.out.as_deref(), &payload)?;
    Ok(0)
}

fn cmd_graph(args: GraphArgs) -> Result<i32> {
    let (g, config) = load_any(&args.input)?;
    let payload = match args.format {
        GraphFormat::Text => graph_text(&g),
        GraphFormat::Dimacs => graph_dimacs(&g),
        GraphFormat::Json => {
            // Slope-class ids by ascending slope; a bare graph file carries
            // no geometry, so every vertex lands in class 0.
            let mut classes = vec![0usize; g.n()];
            if let Some(config) = &config {
                for (ci, (_, members)) in slope_partition(&config.segments).iter().enumerate() {
                    for &v in members {
                        classes[v] = ci;
                    }
                }
            }
            graph_json(&g, &classes)
        }
    };
    let mut em = Emission::new("graph");
    em.input(&args.input);
    em.param(
        "format",
        match args.format {
            GraphFormat::Text => "text",
            GraphFormat::Json => "json",
            GraphFormat::Dimacs => "dimacs",
        },
    );
    em.stat("vertices", g.n() as u64);
    em.stat("edges", g.edge_count() as u64);
    em.deliver(args.out.as_deref(), &payload)?;
    Ok(0)
}

fn cmd_omega(args: OmegaArgs) -> Result<i32> {
    let (g, _) = load_any(&args.input)?;
    let witness = max_clique(&g);
    let ids: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
    let payload = format!("omega = {}\nwitness = {}\n", witness.len(), ids.join(" "));
    let mut em = Emission::new("omega");
    em.input(&args.input);
    em.stat("vertices", g.n() as u64);
    em.stat("omega", witness.len() as u64);
    em.deliver(args.out.as_deref(), &payload)?;
    Ok(0)
}

fn cmd_chi(args: ChiArgs) -> Result<i32> {
    let (g, _) = load_any(&args.input)?;
    let budget = solver_budget(args.budget)?;
    let mut em = Emission::new("chi");
    em.input(&args.input);
    em.param("budget", budget.nodes);
    em.stat("vertices", g.n() as u64);
    match chromatic_number(&g, &budget) {
        ChromaticOutcome::Exact { chi, coloring } => {
            audit(&g, &coloring)?;
            if let Some(cert) = &args.cert {
                write_atomic(cert, serialize_coloring(&coloring).as_bytes())?;
                em.param("cert", cert.display());
            }
            em.stat("chi", chi as u64);
            em.deliver(args.out.as_deref(), &format!("chi = {chi}\n"))?;
            Ok(0)
        }
        ChromaticOutcome::Unknown { lower, upper, best } => {
            if let (Some(cert), Some(c)) = (&args.cert, &best) {
                audit(&g, c)?;
                write_atomic(cert, serialize_coloring(c).as_bytes())?;
                em.param("cert", cert.display());
            }
            em.stat("lower", lower as u64);
            em.stat("upper", upper as u64);
            em.deliver(
                args.out.as_deref(),
                &format!("unknown: {lower} <= chi <= {upper} (search budget exhausted)\n"),
            )?;
            Ok(2)
        }
    }
}

fn cmd_tfold(args: TfoldArgs) -> Result<i32> {
    if args.t == 0 {
        bail!("--t must be at least 1");
    }
    if args.a > 127 {
        bail!("--a must stay below 128, the engine's colour limit");
    }
    let (g, _) = load_any(&args.input)?;
    let budget = solver_budget(args.budget)?;
    let mut em = Emission::new("tfold");
    em.input(&args.input);
    em.param("t", args.t);
    em.param("a", args.a);
    em.param("budget", budget.nodes);
    em.stat("vertices", g.n() as u64);
    match tfold_chromatic(&g, args.t, args.a, &budget) {
        Decision::Sat(c) => {
            audit(&g, &c)?;
            if let Some(cert) = &args.cert {
                write_atomic(cert, serialize_coloring(&c).as_bytes())?;
                em.param("cert", cert.display());
            }
            em.deliver(args.out.as_deref(), "SAT\n")?;
            Ok(0)
        }
        Decision::Unsat => {
            em.deliver(args.out.as_deref(), "UNSAT\n")?;
            Ok(0)
        }
        Decision::Unknown => {
            em.deliver(args.out.as_deref(), "unknown (search budget exhausted)\n")?;
            Ok(2)
        }
    }
}

fn u32_row(xs: &[u32]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn list_block(rows: &[String]) -> String {
    if rows.is_empty() {
        return "[]".to_string();
    }
    format!("[\n    {}\n  ]", rows.join(",\n    "))
}

/// The colouring certificate with the per-probe (and per-pillar) colour
/// traffic appended, so the evasion can be audited without re-solving.
fn adversary_certificate(sat: &AdversarySat) -> String {
    let base = serialize_coloring(&sat.coloring);
    let body = base
        .strip_suffix("\n}\n")
        .expect("certificate envelope always closes with a brace line");
    let probe_rows: Vec<String> = sat.probe_colors.iter().map(|c| u32_row(c)).collect();
    let pillar_rows: Vec<String> = sat
        .pillar_colors
        .iter()
        .map(|probe| {
            let inner: Vec<String> = probe.iter().map(|c| u32_row(c)).collect();
            format!("[{}]", inner.join(", "))
        })
        .collect();
    format!(
        "{body},\n  \"probe_colors\": {},\n  \"pillar_colors\": {}\n}}\n",
        list_block(&probe_rows),
        list_block(&pillar_rows)
    )
}

fn adversary_audit_lines(sat: &AdversarySat, pillars: bool) -> String {
    let mut out = String::new();
    for (i, colors) in sat.probe_colors.iter().enumerate() {
        let ids: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "probe {i} sees {} colours: {}",
            colors.len(),
            ids.join(" ")
        );
        if pillars {
            for (j, pc) in sat.pillar_colors[i].iter().enumerate() {
                let ids: Vec<String> = pc.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "  pillar {j} sees {}: {}", pc.len(), ids.join(" "));
            }
        }
    }
    out
}

fn cmd_adversary(args: AdversaryArgs) -> Result<i32> {
    if args.t == 0 {
        bail!("--t must be at least 1");
    }
    if args.s == 0 {
        bail!("--s must be at least 1");
    }
    if let Some(a) = args.a {
        if a < args.t {
            bail!("--a must be at least --t, one set of colours per vertex");
        }
        if a > 127 {
            bail!("--a must stay below 128, the engine's colour limit");
        }
    }
    let config = load_config(&args.input)?;
    let g = intersection_graph(&config.segments);
    let budget = solver_budget(args.budget)?;
    let mut em = Emission::new("adversary");
    em.input(&args.input);
    em.param("t", args.t);
    em.param("s", args.s);
    em.param("pillars", args.pillars);
    em.param("budget", budget.nodes);

    let run = |a: u32| {
        if args.pillars {
            pillar_adversary(&config, args.t, args.s, a, &budget)
        } else {
            probe_adversary(&config, args.t, args.s, a, &budget)
        }
    };
    let forcing = if args.pillars {
        format!(
            "every proper {}-fold colouring gives some probe a full set of pillars carrying at least {} colours each",
            args.t, args.s
        )
    } else {
        format!(
            "every proper {}-fold colouring puts at least {} colours through some probe",
            args.t, args.s
        )
    };

    // SAT is monotone in the palette, and beyond the closure palette any
    // evading colouring can be folded back down; one decision there settles
    // all palettes.
    let (a, closure) = match args.a {
        Some(a) => {
            em.param("a", a);
            (a, false)
        }
        None => {
            let cap = adversary_palette_cap(&config, args.t, args.s).max(args.t as u64);
            em.param("closure_palette", cap);
            if cap > 127 {
                em.deliver(
                    args.out.as_deref(),
                    &format!(
                        "unknown: closure palette {cap} exceeds the engine's colour limit of 127\n"
                    ),
                )?;
                return Ok(2);
            }
            (cap as u32, true)
        }
    };

    match run(a) {
        AdversaryOutcome::Sat(sat) => {
            audit(&g, &sat.coloring)?;
            if let Some(cert) = &args.cert {
                write_atomic(cert, adversary_certificate(&sat).as_bytes())?;
                em.param("cert", cert.display());
            }
            let mut payload = format!("SAT at palette {a}\n");
            payload.push_str(&adversary_audit_lines(&sat, args.pillars));
            em.deliver(args.out.as_deref(), &payload)?;
            Ok(0)
        }
        AdversaryOutcome::Unsat => {
            let payload = if closure {
                format!("UNSAT: {forcing} (settled at closure palette {a})\n")
            } else {
                format!("UNSAT at palette {a}: {forcing}\n")
            };
            em.deliver(args.out.as_deref(), &payload)?;
            Ok(0)
        }
        AdversaryOutcome::Unknown => {
            em.deliver(
                args.out.as_deref(),
                &format!("unknown at palette {a} (search budget exhausted)\n"),
            )?;
            Ok(2)
        }
    }
}

fn cmd_color_upper(args: ColorUpperArgs) -> Result<i32> {
    let config = load_config(&args.input)?;
    let g = intersection_graph(&config.segments);
    let omega = clique_number(&g);
    let d = slope_partition(&config.segments).len();
    let (c, bound) = if args.odd {
        let c = color_odd(&g, &config.segments, d)?;
        (c, d * omega.saturating_sub(1) + 1)
    } else {
        (color_slope_disjoint(&config.segments), d * omega)
    };
    audit(&g, &c)?;
    if let Some(cert) = &args.cert {
        write_atomic(cert, serialize_coloring(&c).as_bytes())?;
    }
    let payload = format!(
        "colors = {}\nbound = {bound} (d = {d}, omega = {omega})\nverified: proper\n",
        c.colors_used()
    );
    let mut em = Emission::new("color-upper");
    em.input(&args.input);
    em.param("odd", args.odd);
    if let Some(cert) = &args.cert {
        em.param("cert", cert.display());
    }
    em.stat("vertices", g.n() as u64);
    em.stat("colors", c.colors_used() as u64);
    em.stat("bound", bound as u64);
    em.stat("omega", omega as u64);
    em.stat("slope_number", d as u64);
    em.deliver(args.out.as_deref(), &payload)?;
    Ok(0)
}

fn cmd_export_svg(args: SvgArgs) -> Result<i32> {
    let config = load_config(&args.input)?;
    let payload = svg::render(
        &config,
        &svg::SvgOptions {
            labels: args.labels,
            precision: args.precision,
        },
    );
    let mut em = Emission::new("export-svg");
    em.input(&args.input);
    em.param("labels", args.labels);
    em.param("precision", args.precision);
    em.stat("segments", config.segments.len() as u64);
    em.stat("probes", config.probes.len() as u64);
    em.deliver(args.out.as_deref(), &payload)?;
    Ok(0)
}
