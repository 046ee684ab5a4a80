//! `fluxgeom` command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fluxgeom::atf::diagram_for;
use fluxgeom::geometry::{Hull, Segment, VecQ};
use fluxgeom::markov::{check_uniqueness, enumerate_tree};
use fluxgeom::moduli::{canonicalize, equivalent, global_moduli, moduli_space, xi2, FibreDescriptor};
use fluxgeom::monodromy::{area_to_string, cp2_generators, gk_generators, lattice_test, orbit_explore, Grid};
use fluxgeom::potential::{dual_edge, edge_profile, newton_polytope, period_sequence, potential_for};
use fluxgeom::rational::{fmt_rational, parse_rational, parse_rational_list, Rational};
use fluxgeom::shapes::{
    chekanov_shape, cn_shape, cn_star_shape, gcf_star_shape, psi_eval, shapes_svg, star_shape_bound, ConeFunction,
    ShapeSet,
};
use fluxgeom::MarkovTriple;
use num_bigint::BigInt;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] fluxgeom::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Image(#[from] image::ImageError),
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "fluxgeom", version, about = "Exact tools for almost toric fibrations of the projective plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markov triples: the mutation tree and the uniqueness check.
    #[command(subcommand)]
    Markov(MarkovCmd),
    /// Build the ATF diagram of a Markov triple.
    Atf(AtfArgs),
    /// Landau-Ginzburg potential of the monotone fibre.
    Potential(PotentialArgs),
    /// Evaluate the Ψ cone function.
    Psi(PsiArgs),
    /// Shapes and star-shapes of Lagrangian tori.
    Shape(ShapeArgs),
    /// Grid coverage of a monodromy orbit.
    Orbit(OrbitArgs),
    /// Hyperbolic area test for the group G_k.
    LatticeTest(LatticeArgs),
    /// Canonical form and Ξ₂ of a fibre, or compare two fibres.
    Classify(ClassifyArgs),
    /// Decide whether two fibres are equivalent.
    Equivalent(PairArgs),
    /// Labelled-triangle presentation of a moduli space of fibres.
    Moduli(ModuliArgs),
}

#[derive(Subcommand)]
enum MarkovCmd {
    /// All triples with largest entry at most --max-c, with tree edges.
    Tree {
        #[arg(long)]
        max_c: BigInt,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Does every Markov number up to --bound head a single triple?
    Uniqueness {
        #[arg(long)]
        bound: BigInt,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AtfArgs {
    #[arg(long)]
    triple: String,
    /// Node position along each cut, as a fraction of the way to the monotone point.
    #[arg(long, default_value = "1/4", value_parser = rational)]
    slide: Rational,
    #[arg(long)]
    normal_form: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long)]
    triple: String,
    #[arg(long)]
    show_newton: bool,
    #[arg(long)]
    edge_profiles: bool,
    /// Print constant terms of Wᵏ for k up to this value.
    #[arg(long, value_name = "K")]
    periods: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long, default_value = "1,1,1")]
    triple: String,
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    point: VecQ,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Cn,
    Chekanov,
    Gcf,
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// Area vector of the torus (cn), or its single radius (chekanov).
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    r: Option<VecQ>,
    /// Flux to test for membership.
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    f: Option<VecQ>,
    #[arg(long)]
    star: bool,
    /// Dimension for the chekanov space; defaults to the length of --f or 2.
    #[arg(long)]
    dim: Option<usize>,
    /// Triple whose monotone fibre is used (gcf).
    #[arg(long, default_value = "1,1,1")]
    triple: String,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// SVG window x0,y0,x1,y1.
    #[arg(long, value_parser = vector, allow_hyphen_values = true, default_value = "-3,-3,3,3")]
    window: VecQ,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupName {
    Cp2,
    Gk,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, value_enum, default_value = "cp2")]
    group: GroupName,
    /// Parameter k of G_k when --group gk.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, default_value_t = 3)]
    max_word: usize,
    #[arg(long, value_parser = vector, allow_hyphen_values = true, default_value = "-3,-3,3,3")]
    window: VecQ,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1/4")]
    step: Rational,
    /// Seed polygon vertices x0,y0,x1,y1,...; defaults to the standard
    /// triangle centred at its monotone point.
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    seed: Option<VecQ>,
    #[arg(long, value_name = "PATH")]
    png: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Fibre in short syntax (toric:x,y, monotone:a,b,c, beta:a,b,c:m:t, gamma:a,b,c:m:t) or JSON.
    #[arg(long, conflicts_with_all = ["f1", "f2"], required_unless_present_all = ["f1", "f2"])]
    fibre: Option<String>,
    #[arg(long, requires = "f2")]
    f1: Option<String>,
    #[arg(long, requires = "f1")]
    f2: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    f1: String,
    #[arg(long)]
    f2: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ModuliArgs {
    #[arg(long, conflicts_with = "global", required_unless_present = "global")]
    triple: Option<String>,
    /// Wedge of the spaces of all triples up to --max-c.
    #[arg(long, requires = "max_c")]
    global: bool,
    #[arg(long)]
    max_c: Option<BigInt>,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn vector(s: &str) -> Result<VecQ, String> {
    parse_rational_list(s).map(VecQ::new).map_err(|e| e.to_string())
}

fn triple(s: &str) -> CliResult<MarkovTriple> {
    Ok(s.parse()?)
}

fn fibre(s: &str) -> CliResult<FibreDescriptor> {
    Ok(s.parse()?)
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialise")
}

fn run_markov(cmd: MarkovCmd) -> CliResult<String> {
    match cmd {
        MarkovCmd::Tree { max_c, dot, json } => {
            let tree = enumerate_tree(&max_c)?;
            if dot {
                return Ok(tree.to_dot());
            }
            if json {
                let v = serde_json::to_value(&tree).expect("tree serialises");
                return Ok(pretty(&v) + "\n");
            }
            let mut out = format!("{} triples, depth {}\n", tree.nodes.len(), tree.max_depth());
            for e in &tree.edges {
                writeln!(out, "{} -> {}", tree.nodes[e.parent], tree.nodes[e.child]).unwrap();
            }
            Ok(out)
        }
        MarkovCmd::Uniqueness { bound, json } => {
            let rep = check_uniqueness(&bound)?;
            if json {
                return Ok(pretty(&serde_json::to_value(&rep).expect("report serialises")) + "\n");
            }
            if rep.is_unique() {
                Ok(format!("unique: {} Markov numbers up to {bound}\n", rep.by_max.len()))
            } else {
                let list: Vec<String> = rep.collisions.iter().map(ToString::to_string).collect();
                Ok(format!("not unique: {}\n", list.join(", ")))
            }
        }
    }
}

fn run_atf(a: AtfArgs) -> CliResult<String> {
    let mut d = diagram_for(&triple(&a.triple)?, a.slide)?;
    if a.normal_form {
        d = d.normal_form();
    }
    if let Some(path) = &a.svg {
        write_file(path, d.to_svg().as_bytes())?;
    }
    if a.json {
        return Ok(pretty(&d.to_json()) + "\n");
    }
    let lens: Vec<String> = d.side_lengths().iter().map(fmt_rational).collect();
    Ok(format!(
        "{d}\nside lengths: {}\nmonotone point: {}\nheight: {}\n",
        lens.join(", "),
        d.barycentre(),
        fmt_rational(&d.monotone_height())
    ))
}

fn run_potential(a: PotentialArgs) -> CliResult<String> {
    let t = triple(&a.triple)?;
    let (d, w) = potential_for(&t, fluxgeom::rational::q(1, 4))?;
    let newton = || -> CliResult<Vec<String>> {
        Ok(match newton_polytope(&w)? {
            Hull::Polygon(p) => p.vertices().iter().map(ToString::to_string).collect(),
            Hull::Segment(p, q) => vec![p.to_string(), q.to_string()],
            Hull::Point(p) => vec![p.to_string()],
        })
    };
    let profiles = || -> CliResult<Vec<(BigInt, Segment, Vec<BigInt>)>> {
        (0..3).map(|v| Ok((d.labels()[v].clone(), dual_edge(&d, v), edge_profile(&w, &dual_edge(&d, v))?))).collect()
    };
    let periods = a.periods.map(|k| period_sequence(&w, k));
    if a.json {
        let mut v = json!({ "triple": t, "potential": w.to_string(), "terms": w.terms().len() });
        if a.show_newton {
            v["newton"] = json!(newton()?);
        }
        if a.edge_profiles {
            let ps: Vec<_> = profiles()?
                .into_iter()
                .map(|(l, _, p)| json!({ "label": l.to_string(), "profile": p.iter().map(ToString::to_string).collect::<Vec<_>>() }))
                .collect();
            v["edge_profiles"] = json!(ps);
        }
        if let Some(ps) = &periods {
            v["periods"] = json!(ps.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        return Ok(pretty(&v) + "\n");
    }
    let mut out = format!("W = {w}\n");
    if a.show_newton {
        writeln!(out, "Newton polytope: {}", newton()?.join(" ")).unwrap();
    }
    if a.edge_profiles {
        for (label, seg, p) in profiles()? {
            let row: Vec<String> = p.iter().map(ToString::to_string).collect();
            let sum: BigInt = p.iter().sum();
            writeln!(out, "edge {} -> {} (label {label}): {}  sum {sum}", seg.start, seg.end, row.join(" ")).unwrap();
        }
    }
    if let Some(ps) = periods {
        let row: Vec<String> = ps.iter().map(ToString::to_string).collect();
        writeln!(out, "periods: {}", row.join(" ")).unwrap();
    }
    Ok(out)
}

fn run_psi(a: PsiArgs) -> CliResult<String> {
    let t = triple(&a.triple)?;
    let f = if t.is_root() {
        ConeFunction::cp2()
    } else {
        ConeFunction::from_diagram(&diagram_for(&t, fluxgeom::rational::q(1, 4))?)
    };
    let v = psi_eval(&f, &a.point)?;
    let facets: Vec<usize> = f.minimal_facets(&a.point);
    if a.json {
        return Ok(pretty(&json!({
            "triple": t,
            "polytope": f.polytope().vertices(),
            "point": a.point,
            "psi": fmt_rational(&v),
            "minimal_facets": facets,
        })) + "\n");
    }
    Ok(format!("Psi{} = {}  (minimal facets {:?}, polytope {})\n", a.point, fmt_rational(&v), facets, f.polytope()))
}

fn describe(s: &ShapeSet) -> String {
    match s {
        ShapeSet::RayComplement { base, direction } => format!("complement of the ray {base} + t{direction}, t >= 0"),
        ShapeSet::HalfSpaceIntersection(hs) => {
            hs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" and ")
        }
        ShapeSet::PolytopeInterior(p) => format!("interior of {p}"),
    }
}

fn run_shape(a: ShapeArgs) -> CliResult<String> {
    let need_r = || a.r.clone().ok_or_else(|| CliError::Usage("--r is required for this space".into()));
    let shape = match a.space {
        Space::Cn => {
            let r = need_r()?;
            if a.star {
                cn_star_shape(&r)?
            } else {
                cn_shape(&r)?
            }
        }
        Space::Chekanov => {
            let r = need_r()?;
            if r.dim() != 1 {
                return Err(CliError::Usage("--r takes a single radius for the chekanov space".into()));
            }
            let dim = a.dim.or(a.f.as_ref().map(VecQ::dim)).unwrap_or(2);
            chekanov_shape(&r.coords()[0], dim, a.star)?
        }
        Space::Gcf => {
            let f = ConeFunction::from_diagram(&diagram_for(&triple(&a.triple)?, fluxgeom::rational::q(1, 4))?);
            if a.star {
                gcf_star_shape(&f)
            } else {
                // the bound from the closest facets at the monotone point
                star_shape_bound(&f, f.apex())?
            }
        }
    };
    if let Some(path) = &a.svg {
        if shape.dim() != 2 {
            return Err(CliError::Usage("--svg needs a two-dimensional shape".into()));
        }
        let w = a.window.coords();
        if w.len() != 4 {
            return Err(CliError::Usage("--window takes x0,y0,x1,y1".into()));
        }
        let svg = shapes_svg(&[(shape.clone(), "#2c6fbb")], [&w[0], &w[1], &w[2], &w[3]])?;
        write_file(path, svg.as_bytes())?;
    }
    let member = a.f.as_ref().map(|f| shape.contains(f)).transpose()?;
    if a.json {
        let mut v = json!({ "shape": describe(&shape), "dim": shape.dim() });
        if let (Some(f), Some(m)) = (&a.f, member) {
            v["f"] = json!(f);
            v["member"] = json!(m);
        }
        return Ok(pretty(&v) + "\n");
    }
    let mut out = format!("{}\n", describe(&shape));
    if let (Some(f), Some(m)) = (&a.f, member) {
        writeln!(out, "{f}: {}", if m { "member" } else { "not a member" }).unwrap();
    }
    Ok(out)
}

fn run_orbit(a: OrbitArgs) -> CliResult<String> {
    let group = match (a.group, a.k) {
        (GroupName::Cp2, None) => cp2_generators(),
        (GroupName::Gk, Some(k)) => gk_generators(k),
        (GroupName::Cp2, Some(_)) => return Err(CliError::Usage("--k only applies to --group gk".into())),
        (GroupName::Gk, None) => return Err(CliError::Usage("--group gk needs --k".into())),
    };
    let seed = match &a.seed {
        Some(v) if v.dim() >= 6 && v.dim() % 2 == 0 => {
            let c = v.coords();
            fluxgeom::RationalPolygon::new(c.chunks(2).map(|p| VecQ::xy(p[0].clone(), p[1].clone())).collect())?
        }
        Some(_) => return Err(CliError::Usage("--seed takes at least three x,y pairs".into())),
        None => {
            let d = fluxgeom::standard_diagram();
            d.triangle().translate(&-&d.barycentre())
        }
    };
    let w = a.window.coords();
    if w.len() != 4 {
        return Err(CliError::Usage("--window takes x0,y0,x1,y1".into()));
    }
    let grid = Grid::new(w[0].clone(), w[1].clone(), w[2].clone(), w[3].clone(), a.step)?;
    let rep = orbit_explore(&group, &seed, a.max_word, &grid)?;
    if let Some(path) = &a.csv {
        write_file(path, rep.to_csv().as_bytes())?;
    }
    if let Some(path) = &a.png {
        let mut img = image::GrayImage::from_pixel(rep.columns as u32, rep.rows as u32, image::Luma([255]));
        for (i, (_, hit)) in rep.region.iter().enumerate() {
            if *hit {
                let (x, y) = ((i % rep.columns) as u32, (i / rep.columns) as u32);
                // rows run from the bottom; images from the top
                img.put_pixel(x, rep.rows as u32 - 1 - y, image::Luma([0]));
            }
        }
        img.save(path)?;
    }
    if a.json {
        return Ok(pretty(&json!({
            "word_length": rep.word_length,
            "elements": rep.elements,
            "columns": rep.columns,
            "rows": rep.rows,
            "hits": rep.hits(),
            "covered_fraction": rep.covered_fraction,
        })) + "\n");
    }
    Ok(format!(
        "{} group elements, {}/{} grid points covered ({:.6})\n",
        rep.elements,
        rep.hits(),
        rep.region.len(),
        rep.covered_fraction
    ))
}

fn run_lattice(a: LatticeArgs) -> CliResult<String> {
    let v = lattice_test(a.k, a.tol)?;
    if a.json {
        return Ok(pretty(&serde_json::to_value(&v).expect("verdict serialises")) + "\n");
    }
    Ok(format!(
        "k = {}: area {} (closed form {}), {}\n",
        v.k,
        area_to_string(v.numeric_area),
        v.closed_form,
        if v.is_lattice { "lattice" } else { "not a lattice" }
    ))
}

fn classify_one(f: &FibreDescriptor, json_out: bool) -> String {
    let c = canonicalize(f);
    let (pos, label) = c.delta_position();
    let x = xi2(f);
    if json_out {
        return pretty(&json!({
            "fibre": f.to_json(),
            "canonical": c.to_json(),
            "delta": pos,
            "label": label.map(|l| l.to_string()),
            "xi2": x.to_string(),
        })) + "\n";
    }
    let label = label.map_or("unlabelled".to_string(), |l| l.to_string());
    format!("{f}\ncanonical: {c}\nDelta position: {pos} ({label})\nXi2: {x}\n")
}

fn compare(f1: &FibreDescriptor, f2: &FibreDescriptor, json_out: bool) -> String {
    let eq = equivalent(f1, f2);
    if json_out {
        return pretty(&json!({
            "f1": canonicalize(f1).to_json(),
            "f2": canonicalize(f2).to_json(),
            "equivalent": eq,
        })) + "\n";
    }
    format!("{} ~ {}\nequivalent = {eq}\n", canonicalize(f1), canonicalize(f2))
}

fn run_moduli(a: ModuliArgs) -> CliResult<String> {
    let m = match (&a.triple, &a.max_c) {
        (Some(t), _) => moduli_space(&triple(t)?),
        (None, Some(c)) => global_moduli(c)?,
        (None, None) => return Err(CliError::Usage("give --triple or --global --max-c".into())),
    };
    if let Some(path) = &a.svg {
        write_file(path, m.to_svg().as_bytes())?;
    }
    if a.json {
        return Ok(pretty(&m.to_json()) + "\n");
    }
    let mut out = format!("{}\n", m.presentation());
    for (x, y) in m.non_hausdorff_pairs() {
        writeln!(out, "inseparable: {x} {y}").unwrap();
    }
    Ok(out)
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Markov(c) => run_markov(c),
        Command::Atf(a) => run_atf(a),
        Command::Potential(a) => run_potential(a),
        Command::Psi(a) => run_psi(a),
        Command::Shape(a) => run_shape(a),
        Command::Orbit(a) => run_orbit(a),
        Command::LatticeTest(a) => run_lattice(a),
        Command::Classify(a) => Ok(match (&a.fibre, &a.f1, &a.f2) {
            (Some(f), _, _) => classify_one(&fibre(f)?, a.json),
            (None, Some(f1), Some(f2)) => compare(&fibre(f1)?, &fibre(f2)?, a.json),
            _ => return Err(CliError::Usage("give --fibre, or --f1 and --f2".into())),
        }),
        Command::Equivalent(a) => Ok(compare(&fibre(&a.f1)?, &fibre(&a.f2)?, a.json)),
        Command::Moduli(a) => run_moduli(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
