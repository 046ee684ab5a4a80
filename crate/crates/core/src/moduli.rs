//! Almost-toric fibres of the projective plane up to symplectomorphism:
//! fibre descriptors, canonical forms, the Ξ₂ count, and the labelled
//! triangle presentation of the moduli spaces ℋ(a,b,c).
//!
//! Everything is drawn over the fundamental triangle
//! `Δ = {0 < x ≤ 1/3, x ≤ y ≤ (1 − x)/2}` of toric fibres. Its vertex
//! `(1/3, 1/3)` is the monotone fibre, the edge `x = y` is edge X, the edge
//! `y = (1 − x)/2` is edge Y and the edge `x = 0` is missing. Segments from
//! the vertex to the missing edge are indexed by `θ ∈ [0, 1]`, ending at
//! `(0, θ/2)`; edge X is `θ = 0` and edge Y is `θ = 1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::atf::SegmentKind;
use crate::error::{Error, Result};
use crate::geometry::VecQ;
use crate::markov::{check_uniqueness, enumerate_tree, path_to_root, ray_origin, MarkovTriple};
use crate::potential::potential_for;
use crate::rational::{fmt_rational, int, parse_rational, q, Rational};
use crate::svg::SvgDoc;

/// The ray of the Markov tree along which a Markov number occurs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RayId {
    pub number: BigInt,
    /// Triple at which `number` first appears.
    pub origin: MarkovTriple,
    /// Whether no other triple has `number` as its largest entry.
    pub unique: bool,
}

impl RayId {
    pub fn new(t: &MarkovTriple, m: &BigInt) -> Result<RayId> {
        let origin = ray_origin(t, m)?;
        Ok(RayId { number: m.clone(), origin, unique: number_is_unique(m) })
    }
}

impl fmt::Display for RayId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unique {
            write!(f, "{}", self.number)
        } else {
            write!(f, "{}@{}", self.number, self.origin)
        }
    }
}

fn number_is_unique(m: &BigInt) -> bool {
    static CACHE: OnceLock<Mutex<HashMap<BigInt, bool>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&u) = cache.lock().unwrap().get(m) {
        return u;
    }
    let u = check_uniqueness(m).map(|r| r.by_max.get(m).map_or(0, |v| v.len()) == 1).unwrap_or(false);
    cache.lock().unwrap().insert(m.clone(), u);
    u
}

/// A fibre of some Markov ATF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibreDescriptor {
    Monotone { triple: MarkovTriple },
    /// Toric fibre over `(x, y)` in the standard triangle.
    ToricPoint { x: Rational, y: Rational },
    /// Fibre on the β or γ half-chord of the corner labelled
    /// `markov_number`, at affine parameter `t` from the monotone point.
    SpecialFibre { triple: MarkovTriple, kind: SegmentKind, markov_number: BigInt, ray_id: RayId, t: Rational },
}

fn open_unit(t: &Rational) -> Result<()> {
    if t.is_positive() && *t < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("t = {} not in (0,1)", fmt_rational(t))))
    }
}

fn toric_interior(x: &Rational, y: &Rational) -> Result<()> {
    if x.is_positive() && y.is_positive() && (Rational::one() - x - y).is_positive() {
        Ok(())
    } else {
        Err(Error::OutsideDomain)
    }
}

impl FibreDescriptor {
    pub fn monotone(triple: MarkovTriple) -> Self {
        FibreDescriptor::Monotone { triple }
    }

    pub fn toric(x: Rational, y: Rational) -> Result<Self> {
        toric_interior(&x, &y)?;
        if x == q(1, 3) && y == q(1, 3) {
            return Err(Error::InvalidInput("(1/3,1/3) is the monotone fibre of (1,1,1)".into()));
        }
        Ok(FibreDescriptor::ToricPoint { x, y })
    }

    /// A β or γ fibre. A γ fibre of a corner labelled 1 is toric and is
    /// returned as such.
    pub fn special(triple: MarkovTriple, kind: SegmentKind, markov_number: BigInt, t: Rational) -> Result<Self> {
        open_unit(&t)?;
        let ray_id = RayId::new(&triple, &markov_number)?;
        if kind == SegmentKind::Gamma && markov_number.is_one() {
            let (x, y) = gamma1_point(&t);
            return FibreDescriptor::toric(x, y);
        }
        Ok(FibreDescriptor::SpecialFibre { triple, kind, markov_number, ray_id, t })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = match self {
            FibreDescriptor::Monotone { triple } => RawFibre::Monotone { triple: triple.clone() },
            FibreDescriptor::ToricPoint { x, y } => RawFibre::Toric { x: x.clone(), y: y.clone() },
            FibreDescriptor::SpecialFibre { triple, kind, markov_number, t, .. } => {
                let (triple, m, t) = (triple.clone(), markov_number.clone(), t.clone());
                match kind {
                    SegmentKind::Beta => RawFibre::Beta { triple, m, t },
                    SegmentKind::Gamma => RawFibre::Gamma { triple, m, t },
                }
            }
        };
        serde_json::to_value(raw).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: RawFibre = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        match raw {
            RawFibre::Monotone { triple } => Ok(FibreDescriptor::monotone(triple)),
            RawFibre::Toric { x, y } => FibreDescriptor::toric(x, y),
            RawFibre::Beta { triple, m, t } => FibreDescriptor::special(triple, SegmentKind::Beta, m, t),
            RawFibre::Gamma { triple, m, t } => FibreDescriptor::special(triple, SegmentKind::Gamma, m, t),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawFibre {
    Monotone {
        triple: MarkovTriple,
    },
    Toric {
        #[serde(with = "crate::rational::serde_q")]
        x: Rational,
        #[serde(with = "crate::rational::serde_q")]
        y: Rational,
    },
    Beta {
        triple: MarkovTriple,
        #[serde(with = "crate::rational::serde_int")]
        m: BigInt,
        #[serde(with = "crate::rational::serde_q")]
        t: Rational,
    },
    Gamma {
        triple: MarkovTriple,
        #[serde(with = "crate::rational::serde_int")]
        m: BigInt,
        #[serde(with = "crate::rational::serde_q")]
        t: Rational,
    },
}

/// Short syntax: `toric:x,y`, `monotone:a,b,c`, `beta:a,b,c:m:t` or
/// `gamma:a,b,c:m:t`. A JSON object is accepted as well.
impl FromStr for FibreDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return FibreDescriptor::from_json(&v);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("cannot read fibre {s:?}"));
        match parts.as_slice() {
            ["monotone", t] => Ok(FibreDescriptor::monotone(t.parse()?)),
            ["toric", xy] => {
                let (x, y) = xy.split_once(',').ok_or_else(bad)?;
                FibreDescriptor::toric(parse_rational(x)?, parse_rational(y)?)
            }
            [kind @ ("beta" | "gamma"), t, m, pos] => {
                let kind = if *kind == "beta" { SegmentKind::Beta } else { SegmentKind::Gamma };
                let m = m.trim().parse::<BigInt>().map_err(|_| bad())?;
                FibreDescriptor::special(t.parse()?, kind, m, parse_rational(pos)?)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FibreDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreDescriptor::Monotone { triple } => write!(f, "monotone:{}", triple_short(triple)),
            FibreDescriptor::ToricPoint { x, y } => write!(f, "toric:{},{}", fmt_rational(x), fmt_rational(y)),
            FibreDescriptor::SpecialFibre { triple, kind, markov_number, t, .. } => {
                write!(f, "{kind}:{}:{markov_number}:{}", triple_short(triple), fmt_rational(t))
            }
        }
    }
}

fn triple_short(t: &MarkovTriple) -> String {
    let [a, b, c] = t.entries();
    format!("{a},{b},{c}")
}

/// Normal form of a fibre up to symplectomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalFibre {
    Monotone { triple: MarkovTriple },
    /// Toric fibre with sorted areas `x ≤ y ≤ 1 − x − y`, not all equal.
    ToricCanonical { x: Rational, y: Rational },
    /// γ₂ fibre of the (1,1,2) diagram.
    Gamma2 { t: Rational },
    BetaFibre { c: BigInt, ray: RayId, t: Rational },
}

impl CanonicalFibre {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let qs = |r: &Rational| json!(fmt_rational(r));
        match self {
            CanonicalFibre::Monotone { triple } => json!({"type": "monotone", "triple": triple}),
            CanonicalFibre::ToricCanonical { x, y } => json!({"type": "toric", "x": qs(x), "y": qs(y)}),
            CanonicalFibre::Gamma2 { t } => json!({"type": "gamma2", "t": qs(t)}),
            CanonicalFibre::BetaFibre { c, ray, t } => json!({
                "type": "beta",
                "c": crate::rational::serde_int::to_value(c),
                "ray": ray.to_string(),
                "t": qs(t),
            }),
        }
    }

    /// Point of Δ over which the fibre sits, with its label (`None` for a
    /// generic toric fibre and for the monotone vertex).
    pub fn delta_position(&self) -> (VecQ, Option<Label>) {
        match self {
            CanonicalFibre::Monotone { .. } => (delta_vertex(), None),
            CanonicalFibre::ToricCanonical { x, y } => {
                let p = VecQ::xy(x.clone(), y.clone());
                let label = if x == y {
                    Some(Label::beta1())
                } else if y * int(2) == Rational::one() - x {
                    Some(Label::Gamma(BigInt::one()))
                } else {
                    None
                };
                (p, label)
            }
            CanonicalFibre::Gamma2 { t } => (delta_segment_point(&int(0), t), Some(Label::Gamma(BigInt::from(2)))),
            CanonicalFibre::BetaFibre { ray, t, .. } => {
                let theta = farey_position(&ray.origin, &ray.number).unwrap();
                (delta_segment_point(&theta, t), Some(Label::Beta(ray.clone())))
            }
        }
    }
}

impl fmt::Display for CanonicalFibre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalFibre::Monotone { triple } => write!(f, "monotone {triple}"),
            CanonicalFibre::ToricCanonical { x, y } => write!(f, "toric ({},{})", fmt_rational(x), fmt_rational(y)),
            CanonicalFibre::Gamma2 { t } => write!(f, "γ2 at t={}", fmt_rational(t)),
            CanonicalFibre::BetaFibre { ray, t, .. } => write!(f, "β{ray} at t={}", fmt_rational(t)),
        }
    }
}

fn delta_vertex() -> VecQ {
    VecQ::xy(q(1, 3), q(1, 3))
}

/// Point at parameter `t` on the Δ segment `θ`, from the vertex towards
/// `(0, θ/2)`.
pub fn delta_segment_point(theta: &Rational, t: &Rational) -> VecQ {
    let v = delta_vertex();
    let end = VecQ::xy(int(0), theta / int(2));
    &v + &(&end - &v).scale(t)
}

fn gamma1_point(t: &Rational) -> (Rational, Rational) {
    let p = delta_segment_point(&int(1), t);
    (p.x().clone(), p.y().clone())
}

/// Count of lowest-area Maslov 2 disks, read off the descriptor directly.
pub fn xi2(f: &FibreDescriptor) -> BigInt {
    match f {
        FibreDescriptor::Monotone { triple } => monotone_xi2(triple),
        FibreDescriptor::ToricPoint { x, y } => {
            let areas = [x.clone(), y.clone(), Rational::one() - x - y];
            let m = areas.iter().min().unwrap();
            BigInt::from(areas.iter().filter(|a| *a == m).count())
        }
        FibreDescriptor::SpecialFibre { kind: SegmentKind::Beta, markov_number, .. } => {
            BigInt::from(2).pow(markov_number.to_u32().expect("Markov number fits in u32 for Ξ₂"))
        }
        FibreDescriptor::SpecialFibre { kind: SegmentKind::Gamma, .. } => BigInt::one(),
    }
}

/// For the monotone torus all Maslov 2 disks have the same area, so Ξ₂ is
/// the value of its potential at `(1, 1)`.
fn monotone_xi2(t: &MarkovTriple) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<MarkovTriple, BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(t) {
        return v.clone();
    }
    let (_, w) = potential_for(t, q(1, 2)).expect("every Markov triple is reachable");
    let v = w.coefficient_sum();
    cache.lock().unwrap().insert(t.clone(), v.clone());
    v
}

/// Sorts the three areas; all equal gives the Clifford torus.
pub fn canonical_toric(x: &Rational, y: &Rational) -> Result<CanonicalFibre> {
    toric_interior(x, y)?;
    let mut areas = [x.clone(), y.clone(), Rational::one() - x - y];
    areas.sort();
    if areas[0] == areas[2] {
        return Ok(CanonicalFibre::Monotone { triple: MarkovTriple::root() });
    }
    let [u, v, _] = areas;
    Ok(CanonicalFibre::ToricCanonical { x: u, y: v })
}

/// Every γ fibre of a corner labelled 2 or more is a γ₂ fibre at the same
/// parameter.
pub fn gamma_reduce(f: &FibreDescriptor) -> Result<CanonicalFibre> {
    match f {
        FibreDescriptor::SpecialFibre { kind: SegmentKind::Gamma, markov_number, t, .. } if *markov_number >= BigInt::from(2) => {
            Ok(CanonicalFibre::Gamma2 { t: t.clone() })
        }
        _ => Err(Error::InvalidInput(format!("{f} is not a γ fibre of a corner labelled at least 2"))),
    }
}

pub fn canonicalize(f: &FibreDescriptor) -> CanonicalFibre {
    match f {
        FibreDescriptor::Monotone { triple } => CanonicalFibre::Monotone { triple: triple.clone() },
        FibreDescriptor::ToricPoint { x, y } => canonical_toric(x, y).expect("validated descriptor"),
        FibreDescriptor::SpecialFibre { kind: SegmentKind::Gamma, .. } => gamma_reduce(f).expect("validated descriptor"),
        FibreDescriptor::SpecialFibre { kind: SegmentKind::Beta, markov_number, ray_id, t, .. } => {
            if markov_number.is_one() {
                // β₁ fibres are the toric fibres with two equal smallest areas
                let p = delta_segment_point(&int(0), t);
                canonical_toric(p.x(), p.y()).expect("inside the triangle")
            } else {
                CanonicalFibre::BetaFibre { c: markov_number.clone(), ray: ray_id.clone(), t: t.clone() }
            }
        }
    }
}

pub fn equivalent(f1: &FibreDescriptor, f2: &FibreDescriptor) -> bool {
    canonicalize(f1) == canonicalize(f2)
}

/// Position `θ` of the β segment of Markov number `m` in Δ: 1 sits at 0,
/// 2 at 1, and each later number at the mediant of the other two entries
/// of the triple where it first appears.
pub fn farey_position(t: &MarkovTriple, m: &BigInt) -> Result<Rational> {
    let origin = ray_origin(t, m)?;
    let mut path = path_to_root(&origin);
    path.reverse();
    let mut frac: HashMap<BigInt, (BigInt, BigInt)> = HashMap::new();
    frac.insert(BigInt::one(), (BigInt::zero(), BigInt::one()));
    for w in path.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        let new = next.entries().iter().find(|e| !prev.contains(e)).expect("mutation introduces a new number");
        let others: Vec<&BigInt> = next.entries().iter().filter(|e| *e != new).collect();
        let f = if *new == BigInt::from(2) {
            (BigInt::one(), BigInt::one())
        } else {
            let (a, b) = (&frac[others[0]], &frac[others[1]]);
            (&a.0 + &b.0, &a.1 + &b.1)
        };
        frac.insert(new.clone(), f);
    }
    let (n, d) = &frac[m];
    Ok(Rational::new(n.clone(), d.clone()))
}

/// A β or γ label attached to a segment of Δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Beta(RayId),
    Gamma(BigInt),
}

impl Label {
    fn beta1() -> Label {
        Label::Beta(RayId::new(&MarkovTriple::root(), &BigInt::one()).unwrap())
    }

    fn beta(t: &MarkovTriple, m: &BigInt) -> Label {
        Label::Beta(RayId::new(t, m).unwrap())
    }

    pub fn number(&self) -> &BigInt {
        match self {
            Label::Beta(r) => &r.number,
            Label::Gamma(m) => m,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Beta(r) => write!(f, "β{r}"),
            Label::Gamma(m) => write!(f, "γ{m}"),
        }
    }
}

/// Δ with labelled edges X and Y and labelled interior segments
/// (half-open, from the vertex to the missing edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTriangle {
    pub x: Label,
    pub y: Label,
    /// `(label, θ)` sorted by `θ`.
    pub interior: Vec<(Label, Rational)>,
    /// Index into [`ModuliSpace::vertices`].
    pub vertex: usize,
}

impl LabeledTriangle {
    /// Label over a non-vertex point of Δ with segment index `θ`.
    pub fn label_at(&self, theta: &Rational) -> Option<&Label> {
        if theta.is_zero() {
            Some(&self.x)
        } else if theta.is_one() {
            Some(&self.y)
        } else {
            self.interior.iter().find(|(_, th)| th == theta).map(|(l, _)| l)
        }
    }
}

impl fmt::Display for LabeledTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ")?;
        if !self.interior.is_empty() {
            let mut ls: Vec<&Label> = self.interior.iter().map(|(l, _)| l).collect();
            ls.sort_by(|a, b| a.number().cmp(b.number()));
            let ls: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
            write!(f, "^{{{}}}", ls.join(","))?;
        }
        write!(f, "_{{{},{}}}", self.x, self.y)
    }
}

/// How the vertices of wedged spaces are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WedgeMode {
    /// `∨`: all vertices identified.
    Vee,
    /// `∨̇`: vertices kept apart.
    DotVee,
}

/// A wedge of labelled triangles. Over a non-vertex point of Δ, points of
/// different triangles are identified exactly when their labels agree
/// (no label counts as a label); vertices are identified by class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliSpace {
    pub triangles: Vec<LabeledTriangle>,
    /// Monotone tori sitting at each vertex class.
    pub vertices: Vec<Vec<MarkovTriple>>,
}

/// ℋ(a,b,c) as a wedge of labelled triangles.
pub fn moduli_space(t: &MarkovTriple) -> ModuliSpace {
    let [a, b, c] = t.entries();
    let one = BigInt::one();
    let two = BigInt::from(2);
    let gamma = |m: &BigInt| Label::Gamma(m.clone());
    let beta = |m: &BigInt| Label::beta(t, m);
    let interior = |ms: &[&BigInt]| {
        let mut v: Vec<(Label, Rational)> = ms.iter().map(|m| (beta(m), farey_position(t, m).unwrap())).collect();
        v.sort_by(|x, y| x.1.cmp(&y.1));
        v
    };
    let tri = |x: Label, y: Label, inner: Vec<(Label, Rational)>| LabeledTriangle { x, y, interior: inner, vertex: 0 };
    let gg = || tri(gamma(&two), gamma(&one), vec![]);
    let triangles = if t.is_root() {
        vec![tri(beta(&one), gamma(&one), vec![])]
    } else if *c == two {
        vec![tri(beta(&one), gamma(&one), vec![]), tri(gamma(&two), beta(&two), vec![])]
    } else if *a == one && *b == two {
        vec![tri(beta(&one), beta(&two), interior(&[c])), gg()]
    } else if *a == one {
        vec![tri(beta(&one), gamma(&one), interior(&[b, c])), gg()]
    } else if *a == two {
        vec![tri(gamma(&two), beta(&two), interior(&[b, c])), gg()]
    } else {
        vec![tri(gamma(&two), gamma(&one), interior(&[a, b, c])), gg()]
    };
    ModuliSpace { triangles, vertices: vec![vec![t.clone()]] }
}

/// Joins spaces; in `∨` mode every vertex becomes one class.
pub fn wedge(spaces: &[ModuliSpace], mode: WedgeMode) -> ModuliSpace {
    let mut out = ModuliSpace { triangles: Vec::new(), vertices: Vec::new() };
    for s in spaces {
        let offset = out.vertices.len();
        for tr in &s.triangles {
            let mut tr = tr.clone();
            tr.vertex = match mode {
                WedgeMode::Vee => 0,
                WedgeMode::DotVee => tr.vertex + offset,
            };
            out.triangles.push(tr);
        }
        match mode {
            WedgeMode::Vee => {
                if out.vertices.is_empty() {
                    out.vertices.push(Vec::new());
                }
                out.vertices[0].extend(s.vertices.iter().flatten().cloned());
            }
            WedgeMode::DotVee => out.vertices.extend(s.vertices.iter().cloned()),
        }
    }
    out
}

/// ℋ for all triples with largest entry at most `max_c`: each ℋ(a,b,c)
/// keeps its own vertex.
pub fn global_moduli(max_c: &BigInt) -> Result<ModuliSpace> {
    let tree = enumerate_tree(max_c)?;
    let spaces: Vec<ModuliSpace> = tree.nodes.iter().map(moduli_space).collect();
    Ok(wedge(&spaces, WedgeMode::DotVee))
}

/// One point of the quotient over a point of Δ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointClass {
    /// A vertex class with its monotone tori.
    Vertex(Vec<MarkovTriple>),
    /// A non-vertex point carrying this label (or none).
    Labeled(Option<Label>),
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointClass::Vertex(ts) => {
                let ts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "vertex[{}]", ts.join(","))
            }
            PointClass::Labeled(Some(l)) => write!(f, "{l}"),
            PointClass::Labeled(None) => write!(f, "unlabelled"),
        }
    }
}

/// Segment index `θ` of a point of Δ other than the vertex.
pub fn delta_theta(p: &VecQ) -> Result<Option<Rational>> {
    p.check_dim(2)?;
    let (x, y) = (p.x(), p.y());
    let inside = x.is_positive() && *x <= q(1, 3) && x <= y && y * int(2) <= Rational::one() - x;
    if !inside {
        return Err(Error::OutsideDomain);
    }
    if *p == delta_vertex() {
        return Ok(None);
    }
    let s = Rational::one() - x * int(3);
    Ok(Some((q(1, 3) + (y - q(1, 3)) / s) * int(2)))
}

/// The distinct points of `m` over the Δ point `p`; more than one means
/// they cannot be separated by open sets.
pub fn inseparable_pairs(m: &ModuliSpace, p: &VecQ) -> Result<Vec<PointClass>> {
    let theta = delta_theta(p)?;
    let set: BTreeSet<PointClass> = match theta {
        None => m.vertices.iter().map(|v| PointClass::Vertex(v.clone())).collect(),
        Some(th) => m.triangles.iter().map(|tr| PointClass::Labeled(tr.label_at(&th).cloned())).collect(),
    };
    Ok(set.into_iter().collect())
}

impl ModuliSpace {
    /// Triangles grouped by vertex class, `∨` inside a class and `∨̇` between.
    pub fn presentation(&self) -> String {
        let groups: Vec<String> = (0..self.vertices.len())
            .map(|k| {
                let ts: Vec<String> =
                    self.triangles.iter().filter(|t| t.vertex == k).map(|t| t.to_string()).collect();
                ts.join(" ∨ ")
            })
            .collect();
        if groups.len() > 1 {
            groups.iter().map(|g| format!("({g})")).collect::<Vec<_>>().join(" ∨̇ ")
        } else {
            groups.join("")
        }
    }

    /// All distinct labels present.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for t in &self.triangles {
            out.insert(t.x.clone());
            out.insert(t.y.clone());
            out.extend(t.interior.iter().map(|(l, _)| l.clone()));
        }
        out
    }

    /// Labels that meet another label over the same segment of Δ.
    pub fn non_hausdorff_pairs(&self) -> Vec<(Label, Label)> {
        let mut thetas: BTreeSet<Rational> = [int(0), int(1)].into_iter().collect();
        for t in &self.triangles {
            thetas.extend(t.interior.iter().map(|(_, th)| th.clone()));
        }
        let mut out = BTreeSet::new();
        for th in thetas {
            let labels: BTreeSet<&Label> = self.triangles.iter().filter_map(|t| t.label_at(&th)).collect();
            let labels: Vec<&Label> = labels.into_iter().collect();
            for i in 0..labels.len() {
                for j in i + 1..labels.len() {
                    out.insert((labels[i].clone(), labels[j].clone()));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let tris: Vec<serde_json::Value> = self
            .triangles
            .iter()
            .map(|t| {
                json!({
                    "vertex": t.vertex,
                    "x": t.x.to_string(),
                    "y": t.y.to_string(),
                    "interior": t.interior.iter().map(|(l, th)| json!({"label": l.to_string(), "theta": fmt_rational(th)})).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "presentation": self.presentation(),
            "vertices": self.vertices,
            "triangles": tris,
        })
    }

    /// Triangles side by side: labelled edges X (red) and Y (blue), the
    /// missing edge dashed, interior segments with their labels.
    pub fn to_svg(&self) -> String {
        let mut doc = SvgDoc::new(0.5);
        let color = |l: &Label| match l {
            Label::Beta(_) => "#c0392b",
            Label::Gamma(_) => "#2c6fbb",
        };
        for (k, t) in self.triangles.iter().enumerate() {
            let dx = 0.55 * k as f64;
            let at = |v: &VecQ| {
                let (x, y) = SvgDoc::point(v);
                (x + dx, y)
            };
            let v = at(&delta_vertex());
            let o = at(&VecQ::xy(int(0), int(0)));
            let top = at(&VecQ::xy(int(0), q(1, 2)));
            doc.line(o, top, "missing-edge", "gray", true);
            doc.line(v, o, "edge-x", color(&t.x), false);
            doc.text(((v.0 + o.0) / 2.0 + 0.01, (v.1 + o.1) / 2.0 - 0.02), &t.x.to_string(), color(&t.x));
            doc.line(v, top, "edge-y", color(&t.y), false);
            doc.text(((v.0 + top.0) / 2.0 + 0.01, (v.1 + top.1) / 2.0 + 0.01), &t.y.to_string(), color(&t.y));
            for (l, th) in &t.interior {
                let end = at(&VecQ::xy(int(0), th / int(2)));
                doc.line(v, end, "interior", color(l), false);
                doc.text(((2.0 * v.0 + end.0) / 3.0, (2.0 * v.1 + end.1) / 3.0), &l.to_string(), color(l));
            }
            doc.dot(v, "vertex");
        }
        doc.finish()
    }
}

impl fmt::Display for ModuliSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.presentation())
    }
}
