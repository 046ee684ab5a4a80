//! Base diagrams of almost-toric fibrations of the projective plane: a
//! moment triangle whose corners carry Markov labels, optional nodes on cuts
//! pointing at the monotone point, and the mutation that moves between the
//! diagrams of neighbouring Markov triples.
//!
//! A corner labelled `x` faces a side of affine length proportional to `x²`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{apply_affine, unimodular_normal_form, solve2, Mat2Z, RationalPolygon, Segment, VecQ};
use crate::markov::MarkovTriple;
use crate::rational::{big, fmt_rational, int, to_f64, Rational};
use crate::svg::SvgDoc;

/// A node sitting on the cut from a corner towards the monotone point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeData {
    /// Primitive integer direction from the corner into the triangle.
    pub cut_direction: VecQ,
    /// Affine monodromy around the node; fixes `cut_direction`.
    pub monodromy: Mat2Z,
    /// Fraction of the way from the corner to the monotone point.
    pub slide: Rational,
}

impl NodeData {
    fn at(corner: &VecQ, center: &VecQ, slide: Rational) -> NodeData {
        let cut_direction = (center - corner).primitive();
        let monodromy = Mat2Z::transvection(&cut_direction.to_bigints());
        NodeData { cut_direction, monodromy, slide }
    }
}

/// Which half of a chord through the monotone point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    /// Between the monotone point and the corner.
    Beta,
    /// Between the monotone point and the opposite side.
    Gamma,
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentKind::Beta => "beta",
            SegmentKind::Gamma => "gamma",
        })
    }
}

/// One open half-chord of special fibres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSegment {
    pub label: BigInt,
    pub kind: SegmentKind,
    /// The corner whose chord this is.
    pub vertex: usize,
    /// Open segment from the monotone point (`t = 0`) to the boundary (`t = 1`).
    pub segment: Segment,
}

impl SpecialSegment {
    pub fn name(&self) -> String {
        let g = match self.kind {
            SegmentKind::Beta => "β",
            SegmentKind::Gamma => "γ",
        };
        format!("{g}{}", self.label)
    }

    /// Point at affine parameter `t ∈ (0, 1)`.
    pub fn at(&self, t: &Rational) -> Result<VecQ> {
        if !t.is_positive() || *t >= Rational::one() {
            return Err(Error::InvalidInput(format!("segment parameter {} not in (0,1)", fmt_rational(t))));
        }
        Ok(self.segment.at(t))
    }
}

/// The special segments of a diagram, grouped in `(β, γ)` pairs by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSegmentSet {
    pub pairs: Vec<(SpecialSegment, SpecialSegment)>,
}

impl SpecialSegmentSet {
    pub fn labels(&self) -> Vec<BigInt> {
        self.pairs.iter().map(|(b, _)| b.label.clone()).collect()
    }

    pub fn get(&self, label: &BigInt, kind: SegmentKind) -> Option<&SpecialSegment> {
        self.pairs.iter().find(|(b, _)| &b.label == label).map(|(b, g)| match kind {
            SegmentKind::Beta => b,
            SegmentKind::Gamma => g,
        })
    }
}

/// A labelled moment triangle with optional nodes.
///
/// Vertex data (`labels`, `nodes`) is indexed like the vertices of
/// `triangle`, which are stored counter-clockwise from the lowest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ATFDiagram {
    triple: MarkovTriple,
    triangle: RationalPolygon,
    labels: [BigInt; 3],
    nodes: [Option<NodeData>; 3],
    /// Symplectic area of a complex line.
    line_area: Rational,
}

/// The toric diagram: unit triangle, all labels 1, no nodes.
pub fn standard_diagram() -> ATFDiagram {
    ATFDiagram::standard()
}

impl ATFDiagram {
    pub fn standard() -> ATFDiagram {
        let tri = RationalPolygon::from_points(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let one = BigInt::one();
        ATFDiagram {
            triple: MarkovTriple::root(),
            triangle: tri,
            labels: [one.clone(), one.clone(), one],
            nodes: [None, None, None],
            line_area: int(1),
        }
    }

    /// Assembles a diagram from vertices listed in any order together with
    /// their labels and node slides; all derived data is recomputed.
    pub fn from_parts(vertices: Vec<VecQ>, labels: Vec<BigInt>, slides: Vec<Option<Rational>>) -> Result<ATFDiagram> {
        if vertices.len() != 3 || labels.len() != 3 || slides.len() != 3 {
            return Err(Error::InvalidInput("a diagram has exactly three corners".into()));
        }
        let triangle = RationalPolygon::new(vertices.clone())?;
        let slot = |v: &VecQ| vertices.iter().position(|w| w == v).unwrap();
        let order: Vec<usize> = triangle.vertices().iter().map(slot).collect();
        let labels: [BigInt; 3] = std::array::from_fn(|i| labels[order[i]].clone());
        let triple = MarkovTriple::new(labels[0].clone(), labels[1].clone(), labels[2].clone())?;
        let mut d = ATFDiagram { triple, triangle, labels, nodes: [None, None, None], line_area: int(1) };
        d.check_lengths()?;
        d.line_area = d.monotone_height() * int(3);
        let center = d.barycentre();
        if !d.triangle.contains_strict(&center) {
            return Err(Error::InvalidPolygon("monotone point not interior".into()));
        }
        for (i, &src) in order.iter().enumerate() {
            if let Some(s) = &slides[src] {
                check_slide(s)?;
                d.nodes[i] = Some(NodeData::at(d.triangle.vertex(i), &center, s.clone()));
            }
        }
        Ok(d)
    }

    fn check_lengths(&self) -> Result<()> {
        let lens = self.side_lengths();
        // side i+1 is opposite corner i
        let ratio = &lens[1] / big(&self.labels[0] * &self.labels[0]);
        for i in 0..3 {
            let l = &self.labels[i];
            if lens[(i + 1) % 3] != &ratio * big(l * l) {
                return Err(Error::InvalidPolygon("side lengths do not match the corner labels".into()));
            }
        }
        Ok(())
    }

    pub fn triple(&self) -> &MarkovTriple {
        &self.triple
    }

    pub fn triangle(&self) -> &RationalPolygon {
        &self.triangle
    }

    pub fn vertex(&self, i: usize) -> &VecQ {
        self.triangle.vertex(i)
    }

    pub fn labels(&self) -> &[BigInt; 3] {
        &self.labels
    }

    pub fn node(&self, i: usize) -> Option<&NodeData> {
        self.nodes[i].as_ref()
    }

    pub fn line_area(&self) -> &Rational {
        &self.line_area
    }

    /// First corner carrying `label`.
    pub fn vertex_with_label(&self, label: &BigInt) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Lattice lengths of sides `0, 1, 2` (side `i` runs from corner `i` to `i + 1`).
    pub fn side_lengths(&self) -> Vec<Rational> {
        self.triangle.edge_lattice_lengths()
    }

    /// The monotone point: the unique interior point at equal lattice
    /// distance from all three sides.
    pub fn barycentre(&self) -> VecQ {
        let f = self.triangle.facet_functionals();
        let a = &f[0].normal - &f[1].normal;
        let b = &f[0].normal - &f[2].normal;
        solve2(&a, &(&f[1].offset - &f[0].offset), &b, &(&f[2].offset - &f[0].offset))
            .expect("triangle normals are independent")
    }

    /// Common lattice distance from the monotone point to the sides. With
    /// line area 1 this is 1/3.
    pub fn monotone_height(&self) -> Rational {
        self.triangle.facet_functional(0).value(&self.barycentre())
    }

    /// Arms corner `vertex` with a node at the given slide along its cut.
    pub fn nodal_trade(&self, vertex: usize, slide: Rational) -> Result<ATFDiagram> {
        if vertex >= 3 {
            return Err(Error::InvalidInput(format!("no corner {vertex}")));
        }
        if self.nodes[vertex].is_some() {
            return Err(Error::AlreadyArmed(vertex));
        }
        check_slide(&slide)?;
        let mut d = self.clone();
        d.nodes[vertex] = Some(NodeData::at(self.vertex(vertex), &self.barycentre(), slide));
        Ok(d)
    }

    /// Arms every unarmed corner with the same slide.
    pub fn arm_all(&self, slide: Rational) -> Result<ATFDiagram> {
        let mut d = self.clone();
        for i in 0..3 {
            if d.nodes[i].is_none() {
                d = d.nodal_trade(i, slide.clone())?;
            }
        }
        Ok(d)
    }

    /// Mutation at an armed corner.
    ///
    /// With corners `V, P₁, P₂` counter-clockwise, the chord from `V`
    /// through the monotone point meets `P₁P₂` at `X`. The piece `V P₁ X`
    /// is moved by the node's monodromy (based at `V`), which lines `P₁`
    /// up with the side `V P₂`; the result is the triangle `P₁′ X P₂` with
    /// the node now at `X` and label `3·y·z − x` there.
    pub fn mutate(&self, vertex: usize) -> Result<ATFDiagram> {
        if vertex >= 3 {
            return Err(Error::InvalidInput(format!("no corner {vertex}")));
        }
        let node = self.nodes[vertex].as_ref().ok_or(Error::UnarmedVertex(vertex))?;
        let (i1, i2) = ((vertex + 1) % 3, (vertex + 2) % 3);
        let v = self.vertex(vertex);
        let (p1, p2) = (self.vertex(i1), self.vertex(i2));
        let d = &node.cut_direction;

        // X: v + s d on the line p1 + r (p2 - p1)
        let e = p2 - p1;
        let s = e.cross(&(p1 - v)) / e.cross(d);
        let x = v + &d.scale(&s);

        let u = (p1 - v).primitive();
        let w = (p2 - v).primitive();
        let ratio = u.cross(&w) / (d.cross(&u) * w.cross(d));
        if !ratio.is_one() {
            return Err(Error::InvalidPolygon(format!("corner {vertex} does not admit a mutation")));
        }
        let p1_new = v + &node.monodromy.apply(&(p1 - v));

        let (x_lab, y_lab, z_lab) = (&self.labels[vertex], &self.labels[i1], &self.labels[i2]);
        let new_label = BigInt::from(3) * y_lab * z_lab - x_lab;
        let slide = |i: usize| self.nodes[i].as_ref().map(|n| n.slide.clone());
        ATFDiagram::from_parts(
            vec![p1_new, x, p2.clone()],
            vec![y_lab.clone(), new_label, z_lab.clone()],
            vec![slide(i1), Some(node.slide.clone()), slide(i2)],
        )
    }

    /// Mutation changing the triple entry at sorted position `pos`.
    pub fn mutate_position(&self, pos: usize) -> Result<ATFDiagram> {
        let label = &self.triple.entries()[pos];
        let v = self.vertex_with_label(label).expect("every triple entry labels a corner");
        self.mutate(v)
    }

    /// Mutation towards a neighbouring triple in the Markov tree.
    pub fn mutate_to(&self, target: &MarkovTriple) -> Result<ATFDiagram> {
        for pos in 0..3 {
            if &self.triple.mutate(pos) == target {
                return self.mutate_position(pos);
            }
        }
        Err(Error::InvalidInput(format!("{target} is not adjacent to {}", self.triple)))
    }

    /// Open β/γ half-chords. Labels other than 1 get one pair each; a label
    /// 1 (all such corners are equivalent) gets a single pair from its first
    /// corner.
    pub fn special_segments(&self) -> SpecialSegmentSet {
        let center = self.barycentre();
        let mut pairs = Vec::new();
        let mut seen: Vec<&BigInt> = Vec::new();
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&i, &j| self.labels[i].cmp(&self.labels[j]).then(i.cmp(&j)));
        for i in order {
            let label = &self.labels[i];
            if seen.contains(&label) {
                continue;
            }
            seen.push(label);
            let v = self.vertex(i);
            let (p1, p2) = (self.vertex(i + 1), self.vertex(i + 2));
            let dir = &center - v;
            let e = p2 - p1;
            let s = e.cross(&(p1 - v)) / e.cross(&dir);
            let x = v + &dir.scale(&s);
            let beta = Segment::open(center.clone(), v.clone()).unwrap();
            let gamma = Segment::open(center.clone(), x).unwrap();
            pairs.push((
                SpecialSegment { label: label.clone(), kind: SegmentKind::Beta, vertex: i, segment: beta },
                SpecialSegment { label: label.clone(), kind: SegmentKind::Gamma, vertex: i, segment: gamma },
            ));
        }
        SpecialSegmentSet { pairs }
    }

    /// Image under `p ↦ m p + shift`, `det m = ±1`.
    pub fn transform(&self, m: &Mat2Z, shift: &VecQ) -> Result<ATFDiagram> {
        let moved = apply_affine(&self.triangle, m, shift)?;
        let verts: Vec<VecQ> = self.triangle.vertices().iter().map(|v| &m.apply(v) + shift).collect();
        debug_assert!(verts.iter().all(|v| moved.vertices().contains(v)));
        let slides = self.nodes.iter().map(|n| n.as_ref().map(|n| n.slide.clone())).collect();
        ATFDiagram::from_parts(verts, self.labels.to_vec(), slides)
    }

    /// Canonical representative under unimodular maps and translations.
    /// Orientation-reversing maps are allowed: the two corners labelled 1 of
    /// the (1,1,2) diagram lead to mirror-image (1,2,5) diagrams.
    pub fn normal_form(&self) -> ATFDiagram {
        let nf = unimodular_normal_form(&self.triangle);
        self.transform(&nf.matrix, &nf.shift).expect("unimodular image of a valid diagram")
    }

    /// Same diagram translated so that the monotone point is the origin.
    pub fn centered(&self) -> ATFDiagram {
        self.transform(&Mat2Z::identity(), &-&self.barycentre()).unwrap()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = DiagramJson {
            triple: self.triple.clone(),
            labels: self.labels.iter().map(crate::rational::serde_int::to_value).collect(),
            vertices: self.triangle.vertices().to_vec(),
            nodes: (0..3)
                .filter_map(|i| {
                    self.nodes[i].as_ref().map(|n| NodeJson {
                        vertex: i,
                        cut: n.cut_direction.clone(),
                        monodromy: n.monodromy.clone(),
                        slide: n.slide.clone(),
                    })
                })
                .collect(),
        };
        serde_json::to_value(json).unwrap()
    }

    /// Inverse of [`Self::to_json`]; node cuts and monodromies must agree
    /// with the geometry.
    pub fn from_json(v: &serde_json::Value) -> Result<ATFDiagram> {
        let raw: DiagramJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let labels = raw
            .labels
            .iter()
            .map(crate::rational::serde_int::from_value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(Error::Parse)?;
        if raw.vertices.len() != 3 {
            return Err(Error::Parse("expected three vertices".into()));
        }
        let mut slides = vec![None, None, None];
        for n in &raw.nodes {
            if n.vertex >= 3 || slides[n.vertex].is_some() {
                return Err(Error::Parse(format!("bad node vertex {}", n.vertex)));
            }
            slides[n.vertex] = Some(n.slide.clone());
        }
        let d = ATFDiagram::from_parts(raw.vertices.clone(), labels, slides)?;
        if d.triangle.vertices() != raw.vertices.as_slice() {
            return Err(Error::Parse("vertices must be counter-clockwise from the lowest one".into()));
        }
        if d.triple != raw.triple {
            return Err(Error::Parse("triple does not match the labels".into()));
        }
        for n in &raw.nodes {
            let node = d.nodes[n.vertex].as_ref().unwrap();
            if node.cut_direction != n.cut || node.monodromy != n.monodromy {
                return Err(Error::Parse(format!("node data at vertex {} disagrees with the triangle", n.vertex)));
            }
        }
        Ok(d)
    }

    /// Triangle, corners with labels, crosses at nodes, dashed cuts and the
    /// special half-chords (β solid red, γ solid blue).
    pub fn to_svg(&self) -> String {
        let scale = 1.0 / to_f64(&self.side_lengths().into_iter().max().unwrap());
        let mut doc = SvgDoc::new(1.0 / scale);
        let p = |v: &VecQ| SvgDoc::point(v);
        let corners: Vec<(f64, f64)> = self.triangle.vertices().iter().map(p).collect();
        doc.polygon(&corners, "moment-triangle", "none");
        let center = self.barycentre();
        for (b, g) in &self.special_segments().pairs {
            for (s, color) in [(b, "#c0392b"), (g, "#2c6fbb")] {
                let (a, z) = (p(&s.segment.start), p(&s.segment.end));
                doc.line(a, z, &format!("{}-segment", s.kind), color, false);
                let mid = ((a.0 + z.0) / 2.0, (a.1 + z.1) / 2.0);
                doc.text(mid, &s.name(), color);
            }
        }
        for i in 0..3 {
            let v = self.vertex(i);
            doc.text(p(v), &self.labels[i].to_string(), "black");
            if let Some(n) = &self.nodes[i] {
                let at = v + &(&center - v).scale(&n.slide);
                doc.line(p(v), p(&at), "cut", "black", true);
                doc.cross(p(&at));
            }
        }
        doc.dot(p(&center), "monotone");
        doc.finish()
    }
}

fn check_slide(s: &Rational) -> Result<()> {
    if s.is_positive() && *s <= Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("slide {} not in (0,1]", fmt_rational(s))))
    }
}

/// The diagram of `t` reached from the standard one along the descent path,
/// with every corner armed at `slide`.
pub fn diagram_for(t: &MarkovTriple, slide: Rational) -> Result<ATFDiagram> {
    let mut path = crate::markov::path_to_root(t);
    path.reverse();
    let mut d = ATFDiagram::standard().arm_all(slide)?;
    for next in &path[1..] {
        d = d.mutate_to(next)?;
    }
    Ok(d)
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    vertex: usize,
    cut: VecQ,
    monodromy: Mat2Z,
    #[serde(with = "crate::rational::serde_q")]
    slide: Rational,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    triple: MarkovTriple,
    labels: Vec<serde_json::Value>,
    vertices: Vec<VecQ>,
    nodes: Vec<NodeJson>,
}

impl fmt::Display for ATFDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ATF:", self.triple)?;
        for i in 0..3 {
            write!(f, " {}[{}]", self.vertex(i), self.labels[i])?;
            if self.nodes[i].is_some() {
                write!(f, "x")?;
            }
        }
        Ok(())
    }
}
