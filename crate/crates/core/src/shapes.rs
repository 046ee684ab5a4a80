//! The piecewise linear cone function Ψ of a monotone polygon, star-shape
//! bounds, and the closed-form shapes of product and Chekanov tori in ℂⁿ.
//!
//! Flux vectors `𝔣` live in the same coordinates as the polygon, with the
//! fibre under study moved to the origin.

use num_traits::{One, Signed, Zero};

use crate::atf::ATFDiagram;
use crate::error::{Error, Result};
use crate::geometry::{halfplane_polygon, polar_dual, window_polygon, HalfSpace, RationalPolygon, Segment, VecQ};
use crate::potential::{newton_polytope, LaurentPoly};
use crate::rational::{fmt_rational, int, q, Rational};
use crate::svg::SvgDoc;

/// `Ψ(p) = min_i ℓ_i(p)` over the facet functionals of a polygon whose
/// apex is at equal lattice distance from every facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFunction {
    polytope: RationalPolygon,
    apex: VecQ,
    height: Rational,
    facets: Vec<HalfSpace>,
}

impl ConeFunction {
    pub fn new(polytope: RationalPolygon, apex: VecQ) -> Result<Self> {
        apex.check_dim(2)?;
        let facets = polytope.facet_functionals();
        let height = facets[0].value(&apex);
        if !height.is_positive() || facets.iter().any(|f| f.value(&apex) != height) {
            return Err(Error::ApexNotMonotone);
        }
        Ok(ConeFunction { polytope, apex, height, facets })
    }

    /// Cone over the moment triangle of a diagram, apex at its monotone point.
    pub fn from_diagram(d: &ATFDiagram) -> Self {
        ConeFunction::new(d.triangle().clone(), d.barycentre()).expect("monotone point is equidistant")
    }

    /// The standard triangle `x, y ≥ 0, x + y ≤ 1` with apex `(1/3, 1/3)`.
    pub fn cp2() -> Self {
        ConeFunction::from_diagram(&ATFDiagram::standard())
    }

    pub fn polytope(&self) -> &RationalPolygon {
        &self.polytope
    }

    pub fn apex(&self) -> &VecQ {
        &self.apex
    }

    /// Common value of the facet functionals at the apex.
    pub fn height(&self) -> &Rational {
        &self.height
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Indices of the facets attaining the minimum at `p`.
    pub fn minimal_facets(&self, p: &VecQ) -> Vec<usize> {
        let vals: Vec<Rational> = self.facets.iter().map(|f| f.value(p)).collect();
        let m = vals.iter().min().unwrap();
        (0..vals.len()).filter(|&i| &vals[i] == m).collect()
    }
}

/// Ψ at a point of the closed polygon (zero on the boundary).
pub fn psi_eval(f: &ConeFunction, p: &VecQ) -> Result<Rational> {
    p.check_dim(2)?;
    if !f.polytope.contains_closed(p) {
        return Err(Error::OutsideDomain);
    }
    Ok(f.facets.iter().map(|h| h.value(p)).min().unwrap())
}

/// One-sided derivatives of `t ↦ Ψ(seg.at(t))` at `t`.
pub fn one_sided_slopes(f: &ConeFunction, seg: &Segment, t: &Rational) -> Result<(Rational, Rational)> {
    let p = seg.at(t);
    psi_eval(f, &p)?;
    let disp = seg.displacement();
    let slopes: Vec<Rational> = f.minimal_facets(&p).into_iter().map(|i| f.facets[i].normal.dot(&disp)).collect();
    // the minimum of lines: to the left the steepest active one wins, to the right the flattest
    let left = slopes.iter().max().unwrap().clone();
    let right = slopes.iter().min().unwrap().clone();
    Ok((left, right))
}

/// Parameters in `(0, 1)` where Ψ along `seg` bends.
pub fn kinks(f: &ConeFunction, seg: &Segment) -> Result<Vec<Rational>> {
    check_inside(f, seg)?;
    let a = &seg.start;
    let disp = seg.displacement();
    let lines: Vec<(Rational, Rational)> = f.facets.iter().map(|h| (h.value(a), h.normal.dot(&disp))).collect();
    let mut out = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (ci, si) = &lines[i];
            let (cj, sj) = &lines[j];
            if si == sj {
                continue;
            }
            let t = (cj - ci) / (si - sj);
            if !t.is_positive() || t >= Rational::one() || out.contains(&t) {
                continue;
            }
            let (l, r) = one_sided_slopes(f, seg, &t)?;
            if l != r {
                out.push(t);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn check_inside(f: &ConeFunction, seg: &Segment) -> Result<()> {
    if f.polytope.contains_closed(&seg.start) && f.polytope.contains_closed(&seg.end) {
        Ok(())
    } else {
        Err(Error::OutsideDomain)
    }
}

/// Exact midpoint concavity of Ψ along `seg` on the grid `i / samples`.
pub fn concavity_check(f: &ConeFunction, seg: &Segment, samples: u32) -> Result<bool> {
    check_inside(f, seg)?;
    let n = samples.max(1) as i64;
    let vals: Vec<Rational> = (0..=n).map(|i| psi_eval(f, &seg.at(&q(i, n)))).collect::<Result<_>>()?;
    for i in 0..=n {
        for j in (i + 2..=n).step_by(2) {
            let mid = &vals[((i + j) / 2) as usize];
            if mid * int(2) < &vals[i as usize] + &vals[j as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For a concave PL function on `[-N, N]` given by breakpoints `(t, value)`
/// (sorted, first `t = -N`, last `t = N`), checks that both one-sided
/// slopes at 0 are bounded by `value(0) / N`.
pub fn slope_bound_check(breakpoints: &[(Rational, Rational)]) -> Result<bool> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidInput("need at least two breakpoints".into()));
    }
    let n = breakpoints.last().unwrap().0.clone();
    if !n.is_positive() || breakpoints[0].0 != -&n || breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidInput("breakpoints must increase from -N to N".into()));
    }
    let slopes: Vec<Rational> =
        breakpoints.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect();
    if slopes.windows(2).any(|s| s[1] > s[0]) {
        return Err(Error::NonConcave);
    }
    if breakpoints.iter().any(|(_, v)| v.is_negative()) {
        return Err(Error::NonPositive);
    }
    // value and one-sided slopes at 0
    let k = breakpoints.iter().position(|(t, _)| !t.is_negative()).unwrap();
    let (left, right, v0) = if breakpoints[k].0.is_zero() {
        let left = if k > 0 { slopes[k - 1].clone() } else { slopes[0].clone() };
        let right = if k < slopes.len() { slopes[k].clone() } else { left.clone() };
        (left, right, breakpoints[k].1.clone())
    } else {
        let s = slopes[k - 1].clone();
        let v0 = &breakpoints[k].1 - &s * &breakpoints[k].0;
        (s.clone(), s, v0)
    };
    if !v0.is_positive() {
        return Err(Error::NonPositive);
    }
    let bound = &v0 / &n;
    Ok(left.abs() <= bound && right.abs() <= bound)
}

/// A symbolic subset of flux space with exact membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeSet {
    /// Everything except the closed ray `base + t·direction`, `t ≥ 0`.
    RayComplement { base: VecQ, direction: VecQ },
    HalfSpaceIntersection(Vec<HalfSpace>),
    PolytopeInterior(RationalPolygon),
}

impl ShapeSet {
    pub fn dim(&self) -> usize {
        match self {
            ShapeSet::RayComplement { base, .. } => base.dim(),
            ShapeSet::HalfSpaceIntersection(hs) => hs.first().map_or(0, |h| h.normal.dim()),
            ShapeSet::PolytopeInterior(_) => 2,
        }
    }

    pub fn contains(&self, f: &VecQ) -> Result<bool> {
        f.check_dim(self.dim())?;
        Ok(match self {
            ShapeSet::RayComplement { base, direction } => {
                !(f - base).ratio_to(direction).is_some_and(|t| !t.is_negative())
            }
            ShapeSet::HalfSpaceIntersection(hs) => hs.iter().all(|h| h.contains(f)),
            ShapeSet::PolytopeInterior(p) => p.contains_strict(f),
        })
    }
}

/// `⋂ {𝔣 : Ψ(p) + 𝔣·n_i > 0}` over the facets closest to `p`.
pub fn star_shape_bound(f: &ConeFunction, p: &VecQ) -> Result<ShapeSet> {
    let psi = psi_eval(f, p)?;
    if !psi.is_positive() {
        return Err(Error::OutsideDomain);
    }
    let hs = f
        .minimal_facets(p)
        .into_iter()
        .map(|i| HalfSpace::new(f.facets[i].normal.clone(), psi.clone()))
        .collect::<Result<_>>()?;
    Ok(ShapeSet::HalfSpaceIntersection(hs))
}

/// The open polygon moved so that the apex is the origin.
pub fn gcf_star_shape(f: &ConeFunction) -> ShapeSet {
    ShapeSet::PolytopeInterior(f.polytope.translate(&-&f.apex))
}

/// [`gcf_star_shape`], checked against `height · dual(Newton(W))`.
pub fn gcf_star_shape_with_potential(f: &ConeFunction, w: &LaurentPoly) -> Result<ShapeSet> {
    let shape = gcf_star_shape(f);
    let newton = newton_polytope(w)?;
    let poly = newton.polygon().ok_or_else(|| Error::InvalidPolygon("degenerate Newton polytope".into()))?;
    let dual = polar_dual(poly, &VecQ::zero(2))?.scale(&f.height);
    match &shape {
        ShapeSet::PolytopeInterior(p) if *p == dual => Ok(shape),
        _ => Err(Error::InvalidInput("potential is not dual to the polygon".into())),
    }
}

fn positive_vector(r: &VecQ) -> Result<()> {
    if r.dim() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: r.dim() });
    }
    if r.coords().iter().any(|c| !c.is_positive()) {
        return Err(Error::InvalidInput(format!("radii {r} must be positive")));
    }
    Ok(())
}

/// Shape of the product torus with area vector `r` in ℂⁿ: everything but
/// the ray from `-r` in direction `(-1, …, -1)`.
pub fn cn_shape(r: &VecQ) -> Result<ShapeSet> {
    positive_vector(r)?;
    Ok(ShapeSet::RayComplement { base: -r, direction: VecQ::new(vec![int(-1); r.dim()]) })
}

/// Star-shape of the product torus: `𝔣_i + r_i > 0` wherever `r_i` is minimal.
pub fn cn_star_shape(r: &VecQ) -> Result<ShapeSet> {
    positive_vector(r)?;
    let m = r.coords().iter().min().unwrap();
    let hs = (0..r.dim())
        .filter(|&i| &r.coords()[i] == m)
        .map(|i| {
            let mut e = vec![Rational::zero(); r.dim()];
            e[i] = Rational::one();
            HalfSpace::new(VecQ::new(e), r.coords()[i].clone())
        })
        .collect::<Result<_>>()?;
    Ok(ShapeSet::HalfSpaceIntersection(hs))
}

pub fn cn_shape_member(r: &VecQ, f: &VecQ) -> Result<bool> {
    cn_shape(r)?.contains(f)
}

pub fn cn_star_shape_member(r: &VecQ, f: &VecQ) -> Result<bool> {
    cn_star_shape(r)?.contains(f)
}

/// Shapes of the Chekanov torus of parameter `r` in ℂⁿ: the ray complement
/// for `(r, …, r)`, or the half-space `𝔣₁ > -r` for the star-shape.
pub fn chekanov_shape(r: &Rational, dim: usize, star: bool) -> Result<ShapeSet> {
    if !r.is_positive() {
        return Err(Error::InvalidInput(format!("r = {} must be positive", fmt_rational(r))));
    }
    let rv = VecQ::new(vec![r.clone(); dim]);
    if !star {
        return cn_shape(&rv);
    }
    positive_vector(&rv)?;
    let mut e = vec![Rational::zero(); dim];
    e[0] = Rational::one();
    Ok(ShapeSet::HalfSpaceIntersection(vec![HalfSpace::new(VecQ::new(e), r.clone())?]))
}

pub fn chekanov_shape_member(r: &Rational, f: &VecQ, star: bool) -> Result<bool> {
    chekanov_shape(r, f.dim(), star)?.contains(f)
}

/// Draws planar shapes clipped to the window `[x0, x1] × [y0, y1]`.
/// Each entry is a set and a fill colour.
pub fn shapes_svg(sets: &[(ShapeSet, &str)], window: [&Rational; 4]) -> Result<String> {
    let [x0, y0, x1, y1] = window;
    let frame = window_polygon(x0, y0, x1, y1)?;
    let width = crate::rational::to_f64(&(x1 - x0));
    let mut doc = SvgDoc::new(width);
    let pts = |p: &RationalPolygon| p.vertices().iter().map(SvgDoc::point).collect::<Vec<_>>();
    doc.polygon(&pts(&frame), "window", "none");
    for (set, color) in sets {
        if set.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: set.dim() });
        }
        match set {
            ShapeSet::RayComplement { base, direction } => {
                doc.polygon(&pts(&frame), "shape", color);
                // the ray leaves the window after at most this many steps
                let span = (x1 - x0) + (y1 - y0);
                let dir_len = direction.coords().iter().map(|c| c.abs()).max().unwrap();
                let far = base + &direction.scale(&(&span * int(2) / dir_len));
                doc.line(SvgDoc::point(base), SvgDoc::point(&far), "excluded-ray", "white", false);
                doc.dot(SvgDoc::point(base), "ray-base");
            }
            ShapeSet::HalfSpaceIntersection(hs) => {
                if let Some(p) = halfplane_polygon(hs, &frame) {
                    doc.polygon(&pts(&p), "shape", color);
                }
            }
            ShapeSet::PolytopeInterior(p) => {
                let hs = p.facet_functionals();
                if let Some(c) = halfplane_polygon(&hs, &frame) {
                    doc.polygon(&pts(&c), "shape", color);
                }
            }
        }
    }
    doc.dot((0.0, 0.0), "origin");
    Ok(doc.finish())
}
