//! Exact rational linear algebra in the plane (and in ℝⁿ where membership
//! tests need it): vectors, 2×2 integer matrices, convex polygons, strict
//! half-spaces, segments, lattice lengths and polar duality.
//!
//! Nothing in here ever touches a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{big, common_denominator, fmt_rational, int, parse_rational, Rational};

/// A point or vector with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecQ(Vec<Rational>);

impl VecQ {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "VecQ needs at least one coordinate");
        VecQ(coords)
    }

    pub fn xy(x: Rational, y: Rational) -> Self {
        VecQ(vec![x, y])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        VecQ::new(xs.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(xs: &[BigInt]) -> Self {
        VecQ::new(xs.iter().cloned().map(big).collect())
    }

    pub fn zero(dim: usize) -> Self {
        VecQ(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn x(&self) -> &Rational {
        &self.0[0]
    }

    pub fn y(&self) -> &Rational {
        &self.0[1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &VecQ) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot of vectors of different dimension");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `self.x * other.y - self.y * other.x`.
    pub fn cross(&self, other: &VecQ) -> Rational {
        debug_assert_eq!(self.dim(), 2);
        &self.0[0] * &other.0[1] - &self.0[1] * &other.0[0]
    }

    pub fn scale(&self, s: &Rational) -> VecQ {
        VecQ(self.0.iter().map(|c| c * s).collect())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, got: self.dim() })
        }
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates; panics unless [`Self::is_integral`].
    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.0.iter().map(|c| {
            assert!(c.is_integer(), "non-integral coordinate {c}");
            c.to_integer()
        }).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }

    /// The primitive integer vector pointing the same way.
    pub fn primitive(&self) -> VecQ {
        assert!(!self.is_zero(), "zero vector has no primitive direction");
        let den = common_denominator(&self.0);
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * big(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        VecQ(ints.into_iter().map(|x| big(x / &g)).collect())
    }

    /// Returns `t` with `self = t * dir`, if any.
    pub fn ratio_to(&self, dir: &VecQ) -> Option<Rational> {
        let pivot = dir.0.iter().position(|c| !c.is_zero())?;
        let t = &self.0[pivot] / &dir.0[pivot];
        (dir.scale(&t) == *self).then_some(t)
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Add for &VecQ {
    type Output = VecQ;
    fn add(self, rhs: &VecQ) -> VecQ {
        assert_eq!(self.dim(), rhs.dim());
        VecQ(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VecQ {
    type Output = VecQ;
    fn sub(self, rhs: &VecQ) -> VecQ {
        assert_eq!(self.dim(), rhs.dim());
        VecQ(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &VecQ {
    type Output = VecQ;
    fn neg(self) -> VecQ {
        VecQ(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for VecQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for c in &self.0 {
            seq.serialize_element(&fmt_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for VecQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom("empty vector"));
        }
        raw.iter()
            .map(|v| match v {
                serde_json::Value::String(s) => parse_rational(s).map_err(serde::de::Error::custom),
                serde_json::Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
                other => Err(serde::de::Error::custom(format!("bad coordinate {other}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(VecQ)
    }
}

/// Shorthand for a rational point in the plane from `(num, den)` pairs.
pub fn pt(x: (i64, i64), y: (i64, i64)) -> VecQ {
    VecQ::xy(crate::rational::q(x.0, x.1), crate::rational::q(y.0, y.1))
}

/// Shorthand for an integer point in the plane.
pub fn ipt(x: i64, y: i64) -> VecQ {
    VecQ::from_ints(&[x, y])
}

/// A 2×2 integer matrix, row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        Mat2Z::new(rows[0][0].into(), rows[0][1].into(), rows[1][0].into(), rows[1][1].into())
    }

    /// Monodromy constructor: rejects anything outside SL(2,ℤ).
    pub fn monodromy(rows: [[i64; 2]; 2]) -> Result<Self> {
        let m = Mat2Z::from_rows(rows);
        if m.det().is_one() {
            Ok(m)
        } else {
            Err(Error::NotMonodromy(m.det().to_string()))
        }
    }

    pub fn identity() -> Self {
        Mat2Z::from_rows([[1, 0], [0, 1]])
    }

    /// The shear `v ↦ v + (d ∧ v) d` fixing the integer vector `d`.
    ///
    /// This is the affine monodromy around a single node whose eigenline is
    /// spanned by `d`; it depends on `d` only up to sign.
    pub fn transvection(d: &[BigInt]) -> Self {
        let (p, q) = (&d[0], &d[1]);
        Mat2Z::new(
            BigInt::one() - p * q,
            p * p,
            -(q * q),
            BigInt::one() + p * q,
        )
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2Z::identity()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn inverse(&self) -> Result<Mat2Z> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        // det = ±1, so dividing by det is multiplying by it
        Ok(Mat2Z::new(
            &self.d * &det,
            -&self.b * &det,
            -&self.c * &det,
            &self.a * &det,
        ))
    }

    pub fn transpose(&self) -> Mat2Z {
        Mat2Z::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// Exact `k`-th power; negative `k` needs `det = ±1`.
    pub fn pow(&self, k: i64) -> Result<Mat2Z> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2Z::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `p · self · p⁻¹`.
    pub fn conjugate_by(&self, p: &Mat2Z) -> Result<Mat2Z> {
        Ok(&(p * self) * &p.inverse()?)
    }

    pub fn apply(&self, v: &VecQ) -> VecQ {
        debug_assert_eq!(v.dim(), 2);
        let (x, y) = (v.x(), v.y());
        VecQ::xy(
            big(self.a.clone()) * x + big(self.b.clone()) * y,
            big(self.c.clone()) * x + big(self.d.clone()) * y,
        )
    }

    pub fn apply_int(&self, v: &[BigInt]) -> [BigInt; 2] {
        [&self.a * &v[0] + &self.b * &v[1], &self.c * &v[0] + &self.d * &v[1]]
    }

    pub fn rows_i64(&self) -> Option<[[i64; 2]; 2]> {
        Some([[self.a.to_i64()?, self.b.to_i64()?], [self.c.to_i64()?, self.d.to_i64()?]])
    }
}

impl Mul for &Mat2Z {
    type Output = Mat2Z;
    fn mul(self, o: &Mat2Z) -> Mat2Z {
        Mat2Z::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2Z {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::rational::serde_int::to_value;
        let v = serde_json::json!([[to_value(&self.a), to_value(&self.b)], [to_value(&self.c), to_value(&self.d)]]);
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2Z {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::rational::serde_int::from_value;
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(serde::de::Error::custom("matrix must be [[a,b],[c,d]]"));
        }
        let e = |i: usize, j: usize| from_value(&rows[i][j]).map_err(serde::de::Error::custom);
        Ok(Mat2Z::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }
}

/// Exact `k`-th power of a 2×2 integer matrix.
pub fn mat_pow(m: &Mat2Z, k: i64) -> Result<Mat2Z> {
    m.pow(k)
}

/// Strict half-space `{p : normal·p + offset > 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: VecQ,
    #[serde(with = "crate::rational::serde_q")]
    pub offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: VecQ, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn value(&self, p: &VecQ) -> Rational {
        self.normal.dot(p) + &self.offset
    }

    pub fn contains(&self, p: &VecQ) -> bool {
        self.value(p).is_positive()
    }

    /// Closed membership, expressed through the opposite strict half-space.
    pub fn contains_closed(&self, p: &VecQ) -> bool {
        !self.opposite().contains(p)
    }

    pub fn opposite(&self) -> HalfSpace {
        HalfSpace { normal: -&self.normal, offset: -&self.offset }
    }

    /// Same set, with the normal scaled to a primitive integer vector.
    pub fn normalized(&self) -> HalfSpace {
        let prim = self.normal.primitive();
        let pivot = prim.coords().iter().position(|c| !c.is_zero()).unwrap();
        let s = &prim.coords()[pivot] / &self.normal.coords()[pivot];
        HalfSpace { normal: prim, offset: &self.offset * s }
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{f : {} + f·{} > 0}}", fmt_rational(&self.offset), self.normal)
    }
}

/// A segment with optionally excluded endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub start: VecQ,
    pub end: VecQ,
    pub include_start: bool,
    pub include_end: bool,
}

impl Segment {
    pub fn new(start: VecQ, end: VecQ, include_start: bool, include_end: bool) -> Result<Self> {
        if start.dim() != end.dim() {
            return Err(Error::DimensionMismatch { expected: start.dim(), got: end.dim() });
        }
        if start == end {
            return Err(Error::DegenerateSegment);
        }
        Ok(Segment { start, end, include_start, include_end })
    }

    pub fn closed(start: VecQ, end: VecQ) -> Result<Self> {
        Segment::new(start, end, true, true)
    }

    pub fn open(start: VecQ, end: VecQ) -> Result<Self> {
        Segment::new(start, end, false, false)
    }

    pub fn displacement(&self) -> VecQ {
        &self.end - &self.start
    }

    /// `start + t (end - start)`.
    pub fn at(&self, t: &Rational) -> VecQ {
        &self.start + &self.displacement().scale(t)
    }

    /// Affine parameter of `p` if it lies in the segment (respecting the
    /// endpoint flags).
    pub fn parameter_of(&self, p: &VecQ) -> Option<Rational> {
        let t = (p - &self.start).ratio_to(&self.displacement())?;
        let lo_ok = if self.include_start { !t.is_negative() } else { t.is_positive() };
        let hi_ok = if self.include_end { t <= Rational::one() } else { t < Rational::one() };
        (lo_ok && hi_ok).then_some(t)
    }

    pub fn contains(&self, p: &VecQ) -> bool {
        self.parameter_of(p).is_some()
    }
}

/// Affine (lattice) length of a segment with rational direction.
///
/// For an integral displacement `v` this is `gcd(|v₁|, …, |vₙ|)`; rational
/// displacements scale linearly.
pub fn lattice_length(seg: &Segment) -> Result<Rational> {
    let v = seg.displacement();
    if v.is_zero() {
        return Err(Error::DegenerateSegment);
    }
    let den = common_denominator(v.coords());
    let g = v
        .coords()
        .iter()
        .map(|c| (c * big(den.clone())).to_integer())
        .fold(BigInt::zero(), |g, x| g.gcd(&x));
    Ok(Rational::new(g, den))
}

/// A strictly convex polygon with exact vertices, stored counter-clockwise
/// and starting from the lowest (then leftmost) vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalPolygon {
    vertices: Vec<VecQ>,
}

impl<'de> Deserialize<'de> for RationalPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<VecQ>,
        }
        let raw = Raw::deserialize(d)?;
        RationalPolygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

impl RationalPolygon {
    /// Validates strict convexity; clockwise input is reversed.
    pub fn new(mut vertices: Vec<VecQ>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!("{} vertices", vertices.len())));
        }
        for v in &vertices {
            v.check_dim(2)?;
        }
        if signed_area2(&vertices).is_negative() {
            vertices.reverse();
        }
        let n = vertices.len();
        // every other vertex strictly left of every edge: strict convexity,
        // no collinear triples, and a single winding
        for i in 0..n {
            let a = &vertices[i];
            let e = &vertices[(i + 1) % n] - a;
            for (j, v) in vertices.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if !e.cross(&(v - a)).is_positive() {
                    return Err(Error::InvalidPolygon("not strictly convex".into()));
                }
            }
        }
        let start = (0..n)
            .min_by(|&i, &j| {
                let (p, q) = (&vertices[i], &vertices[j]);
                p.y().cmp(q.y()).then_with(|| p.x().cmp(q.x()))
            })
            .unwrap();
        vertices.rotate_left(start);
        Ok(RationalPolygon { vertices })
    }

    pub fn from_points(points: &[(i64, i64)]) -> Result<Self> {
        RationalPolygon::new(points.iter().map(|&(x, y)| ipt(x, y)).collect())
    }

    pub fn vertices(&self) -> &[VecQ] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> &VecQ {
        &self.vertices[i % self.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        Segment::closed(self.vertex(i).clone(), self.vertex(i + 1).clone()).unwrap()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    pub fn area(&self) -> Rational {
        signed_area2(&self.vertices) / int(2)
    }

    pub fn edge_lattice_lengths(&self) -> Vec<Rational> {
        self.edges().map(|e| lattice_length(&e).unwrap()).collect()
    }

    /// Primitive integer normal of edge `i`, pointing into the polygon.
    pub fn inward_normal(&self, i: usize) -> VecQ {
        let e = &self.edge(i).displacement();
        VecQ::xy(-e.y(), e.x().clone()).primitive()
    }

    /// The affine functional `ℓ(p) = n·p + o` of edge `i`, with `n` the
    /// primitive inward normal; it vanishes on the edge and is positive inside.
    pub fn facet_functional(&self, i: usize) -> HalfSpace {
        let n = self.inward_normal(i);
        let o = -n.dot(self.vertex(i));
        HalfSpace { normal: n, offset: o }
    }

    pub fn facet_functionals(&self) -> Vec<HalfSpace> {
        (0..self.len()).map(|i| self.facet_functional(i)).collect()
    }

    pub fn contains_strict(&self, p: &VecQ) -> bool {
        self.orientation_tests(p).all(|c| c.is_positive())
    }

    pub fn contains_closed(&self, p: &VecQ) -> bool {
        self.orientation_tests(p).all(|c| !c.is_negative())
    }

    pub fn on_boundary(&self, p: &VecQ) -> bool {
        self.contains_closed(p) && !self.contains_strict(p)
    }

    fn orientation_tests<'a>(&'a self, p: &'a VecQ) -> impl Iterator<Item = Rational> + 'a {
        (0..self.len()).map(move |i| {
            let a = self.vertex(i);
            (self.vertex(i + 1) - a).cross(&(p - a))
        })
    }

    pub fn translate(&self, v: &VecQ) -> RationalPolygon {
        RationalPolygon::new(self.vertices.iter().map(|p| p + v).collect()).unwrap()
    }

    /// Scaling by a positive rational.
    pub fn scale(&self, s: &Rational) -> RationalPolygon {
        assert!(s.is_positive());
        RationalPolygon::new(self.vertices.iter().map(|p| p.scale(s)).collect()).unwrap()
    }

    pub fn centroid(&self) -> VecQ {
        let n = int(self.len() as i64);
        let sx: Rational = self.vertices.iter().map(|v| v.x().clone()).sum();
        let sy: Rational = self.vertices.iter().map(|v| v.y().clone()).sum();
        VecQ::xy(sx / &n, sy / n)
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(VecQ::is_integral)
    }

    /// Integer points in the closed polygon.
    pub fn lattice_points(&self) -> Vec<VecQ> {
        let xs = self.vertices.iter().map(|v| v.x());
        let ys = self.vertices.iter().map(|v| v.y());
        let (x0, x1) = (xs.clone().min().unwrap().floor(), xs.max().unwrap().ceil());
        let (y0, y1) = (ys.clone().min().unwrap().floor(), ys.max().unwrap().ceil());
        let mut out = Vec::new();
        let mut x = x0.clone();
        while x <= x1 {
            let mut y = y0.clone();
            while y <= y1 {
                let p = VecQ::xy(x.clone(), y.clone());
                if self.contains_closed(&p) {
                    out.push(p);
                }
                y += Rational::one();
            }
            x += Rational::one();
        }
        out
    }
}

impl fmt::Display for RationalPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn signed_area2(vs: &[VecQ]) -> Rational {
    let n = vs.len();
    (0..n).map(|i| vs[i].cross(&vs[(i + 1) % n])).sum()
}

/// Solves `a·y = α, b·y = β` for `y ∈ ℚ²`.
pub(crate) fn solve2(a: &VecQ, alpha: &Rational, b: &VecQ, beta: &Rational) -> Option<VecQ> {
    let det = a.cross(b);
    if det.is_zero() {
        return None;
    }
    let x = (alpha * b.y() - beta * a.y()) / &det;
    let y = (a.x() * beta - b.x() * alpha) / &det;
    Some(VecQ::xy(x, y))
}

/// Polar dual `center + {y : y·(v − center) ≥ −1 for every vertex v}`.
///
/// Taking the dual twice about the same center returns the input.
pub fn polar_dual(poly: &RationalPolygon, center: &VecQ) -> Result<RationalPolygon> {
    center.check_dim(2)?;
    if !poly.contains_strict(center) {
        return Err(Error::CenterNotInterior);
    }
    let minus_one = -Rational::one();
    let verts = (0..poly.len())
        .map(|i| {
            let a = poly.vertex(i) - center;
            let b = poly.vertex(i + 1) - center;
            let y = solve2(&a, &minus_one, &b, &minus_one).expect("adjacent vertices independent");
            &y + center
        })
        .collect();
    RationalPolygon::new(verts)
}

/// Applies `p ↦ m p + shift`; `m` must be unimodular. Orientation-reversing
/// maps get their vertex order re-normalized to counter-clockwise.
pub fn apply_affine(poly: &RationalPolygon, m: &Mat2Z, shift: &VecQ) -> Result<RationalPolygon> {
    if !m.is_unimodular() {
        return Err(Error::NotUnimodular(m.det().to_string()));
    }
    shift.check_dim(2)?;
    RationalPolygon::new(poly.vertices().iter().map(|v| &m.apply(v) + shift).collect())
}

/// Convex hull of a finite point set in the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hull {
    Point(VecQ),
    Segment(VecQ, VecQ),
    Polygon(RationalPolygon),
}

impl Hull {
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, Hull::Polygon(_))
    }

    pub fn polygon(&self) -> Option<&RationalPolygon> {
        match self {
            Hull::Polygon(p) => Some(p),
            _ => None,
        }
    }
}

/// Monotone-chain convex hull; collinear boundary points are dropped.
pub fn convex_hull(points: &[VecQ]) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::InvalidInput("hull of no points".into()));
    }
    let mut pts: Vec<VecQ> = points.to_vec();
    for p in &pts {
        p.check_dim(2)?;
    }
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(Hull::Point(pts.pop().unwrap()));
    }
    let turn = |o: &VecQ, a: &VecQ, b: &VecQ| (a - o).cross(&(b - o));
    let mut lower: Vec<VecQ> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<VecQ> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    match lower.len() {
        0 | 1 => unreachable!("at least two distinct points"),
        2 => Ok(Hull::Segment(lower[0].clone(), lower[1].clone())),
        _ => Ok(Hull::Polygon(RationalPolygon::new(lower)?)),
    }
}

/// Clips a convex vertex loop by the closed side of a half-space
/// (Sutherland–Hodgman, exact).
pub fn clip_by_halfspace(loop_: &[VecQ], h: &HalfSpace) -> Vec<VecQ> {
    let n = loop_.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (p, q) = (&loop_[i], &loop_[(i + 1) % n]);
        let (vp, vq) = (h.value(p), h.value(q));
        if !vp.is_negative() {
            out.push(p.clone());
        }
        if (vp.is_positive() && vq.is_negative()) || (vp.is_negative() && vq.is_positive()) {
            let t = &vp / (&vp - &vq);
            out.push(p + &(q - p).scale(&t));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Closure of a bounded intersection of strict half-planes, clipped to
/// `window` first. Returns `None` if it has empty interior.
pub fn halfplane_polygon(halfspaces: &[HalfSpace], window: &RationalPolygon) -> Option<RationalPolygon> {
    let mut loop_: Vec<VecQ> = window.vertices().to_vec();
    for h in halfspaces {
        loop_ = clip_by_halfspace(&loop_, h);
        if loop_.len() < 3 {
            return None;
        }
    }
    // drop collinear vertices introduced by clipping
    let n = loop_.len();
    let kept: Vec<VecQ> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (&loop_[(i + n - 1) % n], &loop_[i], &loop_[(i + 1) % n]);
            !(b - a).cross(&(c - b)).is_zero()
        })
        .map(|i| loop_[i].clone())
        .collect();
    RationalPolygon::new(kept).ok()
}

/// Axis-aligned box as a polygon.
pub fn window_polygon(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Result<RationalPolygon> {
    if x0 >= x1 || y0 >= y1 {
        return Err(Error::InvalidInput("empty window".into()));
    }
    RationalPolygon::new(vec![
        VecQ::xy(x0.clone(), y0.clone()),
        VecQ::xy(x1.clone(), y0.clone()),
        VecQ::xy(x1.clone(), y1.clone()),
        VecQ::xy(x0.clone(), y1.clone()),
    ])
}

/// Result of [`sl2z_normal_form`] and [`unimodular_normal_form`]: the
/// canonical polygon and the map `p ↦ matrix·p + shift` taking the input
/// onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub polygon: RationalPolygon,
    pub matrix: Mat2Z,
    pub shift: VecQ,
}

/// Canonical representative of the orbit of `poly` under SL(2,ℤ) ⋉ ℚ².
///
/// For every choice of starting vertex the polygon is moved so that the
/// starting vertex sits at the origin, the outgoing edge runs along the
/// positive x-axis, and the incoming edge direction `(x, y)` satisfies
/// `0 ≤ x < y` (this pins down the residual shear). The lexicographically
/// smallest vertex list over all starting vertices wins.
pub fn sl2z_normal_form(poly: &RationalPolygon) -> NormalForm {
    normal_form_with(poly, false)
}

/// Like [`sl2z_normal_form`] but over GL(2,ℤ) ⋉ ℚ²: mirror images share a
/// normal form.
pub fn unimodular_normal_form(poly: &RationalPolygon) -> NormalForm {
    normal_form_with(poly, true)
}

fn normal_form_with(poly: &RationalPolygon, mirrors: bool) -> NormalForm {
    let mut best: Option<(Vec<VecQ>, Mat2Z, VecQ)> = None;
    let flips: &[Mat2Z] = if mirrors {
        &[Mat2Z { a: 1.into(), b: 0.into(), c: 0.into(), d: 1.into() }, Mat2Z { a: 0.into(), b: 1.into(), c: 1.into(), d: 0.into() }]
    } else {
        &[Mat2Z { a: 1.into(), b: 0.into(), c: 0.into(), d: 1.into() }]
    };
    for pre in flips {
        let q = apply_affine(poly, pre, &VecQ::zero(2)).unwrap();
        let n = q.len();
        for i in 0..n {
            let origin = q.vertex(i);
            let u = (q.vertex(i + 1) - origin).primitive().to_bigints();
            let eg = u[0].extended_gcd(&u[1]);
            debug_assert!(eg.gcd.is_one());
            let g = Mat2Z::new(eg.x.clone(), eg.y.clone(), -u[1].clone(), u[0].clone());
            let w = g.apply(&(q.vertex(i + n - 1) - origin));
            let k = -(w.x() / w.y()).floor().to_integer();
            let shear = Mat2Z::new(BigInt::one(), k, BigInt::zero(), BigInt::one());
            let m = &shear * &g;
            let verts: Vec<VecQ> = (0..n).map(|j| m.apply(&(q.vertex(i + j) - origin))).collect();
            let better = match &best {
                None => true,
                Some((b, ..)) => cmp_vertex_lists(&verts, b) == Ordering::Less,
            };
            if better {
                let shift = -&m.apply(origin);
                best = Some((verts, &m * pre, shift));
            }
        }
    }
    let (verts, matrix, shift) = best.unwrap();
    NormalForm { polygon: RationalPolygon::new(verts).unwrap(), matrix, shift }
}

fn cmp_vertex_lists(a: &[VecQ], b: &[VecQ]) -> Ordering {
    a.iter().cmp(b.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tri() -> RationalPolygon {
        RationalPolygon::from_points(&[(-1, -1), (2, -1), (-1, 2)]).unwrap()
    }

    #[test]
    fn mat_pow_examples() {
        let m = Mat2Z::from_rows([[0, 1], [-1, 2]]);
        assert_eq!(mat_pow(&m, 1).unwrap(), m);
        assert_eq!(mat_pow(&m, 3).unwrap(), Mat2Z::from_rows([[-2, 3], [-3, 4]]));
        assert_eq!(mat_pow(&m, -2).unwrap(), Mat2Z::from_rows([[3, -2], [2, -1]]));
        assert_eq!(mat_pow(&m, 0).unwrap(), Mat2Z::identity());
    }

    #[test]
    fn mat_pow_negative_needs_unimodular() {
        let m = Mat2Z::from_rows([[2, 0], [0, 1]]);
        assert!(matches!(mat_pow(&m, -1), Err(Error::NotUnimodular(_))));
        assert_eq!(mat_pow(&m, 3).unwrap(), Mat2Z::from_rows([[8, 0], [0, 1]]));
    }

    #[test]
    fn monodromy_rejects_det_not_one() {
        assert!(Mat2Z::monodromy([[0, 1], [1, 0]]).is_err());
        assert!(Mat2Z::monodromy([[2, -1], [1, 0]]).is_ok());
    }

    #[test]
    fn transvection_fixes_direction() {
        let d = [BigInt::from(-2), BigInt::from(1)];
        let t = Mat2Z::transvection(&d);
        assert_eq!(t, Mat2Z::from_rows([[3, 4], [-1, -1]]));
        assert_eq!(t.apply_int(&d), d);
    }

    #[test]
    fn polar_dual_triangle() {
        let d = polar_dual(&tri(), &ipt(0, 0)).unwrap();
        let expect = RationalPolygon::from_points(&[(1, 0), (0, 1), (-1, -1)]).unwrap();
        assert_eq!(d, expect);
        assert_eq!(polar_dual(&d, &ipt(0, 0)).unwrap(), tri());
    }

    #[test]
    fn polar_dual_square() {
        let sq = RationalPolygon::from_points(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]).unwrap();
        let d = polar_dual(&sq, &ipt(0, 0)).unwrap();
        assert_eq!(d, RationalPolygon::from_points(&[(1, 0), (0, 1), (-1, 0), (0, -1)]).unwrap());
    }

    #[test]
    fn polar_dual_needs_interior_center() {
        assert_eq!(polar_dual(&tri(), &ipt(-1, -1)), Err(Error::CenterNotInterior));
        assert_eq!(polar_dual(&tri(), &ipt(5, 5)), Err(Error::CenterNotInterior));
    }

    #[test]
    fn lattice_length_examples() {
        let l = |a: VecQ, b: VecQ| lattice_length(&Segment::closed(a, b).unwrap()).unwrap();
        assert_eq!(l(ipt(0, 0), ipt(3, 0)), int(3));
        assert_eq!(l(ipt(0, 0), ipt(2, 4)), int(2));
        assert_eq!(l(ipt(0, 0), pt((1, 3), (1, 3))), q(1, 3));
        assert_eq!(Segment::closed(ipt(1, 1), ipt(1, 1)), Err(Error::DegenerateSegment));
    }

    #[test]
    fn apply_affine_examples() {
        let t = RationalPolygon::from_points(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(apply_affine(&t, &Mat2Z::identity(), &ipt(0, 0)).unwrap(), t);
        let sheared = apply_affine(&t, &Mat2Z::from_rows([[1, 1], [0, 1]]), &ipt(0, 0)).unwrap();
        assert_eq!(sheared, RationalPolygon::from_points(&[(0, 0), (1, 0), (1, 1)]).unwrap());
        let m = Mat2Z::from_rows([[2, 1], [1, 1]]);
        let img = apply_affine(&t, &m, &ipt(0, 0)).unwrap();
        let mut a = t.edge_lattice_lengths();
        let mut b = img.edge_lattice_lengths();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(apply_affine(&t, &Mat2Z::from_rows([[2, 0], [0, 1]]), &ipt(0, 0)).is_err());
    }

    #[test]
    fn reflection_renormalizes_orientation() {
        let t = RationalPolygon::from_points(&[(0, 0), (2, 0), (0, 1)]).unwrap();
        let r = apply_affine(&t, &Mat2Z::from_rows([[0, 1], [1, 0]]), &ipt(0, 0)).unwrap();
        assert!(r.area().is_positive());
        assert_eq!(r.area(), t.area());
    }

    #[test]
    fn polygon_validation() {
        assert!(RationalPolygon::from_points(&[(0, 0), (1, 0), (2, 0)]).is_err());
        assert!(RationalPolygon::from_points(&[(0, 0), (1, 0), (2, 0), (0, 1)]).is_err());
        assert!(RationalPolygon::from_points(&[(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)]).is_err());
        let cw = RationalPolygon::from_points(&[(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(cw.area().is_positive());
    }

    #[test]
    fn hull_degenerate_cases() {
        assert_eq!(convex_hull(&[ipt(0, 0)]).unwrap(), Hull::Point(ipt(0, 0)));
        let h = convex_hull(&[ipt(0, -1), ipt(2, -1), ipt(1, -1)]).unwrap();
        assert_eq!(h, Hull::Segment(ipt(0, -1), ipt(2, -1)));
        let h = convex_hull(&[ipt(1, 0), ipt(0, 1), ipt(-1, -1), ipt(0, 0)]).unwrap();
        assert_eq!(h.polygon().unwrap().len(), 3);
    }

    #[test]
    fn normal_form_is_affine_invariant() {
        let t = tri();
        let m = Mat2Z::from_rows([[5, 2], [2, 1]]);
        let moved = apply_affine(&t, &m, &pt((1, 7), (-3, 2))).unwrap();
        assert_eq!(sl2z_normal_form(&t).polygon, sl2z_normal_form(&moved).polygon);
        let nf = sl2z_normal_form(&t);
        assert_eq!(nf.polygon.vertex(0), &ipt(0, 0));
        assert_eq!(apply_affine(&t, &nf.matrix, &nf.shift).unwrap(), nf.polygon);
    }

    #[test]
    fn unimodular_normal_form_identifies_mirrors() {
        let t = RationalPolygon::from_points(&[(0, 0), (3, 0), (1, 2)]).unwrap();
        let r = apply_affine(&t, &Mat2Z::from_rows([[-1, 0], [0, 1]]), &ipt(0, 0)).unwrap();
        assert_eq!(unimodular_normal_form(&t).polygon, unimodular_normal_form(&r).polygon);
        let nf = unimodular_normal_form(&r);
        assert_eq!(apply_affine(&r, &nf.matrix, &nf.shift).unwrap(), nf.polygon);
    }

    #[test]
    fn halfspace_closed_via_opposite() {
        let h = HalfSpace::new(ipt(1, 0), int(0)).unwrap();
        assert!(!h.contains(&ipt(0, 5)));
        assert!(h.contains_closed(&ipt(0, 5)));
        assert!(!h.contains_closed(&ipt(-1, 5)));
        assert!(HalfSpace::new(ipt(0, 0), int(1)).is_err());
    }

    #[test]
    fn halfplane_polygon_recovers_triangle() {
        let t = tri();
        let w = window_polygon(&int(-10), &int(-10), &int(10), &int(10)).unwrap();
        assert_eq!(halfplane_polygon(&t.facet_functionals(), &w).unwrap(), t);
    }
}
