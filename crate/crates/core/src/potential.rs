//! Laurent polynomials with integer coefficients, their combinatorial
//! mutation, Newton polygons and edge coefficient profiles.
//!
//! The potential of the monotone fibre of a Markov diagram is kept in the
//! same lattice as the diagram, with the monotone point as origin: its
//! Newton polygon is then exactly the polar dual of the centred moment
//! triangle scaled by `1 / height`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::atf::ATFDiagram;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, lattice_length, Hull, Mat2Z, RationalPolygon, Segment, VecQ};
use crate::markov::{path_to_root, MarkovTriple};
use crate::rational::{int, Rational};

/// A Laurent polynomial in `n` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        LaurentPoly::monomial(vec![0; dim], BigInt::one())
    }

    pub fn monomial(exp: Vec<i64>, coeff: BigInt) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, i64)>) -> Self {
        let mut p = LaurentPoly::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim);
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, exp: Vec<i64>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.dim])
    }

    /// Value at `(1, …, 1)`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `xᵉ ↦ x^{m e}` (exponents are column vectors).
    pub fn transform(&self, m: &Mat2Z) -> LaurentPoly {
        assert_eq!(self.dim, 2);
        let mut out = LaurentPoly::zero(2);
        for (e, c) in &self.terms {
            let [a, b] = m.apply_int(&[BigInt::from(e[0]), BigInt::from(e[1])]);
            out.add_term(vec![a.to_i64().unwrap(), b.to_i64().unwrap()], c.clone());
        }
        out
    }

    pub fn exponents(&self) -> Vec<VecQ> {
        self.terms.keys().map(|e| VecQ::from_ints(e)).collect()
    }

    fn var_names(dim: usize) -> Vec<String> {
        match dim {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            n => (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Parses the format produced by `Display`, e.g. `x + 2 * x^-2 - y^3`.
    pub fn parse(s: &str, dim: usize) -> Result<LaurentPoly> {
        let names = LaurentPoly::var_names(dim);
        let mut out = LaurentPoly::zero(dim);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // split at + / - not following '^'
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev = ' ';
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != '^' && !cur.is_empty() {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = ch;
        }
        pieces.push(cur);
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1, rest.to_string()),
                None => (1, piece.trim_start_matches('+').to_string()),
            };
            if body == "0" {
                continue;
            }
            let mut coeff = BigInt::from(sign);
            let mut exp = vec![0i64; dim];
            for factor in body.split('*').filter(|f| !f.is_empty()) {
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    coeff *= factor.parse::<BigInt>().unwrap();
                    continue;
                }
                // a run of monomials like x^2y^-1
                let mut rest = factor;
                while !rest.is_empty() {
                    let (idx, name) = names
                        .iter()
                        .enumerate()
                        .filter(|(_, n)| rest.starts_with(n.as_str()))
                        .max_by_key(|(_, n)| n.len())
                        .ok_or_else(|| Error::Parse(format!("unexpected {rest:?}")))?;
                    rest = &rest[name.len()..];
                    let mut e = 1i64;
                    if let Some(r) = rest.strip_prefix('^') {
                        let end = r
                            .char_indices()
                            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                            .map(|(i, _)| i)
                            .unwrap_or(r.len());
                        e = r[..end].parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        rest = &r[end..];
                    }
                    exp[idx] += e;
                }
            }
            out.add_term(exp, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms sorted lexicographically by exponent, as `c * x^i y^j`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = LaurentPoly::var_names(self.dim);
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join(" "),
                (false, false) => format!("{mag} * {}", mono.join(" ")),
            };
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, rhs.dim);
        let mut out = LaurentPoly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// `x + y + x⁻¹y⁻¹`.
pub fn clifford_potential() -> LaurentPoly {
    LaurentPoly::from_terms(2, [(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, -1], 1)])
}

/// Data of a combinatorial mutation: a primitive weight `w` and a factor
/// `f` supported on `w^⊥` with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationStep {
    w: Vec<i64>,
    f: LaurentPoly,
}

impl MutationStep {
    pub fn new(w: Vec<i64>, f: LaurentPoly) -> Result<Self> {
        if w.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: w.len() });
        }
        if w.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
            return Err(Error::InvalidInput("weight must be primitive".into()));
        }
        if !f.constant_term().is_one() {
            return Err(Error::InvalidInput("factor must have constant term 1".into()));
        }
        if f.terms().keys().any(|e| dot(&w, e) != 0) {
            return Err(Error::InvalidInput("factor must be supported on the kernel of the weight".into()));
        }
        Ok(MutationStep { w, f })
    }

    /// Weight `w` and factor `1 + x^v`.
    pub fn binomial(w: Vec<i64>, v: Vec<i64>) -> Result<Self> {
        let dim = v.len();
        let f = &LaurentPoly::one(dim) + &LaurentPoly::monomial(v, BigInt::one());
        MutationStep::new(w, f)
    }

    pub fn weight(&self) -> &[i64] {
        &self.w
    }

    pub fn factor(&self) -> &LaurentPoly {
        &self.f
    }

    /// Same factor, opposite weight: undoes the mutation.
    pub fn inverse(&self) -> MutationStep {
        MutationStep { w: self.w.iter().map(|x| -x).collect(), f: self.f.clone() }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `W ↦ Σ_h W_h · f^h`, splitting `W` by the height `h = ⟨w, e⟩`.
///
/// Negative heights need exact division by `f^{|h|}`; if that fails the
/// potential is not mutable along `w`.
pub fn mutate_potential(w_poly: &LaurentPoly, step: &MutationStep) -> Result<LaurentPoly> {
    if w_poly.dim() != step.f.dim() {
        return Err(Error::DimensionMismatch { expected: step.f.dim(), got: w_poly.dim() });
    }
    let mut slices: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (e, c) in w_poly.terms() {
        slices
            .entry(dot(&step.w, e))
            .or_insert_with(|| LaurentPoly::zero(w_poly.dim()))
            .add_term(e.clone(), c.clone());
    }
    let mut out = LaurentPoly::zero(w_poly.dim());
    for (h, slice) in slices {
        let part = if h >= 0 {
            &slice * &step.f.pow(h as u32)
        } else {
            exact_divide(&slice, &step.f.pow(h.unsigned_abs() as u32)).ok_or_else(|| {
                Error::NotMutable(format!("w = {:?}, slice at height {h} is not divisible", step.w))
            })?
        };
        out = &out + &part;
    }
    Ok(out)
}

/// Exact quotient `p / g` where `g` has constant term 1 and is supported on
/// a line through the origin.
pub fn exact_divide(p: &LaurentPoly, g: &LaurentPoly) -> Option<LaurentPoly> {
    if g.terms().len() == 1 {
        return g.constant_term().is_one().then(|| p.clone());
    }
    // g = Σ c_j t^j with t = x^v, v primitive along the support
    let dim = g.dim();
    let support: Vec<&Vec<i64>> = g.terms().keys().filter(|e| e.iter().any(|x| *x != 0)).collect();
    let first = support[0];
    let gcd = first.iter().fold(0i64, |a, x| a.gcd(x));
    let mut v: Vec<i64> = first.iter().map(|x| x / gcd).collect();
    let phi = unit_functional(&v)?;
    let mut g_coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (e, c) in g.terms() {
        let m = dot(&phi, e);
        if (0..dim).any(|i| e[i] != m * v[i]) {
            return None;
        }
        g_coeffs.insert(m, c.clone());
    }
    // normalise so that g has only non-negative powers of t
    if g_coeffs.keys().next().copied().unwrap_or(0) < 0 {
        v = v.iter().map(|x| -x).collect();
        g_coeffs = g_coeffs.into_iter().map(|(m, c)| (-m, c)).collect();
    }
    let phi = unit_functional(&v)?;
    if g_coeffs.keys().next() != Some(&0) {
        return None;
    }
    let deg = *g_coeffs.keys().last().unwrap();
    let gv: Vec<BigInt> = (0..=deg).map(|j| g_coeffs.get(&j).cloned().unwrap_or_else(BigInt::zero)).collect();

    // group p by cosets of ℤ v
    let mut cosets: BTreeMap<Vec<i64>, BTreeMap<i64, BigInt>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let m = dot(&phi, e);
        let base: Vec<i64> = (0..dim).map(|i| e[i] - m * v[i]).collect();
        cosets.entry(base).or_default().insert(m, c.clone());
    }
    let mut out = LaurentPoly::zero(dim);
    for (base, poly) in cosets {
        let lo = *poly.keys().next().unwrap();
        let hi = *poly.keys().last().unwrap();
        if hi - lo < deg {
            return None;
        }
        let pc: Vec<BigInt> = (lo..=hi).map(|m| poly.get(&m).cloned().unwrap_or_else(BigInt::zero)).collect();
        let qlen = (hi - lo - deg + 1) as usize;
        let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
        for i in 0..pc.len() {
            let mut acc = pc[i].clone();
            for j in 1..=deg as usize {
                if j <= i && i - j < q.len() {
                    acc -= &gv[j] * &q[i - j];
                }
            }
            if i < qlen {
                q.push(acc);
            } else if !acc.is_zero() {
                return None;
            }
        }
        for (i, c) in q.into_iter().enumerate() {
            let m = lo + i as i64;
            out.add_term((0..dim).map(|k| base[k] + m * v[k]).collect(), c);
        }
    }
    Some(out)
}

/// An integer functional `φ` with `φ(v) = 1` for primitive `v`.
fn unit_functional(v: &[i64]) -> Option<Vec<i64>> {
    // iterated extended gcd
    let mut phi = vec![0i64; v.len()];
    let mut g = 0i64;
    for (i, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if g == 0 {
            g = x;
            phi[i] = 1;
            continue;
        }
        let eg = g.extended_gcd(&x);
        for p in phi.iter_mut() {
            *p *= eg.x;
        }
        phi[i] = eg.y;
        g = eg.gcd;
    }
    match g {
        1 => Some(phi),
        -1 => Some(phi.into_iter().map(|p| -p).collect()),
        _ => None,
    }
}

/// Convex hull of the exponents; degenerate hulls are reported as such.
pub fn newton_polytope(w: &LaurentPoly) -> Result<Hull> {
    if w.is_zero() {
        return Err(Error::InvalidInput("zero polynomial has no Newton polytope".into()));
    }
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: w.dim() });
    }
    convex_hull(&w.exponents())
}

fn newton_polygon(w: &LaurentPoly) -> Result<RationalPolygon> {
    newton_polytope(w)?
        .polygon()
        .cloned()
        .ok_or_else(|| Error::InvalidPolygon("degenerate Newton polytope".into()))
}

/// Coefficients at the lattice points of an edge of the Newton polygon, in
/// order from `edge.start` to `edge.end`, zeros included.
pub fn edge_profile(w: &LaurentPoly, edge: &Segment) -> Result<Vec<BigInt>> {
    let poly = newton_polygon(w)?;
    let is_edge = poly.edges().any(|e| {
        (e.start == edge.start && e.end == edge.end) || (e.start == edge.end && e.end == edge.start)
    });
    if !is_edge {
        return Err(Error::NotAnEdge);
    }
    let len = lattice_length(edge)?.to_integer().to_i64().unwrap();
    let step = edge.displacement().scale(&Rational::new(BigInt::one(), BigInt::from(len)));
    Ok((0..=len)
        .map(|j| {
            let p = &edge.start + &step.scale(&int(j));
            let e: Vec<i64> = p.to_bigints().iter().map(|x| x.to_i64().unwrap()).collect();
            w.coeff(&e)
        })
        .collect())
}

/// A vertex or edge of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face {
    Vertex(VecQ),
    Edge(Segment),
}

/// Lowest-area disk count at the fibre dual to `face`: the coefficient at
/// a vertex, the sum of the edge profile on an edge.
pub fn xi2_at_dual_position(w: &LaurentPoly, face: &Face) -> Result<BigInt> {
    match face {
        Face::Vertex(v) => {
            let poly = newton_polygon(w)?;
            if !poly.vertices().contains(v) {
                return Err(Error::InvalidInput(format!("{v} is not a vertex of the Newton polygon")));
            }
            let e: Vec<i64> = v.to_bigints().iter().map(|x| x.to_i64().unwrap()).collect();
            Ok(w.coeff(&e))
        }
        Face::Edge(s) => Ok(edge_profile(w, s)?.into_iter().sum()),
    }
}

/// Constant terms of `W^k` for `k = 0..=max_k` (the first period
/// coefficients, invariant under mutation).
pub fn period_sequence(w: &LaurentPoly, max_k: u32) -> Vec<BigInt> {
    // CT(W^k) = Σ_e [W^⌈k/2⌉]_e · [W^⌊k/2⌋]_{-e}
    let mut powers = vec![LaurentPoly::one(w.dim())];
    for _ in 0..max_k.div_ceil(2) {
        let next = powers.last().unwrap() * w;
        powers.push(next);
    }
    (0..=max_k as usize)
        .map(|k| {
            let (hi, lo) = (&powers[k.div_ceil(2)], &powers[k / 2]);
            hi.terms()
                .iter()
                .map(|(e, c)| {
                    let neg: Vec<i64> = e.iter().map(|x| -x).collect();
                    c * lo.coeff(&neg)
                })
                .sum()
        })
        .collect()
}

/// The mutation step matching the diagram mutation at corner `vertex` of
/// `d`, for potentials written in `d`'s lattice with the monotone point as
/// origin.
///
/// The weight is minus the cut direction; the factor is `1 + x^v` with `v`
/// running along the Newton edge dual to the corner, from the normal of
/// the side entering the corner to the normal of the side leaving it.
pub fn diagram_mutation_step(d: &ATFDiagram, vertex: usize) -> Result<MutationStep> {
    let node = d.node(vertex).ok_or(Error::UnarmedVertex(vertex))?;
    let tri = d.triangle();
    let out_normal = tri.inward_normal(vertex);
    let in_normal = tri.inward_normal(vertex + 2);
    let v = (&out_normal - &in_normal).primitive();
    let to_i64 = |x: &VecQ| -> Vec<i64> { x.to_bigints().iter().map(|c| c.to_i64().unwrap()).collect() };
    let w: Vec<i64> = to_i64(&node.cut_direction).into_iter().map(|c| -c).collect();
    MutationStep::binomial(w, to_i64(&v))
}

/// The Newton edge dual to corner `vertex` of `d`: from the inward normal of
/// the side entering the corner to that of the side leaving it.
pub fn dual_edge(d: &ATFDiagram, vertex: usize) -> Segment {
    let tri = d.triangle();
    Segment::closed(tri.inward_normal(vertex + 2), tri.inward_normal(vertex)).unwrap()
}

/// Diagram of `t` (all corners armed) together with its monotone
/// potential in the same chart, reached from the Clifford seed along the
/// descent path.
pub fn potential_for(t: &MarkovTriple, slide: Rational) -> Result<(ATFDiagram, LaurentPoly)> {
    let mut path = path_to_root(t);
    path.reverse();
    let mut d = ATFDiagram::standard().arm_all(slide)?;
    let mut w = clifford_potential();
    for next in &path[1..] {
        let pos = (0..3).find(|&p| &d.triple().mutate(p) == next).unwrap();
        let vertex = d.vertex_with_label(&d.triple().entries()[pos]).unwrap();
        (d, w) = mutate_pair(&d, &w, vertex)?;
    }
    Ok((d, w))
}

/// Mutates a diagram and its potential together at corner `vertex`.
pub fn mutate_pair(d: &ATFDiagram, w: &LaurentPoly, vertex: usize) -> Result<(ATFDiagram, LaurentPoly)> {
    let w = mutate_potential(w, &diagram_mutation_step(d, vertex)?)?;
    Ok((d.mutate(vertex)?, w))
}

/// `height · dual(Newton(W))` moved back by `center`: the moment polygon
/// predicted by the potential.
pub fn predicted_moment_polygon(w: &LaurentPoly, height: &Rational, center: &VecQ) -> Result<RationalPolygon> {
    let dual = crate::geometry::polar_dual(&newton_polygon(w)?, &VecQ::zero(2))?;
    Ok(dual.scale(height).translate(center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ipt, unimodular_normal_form};
    use crate::rational::q;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn display_and_parse() {
        let w = clifford_potential();
        assert_eq!(w.to_string(), "x^-1 y^-1 + y + x");
        assert_eq!(LaurentPoly::parse(&w.to_string(), 2).unwrap(), w);
        let p = LaurentPoly::parse("2 * x^-2 - 3 + x^3 y^-1", 2).unwrap();
        assert_eq!(p.coeff(&[-2, 0]), BigInt::from(2));
        assert_eq!(p.constant_term(), BigInt::from(-3));
        assert_eq!(LaurentPoly::parse(&p.to_string(), 2).unwrap(), p);
    }

    #[test]
    fn newton_examples() {
        let n = newton_polytope(&clifford_potential()).unwrap();
        assert_eq!(n.polygon().unwrap(), &RationalPolygon::from_points(&[(1, 0), (0, 1), (-1, -1)]).unwrap());
        assert_eq!(newton_polytope(&LaurentPoly::one(2)).unwrap(), Hull::Point(ipt(0, 0)));
        let sq = LaurentPoly::parse("y^-1 + 2 * x y^-1 + x^2 y^-1", 2).unwrap();
        assert_eq!(newton_polytope(&sq).unwrap(), Hull::Segment(ipt(0, -1), ipt(2, -1)));
        assert!(newton_polytope(&LaurentPoly::zero(2)).is_err());
    }

    #[test]
    fn clifford_dual_is_moment_triangle() {
        let dual = predicted_moment_polygon(&clifford_potential(), &q(1, 3), &crate::geometry::pt((1, 3), (1, 3))).unwrap();
        assert_eq!(dual, RationalPolygon::from_points(&[(0, 0), (1, 0), (0, 1)]).unwrap());
    }

    #[test]
    fn first_mutation_by_hand() {
        let step = MutationStep::binomial(vec![-1, -1], vec![-1, 1]).unwrap();
        let w = mutate_potential(&clifford_potential(), &step).unwrap();
        assert_eq!(w, LaurentPoly::parse("x + x^-1 y^-1 + 2 * x^-2 + x^-3 y", 2).unwrap());
        let back = mutate_potential(&w, &step.inverse()).unwrap();
        assert_eq!(back, clifford_potential());
        assert_eq!(period_sequence(&w, 6), period_sequence(&clifford_potential(), 6));
    }

    #[test]
    fn wrong_direction_is_rejected() {
        let step = MutationStep::binomial(vec![0, 1], vec![1, 0]).unwrap();
        let w = LaurentPoly::parse("x^-1 y^-1 + y + x", 2).unwrap();
        assert!(matches!(mutate_potential(&w, &step), Err(Error::NotMutable(_))));
        assert!(MutationStep::binomial(vec![1, 1], vec![1, 0]).is_err());
    }

    #[test]
    fn chain_profiles() {
        let t = MarkovTriple::from_u64(1, 2, 5).unwrap();
        let (d, w) = potential_for(&t, q(1, 10)).unwrap();
        let five = d.vertex_with_label(&BigInt::from(5)).unwrap();
        assert_eq!(edge_profile(&w, &dual_edge(&d, five)).unwrap(), b(&[1, 5, 10, 10, 5, 1]));
        assert_eq!(xi2_at_dual_position(&w, &Face::Edge(dual_edge(&d, five))).unwrap(), BigInt::from(32));
        let pred = predicted_moment_polygon(&w, &d.monotone_height(), &d.barycentre()).unwrap();
        assert_eq!(unimodular_normal_form(&pred).polygon, unimodular_normal_form(d.triangle()).polygon);
    }

    #[test]
    fn duality_on_all_edges_small() {
        let tree = crate::markov::enumerate_tree_u64(29).unwrap();
        for t in &tree.nodes {
            let (d, w) = potential_for(t, q(1, 10)).unwrap();
            for v in 0..3 {
                let (d2, w2) = mutate_pair(&d, &w, v).unwrap();
                let pred = predicted_moment_polygon(&w2, &d2.monotone_height(), &d2.barycentre()).unwrap();
                assert_eq!(pred, *d2.triangle(), "{t} at corner {v}");
                if d2.triple().largest() <= &BigInt::from(29) {
                    assert_eq!(period_sequence(&w2, 6), period_sequence(&w, 6));
                }
            }
        }
    }

    #[test]
    fn clifford_faces() {
        let w = clifford_potential();
        let e = Segment::closed(ipt(1, 0), ipt(0, 1)).unwrap();
        assert_eq!(edge_profile(&w, &e).unwrap(), b(&[1, 1]));
        assert_eq!(xi2_at_dual_position(&w, &Face::Vertex(ipt(1, 0))).unwrap(), BigInt::one());
        let not_edge = Segment::closed(ipt(1, 0), ipt(0, 0)).unwrap();
        assert_eq!(edge_profile(&w, &not_edge), Err(Error::NotAnEdge));
    }

    #[test]
    fn exact_division() {
        let f = LaurentPoly::parse("1 + x y^-1", 2).unwrap();
        let p = &f.pow(3) * &LaurentPoly::parse("x^2 - 7 * y^-3", 2).unwrap();
        let qt = exact_divide(&p, &f.pow(3)).unwrap();
        assert_eq!(qt, LaurentPoly::parse("x^2 - 7 * y^-3", 2).unwrap());
        assert!(exact_divide(&LaurentPoly::parse("x + 2", 2).unwrap(), &f).is_none());
    }
}
