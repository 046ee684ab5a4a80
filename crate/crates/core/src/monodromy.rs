//! Monodromy groups: the generators coming from the three nodes of the
//! projective plane, the two-generator groups `G_k = ⟨t, h_k⟩`, the
//! hyperbolic-area lattice test for `G_k`, and exact orbit exploration of
//! polygons under a finitely generated subgroup of SL(2,ℤ).

use std::collections::HashSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{HalfSpace, Mat2Z, RationalPolygon, VecQ};
use crate::rational::{big, common_denominator, fmt_rational, Rational};

/// Generators of a subgroup of SL(2,ℤ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatGroupGen {
    generators: Vec<Mat2Z>,
    names: Vec<String>,
}

impl MatGroupGen {
    pub fn new(generators: Vec<Mat2Z>, names: Option<Vec<String>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one generator".into()));
        }
        if let Some(bad) = generators.iter().find(|g| !g.det().is_one()) {
            return Err(Error::NotMonodromy(bad.det().to_string()));
        }
        let names = match names {
            Some(n) if n.len() == generators.len() => n,
            Some(_) => return Err(Error::InvalidInput("one name per generator".into())),
            None => (1..=generators.len()).map(|i| format!("g{i}")).collect(),
        };
        Ok(MatGroupGen { generators, names })
    }

    pub fn generators(&self) -> &[Mat2Z] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Generators followed by their inverses; letter `i + n` inverts letter `i`.
    pub fn alphabet(&self) -> Vec<Mat2Z> {
        let mut out = self.generators.clone();
        out.extend(self.generators.iter().map(|g| g.inverse().unwrap()));
        out
    }

    /// The conjugate generating set `p g p⁻¹`.
    pub fn conjugate_by(&self, p: &Mat2Z) -> Result<MatGroupGen> {
        let gens = self.generators.iter().map(|g| g.conjugate_by(p)).collect::<Result<Vec<_>>>()?;
        MatGroupGen::new(gens, Some(self.names.clone()))
    }
}

/// Monodromies `M₁, M₂, M₃` around the nodes of the projective plane after
/// nodal trades at the corners `(0,0)`, `(0,1)`, `(1,0)` of the standard
/// moment triangle.
pub fn cp2_generators() -> MatGroupGen {
    MatGroupGen::new(
        vec![
            Mat2Z::from_rows([[0, 1], [-1, 2]]),
            Mat2Z::from_rows([[3, 1], [-4, -1]]),
            Mat2Z::from_rows([[3, 4], [-1, -1]]),
        ],
        Some(vec!["M1".into(), "M2".into(), "M3".into()]),
    )
    .unwrap()
}

/// The conjugator `P` putting `M₁` into upper-triangular unipotent form.
pub fn cp2_conjugator() -> Mat2Z {
    Mat2Z::from_rows([[0, 1], [-1, 1]])
}

/// `t = [[1,1],[0,1]]` and `h_k = [[1,0],[k,1]]`.
pub fn gk_generators(k: i64) -> MatGroupGen {
    MatGroupGen::new(
        vec![Mat2Z::from_rows([[1, 1], [0, 1]]), Mat2Z::from_rows([[1, 0], [k, 1]])],
        Some(vec!["t".into(), format!("h{k}")]),
    )
    .unwrap()
}

/// Conjugacy representative `[[1,0],[k,1]]` of the total boundary monodromy
/// of a surface with `K² = k`.
pub fn boundary_monodromy(k_x_squared: i64) -> Mat2Z {
    Mat2Z::from_rows([[1, 0], [k_x_squared, 1]])
}

/// Outcome of [`lattice_test`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeVerdict {
    pub k: i64,
    /// `2(arcsin(k/2 − 1) + π/2)`, or `None` for infinite area.
    pub closed_form_area: Option<f64>,
    /// Symbolic form of the closed-form area.
    pub closed_form: String,
    /// Numerically integrated area; `f64::INFINITY` when divergent.
    #[serde(serialize_with = "serialize_area")]
    pub numeric_area: f64,
    /// Part of `[0, 1/2]` over which the domain reaches the real axis.
    pub uncovered: Option<(f64, f64)>,
    pub is_lattice: bool,
}

fn serialize_area<S: serde::Serializer>(a: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if a.is_finite() {
        s.serialize_f64(*a)
    } else {
        s.serialize_str("inf")
    }
}

/// Hyperbolic area of the fundamental domain
/// `{|x| ≤ 1/2, ‖(x ± 1/k, y)‖ ≥ 1/|k|}` of `G_k`.
///
/// The area is `2 ∫₀^{1/2} dx / y_min(x)` with `y_min(x) = √(x(2/|k| − x))`
/// on `[0, 2/|k|]`; when `2/|k| < 1/2` (or `k = 0`) the domain touches the
/// real axis along an interval and the area is infinite.
pub fn lattice_test(k: i64, tol: f64) -> Result<LatticeVerdict> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let ka = k.unsigned_abs() as f64;
    if k == 0 || ka > 4.0 {
        let start = if k == 0 { 0.0 } else { 2.0 / ka };
        return Ok(LatticeVerdict {
            k,
            closed_form_area: None,
            closed_form: "inf".into(),
            numeric_area: f64::INFINITY,
            uncovered: Some((start, 0.5)),
            is_lattice: false,
        });
    }
    let a = 2.0 / ka;
    // x(a - x) from distances to both ends of [0, 1/2] for accuracy near
    // the integrable endpoint singularities
    let f = |_x: f64, from_left: f64, from_right: f64| 1.0 / (from_left * ((a - 0.5) + from_right)).sqrt();
    let half = tanh_sinh(f, 0.0, 0.5, tol / 10.0);
    let closed = 2.0 * ((ka / 2.0 - 1.0).asin() + PI / 2.0);
    Ok(LatticeVerdict {
        k,
        closed_form_area: Some(closed),
        closed_form: format!("2(arcsin({}/2 - 1) + pi/2)", k.abs()),
        numeric_area: 2.0 * half,
        uncovered: None,
        is_lattice: true,
    })
}

/// Double-exponential quadrature of `f` over `[lo, hi]`. The integrand
/// receives the abscissa together with its distances to both endpoints, so
/// endpoint singularities can be evaluated without cancellation. The step is
/// halved until two successive estimates agree to `tol`.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let width = hi - lo;
    let t_max: f64 = 4.0;
    let mut h = 0.5;
    let mut prev = f64::NAN;
    let mut est = 0.0;
    for _ in 0..12 {
        let n = (t_max / h).ceil() as i64;
        let mut sum = 0.0;
        for j in -n..=n {
            let t = j as f64 * h;
            let u = 0.5 * PI * t.sinh();
            let from_left = width / (1.0 + (-2.0 * u).exp());
            let from_right = width / (1.0 + (2.0 * u).exp());
            if from_left <= 0.0 || from_right <= 0.0 {
                continue;
            }
            let x = lo + from_left;
            let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
            sum += w * f(x, from_left, from_right);
        }
        est = 0.5 * width * h * sum;
        if (est - prev).abs() < tol {
            return est;
        }
        prev = est;
        h /= 2.0;
    }
    est
}

/// Axis-aligned sampling window `[x0, x1] × [y0, y1]` with a grid step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
    pub step: Rational,
}

impl Grid {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational, step: Rational) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidInput("empty window".into()));
        }
        if !step.is_positive() {
            return Err(Error::InvalidInput("grid step must be positive".into()));
        }
        Ok(Grid { x0, y0, x1, y1, step })
    }

    fn count(lo: &Rational, hi: &Rational, step: &Rational) -> usize {
        ((hi - lo) / step).floor().to_integer().to_usize().unwrap() + 1
    }

    /// Number of columns and rows.
    pub fn shape(&self) -> (usize, usize) {
        (Grid::count(&self.x0, &self.x1, &self.step), Grid::count(&self.y0, &self.y1, &self.step))
    }

    /// Grid points, row by row from the bottom.
    pub fn points(&self) -> Vec<VecQ> {
        let (nx, ny) = self.shape();
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = &self.y0 + &self.step * big(BigInt::from(j));
            for i in 0..nx {
                let x = &self.x0 + &self.step * big(BigInt::from(i));
                out.push(VecQ::xy(x, y.clone()));
            }
        }
        out
    }
}

/// Grid coverage by `g · seed` over all `g` in a word-length ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub word_length: usize,
    /// Distinct group elements in the ball.
    pub elements: usize,
    pub columns: usize,
    pub rows: usize,
    /// Sampled points with hit flags, row by row from the bottom.
    pub region: Vec<(VecQ, bool)>,
    pub covered_fraction: f64,
}

impl OrbitReport {
    pub fn hits(&self) -> usize {
        self.region.iter().filter(|(_, h)| *h).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,hit\n");
        for (p, h) in &self.region {
            out.push_str(&format!("{},{},{}\n", fmt_rational(p.x()), fmt_rational(p.y()), u8::from(*h)));
        }
        out
    }
}

/// Every distinct element of word length at most `max_word`, breadth first.
/// Freely reduced words suffice; group coincidences are removed by hashing
/// the exact matrices.
pub fn word_ball(g: &MatGroupGen, max_word: usize) -> Vec<Mat2Z> {
    let letters = g.alphabet();
    let n = g.generators().len();
    let inverse_letter = |l: usize| if l < n { l + n } else { l - n };
    let mut seen: HashSet<Mat2Z> = HashSet::from([Mat2Z::identity()]);
    let mut out = vec![Mat2Z::identity()];
    let mut frontier: Vec<(Mat2Z, Option<usize>)> = vec![(Mat2Z::identity(), None)];
    for _ in 0..max_word {
        let mut next = Vec::new();
        for (m, last) in &frontier {
            for (l, letter) in letters.iter().enumerate() {
                if Some(inverse_letter(l)) == *last {
                    continue;
                }
                let w = letter * m;
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                    next.push((w, Some(l)));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Open polygon `g · seed` as integer inequalities on a scaled grid.
struct ScaledCell {
    rows: Vec<[i128; 3]>,
}

impl ScaledCell {
    /// Inequalities `a·i + b·j + c > 0` for points `(i/den, j/den)`.
    fn new(facets: &[HalfSpace], den: &BigInt) -> Option<ScaledCell> {
        let rows = facets
            .iter()
            .map(|h| {
                let coeffs = [h.normal.x().clone(), h.normal.y().clone(), &h.offset * big(den.clone())];
                let cd = common_denominator(&coeffs);
                let ints: Vec<i128> = coeffs.iter().map(|c| (c * big(cd.clone())).to_integer().to_i128()).collect::<Option<_>>()?;
                Some([ints[0], ints[1], ints[2]])
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ScaledCell { rows })
    }

    fn contains(&self, i: i128, j: i128) -> bool {
        self.rows.iter().all(|r| {
            match r[0].checked_mul(i).and_then(|a| r[1].checked_mul(j).and_then(|b| a.checked_add(b)?.checked_add(r[2]))) {
                Some(v) => v > 0,
                None => false,
            }
        })
    }
}

/// Image of a polygon's facet inequalities under `p ↦ m p`.
fn image_facets(seed: &[HalfSpace], m: &Mat2Z) -> Vec<HalfSpace> {
    // n·x + o > 0 with x = m⁻¹ p  ⇔  (m⁻ᵀ n)·p + o > 0
    let inv_t = m.inverse().unwrap().transpose();
    seed.iter().map(|h| HalfSpace { normal: inv_t.apply(&h.normal), offset: h.offset.clone() }).collect()
}

/// Marks each grid point lying in some `g · seed`, `g` ranging over words
/// of length at most `max_word`. All incidence tests are exact.
pub fn orbit_explore(g: &MatGroupGen, seed: &RationalPolygon, max_word: usize, grid: &Grid) -> Result<OrbitReport> {
    let ball = word_ball(g, max_word);
    let seed_facets = seed.facet_functionals();
    let cells: Vec<Vec<HalfSpace>> = ball.iter().map(|m| image_facets(&seed_facets, m)).collect();
    let points = grid.points();
    let den = common_denominator(points.iter().flat_map(|p| p.coords().iter()));
    let scaled: Option<Vec<ScaledCell>> = cells.iter().map(|c| ScaledCell::new(c, &den)).collect();
    let hits: Vec<bool> = points
        .par_iter()
        .map(|p| {
            if let Some(scaled) = &scaled {
                let i = (p.x() * big(den.clone())).to_integer().to_i128();
                let j = (p.y() * big(den.clone())).to_integer().to_i128();
                if let (Some(i), Some(j)) = (i, j) {
                    return scaled.iter().any(|c| c.contains(i, j));
                }
            }
            cells.iter().any(|c| c.iter().all(|h| h.contains(p)))
        })
        .collect();
    let (columns, rows) = grid.shape();
    let n_hit = hits.iter().filter(|&&h| h).count();
    Ok(OrbitReport {
        word_length: max_word,
        elements: ball.len(),
        columns,
        rows,
        covered_fraction: n_hit as f64 / points.len() as f64,
        region: points.into_iter().zip(hits).collect(),
    })
}

/// The polygons `M_k ⋯ M₁ · seed` for `k = 1..=count`, generator indices
/// taken cyclically.
pub fn cyclic_word_images(g: &MatGroupGen, seed: &RationalPolygon, count: usize) -> Vec<RationalPolygon> {
    let gens = g.generators();
    let mut acc = Mat2Z::identity();
    (0..count)
        .map(|k| {
            acc = &gens[k % gens.len()] * &acc;
            crate::geometry::apply_affine(seed, &acc, &VecQ::zero(2)).unwrap()
        })
        .collect()
}

/// Result of [`orbit_ray_miss`] for one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayMissReport {
    pub covered: bool,
    /// Smallest `|k|` (positive first) with `p ∈ Mᵏ Q`.
    pub witness: Option<i64>,
}

/// Orbit-union test in the plane for a single node: is `p` in
/// `⋃_{|k| ≤ max_k} Mᵏ Q` with `Q = {f : f + r > 0}` and `M` acting
/// affinely about the corner `−r` of `Q`?
pub fn orbit_ray_miss(m: &Mat2Z, r: &VecQ, p: &VecQ, max_k: i64) -> Result<RayMissReport> {
    r.check_dim(2)?;
    p.check_dim(2)?;
    let shifted = p + r;
    let inside = |v: &VecQ| v.coords().iter().all(Signed::is_positive);
    let mut order = vec![0i64];
    for k in 1..=max_k {
        order.push(k);
        order.push(-k);
    }
    for k in order {
        // p ∈ Mᵏ Q  ⇔  M⁻ᵏ (p + r) > 0
        if inside(&m.pow(-k)?.apply(&shifted)) {
            return Ok(RayMissReport { covered: true, witness: Some(k) });
        }
    }
    Ok(RayMissReport { covered: false, witness: None })
}

/// The node monodromy of a nodal trade in ℂ², fixing `(1,1)`.
pub fn c2_node_monodromy() -> Mat2Z {
    Mat2Z::from_rows([[0, 1], [-1, 2]])
}

/// Largest absolute vertex coordinate over a family of polygons.
pub fn max_abs_coordinate(polys: &[RationalPolygon]) -> Rational {
    polys
        .iter()
        .flat_map(|p| p.vertices().iter().flat_map(|v| v.coords().iter().map(crate::rational::abs)))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Six-decimal rendering of an area, `inf` when divergent.
pub fn area_to_string(a: f64) -> String {
    if a.is_finite() {
        format!("{a:.6}")
    } else {
        "inf".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ipt, pt};
    use crate::rational::{int, q};

    #[test]
    fn cp2_identities() {
        let g = cp2_generators();
        let [m1, m2, m3] = [&g.generators()[0], &g.generators()[1], &g.generators()[2]];
        for m in [m1, m2, m3] {
            assert!(m.det().is_one());
        }
        let prod = &(m3 * m2) * m1;
        assert_eq!(prod, Mat2Z::from_rows([[1, -9], [0, 1]]));
        let p = cp2_conjugator();
        assert_eq!(m1.conjugate_by(&p).unwrap(), Mat2Z::from_rows([[1, 1], [0, 1]]));
        assert_eq!(m2.conjugate_by(&p).unwrap(), Mat2Z::from_rows([[-5, 4], [-9, 7]]));
        assert_eq!(prod.conjugate_by(&p).unwrap(), Mat2Z::from_rows([[1, 0], [9, 1]]));
    }

    #[test]
    fn gk_and_boundary() {
        assert!(gk_generators(0).generators()[1].is_identity());
        assert_eq!(gk_generators(4).generators()[1], Mat2Z::from_rows([[1, 0], [4, 1]]));
        assert_eq!(boundary_monodromy(9), Mat2Z::from_rows([[1, 0], [9, 1]]));
        assert!(boundary_monodromy(0).is_identity());
    }

    #[test]
    fn lattice_areas() {
        for (k, expect) in [(1, 2.0 * PI / 3.0), (2, PI), (3, 4.0 * PI / 3.0), (4, 2.0 * PI), (-3, 4.0 * PI / 3.0)] {
            let v = lattice_test(k, 1e-9).unwrap();
            assert!(v.is_lattice);
            assert!((v.numeric_area - expect).abs() < 1e-7, "k={k}: {}", v.numeric_area);
            assert!((v.closed_form_area.unwrap() - expect).abs() < 1e-12);
        }
        for k in [0, 5, -5, 9] {
            let v = lattice_test(k, 1e-6).unwrap();
            assert!(!v.is_lattice);
            assert!(v.numeric_area.is_infinite());
        }
        assert!(lattice_test(1, 0.0).is_err());
    }

    #[test]
    fn word_ball_sizes() {
        let g = gk_generators(1);
        assert_eq!(word_ball(&g, 0).len(), 1);
        assert_eq!(word_ball(&g, 1).len(), 5);
        // free group on two letters has 1 + 4 + 12 reduced words of length ≤ 2
        let free = gk_generators(4);
        assert_eq!(word_ball(&free, 2).len(), 17);
    }

    #[test]
    fn orbit_zero_words_is_seed() {
        let seed = RationalPolygon::new(vec![pt((-1, 3), (-1, 3)), pt((2, 3), (-1, 3)), pt((-1, 3), (2, 3))]).unwrap();
        let grid = Grid::new(int(-1), int(-1), int(1), int(1), q(1, 6)).unwrap();
        let r = orbit_explore(&cp2_generators(), &seed, 0, &grid).unwrap();
        for (p, hit) in &r.region {
            assert_eq!(*hit, seed.contains_strict(p));
        }
        let r1 = orbit_explore(&cp2_generators(), &seed, 1, &grid).unwrap();
        assert!(r1.covered_fraction >= r.covered_fraction);
        assert!(Grid::new(int(0), int(0), int(0), int(1), q(1, 2)).is_err());
    }

    #[test]
    fn ray_miss_examples() {
        let m = c2_node_monodromy();
        let r = pt((1, 3), (1, 3));
        let on_ray = pt((-7, 3), (-7, 3));
        assert!(!orbit_ray_miss(&m, &r, &on_ray, 20).unwrap().covered);
        let off = pt((-1, 3), (-16, 3));
        let rep = orbit_ray_miss(&m, &r, &off, 6).unwrap();
        assert!(rep.covered);
        assert!(rep.witness.unwrap().abs() <= 6);
        assert_eq!(orbit_ray_miss(&m, &r, &ipt(0, 0), 0).unwrap().witness, Some(0));
    }
}
