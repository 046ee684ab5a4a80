//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use fluxgeom::atf::diagram_for;
use fluxgeom::atf::SegmentKind;
use fluxgeom::geometry::{unimodular_normal_form, Mat2Z, Segment, VecQ};
use fluxgeom::markov::{enumerate_tree_u64, MarkovTriple};
use fluxgeom::moduli::{
    canonicalize, equivalent, farey_position, global_moduli, moduli_space, wedge, xi2, CanonicalFibre,
    FibreDescriptor, WedgeMode,
};
use fluxgeom::monodromy::{c2_node_monodromy, cp2_conjugator, cp2_generators, lattice_test, orbit_ray_miss};
use fluxgeom::potential::{dual_edge, edge_profile, potential_for, predicted_moment_polygon};
use fluxgeom::rational::{big, int, q, Rational};
use fluxgeom::shapes::{
    chekanov_shape_member, cn_shape_member, cn_star_shape_member, concavity_check, kinks, psi_eval, ConeFunction,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance on lattice-test areas.
const AREA_TOL: f64 = 1e-6;
/// Quadrature tolerance handed to the integrator.
const QUAD_TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t(a: u64, b: u64, c: u64) -> MarkovTriple {
    MarkovTriple::from_u64(a, b, c).unwrap()
}

/// All Markov triples with entries at most `bound`, by search over `(a, b)`.
fn brute_force_triples(bound: u64) -> BTreeSet<[u64; 3]> {
    let mut out = BTreeSet::new();
    for a in 1..=bound {
        for b in a..=bound {
            for c in b..=bound {
                if a * a + b * b + c * c == 3 * a * b * c {
                    out.insert([a, b, c]);
                }
            }
            // c grows like 3ab; stop early once even c = b overshoots
            if a * a + 2 * b * b > 3 * a * b * bound {
                break;
            }
        }
    }
    out
}

fn c1_markov_tree() -> Check {
    let tree = enumerate_tree_u64(433).map_err(|e| e.to_string())?;
    let table: BTreeMap<[u64; 3], Vec<[u64; 3]>> = BTreeMap::from([
        ([1, 1, 1], vec![[1, 1, 2]]),
        ([1, 1, 2], vec![[1, 2, 5]]),
        ([1, 2, 5], vec![[2, 5, 29], [1, 5, 13]]),
        ([2, 5, 29], vec![[5, 29, 433], [2, 29, 169]]),
        ([1, 5, 13], vec![[5, 13, 194], [1, 13, 34]]),
    ]);
    let table_nodes: BTreeSet<[u64; 3]> =
        table.iter().flat_map(|(p, cs)| std::iter::once(*p).chain(cs.iter().copied())).collect();
    let table_edges: BTreeSet<([u64; 3], [u64; 3])> =
        table.iter().flat_map(|(p, cs)| cs.iter().map(move |c| (*p, *c))).collect();

    let shallow = tree.restrict_depth(4);
    let nodes: BTreeSet<[u64; 3]> = shallow.nodes.iter().map(|n| n.to_u64s().unwrap()).collect();
    let edges: BTreeSet<([u64; 3], [u64; 3])> = shallow
        .edges
        .iter()
        .map(|e| (shallow.nodes[e.parent].to_u64s().unwrap(), shallow.nodes[e.child].to_u64s().unwrap()))
        .collect();
    ensure(nodes == table_nodes, || format!("depth<=4 nodes {nodes:?}"))?;
    ensure(edges == table_edges, || format!("depth<=4 edges {edges:?}"))?;

    let all: BTreeSet<[u64; 3]> = tree.nodes.iter().map(|n| n.to_u64s().unwrap()).collect();
    ensure(all == brute_force_triples(433), || "full set differs from brute force".into())?;
    for n in &tree.nodes {
        let want = match n.to_u64s().unwrap() {
            [1, 1, 1] => 1,
            [1, 1, 2] => 2,
            _ => 3,
        };
        ensure(n.valence() == want, || format!("valence of {n}"))?;
    }
    Ok(format!("{} nodes, depth<=4 matches the 9-node table", tree.nodes.len()))
}

fn c2_monodromy() -> Check {
    let g = cp2_generators();
    let [m1, m2, m3] = [&g.generators()[0], &g.generators()[1], &g.generators()[2]];
    let p = cp2_conjugator();
    let prod = &(m3 * m2) * m1;
    ensure(prod == Mat2Z::from_rows([[1, -9], [0, 1]]), || format!("M3M2M1 = {prod}"))?;
    let pm1 = m1.conjugate_by(&p).map_err(|e| e.to_string())?;
    ensure(pm1 == Mat2Z::from_rows([[1, 1], [0, 1]]), || format!("PM1P^-1 = {pm1}"))?;
    let pprod = prod.conjugate_by(&p).map_err(|e| e.to_string())?;
    ensure(pprod == Mat2Z::from_rows([[1, 0], [9, 1]]), || format!("PM3M2M1P^-1 = {pprod}"))?;
    // the nodal trades of the standard diagram produce the same three matrices
    let d = fluxgeom::ATFDiagram::standard().arm_all(q(1, 10)).unwrap();
    let at = |x, y| {
        let i = d.triangle().vertices().iter().position(|v| *v == VecQ::from_ints(&[x, y])).unwrap();
        d.node(i).unwrap().monodromy.clone()
    };
    ensure([at(0, 0), at(0, 1), at(1, 0)] == [m1.clone(), m2.clone(), m3.clone()], || "nodal trades".into())?;
    Ok("three identities exact".into())
}

fn c3_lattice() -> Check {
    let mut worst: f64 = 0.0;
    for k in 1..=4i64 {
        let v = lattice_test(k, QUAD_TOL).map_err(|e| e.to_string())?;
        let want = 2.0 * ((k as f64 / 2.0 - 1.0).asin() + std::f64::consts::FRAC_PI_2);
        let err = (v.numeric_area - want).abs();
        worst = worst.max(err);
        ensure(err < AREA_TOL && v.is_lattice, || format!("k={k}: {} vs {want}", v.numeric_area))?;
    }
    let exact = [(1, 2.0 / 3.0), (2, 1.0), (3, 4.0 / 3.0), (4, 2.0)];
    for (k, mult) in exact {
        let v = lattice_test(k, QUAD_TOL).map_err(|e| e.to_string())?;
        ensure((v.numeric_area - mult * std::f64::consts::PI).abs() < AREA_TOL, || format!("k={k} not {mult}π"))?;
    }
    for k in [0, 5, 6, 7, 8, 9, -5, -9] {
        let v = lattice_test(k, QUAD_TOL).map_err(|e| e.to_string())?;
        ensure(!v.is_lattice && v.numeric_area.is_infinite(), || format!("k={k} should diverge"))?;
    }
    Ok(format!("max area error {worst:.1e} (tol {AREA_TOL:.0e})"))
}

fn c4_side_lengths() -> Check {
    let tree = enumerate_tree_u64(169).map_err(|e| e.to_string())?;
    let diagrams: HashMap<&MarkovTriple, fluxgeom::ATFDiagram> =
        tree.nodes.iter().map(|n| (n, diagram_for(n, q(1, 4)).unwrap())).collect();
    let mut checked = 0;
    for e in &tree.edges {
        for (from, to) in [(e.parent, e.child), (e.child, e.parent)] {
            let (src, dst) = (&tree.nodes[from], &tree.nodes[to]);
            let m = diagrams[src].mutate_to(dst).map_err(|e| e.to_string())?;
            let mut lens = m.side_lengths();
            lens.sort();
            let sq: Vec<Rational> = dst.entries().iter().map(|x| big(x * x)).collect();
            let scale = &lens[0] / &sq[0];
            ensure((0..3).all(|i| lens[i] == &sq[i] * &scale), || format!("{src} -> {dst}: {lens:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} directed edges"))
}

fn binomial_row(a: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..a {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}

fn c5_duality() -> Check {
    let tree = enumerate_tree_u64(29).map_err(|e| e.to_string())?;
    for tr in &tree.nodes {
        let (d, w) = potential_for(tr, q(1, 4)).map_err(|e| e.to_string())?;
        let pred = predicted_moment_polygon(&w, &d.monotone_height(), &d.barycentre()).map_err(|e| e.to_string())?;
        ensure(unimodular_normal_form(&pred).polygon == *d.normal_form().triangle(), || format!("{tr}: dual mismatch"))?;
        for v in 0..3 {
            let a: usize = d.labels()[v].to_string().parse().unwrap();
            let prof = edge_profile(&w, &dual_edge(&d, v)).map_err(|e| e.to_string())?;
            ensure(prof == binomial_row(a), || format!("{tr} corner {v}: profile {prof:?}"))?;
            let sum: BigInt = prof.iter().sum();
            ensure(sum == BigInt::from(2).pow(a as u32), || format!("{tr}: sum {sum}"))?;
        }
    }
    Ok(format!("{} triples", tree.nodes.len()))
}

fn random_interior(rng: &mut ChaCha8Rng) -> VecQ {
    loop {
        let den = rng.gen_range(2..200i64);
        let (a, b) = (rng.gen_range(1..den), rng.gen_range(1..den));
        if a + b < den {
            return VecQ::xy(q(a, den), q(b, den));
        }
    }
}

fn c6_psi() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f = ConeFunction::cp2();
    for _ in 0..1000 {
        let p = random_interior(&mut rng);
        let (x, y) = (p.x().clone(), p.y().clone());
        let z = Rational::one() - &x - &y;
        let want = x.clone().min(y.clone()).min(z);
        ensure(psi_eval(&f, &p).unwrap() == want, || format!("psi at {p}"))?;
    }
    ensure(psi_eval(&f, f.apex()).unwrap() == q(1, 3), || "apex value".into())?;
    for _ in 0..100 {
        let (a, b) = (random_interior(&mut rng), random_interior(&mut rng));
        if a == b {
            continue;
        }
        let seg = Segment::closed(a, b).unwrap();
        ensure(concavity_check(&f, &seg, 16).unwrap(), || format!("concavity on {seg:?}"))?;
    }
    let through = Segment::closed(VecQ::xy(q(1, 5), q(1, 5)), VecQ::xy(q(2, 5), q(2, 5))).unwrap();
    let ks = kinks(&f, &through).unwrap();
    ensure(ks.iter().any(|k| through.at(k) == *f.apex()), || format!("no kink at apex: {ks:?}"))?;
    Ok("1000 points, 100 segments, apex kink found".into())
}

fn grid(dim: usize, vals: &[Rational]) -> Vec<VecQ> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p: Vec<Rational>| vals.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
    }
    out.into_iter().map(VecQ::new).collect()
}

fn c7_shapes() -> Check {
    let vals: Vec<Rational> = (-6..=6).map(|i| q(i, 2)).collect();
    let radii: Vec<Vec<Rational>> = vec![vec![int(1)], vec![int(1), int(2)], vec![q(1, 2), q(3, 2)], vec![int(2), int(1)]];
    let mut points = 0usize;
    for dim in 2..=4 {
        for base in &radii {
            let r = VecQ::new((0..dim).map(|i| base[i % base.len()].clone()).collect());
            let rmin = r.coords().iter().min().unwrap().clone();
            for f in grid(dim, &vals) {
                let shifted: Vec<Rational> = (0..dim).map(|i| &f.coords()[i] + &r.coords()[i]).collect();
                let on_ray = shifted.iter().all(|s| *s == shifted[0]) && shifted[0] <= Rational::zero();
                ensure(cn_shape_member(&r, &f).unwrap() == !on_ray, || format!("Sh r={r} f={f}"))?;
                let star = (0..dim).filter(|&i| r.coords()[i] == rmin).all(|i| shifted[i] > Rational::zero());
                ensure(cn_star_shape_member(&r, &f).unwrap() == star, || format!("Sh* r={r} f={f}"))?;
                points += 1;
            }
        }
        for rc in [int(1), q(1, 2)] {
            for f in grid(dim, &vals) {
                let s: Vec<Rational> = f.coords().iter().map(|c| c + &rc).collect();
                let on_ray = s.iter().all(|x| *x == s[0]) && s[0] <= Rational::zero();
                ensure(chekanov_shape_member(&rc, &f, false).unwrap() == !on_ray, || format!("Chekanov Sh f={f}"))?;
                ensure(chekanov_shape_member(&rc, &f, true).unwrap() == (s[0] > Rational::zero()), || format!("Chekanov Sh* f={f}"))?;
            }
        }
    }
    let m = c2_node_monodromy();
    let mut orbit_points = 0;
    for r in [VecQ::from_ints(&[1, 1]), VecQ::from_ints(&[1, 2]), VecQ::xy(q(1, 2), q(3, 2))] {
        for f in grid(2, &(-8..=8).map(|i| q(i, 2)).collect::<Vec<_>>()) {
            let closed = cn_shape_member(&r, &f).unwrap();
            if !closed {
                continue;
            }
            let orbit = orbit_ray_miss(&m, &r, &f, 8).map_err(|e| e.to_string())?.covered;
            ensure(orbit, || format!("orbit misses off-ray point {f} (r={r})"))?;
            orbit_points += 1;
        }
    }
    Ok(format!("{points} closed-form grid points, {orbit_points} orbit-union points"))
}

fn c8_toric() -> Check {
    let n = 60i64;
    let mut by_oracle: HashMap<[Rational; 3], CanonicalFibre> = HashMap::new();
    let mut by_canon: HashMap<CanonicalFibre, [Rational; 3]> = HashMap::new();
    let mut descs = Vec::new();
    for a in 1..n {
        for b in 1..n - a {
            if a == 20 && b == 20 {
                continue;
            }
            let (x, y) = (q(a, n), q(b, n));
            let mut areas = [x.clone(), y.clone(), Rational::one() - &x - &y];
            areas.sort();
            let d = FibreDescriptor::toric(x, y).unwrap();
            let c = canonicalize(&d);
            if let CanonicalFibre::ToricCanonical { x, y } = &c {
                let ok = *x > Rational::zero() && *x <= q(1, 3) && x <= y && y * int(2) <= Rational::one() - x;
                ensure(ok, || format!("{c} outside the shaded region"))?;
            } else {
                return Err(format!("{d} did not canonicalise to a toric form"));
            }
            if let Some(prev) = by_oracle.insert(areas.clone(), c.clone()) {
                ensure(prev == c, || format!("same areas, different forms at {d}"))?;
            }
            if let Some(prev) = by_canon.insert(c.clone(), areas.clone()) {
                ensure(prev == areas, || format!("different areas, same form at {d}"))?;
            }
            descs.push((d, areas));
        }
    }
    // direct pairwise calls on a deterministic sample
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..20_000 {
        let (i, j) = (rng.gen_range(0..descs.len()), rng.gen_range(0..descs.len()));
        let same = descs[i].1 == descs[j].1;
        ensure(equivalent(&descs[i].0, &descs[j].0) == same, || format!("{} vs {}", descs[i].0, descs[j].0))?;
        // and every S₃ image of a point
        let [u, v, w] = descs[i].1.clone();
        for (x, y) in [(&u, &v), (&v, &u), (&u, &w), (&w, &u), (&v, &w), (&w, &v)] {
            let img = FibreDescriptor::toric(x.clone(), y.clone()).unwrap();
            ensure(equivalent(&img, &descs[i].0), || format!("S3 image of {}", descs[i].0))?;
        }
    }
    Ok(format!("{} grid points, {} classes", descs.len(), by_canon.len()))
}

/// The presentation predicted by the case list, written independently of
/// the library's case analysis.
fn expected_presentation(tr: &MarkovTriple) -> String {
    let [a, b, c] = tr.to_u64s().unwrap();
    match (a, b, c) {
        (1, 1, 1) => "Δ_{β1,γ1}".into(),
        (1, 1, 2) => "Δ_{β1,γ1} ∨ Δ_{γ2,β2}".into(),
        (1, 2, 5) => "Δ^{β5}_{β1,β2} ∨ Δ_{γ2,γ1}".into(),
        (1, b, c) => format!("Δ^{{β{b},β{c}}}_{{β1,γ1}} ∨ Δ_{{γ2,γ1}}"),
        (2, b, c) => format!("Δ^{{β{b},β{c}}}_{{γ2,β2}} ∨ Δ_{{γ2,γ1}}"),
        (a, b, c) => format!("Δ^{{β{a},β{b},β{c}}}_{{γ2,γ1}} ∨ Δ_{{γ2,γ1}}"),
    }
}

fn c9_moduli() -> Check {
    let tree = enumerate_tree_u64(169).map_err(|e| e.to_string())?;
    for tr in &tree.nodes {
        let m = moduli_space(tr);
        ensure(m.presentation() == expected_presentation(tr), || format!("{tr}: {}", m.presentation()))?;
        let [a, b, c] = tr.entries();
        if *c > BigInt::from(2) {
            let th = |x: &BigInt| farey_position(tr, x).unwrap();
            let (ta, tb, tc) = (th(a), th(b), th(c));
            let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
            ensure(lo < tc && tc < hi, || format!("{tr}: β{c} not between β{a} and β{b}"))?;
        }
    }
    let h = wedge(&[moduli_space(&t(1, 1, 1)), moduli_space(&t(1, 1, 2))], WedgeMode::DotVee);
    let pairs: Vec<(String, String)> = h.non_hausdorff_pairs().iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let want = vec![("β1".to_string(), "γ2".to_string()), ("β2".to_string(), "γ1".to_string())];
    ensure(pairs == want, || format!("pairs {pairs:?}"))?;
    ensure(h.vertices.len() == 2, || "vertex count".into())?;
    let g = global_moduli(&BigInt::from(169)).map_err(|e| e.to_string())?;
    ensure(g.vertices.len() == tree.nodes.len(), || "global vertex count".into())?;
    Ok(format!("{} triples", tree.nodes.len()))
}

fn random_descriptor(rng: &mut ChaCha8Rng, triples: &[MarkovTriple]) -> FibreDescriptor {
    // small denominators so that coincidences actually happen
    match rng.gen_range(0..3) {
        0 => FibreDescriptor::monotone(triples[rng.gen_range(0..triples.len())].clone()),
        1 => loop {
            let (a, b) = (rng.gen_range(1..12), rng.gen_range(1..12));
            if let Ok(d) = FibreDescriptor::toric(q(a, 12), q(b, 12)) {
                break d;
            }
        },
        _ => {
            let tr = triples[rng.gen_range(0..triples.len())].clone();
            let m = tr.entries()[rng.gen_range(0..3)].clone();
            let kind = if rng.gen_bool(0.5) { SegmentKind::Beta } else { SegmentKind::Gamma };
            FibreDescriptor::special(tr, kind, m, q(rng.gen_range(1..4), 4)).unwrap()
        }
    }
}

fn c10_invariants() -> Check {
    let triples = enumerate_tree_u64(34).map_err(|e| e.to_string())?.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut equal_pairs = 0;
    for _ in 0..10_000 {
        let (f1, f2) = (random_descriptor(&mut rng, &triples), random_descriptor(&mut rng, &triples));
        if equivalent(&f1, &f2) {
            equal_pairs += 1;
            ensure(xi2(&f1) == xi2(&f2), || format!("Ξ₂ differs on {f1} ~ {f2}"))?;
        }
        let beta = |f: &FibreDescriptor| matches!(canonicalize(f), CanonicalFibre::BetaFibre { .. });
        let toric_or_gamma =
            |f: &FibreDescriptor| matches!(canonicalize(f), CanonicalFibre::ToricCanonical { .. } | CanonicalFibre::Gamma2 { .. });
        if beta(&f1) && toric_or_gamma(&f2) {
            ensure(!equivalent(&f1, &f2), || format!("{f1} ~ {f2}"))?;
            let x1 = xi2(&f1);
            ensure(x1 >= BigInt::from(4) && (&x1 & (&x1 - 1u32)).is_zero(), || format!("Ξ₂({f1}) = {x1}"))?;
            ensure(xi2(&f2) <= BigInt::from(3), || format!("Ξ₂({f2})"))?;
        }
    }
    Ok(format!("10000 pairs, {equal_pairs} equivalent"))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("1 markov tree", Duration::from_secs(1), c1_markov_tree),
        ("2 monodromy identities", Duration::from_secs(1), c2_monodromy),
        ("3 lattice test", Duration::from_secs(5), c3_lattice),
        ("4 side lengths under mutation", Duration::from_secs(10), c4_side_lengths),
        ("5 potential/polytope duality", Duration::from_secs(10), c5_duality),
        ("6 psi cone", Duration::from_secs(2), c6_psi),
        ("7 shapes", Duration::from_secs(30), c7_shapes),
        ("8 toric classification", Duration::from_secs(5), c8_toric),
        ("9 moduli structure", Duration::from_secs(5), c9_moduli),
        ("10 invariant consistency", Duration::from_secs(5), c10_invariants),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let slow = took > limit;
        match out {
            Ok(detail) if !slow => println!("PASS [{name}] {detail} ({:.3}s, limit {}s)", took.as_secs_f64(), limit.as_secs()),
            Ok(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail}, too slow ({:.3}s, limit {}s)", took.as_secs_f64(), limit.as_secs())
            }
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why} ({:.3}s)", took.as_secs_f64())
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
