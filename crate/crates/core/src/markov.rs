//! Markov triples `a² + b² + c² = 3abc`, the mutation move and the Markov tree.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An unordered Markov triple, stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple {
    entries: [BigInt; 3],
}

/// `a² + b² + c² = 3abc` for positive integers.
pub fn is_markov(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<bool> {
    if !a.is_positive() || !b.is_positive() || !c.is_positive() {
        return Err(Error::InvalidInput("Markov entries must be positive".into()));
    }
    Ok(a * a + b * b + c * c == BigInt::from(3) * a * b * c)
}

impl MarkovTriple {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !is_markov(&a, &b, &c)? {
            return Err(Error::NotMarkov(a.to_string(), b.to_string(), c.to_string()));
        }
        let mut entries = [a, b, c];
        entries.sort();
        Ok(MarkovTriple { entries })
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Result<Self> {
        MarkovTriple::new(a.into(), b.into(), c.into())
    }

    pub fn root() -> Self {
        MarkovTriple::from_u64(1, 1, 1).unwrap()
    }

    pub fn entries(&self) -> &[BigInt; 3] {
        &self.entries
    }

    pub fn a(&self) -> &BigInt {
        &self.entries[0]
    }

    pub fn b(&self) -> &BigInt {
        &self.entries[1]
    }

    pub fn c(&self) -> &BigInt {
        &self.entries[2]
    }

    pub fn largest(&self) -> &BigInt {
        &self.entries[2]
    }

    pub fn sum(&self) -> BigInt {
        self.entries.iter().sum()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.entries.contains(x)
    }

    pub fn is_root(&self) -> bool {
        self.entries.iter().all(One::is_one)
    }

    /// Entries as `u64`, when they fit.
    pub fn to_u64s(&self) -> Option<[u64; 3]> {
        Some([self.entries[0].to_u64()?, self.entries[1].to_u64()?, self.entries[2].to_u64()?])
    }

    /// Replaces the entry at sorted position `pos` by `3·(product of the
    /// other two) − entry` and re-sorts.
    pub fn mutate(&self, pos: usize) -> MarkovTriple {
        assert!(pos < 3, "mutation position {pos} out of range");
        let [x, y] = others(pos).map(|i| &self.entries[i]);
        let fresh = BigInt::from(3) * x * y - &self.entries[pos];
        let mut entries = [x.clone(), y.clone(), fresh];
        entries.sort();
        MarkovTriple { entries }
    }

    /// Sorted position at which the value produced by `mutate(pos)` lands in
    /// the child; mutating there undoes the move.
    pub fn inverse_position(&self, pos: usize) -> usize {
        let child = self.mutate(pos);
        let [x, y] = others(pos).map(|i| &self.entries[i]);
        let fresh = BigInt::from(3) * x * y - &self.entries[pos];
        child.entries.iter().rposition(|e| *e == fresh).unwrap()
    }

    /// Distinct triples adjacent in the (untruncated) Markov tree.
    pub fn neighbours(&self) -> Vec<MarkovTriple> {
        let mut out: Vec<MarkovTriple> = (0..3).map(|p| self.mutate(p)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn valence(&self) -> usize {
        self.neighbours().len()
    }
}

fn others(pos: usize) -> [usize; 2] {
    match pos {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.entries[0], self.entries[1], self.entries[2])
    }
}

impl FromStr for MarkovTriple {
    type Err = Error;

    /// Accepts `a,b,c` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected a,b,c, got {s:?}")));
        }
        let nums = parts
            .iter()
            .map(|p| BigInt::from_str(p).map_err(|_| Error::Parse(format!("bad integer {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        MarkovTriple::new(nums[0].clone(), nums[1].clone(), nums[2].clone())
    }
}

impl Serialize for MarkovTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::rational::serde_int::to_value;
        serde_json::Value::Array(self.entries.iter().map(to_value).collect()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkovTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::rational::serde_int::from_value;
        use serde::de::Error as _;
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        if raw.len() != 3 {
            return Err(D::Error::custom("a Markov triple has three entries"));
        }
        let n = |i: usize| from_value(&raw[i]).map_err(D::Error::custom);
        MarkovTriple::new(n(0)?, n(1)?, n(2)?).map_err(D::Error::custom)
    }
}

/// Single mutation; see [`MarkovTriple::mutate`].
pub fn mutate(t: &MarkovTriple, pos: usize) -> MarkovTriple {
    t.mutate(pos)
}

/// A mutation edge: `parent` and `child` index into [`MarkovTree::nodes`],
/// `position` is the sorted slot of the parent that was mutated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub position: usize,
}

/// The Markov tree truncated at a bound on the largest entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovTree {
    pub root: MarkovTriple,
    pub nodes: Vec<MarkovTriple>,
    /// Distance from the root, parallel to `nodes`.
    pub depths: Vec<usize>,
    pub edges: Vec<TreeEdge>,
}

impl MarkovTree {
    pub fn index_of(&self, t: &MarkovTriple) -> Option<usize> {
        self.nodes.iter().position(|n| n == t)
    }

    /// Number of tree edges at node `i` inside the truncated tree.
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.parent == i || e.child == i).count()
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// The subtree of nodes at distance at most `depth` from the root.
    pub fn restrict_depth(&self, depth: usize) -> MarkovTree {
        let keep: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.depths[i] <= depth).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        MarkovTree {
            root: self.root.clone(),
            nodes: keep.iter().map(|&i| self.nodes[i].clone()).collect(),
            depths: keep.iter().map(|&i| self.depths[i]).collect(),
            edges: self
                .edges
                .iter()
                .filter_map(|e| {
                    Some(TreeEdge { parent: *remap.get(&e.parent)?, child: *remap.get(&e.child)?, position: e.position })
                })
                .collect(),
        }
    }

    /// Graphviz rendering with one rank per depth.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph markov {\n  node [shape=plaintext];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{n}\"];\n"));
        }
        for d in 0..=self.max_depth() {
            let ids: Vec<String> =
                (0..self.nodes.len()).filter(|&i| self.depths[i] == d).map(|i| format!("n{i}")).collect();
            out.push_str(&format!("  {{ rank=same; {} }}\n", ids.join("; ")));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -- n{};\n", e.parent, e.child));
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first enumeration of every triple with largest entry `≤ max_c`.
///
/// Children of a node are visited in order of mutated position, so the node
/// order is deterministic. The bound prunes safely: away from the root each
/// child either decreases the largest entry (towards the root) or makes it
/// larger than every entry of the parent.
pub fn enumerate_tree(max_c: &BigInt) -> Result<MarkovTree> {
    if !max_c.is_positive() {
        return Err(Error::InvalidInput("max_c must be at least 1".into()));
    }
    let root = MarkovTriple::root();
    let mut nodes = vec![root.clone()];
    let mut depths = vec![0];
    let mut edges = Vec::new();
    let mut seen: HashMap<MarkovTriple, usize> = HashMap::from([(root.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let parent = nodes[i].clone();
        for pos in 0..3 {
            let child = parent.mutate(pos);
            if child.largest() > max_c || seen.contains_key(&child) {
                continue;
            }
            let j = nodes.len();
            seen.insert(child.clone(), j);
            nodes.push(child);
            depths.push(depths[i] + 1);
            edges.push(TreeEdge { parent: i, child: j, position: pos });
            queue.push_back(j);
        }
    }
    Ok(MarkovTree { root, nodes, depths, edges })
}

/// Convenience wrapper for machine-sized bounds.
pub fn enumerate_tree_u64(max_c: u64) -> Result<MarkovTree> {
    enumerate_tree(&BigInt::from(max_c))
}

/// Descent to the root, mutating the largest entry at each step.
pub fn path_to_root(t: &MarkovTriple) -> Vec<MarkovTriple> {
    let mut path = vec![t.clone()];
    let mut cur = t.clone();
    while !cur.is_root() {
        let next = cur.mutate(2);
        // (1,1,2) mutated at its largest slot gives (1,1,1); everywhere else
        // the largest slot is the unique descending direction
        debug_assert!(next.sum() < cur.sum());
        path.push(next.clone());
        cur = next;
    }
    path
}

/// Result of [`check_uniqueness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    #[serde(serialize_with = "serialize_bound")]
    pub bound: BigInt,
    /// Largest entry ↦ all triples having it as largest entry.
    #[serde(serialize_with = "serialize_by_max")]
    pub by_max: BTreeMap<BigInt, Vec<MarkovTriple>>,
    /// Largest entries shared by two or more distinct triples.
    #[serde(serialize_with = "serialize_ints")]
    pub collisions: Vec<BigInt>,
}

fn serialize_bound<S: Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::rational::serde_int::serialize(b, s)
}

fn serialize_by_max<S: Serializer>(m: &BTreeMap<BigInt, Vec<MarkovTriple>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Value::Array(v.iter().map(crate::rational::serde_int::to_value).collect()).serialize(s)
}

impl UniquenessReport {
    pub fn is_unique(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Groups all triples with largest entry `≤ bound` by that entry.
pub fn check_uniqueness(bound: &BigInt) -> Result<UniquenessReport> {
    let tree = enumerate_tree(bound)?;
    let mut by_max: BTreeMap<BigInt, Vec<MarkovTriple>> = BTreeMap::new();
    for t in tree.nodes {
        by_max.entry(t.largest().clone()).or_default().push(t);
    }
    for v in by_max.values_mut() {
        v.sort();
    }
    let collisions = by_max.iter().filter(|(_, v)| v.len() > 1).map(|(k, _)| k.clone()).collect();
    Ok(UniquenessReport { bound: bound.clone(), by_max, collisions })
}

/// The triple at which the Markov number `m` first appears on the way up
/// from the root towards `t`: walk towards the root while `m` survives.
///
/// This names the ray of the tree along which `m` occurs; distinct rays
/// with equal `m` would be told apart exactly when uniqueness fails.
pub fn ray_origin(t: &MarkovTriple, m: &BigInt) -> Result<MarkovTriple> {
    if !t.contains(m) {
        return Err(Error::InvalidInput(format!("{m} is not an entry of {t}")));
    }
    let mut cur = t.clone();
    while !cur.is_root() {
        let next = cur.mutate(2);
        if !next.contains(m) {
            break;
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: u64, b: u64, c: u64) -> MarkovTriple {
        MarkovTriple::from_u64(a, b, c).unwrap()
    }

    #[test]
    fn is_markov_examples() {
        let b = |x: i64| BigInt::from(x);
        assert!(is_markov(&b(1), &b(1), &b(1)).unwrap());
        assert!(is_markov(&b(1), &b(2), &b(5)).unwrap());
        assert!(!is_markov(&b(1), &b(2), &b(4)).unwrap());
        assert!(is_markov(&b(0), &b(1), &b(1)).is_err());
    }

    #[test]
    fn mutate_examples() {
        assert_eq!(t(1, 2, 5).mutate(2), t(1, 1, 2));
        assert_eq!(t(1, 2, 5).mutate(0), t(2, 5, 29));
        for p in 0..3 {
            assert_eq!(t(1, 1, 1).mutate(p), t(1, 1, 2));
        }
    }

    #[test]
    fn mutation_is_involutive() {
        let tree = enumerate_tree_u64(10_000).unwrap();
        for n in &tree.nodes {
            for p in 0..3 {
                let back = n.inverse_position(p);
                assert_eq!(&n.mutate(p).mutate(back), n);
            }
        }
    }

    #[test]
    fn small_trees() {
        assert_eq!(enumerate_tree_u64(1).unwrap().nodes, vec![t(1, 1, 1)]);
        assert_eq!(enumerate_tree_u64(5).unwrap().nodes, vec![t(1, 1, 1), t(1, 1, 2), t(1, 2, 5)]);
        assert!(enumerate_tree_u64(0).is_err());
    }

    #[test]
    fn paths() {
        assert_eq!(path_to_root(&t(2, 5, 29)), vec![t(2, 5, 29), t(1, 2, 5), t(1, 1, 2), t(1, 1, 1)]);
        assert_eq!(path_to_root(&t(1, 1, 1)), vec![t(1, 1, 1)]);
        let p = path_to_root(&t(5, 13, 194));
        assert_eq!(p.len(), 5);
        assert_eq!(p.last().unwrap(), &t(1, 1, 1));
    }

    #[test]
    fn valences() {
        assert_eq!(t(1, 1, 1).valence(), 1);
        assert_eq!(t(1, 1, 2).valence(), 2);
        assert_eq!(t(1, 2, 5).valence(), 3);
        assert_eq!(t(5, 13, 194).valence(), 3);
    }

    #[test]
    fn uniqueness_small() {
        let r = check_uniqueness(&BigInt::from(5)).unwrap();
        assert_eq!(r.by_max.len(), 3);
        assert_eq!(r.by_max[&BigInt::from(5)], vec![t(1, 2, 5)]);
        let r = check_uniqueness(&BigInt::from(1000)).unwrap();
        assert!(r.is_unique());
        assert_eq!(r.by_max[&BigInt::from(29)], vec![t(2, 5, 29)]);
    }

    #[test]
    fn ray_origins() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(ray_origin(&t(2, 5, 29), &b(5)).unwrap(), t(1, 2, 5));
        assert_eq!(ray_origin(&t(2, 5, 29), &b(2)).unwrap(), t(1, 1, 2));
        assert_eq!(ray_origin(&t(1, 5, 13), &b(1)).unwrap(), t(1, 1, 1));
        assert_eq!(ray_origin(&t(5, 13, 194), &b(194)).unwrap(), t(5, 13, 194));
        assert!(ray_origin(&t(1, 2, 5), &b(3)).is_err());
    }

    #[test]
    fn parse_and_json() {
        let x: MarkovTriple = "(5,2,29)".parse().unwrap();
        assert_eq!(x, t(2, 5, 29));
        assert!("1,2,4".parse::<MarkovTriple>().is_err());
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[2,5,29]");
        assert_eq!(serde_json::from_str::<MarkovTriple>(&s).unwrap(), x);
    }
}
