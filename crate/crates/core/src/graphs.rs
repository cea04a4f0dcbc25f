//! Simple graphs with the ordered-pair edge convention.
//!
//! Every undirected edge `{v, w}` is stored as both `(v, w)` and `(w, v)`, so
//! [`Graph::edge_count`] is twice the number of undirected edges. All `|E|`
//! factors elsewhere in the crate use this ordered count.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest vertex count accepted by the brute-force enumerations.
pub const MAX_ENUM_VERTICES: usize = 12;

/// Cap on the number of automorphisms materialized by [`Graph::automorphisms`].
pub const MAX_GROUP_ORDER: usize = 4_000_000;

/// A permutation of `0..n`, stored as its image list: `perm[v] = π(v)`.
pub type Permutation = Vec<usize>;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    name: String,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from undirected pairs. Pairs are symmetrized and
    /// deduplicated; loops are rejected.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        let mut adj = vec![false; n * n];
        for (v, w) in pairs {
            if v >= n || w >= n {
                return Err(Error::InvalidArgument(format!("edge ({v}, {w}) out of range for n = {n}")));
            }
            if v == w {
                return Err(Error::InvalidArgument(format!("loop at vertex {v}")));
            }
            adj[v * n + w] = true;
            adj[w * n + v] = true;
        }
        Ok(Self { n, adj, name: format!("graph{n}") })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_min(n)?;
        let pairs = (0..n).flat_map(|v| (v + 1..n).map(move |w| (v, w)));
        Ok(Self::from_pairs(n, pairs)?.named(format!("complete:{n}")))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        check_min(n)?;
        Ok(Self::from_pairs(n, (0..n).map(|v| (v, (v + 1) % n)))?.named(format!("cycle:{n}")))
    }

    /// Path on `n` vertices: `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("path needs n >= 2, got {n}")));
        }
        Ok(Self::from_pairs(n, (0..n - 1).map(|v| (v, v + 1)))?.named(format!("path:{n}")))
    }

    /// Outer 5-cycle on `0..5`, inner pentagram on `5..10`, spokes `i - i+5`.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_pairs(10, outer.chain(spokes).chain(inner))
            .expect("petersen edges are valid")
            .named("petersen".into())
    }

    /// Named constructor: `complete`, `cycle`, `path` or `petersen`
    /// (`n` is ignored for `petersen`).
    pub fn make_named(name: &str, n: usize) -> Result<Self> {
        match name {
            "complete" | "K" => Self::complete(n),
            "cycle" | "C" => Self::cycle(n),
            "path" | "P" => Self::path(n),
            "petersen" => Ok(Self::petersen()),
            other => Err(Error::UnknownGraph(other.to_string())),
        }
    }

    /// Parses an edge list: one `u v` pair per line, `#` starts a comment.
    /// The vertex count is one more than the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut field = || -> Result<usize> {
                let tok = it
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected two vertices", lineno + 1)))?;
                tok.parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad vertex `{tok}`", lineno + 1)))
            };
            let (u, v) = (field()?, field()?);
            if it.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
            }
            pairs.push((u, v));
        }
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::from_pairs(n, pairs)
    }

    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse_edge_list(&text)?.named(path.display().to_string()))
    }

    pub fn named(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.adj[v * self.n + w]
    }

    /// Ordered edge count `|E|`.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&a| a).count()
    }

    /// Ordered edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |v| (0..n).filter(move |&w| self.has_edge(v, w)).map(move |w| (v, w)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| self.has_edge(v, w))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// `true` iff the graph is `K_n`.
    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1)
    }

    /// Number of ordered edges with both endpoints in the vertex set encoded by `mask`.
    pub fn induced_edges(&self, mask: u32) -> usize {
        let mut count = 0;
        for v in 0..self.n {
            if mask >> v & 1 == 0 {
                continue;
            }
            for w in 0..self.n {
                if mask >> w & 1 == 1 && self.has_edge(v, w) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Independent vertex sets (including the empty set) as bitmasks.
    pub fn independent_sets(&self) -> Result<Vec<u32>> {
        self.check_enumerable()?;
        let nbr: Vec<u32> = (0..self.n)
            .map(|v| self.neighbors(v).fold(0u32, |m, w| m | 1 << w))
            .collect();
        Ok((0..1u32 << self.n)
            .filter(|&s| (0..self.n).all(|v| s >> v & 1 == 0 || nbr[v] & s == 0))
            .collect())
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n > MAX_ENUM_VERTICES {
            return Err(Error::TooLarge { n: self.n, limit: MAX_ENUM_VERTICES });
        }
        Ok(())
    }

    /// `true` iff `perm` preserves adjacency in both directions.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.n
            && (0..self.n).all(|v| (0..self.n).all(|w| self.has_edge(v, w) == self.has_edge(perm[v], perm[w])))
    }

    /// All automorphisms, found by backtracking over degree-compatible
    /// partial assignments. The identity comes first.
    pub fn automorphisms(&self) -> Result<Vec<Permutation>> {
        self.check_enumerable()?;
        let mut out = Vec::new();
        let mut search = AutSearch::new(self);
        search.run(&mut |perm| {
            out.push(perm.to_vec());
            out.len() <= MAX_GROUP_ORDER
        });
        if out.len() > MAX_GROUP_ORDER {
            return Err(Error::InvalidArgument(format!(
                "automorphism group of {} exceeds {MAX_GROUP_ORDER} elements",
                self.name
            )));
        }
        Ok(out)
    }

    /// Finds one automorphism extending the partial map `pins` (pairs `v ↦ w`).
    pub fn find_automorphism(&self, pins: &[(usize, usize)]) -> Result<Option<Permutation>> {
        self.check_enumerable()?;
        let mut search = AutSearch::new(self);
        for &(v, w) in pins {
            if v >= self.n || w >= self.n {
                return Err(Error::InvalidArgument(format!("pin ({v}, {w}) out of range")));
            }
            if !search.pin(v, w) {
                return Ok(None);
            }
        }
        let mut found = None;
        search.run(&mut |perm| {
            found = Some(perm.to_vec());
            false
        });
        Ok(found)
    }

    pub fn is_vertex_transitive(&self) -> Result<bool> {
        for w in 1..self.n {
            if self.find_automorphism(&[(0, w)])?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Transitivity on undirected edges: every edge `{x, y}` is the image of
    /// a fixed reference edge under some automorphism, in either orientation.
    /// An edgeless graph counts as edge-transitive.
    pub fn is_edge_transitive(&self) -> Result<bool> {
        let edges: Vec<_> = self.edges().filter(|&(v, w)| v < w).collect();
        let Some(&(a, b)) = edges.first() else {
            return Ok(true);
        };
        for &(x, y) in &edges[1..] {
            if self.find_automorphism(&[(a, x), (b, y)])?.is_none()
                && self.find_automorphism(&[(a, y), (b, x)])?.is_none()
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Transitivity on ordered edges (arc-transitivity).
    pub fn is_arc_transitive(&self) -> Result<bool> {
        let edges: Vec<_> = self.edges().collect();
        let Some(&(a, b)) = edges.first() else {
            return Ok(true);
        };
        for &(x, y) in &edges[1..] {
            if self.find_automorphism(&[(a, x), (b, y)])?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_vertex_edge_transitive(&self) -> Result<bool> {
        Ok(self.is_vertex_transitive()? && self.is_edge_transitive()?)
    }
}

fn check_min(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be at least 3, got {n}")));
    }
    Ok(())
}

/// Parses `complete:5`, `cycle:7`, `path:3`, `petersen` or `file:<path>`.
impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Self::load_edge_list(path);
        }
        let (name, n) = match s.split_once(':') {
            Some((name, n)) => {
                let n = n.parse().map_err(|_| Error::Parse(format!("bad vertex count in `{s}`")))?;
                (name, n)
            }
            None => (s, 0),
        };
        Self::make_named(name, n)
    }
}

struct AutSearch<'a> {
    g: &'a Graph,
    perm: Vec<Option<usize>>,
    used: Vec<bool>,
    degree: Vec<usize>,
}

impl<'a> AutSearch<'a> {
    fn new(g: &'a Graph) -> Self {
        Self {
            g,
            perm: vec![None; g.n],
            used: vec![false; g.n],
            degree: (0..g.n).map(|v| g.degree(v)).collect(),
        }
    }

    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.used[w] || self.degree[v] != self.degree[w] {
            return false;
        }
        self.perm.iter().enumerate().all(|(u, img)| match img {
            Some(x) => self.g.has_edge(u, v) == self.g.has_edge(*x, w),
            None => true,
        })
    }

    fn pin(&mut self, v: usize, w: usize) -> bool {
        match self.perm[v] {
            Some(x) => x == w,
            None if self.consistent(v, w) => {
                self.perm[v] = Some(w);
                self.used[w] = true;
                true
            }
            None => false,
        }
    }

    /// Calls `visit` on each completed automorphism until it returns `false`.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut buf = vec![0; self.g.n];
        self.extend(0, &mut buf, visit);
    }

    fn extend(&mut self, v: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if v == self.g.n {
            for (slot, img) in buf.iter_mut().zip(&self.perm) {
                *slot = img.expect("complete assignment");
            }
            return visit(buf);
        }
        if self.perm[v].is_some() {
            return self.extend(v + 1, buf, visit);
        }
        for w in 0..self.g.n {
            if self.consistent(v, w) {
                self.perm[v] = Some(w);
                self.used[w] = true;
                let go_on = self.extend(v + 1, buf, visit);
                self.perm[v] = None;
                self.used[w] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

/// `a ∘ b`, i.e. `v ↦ a(b(v))`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(p: &[usize]) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (v, &img) in p.iter().enumerate() {
        inv[img] = v;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_edge_counts() {
        assert_eq!(Graph::make_named("complete", 5).unwrap().edge_count(), 20);
        assert_eq!(Graph::make_named("cycle", 5).unwrap().edge_count(), 10);
        let p = Graph::make_named("petersen", 0).unwrap();
        assert_eq!((p.n(), p.edge_count()), (10, 30));
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn named_errors() {
        assert!(matches!(Graph::make_named("wheel", 5), Err(Error::UnknownGraph(_))));
        assert!(Graph::make_named("complete", 2).is_err());
        assert!(Graph::make_named("cycle", 1).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(Graph::complete(5).unwrap().automorphisms().unwrap().len(), 120);
        assert_eq!(Graph::cycle(5).unwrap().automorphisms().unwrap().len(), 10);
        assert_eq!(Graph::petersen().automorphisms().unwrap().len(), 120);
        let p3 = Graph::path(3).unwrap();
        assert_eq!(p3.automorphisms().unwrap(), vec![vec![0, 1, 2], vec![2, 1, 0]]);
    }

    #[test]
    fn transitivity() {
        for g in [Graph::complete(5).unwrap(), Graph::cycle(5).unwrap(), Graph::petersen()] {
            assert!(g.is_vertex_transitive().unwrap(), "{g:?}");
            assert!(g.is_edge_transitive().unwrap(), "{g:?}");
        }
        let p3 = Graph::path(3).unwrap();
        assert!(!p3.is_vertex_transitive().unwrap());
        assert!(p3.is_edge_transitive().unwrap());
        // the end-swap maps (0,1) to (2,1) but nothing maps (0,1) to (1,0)
        assert!(!p3.is_arc_transitive().unwrap());
        assert!(Graph::petersen().is_arc_transitive().unwrap());
    }

    #[test]
    fn too_large() {
        let g = Graph::cycle(13).unwrap();
        assert!(matches!(g.automorphisms(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::parse_edge_list("# pentagon\n0 1\n1 2\n2 3 # c\n3 4\n4 0\n1 0\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 10);
        assert!(g.is_automorphism(&[1, 2, 3, 4, 0]));
        assert!(Graph::parse_edge_list("0 0\n").is_err());
        assert!(Graph::parse_edge_list("0 x\n").is_err());
        assert!(Graph::parse_edge_list("0 1 2\n").is_err());
    }

    #[test]
    fn parse_graph_names() {
        assert_eq!("complete:4".parse::<Graph>().unwrap().edge_count(), 12);
        assert_eq!("petersen".parse::<Graph>().unwrap().n(), 10);
        assert!("cycle:x".parse::<Graph>().is_err());
    }

    #[test]
    fn independent_sets_of_c5() {
        // empty set, five singletons, five non-adjacent pairs
        assert_eq!(Graph::cycle(5).unwrap().independent_sets().unwrap().len(), 11);
    }
}
