//! Simple undirected graphs stored as rows of 64-bit adjacency words.
//!
//! A [`Graph`] is immutable once built: the `with_*`/`without_*` methods return
//! new graphs. Row `u` holds one bit per vertex, so neighbourhood intersections
//! are word-wise `&` plus popcount.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 4096;

pub(crate) mod bits {
    /// Iterator over the set bits of a multi-word row.
    pub struct Ones<'a> {
        words: &'a [u64],
        idx: usize,
        cur: u64,
    }

    impl Iterator for Ones<'_> {
        type Item = usize;

        #[inline]
        fn next(&mut self) -> Option<usize> {
            loop {
                if self.cur != 0 {
                    let tz = self.cur.trailing_zeros() as usize;
                    self.cur &= self.cur - 1;
                    return Some(self.idx * 64 + tz);
                }
                self.idx += 1;
                if self.idx >= self.words.len() {
                    return None;
                }
                self.cur = self.words[self.idx];
            }
        }
    }

    #[inline]
    pub fn ones(words: &[u64]) -> Ones<'_> {
        Ones { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }

    #[inline]
    pub fn count(words: &[u64]) -> usize {
        words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn and_count(a: &[u64], b: &[u64]) -> usize {
        a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }

    #[inline]
    pub fn contains(words: &[u64], i: usize) -> bool {
        words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(words: &mut [u64], i: usize) {
        words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(words: &mut [u64], i: usize) {
        words[i / 64] &= !(1 << (i % 64));
    }

    pub fn words_for(n: usize) -> usize {
        n.div_ceil(64)
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    size: usize,
}

/// An induced subgraph together with the map back to the parent's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `map[i]` is the parent vertex of subgraph vertex `i`.
    pub map: Vec<usize>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let words = bits::words_for(n);
        Ok(Graph { n, words, rows: vec![0; n * words], size: 0 })
    }

    /// Builds a graph from an edge list. Repeated pairs collapse to a single edge.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            if !g.has_edge(u, v) {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        Graph::from_edge_list(n, &edges)
    }

    pub fn path(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edge_list(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("cycle needs n >= 3, got {n}")));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edge_list(n, &edges)
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Adjacency row of `u` as a slice of words.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::contains(self.row(u), v)
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        bits::count(self.row(u))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.row(u))
    }

    /// `|N(u) ∩ N(v)|`.
    #[inline]
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        bits::and_count(self.row(u), self.row(v))
    }

    /// Edges as pairs `(u, v)` with `u < v`, in increasing order of `u`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Degree sequence in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn has_isolated_vertices(&self) -> bool {
        (0..self.n).any(|u| self.degree(u) == 0)
    }

    /// Adjacency lists, convenient for numeric kernels.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|u| self.neighbors(u).collect()).collect()
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::EdgeExists(u, v));
        }
        let mut g = self.clone();
        g.insert_edge(u, v);
        Ok(g)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let mut g = self.clone();
        g.remove_edge(u, v);
        Ok(g)
    }

    /// Adds one isolated vertex, numbered `n`.
    pub fn with_vertex(&self) -> Result<Graph> {
        let mut g = Graph::empty(self.n + 1)?;
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// `G − v`, with the remaining vertices renumbered in order.
    pub fn without_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        Ok(self.induced_subgraph(&keep)?.graph)
    }

    /// Drops every isolated vertex.
    pub fn without_isolated(&self) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| self.degree(u) > 0).collect();
        if keep.len() == self.n {
            return self.clone();
        }
        self.induced_subgraph(&keep).expect("subset of existing vertices").graph
    }

    /// Relabels vertex `u` as `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::InvalidParameters("relabeling is not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut g = Graph::empty(self.n)?;
        for (u, v) in self.edges() {
            g.insert_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// The subgraph induced by `vertices` (in the given order).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if pos[v] != usize::MAX {
                return Err(Error::InvalidParameters(format!("vertex {v} repeated")));
            }
            pos[v] = i;
        }
        let mut g = Graph::empty(vertices.len())?;
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.neighbors(v) {
                let j = pos[w];
                if j != usize::MAX && j > i {
                    g.insert_edge(i, j);
                }
            }
        }
        Ok(InducedSubgraph { graph: g, map: vertices.to_vec() })
    }

    /// `G[N(v)]` with the index map back to `G`.
    pub fn induced_neighborhood(&self, v: usize) -> Result<InducedSubgraph> {
        self.check_vertex(v)?;
        let nbrs: Vec<usize> = self.neighbors(v).collect();
        self.induced_subgraph(&nbrs)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> Result<bool> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(self.reach_count(0) == self.n)
    }

    /// Vertices whose removal disconnects the graph (Hopcroft–Tarjan low-link).
    pub fn cut_vertices(&self) -> Result<Vec<usize>> {
        if !self.is_connected()? {
            return Err(Error::Disconnected);
        }
        let n = self.n;
        let adj = self.adjacency_lists();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        let mut is_cut = vec![false; n];
        let mut next_edge = vec![0usize; n];
        let mut timer = 0;
        let mut root_children = 0;

        disc[0] = timer;
        low[0] = timer;
        timer += 1;
        let mut stack = vec![0usize];
        while let Some(&u) = stack.last() {
            if next_edge[u] < adj[u].len() {
                let w = adj[u][next_edge[u]];
                next_edge[u] += 1;
                if disc[w] == usize::MAX {
                    parent[w] = u;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if u == 0 {
                        root_children += 1;
                    }
                    stack.push(w);
                } else if w != parent[u] {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                let p = parent[u];
                if p != usize::MAX {
                    low[p] = low[p].min(low[u]);
                    if p != 0 && low[u] >= disc[p] {
                        is_cut[p] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[0] = true;
        }
        Ok((0..n).filter(|&v| is_cut[v]).collect())
    }

    fn reach_count(&self, s: usize) -> usize {
        let mut seen = vec![0u64; self.words];
        bits::set(&mut seen, s);
        let mut frontier = vec![s];
        let mut count = 1;
        while let Some(u) = frontier.pop() {
            for w in self.neighbors(u) {
                if !bits::contains(&seen, w) {
                    bits::set(&mut seen, w);
                    count += 1;
                    frontier.push(w);
                }
            }
        }
        count
    }

    #[inline]
    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        let w = self.words;
        bits::set(&mut self.rows[u * w..(u + 1) * w], v);
        bits::set(&mut self.rows[v * w..(v + 1) * w], u);
        self.size += 1;
    }

    #[inline]
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        let w = self.words;
        bits::clear(&mut self.rows[u * w..(u + 1) * w], v);
        bits::clear(&mut self.rows[v * w..(v + 1) * w], u);
        self.size -= 1;
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}
