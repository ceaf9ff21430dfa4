//! Canonical labelling for isomorph rejection.
//!
//! Vertices start in one cell, get refined to the coarsest equitable ordered
//! partition, then individualized one at a time. Every discrete leaf gives a
//! relabelling, and the canonical form is the lexicographically least graph6
//! string among the leaves. Cell order depends only on neighbour counts, so
//! the leaf set is label-invariant.
//!
//! Branching on two twins (`N(a) ∖ {b} = N(b) ∖ {a}`) in the same cell yields
//! isomorphic subtrees, because the transposition `(a b)` is an automorphism
//! that fixes every individualized vertex. So we branch on one vertex per twin
//! class. Without this, stars and complete bipartite graphs would cost `n!`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::graph::{bits, Graph};
use crate::graph6;

/// Label-invariant code of an isomorphism class: the graph6 string of the
/// canonically relabelled graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_graph6(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }

    /// The canonical representative.
    pub fn to_graph(&self) -> Graph {
        graph6::decode(self.as_graph6()).expect("canonical codes are valid graph6")
    }

    /// Wraps a graph6 string that is already canonical (e.g. read back from a cache).
    pub fn from_canonical_graph6(s: &str) -> Result<CanonicalCode> {
        let g = graph6::decode(s)?;
        Ok(canonical_form(&g))
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.as_graph6())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_graph6())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_graph6())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_canonical_graph6(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical code of `g`.
pub fn canonical_form(g: &Graph) -> CanonicalCode {
    canonical_labeling(g).0
}

/// Canonical code plus the relabelling `perm` (vertex `u` gets label `perm[u]`)
/// that produces the canonical representative.
pub fn canonical_labeling(g: &Graph) -> (CanonicalCode, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (CanonicalCode(graph6::encode_bytes(g)), Vec::new());
    }
    let mut search = Search { g, twin: twin_classes(g), best: None };
    search.descend(vec![(0..n).collect()]);
    let (code, order) = search.best.expect("at least one leaf");
    let mut perm = vec![0; n];
    for (label, &v) in order.iter().enumerate() {
        perm[v] = label;
    }
    (CanonicalCode(code), perm)
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Graph) -> Graph {
    canonical_form(g).to_graph()
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.size() == b.size()
        && a.degree_sequence() == b.degree_sequence()
        && canonical_form(a) == canonical_form(b)
}

struct Search<'a> {
    g: &'a Graph,
    twin: Vec<usize>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<Vec<usize>>) {
        refine(self.g, &mut cells);
        if cells.len() == self.g.n() {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = leaf_code(self.g, &order);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, order));
            }
            return;
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
            .expect("non-discrete partition has a non-singleton cell");
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            let class = self.twin[v];
            if tried.contains(&class) {
                continue;
            }
            tried.push(class);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.descend(next);
        }
    }
}

/// Refines an ordered partition to the coarsest equitable refinement. Cells
/// split by neighbour count into the splitter, smallest count first.
fn refine(g: &Graph, cells: &mut Vec<Vec<usize>>) {
    let words = g.row(0).len();
    let mut splitter = vec![0u64; words];
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            splitter.iter_mut().for_each(|w| *w = 0);
            for &v in &cells[s] {
                bits::set(&mut splitter, v);
            }
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            for cell in cells.drain(..) {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(usize, usize)> =
                    cell.iter().map(|&v| (bits::and_count(g.row(v), &splitter), v)).collect();
                if keyed.iter().all(|&(c, _)| c == keyed[0].0) {
                    next.push(cell);
                    continue;
                }
                keyed.sort_by_key(|&(c, _)| c);
                changed = true;
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            *cells = next;
            s += 1;
        }
        if !changed {
            break;
        }
    }
}

fn leaf_code(g: &Graph, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut relabeled = Graph::empty(n).expect("same order as input");
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(order[i], order[j]) {
                relabeled.insert_edge(i, j);
            }
        }
    }
    graph6::encode_bytes(&relabeled)
}

/// Twin class representative for each vertex.
fn twin_classes(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut class: Vec<usize> = (0..n).collect();
    let mut scratch_a = vec![0u64; g.row(0).len()];
    let mut scratch_b = scratch_a.clone();
    for a in 0..n {
        if class[a] != a {
            continue;
        }
        for b in a + 1..n {
            if class[b] != b || g.degree(a) != g.degree(b) {
                continue;
            }
            scratch_a.copy_from_slice(g.row(a));
            scratch_b.copy_from_slice(g.row(b));
            bits::clear(&mut scratch_a, b);
            bits::clear(&mut scratch_b, a);
            if scratch_a == scratch_b {
                class[b] = a;
            }
        }
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    /// Minimum graph6 string over all `n!` relabellings.
    fn brute_force_code(g: &Graph) -> Vec<u8> {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<u8>> = None;
        loop {
            let code = graph6::encode_bytes(&g.relabel(&perm).unwrap());
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        best.unwrap()
    }

    fn graph_from_mask(n: usize, mask: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if mask >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn relabeling_invariance_p4() {
        let a = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edge_list(4, &[(3, 1), (1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&Graph::cycle(4).unwrap()));
    }

    #[test]
    fn eleven_graphs_on_four_vertices() {
        let codes: HashSet<_> = (0..64u64).map(|m| canonical_form(&graph_from_mask(4, m))).collect();
        let oracle: HashSet<_> = (0..64u64).map(|m| brute_force_code(&graph_from_mask(4, m))).collect();
        assert_eq!(codes.len(), 11);
        assert_eq!(oracle.len(), 11);
    }

    #[test]
    fn agrees_with_permutation_oracle_exhaustively_up_to_five() {
        for n in 1..=5 {
            let total = 1u64 << (n * (n - 1) / 2);
            let mut classes = std::collections::HashMap::new();
            for mask in 0..total {
                let g = graph_from_mask(n, mask);
                let ours = canonical_form(&g);
                let theirs = brute_force_code(&g);
                // the map code -> oracle code must be a bijection
                let prev = classes.insert(ours.clone(), theirs.clone());
                if let Some(p) = prev {
                    assert_eq!(p, theirs, "{g:?}");
                }
            }
            let oracle_classes: HashSet<_> = classes.values().collect();
            assert_eq!(oracle_classes.len(), classes.len());
        }
    }

    #[test]
    fn agrees_with_permutation_oracle_on_random_six_and_seven() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let n = rng.gen_range(6..=7);
            let bits = n * (n - 1) / 2;
            let a = graph_from_mask(n, rng.gen::<u64>() & ((1 << bits) - 1));
            let b = graph_from_mask(n, rng.gen::<u64>() & ((1 << bits) - 1));
            let same_oracle = brute_force_code(&a) == brute_force_code(&b);
            assert_eq!(canonical_form(&a) == canonical_form(&b), same_oracle);

            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&a), canonical_form(&a.relabel(&perm).unwrap()));
        }
    }

    #[test]
    fn labeling_reproduces_code() {
        let g = Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        let (code, perm) = canonical_labeling(&g);
        assert_eq!(graph6::encode(&g.relabel(&perm).unwrap()), code.as_graph6());
        assert_eq!(canonical_graph(&canonical_graph(&g)), code.to_graph());
    }

    #[test]
    fn large_symmetric_graphs_are_fast() {
        // star with 200 leaves and K_{2,100}: twin pruning keeps these cheap
        let star = Graph::from_edge_list(201, &(1..201).map(|v| (0, v)).collect::<Vec<_>>()).unwrap();
        let mut perm: Vec<usize> = (0..201).collect();
        perm.reverse();
        assert_eq!(canonical_form(&star), canonical_form(&star.relabel(&perm).unwrap()));
        let mut edges = Vec::new();
        for v in 2..102 {
            edges.push((0, v));
            edges.push((1, v));
        }
        let k2 = Graph::from_edge_list(102, &edges).unwrap();
        let mut perm: Vec<usize> = (0..102).collect();
        perm.rotate_left(37);
        assert_eq!(canonical_form(&k2), canonical_form(&k2.relabel(&perm).unwrap()));
    }
}
