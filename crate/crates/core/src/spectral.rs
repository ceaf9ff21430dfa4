//! Spectral radius, Perron vectors, equitable partitions and quotient matrices.
//!
//! The spectral radius is computed by power iteration on `A + I` from the
//! all-ones vector. The shift makes the iteration matrix primitive for every
//! connected graph, so bipartite graphs (whose spectrum is symmetric) converge
//! instead of oscillating. Disconnected graphs are handled one component at a
//! time and the largest value wins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};
use crate::poly::IntPolynomial;

/// Convergence threshold on successive Rayleigh quotients, relative to `max(1, ρ)`.
pub const RAYLEIGH_TOL: f64 = 1e-13;
/// Required bound on `‖Ax − ρx‖∞` at convergence.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Slack used when comparing spectral quantities.
pub const COMPARE_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Largest matrix accepted by [`char_poly_of`].
pub const MAX_QUOTIENT_ORDER: usize = 16;

/// Result of [`spectral_radius`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub rho: f64,
    /// Unit Perron vector; present only for connected graphs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perron: Option<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
}

impl SpectralResult {
    /// JSON object `{rho, iterations, residual}`, plus `perron` when asked.
    pub fn to_json(&self, with_perron: bool) -> serde_json::Value {
        let mut v = serde_json::json!({
            "rho": self.rho,
            "iterations": self.iterations,
            "residual": self.residual,
        });
        if with_perron {
            v["perron"] = serde_json::json!(self.perron);
        }
        v
    }

    /// Vertex with the largest Perron entry (lowest index on ties).
    pub fn max_entry_vertex(&self) -> Option<usize> {
        let x = self.perron.as_ref()?;
        let mut best = 0;
        for (i, &v) in x.iter().enumerate() {
            if v > x[best] {
                best = i;
            }
        }
        Some(best)
    }
}

/// Compressed adjacency for the inner loop.
struct Csr {
    start: Vec<usize>,
    adj: Vec<usize>,
}

impl Csr {
    fn new(g: &Graph) -> Csr {
        let mut start = Vec::with_capacity(g.n() + 1);
        let mut adj = Vec::with_capacity(2 * g.size());
        start.push(0);
        for u in 0..g.n() {
            adj.extend(g.neighbors(u));
            start.push(adj.len());
        }
        Csr { start, adj }
    }

    fn n(&self) -> usize {
        self.start.len() - 1
    }

    fn neighbours(&self, u: usize) -> &[usize] {
        &self.adj[self.start[u]..self.start[u + 1]]
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
}

/// Power iteration on `A + I` for a connected graph, from a positive start.
fn power_iteration(csr: &Csr, start: Vec<f64>) -> Result<SpectralResult> {
    let n = csr.n();
    if n == 1 {
        return Ok(SpectralResult { rho: 0.0, perron: Some(vec![1.0]), iterations: 0, residual: 0.0 });
    }
    let mut x = start;
    normalize(&mut x);
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        for u in 0..n {
            y[u] = x[u] + csr.neighbours(u).iter().map(|&w| x[w]).sum::<f64>();
        }
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rho = lambda - 1.0;
        residual = x.iter().zip(&y).map(|(&xi, &yi)| (yi - xi - rho * xi).abs()).fold(0.0, f64::max);
        if (lambda - prev).abs() < RAYLEIGH_TOL * lambda.max(1.0) && residual < RESIDUAL_TOL {
            return Ok(SpectralResult { rho, perron: Some(x), iterations: it, residual });
        }
        prev = lambda;
        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual })
}

/// Spectral radius of the adjacency matrix, with the Perron vector for
/// connected graphs.
pub fn spectral_radius(g: &Graph) -> Result<SpectralResult> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let comps = g.components();
    if comps.len() == 1 {
        return power_iteration(&Csr::new(g), vec![1.0; g.n()]);
    }
    let mut best = SpectralResult { rho: 0.0, perron: None, iterations: 0, residual: 0.0 };
    for comp in comps.iter().filter(|c| c.len() > 1) {
        let sub = g.induced_subgraph(comp)?.graph;
        let r = power_iteration(&Csr::new(&sub), vec![1.0; sub.n()])?;
        best.iterations += r.iterations;
        if r.rho > best.rho {
            best.rho = r.rho;
            best.residual = r.residual;
        }
    }
    Ok(best)
}

/// [`spectral_radius`] for a connected graph, iterating from `start` instead
/// of the all-ones vector. Entries must be positive. A start close to the
/// answer (such as the Perron vector of a neighbouring graph) cuts the
/// iteration count sharply.
pub fn spectral_radius_from(g: &Graph, start: &[f64]) -> Result<SpectralResult> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if start.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: start.len() });
    }
    if !g.is_connected()? {
        return Err(Error::Disconnected);
    }
    if start.iter().any(|&v| v.is_nan() || v <= 0.0) {
        return Err(Error::InvalidParameters("start vector must be positive".into()));
    }
    power_iteration(&Csr::new(g), start.to_vec())
}

/// Shorthand for `spectral_radius(g)?.rho`.
pub fn rho(g: &Graph) -> Result<f64> {
    Ok(spectral_radius(g)?.rho)
}

/// `xᵀA x = Σ_{uv ∈ E} 2 x_u x_v`.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: x.len() });
    }
    Ok(g.edges().map(|(u, v)| 2.0 * x[u] * x[v]).sum())
}

/// Ordered list of disjoint, non-empty vertex blocks covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;

    fn try_from(r: PartitionRepr) -> Result<Partition> {
        Partition::new(r.n, r.blocks)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> PartitionRepr {
        PartitionRepr { n: p.n, blocks: p.blocks }
    }
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let mut block_of = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range for n = {n}")));
                }
                if block_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} appears twice")));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is in no block")));
        }
        Ok(Partition { n, blocks, block_of })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }
}

/// Counts `b[i][j] = |N(u) ∩ V_j|` for the first vertex `u` of each block and
/// reports the first block pair where some other vertex disagrees.
fn block_counts(g: &Graph, p: &Partition) -> Result<(Vec<Vec<usize>>, Option<(usize, usize)>)> {
    if p.n() != g.n() {
        return Err(Error::InvalidPartition(format!("partition covers {} vertices, graph has {}", p.n(), g.n())));
    }
    let words = bits::words_for(g.n());
    let masks: Vec<Vec<u64>> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut m = vec![0u64; words];
            for &v in b {
                bits::set(&mut m, v);
            }
            m
        })
        .collect();
    let k = p.len();
    let mut b = vec![vec![0usize; k]; k];
    for (i, block) in p.blocks().iter().enumerate() {
        for (j, mask) in masks.iter().enumerate() {
            let first = bits::and_count(g.row(block[0]), mask);
            if block[1..].iter().any(|&u| bits::and_count(g.row(u), mask) != first) {
                return Ok((b, Some((i, j))));
            }
            b[i][j] = first;
        }
    }
    Ok((b, None))
}

pub fn is_equitable(g: &Graph, p: &Partition) -> Result<bool> {
    Ok(block_counts(g, p)?.1.is_none())
}

/// `k × k` matrix of an equitable partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub b: Vec<Vec<usize>>,
}

impl QuotientMatrix {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    pub fn char_poly(&self) -> Result<IntPolynomial> {
        char_poly(self)
    }

    /// Largest eigenvalue, as the largest real root of the characteristic polynomial.
    pub fn spectral_radius(&self) -> Result<f64> {
        self.char_poly()?.to_polynomial()?.largest_real_root()
    }
}

pub fn quotient_matrix(g: &Graph, p: &Partition) -> Result<QuotientMatrix> {
    match block_counts(g, p)? {
        (b, None) => Ok(QuotientMatrix { b }),
        (_, Some((block, other))) => Err(Error::NotEquitable { block, other }),
    }
}

/// `det(xI − B)` of a quotient matrix.
pub fn char_poly(b: &QuotientMatrix) -> Result<IntPolynomial> {
    let m: Vec<Vec<i128>> = b.b.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    char_poly_of(&m)
}

fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let k = a.len();
    let mut out = vec![vec![0i128; k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..k {
                let t = a[i][l].checked_mul(b[l][j]).ok_or(Error::Overflow)?;
                out[i][j] = out[i][j].checked_add(t).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(out)
}

/// Exact `det(xI − B)` of a square integer matrix by the Faddeev–LeVerrier
/// recurrence `M_i = B M_{i−1} + c_{k−i+1} I`, `c_{k−i} = −tr(B M_i) / i`,
/// where every division is exact.
pub fn char_poly_of(b: &[Vec<i128>]) -> Result<IntPolynomial> {
    let k = b.len();
    if k == 0 || k > MAX_QUOTIENT_ORDER {
        return Err(Error::InvalidParameters(format!("matrix order {k} outside 1..={MAX_QUOTIENT_ORDER}")));
    }
    if let Some(r) = b.iter().find(|r| r.len() != k) {
        return Err(Error::LengthMismatch { expected: k, got: r.len() });
    }
    let mut c = vec![0i128; k + 1];
    c[k] = 1;
    let mut m = vec![vec![0i128; k]; k];
    for i in 1..=k {
        let mut next = mat_mul(b, &m)?;
        for (d, row) in next.iter_mut().enumerate() {
            row[d] = row[d].checked_add(c[k - i + 1]).ok_or(Error::Overflow)?;
        }
        m = next;
        let bm = mat_mul(b, &m)?;
        let mut trace = 0i128;
        for (d, row) in bm.iter().enumerate() {
            trace = trace.checked_add(row[d]).ok_or(Error::Overflow)?;
        }
        debug_assert_eq!(trace % i as i128, 0);
        c[k - i] = -(trace / i as i128);
    }
    Ok(IntPolynomial::new(c))
}

/// Both sides of `ρ(G) ≤ √(ρ²(G − v) + 2d(v) − 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexDeletionBound {
    pub rho: f64,
    pub rho_deleted: f64,
    pub degree: usize,
    pub bound: f64,
}

impl VertexDeletionBound {
    pub fn slack(&self) -> f64 {
        self.bound - self.rho
    }

    pub fn holds(&self) -> bool {
        self.rho <= self.bound + COMPARE_TOL
    }

    pub fn is_tight(&self) -> bool {
        self.slack().abs() <= COMPARE_TOL
    }
}

pub fn vertex_deletion_bound(g: &Graph, v: usize) -> Result<VertexDeletionBound> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let degree = g.degree(v);
    if degree == 0 {
        return Err(Error::InvalidParameters(format!("vertex {v} is isolated")));
    }
    let rho = rho(g)?;
    let rho_deleted = rho_or_zero(&g.without_vertex(v)?)?;
    let bound = (rho_deleted * rho_deleted + 2.0 * degree as f64 - 1.0).sqrt();
    Ok(VertexDeletionBound { rho, rho_deleted, degree, bound })
}

pub fn vertex_deletion_bound_holds(g: &Graph, v: usize) -> Result<bool> {
    Ok(vertex_deletion_bound(g, v)?.holds())
}

fn rho_or_zero(g: &Graph) -> Result<f64> {
    if g.n() == 0 {
        Ok(0.0)
    } else {
        rho(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::poly::{ClosedForm, Polynomial};
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_rho(g: &Graph) -> f64 {
        let n = g.n();
        let m = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
        m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::MIN, f64::max)
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for v in 0..n {
            for u in 0..v {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn stars_and_split_stars() {
        assert!((rho(&families::star(9).unwrap()).unwrap() - 3.0).abs() < 1e-12);
        assert!((rho(&families::star(4).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        let s = families::split_star(6, 2).unwrap();
        assert!((rho(&s).unwrap() - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-12);
        let g = families::star_matching(9, 1).unwrap();
        let p = Polynomial::from_descending(&[1.0, -1.0, -8.0, 6.0]).unwrap();
        assert!((rho(&g).unwrap() - p.largest_real_root().unwrap()).abs() < 1e-9);
        assert!((rho(&g).unwrap() - dense_rho(&g)).abs() < 1e-9);
    }

    #[test]
    fn bipartite_and_disconnected() {
        let c = Graph::cycle(6).unwrap();
        let r = spectral_radius(&c).unwrap();
        assert!((r.rho - 2.0).abs() < 1e-12);
        assert!(r.perron.unwrap().iter().all(|&v| v > 0.0));

        let two = Graph::from_edge_list(7, &[(0, 1), (2, 3), (3, 4), (4, 2), (4, 5)]).unwrap();
        let r = spectral_radius(&two).unwrap();
        assert!(r.perron.is_none());
        assert!((r.rho - dense_rho(&two)).abs() < 1e-9);
        assert_eq!(rho(&Graph::empty(3).unwrap()).unwrap(), 0.0);
        assert_eq!(spectral_radius(&Graph::empty(0).unwrap()), Err(Error::EmptyGraph));
        assert_eq!(spectral_radius(&Graph::empty(1).unwrap()).unwrap().perron, Some(vec![1.0]));
    }

    #[test]
    fn warm_start_matches() {
        let g = families::pendant_split_star(23, 2).unwrap();
        let cold = spectral_radius(&g).unwrap();
        let warm = spectral_radius_from(&g, cold.perron.as_ref().unwrap()).unwrap();
        assert!((cold.rho - warm.rho).abs() < 1e-12);
        assert!(warm.iterations <= 2);
        assert!(spectral_radius_from(&g, &[1.0]).is_err());
        assert!(spectral_radius_from(&Graph::empty(2).unwrap(), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn json_shape() {
        let r = spectral_radius(&Graph::complete(2).unwrap()).unwrap();
        let v = r.to_json(false);
        assert!(v.get("perron").is_none());
        assert!((v["rho"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.to_json(true)["perron"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn quadratic_forms() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(quadratic_form(&k2, &[1.0, 1.0]).unwrap(), 2.0);
        let g = families::double_star(3, 2).unwrap();
        assert_eq!(quadratic_form(&g, &vec![0.0; g.n()]).unwrap(), 0.0);
        let r = spectral_radius(&g).unwrap();
        assert!((quadratic_form(&g, r.perron.as_ref().unwrap()).unwrap() - r.rho).abs() < 1e-9);
        assert!(quadratic_form(&g, &[1.0]).is_err());
    }

    #[test]
    fn dense_oracle_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=10);
            let p = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, n, p);
            let r = spectral_radius(&g).unwrap();
            assert!((r.rho - dense_rho(&g)).abs() < 1e-9, "{g:?}");
            assert!(r.residual < RESIDUAL_TOL);
            if g.size() > 0 && g.is_connected().unwrap() {
                let x = r.perron.unwrap();
                assert!(x.iter().all(|&v| v > 0.0));
                assert!(r.rho >= 2.0 * g.size() as f64 / n as f64 - 1e-9);
                assert!(r.rho <= g.max_degree() as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn equitable_examples() {
        let g = families::pendant_split_star(23, 2).unwrap();
        let p = families::pendant_split_star_partition(23, 2).unwrap();
        let q = quotient_matrix(&g, &p).unwrap();
        assert_eq!(q.b, vec![vec![0, 1, 0, 0], vec![2, 0, 1, 10], vec![0, 1, 0, 10], vec![0, 1, 1, 0]]);
        assert_eq!(q.char_poly().unwrap(), ClosedForm::PendantSplitStar { m: 23, t: 2 }.exact_int().unwrap().unwrap());
        assert!((q.spectral_radius().unwrap() - rho(&g).unwrap()).abs() < 1e-9);

        let p3 = Graph::path(3).unwrap();
        let bad = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(!is_equitable(&p3, &bad).unwrap());
        assert_eq!(quotient_matrix(&p3, &bad), Err(Error::NotEquitable { block: 0, other: 1 }));

        let k5 = Graph::complete(5).unwrap();
        let one = Partition::new(5, vec![(0..5).collect()]).unwrap();
        let q = quotient_matrix(&k5, &one).unwrap();
        assert_eq!(q.b, vec![vec![4]]);
        assert_eq!(q.char_poly().unwrap(), IntPolynomial::new(vec![-4, 1]));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 3]]).is_err());
        let p = Partition::new(3, vec![vec![2], vec![0, 1]]).unwrap();
        assert_eq!(p.block_of(2), 0);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), p);
        assert!(is_equitable(&Graph::path(4).unwrap(), &p).is_err());
    }

    #[test]
    fn char_poly_small() {
        // path on three vertices: x³ − 2x
        let b = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        assert_eq!(char_poly_of(&b).unwrap(), IntPolynomial::from_descending(&[1, 0, -2, 0]));
        assert!(char_poly_of(&[]).is_err());
        assert!(char_poly_of(&vec![vec![0; 17]; 17]).is_err());
        assert!(char_poly_of(&[vec![1, 2]]).is_err());
        assert_eq!(char_poly_of(&[vec![i128::MAX / 2, 0], vec![0, i128::MAX / 2]]), Err(Error::Overflow));
    }

    #[test]
    fn vertex_deletion_examples() {
        for n in 2..9 {
            let k = Graph::complete(n).unwrap();
            let b = vertex_deletion_bound(&k, 0).unwrap();
            assert!(b.holds() && b.is_tight());
            let s = families::star(n).unwrap();
            let b = vertex_deletion_bound(&s, n).unwrap();
            assert!(b.holds() && b.is_tight(), "star {n}");
        }
        let c5 = Graph::cycle(5).unwrap();
        let b = vertex_deletion_bound(&c5, 0).unwrap();
        assert!(b.holds() && b.slack() > 1e-3);
        assert!(vertex_deletion_bound_holds(&Graph::empty(2).unwrap(), 0).is_err());
        assert!(vertex_deletion_bound(&c5, 9).is_err());
    }

    proptest! {
        #[test]
        fn rayleigh_and_positivity(seed in any::<u64>(), n in 2usize..16) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, n, 0.4);
            let r = spectral_radius(&g).unwrap();
            if let Some(x) = &r.perron {
                prop_assert!(x.iter().all(|&v| v > 0.0));
                prop_assert!((quadratic_form(&g, x).unwrap() - r.rho).abs() < 1e-9);
            }
        }
    }
}
