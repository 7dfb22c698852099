//! Fusion graphs: undirected black edges (single edges, loops allowed) plus
//! directed red edges, with Frobenius-Perron data, path enumeration, and
//! hom-space dimension counts.
//!
//! Vertices are 1-based, matching the labels used in the coordinate tables.

use crate::scalar::{Dyadic, PrecisionContext, RealBall};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    VertexRange(usize),
    #[error("duplicate black edge {0}-{1} (multigraphs are not supported)")]
    MultiEdge(usize, usize),
    #[error("duplicate red edge {0}->{1}")]
    MultiRedEdge(usize, usize),
    #[error("black subgraph is disconnected")]
    Disconnected,
    #[error("Frobenius-Perron data failed to certify at the requested precision")]
    FpCertification,
}

/// 1-based vertex id.
pub type Vertex = usize;

#[derive(Clone, Debug)]
pub struct FusionGraph {
    vertex_count: usize,
    /// Symmetric 0/1 adjacency, diagonal marks loops.
    adj: Vec<Vec<u8>>,
    black_edges: BTreeSet<(Vertex, Vertex)>,
    red_edges: BTreeSet<(Vertex, Vertex)>,
}

/// A path of length m is a vertex sequence of length m+1 whose consecutive
/// vertices are black-adjacent. Length 0 paths are single vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> Vertex {
        self.0[0]
    }

    pub fn target(&self) -> Vertex {
        *self.0.last().unwrap()
    }
}

impl FusionGraph {
    pub fn new(
        vertex_count: usize,
        black: &[(Vertex, Vertex)],
        red: &[(Vertex, Vertex)],
    ) -> Result<Self, GraphError> {
        let mut g = FusionGraph {
            vertex_count,
            adj: vec![vec![0; vertex_count + 1]; vertex_count + 1],
            black_edges: BTreeSet::new(),
            red_edges: BTreeSet::new(),
        };
        for &(u, v) in black {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(GraphError::VertexRange(u.max(v)));
            }
            let (a, b) = (u.min(v), u.max(v));
            if !g.black_edges.insert((a, b)) {
                return Err(GraphError::MultiEdge(a, b));
            }
            g.adj[a][b] = 1;
            g.adj[b][a] = 1;
        }
        for &(u, v) in red {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(GraphError::VertexRange(u.max(v)));
            }
            if !g.red_edges.insert((u, v)) {
                return Err(GraphError::MultiRedEdge(u, v));
            }
        }
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        if self.vertex_count == 0 {
            return Err(GraphError::Disconnected);
        }
        let mut seen = vec![false; self.vertex_count + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for u in 1..=self.vertex_count {
                if self.adj[v][u] == 1 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen[1..].iter().all(|&s| s) {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn black_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u][v] == 1
    }

    pub fn black_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.black_edges.iter().copied()
    }

    pub fn red_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.red_edges.iter().copied()
    }

    pub fn has_red_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.red_edges.contains(&(u, v))
    }

    /// Directed black edges (u,v) with u->v, loops once; these index the
    /// rigidity-map sums.
    pub fn directed_black_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for v in 1..=self.vertex_count {
            for u in 1..=self.vertex_count {
                if self.adj[v][u] == 1 {
                    out.push((v, u));
                }
            }
        }
        out
    }

    /// Adjacency matrix as exact integers (1-based vertices flattened into a
    /// 0-based square matrix).
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.adj[i + 1][j + 1] as u64;
            }
        }
        m
    }

    /// tr(Gamma^m * Gamma^n) over exact integers; the number of parallel
    /// (m-path, n-path) pairs with shared endpoints.
    pub fn hom_dim(&self, m: usize, n: usize) -> u64 {
        let a = self.adjacency();
        let size = self.vertex_count;
        let id = {
            let mut e = vec![vec![0u64; size]; size];
            for (i, row) in e.iter_mut().enumerate() {
                row[i] = 1;
            }
            e
        };
        let mul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| {
            let mut out = vec![vec![0u64; size]; size];
            for i in 0..size {
                for k in 0..size {
                    if x[i][k] == 0 {
                        continue;
                    }
                    for j in 0..size {
                        out[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
            out
        };
        let power = |e: usize| {
            let mut acc = id.clone();
            for _ in 0..e {
                acc = mul(&acc, &a);
            }
            acc
        };
        let am = power(m);
        let an = power(n);
        let prod = mul(&am, &an);
        (0..size).map(|i| prod[i][i]).sum()
    }

    /// All black paths of the given length, optionally filtered by endpoint,
    /// in lexicographic order on vertex sequences.
    pub fn enumerate_paths(
        &self,
        length: usize,
        src: Option<Vertex>,
        tgt: Option<Vertex>,
    ) -> Vec<Path> {
        let mut out = Vec::new();
        let starts: Vec<Vertex> = match src {
            Some(s) => vec![s],
            None => (1..=self.vertex_count).collect(),
        };
        let mut current = Vec::with_capacity(length + 1);
        for s in starts {
            current.push(s);
            self.extend_paths(length, tgt, &mut current, &mut out);
            current.pop();
        }
        out
    }

    fn extend_paths(
        &self,
        length: usize,
        tgt: Option<Vertex>,
        current: &mut Vec<Vertex>,
        out: &mut Vec<Path>,
    ) {
        if current.len() == length + 1 {
            if tgt.map(|t| *current.last().unwrap() == t).unwrap_or(true) {
                out.push(Path(current.clone()));
            }
            return;
        }
        let last = *current.last().unwrap();
        for v in 1..=self.vertex_count {
            if self.adj[last][v] == 1 {
                current.push(v);
                self.extend_paths(length, tgt, current, out);
                current.pop();
            }
        }
    }

    /// Dominant eigenvalue and strictly positive eigenvector of the black
    /// adjacency matrix, normalized so the minimum entry is 1. Certified by
    /// Collatz-Wielandt bounds in ball arithmetic.
    pub fn fp_data(&self, ctx: &PrecisionContext) -> Result<(RealBall, Vec<RealBall>), GraphError> {
        let n = self.vertex_count;
        let a = self.adjacency();
        let prec = ctx.bits + 32;

        // f64 power iteration to get close, then ball iterations to certify.
        let mut v = vec![1.0f64; n];
        for _ in 0..2000 {
            let mut w = vec![0.0f64; n];
            for i in 0..n {
                for j in 0..n {
                    if a[i][j] != 0 {
                        w[i] += a[i][j] as f64 * v[j];
                    }
                }
            }
            let norm = w.iter().cloned().fold(0.0f64, f64::max);
            for x in w.iter_mut() {
                *x /= norm;
            }
            v = w;
        }

        let mut ball_v: Vec<RealBall> = v
            .iter()
            .map(|&x| RealBall::exact(crate::scalar::ball::dyadic_from_f64(x, prec)))
            .collect();

        let mat_mul = |v: &[RealBall]| -> Vec<RealBall> {
            (0..n)
                .map(|i| {
                    let mut acc = RealBall::zero();
                    for j in 0..n {
                        if a[i][j] != 0 {
                            let mut t = v[j].clone();
                            for _ in 1..a[i][j] {
                                t = t.add(&v[j], prec);
                            }
                            acc = acc.add(&t, prec);
                        }
                    }
                    acc
                })
                .collect()
        };

        // Collatz-Wielandt refinement: for positive v, the FP eigenvalue lies
        // between min_i (Av)_i/v_i and max_i (Av)_i/v_i.
        let mut bounds = None;
        let target = Dyadic::pow2(-(ctx.bits as i64) + 8);
        for _ in 0..20000 {
            let w = mat_mul(&ball_v);
            let mut lo: Option<Dyadic> = None;
            let mut hi: Option<Dyadic> = None;
            let mut ok = true;
            for i in 0..n {
                if !ball_v[i].is_positive() {
                    ok = false;
                    break;
                }
                let r = match w[i].div(&ball_v[i], prec) {
                    Some(r) => r,
                    None => {
                        ok = false;
                        break;
                    }
                };
                let l = r.lower();
                let u = r.upper();
                lo = Some(match lo {
                    Some(x) => {
                        if l < x {
                            l
                        } else {
                            x
                        }
                    }
                    None => l,
                });
                hi = Some(match hi {
                    Some(x) => {
                        if u > x {
                            u
                        } else {
                            x
                        }
                    }
                    None => u,
                });
            }
            if !ok {
                return Err(GraphError::FpCertification);
            }
            let (lo, hi) = (lo.unwrap(), hi.unwrap());
            let width = hi.sub(&lo);
            bounds = Some((lo.clone(), hi.clone()));
            if width < target {
                break;
            }
            // Normalize w to max entry 1 and iterate.
            let max = w
                .iter()
                .map(|b| b.mid.clone())
                .max()
                .unwrap();
            let max_ball = RealBall::exact(max);
            ball_v = w
                .iter()
                .map(|b| b.div(&max_ball, prec).unwrap())
                .collect();
        }
        let (lo, hi) = bounds.ok_or(GraphError::FpCertification)?;
        let two = Dyadic::from_i64(2);
        let (mid, merr) = lo.add(&hi).div(&two, prec);
        let (rad, rerr) = hi.sub(&lo).div(&two, prec);
        let lambda = RealBall::new(mid, rad.add(&merr).add(&rerr));

        // Normalize eigenvector: minimum entry = 1.
        let min = ball_v
            .iter()
            .map(|b| b.mid.clone())
            .min()
            .unwrap();
        let min_ball = RealBall::exact(min);
        let mut vec_out = Vec::with_capacity(n);
        for b in &ball_v {
            let e = b.div(&min_ball, prec).ok_or(GraphError::FpCertification)?;
            if !e.is_positive() {
                return Err(GraphError::FpCertification);
            }
            vec_out.push(e);
        }
        Ok((lambda, vec_out))
    }
}

// ---------------------------------------------------------------------------
// Text format

/// Parse the graph file format: `vertices N`, `black u v` (u <= v allowed
/// either order; u = v for loops), `red u v` (directed), `#` comments.
pub fn load_graph(text: &str) -> Result<FusionGraph, GraphError> {
    let mut vertices: Option<usize> = None;
    let mut black = Vec::new();
    let mut red = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kw = parts.next().unwrap();
        let parse_usize = |s: Option<&str>| -> Result<usize, GraphError> {
            s.and_then(|x| x.parse().ok()).ok_or(GraphError::Parse {
                line: idx + 1,
                msg: "expected a positive integer".into(),
            })
        };
        match kw {
            "vertices" => {
                vertices = Some(parse_usize(parts.next())?);
            }
            "black" => {
                let u = parse_usize(parts.next())?;
                let v = parse_usize(parts.next())?;
                black.push((u, v));
            }
            "red" => {
                let u = parse_usize(parts.next())?;
                let v = parse_usize(parts.next())?;
                red.push((u, v));
            }
            other => {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("unknown keyword '{other}'"),
                })
            }
        }
    }
    let n = vertices.ok_or(GraphError::Parse { line: 0, msg: "missing 'vertices' line".into() })?;
    FusionGraph::new(n, &black, &red)
}

pub fn save_graph(g: &FusionGraph) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", g.vertex_count()).unwrap();
    for (u, v) in &g.black_edges {
        writeln!(out, "black {u} {v}").unwrap();
    }
    for (u, v) in &g.red_edges {
        writeln!(out, "red {u} {v}").unwrap();
    }
    out
}

/// The level-4 module fusion graph: six vertices, black loops at 2,3,5,6,
/// red loops at 1 and 4, red 2-cycles 2<->6 and 3<->5.
pub fn gamma4() -> FusionGraph {
    FusionGraph::new(
        6,
        &[
            (1, 2),
            (1, 6),
            (2, 3),
            (2, 5),
            (2, 6),
            (3, 4),
            (3, 5),
            (3, 6),
            (4, 5),
            (5, 6),
            (2, 2),
            (3, 3),
            (5, 5),
            (6, 6),
        ],
        &[(1, 1), (4, 4), (2, 6), (6, 2), (3, 5), (5, 3)],
    )
    .expect("gamma4 fixture is valid")
}

/// The level-3 module fusion graph: black triangle on 2,3,4 with loops,
/// center vertex 1, red 3-cycle 2->3->4->2 and a red loop at 1.
pub fn gamma3() -> FusionGraph {
    FusionGraph::new(
        4,
        &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (2, 2), (3, 3), (4, 4)],
        &[(1, 1), (2, 3), (3, 4), (4, 2)],
    )
    .expect("gamma3 fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{delta, q_root, Scalar};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn hom_dims_level4() {
        let g = gamma4();
        assert_eq!(g.hom_dim(2, 1), 88);
        assert_eq!(g.hom_dim(2, 2), 400);
        assert_eq!(g.hom_dim(0, 0), 6);
    }

    #[test]
    fn single_loop_graph() {
        let g = FusionGraph::new(1, &[(1, 1)], &[]).unwrap();
        assert_eq!(g.hom_dim(0, 0), 1);
        let (lambda, v) = g.fp_data(&ctx()).unwrap();
        assert!((lambda.to_f64() - 1.0).abs() < 1e-12);
        assert_eq!(v.len(), 1);
        assert!((v[0].to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fp_matches_loop_polynomial() {
        let c = ctx();
        for (g, level) in [(gamma4(), 4u32), (gamma3(), 3)] {
            let (lambda, v) = g.fp_data(&c).unwrap();
            let d = delta(&q_root(level), &c);
            let lam = Scalar::Ball(crate::scalar::ComplexBall::from_real(lambda.clone()));
            assert!(
                lam.approx_eq(&d, &PrecisionContext::new(c.bits, 1e-9)),
                "level {level}: {} vs {:?}",
                lambda.to_f64(),
                d
            );
            // residual check Gamma v = lambda v

            let a = g.adjacency();
            let n = g.vertex_count();
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += a[i][j] as f64 * v[j].to_f64();
                }
                assert!((acc - lambda.to_f64() * v[i].to_f64()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn path_enumeration() {
        let g3 = gamma3();
        assert_eq!(g3.enumerate_paths(0, None, None).len(), 4);
        let g4 = gamma4();
        let paths = g4.enumerate_paths(2, Some(1), Some(1));
        let expected: Vec<Path> = vec![Path(vec![1, 2, 1]), Path(vec![1, 6, 1])];
        assert_eq!(paths, expected);
        // counts match matrix powers for a spread of (length, src, tgt)
        let a = g4.adjacency();
        let mut a2 = vec![vec![0u64; 6]; 6];
        for i in 0..6 {
            for k in 0..6 {
                for j in 0..6 {
                    a2[i][j] += a[i][k] * a[k][j];
                }
            }
        }
        for s in 1..=6 {
            for t in 1..=6 {
                assert_eq!(
                    g4.enumerate_paths(2, Some(s), Some(t)).len() as u64,
                    a2[s - 1][t - 1]
                );
            }
        }
        let total: u64 = g4.enumerate_paths(2, None, None).len() as u64;
        let sum: u64 = a2.iter().map(|r| r.iter().sum::<u64>()).sum();
        assert_eq!(total, sum);
    }

    #[test]
    fn hom_dim_counts_parallel_pairs() {
        for g in [gamma3(), gamma4()] {
            for m in 0..=3usize {
                for n in 0..=3usize {
                    let mut count = 0u64;
                    for p in g.enumerate_paths(m, None, None) {
                        for q in g.enumerate_paths(n, Some(p.source()), Some(p.target())) {
                            let _ = q;
                            count += 1;
                        }
                    }
                    assert_eq!(count, g.hom_dim(m, n), "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn red_degree_structure() {
        // Every vertex of both fixtures has red in-degree 1 and out-degree 1.
        for g in [gamma3(), gamma4()] {
            for v in 1..=g.vertex_count() {
                let out = g.red_edges().filter(|&(u, _)| u == v).count();
                let inn = g.red_edges().filter(|&(_, w)| w == v).count();
                assert_eq!(out, 1);
                assert_eq!(inn, 1);
            }
        }
    }

    #[test]
    fn file_roundtrip_and_validation() {
        let g = gamma4();
        let text = save_graph(&g);
        let g2 = load_graph(&text).unwrap();
        assert_eq!(g2.vertex_count(), 6);
        assert_eq!(g2.hom_dim(2, 1), 88);

        assert!(load_graph("vertices 2\nblack 1 2\nblack 2 1\n").is_err()); // multi-edge
        assert!(load_graph("vertices 2\nblack 1 1\n").is_err()); // disconnected
        assert!(load_graph("black 1 2\n").is_err()); // missing vertices
        let ok = load_graph("vertices 1\nblack 1 1 # loop\n").unwrap();
        assert_eq!(ok.vertex_count(), 1);
    }
}
