//! Dual graphs of periodic directions as electrical networks: blocks,
//! Kirchhoff currents, moduli from circuit relations and trace matrices.
//!
//! Edge `e` runs from `tail` to `head`. At a vertex the divisor weight is
//! incoming minus outgoing current. "Smallest edge id" means smallest edge
//! index, i.e. input order.

use crate::exactnum::{int, QMatrix, Rational};
use crate::heights::log_big;
use crate::crossratio::primitive_integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlatnetError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("enumeration exceeded {0} assignments")]
    BudgetExceeded(usize),
    #[error("circuit matrix P is singular")]
    SingularP,
    #[error("moduli must be positive")]
    NonPositiveModulus,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl DualGraph {
    /// Graph on vertices `0..nv` named by their index, edges `e1, e2, ...`.
    pub fn from_pairs(nv: usize, edges: &[(usize, usize)]) -> Self {
        DualGraph {
            vertices: (0..nv).map(|v| format!("v{v}")).collect(),
            edges: edges.iter().enumerate().map(|(i, &(t, h))| Edge { id: format!("e{}", i + 1), tail: t, head: h }).collect(),
        }
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize, FlatnetError> {
        self.vertices.iter().position(|v| v == id).ok_or_else(|| FlatnetError::UnknownVertex(id.into()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize, FlatnetError> {
        self.edges.iter().position(|e| e.id == id).ok_or_else(|| FlatnetError::UnknownEdge(id.into()))
    }

    pub fn validate(&self) -> Result<(), FlatnetError> {
        let nv = self.vertices.len();
        if nv == 0 {
            return Err(FlatnetError::InvalidGraph("no vertices".into()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.tail >= nv || e.head >= nv) {
            return Err(FlatnetError::UnknownVertex(format!("endpoint of {}", e.id)));
        }
        if !self.is_connected_without(None) {
            return Err(FlatnetError::Disconnected);
        }
        Ok(())
    }

    /// Connectivity of the graph with one vertex removed.
    fn is_connected_without(&self, removed: Option<usize>) -> bool {
        let nv = self.vertices.len();
        let Some(start) = (0..nv).find(|&v| Some(v) != removed) else { return true };
        let mut uf = UnionFind::new(nv);
        for e in &self.edges {
            if Some(e.tail) != removed && Some(e.head) != removed {
                uf.union(e.tail, e.head);
            }
        }
        (0..nv).all(|v| Some(v) == removed || uf.find(v) == uf.find(start))
    }

    /// Edges of the spanning tree built greedily in edge order.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        (0..self.edges.len()).filter(|&k| uf.union(self.edges[k].tail, self.edges[k].head)).collect()
    }

    /// Fundamental circuits of the greedy spanning tree, one per non-tree
    /// edge: coefficient `+1` on that edge and `+-1` along the tree path
    /// closing it up.
    pub fn fundamental_circuits(&self) -> Vec<Vec<i64>> {
        let tree = self.spanning_tree();
        let in_tree: BTreeSet<usize> = tree.iter().copied().collect();
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if in_tree.contains(&k) {
                continue;
            }
            let mut c = vec![0i64; self.edges.len()];
            c[k] = 1;
            for (t, sign) in self.tree_path(&tree, e.head, e.tail) {
                c[t] += sign;
            }
            out.push(c);
        }
        out
    }

    /// Signed tree edges walked from `a` to `b`.
    fn tree_path(&self, tree: &[usize], a: usize, b: usize) -> Vec<(usize, i64)> {
        let nv = self.vertices.len();
        let mut parent: Vec<Option<(usize, usize, i64)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for &k in tree {
                let e = &self.edges[k];
                let (u, sign) = if e.tail == v {
                    (e.head, 1)
                } else if e.head == v {
                    (e.tail, -1)
                } else {
                    continue;
                };
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, k, sign));
                    stack.push(u);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = b;
        while let Some((p, k, s)) = parent[cur] {
            out.push((k, s));
            cur = p;
        }
        out.reverse();
        out
    }

    /// Subgraph on the given edges and the vertices they touch.
    pub fn restrict(&self, edges: &[usize]) -> DualGraph {
        let vs: BTreeSet<usize> = edges.iter().flat_map(|&k| [self.edges[k].tail, self.edges[k].head]).collect();
        let map: Vec<usize> = vs.iter().copied().collect();
        let idx = |v: usize| map.iter().position(|&x| x == v).unwrap();
        DualGraph {
            vertices: map.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: edges.iter().map(|&k| Edge { id: self.edges[k].id.clone(), tail: idx(self.edges[k].tail), head: idx(self.edges[k].head) }).collect(),
        }
    }

    /// Edges whose removal disconnects the graph.
    pub fn bridges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&k| {
                let mut g = self.clone();
                g.edges.remove(k);
                !g.is_connected_without(None)
            })
            .collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, v: usize) -> usize {
        let p = self.0[v];
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.0[v] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Edge indices of each block, sorted; blocks ordered by smallest edge.
    pub blocks: Vec<Vec<usize>>,
    pub articulation: Vec<usize>,
}

impl BlockDecomposition {
    pub fn block_of(&self, edge: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&edge)).expect("every edge lies in a block")
    }
}

/// Biconnected components. Each loop is its own block.
pub fn block_decomposition(g: &DualGraph) -> Result<BlockDecomposition, FlatnetError> {
    g.validate()?;
    let nv = g.vertices.len();
    let mut st = Tarjan { g, disc: vec![usize::MAX; nv], low: vec![0; nv], time: 0, stack: vec![], blocks: vec![], art: BTreeSet::new() };
    st.dfs(0, None);
    let mut blocks = st.blocks;
    blocks.extend(g.edges.iter().enumerate().filter(|(_, e)| e.is_loop()).map(|(k, _)| vec![k]));
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    Ok(BlockDecomposition { blocks, articulation: st.art.into_iter().collect() })
}

struct Tarjan<'a> {
    g: &'a DualGraph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    art: BTreeSet<usize>,
}

impl Tarjan<'_> {
    fn dfs(&mut self, v: usize, via: Option<usize>) {
        self.disc[v] = self.time;
        self.low[v] = self.time;
        self.time += 1;
        let mut children = 0;
        for (k, e) in self.g.edges.iter().enumerate() {
            if e.is_loop() || Some(k) == via {
                continue;
            }
            let u = if e.tail == v {
                e.head
            } else if e.head == v {
                e.tail
            } else {
                continue;
            };
            if self.disc[u] == usize::MAX {
                children += 1;
                self.stack.push(k);
                self.dfs(u, Some(k));
                self.low[v] = self.low[v].min(self.low[u]);
                if self.low[u] >= self.disc[v] {
                    if via.is_some() || children > 1 {
                        self.art.insert(v);
                    }
                    let mut b = Vec::new();
                    while let Some(x) = self.stack.pop() {
                        b.push(x);
                        if x == k {
                            break;
                        }
                    }
                    self.blocks.push(b);
                }
            } else if self.disc[u] < self.disc[v] {
                self.stack.push(k);
                self.low[v] = self.low[v].min(self.disc[u]);
            }
        }
    }
}

/// Divisor `c_v` on vertices and currents `w_e` on edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurrentAssignment {
    pub divisor: Vec<i64>,
    pub currents: Vec<i64>,
}

fn check_shape(g: &DualGraph, a: &CurrentAssignment) -> Result<(), FlatnetError> {
    if a.divisor.len() != g.vertices.len() {
        return Err(FlatnetError::UnknownVertex(format!("divisor has {} entries for {} vertices", a.divisor.len(), g.vertices.len())));
    }
    if a.currents.len() != g.edges.len() {
        return Err(FlatnetError::UnknownEdge(format!("{} currents for {} edges", a.currents.len(), g.edges.len())));
    }
    Ok(())
}

/// Kirchhoff's law: incoming minus outgoing current equals `c_v` everywhere.
pub fn kirchhoff_check(g: &DualGraph, a: &CurrentAssignment) -> Result<bool, FlatnetError> {
    check_shape(g, a)?;
    let mut net = vec![0i64; g.vertices.len()];
    for (e, w) in g.edges.iter().zip(&a.currents) {
        net[e.head] += w;
        net[e.tail] -= w;
    }
    Ok(net == a.divisor)
}

/// All integer currents with `c_{v1} = n`, `c_{v2} = -n` and `|w_e| <= n`,
/// in lexicographic order. Fails once more than `limit` are found.
pub fn enumerate_currents(g: &DualGraph, n: i64, v1: usize, v2: usize, limit: usize) -> Result<Vec<CurrentAssignment>, FlatnetError> {
    g.validate()?;
    let nv = g.vertices.len();
    if v1 >= nv || v2 >= nv {
        return Err(FlatnetError::UnknownVertex(format!("{}", v1.max(v2))));
    }
    if v1 == v2 {
        return Err(FlatnetError::InvalidGraph("source and sink coincide".into()));
    }
    let mut divisor = vec![0i64; nv];
    divisor[v1] = n;
    divisor[v2] = -n;
    let tree = g.spanning_tree();
    let free: Vec<usize> = (0..g.edges.len()).filter(|k| !tree.contains(k)).collect();
    let mut out = Vec::new();
    let mut vals = vec![-n; free.len()];
    loop {
        let mut w = vec![0i64; g.edges.len()];
        for (&k, &x) in free.iter().zip(&vals) {
            w[k] = x;
        }
        if solve_tree_currents(g, &tree, &divisor, &mut w) && w.iter().all(|x| x.abs() <= n) {
            if out.len() == limit {
                return Err(FlatnetError::BudgetExceeded(limit));
            }
            out.push(CurrentAssignment { divisor: divisor.clone(), currents: w });
        }
        // Odometer over the free edges.
        let mut i = free.len();
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.currents.cmp(&b.currents));
                return Ok(out);
            }
            i -= 1;
            if vals[i] < n {
                vals[i] += 1;
                break;
            }
            vals[i] = -n;
        }
    }
}

/// Fills in tree currents by peeling leaves; false if Kirchhoff fails at the
/// last vertex.
fn solve_tree_currents(g: &DualGraph, tree: &[usize], divisor: &[i64], w: &mut [i64]) -> bool {
    let nv = g.vertices.len();
    let mut need: Vec<i64> = divisor.to_vec();
    for (k, e) in g.edges.iter().enumerate() {
        if !tree.contains(&k) {
            need[e.head] -= w[k];
            need[e.tail] += w[k];
        }
    }
    let mut left: BTreeSet<usize> = tree.iter().copied().collect();
    let mut deg = vec![0usize; nv];
    for &k in tree {
        deg[g.edges[k].tail] += 1;
        deg[g.edges[k].head] += 1;
    }
    while let Some(v) = (0..nv).find(|&v| deg[v] == 1) {
        let k = *left.iter().find(|&&k| g.edges[k].tail == v || g.edges[k].head == v).unwrap();
        let e = &g.edges[k];
        if e.head == v {
            w[k] = need[v];
            need[e.tail] += w[k];
        } else {
            w[k] = -need[v];
            need[e.head] -= w[k];
        }
        need[v] = 0;
        let other = e.tail + e.head - v;
        left.remove(&k);
        deg[v] -= 1;
        deg[other] -= 1;
    }
    need.iter().all(|x| *x == 0)
}

/// Moduli of one block as coprime positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockModuli {
    pub edges: Vec<usize>,
    #[serde(serialize_with = "ser_bigints")]
    pub moduli: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum ModuliOutcome {
    Unique { blocks: Vec<BlockModuli> },
    Underdetermined { degrees_of_freedom: usize },
    /// A circuit whose relation cannot hold with positive moduli.
    Infeasible { witness: Vec<i64> },
}

/// Constraint rows `sum_e gamma_e w_e m_e = 0`, one per fundamental circuit
/// and current assignment.
pub fn circuit_rows(g: &DualGraph, constraints: &[CurrentAssignment]) -> Vec<(Vec<i64>, Vec<Rational>)> {
    let circuits = g.fundamental_circuits();
    let mut rows = Vec::new();
    for a in constraints {
        for c in &circuits {
            let row: Vec<Rational> = c.iter().zip(&a.currents).map(|(x, w)| int(x * w)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push((c.clone(), row));
            }
        }
    }
    rows
}

/// Solves the circuit relations for positive moduli up to scaling in each
/// block.
pub fn solve_moduli(g: &DualGraph, constraints: &[CurrentAssignment]) -> Result<ModuliOutcome, FlatnetError> {
    let bd = block_decomposition(g)?;
    for a in constraints {
        check_shape(g, a)?;
    }
    let rows = circuit_rows(g, constraints);
    let mut blocks = Vec::new();
    let mut dof = 0;
    for block in &bd.blocks {
        let local: Vec<&(Vec<i64>, Vec<Rational>)> = rows.iter().filter(|(c, _)| block.iter().any(|&k| c[k] != 0)).collect();
        let basis = if local.is_empty() {
            (0..block.len()).map(|i| (0..block.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
        } else {
            QMatrix::from_rows(local.iter().map(|(_, r)| block.iter().map(|&k| r[k].clone()).collect()).collect()).nullspace()
        };
        // An edge vanishing on the whole solution space is forced to m_e = 0.
        if let Some(i) = (0..block.len()).find(|&i| basis.iter().all(|v: &Vec<Rational>| v[i].is_zero())) {
            let k = block[i];
            let witness = local.iter().find(|(c, _)| c[k] != 0).map(|(c, _)| c.clone()).unwrap_or_default();
            return Ok(ModuliOutcome::Infeasible { witness });
        }
        if basis.len() == 1 {
            let v = &basis[0];
            let pos = v.iter().all(|x| x.is_positive());
            let neg = v.iter().all(|x| x.is_negative());
            if !(pos || neg) {
                let witness = local.iter().map(|(c, _)| c.clone()).next().unwrap_or_default();
                return Ok(ModuliOutcome::Infeasible { witness });
            }
            let ints = primitive_integer(v).expect("nonzero vector");
            let moduli = ints.iter().map(|&x| BigInt::from(x).abs()).collect();
            blocks.push(BlockModuli { edges: block.clone(), moduli });
        } else {
            dof += basis.len() - 1;
        }
    }
    if dof > 0 {
        return Ok(ModuliOutcome::Underdetermined { degrees_of_freedom: dof });
    }
    Ok(ModuliOutcome::Unique { blocks })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightAudit {
    pub block_size: usize,
    pub passes: bool,
    /// `h(m)` as `log max m_i`.
    pub height: f64,
    /// `(n - 1) log N + log (n - 1)!`.
    pub bound: f64,
    pub margin: f64,
}

/// Checks `h(m_1 : ... : m_n) <= (n - 1) log N + log (n - 1)!` for coprime
/// positive integers; the comparison `max m_i <= N^{n-1} (n-1)!` is exact.
pub fn moduli_height_audit(m: &[BigInt], n_order: u64) -> HeightAudit {
    let n = m.len();
    let max = m.iter().cloned().max().unwrap_or_else(BigInt::one);
    let fact: BigInt = (1..n.max(1) as u64).map(BigInt::from).product();
    let limit = BigInt::from(n_order).pow(n.saturating_sub(1) as u32) * &fact;
    let height = log_big(&max);
    let bound = log_big(&limit);
    HeightAudit { block_size: n, passes: max <= limit, height, bound, margin: bound - height }
}

/// Trace matrix `Q = L P^{-1} L^t` of a block, with `L` the cycle basis of
/// fundamental circuits (columns indexed by non-tree edges) and
/// `P = L^t M L`. Rows and columns follow the order of `edges`.
pub fn trace_matrix(g: &DualGraph, edges: &[usize], m: &[Rational]) -> Result<QMatrix, FlatnetError> {
    if m.len() != edges.len() {
        return Err(FlatnetError::InvalidGraph("one modulus per block edge".into()));
    }
    if m.iter().any(|x| !x.is_positive()) {
        return Err(FlatnetError::NonPositiveModulus);
    }
    let sub = g.restrict(edges);
    let bd = block_decomposition(&sub)?;
    if bd.blocks.len() != 1 {
        return Err(FlatnetError::InvalidGraph("edges do not form a single block".into()));
    }
    let circuits = sub.fundamental_circuits();
    let n = edges.len();
    if circuits.is_empty() {
        return Ok(QMatrix::zeros(n, n));
    }
    let l = QMatrix::from_rows((0..n).map(|e| circuits.iter().map(|c| int(c[e])).collect()).collect());
    let p = l.transpose().mul(&QMatrix::diagonal(m)).mul(&l);
    let pinv = p.inverse().ok_or(FlatnetError::SingularP)?;
    Ok(l.mul(&pinv).mul(&l.transpose()))
}

/// Exact positive semidefiniteness through principal minors.
pub fn is_psd(q: &QMatrix) -> bool {
    let n = q.rows();
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub = QMatrix::from_rows(idx.iter().map(|&i| idx.iter().map(|&j| q[(i, j)].clone()).collect()).collect());
        !sub.det().is_negative()
    })
}

/// Totals of the exhaustive moduli audit over a graph catalog.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CatalogAudit {
    pub graphs: usize,
    pub current_families: usize,
    pub unique: usize,
    pub underdetermined: usize,
    pub infeasible: usize,
    pub audited_blocks: usize,
    /// Unique solutions violating some circuit relation.
    pub circuit_failures: usize,
    /// Verdicts disagreeing with the nullspace dimension of the full system.
    pub oracle_mismatches: usize,
    /// Blocks above `(n - 1) log N + log (n - 1)!`.
    pub height_violations: usize,
}

/// For every graph with at most `max_edges` edges, every source pair and
/// every `N <= max_n`, solves the moduli from each single current
/// assignment and checks circuit relations, the nullspace oracle and the
/// height bound.
pub fn catalog_audit(max_edges: usize, max_n: i64) -> CatalogAudit {
    use rayon::prelude::*;
    let cat = graph_catalog(max_edges, true);
    let parts: Vec<CatalogAudit> = cat
        .par_iter()
        .map(|g| {
            let mut a = CatalogAudit { graphs: 1, ..Default::default() };
            let nb = block_decomposition(g).expect("catalog graphs are connected").blocks.len();
            let circuits = g.fundamental_circuits();
            for v1 in 0..g.vertices.len() {
                for v2 in v1 + 1..g.vertices.len() {
                    for n in 1..=max_n {
                        for c in enumerate_currents(g, n, v2, v1, usize::MAX).expect("no limit") {
                            a.current_families += 1;
                            let one = std::slice::from_ref(&c);
                            let rows = circuit_rows(g, one);
                            let dim = if rows.is_empty() {
                                g.edges.len()
                            } else {
                                QMatrix::from_rows(rows.iter().map(|(_, r)| r.clone()).collect()).nullspace().len()
                            };
                            match solve_moduli(g, one).expect("valid input") {
                                ModuliOutcome::Unique { blocks } => {
                                    a.unique += 1;
                                    a.oracle_mismatches += usize::from(dim != nb);
                                    let mut m = vec![BigInt::zero(); g.edges.len()];
                                    for b in &blocks {
                                        for (k, x) in b.edges.iter().zip(&b.moduli) {
                                            m[*k] = x.clone();
                                        }
                                        a.audited_blocks += 1;
                                        a.height_violations += usize::from(!moduli_height_audit(&b.moduli, n as u64).passes);
                                    }
                                    let holds = circuits.iter().all(|cyc| {
                                        cyc.iter().zip(&c.currents).zip(&m).map(|((s, w), x)| BigInt::from(s * w) * x).sum::<BigInt>().is_zero()
                                    });
                                    a.circuit_failures += usize::from(!holds);
                                }
                                ModuliOutcome::Underdetermined { .. } => {
                                    a.underdetermined += 1;
                                    a.oracle_mismatches += usize::from(dim <= nb);
                                }
                                ModuliOutcome::Infeasible { .. } => a.infeasible += 1,
                            }
                        }
                    }
                }
            }
            a
        })
        .collect();
    parts.into_iter().fold(CatalogAudit::default(), |mut t, a| {
        t.graphs += a.graphs;
        t.current_families += a.current_families;
        t.unique += a.unique;
        t.underdetermined += a.underdetermined;
        t.infeasible += a.infeasible;
        t.audited_blocks += a.audited_blocks;
        t.circuit_failures += a.circuit_failures;
        t.oracle_mismatches += a.oracle_mismatches;
        t.height_violations += a.height_violations;
        t
    })
}

/// Connected multigraphs with `1..=max_edges` edges up to isomorphism, with
/// or without loops. Edges are oriented from the smaller to the larger
/// vertex of a canonical labeling.
pub fn graph_catalog(max_edges: usize, loops: bool) -> Vec<DualGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for nv in 1..=max_edges + 1 {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).filter(|(a, b)| loops || a != b).collect();
        if pairs.is_empty() {
            continue;
        }
        let perms = permutations(nv);
        for ne in 1..=max_edges {
            if ne + 1 < nv {
                continue;
            }
            let mut pick = vec![0usize; ne];
            loop {
                let edges: Vec<(usize, usize)> = pick.iter().map(|&i| pairs[i]).collect();
                let g = DualGraph::from_pairs(nv, &edges);
                let touches_all = nv == 1 || (0..nv).all(|v| edges.iter().any(|&(a, b)| a == v || b == v));
                if touches_all && g.is_connected_without(None) {
                    let key = perms
                        .iter()
                        .map(|p| {
                            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                            e.sort_unstable();
                            e
                        })
                        .min()
                        .unwrap();
                    if seen.insert((nv, key.clone())) {
                        out.push(DualGraph::from_pairs(nv, &key));
                    }
                }
                // Next nondecreasing index tuple.
                let Some(i) = (0..ne).rev().find(|&i| pick[i] + 1 < pairs.len()) else { break };
                let v = pick[i] + 1;
                for x in &mut pick[i..] {
                    *x = v;
                }
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, NumberField, Scalar, UniPoly};
    use proptest::prelude::*;

    fn theta() -> DualGraph {
        DualGraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)])
    }

    fn two_edge() -> DualGraph {
        DualGraph::from_pairs(2, &[(0, 1), (0, 1)])
    }

    fn assign(div: &[i64], w: &[i64]) -> CurrentAssignment {
        CurrentAssignment { divisor: div.to_vec(), currents: w.to_vec() }
    }

    /// Blocks as maximal edge sets that are connected with no cut vertex,
    /// found by brute force over subsets.
    fn brute_blocks(g: &DualGraph) -> Vec<Vec<usize>> {
        let ne = g.edges.len();
        let ok = |s: &[usize]| {
            let sub = g.restrict(s);
            if s.len() == 1 {
                return true;
            }
            if s.iter().any(|&k| g.edges[k].is_loop()) {
                return false;
            }
            sub.is_connected_without(None) && (0..sub.vertices.len()).all(|v| sub.is_connected_without(Some(v)))
        };
        let good: Vec<Vec<usize>> = (1u32..1 << ne).map(|m| (0..ne).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>()).filter(|s| ok(s)).collect();
        let mut maximal: Vec<Vec<usize>> = good.iter().filter(|s| !good.iter().any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x)))).cloned().collect();
        maximal.sort();
        maximal
    }

    fn brute_articulation(g: &DualGraph) -> Vec<usize> {
        (0..g.vertices.len()).filter(|&v| !g.is_connected_without(Some(v))).collect()
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_decomposition(&theta()).unwrap().blocks, vec![vec![0, 1, 2]]);
        let g = DualGraph::from_pairs(3, &[(0, 1), (0, 1), (1, 2), (1, 2)]);
        let bd = block_decomposition(&g).unwrap();
        assert_eq!(bd.blocks, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(bd.articulation, vec![1]);
        let lp = DualGraph::from_pairs(1, &[(0, 0)]);
        assert_eq!(block_decomposition(&lp).unwrap().blocks, vec![vec![0]]);
        let disc = DualGraph::from_pairs(3, &[(0, 1)]);
        assert_eq!(block_decomposition(&disc), Err(FlatnetError::Disconnected));
    }

    #[test]
    fn blocks_match_brute_force() {
        let cat = graph_catalog(6, true);
        for g in &cat {
            let bd = block_decomposition(g).unwrap();
            assert_eq!(bd.blocks, brute_blocks(g), "{g:?}");
            if g.vertices.len() > 1 {
                assert_eq!(bd.articulation, brute_articulation(g), "{g:?}");
            }
        }
    }

    #[test]
    fn catalog_sizes() {
        // Connected loopless multigraphs with exactly 1, 2, 3 edges up to
        // isomorphism: 1, 2, 5.
        let c = graph_catalog(3, false);
        let count = |k: usize| c.iter().filter(|g| g.edges.len() == k).count();
        assert_eq!((count(1), count(2), count(3)), (1, 2, 5));
    }

    #[test]
    fn kirchhoff_examples() {
        let g = theta();
        assert!(kirchhoff_check(&g, &assign(&[-3, 3], &[1, 1, 1])).unwrap());
        assert!(!kirchhoff_check(&g, &assign(&[-3, 3], &[1, 1, 2])).unwrap());
        let tri = DualGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(kirchhoff_check(&tri, &assign(&[0, 0, 0], &[2, 2, 2])).unwrap());
        assert!(matches!(kirchhoff_check(&tri, &assign(&[0, 0], &[2, 2, 2])), Err(FlatnetError::UnknownVertex(_))));
    }

    #[test]
    fn current_enumeration() {
        let g = two_edge();
        let ws = |n| enumerate_currents(&g, n, 1, 0, 1000).unwrap().into_iter().map(|a| a.currents).collect::<Vec<_>>();
        assert_eq!(ws(3), vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(ws(1), vec![vec![0, 1], vec![1, 0]]);
        let t = enumerate_currents(&theta(), 1, 1, 0, 1000).unwrap();
        let mut brute = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    if a + b + c == 1 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(t.iter().map(|a| a.currents.clone()).collect::<Vec<_>>(), brute);
        assert!(t.iter().all(|a| kirchhoff_check(&theta(), a).unwrap()));
        assert_eq!(enumerate_currents(&theta(), 4, 1, 0, 3), Err(FlatnetError::BudgetExceeded(3)));
    }

    #[test]
    fn moduli_examples() {
        let unique = |g: &DualGraph, w: &[i64]| match solve_moduli(g, &[assign(&[-w.iter().sum::<i64>(), w.iter().sum()], w)]).unwrap() {
            ModuliOutcome::Unique { blocks } => blocks[0].moduli.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":"),
            o => format!("{o:?}"),
        };
        assert_eq!(unique(&two_edge(), &[2, 1]), "1:2");
        assert_eq!(unique(&theta(), &[1, 1, 1]), "1:1:1");
        assert!(matches!(solve_moduli(&theta(), &[assign(&[-3, 3], &[3, 0, 0])]).unwrap(), ModuliOutcome::Infeasible { .. }));
        assert!(matches!(solve_moduli(&theta(), &[assign(&[-1, 1], &[2, 0, -1])]).unwrap(), ModuliOutcome::Infeasible { .. }));
        assert_eq!(solve_moduli(&theta(), &[]).unwrap(), ModuliOutcome::Underdetermined { degrees_of_freedom: 2 });
    }

    #[test]
    fn height_audit_examples() {
        let a = moduli_height_audit(&[BigInt::from(1), BigInt::from(2)], 2);
        assert!(a.passes && a.margin.abs() < 1e-12);
        assert!(moduli_height_audit(&vec![BigInt::from(1); 3], 1).passes);
        assert!(!moduli_height_audit(&[BigInt::from(1), BigInt::from(5)], 2).passes);
    }

    #[test]
    fn trace_matrix_examples() {
        let g = two_edge();
        let q = trace_matrix(&g, &[0, 1], &[int(1), int(2)]).unwrap();
        assert_eq!(q, QMatrix::from_rows(vec![vec![rat(1, 3), rat(-1, 3)], vec![rat(-1, 3), rat(1, 3)]]));
        let q2 = trace_matrix(&g, &[0, 1], &[int(2), int(4)]).unwrap();
        assert_eq!(q2, q.scale(&rat(1, 2)));
        let t = trace_matrix(&theta(), &[0, 1, 2], &[int(1), int(1), int(1)]).unwrap();
        assert!(t.is_symmetric() && is_psd(&t));
        assert_eq!(t.rank(), 2);
        assert_eq!(trace_matrix(&g, &[0, 1], &[int(0), int(1)]), Err(FlatnetError::NonPositiveModulus));
    }

    #[test]
    fn trace_matrix_matches_field_toy() {
        // Widths r_2 = 1/3 + sqrt2/6 and r_1 = -r_2 in Q(sqrt 2) with moduli
        // (1, 2): the Gram matrix of traces equals Q.
        let f = NumberField::new(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        let r2 = f.element(&[rat(1, 3), rat(1, 6)]);
        let r = [r2.neg(), r2];
        let q = trace_matrix(&two_edge(), &[0, 1], &[int(1), int(2)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(r[i].mul(&r[j]).trace(), q[(i, j)]);
            }
        }
    }

    /// Nullspace dimension of all circuit rows over all edges.
    fn full_dim(g: &DualGraph, cs: &[CurrentAssignment]) -> usize {
        let rows = circuit_rows(g, cs);
        if rows.is_empty() {
            return g.edges.len();
        }
        QMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect()).nullspace().len()
    }

    #[test]
    fn small_catalog_solutions() {
        for g in graph_catalog(4, true) {
            let nb = block_decomposition(&g).unwrap().blocks.len();
            for v2 in 1..g.vertices.len() {
                for n in 1..=2 {
                    for a in enumerate_currents(&g, n, 0, v2, 100_000).unwrap() {
                        let out = solve_moduli(&g, std::slice::from_ref(&a)).unwrap();
                        let dim = full_dim(&g, std::slice::from_ref(&a));
                        match &out {
                            ModuliOutcome::Unique { blocks } => {
                                assert_eq!(dim, nb);
                                let mut m = vec![Rational::zero(); g.edges.len()];
                                for b in blocks {
                                    for (k, x) in b.edges.iter().zip(&b.moduli) {
                                        m[*k] = Rational::from_integer(x.clone());
                                    }
                                    assert!(moduli_height_audit(&b.moduli, n as u64).passes);
                                }
                                for (_, row) in circuit_rows(&g, std::slice::from_ref(&a)) {
                                    assert!(row.iter().zip(&m).fold(Rational::zero(), |s, (x, y)| s + x * y).is_zero());
                                }
                            }
                            ModuliOutcome::Underdetermined { .. } => assert!(dim > nb),
                            ModuliOutcome::Infeasible { .. } => {}
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn block_scaling_invariance(ms in prop::collection::vec(1i64..9, 3), q in 1i64..7) {
            let g = theta();
            let m: Vec<Rational> = ms.iter().map(|&x| int(x)).collect();
            let a = trace_matrix(&g, &[0, 1, 2], &m).unwrap();
            let scaled: Vec<Rational> = m.iter().map(|x| x * int(q)).collect();
            let b = trace_matrix(&g, &[0, 1, 2], &scaled).unwrap();
            prop_assert_eq!(b, a.scale(&rat(1, q)));
        }
    }
}
