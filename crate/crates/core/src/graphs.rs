//! Finite simple graphs and the finiteness criteria for the first local
//! cohomology of powers of their edge ideals.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::ideal::{ExponentVector, MonomialIdeal, MAX_DIM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {} outside 1..={dim}", .vertex + 1)]
    VertexOutOfRange { vertex: usize, dim: usize },
    #[error("loop at vertex {}", .0 + 1)]
    Loop(usize),
    #[error("graph has {0} vertices; at least 3 are required")]
    TooFewVertices(usize),
    #[error("vertex {} is isolated", .0 + 1)]
    IsolatedVertex(usize),
    #[error("graph dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
}

/// A simple graph whose vertices are a subset of `{0, ..., dim-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    dim: usize,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Graph on the full vertex set `{0, ..., dim-1}`. Duplicate edges are
    /// merged.
    pub fn new(dim: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if dim > MAX_DIM {
            return Err(GraphError::TooLarge(dim));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= dim {
                    return Err(GraphError::VertexOutOfRange { vertex: w, dim });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            dim,
            vertices: (0..dim).collect(),
            edges: set,
        })
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// `st(v) = {v} ∪ adj(v)`.
    pub fn star(&self, v: usize) -> BTreeSet<usize> {
        let mut s = self.neighbors(v);
        s.insert(v);
        s
    }

    /// Induced subgraph on `keep ∩ V`.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> Graph {
        Graph {
            dim: self.dim,
            vertices: self.vertices.intersection(keep).copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .copied()
                .collect(),
        }
    }

    /// `G \ st(v)`.
    pub fn delete_star(&self, v: usize) -> Graph {
        let st = self.star(v);
        let keep = self.vertices.difference(&st).copied().collect();
        self.induced(&keep)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| !self.edges.iter().any(|&(a, b)| a == v || b == v))
            .collect()
    }

    pub fn without_isolated(&self) -> Graph {
        let iso: BTreeSet<usize> = self.isolated_vertices().into_iter().collect();
        let keep = self.vertices.difference(&iso).copied().collect();
        self.induced(&keep)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.vertices {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if seen.insert(w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-colour the component containing `start`. Returns the colour
    /// classes, or an odd cycle as witness that none exists.
    pub fn two_color(&self, start: usize) -> Result<(Vec<usize>, Vec<usize>), Vec<usize>> {
        let mut color = vec![None::<bool>; self.dim];
        let mut parent = vec![usize::MAX; self.dim];
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for w in self.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        parent[w] = u;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return Err(odd_cycle(&parent, u, w)),
                    Some(_) => {}
                }
            }
        }
        let (mut a, mut b) = (vec![], vec![]);
        for v in 0..self.dim {
            match color[v] {
                Some(false) => a.push(v),
                Some(true) => b.push(v),
                None => {}
            }
        }
        Ok((a, b))
    }

    pub fn is_bipartite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| self.two_color(c[0]).is_ok())
    }

    fn require_criterion_preconditions(&self) -> Result<(), GraphError> {
        if self.vertices.len() < 3 {
            return Err(GraphError::TooFewVertices(self.vertices.len()));
        }
        match self.isolated_vertices().first() {
            Some(&v) => Err(GraphError::IsolatedVertex(v)),
            None => Ok(()),
        }
    }
}

fn odd_cycle(parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let chain = |mut x: usize| {
        let mut c = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            c.push(x);
        }
        c
    };
    let (cu, cw) = (chain(u), chain(w));
    let lca = *cu.iter().find(|x| cw.contains(x)).expect("same BFS tree");
    let mut cycle: Vec<usize> = cu.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = cw.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

/// Squarefree quadric generators, one per edge.
pub fn edge_ideal(g: &Graph) -> MonomialIdeal {
    let gens = g.edges.iter().map(|&(a, b)| {
        let mut e = vec![0; g.dim];
        e[a] = 1;
        e[b] = 1;
        ExponentVector::new(e)
    });
    MonomialIdeal::new(g.dim, gens).expect("edges are inside the ring")
}

/// `G_x`: delete `st(v)` and then every vertex left isolated.
pub fn g_sub_x(g: &Graph, v: usize) -> Result<Graph, GraphError> {
    if !g.vertices.contains(&v) {
        return Err(GraphError::VertexOutOfRange { vertex: v, dim: g.dim });
    }
    Ok(g.delete_star(v).without_isolated())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexWitness {
    /// `G \ st(v)` has isolated vertices.
    IsolatedAfterStar,
    /// `G_v` has a bipartite connected component.
    BipartiteComponent,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub finite: bool,
    /// One entry per vertex, in vertex order.
    pub witnesses: Vec<VertexWitness>,
}

/// Decide whether `λ(H^1_m(R/I(G)^n))` is finite for large `n`: every vertex
/// must leave an isolated vertex after deleting its star, or leave a graph
/// `G_v` with a bipartite component.
pub fn prop45_criterion(g: &Graph) -> Result<FinitenessReport, GraphError> {
    g.require_criterion_preconditions()?;
    let witnesses: Vec<VertexWitness> = g
        .vertices
        .iter()
        .map(|&v| {
            let rest = g.delete_star(v);
            if !rest.isolated_vertices().is_empty() {
                return VertexWitness::IsolatedAfterStar;
            }
            let gx = rest.without_isolated();
            if gx.components().iter().any(|c| gx.two_color(c[0]).is_ok()) {
                VertexWitness::BipartiteComponent
            } else {
                VertexWitness::Fail
            }
        })
        .collect();
    Ok(FinitenessReport {
        finite: witnesses.iter().all(|w| *w != VertexWitness::Fail),
        witnesses,
    })
}

/// True when every `G_v` is bipartite and no star covers the whole graph.
/// A covering star localizes `I(G)` to a maximal ideal, so an empty `G \ st(v)`
/// does not count as bipartite.
pub fn locally_bipartite(g: &Graph) -> Result<bool, GraphError> {
    g.require_criterion_preconditions()?;
    Ok(g.vertices.iter().all(|&v| {
        let rest = g.delete_star(v);
        !rest.vertices.is_empty() && rest.without_isolated().is_bipartite()
    }))
}

/// Height of the edge ideal: the minimum size of a vertex cover.
pub fn height_edge_ideal(g: &Graph) -> usize {
    if g.edges.is_empty() {
        return 0;
    }
    let verts: Vec<usize> = g.vertices.iter().copied().collect();
    let mut best = verts.len();
    for mask in 0u32..(1u32 << verts.len()) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let covered = |x: usize| {
            let pos = verts.binary_search(&x).unwrap();
            mask >> pos & 1 == 1
        };
        if g.edges.iter().all(|&(a, b)| covered(a) || covered(b)) {
            best = size;
        }
    }
    best
}
