//! Transition graphs of transfer operators.
//!
//! The graph of `T` has an edge `i -> j` exactly when `T` stores the entry
//! `(j, i)`. Acyclicity of this graph is what makes `T` nilpotent, and the
//! longest directed path fixes how many Born terms survive.

use num_complex::Complex64;

use crate::algebra::{Amplitude, TransferOperator};
use crate::error::{Error, Result};

/// Default cap on the number of paths returned by [`enumerate_paths`].
pub const DEFAULT_PATH_LIMIT: usize = 1_000_000;

/// Directed graph with amplitude-annotated edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    /// `out[i]` lists `(j, t_ji)` for every edge `i -> j`, sorted by `j`.
    out: Vec<Vec<(usize, Amplitude)>>,
}

impl TransitionGraph {
    /// Builds a graph from `(from, to, amplitude)` edges.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Amplitude)>,
    {
        let mut out = vec![Vec::new(); num_vertices];
        for (from, to, t) in edges {
            if from >= num_vertices || to >= num_vertices {
                return Err(Error::IndexOutOfRange {
                    row: to,
                    col: from,
                    dim: num_vertices,
                });
            }
            out[from].push((to, t));
        }
        for (from, targets) in out.iter_mut().enumerate() {
            targets.sort_by_key(|&(to, _)| to);
            if let Some(w) = targets.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry {
                    row: w[0].0,
                    col: from,
                });
            }
        }
        Ok(TransitionGraph { out })
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Edges as `(from, to, amplitude)`, sorted by `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Amplitude)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(from, ts)| ts.iter().map(move |&(to, t)| (from, to, t)))
    }

    /// Successors of `v` with their amplitudes, sorted by vertex.
    pub fn successors(&self, v: usize) -> &[(usize, Amplitude)] {
        &self.out[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out[from]
            .binary_search_by_key(&to, |&(j, _)| j)
            .is_ok()
    }
}

/// The transition graph of `T`: one edge `i -> j` per stored entry `(j, i)`.
pub fn extract_graph(t: &TransferOperator) -> TransitionGraph {
    let out = (0..t.dim()).map(|i| t.column(i).to_vec()).collect();
    TransitionGraph { out }
}

/// Outcome of [`analyze_acyclicity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcyclicityReport {
    Acyclic {
        /// Every edge goes forward in this order.
        topological_order: Vec<usize>,
        /// Edge count of the longest directed path.
        depth: usize,
    },
    Cyclic {
        /// `[v0, v1, ..., vk]` with edges `v0 -> v1 -> ... -> vk -> v0`.
        witness_cycle: Vec<usize>,
    },
}

impl AcyclicityReport {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, AcyclicityReport::Acyclic { .. })
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            AcyclicityReport::Acyclic { depth, .. } => Some(*depth),
            AcyclicityReport::Cyclic { .. } => None,
        }
    }

    pub fn topological_order(&self) -> Option<&[usize]> {
        match self {
            AcyclicityReport::Acyclic {
                topological_order, ..
            } => Some(topological_order),
            AcyclicityReport::Cyclic { .. } => None,
        }
    }

    pub fn witness_cycle(&self) -> Option<&[usize]> {
        match self {
            AcyclicityReport::Cyclic { witness_cycle } => Some(witness_cycle),
            AcyclicityReport::Acyclic { .. } => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Color {
    White,
    Gray,
    Black,
}

/// Three-color depth-first search. Produces a topological order and the
/// longest-path depth, or a directed cycle found through a back edge.
pub fn analyze_acyclicity(g: &TransitionGraph) -> AcyclicityReport {
    let n = g.num_vertices();
    let mut color = vec![Color::White; n];
    let mut postorder = Vec::with_capacity(n);
    // (vertex, index of the next successor to visit)
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if color[root] != Color::White {
            continue;
        }
        color[root] = Color::Gray;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&(w, _)) = g.out[v].get(*next) {
                *next += 1;
                match color[w] {
                    Color::White => {
                        color[w] = Color::Gray;
                        stack.push((w, 0));
                    }
                    Color::Gray => {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return AcyclicityReport::Cyclic {
                            witness_cycle: stack[start..].iter().map(|&(u, _)| u).collect(),
                        };
                    }
                    Color::Black => {}
                }
            } else {
                color[v] = Color::Black;
                postorder.push(v);
                stack.pop();
            }
        }
    }

    postorder.reverse();
    let topological_order = postorder;
    let mut longest = vec![0usize; n];
    for &v in &topological_order {
        for &(w, _) in &g.out[v] {
            longest[w] = longest[w].max(longest[v] + 1);
        }
    }
    AcyclicityReport::Acyclic {
        depth: longest.into_iter().max().unwrap_or(0),
        topological_order,
    }
}

/// A directed walk `i0 -> i1 -> ... -> ik` with the product of its edge
/// amplitudes `t_{i1 i0} t_{i2 i1} ... t_{ik i(k-1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub vertices: Vec<usize>,
    pub weight: Amplitude,
}

impl WeightedPath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// All directed paths from `from` to `to` with at most `max_len` edges, in
/// lexicographic order of their vertex sequences.
///
/// On a cyclic graph the enumeration covers walks (vertices may repeat), so
/// `max_len` must be given. On an acyclic graph `None` means unbounded.
/// Fails with [`Error::PathLimitExceeded`] past [`DEFAULT_PATH_LIMIT`] paths.
pub fn enumerate_paths(
    g: &TransitionGraph,
    from: usize,
    to: usize,
    max_len: Option<usize>,
) -> Result<Vec<WeightedPath>> {
    enumerate_paths_with_limit(g, from, to, max_len, DEFAULT_PATH_LIMIT)
}

/// [`enumerate_paths`] with an explicit cap on the number of paths.
pub fn enumerate_paths_with_limit(
    g: &TransitionGraph,
    from: usize,
    to: usize,
    max_len: Option<usize>,
    limit: usize,
) -> Result<Vec<WeightedPath>> {
    let n = g.num_vertices();
    if from >= n || to >= n {
        return Err(Error::IndexOutOfRange {
            row: to,
            col: from,
            dim: n,
        });
    }
    let max_len = match max_len {
        Some(len) => len,
        None if analyze_acyclicity(g).is_acyclic() => n.saturating_sub(1),
        None => return Err(Error::UnboundedEnumeration),
    };

    struct Walker<'a> {
        g: &'a TransitionGraph,
        to: usize,
        max_len: usize,
        limit: usize,
        vertices: Vec<usize>,
        found: Vec<WeightedPath>,
    }

    impl Walker<'_> {
        fn visit(&mut self, v: usize, weight: Amplitude) -> Result<()> {
            if v == self.to {
                if self.found.len() == self.limit {
                    return Err(Error::PathLimitExceeded { limit: self.limit });
                }
                self.found.push(WeightedPath {
                    vertices: self.vertices.clone(),
                    weight,
                });
            }
            if self.vertices.len() > self.max_len {
                return Ok(());
            }
            for &(w, t) in self.g.successors(v) {
                self.vertices.push(w);
                self.visit(w, weight * t)?;
                self.vertices.pop();
            }
            Ok(())
        }
    }

    let mut walker = Walker {
        g,
        to,
        max_len,
        limit,
        vertices: vec![from],
        found: Vec::new(),
    };
    walker.visit(from, Complex64::new(1.0, 0.0))?;
    Ok(walker.found)
}

/// Sum of the weights of all length-`k` walks from `from` to `to`.
///
/// This equals `(T^k)_{to, from}` and is computed by walking the graph, not
/// by multiplying matrices.
pub fn path_sum_entry(g: &TransitionGraph, from: usize, to: usize, k: usize) -> Amplitude {
    fn walk(
        g: &TransitionGraph,
        v: usize,
        to: usize,
        remaining: usize,
        weight: Amplitude,
    ) -> Amplitude {
        if remaining == 0 {
            return if v == to {
                weight
            } else {
                Amplitude::default()
            };
        }
        g.successors(v)
            .iter()
            .map(|&(w, t)| walk(g, w, to, remaining - 1, weight * t))
            .sum()
    }
    walk(g, from, to, k, Complex64::new(1.0, 0.0))
}
