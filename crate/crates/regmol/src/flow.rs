//! Directed graphs specialized to flow graphs of molecules: induced
//! subgraphs, contraction of a connected subgraph, path-induced tests,
//! acyclicity, and enumeration of topological sorts.

use crate::error::{Error, Result};
use crate::ogposet::{ClosedSubset, Element, Orientation};
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

/// A finite directed multigraph over ordered vertex payloads.
#[derive(Clone, Debug)]
pub struct DiGraph<V> {
    verts: Vec<V>,
    edges: Vec<(usize, usize)>,
}

impl<V: Clone + Ord + Eq + Hash> DiGraph<V> {
    pub fn new(mut verts: Vec<V>) -> Self {
        verts.sort();
        verts.dedup();
        DiGraph {
            verts,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[V] {
        &self.verts
    }

    pub fn edges(&self) -> impl Iterator<Item = (&V, &V)> + '_ {
        self.edges.iter().map(|&(a, b)| (&self.verts[a], &self.verts[b]))
    }

    pub fn vertex_id(&self, v: &V) -> Option<usize> {
        self.verts.binary_search(v).ok()
    }

    pub fn add_edge(&mut self, src: usize, dst: usize) {
        debug_assert!(src < self.verts.len() && dst < self.verts.len());
        self.edges.push((src, dst));
    }

    pub fn add_edge_by_value(&mut self, src: V, dst: V) {
        let s = self.vertex_id(&src).expect("source vertex");
        let d = self.vertex_id(&dst).expect("target vertex");
        self.add_edge(s, d);
    }

    pub fn has_edge_by_value(&self, src: V, dst: V) -> bool {
        match (self.vertex_id(&src), self.vertex_id(&dst)) {
            (Some(s), Some(d)) => self.edges.contains(&(s, d)),
            _ => false,
        }
    }

    /// Deduplicated adjacency (parallel edges collapse).
    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.verts.len()];
        for &(a, b) in &self.edges {
            succ[a].push(b);
        }
        for s in succ.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        succ
    }

    pub fn is_acyclic(&self) -> bool {
        let succ = self.successors();
        let mut state = vec![0u8; self.verts.len()]; // 0 unseen, 1 on stack, 2 done
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..self.verts.len() {
            if state[start] != 0 {
                continue;
            }
            state[start] = 1;
            stack.push((start, 0));
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < succ[v].len() {
                    let next = succ[v][*i];
                    *i += 1;
                    match state[next] {
                        0 => {
                            state[next] = 1;
                            stack.push((next, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// Whether the graph is connected when edge directions are ignored.
    pub fn is_weakly_connected(&self) -> bool {
        if self.verts.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.verts.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.verts.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.verts.len()
    }

    pub fn induced_subgraph(&self, keep: &[V]) -> DiGraph<V> {
        let ids: Vec<usize> = keep.iter().filter_map(|v| self.vertex_id(v)).collect();
        let mut sub = DiGraph::new(ids.iter().map(|&i| self.verts[i].clone()).collect());
        for &(a, b) in &self.edges {
            if ids.contains(&a) && ids.contains(&b) {
                sub.add_edge_by_value(self.verts[a].clone(), self.verts[b].clone());
            }
        }
        sub
    }

    /// All topological sorts, in lexicographic order of vertex values.
    ///
    /// Parallel edges are ignored; a cyclic graph yields nothing.  The
    /// enumeration backtracks over the least available vertex first, which
    /// pins a deterministic order for every decision procedure built on it.
    pub fn topological_sorts(&self) -> TopoSorts<'_, V> {
        let succ = self.successors();
        let mut indegree = vec![0usize; self.verts.len()];
        for (v, outs) in succ.iter().enumerate() {
            let _ = v;
            for &w in outs {
                indegree[w] += 1;
            }
        }
        TopoSorts {
            graph: self,
            succ,
            indegree,
            chosen: Vec::new(),
            cursor: vec![0],
            done: false,
        }
    }

    pub fn count_topological_sorts(&self) -> usize {
        self.topological_sorts().count()
    }

    /// Contraction of the connected induced subgraph on `class` into a
    /// single vertex.
    ///
    /// Edges inside the class disappear; every edge crossing the class
    /// boundary survives as one parallel edge per witness.
    pub fn contract(&self, class: &[V]) -> Result<Contraction<V>> {
        let class_ids: Vec<usize> = class
            .iter()
            .map(|v| self.vertex_id(v).ok_or(Error::NotConnected))
            .collect::<Result<_>>()?;
        if !self.induced_subgraph(class).is_weakly_connected() || class_ids.is_empty() {
            return Err(Error::NotConnected);
        }
        let in_class = |i: usize| class_ids.contains(&i);
        let mut verts: Vec<ContractedVertex<V>> = self
            .verts
            .iter()
            .enumerate()
            .filter(|(i, _)| !in_class(*i))
            .map(|(_, v)| ContractedVertex::Kept(v.clone()))
            .collect();
        verts.push(ContractedVertex::Merged);
        let mut graph = DiGraph::new(verts);
        let resolve = |i: usize| -> ContractedVertex<V> {
            if in_class(i) {
                ContractedVertex::Merged
            } else {
                ContractedVertex::Kept(self.verts[i].clone())
            }
        };
        let mut origin = HashMap::new();
        for (i, v) in self.verts.iter().enumerate() {
            origin.insert(v.clone(), resolve(i));
        }
        for &(a, b) in &self.edges {
            match (in_class(a), in_class(b)) {
                (true, true) => {}
                _ => graph.add_edge_by_value(resolve(a), resolve(b)),
            }
        }
        Ok(Contraction { graph, origin })
    }

    /// Whether the induced subgraph on `class` is path-induced (convex):
    /// no path between class vertices may leave the class.
    ///
    /// When the induced subgraph is connected this is equivalent to
    /// acyclicity of the contraction; the direct check used here is total.
    pub fn is_path_induced(&self, class: &[V]) -> Result<bool> {
        if !self.is_acyclic() {
            return Err(Error::Input("graph must be acyclic".into()));
        }
        let in_class: Vec<bool> = self
            .verts
            .iter()
            .map(|v| class.contains(v))
            .collect();
        let succ = self.successors();
        // walk forward from class exits while staying outside the class;
        // reaching the class again witnesses an escaping path
        let mut seen = vec![false; self.verts.len()];
        let mut stack: Vec<usize> = Vec::new();
        for (v, outs) in succ.iter().enumerate() {
            if in_class[v] {
                for &w in outs {
                    if !in_class[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if in_class[w] {
                    return Ok(false);
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok(true)
    }
}

impl<V: Clone + Ord + Eq + Hash + fmt::Display> DiGraph<V> {
    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n");
        for v in &self.verts {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// A vertex of a contracted graph: either kept from the base graph or the
/// single merged class vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ContractedVertex<V> {
    Kept(V),
    Merged,
}

impl<V: fmt::Display> fmt::Display for ContractedVertex<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractedVertex::Kept(v) => write!(f, "{v}"),
            ContractedVertex::Merged => write!(f, "*"),
        }
    }
}

/// Result of contracting a connected subgraph, with the vertex origin map.
#[derive(Clone, Debug)]
pub struct Contraction<V> {
    pub graph: DiGraph<ContractedVertex<V>>,
    pub origin: HashMap<V, ContractedVertex<V>>,
}

/// Backtracking enumerator of topological sorts.
pub struct TopoSorts<'g, V> {
    graph: &'g DiGraph<V>,
    succ: Vec<Vec<usize>>,
    indegree: Vec<usize>,
    chosen: Vec<usize>,
    // cursor[d] = next candidate vertex id to try at depth d
    cursor: Vec<usize>,
    done: bool,
}

impl<'g, V: Clone + Ord + Eq + Hash> TopoSorts<'g, V> {
    fn pick(&mut self) -> Option<usize> {
        let depth = self.chosen.len();
        let start = self.cursor[depth];
        for v in start..self.graph.verts.len() {
            if self.indegree[v] == 0 && !self.chosen.contains(&v) {
                self.cursor[depth] = v + 1;
                return Some(v);
            }
        }
        None
    }

    fn push(&mut self, v: usize) {
        self.chosen.push(v);
        for &w in &self.succ[v] {
            self.indegree[w] -= 1;
        }
        self.cursor.push(0);
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().expect("nonempty");
        for &w in &self.succ[v] {
            self.indegree[w] += 1;
        }
        self.cursor.pop();
    }
}

impl<'g, V: Clone + Ord + Eq + Hash> Iterator for TopoSorts<'g, V> {
    type Item = Vec<V>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.graph.verts.len();
        if self.chosen.len() == n {
            // backtrack off the previously emitted sort
            if n == 0 {
                self.done = true;
                return Some(Vec::new());
            }
            self.pop();
        }
        loop {
            match self.pick() {
                Some(v) => {
                    self.push(v);
                    if self.chosen.len() == n {
                        return Some(
                            self.chosen
                                .iter()
                                .map(|&i| self.graph.verts[i].clone())
                                .collect(),
                        );
                    }
                }
                None => {
                    if self.chosen.is_empty() {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}

/// The `k`-flow graph of a closed subset: vertices are the elements of
/// dimension above `k` (only the maximal ones when `maximal_only`), with an
/// edge `x -> y` whenever an output `k`-face of `x` is an input `k`-face of
/// `y`.
pub fn flow_graph(subset: &ClosedSubset, k: isize, maximal_only: bool) -> DiGraph<Element> {
    let verts: Vec<Element> = if maximal_only {
        subset
            .maximal_elements()
            .into_iter()
            .filter(|e| e.dim() as isize > k)
            .collect()
    } else {
        subset.elements().filter(|e| e.dim() as isize > k).collect()
    };
    let mut graph = DiGraph::new(verts.clone());
    if k < 0 {
        return graph;
    }
    let owner = subset.owner();
    let face_sets: Vec<(Vec<Element>, Vec<Element>)> = verts
        .iter()
        .map(|&v| {
            let cl = owner.closure_unchecked([v]);
            (
                cl.faces(k, Orientation::Output),
                cl.faces(k, Orientation::Input),
            )
        })
        .collect();
    for (i, x) in verts.iter().enumerate() {
        for (j, y) in verts.iter().enumerate() {
            if face_sets[i].0.iter().any(|z| face_sets[j].1.contains(z)) {
                graph.add_edge_by_value(*x, *y);
            }
        }
    }
    graph
}

/// Acyclicity of the oriented Hasse diagram and of every flow graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcyclicityProfile {
    pub hasse_acyclic: bool,
    pub dimensionwise_acyclic: bool,
}

pub fn acyclicity_profile(subset: &ClosedSubset) -> AcyclicityProfile {
    let hasse_acyclic = oriented_hasse_of_subset(subset).is_acyclic();
    let mut dimensionwise_acyclic = true;
    for k in 0..subset.dim().max(0) {
        if !flow_graph(subset, k, false).is_acyclic() {
            dimensionwise_acyclic = false;
            break;
        }
    }
    // an oriented-Hasse cycle always induces a flow cycle, never the converse
    debug_assert!(!hasse_acyclic || dimensionwise_acyclic);
    AcyclicityProfile {
        hasse_acyclic,
        dimensionwise_acyclic,
    }
}

fn oriented_hasse_of_subset(subset: &ClosedSubset) -> DiGraph<Element> {
    let mut graph = DiGraph::new(subset.elements().collect());
    let owner = subset.owner();
    for x in subset.elements() {
        if x.dim() == 0 {
            continue;
        }
        for y in owner.face_elements(x, Orientation::Input) {
            graph.add_edge_by_value(y, x);
        }
        for y in owner.face_elements(x, Orientation::Output) {
            graph.add_edge_by_value(x, y);
        }
    }
    graph
}
