use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::DecompError;
use crate::hull::{GeometricGraph, IncidenceMatrix};

/// Triangles `T_1, ..., T_n` with `T_i ∩ T_{i+1}` an edge. A triangle may
/// occur more than once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularChain {
    pub triangles: Vec<[String; 3]>,
}

impl TriangularChain {
    pub fn vertex_labels(&self) -> BTreeSet<String> {
        self.triangles.iter().flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// The union of the triangles is every vertex of the graph.
    CoverVertices,
    /// Every facet of the incidence matrix contains a chain vertex.
    TouchFacets,
}

/// Facets (as label sets) with no chain vertex.
fn untouched_facets(inc: &IncidenceMatrix, labels: &BTreeSet<String>) -> Vec<usize> {
    (0..inc.facet_count())
        .filter(|&f| !inc.facets[f].ones().any(|v| labels.contains(&inc.labels[v])))
        .collect()
}

pub fn verify_triangular_chain(
    g: &GeometricGraph,
    chain: &TriangularChain,
    mode: ChainMode,
    inc: Option<&IncidenceMatrix>,
) -> Result<bool, DecompError> {
    let mut tris: Vec<BTreeSet<usize>> = Vec::new();
    for t in &chain.triangles {
        let idx = t
            .iter()
            .map(|l| g.index_of(l).ok_or_else(|| DecompError::UnknownLabel(l.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        if set.len() != 3 || !(g.has_edge(idx[0], idx[1]) && g.has_edge(idx[1], idx[2]) && g.has_edge(idx[0], idx[2])) {
            return Ok(false);
        }
        tris.push(set);
    }
    if tris.is_empty() || tris.windows(2).any(|w| w[0].intersection(&w[1]).count() != 2) {
        return Ok(false);
    }
    let labels = chain.vertex_labels();
    Ok(match mode {
        ChainMode::CoverVertices => labels.len() == g.node_count(),
        ChainMode::TouchFacets => match inc {
            Some(inc) => untouched_facets(inc, &labels).is_empty(),
            None => false,
        },
    })
}

/// Searches the triangle-adjacency graph (triangles sharing an edge) for a
/// connected set meeting the target, then walks it as a chain. Returns
/// `None` when no component qualifies or the budget of expansions runs out.
pub fn find_triangular_chain(
    g: &GeometricGraph,
    mode: ChainMode,
    inc: Option<&IncidenceMatrix>,
    budget: usize,
) -> Option<TriangularChain> {
    let tris = g.triangles();
    if tris.is_empty() || budget == 0 {
        return None;
    }
    // Targets: per graph node, the target ids it hits.
    let hits: Vec<Vec<usize>> = match mode {
        ChainMode::CoverVertices => (0..g.node_count()).map(|v| vec![v]).collect(),
        ChainMode::TouchFacets => {
            let inc = inc?;
            (0..g.node_count())
                .map(|v| match inc.labels.iter().position(|l| *l == g.labels[v]) {
                    Some(row) => inc.vertex_facets(row),
                    None => Vec::new(),
                })
                .collect()
        }
    };
    let target_count = match mode {
        ChainMode::CoverVertices => g.node_count(),
        ChainMode::TouchFacets => inc?.facet_count(),
    };

    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            by_edge.entry((a, b)).or_default().push(i);
        }
    }
    let neighbours = |i: usize| -> Vec<usize> {
        let t = tris[i];
        let mut out: Vec<usize> = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
            .iter()
            .flat_map(|e| by_edge[e].iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };

    let mut expansions = 0usize;
    let mut component = vec![usize::MAX; tris.len()];
    for root in 0..tris.len() {
        if component[root] != usize::MAX {
            continue;
        }
        // Breadth-first spanning tree of this component.
        let mut parent = vec![usize::MAX; tris.len()];
        let mut order = vec![root];
        component[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            expansions += 1;
            if expansions > budget {
                return None;
            }
            for j in neighbours(i) {
                if component[j] == usize::MAX {
                    component[j] = root;
                    parent[j] = i;
                    order.push(j);
                    queue.push_back(j);
                }
            }
        }
        // Greedy: keep triangles in BFS order that hit something new.
        let mut covered = vec![false; target_count];
        let mut count = 0;
        let mut useful = Vec::new();
        for &i in &order {
            let mut gain = false;
            for &v in &tris[i] {
                for &t in &hits[v] {
                    if !covered[t] {
                        covered[t] = true;
                        count += 1;
                        gain = true;
                    }
                }
            }
            if gain {
                useful.push(i);
            }
        }
        if count < target_count {
            continue;
        }
        return Some(walk(&tris, g, root, &parent, &useful));
    }
    None
}

/// A walk through the spanning tree visiting every triangle in `useful`,
/// returning through parents between branches.
fn walk(tris: &[[usize; 3]], g: &GeometricGraph, root: usize, parent: &[usize], useful: &[usize]) -> TriangularChain {
    let mut keep = BTreeSet::from([root]);
    for &u in useful {
        let mut i = u;
        while keep.insert(i) {
            i = parent[i];
        }
    }
    let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
    for &i in &keep {
        if i != root {
            children.entry(parent[i]).or_default().push(i);
        }
    }
    let mut seq = Vec::new();
    let mut last_new = 0;
    fn visit(i: usize, children: &HashMap<usize, Vec<usize>>, seq: &mut Vec<usize>, last_new: &mut usize) {
        seq.push(i);
        *last_new = seq.len();
        for &c in children.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
            visit(c, children, seq, last_new);
            seq.push(i);
        }
    }
    visit(root, &children, &mut seq, &mut last_new);
    seq.truncate(last_new);
    TriangularChain {
        triangles: seq
            .into_iter()
            .map(|i| tris[i].map(|v| g.labels[v].clone()))
            .collect(),
    }
}
