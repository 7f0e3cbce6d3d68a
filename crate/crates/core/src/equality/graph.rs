use petgraph::graph::{NodeIndex, UnGraph};
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::arith::{Backend, Vector};
use crate::bodies::Zonotope;
use crate::error::{Error, Result};
use crate::mixedvol::surface_area_measure;

/// Generators of `K` joined whenever some atom of `S_{K,…,K}` pairs
/// non-orthogonally with both.
#[derive(Clone, Debug)]
pub struct GeneratorGraph {
    pub graph: UnGraph<Vector, ()>,
    /// Generator indices per connected component, each sorted, ordered by
    /// smallest index.
    pub components: Vec<Vec<usize>>,
}

impl GeneratorGraph {
    pub fn component_of(&self, generator: usize) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&generator))
    }
}

pub fn generator_graph(k: &Zonotope) -> Result<GeneratorGraph> {
    if !k.is_full_dimensional() {
        return Err(Error::Precondition("generator graph needs a full-dimensional K".into()));
    }
    let k = k.to_backend(Backend::Exact)?;
    let gens = k.generators();
    let s = surface_area_measure(&k)?;

    let touching: Vec<Vec<usize>> = s
        .atoms()
        .par_iter()
        .map(|a| (0..gens.len()).filter(|&i| !gens[i].u.dot(&a.w).is_zero()).collect())
        .collect();

    let mut graph = UnGraph::<Vector, ()>::with_capacity(gens.len(), 0);
    for g in gens {
        graph.add_node(g.u.clone());
    }
    let mut uf = UnionFind::<usize>::new(gens.len());
    let mut edges = std::collections::BTreeSet::new();
    for t in &touching {
        for (x, &i) in t.iter().enumerate() {
            for &j in &t[x + 1..] {
                edges.insert((i, j));
            }
        }
    }
    for &(i, j) in &edges {
        graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        uf.union(i, j);
    }
    let labels = uf.into_labeling();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Option<usize>> = vec![None; gens.len()];
    for i in 0..gens.len() {
        let root = labels[i];
        match seen[root] {
            Some(c) => components[c].push(i),
            None => {
                seen[root] = Some(components.len());
                components.push(vec![i]);
            }
        }
    }
    Ok(GeneratorGraph { graph, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;

    #[test]
    fn cube_has_isolated_generators() {
        let g = generator_graph(&Zonotope::cube(3)).unwrap();
        assert_eq!(g.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(g.graph.edge_count(), 0);
        let sq = generator_graph(&Zonotope::cube(2)).unwrap();
        assert_eq!(sq.components.len(), 2);
    }

    #[test]
    fn diagonal_generator_connects_everything() {
        let one = Scalar::one();
        let k = Zonotope::from_int_generators(
            3,
            &[(&[1, 0, 0], one.clone()), (&[0, 1, 0], one.clone()), (&[0, 0, 1], one.clone()), (&[1, 1, 1], one)],
        )
        .unwrap();
        let g = generator_graph(&k).unwrap();
        assert_eq!(g.components.len(), 1);
        assert_eq!(g.components[0], vec![0, 1, 2, 3]);
    }
}
