use crate::{shortest_path_tree, Dist, EdgeId, Graph, ShortestPathTree, VertexId, INF, NO_EDGE, NO_VERTEX};

/// Rooted canonical shortest-path tree with O(1) LCA via an Euler tour and
/// a sparse table of minimum-depth positions.
#[derive(Clone, Debug)]
pub struct SpTree {
    root: VertexId,
    parent: Vec<VertexId>,
    parent_edge: Vec<EdgeId>,
    depth: Vec<u32>,
    dist: Vec<Dist>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    first: Vec<u32>,
    euler: Vec<VertexId>,
    // sparse[j][i] = vertex of min depth in euler[i .. i + 2^j]
    sparse: Vec<Vec<VertexId>>,
}

pub fn build_sp_tree_lca(g: &Graph, root: VertexId) -> SpTree {
    SpTree::from_tree(&shortest_path_tree(g, root, None))
}

impl SpTree {
    pub fn from_tree(t: &ShortestPathTree) -> Self {
        SpTree::from_parents(t.source, t.parent.clone(), t.parent_edge.clone(), t.dist.clone())
    }

    /// Builds from parent pointers; vertices with infinite `dist` other than
    /// the root are treated as outside the tree.
    pub fn from_parents(root: VertexId, parent: Vec<VertexId>, parent_edge: Vec<EdgeId>, dist: Vec<Dist>) -> Self {
        let n = parent.len();
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for v in 0..n {
            let p = parent[v];
            if p != NO_VERTEX && v as VertexId != root {
                children[p as usize].push(v as VertexId);
            }
        }
        let mut depth = vec![0u32; n];
        let mut tin = vec![u32::MAX; n];
        let mut tout = vec![0u32; n];
        let mut first = vec![u32::MAX; n];
        let mut euler = Vec::with_capacity(2 * n);
        let mut timer = 0u32;
        if (root as usize) < n {
            let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
            tin[root as usize] = timer;
            timer += 1;
            first[root as usize] = 0;
            euler.push(root);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&c) = children[v as usize].get(*next) {
                    *next += 1;
                    depth[c as usize] = depth[v as usize] + 1;
                    tin[c as usize] = timer;
                    timer += 1;
                    first[c as usize] = euler.len() as u32;
                    euler.push(c);
                    stack.push((c, 0));
                } else {
                    tout[v as usize] = timer;
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        euler.push(p);
                    }
                }
            }
        }
        let mut sparse = vec![euler.clone()];
        let mut j = 1;
        while (1usize << j) <= euler.len() {
            let prev = &sparse[j - 1];
            let half = 1usize << (j - 1);
            let row: Vec<VertexId> = (0..=euler.len() - (1 << j))
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + half]);
                    if depth[a as usize] <= depth[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(row);
            j += 1;
        }
        SpTree {
            root,
            parent,
            parent_edge,
            depth,
            dist,
            tin,
            tout,
            first,
            euler,
            sparse,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.tin[v as usize] != u32::MAX
    }

    pub fn parent(&self, v: VertexId) -> VertexId {
        self.parent[v as usize]
    }

    pub fn parent_edge(&self, v: VertexId) -> EdgeId {
        self.parent_edge[v as usize]
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }

    /// Distance from the root, or INF outside the tree.
    pub fn dist(&self, v: VertexId) -> Dist {
        if self.contains(v) {
            self.dist[v as usize]
        } else {
            INF
        }
    }

    /// Whether `a` is an ancestor of (or equal to) `b`.
    #[inline]
    pub fn is_ancestor(&self, a: VertexId, b: VertexId) -> bool {
        self.contains(a)
            && self.contains(b)
            && self.tin[a as usize] <= self.tin[b as usize]
            && self.tout[b as usize] <= self.tout[a as usize]
    }

    /// Lowest common ancestor; `None` if either vertex is outside the tree.
    pub fn lca(&self, u: VertexId, v: VertexId) -> Option<VertexId> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let (mut l, mut r) = (self.first[u as usize] as usize, self.first[v as usize] as usize);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let len = r - l + 1;
        let j = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let a = self.sparse[j][l];
        let b = self.sparse[j][r + 1 - (1 << j)];
        Some(if self.depth[a as usize] <= self.depth[b as usize] { a } else { b })
    }

    pub fn euler_len(&self) -> usize {
        self.euler.len()
    }

    /// Machine words held by this index.
    pub fn words(&self) -> usize {
        7 * self.parent.len() + self.euler.len() + self.sparse.iter().map(Vec::len).sum::<usize>()
    }
}

/// Whether edge `e` lies on the tree path between `v` and `w`, i.e. on
/// `P(v, c) ∘ P(c, w)` for `c = lca(v, w)`. When the root lies on the
/// canonical v-w path this is exactly `P(v, root) ∘ P(root, w)`.
pub fn edge_on_canonical_path(tree: &SpTree, g: &Graph, v: VertexId, w: VertexId, e: EdgeId) -> bool {
    let edge = g.edge(e);
    let child = if tree.contains(edge.u) && tree.parent(edge.u) == edge.v && tree.parent_edge(edge.u) == e {
        edge.u
    } else if tree.contains(edge.v) && tree.parent(edge.v) == edge.u && tree.parent_edge(edge.v) == e {
        edge.v
    } else {
        return false;
    };
    debug_assert_ne!(tree.parent_edge(child), NO_EDGE);
    tree.is_ancestor(child, v) != tree.is_ancestor(child, w)
}
