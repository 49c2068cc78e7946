//! Strand graphs used while gluing diagrams.
//!
//! A [`Net`] is an undirected multigraph whose first `source + target` nodes are
//! boundary points (bottom left-to-right, then top left-to-right). Every
//! boundary point and every vertex leg has degree one; all remaining nodes are
//! interior strand points of degree two. Tracing a net yields which endpoints
//! are joined and how many closed loops were created.

#[derive(Clone, Debug)]
pub(crate) struct Net {
    pub source: usize,
    pub target: usize,
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Leg nodes of each antisymmetric vertex, in leg order.
    pub vertices: Vec<Vec<usize>>,
}

/// Endpoint of a traced strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum End {
    Point(usize),
    Leg { vertex: usize, leg: usize },
}

#[derive(Clone, Debug)]
pub(crate) struct Traced {
    pub links: Vec<(End, End)>,
    pub loops: usize,
}

impl Net {
    pub fn boundary(&self) -> usize {
        self.source + self.target
    }

    pub fn from_parts(source: usize, target: usize, pairs: &[(usize, usize)], legs: Option<&[usize]>) -> Self {
        let mut net = Net {
            source,
            target,
            nodes: source + target,
            edges: pairs.to_vec(),
            vertices: Vec::new(),
        };
        if let Some(legs) = legs {
            net.add_vertex(legs);
        }
        net
    }

    /// Attach a fresh vertex whose leg `k` is wired to node `attach[k]`.
    pub fn add_vertex(&mut self, attach: &[usize]) {
        let first = self.nodes;
        self.nodes += attach.len();
        let legs: Vec<usize> = (first..first + attach.len()).collect();
        for (&leg, &point) in legs.iter().zip(attach) {
            self.edges.push((leg, point));
        }
        self.vertices.push(legs);
    }

    /// `g ∘ f` where `self = f`; caller checks `f.target == g.source`.
    pub fn then(&self, g: &Net) -> Net {
        let (i, j, k) = (self.source, self.target, g.target);
        let mid = i + k;
        let base_f = mid + j;
        let base_g = base_f + (self.nodes - self.boundary());
        let map_f = |x: usize| {
            if x < i {
                x
            } else if x < i + j {
                mid + (x - i)
            } else {
                base_f + (x - i - j)
            }
        };
        let map_g = |x: usize| {
            if x < j {
                mid + x
            } else if x < j + k {
                i + (x - j)
            } else {
                base_g + (x - j - k)
            }
        };
        self.glue(g, i, k, base_g + (g.nodes - g.boundary()), map_f, map_g)
    }

    /// `self ⊗ g`, `self` on the left.
    pub fn beside(&self, g: &Net) -> Net {
        let (i1, j1, i2, j2) = (self.source, self.target, g.source, g.target);
        let src = i1 + i2;
        let base_f = src + j1 + j2;
        let base_g = base_f + (self.nodes - self.boundary());
        let map_f = |x: usize| {
            if x < i1 {
                x
            } else if x < i1 + j1 {
                src + (x - i1)
            } else {
                base_f + (x - i1 - j1)
            }
        };
        let map_g = |x: usize| {
            if x < i2 {
                i1 + x
            } else if x < i2 + j2 {
                src + j1 + (x - i2)
            } else {
                base_g + (x - i2 - j2)
            }
        };
        self.glue(g, src, j1 + j2, base_g + (g.nodes - g.boundary()), map_f, map_g)
    }

    fn glue(
        &self,
        g: &Net,
        source: usize,
        target: usize,
        nodes: usize,
        map_f: impl Fn(usize) -> usize,
        map_g: impl Fn(usize) -> usize,
    ) -> Net {
        let mut edges = Vec::with_capacity(self.edges.len() + g.edges.len());
        edges.extend(self.edges.iter().map(|&(a, b)| (map_f(a), map_f(b))));
        edges.extend(g.edges.iter().map(|&(a, b)| (map_g(a), map_g(b))));
        let mut vertices: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&x| map_f(x)).collect())
            .collect();
        vertices.extend(g.vertices.iter().map(|v| v.iter().map(|&x| map_g(x)).collect()));
        Net {
            source,
            target,
            nodes,
            edges,
            vertices,
        }
    }

    /// Reflection in a horizontal line: bottom and top trade places.
    pub fn reflect(&self) -> Net {
        let (i, j) = (self.source, self.target);
        let map = |x: usize| {
            if x < i {
                j + x
            } else if x < i + j {
                x - i
            } else {
                x
            }
        };
        Net {
            source: j,
            target: i,
            nodes: self.nodes,
            edges: self.edges.iter().map(|&(a, b)| (map(a), map(b))).collect(),
            vertices: self.vertices.clone(),
        }
    }

    /// Replace vertices `v` and `w` by plain strands joining leg `k` of `v`
    /// to leg `perm[k]` of `w`.
    pub fn fuse(&self, v: usize, w: usize, perm: &[usize]) -> Net {
        let mut net = self.clone();
        for (k, &pk) in perm.iter().enumerate() {
            net.edges.push((self.vertices[v][k], self.vertices[w][pk]));
        }
        net.vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != v && idx != w)
            .map(|(_, legs)| legs.clone())
            .collect();
        net
    }

    pub fn trace(&self) -> Traced {
        let mut leg_of = vec![None; self.nodes];
        for (vi, legs) in self.vertices.iter().enumerate() {
            for (k, &node) in legs.iter().enumerate() {
                leg_of[node] = Some((vi, k));
            }
        }
        let boundary = self.boundary();
        let end_of = |node: usize| -> Option<End> {
            if node < boundary {
                Some(End::Point(node))
            } else {
                leg_of[node].map(|(vertex, leg)| End::Leg { vertex, leg })
            }
        };

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.nodes];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push(e);
            adj[b].push(e);
        }
        let other = |e: usize, x: usize| {
            let (a, b) = self.edges[e];
            if a == x {
                b
            } else {
                a
            }
        };
        let mut used = vec![false; self.edges.len()];

        // follow a strand from `node` leaving along edge `e`, until an endpoint
        // or until the starting edge is met again
        let walk = |mut node: usize, mut e: usize, used: &mut Vec<bool>| -> Option<usize> {
            let first = e;
            loop {
                used[e] = true;
                node = other(e, node);
                if end_of(node).is_some() {
                    return Some(node);
                }
                let next = adj[node]
                    .iter()
                    .copied()
                    .find(|&f| f != e)
                    .expect("interior strand point of degree two");
                if next == first {
                    return None;
                }
                e = next;
            }
        };

        let mut links = Vec::new();
        for start in 0..self.nodes {
            if let Some(start_end) = end_of(start) {
                let e = adj[start][0];
                if used[e] {
                    continue;
                }
                let stop = walk(start, e, &mut used).expect("open strand ends at an endpoint");
                let stop_end = end_of(stop).unwrap();
                links.push(if start_end <= stop_end {
                    (start_end, stop_end)
                } else {
                    (stop_end, start_end)
                });
            }
        }
        let mut loops = 0;
        for e in 0..self.edges.len() {
            if !used[e] {
                let start = self.edges[e].0;
                let closed = walk(start, e, &mut used);
                debug_assert!(closed.is_none());
                loops += 1;
            }
        }
        links.sort();
        Traced { links, loops }
    }
}
