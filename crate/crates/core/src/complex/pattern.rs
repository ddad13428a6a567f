//! The subdivision pattern of each 0-tile, derived from a validated rule.
//!
//! Every level-1 cell is located either at a post, at a position along a
//! 0-edge chain, or in the interior of one 0-tile. Refinement copies the
//! pattern of the image colour into each tile using these locations.

use crate::rulespec::{Color, SignedEdge, SubdivisionRuleSpec};

/// Where a level-1 vertex sits relative to the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexLoc {
    Post(usize),
    /// Interior vertex `pos` (1-based) of chain `chain`.
    Chain { chain: usize, pos: usize },
    /// Index among the interior vertices of the 0-tile of this colour.
    Interior { color: Color, index: usize },
}

/// Where a level-1 edge sits relative to the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLoc {
    /// Edge `pos` of chain `chain`; `aligned` if `ends[0]` is nearer the chain start.
    Chain { chain: usize, pos: usize, aligned: bool },
    Interior { color: Color, index: usize },
}

#[derive(Clone, Debug)]
pub struct Pattern {
    pub m: usize,
    pub d: usize,
    pub spec: SubdivisionRuleSpec,
    /// Level-1 vertex at post `j`.
    pub post_vertex: Vec<usize>,
    /// `post_map[j]` = index of the post that post `j` maps to.
    pub post_map: Vec<usize>,
    pub chain_len: Vec<usize>,
    pub vloc: Vec<VertexLoc>,
    pub eloc: Vec<EdgeLoc>,
    pub interior_vertices: [Vec<usize>; 2],
    pub interior_edges: [Vec<usize>; 2],
    /// Level-1 tiles hosted by each 0-tile, increasing.
    pub children: [Vec<usize>; 2],
    /// Rank of a level-1 tile among the children of its host.
    pub child_rank: Vec<usize>,
    /// `edge_users[e] = [forward user, backward user]`.
    pub edge_users: Vec<[usize; 2]>,
    /// `tile_edge_by_zero[t][l]` = boundary entry of tile `t` mapping to 0-edge `l`.
    pub tile_edge_by_zero: Vec<Vec<SignedEdge>>,
    /// `tile_corner_by_label[t][l]` = corner of tile `t` mapping to post `l`.
    pub tile_corner_by_label: Vec<Vec<usize>>,
}

impl Pattern {
    /// Builds the pattern; the rule must already pass validation.
    pub fn new(spec: &SubdivisionRuleSpec) -> Pattern {
        let m = spec.m;
        let post_vertex: Vec<usize> =
            (0..m).map(|j| spec.post_vertex(j).expect("validated rule")).collect();
        let post_map: Vec<usize> = post_vertex.iter().map(|&v| spec.vertices[v].post).collect();

        let mut vloc: Vec<Option<VertexLoc>> = vec![None; spec.vertices.len()];
        let mut eloc: Vec<Option<EdgeLoc>> = vec![None; spec.edges.len()];
        for (j, &v) in post_vertex.iter().enumerate() {
            vloc[v] = Some(VertexLoc::Post(j));
        }
        let mut chain_len = Vec::with_capacity(m);
        for j in 0..m {
            let chain = &spec.chains[j];
            chain_len.push(chain.len());
            let mut cur = post_vertex[j];
            for (pos, &e) in chain.iter().enumerate() {
                let ends = spec.edges[e].ends;
                let aligned = ends[0] == cur;
                cur = if aligned { ends[1] } else { ends[0] };
                eloc[e] = Some(EdgeLoc::Chain { chain: j, pos, aligned });
                if pos + 1 < chain.len() {
                    vloc[cur] = Some(VertexLoc::Chain { chain: j, pos: pos + 1 });
                }
            }
        }

        let mut edge_users = vec![[usize::MAX; 2]; spec.edges.len()];
        for (t, tile) in spec.tiles.iter().enumerate() {
            for se in &tile.boundary {
                edge_users[se.edge][usize::from(!se.forward)] = t;
            }
        }

        let mut interior_vertices: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut interior_edges: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        // An off-curve cell lies inside the host of any tile containing it.
        let mut vertex_host: Vec<Option<Color>> = vec![None; spec.vertices.len()];
        for tile in &spec.tiles {
            for se in &tile.boundary {
                vertex_host[spec.edge_start(*se)] = Some(tile.host);
            }
        }
        for v in 0..spec.vertices.len() {
            if vloc[v].is_none() {
                let color = vertex_host[v].expect("every vertex is a tile corner");
                vloc[v] = Some(VertexLoc::Interior { color, index: interior_vertices[color.index()].len() });
                interior_vertices[color.index()].push(v);
            }
        }
        for e in 0..spec.edges.len() {
            if eloc[e].is_none() {
                let color = spec.tiles[edge_users[e][0]].host;
                eloc[e] = Some(EdgeLoc::Interior { color, index: interior_edges[color.index()].len() });
                interior_edges[color.index()].push(e);
            }
        }

        let mut children: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut child_rank = vec![0; spec.tiles.len()];
        for (t, tile) in spec.tiles.iter().enumerate() {
            child_rank[t] = children[tile.host.index()].len();
            children[tile.host.index()].push(t);
        }

        let mut tile_edge_by_zero = Vec::with_capacity(spec.tiles.len());
        let mut tile_corner_by_label = Vec::with_capacity(spec.tiles.len());
        for (t, tile) in spec.tiles.iter().enumerate() {
            let mut by_zero = vec![SignedEdge { edge: usize::MAX, forward: true }; m];
            for se in &tile.boundary {
                by_zero[spec.edges[se.edge].zero_edge] = *se;
            }
            let mut by_label = vec![usize::MAX; m];
            for v in spec.tile_corners(t) {
                by_label[spec.vertices[v].post] = v;
            }
            tile_edge_by_zero.push(by_zero);
            tile_corner_by_label.push(by_label);
        }

        Pattern {
            m,
            d: spec.d,
            spec: spec.clone(),
            post_vertex,
            post_map,
            chain_len,
            vloc: vloc.into_iter().map(Option::unwrap).collect(),
            eloc: eloc.into_iter().map(Option::unwrap).collect(),
            interior_vertices,
            interior_edges,
            children,
            child_rank,
            edge_users,
            tile_edge_by_zero,
            tile_corner_by_label,
        }
    }

    pub fn host(&self, t: usize) -> Color {
        self.spec.tiles[t].host
    }

    pub fn image(&self, t: usize) -> Color {
        self.spec.tiles[t].image
    }

    /// The tile on the other side of level-1 edge `e` from tile `t`.
    pub fn across(&self, e: usize, t: usize) -> usize {
        let u = self.edge_users[e];
        if u[0] == t {
            u[1]
        } else {
            u[0]
        }
    }
}
