//! Cell decompositions of every level, built by repeated pattern pullback.
//!
//! Ids are dense per level. Vertex ids are stable: a vertex keeps its id at
//! every finer level, so vertex data that does not depend on the level lives
//! on [`Complex`]. Corners and boundary edges of a tile are indexed by their
//! image label: corner `l` maps to post `l` and edge `l` maps to 0-edge `l`
//! under the level's iterate, so the same index names the same cell from
//! both sides of a shared edge.

mod pattern;
pub mod point;
pub mod symbolic;

pub use pattern::{EdgeLoc, Pattern, VertexLoc};
pub use point::{containing_tiles, point_resolve, u_neighborhood, Addr, PointError, PointRef};
pub use symbolic::{Letter, Location, SymVertex, Symbolic, Word};

use crate::rulespec::{validate, Color, SubdivisionRuleSpec, ValidationReport};

/// Sentinel for "no such cell".
pub const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(u32),
    Edge(u32),
    Tile(u32),
}

/// A boundary entry: an edge and whether the tile runs it from `ends[0]` to `ends[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    pub edge: u32,
    pub forward: bool,
}

/// Where the cells created while refining a level were allocated.
#[derive(Clone, Debug, Default)]
pub struct ChildBlocks {
    pub edge_vstart: Vec<u32>,
    pub tile_vstart: Vec<u32>,
    pub edge_estart: Vec<u32>,
    pub tile_estart: Vec<u32>,
    pub tile_tstart: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct CellComplexLevel {
    pub n: usize,
    pub m: usize,
    /// Post label of every vertex under the n-th iterate.
    pub vertex_label: Vec<u32>,
    pub edge_ends: Vec<[u32; 2]>,
    pub edge_zero: Vec<u32>,
    /// `[tile running the edge forward, tile running it backward]`.
    pub edge_tiles: Vec<[u32; 2]>,
    pub edge_image: Vec<u32>,
    pub edge_parent: Vec<Cell>,
    /// `m` entries per tile, entry `l` is the side mapping to 0-edge `l`.
    pub tile_sides: Vec<Side>,
    /// `m` entries per tile, entry `l` is the corner mapping to post `l`.
    pub tile_corners: Vec<u32>,
    pub tile_color: Vec<Color>,
    pub tile_parent: Vec<u32>,
    pub tile_letter: Vec<u32>,
    pub tile_image: Vec<u32>,
    /// CSR incidence: tiles at `vertex_tiles[vertex_tiles_start[v]..vertex_tiles_start[v+1]]`.
    pub vertex_tiles_start: Vec<u32>,
    pub vertex_tiles: Vec<u32>,
    pub blocks: Option<ChildBlocks>,
}

impl CellComplexLevel {
    pub fn num_vertices(&self) -> usize {
        self.vertex_label.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn num_tiles(&self) -> usize {
        self.tile_color.len()
    }

    pub fn euler(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_tiles() as i64
    }

    pub fn side(&self, t: u32, l: usize) -> Side {
        self.tile_sides[t as usize * self.m + l]
    }

    pub fn sides(&self, t: u32) -> &[Side] {
        &self.tile_sides[t as usize * self.m..(t as usize + 1) * self.m]
    }

    pub fn corner(&self, t: u32, l: usize) -> u32 {
        self.tile_corners[t as usize * self.m + l]
    }

    pub fn corners(&self, t: u32) -> &[u32] {
        &self.tile_corners[t as usize * self.m..(t as usize + 1) * self.m]
    }

    /// Tiles having `v` as a corner.
    pub fn tiles_at(&self, v: u32) -> &[u32] {
        let a = self.vertex_tiles_start[v as usize] as usize;
        let b = self.vertex_tiles_start[v as usize + 1] as usize;
        &self.vertex_tiles[a..b]
    }

    /// Positive boundary cycle of a tile as sides in traversal order.
    pub fn boundary_cycle(&self, t: u32) -> Vec<Side> {
        let m = self.m;
        match self.tile_color[t as usize] {
            Color::Black => (0..m).map(|l| self.side(t, l)).collect(),
            Color::White => (0..m).rev().map(|l| self.side(t, l)).collect(),
        }
    }

    pub fn side_start(&self, s: Side) -> u32 {
        self.edge_ends[s.edge as usize][usize::from(!s.forward)]
    }

    /// Tiles sharing at least one vertex with `t`, including `t`, sorted.
    pub fn tile_neighbors(&self, t: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self.corners(t).iter().flat_map(|&v| self.tiles_at(v).iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn tiles_meet(&self, a: u32, b: u32) -> bool {
        self.corners(a).iter().any(|v| self.corners(b).contains(v))
    }

    /// Label-`j` end of an edge, the end its chain positions are measured from.
    fn chain_start(&self, e: u32) -> (u32, u32) {
        let [a, b] = self.edge_ends[e as usize];
        if self.vertex_label[a as usize] == self.edge_zero[e as usize] {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("rule is invalid:\n{0}")]
    InvalidRule(ValidationReport),
    #[error("inconsistent boundary merge at level {level}: edge {edge}")]
    InconsistentMerge { level: usize, edge: u32 },
    #[error("level {0} exceeds the id range")]
    TooLarge(usize),
}

/// The flower of a vertex: its incident tiles and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flower {
    pub vertex: u32,
    pub tiles: Vec<u32>,
    pub edges: Vec<u32>,
}

impl Flower {
    /// Local degree of the level's iterate at the vertex.
    pub fn local_degree(&self) -> usize {
        self.tiles.len() / 2
    }
}

/// All levels built so far, plus level-independent vertex data.
#[derive(Clone, Debug)]
pub struct Complex {
    pub pattern: Pattern,
    pub levels: Vec<CellComplexLevel>,
    /// Image of each vertex under the map.
    pub vertex_image: Vec<u32>,
    /// Level at which each vertex first appears.
    pub vertex_birth: Vec<u32>,
    /// Open cell of the level before birth containing the vertex.
    pub vertex_parent: Vec<Option<Cell>>,
}

impl Complex {
    pub fn new(spec: &SubdivisionRuleSpec) -> Result<Complex, ComplexError> {
        let report = validate(spec);
        if !report.is_valid() {
            return Err(ComplexError::InvalidRule(report));
        }
        let pattern = Pattern::new(spec);
        let m = spec.m;
        let mm = m as u32;
        let edge_ends: Vec<[u32; 2]> = (0..mm).map(|j| [j, (j + 1) % mm]).collect();
        let tile_sides: Vec<Side> = (0..2)
            .flat_map(|c| (0..mm).map(move |l| Side { edge: l, forward: c == 0 }))
            .collect();
        let tile_corners: Vec<u32> = (0..2).flat_map(|_| 0..mm).collect();
        let level0 = CellComplexLevel {
            n: 0,
            m,
            vertex_label: (0..mm).collect(),
            edge_ends,
            edge_zero: (0..mm).collect(),
            edge_tiles: vec![[0, 1]; m],
            edge_image: vec![NONE; m],
            edge_parent: vec![Cell::Vertex(NONE); m],
            tile_sides,
            tile_corners,
            tile_color: vec![Color::Black, Color::White],
            tile_parent: vec![NONE; 2],
            tile_letter: vec![NONE; 2],
            tile_image: vec![NONE; 2],
            vertex_tiles_start: (0..=mm).map(|j| 2 * j).collect(),
            vertex_tiles: (0..mm).flat_map(|_| [0, 1]).collect(),
            blocks: None,
        };
        let vertex_image = pattern.post_map.iter().map(|&j| j as u32).collect();
        Ok(Complex {
            pattern,
            levels: vec![level0],
            vertex_image,
            vertex_birth: vec![0; m],
            vertex_parent: vec![None; m],
        })
    }

    pub fn m(&self) -> usize {
        self.pattern.m
    }

    pub fn d(&self) -> usize {
        self.pattern.d
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &CellComplexLevel {
        &self.levels[n]
    }

    /// Builds levels up to and including `n`.
    pub fn build_to(&mut self, n: usize) -> Result<&CellComplexLevel, ComplexError> {
        while self.top() < n {
            self.refine()?;
        }
        Ok(&self.levels[n])
    }

    /// Child of tile `x` at level `n` with the given level-1 letter.
    pub fn child(&self, n: usize, x: u32, letter: usize) -> u32 {
        if n == 0 {
            return letter as u32;
        }
        let blocks = self.levels[n].blocks.as_ref().expect("level refined");
        blocks.tile_tstart[x as usize] + self.pattern.child_rank[letter] as u32
    }

    /// Children of tile `x` at level `n`, in address order.
    pub fn children(&self, n: usize, x: u32) -> Vec<u32> {
        let color = self.levels[n].tile_color[x as usize];
        self.pattern.children[color.index()].iter().map(|&t| self.child(n, x, t)).collect()
    }

    fn refine(&mut self) -> Result<(), ComplexError> {
        let n = self.top();
        let p = &self.pattern;
        let m = p.m;
        let cur = &self.levels[n];
        let nv = cur.num_vertices();
        let ne = cur.num_edges();
        let nt = cur.num_tiles();
        let n_tiles_next = nt * p.d;
        if n_tiles_next as u64 * m as u64 >= u64::from(NONE) {
            return Err(ComplexError::TooLarge(n + 1));
        }

        let mut blocks = ChildBlocks::default();
        let mut v_next = nv as u32;
        let mut e_next = 0u32;
        for e in 0..ne {
            let len = p.chain_len[cur.edge_zero[e] as usize] as u32;
            blocks.edge_vstart.push(v_next);
            blocks.edge_estart.push(e_next);
            v_next += len - 1;
            e_next += len;
        }
        let mut t_next = 0u32;
        for x in 0..nt {
            let c = cur.tile_color[x].index();
            blocks.tile_vstart.push(v_next);
            blocks.tile_estart.push(e_next);
            blocks.tile_tstart.push(t_next);
            v_next += p.interior_vertices[c].len() as u32;
            e_next += p.interior_edges[c].len() as u32;
            t_next += p.children[c].len() as u32;
        }
        let (nv2, ne2, nt2) = (v_next as usize, e_next as usize, t_next as usize);

        let mut vertex_label = vec![NONE; nv2];
        for v in 0..nv {
            vertex_label[v] = p.post_map[cur.vertex_label[v] as usize] as u32;
        }
        let mut edge_ends = vec![[NONE; 2]; ne2];
        let mut edge_image = vec![NONE; ne2];
        let mut edge_parent = vec![Cell::Vertex(NONE); ne2];
        let mut vertex_image = std::mem::take(&mut self.vertex_image);
        let mut vertex_birth = std::mem::take(&mut self.vertex_birth);
        let mut vertex_parent = std::mem::take(&mut self.vertex_parent);
        vertex_image.resize(nv2, NONE);
        vertex_birth.resize(nv2, n as u32 + 1);
        vertex_parent.resize(nv2, None);

        let prev_blocks = if n == 0 { None } else { self.levels[n - 1].blocks.as_ref() };

        // Cells along each n-edge, in chain order from its label-j end.
        let chain_vertex = |e: u32, k: usize| -> u32 {
            let len = p.chain_len[cur.edge_zero[e as usize] as usize];
            let (s, t) = cur.chain_start(e);
            match k {
                0 => s,
                _ if k == len => t,
                _ => blocks.edge_vstart[e as usize] + k as u32 - 1,
            }
        };
        for e in 0..ne as u32 {
            let j = cur.edge_zero[e as usize] as usize;
            let len = p.chain_len[j];
            for k in 0..len {
                let id = (blocks.edge_estart[e as usize] + k as u32) as usize;
                edge_ends[id] = [chain_vertex(e, k), chain_vertex(e, k + 1)];
                edge_parent[id] = Cell::Edge(e);
                edge_image[id] = match prev_blocks {
                    None => p.spec.edges[p.spec.chains[j][k]].zero_edge as u32,
                    Some(pb) => pb.edge_estart[cur.edge_image[e as usize] as usize] + k as u32,
                };
            }
            let spec_chain = &p.spec.chains[j];
            for k in 1..len {
                let v = blocks.edge_vstart[e as usize] + k as u32 - 1;
                // The chain vertex between spec edges k-1 and k.
                let u = spec_chain_vertex(p, spec_chain, j, k);
                vertex_label[v as usize] = p.spec.vertices[u].post as u32;
                vertex_parent[v as usize] = Some(Cell::Edge(e));
                vertex_image[v as usize] = match prev_blocks {
                    None => p.spec.vertices[u].post as u32,
                    Some(pb) => pb.edge_vstart[cur.edge_image[e as usize] as usize] + k as u32 - 1,
                };
            }
        }

        let mut tile_sides = vec![Side { edge: NONE, forward: true }; nt2 * m];
        let mut tile_corners = vec![NONE; nt2 * m];
        let mut tile_color = vec![Color::Black; nt2];
        let mut tile_parent = vec![NONE; nt2];
        let mut tile_letter = vec![NONE; nt2];
        let mut tile_image = vec![NONE; nt2];
        let nspec_v = p.spec.vertices.len();
        let nspec_e = p.spec.edges.len();
        let mut vmap = vec![NONE; nspec_v];
        let mut emap = vec![Side { edge: NONE, forward: true }; nspec_e];
        for x in 0..nt as u32 {
            let color = cur.tile_color[x as usize];
            let c = color.index();
            // Transport the pattern of X⁰_color into tile x.
            for u in 0..nspec_v {
                vmap[u] = match p.vloc[u] {
                    VertexLoc::Post(j) => cur.corner(x, j),
                    VertexLoc::Chain { chain, pos } => chain_vertex(cur.side(x, chain).edge, pos),
                    VertexLoc::Interior { color: vc, index } if vc == color => {
                        let v = blocks.tile_vstart[x as usize] + index as u32;
                        vertex_label[v as usize] = p.spec.vertices[u].post as u32;
                        vertex_parent[v as usize] = Some(Cell::Tile(x));
                        vertex_image[v as usize] = match prev_blocks {
                            None => p.spec.vertices[u].post as u32,
                            Some(pb) => pb.tile_vstart[cur.tile_image[x as usize] as usize] + index as u32,
                        };
                        v
                    }
                    VertexLoc::Interior { .. } => NONE,
                };
            }
            for e in 0..nspec_e {
                emap[e] = match p.eloc[e] {
                    EdgeLoc::Chain { chain, pos, aligned } => {
                        let old = cur.side(x, chain).edge;
                        Side { edge: blocks.edge_estart[old as usize] + pos as u32, forward: aligned }
                    }
                    EdgeLoc::Interior { color: ec, index } if ec == color => {
                        let id = blocks.tile_estart[x as usize] + index as u32;
                        let [a, b] = p.spec.edges[e].ends;
                        edge_ends[id as usize] = [vmap[a], vmap[b]];
                        edge_parent[id as usize] = Cell::Tile(x);
                        edge_image[id as usize] = match prev_blocks {
                            None => p.spec.edges[e].zero_edge as u32,
                            Some(pb) => pb.tile_estart[cur.tile_image[x as usize] as usize] + index as u32,
                        };
                        Side { edge: id, forward: true }
                    }
                    EdgeLoc::Interior { .. } => Side { edge: NONE, forward: true },
                };
            }
            for &t in &p.children[c] {
                let id = if n == 0 { t } else { (blocks.tile_tstart[x as usize] as usize) + p.child_rank[t] };
                tile_color[id] = p.image(t);
                tile_parent[id] = x;
                tile_letter[id] = t as u32;
                tile_image[id] = match prev_blocks {
                    None => p.image(t).index() as u32,
                    Some(_) => self.child(n - 1, cur.tile_image[x as usize], t),
                };
                for l in 0..m {
                    let se = p.tile_edge_by_zero[t][l];
                    let mapped = emap[se.edge];
                    // Chain edges are stored chain-wise; `forward` holds alignment.
                    let forward = match p.eloc[se.edge] {
                        EdgeLoc::Chain { .. } => se.forward == mapped.forward,
                        EdgeLoc::Interior { .. } => se.forward,
                    };
                    tile_sides[id * m + l] = Side { edge: mapped.edge, forward };
                    tile_corners[id * m + l] = vmap[p.tile_corner_by_label[t][l]];
                }
            }
        }

        let mut edge_zero = vec![NONE; ne2];
        for (e, ends) in edge_ends.iter().enumerate() {
            let (la, lb) = (vertex_label[ends[0] as usize], vertex_label[ends[1] as usize]);
            edge_zero[e] = if (la + 1) % m as u32 == lb { la } else { lb };
        }
        let mut edge_tiles = vec![[NONE; 2]; ne2];
        for t in 0..nt2 {
            for l in 0..m {
                let s = tile_sides[t * m + l];
                let slot = &mut edge_tiles[s.edge as usize][usize::from(!s.forward)];
                if *slot != NONE {
                    return Err(ComplexError::InconsistentMerge { level: n + 1, edge: s.edge });
                }
                *slot = t as u32;
            }
        }
        if let Some(e) = edge_tiles.iter().position(|u| u[0] == NONE || u[1] == NONE) {
            return Err(ComplexError::InconsistentMerge { level: n + 1, edge: e as u32 });
        }

        let mut counts = vec![0u32; nv2 + 1];
        for &v in &tile_corners {
            counts[v as usize + 1] += 1;
        }
        for i in 0..nv2 {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut vertex_tiles = vec![0u32; tile_corners.len()];
        for (i, &v) in tile_corners.iter().enumerate() {
            vertex_tiles[fill[v as usize] as usize] = (i / m) as u32;
            fill[v as usize] += 1;
        }

        self.vertex_image = vertex_image;
        self.vertex_birth = vertex_birth;
        self.vertex_parent = vertex_parent;
        self.levels[n].blocks = Some(blocks);
        self.levels.push(CellComplexLevel {
            n: n + 1,
            m,
            vertex_label,
            edge_ends,
            edge_zero,
            edge_tiles,
            edge_image,
            edge_parent,
            tile_sides,
            tile_corners,
            tile_color,
            tile_parent,
            tile_letter,
            tile_image,
            vertex_tiles_start: counts,
            vertex_tiles,
            blocks: None,
        });
        Ok(())
    }

    /// The flower of vertex `v` at level `n` (`v` must exist at level `n`).
    pub fn flower(&self, n: usize, v: u32) -> Flower {
        let lv = &self.levels[n];
        let mut tiles = lv.tiles_at(v).to_vec();
        tiles.sort_unstable();
        tiles.dedup();
        let mut edges: Vec<u32> = tiles
            .iter()
            .flat_map(|&t| lv.sides(t).iter().map(|s| s.edge))
            .filter(|&e| lv.edge_ends[e as usize].contains(&v))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Flower { vertex: v, tiles, edges }
    }

    /// Open cell of level `n` containing vertex `v`.
    pub fn vertex_carrier(&self, v: u32, n: usize) -> Cell {
        if (self.vertex_birth[v as usize] as usize) <= n {
            return Cell::Vertex(v);
        }
        let mut cell = self.vertex_parent[v as usize].expect("born after level 0");
        let mut level = self.vertex_birth[v as usize] as usize - 1;
        while level > n {
            cell = self.parent_cell(level, cell);
            level -= 1;
        }
        cell
    }

    /// Smallest open cell of level `n - 1` containing the open level-`n` cell.
    pub fn parent_cell(&self, n: usize, cell: Cell) -> Cell {
        match cell {
            Cell::Vertex(v) => self.vertex_carrier(v, n - 1),
            Cell::Edge(e) => self.levels[n].edge_parent[e as usize],
            Cell::Tile(t) => Cell::Tile(self.levels[n].tile_parent[t as usize]),
        }
    }

    /// Closed level-`n` tiles containing vertex `v`, which may be born deeper.
    pub fn tiles_containing_vertex(&self, v: u32, n: usize) -> Vec<u32> {
        match self.vertex_carrier(v, n) {
            Cell::Vertex(w) => self.flower(n, w).tiles,
            Cell::Edge(e) => {
                let mut t = self.levels[n].edge_tiles[e as usize].to_vec();
                t.sort_unstable();
                t
            }
            Cell::Tile(t) => vec![t],
        }
    }

    /// Address word of a tile; empty for the two 0-tiles.
    pub fn address_of_tile(&self, n: usize, mut t: u32) -> Word {
        let mut word = vec![0; n];
        for k in (1..=n).rev() {
            let lv = &self.levels[k];
            word[k - 1] = lv.tile_letter[t as usize] as Letter;
            t = lv.tile_parent[t as usize];
        }
        word
    }

    /// Tile with the given nonempty admissible address, if built.
    pub fn tile_of_address(&self, word: &[Letter]) -> Option<u32> {
        let p = &self.pattern;
        if word.is_empty() || word.len() > self.top() || word.iter().any(|&t| t as usize >= p.spec.tiles.len()) {
            return None;
        }
        let mut x = u32::from(word[0]);
        for (k, w) in word.windows(2).enumerate() {
            if p.host(w[1] as usize) != p.image(w[0] as usize) {
                return None;
            }
            x = self.child(k + 1, x, w[1] as usize);
        }
        Some(x)
    }

    /// Image of a level-`n` cell under the map, a level-`n - 1` cell.
    pub fn image(&self, n: usize, cell: Cell) -> Cell {
        match cell {
            Cell::Vertex(v) => Cell::Vertex(self.vertex_image[v as usize]),
            Cell::Edge(e) => Cell::Edge(self.levels[n].edge_image[e as usize]),
            Cell::Tile(t) => Cell::Tile(self.levels[n].tile_image[t as usize]),
        }
    }

    /// Whether a vertex is a postcritical point.
    pub fn is_post(&self, v: u32) -> bool {
        (v as usize) < self.m()
    }

    /// Level-0 cell whose interior contains the open level-`n` cell.
    pub fn root_cell(&self, n: usize, mut cell: Cell) -> Cell {
        for k in (1..=n).rev() {
            cell = self.parent_cell(k, cell);
        }
        cell
    }

    /// Rule presenting the `k`-th iterate with the same curve.
    pub fn composed_rule(&mut self, k: usize) -> Result<SubdivisionRuleSpec, ComplexError> {
        use crate::rulespec::{RuleEdge, RuleTile, RuleVertex, SignedEdge};
        self.build_to(k)?;
        let lv = &self.levels[k];
        let m = self.m();
        let vertices = lv.vertex_label.iter().map(|&l| RuleVertex { post: l as usize }).collect();
        let edges = (0..lv.num_edges())
            .map(|e| {
                let [a, b] = lv.edge_ends[e];
                let forward = (lv.vertex_label[a as usize] + 1) % m as u32 == lv.vertex_label[b as usize];
                RuleEdge { ends: [a as usize, b as usize], zero_edge: lv.edge_zero[e] as usize, forward }
            })
            .collect();
        let tiles = (0..lv.num_tiles() as u32)
            .map(|t| {
                let host = match self.root_cell(k, Cell::Tile(t)) {
                    Cell::Tile(0) => Color::Black,
                    _ => Color::White,
                };
                let boundary = lv
                    .boundary_cycle(t)
                    .into_iter()
                    .map(|s| SignedEdge { edge: s.edge as usize, forward: s.forward })
                    .collect();
                RuleTile { host, image: lv.tile_color[t as usize], boundary }
            })
            .collect();
        let mut chains = Vec::with_capacity(m);
        for j in 0..m {
            let mut chain = Vec::new();
            let mut cur = j as u32;
            let target = ((j + 1) % m) as u32;
            let mut prev = NONE;
            while cur != target {
                let next = (0..lv.num_edges() as u32)
                    .find(|&e| {
                        e != prev
                            && self.root_cell(k, Cell::Edge(e)) == Cell::Edge(j as u32)
                            && lv.edge_ends[e as usize].contains(&cur)
                    })
                    .expect("chain is connected");
                let [a, b] = lv.edge_ends[next as usize];
                cur = if a == cur { b } else { a };
                prev = next;
                chain.push(next as usize);
            }
            chains.push(chain);
        }
        Ok(SubdivisionRuleSpec { m, d: self.d().pow(k as u32), vertices, edges, tiles, chains })
    }
}

/// Spec vertex at chain position `k` (0 < k < len) along chain `j`.
fn spec_chain_vertex(p: &Pattern, chain: &[usize], j: usize, k: usize) -> usize {
    let mut cur = p.post_vertex[j];
    for &e in &chain[..k] {
        let [a, b] = p.spec.edges[e].ends;
        cur = if a == cur { b } else { a };
    }
    cur
}
