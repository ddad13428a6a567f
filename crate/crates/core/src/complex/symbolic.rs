//! Local combinatorics computed from addresses alone.
//!
//! An n-tile is its address word. Across its edge `l` lies the tile obtained
//! by swapping the last letter for the other user of the corresponding
//! level-1 edge; when that edge runs along the curve, the parent is replaced
//! by its own neighbour across the chain's 0-edge first. Both tiles see the
//! shared edge under the same index `l`, so flowers are walked by crossing
//! edges `l` and `l - 1` alternately. Cost is proportional to the depth of
//! the carry, which is constant on average.

use std::collections::{HashMap, VecDeque};

use super::pattern::{EdgeLoc, Pattern, VertexLoc};
use crate::rulespec::Color;

pub type Letter = u16;
pub type Word = Vec<Letter>;

/// Position of a point relative to the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Post(usize),
    /// Inside the open 0-edge with this index.
    Edge(usize),
    Interior,
}

/// Corner `corner` of the tile `word`; the level is the word length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymVertex {
    pub word: Word,
    pub corner: usize,
}

impl SymVertex {
    pub fn level(&self) -> usize {
        self.word.len()
    }
}

#[derive(Clone, Debug)]
pub struct Symbolic {
    pub pattern: Pattern,
    /// Least tile hosted by each colour having the post as a corner.
    post_child: [Vec<Letter>; 2],
}

impl Symbolic {
    pub fn new(pattern: &Pattern) -> Symbolic {
        let mut post_child: [Vec<Letter>; 2] = [Vec::new(), Vec::new()];
        for c in Color::BOTH {
            for j in 0..pattern.m {
                let u = pattern.post_vertex[j];
                let l = pattern.post_map[j];
                let t = pattern.children[c.index()]
                    .iter()
                    .copied()
                    .find(|&t| pattern.tile_corner_by_label[t][l] == u)
                    .expect("every post is a corner in both 0-tiles");
                post_child[c.index()].push(t as Letter);
            }
        }
        Symbolic { pattern: pattern.clone(), post_child }
    }

    pub fn m(&self) -> usize {
        self.pattern.m
    }

    /// Image colour of a nonempty word.
    pub fn color(&self, w: &[Letter]) -> Color {
        self.pattern.image(*w.last().expect("nonempty word") as usize)
    }

    pub fn is_admissible(&self, w: &[Letter]) -> bool {
        let n = self.pattern.spec.tiles.len();
        w.iter().all(|&t| (t as usize) < n)
            && w.windows(2).all(|p| self.pattern.host(p[1] as usize) == self.pattern.image(p[0] as usize))
    }

    /// Admissible words of length `n` in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        for k in 0..n {
            let mut next = Vec::new();
            for w in &out {
                let host = if k == 0 { None } else { Some(self.color(w)) };
                for t in 0..self.pattern.spec.tiles.len() {
                    if host.is_none_or(|h| self.pattern.host(t) == h) {
                        let mut v = w.clone();
                        v.push(t as Letter);
                        next.push(v);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Replaces `w` with its neighbour across edge `l`.
    pub fn cross(&self, w: &mut Word, l: usize) {
        let n = w.len();
        let t = w[n - 1] as usize;
        let e = self.pattern.tile_edge_by_zero[t][l].edge;
        let other = self.pattern.across(e, t) as Letter;
        if let EdgeLoc::Chain { chain, .. } = self.pattern.eloc[e] {
            if n > 1 {
                w.pop();
                self.cross(w, chain);
                w.push(other);
                return;
            }
        }
        w[n - 1] = other;
    }

    pub fn neighbor(&self, w: &[Letter], l: usize) -> Word {
        let mut v = w.to_vec();
        self.cross(&mut v, l);
        v
    }

    /// Tiles containing corner `j` of `w`, in walking order starting at `w`.
    pub fn flower(&self, w: &[Letter], j: usize) -> Vec<Word> {
        let m = self.m();
        let mut out = vec![w.to_vec()];
        let mut cur = w.to_vec();
        loop {
            let l = match self.color(&cur) {
                Color::Black => j,
                Color::White => (j + m - 1) % m,
            };
            self.cross(&mut cur, l);
            if cur.as_slice() == w {
                return out;
            }
            out.push(cur.clone());
        }
    }

    /// Canonical name of a vertex: the least incident tile at the same level.
    pub fn canonical(&self, v: &SymVertex) -> SymVertex {
        let word = self.flower(&v.word, v.corner).into_iter().min().expect("nonempty flower");
        SymVertex { word, corner: v.corner }
    }

    /// The same point named at the next level.
    pub fn refine_vertex(&self, v: &SymVertex) -> SymVertex {
        let c = self.color(&v.word);
        let mut word = v.word.clone();
        word.push(self.post_child[c.index()][v.corner]);
        SymVertex { word, corner: self.pattern.post_map[v.corner] }
    }

    /// The same point named at level `n` (at least its current level).
    pub fn vertex_at(&self, v: &SymVertex, n: usize) -> SymVertex {
        let mut v = v.clone();
        while v.level() < n {
            v = self.refine_vertex(&v);
        }
        v
    }

    /// The same vertex named at the coarsest level where it is a vertex.
    pub fn coarsen(&self, v: &SymVertex) -> SymVertex {
        let mut word = v.word.clone();
        let mut corner = v.corner;
        while let Some(&t) = word.last() {
            match self.pattern.vloc[self.pattern.tile_corner_by_label[t as usize][corner]] {
                VertexLoc::Post(j) if word.len() > 1 => {
                    word.pop();
                    corner = j;
                }
                _ => break,
            }
        }
        SymVertex { word, corner }
    }

    /// Post at corner `l` of `w`, if that corner is a postcritical point.
    pub fn corner_post(&self, w: &[Letter], mut l: usize) -> Option<usize> {
        for &t in w.iter().rev() {
            match self.pattern.vloc[self.pattern.tile_corner_by_label[t as usize][l]] {
                VertexLoc::Post(j) => l = j,
                _ => return None,
            }
        }
        Some(l)
    }

    /// 0-edge containing edge `l` of `w`, if that edge lies on the curve.
    pub fn edge_on_curve(&self, w: &[Letter], mut l: usize) -> Option<usize> {
        for &t in w.iter().rev() {
            match self.pattern.eloc[self.pattern.tile_edge_by_zero[t as usize][l].edge] {
                EdgeLoc::Chain { chain, .. } => l = chain,
                EdgeLoc::Interior { .. } => return None,
            }
        }
        Some(l)
    }

    /// Location of `t·y` given the location of `y`.
    pub fn pull_location(&self, t: Letter, loc: Location) -> Location {
        let p = &self.pattern;
        match loc {
            Location::Post(j) => match p.vloc[p.tile_corner_by_label[t as usize][j]] {
                VertexLoc::Post(k) => Location::Post(k),
                VertexLoc::Chain { chain, .. } => Location::Edge(chain),
                VertexLoc::Interior { .. } => Location::Interior,
            },
            Location::Edge(l) => match p.eloc[p.tile_edge_by_zero[t as usize][l].edge] {
                EdgeLoc::Chain { chain, .. } => Location::Edge(chain),
                EdgeLoc::Interior { .. } => Location::Interior,
            },
            Location::Interior => Location::Interior,
        }
    }

    /// Location of the fixed point of the branch along a cyclically admissible word.
    pub fn periodic_location(&self, period: &[Letter]) -> Location {
        let m = self.m();
        if let Some(j) = (0..m).find(|&j| self.corner_post(period, j) == Some(j)) {
            return Location::Post(j);
        }
        if let Some(l) = (0..m).find(|&l| self.edge_on_curve(period, l) == Some(l)) {
            return Location::Edge(l);
        }
        Location::Interior
    }

    /// Tiles at level `|w|` containing the point of `w` whose image under the
    /// level's iterate has location `loc`.
    pub fn tiles_at_location(&self, w: &[Letter], loc: Location) -> Vec<Word> {
        match loc {
            Location::Post(j) => self.flower(w, j),
            Location::Edge(l) => vec![w.to_vec(), self.neighbor(w, l)],
            Location::Interior => vec![w.to_vec()],
        }
    }

    /// Tiles sharing a vertex with `w`, including `w`, sorted.
    pub fn tile_neighbors(&self, w: &[Letter]) -> Vec<Word> {
        let mut out: Vec<Word> = (0..self.m()).flat_map(|j| self.flower(w, j)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn tiles_meet(&self, a: &[Letter], b: &[Letter]) -> bool {
        (0..self.m()).any(|j| self.flower(a, j).iter().any(|t| t.as_slice() == b))
    }

    /// Multi-source breadth-first distances over shared-vertex adjacency.
    ///
    /// Sources get distance 1, matching inclusive chain lengths. Tiles farther
    /// than `max_dist` are not reported; `keep` restricts the explored region.
    pub fn bfs(
        &self,
        sources: &[Word],
        max_dist: usize,
        keep: impl Fn(&[Letter]) -> bool,
    ) -> HashMap<Word, usize> {
        let mut dist: HashMap<Word, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for s in sources {
            if keep(s) && !dist.contains_key(s) {
                dist.insert(s.clone(), 1);
                queue.push_back(s.clone());
            }
        }
        while let Some(w) = queue.pop_front() {
            let dw = dist[&w];
            if dw >= max_dist {
                continue;
            }
            for nb in self.tile_neighbors(&w) {
                if !dist.contains_key(&nb) && keep(&nb) {
                    dist.insert(nb.clone(), dw + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    /// Least (lexicographic) tile hosted by `c` containing post `j` as a corner.
    pub fn post_child(&self, c: Color, j: usize) -> Letter {
        self.post_child[c.index()][j]
    }
}
