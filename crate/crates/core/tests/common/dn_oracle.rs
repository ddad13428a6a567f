use thurston::complex::{Cell, Complex};

/// Independent exhaustive oracle for D_n.
///
/// Enumerates connected tile sets with the ESU scheme (each connected set is
/// reached once per its least tile) and prunes with an admissible bound: a
/// connected superset must still contain a path to every missing 0-edge.
pub struct Oracle {
    m: usize,
    adj: Vec<Vec<usize>>,
    masks: Vec<u32>,
    /// `to_edge[j][t]`: extra tiles needed to reach 0-edge `j` from `t`.
    to_edge: Vec<Vec<usize>>,
}

impl Oracle {
    pub fn new(cx: &Complex, n: usize) -> Oracle {
        let lv = cx.level(n);
        let nt = lv.num_tiles();
        // Adjacency straight from corner sets, without the incidence index.
        let adj: Vec<Vec<usize>> = (0..nt)
            .map(|a| {
                (0..nt)
                    .filter(|&b| b != a && lv.corners(a as u32).iter().any(|v| lv.corners(b as u32).contains(v)))
                    .collect()
            })
            .collect();
        let masks: Vec<u32> = (0..nt as u32)
            .map(|t| {
                let mut mask = 0;
                for &v in lv.corners(t) {
                    // Follow parents up to level 0 by hand.
                    let mut cell = Cell::Vertex(v);
                    for k in (1..=n).rev() {
                        cell = cx.parent_cell(k, cell);
                    }
                    mask |= match cell {
                        Cell::Vertex(p) => (1 << p) | (1 << ((p as usize + cx.m() - 1) % cx.m())),
                        Cell::Edge(j) => 1 << j,
                        Cell::Tile(_) => 0,
                    };
                }
                mask
            })
            .collect();
        let to_edge = (0..cx.m())
            .map(|j| {
                let mut dist = vec![usize::MAX; nt];
                let mut frontier: Vec<usize> = (0..nt).filter(|&t| masks[t] & (1 << j) != 0).collect();
                for &t in &frontier {
                    dist[t] = 0;
                }
                let mut d = 0;
                while !frontier.is_empty() {
                    d += 1;
                    let mut next = Vec::new();
                    for &t in &frontier {
                        for &u in &adj[t] {
                            if dist[u] == usize::MAX {
                                dist[u] = d;
                                next.push(u);
                            }
                        }
                    }
                    frontier = next;
                }
                dist
            })
            .collect();
        Oracle { m: cx.m(), adj, masks, to_edge }
    }

    fn joins(&self, mask: u32) -> bool {
        let m = self.m;
        let has = |i: usize| mask & (1 << i) != 0;
        if m == 3 {
            return (0..3).all(has);
        }
        (0..m).any(|i| has(i) && (2..m - 1).any(|s| has((i + s) % m)))
    }

    fn lower_bound(&self, set: &[usize], mask: u32) -> usize {
        let need = |j: usize| set.iter().map(|&t| self.to_edge[j][t]).min().unwrap();
        if self.m == 3 {
            return (0..3).filter(|&j| mask & (1 << j) == 0).map(need).max().unwrap_or(0);
        }
        let m = self.m;
        (0..m)
            .flat_map(|i| (0..m).map(move |k| (i, k)))
            .filter(|&(i, k)| self.joins((1 << i) | (1 << k)))
            .map(|(i, k)| need(i).max(need(k)))
            .min()
            .unwrap()
    }

    fn extend(&self, set: &mut Vec<usize>, ext: Vec<usize>, root: usize, mask: u32, k: usize) -> bool {
        if self.joins(mask) {
            return true;
        }
        if set.len() == k || set.len() + self.lower_bound(set, mask) > k {
            return false;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &self.adj[w] {
                if u > root && !set.contains(&u) && !next.contains(&u) && !set.iter().any(|&s| self.adj[s].contains(&u)) {
                    next.push(u);
                }
            }
            set.push(w);
            if self.extend(set, next, root, mask | self.masks[w], k) {
                return true;
            }
            set.pop();
        }
        false
    }

    fn exists(&self, k: usize) -> bool {
        (0..self.adj.len()).any(|v| {
            let ext: Vec<usize> = self.adj[v].iter().copied().filter(|&u| u > v).collect();
            self.extend(&mut vec![v], ext, v, self.masks[v], k)
        })
    }

    pub fn dn(&self) -> usize {
        (1..).find(|&k| self.exists(k)).unwrap()
    }
}
