//! Combinatorial expansion: D_n, the Λ₀ estimate, and the choice of N.
//!
//! Connectivity is shared-vertex adjacency of closed tiles. With four or more
//! posts D_n is a shortest inclusive tile path between the terminal sets of
//! two disjoint 0-edges. With three posts it is a three-terminal Steiner
//! problem, solved exactly by minimising `d₁ + d₂ + d₃ − 2` over hub tiles.

use std::collections::VecDeque;

use crate::complex::{Cell, CellComplexLevel, Complex, ComplexError};
use crate::rulespec::Color;

pub const UNREACHED: u32 = u32::MAX;

/// Bitmask of the closed 0-edges containing each vertex of level `n`.
pub fn vertex_zero_edges(cx: &Complex, n: usize) -> Vec<u32> {
    let m = cx.m();
    (0..cx.levels[n].num_vertices() as u32)
        .map(|v| match cx.vertex_carrier(v, 0) {
            Cell::Vertex(p) => (1 << p) | (1 << ((p as usize + m - 1) % m)),
            Cell::Edge(j) => 1 << j,
            Cell::Tile(_) => 0,
        })
        .collect()
}

/// Bitmask of the closed 0-edges met by each tile of level `n`.
pub fn tile_zero_edges(cx: &Complex, n: usize) -> Vec<u32> {
    let vmask = vertex_zero_edges(cx, n);
    let lv = &cx.levels[n];
    (0..lv.num_tiles() as u32)
        .map(|t| lv.corners(t).iter().fold(0, |acc, &v| acc | vmask[v as usize]))
        .collect()
}

/// Whether a set of 0-edges, as a bitmask, joins opposite sides.
pub fn mask_joins(mask: u32, m: usize) -> bool {
    if m == 3 {
        return mask == 0b111;
    }
    (0..m).any(|i| {
        mask & (1 << i) != 0 && (0..m).any(|k| mask & (1 << k) != 0 && k != i && (k + 1) % m != i && (i + 1) % m != k)
    })
}

/// Whether the union of the given level-`n` tiles joins opposite sides.
pub fn joins_opposite_sides(cx: &Complex, n: usize, tiles: &[u32]) -> bool {
    let masks = tile_zero_edges(cx, n);
    mask_joins(tiles.iter().fold(0, |acc, &t| acc | masks[t as usize]), cx.m())
}

/// Inclusive tile-count distances from a source set (sources at 1).
pub fn tile_distances(lv: &CellComplexLevel, sources: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut dist = vec![UNREACHED; lv.num_tiles()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s as usize] == UNREACHED {
            dist[s as usize] = 1;
            queue.push_back(s);
        }
    }
    while let Some(t) = queue.pop_front() {
        let d = dist[t as usize] + 1;
        for &v in lv.corners(t) {
            for &u in lv.tiles_at(v) {
                if dist[u as usize] == UNREACHED {
                    dist[u as usize] = d;
                    queue.push_back(u);
                }
            }
        }
    }
    dist
}

/// Least number of level-`n` tiles forming a connected set that joins opposite sides.
pub fn compute_dn(cx: &Complex, n: usize) -> u32 {
    let m = cx.m();
    let lv = &cx.levels[n];
    let masks = tile_zero_edges(cx, n);
    let dists: Vec<Vec<u32>> = (0..m)
        .map(|j| tile_distances(lv, (0..lv.num_tiles() as u32).filter(|&t| masks[t as usize] & (1 << j) != 0)))
        .collect();
    if m == 3 {
        return (0..lv.num_tiles()).map(|h| dists[0][h] + dists[1][h] + dists[2][h] - 2).min().expect("tiles");
    }
    let mut best = u32::MAX;
    for i in 0..m {
        for k in 0..m {
            if mask_joins((1 << i) | (1 << k), m) {
                let sk = (0..lv.num_tiles()).filter(|&t| masks[t] & (1 << k) != 0);
                best = best.min(sk.map(|t| dists[i][t]).min().expect("0-edge has tiles"));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct DnRow {
    pub n: usize,
    pub dn: u32,
    pub root: f64,
}

/// `D_n` and `D_n^{1/n}` for `1 <= n <= n_max`.
pub fn lambda0_estimate(cx: &mut Complex, n_max: usize) -> Result<Vec<DnRow>, ComplexError> {
    cx.build_to(n_max)?;
    Ok((1..=n_max)
        .map(|n| {
            let dn = compute_dn(cx, n);
            DnRow { n, dn, root: f64::from(dn).powf(1.0 / n as f64) }
        })
        .collect())
}

/// Two level-`N` vertices per colour with disjoint closed flowers inside the open 0-tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowerWitnesses {
    pub n: usize,
    /// `[colour][i]` for `i` in 0..2.
    pub vertices: [[u32; 2]; 2],
}

#[derive(Clone, Debug)]
pub struct NChoice {
    pub n: usize,
    pub dn: u32,
    pub witnesses: FlowerWitnesses,
}

#[derive(Debug, thiserror::Error)]
pub enum SelectError {
    #[error("Λ^α = {lam_alpha} is not below the Λ₀ estimate {lambda0}")]
    SlowExpansion { lam_alpha: f64, lambda0: f64 },
    #[error("no N <= {cap} satisfies 3 < 3·C26·C < Λ^(αN) < D_N − 1 (last tried N = {cap}: Λ^(αN) = {lam}, D_N = {dn})")]
    NumericChain { cap: usize, lam: f64, dn: u32 },
    #[error("no N <= {cap} has disjoint interior flower witnesses for both colours")]
    NoWitnesses { cap: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Whether the closed level-`n` flower of `v` lies in the open 0-tile of colour `c`.
fn flower_inside(cx: &Complex, n: usize, v: u32, c: Color, vmask: &[u32]) -> bool {
    let lv = &cx.levels[n];
    lv.tiles_at(v).iter().all(|&t| {
        cx.root_cell(n, Cell::Tile(t)) == Cell::Tile(c.index() as u32)
            && lv.corners(t).iter().all(|&u| vmask[u as usize] == 0)
    })
}

/// Least-id pair of level-`n` vertices per colour with disjoint closed flowers
/// inside the open 0-tile of that colour.
pub fn flower_witnesses(cx: &Complex, n: usize) -> Option<FlowerWitnesses> {
    let lv = &cx.levels[n];
    let vmask = vertex_zero_edges(cx, n);
    let mut out = [[0u32; 2]; 2];
    for c in Color::BOTH {
        let inside: Vec<u32> =
            (0..lv.num_vertices() as u32).filter(|&v| flower_inside(cx, n, v, c, &vmask)).collect();
        let pair = inside.iter().enumerate().find_map(|(i, &a)| {
            inside[i + 1..]
                .iter()
                .find(|&&b| lv.tiles_at(a).iter().all(|&s| lv.tiles_at(b).iter().all(|&t| !lv.tiles_meet(s, t))))
                .map(|&b| [a, b])
        })?;
        out[c.index()] = pair;
    }
    Some(FlowerWitnesses { n, vertices: out })
}

/// Least `N <= cap` with `3 < 3·C26·C < Λ^(αN) < D_N − 1` and flower witnesses.
pub fn select_n(
    cx: &mut Complex,
    alpha: f64,
    lambda: f64,
    c26: f64,
    c_fit: f64,
    cap: usize,
) -> Result<NChoice, SelectError> {
    cx.build_to(cap)?;
    let lambda0 = f64::from(compute_dn(cx, cap)).powf(1.0 / cap as f64);
    let lam_alpha = lambda.powf(alpha);
    if lam_alpha >= lambda0 {
        return Err(SelectError::SlowExpansion { lam_alpha, lambda0 });
    }
    let lower = 3.0 * c26 * c_fit;
    let mut chain_ok = false;
    let mut last = (0.0, 0);
    for n in 1..=cap {
        let dn = compute_dn(cx, n);
        let lam = lambda.powf(alpha * n as f64);
        last = (lam, dn);
        if !(3.0 < lower && lower < lam && lam < f64::from(dn) - 1.0) {
            continue;
        }
        chain_ok = true;
        if let Some(witnesses) = flower_witnesses(cx, n) {
            return Ok(NChoice { n, dn, witnesses });
        }
    }
    if chain_ok {
        Err(SelectError::NoWitnesses { cap })
    } else {
        Err(SelectError::NumericChain { cap, lam: last.0, dn: last.1 })
    }
}
