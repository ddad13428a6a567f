//! The symbolic visual metric `d(x, y) = Λ^{-m(x, y)}` and finite-scale certificates.
//!
//! `m(x, y)` is the largest level at which some tile containing `x` meets some
//! tile containing `y`. It is monotone: parents of meeting tiles meet. All
//! constants are measured on built complexes, never assumed.

use std::collections::BTreeSet;

use crate::complex::{Addr, Cell, Complex, ComplexError, PointRef, Symbolic, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    /// The two references name the same point.
    Equal,
    Exact(usize),
    /// Tiles still meet at the cap.
    AtLeast(usize),
}

impl Separation {
    /// The exact level, or the cap as a lower bound.
    pub fn level(self) -> Option<usize> {
        match self {
            Separation::Exact(m) | Separation::AtLeast(m) => Some(m),
            Separation::Equal => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distance {
    pub value: f64,
    /// `value` is only an upper bound (the separation hit the cap).
    pub upper_bound: bool,
}

fn meets_any(sym: &Symbolic, a: &[Word], b: &[Word]) -> bool {
    let near: BTreeSet<Word> = a.iter().flat_map(|w| sym.tile_neighbors(w)).collect();
    b.iter().any(|w| near.contains(w))
}

/// Separation level of two eventually periodic addresses, computed symbolically.
pub fn address_separation(sym: &Symbolic, x: &Addr, y: &Addr, cap: usize) -> Separation {
    if x == y {
        return Separation::Equal;
    }
    if let (Some(u), Some(v)) = (x.as_vertex(sym), y.as_vertex(sym)) {
        if sym.canonical(&sym.coarsen(&u)) == sym.canonical(&sym.coarsen(&v)) {
            return Separation::Equal;
        }
    }
    for k in 1..=cap {
        if !meets_any(sym, &x.tiles_at(sym, k), &y.tiles_at(sym, k)) {
            return Separation::Exact(k - 1);
        }
    }
    Separation::AtLeast(cap)
}

/// Level-`k` tiles meeting a set of vertex stars, as their corner set.
fn star_corners(cx: &Complex, v: u32, k: usize) -> Vec<u32> {
    let lv = cx.level(k);
    let mut out: Vec<u32> =
        cx.tiles_containing_vertex(v, k).iter().flat_map(|&t| lv.corners(t).iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Separation level of two vertices on the flat complex (cap at most the top level).
pub fn vertex_separation(cx: &Complex, x: u32, y: u32, cap: usize) -> Separation {
    if x == y {
        return Separation::Equal;
    }
    let cap = cap.min(cx.top());
    for k in 1..=cap {
        let a = star_corners(cx, x, k);
        let b = star_corners(cx, y, k);
        if !b.iter().any(|v| a.binary_search(v).is_ok()) {
            return Separation::Exact(k - 1);
        }
    }
    Separation::AtLeast(cap)
}

/// Separation level of two points.
pub fn separation_level(cx: &Complex, sym: &Symbolic, x: &PointRef, y: &PointRef, cap: usize) -> Separation {
    match (x, y) {
        (PointRef::Vertex { id: a, .. }, PointRef::Vertex { id: b, .. }) if cap <= cx.top() => {
            vertex_separation(cx, *a, *b, cap)
        }
        _ => address_separation(sym, &x.to_addr(cx, sym), &y.to_addr(cx, sym), cap),
    }
}

pub fn distance_from(sep: Separation, lambda: f64) -> Distance {
    match sep {
        Separation::Equal => Distance { value: 0.0, upper_bound: false },
        Separation::Exact(m) => Distance { value: lambda.powi(-(m as i32)), upper_bound: false },
        Separation::AtLeast(m) => Distance { value: lambda.powi(-(m as i32)), upper_bound: true },
    }
}

pub fn visual_distance(cx: &Complex, sym: &Symbolic, x: &PointRef, y: &PointRef, lambda: f64, cap: usize) -> Distance {
    distance_from(separation_level(cx, sym, x, y, cap), lambda)
}

/// Level-`k` vertices lying in the closed level-`n` cell.
pub fn cell_vertices(cx: &Complex, n: usize, cell: Cell, k: usize) -> Vec<u32> {
    let mut out = match cell {
        Cell::Vertex(v) => vec![v],
        Cell::Edge(e) => {
            let mut edges = vec![e];
            for level in n..k {
                let b = cx.level(level).blocks.as_ref().expect("refined");
                let lv = cx.level(level);
                edges = edges
                    .iter()
                    .flat_map(|&e| {
                        let len = cx.pattern.chain_len[lv.edge_zero[e as usize] as usize] as u32;
                        (0..len).map(move |i| b.edge_estart[e as usize] + i)
                    })
                    .collect();
            }
            edges.iter().flat_map(|&e| cx.level(k).edge_ends[e as usize]).collect()
        }
        Cell::Tile(t) => {
            let tiles = descendants(cx, n, t, k);
            tiles.iter().flat_map(|&t| cx.level(k).corners(t).iter().copied()).collect()
        }
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// Level-`k` tiles inside tile `t` of level `n`.
pub fn descendants(cx: &Complex, n: usize, t: u32, k: usize) -> Vec<u32> {
    let mut tiles = vec![t];
    for level in n..k {
        tiles = tiles.iter().flat_map(|&x| cx.children(level, x)).collect();
    }
    tiles
}

/// Top cells of a closed n-edge or n-tile at level `k`, each given by its star.
fn top_stars(cx: &Complex, n: usize, cell: Cell, k: usize) -> Vec<Vec<u32>> {
    let lv = cx.level(k);
    match cell {
        Cell::Tile(t) => descendants(cx, n, t, k).into_iter().map(|t| vec![t]).collect(),
        Cell::Edge(e) => {
            let mut edges = vec![e];
            for level in n..k {
                let b = cx.level(level).blocks.as_ref().expect("refined");
                let l = cx.level(level);
                edges = edges
                    .iter()
                    .flat_map(|&e| {
                        let len = cx.pattern.chain_len[l.edge_zero[e as usize] as usize] as u32;
                        (0..len).map(move |i| b.edge_estart[e as usize] + i)
                    })
                    .collect();
            }
            edges.iter().map(|&e| lv.edge_tiles[e as usize].to_vec()).collect()
        }
        Cell::Vertex(_) => Vec::new(),
    }
}

/// `δ*` with `diam(cell) = Λ^{-(n + δ*)}`, or `None` if unresolved below the top level.
///
/// The minimum of `m` over a cell is attained at generic points of its top
/// cells, whose stars are the cells' incident tiles.
pub fn diameter_excess(cx: &Complex, n: usize, cell: Cell) -> Option<usize> {
    for delta in 1.. {
        let k = n + delta;
        if k > cx.top() {
            return None;
        }
        let lv = cx.level(k);
        let stars: Vec<BTreeSet<u32>> = top_stars(cx, n, cell, k)
            .iter()
            .map(|s| s.iter().flat_map(|&t| lv.corners(t).iter().copied()).collect())
            .collect();
        let all_meet = stars.iter().enumerate().all(|(i, a)| stars[i + 1..].iter().all(|b| !a.is_disjoint(b)));
        if !all_meet {
            return Some(delta - 1);
        }
    }
    unreachable!()
}

/// Closed n-vertices of the smallest closed n-cell containing the vertex.
fn closure_vertices(cx: &Complex, n: usize, v: u32) -> Vec<u32> {
    let lv = cx.level(n);
    match cx.vertex_carrier(v, n) {
        Cell::Vertex(w) => vec![w],
        Cell::Edge(e) => lv.edge_ends[e as usize].to_vec(),
        Cell::Tile(t) => lv.corners(t).to_vec(),
    }
}

/// Largest `M − n` over n-cells τ disjoint from σ, where `d(σ, τ) = Λ^{-M}`;
/// clipped below at 0, `None` if unresolved below the top level.
pub fn disjoint_excess(cx: &Complex, n: usize, sigma: Cell) -> Option<usize> {
    let own: BTreeSet<u32> = cell_vertices(cx, n, sigma, n).into_iter().collect();
    for j in 1.. {
        let k = n + j;
        if k > cx.top() {
            return None;
        }
        let lv = cx.level(k);
        let mut near: BTreeSet<u32> = BTreeSet::new();
        for v in cell_vertices(cx, n, sigma, k) {
            for &t in lv.tiles_at(v) {
                for &u in lv.corners(t) {
                    near.extend(lv.tiles_at(u).iter().copied());
                }
            }
        }
        let reaches_disjoint = near.iter().any(|&t| {
            lv.corners(t).iter().any(|&w| closure_vertices(cx, n, w).iter().all(|u| !own.contains(u)))
        });
        if !reaches_disjoint {
            return Some(j - 1);
        }
    }
    unreachable!()
}

/// Finite-scale constants for the symbolic visual metric.
#[derive(Clone, Debug, PartialEq)]
pub struct VisualMetricParams {
    pub lambda: f64,
    /// Cell bounds: disjoint cells and diameters.
    pub c_fit: f64,
    /// `U^n(x)` versus metric balls.
    pub k_fit: f64,
    /// Distortion of `f^n` on n-tiles.
    pub c0_fit: f64,
    /// Largest excess `M − n` over disjoint cell pairs.
    pub max_disjoint_excess: usize,
    /// Largest `δ*` over edges and tiles.
    pub max_diameter_excess: usize,
    /// Largest `|m(x, y) − n − m(fⁿx, fⁿy)|` over the distortion scan.
    pub max_distortion_shift: usize,
    /// Levels whose cells were scanned.
    pub l_cert: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("Λ must exceed 1, got {0}")]
    BadLambda(f64),
    #[error("scan at level {level} needs deeper levels than {top}")]
    Unresolved { level: usize, top: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Extra levels built beyond `L` so that every excess in the scans resolves.
pub const CERT_MARGIN: usize = 4;

/// Measures `C`, `K` and `C₀` on all cells and vertex pairs up to level `l`.
///
/// Cell bounds use every cell of every level up to `l`; the distortion and
/// neighbourhood scans use all vertex pairs of level at most `l_pairs`.
pub fn certify_constants(cx: &mut Complex, lambda: f64, l: usize, l_pairs: usize) -> Result<VisualMetricParams, MetricError> {
    if lambda <= 1.0 {
        return Err(MetricError::BadLambda(lambda));
    }
    cx.build_to(l.max(l_pairs) + CERT_MARGIN)?;
    let cx = &*cx;
    let unresolved = |level| MetricError::Unresolved { level, top: cx.top() };
    let mut max_disjoint = 0;
    let mut max_diam = 0;
    for n in 0..=l {
        let lv = cx.level(n);
        let cells = (0..lv.num_vertices() as u32)
            .map(Cell::Vertex)
            .chain((0..lv.num_edges() as u32).map(Cell::Edge))
            .chain((0..lv.num_tiles() as u32).map(Cell::Tile));
        for cell in cells {
            max_disjoint = max_disjoint.max(disjoint_excess(cx, n, cell).ok_or_else(|| unresolved(n))?);
            if !matches!(cell, Cell::Vertex(_)) {
                max_diam = max_diam.max(diameter_excess(cx, n, cell).ok_or_else(|| unresolved(n))?);
            }
        }
    }
    let c_fit = lambda.powi(max_disjoint.max(max_diam) as i32);

    let shift = distortion_shift(cx, l_pairs).ok_or_else(|| unresolved(l_pairs))?;
    let k_exp = neighborhood_exponent(cx, l_pairs).ok_or_else(|| unresolved(l_pairs))?;
    Ok(VisualMetricParams {
        lambda,
        c_fit,
        k_fit: lambda.powi(k_exp as i32),
        c0_fit: lambda.powi(shift as i32),
        max_disjoint_excess: max_disjoint,
        max_diameter_excess: max_diam,
        max_distortion_shift: shift,
        l_cert: l,
    })
}

/// `fⁿ` on vertex ids.
pub fn vertex_iterate(cx: &Complex, mut v: u32, n: usize) -> u32 {
    for _ in 0..n {
        v = cx.vertex_image[v as usize];
    }
    v
}

/// Largest `|m(x, y) − n − m(fⁿx, fⁿy)|` over distinct vertices of level at most
/// `l` lying in a common n-tile, `n <= l`.
pub fn distortion_shift(cx: &Complex, l: usize) -> Option<usize> {
    let cap = cx.top();
    let mut worst = 0usize;
    for n in 0..=l {
        for t in 0..cx.level(n).num_tiles() as u32 {
            let verts = cell_vertices(cx, n, Cell::Tile(t), l);
            for (i, &x) in verts.iter().enumerate() {
                for &y in &verts[i + 1..] {
                    let (fx, fy) = (vertex_iterate(cx, x, n), vertex_iterate(cx, y, n));
                    let m = match vertex_separation(cx, x, y, cap) {
                        Separation::Exact(m) => m,
                        _ => return None,
                    };
                    let m_img = match vertex_separation(cx, fx, fy, cap) {
                        Separation::Exact(m) => m,
                        Separation::Equal => unreachable!("fⁿ is injective on an n-tile"),
                        Separation::AtLeast(_) => return None,
                    };
                    worst = worst.max(m.abs_diff(n + m_img));
                }
            }
        }
    }
    Some(worst)
}

/// Least `e` with `B(x, Λ^{-e}Λ^{-n}) ⊆ Uⁿ(x) ⊆ B(x, Λ^eΛ^{-n})` on all vertices of
/// level at most `l` (balls taken over the same vertex set, open).
pub fn neighborhood_exponent(cx: &Complex, l: usize) -> Option<usize> {
    let cap = cx.top();
    let nv = cx.level(l).num_vertices() as u32;
    let mut worst = 0i64;
    for n in 0..=l {
        let lv = cx.level(n);
        for x in 0..nv {
            let u: BTreeSet<u32> = cx
                .tiles_containing_vertex(x, n)
                .iter()
                .flat_map(|&t| lv.tile_neighbors(t))
                .collect();
            for y in 0..nv {
                if y == x {
                    continue;
                }
                let m = match vertex_separation(cx, x, y, cap) {
                    Separation::Exact(m) => m as i64,
                    _ => return None,
                };
                let inside = cx.tiles_containing_vertex(y, n).iter().any(|t| u.contains(t));
                // Inside Uⁿ(x): need d < Λ^eΛ^{-n}, i.e. e > n − m.
                // Outside: need d >= Λ^{-e}Λ^{-n}, i.e. e >= m − n.
                let need = if inside { n as i64 - m + 1 } else { m - n as i64 };
                worst = worst.max(need);
            }
        }
    }
    Some(worst as usize)
}
