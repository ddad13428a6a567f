//! The ten acceptance criteria, one test each. Every test prints a single
//! `criterion NN PASS|FAIL` line (straight to stdout, so it shows even when
//! output is captured) and fails unless the criterion holds.

#[path = "common/dn_oracle.rs"]
mod dn_oracle;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Write as _;
use std::sync::{Arc, OnceLock};

use thurston::complex::point::vertex_to_sym;
use thurston::complex::{Addr, Cell, Complex, PointRef, SymVertex, Symbolic, Word};
use thurston::expansion::{compute_dn, lambda0_estimate};
use thurston::interval::Interval;
use thurston::metric::certify_constants;
use thurston::orbit::{enumerate_orbits, li, pressure, prime_orbit_table, solve_s0, weighted_length, PressureModel};
use thurston::potential::{birkhoff_sum, distortion_constant_c1, lambda_pow, Potential};
use thurston::sni::*;
use thurston::{parse_rule, rules, Color};

/// Λ for every metric-dependent criterion.
const LAMBDA: f64 = 2.0;
/// Cell-count, refinement and metric scans run up to this level.
const CELL_LEVEL: usize = 5;
/// Vertex-pair scans (distortion, Birkhoff distortion) run up to this level.
const PAIR_LEVEL: usize = 4;
/// `D_n` is compared with the exhaustive oracle up to this level.
const DN_ORACLE_LEVEL: usize = 3;
/// Lattès `D_n = 2ⁿ` is checked up to this level.
const DN_POWER_LEVEL: usize = 4;
/// Bump criterion: exponent, explicit scale and chain length.
const BUMP_ALPHA: f64 = 0.5;
const BUMP_N: usize = 2;
const BUMP_D: u32 = 4;
const BUMP_EPS: f64 = 0.01;
/// Construction criterion: exponent; ε is half the admissible bound.
const SNI_ALPHA: f64 = 0.99;
/// Pressure criterion: bracket width and the levels checked.
const S0_WIDTH: f64 = 1e-6;
const S0_TOL: f64 = 1e-7;
const PRESSURE_LEVELS: usize = 6;
/// Orbit criterion: period cap and logarithmic-integral tolerance (relative above 1).
const ORBIT_PMAX: usize = 6;
const LI_TOL: f64 = 1e-9;

fn report(id: usize, name: &str, result: Result<String, String>) {
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let _ = writeln!(std::io::stdout().lock(), "criterion {id:02} {tag} {name}: {detail}");
    if let Err(e) = result {
        panic!("criterion {id} failed: {e}");
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(text: &str, n: usize) -> Complex {
    let mut cx = Complex::new(&parse_rule(text).unwrap()).unwrap();
    cx.build_to(n).unwrap();
    cx
}

/// Open level-`n` cell containing the open level-`k` cell.
fn carrier(cx: &Complex, k: usize, mut cell: Cell, n: usize) -> Cell {
    for level in (n + 1..=k).rev() {
        cell = cx.parent_cell(level, cell);
    }
    cell
}

/// The open cells making up a closed cell.
fn faces(cx: &Complex, n: usize, cell: Cell) -> Vec<Cell> {
    let lv = cx.level(n);
    let mut out = vec![cell];
    match cell {
        Cell::Vertex(_) => {}
        Cell::Edge(e) => out.extend(lv.edge_ends[e as usize].map(Cell::Vertex)),
        Cell::Tile(t) => {
            out.extend(lv.sides(t).iter().map(|s| Cell::Edge(s.edge)));
            out.extend(lv.corners(t).iter().map(|&v| Cell::Vertex(v)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Tiles at each vertex, from a scan of tile corners.
fn corner_incidence(cx: &Complex, n: usize) -> Vec<Vec<u32>> {
    let lv = cx.level(n);
    let mut out = vec![Vec::new(); lv.num_vertices()];
    for t in 0..lv.num_tiles() as u32 {
        for &v in lv.corners(t) {
            out[v as usize].push(t);
        }
    }
    out
}

/// Closed cells whose closure contains the open cell, from a scan of faces.
fn cofaces(cx: &Complex, n: usize) -> HashMap<Cell, Vec<Cell>> {
    let lv = cx.level(n);
    let mut out: HashMap<Cell, Vec<Cell>> = HashMap::new();
    let cells = (0..lv.num_vertices() as u32)
        .map(Cell::Vertex)
        .chain((0..lv.num_edges() as u32).map(Cell::Edge))
        .chain((0..lv.num_tiles() as u32).map(Cell::Tile));
    for c in cells {
        for f in faces(cx, n, c) {
            out.entry(f).or_default().push(c);
        }
    }
    out
}

#[test]
fn criterion_01_cell_counts_and_euler_characteristic() {
    let run = || -> Result<String, String> {
        for (name, text) in rules::ALL {
            let cx = build(text, CELL_LEVEL);
            let (m, d) = (cx.m(), cx.d());
            for n in 0..=CELL_LEVEL {
                let lv = cx.level(n);
                let dn = d.pow(n as u32);
                let chi = lv.num_vertices() as i64 - lv.num_edges() as i64 + lv.num_tiles() as i64;
                ensure(lv.num_tiles() == 2 * dn && lv.num_edges() == m * dn && chi == 2, || {
                    format!("{name} n={n}: X={} E={} chi={chi}", lv.num_tiles(), lv.num_edges())
                })?;
            }
        }
        Ok(format!("both rules, n <= {CELL_LEVEL}"))
    };
    report(1, "cell counts 2d^n, m d^n, chi = 2", run());
}

#[test]
fn criterion_02_checkerboard_and_refinement() {
    let run = || -> Result<String, String> {
        let mut checked = 0usize;
        for (name, text) in rules::ALL {
            let cx = build(text, CELL_LEVEL);
            for n in 0..=CELL_LEVEL {
                let lv = cx.level(n);
                // Checkerboard, from tile sides alone.
                let mut bounding: Vec<Vec<u32>> = vec![Vec::new(); lv.num_edges()];
                for t in 0..lv.num_tiles() as u32 {
                    for s in lv.sides(t) {
                        bounding[s.edge as usize].push(t);
                    }
                }
                for (e, ts) in bounding.iter().enumerate() {
                    let colours: Vec<Color> = ts.iter().map(|&t| lv.tile_color[t as usize]).collect();
                    ensure(ts.len() == 2 && colours[0] != colours[1], || format!("{name} n={n} edge {e}: tiles {ts:?}"))?;
                }
                checked += lv.num_edges();
                if n == 0 {
                    continue;
                }
                let up = cx.level(n - 1);
                // Old vertices persist.
                ensure((0..up.num_vertices()).all(|v| cx.vertex_birth[v] as usize <= n - 1), || format!("{name} n={n}: vertex ids"))?;
                // Sub-edges of an old edge form a simple path between its ends.
                let mut sub: Vec<Vec<u32>> = vec![Vec::new(); up.num_edges()];
                for e in 0..lv.num_edges() {
                    if let Cell::Edge(p) = lv.edge_parent[e] {
                        sub[p as usize].push(e as u32);
                    }
                }
                for (p, edges) in sub.iter().enumerate() {
                    let mut deg: HashMap<u32, usize> = HashMap::new();
                    for &e in edges {
                        for v in lv.edge_ends[e as usize] {
                            *deg.entry(v).or_default() += 1;
                        }
                    }
                    let odd: BTreeSet<u32> = deg.iter().filter(|(_, &k)| k % 2 == 1).map(|(&v, _)| v).collect();
                    let ends: BTreeSet<u32> = up.edge_ends[p].iter().copied().collect();
                    let path = odd == ends && deg.values().all(|&k| k <= 2) && deg.len() == edges.len() + 1;
                    ensure(!edges.is_empty() && path, || format!("{name} n={n}: edge {p} is not a path of sub-edges"))?;
                }
                // Children of an old tile: boundary sub-edges once, interior edges twice.
                let mut kids: Vec<Vec<u32>> = vec![Vec::new(); up.num_tiles()];
                for t in 0..lv.num_tiles() {
                    kids[lv.tile_parent[t] as usize].push(t as u32);
                }
                for (x, ks) in kids.iter().enumerate() {
                    let colour = up.tile_color[x];
                    ensure(ks.len() == cx.pattern.children[colour.index()].len(), || format!("{name} n={n} tile {x}: children"))?;
                    let mut uses: HashMap<u32, usize> = HashMap::new();
                    for &k in ks {
                        for s in lv.sides(k) {
                            *uses.entry(s.edge).or_default() += 1;
                        }
                    }
                    let boundary: BTreeSet<u32> =
                        up.sides(x as u32).iter().flat_map(|s| sub[s.edge as usize].iter().copied()).collect();
                    for (&e, &u) in &uses {
                        let ok = match lv.edge_parent[e as usize] {
                            Cell::Tile(p) => p as usize == x && u == 2,
                            Cell::Edge(_) => boundary.contains(&e) && u == 1,
                            Cell::Vertex(_) => false,
                        };
                        ensure(ok, || format!("{name} n={n} tile {x}: edge {e} used {u} times"))?;
                    }
                    let once: BTreeSet<u32> = uses.iter().filter(|(_, &u)| u == 1).map(|(&e, _)| e).collect();
                    ensure(once == boundary, || format!("{name} n={n} tile {x}: boundary mismatch"))?;
                }
                checked += up.num_tiles() + up.num_edges();
            }
        }
        Ok(format!("{checked} edges and cells, both rules, n <= {CELL_LEVEL}"))
    };
    report(2, "checkerboard and refinement", run());
}

#[test]
fn criterion_03_dn_oracle_and_lattes_powers() {
    let run = || -> Result<String, String> {
        for (name, text) in rules::ALL {
            let cx = build(text, DN_ORACLE_LEVEL);
            for n in 1..=DN_ORACLE_LEVEL {
                let (got, want) = (compute_dn(&cx, n) as usize, dn_oracle::Oracle::new(&cx, n).dn());
                ensure(got == want, || format!("{name} n={n}: D_n = {got}, oracle {want}"))?;
            }
        }
        let mut cx = build(rules::LATTES_2X2, 0);
        let rows = lambda0_estimate(&mut cx, DN_POWER_LEVEL).map_err(|e| e.to_string())?;
        for r in &rows {
            ensure(r.dn == 1 << r.n && r.root == 2.0, || format!("lattes n={}: D_n = {}, root {}", r.n, r.dn, r.root))?;
        }
        Ok(format!("oracle n <= {DN_ORACLE_LEVEL}; lattes D_n = 2^n, Lambda0 = 2 for n <= {DN_POWER_LEVEL}"))
    };
    report(3, "combinatorial expansion D_n", run());
}

/// Disjoint closed `n`-cells are at distance at least `Λ^{-(n+e)}`: no pair
/// of meeting `(n+e+1)`-tiles touches both.
fn disjoint_cells_bound(cx: &Complex, n: usize, e: usize, cof: &HashMap<Cell, Vec<Cell>>) -> Result<usize, String> {
    let k = n + e + 1;
    let lk = cx.level(k);
    let mut ids: HashMap<Vec<Cell>, usize> = HashMap::new();
    let mut touched: Vec<Vec<Cell>> = Vec::new();
    let mut id_of = Vec::with_capacity(lk.num_tiles());
    for t in 0..lk.num_tiles() as u32 {
        let mut open: Vec<Cell> = vec![carrier(cx, k, Cell::Tile(t), n)];
        open.extend(lk.sides(t).iter().map(|s| carrier(cx, k, Cell::Edge(s.edge), n)));
        open.extend(lk.corners(t).iter().map(|&v| carrier(cx, k, Cell::Vertex(v), n)));
        let mut f: Vec<Cell> = open.iter().flat_map(|o| cof[o].iter().copied()).collect();
        f.sort_unstable();
        f.dedup();
        let next = ids.len();
        let id = *ids.entry(f.clone()).or_insert_with(|| {
            touched.push(f);
            next
        });
        id_of.push(id);
    }
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    for ts in corner_incidence(cx, k) {
        for &a in &ts {
            for &b in &ts {
                let (x, y) = (id_of[a as usize], id_of[b as usize]);
                pairs.insert((x.min(y), x.max(y)));
            }
        }
    }
    for &(a, b) in &pairs {
        for &s in &touched[a] {
            let fs = faces(cx, n, s);
            for &t in &touched[b] {
                if faces(cx, n, t).iter().all(|f| !fs.contains(f)) {
                    return Err(format!("level {n}: disjoint {s:?} and {t:?} closer than C^-1 Lambda^-n"));
                }
            }
        }
    }
    Ok(pairs.len())
}

/// Every `n`-edge and `n`-tile has two `(n+e+1)`-vertices whose
/// `(n+e+1)`-stars are disjoint, so its diameter is at least `Λ^{-(n+e)}`.
fn diameter_bound(cx: &Complex, n: usize, e: usize) -> Result<(), String> {
    let k = n + e + 1;
    let lk = cx.level(k);
    let inc = corner_incidence(cx, k);
    let star: Vec<BTreeSet<u32>> =
        inc.iter().map(|ts| ts.iter().flat_map(|&t| lk.corners(t).iter().copied()).collect()).collect();
    let mut inside: HashMap<Cell, Vec<u32>> = HashMap::new();
    for v in 0..lk.num_vertices() as u32 {
        inside.entry(carrier(cx, k, Cell::Vertex(v), n)).or_default().push(v);
    }
    let lv = cx.level(n);
    let cells = (0..lv.num_edges() as u32).map(Cell::Edge).chain((0..lv.num_tiles() as u32).map(Cell::Tile));
    for c in cells {
        let pts: Vec<u32> = faces(cx, n, c).iter().flat_map(|f| inside.get(f).into_iter().flatten().copied()).collect();
        let witness = pts.iter().enumerate().any(|(i, &x)| pts[i + 1..].iter().any(|&y| star[x as usize].is_disjoint(&star[y as usize])));
        ensure(witness, || format!("level {n}: {c:?} has diameter below C^-1 Lambda^-n"))?;
    }
    Ok(())
}

/// `m(x, y)` for vertices of level at most `top − 1`: the largest level at
/// which tiles containing them share a corner, from ancestors of top tiles.
struct SeparationOracle {
    /// `[vertex][level]` corner set of the level's tiles containing the vertex.
    stars: Vec<Vec<BTreeSet<u32>>>,
}

impl SeparationOracle {
    fn new(cx: &Complex, nv: usize) -> SeparationOracle {
        let top = cx.top();
        let inc = corner_incidence(cx, top);
        let stars = (0..nv)
            .map(|v| {
                let mut tiles: Vec<u32> = inc[v].clone();
                let mut per_level = vec![BTreeSet::new(); top + 1];
                for k in (0..=top).rev() {
                    per_level[k] = tiles.iter().flat_map(|&t| cx.level(k).corners(t).iter().copied()).collect();
                    if k > 0 {
                        tiles = tiles.iter().map(|&t| cx.level(k).tile_parent[t as usize]).collect();
                        tiles.sort_unstable();
                        tiles.dedup();
                    }
                }
                per_level
            })
            .collect();
        SeparationOracle { stars }
    }

    fn m(&self, x: u32, y: u32) -> Option<usize> {
        let (a, b) = (&self.stars[x as usize], &self.stars[y as usize]);
        let m = (0..a.len()).take_while(|&k| !a[k].is_disjoint(&b[k])).last()?;
        (m + 1 < a.len()).then_some(m)
    }
}

fn iterate(cx: &Complex, mut v: u32, n: usize) -> u32 {
    for _ in 0..n {
        v = cx.vertex_image[v as usize];
    }
    v
}

/// Vertex pairs of level `<= l` in a common closed `n`-tile, `n <= l`.
fn common_tile_pairs(cx: &Complex, l: usize) -> Vec<(usize, u32, u32)> {
    let mut out = BTreeSet::new();
    for n in 0..=l {
        let mut inside: HashMap<Cell, Vec<u32>> = HashMap::new();
        for v in 0..cx.level(l).num_vertices() as u32 {
            inside.entry(carrier(cx, l, Cell::Vertex(v), n)).or_default().push(v);
        }
        for t in 0..cx.level(n).num_tiles() as u32 {
            let pts: Vec<u32> = faces(cx, n, Cell::Tile(t)).iter().flat_map(|f| inside.get(f).into_iter().flatten().copied()).collect();
            for (i, &x) in pts.iter().enumerate() {
                for &y in &pts[i + 1..] {
                    out.insert((n, x.min(y), x.max(y)));
                }
            }
        }
    }
    out.into_iter().collect()
}

fn bump_params() -> BumpParams {
    BumpParams { lambda: LAMBDA, alpha: BUMP_ALPHA, c26: c26(2.0, LAMBDA, BUMP_ALPHA), eps: BUMP_EPS, n_big: BUMP_N, dn: BUMP_D }
}

#[test]
fn criterion_04_metric_certificates() {
    let run = || -> Result<String, String> {
        let mut out = Vec::new();
        for (name, text) in rules::ALL {
            let mut cx = build(text, 0);
            let p = certify_constants(&mut cx, LAMBDA, CELL_LEVEL, PAIR_LEVEL).map_err(|e| e.to_string())?;
            let e = p.c_fit.log(LAMBDA).round() as usize;
            ensure(LAMBDA.powi(e as i32) == p.c_fit, || format!("{name}: C = {} is not a power of Lambda", p.c_fit))?;
            cx.build_to(CELL_LEVEL + e + 1).map_err(|e| e.to_string())?;

            // Cell bounds. The upper diameter bound Λ^{-n} <= CΛ^{-n} is
            // structural: points of a closed n-cell share a closed n-tile.
            let mut meeting = 0;
            for n in 0..=CELL_LEVEL {
                let cof = cofaces(&cx, n);
                meeting += disjoint_cells_bound(&cx, n, e, &cof).map_err(|m| format!("{name}: {m}"))?;
                diameter_bound(&cx, n, e).map_err(|m| format!("{name}: {m}"))?;
            }

            // Distortion of fⁿ on n-tiles, and Birkhoff sums on the same pairs.
            cx.build_to(PAIR_LEVEL + 3).map_err(|e| e.to_string())?;
            let oracle = SeparationOracle::new(&cx, cx.level(PAIR_LEVEL).num_vertices());
            let pairs = common_tile_pairs(&cx, PAIR_LEVEL);
            let sym = Symbolic::new(&cx.pattern);
            let birkhoff = (name == "lattes_2x2").then(|| {
                let centre = vertex_to_sym(&cx, BUMP_N, 12);
                let bump = BumpFunction::new(&sym, &centre, 0, bump_params()).unwrap();
                let h = bump.seminorm_bound().unwrap();
                let phi = Potential::Sum(vec![Potential::Const(1.0), Potential::Bump { weight: 1.0, bump: Arc::new(bump) }]);
                let addrs: Vec<Addr> = (0..cx.level(PAIR_LEVEL).num_vertices() as u32)
                    .map(|v| PointRef::Vertex { level: PAIR_LEVEL, id: v }.to_addr(&cx, &sym))
                    .collect();
                let sums: Vec<Vec<Interval>> =
                    (0..=PAIR_LEVEL).map(|n| addrs.iter().map(|a| birkhoff_sum(&phi, &sym, a, n)).collect()).collect();
                (distortion_constant_c1(h, p.c0_fit, LAMBDA, BUMP_ALPHA), sums)
            });
            for &(n, x, y) in &pairs {
                let (fx, fy) = (iterate(&cx, x, n), iterate(&cx, y, n));
                let (Some(m), Some(mi)) = (oracle.m(x, y), oracle.m(fx, fy)) else {
                    return Err(format!("{name}: separation of {x}, {y} unresolved"));
                };
                let ratio = LAMBDA.powi(m as i32 - n as i32 - mi as i32);
                ensure(ratio <= p.c0_fit && ratio >= 1.0 / p.c0_fit, || {
                    format!("{name}: n={n} x={x} y={y}: ratio {ratio} outside [1/C0, C0] with C0 = {}", p.c0_fit)
                })?;
                if let Some((c1, sums)) = &birkhoff {
                    let diff = (sums[n][x as usize] - sums[n][y as usize]).abs();
                    let bound = lambda_pow(LAMBDA, BUMP_ALPHA, mi).scale(*c1);
                    ensure(diff.hi <= bound.hi, || format!("{name}: n={n} x={x} y={y}: |S_n diff| {diff} above {bound}"))?;
                }
            }
            out.push(format!("{name} C={} C0={} ({meeting} meeting-tile classes, {} pairs)", p.c_fit, p.c0_fit, pairs.len()));
        }
        Ok(out.join("; "))
    };
    report(4, "metric certificates", run());
}

#[test]
fn criterion_05_bump_properties() {
    let run = || -> Result<String, String> {
        let p = bump_params();
        let big = BUMP_N;
        let mut cx = build(rules::LATTES_2X2, 1 + 3 * big);
        cx.build_to(1 + 3 * big).unwrap();
        let sym = Symbolic::new(&cx.pattern);
        let mut checked = 0usize;
        for (n, centres) in [(0usize, vec![0u32, 5, 12, 20, 33]), (1, vec![9, 20, 33, 70])] {
            let (lc, l) = (n + big, n + 3 * big);
            let amp = p.amplitude(n);
            let inc = corner_incidence(&cx, l);
            let anc = |t: u32, k: usize| (k + 1..=l).rev().fold(t, |t, level| cx.level(level).tile_parent[t as usize]);
            for v in centres {
                let bump = BumpFunction::new(&sym, &vertex_to_sym(&cx, lc, v), n, p).map_err(|e| e.to_string())?;
                // The declared sup encloses the amplitude up to outward rounding.
                let declared = bump.amplitude();
                ensure(declared >= amp.hi && declared - amp.hi <= 4.0 * f64::EPSILON * amp.hi, || {
                    format!("n={n} v={v}: declared amplitude {declared}, exact {amp}")
                })?;
                let vals: Vec<Interval> = (0..cx.level(l).num_vertices() as u32)
                    .map(|x| bump.eval(&sym, &PointRef::Vertex { level: l, id: x }.to_addr(&cx, &sym)))
                    .collect();
                // Values are amplitude times multiples of 1/(D−1)², so each is
                // identified with its exact grid index before comparing.
                let grid = (p.dn - 1) * (p.dn - 1);
                let mut index = Vec::with_capacity(vals.len());
                for (x, val) in vals.iter().enumerate() {
                    let k = (val.mid() / amp.mid() * f64::from(grid)).round() as u32;
                    let exact = amp.scale(f64::from(k)).div_pos(Interval::point(f64::from(grid)));
                    let slack = 8.0 * f64::EPSILON * amp.hi;
                    ensure(val.intersects(exact) && val.width() <= exact.width() + slack, || {
                        format!("n={n} v={v}: value {val} at {x} is not on the grid")
                    })?;
                    index.push(k);
                }
                // (a) the amplitude at the centre, zero off the closed flower.
                ensure(index[v as usize] == grid, || format!("n={n} v={v}: centre value {}", vals[v as usize]))?;
                let flower: BTreeSet<u32> = corner_incidence(&cx, lc)[v as usize].iter().copied().collect();
                for (x, ts) in inc.iter().enumerate() {
                    if ts.iter().all(|&t| !flower.contains(&anc(t, lc))) {
                        ensure(vals[x] == Interval::ZERO, || format!("n={n} v={v}: value {} outside the flower at {x}", vals[x]))?;
                    }
                }
                // (b) nothing exceeds it.
                ensure(index.iter().all(|&k| k <= grid), || format!("n={n} v={v}: value above the amplitude"))?;
                // (c) oscillation on closed (n + mN)-tiles: (kmax − kmin)/(D−1)² <= (D−1)^{-(m−1)}.
                for m in 1..=3usize {
                    let k = n + m * big;
                    let mut range: HashMap<u32, (u32, u32)> = HashMap::new();
                    for t in 0..cx.level(l).num_tiles() as u32 {
                        let r = range.entry(anc(t, k)).or_insert((u32::MAX, 0));
                        for &x in cx.level(l).corners(t) {
                            r.0 = r.0.min(index[x as usize]);
                            r.1 = r.1.max(index[x as usize]);
                        }
                    }
                    for (tile, (lo, hi)) in range {
                        let spread = u64::from(hi - lo) * u64::from(p.dn - 1).pow(m as u32 - 1);
                        ensure(spread <= u64::from(grid), || format!("n={n} v={v} m={m}: oscillation {}/{grid} on tile {tile}", hi - lo))?;
                    }
                }
                checked += vals.len();
            }
        }
        Ok(format!("9 centres, {checked} vertex values, N={BUMP_N} D={BUMP_D}"))
    };
    report(5, "bump properties (a) (b) (c)", run());
}

struct Built {
    sym: Symbolic,
    phi: Potential,
    upsilon: Arc<Perturbation>,
    check: CheckConfig,
    bound: f64,
}

fn built() -> &'static Built {
    static B: OnceLock<Built> = OnceLock::new();
    B.get_or_init(|| {
        let mut cx = build(rules::LATTES_2X2, 0);
        let cert = certify_constants(&mut cx, LAMBDA, 3, 3).unwrap();
        let sym = Symbolic::new(&cx.pattern);
        let cfg = PlanConfig::new(LAMBDA, SNI_ALPHA, cert.c_fit, cert.c0_fit);
        let (phi, upsilon) = construct_perturbation(&mut cx, &sym, &Potential::Const(1.0), &cfg).unwrap();
        let plan = &upsilon.plan;
        let check = CheckConfig { eps: plan.eps, m_max: plan.m_max(), n_list: vec![plan.n0, plan.n0 + 1], tile_limit: 1 << 22 };
        let bound = eps_bound(plan.c_fit, plan.lambda, plan.n_big);
        Built { sym, phi, upsilon, check, bound }
    })
}

/// `M`-tiles inside a tile of colour `c`, `k` levels down.
fn extension_count(sym: &Symbolic, c: Color, k: usize) -> u64 {
    let mut counts = [0u64; 2];
    counts[c.index()] = 1;
    for _ in 0..k {
        let mut next = [0u64; 2];
        for host in Color::BOTH {
            for &t in &sym.pattern.children[host.index()] {
                next[sym.pattern.image(t).index()] += counts[host.index()];
            }
        }
        counts = next;
    }
    counts[0] + counts[1]
}

/// Vertices of the closed flower of a site's centre, one level down.
fn site_points(sym: &Symbolic, bump: &BumpFunction) -> Vec<Addr> {
    let c = &bump.centre;
    let mut out = BTreeSet::new();
    for t in sym.flower(&c.word, c.corner) {
        let host = sym.color(&t);
        for &k in &sym.pattern.children[host.index()] {
            let w: Word = [t.as_slice(), &[k as u16]].concat();
            for corner in 0..sym.m() {
                out.insert(sym.canonical(&SymVertex { word: w.clone(), corner }));
            }
        }
    }
    out.into_iter().map(|v| Addr::of_vertex(sym, &v)).collect()
}

/// Least generation-`g` tile below the target tile of colour `c`.
fn least_tile(sym: &Symbolic, plan: &PerturbationPlan, c: Color, g: usize) -> Word {
    let mut x = plan.y_tiles[c.index()].clone();
    while x.len() < plan.m0 + g * plan.n_big {
        let host = sym.color(&x);
        x.push(*sym.pattern.children[host.index()].iter().min().unwrap() as u16);
    }
    x
}

#[test]
fn criterion_06_perturbation_construction() {
    let run = || -> Result<String, String> {
        let b = built();
        let (sym, plan) = (&b.sym, &b.upsilon.plan);
        ensure(plan.eps == b.bound / 2.0, || format!("eps {} is not half of {}", plan.eps, b.bound))?;
        ensure(plan.deltas.undecided() == 0, || format!("{} undecided deltas", plan.deltas.undecided()))?;
        let report = check_sni(&b.phi, sym, plan, &b.check).map_err(|e| e.to_string())?;
        // (i) separation on every M in [M0, M0 + 2N]; (ii) quotients on every M-tile.
        let mut cover: HashMap<(Color, usize, usize), u64> = HashMap::new();
        for r in &report.rows {
            ensure(r.separation_ok, || format!("separation fails at {} M={} tile {:?}", r.color, r.m, r.tile))?;
            ensure(r.pass && r.quotient.lo >= plan.eps, || format!("quotient {} below eps at M={} N'={}", r.quotient, r.m, r.n))?;
            *cover.entry((r.color, r.m, r.n)).or_default() += r.tiles;
        }
        for c in Color::BOTH {
            for m in plan.m0..=plan.m0 + 2 * plan.n_big {
                for n in [plan.n0, plan.n0 + 1] {
                    let want = extension_count(sym, sym.color(&plan.y_tiles[c.index()]), m - plan.m0);
                    let got = cover.get(&(c, m, n)).copied().unwrap_or(0);
                    ensure(got == want, || format!("{c} M={m} N'={n}: {got} of {want} tiles covered"))?;
                }
            }
        }
        // (iii) sampled Hölder norm of the perturbation.
        let mut points = Vec::new();
        for c in Color::BOTH {
            for g in 1..=plan.g_cap {
                let x = least_tile(sym, plan, c, g);
                for j in 1..=2 {
                    points.extend(site_points(sym, &b.upsilon.site_bump(sym, j, &x)));
                }
            }
        }
        for x in [least_tile(sym, plan, Color::Black, 1), least_tile(sym, plan, Color::White, 2)] {
            points.push(plan.designated_point(sym, &x, 1));
            points.push(plan.designated_point(sym, &x, 2));
        }
        let upsilon = Potential::Perturbation(b.upsilon.clone());
        let cap = plan.m_max() + plan.j_cap + 4 * plan.n_big;
        let sample = sampled_holder(&upsilon, sym, &points, plan.lambda, plan.alpha, cap);
        ensure(sample.sup > 0.0, || "the sample misses every support".to_string())?;
        ensure(sample.norm() <= plan.c27 * plan.eps, || format!("sampled norm {} above C27 eps = {}", sample.norm(), plan.c27 * plan.eps))?;
        Ok(format!(
            "N={} M0={} N0={} eps={:e}: {} rows, min quotient {:e}; sampled norm {:e} <= {:e} over {} points",
            plan.n_big,
            plan.m0,
            plan.n0,
            plan.eps,
            report.rows.len(),
            report.min_quotient(),
            sample.norm(),
            plan.c27 * plan.eps,
            points.len()
        ))
    };
    report(6, "non-integrability construction", run());
}

#[test]
fn criterion_07_constant_fails_everywhere() {
    let run = || -> Result<String, String> {
        let b = built();
        let report = check_sni(&Potential::Const(1.0), &b.sym, &b.upsilon.plan, &b.check).map_err(|e| e.to_string())?;
        ensure(!report.rows.is_empty(), || "no rows".to_string())?;
        for r in &report.rows {
            ensure(r.quotient == Interval::ZERO && !r.pass, || format!("M={} tile {:?}: quotient {}", r.m, r.tile, r.quotient))?;
        }
        Ok(format!("{} rows, all quotient [0, 0]", report.rows.len()))
    };
    report(7, "constant potential fails", run());
}

#[test]
fn criterion_08_openness() {
    let run = || -> Result<String, String> {
        let b = built();
        let (sym, plan) = (&b.sym, &b.upsilon.plan);
        let r = openness_radius(plan.eps, plan.alpha, plan.lambda, plan.c0);
        let psi = openness_perturbation(sym, &b.upsilon, r);
        let white = b.upsilon.site_bump(sym, 2, &least_tile(sym, plan, Color::White, 1));
        let norm = white.amplitude() + white.seminorm_bound().unwrap();
        let others = [
            psi.clone(),
            Potential::Scaled(-1.0, Box::new(psi)),
            Potential::Bump { weight: r / norm, bump: Arc::new(white) },
            Potential::Const(r),
        ];
        let half = CheckConfig { eps: plan.eps / 2.0, ..b.check.clone() };
        let mut worst = f64::INFINITY;
        for (i, psi) in others.into_iter().enumerate() {
            let size = psi.norm_bound().unwrap();
            ensure(size <= r * (1.0 + 1e-12), || format!("perturbation {i}: norm {size} above radius {r}"))?;
            let moved = Potential::Sum(vec![b.phi.clone(), psi]);
            let report = check_sni(&moved, sym, plan, &half).map_err(|e| e.to_string())?;
            ensure(report.all_pass(), || format!("perturbation {i}: min quotient {:e} below eps/2", report.min_quotient()))?;
            worst = worst.min(report.min_quotient());
        }
        Ok(format!("radius {r:e}, 4 perturbations, min quotient {worst:e} >= eps/2 = {:e}", plan.eps / 2.0))
    };
    report(8, "openness", run());
}

#[test]
fn criterion_09_pressure_of_constants() {
    let run = || -> Result<String, String> {
        let cx = build(rules::LATTES_2X2, 0);
        let sym = Symbolic::new(&cx.pattern);
        let model = PressureModel { lambda: LAMBDA, alpha: 0.5, c0: 1.0 };
        let log4 = 4f64.ln();
        let mut widest = 0.0f64;
        for c in [0.5, 1.0, 2.0, 3.0] {
            let phi = Potential::Const(c);
            let s0 = solve_s0(&phi, &sym, &model, 3, S0_TOL).map_err(|e| e.to_string())?;
            ensure(s0.contains(log4 / c) && s0.width() <= S0_WIDTH, || format!("c={c}: s0 bracket {s0}"))?;
            widest = widest.max(s0.width());
            for n in 1..=PRESSURE_LEVELS {
                let p = pressure(&phi, &sym, &model, 0.0, n).map_err(|e| e.to_string())?;
                ensure(p.contains(log4), || format!("c={c} n={n}: P(0) = {p}"))?;
            }
        }
        Ok(format!("c in {{0.5, 1, 2, 3}}, widest bracket {widest:e}, P(0) at n <= {PRESSURE_LEVELS}"))
    };
    report(9, "pressure root of constants", run());
}

/// Admissible cyclic words of length `p`, counted letter by letter.
fn brute_trace(sym: &Symbolic, p: usize) -> u64 {
    let pat = &sym.pattern;
    let n = pat.spec.tiles.len();
    let mut count = 0;
    let mut w = vec![0usize; p];
    loop {
        count += u64::from((0..p).all(|k| pat.host(w[(k + 1) % p]) == pat.image(w[k])));
        let mut i = 0;
        while i < p && w[i] + 1 == n {
            w[i] = 0;
            i += 1;
        }
        if i == p {
            return count;
        }
        w[i] += 1;
    }
}

fn mobius(mut n: usize) -> i64 {
    let (mut mu, mut d) = (1, 2);
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        -mu
    } else {
        mu
    }
}

/// `∫₂^y du / log u` by adaptive Simpson in `t = log u`.
fn li_simpson(y: f64) -> f64 {
    fn f(t: f64) -> f64 {
        t.exp() / t
    }
    fn simpson(a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn go(a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (simpson(a, m), simpson(m, b));
        if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
            return l + r + (l + r - whole) / 15.0;
        }
        go(a, m, l, tol / 2.0, depth - 1) + go(m, b, r, tol / 2.0, depth - 1)
    }
    let (a, b) = (2f64.ln(), y.ln());
    go(a, b, simpson(a, b), 1e-13 * y.max(1.0), 50)
}

#[test]
fn criterion_10_orbit_census_and_counting() {
    let run = || -> Result<String, String> {
        let mut census = Vec::new();
        for (name, text) in rules::ALL {
            let cx = build(text, 0);
            let sym = Symbolic::new(&cx.pattern);
            let orbits = enumerate_orbits(&sym, ORBIT_PMAX, None, 1 << 22).map_err(|e| e.to_string())?;
            let mut primitive = vec![0u64; ORBIT_PMAX + 1];
            for p in 1..=ORBIT_PMAX {
                let s: i64 = (1..=p).filter(|q| p % q == 0).map(|q| mobius(p / q) * brute_trace(&sym, q) as i64).sum();
                let want = (s / p as i64) as u64;
                let got = orbits.iter().filter(|o| o.period == p).count() as u64;
                ensure(s % p as i64 == 0 && got == want, || format!("{name} p={p}: {got} orbits, oracle {want}"))?;
                primitive[p] = want;
            }
            if name == "lattes_2x2" {
                let one = Potential::Const(1.0);
                let model = PressureModel { lambda: LAMBDA, alpha: 0.5, c0: 1.0 };
                let s0 = solve_s0(&one, &sym, &model, 3, 1e-10).map_err(|e| e.to_string())?;
                let lengths: Vec<Interval> = orbits.iter().map(|o| weighted_length(&one, &sym, o)).collect();
                let rows = prime_orbit_table(&lengths, ORBIT_PMAX, 1.0, s0, 1.0, LI_TOL);
                ensure(rows.len() == ORBIT_PMAX, || format!("{} table rows", rows.len()))?;
                for r in &rows {
                    let want: u64 = primitive[1..=r.t as usize].iter().sum();
                    ensure(r.pi == want && r.straddling == 0, || format!("T={}: pi {} vs census {want}", r.t, r.pi))?;
                    let reference = li_simpson((s0.mid() * r.t).exp());
                    ensure((r.li - reference).abs() <= LI_TOL * reference.abs().max(1.0), || {
                        format!("T={}: Li {} vs quadrature {reference}", r.t, r.li)
                    })?;
                }
            }
            census.push(format!("{name} {:?}", &primitive[1..]));
        }
        ensure(li(2.0, LI_TOL) == 0.0, || "Li(2) != 0".to_string())?;
        for y in [2.5, 10.0, 100.0, 4096.0, 1e6] {
            let (got, want) = (li(y, LI_TOL), li_simpson(y));
            ensure((got - want).abs() <= LI_TOL * want.abs().max(1.0), || format!("Li({y}) = {got}, quadrature {want}"))?;
        }
        Ok(format!("census p <= {ORBIT_PMAX}: {}", census.join(", ")))
    };
    report(10, "orbit census, pi(T) and Li", run());
}
