//! Two-tile subdivision rules: parsing, serialization and validation.
//!
//! A rule describes the level-1 cell decomposition of the sphere together
//! with the combinatorics of the map on it. The curve through the `m`
//! postcritical points splits the sphere into the black and white 0-tiles;
//! every level-1 tile sits in one of them (its host) and is mapped onto one
//! of them (its image).
//!
//! Orientation conventions: tile boundaries are listed positively. The
//! positive boundary of the black 0-tile visits the posts in increasing
//! order, so 0-edge `j` runs from post `j` to post `j + 1`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Tile colour. Black is index 0, white is index 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Black, Color::White];

    pub fn index(self) -> usize {
        match self {
            Color::Black => 0,
            Color::White => 1,
        }
    }

    pub fn from_index(i: usize) -> Color {
        if i == 0 {
            Color::Black
        } else {
            Color::White
        }
    }

    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Black => 'b',
            Color::White => 'w',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// An edge traversed in a given direction; `forward` means from `ends[0]` to `ends[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleVertex {
    /// Index of the postcritical point this vertex maps to.
    pub post: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEdge {
    pub ends: [usize; 2],
    /// 0-edge this edge maps onto.
    pub zero_edge: usize,
    /// Whether `ends[0] -> ends[1]` maps onto the 0-edge in its own direction.
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTile {
    pub host: Color,
    pub image: Color,
    /// Positively oriented boundary, exactly `m` entries.
    pub boundary: Vec<SignedEdge>,
}

/// Level-1 data of an expanding Thurston map with an invariant curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionRuleSpec {
    pub m: usize,
    pub d: usize,
    pub vertices: Vec<RuleVertex>,
    pub edges: Vec<RuleEdge>,
    pub tiles: Vec<RuleTile>,
    /// `chains[j]` lists, from post `j` to post `j + 1`, the edges covering 0-edge `j`.
    pub chains: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {what} id {id} out of range")]
    Dangling { line: usize, what: &'static str, id: usize },
    #[error("line {line}: duplicate {what} id {id}")]
    Duplicate { line: usize, what: &'static str, id: usize },
    #[error("missing {0}")]
    Missing(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_num(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| syntax(line, format!("expected non-negative integer, found `{tok}`")))
}

fn parse_color(tok: &str, line: usize) -> Result<Color, ParseError> {
    match tok {
        "b" => Ok(Color::Black),
        "w" => Ok(Color::White),
        _ => Err(syntax(line, format!("expected colour b or w, found `{tok}`"))),
    }
}

fn parse_signed(tok: &str, line: usize) -> Result<SignedEdge, ParseError> {
    let (num, forward) = if let Some(s) = tok.strip_suffix('+') {
        (s, true)
    } else if let Some(s) = tok.strip_suffix('-') {
        (s, false)
    } else {
        return Err(syntax(line, format!("signed edge `{tok}` needs a + or - suffix")));
    };
    Ok(SignedEdge { edge: parse_num(num, line)?, forward })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Vertices,
    Edges,
    Tiles,
}

/// Table of `count` records keyed by id, filled in any order.
struct Slots<T> {
    what: &'static str,
    items: Vec<Option<T>>,
}

impl<T> Slots<T> {
    fn new(what: &'static str, count: usize) -> Self {
        Slots { what, items: (0..count).map(|_| None).collect() }
    }

    fn put(&mut self, id: usize, item: T, line: usize) -> Result<(), ParseError> {
        let slot = self
            .items
            .get_mut(id)
            .ok_or(ParseError::Dangling { line, what: self.what, id })?;
        if slot.is_some() {
            return Err(ParseError::Duplicate { line, what: self.what, id });
        }
        *slot = Some(item);
        Ok(())
    }

    fn filled(&self) -> usize {
        self.items.iter().filter(|s| s.is_some()).count()
    }

    fn finish(self) -> Result<Vec<T>, ParseError> {
        let what = self.what;
        self.items
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| ParseError::Missing(format!("{what} {i}"))))
            .collect()
    }
}

/// Parses a rule document. Only syntactic checks are made here.
pub fn parse_rule(text: &str) -> Result<SubdivisionRuleSpec, ParseError> {
    let mut m: Option<usize> = None;
    let mut d: Option<usize> = None;
    let mut vertices: Option<Slots<RuleVertex>> = None;
    let mut edges: Option<Slots<RuleEdge>> = None;
    let mut tiles: Option<Slots<RuleTile>> = None;
    let mut chains: Vec<Option<Vec<usize>>> = Vec::new();
    let mut section = Section::None;
    let mut remaining = 0usize;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if remaining > 0 {
            remaining -= 1;
            let toks: Vec<&str> = content.split_whitespace().collect();
            match section {
                Section::Vertices => {
                    if toks.len() != 2 {
                        return Err(syntax(line, "vertex line needs `vid post_index`"));
                    }
                    let post = parse_num(toks[1], line)?;
                    let mm = m.ok_or_else(|| syntax(line, "POST must precede VERTICES"))?;
                    if post >= mm {
                        return Err(ParseError::Dangling { line, what: "post", id: post });
                    }
                    let vid = parse_num(toks[0], line)?;
                    vertices.as_mut().unwrap().put(vid, RuleVertex { post }, line)?;
                }
                Section::Edges => {
                    if toks.len() != 5 {
                        return Err(syntax(line, "edge line needs `eid v_a v_b zero_edge fwd|rev`"));
                    }
                    let nv = vertices
                        .as_ref()
                        .map(|v| v.items.len())
                        .ok_or_else(|| syntax(line, "VERTICES must precede EDGES"))?;
                    let mm = m.ok_or_else(|| syntax(line, "POST must precede EDGES"))?;
                    let a = parse_num(toks[1], line)?;
                    let b = parse_num(toks[2], line)?;
                    for v in [a, b] {
                        if v >= nv {
                            return Err(ParseError::Dangling { line, what: "vertex", id: v });
                        }
                    }
                    let zero_edge = parse_num(toks[3], line)?;
                    if zero_edge >= mm {
                        return Err(ParseError::Dangling { line, what: "0-edge", id: zero_edge });
                    }
                    let forward = match toks[4] {
                        "fwd" => true,
                        "rev" => false,
                        t => return Err(syntax(line, format!("expected fwd or rev, found `{t}`"))),
                    };
                    let eid = parse_num(toks[0], line)?;
                    edges
                        .as_mut()
                        .unwrap()
                        .put(eid, RuleEdge { ends: [a, b], zero_edge, forward }, line)?;
                }
                Section::Tiles => {
                    if toks.len() != 4 {
                        return Err(syntax(line, "tile line needs `tid host image e±,...`"));
                    }
                    let mm = m.ok_or_else(|| syntax(line, "POST must precede TILES"))?;
                    let ne = edges
                        .as_ref()
                        .map(|e| e.items.len())
                        .ok_or_else(|| syntax(line, "EDGES must precede TILES"))?;
                    let host = parse_color(toks[1], line)?;
                    let image = parse_color(toks[2], line)?;
                    let boundary = toks[3]
                        .split(',')
                        .map(|t| parse_signed(t.trim(), line))
                        .collect::<Result<Vec<_>, _>>()?;
                    if boundary.len() != mm {
                        return Err(syntax(
                            line,
                            format!("tile boundary has {} edges, expected {mm}", boundary.len()),
                        ));
                    }
                    if let Some(se) = boundary.iter().find(|se| se.edge >= ne) {
                        return Err(ParseError::Dangling { line, what: "edge", id: se.edge });
                    }
                    let tid = parse_num(toks[0], line)?;
                    tiles.as_mut().unwrap().put(tid, RuleTile { host, image, boundary }, line)?;
                }
                Section::None => unreachable!("records only follow a counted header"),
            }
            continue;
        }

        if let Some(rest) = content.strip_prefix("ZEROEDGE") {
            let (head, list) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line, "ZEROEDGE needs `j: e,e,...`"))?;
            let mm = m.ok_or_else(|| syntax(line, "POST must precede ZEROEDGE"))?;
            let ne = edges
                .as_ref()
                .map(|e| e.items.len())
                .ok_or_else(|| syntax(line, "EDGES must precede ZEROEDGE"))?;
            let j = parse_num(head.trim(), line)?;
            if j >= mm {
                return Err(ParseError::Dangling { line, what: "0-edge", id: j });
            }
            let list = list
                .split(',')
                .map(|t| parse_num(t.trim(), line))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&e) = list.iter().find(|&&e| e >= ne) {
                return Err(ParseError::Dangling { line, what: "edge", id: e });
            }
            if chains[j].is_some() {
                return Err(ParseError::Duplicate { line, what: "0-edge chain", id: j });
            }
            chains[j] = Some(list);
            continue;
        }

        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(line, format!("unrecognised line `{content}`")));
        }
        let value = parse_num(toks[1], line)?;
        match toks[0] {
            "POST" => {
                if m.is_some() {
                    return Err(syntax(line, "POST given twice"));
                }
                m = Some(value);
                chains = vec![None; value];
            }
            "DEG" => {
                if d.is_some() {
                    return Err(syntax(line, "DEG given twice"));
                }
                d = Some(value);
            }
            "VERTICES" | "EDGES" | "TILES" => {
                let (sec, what) = match toks[0] {
                    "VERTICES" => (Section::Vertices, "vertex"),
                    "EDGES" => (Section::Edges, "edge"),
                    _ => (Section::Tiles, "tile"),
                };
                let slot_taken = match sec {
                    Section::Vertices => vertices.replace(Slots::new(what, value)).is_some(),
                    Section::Edges => edges.replace(Slots::new(what, value)).is_some(),
                    _ => tiles.replace(Slots::new(what, value)).is_some(),
                };
                if slot_taken {
                    return Err(syntax(line, format!("{} given twice", toks[0])));
                }
                section = sec;
                remaining = value;
            }
            other => return Err(syntax(line, format!("unknown header `{other}`"))),
        }
    }
    if remaining > 0 {
        return Err(syntax(last_line, format!("{remaining} records missing at end of section")));
    }

    let m = m.ok_or_else(|| ParseError::Missing("POST header".into()))?;
    let d = d.ok_or_else(|| ParseError::Missing("DEG header".into()))?;
    let vertices = vertices.ok_or_else(|| ParseError::Missing("VERTICES section".into()))?;
    let edges = edges.ok_or_else(|| ParseError::Missing("EDGES section".into()))?;
    let tiles = tiles.ok_or_else(|| ParseError::Missing("TILES section".into()))?;
    debug_assert!(vertices.filled() <= vertices.items.len());
    let chains = chains
        .into_iter()
        .enumerate()
        .map(|(j, c)| c.ok_or_else(|| ParseError::Missing(format!("ZEROEDGE {j}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubdivisionRuleSpec {
        m,
        d,
        vertices: vertices.finish()?,
        edges: edges.finish()?,
        tiles: tiles.finish()?,
        chains,
    })
}

impl SubdivisionRuleSpec {
    /// Writes the rule in the line format accepted by [`parse_rule`].
    pub fn to_rule_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("POST {}\nDEG {}\n", self.m, self.d));
        s.push_str(&format!("VERTICES {}\n", self.vertices.len()));
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("{i} {}\n", v.post));
        }
        s.push_str(&format!("EDGES {}\n", self.edges.len()));
        for (i, e) in self.edges.iter().enumerate() {
            let dir = if e.forward { "fwd" } else { "rev" };
            s.push_str(&format!("{i} {} {} {} {dir}\n", e.ends[0], e.ends[1], e.zero_edge));
        }
        s.push_str(&format!("TILES {}\n", self.tiles.len()));
        for (i, t) in self.tiles.iter().enumerate() {
            let b: Vec<String> = t
                .boundary
                .iter()
                .map(|se| format!("{}{}", se.edge, if se.forward { '+' } else { '-' }))
                .collect();
            s.push_str(&format!("{i} {} {} {}\n", t.host, t.image, b.join(",")));
        }
        for (j, c) in self.chains.iter().enumerate() {
            let l: Vec<String> = c.iter().map(|e| e.to_string()).collect();
            s.push_str(&format!("ZEROEDGE {j}: {}\n", l.join(",")));
        }
        s
    }

    pub fn edge_start(&self, se: SignedEdge) -> usize {
        let e = &self.edges[se.edge];
        if se.forward {
            e.ends[0]
        } else {
            e.ends[1]
        }
    }

    pub fn edge_end(&self, se: SignedEdge) -> usize {
        let e = &self.edges[se.edge];
        if se.forward {
            e.ends[1]
        } else {
            e.ends[0]
        }
    }

    /// Corner vertices of a tile, `corner[k]` being the start of boundary edge `k`.
    pub fn tile_corners(&self, t: usize) -> Vec<usize> {
        self.tiles[t].boundary.iter().map(|&se| self.edge_start(se)).collect()
    }

    /// Position of postcritical point `j` among the level-1 vertices: the shared
    /// endpoint of chains `j - 1` and `j`. `None` if the chains do not determine it.
    pub fn post_vertex(&self, j: usize) -> Option<usize> {
        let prev = *self.chains[(j + self.m - 1) % self.m].last()?;
        let next = *self.chains[j].first()?;
        let a = self.edges[prev].ends;
        let b = self.edges[next].ends;
        let common: BTreeSet<usize> =
            a.iter().copied().filter(|v| b.contains(v)).collect();
        if common.len() == 1 {
            common.into_iter().next()
        } else {
            None
        }
    }

    /// Number of level-1 tiles of each image colour hosted by each 0-tile,
    /// as `counts[host][image]`.
    pub fn host_image_counts(&self) -> [[usize; 2]; 2] {
        let mut c = [[0; 2]; 2];
        for t in &self.tiles {
            c[t.host.index()][t.image.index()] += 1;
        }
        c
    }
}

/// Named structural properties checked by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    CellCounts,
    ColorBalance,
    EdgeUse,
    TileShape,
    Checkerboard,
    ImageLabels,
    Euler,
    VertexLinks,
    Connected,
    ZeroEdgeChains,
    PostCoverage,
    HostColors,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::CellCounts => "cell-counts",
            Invariant::ColorBalance => "color-balance",
            Invariant::EdgeUse => "edge-use",
            Invariant::TileShape => "tile-shape",
            Invariant::Checkerboard => "checkerboard",
            Invariant::ImageLabels => "image-labels",
            Invariant::Euler => "euler",
            Invariant::VertexLinks => "vertex-links",
            Invariant::Connected => "connected",
            Invariant::ZeroEdgeChains => "zero-edge-chains",
            Invariant::PostCoverage => "post-coverage",
            Invariant::HostColors => "host-colors",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub invariant: Invariant,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

/// Violations in check order; empty iff the rule is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, inv: Invariant) -> bool {
        self.violations.iter().any(|v| v.invariant == inv)
    }

    fn push(&mut self, invariant: Invariant, detail: impl Into<String>) {
        self.violations.push(Violation { invariant, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a parsed rule. Later checks that
/// depend on a failed earlier one are skipped rather than reported twice.
pub fn validate(spec: &SubdivisionRuleSpec) -> ValidationReport {
    let mut r = ValidationReport::default();
    let (m, d) = (spec.m, spec.d);
    let nv = spec.vertices.len();
    let ne = spec.edges.len();
    let nt = spec.tiles.len();

    if m < 3 {
        r.push(Invariant::CellCounts, format!("need at least 3 posts, found {m}"));
    }
    if d < 2 {
        r.push(Invariant::CellCounts, format!("degree must be at least 2, found {d}"));
    }
    if nt != 2 * d {
        r.push(Invariant::CellCounts, format!("{nt} tiles, expected 2d = {}", 2 * d));
    }
    if ne != m * d {
        r.push(Invariant::CellCounts, format!("{ne} edges, expected md = {}", m * d));
    }
    if nv > m * d {
        r.push(Invariant::CellCounts, format!("{nv} vertices exceed md = {}", m * d));
    }

    let counts = spec.host_image_counts();
    let black = counts[0][0] + counts[1][0];
    if black != d || nt - black != d {
        r.push(
            Invariant::ColorBalance,
            format!("{black} black and {} white tiles, expected {d} each", nt - black),
        );
    }

    // Each edge must be used once forward and once backward.
    let mut uses: Vec<[Option<usize>; 2]> = vec![[None, None]; ne];
    let mut edge_use_ok = true;
    for (t, tile) in spec.tiles.iter().enumerate() {
        for se in &tile.boundary {
            let slot = &mut uses[se.edge][usize::from(!se.forward)];
            if slot.is_some() {
                edge_use_ok = false;
                r.push(
                    Invariant::EdgeUse,
                    format!(
                        "edge {} traversed {} more than once",
                        se.edge,
                        if se.forward { "forward" } else { "backward" }
                    ),
                );
            }
            *slot = Some(t);
        }
    }
    for (e, u) in uses.iter().enumerate() {
        if u[0].is_none() || u[1].is_none() {
            edge_use_ok = false;
            r.push(Invariant::EdgeUse, format!("edge {e} is not used once in each direction"));
        }
    }

    let mut shape_ok = true;
    for (t, tile) in spec.tiles.iter().enumerate() {
        let k = tile.boundary.len();
        for i in 0..k {
            let end = spec.edge_end(tile.boundary[i]);
            let next = spec.edge_start(tile.boundary[(i + 1) % k]);
            if end != next {
                shape_ok = false;
                r.push(Invariant::TileShape, format!("tile {t} boundary breaks after position {i}"));
            }
        }
        let corners: BTreeSet<usize> = spec.tile_corners(t).into_iter().collect();
        if corners.len() != m {
            shape_ok = false;
            r.push(Invariant::TileShape, format!("tile {t} has {} distinct corners, expected {m}", corners.len()));
        }
    }

    if edge_use_ok {
        for (e, u) in uses.iter().enumerate() {
            let (a, b) = (u[0].unwrap(), u[1].unwrap());
            if spec.tiles[a].image == spec.tiles[b].image {
                r.push(
                    Invariant::Checkerboard,
                    format!("edge {e} separates tiles {a} and {b} of the same image colour"),
                );
            }
        }
    }

    // Edge images must agree with endpoint labels, and tile labels must run
    // around the image 0-tile in its own orientation.
    if m >= 3 {
        for (e, edge) in spec.edges.iter().enumerate() {
            let la = spec.vertices[edge.ends[0]].post;
            let lb = spec.vertices[edge.ends[1]].post;
            let (ea, eb) = if edge.forward {
                (edge.zero_edge, (edge.zero_edge + 1) % m)
            } else {
                ((edge.zero_edge + 1) % m, edge.zero_edge)
            };
            if (la, lb) != (ea, eb) {
                r.push(
                    Invariant::ImageLabels,
                    format!("edge {e} has endpoint labels ({la},{lb}) but image ({ea},{eb})"),
                );
            }
        }
        if shape_ok {
            for (t, tile) in spec.tiles.iter().enumerate() {
                let labels: Vec<usize> =
                    spec.tile_corners(t).iter().map(|&v| spec.vertices[v].post).collect();
                let step = if tile.image == Color::Black { 1 } else { m - 1 };
                if (0..m).any(|k| labels[(k + 1) % m] != (labels[k] + step) % m) {
                    r.push(
                        Invariant::ImageLabels,
                        format!("tile {t} corner labels {labels:?} do not run around the {} 0-tile", tile.image),
                    );
                }
            }
        }
    }

    let euler = nv as i64 - ne as i64 + nt as i64;
    if euler != 2 {
        r.push(Invariant::Euler, format!("V - E + F = {euler}, expected 2"));
    }

    if edge_use_ok && shape_ok {
        check_vertex_links(spec, &uses, &mut r);
    }

    if edge_use_ok && nt > 0 {
        let mut uf = UnionFind::new(nt);
        for u in &uses {
            uf.union(u[0].unwrap(), u[1].unwrap());
        }
        let comps = (0..nt).filter(|&t| uf.find(t) == t).count();
        if comps != 1 {
            r.push(Invariant::Connected, format!("tile adjacency has {comps} components"));
        }
    }

    let chain_dirs = check_chains(spec, &mut r);

    let mut covered = vec![false; m];
    for v in &spec.vertices {
        if v.post < m {
            covered[v.post] = true;
        }
    }
    for (j, c) in covered.iter().enumerate() {
        if !c {
            r.push(Invariant::PostCoverage, format!("post {j} is the image of no vertex"));
        }
    }

    if let (Some(aligned), true) = (chain_dirs, edge_use_ok) {
        check_hosts(spec, &uses, &aligned, &mut r);
    }
    r
}

fn check_vertex_links(
    spec: &SubdivisionRuleSpec,
    uses: &[[Option<usize>; 2]],
    r: &mut ValidationReport,
) {
    let m = spec.m;
    // Corner (t, k) sits at the start of boundary edge k. Crossing the
    // outgoing edge lands in the neighbour, at the corner after that edge.
    let mut seen = vec![vec![false; m]; spec.tiles.len()];
    let mut cycles = vec![0usize; spec.vertices.len()];
    for t in 0..spec.tiles.len() {
        for k in 0..m {
            if seen[t][k] {
                continue;
            }
            let v = spec.edge_start(spec.tiles[t].boundary[k]);
            cycles[v] += 1;
            let (mut ct, mut ck) = (t, k);
            while !seen[ct][ck] {
                seen[ct][ck] = true;
                let se = spec.tiles[ct].boundary[ck];
                let other = uses[se.edge][usize::from(se.forward)].unwrap();
                let pos = spec.tiles[other]
                    .boundary
                    .iter()
                    .position(|o| o.edge == se.edge && o.forward != se.forward)
                    .unwrap();
                ct = other;
                ck = (pos + 1) % m;
            }
        }
    }
    for (v, &c) in cycles.iter().enumerate() {
        if c != 1 {
            r.push(
                Invariant::VertexLinks,
                format!("vertex {v} has {c} corner cycles, expected exactly 1"),
            );
        }
    }
}

/// Checks the chains and returns, per edge, `Some(aligned)` for edges on the
/// curve (aligned with the chain direction) and `None` off it.
fn check_chains(spec: &SubdivisionRuleSpec, r: &mut ValidationReport) -> Option<Vec<Option<bool>>> {
    let m = spec.m;
    let before = r.violations.len();
    let mut on_curve: Vec<Option<bool>> = vec![None; spec.edges.len()];
    if spec.chains.iter().any(|c| c.is_empty()) {
        r.push(Invariant::ZeroEdgeChains, "every chain needs at least one edge");
        return None;
    }
    let posts: Vec<Option<usize>> = (0..m).map(|j| spec.post_vertex(j)).collect();
    for (j, p) in posts.iter().enumerate() {
        if p.is_none() {
            r.push(
                Invariant::ZeroEdgeChains,
                format!("chains {} and {j} do not share exactly one endpoint", (j + m - 1) % m),
            );
        }
    }
    if r.violations.len() > before {
        return None;
    }
    let mut visited = vec![false; spec.vertices.len()];
    for j in 0..m {
        let mut cur = posts[j].unwrap();
        for &e in &spec.chains[j] {
            if on_curve[e].is_some() {
                r.push(Invariant::ZeroEdgeChains, format!("edge {e} occurs twice on the curve"));
                continue;
            }
            let ends = spec.edges[e].ends;
            if ends[0] == cur {
                on_curve[e] = Some(true);
                cur = ends[1];
            } else if ends[1] == cur {
                on_curve[e] = Some(false);
                cur = ends[0];
            } else {
                r.push(Invariant::ZeroEdgeChains, format!("chain {j} is broken at edge {e}"));
                break;
            }
            if visited[cur] {
                r.push(Invariant::ZeroEdgeChains, format!("chain {j} revisits vertex {cur}"));
            }
            visited[cur] = true;
        }
        if cur != posts[(j + 1) % m].unwrap() {
            r.push(Invariant::ZeroEdgeChains, format!("chain {j} does not end at post {}", (j + 1) % m));
        }
    }
    if r.violations.len() > before {
        None
    } else {
        Some(on_curve)
    }
}

fn check_hosts(
    spec: &SubdivisionRuleSpec,
    uses: &[[Option<usize>; 2]],
    aligned: &[Option<bool>],
    r: &mut ValidationReport,
) {
    let nt = spec.tiles.len();
    let mut uf = UnionFind::new(nt);
    for (e, u) in uses.iter().enumerate() {
        if aligned[e].is_none() {
            uf.union(u[0].unwrap(), u[1].unwrap());
        }
    }
    let roots: BTreeSet<usize> = (0..nt).map(|t| uf.find(t)).collect();
    if roots.len() != 2 {
        r.push(Invariant::HostColors, format!("the curve cuts the sphere into {} regions, expected 2", roots.len()));
    }
    for t in 0..nt {
        let root = uf.find(t);
        if spec.tiles[t].host != spec.tiles[root].host {
            r.push(
                Invariant::HostColors,
                format!("tiles {t} and {root} share a side of the curve but not a host"),
            );
        }
    }
    // Black-hosted tiles run along the curve in the direction of the chains.
    for (e, a) in aligned.iter().enumerate() {
        if let Some(a) = *a {
            for dir in [true, false] {
                let t = uses[e][usize::from(!dir)].unwrap();
                let with_chain = dir == a;
                let expected = if with_chain { Color::Black } else { Color::White };
                if spec.tiles[t].host != expected {
                    r.push(
                        Invariant::HostColors,
                        format!("tile {t} lies on the {expected} side of curve edge {e} but has host {}", spec.tiles[t].host),
                    );
                }
            }
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
