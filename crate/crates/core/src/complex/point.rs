//! Points of the sphere: vertices of a built level, or eventually periodic addresses.

use super::symbolic::{Letter, Location, SymVertex, Symbolic, Word};
use super::{Complex, NONE};
use crate::rulespec::Color;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointRef {
    /// Vertex `id` of the level-`level` complex.
    Vertex { level: usize, id: u32 },
    /// The point `pre · period · period · …`.
    Address(Addr),
}

/// An eventually periodic admissible address.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Addr {
    pub pre: Word,
    pub period: Word,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PointError {
    #[error("period word is empty")]
    EmptyPeriod,
    #[error("address is not admissible at position {0}")]
    Inadmissible(usize),
    #[error("vertex {id} does not exist at level {level}")]
    NoSuchVertex { level: usize, id: u32 },
    #[error("level {0} is not built")]
    NotBuilt(usize),
}

impl Addr {
    pub fn new(sym: &Symbolic, pre: Word, period: Word) -> Result<Addr, PointError> {
        if period.is_empty() {
            return Err(PointError::EmptyPeriod);
        }
        let p = &sym.pattern;
        let ntiles = p.spec.tiles.len();
        let full: Vec<Letter> = pre.iter().chain(period.iter()).chain(period.first()).copied().collect();
        if let Some(k) = full.iter().position(|&t| t as usize >= ntiles) {
            return Err(PointError::Inadmissible(k));
        }
        if let Some(k) = full.windows(2).position(|w| p.host(w[1] as usize) != p.image(w[0] as usize)) {
            return Err(PointError::Inadmissible(k + 1));
        }
        Ok(Addr { pre, period })
    }

    /// Letter at 0-based position `k`.
    pub fn letter(&self, k: usize) -> Letter {
        if k < self.pre.len() {
            self.pre[k]
        } else {
            self.period[(k - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|k| self.letter(k)).collect()
    }

    /// Address of the image under `f^k`.
    pub fn shift(&self, k: usize) -> Addr {
        if k <= self.pre.len() {
            return Addr { pre: self.pre[k..].to_vec(), period: self.period.clone() };
        }
        let r = (k - self.pre.len()) % self.period.len();
        let mut period = self.period[r..].to_vec();
        period.extend_from_slice(&self.period[..r]);
        Addr { pre: Vec::new(), period }
    }

    /// Location relative to the curve of the image under `f^n`.
    pub fn location_at(&self, sym: &Symbolic, n: usize) -> Location {
        let tail = self.shift(n);
        let mut loc = sym.periodic_location(&tail.period);
        for &t in tail.pre.iter().rev() {
            loc = sym.pull_location(t, loc);
        }
        loc
    }

    /// Level-`n` tiles containing the point (`n >= 1`).
    pub fn tiles_at(&self, sym: &Symbolic, n: usize) -> Vec<Word> {
        sym.tiles_at_location(&self.prefix(n), self.location_at(sym, n))
    }

    /// 0-tiles containing the point.
    pub fn root_colors(&self, sym: &Symbolic) -> Vec<Color> {
        match self.location_at(sym, 0) {
            Location::Interior => vec![sym.pattern.host(self.letter(0) as usize)],
            _ => Color::BOTH.to_vec(),
        }
    }

    /// The point as a vertex at the coarsest level `>= 1` where it is one.
    pub fn as_vertex(&self, sym: &Symbolic) -> Option<SymVertex> {
        // The location sequence is eventually periodic with this period.
        let horizon = self.pre.len() + self.period.len();
        (0..=horizon).find_map(|k| match self.location_at(sym, k) {
            Location::Post(j) if k == 0 => {
                let t = self.letter(0);
                Some(SymVertex { word: vec![t], corner: sym.pattern.post_map[j] })
            }
            Location::Post(j) => Some(SymVertex { word: self.prefix(k), corner: j }),
            _ => None,
        })
    }

    /// An address of a vertex, continuing through least post-containing tiles.
    pub fn of_vertex(sym: &Symbolic, v: &SymVertex) -> Addr {
        let mut word = v.word.clone();
        let mut seen: Vec<(usize, Color)> = Vec::new();
        let mut j = v.corner;
        let mut c = sym.color(&v.word);
        loop {
            if let Some(start) = seen.iter().position(|&s| s == (j, c)) {
                let cut = v.word.len() + start;
                let period = word.split_off(cut);
                return Addr { pre: word, period };
            }
            seen.push((j, c));
            let t = sym.post_child(c, j);
            word.push(t);
            j = sym.pattern.post_map[j];
            c = sym.pattern.image(t as usize);
        }
    }
}

impl PointRef {
    pub fn vertex(cx: &Complex, level: usize, id: u32) -> Result<PointRef, PointError> {
        if level > cx.top() {
            return Err(PointError::NotBuilt(level));
        }
        if id as usize >= cx.levels[level].num_vertices() {
            return Err(PointError::NoSuchVertex { level, id });
        }
        Ok(PointRef::Vertex { level, id })
    }

    /// Eventually periodic address form of the point.
    pub fn to_addr(&self, cx: &Complex, sym: &Symbolic) -> Addr {
        match self {
            PointRef::Address(a) => a.clone(),
            PointRef::Vertex { level, id } => Addr::of_vertex(sym, &vertex_to_sym(cx, *level, *id)),
        }
    }
}

/// Names vertex `id` of level `n` by its least incident tile and corner label.
pub fn vertex_to_sym(cx: &Complex, n: usize, id: u32) -> SymVertex {
    let n = n.max(1);
    let lv = &cx.levels[n];
    let t = *lv.tiles_at(id).iter().min().expect("vertex has tiles");
    let corner = lv.corners(t).iter().position(|&v| v == id).expect("incident");
    SymVertex { word: cx.address_of_tile(n, t), corner }
}

/// Vertex of a built level named by a symbolic vertex, if that level is built.
pub fn sym_to_vertex(cx: &Complex, v: &SymVertex) -> Option<u32> {
    let t = cx.tile_of_address(&v.word)?;
    let id = cx.levels[v.level()].corner(t, v.corner);
    (id != NONE).then_some(id)
}

/// Tile of level `l` containing the point, canonical on the skeleton.
pub fn point_resolve(cx: &Complex, sym: &Symbolic, x: &PointRef, l: usize) -> Result<u32, PointError> {
    if l > cx.top() {
        return Err(PointError::NotBuilt(l));
    }
    match x {
        PointRef::Vertex { id, .. } => Ok(*cx.tiles_containing_vertex(*id, l).iter().min().expect("nonempty")),
        PointRef::Address(a) if l == 0 => Ok(sym.pattern.host(a.letter(0) as usize).index() as u32),
        PointRef::Address(a) => cx.tile_of_address(&a.prefix(l)).ok_or(PointError::NotBuilt(l)),
    }
}

/// Closed level-`n` tiles containing the point, sorted.
pub fn containing_tiles(cx: &Complex, sym: &Symbolic, x: &PointRef, n: usize) -> Result<Vec<u32>, PointError> {
    if n > cx.top() {
        return Err(PointError::NotBuilt(n));
    }
    let mut out = match x {
        PointRef::Vertex { id, .. } => cx.tiles_containing_vertex(*id, n),
        PointRef::Address(a) if n == 0 => a.root_colors(sym).iter().map(|c| c.index() as u32).collect(),
        PointRef::Address(a) => a
            .tiles_at(sym, n)
            .iter()
            .map(|w| cx.tile_of_address(w).ok_or(PointError::NotBuilt(n)))
            .collect::<Result<Vec<u32>, _>>()?,
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// All level-`n` tiles meeting a level-`n` tile that contains the point.
pub fn u_neighborhood(cx: &Complex, sym: &Symbolic, x: &PointRef, n: usize) -> Result<Vec<u32>, PointError> {
    let lv = &cx.levels[n.min(cx.top())];
    let mut out: Vec<u32> = containing_tiles(cx, sym, x, n)?
        .into_iter()
        .flat_map(|t| lv.tile_neighbors(t))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
