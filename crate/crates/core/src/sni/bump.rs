//! Bump functions `Υ_{v,n}` built from nested combinatorial balls.
//!
//! The level sets are balls of tiles: `U_(i₁)` collects the `(n+2N)`-tiles at
//! inclusive chain distance at most `i₁` from the tiles at `v`, and each
//! further index grows the previous ball by that many `(n+(k+1)N)`-tiles.
//! On the annulus between consecutive balls the bump takes the value
//! `A(1 − Σ iⱼ/(D−1)ʲ)` with `A = C₂₆Λ^{-αn}ε` and `D = D_N`. A point is
//! resolved once it is a vertex of the level being scanned; deeper points get
//! the interval spanned by their annulus.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::complex::{Addr, Letter, Location, SymVertex, Symbolic, Word};
use crate::interval::Interval;
use crate::potential::lambda_pow;

use super::SniError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpParams {
    pub lambda: f64,
    pub alpha: f64,
    pub c26: f64,
    pub eps: f64,
    /// The scale step `N`.
    pub n_big: usize,
    /// `D_N`.
    pub dn: u32,
}

impl BumpParams {
    /// `C₂₆Λ^{-αn}ε`.
    pub fn amplitude(&self, n: usize) -> Interval {
        lambda_pow(self.lambda, self.alpha, n).scale(self.c26).scale(self.eps)
    }

    /// `ρ = Λ^{αN}/(D_N − 1)`.
    pub fn rho(&self) -> f64 {
        self.lambda.powf(self.alpha * self.n_big as f64) / f64::from(self.dn - 1)
    }

    /// `2C₂₆εΛ^{α(2N−1)}`, independent of `n`, valid when `ρ <= 1`.
    ///
    /// Points separated at level `k` with `n + mN <= k < n + (m+1)N` lie in
    /// two meeting `(n+mN)`-tiles, so the oscillation bound gives
    /// `2A(D−1)^{-(m−1)}Λ^{αk} <= 2C₂₆εΛ^{α(2N−1)}ρ^{m−1}`.
    pub fn seminorm_bound(&self) -> Option<f64> {
        (self.rho() <= 1.0)
            .then(|| 2.0 * self.c26 * self.eps * self.lambda.powf(self.alpha * (2 * self.n_big - 1) as f64) * (1.0 + 1e-12))
    }
}

/// `num/den` for integers, exact at 0 and 1.
fn frac(num: u64, den: u64) -> Interval {
    if num == 0 {
        Interval::ZERO
    } else if num == den {
        Interval::point(1.0)
    } else {
        Interval::rounded(num as f64 / den as f64)
    }
}

/// Location relative to the level-`level` curve of corner `l` of the tile `w`.
pub(crate) fn corner_location(sym: &Symbolic, w: &[Letter], l: usize, level: usize) -> Location {
    w[level..].iter().rev().fold(Location::Post(l), |loc, &t| sym.pull_location(t, loc))
}

/// Whether the closed flower of `v` avoids the curve (lies in an open 0-tile).
pub(crate) fn flower_in_open_tile(sym: &Symbolic, v: &SymVertex) -> bool {
    sym.flower(&v.word, v.corner)
        .iter()
        .all(|t| (0..sym.m()).all(|l| corner_location(sym, t, l, 0) == Location::Interior))
}

/// All extensions of each word by `k` admissible letters.
pub(crate) fn descendants(sym: &Symbolic, words: impl IntoIterator<Item = Word>, k: usize) -> Vec<Word> {
    let mut out: Vec<Word> = words.into_iter().collect();
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|w| {
                sym.pattern.children[sym.color(w).index()].iter().map(move |&t| {
                    let mut v = w.clone();
                    v.push(t as Letter);
                    v
                })
            })
            .collect();
    }
    out
}

/// A realized ball `U_(i₁,…,i_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialBall {
    pub index: Vec<u32>,
    /// `n + (k+1)N`.
    pub level: usize,
    /// Tiles of `level`; `None` is the single point `{v}`.
    pub tiles: Option<BTreeSet<Word>>,
}

/// A bump centred at a vertex named at level `n + N`, evaluated directly.
#[derive(Debug)]
pub struct BumpCore {
    pub centre: SymVertex,
    pub n: usize,
    pub params: BumpParams,
    key: SymVertex,
    amp: Interval,
    /// Chain distances at level `n + 2N`, up to `D − 1`.
    dist: HashMap<Word, u32>,
    /// Level-`(n+3N)` tiles at the centre.
    inner: HashSet<Word>,
}

impl BumpCore {
    pub fn new(sym: &Symbolic, centre: &SymVertex, n: usize, params: BumpParams) -> Result<BumpCore, SniError> {
        let big = params.n_big;
        if params.dn < 2 || big == 0 {
            return Err(SniError::BadBumpParams);
        }
        if centre.level() > n + big {
            return Err(SniError::CentreLevel { level: centre.level(), max: n + big });
        }
        let centre = sym.vertex_at(centre, n + big);
        let key = sym.canonical(&sym.coarsen(&centre));
        let v1 = sym.vertex_at(&centre, n + 2 * big);
        let dist = sym
            .bfs(&sym.flower(&v1.word, v1.corner), (params.dn - 1) as usize, |_| true)
            .into_iter()
            .map(|(w, d)| (w, d as u32))
            .collect();
        let v2 = sym.vertex_at(&centre, n + 3 * big);
        let inner = sym.flower(&v2.word, v2.corner).into_iter().collect();
        Ok(BumpCore { centre, n, params, key, amp: params.amplitude(n), dist, inner })
    }

    pub fn amplitude(&self) -> Interval {
        self.amp
    }

    /// Chain distance of a level-`(n+2N)` tile from the centre, if at most `D − 1`.
    pub fn distance(&self, t: &[Letter]) -> Option<u32> {
        self.dist.get(t).copied()
    }

    pub fn eval(&self, sym: &Symbolic, x: &Addr) -> Interval {
        self.eval_steps(sym, x, 2)
    }

    /// Value after at most `steps` index extractions (1 or 2).
    pub fn eval_steps(&self, sym: &Symbolic, x: &Addr, steps: usize) -> Interval {
        let (n, big) = (self.n, self.params.n_big);
        let d1 = u64::from(self.params.dn - 1);
        let vertex = x.as_vertex(sym);
        if vertex.as_ref().is_some_and(|v| sym.canonical(&sym.coarsen(v)) == self.key) {
            return self.amp;
        }
        let lv = vertex.map_or(usize::MAX, |v| v.level());
        let Some(dmin1) = x.tiles_at(sym, n + 2 * big).iter().filter_map(|t| self.dist.get(t)).min() else {
            return Interval::ZERO;
        };
        let i1 = u64::from(*dmin1) - 1;
        let outer = frac(d1 - i1 - 1, d1);
        if lv <= n + 2 * big {
            return self.amp * outer;
        }
        if steps < 2 {
            return self.amp * outer.hull(frac(d1 - i1, d1));
        }
        let dmin2 = u64::from(self.step2_distance(sym, x, i1));
        if dmin2 > d1 {
            return self.amp * outer;
        }
        let i2 = dmin2 - 1;
        let base = d1 * d1 - i1 * d1;
        let lo = frac(base - 1 - i2, d1 * d1);
        if lv <= n + 3 * big {
            self.amp * lo
        } else {
            self.amp * lo.hull(frac(base - i2, d1 * d1))
        }
    }

    /// Whether a level-`(n+3N)` tile meets `U_(i₁)`.
    fn meets_first_ball(&self, sym: &Symbolic, s: &[Letter], i1: u64) -> bool {
        if i1 == 0 {
            return self.inner.contains(s);
        }
        let l1 = self.n + 2 * self.params.n_big;
        (0..sym.m()).any(|j| {
            let loc = corner_location(sym, s, j, l1);
            sym.tiles_at_location(&s[..l1], loc)
                .iter()
                .any(|t| self.dist.get(t).is_some_and(|&d| u64::from(d) <= i1))
        })
    }

    /// Least inclusive chain length at level `n + 3N` from a tile at `x` to a
    /// tile meeting `U_(i₁)`; `D` when it exceeds `D − 1`.
    fn step2_distance(&self, sym: &Symbolic, x: &Addr, i1: u64) -> u32 {
        let d1 = self.params.dn - 1;
        let mut frontier = x.tiles_at(sym, self.n + 3 * self.params.n_big);
        frontier.sort_unstable();
        frontier.dedup();
        let mut seen: HashSet<Word> = frontier.iter().cloned().collect();
        for layer in 1..=d1 {
            if frontier.iter().any(|s| self.meets_first_ball(sym, s, i1)) {
                return layer;
            }
            let mut next = Vec::new();
            for w in &frontier {
                for nb in sym.tile_neighbors(w) {
                    if seen.insert(nb.clone()) {
                        next.push(nb);
                    }
                }
            }
            frontier = next;
        }
        self.params.dn
    }

    /// Closed level-`(n+N)` flower of the centre: the support's closure.
    pub fn support(&self, sym: &Symbolic) -> Vec<Word> {
        let mut out = sym.flower(&self.centre.word, self.centre.corner);
        out.sort_unstable();
        out
    }

    pub fn build_ball(&self, sym: &Symbolic, index: &[u32]) -> Result<CombinatorialBall, SniError> {
        let (big, d1) = (self.params.n_big, self.params.dn - 1);
        if let Some(&bad) = index.iter().find(|&&i| i > d1) {
            return Err(SniError::BallIndex { index: bad, max: d1 });
        }
        let Some((&first, rest)) = index.split_first() else {
            return Err(SniError::BallIndex { index: 0, max: d1 });
        };
        let ball = |sources: &[Word], r: u32| -> BTreeSet<Word> {
            sym.bfs(sources, r as usize, |_| true).into_keys().collect()
        };
        let mut level = self.n + 2 * big;
        let mut tiles: Option<BTreeSet<Word>> =
            (first > 0).then(|| self.dist.iter().filter(|(_, &d)| d <= first).map(|(w, _)| w.clone()).collect());
        for &i in rest {
            level += big;
            tiles = match tiles {
                None if i == 0 => None,
                None => {
                    let v = sym.vertex_at(&self.centre, level);
                    Some(ball(&sym.flower(&v.word, v.corner), i))
                }
                Some(set) => {
                    let desc = descendants(sym, set, big);
                    if i == 0 {
                        Some(desc.into_iter().collect())
                    } else {
                        let sources: BTreeSet<Word> = desc.iter().flat_map(|w| sym.tile_neighbors(w)).collect();
                        Some(ball(&sources.into_iter().collect::<Vec<_>>(), i))
                    }
                }
            };
        }
        Ok(CombinatorialBall { index: index.to_vec(), level, tiles })
    }
}

/// `Υ_{v,n}`. When the closed flower of `v` lies inside the open `n`-tile
/// named by its first `n` letters, the bump is `Λ^{-αn}` times the level-0
/// bump at `fⁿ(v)` composed with `fⁿ`, which keeps all searches short.
#[derive(Clone, Debug)]
pub struct BumpFunction {
    /// The centre named at level `n + N`.
    pub centre: SymVertex,
    pub n: usize,
    pub params: BumpParams,
    prefix: Word,
    scale: Interval,
    core: Arc<BumpCore>,
}

impl BumpFunction {
    pub fn new(sym: &Symbolic, centre: &SymVertex, n: usize, params: BumpParams) -> Result<BumpFunction, SniError> {
        let big = params.n_big;
        if centre.level() > n + big {
            return Err(SniError::CentreLevel { level: centre.level(), max: n + big });
        }
        let centre = sym.vertex_at(centre, n + big);
        if n > 0 {
            let image = SymVertex { word: centre.word[n..].to_vec(), corner: centre.corner };
            let prefix = centre.word[..n].to_vec();
            let inside = flower_in_open_tile(sym, &image)
                && sym.flower(&centre.word, centre.corner).iter().all(|t| t[..n] == prefix[..]);
            if inside {
                let core = Arc::new(BumpCore::new(sym, &image, 0, params)?);
                return Ok(BumpFunction::scaled(prefix, core));
            }
        }
        let core = Arc::new(BumpCore::new(sym, &centre, n, params)?);
        Ok(BumpFunction { centre, n, params, prefix: Vec::new(), scale: Interval::point(1.0), core })
    }

    /// `Λ^{-αn}·core∘fⁿ` on the `n`-tile `prefix`, for a level-0 core whose
    /// closed flower avoids the curve.
    pub fn scaled(prefix: Word, core: Arc<BumpCore>) -> BumpFunction {
        debug_assert_eq!(core.n, 0);
        let n = prefix.len();
        let params = core.params;
        let mut word = prefix.clone();
        word.extend_from_slice(&core.centre.word);
        BumpFunction {
            centre: SymVertex { word, corner: core.centre.corner },
            n,
            params,
            scale: lambda_pow(params.lambda, params.alpha, n),
            prefix,
            core,
        }
    }

    /// Declared `sup Υ`.
    pub fn amplitude(&self) -> f64 {
        (self.core.amp * self.scale).hi
    }

    pub fn seminorm_bound(&self) -> Option<f64> {
        self.params.seminorm_bound()
    }

    pub fn eval(&self, sym: &Symbolic, x: &Addr) -> Interval {
        self.eval_steps(sym, x, 2)
    }

    pub fn eval_steps(&self, sym: &Symbolic, x: &Addr, steps: usize) -> Interval {
        if self.prefix.is_empty() {
            return self.core.eval_steps(sym, x, steps);
        }
        if x.prefix(self.n) != self.prefix {
            return Interval::ZERO;
        }
        self.core.eval_steps(sym, &x.shift(self.n), steps) * self.scale
    }

    /// Closed level-`(n+N)` flower of the centre, sorted.
    pub fn support(&self, sym: &Symbolic) -> Vec<Word> {
        let mut out = sym.flower(&self.centre.word, self.centre.corner);
        out.sort_unstable();
        out
    }

    pub fn build_ball(&self, sym: &Symbolic, index: &[u32]) -> Result<CombinatorialBall, SniError> {
        let mut ball = self.core.build_ball(sym, index)?;
        if !self.prefix.is_empty() {
            ball.level += self.n;
            ball.tiles = ball.tiles.map(|ts| {
                ts.into_iter()
                    .map(|t| {
                        let mut w = self.prefix.clone();
                        w.extend_from_slice(&t);
                        w
                    })
                    .collect()
            });
        }
        Ok(ball)
    }
}
