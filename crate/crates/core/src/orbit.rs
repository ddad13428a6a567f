//! Primitive periodic orbits, weighted lengths, pressure, the exponent `s₀`
//! and the prime orbit counting table.
//!
//! A primitive orbit is a cyclically admissible word that is not a proper
//! power, up to rotation; its point is the fixed point of the composed
//! inverse branch, the address `word^∞`.

use std::fmt::Write as _;

use crate::complex::{Addr, Location, SymVertex, Symbolic, Word};
use crate::interval::Interval;
use crate::metric::{address_separation, Separation};
use crate::potential::{birkhoff_sum, distortion_constant_c1, Potential};
use crate::rulespec::Color;
use crate::sni::fmt_word;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OrbitError {
    #[error("{count} words at period {period} exceed the enumeration limit {limit}")]
    TooMany { period: usize, count: u64, limit: u64 },
    #[error("the potential has no finite Hölder seminorm bound")]
    NoHolderBound,
    #[error("no s with negative pressure found up to s = {s_max} at level {level}")]
    NoBracket { s_max: f64, level: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbit {
    pub period: usize,
    /// Least rotation of the cyclic word.
    pub word: Word,
    /// Whether the point lies on the curve, where distinct words may name it.
    pub on_skeleton: bool,
    /// Words of other classes found to name the same orbit.
    pub merged: Vec<Word>,
}

impl PeriodicOrbit {
    pub fn point(&self) -> Addr {
        Addr { pre: Vec::new(), period: self.word.clone() }
    }
}

/// `M[s][t] = 1` when the 1-tile `t` may follow `s` in an address.
pub fn transition_matrix(sym: &Symbolic) -> Vec<Vec<u64>> {
    let p = &sym.pattern;
    let n = p.spec.tiles.len();
    (0..n).map(|s| (0..n).map(|t| u64::from(p.host(t) == p.image(s))).collect()).collect()
}

/// `trace(Mᵖ)`: the number of cyclically admissible words of length `p`.
pub fn word_count(sym: &Symbolic, p: usize) -> u64 {
    let m = transition_matrix(sym);
    let n = m.len();
    let mut acc: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    for _ in 0..p {
        acc = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| acc[i][k].saturating_mul(m[k][j])).fold(0u64, u64::saturating_add)).collect())
            .collect();
    }
    (0..n).map(|i| acc[i][i]).fold(0, u64::saturating_add)
}

fn is_primitive(w: &[u16]) -> bool {
    let p = w.len();
    (1..p).filter(|q| p.is_multiple_of(*q)).all(|q| w.iter().zip(w.iter().cycle().skip(q)).any(|(a, b)| a != b))
}

fn is_least_rotation(w: &[u16]) -> bool {
    let p = w.len();
    (1..p).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().le(rot)
    })
}

/// Cyclically admissible words of length `p`, in lexicographic order.
pub fn cyclic_words(sym: &Symbolic, p: usize) -> Vec<Word> {
    let pat = &sym.pattern;
    sym.words(p)
        .into_iter()
        .filter(|w| pat.host(w[0] as usize) == pat.image(w[p - 1] as usize))
        .collect()
}

/// Merges skeleton orbits whose points agree to separation level `depth_per_letter · p`.
fn dedup(sym: &Symbolic, orbits: Vec<PeriodicOrbit>, depth_per_letter: usize) -> Vec<PeriodicOrbit> {
    let mut out: Vec<PeriodicOrbit> = Vec::new();
    for o in orbits {
        if o.on_skeleton {
            let x = o.point();
            let depth = depth_per_letter * o.period;
            let twin = out.iter_mut().filter(|k| k.on_skeleton).find(|k| {
                let y = k.point();
                (0..k.period).any(|r| {
                    matches!(address_separation(sym, &x, &y.shift(r), depth), Separation::Equal | Separation::AtLeast(_))
                })
            });
            if let Some(k) = twin {
                k.merged.push(o.word);
                continue;
            }
        }
        out.push(o);
    }
    out
}

/// Primitive orbits of period at most `p_max`, by period then word.
///
/// With `dedup_depth = Some(k)`, an orbit on the curve whose point agrees with
/// a rotation of an earlier one to separation level `k·p` is merged into it.
pub fn enumerate_orbits(
    sym: &Symbolic,
    p_max: usize,
    dedup_depth: Option<usize>,
    limit: u64,
) -> Result<Vec<PeriodicOrbit>, OrbitError> {
    let mut out = Vec::new();
    for p in 1..=p_max {
        let count = word_count(sym, p);
        if count > limit {
            return Err(OrbitError::TooMany { period: p, count, limit });
        }
        for word in cyclic_words(sym, p) {
            if !is_primitive(&word) || !is_least_rotation(&word) {
                continue;
            }
            let point = Addr { pre: Vec::new(), period: word.clone() };
            let on_skeleton = point.location_at(sym, 0) != Location::Interior;
            out.push(PeriodicOrbit { period: p, word, on_skeleton, merged: Vec::new() });
        }
    }
    Ok(match dedup_depth {
        Some(k) => dedup(sym, out, k),
        None => out,
    })
}

/// `l(τ) = S_pφ(x)` at the orbit's point.
pub fn weighted_length(phi: &Potential, sym: &Symbolic, orbit: &PeriodicOrbit) -> Interval {
    birkhoff_sum(phi, sym, &orbit.point(), orbit.period)
}

/// Constants for the distortion slack of tile sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PressureModel {
    pub lambda: f64,
    pub alpha: f64,
    pub c0: f64,
}

/// `(1/n) log Σ_X exp(−s·S_nφ|_X)` over white `n`-tiles, as an interval.
///
/// `S_nφ` on a tile is its value at the tile's corner 0 widened by `C₁`, which
/// bounds `|S_nφ(x) − S_nφ(y)|` on a common `n`-tile since `d <= 1`, and
/// clipped to `n·[inf φ, sup φ]`.
pub fn pressure(
    phi: &Potential,
    sym: &Symbolic,
    model: &PressureModel,
    s: f64,
    n: usize,
) -> Result<Interval, OrbitError> {
    assert!(n >= 1, "pressure needs level n >= 1");
    let h = phi.seminorm_bound().ok_or(OrbitError::NoHolderBound)?;
    let c1 = distortion_constant_c1(h, model.c0, model.lambda, model.alpha);
    let slack = if c1 == 0.0 { Interval::ZERO } else { Interval::new(-c1, c1) };
    let floor = Interval::point(phi.inf_bound()).scale(n as f64).lo;
    let ceil = Interval::point(phi.sup_bound()).scale(n as f64).hi;
    let exps: Vec<Interval> = white_tiles(sym, n)
        .into_iter()
        .map(|w| {
            let x = Addr::of_vertex(sym, &SymVertex { word: w, corner: 0 });
            let b = birkhoff_sum(phi, sym, &x, n) + slack;
            Interval::new(b.lo.max(floor), b.hi.min(ceil)).scale(-s)
        })
        .collect();
    Ok(log_sum_exp(&exps).div_pos(Interval::point(n as f64)))
}

fn white_tiles(sym: &Symbolic, n: usize) -> Vec<Word> {
    sym.words(n).into_iter().filter(|w| sym.color(w) == Color::White).collect()
}

/// `log Σ exp(aᵢ)`, shifted by the largest upper end to avoid overflow.
fn log_sum_exp(a: &[Interval]) -> Interval {
    let m = a.iter().map(|x| x.hi).fold(f64::NEG_INFINITY, f64::max);
    let shift = Interval::point(m);
    let total: Interval = a.iter().map(|&x| (x - shift).exp()).sum();
    total.ln() + shift
}

/// Bracket of the root of `s ↦ P_n(−sφ)` by bisection, to width `tol`.
///
/// The upper end is found by doubling from 1. The bracket is the hull of the
/// `s` whose pressure enclosure contains 0, so it can stay wider than `tol`
/// when tile sums are only known up to the distortion slack.
pub fn solve_s0(
    phi: &Potential,
    sym: &Symbolic,
    model: &PressureModel,
    n: usize,
    tol: f64,
) -> Result<Interval, OrbitError> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        let p = pressure(phi, sym, model, hi, n)?;
        if p.hi < 0.0 {
            break;
        }
        if p.lo > 0.0 {
            lo = hi;
        }
        hi *= 2.0;
        if hi > 1e6 {
            return Err(OrbitError::NoBracket { s_max: hi, level: n });
        }
    }
    // Once a midpoint straddles zero, each end is refined on its own side.
    let (mut lo_top, mut hi_bottom) = (hi, lo);
    while hi - lo > tol && (lo_top - lo > tol || hi - hi_bottom > tol) {
        let mid = if lo_top - lo > tol { 0.5 * (lo + lo_top) } else { 0.5 * (hi_bottom + hi) };
        let p = pressure(phi, sym, model, mid, n)?;
        if p.lo > 0.0 {
            lo = mid;
        } else if p.hi < 0.0 {
            hi = mid;
        } else {
            lo_top = lo_top.min(mid);
            hi_bottom = hi_bottom.max(mid);
        }
        lo_top = lo_top.min(hi);
        hi_bottom = hi_bottom.max(lo);
    }
    Ok(Interval::new(lo, hi))
}

/// `Li(y) = ∫₂^y du / log u` by adaptive Gauss–Kronrod (7, 15) quadrature in
/// `t = log u`, to absolute error about `tol`.
pub fn li(y: f64, tol: f64) -> f64 {
    let (a, b) = (2f64.ln(), y.ln());
    if a == b {
        return 0.0;
    }
    let (sign, a, b) = if b < a { (-1.0, b, a) } else { (1.0, a, b) };
    sign * gk_adaptive(&|t: f64| t.exp() / t, a, b, tol, 60)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G_WEIGHTS: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Kronrod and Gauss estimates on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let (mut k, mut g) = (GK_WEIGHTS[7] * fc, G_WEIGHTS[3] * fc);
    for i in 0..7 {
        let pair = f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i]);
        k += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * pair;
        }
    }
    (k * h, g * h)
}

fn gk_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let (k, g) = gk15(f, a, b);
    if depth == 0 || (k - g).abs() <= tol.max(4.0 * f64::EPSILON * k.abs()) {
        return k;
    }
    let c = 0.5 * (a + b);
    gk_adaptive(f, a, c, 0.5 * tol, depth - 1) + gk_adaptive(f, c, b, 0.5 * tol, depth - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub t: f64,
    /// Orbits whose length is certainly at most `t`.
    pub pi: u64,
    /// `Li(e^{s₀t})` at the midpoint of the `s₀` bracket.
    pub li: f64,
    pub ratio: f64,
    /// Orbits whose length enclosure contains `t`.
    pub straddling: u64,
}

/// `π(T)` against `Li(e^{s₀T})` on the grid `T = step, 2·step, …` while the
/// census is complete: every orbit of period above `p_max` has length at
/// least `(p_max + 1)·inf φ`, so the grid stops below that.
pub fn prime_orbit_table(
    lengths: &[Interval],
    p_max: usize,
    inf_phi: f64,
    s0: Interval,
    step: f64,
    li_tol: f64,
) -> Vec<TableRow> {
    let limit = (p_max + 1) as f64 * inf_phi;
    let s = s0.mid();
    let mut rows = Vec::new();
    let mut k = 1;
    loop {
        let t = k as f64 * step;
        if t >= limit {
            break;
        }
        let pi = lengths.iter().filter(|l| l.hi <= t).count() as u64;
        let straddling = lengths.iter().filter(|l| l.lo <= t && t < l.hi).count() as u64;
        let li = li((s * t).exp(), li_tol);
        rows.push(TableRow { t, pi, li, ratio: pi as f64 / li, straddling });
        k += 1;
    }
    rows
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("T,pi,Li,ratio,straddling\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{:.12e},{:.12e},{}", r.t, r.pi, r.li, r.ratio, r.straddling);
    }
    s
}

pub fn orbit_csv(orbits: &[PeriodicOrbit], lengths: &[Interval]) -> String {
    let mut s = String::from("period,word,length,err,on_skeleton\n");
    for (o, l) in orbits.iter().zip(lengths) {
        let _ = writeln!(s, "{},{},{:.15e},{:e},{}", o.period, fmt_word(&o.word), l.mid(), 0.5 * l.width(), o.on_skeleton);
    }
    s
}
