//! Temporal distances, the non-integrability evidence checker, the openness
//! radius and sampled Hölder norms.
//!
//! The temporal distance of `φ` along `ξ, ξ′` at `x, y` is taken to be the
//! limit of `Σ_{j<=n} [φ(τⱼx) − φ(τ′ⱼx) − φ(τⱼy) + φ(τ′ⱼy)]`, the four-term
//! sum of Birkhoff sums along the two inverse branches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::complex::{Addr, Letter, Location, Symbolic, Word};
use crate::interval::Interval;
use crate::metric::{address_separation, Separation};
use crate::potential::{distance_pow, distortion_constant_c1, lambda_pow, Potential};
use crate::rulespec::Color;

use super::backward::BackwardSequence;
use super::bump::corner_location;
use super::plan::{fmt_word, PerturbationPlan};
use super::SniError;

/// Constants for the truncation tail `4C₁(C·Λ^{-n})^α` of a temporal distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailModel {
    pub c0: f64,
    pub c_fit: f64,
    pub lambda: f64,
    pub alpha: f64,
}

/// Depth beyond which every four-term summand of `φ` vanishes exactly, if known.
///
/// Constants cancel termwise. A plan's sum vanishes on `τ′ⱼ` points when `ξ′`
/// never visits `ξ₀`, and on `τⱼ` points for `j > J_cap`.
pub fn branch_depth(phi: &Potential, xi: &BackwardSequence, xi_prime: &BackwardSequence) -> Option<usize> {
    phi.terms()
        .into_iter()
        .map(|(w, leaf)| match leaf {
            _ if w == 0.0 => Some(0),
            Potential::Const(_) => Some(0),
            Potential::DistPow { weight, .. } | Potential::Bump { weight, .. } if *weight == 0.0 => Some(0),
            Potential::Perturbation(p) if p.plan.xi == *xi && xi_prime.avoids(xi.get(0)) => Some(p.plan.j_cap),
            _ => None,
        })
        .try_fold(0, |a, b| b.map(|b| a.max(b)))
}

/// Whether the plan's closed form `Σⱼ Λ^{-αj}(Ψ(x) − Ψ(y))` applies.
fn closed_form(plan: &PerturbationPlan, xi: &BackwardSequence, xi_prime: &BackwardSequence, x: &Addr, y: &Addr) -> bool {
    let t = xi.get(0);
    plan.xi == *xi
        && xi.pre.is_empty()
        && xi.period.len() == 1
        && xi_prime.avoids(t)
        && x.letter(0) != t
        && y.letter(0) != t
}

fn leaf_sums(
    leaf: &Potential,
    sym: &Symbolic,
    xi: &BackwardSequence,
    xi_prime: &BackwardSequence,
    x: &Addr,
    y: &Addr,
    depth: usize,
) -> Vec<Interval> {
    let mut out = vec![Interval::ZERO; depth + 1];
    match leaf {
        Potential::Const(_) => return out,
        Potential::DistPow { weight, .. } | Potential::Bump { weight, .. } if *weight == 0.0 => return out,
        Potential::Perturbation(p) if closed_form(&p.plan, xi, xi_prime, x, y) => {
            let d = p.psi(sym, x) - p.psi(sym, y);
            for k in 1..=depth {
                let term = if k <= p.plan.j_cap { d * lambda_pow(p.plan.lambda, p.plan.alpha, k) } else { Interval::ZERO };
                out[k] = out[k - 1] + term;
            }
        }
        _ => {
            for k in 1..=depth {
                let term = leaf.eval(sym, &xi.tau(k, x)) - leaf.eval(sym, &xi_prime.tau(k, x))
                    - leaf.eval(sym, &xi.tau(k, y))
                    + leaf.eval(sym, &xi_prime.tau(k, y));
                out[k] = out[k - 1] + term;
            }
        }
    }
    out
}

fn leaves_sums(
    leaves: &[(f64, &Potential)],
    sym: &Symbolic,
    xi: &BackwardSequence,
    xi_prime: &BackwardSequence,
    x: &Addr,
    y: &Addr,
    depth: usize,
) -> Vec<Interval> {
    let mut acc = vec![Interval::ZERO; depth + 1];
    for &(w, leaf) in leaves {
        if w == 0.0 {
            continue;
        }
        let s = leaf_sums(leaf, sym, xi, xi_prime, x, y, depth);
        for (a, v) in acc.iter_mut().zip(s) {
            *a = *a + if w == 1.0 { v } else { v.scale(w) };
        }
    }
    acc
}

/// Partial four-term sums for `n = 0..=depth`:
/// `S_nφ(τₙx) − S_nφ(τ′ₙx) − S_nφ(τₙy) + S_nφ(τ′ₙy)`.
pub fn four_term_sums(
    phi: &Potential,
    sym: &Symbolic,
    xi: &BackwardSequence,
    xi_prime: &BackwardSequence,
    x: &Addr,
    y: &Addr,
    depth: usize,
) -> Vec<Interval> {
    leaves_sums(&phi.terms(), sym, xi, xi_prime, x, y, depth)
}

/// The temporal distance truncated at `depth`, with a certified tail.
///
/// The tail is zero when [`branch_depth`] is at most `depth`; otherwise it is
/// `±4C₁(C·Λ^{-depth})^α` with `C₁` from the declared seminorm, and the whole
/// line when no seminorm bound is known.
pub fn temporal_distance(
    phi: &Potential,
    sym: &Symbolic,
    xi: &BackwardSequence,
    xi_prime: &BackwardSequence,
    x: &Addr,
    y: &Addr,
    depth: usize,
    tail: &TailModel,
) -> Interval {
    if x == y {
        return Interval::ZERO;
    }
    let s = four_term_sums(phi, sym, xi, xi_prime, x, y, depth)[depth];
    if branch_depth(phi, xi, xi_prime).is_some_and(|j| j <= depth) {
        return s;
    }
    match phi.seminorm_bound() {
        Some(h) => {
            let c1 = distortion_constant_c1(h, tail.c0, tail.lambda, tail.alpha);
            let t = 4.0 * c1 * (tail.c_fit * tail.lambda.powf(-(depth as f64))).powf(tail.alpha) * (1.0 + 1e-12);
            s + Interval::new(-t, t)
        }
        None => Interval::ENTIRE,
    }
}

/// Largest level `k` at which a `k`-tile containing `q` touches the curve.
///
/// For `q = f^M(x)` with `x` in an `M`-tile `X`, `d(x, S²∖X) = Λ^{-(M+k)}`.
pub fn boundary_level(sym: &Symbolic, q: &Addr, cap: usize) -> usize {
    let touches = |k: usize| {
        q.tiles_at(sym, k)
            .iter()
            .any(|t| (0..sym.m()).any(|l| corner_location(sym, t, l, 0) != Location::Interior))
    };
    (1..=cap).take_while(|&k| touches(k)).last().unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub eps: f64,
    /// Largest `M` checked; the smallest is the plan's `M₀`.
    pub m_max: usize,
    /// Values of `N′` (the Birkhoff-sum length) checked.
    pub n_list: Vec<usize>,
    /// Bound on tiles enumerated one by one.
    pub tile_limit: u64,
}

/// One checked instance. `tile` is the least `M`-tile of its class and
/// `tiles` the number of `M`-tiles sharing the quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceRow {
    pub color: Color,
    pub m: usize,
    pub tile: Word,
    pub tiles: u64,
    pub n: usize,
    pub quotient: Interval,
    /// The separation property of the designated points, certified.
    pub separation_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SniReport {
    pub eps: f64,
    pub rows: Vec<EvidenceRow>,
}

impl SniReport {
    pub fn all_pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    /// Least certified quotient over all rows.
    pub fn min_quotient(&self) -> f64 {
        self.rows.iter().map(|r| r.quotient.lo).fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("color,M,tile,N,quotient,pass,quotient_hi,tiles,sep\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{:e},{},{:e},{},{}",
                r.color,
                r.m,
                fmt_word(&r.tile),
                r.n,
                r.quotient.lo,
                r.pass,
                r.quotient.hi,
                r.tiles,
                r.separation_ok
            );
        }
        s
    }
}

enum Kind {
    /// Depends on a designated tile only through its class.
    Invariant,
    /// Vanishes off the interior of these tiles.
    Local(Vec<Word>),
    Global,
}

fn same_layout(a: &PerturbationPlan, b: &PerturbationPlan) -> bool {
    (a.m0, a.n_big, &a.y_tiles, &a.xi, &a.witnesses) == (b.m0, b.n_big, &b.y_tiles, &b.xi, &b.witnesses)
}

fn kind(leaf: &Potential, sym: &Symbolic, plan: &PerturbationPlan) -> Kind {
    match leaf {
        Potential::Const(_) => Kind::Invariant,
        Potential::DistPow { weight, .. } | Potential::Bump { weight, .. } if *weight == 0.0 => Kind::Invariant,
        Potential::Perturbation(p) if p.plan.deltas.class_mode && same_layout(&p.plan, plan) => Kind::Invariant,
        Potential::Bump { bump, .. } => Kind::Local(bump.support(sym)),
        _ => Kind::Global,
    }
}

fn least_ext(sym: &Symbolic, mut w: Word, len: usize) -> Word {
    while w.len() < len {
        let c = sym.color(&w);
        w.push(*sym.pattern.children[c.index()].iter().min().expect("nonempty") as Letter);
    }
    w
}

/// Admissible words of length `k` whose first letter is hosted by `host`.
fn words_after(sym: &Symbolic, host: Color, k: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|w| {
                let c = if w.is_empty() { host } else { sym.color(w) };
                sym.pattern.children[c.index()].iter().map(move |&t| {
                    let mut v = w.clone();
                    v.push(t as Letter);
                    v
                })
            })
            .collect();
    }
    out.sort_unstable();
    out
}

/// Number of admissible words of length `k` after colour `host`, by final colour.
fn count_after(sym: &Symbolic, host: Color, k: usize) -> [u64; 2] {
    let mut cnt = [0u64; 2];
    cnt[host.index()] = 1;
    for _ in 0..k {
        let mut next = [0u64; 2];
        for spec in &sym.pattern.spec.tiles {
            next[spec.image.index()] = next[spec.image.index()].saturating_add(cnt[spec.host.index()]);
        }
        cnt = next;
    }
    cnt
}

/// A class of `M`-tiles: least member, its designated extension, and size.
struct Rep {
    x: Word,
    xp: Word,
    count: u64,
}

/// Class key of a designated tile `X′ = Y·P₁⋯P_{m₀}`.
fn class_key(sym: &Symbolic, plan: &PerturbationPlan, xp: &[Letter]) -> (Color, Word) {
    let (m0, big) = (plan.m0, plan.n_big);
    (sym.color(&xp[..m0 + big]), xp[m0 + big..].to_vec())
}

fn class_reps(
    sym: &Symbolic,
    plan: &PerturbationPlan,
    y: &[Letter],
    m: usize,
    mp: usize,
    limit: u64,
) -> Result<BTreeMap<(Color, Word), Rep>, SniError> {
    let big = plan.n_big;
    let r = m - plan.m0;
    let yc = sym.color(y);
    let mut out: BTreeMap<(Color, Word), Rep> = BTreeMap::new();
    let mut add = |x: Word, count: u64| {
        let xp = least_ext(sym, x.clone(), mp);
        let e = out.entry(class_key(sym, plan, &xp)).or_insert(Rep { x, xp, count: 0 });
        e.count += count;
    };
    if r <= big {
        let n: u64 = count_after(sym, yc, r).iter().sum();
        if n > limit {
            return Err(SniError::TooMany { count: n, limit });
        }
        for z in words_after(sym, yc, r) {
            add([y, &z].concat(), 1);
        }
    } else {
        let cnt = count_after(sym, yc, big);
        let firsts = words_after(sym, yc, big);
        for c1 in Color::BOTH {
            let Some(p1) = firsts.iter().find(|w| sym.color(w) == c1) else {
                continue;
            };
            let n: u64 = count_after(sym, c1, r - big).iter().sum();
            if n > limit {
                return Err(SniError::TooMany { count: n, limit });
            }
            for q in words_after(sym, c1, r - big) {
                add([y, p1, &q].concat(), cnt[c1.index()]);
            }
        }
    }
    Ok(out)
}

fn direct_reps(sym: &Symbolic, y: &[Letter], m: usize, mp: usize, limit: u64) -> Result<Vec<Rep>, SniError> {
    let r = m - y.len();
    let n: u64 = count_after(sym, sym.color(y), r).iter().sum();
    if n > limit {
        return Err(SniError::TooMany { count: n, limit });
    }
    Ok(words_after(sym, sym.color(y), r)
        .into_iter()
        .map(|z| {
            let x = [y, &z].concat();
            Rep { xp: least_ext(sym, x.clone(), mp), x, count: 1 }
        })
        .collect())
}

/// Designated tiles `X′` whose pulled-back points may meet a support, or
/// `None` when too many may.
fn affected(
    plan: &PerturbationPlan,
    support: &[Word],
    y: &[Letter],
    mp: usize,
    depth: usize,
) -> Option<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    for s in support {
        let l = s.len();
        for seq in [&plan.xi, &plan.xi_prime] {
            for j in 1..=depth {
                let b = seq.branch_word(j);
                if j >= l {
                    if s[..] == b[..l] {
                        return None;
                    }
                    continue;
                }
                if s[..j] != b[..] {
                    continue;
                }
                let t = &s[j..];
                if t.len() >= mp {
                    if t.starts_with(y) {
                        out.insert(t[..mp].to_vec());
                    }
                } else if t.starts_with(y) || y.starts_with(t) {
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// Checks the two non-integrability properties on every `M`-tile inside the
/// plan's target tiles, for `M₀ <= M <= m_max` and each `N′` in the list.
///
/// The designated points of `X` are `v_i(X′)` for the least extension `X′`
/// of `X` to level `M₀ + m₀N`, `m₀ = max(1, ⌈(M − M₀)/N⌉)`. Separation is
/// certified from `d(v_i, S²∖X) >= Λ^{-(M₀+m₀N+N−1)}` (the witness flowers
/// avoid the boundary) and `diam X <= Λ^{-M}`. Tiles are grouped into classes
/// on which every term of `φ` gives the same quotient; terms supported on a
/// few tiles split their tiles off, and other terms force enumeration.
pub fn check_sni(
    phi: &Potential,
    sym: &Symbolic,
    plan: &PerturbationPlan,
    cfg: &CheckConfig,
) -> Result<SniReport, SniError> {
    let leaves = phi.terms();
    let kinds: Vec<Kind> = leaves.iter().map(|(_, l)| kind(l, sym, plan)).collect();
    let global = kinds.iter().any(|k| matches!(k, Kind::Global));
    let invariant: Vec<(f64, &Potential)> =
        leaves.iter().zip(&kinds).filter(|(_, k)| matches!(k, Kind::Invariant)).map(|(l, _)| *l).collect();
    let depth = cfg.n_list.iter().copied().max().unwrap_or(0);
    let (big, m0) = (plan.n_big, plan.m0);
    let mut rows = Vec::new();
    for c in Color::BOTH {
        let y = &plan.y_tiles[c.index()];
        for m in m0..=cfg.m_max {
            let steps = ((m - m0).div_ceil(big)).max(1);
            let mp = m0 + steps * big;
            let sep_ok = |xp: &[Letter]| {
                let inner = lambda_pow(plan.lambda, 1.0, mp + big - 1 - m).lo >= cfg.eps;
                let pair = lambda_pow(plan.lambda, 1.0, plan.designated_separation(sym, xp) - m).lo >= cfg.eps;
                inner && pair
            };
            let mut emit = |rep: &Rep, ls: &[(f64, &Potential)]| {
                let x1 = plan.designated_point(sym, &rep.xp, 1);
                let x2 = plan.designated_point(sym, &rep.xp, 2);
                let dpow = lambda_pow(plan.lambda, plan.alpha, plan.designated_separation(sym, &rep.xp));
                let sums = leaves_sums(ls, sym, &plan.xi, &plan.xi_prime, &x1, &x2, depth);
                let separation_ok = sep_ok(&rep.xp);
                for &n in &cfg.n_list {
                    let quotient = sums[n].abs().div_pos(dpow);
                    rows.push(EvidenceRow {
                        color: c,
                        m,
                        tile: rep.x.clone(),
                        tiles: rep.count,
                        n,
                        quotient,
                        separation_ok,
                        pass: separation_ok && quotient.lo >= cfg.eps,
                    });
                }
            };
            let mut hit: Option<BTreeSet<Word>> = Some(BTreeSet::new());
            if !global {
                for k in &kinds {
                    if let Kind::Local(support) = k {
                        hit = match (hit, affected(plan, support, y, mp, depth)) {
                            (Some(mut a), Some(b)) => {
                                a.extend(b);
                                Some(a)
                            }
                            _ => None,
                        };
                    }
                }
            }
            match hit {
                Some(hit) if !global => {
                    let mut classes = class_reps(sym, plan, y, m, mp, cfg.tile_limit)?;
                    let mut singles = Vec::new();
                    for xp in hit {
                        let x = xp[..m].to_vec();
                        if least_ext(sym, x.clone(), mp) != xp {
                            continue;
                        }
                        if let Some(rep) = classes.get_mut(&class_key(sym, plan, &xp)) {
                            rep.count -= 1;
                            singles.push(Rep { x, xp, count: 1 });
                        }
                    }
                    for rep in classes.values().filter(|r| r.count > 0) {
                        // A split-off least member leaves the class represented by another tile.
                        emit(rep, &invariant);
                    }
                    for rep in &singles {
                        emit(rep, &leaves);
                    }
                }
                _ => {
                    for rep in direct_reps(sym, y, m, mp, cfg.tile_limit)? {
                        emit(&rep, &leaves);
                    }
                }
            }
        }
    }
    Ok(SniReport { eps: cfg.eps, rows })
}

/// `r = ε(1 − Λ^{-α})/(4C₀)`: a Hölder perturbation of size at most `r`
/// moves every quotient by at most `ε/2`.
pub fn openness_radius(eps: f64, alpha: f64, lambda: f64, c0: f64) -> f64 {
    eps * (1.0 - lambda.powf(-alpha)) / (4.0 * c0)
}

/// Upper estimates of `sup |φ|` and of the α-Hölder quotient over a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderSample {
    pub sup: f64,
    pub seminorm: f64,
}

impl HolderSample {
    pub fn norm(&self) -> f64 {
        self.sup + self.seminorm
    }
}

/// Sampled sup and Hölder quotient of `φ` over pairs of sample points whose
/// separation resolves within `cap`.
pub fn sampled_holder(
    phi: &Potential,
    sym: &Symbolic,
    points: &[Addr],
    lambda: f64,
    alpha: f64,
    cap: usize,
) -> HolderSample {
    let vals: Vec<Interval> = points.iter().map(|p| phi.eval(sym, p)).collect();
    let sup = vals.iter().map(|v| v.abs().hi).fold(0.0, f64::max);
    let mut seminorm = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let diff = (vals[i] - vals[j]).abs();
            if diff.hi == 0.0 {
                continue;
            }
            if let sep @ Separation::Exact(_) = address_separation(sym, &points[i], &points[j], cap) {
                seminorm = seminorm.max(diff.hi / distance_pow(sep, lambda, alpha).lo);
            }
        }
    }
    HolderSample { sup, seminorm }
}
