//! Hölder potentials, Birkhoff sums, seminorm estimates and eventual positivity.
//!
//! Potentials are evaluated at eventually periodic addresses and return
//! intervals. Constants, bumps and perturbations are exact up to rounding at
//! resolvable points; a distance power is exact whenever the separation level
//! of the two addresses is found within its depth cap.

use std::fmt;
use std::sync::Arc;

use crate::complex::{Addr, Complex, PointRef, Symbolic};
use crate::interval::Interval;
use crate::metric::{address_separation, vertex_separation, Separation};
use crate::sni::{BumpFunction, Perturbation};

/// `Λ^{-αk}` as an enclosure (libm `powf` is faithful to one ulp).
pub fn lambda_pow(lambda: f64, alpha: f64, k: usize) -> Interval {
    let x = lambda.powf(-alpha * k as f64);
    Interval::new(x.next_down().next_down(), x.next_up().next_up())
}

/// `d^α` for a separation, as an enclosure; an unresolved separation gives `[0, Λ^{-αk}]`.
pub fn distance_pow(sep: Separation, lambda: f64, alpha: f64) -> Interval {
    match sep {
        Separation::Equal => Interval::ZERO,
        Separation::Exact(k) => lambda_pow(lambda, alpha, k),
        Separation::AtLeast(k) => Interval::new(0.0, lambda_pow(lambda, alpha, k).hi),
    }
}

#[derive(Clone, Debug)]
pub enum Potential {
    Const(f64),
    /// `weight · d(x, center)^α`, separation searched to level `depth`.
    DistPow { center: Addr, alpha: f64, weight: f64, lambda: f64, depth: usize },
    /// `weight · Υ_{v,n}`.
    Bump { weight: f64, bump: Arc<BumpFunction> },
    /// The bump sum Υ of a perturbation plan.
    Perturbation(Arc<Perturbation>),
    Scaled(f64, Box<Potential>),
    Sum(Vec<Potential>),
}

impl Potential {
    pub fn eval(&self, sym: &Symbolic, x: &Addr) -> Interval {
        match self {
            Potential::Const(c) => Interval::point(*c),
            Potential::DistPow { center, alpha, weight, lambda, depth } => {
                distance_pow(address_separation(sym, x, center, *depth), *lambda, *alpha).scale(*weight)
            }
            Potential::Bump { weight, bump } => bump.eval(sym, x).scale(*weight),
            Potential::Perturbation(p) => p.eval(sym, x),
            Potential::Scaled(c, p) => p.eval(sym, x).scale(*c),
            Potential::Sum(ps) => ps.iter().map(|p| p.eval(sym, x)).sum(),
        }
    }

    /// Declared bound on `sup |φ|`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Potential::Const(c) => c.abs(),
            Potential::DistPow { weight, .. } => weight.abs(),
            Potential::Bump { weight, bump } => weight.abs() * bump.amplitude(),
            Potential::Perturbation(p) => p.plan.sup_bound(),
            Potential::Scaled(c, p) => c.abs() * p.sup_bound(),
            Potential::Sum(ps) => ps.iter().map(Potential::sup_bound).sum(),
        }
    }

    /// Declared bound on the α-Hölder seminorm; `None` when no finite bound is known.
    ///
    /// A distance power has none: in the visual metric `d(·, p)` jumps by a
    /// factor Λ across tile boundaries arbitrarily close to each other.
    pub fn seminorm_bound(&self) -> Option<f64> {
        match self {
            Potential::Const(_) => Some(0.0),
            Potential::DistPow { weight, .. } => (*weight == 0.0).then_some(0.0),
            Potential::Bump { weight, bump } => bump.seminorm_bound().map(|h| weight.abs() * h),
            Potential::Perturbation(p) => Some(p.plan.seminorm_bound()),
            Potential::Scaled(c, p) => p.seminorm_bound().map(|h| c.abs() * h),
            Potential::Sum(ps) => ps.iter().map(Potential::seminorm_bound).sum(),
        }
    }

    /// Declared lower bound on `φ`.
    pub fn inf_bound(&self) -> f64 {
        match self {
            Potential::Const(c) => *c,
            Potential::DistPow { weight, .. } => weight.min(0.0),
            Potential::Bump { weight, bump } => weight.min(0.0) * bump.amplitude(),
            Potential::Perturbation(_) => 0.0,
            Potential::Scaled(c, p) if *c >= 0.0 => c * p.inf_bound(),
            Potential::Scaled(c, p) => -c.abs() * p.sup_bound(),
            Potential::Sum(ps) => ps.iter().map(Potential::inf_bound).sum(),
        }
    }

    /// Normalised Hölder norm bound `sup + seminorm`.
    pub fn norm_bound(&self) -> Option<f64> {
        self.seminorm_bound().map(|h| h + self.sup_bound())
    }

    /// Whether the potential is a constant (possibly written as a sum or multiple).
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Potential::Const(c) => Some(*c),
            Potential::DistPow { weight, .. } if *weight == 0.0 => Some(0.0),
            Potential::Bump { weight, .. } if *weight == 0.0 => Some(0.0),
            Potential::Scaled(c, p) => p.constant_value().map(|v| c * v),
            Potential::Sum(ps) => ps.iter().map(Potential::constant_value).sum(),
            _ => None,
        }
    }

    /// Terms of a sum with their accumulated weights, nested sums flattened.
    pub fn terms(&self) -> Vec<(f64, &Potential)> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a Potential, w: f64, out: &mut Vec<(f64, &'a Potential)>) {
            match p {
                Potential::Sum(ps) => ps.iter().for_each(|q| walk(q, w, out)),
                Potential::Scaled(c, q) => walk(q, w * c, out),
                _ => out.push((w, p)),
            }
        }
        walk(self, 1.0, &mut out);
        out
    }
}

/// `S_nφ(x) = Σ_{k<n} φ(f^k x)`; `S_0φ = 0`.
pub fn birkhoff_sum(phi: &Potential, sym: &Symbolic, x: &Addr, n: usize) -> Interval {
    (0..n).map(|k| phi.eval(sym, &x.shift(k))).sum()
}

/// Lower bound for the α-Hölder seminorm from all pairs of level-`l` vertices.
///
/// Vertex ids are stable across levels, so the pair set grows with `l` and the
/// estimate is monotone. Separations are resolved up to the top built level.
pub fn seminorm_estimate(phi: &Potential, cx: &Complex, sym: &Symbolic, l: usize, lambda: f64, alpha: f64) -> f64 {
    let nv = cx.level(l).num_vertices() as u32;
    let vals: Vec<Interval> =
        (0..nv).map(|v| phi.eval(sym, &PointRef::Vertex { level: l, id: v }.to_addr(cx, sym))).collect();
    let mut best = 0.0f64;
    for x in 0..nv {
        for y in x + 1..nv {
            let diff = (vals[x as usize] - vals[y as usize]).abs();
            if diff.lo <= 0.0 {
                continue;
            }
            let d = distance_pow(vertex_separation(cx, x, y, cx.top()), lambda, alpha);
            best = best.max(diff.lo / d.hi);
        }
    }
    best
}

/// `C₁ = H · C₀ / (1 − Λ^{-α})`, the constant of the Birkhoff-sum distortion bound.
pub fn distortion_constant_c1(h: f64, c0: f64, lambda: f64, alpha: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    h * c0 / (1.0 - lambda.powf(-alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    /// Every `n_star`-tile has `S_{n_star}φ >= min_block > 0`. Splitting
    /// `n = q·n_star + r` gives `S_nφ >= q·min_block − tail` with
    /// `tail = (n_star − 1)·sup|φ|`, which is positive for `n >= from_n`.
    Certified { n_star: usize, min_block: f64, tail: f64, from_n: usize },
    /// No level up to the cap certified; `witness` is a tile whose upper bound
    /// of `S_nφ` is `<= 0` at the last level tried, if one was found.
    Inconclusive { witness: Option<(usize, u32, f64)> },
}

/// Certified eventual positivity from tile enclosures of `S_nφ`.
///
/// Each `n`-tile is bounded below by the larger of its corner-0 value minus
/// `C₁ · 1` (using `d(fⁿx, fⁿy) <= 1` on a common `n`-tile) and `n · inf φ`.
pub fn eventually_positive_check(
    phi: &Potential,
    cx: &mut Complex,
    sym: &Symbolic,
    c0: f64,
    lambda: f64,
    alpha: f64,
    n_max: usize,
) -> Result<Positivity, crate::complex::ComplexError> {
    cx.build_to(n_max)?;
    let slack = match phi.seminorm_bound() {
        Some(h) => distortion_constant_c1(h, c0, lambda, alpha),
        None => f64::INFINITY,
    };
    let mut witness = None;
    for n in 1..=n_max {
        let lv = cx.level(n);
        let mut min_block = f64::INFINITY;
        for t in 0..lv.num_tiles() as u32 {
            let v = lv.corner(t, 0);
            let s = birkhoff_sum(phi, sym, &PointRef::Vertex { level: n, id: v }.to_addr(cx, sym), n);
            min_block = min_block.min((s.lo - slack).max(n as f64 * phi.inf_bound()));
            if s.hi <= 0.0 {
                witness = Some((n, t, s.hi));
            }
        }
        if min_block > 0.0 {
            let tail = (n - 1) as f64 * phi.sup_bound();
            let q = (tail / min_block).floor() as usize + 1;
            return Ok(Positivity::Certified { n_star: n, min_block, tail, from_n: if tail == 0.0 { n } else { q * n } });
        }
    }
    Ok(Positivity::Inconclusive { witness })
}

/// Parsed potential expression of the command-line syntax.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialExpr {
    /// `const c`
    Const(f64),
    /// `distpow level:vertex α w`
    DistPow { level: usize, vertex: u32, alpha: f64, weight: f64 },
    /// `sum(e1; e2; ...)`
    Sum(Vec<PotentialExpr>),
    /// `perturbed(base, plan-file)`
    Perturbed { base: Box<PotentialExpr>, plan: String },
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("bad potential expression {text:?}: {msg}")]
pub struct ExprError {
    pub text: String,
    pub msg: String,
}

fn expr_err(text: &str, msg: impl Into<String>) -> ExprError {
    ExprError { text: text.to_string(), msg: msg.into() }
}

/// Splits at top-level occurrences of `sep`, ignoring separators inside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn inner<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

pub fn parse_potential_expr(text: &str) -> Result<PotentialExpr, ExprError> {
    let s = text.trim();
    let num = |t: &str| t.parse::<f64>().map_err(|_| expr_err(text, format!("not a number: {t:?}")));
    if let Some(body) = inner(s, "sum") {
        let parts = split_top(body, ';');
        if parts.iter().any(|p| p.is_empty()) {
            return Err(expr_err(text, "empty term in sum"));
        }
        return parts.into_iter().map(parse_potential_expr).collect::<Result<_, _>>().map(PotentialExpr::Sum);
    }
    if let Some(body) = inner(s, "perturbed") {
        let parts = split_top(body, ',');
        let [base, plan] = parts.as_slice() else {
            return Err(expr_err(text, "perturbed takes a base and a plan file"));
        };
        return Ok(PotentialExpr::Perturbed { base: Box::new(parse_potential_expr(base)?), plan: plan.to_string() });
    }
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        ["const", c] => Ok(PotentialExpr::Const(num(c)?)),
        ["distpow", p, a, w] => {
            let (level, vertex) =
                p.split_once(':').ok_or_else(|| expr_err(text, "vertex must be written level:id"))?;
            let level = level.parse().map_err(|_| expr_err(text, "bad level"))?;
            let vertex = vertex.parse().map_err(|_| expr_err(text, "bad vertex id"))?;
            let alpha = num(a)?;
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(expr_err(text, "exponent must lie in (0, 1]"));
            }
            Ok(PotentialExpr::DistPow { level, vertex, alpha, weight: num(w)? })
        }
        _ => Err(expr_err(text, "expected const, distpow, sum(...) or perturbed(...)")),
    }
}

impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialExpr::Const(c) => write!(f, "const {c}"),
            PotentialExpr::DistPow { level, vertex, alpha, weight } => {
                write!(f, "distpow {level}:{vertex} {alpha} {weight}")
            }
            PotentialExpr::Sum(es) => {
                write!(f, "sum(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            PotentialExpr::Perturbed { base, plan } => write!(f, "perturbed({base}, {plan})"),
        }
    }
}
