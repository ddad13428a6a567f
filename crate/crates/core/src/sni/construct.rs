//! Building a perturbation plan: constants, witnesses, target tiles and the
//! δ recursion.
//!
//! Generation `g` tiles are `X_g = Y·P₁⋯P_g` with blocks of length `N`.
//! `δ(X_g) = 1` exactly when the temporal distance of the base plus the bump
//! sum of generations `< g` is below `2ε·d(v₁, v₂)^α` at the designated points
//! of `X_g`; a decision the enclosure cannot make is taken as `δ = 1`.

use std::sync::Arc;

use crate::complex::point::vertex_to_sym;
use crate::complex::{Addr, Complex, Letter, Location, Symbolic, Word};
use crate::expansion::select_n;
use crate::metric::{address_separation, Separation};
use crate::potential::{lambda_pow, Potential};
use crate::rulespec::Color;

use super::backward::find_disjoint_backward_sequences;
use super::bump::{corner_location, descendants, BumpParams};
use super::check::{temporal_distance, TailModel};
use super::plan::{c26, c27, eps_bound, m0_lower, n0, DeltaEntry, DeltaKey, DeltaTable, Perturbation, PerturbationPlan};
use super::SniError;

#[derive(Clone, Debug, PartialEq)]
pub struct PlanConfig {
    pub lambda: f64,
    pub alpha: f64,
    /// Visual-metric constant `C`.
    pub c_fit: f64,
    /// Distortion constant `C₀`.
    pub c0: f64,
    /// `ε`; half the admissible bound when `None`.
    pub eps: Option<f64>,
    /// Largest `N` tried.
    pub n_cap: usize,
    /// Generations of δ computed.
    pub g_cap: usize,
    /// Backward depth of the sum; `N₀ + 1` when `None`.
    pub j_cap: Option<usize>,
    /// Number of `M₀` values tried above the lower bound.
    pub m0_search: usize,
    /// Bound on δ keys per generation.
    pub key_limit: u64,
}

impl PlanConfig {
    pub fn new(lambda: f64, alpha: f64, c_fit: f64, c0: f64) -> PlanConfig {
        PlanConfig { lambda, alpha, c_fit, c0, eps: None, n_cap: 8, g_cap: 2, j_cap: None, m0_search: 4, key_limit: 1 << 20 }
    }
}

/// Whether the closed tile `y` avoids the closed 1-tile `t` and the level-0 curve.
fn target_ok(sym: &Symbolic, y: &[Letter], t: Letter) -> bool {
    y[0] != t
        && (0..sym.m()).all(|l| {
            corner_location(sym, y, l, 0) == Location::Interior
                && sym.tiles_at_location(&y[..1], corner_location(sym, y, l, 1)).iter().all(|w| w[0] != t)
        })
}

/// `Y_b, Y_w`: intersecting `M₀`-tiles inside the open 0-tile `f(ξ₀)` whose
/// closures avoid `ξ₀`, least black first.
pub fn find_target_tiles(sym: &Symbolic, xi0: Letter, m0: usize) -> Option<[Word; 2]> {
    if m0 == 0 {
        return None;
    }
    let host = sym.pattern.image(xi0 as usize);
    let firsts = sym.pattern.children[host.index()].iter().map(|&t| vec![t as Letter]);
    let mut cands = descendants(sym, firsts, m0 - 1);
    cands.retain(|y| target_ok(sym, y, xi0));
    cands.sort_unstable();
    let (blacks, whites): (Vec<&Word>, Vec<&Word>) = cands.iter().partition(|y| sym.color(y) == Color::Black);
    blacks.iter().find_map(|b| whites.iter().find(|w| sym.tiles_meet(b, w)).map(|w| [(*b).clone(), (*w).clone()]))
}

/// Least admissible word of length `k` after colour `host` ending in colour `c`.
fn least_block(sym: &Symbolic, host: Color, c: Color, k: usize) -> Option<Word> {
    let firsts = sym.pattern.children[host.index()].iter().map(|&t| vec![t as Letter]);
    let mut ws = descendants(sym, firsts, k - 1);
    ws.retain(|w| sym.color(w) == c);
    ws.into_iter().min()
}

fn words_after(sym: &Symbolic, host: Color, k: usize) -> Vec<Word> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let firsts = sym.pattern.children[host.index()].iter().map(|&t| vec![t as Letter]);
    let mut ws = descendants(sym, firsts, k - 1);
    ws.sort_unstable();
    ws
}

/// Keys of generation `g` with the least block word of each.
fn generation_keys(
    sym: &Symbolic,
    plan: &PerturbationPlan,
    g: usize,
    limit: u64,
) -> Result<Vec<(DeltaKey, Word)>, SniError> {
    let big = plan.n_big;
    let mut out = Vec::new();
    for y in Color::BOTH {
        let yc = sym.color(&plan.y_tiles[y.index()]);
        if plan.deltas.class_mode {
            for head in Color::BOTH {
                let Some(p1) = least_block(sym, yc, head, big) else {
                    continue;
                };
                for tail in words_after(sym, head, (g - 1) * big) {
                    out.push((DeltaKey { generation: g, y, head: Some(head), tail: tail.clone() }, [p1.clone(), tail].concat()));
                    if out.len() as u64 > limit {
                        return Err(SniError::TooMany { count: out.len() as u64, limit });
                    }
                }
            }
        } else {
            for blocks in words_after(sym, yc, g * big) {
                out.push((DeltaKey { generation: g, y, head: None, tail: blocks.clone() }, blocks));
                if out.len() as u64 > limit {
                    return Err(SniError::TooMany { count: out.len() as u64, limit });
                }
            }
        }
    }
    Ok(out)
}

/// Builds `φ = base + Υ` with the plan of `Υ`.
///
/// `N` is the least admissible scale with flower witnesses, `M₀` the least
/// level at or above its lower bound with target tiles, and the sum runs to
/// backward depth `J_cap` over `G_cap` generations. A constant base keeps δ
/// per class; any other base is limited to one generation keyed per tile.
pub fn construct_perturbation(
    cx: &mut Complex,
    sym: &Symbolic,
    base: &Potential,
    cfg: &PlanConfig,
) -> Result<(Potential, Arc<Perturbation>), SniError> {
    let (lambda, alpha, c_fit) = (cfg.lambda, cfg.alpha, cfg.c_fit);
    let k26 = c26(c_fit, lambda, alpha);
    let choice = select_n(cx, alpha, lambda, k26, c_fit, cfg.n_cap)?;
    let big = choice.n;
    if big == 0 || choice.dn < 2 {
        return Err(SniError::BadBumpParams);
    }
    let params = BumpParams { lambda, alpha, c26: k26, eps: 0.0, n_big: big, dn: choice.dn };
    let rho = params.rho();
    let k27 = c27(k26, c_fit, rho, lambda, alpha, big);
    let bound = eps_bound(c_fit, lambda, big);
    let eps = cfg.eps.unwrap_or(bound / 2.0);
    if !(eps > 0.0 && eps < bound) {
        return Err(SniError::EpsRange { eps, bound });
    }
    let base_norm = base.norm_bound().ok_or(SniError::NoHolderBound)?;
    let constant_base = base.constant_value().is_some();
    if !constant_base && cfg.g_cap != 1 {
        return Err(SniError::ExactGenerations(cfg.g_cap));
    }
    let big_n0 = n0(c_fit, eps, alpha, lambda, base_norm, k27, cfg.c0);
    let j_cap = cfg.j_cap.unwrap_or(big_n0 + 1);

    let witnesses = Color::BOTH.map(|c| choice.witnesses.vertices[c.index()].map(|id| vertex_to_sym(cx, big, id)));
    let mut witness_sep = [0; 2];
    for c in Color::BOTH {
        let [u1, u2] = &witnesses[c.index()];
        let (a, b) = (Addr::of_vertex(sym, u1), Addr::of_vertex(sym, u2));
        match address_separation(sym, &a, &b, 4 * big + 8) {
            Separation::Exact(k) => witness_sep[c.index()] = k,
            _ => return Err(SniError::WitnessSeparation),
        }
    }

    let (xi, xi_prime, _) = find_disjoint_backward_sequences(sym)?;
    let lower = m0_lower(k26, alpha, lambda, big);
    let (m0, y_tiles) = (lower..=lower + cfg.m0_search)
        .find_map(|m| find_target_tiles(sym, xi.get(0), m).map(|y| (m, y)))
        .ok_or(SniError::NoTargetTiles { from: lower, to: lower + cfg.m0_search })?;

    let plan = PerturbationPlan {
        lambda,
        alpha,
        eps,
        c_fit,
        c0: cfg.c0,
        n_big: big,
        dn: choice.dn,
        c26: k26,
        rho,
        c27: k27,
        base_norm,
        n0: big_n0,
        m0,
        j_cap,
        g_cap: cfg.g_cap,
        xi,
        xi_prime,
        witnesses,
        witness_sep,
        y_tiles,
        deltas: DeltaTable { class_mode: constant_base, rows: Default::default() },
    };
    let mut upsilon = Arc::new(Perturbation::new(sym, plan)?);
    let tail = TailModel { c0: cfg.c0, c_fit, lambda, alpha };
    for g in 1..=cfg.g_cap {
        let p = &upsilon.plan;
        let phi = Potential::Sum(vec![base.clone(), Potential::Perturbation(upsilon.clone())]);
        let mut rows = p.deltas.rows.clone();
        for (key, blocks) in generation_keys(sym, p, g, cfg.key_limit)? {
            let x = [p.y_tiles[key.y.index()].as_slice(), &blocks].concat();
            let (x1, x2) = (p.designated_point(sym, &x, 1), p.designated_point(sym, &x, 2));
            let td = temporal_distance(&phi, sym, &p.xi, &p.xi_prime, &x1, &x2, p.j_cap, &tail).abs();
            let threshold = lambda_pow(lambda, alpha, p.designated_separation(sym, &x)).scale(2.0 * eps);
            let entry = if td.hi < threshold.lo {
                DeltaEntry { delta: true, undecided: false }
            } else if td.lo >= threshold.hi {
                DeltaEntry { delta: false, undecided: false }
            } else {
                DeltaEntry { delta: true, undecided: true }
            };
            rows.insert(key, entry);
        }
        let deltas = DeltaTable { class_mode: p.deltas.class_mode, rows };
        upsilon = Arc::new(upsilon.with_deltas(deltas));
    }
    let phi = Potential::Sum(vec![base.clone(), Potential::Perturbation(upsilon.clone())]);
    Ok((phi, upsilon))
}

/// A bump of Hölder norm `radius` at the first backward site of the least
/// generation-1 black tile: it moves that tile's temporal distances the most.
pub fn openness_perturbation(sym: &Symbolic, upsilon: &Perturbation, radius: f64) -> Potential {
    let p = &upsilon.plan;
    let mut x = p.y_tiles[Color::Black.index()].clone();
    while x.len() < p.m0 + p.n_big {
        let c = sym.color(&x);
        x.push(*sym.pattern.children[c.index()].iter().min().expect("nonempty") as Letter);
    }
    let bump = upsilon.site_bump(sym, 1, &x);
    let norm = bump.amplitude() + bump.seminorm_bound().expect("ρ <= 1 for a built plan");
    Potential::Bump { weight: radius / norm, bump: Arc::new(bump) }
}
