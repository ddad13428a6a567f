//! The perturbation plan: constants, witnesses, target tiles and the δ table,
//! and the bump sum `Υ` it defines.
//!
//! `Υ` is truncated to backward depth `J_cap` and `G_cap` generations. A
//! truncated sum is the same construction with the dropped `δ` set to 0, so
//! it is an exact potential, and every estimate of the construction holds
//! for it verbatim. Pulled-back supports `τⱼ(Y)` for distinct `j` are
//! disjoint, so at a point `x` only `j` = the number of leading `ξ₀` letters
//! can contribute:
//! `Υ(x) = Σ_g δ(X_g) Λ^{-α(M₀+gN+j)} core_{c(X_g)}(f^{M₀+gN+j} x)` with
//! `X_g` the `(M₀+gN)`-tile of `fʲx`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::complex::{Addr, Letter, SymVertex, Symbolic, Word};
use crate::interval::Interval;
use crate::potential::lambda_pow;
use crate::rulespec::Color;

use super::backward::BackwardSequence;
use super::bump::{flower_in_open_tile, BumpCore, BumpFunction, BumpParams};
use super::SniError;

/// Key of a δ entry. In class mode a generation-`g` tile `Y·P₁⋯P_g` (blocks
/// of length `N`) is keyed by `Y`, the colour of `P₁` and `P₂⋯P_g`; this is
/// exact for a constant base, whose temporal distances only see that much.
/// In exact mode `head` is `None` and `tail` is `P₁⋯P_g`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaKey {
    pub generation: usize,
    pub y: Color,
    pub head: Option<Color>,
    pub tail: Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaEntry {
    pub delta: bool,
    /// The temporal-distance interval straddled the threshold; `delta` was set to 1.
    pub undecided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeltaTable {
    pub class_mode: bool,
    pub rows: BTreeMap<DeltaKey, DeltaEntry>,
}

impl DeltaTable {
    /// Missing keys read as 0: the generation is not (yet) part of the sum.
    pub fn get(&self, key: &DeltaKey) -> bool {
        self.rows.get(key).is_some_and(|e| e.delta)
    }

    pub fn undecided(&self) -> usize {
        self.rows.values().filter(|e| e.undecided).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationPlan {
    pub lambda: f64,
    pub alpha: f64,
    pub eps: f64,
    pub c_fit: f64,
    pub c0: f64,
    pub n_big: usize,
    pub dn: u32,
    pub c26: f64,
    pub rho: f64,
    pub c27: f64,
    pub base_norm: f64,
    pub n0: usize,
    pub m0: usize,
    pub j_cap: usize,
    pub g_cap: usize,
    pub xi: BackwardSequence,
    pub xi_prime: BackwardSequence,
    /// `u^i_c` at level `N`, indexed `[colour][i−1]`, canonical names.
    pub witnesses: [[SymVertex; 2]; 2],
    /// Separation level of `u¹_c` and `u²_c`.
    pub witness_sep: [usize; 2],
    /// `Y^{M₀}_c` by colour index.
    pub y_tiles: [Word; 2],
    pub deltas: DeltaTable,
}

/// `C₂₆ = 4C^αΛ^α`.
pub fn c26(c_fit: f64, lambda: f64, alpha: f64) -> f64 {
    4.0 * (c_fit * lambda).powf(alpha)
}

/// `C₂₇ = 1 + C₂₆C(4/(1−ρ) + Λ^{αN}/(1−Λ^{-αN}))`.
pub fn c27(c26: f64, c_fit: f64, rho: f64, lambda: f64, alpha: f64, n_big: usize) -> f64 {
    let l = lambda.powf(alpha * n_big as f64);
    1.0 + c26 * c_fit * (4.0 / (1.0 - rho) + l / (1.0 - 1.0 / l))
}

/// Upper end of the admissible range `ε < C^{-2}Λ^{-2N}`.
pub fn eps_bound(c_fit: f64, lambda: f64, n_big: usize) -> f64 {
    c_fit.powi(-2) * lambda.powf(-2.0 * n_big as f64)
}

/// `N₀ = ⌈α⁻¹ log_Λ(2C²ε^{-1-α}(‖φ‖ + εC₂₇)C₀/(1−Λ^{-α}))⌉`, at least 1.
pub fn n0(c_fit: f64, eps: f64, alpha: f64, lambda: f64, norm: f64, c27: f64, c0: f64) -> usize {
    let arg = 2.0 * c_fit * c_fit * eps.powf(-1.0 - alpha) * (norm + eps * c27) * c0 / (1.0 - lambda.powf(-alpha));
    ((arg.ln() / (alpha * lambda.ln())).ceil().max(1.0)) as usize
}

/// Least integer `M₀ >= α⁻¹ log_Λ(2C₂₆/(1−Λ^{-αN}))`, at least 1.
pub fn m0_lower(c26: f64, alpha: f64, lambda: f64, n_big: usize) -> usize {
    let arg = 2.0 * c26 / (1.0 - lambda.powf(-alpha * n_big as f64));
    ((arg.ln() / (alpha * lambda.ln())).ceil().max(1.0)) as usize
}

impl PerturbationPlan {
    pub fn bump_params(&self) -> BumpParams {
        BumpParams {
            lambda: self.lambda,
            alpha: self.alpha,
            c26: self.c26,
            eps: self.eps,
            n_big: self.n_big,
            dn: self.dn,
        }
    }

    /// Largest `M` whose designated points see every generation of the sum.
    pub fn m_max(&self) -> usize {
        self.m0 + self.g_cap * self.n_big
    }

    /// `sup Υ <= Σ_g C₂₆Λ^{-α(M₀+gN+1)}ε`: a point lies in at most one
    /// support per generation, and only `j >= 1` contributes.
    pub fn sup_bound(&self) -> f64 {
        let s: f64 = (1..=self.g_cap)
            .map(|g| self.c26 * self.eps * self.lambda.powf(-self.alpha * (self.m0 + g * self.n_big + 1) as f64))
            .sum();
        s * (1.0 + 1e-12)
    }

    /// `|Υ|_α <= (C₂₇ − 1/2)ε`, the seminorm part of `‖Υ‖ <= C₂₇ε`.
    pub fn seminorm_bound(&self) -> f64 {
        (self.c27 - 0.5) * self.eps * (1.0 + 1e-12)
    }

    /// Colour index of the target tile `y` starts with, if any.
    pub fn target_of(&self, y: &Addr) -> Option<Color> {
        let w = y.prefix(self.m0);
        Color::BOTH.into_iter().find(|c| self.y_tiles[c.index()] == w)
    }

    /// δ key of the generation-`g` tile `Y_c · blocks`.
    pub fn key(&self, sym: &Symbolic, y: Color, blocks: &[Letter]) -> DeltaKey {
        let big = self.n_big;
        let generation = blocks.len() / big;
        if self.deltas.class_mode {
            DeltaKey { generation, y, head: Some(sym.color(&blocks[..big])), tail: blocks[big..].to_vec() }
        } else {
            DeltaKey { generation, y, head: None, tail: blocks.to_vec() }
        }
    }

    /// `v_i(X) = (f^{|X|}|_X)^{-1}(u^i_{c(X)})`, as an address (`i` is 1 or 2).
    pub fn designated_point(&self, sym: &Symbolic, x: &[Letter], i: usize) -> Addr {
        let u = &self.witnesses[sym.color(x).index()][i - 1];
        let mut word = x.to_vec();
        word.extend_from_slice(&u.word);
        Addr::of_vertex(sym, &SymVertex { word, corner: u.corner })
    }

    /// Separation level of `v₁(X)` and `v₂(X)`: `|X|` plus that of the witnesses,
    /// since `f^{|X|}` maps the subtiles of `X` homeomorphically and both
    /// flowers lie in its interior.
    pub fn designated_separation(&self, sym: &Symbolic, x: &[Letter]) -> usize {
        x.len() + self.witness_sep[sym.color(x).index()]
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &mut s;
        let _ = writeln!(f, "thurston-plan 1");
        for (k, v) in [
            ("lambda", self.lambda),
            ("alpha", self.alpha),
            ("eps", self.eps),
            ("c_fit", self.c_fit),
            ("c0", self.c0),
            ("c26", self.c26),
            ("rho", self.rho),
            ("c27", self.c27),
            ("base_norm", self.base_norm),
        ] {
            let _ = writeln!(f, "{k} {v}");
        }
        for (k, v) in [("n", self.n_big), ("n0", self.n0), ("m0", self.m0), ("j_cap", self.j_cap), ("g_cap", self.g_cap)]
        {
            let _ = writeln!(f, "{k} {v}");
        }
        let _ = writeln!(f, "dn {}", self.dn);
        let _ = writeln!(f, "xi {} {}", fmt_word(&self.xi.pre), fmt_word(&self.xi.period));
        let _ = writeln!(f, "xi_prime {} {}", fmt_word(&self.xi_prime.pre), fmt_word(&self.xi_prime.period));
        for c in Color::BOTH {
            for (i, u) in self.witnesses[c.index()].iter().enumerate() {
                let _ = writeln!(f, "witness {c} {} {} {}", i + 1, fmt_word(&u.word), u.corner);
            }
        }
        let _ = writeln!(f, "witness_sep {} {}", self.witness_sep[0], self.witness_sep[1]);
        for c in Color::BOTH {
            let _ = writeln!(f, "y {c} {}", fmt_word(&self.y_tiles[c.index()]));
        }
        let _ = writeln!(f, "mode {}", if self.deltas.class_mode { "class" } else { "exact" });
        let _ = writeln!(f, "# delta level y head tail delta ('*' marks undecided)");
        for (k, e) in &self.deltas.rows {
            let level = self.m0 + k.generation * self.n_big;
            let head = k.head.map_or("-".to_string(), |c| c.to_string());
            let mark = if e.undecided { "*" } else { "" };
            let _ = writeln!(f, "delta {level} {} {head} {} {}{mark}", k.y, fmt_word(&k.tail), u8::from(e.delta));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PerturbationPlan, SniError> {
        let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
        let mut witnesses: [[Option<SymVertex>; 2]; 2] = Default::default();
        let mut y_tiles: [Option<Word>; 2] = Default::default();
        let mut rows = BTreeMap::new();
        let mut class_mode = None;
        let mut seqs: [Option<BackwardSequence>; 2] = Default::default();
        let mut witness_sep = None;
        let mut header = false;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| SniError::Plan { line: ln + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["thurston-plan", "1"] => header = true,
                ["xi", pre, per] | ["xi_prime", pre, per] => {
                    let seq = BackwardSequence {
                        pre: parse_word(pre).ok_or_else(|| err("bad word"))?,
                        period: parse_word(per).ok_or_else(|| err("bad word"))?,
                    };
                    seqs[usize::from(toks[0] == "xi_prime")] = Some(seq);
                }
                ["witness", c, i, w, corner] => {
                    let c = parse_color(c).ok_or_else(|| err("bad colour"))?;
                    let i: usize = i.parse().ok().filter(|i| (1..=2).contains(i)).ok_or_else(|| err("bad index"))?;
                    let word = parse_word(w).ok_or_else(|| err("bad word"))?;
                    let corner = corner.parse().map_err(|_| err("bad corner"))?;
                    witnesses[c.index()][i - 1] = Some(SymVertex { word, corner });
                }
                ["witness_sep", b, w] => {
                    witness_sep = Some([b.parse().map_err(|_| err("bad level"))?, w.parse().map_err(|_| err("bad level"))?]);
                }
                ["y", c, w] => {
                    let c = parse_color(c).ok_or_else(|| err("bad colour"))?;
                    y_tiles[c.index()] = Some(parse_word(w).ok_or_else(|| err("bad word"))?);
                }
                ["mode", m] => {
                    class_mode = Some(match *m {
                        "class" => true,
                        "exact" => false,
                        _ => return Err(err("mode must be class or exact")),
                    })
                }
                ["delta", level, y, head, tail, d] => {
                    let level: usize = level.parse().map_err(|_| err("bad level"))?;
                    let y = parse_color(y).ok_or_else(|| err("bad colour"))?;
                    let head = match *head {
                        "-" => None,
                        h => Some(parse_color(h).ok_or_else(|| err("bad colour"))?),
                    };
                    let tail = parse_word(tail).ok_or_else(|| err("bad word"))?;
                    let (d, undecided) = match d.strip_suffix('*') {
                        Some(d) => (d, true),
                        None => (*d, false),
                    };
                    let delta = match d {
                        "0" => false,
                        "1" => true,
                        _ => return Err(err("delta must be 0 or 1")),
                    };
                    rows.insert(DeltaKey { generation: level, y, head, tail }, DeltaEntry { delta, undecided });
                }
                [k, v] => {
                    kv.insert(k, v);
                }
                _ => return Err(err("unrecognised line")),
            }
        }
        let missing = |what: &str| SniError::Plan { line: 0, msg: format!("missing {what}") };
        if !header {
            return Err(missing("header 'thurston-plan 1'"));
        }
        let num = |k: &str| -> Result<f64, SniError> {
            kv.get(k).ok_or_else(|| missing(k))?.parse().map_err(|_| missing(k))
        };
        let int = |k: &str| -> Result<usize, SniError> {
            kv.get(k).ok_or_else(|| missing(k))?.parse().map_err(|_| missing(k))
        };
        let (m0, n_big) = (int("m0")?, int("n")?);
        // Rows carry absolute levels; keys carry generations.
        let mut deltas = DeltaTable { class_mode: class_mode.ok_or_else(|| missing("mode"))?, rows: BTreeMap::new() };
        for (mut k, e) in rows {
            if k.generation < m0 || (k.generation - m0) % n_big != 0 {
                return Err(missing("delta rows at generation levels"));
            }
            k.generation = (k.generation - m0) / n_big;
            deltas.rows.insert(k, e);
        }
        let [xi, xi_prime] = seqs;
        let wit = |c: usize, i: usize| witnesses[c][i].clone().ok_or_else(|| missing("witness"));
        Ok(PerturbationPlan {
            lambda: num("lambda")?,
            alpha: num("alpha")?,
            eps: num("eps")?,
            c_fit: num("c_fit")?,
            c0: num("c0")?,
            n_big,
            dn: int("dn")? as u32,
            c26: num("c26")?,
            rho: num("rho")?,
            c27: num("c27")?,
            base_norm: num("base_norm")?,
            n0: int("n0")?,
            m0,
            j_cap: int("j_cap")?,
            g_cap: int("g_cap")?,
            xi: xi.ok_or_else(|| missing("xi"))?,
            xi_prime: xi_prime.ok_or_else(|| missing("xi_prime"))?,
            witnesses: [[wit(0, 0)?, wit(0, 1)?], [wit(1, 0)?, wit(1, 1)?]],
            witness_sep: witness_sep.ok_or_else(|| missing("witness_sep"))?,
            y_tiles: [
                y_tiles[0].clone().ok_or_else(|| missing("y b"))?,
                y_tiles[1].clone().ok_or_else(|| missing("y w"))?,
            ],
            deltas,
        })
    }
}

/// Letters joined by `.`; `-` for the empty word.
pub fn fmt_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "-".to_string();
    }
    w.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(".")
}

pub fn parse_word(s: &str) -> Option<Word> {
    if s == "-" {
        return Some(Vec::new());
    }
    s.split('.').map(|t| t.parse().ok()).collect()
}

fn parse_color(s: &str) -> Option<Color> {
    match s {
        "b" => Some(Color::Black),
        "w" => Some(Color::White),
        _ => None,
    }
}

/// The bump sum `Υ` of a plan, with one level-0 core per colour.
#[derive(Debug)]
pub struct Perturbation {
    pub plan: PerturbationPlan,
    cores: [Arc<BumpCore>; 2],
}

impl Perturbation {
    pub fn new(sym: &Symbolic, plan: PerturbationPlan) -> Result<Perturbation, SniError> {
        let params = plan.bump_params();
        let core = |c: usize| -> Result<Arc<BumpCore>, SniError> {
            let u = &plan.witnesses[c][0];
            if u.level() != plan.n_big || !flower_in_open_tile(sym, u) {
                return Err(SniError::Plan { line: 0, msg: "witness flower must avoid the curve".into() });
            }
            Ok(Arc::new(BumpCore::new(sym, u, 0, params)?))
        };
        let cores = [core(0)?, core(1)?];
        Ok(Perturbation { plan, cores })
    }

    /// Same cores with another δ table.
    pub fn with_deltas(&self, deltas: DeltaTable) -> Perturbation {
        let mut plan = self.plan.clone();
        plan.deltas = deltas;
        Perturbation { plan, cores: self.cores.clone() }
    }

    pub fn core(&self, c: Color) -> &Arc<BumpCore> {
        &self.cores[c.index()]
    }

    /// Number of leading `ξ₀` letters, capped at `J_cap + 1`.
    pub fn leading_count(&self, x: &Addr) -> usize {
        let t = self.plan.xi.get(0);
        (0..=self.plan.j_cap).find(|&k| x.letter(k) != t).unwrap_or(self.plan.j_cap + 1)
    }

    /// `Σ_g δ(X_g) Λ^{-α(M₀+gN)} core(f^{M₀+gN} y)` for `y` in a target tile.
    pub fn psi(&self, sym: &Symbolic, y: &Addr) -> Interval {
        let p = &self.plan;
        let Some(yc) = p.target_of(y) else {
            return Interval::ZERO;
        };
        let blocks = y.prefix(p.m0 + p.g_cap * p.n_big).split_off(p.m0);
        let mut sum = Interval::ZERO;
        for g in 1..=p.g_cap {
            let b = &blocks[..g * p.n_big];
            if !p.deltas.get(&p.key(sym, yc, b)) {
                continue;
            }
            let level = p.m0 + g * p.n_big;
            let v = self.cores[sym.color(b).index()].eval(sym, &y.shift(level));
            sum = sum + v * lambda_pow(p.lambda, p.alpha, level);
        }
        sum
    }

    pub fn eval(&self, sym: &Symbolic, x: &Addr) -> Interval {
        let j = self.leading_count(x);
        if j == 0 || j > self.plan.j_cap {
            return Interval::ZERO;
        }
        self.psi(sym, &x.shift(j)) * lambda_pow(self.plan.lambda, self.plan.alpha, j)
    }

    /// The single term `Υ_{v₁(τⱼ(X)), |X|+j}` as a bump, sharing the cores.
    pub fn site_bump(&self, sym: &Symbolic, j: usize, x: &[Letter]) -> BumpFunction {
        let mut prefix = self.plan.xi.branch_word(j);
        prefix.extend_from_slice(x);
        BumpFunction::scaled(prefix, self.cores[sym.color(x).index()].clone())
    }
}
