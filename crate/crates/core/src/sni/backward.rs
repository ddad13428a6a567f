//! Backward sequences of 1-tiles and their inverse branches.

use crate::complex::{Addr, Letter, Symbolic, Word};
use crate::rulespec::Color;

use super::SniError;

/// The eventually periodic sequence `ξ₀, ξ₋₁, ξ₋₂, …` stored as `pre · period^∞`.
///
/// Admissible when the host of `ξ₋ᵢ` is the image colour of `ξ₋₍ᵢ₊₁₎`, so that
/// `ξ₋ᵢ ⊆ f(ξ₋₍ᵢ₊₁₎)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardSequence {
    pub pre: Word,
    pub period: Word,
}

/// Which case of the construction produced a pair of sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackwardCase {
    /// A 0-tile of colour `.0` is a single 1-tile of the other colour.
    SingleTile(Color),
    /// Each 0-tile hosts 1-tiles of both colours.
    BothColors,
}

impl BackwardSequence {
    pub fn constant(t: Letter) -> BackwardSequence {
        BackwardSequence { pre: Vec::new(), period: vec![t] }
    }

    /// `ξ₋ᵢ`.
    pub fn get(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// The word `ξ₁₋ⱼ … ξ₋₁ ξ₀` prepended by the branch `τⱼ`.
    pub fn branch_word(&self, j: usize) -> Word {
        (0..j).rev().map(|i| self.get(i)).collect()
    }

    /// `τⱼ(x)`: the preimage of `x` under `fʲ` along the sequence.
    pub fn tau(&self, j: usize, x: &Addr) -> Addr {
        let mut pre = self.branch_word(j);
        pre.extend_from_slice(&x.pre);
        Addr { pre, period: x.period.clone() }
    }

    pub fn is_admissible(&self, sym: &Symbolic) -> bool {
        let p = &sym.pattern;
        let n = p.spec.tiles.len();
        let horizon = self.pre.len() + self.period.len() + 1;
        !self.period.is_empty()
            && (0..=horizon).all(|i| (self.get(i) as usize) < n)
            && (0..horizon).all(|i| p.host(self.get(i) as usize) == p.image(self.get(i + 1) as usize))
    }

    /// Whether `ξ₋ᵢ ≠ t` for every `i`.
    pub fn avoids(&self, t: Letter) -> bool {
        !self.pre.contains(&t) && !self.period.contains(&t)
    }
}

/// Least 1-tile hosted by `host` with image colour `image`.
fn least_child(sym: &Symbolic, host: Color, image: Color) -> Option<Letter> {
    let p = &sym.pattern;
    p.children[host.index()].iter().copied().filter(|&t| p.image(t) == image).min().map(|t| t as Letter)
}

/// Two backward sequences `ξ` (constant) and `ξ′` with `f(ξ₀) = f(ξ′₀)` and
/// `ξ′₋ᵢ ≠ ξ₀` for every `i`.
///
/// The single-tile case is tried first with white, then black, as the
/// degenerate 0-tile; otherwise both 0-tiles must host both colours.
pub fn find_disjoint_backward_sequences(
    sym: &Symbolic,
) -> Result<(BackwardSequence, BackwardSequence, BackwardCase), SniError> {
    let p = &sym.pattern;
    for a in [Color::White, Color::Black] {
        let b = a.flip();
        let kids = &p.children[a.index()];
        if kids.len() != 1 || p.image(kids[0]) != b {
            continue;
        }
        // X⁰_a is the single 1-tile X¹_b; Y¹_b, Y¹_a lie in X⁰_b.
        let x1 = kids[0] as Letter;
        let (Some(y_same), Some(y_other)) = (least_child(sym, b, b), least_child(sym, b, a)) else {
            continue;
        };
        let xi = BackwardSequence::constant(y_same);
        let xi_prime = BackwardSequence { pre: Vec::new(), period: vec![x1, y_other] };
        return Ok((xi, xi_prime, BackwardCase::SingleTile(a)));
    }
    let (b, w) = (Color::Black, Color::White);
    if let (Some(xb), Some(xw), Some(yb)) = (least_child(sym, w, b), least_child(sym, w, w), least_child(sym, b, b)) {
        let xi = BackwardSequence::constant(yb);
        let xi_prime = BackwardSequence { pre: vec![xb], period: vec![xw] };
        return Ok((xi, xi_prime, BackwardCase::BothColors));
    }
    Err(SniError::NoBackwardSequences)
}
