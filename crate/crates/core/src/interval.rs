//! Closed real intervals with one-ulp outward rounding per operation.
//!
//! Every arithmetic result contains the exact result of the same operation on
//! any members of the operands. Rounding to nearest is off by at most half an
//! ulp, so widening each computed endpoint by one ulp keeps the enclosure.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_infinite() {
        x
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_infinite() {
        x
    } else {
        x.next_up()
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// A value known exactly.
    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// A computed value whose rounding error is at most half an ulp.
    pub fn rounded(x: f64) -> Interval {
        Interval { lo: down(x), hi: up(x) }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn hull(self, o: Interval) -> Interval {
        Interval { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn intersects(self, o: Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Range of `|x|` over the interval.
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    pub fn scale(self, c: f64) -> Interval {
        self * Interval::point(c)
    }

    /// Division by a positive interval.
    pub fn div_pos(self, d: Interval) -> Interval {
        assert!(d.lo > 0.0, "divisor must be positive");
        if self == Interval::ZERO {
            return Interval::ZERO;
        }
        let q = [self.lo / d.lo, self.lo / d.hi, self.hi / d.lo, self.hi / d.hi];
        Interval {
            lo: down(q.iter().copied().fold(f64::INFINITY, f64::min)),
            hi: up(q.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        }
    }

    pub fn exp(self) -> Interval {
        // libm exp is faithful to within one ulp; two steps cover it.
        Interval { lo: down(down(self.lo.exp())).max(0.0), hi: up(up(self.hi.exp())) }
    }

    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "log of a non-positive interval");
        Interval { lo: down(down(self.lo.ln())), hi: up(up(self.hi.ln())) }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Interval {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        let (lo, hi) = (self.lo + o.lo, self.hi + o.hi);
        // Knuth's two-sum error term; zero means the rounded sum is exact.
        let exact = |a: f64, b: f64, s: f64| {
            let bb = s - a;
            (a - (s - bb)) + (b - bb) == 0.0
        };
        Interval {
            lo: if exact(self.lo, o.lo, lo) { lo } else { down(lo) },
            hi: if exact(self.hi, o.hi, hi) { hi } else { up(hi) },
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        if self == Interval::ZERO || o == Interval::ZERO {
            return Interval::ZERO;
        }
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // A fused residual of zero certifies an exact product.
        if self.is_point() && o.is_point() && self.lo.mul_add(o.lo, -lo) == 0.0 {
            return Interval::point(lo);
        }
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{:e}", self.lo)
        } else {
            write!(f, "[{:e}, {:e}]", self.lo, self.hi)
        }
    }
}
