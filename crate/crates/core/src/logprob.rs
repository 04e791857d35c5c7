//! Base-2 log-probabilities with an explicit zero-probability variant.

use std::fmt;
use std::ops::{Add, Sub};

/// `log2` of a probability. Zero probability is [`LogProb::Impossible`],
/// never a `-inf` float.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum LogProb {
    Impossible,
    Bits(f64),
}

impl LogProb {
    pub const ONE: LogProb = LogProb::Bits(0.0);

    pub fn from_prob(p: f64) -> LogProb {
        if p > 0.0 {
            LogProb::Bits(p.log2())
        } else {
            LogProb::Impossible
        }
    }

    pub fn bits(self) -> Option<f64> {
        match self {
            LogProb::Bits(b) => Some(b),
            LogProb::Impossible => None,
        }
    }

    pub fn is_impossible(self) -> bool {
        matches!(self, LogProb::Impossible)
    }

    pub fn prob(self) -> f64 {
        match self {
            LogProb::Bits(b) => b.exp2(),
            LogProb::Impossible => 0.0,
        }
    }

    /// Self-information `-log2 p`; `None` when impossible.
    pub fn surprisal(self) -> Option<f64> {
        self.bits().map(|b| -b)
    }

    /// Conditional from joint and marginal: `self - given`. Impossible
    /// whenever either side is.
    pub fn given(self, marginal: LogProb) -> LogProb {
        match (self, marginal) {
            (LogProb::Bits(a), LogProb::Bits(b)) => LogProb::Bits(a - b),
            _ => LogProb::Impossible,
        }
    }

    pub fn max(self, other: LogProb) -> LogProb {
        match (self, other) {
            (LogProb::Impossible, x) | (x, LogProb::Impossible) => x,
            (LogProb::Bits(a), LogProb::Bits(b)) => LogProb::Bits(a.max(b)),
        }
    }
}

/// Product of probabilities.
impl Add for LogProb {
    type Output = LogProb;
    fn add(self, rhs: LogProb) -> LogProb {
        match (self, rhs) {
            (LogProb::Bits(a), LogProb::Bits(b)) => LogProb::Bits(a + b),
            _ => LogProb::Impossible,
        }
    }
}

/// Scaling by a known positive factor, e.g. `- log2 |Aut|`.
impl Sub<f64> for LogProb {
    type Output = LogProb;
    fn sub(self, rhs: f64) -> LogProb {
        match self {
            LogProb::Bits(a) => LogProb::Bits(a - rhs),
            LogProb::Impossible => LogProb::Impossible,
        }
    }
}

impl Add<f64> for LogProb {
    type Output = LogProb;
    fn add(self, rhs: f64) -> LogProb {
        self - (-rhs)
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogProb::Bits(b) => write!(f, "{b}"),
            LogProb::Impossible => f.write_str("-inf"),
        }
    }
}

/// Streaming `log2 Σ 2^x_i` with a running maximum. The result depends on
/// push order only through floating-point rounding.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp2 {
    max: f64,
    scaled_sum: f64,
    any: bool,
}

impl Default for LogSumExp2 {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp2 {
    pub fn new() -> Self {
        LogSumExp2 {
            max: f64::NEG_INFINITY,
            scaled_sum: 0.0,
            any: false,
        }
    }

    #[inline]
    pub fn push_bits(&mut self, x: f64) {
        if !self.any {
            self.max = x;
            self.scaled_sum = 1.0;
            self.any = true;
        } else if x <= self.max {
            self.scaled_sum += (x - self.max).exp2();
        } else {
            self.scaled_sum = self.scaled_sum * (self.max - x).exp2() + 1.0;
            self.max = x;
        }
    }

    #[inline]
    pub fn push(&mut self, x: LogProb) {
        if let LogProb::Bits(b) = x {
            self.push_bits(b);
        }
    }

    /// Merges another accumulator, as if its terms had been pushed here.
    pub fn merge(&mut self, other: &LogSumExp2) {
        if !other.any {
            return;
        }
        if !self.any {
            *self = *other;
            return;
        }
        if other.max <= self.max {
            self.scaled_sum += other.scaled_sum * (other.max - self.max).exp2();
        } else {
            self.scaled_sum = self.scaled_sum * (self.max - other.max).exp2() + other.scaled_sum;
            self.max = other.max;
        }
    }

    pub fn finish(&self) -> LogProb {
        if self.any {
            LogProb::Bits(self.max + self.scaled_sum.log2())
        } else {
            LogProb::Impossible
        }
    }
}

impl FromIterator<LogProb> for LogSumExp2 {
    fn from_iter<I: IntoIterator<Item = LogProb>>(iter: I) -> Self {
        let mut acc = LogSumExp2::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}
