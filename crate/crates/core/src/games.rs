//! A signed synchronous game on `n` inputs: equal inputs are drawn with total
//! probability `1 − t` and reward answering `0`; unequal inputs are drawn
//! with total probability `t` and penalize both players answering `0`.
//!
//! For projections summing to `λI` the value is the concave quadratic
//! `(A + B)λ − Bλ²`, so the best possible value is reached only at
//! `λ* = (A + B)/(2B)`, which needs five projections summing to an
//! irrational multiple of the identity when `t` is irrational.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::correlations::SyncCorrelation;
use crate::graphs::Graph;
use crate::operators::{krs_interval, ProjectionFamily};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedGame {
    n: usize,
    t: f64,
}

impl SignedGame {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("game needs at least two inputs, got {n}")));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::OutOfRange { value: t, lo: 0.0, hi: 1.0 });
        }
        Ok(Self { n, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Probability of each diagonal input pair, `(1 − t)/n`.
    pub fn a(&self) -> f64 {
        (1.0 - self.t) / self.n as f64
    }

    /// Probability of each off-diagonal input pair, `t/(n² − n)`.
    pub fn b(&self) -> f64 {
        let n = self.n as f64;
        self.t / (n * n - n)
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: n });
        }
        Ok(())
    }

    /// `A Σ_x p(0,0|x,x) − B Σ_{x≠y} p(0,0|x,y)`.
    pub fn expected_value(&self, p: &SyncCorrelation) -> Result<f64> {
        self.check_size(p.n())?;
        let mut diag = 0.0;
        let mut off = 0.0;
        for x in 0..self.n {
            for y in 0..self.n {
                if x == y {
                    diag += p.get(0, 0, x, y);
                } else {
                    off += p.get(0, 0, x, y);
                }
            }
        }
        Ok(self.a() * diag - self.b() * off)
    }

    /// `A Σ_x τ(E_x) − B Σ_{x≠y} τ(E_x E_y)`.
    pub fn value_from_family(&self, fam: &ProjectionFamily) -> Result<f64> {
        self.check_size(fam.len())?;
        let diag: f64 = (0..self.n).map(|x| fam.trace(x)).sum();
        let off = fam.objective(&Graph::complete(self.n)?)?;
        Ok(self.a() * diag - self.b() * off)
    }

    /// `(A + B)λ − Bλ²`, the value of any family summing to `λI`.
    pub fn sum_value(&self, lambda: f64) -> f64 {
        (self.a() + self.b()) * lambda - self.b() * lambda * lambda
    }

    /// `(A + B)/(2B)`.
    pub fn lambda_star(&self) -> f64 {
        (self.a() + self.b()) / (2.0 * self.b())
    }

    /// `1 − n/2 + (n − 1)/(2t)`, the expansion of [`Self::lambda_star`].
    pub fn lambda_star_expanded(&self) -> f64 {
        let n = self.n as f64;
        1.0 - n / 2.0 + (n - 1.0) / (2.0 * self.t)
    }

    /// `1 − n/2 + (n − 2)/(2t)`: an alternative expansion that circulates
    /// for this quantity. It disagrees with the fraction; reported for
    /// comparison only.
    pub fn lambda_star_alt_expansion(&self) -> f64 {
        let n = self.n as f64;
        1.0 - n / 2.0 + (n - 2.0) / (2.0 * self.t)
    }

    /// `(A + B)²/(4B)`.
    pub fn supremum_value(&self) -> f64 {
        let (a, b) = (self.a(), self.b());
        (a + b) * (a + b) / (4.0 * b)
    }
}

/// How the caller knows `t`. Rationality is a property of the scenario and is
/// never guessed from a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GameParameter {
    Rational(Ratio<i64>),
    Irrational(f64),
    /// A decimal approximation whose exact value was not declared.
    Approximate(f64),
}

impl GameParameter {
    pub fn value(&self) -> f64 {
        match *self {
            GameParameter::Rational(r) => r.to_f64().expect("small rational"),
            GameParameter::Irrational(x) | GameParameter::Approximate(x) => x,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, GameParameter::Rational(_))
    }
}

/// `p/q` or an integer.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a fraction p/q"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: i64 = p.trim().parse().map_err(|_| bad())?;
    let q: i64 = q.trim().parse().map_err(|_| bad())?;
    if q <= 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

/// `p/q`, `irrational:<decimal>` or `approx:<decimal>`. A bare decimal is
/// rejected: whether it is meant exactly changes the answer.
impl std::str::FromStr for GameParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let decimal = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{x}' is not a decimal number")));
        if let Some(x) = s.strip_prefix("irrational:") {
            Ok(GameParameter::Irrational(decimal(x)?))
        } else if let Some(x) = s.strip_prefix("approx:") {
            Ok(GameParameter::Approximate(decimal(x)?))
        } else if s.contains('.') {
            Err(Error::Parse(format!(
                "decimal t '{s}' needs a prefix: irrational:{s} or approx:{s} (exact values as p/q)"
            )))
        } else {
            parse_ratio(s).map(GameParameter::Rational)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttainmentReport {
    pub n: usize,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_exact: Option<String>,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub lambda_star: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star_exact: Option<String>,
    pub lambda_star_expanded: f64,
    pub lambda_star_alt_expansion: f64,
    pub supremum: f64,
    pub rational: bool,
    pub in_interval: bool,
    pub attained: bool,
    pub conclusion: String,
}

/// Whether the supremum is reached by five finite-dimensional projections
/// summing to `λ*I`: that needs `λ*` rational (so `t` rational) and inside
/// the interval of achievable `λ`.
pub fn attainment_check(n: usize, t: GameParameter) -> Result<AttainmentReport> {
    if n != 5 {
        return Err(Error::InvalidArgument(format!("attainment analysis is for n = 5, got {n}")));
    }
    let game = SignedGame::new(n, t.value())?;
    let lambda_star = game.lambda_star();
    let (lo, hi) = krs_interval();
    let in_interval = (lo..=hi).contains(&lambda_star);
    let rational = t.is_rational();
    let attained = rational && in_interval;
    let (t_exact, lambda_star_exact) = match t {
        GameParameter::Rational(r) => {
            // λ* = 1 − n/2 + (n − 1)/(2t)
            let ni = n as i64;
            let ls = Ratio::from_integer(1) - Ratio::new(ni, 2) + Ratio::from_integer(ni - 1) / (r * 2);
            (Some(r.to_string()), Some(ls.to_string()))
        }
        GameParameter::Irrational(_) | GameParameter::Approximate(_) => (None, None),
    };
    let conclusion = if attained {
        "attained by a finite-dimensional family summing to λ*·I"
    } else if !in_interval {
        "λ* lies outside the achievable interval; the quadratic's peak is not reached by any family summing to a scalar"
    } else if matches!(t, GameParameter::Approximate(_)) {
        "t was given only approximately; attainment needs t declared exactly as p/q"
    } else {
        "λ* is irrational; the supremum is approached by rational λ but not attained"
    };
    Ok(AttainmentReport {
        n,
        t: game.t(),
        t_exact,
        a: game.a(),
        b: game.b(),
        lambda_star,
        lambda_star_exact,
        lambda_star_expanded: game.lambda_star_expanded(),
        lambda_star_alt_expansion: game.lambda_star_alt_expansion(),
        supremum: game.supremum_value(),
        rational,
        in_interval,
        attained,
        conclusion: conclusion.to_string(),
    })
}

/// Grid maximizer of `(A + B)λ − Bλ²` over `points` evenly spaced values in
/// `[lo, hi]`.
pub fn grid_argmax(game: &SignedGame, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| lo + i as f64 * step)
        .map(|l| (l, game.sum_value(l)))
        .fold((lo, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}
