//! Global parameters and the dyadic tree they induce.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::interval::Interval;
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Parses `a/b`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParam(format!("cannot parse {s:?} as a rational"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i128.pow(frac.len() as u32);
        let frac: i128 = frac.parse().map_err(|_| bad())?;
        let magnitude = int.abs() * scale + frac;
        return Ok(Rational::new(if negative { -magnitude } else { magnitude }, scale));
    }
    s.parse::<i128>().map(Rational::from_integer).map_err(|_| bad())
}

/// Smallest `k ≥ 0` with `2^k ≥ x`.
fn ceil_log2(x: Rational) -> u32 {
    let mut k = 0;
    let mut pow = Rational::one();
    while pow < x {
        pow *= 2;
        k += 1;
    }
    k
}

/// `⌊(2/δ)·ln(m/δ′)⌋ + 1`, at least 1.
pub fn iteration_bound(delta: Rational, deltap: Rational, m: usize) -> u64 {
    let d = *delta.numer() as f64 / *delta.denom() as f64;
    let dp = *deltap.numer() as f64 / *deltap.denom() as f64;
    let v = (2.0 / d) * (m as f64 / dp).ln();
    if v <= 0.0 {
        1
    } else if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v.floor() as u64 + 1
    }
}

/// Explicit replacements for the default parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub h: Option<u32>,
    pub hp: Option<u32>,
    pub p: Option<u64>,
    pub delta: Option<Rational>,
    pub deltap: Option<Rational>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }

    /// Applies one `key=value` pair; keys are `h`, `hp`, `p`, `delta`, `deltap`.
    pub fn apply(&mut self, pair: &str) -> Result<()> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got {pair:?}")))?;
        let int = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidParam(format!("{key}: {v:?} is not a non-negative integer")))
        };
        match key.trim() {
            "h" => self.h = Some(int(value)? as u32),
            "hp" => self.hp = Some(int(value)? as u32),
            "p" => self.p = Some(int(value)?),
            "delta" => self.delta = Some(parse_rational(value)?),
            "deltap" => self.deltap = Some(parse_rational(value)?),
            other => return Err(Error::InvalidParam(format!("unknown parameter {other:?}"))),
        }
        Ok(())
    }
}

impl FromStr for Overrides {
    type Err = Error;

    /// Comma-separated `key=value` pairs.
    fn from_str(s: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for pair in s.split(',').filter(|p| !p.trim().is_empty()) {
            o.apply(pair)?;
        }
        Ok(o)
    }
}

/// Which band of the tree an interval belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Top,
    Middle,
    Bottom,
}

/// Parameters of one run. `T` is a power of two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    t: u32,
    log_t: u32,
    m: usize,
    epsilon: Rational,
    h: u32,
    hp: u32,
    delta: Rational,
    deltap: Rational,
    p: u64,
    overridden: bool,
    clamped: bool,
}

/// Default parameters for horizon `t`, `m` machines and accuracy `epsilon`,
/// with `overrides` applied on top.
///
/// The default `h` exceeds `log T` for every horizon small enough to run;
/// it is then clamped to `log T` (a single bottom interval) and the result
/// is flagged so quantitative checks can tell defaults from clamped values.
pub fn compute_params(t: u32, m: usize, epsilon: Rational, overrides: &Overrides) -> Result<Params> {
    if t < 2 || !t.is_power_of_two() {
        return Err(Error::InvalidParam(format!("horizon {t} must be a power of two, at least 2")));
    }
    if m == 0 {
        return Err(Error::InvalidParam("machine count must be at least 1".into()));
    }
    if epsilon <= Rational::zero() || epsilon >= Rational::one() {
        return Err(Error::InvalidParam(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    let log_t = t.trailing_zeros();
    let m_r = Rational::from_integer(m as i128);
    let mut clamped = false;

    let h = match overrides.h {
        Some(h) => {
            if h == 0 || h > log_t {
                return Err(Error::InvalidParam(format!("h = {h} must lie in [1, log T = {log_t}]")));
            }
            h
        }
        None => {
            let raw = ceil_log2(Rational::from_integer(8) * m_r * Rational::from_integer(log_t as i128) / epsilon);
            if raw > log_t {
                clamped = true;
            }
            raw.clamp(1, log_t)
        }
    };
    let l = log_t - h;
    let hp = match overrides.hp {
        Some(hp) => {
            if hp > l {
                return Err(Error::InvalidParam(format!("h' = {hp} exceeds L = {l}")));
            }
            hp
        }
        None => {
            let raw = ceil_log2(Rational::from_integer(4) * m_r / epsilon);
            if raw > l {
                clamped = true;
            }
            raw.min(l)
        }
    };
    let delta = match overrides.delta {
        Some(d) if d <= Rational::zero() => {
            return Err(Error::InvalidParam(format!("delta = {d} must be positive")));
        }
        Some(d) => d,
        None => epsilon / Rational::from_integer(16 * (1i128 << h) * (m as i128) * (m as i128)),
    };
    let deltap = match overrides.deltap {
        Some(d) if d <= Rational::zero() => {
            return Err(Error::InvalidParam(format!("delta' = {d} must be positive")));
        }
        Some(d) => d,
        None => Rational::new(1, 2 * (1i128 << (2 * h))),
    };
    let p = match overrides.p {
        Some(0) => return Err(Error::InvalidParam("p must be at least 1".into())),
        Some(p) => p,
        None => iteration_bound(delta, deltap, m),
    };
    Ok(Params {
        t,
        log_t,
        m,
        epsilon,
        h,
        hp,
        delta,
        deltap,
        p,
        overridden: !overrides.is_empty(),
        clamped,
    })
}

impl Params {
    pub fn horizon(&self) -> u32 {
        self.t
    }

    pub fn log_t(&self) -> u32 {
        self.log_t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// `L = log T − h`, the bottom level.
    pub fn bottom_level(&self) -> u32 {
        self.log_t - self.h
    }

    pub fn h_prime(&self) -> u32 {
        self.hp
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn delta_prime(&self) -> Rational {
        self.deltap
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_overridden(&self) -> bool {
        self.overridden
    }

    pub fn is_clamped(&self) -> bool {
        self.clamped
    }

    /// True when every parameter follows its defining formula.
    pub fn defaults_hold(&self) -> bool {
        !self.overridden && !self.clamped
    }

    /// Whether the per-interval iteration bound `p` is guaranteed for top
    /// intervals: `0 < δ < 2`, `δ′ > 0` and `p` at least the formula value.
    pub fn iteration_bound_applies(&self) -> bool {
        self.delta > Rational::zero()
            && self.delta < Rational::from_integer(2)
            && self.deltap > Rational::zero()
            && self.p >= iteration_bound(self.delta, self.deltap, self.m)
    }

    pub fn root(&self) -> Interval {
        Interval::new(0, self.t)
    }

    /// Level of a tree interval, `None` if `iv` is not in the tree.
    pub fn level(&self, iv: Interval) -> Option<u32> {
        let len = iv.len();
        if len == 0 || !len.is_power_of_two() || len > self.t || iv.end() > self.t || !iv.begin().is_multiple_of(len) {
            return None;
        }
        let level = self.log_t - len.trailing_zeros();
        (level <= self.bottom_level()).then_some(level)
    }

    pub fn kind(&self, iv: Interval) -> Option<Kind> {
        let level = self.level(iv)?;
        let l = self.bottom_level();
        Some(if level == l {
            Kind::Bottom
        } else if level + self.hp >= l {
            Kind::Middle
        } else {
            Kind::Top
        })
    }

    pub fn is_top(&self, iv: Interval) -> bool {
        self.kind(iv) == Some(Kind::Top)
    }

    pub fn is_bottom(&self, iv: Interval) -> bool {
        self.kind(iv) == Some(Kind::Bottom)
    }

    /// `I_ℓ`: the `2^ℓ` intervals of level `ℓ`, left to right; empty
    /// outside `[0, L]`.
    pub fn level_intervals(&self, level: i64) -> Vec<Interval> {
        self.relative_level(self.root(), level)
    }

    /// `I_ℓ[root]`: sub-intervals of `root` of length `|root|/2^ℓ`, left to
    /// right; empty if that length falls outside the tree.
    pub fn relative_level(&self, root: Interval, rel: i64) -> Vec<Interval> {
        let Some(root_level) = self.level(root) else { return Vec::new() };
        let level = root_level as i64 + rel;
        if rel < 0 || level > self.bottom_level() as i64 {
            return Vec::new();
        }
        let len = root.len() >> rel;
        (0..1u32 << rel).map(|i| Interval::new(root.begin() + i * len, root.begin() + (i + 1) * len)).collect()
    }

    /// Every tree interval inside `root`, level by level, left to right.
    pub fn subtree(&self, root: Interval) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut rel = 0;
        loop {
            let row = self.relative_level(root, rel);
            if row.is_empty() {
                return out;
            }
            out.extend(row);
            rel += 1;
        }
    }

    /// `I_bot`, left to right.
    pub fn bottom_intervals(&self) -> Vec<Interval> {
        self.level_intervals(self.bottom_level() as i64)
    }

    /// `max{2^{−h}|I|, 2^h}`: the alignment of window boundaries in `I`.
    pub fn window_unit(&self, iv: Interval) -> u32 {
        (iv.len() >> self.h).max(1 << self.h)
    }

    /// `len(x)` for a top interval; `None` for middle and bottom ones where
    /// the chain bound is zero or absent.
    pub fn chain_bound(&self, iv: Interval, x: usize) -> Rational {
        match self.kind(iv) {
            Some(Kind::Top) => {
                self.delta * Rational::from_integer(x as i128)
                    + self.deltap * Rational::from_integer(iv.len() as i128)
            }
            _ => Rational::zero(),
        }
    }

    /// Length of guess vectors for `iv`: `p` for top, `m|I|` for middle.
    pub fn guess_len(&self, iv: Interval) -> usize {
        match self.kind(iv) {
            Some(Kind::Top) => self.p.min(usize::MAX as u64) as usize,
            Some(Kind::Middle) => self.m * iv.len() as usize,
            _ => 0,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T={} m={} eps={} h={} L={} h'={} delta={} delta'={} p={}",
            self.t,
            self.m,
            self.epsilon,
            self.h,
            self.bottom_level(),
            self.hp,
            self.delta,
            self.deltap,
            self.p
        )?;
        if self.overridden {
            write!(f, " (overridden)")?;
        }
        if self.clamped {
            write!(f, " (clamped)")?;
        }
        Ok(())
    }
}
