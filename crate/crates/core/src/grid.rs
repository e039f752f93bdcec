//! Dyadic sampling lattice.
//!
//! A grid at resolution `J` partitions the real line into cells
//! `[k 2^-J, (k+1) 2^-J)`. A [`DyadicGrid`] selects `count` consecutive
//! cells starting at cell index `start`; samples are taken at the cell
//! midpoints `(start + k + 1/2) 2^-J`. All bookkeeping is integer
//! arithmetic, so translation and dilation never round.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{pow2, Real};

/// Exact dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };

    /// `num * 2^(-exp)` for any signed exponent.
    pub fn new(num: i128, exp: i32) -> Self {
        if exp >= 0 {
            Dyadic { num, exp: exp as u32 }.reduced()
        } else {
            Dyadic {
                num: num << (-exp) as u32,
                exp: 0,
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            num: n as i128,
            exp: 0,
        }
    }

    fn reduced(mut self) -> Self {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
        self
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Writes a nonzero value as `odd * 2^e`.
    pub fn two_adic(&self) -> Option<(i128, i32)> {
        if self.num == 0 {
            return None;
        }
        let mut odd = self.num;
        let mut e = -(self.exp as i32);
        while odd % 2 == 0 {
            odd /= 2;
            e += 1;
        }
        Some((odd, e))
    }

    pub fn add(self, other: Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = self.num << (e - self.exp);
        let b = other.num << (e - other.exp);
        Dyadic { num: a + b, exp: e }.reduced()
    }

    pub fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }

    pub fn sub(self, other: Dyadic) -> Dyadic {
        self.add(other.neg())
    }

    /// `self * 2^k`.
    pub fn scale_pow2(self, k: i32) -> Dyadic {
        Dyadic::new(self.num, self.exp as i32 - k)
    }

    /// Returns `self * 2^j` if that is an integer.
    pub fn times_pow2_integer(self, j: i32) -> Option<i128> {
        let d = self.scale_pow2(j);
        (d.exp == 0).then_some(d.num)
    }

    pub fn to_real<T: Real>(self) -> T {
        T::from_i128(self.num).unwrap() * pow2::<T>(-(self.exp as i32))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        (self.num << (e - self.exp)).cmp(&(other.num << (e - other.exp)))
    }
}

impl fmt::Display for Dyadic {
    /// Exact decimal expansion (always terminates for a dyadic rational).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.num < 0;
        let mag = self.num.unsigned_abs();
        let int = mag >> self.exp;
        let mut rem = mag - (int << self.exp);
        if neg {
            write!(f, "-")?;
        }
        write!(f, "{int}")?;
        if rem != 0 {
            write!(f, ".")?;
            let den = 1u128 << self.exp;
            while rem != 0 {
                rem *= 10;
                write!(f, "{}", rem / den)?;
                rem %= den;
            }
        }
        Ok(())
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidData(format!("not an exact dyadic decimal: {s:?}"));
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return Err(bad());
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let fp = fp.trim_end_matches('0');
        let digits: String = format!("{ip}{fp}");
        let n: i128 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = fp.len() as u32;
        let five = 5i128.checked_pow(d).ok_or_else(bad)?;
        if n % five != 0 {
            return Err(bad());
        }
        let num = if neg { -(n / five) } else { n / five };
        Ok(Dyadic { num, exp: d }.reduced())
    }
}

/// Finite run of cells at a fixed dyadic resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicGrid {
    resolution: i32,
    start: i64,
    count: usize,
}

impl DyadicGrid {
    pub fn new(resolution: i32, start: i64, count: usize) -> Self {
        let start = if count == 0 { 0 } else { start };
        DyadicGrid {
            resolution,
            start,
            count,
        }
    }

    /// Grid covering `[lo, hi)`; both ends must lie on the lattice.
    pub fn covering(resolution: i32, lo: Dyadic, hi: Dyadic) -> Result<Self> {
        let a = lo
            .times_pow2_integer(resolution)
            .ok_or_else(|| Error::NotRepresentable(lo.to_string(), resolution))?;
        let b = hi
            .times_pow2_integer(resolution)
            .ok_or_else(|| Error::NotRepresentable(hi.to_string(), resolution))?;
        if b < a {
            return Err(Error::InvalidData(format!("empty interval [{lo}, {hi})")));
        }
        Ok(DyadicGrid::new(resolution, a as i64, (b - a) as usize))
    }

    pub fn resolution(&self) -> i32 {
        self.resolution
    }

    /// Cell index of `support_lo`.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last cell index.
    pub fn end(&self) -> i64 {
        self.start + self.count as i64
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn support_lo(&self) -> Dyadic {
        Dyadic::new(self.start as i128, self.resolution)
    }

    pub fn support_hi(&self) -> Dyadic {
        Dyadic::new(self.end() as i128, self.resolution)
    }

    pub fn spacing<T: Real>(&self) -> T {
        pow2(-self.resolution)
    }

    /// Exact position of sample `k` (the midpoint of its cell).
    pub fn point(&self, k: usize) -> Dyadic {
        Dyadic::new(2 * (self.start as i128 + k as i128) + 1, self.resolution + 1)
    }

    pub fn x<T: Real>(&self, k: usize) -> T {
        let two_k1 = 2 * (self.start + k as i64) + 1;
        T::from_i64(two_k1).unwrap() * pow2::<T>(-(self.resolution + 1))
    }

    pub fn with_resolution(&self, resolution: i32) -> Self {
        DyadicGrid { resolution, ..*self }
    }

    pub fn shifted_cells(&self, cells: i64) -> Self {
        DyadicGrid::new(self.resolution, self.start + cells, self.count)
    }

    /// Recovers a grid from its first sample position, resolution, and count.
    pub fn from_first_point(x0: Dyadic, resolution: i32, count: usize) -> Result<Self> {
        let twice = x0
            .times_pow2_integer(resolution + 1)
            .ok_or_else(|| Error::InvalidData(format!("{x0} is not a cell midpoint")))?;
        if twice.rem_euclid(2) != 1 {
            return Err(Error::InvalidData(format!("{x0} is not a cell midpoint")));
        }
        Ok(DyadicGrid::new(resolution, ((twice - 1) / 2) as i64, count))
    }

    /// Resolution implied by a single cell midpoint.
    pub fn resolution_of_midpoint(x0: Dyadic) -> Result<i32> {
        let (_, e) = x0
            .two_adic()
            .ok_or_else(|| Error::InvalidData("0 is never a cell midpoint".into()))?;
        Ok(-e - 1)
    }
}
