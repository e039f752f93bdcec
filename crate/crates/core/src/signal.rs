//! Sampled functions on dyadic grids and the translation/dilation operators.
//!
//! A [`SampledFunction`] stores the values of a function at the midpoints
//! of a run of dyadic cells and is zero outside those cells. The
//! translation `T^n` and dilation `D^j` act on the grid metadata only:
//!
//! * `T^n` moves the run by `n 2^J` cells,
//! * `D^j` relabels the resolution `J -> J + j` and multiplies every
//!   sample by `2^(j/2)`.
//!
//! Both map cell midpoints to cell midpoints, so no interpolation is ever
//! involved. Integrals are midpoint-rule sums with weight `2^-J`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grid::{Dyadic, DyadicGrid};
use crate::scalar::{pow2_half, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    grid: DyadicGrid,
    values: Vec<Complex<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: DyadicGrid, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::InvalidData(format!(
                "{} samples for a grid of {} cells",
                values.len(),
                grid.count()
            )));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidData(format!("sample {k} is not finite")));
        }
        Ok(SampledFunction { grid, values })
    }

    pub(crate) fn from_parts_unchecked(grid: DyadicGrid, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(grid.count(), values.len());
        SampledFunction { grid, values }
    }

    /// The zero function at a given resolution.
    pub fn zero(resolution: i32) -> Self {
        SampledFunction {
            grid: DyadicGrid::new(resolution, 0, 0),
            values: Vec::new(),
        }
    }

    /// Evaluates `f` at every cell midpoint of `grid`.
    pub fn from_fn(grid: DyadicGrid, f: impl Fn(T) -> Complex<T>) -> Self {
        let values = (0..grid.count()).map(|k| f(grid.x(k))).collect();
        SampledFunction { grid, values }
    }

    pub fn from_real_fn(grid: DyadicGrid, f: impl Fn(T) -> T) -> Self {
        Self::from_fn(grid, |x| Complex::new(f(x), T::zero()))
    }

    pub fn grid(&self) -> &DyadicGrid {
        &self.grid
    }

    pub fn resolution(&self) -> i32 {
        self.grid.resolution()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> T {
        self.grid.spacing()
    }

    /// Sample stored for absolute cell index `cell`, zero outside the support.
    pub fn at_cell(&self, cell: i64) -> Complex<T> {
        let k = cell - self.grid.start();
        if k < 0 || k >= self.values.len() as i64 {
            Complex::zero()
        } else {
            self.values[k as usize]
        }
    }

    /// `T^n f`, i.e. `x -> f(x - n)`.
    ///
    /// # Panics
    ///
    /// At negative resolution when `n` is not a multiple of the spacing; use
    /// [`SampledFunction::translate_dyadic`] for a fallible shift.
    pub fn translate(&self, n: i64) -> Self {
        self.translate_dyadic(Dyadic::from_int(n))
            .expect("integer shift must be representable on the grid")
    }

    /// Translation by an arbitrary dyadic offset that lands on the lattice.
    pub fn translate_dyadic(&self, offset: Dyadic) -> Result<Self> {
        let r = self.resolution();
        let cells = offset
            .times_pow2_integer(r)
            .ok_or_else(|| Error::NotRepresentable(offset.to_string(), r))?;
        Ok(SampledFunction {
            grid: self.grid.shifted_cells(cells as i64),
            values: self.values.clone(),
        })
    }

    /// `D^j f`, i.e. `x -> 2^(j/2) f(2^j x)`.
    pub fn dilate(&self, j: i32) -> Self {
        if j == 0 {
            return self.clone();
        }
        let s: T = pow2_half(j);
        SampledFunction {
            grid: self.grid.with_resolution(self.resolution() + j),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `D^j T^n f = 2^(j/2) f(2^j x - n)`.
    pub fn compose_dt(&self, j: i32, n: i64) -> Self {
        self.translate(n).dilate(j)
    }

    /// `sum_n f(x + n p)` restricted to `[0, p)`.
    pub fn periodize(&self, period: u64) -> Result<Self> {
        let cells = Dyadic::from_int(period as i64)
            .times_pow2_integer(self.resolution())
            .filter(|c| *c > 0)
            .ok_or_else(|| Error::NotRepresentable(period.to_string(), self.resolution()))?;
        let p = cells as i64;
        let mut out = vec![Complex::zero(); p as usize];
        for (k, v) in self.values.iter().enumerate() {
            let idx = (self.grid.start() + k as i64).rem_euclid(p);
            out[idx as usize] += v;
        }
        Ok(SampledFunction {
            grid: DyadicGrid::new(self.resolution(), 0, p as usize),
            values: out,
        })
    }

    fn require_same_resolution(&self, other: &Self) -> Result<()> {
        if self.resolution() != other.resolution() {
            Err(Error::ResolutionMismatch(self.resolution(), other.resolution()))
        } else {
            Ok(())
        }
    }

    /// `<f|g> = integral of f g*`, midpoint rule.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.require_same_resolution(other)?;
        Ok(self.inner_product_shifted(other, 0))
    }

    /// `<f | g(. - cells 2^-J)>` without building the shifted copy.
    pub(crate) fn inner_product_shifted(&self, other: &Self, cells: i64) -> Complex<T> {
        let lo = self.grid.start().max(other.grid.start() + cells);
        let hi = self.grid.end().min(other.grid.end() + cells);
        let mut acc = Complex::zero();
        if lo < hi {
            let a = &self.values[(lo - self.grid.start()) as usize..(hi - self.grid.start()) as usize];
            let b0 = (lo - cells - other.grid.start()) as usize;
            let b = &other.values[b0..b0 + a.len()];
            for (x, y) in a.iter().zip(b) {
                acc += x * y.conj();
            }
        }
        acc * self.spacing()
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b) * self.spacing()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// Refines onto resolution `target` by linear interpolation between
    /// neighbouring samples. The half cells at either end of the support
    /// are filled by extending the nearest segment, so affine functions
    /// are reproduced exactly; a single sample is held constant.
    pub fn resample(&self, target: i32) -> Result<Self> {
        let j = self.resolution();
        if target < j {
            return Err(Error::CoarseningUnsupported { from: j, to: target });
        }
        if target == j {
            return Ok(self.clone());
        }
        let shift = (target - j) as u32;
        let r = 1i64 << shift;
        let n = self.values.len();
        let grid = DyadicGrid::new(target, self.grid.start() * r, n * r as usize);
        let values = (0..grid.count() as i64)
            .map(|q| {
                if n == 1 {
                    return self.values[0];
                }
                // position in units of old samples: u = (2q + 1 - r) / 2r
                let num = 2 * q + 1 - r;
                let den = 2 * r;
                let k0 = num.div_euclid(den).clamp(0, n as i64 - 2);
                let t = T::from_i64(num - den * k0).unwrap() / T::from_i64(den).unwrap();
                let a = self.values[k0 as usize];
                let b = self.values[k0 as usize + 1];
                a * (T::one() - t) + b * t
            })
            .collect();
        Ok(SampledFunction { grid, values })
    }

    /// Piecewise-linear interpolant of the zero-extended samples. At a
    /// support edge this returns the mean of the two one-sided values.
    pub fn eval(&self, x: T) -> Complex<T> {
        if self.values.is_empty() {
            return Complex::zero();
        }
        let h = self.spacing();
        let u = x / h - T::from_i64(self.grid.start()).unwrap() - T::from_f64(0.5).unwrap();
        let k0 = u.floor();
        let t = u - k0;
        let k0 = match k0.to_i64() {
            Some(k) => k,
            None => return Complex::zero(),
        };
        let at = |k: i64| -> Complex<T> {
            if k < 0 || k >= self.values.len() as i64 {
                Complex::zero()
            } else {
                self.values[k as usize]
            }
        };
        at(k0) * (T::one() - t) + at(k0 + 1) * t
    }

    fn zip_union(&self, other: &Self, op: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        self.require_same_resolution(other)?;
        let (lo, hi) = match (self.is_empty(), other.is_empty()) {
            (true, true) => return Ok(SampledFunction::zero(self.resolution())),
            (false, true) => (self.grid.start(), self.grid.end()),
            (true, false) => (other.grid.start(), other.grid.end()),
            (false, false) => (
                self.grid.start().min(other.grid.start()),
                self.grid.end().max(other.grid.end()),
            ),
        };
        let grid = DyadicGrid::new(self.resolution(), lo, (hi - lo) as usize);
        let values = (lo..hi).map(|c| op(self.at_cell(c), other.at_cell(c))).collect();
        Ok(SampledFunction { grid, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a - b)
    }

    pub fn pointwise_multiply(&self, other: &Self) -> Result<Self> {
        self.zip_union(other, |a, b| a * b)
    }

    pub fn scale(&self, alpha: Complex<T>) -> Self {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn scale_real(&self, alpha: T) -> Self {
        self.scale(Complex::new(alpha, T::zero()))
    }

    pub fn conj(&self) -> Self {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        let grid = DyadicGrid::new(self.resolution(), -self.grid.end(), self.len());
        let values = self.values.iter().rev().copied().collect();
        SampledFunction { grid, values }
    }

    /// Accumulates `alpha * g` into `self` over the union support.
    pub(crate) fn axpy(&mut self, alpha: Complex<T>, g: &Self) {
        debug_assert_eq!(self.resolution(), g.resolution());
        if g.is_empty() {
            return;
        }
        if self.is_empty() {
            *self = g.scale(alpha);
            return;
        }
        let lo = self.grid.start().min(g.grid.start());
        let hi = self.grid.end().max(g.grid.end());
        if lo != self.grid.start() || hi != self.grid.end() {
            let mut v = vec![Complex::zero(); (hi - lo) as usize];
            let off = (self.grid.start() - lo) as usize;
            v[off..off + self.len()].copy_from_slice(&self.values);
            self.values = v;
            self.grid = DyadicGrid::new(self.resolution(), lo, (hi - lo) as usize);
        }
        let off = (g.grid.start() - lo) as usize;
        for (dst, src) in self.values[off..off + g.len()].iter_mut().zip(&g.values) {
            *dst += src * alpha;
        }
    }

    /// Drops exactly-zero samples at either end of the support.
    pub fn trimmed(&self) -> Self {
        let first = self.values.iter().position(|v| !v.is_zero());
        let Some(first) = first else {
            return SampledFunction::zero(self.resolution());
        };
        let last = self.values.iter().rposition(|v| !v.is_zero()).unwrap();
        SampledFunction {
            grid: DyadicGrid::new(self.resolution(), self.grid.start() + first as i64, last - first + 1),
            values: self.values[first..=last].to_vec(),
        }
    }
}
