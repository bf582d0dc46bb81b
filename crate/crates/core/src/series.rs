//! Truncated power series in the four generating variables `(u1, v1, u2, v2)`.
//!
//! The heralded-state quantities are all of the form "mixed derivative at the
//! origin of `exp(u^T M u + u^T L)`". Rather than differentiate symbolically we
//! expand the exponential as a dense multivariate series, clipped at degree
//! `d1` in `u1` and `v1` and `d2` in `u2` and `v2`, and read off one
//! coefficient. Because the exponent has no constant term, the clipped
//! expansion is exact: no coefficient inside the caps depends on anything
//! outside them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest derivative order accepted by [`MultiSeries::apply_f1`].
///
/// `20!` still fits a `u64` and `(20!)^2` is far from `f64` overflow.
pub const MAX_ORDER: usize = 20;

const MAX_COEFFS: usize = 1 << 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-variable degree caps: `d1` for `u1` and `v1`, `d2` for `u2` and `v2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Caps {
    pub d1: usize,
    pub d2: usize,
}

impl Caps {
    pub fn new(d1: usize, d2: usize) -> Self {
        Self { d1, d2 }
    }

    /// Number of dense coefficients, `(d1+1)^2 (d2+1)^2`, or `None` on overflow.
    pub fn coefficient_count(&self) -> Option<usize> {
        let a = self.d1.checked_add(1)?;
        let b = self.d2.checked_add(1)?;
        a.checked_mul(a)?.checked_mul(b)?.checked_mul(b)
    }

    fn contains(&self, idx: [usize; 4]) -> bool {
        idx[0] <= self.d1 && idx[1] <= self.d1 && idx[2] <= self.d2 && idx[3] <= self.d2
    }
}

/// Exponent `u^T M u + u^T L + c`.
///
/// `quad` is only ever used through the quadratic form, so it need not be
/// symmetric. The constant `c` never enters a series; callers apply
/// [`QuadExponent::scalar_factor`] themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExponent {
    pub quad: [[Complex64; 4]; 4],
    pub linear: [Complex64; 4],
    pub constant: Complex64,
}

impl QuadExponent {
    pub fn new(quad: [[Complex64; 4]; 4], linear: [Complex64; 4], constant: Complex64) -> Self {
        Self {
            quad,
            linear,
            constant,
        }
    }

    pub fn zero() -> Self {
        Self::new([[ZERO; 4]; 4], [ZERO; 4], ZERO)
    }

    /// `exp(c)`.
    pub fn scalar_factor(&self) -> Complex64 {
        self.constant.exp()
    }

    /// Evaluates the exponent (including `c`) at a point.
    pub fn eval(&self, u: &[Complex64; 4]) -> Complex64 {
        let mut acc = self.constant;
        for i in 0..4 {
            acc += self.linear[i] * u[i];
            for j in 0..4 {
                acc += u[i] * self.quad[i][j] * u[j];
            }
        }
        acc
    }
}

/// Dense truncated series with complex coefficients, indexed by `(i, j, k, l)`
/// for the monomial `u1^i v1^j u2^k v2^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    caps: Caps,
    coeffs: Vec<Complex64>,
}

impl MultiSeries {
    pub fn zeros(caps: Caps) -> Result<Self> {
        let count = caps
            .coefficient_count()
            .filter(|&c| c <= MAX_COEFFS)
            .ok_or(Error::ResourceLimit {
                d1: caps.d1,
                d2: caps.d2,
                coeffs: caps.coefficient_count().unwrap_or(usize::MAX),
                limit: MAX_COEFFS,
            })?;
        Ok(Self {
            caps,
            coeffs: vec![ZERO; count],
        })
    }

    pub fn one(caps: Caps) -> Result<Self> {
        let mut s = Self::zeros(caps)?;
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    fn index(&self, idx: [usize; 4]) -> usize {
        let a = self.caps.d1 + 1;
        let b = self.caps.d2 + 1;
        ((idx[0] * a + idx[1]) * b + idx[2]) * b + idx[3]
    }

    /// Coefficient of `u1^i v1^j u2^k v2^l`; zero outside the caps.
    pub fn coeff(&self, idx: [usize; 4]) -> Complex64 {
        if self.caps.contains(idx) {
            self.coeffs[self.index(idx)]
        } else {
            ZERO
        }
    }

    /// Sets a coefficient. Indices outside the caps are silently clipped.
    pub fn set_coeff(&mut self, idx: [usize; 4], value: Complex64) {
        if self.caps.contains(idx) {
            let at = self.index(idx);
            self.coeffs[at] = value;
        }
    }

    /// Iterates `(multi-index, coefficient)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = ([usize; 4], Complex64)> + '_ {
        multi_indices(self.caps).zip(self.coeffs.iter().copied())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            caps: self.caps,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_caps(other)?;
        Ok(Self {
            caps: self.caps,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Truncated product; terms beyond the caps are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_caps(other)?;
        let mut out = Self::zeros(self.caps)?;
        let (d1, d2) = (self.caps.d1, self.caps.d2);
        for (a, ca) in self.iter() {
            if ca == ZERO {
                continue;
            }
            for i in 0..=d1 - a[0] {
                for j in 0..=d1 - a[1] {
                    for k in 0..=d2 - a[2] {
                        for l in 0..=d2 - a[3] {
                            let cb = other.coeffs[other.index([i, j, k, l])];
                            let at = out.index([a[0] + i, a[1] + j, a[2] + k, a[3] + l]);
                            out.coeffs[at] += ca * cb;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_same_caps(&self, other: &Self) -> Result<()> {
        if self.caps != other.caps {
            return Err(Error::InvalidParameter(format!(
                "series caps differ: {:?} vs {:?}",
                self.caps, other.caps
            )));
        }
        Ok(())
    }

    /// Truncated expansion of `exp(u^T M u + u^T L)`; the constant of the
    /// exponent is left out.
    ///
    /// Uses the Euler-operator identity `(sum_i u_i d/du_i) E = (X1 + 2 X2) E`
    /// for `E = exp(X1 + X2)` with `X1` linear and `X2` quadratic, which gives
    /// `|a| E[a] = sum_i L_i E[a - e_i] + 2 sum_{i<=j} Q_ij E[a - e_i - e_j]`.
    /// Every index on the right is lexicographically smaller than `a`, so a
    /// single pass in storage order fills the array.
    pub fn from_exponent(e: &QuadExponent, caps: Caps) -> Result<Self> {
        let mut s = Self::one(caps)?;
        let mut pairs = Vec::with_capacity(10);
        for i in 0..4 {
            for j in i..4 {
                let q = if i == j {
                    e.quad[i][i]
                } else {
                    e.quad[i][j] + e.quad[j][i]
                };
                if q != ZERO {
                    pairs.push((i, j, 2.0 * q));
                }
            }
        }
        let linear: Vec<(usize, Complex64)> = (0..4)
            .filter(|&i| e.linear[i] != ZERO)
            .map(|i| (i, e.linear[i]))
            .collect();

        let indices: Vec<[usize; 4]> = multi_indices(caps).collect();
        for (at, idx) in indices.into_iter().enumerate().skip(1) {
            let degree: usize = idx.iter().sum();
            let mut acc = ZERO;
            for &(i, l) in &linear {
                if idx[i] >= 1 {
                    let mut prev = idx;
                    prev[i] -= 1;
                    acc += l * s.coeffs[s.index(prev)];
                }
            }
            for &(i, j, q) in &pairs {
                let mut prev = idx;
                if prev[i] == 0 {
                    continue;
                }
                prev[i] -= 1;
                if prev[j] == 0 {
                    continue;
                }
                prev[j] -= 1;
                acc += q * s.coeffs[s.index(prev)];
            }
            s.coeffs[at] = acc / degree as f64;
        }
        Ok(s)
    }

    /// The generating-function derivative operator
    /// `(-2)^(m+n) / (pi m! n!) d^m/du1^m d^m/dv1^m d^n/du2^n d^n/dv2^n |_0`.
    pub fn apply_f1(&self, m: usize, n: usize) -> Result<Complex64> {
        self.check_order(m, n)?;
        Ok(f1_prefactor(m, n) * self.coeff([m, m, n, n]))
    }

    /// `apply_f1` of `self * exp(u^T L)`, computed by convolving only the
    /// target coefficient. Lets a fixed quadratic kernel be reused across many
    /// linear terms (one per phase-space point).
    pub fn apply_f1_with_linear(
        &self,
        linear: &[Complex64; 4],
        m: usize,
        n: usize,
    ) -> Result<Complex64> {
        self.check_order(m, n)?;
        let powers = |x: Complex64, top: usize| -> Vec<Complex64> {
            // x^k / k! for k = 0..=top
            let mut v = Vec::with_capacity(top + 1);
            let mut cur = Complex64::new(1.0, 0.0);
            v.push(cur);
            for k in 1..=top {
                cur = cur * x / k as f64;
                v.push(cur);
            }
            v
        };
        let p0 = powers(linear[0], m);
        let p1 = powers(linear[1], m);
        let p2 = powers(linear[2], n);
        let p3 = powers(linear[3], n);
        let mut acc = ZERO;
        for a in 0..=m {
            for b in 0..=m {
                let ab = p0[m - a] * p1[m - b];
                for c in 0..=n {
                    let abc = ab * p2[n - c];
                    for d in 0..=n {
                        acc += self.coeffs[self.index([a, b, c, d])] * abc * p3[n - d];
                    }
                }
            }
        }
        Ok(f1_prefactor(m, n) * acc)
    }

    fn check_order(&self, m: usize, n: usize) -> Result<()> {
        if m > self.caps.d1 || n > self.caps.d2 {
            return Err(Error::CapsInsufficient {
                have1: self.caps.d1,
                have2: self.caps.d2,
                m,
                n,
            });
        }
        if m > MAX_ORDER || n > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "derivative order ({m}, {n}) exceeds {MAX_ORDER}"
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`MultiSeries::from_exponent`].
pub fn series_from_exponent(e: &QuadExponent, caps: Caps) -> Result<MultiSeries> {
    MultiSeries::from_exponent(e, caps)
}

/// Free-function form of [`MultiSeries::apply_f1`].
pub fn apply_f1(s: &MultiSeries, m: usize, n: usize) -> Result<Complex64> {
    s.apply_f1(m, n)
}

pub(crate) fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

// (-2)^(m+n)/(pi m! n!) * (m!)^2 (n!)^2: derivative at zero is factorial times coefficient.
fn f1_prefactor(m: usize, n: usize) -> f64 {
    let sign = if (m + n).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 2f64.powi((m + n) as i32) * factorial(m) as f64 * factorial(n) as f64 / PI
}

fn multi_indices(caps: Caps) -> impl Iterator<Item = [usize; 4]> {
    let (d1, d2) = (caps.d1, caps.d2);
    (0..=d1).flat_map(move |i| {
        (0..=d1).flat_map(move |j| (0..=d2).flat_map(move |k| (0..=d2).map(move |l| [i, j, k, l])))
    })
}
