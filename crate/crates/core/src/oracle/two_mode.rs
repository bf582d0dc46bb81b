use num_complex::Complex64;

use super::fock::FockVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two-mode pure state `sum a_jk |j>_1 |k>_2` with all support at total
/// photon number `<= max_total`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFock {
    dim1: usize,
    dim2: usize,
    max_total: usize,
    amps: Vec<Complex64>,
}

impl TwoModeFock {
    pub fn product(first: &FockVector, second: &FockVector) -> Self {
        let (dim1, dim2) = (first.cutoff() + 1, second.cutoff() + 1);
        let mut amps = Vec::with_capacity(dim1 * dim2);
        for a in first.amplitudes() {
            for b in second.amplitudes() {
                amps.push(a * b);
            }
        }
        Self {
            dim1,
            dim2,
            max_total: dim1 + dim2 - 2,
            amps,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim1, self.dim2)
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        if j < self.dim1 && k < self.dim2 {
            self.amps[j * self.dim2 + k]
        } else {
            ZERO
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<(-1)^{n_2}>` on the second mode.
    pub fn parity_second(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.dim1 {
            for k in 0..self.dim2 {
                let w = self.amps[j * self.dim2 + k].norm_sqr();
                acc += if k % 2 == 0 { w } else { -w };
            }
        }
        acc
    }

    /// Probability of each total photon number `0..=max_total`.
    pub fn total_number_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.max_total + 1];
        for j in 0..self.dim1 {
            for k in 0..self.dim2 {
                if j + k <= self.max_total {
                    out[j + k] += self.amps[j * self.dim2 + k].norm_sqr();
                }
            }
        }
        out
    }

    /// Multiplies `|j, k>` by `exp(i phi (j - k) / 2)`, the action of `exp(i phi J3)`.
    pub fn apply_phase(&self, phi: f64) -> Self {
        let mut out = self.clone();
        for j in 0..self.dim1 {
            for k in 0..self.dim2 {
                let angle = 0.5 * phi * (j as f64 - k as f64);
                out.amps[j * self.dim2 + k] *= Complex64::from_polar(1.0, angle);
            }
        }
        out
    }

    /// Projects the second mode on `|n>`: returns the normalized conditional
    /// state of the first mode and the probability.
    pub fn herald(&self, n: usize) -> Result<(FockVector, f64)> {
        let column: Vec<Complex64> = (0..self.dim1).map(|j| self.get(j, n)).collect();
        let v = FockVector::from_amplitudes(column);
        let probability = v.norm_sqr();
        if probability < 1e-14 {
            return Err(Error::HeraldImpossible(probability));
        }
        Ok((v.normalized()?, probability))
    }
}

/// A passive two-mode linear-optics unitary, defined by its action on the
/// creation operators, `U a_i^dag U^dag = sum_j v[j][i] a_j^dag`.
///
/// The matrix is generated one block of fixed total photon number at a time:
/// each `U |j, N-j>` is a weighted sum of transformed creation operators
/// acting on two columns of block `N-1`. No matrix exponential is involved,
/// and only two blocks are ever held in memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeUnitary {
    v: [[Complex64; 2]; 2],
}

impl TwoModeUnitary {
    pub fn new(v: [[Complex64; 2]; 2]) -> Self {
        Self { v }
    }

    /// Beam splitter with transmissivity `tau` acting on (signal, ancilla):
    /// `a_1^dag -> t a_1^dag - t' a_2^dag`, `a_2^dag -> t' a_1^dag + t a_2^dag`,
    /// so `|1, 0> -> t |1, 0> - t' |0, 1>`.
    pub fn beam_splitter(tau: f64) -> Self {
        let t = Complex64::new(tau.sqrt(), 0.0);
        let tp = Complex64::new((1.0 - tau).sqrt(), 0.0);
        Self::new([[t, tp], [-tp, t]])
    }

    /// `exp(i theta J1)` with `J1 = (a1^dag a2 + a1 a2^dag)/2`.
    pub fn j1_rotation(theta: f64) -> Self {
        let c = Complex64::new((0.5 * theta).cos(), 0.0);
        let s = Complex64::new(0.0, (0.5 * theta).sin());
        Self::new([[c, s], [s, c]])
    }

    /// `exp(-i theta J2)` with `J2 = (a1^dag a2 - a1 a2^dag)/(2i)`.
    pub fn j2_rotation(theta: f64) -> Self {
        let c = Complex64::new((0.5 * theta).cos(), 0.0);
        let s = Complex64::new((0.5 * theta).sin(), 0.0);
        Self::new([[c, -s], [s, c]])
    }

    pub fn mode_matrix(&self) -> [[Complex64; 2]; 2] {
        self.v
    }

    fn next_block(&self, prev: &[Complex64], total: usize) -> Vec<Complex64> {
        let size = total + 1;
        let mut block = vec![ZERO; size * size];
        // |j, k> = (sqrt(j) a1^dag |j-1, k> + sqrt(k) a2^dag |j, k-1>) / (j + k),
        // transported through U; the averaged form keeps rounding errors from growing.
        let inv = 1.0 / total as f64;
        for j in 0..=total {
            let k = total - j;
            let mut sources = [(0usize, 0usize, 0.0f64); 2];
            let mut count = 0;
            if j >= 1 {
                sources[count] = (j - 1, 0, (j as f64).sqrt());
                count += 1;
            }
            if k >= 1 {
                sources[count] = (j, 1, (k as f64).sqrt());
                count += 1;
            }
            for &(src, col, weight) in &sources[..count] {
                let (c1, c2) = (self.v[0][col] * weight * inv, self.v[1][col] * weight * inv);
                for p in 0..total {
                    let x = prev[p * total + src];
                    if x == ZERO {
                        continue;
                    }
                    // a1^dag: |p, total-1-p> -> sqrt(p+1) |p+1, total-1-p>
                    block[(p + 1) * size + j] += c1 * x * ((p + 1) as f64).sqrt();
                    // a2^dag: |p, total-1-p> -> sqrt(total-p) |p, total-p>
                    block[p * size + j] += c2 * x * ((total - p) as f64).sqrt();
                }
            }
        }
        block
    }

    /// Dense block for total photon number `total`, row-major with entry
    /// `[p][j] = <p, N-p| U |j, N-j>`.
    pub fn block(&self, total: usize) -> Vec<Complex64> {
        let mut b = vec![Complex64::new(1.0, 0.0)];
        for t in 1..=total {
            b = self.next_block(&b, t);
        }
        b
    }

    pub fn apply(&self, st: &TwoModeFock) -> TwoModeFock {
        let top = st.max_total;
        let dim = top + 1;
        let mut out = vec![ZERO; dim * dim];
        let mut input = Vec::with_capacity(dim);
        let mut block = vec![Complex64::new(1.0, 0.0)];
        for total in 0..=top {
            if total > 0 {
                block = self.next_block(&block, total);
            }
            input.clear();
            input.extend((0..=total).map(|j| st.get(j, total - j)));
            if input.iter().all(|a| *a == ZERO) {
                continue;
            }
            for p in 0..=total {
                let row = &block[p * (total + 1)..(p + 1) * (total + 1)];
                let acc: Complex64 = row.iter().zip(&input).map(|(u, x)| u * x).sum();
                out[p * dim + (total - p)] = acc;
            }
        }
        TwoModeFock {
            dim1: dim,
            dim2: dim,
            max_total: top,
            amps: out,
        }
    }
}

/// Mixes a signal with an ancilla on a splitter of transmissivity `tau`.
pub fn beam_splitter_apply(st: &TwoModeFock, tau: f64) -> Result<TwoModeFock> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "tau = {tau} outside [0, 1]"
        )));
    }
    Ok(TwoModeUnitary::beam_splitter(tau).apply(st))
}

/// Free-function form of [`TwoModeFock::herald`].
pub fn herald(st: &TwoModeFock, n: usize) -> Result<(FockVector, f64)> {
    st.herald(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn random_state(seed: u64, c1: usize, c2: usize) -> TwoModeFock {
        // xorshift; only needs to be deterministic.
        let mut x = seed;
        let mut next = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x % 10_000) as f64 / 10_000.0 - 0.5
        };
        let a: Vec<Complex64> = (0..=c1).map(|_| Complex64::new(next(), next())).collect();
        let b: Vec<Complex64> = (0..=c2).map(|_| Complex64::new(next(), next())).collect();
        TwoModeFock::product(
            &FockVector::from_amplitudes(a).normalized().unwrap(),
            &FockVector::from_amplitudes(b).normalized().unwrap(),
        )
    }

    #[test]
    fn unit_transmissivity_is_identity() {
        let st = random_state(7, 6, 4);
        let out = beam_splitter_apply(&st, 1.0).unwrap();
        for j in 0..=6 {
            for k in 0..=4 {
                assert_relative_eq!((out.get(j, k) - st.get(j, k)).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn single_photon_block() {
        let tau: f64 = 0.7;
        let st = TwoModeFock::product(&FockVector::number(1, 1), &FockVector::vacuum(1));
        let out = beam_splitter_apply(&st, tau).unwrap();
        assert_relative_eq!(out.get(1, 0).re, tau.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(out.get(0, 1).re, -(1.0 - tau).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn blocks_are_unitary() {
        let u = TwoModeUnitary::j1_rotation(1.1);
        for total in [0, 1, 7, 30, 60, 200] {
            let size = total + 1;
            let block = u.block(total);
            for a in 0..size {
                for b in 0..size {
                    let dot: Complex64 = (0..size)
                        .map(|p| block[p * size + a].conj() * block[p * size + b])
                        .sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (dot - want).norm() < 1e-12,
                        "block {total} ({a},{b}): {dot}"
                    );
                }
            }
        }
    }

    #[test]
    fn photon_number_is_conserved() {
        let st = random_state(11, 8, 9);
        let before = st.total_number_distribution();
        let out = beam_splitter_apply(&st, 0.37).unwrap();
        let after = out.total_number_distribution();
        for (a, b) in before.iter().zip(&after) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
        assert_relative_eq!(out.norm_sqr(), st.norm_sqr(), epsilon = 1e-13);
    }

    #[test]
    fn j1_sandwich_equals_j2_rotation() {
        let phi = 0.83;
        let st = random_state(3, 7, 7);
        let top = st.max_total();
        let a = TwoModeUnitary::j1_rotation(std::f64::consts::FRAC_PI_2).apply(&st);
        let a = a.apply_phase(phi);
        let a = TwoModeUnitary::j1_rotation(-std::f64::consts::FRAC_PI_2).apply(&a);
        let b = TwoModeUnitary::j2_rotation(phi).apply(&st);
        for j in 0..=top {
            for k in 0..=top - j {
                assert!((a.get(j, k) - b.get(j, k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_herald() {
        let st = TwoModeFock::product(&FockVector::vacuum(2), &FockVector::vacuum(2));
        let (v, p) = st.herald(0).unwrap();
        assert_relative_eq!(p, 1.0, epsilon = 1e-15);
        assert_eq!(v.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(matches!(st.herald(1), Err(Error::HeraldImpossible(_))));
    }

    #[test]
    fn single_photon_reflection_probability() {
        let st = TwoModeFock::product(&FockVector::vacuum(1), &FockVector::number(1, 1));
        let out = beam_splitter_apply(&st, 0.7).unwrap();
        let (_, p) = out.herald(1).unwrap();
        assert_relative_eq!(p, 0.7, epsilon = 1e-15);
        let (v, p0) = out.herald(0).unwrap();
        assert_relative_eq!(p0, 0.3, epsilon = 1e-15);
        assert_relative_eq!(v.amplitudes()[1].norm(), 1.0, epsilon = 1e-15);
    }
}
