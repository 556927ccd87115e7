use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{Mode, SingleModeState, TwoModeState};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest `|α|²` accepted by [`SingleModeState::displace`] and the state
/// constructors: `cutoff / 4`.
pub fn displacement_limit(cutoff: usize) -> f64 {
    cutoff as f64 / 4.0
}

pub(crate) fn check_displacement(alpha: Complex64, cutoff: usize) -> Result<()> {
    let amplitude_sq = alpha.norm_sqr();
    let limit = displacement_limit(cutoff);
    if amplitude_sq > limit {
        return Err(Error::CutoffTooSmall {
            cutoff,
            amplitude_sq,
            limit,
        });
    }
    Ok(())
}

/// Matrix elements `⟨m|D(α)|n⟩` for `m, n < dim`.
///
/// For `m = n + k`, `⟨m|D|n⟩ = e^{ikθ} g_n^{(k)}` and
/// `⟨n|D|m⟩ = (−1)^k e^{−ikθ} g_n^{(k)}` with `α = |α|e^{iθ}`, `x = |α|²` and
/// `g_n^{(k)} = √(n!/(n+k)!) x^{k/2} e^{−x/2} L_n^{(k)}(x)`. Each diagonal is
/// filled by the Laguerre three-term recurrence in normalized form:
/// `√((n+1)(n+k+1)) g_{n+1} = (2n+1+k−x) g_n − √(n(n+k)) g_{n−1}`.
/// The entries are those of the untruncated operator; only the basis is cut.
pub fn displacement_matrix(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut d = DMatrix::from_element(dim, dim, ZERO);
    let x = alpha.norm_sqr();
    let theta = alpha.arg();
    for k in 0..dim {
        let len = dim - k;
        let mut g = vec![0.0; len];
        g[0] = if x > 0.0 {
            (0.5 * k as f64 * x.ln() - x / 2.0 - 0.5 * ln_factorial(k)).exp()
        } else if k == 0 {
            1.0
        } else {
            0.0
        };
        let kf = k as f64;
        if len > 1 {
            g[1] = (1.0 + kf - x) * g[0] / (kf + 1.0).sqrt();
        }
        for n in 1..len.saturating_sub(1) {
            let nf = n as f64;
            g[n + 1] = ((2.0 * nf + 1.0 + kf - x) * g[n] - (nf * (nf + kf)).sqrt() * g[n - 1])
                / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
        }
        let lower = Complex64::from_polar(1.0, kf * theta);
        let upper = if k % 2 == 0 {
            lower.conj()
        } else {
            -lower.conj()
        };
        for (n, &v) in g.iter().enumerate() {
            d[(n + k, n)] = lower * v;
            if k > 0 {
                d[(n, n + k)] = upper * v;
            }
        }
    }
    d
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

impl SingleModeState {
    /// `D(α)|ψ⟩` in the truncated basis.
    pub fn displace(&self, alpha: Complex64) -> Result<SingleModeState> {
        check_displacement(alpha, self.cutoff())?;
        if alpha == ZERO {
            return Ok(self.clone());
        }
        let d = displacement_matrix(alpha, self.cutoff() + 1);
        Ok(SingleModeState::from_vector(
            &d * self.amplitudes(),
            self.truncation_loss(),
        ))
    }
}

impl TwoModeState {
    /// Annihilation operator on one mode; the result is not renormalized and
    /// may be the zero vector.
    pub fn annihilate(&self, mode: Mode) -> TwoModeState {
        let k = self.cutoff();
        let src = self.amplitudes();
        let mut out = DMatrix::from_element(k + 1, k + 1, ZERO);
        for n in 0..k {
            let s = ((n + 1) as f64).sqrt();
            for j in 0..=k {
                match mode {
                    Mode::A => out[(n, j)] = src[(n + 1, j)] * s,
                    Mode::B => out[(j, n)] = src[(j, n + 1)] * s,
                }
            }
        }
        TwoModeState::from_matrix(out, self.truncation_loss())
    }

    /// Creation operator on one mode; not renormalized. Amplitude pushed past
    /// the cutoff is dropped and its relative weight recorded as truncation loss.
    pub fn create(&self, mode: Mode, tail_tolerance: f64) -> Result<TwoModeState> {
        let k = self.cutoff();
        let src = self.amplitudes();
        let mut out = DMatrix::from_element(k + 1, k + 1, ZERO);
        let mut dropped = 0.0;
        let top = ((k + 1) as f64).sqrt();
        for j in 0..=k {
            match mode {
                Mode::A => dropped += (src[(k, j)] * top).norm_sqr(),
                Mode::B => dropped += (src[(j, k)] * top).norm_sqr(),
            }
        }
        for n in 0..k {
            let s = ((n + 1) as f64).sqrt();
            for j in 0..=k {
                match mode {
                    Mode::A => out[(n + 1, j)] = src[(n, j)] * s,
                    Mode::B => out[(j, n + 1)] = src[(j, n)] * s,
                }
            }
        }
        let kept: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        let total = kept + dropped;
        let loss = if total > 0.0 { dropped / total } else { 0.0 };
        if loss > tail_tolerance {
            return Err(Error::TruncationOverflow {
                dropped: loss,
                tolerance: tail_tolerance,
            });
        }
        Ok(TwoModeState::from_matrix(
            out,
            self.truncation_loss() + loss,
        ))
    }

    /// Applies `count` annihilations on `mode`.
    pub fn annihilate_n(&self, mode: Mode, count: usize) -> TwoModeState {
        (0..count).fold(self.clone(), |s, _| s.annihilate(mode))
    }

    /// 50:50 beam splitter with `B a† B† = (a† − b†)/√2`, `B b† B† = (a† + b†)/√2`.
    ///
    /// The unitary conserves total photon number, so it acts block by block on
    /// the shells `n_A + n_B = N`. Outputs that land outside the square
    /// truncation are dropped and counted as truncation loss.
    pub fn beam_splitter_50_50(&self, tail_tolerance: f64) -> Result<TwoModeState> {
        let k = self.cutoff();
        let src = self.amplitudes();
        let max_total = (0..=2 * k)
            .rev()
            .find(|&n| {
                let lo = n.saturating_sub(k);
                let hi = n.min(k);
                (lo..=hi).any(|j| src[(j, n - j)] != ZERO)
            })
            .unwrap_or(0);
        let blocks = BeamSplitterBlocks::new(max_total);

        let mut out = DMatrix::from_element(k + 1, k + 1, ZERO);
        let mut dropped = 0.0;
        let mut total = 0.0;
        let mut shell = Vec::new();
        for n in 0..=max_total {
            shell.clear();
            shell.resize(n + 1, ZERO);
            let lo = n.saturating_sub(k);
            let hi = n.min(k);
            let mut any = false;
            for col in lo..=hi {
                let amp = src[(col, n - col)];
                if amp == ZERO {
                    continue;
                }
                any = true;
                for (row, slot) in shell.iter_mut().enumerate() {
                    *slot += amp * blocks.get(n, row, col);
                }
            }
            if !any {
                continue;
            }
            for (row, value) in shell.iter().enumerate() {
                let w = value.norm_sqr();
                total += w;
                if row <= k && n - row <= k {
                    out[(row, n - row)] = *value;
                } else {
                    dropped += w;
                }
            }
        }
        let loss = if total > 0.0 { dropped / total } else { 0.0 };
        if loss > tail_tolerance {
            return Err(Error::TruncationOverflow {
                dropped: loss,
                tolerance: tail_tolerance,
            });
        }
        Ok(TwoModeState::from_matrix(
            out,
            self.truncation_loss() + loss,
        ))
    }
}

/// Photon-number-conserving blocks of the beam-splitter unitary.
///
/// `blocks[N][(j, k)] = ⟨j, N−j| B |k, N−k⟩`. Column `k` of block `N` is
/// `(c†)^{N−k} (d†)^k |0,0⟩ / √((N−k)! k!)` with `d† = (a† − b†)/√2` and
/// `c† = (a† + b†)/√2`; it is built from block `N−1` by one more ladder
/// application, which keeps every intermediate vector normalized.
pub(crate) struct BeamSplitterBlocks {
    blocks: Vec<Vec<f64>>,
}

impl BeamSplitterBlocks {
    pub(crate) fn new(max_total: usize) -> Self {
        let mut blocks: Vec<Vec<f64>> = Vec::with_capacity(max_total + 1);
        blocks.push(vec![1.0]);
        for n in 1..=max_total {
            let prev = &blocks[n - 1];
            let dim = n + 1;
            let mut cur = vec![0.0; dim * dim];
            for col in 0..dim {
                // column col of block n from column (col-1) via d†, or column 0 via c†
                let (src_col, sign, count) = if col == 0 {
                    (0, 1.0, n)
                } else {
                    (col - 1, -1.0, col)
                };
                let norm = 1.0 / (2.0 * count as f64).sqrt();
                for row in 0..dim {
                    // a† raises photons in A: row-1 -> row, factor sqrt(row)
                    let from_a = if row >= 1 {
                        (row as f64).sqrt() * prev[(row - 1) * n + src_col]
                    } else {
                        0.0
                    };
                    // b† raises photons in B at fixed A count: factor sqrt(n - row)
                    let from_b = if row < n {
                        ((n - row) as f64).sqrt() * prev[row * n + src_col]
                    } else {
                        0.0
                    };
                    cur[row * dim + col] = (from_a + sign * from_b) * norm;
                }
            }
            blocks.push(cur);
        }
        Self { blocks }
    }

    #[inline]
    pub(crate) fn get(&self, total: usize, row: usize, col: usize) -> f64 {
        self.blocks[total][row * (total + 1) + col]
    }
}

/// Coherent-state amplitudes `e^{−|α|²/2} αⁿ/√n!` without renormalization.
pub fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(cutoff + 1, ZERO);
    v[0] = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 1..=cutoff {
        v[n] = v[n - 1] * alpha / (n as f64).sqrt();
    }
    v
}
