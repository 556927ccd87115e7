use num_complex::Complex64;

use super::state::TwoModeState;

/// First and second moments entering the EPR total variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet {
    /// `⟨a⟩`
    pub mean_a: Complex64,
    /// `⟨b⟩`
    pub mean_b: Complex64,
    /// `⟨a†a⟩`
    pub n_a: Complex64,
    /// `⟨b†b⟩`
    pub n_b: Complex64,
    /// `⟨ab⟩`
    pub ab: Complex64,
    /// `⟨a†b†⟩`
    pub a_dag_b_dag: Complex64,
}

impl TwoModeState {
    /// Direct contraction of the ladder operators against the amplitudes.
    /// The state is assumed normalized.
    pub fn moments(&self) -> MomentSet {
        let k = self.cutoff();
        let psi = self.amplitudes();
        let zero = Complex64::new(0.0, 0.0);
        let (mut mean_a, mut mean_b, mut n_a, mut n_b, mut ab, mut adbd) =
            (zero, zero, zero, zero, zero, zero);
        for i in 0..=k {
            let si = (i as f64).sqrt();
            for j in 0..=k {
                let c = psi[(i, j)];
                if c == zero {
                    continue;
                }
                let sj = (j as f64).sqrt();
                let w = c.norm_sqr();
                n_a += w * i as f64;
                n_b += w * j as f64;
                if i >= 1 {
                    // ⟨i-1, j| ... a|i, j⟩
                    mean_a += psi[(i - 1, j)].conj() * c * si;
                }
                if j >= 1 {
                    mean_b += psi[(i, j - 1)].conj() * c * sj;
                }
                if i >= 1 && j >= 1 {
                    ab += psi[(i - 1, j - 1)].conj() * c * si * sj;
                }
                if i < k && j < k {
                    let s = ((i + 1) as f64).sqrt() * ((j + 1) as f64).sqrt();
                    adbd += psi[(i + 1, j + 1)].conj() * c * s;
                }
            }
        }
        MomentSet {
            mean_a,
            mean_b,
            n_a,
            n_b,
            ab,
            a_dag_b_dag: adbd,
        }
    }
}
