//! Fast transforms between spectral coefficients and grid samples.
//!
//! The `x2` direction is plain periodic Fourier.  The `x1` direction uses
//! the sine family `sin(k1 pi x1/L1)` for the fields (Dirichlet walls) and
//! the cosine family `cos(k1 pi x1/L1)` for `x1`-derivatives and the first
//! velocity component; both are evaluated through a length-`2 n1` complex
//! FFT of the odd (resp. even) extension.  All paths are complex-valued so
//! that complexified states (eigenfunction seeds) transform exactly.
//!
//! Products of two fields with modes up to `K` contain modes up to `2K`;
//! the dealiased grid sizes returned by [`dealiased_sizes`] follow the 3/2
//! rule so that after a pointwise product the retained modes `<= K` are
//! alias-free.

use super::grid::GridField;
use super::state::SpectralState;
use crate::domain::DomainConfig;
use crate::error::{Error, Result};
use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Which `x1` basis family a coefficient table refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum X1Kind {
    /// `sin(k1 pi x1 / L1)`, `k1 >= 1`.
    Sine,
    /// `cos(k1 pi x1 / L1)`, `k1 >= 1`.
    Cosine,
}

/// Grid sizes for alias-free quadratic products of states truncated at
/// `(k1_max, k2_max)`: `n1 = 3 k1_max / 2 + 2`, `n2 = 3 k2_max + 4`.
pub fn dealiased_sizes(k1_max: usize, k2_max: usize) -> (usize, usize) {
    (3 * k1_max / 2 + 2, 3 * k2_max + 4)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Reusable FFT plans and buffers for one grid size.
pub struct SpectralEngine {
    n1: usize,
    n2: usize,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
    buf1: Vec<Complex64>,
    scratch1: Vec<Complex64>,
    buf2: Vec<Complex64>,
    scratch2: Vec<Complex64>,
}

impl SpectralEngine {
    /// Engine for the grid `x1 = j L1/n1` (j = 0..=n1) by `x2 = m L2/n2`.
    pub fn new(n1: usize, n2: usize) -> Self {
        assert!(n1 >= 2 && n2 >= 1, "grid too small: {n1} x {n2}");
        let mut planner = FftPlanner::new();
        let fwd1 = planner.plan_fft_forward(2 * n1);
        let inv1 = planner.plan_fft_inverse(2 * n1);
        let fwd2 = planner.plan_fft_forward(n2);
        let inv2 = planner.plan_fft_inverse(n2);
        let s1 = fwd1
            .get_inplace_scratch_len()
            .max(inv1.get_inplace_scratch_len());
        let s2 = fwd2
            .get_inplace_scratch_len()
            .max(inv2.get_inplace_scratch_len());
        Self {
            n1,
            n2,
            fwd1,
            inv1,
            fwd2,
            inv2,
            buf1: vec![ZERO; 2 * n1],
            scratch1: vec![ZERO; s1],
            buf2: vec![ZERO; n2],
            scratch2: vec![ZERO; s2],
        }
    }

    /// Engine on the dealiased grid for the given truncation.
    pub fn for_truncation(k1_max: usize, k2_max: usize) -> Self {
        let (n1, n2) = dealiased_sizes(k1_max, k2_max);
        Self::new(n1, n2)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Evaluate a coefficient table (layout `[k1-1][k2 + k2_max]`) on the
    /// grid, returning `(n1 + 1) x n2` complex samples.
    pub fn synth(&mut self, coeffs: ArrayView2<Complex64>, kind: X1Kind) -> Array2<Complex64> {
        let k1_max = coeffs.nrows();
        let cols = coeffs.ncols();
        assert!(cols % 2 == 1, "coefficient table must have odd column count");
        let k2_max = (cols - 1) / 2;
        assert!(k1_max < self.n1, "x1 grid {} cannot hold k1_max {}", self.n1, k1_max);
        assert!(2 * k2_max < self.n2, "x2 grid {} cannot hold k2_max {}", self.n2, k2_max);

        // x2 synthesis per k1 row.
        let mut tmp = Array2::from_elem((k1_max, self.n2), ZERO);
        for r in 0..k1_max {
            self.buf2.fill(ZERO);
            for c in 0..cols {
                let k2 = c as i64 - k2_max as i64;
                let bin = k2.rem_euclid(self.n2 as i64) as usize;
                self.buf2[bin] += coeffs[[r, c]];
            }
            self.inv2.process_with_scratch(&mut self.buf2, &mut self.scratch2);
            for m in 0..self.n2 {
                tmp[[r, m]] = self.buf2[m];
            }
        }

        // x1 synthesis per grid column via the odd/even extension.
        let mut grid = Array2::from_elem((self.n1 + 1, self.n2), ZERO);
        let half = Complex64::new(0.5, 0.0);
        let half_i = Complex64::new(0.0, 0.5);
        for m in 0..self.n2 {
            self.buf1.fill(ZERO);
            for r in 0..k1_max {
                let k1 = r + 1;
                let v = tmp[[r, m]];
                match kind {
                    X1Kind::Sine => {
                        // sin t = (e^{it} - e^{-it}) / (2i)
                        self.buf1[k1] += -half_i * v;
                        self.buf1[2 * self.n1 - k1] += half_i * v;
                    }
                    X1Kind::Cosine => {
                        self.buf1[k1] += half * v;
                        self.buf1[2 * self.n1 - k1] += half * v;
                    }
                }
            }
            self.inv1.process_with_scratch(&mut self.buf1, &mut self.scratch1);
            for j in 0..=self.n1 {
                grid[[j, m]] = self.buf1[j];
            }
        }
        grid
    }

    /// Project `(n1 + 1) x n2` complex samples onto sine modes
    /// `k1 = 1..=k1_out`, `|k2| <= k2_out`.  Wall rows are ignored (the
    /// sine family vanishes there).
    pub fn analyze_sine(
        &mut self,
        grid: ArrayView2<Complex64>,
        k1_out: usize,
        k2_out: usize,
    ) -> Array2<Complex64> {
        assert_eq!(grid.nrows(), self.n1 + 1, "grid rows mismatch engine");
        assert_eq!(grid.ncols(), self.n2, "grid cols mismatch engine");
        assert!(k1_out < self.n1, "cannot resolve k1_out {} on {} intervals", k1_out, self.n1);
        assert!(2 * k2_out < self.n2, "cannot resolve k2_out {} on {} points", k2_out, self.n2);

        // x1 analysis per column: forward FFT of the odd extension.
        let inv_n1 = 1.0 / self.n1 as f64;
        let mut tmp = Array2::from_elem((k1_out, self.n2), ZERO);
        for m in 0..self.n2 {
            self.buf1[0] = ZERO;
            self.buf1[self.n1] = ZERO;
            for j in 1..self.n1 {
                self.buf1[j] = grid[[j, m]];
                self.buf1[2 * self.n1 - j] = -grid[[j, m]];
            }
            self.fwd1.process_with_scratch(&mut self.buf1, &mut self.scratch1);
            for r in 0..k1_out {
                tmp[[r, m]] = Complex64::new(0.0, inv_n1) * self.buf1[r + 1];
            }
        }

        // x2 analysis per k1 row.
        let inv_n2 = 1.0 / self.n2 as f64;
        let mut coeffs = Array2::from_elem((k1_out, 2 * k2_out + 1), ZERO);
        for r in 0..k1_out {
            for m in 0..self.n2 {
                self.buf2[m] = tmp[[r, m]];
            }
            self.fwd2.process_with_scratch(&mut self.buf2, &mut self.scratch2);
            for c in 0..(2 * k2_out + 1) {
                let k2 = c as i64 - k2_out as i64;
                let bin = k2.rem_euclid(self.n2 as i64) as usize;
                coeffs[[r, c]] = self.buf2[bin] * inv_n2;
            }
        }
        coeffs
    }
}

fn check_resolution(k1_max: usize, k2_max: usize, n1: usize, n2: usize) -> Result<()> {
    if n1 < 2 * k1_max || n2 < 2 * k2_max + 1 {
        return Err(Error::Resolution(format!(
            "grid {n1} x {n2} cannot represent truncation ({k1_max}, {k2_max}); \
             need n1 >= {} and n2 >= {}",
            2 * k1_max,
            2 * k2_max + 1
        )));
    }
    Ok(())
}

/// Evaluate a spectral state on an `(n1 + 1) x n2` real grid.
///
/// Requires `n1 >= 2 k1_max` and `n2 >= 2 k2_max + 1` so the state is fully
/// resolved.  The state is assumed real-symmetric; the imaginary residue of
/// the synthesis is discarded (it is rounding-level under the invariant).
pub fn synthesize(
    cfg: &DomainConfig<f64>,
    state: &SpectralState,
    n1: usize,
    n2: usize,
) -> Result<GridField> {
    check_resolution(state.k1_max(), state.k2_max(), n1, n2)?;
    let mut engine = SpectralEngine::new(n1, n2);
    let g1 = engine.synth(state.component(0), X1Kind::Sine);
    let g2 = engine.synth(state.component(1), X1Kind::Sine);
    Ok(GridField {
        l1: cfg.l1,
        l2: cfg.l2,
        u1: g1.mapv(|z| z.re),
        u2: g2.mapv(|z| z.re),
    })
}

/// Project grid samples onto the truncation `(k1_max, k2_max)`.
///
/// Requires the grid to resolve the requested truncation
/// (`n1 >= 2 k1_max`, `n2 >= 2 k2_max + 1`).  On fields synthesized from a
/// state within the truncation this inverts [`synthesize`] to rounding.
pub fn analyze(field: &GridField, k1_max: usize, k2_max: usize) -> Result<SpectralState> {
    let (n1, n2) = (field.n1(), field.n2());
    check_resolution(k1_max, k2_max, n1, n2)?;
    let mut engine = SpectralEngine::new(n1, n2);
    let mut out = SpectralState::new(k1_max, k2_max);
    for comp in 0..2 {
        let grid = if comp == 0 { &field.u1 } else { &field.u2 };
        let cgrid = grid.mapv(|v| Complex64::new(v, 0.0));
        let coeffs = engine.analyze_sine(cgrid.view(), k1_max, k2_max);
        out.component_mut(comp).assign(&coeffs);
    }
    Ok(out)
}
