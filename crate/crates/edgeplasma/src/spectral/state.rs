//! Dense spectral coefficient container for the two-component field.
//!
//! Component `l` of the field is expanded as
//! `u_l(x) = sum_{k1=1..K1} sum_{k2=-K2..K2} c_l(k1,k2) sin(k1 pi x1/L1) exp(2 pi i k2 x2/L2)`.
//! A field is real iff `c_l(k1,-k2) = conj(c_l(k1,k2))` (the *reality
//! invariant*).  States are allowed to be complexified (e.g. eigenfunction
//! seeds used in normal-form assembly), so the invariant is checked and
//! enforced explicitly rather than baked into the storage.

use ndarray::{Array3, ArrayView2, ArrayViewMut2, Axis};
use num_complex::Complex64;

/// Spectral coefficients of both field components on the truncation
/// `k1 in 1..=k1_max`, `k2 in -k2_max..=k2_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralState {
    k1_max: usize,
    k2_max: usize,
    /// Layout: `data[component][k1 - 1][k2 + k2_max]`.
    data: Array3<Complex64>,
}

impl SpectralState {
    /// Zero state on the given truncation (`k1_max >= 1`).
    pub fn new(k1_max: usize, k2_max: usize) -> Self {
        assert!(k1_max >= 1, "truncation needs k1_max >= 1");
        Self {
            k1_max,
            k2_max,
            data: Array3::zeros((2, k1_max, 2 * k2_max + 1)),
        }
    }

    pub fn k1_max(&self) -> usize {
        self.k1_max
    }

    pub fn k2_max(&self) -> usize {
        self.k2_max
    }

    /// Zero state with the same truncation.
    pub fn zeros_like(&self) -> Self {
        Self::new(self.k1_max, self.k2_max)
    }

    #[inline]
    fn col(&self, k2: i32) -> usize {
        let c = k2 + self.k2_max as i32;
        assert!(
            c >= 0 && (c as usize) < 2 * self.k2_max + 1,
            "k2 = {k2} outside truncation |k2| <= {}",
            self.k2_max
        );
        c as usize
    }

    /// Coefficient of component `comp` (0 or 1) at mode `(k1, k2)`.
    #[inline]
    pub fn get(&self, comp: usize, k1: u32, k2: i32) -> Complex64 {
        assert!(comp < 2 && k1 >= 1 && k1 as usize <= self.k1_max);
        self.data[[comp, k1 as usize - 1, self.col(k2)]]
    }

    /// Coefficient, or zero when the mode lies outside the truncation.
    #[inline]
    pub fn get_or_zero(&self, comp: usize, k1: u32, k2: i32) -> Complex64 {
        if comp < 2
            && k1 >= 1
            && (k1 as usize) <= self.k1_max
            && k2.unsigned_abs() as usize <= self.k2_max
        {
            self.data[[comp, k1 as usize - 1, (k2 + self.k2_max as i32) as usize]]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    #[inline]
    pub fn set(&mut self, comp: usize, k1: u32, k2: i32, v: Complex64) {
        assert!(comp < 2 && k1 >= 1 && k1 as usize <= self.k1_max);
        let c = self.col(k2);
        self.data[[comp, k1 as usize - 1, c]] = v;
    }

    /// View of one component with layout `[k1-1][k2 + k2_max]`.
    pub fn component(&self, comp: usize) -> ArrayView2<'_, Complex64> {
        self.data.index_axis(Axis(0), comp)
    }

    pub fn component_mut(&mut self, comp: usize) -> ArrayViewMut2<'_, Complex64> {
        self.data.index_axis_mut(Axis(0), comp)
    }

    /// Iterate `(comp, k1, k2, coefficient)` over all stored modes.
    pub fn iter_modes(&self) -> impl Iterator<Item = (usize, u32, i32, Complex64)> + '_ {
        let k2_max = self.k2_max as i32;
        self.data.indexed_iter().map(move |((l, r, c), &v)| {
            (l, (r + 1) as u32, c as i32 - k2_max, v)
        })
    }

    /// Largest coefficient magnitude.
    pub fn sup_coeff(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of the reality invariant
    /// `c(k1,-k2) = conj(c(k1,k2))`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for l in 0..2 {
            for r in 0..self.k1_max {
                for k2 in 0..=self.k2_max as i32 {
                    let a = self.data[[l, r, (k2 + self.k2_max as i32) as usize]];
                    let b = self.data[[l, r, (self.k2_max as i32 - k2) as usize]];
                    worst = worst.max((a - b.conj()).norm());
                }
            }
        }
        worst
    }

    /// Project onto the reality manifold: replace each `+k2 / -k2` pair by
    /// its conjugate-symmetric part.  Idempotent; a no-op (to rounding) on
    /// states already satisfying the invariant.
    pub fn enforce_reality(&mut self) {
        for l in 0..2 {
            for r in 0..self.k1_max {
                for k2 in 0..=self.k2_max as i32 {
                    let ci = (k2 + self.k2_max as i32) as usize;
                    let cj = (self.k2_max as i32 - k2) as usize;
                    let a = self.data[[l, r, ci]];
                    let b = self.data[[l, r, cj]];
                    let avg = (a + b.conj()) * 0.5;
                    self.data[[l, r, ci]] = avg;
                    self.data[[l, r, cj]] = avg.conj();
                }
            }
        }
    }

    /// Coefficients of the complex-conjugated *field*: if `self` represents
    /// `u`, the result represents `conj(u)` (equal to `u` for real fields).
    pub fn conjugate_field(&self) -> Self {
        let mut out = self.zeros_like();
        for (l, k1, k2, v) in self.iter_modes() {
            out.set(l, k1, -k2, v.conj());
        }
        out
    }

    /// `self += factor * other` (matching truncations required).
    pub fn add_scaled(&mut self, other: &Self, factor: Complex64) {
        assert_eq!(self.k1_max, other.k1_max);
        assert_eq!(self.k2_max, other.k2_max);
        self.data.zip_mut_with(&other.data, |a, &b| *a += factor * b);
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&mut self, factor: Complex64) {
        self.data.mapv_inplace(|c| c * factor);
    }

    /// Copy into a (possibly) different truncation, dropping or
    /// zero-padding modes as needed.
    pub fn resized(&self, k1_max: usize, k2_max: usize) -> Self {
        let mut out = Self::new(k1_max, k2_max);
        for (l, k1, k2, v) in self.iter_modes() {
            if k1 as usize <= k1_max && k2.unsigned_abs() as usize <= k2_max {
                out.set(l, k1, k2, v);
            }
        }
        out
    }
}
