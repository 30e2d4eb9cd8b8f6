//! Physical-space sample containers.

use ndarray::Array2;

/// Real samples of the two-component field on the tensor grid
/// `x1 = j L1/n1` (j = 0..=n1, including both walls) by
/// `x2 = m L2/n2` (m = 0..n2, periodic).
#[derive(Clone, Debug)]
pub struct GridField {
    pub l1: f64,
    pub l2: f64,
    /// `(n1 + 1) x n2` samples of the first component.
    pub u1: Array2<f64>,
    pub u2: Array2<f64>,
}

impl GridField {
    pub fn zeros(l1: f64, l2: f64, n1: usize, n2: usize) -> Self {
        Self {
            l1,
            l2,
            u1: Array2::zeros((n1 + 1, n2)),
            u2: Array2::zeros((n1 + 1, n2)),
        }
    }

    /// Number of `x1` intervals (rows minus one).
    pub fn n1(&self) -> usize {
        self.u1.nrows() - 1
    }

    pub fn n2(&self) -> usize {
        self.u1.ncols()
    }

    pub fn x1(&self, j: usize) -> f64 {
        self.l1 * j as f64 / self.n1() as f64
    }

    pub fn x2(&self, m: usize) -> f64 {
        self.l2 * m as f64 / self.n2() as f64
    }

    /// Largest absolute sample of the first component.
    pub fn sup_u1(&self) -> f64 {
        self.u1.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Largest absolute sample over both components.
    pub fn sup_norm(&self) -> f64 {
        self.sup_u1()
            .max(self.u2.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }

    /// Largest wall sample; the Dirichlet condition demands zero.
    pub fn dirichlet_defect(&self) -> f64 {
        let n1 = self.n1();
        let mut worst = 0.0f64;
        for arr in [&self.u1, &self.u2] {
            for m in 0..self.n2() {
                worst = worst.max(arr[[0, m]].abs()).max(arr[[n1, m]].abs());
            }
        }
        worst
    }
}

/// Real samples of a two-component *vector* field (a velocity or gradient)
/// on the same grid convention as [`GridField`].
#[derive(Clone, Debug)]
pub struct VectorGridField {
    pub l1: f64,
    pub l2: f64,
    /// First vector component.
    pub c1: Array2<f64>,
    /// Second vector component; for the electric field this vanishes at the
    /// walls `x1 = 0, L1`.
    pub c2: Array2<f64>,
}

impl VectorGridField {
    pub fn n1(&self) -> usize {
        self.c1.nrows() - 1
    }

    pub fn n2(&self) -> usize {
        self.c1.ncols()
    }
}
