//! Discretisation of the prior and wealth axes and interpolation on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::AlphaSearch;
use crate::scalar::Scalar;

/// Placement of the prior nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiSpacing {
    /// Geometric on `[xi_min, 1/2]` plus the node 0, mirrored onto `[1/2, 1]`.
    LogMirrored,
    Uniform,
}

/// Interpolation variable along the wealth axis of the 2-D surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WealthInterp {
    /// Linear in `W` itself.
    Linear,
    /// Linear in `log2 W`; exact for utilities of the form `log2 W + g(xi)`.
    Log2,
}

/// What the 2-D solver does with wealth that leaves the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WealthBoundary {
    /// Map back to the nearest edge with `U(c W) = U(W) + log2 c`.
    Rescale,
    /// Fail with [`Error::OutOfRangeWealth`].
    Strict,
}

/// Resolution of the solver grids.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    /// Prior nodes; odd, so that 0, 1/2 and 1 are all nodes.
    pub n_xi: usize,
    pub xi_spacing: XiSpacing,
    /// Smallest positive prior node under [`XiSpacing::LogMirrored`].
    pub xi_min: T,
    /// Wealth nodes (2-D mode).
    pub n_w: usize,
    pub w_max: T,
    /// Lower end of the wealth axis; `None` means `w_max * 2^-N`.
    pub w_min: Option<T>,
    pub n_alpha_coarse: usize,
    pub alpha_tol: T,
    pub wealth_interp: WealthInterp,
    pub wealth_boundary: WealthBoundary,
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec {
            n_xi: 2001,
            xi_spacing: XiSpacing::LogMirrored,
            xi_min: T::lit(1e-3),
            n_w: 513,
            w_max: T::two(),
            w_min: None,
            n_alpha_coarse: 181,
            alpha_tol: T::lit(1e-10),
            wealth_interp: WealthInterp::Linear,
            wealth_boundary: WealthBoundary::Rescale,
        }
    }
}

impl<T: Scalar> GridSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.n_xi < 3 || self.n_xi % 2 == 0 {
            return bad(format!("n_xi must be odd and >= 3, got {}", self.n_xi));
        }
        if self.xi_spacing == XiSpacing::LogMirrored
            && !(self.xi_min > T::zero() && self.xi_min < T::half())
        {
            return bad(format!("xi_min must lie in (0, 1/2), got {}", self.xi_min));
        }
        if self.n_w < 3 {
            return bad(format!("n_w must be >= 3, got {}", self.n_w));
        }
        if !(self.w_max > T::zero() && self.w_max.is_finite()) {
            return bad(format!("w_max must be > 0, got {}", self.w_max));
        }
        if let Some(w_min) = self.w_min {
            if !(w_min > T::zero() && w_min < self.w_max) {
                return bad(format!("w_min must lie in (0, w_max), got {w_min}"));
            }
        }
        if self.n_alpha_coarse < 8 {
            return bad(format!("n_alpha_coarse must be >= 8, got {}", self.n_alpha_coarse));
        }
        if !(self.alpha_tol > T::zero()) {
            return bad(format!("alpha_tol must be > 0, got {}", self.alpha_tol));
        }
        Ok(())
    }

    /// Same grid in another precision.
    pub fn cast<U: Scalar>(&self) -> GridSpec<U> {
        let c = |x: T| U::lit(x.to_f64_lossy());
        GridSpec {
            n_xi: self.n_xi,
            xi_spacing: self.xi_spacing,
            xi_min: c(self.xi_min),
            n_w: self.n_w,
            w_max: c(self.w_max),
            w_min: self.w_min.map(c),
            n_alpha_coarse: self.n_alpha_coarse,
            alpha_tol: c(self.alpha_tol),
            wealth_interp: self.wealth_interp,
            wealth_boundary: self.wealth_boundary,
        }
    }

    pub fn alpha_search(&self) -> AlphaSearch<T> {
        AlphaSearch::new(self.n_alpha_coarse, self.alpha_tol)
    }

    pub fn xi_axis(&self) -> XiAxis<T> {
        XiAxis::new(self.xi_nodes())
    }

    pub fn xi_nodes(&self) -> Vec<T> {
        let n = self.n_xi;
        let half = (n - 1) / 2;
        let mut lower = Vec::with_capacity(half + 1);
        lower.push(T::zero());
        match self.xi_spacing {
            XiSpacing::Uniform => {
                for i in 1..=half {
                    lower.push(T::half() * T::from_usize_lossy(i) / T::from_usize_lossy(half));
                }
            }
            XiSpacing::LogMirrored => {
                if half == 1 {
                    lower.push(T::half());
                } else {
                    let lo = self.xi_min.ln();
                    let hi = T::half().ln();
                    let span = T::from_usize_lossy(half - 1);
                    for i in 0..half {
                        let t = T::from_usize_lossy(i) / span;
                        lower.push((lo + (hi - lo) * t).exp());
                    }
                }
            }
        }
        lower[half] = T::half();
        let mut nodes = lower.clone();
        nodes.extend(lower[..half].iter().rev().map(|&x| T::one() - x));
        nodes
    }

    /// Resolved lower end of the wealth axis for an `n_steps` game.
    pub fn resolved_w_min(&self, n_steps: usize) -> T {
        self.w_min.unwrap_or_else(|| self.w_max * T::two().powi(-(n_steps as i32)))
    }

    pub fn wealth_axis(&self, n_steps: usize) -> WealthAxis<T> {
        WealthAxis::log_spaced(
            self.resolved_w_min(n_steps),
            self.w_max,
            self.n_w,
            self.wealth_interp,
            self.wealth_boundary,
        )
    }
}

/// Sorted prior nodes on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiAxis<T> {
    nodes: Vec<T>,
    /// `buckets[b]`: cell containing `b / (buckets.len() - 1)`.
    buckets: Vec<u32>,
}

/// Cell index and in-cell weight of a query point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell<T> {
    pub index: usize,
    pub t: T,
}

impl<T: Scalar> XiAxis<T> {
    pub fn new(nodes: Vec<T>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let n_buckets = 4 * nodes.len();
        let buckets = (0..=n_buckets)
            .map(|b| {
                let x = T::from_usize_lossy(b) / T::from_usize_lossy(n_buckets);
                Self::cell_index(&nodes, x) as u32
            })
            .collect();
        XiAxis { nodes, buckets }
    }

    fn cell_index(nodes: &[T], x: T) -> usize {
        nodes.partition_point(|&v| v <= x).clamp(1, nodes.len() - 1) - 1
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Cell containing `x` (clamped to the axis), so that
    /// `x = (1 - t) nodes[index] + t nodes[index + 1]`.
    #[inline]
    pub fn locate(&self, x: T) -> Cell<T> {
        let nodes = &self.nodes;
        let n = nodes.len();
        let x = x.max(nodes[0]).min(nodes[n - 1]);
        let last = self.buckets.len() - 1;
        let b = (x * T::from_usize_lossy(last)).to_usize().unwrap_or(0).min(last - 1);
        let (lo, hi) = (self.buckets[b] as usize, self.buckets[b + 1] as usize);
        let mut index = lo + nodes[lo + 1..=hi].partition_point(|&v| v <= x);
        // Bucket edges are rounded; step to the exact cell.
        while index > 0 && nodes[index] > x {
            index -= 1;
        }
        while index < n - 2 && nodes[index + 1] <= x {
            index += 1;
        }
        let (a, b) = (nodes[index], nodes[index + 1]);
        Cell { index, t: ((x - a) / (b - a)).clamp_unit() }
    }

    /// Piecewise-linear interpolation of `values` (one per node) at `x`.
    #[inline]
    pub fn interp(&self, values: &[T], x: T) -> T {
        let c = self.locate(x);
        lerp(values[c.index], values[c.index + 1], c.t)
    }

    /// Node slopes of the monotone cubic (Fritsch-Carlson) interpolant.
    pub fn pchip_slopes(&self, values: &[T]) -> Vec<T> {
        let x = &self.nodes;
        let n = x.len();
        let secant: Vec<T> = (0..n - 1).map(|i| (values[i + 1] - values[i]) / (x[i + 1] - x[i])).collect();
        let mut d = vec![T::zero(); n];
        for i in 1..n - 1 {
            let (s0, s1) = (secant[i - 1], secant[i]);
            if s0 * s1 > T::zero() {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                let (w0, w1) = (T::two() * h1 + h0, h1 + T::two() * h0);
                d[i] = (w0 + w1) / (w0 / s0 + w1 / s1);
            }
        }
        let end = |h0: T, h1: T, s0: T, s1: T| {
            let e = ((T::two() * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
            if e * s0 <= T::zero() {
                T::zero()
            } else if s0 * s1 <= T::zero() && e.abs() > T::lit(3.0) * s0.abs() {
                T::lit(3.0) * s0
            } else {
                e
            }
        };
        if n > 2 {
            d[0] = end(x[1] - x[0], x[2] - x[1], secant[0], secant[1]);
            d[n - 1] = end(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], secant[n - 2], secant[n - 3]);
        } else {
            d[0] = secant[0];
            d[1] = secant[0];
        }
        d
    }

    /// Cubic Hermite interpolation with node slopes from [`Self::pchip_slopes`].
    #[inline]
    pub fn interp_hermite(&self, values: &[T], slopes: &[T], x: T) -> T {
        let c = self.locate(x);
        let i = c.index;
        if c.t == T::zero() {
            return values[i];
        }
        if c.t == T::one() {
            return values[i + 1];
        }
        let h = self.nodes[i + 1] - self.nodes[i];
        let t = c.t;
        let t2 = t * t;
        let t3 = t2 * t;
        let three = T::lit(3.0);
        let h00 = T::two() * t3 - three * t2 + T::one();
        let h10 = t3 - T::two() * t2 + t;
        let h01 = three * t2 - T::two() * t3;
        let h11 = t3 - t2;
        h00 * values[i] + h10 * h * slopes[i] + h01 * values[i + 1] + h11 * h * slopes[i + 1]
    }
}

#[inline]
pub fn lerp<T: Scalar>(a: T, b: T, t: T) -> T {
    if t == T::zero() {
        a
    } else if t == T::one() {
        b
    } else {
        a + (b - a) * t
    }
}

/// Geometrically spaced wealth nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct WealthAxis<T> {
    nodes: Vec<T>,
    log2_min: T,
    /// Spacing in log2 units.
    log2_step: T,
    /// `2^log2_step - 1`.
    growth: T,
    pub interp: WealthInterp,
    pub boundary: WealthBoundary,
}

impl<T: Scalar> WealthAxis<T> {
    pub fn log_spaced(w_min: T, w_max: T, n: usize, interp: WealthInterp, boundary: WealthBoundary) -> Self {
        let log2_min = w_min.log2();
        let log2_step = (w_max.log2() - log2_min) / T::from_usize_lossy(n - 1);
        let mut nodes: Vec<T> = (0..n)
            .map(|i| T::two().powf(log2_min + log2_step * T::from_usize_lossy(i)))
            .collect();
        nodes[0] = w_min;
        nodes[n - 1] = w_max;
        let growth = (log2_step * T::LN_2()).exp_m1();
        WealthAxis { nodes, log2_min, log2_step, growth, interp, boundary }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn min(&self) -> T {
        self.nodes[0]
    }

    pub fn max(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn log2_step(&self) -> T {
        self.log2_step
    }

    pub fn contains(&self, w: T) -> bool {
        w >= self.min() && w <= self.max()
    }

    /// Cell of an in-range wealth, with the weight measured in the axis'
    /// interpolation variable.
    #[inline]
    pub fn locate(&self, w: T) -> Cell<T> {
        let n = self.nodes.len();
        let pos = (w.log2() - self.log2_min) / self.log2_step;
        let mut index = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        // Correct for round-off in the log position.
        while index > 0 && w < self.nodes[index] {
            index -= 1;
        }
        while index < n - 2 && w >= self.nodes[index + 1] {
            index += 1;
        }
        let (a, b) = (self.nodes[index], self.nodes[index + 1]);
        let t = match self.interp {
            WealthInterp::Linear => (w - a) / (b - a),
            WealthInterp::Log2 => (w.log2() - a.log2()) / (b.log2() - a.log2()),
        };
        Cell { index, t: t.clamp_unit() }
    }

    /// In-cell weight for a point `frac` of the way through a cell in log2
    /// units. The same for every cell of a geometric axis.
    #[inline]
    pub fn weight_for_log_fraction(&self, frac: T) -> T {
        match self.interp {
            WealthInterp::Log2 => frac,
            WealthInterp::Linear => {
                ((frac * self.log2_step * T::LN_2()).exp_m1() / self.growth).clamp_unit()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_xi_nodes_include_anchors() {
        let g = GridSpec::<f64>::default();
        let nodes = g.xi_nodes();
        assert_eq!(nodes.len(), 2001);
        assert_eq!(nodes[0], 0.0);
        assert_eq!(nodes[1000], 0.5);
        assert_eq!(nodes[2000], 1.0);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        for j in 0..2001 {
            assert!((nodes[j] - (1.0 - nodes[2000 - j])).abs() < 1e-15);
        }
        assert!((nodes[1] - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_minimal_grids() {
        let g = GridSpec::<f64> { n_xi: 5, xi_spacing: XiSpacing::Uniform, ..Default::default() };
        assert_eq!(g.xi_nodes(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = GridSpec::<f64> { n_xi: 3, ..Default::default() };
        assert_eq!(g.xi_nodes(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn validation() {
        let ok = GridSpec::<f64>::default();
        assert!(ok.validate().is_ok());
        assert!(GridSpec { n_xi: 2000, ..ok }.validate().is_err());
        assert!(GridSpec { n_xi: 1, ..ok }.validate().is_err());
        assert!(GridSpec { n_w: 2, ..ok }.validate().is_err());
        assert!(GridSpec { n_alpha_coarse: 4, ..ok }.validate().is_err());
        assert!(GridSpec { xi_min: 0.7, ..ok }.validate().is_err());
        assert!(GridSpec { w_min: Some(3.0), ..ok }.validate().is_err());
        assert!(GridSpec { alpha_tol: 0.0, ..ok }.validate().is_err());
    }

    #[test]
    fn xi_interpolation_is_exact_at_nodes() {
        let axis = GridSpec::<f64> { n_xi: 41, ..Default::default() }.xi_axis();
        let values: Vec<f64> = axis.nodes().iter().map(|x| x.sin()).collect();
        for (x, v) in axis.nodes().iter().zip(&values) {
            assert_eq!(axis.interp(&values, *x), *v);
        }
        let mid = 0.5 * (axis.nodes()[3] + axis.nodes()[4]);
        let expect = 0.5 * (values[3] + values[4]);
        assert!((axis.interp(&values, mid) - expect).abs() < 1e-15);
        assert_eq!(axis.interp(&values, -1.0), values[0]);
    }

    #[test]
    fn wealth_axis_is_geometric() {
        let g = GridSpec::<f64> { n_w: 11, ..Default::default() };
        let axis = g.wealth_axis(10);
        assert_eq!(axis.min(), 2.0 / 1024.0);
        assert_eq!(axis.max(), 2.0);
        assert!((axis.log2_step() - 1.0).abs() < 1e-14);
        for (i, w) in axis.nodes().iter().enumerate() {
            let c = axis.locate(*w);
            assert!(c.index == i.min(9));
            assert!(c.t == 0.0 || (i == 10 && c.t == 1.0));
        }
        // Halfway in log2 units, linear weight: (sqrt 2 - 1) / (2 - 1).
        let w = axis.nodes()[4] * 2f64.sqrt();
        let c = axis.locate(w);
        assert_eq!(c.index, 4);
        assert!((c.t - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((axis.weight_for_log_fraction(0.5) - c.t).abs() < 1e-12);
    }
}
