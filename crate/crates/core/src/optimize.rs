//! Maximisation over a measurement axis.
//!
//! Objectives in this crate are pi-periodic in the axis angle and may have
//! several separated maxima (two mirror-image optima at `xi = 1/2` are the
//! common case), so a plain bracketing search is not enough. The search
//! scans an equally spaced coarse grid on `[0, pi)`, refines each of the best
//! few local maxima of the scan by golden-section search, and returns the best
//! point seen. Near-equal values are ties and resolve to the smaller angle.

use crate::model::Angle;
use crate::scalar::Scalar;
use crate::tolerance;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Coarse-scan and refinement settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaSearch<T> {
    /// Number of equally spaced scan angles on `[0, pi)`.
    pub n_coarse: usize,
    /// Golden-section stopping width in radians.
    pub tol: T,
    /// How many local maxima of the scan are refined.
    pub max_basins: usize,
}

impl<T: Scalar> Default for AlphaSearch<T> {
    fn default() -> Self {
        AlphaSearch { n_coarse: 181, tol: T::lit(1e-10), max_basins: 4 }
    }
}

impl<T: Scalar> AlphaSearch<T> {
    pub fn new(n_coarse: usize, tol: T) -> Self {
        AlphaSearch { n_coarse: n_coarse.max(1), tol, ..Self::default() }
    }

    /// Spacing of the coarse grid.
    pub fn step(&self) -> T {
        T::PI() / T::from_usize_lossy(self.n_coarse)
    }

    pub fn coarse_angle(&self, i: usize) -> Angle<T> {
        Angle::new(self.step() * T::from_usize_lossy(i))
    }

    pub fn coarse_angles(&self) -> Vec<Angle<T>> {
        (0..self.n_coarse).map(|i| self.coarse_angle(i)).collect()
    }
}

/// Maximises `objective` over the axis. `extra` angles are evaluated as
/// additional candidates. Returns `(argmax, max)`.
pub fn optimize_alpha<T, F>(mut objective: F, search: &AlphaSearch<T>, extra: &[Angle<T>]) -> (Angle<T>, T)
where
    T: Scalar,
    F: FnMut(Angle<T>) -> T,
{
    let values: Vec<T> = (0..search.n_coarse).map(|i| objective(search.coarse_angle(i))).collect();
    refine_from_scan(&values, objective, search, extra)
}

/// Second half of [`optimize_alpha`] for callers that evaluated the coarse
/// grid themselves. `coarse_values[i]` must be the objective at
/// `search.coarse_angle(i)`.
pub fn refine_from_scan<T, F>(
    coarse_values: &[T],
    mut objective: F,
    search: &AlphaSearch<T>,
    extra: &[Angle<T>],
) -> (Angle<T>, T)
where
    T: Scalar,
    F: FnMut(Angle<T>) -> T,
{
    let n = coarse_values.len();
    debug_assert_eq!(n, search.n_coarse);
    let h = search.step();
    let mut best = Best::new(search.tol);

    if let Some(i) = first_argmax(coarse_values) {
        best.offer(search.coarse_angle(i), coarse_values[i]);
    }

    for i in local_maxima(coarse_values, search.max_basins) {
        let centre = h * T::from_usize_lossy(i);
        let (x, fx) = golden_section_max(
            |x| objective(Angle::new(x)),
            centre - h,
            centre + h,
            search.tol,
        );
        best.offer(Angle::new(x), fx);
    }

    for &a in extra {
        let v = objective(a);
        best.offer(a, v);
    }

    best.finish()
}

/// Index of the first largest non-NaN value.
fn first_argmax<T: Scalar>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if !v.is_nan() && best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Indices of strict-left local maxima of a cyclic sequence, best first,
/// at most `limit` of them.
fn local_maxima<T: Scalar>(values: &[T], limit: usize) -> Vec<usize> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = values[i];
            let prev = values[if i == 0 { n - 1 } else { i - 1 }];
            let next = values[if i + 1 == n { 0 } else { i + 1 }];
            v.is_finite() && v > prev && v >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| {
        values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    peaks.truncate(limit);
    peaks
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// Returns the best evaluated point.
pub fn golden_section_max<T, F>(mut f: F, mut lo: T, mut hi: T, tol: T) -> (T, T)
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let r = T::lit(INV_PHI);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut bx, mut bf) = if fd > fc { (d, fd) } else { (c, fc) };
    while (hi - lo).abs() > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
            if fc > bf {
                bx = c;
                bf = fc;
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
            if fd > bf {
                bx = d;
                bf = fd;
            }
        }
    }
    (bx, bf)
}

/// Running argmax with the tie rule.
struct Best<T> {
    angle: Angle<T>,
    value: T,
    snap: T,
}

impl<T: Scalar> Best<T> {
    fn new(tol: T) -> Self {
        Best { angle: Angle::zero(), value: T::neg_infinity(), snap: tol }
    }

    fn offer(&mut self, angle: Angle<T>, value: T) {
        if value.is_nan() {
            return;
        }
        // pi - tiny is the same axis as 0; keep the canonical small angle.
        let angle = if angle.radians() > T::PI() - self.snap { Angle::zero() } else { angle };
        let tie = T::lit(tolerance::TIE_EPS) * T::one().max(value.abs());
        if value > self.value + tie
            || ((value - self.value).abs() <= tie && angle.radians() < self.angle.radians())
        {
            self.value = value;
            self.angle = angle;
        }
    }

    fn finish(self) -> (Angle<T>, T) {
        (self.angle, self.value)
    }
}
