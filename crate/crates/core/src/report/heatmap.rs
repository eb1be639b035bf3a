use crate::error::Result;
use crate::grid::GridSpec;
use crate::scalar::Scalar;
use crate::solver::{UtilitySurface, ValueStack};

/// Anything that answers "optimal utility at step k, wealth w, prior xi".
pub trait ValueSource<T: Scalar> {
    fn n_steps(&self) -> usize;
    fn query_value(&self, k: usize, w: T, xi: T) -> Result<T>;
}

impl<T: Scalar> ValueSource<T> for ValueStack<T> {
    fn n_steps(&self) -> usize {
        ValueStack::n_steps(self)
    }

    fn query_value(&self, k: usize, w: T, xi: T) -> Result<T> {
        ValueStack::query_value(self, k, w, xi)
    }
}

impl<T: Scalar> ValueSource<T> for UtilitySurface<T> {
    fn n_steps(&self) -> usize {
        UtilitySurface::n_steps(self)
    }

    fn query_value(&self, k: usize, w: T, xi: T) -> Result<T> {
        UtilitySurface::query_value(self, k, w, xi)
    }
}

/// Utility sampled on a wealth x prior grid at one step.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatMapGrid<T> {
    pub step: usize,
    pub w_axis: Vec<T>,
    pub xi_axis: Vec<T>,
    /// `values[i][j]` at `(w_axis[i], xi_axis[j])`.
    pub values: Vec<Vec<T>>,
}

/// Samples `source` at step `k` on the wealth and prior axes of `grid`.
pub fn heatmap<T: Scalar, S: ValueSource<T> + ?Sized>(source: &S, k: usize, grid: &GridSpec<T>) -> Result<HeatMapGrid<T>> {
    grid.validate()?;
    let w_axis = grid.wealth_axis(source.n_steps()).nodes().to_vec();
    let xi_axis = grid.xi_nodes();
    let values = w_axis
        .iter()
        .map(|&w| xi_axis.iter().map(|&x| source.query_value(k, w, x)).collect::<Result<Vec<T>>>())
        .collect::<Result<_>>()?;
    Ok(HeatMapGrid { step: k, w_axis, xi_axis, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GameParams;
    use crate::solver::{solve_1d, solve_2d_paper};

    #[test]
    fn terminal_heatmap_ignores_prior() {
        let p = GameParams::<f64>::from_degrees(30.0, 4, 0.5).unwrap();
        let g = GridSpec { n_xi: 21, n_w: 9, ..Default::default() };
        let s = solve_1d(&p, &g).unwrap();
        let h: HeatMapGrid<f64> = heatmap(&s, 4, &g).unwrap();
        assert_eq!(h.values.len(), 9);
        assert_eq!(h.values[0].len(), 21);
        for (row, w) in h.values.iter().zip(&h.w_axis) {
            assert!(row.iter().all(|v| *v == w.log2()));
        }
        let prev: HeatMapGrid<f64> = heatmap(&s, 3, &g).unwrap();
        for (a, b) in prev.values.iter().flatten().zip(h.values.iter().flatten()) {
            assert!((0.0..=1.0).contains(&(a - b)));
        }
        for (row, w) in prev.values.iter().zip(&prev.w_axis) {
            assert_eq!(row[0], w.log2() + 1.0);
        }
    }

    #[test]
    fn surface_heatmap_reproduces_nodes() {
        let p = GameParams::<f64>::from_degrees(60.0, 2, 0.5).unwrap();
        let g = GridSpec { n_xi: 21, n_w: 9, ..Default::default() };
        let s = solve_2d_paper(&p, &g).unwrap();
        let h = heatmap(&s, 1, &g).unwrap();
        for i in 0..9 {
            for j in 0..21 {
                assert_eq!(h.values[i][j], s.get(1, i, j));
            }
        }
    }
}
