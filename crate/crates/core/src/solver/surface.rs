//! Literal replica of the grid algorithm over the (wealth, prior) plane.
//!
//! `U[N][i][j] = log2 W_i`; for `k = N-1 .. 0` every node `(W_i, xi_j)`
//! maximises over the axis the probability-weighted bilinear interpolation
//! of `U[k+1]` at the two post-measurement points `(W_i (1 +- f), xi_+-)`.
//!
//! Everything about a trial axis that does not involve wealth (outcome
//! probabilities, posteriors and their prior-axis cells, the stake) is shared
//! by all wealth rows of a prior column. On a geometric wealth axis the
//! target cell of `W_i (1 +- f)` is a fixed row offset from `i` with a fixed
//! in-cell weight, so a trial axis is planned once per column and replayed
//! along the rows. Layers are stored prior-major so that such a replay reads
//! contiguous memory.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{lerp, Cell, GridSpec, WealthAxis, WealthBoundary, XiAxis};
use crate::model::{conditional_up_probs, Angle, GameParams, Prior, Transition};
use crate::optimize::{refine_from_scan, AlphaSearch};
use crate::scalar::Scalar;
use crate::solver::{check_query, special_axes, ValueStack};
use crate::tolerance;

/// `U[k][i][j]` over steps, wealth nodes and prior nodes, stored as
/// `[k][j][i]`.
#[derive(Clone, Debug)]
pub struct UtilitySurface<T> {
    params: GameParams<T>,
    grid: GridSpec<T>,
    w_axis: WealthAxis<T>,
    xi_axis: XiAxis<T>,
    values: Vec<T>,
}

impl<T: Scalar> UtilitySurface<T> {
    pub fn params(&self) -> &GameParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn n_steps(&self) -> usize {
        self.params.n_steps
    }

    pub fn w_axis(&self) -> &WealthAxis<T> {
        &self.w_axis
    }

    pub fn xi_axis(&self) -> &XiAxis<T> {
        &self.xi_axis
    }

    fn layer_len(&self) -> usize {
        self.w_axis.len() * self.xi_axis.len()
    }

    /// Step `k` as `[xi_index][w_index]`: each prior column is contiguous.
    pub fn layer(&self, k: usize) -> &[T] {
        let len = self.layer_len();
        &self.values[k * len..(k + 1) * len]
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.layer(k)[j * self.w_axis.len() + i]
    }

    /// Bilinear lookup; wealth outside the axis is an error.
    pub fn query_value(&self, k: usize, w: T, xi: T) -> Result<T> {
        check_query(k, self.n_steps(), xi)?;
        if !self.w_axis.contains(w) {
            return Err(out_of_range(w, &self.w_axis));
        }
        let layer = Layer { values: self.layer(k), w_axis: &self.w_axis };
        Ok(layer.at(w, self.xi_axis.locate(xi)))
    }

    /// `|U[k][i][j] - log2 W_i - G_k(xi_j)|` maximised over the whole array.
    /// The stack must share the prior grid.
    pub fn separability_residual(&self, stack: &ValueStack<T>) -> Result<T> {
        if stack.xi_axis().nodes() != self.xi_axis.nodes() || stack.n_steps() != self.n_steps() {
            return Err(Error::InvalidInput("surface and value stack grids differ".into()));
        }
        let mut worst = T::zero();
        for k in 0..=self.n_steps() {
            let g = &stack.curve(k).g_values;
            for (i, w) in self.w_axis.nodes().iter().enumerate() {
                let lw = w.log2();
                for (j, gj) in g.iter().enumerate() {
                    worst = worst.max((self.get(k, i, j) - lw - *gj).abs());
                }
            }
        }
        Ok(worst)
    }

    /// `U[k][i][j] - log2 W_i` for every wealth row of column `j`.
    pub fn excess_column(&self, k: usize, j: usize) -> Vec<T> {
        let n_w = self.w_axis.len();
        self.layer(k)[j * n_w..(j + 1) * n_w]
            .iter()
            .zip(self.w_axis.nodes())
            .map(|(u, w)| *u - w.log2())
            .collect()
    }
}

fn out_of_range<T: Scalar>(w: T, axis: &WealthAxis<T>) -> Error {
    Error::OutOfRangeWealth {
        wealth: w.to_f64_lossy(),
        min: axis.min().to_f64_lossy(),
        max: axis.max().to_f64_lossy(),
    }
}

struct Layer<'a, T> {
    values: &'a [T],
    w_axis: &'a WealthAxis<T>,
}

impl<T: Scalar> Layer<'_, T> {
    /// Wealth column of prior node `j`.
    #[inline]
    fn column(&self, j: usize) -> &[T] {
        let n_w = self.w_axis.len();
        &self.values[j * n_w..(j + 1) * n_w]
    }

    #[inline]
    fn bilinear(&self, row: usize, tw: T, xc: Cell<T>) -> T {
        let (lo, hi) = (self.column(xc.index), self.column(xc.index + 1));
        let a = lerp(lo[row], hi[row], xc.t);
        if tw == T::zero() {
            return a;
        }
        let b = lerp(lo[row + 1], hi[row + 1], xc.t);
        lerp(a, b, tw)
    }

    /// In-range lookup at arbitrary wealth.
    fn at(&self, w: T, xc: Cell<T>) -> T {
        let c = self.w_axis.locate(w);
        self.bilinear(c.index, c.t, xc)
    }

    /// Value for a branch of row `i` whose target lies outside the interior
    /// cells, by the boundary rule. `log_w` holds `log2` of the wealth nodes.
    fn off_axis(&self, log_w: &[T], i: usize, b: &PlannedBranch<T>) -> Option<T> {
        let top = log_w.len() - 1;
        let row = i as isize + b.row_shift;
        let edge = if row >= top as isize { top } else { 0 };
        let u_edge = self.bilinear(edge, T::zero(), b.xi_cell);
        if row == top as isize && b.w_weight == T::zero() {
            return Some(u_edge);
        }
        match self.w_axis.boundary {
            WealthBoundary::Strict => None,
            WealthBoundary::Rescale => Some(u_edge + (log_w[i] + b.log_mult - log_w[edge])),
        }
    }
}

/// One outcome of a planned trial axis.
#[derive(Clone, Copy, Debug)]
struct PlannedBranch<T> {
    p: T,
    log_mult: T,
    xi_cell: Cell<T>,
    row_shift: isize,
    w_weight: T,
}

#[derive(Clone, Copy, Debug)]
struct Plan<T> {
    branches: [Option<PlannedBranch<T>>; 2],
}

impl<T: Scalar> Plan<T> {
    fn new(t: Transition<T>, xi_axis: &XiAxis<T>, w_axis: &WealthAxis<T>) -> Self {
        let eps = T::lit(tolerance::PROB_EPS);
        let step = w_axis.log2_step();
        let mut branches = [None, None];
        let f = t.bet.fraction;
        let up_wins = t.bet.bet_on == crate::model::BetDirection::Up;
        let outcomes = [
            (t.p_up, if up_wins { T::one() + f } else { T::one() - f }, t.xi_up),
            (t.p_down(), if up_wins { T::one() - f } else { T::one() + f }, t.xi_down),
        ];
        for (slot, (p, mult, post)) in branches.iter_mut().zip(outcomes) {
            if p <= eps {
                continue;
            }
            let log_mult = if mult > T::zero() { mult.log2() } else { T::neg_infinity() };
            let pos = log_mult / step;
            let floor = pos.floor();
            let (row_shift, frac) = if floor.is_finite() {
                (floor.to_isize().unwrap_or(isize::MIN / 2), pos - floor)
            } else {
                (isize::MIN / 2, T::zero())
            };
            *slot = Some(PlannedBranch {
                p,
                log_mult,
                xi_cell: xi_axis.locate(post),
                row_shift,
                w_weight: w_axis.weight_for_log_fraction(frac),
            });
        }
        Plan { branches }
    }

    /// Expected next-step utility from wealth row `i`. `None` if a branch
    /// leaves the wealth axis under the strict boundary rule.
    #[inline]
    fn eval(&self, layer: &Layer<'_, T>, log_w: &[T], i: usize) -> Option<T> {
        let n_w = log_w.len() as isize;
        let mut total = T::zero();
        for b in self.branches.iter().flatten() {
            let row = i as isize + b.row_shift;
            let u = if row >= 0 && row + 1 < n_w {
                layer.bilinear(row as usize, b.w_weight, b.xi_cell)
            } else {
                layer.off_axis(log_w, i, b)?
            };
            total = total + b.p * u;
        }
        Some(total)
    }

    /// [`Plan::eval`] for every wealth row at once. Returns the first
    /// escaping wealth under the strict boundary rule.
    fn eval_rows(&self, layer: &Layer<'_, T>, log_w: &[T], out: &mut [T]) -> std::result::Result<(), T> {
        let nodes = layer.w_axis.nodes();
        let n_w = nodes.len() as isize;
        out.fill(T::zero());
        for b in self.branches.iter().flatten() {
            // Rows whose target cell lies inside the axis.
            let first = (-b.row_shift).clamp(0, n_w) as usize;
            let end = ((n_w - 1 - b.row_shift).clamp(0, n_w) as usize).max(first);
            let (lo, hi) = (layer.column(b.xi_cell.index), layer.column(b.xi_cell.index + 1));
            let (tx, tw) = (b.xi_cell.t, b.w_weight);
            let top = nodes.len() - 1;
            let shift = b.row_shift;
            if first < end {
                let rows = &mut out[first..end];
                let r0 = (first as isize + shift) as usize;
                if tw == T::zero() {
                    for (o, (&l, &h)) in rows.iter_mut().zip(lo[r0..].iter().zip(&hi[r0..])) {
                        *o = *o + b.p * lerp(l, h, tx);
                    }
                } else {
                    for (n, o) in rows.iter_mut().enumerate() {
                        let r = r0 + n;
                        let a = lerp(lo[r], hi[r], tx);
                        let c = lerp(lo[r + 1], hi[r + 1], tx);
                        *o = *o + b.p * lerp(a, c, tw);
                    }
                }
            }
            // Same arithmetic as `Layer::off_axis`, with the edge values hoisted.
            let strict = layer.w_axis.boundary == WealthBoundary::Strict;
            if first > 0 {
                if strict {
                    return Err(nodes[0]);
                }
                let u_edge = lerp(lo[0], hi[0], tx);
                for i in 0..first {
                    out[i] = out[i] + b.p * (u_edge + (log_w[i] + b.log_mult - log_w[0]));
                }
            }
            if end <= top {
                let u_edge = lerp(lo[top], hi[top], tx);
                for i in end..=top {
                    let u = if i as isize + shift == top as isize && tw == T::zero() {
                        u_edge
                    } else if strict {
                        return Err(nodes[i]);
                    } else {
                        u_edge + (log_w[i] + b.log_mult - log_w[top])
                    };
                    out[i] = out[i] + b.p * u;
                }
            }
        }
        Ok(())
    }
}

/// Remembers the plans of the most recent sequence of trial axes. Adjacent
/// wealth rows of a column usually probe the same sequence.
struct PlanTrace<T> {
    keys: Vec<T>,
    plans: Vec<Plan<T>>,
    cursor: usize,
}

impl<T: Scalar> PlanTrace<T> {
    fn new() -> Self {
        PlanTrace { keys: Vec::new(), plans: Vec::new(), cursor: 0 }
    }

    fn rewind(&mut self) {
        self.cursor = 0;
    }

    fn get(&mut self, alpha: Angle<T>, build: impl FnOnce() -> Plan<T>) -> Plan<T> {
        let a = alpha.radians();
        let c = self.cursor;
        self.cursor += 1;
        if c < self.keys.len() {
            if self.keys[c] != a {
                self.keys[c] = a;
                self.plans[c] = build();
            }
        } else {
            self.keys.push(a);
            self.plans.push(build());
        }
        self.plans[c]
    }
}

/// Runs the grid algorithm over the (wealth, prior) plane.
///
/// The wealth axis is geometric on `[w_min, w_max]` (default `w_max = 2`,
/// `w_min = w_max 2^-N`). Interpolation along wealth follows
/// [`GridSpec::wealth_interp`]; wealth that leaves the axis follows
/// [`GridSpec::wealth_boundary`].
pub fn solve_2d_paper<T: Scalar>(params: &GameParams<T>, grid: &GridSpec<T>) -> Result<UtilitySurface<T>> {
    grid.validate()?;
    let n = params.n_steps;
    let xi_axis = grid.xi_axis();
    let w_axis = grid.wealth_axis(n);
    let (n_w, n_xi) = (w_axis.len(), xi_axis.len());
    let layer_len = n_w * n_xi;
    // Only the best coarse bracket is refined: every extra basin costs a
    // full golden-section search per wealth row.
    let search = AlphaSearch { max_basins: 1, ..grid.alpha_search() };
    let delta = params.delta;

    let coarse_conditionals: Vec<(T, T)> =
        search.coarse_angles().into_iter().map(|a| conditional_up_probs(a, delta)).collect();

    let mut values = vec![T::zero(); (n + 1) * layer_len];
    let log_w: Vec<T> = w_axis.nodes().iter().map(|w| w.log2()).collect();
    for column in values[n * layer_len..].chunks_mut(n_w) {
        column.copy_from_slice(&log_w);
    }

    for k in (0..n).rev() {
        let (head, tail) = values.split_at_mut((k + 1) * layer_len);
        let next = Layer { values: &tail[..layer_len], w_axis: &w_axis };
        let columns: Vec<Vec<T>> = (0..n_xi)
            .into_par_iter()
            .map(|j| solve_column(&next, &log_w, &xi_axis, j, delta, &search, &coarse_conditionals))
            .collect::<Result<_>>()?;
        let current = &mut head[k * layer_len..];
        let slack = T::lit(tolerance::MONOTONE_SLACK);
        for (j, column) in columns.iter().enumerate() {
            for (&u, &u_next) in column.iter().zip(next.column(j)) {
                if u < u_next - slack {
                    return Err(Error::GridTooCoarse {
                        step: k,
                        xi: xi_axis.nodes()[j].to_f64_lossy(),
                        violation: (u_next - u).to_f64_lossy(),
                    });
                }
            }
            current[j * n_w..(j + 1) * n_w].copy_from_slice(column);
        }
    }

    Ok(UtilitySurface { params: *params, grid: *grid, w_axis, xi_axis, values })
}

fn solve_column<T: Scalar>(
    next: &Layer<'_, T>,
    log_w: &[T],
    xi_axis: &XiAxis<T>,
    j: usize,
    delta: Angle<T>,
    search: &AlphaSearch<T>,
    coarse_conditionals: &[(T, T)],
) -> Result<Vec<T>> {
    let w_axis = next.w_axis;
    let xi = Prior::clamped(xi_axis.nodes()[j]);
    let plan = |a: Angle<T>| Plan::new(Transition::new(xi, a, delta), xi_axis, w_axis);
    let n_w = w_axis.len();
    let n_c = search.n_coarse;
    // scan[m * n_w + i]: coarse angle m at wealth row i.
    let mut scan = vec![T::zero(); n_c * n_w];
    for (out, &(c0, c1)) in scan.chunks_mut(n_w).zip(coarse_conditionals) {
        Plan::new(Transition::from_conditionals(xi.value(), c0, c1), xi_axis, w_axis)
            .eval_rows(next, log_w, out)
            .map_err(|w| out_of_range(w, w_axis))?;
    }
    let extra = special_axes(xi, delta);
    let mut trace = PlanTrace::new();
    let mut coarse_values = vec![T::zero(); n_c];
    let mut column = Vec::with_capacity(n_w);

    for (i, &w_i) in w_axis.nodes().iter().enumerate() {
        let mut escaped = None;
        for (m, v) in coarse_values.iter_mut().enumerate() {
            *v = scan[m * n_w + i];
        }
        trace.rewind();
        let (_, best) = refine_from_scan(
            &coarse_values,
            |a| {
                let p = trace.get(a, || plan(a));
                p.eval(next, log_w, i).unwrap_or_else(|| {
                    escaped = Some(w_i);
                    T::nan()
                })
            },
            search,
            &extra,
        );
        if let Some(w) = escaped {
            return Err(out_of_range(w, w_axis));
        }
        column.push(best);
    }
    Ok(column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WealthInterp;
    use crate::solver::solve_1d;
    use std::f64::consts::FRAC_PI_3;

    fn grid(n_xi: usize, n_w: usize) -> GridSpec<f64> {
        GridSpec { n_xi, n_w, ..Default::default() }
    }

    #[test]
    fn terminal_layer_is_log2_wealth() {
        let p = GameParams::new(FRAC_PI_3, 3, 0.5).unwrap();
        let s = solve_2d_paper(&p, &grid(41, 17)).unwrap();
        let top = s.w_axis().len() - 1;
        for j in 0..41 {
            assert_eq!(s.get(3, top, j), 1.0);
            assert_eq!(s.get(3, 0, j), -2.0);
        }
        assert_eq!(s.query_value(3, 2.0, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn log2_interpolation_is_separable_up_to_the_angle_search() {
        let p = GameParams::new(FRAC_PI_3, 4, 0.5).unwrap();
        let g = GridSpec { wealth_interp: WealthInterp::Log2, ..grid(101, 33) };
        let s = solve_2d_paper(&p, &g).unwrap();
        let one_d = solve_1d(&p, &g).unwrap();
        let r = s.separability_residual(&one_d).unwrap();
        // Only one coarse bracket is refined, so a near-tied second peak
        // can be missed by a hair.
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn linear_interpolation_residual_shrinks_with_wealth_resolution() {
        let p = GameParams::new(FRAC_PI_3, 4, 0.5).unwrap();
        let one_d = solve_1d(&p, &grid(101, 33)).unwrap();
        let coarse = solve_2d_paper(&p, &grid(101, 33)).unwrap().separability_residual(&one_d).unwrap();
        let fine = solve_2d_paper(&p, &grid(101, 65)).unwrap().separability_residual(&one_d).unwrap();
        assert!(fine < coarse, "{fine} !< {coarse}");
        assert!(coarse < 5e-3);
    }

    #[test]
    fn anchor_column_is_pure_doubling() {
        let p = GameParams::new(FRAC_PI_3, 4, 0.5).unwrap();
        let s = solve_2d_paper(&p, &grid(41, 33)).unwrap();
        for k in 0..=4 {
            for (i, w) in s.w_axis().nodes().iter().enumerate() {
                let expect = w.log2() + (4 - k) as f64;
                assert!((s.get(k, i, 0) - expect).abs() < 1e-12);
                assert!((s.get(k, i, 40) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn strict_boundary_reports_escaping_wealth() {
        let p = GameParams::new(FRAC_PI_3, 2, 0.5).unwrap();
        let g = GridSpec { wealth_boundary: WealthBoundary::Strict, ..grid(21, 9) };
        assert!(matches!(solve_2d_paper(&p, &g), Err(Error::OutOfRangeWealth { .. })));
    }

    #[test]
    fn query_outside_wealth_axis_fails() {
        let p = GameParams::new(FRAC_PI_3, 2, 0.5).unwrap();
        let s = solve_2d_paper(&p, &grid(21, 9)).unwrap();
        assert!(matches!(s.query_value(0, 2.5, 0.5), Err(Error::OutOfRangeWealth { .. })));
        // Exact at nodes.
        let (i, j) = (4, 7);
        let w = s.w_axis().nodes()[i];
        let x = s.xi_axis().nodes()[j];
        assert_eq!(s.query_value(1, w, x).unwrap(), s.get(1, i, j));
    }
}
