use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::{UtilitySurface, ValueStack};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPoint<T> {
    pub xi: T,
    pub wealth: T,
}

/// Points of equal optimal utility at one step, ordered by prior.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourLine<T> {
    pub step: usize,
    pub level: T,
    pub points: Vec<ContourPoint<T>>,
}

/// Level set `log2 W + G_k(xi) = level` sampled at `n_points` equally spaced
/// priors (rounded up to an odd count so that 0, 1/2 and 1 are included).
pub fn contour_points<T: Scalar>(stack: &ValueStack<T>, k: usize, level: T, n_points: usize) -> Result<ContourLine<T>> {
    if k > stack.n_steps() {
        return Err(Error::InvalidInput(format!("step {k} exceeds N={}", stack.n_steps())));
    }
    if n_points < 3 {
        return Err(Error::InvalidInput("a contour needs at least 3 points".into()));
    }
    let n = n_points | 1;
    let last = T::from_usize_lossy(n - 1);
    let points = (0..n)
        .map(|i| {
            let xi = if i == n - 1 { T::one() } else { T::from_usize_lossy(i) / last };
            ContourPoint { xi, wealth: T::two().powf(level - stack.g(k, xi)) }
        })
        .collect();
    Ok(ContourLine { step: k, level, points })
}

/// Straight piece of a level set on the 2-D surface, as `(wealth, xi)` ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSegment<T> {
    pub a: ContourPoint<T>,
    pub b: ContourPoint<T>,
}

/// Marching squares on layer `k` of the surface, in `(log2 W, xi)`
/// coordinates. Saddle cells are split by the cell-centre average.
pub fn contour_segments_2d<T: Scalar>(surface: &UtilitySurface<T>, k: usize, level: T) -> Result<Vec<ContourSegment<T>>> {
    if k > surface.n_steps() {
        return Err(Error::InvalidInput(format!("step {k} exceeds N={}", surface.n_steps())));
    }
    let ws: Vec<T> = surface.w_axis().nodes().iter().map(|w| w.log2()).collect();
    let xs = surface.xi_axis().nodes();
    let layer = surface.layer(k);
    let (n_w, n_xi) = (ws.len(), xs.len());
    let at = |i: usize, j: usize| layer[j * n_w + i] - level;
    let mut out = Vec::new();

    for i in 0..ws.len() - 1 {
        for j in 0..n_xi - 1 {
            // Corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v = corners.map(|(a, b)| at(a, b));
            let mut case = 0u8;
            for (bit, val) in v.iter().enumerate() {
                if *val >= T::zero() {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            // Edge e joins corner e and corner e+1.
            let cross = |e: usize| {
                let (p, q) = (corners[e], corners[(e + 1) % 4]);
                let (vp, vq) = (v[e], v[(e + 1) % 4]);
                let t = if vp == vq { T::half() } else { vp / (vp - vq) };
                let lw = ws[p.0] + (ws[q.0] - ws[p.0]) * t;
                let x = xs[p.1] + (xs[q.1] - xs[p.1]) * t;
                ContourPoint { xi: x, wealth: T::two().powf(lw) }
            };
            let crossed: Vec<usize> = (0..4).filter(|&e| (case >> e & 1) != (case >> ((e + 1) % 4) & 1)).collect();
            match crossed.len() {
                2 => out.push(ContourSegment { a: cross(crossed[0]), b: cross(crossed[1]) }),
                4 => {
                    let centre = (v[0] + v[1] + v[2] + v[3]) / T::lit(4.0);
                    let corner0_high = v[0] >= T::zero();
                    // Cut off the two corners on the opposite side from the centre.
                    let pairs = if (centre >= T::zero()) == corner0_high {
                        [(0, 1), (2, 3)]
                    } else {
                        [(3, 0), (1, 2)]
                    };
                    for (a, b) in pairs {
                        out.push(ContourSegment { a: cross(a), b: cross(b) });
                    }
                }
                _ => {}
            }
        }
    }
    Ok(out)
}
