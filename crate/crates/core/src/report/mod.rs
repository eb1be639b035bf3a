//! Equal-utility contours, heat maps and file export.
//!
//! With a separable value `U_k(W, xi) = log2 W + G_k(xi)`, the level set
//! `U_k = u` is the curve `W(xi) = 2^(u - G_k(xi))`, so contours are read off
//! the value curves directly. A marching-squares extraction on the 2-D
//! surface is available for comparison with the grid replica.

mod contour;
mod discrepancy;
pub mod export;
mod heatmap;

pub use contour::{contour_points, contour_segments_2d, ContourLine, ContourPoint, ContourSegment};
pub use discrepancy::{info_gain_discrepancy, InfoGainReport, InfoGainRow};
pub use heatmap::{heatmap, HeatMapGrid, ValueSource};
