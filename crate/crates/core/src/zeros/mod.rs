//! Zeros of Stern polynomials: root finding, counting and the clustering bounds.

mod aberth;
pub mod bounds;
pub mod contour;
pub mod count;
pub mod dense;
pub mod real;
pub mod roots;

pub use bounds::{eight_angle_grid, l_value, prop1_bounds, verify_prop1, verify_prop1_with, BoundReport, PassFlags, Prop1Bounds, RHO_GRID};
pub use contour::{count_by_argument_principle, count_by_argument_principle_with, ContourCount, ContourOptions};
pub use count::{boundary_roots, count_annulus, count_region, count_sector, Region};
pub use real::{real_root_4n3, sturm_real_root_count, sturm_real_root_count_full};
pub use roots::{find_roots, find_roots_with, Root, RootOptions, RootSet, DEFAULT_PRECISION, DEFAULT_TOLERANCE, MAX_PRECISION};
