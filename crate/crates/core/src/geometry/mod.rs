//! Exact polyhedral kernel: norms, polyhedra, regions, distances,
//! projections and point classification.

pub mod distance;
pub mod fm;
pub mod norm;
pub mod polyhedron;
pub mod product;
pub mod region;
pub mod status;

pub use distance::{dist_point_region, dist_region_region, Distance};
pub use fm::{minkowski_difference, minkowski_sum};
pub use norm::{norm_eval, NormKind, PolyhedralNorm};
pub use polyhedron::{intersect_empty, meet, stacked_rows, EmptinessCertificate, Meet, Polyhedron, Row};
pub use product::{cartesian, diagonal, product_norm, reduce_n_sets};
pub use region::{localize, OracleFamily, OracleRegion, Region};
pub use status::{exactness_radius, point_status, CoverCertificate, PointStatus};
