//! Newton polygons, Hensel splitting and the analytic cluster decomposition
//! of the denominator.

pub mod clusters;
pub mod hensel;
pub mod polygon;
pub mod seriespoly;

pub use clusters::{
    analytic_clusters, cluster_tree, default_precision, ClusterOptions, ClusterOutcome, ClusterTree, FactorCluster, Step,
    Stop, UnitInfo,
};
pub use hensel::{hensel_split, split_along_edge, weierstrass, EdgeSplit, Weierstrass};
pub use polygon::{newton_polygon, series_polygon, Edge, NewtonPolygon};
pub use seriespoly::SeriesPoly;
