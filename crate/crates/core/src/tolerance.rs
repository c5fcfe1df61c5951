//! Central tolerance record shared by all modules.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual of `g^T S g - S` accepted for group elements.
    pub group: f64,
    /// Residual accepted for algebra identities.
    pub algebra: f64,
    /// Hyperboloid constraint residual accepted for points.
    pub point: f64,
    /// Maximum gap between the ends of a loop.
    pub loop_closure: f64,
    /// Planar points closer than this are identified.
    pub point_merge: f64,
    /// The logarithm rejects rotation angles above `pi - log_angle_margin`.
    pub log_angle_margin: f64,
    /// The logarithm rejects boost rapidities above this bound.
    pub log_boost_limit: f64,
    /// Number of group products after which drift is corrected.
    pub reprojection_interval: usize,
}

pub const TOLERANCES: Tolerances = Tolerances {
    group: 1e-9,
    algebra: 1e-12,
    point: 1e-9,
    loop_closure: 1e-9,
    point_merge: 1e-12,
    log_angle_margin: 0.1,
    log_boost_limit: 30.0,
    reprojection_interval: 64,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOLERANCES
    }
}
