//! Local 3D shape descriptors for cluttered scenes.
//!
//! The centrepiece is the Radial Intersection Count Image (RICI): an
//! `N x N` integer histogram that counts, for a grid of circles centred on
//! the axis through an oriented point, how often each circle crosses the
//! scene surface. Because the counts are exact intersection counts rather
//! than point-sample estimates, the descriptor is noise-free and can be
//! compared with a clutter-resistant distance that only looks at *changes*
//! in counts along each row ([`rici::crd_distance`]).
//!
//! Two classic baselines are included for comparison: the Spin Image
//! ([`spin_image`]) and the 3D Shape Context ([`shape_context`]), together
//! with a seed-deterministic "clutterbox" benchmark harness
//! ([`clutterbox`]) that measures how matching performance degrades as a
//! scene is progressively filled with clutter objects.
//!
//! With the default `parallel` feature the batch entry points fan out over
//! rayon; disabling it yields a dependency-free sequential build. All
//! randomness flows through [`prng::Prng`], whose per-stage sub-seed
//! derivation makes results independent of thread count.

pub mod clutterbox;
pub mod export;
pub mod mesh;
pub mod prng;
pub mod projection;
pub mod rici;
pub mod shape_context;
pub mod spin_image;
pub mod synthetic;

mod parallel;

use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(String),
    #[error("mesh has no triangles")]
    EmptyMesh,
    #[error("all vertices coincident; enclosing sphere has zero radius")]
    ZeroRadiusSphere,
    #[error("scene surface area is zero")]
    ZeroSurfaceArea,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("descriptor parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("dataset {path} has only {found} loadable meshes, {needed} required")]
    DatasetTooSmall {
        path: PathBuf,
        found: usize,
        needed: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Number of worker threads the parallel feature will use, or 1 when the
/// crate was built without it. Useful for logging and test assertions.
pub fn effective_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
