//! Genuine multipartite entanglement measures built on the geometric mean of
//! bipartite α-concurrences (GαC), together with the comparison measures GqC,
//! GMC, GGM and concurrence fill, a convex-roof upper-bound search for mixed
//! states, and the experiment drivers behind the `galphac` command line tool.
//!
//! ```
//! use galphac::measures::{galpha_c, AlphaParam};
//! use galphac::states::ghz;
//!
//! let report = galpha_c(&ghz(3).unwrap(), AlphaParam::new(0.5).unwrap()).unwrap();
//! assert!((report.aggregate() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
//! ```

pub mod bipartitions;
pub mod error;
pub mod experiments;
pub mod io;
pub mod measures;
pub mod quantum;
pub mod roof;
pub mod states;

pub use bipartitions::{cardinality, enumerate_bipartitions, Bipartition, BipartitionSet};
pub use error::{Error, Result};
pub use measures::{AlphaParam, GmeReport, MeasureSpec, QParam};
pub use quantum::{DensityMatrix, PureState, Spectrum, C64};
pub use states::{FamilyParam, Seed};
