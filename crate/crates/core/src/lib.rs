//! Numerical symplectic linear algebra for Lagrangian planes and immersions.
//!
//! * [`symplectic`]: the standard space `R^{2n}`, Lagrangian frames, unitary
//!   representatives and `det²`.
//! * [`maslov`]: Maslov index of sampled loops and the `U(n)` lift test.
//! * [`hormander`]: the four-plane index and its quadratic forms.
//! * [`cech`]: Hörmander cocycles of section pairs over a good cover of a loop.
//! * [`surface`]: mean curvature, the `β` form and Maslov data of sampled
//!   Lagrangian immersions in flat `C^n`.

pub mod cech;
pub mod error;
pub mod hormander;
pub mod linalg;
pub mod maslov;
pub mod surface;
pub mod symplectic;
pub mod tolerance;

pub use error::{Error, Result};
pub use maslov::{is_liftable, maslov_index, LagrangianLoop, LoopPreset};
pub use surface::{ImmersedLagrangianGrid, SurfacePreset};
pub use symplectic::{projection_across, transversal, LagrangianFrame, SymplecticSpace, UnitaryRepresentative};
pub use tolerance::Tolerances;
