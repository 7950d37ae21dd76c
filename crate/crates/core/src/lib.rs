//! Holonomy and parallel transport for U(1) bundles and abelian gerbes given
//! by Čech–Deligne data, together with the groupoid algebra around them:
//! finite and gauge groupoids, double groupoids with connection pairs,
//! crossed modules, thin paths, and local subgroupoids with their
//! globalisation to a holonomy groupoid.

pub mod bundle;
pub mod cover;
pub mod crossed;
pub mod double;
pub mod error;
pub mod forms;
pub mod gerbe;
pub mod group;
pub mod groupoid;
pub mod local;
pub mod loopspace;
pub mod paths;
pub mod phase;
pub mod presentation;
pub mod quadrature;
pub mod rewriting;
pub mod site;
pub mod transport;

pub use error::{Error, Result};
pub use groupoid::{
    compose, gauge_groupoid, generated_subgroupoid, Arrow, ArrowId, FiniteGroupoid, Groupoid,
    ObjectId, PhaseArrow, PhaseGroupoid, Subgroupoid, VertexGroup,
};
pub use phase::Phase;

pub use bundle::LineBundleData;
pub use cover::{CellComplex, CombinatorialCover, CoverSpec, CoveredSpace};
pub use crossed::CrossedModule;
pub use double::{DoubleGroupoid, LawReport};
pub use gerbe::{DeligneGauge, GerbeData, SurfaceAssignment, TwoLoop};
pub use local::{EdgeTransport, Germ, HolonomyGroupoid, LocalSubgroupoid};
pub use paths::{EdgePath, SmoothPath, ThinPath};
pub use presentation::Presentation;
pub use quadrature::Quadrature;
pub use site::FiniteSite;
