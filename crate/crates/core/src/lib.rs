pub mod braid;
pub mod cusp;
pub mod error;
pub mod group;
pub mod hom;
pub mod lifting;
pub mod modular;
pub mod nielsen;
pub mod perm;
pub mod presets;
pub mod report;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
pub use group::{ConjClass, Elem, FiniteGroup, DEFAULT_CAP};
pub use hom::GroupHom;
pub use lifting::{CentralExtension, LiftInvariant};
pub use perm::Permutation;
pub use presets::{make_group, GroupSpec, Preset};
