//! Exact arithmetic for finite fields, univariate polynomials and towers of
//! rational / tame Laurent function fields over them.

pub mod elem;
pub mod expr;
pub mod gf;
pub mod kummer;
pub mod place;
pub mod plane;
pub mod power;
pub mod tower;
pub mod upoly;
pub mod value;

pub use elem::FieldElem;
pub use gf::{Fq, Gf};
pub use tower::{Base, FieldTower, Layer, LayerKind};
pub use upoly::UPoly;
pub use place::{ExtElem, Place, PlaceKind, ResidueElem, ResidueField};
pub use power::{CoordKey, Coords, PowerTest, Witness};
pub use kummer::{kummer_splitting, KummerSplitting, SplitType};
