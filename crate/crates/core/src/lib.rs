//! Computational toolkit for a Chabauty-Kim style obstruction on the
//! thrice-punctured line minus a further point configuration.

pub mod linalg;
pub mod mpoly;
pub mod padic;
pub mod ring;
pub mod periods;
pub mod geom;
pub mod kim;
pub mod pl;
pub mod shuffle;
pub mod theta;
pub mod verify;
