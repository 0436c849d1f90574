pub mod cobordism;
pub mod fixtures;
pub mod intlinalg;
pub mod khcomplex;
pub mod movie;
pub mod pdcode;
pub mod sparse;
pub mod verify;
