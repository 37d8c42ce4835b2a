//! Persistent Legendrian contact homology over Z2.
//!
//! The pipeline: a Chekanov-Eliashberg DGA ([`algebra`]) is linearized by an
//! augmentation ([`augment`]), filtered by heights coming either from a file or
//! from the area inequalities of the diagram ([`diagram`]), and reduced to a
//! barcode ([`persist`]). Barcodes are compared with [`metrics`].

pub mod algebra;
pub mod augment;
pub mod cli;
pub mod diagram;
pub mod gf2;
pub mod io;
pub mod metrics;
pub mod persist;
pub mod rational;
pub mod render;
pub mod transform;
