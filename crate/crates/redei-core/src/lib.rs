//! Core algorithms for computing the 4-rank of the degree-zero Picard group
//! of a hyperelliptic curve `y^2 = f(x)` over an odd prime field `F_q`, and
//! for comparing the resulting statistics against exact random-matrix models.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffpoly`] — dense polynomial arithmetic over `F_q`, quadratic residue
//!   symbols, irreducibility testing and factorisation.
//! * [`redei`] — branch data of a hyperelliptic curve and its Rédei matrix;
//!   the 4-rank is the matrix nullity minus one.
//! * [`jacobian`] — an independent brute-force oracle: Mumford representation
//!   and Cantor addition on small Jacobians, with direct 2- and 4-rank counts.
//! * [`matstat`] — exact rank statistics of random matrices over small finite
//!   fields, including C-symmetric models matching Rédei matrices.
//! * [`selection`] — exactly uniform sampling of weighted subsets of the
//!   closed points of the projective line (branch-locus selections).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and parallel
//! experiment drivers live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod ffpoly;
pub mod jacobian;
pub mod matstat;
pub mod redei;
pub mod selection;
