//! Enumeration, verification and classification of nonhyperelliptic
//! superspecial curves of genus 4 over small prime fields.

pub mod enumerate;
pub mod families;
pub mod field;
pub mod geometry;
pub mod hasse_witt;
pub mod isomorphism;
pub mod poly;
pub mod published;
pub mod solver;

pub use field::{FiniteField, Fp, Fp2, Ring};
pub use poly::{MPoly, Monomial, PolyRing};

pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F11 = Fp<11>;
pub type F13 = Fp<13>;
pub type F25 = Fp2<5>;
pub type F121 = Fp2<11>;
