//! Exact Abelian integrals of polynomial one-forms along the canonical cycles
//! of Hamiltonians in Neumann-Norbury normal form.

pub mod abelian;
pub mod algebra;
pub mod catalog;
pub mod family;
pub mod oracle;
pub mod rectify;
pub mod sample;
pub mod transform;
