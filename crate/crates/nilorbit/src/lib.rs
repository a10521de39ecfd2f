//! Exact-arithmetic toolkit for the orbit method on nilpotent Lie algebras
//! with involutions: polarizations, coadjoint orbit canonical forms, polar
//! decompositions, distinction classification, and a finite-field
//! brute-force oracle.

pub mod ratlin;
pub mod nilpotent;
pub mod group;
pub mod kirillov;
pub mod symmetric;
pub mod finfield;
