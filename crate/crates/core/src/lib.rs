//! Integral Chow ring presentations of quotient stacks built from quadratic
//! forms, computed from torus localization, symmetric-function rewriting and
//! graded integer lattices.

pub mod polycore;
pub mod symchern;
pub mod localize;
pub mod gradedideal;
pub mod chowpipe;
