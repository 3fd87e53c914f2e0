//! Reasoning for propositional defeasible standpoint logic.

pub mod cli;
pub mod normalize;
pub mod reasoner;
pub mod semantics;
pub mod syntax;
pub mod tableau;
