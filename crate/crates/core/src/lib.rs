//! Consistent query answering over databases that violate key, denial and
//! inclusion dependencies, under CM-complete, loosely-sound and loosely-exact
//! repair semantics.

pub mod aspeval;
pub mod encode;
pub mod mapping;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod pipeline;
pub mod program;
pub mod rewrite;
pub mod synth;
pub mod textio;
