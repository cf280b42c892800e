//! Threads, instruction sequences and polyadic programs.
//!
//! The crate covers the path from text to behaviour and back:
//!
//! * [`thread`]: finite thread graphs, projections, bisimilarity,
//!   minimization and abstraction of internal actions;
//! * [`pga`]: instruction sequence terms, their canonical streams and thread
//!   extraction;
//! * [`notations`]: PGLD with absolute jumps, a relative-jump notation, and
//!   the translations between them;
//! * [`polyadic`]: fragment vectors with switch-over, `put` and `get`, and
//!   their joint extraction;
//! * [`services`]: the instruction register file service and the use
//!   operator;
//! * [`synthesis`]: compiling a fragment vector into one PGLD program, and
//!   splitting a PGLD program into fragments;
//! * [`gen`]: random inputs for testing.
//!
//! ```
//! use polyseq::{extract, minimize, pgld_to_pga, PgldProgram};
//!
//! let p: PgldProgram = "a;##1".parse()?;
//! let g = minimize(&extract(&pgld_to_pga(&p).normalize())?);
//! assert_eq!(g.to_string(), "0: a -> 0, 0\n");
//! # Ok::<(), polyseq::Error>(())
//! ```

pub mod action;
pub mod error;
pub mod gen;
pub mod notations;
pub mod pga;
pub mod polyadic;
pub mod services;
mod syntax;
pub mod synthesis;
pub mod thread;

pub use action::{Action, Basic, Internal};
pub use error::{Error, ParseError, Result};
pub use notations::{
    pga_to_pglc, pglc_to_pga, pglc_to_pgld, pgld_behaviour, pgld_oracle, pgld_to_pga,
    stream_to_pglc, NotationIndex, PglcInstr, PglcProgram, PgldInstr, PgldProgram,
};
pub use pga::{equal_terms, extract, normalize, CoreInstr, Instr, InstructionStream, PgaTerm};
pub use polyadic::{
    extract_polyadic, is_valid, project_fragment, substitute, Fragment, FragmentVector,
    RegisterFileState,
};
pub use services::{
    theta, theta_inv, use_service, IrfConfig, IrfMethod, IrfService, IrfState, Reply, Service,
};
pub use synthesis::{
    check_theorem1, check_theorem1_all, derive_registry, expand, generate, joint_behaviour,
    split_pgld, synthesize, theorem1_sides, Layout, SynthesisReport,
};
pub use thread::{abstract_internal, bisimilar, minimize, project, Node, ThreadGraph};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/threads.md")]
mod book_threads {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/instruction-sequences.md")]
mod book_instruction_sequences {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/notations.md")]
mod book_notations {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/polyadic.md")]
mod book_polyadic {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/services.md")]
mod book_services {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/synthesis.md")]
mod book_synthesis {}
