//! Tuplix calculus over cancellation meadows.
//!
//! * [`meadow`]: data terms, their normal form and a zero/equality check.
//! * [`calculus`]: tuplix terms and the normalizer producing basic forms.
//! * [`flux`]: the Kirchhoff operator and signed attributes.
//! * [`ftn`]: financial transfer networks and their composition pipelines.
//! * [`funcdef`]: lambdas, function definitions and let elimination.
//! * [`syntax`]: the `.tpx` language (lexer, parser, printer).

pub mod calculus;
pub mod flux;
pub mod ftn;
pub mod funcdef;
pub mod json;
pub mod meadow;
pub mod symbol;
pub mod syntax;
pub mod workspace;

pub use calculus::{Attribute, BasicForm, Tuplix};
pub use meadow::{DataTerm, Tri};
pub use symbol::Symbol;
