//! Parameterised boolean equation systems: the translation from a linear
//! process and a modal formula, normalisation into parameterised parity game
//! form and priority assignment.

pub mod pbes;
pub mod ppg;
pub mod pred;
pub mod translate;

pub use pbes::{check_wellformed, Diagnostic, Equation, Pbes};
pub use ppg::{assign_priorities, normalize_ppg, Atom, AtomBody, Kind, Ppg, PpgEquation, PpgError};
pub use pred::Pred;
pub use translate::{translate, TranslateError, TranslateOptions};
