//! Linear codes built from partial spreads of F_q^{2k}, with exact
//! constructions and three independent minimality checks.
//!
//! The usual pipeline is field → spread → defining set → checks:
//!
//! ```
//! use spread_codes::{field::make_field, spread::companion_quadruple};
//! use spread_codes::code::DefiningSet;
//! use spread_codes::minimality::{check_geometric, Verdict};
//!
//! let f4 = make_field(2, 2).unwrap();
//! let spread = companion_quadruple(&f4, 2).unwrap();
//! let code = DefiningSet::from_spread(&spread);
//! assert_eq!(code.len(), 60);
//! assert_eq!(check_geometric(&code).unwrap().verdict, Verdict::Minimal);
//! ```

pub mod cli;
pub mod code;
pub mod error;
pub mod field;
pub mod linalg;
pub mod minimality;
pub mod poly;
pub mod spread;
pub mod suite;

pub use error::{Error, Result};
pub use field::{make_field, Elem, FieldSpec};
pub use linalg::Subspace;
