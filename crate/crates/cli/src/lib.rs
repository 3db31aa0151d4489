//! Library surface of the `lconn` verifier: manifest loading, polynomial
//! expression parsing, instance construction, the identity suite, and report
//! rendering. The binary in `main.rs` is a thin argument-parsing wrapper
//! around these modules; integration tests drive them directly.

pub mod expr;
pub mod instance;
pub mod manifest;
pub mod report;
pub mod suite;
