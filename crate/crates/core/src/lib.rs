//! Exact arithmetic for recurrent fractions and the fields Q(m^{1/n}).
//!
//! The crate is split along the lines of the underlying mathematics:
//!
//! * [`bigmath`]: the rational scalar, exact determinants, n-th root
//!   enclosures and truncated decimal rendering.
//! * [`paraperm`]: triangular matrices, their corners and the
//!   parapermanent / paradeterminant.
//! * [`recfrac`]: recurrent fractions of order n, their rational
//!   truncations and dominant-root approximation.
//! * [`forms`]: (n,m)-forms, i.e. elements s0 + s1 m^{1/n} + ... of
//!   Q(m^{1/n}), with norm, conjugate and characteristic polynomial.
//! * [`pell`]: parametrized unit families of the generalized Pell equation
//!   and their exact verification.
//!
//! Everything is computed over exact big rationals; there is no floating
//! point anywhere in the library.

pub mod bigmath;
pub mod error;
pub mod forms;
pub mod paraperm;
pub mod pell;
pub mod recfrac;

pub use bigmath::{DecimalInterval, Rational, SquareMatrix};
pub use error::{Error, Result};
pub use forms::NmForm;
pub use paraperm::TriMatrix;
pub use recfrac::{MonicRecurrencePoly, RecurrentFraction, Truncation};
