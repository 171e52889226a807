//! Exact coefficient rings: `Z[v, v^-1]`, polynomials over it, its fraction
//! field, and the localization at the factors `1 - v^(2i)`.

mod bivar;
mod laurent;
pub mod linalg;
mod localized;
mod ratfunc;

pub use bivar::{annihilator_family, p_of_v, split_at_one, BivarPoly};
pub use laurent::LaurentPoly;
pub use localized::{divides_p_power, specialize_sqrt_q, LocalizedScalar, SqrtQValue};
pub use ratfunc::RatFunc;
