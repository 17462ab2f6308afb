//! Finite-domain constraint propagation with propagators derived through
//! injective variable views, plus brute-force oracles that check the
//! derivation theorems on small universes.
//!
//! A derived propagator runs a generic base propagator on the image of the
//! store under a family of views and maps the result back:
//!
//! ```
//! use fdviews::prelude::*;
//!
//! let mut store = DomainStore::default();
//! let x = store.add_int(1, 3).unwrap();
//! let y = store.add_int(2, 2).unwrap();
//! let z = store.add_int(0, 5).unwrap();
//! // min(x, y) = z from max(-x, -y) = -z
//! let min = derive(&max_ternary(x, y, z).unwrap(), &[
//!     Binding::Var(x, View::minus()),
//!     Binding::Var(y, View::minus()),
//!     Binding::Var(z, View::minus()),
//! ]).unwrap();
//! let mut engine = Engine::new(vec![min.into_dyn()]);
//! engine.run(&mut store).unwrap();
//! assert_eq!(store.int_domain(z), IntDomain::interval(1, 2));
//! ```

pub mod bench;
pub mod decompose;
pub mod derive;
pub mod domains;
pub mod error;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod propagators;
pub mod relax;
pub mod search;
pub mod views;

pub use error::{Error, Result};

/// Exact scalar used by the real-relaxation checks.
pub type Rational = num_rational::Ratio<i128>;

pub mod prelude {
    pub use crate::derive::{derive, Binding, Derived};
    pub use crate::domains::{
        BoolDomain, DomainStore, IntDomain, IntSet, SetDomain, Sort, Universe, Value, VarDomain, VarId,
    };
    pub use crate::kernel::{Engine, EventMask, Level, Outcome, Propagator, PropagatorStatus};
    pub use crate::propagators::*;
    pub use crate::views::View;
}
