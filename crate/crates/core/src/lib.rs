//! Exact decision and certification of evolutionarily stable strategies
//! (ESS) in symmetric two-player games, together with the MINMAX-CLIQUE to
//! ESS reduction and the two gadgets that lift a support restriction.
//!
//! Everything is exact: payoffs, probabilities and quadratic-form values are
//! arbitrary-precision rationals and there are no tolerances anywhere.
//!
//! ```
//! use esscert::catalog::hawk_dove;
//! use esscert::ess::{verify_ess, EssStatus};
//! use esscert::game::MixedStrategy;
//! use esscert::rational::ratio;
//!
//! let game = hawk_dove();
//! let sigma = MixedStrategy::new(vec![ratio(1, 2), ratio(1, 2)])?;
//! assert_eq!(verify_ess(&game, &sigma)?.status, EssStatus::Ess);
//! # Ok::<(), esscert::Error>(())
//! ```
//!
//! The accompanying guide lives in `book/` at the repository root.

pub mod catalog;
pub mod certificate;
pub mod clique;
pub mod corpus;
pub mod error;
pub mod ess;
pub mod format;
pub mod gadgets;
pub mod game;
mod intsolve;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod reduction;
pub mod tangent;

pub use error::{Error, Result};
pub use ess::{find_ess, verify_ess, EssStatus, EssVerdict};
pub use game::{MixedStrategy, SupportSet, SymmetricGame};
pub use rational::Rational;

// Run the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $path))]
            pub struct $name;
        };
    }
    chapter!(Introduction, "introduction.md");
    chapter!(Games, "games.md");
    chapter!(Stability, "stability.md");
    chapter!(Finding, "finding.md");
    chapter!(Clique, "clique.md");
    chapter!(Reduction, "reduction.md");
    chapter!(Gadgets, "gadgets.md");
    chapter!(Certificates, "certificates.md");
    chapter!(Cli, "cli.md");
}
