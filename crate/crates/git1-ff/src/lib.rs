//! Explicit chart functions on degenerate genus-1 curves and exact checks of
//! the identities between their coefficients.

pub mod coords;
pub mod identities;
pub mod poly;
pub mod profile;
pub mod sym;
pub mod table;

pub use coords::{random_coordinatization, CoordinatizedCurve, FfError, Setting};
pub use identities::{verify_identities, verify_symbolic, verify_table, IdentityReport};
pub use profile::{vanishing_profile, VanishingProfile};
pub use table::{build_table, chart_table, realize, realize_fold, realize_ngon, weight_act, CoordinateTable};

use git1::curve::Curve;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identity reports over `draws` random coordinatizations, merged.
pub fn verify_random(c: &Curve, draws: usize, seed: u64) -> Result<IdentityReport, FfError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = IdentityReport { parameters: format!("{draws} draws, seed {seed}"), identities: Default::default() };
    for _ in 0..draws {
        let cc = random_coordinatization(c, &mut rng)?;
        total.merge(&verify_identities(&cc)?);
    }
    Ok(total)
}
