//! Which weights appear among the nonvanishing generators.

use crate::table::CoordinateTable;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingProfile {
    pub omega1: BTreeSet<usize>,
    pub omega0_rays: BTreeSet<usize>,
}

/// `omega1`: marks with `x_i != 0`. `omega0_rays`: marks `i` such that one of
/// `Pi_i`, `B_ij`, `E_ij` is nonzero (all of weight a multiple of `e_i`).
pub fn vanishing_profile(t: &CoordinateTable) -> VanishingProfile {
    let omega1 = t.x.iter().filter(|(_, v)| !v.is_zero()).map(|(&i, _)| i).collect();
    let gl = &t.globals;
    let mut omega0_rays: BTreeSet<usize> = gl.pi.iter().filter(|(_, v)| !v.is_zero()).map(|(&i, _)| i).collect();
    for (&(i, _), v) in gl.b.iter().chain(gl.e.iter()) {
        if !v.is_zero() {
            omega0_rays.insert(i);
        }
    }
    VanishingProfile { omega1, omega0_rays }
}
