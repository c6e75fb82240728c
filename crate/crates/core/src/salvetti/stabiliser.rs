//! Pointwise stabilisers of cubes, by exhaustive search and by formula.

use crate::elements::{Element, Engine};
use crate::error::{Error, Result};

use super::{clique_products, Cube};

/// Elements `g u g^-1` (with `u ∈ U`) fixing every corner of the cube, where `g` is its base.
pub fn stabiliser_bruteforce(engine: &Engine, cube: &Cube) -> Result<Vec<Element>> {
    let all = engine.model().elements().ok_or(Error::InfiniteStabiliser)?;
    let g = &cube.base;
    let g_inv = engine.inv(g);
    let corners: Vec<Element> = clique_products(engine, &cube.cube_type).iter().map(|p| engine.mul(g, p)).collect();
    let mut out: Vec<Element> = all
        .iter()
        .map(|u| engine.mul(g, &engine.mul(&engine.from_u(u), &g_inv)))
        .filter(|x| corners.iter().all(|c| engine.as_u(&engine.mul(&engine.inv(c), &engine.mul(x, c))).is_some()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `g φ^{|T|}(O) g^-1` for the cube `g Q_T` with `T` non-empty, and `g U g^-1` for a vertex.
pub fn stabiliser_formula(engine: &Engine, cube: &Cube) -> Result<Vec<Element>> {
    let model = engine.model();
    let sub = if cube.dim() == 0 { model.elements() } else { model.phi_power_elements(cube.dim() as u32) }
        .ok_or(Error::InfiniteStabiliser)?;
    let g_inv = engine.inv(&cube.base);
    let mut out: Vec<Element> =
        sub.iter().map(|w| engine.mul(&cube.base, &engine.mul(&engine.from_u(w), &g_inv))).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
