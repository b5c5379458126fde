//! Predicates every other module is tested against.

use serde::Serialize;

use crate::grid::{Vertex, MAX_CUBE};
use crate::labeling::Labeling;

/// Outcome of [`is_polychromatic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyCheck {
    pub ok: bool,
    pub k: usize,
    pub cubes_checked: usize,
    /// Base of the first failing cube (lexicographically least).
    pub witness: Option<Vec<usize>>,
    /// Colors seen on the witness cube, in cube order.
    pub witness_colors: Option<Vec<u8>>,
    pub diagnostic: Option<String>,
}

/// Every unit cube sees all `k` colors.
pub fn is_polychromatic(c: &Labeling, k: usize) -> PolyCheck {
    let domain = c.domain();
    let cube = domain.cube_size();
    if k > cube {
        let base = domain.vertex_at(0);
        return PolyCheck {
            ok: false,
            k,
            cubes_checked: 0,
            witness_colors: Some(cube_colors(c, &base)),
            witness: Some(base.coords().to_vec()),
            diagnostic: Some(format!("a cube has {cube} vertices and cannot see {k} colors")),
        };
    }
    let full = if k == 128 { u128::MAX } else { (1u128 << k) - 1 };
    let data = c.data();
    let failing = domain.find_first_cube(|cube| {
        let mut seen = 0u128;
        for &v in cube {
            seen |= 1u128 << data[v];
        }
        seen & full != full
    });
    match failing {
        None => PolyCheck {
            ok: true,
            k,
            cubes_checked: domain.vertex_count(),
            witness: None,
            witness_colors: None,
            diagnostic: None,
        },
        Some(base) => {
            let base = domain.vertex_at(base);
            PolyCheck {
                ok: false,
                k,
                cubes_checked: domain.vertex_count(),
                witness_colors: Some(cube_colors(c, &base)),
                witness: Some(base.coords().to_vec()),
                diagnostic: Some(format!("cube at {base} misses a color")),
            }
        }
    }
}

/// Colors of the cube at `base`, in counter order.
pub fn cube_colors(c: &Labeling, base: &Vertex) -> Vec<u8> {
    let domain = c.domain();
    let mut buf = [0usize; MAX_CUBE];
    let n = domain.cube_size();
    domain.cube_indices(domain.index(base), &mut buf[..n]);
    buf[..n].iter().map(|&v| c.at(v)).collect()
}

/// No cube repeats a color. Equivalent to `2^d`-polychromatic by pigeonhole;
/// kept as a separate route for cross-checking.
pub fn is_injective_on_cubes(c: &Labeling) -> bool {
    let data = c.data();
    c.domain()
        .find_first_cube(|cube| {
            let mut seen = 0u128;
            for &v in cube {
                let bit = 1u128 << data[v];
                if seen & bit != 0 {
                    return true;
                }
                seen |= bit;
            }
            false
        })
        .is_none()
}

/// `c(e_axis x) != c(x)` for every `x`.
pub fn is_proper_2_coloring(c: &Labeling, axis: usize) -> bool {
    let domain = c.domain();
    (0..domain.vertex_count()).all(|x| c.at(domain.step(x, axis)) != c.at(x))
}

/// `c(g x) = c(x)` for every `x`.
pub fn is_invariant(c: &Labeling, g: &[i64]) -> bool {
    let domain = c.domain();
    assert_eq!(g.len(), domain.dim(), "group element has wrong arity");
    (0..domain.vertex_count()).all(|x| c.at(domain.act_index(x, g)) == c.at(x))
}

/// Unit vector `scale * e_axis`.
pub fn generator(d: usize, axis: usize, scale: i64) -> Vec<i64> {
    let mut g = vec![0; d];
    g[axis] = scale;
    g
}
