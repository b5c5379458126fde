//! Structure of `2^d`-polychromatic colorings.
//!
//! A `2^d`-coloring is injective on every unit cube, so for each direction
//! `i` the two faces `F_i x` and `F_i (e_i x)` of the cube at `x` split the
//! colors between them, with `F_i = {eps : eps_i = 0}`. Tracking one marker
//! color across these faces gives a proper 2-coloring along `e_i`
//! ([`extract_2_coloring`]). Conversely a tuple of per-direction
//! 2-colorings, all but at most one of which are constant along the other
//! directions, assembles into a `2^d`-coloring ([`assemble`]).
//!
//! For `d = 2` the module also enumerates every 4-polychromatic coloring of a
//! small torus and checks that each is invariant under `e_0^2` or `e_1^2`.

use serde::Serialize;

use crate::check::{generator, is_invariant, is_polychromatic, is_proper_2_coloring};
use crate::error::{Error, Result};
use crate::grid::{TorusDomain, MAX_CUBE};
use crate::labeling::Labeling;

fn require_full_polychromatic(c: &Labeling) -> Result<()> {
    let k = c.domain().cube_size();
    if c.k() != k {
        return Err(Error::Parameters(format!(
            "expected a {k}-coloring, got k = {}",
            c.k()
        )));
    }
    let check = is_polychromatic(c, k);
    if check.ok {
        Ok(())
    } else {
        Err(Error::NotPolychromatic {
            k,
            witness: check.witness.unwrap_or_default(),
            colors: check.witness_colors.unwrap_or_default(),
        })
    }
}

/// Bitmask of the colors on the face `F_axis x`, where `x` is given by index.
pub fn face_colors(c: &Labeling, axis: usize, x: usize) -> u128 {
    let domain = c.domain();
    let mut buf = [0usize; MAX_CUBE];
    let n = domain.cube_size();
    domain.cube_indices(x, &mut buf[..n]);
    (0..n)
        .filter(|eps| eps & (1 << axis) == 0)
        .fold(0u128, |m, eps| m | (1u128 << c.at(buf[eps])))
}

/// `c'(x) = 1` iff `marker` appears on the face `F_axis x`.
pub fn extract_2_coloring(c: &Labeling, axis: usize, marker: u8) -> Result<Labeling> {
    let domain = c.domain();
    if axis >= domain.dim() {
        return Err(Error::Parameters(format!("no generator e_{axis} in dimension {}", domain.dim())));
    }
    require_full_polychromatic(c)?;
    if marker as usize >= c.k() {
        return Err(Error::Parameters(format!("marker {marker} is not one of {} colors", c.k())));
    }
    let bit = 1u128 << marker;
    let data = (0..domain.vertex_count())
        .map(|x| u8::from(face_colors(c, axis, x) & bit != 0))
        .collect();
    Labeling::new(domain.clone(), 2, data)
}

/// One extracted 2-coloring per direction.
pub fn extract_tuple(c: &Labeling, marker: u8) -> Result<Vec<Labeling>> {
    (0..c.domain().dim())
        .map(|axis| extract_2_coloring(c, axis, marker))
        .collect()
}

/// `c(F_i x)` and `c(F_i (e_i x))` partition the colors, for every `x` and
/// every direction. Holds for any `2^d`-polychromatic `c`.
pub fn complementation_holds(c: &Labeling) -> bool {
    let domain = c.domain();
    let all = if c.k() == 128 { u128::MAX } else { (1u128 << c.k()) - 1 };
    (0..domain.dim()).all(|axis| {
        (0..domain.vertex_count()).all(|x| {
            let here = face_colors(c, axis, x);
            let there = face_colors(c, axis, domain.step(x, axis));
            here == all & !there
        })
    })
}

/// `inv[i][j]`: whether `tuple[i]` is invariant under `e_j`, for `j != i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    d: usize,
    inv: Vec<Vec<bool>>,
}

impl InvarianceReport {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Off-diagonal entry; the diagonal is meaningless and returns `None`.
    pub fn get(&self, i: usize, j: usize) -> Option<bool> {
        (i != j).then(|| self.inv[i][j])
    }

    /// Directions whose coloring is orthogonally invariant.
    pub fn invariant_directions(&self) -> Vec<usize> {
        (0..self.d)
            .filter(|&i| (0..self.d).all(|j| j == i || self.inv[i][j]))
            .collect()
    }

    /// Number of orthogonally invariant members.
    pub fn n(&self) -> usize {
        self.invariant_directions().len()
    }
}

impl Serialize for InvarianceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            d: usize,
            inv: Vec<Vec<Option<bool>>>,
            invariant_directions: &'a [usize],
            n: usize,
        }
        let dirs = self.invariant_directions();
        View {
            d: self.d,
            inv: (0..self.d)
                .map(|i| (0..self.d).map(|j| self.get(i, j)).collect())
                .collect(),
            invariant_directions: &dirs,
            n: dirs.len(),
        }
        .serialize(s)
    }
}

/// `[j != i && c(e_j x) = c(x) for all x]` for each `j`, with no properness
/// requirement on `c`.
pub fn orthogonal_invariance(c: &Labeling, i: usize) -> Vec<bool> {
    let d = c.domain().dim();
    (0..d)
        .map(|j| j != i && is_invariant(c, &generator(d, j, 1)))
        .collect()
}

fn check_tuple(tuple: &[Labeling]) -> Result<&TorusDomain> {
    let Some(first) = tuple.first() else {
        return Err(Error::Parameters("empty tuple".into()));
    };
    let domain = first.domain();
    if tuple.len() != domain.dim() {
        return Err(Error::Length {
            expected: domain.dim(),
            got: tuple.len(),
        });
    }
    for (i, c) in tuple.iter().enumerate() {
        if c.domain() != domain {
            return Err(Error::DomainMismatch);
        }
        if c.k() != 2 || !is_proper_2_coloring(c, i) {
            return Err(Error::ImproperTuple { index: i });
        }
    }
    Ok(domain)
}

pub fn invariance_report(tuple: &[Labeling]) -> Result<InvarianceReport> {
    let domain = check_tuple(tuple)?;
    Ok(InvarianceReport {
        d: domain.dim(),
        inv: tuple
            .iter()
            .enumerate()
            .map(|(i, c)| orthogonal_invariance(c, i))
            .collect(),
    })
}

/// `c(x) = sum_i tuple[i](x) * 2^i`. Needs at least `d-1` orthogonally
/// invariant members.
pub fn assemble(tuple: &[Labeling]) -> Result<Labeling> {
    let report = invariance_report(tuple)?;
    let d = report.dim();
    if report.n() + 1 < d {
        let inv = report.invariant_directions();
        return Err(Error::InsufficientInvariance {
            n: report.n(),
            directions: (0..d).filter(|i| !inv.contains(i)).collect(),
        });
    }
    let domain = tuple[0].domain();
    let data = (0..domain.vertex_count())
        .map(|x| {
            tuple
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, c)| acc | (c.at(x) << i))
        })
        .collect();
    Labeling::new(domain.clone(), 1 << d, data)
}

/// Domains the exhaustive search accepts.
pub const ENUMERATION_SIDES: [[usize; 2]; 3] = [[4, 4], [4, 6], [6, 6]];

/// Every `k`-polychromatic coloring of `domain`, in lexicographic order of
/// the row-major color sequence.
pub fn enumerate_polychromatic(domain: &TorusDomain, k: usize) -> Result<PolychromaticEnumerator> {
    let sides = domain.sides();
    let allowed = domain.dim() == 2 && ENUMERATION_SIDES.iter().any(|s| s[..] == *sides);
    if !allowed || k != 4 {
        return Err(Error::Infeasible(format!(
            "exhaustive enumeration supports k = 4 on sides {ENUMERATION_SIDES:?}; got k = {k} on {sides:?}"
        )));
    }
    Ok(PolychromaticEnumerator::new(domain.clone(), k))
}

/// Depth-first search over vertices in index order. A color is rejected as
/// soon as it repeats within some cube, which for `k = 2^d` is exactly the
/// polychromatic condition.
pub struct PolychromaticEnumerator {
    domain: TorusDomain,
    k: usize,
    /// Earlier vertices sharing a cube with each vertex.
    conflicts: Vec<Vec<usize>>,
    colors: Vec<u8>,
    next_color: Vec<u8>,
    pos: usize,
    done: bool,
}

impl PolychromaticEnumerator {
    fn new(domain: TorusDomain, k: usize) -> Self {
        let n = domain.vertex_count();
        let mut conflicts = vec![Vec::new(); n];
        let mut buf = [0usize; MAX_CUBE];
        let size = domain.cube_size();
        for base in 0..n {
            domain.cube_indices(base, &mut buf[..size]);
            for &a in &buf[..size] {
                for &b in &buf[..size] {
                    if b < a {
                        conflicts[a].push(b);
                    }
                }
            }
        }
        for c in conflicts.iter_mut() {
            c.sort_unstable();
            c.dedup();
        }
        Self {
            domain,
            k,
            conflicts,
            colors: vec![0; n],
            next_color: vec![0; n],
            pos: 0,
            done: false,
        }
    }
}

impl Iterator for PolychromaticEnumerator {
    type Item = Labeling;

    fn next(&mut self) -> Option<Labeling> {
        let n = self.colors.len();
        if self.done {
            return None;
        }
        loop {
            if self.pos == n {
                let out = Labeling::new(self.domain.clone(), self.k, self.colors.clone())
                    .expect("colors stay below k");
                self.pos = n - 1;
                return Some(out);
            }
            let v = self.pos;
            let found = (self.next_color[v]..self.k as u8)
                .find(|&col| self.conflicts[v].iter().all(|&u| self.colors[u] != col));
            match found {
                Some(col) => {
                    self.colors[v] = col;
                    self.next_color[v] = col + 1;
                    self.pos += 1;
                    if self.pos < n {
                        self.next_color[self.pos] = 0;
                    }
                }
                None => {
                    self.next_color[v] = 0;
                    if v == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pos -= 1;
                }
            }
        }
    }
}

/// Whether the colors first appear in the order `0, 1, 2, ..`; exactly one
/// labeling per color-permutation class has this property.
pub fn is_color_canonical(c: &Labeling) -> bool {
    let mut next = 0u8;
    for &x in c.data() {
        if x == next {
            next += 1;
        } else if x > next {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub sides: Vec<usize>,
    pub total: usize,
    /// Classes up to renaming colors.
    pub total_up_to_color_permutation: usize,
    pub e0_squared_only: usize,
    pub e1_squared_only: usize,
    pub both: usize,
    pub violations: usize,
    /// First coloring invariant under neither `e_0^2` nor `e_1^2`.
    pub counterexample: Option<Vec<u8>>,
}

/// Enumerates every 4-polychromatic coloring of a small `d = 2` torus and
/// classifies it by `e_0^2`/`e_1^2` invariance.
pub fn verify_dichotomy_d2(domain: &TorusDomain) -> Result<DichotomyReport> {
    let mut report = DichotomyReport {
        sides: domain.sides().to_vec(),
        total: 0,
        total_up_to_color_permutation: 0,
        e0_squared_only: 0,
        e1_squared_only: 0,
        both: 0,
        violations: 0,
        counterexample: None,
    };
    for c in enumerate_polychromatic(domain, 4)? {
        report.total += 1;
        report.total_up_to_color_permutation += usize::from(is_color_canonical(&c));
        let e0 = is_invariant(&c, &[2, 0]);
        let e1 = is_invariant(&c, &[0, 2]);
        match (e0, e1) {
            (true, true) => report.both += 1,
            (true, false) => report.e0_squared_only += 1,
            (false, true) => report.e1_squared_only += 1,
            (false, false) => {
                report.violations += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(c.data().to_vec());
                }
            }
        }
    }
    Ok(report)
}
