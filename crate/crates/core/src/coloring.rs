//! `(2^d-1)`-polychromatic colorings built by induction over a toast.
//!
//! Every piece `K` gets a root (its lexicographically least vertex) and the
//! chart `phi_K(x) = (x - root_K) mod 2` into `Z_2^d`. With one fixed
//! surjective base labeling `a` of `Z_2^d`, the *template* of `K` is
//! `a ∘ phi_K`. Pieces are processed innermost first. For a piece `K` with
//! children `L_1..L_m`:
//!
//! * the gap `P_i = B_R(L_i) \ L_i` is cut into shells of width `2d` by
//!   distance to `L_i`; shell `t` is colored `a_t ∘ phi_K`, where
//!   `a_0, a_1, ..` is a one-vertex-at-a-time path (see [`crate::cube_path`])
//!   from `L_i`'s template read in `K`'s chart to `a`;
//! * the rest of `K` not inside a child gets `K`'s template.
//!
//! Children are never recolored. Any unit cube then lies in the exterior, or
//! touches one gap and at most two consecutive shells, and both neighbouring
//! shell labelings are surjective on it.

use std::collections::HashMap;

use serde::Serialize;

use crate::cube_path::{connect, CubeLabeling, LabelingPath};
use crate::error::{Error, Result};
use crate::grid::{TorusDomain, Vertex, VertexSet};
use crate::labeling::Labeling;
use crate::toast::{iteration_order, validate, PieceId, Toast};

/// Default thickening radius `R = 2^{d+2} d`.
pub fn default_radius(d: usize) -> usize {
    (1 << (d + 2)) * d
}

/// Default toast separation `r = (2^{d+3}+1) d = 2R + d`.
pub fn default_separation(d: usize) -> usize {
    ((1 << (d + 3)) + 1) * d
}

/// Index of the last shell, `2^{d+1}`.
pub fn last_shell(d: usize) -> usize {
    1 << (d + 1)
}

/// The lexicographically least vertex of `set`.
pub fn choose_root(set: &VertexSet) -> Result<Vertex> {
    set.first()
        .map(|i| set.domain().vertex_at(i))
        .ok_or(Error::EmptySet)
}

/// `phi_K(x)` as a `d`-bit mask (bit `i` is the parity of `x_i - root_i`).
pub fn phi(set: &VertexSet, x: &Vertex) -> Result<usize> {
    Ok(parity_mask(&choose_root(set)?, x))
}

pub fn parity_mask(root: &Vertex, x: &Vertex) -> usize {
    root.coords()
        .iter()
        .zip(x.coords())
        .enumerate()
        .fold(0, |m, (i, (r, c))| m | (((r ^ c) & 1) << i))
}

/// Parity mask of a vertex given by index, against precomputed root parities.
#[inline]
fn parity_mask_index(domain: &TorusDomain, root_mask: usize, index: usize) -> usize {
    let mut m = 0;
    for axis in 0..domain.dim() {
        m |= (domain.coord(index, axis) & 1) << axis;
    }
    m ^ root_mask
}

fn root_mask(root: &Vertex) -> usize {
    root.coords()
        .iter()
        .enumerate()
        .fold(0, |m, (i, c)| m | ((c & 1) << i))
}

/// `a ∘ phi` for a fixed surjective `a` and root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitiveTemplate {
    base: CubeLabeling,
    root: Vertex,
}

impl RepetitiveTemplate {
    pub fn new(base: CubeLabeling, root: Vertex) -> Result<Self> {
        if base.d() != root.coords().len() {
            return Err(Error::Arity {
                expected: base.d(),
                got: root.coords().len(),
            });
        }
        if !base.is_surjective() {
            return Err(Error::NotSurjective {
                colors: base.color_count(),
                missing: base.missing_colors(),
            });
        }
        Ok(Self { base, root })
    }

    /// The template of a piece: rooted at the piece's least vertex.
    pub fn for_piece(base: CubeLabeling, cells: &VertexSet) -> Result<Self> {
        Self::new(base, choose_root(cells)?)
    }

    pub fn base(&self) -> &CubeLabeling {
        &self.base
    }

    pub fn root(&self) -> &Vertex {
        &self.root
    }

    pub fn color(&self, x: &Vertex) -> u8 {
        self.base.at(parity_mask(&self.root, x))
    }

    /// The template extended to the whole torus.
    pub fn to_labeling(&self, domain: &TorusDomain) -> Result<Labeling> {
        let rm = root_mask(&self.root);
        let data = (0..domain.vertex_count())
            .map(|i| self.base.at(parity_mask_index(domain, rm, i)))
            .collect();
        Labeling::new(domain.clone(), self.base.color_count(), data)
    }
}

pub fn template_color(t: &RepetitiveTemplate, x: &Vertex) -> u8 {
    t.color(x)
}

/// Shell of a gap vertex: `floor(dist(x, L) / 2d)`, capped at `2^{d+1}`.
pub fn shell_index(inner: &VertexSet, x: &Vertex, radius: usize) -> Result<usize> {
    let domain = inner.domain();
    let dist = domain.graph_dist(inner, x)?;
    if dist == 0 {
        return Err(Error::Parameters(format!("{x} lies inside the inner piece")));
    }
    if dist > radius {
        return Err(Error::Parameters(format!(
            "{x} is at distance {dist} > R = {radius} from the inner piece"
        )));
    }
    Ok(shell_of(domain.dim(), dist))
}

#[inline]
fn shell_of(d: usize, dist: usize) -> usize {
    (dist / (2 * d)).min(last_shell(d))
}

/// Everything needed to color a toast: validated parameters, roots, and
/// the interpolation path for every non-root piece.
#[derive(Clone, Debug)]
pub struct ColoringPlan {
    toast: Toast,
    base: CubeLabeling,
    radius: usize,
    roots: HashMap<PieceId, Vertex>,
    paths: HashMap<PieceId, LabelingPath>,
    order: Vec<PieceId>,
}

const UNSET: u8 = u8::MAX;

impl ColoringPlan {
    /// Checks `r >= 2R + d`, `2d | R`, `R / 2d >= 2^{d+1}`, that the toast is
    /// valid and that `base` is surjective, then precomputes roots and paths.
    pub fn new(toast: Toast, base: CubeLabeling, radius: usize) -> Result<Self> {
        let domain = toast.domain();
        let d = domain.dim();
        if base.d() != d {
            return Err(Error::Parameters(format!(
                "base labeling has dimension {} but the torus has dimension {d}",
                base.d()
            )));
        }
        if !base.is_surjective() {
            return Err(Error::NotSurjective {
                colors: base.color_count(),
                missing: base.missing_colors(),
            });
        }
        let width = 2 * d;
        if !radius.is_multiple_of(width) || radius / width < last_shell(d) {
            return Err(Error::Parameters(format!(
                "R = {radius} must be a multiple of 2d = {width} with R/2d >= 2^(d+1) = {}",
                last_shell(d)
            )));
        }
        if toast.r() < 2 * radius + d {
            return Err(Error::Parameters(format!(
                "toast separation r = {} is below 2R + d = {}",
                toast.r(),
                2 * radius + d
            )));
        }
        let report = validate(&toast);
        if !report.valid {
            return Err(Error::InvalidToast(format!("{:?}", report.violations)));
        }

        let mut roots = HashMap::new();
        for p in toast.pieces() {
            roots.insert(p.id(), choose_root(p.cells())?);
        }
        let mut paths = HashMap::new();
        for p in toast.pieces() {
            let Some(parent) = p.parent() else { continue };
            let shift = parity_mask(&roots[&parent], &roots[&p.id()]);
            paths.insert(p.id(), connect(&base.translate(shift), &base)?);
        }
        let order = iteration_order(&toast);
        Ok(Self {
            toast,
            base,
            radius,
            roots,
            paths,
            order,
        })
    }

    /// Uses the default `R` for the toast's dimension.
    pub fn with_default_radius(toast: Toast, base: CubeLabeling) -> Result<Self> {
        let r = default_radius(toast.domain().dim());
        Self::new(toast, base, r)
    }

    pub fn toast(&self) -> &Toast {
        &self.toast
    }

    pub fn base(&self) -> &CubeLabeling {
        &self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn shell_width(&self) -> usize {
        2 * self.toast.domain().dim()
    }

    pub fn root(&self, id: PieceId) -> Result<&Vertex> {
        self.roots.get(&id).ok_or(Error::UnknownPiece(id))
    }

    /// `a_0, .., a_T` for the gap around `child`, `a_0` being the child's
    /// template in its parent's chart and `a_T = a`.
    pub fn interpolation(&self, child: PieceId) -> Result<&LabelingPath> {
        self.paths.get(&child).ok_or(Error::UnknownPiece(child))
    }

    pub fn template(&self, id: PieceId) -> Result<RepetitiveTemplate> {
        RepetitiveTemplate::new(self.base.clone(), self.root(id)?.clone())
    }

    /// `P = B_R(L) \ L` with distances to `L`, in BFS order.
    pub fn gap(&self, child: PieceId) -> Result<Vec<(usize, usize)>> {
        let cells = self.toast.piece(child)?.cells();
        let mut out = Vec::new();
        self.toast.domain().grow(cells, self.radius, |x, dist| out.push((x, dist)));
        Ok(out)
    }

    /// `E_K = K \ ∪ B_R(L_i)`.
    pub fn exterior(&self, id: PieceId) -> Result<VertexSet> {
        let piece = self.toast.piece(id)?;
        let mut covered = VertexSet::empty(self.toast.domain());
        for &child in piece.children() {
            let cells = self.toast.piece(child)?.cells();
            covered.union_with(&self.toast.domain().ball(cells, self.radius)?);
        }
        Ok(piece.cells().difference(&covered))
    }

    pub fn build(&self) -> Labeling {
        self.build_observed(|_, _| {})
    }

    /// Builds the coloring, calling `observe(piece, colors)` after each piece
    /// is finished. Vertices not yet colored hold `u8::MAX`.
    pub fn build_observed(&self, mut observe: impl FnMut(PieceId, &[u8])) -> Labeling {
        let domain = self.toast.domain();
        let d = domain.dim();
        let mut colors = vec![UNSET; domain.vertex_count()];
        for &id in &self.order {
            let piece = self.toast.piece(id).expect("order lists known pieces");
            let rm = root_mask(&self.roots[&id]);
            for &child in piece.children() {
                let path = &self.paths[&child];
                let cells = self.toast.piece(child).expect("child exists").cells();
                domain.grow(cells, self.radius, |x, dist| {
                    debug_assert_eq!(colors[x], UNSET, "gap overlaps colored region");
                    let a = path.at_clamped(shell_of(d, dist));
                    colors[x] = a.at(parity_mask_index(domain, rm, x));
                });
            }
            for x in piece.cells().iter() {
                if colors[x] == UNSET {
                    colors[x] = self.base.at(parity_mask_index(domain, rm, x));
                }
            }
            observe(id, &colors);
        }
        Labeling::new(domain.clone(), self.base.color_count(), colors)
            .expect("every vertex lies in the top piece")
    }

    /// Exhaustive per-cube check of the construction's structure; see
    /// [`PlanReport`].
    pub fn verify(&self, c: &Labeling) -> PlanReport {
        verify_plan_invariants(self, c)
    }
}

/// Builds the coloring for `toast` with base `a` and radius `R`.
pub fn build_coloring(toast: Toast, base: CubeLabeling, radius: usize) -> Result<Labeling> {
    Ok(ColoringPlan::new(toast, base, radius)?.build())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanViolationKind {
    /// Exterior cube not colored by the piece's template.
    Template,
    /// Cube touches the thickenings of two different children.
    MultipleGaps { children: Vec<PieceId> },
    /// Shell indices on the cube span more than two consecutive values.
    ShellSpan { min: usize, max: usize },
    /// A gap-cube vertex does not carry its shell's labeling.
    ShellColor,
    /// The cube misses a color.
    NotSurjective { missing: Vec<u8> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanViolation {
    /// Innermost piece containing the cube.
    pub piece: PieceId,
    pub base: Vec<usize>,
    #[serde(flatten)]
    pub kind: PlanViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlanReport {
    pub ok: bool,
    pub cubes_checked: usize,
    pub exterior_cubes: usize,
    pub gap_cubes: usize,
    /// Gap cubes that also touch the inner piece.
    pub inner_seam_cubes: usize,
    /// Gap cubes that also touch the exterior.
    pub outer_seam_cubes: usize,
    pub violation_count: usize,
    /// The first violations, in piece order then base order.
    pub violations: Vec<PlanViolation>,
}

const REPORTED_VIOLATIONS: usize = 64;

#[derive(Default)]
struct Tally {
    cubes: usize,
    exterior: usize,
    gap: usize,
    inner: usize,
    outer: usize,
    count: usize,
    first: Vec<(usize, PlanViolationKind)>,
}

impl Tally {
    fn flag(&mut self, base: usize, kind: PlanViolationKind) {
        self.count += 1;
        if self.first.len() < REPORTED_VIOLATIONS {
            self.first.push((base, kind));
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cubes += other.cubes;
        self.exterior += other.exterior;
        self.gap += other.gap;
        self.inner += other.inner;
        self.outer += other.outer;
        self.count += other.count;
        self.first.extend(other.first);
        self.first.sort_by_key(|(b, _)| *b);
        self.first.truncate(REPORTED_VIOLATIONS);
        self
    }
}

/// Checks, for every unit cube, against the innermost piece `K` containing
/// it:
///
/// * a cube touching no child thickening is colored by `K`'s template;
/// * otherwise it touches exactly one child's thickening, its shell indices
///   (inner-piece vertices count as shell 0, exterior vertices as the last
///   shell) span at most two consecutive values, and every vertex carries
///   the labeling of its shell;
/// * its colors are all of `{0..2^d-2}`.
pub fn verify_plan_invariants(plan: &ColoringPlan, c: &Labeling) -> PlanReport {
    let toast = &plan.toast;
    let domain = toast.domain();
    let d = domain.dim();
    let k = plan.base.color_count();
    let full: u128 = (1u128 << k) - 1;
    let last = last_shell(d);
    let data = c.data();

    // tag[x] = (child slot + 1) << 16 | distance to that child (0 inside it).
    let mut tag = vec![0u32; domain.vertex_count()];
    let mut report = PlanReport::default();

    for &id in &plan.order {
        let piece = toast.piece(id).expect("known piece");
        let rm = root_mask(&plan.roots[&id]);
        let children = piece.children();
        let mut touched = Vec::new();
        for (slot, &child) in children.iter().enumerate() {
            let cells = toast.piece(child).expect("child").cells();
            let hi = ((slot + 1) as u32) << 16;
            for x in cells.iter() {
                tag[x] = hi;
            }
            touched.push(child);
            domain.grow(cells, plan.radius, |x, dist| tag[x] = hi | dist as u32);
        }
        let cells = piece.cells();
        let tag_ref = &tag;
        let tally = domain.fold_cubes(
            Tally::default,
            |acc, base, cube| {
                if !cube.iter().all(|&v| cells.contains(v)) {
                    return;
                }
                let first = tag_ref[cube[0]];
                if first != 0 && first & 0xffff == 0 && cube.iter().all(|&v| tag_ref[v] == first) {
                    // Entirely inside one child: that child's own business.
                    return;
                }
                acc.cubes += 1;
                let mut seen = 0u128;
                for &v in cube {
                    seen |= 1u128 << data[v];
                }
                if seen & full != full {
                    let missing = (0..k as u8).filter(|&col| seen & (1 << col) == 0).collect();
                    acc.flag(base, PlanViolationKind::NotSurjective { missing });
                }

                let mut slots: Vec<u32> = cube.iter().map(|&v| tag_ref[v] >> 16).filter(|&s| s != 0).collect();
                slots.sort_unstable();
                slots.dedup();
                match slots.len() {
                    0 => {
                        acc.exterior += 1;
                        let ok = cube
                            .iter()
                            .all(|&v| data[v] == plan.base.at(parity_mask_index(domain, rm, v)));
                        if !ok {
                            acc.flag(base, PlanViolationKind::Template);
                        }
                    }
                    1 => {
                        acc.gap += 1;
                        let slot = slots[0] as usize - 1;
                        let path = &plan.paths[&children[slot]];
                        let (mut lo, mut hi) = (usize::MAX, 0);
                        let (mut inner, mut outer) = (false, false);
                        let mut colors_ok = true;
                        for &v in cube {
                            let t = tag_ref[v];
                            let shell = if t == 0 {
                                outer = true;
                                last
                            } else {
                                let dist = (t & 0xffff) as usize;
                                inner |= dist == 0;
                                shell_of(d, dist)
                            };
                            lo = lo.min(shell);
                            hi = hi.max(shell);
                            let expected = path.at_clamped(shell).at(parity_mask_index(domain, rm, v));
                            colors_ok &= data[v] == expected;
                        }
                        acc.inner += usize::from(inner);
                        acc.outer += usize::from(outer);
                        if hi - lo > 1 {
                            acc.flag(base, PlanViolationKind::ShellSpan { min: lo, max: hi });
                        }
                        if !colors_ok {
                            acc.flag(base, PlanViolationKind::ShellColor);
                        }
                    }
                    _ => {
                        let mut ids: Vec<PieceId> = slots.iter().map(|&s| children[s as usize - 1]).collect();
                        ids.sort_unstable();
                        acc.flag(base, PlanViolationKind::MultipleGaps { children: ids });
                    }
                }
            },
            Tally::merge,
        );

        for child in touched {
            let cells = toast.piece(child).expect("child").cells();
            for x in cells.iter() {
                tag[x] = 0;
            }
            domain.grow(cells, plan.radius, |x, _| tag[x] = 0);
        }

        report.cubes_checked += tally.cubes;
        report.exterior_cubes += tally.exterior;
        report.gap_cubes += tally.gap;
        report.inner_seam_cubes += tally.inner;
        report.outer_seam_cubes += tally.outer;
        report.violation_count += tally.count;
        for (base, kind) in tally.first {
            if report.violations.len() < REPORTED_VIOLATIONS {
                report.violations.push(PlanViolation {
                    piece: id,
                    base: domain.vertex_at(base).coords().to_vec(),
                    kind,
                });
            }
        }
    }
    report.ok = report.violation_count == 0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{generator, is_invariant, is_polychromatic};
    use crate::toast::{generate, GenerationPolicy, PieceShape, PieceSpec};

    fn dom(sides: &[usize]) -> TorusDomain {
        TorusDomain::new(sides.to_vec()).unwrap()
    }

    fn base2() -> CubeLabeling {
        CubeLabeling::from_values(vec![0, 1, 2, 0]).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(default_radius(2), 32);
        assert_eq!(default_separation(2), 66);
        assert_eq!(default_radius(3), 96);
        assert_eq!(default_separation(3), 195);
        for d in 1..=5 {
            assert_eq!(default_separation(d), 2 * default_radius(d) + d);
            assert_eq!(default_radius(d) / (2 * d), last_shell(d));
        }
    }

    #[test]
    fn root_examples() {
        let d = dom(&[4, 4]);
        assert_eq!(choose_root(&VertexSet::full(&d)).unwrap().coords(), &[0, 0]);
        let d = dom(&[4, 6]);
        let pts = [d.vertex(&[3, 1]).unwrap(), d.vertex(&[2, 5]).unwrap()];
        let set = VertexSet::from_vertices(&d, pts.iter());
        assert_eq!(choose_root(&set).unwrap().coords(), &[2, 5]);
        let rev = VertexSet::from_vertices(&d, pts.iter().rev());
        assert_eq!(choose_root(&rev).unwrap(), choose_root(&set).unwrap());
        assert!(matches!(choose_root(&VertexSet::empty(&d)), Err(Error::EmptySet)));
    }

    #[test]
    fn phi_examples() {
        let d = dom(&[6, 6]);
        let k = VertexSet::full(&d);
        let root = d.vertex(&[0, 0]).unwrap();
        assert_eq!(phi(&k, &root).unwrap(), 0);
        assert_eq!(phi(&k, &d.vertex(&[3, 2]).unwrap()).unwrap(), 0b01);
        for x in 0..d.vertex_count() {
            let v = d.vertex_at(x);
            for axis in 0..2 {
                let moved = d.act(&v, &generator(2, axis, 2));
                assert_eq!(phi(&k, &moved).unwrap(), phi(&k, &v).unwrap());
            }
        }
    }

    #[test]
    fn template_example_rows() {
        let d = dom(&[6, 6]);
        let t = RepetitiveTemplate::new(base2(), d.vertex(&[0, 0]).unwrap()).unwrap();
        // Rows are lines of constant x_1; along a row x_0 varies.
        for y in 0..6i64 {
            for x in 0..6i64 {
                let want = match (y % 2, x % 2) {
                    (0, 0) => 0,
                    (0, 1) => 1,
                    (1, 0) => 2,
                    _ => 0,
                };
                assert_eq!(t.color(&d.vertex(&[x, y]).unwrap()), want);
            }
        }
        let full = t.to_labeling(&d).unwrap();
        assert!(is_polychromatic(&full, 3).ok);
        for axis in 0..2 {
            assert!(is_invariant(&full, &generator(2, axis, 2)));
        }
        assert!(RepetitiveTemplate::new(CubeLabeling::from_values(vec![0, 1, 0, 1]).unwrap(), d.vertex(&[0, 0]).unwrap()).is_err());
    }

    #[test]
    fn shell_examples() {
        let d = dom(&[80, 80]);
        let l = VertexSet::boxed(&d, &[30, 30], &[40, 40]).unwrap();
        let at = |x: i64| d.vertex(&[39 + x, 35]).unwrap();
        assert_eq!(shell_index(&l, &at(1), 32).unwrap(), 0);
        assert_eq!(shell_index(&l, &at(7), 32).unwrap(), 1);
        assert_eq!(shell_index(&l, &at(32), 32).unwrap(), 8);
        assert!(shell_index(&l, &at(0), 32).is_err());
        assert!(shell_index(&l, &at(33), 32).is_err());
    }

    #[test]
    fn plan_parameter_checks() {
        let t = Toast::trivial(dom(&[8, 8]), 66);
        assert!(ColoringPlan::new(t.clone(), base2(), 32).is_ok());
        assert!(ColoringPlan::new(t.clone(), base2(), 30).is_err());
        assert!(ColoringPlan::new(t.clone(), base2(), 28).is_err());
        assert!(ColoringPlan::new(Toast::trivial(dom(&[8, 8]), 65), base2(), 32).is_err());
        assert!(ColoringPlan::new(t, CubeLabeling::from_values(vec![0, 1, 0, 1]).unwrap(), 32).is_err());
    }

    #[test]
    fn trivial_toast_gives_template() {
        let d = dom(&[8, 6]);
        let t = Toast::trivial(d.clone(), 66);
        let plan = ColoringPlan::new(t, base2(), 32).unwrap();
        let c = plan.build();
        let template = RepetitiveTemplate::new(base2(), d.vertex(&[0, 0]).unwrap()).unwrap();
        assert_eq!(c, template.to_labeling(&d).unwrap());
        let rep = plan.verify(&c);
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.gap_cubes, 0);
        assert_eq!(rep.cubes_checked, 48);
    }

    #[test]
    fn one_dimensional_is_constant() {
        let d = dom(&[64]);
        let base = CubeLabeling::from_values(vec![0, 0]).unwrap();
        let toast = generate(&d, default_separation(1), 1, 3, &GenerationPolicy::default()).unwrap();
        let c = build_coloring(toast, base, default_radius(1)).unwrap();
        assert!(c.data().iter().all(|&x| x == 0));
        assert!(is_polychromatic(&c, 1).ok);
    }

    /// Inner piece rooted at odd coordinates so the chart translation matters.
    fn odd_root_toast() -> Toast {
        let d = dom(&[160, 160]);
        let specs = vec![
            PieceSpec {
                id: 0,
                parent: None,
                shape: PieceShape::Box(vec![[0, 160], [0, 160]]),
            },
            PieceSpec {
                id: 1,
                parent: Some(0),
                shape: PieceShape::Box(vec![[67, 81], [69, 90]]),
            },
        ];
        Toast::from_specs(d, 66, specs).unwrap()
    }

    #[test]
    fn odd_root_child_is_stitched() {
        let plan = ColoringPlan::new(odd_root_toast(), base2(), 32).unwrap();
        assert_eq!(plan.interpolation(1).unwrap().first(), &base2().translate(0b11));
        let c = plan.build();
        assert!(is_polychromatic(&c, 3).ok);
        let rep = plan.verify(&c);
        assert!(rep.ok, "{rep:?}");
        assert!(rep.gap_cubes > 0 && rep.inner_seam_cubes > 0 && rep.outer_seam_cubes > 0);
        assert_eq!(rep.cubes_checked, 160 * 160);
    }

    #[test]
    fn corrupted_gap_vertex_is_pinpointed() {
        let plan = ColoringPlan::new(odd_root_toast(), base2(), 32).unwrap();
        let mut c = plan.build();
        let (victim, _) = plan.gap(1).unwrap()[40];
        let old = c.at(victim);
        c.set(victim, (old + 1) % 3).unwrap();
        let rep = plan.verify(&c);
        assert!(!rep.ok);
        let bad = c.domain().vertex_at(victim);
        // Every flagged cube contains the victim.
        for v in &rep.violations {
            let cube = c.domain().cube_at(&c.domain().vertex(&v.base.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap());
            assert!(cube.vertices.contains(&bad), "{v:?}");
        }
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v.kind, PlanViolationKind::ShellColor)));
    }

    #[test]
    fn exterior_and_gap_partition_piece() {
        let plan = ColoringPlan::new(odd_root_toast(), base2(), 32).unwrap();
        let ext = plan.exterior(0).unwrap();
        let gap = plan.gap(1).unwrap();
        let inner = plan.toast().piece(1).unwrap().cells().len();
        assert_eq!(ext.len() + gap.len() + inner, 160 * 160);
        assert!(gap.iter().all(|&(x, _)| !ext.contains(x)));
    }
}
