//! Toast decompositions of a torus: families of pieces that are pairwise
//! either nested with an `r`-margin or more than `r` apart, and that cover the
//! whole domain.
//!
//! A toast here is plain data; [`validate`] is the authority on whether it is
//! one. [`generate`] builds random box toasts whose top piece is the whole
//! torus.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{TorusDomain, VertexSet};
use crate::labeling::FORMAT_VERSION;

pub type PieceId = usize;

/// How a piece was described. Boxes are half-open: `lo[i] <= x_i < hi[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceShape {
    Box(Vec<[usize; 2]>),
    Cells(Vec<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub struct ToastPiece {
    id: PieceId,
    parent: Option<PieceId>,
    children: Vec<PieceId>,
    shape: PieceShape,
    cells: VertexSet,
}

impl ToastPiece {
    pub fn id(&self) -> PieceId {
        self.id
    }

    pub fn parent(&self) -> Option<PieceId> {
        self.parent
    }

    pub fn children(&self) -> &[PieceId] {
        &self.children
    }

    pub fn shape(&self) -> &PieceShape {
        &self.shape
    }

    pub fn cells(&self) -> &VertexSet {
        &self.cells
    }
}

/// Input description of one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub id: PieceId,
    pub parent: Option<PieceId>,
    #[serde(flatten)]
    pub shape: PieceShape,
}

#[derive(Clone, Debug)]
pub struct Toast {
    domain: TorusDomain,
    r: usize,
    pieces: Vec<ToastPiece>,
    position: HashMap<PieceId, usize>,
}

impl Toast {
    /// Assembles pieces and derives child lists from the parent links. Only
    /// structural problems (unknown parents, duplicate ids, malformed shapes)
    /// are errors here; the geometric conditions are left to [`validate`].
    pub fn from_specs(domain: TorusDomain, r: usize, specs: Vec<PieceSpec>) -> Result<Self> {
        let mut position = HashMap::new();
        for (i, s) in specs.iter().enumerate() {
            if position.insert(s.id, i).is_some() {
                return Err(Error::InvalidToast(format!("duplicate piece id {}", s.id)));
            }
        }
        let mut children: BTreeMap<PieceId, Vec<PieceId>> = BTreeMap::new();
        for s in &specs {
            if let Some(p) = s.parent {
                if !position.contains_key(&p) {
                    return Err(Error::InvalidToast(format!(
                        "piece {} names unknown parent {p}",
                        s.id
                    )));
                }
                if p == s.id {
                    return Err(Error::InvalidToast(format!("piece {p} is its own parent")));
                }
                children.entry(p).or_default().push(s.id);
            }
        }
        let pieces = specs
            .into_iter()
            .map(|s| {
                let cells = shape_cells(&domain, &s.shape)?;
                let mut kids = children.remove(&s.id).unwrap_or_default();
                kids.sort_unstable();
                Ok(ToastPiece {
                    id: s.id,
                    parent: s.parent,
                    children: kids,
                    shape: s.shape,
                    cells,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            domain,
            r,
            pieces,
            position,
        })
    }

    /// The one-piece toast `{whole torus}`.
    pub fn trivial(domain: TorusDomain, r: usize) -> Self {
        let shape = PieceShape::Box(domain.sides().iter().map(|&s| [0, s]).collect());
        Self::from_specs(
            domain,
            r,
            vec![PieceSpec {
                id: 0,
                parent: None,
                shape,
            }],
        )
        .expect("whole-torus box is well formed")
    }

    pub fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn pieces(&self) -> &[ToastPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn piece(&self, id: PieceId) -> Result<&ToastPiece> {
        self.position
            .get(&id)
            .map(|&i| &self.pieces[i])
            .ok_or(Error::UnknownPiece(id))
    }

    pub fn roots(&self) -> impl Iterator<Item = &ToastPiece> {
        self.pieces.iter().filter(|p| p.parent.is_none())
    }

    /// Depth below the root of the piece's tree (roots have depth 0).
    pub fn depth(&self, id: PieceId) -> Result<usize> {
        let mut depth = 0;
        let mut at = self.piece(id)?;
        while let Some(p) = at.parent {
            depth += 1;
            if depth > self.pieces.len() {
                return Err(Error::InvalidToast("parent links form a cycle".into()));
            }
            at = self.piece(p)?;
        }
        Ok(depth)
    }

    pub fn to_file(&self) -> ToastFile {
        ToastFile {
            format_version: FORMAT_VERSION,
            d: self.domain.dim(),
            sides: self.domain.sides().to_vec(),
            r: self.r,
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceSpec {
                    id: p.id,
                    parent: p.parent,
                    shape: p.shape.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ToastFile = serde_json::from_str(text)?;
        file.into_toast()
    }

    /// Checks the two geometric facts the coloring relies on for thickening
    /// radius `radius`: every child's `B_radius` stays inside its parent, and
    /// the thickenings of siblings are more than `d` apart. Returns one message
    /// per failure.
    pub fn check_thickenings(&self, radius: usize) -> Result<Vec<String>> {
        let d = self.domain.dim();
        let mut problems = Vec::new();
        for parent in &self.pieces {
            let mut thick = Vec::new();
            for &child in &parent.children {
                let cells = &self.piece(child)?.cells;
                let ball = self.domain.ball(cells, radius)?;
                if !ball.is_subset(&parent.cells) {
                    problems.push(format!("B_{radius}(piece {child}) leaves parent {}", parent.id));
                }
                let wide = self.domain.ball(cells, radius + d)?;
                thick.push((child, ball, wide));
            }
            for (i, (a, _, wide)) in thick.iter().enumerate() {
                for (b, ball, _) in &thick[i + 1..] {
                    if !wide.is_disjoint(ball) {
                        problems.push(format!(
                            "B_{radius} of siblings {a} and {b} are within distance {d}"
                        ));
                    }
                }
            }
        }
        Ok(problems)
    }
}

/// On-disk form of a toast.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToastFile {
    pub format_version: u32,
    pub d: usize,
    pub sides: Vec<usize>,
    pub r: usize,
    pub pieces: Vec<PieceSpec>,
}

impl ToastFile {
    pub fn into_toast(self) -> Result<Toast> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                got: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        if self.sides.len() != self.d {
            return Err(Error::Arity {
                expected: self.d,
                got: self.sides.len(),
            });
        }
        Toast::from_specs(TorusDomain::new(self.sides)?, self.r, self.pieces)
    }
}

fn shape_cells(domain: &TorusDomain, shape: &PieceShape) -> Result<VertexSet> {
    match shape {
        PieceShape::Box(bounds) => {
            if bounds.len() != domain.dim() {
                return Err(Error::Arity {
                    expected: domain.dim(),
                    got: bounds.len(),
                });
            }
            let lo: Vec<usize> = bounds.iter().map(|b| b[0]).collect();
            let hi: Vec<usize> = bounds.iter().map(|b| b[1]).collect();
            VertexSet::boxed(domain, &lo, &hi)
        }
        PieceShape::Cells(cells) => {
            let mut set = VertexSet::empty(domain);
            for c in cells {
                if c.len() != domain.dim() {
                    return Err(Error::Arity {
                        expected: domain.dim(),
                        got: c.len(),
                    });
                }
                if let Some(axis) = (0..c.len()).find(|&a| c[a] >= domain.sides()[a]) {
                    return Err(Error::InvalidToast(format!(
                        "cell {c:?} is outside the torus on axis {axis}"
                    )));
                }
                let coords: Vec<i64> = c.iter().map(|&x| x as i64).collect();
                set.insert(domain.index(&domain.vertex(&coords)?));
            }
            Ok(set)
        }
    }
}

/// A single failed toast condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyPiece {
        id: PieceId,
    },
    /// None (or more than one) of `B_r(K) ⊆ K'`, `B_r(K') ⊆ K`,
    /// `B_r(K) ∩ K' = ∅` holds.
    Pairwise {
        a: PieceId,
        b: PieceId,
        holding: usize,
    },
    Uncovered {
        count: usize,
        first: Vec<usize>,
    },
    Parent {
        id: PieceId,
        declared: Option<PieceId>,
        expected: Option<PieceId>,
    },
    NotAChain {
        id: PieceId,
        a: PieceId,
        b: PieceId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToastReport {
    pub valid: bool,
    pub pieces: usize,
    pub violations: Vec<Violation>,
}

/// Exhaustively checks the toast conditions.
pub fn validate(t: &Toast) -> ToastReport {
    let mut violations = Vec::new();
    let domain = &t.domain;
    let n = t.pieces.len();

    for p in &t.pieces {
        if p.cells.is_empty() {
            violations.push(Violation::EmptyPiece { id: p.id });
        }
    }

    let mut covered = VertexSet::empty(domain);
    for p in &t.pieces {
        covered.union_with(&p.cells);
    }
    if !covered.is_full() {
        let missing = VertexSet::full(domain).difference(&covered);
        violations.push(Violation::Uncovered {
            count: missing.len(),
            first: domain.vertex_at(missing.first().unwrap_or(0)).coords().to_vec(),
        });
    }

    let balls: Vec<Option<VertexSet>> = t
        .pieces
        .iter()
        .map(|p| domain.ball(&p.cells, t.r).ok())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let (Some(bi), Some(bj)) = (&balls[i], &balls[j]) else {
                continue;
            };
            let (ci, cj) = (&t.pieces[i].cells, &t.pieces[j].cells);
            let holding = usize::from(bi.is_subset(cj))
                + usize::from(bj.is_subset(ci))
                + usize::from(bi.is_disjoint(cj));
            if holding != 1 {
                violations.push(Violation::Pairwise {
                    a: t.pieces[i].id,
                    b: t.pieces[j].id,
                    holding,
                });
            }
        }
    }

    // The nesting relation must be a forest and agree with the parent links.
    let sizes: Vec<usize> = t.pieces.iter().map(|p| p.cells.len()).collect();
    for i in 0..n {
        let mut above: Vec<usize> = (0..n)
            .filter(|&j| j != i && sizes[j] > sizes[i] && t.pieces[i].cells.is_subset(&t.pieces[j].cells))
            .collect();
        above.sort_by_key(|&j| (sizes[j], t.pieces[j].id));
        for w in above.windows(2) {
            if !t.pieces[w[0]].cells.is_subset(&t.pieces[w[1]].cells) {
                violations.push(Violation::NotAChain {
                    id: t.pieces[i].id,
                    a: t.pieces[w[0]].id,
                    b: t.pieces[w[1]].id,
                });
            }
        }
        let expected = above.first().map(|&j| t.pieces[j].id);
        if expected != t.pieces[i].parent {
            violations.push(Violation::Parent {
                id: t.pieces[i].id,
                declared: t.pieces[i].parent,
                expected,
            });
        }
    }

    ToastReport {
        valid: violations.is_empty(),
        pieces: n,
        violations,
    }
}

/// Children before parents; among siblings, increasing id.
pub fn iteration_order(t: &Toast) -> Vec<PieceId> {
    let mut order = Vec::with_capacity(t.len());
    let mut roots: Vec<PieceId> = t.roots().map(|p| p.id).collect();
    roots.sort_unstable();
    for root in roots {
        // Iterative post-order: (id, expanded).
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
                continue;
            }
            stack.push((id, true));
            let piece = &t.pieces[t.position[&id]];
            for &c in piece.children.iter().rev() {
                stack.push((c, false));
            }
        }
    }
    order
}

/// The children of `id` in the nesting forest.
pub fn maximal_internal_pieces(t: &Toast, id: PieceId) -> Result<Vec<PieceId>> {
    Ok(t.piece(id)?.children.clone())
}

/// Knobs for [`generate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationPolicy {
    /// Side-length range `[min, max]` of innermost boxes.
    pub leaf_side: (usize, usize),
    /// How much larger than the minimum a non-leaf box may be drawn.
    pub slack: usize,
    /// Upper bound on the number of children placed in each piece.
    pub max_children: usize,
    /// Rejection-sampling attempts per piece.
    pub attempts: usize,
}

impl Default for GenerationPolicy {
    fn default() -> Self {
        Self {
            leaf_side: (8, 32),
            slack: 32,
            max_children: 4,
            attempts: 200,
        }
    }
}

/// Builds a random box toast: piece 0 is the whole torus and each of the
/// `levels` generations below it is a set of boxes placed inside their parent
/// with margin `r` on every side and pairwise more than `r` apart.
///
/// Same inputs, same toast.
pub fn generate(
    domain: &TorusDomain,
    r: usize,
    levels: usize,
    seed: u64,
    policy: &GenerationPolicy,
) -> Result<Toast> {
    let (leaf_min, leaf_max) = policy.leaf_side;
    if leaf_min == 0 || leaf_min > leaf_max {
        return Err(Error::Parameters(format!(
            "leaf side range [{leaf_min}, {leaf_max}] is empty"
        )));
    }
    // min_side[l] is the smallest box that can host generations l+1..=levels.
    let mut min_side = vec![0; levels + 1];
    if levels > 0 {
        min_side[levels] = leaf_min;
        for l in (1..levels).rev() {
            min_side[l] = min_side[l + 1] + 2 * r;
        }
        let need = min_side[1] + 2 * r;
        if let Some((axis, &side)) = domain.sides().iter().enumerate().find(|(_, &s)| s < need) {
            return Err(Error::Sizing(format!(
                "{levels} level(s) with r = {r} need side >= {need} (innermost box {leaf_min} plus \
                 margin 2r = {} per level), but axis {axis} has side {side}",
                2 * r
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top: Vec<[usize; 2]> = domain.sides().iter().map(|&s| [0, s]).collect();
    let mut specs = vec![PieceSpec {
        id: 0,
        parent: None,
        shape: PieceShape::Box(top.clone()),
    }];
    let mut current: Vec<(PieceId, Vec<[usize; 2]>)> = vec![(0, top)];
    for level in 1..=levels {
        let (lo_side, hi_side) = if level == levels {
            (leaf_min, leaf_max)
        } else {
            (min_side[level], min_side[level] + policy.slack)
        };
        let mut next = Vec::new();
        for (parent, bounds) in &current {
            let mut placed: Vec<Vec<[usize; 2]>> = Vec::new();
            for _ in 0..policy.attempts {
                if placed.len() >= policy.max_children {
                    break;
                }
                let candidate: Vec<[usize; 2]> = bounds
                    .iter()
                    .map(|&[plo, phi]| {
                        let avail = phi - plo - 2 * r;
                        let side = rng.gen_range(lo_side..=hi_side.min(avail));
                        let lo = rng.gen_range(plo + r..=phi - r - side);
                        [lo, lo + side]
                    })
                    .collect();
                if placed.iter().all(|other| box_gap(&candidate, other) > r) {
                    placed.push(candidate);
                }
            }
            for b in placed {
                let id = specs.len();
                specs.push(PieceSpec {
                    id,
                    parent: Some(*parent),
                    shape: PieceShape::Box(b.clone()),
                });
                next.push((id, b));
            }
        }
        current = next;
    }
    Toast::from_specs(domain.clone(), r, specs)
}

/// `l1` distance between two non-wrapping half-open boxes.
fn box_gap(a: &[[usize; 2]], b: &[[usize; 2]]) -> usize {
    a.iter()
        .zip(b)
        .map(|(&[alo, ahi], &[blo, bhi])| {
            if blo >= ahi {
                blo - ahi + 1
            } else if alo >= bhi {
                alo - bhi + 1
            } else {
                0
            }
        })
        .sum()
}
