//! Reconfiguring surjective `(2^d-1)`-colorings of the `d`-cube one vertex at a
//! time.
//!
//! [`connect`] is the constructive two-phase procedure: fix the cube's
//! vertices to the target colors in a chosen order, first parking a spare
//! copy of the color about to be overwritten on a vertex that still carries a
//! repeated color. It never needs more than `2^{d+1}` single-vertex changes.
//! [`bfs_shortest_path`] is an independent exhaustive oracle over the
//! reconfiguration graph, feasible for `d <= 3`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;

/// A labeling `{0,1}^d -> {0..2^d-2}`; index bit `i` is the `e_i` coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct CubeLabeling {
    d: usize,
    values: Vec<u8>,
}

impl CubeLabeling {
    pub fn new(d: usize, values: Vec<u8>) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::Dimension { got: d, max: MAX_DIM });
        }
        let n = 1usize << d;
        if values.len() != n {
            return Err(Error::Length {
                expected: n,
                got: values.len(),
            });
        }
        let k = n - 1;
        if let Some((position, &color)) = values.iter().enumerate().find(|(_, &c)| c as usize >= k) {
            return Err(Error::ColorRange {
                position,
                color: color as usize,
                k,
            });
        }
        Ok(Self { d, values })
    }

    /// Infers `d` from the length, which must be a power of two.
    pub fn from_values(values: Vec<u8>) -> Result<Self> {
        let n = values.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Parameters(format!(
                "cube labeling length {n} is not 2^d for d >= 1"
            )));
        }
        Self::new(n.trailing_zeros() as usize, values)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    pub fn at(&self, vertex: usize) -> u8 {
        self.values[vertex]
    }

    /// `2^d - 1`.
    pub fn color_count(&self) -> usize {
        (1 << self.d) - 1
    }

    pub fn is_surjective(&self) -> bool {
        self.missing_colors().is_empty()
    }

    pub fn missing_colors(&self) -> Vec<u8> {
        let counts = self.counts();
        (0..self.color_count() as u8).filter(|&c| counts[c as usize] == 0).collect()
    }

    fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.color_count()];
        for &c in &self.values {
            counts[c as usize] += 1;
        }
        counts
    }

    /// `eps -> self(eps xor shift)`: the same repetitive coloring read from a
    /// root displaced by `shift` in `Z_2^d`.
    pub fn translate(&self, shift: usize) -> CubeLabeling {
        let values = (0..self.values.len()).map(|e| self.values[e ^ shift]).collect();
        CubeLabeling { d: self.d, values }
    }

    /// Number of cube vertices where the two labelings disagree.
    pub fn hamming(&self, other: &CubeLabeling) -> usize {
        self.values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count()
    }

    fn require_surjective(&self) -> Result<()> {
        let missing = self.missing_colors();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::NotSurjective {
                colors: self.color_count(),
                missing,
            })
        }
    }
}

impl TryFrom<Vec<u8>> for CubeLabeling {
    type Error = Error;

    fn try_from(values: Vec<u8>) -> Result<Self> {
        Self::from_values(values)
    }
}

impl From<CubeLabeling> for Vec<u8> {
    fn from(c: CubeLabeling) -> Self {
        c.values
    }
}

impl fmt::Display for CubeLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}

pub fn is_surjective(c: &CubeLabeling) -> bool {
    c.is_surjective()
}

/// A walk through cube labelings; consecutive entries differ on at most one
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LabelingPath {
    steps: Vec<CubeLabeling>,
}

impl LabelingPath {
    pub fn steps(&self) -> &[CubeLabeling] {
        &self.steps
    }

    /// Number of labelings, endpoints included.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of single-vertex changes.
    pub fn changes(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn first(&self) -> &CubeLabeling {
        &self.steps[0]
    }

    pub fn last(&self) -> &CubeLabeling {
        &self.steps[self.steps.len() - 1]
    }

    /// `a_t` for `t` beyond the end repeats the final labeling.
    pub fn at_clamped(&self, t: usize) -> &CubeLabeling {
        &self.steps[t.min(self.steps.len() - 1)]
    }

    /// Checks endpoints, surjectivity of every entry and the one-vertex step
    /// rule. Returns a description of the first problem found.
    pub fn check(&self, from: &CubeLabeling, to: &CubeLabeling) -> std::result::Result<(), String> {
        if self.steps.is_empty() {
            return Err("empty path".into());
        }
        if self.first() != from {
            return Err(format!("path starts at {} not {from}", self.first()));
        }
        if self.last() != to {
            return Err(format!("path ends at {} not {to}", self.last()));
        }
        for (t, s) in self.steps.iter().enumerate() {
            if !s.is_surjective() {
                return Err(format!("entry {t} ({s}) is not surjective"));
            }
        }
        for (t, w) in self.steps.windows(2).enumerate() {
            if w[0].hamming(&w[1]) > 1 {
                return Err(format!("entries {t} and {} differ on more than one vertex", t + 1));
            }
        }
        Ok(())
    }
}

/// Internals of one [`connect`] run, exposed for invariant checks.
#[derive(Clone, Debug)]
pub struct ConnectTrace {
    /// Cube vertices in processing order; the last one carries the target's
    /// repeated color.
    pub order: Vec<usize>,
    /// `c_0, c_2, c_4, ...`: the labeling after each vertex is fixed.
    pub even: Vec<CubeLabeling>,
}

/// Joins two surjective labelings by at most `2^{d+1}` single-vertex
/// recolorings, every intermediate labeling surjective.
///
/// Steps that would not change anything are dropped, so equal endpoints give
/// a one-entry path.
pub fn connect(from: &CubeLabeling, to: &CubeLabeling) -> Result<LabelingPath> {
    connect_traced(from, to).map(|(path, _)| path)
}

pub fn connect_traced(from: &CubeLabeling, to: &CubeLabeling) -> Result<(LabelingPath, ConnectTrace)> {
    if from.d != to.d {
        return Err(Error::Parameters(format!(
            "cube labelings of dimensions {} and {}",
            from.d, to.d
        )));
    }
    from.require_surjective()?;
    to.require_surjective()?;

    let n = from.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    let target_counts = to.counts();
    let spare = (0..n)
        .find(|&v| target_counts[to.values[v] as usize] >= 2)
        .expect("a surjective labeling of 2^d vertices by 2^d-1 colors repeats a color");
    order.swap(spare, n - 1);

    let mut current = from.clone();
    let mut counts = current.counts();
    let mut steps = vec![current.clone()];
    let mut even = vec![current.clone()];

    let mut recolor = |current: &mut CubeLabeling, counts: &mut Vec<usize>, v: usize, color: u8| {
        let old = current.values[v];
        if old == color {
            return;
        }
        counts[old as usize] -= 1;
        counts[color as usize] += 1;
        current.values[v] = color;
        steps.push(current.clone());
    };

    for i in 0..n {
        if current.values[order[i]] == to.values[order[i]] {
            // Already fixed: both sub-steps would be no-ops or a detour.
            even.push(current.clone());
            continue;
        }
        // Largest position >= i holding a repeated color. Positions < i carry
        // distinct target colors, so one exists.
        let k = (i..n)
            .rev()
            .find(|&k| counts[current.values[order[k]] as usize] >= 2)
            .expect("surjective labeling has a repeated color at or after the cursor");
        let parked = current.values[order[i]];
        recolor(&mut current, &mut counts, order[k], parked);
        recolor(&mut current, &mut counts, order[i], to.values[order[i]]);
        even.push(current.clone());
    }
    debug_assert_eq!(&current, to);
    Ok((LabelingPath { steps }, ConnectTrace { order, even }))
}

/// Largest `d` for which the exhaustive oracle is allowed.
pub const BFS_MAX_DIM: usize = 3;

/// All surjective cube labelings for dimension `d`, in increasing order.
pub fn surjective_labelings(d: usize) -> Result<Vec<CubeLabeling>> {
    let space = StateSpace::new(d)?;
    Ok((0..space.total)
        .filter_map(|code| {
            let c = space.decode(code);
            c.is_surjective().then_some(c)
        })
        .collect())
}

/// Shortest path in the graph of surjective labelings joined by
/// single-vertex recolorings, by breadth-first search.
pub fn bfs_shortest_path(from: &CubeLabeling, to: &CubeLabeling) -> Result<LabelingPath> {
    if from.d != to.d {
        return Err(Error::Parameters(format!(
            "cube labelings of dimensions {} and {}",
            from.d, to.d
        )));
    }
    from.require_surjective()?;
    to.require_surjective()?;
    let space = StateSpace::new(from.d)?;
    let (start, goal) = (space.encode(from), space.encode(to));
    let parent = space.search(start, Some(goal));
    let mut codes = vec![goal];
    let mut at = goal;
    while at != start {
        at = parent[at] as usize;
        codes.push(at);
    }
    codes.reverse();
    Ok(LabelingPath {
        steps: codes.into_iter().map(|c| space.decode(c)).collect(),
    })
}

/// BFS distances from `from` to every reachable surjective labeling, as
/// `(labeling, distance)` pairs in labeling order.
pub fn bfs_distances(from: &CubeLabeling) -> Result<Vec<(CubeLabeling, usize)>> {
    from.require_surjective()?;
    let space = StateSpace::new(from.d)?;
    let start = space.encode(from);
    let parent = space.search(start, None);
    let mut out = Vec::new();
    for code in 0..space.total {
        if parent[code] == UNSEEN {
            continue;
        }
        let mut dist = 0;
        let mut at = code;
        while at != start {
            at = parent[at] as usize;
            dist += 1;
        }
        out.push((space.decode(code), dist));
    }
    Ok(out)
}

const UNSEEN: u32 = u32::MAX;

/// Labelings encoded as base-`q` integers, vertex 0 least significant.
struct StateSpace {
    d: usize,
    n: usize,
    q: usize,
    total: usize,
}

impl StateSpace {
    fn new(d: usize) -> Result<Self> {
        if d == 0 || d > BFS_MAX_DIM {
            return Err(Error::Infeasible(format!(
                "exhaustive cube search supports 1 <= d <= {BFS_MAX_DIM}, got {d}"
            )));
        }
        let n = 1usize << d;
        let q = n - 1;
        Ok(Self {
            d,
            n,
            q,
            total: q.pow(n as u32),
        })
    }

    fn encode(&self, c: &CubeLabeling) -> usize {
        c.values.iter().rev().fold(0, |acc, &v| acc * self.q + v as usize)
    }

    fn decode(&self, mut code: usize) -> CubeLabeling {
        let mut values = vec![0u8; self.n];
        for v in values.iter_mut() {
            *v = (code % self.q) as u8;
            code /= self.q;
        }
        CubeLabeling { d: self.d, values }
    }

    /// Parent pointers of a BFS tree rooted at `start`; the root points to
    /// itself. Stops early once `goal` is reached.
    fn search(&self, start: usize, goal: Option<usize>) -> Vec<u32> {
        let mut parent = vec![UNSEEN; self.total];
        parent[start] = start as u32;
        let mut queue = VecDeque::from([start]);
        let mut powers = vec![1usize; self.n];
        for v in 1..self.n {
            powers[v] = powers[v - 1] * self.q;
        }
        let mut digits = vec![0usize; self.n];
        let mut counts = vec![0usize; self.q];
        while let Some(code) = queue.pop_front() {
            if Some(code) == goal {
                break;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            let mut rest = code;
            for digit in digits.iter_mut() {
                *digit = rest % self.q;
                rest /= self.q;
                counts[*digit] += 1;
            }
            for v in 0..self.n {
                let old = digits[v];
                if counts[old] < 2 {
                    continue;
                }
                for color in 0..self.q {
                    if color == old {
                        continue;
                    }
                    let next = code - old * powers[v] + color * powers[v];
                    if parent[next] == UNSEEN {
                        parent[next] = code as u32;
                        queue.push_back(next);
                    }
                }
            }
        }
        parent
    }
}
