//! Finite torus surrogate of a free `Z^d` action.
//!
//! Vertices are stored row-major with the last coordinate varying fastest, so
//! the linear index order coincides with the lexicographic order on
//! coordinates. Generator `e_i` adds one to coordinate `i` (with wrap).
//! The unit cube at `x` is `{x + eps : eps in {0,1}^d}`, enumerated with `eps`
//! read as a `d`-bit counter whose bit `i` is the coefficient of `e_i`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest supported dimension. Colors are stored as bytes, and a
/// `2^d`-coloring must fit.
pub const MAX_DIM: usize = 7;

/// Upper bound on the number of vertices of a unit cube.
pub const MAX_CUBE: usize = 1 << MAX_DIM;

const PAR_CHUNK: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDomain {
    sides: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

/// A point of the torus, coordinates reduced modulo the sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(Vec<usize>);

impl Vertex {
    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The unit cube `{0,1}^d * base`, vertices in counter order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    pub base: Vertex,
    pub vertices: Vec<Vertex>,
}

impl TorusDomain {
    pub fn new(sides: impl Into<Vec<usize>>) -> Result<Self> {
        let sides = sides.into();
        if sides.is_empty() || sides.len() > MAX_DIM {
            return Err(Error::Dimension {
                got: sides.len(),
                max: MAX_DIM,
            });
        }
        for (axis, &side) in sides.iter().enumerate() {
            if side < 4 || side % 2 != 0 {
                return Err(Error::Side { axis, side });
            }
        }
        let mut strides = vec![1; sides.len()];
        for axis in (0..sides.len() - 1).rev() {
            strides[axis] = strides[axis + 1] * sides[axis + 1];
        }
        let len = sides.iter().product();
        Ok(Self {
            sides,
            strides,
            len,
        })
    }

    /// `d` equal sides.
    pub fn cubic(d: usize, side: usize) -> Result<Self> {
        Self::new(vec![side; d])
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn vertex_count(&self) -> usize {
        self.len
    }

    /// `2^d`.
    pub fn cube_size(&self) -> usize {
        1 << self.dim()
    }

    /// Builds a vertex from arbitrary integer coordinates, reducing each
    /// modulo its side.
    pub fn vertex(&self, coords: &[i64]) -> Result<Vertex> {
        self.check_arity(coords.len())?;
        Ok(Vertex(
            coords
                .iter()
                .zip(&self.sides)
                .map(|(&c, &s)| c.rem_euclid(s as i64) as usize)
                .collect(),
        ))
    }

    pub fn index(&self, v: &Vertex) -> usize {
        debug_assert_eq!(v.0.len(), self.dim());
        v.0.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn vertex_at(&self, index: usize) -> Vertex {
        let mut coords = vec![0; self.dim()];
        self.coords_into(index, &mut coords);
        Vertex(coords)
    }

    pub fn coords_into(&self, index: usize, out: &mut [usize]) {
        debug_assert!(index < self.len);
        for axis in 0..self.dim() {
            out[axis] = (index / self.strides[axis]) % self.sides[axis];
        }
    }

    #[inline]
    pub fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.strides[axis]) % self.sides[axis]
    }

    /// Translates `x` by the group element `g`.
    ///
    /// # Panics
    ///
    /// If `g` does not have `d` entries.
    pub fn act(&self, x: &Vertex, g: &[i64]) -> Vertex {
        assert_eq!(g.len(), self.dim(), "group element has wrong arity");
        Vertex(
            x.0.iter()
                .zip(g)
                .zip(&self.sides)
                .map(|((&c, &gi), &s)| (c as i64 + gi).rem_euclid(s as i64) as usize)
                .collect(),
        )
    }

    pub fn act_index(&self, index: usize, g: &[i64]) -> usize {
        let mut out = 0;
        for axis in 0..self.dim() {
            let side = self.sides[axis] as i64;
            let c = self.coord(index, axis) as i64;
            out += (c + g[axis]).rem_euclid(side) as usize * self.strides[axis];
        }
        out
    }

    /// `e_axis * index`.
    #[inline]
    pub fn step(&self, index: usize, axis: usize) -> usize {
        if self.coord(index, axis) + 1 == self.sides[axis] {
            index - (self.sides[axis] - 1) * self.strides[axis]
        } else {
            index + self.strides[axis]
        }
    }

    /// `e_axis^{-1} * index`.
    #[inline]
    pub fn step_back(&self, index: usize, axis: usize) -> usize {
        if self.coord(index, axis) == 0 {
            index + (self.sides[axis] - 1) * self.strides[axis]
        } else {
            index - self.strides[axis]
        }
    }

    /// The `2d` grid neighbours of a vertex.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).flat_map(move |axis| [self.step(index, axis), self.step_back(index, axis)])
    }

    pub fn cube_at(&self, x: &Vertex) -> Cube {
        let mut buf = [0usize; MAX_CUBE];
        let n = self.cube_size();
        self.cube_indices(self.index(x), &mut buf[..n]);
        Cube {
            base: x.clone(),
            vertices: buf[..n].iter().map(|&i| self.vertex_at(i)).collect(),
        }
    }

    /// Fills `out[eps]` with the index of `eps * base`. `out` must hold `2^d`
    /// entries.
    pub fn cube_indices(&self, base: usize, out: &mut [usize]) {
        let mut coords = [0usize; MAX_DIM];
        self.coords_into(base, &mut coords[..self.dim()]);
        self.cube_from_coords(base, &coords[..self.dim()], out);
    }

    #[inline]
    fn cube_from_coords(&self, base: usize, coords: &[usize], out: &mut [usize]) {
        out[0] = base;
        for axis in 0..self.dim() {
            let bit = 1usize << axis;
            let wrap = coords[axis] + 1 == self.sides[axis];
            for m in 0..bit {
                out[m | bit] = if wrap {
                    out[m] - (self.sides[axis] - 1) * self.strides[axis]
                } else {
                    out[m] + self.strides[axis]
                };
            }
        }
    }

    /// Calls `f(base, cube)` for every base index in `range`, walking the
    /// coordinates as an odometer instead of dividing per cube.
    pub fn for_each_cube_in(&self, range: Range<usize>, mut f: impl FnMut(usize, &[usize])) {
        if range.is_empty() {
            return;
        }
        let d = self.dim();
        let n = self.cube_size();
        let mut coords = [0usize; MAX_DIM];
        let mut buf = [0usize; MAX_CUBE];
        self.coords_into(range.start, &mut coords[..d]);
        for base in range {
            self.cube_from_coords(base, &coords[..d], &mut buf[..n]);
            f(base, &buf[..n]);
            for axis in (0..d).rev() {
                coords[axis] += 1;
                if coords[axis] < self.sides[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }

    /// Smallest base index whose cube satisfies `fails`, scanning all cubes
    /// in parallel.
    pub fn find_first_cube<F>(&self, fails: F) -> Option<usize>
    where
        F: Fn(&[usize]) -> bool + Sync,
    {
        let chunks = self.len.div_ceil(PAR_CHUNK);
        (0..chunks).into_par_iter().find_map_first(|chunk| {
            let start = chunk * PAR_CHUNK;
            let end = (start + PAR_CHUNK).min(self.len);
            let mut found = None;
            self.for_each_cube_in(start..end, |base, cube| {
                if found.is_none() && fails(cube) {
                    found = Some(base);
                }
            });
            found
        })
    }

    /// Parallel fold over all cubes; `fold` sees `(acc, base, cube)`.
    pub fn fold_cubes<T, I, F, M>(&self, init: I, fold: F, merge: M) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, usize, &[usize]) + Sync + Send,
        M: Fn(T, T) -> T + Sync + Send,
    {
        let chunks = self.len.div_ceil(PAR_CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk * PAR_CHUNK;
                let end = (start + PAR_CHUNK).min(self.len);
                let mut acc = init();
                self.for_each_cube_in(start..end, |base, cube| fold(&mut acc, base, cube));
                acc
            })
            .reduce(&init, &merge)
    }

    /// Hop distance between two vertices: `sum_i min(|a_i-b_i|, side_i-|a_i-b_i|)`.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        (0..self.dim())
            .map(|axis| {
                let (x, y) = (self.coord(a, axis), self.coord(b, axis));
                let diff = x.abs_diff(y);
                diff.min(self.sides[axis] - diff)
            })
            .sum()
    }

    /// Graph distance from `x` to the nearest vertex of `set`.
    pub fn graph_dist(&self, set: &VertexSet, x: &Vertex) -> Result<usize> {
        self.check_same(set)?;
        let target = self.index(x);
        set.iter()
            .map(|a| self.distance(a, target))
            .min()
            .ok_or(Error::EmptySet)
    }

    /// `B_r(set)`: every vertex within graph distance `r` of `set`.
    pub fn ball(&self, set: &VertexSet, r: usize) -> Result<VertexSet> {
        self.check_same(set)?;
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = set.clone();
        self.grow(set, r, |index, _| out.insert(index));
        Ok(out)
    }

    /// Breadth-first search outward from `set`, calling `visit(index, dist)`
    /// once for every vertex outside `set` at distance `1..=max`, in
    /// nondecreasing distance order.
    pub fn grow(&self, set: &VertexSet, max: usize, mut visit: impl FnMut(usize, usize)) {
        if max == 0 {
            return;
        }
        let mut seen = set.bits.clone();
        let mut frontier: Vec<usize> = Vec::new();
        for index in set.iter() {
            for nb in self.neighbors(index) {
                if !seen.put(nb) {
                    frontier.push(nb);
                }
            }
        }
        let mut dist = 1;
        let mut next = Vec::new();
        while !frontier.is_empty() {
            for &index in &frontier {
                visit(index, dist);
            }
            if dist == max {
                break;
            }
            for &index in &frontier {
                for nb in self.neighbors(index) {
                    if !seen.put(nb) {
                        next.push(nb);
                    }
                }
            }
            std::mem::swap(&mut frontier, &mut next);
            next.clear();
            dist += 1;
        }
    }

    /// Plain single-source BFS distances to every vertex. Quadratic-free but
    /// allocates a full table; meant for small domains and cross-checks.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(v) = queue.pop_front() {
            for nb in self.neighbors(v) {
                if dist[nb] == usize::MAX {
                    dist[nb] = dist[v] + 1;
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::Arity {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    fn check_same(&self, set: &VertexSet) -> Result<()> {
        if set.domain != *self {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }
}

/// A subset of the torus, stored as a dense bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    domain: TorusDomain,
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(domain: &TorusDomain) -> Self {
        Self {
            domain: domain.clone(),
            bits: FixedBitSet::with_capacity(domain.vertex_count()),
        }
    }

    pub fn full(domain: &TorusDomain) -> Self {
        let mut set = Self::empty(domain);
        set.bits.insert_range(..);
        set
    }

    pub fn from_vertices<'a>(domain: &TorusDomain, vertices: impl IntoIterator<Item = &'a Vertex>) -> Self {
        let mut set = Self::empty(domain);
        for v in vertices {
            set.insert(domain.index(v));
        }
        set
    }

    pub fn from_indices(domain: &TorusDomain, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(domain);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// The axis-aligned box `lo[i] <= x_i < hi[i]` (no wrap).
    pub fn boxed(domain: &TorusDomain, lo: &[usize], hi: &[usize]) -> Result<Self> {
        domain.check_arity(lo.len())?;
        domain.check_arity(hi.len())?;
        for axis in 0..domain.dim() {
            if lo[axis] >= hi[axis] || hi[axis] > domain.sides[axis] {
                return Err(Error::Parameters(format!(
                    "box [{}, {}) does not fit axis {axis} of side {}",
                    lo[axis], hi[axis], domain.sides[axis]
                )));
            }
        }
        let mut set = Self::empty(domain);
        let d = domain.dim();
        let mut coords: Vec<usize> = lo.to_vec();
        loop {
            let index = coords.iter().zip(&domain.strides).map(|(c, s)| c * s).sum();
            set.insert(index);
            let mut axis = d;
            loop {
                if axis == 0 {
                    return Ok(set);
                }
                axis -= 1;
                coords[axis] += 1;
                if coords[axis] < hi[axis] {
                    break;
                }
                coords[axis] = lo[axis];
            }
        }
    }

    pub fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.bits.insert(index);
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        self.contains(self.domain.index(v))
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Member indices in increasing (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.iter().map(|i| self.domain.vertex_at(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(sides: &[usize]) -> TorusDomain {
        TorusDomain::new(sides.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_sides() {
        assert!(matches!(TorusDomain::new(vec![4, 5]), Err(Error::Side { axis: 1, side: 5 })));
        assert!(matches!(TorusDomain::new(vec![2, 4]), Err(Error::Side { axis: 0, side: 2 })));
        assert!(TorusDomain::new(Vec::new()).is_err());
        assert!(TorusDomain::new(vec![4; 8]).is_err());
    }

    #[test]
    fn act_examples() {
        let d = dom(&[4, 4]);
        let x = d.vertex(&[3, 3]).unwrap();
        assert_eq!(d.act(&x, &[1, 0]).coords(), &[0, 3]);
        let y = d.vertex(&[1, 2]).unwrap();
        assert_eq!(d.act(&y, &[0, 0]), y);
        let d46 = dom(&[4, 6]);
        let o = d46.vertex(&[0, 0]).unwrap();
        assert_eq!(d46.act(&o, &[-1, -1]).coords(), &[3, 5]);
    }

    #[test]
    fn cube_examples() {
        let d1 = dom(&[4]);
        let c = d1.cube_at(&d1.vertex(&[2]).unwrap());
        assert_eq!(c.vertices, vec![Vertex(vec![2]), Vertex(vec![3])]);

        let d2 = dom(&[4, 4]);
        let c = d2.cube_at(&d2.vertex(&[3, 3]).unwrap());
        let got: Vec<_> = c.vertices.iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(got, vec![vec![3, 3], vec![0, 3], vec![3, 0], vec![0, 0]]);

        let d3 = dom(&[4, 4, 4]);
        let mut c = d3.cube_at(&d3.vertex(&[0, 0, 0]).unwrap()).vertices;
        c.sort();
        c.dedup();
        assert_eq!(c.len(), 8);
    }

    #[test]
    fn distance_examples() {
        let d = dom(&[8, 8]);
        let a = VertexSet::from_vertices(&d, [&d.vertex(&[0, 0]).unwrap()]);
        assert_eq!(d.graph_dist(&a, &d.vertex(&[2, 3]).unwrap()).unwrap(), 5);
        assert_eq!(d.graph_dist(&a, &d.vertex(&[7, 0]).unwrap()).unwrap(), 1);
        assert_eq!(d.graph_dist(&a, &d.vertex(&[0, 0]).unwrap()).unwrap(), 0);
        assert!(matches!(
            d.graph_dist(&VertexSet::empty(&d), &d.vertex(&[0, 0]).unwrap()),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn ball_examples() {
        let d = dom(&[8, 8]);
        let a = VertexSet::from_vertices(&d, [&d.vertex(&[0, 0]).unwrap()]);
        assert_eq!(d.ball(&a, 0).unwrap(), a);
        assert_eq!(d.ball(&a, 1).unwrap().len(), 5);
        // Brute-force count by BFS table.
        let bfs = d.bfs_distances(0);
        let expected = bfs.iter().filter(|&&x| x <= 2).count();
        assert_eq!(expected, 13);
        assert_eq!(d.ball(&a, 2).unwrap().len(), expected);
    }

    #[test]
    fn boxed_and_lex_order() {
        let d = dom(&[6, 8]);
        let b = VertexSet::boxed(&d, &[1, 2], &[3, 5]).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(d.vertex_at(b.first().unwrap()).coords(), &[1, 2]);
        assert!(VertexSet::boxed(&d, &[1, 2], &[7, 5]).is_err());
    }

    #[test]
    fn odometer_walk_matches_direct_cubes() {
        let d = dom(&[4, 6, 4]);
        let mut buf = vec![0; 8];
        let mut seen = 0;
        d.for_each_cube_in(5..d.vertex_count(), |base, cube| {
            d.cube_indices(base, &mut buf);
            assert_eq!(cube, &buf[..]);
            seen += 1;
        });
        assert_eq!(seen, d.vertex_count() - 5);
    }
}
