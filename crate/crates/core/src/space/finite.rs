use alloc::vec::Vec;

use super::{DynSystem, Point, Space};

/// Largest state count a system may have to be tabulated.
const MAX_STATES: usize = 1 << 22;

/// A finite system (including finite products) flattened to an image table
/// over the row-major enumeration of its points.
#[derive(Clone, Debug)]
pub struct FiniteView {
    pub space: Space,
    pub points: Vec<Point>,
    pub table: Vec<usize>,
}

impl FiniteView {
    pub(crate) fn new(sys: &DynSystem) -> Option<FiniteView> {
        let n = sys.space().finite_len()?;
        if n > MAX_STATES {
            return None;
        }
        let points = sys.space().finite_points()?;
        let table = points
            .iter()
            .map(|x| sys.space().finite_index(&sys.apply(x)))
            .collect::<Option<Vec<_>>>()?;
        Some(FiniteView {
            space: sys.space().clone(),
            points,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, x: &Point) -> Option<usize> {
        self.space.finite_index(x)
    }

    pub fn orbit(&self, start: usize) -> Orbit {
        orbit_of(&self.table, start)
    }
}

/// The orbit of a point of a finite system, split into its pre-periodic tail
/// and the cycle it falls into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub tail: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Orbit {
    pub fn preperiod(&self) -> usize {
        self.tail.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// The state reached after `m` steps.
    pub fn at(&self, m: usize) -> usize {
        if m < self.tail.len() {
            self.tail[m]
        } else {
            self.cycle[(m - self.tail.len()) % self.cycle.len()]
        }
    }
}

pub(crate) fn orbit_of(table: &[usize], start: usize) -> Orbit {
    let mut first_seen = alloc::vec![usize::MAX; table.len()];
    let mut path = Vec::new();
    let mut i = start;
    while first_seen[i] == usize::MAX {
        first_seen[i] = path.len();
        path.push(i);
        i = table[i];
    }
    let cycle = path.split_off(first_seen[i]);
    Orbit { tail: path, cycle }
}
