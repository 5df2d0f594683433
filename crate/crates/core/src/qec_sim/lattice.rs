//! Planar surface-code lattice on a `(2d-1) x (2d-1)` grid.
//!
//! Sites with even `row + col` hold data qubits, odd sites hold syndrome
//! qubits. Syndrome sites on even rows are Z-type (they flag X errors), those
//! on odd rows are X-type (they flag Z errors).
//!
//! The left and right edges are rough: an X-error chain may end there without
//! leaving a Z-type defect. Top and bottom are smooth, and play the same role
//! for Z errors. Logical X is a horizontal row of X on an even row, logical Z
//! a vertical column of Z on an even column.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface_code::CodeDistance;

/// Largest distance the simulator accepts unless a caller raises the bound.
pub const DEFAULT_MAX_DISTANCE: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckType {
    /// Z-type stabilizer; anticommutes with X errors.
    Z,
    /// X-type stabilizer; anticommutes with Z errors.
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Data(usize),
    Syndrome(CheckType, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn transpose(self) -> Self {
        Self {
            row: self.col,
            col: self.row,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub coord: Coord,
    /// Data-qubit indices this stabilizer acts on (2 to 4 of them).
    pub support: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PlanarLattice {
    distance: CodeDistance,
    side: usize,
    sites: Vec<Site>,
    data: Vec<Coord>,
    z_checks: Vec<Check>,
    x_checks: Vec<Check>,
}

impl PlanarLattice {
    /// Builds the lattice for an odd distance in `[3, 25]`.
    pub fn new(d: CodeDistance) -> Result<Self> {
        Self::with_max_distance(d, DEFAULT_MAX_DISTANCE)
    }

    pub fn with_max_distance(d: CodeDistance, max_distance: u32) -> Result<Self> {
        if !d.is_odd() {
            return Err(Error::InvalidInput(format!(
                "lattice distance must be odd, got {d}"
            )));
        }
        if d.get() < 3 || d.get() > max_distance {
            return Err(Error::InvalidInput(format!(
                "lattice distance {d} outside [3, {max_distance}]"
            )));
        }
        let side = d.patch_side() as usize;
        let mut sites = Vec::with_capacity(side * side);
        let mut data = Vec::new();
        let mut z_coords = Vec::new();
        let mut x_coords = Vec::new();
        for row in 0..side {
            for col in 0..side {
                let c = Coord::new(row, col);
                if (row + col) % 2 == 0 {
                    sites.push(Site::Data(data.len()));
                    data.push(c);
                } else if row % 2 == 0 {
                    sites.push(Site::Syndrome(CheckType::Z, z_coords.len()));
                    z_coords.push(c);
                } else {
                    sites.push(Site::Syndrome(CheckType::X, x_coords.len()));
                    x_coords.push(c);
                }
            }
        }
        let mut lattice = Self {
            distance: d,
            side,
            sites,
            data,
            z_checks: Vec::new(),
            x_checks: Vec::new(),
        };
        lattice.z_checks = z_coords.into_iter().map(|c| lattice.make_check(c)).collect();
        lattice.x_checks = x_coords.into_iter().map(|c| lattice.make_check(c)).collect();
        Ok(lattice)
    }

    fn make_check(&self, coord: Coord) -> Check {
        let support = self
            .neighbours(coord)
            .filter_map(|n| match self.site(n) {
                Site::Data(i) => Some(i),
                Site::Syndrome(..) => None,
            })
            .collect();
        Check { coord, support }
    }

    pub fn distance(&self) -> CodeDistance {
        self.distance
    }

    /// Grid side length `2d - 1`.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn site(&self, c: Coord) -> Site {
        self.sites[c.row * self.side + c.col]
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn num_data(&self) -> usize {
        self.data.len()
    }

    pub fn data_coord(&self, index: usize) -> Coord {
        self.data[index]
    }

    pub fn data_index(&self, c: Coord) -> Option<usize> {
        if c.row >= self.side || c.col >= self.side {
            return None;
        }
        match self.site(c) {
            Site::Data(i) => Some(i),
            Site::Syndrome(..) => None,
        }
    }

    pub fn checks(&self, kind: CheckType) -> &[Check] {
        match kind {
            CheckType::Z => &self.z_checks,
            CheckType::X => &self.x_checks,
        }
    }

    pub fn check_index(&self, kind: CheckType, c: Coord) -> Option<usize> {
        match self.site(c) {
            Site::Syndrome(k, i) if k == kind => Some(i),
            _ => None,
        }
    }

    pub fn num_syndrome(&self) -> usize {
        self.z_checks.len() + self.x_checks.len()
    }

    /// In-grid 4-neighbourhood of a site.
    pub fn neighbours(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        let side = self.side;
        let candidates = [
            (c.row.wrapping_sub(1), c.col),
            (c.row + 1, c.col),
            (c.row, c.col.wrapping_sub(1)),
            (c.row, c.col + 1),
        ];
        candidates
            .into_iter()
            .filter(move |&(r, col)| r < side && col < side)
            .map(|(r, col)| Coord::new(r, col))
    }

    /// Data qubits on the left edge; logical X crosses this cut once.
    pub fn left_cut(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.side)
            .step_by(2)
            .map(|r| self.data_index(Coord::new(r, 0)).expect("edge data site"))
    }

    /// Data qubits on the top edge; logical Z crosses this cut once.
    pub fn top_cut(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.side)
            .step_by(2)
            .map(|c| self.data_index(Coord::new(0, c)).expect("edge data site"))
    }

    /// Data qubits of the horizontal logical-X representative on `row`.
    pub fn logical_x_row(&self, row: usize) -> Vec<usize> {
        assert!(row % 2 == 0 && row < self.side);
        (0..self.side)
            .step_by(2)
            .map(|c| self.data_index(Coord::new(row, c)).unwrap())
            .collect()
    }

    /// Data qubits of the vertical logical-Z representative on `col`.
    pub fn logical_z_column(&self, col: usize) -> Vec<usize> {
        assert!(col % 2 == 0 && col < self.side);
        (0..self.side)
            .step_by(2)
            .map(|r| self.data_index(Coord::new(r, col)).unwrap())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(d: u32) -> PlanarLattice {
        PlanarLattice::new(CodeDistance::new(d).unwrap()).unwrap()
    }

    #[test]
    fn site_counts() {
        let l = lattice(3);
        assert_eq!(l.num_sites(), 25);
        assert_eq!(l.num_data(), 13);
        assert_eq!(l.num_syndrome(), 12);
        assert_eq!(lattice(5).num_sites(), 81);
        for d in (3..=25).step_by(2) {
            let l = lattice(d);
            let d = d as usize;
            assert_eq!(l.num_data(), 2 * d * d - 2 * d + 1);
            assert_eq!(l.num_syndrome(), 2 * d * d - 2 * d);
            assert_eq!(l.checks(CheckType::Z).len(), d * (d - 1));
            assert_eq!(l.checks(CheckType::X).len(), d * (d - 1));
        }
    }

    #[test]
    fn rejects_bad_distances() {
        for d in [1, 2, 4, 27] {
            assert!(PlanarLattice::new(CodeDistance::new(d).unwrap()).is_err(), "d={d}");
        }
        assert!(PlanarLattice::with_max_distance(CodeDistance::new(27).unwrap(), 31).is_ok());
    }

    #[test]
    fn check_weights_and_types() {
        let l = lattice(5);
        for kind in [CheckType::Z, CheckType::X] {
            for check in l.checks(kind) {
                let w = check.support.len();
                assert!((2..=4).contains(&w));
                let c = check.coord;
                let interior = c.row > 0 && c.col > 0 && c.row + 1 < l.side() && c.col + 1 < l.side();
                if interior {
                    assert_eq!(w, 4);
                }
                // syndrome neighbours never share a type: all neighbours are data
                for n in l.neighbours(c) {
                    assert!(matches!(l.site(n), Site::Data(_)));
                }
            }
        }
        // Z checks truncate at top and bottom, X checks at left and right
        for check in l.checks(CheckType::Z) {
            if check.support.len() == 3 {
                assert!(check.coord.row == 0 || check.coord.row == l.side() - 1);
            }
        }
        for check in l.checks(CheckType::X) {
            if check.support.len() == 3 {
                assert!(check.coord.col == 0 || check.coord.col == l.side() - 1);
            }
        }
    }

    #[test]
    fn logical_operators_commute_with_opposite_checks() {
        let l = lattice(5);
        let row = l.logical_x_row(2);
        for check in l.checks(CheckType::Z) {
            let overlap = check.support.iter().filter(|i| row.contains(i)).count();
            assert_eq!(overlap % 2, 0);
        }
        let col = l.logical_z_column(4);
        for check in l.checks(CheckType::X) {
            let overlap = check.support.iter().filter(|i| col.contains(i)).count();
            assert_eq!(overlap % 2, 0);
        }
        // logical X and logical Z anticommute
        let shared = row.iter().filter(|i| col.contains(i)).count();
        assert_eq!(shared % 2, 1);
    }
}
