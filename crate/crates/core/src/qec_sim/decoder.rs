//! Minimum-weight perfect matching decoder.
//!
//! Each check type is decoded independently. Defects of one type become
//! graph nodes; every defect also gets a private boundary node whose edge
//! weight is the number of data qubits between it and the nearest rough
//! edge. Boundary nodes are joined to each other at weight zero, so a
//! perfect matching always exists.
//!
//! Distances are computed in a canonical frame where the relevant boundaries
//! are on the left and right: Z-type checks use lattice coordinates as-is,
//! X-type checks use the transposed lattice.

use bitvec::prelude::*;

use super::blossom::{self, Edge};
use super::lattice::{CheckType, Coord, PlanarLattice};
use super::noise::{check_outcomes, Defect, PauliErrorPattern, SyndromeSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Matching graph for the defects of a single check type.
#[derive(Debug, Clone)]
pub struct DefectGraph {
    pub kind: CheckType,
    /// Side length of the lattice grid.
    side: usize,
    pub defects: Vec<Defect>,
    canonical: Vec<Coord>,
    boundary: Vec<(i64, Side)>,
}

fn canonical(kind: CheckType, c: Coord) -> Coord {
    match kind {
        CheckType::Z => c,
        CheckType::X => c.transpose(),
    }
}

impl DefectGraph {
    pub fn new(lattice: &PlanarLattice, kind: CheckType, defects: Vec<Defect>) -> Self {
        debug_assert!(defects.iter().all(|d| d.kind == kind));
        let side = lattice.side();
        let canonical: Vec<Coord> = defects.iter().map(|d| canonical(kind, d.coord)).collect();
        let boundary = canonical
            .iter()
            .map(|c| {
                let left = (c.col as i64 + 1) / 2;
                let right = (side as i64 - c.col as i64) / 2;
                if left <= right {
                    (left, Side::Left)
                } else {
                    (right, Side::Right)
                }
            })
            .collect();
        Self {
            kind,
            side,
            defects,
            canonical,
            boundary,
        }
    }

    /// Graphs for both check types of a syndrome.
    pub fn from_syndrome(lattice: &PlanarLattice, syndrome: &SyndromeSet) -> [DefectGraph; 2] {
        [CheckType::Z, CheckType::X].map(|kind| {
            DefectGraph::new(lattice, kind, syndrome.of_type(kind).copied().collect())
        })
    }

    pub fn num_defects(&self) -> usize {
        self.defects.len()
    }

    /// Total node count: defects plus one boundary node each.
    pub fn num_nodes(&self) -> usize {
        2 * self.defects.len()
    }

    /// Shortest error-chain length joining defects `i` and `j`.
    pub fn pair_weight(&self, i: usize, j: usize) -> i64 {
        let (a, b) = (self.canonical[i], self.canonical[j]);
        let spatial = (a.row.abs_diff(b.row) + a.col.abs_diff(b.col)) / 2;
        let temporal = self.defects[i].round.abs_diff(self.defects[j].round) as usize;
        (spatial + temporal) as i64
    }

    /// Shortest error-chain length from defect `i` to a boundary.
    pub fn boundary_weight(&self, i: usize) -> i64 {
        self.boundary[i].0
    }

    /// Weight between any two nodes; nodes `n..2n` are boundary nodes.
    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        let n = self.num_defects();
        match (u < n, v < n) {
            (true, true) if u != v => Some(self.pair_weight(u, v)),
            (true, false) if v - n == u => Some(self.boundary_weight(u)),
            (false, true) if u - n == v => Some(self.boundary_weight(v)),
            (false, false) if u != v => Some(0),
            _ => None,
        }
    }

    /// Every edge of the complete defect graph.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.num_defects();
        let mut edges = Vec::with_capacity(n * (2 * n - 1));
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, self.pair_weight(i, j)));
            }
            edges.push((i, n + i, self.boundary_weight(i)));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((n + i, n + j, 0));
            }
        }
        edges
    }

    /// Edges that can appear in some minimum-weight matching. A defect pair
    /// farther apart than the sum of their boundary distances is never
    /// strictly better than sending both to the boundary.
    fn candidate_edges(&self) -> Vec<Edge> {
        let n = self.num_defects();
        let mut edges = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.pair_weight(i, j);
                if w <= self.boundary_weight(i) + self.boundary_weight(j) {
                    edges.push((i, j, w));
                }
            }
            edges.push((i, n + i, self.boundary_weight(i)));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((n + i, n + j, 0));
            }
        }
        edges
    }

    /// Data qubits (lattice indices) on the chain joining defect `i` to its partner.
    fn chain(&self, lattice: &PlanarLattice, i: usize, partner: Partner, out: &mut Vec<usize>) {
        let a = self.canonical[i];
        let mut push = |row: usize, col: usize| {
            let c = match self.kind {
                CheckType::Z => Coord::new(row, col),
                CheckType::X => Coord::new(col, row),
            };
            out.push(lattice.data_index(c).expect("chain passes through data sites"));
        };
        match partner {
            Partner::Boundary => match self.boundary[i].1 {
                Side::Left => (0..a.col).step_by(2).for_each(|c| push(a.row, c)),
                Side::Right => ((a.col + 1)..self.side).step_by(2).for_each(|c| push(a.row, c)),
            },
            Partner::Defect(j) => {
                let b = self.canonical[j];
                let (lo, hi) = (a.col.min(b.col), a.col.max(b.col));
                ((lo + 1)..hi).step_by(2).for_each(|c| push(a.row, c));
                let (lo, hi) = (a.row.min(b.row), a.row.max(b.row));
                ((lo + 1)..hi).step_by(2).for_each(|r| push(r, b.col));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Defect(usize),
    Boundary,
}

/// Minimum-weight pairing of every defect with another defect or a boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `(defect, partner)`; defect pairs are listed once with the smaller index first.
    pub pairs: Vec<(usize, Partner)>,
    pub total_weight: i64,
}

impl Matching {
    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            total_weight: 0,
        }
    }
}

/// Exact minimum-weight perfect matching of a defect graph.
pub fn decode(graph: &DefectGraph) -> Matching {
    let n = graph.num_defects();
    if n == 0 {
        return Matching::empty();
    }
    let edges = graph.candidate_edges();
    let mate = blossom::min_weight_perfect_matching(2 * n, &edges)
        .expect("boundary nodes guarantee a perfect matching");
    let mut pairs = Vec::with_capacity(n);
    let mut total_weight = 0;
    for i in 0..n {
        let m = mate[i];
        if m >= n {
            debug_assert_eq!(m, n + i);
            pairs.push((i, Partner::Boundary));
            total_weight += graph.boundary_weight(i);
        } else if i < m {
            pairs.push((i, Partner::Defect(m)));
            total_weight += graph.pair_weight(i, m);
        }
    }
    Matching {
        pairs,
        total_weight,
    }
}

/// Converts a matching into a correction on the matching graph's error type.
pub fn correction_bits(lattice: &PlanarLattice, graph: &DefectGraph, matching: &Matching) -> BitVec {
    let mut bits = bitvec![0; lattice.num_data()];
    let mut chain = Vec::new();
    for &(i, partner) in &matching.pairs {
        chain.clear();
        graph.chain(lattice, i, partner, &mut chain);
        for &q in &chain {
            let v = bits[q];
            bits.set(q, !v);
        }
    }
    bits
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub correction: PauliErrorPattern,
    pub matchings: [Matching; 2],
}

/// Decodes both check types of a syndrome into a Pauli correction.
pub fn decode_syndrome(lattice: &PlanarLattice, syndrome: &SyndromeSet) -> Decoded {
    let graphs = DefectGraph::from_syndrome(lattice, syndrome);
    let mut correction = PauliErrorPattern::for_lattice(lattice);
    let matchings = graphs.clone().map(|g| decode(&g));
    for (g, m) in graphs.iter().zip(&matchings) {
        *correction.bits_for_mut(g.kind) = correction_bits(lattice, g, m);
    }
    Decoded {
        correction,
        matchings,
    }
}

/// Whether `errors XOR correction` is a logical operator.
///
/// Returns `(logical_x_failed, logical_z_failed)`: the residual X support
/// crosses the left cut an odd number of times, or the residual Z support
/// crosses the top cut an odd number of times.
pub fn logical_failure_check(
    lattice: &PlanarLattice,
    errors: &PauliErrorPattern,
    correction: &PauliErrorPattern,
) -> Result<(bool, bool)> {
    let residual = errors.xor(correction);
    let unsatisfied: usize = [CheckType::Z, CheckType::X]
        .iter()
        .map(|&k| check_outcomes(lattice, k, residual.bits_for(k)).count_ones())
        .sum();
    if unsatisfied > 0 {
        return Err(Error::NonTrivialResidualSyndrome(unsatisfied));
    }
    let x_failed = lattice.left_cut().filter(|&q| residual.x[q]).count() % 2 == 1;
    let z_failed = lattice.top_cut().filter(|&q| residual.z[q]).count() % 2 == 1;
    Ok((x_failed, z_failed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qec_sim::noise::extract_syndrome;
    use crate::surface_code::CodeDistance;
    use std::collections::VecDeque;

    fn lattice(d: u32) -> PlanarLattice {
        PlanarLattice::new(CodeDistance::new(d).unwrap()).unwrap()
    }

    /// Breadth-first distances on the graph whose vertices are checks of one
    /// type (plus a single boundary vertex) and whose edges are data qubits.
    fn bfs_distances(l: &PlanarLattice, kind: CheckType) -> Vec<Vec<i64>> {
        let checks = l.checks(kind);
        let m = checks.len();
        let boundary = m;
        let mut adj = vec![Vec::new(); m + 1];
        for q in 0..l.num_data() {
            let touching: Vec<usize> = (0..m).filter(|&c| checks[c].support.contains(&q)).collect();
            match touching.as_slice() {
                [a, b] => {
                    adj[*a].push(*b);
                    adj[*b].push(*a);
                }
                [a] => {
                    adj[*a].push(boundary);
                    adj[boundary].push(*a);
                }
                // qubits on the far edges touch no check of this type
                [] => {}
                _ => panic!("data qubit in more than two checks of one type"),
            }
        }
        (0..=m)
            .map(|src| {
                let mut dist = vec![i64::MAX; m + 1];
                dist[src] = 0;
                let mut queue = VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    // chains between two defects may not pass through the boundary
                    if u == boundary && src != boundary {
                        continue;
                    }
                    for &v in &adj[u] {
                        if dist[v] == i64::MAX {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    #[test]
    fn graph_weights_equal_shortest_chains() {
        for d in [3, 5, 7] {
            let l = lattice(d);
            for kind in [CheckType::Z, CheckType::X] {
                let checks = l.checks(kind);
                let dist = bfs_distances(&l, kind);
                let defects: Vec<Defect> = checks
                    .iter()
                    .map(|c| Defect { round: 0, kind, coord: c.coord })
                    .collect();
                let g = DefectGraph::new(&l, kind, defects);
                for i in 0..checks.len() {
                    assert_eq!(g.boundary_weight(i), dist[i][checks.len()], "d={d} {kind:?} {i}");
                    for j in 0..checks.len() {
                        if i != j {
                            assert_eq!(g.pair_weight(i, j), dist[i][j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn no_defects_no_matching() {
        let l = lattice(3);
        let g = DefectGraph::new(&l, CheckType::Z, Vec::new());
        assert_eq!(decode(&g), Matching::empty());
    }

    #[test]
    fn adjacent_interior_defects_pair_up() {
        let l = lattice(7);
        let defects = vec![
            Defect { round: 0, kind: CheckType::Z, coord: Coord::new(6, 5) },
            Defect { round: 0, kind: CheckType::Z, coord: Coord::new(6, 7) },
        ];
        let g = DefectGraph::new(&l, CheckType::Z, defects);
        let m = decode(&g);
        assert_eq!(m.pairs, vec![(0, Partner::Defect(1))]);
        assert_eq!(m.total_weight, 1);
    }

    #[test]
    fn single_errors_are_corrected() {
        for d in [3, 5] {
            let l = lattice(d);
            for q in 0..l.num_data() {
                for e in [PauliErrorPattern::with_x(&l, &[q]), PauliErrorPattern::with_z(&l, &[q])] {
                    let s = extract_syndrome(&l, &e);
                    let decoded = decode_syndrome(&l, &s);
                    assert_eq!(
                        logical_failure_check(&l, &e, &decoded.correction).unwrap(),
                        (false, false),
                        "d={d} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_correction_succeeds() {
        let l = lattice(3);
        let e = PauliErrorPattern::with_x(&l, &[0, 5, 7]);
        assert_eq!(logical_failure_check(&l, &e, &e).unwrap(), (false, false));
    }

    #[test]
    fn logical_residual_is_detected() {
        let l = lattice(3);
        let none = PauliErrorPattern::for_lattice(&l);
        for row in [0, 2, 4] {
            let e = PauliErrorPattern::with_x(&l, &l.logical_x_row(row));
            assert_eq!(logical_failure_check(&l, &e, &none).unwrap(), (true, false));
        }
        for col in [0, 2, 4] {
            let e = PauliErrorPattern::with_z(&l, &l.logical_z_column(col));
            assert_eq!(logical_failure_check(&l, &e, &none).unwrap(), (false, true));
        }
    }

    #[test]
    fn bad_correction_is_reported() {
        let l = lattice(3);
        let e = PauliErrorPattern::with_x(&l, &[6]);
        let none = PauliErrorPattern::for_lattice(&l);
        assert!(matches!(
            logical_failure_check(&l, &e, &none),
            Err(Error::NonTrivialResidualSyndrome(_))
        ));
    }
}
