// SPDX-License-Identifier: Apache-2.0
//! Deterministic generators for the lattices and patches used by the pattern builders.
//!
//! Ids are dense and assigned row-major; when a layout has inputs they are
//! numbered first.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node, NodeSet, OpenGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Rectangular,
    Triangular,
    Hexagonal,
    BeveledCluster,
    LhzTrianglePatch,
    UnitCellSheet,
}

impl std::str::FromStr for GridKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rectangular" => GridKind::Rectangular,
            "triangular" => GridKind::Triangular,
            "hexagonal" => GridKind::Hexagonal,
            "beveled_cluster" | "beveled" => GridKind::BeveledCluster,
            "lhz_triangle_patch" | "lhz_patch" => GridKind::LhzTrianglePatch,
            "unit_cell_sheet" => GridKind::UnitCellSheet,
            other => return Err(Error::Parse(format!("unknown grid kind {other:?}"))),
        })
    }
}

fn positive(dims: &[usize], want: usize) -> Result<()> {
    if dims.len() != want {
        return Err(Error::Precondition(format!(
            "expected {want} dimensions, got {}",
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::Precondition("dimensions must be positive".into()));
    }
    Ok(())
}

/// `rectangular`, `triangular`, `hexagonal` and `unit_cell_sheet` take
/// `[rows, cols]`; the two triangle-based kinds take `[n]`.
pub fn generate_grid(kind: GridKind, dims: &[usize]) -> Result<OpenGraph> {
    match kind {
        GridKind::Rectangular => {
            positive(dims, 2)?;
            Ok(lattice(dims[0], dims[1], false)?.open)
        }
        GridKind::Triangular => {
            positive(dims, 2)?;
            Ok(lattice(dims[0], dims[1], true)?.open)
        }
        GridKind::Hexagonal => {
            positive(dims, 2)?;
            Ok(hexagonal(dims[0], dims[1])?.open)
        }
        GridKind::BeveledCluster => {
            positive(dims, 1)?;
            Ok(staged_patches(dims[0], 1)?.open)
        }
        GridKind::LhzTrianglePatch => {
            positive(dims, 1)?;
            Ok(triangle_patch(dims[0])?.open)
        }
        GridKind::UnitCellSheet => {
            positive(dims, 2)?;
            Ok(unit_cell_sheet(dims[0], dims[1])?.open)
        }
    }
}

/// Grid with coordinates; inputs are column 0 and outputs the last column.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub open: OpenGraph,
    pub coords: BTreeMap<Node, (usize, usize)>,
}

fn lattice(rows: usize, cols: usize, diagonal: bool) -> Result<Lattice> {
    let id = |r: usize, c: usize| (r * cols + c) as Node;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    for r in 0..rows {
        for c in 0..cols {
            g.add_node(id(r, c));
            coords.insert(id(r, c), (r, c));
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c));
            }
            if diagonal && r + 1 < rows && c + 1 < cols {
                g.add_edge(id(r, c), id(r + 1, c + 1));
            }
        }
    }
    let inputs = (0..rows).map(|r| id(r, 0)).collect();
    let outputs = (0..rows).map(|r| id(r, cols - 1)).collect();
    Ok(Lattice {
        open: OpenGraph::new(g, inputs, outputs)?,
        coords,
    })
}

/// Brick-wall honeycomb: every horizontal bond, plus the vertical bond
/// `(r,c)–(r+1,c)` when `r + c` is odd. Sites with `r + c` even form the
/// kept sublattice; each kept site's vertical bond points up.
#[derive(Clone, Debug)]
pub struct HexLayout {
    pub open: OpenGraph,
    pub coords: BTreeMap<Node, (usize, usize)>,
    pub kept: NodeSet,
    pub measured: NodeSet,
}

pub fn hexagonal(rows: usize, cols: usize) -> Result<HexLayout> {
    let id = |r: usize, c: usize| (r * cols + c) as Node;
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    let mut kept = NodeSet::new();
    let mut measured = NodeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            g.add_node(id(r, c));
            coords.insert(id(r, c), (r, c));
            if (r + c) % 2 == 0 {
                kept.insert(id(r, c));
            } else {
                measured.insert(id(r, c));
            }
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows && (r + c) % 2 == 1 {
                g.add_edge(id(r, c), id(r + 1, c));
            }
        }
    }
    let inputs = (0..rows).map(|r| id(r, 0)).collect();
    let outputs = (0..rows).map(|r| id(r, cols - 1)).collect();
    Ok(HexLayout {
        open: OpenGraph::new(g, inputs, outputs)?,
        coords,
        kept,
        measured,
    })
}

/// Triangular cluster patch whose X-measured sublattice reduces to the LHZ
/// triangle on `n` base qubits.
///
/// Row `r = 1..=n` (top to bottom) holds columns `c = -(r-1)..=(r-1)`. A site
/// is a parity site when `c - (r-1)` is even and an X site otherwise; the
/// parity sites of row `n` are the base qubits. Rows are joined horizontally,
/// and `(r-1,c)–(r,c)` vertically for `|c| ≤ r-2`, except that in row `n` the
/// vertical edges ending on a base qubit are left out. Every X site's north
/// neighbor is a parity site of the row above.
#[derive(Clone, Debug)]
pub struct TrianglePatch {
    pub open: OpenGraph,
    pub coords: BTreeMap<Node, (i64, i64)>,
    /// Bottom-row parity sites, left to right.
    pub bases: Vec<Node>,
    pub parity_sites: NodeSet,
    pub x_sites: NodeSet,
    pub north: BTreeMap<Node, Node>,
}

pub fn triangle_patch(n: usize) -> Result<TrianglePatch> {
    triangle_patch_from(n, 0)
}

fn triangle_patch_from(n: usize, first: Node) -> Result<TrianglePatch> {
    if n == 0 {
        return Err(Error::Precondition("patch needs n ≥ 1".into()));
    }
    let n = n as i64;
    let mut ids: BTreeMap<(i64, i64), Node> = BTreeMap::new();
    let mut next = first;
    for r in (1..=n).rev() {
        for c in -(r - 1)..=(r - 1) {
            ids.insert((r, c), next);
            next += 1;
        }
    }
    let is_parity = |r: i64, c: i64| (c - (r - 1)).rem_euclid(2) == 0;
    let mut g = Graph::new();
    for &v in ids.values() {
        g.add_node(v);
    }
    for (&(r, c), &v) in &ids {
        if let Some(&w) = ids.get(&(r, c + 1)) {
            g.add_edge(v, w);
        }
        if r >= 2 && c.abs() <= r - 2 {
            let up = ids[&(r - 1, c)];
            let into_base = r == n && is_parity(r, c);
            if !into_base {
                g.add_edge(up, v);
            }
        }
    }
    let bases: Vec<Node> = (-(n - 1)..=(n - 1))
        .step_by(2)
        .map(|c| ids[&(n, c)])
        .collect();
    let mut parity_sites = NodeSet::new();
    let mut x_sites = NodeSet::new();
    let mut north = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for (&(r, c), &v) in &ids {
        coords.insert(v, (r, c));
        if is_parity(r, c) {
            if r < n {
                parity_sites.insert(v);
            }
        } else {
            x_sites.insert(v);
            north.insert(v, ids[&(r - 1, c)]);
        }
    }
    let base_set: NodeSet = bases.iter().copied().collect();
    Ok(TrianglePatch {
        open: OpenGraph::new(g, base_set.clone(), base_set)?,
        coords,
        bases,
        parity_sites,
        x_sites,
        north,
    })
}

/// A chain of `depth` triangle patches.
///
/// Stage `k` bases are joined one-to-one to stage `k+1` bases. The last
/// stage's bases are joined to the outputs, through one X-measured link
/// qubit each when `depth` is odd and directly when it is even, so every
/// logical wire crosses an even number of single-edge teleports. For
/// `depth = 1` this is the beveled cluster with `n² + 2n` qubits.
#[derive(Clone, Debug)]
pub struct StagedPatches {
    pub open: OpenGraph,
    pub stages: Vec<TrianglePatch>,
    pub links: Vec<Node>,
    pub outputs: Vec<Node>,
}

pub fn staged_patches(n: usize, depth: usize) -> Result<StagedPatches> {
    if n == 0 || depth == 0 {
        return Err(Error::Precondition("need n ≥ 1 and depth ≥ 1".into()));
    }
    let mut g = Graph::new();
    let mut stages = Vec::new();
    let mut next: Node = 0;
    for k in 0..depth {
        let p = triangle_patch_from(n, next)?;
        next += (n * n) as Node;
        for v in p.open.graph.nodes() {
            g.add_node(v);
        }
        for (a, b) in p.open.graph.edges() {
            g.add_edge(a, b);
        }
        if k > 0 {
            let prev: &TrianglePatch = &stages[k - 1];
            for (&a, &b) in prev.bases.iter().zip(&p.bases) {
                g.add_edge(a, b);
            }
        }
        stages.push(p);
    }
    let last = stages.last().unwrap().bases.clone();
    let mut links = Vec::new();
    if depth % 2 == 1 {
        for _ in 0..n {
            g.add_node(next);
            links.push(next);
            next += 1;
        }
    }
    let mut outputs = Vec::new();
    for _ in 0..n {
        g.add_node(next);
        outputs.push(next);
        next += 1;
    }
    for i in 0..n {
        if links.is_empty() {
            g.add_edge(last[i], outputs[i]);
        } else {
            g.add_edge(last[i], links[i]);
            g.add_edge(links[i], outputs[i]);
        }
    }
    let inputs = stages[0].bases.iter().copied().collect();
    let out_set = outputs.iter().copied().collect();
    Ok(StagedPatches {
        open: OpenGraph::new(g, inputs, out_set)?,
        stages,
        links,
        outputs,
    })
}

/// Node ids of one unit cell; `q7` is `q6` of the cell below when that exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellIds {
    pub q1: Node,
    pub q2: Node,
    pub q3: Node,
    pub q4: Node,
    pub q5: Option<Node>,
    pub q6: Node,
    pub q7: Option<Node>,
}

/// The seven-qubit cell on ids 1..=7, inputs `{1, 7}`, outputs `{6, 7}`.
pub fn unit_cell() -> Result<(OpenGraph, CellIds)> {
    let ids = CellIds {
        q1: 1,
        q2: 2,
        q3: 3,
        q4: 4,
        q5: Some(5),
        q6: 6,
        q7: Some(7),
    };
    let g = Graph::from_edges(
        &[1, 2, 3, 4, 5, 6, 7],
        &[(1, 3), (2, 3), (3, 6), (4, 6), (5, 6), (5, 7)],
    )?;
    Ok((OpenGraph::new(g, [1, 7].into(), [6, 7].into())?, ids))
}

fn cell_edges(g: &mut Graph, c: &CellIds) {
    g.add_edge(c.q1, c.q3);
    g.add_edge(c.q2, c.q3);
    g.add_edge(c.q3, c.q6);
    g.add_edge(c.q4, c.q6);
    if let (Some(q5), Some(q7)) = (c.q5, c.q7) {
        g.add_edge(q5, c.q6);
        g.add_edge(q5, q7);
    }
}

/// Tessellation of unit cells: `wires` rows, `cols` columns. The bottom row's
/// cells have no `q5`; `q6` of a cell is `q1` of the cell to its right.
#[derive(Clone, Debug)]
pub struct UnitCellSheet {
    pub open: OpenGraph,
    /// `cells[col][wire]`, wire 0 on top.
    pub cells: Vec<Vec<CellIds>>,
    pub inputs: Vec<Node>,
    pub outputs: Vec<Node>,
}

pub fn unit_cell_sheet(wires: usize, cols: usize) -> Result<UnitCellSheet> {
    if wires == 0 || cols == 0 {
        return Err(Error::Precondition("sheet needs positive size".into()));
    }
    let mut g = Graph::new();
    let mut next: Node = 0;
    let mut fresh = |g: &mut Graph| {
        let v = next;
        next += 1;
        g.add_node(v);
        v
    };
    let inputs: Vec<Node> = (0..wires).map(|_| fresh(&mut g)).collect();
    let mut current = inputs.clone();
    let mut cells = Vec::new();
    for _ in 0..cols {
        let mut column = Vec::new();
        for (w, &q1) in current.iter().enumerate() {
            let q2 = fresh(&mut g);
            let q3 = fresh(&mut g);
            let q4 = fresh(&mut g);
            let q5 = (w + 1 < wires).then(|| fresh(&mut g));
            let q6 = fresh(&mut g);
            column.push(CellIds {
                q1,
                q2,
                q3,
                q4,
                q5,
                q6,
                q7: None,
            });
        }
        for w in 0..wires.saturating_sub(1) {
            column[w].q7 = Some(column[w + 1].q6);
        }
        for c in &column {
            cell_edges(&mut g, c);
        }
        current = column.iter().map(|c| c.q6).collect();
        cells.push(column);
    }
    let open = OpenGraph::new(
        g,
        inputs.iter().copied().collect(),
        current.iter().copied().collect(),
    )?;
    Ok(UnitCellSheet {
        open,
        cells,
        inputs,
        outputs: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rectangular_node() {
        let og = generate_grid(GridKind::Rectangular, &[1, 1]).unwrap();
        assert_eq!(og.graph.node_count(), 1);
        assert_eq!(og.graph.edge_count(), 0);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(generate_grid(GridKind::Triangular, &[0, 3]).is_err());
        assert!(generate_grid(GridKind::BeveledCluster, &[2, 2]).is_err());
    }

    #[test]
    fn beveled_counts() {
        for n in 1..=6 {
            let og = generate_grid(GridKind::BeveledCluster, &[n]).unwrap();
            assert_eq!(og.graph.node_count(), n * n + 2 * n);
            assert!(og.inputs.is_disjoint(&og.outputs));
            assert_eq!(og.inputs.len(), n);
        }
    }

    #[test]
    fn hexagonal_is_bipartite_with_degree_at_most_three() {
        let h = hexagonal(4, 6).unwrap();
        assert!(h.open.graph.is_bipartite());
        assert!(h.open.graph.nodes().all(|v| h.open.graph.degree(v) <= 3));
        assert!(h.open.graph.is_independent(&h.kept));
    }

    #[test]
    fn patch_sites_partition_the_patch() {
        let p = triangle_patch(4).unwrap();
        assert_eq!(p.open.graph.node_count(), 16);
        assert_eq!(p.x_sites.len(), 6);
        assert_eq!(p.parity_sites.len(), 6);
        assert_eq!(p.bases, vec![0, 2, 4, 6]);
        for (&x, &up) in &p.north {
            assert!(p.open.graph.has_edge(x, up));
            assert!(p.parity_sites.contains(&up));
        }
    }

    #[test]
    fn sheet_shares_wire_qubits() {
        let s = unit_cell_sheet(2, 2).unwrap();
        assert_eq!(s.cells[1][0].q1, s.cells[0][0].q6);
        assert_eq!(s.cells[0][0].q7, Some(s.cells[0][1].q6));
        assert_eq!(s.open.graph.node_count(), 2 + 2 * 9);
        assert_eq!(s.outputs, vec![s.cells[1][0].q6, s.cells[1][1].q6]);
    }
}
