//! Annular planar diagrams and their resolutions.
//!
//! A diagram lives in the annulus with a marked axis point X inside and the
//! point at infinity O outside. It is given combinatorially: crossings as
//! quadruples of edge ids listed counterclockwise from the incoming
//! under-strand, axis data as the list of (edge, sign) crossings of a fixed
//! reference arc from X to O, plus crossingless free loops with their
//! winding numbers. The 0-smoothing of a crossing (a,b,c,d) joins a~b and
//! c~d, the 1-smoothing joins a~d and b~c.
//!
//! Windings of resolution circles are pure integer sums of the axis signs
//! over member edges; a circle is nontrivial exactly when its winding is
//! nonzero. Any value outside {-1,0,+1} would contradict an embedded circle
//! and is rejected, which is also what keeps the merge/split case analysis
//! downstream honest.

use crate::error::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
struct RawDiagram {
    crossings: Vec<[usize; 4]>,
    n_edges: usize,
    #[serde(default)]
    axis: Vec<(usize, i64)>,
    #[serde(default)]
    free_loops: Vec<i64>,
    #[serde(default)]
    signs: Option<Vec<i64>>,
}

/// A validated annular planar diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularDiagram {
    pub crossings: Vec<[usize; 4]>,
    pub n_edges: usize,
    /// (edge, +-1) per crossing of the reference arc with an edge.
    pub axis: Vec<(usize, i64)>,
    /// Winding number of each crossingless loop.
    pub free_loops: Vec<i64>,
    /// Orientation signs of the crossings, if an orientation is given.
    pub signs: Option<Vec<i64>>,
}

/// One circle of a resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    /// Member edges, sorted increasing; empty for a free loop.
    pub edges: Vec<usize>,
    pub winding: i64,
}

impl Circle {
    pub fn is_trivial(&self) -> bool {
        self.winding == 0
    }
}

/// A complete resolution of the diagram at one cube vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub vertex: u64,
    /// Circles ordered by smallest member edge, free loops last in input order.
    pub circles: Vec<Circle>,
    /// Circle index of each edge.
    pub edge_circle: Vec<usize>,
}

impl AnnularDiagram {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawDiagram = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("APD schema: {e}")))?;
        let diagram = AnnularDiagram {
            crossings: raw.crossings,
            n_edges: raw.n_edges,
            axis: raw.axis,
            free_loops: raw.free_loops,
            signs: raw.signs,
        };
        diagram.validate()?;
        Ok(diagram)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedInput(format!("reading {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// (n_plus, n_minus) if an orientation is available.
    pub fn crossing_counts(&self) -> Option<(usize, usize)> {
        self.signs.as_ref().map(|signs| {
            let plus = signs.iter().filter(|&&s| s > 0).count();
            (plus, signs.len() - plus)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.crossings.len() >= 63 {
            return Err(Error::CapacityExceeded {
                needed: u128::MAX,
                budget: 0,
            });
        }
        let mut uses = vec![0usize; self.n_edges];
        for (ci, quad) in self.crossings.iter().enumerate() {
            for &e in quad {
                if e >= self.n_edges {
                    return Err(Error::InvalidDiagram(format!(
                        "crossing {ci} references edge {e}, but n_edges = {}",
                        self.n_edges
                    )));
                }
                uses[e] += 1;
            }
            let [a, b, c, d] = *quad;
            if a == c || b == d {
                return Err(Error::InvalidDiagram(format!(
                    "crossing {ci} pairs a strand with itself; two closed curves cannot cross once"
                )));
            }
        }
        for (e, &n) in uses.iter().enumerate() {
            if n != 2 {
                return Err(Error::InvalidDiagram(format!(
                    "edge {e} appears {n} times; every edge must appear exactly twice"
                )));
            }
        }
        for &(e, s) in &self.axis {
            if e >= self.n_edges {
                return Err(Error::AxisThroughCrossing { edge: e });
            }
            if s != 1 && s != -1 {
                return Err(Error::MalformedInput(format!("axis sign {s} is not +-1")));
            }
        }
        for (i, &w) in self.free_loops.iter().enumerate() {
            if !(-1..=1).contains(&w) {
                return Err(Error::InvalidDiagram(format!(
                    "free loop {i} has winding {w}, outside -1..=1"
                )));
            }
        }
        if let Some(signs) = &self.signs {
            if signs.len() != self.crossings.len() {
                return Err(Error::MalformedInput(format!(
                    "{} orientation signs for {} crossings",
                    signs.len(),
                    self.crossings.len()
                )));
            }
            if signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::MalformedInput("orientation signs must be +-1".into()));
            }
        }
        Ok(())
    }

    /// The edge pairs joined by smoothing crossing `ci` with the given bit.
    pub fn smoothing_pairs(&self, ci: usize, bit: bool) -> [(usize, usize); 2] {
        let [a, b, c, d] = self.crossings[ci];
        if bit {
            [(a, d), (b, c)]
        } else {
            [(a, b), (c, d)]
        }
    }

    /// Resolve the diagram at a cube vertex (bit i = smoothing of crossing i).
    pub fn resolve(&self, vertex: u64) -> Result<Resolution> {
        let pairs = (0..self.crossings.len())
            .flat_map(|ci| self.smoothing_pairs(ci, vertex >> ci & 1 == 1))
            .collect::<Vec<_>>();
        self.resolve_from_pairs(vertex, &pairs)
    }

    /// Union-find over the given smoothing pairs. Split out so the tests can
    /// feed the pairs in shuffled order and confirm the output is identical.
    pub(crate) fn resolve_from_pairs(&self, vertex: u64, pairs: &[(usize, usize)]) -> Result<Resolution> {
        let mut uf = UnionFind::new(self.n_edges);
        for &(x, y) in pairs {
            uf.union(x, y);
        }
        let mut windings = vec![0i64; self.n_edges];
        for &(e, s) in &self.axis {
            windings[uf.find(e)] += s;
        }
        // Canonical order: representatives by smallest member edge, which is
        // exactly the order of first appearance when scanning edges upward.
        let mut circle_of_root = vec![usize::MAX; self.n_edges];
        let mut circles: Vec<Circle> = Vec::new();
        let mut edge_circle = vec![usize::MAX; self.n_edges];
        for e in 0..self.n_edges {
            let root = uf.find(e);
            if circle_of_root[root] == usize::MAX {
                circle_of_root[root] = circles.len();
                circles.push(Circle { edges: Vec::new(), winding: windings[root] });
            }
            let ci = circle_of_root[root];
            circles[ci].edges.push(e);
            edge_circle[e] = ci;
        }
        for &w in &self.free_loops {
            circles.push(Circle { edges: Vec::new(), winding: w });
        }
        for circle in &circles {
            if !(-1..=1).contains(&circle.winding) {
                return Err(Error::InvalidDiagram(format!(
                    "vertex {vertex:0width$b}: circle {:?} has winding {}, outside -1..=1; \
                     axis data is inconsistent with an embedded circle",
                    circle.edges,
                    circle.winding,
                    width = self.crossings.len().max(1),
                )));
            }
        }
        Ok(Resolution { vertex, circles, edge_circle })
    }

    /// Render a vertex as the bit string b0 b1 ... (crossing 0 first).
    pub fn vertex_string(&self, vertex: u64) -> String {
        (0..self.crossings.len().max(1))
            .map(|i| if vertex >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_left() -> AnnularDiagram {
        AnnularDiagram::from_json_str(
            r#"{
                "crossings": [[4,5,1,0],[0,1,3,2],[2,3,5,4]],
                "n_edges": 6,
                "axis": [[4,1],[5,-1]],
                "free_loops": [],
                "signs": [-1,-1,-1]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_and_validates_trefoil() {
        let d = trefoil_left();
        assert_eq!(d.n_crossings(), 3);
        assert_eq!(d.crossing_counts(), Some((0, 3)));
    }

    #[test]
    fn trefoil_extreme_resolutions() {
        let d = trefoil_left();
        let r0 = d.resolve(0b000).unwrap();
        assert_eq!(r0.circles.len(), 3);
        assert!(r0.circles.iter().all(|c| c.is_trivial()));
        assert_eq!(r0.circles[0].edges, vec![0, 1]);
        assert_eq!(r0.circles[1].edges, vec![2, 3]);
        assert_eq!(r0.circles[2].edges, vec![4, 5]);

        let r7 = d.resolve(0b111).unwrap();
        assert_eq!(r7.circles.len(), 2);
        assert_eq!(r7.circles[0].edges, vec![0, 2, 4]);
        assert_eq!(r7.circles[1].edges, vec![1, 3, 5]);
        assert_eq!(r7.circles[0].winding, 1);
        assert_eq!(r7.circles[1].winding, -1);
    }

    #[test]
    fn adjacent_resolutions_differ_by_one_circle() {
        let d = trefoil_left();
        for v in 0..8u64 {
            let here = d.resolve(v).unwrap().circles.len() as i64;
            for c in 0..3 {
                if v >> c & 1 == 0 {
                    let there = d.resolve(v | 1 << c).unwrap().circles.len() as i64;
                    assert_eq!((here - there).abs(), 1, "vertex {v} crossing {c}");
                }
            }
        }
    }

    #[test]
    fn resolution_is_order_independent() {
        let d = trefoil_left();
        for v in 0..8u64 {
            let mut pairs: Vec<(usize, usize)> = (0..3)
                .flat_map(|ci| d.smoothing_pairs(ci, v >> ci & 1 == 1))
                .collect();
            let base = d.resolve_from_pairs(v, &pairs).unwrap();
            pairs.reverse();
            assert_eq!(d.resolve_from_pairs(v, &pairs).unwrap(), base);
            pairs.swap(0, 3);
            pairs.swap(1, 2);
            assert_eq!(d.resolve_from_pairs(v, &pairs).unwrap(), base);
        }
    }

    #[test]
    fn winding_is_additive_under_merges() {
        let d = trefoil_left();
        for v in 0..8u64 {
            let here = d.resolve(v).unwrap();
            for c in 0..3 {
                if v >> c & 1 == 1 {
                    continue;
                }
                let there = d.resolve(v | 1 << c).unwrap();
                if there.circles.len() + 1 == here.circles.len() {
                    // merge: find the target circle that is no source circle
                    for tc in &there.circles {
                        let sources: Vec<&Circle> = here
                            .circles
                            .iter()
                            .filter(|sc| !sc.edges.is_empty() && sc.edges.iter().all(|e| tc.edges.contains(e)))
                            .collect();
                        if sources.len() == 2 {
                            assert_eq!(tc.winding, sources[0].winding + sources[1].winding);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_schema_and_diagram_errors() {
        assert!(matches!(
            AnnularDiagram::from_json_str("{"),
            Err(Error::MalformedInput(_))
        ));
        // edge used four times
        assert!(matches!(
            AnnularDiagram::from_json_str(
                r#"{"crossings": [[0,0,1,1],[0,0,1,1]], "n_edges": 2}"#
            ),
            Err(Error::InvalidDiagram(_))
        ));
        // under-strand paired with itself (non-planar)
        assert!(matches!(
            AnnularDiagram::from_json_str(r#"{"crossings": [[0,1,0,1]], "n_edges": 2}"#),
            Err(Error::InvalidDiagram(_))
        ));
        // axis through nonexistent edge
        assert!(matches!(
            AnnularDiagram::from_json_str(
                r#"{"crossings": [[0,0,1,1]], "n_edges": 2, "axis": [[5,1]]}"#
            ),
            Err(Error::AxisThroughCrossing { edge: 5 })
        ));
        // inconsistent axis data: winding 2 on the 1-resolution circle
        let d = AnnularDiagram::from_json_str(
            r#"{"crossings": [[0,0,1,1]], "n_edges": 2, "axis": [[0,1],[1,1]]}"#,
        )
        .unwrap();
        assert!(d.resolve(0).is_ok());
        assert!(matches!(d.resolve(1), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn free_loops_come_last() {
        let d = AnnularDiagram::from_json_str(
            r#"{"crossings": [], "n_edges": 0, "free_loops": [1, 0]}"#,
        )
        .unwrap();
        let r = d.resolve(0).unwrap();
        assert_eq!(r.circles.len(), 2);
        assert_eq!(r.circles[0].winding, 1);
        assert_eq!(r.circles[1].winding, 0);
        assert!(r.circles.iter().all(|c| c.edges.is_empty()));
    }

    #[test]
    fn vertex_string_renders_crossing_zero_first() {
        let d = trefoil_left();
        assert_eq!(d.vertex_string(0b001), "100");
        assert_eq!(d.vertex_string(0b110), "011");
    }
}
