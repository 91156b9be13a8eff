//! Core representation of `(n+1)`-colored graphs.
//!
//! A graph of order `2p` on colors `0..=n` is stored as one fixed-point-free
//! involution per color: `matchings[c][v]` is the unique vertex joined to `v`
//! by a `c`-colored edge.  Loops are forbidden; two vertices may be joined by
//! several parallel edges of distinct colors.  Vertices are dense ids
//! `0..2p`.
//!
//! The module also owns the two interchange formats:
//!
//! * a line-oriented text format (UTF-8, LF only) —
//!
//!   ```text
//!   gem v1
//!   colors 5
//!   order 2
//!   meta name=S4
//!   c0: 1 0
//!   c1: 1 0
//!   c2: 1 0
//!   c3: 1 0
//!   c4: 1 0
//!   ```
//!
//! * a JSON mirror `{version, colors, order, matchings, meta}`.
//!
//! Serialization is canonical: parsing a serialized graph returns an equal
//! value, and serializing a parsed canonical file reproduces it byte for
//! byte.

use crate::dsu::Dsu;
use crate::genus::GenusValue;
use crate::{GemError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Edge color; colors of an `(n+1)`-colored graph are `0..=n`.
pub type Color = u8;
/// Dense vertex id in `0..order`.
pub type Vertex = u32;

/// Supported color counts: `n+1` for dimensions `n = 2..=6`.
pub const MIN_COLORS: usize = 3;
pub const MAX_COLORS: usize = 7;

// ---------------------------------------------------------------------------
// Color sets
// ---------------------------------------------------------------------------

/// A subset of the color set, kept in canonical ascending order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColorSet(u16);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// The full color set `{0, …, num_colors-1}`.
    pub fn all(num_colors: usize) -> Self {
        ColorSet(((1u32 << num_colors) - 1) as u16)
    }

    pub fn from_colors(colors: &[Color]) -> Self {
        let mut s = ColorSet::EMPTY;
        for &c in colors {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1 << c);
    }

    pub fn with(mut self, c: Color) -> Self {
        self.insert(c);
        self
    }

    pub fn without(mut self, c: Color) -> Self {
        self.remove(c);
        self
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside the full set of `num_colors` colors.
    pub fn complement(self, num_colors: usize) -> Self {
        ColorSet(ColorSet::all(num_colors).0 & !self.0)
    }

    pub fn is_subset_of(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        (0..16).filter(move |c| self.0 & (1 << c) != 0).map(|c| c as Color)
    }

    pub fn to_vec(self) -> Vec<Color> {
        self.iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ColorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Color>::deserialize(d)?;
        Ok(ColorSet::from_colors(&v))
    }
}

/// All `size`-element subsets of `{0, …, num_colors-1}`, ascending.
pub fn color_subsets(num_colors: usize, size: usize) -> Vec<ColorSet> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(num_colors: usize, size: usize, start: Color, current: &mut Vec<Color>, out: &mut Vec<ColorSet>) {
        if current.len() == size {
            out.push(ColorSet::from_colors(current));
            return;
        }
        for c in start..num_colors as Color {
            current.push(c);
            rec(num_colors, size, c + 1, current, out);
            current.pop();
        }
    }
    rec(num_colors, size, 0, &mut current, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Metadata
// ---------------------------------------------------------------------------

/// Optional annotations carried by a graph.  `m` and `mprime` are the ranks
/// of the fundamental groups of the encoded compact manifold and of its
/// cone-completion; `expected_*` record independently known invariant values
/// that tools verify against.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mprime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_rho: Option<GenusValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_dg: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_k: Option<i64>,
}

impl Metadata {
    pub fn named(name: &str) -> Self {
        Metadata { name: Some(name.to_string()), ..Metadata::default() }
    }

    /// Meta lines in canonical key order, as they appear in the text format.
    fn text_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        if let Some(v) = &self.name {
            lines.push(format!("meta name={v}"));
        }
        if let Some(v) = &self.manifold {
            lines.push(format!("meta manifold={v}"));
        }
        if let Some(v) = self.m {
            lines.push(format!("meta m={v}"));
        }
        if let Some(v) = self.mprime {
            lines.push(format!("meta mprime={v}"));
        }
        if let Some(v) = self.bipartite {
            lines.push(format!("meta bipartite={v}"));
        }
        if let Some(v) = self.expected_rho {
            lines.push(format!("meta expected_rho={v}"));
        }
        if let Some(v) = self.expected_dg {
            lines.push(format!("meta expected_dg={v}"));
        }
        if let Some(v) = self.expected_k {
            lines.push(format!("meta expected_k={v}"));
        }
        lines
    }

    fn set_from_text(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let bad = |what: &str| GemError::Parse { line, msg: format!("bad meta value for {what}: `{value}`") };
        match key {
            "name" => self.name = Some(value.to_string()),
            "manifold" => self.manifold = Some(value.to_string()),
            "m" => self.m = Some(value.parse().map_err(|_| bad("m"))?),
            "mprime" => self.mprime = Some(value.parse().map_err(|_| bad("mprime"))?),
            "bipartite" => {
                self.bipartite = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad("bipartite")),
                })
            }
            "expected_rho" => self.expected_rho = Some(value.parse().map_err(|_| bad("expected_rho"))?),
            "expected_dg" => self.expected_dg = Some(value.parse().map_err(|_| bad("expected_dg"))?),
            "expected_k" => self.expected_k = Some(value.parse().map_err(|_| bad("expected_k"))?),
            other => {
                return Err(GemError::Parse { line, msg: format!("unknown meta key `{other}`") });
            }
        }
        Ok(())
    }
}

/// Where a derived graph came from: residue extraction records the colors and
/// vertices of the host graph, color normalization records the permutation
/// that was applied.  Provenance is in-memory only and never serialized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub original_colors: Option<Vec<Color>>,
    pub original_vertices: Option<Vec<Vertex>>,
    pub color_permutation: Option<Vec<Color>>,
}

// ---------------------------------------------------------------------------
// Raw (unvalidated) graphs and validation
// ---------------------------------------------------------------------------

/// A parsed-but-unvalidated graph, also the JSON mirror shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawGem {
    pub version: String,
    pub colors: usize,
    pub order: usize,
    pub matchings: Vec<Vec<Vertex>>,
    #[serde(default)]
    pub meta: Metadata,
}

/// One structural defect found during validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    BadVersion { found: String },
    ColorCount { found: usize },
    ZeroOrder,
    OddOrder { order: usize },
    MatchingCount { declared: usize, found: usize },
    MatchingLength { color: Color, expected: usize, found: usize },
    PartnerOutOfRange { color: Color, vertex: Vertex, partner: Vertex },
    SelfPairing { color: Color, vertex: Vertex },
    NotInvolution { color: Color, vertex: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadVersion { found } => write!(f, "unsupported version `{found}`"),
            Violation::ColorCount { found } => {
                write!(f, "{found} colors outside the supported range {MIN_COLORS}..={MAX_COLORS}")
            }
            Violation::ZeroOrder => write!(f, "graph has no vertices"),
            Violation::OddOrder { order } => write!(f, "odd order {order}"),
            Violation::MatchingCount { declared, found } => {
                write!(f, "declared {declared} colors but found {found} matchings")
            }
            Violation::MatchingLength { color, expected, found } => {
                write!(f, "color {color}: matching lists {found} vertices, expected {expected}")
            }
            Violation::PartnerOutOfRange { color, vertex, partner } => {
                write!(f, "color {color}: vertex {vertex} pairs with out-of-range {partner}")
            }
            Violation::SelfPairing { color, vertex } => {
                write!(f, "color {color}: vertex {vertex} pairs with itself (loop)")
            }
            Violation::NotInvolution { color, vertex } => {
                write!(f, "color {color}: pairing is not an involution at vertex {vertex}")
            }
        }
    }
}

/// Everything wrong with a raw graph, in one pass.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl RawGem {
    /// Checks every structural requirement and reports all defects at once.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.version != "v1" {
            violations.push(Violation::BadVersion { found: self.version.clone() });
        }
        if !(MIN_COLORS..=MAX_COLORS).contains(&self.colors) {
            violations.push(Violation::ColorCount { found: self.colors });
        }
        if self.order == 0 {
            violations.push(Violation::ZeroOrder);
        } else if self.order % 2 != 0 {
            violations.push(Violation::OddOrder { order: self.order });
        }
        if self.matchings.len() != self.colors {
            violations.push(Violation::MatchingCount { declared: self.colors, found: self.matchings.len() });
        }
        for (c, matching) in self.matchings.iter().enumerate() {
            let c = c as Color;
            if matching.len() != self.order {
                violations.push(Violation::MatchingLength {
                    color: c,
                    expected: self.order,
                    found: matching.len(),
                });
                continue;
            }
            for (v, &w) in matching.iter().enumerate() {
                let v = v as Vertex;
                if w as usize >= self.order {
                    violations.push(Violation::PartnerOutOfRange { color: c, vertex: v, partner: w });
                } else if w == v {
                    violations.push(Violation::SelfPairing { color: c, vertex: v });
                } else if matching[w as usize] != v {
                    violations.push(Violation::NotInvolution { color: c, vertex: v });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Converts into a validated graph, or fails with the first defect.
    pub fn into_graph(self) -> Result<ColoredGraph> {
        let report = self.validate();
        if let Some(first) = report.violations.first() {
            return Err(GemError::Invalid(first.to_string()));
        }
        Ok(ColoredGraph {
            dim: (self.colors - 1) as u8,
            matchings: self.matchings,
            meta: self.meta,
            provenance: None,
        })
    }
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

/// The partition of the vertex set into connected components of the subgraph
/// spanned by a set of colors.  Blocks are listed by ascending least vertex
/// and each block is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePartition {
    colors: ColorSet,
    blocks: Vec<Vec<Vertex>>,
    index: Vec<u32>,
}

impl ResiduePartition {
    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    /// Index of the block containing `v` in the block list.
    pub fn block_of(&self, v: Vertex) -> usize {
        self.index[v as usize] as usize
    }
}

// ---------------------------------------------------------------------------
// Bipartiteness
// ---------------------------------------------------------------------------

/// Either a 2-coloring of the vertices (the least vertex of every connected
/// component is in class 0) or an odd closed walk as a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartiteness {
    Bipartite { classes: Vec<u8> },
    OddWalk { walk: Vec<Vertex> },
}

// ---------------------------------------------------------------------------
// The graph itself
// ---------------------------------------------------------------------------

/// A validated `(n+1)`-colored graph.  See the module docs for the encoding.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    dim: u8,
    matchings: Vec<Vec<Vertex>>,
    pub meta: Metadata,
    pub provenance: Option<Provenance>,
}

// Provenance is bookkeeping, not part of the graph's value.
impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.matchings == other.matchings && self.meta == other.meta
    }
}
impl Eq for ColoredGraph {}

impl ColoredGraph {
    /// Builds a graph from one involution per color, validating everything.
    pub fn from_matchings(matchings: Vec<Vec<Vertex>>, meta: Metadata) -> Result<Self> {
        let order = matchings.first().map(|m| m.len()).unwrap_or(0);
        let raw = RawGem { version: "v1".into(), colors: matchings.len(), order, matchings, meta };
        raw.into_graph()
    }

    /// Fast constructor for internally generated graphs whose validity is
    /// guaranteed by construction (the enumerator, dipole moves, …).
    pub(crate) fn from_matchings_unchecked(matchings: Vec<Vec<Vertex>>, meta: Metadata) -> Self {
        debug_assert!(RawGem {
            version: "v1".into(),
            colors: matchings.len(),
            order: matchings[0].len(),
            matchings: matchings.clone(),
            meta: meta.clone(),
        }
        .validate()
        .is_clean());
        ColoredGraph { dim: (matchings.len() - 1) as u8, matchings, meta, provenance: None }
    }

    /// Dimension `n`: the graph has `n+1` colors.
    pub fn dimension(&self) -> u8 {
        self.dim
    }

    pub fn num_colors(&self) -> usize {
        self.dim as usize + 1
    }

    /// Number of vertices, `2p`.
    pub fn order(&self) -> usize {
        self.matchings[0].len()
    }

    /// Half the order, `p`.
    pub fn half_order(&self) -> usize {
        self.order() / 2
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        0..=self.dim
    }

    pub fn all_colors(&self) -> ColorSet {
        ColorSet::all(self.num_colors())
    }

    /// The `c`-colored partner of `v`.
    pub fn partner(&self, c: Color, v: Vertex) -> Vertex {
        self.matchings[c as usize][v as usize]
    }

    pub fn matching(&self, c: Color) -> &[Vertex] {
        &self.matchings[c as usize]
    }

    pub fn matchings(&self) -> &[Vec<Vertex>] {
        &self.matchings
    }

    // -- residues ----------------------------------------------------------

    /// Connected components of the subgraph spanned by `colors`.
    /// The empty color set yields singleton blocks.
    pub fn residues(&self, colors: ColorSet) -> ResiduePartition {
        let order = self.order();
        let mut dsu = Dsu::new(order);
        for c in colors.iter() {
            let matching = &self.matchings[c as usize];
            for v in 0..order as Vertex {
                dsu.union(v, matching[v as usize]);
            }
        }
        let mut index = vec![u32::MAX; order];
        let mut blocks: Vec<Vec<Vertex>> = Vec::new();
        for v in 0..order as Vertex {
            let root = dsu.find(v);
            // Roots are minima, so the block of a root is discovered at the
            // root itself; blocks come out ordered by least vertex.
            if root == v {
                index[v as usize] = blocks.len() as u32;
                blocks.push(vec![v]);
            } else {
                let b = index[root as usize];
                index[v as usize] = b;
                blocks[b as usize].push(v);
            }
        }
        ResiduePartition { colors, blocks, index }
    }

    /// Number of components of the subgraph spanned by `colors`, without
    /// materializing the blocks.
    pub fn residue_count(&self, colors: ColorSet) -> usize {
        let order = self.order();
        let mut dsu = Dsu::new(order);
        for c in colors.iter() {
            let matching = &self.matchings[c as usize];
            for v in 0..order as Vertex {
                dsu.union(v, matching[v as usize]);
            }
        }
        dsu.component_count()
    }

    /// Number of `{i,j}`-bicolored cycles.
    pub fn pair_count(&self, i: Color, j: Color) -> usize {
        self.residue_count(ColorSet::from_colors(&[i, j]))
    }

    pub fn is_connected(&self) -> bool {
        self.residue_count(self.all_colors()) == 1
    }

    /// Extracts one residue as a standalone graph on colors `0..|C|-1`
    /// (original color and vertex labels are recorded in the provenance).
    /// Requires at least two colors.
    pub fn extract_residue(&self, colors: ColorSet, block: usize) -> Result<ColoredGraph> {
        if colors.len() < 2 {
            return Err(GemError::Invalid(format!(
                "residue extraction needs at least 2 colors, got {colors}"
            )));
        }
        if !colors.is_subset_of(self.all_colors()) {
            return Err(GemError::ColorOutOfRange {
                color: colors.iter().last().unwrap_or(0),
                colors: self.num_colors(),
            });
        }
        let partition = self.residues(colors);
        let Some(vertices) = partition.blocks().get(block) else {
            return Err(GemError::Invalid(format!(
                "residue block {block} out of range: {} blocks over {colors}",
                partition.count()
            )));
        };
        let mut new_id = vec![u32::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let original_colors = colors.to_vec();
        let matchings = original_colors
            .iter()
            .map(|&c| vertices.iter().map(|&v| new_id[self.partner(c, v) as usize]).collect())
            .collect();
        let mut g = ColoredGraph {
            dim: (colors.len() - 1) as u8,
            matchings,
            meta: Metadata::default(),
            provenance: None,
        };
        g.provenance = Some(Provenance {
            original_colors: Some(original_colors),
            original_vertices: Some(vertices.clone()),
            color_permutation: None,
        });
        Ok(g)
    }

    // -- bipartiteness -----------------------------------------------------

    /// 2-colors the vertices if possible; otherwise returns an odd closed
    /// walk.  Works per connected component; the least vertex of each
    /// component lands in class 0.
    pub fn bipartiteness(&self) -> Bipartiteness {
        let order = self.order();
        let mut class = vec![u8::MAX; order];
        let mut parent = vec![Vertex::MAX; order];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..order as Vertex {
            if class[start as usize] != u8::MAX {
                continue;
            }
            class[start as usize] = 0;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for c in self.colors() {
                    let w = self.partner(c, v);
                    if class[w as usize] == u8::MAX {
                        class[w as usize] = 1 - class[v as usize];
                        parent[w as usize] = v;
                        queue.push_back(w);
                    } else if class[w as usize] == class[v as usize] {
                        // Odd closed walk: v up to the BFS root, back down to
                        // w, then the conflicting edge w-v.  The two tree
                        // paths have depths of equal parity, so the total
                        // edge count is odd.
                        let ancestors = |mut x: Vertex| {
                            let mut path = vec![x];
                            while parent[x as usize] != Vertex::MAX {
                                x = parent[x as usize];
                                path.push(x);
                            }
                            path
                        };
                        let mut walk = ancestors(v); // v … root
                        let mut down = ancestors(w); // w … root
                        down.reverse(); // root … w
                        walk.extend(down.into_iter().skip(1));
                        walk.push(v);
                        return Bipartiteness::OddWalk { walk };
                    }
                }
            }
        }
        Bipartiteness::Bipartite { classes: class }
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartiteness(), Bipartiteness::Bipartite { .. })
    }

    // -- relabelings -------------------------------------------------------

    /// Applies a color permutation: color `c` becomes `perm[c]`.
    /// The permutation is recorded in the provenance.
    pub fn with_colors_permuted(&self, perm: &[Color]) -> Result<ColoredGraph> {
        let k = self.num_colors();
        if perm.len() != k || !is_permutation(perm, k) {
            return Err(GemError::Invalid(format!("{perm:?} is not a permutation of 0..{k}")));
        }
        let mut matchings = vec![Vec::new(); k];
        for c in 0..k {
            matchings[perm[c] as usize] = self.matchings[c].clone();
        }
        let mut g = ColoredGraph {
            dim: self.dim,
            matchings,
            meta: self.meta.clone(),
            provenance: self.provenance.clone(),
        };
        g.provenance.get_or_insert_with(Provenance::default).color_permutation = Some(perm.to_vec());
        Ok(g)
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[Vertex]) -> Result<ColoredGraph> {
        let order = self.order();
        if perm.len() != order || !is_vertex_permutation(perm, order) {
            return Err(GemError::Invalid("not a vertex permutation".into()));
        }
        let mut matchings = vec![vec![0 as Vertex; order]; self.num_colors()];
        for c in 0..self.num_colors() {
            for v in 0..order {
                matchings[c][perm[v] as usize] = perm[self.matchings[c][v] as usize];
            }
        }
        Ok(ColoredGraph {
            dim: self.dim,
            matchings,
            meta: self.meta.clone(),
            provenance: self.provenance.clone(),
        })
    }

    // -- text format ---------------------------------------------------------

    /// Canonical text serialization (see module docs).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("gem v1\n");
        out.push_str(&format!("colors {}\n", self.num_colors()));
        out.push_str(&format!("order {}\n", self.order()));
        for line in self.meta.text_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        for c in 0..self.num_colors() {
            out.push_str(&format!("c{c}:"));
            for v in 0..self.order() {
                out.push_str(&format!(" {}", self.matchings[c][v]));
            }
            out.push('\n');
        }
        out
    }

    /// Canonical JSON serialization (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let raw = RawGem {
            version: "v1".into(),
            colors: self.num_colors(),
            order: self.order(),
            matchings: self.matchings.clone(),
            meta: self.meta.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("serialization cannot fail");
        s.push('\n');
        s
    }
}

fn is_permutation(perm: &[Color], k: usize) -> bool {
    let mut seen = vec![false; k];
    for &c in perm {
        if (c as usize) >= k || seen[c as usize] {
            return false;
        }
        seen[c as usize] = true;
    }
    true
}

fn is_vertex_permutation(perm: &[Vertex], order: usize) -> bool {
    let mut seen = vec![false; order];
    for &v in perm {
        if (v as usize) >= order || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    true
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses the text format without validating graph structure.
pub fn parse_text_raw(input: &str) -> Result<RawGem> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = |expect: &str| -> Result<(usize, String)> {
        lines
            .next()
            .map(|(n, l)| (n, l.to_string()))
            .ok_or_else(|| GemError::Parse { line: 0, msg: format!("unexpected end of file, expected {expect}") })
    };

    let (n, header) = next_line("header `gem v1`")?;
    let version = header
        .strip_prefix("gem ")
        .ok_or_else(|| GemError::Parse { line: n, msg: format!("expected `gem v1`, found `{header}`") })?
        .to_string();

    let (n, colors_line) = next_line("`colors <k>`")?;
    let colors: usize = colors_line
        .strip_prefix("colors ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| GemError::Parse { line: n, msg: format!("expected `colors <k>`, found `{colors_line}`") })?;

    let (n, order_line) = next_line("`order <2p>`")?;
    let order: usize = order_line
        .strip_prefix("order ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| GemError::Parse { line: n, msg: format!("expected `order <2p>`, found `{order_line}`") })?;

    let mut meta = Metadata::default();
    let mut matchings: Vec<Vec<Vertex>> = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (n, line) in &mut lines {
        if let Some(rest) = line.strip_prefix("meta ") {
            if !matchings.is_empty() {
                return Err(GemError::Parse { line: n, msg: "meta lines must precede matchings".into() });
            }
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| GemError::Parse { line: n, msg: format!("expected `meta <key>=<value>`, found `{line}`") })?;
            meta.set_from_text(key, value, n)?;
        } else {
            pending = Some((n, line.to_string()));
            break;
        }
    }
    // Matching lines: `c<i>: v0 v1 …` for i = 0..colors, in order.
    let mut feed = |n: usize, line: &str, matchings: &mut Vec<Vec<Vertex>>| -> Result<()> {
        let idx = matchings.len();
        let prefix = format!("c{idx}:");
        let rest = line
            .strip_prefix(&prefix)
            .ok_or_else(|| GemError::Parse { line: n, msg: format!("expected `{prefix} …`, found `{line}`") })?;
        let mut row = Vec::with_capacity(order);
        for tok in rest.split_whitespace() {
            let v: Vertex = tok
                .parse()
                .map_err(|_| GemError::Parse { line: n, msg: format!("bad vertex id `{tok}`") })?;
            row.push(v);
        }
        matchings.push(row);
        Ok(())
    };
    if let Some((n, line)) = pending {
        feed(n, &line, &mut matchings)?;
    }
    for (n, line) in &mut lines {
        if line.is_empty() && matchings.len() == colors {
            // A single trailing blank line (from a final LF) is tolerated.
            continue;
        }
        if matchings.len() == colors {
            return Err(GemError::Parse { line: n, msg: format!("unexpected trailing content `{line}`") });
        }
        feed(n, line, &mut matchings)?;
    }
    Ok(RawGem { version, colors, order, matchings, meta })
}

/// Parses and validates the text format.
pub fn parse_text(input: &str) -> Result<ColoredGraph> {
    parse_text_raw(input)?.into_graph()
}

/// Parses the JSON mirror without validating graph structure.
pub fn parse_json_raw(input: &str) -> Result<RawGem> {
    serde_json::from_str(input).map_err(|e| GemError::Json(e.to_string()))
}

/// Parses and validates the JSON mirror.
pub fn parse_json(input: &str) -> Result<ColoredGraph> {
    parse_json_raw(input)?.into_graph()
}

/// Parses either format, sniffing JSON by its leading `{`.
pub fn parse_auto(input: &str) -> Result<ColoredGraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::standard_sphere;

    fn order2(colors: usize) -> ColoredGraph {
        ColoredGraph::from_matchings(vec![vec![1, 0]; colors], Metadata::default()).unwrap()
    }

    #[test]
    fn order_two_graph_has_one_residue_per_color_subset() {
        let g = order2(5);
        assert_eq!(g.order(), 2);
        assert_eq!(g.half_order(), 1);
        for size in 1..=5 {
            for c in color_subsets(5, size) {
                assert_eq!(g.residue_count(c), 1, "colors {c}");
            }
        }
        assert_eq!(g.residue_count(ColorSet::EMPTY), 2);
    }

    #[test]
    fn residue_blocks_are_sorted_by_least_vertex() {
        // Two disjoint {0,1}-cycles: (0 1 2 3) and (4 5).
        let m0 = vec![1, 0, 3, 2, 5, 4];
        let m1 = vec![3, 2, 1, 0, 5, 4];
        let m2 = vec![1, 0, 3, 2, 5, 4];
        let g = ColoredGraph::from_matchings(vec![m0, m1, m2], Metadata::default()).unwrap();
        let part = g.residues(ColorSet::from_colors(&[0, 1]));
        assert_eq!(part.count(), 2);
        assert_eq!(part.blocks()[0], vec![0, 1, 2, 3]);
        assert_eq!(part.blocks()[1], vec![4, 5]);
        assert_eq!(part.block_of(2), 0);
        assert_eq!(part.block_of(5), 1);
    }

    #[test]
    fn validation_reports_all_defects() {
        let raw = RawGem {
            version: "v1".into(),
            colors: 3,
            order: 4,
            matchings: vec![
                vec![1, 0, 3, 2],
                vec![0, 2, 1, 3], // self-pairings at 0 and 3
                vec![1, 0, 3],    // wrong length
            ],
            meta: Metadata::default(),
        };
        let report = raw.validate();
        assert!(!report.is_clean());
        assert!(report.violations.contains(&Violation::SelfPairing { color: 1, vertex: 0 }));
        assert!(report.violations.contains(&Violation::SelfPairing { color: 1, vertex: 3 }));
        assert!(report
            .violations
            .contains(&Violation::MatchingLength { color: 2, expected: 4, found: 3 }));
    }

    #[test]
    fn non_involution_is_reported() {
        let raw = RawGem {
            version: "v1".into(),
            colors: 3,
            order: 4,
            matchings: vec![vec![1, 0, 3, 2], vec![1, 0, 3, 2], vec![1, 2, 0, 3]],
            meta: Metadata::default(),
        };
        let report = raw.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::NotInvolution { color: 2, .. })));
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let mut g = standard_sphere(4);
        g.meta = Metadata {
            name: Some("S4".into()),
            manifold: Some("S^4".into()),
            m: Some(0),
            mprime: Some(0),
            bipartite: Some(true),
            expected_rho: Some(GenusValue::integer(0)),
            expected_dg: Some(0),
            expected_k: Some(0),
        };
        let text = g.to_text();
        let back = parse_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn json_round_trip_preserves_value() {
        let mut g = standard_sphere(4);
        g.meta.name = Some("S4".into());
        g.meta.expected_rho = Some(GenusValue::from_twice(5));
        let json = g.to_json();
        let back = parse_json(&json).unwrap();
        assert_eq!(back, g);
        assert_eq!(parse_auto(&json).unwrap(), g);
        assert_eq!(parse_auto(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_text("gem v1\ncolors 5\norder 2\nc0: 1 0\nc2: 1 0\n").unwrap_err();
        match err {
            GemError::Parse { line, .. } => assert_eq!(line, 5),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_text("gem v2\ncolors 5\norder 2\n").unwrap_err();
        assert!(matches!(err, GemError::Invalid(_) | GemError::Parse { .. }));
    }

    #[test]
    fn unknown_meta_keys_are_rejected() {
        let err = parse_text("gem v1\ncolors 3\norder 2\nmeta nonsense=1\nc0: 1 0\nc1: 1 0\nc2: 1 0\n")
            .unwrap_err();
        assert!(matches!(err, GemError::Parse { line: 4, .. }));
    }

    #[test]
    fn bipartite_witness_is_an_odd_closed_walk() {
        // K4 with a proper 3-edge-coloring: color 0 pairs (0,1),(2,3);
        // color 1 pairs (0,2),(1,3); color 2 pairs (0,3),(1,2).  Triangles
        // make it non-bipartite.
        let g = ColoredGraph::from_matchings(
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
            Metadata::default(),
        )
        .unwrap();
        assert!(!g.is_bipartite());
        match g.bipartiteness() {
            Bipartiteness::Bipartite { .. } => panic!("expected a non-bipartite graph"),
            Bipartiteness::OddWalk { walk } => check_odd_walk(&g, &walk),
        }
    }

    fn check_odd_walk(g: &ColoredGraph, walk: &[Vertex]) {
        assert!(walk.len() >= 2);
        assert_eq!(walk.first(), walk.last(), "walk must be closed");
        let edges = walk.len() - 1;
        assert_eq!(edges % 2, 1, "walk must have odd length, got {edges}");
        for pair in walk.windows(2) {
            assert!(
                g.colors().any(|c| g.partner(c, pair[0]) == pair[1]),
                "walk step {}-{} is not an edge",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn classes_put_least_vertex_in_class_zero() {
        let g = order2(5);
        match g.bipartiteness() {
            Bipartiteness::Bipartite { classes } => assert_eq!(classes, vec![0, 1]),
            _ => panic!("order-2 graph is bipartite"),
        }
    }

    #[test]
    fn extract_residue_relabels_colors_and_vertices() {
        // Colors {1,3} of the order-2 graph: a single 2-vertex residue,
        // becoming a 2-colored graph after extraction — too few colors; use
        // three of five.
        let g = order2(5);
        let colors = ColorSet::from_colors(&[1, 3, 4]);
        let r = g.extract_residue(colors, 0).unwrap();
        assert_eq!(r.num_colors(), 3);
        assert_eq!(r.order(), 2);
        let prov = r.provenance.as_ref().unwrap();
        assert_eq!(prov.original_colors.as_deref(), Some(&[1, 3, 4][..]));
        assert_eq!(prov.original_vertices.as_deref(), Some(&[0, 1][..]));
        assert!(g.extract_residue(ColorSet::from_colors(&[2]), 0).is_err());
        assert!(g.extract_residue(colors, 5).is_err());
    }

    #[test]
    fn color_permutation_round_trips() {
        let g = order2(5);
        let perm = [4, 3, 2, 1, 0];
        let h = g.with_colors_permuted(&perm).unwrap();
        assert_eq!(h.provenance.as_ref().unwrap().color_permutation.as_deref(), Some(&perm[..]));
        let inverse = [4, 3, 2, 1, 0];
        let back = h.with_colors_permuted(&inverse).unwrap();
        assert_eq!(back.matchings(), g.matchings());
        assert!(g.with_colors_permuted(&[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn vertex_relabeling_preserves_structure() {
        let m0 = vec![1, 0, 3, 2];
        let m1 = vec![2, 3, 0, 1];
        let m2 = vec![3, 2, 1, 0];
        let g = ColoredGraph::from_matchings(vec![m0, m1, m2], Metadata::default()).unwrap();
        let h = g.relabel_vertices(&[2, 3, 0, 1]).unwrap();
        assert_eq!(h.partner(0, 2), 3); // image of edge 0-1
        assert_eq!(h.partner(1, 2), 0); // image of edge 0-2
        assert!(g.relabel_vertices(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn color_subsets_are_ascending() {
        let all = color_subsets(5, 3);
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], ColorSet::from_colors(&[0, 1, 2]));
        assert_eq!(all[9], ColorSet::from_colors(&[2, 3, 4]));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn complement_is_involutive() {
        let c = ColorSet::from_colors(&[0, 2]);
        assert_eq!(c.complement(5).complement(5), c);
        assert_eq!(c.complement(5), ColorSet::from_colors(&[1, 3, 4]));
    }
}
