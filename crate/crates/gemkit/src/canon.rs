//! Canonical forms and isomorphism tests for colored graphs.
//!
//! Two colored graphs are *color-isomorphic* when some vertex bijection
//! carries the `c`-colored matching of one onto the `c`-colored matching of
//! the other, for every color `c` separately.  [`canonical_key`] computes a
//! complete invariant for this relation by individualization-refinement:
//!
//! 1. vertices are partitioned by a cheap seed invariant (which colors meet
//!    a given vertex in parallel edges);
//! 2. the partition is refined by the classes of the `c`-colored partners
//!    until stable;
//! 3. if cells remain, each vertex of the first non-singleton cell is
//!    individualized in turn and the search recurses; the key is the
//!    lexicographic minimum of the matching tables over all discrete
//!    labelings reached.
//!
//! A second mode additionally minimizes over all color permutations, so that
//! graphs differing only by a recoloring compare equal.

use crate::graph::{Color, ColoredGraph, Vertex};

/// Canonical byte string under vertex relabelings (colors fixed).
/// Equal keys ⟺ color-isomorphic.  Requires order ≤ 255.
pub fn canonical_key(g: &ColoredGraph) -> Vec<u8> {
    search(g).0
}

/// A vertex relabeling (old id → new id) realizing the canonical key.
pub fn canonical_relabeling(g: &ColoredGraph) -> Vec<Vertex> {
    search(g).1
}

/// The graph relabeled into its canonical form.
pub fn canonical_graph(g: &ColoredGraph) -> ColoredGraph {
    let perm = canonical_relabeling(g);
    g.relabel_vertices(&perm).expect("canonical relabeling is a permutation")
}

/// Number of color-preserving automorphisms, counted as the discrete
/// labelings of the search tree that realize the canonical key.
pub fn automorphism_count(g: &ColoredGraph) -> usize {
    search(g).2
}

/// Whether the only color-preserving automorphism is the identity.
pub fn is_rigid(g: &ColoredGraph) -> bool {
    automorphism_count(g) == 1
}

/// Strict color-preserving isomorphism.
pub fn isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    a.num_colors() == b.num_colors()
        && a.order() == b.order()
        && canonical_key(a) == canonical_key(b)
}

/// Canonical byte string under vertex relabelings *and* color permutations.
pub fn canonical_key_color_free(g: &ColoredGraph) -> Vec<u8> {
    let k = g.num_colors();
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<Color> = (0..k as Color).collect();
    permute_colors(&mut perm, 0, g, &mut best);
    best.expect("at least one permutation")
}

fn permute_colors(perm: &mut Vec<Color>, at: usize, g: &ColoredGraph, best: &mut Option<Vec<u8>>) {
    if at == perm.len() {
        let recolored = g.with_colors_permuted(perm).expect("valid permutation");
        let key = canonical_key(&recolored);
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute_colors(perm, at + 1, g, best);
        perm.swap(at, i);
    }
}

// ---------------------------------------------------------------------------
// Individualization-refinement
// ---------------------------------------------------------------------------

fn search(g: &ColoredGraph) -> (Vec<u8>, Vec<Vertex>, usize) {
    assert!(g.order() <= 255, "canonical forms support order ≤ 255");
    let mut state = Search { g, best: None, best_label: Vec::new(), hits: 0 };
    let mut classes = seed_classes(g);
    state.explore(&mut classes);
    (state.best.expect("search visits at least one leaf"), state.best_label, state.hits)
}

struct Search<'a> {
    g: &'a ColoredGraph,
    best: Option<Vec<u8>>,
    best_label: Vec<Vertex>,
    hits: usize,
}

impl Search<'_> {
    fn explore(&mut self, classes: &mut Vec<u32>) {
        refine(self.g, classes);
        let order = self.g.order();
        let class_count = classes.iter().map(|&c| c + 1).max().unwrap_or(0) as usize;
        if class_count == order {
            // Discrete: classes themselves are the new labels.
            let key = encode(self.g, classes);
            match &self.best {
                Some(best) if key > *best => {}
                Some(best) if key == *best => self.hits += 1,
                _ => {
                    self.best = Some(key);
                    self.best_label = classes.clone();
                    self.hits = 1;
                }
            }
            return;
        }
        // First non-singleton class, by class id.
        let mut sizes = vec![0u32; class_count];
        for &c in classes.iter() {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s >= 2).expect("non-discrete partition") as u32;
        for v in 0..order as Vertex {
            if classes[v as usize] != target {
                continue;
            }
            // Split v off its class; doubling keeps the relative order of all
            // other classes and refine() re-ranks afterwards.
            let mut child: Vec<u32> = classes.iter().map(|&c| 2 * c).collect();
            child[v as usize] += 1;
            self.explore(&mut child);
        }
    }
}

/// Seed invariant: for each vertex, the set of color pairs that reach the
/// same partner (parallel edges), encoded as a bitmask and ranked.
fn seed_classes(g: &ColoredGraph) -> Vec<u32> {
    let k = g.num_colors();
    let masks: Vec<u32> = (0..g.order() as Vertex)
        .map(|v| {
            let mut mask = 0u32;
            let mut bit = 0;
            for c in 0..k as Color {
                for d in c + 1..k as Color {
                    if g.partner(c, v) == g.partner(d, v) {
                        mask |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            mask
        })
        .collect();
    rank_by(&masks)
}

/// Refines the partition by partner classes until stable.  Never merges:
/// the signature starts with the current class.
fn refine(g: &ColoredGraph, classes: &mut Vec<u32>) {
    let order = g.order();
    let k = g.num_colors();
    loop {
        let before = classes.iter().map(|&c| c + 1).max().unwrap_or(0);
        let sigs: Vec<Vec<u32>> = (0..order as Vertex)
            .map(|v| {
                let mut s = Vec::with_capacity(k + 1);
                s.push(classes[v as usize]);
                for c in 0..k as Color {
                    s.push(classes[g.partner(c, v) as usize]);
                }
                s
            })
            .collect();
        *classes = rank_by(&sigs);
        let after = classes.iter().map(|&c| c + 1).max().unwrap_or(0);
        if after == before {
            return;
        }
    }
}

/// Ranks values by sorted order: equal values share a rank, ranks are dense
/// starting at 0.
fn rank_by<T: Ord + Clone>(values: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search(v).expect("value present") as u32)
        .collect()
}

/// Encodes the matching tables under the labeling `label` (old → new).
fn encode(g: &ColoredGraph, label: &[u32]) -> Vec<u8> {
    let order = g.order();
    let mut inverse = vec![0 as Vertex; order];
    for (old, &new) in label.iter().enumerate() {
        inverse[new as usize] = old as Vertex;
    }
    let mut out = Vec::with_capacity(g.num_colors() * order);
    for c in 0..g.num_colors() as Color {
        for new_v in 0..order {
            let old_v = inverse[new_v];
            out.push(label[g.partner(c, old_v) as usize] as u8);
        }
    }
    out
}
