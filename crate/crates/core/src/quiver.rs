//! Vertices, generator arrows, blocks and quiver export.
//!
//! Vertices `v >= 1` are joined by a down/up pair of arrows for each
//! minimal down-admissible stretch.  Blocks are the connected components
//! of this quiver; they are explored by breadth-first search through an
//! enlarged window so that truncation does not cut off detours.

use crate::admissible::{
    minimal_down_stretches, minimal_up_stretches, reflect_down, reflect_up, AdmissibleSet,
    Stretch,
};
use crate::arith::Prime;
use crate::padic::PadicDigits;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Direction of a generator arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    /// Downward reflection: the target is smaller.
    Down,
    /// Upward reflection: the target is larger.
    Up,
}

/// A generator arrow of the quiver: a minimal stretch applied at a
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub stretch: Stretch,
    pub source: u64,
    pub target: u64,
}

impl Generator {
    /// The down arrow at `v` along a minimal down-admissible stretch.
    pub fn down(v: u64, stretch: Stretch, p: Prime) -> Self {
        let set = AdmissibleSet::from_stretch(stretch);
        Generator {
            kind: GeneratorKind::Down,
            stretch,
            source: v,
            target: reflect_down(v, &set, p),
        }
    }

    /// The up arrow at `v` along a minimal up-admissible stretch.
    pub fn up(v: u64, stretch: Stretch, p: Prime) -> Self {
        let set = AdmissibleSet::from_stretch(stretch);
        Generator {
            kind: GeneratorKind::Up,
            stretch,
            source: v,
            target: reflect_up(v, &set, p),
        }
    }
}

/// All generator arrows out of `v`: one down arrow per minimal
/// down-admissible stretch and one up arrow per minimal up-admissible
/// stretch.
pub fn generators_at(v: u64, p: Prime) -> Vec<Generator> {
    let mut out: Vec<Generator> = minimal_down_stretches(v, p)
        .into_iter()
        .map(|s| Generator::down(v, s, p))
        .collect();
    out.extend(
        minimal_up_stretches(v, p)
            .into_iter()
            .map(|s| Generator::up(v, s, p)),
    );
    out
}

/// The neighbouring vertices of `v`, ascending and deduplicated.
pub fn neighbors(v: u64, p: Prime) -> Vec<u64> {
    let mut out: BTreeSet<u64> = generators_at(v, p).into_iter().map(|g| g.target).collect();
    out.remove(&v);
    out.into_iter().collect()
}

/// A block: the connected component of an eve, truncated to a window.
#[derive(Debug, Clone)]
pub struct Block {
    pub p: Prime,
    /// The eve generating the block.
    pub eve: u64,
    /// Reporting bound: members above it are dropped.
    pub bound: u64,
    /// Block members within the bound, ascending.
    pub vertices: Vec<u64>,
}

impl Block {
    /// Explores the component of `eve` by BFS.  Vertices up to `2 *
    /// bound` are traversed so that paths dipping above the bound are
    /// not lost; only vertices within `bound` are reported.
    pub fn explore(eve: u64, bound: u64, p: Prime) -> Self {
        assert!(
            PadicDigits::expand(eve, p).is_eve(),
            "{eve} is not an eve for p={}",
            p.get()
        );
        let explore_bound = bound.saturating_mul(2);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(eve);
        queue.push_back(eve);
        while let Some(v) = queue.pop_front() {
            for w in neighbors(v, p) {
                if w <= explore_bound && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Block {
            p,
            eve,
            bound,
            vertices: seen.into_iter().filter(|&v| v <= bound).collect(),
        }
    }

    /// All generators with both endpoints inside the given bound,
    /// deduplicated so that each down/up pair is listed once (as the
    /// down arrow, from the larger vertex).
    pub fn down_generators_within(&self, bound: u64) -> Vec<Generator> {
        let mut out = Vec::new();
        for &v in &self.vertices {
            if v > bound {
                continue;
            }
            for g in generators_at(v, self.p) {
                if g.kind == GeneratorKind::Down && g.target <= bound {
                    out.push(g);
                }
            }
        }
        out
    }
}

/// The equivalence class of `v` relative to a digit-index set `S`:
/// vertices reachable by single-index reflections `w[{k}]` / `w({k})`
/// with `k` outside `S`, where every visited vertex keeps `S` inside its
/// digit set.  Exploration passes through vertices up to `2 * bound`;
/// only members within `bound` are reported.
pub fn equiv_class(v: u64, s: &AdmissibleSet, bound: u64, p: Prime) -> Vec<u64> {
    let in_digit_set = |w: u64| -> bool {
        let d = PadicDigits::expand(w, p);
        let ds: BTreeSet<u32> = d.digit_set().into_iter().collect();
        s.iter().all(|i| ds.contains(&i))
    };
    assert!(in_digit_set(v), "{s} is not inside the digit set of {v}");
    let explore_bound = bound.saturating_mul(2);
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(v);
    queue.push_back(v);
    while let Some(w) = queue.pop_front() {
        let d = PadicDigits::expand(w, p);
        let j = d.leading_index();
        for k in 0..=j + 1 {
            if s.contains(k) {
                continue;
            }
            let single: AdmissibleSet = [k].into_iter().collect();
            let mut targets = Vec::new();
            if crate::admissible::is_down_admissible(&single, w, p) {
                targets.push(reflect_down(w, &single, p));
            }
            if crate::admissible::is_up_admissible(&single, w, p) {
                targets.push(reflect_up(w, &single, p));
            }
            for u in targets {
                if u <= explore_bound && in_digit_set(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
    }
    seen.into_iter().filter(|&w| w <= bound).collect()
}

/// One undirected edge of the quiver drawing: the down/up pair between
/// `upper` and `lower` along `stretch`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuiverEdge {
    pub upper: u64,
    pub lower: u64,
    pub stretch: Stretch,
}

impl QuiverEdge {
    /// The drawn quivers label arrows by the lowest index of the
    /// stretch (the hull shorthand), e.g. `{0}` for the stretch `{1,0}`.
    pub fn index_label(&self) -> String {
        format!("{{{}}}", self.stretch.lo())
    }
}

/// The edges induced on an explicit vertex subset: each down arrow whose
/// endpoints both belong to the subset, listed once, ascending.
pub fn subquiver_edges(vertices: &[u64], p: Prime) -> Vec<QuiverEdge> {
    let set: BTreeSet<u64> = vertices.iter().copied().collect();
    let mut edges = Vec::new();
    for &v in &set {
        for s in minimal_down_stretches(v, p) {
            let w = reflect_down(v, &AdmissibleSet::from_stretch(s), p);
            if set.contains(&w) {
                edges.push(QuiverEdge {
                    upper: v,
                    lower: w,
                    stretch: s,
                });
            }
        }
    }
    edges.sort();
    edges
}

fn vertex_label(v: u64, p: Prime) -> (u64, u32, String) {
    let d = PadicDigits::expand(v, p);
    (v - 1, d.generation(), d.to_string())
}

/// Renders a block as Graphviz DOT.  Nodes are named `w<weight>` and
/// labelled `weight|generation|digits`; output is deterministic.
pub fn export_dot(block: &Block) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph block_{}_p{} {{\n",
        block.eve,
        block.p.get()
    ));
    for &v in &block.vertices {
        let (w, gen, digits) = vertex_label(v, block.p);
        out.push_str(&format!("  w{w} [label=\"{w}|{gen}|{digits}\"];\n"));
    }
    for e in subquiver_edges(&block.vertices, block.p) {
        out.push_str(&format!(
            "  w{} -- w{} [label=\"{}\"];\n",
            e.upper - 1,
            e.lower - 1,
            e.index_label()
        ));
    }
    out.push_str("}\n");
    out
}

/// Renders a block as JSON with sorted vertices and edges.
pub fn export_json(block: &Block) -> serde_json::Value {
    let vertices: Vec<_> = block
        .vertices
        .iter()
        .map(|&v| {
            let (w, gen, digits) = vertex_label(v, block.p);
            json!({"v": v, "weight": w, "generation": gen, "digits": digits})
        })
        .collect();
    let edges: Vec<_> = subquiver_edges(&block.vertices, block.p)
        .into_iter()
        .map(|e| {
            json!({
                "from": e.upper,
                "to": e.lower,
                "stretch": AdmissibleSet::from_stretch(e.stretch).to_string(),
                "label": e.index_label(),
            })
        })
        .collect();
    let mut map = serde_json::Map::new();
    map.insert("p".into(), json!(block.p.get()));
    map.insert("eve".into(), json!(block.eve));
    map.insert("bound".into(), json!(block.bound));
    map.insert("vertices".into(), json!(vertices));
    map.insert("edges".into(), json!(edges));
    serde_json::Value::Object(map)
}

/// Groups all vertices within `bound` into blocks keyed by their eve.
/// Every vertex lies in the block of exactly one eve.
pub fn block_fibers(bound: u64, p: Prime) -> BTreeMap<u64, Vec<u64>> {
    let mut fiber: BTreeMap<u64, u64> = BTreeMap::new();
    for eve in crate::padic::eves_below(bound, p) {
        let block = Block::explore(eve, bound, p);
        for v in block.vertices {
            let slot = fiber.entry(v).or_insert(eve);
            assert_eq!(*slot, eve, "vertex {v} reached from two eves");
        }
    }
    let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (v, e) in fiber {
        out.entry(e).or_default().push(v);
    }
    out
}
