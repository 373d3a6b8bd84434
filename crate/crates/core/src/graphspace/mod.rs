//! Trivalent graphs with vertex orientations and `Z[pi]` edge labels, the graded
//! groups they generate modulo AS, IHX and the label relations R1-R3, and the
//! translation between edge labels and representations of the fundamental group.
//!
//! Half-edge `3v + s` is slot `s` of vertex `v`; the slot order `0, 1, 2` is the
//! cyclic orientation of `v`. An edge `[a, b]` with label `r` is oriented from
//! `a` to `b`.

mod canon;
mod pi1;
mod relations;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::{Group, GroupElement};
use crate::scalar::Coeff;

pub use canon::canonical_form;
pub use pi1::{edge_to_pi1, out_equivalent, pi1_to_edge, Pi1Decoration};
pub use relations::{
    enumerate_graphs, graded_group, relation_generators, GradedGroupReport, GraphLimits, Relation, RelationKind,
};

pub(crate) use canon::{canonicalize_mono, CanonMono};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Edge<C> {
    pub halves: [usize; 2],
    pub label: GroupRingElement<C>,
}

impl<C: Coeff> PartialOrd for Edge<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Coeff> Ord for Edge<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.halves.cmp(&other.halves).then_with(|| self.label.cmp(&other.label))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedGraph<C> {
    group: Group,
    vertices: usize,
    edges: Vec<Edge<C>>,
}

impl<C: Coeff> PartialOrd for DecoratedGraph<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Coeff> Ord for DecoratedGraph<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices).then_with(|| self.edges.cmp(&other.edges))
    }
}

impl<C: Coeff> DecoratedGraph<C> {
    pub fn new(group: &Group, vertices: usize, edges: Vec<Edge<C>>) -> Result<Self> {
        let mut seen = vec![false; 3 * vertices];
        for e in &edges {
            if e.label.group() != group {
                return Err(Error::GroupMismatch(format!("edge label over {} in a graph over {group}", e.label.group())));
            }
            if e.label.is_zero() {
                return Err(Error::InvalidInput("edge labels must be nonzero".into()));
            }
            for &h in &e.halves {
                if h >= seen.len() || seen[h] {
                    return Err(Error::InvalidInput(format!("half-edge {h} is out of range or used twice")));
                }
                seen[h] = true;
            }
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("half-edge {h} is not on any edge")));
        }
        Ok(DecoratedGraph { group: group.clone(), vertices, edges })
    }

    pub fn empty(group: &Group) -> Self {
        DecoratedGraph { group: group.clone(), vertices: 0, edges: Vec::new() }
    }

    /// Builds a graph whose labels are the given group elements.
    pub fn from_pairs(group: &Group, vertices: usize, edges: &[(usize, usize, GroupElement)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|(a, b, g)| {
                group.check(g)?;
                Ok(Edge { halves: [*a, *b], label: GroupRingElement::element(group, g.clone()) })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, vertices, edges)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Number of trivalent vertices.
    pub fn degree(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge<C>] {
        &self.edges
    }

    /// Same graph with the cyclic order at `v` reversed (slots 1 and 2 exchanged).
    pub fn flip_vertex(&self, v: usize) -> Self {
        let swap = |h: usize| match (h / 3 == v, h % 3) {
            (true, 1) => h + 1,
            (true, 2) => h - 1,
            _ => h,
        };
        self.map_halves(swap)
    }

    /// Same graph with the slots at `v` rotated by one step.
    pub fn rotate_vertex(&self, v: usize) -> Self {
        self.map_halves(|h| if h / 3 == v { 3 * v + (h % 3 + 1) % 3 } else { h })
    }

    /// Same graph with vertices renamed by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel_vertices(&self, perm: &[usize]) -> Self {
        self.map_halves(|h| 3 * perm[h / 3] + h % 3)
    }

    /// Reverses edge `e` and conjugates its label.
    pub fn reverse_edge(&self, e: usize) -> Self {
        let mut out = self.clone();
        let edge = &mut out.edges[e];
        edge.halves.swap(0, 1);
        edge.label = edge.label.involute();
        out
    }

    /// Changes the lift of `v` by `g`: labels of edges into `v` are multiplied by
    /// `g` on the right, labels of edges out of `v` by `g^-1` on the left.
    pub fn transport(&self, v: usize, g: &GroupElement) -> Self {
        let gi = self.group.inv(g);
        let mut out = self.clone();
        for e in &mut out.edges {
            if e.halves[0] / 3 == v {
                e.label = e.label.left_translate(&gi);
            }
            if e.halves[1] / 3 == v {
                e.label = e.label.right_translate(g);
            }
        }
        out
    }

    fn map_halves(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.halves = [f(e.halves[0]), f(e.halves[1])];
        }
        out
    }

    /// Expands every label into group elements (R2), giving a sum of graphs whose
    /// labels are single group elements.
    pub fn expand_labels(&self) -> Vec<(C, DecoratedGraph<C>)> {
        let mut out = vec![(C::one(), self.clone())];
        for (k, e) in self.edges.iter().enumerate() {
            let mut next = Vec::new();
            for (c, g) in &out {
                for (x, d) in e.label.terms() {
                    let mut h = g.clone();
                    h.edges[k].label = GroupRingElement::element(&self.group, x.clone());
                    next.push((c.clone() * d.clone(), h));
                }
            }
            out = next;
        }
        out
    }

    /// Monomial form: partner of each half-edge, the label read from each
    /// half-edge toward its partner, and the sign carried by `-g` labels.
    pub(crate) fn to_mono(&self) -> Result<(Mono, bool)> {
        let n = self.vertices;
        let mut partner = vec![0; 3 * n];
        let mut lab = vec![self.group.identity(); 3 * n];
        let mut positive = true;
        for e in &self.edges {
            let (p, g) = e.label.as_signed_element().ok_or_else(|| {
                Error::InvalidInput(format!("edge label {} is not of the form ±g; expand it first", e.label))
            })?;
            positive ^= !p;
            let [a, b] = e.halves;
            partner[a] = b;
            partner[b] = a;
            lab[b] = self.group.inv(&g);
            lab[a] = g;
        }
        Ok((Mono { partner, lab }, positive))
    }

    pub(crate) fn from_mono(group: &Group, m: &Mono) -> Self {
        let edges = (0..m.partner.len())
            .filter(|&h| h <= m.partner[h])
            .map(|h| Edge {
                halves: [h, m.partner[h]],
                label: GroupRingElement::element(group, m.lab[h].clone()),
            })
            .collect();
        DecoratedGraph { group: group.clone(), vertices: m.partner.len() / 3, edges }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_json(),
            "vertices": (0..self.vertices).map(|v| [3 * v, 3 * v + 1, 3 * v + 2]).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "halves": e.halves,
                "label": e.label.terms_json(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses a graph. Half-edge ids are arbitrary; each vertex lists its three in
    /// cyclic order. Labels may be full ring elements, bare integers, or
    /// `{"g": element}` for a single group element.
    pub fn from_json(v: &Value, group: Option<&Group>) -> Result<Self> {
        let group = match (v.get("group"), group) {
            (Some(g), _) => Group::from_json(g)?,
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(Error::parse("graph", "missing group")),
        };
        let verts = v.get("vertices").and_then(Value::as_array).ok_or_else(|| Error::parse("vertices", "expected an array"))?;
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        for (i, vert) in verts.iter().enumerate() {
            let halves = vert
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::parse(format!("vertices[{i}]"), "expected three half-edge ids"))?;
            for (s, h) in halves.iter().enumerate() {
                let h = h.as_u64().ok_or_else(|| Error::parse(format!("vertices[{i}][{s}]"), "expected an id"))?;
                if index.insert(h, 3 * i + s).is_some() {
                    return Err(Error::parse(format!("vertices[{i}][{s}]"), format!("half-edge {h} listed twice")));
                }
            }
        }
        let edges_v = v.get("edges").and_then(Value::as_array).ok_or_else(|| Error::parse("edges", "expected an array"))?;
        let mut edges = Vec::with_capacity(edges_v.len());
        for (k, e) in edges_v.iter().enumerate() {
            let loc = format!("edges[{k}]");
            let halves = e
                .get("halves")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::parse(&loc, "expected halves [a, b]"))?;
            let mut hs = [0usize; 2];
            for (s, h) in halves.iter().enumerate() {
                let id = h.as_u64().ok_or_else(|| Error::parse(&loc, "expected half-edge ids"))?;
                hs[s] = *index.get(&id).ok_or_else(|| Error::parse(&loc, format!("unknown half-edge {id}")))?;
            }
            let label = match e.get("label") {
                None => GroupRingElement::one(&group),
                Some(l) if l.get("g").is_some() && l.get("terms").is_none() && l.get("c").is_none() => {
                    GroupRingElement::element(&group, group.parse_element(&l["g"])?)
                }
                Some(Value::Array(terms)) => {
                    GroupRingElement::from_json(&json!({"terms": terms}), Some(&group))?
                }
                Some(l) => GroupRingElement::from_json(l, Some(&group))?,
            };
            edges.push(Edge { halves: hs, label });
        }
        Self::new(&group, verts.len(), edges)
    }
}

impl<C: Coeff> fmt::Display for DecoratedGraph<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.edges.iter().map(|e| format!("{}-{}:{}", e.halves[0], e.halves[1], e.label)).collect();
        write!(f, "G{}[{}]", self.vertices, parts.join(" "))
    }
}

/// Integer combination of canonical graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalGraphSum<C> {
    group: Group,
    terms: BTreeMap<DecoratedGraph<C>, C>,
}

impl<C: Coeff> FormalGraphSum<C> {
    pub fn zero(group: &Group) -> Self {
        FormalGraphSum { group: group.clone(), terms: BTreeMap::new() }
    }

    /// Adds `c` times `g`, expanding labels and canonicalizing. Graphs with an
    /// orientation-reversing symmetry enter with the sign of their first minimal
    /// traversal; they have order two in the quotient.
    pub fn add_graph(&mut self, c: &C, g: &DecoratedGraph<C>) -> Result<()> {
        for (d, h) in g.expand_labels() {
            let (mono, positive) = h.to_mono()?;
            let canon = canonicalize_mono(&mono);
            let mut coeff = c.clone() * d;
            if positive != canon.positive {
                coeff = -coeff;
            }
            self.add_canonical(DecoratedGraph::from_mono(&self.group, &canon.mono), coeff);
        }
        Ok(())
    }

    pub(crate) fn add_canonical(&mut self, g: DecoratedGraph<C>, c: C) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn from_graphs<'a>(group: &Group, items: impl IntoIterator<Item = (C, &'a DecoratedGraph<C>)>) -> Result<Self>
    where
        C: 'a,
    {
        let mut s = Self::zero(group);
        for (c, g) in items {
            s.add_graph(&c, g)?;
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedGraph<C>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Relabels every graph through a group homomorphism given on elements.
    pub fn map_labels(&self, target: &Group, f: impl Fn(&GroupElement) -> GroupElement) -> Result<Self> {
        let mut out = Self::zero(target);
        for (g, c) in &self.terms {
            let edges = g
                .edges
                .iter()
                .map(|e| {
                    let mut label = GroupRingElement::zero(target);
                    for (x, d) in e.label.terms() {
                        label.add_term(f(x), d.clone());
                    }
                    Edge { halves: e.halves, label }
                })
                .collect::<Vec<_>>();
            out.add_graph(c, &DecoratedGraph::new(target, g.vertices, edges)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(g, c)| json!({"graph": g.to_json(), "c": crate::scalar::coeff_to_json(c)}))
                .collect(),
        )
    }
}

/// Half-edge structure with group-element labels read from each half-edge.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct Mono {
    pub partner: Vec<usize>,
    pub lab: Vec<GroupElement>,
}

impl Mono {
    pub fn vertex_count(&self) -> usize {
        self.partner.len() / 3
    }

    pub fn flip(&self, v: usize) -> Mono {
        let mut perm: Vec<usize> = (0..self.partner.len()).collect();
        perm.swap(3 * v + 1, 3 * v + 2);
        self.permute_halves(&perm)
    }

    /// Moves half-edge `h` to position `perm[h]`.
    pub fn permute_halves(&self, perm: &[usize]) -> Mono {
        let len = self.partner.len();
        let mut partner = vec![0; len];
        let mut lab = self.lab.clone();
        for h in 0..len {
            partner[perm[h]] = perm[self.partner[h]];
            lab[perm[h]] = self.lab[h].clone();
        }
        Mono { partner, lab }
    }

    /// R3 at `v`: every label read from `v` is multiplied by `g^-1` on the left.
    pub fn transport(&self, group: &Group, v: usize, g: &GroupElement) -> Mono {
        let gi = group.inv(g);
        let mut out = self.clone();
        for s in 0..3 {
            let h = 3 * v + s;
            let x = group.mul(&gi, &out.lab[h]);
            out.lab[self.partner[h]] = group.inv(&x);
            out.lab[h] = x;
        }
        out
    }

    /// Three-term IHX relation at the edge through half-edge `p`, whose ends must lie
    /// on distinct vertices. Returns the graphs `T(x,y|z,w)`, `T(y,z|x,w)`, `T(z,x|y,w)`.
    pub fn ihx(&self, p: usize) -> [Mono; 3] {
        let q = self.partner[p];
        let (u, su, v, sv) = (p / 3, p % 3, q / 3, q % 3);
        let slot = |w: usize, s: usize, k: usize| 3 * w + (s + k) % 3;
        let ports = [slot(u, su, 1), slot(u, su, 2), slot(v, sv, 1), slot(v, sv, 2)];
        let (x, y, z, w) = (0, 1, 2, 3);
        [[x, y, z, w], [y, z, x, w], [z, x, y, w]].map(|order| {
            // port order[k] moves to position ports[k]
            let mut perm: Vec<usize> = (0..self.partner.len()).collect();
            for (k, &port) in order.iter().enumerate() {
                perm[ports[port]] = ports[k];
            }
            self.rewire(&perm, &ports)
        })
    }

    /// Moves the ports (only) as given by `perm`, keeping their far ends.
    fn rewire(&self, perm: &[usize], ports: &[usize; 4]) -> Mono {
        let mut out = self.clone();
        for &p in ports {
            let np = perm[p];
            let far = self.partner[p];
            let far = if ports.contains(&far) { perm[far] } else { far };
            out.partner[np] = far;
            out.partner[far] = np;
            out.lab[np] = self.lab[p].clone();
        }
        out
    }
}
