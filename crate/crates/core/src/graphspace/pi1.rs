//! Edge labelings versus representations of the fundamental group.
//!
//! For a spanning forest and a root per component, the edge outside the forest
//! from `x` to `y` closes the loop `root -> x -> y -> root` through the forest.
//! These loops form a free basis of the fundamental group of the component, and a
//! labeling sends the loop to `hol(x) * label * hol(y)^-1`, where `hol(v)` is the
//! product of labels along the forest path from the root to `v`.

use std::collections::{BTreeMap, VecDeque};

use serde_json::{json, Value};

use super::{DecoratedGraph, Edge};
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::{Group, GroupElement};
use crate::scalar::Coeff;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pi1Decoration {
    pub group: Group,
    pub vertices: usize,
    /// Oriented edges as half-edge pairs, half-edge `3v + s` being slot `s` of `v`.
    pub edges: Vec<[usize; 2]>,
    /// Indices of the edges in the spanning forest.
    pub forest: Vec<usize>,
    /// Base vertex of every component, ordered by smallest vertex of the component.
    pub roots: Vec<usize>,
    /// Image of the basis loop of every edge outside the forest.
    pub images: BTreeMap<usize, GroupElement>,
}

/// Union-find without path compression; graphs are tiny.
fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn vertex_components(vertices: usize, edges: &[[usize; 2]]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..vertices).collect();
    for e in edges {
        let (a, b) = (find(&mut parent, e[0] / 3), find(&mut parent, e[1] / 3));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..vertices).map(|v| find(&mut parent, v)).collect()
}

/// Kruskal forest taking edges in index order.
fn first_forest(vertices: usize, edges: &[[usize; 2]]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..vertices).collect();
    let mut out = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, e[0] / 3), find(&mut parent, e[1] / 3));
        if a != b {
            parent[a.max(b)] = a.min(b);
            out.push(i);
        }
    }
    out
}

fn monomial_labels<C: Coeff>(g: &DecoratedGraph<C>) -> Result<Vec<GroupElement>> {
    g.edges()
        .iter()
        .map(|e| match e.label.as_signed_element() {
            Some((true, x)) => Ok(x),
            _ => Err(Error::InvalidInput(format!("edge label {} is not a group element", e.label))),
        })
        .collect()
}

impl Pi1Decoration {
    fn check(&self) -> Result<()> {
        let comp = vertex_components(self.vertices, &self.edges);
        let mut roots: Vec<usize> = comp.clone();
        roots.sort();
        roots.dedup();
        if self.roots.len() != roots.len() {
            return Err(Error::InvalidInput(format!("{} roots for {} components", self.roots.len(), roots.len())));
        }
        for (r, c) in self.roots.iter().zip(&roots) {
            if *r >= self.vertices || comp[*r] != *c {
                return Err(Error::InvalidInput(format!("root {r} is not in component {c}")));
            }
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        for &i in &self.forest {
            let e = self.edges.get(i).ok_or_else(|| Error::InvalidInput(format!("forest edge {i} out of range")))?;
            let (a, b) = (find(&mut parent, e[0] / 3), find(&mut parent, e[1] / 3));
            if a == b {
                return Err(Error::InvalidInput(format!("forest edge {i} closes a cycle")));
            }
            parent[a.max(b)] = a.min(b);
        }
        if self.forest.len() + roots.len() != self.vertices {
            return Err(Error::InvalidInput("forest does not span every component".into()));
        }
        for i in 0..self.edges.len() {
            let in_forest = self.forest.contains(&i);
            match self.images.get(&i) {
                Some(g) if !in_forest => self.group.check(g)?,
                None if in_forest => {}
                _ => return Err(Error::InvalidInput(format!("edge {i} needs an image exactly when outside the forest"))),
            }
        }
        Ok(())
    }

    /// Component id (its smallest vertex) of every edge.
    pub fn edge_components(&self) -> Vec<usize> {
        let comp = vertex_components(self.vertices, &self.edges);
        self.edges.iter().map(|e| comp[e[0] / 3]).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_json(),
            "vertices": self.vertices,
            "edges": self.edges,
            "forest": self.forest,
            "roots": self.roots,
            "images": self.images.iter().map(|(e, g)| json!({"edge": e, "g": self.group.element_to_json(g)})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let group = Group::from_json(v.get("group").ok_or_else(|| Error::parse("decoration", "missing group"))?)?;
        let uint = |x: &Value, loc: &str| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse(loc, "expected an index"));
        let list = |key: &str| {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(key, "expected an array"))?
                .iter()
                .map(|x| uint(x, key))
                .collect::<Result<Vec<_>>>()
        };
        let vertices = uint(v.get("vertices").unwrap_or(&Value::Null), "vertices")?;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("edges", "expected an array"))?
            .iter()
            .map(|e| match e.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Ok([uint(a, "edges")?, uint(b, "edges")?]),
                _ => Err(Error::parse("edges", "expected [a, b]")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images = BTreeMap::new();
        for item in v.get("images").and_then(Value::as_array).ok_or_else(|| Error::parse("images", "expected an array"))? {
            let e = uint(item.get("edge").unwrap_or(&Value::Null), "images.edge")?;
            let g = group.parse_element(item.get("g").ok_or_else(|| Error::parse("images.g", "missing"))?)?;
            images.insert(e, g);
        }
        let d = Pi1Decoration { group, vertices, edges, forest: list("forest")?, roots: list("roots")?, images };
        // the underlying graph must be trivalent
        DecoratedGraph::<i64>::from_pairs(
            &d.group,
            d.vertices,
            &d.edges.iter().map(|e| (e[0], e[1], d.group.identity())).collect::<Vec<_>>(),
        )?;
        d.check()?;
        Ok(d)
    }
}

/// Holonomy of `labels` along the forest from each root.
fn holonomy(
    group: &Group,
    vertices: usize,
    edges: &[[usize; 2]],
    labels: &[GroupElement],
    forest: &[usize],
    roots: &[usize],
) -> Vec<GroupElement> {
    let mut adj: Vec<Vec<(usize, GroupElement)>> = vec![Vec::new(); vertices];
    for &i in forest {
        let [a, b] = edges[i];
        adj[a / 3].push((b / 3, labels[i].clone()));
        adj[b / 3].push((a / 3, group.inv(&labels[i])));
    }
    let mut hol: Vec<Option<GroupElement>> = vec![None; vertices];
    for &r in roots {
        hol[r] = Some(group.identity());
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            let hv = hol[v].clone().unwrap();
            for (w, g) in &adj[v] {
                if hol[*w].is_none() {
                    hol[*w] = Some(group.mul(&hv, g));
                    queue.push_back(*w);
                }
            }
        }
    }
    hol.into_iter().map(|h| h.expect("forest spans")).collect()
}

fn decorate(
    group: &Group,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    labels: &[GroupElement],
    forest: Vec<usize>,
    roots: Vec<usize>,
) -> Pi1Decoration {
    let hol = holonomy(group, vertices, &edges, labels, &forest, &roots);
    let images = (0..edges.len())
        .filter(|i| !forest.contains(i))
        .map(|i| {
            let [a, b] = edges[i];
            let g = group.mul(&group.mul(&hol[a / 3], &labels[i]), &group.inv(&hol[b / 3]));
            (i, g)
        })
        .collect();
    Pi1Decoration { group: group.clone(), vertices, edges, forest, roots, images }
}

/// Representation of the fundamental group determined by a labeling with group
/// elements, using the forest of earliest edges and the smallest vertex of each
/// component as base point.
pub fn edge_to_pi1<C: Coeff>(g: &DecoratedGraph<C>) -> Result<Pi1Decoration> {
    let labels = monomial_labels(g)?;
    let edges: Vec<[usize; 2]> = g.edges().iter().map(|e| e.halves).collect();
    let n = g.degree();
    let forest = first_forest(n, &edges);
    let mut roots: Vec<usize> = vertex_components(n, &edges);
    roots.sort();
    roots.dedup();
    Ok(decorate(g.group(), n, edges, &labels, forest, roots))
}

/// Labeling with forest edges `1` and every other edge labeled by its loop image.
pub fn pi1_to_edge<C: Coeff>(d: &Pi1Decoration) -> Result<DecoratedGraph<C>> {
    d.check()?;
    let edges = d
        .edges
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let g = d.images.get(&i).cloned().unwrap_or_else(|| d.group.identity());
            Edge { halves: *h, label: GroupRingElement::element(&d.group, g) }
        })
        .collect();
    DecoratedGraph::new(&d.group, d.vertices, edges)
}

/// Whether two decorations of the same graph agree up to conjugation in every
/// component. Both are first rewritten in the basis of [`edge_to_pi1`].
pub fn out_equivalent(d1: &Pi1Decoration, d2: &Pi1Decoration) -> Result<bool> {
    if d1.group != d2.group {
        return Err(Error::GroupMismatch(format!("{} versus {}", d1.group, d2.group)));
    }
    if d1.vertices != d2.vertices || d1.edges != d2.edges {
        return Err(Error::InvalidInput("decorations of different graphs".into()));
    }
    let group = &d1.group;
    let elems = group
        .elements()
        .ok_or_else(|| Error::UnsupportedGroup(format!("conjugator search needs a finite group, got {group}")))?;
    let a = edge_to_pi1(&pi1_to_edge::<i64>(d1)?)?;
    let b = edge_to_pi1(&pi1_to_edge::<i64>(d2)?)?;
    let comp = a.edge_components();
    let mut by_comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in a.images.keys() {
        by_comp.entry(comp[e]).or_default().push(e);
    }
    Ok(by_comp.values().all(|es| {
        elems.iter().any(|c| {
            let ci = group.inv(c);
            es.iter().all(|e| group.mul(&group.mul(c, &a.images[e]), &ci) == b.images[e])
        })
    }))
}
