//! Brute-force gauge equivalence of edge labelings: labelings agree up to a vertex
//! function `f` with `label'(a -> b) = f(a)^-1 label(a -> b) f(b)`.

use equisurg::graphspace::DecoratedGraph;
use equisurg::{GroupElement, Int};

fn labels(g: &DecoratedGraph<Int>) -> Vec<GroupElement> {
    g.edges()
        .iter()
        .map(|e| match e.label.as_signed_element() {
            Some((true, x)) => x,
            _ => panic!("labels must be group elements"),
        })
        .collect()
}

pub fn gauge_equivalent(a: &DecoratedGraph<Int>, b: &DecoratedGraph<Int>) -> bool {
    let group = a.group();
    let elems = group.elements().expect("finite group");
    let n = a.degree();
    let ends: Vec<[usize; 2]> = a.edges().iter().map(|e| [e.halves[0] / 3, e.halves[1] / 3]).collect();
    assert_eq!(ends, b.edges().iter().map(|e| [e.halves[0] / 3, e.halves[1] / 3]).collect::<Vec<_>>());
    let (la, lb) = (labels(a), labels(b));
    let total = elems.len().pow(n as u32);
    (0..total).any(|mut code| {
        let f: Vec<&GroupElement> = (0..n)
            .map(|_| {
                let g = &elems[code % elems.len()];
                code /= elems.len();
                g
            })
            .collect();
        ends.iter().zip(la.iter().zip(&lb)).all(|(&[x, y], (p, q))| {
            group.mul(&group.mul(&group.inv(f[x]), p), f[y]) == *q
        })
    })
}

/// `f(a)^-1 label f(b)` on every edge.
pub fn apply_gauge(g: &DecoratedGraph<Int>, f: &[GroupElement]) -> DecoratedGraph<Int> {
    let group = g.group();
    let pairs: Vec<(usize, usize, GroupElement)> = g
        .edges()
        .iter()
        .zip(labels(g))
        .map(|(e, l)| {
            let [a, b] = e.halves;
            (a, b, group.mul(&group.mul(&group.inv(&f[a / 3]), &l), &f[b / 3]))
        })
        .collect();
    DecoratedGraph::from_pairs(group, g.degree(), &pairs).expect("same shape")
}
