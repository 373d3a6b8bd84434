//! Canonical labeling by exhaustive breadth-first traversals.
//!
//! A traversal of a connected component fixes a start vertex and an ordering of
//! its three slots; every newly reached vertex puts the slot it was entered by
//! first and orders the remaining two by one binary choice. Numbering vertices
//! and half-edges in visiting order gives an encoding (partner position and label
//! of every position). The set of traversals is invariant under isomorphism, so
//! the least encoding is a complete invariant. Two least traversals differ by an
//! automorphism, whose orientation sign is the ratio of their slot parities.

use super::{DecoratedGraph, Mono};
use crate::error::Result;
use crate::groups::GroupElement;
use crate::scalar::Coeff;

const ORDERS: [([usize; 3], bool); 6] = [
    ([0, 1, 2], true),
    ([1, 2, 0], true),
    ([2, 0, 1], true),
    ([0, 2, 1], false),
    ([2, 1, 0], false),
    ([1, 0, 2], false),
];

fn parity(order: &[usize; 3]) -> bool {
    ORDERS.iter().find(|(o, _)| o == order).map(|(_, p)| *p).unwrap()
}

/// Result of canonicalizing a monomial graph.
#[derive(Clone, Debug)]
pub(crate) struct CanonMono {
    pub mono: Mono,
    /// The input equals `±mono`; for `odd` graphs the sign of the first least traversal.
    pub positive: bool,
    /// Some automorphism reverses the orientation, so the graph is its own negative.
    pub odd: bool,
}

type Encoding = Vec<(usize, GroupElement)>;

struct Traversal {
    encoding: Encoding,
    positive: bool,
}

fn components(m: &Mono) -> Vec<Vec<usize>> {
    let n = m.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut verts = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < verts.len() {
            let v = verts[i];
            for k in 0..3 {
                let w = m.partner[3 * v + k] / 3;
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    verts.push(w);
                }
            }
            i += 1;
        }
        out.push(verts);
    }
    out
}

fn traverse(m: &Mono, start: usize, first: [usize; 3], mut choices: u32) -> Traversal {
    let n = m.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut order: Vec<[usize; 3]> = Vec::new();
    let mut visit = vec![start];
    index[start] = 0;
    order.push(first);
    let mut positive = parity(&first);
    let mut i = 0;
    while i < visit.len() {
        let v = visit[i];
        for p in 0..3 {
            let h = m.partner[3 * v + order[i][p]];
            let w = h / 3;
            if index[w] == usize::MAX {
                let entry = h % 3;
                let (a, b) = ((entry + 1) % 3, (entry + 2) % 3);
                let o = if choices & 1 == 0 { [entry, a, b] } else { [entry, b, a] };
                choices >>= 1;
                positive ^= !parity(&o);
                index[w] = visit.len();
                visit.push(w);
                order.push(o);
            }
        }
        i += 1;
    }
    let mut new_pos = vec![0usize; 3 * n];
    for (k, &v) in visit.iter().enumerate() {
        for p in 0..3 {
            new_pos[3 * v + order[k][p]] = 3 * k + p;
        }
    }
    let mut encoding = Vec::with_capacity(3 * visit.len());
    for (k, &v) in visit.iter().enumerate() {
        for &slot in &order[k] {
            let h = 3 * v + slot;
            encoding.push((new_pos[m.partner[h]], m.lab[h].clone()));
        }
    }
    Traversal { encoding, positive }
}

struct ComponentCanon {
    size: usize,
    best: Traversal,
    odd: bool,
}

fn canonicalize_component(m: &Mono, verts: &[usize]) -> ComponentCanon {
    let k = verts.len();
    let mut best: Option<Traversal> = None;
    let mut odd = false;
    for &start in verts {
        for (first, _) in ORDERS {
            for choices in 0..(1u32 << (k - 1)) {
                let t = traverse(m, start, first, choices);
                match &best {
                    None => best = Some(t),
                    Some(b) => match t.encoding.cmp(&b.encoding) {
                        std::cmp::Ordering::Less => {
                            odd = false;
                            best = Some(t);
                        }
                        std::cmp::Ordering::Equal => odd |= t.positive != b.positive,
                        std::cmp::Ordering::Greater => {}
                    },
                }
            }
        }
    }
    ComponentCanon { size: k, best: best.unwrap(), odd }
}

/// Canonical representative of a monomial graph; components are placed in
/// increasing order of (size, encoding).
pub(crate) fn canonicalize_mono(m: &Mono) -> CanonMono {
    let mut comps: Vec<ComponentCanon> = components(m).iter().map(|c| canonicalize_component(m, c)).collect();
    comps.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| a.best.encoding.cmp(&b.best.encoding)));
    let total = m.partner.len();
    let mut partner = vec![0; total];
    let mut lab = m.lab.clone();
    let mut positive = true;
    let mut odd = false;
    let mut offset = 0;
    for c in &comps {
        for (p, (far, g)) in c.best.encoding.iter().enumerate() {
            partner[offset + p] = offset + far;
            lab[offset + p] = g.clone();
        }
        positive ^= !c.best.positive;
        odd |= c.odd;
        offset += 3 * c.size;
    }
    CanonMono { mono: Mono { partner, lab }, positive, odd }
}

/// Canonical representative and the sign with `g = sign * canonical`.
///
/// The sign is `0` when an automorphism of `g` reverses the orientation, so that
/// `g = -g`. Labels must be of the form `±h` for a group element `h`; general
/// labels are expanded first with [`DecoratedGraph::expand_labels`].
pub fn canonical_form<C: Coeff>(g: &DecoratedGraph<C>) -> Result<(DecoratedGraph<C>, i8)> {
    let (mono, positive) = g.to_mono()?;
    let c = canonicalize_mono(&mono);
    let canon = DecoratedGraph::from_mono(g.group(), &c.mono);
    let sign = if c.odd {
        0
    } else if positive == c.positive {
        1
    } else {
        -1
    };
    Ok((canon, sign))
}
