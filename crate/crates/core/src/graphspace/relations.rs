//! Basis enumeration, relation generators and the graded group computation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{canonicalize_mono, CanonMono, DecoratedGraph, FormalGraphSum, Mono};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::intlinalg::{smith_normal_form, IntMatrix};
use crate::scalar::{Coeff, Int};

/// Search bounds for graph enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphLimits {
    pub max_degree: usize,
    pub max_group_order: usize,
    /// Cap on the number of labeled graphs examined.
    pub max_labelings: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits { max_degree: 4, max_group_order: 6, max_labelings: 2_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    /// Vertex flip plus the graph; also `2 G` for graphs equal to their negative.
    As,
    R1,
    R3,
    Ihx,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::As => "AS",
            RelationKind::R1 => "R1",
            RelationKind::R3 => "R3",
            RelationKind::Ihx => "IHX",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<C> {
    pub kind: RelationKind,
    pub sum: FormalGraphSum<C>,
}

fn check_request(n: usize, group: &Group, limits: &GraphLimits) -> Result<Vec<GroupElement>> {
    if n % 2 == 1 {
        return Err(Error::InvalidInput(format!("trivalent graphs have an even number of vertices, got {n}")));
    }
    if n > limits.max_degree {
        return Err(Error::ResourceBound(format!("degree {n} exceeds the bound {}", limits.max_degree)));
    }
    let elems = group
        .elements()
        .ok_or_else(|| Error::UnsupportedGroup(format!("graph enumeration needs a finite group, got {group}")))?;
    if elems.len() > limits.max_group_order {
        return Err(Error::ResourceBound(format!(
            "group order {} exceeds the bound {}",
            elems.len(),
            limits.max_group_order
        )));
    }
    Ok(elems)
}

fn matchings(free: &mut Vec<usize>, partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(&a) = free.first() else {
        out.push(partner.clone());
        return;
    };
    for k in 1..free.len() {
        let b = free[k];
        let rest: Vec<usize> = free.iter().copied().filter(|&x| x != a && x != b).collect();
        let saved = std::mem::replace(free, rest);
        partner[a] = b;
        partner[b] = a;
        matchings(free, partner, out);
        *free = saved;
    }
}

/// Canonical unlabeled shapes with `n` vertices, labeled by `group`'s identity.
fn shapes(n: usize, group: &Group) -> Vec<Mono> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Vec<Vec<usize>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let partners = {
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| {
                let mut all = Vec::new();
                let mut free: Vec<usize> = (0..3 * n).collect();
                let mut partner = vec![0; 3 * n];
                matchings(&mut free, &mut partner, &mut all);
                let trivial = Group::Trivial;
                let set: BTreeSet<Vec<usize>> = all
                    .into_iter()
                    .map(|p| canonicalize_mono(&Mono { partner: p, lab: vec![trivial.identity(); 3 * n] }).mono.partner)
                    .collect();
                set.into_iter().collect()
            })
            .clone()
    };
    partners.into_iter().map(|partner| Mono { partner, lab: vec![group.identity(); 3 * n] }).collect()
}

/// Canonical basis: every labeled graph up to isomorphism, with its odd flag.
pub(crate) fn basis(n: usize, group: &Group, limits: &GraphLimits) -> Result<BTreeMap<Mono, bool>> {
    let elems = check_request(n, group, limits)?;
    let shapes = shapes(n, group);
    let edges = 3 * n / 2;
    let per_shape = (elems.len() as u128).pow(edges as u32);
    if per_shape * shapes.len() as u128 > limits.max_labelings as u128 {
        return Err(Error::ResourceBound(format!(
            "{} shapes with {per_shape} labelings each exceed the bound {}",
            shapes.len(),
            limits.max_labelings
        )));
    }
    let mut out = BTreeMap::new();
    for shape in &shapes {
        let ends: Vec<usize> = (0..3 * n).filter(|&h| h < shape.partner[h]).collect();
        let mut digits = vec![0usize; ends.len()];
        loop {
            let mut m = shape.clone();
            for (&h, &d) in ends.iter().zip(&digits) {
                m.lab[h] = elems[d].clone();
                m.lab[shape.partner[h]] = group.inv(&elems[d]);
            }
            let c = canonicalize_mono(&m);
            out.insert(c.mono, c.odd);
            let Some(k) = digits.iter().position(|&d| d + 1 < elems.len()) else {
                break;
            };
            digits[k] += 1;
            for d in &mut digits[..k] {
                *d = 0;
            }
        }
    }
    Ok(out)
}

/// Isomorphism classes of `pi`-labeled trivalent graphs with `n` vertices, in
/// canonical form and canonical order.
pub fn enumerate_graphs<C: Coeff>(n: usize, group: &Group, limits: &GraphLimits) -> Result<Vec<DecoratedGraph<C>>> {
    Ok(basis(n, group, limits)?.keys().map(|m| DecoratedGraph::from_mono(group, m)).collect())
}

/// Raw relation: monomial graphs with integer coefficients.
type RawRelation = (RelationKind, Vec<(Mono, i64)>);

fn raw_relations(group: &Group, elems: &[GroupElement], basis: &BTreeMap<Mono, bool>) -> Vec<RawRelation> {
    let mut out = Vec::new();
    for (m, &odd) in basis {
        let n = m.vertex_count();
        if odd {
            out.push((RelationKind::As, vec![(m.clone(), 2)]));
        }
        for v in 0..n {
            out.push((RelationKind::As, vec![(m.clone(), 1), (m.flip(v), 1)]));
        }
        for h in (0..3 * n).filter(|&h| h < m.partner[h]) {
            // reversing an edge and conjugating its label leaves the half-edge data unchanged
            out.push((RelationKind::R1, vec![(m.clone(), 1), (m.clone(), -1)]));
            if m.partner[h] / 3 != h / 3 && group.is_identity(&m.lab[h]) {
                let [a, b, c] = m.ihx(h);
                out.push((RelationKind::Ihx, vec![(a, 1), (b, 1), (c, 1)]));
            }
        }
        for v in 0..n {
            for g in elems {
                out.push((RelationKind::R3, vec![(m.clone(), 1), (m.transport(group, v, g), -1)]));
            }
        }
    }
    out
}

/// Every AS, R1, R3 and IHX instance over the canonical basis, as canonical sums.
/// R2 is built into the basis, whose labels are group elements.
pub fn relation_generators<C: Coeff>(n: usize, group: &Group, limits: &GraphLimits) -> Result<Vec<Relation<C>>> {
    let elems = check_request(n, group, limits)?;
    let basis = basis(n, group, limits)?;
    Ok(raw_relations(group, &elems, &basis)
        .into_iter()
        .map(|(kind, terms)| {
            let mut sum = FormalGraphSum::zero(group);
            for (m, c) in terms {
                let canon = canonicalize_mono(&m);
                let c = <C as Coeff>::from_i64(if canon.positive { c } else { -c });
                sum.add_canonical(DecoratedGraph::from_mono(group, &canon.mono), c);
            }
            Relation { kind, sum }
        })
        .collect())
}

/// Summary of the quotient of the free abelian group on the basis by all relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGroupReport {
    pub degree: usize,
    pub group: Group,
    pub basis_size: usize,
    pub relation_count: usize,
    pub relation_rank: usize,
    /// Rank of the quotient over `Q`, equal to its rank over `Z[1/2]`.
    pub rank: usize,
    /// Invariant factors greater than one.
    pub invariant_factors: Vec<Int>,
    /// Number of even invariant factors.
    pub two_torsion_rank: usize,
}

impl GradedGroupReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "group": self.group.to_json(),
            "basis_size": self.basis_size,
            "relation_count": self.relation_count,
            "relation_rank": self.relation_rank,
            "rank": self.rank,
            "invariant_factors": self.invariant_factors.iter().map(crate::scalar::coeff_to_json).collect::<Vec<_>>(),
            "two_torsion_rank": self.two_torsion_rank,
        })
    }

    /// Odd part of the torsion, which survives inverting 2.
    pub fn odd_torsion(&self) -> Vec<Int> {
        let two = Int::from(2);
        self.invariant_factors
            .iter()
            .map(|d| {
                let mut d = d.clone();
                while (&d % &two).is_zero() {
                    d /= &two;
                }
                d
            })
            .filter(|d| !d.is_one())
            .collect()
    }
}

type SparseRow = BTreeMap<usize, Int>;

/// Cokernel data of a sparse integer relation matrix on `cols` generators:
/// `(relation rank, invariant factors > 1)`. Rows with a unit entry are used as
/// pivots first; the rest goes through a dense Smith normal form.
pub(crate) fn sparse_cokernel(rows: Vec<SparseRow>, cols: usize) -> (usize, Vec<Int>) {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().filter(|r| !r.is_empty()).map(Some).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.as_ref().unwrap().keys() {
            col_rows[c].insert(i);
        }
    }
    let mut pivots = 0usize;
    let mut changed = true;
    while changed {
        changed = false;
        let mut order: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].is_some()).collect();
        order.sort_by_key(|&i| rows[i].as_ref().unwrap().len());
        for i in order {
            let Some(row) = rows[i].as_ref() else { continue };
            let Some((&c, u)) = row
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .min_by_key(|(c, _)| col_rows[**c].len())
            else {
                continue;
            };
            let u = u.clone();
            let pivot = rows[i].take().unwrap();
            for &k in pivot.keys() {
                col_rows[k].remove(&i);
            }
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for j in others {
                let target = rows[j].as_mut().unwrap();
                let f = &target[&c] * &u;
                for (k, v) in &pivot {
                    let e = target.entry(*k).or_insert_with(Int::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        target.remove(k);
                        col_rows[*k].remove(&j);
                    } else {
                        col_rows[*k].insert(j);
                    }
                }
                if target.is_empty() {
                    rows[j] = None;
                }
            }
            pivots += 1;
            changed = true;
        }
    }
    let rest: Vec<SparseRow> = rows.into_iter().flatten().collect();
    let used: BTreeSet<usize> = rest.iter().flat_map(|r| r.keys().copied()).collect();
    let index: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = IntMatrix::<Int>::zeros(rest.len(), used.len());
    for (i, r) in rest.iter().enumerate() {
        for (c, v) in r {
            dense.set(i, index[c], v.clone());
        }
    }
    let snf = smith_normal_form(&dense);
    let factors = snf.factors.iter().filter(|d| !d.is_one()).cloned().collect();
    (pivots + snf.factors.len(), factors)
}

/// The graded piece of degree `n`: canonical basis, relation matrix and its
/// Smith normal form.
pub fn graded_group(n: usize, group: &Group, limits: &GraphLimits) -> Result<GradedGroupReport> {
    let elems = check_request(n, group, limits)?;
    let basis = basis(n, group, limits)?;
    let index: BTreeMap<&Mono, usize> = basis.keys().enumerate().map(|(i, m)| (m, i)).collect();
    let raw = raw_relations(group, &elems, &basis);
    let relation_count = raw.len();
    let mut rows = Vec::with_capacity(raw.len());
    for (_, terms) in raw {
        let mut row = SparseRow::new();
        for (m, c) in terms {
            let CanonMono { mono, positive, .. } = canonicalize_mono(&m);
            let col = index[&mono];
            let e = row.entry(col).or_insert_with(Int::zero);
            *e += if positive { c } else { -c };
            if e.is_zero() {
                row.remove(&col);
            }
        }
        rows.push(row);
    }
    let (relation_rank, invariant_factors) = sparse_cokernel(rows, basis.len());
    let two = Int::from(2);
    let two_torsion_rank = invariant_factors.iter().filter(|d| (*d % &two).is_zero()).count();
    Ok(GradedGroupReport {
        degree: n,
        group: group.clone(),
        basis_size: basis.len(),
        relation_count,
        relation_rank,
        rank: basis.len() - relation_rank,
        invariant_factors,
        two_torsion_rank,
    })
}
