//! Brute-force orbit of a Milnor collection under all lift changes in a finite group.

use std::collections::BTreeMap;

use equisurg::milnor::{MuCollection, MuKey};
use equisurg::{GroupElement, Int};

type Table = BTreeMap<MuKey, Int>;

/// Pulls values back: new `(i,j,k; g,h)` is old `(i,j,k; u_i^-1 g u_j, u_i^-1 h u_k)`,
/// evaluated on the full grid of `(g, h)`.
fn pulled_back(c: &MuCollection<Int>, u: &[GroupElement]) -> Table {
    let group = c.group();
    let elems = group.elements().expect("finite group");
    let q = c.q();
    let mut out = Table::new();
    for i in 1..=q {
        for j in 1..=q {
            for k in 1..=q {
                let ui = group.inv(&u[i - 1]);
                for g in &elems {
                    for h in &elems {
                        let old = MuKey::new(
                            i,
                            j,
                            k,
                            group.mul(&group.mul(&ui, g), &u[j - 1]),
                            group.mul(&group.mul(&ui, h), &u[k - 1]),
                        );
                        if let Some(v) = c.entries().get(&old) {
                            out.insert(MuKey::new(i, j, k, g.clone(), h.clone()), v.clone());
                        }
                    }
                }
            }
        }
    }
    out
}

fn tuples(elems: &[GroupElement], q: usize) -> Vec<Vec<GroupElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether `c2` lies in the orbit of `c1`.
pub fn brute_force_equivalent(c1: &MuCollection<Int>, c2: &MuCollection<Int>) -> bool {
    let elems = c1.group().elements().expect("finite group");
    tuples(&elems, c1.q()).iter().any(|u| pulled_back(c1, u) == *c2.entries())
}

/// The lift change computed on the full grid.
pub fn grid_lift(c: &MuCollection<Int>, u: &[GroupElement]) -> BTreeMap<MuKey, Int> {
    pulled_back(c, u)
}
