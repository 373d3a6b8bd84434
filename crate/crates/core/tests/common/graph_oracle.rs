//! Naive graded group of decorated trivalent graphs: every labeled perfect matching
//! is a generator, isomorphisms, AS and R3 are merged by a signed union-find, and
//! IHX plus AS torsion go into a dense integer matrix.

use std::collections::HashMap;

use equisurg::{Group, GroupElement};

use super::snf::smith_diagonal;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Raw {
    partner: Vec<usize>,
    lab: Vec<GroupElement>,
}

impl Raw {
    /// Half-edge at position `h` moves to `pos[h]`.
    fn moved(&self, pos: &[usize]) -> Raw {
        let mut partner = vec![0; pos.len()];
        let mut lab = self.lab.clone();
        for h in 0..pos.len() {
            partner[pos[h]] = pos[self.partner[h]];
            lab[pos[h]] = self.lab[h].clone();
        }
        Raw { partner, lab }
    }
}

fn all_matchings(len: usize) -> Vec<Vec<usize>> {
    fn go(free: Vec<usize>, partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if free.is_empty() {
            out.push(partner.clone());
            return;
        }
        let a = free[0];
        for &b in &free[1..] {
            partner[a] = b;
            partner[b] = a;
            go(free.iter().copied().filter(|&x| x != a && x != b).collect(), partner, out);
        }
    }
    let mut out = Vec::new();
    go((0..len).collect(), &mut vec![0; len], &mut out);
    out
}

struct SignedUnionFind {
    parent: Vec<usize>,
    /// `x = flip * parent` with `flip = +1` when false.
    flip: Vec<bool>,
    torsion: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n).collect(), flip: vec![false; n], torsion: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut sign = false;
        let mut y = x;
        while self.parent[y] != y {
            sign ^= self.flip[y];
            y = self.parent[y];
        }
        (y, sign)
    }

    /// Records `a = (negate ? -1 : 1) * b`.
    fn union(&mut self, a: usize, b: usize, negate: bool) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa ^ sb ^ negate {
                self.torsion[ra] = true;
            }
            return;
        }
        self.parent[ra] = rb;
        self.flip[ra] = sa ^ sb ^ negate;
        self.torsion[rb] |= self.torsion[ra];
    }
}

pub struct NaiveReport {
    pub rank: usize,
    pub invariant_factors: Vec<i128>,
    pub two_torsion_rank: usize,
}

pub fn naive_graded_group(n: usize, group: &Group) -> NaiveReport {
    let elems = group.elements().expect("finite group");
    let len = 3 * n;
    let mut raws = Vec::new();
    for partner in all_matchings(len) {
        let lows: Vec<usize> = (0..len).filter(|&h| h < partner[h]).collect();
        let count = elems.len().pow(lows.len() as u32);
        for mut code in 0..count {
            let mut lab = vec![group.identity(); len];
            for &h in &lows {
                let g = &elems[code % elems.len()];
                code /= elems.len();
                lab[h] = g.clone();
                lab[partner[h]] = group.inv(g);
            }
            raws.push(Raw { partner: partner.clone(), lab });
        }
    }
    let index: HashMap<Raw, usize> = raws.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut uf = SignedUnionFind::new(raws.len());
    let ident: Vec<usize> = (0..len).collect();
    for (i, r) in raws.iter().enumerate() {
        for v in 0..n {
            // rotation of the cyclic order at v
            let mut rot = ident.clone();
            for s in 0..3 {
                rot[3 * v + s] = 3 * v + (s + 1) % 3;
            }
            uf.union(i, index[&r.moved(&rot)], false);
            // reversing the cyclic order at v
            let mut flip = ident.clone();
            flip.swap(3 * v + 1, 3 * v + 2);
            uf.union(i, index[&r.moved(&flip)], true);
            // swapping vertex v with vertex v + 1
            if v + 1 < n {
                let mut swap = ident.clone();
                for s in 0..3 {
                    swap[3 * v + s] = 3 * (v + 1) + s;
                    swap[3 * (v + 1) + s] = 3 * v + s;
                }
                uf.union(i, index[&r.moved(&swap)], false);
            }
            // moving the base point of v by g
            for g in &elems {
                let gi = group.inv(g);
                let mut t = r.clone();
                for s in 0..3 {
                    let h = 3 * v + s;
                    t.lab[h] = group.mul(&gi, &t.lab[h]);
                    let p = t.partner[h];
                    t.lab[p] = group.inv(&t.lab[h]);
                }
                uf.union(i, index[&t], false);
            }
        }
    }
    let mut classes: HashMap<usize, usize> = HashMap::new();
    for i in 0..raws.len() {
        let root = uf.find(i).0;
        let next = classes.len();
        classes.entry(root).or_insert(next);
    }
    let cols = classes.len();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for (&root, &c) in &classes {
        if uf.torsion[root] {
            let mut row = vec![0; cols];
            row[c] = 2;
            rows.push(row);
        }
    }
    for r in &raws {
        for h in 0..len {
            let q = r.partner[h];
            if h > q || h / 3 == q / 3 || r.lab[h] != group.identity() {
                continue;
            }
            let (u, su, v, sv) = (h / 3, h % 3, q / 3, q % 3);
            let x = 3 * u + (su + 1) % 3;
            let y = 3 * u + (su + 2) % 3;
            let z = 3 * v + (sv + 1) % 3;
            // strands y, z, x land on x, y, z; then z, x, y do
            let mut second = ident.clone();
            second[y] = x;
            second[z] = y;
            second[x] = z;
            let mut third = ident.clone();
            third[z] = x;
            third[x] = y;
            third[y] = z;
            let mut row = vec![0i128; cols];
            for t in [r.clone(), r.moved(&second), r.moved(&third)] {
                let (root, neg) = uf.find(index[&t]);
                row[classes[&root]] += if neg { -1 } else { 1 };
            }
            rows.push(row);
        }
    }
    let diag = smith_diagonal(rows);
    let invariant_factors: Vec<i128> = diag.iter().copied().filter(|&d| d > 1).collect();
    NaiveReport {
        rank: cols - diag.len(),
        two_torsion_rank: invariant_factors.iter().filter(|&&d| d % 2 == 0).count(),
        invariant_factors,
    }
}
