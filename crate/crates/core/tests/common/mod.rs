//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod gauge;
pub mod graph_oracle;
pub mod mu_oracle;
pub mod snf;

use equisurg::groupring::GroupRingElement;
use equisurg::hermitian::HermitianMatrix;
use equisurg::matrix::Matrix;
use equisurg::{Group, GroupElement, Int};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

/// Base seed, overridable through `EQUISURG_SEED`.
pub fn base_seed() -> u64 {
    std::env::var("EQUISURG_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_260_101)
}

/// Independent stream for one test.
pub fn rng(stream: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(base_seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Seed banner appended to assertion messages.
pub fn seed_note(stream: u64) -> String {
    format!("(EQUISURG_SEED={} stream {stream})", base_seed())
}

pub fn element(rng: &mut Rand, group: &Group, radius: usize) -> GroupElement {
    let pool = group.elements().unwrap_or_else(|| group.ball(radius));
    pool.choose(rng).expect("groups are nonempty").clone()
}

/// Sparse element with small coefficients.
pub fn ring_element(rng: &mut Rand, group: &Group, max_terms: usize, max_coeff: i64) -> GroupRingElement<Int> {
    let mut x = GroupRingElement::zero(group);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let c = rng.gen_range(-max_coeff..=max_coeff);
        x.add_term(element(rng, group, 2), Int::from(c));
    }
    x
}

/// Product of random elementary matrices and diagonal units.
pub fn elementary_product(rng: &mut Rand, group: &Group, n: usize, steps: usize) -> Matrix<Int> {
    let mut p = Matrix::identity(group, n);
    for _ in 0..steps {
        let mut e = Matrix::identity(group, n);
        if n > 1 && rng.gen_bool(0.7) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let r = GroupRingElement::monomial(group, element(rng, group, 1), Int::from(if rng.gen_bool(0.5) { 1 } else { -1 }));
            e.set(i, j, r);
        } else {
            let i = rng.gen_range(0..n);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            e.set(i, i, GroupRingElement::monomial(group, element(rng, group, 1), Int::from(sign)));
        }
        p = e.checked_mul(&p).expect("same group and size");
    }
    p
}

/// `P D P*` with `D` a block sum of `(+-1)` and hyperbolic planes: invertible and almost even.
pub fn invertible_almost_even(rng: &mut Rand, group: &Group, n: usize, steps: usize) -> HermitianMatrix<Int> {
    let mut d = Matrix::zeros(group, n, n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && rng.gen_bool(0.3) {
            d.set(i, i + 1, GroupRingElement::one(group));
            d.set(i + 1, i, GroupRingElement::one(group));
            i += 2;
        } else {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            d.set(i, i, GroupRingElement::from_int(group, Int::from(sign)));
            i += 1;
        }
    }
    let d = HermitianMatrix::new(d).expect("block sum is Hermitian");
    d.congruence(&elementary_product(rng, group, n, steps)).expect("square congruence")
}

/// Random Hermitian almost-even matrix, usually singular.
pub fn almost_even(rng: &mut Rand, group: &Group, n: usize) -> HermitianMatrix<Int> {
    let mut m = Matrix::zeros(group, n, n);
    for i in 0..n {
        let y = ring_element(rng, group, 2, 2);
        let mut diag = y.checked_add(&y.involute()).expect("same group");
        diag.add_term(group.identity(), Int::from(rng.gen_range(-3..=3)));
        m.set(i, i, diag);
        for j in i + 1..n {
            let x = ring_element(rng, group, 3, 2);
            m.set(j, i, x.involute());
            m.set(i, j, x);
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

/// Random trivalent graph on `n` vertices labeled by random group elements.
pub fn decorated_graph(rng: &mut Rand, group: &Group, n: usize) -> equisurg::graphspace::DecoratedGraph<Int> {
    let mut halves: Vec<usize> = (0..3 * n).collect();
    halves.shuffle(rng);
    let pairs: Vec<(usize, usize, GroupElement)> =
        halves.chunks(2).map(|p| (p[0], p[1], element(rng, group, 1))).collect();
    equisurg::graphspace::DecoratedGraph::from_pairs(group, n, &pairs).expect("perfect matching")
}

/// Random closed Milnor collection from up to `seeds` orbit seeds; inconsistent draws are skipped.
pub fn mu_collection(rng: &mut Rand, group: &Group, q: usize, seeds: usize) -> equisurg::milnor::MuCollection<Int> {
    use equisurg::milnor::{MuCollection, MuKey};
    let mut chosen: Vec<(MuKey, Int)> = Vec::new();
    let mut current = MuCollection::empty(q, group);
    for _ in 0..8 * seeds {
        if chosen.len() == seeds {
            break;
        }
        let key = MuKey::new(
            rng.gen_range(1..=q),
            rng.gen_range(1..=q),
            rng.gen_range(1..=q),
            element(rng, group, 1),
            element(rng, group, 1),
        );
        let mut v = rng.gen_range(1..=2i64);
        if rng.gen_bool(0.5) {
            v = -v;
        }
        let mut trial = chosen.clone();
        trial.push((key, Int::from(v)));
        if let Ok(c) = MuCollection::symmetry_closure(q, group, &trial) {
            if c.len() > current.len() {
                chosen = trial;
                current = c;
            }
        }
    }
    current
}
