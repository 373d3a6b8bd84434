//! Replayable stable-congruence certificates and the reduction of `A ⊕ (-A)`
//! to a unidiagonal matrix.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::groups::Group;
use crate::hermitian::{default_elementary_bound, is_elementary, ElementaryVerdict, HermitianMatrix};
use crate::matrix::{invert, Matrix};
use crate::scalar::Coeff;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CertificateStep<C> {
    /// `A -> P A conj(P)^t`
    Congruence(Matrix<C>),
    /// `A -> A ⊕ (±1)`, `true` for `+1`.
    Stabilize(bool),
    /// `A -> A[perm][perm]`
    Permute(Vec<usize>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StableCongruenceCertificate<C> {
    pub start: HermitianMatrix<C>,
    pub steps: Vec<CertificateStep<C>>,
    pub end: HermitianMatrix<C>,
    pub simple: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified,
    Failed(String),
    /// Replay succeeded but an elementary check hit its search bound.
    Unknown(String),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

impl<C: Coeff> CertificateStep<C> {
    pub fn apply(&self, a: &HermitianMatrix<C>) -> Result<HermitianMatrix<C>> {
        match self {
            CertificateStep::Congruence(p) => {
                if p.rows() != a.size() || !p.is_square() {
                    return Err(Error::SizeMismatch(format!(
                        "congruence by a {}x{} matrix on size {}",
                        p.rows(),
                        p.cols(),
                        a.size()
                    )));
                }
                a.congruence(p)
            }
            CertificateStep::Stabilize(positive) => a.block_sum(&HermitianMatrix::unit(a.group(), *positive)),
            CertificateStep::Permute(perm) => a.permute(perm),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CertificateStep::Congruence(p) => json!({"congr": p.to_json()}),
            CertificateStep::Stabilize(positive) => json!({"stab": if *positive { 1 } else { -1 }}),
            CertificateStep::Permute(perm) => json!({"perm": perm}),
        }
    }

    pub fn from_json(v: &Value, group: &Group) -> Result<Self> {
        if let Some(p) = v.get("congr") {
            return Ok(CertificateStep::Congruence(Matrix::from_json(p, Some(group))?));
        }
        if let Some(s) = v.get("stab") {
            return match s.as_i64() {
                Some(1) => Ok(CertificateStep::Stabilize(true)),
                Some(-1) => Ok(CertificateStep::Stabilize(false)),
                _ => Err(Error::parse("stab", "expected 1 or -1")),
            };
        }
        if let Some(p) = v.get("perm") {
            let arr = p.as_array().ok_or_else(|| Error::parse("perm", "expected an array"))?;
            let perm = arr
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse("perm", "expected indices")))
                .collect::<Result<Vec<_>>>()?;
            return Ok(CertificateStep::Permute(perm));
        }
        Err(Error::parse("step", "expected one of congr, stab, perm"))
    }
}

impl<C: Coeff> StableCongruenceCertificate<C> {
    /// Replays the steps from the start matrix.
    pub fn replay(&self) -> Result<HermitianMatrix<C>> {
        let mut cur = self.start.clone();
        for step in &self.steps {
            cur = step.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Sum of the stabilization signs.
    pub fn net_stabilization(&self) -> i64 {
        self.steps
            .iter()
            .map(|s| match s {
                CertificateStep::Stabilize(true) => 1,
                CertificateStep::Stabilize(false) => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.start.group().to_json(),
            "start": self.start.to_json(),
            "steps": self.steps.iter().map(CertificateStep::to_json).collect::<Vec<_>>(),
            "end": self.end.to_json(),
            "simple": self.simple,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let group = match v.get("group") {
            Some(g) => Some(Group::from_json(g)?),
            None => None,
        };
        let start_v = v.get("start").ok_or_else(|| Error::parse("certificate", "missing start"))?;
        let start = HermitianMatrix::from_json(start_v, group.as_ref())?;
        let group = group.unwrap_or_else(|| start.group().clone());
        let end_v = v.get("end").ok_or_else(|| Error::parse("certificate", "missing end"))?;
        let end = HermitianMatrix::from_json(end_v, Some(&group))?;
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("certificate", "missing steps array"))?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                CertificateStep::from_json(s, &group).map_err(|e| match e {
                    Error::Parse { location, message } => Error::parse(format!("steps[{i}].{location}"), message),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let simple = match v.get("simple") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| Error::parse("simple", "expected a boolean"))?,
        };
        Ok(StableCongruenceCertificate { start, steps, end, simple })
    }
}

/// Replays a certificate with exact arithmetic.
///
/// Fails if a step does not apply, a congruence matrix is not invertible over the
/// group ring, or the declared end matrix differs. For a certificate tagged simple,
/// every congruence matrix must also pass [`is_elementary`] with budget
/// `elementary_bound(n)`; an inconclusive search gives [`Verdict::Unknown`].
pub fn verify_certificate<C: Coeff>(
    cert: &StableCongruenceCertificate<C>,
    elementary_bound: impl Fn(usize) -> usize,
) -> Verdict {
    let mut cur = cert.start.clone();
    let mut unknown = None;
    for (i, step) in cert.steps.iter().enumerate() {
        if let CertificateStep::Congruence(p) = step {
            match invert(p) {
                Ok(_) => {}
                Err(Error::UnsupportedGroup(msg)) => {
                    unknown.get_or_insert(format!("step {i}: invertibility undecided: {msg}"));
                }
                Err(e) => return Verdict::Failed(format!("step {i}: congruence matrix is not invertible: {e}")),
            }
            if cert.simple {
                match is_elementary(p, elementary_bound(p.rows())) {
                    ElementaryVerdict::Elementary => {}
                    ElementaryVerdict::NotElementary => {
                        return Verdict::Failed(format!("step {i}: congruence matrix is not elementary"))
                    }
                    ElementaryVerdict::UnknownAtBound => {
                        unknown.get_or_insert(format!("step {i}: elementary search reached its bound"));
                    }
                }
            }
        }
        cur = match step.apply(&cur) {
            Ok(m) => m,
            Err(e) => return Verdict::Failed(format!("step {i}: {e}")),
        };
    }
    if cur != cert.end {
        return Verdict::Failed("replay does not reproduce the declared end matrix".into());
    }
    match unknown {
        Some(msg) => Verdict::Unknown(msg),
        None => Verdict::Verified,
    }
}

/// Certificate from `A ⊕ (-A)` to a unidiagonal matrix.
///
/// With `X = A^-1` the steps are
/// `[[I, I], [I, 0]]` giving `(0 A; A A)`, then `diag(I, X)` giving `(0 I; I X)`,
/// then `[[I, 0], [Y, I]]` giving `(0 I; I X + Y + conj(Y)^t) = (0 I; I D)` with
/// `D` diagonal in `{0, 1}`, a permutation into 2x2 blocks, and finally a local
/// diagonalization of each block, stabilizing the hyperbolic ones by `(1)`.
pub fn metabolize<C: Coeff>(
    a: &HermitianMatrix<C>,
    elementary_bound: impl Fn(usize) -> usize,
) -> Result<StableCongruenceCertificate<C>> {
    a.check_almost_even()?;
    let x = a.invert()?;
    let g = a.group().clone();
    let n = a.size();
    let one = GroupRingElement::<C>::one(&g);
    let start = a.block_sum(&a.neg())?;
    let mut steps = Vec::new();

    let mut p1 = Matrix::zeros(&g, 2 * n, 2 * n);
    for i in 0..n {
        p1.set(i, i, one.clone());
        p1.set(i, n + i, one.clone());
        p1.set(n + i, i, one.clone());
    }
    steps.push(CertificateStep::Congruence(p1));

    let p2 = Matrix::identity(&g, n).block_sum(x.matrix())?;
    steps.push(CertificateStep::Congruence(p2));

    let mut p3 = Matrix::identity(&g, 2 * n);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let (di, yi) = x.get(i, i).split_self_conjugate()?;
        d.push(di.is_one());
        p3.set(n + i, i, yi.neg_ref());
        for j in i + 1..n {
            p3.set(n + i, j, x.get(i, j).neg_ref());
        }
    }
    if !p3.is_identity() {
        steps.push(CertificateStep::Congruence(p3));
    }

    let perm: Vec<usize> = (0..n).flat_map(|i| [i, n + i]).collect();
    if perm.iter().enumerate().any(|(k, &p)| k != p) {
        steps.push(CertificateStep::Permute(perm));
    }

    let mut size = 2 * n;
    for (i, &odd) in d.iter().enumerate() {
        let (r, s) = (2 * i, 2 * i + 1);
        if odd {
            // (0 1; 1 1) -> diag(1, -1)
            let mut p = Matrix::identity(&g, size);
            p.set(r, r, GroupRingElement::zero(&g));
            p.set(r, s, one.clone());
            p.set(s, r, one.clone());
            p.set(s, s, one.neg_ref());
            steps.push(CertificateStep::Congruence(p));
        } else {
            // (0 1; 1 0) ⊕ (1) -> diag(1, 1, -1)
            steps.push(CertificateStep::Stabilize(true));
            let t = size;
            size += 1;
            let mut p = Matrix::identity(&g, size);
            let basis = [[1, 0, 1], [0, 1, -1], [1, -1, 1]];
            for (row, coeffs) in [r, s, t].iter().zip(basis) {
                for (col, c) in [r, s, t].iter().zip(coeffs) {
                    p.set(*row, *col, GroupRingElement::from_int(&g, <C as Coeff>::from_i64(c)));
                }
            }
            steps.push(CertificateStep::Congruence(p));
        }
    }

    let mut cert = StableCongruenceCertificate {
        end: start.clone(),
        start,
        steps,
        simple: false,
    };
    cert.end = cert.replay()?;
    debug_assert!(cert.end.is_unidiagonal());
    if !cert.end.is_unidiagonal() {
        return Err(Error::Domain("reduction did not reach a unidiagonal matrix".into()));
    }
    cert.simple = cert.steps.iter().all(|s| match s {
        CertificateStep::Congruence(p) => is_elementary(p, elementary_bound(p.rows())) == ElementaryVerdict::Elementary,
        _ => true,
    });
    Ok(cert)
}

/// [`metabolize`] with the default elementary budget `10 n^2`.
pub fn metabolize_default<C: Coeff>(a: &HermitianMatrix<C>) -> Result<StableCongruenceCertificate<C>> {
    metabolize(a, default_elementary_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupElement;
    use crate::scalar::Int;

    type H = HermitianMatrix<Int>;

    fn check(a: &H) -> StableCongruenceCertificate<Int> {
        let cert = metabolize_default(a).unwrap();
        assert_eq!(cert.start, a.block_sum(&a.neg()).unwrap());
        assert!(cert.end.is_unidiagonal());
        let verdict = verify_certificate(&cert, default_elementary_bound);
        assert!(verdict.is_verified() || !cert.simple, "{verdict:?}");
        let plain = StableCongruenceCertificate { simple: false, ..cert.clone() };
        assert!(verify_certificate(&plain, default_elementary_bound).is_verified());
        cert
    }

    #[test]
    fn trivial_group_examples() {
        let g = Group::Trivial;
        let one = check(&H::from_ints(&g, &[&[1]]).unwrap());
        assert!(one.end.size() == 2 || one.end.size() == 3);
        assert_eq!(one.end.unidiagonal_signature(), Some(one.net_stabilization()));
        let hyp = check(&H::from_ints(&g, &[&[0, 1], &[1, 0]]).unwrap());
        assert_eq!(hyp.end.unidiagonal_signature(), Some(hyp.net_stabilization()));
        check(&H::from_ints(&g, &[&[2, 1], &[1, 1]]).unwrap());
    }

    #[test]
    fn cyclic_examples() {
        let z2 = Group::Cyclic(2);
        check(&H::from_ints(&z2, &[&[1]]).unwrap());
        let z3 = Group::Cyclic(3);
        let gg = GroupRingElement::element(&z3, GroupElement::Cyclic(1));
        let m = Matrix::from_rows(
            &z3,
            vec![
                vec![GroupRingElement::zero(&z3), gg.clone()],
                vec![gg.involute(), GroupRingElement::one(&z3)],
            ],
        )
        .unwrap();
        check(&H::new(m).unwrap());
    }

    #[test]
    fn singular_rejected() {
        let g = Group::Trivial;
        assert_eq!(metabolize_default(&H::from_ints(&g, &[&[2]]).unwrap()).unwrap_err(), Error::Singular);
        let z2 = Group::Cyclic(2);
        let t = H::new(Matrix::diagonal(&z2, vec![GroupRingElement::element(&z2, GroupElement::Cyclic(1))]));
        assert!(t.is_err() || matches!(metabolize_default(&t.unwrap()), Err(Error::NotAlmostEven { .. })));
    }

    #[test]
    fn verify_edge_cases() {
        let g = Group::Trivial;
        let a = H::from_ints(&g, &[&[1, 0], &[0, -1]]).unwrap();
        let empty = StableCongruenceCertificate { start: a.clone(), steps: vec![], end: a.clone(), simple: true };
        assert!(verify_certificate(&empty, default_elementary_bound).is_verified());

        let mut cert = metabolize_default(&H::from_ints(&g, &[&[0, 1], &[1, 1]]).unwrap()).unwrap();
        let json = cert.to_json();
        assert_eq!(StableCongruenceCertificate::<Int>::from_json(&json).unwrap(), cert);
        if let Some(CertificateStep::Congruence(p)) = cert.steps.first_mut() {
            let v = p.get(0, 0) + &GroupRingElement::one(&g);
            p.set(0, 0, v);
        }
        assert!(matches!(verify_certificate(&cert, default_elementary_bound), Verdict::Failed(_)));

        let singular = StableCongruenceCertificate {
            start: H::from_ints(&g, &[&[0]]).unwrap(),
            steps: vec![CertificateStep::Congruence(Matrix::from_ints(&g, &[&[2]]))],
            end: H::from_ints(&g, &[&[0]]).unwrap(),
            simple: false,
        };
        assert!(matches!(verify_certificate(&singular, default_elementary_bound), Verdict::Failed(_)));
    }
}
