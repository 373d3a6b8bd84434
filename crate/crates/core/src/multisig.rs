//! Signatures of a Hermitian matrix over `Z[Z/m]` at every character.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::hermitian::HermitianMatrix;
use crate::scalar::Coeff;

/// `sigma[j]` is the signature at `g -> exp(2 pi i j / m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultisignatureProfile {
    pub sigma: Vec<i64>,
}

impl MultisignatureProfile {
    /// `(sigma_j - sigma_0)` for `j >= 1`.
    pub fn reduced(&self) -> Vec<i64> {
        self.sigma.iter().skip(1).map(|s| s - self.sigma[0]).collect()
    }
}

/// Real symmetric `2n x 2n` embedding `[[Re, -Im], [Im, Re]]` of the evaluation of
/// `a` at the `j`-th character. Each eigenvalue of the complex matrix appears twice.
pub fn evaluate_at_character<F: Float, C: Coeff>(a: &HermitianMatrix<C>, m: u64, j: u64) -> Vec<Vec<F>> {
    let n = a.size();
    let mut out = vec![vec![F::zero(); 2 * n]; 2 * n];
    let tau = F::from(std::f64::consts::TAU).unwrap();
    for r in 0..n {
        for c in 0..n {
            let (mut re, mut im) = (F::zero(), F::zero());
            for (g, coeff) in a.get(r, c).terms() {
                let k = match g {
                    GroupElement::Cyclic(k) => *k,
                    _ => 0,
                };
                let angle = tau * F::from((j * k) % m).unwrap() / F::from(m).unwrap();
                let x = F::from(coeff.to_f64_lossy()).unwrap();
                re = re + x * angle.cos();
                im = im + x * angle.sin();
            }
            out[r][c] = re;
            out[n + r][n + c] = re;
            out[r][n + c] = -im;
            out[n + r][c] = im;
        }
    }
    out
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues<F: Float>(mut a: Vec<Vec<F>>) -> Vec<F> {
    let n = a.len();
    let eps = F::epsilon();
    for _sweep in 0..100 {
        let off: F = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(F::zero(), |s, (i, j)| s + a[i][j] * a[i][j]);
        let diag: F = (0..n).fold(F::zero(), |s, i| s + a[i][i] * a[i][i]);
        if off <= eps * eps * (diag + off) || off == F::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == F::zero() {
                    continue;
                }
                let two = F::one() + F::one();
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Signature of a real symmetric matrix after scaling to unit max-norm.
/// Fails if an eigenvalue lies within `tau` of zero.
pub fn signature<F: Float>(mut a: Vec<Vec<F>>, tau: F) -> Result<i64> {
    let scale = a.iter().flatten().fold(F::zero(), |m, x| m.max(x.abs()));
    if a.is_empty() {
        return Ok(0);
    }
    if scale == F::zero() {
        return Err(Error::Degenerate("zero matrix".into()));
    }
    for x in a.iter_mut().flatten() {
        *x = *x / scale;
    }
    let mut sig = 0;
    for lambda in symmetric_eigenvalues(a) {
        if lambda.abs() < tau {
            return Err(Error::Degenerate(format!(
                "eigenvalue {:e} within tolerance of zero",
                lambda.to_f64().unwrap_or(f64::NAN)
            )));
        }
        sig += if lambda > F::zero() { 1 } else { -1 };
    }
    Ok(sig)
}

/// Signatures at all `m` characters of `Z/m`; the trivial group counts as `m = 1`.
pub fn multisignature<F: Float, C: Coeff>(a: &HermitianMatrix<C>, tau: F) -> Result<MultisignatureProfile> {
    let m = match a.group() {
        Group::Trivial => 1,
        Group::Cyclic(m) => *m,
        other => {
            return Err(Error::UnsupportedGroup(format!("multisignature needs a cyclic group, got {other}")));
        }
    };
    let sigma = (0..m)
        .map(|j| signature(evaluate_at_character::<F, C>(a, m, j), tau).map(|s| s / 2))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultisignatureProfile { sigma })
}

/// Default eigenvalue tolerance.
pub const DEFAULT_TAU: f64 = 1e-9;
