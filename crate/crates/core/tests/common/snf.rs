//! Dense Smith normal form over `i128` by repeated gcd pivoting.

/// Nonzero diagonal of the Smith form, in divisibility order.
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].abs())
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = a[r][t] / a[t][t];
            if q != 0 {
                for c in t..cols {
                    a[r][c] -= q * a[t][c];
                }
            }
            clean &= a[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = a[t][c] / a[t][t];
            if q != 0 {
                for r in t..rows {
                    a[r][c] -= q * a[r][t];
                }
            }
            clean &= a[t][c] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let p = a[t][t];
        if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| a[r][c] % p != 0)) {
            for c in t..cols {
                a[t][c] += a[r][c];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}
