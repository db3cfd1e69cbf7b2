//! Removal of linearly dependent equality constraints.

use std::collections::HashMap;

use super::SparseSym;

/// Indices of a maximal linearly independent subset of `rows`, ascending.
///
/// Rows that share no matrix position are orthogonal, so the Gram matrix is
/// block diagonal over connected components of the "shares a position"
/// relation; each block is factored with a pivoted Cholesky.
pub(crate) fn independent_rows(rows: &[&SparseSym]) -> Vec<usize> {
    let m = rows.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    let mut coeffs: Vec<HashMap<(usize, usize), f64>> = Vec::with_capacity(m);
    for (k, row) in rows.iter().enumerate() {
        let mut c: HashMap<(usize, usize), f64> = HashMap::new();
        for &(i, j, v) in &row.entries {
            // Off-diagonal positions appear twice in the full matrix.
            let w = if i == j { 1.0 } else { std::f64::consts::SQRT_2 };
            *c.entry((i, j)).or_insert(0.0) += v * w;
        }
        c.retain(|_, v| *v != 0.0);
        for &pos in c.keys() {
            match owner.get(&pos) {
                Some(&other) => {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, other));
                    parent[a] = b;
                }
                None => {
                    owner.insert(pos, k);
                }
            }
        }
        coeffs.push(c);
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..m {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(k);
    }
    let mut keep = Vec::with_capacity(m);
    for members in groups.values() {
        keep.extend(pivoted_cholesky_keep(members, &coeffs));
    }
    keep.sort_unstable();
    keep
}

fn pivoted_cholesky_keep(members: &[usize], coeffs: &[HashMap<(usize, usize), f64>]) -> Vec<usize> {
    let n = members.len();
    let dot = |a: usize, b: usize| -> f64 {
        let (ca, cb) = (&coeffs[members[a]], &coeffs[members[b]]);
        let (small, large) = if ca.len() <= cb.len() { (ca, cb) } else { (cb, ca) };
        small
            .iter()
            .map(|(pos, v)| large.get(pos).map_or(0.0, |w| v * w))
            .sum()
    };
    let mut g = vec![0.0; n * n];
    for a in 0..n {
        for b in a..n {
            let v = dot(a, b);
            g[a * n + b] = v;
            g[b * n + a] = v;
        }
    }
    let scale = (0..n).map(|a| g[a * n + a]).fold(0.0, f64::max);
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);

    // Right-looking pivoted Cholesky; `l` holds the factor columns computed so far.
    let mut diag: Vec<f64> = (0..n).map(|a| g[a * n + a]).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut l: Vec<Vec<f64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let pivot = (0..n)
            .filter(|&a| !used[a])
            .max_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(b.cmp(&a)));
        let Some(p) = pivot else { break };
        if diag[p] <= tol {
            break;
        }
        used[p] = true;
        let root = diag[p].sqrt();
        let col: Vec<f64> = (0..n)
            .map(|a| {
                if used[a] && a != p {
                    0.0
                } else {
                    let s: f64 = l.iter().map(|c| c[a] * c[p]).sum();
                    (g[a * n + p] - s) / root
                }
            })
            .collect();
        for a in 0..n {
            if !used[a] {
                diag[a] -= col[a] * col[a];
            }
        }
        l.push(col);
        chosen.push(members[p]);
    }
    chosen
}
