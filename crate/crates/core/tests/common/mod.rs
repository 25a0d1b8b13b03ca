//! Reference implementations used as test oracles. They favor directness
//! over speed and share no code paths with the library beyond input types.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap};

use anchorlink::DocumentNetwork;
use rand::Rng;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Personalized PageRank as the solution of `(I - d Pᵀ) x = (1 - d) e_seed`,
/// where dangling rows of `P` point at the seed.
pub fn dense_ppr(net: &DocumentNetwork, seed: usize, damping: f64) -> Vec<f64> {
    let n = net.node_count();
    let mut p = vec![vec![0.0; n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        let out = net.out_edges(i);
        if out.is_empty() {
            row[seed] = 1.0;
        } else {
            for e in out {
                row[e.target] += 1.0 / out.len() as f64;
            }
        }
    }
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = f64::from(u8::from(i == j)) - damping * p[j][i];
        }
    }
    let mut b = vec![0.0; n];
    b[seed] = 1.0 - damping;
    gauss_solve(a, b)
}

/// Personalized PageRank by dense power iteration until successive iterates
/// agree to 1e-15 in L1.
pub fn dense_power_ppr(net: &DocumentNetwork, seed: usize, damping: f64) -> Vec<f64> {
    let n = net.node_count();
    let mut x = vec![0.0; n];
    x[seed] = 1.0;
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        next[seed] = 1.0 - damping;
        for (i, xi) in x.iter().enumerate() {
            let out = net.out_edges(i);
            if out.is_empty() {
                next[seed] += damping * xi;
            } else {
                for e in out {
                    next[e.target] += damping * xi / out.len() as f64;
                }
            }
        }
        let delta: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    x
}

/// One-sided (Hestenes) Jacobi SVD. Returns singular values in descending
/// order with left and right singular vectors as columns (`m × r`, `n × r`,
/// `r = min(m, n)`).
pub fn jacobi_svd(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let transpose = a.len() < a[0].len();
    let mut w: Vec<Vec<f64>> = if transpose {
        (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
    } else {
        a.to_vec()
    };
    let (m, n) = (w.len(), w[0].len());
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = (0..m).map(|i| w[i][p] * w[i][p]).sum();
                let beta: f64 = (0..m).map(|i| w[i][q] * w[i][q]).sum();
                let gamma: f64 = (0..m).map(|i| w[i][p] * w[i][q]).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in w.iter_mut().chain(v.iter_mut()) {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| (0..m).map(|i| w[i][j] * w[i][j]).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    order.truncate(m.min(n));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let left: Vec<Vec<f64>> = (0..m)
        .map(|i| order.iter().map(|&j| if norms[j] > 0.0 { w[i][j] / norms[j] } else { 0.0 }).collect())
        .collect();
    let right: Vec<Vec<f64>> = (0..n).map(|i| order.iter().map(|&j| v[i][j]).collect()).collect();
    if transpose {
        (sigma, right, left)
    } else {
        (sigma, left, right)
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues in descending order with eigenvectors as columns.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
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
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (vals, vecs)
}

/// Singular values (descending) and right singular vectors (columns) from
/// the eigen-decomposition of `AᵀA`.
pub fn dense_svd(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a[0].len();
    let mut ata = vec![vec![0.0; n]; n];
    for row in a {
        for i in 0..n {
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let (vals, vecs) = jacobi_eigen(ata);
    (vals.into_iter().map(|l| l.max(0.0).sqrt()).collect(), vecs)
}

/// Solves the normal equations `XᵀX b = Xᵀy`.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    gauss_solve(xtx, xty)
}

/// Lowercased alphanumeric tokens with their byte spans.
pub fn naive_tokens(text: &str) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let mut cur: Option<usize> = None;
    let mut iter = text.char_indices().peekable();
    while let Some((i, ch)) = iter.next() {
        let end = iter.peek().map_or(text.len(), |&(j, _)| j);
        if ch.is_alphanumeric() {
            cur.get_or_insert(i);
            if end == text.len() || !text[end..].chars().next().unwrap().is_alphanumeric() {
                let s = cur.take().unwrap();
                out.push((text[s..end].to_lowercase(), s, end));
            }
        }
    }
    out
}

/// `target → (pattern, byte span)` matches.
pub type ScanResult = BTreeMap<usize, Vec<(String, (usize, usize))>>;

/// Brute-force candidate scan: for every (raw pattern, target) entry, every
/// token window equal to the pattern's tokens is a match. Returns
/// `target → sorted (pattern, span)` with self matches removed.
pub fn naive_scan(
    entries: &[(String, usize)],
    source: usize,
    text: &str,
) -> ScanResult {
    let toks = naive_tokens(text);
    let mut out = ScanResult::new();
    let mut seen: HashMap<(usize, String, usize, usize), ()> = HashMap::new();
    for (raw, target) in entries {
        if *target == source {
            continue;
        }
        let pat: Vec<String> = naive_tokens(raw).into_iter().map(|t| t.0).collect();
        if pat.is_empty() || pat.len() > toks.len() {
            continue;
        }
        let key = pat.join(" ");
        for i in 0..=toks.len() - pat.len() {
            if (0..pat.len()).all(|k| toks[i + k].0 == pat[k]) {
                let span = (toks[i].1, toks[i + pat.len() - 1].2);
                if seen.insert((*target, key.clone(), span.0, span.1), ()).is_none() {
                    out.entry(*target).or_default().push((key.clone(), span));
                }
            }
        }
    }
    for v in out.values_mut() {
        v.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    }
    out
}

/// Fisher–Yates over a virtual array stored sparsely; consumes the same
/// random draws as a dense partial shuffle.
pub fn reference_sample(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut moved: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(k);
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        let vi = *moved.get(&i).unwrap_or(&i);
        let vj = *moved.get(&j).unwrap_or(&j);
        moved.insert(j, vi);
        moved.insert(i, vj);
        out.push(vj);
    }
    out
}

/// Area under the step precision-recall curve, recomputing precision and
/// recall from scratch at every distinct score threshold.
pub fn brute_force_ap(scores: &[f64], labels: &[bool]) -> f64 {
    let positives = labels.iter().filter(|&&l| l).count() as f64;
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let (mut prev_recall, mut ap) = (0.0, 0.0);
    for t in thresholds {
        let predicted: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] >= t).collect();
        let tp = predicted.iter().filter(|&&i| labels[i]).count() as f64;
        let recall = tp / positives;
        ap += (recall - prev_recall) * tp / predicted.len() as f64;
        prev_recall = recall;
    }
    100.0 * ap
}

/// Random directed graph without self-loops; every edge gets anchor "a".
pub fn random_network(n: usize, edge_prob: f64, rng: &mut impl Rng) -> DocumentNetwork {
    let mut net = DocumentNetwork::new(n);
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(edge_prob) {
                net.add_link(s, t, "a").unwrap();
            }
        }
    }
    net
}
