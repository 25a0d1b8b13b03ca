use crate::error::{Error, Result};
use crate::graph::NodeId;

fn check(scores: &[f64], labels: &[bool]) -> Result<usize> {
    if scores.len() != labels.len() {
        return Err(Error::invalid("scores and labels differ in length"));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("scores must be finite"));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 {
        return Err(Error::UndefinedMetric("no positive pairs".into()));
    }
    Ok(positives)
}

/// Average precision as a percentage. Pairs with equal scores form one
/// threshold step, so the value does not depend on the order of ties.
pub fn pr_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let positives = check(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let (mut tp, mut seen, mut ap) = (0usize, 0usize, 0.0);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let mut group_tp = 0;
        while i < order.len() && scores[order[i]] == s {
            group_tp += usize::from(labels[order[i]]);
            seen += 1;
            i += 1;
        }
        if group_tp > 0 {
            tp += group_tp;
            ap += group_tp as f64 / positives as f64 * (tp as f64 / seen as f64);
        }
    }
    Ok(100.0 * ap)
}

/// Precision and recall (percent) when the top `k = #positives` pairs are
/// predicted positive. Ties are broken by ascending `(source, target)`.
pub fn precision_recall_at_prevalence(keys: &[(NodeId, NodeId)], scores: &[f64], labels: &[bool]) -> Result<(f64, f64)> {
    let k = check(scores, labels)?;
    if keys.len() != scores.len() {
        return Err(Error::invalid("keys and scores differ in length"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(keys[a].cmp(&keys[b])));
    let tp = order[..k].iter().filter(|&&i| labels[i]).count();
    let v = 100.0 * tp as f64 / k as f64;
    Ok((v, v))
}

/// Raw precision and recall (percent) of a 0/1 predictor. Precision is 0 when
/// nothing is predicted positive.
pub fn binary_precision_recall(predicted: &[bool], labels: &[bool]) -> Result<(f64, f64)> {
    if predicted.len() != labels.len() {
        return Err(Error::invalid("predictions and labels differ in length"));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 {
        return Err(Error::UndefinedMetric("no positive pairs".into()));
    }
    let tp = predicted.iter().zip(labels).filter(|(&p, &l)| p && l).count();
    let pp = predicted.iter().filter(|&&p| p).count();
    let precision = if pp == 0 { 0.0 } else { 100.0 * tp as f64 / pp as f64 };
    Ok((precision, 100.0 * tp as f64 / positives as f64))
}

/// Mean and sample standard deviation; a single value has deviation 0.
pub fn mean_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}
