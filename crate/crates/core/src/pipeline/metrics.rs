use super::PipelineError;
use crate::ensemble::CombinedDecision;

/// Percentage of samples whose label is among the top `k` classes.
pub fn topk_accuracy(decisions: &[CombinedDecision], labels: &[usize], k: usize) -> Result<f64, PipelineError> {
    if decisions.len() != labels.len() {
        return Err(PipelineError::LengthMismatch(decisions.len(), labels.len()));
    }
    if decisions.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for (d, &label) in decisions.iter().zip(labels) {
        if crate::ensemble::top_k(d, k)?.contains(&label) {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / decisions.len() as f64)
}

/// Rows: true class; columns: winning class.
pub fn confusion_matrix(decisions: &[CombinedDecision], labels: &[usize], classes: usize) -> Result<Vec<Vec<usize>>, PipelineError> {
    if decisions.len() != labels.len() {
        return Err(PipelineError::LengthMismatch(decisions.len(), labels.len()));
    }
    let mut m = vec![vec![0usize; classes]; classes];
    for (d, &label) in decisions.iter().zip(labels) {
        m[label][d.winner()] += 1;
    }
    Ok(m)
}
