//! Accuracy-weighted majority voting over three classifiers, the "any
//! classifier is right" union rule, and top-k ranking.

use thiserror::Error;

use crate::mlp::ClassScores;

/// Number of fused classifiers.
pub const CLASSIFIERS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("accuracies must be finite and non-negative, got {0:?}")]
    NegativeAccuracy([f64; CLASSIFIERS]),
    #[error("all classifier accuracies are zero")]
    AllZeroAccuracies,
    #[error("score vectors have different lengths {0:?}")]
    LengthMismatch(Vec<usize>),
    #[error("k = {k} outside 1..={classes}")]
    BadK { k: usize, classes: usize },
    #[error("label {label} out of range for {classes} classes")]
    BadLabel { label: usize, classes: usize },
}

/// Fusion weights ω_k = d_k / Σ d_k, kept next to the accuracies they came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleWeights {
    weights: [f64; CLASSIFIERS],
    accuracies: [f64; CLASSIFIERS],
}

impl EnsembleWeights {
    pub fn weights(&self) -> [f64; CLASSIFIERS] {
        self.weights
    }

    pub fn accuracies(&self) -> [f64; CLASSIFIERS] {
        self.accuracies
    }

    /// Equal weights, for when no accuracy information is usable.
    pub fn uniform() -> Self {
        Self { weights: [1.0 / 3.0; CLASSIFIERS], accuracies: [0.0; CLASSIFIERS] }
    }
}

pub fn derive_weights(accuracies: [f64; CLASSIFIERS]) -> Result<EnsembleWeights, EnsembleError> {
    if accuracies.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(EnsembleError::NegativeAccuracy(accuracies));
    }
    let total: f64 = accuracies.iter().sum();
    if total <= 0.0 {
        return Err(EnsembleError::AllZeroAccuracies);
    }
    Ok(EnsembleWeights { weights: accuracies.map(|d| d / total), accuracies })
}

/// Fused scores with the winner and the complete class ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedDecision {
    scores: Vec<f64>,
    ranking: Vec<usize>,
}

impl CombinedDecision {
    /// Ranks arbitrary per-class scores: descending score, ascending index on ties.
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let mut ranking: Vec<usize> = (0..scores.len()).collect();
        ranking.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        Self { scores, ranking }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn winner(&self) -> usize {
        self.ranking[0]
    }

    pub fn classes(&self) -> usize {
        self.scores.len()
    }

    /// Position of `class` in the ranking (0 = winner).
    pub fn rank_of(&self, class: usize) -> Option<usize> {
        self.ranking.iter().position(|&c| c == class)
    }
}

fn common_length(scores: &[&ClassScores; CLASSIFIERS]) -> Result<usize, EnsembleError> {
    let lens: Vec<usize> = scores.iter().map(|s| s.len()).collect();
    if lens.iter().any(|&l| l != lens[0]) || lens[0] == 0 {
        return Err(EnsembleError::LengthMismatch(lens));
    }
    Ok(lens[0])
}

/// d_i = Σ_k ω_k · O_ik, ranked.
pub fn combine(scores: [&ClassScores; CLASSIFIERS], w: &EnsembleWeights) -> Result<CombinedDecision, EnsembleError> {
    let m = common_length(&scores)?;
    let fused = (0..m)
        .map(|i| {
            scores
                .iter()
                .zip(w.weights)
                .map(|(s, wk)| wk * s.as_slice()[i])
                .sum::<f64>()
        })
        .collect();
    Ok(CombinedDecision::from_scores(fused))
}

/// The `k` best classes, best first.
pub fn top_k(dec: &CombinedDecision, k: usize) -> Result<&[usize], EnsembleError> {
    if k == 0 || k > dec.classes() {
        return Err(EnsembleError::BadK { k, classes: dec.classes() });
    }
    Ok(&dec.ranking[..k])
}

/// Whether at least one classifier puts `label` first.
pub fn union_top1_hit(scores: [&ClassScores; CLASSIFIERS], label: usize) -> Result<bool, EnsembleError> {
    let m = common_length(&scores)?;
    if label >= m {
        return Err(EnsembleError::BadLabel { label, classes: m });
    }
    Ok(scores.iter().any(|s| s.argmax() == label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[f64]) -> ClassScores {
        ClassScores::new(v.to_vec())
    }

    #[test]
    fn weights_from_reported_accuracies() {
        // chain code, intersection, shadow
        let w = derive_weights([64.90, 36.71, 60.59]).unwrap().weights();
        let expected = [0.4001, 0.2263, 0.3735];
        for k in 0..3 {
            assert!((w[k] - expected[k]).abs() < 1e-4, "{w:?}");
        }
        for (wk, stated) in w.iter().zip([0.4, 0.225, 0.375]) {
            assert!((wk - stated).abs() <= 0.002);
        }
    }

    #[test]
    fn symmetric_and_degenerate_weights() {
        let w = derive_weights([50.0, 50.0, 50.0]).unwrap().weights();
        assert!(w.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(derive_weights([1.0, 0.0, 0.0]).unwrap().weights(), [1.0, 0.0, 0.0]);
        assert_eq!(derive_weights([0.0; 3]), Err(EnsembleError::AllZeroAccuracies));
        assert!(matches!(derive_weights([-1.0, 2.0, 3.0]), Err(EnsembleError::NegativeAccuracy(_))));
    }

    #[test]
    fn hand_arithmetic_fusion() {
        let (a, b, c) = (cs(&[0.9, 0.1, 0.2]), cs(&[0.2, 0.8, 0.1]), cs(&[0.3, 0.2, 0.7]));
        let w = EnsembleWeights { weights: [0.4, 0.225, 0.375], accuracies: [0.0; 3] };
        let d = combine([&a, &b, &c], &w).unwrap();
        for (got, want) in d.scores().iter().zip([0.5175, 0.295, 0.365]) {
            assert!((got - want).abs() < 1e-12, "{:?}", d.scores());
        }
        assert_eq!(d.winner(), 0);
        assert_eq!(d.ranking(), &[0, 2, 1]);
    }

    #[test]
    fn identical_scores_pass_through() {
        let s = cs(&[0.3, 0.6, 0.1, 0.6]);
        let w = derive_weights([10.0, 20.0, 70.0]).unwrap();
        let d = combine([&s, &s, &s], &w).unwrap();
        for (a, b) in d.scores().iter().zip(s.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(d.winner(), s.argmax());
    }

    #[test]
    fn one_hot_weights_select_first_classifier() {
        let (a, b, c) = (cs(&[0.1, 0.7]), cs(&[0.9, 0.2]), cs(&[0.5, 0.5]));
        let d = combine([&a, &b, &c], &derive_weights([1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(d.scores(), a.as_slice());
    }

    #[test]
    fn length_mismatch() {
        let (a, b) = (cs(&[0.1, 0.7]), cs(&[0.9, 0.2, 0.3]));
        let w = EnsembleWeights::uniform();
        assert!(matches!(combine([&a, &b, &a], &w), Err(EnsembleError::LengthMismatch(_))));
        assert!(matches!(union_top1_hit([&a, &b, &a], 0), Err(EnsembleError::LengthMismatch(_))));
    }

    #[test]
    fn top_k_rules() {
        let d = CombinedDecision::from_scores(vec![0.1, 0.2, 0.5, 0.3, 0.0, 0.5]);
        assert_eq!(top_k(&d, 1).unwrap(), &[2]);
        assert_eq!(top_k(&d, 2).unwrap(), &[2, 5]);
        assert_eq!(top_k(&d, 6).unwrap(), &[2, 5, 3, 1, 0, 4]);
        assert_eq!(top_k(&d, 0), Err(EnsembleError::BadK { k: 0, classes: 6 }));
        assert_eq!(top_k(&d, 7), Err(EnsembleError::BadK { k: 7, classes: 6 }));
        assert_eq!(d.rank_of(3), Some(2));
    }

    #[test]
    fn union_rule() {
        let (a, b, c) = (cs(&[0.9, 0.1, 0.0]), cs(&[0.1, 0.9, 0.0]), cs(&[0.8, 0.1, 0.1]));
        assert!(union_top1_hit([&a, &b, &c], 1).unwrap());
        assert!(!union_top1_hit([&a, &b, &c], 2).unwrap());
        assert!(union_top1_hit([&a, &a, &a], 0).unwrap());
        assert!(matches!(union_top1_hit([&a, &b, &c], 3), Err(EnsembleError::BadLabel { .. })));
    }
}
