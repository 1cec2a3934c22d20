use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PipelineError;

/// Three disjoint parts of the dataset, each a list of sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    pub parts: [Vec<usize>; 3],
}

/// Which parts train and which part tests in one rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation {
    pub train: [usize; 2],
    pub test: usize,
}

/// Parts 1+2 → test 3; parts 1+3 → test 2; parts 2+3 → test 1.
pub const ROTATIONS: [Rotation; 3] = [
    Rotation { train: [0, 1], test: 2 },
    Rotation { train: [0, 2], test: 1 },
    Rotation { train: [1, 2], test: 0 },
];

impl FoldSplit {
    pub fn train_indices(&self, rotation: Rotation) -> Vec<usize> {
        rotation.train.iter().flat_map(|&p| self.parts[p].iter().copied()).collect()
    }

    pub fn test_indices(&self, rotation: Rotation) -> &[usize] {
        &self.parts[rotation.test]
    }
}

/// Stratified split: each class is shuffled with the seed and dealt
/// round-robin into the three parts, the dealer position carrying over from
/// one class to the next so part sizes stay within one of each other.
///
/// `labels[i]` is the class of sample `i`.
pub fn three_fold_split(labels: &[usize], seed: u64) -> Result<FoldSplit, PipelineError> {
    if labels.len() < 3 {
        return Err(PipelineError::TooFewSamples(labels.len()));
    }
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<usize>; 3] = Default::default();
    let mut dealer = 0;
    for members in by_class.values_mut() {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            parts[dealer].push(i);
            dealer = (dealer + 1) % 3;
        }
    }
    Ok(FoldSplit { parts })
}
