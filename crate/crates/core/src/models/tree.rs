//! CART-style binary decision tree minimizing weighted Gini impurity.
//!
//! Split candidates are midpoints between sorted distinct values; instances
//! with `x[feature] <= threshold` go left. Leaves store the positive-class
//! fraction of their training samples.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub seed: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: 8,
            min_samples_split: 10,
            min_samples_leaf: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        positive_fraction: f64,
        samples: usize,
    },
}

/// Trained decision tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
}

impl DecisionTreeModel {
    pub fn risk_raw(&self, instance: &[f64]) -> f64 {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf {
                    positive_fraction, ..
                } => return *positive_fraction,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if instance[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

struct Builder<'a> {
    ds: &'a Dataset,
    config: &'a TreeConfig,
    /// Number of features examined per split; `None` means all.
    max_features: Option<usize>,
    rng: ChaCha8Rng,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn leaf(&mut self, indices: &[usize]) -> usize {
        let pos = indices.iter().filter(|&&i| self.ds.label(i) == 1).count();
        self.nodes.push(TreeNode::Leaf {
            positive_fraction: pos as f64 / indices.len() as f64,
            samples: indices.len(),
        });
        self.nodes.len() - 1
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let k = self.ds.n_features();
        match self.max_features {
            None => (0..k).collect(),
            Some(m) => {
                let mut all: Vec<usize> = (0..k).collect();
                all.shuffle(&mut self.rng);
                let mut picked: Vec<usize> = all.into_iter().take(m.clamp(1, k)).collect();
                picked.sort_unstable();
                picked
            }
        }
    }

    fn best_split(&mut self, indices: &[usize]) -> Option<(usize, f64)> {
        let n = indices.len();
        let total_pos = indices.iter().filter(|&&i| self.ds.label(i) == 1).count();
        let mut best: Option<(f64, usize, f64)> = None;
        for feature in self.candidate_features() {
            let mut sorted: Vec<usize> = indices.to_vec();
            sorted.sort_by(|&a, &b| {
                self.ds.row(a)[feature]
                    .partial_cmp(&self.ds.row(b)[feature])
                    .unwrap()
            });
            let mut left_pos = 0usize;
            for cut in 0..n - 1 {
                if self.ds.label(sorted[cut]) == 1 {
                    left_pos += 1;
                }
                let v_lo = self.ds.row(sorted[cut])[feature];
                let v_hi = self.ds.row(sorted[cut + 1])[feature];
                if v_lo == v_hi {
                    continue;
                }
                let n_left = cut + 1;
                let n_right = n - n_left;
                if n_left < self.config.min_samples_leaf || n_right < self.config.min_samples_leaf
                {
                    continue;
                }
                let score = (n_left as f64 * gini(left_pos, n_left)
                    + n_right as f64 * gini(total_pos - left_pos, n_right))
                    / n as f64;
                if best.map_or(true, |(b, _, _)| score < b) {
                    let mut threshold = (v_lo + v_hi) / 2.0;
                    if threshold >= v_hi {
                        threshold = v_lo; // midpoint rounded into the upper value
                    }
                    best = Some((score, feature, threshold));
                }
            }
        }
        best.map(|(_, feature, threshold)| (feature, threshold))
    }

    fn build(&mut self, indices: &[usize], depth: usize) -> usize {
        let n = indices.len();
        let pos = indices.iter().filter(|&&i| self.ds.label(i) == 1).count();
        if depth >= self.config.max_depth
            || n < self.config.min_samples_split
            || pos == 0
            || pos == n
        {
            return self.leaf(indices);
        }
        let Some((feature, threshold)) = self.best_split(indices) else {
            return self.leaf(indices);
        };
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.ds.row(i)[feature] <= threshold);
        // Reserve the split slot before recursing so node 0 stays the root.
        let at = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            positive_fraction: 0.0,
            samples: 0,
        });
        let left = self.build(&left_idx, depth + 1);
        let right = self.build(&right_idx, depth + 1);
        self.nodes[at] = TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }
}

/// Trains a decision tree on all rows of the dataset.
pub fn train_tree(train: &Dataset, config: &TreeConfig) -> Result<DecisionTreeModel> {
    if train.n_rows() == 0 {
        return Err(Error::Model("empty training set".into()));
    }
    let indices: Vec<usize> = (0..train.n_rows()).collect();
    Ok(train_tree_on(train, &indices, config, None))
}

/// Trainer entry point shared with the forest: explicit row subset and
/// optional per-split feature subsampling.
pub(crate) fn train_tree_on(
    ds: &Dataset,
    indices: &[usize],
    config: &TreeConfig,
    max_features: Option<usize>,
) -> DecisionTreeModel {
    let mut builder = Builder {
        ds,
        config,
        max_features,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        nodes: Vec::new(),
    };
    let root = builder.build(indices, 0);
    debug_assert_eq!(root, 0);
    DecisionTreeModel {
        nodes: builder.nodes,
        n_features: ds.n_features(),
    }
}
