//! Binary probabilistic classifiers, scoring, cross-validation, and
//! hyperparameter search.
//!
//! Every trained model exposes [`ProbabilityModel`]: a deterministic
//! positive-class probability in [0, 1] and classification at the 0.5
//! threshold (`risk >= 0.5` is positive).

mod forest;
mod logreg;
mod tree;

pub use forest::{train_forest, ForestConfig, MaxFeatures, RandomForestModel};
pub use logreg::{train_logreg, LogRegConfig, LogisticRegressionModel};
pub use tree::{train_tree, DecisionTreeModel, TreeConfig, TreeNode};

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numeric::average_ranks;

/// Predicted or actual class of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Positive,
    Negative,
}

impl Class {
    pub fn from_risk(risk: f64) -> Self {
        if risk >= 0.5 {
            Class::Positive
        } else {
            Class::Negative
        }
    }

    pub fn from_label(label: u8) -> Self {
        if label == 1 {
            Class::Positive
        } else {
            Class::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Class::Positive
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Positive => write!(f, "positive"),
            Class::Negative => write!(f, "negative"),
        }
    }
}

/// Prediction oracle: maps an instance to its positive-class probability.
pub trait ProbabilityModel: Send + Sync {
    fn risk(&self, instance: &[f64]) -> f64;

    fn classify(&self, instance: &[f64]) -> Class {
        Class::from_risk(self.risk(instance))
    }
}

impl ProbabilityModel for LogisticRegressionModel {
    fn risk(&self, instance: &[f64]) -> f64 {
        self.risk_raw(instance)
    }
}

impl ProbabilityModel for DecisionTreeModel {
    fn risk(&self, instance: &[f64]) -> f64 {
        self.risk_raw(instance)
    }
}

impl ProbabilityModel for RandomForestModel {
    fn risk(&self, instance: &[f64]) -> f64 {
        self.risk_raw(instance)
    }
}

/// A trained model of any supported kind, serializable as a versioned JSON
/// document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    LogisticRegression(LogisticRegressionModel),
    DecisionTree(DecisionTreeModel),
    RandomForest(RandomForestModel),
}

const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    version: u32,
    #[serde(flatten)]
    model: Model,
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::LogisticRegression(_) => "logistic_regression",
            Model::DecisionTree(_) => "decision_tree",
            Model::RandomForest(_) => "random_forest",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelDocument {
            version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "unsupported model document version {}",
                doc.version
            )));
        }
        Ok(doc.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Model> {
        Model::from_json(&std::fs::read_to_string(path)?)
    }
}

impl ProbabilityModel for Model {
    fn risk(&self, instance: &[f64]) -> f64 {
        match self {
            Model::LogisticRegression(m) => m.risk_raw(instance),
            Model::DecisionTree(m) => m.risk_raw(instance),
            Model::RandomForest(m) => m.risk_raw(instance),
        }
    }
}

/// Accuracy, positive-class F1, and AUC on a test set.
///
/// AUC is `None` when the test set has a single class (undefined, not 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub accuracy: f64,
    pub f1: f64,
    pub auc: Option<f64>,
}

/// Scores a model: accuracy at the 0.5 threshold, F1 of the positive class,
/// and AUC computed from average ranks (ties worth one half).
pub fn score_model(model: &dyn ProbabilityModel, test: &Dataset) -> Result<ModelScore> {
    if test.n_rows() == 0 {
        return Err(Error::Data("empty test set".into()));
    }
    let risks: Vec<f64> = test.rows().iter().map(|r| model.risk(r)).collect();
    let mut correct = 0usize;
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (risk, &label) in risks.iter().zip(test.labels()) {
        let predicted = u8::from(*risk >= 0.5);
        if predicted == label {
            correct += 1;
        }
        match (predicted, label) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 1) => fn_ += 1,
            _ => {}
        }
    }
    let accuracy = correct as f64 / test.n_rows() as f64;
    let f1_denominator = 2 * tp + fp + fn_;
    let f1 = if f1_denominator == 0 {
        0.0
    } else {
        2.0 * tp as f64 / f1_denominator as f64
    };
    Ok(ModelScore {
        accuracy,
        f1,
        auc: auc_from_risks(&risks, test.labels()),
    })
}

/// Mann-Whitney AUC from ranked risks; `None` for single-class labels.
pub fn auc_from_risks(risks: &[f64], labels: &[u8]) -> Option<f64> {
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let ranks = average_ranks(risks);
    let rank_sum_pos: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == 1)
        .map(|(r, _)| r)
        .sum();
    Some((rank_sum_pos - n_pos as f64 * (n_pos as f64 + 1.0) / 2.0) / (n_pos as f64 * n_neg as f64))
}

/// A trainer specification: model family plus hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrainerSpec {
    LogisticRegression(LogRegConfig),
    DecisionTree(TreeConfig),
    RandomForest(ForestConfig),
}

impl TrainerSpec {
    pub fn train(&self, ds: &Dataset) -> Result<Model> {
        Ok(match self {
            TrainerSpec::LogisticRegression(c) => Model::LogisticRegression(train_logreg(ds, c)?),
            TrainerSpec::DecisionTree(c) => Model::DecisionTree(train_tree(ds, c)?),
            TrainerSpec::RandomForest(c) => Model::RandomForest(train_forest(ds, c)?),
        })
    }

    /// Conventional short name (LR / DT / RF).
    pub fn short_name(&self) -> &'static str {
        match self {
            TrainerSpec::LogisticRegression(_) => "LR",
            TrainerSpec::DecisionTree(_) => "DT",
            TrainerSpec::RandomForest(_) => "RF",
        }
    }

    /// Applies one named hyperparameter. Numeric parameters accept numbers;
    /// `max_features` additionally accepts "sqrt" / "all".
    pub fn apply_param(&mut self, name: &str, value: &ParamValue) -> Result<()> {
        let as_f64 = || -> Result<f64> {
            match value {
                ParamValue::Number(v) => Ok(*v),
                ParamValue::Text(t) => Err(Error::Config(format!(
                    "parameter '{name}' expects a number, got '{t}'"
                ))),
            }
        };
        let as_usize = || -> Result<usize> { Ok(as_f64()?.round() as usize) };
        match self {
            TrainerSpec::LogisticRegression(c) => match name {
                "learning_rate" => c.learning_rate = as_f64()?,
                "epochs" => c.epochs = as_usize()?,
                "l2" => c.l2 = as_f64()?,
                _ => return Err(Error::Config(format!("unknown LR parameter '{name}'"))),
            },
            TrainerSpec::DecisionTree(c) => match name {
                "max_depth" => c.max_depth = as_usize()?,
                "min_samples_split" => c.min_samples_split = as_usize()?,
                "min_samples_leaf" => c.min_samples_leaf = as_usize()?,
                _ => return Err(Error::Config(format!("unknown DT parameter '{name}'"))),
            },
            TrainerSpec::RandomForest(c) => match name {
                "n_estimators" => c.n_estimators = as_usize()?,
                "bootstrap" => c.bootstrap = as_f64()? != 0.0,
                "max_depth" => c.tree.max_depth = as_usize()?,
                "min_samples_split" => c.tree.min_samples_split = as_usize()?,
                "min_samples_leaf" => c.tree.min_samples_leaf = as_usize()?,
                "max_features" => {
                    c.max_features = match value {
                        ParamValue::Text(t) if t == "sqrt" => MaxFeatures::Sqrt,
                        ParamValue::Text(t) if t == "all" => MaxFeatures::All,
                        ParamValue::Number(v) => MaxFeatures::Count(v.round() as usize),
                        ParamValue::Text(t) => {
                            return Err(Error::Config(format!(
                                "max_features must be 'sqrt', 'all', or a count, got '{t}'"
                            )))
                        }
                    }
                }
                _ => return Err(Error::Config(format!("unknown RF parameter '{name}'"))),
            },
        }
        Ok(())
    }
}

/// Stratified fold assignment: per-class shuffled indices are dealt
/// round-robin with a cursor that continues across classes, so overall fold
/// sizes differ by at most one.
pub(crate) fn stratified_folds(ds: &Dataset, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cursor = 0usize;
    for class in [0u8, 1u8] {
        let mut idx: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.label(i) == class).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            folds[cursor % k].push(i);
            cursor += 1;
        }
    }
    folds
}

/// k-fold cross-validation: trains on each fold complement, scores on the
/// fold, and returns the arithmetic mean of the per-fold scores.
pub fn k_fold_cv(trainer: &TrainerSpec, ds: &Dataset, k: usize, seed: u64) -> Result<ModelScore> {
    if k < 2 {
        return Err(Error::Config(format!("k must be at least 2, got {k}")));
    }
    if k > ds.n_rows() {
        return Err(Error::Data(format!(
            "k {} exceeds row count {}",
            k,
            ds.n_rows()
        )));
    }
    let folds = stratified_folds(ds, k, seed);
    let mut accuracy = 0.0;
    let mut f1 = 0.0;
    let mut auc_sum = 0.0;
    let mut auc_count = 0usize;
    for fold in &folds {
        let holdout: std::collections::HashSet<usize> = fold.iter().copied().collect();
        let train_idx: Vec<usize> = (0..ds.n_rows()).filter(|i| !holdout.contains(i)).collect();
        let train = ds.select(&train_idx);
        let (neg, pos) = train.class_counts();
        if neg == 0 || pos == 0 {
            return Err(Error::Data(
                "a training fold complement lost one class entirely".into(),
            ));
        }
        let mut sorted_fold = fold.clone();
        sorted_fold.sort_unstable();
        let test = ds.select(&sorted_fold);
        let model = trainer.train(&train)?;
        let score = score_model(&model, &test)?;
        accuracy += score.accuracy;
        f1 += score.f1;
        if let Some(a) = score.auc {
            auc_sum += a;
            auc_count += 1;
        }
    }
    let kf = k as f64;
    Ok(ModelScore {
        accuracy: accuracy / kf,
        f1: f1 / kf,
        auc: (auc_count > 0).then(|| auc_sum / auc_count as f64),
    })
}

/// One hyperparameter value: a number or a token such as "sqrt".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(v) => write!(f, "{v}"),
            ParamValue::Text(t) => write!(f, "{t}"),
        }
    }
}

/// Named candidate values per hyperparameter, in declaration order.
pub type ParamSpace = Vec<(String, Vec<ParamValue>)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum SearchStrategy {
    /// Full cross-product of the space, last parameter fastest.
    Grid,
    /// `budget` configurations sampled uniformly per dimension.
    Random { budget: usize },
}

/// Outcome of one evaluated configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub params: Vec<(String, ParamValue)>,
    pub score: Option<ModelScore>,
    pub error: Option<String>,
}

/// Search result: the configuration with the best cross-validated AUC.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: TrainerSpec,
    pub best_params: Vec<(String, ParamValue)>,
    pub best_score: ModelScore,
    pub strategy: SearchStrategy,
    pub trials: Vec<TrialRecord>,
}

impl SearchOutcome {
    /// One-line summary in the conventional report shape, e.g.
    /// `Grid search, AUC 0.6979, l2: 2.78, epochs: 130`.
    pub fn summary(&self) -> String {
        let strategy = match self.strategy {
            SearchStrategy::Grid => "Grid",
            SearchStrategy::Random { .. } => "Random",
        };
        let auc = self
            .best_score
            .auc
            .map_or("n/a".to_string(), |a| format!("{a:.4}"));
        let params = self
            .best_params
            .iter()
            .map(|(name, value)| format!("{name}: {value}"))
            .collect::<Vec<_>>()
            .join(", ");
        format!("{strategy} search, AUC {auc}, {params}")
    }
}

/// Selects hyperparameters by cross-validated AUC.
///
/// Failed trials are recorded and skipped; the search only errors when every
/// trial fails. Ties keep the earlier enumeration.
pub fn search_hyperparams(
    base: &TrainerSpec,
    space: &ParamSpace,
    strategy: SearchStrategy,
    ds: &Dataset,
    cv_folds: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if space.is_empty() || space.iter().any(|(_, values)| values.is_empty()) {
        return Err(Error::Config("empty hyperparameter space".into()));
    }
    let assignments: Vec<Vec<usize>> = match strategy {
        SearchStrategy::Grid => {
            let mut all = vec![vec![0usize; space.len()]];
            for (dim, (_, values)) in space.iter().enumerate() {
                let mut next = Vec::with_capacity(all.len() * values.len());
                for partial in &all {
                    for v in 0..values.len() {
                        let mut row = partial.clone();
                        row[dim] = v;
                        next.push(row);
                    }
                }
                all = next;
            }
            all
        }
        SearchStrategy::Random { budget } => {
            if budget == 0 {
                return Err(Error::Config("random search budget must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| {
                    space
                        .iter()
                        .map(|(_, values)| rng.random_range(0..values.len()))
                        .collect()
                })
                .collect()
        }
    };

    let mut trials = Vec::with_capacity(assignments.len());
    let mut best: Option<(usize, ModelScore)> = None;
    for (trial_idx, assignment) in assignments.iter().enumerate() {
        let params: Vec<(String, ParamValue)> = space
            .iter()
            .zip(assignment)
            .map(|((name, values), &v)| (name.clone(), values[v].clone()))
            .collect();
        let mut spec = base.clone();
        let configured: Result<()> = params
            .iter()
            .try_for_each(|(name, value)| spec.apply_param(name, value));
        let outcome = configured.and_then(|()| k_fold_cv(&spec, ds, cv_folds, seed));
        match outcome {
            Ok(score) => {
                let candidate = score.auc.unwrap_or(f64::NEG_INFINITY);
                let incumbent = best
                    .as_ref()
                    .map_or(f64::NEG_INFINITY, |(_, s)| s.auc.unwrap_or(f64::NEG_INFINITY));
                if best.is_none() || candidate > incumbent {
                    best = Some((trial_idx, score));
                }
                trials.push(TrialRecord {
                    params,
                    score: Some(score),
                    error: None,
                });
            }
            Err(e) => trials.push(TrialRecord {
                params,
                score: None,
                error: Some(e.to_string()),
            }),
        }
    }

    let Some((best_idx, best_score)) = best else {
        return Err(Error::Model("all hyperparameter trials failed".into()));
    };
    let best_params = trials[best_idx].params.clone();
    let mut best_spec = base.clone();
    for (name, value) in &best_params {
        best_spec.apply_param(name, value)?;
    }
    Ok(SearchOutcome {
        best: best_spec,
        best_params,
        best_score,
        strategy,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_synthetic;

    #[test]
    fn classify_matches_risk_threshold_for_all_kinds() {
        let ds = generate_synthetic(200, &[1.5, -1.0], 0.1, 0.1, 7).unwrap();
        let models: Vec<Model> = vec![
            TrainerSpec::LogisticRegression(LogRegConfig::default())
                .train(&ds)
                .unwrap(),
            TrainerSpec::DecisionTree(TreeConfig::default()).train(&ds).unwrap(),
            TrainerSpec::RandomForest(ForestConfig {
                n_estimators: 10,
                ..Default::default()
            })
            .train(&ds)
            .unwrap(),
        ];
        for model in &models {
            for row in ds.rows().iter().take(60) {
                assert_eq!(
                    model.classify(row),
                    Class::from_risk(model.risk(row)),
                    "{}",
                    model.kind()
                );
            }
        }
    }

    #[test]
    fn perfect_separation_scores_ones() {
        struct Oracle;
        impl ProbabilityModel for Oracle {
            fn risk(&self, x: &[f64]) -> f64 {
                if x[0] > 0.0 {
                    0.9
                } else {
                    0.1
                }
            }
        }
        let ds = crate::data::Dataset::new(
            vec![crate::data::FeatureSpec::new("x")],
            vec![vec![-1.0], vec![-2.0], vec![1.0], vec![2.0]],
            vec![0, 0, 1, 1],
        )
        .unwrap();
        let score = score_model(&Oracle, &ds).unwrap();
        assert_eq!((score.accuracy, score.f1, score.auc), (1.0, 1.0, Some(1.0)));
    }

    #[test]
    fn tied_risks_give_half_auc() {
        let risks = vec![0.5; 6];
        let labels = vec![0, 1, 0, 1, 0, 1];
        assert_eq!(auc_from_risks(&risks, &labels), Some(0.5));
    }

    #[test]
    fn auc_hand_example() {
        // pairs (pos, neg): wins 3 of 4 -> 0.75
        let risks = vec![0.1, 0.4, 0.35, 0.8];
        let labels = vec![0, 0, 1, 1];
        assert_eq!(auc_from_risks(&risks, &labels), Some(0.75));
    }

    #[test]
    fn auc_single_class_is_absent() {
        assert_eq!(auc_from_risks(&[0.2, 0.8], &[1, 1]), None);
        let ds = crate::data::Dataset::new(
            vec![crate::data::FeatureSpec::new("x")],
            vec![vec![0.0], vec![1.0]],
            vec![1, 1],
        )
        .unwrap();
        struct Flat;
        impl ProbabilityModel for Flat {
            fn risk(&self, _: &[f64]) -> f64 {
                0.7
            }
        }
        assert_eq!(score_model(&Flat, &ds).unwrap().auc, None);
    }

    #[test]
    fn auc_equals_pair_counting_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..30 {
            let n = rng.random_range(2..=200);
            let risks: Vec<f64> = (0..n)
                .map(|_| (rng.random_range(0..20) as f64) / 20.0)
                .collect();
            let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2) as u8).collect();
            let expected = brute_force_auc(&risks, &labels);
            assert_eq!(auc_from_risks(&risks, &labels), expected);
        }
    }

    fn brute_force_auc(risks: &[f64], labels: &[u8]) -> Option<f64> {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for (rp, &lp) in risks.iter().zip(labels) {
            if lp != 1 {
                continue;
            }
            for (rn, &ln) in risks.iter().zip(labels) {
                if ln != 0 {
                    continue;
                }
                pairs += 1.0;
                if rp > rn {
                    wins += 1.0;
                } else if rp == rn {
                    wins += 0.5;
                }
            }
        }
        (pairs > 0.0).then(|| wins / pairs)
    }

    #[test]
    fn leave_one_out_folds() {
        let ds = crate::data::Dataset::new(
            vec![crate::data::FeatureSpec::new("x")],
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            vec![0, 0, 1, 1],
        )
        .unwrap();
        let folds = stratified_folds(&ds, 4, 0);
        assert!(folds.iter().all(|f| f.len() == 1));
        let mut all: Vec<usize> = folds.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one() {
        let ds = generate_synthetic(103, &[1.0], 0.3, 0.2, 15).unwrap();
        for k in [2, 3, 5, 10] {
            let folds = stratified_folds(&ds, k, 3);
            let sizes: Vec<usize> = folds.iter().map(|f| f.len()).collect();
            let lo = *sizes.iter().min().unwrap();
            let hi = *sizes.iter().max().unwrap();
            assert!(hi - lo <= 1, "k={k}: {sizes:?}");
        }
    }

    #[test]
    fn cv_tracks_full_train_accuracy_on_duplicated_data() {
        let half = generate_synthetic(150, &[2.0, -1.0], 0.0, 0.05, 21).unwrap();
        let mut rows = half.rows().to_vec();
        rows.extend(half.rows().iter().cloned());
        let mut labels = half.labels().to_vec();
        labels.extend(half.labels().iter().copied());
        let ds = crate::data::Dataset::new(half.features().to_vec(), rows, labels).unwrap();
        let trainer = TrainerSpec::LogisticRegression(LogRegConfig::default());
        let cv = k_fold_cv(&trainer, &ds, 5, 1).unwrap();
        let model = trainer.train(&ds).unwrap();
        let full = score_model(&model, &ds).unwrap();
        assert!(
            (cv.accuracy - full.accuracy).abs() <= 0.05,
            "cv {} vs full {}",
            cv.accuracy,
            full.accuracy
        );
    }

    #[test]
    fn single_point_space_is_returned() {
        let ds = generate_synthetic(80, &[1.0], 0.0, 0.1, 2).unwrap();
        let space: ParamSpace = vec![("epochs".into(), vec![ParamValue::Number(50.0)])];
        let outcome = search_hyperparams(
            &TrainerSpec::LogisticRegression(LogRegConfig::default()),
            &space,
            SearchStrategy::Grid,
            &ds,
            4,
            0,
        )
        .unwrap();
        assert_eq!(outcome.trials.len(), 1);
        match outcome.best {
            TrainerSpec::LogisticRegression(c) => assert_eq!(c.epochs, 50),
            other => panic!("unexpected spec {other:?}"),
        }
    }

    #[test]
    fn grid_prefers_moderate_l2_on_informative_data() {
        let ds = generate_synthetic(300, &[2.0, -1.5], 0.2, 0.05, 33).unwrap();
        let space: ParamSpace = vec![(
            "l2".into(),
            vec![ParamValue::Number(1e6), ParamValue::Number(0.01)],
        )];
        let outcome = search_hyperparams(
            &TrainerSpec::LogisticRegression(LogRegConfig::default()),
            &space,
            SearchStrategy::Grid,
            &ds,
            5,
            0,
        )
        .unwrap();
        match &outcome.best {
            TrainerSpec::LogisticRegression(c) => assert_eq!(c.l2, 0.01),
            other => panic!("unexpected spec {other:?}"),
        }
        let line = outcome.summary();
        assert!(line.starts_with("Grid search, AUC"), "{line}");
        assert!(line.contains("l2: 0.01"), "{line}");
    }

    #[test]
    fn random_search_samples_budget_points() {
        let ds = generate_synthetic(100, &[1.0], 0.0, 0.1, 44).unwrap();
        let space: ParamSpace = vec![
            (
                "max_depth".into(),
                vec![ParamValue::Number(2.0), ParamValue::Number(4.0)],
            ),
            (
                "min_samples_leaf".into(),
                vec![ParamValue::Number(1.0), ParamValue::Number(3.0)],
            ),
        ];
        let outcome = search_hyperparams(
            &TrainerSpec::DecisionTree(TreeConfig::default()),
            &space,
            SearchStrategy::Random { budget: 7 },
            &ds,
            4,
            9,
        )
        .unwrap();
        assert_eq!(outcome.trials.len(), 7);
    }

    #[test]
    fn model_json_round_trip() {
        let ds = generate_synthetic(120, &[1.0, -1.0], 0.0, 0.1, 50).unwrap();
        for trainer in [
            TrainerSpec::LogisticRegression(LogRegConfig::default()),
            TrainerSpec::DecisionTree(TreeConfig::default()),
            TrainerSpec::RandomForest(ForestConfig {
                n_estimators: 5,
                ..Default::default()
            }),
        ] {
            let model = trainer.train(&ds).unwrap();
            let text = model.to_json().unwrap();
            let back = Model::from_json(&text).unwrap();
            assert_eq!(back, model);
        }
    }

    #[test]
    fn model_json_rejects_unknown_version() {
        let ds = generate_synthetic(60, &[1.0], 0.0, 0.1, 51).unwrap();
        let model = TrainerSpec::DecisionTree(TreeConfig::default()).train(&ds).unwrap();
        let text = model.to_json().unwrap().replace("\"version\": 1", "\"version\": 99");
        assert!(Model::from_json(&text).is_err());
    }
}
