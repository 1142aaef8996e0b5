//! Tabular dataset model, ingestion, preprocessing, and synthetic data
//! generation.
//!
//! Datasets are dense matrices of finite `f64` feature values with binary
//! labels (1 = positive class, 0 = negative class). All preprocessing
//! operations are pure functions of their inputs and an explicit seed.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::numeric::{average_ranks, sigmoid};

/// Schema entry for one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    /// Whether negative values are physically invalid for this feature
    /// (e.g. a line count). Consulted by the simulation clamp.
    #[serde(default)]
    pub non_negative: bool,
}

impl FeatureSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            non_negative: false,
        }
    }
}

/// A dense tabular dataset with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<FeatureSpec>,
    rows: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

impl Dataset {
    /// Builds a dataset, validating shape, finiteness, and label domain.
    pub fn new(features: Vec<FeatureSpec>, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Data("dataset has no features".into()));
        }
        let mut seen = HashSet::new();
        for spec in &features {
            if spec.name.is_empty() {
                return Err(Error::Data("empty feature name".into()));
            }
            if !seen.insert(spec.name.clone()) {
                return Err(Error::Data(format!("duplicate feature name '{}'", spec.name)));
            }
        }
        if rows.len() != labels.len() {
            return Err(Error::Data(format!(
                "row count {} != label count {}",
                rows.len(),
                labels.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != features.len() {
                return Err(Error::Data(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    features.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Data(format!(
                    "non-finite value at row {i}, column '{}'",
                    features[j].name
                )));
            }
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Data(format!("label {l} outside {{0,1}}")));
        }
        Ok(Self {
            features,
            rows,
            labels,
        })
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// (negative, positive) class counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (self.labels.len() - pos, pos)
    }

    /// Column values for one feature.
    pub fn column(&self, feature: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[feature]).collect()
    }

    /// Marks the named features as non-negative. Unknown names are errors.
    pub fn set_non_negative(&mut self, names: &[String]) -> Result<()> {
        for name in names {
            match self.features.iter_mut().find(|f| &f.name == name) {
                Some(spec) => spec.non_negative = true,
                None => {
                    return Err(Error::Data(format!(
                        "unknown feature '{name}' in non-negative list"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Sub-dataset containing the given row indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Writes the dataset as CSV, mirroring the ingestion format: header
    /// row, '.' decimal separator, label appended as the final column.
    pub fn write_csv<W: Write>(&self, out: W, label_column: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.feature_names();
        header.push(label_column);
        w.write_record(&header)?;
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let mut record: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            record.push(format!("{label}"));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Data(format!("csv: {e}"))
    }
}

/// Per-feature summary statistics computed from a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStat {
    pub name: String,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator), in feature units.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Statistics for every feature of a dataset, in schema order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    stats: Vec<FeatureStat>,
}

impl FeatureStats {
    pub fn entries(&self) -> &[FeatureStat] {
        &self.stats
    }

    pub fn get(&self, feature: usize) -> &FeatureStat {
        &self.stats[feature]
    }

    pub fn by_name(&self, name: &str) -> Option<&FeatureStat> {
        self.stats.iter().find(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }
}

/// Parses a CSV byte stream into a dataset.
///
/// The stream must carry a header row; every non-label cell must parse as a
/// real number. Rows whose label equals `positive_label` map to 1, all
/// others to 0.
pub fn load_csv<R: Read>(source: R, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let mut seen = HashSet::new();
    for h in &headers {
        if !seen.insert(h.clone()) {
            return Err(Error::Data(format!("duplicate header name '{h}'")));
        }
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Data(format!("missing label column '{label_column}'")))?;

    let features: Vec<FeatureSpec> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| FeatureSpec::new(h.clone()))
        .collect();
    if features.is_empty() {
        return Err(Error::Data("no feature columns besides the label".into()));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(Error::Data(format!(
                "row {} has {} cells, expected {}",
                line + 1,
                record.len(),
                headers.len()
            )));
        }
        let mut row = Vec::with_capacity(features.len());
        for (col, cell) in record.iter().enumerate() {
            if col == label_idx {
                labels.push(u8::from(cell == positive_label));
            } else {
                let value: f64 = cell.parse().map_err(|_| {
                    Error::Data(format!(
                        "non-numeric cell '{}' at row {}, column '{}'",
                        cell,
                        line + 1,
                        headers[col]
                    ))
                })?;
                row.push(value);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data("empty dataset: no rows after the header".into()));
    }
    Dataset::new(features, rows, labels)
}

/// Generates a dataset with standard-normal features and labels drawn from
/// a logistic model `sigmoid(w.x + b)`, with optional label noise.
pub fn generate_synthetic(
    n_rows: usize,
    coefficients: &[f64],
    intercept: f64,
    label_noise: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_rows == 0 {
        return Err(Error::Data("n_rows must be positive".into()));
    }
    if coefficients.is_empty() {
        return Err(Error::Data("empty coefficient vector".into()));
    }
    if !(0.0..0.5).contains(&label_noise) {
        return Err(Error::Data(format!(
            "label_noise {label_noise} outside [0, 0.5)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = coefficients.len();
    let features = (0..k).map(|i| FeatureSpec::new(format!("f{i}"))).collect();
    let mut rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let z: f64 = row
            .iter()
            .zip(coefficients)
            .map(|(x, w)| x * w)
            .sum::<f64>()
            + intercept;
        let mut label = u8::from(rng.random::<f64>() < sigmoid(z));
        // Noise draw happens unconditionally so the feature stream does not
        // depend on the noise setting.
        let flip = rng.random::<f64>() < label_noise;
        if flip {
            label = 1 - label;
        }
        rows.push(row);
        labels.push(label);
    }
    Dataset::new(features, rows, labels)
}

/// Splits a dataset into (train, test) partitions.
///
/// Stratified splits allocate per-class test counts by largest remainder,
/// preserving the class ratio within one row per class.
pub fn train_test_split(
    ds: &Dataset,
    test_fraction: f64,
    stratified: bool,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Data(format!(
            "test_fraction {test_fraction} outside (0, 1)"
        )));
    }
    let n = ds.n_rows();
    let target = (n as f64 * test_fraction).round() as usize;
    if target == 0 || target == n {
        return Err(Error::Data(format!(
            "test_fraction {test_fraction} yields an empty split for {n} rows"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut test_idx: Vec<usize> = Vec::with_capacity(target);
    if stratified {
        let (neg, pos) = ds.class_counts();
        if neg == 0 || pos == 0 {
            return Err(Error::Data(
                "stratified split requires both classes present".into(),
            ));
        }
        // Largest-remainder allocation of the test budget across classes.
        let counts = [neg, pos];
        let exact: Vec<f64> = counts
            .iter()
            .map(|&c| c as f64 * target as f64 / n as f64)
            .collect();
        let mut alloc: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
        let mut leftover = target - alloc.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..2).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - exact[a].floor();
            let rb = exact[b] - exact[b].floor();
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        for &c in &order {
            if leftover == 0 {
                break;
            }
            if alloc[c] < counts[c] {
                alloc[c] += 1;
                leftover -= 1;
            }
        }
        for class in 0..2u8 {
            let mut idx: Vec<usize> = (0..n).filter(|&i| ds.label(i) == class).collect();
            idx.shuffle(&mut rng);
            test_idx.extend(idx.into_iter().take(alloc[class as usize]));
        }
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        test_idx.extend(idx.into_iter().take(target));
    }

    let test_set: HashSet<usize> = test_idx.iter().copied().collect();
    let train_idx: Vec<usize> = (0..n).filter(|i| !test_set.contains(i)).collect();
    test_idx.sort_unstable();
    Ok((ds.select(&train_idx), ds.select(&test_idx)))
}

/// Balances class counts by synthesizing minority-class rows as convex
/// combinations with their k nearest same-class neighbors (Euclidean).
pub fn smote(ds: &Dataset, k: usize, seed: u64) -> Result<Dataset> {
    if k == 0 {
        return Err(Error::Data("smote requires k >= 1".into()));
    }
    let (neg, pos) = ds.class_counts();
    if neg == pos {
        return Ok(ds.clone());
    }
    let minority_label: u8 = if pos < neg { 1 } else { 0 };
    let minority: Vec<usize> = (0..ds.n_rows())
        .filter(|&i| ds.label(i) == minority_label)
        .collect();
    if minority.len() < 2 {
        return Err(Error::Data(
            "smote cannot interpolate a single-row minority class".into(),
        ));
    }
    let needed = neg.abs_diff(pos);
    let k_eff = k.min(minority.len() - 1);

    // k nearest same-class neighbors per minority row, ties broken by index.
    let neighbors: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| {
            let mut dists: Vec<(f64, usize)> = minority
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (euclidean(ds.row(i), ds.row(j)), j))
                .collect();
            dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            dists.into_iter().take(k_eff).map(|(_, j)| j).collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = ds.rows().to_vec();
    let mut labels = ds.labels().to_vec();
    for s in 0..needed {
        let m = s % minority.len();
        let base = ds.row(minority[m]);
        let pick = rng.random_range(0..neighbors[m].len());
        let neighbor = ds.row(neighbors[m][pick]);
        let u: f64 = rng.random();
        let synthetic: Vec<f64> = base
            .iter()
            .zip(neighbor)
            .map(|(x, nb)| x + u * (nb - x))
            .collect();
        rows.push(synthetic);
        labels.push(minority_label);
    }
    Dataset::new(ds.features().to_vec(), rows, labels)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Computes per-feature mean, sample std, min, and max.
pub fn feature_stats(ds: &Dataset) -> Result<FeatureStats> {
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::Data(format!(
            "feature statistics need at least 2 rows, got {n}"
        )));
    }
    let stats = ds
        .features()
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            // Welford's online mean/variance.
            let mut mean = 0.0;
            let mut m2 = 0.0;
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for (i, row) in ds.rows().iter().enumerate() {
                let v = row[j];
                let delta = v - mean;
                mean += delta / (i as f64 + 1.0);
                m2 += delta * (v - mean);
                min = min.min(v);
                max = max.max(v);
            }
            FeatureStat {
                name: spec.name.clone(),
                mean,
                std: (m2 / (n as f64 - 1.0)).max(0.0).sqrt(),
                min,
                max,
            }
        })
        .collect();
    Ok(FeatureStats { stats })
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0; // constant column: no monotone association
    }
    cov / (va.sqrt() * vb.sqrt())
}

/// Greedy pairwise-Spearman collinearity filter.
///
/// While any pair exceeds `|rho| > rho_threshold`, the member of the most
/// correlated pair with the higher mean absolute correlation to the other
/// retained features is dropped.
pub fn spearman_filter(ds: &Dataset, rho_threshold: f64) -> Result<Dataset> {
    if !(rho_threshold > 0.0 && rho_threshold <= 1.0) {
        return Err(Error::Data(format!(
            "rho_threshold {rho_threshold} outside (0, 1]"
        )));
    }
    let k = ds.n_features();
    let ranks: Vec<Vec<f64>> = (0..k).map(|j| average_ranks(&ds.column(j))).collect();
    let mut rho = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r = pearson(&ranks[i], &ranks[j]);
            rho[i][j] = r;
            rho[j][i] = r;
        }
    }

    let mut active: Vec<usize> = (0..k).collect();
    loop {
        let mut worst: Option<(usize, usize, f64)> = None;
        for (a, &i) in active.iter().enumerate() {
            for &j in &active[a + 1..] {
                let v = rho[i][j].abs();
                if v > rho_threshold && worst.map_or(true, |(_, _, w)| v > w) {
                    worst = Some((i, j, v));
                }
            }
        }
        let Some((i, j, _)) = worst else { break };
        let mean_abs = |f: usize| {
            let others: Vec<f64> = active
                .iter()
                .filter(|&&g| g != f)
                .map(|&g| rho[f][g].abs())
                .collect();
            others.iter().sum::<f64>() / others.len() as f64
        };
        let drop = if mean_abs(i) > mean_abs(j) { i } else { j };
        active.retain(|&f| f != drop);
        if active.len() == 1 {
            break;
        }
    }

    let features: Vec<FeatureSpec> = active.iter().map(|&f| ds.features()[f].clone()).collect();
    let rows: Vec<Vec<f64>> = ds
        .rows()
        .iter()
        .map(|r| active.iter().map(|&f| r[f]).collect())
        .collect();
    Dataset::new(features, rows, ds.labels().to_vec())
}

/// Randomly undersamples the majority class down to the minority count.
pub fn balance_test_set(ds: &Dataset, seed: u64) -> Result<Dataset> {
    let (neg, pos) = ds.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::Data("balancing requires both classes present".into()));
    }
    if neg == pos {
        return Ok(ds.clone());
    }
    let majority_label: u8 = if neg > pos { 0 } else { 1 };
    let keep = neg.min(pos);
    let mut majority: Vec<usize> = (0..ds.n_rows())
        .filter(|&i| ds.label(i) == majority_label)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    majority.shuffle(&mut rng);
    let mut indices: Vec<usize> = (0..ds.n_rows())
        .filter(|&i| ds.label(i) != majority_label)
        .chain(majority.into_iter().take(keep))
        .collect();
    indices.sort_unstable();
    Ok(ds.select(&indices))
}
