//! The two classifiers: correct categorical Naive Bayes and the
//! product-of-Bernoullis (PoB) model induced by one-hot encoding.
//!
//! With per-class parameter rows `theta` over K values, the categorical
//! model scores observed value `j` by `theta[j]` alone. Treating the K
//! one-hot bits as independent Bernoullis scores the same observation by
//! `q_factor(theta, j) * theta[j]`, where `q_factor = prod_{k != j}
//! (1 - theta[k])` is the probability that every other bit is off. The
//! factor differs per class, so the two posteriors differ even though the
//! maximum-likelihood parameter estimates coincide bit for bit (see
//! [`fit_mle`]).

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::simplex::ProbVector;

/// Errors from classifier construction, scoring, and fitting.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("value index {index} out of range for {len} values")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("bit pattern has {got} bits, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("evidence is zero for every class")]
    ZeroEvidence,
    #[error("training data is empty")]
    EmptyData,
    #[error("class label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("operation needs a single-feature classifier, this one has {features} features")]
    NotSingleFeature { features: usize },
    #[error("observation has {got} features, classifier has {expected}")]
    FeatureCountMismatch { got: usize, expected: usize },
    #[error("need at least 2 classes, got {classes}")]
    TooFewClasses { classes: usize },
    #[error("feature {feature} needs at least 2 values, got {values}")]
    TooFewValues { feature: usize, values: usize },
    #[error("classifier needs at least one feature")]
    NoFeatures,
    #[error("feature {feature} has {got} table rows, expected {expected} classes")]
    WrongClassCount {
        feature: usize,
        got: usize,
        expected: usize,
    },
    #[error("feature {feature} has table rows of differing lengths")]
    RaggedTable { feature: usize },
    #[error("smoothing must be finite and nonnegative, got {smoothing}")]
    BadSmoothing { smoothing: f64 },
}

/// Which event model scores an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Categorical,
    PoB,
}

/// How training rows are counted when fitting: directly over value
/// indices, or routed through the one-hot bits of each value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    Ordinal,
    OneHot,
}

/// One decoded data point: a value index per feature. Indices are 0-based
/// everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observation {
    values: Vec<usize>,
}

impl Observation {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    /// Single-feature observation of value `j`.
    pub fn single(j: usize) -> Self {
        Self { values: vec![j] }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A vector of bits for one encoded feature.
///
/// Deliberately admits every pattern of K bits, not just the K one-hot
/// codes: the PoB model assigns all 2^K patterns probability.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitPattern {
    bits: Vec<bool>,
}

impl BitPattern {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The one-hot code `e_j` of length `k`.
    pub fn one_hot(j: usize, k: usize) -> Result<Self, ModelError> {
        if j >= k {
            return Err(ModelError::IndexOutOfRange { index: j, len: k });
        }
        let mut bits = vec![false; k];
        bits[j] = true;
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `Some(j)` iff this is exactly the one-hot code `e_j`.
    pub fn hot_index(&self) -> Option<usize> {
        let mut hot = None;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                if hot.is_some() {
                    return None;
                }
                hot = Some(i);
            }
        }
        hot
    }
}

/// Naive Bayes parameters: a class prior and, per feature, one categorical
/// row per class.
///
/// `tables[f][i][j] = p(x_f = j | y = i)`. By the maximum-likelihood
/// equality the same numbers serve as the per-bit Bernoulli marginals of
/// the PoB model, so no separate parameter set exists.
#[derive(Debug, Clone, PartialEq)]
pub struct NBParams {
    prior: ProbVector,
    tables: Vec<Vec<ProbVector>>,
}

impl NBParams {
    pub fn new(prior: ProbVector, tables: Vec<Vec<ProbVector>>) -> Result<Self, ModelError> {
        let classes = prior.len();
        if tables.is_empty() {
            return Err(ModelError::NoFeatures);
        }
        for (feature, rows) in tables.iter().enumerate() {
            if rows.len() != classes {
                return Err(ModelError::WrongClassCount {
                    feature,
                    got: rows.len(),
                    expected: classes,
                });
            }
            if rows.iter().any(|r| r.len() != rows[0].len()) {
                return Err(ModelError::RaggedTable { feature });
            }
        }
        Ok(Self { prior, tables })
    }

    pub fn num_classes(&self) -> usize {
        self.prior.len()
    }

    pub fn num_features(&self) -> usize {
        self.tables.len()
    }

    /// Number of values of feature `f`.
    pub fn num_values(&self, f: usize) -> usize {
        self.tables[f][0].len()
    }

    pub fn prior(&self) -> &ProbVector {
        &self.prior
    }

    /// The parameter row of feature `f` for class `class`.
    pub fn theta(&self, f: usize, class: usize) -> &ProbVector {
        &self.tables[f][class]
    }

    /// All per-class rows of feature `f`.
    pub fn table(&self, f: usize) -> &[ProbVector] {
        &self.tables[f]
    }

    fn single_feature(&self) -> Result<&[ProbVector], ModelError> {
        if self.tables.len() != 1 {
            return Err(ModelError::NotSingleFeature {
                features: self.tables.len(),
            });
        }
        Ok(&self.tables[0])
    }

    /// Posterior over classes given observed value `j`, under the correct
    /// categorical model. Single-feature classifiers only.
    pub fn categorical_posterior(&self, j: usize) -> Result<ProbVector, ModelError> {
        let table = self.single_feature()?;
        let k = table[0].len();
        if j >= k {
            return Err(ModelError::IndexOutOfRange { index: j, len: k });
        }
        let scores: Vec<f64> = self
            .prior
            .iter()
            .zip(table)
            .map(|(&pi, row)| pi * row[j])
            .collect();
        normalize_scores(scores)
    }

    /// Posterior over classes given the one-hot pattern `e_j`, under the
    /// product-of-Bernoullis model. Single-feature classifiers only.
    pub fn pob_posterior(&self, j: usize) -> Result<ProbVector, ModelError> {
        let table = self.single_feature()?;
        let k = table[0].len();
        if j >= k {
            return Err(ModelError::IndexOutOfRange { index: j, len: k });
        }
        let q_factors = table
            .iter()
            .map(|row| q_factor(row, j))
            .collect::<Result<Vec<_>, _>>()?;
        // a Q factor shared by every class cancels in the normalization;
        // honor that identity exactly instead of multiplying it through
        if q_factors[0] > 0.0 && q_factors.iter().all(|&q| q == q_factors[0]) {
            return self.categorical_posterior(j);
        }
        let scores: Vec<f64> = self
            .prior
            .iter()
            .zip(table)
            .zip(&q_factors)
            .map(|((&pi, row), &q)| pi * q * row[j])
            .collect();
        normalize_scores(scores)
    }

    /// Posterior over classes for a full observation under either model.
    ///
    /// Accumulates per-feature log likelihoods and exponentiates after a
    /// max-shift, so many-feature products cannot underflow. A class whose
    /// score is exactly zero stays at log-score -inf and drops out unless
    /// every class does, which is [`ModelError::ZeroEvidence`].
    pub fn posterior(&self, obs: &Observation, model: ModelKind) -> Result<ProbVector, ModelError> {
        if obs.len() != self.tables.len() {
            return Err(ModelError::FeatureCountMismatch {
                got: obs.len(),
                expected: self.tables.len(),
            });
        }
        for (f, &j) in obs.values().iter().enumerate() {
            let k = self.num_values(f);
            if j >= k {
                return Err(ModelError::IndexOutOfRange { index: j, len: k });
            }
        }
        let mut log_scores: Vec<f64> = self.prior.iter().map(|&pi| pi.ln()).collect();
        for (f, &j) in obs.values().iter().enumerate() {
            for (class, row) in self.tables[f].iter().enumerate() {
                let likelihood = match model {
                    ModelKind::Categorical => row[j],
                    ModelKind::PoB => q_factor(row, j)? * row[j],
                };
                log_scores[class] += likelihood.ln();
            }
        }
        let max = log_scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if max == f64::NEG_INFINITY {
            return Err(ModelError::ZeroEvidence);
        }
        let weights: Vec<f64> = log_scores.iter().map(|&s| (s - max).exp()).collect();
        Ok(ProbVector::renormalized(weights))
    }
}

fn normalize_scores(scores: Vec<f64>) -> Result<ProbVector, ModelError> {
    let sum: f64 = scores.iter().sum();
    if sum == 0.0 {
        return Err(ModelError::ZeroEvidence);
    }
    Ok(ProbVector::renormalized(scores))
}

/// `prod_{k != j} (1 - theta[k])`: under the PoB model, the probability
/// that every bit other than `j` is off.
pub fn q_factor(theta: &ProbVector, j: usize) -> Result<f64, ModelError> {
    if j >= theta.len() {
        return Err(ModelError::IndexOutOfRange {
            index: j,
            len: theta.len(),
        });
    }
    Ok(theta
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &t)| 1.0 - t)
        .product())
}

/// Probability of an arbitrary bit pattern under the product-of-Bernoullis
/// model with marginals `theta`.
///
/// For `pattern = e_j` this equals `q_factor(theta, j) * theta[j]`; summed
/// over all 2^K patterns it is 1.
pub fn pob_likelihood(theta: &ProbVector, pattern: &BitPattern) -> Result<f64, ModelError> {
    if pattern.len() != theta.len() {
        return Err(ModelError::LengthMismatch {
            got: pattern.len(),
            expected: theta.len(),
        });
    }
    Ok(theta
        .iter()
        .zip(pattern.bits())
        .map(|(&t, &b)| if b { t } else { 1.0 - t })
        .product())
}

/// Index of the maximum posterior entry, ties broken toward the lowest
/// index.
pub fn map_class(posterior: &ProbVector) -> usize {
    let mut best = 0;
    for (i, &v) in posterior.iter().enumerate().skip(1) {
        if v > posterior[best] {
            best = i;
        }
    }
    best
}

/// Fits Naive Bayes parameters by (smoothed) maximum likelihood.
///
/// `prior[i] = (count_i + s) / (N + C*s)` and
/// `theta[f][i][j] = (count of value j in class i + s) / (count_i + K_f*s)`.
///
/// With `Layout::OneHot` the per-value counts are accumulated by walking
/// the bits of each value's one-hot code and counting the bits that are
/// on; because a bit is on exactly when its value was observed, the counts
/// and hence the fitted parameters are identical to the ordinal route, bit
/// for bit. A class with no rows and no smoothing keeps its zero prior and
/// gets a uniform table row.
pub fn fit_mle(
    data: &[(Observation, usize)],
    layout: Layout,
    smoothing: f64,
    classes: usize,
    values_per_feature: &[usize],
) -> Result<NBParams, ModelError> {
    if data.is_empty() {
        return Err(ModelError::EmptyData);
    }
    if classes < 2 {
        return Err(ModelError::TooFewClasses { classes });
    }
    if values_per_feature.is_empty() {
        return Err(ModelError::NoFeatures);
    }
    for (feature, &k) in values_per_feature.iter().enumerate() {
        if k < 2 {
            return Err(ModelError::TooFewValues { feature, values: k });
        }
    }
    if !(smoothing >= 0.0 && smoothing.is_finite()) {
        return Err(ModelError::BadSmoothing { smoothing });
    }

    let n_features = values_per_feature.len();
    let mut class_counts = vec![0usize; classes];
    let mut value_counts: Vec<Vec<Vec<usize>>> = values_per_feature
        .iter()
        .map(|&k| vec![vec![0; k]; classes])
        .collect();

    for (obs, label) in data {
        if *label >= classes {
            return Err(ModelError::LabelOutOfRange {
                label: *label,
                classes,
            });
        }
        if obs.len() != n_features {
            return Err(ModelError::FeatureCountMismatch {
                got: obs.len(),
                expected: n_features,
            });
        }
        class_counts[*label] += 1;
        for (f, (&j, &k)) in obs.values().iter().zip(values_per_feature).enumerate() {
            if j >= k {
                return Err(ModelError::IndexOutOfRange { index: j, len: k });
            }
            match layout {
                Layout::Ordinal => value_counts[f][*label][j] += 1,
                Layout::OneHot => {
                    let pattern = BitPattern::one_hot(j, k)?;
                    for (bit, &on) in pattern.bits().iter().enumerate() {
                        if on {
                            value_counts[f][*label][bit] += 1;
                        }
                    }
                }
            }
        }
    }

    let n = data.len() as f64;
    let prior: Vec<f64> = class_counts
        .iter()
        .map(|&c| (c as f64 + smoothing) / (n + classes as f64 * smoothing))
        .collect();

    let mut tables = Vec::with_capacity(n_features);
    for (f, &k) in values_per_feature.iter().enumerate() {
        let mut rows = Vec::with_capacity(classes);
        for class in 0..classes {
            let denom = class_counts[class] as f64 + k as f64 * smoothing;
            let row: Vec<f64> = if denom == 0.0 {
                vec![1.0 / k as f64; k]
            } else {
                value_counts[f][class]
                    .iter()
                    .map(|&c| (c as f64 + smoothing) / denom)
                    .collect()
            };
            rows.push(ProbVector::renormalized(row));
        }
        tables.push(rows);
    }

    NBParams::new(ProbVector::renormalized(prior), tables)
}
