//! Maximum entropy (multinomial logistic regression) classifier.
//!
//! Scores are linear, `s_k = W_k · [x; 1]`, and probabilities are their
//! softmax. Training minimizes the L2-regularized negative log-likelihood
//!
//! ```text
//! J(W) = -Σ_i log p(y_i | x_i; W) + (λ/2) ‖W without bias column‖²
//! ```
//!
//! by full-batch gradient descent from `W = 0`. Each step starts from a
//! Barzilai-Borwein trial length and backtracks until the Armijo condition
//! holds, so `J` never increases. Nothing is random.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::corpus::StanceLabel;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

pub const MODEL_FORMAT_VERSION: &str = "stance-maxent 1";

const NUM_LABELS: usize = StanceLabel::COUNT;
const ARMIJO_C: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub l2_lambda: f64,
    pub max_iterations: usize,
    /// Stop once the gradient's infinity norm drops below this.
    pub gradient_tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            l2_lambda: 0.1,
            max_iterations: 500,
            gradient_tolerance: 1e-6,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.l2_lambda.is_finite() || self.l2_lambda < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "l2_lambda must be a finite non-negative number, got {}",
                self.l2_lambda
            )));
        }
        if self.gradient_tolerance.is_nan() || self.gradient_tolerance < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gradient_tolerance must be non-negative, got {}",
                self.gradient_tolerance
            )));
        }
        Ok(())
    }
}

/// Trained weights: one row per label in canonical order, each row holding
/// `dimension` feature weights followed by the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntModel {
    dimension: usize,
    l2_lambda: f64,
    weights: Vec<f64>,
}

impl MaxEntModel {
    pub fn zeros(dimension: usize, l2_lambda: f64) -> Self {
        MaxEntModel {
            dimension,
            l2_lambda,
            weights: vec![0.0; NUM_LABELS * (dimension + 1)],
        }
    }

    /// Builds a model from `3 * (dimension + 1)` row-major weights.
    pub fn from_weights(dimension: usize, l2_lambda: f64, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != NUM_LABELS * (dimension + 1) {
            return Err(Error::DimensionMismatch {
                expected: NUM_LABELS * (dimension + 1),
                actual: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite weight {w}")));
        }
        Ok(MaxEntModel {
            dimension,
            l2_lambda,
            weights,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn l2_lambda(&self) -> f64 {
        self.l2_lambda
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Feature weights and bias of one label.
    pub fn row(&self, label: StanceLabel) -> (&[f64], f64) {
        let stride = self.dimension + 1;
        let row = &self.weights[label.index() * stride..(label.index() + 1) * stride];
        (&row[..self.dimension], row[self.dimension])
    }

    fn check(&self, x: &FeatureVector) -> Result<()> {
        if x.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.dimension(),
            });
        }
        Ok(())
    }

    pub fn scores(&self, x: &FeatureVector) -> Result<[f64; NUM_LABELS]> {
        self.check(x)?;
        Ok(scores(&self.weights, self.dimension, x))
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> Result<[f64; NUM_LABELS]> {
        Ok(softmax(self.scores(x)?))
    }

    /// Most probable label; exact ties go to the earlier canonical label.
    pub fn predict(&self, x: &FeatureVector) -> Result<StanceLabel> {
        Ok(argmax(&self.predict_proba(x)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&content)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_FORMAT_VERSION}");
        let _ = writeln!(out, "dimension\t{}", self.dimension);
        let labels: Vec<&str> = StanceLabel::ALL.iter().map(|l| l.as_str()).collect();
        let _ = writeln!(out, "labels\t{}", labels.join("\t"));
        let _ = writeln!(out, "lambda\t{}", self.l2_lambda);
        for label in StanceLabel::ALL {
            let (w, b) = self.row(label);
            out.push_str(label.as_str());
            // Display for f64 prints the shortest string that parses back exactly.
            for v in w.iter().chain(std::iter::once(&b)) {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(content: &str) -> Result<Self> {
        let mut lines = content.split('\n').map(|l| l.trim_end_matches('\r'));
        let mut line_no = 0;
        let mut next = |what: &str| {
            line_no += 1;
            lines
                .next()
                .ok_or_else(|| Error::format(line_no, format!("missing {what}")))
                .map(|l| (line_no, l))
        };

        let (_, version) = next("version header")?;
        if version != MODEL_FORMAT_VERSION {
            return Err(Error::Version {
                expected: MODEL_FORMAT_VERSION.into(),
                found: version.into(),
            });
        }
        let (n, line) = next("dimension")?;
        let dimension: usize = line
            .strip_prefix("dimension\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::format(n, "expected `dimension<TAB>n`"))?;
        let (n, line) = next("labels")?;
        let expected_labels = format!(
            "labels\t{}",
            StanceLabel::ALL.map(|l| l.as_str()).join("\t")
        );
        if line != expected_labels {
            return Err(Error::format(n, format!("expected {expected_labels:?}")));
        }
        let (n, line) = next("lambda")?;
        let l2_lambda: f64 = line
            .strip_prefix("lambda\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::format(n, "expected `lambda<TAB>value`"))?;

        let mut weights = Vec::with_capacity(NUM_LABELS * (dimension + 1));
        for label in StanceLabel::ALL {
            let (n, line) = next(label.as_str())?;
            let mut fields = line.split('\t');
            if fields.next() != Some(label.as_str()) {
                return Err(Error::format(n, format!("expected weight row for {label}")));
            }
            let row: Vec<f64> = fields
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::format(n, format!("bad weight: {e}")))?;
            if row.len() != dimension + 1 {
                return Err(Error::format(
                    n,
                    format!("expected {} weights, found {}", dimension + 1, row.len()),
                ));
            }
            weights.extend(row);
        }
        for (n, rest) in lines.enumerate() {
            if !rest.trim().is_empty() {
                return Err(Error::format(line_no + n + 1, "trailing content"));
            }
        }
        Self::from_weights(dimension, l2_lambda, weights)
    }
}

fn scores(weights: &[f64], dimension: usize, x: &FeatureVector) -> [f64; NUM_LABELS] {
    let stride = dimension + 1;
    let mut s = [0.0; NUM_LABELS];
    for (k, sk) in s.iter_mut().enumerate() {
        let row = &weights[k * stride..(k + 1) * stride];
        *sk = x.dot(row) + row[dimension];
    }
    s
}

/// Softmax with the maximum score subtracted first.
pub fn softmax(scores: [f64; NUM_LABELS]) -> [f64; NUM_LABELS] {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp = scores.map(|s| (s - max).exp());
    let z: f64 = exp.iter().sum();
    exp.map(|e| e / z)
}

fn log_sum_exp(scores: &[f64; NUM_LABELS]) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln()
}

/// Index of the largest value as a label; the first one wins ties.
pub fn argmax(values: &[f64; NUM_LABELS]) -> StanceLabel {
    let mut best = 0;
    for k in 1..NUM_LABELS {
        if values[k] > values[best] {
            best = k;
        }
    }
    StanceLabel::ALL[best]
}

/// Regularized negative log-likelihood over a fixed training set.
#[derive(Debug, Clone, Copy)]
pub struct Objective<'a> {
    examples: &'a [(FeatureVector, StanceLabel)],
    dimension: usize,
    l2_lambda: f64,
}

impl<'a> Objective<'a> {
    pub fn new(examples: &'a [(FeatureVector, StanceLabel)], l2_lambda: f64) -> Result<Self> {
        let first = examples
            .first()
            .ok_or_else(|| Error::InvalidArgument("no training examples".into()))?;
        let dimension = first.0.dimension();
        if let Some((x, _)) = examples.iter().find(|(x, _)| x.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                actual: x.dimension(),
            });
        }
        Ok(Objective {
            examples,
            dimension,
            l2_lambda,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of parameters, `3 * (dimension + 1)`.
    pub fn num_params(&self) -> usize {
        NUM_LABELS * (self.dimension + 1)
    }

    fn penalty(&self, weights: &[f64]) -> f64 {
        let stride = self.dimension + 1;
        let sq: f64 = weights
            .chunks_exact(stride)
            .map(|row| row[..self.dimension].iter().map(|w| w * w).sum::<f64>())
            .sum();
        0.5 * self.l2_lambda * sq
    }

    pub fn value(&self, weights: &[f64]) -> f64 {
        let nll: f64 = self
            .examples
            .iter()
            .map(|(x, y)| {
                let s = scores(weights, self.dimension, x);
                log_sum_exp(&s) - s[y.index()]
            })
            .sum();
        nll + self.penalty(weights)
    }

    /// Objective value; the gradient is written into `grad`.
    pub fn value_and_gradient(&self, weights: &[f64], grad: &mut [f64]) -> f64 {
        let stride = self.dimension + 1;
        grad.fill(0.0);
        let mut nll = 0.0;
        for (x, y) in self.examples {
            let s = scores(weights, self.dimension, x);
            nll += log_sum_exp(&s) - s[y.index()];
            let p = softmax(s);
            for (k, pk) in p.iter().enumerate() {
                let residual = pk - if k == y.index() { 1.0 } else { 0.0 };
                let row = &mut grad[k * stride..(k + 1) * stride];
                for &(j, v) in x.entries() {
                    row[j] += residual * v;
                }
                row[self.dimension] += residual;
            }
        }
        for (g_row, w_row) in grad
            .chunks_exact_mut(stride)
            .zip(weights.chunks_exact(stride))
        {
            for (g, w) in g_row[..self.dimension]
                .iter_mut()
                .zip(&w_row[..self.dimension])
            {
                *g += self.l2_lambda * w;
            }
        }
        nll + self.penalty(weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// The line search could not find a decreasing step.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub iterations: usize,
    /// Objective at `W = 0` followed by the value after every accepted step.
    pub objective_history: Vec<f64>,
    pub final_gradient_norm: f64,
    pub stop: StopReason,
}

impl TrainReport {
    pub fn final_objective(&self) -> f64 {
        *self
            .objective_history
            .last()
            .expect("history holds the initial value")
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, g| m.max(g.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn train(examples: &[(FeatureVector, StanceLabel)], cfg: &TrainConfig) -> Result<MaxEntModel> {
    train_with_report(examples, cfg).map(|(m, _)| m)
}

pub fn train_with_report(
    examples: &[(FeatureVector, StanceLabel)],
    cfg: &TrainConfig,
) -> Result<(MaxEntModel, TrainReport)> {
    cfg.validate()?;
    let objective = Objective::new(examples, cfg.l2_lambda)?;
    let n = objective.num_params();

    let mut w = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut f = objective.value_and_gradient(&w, &mut grad);
    let mut history = vec![f];

    let mut candidate = vec![0.0; n];
    let mut candidate_grad = vec![0.0; n];
    let mut step = 1.0;
    let mut iterations = 0;

    let stop = loop {
        if inf_norm(&grad) < cfg.gradient_tolerance {
            break StopReason::Converged;
        }
        if iterations == cfg.max_iterations {
            break StopReason::MaxIterations;
        }

        let g_sq = dot(&grad, &grad);
        let mut t = step;
        let accepted = loop {
            for ((c, wi), gi) in candidate.iter_mut().zip(&w).zip(&grad) {
                *c = wi - t * gi;
            }
            let f_new = objective.value_and_gradient(&candidate, &mut candidate_grad);
            if f_new.is_finite() && f_new <= f - ARMIJO_C * t * g_sq {
                break Some(f_new);
            }
            t *= BACKTRACK;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some(f_new) = accepted else {
            break StopReason::Stalled;
        };

        // Barzilai-Borwein trial length for the next step: s·s / s·y.
        let mut ss = 0.0;
        let mut sy = 0.0;
        for i in 0..n {
            let s = candidate[i] - w[i];
            ss += s * s;
            sy += s * (candidate_grad[i] - grad[i]);
        }
        step = if sy > 0.0 {
            (ss / sy).clamp(MIN_STEP, MAX_STEP)
        } else {
            t * 2.0
        };

        std::mem::swap(&mut w, &mut candidate);
        std::mem::swap(&mut grad, &mut candidate_grad);
        f = f_new;
        history.push(f);
        iterations += 1;
    };

    let report = TrainReport {
        iterations,
        objective_history: history,
        final_gradient_norm: inf_norm(&grad),
        stop,
    };
    let model = MaxEntModel::from_weights(objective.dimension(), cfg.l2_lambda, w)?;
    Ok((model, report))
}
