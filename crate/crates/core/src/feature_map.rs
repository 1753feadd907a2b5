//! Pauli-rotation feature maps.
//!
//! A map is a list of axis patterns (`"Z"`, `"ZZ"`, `"Y"`, ...), a shared
//! rotation factor `alpha` and a repetition depth. Each repetition is a
//! Hadamard layer followed by `exp(i · alpha · φ_S(x) · P_S)` for every
//! expanded term `P_S`, in expansion order. One qubit carries one feature.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{Axis, PauliString, StateVector};

/// How a multi-qubit term turns the features on its subset into an angle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataMap {
    /// `(π − x_i)(π − x_j)` for pairs.
    #[default]
    ProductShifted,
    /// `x_i · x_j` for pairs.
    PlainProduct,
}

impl FromStr for DataMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product_shifted" => Ok(DataMap::ProductShifted),
            "plain_product" => Ok(DataMap::PlainProduct),
            other => Err(Error::Config(format!("unknown data_map '{other}'"))),
        }
    }
}

fn default_depth() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureMapSpec {
    pub paulis: Vec<String>,
    pub alpha: f64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub data_map: DataMap,
}

impl FeatureMapSpec {
    pub fn new(paulis: &[&str], alpha: f64) -> Self {
        FeatureMapSpec {
            paulis: paulis.iter().map(|p| p.to_string()).collect(),
            alpha,
            depth: default_depth(),
            data_map: DataMap::default(),
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_data_map(mut self, data_map: DataMap) -> Self {
        self.data_map = data_map;
        self
    }

    /// Checks everything that does not depend on the feature count.
    pub fn validate(&self) -> Result<()> {
        if self.paulis.is_empty() {
            return Err(Error::Config("feature map needs at least one pattern".into()));
        }
        for p in &self.paulis {
            if p.is_empty() || p.chars().any(|c| Axis::from_char(c).is_none()) {
                return Err(Error::Config(format!(
                    "pattern '{p}' must be a non-empty string over X, Y, Z"
                )));
            }
        }
        if !self.alpha.is_finite() {
            return Err(Error::Config(format!("alpha {} is not finite", self.alpha)));
        }
        if self.depth == 0 {
            return Err(Error::Config("depth must be at least 1".into()));
        }
        Ok(())
    }

    /// Short human label, e.g. `Z+ZZ`.
    pub fn label(&self) -> String {
        self.paulis.join("+")
    }
}

/// One expanded term: a Pauli string and the feature indices it reads.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub pauli: PauliString,
    pub subset: Vec<usize>,
}

/// Expands patterns into concrete terms over `n_features` qubits.
///
/// A k-character pattern yields one term per increasing index tuple
/// `i_1 < … < i_k`, in lexicographic order; patterns keep declared order.
pub fn expand_terms(spec: &FeatureMapSpec, n_features: usize) -> Result<Vec<Term>> {
    spec.validate()?;
    let mut terms = Vec::new();
    for pattern in &spec.paulis {
        let axes: Vec<Axis> = pattern.chars().filter_map(Axis::from_char).collect();
        let k = axes.len();
        if k > n_features {
            return Err(Error::Config(format!(
                "pattern '{pattern}' needs {k} qubits but there are {n_features} features"
            )));
        }
        for subset in combinations(n_features, k) {
            let pauli = PauliString::new(subset.iter().copied().zip(axes.iter().copied()).collect())?;
            terms.push(Term { pauli, subset });
        }
    }
    Ok(terms)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // advance the rightmost index that still has room
        let mut i = k;
        while i > 0 && current[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// `φ_S(x)`: the identity on singletons, a product on pairs.
pub fn data_map_phi(subset: &[usize], x: &[f64], data_map: DataMap) -> Result<f64> {
    if let Some(&i) = subset.iter().find(|&&i| i >= x.len()) {
        return Err(Error::Argument(format!(
            "feature index {i} out of range for a {}-feature point",
            x.len()
        )));
    }
    match *subset {
        [] => Err(Error::Argument("empty feature subset".into())),
        [i] => Ok(x[i]),
        [i, j] => Ok(match data_map {
            DataMap::ProductShifted => (PI - x[i]) * (PI - x[j]),
            DataMap::PlainProduct => x[i] * x[j],
        }),
        _ => Err(Error::UnsupportedTerm(format!(
            "{}-local terms are not supported",
            subset.len()
        ))),
    }
}

/// A spec bound to a feature count, with its terms expanded once.
#[derive(Clone, Debug)]
pub struct FeatureMap {
    spec: FeatureMapSpec,
    n_features: usize,
    terms: Vec<Term>,
}

impl FeatureMap {
    pub fn new(spec: &FeatureMapSpec, n_features: usize) -> Result<Self> {
        let terms = expand_terms(spec, n_features)?;
        if let Some(t) = terms.iter().find(|t| t.subset.len() > 2) {
            return Err(Error::UnsupportedTerm(format!(
                "term {} acts on {} qubits; at most 2 are supported",
                t.pauli,
                t.subset.len()
            )));
        }
        Ok(FeatureMap {
            spec: spec.clone(),
            n_features,
            terms,
        })
    }

    pub fn spec(&self) -> &FeatureMapSpec {
        &self.spec
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `Φ(x) = (U_φ(x) H^{⊗n})^depth |0…0⟩`.
    pub fn state(&self, x: &[f64]) -> Result<StateVector> {
        if x.len() != self.n_features {
            return Err(Error::Argument(format!(
                "point has {} features, feature map expects {}",
                x.len(),
                self.n_features
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("non-finite feature value {v}")));
        }
        let angles = self
            .terms
            .iter()
            .map(|t| data_map_phi(&t.subset, x, self.spec.data_map).map(|phi| self.spec.alpha * phi))
            .collect::<Result<Vec<f64>>>()?;

        let mut state = StateVector::new_zero_state(self.n_features)?;
        for _ in 0..self.spec.depth {
            state = state.apply_hadamard_all();
            for (term, &angle) in self.terms.iter().zip(&angles) {
                state = state.apply_pauli_exponential(&term.pauli, angle)?;
            }
        }
        Ok(state)
    }
}

pub fn build_feature_state(x: &[f64], spec: &FeatureMapSpec) -> Result<StateVector> {
    FeatureMap::new(spec, x.len())?.state(x)
}
