//! Combinatorial model of a quasi-regular Fano cone.
//!
//! A cone is described by its dimension `n`, the Fano ratio `r`, the local
//! cyclic quotient charts of the orbifold line bundle along the singular
//! locus of the base, and the isotropy strata of the Reeb circle action with
//! their rational Betti numbers. Charts are stored fiber-first: the chart
//! `(m; w1, ..., wn)` is `C x C^{n-1} / Z_m` with the generator acting by
//! `exp(2 pi i w_j / m)` on coordinate `j`, coordinate 1 being the fiber.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub const FORMAT_TAG: &str = "fanocone/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("a cone needs at least two weights, got {0}")]
    TooFewWeights(usize),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weights have common divisor {0}")]
    NonPrimitiveWeights(u64),
    #[error("quotient order {order} is not coprime to weight {weight}")]
    QuotientNotFree { order: u64, weight: u64 },
    #[error("quotient order must be positive")]
    ZeroQuotientOrder,
    #[error("invalid presentation: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A cyclic quotient chart `(m; w1, ..., wn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartData {
    pub m: u64,
    pub weights: Vec<u64>,
    pub label: String,
}

impl ChartData {
    pub fn new(label: impl Into<String>, m: u64, weights: Vec<u64>) -> Self {
        ChartData {
            m,
            weights,
            label: label.into(),
        }
    }

    /// Weights `(k w_i mod m)` of the `k`-th power of the generator.
    pub fn element_weights(&self, k: u64) -> Vec<u64> {
        self.weights
            .iter()
            .map(|&w| mul_mod(k, w, self.m))
            .collect()
    }

    /// Number of transverse coordinates (index >= 2) fixed by the `k`-th power.
    pub fn fixed_transverse(&self, k: u64) -> usize {
        self.weights
            .iter()
            .skip(1)
            .filter(|&&w| mul_mod(k, w, self.m) == 0)
            .count()
    }

    /// The same chart with the generator changed so that the fiber weight is 1.
    ///
    /// Returns `None` when the fiber weight is not a unit mod `m`.
    pub fn normalized(&self) -> Option<ChartData> {
        if self.m == 1 {
            return Some(ChartData::new(
                self.label.clone(),
                1,
                vec![0; self.weights.len()],
            ));
        }
        let fiber = *self.weights.first()?;
        let inv = inverse_mod(fiber, self.m)?;
        Some(ChartData::new(
            self.label.clone(),
            self.m,
            self.element_weights(inv),
        ))
    }
}

/// A connected component of an isotropy stratum of the Reeb circle action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub isotropy_order: u64,
    pub component_id: String,
    pub complex_dim: usize,
    pub betti: Vec<u64>,
    pub chart_ref: String,
}

impl Stratum {
    pub fn is_principal(&self) -> bool {
        self.isotropy_order == 1
    }
}

/// The full combinatorial input describing a Fano cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConePresentation {
    pub n: usize,
    pub r: Rational,
    pub strata: Vec<Stratum>,
    pub charts: Vec<ChartData>,
}

impl ConePresentation {
    pub fn chart(&self, label: &str) -> Option<&ChartData> {
        self.charts.iter().find(|c| c.label == label)
    }

    pub fn principal_stratum(&self) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.is_principal())
    }

    /// The set of isotropy orders occurring among the strata.
    pub fn isotropy_orders(&self) -> BTreeSet<u64> {
        self.strata.iter().map(|s| s.isotropy_order).collect()
    }

    /// `N = lcm` of all isotropy orders.
    pub fn isotropy_lcm(&self) -> u64 {
        self.strata
            .iter()
            .fold(1u64, |acc, s| acc.lcm(&s.isotropy_order.max(1)))
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let violations = validate_presentation(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    /// One-line description used in reports.
    pub fn summary(&self) -> String {
        format!(
            "n={} r={} strata={} charts={}",
            self.n,
            self.r,
            self.strata.len(),
            self.charts.len()
        )
    }
}

/// A primitive weighted `C*`-action `t . z = (t^{a_1} z_1, ..., t^{a_n} z_n)` on `C^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WeightedAction {
    a: Vec<u64>,
}

impl WeightedAction {
    pub fn new(a: Vec<u64>) -> Result<Self, ModelError> {
        if a.is_empty() {
            return Err(ModelError::EmptyWeights);
        }
        if a.contains(&0) {
            return Err(ModelError::NonPositiveWeight);
        }
        let g = a.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(ModelError::NonPrimitiveWeights(g));
        }
        Ok(WeightedAction { a })
    }

    pub fn weights(&self) -> &[u64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.a.iter().sum()
    }

    /// Distinct gcds of nonempty subsets of the weights, in increasing order.
    ///
    /// These are exactly the isotropy orders of the circle action on the unit
    /// sphere: the locus with isotropy `Z_d` is the sphere in the coordinate
    /// subspace `{i : d | a_i}`.
    pub fn isotropy_orders(&self) -> BTreeSet<u64> {
        let mut set: BTreeSet<u64> = self.a.iter().copied().collect();
        loop {
            let extra: Vec<u64> = set
                .iter()
                .flat_map(|&x| self.a.iter().map(move |&y| x.gcd(&y)))
                .filter(|g| !set.contains(g))
                .collect();
            if extra.is_empty() {
                return set;
            }
            set.extend(extra);
        }
    }

    /// Coordinates whose weight is divisible by `d` (0-based).
    pub fn axes_divisible_by(&self, d: u64) -> Vec<usize> {
        (0..self.a.len()).filter(|&i| self.a[i].is_multiple_of(d)).collect()
    }
}

impl TryFrom<Vec<u64>> for WeightedAction {
    type Error = ModelError;
    fn try_from(a: Vec<u64>) -> Result<Self, Self::Error> {
        WeightedAction::new(a)
    }
}

impl From<WeightedAction> for Vec<u64> {
    fn from(w: WeightedAction) -> Self {
        w.a
    }
}

/// One violated invariant, with the place it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub locus: String,
    pub message: String,
}

impl Violation {
    fn new(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            locus: locus.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.locus, self.message)
    }
}

/// Every violated invariant of `p`; empty when the presentation is valid.
pub fn validate_presentation(p: &ConePresentation) -> Vec<Violation> {
    let mut out = Vec::new();

    if p.n < 2 {
        out.push(Violation::new("presentation", format!("n = {} < 2", p.n)));
    }
    if !p.r.is_positive() {
        out.push(Violation::new(
            "presentation",
            format!("Fano condition violated: r = {} <= 0", p.r),
        ));
    }

    let mut labels = HashSet::new();
    for chart in &p.charts {
        let locus = format!("chart {}", chart.label);
        if !labels.insert(chart.label.as_str()) {
            out.push(Violation::new(&locus, "duplicate chart label"));
        }
        if chart.m == 0 {
            out.push(Violation::new(&locus, "m must be positive"));
            continue;
        }
        if chart.weights.len() != p.n {
            out.push(Violation::new(
                &locus,
                format!("expected {} weights, found {}", p.n, chart.weights.len()),
            ));
        }
        if let Some(&w) = chart.weights.iter().find(|&&w| w >= chart.m) {
            out.push(Violation::new(
                &locus,
                format!("weight {w} outside [0, {})", chart.m),
            ));
        }
        if let Some(&w1) = chart.weights.first() {
            if chart.m.gcd(&w1) != 1 {
                out.push(Violation::new(
                    &locus,
                    format!("gcd(m,w₁)≠1 (m={}, w₁={w1})", chart.m),
                ));
            }
        }
    }
    let charts_by_label: HashMap<&str, &ChartData> =
        p.charts.iter().map(|c| (c.label.as_str(), c)).collect();

    let principal: Vec<&Stratum> = p.strata.iter().filter(|s| s.is_principal()).collect();
    match principal.as_slice() {
        [] => out.push(Violation::new("strata", "no isotropy-1 stratum")),
        [s] if p.n >= 1 && s.complex_dim != p.n - 1 => out.push(Violation::new(
            format!("stratum 1/{}", s.component_id),
            format!("principal stratum has complex_dim {} != n-1", s.complex_dim),
        )),
        [_] => {}
        _ => out.push(Violation::new("strata", "more than one isotropy-1 stratum")),
    }

    let mut ids = HashSet::new();
    for s in &p.strata {
        let locus = format!("stratum {}/{}", s.isotropy_order, s.component_id);
        if !ids.insert((s.isotropy_order, s.component_id.as_str())) {
            out.push(Violation::new(&locus, "duplicate stratum"));
        }
        if s.isotropy_order == 0 {
            out.push(Violation::new(&locus, "isotropy order must be positive"));
            continue;
        }
        if s.betti.len() != 2 * s.complex_dim + 1 {
            out.push(Violation::new(
                &locus,
                format!(
                    "betti has length {} but 2*complex_dim+1 = {}",
                    s.betti.len(),
                    2 * s.complex_dim + 1
                ),
            ));
        }
        if s.betti.first().copied().unwrap_or(0) < 1 {
            out.push(Violation::new(&locus, "b0 must be at least 1"));
        }
        if p.n >= 1 && s.complex_dim > p.n - 1 {
            out.push(Violation::new(&locus, "complex_dim exceeds n-1"));
        }
        match charts_by_label.get(s.chart_ref.as_str()) {
            None => out.push(Violation::new(
                &locus,
                format!("chart_ref {:?} does not resolve", s.chart_ref),
            )),
            Some(chart) if chart.m > 0 => {
                if chart.m % s.isotropy_order != 0 {
                    out.push(Violation::new(
                        &locus,
                        format!(
                            "isotropy order does not divide the order {} of chart {}",
                            chart.m, chart.label
                        ),
                    ));
                } else if !s.is_principal() && chart.weights.len() == p.n {
                    let fixed = chart.fixed_transverse(chart.m / s.isotropy_order);
                    if fixed != s.complex_dim {
                        out.push(Violation::new(
                            &locus,
                            format!(
                                "chart {} fixes {} transverse directions, stratum has complex_dim {}",
                                chart.label, fixed, s.complex_dim
                            ),
                        ));
                    }
                }
            }
            Some(_) => {}
        }
    }
    out
}

/// Rational Betti numbers of complex projective space of the given dimension.
pub fn projective_betti(dim: usize) -> Vec<u64> {
    (0..=2 * dim).map(|j| u64::from(j % 2 == 0)).collect()
}

fn axis_label(j: usize) -> String {
    format!("axis{}", j + 1)
}

fn axis_charts(w: &WeightedAction, fiber_twist: u64) -> Vec<ChartData> {
    let a = w.weights();
    (0..a.len())
        .map(|j| {
            let m = a[j];
            let mut weights = vec![fiber_twist % m];
            weights.extend(
                (0..a.len())
                    .filter(|&i| i != j)
                    .map(|i| ((m as i64 - a[i] as i64).rem_euclid(m as i64)) as u64),
            );
            ChartData::new(axis_label(j), m, weights)
        })
        .collect()
}

fn coordinate_strata(w: &WeightedAction) -> Vec<Stratum> {
    w.isotropy_orders()
        .into_iter()
        .map(|d| {
            let axes = w.axes_divisible_by(d);
            let dim = axes.len() - 1;
            Stratum {
                isotropy_order: d,
                component_id: "0".to_string(),
                complex_dim: dim,
                betti: projective_betti(dim),
                chart_ref: axis_label(axes[0]),
            }
        })
        .collect()
}

/// Presentation of `C^n` with the weighted action `w`, as a cone over `P(w)`.
pub fn from_weighted_action(w: &WeightedAction) -> Result<ConePresentation, ModelError> {
    if w.len() < 2 {
        return Err(ModelError::TooFewWeights(w.len()));
    }
    Ok(ConePresentation {
        n: w.len(),
        r: Rational::from_integer(w.sum() as i64),
        strata: coordinate_strata(w),
        charts: axis_charts(w, 1),
    })
}

/// Presentation of the cyclic quotient `C^n / mu_c`, where `mu_c` acts through
/// the weighted action `w`; it is the cone over `P(w)` polarized by `O(c)`.
///
/// The quotient has an isolated singularity exactly when `c` is coprime to
/// every weight, which is required here.
pub fn quotient_cone(w: &WeightedAction, order: u64) -> Result<ConePresentation, ModelError> {
    if w.len() < 2 {
        return Err(ModelError::TooFewWeights(w.len()));
    }
    if order == 0 {
        return Err(ModelError::ZeroQuotientOrder);
    }
    if let Some(&weight) = w.weights().iter().find(|&&a| a.gcd(&order) != 1) {
        return Err(ModelError::QuotientNotFree { order, weight });
    }
    Ok(ConePresentation {
        n: w.len(),
        r: Rational::new(w.sum() as i64, order as i64),
        strata: coordinate_strata(w),
        charts: axis_charts(w, order),
    })
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let eg = (a as i64).extended_gcd(&(m as i64));
    (eg.gcd == 1).then(|| eg.x.rem_euclid(m as i64) as u64)
}

/// Input document accepted by the command-line tools.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputDocument {
    WeightedAction {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        format: Option<String>,
        weights: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        homology_sphere_link: Option<bool>,
    },
    Presentation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        format: Option<String>,
        n: usize,
        r: Rational,
        strata: Vec<Stratum>,
        charts: Vec<ChartData>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        homology_sphere_link: Option<bool>,
    },
}

/// A parsed and validated input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedInput {
    pub presentation: ConePresentation,
    pub action: Option<WeightedAction>,
    pub homology_sphere_link: bool,
}

impl InputDocument {
    /// Builds and validates the presentation described by the document.
    ///
    /// The link of a weighted action is the round sphere, so the
    /// homology-sphere flag defaults to true there and to false otherwise.
    pub fn load(self) -> Result<LoadedInput, LoadError> {
        let (format, loaded) = match self {
            InputDocument::WeightedAction {
                format,
                weights,
                homology_sphere_link,
            } => {
                let action = WeightedAction::new(weights)?;
                let presentation = from_weighted_action(&action)?;
                (
                    format,
                    LoadedInput {
                        presentation,
                        action: Some(action),
                        homology_sphere_link: homology_sphere_link.unwrap_or(true),
                    },
                )
            }
            InputDocument::Presentation {
                format,
                n,
                r,
                strata,
                charts,
                homology_sphere_link,
            } => (
                format,
                LoadedInput {
                    presentation: ConePresentation {
                        n,
                        r,
                        strata,
                        charts,
                    },
                    action: None,
                    homology_sphere_link: homology_sphere_link.unwrap_or(false),
                },
            ),
        };
        if let Some(tag) = format {
            if tag != FORMAT_TAG {
                return Err(LoadError::Format(tag));
            }
        }
        loaded.presentation.validate()?;
        Ok(loaded)
    }

    /// Full presentation document for `p`, suitable for re-import.
    pub fn export(p: &ConePresentation, homology_sphere_link: bool) -> InputDocument {
        InputDocument::Presentation {
            format: Some(FORMAT_TAG.to_string()),
            n: p.n,
            r: p.r,
            strata: p.strata.clone(),
            charts: p.charts.clone(),
            homology_sphere_link: Some(homology_sphere_link),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("unsupported format {0:?}, expected \"fanocone/1\"")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
