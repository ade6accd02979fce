//! Morse–Bott families of closed Reeb orbits of the conic contact form.
//!
//! The Reeb flow is the circle action, rescaled so that the principal orbit
//! has period 1. A family is indexed by its isotropy group `Z_d`, a residue
//! `k` (the orbit closes after `k/d` of a turn), the number `ell` of extra
//! full turns and the stratum component. Indices are computed by two
//! independent engines:
//!
//! * the chart engine, from the local quotient chart `(m; w)` and the closed
//!   form `lSFT = (2/m)(r w_1 + sum_{i>=2} w_i) - 2` at `ell = 0`;
//! * the weighted engine, for `C^n` with a weighted action, summing rotation
//!   factors of the ambient diagonal path in the global trivialization.
//!
//! The chart engine also records the trivialization-dependent route (local
//! chart trivialization plus the anomaly correction coming from the `m`-fold
//! cover) so the two descriptions of the same number can be compared.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::cone_model::{mul_mod, ChartData, ConePresentation, ModelError, WeightedAction};
use crate::rational::Rational;
use crate::sympath_index::{index_bundle, DiagonalPath};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("max_period must be positive, got {0}")]
    NonPositivePeriod(Rational),
    #[error("Reeb ratio must be positive, got {0}")]
    NonPositiveRatio(Rational),
    #[error("chart {label}: {reason}")]
    BadChart { label: String, reason: String },
    #[error("signature with k = 0 and ell = 0 has period 0")]
    ZeroPeriod,
    #[error("k = {k} out of range for isotropy order {d}")]
    ResidueOutOfRange { k: u64, d: u64 },
    #[error("isotropy order {d} is not a stratum of the weighted action")]
    NotAnIsotropyOrder { d: u64 },
    #[error(
        "stratum {isotropy_order}/{component_id}: chart {chart} gives dimension {from_chart}, record says {recorded}"
    )]
    StratumMismatch {
        isotropy_order: u64,
        component_id: String,
        chart: String,
        from_chart: usize,
        recorded: usize,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// `R(M)`, the per-period Maslov index of the circle action on the contact
/// structure. It coincides with the Fano ratio `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReebRatio {
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilySignature {
    pub isotropy_order: u64,
    pub k: u64,
    pub ell: u64,
    pub component_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitFamily {
    pub isotropy_order: u64,
    pub k: u64,
    pub ell: u64,
    pub component_id: String,
    pub period: Rational,
    pub stratum_dim: usize,
    pub rs: Rational,
    pub lcz: Rational,
    pub z2: u8,
    pub lsft: Rational,
}

impl OrbitFamily {
    pub fn signature(&self) -> FamilySignature {
        FamilySignature {
            isotropy_order: self.isotropy_order,
            k: self.k,
            ell: self.ell,
            component_id: self.component_id.clone(),
        }
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.period
            .cmp(&other.period)
            .then(self.isotropy_order.cmp(&other.isotropy_order))
            .then_with(|| self.component_id.cmp(&other.component_id))
            .then(self.k.cmp(&other.k))
    }
}

/// Intermediate values of the trivialization route for an `ell = 0` orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrivializationTrace {
    /// lSFT in the local chart trivialization.
    pub lsft_tau: Rational,
    /// lSFT of the `m`-fold cover in the induced chart trivialization.
    pub lsft_tau_cover: Rational,
    /// lSFT of the `m`-fold cover in the global trivialization, `2r - 2`.
    pub lsft_cover: Rational,
    /// `lsft_tau + (e/m)(lsft_cover - lsft_tau_cover)` for the `e`-th iterate.
    pub corrected: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartIndices {
    pub period: Rational,
    pub stratum_dim: usize,
    pub rs: Rational,
    pub lcz: Rational,
    pub lsft: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TrivializationTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedIndices {
    pub period: Rational,
    pub stratum_dim: usize,
    pub rs: Rational,
    pub lcz: Rational,
    pub lsft: Rational,
    /// Parity of the integral `lcz`.
    pub z2: u8,
}

fn principal_indices(ell: u64, big_r: Rational, n: usize) -> (Rational, Rational, Rational) {
    let rs = big_r * (2 * ell as i64);
    let lcz = rs - (n as i64 - 1);
    let lsft = lcz + (n as i64 - 3);
    (rs, lcz, lsft)
}

fn check_chart(chart: &ChartData, n: usize) -> Result<(), OrbitError> {
    let bad = |reason: String| {
        Err(OrbitError::BadChart {
            label: chart.label.clone(),
            reason,
        })
    };
    if chart.m == 0 {
        return bad("m must be positive".into());
    }
    if chart.weights.len() != n {
        return bad(format!(
            "expected {n} weights, found {}",
            chart.weights.len()
        ));
    }
    if chart.weights.iter().any(|&w| w >= chart.m) {
        return bad("weights must lie in [0, m)".into());
    }
    if chart.m.gcd(&chart.weights[0]) != 1 {
        return bad("fiber weight not coprime to m".into());
    }
    Ok(())
}

fn trivialization_trace(
    chart: &ChartData,
    element: u64,
    r: Rational,
    n: usize,
) -> Option<TrivializationTrace> {
    let normalized = chart.normalized()?;
    let m = normalized.m;
    let e = mul_mod(element, chart.weights[0], m);
    let speeds: Vec<Rational> = normalized.weights[1..]
        .iter()
        .map(|&w| Rational::new((m - w) as i64, m as i64))
        .collect();
    let shift = n as i64 - 3;
    let local =
        index_bundle(&DiagonalPath::new(speeds.clone(), Rational::from_integer(e as i64)).ok()?);
    let cover = index_bundle(&DiagonalPath::new(speeds, Rational::from_integer(m as i64)).ok()?);
    let lsft_tau = local.lcz + shift;
    let lsft_tau_cover = cover.lcz + shift;
    let lsft_cover = r * 2 - 2;
    let corrected = lsft_tau + (lsft_cover - lsft_tau_cover) * Rational::new(e as i64, m as i64);
    Some(TrivializationTrace {
        lsft_tau,
        lsft_tau_cover,
        lsft_cover,
        corrected,
    })
}

/// Indices of the orbit given by the `k`-th power of the chart generator,
/// followed by `ell` full turns.
///
/// `k >= m` is reduced mod `m` with the quotient moved into `ell`; a multiple
/// of `m` is a cover of the principal orbit.
pub fn index_of_family_chart(
    chart: &ChartData,
    k: u64,
    ell: u64,
    r: Rational,
    big_r: Rational,
    n: usize,
) -> Result<ChartIndices, OrbitError> {
    check_chart(chart, n)?;
    if k == 0 && ell == 0 {
        return Err(OrbitError::ZeroPeriod);
    }
    let m = chart.m;
    let ell = ell + k / m;
    let k = k % m;
    if k == 0 {
        let (rs, lcz, lsft) = principal_indices(ell, big_r, n);
        return Ok(ChartIndices {
            period: Rational::from_integer(ell as i64),
            stratum_dim: n - 1,
            rs,
            lcz,
            lsft,
            trace: None,
        });
    }
    let w = chart.element_weights(k);
    let transverse: u64 = w[1..].iter().sum();
    let lsft0 = (r * w[0] as i64 + transverse as i64) * Rational::new(2, m as i64) - 2;
    let stratum_dim = chart.fixed_transverse(k);
    let lcz0 = lsft0 - (n as i64 - 3);
    let rs0 = lcz0 + stratum_dim as i64;
    let turns = big_r * (2 * ell as i64);
    Ok(ChartIndices {
        period: Rational::new(w[0] as i64, m as i64) + ell as i64,
        stratum_dim,
        rs: rs0 + turns,
        lcz: lcz0 + turns,
        lsft: lsft0 + turns,
        trace: trivialization_trace(chart, k, r, n),
    })
}

/// Indices of the family `(Z_d, k, ell)` of `C^n` with the weighted action
/// `w`, from the diagonal path `diag(exp(2 pi i a_j t))`, `t` in `[0, ell + k/d]`.
pub fn index_of_family_weighted(
    w: &WeightedAction,
    d: u64,
    k: u64,
    ell: u64,
) -> Result<WeightedIndices, OrbitError> {
    if !w.isotropy_orders().contains(&d) {
        return Err(OrbitError::NotAnIsotropyOrder { d });
    }
    let in_range = if d == 1 { k == 0 } else { (1..d).contains(&k) };
    if !in_range {
        return Err(OrbitError::ResidueOutOfRange { k, d });
    }
    if k == 0 && ell == 0 {
        return Err(OrbitError::ZeroPeriod);
    }
    let period = Rational::new(k as i64, d as i64) + ell as i64;
    let speeds = w
        .weights()
        .iter()
        .map(|&a| Rational::from_integer(a as i64))
        .collect();
    let path =
        DiagonalPath::new(speeds, period).map_err(|e| OrbitError::Inconsistent(e.to_string()))?;
    let bundle = index_bundle(&path);
    // One kernel direction is the Reeb/radial plane, not part of the stratum.
    let stratum_dim = bundle.kernel_half_dim.saturating_sub(1);
    let lcz = bundle.rs - stratum_dim as i64;
    let n = w.len() as i64;
    let z2 = lcz
        .to_integer()
        .map(|v| v.rem_euclid(2) as u8)
        .ok_or_else(|| OrbitError::Inconsistent(format!("non-integral lcz {lcz}")))?;
    Ok(WeightedIndices {
        period,
        stratum_dim,
        rs: bundle.rs,
        lcz,
        lsft: lcz + (n - 3),
        z2,
    })
}

/// `R(M)`, cross-checked against the principal orbit: its lSFT computed by
/// the chart engine must be `2R - 2`.
pub fn reeb_ratio(p: &ConePresentation) -> Result<ReebRatio, OrbitError> {
    p.validate()?;
    let value = p.r;
    let principal = p
        .principal_stratum()
        .and_then(|s| p.chart(&s.chart_ref))
        .ok_or_else(|| OrbitError::Inconsistent("principal stratum has no chart".into()))?;
    let idx = index_of_family_chart(principal, principal.m, 0, p.r, value, p.n)?;
    if idx.lsft != value * 2 - 2 || idx.rs != value * 2 {
        return Err(OrbitError::Inconsistent(format!(
            "principal orbit has lSFT {} but 2R-2 = {}",
            idx.lsft,
            value * 2 - 2
        )));
    }
    Ok(ReebRatio { value })
}

/// Residues `k` in `1..d` whose element `exp(2 pi i k/d)` lies in no strictly
/// smaller isotropy group of `orders`; smaller groups fix larger strata, so
/// those orbits belong to the larger stratum's families.
pub fn admissible_residues(d: u64, orders: &BTreeSet<u64>) -> Vec<u64> {
    (1..d)
        .filter(|&k| {
            let order = d / k.gcd(&d);
            !orders
                .iter()
                .any(|&e| e < d && d.is_multiple_of(e) && e.is_multiple_of(order))
        })
        .collect()
}

/// Every Morse–Bott family with `0 < period <= max_period`, sorted by
/// `(period, isotropy_order, component_id, k)`.
pub fn enumerate_families(
    p: &ConePresentation,
    max_period: Rational,
) -> Result<Vec<OrbitFamily>, OrbitError> {
    if !max_period.is_positive() {
        return Err(OrbitError::NonPositivePeriod(max_period));
    }
    let big_r = reeb_ratio(p)?.value;
    let n = p.n;
    let z2 = ((n - 1) % 2) as u8;
    let orders = p.isotropy_orders();
    let mut families = Vec::new();

    for stratum in &p.strata {
        let d = stratum.isotropy_order;
        if stratum.is_principal() {
            for ell in 1..=max_period.floor().max(0) as u64 {
                let (rs, lcz, lsft) = principal_indices(ell, big_r, n);
                families.push(OrbitFamily {
                    isotropy_order: 1,
                    k: 0,
                    ell,
                    component_id: stratum.component_id.clone(),
                    period: Rational::from_integer(ell as i64),
                    stratum_dim: stratum.complex_dim,
                    rs,
                    lcz,
                    z2,
                    lsft,
                });
            }
            continue;
        }
        let chart = p
            .chart(&stratum.chart_ref)
            .and_then(ChartData::normalized)
            .ok_or_else(|| OrbitError::BadChart {
                label: stratum.chart_ref.clone(),
                reason: "cannot normalize fiber weight".into(),
            })?;
        let step = chart.m / d;
        for k in admissible_residues(d, &orders) {
            for ell in 0.. {
                let period = Rational::new(k as i64, d as i64) + ell as i64;
                if period > max_period {
                    break;
                }
                let idx = index_of_family_chart(&chart, k * step, ell, p.r, big_r, n)?;
                if idx.stratum_dim != stratum.complex_dim {
                    return Err(OrbitError::StratumMismatch {
                        isotropy_order: d,
                        component_id: stratum.component_id.clone(),
                        chart: chart.label.clone(),
                        from_chart: idx.stratum_dim,
                        recorded: stratum.complex_dim,
                    });
                }
                debug_assert_eq!(idx.period, period);
                families.push(OrbitFamily {
                    isotropy_order: d,
                    k,
                    ell,
                    component_id: stratum.component_id.clone(),
                    period,
                    stratum_dim: idx.stratum_dim,
                    rs: idx.rs,
                    lcz: idx.lcz,
                    z2,
                    lsft: idx.lsft,
                });
            }
        }
    }
    families.sort_by(OrbitFamily::sort_key);
    Ok(families)
}

/// Infimum of lSFT over all Reeb orbits of the conic form: the minimum over
/// every non-identity chart element at `ell = 0`, joined with `2R - 2`.
pub fn inf_lsft(p: &ConePresentation) -> Result<Rational, OrbitError> {
    p.validate()?;
    if !p.r.is_positive() {
        return Err(OrbitError::NonPositiveRatio(p.r));
    }
    let big_r = reeb_ratio(p)?.value;
    let mut best = big_r * 2 - 2;
    for chart in &p.charts {
        for k in 1..chart.m {
            let idx = index_of_family_chart(chart, k, 0, p.r, big_r, p.n)?;
            if idx.lsft < best {
                best = idx.lsft;
            }
        }
    }
    Ok(best)
}

/// The same infimum taken over enumerated families of period at most 1
/// (all `ell = 0` families together with the simple principal orbit).
pub fn inf_lsft_over_families(p: &ConePresentation) -> Result<Rational, OrbitError> {
    enumerate_families(p, Rational::ONE)?
        .into_iter()
        .map(|f| f.lsft)
        .min()
        .ok_or_else(|| OrbitError::Inconsistent("no families of period <= 1".into()))
}
