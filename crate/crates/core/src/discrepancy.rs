//! Minimal discrepancy of an isolated Fano cone singularity.
//!
//! Every non-identity element `g` of a chart group `Z_m` contributes the
//! value `(r w_1(g) + sum_{i>=2} w_i(g)) / m`, with weights reduced into
//! `[0, m)`. The minimal discrepancy is the minimum of these values and `r`,
//! minus one.

use serde::Serialize;

use crate::cone_model::{mul_mod, ChartData, ConePresentation, ModelError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Minimizer {
    pub chart: String,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyResult {
    pub md: Rational,
    pub minimizers: Vec<Minimizer>,
    pub capped_by_r: bool,
    pub klt: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
}

fn element_value(r: Rational, m: u64, weights: &[u64]) -> Rational {
    let transverse: u64 = weights.iter().skip(1).sum();
    (r * weights[0] as i64 + transverse as i64) / m as i64
}

/// Value of every non-identity element `k = 1..m-1` of the chart,
/// computed directly from `k w_i mod m`.
pub fn discrepancy_oracle(chart: &ChartData, r: Rational) -> Vec<(u64, Rational)> {
    (1..chart.m)
        .map(|k| {
            let w: Vec<u64> = chart
                .weights
                .iter()
                .map(|&x| mul_mod(k, x, chart.m))
                .collect();
            (k, element_value(r, chart.m, &w))
        })
        .collect()
}

/// Walks the cyclic group generated by the chart generator, accumulating the
/// element weights additively.
fn chart_values(chart: &ChartData, r: Rational) -> impl Iterator<Item = (u64, Rational)> + '_ {
    let m = chart.m;
    let mut current = vec![0u64; chart.weights.len()];
    (1..m).map(move |k| {
        for (c, &w) in current.iter_mut().zip(&chart.weights) {
            *c += w;
            if *c >= m {
                *c -= m;
            }
        }
        (k, element_value(r, m, &current))
    })
}

pub fn minimal_discrepancy(p: &ConePresentation) -> Result<DiscrepancyResult, ModelError> {
    p.validate()?;
    let mut best = p.r;
    let mut minimizers: Vec<Minimizer> = Vec::new();
    for chart in &p.charts {
        for (k, value) in chart_values(chart, p.r) {
            if value < best {
                best = value;
                minimizers.clear();
            }
            if value == best {
                minimizers.push(Minimizer {
                    chart: chart.label.clone(),
                    k,
                });
            }
        }
    }
    minimizers.sort();
    let md = best - 1;
    let klt = md > Rational::from_integer(-1);
    Ok(DiscrepancyResult {
        md,
        minimizers,
        capped_by_r: best == p.r,
        klt,
        diagnosis: (!klt).then(|| format!("not klt: md = {md} <= -1")),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShokurovReport {
    pub md: Rational,
    pub bound: Rational,
    pub within_bound: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Compares `md` with the bound `n - 1`; equality is flagged, not proven.
pub fn shokurov_check(p: &ConePresentation) -> Result<ShokurovReport, ModelError> {
    let md = minimal_discrepancy(p)?.md;
    let bound = Rational::from_integer(p.n as i64 - 1);
    let equality = md == bound;
    Ok(ShokurovReport {
        md,
        bound,
        within_bound: md <= bound,
        equality,
        note: equality.then(|| "smoothness expected per Shokurov".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_model::{from_weighted_action, projective_betti, Stratum, WeightedAction};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn a1_cone() -> ConePresentation {
        ConePresentation {
            n: 2,
            r: Rational::ONE,
            strata: vec![
                Stratum {
                    isotropy_order: 1,
                    component_id: "0".into(),
                    complex_dim: 1,
                    betti: projective_betti(1),
                    chart_ref: "p".into(),
                },
                Stratum {
                    isotropy_order: 2,
                    component_id: "0".into(),
                    complex_dim: 0,
                    betti: vec![1],
                    chart_ref: "p".into(),
                },
            ],
            charts: vec![ChartData::new("p", 2, vec![1, 1])],
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            discrepancy_oracle(&ChartData::new("c", 2, vec![1, 1]), q(3, 1)),
            vec![(1, q(2, 1))]
        );
        assert_eq!(
            discrepancy_oracle(&ChartData::new("c", 3, vec![1, 1]), q(5, 1)),
            vec![(1, q(2, 1)), (2, q(4, 1))]
        );
        assert!(discrepancy_oracle(&ChartData::new("c", 1, vec![0, 0]), q(7, 2)).is_empty());
    }

    #[test]
    fn smooth_cones_have_md_n_minus_1() {
        let w = WeightedAction::new(vec![1, 1, 1]).unwrap();
        let res = minimal_discrepancy(&from_weighted_action(&w).unwrap()).unwrap();
        assert_eq!(res.md, q(2, 1));
        assert!(res.capped_by_r);

        let w = WeightedAction::new(vec![3, 2]).unwrap();
        let res = minimal_discrepancy(&from_weighted_action(&w).unwrap()).unwrap();
        assert_eq!(res.md, q(1, 1));
        assert!(!res.capped_by_r);
        assert_eq!(
            res.minimizers,
            vec![Minimizer {
                chart: "axis1".into(),
                k: 1
            }]
        );
    }

    #[test]
    fn a1_quotient_is_canonical() {
        let res = minimal_discrepancy(&a1_cone()).unwrap();
        assert_eq!(res.md, q(0, 1));
        assert!(res.capped_by_r);
        assert!(res.klt);
        let sh = shokurov_check(&a1_cone()).unwrap();
        assert!(sh.within_bound && !sh.equality);
    }

    #[test]
    fn trivial_charts_reduce_to_r() {
        let mut p = a1_cone();
        p.strata.truncate(1);
        p.charts = vec![ChartData::new("p", 1, vec![0, 0])];
        p.r = q(2, 1);
        assert_eq!(minimal_discrepancy(&p).unwrap().md, q(1, 1));
    }

    #[test]
    fn shokurov_equality_for_smooth_cone() {
        let w = WeightedAction::new(vec![3, 2]).unwrap();
        let sh = shokurov_check(&from_weighted_action(&w).unwrap()).unwrap();
        assert!(sh.equality);
        assert_eq!(sh.note.as_deref(), Some("smoothness expected per Shokurov"));
    }

    #[test]
    fn invalid_presentation_rejected() {
        let mut p = a1_cone();
        p.r = q(0, 1);
        assert!(minimal_discrepancy(&p).is_err());
    }
}
