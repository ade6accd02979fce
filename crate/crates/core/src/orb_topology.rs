//! Cohomology of weighted projective spaces and a rational rank check of the
//! Gysin sequence of a Boothby–Wang link over an orbifold base.

use std::fmt;

use serde::Serialize;

use crate::cone_model::WeightedAction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GradedGroup {
    Free(u64),
    Torsion(u64),
    Zero,
}

impl GradedGroup {
    pub fn rational_rank(&self) -> u64 {
        match self {
            GradedGroup::Free(r) => *r,
            _ => 0,
        }
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedGroup::Free(1) => write!(f, "Z"),
            GradedGroup::Free(r) => write!(f, "Z^{r}"),
            GradedGroup::Torsion(d) => write!(f, "Z_{d}"),
            GradedGroup::Zero => write!(f, "0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("cohomological degree must be nonnegative, got {0}")]
    NegativeDegree(i64),
    #[error("n must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("{which} sequence has {got} degrees, expected {expected} (degrees 0..={max})")]
    WrongLength {
        which: &'static str,
        got: usize,
        expected: usize,
        max: usize,
    },
    #[error("product of weights overflows")]
    Overflow,
}

/// Integral orbifold cohomology of `P(w)` in degree `k`.
pub fn wps_cohomology(w: &WeightedAction, k: i64) -> Result<GradedGroup, TopologyError> {
    if k < 0 {
        return Err(TopologyError::NegativeDegree(k));
    }
    if k % 2 == 1 {
        return Ok(GradedGroup::Zero);
    }
    let n = w.len() as i64;
    if k <= 2 * n - 2 {
        return Ok(GradedGroup::Free(1));
    }
    let d = w
        .weights()
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or(TopologyError::Overflow)?;
    Ok(if d == 1 {
        GradedGroup::Zero
    } else {
        GradedGroup::Torsion(d)
    })
}

/// Degrees `0..=max_degree` of `wps_cohomology`.
pub fn wps_table(w: &WeightedAction, max_degree: u64) -> Result<Vec<GradedGroup>, TopologyError> {
    (0..=max_degree as i64)
        .map(|k| wps_cohomology(w, k))
        .collect()
}

/// Fano index of `P(w)`: the sum of the weights. Exceeds `n` except for
/// projective space.
pub fn fano_index_wps(w: &WeightedAction) -> u64 {
    let sum = w.sum();
    let n = w.len() as u64;
    assert!(
        sum > n || w.weights().iter().all(|&a| a == 1),
        "Fano index {sum} <= n = {n} for non-trivial weights"
    );
    sum
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GysinReport {
    pub n: usize,
    /// The rational ranks admit an exact sequence.
    pub exact: bool,
    /// `alpha_ranks[k]` is the rank of `H^{k-1}_orb -> H^{k+1}_orb`, for
    /// `k` in `0..2n`; `None` when no exact assignment exists.
    pub alpha_ranks: Option<Vec<u64>>,
    /// Link cohomology vanishes in degrees `1..=2n-2`.
    pub link_vanishes: bool,
    /// Every `alpha_{k-1}` with `1 <= k <= 2n-3` is an isomorphism.
    pub alpha_isomorphisms: bool,
    /// Orbifold ranks are those of `P^{n-1}`.
    pub matches_projective: bool,
    pub consistent: bool,
    pub issues: Vec<String>,
}

/// Checks the rational Gysin sequence
/// `H^k(M) -> H^{k-1}(Y) -> H^{k+1}(Y) -> H^{k+1}(M)` on ranks.
///
/// Both sequences cover degrees `0..=2n`. The ranks of the maps are
/// determined by exactness from the left, so the check is a linear sweep.
pub fn gysin_rank_check(
    orb: &[GradedGroup],
    link: &[GradedGroup],
    n: usize,
) -> Result<GysinReport, TopologyError> {
    if n < 2 {
        return Err(TopologyError::DimensionTooSmall(n));
    }
    let len = 2 * n + 1;
    for (which, seq) in [("orbifold", orb), ("link", link)] {
        if seq.len() != len {
            return Err(TopologyError::WrongLength {
                which,
                got: seq.len(),
                expected: len,
                max: 2 * n,
            });
        }
    }
    let y: Vec<u64> = orb.iter().map(GradedGroup::rational_rank).collect();
    let m: Vec<u64> = link.iter().map(GradedGroup::rational_rank).collect();

    // 0 -> H^0(Y) -> H^0(M) -> H^{-1}(Y)=0 -> H^1(Y) -> H^1(M) -> H^0(Y) -> ...
    // Term triple for degree k: (H^k(Y), H^k(M), H^{k-1}(Y)).
    let mut terms = Vec::with_capacity(3 * len);
    for k in 0..2 * n {
        terms.push(y[k]);
        terms.push(m[k]);
        terms.push(if k == 0 { 0 } else { y[k - 1] });
    }
    terms.push(y[2 * n]);
    terms.push(m[2 * n]);
    terms.push(y[2 * n - 1]);

    // rho[i] is the rank of the map out of terms[i].
    let mut rho = Vec::with_capacity(terms.len());
    let mut incoming = 0u64;
    let mut exact = true;
    for (i, &dim) in terms.iter().enumerate() {
        let Some(out) = dim.checked_sub(incoming) else {
            exact = false;
            break;
        };
        let next = terms.get(i + 1).copied().unwrap_or(0);
        if out > next {
            exact = false;
            break;
        }
        rho.push(out);
        incoming = out;
    }
    // The sequence is truncated after H^{2n-1}(Y); the sweep forces the
    // final rank to vanish.
    let alpha_ranks: Option<Vec<u64>> = exact.then(|| (0..2 * n).map(|k| rho[3 * k + 2]).collect());

    let mut issues = Vec::new();
    if !exact {
        issues.push("rational ranks admit no exact Gysin sequence".to_string());
    }
    let link_vanishes = m[1..=2 * n - 2].iter().all(|&r| r == 0);
    if !link_vanishes {
        let degrees: Vec<String> = (1..=2 * n - 2)
            .filter(|&k| m[k] != 0)
            .map(|k| k.to_string())
            .collect();
        issues.push(format!(
            "link cohomology nonzero in degree(s) {}",
            degrees.join(", ")
        ));
    }
    let alpha_isomorphisms = match &alpha_ranks {
        Some(a) => (1..=2 * n - 3).all(|k| {
            let ok = a[k] == y[k - 1] && a[k] == y[k + 1];
            if !ok && link_vanishes {
                issues.push(format!("alpha_{} is not an isomorphism", k - 1));
            }
            ok
        }),
        None => false,
    };
    let mut matches_projective = true;
    for (k, &r) in y.iter().enumerate() {
        let expected = u64::from(k % 2 == 0 && k <= 2 * n - 2);
        if r != expected {
            matches_projective = false;
            issues.push(format!(
                "orbifold rank {r} in degree {k}, projective space has {expected}"
            ));
        }
    }
    let consistent = exact && link_vanishes && alpha_isomorphisms && matches_projective;
    Ok(GysinReport {
        n,
        exact,
        alpha_ranks,
        link_vanishes,
        alpha_isomorphisms,
        matches_projective,
        consistent,
        issues,
    })
}

/// Rational cohomology of `P^{n-1}`, degrees `0..=2n`.
pub fn projective_ranks(n: usize) -> Vec<GradedGroup> {
    (0..=2 * n)
        .map(|k| {
            if k % 2 == 0 && k <= 2 * n - 2 {
                GradedGroup::Free(1)
            } else {
                GradedGroup::Zero
            }
        })
        .collect()
}

/// Rational cohomology of a `(2n-1)`-dimensional homology sphere, degrees `0..=2n`.
pub fn homology_sphere_ranks(n: usize) -> Vec<GradedGroup> {
    (0..=2 * n)
        .map(|k| {
            if k == 0 || k == 2 * n - 1 {
                GradedGroup::Free(1)
            } else {
                GradedGroup::Zero
            }
        })
        .collect()
}
