//! Robbin–Salamon and lower Conley–Zehnder indices of diagonal unitary paths.
//!
//! A path is `t -> diag(exp(2 pi i rho_1 t), ..., exp(2 pi i rho_d t))` for
//! `t` in `[0, T]`, with rational speeds. Everything is exact: the index of a
//! rotation factor only depends on the rational winding `rho * T`.

use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("path duration must be positive, got {0}")]
    NonPositiveDuration(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalPath {
    speeds: Vec<Rational>,
    duration: Rational,
}

impl DiagonalPath {
    pub fn new(speeds: Vec<Rational>, duration: Rational) -> Result<Self, PathError> {
        if !duration.is_positive() {
            return Err(PathError::NonPositiveDuration(duration));
        }
        Ok(DiagonalPath { speeds, duration })
    }

    pub fn speeds(&self) -> &[Rational] {
        &self.speeds
    }

    pub fn duration(&self) -> Rational {
        self.duration
    }

    /// Total winding `rho_j * T` of each factor.
    pub fn windings(&self) -> impl Iterator<Item = Rational> + '_ {
        self.speeds.iter().map(move |&s| s * self.duration)
    }

    /// The same path reparametrized to unit duration.
    pub fn normalized(&self) -> DiagonalPath {
        DiagonalPath {
            speeds: self.windings().collect(),
            duration: Rational::ONE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexBundle {
    pub rs: Rational,
    pub lcz: Rational,
    pub kernel_half_dim: usize,
    /// `lcz mod 2`; `None` when `lcz` is not an integer.
    pub z2: Option<u8>,
}

/// Robbin–Salamon index of `t -> exp(2 pi i speed t)`, `t` in `[0, duration]`.
///
/// With `x = speed * duration`: `2x` when `x` is an integer and
/// `2 floor(x) + 1` otherwise. For negative `x` this is the extension that
/// keeps the index additive under concatenation.
pub fn rs_index_factor(speed: Rational, duration: Rational) -> Rational {
    let winding = speed * duration;
    if winding.is_integer() {
        winding * 2
    } else {
        Rational::from_integer(2 * winding.floor() + 1)
    }
}

pub fn index_bundle(path: &DiagonalPath) -> IndexBundle {
    let rs: Rational = path
        .speeds
        .iter()
        .map(|&s| rs_index_factor(s, path.duration))
        .sum();
    let kernel_half_dim = path.windings().filter(Rational::is_integer).count();
    let lcz = rs - kernel_half_dim as i64;
    let z2 = lcz.to_integer().map(|v| v.rem_euclid(2) as u8);
    IndexBundle {
        rs,
        lcz,
        kernel_half_dim,
        z2,
    }
}

/// Robbin–Salamon index of the restriction of `speeds` to `[start, end]`,
/// in closed form: per factor `h(rho end) - h(rho start)` with
/// `h(x) = floor(x) + ceil(x)`.
pub fn rs_segment(speeds: &[Rational], start: Rational, end: Rational) -> Rational {
    let h = |x: Rational| x.floor() + x.ceil();
    speeds
        .iter()
        .map(|&s| Rational::from_integer(h(s * end) - h(s * start)))
        .sum()
}

/// Robbin–Salamon index over `[start, end]` by enumerating crossings.
///
/// A crossing of factor `j` is a time where `rho_j t` is an integer. It adds
/// `2 sign(rho_j)` in the interior and `sign(rho_j)` at either endpoint.
pub fn rs_segment_crossings(speeds: &[Rational], start: Rational, end: Rational) -> Rational {
    let mut total = 0i64;
    for &speed in speeds {
        if speed.is_zero() {
            continue;
        }
        let sign = speed.signum();
        let (a, b) = (speed * start, speed * end);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mut z = lo.ceil();
        while Rational::from_integer(z) <= hi {
            let t = Rational::from_integer(z) / speed;
            let weight = if t == start || t == end { 1 } else { 2 };
            total += sign * weight;
            z += 1;
        }
    }
    Rational::from_integer(total)
}

/// Independent crossing-count evaluation of `index_bundle(path).rs`.
pub fn rs_crossing_oracle(path: &DiagonalPath) -> Rational {
    rs_segment_crossings(&path.speeds, Rational::ZERO, path.duration)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Sum,
    Loop,
    Concatenation,
    DetSign,
    CrossingOracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub paths: Vec<usize>,
    pub detail: String,
}

/// Sign of `det(id - phi(T))` for the real `2d x 2d` matrix of the endpoint.
///
/// Each rotation block contributes `|1 - exp(i theta)|^2`, which vanishes
/// exactly when the winding is an integer and is positive otherwise.
fn det_sign_at_end(path: &DiagonalPath) -> i32 {
    if path.windings().any(|w| w.is_integer()) {
        0
    } else {
        1
    }
}

fn loop_shifts(d: usize) -> Vec<i64> {
    (0..d).map(|j| [1, -1, 2][j % 3]).collect()
}

/// Checks the sum, loop, concatenation and determinant-sign properties on
/// every path and every ordered pair; returns the failures.
pub fn check_axioms(paths: &[DiagonalPath]) -> Vec<AxiomFailure> {
    let mut failures = Vec::new();
    let bundles: Vec<IndexBundle> = paths.iter().map(index_bundle).collect();

    for (i, path) in paths.iter().enumerate() {
        let b = bundles[i];

        let oracle = rs_crossing_oracle(path);
        if oracle != b.rs {
            failures.push(AxiomFailure {
                axiom: Axiom::CrossingOracle,
                paths: vec![i],
                detail: format!("rs {} but crossings give {}", b.rs, oracle),
            });
        }

        // Composing with a loop of Maslov index sum(mu) shifts rs by 2 sum(mu).
        let shifts = loop_shifts(path.speeds.len());
        let shifted = DiagonalPath {
            speeds: path
                .speeds
                .iter()
                .zip(&shifts)
                .map(|(&s, &mu)| s + Rational::from_integer(mu) / path.duration)
                .collect(),
            duration: path.duration,
        };
        let sb = index_bundle(&shifted);
        let expected = b.rs + 2 * shifts.iter().sum::<i64>();
        if sb.rs != expected || sb.kernel_half_dim != b.kernel_half_dim {
            failures.push(AxiomFailure {
                axiom: Axiom::Loop,
                paths: vec![i],
                detail: format!("loop shift gave rs {}, expected {}", sb.rs, expected),
            });
        }

        for split in [Rational::new(1, 2), Rational::new(1, 3)] {
            let mid = path.duration * split;
            let head = DiagonalPath {
                speeds: path.speeds.clone(),
                duration: mid,
            };
            let total =
                index_bundle(&head).rs + rs_segment_crossings(&path.speeds, mid, path.duration);
            if total != b.rs {
                failures.push(AxiomFailure {
                    axiom: Axiom::Concatenation,
                    paths: vec![i],
                    detail: format!("split at {mid}: {} != {}", total, b.rs),
                });
            }
        }

        if b.kernel_half_dim == 0 {
            let d = path.speeds.len() as i64;
            let cz = b.rs.to_integer().expect("nondegenerate rs is integral");
            let parity_sign = if (d - cz).rem_euclid(2) == 0 { 1 } else { -1 };
            if parity_sign != det_sign_at_end(path) {
                failures.push(AxiomFailure {
                    axiom: Axiom::DetSign,
                    paths: vec![i],
                    detail: format!("(-1)^(d-cz) = {parity_sign} with cz = {cz}"),
                });
            }
        }
    }

    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            let (p1, q1) = (p.normalized(), q.normalized());
            let joined = DiagonalPath {
                speeds: p1.speeds.iter().chain(&q1.speeds).copied().collect(),
                duration: Rational::ONE,
            };
            let jb = index_bundle(&joined);
            let (a, b) = (bundles[i], bundles[j]);
            if jb.rs != a.rs + b.rs
                || jb.kernel_half_dim != a.kernel_half_dim + b.kernel_half_dim
                || jb.lcz != a.lcz + b.lcz
            {
                failures.push(AxiomFailure {
                    axiom: Axiom::Sum,
                    paths: vec![i, j],
                    detail: format!("direct sum gave {jb:?}, parts {a:?} and {b:?}"),
                });
            }
        }
    }
    failures
}
