//! First page of the period-filtration spectral sequence for positive
//! S¹-equivariant symplectic homology, and what can be read off from it.
//!
//! A family `(G, k, ell, i)` contributes `H_j(Y^i_G; Q)` at filtration level
//! `p = N (ell + k/|G|)` and total degree `lcz + j`, with `N` the lcm of the
//! isotropy orders. Every differential lowers both the rational degree and the
//! Z/2 grading by one, which gives two exact conclusions without computing
//! any differential:
//!
//! * a minimal-degree `H_0` class with maximal `p` survives, so the minimal
//!   nonzero degree of the homology is the minimal `lcz`;
//! * a page whose entries all carry the same Z/2 grade degenerates.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cone_model::{ConePresentation, ModelError};
use crate::rational::Rational;
use crate::reeb_orbits::{enumerate_families, reeb_ratio, FamilySignature, OrbitError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PageError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("Reeb ratio {0} is not positive; the page has no completeness bound")]
    NoCompletenessBound(Rational),
    #[error("the page is empty")]
    EmptyPage,
    #[error("survivor certification failed: {0}")]
    Certification(String),
}

impl From<ModelError> for PageError {
    fn from(e: ModelError) -> Self {
        PageError::Orbit(e.into())
    }
}

/// Position of an entry; ordered by degree first, then filtration level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct E1Key {
    pub degree: Rational,
    pub p: u64,
    pub z2: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Contribution {
    pub rank: u64,
    pub source: FamilySignature,
    pub homology_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Page {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub max_degree: Rational,
    pub entries: BTreeMap<E1Key, Vec<E1Contribution>>,
}

/// Flat row of the page, as emitted in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Row {
    pub p: u64,
    pub degree: Rational,
    pub z2: u8,
    pub rank: u64,
    pub source: FamilySignature,
    pub homology_degree: usize,
}

impl E1Page {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rows sorted by `(degree, p, z2)` and then by source.
    pub fn rows(&self) -> Vec<E1Row> {
        self.entries
            .iter()
            .flat_map(|(key, list)| {
                list.iter().map(move |c| E1Row {
                    p: key.p,
                    degree: key.degree,
                    z2: key.z2,
                    rank: c.rank,
                    source: c.source.clone(),
                    homology_degree: c.homology_degree,
                })
            })
            .collect()
    }

    /// Total rank in each degree.
    pub fn total_ranks(&self) -> BTreeMap<Rational, u64> {
        let mut out = BTreeMap::new();
        for (key, list) in &self.entries {
            *out.entry(key.degree).or_insert(0) += list.iter().map(|c| c.rank).sum::<u64>();
        }
        out
    }

    pub fn is_monochromatic(&self) -> bool {
        let mut grades = self.entries.keys().map(|k| k.z2);
        match grades.next() {
            None => true,
            Some(first) => grades.all(|g| g == first),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SHProfile {
    pub min_degree: Rational,
    pub degenerate: bool,
    pub ranks: BTreeMap<Rational, u64>,
}

/// The class certified to survive, and the page facts the certificate used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivorCertificate {
    pub min_degree: Rational,
    pub p: u64,
    pub z2: u8,
    pub source: FamilySignature,
    /// Entries one degree up with larger `p` and opposite grade: the only
    /// possible sources of a differential hitting the survivor.
    pub potential_sources: usize,
}

/// Period up to which families can contribute in degree at most
/// `max_degree`; `None` when every family lies above it.
///
/// Along a tower `ell -> ell + 1` the index grows by `2R > 0`, so families
/// beyond this bound only contribute above `max_degree`.
pub fn period_bound(
    p: &ConePresentation,
    max_degree: Rational,
) -> Result<Option<Rational>, PageError> {
    let big_r = reeb_ratio(p)?.value;
    if !big_r.is_positive() {
        return Err(PageError::NoCompletenessBound(big_r));
    }
    // Lowest start of any tower: ell = 0 families have period < 1, and the
    // principal tower extrapolates to -(n-1) at ell = 0.
    let base = enumerate_families(p, Rational::ONE)?
        .iter()
        .filter(|f| f.ell == 0)
        .map(|f| f.lcz)
        .chain(std::iter::once(Rational::from_integer(1 - p.n as i64)))
        .min()
        .expect("chain is nonempty");
    if max_degree < base {
        return Ok(None);
    }
    Ok(Some(Rational::from_integer(
        ((max_degree - base) / (big_r * 2)).floor() + 1,
    )))
}

/// Assembles every entry of total degree at most `max_degree`.
pub fn assemble_e1(p: &ConePresentation, max_degree: Rational) -> Result<E1Page, PageError> {
    let n = p.n;
    let mut page = E1Page {
        n,
        big_n: p.isotropy_lcm(),
        max_degree,
        entries: BTreeMap::new(),
    };
    let Some(max_period) = period_bound(p, max_degree)? else {
        return Ok(page);
    };
    let big_n = page.big_n;

    let betti: HashMap<(u64, &str), &[u64]> = p
        .strata
        .iter()
        .map(|s| {
            (
                (s.isotropy_order, s.component_id.as_str()),
                s.betti.as_slice(),
            )
        })
        .collect();

    for family in enumerate_families(p, max_period)? {
        if family.lcz > max_degree {
            continue;
        }
        let level = (family.period * big_n as i64)
            .to_integer()
            .expect("N * period is an integer") as u64;
        let b = betti[&(family.isotropy_order, family.component_id.as_str())];
        for (j, &rank) in b.iter().enumerate() {
            let degree = family.lcz + j as i64;
            if rank == 0 || degree > max_degree {
                continue;
            }
            let key = E1Key {
                degree,
                p: level,
                z2: ((n - 1 + j) % 2) as u8,
            };
            page.entries.entry(key).or_default().push(E1Contribution {
                rank,
                source: family.signature(),
                homology_degree: j,
            });
        }
    }
    for list in page.entries.values_mut() {
        list.sort_by(|a, b| (&a.source, a.homology_degree).cmp(&(&b.source, b.homology_degree)));
    }
    Ok(page)
}

/// Minimal nonzero degree of the homology, from a page cut off at the
/// simple principal orbit, whose `H_0` class always lies on the page.
pub fn sh_min_degree(p: &ConePresentation) -> Result<SurvivorCertificate, PageError> {
    let big_r = reeb_ratio(p)?.value;
    let cutoff = big_r * 2 - (p.n as i64 - 1);
    certify_min_degree(&assemble_e1(p, cutoff)?)
}

/// Certifies the minimal nonzero degree of the homology.
///
/// Picks the `H_0` entry of minimal degree and, among those, maximal `p`.
/// A differential killing it would come from an entry one degree higher with
/// larger `p` and the opposite grade; that entry's block would then have its
/// leading `H_0` term at larger `p` and degree no larger than the candidate,
/// contradicting the choice. The certifier checks that no such block exists.
pub fn certify_min_degree(page: &E1Page) -> Result<SurvivorCertificate, PageError> {
    let leading: Vec<(&E1Key, &E1Contribution)> = page
        .entries
        .iter()
        .flat_map(|(k, list)| list.iter().map(move |c| (k, c)))
        .filter(|(_, c)| c.homology_degree == 0)
        .collect();
    let min_degree = leading
        .iter()
        .map(|(k, _)| k.degree)
        .min()
        .ok_or(PageError::EmptyPage)?;
    let (key, contribution) = leading
        .iter()
        .filter(|(k, _)| k.degree == min_degree)
        .max_by(|(a, ca), (b, cb)| a.p.cmp(&b.p).then_with(|| cb.source.cmp(&ca.source)))
        .copied()
        .expect("a minimal entry exists");

    let overall_min = page.entries.keys().map(|k| k.degree).min();
    if overall_min != Some(min_degree) {
        return Err(PageError::Certification(format!(
            "an entry sits below the lowest leading term {min_degree}"
        )));
    }

    let block_leads: HashMap<&FamilySignature, &E1Key> =
        leading.iter().map(|(k, c)| (&c.source, *k)).collect();
    let mut potential_sources = 0;
    for (k, list) in &page.entries {
        if k.p <= key.p || k.degree != min_degree + 1 || k.z2 == key.z2 {
            continue;
        }
        for c in list {
            potential_sources += 1;
            let lead = block_leads.get(&c.source).ok_or_else(|| {
                PageError::Certification(format!("block {:?} has no H_0 term", c.source))
            })?;
            if lead.degree <= min_degree && lead.p > key.p {
                return Err(PageError::Certification(format!(
                    "block {:?} leads at degree {} with p {} > {}",
                    c.source, lead.degree, lead.p, key.p
                )));
            }
        }
    }
    Ok(SurvivorCertificate {
        min_degree,
        p: key.p,
        z2: key.z2,
        source: contribution.source.clone(),
        potential_sources,
    })
}

/// Full ranks when the page is monochromatic (all differentials then vanish);
/// otherwise only the certified minimal degree.
pub fn degenerate_ranks(page: &E1Page) -> Result<SHProfile, PageError> {
    let cert = certify_min_degree(page)?;
    if page.is_monochromatic() {
        Ok(SHProfile {
            min_degree: cert.min_degree,
            degenerate: true,
            ranks: page.total_ranks(),
        })
    } else {
        Ok(SHProfile {
            min_degree: cert.min_degree,
            degenerate: false,
            ranks: BTreeMap::new(),
        })
    }
}

/// Positive S¹-equivariant symplectic homology of a homology-ball filling of
/// `C^n`-type links: rank 1 in degrees `n+1, n+3, ...` up to `max_degree`.
pub fn expected_sh_homology_ball(n: usize, max_degree: i64) -> BTreeMap<i64, u64> {
    let start = n as i64 + 1;
    (start..=max_degree).step_by(2).map(|d| (d, 1)).collect()
}
