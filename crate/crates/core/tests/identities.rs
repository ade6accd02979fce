use fanocone::corpus::{full_corpus, quotient_corpus, weighted_corpus};
use fanocone::discrepancy::{minimal_discrepancy, shokurov_check};
use fanocone::reeb_orbits::{
    enumerate_families, index_of_family_chart, index_of_family_weighted, inf_lsft,
    inf_lsft_over_families,
};
use fanocone::ss_engine::{assemble_e1, certify_min_degree};
use fanocone::Rational;

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Minimum age over `mu_c` acting with weights `a`, minus one.
fn reid_tai_md(a: &[u64], c: u64) -> Rational {
    (1..c)
        .map(|k| {
            let s: u64 = a.iter().map(|&x| k * x % c).sum();
            Rational::new(s as i64, c as i64)
        })
        .min()
        .expect("c > 1")
        - 1
}

#[test]
fn weighted_md_is_n_minus_one() {
    for e in weighted_corpus() {
        let md = minimal_discrepancy(&e.presentation).unwrap().md;
        assert_eq!(md, q(e.presentation.n as i64 - 1), "{}", e.name);
    }
}

#[test]
fn quotient_md_matches_reid_tai() {
    for e in quotient_corpus() {
        let a: Vec<u64> = fanocone::corpus::QUOTIENTS
            .iter()
            .find(|(a, c)| e.name == format!("quotient{a:?}/{c}"))
            .map(|(a, _)| a.to_vec())
            .unwrap();
        let md = minimal_discrepancy(&e.presentation).unwrap().md;
        assert_eq!(md, reid_tai_md(&a, e.quotient_order), "{}", e.name);
    }
}

#[test]
fn twice_md_equals_inf_lsft() {
    for e in full_corpus() {
        let p = &e.presentation;
        let md = minimal_discrepancy(p).unwrap().md;
        let inf = inf_lsft(p).unwrap();
        assert_eq!(md * 2, inf, "{}", e.name);
        assert!(inf > q(-2), "{}", e.name);
        assert_eq!(inf_lsft_over_families(p).unwrap(), inf, "{}", e.name);
        for f in enumerate_families(p, q(3)).unwrap() {
            assert!(f.lsft > q(-2), "{} {:?}", e.name, f.signature());
        }
    }
}

#[test]
fn certified_min_degree_matches_inf_lsft() {
    for e in full_corpus() {
        let p = &e.presentation;
        let inf = inf_lsft(p).unwrap();
        let shift = p.n as i64 - 3;
        let page = assemble_e1(p, inf - shift).unwrap();
        let cert = certify_min_degree(&page).unwrap();
        assert_eq!(cert.min_degree + shift, inf, "{}", e.name);
    }
}

#[test]
fn chart_and_weighted_engines_agree() {
    for e in weighted_corpus() {
        let p = &e.presentation;
        let w = e.action.as_ref().unwrap();
        for f in enumerate_families(p, q(3)).unwrap() {
            let wi = index_of_family_weighted(w, f.isotropy_order, f.k, f.ell).unwrap();
            assert_eq!(
                (wi.rs, wi.lcz, wi.lsft, wi.stratum_dim, wi.period),
                (f.rs, f.lcz, f.lsft, f.stratum_dim, f.period),
                "{} {:?}",
                e.name,
                f.signature()
            );
            assert_eq!(wi.z2, f.z2, "{} {:?}", e.name, f.signature());
        }
    }
}

#[test]
fn trivialization_route_matches_closed_form() {
    for e in full_corpus() {
        let p = &e.presentation;
        for chart in &p.charts {
            for k in 1..chart.m {
                let idx = index_of_family_chart(chart, k, 0, p.r, p.r, p.n).unwrap();
                let trace = idx.trace.expect("normalizable chart");
                assert_eq!(
                    trace.corrected, idx.lsft,
                    "{} {} k={k}",
                    e.name, chart.label
                );
            }
        }
    }
}

#[test]
fn principal_tower_and_period_shift() {
    for e in full_corpus() {
        let p = &e.presentation;
        let big_r = p.r;
        let fams = enumerate_families(p, q(3)).unwrap();
        for f in &fams {
            assert_eq!(f.z2 as usize, (p.n - 1) % 2);
            if f.isotropy_order == 1 {
                assert_eq!(f.rs, big_r * (2 * f.ell as i64));
            }
            if let Some(g) = fams.iter().find(|g| {
                g.isotropy_order == f.isotropy_order
                    && g.k == f.k
                    && g.component_id == f.component_id
                    && g.ell == f.ell + 1
            }) {
                assert_eq!(g.rs - f.rs, big_r * 2, "{}", e.name);
                assert_eq!(g.lsft - f.lsft, big_r * 2, "{}", e.name);
            }
        }
    }
}

#[test]
fn shokurov_equality_exactly_on_smooth_cones() {
    for e in full_corpus() {
        let sh = shokurov_check(&e.presentation).unwrap();
        assert!(sh.within_bound, "{}", e.name);
        assert_eq!(sh.equality, e.action.is_some(), "{}", e.name);
    }
}
