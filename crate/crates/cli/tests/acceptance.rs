//! Acceptance suite: one pass/fail line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fanocone::cone_model::{ConePresentation, WeightedAction};
use fanocone::corpus::{pairwise_coprime, quotient_corpus, weight_vectors, weighted_corpus};
use fanocone::discrepancy::{minimal_discrepancy, shokurov_check};
use fanocone::orb_topology::{wps_cohomology, GradedGroup};
use fanocone::reeb_orbits::{
    enumerate_families, index_of_family_chart, index_of_family_weighted, inf_lsft,
};
use fanocone::ss_engine::{
    assemble_e1, certify_min_degree, degenerate_ranks, expected_sh_homology_ball,
};
use fanocone::sympath_index::{check_axioms, rs_crossing_oracle, rs_index_factor, DiagonalPath};
use fanocone::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Entry {
    name: String,
    p: ConePresentation,
    action: Option<WeightedAction>,
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn data_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .expect("data directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn file_entries() -> Vec<Entry> {
    data_files()
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).expect("readable");
            let loaded = fanocone_cli::parse_input(&text)
                .unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
            Entry {
                name: path.file_name().unwrap().to_string_lossy().into_owned(),
                p: loaded.presentation,
                action: loaded.action,
            }
        })
        .collect()
}

fn weighted_entries() -> Vec<Entry> {
    weighted_corpus()
        .into_iter()
        .map(|e| Entry {
            name: e.name,
            p: e.presentation,
            action: e.action,
        })
        .collect()
}

/// Presentations that are not weighted `C^n`.
fn hand_built() -> Vec<Entry> {
    let mut out: Vec<Entry> = quotient_corpus()
        .into_iter()
        .map(|e| Entry {
            name: e.name,
            p: e.presentation,
            action: None,
        })
        .collect();
    for e in file_entries() {
        if e.action.is_none() && !out.iter().any(|o| o.p == e.p) {
            out.push(e);
        }
    }
    out
}

fn full_corpus() -> Vec<Entry> {
    let mut all = weighted_entries();
    all.extend(hand_built());
    for e in file_entries() {
        if !all.iter().any(|o| o.p == e.p) {
            all.push(e);
        }
    }
    all
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(took)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus = weighted_entries();
    for e in &corpus {
        let md = minimal_discrepancy(&e.p).map_err(|err| err.to_string())?.md;
        ensure!(md == q(e.p.n as i64 - 1), "{}: md = {md}", e.name);
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "{} weight vectors, md = n - 1, {took:.2?}",
        corpus.len()
    ))
}

fn criterion_2() -> Outcome {
    let hand = hand_built();
    ensure!(
        hand.len() >= 20,
        "only {} hand-built presentations",
        hand.len()
    );
    let mut canonical_r1 = 0;
    let mut checked = 0;
    for e in weighted_entries().iter().chain(&hand) {
        let md = minimal_discrepancy(&e.p).map_err(|err| err.to_string())?.md;
        let inf = inf_lsft(&e.p).map_err(|err| err.to_string())?;
        ensure!(
            md * 2 == inf,
            "{}: 2 md = {} but inf lSFT = {inf}",
            e.name,
            md * 2
        );
        ensure!(inf > q(-2), "{}: inf lSFT = {inf}", e.name);
        for f in enumerate_families(&e.p, q(3)).map_err(|err| err.to_string())? {
            ensure!(
                f.lsft > q(-2),
                "{} {:?}: lSFT {}",
                e.name,
                f.signature(),
                f.lsft
            );
        }
        if e.p.r == q(1) && md == q(0) {
            canonical_r1 += 1;
        }
        checked += 1;
    }
    ensure!(canonical_r1 > 0, "no r = 1 presentation with md = 0");
    Ok(format!(
        "{checked} presentations ({} hand-built, {canonical_r1} with r = 1 and md = 0)",
        hand.len()
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut vectors: Vec<Vec<u64>> = vec![vec![1, 1, 1], vec![2, 1], vec![1, 1, 2], vec![3, 2]];
    for n in 2..=3 {
        vectors.extend(
            weight_vectors(n, 8)
                .into_iter()
                .filter(|a| pairwise_coprime(a)),
        );
    }
    for a in &vectors {
        let n = a.len();
        let max = 4 * n as i64 + 2;
        let p = fanocone::corpus::weighted_entry(a).presentation;
        let page = assemble_e1(&p, q(max)).map_err(|e| e.to_string())?;
        let prof = degenerate_ranks(&page).map_err(|e| e.to_string())?;
        ensure!(prof.degenerate, "{a:?}: page does not degenerate");
        let got: Vec<(Rational, u64)> = prof.ranks.into_iter().collect();
        let expected: Vec<(Rational, u64)> = expected_sh_homology_ball(n, max)
            .into_iter()
            .map(|(d, r)| (q(d), r))
            .collect();
        ensure!(
            got == expected,
            "{a:?}: ranks {got:?}, expected {expected:?}"
        );
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "{} weight vectors up to degree 4n+2, {took:.2?}",
        vectors.len()
    ))
}

fn criterion_4() -> Outcome {
    let corpus = full_corpus();
    for e in &corpus {
        let inf = inf_lsft(&e.p).map_err(|err| err.to_string())?;
        let shift = e.p.n as i64 - 3;
        // Cut off at the simple principal orbit, which is always present.
        let cutoff = e.p.r * 2 - (e.p.n as i64 - 1);
        let page = assemble_e1(&e.p, cutoff).map_err(|err| err.to_string())?;
        let cert = certify_min_degree(&page).map_err(|err| format!("{}: {err}", e.name))?;
        ensure!(
            cert.min_degree + shift == inf,
            "{}: min degree {} + n - 3 != {inf}",
            e.name,
            cert.min_degree
        );
    }
    Ok(format!("{} presentations", corpus.len()))
}

fn criterion_5() -> Outcome {
    let mut families = 0;
    let mut presentations = 0;
    for e in full_corpus() {
        let Some(w) = &e.action else { continue };
        presentations += 1;
        for f in enumerate_families(&e.p, q(3)).map_err(|err| err.to_string())? {
            let wi = index_of_family_weighted(w, f.isotropy_order, f.k, f.ell)
                .map_err(|err| err.to_string())?;
            ensure!(
                (wi.rs, wi.lcz, wi.lsft) == (f.rs, f.lcz, f.lsft),
                "{} {:?}: chart ({}, {}, {}) vs path ({}, {}, {})",
                e.name,
                f.signature(),
                f.rs,
                f.lcz,
                f.lsft,
                wi.rs,
                wi.lcz,
                wi.lsft
            );
            families += 1;
        }
    }
    let mut elements = 0;
    for e in hand_built() {
        for chart in &e.p.charts {
            for k in 1..chart.m {
                let idx = index_of_family_chart(chart, k, 0, e.p.r, e.p.r, e.p.n)
                    .map_err(|err| err.to_string())?;
                let trace = idx.trace.ok_or("missing trivialization trace")?;
                ensure!(
                    trace.corrected == idx.lsft,
                    "{} {}#{k}: {} vs {}",
                    e.name,
                    chart.label,
                    trace.corrected,
                    idx.lsft
                );
                elements += 1;
            }
        }
    }
    Ok(format!(
        "{families} families on {presentations} weighted presentations; \
         {elements} chart elements via the trivialization route"
    ))
}

fn criterion_6() -> Outcome {
    let mut grid = 0;
    for num in -8..=8 {
        for den in 1..=3 {
            for (tn, td) in [(1, 1), (1, 2), (3, 2), (2, 3), (5, 3), (7, 4)] {
                let speed = Rational::new(num, den);
                let t = Rational::new(tn, td);
                let path = DiagonalPath::new(vec![speed], t).map_err(|e| e.to_string())?;
                let (a, b) = (rs_index_factor(speed, t), rs_crossing_oracle(&path));
                ensure!(a == b, "speed {speed}, duration {t}: {a} vs {b}");
                grid += 1;
            }
        }
    }
    ensure!(grid >= 200, "grid has only {grid} points");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rational = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| {
        Rational::new(rng.gen_range(lo..=hi), rng.gen_range(1..=6))
    };
    for case in 0..1000 {
        let count = rng.gen_range(1..=3);
        let mut paths = Vec::with_capacity(count);
        for _ in 0..count {
            let d = rng.gen_range(0..=4);
            let speeds = (0..d).map(|_| rational(&mut rng, -12, 12)).collect();
            let duration = rational(&mut rng, 1, 12);
            paths.push(DiagonalPath::new(speeds, duration).map_err(|e| e.to_string())?);
        }
        let failures = check_axioms(&paths);
        ensure!(failures.is_empty(), "case {case}: {failures:?}");
    }
    Ok(format!("{grid} grid points, 1000 random path sets"))
}

fn criterion_7() -> Outcome {
    let mut families = 0;
    for e in full_corpus() {
        let big_r = e.p.r;
        let z2 = ((e.p.n - 1) % 2) as u8;
        let fams = enumerate_families(&e.p, q(3)).map_err(|err| err.to_string())?;
        for f in &fams {
            ensure!(f.z2 == z2, "{} {:?}: z2 {}", e.name, f.signature(), f.z2);
            if f.isotropy_order == 1 {
                ensure!(
                    f.rs == big_r * (2 * f.ell as i64),
                    "{} principal ell = {}: rs {}",
                    e.name,
                    f.ell,
                    f.rs
                );
            }
            if let Some(w) = &e.action {
                let wi = index_of_family_weighted(w, f.isotropy_order, f.k, f.ell)
                    .map_err(|err| err.to_string())?;
                ensure!(
                    wi.z2 == z2,
                    "{} {:?}: path z2 {}",
                    e.name,
                    f.signature(),
                    wi.z2
                );
                if f.isotropy_order == 1 {
                    ensure!(
                        wi.rs == big_r * (2 * f.ell as i64),
                        "{}: path rs {}",
                        e.name,
                        wi.rs
                    );
                }
            }
            families += 1;
        }
        for chart in &e.p.charts {
            for k in 0..chart.m {
                let base = if k == 0 { 1 } else { 0 };
                let a = index_of_family_chart(chart, k, base, e.p.r, big_r, e.p.n)
                    .map_err(|err| err.to_string())?;
                for extra in 1..=3u64 {
                    let b = index_of_family_chart(chart, k, base + extra, e.p.r, big_r, e.p.n)
                        .map_err(|err| err.to_string())?;
                    let shift = big_r * (2 * extra as i64);
                    ensure!(
                        b.rs - a.rs == shift && b.lcz - a.lcz == shift && b.lsft - a.lsft == shift,
                        "{} {}#{k}: shift by {extra} turns",
                        e.name,
                        chart.label
                    );
                }
            }
        }
    }
    Ok(format!(
        "{families} families, period shifts on every chart element"
    ))
}

fn criterion_8() -> Outcome {
    let vectors: [&[u64]; 10] = [
        &[1, 2, 3],
        &[1, 1],
        &[1, 1, 1],
        &[2, 3],
        &[1, 2],
        &[2, 3, 5],
        &[1, 1, 2],
        &[3, 4, 5],
        &[1, 4, 6, 9],
        &[2, 3, 5, 7, 11],
    ];
    for a in vectors {
        let w = WeightedAction::new(a.to_vec()).map_err(|e| e.to_string())?;
        let n = a.len();
        let d: u64 = a.iter().product();
        for k in 0..=(2 * n as i64 + 6) {
            let expected = if k % 2 == 1 {
                GradedGroup::Zero
            } else if k <= 2 * n as i64 - 2 {
                GradedGroup::Free(1)
            } else if d == 1 {
                GradedGroup::Zero
            } else {
                GradedGroup::Torsion(d)
            };
            let got = wps_cohomology(&w, k).map_err(|e| e.to_string())?;
            ensure!(
                got == expected,
                "{a:?} degree {k}: {got}, expected {expected}"
            );
        }
    }
    ensure!(
        wps_cohomology(&WeightedAction::new(vec![1, 2, 3]).unwrap(), 6)
            == Ok(GradedGroup::Torsion(6)),
        "P(1,2,3) degree 6"
    );
    Ok("10 weight vectors".into())
}

fn criterion_9() -> Outcome {
    let corpus = full_corpus();
    let mut equalities = 0;
    for e in &corpus {
        let sh = shokurov_check(&e.p).map_err(|err| err.to_string())?;
        ensure!(sh.within_bound, "{}: md {} > {}", e.name, sh.md, sh.bound);
        ensure!(
            sh.equality == e.action.is_some(),
            "{}: equality {} for a {} presentation",
            e.name,
            sh.equality,
            if e.action.is_some() {
                "smooth"
            } else {
                "singular"
            }
        );
        equalities += usize::from(sh.equality);
    }
    Ok(format!(
        "{} presentations, equality on exactly the {equalities} smooth cones",
        corpus.len()
    ))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_fanocone");
    let files = data_files();
    for path in &files {
        for args in [
            vec!["verify".to_string()],
            vec!["report".into(), "--max-degree".into(), "14".into()],
            vec![
                "--json".into(),
                "report".into(),
                "--max-degree".into(),
                "14".into(),
            ],
        ] {
            let mut outputs = Vec::new();
            for _ in 0..3 {
                let out = Command::new(bin)
                    .args(&args)
                    .arg(path)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure!(
                    out.status.code() == Some(0),
                    "{} {args:?}: exit {:?}: {}",
                    path.display(),
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                );
                outputs.push(out.stdout);
            }
            ensure!(
                outputs.windows(2).all(|w| w[0] == w[1]),
                "{} {args:?}: outputs differ",
                path.display()
            );
        }
    }
    Ok(format!("{} inputs x 3 commands x 3 runs", files.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("weighted C^n discrepancy md = n - 1", criterion_1),
        ("2 md = inf lSFT > -2", criterion_2),
        ("SH table of homology-ball fillings", criterion_3),
        ("certified min degree + n - 3 = inf lSFT", criterion_4),
        ("index engine duality", criterion_5),
        ("RS normalization and axioms", criterion_6),
        ("orbit structure", criterion_7),
        ("weighted projective cohomology", criterion_8),
        ("Shokurov bound", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result =
            std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
