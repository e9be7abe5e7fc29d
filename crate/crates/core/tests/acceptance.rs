//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! `cargo test -p ellgw-core --test acceptance`

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellgw_core::correlator::{expected_genus, expected_weight};
use ellgw_core::fock::{connected_correlator, disconnected_npoint, e0_diagonality, fock_matrix_oracle};
use ellgw_core::graph::{
    bcov_correlator, bcov_correlator_with, commutator_bracket, propagator_identity_check, self_loop_identity_check,
};
use ellgw_core::jet::{apply_e, kernel_dimension, vertex};
use ellgw_core::modular::{quasimodular_basis, recognize, Recognition, SURPLUS_MARGIN};
use ellgw_core::series::{eisenstein, euler_product, series_invert, QSeries, Rational};
use ellgw_core::{CorrelatorRequest, DiffPoly, JetMonomial};

type Outcome = Result<String, String>;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn sigma1(n: usize) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d as i64).sum()
}

/// Insertion multisets, at most three entries, total at most `max_total`,
/// with the given parity of the total.
fn multisets(max_total: u32, even: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let keep = |s: u32| s <= max_total && (s % 2 == 0) == even;
    for a in 0..=max_total {
        if keep(a) {
            out.push(vec![a]);
        }
        for b in 0..=a {
            if keep(a + b) {
                out.push(vec![a, b]);
            }
            for c in 0..=b {
                if keep(a + b + c) {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

fn graph_series(ks: &[u32], order: usize, bound: usize) -> Result<QSeries, String> {
    let recs = bcov_correlator_with(ks, order, bound).map_err(|e| e.to_string())?;
    let g = expected_genus(ks);
    if let Some(k) = recs.keys().find(|&&k| Some(k) != g) {
        return Err(format!("{ks:?}: graph support at genus {k}"));
    }
    Ok(g.and_then(|g| recs.get(&g)).map_or_else(|| QSeries::zero(order), |rec| rec.series.clone()))
}

fn fock_series(ks: &[u32], order: usize) -> Result<QSeries, String> {
    connected_correlator(&CorrelatorRequest::new(ks.to_vec(), order)).map(|r| r.series).map_err(|e| e.to_string())
}

fn eisenstein_regression() -> Outcome {
    let e2 = eisenstein(2, 50).map_err(|e| e.to_string())?;
    if *e2.coeff(1) != r(-24, 1) {
        return Err(format!("q^1 coefficient is {}", e2.coeff(1)));
    }
    for n in 1..=50 {
        if *e2.coeff(n) != r(-24 * sigma1(n), 1) {
            return Err(format!("q^{n}: {} != -24 sigma_1({n})", e2.coeff(n)));
        }
    }
    Ok("50 coefficients".into())
}

fn pipeline_equality() -> Outcome {
    let cases = multisets(6, true);
    for ks in &cases {
        let f = fock_series(ks, 10)?;
        let g = graph_series(ks, 10, 10)?;
        if f != g {
            let d = (0..=10).find(|&d| f.coeff(d) != g.coeff(d)).unwrap_or(0);
            return Err(format!("{ks:?} differs at q^{d}: fock {} graph {}", f.coeff(d), g.coeff(d)));
        }
    }
    Ok(format!("{} insertion vectors at q-order 10", cases.len()))
}

fn genus_one_point() -> Outcome {
    let n = 20;
    let mut expect = QSeries::zero(n);
    expect.set_coeff(0, r(-1, 24));
    for d in 1..=n {
        expect.set_coeff(d, r(sigma1(d), 1));
    }
    let e2 = eisenstein(2, n).map_err(|e| e.to_string())?.scale(&r(-1, 24));
    if expect != e2 {
        return Err("-E2/24 disagrees with the divisor-sum oracle".into());
    }
    let f = fock_series(&[0], n)?;
    let g = graph_series(&[0], n, n)?;
    match (f == expect, g == expect) {
        (true, true) => Ok("fock and graph through q^20".into()),
        (a, b) => Err(format!("fock ok: {a}, graph ok: {b}")),
    }
}

fn vacuum_normalization() -> Outcome {
    let n = 30;
    let z = disconnected_npoint(&CorrelatorRequest::new(vec![], n)).map_err(|e| e.to_string())?;
    let expect = series_invert(&euler_product(n)).map_err(|e| e.to_string())?;
    if z == expect {
        Ok("through q^30".into())
    } else {
        Err("partition sum differs from 1/prod(1 - q^i)".into())
    }
}

fn vertex_facts() -> Outcome {
    let v0 = vertex(0).map_err(|e| e.to_string())?;
    let v1 = vertex(1).map_err(|e| e.to_string())?;
    if v0.as_poly() != &DiffPoly::monomial(JetMonomial::alpha_power(2), r(1, 2)) {
        return Err(format!("vertex(0) = {v0}"));
    }
    if v1.as_poly() != &DiffPoly::monomial(JetMonomial::alpha_power(3), r(1, 6)) {
        return Err(format!("vertex(1) = {v1}"));
    }
    for k in -1..=10 {
        let v = vertex(k).map_err(|e| e.to_string())?;
        let e = apply_e(v.as_poly());
        if !e.is_zero() {
            return Err(format!("E vertex({k}) = {e}"));
        }
    }
    for d in 1..=12 {
        let info = kernel_dimension(d).map_err(|e| e.to_string())?;
        if info.dimension != 1 {
            return Err(format!("kernel in degree {d} has dimension {}", info.dimension));
        }
    }
    Ok("vertex(0), vertex(1); E kills k <= 10; kernel dim 1 for d <= 12".into())
}

fn self_loop() -> Outcome {
    let res = self_loop_identity_check(20).map_err(|e| e.to_string())?;
    if res.is_zero() {
        Ok("residual zero through lambda^20".into())
    } else {
        Err(format!("residual {res}"))
    }
}

fn propagator() -> Outcome {
    match propagator_identity_check(10, 10) {
        Ok(true) => Ok("|r| <= 10, q-order 10".into()),
        Ok(false) => Err("bilateral and three-term forms differ".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn commutativity() -> Outcome {
    let mut pairs = 0;
    for k1 in -1..=4 {
        for k2 in -1..=4 {
            for (h, v) in commutator_bracket(k1, k2, 3).map_err(|e| e.to_string())? {
                if !v.is_zero() {
                    return Err(format!("[{k1},{k2}] at hbar^{h}: {v}"));
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, hbar-order <= 3"))
}

fn modularity() -> Outcome {
    let mut checked = 0;
    for ks in multisets(6, true) {
        let w = expected_weight(&ks);
        let dim = quasimodular_basis(w).map_err(|e| e.to_string())?.len();
        let order = 10usize.max(dim + SURPLUS_MARGIN);
        let mut reps = Vec::new();
        for series in [fock_series(&ks, order)?, graph_series(&ks, order, order)?] {
            match recognize(&series, w).map_err(|e| e.to_string())? {
                Recognition::Recognized { rep, surplus } if surplus >= SURPLUS_MARGIN => reps.push(rep),
                Recognition::Recognized { surplus, .. } => return Err(format!("{ks:?}: only {surplus} surplus")),
                Recognition::Failed(c) => return Err(format!("{ks:?} not of weight {w}: q^{}", c.index)),
            }
        }
        if reps[0] != reps[1] {
            return Err(format!("{ks:?}: pipelines recognize different forms"));
        }
        checked += 1;
    }
    let mut e2 = eisenstein(2, 10).map_err(|e| e.to_string())?;
    e2.add_to_coeff(6, &r(1, 1));
    let mut tau2 = fock_series(&[2], 10)?;
    tau2.add_to_coeff(8, &r(1, 1));
    let mut rejected = Vec::new();
    for (series, w) in [(e2, 2), (tau2, 4)] {
        match recognize(&series, w).map_err(|e| e.to_string())? {
            Recognition::Failed(c) => rejected.push(c.index.to_string()),
            Recognition::Recognized { .. } => return Err(format!("perturbed weight-{w} series was recognized")),
        }
    }
    Ok(format!("{checked} correlators; perturbed series rejected at q^{}", rejected.join(", q^")))
}

fn oracle_equivalence() -> Outcome {
    let n = 8;
    let cases: [&[u32]; 7] = [&[], &[0], &[2], &[1, 1], &[3, 1], &[2, 0, 0], &[4]];
    for ks in cases {
        let req = CorrelatorRequest::new(ks.to_vec(), n);
        let a = fock_matrix_oracle(n, &req).map_err(|e| e.to_string())?;
        let b = disconnected_npoint(&req).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{ks:?}: matrix trace differs from the partition sum"));
        }
    }
    let rep = e0_diagonality(n, 8).map_err(|e| e.to_string())?;
    if rep.off_diagonal_nonzero > 0 || rep.eigenvalue_mismatches > 0 {
        return Err(format!("{rep:?}"));
    }
    Ok(format!("{} requests; {} matrix entries diagonal as predicted", cases.len(), rep.entries_checked))
}

fn parity() -> Outcome {
    let cases = multisets(7, false);
    for ks in &cases {
        if !fock_series(ks, 8)?.is_zero() {
            return Err(format!("fock {ks:?} is nonzero"));
        }
        if !bcov_correlator(ks, 8).map_err(|e| e.to_string())?.is_empty() {
            return Err(format!("graph {ks:?} is nonzero"));
        }
    }
    Ok(format!("{} odd insertion vectors through q^8", cases.len()))
}

fn flow_bound() -> Outcome {
    let cases = multisets(6, true);
    for ks in &cases {
        if graph_series(ks, 10, 10)? != graph_series(ks, 10, 20)? {
            return Err(format!("{ks:?} changes when the flow bound doubles"));
        }
    }
    Ok(format!("{} insertion vectors, bound 10 vs 20", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 12] = [
        ("eisenstein regression", eisenstein_regression, Some(Duration::from_secs(1))),
        ("pipeline equality", pipeline_equality, Some(Duration::from_secs(300))),
        ("genus-1 one-point", genus_one_point, None),
        ("vacuum normalization", vacuum_normalization, None),
        ("vertex facts", vertex_facts, Some(Duration::from_secs(60))),
        ("self-loop identity", self_loop, None),
        ("propagator identity", propagator, None),
        ("commutativity", commutativity, None),
        ("modularity", modularity, None),
        ("oracle equivalence", oracle_equivalence, None),
        ("parity selection", parity, None),
        ("flow-bound validation", flow_bound, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("{msg}, but took {took:.2?} (limit {limit:?})"));
            }
        }
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
