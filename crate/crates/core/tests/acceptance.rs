//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use genweights::delsarte::{
    delsarte_dual, delsarte_generalized_weights, dual_weights_from_weights,
    oggier_sboui_delsarte_weights, DelsarteCode,
};
use genweights::field::{make_field, Elem, Field, FieldSpec, Tower};
use genweights::hamming::{self, LinearCode};
use genweights::linalg::{rref, Matrix, Subspace};
use genweights::oracle::{self, DelsarteOracle, SearchReport};
use genweights::rankmetric;
use genweights::GuardConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gf(p: u32) -> Arc<Field> {
    Arc::new(Field::prime(p).unwrap())
}

fn mat(rows: &[&[Elem]]) -> Matrix {
    Matrix::from_rows(rows[0].len(), rows).unwrap()
}

#[derive(Default)]
struct OracleLog {
    entries: Vec<(String, bool)>,
}

impl OracleLog {
    fn record(&mut self, what: impl Into<String>, ok: bool) {
        self.entries.push((what.into(), ok));
    }
}

fn section5_code() -> DelsarteCode {
    DelsarteCode::from_matrices(
        gf(2),
        2,
        3,
        &[
            mat(&[&[1, 0, 0], &[0, 0, 0]]),
            mat(&[&[0, 1, 0], &[0, 0, 1]]),
            mat(&[&[0, 0, 0], &[1, 0, 0]]),
        ],
    )
    .unwrap()
}

fn q5_code() -> DelsarteCode {
    DelsarteCode::from_matrices(
        gf(5),
        3,
        3,
        &[
            mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            mat(&[&[0, 0, 0], &[0, 3, 0], &[0, 0, 0]]),
        ],
    )
    .unwrap()
}

fn c1_rref() -> Check {
    let t = Tower::from_spec(&FieldSpec {
        g: vec![1, 1, 0, 0, 1],
        ..FieldSpec::new(2, 1, 4)
    })
    .map_err(|e| e.to_string())?;
    let f = t.top();
    let xi = t.generator();
    let p = |e| f.pow(xi, e);
    let m = Matrix::from_rows(
        4,
        &[vec![p(1), p(2), p(5), p(1)], vec![p(2), p(4), p(10), p(2)]],
    )
    .unwrap();
    let (r, _) = rref(f, &m);
    ensure(
        r.row_vecs() == vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0]],
        format!("rref {:?}", r.row_vecs()),
    )?;
    let v = Subspace::from_matrix(f, &m);
    ensure(
        rankmetric::is_frobenius_closed(&t, &v),
        "not Frobenius-closed",
    )?;
    ensure(
        rankmetric::is_frobenius_closed_direct(&t, &v),
        "direct test disagrees",
    )?;
    Ok("rref [[1,0,1,1],[0,1,1,0]], Frobenius-closed".into())
}

fn c2_hamming(log: &mut OracleLog) -> Check {
    let g = GuardConfig::default();
    let c = LinearCode::from_generators(gf(2), 3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
    let d = hamming::generalized_hamming_weights(&c, &g).map_err(|e| e.to_string())?;
    ensure(d.weights == vec![2, 3], format!("ghw {d}"))?;
    ensure(
        hamming::is_optimal_linear_anticode(&c, &g).unwrap(),
        "not an optimal anticode",
    )?;
    let class = hamming::classify_optimal_anticode(&c, &g).unwrap();
    ensure(
        class == hamming::AnticodeClass::NonFree,
        format!("classified {class:?}"),
    )?;
    let via = hamming::ghw_via_anticodes(&c, &g).unwrap();
    ensure(via.get(2) == Some(2), format!("via anticodes {via}"))?;
    let brute = oracle::ghw_bruteforce(&c, &g).unwrap();
    log.record("criterion 2 ghw", brute == d);
    Ok(format!("ghw {d}, non-free anticode, via anticodes {via}"))
}

fn c3_golden(log: &mut OracleLog) -> Check {
    let g = GuardConfig::default();
    let c = section5_code();
    let a = delsarte_generalized_weights(&c, &g).unwrap();
    let os = oggier_sboui_delsarte_weights(&c, &g).unwrap();
    ensure(a.get(2) == Some(2), format!("a = {a}"))?;
    ensure(os.get(2) == Some(1), format!("a' = {os}"))?;
    log.record(
        "criterion 3 Mat(2x3,F_2) code",
        oracle::dgw_bruteforce(&c, &g).unwrap() == a,
    );
    let q5 = q5_code();
    let a5 = delsarte_generalized_weights(&q5, &g).unwrap();
    ensure(a5.weights == vec![1, 2], format!("q=5 a = {a5}"))?;
    log.record(
        "criterion 3 q=5 code",
        oracle::dgw_bruteforce(&q5, &g).unwrap() == a5,
    );
    Ok(format!("a_2 = 2, a'_2 = 1; q=5 profile {a5}"))
}

fn c4_duality() -> Check {
    let g = GuardConfig::default();
    let expected = vec![1, 1, 1, 2, 2, 3, 3];
    let rebuilt = dual_weights_from_weights(&[1, 2], 3, 3, 2).map_err(|e| e.to_string())?;
    ensure(rebuilt == expected, format!("rebuilt {rebuilt:?}"))?;
    let direct = delsarte_generalized_weights(&delsarte_dual(&q5_code()), &g).unwrap();
    ensure(direct.weights == expected, format!("direct {direct}"))?;
    Ok(format!("rebuilt and direct dual profile {direct}"))
}

fn c5_contro() -> Check {
    let g = GuardConfig::default();
    let e11 = mat(&[&[1, 0, 0], &[0, 0, 0]]);
    let c =
        DelsarteCode::from_matrices(gf(2), 2, 3, &[e11.clone(), mat(&[&[0, 0, 0], &[1, 0, 0]])])
            .unwrap();
    let d =
        DelsarteCode::from_matrices(gf(2), 2, 3, &[e11, mat(&[&[0, 1, 0], &[0, 0, 0]])]).unwrap();
    let ac = oggier_sboui_delsarte_weights(&c, &g).unwrap();
    let ad = oggier_sboui_delsarte_weights(&d, &g).unwrap();
    ensure(
        ac.weights == vec![1, 1] && ad == ac,
        format!("a'(C) = {ac}, a'(D) = {ad}"),
    )?;
    let cd = oggier_sboui_delsarte_weights(&delsarte_dual(&c), &g).unwrap();
    let dd = oggier_sboui_delsarte_weights(&delsarte_dual(&d), &g).unwrap();
    ensure(cd.weights == vec![1, 1, 2, 2], format!("a'(C dual) = {cd}"))?;
    ensure(dd.weights == vec![1, 1, 1, 2], format!("a'(D dual) = {dd}"))?;
    Ok(format!("a'(C) = a'(D) = {ac}, duals {cd} vs {dd}"))
}

fn c6_casino() -> Check {
    let g = GuardConfig::default();
    let mut total = 0;
    for (q, k, m) in [(2u32, 2usize, 2u32), (2, 2, 3), (3, 2, 2)] {
        let t = make_field(q, 1, m).unwrap();
        let rep = oracle::verify_casino(&t, k, &g).map_err(|e| e.to_string())?;
        ensure(
            rep.passed(),
            format!("q={q} k={k} m={m}: {:?}", rep.violations),
        )?;
        total += rep.checked;
    }
    Ok(format!("{total} subspaces, zero violations"))
}

fn c7_paz() -> Check {
    let g = GuardConfig::default();
    let mut counts = Vec::new();
    for (m, expected) in [(2usize, [1usize, 6, 1]), (3, [1, 3, 1])] {
        for (r, &want) in expected.iter().enumerate() {
            let rep = oracle::verify_paz(&gf(2), 2, m, r, &g).map_err(|e| e.to_string())?;
            ensure(rep.equal, format!("(2,{m},{r}) sets differ"))?;
            ensure(
                rep.exhaustive_count == want && rep.descriptor_count == want,
                format!(
                    "(2,{m},{r}) counts {} / {}",
                    rep.exhaustive_count, rep.descriptor_count
                ),
            )?;
            counts.push(rep.exhaustive_count.to_string());
        }
    }
    Ok(format!("anticode counts {}", counts.join("/")))
}

fn c8_properties(log: &mut OracleLog) -> Check {
    let g = GuardConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f3 = gf(3);
    let lin: Vec<LinearCode> = (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let t = rng.gen_range(1..=n);
            oracle::random_linear_code(&f3, n, t, &mut rng)
        })
        .collect();
    let ham = oracle::verify_hamming_suite(&lin, &g).map_err(|e| e.to_string())?;
    log.record(
        "criterion 8 hamming",
        !ham.violations
            .iter()
            .any(|v| v.clause == "oracle agreement"),
    );
    ensure(ham.passed(), format!("hamming: {:?}", ham.violations))?;

    let towers: Vec<Arc<Tower>> = (1..=3)
        .map(|m| Arc::new(make_field(2, 1, m).unwrap()))
        .collect();
    let gab = (0..50)
        .map(|_| {
            let m = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=m);
            let t = rng.gen_range(1..=k);
            oracle::random_gabidulin_code(&towers[m - 1], k, t, &mut rng)
        })
        .collect::<Result<Vec<_>, _>>()
        .unwrap();
    let gr = oracle::verify_gabidulin_suite(&gab, &g).map_err(|e| e.to_string())?;
    log.record(
        "criterion 8 gabidulin",
        !gr.violations.iter().any(|v| v.clause == "oracle agreement"),
    );
    ensure(gr.passed(), format!("gabidulin: {:?}", gr.violations))?;

    let f2 = gf(2);
    let mut del = Vec::new();
    for i in 0..100 {
        let (field, k, m) = if i % 2 == 0 { (&f2, 3, 3) } else { (&f3, 2, 3) };
        let t = rng.gen_range(1..k * m);
        del.push(oracle::random_delsarte_code(field, k, m, t, &mut rng).unwrap());
    }
    let dr = oracle::verify_delsarte_suite(&del, &g, 8).map_err(|e| e.to_string())?;
    log.record(
        "criterion 8 delsarte",
        !dr.violations.iter().any(|v| v.clause == "oracle agreement"),
    );
    ensure(dr.passed(), format!("delsarte: {:?}", dr.violations))?;

    let mut dan_checked = 0;
    for (field, k, m) in [(&f2, 2, 2), (&f2, 2, 3), (&f3, 2, 2)] {
        let rep = oracle::verify_dan(field, k, m, &g).map_err(|e| e.to_string())?;
        ensure(
            rep.passed(),
            format!("dual anticodes: {:?}", rep.violations),
        )?;
        dan_checked += rep.checked;
    }
    Ok(format!(
        "{} hamming, {} gabidulin, {} delsarte codes and {dan_checked} anticode duals, zero violations",
        ham.checked, gr.checked, dr.checked
    ))
}

fn c9_finer() -> Check {
    let g = GuardConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let towers: Vec<Arc<Tower>> = (1..=3)
        .map(|m| Arc::new(make_field(2, 1, m).unwrap()))
        .collect();
    let mut codes = Vec::new();
    while codes.len() < 25 {
        let m = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=m);
        let t = rng.gen_range(1..=k);
        codes.push(oracle::random_gabidulin_code(&towers[m - 1], k, t, &mut rng).unwrap());
    }
    let rep = oracle::verify_finer(&codes, &g, 9).map_err(|e| e.to_string())?;
    ensure(rep.passed(), format!("{:?}", rep.violations))?;
    Ok(format!("{} code/basis pairs, zero violations", rep.checked))
}

fn c10_oracles(log: &OracleLog) -> Check {
    ensure(!log.entries.is_empty(), "no oracle comparisons recorded")?;
    let bad: Vec<&str> = log
        .entries
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(w, _)| w.as_str())
        .collect();
    ensure(bad.is_empty(), format!("disagreement in {bad:?}"))?;
    Ok(format!("{} comparison groups agree", log.entries.len()))
}

const TABLE1: [[usize; 6]; 5] = [
    [1, 1, 1, 2, 2, 3],
    [1, 1, 2, 2, 2, 3],
    [1, 1, 1, 2, 3, 3],
    [1, 1, 2, 2, 3, 3],
    [1, 2, 2, 2, 3, 3],
];

fn c11_search() -> Check {
    let g = GuardConfig {
        time_budget: Some(Duration::from_secs(600)),
        ..GuardConfig::default()
    };
    let f2 = gf(2);
    let mut targets: Vec<Vec<usize>> = TABLE1.iter().map(|r| r.to_vec()).collect();
    targets.push(vec![1, 1, 2, 3, 2, 3]);
    let report =
        oracle::search_profiles(&f2, 3, 3, 6, &targets, &g, 11).map_err(|e| e.to_string())?;
    ensure(
        report.unfindable.len() == 1 && report.unfindable[0].profile == vec![1, 1, 2, 3, 2, 3],
        format!("precheck {:?}", report.unfindable),
    )?;
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("table1_witnesses.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap())
        .map_err(|e| e.to_string())?;
    let back: SearchReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    ensure(back.found == report.found, "persisted witnesses differ")?;
    let fast = oracle::reverify_witnesses(&back, &f2, &g).map_err(|e| e.to_string())?;
    ensure(
        fast.passed(),
        format!("re-verification: {:?}", fast.violations),
    )?;
    let ora = DelsarteOracle::new(f2.clone(), 3, 3, &g).map_err(|e| e.to_string())?;
    for w in &back.found {
        let c = w.to_code(f2.clone(), 3, 3).unwrap();
        let a = ora.weights(&c).unwrap();
        ensure(
            a.weights == w.profile,
            format!("oracle gives {a} for witness {:?}", w.profile),
        )?;
    }
    ensure(
        back.found.len() >= 4,
        format!(
            "only {} of 5 rows found, missing {:?}",
            back.found.len(),
            back.unfound
        ),
    )?;
    Ok(format!(
        "{} of 5 rows found after {} codes ({:?}), witnesses persisted to {} and re-verified",
        back.found.len(),
        back.examined,
        back.mode,
        path.display()
    ))
}

fn c12_wei() -> Check {
    let g = GuardConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f3 = gf(3);
    let codes: Vec<LinearCode> = (0..50)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let t = rng.gen_range(1..n);
            oracle::random_linear_code(&f3, n, t, &mut rng)
        })
        .collect();
    let rep = oracle::verify_wei(&codes, &g).map_err(|e| e.to_string())?;
    ensure(rep.checked == 50, format!("checked {}", rep.checked))?;
    ensure(rep.passed(), format!("{:?}", rep.violations))?;
    Ok("50 codes, zero violations".into())
}

fn main() {
    // criteria share the oracle log, so they run in order
    let mut log = OracleLog::default();
    let mut failures = 0;
    let mut run = |id: u32, name: &str, limit: Duration, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(&mut *f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > limit => {
                Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}"))
            }
            other => other,
        };
        match result {
            Ok(msg) => println!("criterion {id:>2} PASS [{elapsed:.2?}] {name}: {msg}"),
            Err(msg) => {
                failures += 1;
                println!("criterion {id:>2} FAIL [{elapsed:.2?}] {name}: {msg}");
            }
        }
    };
    let secs = Duration::from_secs;
    run(1, "RREF golden example", secs(1), &mut c1_rref);
    run(2, "binary Hamming anticode", secs(1), &mut || {
        c2_hamming(&mut log)
    });
    run(3, "Delsarte weight examples", secs(5), &mut || {
        c3_golden(&mut log)
    });
    run(4, "dual profile reconstruction", secs(30), &mut c4_duality);
    run(
        5,
        "Oggier-Sboui weights lack duality",
        secs(5),
        &mut c5_contro,
    );
    run(
        6,
        "Frobenius-closed iff dim = maxrk",
        secs(60),
        &mut c6_casino,
    );
    run(7, "optimal anticode classification", secs(120), &mut c7_paz);
    run(8, "property suites", secs(300), &mut || {
        c8_properties(&mut log)
    });
    run(
        9,
        "rank weights from Delsarte weights",
        secs(120),
        &mut c9_finer,
    );
    run(10, "oracle agreement", secs(1), &mut || c10_oracles(&log));
    run(11, "Table 1 profile search", secs(600), &mut c11_search);
    run(12, "Wei duality", secs(60), &mut c12_wei);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
