//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgi_core::circuit::{build_oracle, build_qpe, plan_precision, Gate, Phase, QpeOptions};
use qgi_core::fixtures;
use qgi_core::graph::{are_isomorphic, parse_graph6, Graph, Permutation};
use qgi_core::invariant::{
    char_poly, classical_histogram, quantum_histogram, QuantumMode, QuantumOptions,
};
use qgi_core::simulator::{run, SimConfig, Statevector};
use qgi_core::survey::{enumerate_classes, run_survey, verify_counterexample, SurveySource};

const NORM_TOLERANCE: f64 = 1e-9;
const SHOTS: u64 = 1_000_000;
const SHOT_SEED: u64 = 20_240_601;
const SIGMAS: f64 = 5.0;

const PETERSEN_COUNTS: [u64; 16] = [
    76, 135, 165, 135, 180, 87, 100, 60, 30, 30, 15, 0, 10, 0, 0, 1,
];
const PRISM_COUNTS: [u64; 16] = [
    81, 125, 155, 180, 125, 127, 80, 65, 30, 30, 15, 0, 10, 0, 0, 1,
];
const G_COUNTS: [u64; 9] = [26, 33, 27, 18, 13, 5, 5, 0, 1];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exact(g: &Graph) -> Result<Vec<u64>, String> {
    quantum_histogram(g, QuantumMode::Exact, QuantumOptions::default())
        .map_err(|e| e.to_string())?
        .counts
        .ok_or_else(|| "exact mode returned no counts".to_owned())
}

fn percents(probs: &[f64]) -> Vec<String> {
    probs.iter().map(|p| format!("{:.2}", p * 100.0)).collect()
}

fn qgi(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qgi"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "qgi {args:?} exited with {}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn c4_end_to_end() -> Outcome {
    let text = qgi(&["invariant", "c4", "--mode", "qpe", "--output", "json"])?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let counts: Vec<u64> =
        serde_json::from_value(v["counts"].clone()).map_err(|e| e.to_string())?;
    let probs: Vec<f64> =
        serde_json::from_value(v["probabilities"].clone()).map_err(|e| e.to_string())?;
    ensure!(counts == [7, 4, 4, 0, 1], "counts {counts:?}");
    ensure!(
        percents(&probs) == ["43.75", "25.00", "25.00", "0.00", "6.25"],
        "percentages {:?}",
        percents(&probs)
    );
    let table = qgi(&["invariant", "c4", "--mode", "qpe"])?;
    let last = table.lines().last().unwrap_or_default();
    ensure!(
        last.split_whitespace().eq(["4", "6.25", "1"]),
        "last row {last:?}"
    );
    Ok(format!("counts {counts:?}"))
}

fn small_matrices() -> Outcome {
    let r = quantum_histogram(
        &fixtures::m3(),
        QuantumMode::Exact,
        QuantumOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        r.counts.as_deref() == Some(&[8, 5, 2, 1][..]),
        "M3 counts {:?}",
        r.counts
    );
    ensure!(
        percents(&r.probabilities) == ["50.00", "31.25", "12.50", "6.25"],
        "M3 percentages {:?}",
        percents(&r.probabilities)
    );
    let m1m2 = qgi(&["compare", "m1", "m2"])?;
    ensure!(
        m1m2.lines().last() == Some("invariant-equal, isomorphic"),
        "M1/M2: {m1m2}"
    );
    let m1m3 = qgi(&["compare", "m1", "m3"])?;
    ensure!(
        m1m3.lines().last() == Some("distinguished by invariant"),
        "M1/M3: {m1m3}"
    );
    Ok("M3 [8,5,2,1]; M1~M2 isomorphic; M1/M3 distinguished".into())
}

fn petersen_vs_prism() -> Outcome {
    let (p, q) = (fixtures::petersen(), fixtures::prism5());
    let hp = exact(&p)?;
    let hq = exact(&q)?;
    ensure!(hp == PETERSEN_COUNTS, "Petersen {hp:?}");
    ensure!(hq == PRISM_COUNTS, "prism {hq:?}");
    ensure!(
        hp.iter().sum::<u64>() == 1024 && hq.iter().sum::<u64>() == 1024,
        "sums"
    );
    ensure!(hp[0] == 76 && hq[0] == 81, "edgeless counts");
    let c = build_qpe(&p, QpeOptions::default()).map_err(|e| e.to_string())?;
    let plan = plan_precision(p.edge_count());
    ensure!(c.width() == 14, "width {}", c.width());
    ensure!(
        c.est_qubits() == 4 && plan.est_qubits == 4,
        "estimation qubits"
    );
    ensure!(
        plan.oracle_calls == 15,
        "oracle calls {}",
        plan.oracle_calls
    );
    let ccp = c
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::CCP(..)))
        .count();
    ensure!(ccp == 15 * 15, "controlled-oracle gates {ccp}");
    Ok("both 16-row tables exact; width 14, t=4, 15 oracle calls".into())
}

fn counterexample() -> Outcome {
    let r = verify_counterexample().map_err(|e| e.to_string())?;
    ensure!(r.counts == G_COUNTS, "counts {:?}", r.counts);
    ensure!(!r.isomorphic, "isomorphic");
    ensure!(exact(&fixtures::g1())? == G_COUNTS, "g1 qpe");
    ensure!(exact(&fixtures::g2())? == G_COUNTS, "g2 qpe");
    let p = percents(&r.probabilities);
    let want = [
        "20.31", "25.78", "21.09", "14.06", "10.16", "3.91", "3.91", "0.00", "0.78",
    ];
    ensure!(p == want, "percentages {p:?}");
    Ok("G1 and G2 not isomorphic, both [26,33,27,18,13,5,5,0,1]; 8-edge row 0.78%".into())
}

fn census() -> Outcome {
    let classes = [1, 2, 4, 11, 34, 156, 1044];
    let quantum = [1, 2, 4, 11, 34, 156, 1021];
    let spectra = [1, 2, 4, 11, 33, 151, 988];
    let mut rows = Vec::new();
    for n in 1..=7 {
        let r = run_survey(n, SurveySource::Classical).map_err(|e| e.to_string())?;
        let i = n - 1;
        ensure!(
            (r.classes, r.distinct_quantum, r.distinct_spectra)
                == (classes[i], quantum[i], spectra[i]),
            "n={n}: {}",
            r.row()
        );
        if n <= 6 {
            ensure!(r.collisions.is_empty(), "n={n} has collisions");
        }
        rows.push(r);
    }
    let r7 = &rows[6];
    let mut merged = 0;
    for [a, b] in &r7.collisions {
        let (ga, gb) = (
            parse_graph6(a).map_err(|e| e.to_string())?,
            parse_graph6(b).map_err(|e| e.to_string())?,
        );
        ensure!(are_isomorphic(&ga, &gb).is_none(), "{a} ~ {b}");
        ensure!(
            classical_histogram(&ga).map_err(|e| e.to_string())?
                == classical_histogram(&gb).map_err(|e| e.to_string())?,
            "{a} / {b} histograms differ"
        );
        merged += 1;
    }
    // a histogram shared by s classes absorbs s - 1 of them
    let later: std::collections::BTreeSet<usize> =
        r7.collision_indices.iter().map(|[_, b]| *b).collect();
    ensure!(
        later.len() == 1044 - 1021,
        "{} classes absorbed",
        later.len()
    );
    Ok(format!(
        "rows {}; {merged} collision pairs at n=7 verified non-isomorphic",
        rows.iter().map(|r| r.row()).collect::<Vec<_>>().join(" | ")
    ))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    Graph::from_edges(n, edges).expect("valid random graph")
}

fn check_norm_per_gate(g: &Graph) -> Result<(), String> {
    if g.edge_count() == 0 {
        return Ok(());
    }
    let c = build_qpe(g, QpeOptions::default()).map_err(|e| e.to_string())?;
    let mut s = Statevector::new(c.width(), SimConfig::default()).map_err(|e| e.to_string())?;
    for gate in c.gates() {
        s.apply(gate).map_err(|e| e.to_string())?;
        let drift = (s.norm_sqr() - 1.0).abs();
        ensure!(
            drift <= NORM_TOLERANCE,
            "norm drift {drift:e} after {gate:?}"
        );
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let mut labelled = 0;
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, e)| *e);
            let g = Graph::from_edges(n, edges).map_err(|e| e.to_string())?;
            let want = classical_histogram(&g).map_err(|e| e.to_string())?;
            let got = exact(&g)?;
            ensure!(
                got == want.counts(),
                "n={n} mask={mask}: {got:?} vs {:?}",
                want.counts()
            );
            labelled += 1;
        }
    }
    ensure!(
        labelled == 1024 + 64 + 8 + 2 + 1,
        "{labelled} labelled graphs"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let g = random_graph(&mut rng, 6 + i % 3);
        let want = classical_histogram(&g).map_err(|e| e.to_string())?;
        ensure!(exact(&g)? == want.counts(), "random graph {i}");
        check_norm_per_gate(&g)?;
    }
    Ok(format!("{labelled} labelled graphs + 50 random graphs (n=6..8) agree; norm within {NORM_TOLERANCE:e}"))
}

fn phases_after_oracle(g: &Graph, theta: Phase) -> Result<Vec<Option<u64>>, String> {
    let n = g.vertex_count();
    let mut s = Statevector::new(n, SimConfig::default()).map_err(|e| e.to_string())?;
    for q in 0..n {
        s.apply(&Gate::H(q)).map_err(|e| e.to_string())?;
    }
    for gate in build_oracle(g, theta).gates() {
        s.apply(gate).map_err(|e| e.to_string())?;
    }
    s.phase_table(theta.radians()).map_err(|e| e.to_string())
}

fn phase_table() -> Outcome {
    // rotations by ket string, vertex 1 leftmost
    let table = [
        ("0000", 0),
        ("0001", 0),
        ("0010", 0),
        ("0011", 1),
        ("0100", 0),
        ("0101", 0),
        ("0110", 1),
        ("0111", 2),
        ("1000", 0),
        ("1001", 1),
        ("1010", 0),
        ("1011", 2),
        ("1100", 1),
        ("1101", 2),
        ("1110", 2),
        ("1111", 4),
    ];
    let c4 = fixtures::c4();
    let t_gate = Phase::unit(3);
    ensure!((t_gate.radians() - FRAC_PI_4).abs() < 1e-15, "T phase");
    let phases = phases_after_oracle(&c4, t_gate)?;
    for (ket, rotations) in table {
        let index = ket
            .bytes()
            .rev()
            .fold(0usize, |acc, b| acc << 1 | (b - b'0') as usize);
        ensure!(
            phases[index] == Some(rotations),
            "|{ket}>: {:?}",
            phases[index]
        );
        ensure!(
            c4.induced_edges_in_mask(index as u32) as u64 == rotations,
            "|{ket}> edges"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..60 {
        let g = random_graph(&mut rng, 1 + i % 6);
        let plan = plan_precision(g.edge_count());
        let phases = phases_after_oracle(&g, plan.theta)?;
        for (mask, k) in phases.iter().enumerate() {
            ensure!(
                *k == Some(g.induced_edges_in_mask(mask as u32) as u64),
                "random graph {i}, subset {mask}"
            );
        }
    }
    Ok("16 rows match; 60 random graphs n<=6 satisfy k(s) = induced edges".into())
}

fn precision_rule() -> Outcome {
    for m in 1..=64usize {
        let e = (m as f64).log2().ceil() as usize;
        let e_prime = if m.is_power_of_two() { e + 1 } else { e };
        let plan = plan_precision(m);
        ensure!(
            plan.est_qubits == e_prime,
            "m={m}: t={} e'={e_prime}",
            plan.est_qubits
        );
        ensure!(
            plan.theta.radians() * (m as f64) < TAU,
            "m={m}: theta*m >= 2pi"
        );
    }
    ensure!(plan_precision(8).est_qubits == 4, "m=8");
    Ok("t = e' for m in 1..=64; m=8 gives t=4".into())
}

fn shot_sampling() -> Outcome {
    let c = build_qpe(&fixtures::c4(), QpeOptions::default()).map_err(|e| e.to_string())?;
    let state = run(&c, SimConfig::default()).map_err(|e| e.to_string())?;
    let marginal = state.marginal(c.measured()).map_err(|e| e.to_string())?;
    let a = marginal
        .sample(SHOTS, SHOT_SEED)
        .map_err(|e| e.to_string())?;
    let b = marginal
        .sample(SHOTS, SHOT_SEED)
        .map_err(|e| e.to_string())?;
    ensure!(a.counts == b.counts, "same seed, different counts");
    let mut worst: f64 = 0.0;
    for (x, &p) in marginal.probs.iter().enumerate() {
        let f = a.frequency(x as u64);
        let sigma = (p * (1.0 - p) / SHOTS as f64).sqrt();
        if sigma == 0.0 {
            ensure!(f == p, "outcome {x}: frequency {f} for probability {p}");
            continue;
        }
        let z = (f - p).abs() / sigma;
        ensure!(z <= SIGMAS, "outcome {x}: {z:.2} sigma");
        worst = worst.max(z);
    }
    Ok(format!(
        "{SHOTS} shots, worst deviation {worst:.2} sigma, reproducible"
    ))
}

fn spectral() -> Outcome {
    let (star, c4k1) = (fixtures::star_k14(), fixtures::c4_k1());
    let (ps, pc) = (
        char_poly(&star).map_err(|e| e.to_string())?,
        char_poly(&c4k1).map_err(|e| e.to_string())?,
    );
    ensure!(ps == pc, "K1,4 {ps} vs C4+K1 {pc}");
    let (hs, hc) = (
        classical_histogram(&star).map_err(|e| e.to_string())?,
        classical_histogram(&c4k1).map_err(|e| e.to_string())?,
    );
    ensure!(hs != hc, "histograms equal");

    // the only cospectral classes on five vertices are exactly this pair
    let classes = enumerate_classes(5).map_err(|e| e.to_string())?;
    let mut by_poly: BTreeMap<_, Vec<&Graph>> = BTreeMap::new();
    for g in &classes.representatives {
        by_poly
            .entry(char_poly(g).map_err(|e| e.to_string())?)
            .or_default()
            .push(g);
    }
    let shared: Vec<_> = by_poly.values().filter(|v| v.len() > 1).collect();
    ensure!(
        shared.len() == 1 && shared[0].len() == 2,
        "cospectral groups {}",
        shared.len()
    );
    let pair = shared[0];
    let matches = |g: &Graph| pair.iter().any(|h| are_isomorphic(g, h).is_some());
    ensure!(
        matches(&star) && matches(&c4k1),
        "n=5 cospectral pair is not K1,4 / C4+K1"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let graphs = [
        fixtures::petersen(),
        fixtures::prism5(),
        fixtures::g1(),
        fixtures::g2(),
        star,
        c4k1,
    ];
    for g in &graphs {
        let base = char_poly(g).map_err(|e| e.to_string())?;
        let mut map: Vec<usize> = (0..g.vertex_count()).collect();
        for _ in 0..100 {
            map.shuffle(&mut rng);
            let p = Permutation::new(map.clone()).map_err(|e| e.to_string())?;
            let h = g.permute(&p).map_err(|e| e.to_string())?;
            ensure!(
                char_poly(&h).map_err(|e| e.to_string())? == base,
                "relabelling changed {base}"
            );
        }
    }
    Ok(format!(
        "K1,4 and C4+K1 share {ps} but not the histogram; 100 relabellings x {} graphs",
        graphs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "C4 end-to-end", Duration::from_secs(1), c4_end_to_end),
        (
            2,
            "M1/M2/M3 tables and verdicts",
            Duration::from_secs(1),
            small_matrices,
        ),
        (
            3,
            "Petersen vs pentagonal prism",
            Duration::from_secs(10),
            petersen_vs_prism,
        ),
        (
            4,
            "G1/G2 counterexample",
            Duration::from_secs(1),
            counterexample,
        ),
        (5, "census n<=7", Duration::from_secs(60), census),
        (6, "oracle equivalence", Duration::MAX, oracle_equivalence),
        (7, "phase table", Duration::MAX, phase_table),
        (8, "precision plan", Duration::MAX, precision_rule),
        (9, "shot sampling", Duration::MAX, shot_sampling),
        (10, "spectral invariant", Duration::MAX, spectral),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({elapsed:.2?}): {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
