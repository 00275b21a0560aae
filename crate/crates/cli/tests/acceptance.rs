//! Acceptance suite: one test per criterion, exercising the CLI binary
//! for the table reproductions and the library for the exact-value
//! checks. Each test prints a PASS line with its wall time.

use neumaier_core::coherent::{support, wl_closure, DEFAULT_WL_CAP};
use neumaier_core::constructions::{
    gamma, gamma_canonical_clique, gk_graph, icosahedron, omega_fixture, validate_drg,
    whiteman_graph, GammaSpec,
};
use neumaier_core::cyclotomy::{
    closed_form, cyclotomic_numbers, uv_decomposition, x_sum_value, CyclotomicTable,
};
use neumaier_core::field::{build_field, prime_power_decompose, DlogTable, FieldSpec};
use neumaier_core::regularity::{classify, Verdict};
use neumaier_core::search::{
    neumaier_witness, nexus_table, prime_powers, solve_m3, solve_m4, NexusOptions, SolveOptions,
    TableCache, VerifyLevel,
};
use std::process::Command;
use std::time::Instant;

/// Table 1 as published, with one correction recorded in the project
/// notes: the printed partner 443 of q1 = 109 is not 1 mod 3; the actual
/// solution is 433.
const TABLE1: [(u64, u64); 20] = [
    (4, 7),
    (4, 13),
    (7, 16),
    (7, 19),
    (13, 16),
    (13, 49),
    (19, 67),
    (31, 43),
    (37, 73),
    (49, 193),
    (61, 97),
    (97, 241),
    (109, 433),
    (139, 331),
    (151, 163),
    (163, 211),
    (169, 313),
    (193, 769),
    (199, 787),
    (223, 811),
];

const TABLE2: [(u64, u64); 20] = [
    (5, 13),
    (5, 37),
    (17, 25),
    (25, 97),
    (29, 61),
    (29, 229),
    (41, 169),
    (41, 241),
    (61, 349),
    (89, 289),
    (89, 601),
    (101, 109),
    (109, 181),
    (113, 625),
    (125, 157),
    (125, 1093),
    (149, 541),
    (169, 1321),
    (181, 829),
    (229, 2029),
];

/// Table 3 as published: (nexus, m, q1, q2), 97 triples.
const TABLE3: [(u64, u64, u64, u64); 97] = [
    (1, 3, 4, 7),
    (1, 3, 4, 13),
    (1, 4, 5, 13),
    (1, 4, 5, 37),
    (1, 6, 7, 79),
    (1, 6, 7, 103),
    (1, 7, 8, 29),
    (1, 7, 8, 43),
    (1, 7, 8, 71),
    (1, 7, 8, 127),
    (1, 10, 11, 131),
    (2, 3, 7, 16),
    (2, 3, 7, 19),
    (2, 5, 11, 41),
    (2, 5, 11, 101),
    (2, 6, 13, 37),
    (2, 9, 19, 487),
    (3, 5, 16, 31),
    (3, 5, 16, 61),
    (3, 5, 16, 121),
    (3, 8, 25, 313),
    (3, 10, 31, 311),
    (3, 10, 31, 631),
    (4, 3, 13, 16),
    (4, 3, 13, 49),
    (4, 4, 17, 25),
    (4, 7, 29, 113),
    (4, 7, 29, 449),
    (4, 9, 37, 181),
    (4, 9, 37, 1171),
    (4, 10, 41, 401),
    (4, 10, 41, 601),
    (4, 10, 41, 1481),
    (5, 6, 31, 127),
    (5, 8, 41, 137),
    (6, 3, 19, 67),
    (6, 4, 25, 97),
    (6, 5, 31, 181),
    (6, 5, 31, 211),
    (6, 5, 31, 256),
    (6, 8, 49, 337),
    (6, 10, 61, 701),
    (6, 10, 61, 2221),
    (7, 4, 29, 61),
    (7, 4, 29, 229),
    (7, 6, 43, 691),
    (7, 9, 64, 199),
    (7, 9, 64, 307),
    (7, 9, 64, 343),
    (7, 9, 64, 613),
    (7, 9, 64, 631),
    (7, 9, 64, 739),
    (7, 9, 64, 829),
    (7, 9, 64, 991),
    (7, 9, 64, 1009),
    (7, 9, 64, 1063),
    (7, 9, 64, 1153),
    (7, 9, 64, 2197),
    (8, 5, 41, 71),
    (8, 5, 41, 131),
    (8, 6, 49, 73),
    (8, 6, 49, 1201),
    (8, 9, 73, 1621),
    (9, 7, 64, 757),
    (9, 7, 64, 883),
    (9, 7, 64, 1583),
    (10, 3, 31, 43),
    (10, 4, 41, 169),
    (10, 4, 41, 241),
    (10, 6, 61, 349),
    (10, 6, 61, 1237),
    (11, 6, 67, 139),
    (12, 3, 37, 73),
    (12, 5, 61, 211),
    (12, 5, 61, 256),
    (12, 5, 61, 331),
    (12, 5, 61, 421),
    (12, 6, 73, 673),
    (12, 9, 109, 739),
    (13, 6, 79, 1879),
    (13, 10, 131, 691),
    (13, 10, 131, 1091),
    (14, 5, 71, 281),
    (14, 5, 71, 461),
    (14, 9, 127, 397),
    (15, 4, 61, 349),
    (15, 10, 151, 431),
    (16, 3, 49, 193),
    (16, 6, 97, 1249),
    (17, 6, 103, 2503),
    (17, 8, 137, 953),
    (18, 10, 181, 1061),
    (19, 10, 191, 271),
    (19, 10, 191, 751),
    (20, 3, 61, 97),
    (20, 5, 101, 311),
    (20, 9, 181, 2161),
];

/// Strictly Neumaier triples the published table omits; each is
/// independently verified (see the project notes) and re-verified
/// analytically by the test whenever it appears in the output.
const TABLE3_DOCUMENTED_OMISSIONS: [(u64, u64, u64, u64); 8] = [
    (7, 10, 71, 991),
    (10, 10, 101, 1901),
    (10, 10, 101, 2221),
    (10, 10, 101, 3181),
    (12, 10, 121, 521),
    (12, 10, 121, 761),
    (20, 5, 101, 1361),
    (20, 5, 101, 1451),
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_neumaier"))
}

fn parse_pairs_csv(stdout: &str) -> Vec<(u64, u64)> {
    stdout
        .lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            (cols[1].parse().unwrap(), cols[2].parse().unwrap())
        })
        .collect()
}

fn field_and_dlog(q: u64) -> (FieldSpec, DlogTable) {
    let (p, r) = prime_power_decompose(q).unwrap();
    let f = build_field(p, r).unwrap();
    let t = f.dlog_table(&f.smallest_primitive()).unwrap();
    (f, t)
}

fn pass(criterion: &str, start: Instant, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: PASS ({:.2} s) {detail}",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_01_table1_reproduction() {
    let start = Instant::now();
    let out = bin()
        .args([
            "--threads",
            "1",
            "search",
            "pairs",
            "--m",
            "3",
            "--q1-max",
            "250",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let pairs = parse_pairs_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(pairs, TABLE1.to_vec(), "order-3 pairs differ from Table 1");
    assert!(
        start.elapsed().as_secs() < 60,
        "single-threaded budget exceeded"
    );
    pass("1 (Table 1)", start, "20 pairs, exact, single-threaded");
}

#[test]
fn acceptance_02_table2_reproduction() {
    let start = Instant::now();
    let out = bin()
        .args([
            "--threads",
            "1",
            "search",
            "pairs",
            "--m",
            "4",
            "--q1-max",
            "250",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let pairs = parse_pairs_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(pairs, TABLE2.to_vec(), "order-4 pairs differ from Table 2");
    assert!(start.elapsed().as_secs() < 60);
    pass("2 (Table 2)", start, "20 pairs, exact");
}

/// Analytic re-verification of a documented omission: the criterion must
/// hold for some relabeling with a non-singleton mu-set.
fn reverify_strict_hit(m: u64, q1: u64, q2: u64) {
    let mut cache = TableCache::new(m);
    let (spec, xs) = neumaier_witness(m, q1, q2, &mut cache)
        .unwrap()
        .unwrap_or_else(|| panic!("({m};{q1},{q2}) lost its witness"));
    let n1 = spec.n1;
    let n2 = spec.n2;
    assert_eq!(
        xs[0],
        (q1 + n1 * n2).checked_sub(2 * n1 + n2).unwrap(),
        "criterion violated for ({m};{q1},{q2})"
    );
    let mut mus: Vec<u64> = xs[1..].iter().map(|&x| 2 * n1 + x).collect();
    mus.push(n1 * (n2 + 1));
    mus.sort_unstable();
    mus.dedup();
    assert!(
        mus.len() > 1,
        "({m};{q1},{q2}) is strongly regular, not strictly Neumaier"
    );
}

#[test]
fn acceptance_03_table3_reproduction() {
    let start = Instant::now();
    // reduced run through the CLI: q2 <= 1000 must reproduce the subset
    let out = bin()
        .args([
            "search", "nexus", "--m-max", "10", "--q2-max", "1000", "--e-max", "20",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let reduced: Vec<(u64, u64, u64, u64)> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| {
            let c: Vec<u64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            (c[0], c[1], c[2], c[3])
        })
        .collect();
    let mut expected_reduced: Vec<(u64, u64, u64, u64)> = TABLE3
        .iter()
        .chain(TABLE3_DOCUMENTED_OMISSIONS.iter())
        .filter(|row| row.3 <= 1000)
        .copied()
        .collect();
    expected_reduced.sort_unstable();
    let mut got_reduced = reduced.clone();
    got_reduced.sort_unstable();
    assert_eq!(got_reduced, expected_reduced, "reduced nexus run differs");
    let reduced_elapsed = start.elapsed();
    assert!(
        reduced_elapsed.as_secs() < 120,
        "reduced run budget exceeded"
    );

    // full run through the library
    let hits = nexus_table(10, 5000, 20, NexusOptions::default()).unwrap();
    let got: Vec<(u64, u64, u64, u64)> = hits.iter().map(|h| (h.nexus, h.m, h.q1, h.q2)).collect();
    for row in TABLE3 {
        assert!(got.contains(&row), "published triple {row:?} missing");
    }
    let mut omissions_seen = 0;
    for row in &got {
        if !TABLE3.contains(row) {
            assert!(
                TABLE3_DOCUMENTED_OMISSIONS.contains(row),
                "undocumented extra {row:?}"
            );
            reverify_strict_hit(row.1, row.2, row.3);
            omissions_seen += 1;
        }
    }
    assert!(start.elapsed().as_secs() < 1800, "full run budget exceeded");
    pass(
        "3 (Table 3)",
        start,
        &format!(
            "all 97 published triples, {omissions_seen} re-verified omissions of the published table (see notes); reduced run {:.1} s",
            reduced_elapsed.as_secs_f64()
        ),
    );
}

fn witnessed_gamma(m: u64, q1: u64, q2: u64) -> GammaSpec {
    let mut cache = TableCache::new(m);
    neumaier_witness(m, q1, q2, &mut cache)
        .unwrap()
        .unwrap_or_else(|| panic!("({m};{q1},{q2}) has no witness"))
        .0
}

#[test]
fn acceptance_04_coherent_ranks_exact() {
    let start = Instant::now();
    for (q1, q2) in [(4u64, 7u64), (4, 13), (7, 16), (7, 19), (13, 16)] {
        let g = gamma(&witnessed_gamma(3, q1, q2)).unwrap();
        let c = wl_closure(&g, DEFAULT_WL_CAP).unwrap();
        assert_eq!(c.rank(), 6, "order-3 pair ({q1},{q2})");
    }
    for (q1, q2) in [(5u64, 13u64), (5, 37), (17, 25)] {
        let g = gamma(&witnessed_gamma(4, q1, q2)).unwrap();
        let c = wl_closure(&g, DEFAULT_WL_CAP).unwrap();
        assert_eq!(c.rank(), 7, "order-4 pair ({q1},{q2})");
    }
    let omega = omega_fixture();
    assert_eq!(wl_closure(&omega, DEFAULT_WL_CAP).unwrap().rank(), 7);
    let wh = whiteman_graph(13, 5, 2, &[]).unwrap();
    assert_eq!(wh.n(), 65);
    assert_eq!(wl_closure(&wh, DEFAULT_WL_CAP).unwrap().rank(), 7);
    let blowup = gk_graph(&validate_drg(icosahedron()).unwrap()).unwrap();
    let c = wl_closure(&blowup, DEFAULT_WL_CAP).unwrap();
    assert_eq!(c.rank(), 6);
    assert_eq!(support(&blowup, &c).unwrap().cardinality, 3);
    assert!(start.elapsed().as_secs() < 600);
    pass(
        "4 (coherent ranks)",
        start,
        "rank 6 x5, rank 7 x5, blow-up rank 6 / support 3",
    );
}

#[test]
fn acceptance_05_neumaier_parameters_exact() {
    let start = Instant::now();
    let expect = |g: &neumaier_core::graph::Graph,
                  tuple: (usize, usize, usize, usize, usize),
                  strict: bool,
                  name: &str| {
        let rep = classify(g, None).unwrap();
        assert_eq!(rep.v, tuple.0, "{name}: v");
        assert_eq!(rep.k, Some(tuple.1), "{name}: k");
        assert_eq!(rep.lambda, Some(tuple.2), "{name}: lambda");
        assert_eq!(rep.nexus, Some(tuple.3), "{name}: nexus");
        assert_eq!(rep.clique_order, Some(tuple.4), "{name}: clique order");
        if strict {
            assert_eq!(rep.verdict, Verdict::StrictlyNeumaier, "{name}");
        } else {
            assert!(
                matches!(
                    rep.verdict,
                    Verdict::StrictlyNeumaier | Verdict::NeumaierAndSrg
                ),
                "{name}"
            );
        }
    };
    let g47 = gamma(&witnessed_gamma(3, 4, 7)).unwrap();
    expect(&g47, (28, 9, 2, 1, 4), true, "gamma(3;4,7)");
    // lambda = 4 for the 16-vertex fixture: the printed 2 is impossible
    // for nexus 2 and clique order 4 (see notes)
    expect(&omega_fixture(), (16, 9, 4, 2, 4), true, "omega");
    expect(
        &whiteman_graph(13, 5, 2, &[]).unwrap(),
        (65, 16, 3, 1, 5),
        true,
        "whiteman(13,5)",
    );
    let blowup = gk_graph(&validate_drg(icosahedron()).unwrap()).unwrap();
    expect(&blowup, (24, 8, 2, 1, 4), true, "blow-up(icosahedron)");
    pass(
        "5 (Neumaier parameters)",
        start,
        "all four classifications exact",
    );
}

#[test]
fn acceptance_06_srg_family() {
    let start = Instant::now();
    let mut count = 0;
    for pp in prime_powers(1, 31) {
        let q = pp.q;
        if q < 3 {
            continue;
        }
        let (f, t) = field_and_dlog(q);
        for m in 2..q {
            if (q - 1) % m != 0 {
                continue;
            }
            let n = (q - 1) / m;
            let spec = GammaSpec::new(m, f.clone(), t.clone(), f.clone(), t.clone()).unwrap();
            let g = gamma(&spec).unwrap();
            let rep = classify(&g, Some(&gamma_canonical_clique(&spec))).unwrap();
            assert_eq!(rep.v as u64, q * q, "q={q} m={m}");
            assert_eq!(rep.k.unwrap() as u64, n * (q + m - 1), "q={q} m={m}");
            assert_eq!(
                rep.lambda.unwrap() as u64,
                q - 2 + n * (n - 1),
                "q={q} m={m}"
            );
            assert_eq!(rep.mu_set, vec![(n * (n + 1)) as usize], "q={q} m={m}");
            assert!(rep.srg, "q={q} m={m}");
            let c = wl_closure(&g, 1024).unwrap();
            assert_eq!(c.rank(), 3, "q={q} m={m}");
            count += 1;
        }
    }
    pass(
        "6 (SRG family)",
        start,
        &format!("{count} (q, m) combinations, rank 3 each"),
    );
}

#[test]
fn acceptance_07_cyclotomy_oracle_equivalence() {
    let start = Instant::now();
    let mut closed_checked = 0;
    let mut rules_checked = 0;
    for pp in prime_powers(1, 200) {
        let q = pp.q;
        if q < 3 {
            continue;
        }
        let f = build_field(pp.p, pp.r).unwrap();
        for alpha in f.primitive_elements() {
            let t = f.dlog_table(&alpha).unwrap();
            for m in 2..=10u64 {
                if (q - 1) % m != 0 {
                    continue;
                }
                let brute = cyclotomic_numbers(&f, &t, m).unwrap();
                check_sum_rules(&brute);
                rules_checked += 1;
                // Vandiver: X_{0,0,0}(a,a) and X_{0,0,i}(a,a)
                let n = (q - 1) / m;
                assert_eq!(
                    x_sum_value(&brute, &brute, 0, 0, 0),
                    (n - 1) * (n - 1) + n * (m - 1),
                    "q={q} m={m}"
                );
                for i in 1..m as i64 {
                    assert_eq!(
                        x_sum_value(&brute, &brute, 0, 0, i),
                        n * (n - 1),
                        "q={q} m={m}"
                    );
                }
                if m <= 4 {
                    let uv = if m == 2 {
                        None
                    } else {
                        Some(uv_decomposition(&f, &t, m).unwrap())
                    };
                    let closed = closed_form(m, q, uv.as_ref()).unwrap();
                    assert_eq!(
                        brute.counts(),
                        closed.counts(),
                        "q={q} m={m} alpha={}",
                        t.alpha_index()
                    );
                    closed_checked += 1;
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 120);
    pass(
        "7 (cyclotomy oracle)",
        start,
        &format!("{closed_checked} closed-form tables, {rules_checked} sum-rule tables"),
    );
}

fn check_sum_rules(t: &CyclotomicTable) {
    let m = t.m() as i64;
    let n = t.n();
    let q = t.q();
    let qn_even = (q * n).is_multiple_of(2);
    for b in 0..m {
        let sum: u64 = (0..m).map(|a| t.get(a, b)).sum();
        assert_eq!(sum, if b == 0 { n - 1 } else { n }, "row sums q={q} m={m}");
    }
    for a in 0..m {
        let sum: u64 = (0..m).map(|b| t.get(a, b)).sum();
        let expect = if (qn_even && a == 0) || (!qn_even && a == m / 2 && m % 2 == 0) {
            n - 1
        } else {
            n
        };
        assert_eq!(sum, expect, "column sums q={q} m={m} a={a}");
    }
    for a in 0..m {
        for b in 0..m {
            if qn_even {
                assert_eq!(t.get(a, b), t.get(b, a), "symmetry q={q} m={m}");
            } else {
                assert_eq!(
                    t.get(a, b),
                    t.get(b + m / 2, a + m / 2),
                    "odd symmetry q={q} m={m}"
                );
            }
        }
    }
}

#[test]
fn acceptance_08_schur_partition_verification() {
    let start = Instant::now();
    use neumaier_core::coherent::schur_verify;
    use rayon::prelude::*;
    let mut combos = Vec::new();
    for m in 2u64..=6 {
        let q1s = prime_powers(m, 1000);
        for pp1 in &q1s {
            for pp2 in prime_powers(m, 2000 / pp1.q) {
                if pp1.q * pp2.q <= 2000 {
                    combos.push((m, pp1.q, pp2.q));
                }
            }
        }
    }
    let count = combos.len();
    combos.par_iter().for_each(|&(m, q1, q2)| {
        let (f1, a1) = field_and_dlog(q1);
        let (f2, a2) = field_and_dlog(q2);
        let spec = GammaSpec::new(m, f1, a1, f2, a2).unwrap();
        let report = schur_verify(&spec).unwrap();
        assert!(
            report.ok,
            "m={m} q1={q1} q2={q2}: {:?}",
            report.mismatches.first()
        );
    });
    assert!(start.elapsed().as_secs() < 300);
    pass(
        "8 (Schur partitions)",
        start,
        &format!("{count} (m, q1, q2) combinations"),
    );
}

#[test]
fn acceptance_09_order2_negative_control() {
    let start = Instant::now();
    use rayon::prelude::*;
    let qs: Vec<u64> = prime_powers(2, 50).iter().map(|p| p.q).collect();
    let pairs: Vec<(u64, u64)> = qs
        .iter()
        .flat_map(|&q1| qs.iter().map(move |&q2| (q1, q2)))
        .collect();
    let count = pairs.len();
    pairs.par_iter().for_each(|&(q1, q2)| {
        let (f1, a1) = field_and_dlog(q1);
        let (f2, a2) = field_and_dlog(q2);
        let spec = GammaSpec::new(2, f1, a1, f2, a2).unwrap();
        if !spec.parity_ok() {
            // directed: not a graph, a fortiori not a Neumaier graph
            assert!(gamma(&spec).is_err());
            assert_ne!(q1, q2);
            return;
        }
        let g = gamma(&spec).unwrap();
        let rep = classify(&g, Some(&gamma_canonical_clique(&spec))).unwrap();
        let neumaier = matches!(
            rep.verdict,
            Verdict::StrictlyNeumaier | Verdict::NeumaierAndSrg
        );
        assert_eq!(neumaier, q1 == q2, "({q1},{q2}) verdict {}", rep.verdict);
    });
    assert!(start.elapsed().as_secs() < 60);
    pass(
        "9 (order-2 control)",
        start,
        &format!("{count} ordered pairs, diagonal only"),
    );
}

#[test]
fn acceptance_10_even_solution_classification() {
    let start = Instant::now();
    for bound in [250u64, 400] {
        let hits = solve_m3(
            bound,
            SolveOptions {
                verify: VerifyLevel::None,
                ..Default::default()
            },
        )
        .unwrap();
        let even_coprime: Vec<(u64, u64)> = hits
            .iter()
            .filter(|h| !h.same_prime && (h.q1 * h.q2) % 2 == 0)
            .map(|h| (h.q1, h.q2))
            .collect();
        assert_eq!(
            even_coprime,
            vec![(4, 7), (4, 13), (7, 16), (13, 16)],
            "bound {bound}"
        );
    }
    // cross-check table 2 values through the same pipeline at verify level
    let verified = solve_m4(
        17,
        SolveOptions {
            verify: VerifyLevel::Wl,
            ..Default::default()
        },
    )
    .unwrap();
    for h in verified.iter().filter(|h| !h.same_prime) {
        assert_eq!(h.rank, Some(7), "({},{})", h.q1, h.q2);
    }
    pass(
        "10 (even solutions)",
        start,
        "exactly {(4,7),(4,13),(7,16),(13,16)} at 250 and 400",
    );
}
