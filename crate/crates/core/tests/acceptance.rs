//! Acceptance suite. Each test prints one `PASS`/`FAIL`/`SKIP` line and then
//! asserts on it. Run with `--nocapture` to see the lines.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use netcomplexity::automorphism::{aut_order, aut_order_bruteforce};
use netcomplexity::complexity::{
    complexity, medium_articulation, prefix_bits, weighted_complexity, ComplexityOptions, LogBase,
};
use netcomplexity::generators::{GeneratorSpec, WeightModel};
use netcomplexity::io::{parse_pajek, write_report, Format, Report};
use netcomplexity::neutral::{null_model, shuffle_links, Scoring};
use netcomplexity::Network;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {id:>2} {name}: {verdict} ({detail})");
    assert!(pass, "acceptance {id} {name} failed: {detail}");
}

fn random_network(rng: &mut ChaCha8Rng, n: usize, directed: bool, loops: bool, density: f64) -> Network {
    let mut net = Network::new(n, directed, loops).unwrap();
    let slots: Vec<_> = net.slots().collect();
    for (u, v) in slots {
        if rng.random_bool(density) {
            net.add_link(u, v, 1.0).unwrap();
        }
    }
    net
}

fn bits_of(net: &Network) -> f64 {
    complexity(net).unwrap().total_bits
}

#[test]
fn c01_automorphism_oracle() {
    let start = Instant::now();
    let mut mismatches = 0;
    let slots: Vec<_> = Network::new(5, false, false).unwrap().slots().collect();
    for mask in 0u32..1 << slots.len() {
        let pairs = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
        let net = Network::from_pairs(5, false, false, pairs).unwrap();
        if aut_order(&net).unwrap().order != aut_order_bruteforce(&net).unwrap().order {
            mismatches += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    for _ in 0..1000 {
        let n = rng.random_range(1..=7);
        let loops = rng.random_bool(0.3);
        let density = rng.random_range(0.0..1.0);
        let net = random_network(&mut rng, n, true, loops, density);
        if aut_order(&net).unwrap().order != aut_order_bruteforce(&net).unwrap().order {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "automorphism oracle",
        mismatches == 0 && elapsed < Duration::from_secs(60),
        &format!("{mismatches} mismatches over 2024 networks in {elapsed:.1?}"),
    );
}

#[test]
fn c02_prefix_anchor() {
    let bits = prefix_bits(8, 28);
    report(2, "prefix anchor", bits == 12, &format!("prefix_bits(8, 28) = {bits}"));
}

#[test]
fn c03_endpoint_minima_and_complement_symmetry() {
    let start = Instant::now();
    let slots: Vec<_> = Network::new(6, false, false).unwrap().slots().collect();
    let mut min = f64::INFINITY;
    let mut worst_asym: f64 = 0.0;
    let mut endpoints = [0.0; 2];
    for mask in 0u32..1 << slots.len() {
        let pairs = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
        let net = Network::from_pairs(6, false, false, pairs).unwrap();
        let c = bits_of(&net);
        worst_asym = worst_asym.max((c - bits_of(&net.complement())).abs());
        min = min.min(c);
        if net.link_count() == 0 {
            endpoints[0] = c;
        } else if net.link_count() == 15 {
            endpoints[1] = c;
        }
    }
    let elapsed = start.elapsed();
    let minima = endpoints.iter().all(|&c| (c - min).abs() < 1e-9);
    report(
        3,
        "endpoint minima and complement symmetry",
        minima && worst_asym < 1e-9 && elapsed < Duration::from_secs(300),
        &format!(
            "min {min}, C(l=0) {}, C(l=15) {}, max |C(G) - C(G')| {worst_asym:e}, {elapsed:.1?}",
            endpoints[0], endpoints[1]
        ),
    );
}

#[test]
fn c04_isomorphism_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(1..=40);
        let directed = rng.random_bool(0.5);
        let loops = rng.random_bool(0.2);
        let density = rng.random_range(0.0..0.6);
        let net = random_network(&mut rng, n, directed, loops, density);
        let c = bits_of(&net);
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            worst = worst.max((bits_of(&net.relabel(&perm).unwrap()) - c).abs());
        }
    }
    report(
        4,
        "isomorphism invariance",
        worst < 1e-9,
        &format!("max deviation {worst:e} over 2500 relabelings"),
    );
}

#[test]
fn c05_weighted_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 200 {
        let n = rng.random_range(2..=25);
        let directed = rng.random_bool(0.5);
        let density = rng.random_range(0.05..1.0);
        let base = random_network(&mut rng, n, directed, false, density);
        let l = base.link_count();
        if l == 0 {
            continue;
        }
        let w = rng.random_range(0.01..10.0);
        let weighted = Network::from_links(
            n,
            directed,
            false,
            base.links().iter().map(|k| (k.source, k.target, w)),
        )
        .unwrap();
        let empty = Network::new(n, directed, false).unwrap();
        let expected = bits_of(&empty) / l as f64 + (1.0 - 1.0 / l as f64) * bits_of(&base);
        worst = worst.max((weighted_complexity(&weighted).unwrap() - expected).abs());
        cases += 1;
    }
    report(
        5,
        "weighted decomposition identity",
        worst < 1e-9,
        &format!("max deviation {worst:e} over {cases} cases"),
    );
}

#[test]
fn c06_attachment_table_row() {
    let start = Instant::now();
    let target = 98.9;
    let mut passes = 0;
    let mut rows = Vec::new();
    for seed in 0..10u64 {
        let net = GeneratorSpec::preferential_attachment(100, 1, true, seed)
            .with_weights(WeightModel::Uniform01)
            .generate()
            .unwrap();
        let run = null_model(&net, 1000, seed, Scoring::Weighted, &ComplexityOptions::default()).unwrap();
        let s = run.significance;
        let ok = (s.c_real - target).abs() <= 0.1 * target
            && (1.0..=4.0).contains(&s.sigma)
            && s.surplus > 0.0;
        passes += usize::from(ok);
        rows.push(format!("C={:.1} sigma={:.2} surplus={:.1}", s.c_real, s.sigma, s.surplus));
    }
    let elapsed = start.elapsed();
    for (seed, row) in rows.iter().enumerate() {
        println!("    seed {seed}: {row}");
    }
    report(
        6,
        "attachment table row",
        passes >= 8 && elapsed < Duration::from_secs(900),
        &format!("{passes}/10 seeds within C 98.9 +/- 10%, sigma in [1, 4], surplus > 0; {elapsed:.1?}"),
    );
}

#[test]
fn c07_zero_variance_sentinel() {
    let full = Network::new(6, true, false).unwrap().complement();
    let run = null_model(&full, 100, 7, Scoring::Unweighted, &ComplexityOptions::default()).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&write_report(&Report::from_run(&run, None), Format::Json)).unwrap();
    let ok = run.stats.std_ln_c == 0.0 && json["sigma"] == "inf";
    report(
        7,
        "zero-variance sentinel",
        ok,
        &format!("std_ln_c = {}, sigma = {}", run.stats.std_ln_c, json["sigma"]),
    );
}

// Mutual information and joint entropy of a dense flow matrix, in bits.
fn information_terms(w: &[Vec<f64>]) -> (f64, f64) {
    let n = w.len();
    let total: f64 = w.iter().flatten().sum();
    let mut mi = 0.0;
    let mut h = 0.0;
    for i in 0..n {
        let row: f64 = w[i].iter().sum::<f64>() / total;
        for j in 0..n {
            let col: f64 = (0..n).map(|k| w[k][j]).sum::<f64>() / total;
            let p = w[i][j] / total;
            if p > 0.0 {
                mi += p * (p / (row * col)).log2();
                h -= p * p.log2();
            }
        }
    }
    (mi, h)
}

#[test]
fn c08_medium_articulation() {
    let single = Network::from_links(5, true, false, [(1, 3, 0.7)]).unwrap();
    let z1 = medium_articulation(&single, LogBase::Two).unwrap().ma;
    let complete = Network::from_links(
        5,
        true,
        true,
        (0..5).flat_map(|u| (0..5).map(move |v| (u, v, 0.4))),
    )
    .unwrap();
    let z2 = medium_articulation(&complete, LogBase::Two).unwrap().ma;

    let mut rng = ChaCha8Rng::seed_from_u64(0x3a);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 1000 {
        let n = rng.random_range(2..=12);
        let loops = rng.random_bool(0.3);
        let density = rng.random_range(0.05..1.0);
        let mut dense = vec![vec![0.0; n]; n];
        let mut net = Network::new(n, true, loops).unwrap();
        let slots: Vec<_> = net.slots().collect();
        for (u, v) in slots {
            if rng.random_bool(density) {
                let w = rng.random_range(0.001..5.0);
                net.add_link(u, v, w).unwrap();
                dense[u][v] = w;
            }
        }
        if net.link_count() == 0 {
            continue;
        }
        let (mi, h) = information_terms(&dense);
        let got = medium_articulation(&net, LogBase::Two).unwrap().ma;
        worst = worst.max((got - mi * (h - mi)).abs());
        cases += 1;
    }
    report(
        8,
        "medium articulation zeros and identity",
        z1.abs() < 1e-12 && z2.abs() < 1e-12 && worst < 1e-9,
        &format!("single link {z1:e}, uniform complete {z2:e}, max deviation {worst:e} over {cases}"),
    );
}

fn narragansett_path() -> Option<PathBuf> {
    let path = std::env::var_os("NARRAGANSETT_NET")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/narragansett.net"));
    path.exists().then_some(path)
}

#[test]
fn c09_narragansett() {
    let Some(path) = narragansett_path() else {
        println!("acceptance  9 narragansett food web: SKIP (set NARRAGANSETT_NET to a Pajek file)");
        return;
    };
    let text = std::fs::read_to_string(&path).unwrap();
    let (net, _) = parse_pajek(&text).unwrap();
    let run = null_model(&net, 1000, 1, Scoring::Weighted, &ComplexityOptions::default()).unwrap();
    let s = run.significance;
    report(
        9,
        "narragansett food web",
        (s.c_real - 58.2).abs() <= 0.5 && (s.sigma - 11.0).abs() <= 2.0,
        &format!("{} nodes, {} links, C = {:.2}, sigma = {:.2}", run.nodes, run.links, s.c_real, s.sigma),
    );
}

#[test]
fn c10_shuffle_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f);
    let mut violations = 0;
    for k in 0..10_000u64 {
        let n = rng.random_range(1..=12);
        let directed = rng.random_bool(0.5);
        let loops = rng.random_bool(0.3);
        // Spread fill fractions so both sampling regimes are exercised.
        let density = [0.1, 0.5, 0.95, 1.0][k as usize % 4];
        let mut net = Network::new(n, directed, loops).unwrap();
        let slots: Vec<_> = net.slots().collect();
        for (u, v) in slots {
            if rng.random_bool(density) {
                net.add_link(u, v, rng.random_range(0.01..3.0)).unwrap();
            }
        }
        let s = shuffle_links(&net, k).unwrap();
        let mut a = net.weights();
        let mut b = s.weights();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let keys: HashSet<_> = s.links().iter().map(|l| (l.source, l.target)).collect();
        let ok = s.node_count() == n
            && s.link_count() == net.link_count()
            && s.is_directed() == directed
            && a == b
            && keys.len() == s.link_count()
            && s.links().iter().all(|l| directed || l.source <= l.target);
        violations += usize::from(!ok);
    }
    report(
        10,
        "shuffle conservation",
        violations == 0,
        &format!("{violations} violations over 10000 shuffles"),
    );
}
