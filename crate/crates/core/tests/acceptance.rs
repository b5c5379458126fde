//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always appear in
//! `cargo test` output.

use std::collections::{HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use polychromatic::check::{is_invariant, is_polychromatic, is_proper_2_coloring};
use polychromatic::coloring::{default_radius, default_separation, ColoringPlan};
use polychromatic::cube_path::{connect, CubeLabeling};
use polychromatic::grid::TorusDomain;
use polychromatic::labeling::Labeling;
use polychromatic::render::{render, Format};
use polychromatic::rigidity::{
    assemble, complementation_holds, enumerate_polychromatic, extract_tuple, invariance_report,
    verify_dichotomy_d2,
};
use polychromatic::toast::{generate, validate, GenerationPolicy, Toast};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < budget, "{what} took {t:.2?}, budget {budget:?}");
    Ok(t)
}

// ---------------------------------------------------------------- oracles

/// All labelings of `2^d` vertices by `2^d - 1` colors that use every color,
/// by filtering the full product.
fn brute_surjective(d: usize) -> Vec<Vec<u8>> {
    let n = 1usize << d;
    let q = n - 1;
    let mut out = Vec::new();
    for code in 0..q.pow(n as u32) {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push((c % q) as u8);
            c /= q;
        }
        let mut seen = vec![false; q];
        v.iter().for_each(|&x| seen[x as usize] = true);
        if seen.iter().all(|&s| s) {
            out.push(v);
        }
    }
    out
}

/// Shortest single-vertex recoloring distances between surjective labelings.
fn bfs_oracle(states: &[Vec<u8>], from: usize) -> Vec<usize> {
    let index: HashMap<&[u8], usize> = states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let q = states[0].len() as u8 - 1;
    let mut dist = vec![usize::MAX; states.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let mut s = states[u].clone();
        for v in 0..s.len() {
            let old = s[v];
            for col in 0..q {
                s[v] = col;
                if let Some(&w) = index.get(s.as_slice()) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            s[v] = old;
        }
    }
    dist
}

/// Path validity without the library's own checker.
fn path_problem(steps: &[Vec<u8>], a: &[u8], b: &[u8], max_changes: usize) -> Option<String> {
    let q = a.len() - 1;
    if steps.first().map(Vec::as_slice) != Some(a) || steps.last().map(Vec::as_slice) != Some(b) {
        return Some("wrong endpoints".into());
    }
    if steps.len() - 1 > max_changes {
        return Some(format!("{} changes", steps.len() - 1));
    }
    for s in steps {
        let mut seen = vec![false; q];
        s.iter().for_each(|&x| seen[x as usize] = true);
        if !seen.iter().all(|&x| x) {
            return Some(format!("{s:?} not surjective"));
        }
    }
    for w in steps.windows(2) {
        let diff = w[0].iter().zip(&w[1]).filter(|(x, y)| x != y).count();
        if diff != 1 {
            return Some(format!("step {:?} -> {:?} changes {diff} vertices", w[0], w[1]));
        }
    }
    None
}

fn random_surjective(rng: &mut impl Rng, d: usize) -> Vec<u8> {
    let n = 1usize << d;
    let mut v: Vec<u8> = (0..(n - 1) as u8).collect();
    v.push(rng.gen_range(0..(n - 1) as u8));
    v.shuffle(rng);
    v
}

/// Every unit cube sees all `k` colors, walking coordinates directly.
fn naive_polychromatic(c: &Labeling, k: usize) -> bool {
    let sides = c.domain().sides().to_vec();
    let d = sides.len();
    let data = c.data();
    let n: usize = sides.iter().product();
    let index = |x: &[usize]| x.iter().zip(&sides).fold(0, |acc, (&xi, &s)| acc * s + xi);
    // Split on the first coordinate for parallelism.
    (0..sides[0]).into_par_iter().all(|x0| {
        let mut x = vec![0usize; d];
        x[0] = x0;
        let mut y = vec![0usize; d];
        for _ in 0..n / sides[0] {
            let mut seen = 0u128;
            for eps in 0..1usize << d {
                for i in 0..d {
                    y[i] = (x[i] + ((eps >> (d - 1 - i)) & 1)) % sides[i];
                }
                seen |= 1 << data[index(&y)];
            }
            if seen.count_ones() as usize != k {
                return false;
            }
            for i in (1..d).rev() {
                x[i] += 1;
                if x[i] < sides[i] {
                    break;
                }
                x[i] = 0;
            }
        }
        true
    })
}

/// 4-polychromatic colorings of an `a x b` torus: those invariant under
/// `e_0^2` are fixed by an ordered pair on row 0 and a swap choice on each
/// later row, and likewise for `e_1^2`; the 24 doubly periodic ones are
/// counted twice.
fn closed_form_count(a: usize, b: usize) -> usize {
    12 * (1 << (b - 1)) + 12 * (1 << (a - 1)) - 24
}

fn peak_rss_mib() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
}

// ---------------------------------------------------------------- criteria

fn c1_connect_exhaustive_d2() -> Outcome {
    let start = Instant::now();
    let states = brute_surjective(2);
    ensure!(states.len() == 36, "brute force found {} surjective labelings", states.len());
    let lib: Vec<Vec<u8>> = polychromatic::cube_path::surjective_labelings(2)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.values().to_vec())
        .collect();
    let mut a = lib.clone();
    a.sort();
    let mut b = states.clone();
    b.sort();
    ensure!(a == b, "library enumeration differs from brute force");

    let mut worst = 0;
    let mut slack = 0;
    for (i, x) in states.iter().enumerate() {
        let dist = bfs_oracle(&states, i);
        for (j, y) in states.iter().enumerate() {
            let from = CubeLabeling::new(2, x.clone()).unwrap();
            let to = CubeLabeling::new(2, y.clone()).unwrap();
            let path = connect(&from, &to).map_err(|e| e.to_string())?;
            let steps: Vec<Vec<u8>> = path.steps().iter().map(|s| s.values().to_vec()).collect();
            if let Some(p) = path_problem(&steps, x, y, 8) {
                return Err(format!("{x:?} -> {y:?}: {p}"));
            }
            let changes = steps.len() - 1;
            ensure!(changes >= dist[j], "{x:?} -> {y:?} beats the BFS optimum");
            worst = worst.max(changes);
            slack += changes - dist[j];
        }
    }
    let t = within(start, Duration::from_secs(5), "exhaustive run")?;
    Ok(format!("36 labelings, 1296 pairs, max {worst} changes, total excess over BFS {slack}, {t:.2?}"))
}

fn c2_connect_random() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = [0usize; 2];
    for (slot, (d, pairs)) in [(3usize, 1000usize), (4, 100)].into_iter().enumerate() {
        for _ in 0..pairs {
            let x = random_surjective(&mut rng, d);
            let y = random_surjective(&mut rng, d);
            let from = CubeLabeling::new(d, x.clone()).unwrap();
            let to = CubeLabeling::new(d, y.clone()).unwrap();
            let path = connect(&from, &to).map_err(|e| e.to_string())?;
            let steps: Vec<Vec<u8>> = path.steps().iter().map(|s| s.values().to_vec()).collect();
            if let Some(p) = path_problem(&steps, &x, &y, 1 << (d + 1)) {
                return Err(format!("d={d} {x:?} -> {y:?}: {p}"));
            }
            worst[slot] = worst[slot].max(steps.len() - 1);
        }
    }
    let t = within(start, Duration::from_secs(30), "random pairs")?;
    Ok(format!("d=3 max {} of 16, d=4 max {} of 32 changes, {t:.2?}", worst[0], worst[1]))
}

fn c3_end_to_end_d2() -> Outcome {
    let domain = TorusDomain::new(vec![512, 512]).unwrap();
    let (r, radius) = (66, 32);
    let mut slowest = Duration::ZERO;
    let mut pieces = 0;
    for seed in 0..10u64 {
        let start = Instant::now();
        let toast = generate(&domain, r, 2, seed, &GenerationPolicy::default()).map_err(|e| e.to_string())?;
        pieces += toast.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = CubeLabeling::new(2, random_surjective(&mut rng, 2)).unwrap();
        let plan = ColoringPlan::new(toast, base, radius).map_err(|e| e.to_string())?;
        let c = plan.build();
        let check = is_polychromatic(&c, 3);
        ensure!(check.ok && check.cubes_checked == 262_144, "seed {seed}: {check:?}");
        ensure!(naive_polychromatic(&c, 3), "seed {seed}: independent checker disagrees");
        let report = plan.verify(&c);
        ensure!(report.ok && report.violation_count == 0, "seed {seed}: {} violations", report.violation_count);
        slowest = slowest.max(within(start, Duration::from_secs(10), &format!("seed {seed}"))?);
    }
    Ok(format!("10 seeds, {pieces} pieces in total, slowest seed {slowest:.2?}"))
}

fn c4_end_to_end_d3() -> Outcome {
    let start = Instant::now();
    let domain = TorusDomain::new(vec![512, 512, 512]).unwrap();
    let (radius, r) = (default_radius(3), default_separation(3));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = CubeLabeling::new(3, random_surjective(&mut rng, 3)).unwrap();

    let trivial = ColoringPlan::new(Toast::trivial(domain.clone(), r), base.clone(), radius)
        .map_err(|e| e.to_string())?;
    let c = trivial.build();
    ensure!(is_polychromatic(&c, 7).ok, "trivial toast coloring is not 7-polychromatic");
    drop(c);

    let policy = GenerationPolicy {
        leaf_side: (16, 48),
        slack: 0,
        max_children: 1,
        attempts: 200,
    };
    let toast = generate(&domain, r, 1, 11, &policy).map_err(|e| e.to_string())?;
    ensure!(toast.len() == 2, "expected one internal piece, got {} pieces", toast.len());
    let inner = toast.pieces()[1].cells().len();
    let plan = ColoringPlan::new(toast, base, radius).map_err(|e| e.to_string())?;
    let c = plan.build();
    let check = is_polychromatic(&c, 7);
    ensure!(check.ok, "{check:?}");
    ensure!(naive_polychromatic(&c, 7), "independent checker disagrees");
    let report = plan.verify(&c);
    ensure!(report.ok, "{} plan violations", report.violation_count);
    let t = within(start, Duration::from_secs(300), "512^3 run")?;
    let rss = peak_rss_mib();
    if let Some(mib) = rss {
        ensure!(mib < 2048.0, "peak RSS {mib:.0} MiB");
    }
    Ok(format!(
        "R={radius} r={r}, inner piece of {inner} cells, {} cubes, {} gap cubes, {t:.2?}, peak RSS {}",
        check.cubes_checked,
        report.gap_cubes,
        rss.map_or("unknown".into(), |m| format!("{m:.0} MiB"))
    ))
}

fn c5_toast_validity() -> Outcome {
    let start = Instant::now();
    let geometries: [(&[usize], usize, usize); 5] = [
        (&[512, 512], 66, 2),
        (&[300, 260], 20, 3),
        (&[2000], 10, 3),
        (&[128, 128, 128], 15, 2),
        (&[96, 96], 5, 4),
    ];
    let mut runs = 0;
    let mut pieces = 0;
    for (g, &(sides, r, levels)) in geometries.iter().enumerate() {
        let domain = TorusDomain::new(sides.to_vec()).unwrap();
        let d = sides.len();
        let radius = (r - d) / 2;
        for seed in 0..20u64 {
            let t = generate(&domain, r, levels, seed, &GenerationPolicy::default())
                .map_err(|e| format!("geometry {g} seed {seed}: {e}"))?;
            let report = validate(&t);
            ensure!(report.valid, "geometry {g} seed {seed}: {:?}", report.violations.first());
            let thick = t.check_thickenings(radius).map_err(|e| e.to_string())?;
            ensure!(thick.is_empty(), "geometry {g} seed {seed}: {}", thick[0]);
            runs += 1;
            pieces += t.len();
        }
    }
    let t = start.elapsed();
    Ok(format!("{runs} toasts, {pieces} pieces, all valid with sound thickenings, {t:.2?}"))
}

fn c6_round_trip_d2() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for sides in [[4usize, 4], [4, 6]] {
        let domain = TorusDomain::new(sides.to_vec()).unwrap();
        let all: Vec<Labeling> = enumerate_polychromatic(&domain, 4).map_err(|e| e.to_string())?.collect();
        let expected = closed_form_count(sides[0], sides[1]);
        ensure!(all.len() == expected, "{sides:?}: {} colorings, closed form {expected}", all.len());
        for c in &all {
            ensure!(is_polychromatic(c, 4).ok, "{sides:?}: emitted coloring fails the checker");
            let tuple = extract_tuple(c, 0).map_err(|e| e.to_string())?;
            for (i, ci) in tuple.iter().enumerate() {
                ensure!(is_proper_2_coloring(ci, i), "{sides:?}: extracted c_{i} is not proper");
            }
            let report = invariance_report(&tuple).map_err(|e| e.to_string())?;
            ensure!(report.n() >= 1, "{sides:?}: extracted tuple is 0-fold invariant");
            let back = assemble(&tuple).map_err(|e| e.to_string())?;
            ensure!(is_polychromatic(&back, 4).ok, "{sides:?}: reassembled coloring fails");
            let e0 = is_invariant(c, &[2, 0]);
            let e1 = is_invariant(c, &[0, 2]);
            ensure!(e0 || e1, "{sides:?}: {:?} invariant under neither square", c.data());
        }
        let report = verify_dichotomy_d2(&domain).map_err(|e| e.to_string())?;
        ensure!(report.violations == 0 && report.total == expected, "{report:?}");
        summary.push(format!(
            "{}x{}: {} colorings ({} up to color renaming)",
            sides[0], sides[1], report.total, report.total_up_to_color_permutation
        ));
    }

    // Every tuple of proper per-direction 2-colorings on 4x4 with at least one
    // orthogonally invariant member.
    let domain = TorusDomain::new(vec![4, 4]).unwrap();
    let proper = |axis: usize| -> Vec<Labeling> {
        (0..16u32)
            .map(|bits| {
                Labeling::from_fn(domain.clone(), 2, |x| {
                    let line = x[1 - axis];
                    ((x[axis] as u32 + (bits >> line)) % 2) as u8
                })
                .unwrap()
            })
            .collect()
    };
    let mut assembled = 0;
    for c0 in proper(0) {
        for c1 in proper(1) {
            let tuple = [c0.clone(), c1];
            if invariance_report(&tuple).map_err(|e| e.to_string())?.n() == 0 {
                continue;
            }
            let c = assemble(&tuple).map_err(|e| e.to_string())?;
            ensure!(is_polychromatic(&c, 4).ok, "assembled tuple fails the checker");
            assembled += 1;
        }
    }
    let t = within(start, Duration::from_secs(60), "round trip")?;
    summary.push(format!("{assembled} stripe tuples assembled, {t:.2?}"));
    Ok(summary.join("; "))
}

fn c7_complementation() -> Outcome {
    let mut checked = 0;
    for sides in [[4usize, 4], [4, 6], [6, 6]] {
        let domain = TorusDomain::new(sides.to_vec()).unwrap();
        for c in enumerate_polychromatic(&domain, 4).map_err(|e| e.to_string())? {
            ensure!(complementation_holds(&c), "{sides:?}: identity fails on {:?}", c.data());
            checked += 1;
        }
    }
    Ok(format!("identity holds on all {checked} enumerated colorings, both directions"))
}

fn c8_golden_figures() -> Outcome {
    let dir = fixtures();
    let mut matched = 0;
    for fig in ["figure1", "figure2"] {
        let text = std::fs::read_to_string(dir.join(format!("{fig}.json"))).map_err(|e| e.to_string())?;
        let c = Labeling::from_json(&text).map_err(|e| e.to_string())?;
        for (format, ext) in [(Format::Ascii, "txt"), (Format::Svg, "svg")] {
            let golden = std::fs::read(dir.join(format!("{fig}.{ext}"))).map_err(|e| e.to_string())?;
            let got = render(&c, format).map_err(|e| e.to_string())?;
            ensure!(got.as_bytes() == golden, "{fig}.{ext} differs from the rendering");
            matched += 1;
        }
    }
    Ok(format!("{matched} golden files byte-identical"))
}

fn pipeline_digest() -> Result<String, String> {
    let domain = TorusDomain::new(vec![512, 512]).unwrap();
    let toast = generate(&domain, 66, 2, 7, &GenerationPolicy::default()).map_err(|e| e.to_string())?;
    let toast_json = toast.to_json().map_err(|e| e.to_string())?;
    let reread = Toast::from_json(&toast_json).map_err(|e| e.to_string())?;
    let base = CubeLabeling::new(2, vec![0, 1, 2, 0]).unwrap();
    let plan = ColoringPlan::new(reread, base, 32).map_err(|e| e.to_string())?;
    let c = plan.build();
    let c_json = c.to_json().map_err(|e| e.to_string())?;
    let report = serde_json::to_string(&plan.verify(&c)).map_err(|e| e.to_string())?;
    let mut h = Sha256::new();
    for part in [&toast_json, &c_json, &report] {
        h.update(part.as_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

fn c9_determinism() -> Outcome {
    let first = pipeline_digest()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let second = pool.install(pipeline_digest)?;
    ensure!(first == second, "digests differ: {first} vs {second}");
    Ok(format!("sha256 {} on both runs (default pool and 1 worker)", &first[..16]))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("cube reconfiguration, exhaustive d=2", c1_connect_exhaustive_d2),
        ("cube reconfiguration, random d=3 and d=4", c2_connect_random),
        ("3-coloring of 512x512, 10 seeds", c3_end_to_end_d2),
        ("7-coloring of 512^3", c4_end_to_end_d3),
        ("toast generation validity", c5_toast_validity),
        ("4-coloring round trip and dichotomy", c6_round_trip_d2),
        ("face complementation identity", c7_complementation),
        ("golden figures", c8_golden_figures),
        ("determinism", c9_determinism),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if let Some(f) = &filter {
            if !name.contains(f.as_str()) && f != &n.to_string() {
                continue;
            }
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("acceptance {n} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("acceptance {n} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
