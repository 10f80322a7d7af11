//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use bnb_assess::aggregate::shifted_geometric_mean;
use bnb_assess::measures::{
    overhead_breakdown, parallel_efficiency, primal_dual_integral, relative_gap, speedup,
};
use bnb_assess::profiles::{
    performance_profile, performance_ratios, render_svg, MeasureTable, Observation, Plot,
    ProfileCurve, RatioOptions, SvgOptions,
};
use bnb_assess::sim::{
    brute_force_knapsack, generate_instance, seed_sweep, simulate_parallel, solve_sequential,
    InstanceFamily, KnapsackInstance, SearchOrder, SimConfig, WorkloadMode,
};
use bnb_assess::trace::{to_micros, validate_trace, BoundEvent, RunRecord, Sense, Status, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const BIN: &str = env!("CARGO_BIN_EXE_bnb-assess");
const GOLDEN_SVG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/performance_profile.svg");

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("reference speed-up table", speedup_table),
        ("relative gap suite", gap_suite),
        ("primal-dual integral suite", pdi_suite),
        ("shifted geometric mean suite", sgm_suite),
        ("oracle equivalence", oracle_equivalence),
        ("conservation of core time", conservation),
        ("scalability sanity", scalability),
        ("variability across seeds", variability),
        ("profile correctness", profile_correctness),
        ("end-to-end determinism", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name}: {detail} ({})", i + 1, secs(elapsed));
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn speedup_table() -> Check {
    let rows: [(&str, [f64; 5], [f64; 4]); 2] = [
        ("ALPS", [132.835, 75.133, 43.736, 22.212, 13.339], [1.768, 3.037, 5.98, 9.958]),
        ("commercial", [0.01, 0.01, 0.02, 0.03, 0.22], [1.0, 0.5, 0.333, 0.045]),
    ];
    let mut shown = Vec::new();
    for (name, times, expected) in rows {
        let got: Vec<f64> = times[1..]
            .iter()
            .map(|&t| speedup(times[0], t).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        for (g, e) in got.iter().zip(expected) {
            ensure!(close(*g, e, 1e-3), "{name}: speed-up {g:.4}, expected {e}");
        }
        let fmt: Vec<String> = got.iter().map(|s| format!("{s:.3}")).collect();
        shown.push(format!("{name} {}", fmt.join("/")));
    }
    Ok(shown.join("; "))
}

/// Independent statement of the gap definition.
fn gap_oracle(p: f64, d: f64) -> f64 {
    if p == 0.0 && d == 0.0 {
        0.0
    } else if p.is_infinite() || d.is_infinite() || p * d < 0.0 {
        1.0
    } else {
        (p - d).abs() / p.abs().max(d.abs())
    }
}

fn ext_real(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..20) {
        0 => 0.0,
        1 => f64::INFINITY,
        2 => f64::NEG_INFINITY,
        3 => rng.gen_range(-10..=10) as f64,
        _ => {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * 10f64.powf(rng.gen_range(-6.0..6.0))
        }
    }
}

fn gap_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = [0usize; 3];
    for _ in 0..10_000 {
        let (p, d) = (ext_real(&mut rng), ext_real(&mut rng));
        let g = relative_gap(p, d);
        ensure!((0.0..=1.0).contains(&g), "gap({p}, {d}) = {g} outside [0, 1]");
        ensure!(g == relative_gap(d, p), "gap not symmetric at ({p}, {d})");
        let c = 10f64.powf(rng.gen_range(-3.0..3.0));
        let gc = relative_gap(c * p, c * d);
        ensure!(close(g, gc, 1e-12), "gap({p}, {d}) = {g} but scaled by {c} gives {gc}");
        ensure!(close(g, gap_oracle(p, d), 1e-12), "gap({p}, {d}) = {g}, expected {}", gap_oracle(p, d));
        if p == 0.0 && d == 0.0 {
            cases[0] += 1;
        } else if p * d < 0.0 {
            cases[2] += 1;
        } else if p.is_finite() && d.is_finite() {
            cases[1] += 1;
        }
    }
    ensure!(relative_gap(0.0, 0.0) == 0.0, "both-zero case");
    ensure!(close(relative_gap(90.0, 100.0), 0.1, 1e-15), "same-sign case");
    ensure!(relative_gap(-1.0, 2.0) == 1.0, "opposite-sign case");
    ensure!(cases.iter().all(|&c| c > 0), "case coverage {cases:?}");
    Ok(format!(
        "10000 pairs; both-zero {}, same-sign {}, opposite-sign {}",
        cases[0], cases[1], cases[2]
    ))
}

fn min_trace(wall: f64, bounds: Vec<BoundEvent>) -> Trace {
    let mut t = Trace::new(RunRecord {
        instance_id: "acc".into(),
        solver_id: "acc".into(),
        cores: 1,
        seed: 0,
        time_limit: wall,
        status: Status::Aborted,
        wall_time: wall,
        sense: Sense::Min,
    });
    t.bounds = bounds;
    t
}

/// Random minimization trace with monotonically converging bounds.
fn random_trace(rng: &mut ChaCha8Rng) -> Trace {
    let opt = rng.gen_range(-100.0..100.0);
    let (mut up, mut down) = (rng.gen_range(1.0..100.0), rng.gen_range(1.0..100.0));
    let mut t = 0.0;
    let mut bounds = Vec::new();
    for i in 0..rng.gen_range(1..15) {
        t += f64::from(rng.gen_range(1u32..500)) / 100.0;
        up *= rng.gen_range(0.0..1.0);
        down *= rng.gen_range(0.0..1.0);
        let primal = if i == 0 && rng.gen_bool(0.3) { f64::INFINITY } else { opt + up };
        bounds.push(BoundEvent::new(t, primal, opt - down));
    }
    min_trace(t + rng.gen_range(0.0..5.0), bounds)
}

/// Left-endpoint sum of the gap over the event partition of `[0, h]`.
fn pdi_oracle(tr: &Trace, h: f64) -> f64 {
    let mut cuts: Vec<f64> = tr.bounds.iter().map(|e| e.t).filter(|&t| t < h).collect();
    cuts.insert(0, 0.0);
    cuts.push(h);
    cuts.windows(2)
        .map(|w| {
            let (p, d) = tr.bounds_at(w[0]).unwrap();
            relative_gap(p, d) * (w[1] - w[0])
        })
        .sum()
}

fn pdi_suite() -> Check {
    let hand = min_trace(
        6.0,
        vec![BoundEvent::new(2.0, 2.0, 1.0), BoundEvent::new(6.0, 1.0, 1.0)],
    );
    let v = primal_dual_integral(&hand, 6.0);
    ensure!(v == 4.0, "hand example gives {v}, expected 4.0");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let tr = random_trace(&mut rng);
        let wall = tr.run.wall_time;
        let h1 = rng.gen_range(0.0..wall * 1.2);
        let h2 = h1 + rng.gen_range(0.0..wall);
        let (a, b) = (primal_dual_integral(&tr, h1), primal_dual_integral(&tr, h2));
        ensure!(a <= h1 + 1e-12, "PDI {a} exceeds horizon {h1}");
        ensure!(a <= b + 1e-12, "PDI decreased from {a} to {b} as horizon grew");
        let oracle = pdi_oracle(&tr, wall);
        let full = primal_dual_integral(&tr, wall);
        ensure!(close(full, oracle, 1e-9), "PDI {full} vs left-endpoint sum {oracle}");

        let t = rng.gen_range(0.0..wall);
        let (p, d) = tr.bounds_at(t).unwrap();
        let mut refined = tr.clone();
        if !refined.bounds.iter().any(|e| e.t == t) {
            let pos = refined.bounds.partition_point(|e| e.t < t);
            refined.bounds.insert(pos, BoundEvent::new(t, p, d));
        }
        let r = primal_dual_integral(&refined, wall);
        ensure!(close(full, r, 1e-9), "refinement at {t} changed PDI {full} to {r}");
    }
    Ok("hand example 4.0 exact; 2000 random traces bounded, monotone, refinement-invariant".into())
}

fn sgm_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sg = |x: &[f64], s: f64| shifted_geometric_mean(x, s).map_err(|e| e.to_string());
    for _ in 0..10_000 {
        let n = rng.gen_range(1..50);
        let xs: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-3.0..4.0))).collect();
        let gm = (xs.iter().map(|x| x.ln()).sum::<f64>() / n as f64).exp();
        let g0 = sg(&xs, 0.0)?;
        ensure!(close(g0, gm, 1e-12 * gm), "s = 0 gives {g0}, geometric mean {gm}");
        let s = rng.gen_range(0.0..100.0);
        let am = xs.iter().sum::<f64>() / n as f64;
        let v = sg(&xs, s)?;
        ensure!(v <= am * (1.0 + 1e-12), "SG {v} above arithmetic mean {am}");
        let s = rng.gen_range(1.0..100.0);
        let c = rng.gen_range(0.0..s);
        let moved: Vec<f64> = xs.iter().map(|x| x + c).collect();
        let lhs = sg(&moved, s - c)?;
        let rhs = sg(&xs, s)? + c;
        ensure!(close(lhs, rhs, 1e-9 * rhs.abs().max(1.0)), "translation: {lhs} vs {rhs}");
    }
    Ok("10000 random lists".into())
}

struct OracleRuns {
    instances: usize,
    runs: usize,
    mismatches: Vec<String>,
    conservation_failures: Vec<String>,
    elapsed: Duration,
}

fn oracle_instances() -> Vec<KnapsackInstance> {
    let mut out = Vec::new();
    for k in 0..100u64 {
        let n = 5 + (k as usize % 16);
        out.push(generate_instance(InstanceFamily::Uncorrelated, n, k).unwrap());
        out.push(generate_instance(InstanceFamily::StronglyCorrelated, n, 1000 + k).unwrap());
    }
    out
}

fn conserved(r: &bnb_assess::sim::SimResult) -> Option<String> {
    let tr = &r.trace;
    let violations = validate_trace(tr);
    if let Some(v) = violations.first() {
        return Some(format!("{}: {}", tr.run.instance_id, v.message));
    }
    let b = match overhead_breakdown(tr) {
        Ok(b) => b,
        Err(e) => return Some(format!("{}: {e}", tr.run.instance_id)),
    };
    let expect = i64::from(tr.run.cores) * to_micros(tr.run.wall_time);
    (b.total_us() != expect).then(|| {
        format!(
            "{} at {} cores: busy+idle+comm = {} us, N*T = {expect} us",
            tr.run.instance_id,
            tr.run.cores,
            b.total_us()
        )
    })
}

fn oracle_runs() -> &'static OracleRuns {
    static RUNS: OnceLock<OracleRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let instances = oracle_instances();
        let mut out = OracleRuns {
            instances: instances.len(),
            runs: 0,
            mismatches: Vec::new(),
            conservation_failures: Vec::new(),
            elapsed: Duration::ZERO,
        };
        for (i, inst) in instances.iter().enumerate() {
            let best = brute_force_knapsack(inst).unwrap().0;
            let order = if i % 2 == 0 { SearchOrder::BestFirst } else { SearchOrder::DepthFirst };
            let seq = solve_sequential(inst, &SimConfig { search_order: order, ..Default::default() }).unwrap();
            let mut results = vec![seq];
            for cores in [1, 2, 4, 8] {
                for seed in 0..3u64 {
                    let cfg = SimConfig {
                        cores,
                        seed,
                        node_cost_jitter: 0.3,
                        comm_latency: if cores == 1 { 0.0 } else { 1e-4 },
                        bound_broadcast_period: [0.0, 1e-3, 5e-3][seed as usize],
                        search_order: order,
                        tie_break_seed: i as u64,
                        ..Default::default()
                    };
                    results.push(simulate_parallel(inst, &cfg).unwrap());
                }
            }
            for r in &results {
                out.runs += 1;
                if r.optimal_value != best || inst.value_of(&r.solution) != best {
                    out.mismatches.push(format!(
                        "{} at {} cores: {} vs oracle {best}",
                        inst.id, r.trace.run.cores, r.optimal_value
                    ));
                }
                if let Some(f) = conserved(r) {
                    out.conservation_failures.push(f);
                }
            }
        }
        out.elapsed = start.elapsed();
        out
    })
}

fn oracle_equivalence() -> Check {
    let o = oracle_runs();
    ensure!(o.mismatches.is_empty(), "{} mismatches, first: {}", o.mismatches.len(), o.mismatches[0]);
    ensure!(o.elapsed < Duration::from_secs(60), "took {}", secs(o.elapsed));
    Ok(format!(
        "{} instances, {} runs match the brute-force optimum in {}",
        o.instances,
        o.runs,
        secs(o.elapsed)
    ))
}

fn conservation() -> Check {
    let o = oracle_runs();
    ensure!(
        o.conservation_failures.is_empty(),
        "{} traces fail, first: {}",
        o.conservation_failures.len(),
        o.conservation_failures[0]
    );
    Ok(format!("{} traces valid with busy+idle+comm = N*T exactly", o.runs))
}

fn scalability() -> Check {
    let inst = generate_instance(InstanceFamily::Uncorrelated, 20, 0).map_err(|e| e.to_string())?;
    let tasks = |cores| {
        let cfg = SimConfig {
            cores,
            workload_mode: WorkloadMode::IndependentTasks { tasks: 1000 },
            ..Default::default()
        };
        simulate_parallel(&inst, &cfg).map(|r| r.trace.run.wall_time).map_err(|e| e.to_string())
    };
    let t1 = tasks(1)?;
    let mut task_eff = Vec::new();
    for n in [2, 4, 8] {
        let e = parallel_efficiency(speedup(t1, tasks(n)?).map_err(|e| e.to_string())?, n);
        ensure!(e >= 0.99, "independent tasks: E_{n} = {e}");
        task_eff.push(format!("E_{n}={e:.3}"));
    }

    // Large trees, searched best-first with a fetch latency.
    let tree = |inst: &KnapsackInstance, cores| {
        let cfg = SimConfig {
            cores,
            comm_latency: 1e-4,
            ..Default::default()
        };
        simulate_parallel(inst, &cfg).map_err(|e| e.to_string())
    };
    let mut chosen = Vec::new();
    for seed in 0..200u64 {
        let inst = generate_instance(InstanceFamily::StronglyCorrelated, 20, seed).map_err(|e| e.to_string())?;
        let one = tree(&inst, 1)?;
        if one.trace.work.is_some_and(|w| w.nodes_processed >= 1000) {
            chosen.push((inst, one));
        }
        if chosen.len() == 3 {
            break;
        }
    }
    ensure!(chosen.len() == 3, "found only {} instances with >= 1000 nodes", chosen.len());
    let mut worst: f64 = 0.0;
    for (inst, one) in &chosen {
        for n in [2, 4, 8] {
            let r = tree(inst, n)?;
            let e = parallel_efficiency(
                speedup(one.trace.run.wall_time, r.trace.run.wall_time).map_err(|e| e.to_string())?,
                n,
            );
            ensure!(e < 1.0, "{} tree search: E_{n} = {e}", inst.id);
            worst = worst.max(e);
        }
    }
    let ids: Vec<&str> = chosen.iter().map(|(i, _)| i.id.as_str()).collect();
    Ok(format!(
        "tasks {}; tree search on {} has max E_N = {worst:.4} < 1",
        task_eff.join(" "),
        ids.join(", ")
    ))
}

fn variability() -> Check {
    let inst = generate_instance(InstanceFamily::StronglyCorrelated, 40, 0).map_err(|e| e.to_string())?;
    let cfg = SimConfig {
        cores: 4,
        node_cost_jitter: 0.5,
        comm_latency: 1e-4,
        search_order: SearchOrder::DepthFirst,
        ..Default::default()
    };
    let runs = seed_sweep(&inst, &cfg, &[1, 2, 3, 4, 5]).map_err(|e| e.to_string())?;
    let counts: Vec<u64> = runs
        .iter()
        .map(|r| r.trace.work.map_or(0, |w| w.nodes_processed))
        .collect();
    let mut distinct = counts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    ensure!(distinct.len() >= 2, "node counts {counts:?} do not vary");
    let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
    let spread = (distinct[distinct.len() - 1] - distinct[0]) as f64 / mean;
    Ok(format!(
        "{} at N=4, seeds 1-5: nodes {counts:?}, {} distinct, relative spread (max-min)/mean = {spread:.3}",
        inst.id,
        distinct.len()
    ))
}

fn fixture(a4_censored: bool) -> MeasureTable {
    let mut t = MeasureTable::new();
    let cells = [("p1", 10.0, 20.0), ("p2", 30.0, 15.0), ("p3", 5.0, 20.0), ("p4", 100.0, 50.0)];
    for (p, a, b) in cells {
        let a_obs = if p == "p4" && a4_censored { Observation::censored(a) } else { Observation::solved(a) };
        t.insert(p, "A", a_obs);
        t.insert(p, "B", Observation::solved(b));
    }
    t
}

fn curves(table: &MeasureTable, include_timeouts: bool) -> Result<Vec<ProfileCurve>, String> {
    let opts = RatioOptions {
        include_timeouts,
        ratio_shift: 0.0,
    };
    let m = performance_ratios(table, &opts).map_err(|e| e.to_string())?;
    m.solvers
        .iter()
        .map(|s| performance_profile(&m, s).map_err(|e| e.to_string()))
        .collect()
}

fn profile_correctness() -> Check {
    let table = fixture(true);
    // Hand ratios, p4 dropped (A timed out): A = 1, 2, 1; B = 2, 1, 4.
    let excl = curves(&table, false)?;
    let hand_a = vec![(1.0, 2.0 / 3.0), (2.0, 1.0)];
    let hand_b = vec![(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0), (4.0, 1.0)];
    ensure!(excl[0].points == hand_a, "A: {:?}, expected {hand_a:?}", excl[0].points);
    ensure!(excl[1].points == hand_b, "B: {:?}, expected {hand_b:?}", excl[1].points);

    // With timeouts kept, A's ratio on p4 is infinite: A = 1, 2, 1, inf; B = 2, 1, 4, 1.
    let incl = curves(&table, true)?;
    let hand_a = vec![(1.0, 2.0 / 4.0), (2.0, 3.0 / 4.0)];
    let hand_b = vec![(1.0, 2.0 / 4.0), (2.0, 3.0 / 4.0), (4.0, 1.0)];
    ensure!(incl[0].points == hand_a, "A with timeouts: {:?}", incl[0].points);
    ensure!(incl[1].points == hand_b, "B with timeouts: {:?}", incl[1].points);
    let solve_rate_a = 3.0 / 4.0;
    ensure!(
        incl[0].max_fraction() == solve_rate_a && solve_rate_a < excl[0].max_fraction(),
        "A plateau {} should equal solve rate {solve_rate_a}",
        incl[0].max_fraction()
    );

    let opts = SvgOptions {
        title: "performance profile".into(),
        x_label: "ratio to best".into(),
        log_x: true,
        ..Default::default()
    };
    let render = || render_svg(&Plot::Profiles(&incl), &opts).map_err(|e| e.to_string());
    let (first, second) = (render()?, render()?);
    ensure!(first == second, "two renders differ");
    if std::env::var_os("BNB_ASSESS_BLESS").is_some() {
        std::fs::write(GOLDEN_SVG, &first).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read_to_string(GOLDEN_SVG).map_err(|e| format!("{GOLDEN_SVG}: {e}"))?;
    ensure!(first == golden, "SVG differs from the golden file");
    Ok(format!(
        "hand CDFs match; plateau with timeouts {solve_rate_a} = solve rate; SVG byte-identical ({} bytes)",
        first.len()
    ))
}

const E2E_MANIFEST: &str = r#"{
  "instances": [
    {"generate": {"family": "strongly_correlated", "n_items": 18, "seed": 0}},
    {"generate": {"family": "strongly_correlated", "n_items": 20, "seed": 2}},
    {"generate": {"family": "uncorrelated", "n_items": 20, "seed": 7}}
  ],
  "solver_configs": [
    {"config": {"label": "best-first", "comm_latency": 0.0001, "node_cost_jitter": 0.3}},
    {"config": {"label": "depth-first", "search_order": "depth_first", "comm_latency": 0.0001,
                "node_cost_jitter": 0.3, "bound_broadcast_period": 0.002}}
  ],
  "core_counts": [1, 2, 4, 8],
  "seeds": [0, 1],
  "time_limit": 3.0,
  "output_dir": "out"
}"#;

fn files_under(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn pipeline(dir: &Path, out: &str) -> Result<BTreeMap<PathBuf, Vec<u8>>, String> {
    let steps: [&[&str]; 6] = [
        &["simulate"],
        &["analyze"],
        &["profile", "performance", "--cores", "8", "--include-timeouts", "--log-x"],
        &["profile", "speedup", "--basis", "wall"],
        &["profile", "speedup", "--basis", "pdi"],
        &["report"],
    ];
    for step in steps {
        let o = Command::new(BIN)
            .current_dir(dir)
            .env("BNB_ASSESS_NO_COLOR", "1")
            .args(["--manifest", "manifest.json", "--out", out])
            .args(step)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            o.status.success(),
            "`{}` failed: {}",
            step.join(" "),
            String::from_utf8_lossy(&o.stderr)
        );
    }
    Ok(files_under(&dir.join(out)))
}

fn end_to_end() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    std::fs::write(dir.join("manifest.json"), E2E_MANIFEST).map_err(|e| e.to_string())?;
    let a = pipeline(dir, "run-a")?;
    let b = pipeline(dir, "run-b")?;
    let expected = [
        "measures.csv",
        "report.txt",
        "summary.csv",
        "profiles/performance_time_to_optimality.svg",
        "profiles/speedup_wall.svg",
        "profiles/speedup_pdi.svg",
    ];
    for name in expected {
        ensure!(a.contains_key(Path::new(name)), "missing output {name}");
    }
    let report = String::from_utf8_lossy(&a[Path::new("report.txt")]).into_owned();
    ensure!(report.contains("Shifted geometric means"), "report lacks the SG table");
    ensure!(a.keys().eq(b.keys()), "runs produced different file sets");
    for (path, bytes) in &a {
        ensure!(bytes == &b[path], "{} differs between runs", path.display());
    }
    let traces = a.keys().filter(|p| p.starts_with("traces")).count();
    Ok(format!("{} files ({traces} traces) byte-identical across two runs", a.len()))
}
