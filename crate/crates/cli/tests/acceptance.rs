//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};

use secpolar::channels::{key_rate_condition, ChannelMetrics, WiretapFamily};
use secpolar::extremal::{
    doubly_good_fraction, evolve, extremal_step, final_value_stats, threshold_search, trial_bits,
};
use secpolar::polar::{bec_synth_exact, construct, polar_threshold, rates};
use secpolar::simulate::{run, BoxplusRule, TrialConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn open_grid(k: usize, hi: f64) -> Vec<f64> {
    (1..=k).map(|i| hi * i as f64 / (k + 1) as f64).collect()
}

fn closed_grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
}

fn metrics(f: WiretapFamily) -> ChannelMetrics {
    f.metrics().expect("valid parameters")
}

fn max_dev(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

fn family_grids() -> Vec<(&'static str, Vec<WiretapFamily>)> {
    let bsc = open_grid(20, 0.5)
        .into_iter()
        .flat_map(|p_b| {
            open_grid(20, 0.5)
                .into_iter()
                .map(move |p_e| WiretapFamily::Bsc { p_b, p_e })
        })
        .collect();
    let erasure = closed_grid(50)
        .into_iter()
        .map(|eps| WiretapFamily::Erasure { eps })
        .collect();
    let ad = closed_grid(50)
        .into_iter()
        .map(|eta| WiretapFamily::AmplitudeDamping { eta })
        .collect();
    vec![("bsc", bsc), ("erasure", erasure), ("ad", ad)]
}

fn closed_forms() -> Outcome {
    let grid = open_grid(50, 0.5);
    let (mut dev_ab, mut dev_pb_half, mut dev_pb_exact) = (0.0f64, 0.0f64, 0.0f64);
    for &pb in &grid {
        for &pe in &grid {
            let m = metrics(WiretapFamily::Bsc { p_b: pb, p_e: pe });
            dev_ab = dev_ab.max((m.root_f_ab - 2.0 * (pb * (1.0 - pb)).sqrt()).abs());
            dev_pb_half = dev_pb_half.max((m.root_f_pb - (pe - 0.5).abs()).abs());
            dev_pb_exact = dev_pb_exact.max((m.root_f_pb - (1.0 - 2.0 * pe).abs()).abs());
        }
    }
    let eps_dev = max_dev(closed_grid(50).into_iter().map(|eps| {
        let m = metrics(WiretapFamily::Erasure { eps });
        (m.root_f_ab - eps).abs().max((m.root_f_pb - eps).abs())
    }));
    let ad_dev = max_dev(closed_grid(50).into_iter().map(|eta| {
        let m = metrics(WiretapFamily::AmplitudeDamping { eta });
        (m.root_f_ab - (1.0 - eta).sqrt()).abs()
    }));
    let pass = dev_ab <= 1e-9 && dev_pb_half <= 1e-9 && eps_dev <= 1e-9 && ad_dev <= 1e-9;
    outcome(
        pass,
        format!(
            "bsc rootF_ab dev {dev_ab:.2e}; bsc rootF_pb vs |p_E-1/2| dev {dev_pb_half:.2e} \
             (vs |1-2p_E| dev {dev_pb_exact:.2e}); erasure dev {eps_dev:.2e}; ad rootF_ab dev {ad_dev:.2e}"
        ),
    )
}

fn uncertainty_relation() -> Outcome {
    let mut worst = Vec::new();
    for (name, grid) in family_grids() {
        worst.push((
            name,
            max_dev(grid.into_iter().map(|f| metrics(f).uncertainty_residual().abs())),
        ));
    }
    let pass = worst.iter().all(|(_, d)| *d <= 1e-8);
    let detail = worst
        .iter()
        .map(|(n, d)| format!("{n} max|residual| {d:.2e}"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn fidelity_uncertainty() -> Outcome {
    let mut worst = Vec::new();
    for (name, grid) in family_grids() {
        let min = grid
            .into_iter()
            .map(|f| metrics(f).fidelity_uncertainty_slack())
            .fold(f64::INFINITY, f64::min);
        worst.push((name, min));
    }
    let reduction = open_grid(999, 1.0)
        .into_iter()
        .map(|p| 2.0 * (p * (1.0 - p)).sqrt() + (1.0 - 2.0 * p).abs() - 1.0)
        .fold(f64::INFINITY, f64::min);
    let pass = worst.iter().all(|(_, s)| *s >= -1e-10) && reduction >= 0.0;
    let mut detail = worst
        .iter()
        .map(|(n, s)| format!("{n} min slack {s:.3e}"))
        .collect::<Vec<_>>()
        .join("; ");
    detail.push_str(&format!("; bsc reduction min {reduction:.3e}"));
    outcome(pass, detail)
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_secpolar"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "secpolar {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn key_conditions() -> Outcome {
    // BSC region data from the CLI
    let csv = String::from_utf8(cli(&["sweep-bsc"])).unwrap();
    let mut rows = 0;
    let mut bsc_mismatch = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (pb, pe): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let key = 2.0 * (pb * (1.0 - pb)).sqrt() < 0.5 + pe;
        bsc_mismatch += usize::from((f[3] == "1") != key);
        bsc_mismatch += usize::from((f[2] == "1") != (pe > pb));
        rows += 1;
    }

    let erasure_ok = closed_grid(101)
        .into_iter()
        .chain([0.4999, 0.5001])
        .all(|eps| key_rate_condition(&metrics(WiretapFamily::Erasure { eps })) == (2.0 * eps < 1.0));

    let phase_dev = max_dev(closed_grid(1000).into_iter().map(|eta| {
        let m = metrics(WiretapFamily::AmplitudeDamping { eta });
        (m.root_f_pb - (1.0 - eta)).abs()
    }));
    let excess = |eta: f64| {
        let m = metrics(WiretapFamily::AmplitudeDamping { eta });
        m.root_f_ab + m.root_f_pb - 1.0
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crossing = 0.5 * (lo + hi);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let ad_csv_rows = String::from_utf8(cli(&["sweep-ad"])).unwrap().lines().count() - 1;

    let pass = bsc_mismatch == 0
        && rows == 199 * 99
        && erasure_ok
        && phase_dev <= 1e-9
        && (crossing - golden).abs() <= 1e-4
        && ad_csv_rows == 1000;
    outcome(
        pass,
        format!(
            "bsc csv rows {rows}, flag mismatches {bsc_mismatch}; erasure 2eps<1 {erasure_ok}; \
             ad rootF_pb vs 1-eta dev {phase_dev:.2e}; crossing {crossing:.6} vs {golden:.6}"
        ),
    )
}

fn good_fraction(eps: f64, n: u32, beta: f64) -> f64 {
    let t = bec_synth_exact(eps, n, false);
    let th = polar_threshold(n, beta);
    t.hi.iter().filter(|&&v| v < th).count() as f64 / t.len() as f64
}

fn bec_polarization() -> Outcome {
    let fractions: Vec<f64> = (8..=20).map(|n| good_fraction(0.25, n, 0.25)).collect();
    let drops: Vec<u32> = fractions
        .windows(2)
        .zip(9..)
        .filter(|(w, _)| w[1] < w[0])
        .map(|(_, n)| n)
        .collect();
    let last = *fractions.last().unwrap();
    let pass = drops.is_empty() && (last - 0.75).abs() <= 0.05;
    outcome(
        pass,
        format!(
            "fractions n=8..20 {}; decreases at n={drops:?}; n=20 fraction {last:.4}",
            fractions
                .iter()
                .map(|f| format!("{f:.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    )
}

fn degradable_key_rate() -> Outcome {
    let kr: Vec<f64> = (10..=18)
        .map(|n| rates(&construct(&WiretapFamily::Erasure { eps: 0.25 }, n, 0.2).unwrap().spec).key_rate)
        .collect();
    let monotone = kr.windows(2).all(|w| w[1] <= w[0]);
    let last = *kr.last().unwrap();
    outcome(monotone && last <= 0.05, format!("|B|/N n=10..18 {kr:?}"))
}

fn net_rate() -> Outcome {
    let r = rates(&construct(&WiretapFamily::Erasure { eps: 0.25 }, 18, 0.2).unwrap().spec);
    outcome(
        (r.net_private - 0.5).abs() <= 0.1,
        format!("net rate at n=18 {:.4}", r.net_private),
    )
}

const RELIABILITY_BETA: f64 = 0.4;

fn reliability() -> Outcome {
    let ch = WiretapFamily::Erasure { eps: 0.25 };
    let spec = construct(&ch, 10, RELIABILITY_BETA).unwrap().spec;
    let trials = 10_000;
    let r = run(&TrialConfig {
        channel: ch,
        spec,
        trials,
        seed: 2024,
        rule: BoxplusRule::Exact,
    })
    .unwrap();
    let ub = r.fer_bound_union;
    let sigma = (ub.max(1.0 / trials as f64) * (1.0 - ub) / trials as f64).sqrt();
    let pass = ub <= 1e-3 && r.fer <= 1e-2 && r.fer <= ub + 3.0 * sigma;
    outcome(pass, format!("union sum {ub:.3e}; fer {} over {trials} trials", r.fer))
}

fn leakage() -> Outcome {
    let ch = WiretapFamily::Erasure { eps: 0.25 };
    let mut exact_ok = true;
    let (mut per_bit_exact, mut per_bit_bound) = (Vec::new(), Vec::new());
    for n in 8..=14u32 {
        let spec = construct(&ch, n, RELIABILITY_BETA).unwrap().spec;
        let r = run(&TrialConfig {
            channel: ch,
            spec,
            trials: 1,
            seed: 0,
            rule: BoxplusRule::Exact,
        })
        .unwrap();
        let exact = r.leakage_exact_bec.unwrap();
        exact_ok &= exact <= r.leakage_bound;
        let big_n = (1u64 << n) as f64;
        per_bit_exact.push(exact / big_n);
        per_bit_bound.push(r.leakage_bound / big_n);
    }
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let pass = exact_ok && decreasing(&per_bit_exact) && decreasing(&per_bit_bound);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    outcome(
        pass,
        format!(
            "exact <= bound {exact_ok}; per-bit exact n=8..14 {}; per-bit bound {}",
            fmt(&per_bit_exact),
            fmt(&per_bit_bound)
        ),
    )
}

fn extremal() -> Outcome {
    let fraction = doubly_good_fraction(0.6, 0.3, 100_000, 40, 1);
    let (mean, se) = final_value_stats(0.4, 100_000, 40, 2);
    let martingale = (mean - 0.4).abs() <= 3.0 * se;

    let mut monotone = true;
    for t in 0..100 {
        let bits = trial_bits(3, t, 60);
        let Ok(th) = threshold_search(&bits, 1e-9) else {
            monotone = false;
            continue;
        };
        let starts = closed_grid(101);
        let finals: Vec<f64> = starts.iter().map(|&f| evolve(f, &bits)).collect();
        monotone &= finals.windows(2).all(|w| w[0] <= w[1]);
        monotone &= starts.iter().zip(&finals).all(|(&f, &v)| {
            if f < th - 0.01 {
                v < 1e-6
            } else if f > th + 0.01 {
                v > 1.0 - 1e-6
            } else {
                true
            }
        });
    }

    let mut sum_dev = 0.0f64;
    for t in 0..1000 {
        let bits = trial_bits(4, t, 40);
        let mut a = (t as f64 + 0.5) / 1000.0;
        let mut p = 1.0 - a;
        for &b in &bits {
            a = extremal_step(a, b);
            p = extremal_step(p, 1 - b);
            sum_dev = sum_dev.max((a + p - 1.0).abs());
        }
    }
    let pass = fraction == 0.0 && martingale && monotone && sum_dev <= 1e-12;
    outcome(
        pass,
        format!(
            "fraction(0.6,0.3) {fraction}; mean {mean:.5} +- {se:.5} (f0 0.4); threshold monotone {monotone}; \
             sum dev {sum_dev:.2e}"
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("secpolar-acceptance-{}", std::process::id()));
    let tables = dir.join("tables");
    let commands: Vec<Vec<&str>> = vec![
        vec!["analyze", "--bsc", "0.1", "0.25"],
        vec!["analyze", "--erasure", "0.25"],
        vec!["analyze", "--ad", "0.5"],
        vec!["construct", "--erasure", "0.25", "--n", "12", "--beta", "0.2"],
        vec!["construct", "--bsc", "0.05", "0.3", "--n", "10"],
        vec![
            "simulate",
            "--erasure",
            "0.25",
            "--n",
            "10",
            "--beta",
            "0.2",
            "--trials",
            "10000",
            "--seed",
            "7",
        ],
        vec![
            "simulate", "--bsc", "0.05", "0.3", "--n", "8", "--beta", "0.3", "--trials", "2000", "--seed", "7",
        ],
        vec!["sweep-bsc"],
        vec!["sweep-bsc", "--exact"],
        vec!["sweep-ad"],
        vec![
            "extremal", "--fa", "0.6", "--fp", "0.3", "--trials", "100000", "--depth", "40", "--seed", "1",
        ],
        vec![
            "extremal", "--fa", "0.8", "--fp", "0.7", "--trials", "20000", "--depth", "30", "--seed", "9",
        ],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        if cli(args) != cli(args) {
            differing.push(args.join(" "));
        }
    }
    let tables_arg = tables.to_str().unwrap().to_owned();
    let dump = dir.join("traj.csv");
    let dump_arg = dump.to_str().unwrap().to_owned();
    std::fs::create_dir_all(&dir).unwrap();
    let snapshot = |args: &[&str], path: &std::path::Path| {
        cli(args);
        std::fs::read(path).unwrap()
    };
    let construct_args = ["construct", "--erasure", "0.3", "--n", "8", "--tables", &tables_arg];
    let extremal_args = [
        "extremal", "--fa", "0.5", "--fp", "0.5", "--trials", "50", "--depth", "20", "--dump", &dump_arg,
    ];
    let table_file = tables.join("phase-bob.csv");
    let files_same = snapshot(&construct_args, &table_file) == snapshot(&construct_args, &table_file)
        && snapshot(&extremal_args, &dump) == snapshot(&extremal_args, &dump);
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        differing.is_empty() && files_same,
        format!(
            "{} stdout commands, differing {differing:?}; file outputs identical {files_same}",
            commands.len()
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "closed-form fidelities", closed_forms),
        (2, "information uncertainty relation", uncertainty_relation),
        (3, "fidelity uncertainty relation", fidelity_uncertainty),
        (4, "key-rate conditions", key_conditions),
        (5, "erasure polarization", bec_polarization),
        (6, "degradable key rate", degradable_key_rate),
        (7, "net private rate", net_rate),
        (8, "end-to-end reliability", reliability),
        (9, "leakage", leakage),
        (10, "extremal processes", extremal),
        (11, "cli determinism", determinism),
    ];
    let mut failures = 0;
    for (id, name, check) in criteria {
        let o = check();
        failures += usize::from(!o.pass);
        println!(
            "criterion {id:>2} {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
