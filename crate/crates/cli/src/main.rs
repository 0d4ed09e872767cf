use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use secpolar::channels::{key_rate_condition, symmetric_private_info, ChannelMetrics, WiretapFamily};
use secpolar::extremal::{doubly_good_fraction_at, write_trajectories_csv, DEFAULT_GOOD_LEVEL};
use secpolar::format::sig9;
use secpolar::polar::{construct, DEFAULT_BETA};
use secpolar::quantum::binary_entropy;
use secpolar::simulate::{run, BoxplusRule, TrialConfig};

/// Secret-key-assisted private polar codes: channel analysis, code
/// construction, simulation and figure data.
#[derive(Parser)]
#[command(name = "secpolar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelities, Holevo informations and the key-rate condition of a channel (JSON).
    Analyze {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify synthesized channels into A/X/Z/B and report rates and bounds (JSON).
    Construct {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        code: CodeArgs,
        /// Also write amplitude, phase and Eve tables as CSV into this directory.
        #[arg(long)]
        tables: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo frame error rate of the constructed code (JSON).
    Simulate {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Min-sum check nodes instead of exact boxplus (BSC only).
        #[arg(long)]
        min_sum: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// BSC wiretap region flags over a (p_b, p_e) grid (CSV).
    SweepBsc {
        #[arg(long, default_value_t = 199)]
        pb_points: usize,
        #[arg(long, default_value_t = 99)]
        pe_points: usize,
        /// Key flag from the exact phase fidelity |1 - 2 p_e| instead of 1/2 + p_e.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Amplitude-damping root fidelities over a transmissivity grid (CSV).
    SweepAd {
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fraction of coupled extremal trajectories converging to one on both processes (JSON).
    Extremal {
        #[arg(long)]
        fa: f64,
        #[arg(long)]
        fp: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GOOD_LEVEL)]
        level: f64,
        /// Write per-step trajectories of the first --dump-trials trials as CSV.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        dump_trials: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ChannelArgs {
    /// Independent BSCs to Bob and Eve.
    #[arg(long, num_args = 2, value_names = ["P_B", "P_E"])]
    bsc: Option<Vec<f64>>,
    /// Erasure channel; Eve receives what Bob loses.
    #[arg(long, value_name = "EPS")]
    erasure: Option<f64>,
    /// Amplitude damping with transmissivity ETA.
    #[arg(long, value_name = "ETA")]
    ad: Option<f64>,
}

impl ChannelArgs {
    fn family(&self) -> WiretapFamily {
        match (&self.bsc, self.erasure, self.ad) {
            (Some(p), _, _) => WiretapFamily::Bsc { p_b: p[0], p_e: p[1] },
            (_, Some(eps), _) => WiretapFamily::Erasure { eps },
            (_, _, Some(eta)) => WiretapFamily::AmplitudeDamping { eta },
            _ => unreachable!("clap requires one channel"),
        }
    }
}

#[derive(Args)]
struct CodeArgs {
    /// Blocklength exponent, N = 2^n.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=24))]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
}

#[derive(Args)]
struct OutArgs {
    /// Write to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl OutArgs {
    fn emit(&self, text: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    channel: WiretapFamily,
    metrics: ChannelMetrics,
    uncertainty_residual: f64,
    fidelity_uncertainty_slack: f64,
    key_rate_condition: bool,
    symmetric_private_info: f64,
}

#[derive(Serialize)]
struct ExtremalReport {
    f0_a: f64,
    f0_p: f64,
    trials: u64,
    depth: usize,
    seed: u64,
    level: f64,
    fraction: f64,
}

type Failure = Box<dyn std::error::Error>;

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// `k` interior points of `(0, 1/2)`.
fn open_half_grid(k: usize) -> Vec<f64> {
    (1..=k).map(|i| 0.5 * i as f64 / (k + 1) as f64).collect()
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

fn sweep_bsc(pb_points: usize, pe_points: usize, exact: bool) -> String {
    let pe_grid = open_half_grid(pe_points);
    let rows: Vec<String> = open_half_grid(pb_points)
        .par_iter()
        .flat_map_iter(|&pb| {
            let root_ab = 2.0 * (pb * (1.0 - pb)).sqrt();
            pe_grid.iter().map(move |&pe| {
                let positive = binary_entropy(pe) > binary_entropy(pb);
                let key = if exact {
                    root_ab + (1.0 - 2.0 * pe).abs() < 1.0
                } else {
                    root_ab < 0.5 + pe
                };
                format!("{},{},{},{}\n", sig9(pb), sig9(pe), flag(positive), flag(key))
            })
        })
        .collect();
    let mut out = String::from("p_b,p_e,positivity_boundary_flag,key_condition_flag\n");
    rows.iter().for_each(|r| out.push_str(r));
    out
}

fn sweep_ad(points: usize) -> Result<String, Failure> {
    let last = points.saturating_sub(1).max(1) as f64;
    let rows = (0..points)
        .into_par_iter()
        .map(|i| {
            let eta = i as f64 / last;
            let m = WiretapFamily::AmplitudeDamping { eta }.metrics()?;
            let sum = m.root_f_ab + m.root_f_pb;
            Ok(format!(
                "{},{},{},{},{}\n",
                sig9(eta),
                sig9(m.root_f_ab),
                sig9(m.root_f_pb),
                sig9(sum),
                flag(key_rate_condition(&m))
            ))
        })
        .collect::<secpolar::Result<Vec<String>>>()?;
    let mut out = String::from("eta,rootF_ab,rootF_pb,sum,condition_flag\n");
    rows.iter().for_each(|r| out.push_str(r));
    Ok(out)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { channel, out } => {
            let family = channel.family();
            let m = family.metrics()?;
            out.emit(&json(&AnalyzeReport {
                channel: family,
                metrics: m,
                uncertainty_residual: m.uncertainty_residual(),
                fidelity_uncertainty_slack: m.fidelity_uncertainty_slack(),
                key_rate_condition: key_rate_condition(&m),
                symmetric_private_info: symmetric_private_info(&m),
            })?)?;
        }
        Command::Construct {
            channel,
            code,
            tables,
            out,
        } => {
            let family = channel.family();
            let c = construct(&family, code.n, code.beta)?;
            if let Some(dir) = tables {
                fs::create_dir_all(&dir)?;
                for t in [&c.amp, &c.phase, &c.eve] {
                    let file = File::create(dir.join(format!("{}.csv", t.kind)))?;
                    let mut w = BufWriter::new(file);
                    t.write_csv(&mut w)?;
                    w.flush()?;
                }
            }
            out.emit(&json(&c.report(family)?)?)?;
        }
        Command::Simulate {
            channel,
            code,
            trials,
            seed,
            min_sum,
            out,
        } => {
            let family = channel.family();
            let spec = construct(&family, code.n, code.beta)?.spec;
            let rule = if min_sum {
                BoxplusRule::MinSum
            } else {
                BoxplusRule::Exact
            };
            let report = run(&TrialConfig {
                channel: family,
                spec,
                trials,
                seed,
                rule,
            })?;
            out.emit(&json(&report)?)?;
        }
        Command::SweepBsc {
            pb_points,
            pe_points,
            exact,
            out,
        } => {
            out.emit(&sweep_bsc(pb_points, pe_points, exact))?;
        }
        Command::SweepAd { points, out } => {
            out.emit(&sweep_ad(points)?)?;
        }
        Command::Extremal {
            fa,
            fp,
            trials,
            depth,
            seed,
            level,
            dump,
            dump_trials,
            out,
        } => {
            for (name, v) in [("--fa", fa), ("--fp", fp)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(format!("{name} must lie in [0, 1], got {v}").into());
                }
            }
            if trials == 0 {
                return Err("--trials must be at least 1".into());
            }
            if let Some(path) = dump {
                let mut w = BufWriter::new(File::create(path)?);
                write_trajectories_csv(&mut w, fa, fp, dump_trials.min(trials), depth, seed)?;
                w.flush()?;
            }
            let fraction = doubly_good_fraction_at(fa, fp, trials, depth, seed, level);
            out.emit(&json(&ExtremalReport {
                f0_a: fa,
                f0_p: fp,
                trials,
                depth,
                seed,
                level,
                fraction,
            })?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;
    use std::path::Path;

    fn run_to(dir: &Path, args: &[&str]) -> Result<String, Failure> {
        let out = dir.join("out.txt");
        let mut argv = vec!["secpolar"];
        argv.extend_from_slice(args);
        argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
        execute(Cli::try_parse_from(argv)?)?;
        Ok(fs::read_to_string(out)?)
    }

    fn run_json(args: &[&str]) -> Value {
        let dir = tempfile::tempdir().unwrap();
        serde_json::from_str(&run_to(dir.path(), args).unwrap()).unwrap()
    }

    fn close(v: &Value, want: f64, tol: f64) -> bool {
        (v.as_f64().unwrap() - want).abs() <= tol
    }

    #[test]
    fn analyze_bsc() {
        let v = run_json(&["analyze", "--bsc", "0.1", "0.25"]);
        assert!(close(&v["metrics"]["rootF_ab"], 0.6, 1e-9));
        // the phase fidelity of a BSC wiretap channel is |1 - 2 p_e|
        assert!(close(&v["metrics"]["rootF_pb"], 0.5, 1e-9));
        assert_eq!(v["key_rate_condition"], Value::Bool(false));
        assert!(close(&v["uncertainty_residual"], 0.0, 1e-8));
    }

    #[test]
    fn analyze_erasure_and_damping() {
        let v = run_json(&["analyze", "--erasure", "0.25"]);
        assert!(close(&v["symmetric_private_info"], 0.5, 1e-9));
        assert_eq!(v["key_rate_condition"], Value::Bool(true));
        let v = run_json(&["analyze", "--ad", "0.5"]);
        assert!(close(&v["symmetric_private_info"], 0.0, 1e-9));
    }

    #[test]
    fn flag_errors_exit_with_two() {
        for argv in [
            vec!["secpolar", "analyze"],
            vec!["secpolar", "analyze", "--erasure", "0.2", "--ad", "0.4"],
            vec!["secpolar", "analyze", "--bsc", "0.1"],
            vec!["secpolar", "construct", "--erasure", "0.2"],
            vec!["secpolar", "frobnicate"],
        ] {
            let err = Cli::try_parse_from(&argv).err().unwrap();
            assert_eq!(err.exit_code(), 2, "{argv:?}");
        }
    }

    #[test]
    fn numeric_failures_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(run_to(dir.path(), &["analyze", "--erasure", "2"]).is_err());
        assert!(run_to(
            dir.path(),
            &["construct", "--erasure", "0.2", "--n", "4", "--beta", "0.6"]
        )
        .is_err());
        assert!(run_to(dir.path(), &["simulate", "--ad", "0.9", "--n", "4"]).is_err());
        assert!(run_to(dir.path(), &["extremal", "--fa", "1.5", "--fp", "0.1"]).is_err());
    }

    fn csv_rows(text: &str) -> Vec<Vec<String>> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').map(String::from).collect())
            .collect()
    }

    #[test]
    fn sweep_bsc_flags() {
        let dir = tempfile::tempdir().unwrap();
        let text = run_to(dir.path(), &["sweep-bsc"]).unwrap();
        assert!(text.starts_with("p_b,p_e,positivity_boundary_flag,key_condition_flag\n"));
        let rows = csv_rows(&text);
        assert_eq!(rows.len(), 199 * 99);
        let find = |pb: &str, pe: &str| rows.iter().find(|r| r[0] == pb && r[1] == pe).unwrap().clone();
        assert_eq!(find("0.1", "0.25")[2..], ["1", "1"]);
        assert_eq!(find("0.3", "0.05")[3], "0");
        for r in rows.iter().filter(|r| r[0] == r[1]) {
            assert_eq!(r[2], "0");
        }
        let exact = run_to(
            dir.path(),
            &["sweep-bsc", "--exact", "--pb-points", "9", "--pe-points", "4"],
        )
        .unwrap();
        let rows = csv_rows(&exact);
        assert_eq!(rows.len(), 36);
        assert_eq!(rows.iter().find(|r| r[0] == "0.1" && r[1] == "0.2").unwrap()[3], "0");
    }

    #[test]
    fn sweep_ad_endpoints() {
        let dir = tempfile::tempdir().unwrap();
        let text = run_to(dir.path(), &["sweep-ad"]).unwrap();
        assert!(text.starts_with("eta,rootF_ab,rootF_pb,sum,condition_flag\n"));
        let rows = csv_rows(&text);
        assert_eq!(rows.len(), 1000);
        assert_eq!(rows[0], ["0", "1", "1", "2", "0"]);
        assert_eq!(rows[999], ["1", "0", "0", "0", "1"]);
    }

    #[test]
    fn construct_reports_rates_and_tables() {
        let dir = tempfile::tempdir().unwrap();
        let tables = dir.path().join("tables");
        let text = run_to(
            dir.path(),
            &[
                "construct",
                "--erasure",
                "0.25",
                "--n",
                "12",
                "--beta",
                "0.2",
                "--tables",
                tables.to_str().unwrap(),
            ],
        )
        .unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["spec"]["block_length"], 4096);
        let s = &v["sizes"];
        let total: u64 = ["a", "x", "z", "b"].iter().map(|k| s[k].as_u64().unwrap()).sum();
        assert_eq!(total, 4096);
        assert!(close(&v["rates"]["key_rate"], s["b"].as_f64().unwrap() / 4096.0, 0.0));
        for kind in ["amplitude-bob", "phase-bob", "amplitude-eve"] {
            let csv = fs::read_to_string(tables.join(format!("{kind}.csv"))).unwrap();
            assert_eq!(csv.lines().count(), 4097);
        }
    }

    #[test]
    fn simulate_report_fields() {
        let v = run_json(&[
            "simulate",
            "--erasure",
            "0.25",
            "--n",
            "6",
            "--beta",
            "0.3",
            "--trials",
            "200",
            "--seed",
            "7",
        ]);
        assert_eq!(v["trials_run"], 200);
        assert_eq!(v["seed"], 7);
        let fer = v["fer"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&fer));
        assert!(v["leakage_exact_bec"].as_f64().unwrap() <= v["leakage_bound"].as_f64().unwrap());
        let v = run_json(&[
            "simulate",
            "--bsc",
            "0.05",
            "0.3",
            "--n",
            "6",
            "--trials",
            "100",
            "--min-sum",
        ]);
        assert!(v["leakage_exact_bec"].is_null());
    }

    #[test]
    fn extremal_fraction_and_dump() {
        let v = run_json(&[
            "extremal", "--fa", "0.6", "--fp", "0.3", "--trials", "100000", "--depth", "40", "--seed", "1",
        ]);
        assert_eq!(v["fraction"].as_f64(), Some(0.0));
        let dir = tempfile::tempdir().unwrap();
        let dump = dir.path().join("traj.csv");
        run_to(
            dir.path(),
            &[
                "extremal",
                "--fa",
                "0.5",
                "--fp",
                "0.5",
                "--trials",
                "10",
                "--depth",
                "5",
                "--dump",
                dump.to_str().unwrap(),
                "--dump-trials",
                "3",
            ],
        )
        .unwrap();
        let csv = fs::read_to_string(dump).unwrap();
        assert!(csv.starts_with("trial,depth,f_a,f_p\n"));
        assert_eq!(csv.lines().count(), 1 + 3 * 6);
    }
}
