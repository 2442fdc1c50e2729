//! Config-driven experiment runner behind the `bohr` binary.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bohr_core::halesjewett::{search_line_free, SearchOutcome};
use bohr_core::orbits::{orbit_census, render_trace_svg, trace_cells, CensusMode, TracedLine};
use bohr_core::rational::{format_rational, ratio};
use bohr_core::verifier::{
    construction_failed, eta_check, pigeonhole_return, scan_csv, scan_differences,
    scan_differences_with, ScanMode, ScanRow,
};
use bohr_core::{random_chessboard, AlphaVector, Chessboard, HalfIntervalColoring};

pub use config::{ExperimentConfig, LoadedConfig, SEED_ENV};
use config::{need, rational_key};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] bohr_core::Error),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Params,
    Board,
    Scan,
    ReturnCert,
    Eta,
    OrbitCensus,
    Trace,
    Hj,
    Classic,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Params => "params",
            Command::Board => "board",
            Command::Scan => "scan",
            Command::ReturnCert => "return-cert",
            Command::Eta => "eta",
            Command::OrbitCensus => "orbit-census",
            Command::Trace => "trace",
            Command::Hj => "hj",
            Command::Classic => "classic",
        }
    }
}

/// What a run printed and wrote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    /// 0, or 1 when the run found what the construction forbids.
    pub exit_code: i32,
    pub stdout: String,
    pub artifacts: Vec<PathBuf>,
}

struct Artifacts<'a> {
    dir: Option<&'a Path>,
    written: Vec<PathBuf>,
    board_hash: Option<String>,
}

impl Artifacts<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let Some(dir) = self.dir else { return Ok(()) };
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs one command. Artifacts go to `out_dir`, else to the config's
/// `output_dir`, else nowhere.
pub fn run(
    command: Command,
    loaded: &LoadedConfig,
    out_dir: Option<&Path>,
) -> Result<RunOutcome, CliError> {
    let cfg = &loaded.config;
    let dir = out_dir.or(cfg.output_dir.as_deref());
    let mut arts = Artifacts {
        dir,
        written: Vec::new(),
        board_hash: None,
    };
    let mut stdout = String::new();
    let mut exit_code = 0;

    match command {
        Command::Params => {
            let params = cfg.params()?;
            let text = params.describe();
            arts.write("params.txt", &text)?;
            stdout.push_str(&text);
        }
        Command::Board => {
            let board = random_chessboard(&cfg.params()?);
            arts.board_hash = Some(board.board_hash_hex());
            arts.write("board.txt", &board.export())?;
            let _ = writeln!(
                stdout,
                "board_hash {}\nred_fraction {}",
                board.board_hash_hex(),
                format_rational(&board.red_fraction())
            );
        }
        Command::Scan => {
            let board = random_chessboard(&cfg.params()?);
            arts.board_hash = Some(board.board_hash_hex());
            let rows = scan_board(cfg, &board)?;
            arts.write("scan.csv", &scan_csv(&rows))?;
            exit_code = scan_verdict(&rows, &mut stdout);
        }
        Command::ReturnCert => {
            let params = cfg.params()?;
            let cert = pigeonhole_return(need(&cfg.x, "x")?, need(&cfg.y, "y")?, &params)?;
            let verified = cert.verify(&params);
            let mini: Vec<String> = cert.mini.0.iter().map(u64::to_string).collect();
            let disp: Vec<String> = cert.disp.iter().map(format_rational).collect();
            let csv = format!(
                "x,y,t,a,b,mini_cell,disp,sup_disp,divides_N1,verified\n{},{},{},{},{},{},{},{},{},{}\n",
                cert.x,
                cert.y,
                cert.t,
                cert.a,
                cert.b,
                mini.join(" "),
                disp.join(" "),
                format_rational(&cert.sup_disp()),
                cert.divides_period,
                verified
            );
            arts.write("return_cert.csv", &csv)?;
            stdout.push_str(&csv);
            if !verified {
                exit_code = 1;
            }
        }
        Command::Eta => {
            let params = cfg.params()?;
            let y = need(&cfg.y, "y")?;
            let ts: Vec<u64> = match cfg.t {
                Some(t) => vec![t],
                None => {
                    let t_max = cfg.t_max.unwrap_or(10_000);
                    (1..=t_max.min(params.period()))
                        .filter(|t| params.period() % t == 0)
                        .collect()
                }
            };
            let mut csv = String::from("y,t,eta,in_S,applicable,holds\n");
            let mut violations = 0;
            for t in ts {
                let c = eta_check(y, t, &params)?;
                if !c.holds {
                    violations += 1;
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    c.y,
                    c.t,
                    format_rational(&c.eta),
                    c.in_s,
                    c.applicable,
                    c.holds
                );
            }
            arts.write("eta.csv", &csv)?;
            let _ = writeln!(stdout, "violations {violations}");
            if violations > 0 {
                exit_code = 1;
            }
        }
        Command::OrbitCensus => {
            let params = cfg.params()?;
            let k = params.cells_per_axis();
            let resolution = cfg.resolution.unwrap_or(k * k);
            let n_steps = cfg
                .n_steps
                .unwrap_or(4 * k * params.subdivision());
            let threshold = match cfg.threshold {
                Some(_) => rational_key(&cfg.threshold, "threshold")?,
                None => ratio(1, 4),
            };
            let mode = match cfg.census_mode.as_deref() {
                None | Some("reduced") => CensusMode::Reduced,
                Some("exhaustive") => CensusMode::Exhaustive,
                Some(other) => {
                    return Err(CliError::Config(format!(
                        "invalid value for key `census_mode`: {other:?} (expected \"reduced\" or \"exhaustive\")"
                    )))
                }
            };
            let census = orbit_census(&params, resolution, n_steps, &threshold, mode)?;
            arts.write("orbit_census.csv", &census.csv())?;
            let summary = census.summary();
            arts.write("orbit_census_summary.txt", &format!("{summary}\n"))?;
            let _ = writeln!(stdout, "{summary}");
        }
        Command::Trace => {
            let params = cfg.params()?;
            let board = random_chessboard(&params);
            arts.board_hash = Some(board.board_hash_hex());
            let cert = pigeonhole_return(need(&cfg.x, "x")?, need(&cfg.y, "y")?, &params)?;
            let n_steps = cfg
                .n_steps
                .unwrap_or(params.cells_per_axis() * params.subdivision());
            let line = TracedLine::from_certificate(&cert, &params, n_steps);
            let trace = trace_cells(&line, &params)?;
            let mut csv = String::from("cell,enter,chord\n");
            for s in &trace.segments {
                let cell: Vec<String> = s.cell.0.iter().map(u64::to_string).collect();
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    cell.join(" "),
                    format_rational(&s.enter),
                    format_rational(&s.chord)
                );
            }
            arts.write("trace.csv", &csv)?;
            if params.dim() == 2 {
                arts.write("trace.svg", &render_trace_svg(&board, &line, &trace)?)?;
            }
            let _ = writeln!(
                stdout,
                "t {} segments {} distinct_cells {}",
                cert.t,
                trace.segments.len(),
                trace.distinct_cells()
            );
        }
        Command::Hj => {
            let d = need(&cfg.hj_d, "hj_d")?;
            let budget = cfg.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let text = hj_search(d, budget);
            arts.write("hj.txt", &text)?;
            stdout.push_str(&text);
        }
        Command::Classic => {
            let alpha = rational_key(&cfg.alpha, "alpha")?;
            let coloring = HalfIntervalColoring::new(&alpha)?;
            let alphas = AlphaVector::new(vec![alpha])?;
            let delta = cfg.delta_value()?;
            let rows = scan_differences_with(
                &coloring,
                &alphas,
                &delta,
                (need(&cfg.y_lo, "y_lo")?, need(&cfg.y_hi, "y_hi")?),
                need(&cfg.len, "L")?,
                (cfg.x_lo.unwrap_or(0), need(&cfg.x_hi, "x_hi")?),
                scan_mode(cfg),
            )?;
            arts.write("classic.csv", &scan_csv(&rows))?;
            exit_code = scan_verdict(&rows, &mut stdout);
        }
    }

    let manifest = manifest(command, loaded, &arts);
    arts.write("manifest.txt", &manifest)?;
    Ok(RunOutcome {
        exit_code,
        stdout,
        artifacts: arts.written,
    })
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// `R`/`B` coloring or `NONE (...)`, then the node count.
pub fn hj_search(d: usize, node_budget: u64) -> String {
    let result = search_line_free(d, node_budget);
    let mut text = format!("{}\nnodes {}\n", result.render(), result.nodes);
    if let SearchOutcome::Found(_) = result.outcome {
        text.push_str("verified line-free\n");
    }
    text
}

fn scan_mode(cfg: &ExperimentConfig) -> ScanMode {
    if cfg.parallel.unwrap_or(true) {
        ScanMode::Parallel
    } else {
        ScanMode::Serial
    }
}

fn scan_board(cfg: &ExperimentConfig, board: &Chessboard) -> Result<Vec<ScanRow>, CliError> {
    let y_lo = need(&cfg.y_lo, "y_lo")?;
    let y_hi = need(&cfg.y_hi, "y_hi")?;
    let len = need(&cfg.len, "L")?;
    let mode = scan_mode(cfg);
    if cfg.x_lo.is_none() && cfg.x_hi.is_none() {
        return Ok(scan_differences(board, y_lo, y_hi, len, mode)?);
    }
    let params = board.params();
    let window = (
        cfg.x_lo.unwrap_or(0),
        cfg.x_hi.unwrap_or(params.horizon() as i64),
    );
    let fast = board.pullback()?;
    Ok(scan_differences_with(
        &fast,
        params.alphas(),
        params.delta(),
        (y_lo, y_hi),
        len,
        window,
        mode,
    )?)
}

fn scan_verdict(rows: &[ScanRow], stdout: &mut String) -> i32 {
    let in_s = rows.iter().filter(|r| r.in_s).count();
    let worst = rows
        .iter()
        .filter(|r| r.in_s)
        .map(|r| r.report.max_len_seen)
        .max()
        .unwrap_or(0);
    let failed = construction_failed(rows);
    let _ = writeln!(
        stdout,
        "rows {} in_S {} worst_in_S_run {} construction_failed {}",
        rows.len(),
        in_s,
        worst,
        failed
    );
    i32::from(failed)
}

fn manifest(command: Command, loaded: &LoadedConfig, arts: &Artifacts) -> String {
    let mut text = format!(
        "command {}\nconfig_sha256 {}\n",
        command.name(),
        loaded.sha256
    );
    if let Some(seed) = loaded.config.seed {
        let _ = writeln!(text, "seed {seed}");
    }
    let _ = writeln!(
        text,
        "board_hash {}",
        arts.board_hash.as_deref().unwrap_or("-")
    );
    for path in &arts.written {
        if let Some(name) = path.file_name() {
            let _ = writeln!(text, "artifact {}", name.to_string_lossy());
        }
    }
    text
}
