use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ruitenburg::bounds;
use ruitenburg::evaluation::{equiv_n, TypeStore};
use ruitenburg::formula::parse;
use ruitenburg::iteration::{iterate_psi, ruitenburg_index, CombinedModel};
use ruitenburg::ladder::{
    eval_generator, generator_formula, inverse_image_iterates, ladder_endo, projectivity_check,
    LadderDownset, LadderPoset,
};
use ruitenburg::modeltext::parse_model;
use ruitenburg::prover::{countermodel, prove_cpc, Prover, ProverConfig};
use ruitenburg::suite::{run_criterion, SuiteConfig};

/// Iterated substitutions in intuitionistic propositional calculus: decision
/// procedures, countermodels, finite-model iteration, and period bounds.
#[derive(Parser)]
#[command(name = "ruitenburg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to a file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide IPC provability of a formula.
    Prove {
        formula: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Decide provable bi-implication of two formulas.
    Equiv {
        a: String,
        b: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Decide classical (truth-table) provability.
    ProveCpc { formula: String },
    /// Search for a finite Kripke countermodel.
    Countermodel {
        formula: String,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
    },
    /// Measure the least N with A^{N+2} equivalent to A^N, and the period.
    Ruitenburg {
        formula: String,
        /// The iteration variable.
        #[arg(long, default_value = "x")]
        x: String,
        #[arg(long, default_value_t = 20)]
        cap: u32,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Iterate the x-recomputation map on a model file and print the trace.
    Iterate {
        formula: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "x")]
        x: String,
        #[arg(long, default_value_t = 10_000)]
        t_max: usize,
    },
    /// Compare two model files up to depth-n bisimulation.
    Bisim {
        model: PathBuf,
        other: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Check the normal-form equation over TWO on the small-poset pool.
    Nform {
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    /// Print the ladder generator table and inverse-image iterates.
    Ladder {
        #[arg(long, default_value_t = 12)]
        k: i64,
        #[arg(long, default_value_t = 8)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        iterates: usize,
    },
    /// Period-bound experiments.
    Bounds {
        #[command(subcommand)]
        target: BoundsCommand,
    },
    /// Run the acceptance experiments; exit nonzero on any violation.
    Suite {
        #[arg(long, default_value_t = 0xA11CE)]
        seed: u64,
        /// Exhaustive corpus cap (connectives over {x, y}).
        #[arg(long, default_value_t = 5)]
        exhaustive_cap: u32,
        /// Random corpus size.
        #[arg(long, default_value_t = 200)]
        corpus_size: usize,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
        /// Run a single criterion (1..=12).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// View sets of a formula's iteration on a model file.
    View {
        formula: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "x")]
        x: String,
    },
    /// The non-monotone map with period 2^n.
    Counterexample {
        #[arg(long, default_value_t = 10)]
        n: u32,
    },
    /// Exhaustive check of the classical third-iterate identity.
    Classical {
        #[arg(long, default_value_t = 3)]
        t_size: usize,
    },
    /// Measured periods of endofunctions of a 2^n-point set.
    Boolean {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0xA11CE)]
        seed: u64,
    },
}

fn combined_from_file(
    path: &PathBuf,
    x: &str,
    formula: &ruitenburg::formula::Formula,
) -> Result<CombinedModel, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let model = parse_model(&text).map_err(|e| e.to_string())?;
    let u = model.var_labels.get(x).copied().unwrap_or(0);
    // Fixed variables: everything labeled in the file plus every formula
    // variable (a variable holding nowhere is simply absent from the file).
    let mut y_vars: Vec<String> = model
        .var_labels
        .keys()
        .filter(|v| v.as_str() != x)
        .cloned()
        .collect();
    for v in formula.vars() {
        if v != x && !y_vars.contains(&v) {
            y_vars.push(v);
        }
    }
    y_vars.sort();
    let v_masks: Vec<u128> = y_vars
        .iter()
        .map(|v| model.var_labels.get(v).copied().unwrap_or(0))
        .collect();
    CombinedModel::new(std::sync::Arc::new(model.poset), x, y_vars, v_masks, u)
        .map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<(String, bool), String> {
    let mut report = String::new();
    let mut ok = true;
    match &cli.command {
        Command::Prove { formula, budget } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            let mut prover = Prover::new(ProverConfig {
                node_budget: *budget,
                cache_cap: usize::MAX,
            });
            let provable = prover.prove_ipc(&f).map_err(|e| e.to_string())?;
            report.push_str(&format!("provable: {}\n", provable));
        }
        Command::Equiv { a, b, budget } => {
            let fa = parse(a).map_err(|e| e.to_string())?;
            let fb = parse(b).map_err(|e| e.to_string())?;
            let mut prover = Prover::new(ProverConfig {
                node_budget: *budget,
                cache_cap: usize::MAX,
            });
            let eq = prover.equiv_ipc(&fa, &fb).map_err(|e| e.to_string())?;
            report.push_str(&format!("equivalent: {}\n", eq));
        }
        Command::ProveCpc { formula } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            let provable = prove_cpc(&f).map_err(|e| e.to_string())?;
            report.push_str(&format!("classically provable: {}\n", provable));
        }
        Command::Countermodel {
            formula,
            max_points,
        } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            match countermodel(&f, *max_points) {
                Some(cm) => {
                    report.push_str(&format!("countermodel for {}\n", cm.target));
                    report.push_str(&ruitenburg::modeltext::serialize_kripke(&cm.model));
                }
                None => {
                    report.push_str(&format!("none up to {} points\n", max_points));
                }
            }
        }
        Command::Ruitenburg {
            formula,
            x,
            cap,
            budget,
        } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            let mut prover = Prover::new(ProverConfig {
                node_budget: *budget,
                cache_cap: usize::MAX,
            });
            let (n, period) =
                ruitenburg_index(&mut prover, &f, x, *cap).map_err(|e| e.to_string())?;
            report.push_str(&format!("N={} period={}\n", n, period));
        }
        Command::Iterate {
            formula,
            model,
            x,
            t_max,
        } => {
            let f = parse(formula).map_err(|e| e.to_string())?;
            let m = combined_from_file(model, x, &f)?;
            let trace = iterate_psi(&f, &m, *t_max).map_err(|e| e.to_string())?;
            report.push_str(&trace.to_text(m.poset().len()));
        }
        Command::Bisim {
            model,
            other,
            depth,
        } => {
            let a = parse_model(&std::fs::read_to_string(model).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?
                .to_kripke()
                .map_err(|e| e.to_string())?;
            let b = parse_model(&std::fs::read_to_string(other).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?
                .to_kripke()
                .map_err(|e| e.to_string())?;
            let store = TypeStore::new();
            for d in 0..=*depth {
                report.push_str(&format!("depth {}: {}\n", d, equiv_n(&store, &a, &b, d)));
            }
        }
        Command::Nform { depth, max_points } => {
            let store = TypeStore::new();
            let two = std::sync::Arc::new(ruitenburg::poset::LabelPoset::two());
            let mut pool = Vec::new();
            for p in ruitenburg::poset::rooted_posets_up_to(*max_points) {
                for d in p.downsets() {
                    let map: Vec<usize> = p
                        .points()
                        .map(|q| if d & (1 << q) != 0 { 1 } else { 0 })
                        .collect();
                    pool.push(
                        ruitenburg::evaluation::Evaluation::new(p.clone(), two.clone(), map)
                            .map_err(|e| e.to_string())?,
                    );
                }
            }
            let mut universe = pool.clone();
            universe.extend(
                ruitenburg::evaluation::reduced_trees(&store, &two, *depth, 5)
                    .map_err(|e| e.to_string())?,
            );
            let mut mismatches = 0usize;
            for u in &pool {
                let r = ruitenburg::dualitylite::check_nform(&store, u, *depth, &universe, &pool);
                mismatches += r.mismatches.len();
            }
            report.push_str(&format!(
                "pool {} evaluations, depth {}, mismatches {} (conditional on representative completeness)\n",
                pool.len(),
                depth,
                mismatches
            ));
            ok &= mismatches == 0;
        }
        Command::Ladder { k, n, iterates } => {
            let ladder = LadderPoset::new(*k).map_err(|e| e.to_string())?;
            for i in -1..=*n {
                let d = eval_generator(&ladder, i).map_err(|e| e.to_string())?;
                report.push_str(&format!("gen {:3}  {}  = {}\n", i, generator_formula(i), d));
            }
            ladder_endo(&ladder).map_err(|e| e.to_string())?;
            report.push_str("endomorphism: open\n");
            let its = inverse_image_iterates(&ladder, LadderDownset::Down(0), *iterates)
                .map_err(|e| e.to_string())?;
            for (step, d) in its.iter().enumerate() {
                report.push_str(&format!("f^-{}(down 0) = {}\n", step + 1, d));
            }
            let mut prover = Prover::default();
            let proj = projectivity_check(&mut prover).map_err(|e| e.to_string())?;
            report.push_str(&format!("projectivity: {}\n", proj));
            ok &= proj;
        }
        Command::Bounds { target } => match target {
            BoundsCommand::View { formula, model, x } => {
                let f = parse(formula).map_err(|e| e.to_string())?;
                let m = combined_from_file(model, x, &f)?;
                let trace = iterate_psi(&f, &m, 10_000).map_err(|e| e.to_string())?;
                for p in m.poset().points() {
                    let vs = bounds::view_set(&trace, &m, p);
                    report.push_str(&format!("point {}: {} labels\n", p, vs.labels.len()));
                }
                let r = bounds::check_period_bound(&trace, &m);
                report.push_str(&format!(
                    "period {} view-set {} labels {} within-bounds {}\n",
                    r.period,
                    r.view_cardinality,
                    r.label_count,
                    r.ok()
                ));
                ok &= r.ok();
            }
            BoundsCommand::Counterexample { n } => {
                let (_, period) = bounds::nonmonotone_counterexample(*n);
                report.push_str(&format!("n={} period={} (2^n={})\n", n, period, 1u64 << n));
                ok &= period == 1u64 << n;
            }
            BoundsCommand::Classical { t_size } => {
                let r = bounds::classical_f3(*t_size);
                report.push_str(&format!(
                    "t={} checked={} violations={} fixture={:?}\n",
                    r.t_size, r.checked, r.violations, r.fixture_index_period
                ));
                ok &= r.violations == 0;
            }
            BoundsCommand::Boolean { n, samples, seed } => {
                let r = bounds::boolean_endo_experiment(*n, *samples, *seed);
                report.push_str(&format!(
                    "n={} k={} maps={} max-period={} max-index={} within-lcm={} lcm<=k!={}\n",
                    r.n,
                    r.k,
                    r.maps_checked,
                    r.max_period,
                    r.max_index,
                    r.within_lcm_bound,
                    r.lcm_within_factorial
                ));
                ok &= r.within_lcm_bound && r.lcm_within_factorial;
            }
        },
        Command::Suite {
            seed,
            exhaustive_cap,
            corpus_size,
            budget,
            max_points,
            criterion,
        } => {
            let cfg = SuiteConfig {
                seed: *seed,
                exhaustive_cap: *exhaustive_cap,
                random_count: *corpus_size,
                prover_budget: *budget,
                max_countermodel_points: *max_points,
                ..SuiteConfig::default()
            };
            let ids: Vec<u8> = match criterion {
                Some(id) => vec![*id],
                None => ruitenburg::suite::CRITERIA.iter().map(|&(i, _)| i).collect(),
            };
            for id in ids {
                let o = run_criterion(id, &cfg);
                eprintln!("{}", o);
                report.push_str(&format!("{}\n", o));
                ok &= o.passed;
            }
        }
    }
    Ok((report, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, ok)) => {
            print!("{}", report);
            if let Some(path) = &cli.out {
                if let Err(e) =
                    std::fs::File::create(path).and_then(|mut f| f.write_all(report.as_bytes()))
                {
                    eprintln!("error writing {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
