use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use fibercone_core::algebra::FieldKind;
use fibercone_core::io::analysis::DEFAULT_SEED;
use fibercone_core::io::report::{exit_code, EXIT_DEFECT, EXIT_OK, EXIT_PARSE};
use fibercone_core::io::{run_command, run_corpus, Command, CorpusParams, Flags, KMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CliCommand {
    /// Everything applicable to the document.
    Analyze,
    /// Reduced Gröbner bases of I, J and K.
    Gb,
    /// Ratliff-Rush closures rr_K(I^n) for n up to --n.
    Rr,
    /// Reduction numbers r_J(I) and r_J^K(I).
    Rednum,
    /// Hilbert function of K·I^n, listed up to --upto.
    Hilbert,
    /// Hilbert series and the closed form, truncated at --trunc.
    Series,
    /// Reduction-number bounds.
    Bounds,
    /// Depth of the fiber cone and the associated graded ring.
    Depth,
    /// Cohen-Macaulay test for the fiber cone.
    Cm,
    /// Random instances through `analyze`, with aggregate counts.
    Corpus,
}

impl CliCommand {
    fn command(self) -> Option<Command> {
        Command::from_name(self.to_possible_value()?.get_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KArg {
    /// K = m
    M,
    /// K = R
    Unit,
    /// K = I
    I,
}

/// Fiber cones, Ratliff-Rush closures and reduction numbers of m-primary ideals.
#[derive(Debug, Parser)]
#[command(name = "fibercone", version)]
struct Cli {
    #[arg(value_enum)]
    command: CliCommand,

    /// Input document; standard input when absent or `-`.
    file: Option<PathBuf>,

    /// Print the JSON report instead of a table.
    #[arg(long)]
    json: bool,

    #[arg(long, env = "FIBERCONE_SEED")]
    seed: Option<u64>,

    /// Series truncation degree.
    #[arg(long)]
    trunc: Option<u32>,

    /// Largest power for `rr`.
    #[arg(long)]
    n: Option<u32>,

    /// Extend tables up to this index.
    #[arg(long)]
    upto: Option<u32>,

    /// Corpus: ring dimension (1, 2 or 3).
    #[arg(long, default_value_t = 2)]
    dim: u32,

    /// Corpus: number of instances.
    #[arg(long, default_value_t = 20)]
    count: usize,

    /// Corpus: coefficient field, `QQ` or `F<p>`.
    #[arg(long, default_value = "F32003")]
    field: FieldKind,

    /// Corpus: which K the documents declare.
    #[arg(long, value_enum, default_value_t = KArg::M)]
    k: KArg,

    /// Corpus: least generator degree.
    #[arg(long)]
    lo: Option<u32>,

    /// Corpus: largest generator degree.
    #[arg(long)]
    hi: Option<u32>,
}

fn read_input(path: Option<&PathBuf>) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match path {
        Some(p) if p.as_os_str() != "-" => buf = std::fs::read(p)?,
        _ => {
            std::io::stdin().read_to_end(&mut buf)?;
        }
    }
    Ok(buf)
}

fn corpus(cli: &Cli) -> i32 {
    let mut params = CorpusParams::new(cli.dim, cli.count, cli.seed.unwrap_or(DEFAULT_SEED))
        .with_field(cli.field)
        .with_k_mode(match cli.k {
            KArg::M => KMode::Maximal,
            KArg::Unit => KMode::Unit,
            KArg::I => KMode::SameAsI,
        });
    params.lo = cli.lo.unwrap_or(params.lo);
    params.hi = cli.hi.unwrap_or(params.hi);
    let run = match run_corpus(&params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fibercone: {}", e);
            return exit_code(&e);
        }
    };
    if cli.json {
        println!("{}", run.summary_json());
    } else {
        let a = &run.aggregate;
        let rows = [
            ("instances", run.instances.len()),
            ("analyzed", a.analyzed),
            ("skipped", a.skipped),
            ("minimal multiplicity", a.minimal_multiplicity),
            ("almost minimal multiplicity", a.almost_minimal),
            ("bound records checked", a.bound_records_checked),
            ("bound records held", a.bound_records_held),
            ("identity passes", a.identity_passes),
            ("AMM with positive fiber depth", a.amm_depth_positive),
            ("AMM with sop depth certified", a.amm_sop_certified),
            ("closed-form series checked", a.series_checked),
            ("closed-form series matched", a.series_matched),
            ("graded series checked", a.graded_series_checked),
            ("graded series matched", a.graded_series_matched),
            ("quotient checks", a.quotient_checks),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            println!("{:width$}  {}", k, v, width = width);
        }
        for (reason, n) in &a.skip_reasons {
            println!("{:width$}  {}", format!("skipped: {}", reason), n, width = width);
        }
    }
    match &run.defect {
        Some(d) => {
            eprintln!("fibercone: defect in instance {}: {}", d.index, d.message);
            eprintln!("{}", d.document);
            EXIT_DEFECT
        }
        None => EXIT_OK,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command.command() {
        None => corpus(&cli),
        Some(command) => match read_input(cli.file.as_ref()) {
            Err(e) => {
                eprintln!("fibercone: cannot read input: {}", e);
                EXIT_PARSE
            }
            Ok(input) => {
                let flags = Flags {
                    seed: cli.seed,
                    trunc: cli.trunc,
                    n: cli.n,
                    upto: cli.upto,
                };
                let report = run_command(&input, command, &flags);
                let out = if cli.json {
                    report.to_json() + "\n"
                } else {
                    report.to_text()
                };
                let _ = std::io::stdout().write_all(out.as_bytes());
                if let Some(e) = &report.error {
                    match (e.line, e.column) {
                        (Some(l), Some(c)) => eprintln!("fibercone: {}:{}: {}", l, c, e.message),
                        _ => eprintln!("fibercone: {}", e.message),
                    }
                }
                report.exit_code
            }
        },
    };
    ExitCode::from(code as u8)
}
