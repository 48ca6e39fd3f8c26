use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hodgelift::report::{self, ReportError};

#[derive(Parser, Debug)]
#[command(name = "hodgelift", version, about = "Exact verification of a Z/p-quotient threefold with two lifts of different h^{3,0}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every check at a prime and print the report.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Omit the header line in text output.
        #[arg(long)]
        no_banner: bool,
    },
    /// h^{3,0} of both lifts for every prime 5 <= p <= max, with the fitted slope.
    Table {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
    },
    /// Print the curve coefficients on one affine chart.
    Curve {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        chart: u8,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Json,
    Tsv,
}

fn run(cli: Cli) -> Result<u8, ReportError> {
    match cli.command {
        Command::Verify { p, format, no_banner } => {
            let r = report::verify(p)?;
            match format {
                ReportFormat::Json => println!("{}", r.to_json()),
                ReportFormat::Text => {
                    if !no_banner {
                        println!("# hodgelift {}", env!("CARGO_PKG_VERSION"));
                    }
                    print!("{}", r.render_text());
                }
            }
            Ok(r.exit_code() as u8)
        }
        Command::Table { max, format } => {
            let series = report::table(max)?;
            match format {
                TableFormat::Json => println!("{}", report::render_table_json(&series)),
                TableFormat::Tsv => print!("{}", report::render_table_tsv(&series)),
            }
            Ok(0)
        }
        Command::Curve { p, chart, format } => {
            let listing = report::curve_listing(p, chart)?;
            match format {
                ReportFormat::Json => println!("{}", listing.to_json()),
                ReportFormat::Text => print!("{}", listing.render_text()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invalid_input() { 2 } else { 1 })
        }
    }
}
