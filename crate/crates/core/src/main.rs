use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use normlines::cli::{
    cmd_analyze2, cmd_analyze3, cmd_dioph, cmd_family, cmd_piezas, cmd_render, cmd_torus,
    PiezasArgs, RenderTarget, Report,
};
use normlines::Result;

/// Norm-preserving lines of 2x2 and 3x3 rational matrices.
///
/// Matrix entries are exact rationals written `p` or `p/q`, row-major.
#[derive(Parser)]
#[command(name = "normlines", version)]
struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Existence test and all norm-preserving lines of a 2x2 matrix.
    Analyze2 {
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
        entries: Vec<String>,
    },
    /// Cone classification, pivot reduction and integer-line search for a 3x3 matrix.
    Analyze3 {
        #[arg(num_args = 9, value_name = "ENTRY", allow_negative_numbers = true)]
        entries: Vec<String>,
        /// Coordinate bound for the brute-force search.
        #[arg(long, default_value_t = 50)]
        bound: u32,
        /// Variable to solve the cone for.
        #[arg(long, value_parser = ["x", "y", "z"])]
        pivot: Option<String>,
    },
    /// A member of one of the families [[a, a±1], [c, c±1]].
    Family {
        /// lopez (= mm), pp, pm, mp or mm: sign of the offset for b, then d.
        variant: String,
        #[arg(allow_negative_numbers = true)]
        a: String,
        #[arg(allow_negative_numbers = true)]
        c: String,
        #[arg(long)]
        transpose: bool,
    },
    /// Brute-force solutions of a*y^2 + b*y*z + c*z^2 = d*u^2 and the mod-4 certificate.
    Dioph {
        #[arg(num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
        form: Vec<String>,
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        d: String,
        #[arg(long, default_value_t = 50)]
        bound: u32,
    },
    /// Two-parameter family of solutions from one seed, optionally lifted to cone lines.
    Piezas {
        #[arg(num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
        form: Vec<String>,
        #[arg(long, num_args = 3, value_names = ["M", "N", "P"], allow_negative_numbers = true, required = true)]
        seed: Vec<String>,
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        d: String,
        /// Parameter pair; may be repeated.
        #[arg(long, num_args = 2, value_names = ["S", "T"], action = clap::ArgAction::Append, allow_negative_numbers = true)]
        st: Vec<String>,
        /// Evaluate every (s, t) with |s|, |t| <= N.
        #[arg(long)]
        range: Option<u32>,
        /// 3x3 matrix whose pivot reduction has this discriminant form; enables lifting.
        #[arg(
            long,
            num_args = 9,
            value_name = "ENTRY",
            allow_negative_numbers = true
        )]
        matrix: Option<Vec<String>>,
        #[arg(long, value_parser = ["x", "y", "z"])]
        pivot: Option<String>,
    },
    /// Powers of [[q+1, q], [q, q-1]] and iterates along its eigenlines.
    Torus {
        #[arg(allow_negative_numbers = true)]
        q: String,
        n: u64,
    },
    /// Write SVG / OBJ pictures.
    Render {
        #[command(subcommand)]
        target: RenderCommand,
    },
}

#[derive(Subcommand)]
enum RenderCommand {
    /// fig1.svg ... fig4.svg/.obj into DIR.
    Figures { dir: PathBuf },
    /// Circle, ellipse and rational lines of a 2x2 matrix.
    Scene2 {
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
        entries: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        no_lines: bool,
    },
    /// Sphere, ellipsoid and cone of a 3x3 matrix, as PREFIX.obj and PREFIX.svg.
    Scene3 {
        #[arg(num_args = 9, value_name = "ENTRY", allow_negative_numbers = true)]
        entries: Vec<String>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        cone: bool,
    },
}

fn run(command: Command) -> Result<Report> {
    match command {
        Command::Analyze2 { entries } => cmd_analyze2(&entries),
        Command::Analyze3 {
            entries,
            bound,
            pivot,
        } => cmd_analyze3(&entries, bound, pivot.as_deref()),
        Command::Family {
            variant,
            a,
            c,
            transpose,
        } => cmd_family(&variant, &a, &c, transpose),
        Command::Dioph { form, d, bound } => cmd_dioph(&form, &d, bound),
        Command::Piezas {
            form,
            seed,
            d,
            st,
            range,
            matrix,
            pivot,
        } => cmd_piezas(&PiezasArgs {
            form,
            d,
            seed,
            st: st.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect(),
            range,
            matrix,
            pivot,
        }),
        Command::Torus { q, n } => cmd_torus(&q, n),
        Command::Render { target } => cmd_render(&match target {
            RenderCommand::Figures { dir } => RenderTarget::Figures { dir },
            RenderCommand::Scene2 {
                entries,
                out,
                no_lines,
            } => RenderTarget::Scene2 {
                entries,
                out,
                no_lines,
            },
            RenderCommand::Scene3 { entries, out, cone } => RenderTarget::Scene3 {
                entries,
                prefix: out,
                cone,
            },
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
