use std::path::PathBuf;
use std::process::ExitCode;

use chamberlab::verify::Fault;
use chamberlab_cli::{
    cmd_building, cmd_check, cmd_property_suite, cmd_rgd, cmd_triangles, BuildingAction, Outcome, RgdKind,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chamberlab", version, about = "Coxeter complexes, triangles of residues and small buildings over GF(2)")]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report 2-completeness, affine A2 triples and spherical subsets of a diagram.
    Check { diagram: PathBuf },
    /// Enumerate reflection triangles in a ball of the Coxeter complex.
    Triangles {
        diagram: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Build each triangle and check where its residues meet.
        #[arg(long)]
        verify: bool,
        /// Cap on the number of group elements enumerated.
        #[arg(long)]
        max_elements: Option<usize>,
    },
    /// Validate or describe the flag building of an incidence file.
    Building {
        #[arg(value_enum)]
        action: ActionArg,
        incidence: PathBuf,
        #[arg(long)]
        gonality: usize,
    },
    /// Build and check the root group datum of A2(2) or B2(2).
    Rgd {
        #[arg(value_enum)]
        kind: KindArg,
    },
    /// Run the seeded property suite on a diagram.
    PropertySuite {
        diagram: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_elements: Option<usize>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Validate,
    Show,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    A2,
    B2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    BrokenProjection,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Outcome { report, exit_code } = match cli.command {
        Command::Check { diagram } => cmd_check(&diagram),
        Command::Triangles {
            diagram,
            radius,
            verify,
            max_elements,
        } => cmd_triangles(&diagram, radius, verify, max_elements),
        Command::Building {
            action,
            incidence,
            gonality,
        } => {
            let action = match action {
                ActionArg::Validate => BuildingAction::Validate,
                ActionArg::Show => BuildingAction::Show,
            };
            cmd_building(action, &incidence, gonality)
        }
        Command::Rgd { kind } => cmd_rgd(match kind {
            KindArg::A2 => RgdKind::A2,
            KindArg::B2 => RgdKind::B2,
        }),
        Command::PropertySuite {
            diagram,
            radius,
            seed,
            max_elements,
            inject_fault,
        } => {
            let fault = inject_fault.map(|FaultArg::BrokenProjection| Fault::BrokenProjection);
            cmd_property_suite(&diagram, radius, seed, max_elements, fault)
        }
    };
    let text = report.to_json();
    println!("{text}");
    if let Some(path) = cli.json {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(exit_code as u8)
}
