//! `poms`: constraint based tiling generation from the command line.
//!
//! Subcommands: `extract` infers a tileset from an exemplar image, `taccl`
//! probes tile correlation lengths, `solve` runs the grid-level solver,
//! `verify` checks a grid against a tileset and `render` draws a grid to
//! PNG. Exit codes: 0 success, 1 solve or verify failure, 2 configuration
//! error, 3 I/O error.

mod commands;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use util::{parse_dims, parse_seed_range};

#[derive(Parser)]
#[command(
    name = "poms",
    version,
    about = "Constraint based tiling generation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    /// Pad the exemplar with a synthetic zero tile; the tileset uses the
    /// zero boundary policy.
    Zero,
    /// Wrap window coordinates around the exemplar; open grid boundary.
    Wrap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepresentativeArg {
    UpperLeft,
    Middle,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Infer a tileset from an exemplar image.
    Extract {
        /// Exemplar PNG.
        #[arg(long)]
        image: PathBuf,
        /// Tile edge length in pixels.
        #[arg(long = "tile-px")]
        tile_px: u32,
        /// Super-tile window extent in tiles; 1 uses direct adjacency.
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[arg(long, value_enum)]
        boundary: BoundaryArg,
        /// Output tileset JSON.
        #[arg(long)]
        out: PathBuf,
        /// Also write the packed tile sheet and reference it from the
        /// tileset's render table.
        #[arg(long)]
        sheet: Option<PathBuf>,
        /// Also write per-tile window placements.
        #[arg(long)]
        provenance: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "upper-left")]
        representative: RepresentativeArg,
        /// Tileset name; defaults to the image file stem.
        #[arg(long)]
        name: Option<String>,
    },
    /// Measure per-tile propagation extents (the correlation-length probe).
    Taccl {
        #[arg(long)]
        tileset: PathBuf,
        /// Scratch block extent per used axis (odd).
        #[arg(long, default_value_t = 65)]
        scratch: usize,
        /// Report JSON; a CSV is written next to it unless --csv is given.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Optional per-tile extent heatmap PNG.
        #[arg(long)]
        heatmap: Option<PathBuf>,
    },
    /// Solve a grid.
    Solve {
        #[arg(long)]
        tileset: PathBuf,
        /// Grid size, e.g. 64x64 or 32x32x8.
        #[arg(long, value_parser = parse_dims)]
        size: poms_model::Dims,
        /// Block size, e.g. 16x16.
        #[arg(long, value_parser = parse_dims)]
        block: poms_model::Dims,
        /// Block choice scheduler: uniform, diagonal or center-out.
        #[arg(long, default_value = "uniform")]
        bcs: String,
        /// Decay length for the distance-weighted block schedulers.
        #[arg(long = "bcs-lambda")]
        bcs_lambda: Option<f64>,
        /// Tile choice scheduler: min-entropy or uniform-cell.
        #[arg(long, default_value = "min-entropy")]
        tcs: String,
        /// Block solver algorithm (only "bms" ships).
        #[arg(long, default_value = "bms")]
        solver: String,
        /// RNG seed; defaults to a random seed which is printed so the run
        /// can be reproduced.
        #[arg(long)]
        seed: Option<u64>,
        /// Run one independent solve per seed in the range, e.g. 0..10,
        /// each in its own directory under --out-dir.
        #[arg(long, value_parser = parse_seed_range, conflicts_with = "seed")]
        seeds: Option<(u64, u64)>,
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
        /// Base erosion probability.
        #[arg(long = "erosion-p0")]
        erosion_p0: Option<f64>,
        #[arg(long = "erosion-pmax")]
        erosion_pmax: Option<f64>,
        /// Soften extent, e.g. 8 or 8x8 or 4x4x2; defaults to three
        /// quarters of the block.
        #[arg(long, value_parser = parse_dims)]
        soften: Option<poms_model::Dims>,
        #[arg(long = "max-rounds")]
        max_rounds: Option<u64>,
        /// Block solver iteration budget; defaults to 10x block cells.
        #[arg(long = "max-iterations")]
        max_iterations: Option<u64>,
        /// Write numbered snapshot frames every R rounds.
        #[arg(long = "snapshot-every")]
        snapshot_every: Option<u64>,
        /// Pin the grid's outer frame to the full domain (it stays
        /// unresolved but constrains its neighbors).
        #[arg(long = "pin-frame", default_value_t = false)]
        pin_frame: bool,
        /// Output grid snapshot JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the result (requires a tileset render table).
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Check that a grid is a valid realization of a tileset.
    Verify {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        grid: PathBuf,
    },
    /// Render a grid snapshot to PNG (one image per Z slice for 3D grids).
    Render {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract {
            image,
            tile_px,
            window,
            boundary,
            out,
            sheet,
            provenance,
            representative,
            name,
        } => commands::extract(
            &image,
            tile_px,
            window,
            boundary,
            &out,
            sheet.as_deref(),
            provenance.as_deref(),
            representative,
            name,
        ),
        Command::Taccl {
            tileset,
            scratch,
            out,
            csv,
            heatmap,
        } => commands::taccl(&tileset, scratch, &out, csv.as_deref(), heatmap.as_deref()),
        Command::Solve {
            tileset,
            size,
            block,
            bcs,
            bcs_lambda,
            tcs,
            solver,
            seed,
            seeds,
            out_dir,
            erosion_p0,
            erosion_pmax,
            soften,
            max_rounds,
            max_iterations,
            snapshot_every,
            pin_frame,
            out,
            render,
        } => commands::solve(commands::SolveArgs {
            tileset,
            size,
            block,
            bcs,
            bcs_lambda,
            tcs,
            solver,
            seed,
            seeds,
            out_dir,
            erosion_p0,
            erosion_pmax,
            soften,
            max_rounds,
            max_iterations,
            snapshot_every,
            pin_frame,
            out,
            render,
        }),
        Command::Verify { tileset, grid } => commands::verify(&tileset, &grid),
        Command::Render { tileset, grid, out } => commands::render(&tileset, &grid, &out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
