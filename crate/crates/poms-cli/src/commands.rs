use std::path::{Path, PathBuf};

use poms::extract::{self, BoundaryMode, ExtractConfig, Representative};
use poms::io::{self, GridMeta, Pixmap};
use poms::synthesis::{self, FinalStatus, PomsConfig, RoundObserver};
use poms::taccl::{compute_taccl, TacclConfig, TacclReport};
use poms_model::{Dims, GridState, SetupRestriction, TileSet};
use rand::Rng;

use crate::util::CliError;
use crate::{BoundaryArg, RepresentativeArg};

fn load_tileset(path: &Path) -> Result<TileSet, CliError> {
    Ok(io::load_tileset(path)?.tileset)
}

/// Grid snapshots must reference tiles of the tileset they are checked or
/// rendered against.
fn check_grid_tiles(grid: &GridState, ts: &TileSet) -> Result<(), CliError> {
    if ts.dim() == 2 && grid.dims().z != 1 {
        return Err(CliError::Config(format!(
            "a 2D tileset requires a grid with z extent 1, got {}",
            grid.dims().z
        )));
    }
    for i in 0..grid.cell_count() {
        if let Some(t) = grid.get(i) {
            if t as usize >= ts.tile_count() {
                return Err(CliError::Config(format!(
                    "grid references tile id {t} outside the domain of {} tiles",
                    ts.tile_count()
                )));
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn extract(
    image: &Path,
    tile_px: u32,
    window: usize,
    boundary: BoundaryArg,
    out: &Path,
    sheet: Option<&Path>,
    provenance: Option<&Path>,
    representative: RepresentativeArg,
    name: Option<String>,
) -> Result<(), CliError> {
    let pixmap = Pixmap::load_png(image)?;
    let name = name.unwrap_or_else(|| {
        image
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "tileset".to_string())
    });
    let cfg = ExtractConfig {
        name,
        tile_pixels: tile_px,
        window,
        boundary: match boundary {
            BoundaryArg::Zero => BoundaryMode::HardZero,
            BoundaryArg::Wrap => BoundaryMode::Wrap,
        },
        representative: match representative {
            RepresentativeArg::UpperLeft => Representative::UpperLeft,
            RepresentativeArg::Middle => Representative::Middle,
        },
    };
    let mut extraction = extract::extract_tile_set(&pixmap, &cfg)?;

    if let Some(sheet_path) = sheet {
        extraction.sheet.save_png(sheet_path)?;
        // Reference the sheet relative to the tileset file when they share
        // a directory, so the pair stays relocatable.
        let stored = if sheet_path.parent() == out.parent() {
            sheet_path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| sheet_path.to_string_lossy().into_owned())
        } else {
            sheet_path.to_string_lossy().into_owned()
        };
        extraction
            .tileset
            .set_render_table(Some(poms_model::RenderTable {
                tile_sheet: stored,
                tile_pixels: tile_px,
                rects: extraction.rects.clone(),
            }));
    }

    let representative_meta = serde_json::json!({
        "mode": match representative {
            RepresentativeArg::UpperLeft => "upperLeft",
            RepresentativeArg::Middle => "middle",
        }
    });
    io::save_tileset(out, &extraction.tileset, Some(&representative_meta))?;

    if let Some(prov_path) = provenance {
        let doc = serde_json::json!({
            "tileCount": extraction.tileset.tile_count(),
            "placements": extraction.placements,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc).map_err(io::IoError::from)?;
        bytes.push(b'\n');
        io::atomic_write(prov_path, &bytes)?;
    }

    println!(
        "extracted {} tiles, {} canonical rules -> {}",
        extraction.tileset.tile_count(),
        extraction.tileset.canonical_rules().len(),
        out.display()
    );
    Ok(())
}

fn write_taccl_csv(path: &Path, report: &TacclReport) -> Result<(), CliError> {
    let mut csv = String::from(
        "tile,extent_x,extent_y,extent_z,unbounded_x,unbounded_y,unbounded_z,centrally_unplaceable\n",
    );
    for p in &report.per_tile {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p.tile,
            p.extents[0],
            p.extents[1],
            p.extents[2],
            p.unbounded[0],
            p.unbounded[1],
            p.unbounded[2],
            p.centrally_unplaceable
        ));
    }
    io::atomic_write(path, csv.as_bytes())?;
    Ok(())
}

fn write_taccl_heatmap(path: &Path, report: &TacclReport) -> Result<(), CliError> {
    const SCALE: u32 = 8;
    let d = report.per_tile.len() as u32;
    let mut img = Pixmap::new(d * SCALE, 2 * SCALE);
    for (i, p) in report.per_tile.iter().enumerate() {
        for axis in 0..2usize {
            let color = if p.unbounded[axis] {
                [200, 30, 30, 255]
            } else {
                let frac = p.extents[axis] as f64 / report.scratch[axis] as f64;
                [0, 55 + (200.0 * frac) as u8, 40, 255]
            };
            for dy in 0..SCALE {
                for dx in 0..SCALE {
                    img.set_pixel(i as u32 * SCALE + dx, axis as u32 * SCALE + dy, color);
                }
            }
        }
    }
    img.save_png(path)?;
    Ok(())
}

pub fn taccl(
    tileset: &Path,
    scratch: usize,
    out: &Path,
    csv: Option<&Path>,
    heatmap: Option<&Path>,
) -> Result<(), CliError> {
    let ts = load_tileset(tileset)?;
    let cfg = TacclConfig::with_scratch(&ts, scratch);
    let report = compute_taccl(&ts, &cfg)?;

    let mut bytes = serde_json::to_vec_pretty(&report).map_err(io::IoError::from)?;
    bytes.push(b'\n');
    io::atomic_write(out, &bytes)?;

    let csv_path = csv
        .map(Path::to_path_buf)
        .unwrap_or_else(|| out.with_extension("csv"));
    write_taccl_csv(&csv_path, &report)?;

    if let Some(hm) = heatmap {
        write_taccl_heatmap(hm, &report)?;
    }

    println!("L={}", report.length_label());
    if !report.centrally_unplaceable.is_empty() {
        println!(
            "centrally unplaceable tiles: {:?}",
            report.centrally_unplaceable
        );
    }
    Ok(())
}

pub struct SolveArgs {
    pub tileset: PathBuf,
    pub size: Dims,
    pub block: Dims,
    pub bcs: String,
    pub bcs_lambda: Option<f64>,
    pub tcs: String,
    pub solver: String,
    pub seed: Option<u64>,
    pub seeds: Option<(u64, u64)>,
    pub out_dir: Option<PathBuf>,
    pub erosion_p0: Option<f64>,
    pub erosion_pmax: Option<f64>,
    pub soften: Option<Dims>,
    pub max_rounds: Option<u64>,
    pub max_iterations: Option<u64>,
    pub snapshot_every: Option<u64>,
    pub pin_frame: bool,
    pub out: Option<PathBuf>,
    pub render: Option<PathBuf>,
}

fn build_config(args: &SolveArgs, ts: &TileSet, seed: u64) -> PomsConfig {
    let mut cfg = PomsConfig::new(args.block, seed);
    cfg.block_choice = args.bcs.clone();
    cfg.bcs_lambda = args.bcs_lambda;
    cfg.solver = args.solver.clone();
    cfg.bms.tile_choice = args.tcs.clone();
    cfg.bms.soften = args.soften;
    cfg.bms.max_iterations = args.max_iterations;
    cfg.max_rounds = args.max_rounds;
    cfg.snapshot_interval = args.snapshot_every;
    if let Some(p0) = args.erosion_p0 {
        cfg.erosion.base_probability = p0;
        cfg.erosion.max_probability = cfg.erosion.max_probability.max(p0);
    }
    if let Some(pmax) = args.erosion_pmax {
        cfg.erosion.max_probability = pmax;
    }
    if args.pin_frame {
        cfg.restrictions
            .push(SetupRestriction::pinned_frame(ts.tile_count()));
    }
    cfg
}

/// Write one render per Z slice: `out.png` for 2D grids, `out_z000.png`,
/// `out_z001.png`, ... for 3D.
fn save_render(grid: &GridState, ts: &TileSet, sheet: &Pixmap, out: &Path) -> Result<(), CliError> {
    let slices = io::render_slices(grid, ts, sheet)?;
    if slices.len() == 1 {
        slices[0].save_png(out)?;
        return Ok(());
    }
    for (z, slice) in slices.iter().enumerate() {
        slice.save_png(&numbered_path(out, &format!("z{z:03}")))?;
    }
    Ok(())
}

/// `dir/name.ext` -> `dir/name_TAG.ext`
fn numbered_path(base: &Path, tag: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "png".to_string());
    base.with_file_name(format!("{stem}_{tag}.{ext}"))
}

struct FrameWriter<'a> {
    grid_out: Option<&'a Path>,
    render: Option<(&'a Path, &'a TileSet, &'a Pixmap)>,
    seed: u64,
    digest: String,
    error: Option<CliError>,
}

impl RoundObserver for FrameWriter<'_> {
    fn on_snapshot(&mut self, grid: &GridState, round: u64) {
        if self.error.is_some() {
            return;
        }
        let tag = format!("r{round:05}");
        let meta = GridMeta {
            round,
            seed: self.seed,
            config_digest: self.digest.clone(),
        };
        if let Some(out) = self.grid_out {
            if let Err(e) = io::save_grid(&numbered_path(out, &tag), grid, &meta) {
                self.error = Some(e.into());
                return;
            }
        }
        if let Some((out, ts, sheet)) = self.render {
            if let Err(e) = save_render(grid, ts, sheet, &numbered_path(out, &tag)) {
                self.error = Some(e);
            }
        }
    }
}

fn solve_single(
    ts: &TileSet,
    sheet: Option<&Pixmap>,
    args: &SolveArgs,
    seed: u64,
    out: Option<&Path>,
    render: Option<&Path>,
) -> Result<FinalStatus, CliError> {
    let cfg = build_config(args, ts, seed);
    let digest = cfg.digest();
    let mut observer = FrameWriter {
        grid_out: if args.snapshot_every.is_some() {
            out
        } else {
            None
        },
        render: match (args.snapshot_every.is_some(), render, sheet) {
            (true, Some(r), Some(s)) => Some((r, ts, s)),
            _ => None,
        },
        seed,
        digest: digest.clone(),
        error: None,
    };
    let result = synthesis::run_observed(ts, args.size, &cfg, &mut observer)?;
    if let Some(e) = observer.error {
        return Err(e);
    }

    let meta = GridMeta {
        round: result.stats.rounds,
        seed,
        config_digest: digest,
    };
    if let Some(out) = out {
        io::save_grid(out, &result.grid, &meta)?;
    }
    if let Some(render_path) = render {
        let sheet = sheet.ok_or(io::IoError::MissingRenderTable)?;
        save_render(&result.grid, ts, sheet, render_path)?;
    }
    println!(
        "seed {seed}: {} after {} rounds ({:.1}% resolved)",
        match result.status {
            FinalStatus::Resolved => "resolved",
            FinalStatus::RoundsExhausted => "rounds exhausted",
        },
        result.stats.rounds,
        100.0 * result.grid.resolved_fraction()
    );
    Ok(result.status)
}

pub fn solve(args: SolveArgs) -> Result<(), CliError> {
    let cells = args
        .size
        .x
        .checked_mul(args.size.y)
        .and_then(|v| v.checked_mul(args.size.z));
    if cells.is_none_or(|v| v > (1 << 31)) {
        return Err(CliError::Config(format!(
            "grid size {} is out of range",
            args.size
        )));
    }
    let ts = load_tileset(&args.tileset)?;
    // The sheet is only needed when rendering; load it once up front so a
    // bad render table fails before a long solve.
    let sheet = if args.render.is_some() {
        let base = args.tileset.parent().unwrap_or(Path::new("."));
        Some(io::load_sheet(&ts, base)?)
    } else {
        None
    };

    if let Some((start, end)) = args.seeds {
        let out_dir = args
            .out_dir
            .as_ref()
            .ok_or_else(|| CliError::Config("--seeds requires --out-dir".to_string()))?;
        let render_name = args
            .render
            .as_ref()
            .and_then(|p| p.file_name())
            .map(PathBuf::from);

        let mut failures = 0;
        std::thread::scope(|scope| -> Result<(), CliError> {
            let mut handles = Vec::new();
            for seed in start..end {
                let dir = out_dir.join(format!("seed-{seed}"));
                let ts = &ts;
                let sheet = sheet.as_ref();
                let args = &args;
                let render_name = render_name.clone();
                handles.push(scope.spawn(move || -> Result<FinalStatus, CliError> {
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                    let grid_path = dir.join("grid.json");
                    let render_path = render_name.map(|n| dir.join(n));
                    solve_single(
                        ts,
                        sheet,
                        args,
                        seed,
                        Some(&grid_path),
                        render_path.as_deref(),
                    )
                }));
            }
            for handle in handles {
                match handle.join().expect("solver thread panicked")? {
                    FinalStatus::Resolved => {}
                    FinalStatus::RoundsExhausted => failures += 1,
                }
            }
            Ok(())
        })?;
        if failures > 0 {
            return Err(CliError::Failed(format!(
                "{failures} of {} runs exhausted their rounds",
                end - start
            )));
        }
        return Ok(());
    }

    let seed = args.seed.unwrap_or_else(|| {
        let s: u64 = rand::rng().random();
        eprintln!("seed: {s} (use --seed {s} to reproduce)");
        s
    });
    match solve_single(
        &ts,
        sheet.as_ref(),
        &args,
        seed,
        args.out.as_deref(),
        args.render.as_deref(),
    )? {
        FinalStatus::Resolved => Ok(()),
        FinalStatus::RoundsExhausted => Err(CliError::Failed(
            "no full realization found within the round budget".to_string(),
        )),
    }
}

pub fn verify(tileset: &Path, grid: &Path) -> Result<(), CliError> {
    let ts = load_tileset(tileset)?;
    let (grid, _meta) = io::load_grid(grid)?;
    check_grid_tiles(&grid, &ts)?;
    let report = poms_oracle::verify_realization(&grid, &ts);
    if report.pass() {
        println!("ok: {} cells verified", grid.cell_count());
        Ok(())
    } else {
        for violation in &report.violations {
            println!("{violation}");
        }
        Err(CliError::Failed(format!(
            "{} violations",
            report.violations.len()
        )))
    }
}

pub fn render(tileset: &Path, grid: &Path, out: &Path) -> Result<(), CliError> {
    let ts = load_tileset(tileset)?;
    let (grid, _meta) = io::load_grid(grid)?;
    check_grid_tiles(&grid, &ts)?;
    let base = tileset.parent().unwrap_or(Path::new("."));
    let sheet = io::load_sheet(&ts, base)?;
    save_render(&grid, &ts, &sheet, out)?;
    Ok(())
}
