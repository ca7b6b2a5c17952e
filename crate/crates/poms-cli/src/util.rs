use poms::io::IoError;
use poms::synthesis::ConfigError;
use poms_model::Dims;

/// CLI failures with their exit codes: 1 for solve/verify outcomes, 2 for
/// configuration problems, 3 for I/O.
#[derive(Debug)]
pub enum CliError {
    Failed(String),
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Failed(m) | CliError::Config(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(err: IoError) -> CliError {
        match err {
            // OS-level trouble is exit 3; malformed or inconsistent file
            // contents are configuration problems.
            IoError::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> CliError {
        CliError::Config(err.to_string())
    }
}

impl From<poms::extract::ExtractError> for CliError {
    fn from(err: poms::extract::ExtractError) -> CliError {
        CliError::Config(err.to_string())
    }
}

impl From<poms::taccl::TacclError> for CliError {
    fn from(err: poms::taccl::TacclError) -> CliError {
        CliError::Config(err.to_string())
    }
}

/// Parse `8`, `8x8` or `8x8x2` into dims; a missing Z means 1.
pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(format!("expected NxM or NxMxK, got '{s}'"));
    }
    let mut v = [1usize; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .parse::<usize>()
            .map_err(|_| format!("bad extent '{p}' in '{s}'"))?;
        if v[i] == 0 {
            return Err(format!("extent must be positive in '{s}'"));
        }
    }
    // A single number means a square 2D extent.
    if parts.len() == 1 {
        v[1] = v[0];
    }
    Ok(Dims::new(v[0], v[1], v[2]))
}

/// Parse `A..B` (half-open) into a seed range.
pub fn parse_seed_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected START..END, got '{s}'"))?;
    let start: u64 = a.parse().map_err(|_| format!("bad seed '{a}'"))?;
    let end: u64 = b.parse().map_err(|_| format!("bad seed '{b}'"))?;
    if end <= start {
        return Err(format!("empty seed range '{s}'"));
    }
    Ok((start, end))
}
