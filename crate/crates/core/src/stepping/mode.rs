use crate::labpq::QueueMode;

/// How a round processes its frontier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Dense,
    Sparse,
    SuperSparse,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Dense => "dense",
            Mode::Sparse => "sparse",
            Mode::SuperSparse => "super-sparse",
        }
    }

    pub fn queue_mode(self) -> QueueMode {
        match self {
            Mode::Dense => QueueMode::Dense,
            Mode::Sparse | Mode::SuperSparse => QueueMode::Sparse,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fixes the mode for every round, or leaves it to [`select_mode`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeOverride {
    #[default]
    Auto,
    Dense,
    Sparse,
    SuperSparse,
}

impl std::str::FromStr for ModeOverride {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Ok(match s {
            "auto" => ModeOverride::Auto,
            "dense" => ModeOverride::Dense,
            "sparse" => ModeOverride::Sparse,
            "super-sparse" => ModeOverride::SuperSparse,
            _ => return Err(crate::Error::Config(format!("unknown mode {s:?}"))),
        })
    }
}

/// Dense when the frontier plus its incident edges exceed
/// `dense_fraction * m`; otherwise super-sparse when the average frontier
/// degree is below `super_sparse_degree`; otherwise sparse.
pub fn select_mode(
    frontier_size: usize,
    incident_edges: u64,
    m: usize,
    dense_fraction: f64,
    super_sparse_degree: f64,
) -> Mode {
    if (frontier_size as u64 + incident_edges) as f64 > dense_fraction * m as f64 {
        Mode::Dense
    } else if frontier_size > 0 && (incident_edges as f64) < super_sparse_degree * frontier_size as f64 {
        Mode::SuperSparse
    } else {
        Mode::Sparse
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_threshold_is_strict() {
        // m = 2000, threshold m / 20 = 100.
        assert_eq!(select_mode(50, 50, 2000, 0.05, 20.0), Mode::SuperSparse);
        assert_eq!(select_mode(50, 51, 2000, 0.05, 20.0), Mode::Dense);
    }

    #[test]
    fn degree_split() {
        let m = 1 << 20;
        assert_eq!(select_mode(10, 199, m, 0.05, 20.0), Mode::SuperSparse);
        assert_eq!(select_mode(10, 200, m, 0.05, 20.0), Mode::Sparse);
        assert_eq!(select_mode(10, 5000, m, 0.05, 20.0), Mode::Sparse);
    }
}
