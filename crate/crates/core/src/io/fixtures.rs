//! Bundled synthetic leaderboards shaped like three public competitions.
//!
//! They share team count, test-set size, top score and the counts of teams
//! above a few reference levels with the real leaderboards, but are generated
//! from piecewise-uniform densities and contain no real submissions. The
//! checked-in CSV files are verified against `fixtures/SHA256SUMS` at load.

use crate::error::{Error, Result};
use crate::io::leaderboard::{Design, leaderboard_csv, parse_leaderboard};
use crate::io::report::sha256_hex;
use crate::sota::{LeaderboardSample, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// Multi-class accuracy, 7 classes, `n = 13840`.
    Obesity,
    /// Multi-class accuracy, 5 classes, `n = 15000`.
    Cassava,
    /// Binary AUC with 1.7% positives, `n = 7687`.
    Melanoma,
}

struct Shape {
    /// `(level, teams strictly above level)`, descending in level; the first
    /// entry is the top score with count 0 and the last is the chance level.
    anchors: &'static [(f64, f64)],
    /// Exact scores of the leading teams, overriding the density.
    leaders: &'static [f64],
    /// Extra teams below the chance level.
    below_chance: &'static [f64],
}

const OBESITY: Shape = Shape {
    anchors: &[
        (0.911_56, 0.0),
        (0.9100, 30.0),
        (0.9090, 200.0),
        (0.9080, 520.0),
        (0.9067, 920.0),
        (0.9062, 1134.0),
        (0.9026, 1844.0),
        (0.8950, 2500.0),
        (0.8800, 3081.0),
        (0.8500, 3330.0),
        (0.7500, 3450.0),
        (0.4000, 3490.0),
        (1.0 / 7.0, 3498.0),
    ],
    leaders: &[12616.0 / 13840.0],
    below_chance: &[
        0.02, 0.05, 0.07, 0.09, 0.1, 0.11, 0.12, 0.125, 0.13, 0.135, 0.14, 0.142,
    ],
};

const CASSAVA: Shape = Shape {
    anchors: &[
        (0.9132, 0.0),
        (0.9010, 3.0),
        (0.8990, 40.0),
        (0.8950, 500.0),
        (0.8900, 1500.0),
        (0.8800, 2600.0),
        (0.8600, 3300.0),
        (0.8000, 3600.0),
        (0.5000, 3730.0),
        (0.2000, 3752.0),
    ],
    leaders: &[0.9132, 0.9043, 0.9028],
    below_chance: &[0.1, 0.15, 0.18, 0.19, 0.195, 0.199],
};

const MELANOMA: Shape = Shape {
    anchors: &[
        (0.9490, 0.0),
        (0.9460, 15.0),
        (0.9420, 140.0),
        (0.9350, 700.0),
        (0.9250, 1300.0),
        (0.9120, 1750.0),
        (0.8975, 2022.0),
        (0.8700, 2450.0),
        (0.8000, 2850.0),
        (0.6500, 3100.0),
        (0.5000, 3173.0),
    ],
    leaders: &[0.9490],
    below_chance: &[
        0.36, 0.38, 0.4, 0.41, 0.42, 0.43, 0.44, 0.45, 0.46, 0.47, 0.475, 0.48, 0.485, 0.49, 0.495,
        0.498, 0.499, 0.4995,
    ],
};

impl Fixture {
    pub const ALL: [Fixture; 3] = [Fixture::Obesity, Fixture::Cassava, Fixture::Melanoma];

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Obesity => "obesity",
            Fixture::Cassava => "cassava",
            Fixture::Melanoma => "melanoma",
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name())
    }

    pub fn design(&self) -> Design {
        match self {
            Fixture::Obesity => Design {
                n: 13840,
                metric: Metric::Accuracy,
                class_balance: None,
                chance_level: 1.0 / 7.0,
            },
            Fixture::Cassava => Design {
                n: 15000,
                metric: Metric::Accuracy,
                class_balance: None,
                chance_level: 0.2,
            },
            Fixture::Melanoma => Design {
                n: 7687,
                metric: Metric::Auc,
                class_balance: Some(0.017),
                chance_level: 0.5,
            },
        }
    }

    fn shape(&self) -> &'static Shape {
        match self {
            Fixture::Obesity => &OBESITY,
            Fixture::Cassava => &CASSAVA,
            Fixture::Melanoma => &MELANOMA,
        }
    }

    /// Deterministically builds the fixture from its shape.
    pub fn generate(&self) -> Result<LeaderboardSample> {
        let design = self.design();
        let shape = self.shape();
        let n = design.n as f64;
        // Scores live on the k/n lattice for accuracy and on a 1e-5 grid for
        // AUC; anchors are moved half a step up so that rounding keeps the
        // "strictly above" counts exact.
        type Map = Box<dyn Fn(f64) -> f64>;
        let (snap, lift): (Map, Map) = match design.metric {
            Metric::Accuracy => (
                Box::new(move |s: f64| (s * n).round() / n),
                Box::new(move |t: f64| ((t * n).floor() + 0.5) / n),
            ),
            Metric::Auc => (
                Box::new(|s: f64| (s * 1e5).round() / 1e5),
                Box::new(|t: f64| t + 0.5e-5),
            ),
        };
        let anchors: Vec<(f64, f64)> = shape
            .anchors
            .iter()
            .enumerate()
            .map(|(i, &(level, count))| {
                let last = i + 1 == shape.anchors.len();
                (if i == 0 || last { level } else { lift(level) }, count)
            })
            .collect();
        let total = anchors.last().expect("anchors").1 as usize;
        let mut scores = Vec::with_capacity(total + shape.below_chance.len());
        for rank in 0..total {
            if let Some(&s) = shape.leaders.get(rank) {
                scores.push(s);
                continue;
            }
            let q = rank as f64 + 0.5;
            let k = anchors
                .windows(2)
                .position(|w| q <= w[1].1)
                .expect("rank within anchors");
            let (s_hi, c_hi) = anchors[k];
            let (s_lo, c_lo) = anchors[k + 1];
            let s = s_hi + (s_lo - s_hi) * (q - c_hi) / (c_lo - c_hi);
            let s = snap(s).max(design.chance_level);
            scores.push(s);
        }
        scores.extend_from_slice(shape.below_chance);
        let prefix = self.name();
        let teams = (1..=scores.len())
            .map(|i| format!("{prefix}-{i:04}"))
            .collect();
        LeaderboardSample::new(
            teams,
            scores,
            design.n,
            design.metric,
            design.class_balance,
            design.chance_level,
        )
    }

    /// Canonical CSV bytes of the generated fixture.
    pub fn generate_csv(&self) -> Result<Vec<u8>> {
        leaderboard_csv(&self.generate()?)
    }
}

/// Renders the `SHA256SUMS` manifest for the given CSV contents.
pub fn checksum_manifest(files: &[(String, Vec<u8>)]) -> String {
    files
        .iter()
        .map(|(name, bytes)| format!("{}  {name}\n", sha256_hex(bytes)))
        .collect()
}

pub(crate) fn verify_checksum(name: &str, bytes: &[u8], manifest: &str) -> Result<()> {
    let expected = manifest
        .lines()
        .find_map(|l| {
            let (sum, file) = l.split_once("  ")?;
            (file.trim() == name).then(|| sum.trim().to_string())
        })
        .ok_or_else(|| Error::Checksum {
            name: name.to_string(),
            expected: "<missing from manifest>".into(),
            actual: sha256_hex(bytes),
        })?;
    let actual = sha256_hex(bytes);
    if actual != expected {
        return Err(Error::Checksum {
            name: name.to_string(),
            expected,
            actual,
        });
    }
    Ok(())
}

pub(crate) fn parse_fixture(fixture: Fixture, bytes: &[u8]) -> Result<LeaderboardSample> {
    parse_leaderboard(
        bytes,
        std::path::Path::new(&fixture.file_name()),
        &fixture.design(),
    )
}

const MANIFEST: &str = include_str!("../../fixtures/SHA256SUMS");

impl Fixture {
    /// Bundled CSV bytes.
    pub fn bytes(&self) -> &'static [u8] {
        match self {
            Fixture::Obesity => include_bytes!("../../fixtures/obesity.csv"),
            Fixture::Cassava => include_bytes!("../../fixtures/cassava.csv"),
            Fixture::Melanoma => include_bytes!("../../fixtures/melanoma.csv"),
        }
    }

    /// Location of the fixture in the source tree.
    pub fn source_path(&self) -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("fixtures")
            .join(self.file_name())
    }

    /// Parses the bundled fixture after verifying its checksum.
    pub fn load(&self) -> Result<LeaderboardSample> {
        verify_checksum(&self.file_name(), self.bytes(), MANIFEST)?;
        parse_fixture(*self, self.bytes())
    }
}

/// Checks `bytes` against the entry for `name` in a `SHA256SUMS` manifest.
pub fn verify_against_manifest(name: &str, bytes: &[u8], manifest: &str) -> Result<()> {
    verify_checksum(name, bytes, manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_generator() {
        for f in Fixture::ALL {
            assert_eq!(
                f.generate_csv().unwrap(),
                f.bytes(),
                "{} is stale",
                f.name()
            );
        }
    }

    #[test]
    fn loads_with_checksum() {
        for f in Fixture::ALL {
            assert_eq!(f.load().unwrap(), f.generate().unwrap());
        }
    }

    #[test]
    fn tampering_is_detected() {
        let mut bytes = Fixture::Cassava.bytes().to_vec();
        let last = bytes.len() - 2;
        bytes[last] = if bytes[last] == b'1' { b'2' } else { b'1' };
        let err = verify_against_manifest("cassava.csv", &bytes, MANIFEST).unwrap_err();
        assert!(matches!(err, Error::Checksum { .. }));
        assert!(verify_against_manifest("other.csv", &bytes, MANIFEST).is_err());
    }

    #[test]
    fn shapes() {
        let o = Fixture::Obesity.generate().unwrap();
        assert_eq!(o.max_score(), 12616.0 / 13840.0);
        assert_eq!(o.teams_above(0.9062), 1134);
        assert_eq!(o.teams_above(0.9026), 1844);
        let m = Fixture::Melanoma.generate().unwrap();
        assert_eq!(m.max_score(), 0.949);
        assert_eq!(m.teams_above(0.8975), 2022);
        assert_eq!(m.scores().iter().filter(|&&s| s > 0.5).count(), 3173);
    }

    /// Rewrites the bundled files and manifest from the generator.
    #[test]
    #[ignore]
    fn regenerate_fixture_files() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let mut files = Vec::new();
        for f in Fixture::ALL {
            let bytes = f.generate_csv().unwrap();
            std::fs::write(dir.join(f.file_name()), &bytes).unwrap();
            files.push((f.file_name(), bytes));
        }
        std::fs::write(dir.join("SHA256SUMS"), checksum_manifest(&files)).unwrap();
    }
}
