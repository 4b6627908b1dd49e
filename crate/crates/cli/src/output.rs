//! Table emission: CSV behind a `#` metadata block, or JSON lines whose
//! first object carries the metadata. No timestamps, so identical inputs
//! give identical bytes.

use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub config_sha256: String,
    pub seed: u64,
    pub omega: f64,
    pub omega_source: String,
}

impl Metadata {
    fn entries(&self) -> [(&'static str, String); 7] {
        [
            ("tool", self.tool.clone()),
            ("version", self.version.clone()),
            ("experiment", self.experiment.clone()),
            ("config_sha256", self.config_sha256.clone()),
            ("seed", self.seed.to_string()),
            ("omega", self.omega.to_string()),
            ("omega_source", self.omega_source.clone()),
        ]
    }
}

/// SHA-256 of the canonical JSON form of `value`.
pub fn config_hash<T: Serialize>(value: &T) -> Result<String> {
    let canonical = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&canonical)))
}

pub fn write_table<W: Write, R: Serialize>(
    mut out: W,
    format: Format,
    meta: &Metadata,
    rows: &[R],
) -> Result<()> {
    match format {
        Format::Csv => {
            for (key, value) in meta.entries() {
                writeln!(out, "# {key}: {value}")?;
            }
            let mut writer = csv::Writer::from_writer(&mut out);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::JsonLines => {
            serde_json::to_writer(&mut out, &serde_json::json!({ "metadata": meta }))?;
            writeln!(out)?;
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: f64,
        b: Option<f64>,
    }

    fn meta() -> Metadata {
        Metadata {
            tool: "mrcwpt".into(),
            version: "0".into(),
            experiment: "test".into(),
            config_sha256: config_hash(&1u8).unwrap(),
            seed: 7,
            omega: 1.5,
            omega_source: "given".into(),
        }
    }

    #[test]
    fn csv_has_metadata_header_and_empty_options() {
        let mut buf = Vec::new();
        let rows = [
            Row { a: 1.0, b: None },
            Row {
                a: 0.5,
                b: Some(2.0),
            },
        ];
        write_table(&mut buf, Format::Csv, &meta(), &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# tool: mrcwpt");
        assert!(lines.contains(&"# seed: 7"));
        let body: Vec<&str> = lines
            .iter()
            .copied()
            .filter(|l| !l.starts_with('#'))
            .collect();
        assert_eq!(body, vec!["a,b", "1.0,", "0.5,2.0"]);
    }

    #[test]
    fn json_lines_lead_with_metadata() {
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            Format::JsonLines,
            &meta(),
            &[Row { a: 1.0, b: None }],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines[0]["metadata"]["seed"], 7);
        assert_eq!(lines[1]["a"], 1.0);
        assert!(lines[1]["b"].is_null());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        assert_eq!(
            config_hash(&(1, "a")).unwrap(),
            config_hash(&(1, "a")).unwrap()
        );
        assert_ne!(
            config_hash(&(1, "a")).unwrap(),
            config_hash(&(2, "a")).unwrap()
        );
        assert_eq!(config_hash(&1u8).unwrap().len(), 64);
    }
}
