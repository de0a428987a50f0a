//! Append-only JSON-lines result cache. Each line is `<json>\t<sha256>`;
//! lines whose checksum does not match are skipped with a warning.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Key {
    pub quantity: String,
    pub g: u32,
    pub lambda: String,
    pub mu: String,
    #[serde(default)]
    pub split: Option<String>,
    #[serde(default)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub timestamp: u64,
    pub budget_used: u64,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: Key,
    pub value: String,
    pub meta: Meta,
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<Key, ResultRecord>,
}

fn checksum(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (n, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec = line
                    .rsplit_once('\t')
                    .filter(|(json, sum)| checksum(json) == *sum)
                    .and_then(|(json, _)| serde_json::from_str::<ResultRecord>(json).ok());
                match rec {
                    Some(rec) => {
                        entries.insert(rec.key.clone(), rec);
                    }
                    None => eprintln!("warning: {}:{}: corrupt cache line skipped", path.display(), n + 1),
                }
            }
        }
        Ok(Cache { path: path.to_path_buf(), entries })
    }

    pub fn get(&self, key: &Key) -> Option<&str> {
        self.entries.get(key).map(|r| r.value.as_str())
    }

    pub fn put(&mut self, key: Key, value: String, budget_used: u64) -> std::io::Result<()> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let rec = ResultRecord {
            key: key.clone(),
            value,
            meta: Meta {
                timestamp,
                budget_used,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        };
        let json = serde_json::to_string(&rec).map_err(std::io::Error::other)?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{json}\t{}", checksum(&json))?;
        self.entries.insert(key, rec);
        Ok(())
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }
}
