//! Stable homotopy groups of spheres through the 7-stem, plus opt-in
//! extensions from a user-supplied JSON file.
//!
//! The built-in table is frozen; extensions may only add stems above 7 and
//! must carry a provenance string per entry.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::group::FinAbGroup;
use super::SpecSeqError;

/// Largest stem in the built-in table.
pub const BUILTIN_MAX_STEM: u32 = 7;

#[derive(Clone, Debug)]
pub struct StemEntry {
    pub group: FinAbGroup,
    pub source: String,
}

/// Lookup table `n -> pi^s(n)`.
#[derive(Clone, Debug)]
pub struct StableStemTable {
    entries: BTreeMap<u32, StemEntry>,
}

impl StableStemTable {
    /// The classical values through the 7-stem (first computed by Serre and
    /// Toda; tabulated in Toda's 1962 book).
    pub fn builtin() -> Self {
        const SOURCE: &str = "built-in: classical values through the 7-stem (Toda 1962)";
        let groups: [(u32, FinAbGroup); 8] = [
            (0, FinAbGroup::free(1)),
            (1, FinAbGroup::cyclic(2)),
            (2, FinAbGroup::cyclic(2)),
            (3, FinAbGroup::cyclic(24)),
            (4, FinAbGroup::trivial()),
            (5, FinAbGroup::trivial()),
            (6, FinAbGroup::cyclic(2)),
            (7, FinAbGroup::cyclic(240)),
        ];
        let entries = groups
            .into_iter()
            .map(|(n, group)| {
                (
                    n,
                    StemEntry {
                        group,
                        source: SOURCE.to_string(),
                    },
                )
            })
            .collect();
        Self { entries }
    }

    /// `pi^s(n)`, or a loud error naming the missing stem.
    pub fn stem(&self, n: u32) -> Result<&FinAbGroup, SpecSeqError> {
        self.entries
            .get(&n)
            .map(|entry| &entry.group)
            .ok_or(SpecSeqError::StemUnknown(n))
    }

    pub fn entry(&self, n: u32) -> Option<&StemEntry> {
        self.entries.get(&n)
    }

    pub fn max_stem(&self) -> u32 {
        *self.entries.keys().next_back().expect("table never empty")
    }

    /// Merge extension entries parsed from the JSON map
    /// `{"n": {"free_rank": r, "torsion": [q..], "source": "..."}, ...}`.
    /// Entries at or below the built-in range are rejected.
    pub fn load_extension_str(&mut self, json: &str) -> Result<(), SpecSeqError> {
        #[derive(Deserialize)]
        struct RawEntry {
            free_rank: u32,
            torsion: Vec<u64>,
            source: String,
        }
        let raw: BTreeMap<String, RawEntry> = serde_json::from_str(json)
            .map_err(|e| SpecSeqError::ExtensionInvalid(e.to_string()))?;
        for (key, entry) in raw {
            let n: u32 = key
                .parse()
                .map_err(|_| SpecSeqError::ExtensionInvalid(format!("bad stem key '{key}'")))?;
            if n <= BUILTIN_MAX_STEM {
                return Err(SpecSeqError::ExtensionOverlap(n));
            }
            if entry.source.trim().is_empty() {
                return Err(SpecSeqError::ExtensionInvalid(format!(
                    "stem {n} has no source string"
                )));
            }
            let group = FinAbGroup::from_parts(entry.free_rank, entry.torsion)?;
            self.entries.insert(
                n,
                StemEntry {
                    group,
                    source: entry.source,
                },
            );
        }
        Ok(())
    }

    pub fn load_extension_file(&mut self, path: &Path) -> Result<(), SpecSeqError> {
        let json = fs::read_to_string(path)
            .map_err(|e| SpecSeqError::ExtensionInvalid(format!("{}: {e}", path.display())))?;
        self.load_extension_str(&json)
    }
}

impl Default for StableStemTable {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        let table = StableStemTable::builtin();
        assert_eq!(table.stem(0).unwrap(), &FinAbGroup::free(1));
        assert_eq!(table.stem(1).unwrap(), &FinAbGroup::cyclic(2));
        assert_eq!(table.stem(2).unwrap(), &FinAbGroup::cyclic(2));
        assert_eq!(table.stem(3).unwrap(), &FinAbGroup::cyclic(24));
        assert_eq!(table.stem(4).unwrap(), &FinAbGroup::trivial());
        assert_eq!(table.stem(5).unwrap(), &FinAbGroup::trivial());
        assert_eq!(table.stem(6).unwrap(), &FinAbGroup::cyclic(2));
        assert_eq!(table.stem(7).unwrap(), &FinAbGroup::cyclic(240));
        assert_eq!(table.stem(8), Err(SpecSeqError::StemUnknown(8)));
        assert_eq!(table.max_stem(), 7);
    }

    #[test]
    fn extension_loading() {
        let mut table = StableStemTable::builtin();
        table
            .load_extension_str(
                r#"{"8": {"free_rank": 0, "torsion": [2, 2], "source": "Toda 1962"}}"#,
            )
            .unwrap();
        assert_eq!(
            table.stem(8).unwrap(),
            &FinAbGroup::from_parts(0, vec![2, 2]).unwrap()
        );
        assert_eq!(table.max_stem(), 8);
    }

    #[test]
    fn extension_cannot_override_builtin() {
        let mut table = StableStemTable::builtin();
        let err = table
            .load_extension_str(r#"{"3": {"free_rank": 0, "torsion": [3], "source": "x"}}"#)
            .unwrap_err();
        assert_eq!(err, SpecSeqError::ExtensionOverlap(3));
    }

    #[test]
    fn extension_requires_source_and_prime_powers() {
        let mut table = StableStemTable::builtin();
        assert!(table
            .load_extension_str(r#"{"9": {"free_rank": 0, "torsion": [2], "source": ""}}"#)
            .is_err());
        assert!(table
            .load_extension_str(r#"{"9": {"free_rank": 0, "torsion": [6], "source": "x"}}"#)
            .is_err());
    }
}
