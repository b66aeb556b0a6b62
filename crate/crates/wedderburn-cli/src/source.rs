//! Input loading: groups from the built-in catalog or from permutation
//! generator files, subgroups from element-index lists, and external
//! Schur-index oracle files.

use std::collections::BTreeMap;
use std::path::Path;

use wedderburn_core::catalog::catalog_group;
use wedderburn_core::catalog::catalog_names;
use wedderburn_core::{FiniteGroup, OracleVerdict, Permutation, Subgroup};

use crate::fail::{CliResult, Failure};
use crate::json::GroupFileJson;

/// A group ready for analysis, with a stable name and, where known, named
/// generators (element indices) to help address subgroups.
pub struct LoadedGroup {
    pub name: String,
    pub group: FiniteGroup,
    pub generator_names: Vec<(String, u32)>,
}

/// Loads the group from exactly one of `--catalog NAME` or `--group FILE`.
pub fn load_group(catalog: Option<&str>, file: Option<&Path>) -> CliResult<LoadedGroup> {
    match (catalog, file) {
        (Some(name), None) => {
            let entry = catalog_group(name).ok_or_else(|| {
                Failure::input(format!(
                    "unknown catalog group {name:?}; available: {}",
                    catalog_names().join(", ")
                ))
            })?;
            Ok(LoadedGroup {
                name: entry.name.to_string(),
                group: entry.group,
                generator_names: entry
                    .generators
                    .iter()
                    .map(|(n, i)| (n.to_string(), *i))
                    .collect(),
            })
        }
        (None, Some(path)) => load_group_file(path),
        _ => Err(Failure::input(
            "choose exactly one group source: --catalog NAME or --group FILE",
        )),
    }
}

fn load_group_file(path: &Path) -> CliResult<LoadedGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: GroupFileJson = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{} is not a valid group file: {e}", path.display())))?;
    if parsed.degree == 0 {
        return Err(Failure::input("group file degree must be positive"));
    }
    if parsed.generators.is_empty() {
        return Err(Failure::input("group file needs at least one generator"));
    }
    let degree = parsed.degree as usize;
    let mut perms = Vec::with_capacity(parsed.generators.len());
    for (i, images) in parsed.generators.iter().enumerate() {
        if images.len() != degree {
            return Err(Failure::input(format!(
                "generator {i} has {} images, expected {degree}",
                images.len()
            )));
        }
        let mut seen = vec![false; degree];
        for &img in images {
            if img as usize >= degree || seen[img as usize] {
                return Err(Failure::input(format!(
                    "generator {i} is not a permutation of 0..{degree}"
                )));
            }
            seen[img as usize] = true;
        }
        perms.push(Permutation::new(images.clone()));
    }
    let (group, elements) = FiniteGroup::from_permutations(&perms);
    let generator_names = perms
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let idx = elements
                .iter()
                .position(|e| e == p)
                .expect("every generator is enumerated") as u32;
            (format!("g{i}"), idx)
        })
        .collect();
    let name = parsed.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| String::from("group"))
    });
    Ok(LoadedGroup {
        name,
        group,
        generator_names,
    })
}

/// Parses a comma-separated element index list such as `1,4,7`.
pub fn parse_indices(what: &str, s: &str) -> CliResult<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let idx: u32 = part
            .parse()
            .map_err(|_| Failure::input(format!("{what}: {part:?} is not an element index")))?;
        out.push(idx);
    }
    if out.is_empty() {
        return Err(Failure::input(format!(
            "{what}: expected at least one element index"
        )));
    }
    Ok(out)
}

/// Closes a generator list into a subgroup, checking index bounds.
pub fn subgroup_from_indices(
    group: &FiniteGroup,
    what: &str,
    indices: &[u32],
) -> CliResult<Subgroup> {
    for &i in indices {
        if i >= group.order() {
            return Err(Failure::input(format!(
                "{what}: element index {i} is out of range for a group of order {}",
                group.order()
            )));
        }
    }
    Ok(group.closure(indices))
}

/// The oracle key for a component: group name plus the sorted member lists
/// of `H` and `K`.
pub fn component_key(name: &str, h: &Subgroup, k: &Subgroup) -> String {
    format!(
        "g={name};H={};K={}",
        join_indices(h.members()),
        join_indices(k.members())
    )
}

/// Replaces filesystem-hostile characters in a name with underscores.
pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn join_indices(members: &[u32]) -> String {
    members
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Loads an oracle file: a JSON object mapping component keys to either the
/// string `"split"` or a prime Schur index as an integer.
pub fn load_oracle(path: &Path) -> CliResult<BTreeMap<String, OracleVerdict>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let raw: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{} is not a valid oracle file: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (key, value) in raw {
        let verdict = match &value {
            serde_json::Value::String(s) if s == "split" => OracleVerdict::Split,
            serde_json::Value::Number(n) => {
                let p = n.as_u64().ok_or_else(|| {
                    Failure::input(format!("oracle entry {key:?}: index must be a positive integer"))
                })?;
                if p < 2 {
                    return Err(Failure::input(format!(
                        "oracle entry {key:?}: a Schur index must be at least 2"
                    )));
                }
                OracleVerdict::Index(p)
            }
            _ => {
                return Err(Failure::input(format!(
                    "oracle entry {key:?}: expected \"split\" or an integer index"
                )))
            }
        };
        out.insert(key, verdict);
    }
    Ok(out)
}
