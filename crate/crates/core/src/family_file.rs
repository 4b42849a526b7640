//! Line-oriented text format for set families.
//!
//! ```text
//! # Z_13, cyclotomic classes of order 3
//! group cyclic 13
//! digraph cycle*:3
//! set 1 5 8 12
//! set 2 3 10 11
//! set 4 6 7 9
//! end
//! ```
//!
//! Optional lines are `digraph SPEC`, `mode disjoint|adjacent-disjoint` and
//! `variant NAME` (one of the classical variants, e.g. `sedf` or `cedf:2`).
//! They must come before the first `set` line.

use std::fmt::Write as _;

use crate::diffcore::{DisjointMode, SetFamily, Variant};
use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupSpec};

#[derive(Debug, Clone)]
pub struct FamilyFile {
    pub group: Group,
    pub digraph: Option<LabelledDigraph>,
    pub mode: Option<DisjointMode>,
    pub variant: Option<Variant>,
    pub family: SetFamily,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Byte column (1-based) of each whitespace-separated token.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

pub fn parse_family_file(text: &str) -> Result<FamilyFile> {
    let mut group: Option<Group> = None;
    let mut digraph = None;
    let mut mode = None;
    let mut variant = None;
    let mut sets = Vec::new();
    let mut ended = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        if keyword.starts_with('#') {
            continue;
        }
        if ended {
            return Err(err(lineno, col, "content after `end`"));
        }
        let rest_col = toks.get(1).map_or(raw.len() + 1, |t| t.0);
        let rest = raw[rest_col - 1..].trim();
        match keyword {
            "group" => {
                if group.is_some() {
                    return Err(err(lineno, col, "duplicate `group` line"));
                }
                let spec = GroupSpec::parse(rest).map_err(|e| err(lineno, rest_col, e.to_string()))?;
                group = Some(Group::new(spec).map_err(|e| err(lineno, rest_col, e.to_string()))?);
            }
            "digraph" | "mode" | "variant" if !sets.is_empty() => {
                return Err(err(lineno, col, format!("`{keyword}` must come before the sets")));
            }
            "digraph" => {
                digraph = Some(LabelledDigraph::parse(rest).map_err(|e| err(lineno, rest_col, e.to_string()))?);
            }
            "mode" => {
                mode = Some(match rest {
                    "disjoint" => DisjointMode::Disjoint,
                    "adjacent-disjoint" => DisjointMode::AdjacentDisjoint,
                    _ => return Err(err(lineno, rest_col, format!("unknown mode `{rest}`"))),
                });
            }
            "variant" => {
                variant = Some(
                    rest.parse::<Variant>()
                        .map_err(|e| err(lineno, rest_col, e.to_string()))?,
                );
            }
            "set" => {
                let g = group.as_ref().ok_or_else(|| err(lineno, col, "`set` before `group`"))?;
                let mut set = Vec::new();
                for &(c, tok) in &toks[1..] {
                    let e = g.parse_element(tok).map_err(|e| err(lineno, c, e.to_string()))?;
                    if set.contains(&e) {
                        return Err(err(lineno, c, format!("duplicate element `{tok}` in set")));
                    }
                    set.push(e);
                }
                if set.is_empty() {
                    return Err(err(lineno, col, "empty set"));
                }
                sets.push(set);
            }
            "end" => ended = true,
            other => return Err(err(lineno, col, format!("unknown keyword `{other}`"))),
        }
    }

    let group = group.ok_or_else(|| err(last_line.max(1), 1, "missing `group` line"))?;
    if sets.is_empty() {
        return Err(err(last_line.max(1), 1, "no sets"));
    }
    if !ended {
        return Err(err(last_line + 1, 1, "missing `end`"));
    }
    Ok(FamilyFile {
        group,
        digraph,
        mode,
        variant,
        family: SetFamily::new(sets)?,
    })
}

pub fn emit_family_file(ff: &FamilyFile) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", ff.group.spec()).unwrap();
    if let Some(h) = &ff.digraph {
        writeln!(out, "digraph {h}").unwrap();
    }
    if let Some(m) = ff.mode {
        let name = match m {
            DisjointMode::Disjoint => "disjoint",
            DisjointMode::AdjacentDisjoint => "adjacent-disjoint",
        };
        writeln!(out, "mode {name}").unwrap();
    }
    if let Some(v) = ff.variant {
        writeln!(out, "variant {v}").unwrap();
    }
    for set in ff.family.sets() {
        out.push_str("set");
        for &e in set {
            out.push(' ');
            out.push_str(&ff.group.format_element(e));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}
