//! Shipped generator files and character tables.

use crate::chartab::{parse_table, CharacterTable};
use crate::permgroup::GroupSpec;

pub const GROUPS: &[(&str, &str)] = &[
    ("C2", include_str!("../fixtures/groups/C2.gens")),
    ("C3", include_str!("../fixtures/groups/C3.gens")),
    ("C4", include_str!("../fixtures/groups/C4.gens")),
    ("C5", include_str!("../fixtures/groups/C5.gens")),
    ("S3", include_str!("../fixtures/groups/S3.gens")),
    ("A4", include_str!("../fixtures/groups/A4.gens")),
    ("Q8", include_str!("../fixtures/groups/Q8.gens")),
    ("A5", include_str!("../fixtures/groups/A5.gens")),
    ("A6", include_str!("../fixtures/groups/A6.gens")),
    ("A7", include_str!("../fixtures/groups/A7.gens")),
    ("A8", include_str!("../fixtures/groups/A8.gens")),
    ("A9", include_str!("../fixtures/groups/A9.gens")),
    ("PSL2_7", include_str!("../fixtures/groups/PSL2_7.gens")),
];

pub const TABLES: &[(&str, &str)] = &[
    ("C2", include_str!("../fixtures/tables/C2.json")),
    ("C3", include_str!("../fixtures/tables/C3.json")),
    ("C4", include_str!("../fixtures/tables/C4.json")),
    ("C5", include_str!("../fixtures/tables/C5.json")),
    ("S3", include_str!("../fixtures/tables/S3.json")),
    ("A4", include_str!("../fixtures/tables/A4.json")),
    ("Q8", include_str!("../fixtures/tables/Q8.json")),
    ("A5", include_str!("../fixtures/tables/A5.json")),
    ("PSL2_7", include_str!("../fixtures/tables/PSL2_7.json")),
];

pub fn group_text(name: &str) -> Option<&'static str> {
    GROUPS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn table_text(name: &str) -> Option<&'static str> {
    TABLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parsed generator file. Panics on unknown names; the shipped files parse.
pub fn group(name: &str) -> GroupSpec {
    GroupSpec::parse(group_text(name).unwrap_or_else(|| panic!("no group fixture {name}"))).expect("fixture parses")
}

/// Parsed and validated table. Panics on unknown names.
pub fn table(name: &str) -> CharacterTable {
    parse_table(table_text(name).unwrap_or_else(|| panic!("no table fixture {name}"))).expect("fixture validates")
}
