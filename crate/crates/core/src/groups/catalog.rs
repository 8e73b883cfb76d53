//! Built-in groups and extensions.

use serde::Serialize;

use super::{FiniteGroup, GroupExtension, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

/// Largest `|Q|` for which split detection is attempted.
pub const SPLIT_SEARCH_MAX_Q: usize = 24;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub extension: GroupExtension,
    pub split: Option<bool>,
}

const ENTRIES: &[(&str, &str)] = &[
    ("z2xz2", "Z2 x Z2 as a direct product over Z2"),
    ("z2xs3", "Z2 x S3 as a direct product over S3"),
    ("s3_split", "S3 as Z3 by Z2 acting by inversion"),
    ("d4_split", "D4 as Z4 by Z2 acting by inversion"),
    ("q8_over_k4", "Q8 over Z2 x Z2 with kernel its center"),
    ("s4_over_s3", "S4 over S3 with kernel the Klein four group"),
    ("s3xz2_over_z2", "S3 x Z2 over Z2 with kernel S3"),
    ("s4_over_z2", "S4 over Z2 with kernel A4"),
    ("z4_over_z2", "Z4 over Z2 with kernel Z2"),
    ("z3_over_trivial", "Z3 over the trivial group"),
];

pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

pub fn catalog() -> Vec<CatalogEntry> {
    ENTRIES
        .iter()
        .map(|e| catalog_entry(e.0).expect("catalog entries build"))
        .collect()
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    let (name, description) = *ENTRIES
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown catalog entry '{name}'")))?;
    let extension = build(name)?;
    let split = extension.is_split(SPLIT_SEARCH_MAX_Q);
    Ok(CatalogEntry {
        name,
        description,
        extension,
        split,
    })
}

fn inversion(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()]
}

fn trivial_action(g: &FiniteGroup, q: &FiniteGroup) -> Vec<Vec<usize>> {
    vec![(0..g.order()).collect(); q.order()]
}

fn build(name: &str) -> Result<GroupExtension> {
    let z2 = FiniteGroup::cyclic(2);
    match name {
        "z2xz2" => GroupExtension::semidirect_product(&z2, &z2, &trivial_action(&z2, &z2)),
        "z2xs3" => {
            let s3 = named_group("S3")?;
            GroupExtension::semidirect_product(&z2, &s3, &trivial_action(&z2, &s3))
        }
        "s3_split" => GroupExtension::semidirect_product(&FiniteGroup::cyclic(3), &z2, &inversion(3)),
        "d4_split" => GroupExtension::semidirect_product(&FiniteGroup::cyclic(4), &z2, &inversion(4)),
        "q8_over_k4" => GroupExtension::from_quotient(&named_group("Q8")?, &[0, 4]),
        "s4_over_s3" => {
            let (s4, perms) = s4_with_perms();
            let v4: Vec<usize> = (0..s4.order())
                .filter(|&x| x == 0 || (0..4).all(|i| perms[x][i] != i && perms[x][perms[x][i]] == i))
                .collect();
            GroupExtension::from_quotient(&s4, &v4)
        }
        "s3xz2_over_z2" => {
            let h = named_group("S3")?.direct_product(&z2);
            GroupExtension::from_quotient(&h, &(0..6).collect::<Vec<_>>())
        }
        "s4_over_z2" => {
            let (s4, perms) = s4_with_perms();
            let a4: Vec<usize> = (0..s4.order()).filter(|&x| is_even(&perms[x])).collect();
            GroupExtension::from_quotient(&s4, &a4)
        }
        "z4_over_z2" => GroupExtension::from_quotient(&FiniteGroup::cyclic(4), &[0, 2]),
        "z3_over_trivial" => GroupExtension::from_quotient(&FiniteGroup::cyclic(3), &[0, 1, 2]),
        _ => Err(Error::InvalidInput(format!("unknown catalog entry '{name}'"))),
    }
}

fn is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut x = start;
        let mut len = 0;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

pub(crate) fn s4_with_perms() -> (FiniteGroup, Vec<Vec<usize>>) {
    FiniteGroup::permutation_closure("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], DEFAULT_ORDER_CAP)
        .expect("S4 closes")
}

/// Quaternion group with `+1, i, j, k, -1, -i, -j, -k` at indices `0..8`.
fn quaternion() -> FiniteGroup {
    // unit products: (sign, unit) for e_a e_b with 1, i, j, k = 0..3
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mul = (0..8)
        .map(|x: usize| {
            (0..8)
                .map(|y: usize| {
                    let (s, u) = UNIT[x % 4][y % 4];
                    ((x / 4 + y / 4 + s) % 2) * 4 + u
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_valid_table("Q8", mul)
}

/// Small named groups: `1`/`trivial`, `Z<n>`, `V4`/`K4`, `S3`, `S4`, `A4`,
/// `D4`, `Q8`.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let cap = DEFAULT_ORDER_CAP;
    match name {
        "1" | "trivial" => Ok(FiniteGroup::trivial()),
        "V4" | "K4" => Ok(FiniteGroup::cyclic(2)
            .direct_product(&FiniteGroup::cyclic(2))
            .renamed(name)),
        "S3" => FiniteGroup::from_permutation_generators("S3", 3, &[vec![1, 2, 0], vec![1, 0, 2]], cap),
        "S4" => Ok(s4_with_perms().0),
        "A4" => FiniteGroup::from_permutation_generators("A4", 4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]], cap),
        "D4" => FiniteGroup::from_permutation_generators("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], cap),
        "Q8" => Ok(quaternion()),
        _ => match name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n > 0 => Ok(FiniteGroup::cyclic(n)),
            _ => Err(Error::InvalidInput(format!("unknown group '{name}'"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_and_validates() {
        let entries = catalog();
        assert!(entries.len() >= 8);
        for e in &entries {
            e.extension.validate().unwrap();
            assert_eq!(e.extension.h.order(), e.extension.g.order() * e.extension.q.order());
        }
    }

    #[test]
    fn split_flags() {
        let split: Vec<(&str, Option<bool>)> = catalog().iter().map(|e| (e.name, e.split)).collect();
        for (name, expected) in [
            ("z2xz2", true),
            ("s3_split", true),
            ("d4_split", true),
            ("q8_over_k4", false),
            ("s4_over_s3", true),
            ("s4_over_z2", true),
            ("z4_over_z2", false),
        ] {
            let got = split.iter().find(|e| e.0 == name).unwrap().1;
            assert_eq!(got, Some(expected), "{name}");
        }
    }

    #[test]
    fn named_groups_have_expected_orders() {
        for (name, n) in [
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("D4", 8),
            ("Q8", 8),
            ("Z5", 5),
            ("V4", 4),
        ] {
            assert_eq!(named_group(name).unwrap().order(), n);
        }
        assert!(named_group("nope").is_err());
    }

    #[test]
    fn quaternion_is_a_group() {
        let q8 = quaternion();
        FiniteGroup::from_table("Q8", q8.table().to_vec()).unwrap();
        assert_eq!(q8.order_profile(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }
}
