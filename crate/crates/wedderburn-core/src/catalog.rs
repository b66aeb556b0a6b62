//! Built-in example groups addressable by name, with named generators.
//!
//! Every entry is constructed from cyclic building blocks via direct,
//! semidirect, and metacyclic products, so the multiplication tables are
//! validated at construction time.

use alloc::vec::Vec;
use alloc::vec;

use crate::group::FiniteGroup;

/// A named group together with named generator indices.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// The catalog name.
    pub name: &'static str,
    /// The constructed group.
    pub group: FiniteGroup,
    /// Named generators as `(name, element index)` pairs.
    pub generators: Vec<(&'static str, u32)>,
}

/// Names available in the catalog, in display order.
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "S3",
        "C4",
        "D4",
        "D5",
        "Q8",
        "Dic3",
        "A4",
        "C5:C4",
        "C7:C3",
        "Q8xC7:C3",
        "G1000_86",
    ]
}

/// Looks up and constructs a catalog group by name.
pub fn catalog_group(name: &str) -> Option<CatalogEntry> {
    let entry = match name {
        "S3" => CatalogEntry {
            name: "S3",
            group: FiniteGroup::metacyclic(3, 2, 0, 2),
            generators: vec![("a", 2), ("b", 1)],
        },
        "C4" => CatalogEntry {
            name: "C4",
            group: FiniteGroup::cyclic(4),
            generators: vec![("a", 1)],
        },
        "D4" => CatalogEntry {
            name: "D4",
            group: FiniteGroup::metacyclic(4, 2, 0, 3),
            generators: vec![("a", 2), ("b", 1)],
        },
        "D5" => CatalogEntry {
            name: "D5",
            group: FiniteGroup::metacyclic(5, 2, 0, 4),
            generators: vec![("a", 2), ("b", 1)],
        },
        "Q8" => CatalogEntry {
            name: "Q8",
            group: FiniteGroup::metacyclic(4, 2, 2, 3),
            generators: vec![("a", 2), ("b", 1)],
        },
        "Dic3" => CatalogEntry {
            name: "Dic3",
            group: FiniteGroup::metacyclic(6, 2, 3, 5),
            generators: vec![("a", 2), ("b", 1)],
        },
        "A4" => CatalogEntry {
            name: "A4",
            group: a4(),
            generators: vec![("v", 3), ("c", 1)],
        },
        "C5:C4" => CatalogEntry {
            name: "C5:C4",
            group: FiniteGroup::metacyclic(5, 4, 0, 2),
            generators: vec![("a", 4), ("b", 1)],
        },
        "C7:C3" => CatalogEntry {
            name: "C7:C3",
            group: FiniteGroup::metacyclic(7, 3, 0, 2),
            generators: vec![("a", 3), ("b", 1)],
        },
        "Q8xC7:C3" => {
            let q8 = FiniteGroup::metacyclic(4, 2, 2, 3);
            let f21 = FiniteGroup::metacyclic(7, 3, 0, 2);
            let order_f21 = f21.order();
            let group = FiniteGroup::direct_product(&q8, &f21);
            // Left factor index scales by |F21|.
            CatalogEntry {
                name: "Q8xC7:C3",
                group,
                generators: vec![
                    ("i", 2 * order_f21),
                    ("j", order_f21),
                    ("a", 3),
                    ("b", 1),
                ],
            }
        }
        "G1000_86" => CatalogEntry {
            name: "G1000_86",
            group: g1000_86(),
            generators: vec![("x", 200), ("y", 40), ("z", 8), ("w", 1)],
        },
        _ => return None,
    };
    Some(entry)
}

/// The alternating group on four letters as `V4` extended by a cycling
/// 3-element: index = v*3 + c.
fn a4() -> FiniteGroup {
    let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let c3 = FiniteGroup::cyclic(3);
    let act1 = [0u32, 3, 1, 2];
    let act2 = [0u32, 2, 3, 1];
    FiniteGroup::semidirect_product(&v4, &c3, |h, n| match h {
        0 => n,
        1 => act1[n as usize],
        _ => act2[n as usize],
    })
}

/// Order-1000 group `((C5 x C5) : C5) : C8` generated by x, y, z, w with
/// relations
/// `x^5 = y^5 = z^5 = w^8 = 1`, `xy = yx`, `xz = zx`, `yz = zyx`,
/// `w^-1 x w = x^2`, `w^-1 y w = z^3`, `w^-1 z w = y`.
///
/// Indices: the inner pair (a, b) of x/y exponents forms `m = a*5 + b`; the
/// z exponent c gives `n = m*5 + c`; the w exponent h gives `g = n*8 + h`.
fn g1000_86() -> FiniteGroup {
    let c5 = FiniteGroup::cyclic(5);
    let m = FiniteGroup::direct_product(&c5, &c5);
    // z acts on <x, y> by x -> x, y -> y x^4 (so that y z = z y x).
    let n = FiniteGroup::semidirect_product(&m, &c5, |c, m_idx| {
        let a = m_idx / 5;
        let b = m_idx % 5;
        ((a + 4 * b * c) % 5) * 5 + b
    });
    // One application of conjugation-inverse of w: x -> x^3, y -> z, z -> y^2,
    // written on normal forms x^a y^b z^c.
    let step = |n_idx: u32| -> u32 {
        let m_idx = n_idx / 5;
        let c = n_idx % 5;
        let a = m_idx / 5;
        let b = m_idx % 5;
        let new_a = (3 * a + 3 * b * c) % 5;
        let new_b = (2 * c) % 5;
        let new_c = b;
        (new_a * 5 + new_b) * 5 + new_c
    };
    let c8 = FiniteGroup::cyclic(8);
    FiniteGroup::semidirect_product(&n, &c8, |h, n_idx| {
        let mut x = n_idx;
        for _ in 0..h {
            x = step(x);
        }
        x
    })
}
