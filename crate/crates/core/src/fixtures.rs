//! Named example graphs.

use crate::graph::{parse_adjacency, Graph};

/// 4-cycle 1-2-3-4-1.
pub const C4: &str = "0 1 0 1
1 0 1 0
0 1 0 1
1 0 1 0";

/// 4-cycle 1-3-2-4-1.
pub const M2: &str = "0 0 1 1
0 0 1 1
1 1 0 0
1 1 0 0";

/// Path 1-2-3-4.
pub const M3: &str = "0 1 0 0
1 0 1 0
0 1 0 1
0 0 1 0";

/// Inner pentagon 1..5, spokes i–(i+5), outer pentagram.
pub const PETERSEN: &str = "0 1 0 0 1 1 0 0 0 0
1 0 1 0 0 0 1 0 0 0
0 1 0 1 0 0 0 1 0 0
0 0 1 0 1 0 0 0 1 0
1 0 0 1 0 0 0 0 0 1
1 0 0 0 0 0 0 1 1 0
0 1 0 0 0 0 0 0 1 1
0 0 1 0 0 1 0 0 0 1
0 0 0 1 0 1 1 0 0 0
0 0 0 0 1 0 1 1 0 0";

/// Inner pentagon 1..5, spokes i–(i+5), outer pentagon 6..10.
pub const PRISM5: &str = "0 1 0 0 1 1 0 0 0 0
1 0 1 0 0 0 1 0 0 0
0 1 0 1 0 0 0 1 0 0
0 0 1 0 1 0 0 0 1 0
1 0 0 1 0 0 0 0 0 1
1 0 0 0 0 0 1 0 0 1
0 1 0 0 0 1 0 1 0 0
0 0 1 0 0 0 1 0 1 0
0 0 0 1 0 0 0 1 0 1
0 0 0 0 1 1 0 0 1 0";

/// Triangle 1-2-7 sharing the edge 1-2 with the 6-cycle 1-2-3-4-5-6.
pub const G1: &str = "0 1 0 0 0 1 1
1 0 1 0 0 0 1
0 1 0 1 0 0 0
0 0 1 0 1 0 0
0 0 0 1 0 1 0
1 0 0 0 1 0 0
1 1 0 0 0 0 0";

/// 4-cycle 1-2-3-4 bridged by 1-5 to the triangle 5-6-7.
pub const G2: &str = "0 1 0 1 1 0 0
1 0 1 0 0 0 0
0 1 0 1 0 0 0
1 0 1 0 0 0 0
1 0 0 0 0 1 1
0 0 0 0 1 0 1
0 0 0 0 1 1 0";

/// Star with centre 0 and four leaves.
pub const STAR_K14: &str = "5; 0 1; 0 2; 0 3; 0 4";

/// 4-cycle plus an isolated vertex.
pub const C4_K1: &str = "5; 0 1; 1 2; 2 3; 0 3";

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "c4", "m1", "m2", "m3", "petersen", "prism5", "g1", "g2", "k14", "c4k1",
];

fn matrix(text: &str) -> Graph {
    parse_adjacency(text).expect("fixture matrix is valid")
}

pub fn c4() -> Graph {
    matrix(C4)
}

pub fn m2() -> Graph {
    matrix(M2)
}

pub fn m3() -> Graph {
    matrix(M3)
}

pub fn petersen() -> Graph {
    matrix(PETERSEN)
}

pub fn prism5() -> Graph {
    matrix(PRISM5)
}

pub fn g1() -> Graph {
    matrix(G1)
}

pub fn g2() -> Graph {
    matrix(G2)
}

pub fn star_k14() -> Graph {
    crate::graph::parse_edge_list(STAR_K14).expect("fixture edge list is valid")
}

pub fn c4_k1() -> Graph {
    crate::graph::parse_edge_list(C4_K1).expect("fixture edge list is valid")
}

/// Looks up a fixture by (case-insensitive) name.
pub fn by_name(name: &str) -> Option<Graph> {
    Some(match name.to_ascii_lowercase().as_str() {
        "c4" | "m1" => c4(),
        "m2" => m2(),
        "m3" => m3(),
        "petersen" => petersen(),
        "prism5" => prism5(),
        "g1" => g1(),
        "g2" => g2(),
        "k14" => star_k14(),
        "c4k1" => c4_k1(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            assert!(by_name(name).is_some(), "{name}");
        }
        assert!(by_name("PETERSEN").is_some());
        assert!(by_name("k5").is_none());
    }

    #[test]
    fn cubic_fixtures() {
        for g in [petersen(), prism5()] {
            assert_eq!(g.edge_count(), 15);
            assert!((0..10).all(|v| g.degree(v) == 3));
        }
        assert_eq!(g1().edge_count(), 8);
        assert_eq!(g2().edge_count(), 8);
    }
}
