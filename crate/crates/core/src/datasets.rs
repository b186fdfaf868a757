//! Small graphs bundled with the crate.

use crate::graph::{parse_edge_list_str, Graph};

const LES_MISERABLES: &str = include_str!("../data/lesmis.txt");

/// Les Misérables character co-appearance network (Knuth): 77 nodes,
/// 254 edges.
pub fn les_miserables() -> Graph {
    parse_edge_list_str(LES_MISERABLES)
        .expect("bundled edge list parses")
        .graph
}

#[cfg(test)]
mod tests {
    #[test]
    fn les_miserables_size() {
        let g = super::les_miserables();
        assert_eq!((g.node_count(), g.edge_count()), (77, 254));
    }
}
