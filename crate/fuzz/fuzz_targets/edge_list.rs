#![no_main]
use graph_hessian::graphs::{laplacian, parse_edge_list, tree_count_cofactor};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = parse_edge_list(text) else {
        return;
    };
    let again = parse_edge_list(&g.to_edge_list()).expect("serialized graph must parse");
    if again != g {
        panic!("round trip failed:\n{text}\n---\n{}", g.to_edge_list());
    }
    // Keep the exact arithmetic cheap.
    if g.vertex_count() <= 8 && g.edge_count() <= 16 {
        let l = laplacian(&g);
        assert_eq!(l.rows(), g.vertex_count());
        let count = tree_count_cofactor(&g);
        assert_eq!(count > 0.into(), g.is_connected());
    }
});
