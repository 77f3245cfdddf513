#![no_main]
use graph_hessian_cli::{parse_edge_ids, parse_rationals};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(values) = parse_rationals(text) {
        let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
        let again = parse_rationals(&shown.join(",")).expect("printed rationals must parse");
        assert_eq!(again, values);
    }
    let _ = parse_edge_ids(text);
});
