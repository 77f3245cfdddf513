#![no_main]
use graph_hessian_cli::GraphDescriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(d) = text.parse::<GraphDescriptor>() else {
        return;
    };
    let shown = d.to_string();
    let again: GraphDescriptor = shown.parse().expect("displayed descriptor must parse");
    assert_eq!(again, d, "round trip failed for <{text}> via <{shown}>");
});
