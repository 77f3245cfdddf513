#![no_main]
use graph_hessian::kirchhoff::MultilinearPoly;
use libfuzzer_sys::fuzz_target;

// First byte picks the universe size, the rest is the polynomial text.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let universe: Vec<usize> = (0..usize::from(n % 70)).collect();
    let Ok(p) = MultilinearPoly::parse(text, universe.clone()) else {
        return;
    };
    let dumped = p.dump();
    let parsed = MultilinearPoly::parse(&dumped, universe).expect("dump must parse");
    if parsed != p {
        panic!("round trip failed:\n<{text}>\n<{dumped}>");
    }
});
