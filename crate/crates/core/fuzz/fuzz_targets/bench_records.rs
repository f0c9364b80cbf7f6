#![no_main]

use libfuzzer_sys::fuzz_target;
use logicsat_cli::bench::{parse_records, render_table};
use logicsat_cli::record::to_line;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = parse_records(text) else { return };
    let table = render_table(&records);
    let reencoded: String = records.iter().map(|r| to_line(r) + "\n").collect();
    let again = parse_records(&reencoded).expect("encoded records decode");
    assert_eq!(render_table(&again), table);
});
