//! Read a JSON Lines series table, inspect it, and write it back canonically.

use seriesreal::format::{parse_log, read_series, AnySeries};
use seriesreal::scalar;

const LOG: &str = r#"{"truncation":2,"alphabet":{"pids":["u"],"labels":["lo","hi"],"generators":["a"]}}
{"id":"w0","word":[],"coeff":"1"}
{"id":"w1","word":[["u","hi","a"]],"coeff":"1/2"}
{"id":"w2","word":[["u","hi","a"],["u","lo","a"]],"coeff":"1/4"}
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = parse_log(LOG)?;
    println!("{} records, truncation {:?}", log.records.len(), log.truncation);
    for r in &log.records {
        println!("  line {} id {:?} coeff {:?}", r.line, r.id, r.coeff.as_ref().map(scalar::format));
    }
    match read_series(LOG)? {
        AnySeries::Labeled(p) => println!("labeled series with {} nonzero coefficients", p.support_len()),
        AnySeries::Simple(p) => println!("simple series with {} nonzero coefficients", p.support_len()),
    }
    print!("{}", log.emit());

    let dup = "{\"truncation\":1,\"generators\":[\"a\"]}\n{\"word\":[\"a\"],\"coeff\":\"1\"}\n{\"word\":[\"a\"],\"coeff\":\"2\"}\n";
    println!("as a log: {} records", parse_log(dup)?.records.len());
    if let Err(e) = read_series(dup) {
        println!("as a series: {e}");
    }
    Ok(())
}
