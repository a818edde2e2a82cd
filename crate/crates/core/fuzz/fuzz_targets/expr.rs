#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use osg_core::expr::ClassExpression;
use osg_core::index::Rank;
use osg_core::ring::MultiplicationTable;

static TABLE: OnceLock<MultiplicationTable> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(expr) = ClassExpression::parse(src) else { return };
    let printed = expr.to_string();
    assert_eq!(ClassExpression::parse(&printed).expect("printed form parses"), expr);
    let table = TABLE.get_or_init(|| MultiplicationTable::build(Rank::ring(3).unwrap()).unwrap());
    let _ = expr.evaluate(table);
});
