//! Exploring a block of the quiver and exporting it.
//!
//! Run with: cargo run --example quiver_export

use tiltquiver::arith::Prime;
use tiltquiver::quiver::{block_fibers, export_dot, export_json, Block};

fn main() {
    let p = Prime::new(3);
    let block = Block::explore(1, 27, p);
    println!("block of eve 1 up to 27: {:?}", block.vertices);

    println!("--- DOT ---");
    print!("{}", export_dot(&block));

    println!("--- JSON ---");
    println!("{}", serde_json::to_string_pretty(&export_json(&block)).unwrap());

    // Every vertex belongs to the block of exactly one eve.
    let fibers = block_fibers(40, p);
    for (eve, members) in &fibers {
        println!("eve {eve}: {} vertices", members.len());
    }
    let total: usize = fibers.values().map(|m| m.len()).sum();
    assert_eq!(total, 40);
}
