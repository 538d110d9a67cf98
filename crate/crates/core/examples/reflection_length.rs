//! Reflection length against codimension of the fixed space, including a
//! group where the two disagree.
//!
//! ```text
//! cargo run --example reflection_length
//! ```

use skewcoh::group::named::imprimitive;
use skewcoh::reflength::compare_orders_report;

fn main() -> skewcoh::Result<()> {
    for (r, p, n) in [(3, 1, 2), (4, 2, 2)] {
        let g = imprimitive(r, p, n);
        let rep = compare_orders_report(&g)?;
        println!(
            "G({r},{p},{n}): {} reflections, l = codim everywhere: {}",
            rep.table.reflections.len(),
            rep.all_equal
        );
        for row in rep.table.rows.iter().filter(|row| row.length != Some(row.codim)) {
            let w: Vec<&str> = row.witness.iter().map(|&s| g.name(s)).collect();
            println!("  {}: l = {:?}, codim = {}, witness {}", row.name, row.length, row.codim, w.join(" · "));
        }
        if let (Some(a), Some(b)) = (rep.minimal_are_reflections, rep.orders_coincide) {
            println!("  minimal elements are the reflections: {a}; orders coincide: {b}");
        }
    }
    Ok(())
}
