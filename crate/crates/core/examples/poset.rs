//! The codimension order on G/K and its Hasse diagram in DOT format.
//!
//! ```text
//! cargo run --example poset | dot -Tpng > poset.png
//! ```

use skewcoh::group::named::{imprimitive, symmetric};
use skewcoh::poset::{check_codims_equivalences, hasse_dot, leq, quotient_poset};

fn main() -> skewcoh::Result<()> {
    let b2 = imprimitive(2, 1, 2);
    let poset = quotient_poset(&b2)?;
    eprintln!("G(2,1,2): {} cosets, partial order: {}", poset.len(), poset.is_partial_order());
    for (a, b) in poset.covers() {
        eprintln!("  {} ⋖ {}", poset.names[a], poset.names[b]);
    }

    let s3 = symmetric(3, 2);
    let t = s3.index_of_name("(12)").unwrap();
    let c = s3.index_of_name("(123)").unwrap();
    eprintln!("(12) ≤ (123) in S3 on C^6: {}", leq(&s3, t, c));
    eprintln!("equivalent characterizations agree: {}", check_codims_equivalences(&s3, t, c).consistent());

    print!("{}", hasse_dot(&poset));
    Ok(())
}
