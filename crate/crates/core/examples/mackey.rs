//! The G-invariant cup product through the double-coset (Mackey) formula,
//! compared with multiplying the assembled classes directly.
//!
//! ```text
//! cargo run --example mackey
//! ```

use skewcoh::group::named::symmetric;
use skewcoh::hochschild::{proj_h, Cochain, HochContext};
use skewcoh::invariant::{brute_force_product, mackey_cup_with_terms, InvariantClass};
use skewcoh::poly::Poly;

fn main() -> skewcoh::Result<()> {
    let g = symmetric(3, 2);
    let ctx = HochContext::new(&g);
    let names: Vec<String> = ["v1", "w1", "v2", "w2", "v3", "w3"].map(String::from).to_vec();
    let t = g.index_of_name("(12)").unwrap();
    let vol = Cochain::term(&Poly::one(ctx.n(), ctx.m()), ctx.vol(t), t)?;
    let a = InvariantClass::new(&ctx, t, proj_h(&ctx, &vol)?)?;

    let (product, terms) = mackey_cup_with_terms(&ctx, &a, &a)?;
    for term in &terms {
        println!(
            "x = {:<6} y = {:<6} k = {:<6} |Z ∩ Z| = {}",
            g.name(term.x),
            g.name(term.y),
            g.name(term.k),
            term.subgroup_order
        );
    }
    for c in &product {
        println!("[{}] {}", g.name(c.class_rep), c.component.0.display_with(&g, &names));
    }
    println!("agrees with direct product: {}", product == brute_force_product(&ctx, &a, &a)?);
    Ok(())
}
