//! Dimensions of the centralizer-invariant part of each H_g, the
//! determinant vanishing criterion, and Molien series against averaging.
//!
//! ```text
//! cargo run --example invariants
//! ```

use skewcoh::group::named::{imprimitive, symmetric};
use skewcoh::hochschild::HochContext;
use skewcoh::invariant::{invariant_dims, invariant_poly_dim, molien_dims};

fn main() {
    for (label, g) in [("S3 on C^3", symmetric(3, 1)), ("G(3,1,2)", imprimitive(3, 1, 2))] {
        let ctx = HochContext::new(&g);
        println!("{label}");
        for rep in g.class_reps() {
            let d = invariant_dims(&ctx, rep, 2);
            println!(
                "  {:<12} det=1: {:<5} |Z(g)| = {:>2}  dims[p][d] = {:?}",
                d.name, d.det_is_one, d.centralizer_order, d.dims
            );
        }
        let all = g.all();
        let molien: Vec<usize> = (0..=6).map(|d| molien_dims(&g, &all, d)).collect();
        let avg: Vec<usize> = (0..=6).map(|d| invariant_poly_dim(&g, &all, d)).collect();
        println!("  dim S(V)^G_d, Molien   {molien:?}");
        println!("  dim S(V)^G_d, average  {avg:?}");
    }
}
