//! Build the standard groups and print their order, kernel and conjugacy
//! classes with codimension and determinant.
//!
//! ```text
//! cargo run --example groups
//! ```

use skewcoh::group::named::{elem_abel, imprimitive, symmetric, symmetric_with_kernel};
use skewcoh::group::FiniteGroup;

fn show(label: &str, g: &FiniteGroup) {
    let s = g.summary();
    println!(
        "{label}: order {} on C^{} over Q(ζ_{}), kernel of order {}, {} classes",
        s.order, s.n, s.modulus, s.kernel_order, s.class_count
    );
    for c in &s.classes {
        println!("  {:<16} size {:>2}  codim {}  det {}", c.name, c.size, c.codim, c.det);
    }
}

fn main() {
    show("(Z/2)^3 diagonal", &elem_abel());
    show("S3 on C^3 ⊕ C^3", &symmetric(3, 2));
    show("G(4,2,2)", &imprimitive(4, 2, 2));
    show("S3 × C2 with C2 acting trivially", &symmetric_with_kernel(3, 2));
}
