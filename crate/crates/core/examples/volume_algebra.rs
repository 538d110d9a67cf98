//! The cocycle θ on volume forms, multiplication in the twisted volume
//! algebra and a factorization of every vol_g⊗g into minimal elements.
//!
//! ```text
//! cargo run --example volume_algebra
//! ```

use skewcoh::exterior::{avol_generation_certificate, avol_multiply, AVolElem, ThetaTable, VolAssignment};
use skewcoh::group::named::symmetric;
use skewcoh::poset::quotient_poset;

fn main() -> skewcoh::Result<()> {
    let g = symmetric(3, 2);
    let m = g.modulus();
    let vols = VolAssignment::canonical(&g);
    let theta = ThetaTable::new(&g, &vols);
    println!("cocycle violation: {:?}", theta.cocycle_violation(&g));

    let t12 = g.index_of_name("(12)").unwrap();
    let t23 = g.index_of_name("(23)").unwrap();
    println!("vol_(12) = {}", vols.get(t12));
    println!("θ((12),(12)) = {}", theta.get(t12, t12));
    println!("θ((12),(23)) = {}", theta.get(t12, t23));

    let p = avol_multiply(&g, &theta, &AVolElem::basis(t12, m), &AVolElem::basis(t23, m));
    for (k, c) in &p.coeffs {
        println!("(vol_(12)⊗(12))·(vol_(23)⊗(23)) = {c}·vol_{0}⊗{0}", g.name(*k));
    }

    let poset = quotient_poset(&g)?;
    for cert in avol_generation_certificate(&g, &theta, &poset)? {
        let factors: Vec<&str> = cert.factors.iter().map(|&f| g.name(f)).collect();
        println!("{:<6} = ({}) / {}", g.name(cert.element), factors.join(" · "), cert.scalar);
    }
    Ok(())
}
