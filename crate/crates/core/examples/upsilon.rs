//! The chain map Υ from Koszul cochains to bar cochains, evaluated on
//! vectors, and the round trip Φ*Υ = 1.
//!
//! ```text
//! cargo run --example upsilon
//! ```

use skewcoh::exterior::default_names;
use skewcoh::group::named::imprimitive;
use skewcoh::hochschild::{phi_star_upsilon, upsilon_eval, Cochain, HochContext};
use skewcoh::poly::Poly;

fn main() -> skewcoh::Result<()> {
    let g = imprimitive(4, 1, 2);
    let ctx = HochContext::new(&g);
    let (n, m) = (ctx.n(), ctx.m());
    let names = default_names(n);

    // a codimension 2 element that swaps the coordinates, so Υ works in an eigenbasis
    let h = (0..g.order())
        .find(|&h| g.element(h).codim == 2 && g.carrier(h).get(0, 0).is_zero())
        .unwrap();
    let f = Poly::var(n, m, 0).mul(&Poly::var(n, m, 1));
    let alpha = Cochain::term(&f, ctx.vol(h), h)?;
    println!("α = {}", alpha.display_with(&g, &names));
    println!("eigenvalues of {}: {:?}", g.name(h), ctx.frame(h).eigenvalues.iter().map(|e| e.to_string()).collect::<Vec<_>>());

    let x = Poly::var(n, m, 0);
    let y = Poly::var(n, m, 1);
    for (label, args) in [("Υα(x, y)", [x.clone(), y.clone()]), ("Υα(y, x)", [y.clone(), x.clone()]), ("Υα(x, x)", [x.clone(), x])] {
        let v = upsilon_eval(&ctx, &alpha, &args)?;
        let parts: Vec<String> = v.comps.iter().map(|(k, p)| format!("({})⊗{}", p.display_with(&names), g.name(*k))).collect();
        println!("{label} = {}", if parts.is_empty() { "0".into() } else { parts.join(" + ") });
    }
    println!("Φ*Υα = α: {}", phi_star_upsilon(&ctx, &alpha) == alpha);
    Ok(())
}
