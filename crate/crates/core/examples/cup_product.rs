//! Cup products of cocycles computed three ways: the smash product on
//! Koszul cochains, the bar-complex cup product via Υ and Φ*, and the
//! closed formula in cohomology.
//!
//! ```text
//! cargo run --example cup_product
//! ```

use skewcoh::exterior::{default_names, ExtForm};
use skewcoh::group::named::elem_abel;
use skewcoh::hochschild::{classify, cup_formula, cup_via_bar, proj_h, smash_cup, Cochain, HochContext};
use skewcoh::poly::Poly;

fn main() -> skewcoh::Result<()> {
    let g = elem_abel();
    let ctx = HochContext::new(&g);
    let (n, m) = (ctx.n(), ctx.m());
    let names = default_names(n);
    let one = Poly::one(n, m);
    let elem = |s: &str| g.index_of_name(s).unwrap();

    let pairs = [
        (
            Cochain::term(&one, &ExtForm::wedge_of(n, m, &[2]), elem("a1a3"))?,
            Cochain::term(&one, &ExtForm::wedge_of(n, m, &[0, 1]), elem("a1a2"))?,
        ),
        (
            Cochain::term(&one, &ExtForm::wedge_of(n, m, &[0]), elem("a1"))?,
            Cochain::term(&one, &ExtForm::wedge_of(n, m, &[2, 1]), elem("a2"))?,
        ),
    ];
    for (a, b) in &pairs {
        println!("α = {}   {:?}", a.display_with(&g, &names), classify(&ctx, a));
        println!("β = {}   {:?}", b.display_with(&g, &names), classify(&ctx, b));
        println!("  smash    α·β = {}", smash_cup(&ctx, a, b).display_with(&g, &names));
        println!("  bar      α⌣β = {}", cup_via_bar(&ctx, a, b)?.display_with(&g, &names));
        match cup_formula(&ctx, a, b) {
            Ok(c) => println!("  formula  α⌣β = {}", proj_h(&ctx, &c)?.0.display_with(&g, &names)),
            Err(e) => println!("  formula  not applicable: {e}"),
        }
    }
    Ok(())
}
