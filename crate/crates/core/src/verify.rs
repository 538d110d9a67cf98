//! Verification suites run by `skewcoh verify`. Each suite checks a family
//! of identities exhaustively up to a polynomial degree bound and reports
//! every failure.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exterior::ThetaTable;
use crate::group::FiniteGroup;
use crate::hochschild::{
    classify, cup_via_bar, koszul_codifferential, masks_of_size, phi_star_upsilon_check, smash_cup,
    truncated_cohomology_dims, z_basis, Cochain, HochContext, TermClass,
};
use crate::invariant::{brute_force_product, invariant_basis, invariant_dims, invariant_poly_dim, mackey_cup, molien_dims};
use crate::poly::{Monomial, Poly};
use crate::poset::leq;
use crate::CycNum;

/// Names accepted by `--suite`.
pub const SUITES: &[&str] = &[
    "cupsmash",
    "phiupsilon",
    "kernel",
    "dims",
    "cocycle",
    "mackey",
    "determinant",
    "molien",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: usize,
    pub failures: Vec<String>,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checked: 0,
            failures: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Z-basis cocycles of every tag with exterior degree ≤ n and polynomial
/// degree ≤ `max_d`, paired with their polynomial degree.
pub fn z_basis_upto(ctx: &HochContext, max_d: u32) -> Vec<(Cochain, u32)> {
    let mut out = Vec::new();
    for g in 0..ctx.group().order() {
        for p in 0..=ctx.n() {
            for d in 0..=max_d {
                out.extend(z_basis(ctx, g, p, d).into_iter().map(|c| (c, d)));
            }
        }
    }
    out
}

/// smash = bar-complex cup on Z-basis pairs with `p + q ≤ n` and total
/// polynomial degree ≤ `max_d`.
pub fn cupsmash(ctx: &HochContext, max_d: u32, showcase: &[(Cochain, Cochain)], names: &[String]) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cupsmash");
    let basis = z_basis_upto(ctx, max_d);
    for (a, da) in &basis {
        for (b, db) in &basis {
            if a.degree() + b.degree() > ctx.n() || da + db > max_d {
                continue;
            }
            let s = smash_cup(ctx, a, b);
            let c = cup_via_bar(ctx, a, b)?;
            rep.check(s == c, || format!("{a:?} ⌣ {b:?}: smash {s:?}, bar {c:?}"));
        }
    }
    let group = ctx.group();
    let mut shown = Vec::new();
    for (a, b) in showcase {
        let s = smash_cup(ctx, a, b);
        let c = if a.degree() + b.degree() <= ctx.n() {
            cup_via_bar(ctx, a, b)?
        } else {
            Cochain::zero(ctx.n(), ctx.m(), a.degree() + b.degree())
        };
        shown.push(json!({
            "alpha": a.display_with(group, names),
            "beta": b.display_with(group, names),
            "smash": s.display_with(group, names),
            "bar": c.display_with(group, names),
            "smash_equals_bar": s == c,
        }));
    }
    rep.details = json!({ "pairs_checked": rep.checked, "showcase": shown });
    Ok(rep)
}

/// Φ*Υ = 1 on every basis cochain `x^a ⊗ e_S* ⊗ g` with polynomial degree ≤ `max_d`.
pub fn phiupsilon(ctx: &HochContext, max_d: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("phiupsilon");
    let n = ctx.n();
    let m = ctx.m();
    for g in 0..ctx.group().order() {
        for p in 0..=n {
            for mask in masks_of_size(n, p) {
                for d in 0..=max_d {
                    for mono in Monomial::all_of_degree(n, d) {
                        let mut a = Cochain::zero(n, m, p);
                        a.add_term(g, mask, &Poly::term(n, mono, CycNum::one(m)));
                        rep.check(phi_star_upsilon_check(ctx, &a), || format!("Φ*Υ ≠ 1 on {a:?}"));
                    }
                }
            }
        }
    }
    rep
}

/// Z and B lie in the kernel of d*, d*∘d* = 0, and the H-normal basis is
/// classified as Z but not B.
pub fn kernel(ctx: &HochContext, max_d: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("kernel");
    let n = ctx.n();
    let m = ctx.m();
    let group = ctx.group();
    for g in 0..group.order() {
        let e = group.element(g);
        let perp_lin: Vec<Poly> = e.perp.basis().iter().map(|v| Poly::linear(n, m, v)).collect();
        for p in 0..=n {
            for d in 0..=max_d {
                for z in z_basis(ctx, g, p, d) {
                    rep.check(koszul_codifferential(ctx, &z).is_zero(), || format!("d* ≠ 0 on Z element {z:?}"));
                    rep.check(classify(ctx, &z)[&g] != TermClass::InCOnly, || format!("Z element {z:?} classified C-only"));
                    for lin in &perp_lin {
                        let mut b = Cochain::zero(n, m, p);
                        for (&mask, f) in z.component(g).unwrap() {
                            b.add_term(g, mask, &f.mul(lin));
                        }
                        rep.check(koszul_codifferential(ctx, &b).is_zero(), || format!("d* ≠ 0 on B element {b:?}"));
                        rep.check(classify(ctx, &b)[&g] == TermClass::InB, || format!("B element {b:?} misclassified"));
                    }
                }
                for h in crate::hochschild::h_basis(ctx, g, p, d) {
                    rep.check(classify(ctx, &h)[&g] == TermClass::InZ, || format!("H element {h:?} misclassified"));
                }
                for mask in masks_of_size(n, p) {
                    for mono in Monomial::all_of_degree(n, d) {
                        let mut a = Cochain::zero(n, m, p);
                        a.add_term(g, mask, &Poly::term(n, mono, CycNum::one(m)));
                        let dd = koszul_codifferential(ctx, &koszul_codifferential(ctx, &a));
                        rep.check(dd.is_zero(), || format!("d*∘d* ≠ 0 on {a:?}"));
                    }
                }
            }
        }
    }
    rep
}

/// Closed-form H dimensions against the rank computation, p ≤ n, d ≤ `max_d`.
pub fn dims(ctx: &HochContext, max_d: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("dims");
    let mut rows = Vec::new();
    for p in 0..=ctx.n() {
        for d in 0..=max_d {
            for r in truncated_cohomology_dims(ctx, p, d) {
                rep.check(r.formula == r.oracle, || {
                    format!("g={} p={} d={}: formula {} vs oracle {}", r.g, r.p, r.d, r.formula, r.oracle)
                });
                rows.push(r);
            }
        }
    }
    rep.details = serde_json::to_value(rows).unwrap_or(Value::Null);
    rep
}

/// θ is a 2-cocycle and vanishes exactly off the pairs with `g ≤ gh`.
pub fn cocycle(group: &FiniteGroup, table: &ThetaTable) -> SuiteReport {
    let mut rep = SuiteReport::new("cocycle");
    let ord = group.order();
    for g in 0..ord {
        for h in 0..ord {
            let gh = group.mul(g, h);
            for k in 0..ord {
                let lhs = table.get(g, h) * table.get(gh, k);
                let rhs = table.get(h, k) * table.get(g, group.mul(h, k));
                rep.check(lhs == rhs, || format!("cocycle identity fails at ({g},{h},{k})"));
            }
            rep.check(!table.get(g, h).is_zero() == leq(group, g, gh), || {
                format!("θ({g},{h}) vanishing disagrees with g ≤ gh")
            });
        }
    }
    rep
}

/// Mackey product against the brute-force product on invariant basis
/// pairs with `p + q ≤ n` and total polynomial degree ≤ `max_d`.
pub fn mackey(ctx: &HochContext, max_d: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("mackey");
    let mut basis = Vec::new();
    for g in ctx.group().class_reps() {
        for p in 0..=ctx.n() {
            for d in 0..=max_d {
                basis.extend(invariant_basis(ctx, g, p, d).into_iter().map(|c| (c, d)));
            }
        }
    }
    for (a, da) in &basis {
        for (b, db) in &basis {
            if a.degree() + b.degree() > ctx.n() || da + db > max_d {
                continue;
            }
            let x = mackey_cup(ctx, a, b)?;
            let y = brute_force_product(ctx, a, b)?;
            rep.check(x == y, || format!("Mackey product differs on {:?} × {:?}", a.component, b.component));
        }
    }
    Ok(rep)
}

/// det g ≠ 1 forces the Z(g)-invariant part of H_g to vanish.
pub fn determinant(ctx: &HochContext, max_d: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("determinant");
    let mut rows = Vec::new();
    for g in ctx.group().class_reps() {
        let d = invariant_dims(ctx, g, max_d);
        rep.check(d.det_is_one || d.is_zero(), || format!("{} has det ≠ 1 but a nonzero invariant component", d.name));
        rows.push(d);
    }
    let surviving: Vec<&str> = rows.iter().filter(|r| !r.is_zero()).map(|r| r.name.as_str()).collect();
    rep.details = json!({ "classes": rows, "surviving": surviving });
    rep
}

/// Molien coefficients against averaging, for G and every centralizer of a
/// class representative.
pub fn molien(group: &FiniteGroup, max_d: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("molien");
    let mut subgroups = vec![group.all()];
    for g in group.class_reps() {
        let z = group.centralizer(g);
        if !subgroups.contains(&z) {
            subgroups.push(z);
        }
    }
    for sub in &subgroups {
        for d in 0..=max_d {
            let a = molien_dims(group, sub, d);
            let b = invariant_poly_dim(group, sub, d);
            rep.check(a == b, || format!("subgroup of order {} degree {d}: Molien {a} vs averaging {b}", sub.len()));
        }
    }
    rep
}

/// The theta table with one entry perturbed: a nonzero value is negated and
/// a zero value becomes 1.
pub fn perturb_theta(table: &mut ThetaTable, g: usize, h: usize, m: u32) {
    let cur = table.get(g, h).clone();
    let new = if cur.is_zero() { CycNum::one(m) } else { -&cur };
    table.set(g, h, new);
}
