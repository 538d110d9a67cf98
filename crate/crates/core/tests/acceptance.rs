//! The fourteen acceptance criteria, each run exactly on the checked-in
//! group specs. Prints one PASS/FAIL line per criterion.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use skewcoh::exterior::{avol_generation_certificate, theta, ExtForm, ThetaTable, VolAssignment};
use skewcoh::group::{FiniteGroup, GroupSpec, DEFAULT_CAP};
use skewcoh::hochschild::{
    cup_via_bar, masks_of_size, phi_star_upsilon_check, smash_cup, truncated_cohomology_dims, Cochain, HochContext,
};
use skewcoh::invariant::{invariant_basis, invariant_dims, mackey_cup, InvariantClass};
use skewcoh::hochschild::HClass;
use skewcoh::linalg::Mat;
use skewcoh::poly::{Monomial, Poly};
use skewcoh::poset::{check_codims_equivalences, leq, quotient_poset};
use skewcoh::reflength::{compare_orders_report, reflections_of};
use skewcoh::{verify, CycNum};

type Outcome = Result<String, String>;

fn load(name: &str) -> FiniteGroup {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    GroupSpec::from_path(&path)
        .and_then(|s| s.build(DEFAULT_CAP))
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

const TEST_GROUPS: &[&str] = &[
    "elemabel.json",
    "s3c6.json",
    "s3nat.json",
    "g212.json",
    "b3.json",
    "g312.json",
    "g412.json",
    "g422.json",
];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn term(ctx: &HochContext, group: &FiniteGroup, idx: &[usize], g: &str) -> Cochain {
    let gi = group.index_of_name(g).unwrap_or_else(|| panic!("no element {g}"));
    Cochain::term(&Poly::one(ctx.n(), ctx.m()), &ExtForm::wedge_of(ctx.n(), ctx.m(), idx), gi).unwrap()
}

fn criterion_1() -> Outcome {
    let g = load("elemabel.json");
    let ctx = HochContext::new(&g);
    let alpha = term(&ctx, &g, &[2], "a1a3");
    let beta = term(&ctx, &g, &[0, 1], "a1a2");
    let top = term(&ctx, &g, &[0, 1, 2], "a2a3");
    let smash = smash_cup(&ctx, &alpha, &beta);
    let bar = cup_via_bar(&ctx, &alpha, &beta).map_err(|e| e.to_string())?;
    ensure(smash == top.scale(&CycNum::from_integer(ctx.m(), -1)), || format!("smash = {smash:?}"))?;
    ensure(bar == top, || format!("bar = {bar:?}"))?;
    Ok("smash = -1⊗v1*∧v2*∧v3*⊗a2a3, bar = +1⊗v1*∧v2*∧v3*⊗a2a3".into())
}

fn criterion_2() -> Outcome {
    let g = load("elemabel.json");
    let ctx = HochContext::new(&g);
    let alpha = term(&ctx, &g, &[0], "a1");
    let beta = term(&ctx, &g, &[2, 1], "a2");
    let expected = term(&ctx, &g, &[2, 0, 1], "a1a2").scale(&CycNum::from_integer(ctx.m(), -1));
    let smash = smash_cup(&ctx, &alpha, &beta);
    ensure(smash == expected, || format!("smash = {smash:?}"))?;
    let a1 = g.index_of_name("a1").unwrap();
    let a2 = g.index_of_name("a2").unwrap();
    let t = theta(&g, ctx.vols(), a1, a2);
    ensure(t.is_one(), || format!("θ(a1,a2) = {t}"))?;
    Ok("smash = -1⊗v3*∧v1*∧v2*⊗a1a2, θ(a1,a2) = 1".into())
}

fn criterion_3() -> Outcome {
    let g = load("s3c6.json");
    let ctx = HochContext::new(&g);
    let t = g.index_of_name("(12)").unwrap();
    let c = g.index_of_name("(123)").unwrap();
    let vol = |x: usize| Cochain::term(&Poly::one(6, ctx.m()), ctx.vol(x), x).unwrap();
    let a = InvariantClass::new(&ctx, t, HClass(vol(t))).map_err(|e| e.to_string())?;
    let sq = mackey_cup(&ctx, &a, &a).map_err(|e| e.to_string())?;
    ensure(
        sq.len() == 1 && sq[0].class_rep == c && *sq[0].component.cochain() == vol(c).scale(&CycNum::from_integer(ctx.m(), 3)),
        || format!("vol_(12) squared = {sq:?}"),
    )?;
    let mut pairs = 0;
    let bases = |x: usize| -> Vec<InvariantClass> {
        let mut out = Vec::new();
        for p in 0..=6 {
            for d in 0..=2 {
                out.extend(invariant_basis(&ctx, x, p, d));
            }
        }
        out
    };
    let bt = bases(t);
    let bc = bases(c);
    for (xs, ys) in [(&bt, &bc), (&bc, &bt), (&bc, &bc)] {
        for x in xs.iter() {
            for y in ys.iter() {
                let prod = mackey_cup(&ctx, x, y).map_err(|e| e.to_string())?;
                ensure(prod.is_empty(), || format!("nonzero product {prod:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "vol_(12)·vol_(12) = 3·vol_(123); {pairs} products (12)×(123), (123)×(12), (123)×(123) all zero (d ≤ 2 per factor)"
    ))
}

fn criterion_4() -> Outcome {
    let mut triples = 0usize;
    for name in TEST_GROUPS {
        let g = load(name);
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        if let Some(v) = table.cocycle_violation(&g) {
            return Err(format!("{name}: cocycle identity fails at {v:?}"));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                ensure(!table.get(a, b).is_zero() == leq(&g, a, g.mul(a, b)), || {
                    format!("{name}: θ({a},{b}) vanishing disagrees with the poset")
                })?;
            }
        }
        triples += g.order().pow(3);
    }
    Ok(format!("{triples} triples, 8 groups"))
}

fn criterion_5() -> Outcome {
    let mut pairs = 0usize;
    for name in TEST_GROUPS {
        let g = load(name);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let r = check_codims_equivalences(&g, a, b);
                ensure(r.consistent(), || format!("{name}: ({a},{b}) gives {r:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn criterion_6() -> Outcome {
    let mut names: Vec<&str> = TEST_GROUPS.to_vec();
    names.push("s3kernel.json");
    let mut nonfaithful = false;
    for name in names {
        let g = load(name);
        let p = quotient_poset(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(p.is_partial_order(), || format!("{name}: not a partial order"))?;
        ensure((0..p.len()).all(|b| p.le(0, b)), || format!("{name}: identity coset is not the minimum"))?;
        ensure((1..p.len()).all(|a| !p.le(a, 0)), || format!("{name}: minimum is not unique"))?;
        if !g.is_faithful() {
            nonfaithful = true;
            ensure(p.len() * g.kernel().len() == g.order(), || format!("{name}: wrong quotient size"))?;
        }
    }
    ensure(nonfaithful, || "no nonfaithful group was checked".into())?;
    Ok("9 groups including one with |K| = 2".into())
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    for name in ["elemabel.json", "s3nat.json"] {
        let g = load(name);
        let ctx = HochContext::new(&g);
        let basis = verify::z_basis_upto(&ctx, 2);
        for (a, _) in &basis {
            for (b, _) in &basis {
                if a.degree() + b.degree() > ctx.n() {
                    continue;
                }
                let s = smash_cup(&ctx, a, b);
                let c = cup_via_bar(&ctx, a, b).map_err(|e| e.to_string())?;
                ensure(s == c, || format!("{name}: {a:?} ⌣ {b:?}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} pairs of Z-basis cocycles"))
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    let mut names: Vec<&str> = TEST_GROUPS.to_vec();
    names.push("s4nat.json");
    for name in names {
        let g = load(name);
        if g.n() > 4 {
            continue;
        }
        let ctx = HochContext::new(&g);
        let n = ctx.n();
        for x in 0..g.order() {
            for p in 0..=n {
                for mask in masks_of_size(n, p) {
                    for d in 0..=2 {
                        for mono in Monomial::all_of_degree(n, d) {
                            let mut a = Cochain::zero(n, ctx.m(), p);
                            a.add_term(x, mask, &Poly::term(n, mono, CycNum::one(ctx.m())));
                            ensure(phi_star_upsilon_check(&ctx, &a), || format!("{name}: {a:?}"))?;
                            total += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{total} basis cochains with polynomial degree ≤ 2 over the groups with n ≤ 4"))
}

fn criterion_9() -> Outcome {
    let mut total = 0;
    for name in ["elemabel.json", "s3nat.json"] {
        let g = load(name);
        let ctx = HochContext::new(&g);
        for p in 0..=ctx.n() {
            for d in 0..=3 {
                for r in truncated_cohomology_dims(&ctx, p, d) {
                    ensure(r.formula == r.oracle, || format!("{name}: {r:?}"))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} (g, p, d) dimensions"))
}

fn criterion_10() -> Outcome {
    for name in ["g212.json", "b3.json", "s4nat.json", "g312.json", "g412.json"] {
        let g = load(name);
        let rep = compare_orders_report(&g).map_err(|e| e.to_string())?;
        ensure(rep.all_equal, || format!("{name}: l ≠ codim at {:?}", rep.first_mismatch))?;
    }
    let g = load("g422.json");
    let m = g.modulus();
    let i = CycNum::root_of_unity(m, (m / 4) as i64);
    let di = g
        .index_of_matrix(&Mat::diagonal(&[i.clone(), i], m))
        .ok_or("diag(i,i) not found")?;
    let rep = compare_orders_report(&g).map_err(|e| e.to_string())?;
    ensure(g.element(di).codim == 2, || "codim of diag(i,i) is not 2".into())?;
    ensure(rep.table.length(di) == Some(3), || format!("l(diag(i,i)) = {:?}", rep.table.length(di)))?;
    ensure(!rep.all_equal, || "G(4,2,2) reported all_equal".into())?;
    Ok("l = codim on B2, B3, S4, G(3,1,2), G(4,1,2); diag(i,i) in G(4,2,2) has codim 2, l = 3".into())
}

fn criterion_11() -> Outcome {
    let mut certs = 0;
    let mut names: Vec<&str> = TEST_GROUPS.to_vec();
    names.push("s4nat.json");
    let all_equal = ["g212.json", "b3.json", "s4nat.json", "g312.json", "g412.json"];
    for name in names {
        let g = load(name);
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        let poset = quotient_poset(&g).map_err(|e| e.to_string())?;
        let cs = avol_generation_certificate(&g, &table, &poset).map_err(|e| format!("{name}: {e}"))?;
        ensure(cs.len() == g.order(), || format!("{name}: missing certificates"))?;
        if all_equal.contains(&name) {
            let refl = reflections_of(&g);
            for c in &cs {
                ensure(c.factors.iter().all(|f| refl.contains(f)), || {
                    format!("{name}: certificate for {} uses a non-reflection", g.name(c.element))
                })?;
            }
        }
        certs += cs.len();
    }
    Ok(format!("{certs} certificates; reflection-only factors in the 5 reflection groups"))
}

fn criterion_12() -> Outcome {
    let mut total = 0;
    for name in ["s3c6.json", "g212.json"] {
        let g = load(name);
        let ctx = HochContext::new(&g);
        let rep = verify::mackey(&ctx, 2).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{name}: {:?}", rep.failures.first()))?;
        total += rep.checked;
    }
    Ok(format!("{total} invariant basis pairs with p+q ≤ n and total polynomial degree ≤ 2"))
}

fn criterion_13() -> Outcome {
    let mut checked = 0;
    for name in TEST_GROUPS {
        let g = load(name);
        let ctx = HochContext::new(&g);
        for r in g.class_reps() {
            if g.element(r).det.is_one() {
                continue;
            }
            let d = invariant_dims(&ctx, r, 3);
            ensure(d.is_zero(), || format!("{name}: {} has det ≠ 1 and invariants {:?}", d.name, d.dims))?;
            checked += 1;
        }
    }
    let g = load("s3c6.json");
    let ctx = HochContext::new(&g);
    let surviving: Vec<String> = g
        .class_reps()
        .into_iter()
        .filter(|&r| !invariant_dims(&ctx, r, 3).is_zero())
        .map(|r| g.name(r).to_string())
        .collect();
    ensure(surviving == ["1", "(12)", "(123)"], || format!("surviving: {surviving:?}"))?;
    Ok(format!("{checked} classes with det ≠ 1 vanish; S3 on C^6 keeps 1, (12), (123)"))
}

fn criterion_14() -> Outcome {
    let mut total = 0;
    for name in TEST_GROUPS {
        let g = load(name);
        let rep = verify::molien(&g, 4);
        ensure(rep.passed(), || format!("{name}: {:?}", rep.failures.first()))?;
        total += rep.checked;
    }
    Ok(format!("{total} (subgroup, degree) pairs"))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("elem-abel smash and bar products", criterion_1),
        ("second worked product", criterion_2),
        ("S3 on C^6 Mackey products", criterion_3),
        ("theta cocycle and vanishing pattern", criterion_4),
        ("codimension equivalences", criterion_5),
        ("poset axioms on G/K", criterion_6),
        ("cup equals smash on Z-basis pairs", criterion_7),
        ("Φ*Υ is the identity", criterion_8),
        ("cohomology dimensions", criterion_9),
        ("reflection length versus codimension", criterion_10),
        ("generation certificates", criterion_11),
        ("Mackey formula against brute force", criterion_12),
        ("determinant lemma", criterion_13),
        ("Molien series against averaging", criterion_14),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                let f = *f;
                s.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    // Written to the stdout handle directly so the report survives output capture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, ((desc, _), (res, secs))) in criteria.iter().zip(&results).enumerate() {
        let (status, msg) = match res {
            Ok(msg) => ("PASS", msg),
            Err(msg) => {
                failed.push(i + 1);
                ("FAIL", msg)
            }
        };
        writeln!(out, "criterion {:>2} {status} [{secs:6.2}s] {desc}: {msg}", i + 1).unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
