//! The G-action on cochains, transfer maps, the decomposition of G-invariant
//! classes over conjugacy class representatives, the Mackey product, and
//! invariant dimension counts with a Molien-series cross-check.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cyclotomic::{rational, CycNum};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hochschild::{h_basis, proj_h, smash_cup, Cochain, HClass, HochContext};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{poly_action, Monomial, Poly};

/// `^h(f ⊗ ω ⊗ g) = ^h f ⊗ ^h ω ⊗ hgh⁻¹`.
pub fn act_on_cochain(ctx: &HochContext, h: usize, alpha: &Cochain) -> Cochain {
    if h == 0 {
        return alpha.clone();
    }
    let group = ctx.group();
    let mut out = Cochain::zero(alpha.n(), alpha.modulus(), alpha.degree());
    for (&g, vf) in alpha.comps() {
        let tag = group.conj(h, g);
        for (&mask, f) in vf {
            let hf = ctx.act_poly(h, f);
            for (&mk, c) in ctx.act_mask(h, mask).terms() {
                out.add_term(tag, mk, &hf.scale(c));
            }
        }
    }
    out
}

/// First element of `sub` that moves `alpha`, if any.
pub fn first_non_fixing(ctx: &HochContext, sub: &[usize], alpha: &Cochain) -> Option<usize> {
    sub.iter().copied().find(|&z| act_on_cochain(ctx, z, alpha) != *alpha)
}

pub fn is_invariant(ctx: &HochContext, sub: &[usize], alpha: &Cochain) -> bool {
    first_non_fixing(ctx, sub, alpha).is_none()
}

/// `T^L_J(α) = Σ_{h ∈ [L/J]} ^h α`; `J ⊆ L` are sorted subgroups.
pub fn transfer(ctx: &HochContext, j: &[usize], l: &[usize], alpha: &Cochain) -> Result<Cochain> {
    if let Some(z) = first_non_fixing(ctx, j, alpha) {
        return Err(Error::NotInvariant(z));
    }
    if let Some(&z) = j.iter().find(|z| l.binary_search(z).is_err()) {
        return Err(Error::InvalidSpec(format!(
            "transfer: element {z} of the smaller subgroup is not in the larger one"
        )));
    }
    let mut out = Cochain::zero(alpha.n(), alpha.modulus(), alpha.degree());
    for h in ctx.group().left_coset_reps(l, j) {
        out.add_assign(&act_on_cochain(ctx, h, alpha));
    }
    Ok(out)
}

/// The Reynolds operator `(1/|L|) Σ_{z ∈ L} ^z α`.
pub fn average(ctx: &HochContext, sub: &[usize], alpha: &Cochain) -> Cochain {
    let mut out = Cochain::zero(alpha.n(), alpha.modulus(), alpha.degree());
    for &z in sub {
        out.add_assign(&act_on_cochain(ctx, z, alpha));
    }
    out.scale(&CycNum::from_rational(ctx.m(), rational(1, sub.len() as i64)))
}

/// Intersection of two sorted subgroups.
pub fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// A Z(g)-invariant H-normal class at a conjugacy class representative g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantClass {
    pub class_rep: usize,
    pub component: HClass,
}

impl InvariantClass {
    pub fn new(ctx: &HochContext, class_rep: usize, component: HClass) -> Result<InvariantClass> {
        let group = ctx.group();
        if !group.is_class_rep(class_rep) {
            return Err(Error::NotClassRepresentative(class_rep));
        }
        if let Some(&g) = component.cochain().comps().keys().find(|&&g| g != class_rep) {
            return Err(Error::InvalidSpec(format!(
                "component tagged by {} is not supported on the class representative {}",
                group.name(g),
                group.name(class_rep)
            )));
        }
        if let Some(z) = first_non_fixing(ctx, &group.centralizer(class_rep), component.cochain()) {
            return Err(Error::NotInvariant(z));
        }
        Ok(InvariantClass { class_rep, component })
    }

    pub fn degree(&self) -> usize {
        self.component.cochain().degree()
    }
}

/// Split a G-invariant class into its components at class representatives.
pub fn class_decompose(ctx: &HochContext, alpha: &HClass) -> Result<Vec<InvariantClass>> {
    let group = ctx.group();
    if let Some(z) = first_non_fixing(ctx, &group.all(), alpha.cochain()) {
        return Err(Error::NotInvariant(z));
    }
    Ok(group
        .class_reps()
        .into_iter()
        .filter(|g| alpha.cochain().component(*g).is_some())
        .map(|g| InvariantClass {
            class_rep: g,
            component: HClass(alpha.cochain().restrict(g)),
        })
        .collect())
}

/// `Σ_g T^G_{Z(g)}(α_g)`, the inverse of [`class_decompose`].
pub fn class_assemble(ctx: &HochContext, parts: &[InvariantClass], degree: usize) -> Result<HClass> {
    let group = ctx.group();
    let all = group.all();
    let mut out = Cochain::zero(ctx.n(), ctx.m(), degree);
    for part in parts {
        let z = group.centralizer(part.class_rep);
        out.add_assign(&transfer(ctx, &z, &all, part.component.cochain())?);
    }
    Ok(HClass(out))
}

/// Choice of `(k, y)` for a double coset representative `x`: the first
/// `y` (by index) with `^y g · ^{yx} h` a class representative.
pub fn mackey_choice(group: &FiniteGroup, g: usize, h: usize, x: usize) -> (usize, usize) {
    let gxh = group.mul(g, group.conj(x, h));
    (0..group.order())
        .map(|y| (group.conj(y, gxh), y))
        .find(|&(k, _)| group.is_class_rep(k))
        .expect("every element is conjugate to its class representative")
}

/// One double-coset term of the Mackey product, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct MackeyTerm {
    pub x: usize,
    pub y: usize,
    pub k: usize,
    pub subgroup_order: usize,
}

/// `α ⌣̇ β = Σ_{x ∈ D} T^{Z(k)}_{^yZ(g) ∩ ^{yx}Z(h)}(^yα ⌣ ^{yx}β)` with D a
/// set of representatives of `Z(g)\G/Z(h)`.
pub fn mackey_cup(ctx: &HochContext, a: &InvariantClass, b: &InvariantClass) -> Result<Vec<InvariantClass>> {
    mackey_cup_with_terms(ctx, a, b).map(|(v, _)| v)
}

pub fn mackey_cup_with_terms(
    ctx: &HochContext,
    a: &InvariantClass,
    b: &InvariantClass,
) -> Result<(Vec<InvariantClass>, Vec<MackeyTerm>)> {
    let group = ctx.group();
    let (g, h) = (a.class_rep, b.class_rep);
    for r in [g, h] {
        if !group.is_class_rep(r) {
            return Err(Error::NotClassRepresentative(r));
        }
    }
    let zg = group.centralizer(g);
    let zh = group.centralizer(h);
    let degree = a.degree() + b.degree();
    let mut acc: BTreeMap<usize, Cochain> = BTreeMap::new();
    let mut terms = Vec::new();
    for x in group.double_cosets(&zg, &zh) {
        let (k, y) = mackey_choice(group, g, h, x);
        let yx = group.mul(y, x);
        let ya = act_on_cochain(ctx, y, a.component.cochain());
        let yxb = act_on_cochain(ctx, yx, b.component.cochain());
        let prod = proj_h(ctx, &smash_cup(ctx, &ya, &yxb))?;
        let j = intersect(&group.centralizer(group.conj(y, g)), &group.centralizer(group.conj(yx, h)));
        let zk = group.centralizer(k);
        let t = transfer(ctx, &j, &zk, prod.cochain())?;
        terms.push(MackeyTerm {
            x,
            y,
            k,
            subgroup_order: j.len(),
        });
        acc.entry(k)
            .or_insert_with(|| Cochain::zero(ctx.n(), ctx.m(), degree))
            .add_assign(&t);
    }
    let classes = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| InvariantClass {
            class_rep: k,
            component: HClass(c),
        })
        .collect();
    Ok((classes, terms))
}

/// The same product computed the long way: assemble both inputs into
/// G-invariant classes, multiply with the smash product, project to H and
/// decompose again.
pub fn brute_force_product(ctx: &HochContext, a: &InvariantClass, b: &InvariantClass) -> Result<Vec<InvariantClass>> {
    let x = class_assemble(ctx, std::slice::from_ref(a), a.degree())?;
    let y = class_assemble(ctx, std::slice::from_ref(b), b.degree())?;
    let prod = proj_h(ctx, &smash_cup(ctx, x.cochain(), y.cochain()))?;
    class_decompose(ctx, &prod)
}

type Key = (usize, u32, Monomial);

fn cochain_vector(c: &Cochain) -> SparseVec<Key> {
    let mut v = SparseVec::new();
    for (&g, vf) in c.comps() {
        for (&mask, f) in vf {
            for (mono, coef) in f.terms() {
                v.insert((g, mask, *mono), coef.clone());
            }
        }
    }
    v
}

/// A basis of the Z(g)-invariant part of H_g in bidegree (p, d), obtained
/// by averaging an H-normal basis and keeping independent images.
pub fn invariant_basis(ctx: &HochContext, g: usize, p: usize, d: u32) -> Vec<InvariantClass> {
    let group = ctx.group();
    let z = group.centralizer(g);
    let mut ech: Echelon<Key> = Echelon::new(ctx.m());
    let mut out = Vec::new();
    for b in h_basis(ctx, g, p, d) {
        let avg = average(ctx, &z, &b);
        if avg.is_zero() {
            continue;
        }
        if ech.insert(cochain_vector(&avg)) {
            out.push(InvariantClass {
                class_rep: g,
                component: HClass(avg),
            });
        }
    }
    out
}

/// Dimension of the degree-d polynomials invariant under `sub`, by
/// averaging monomials.
pub fn invariant_poly_dim(group: &FiniteGroup, sub: &[usize], d: u32) -> usize {
    let n = group.n();
    let m = group.modulus();
    let scale = CycNum::from_rational(m, rational(1, sub.len() as i64));
    let mut ech: Echelon<Monomial> = Echelon::new(m);
    for mono in Monomial::all_of_degree(n, d) {
        let f = Poly::term(n, mono, CycNum::one(m));
        let mut avg = Poly::zero(n, m);
        for &z in sub {
            avg.add_assign(&poly_action(group, z, &f));
        }
        let avg = avg.scale(&scale);
        ech.insert(avg.terms().iter().map(|(k, v)| (*k, v.clone())).collect());
    }
    ech.rank()
}

/// Coefficient of `t^d` in `(1/|L|) Σ_{g ∈ L} 1/det(1 − t g)`. Each summand is
/// the complete homogeneous symmetric function of the eigenvalues, obtained
/// from power-sum traces by Newton's identities.
pub fn molien_dims(group: &FiniteGroup, sub: &[usize], d: u32) -> usize {
    let m = group.modulus();
    let mut total = CycNum::zero(m);
    for &g in sub {
        let mat = &group.element(g).matrix;
        let traces: Vec<CycNum> = (0..=d as u64)
            .map(|k| {
                let pk = mat.pow(k);
                (0..mat.rows()).fold(CycNum::zero(m), |acc, i| &acc + pk.get(i, i))
            })
            .collect();
        let mut h = vec![CycNum::one(m)];
        for k in 1..=d as usize {
            let mut s = CycNum::zero(m);
            for i in 1..=k {
                s = &s + &(&traces[i] * &h[k - i]);
            }
            h.push(s.scale(&rational(1, k as i64)));
        }
        total = &total + &h[d as usize];
    }
    let avg = total.scale(&rational(1, sub.len() as i64));
    let q = avg.as_rational().expect("Molien coefficients are rational");
    assert!(q.is_integer(), "Molien coefficient {q} is not an integer");
    q.to_integer().to_usize().expect("nonnegative")
}

/// Per-bidegree dimensions of the Z(g)-invariant part of H_g.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantDims {
    pub g: usize,
    pub name: String,
    pub det_is_one: bool,
    pub centralizer_order: usize,
    /// `dims[p][d]`.
    pub dims: Vec<Vec<usize>>,
}

impl InvariantDims {
    pub fn is_zero(&self) -> bool {
        self.dims.iter().flatten().all(|&x| x == 0)
    }
}

pub fn invariant_dims(ctx: &HochContext, g: usize, max_d: u32) -> InvariantDims {
    let group = ctx.group();
    let e = group.element(g);
    InvariantDims {
        g,
        name: e.name.clone(),
        det_is_one: e.det.is_one(),
        centralizer_order: group.centralizer(g).len(),
        dims: (0..=ctx.n())
            .map(|p| (0..=max_d).map(|d| invariant_basis(ctx, g, p, d).len()).collect())
            .collect(),
    }
}

/// Whether `det g ≠ 1` forces the Z(g)-invariant part of H_g to vanish in
/// all bidegrees up to `(n, max_d)`; trivially true when `det g = 1`.
pub fn determinant_vanishing_check(ctx: &HochContext, g: usize, max_d: u32) -> bool {
    let d = invariant_dims(ctx, g, max_d);
    d.det_is_one || d.is_zero()
}
