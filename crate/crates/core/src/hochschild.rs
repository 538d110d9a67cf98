//! Cochains `C = ⊕_g S(V) ⊗ Λ V* ⊗ g`, the subspaces Z and B, the smash
//! (cup) product, H-normal forms, the Koszul codifferential, and the
//! evaluators for Υ and for the bar-complex cup product.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::Value;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::exterior::{default_names, dual_action, mask_string, merge_sign, ExtForm, VolAssignment};
use crate::group::FiniteGroup;
use crate::linalg::{annihilator, eigen_decomposition, rref, Echelon, Mat};
use crate::poly::{binomial, fixed_projector, monomial_count, LinearSubst, Monomial, Poly, SkewElem};

/// `Σ_S f_S ⊗ e_S*` with the subset S encoded as a bitmask.
pub type VectorForm = BTreeMap<u32, Poly>;

fn vf_add(vf: &mut VectorForm, mask: u32, p: &Poly) {
    if p.is_zero() {
        return;
    }
    match vf.get_mut(&mask) {
        Some(q) => {
            q.add_assign(p);
            if q.is_zero() {
                vf.remove(&mask);
            }
        }
        None => {
            vf.insert(mask, p.clone());
        }
    }
}

/// `vf ∧ ω` for a constant form ω.
fn vf_wedge_right(vf: &VectorForm, form: &ExtForm) -> VectorForm {
    let mut out = VectorForm::new();
    for (&a, p) in vf {
        for (&b, c) in form.terms() {
            if a & b != 0 {
                continue;
            }
            let c = if merge_sign(a, b) { -c } else { c.clone() };
            vf_add(&mut out, a | b, &p.scale(&c));
        }
    }
    out
}

/// Which of C, Z, B a component belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    /// Not divisible by the volume form.
    InCOnly,
    /// In Z but not B.
    InZ,
    /// In B (hence also in Z).
    InB,
}

/// A homogeneous cochain of exterior degree `degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    n: usize,
    m: u32,
    degree: usize,
    comps: BTreeMap<usize, VectorForm>,
}

impl Cochain {
    pub fn zero(n: usize, m: u32, degree: usize) -> Cochain {
        Cochain {
            n,
            m,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `f ⊗ ω ⊗ g` for a homogeneous nonzero form ω.
    pub fn term(f: &Poly, omega: &ExtForm, g: usize) -> Result<Cochain> {
        let degree = omega.degree().ok_or(Error::NotHomogeneous)?;
        let mut c = Cochain::zero(f.n(), f.modulus(), degree);
        for (&mask, coef) in omega.terms() {
            c.add_term(g, mask, &f.scale(coef));
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &BTreeMap<usize, VectorForm> {
        &self.comps
    }

    pub fn component(&self, g: usize) -> Option<&VectorForm> {
        self.comps.get(&g)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Largest total polynomial degree among all coefficients.
    pub fn poly_degree(&self) -> u32 {
        self.comps
            .values()
            .flat_map(|vf| vf.values().map(Poly::degree))
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, g: usize, mask: u32, p: &Poly) {
        assert_eq!(mask.count_ones() as usize, self.degree, "inhomogeneous term");
        if p.is_zero() {
            return;
        }
        let vf = self.comps.entry(g).or_default();
        vf_add(vf, mask, p);
        if vf.is_empty() {
            self.comps.remove(&g);
        }
    }

    pub fn add_component(&mut self, g: usize, vf: &VectorForm) {
        for (&mask, p) in vf {
            self.add_term(g, mask, p);
        }
    }

    pub fn add_assign(&mut self, other: &Cochain) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding cochains of different degree");
        for (&g, vf) in &other.comps {
            self.add_component(g, vf);
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, c: &CycNum) -> Cochain {
        let mut out = Cochain::zero(self.n, self.m, self.degree);
        for (&g, vf) in &self.comps {
            for (&mask, p) in vf {
                out.add_term(g, mask, &p.scale(c));
            }
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&CycNum::from_integer(self.m, -1)))
    }

    /// Restrict to the component tagged by `g`.
    pub fn restrict(&self, g: usize) -> Cochain {
        let mut out = Cochain::zero(self.n, self.m, self.degree);
        if let Some(vf) = self.comps.get(&g) {
            out.add_component(g, vf);
        }
        out
    }

    /// `α(v_{i1} ∧ … ∧ v_{ip})` as an element of S(V)#G.
    pub fn evaluate(&self, indices: &[usize]) -> Result<SkewElem> {
        if indices.len() != self.degree {
            return Err(Error::Arity {
                expected: self.degree,
                got: indices.len(),
            });
        }
        let Some((mask, negative)) = sort_sign(indices) else {
            return Ok(SkewElem::zero());
        };
        let mut out = SkewElem::zero();
        for (&g, vf) in &self.comps {
            if let Some(p) = vf.get(&mask) {
                out.add(g, &if negative { p.neg() } else { p.clone() });
            }
        }
        Ok(out)
    }

    pub fn display_with(&self, group: &FiniteGroup, names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&g, vf) in &self.comps {
            for (&mask, p) in vf {
                let poly = p.display_with(names);
                let poly = if p.terms().len() > 1 { format!("({poly})") } else { poly };
                parts.push(format!("{poly}⊗{}⊗{}", mask_string(mask, names), group.name(g)));
            }
        }
        parts.join(" + ")
    }

    /// Machine-readable rendering, one entry per (g, basis form).
    pub fn to_json(&self, group: &FiniteGroup, names: &[String]) -> Value {
        let mut terms = Vec::new();
        for (&g, vf) in &self.comps {
            for (&mask, p) in vf {
                let wedge: Vec<usize> = (0..self.n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                terms.push(serde_json::json!({
                    "g": g,
                    "g_name": group.name(g),
                    "wedge": wedge,
                    "form": mask_string(mask, names),
                    "poly": p.display_with(names),
                }));
            }
        }
        serde_json::json!({
            "degree": self.degree,
            "terms": terms,
            "text": self.display_with(group, names),
        })
    }
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = default_names(self.n);
        let mut parts = Vec::new();
        for (&g, vf) in &self.comps {
            for (&mask, p) in vf {
                parts.push(format!("({})⊗{}⊗#{g}", p.display_with(&names), mask_string(mask, &names)));
            }
        }
        if parts.is_empty() {
            write!(f, "0[deg {}]", self.degree)
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Sorted mask of distinct indices and the parity of the sorting
/// permutation; `None` when an index repeats.
pub fn sort_sign(indices: &[usize]) -> Option<(u32, bool)> {
    let mut mask = 0u32;
    let mut inversions = 0usize;
    for (a, &i) in indices.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        inversions += indices[..a].iter().filter(|&&j| j > i).count();
    }
    Some((mask, inversions % 2 == 1))
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// All masks of `k` bits among `n`, ascending.
pub fn masks_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

/// Choice of ordered eigenbasis per element used by Υ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameChoice {
    /// Eigenvalues by ascending exponent, RREF order within each eigenspace.
    Canonical,
    /// Reversed order with the j-th vector scaled by j+1.
    Alternate,
}

/// Eigenbasis data of one element.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    /// Columns are the eigenvectors b_j.
    pub basis: Mat,
    pub eigenvalues: Vec<CycNum>,
    /// v_i ↦ Σ_j C[j][i] y_j with C = B⁻¹.
    to_eigen: LinearSubst,
    /// y_j ↦ Σ_i B[i][j] v_i.
    from_eigen: LinearSubst,
    inverse: Mat,
}

impl EigenFrame {
    fn new(g: &Mat, choice: FrameChoice) -> EigenFrame {
        let n = g.rows();
        let m = g.modulus();
        let spaces = eigen_decomposition(g).expect("group elements have finite order");
        let mut vecs: Vec<(Vec<CycNum>, CycNum)> = Vec::new();
        for es in &spaces {
            for b in es.space.basis() {
                vecs.push((b.clone(), es.eigenvalue.clone()));
            }
        }
        if choice == FrameChoice::Alternate {
            vecs.reverse();
            for (j, (v, _)) in vecs.iter_mut().enumerate() {
                let s = CycNum::from_integer(m, j as i64 + 1);
                for x in v.iter_mut() {
                    *x = &*x * &s;
                }
            }
        }
        let mut basis = Mat::zeros(n, n, m);
        for (j, (v, _)) in vecs.iter().enumerate() {
            for i in 0..n {
                basis.set(i, j, v[i].clone());
            }
        }
        let inverse = basis.inverse().expect("eigenvectors form a basis");
        EigenFrame {
            to_eigen: LinearSubst::from_columns(&inverse),
            from_eigen: LinearSubst::from_columns(&basis),
            eigenvalues: vecs.into_iter().map(|(_, e)| e).collect(),
            basis,
            inverse,
        }
    }

    /// `^{s_1⋯s_{j-1}}` on a polynomial in eigen-coordinates.
    fn twist(&self, f: &Poly, j: usize) -> Poly {
        if j == 0 {
            return f.clone();
        }
        let mut out = Poly::zero(f.n(), f.modulus());
        for (mono, c) in f.terms() {
            let mut coef = c.clone();
            for i in 0..j {
                let a = mono.exp(i);
                if a > 0 && !self.eigenvalues[i].is_one() {
                    coef = &coef * &self.eigenvalues[i].pow(a as i64).expect("root of unity");
                }
            }
            out.add_term(*mono, &coef);
        }
        out
    }

    /// Express a form given in the standard dual basis in the dual eigenbasis:
    /// `e_s* = Σ_j B[s][j] b_j*`.
    fn form_to_eigen(&self, mask: u32) -> ExtForm {
        let n = self.basis.rows();
        let m = self.basis.modulus();
        mask_indices(mask).iter().fold(ExtForm::one(n, m), |acc, &s| {
            acc.wedge(&ExtForm::linear(n, m, self.basis.row(s)))
        })
    }
}

struct ElemData {
    action: LinearSubst,
    reducer: Option<LinearSubst>,
    /// Basis of Ann(V^g) as 1-forms.
    ann_fixed: Vec<ExtForm>,
    /// Basis of Ann(perp) ≅ (V^g)* as 1-forms.
    ann_perp: Vec<ExtForm>,
    /// `v_k - ^g v_k` for each k.
    koszul: Vec<Poly>,
    frame: OnceLock<EigenFrame>,
}

/// Everything needed to compute with cochains for one group: the group,
/// a volume assignment, the Υ basis choice, and per-element caches.
pub struct HochContext<'g> {
    group: &'g FiniteGroup,
    vols: VolAssignment,
    frame_choice: FrameChoice,
    cache: Vec<OnceLock<ElemData>>,
}

impl<'g> HochContext<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        Self::with_vols(group, VolAssignment::canonical(group))
    }

    pub fn with_vols(group: &'g FiniteGroup, vols: VolAssignment) -> Self {
        HochContext {
            group,
            vols,
            frame_choice: FrameChoice::Canonical,
            cache: (0..group.order()).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Same group and volume forms with a different Υ basis choice.
    pub fn with_frame_choice(&self, choice: FrameChoice) -> HochContext<'g> {
        HochContext {
            group: self.group,
            vols: self.vols.clone(),
            frame_choice: choice,
            cache: (0..self.group.order()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn vols(&self) -> &VolAssignment {
        &self.vols
    }

    pub fn vol(&self, g: usize) -> &ExtForm {
        self.vols.get(g)
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn m(&self) -> u32 {
        self.group.modulus()
    }

    fn data(&self, g: usize) -> &ElemData {
        self.cache[g].get_or_init(|| {
            let e = self.group.element(g);
            let n = self.n();
            let m = self.m();
            let one_forms = |rows: &[Vec<CycNum>]| -> Vec<ExtForm> {
                rows.iter().map(|r| ExtForm::linear(n, m, r)).collect()
            };
            let id_minus_g = Mat::identity(n, m).sub(&e.matrix);
            ElemData {
                action: LinearSubst::from_columns(&e.matrix),
                reducer: (e.codim > 0).then(|| LinearSubst::from_columns(&fixed_projector(self.group, g))),
                ann_fixed: one_forms(annihilator(&e.fixed).basis()),
                ann_perp: one_forms(annihilator(&e.perp).basis()),
                koszul: (0..n).map(|k| Poly::linear(n, m, &id_minus_g.column(k))).collect(),
                frame: OnceLock::new(),
            }
        })
    }

    pub fn frame(&self, g: usize) -> &EigenFrame {
        let d = self.data(g);
        d.frame
            .get_or_init(|| EigenFrame::new(&self.group.element(g).matrix, self.frame_choice))
    }

    /// `^g f`.
    pub fn act_poly(&self, g: usize, f: &Poly) -> Poly {
        if g == 0 {
            return f.clone();
        }
        self.data(g).action.apply(f)
    }

    /// Image of `f` in S(V)/I(perp_g) ≅ S(V^g).
    pub fn reduce(&self, g: usize, f: &Poly) -> Poly {
        match &self.data(g).reducer {
            Some(r) => r.apply(f),
            None => f.clone(),
        }
    }

    /// Basis 1-forms of Ann(perp_g), identified with (V^g)*.
    pub fn fixed_dual_basis(&self, g: usize) -> &[ExtForm] {
        &self.data(g).ann_perp
    }

    /// Basis 1-forms of Ann(V^g).
    pub fn perp_dual_basis(&self, g: usize) -> &[ExtForm] {
        &self.data(g).ann_fixed
    }

    /// `^g (e_S*)` as a constant form.
    pub fn act_mask(&self, g: usize, mask: u32) -> ExtForm {
        dual_action(self.group, g, &ExtForm::monomial(self.n(), self.m(), mask, CycNum::one(self.m())))
    }
}

/// Classify each component of `alpha` as lying in B, in Z, or only in C.
pub fn classify(ctx: &HochContext, alpha: &Cochain) -> BTreeMap<usize, TermClass> {
    alpha
        .comps
        .iter()
        .map(|(&g, vf)| (g, classify_component(ctx, g, vf)))
        .collect()
}

fn classify_component(ctx: &HochContext, g: usize, vf: &VectorForm) -> TermClass {
    let in_z = ctx
        .perp_dual_basis(g)
        .iter()
        .all(|lambda| vf_wedge_right(vf, lambda).is_empty());
    if !in_z {
        return TermClass::InCOnly;
    }
    if vf.values().all(|p| ctx.reduce(g, p).is_zero()) {
        TermClass::InB
    } else {
        TermClass::InZ
    }
}

pub fn is_cocycle_form(ctx: &HochContext, alpha: &Cochain) -> bool {
    classify(ctx, alpha).values().all(|c| *c != TermClass::InCOnly)
}

/// `(f_g⊗ω_g⊗g) ⋄ (f_h⊗ω_h⊗h) = f_g·^g f_h ⊗ ω_g ∧ ^g ω_h ⊗ gh`.
pub fn smash_cup(ctx: &HochContext, alpha: &Cochain, beta: &Cochain) -> Cochain {
    let group = ctx.group();
    let mut out = Cochain::zero(ctx.n(), ctx.m(), alpha.degree + beta.degree);
    if alpha.degree + beta.degree > ctx.n() {
        return out;
    }
    for (&g, va) in &alpha.comps {
        for (&h, vb) in &beta.comps {
            let gh = group.mul(g, h);
            for (&mb, qb) in vb {
                let gq = ctx.act_poly(g, qb);
                let gform = ctx.act_mask(g, mb);
                for (&ma, pa) in va {
                    let prod = pa.mul(&gq);
                    for (&mw, cw) in gform.terms() {
                        if ma & mw != 0 {
                            continue;
                        }
                        let c = if merge_sign(ma, mw) { -cw } else { cw.clone() };
                        out.add_term(gh, ma | mw, &prod.scale(&c));
                    }
                }
            }
        }
    }
    out
}

/// A cohomology representative in H-normal form: every component has
/// polynomial part in S(V^g) and exterior part divisible by vol_g^⊥.
/// Stored in standard coordinates, which makes the form canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HClass(pub Cochain);

impl HClass {
    pub fn cochain(&self) -> &Cochain {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Projection Z → H killing exactly B.
pub fn proj_h(ctx: &HochContext, alpha: &Cochain) -> Result<HClass> {
    let mut out = Cochain::zero(alpha.n, alpha.m, alpha.degree);
    for (&g, vf) in &alpha.comps {
        if classify_component(ctx, g, vf) == TermClass::InCOnly {
            return Err(Error::NotCocycle { g });
        }
        for (&mask, p) in vf {
            out.add_term(g, mask, &ctx.reduce(g, p));
        }
    }
    Ok(HClass(out))
}

/// `(d*α)(v_{j0}∧…∧v_{jp}) = Σ_i (-1)^i (v_{ji}·α(…ĵ_i…) − α(…ĵ_i…)·v_{ji})`
/// with the right action `(f⊗g)·v = f·(^g v) ⊗ g`.
pub fn koszul_codifferential(ctx: &HochContext, alpha: &Cochain) -> Cochain {
    let n = ctx.n();
    let p = alpha.degree;
    let mut out = Cochain::zero(n, ctx.m(), p + 1);
    if p + 1 > n {
        return out;
    }
    for (&g, vf) in &alpha.comps {
        let lin = &ctx.data(g).koszul;
        for mask in masks_of_size(n, p + 1) {
            let idx = mask_indices(mask);
            let mut acc = Poly::zero(n, ctx.m());
            for (i, &j) in idx.iter().enumerate() {
                if let Some(f) = vf.get(&(mask & !(1 << j))) {
                    let t = lin[j].mul(f);
                    if i % 2 == 0 {
                        acc.add_assign(&t);
                    } else {
                        acc = acc.sub(&t);
                    }
                }
            }
            out.add_term(g, mask, &acc);
        }
    }
    out
}

/// Evaluate Υ(α) on `p` polynomial arguments.
pub fn upsilon_eval(ctx: &HochContext, alpha: &Cochain, args: &[Poly]) -> Result<SkewElem> {
    let p = alpha.degree;
    if args.len() != p {
        return Err(Error::Arity {
            expected: p,
            got: args.len(),
        });
    }
    let mut out = SkewElem::zero();
    for (&g, vf) in &alpha.comps {
        let frame = ctx.frame(g);
        let eigen_args: Vec<Poly> = args.iter().map(|f| frame.to_eigen.apply(f)).collect();
        let eigen_vf = component_in_eigenbasis(frame, vf);
        let mut factor_cache: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
        for (&jmask, fj) in &eigen_vf {
            let js = mask_indices(jmask);
            let mut prod = fj.clone();
            for (k, &j) in js.iter().enumerate() {
                let factor = factor_cache.entry((k, j)).or_insert_with(|| {
                    let d = crate::poly::quantum_partial(&eigen_args[k], j, &frame.eigenvalues[j]);
                    frame.from_eigen.apply(&frame.twist(&d, j))
                });
                if factor.is_zero() {
                    prod = Poly::zero(ctx.n(), ctx.m());
                    break;
                }
                prod = factor.mul(&prod);
            }
            out.add(g, &prod);
        }
    }
    Ok(out)
}

/// Rewrite a component `Σ f_S e_S*` as `Σ f'_J b_J*` in the dual eigenbasis.
fn component_in_eigenbasis(frame: &EigenFrame, vf: &VectorForm) -> VectorForm {
    let mut out = VectorForm::new();
    for (&mask, f) in vf {
        for (&jm, c) in frame.form_to_eigen(mask).terms() {
            vf_add(&mut out, jm, &f.scale(c));
        }
    }
    out
}

/// Υ(α) prepared for evaluation on ordered tuples of distinct basis
/// vectors. On `v_i` the eigen-coordinates are constants, so each factor
/// is the corresponding entry of `B⁻¹` and Υ is linear in the coefficient.
/// Per element: the tag, its eigenframe, and the terms as (eigen-index tuple, coefficient).
type UpsilonPart<'a> = (usize, &'a EigenFrame, Vec<(Vec<usize>, Poly)>);

struct UpsilonOnVectors<'a> {
    parts: Vec<UpsilonPart<'a>>,
    m: u32,
}

impl<'a> UpsilonOnVectors<'a> {
    fn new(ctx: &'a HochContext, alpha: &Cochain) -> Self {
        let parts = alpha
            .comps
            .iter()
            .map(|(&g, vf)| {
                let frame = ctx.frame(g);
                let terms = component_in_eigenbasis(frame, vf)
                    .into_iter()
                    .map(|(jm, f)| (mask_indices(jm), f))
                    .collect();
                (g, frame, terms)
            })
            .collect();
        UpsilonOnVectors { parts, m: ctx.m() }
    }

    fn eval(&self, tuple: &[usize]) -> SkewElem {
        let mut out = SkewElem::zero();
        for (g, frame, terms) in &self.parts {
            for (js, fj) in terms {
                let mut c = CycNum::one(self.m);
                for (&j, &i) in js.iter().zip(tuple) {
                    c = &c * frame.inverse.get(j, i);
                    if c.is_zero() {
                        break;
                    }
                }
                if !c.is_zero() {
                    out.add(*g, &fj.scale(&c));
                }
            }
        }
        out
    }
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let k = used.len();
        if cur.len() == k {
            let inv = (0..k)
                .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                .filter(|&(a, b)| cur[a] > cur[b])
                .count();
            out.push((cur.clone(), inv % 2 == 1));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `Φ*(Υ α)`: on each wedge basis element, the signed sum over orderings.
pub fn phi_star_upsilon(ctx: &HochContext, alpha: &Cochain) -> Cochain {
    let n = ctx.n();
    let p = alpha.degree;
    let perms = permutations_with_sign(p);
    let ups = UpsilonOnVectors::new(ctx, alpha);
    let mut out = Cochain::zero(n, ctx.m(), p);
    for mask in masks_of_size(n, p) {
        let idx = mask_indices(mask);
        let mut acc = SkewElem::zero();
        for (perm, neg) in &perms {
            let tuple: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            let val = ups.eval(&tuple);
            acc.add_elem(&if *neg { val.scale(&CycNum::from_integer(ctx.m(), -1)) } else { val });
        }
        for (g, f) in &acc.comps {
            out.add_term(*g, mask, f);
        }
    }
    out
}

/// Whether `Φ*Υ α = α` on every wedge basis element.
pub fn phi_star_upsilon_check(ctx: &HochContext, alpha: &Cochain) -> bool {
    phi_star_upsilon(ctx, alpha) == *alpha
}

/// The bar-complex cup product `Φ*(Υα ⌣ Υβ)`, evaluated on the wedge basis:
/// `γ(v_I) = Σ_π sgn(π) Υα(v_{π(1..p)}) · Υβ(v_{π(p+1..p+q)})`.
pub fn cup_via_bar(ctx: &HochContext, alpha: &Cochain, beta: &Cochain) -> Result<Cochain> {
    let n = ctx.n();
    let (p, q) = (alpha.degree, beta.degree);
    if p + q > n {
        return Err(Error::DegreeOverflow { p, q, n });
    }
    let group = ctx.group();
    let mut out = Cochain::zero(n, ctx.m(), p + q);
    let perms = permutations_with_sign(p + q);
    let (upa, upb) = (UpsilonOnVectors::new(ctx, alpha), UpsilonOnVectors::new(ctx, beta));
    let mut ua: BTreeMap<Vec<usize>, SkewElem> = BTreeMap::new();
    let mut ub: BTreeMap<Vec<usize>, SkewElem> = BTreeMap::new();
    for mask in masks_of_size(n, p + q) {
        let idx = mask_indices(mask);
        let mut acc = SkewElem::zero();
        for (perm, neg) in &perms {
            let tuple: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            let a = ua
                .entry(tuple[..p].to_vec())
                .or_insert_with(|| upa.eval(&tuple[..p]))
                .clone();
            if a.is_zero() {
                continue;
            }
            let b = ub
                .entry(tuple[p..].to_vec())
                .or_insert_with(|| upb.eval(&tuple[p..]))
                .clone();
            if b.is_zero() {
                continue;
            }
            let prod = crate::poly::skew_multiply(group, &a, &b);
            acc.add_elem(&if *neg { prod.scale(&CycNum::from_integer(ctx.m(), -1)) } else { prod });
        }
        for (g, f) in &acc.comps {
            out.add_term(*g, mask, f);
        }
    }
    Ok(out)
}

/// Split a Z-component `ω = Σ_S f_S a_S ∧ vol_g` over the basis
/// `a_S` of Λ(V^g)*; keys are subsets of `fixed_dual_basis(g)`.
pub fn split_by_vol(ctx: &HochContext, g: usize, vf: &VectorForm, degree: usize) -> Option<BTreeMap<u32, Poly>> {
    let c = ctx.group().element(g).codim;
    if degree < c {
        return vf.is_empty().then(BTreeMap::new);
    }
    let r = ctx.fixed_dual_basis(g).len();
    let n = ctx.n();
    let m = ctx.m();
    let vol = ctx.vol(g);
    let subsets = masks_of_size(r, degree - c);
    let columns: Vec<ExtForm> = subsets
        .iter()
        .map(|&s| {
            mask_indices(s)
                .iter()
                .fold(ExtForm::one(n, m), |acc, &i| acc.wedge(&ctx.fixed_dual_basis(g)[i]))
                .wedge(vol)
        })
        .collect();
    // gather constant forms per monomial
    let mut per_mono: BTreeMap<Monomial, ExtForm> = BTreeMap::new();
    for (&mask, f) in vf {
        for (mono, coef) in f.terms() {
            let e = per_mono.entry(*mono).or_insert_with(|| ExtForm::zero(n, m));
            *e = e.add(&ExtForm::monomial(n, m, mask, coef.clone()));
        }
    }
    let keys = masks_of_size(n, degree);
    let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
    for (mono, form) in per_mono {
        // solve Σ x_s columns[s] = form
        let k = columns.len();
        let rows: Vec<Vec<CycNum>> = keys
            .iter()
            .map(|&key| {
                let mut row: Vec<CycNum> = columns.iter().map(|col| col.coeff(key)).collect();
                row.push(form.coeff(key));
                row
            })
            .collect();
        let (red, pivots) = rref(rows, k + 1, m);
        if pivots.last() == Some(&k) {
            return None;
        }
        for (row, &pc) in red.iter().zip(&pivots) {
            let x = &row[k];
            if !x.is_zero() {
                let e = out.entry(subsets[pc]).or_insert_with(|| Poly::zero(n, m));
                e.add_term(mono, x);
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    Some(out)
}

/// The cup product in split form:
/// `Σ_{g ≤ gh} (-1)^m θ(g,h) f_g f_h ⊗ dv_g ∧ dv_h ∧ vol_gh ⊗ gh`
/// with `m = codim(g)·(q − codim(h))`.
pub fn cup_formula(ctx: &HochContext, alpha: &Cochain, beta: &Cochain) -> Result<Cochain> {
    let group = ctx.group();
    let (p, q) = (alpha.degree, beta.degree);
    let n = ctx.n();
    let mut out = Cochain::zero(n, ctx.m(), p + q);
    if p + q > n {
        return Ok(out);
    }
    for (&g, va) in &alpha.comps {
        let sa = split_by_vol(ctx, g, va, p).ok_or(Error::NotCocycle { g })?;
        for (&h, vb) in &beta.comps {
            let sb = split_by_vol(ctx, h, vb, q).ok_or(Error::NotCocycle { g: h })?;
            let gh = group.mul(g, h);
            let theta = crate::exterior::theta(group, ctx.vols(), g, h);
            if theta.is_zero() {
                continue;
            }
            let cg = group.element(g).codim;
            let ch = group.element(h).codim;
            let sign_neg = (cg * (q - ch)) % 2 == 1;
            let scalar = if sign_neg { -&theta } else { theta };
            for (&s, fs) in &sa {
                let dvg = mask_indices(s)
                    .iter()
                    .fold(ExtForm::one(n, ctx.m()), |acc, &i| acc.wedge(&ctx.fixed_dual_basis(g)[i]));
                for (&t, ft) in &sb {
                    let dvh = mask_indices(t)
                        .iter()
                        .fold(ExtForm::one(n, ctx.m()), |acc, &i| acc.wedge(&ctx.fixed_dual_basis(h)[i]));
                    let form = dvg.wedge(&dvh).wedge(ctx.vol(gh)).scale(&scalar);
                    let f = fs.mul(ft);
                    for (&mask, c) in form.terms() {
                        out.add_term(gh, mask, &f.scale(c));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A basis of `Z^{p}_g` with polynomial part of degree `d`:
/// `x^a ⊗ a_S ∧ vol_g ⊗ g` over monomials and subsets of (V^g)*.
pub fn z_basis(ctx: &HochContext, g: usize, p: usize, d: u32) -> Vec<Cochain> {
    let c = ctx.group().element(g).codim;
    if p < c {
        return Vec::new();
    }
    let n = ctx.n();
    let m = ctx.m();
    let forms = split_forms(ctx, g, p - c);
    let mut out = Vec::new();
    for mono in Monomial::all_of_degree(n, d) {
        let f = Poly::term(n, mono, CycNum::one(m));
        for form in &forms {
            out.push(Cochain::term(&f, form, g).expect("homogeneous"));
        }
    }
    out
}

/// `a_S ∧ vol_g` over subsets S of the (V^g)* basis of size k.
fn split_forms(ctx: &HochContext, g: usize, k: usize) -> Vec<ExtForm> {
    let n = ctx.n();
    let m = ctx.m();
    let basis = ctx.fixed_dual_basis(g);
    masks_of_size(basis.len(), k)
        .into_iter()
        .map(|s| {
            mask_indices(s)
                .iter()
                .fold(ExtForm::one(n, m), |acc, &i| acc.wedge(&basis[i]))
                .wedge(ctx.vol(g))
        })
        .collect()
}

/// A basis of `H^{p}_g` in polynomial degree `d`: monomials in a basis of
/// V^g times `a_S ∧ vol_g`.
pub fn h_basis(ctx: &HochContext, g: usize, p: usize, d: u32) -> Vec<Cochain> {
    let e = ctx.group().element(g);
    let c = e.codim;
    if p < c {
        return Vec::new();
    }
    let n = ctx.n();
    let m = ctx.m();
    let fixed_vars: Vec<Poly> = e.fixed.basis().iter().map(|u| Poly::linear(n, m, u)).collect();
    let r = fixed_vars.len();
    let forms = split_forms(ctx, g, p - c);
    let mut out = Vec::new();
    for mono in Monomial::all_of_degree(r, d) {
        let mut f = Poly::one(n, m);
        for (i, u) in fixed_vars.iter().enumerate() {
            f = f.mul(&u.pow(mono.exp(i) as u32));
        }
        for form in &forms {
            out.push(Cochain::term(&f, form, g).expect("homogeneous"));
        }
    }
    out
}

/// One row of the truncated cohomology dimension table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimRow {
    pub g: usize,
    pub p: usize,
    pub d: u32,
    /// `dim S(V^g)_d · dim Λ^{p-c}(V^g)*`.
    pub formula: usize,
    /// `dim ker d* − dim im d*` on the (p,d) slice of the g-component.
    pub oracle: usize,
}

fn codifferential_rank(ctx: &HochContext, g: usize, p: usize, d: u32) -> usize {
    let n = ctx.n();
    if p + 1 > n {
        return 0;
    }
    let m = ctx.m();
    let mut ech: Echelon<(u32, Monomial)> = Echelon::new(m);
    for mask in masks_of_size(n, p) {
        for mono in Monomial::all_of_degree(n, d) {
            let mut alpha = Cochain::zero(n, m, p);
            alpha.add_term(g, mask, &Poly::term(n, mono, CycNum::one(m)));
            let img = koszul_codifferential(ctx, &alpha);
            let mut v = BTreeMap::new();
            if let Some(vf) = img.component(g) {
                for (&mk, f) in vf {
                    for (mo, c) in f.terms() {
                        v.insert((mk, *mo), c.clone());
                    }
                }
            }
            ech.insert(v);
        }
    }
    ech.rank()
}

/// Compare the closed-form dimension of `H^{p,d}_g` with the rank
/// computation on the Koszul complex, for every element.
pub fn truncated_cohomology_dims(ctx: &HochContext, p: usize, d: u32) -> Vec<DimRow> {
    let n = ctx.n();
    (0..ctx.group().order())
        .map(|g| {
            let e = ctx.group().element(g);
            let r = n - e.codim;
            let formula = if p < e.codim {
                0
            } else {
                monomial_count(r, d) * binomial(r, p - e.codim)
            };
            let total = binomial(n, p) * monomial_count(n, d);
            let out_rank = codifferential_rank(ctx, g, p, d);
            let in_rank = if p >= 1 && d >= 1 {
                codifferential_rank(ctx, g, p - 1, d - 1)
            } else {
                0
            };
            DimRow {
                g,
                p,
                d,
                formula,
                oracle: total - out_rank - in_rank,
            }
        })
        .collect()
}

/// Parse a cochain from JSON: a list of `{"poly": .., "form": .., "g": ..}`
/// terms, where `form` is `"vol"` (the volume form of g), `"1"`,
/// `{"wedge": [i, ..]}` with 1-based indices, or a list of
/// `{"c": scalar, "wedge": [..]}`; and `g` is an index, an element name,
/// or a matrix.
pub fn parse_cochain(v: &Value, ctx: &HochContext, names: &[String]) -> Result<Cochain> {
    let group = ctx.group();
    let n = ctx.n();
    let m = ctx.m();
    let terms = match v {
        Value::Array(a) => a.clone(),
        Value::Object(o) if o.contains_key("terms") => o["terms"]
            .as_array()
            .cloned()
            .ok_or_else(|| Error::malformed("terms", "expected a list"))?,
        Value::Object(_) => vec![v.clone()],
        _ => return Err(Error::malformed("", "expected a list of cochain terms")),
    };
    let mut out: Option<Cochain> = None;
    for (i, t) in terms.iter().enumerate() {
        let path = format!("[{i}]");
        let gv = t.get("g").ok_or_else(|| Error::malformed(&path, "missing \"g\""))?;
        let g = match gv {
            Value::Number(x) => x
                .as_u64()
                .map(|x| x as usize)
                .filter(|&x| x < group.order())
                .ok_or_else(|| Error::malformed(format!("{path}.g"), "index out of range"))?,
            Value::String(s) => group
                .index_of_name(s)
                .ok_or_else(|| Error::malformed(format!("{path}.g"), format!("no element named {s:?}")))?,
            Value::Array(_) => {
                let mat = crate::group::parse_matrix(gv, m, &format!("{path}.g"))?;
                group
                    .index_of_matrix(&mat)
                    .ok_or_else(|| Error::malformed(format!("{path}.g"), "matrix is not in the group"))?
            }
            _ => return Err(Error::malformed(format!("{path}.g"), "expected index, name or matrix")),
        };
        let poly = match t.get("poly") {
            Some(pv) => Poly::parse(pv, n, m, names).map_err(|e| crate::group::relocate(e, &format!("{path}.poly")))?,
            None => Poly::one(n, m),
        };
        let form = parse_form(t.get("form"), ctx, g, names).map_err(|e| crate::group::relocate(e, &format!("{path}.form")))?;
        let term = Cochain::term(&poly, &form, g)
            .map_err(|_| Error::malformed(format!("{path}.form"), "form must be homogeneous and nonzero"))?;
        match &mut out {
            None => out = Some(term),
            Some(acc) => {
                if acc.degree() != term.degree() {
                    return Err(Error::malformed(&path, "terms have different exterior degrees"));
                }
                acc.add_assign(&term);
            }
        }
    }
    out.ok_or_else(|| Error::malformed("", "empty cochain"))
}

fn parse_wedge(v: &Value, n: usize, names: &[String]) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| Error::malformed("wedge", "expected a list"))?;
    arr.iter()
        .map(|x| match x {
            Value::Number(k) => k
                .as_u64()
                .map(|k| k as usize)
                .filter(|&k| k >= 1 && k <= n)
                .map(|k| k - 1)
                .ok_or_else(|| Error::malformed("wedge", format!("index {k} out of range"))),
            Value::String(s) => {
                let base = s.trim_end_matches('*');
                names
                    .iter()
                    .position(|x| x == base)
                    .ok_or_else(|| Error::malformed("wedge", format!("unknown coordinate {s:?}")))
            }
            _ => Err(Error::malformed("wedge", "expected index or name")),
        })
        .collect()
}

fn parse_form(v: Option<&Value>, ctx: &HochContext, g: usize, names: &[String]) -> Result<ExtForm> {
    let n = ctx.n();
    let m = ctx.m();
    match v {
        None => Ok(ExtForm::one(n, m)),
        Some(Value::String(s)) if s == "vol" => Ok(ctx.vol(g).clone()),
        Some(Value::String(s)) if s == "1" => Ok(ExtForm::one(n, m)),
        Some(Value::Object(o)) => {
            let idx = parse_wedge(o.get("wedge").unwrap_or(&Value::Array(vec![])), n, names)?;
            let c = match o.get("c") {
                Some(c) => CycNum::parse_value(c, m)?,
                None => CycNum::one(m),
            };
            Ok(ExtForm::wedge_of(n, m, &idx).scale(&c))
        }
        Some(Value::Array(items)) => {
            let mut acc = ExtForm::zero(n, m);
            for it in items {
                acc = acc.add(&parse_form(Some(it), ctx, g, names)?);
            }
            Ok(acc)
        }
        Some(other) => Err(Error::malformed("", format!("unrecognized form {other}"))),
    }
}
