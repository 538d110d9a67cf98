//! The exterior algebra Λ V* with the dual G-action, volume forms of perp
//! spaces, the 2-cocycle θ, and the twisted volume algebra A_vol.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{annihilator, Echelon, Mat};
use crate::poset::PosetOnQuotient;

/// Sign of moving the wedge factors of `b` past those of `a` into sorted
/// order: parity of the pairs `(i ∈ a, j ∈ b)` with `i > j`.
pub fn merge_sign(a: u32, b: u32) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    count % 2 == 1
}

/// Element of Λ V*; the bitmask key `S` stands for `e_{s1}* ∧ … ∧ e_{sk}*`
/// with `s1 < … < sk`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtForm {
    n: usize,
    m: u32,
    terms: BTreeMap<u32, CycNum>,
}

impl ExtForm {
    pub fn zero(n: usize, m: u32) -> ExtForm {
        ExtForm {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, m: u32) -> ExtForm {
        ExtForm::monomial(n, m, 0, CycNum::one(m))
    }

    pub fn monomial(n: usize, m: u32, mask: u32, c: CycNum) -> ExtForm {
        let mut f = ExtForm::zero(n, m);
        if !c.is_zero() {
            f.terms.insert(mask, c);
        }
        f
    }

    /// `e_{i1}* ∧ … ∧ e_{ik}*` for 0-based indices in any order.
    pub fn wedge_of(n: usize, m: u32, indices: &[usize]) -> ExtForm {
        let mut acc = ExtForm::one(n, m);
        for &i in indices {
            acc = acc.wedge(&ExtForm::monomial(n, m, 1 << i, CycNum::one(m)));
        }
        acc
    }

    /// The 1-form `Σ c_i e_i*`.
    pub fn linear(n: usize, m: u32, coeffs: &[CycNum]) -> ExtForm {
        let mut f = ExtForm::zero(n, m);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                f.terms.insert(1 << i, c.clone());
            }
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<u32, CycNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u32) -> CycNum {
        self.terms.get(&mask).cloned().unwrap_or_else(|| CycNum::zero(self.m))
    }

    /// Common degree of all terms, or `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.count_ones() as usize);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, mask: u32, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(|| CycNum::zero(c.modulus()));
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &ExtForm) -> ExtForm {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &ExtForm) -> ExtForm {
        self.add(&other.scale(&CycNum::from_integer(self.m, -1)))
    }

    pub fn scale(&self, c: &CycNum) -> ExtForm {
        if c.is_zero() {
            return ExtForm::zero(self.n, self.m);
        }
        ExtForm {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn wedge(&self, other: &ExtForm) -> ExtForm {
        let mut out = ExtForm::zero(self.n, self.m);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                let c = if merge_sign(a, b) { -c } else { c };
                out.add_term(a | b, &c);
            }
        }
        out
    }

    /// If `self = c · other` for a scalar `c`, return `c`.
    pub fn ratio_to(&self, other: &ExtForm) -> Option<CycNum> {
        let Some((mask, b)) = other.terms.iter().next() else {
            return self.is_zero().then(|| CycNum::zero(self.m));
        };
        let c = self.coeff(*mask).checked_div(b).ok()?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Human-readable form using the given coordinate names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&mask, c)| {
                let w = mask_string(mask, names);
                if mask == 0 {
                    c.to_string()
                } else if c.is_one() {
                    w
                } else if (-c).is_one() {
                    format!("-{w}")
                } else {
                    format!("{c}*{w}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// `v1*∧v2*` style rendering of a basis mask.
pub fn mask_string(mask: u32, names: &[String]) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut out = Vec::new();
    for i in 0..32 {
        if mask & (1 << i) != 0 {
            let base = names.get(i).cloned().unwrap_or_else(|| format!("v{}", i + 1));
            out.push(format!("{base}*"));
        }
    }
    out.join("∧")
}

/// Default coordinate names `v1 … vn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_names(self.n)))
    }
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `^h ω` given the matrix of `h⁻¹`: `e_k* ↦ Σ_j (h⁻¹)[k][j] e_j*`, extended
/// multiplicatively.
pub fn dual_action_by_inverse(hinv: &Mat, a: &ExtForm) -> ExtForm {
    let n = a.n;
    let m = a.m;
    let images: Vec<ExtForm> = (0..n)
        .map(|k| ExtForm::linear(n, m, hinv.row(k)))
        .collect();
    let mut out = ExtForm::zero(n, m);
    for (&mask, c) in &a.terms {
        let mut img = ExtForm::one(n, m);
        for (k, image) in images.iter().enumerate() {
            if mask & (1 << k) != 0 {
                img = img.wedge(image);
            }
        }
        out = out.add(&img.scale(c));
    }
    out
}

/// The induced action of group element `h` on Λ V*.
pub fn dual_action(group: &FiniteGroup, h: usize, a: &ExtForm) -> ExtForm {
    if h == 0 {
        return a.clone();
    }
    dual_action_by_inverse(&group.element(group.inv(h)).matrix, a)
}

/// Canonical volume form: the wedge, in RREF order, of the basis of
/// Ann(V^g) ⊆ V*. Equal to 1 on the kernel.
pub fn volume_form(group: &FiniteGroup, g: usize) -> ExtForm {
    let e = group.element(g);
    let ann = annihilator(&e.fixed);
    let n = group.n();
    let m = group.modulus();
    ann.basis()
        .iter()
        .fold(ExtForm::one(n, m), |acc, row| acc.wedge(&ExtForm::linear(n, m, row)))
}

/// A choice of vol_g^⊥ for every element g.
#[derive(Clone, Debug)]
pub struct VolAssignment {
    vols: Vec<ExtForm>,
}

impl VolAssignment {
    pub fn canonical(group: &FiniteGroup) -> VolAssignment {
        VolAssignment {
            vols: (0..group.order()).map(|g| volume_form(group, g)).collect(),
        }
    }

    pub fn get(&self, g: usize) -> &ExtForm {
        &self.vols[g]
    }

    /// Replace vol_g^⊥ by another nonzero top form on the same perp space.
    pub fn set(&mut self, group: &FiniteGroup, g: usize, form: ExtForm) -> Result<()> {
        match form.ratio_to(&volume_form(group, g)) {
            Some(c) if !c.is_zero() => {
                self.vols[g] = form;
                Ok(())
            }
            _ => Err(Error::InvalidSpec(format!(
                "form for element {} is not a nonzero top form on its perp space",
                group.name(g)
            ))),
        }
    }
}

/// θ(g,h) with `vol_g ∧ vol_h = θ(g,h) vol_{gh}`.
pub fn theta(group: &FiniteGroup, vols: &VolAssignment, g: usize, h: usize) -> CycNum {
    let w = vols.get(g).wedge(vols.get(h));
    let gh = group.mul(g, h);
    w.ratio_to(vols.get(gh))
        .expect("wedge of volume forms is a multiple of the product's volume form")
}

/// θ for all pairs, row-major.
#[derive(Clone, Debug)]
pub struct ThetaTable {
    order: usize,
    values: Vec<CycNum>,
}

impl ThetaTable {
    pub fn new(group: &FiniteGroup, vols: &VolAssignment) -> ThetaTable {
        let order = group.order();
        let mut values = Vec::with_capacity(order * order);
        for g in 0..order {
            for h in 0..order {
                values.push(theta(group, vols, g, h));
            }
        }
        ThetaTable { order, values }
    }

    pub fn get(&self, g: usize, h: usize) -> &CycNum {
        &self.values[g * self.order + h]
    }

    pub fn set(&mut self, g: usize, h: usize, v: CycNum) {
        self.values[g * self.order + h] = v;
    }

    /// First triple violating `θ(gh,k)θ(g,h) = θ(g,hk)θ(h,k)`.
    pub fn cocycle_violation(&self, group: &FiniteGroup) -> Option<(usize, usize, usize)> {
        let o = self.order;
        for g in 0..o {
            for h in 0..o {
                let gh = group.mul(g, h);
                for k in 0..o {
                    let lhs = self.get(gh, k) * self.get(g, h);
                    let rhs = self.get(g, group.mul(h, k)) * self.get(h, k);
                    if lhs != rhs {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }
}

/// `Σ c_g vol_g^⊥ ⊗ g` in the twisted volume algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AVolElem {
    pub coeffs: BTreeMap<usize, CycNum>,
}

impl AVolElem {
    pub fn basis(g: usize, m: u32) -> AVolElem {
        AVolElem {
            coeffs: BTreeMap::from([(g, CycNum::one(m))]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(CycNum::is_zero)
    }

    fn add_term(&mut self, g: usize, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let m = c.modulus();
        let e = self.coeffs.entry(g).or_insert_with(|| CycNum::zero(m));
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    /// Degree of each term is the codimension of its tag.
    pub fn degrees(&self, group: &FiniteGroup) -> Vec<usize> {
        self.coeffs.keys().map(|&g| group.element(g).codim).collect()
    }
}

/// Product in A_vol: `(vol_g⊗g)(vol_h⊗h) = θ(g,h) vol_{gh}⊗gh`.
pub fn avol_multiply(group: &FiniteGroup, table: &ThetaTable, x: &AVolElem, y: &AVolElem) -> AVolElem {
    let mut out = AVolElem::default();
    for (&g, a) in &x.coeffs {
        for (&h, b) in &y.coeffs {
            let t = table.get(g, h);
            if t.is_zero() {
                continue;
            }
            out.add_term(group.mul(g, h), &(a * b) * t);
        }
    }
    out
}

/// Whether `(vol_g⊗g)·x = c·vol_h⊗h` is solvable with `c ≠ 0`, decided by
/// testing membership of `vol_h⊗h` in the right ideal spanned by products
/// with basis elements.
pub fn avol_divides(group: &FiniteGroup, table: &ThetaTable, g: usize, h: usize) -> bool {
    let m = group.modulus();
    let mut span: Echelon<usize> = Echelon::new(m);
    for k in 0..group.order() {
        let p = avol_multiply(group, table, &AVolElem::basis(g, m), &AVolElem::basis(k, m));
        span.insert(p.coeffs);
    }
    span.contains(AVolElem::basis(h, m).coeffs)
}

/// A factorization of `vol_g⊗g` into generators, up to a nonzero scalar.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub element: usize,
    pub factors: Vec<usize>,
    /// The scalar `c` with `Π (vol_f⊗f) = c · vol_g⊗g`.
    pub scalar: CycNum,
}

fn descend(group: &FiniteGroup, poset: &PosetOnQuotient, g: usize) -> Vec<usize> {
    if g == 0 {
        return Vec::new();
    }
    let coset = poset.coset_of[g];
    if coset == 0 {
        return vec![g];
    }
    if poset.minimal_nonidentity.contains(&coset) {
        let rep = poset.reps[coset];
        if rep == g {
            return vec![g];
        }
        // g = rep · k with k in K
        return vec![rep, group.mul(group.inv(rep), g)];
    }
    let d = poset
        .minimal_nonidentity
        .iter()
        .copied()
        .find(|&d| poset.le(d, coset))
        .expect("a minimal coset lies below every nonidentity coset");
    let s = poset.reps[d];
    let mut out = vec![s];
    out.extend(descend(group, poset, group.mul(group.inv(s), g)));
    out
}

/// Generation certificates for every element, found by greedy descent
/// through the poset and then multiplied out to confirm.
pub fn avol_generation_certificate(
    group: &FiniteGroup,
    table: &ThetaTable,
    poset: &PosetOnQuotient,
) -> Result<Vec<Certificate>> {
    let m = group.modulus();
    let mut out = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let factors = descend(group, poset, g);
        let prod = factors.iter().fold(AVolElem::basis(0, m), |acc, &f| {
            avol_multiply(group, table, &acc, &AVolElem::basis(f, m))
        });
        let scalar = match prod.coeffs.len() {
            1 => prod.coeffs.get(&g).cloned(),
            _ => None,
        };
        match scalar {
            Some(c) if !c.is_zero() => out.push(Certificate {
                element: g,
                factors,
                scalar: c,
            }),
            _ => return Err(Error::CertificateFailure(g)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::*;
    use crate::poset::{leq, quotient_poset};
    use proptest::prelude::*;

    #[test]
    fn wedge_examples() {
        let v1 = ExtForm::wedge_of(3, 1, &[0]);
        let v2 = ExtForm::wedge_of(3, 1, &[1]);
        assert!(v1.wedge(&v1).is_zero());
        assert_eq!(v1.wedge(&v2), v2.wedge(&v1).scale(&CycNum::from_integer(1, -1)));
        let one = CycNum::one(1);
        let mone = CycNum::from_integer(1, -1);
        let a = ExtForm::linear(4, 1, &[one.clone(), mone.clone(), CycNum::zero(1), CycNum::zero(1)]);
        let b = ExtForm::linear(4, 1, &[CycNum::zero(1), CycNum::zero(1), one, mone]);
        assert_eq!(a.wedge(&b).terms().len(), 4);
        assert_eq!(ExtForm::wedge_of(3, 1, &[2, 0]), ExtForm::wedge_of(3, 1, &[0, 2]).scale(&CycNum::from_integer(1, -1)));
    }

    #[test]
    fn dual_action_examples() {
        let g = elem_abel();
        let m = g.modulus();
        let a1 = g.index_of_name("a1").unwrap();
        let a1a3 = g.index_of_name("a1a3").unwrap();
        let v1 = ExtForm::wedge_of(3, m, &[0]);
        assert_eq!(dual_action(&g, a1, &v1), v1.scale(&CycNum::from_integer(m, -1)));
        let v12 = ExtForm::wedge_of(3, m, &[0, 1]);
        assert_eq!(dual_action(&g, a1a3, &v12), v12.scale(&CycNum::from_integer(m, -1)));
        assert_eq!(dual_action(&g, 0, &v12), v12);
    }

    #[test]
    fn volume_examples() {
        let g = elem_abel();
        let m = g.modulus();
        assert_eq!(volume_form(&g, 0), ExtForm::one(3, m));
        let a1 = g.index_of_name("a1").unwrap();
        assert_eq!(volume_form(&g, a1), ExtForm::wedge_of(3, m, &[0]));

        let s = symmetric(3, 2);
        let m = s.modulus();
        let t = s.index_of_name("(12)").unwrap();
        let one = CycNum::one(m);
        let mone = CycNum::from_integer(m, -1);
        let z = CycNum::zero(m);
        // coordinates v1 w1 v2 w2 v3 w3
        let dv = ExtForm::linear(6, m, &[one.clone(), z.clone(), mone.clone(), z.clone(), z.clone(), z.clone()]);
        let dw = ExtForm::linear(6, m, &[z.clone(), one, z.clone(), mone, z.clone(), z]);
        assert_eq!(volume_form(&s, t), dv.wedge(&dw));
    }

    #[test]
    fn theta_examples() {
        let g = elem_abel();
        let vols = VolAssignment::canonical(&g);
        let a1 = g.index_of_name("a1").unwrap();
        let a2 = g.index_of_name("a2").unwrap();
        assert!(theta(&g, &vols, a1, a2).is_one());
        assert!(theta(&g, &vols, a1, a1).is_zero());
        for h in 0..g.order() {
            assert!(theta(&g, &vols, 0, h).is_one());
            assert!(theta(&g, &vols, h, 0).is_one());
        }
    }

    #[test]
    fn c6s3_avol_product() {
        let s = symmetric(3, 2);
        let m = s.modulus();
        let vols = VolAssignment::canonical(&s);
        let table = ThetaTable::new(&s, &vols);
        let t12 = s.index_of_name("(12)").unwrap();
        let t23 = s.index_of_name("(23)").unwrap();
        let c = s.index_of_name("(123)").unwrap();
        let p = avol_multiply(&s, &table, &AVolElem::basis(t12, m), &AVolElem::basis(t23, m));
        assert_eq!(p, AVolElem::basis(c, m));
    }

    #[test]
    fn avol_square_and_unit() {
        let g = elem_abel();
        let m = g.modulus();
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        let a1 = g.index_of_name("a1").unwrap();
        let x = AVolElem::basis(a1, m);
        assert!(avol_multiply(&g, &table, &x, &x).is_zero());
        assert_eq!(avol_multiply(&g, &table, &AVolElem::basis(0, m), &x), x);
    }

    #[test]
    fn certificates() {
        let s = symmetric(3, 2);
        let table = ThetaTable::new(&s, &VolAssignment::canonical(&s));
        let poset = quotient_poset(&s).unwrap();
        let certs = avol_generation_certificate(&s, &table, &poset).unwrap();
        let c = s.index_of_name("(123)").unwrap();
        assert_eq!(certs[c].factors.len(), 2);
        assert!(certs[c].factors.iter().all(|&f| s.element(f).codim == 2));

        let g = elem_abel();
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        let poset = quotient_poset(&g).unwrap();
        let certs = avol_generation_certificate(&g, &table, &poset).unwrap();
        let top = g.index_of_name("a1a2a3").unwrap();
        let names: Vec<&str> = certs[top].factors.iter().map(|&f| g.name(f)).collect();
        assert_eq!(names, vec!["a1", "a2", "a3"]);

        let k = symmetric_with_kernel(3, 2);
        let table = ThetaTable::new(&k, &VolAssignment::canonical(&k));
        let poset = quotient_poset(&k).unwrap();
        assert!(avol_generation_certificate(&k, &table, &poset).is_ok());
    }

    #[test]
    fn cocycle_and_vanishing_pattern() {
        for g in [elem_abel(), symmetric(3, 1), imprimitive(4, 1, 2), symmetric_with_kernel(3, 2)] {
            let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
            assert_eq!(table.cocycle_violation(&g), None);
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(!table.get(a, b).is_zero(), leq(&g, a, g.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn division_reproduces_order() {
        let g = symmetric(3, 1);
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(avol_divides(&g, &table, a, b), leq(&g, a, b));
            }
        }
    }

    #[test]
    fn perturbed_theta_breaks_cocycle() {
        let g = symmetric(3, 1);
        let mut table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        let t = g.index_of_name("(12)").unwrap();
        let c = g.index_of_name("(123)").unwrap();
        let v = table.get(t, c).clone();
        table.set(t, c, &v + &CycNum::one(g.modulus()));
        assert!(table.cocycle_violation(&g).is_some());
    }

    #[test]
    fn avol_associative_on_basis() {
        let g = imprimitive(2, 1, 2);
        let m = g.modulus();
        let table = ThetaTable::new(&g, &VolAssignment::canonical(&g));
        for a in 0..g.order() {
            for b in 0..g.order() {
                for c in 0..g.order() {
                    let (x, y, z) = (AVolElem::basis(a, m), AVolElem::basis(b, m), AVolElem::basis(c, m));
                    let l = avol_multiply(&g, &table, &avol_multiply(&g, &table, &x, &y), &z);
                    let r = avol_multiply(&g, &table, &x, &avol_multiply(&g, &table, &y, &z));
                    assert_eq!(l, r);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn wedge_with_vol_absorbs_action(g in 0usize..32, coeffs in proptest::collection::vec(-3i64..4, 2)) {
            let grp = imprimitive(4, 1, 2);
            let m = grp.modulus();
            let dv = ExtForm::linear(2, m, &coeffs.iter().map(|&c| CycNum::from_integer(m, c)).collect::<Vec<_>>());
            let vol = volume_form(&grp, g);
            prop_assert_eq!(dv.wedge(&vol), dual_action(&grp, g, &dv).wedge(&vol));
        }

        #[test]
        fn graded_anticommutative(a in 0u32..64, b in 0u32..64) {
            let x = ExtForm::monomial(6, 1, a, CycNum::one(1));
            let y = ExtForm::monomial(6, 1, b, CycNum::one(1));
            let sign = if (a.count_ones() * b.count_ones()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(x.wedge(&y), y.wedge(&x).scale(&CycNum::from_integer(1, sign)));
        }
    }
}
