//! The codimension relation `g ≤ h`, its partial order on G/K, minimal
//! elements, and Hasse diagrams in DOT format.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Subspace;

/// `g ≤ h` iff `codim V^g + codim V^{g⁻¹h} = codim V^h`.
pub fn leq(group: &FiniteGroup, g: usize, h: usize) -> bool {
    let ginv_h = group.mul(group.inv(g), h);
    group.element(g).codim + group.element(ginv_h).codim == group.element(h).codim
}

/// Truth values of the four equivalent conditions on a pair (g, h).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimsReport {
    /// perp(g) ∩ perp(h) = 0
    pub perps_meet_trivially: bool,
    /// V^g + V^h = V
    pub fixed_spaces_span: bool,
    /// codim V^g + codim V^h = codim V^{gh}
    pub codims_add: bool,
    /// perp(g) ⊕ perp(h) = perp(gh)
    pub perps_direct_sum: bool,
    /// When the conditions hold, whether V^g ∩ V^h = V^{gh}.
    pub fixed_intersection: Option<bool>,
}

impl CodimsReport {
    pub fn consistent(&self) -> bool {
        let all = [
            self.perps_meet_trivially,
            self.fixed_spaces_span,
            self.codims_add,
            self.perps_direct_sum,
        ];
        let agree = all.iter().all(|&x| x == all[0]);
        agree && self.fixed_intersection.unwrap_or(true)
    }
}

pub fn check_codims_equivalences(group: &FiniteGroup, g: usize, h: usize) -> CodimsReport {
    let n = group.n();
    let eg = group.element(g);
    let eh = group.element(h);
    let egh = group.element(group.mul(g, h));
    let perps_meet_trivially = eg.perp.intersection(&eh.perp).dim() == 0;
    let fixed_spaces_span = eg.fixed.sum(&eh.fixed).dim() == n;
    let codims_add = eg.codim + eh.codim == egh.codim;
    let perp_sum: Subspace = eg.perp.sum(&eh.perp);
    let perps_direct_sum = perps_meet_trivially && perp_sum == egh.perp;
    let fixed_intersection = (perps_meet_trivially
        && fixed_spaces_span
        && codims_add
        && perps_direct_sum)
        .then(|| eg.fixed.intersection(&eh.fixed) == egh.fixed);
    CodimsReport {
        perps_meet_trivially,
        fixed_spaces_span,
        codims_add,
        perps_direct_sum,
        fixed_intersection,
    }
}

/// The relation ≤ transported to the cosets G/K.
#[derive(Clone, Debug, Serialize)]
pub struct PosetOnQuotient {
    /// Coset representatives (minimal index in each coset); coset 0 is K.
    pub reps: Vec<usize>,
    /// Coset id of every group element.
    pub coset_of: Vec<usize>,
    pub codims: Vec<usize>,
    pub names: Vec<String>,
    /// Row-major `leq[a * q + b]`.
    pub leq: Vec<bool>,
    /// Cosets minimal in G/K minus the identity coset.
    pub minimal_nonidentity: Vec<usize>,
}

impl PosetOnQuotient {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let q = self.len();
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                if a == b || !self.le(a, b) {
                    continue;
                }
                let between = (0..q).any(|c| c != a && c != b && self.le(a, c) && self.le(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Check reflexivity and transitivity (antisymmetry is checked on build).
    pub fn is_partial_order(&self) -> bool {
        let q = self.len();
        (0..q).all(|a| self.le(a, a))
            && (0..q).all(|a| {
                (0..q).all(|b| {
                    !self.le(a, b) || (a == b || !self.le(b, a))
                })
            })
            && (0..q).all(|a| {
                (0..q).all(|b| !self.le(a, b) || (0..q).all(|c| !self.le(b, c) || self.le(a, c)))
            })
    }
}

/// Build the quotient poset; fails if the relation is not well defined on
/// cosets or not antisymmetric.
pub fn quotient_poset(group: &FiniteGroup) -> Result<PosetOnQuotient> {
    let reps = group.kernel_coset_reps();
    let q = reps.len();
    let mut coset_of = vec![usize::MAX; group.order()];
    for (cid, &r) in reps.iter().enumerate() {
        for &k in group.kernel() {
            coset_of[group.mul(r, k)] = cid;
        }
    }
    let mut rel = vec![false; q * q];
    for a in 0..q {
        for b in 0..q {
            rel[a * q + b] = leq(group, reps[a], reps[b]);
        }
    }
    // representative independence
    for g in 0..group.order() {
        for h in 0..group.order() {
            if leq(group, g, h) != rel[coset_of[g] * q + coset_of[h]] {
                return Err(Error::Antisymmetry(coset_of[g], coset_of[h]));
            }
        }
    }
    for a in 0..q {
        for b in a + 1..q {
            if rel[a * q + b] && rel[b * q + a] {
                return Err(Error::Antisymmetry(a, b));
            }
        }
    }
    let minimal_nonidentity = (1..q)
        .filter(|&c| !(1..q).any(|d| d != c && rel[d * q + c]))
        .collect();
    Ok(PosetOnQuotient {
        codims: reps.iter().map(|&r| group.element(r).codim).collect(),
        names: reps.iter().map(|&r| group.name(r).to_string()).collect(),
        reps,
        coset_of,
        leq: rel,
        minimal_nonidentity,
    })
}

/// Graphviz digraph of the covering relation, drawn bottom to top.
pub fn hasse_dot(poset: &PosetOnQuotient) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for (i, name) in poset.names.iter().enumerate() {
        let label = name.replace('"', "\\\"");
        let _ = writeln!(
            out,
            "  n{i} [label=\"{label}\\ncodim {}\"];",
            poset.codims[i]
        );
    }
    for (a, b) in poset.covers() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::*;

    #[test]
    fn leq_examples() {
        let g = elem_abel();
        let a1 = g.index_of_name("a1").unwrap();
        let a1a2 = g.index_of_name("a1a2").unwrap();
        assert!(leq(&g, a1, a1a2));
        for h in 0..g.order() {
            assert!(leq(&g, 0, h));
        }
        let s = symmetric(3, 2);
        let t = s.index_of_name("(12)").unwrap();
        let c = s.index_of_name("(123)").unwrap();
        assert!(leq(&s, t, c));
    }

    #[test]
    fn codims_examples() {
        let g = elem_abel();
        let a1 = g.index_of_name("a1").unwrap();
        let a2 = g.index_of_name("a2").unwrap();
        let r = check_codims_equivalences(&g, 0, 0);
        assert!(r.codims_add && r.consistent());
        let r = check_codims_equivalences(&g, a1, a2);
        assert!(r.perps_meet_trivially && r.fixed_spaces_span && r.codims_add && r.perps_direct_sum);
        assert_eq!(r.fixed_intersection, Some(true));
        let r = check_codims_equivalences(&g, a1, a1);
        assert!(!r.perps_meet_trivially && !r.fixed_spaces_span && !r.codims_add && !r.perps_direct_sum);
    }

    #[test]
    fn elem_abel_minimal() {
        let g = elem_abel();
        let p = quotient_poset(&g).unwrap();
        assert_eq!(p.len(), 8);
        let names: Vec<&str> = p.minimal_nonidentity.iter().map(|&c| p.names[c].as_str()).collect();
        assert_eq!(names, vec!["a1", "a2", "a3"]);
        assert!(p.is_partial_order());
        // Boolean lattice on three atoms: 12 covering edges
        assert_eq!(p.covers().len(), 12);
    }

    #[test]
    fn b2_minimal_are_reflections() {
        let g = imprimitive(2, 1, 2);
        let p = quotient_poset(&g).unwrap();
        assert_eq!(p.minimal_nonidentity.len(), 4);
        assert!(p.minimal_nonidentity.iter().all(|&c| p.codims[c] == 1));
    }

    #[test]
    fn s3_natural_hasse() {
        let g = symmetric(3, 1);
        let p = quotient_poset(&g).unwrap();
        let dot = hasse_dot(&p);
        // identity below three transpositions, each below both 3-cycles
        assert_eq!(p.covers().len(), 3 + 6);
        assert!(dot.starts_with("digraph poset {"));
        let t = trivial(2);
        let pt = quotient_poset(&t).unwrap();
        assert_eq!(pt.len(), 1);
        assert_eq!(hasse_dot(&pt).matches("->").count(), 0);
        assert_eq!(hasse_dot(&pt).matches("label").count(), 1);
    }

    #[test]
    fn nonfaithful_quotient() {
        let g = symmetric_with_kernel(3, 2);
        let p = quotient_poset(&g).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.is_partial_order());
        assert_eq!(p.minimal_nonidentity.len(), 3);
    }

    #[test]
    fn rank_compatibility() {
        let g = imprimitive(4, 1, 2);
        for a in 0..g.order() {
            for b in 0..g.order() {
                if leq(&g, a, b) {
                    assert!(g.element(a).codim <= g.element(b).codim);
                }
            }
        }
    }
}
