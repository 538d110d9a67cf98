//! Reflections, reflection length with respect to all reflections, and the
//! comparison between the absolute order and the codimension order.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::poset::{leq, quotient_poset};

/// All `g ≠ 1` fixing a hyperplane pointwise, in index order.
pub fn reflections_of(group: &FiniteGroup) -> Vec<usize> {
    (1..group.order()).filter(|&g| group.element(g).codim == 1).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthRow {
    pub g: usize,
    pub name: String,
    /// `None` when g is not a product of reflections.
    pub length: Option<usize>,
    pub codim: usize,
    /// Reflections whose product (left to right) is g.
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthTable {
    pub reflections: Vec<usize>,
    pub rows: Vec<LengthRow>,
}

impl LengthTable {
    /// Breadth-first search from 1 in the Cayley graph on all reflections.
    pub fn new(group: &FiniteGroup) -> LengthTable {
        let refl = reflections_of(group);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; group.order()];
        let mut dist: Vec<Option<usize>> = vec![None; group.order()];
        dist[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &refl {
                let y = group.mul(x, s);
                if dist[y].is_none() {
                    dist[y] = Some(dist[x].unwrap() + 1);
                    parent[y] = Some((x, s));
                    queue.push_back(y);
                }
            }
        }
        let rows = (0..group.order())
            .map(|g| {
                let mut witness = Vec::new();
                let mut cur = g;
                while let Some((p, s)) = parent[cur] {
                    witness.push(s);
                    cur = p;
                }
                witness.reverse();
                LengthRow {
                    g,
                    name: group.name(g).to_string(),
                    length: dist[g],
                    codim: group.element(g).codim,
                    witness,
                }
            })
            .collect();
        LengthTable { reflections: refl, rows }
    }

    pub fn length(&self, g: usize) -> Option<usize> {
        self.rows[g].length
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,l,codim,equal\n");
        for r in &self.rows {
            let l = r.length.map_or_else(|| "unreachable".to_string(), |l| l.to_string());
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&r.name),
                l,
                r.codim,
                r.length == Some(r.codim)
            ));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `l(g)` and a witness factorization into `l(g)` reflections.
pub fn reflection_length(group: &FiniteGroup, g: usize) -> Result<(usize, Vec<usize>)> {
    let table = LengthTable::new(group);
    let row = &table.rows[g];
    row.length
        .map(|l| (l, row.witness.clone()))
        .ok_or(Error::Unreachable(g))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub table: LengthTable,
    /// `l(g) = codim V^g` for every g.
    pub all_equal: bool,
    /// First element where they differ.
    pub first_mismatch: Option<usize>,
    /// `l(g) ≥ codim V^g` wherever l is defined.
    pub lower_bound_holds: bool,
    /// `l(gh) ≤ l(g) + l(h)` on all reachable pairs.
    pub triangle_holds: bool,
    /// When all_equal: the minimal elements of G − {1} under ≤ are exactly
    /// the reflections.
    pub minimal_are_reflections: Option<bool>,
    /// When all_equal: `l(g) + l(g⁻¹h) = l(h)` iff `g ≤ h`, for all pairs.
    pub orders_coincide: Option<bool>,
}

pub fn compare_orders_report(group: &FiniteGroup) -> Result<CompareReport> {
    let table = LengthTable::new(group);
    let ord = group.order();
    let first_mismatch = table.rows.iter().position(|r| r.length != Some(r.codim));
    let all_equal = first_mismatch.is_none();
    let lower_bound_holds = table
        .rows
        .iter()
        .all(|r| r.length.is_none_or(|l| l >= r.codim));
    let mut triangle_holds = true;
    for g in 0..ord {
        for h in 0..ord {
            if let (Some(a), Some(b), Some(c)) = (table.length(g), table.length(h), table.length(group.mul(g, h))) {
                triangle_holds &= c <= a + b;
            }
        }
    }
    let (minimal_are_reflections, orders_coincide) = if all_equal {
        let poset = quotient_poset(group)?;
        let mut minimal: Vec<usize> = poset.minimal_nonidentity.iter().map(|&c| poset.reps[c]).collect();
        minimal.sort_unstable();
        let refl_cosets: Vec<usize> = {
            let mut v: Vec<usize> = table.reflections.iter().map(|&s| poset.reps[poset.coset_of[s]]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let coincide = (0..ord).all(|g| {
            (0..ord).all(|h| {
                let lg = table.length(g).unwrap();
                let lh = table.length(h).unwrap();
                let lgh = table.length(group.mul(group.inv(g), h)).unwrap();
                (lg + lgh == lh) == leq(group, g, h)
            })
        });
        (Some(minimal == refl_cosets), Some(coincide))
    } else {
        (None, None)
    };
    Ok(CompareReport {
        table,
        all_equal,
        first_mismatch,
        lower_bound_holds,
        triangle_holds,
        minimal_are_reflections,
        orders_coincide,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::*;

    #[test]
    fn reflection_sets() {
        let ea = elem_abel();
        let names: Vec<&str> = reflections_of(&ea).iter().map(|&g| ea.name(g)).collect();
        assert_eq!(names, vec!["a1", "a2", "a3"]);
        assert!(reflections_of(&symmetric(3, 2)).is_empty());
        // n(r-1) diagonal reflections and r·C(n,2) of transposition type
        assert_eq!(reflections_of(&imprimitive(4, 1, 2)).len(), 10);
    }

    #[test]
    fn lengths() {
        let b2 = imprimitive(2, 1, 2);
        for s in reflections_of(&b2) {
            assert_eq!(reflection_length(&b2, s).unwrap().0, 1);
        }
        let m = b2.modulus();
        let minus = crate::linalg::Mat::identity(2, m).scale(&crate::CycNum::from_integer(m, -1));
        let longest = b2.index_of_matrix(&minus).unwrap();
        let (l, w) = reflection_length(&b2, longest).unwrap();
        assert_eq!(l, 2);
        assert_eq!(b2.product(&w), longest);
        assert_eq!(reflection_length(&b2, 0).unwrap(), (0, vec![]));
        let c6 = symmetric(3, 2);
        assert!(matches!(reflection_length(&c6, 1), Err(Error::Unreachable(1))));
    }

    #[test]
    fn g422_counterexample() {
        let g = imprimitive(4, 2, 2);
        let rep = compare_orders_report(&g).unwrap();
        assert!(!rep.all_equal);
        let m = g.modulus();
        let i = crate::CycNum::root_of_unity(m, (m / 4) as i64);
        let di = g.index_of_matrix(&crate::linalg::Mat::diagonal(&[i.clone(), i], m)).unwrap();
        assert_eq!(g.element(di).codim, 2);
        assert_eq!(rep.table.length(di), Some(3));
        assert!(rep.lower_bound_holds && rep.triangle_holds);
    }

    #[test]
    fn reflection_groups_agree() {
        for g in [imprimitive(2, 1, 2), symmetric(4, 1), imprimitive(3, 1, 2), imprimitive(4, 1, 2)] {
            let rep = compare_orders_report(&g).unwrap();
            assert!(rep.all_equal);
            assert_eq!(rep.minimal_are_reflections, Some(true));
            assert_eq!(rep.orders_coincide, Some(true));
        }
    }

    #[test]
    fn csv_shape() {
        let t = LengthTable::new(&symmetric(3, 1));
        let csv = t.to_csv();
        assert!(csv.starts_with("element,l,codim,equal\n1,0,0,true\n"));
        assert_eq!(csv.lines().count(), 7);
    }
}
