//! Finite matrix groups: breadth-first closure from generators, the kernel
//! of the action, conjugacy classes, centralizers, cosets and double cosets,
//! plus the standard families used throughout the crate.
//!
//! Elements may carry an auxiliary block next to their action on V. This
//! makes non-faithful actions expressible: an element whose V-block is the
//! identity but whose auxiliary block is not lies in the kernel K.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use serde::Serialize;
use serde_json::Value;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::{fixed_space, perp_space, Mat, Subspace};

/// Default bound on the number of elements enumerated by closure.
pub const DEFAULT_CAP: usize = 20000;

/// One group element with its cached geometric data on V.
#[derive(Clone, Debug)]
pub struct GElem {
    pub index: usize,
    /// Action on V (n×n).
    pub matrix: Mat,
    pub fixed: Subspace,
    pub perp: Subspace,
    pub codim: usize,
    pub det: CycNum,
    pub order: u64,
    pub name: String,
}

/// A finite group acting linearly on V = C^n, with all tables precomputed.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    m: u32,
    elements: Vec<GElem>,
    carriers: Vec<Mat>,
    mult: Vec<usize>,
    inv: Vec<usize>,
    kernel: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    centralizers: Vec<Vec<usize>>,
    lookup: HashMap<Mat, usize>,
}

fn identity_carrier(dim: usize, m: u32) -> Mat {
    Mat::identity(dim, m)
}

/// Breadth-first closure. `generators` are carrier matrices over Q(ζ_m0) whose
/// top-left n×n block is the action on V; `names` label the generators.
pub fn close_group(
    n: usize,
    generators: &[Mat],
    names: &[String],
    cap: usize,
) -> Result<FiniteGroup> {
    let (carriers, mult, words) = bfs_closure(generators, names, cap)?;
    let names = words;
    FiniteGroup::finalize(n, carriers, mult, names)
}

type Closure = (Vec<Mat>, Vec<usize>, Vec<String>);

fn bfs_closure(generators: &[Mat], names: &[String], cap: usize) -> Result<Closure> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidSpec("no generators".into()));
    };
    let dim = first.rows();
    let m0 = first.modulus();
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim || g.modulus() != m0 {
            return Err(Error::InvalidSpec(format!(
                "generator {i} has a different shape or field"
            )));
        }
        if g.determinant().is_zero() {
            return Err(Error::NonInvertibleGenerator { index: i });
        }
    }
    let mut carriers = vec![identity_carrier(dim, m0)];
    let mut words = vec![String::new()];
    let mut lookup: HashMap<Mat, usize> = HashMap::new();
    lookup.insert(carriers[0].clone(), 0);
    // right[x * ngen + s] = index of x·s
    let ngen = generators.len();
    let mut right: Vec<usize> = Vec::new();
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, gen) in generators.iter().enumerate() {
            let y = carriers[x].mul(gen);
            let idx = match lookup.get(&y) {
                Some(&i) => i,
                None => {
                    let i = carriers.len();
                    if i >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    lookup.insert(y.clone(), i);
                    carriers.push(y);
                    words.push(format!("{}{}", words[x], names[s]));
                    parent.push((x, s));
                    queue.push_back(i);
                    i
                }
            };
            if right.len() < (x + 1) * ngen {
                right.resize((x + 1) * ngen, usize::MAX);
            }
            right[x * ngen + s] = idx;
        }
    }
    let order = carriers.len();
    let mut mult = vec![0usize; order * order];
    for i in 0..order {
        mult[i * order] = i;
        for j in 1..order {
            let (p, s) = parent[j];
            mult[i * order + j] = right[mult[i * order + p] * ngen + s];
        }
    }
    let words = words
        .into_iter()
        .map(|w| if w.is_empty() { "1".to_string() } else { w })
        .collect();
    Ok((carriers, mult, words))
}

impl FiniteGroup {
    /// Build from an explicit list of carrier matrices closed under products;
    /// the identity must come first.
    pub fn from_elements(n: usize, carriers: Vec<Mat>, names: Vec<String>) -> Result<FiniteGroup> {
        let order = carriers.len();
        if order == 0 || !carriers[0].is_identity() {
            return Err(Error::InvalidSpec("element list must start with the identity".into()));
        }
        let lookup: HashMap<Mat, usize> =
            carriers.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut mult = vec![0usize; order * order];
        for i in 0..order {
            for j in 0..order {
                let p = carriers[i].mul(&carriers[j]);
                mult[i * order + j] = *lookup
                    .get(&p)
                    .ok_or_else(|| Error::InvalidSpec("element list is not closed".into()))?;
            }
        }
        FiniteGroup::finalize(n, carriers, mult, names)
    }

    fn finalize(
        n: usize,
        carriers: Vec<Mat>,
        mult: Vec<usize>,
        names: Vec<String>,
    ) -> Result<FiniteGroup> {
        let order = carriers.len();
        let m0 = carriers[0].modulus();
        let mut inv = vec![usize::MAX; order];
        for i in 0..order {
            for j in 0..order {
                if mult[i * order + j] == 0 {
                    inv[i] = j;
                    break;
                }
            }
        }
        let mut orders = vec![1u64; order];
        let mut exponent = 1u64;
        for (i, o) in orders.iter_mut().enumerate() {
            let mut p = i;
            let mut k = 1u64;
            while p != 0 {
                p = mult[p * order + i];
                k += 1;
            }
            *o = k;
            exponent = exponent.lcm(&k);
        }
        let m = (m0 as u64).lcm(&exponent) as u32;
        let carriers: Vec<Mat> = carriers
            .into_iter()
            .map(|c| c.embed(m))
            .collect::<Result<_>>()?;
        let lookup = carriers.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut elements = Vec::with_capacity(order);
        for (i, c) in carriers.iter().enumerate() {
            let rows: Vec<Vec<CycNum>> = (0..n).map(|r| c.row(r)[..n].to_vec()).collect();
            let matrix = Mat::from_rows(rows, m)?;
            let fixed = fixed_space(&matrix);
            let perp = perp_space(&matrix);
            let codim = perp.dim();
            let det = matrix.determinant();
            elements.push(GElem {
                index: i,
                matrix,
                fixed,
                perp,
                codim,
                det,
                order: orders[i],
                name: names.get(i).cloned().unwrap_or_else(|| format!("g{i}")),
            });
        }
        let kernel: Vec<usize> = elements
            .iter()
            .filter(|e| e.codim == 0)
            .map(|e| e.index)
            .collect();
        let mut g = FiniteGroup {
            n,
            m,
            elements,
            carriers,
            mult,
            inv,
            kernel,
            class_of: vec![usize::MAX; order],
            classes: Vec::new(),
            centralizers: Vec::new(),
            lookup,
        };
        g.compute_classes();
        Ok(g)
    }

    fn compute_classes(&mut self) {
        let order = self.order();
        for g in 0..order {
            if self.class_of[g] != usize::MAX {
                continue;
            }
            let cid = self.classes.len();
            let mut class: BTreeSet<usize> = BTreeSet::new();
            for h in 0..order {
                class.insert(self.conj(h, g));
            }
            for &x in &class {
                self.class_of[x] = cid;
            }
            self.classes.push(class.into_iter().collect());
            let cent = (0..order)
                .filter(|&h| self.mul(h, g) == self.mul(g, h))
                .collect();
            self.centralizers.push(cent);
        }
    }

    /// Dimension of V.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Modulus of the coefficient field (a multiple of the group exponent).
    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GElem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GElem {
        &self.elements[i]
    }

    pub fn carrier(&self, i: usize) -> &Mat {
        &self.carriers[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `h g h⁻¹`.
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    /// The kernel K of the action on V.
    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn in_kernel(&self, g: usize) -> bool {
        self.elements[g].codim == 0
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel.len() == 1
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class representatives (the minimal index in each class).
    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_rep_of(&self, g: usize) -> usize {
        self.classes[self.class_of[g]][0]
    }

    pub fn is_class_rep(&self, g: usize) -> bool {
        self.class_rep_of(g) == g
    }

    /// Centralizer Z(g), sorted.
    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        if self.is_class_rep(g) {
            return self.centralizers[self.class_of[g]].clone();
        }
        (0..self.order())
            .filter(|&h| self.mul(h, g) == self.mul(g, h))
            .collect()
    }

    /// Look up an element by its carrier matrix.
    pub fn index_of_carrier(&self, c: &Mat) -> Option<usize> {
        self.lookup.get(c).copied()
    }

    /// First element (by index) acting on V by `mat`.
    pub fn index_of_matrix(&self, mat: &Mat) -> Option<usize> {
        self.elements.iter().position(|e| &e.matrix == mat)
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn name(&self, g: usize) -> &str {
        &self.elements[g].name
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        for (e, n) in self.elements.iter_mut().zip(names) {
            e.name = n;
        }
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.contains(&0)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| s.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    /// Representatives (minimal index) of the left cosets gL inside `within`.
    pub fn left_coset_reps(&self, within: &[usize], sub: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        let mut sorted = within.to_vec();
        sorted.sort_unstable();
        for g in sorted {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &l in sub {
                seen[self.mul(g, l)] = true;
            }
        }
        reps
    }

    /// The double coset `L x R` as a sorted list.
    pub fn double_coset(&self, l: &[usize], x: usize, r: &[usize]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &a in l {
            let ax = self.mul(a, x);
            for &b in r {
                out.insert(self.mul(ax, b));
            }
        }
        out.into_iter().collect()
    }

    /// Representatives (minimal index) of the double cosets L\G/R.
    pub fn double_cosets(&self, l: &[usize], r: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            reps.push(x);
            for y in self.double_coset(l, x, r) {
                seen[y] = true;
            }
        }
        reps
    }

    /// Representatives of G/K.
    pub fn kernel_coset_reps(&self) -> Vec<usize> {
        self.left_coset_reps(&self.all(), &self.kernel)
    }

    /// Summary of the group for reports.
    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            order: self.order(),
            n: self.n,
            modulus: self.m,
            kernel_order: self.kernel.len(),
            class_count: self.classes.len(),
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(cid, c)| {
                    let rep = c[0];
                    ClassSummary {
                        rep,
                        name: self.elements[rep].name.clone(),
                        size: c.len(),
                        codim: self.elements[rep].codim,
                        det: self.elements[rep].det.to_string(),
                        centralizer_order: self.centralizers[cid].len(),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub n: usize,
    pub modulus: u32,
    pub kernel_order: usize,
    pub class_count: usize,
    pub classes: Vec<ClassSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub rep: usize,
    pub name: String,
    pub size: usize,
    pub codim: usize,
    pub det: String,
    pub centralizer_order: usize,
}

/// The families of groups that can be requested by name.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardGroup {
    /// S_n permuting `copies` interleaved copies of the natural representation;
    /// coordinate `point * copies + copy`.
    Symmetric { n: usize, copies: usize },
    /// The imprimitive reflection group G(r,p,n).
    Imprimitive { r: u32, p: u32, n: usize },
    /// Direct product of cyclic groups, the i-th acting by ζ_{orders[i]} on
    /// coordinate i.
    CyclicDiag { orders: Vec<u32> },
    /// Explicit generators over Q(ζ_modulus).
    Generators {
        modulus: u32,
        matrices: Vec<Mat>,
        names: Vec<String>,
    },
}

/// A parsed group spec file.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub label: Option<String>,
    pub group: StandardGroup,
    /// Order of an extra cyclic factor acting trivially on V.
    pub kernel_order: Option<u32>,
    /// The raw JSON, for consumers that read extra keys.
    pub raw: Value,
}

fn perm_carrier(perm: &[usize], copies: usize, m: u32) -> Mat {
    let dim = perm.len() * copies;
    let mut mat = Mat::zeros(dim, dim, m);
    for (i, &si) in perm.iter().enumerate() {
        for c in 0..copies {
            mat.set(si * copies + c, i * copies + c, CycNum::one(m));
        }
    }
    mat
}

/// Cycle notation for a permutation of `0..n` written 1-based.
pub fn cycle_notation(perm: &[usize]) -> String {
    let n = perm.len();
    let sep = if n >= 10 { "," } else { "" };
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = perm[x];
        }
        out.push_str(&format!("({})", cyc.join(sep)));
    }
    if out.is_empty() {
        "1".into()
    } else {
        out
    }
}

/// Recover the point permutation of a block permutation matrix.
fn perm_of_matrix(mat: &Mat, points: usize, copies: usize) -> Vec<usize> {
    (0..points)
        .map(|i| {
            (0..points)
                .find(|&j| !mat.get(j * copies, i * copies).is_zero())
                .expect("permutation matrix")
        })
        .collect()
}

fn symmetric_generators(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return vec![(0..n).collect()];
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let mut gens = vec![swap];
    if n > 2 {
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    gens
}

/// Append a 1×1 block holding 1 to each carrier.
fn lift_carriers(mats: &[Mat]) -> Vec<Mat> {
    mats.iter()
        .map(|a| {
            let dim = a.rows();
            let mut out = Mat::zeros(dim + 1, dim + 1, a.modulus());
            for i in 0..dim {
                for j in 0..dim {
                    out.set(i, j, a.get(i, j).clone());
                }
            }
            out.set(dim, dim, CycNum::one(a.modulus()));
            out
        })
        .collect()
}

/// Build one of the standard groups, optionally times a cyclic kernel factor.
pub fn build_standard_group(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    let base = build_faithful(&spec.group, cap)?;
    match spec.kernel_order {
        None | Some(1) => Ok(base),
        Some(0) => Err(Error::InvalidSpec("kernel_order must be positive".into())),
        Some(k) => with_kernel_factor(&base, k, cap),
    }
}

/// `G × C_k` with the cyclic factor acting trivially on V.
pub fn with_kernel_factor(base: &FiniteGroup, k: u32, cap: usize) -> Result<FiniteGroup> {
    let order = base.order() * k as usize;
    if order > cap {
        return Err(Error::CapExceeded { cap });
    }
    let m = (base.modulus() as u64).lcm(&(k as u64)) as u32;
    let lifted = lift_carriers(&(0..base.order()).map(|i| base.carrier(i).clone()).collect::<Vec<_>>());
    let zk = CycNum::zeta(k).embed(m)?;
    let mut carriers = Vec::with_capacity(order);
    let mut names = Vec::with_capacity(order);
    for j in 0..k {
        let z = zk.pow(j as i64)?;
        for (g, c) in lifted.iter().enumerate() {
            let mut c = c.embed(m)?;
            let last = c.rows() - 1;
            c.set(last, last, z.clone());
            carriers.push(c);
            let base_name = base.name(g);
            names.push(match (j, base_name) {
                (0, _) => base_name.to_string(),
                (_, "1") => format!("k^{j}"),
                _ => format!("{base_name}k^{j}"),
            });
        }
    }
    FiniteGroup::from_elements(base.n(), carriers, names)
}

fn build_faithful(group: &StandardGroup, cap: usize) -> Result<FiniteGroup> {
    match group {
        StandardGroup::Symmetric { n, copies } => {
            if *n == 0 || *copies == 0 {
                return Err(Error::InvalidSpec("symmetric needs n ≥ 1 and copies ≥ 1".into()));
            }
            let gens: Vec<Mat> = symmetric_generators(*n)
                .iter()
                .map(|p| perm_carrier(p, *copies, 1))
                .collect();
            let names: Vec<String> = (0..gens.len()).map(|i| format!("s{i}")).collect();
            let mut g = close_group(n * copies, &gens, &names, cap)?;
            let names = (0..g.order())
                .map(|i| cycle_notation(&perm_of_matrix(&g.element(i).matrix, *n, *copies)))
                .collect();
            g.set_names(names);
            Ok(g)
        }
        StandardGroup::Imprimitive { r, p, n } => build_imprimitive(*r, *p, *n, cap),
        StandardGroup::CyclicDiag { orders } => {
            if orders.is_empty() || orders.contains(&0) {
                return Err(Error::InvalidSpec("cyclic_diag needs positive orders".into()));
            }
            let m = orders.iter().fold(1u64, |a, &o| a.lcm(&(o as u64))) as u32;
            let n = orders.len();
            let gens: Vec<Mat> = orders
                .iter()
                .enumerate()
                .map(|(i, &o)| {
                    let mut d = Mat::identity(n, m);
                    d.set(i, i, CycNum::zeta(o).embed(m).expect("o | m"));
                    d
                })
                .collect();
            let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
            close_group(n, &gens, &names, cap)
        }
        StandardGroup::Generators {
            matrices, names, ..
        } => {
            let n = matrices
                .first()
                .ok_or_else(|| Error::InvalidSpec("no generators".into()))?
                .rows();
            close_group(n, matrices, names, cap)
        }
    }
}

fn build_imprimitive(r: u32, p: u32, n: usize, cap: usize) -> Result<FiniteGroup> {
    if r == 0 || p == 0 || n == 0 || !r.is_multiple_of(p) {
        return Err(Error::InvalidSpec(format!(
            "G({r},{p},{n}) needs r ≥ 1, p | r and n ≥ 1"
        )));
    }
    let mut gens = vec![{
        let mut t = Mat::identity(n, r);
        t.set(0, 0, CycNum::zeta(r));
        t
    }];
    if n >= 2 {
        gens.extend(symmetric_generators(n).iter().map(|pm| perm_carrier(pm, 1, r)));
    }
    let names: Vec<String> = (0..gens.len()).map(|i| format!("s{i}")).collect();
    let (carriers, _, _) = bfs_closure(&gens, &names, cap.saturating_mul(p as usize))?;
    let q = (r / p) as i64;
    let kept: Vec<Mat> = carriers
        .into_iter()
        .filter(|c| {
            let mut prod = CycNum::one(r);
            for j in 0..n {
                for i in 0..n {
                    if !c.get(i, j).is_zero() {
                        prod = &prod * c.get(i, j);
                    }
                }
            }
            prod.pow(q).map(|x| x.is_one()).unwrap_or(false)
        })
        .collect();
    if kept.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let names = kept.iter().enumerate().map(|(i, c)| monomial_name(c, i)).collect();
    FiniteGroup::from_elements(n, kept, names)
}

/// A readable name for a monomial matrix: its diagonal when diagonal,
/// otherwise permutation then diagonal scaling.
fn monomial_name(c: &Mat, index: usize) -> String {
    let n = c.rows();
    if c.is_identity() {
        return "1".into();
    }
    let mut perm = vec![usize::MAX; n];
    let mut scal = Vec::with_capacity(n);
    for j in 0..n {
        match (0..n).find(|&i| !c.get(i, j).is_zero()) {
            Some(i) => {
                perm[j] = i;
                scal.push(c.get(i, j).to_string());
            }
            None => return format!("g{index}"),
        }
    }
    let diag = format!("diag({})", scal.join(","));
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        diag
    } else {
        format!("{}{}", cycle_notation(&perm), diag)
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key)
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::malformed(path, "expected a nonnegative integer"))
}

/// Parse a matrix written as a list of rows of scalars.
pub fn parse_matrix(v: &Value, m: u32, path: &str) -> Result<Mat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::malformed(path, "expected a list of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| Error::malformed(&rp, "expected a row"))?;
        let mut r = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let ep = format!("{rp}[{j}]");
            r.push(CycNum::parse_value(e, m).map_err(|err| relocate(err, &ep))?);
        }
        out.push(r);
    }
    let mat = Mat::from_rows(out, m).map_err(|e| relocate(e, path))?;
    if mat.rows() != mat.cols() {
        return Err(Error::malformed(path, "matrix is not square"));
    }
    Ok(mat)
}

pub(crate) fn relocate(err: Error, path: &str) -> Error {
    match err {
        Error::Malformed { path: p, msg } if p.is_empty() => Error::malformed(path, msg),
        Error::Malformed { .. } => err,
        other => Error::malformed(path, other.to_string()),
    }
}

impl GroupSpec {
    pub fn from_json(v: &Value) -> Result<GroupSpec> {
        let label = field(v, "label").and_then(Value::as_str).map(str::to_string);
        let kernel_order = match field(v, "kernel_order") {
            None => None,
            Some(k) => Some(as_usize(k, "kernel_order")? as u32),
        };
        let group = if let Some(std) = field(v, "standard") {
            let kind = std
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::malformed("standard.kind", "missing kind"))?;
            let get = |k: &str| -> Result<usize> {
                as_usize(
                    std.get(k)
                        .ok_or_else(|| Error::malformed(format!("standard.{k}"), "missing"))?,
                    &format!("standard.{k}"),
                )
            };
            match kind {
                "G(r,p,n)" | "imprimitive" => StandardGroup::Imprimitive {
                    r: get("r")? as u32,
                    p: get("p")? as u32,
                    n: get("n")?,
                },
                "symmetric" => StandardGroup::Symmetric {
                    n: get("n")?,
                    copies: match std.get("copies") {
                        Some(c) => as_usize(c, "standard.copies")?,
                        None => 1,
                    },
                },
                "cyclic_diag" => {
                    let arr = std
                        .get("orders")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::malformed("standard.orders", "expected a list"))?;
                    let orders = arr
                        .iter()
                        .enumerate()
                        .map(|(i, o)| as_usize(o, &format!("standard.orders[{i}]")).map(|x| x as u32))
                        .collect::<Result<_>>()?;
                    StandardGroup::CyclicDiag { orders }
                }
                other => {
                    return Err(Error::malformed(
                        "standard.kind",
                        format!("unknown kind {other:?}"),
                    ))
                }
            }
        } else if let Some(gens) = field(v, "generators") {
            let modulus = match field(v, "modulus") {
                Some(mv) => as_usize(mv, "modulus")? as u32,
                None => 1,
            };
            if modulus == 0 {
                return Err(Error::malformed("modulus", "must be positive"));
            }
            let arr = gens
                .as_array()
                .ok_or_else(|| Error::malformed("generators", "expected a list of matrices"))?;
            if arr.is_empty() {
                return Err(Error::malformed("generators", "empty generator list"));
            }
            let matrices = arr
                .iter()
                .enumerate()
                .map(|(i, g)| parse_matrix(g, modulus, &format!("generators[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let n = matrices[0].rows();
            if let Some(i) = matrices.iter().position(|g| g.rows() != n) {
                return Err(Error::malformed(format!("generators[{i}]"), "size differs"));
            }
            let names = match field(v, "names").and_then(Value::as_array) {
                Some(ns) => ns
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::malformed(format!("names[{i}]"), "expected a string"))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => (1..=matrices.len()).map(|i| format!("s{i}")).collect(),
            };
            if names.len() != matrices.len() {
                return Err(Error::malformed("names", "one name per generator required"));
            }
            StandardGroup::Generators {
                modulus,
                matrices,
                names,
            }
        } else {
            return Err(Error::malformed("", "expected \"standard\" or \"generators\""));
        };
        Ok(GroupSpec {
            label,
            group,
            kernel_order,
            raw: v.clone(),
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<GroupSpec> {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text)?;
        GroupSpec::from_json(&v)
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        build_standard_group(self, cap)
    }
}

/// Convenience constructors for the groups used in tests and examples.
pub mod named {
    use super::*;

    fn spec(group: StandardGroup, kernel_order: Option<u32>) -> GroupSpec {
        GroupSpec {
            label: None,
            group,
            kernel_order,
            raw: Value::Null,
        }
    }

    /// (Z/2)^3 acting diagonally on C^3, generators a1, a2, a3.
    pub fn elem_abel() -> FiniteGroup {
        cyclic_diag(&[2, 2, 2])
    }

    pub fn cyclic_diag(orders: &[u32]) -> FiniteGroup {
        build_standard_group(
            &spec(StandardGroup::CyclicDiag { orders: orders.to_vec() }, None),
            DEFAULT_CAP,
        )
        .expect("cyclic_diag")
    }

    pub fn symmetric(n: usize, copies: usize) -> FiniteGroup {
        build_standard_group(&spec(StandardGroup::Symmetric { n, copies }, None), DEFAULT_CAP)
            .expect("symmetric")
    }

    pub fn imprimitive(r: u32, p: u32, n: usize) -> FiniteGroup {
        build_standard_group(&spec(StandardGroup::Imprimitive { r, p, n }, None), DEFAULT_CAP)
            .expect("imprimitive")
    }

    /// S_n natural representation times a cyclic factor of order k acting
    /// trivially on V.
    pub fn symmetric_with_kernel(n: usize, k: u32) -> FiniteGroup {
        build_standard_group(&spec(StandardGroup::Symmetric { n, copies: 1 }, Some(k)), DEFAULT_CAP)
            .expect("symmetric with kernel")
    }

    pub fn trivial(n: usize) -> FiniteGroup {
        close_group(n, &[Mat::identity(n, 1)], &["e".to_string()], DEFAULT_CAP).expect("trivial")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn elem_abel_order_and_abelian() {
        let g = elem_abel();
        assert_eq!(g.order(), 8);
        assert_eq!(g.classes().len(), 8);
        for r in g.class_reps() {
            assert_eq!(g.centralizer(r).len(), 8);
        }
        assert!(g.is_faithful());
        let a1a3 = g.index_of_name("a1a3").unwrap();
        assert_eq!(g.element(a1a3).codim, 2);
    }

    #[test]
    fn trivial_group() {
        let g = trivial(2);
        assert_eq!(g.order(), 1);
        assert_eq!(g.name(0), "1");
    }

    #[test]
    fn s3_on_c6() {
        let g = symmetric(3, 2);
        assert_eq!(g.order(), 6);
        assert_eq!(g.n(), 6);
        let reps: Vec<&str> = g.class_reps().iter().map(|&r| g.name(r)).collect();
        assert_eq!(reps, vec!["1", "(12)", "(123)"]);
        let t = g.index_of_name("(12)").unwrap();
        let c = g.index_of_name("(123)").unwrap();
        assert_eq!(g.centralizer(t).len(), 2);
        assert_eq!(g.centralizer(c).len(), 3);
        // right-to-left composition: (12)(123)(12)(132) = (123)
        let c_inv = g.inv(c);
        assert_eq!(g.product(&[t, c, t, c_inv]), c);
        assert_eq!(g.name(g.mul(t, c)), "(23)");
        assert_eq!(g.element(t).codim, 2);
        assert!(g.element(t).det.is_one());
        let dc = g.double_cosets(&g.centralizer(t), &g.centralizer(t));
        let names: Vec<&str> = dc.iter().map(|&x| g.name(x)).collect();
        assert_eq!(names, vec!["1", "(123)"]);
    }

    #[test]
    fn fixed_space_of_transposition_on_c6() {
        let g = symmetric(3, 2);
        let t = g.element(g.index_of_name("(12)").unwrap());
        let m = g.modulus();
        let e = |idx: &[usize]| -> Vec<CycNum> {
            (0..6)
                .map(|i| CycNum::from_integer(m, idx.contains(&i) as i64))
                .collect()
        };
        // coordinates: v1 w1 v2 w2 v3 w3
        let expected = crate::linalg::rref_basis(&[e(&[0, 2]), e(&[1, 3]), e(&[4]), e(&[5])], 6, m);
        assert_eq!(t.fixed, expected);
    }

    #[test]
    fn imprimitive_orders() {
        for (r, p, n, order) in [(1, 1, 3, 6), (2, 1, 2, 8), (2, 1, 3, 48), (3, 1, 2, 18), (4, 1, 2, 32), (4, 2, 2, 16), (4, 4, 2, 8)] {
            let g = imprimitive(r, p, n);
            assert_eq!(g.order(), order, "G({r},{p},{n})");
            let total: usize = g.class_reps().iter().map(|&x| g.order() / g.centralizer(x).len()).sum();
            assert_eq!(total, order);
        }
        let g = imprimitive(4, 2, 2);
        let i = CycNum::zeta(4).embed(g.modulus()).unwrap();
        let d = Mat::diagonal(&[i.clone(), i], g.modulus());
        assert!(g.index_of_matrix(&d).is_some());
    }

    #[test]
    fn exponent_field() {
        let g = imprimitive(4, 1, 2);
        assert_eq!(g.modulus(), 8);
    }

    #[test]
    fn invalid_specs() {
        let bad = GroupSpec::from_json(&serde_json::json!({"standard": {"kind": "G(r,p,n)", "r": 4, "p": 3, "n": 2}}))
            .unwrap();
        assert!(matches!(bad.build(DEFAULT_CAP), Err(Error::InvalidSpec(_))));
        let sing = GroupSpec::from_json(&serde_json::json!({"generators": [[[1, 0], [0, 0]]]})).unwrap();
        assert!(matches!(
            sing.build(DEFAULT_CAP),
            Err(Error::NonInvertibleGenerator { index: 0 })
        ));
        let inf = GroupSpec::from_json(&serde_json::json!({"generators": [[[1, 1], [0, 1]]]})).unwrap();
        assert!(matches!(inf.build(100), Err(Error::CapExceeded { cap: 100 })));
        let err = GroupSpec::from_json(&serde_json::json!({"generators": [[[1, "q"], [0, 1]]]})).unwrap_err();
        match err {
            Error::Malformed { path, .. } => assert_eq!(path, "generators[0][0][1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonfaithful_kernel() {
        let g = symmetric_with_kernel(3, 2);
        assert_eq!(g.order(), 12);
        assert_eq!(g.kernel().len(), 2);
        for &k in g.kernel() {
            assert!(g.element(k).fixed.dim() == 3);
            for x in 0..g.order() {
                assert!(g.kernel().contains(&g.conj(x, k)));
            }
        }
    }

    #[test]
    fn conjugates_share_codim_and_det() {
        for g in [imprimitive(4, 1, 2), symmetric(4, 1)] {
            for class in g.classes() {
                let r = g.element(class[0]);
                for &x in class {
                    assert_eq!(g.element(x).codim, r.codim);
                    assert_eq!(g.element(x).det, r.det);
                }
            }
        }
    }

    #[test]
    fn double_cosets_partition() {
        let g = imprimitive(4, 1, 2);
        let l = g.centralizer(g.class_reps()[3]);
        let r = g.centralizer(g.class_reps()[5]);
        let total: usize = g
            .double_cosets(&l, &r)
            .iter()
            .map(|&x| g.double_coset(&l, x, &r).len())
            .sum();
        assert_eq!(total, g.order());
        assert_eq!(g.double_cosets(&g.all(), &g.all()), vec![0]);
        assert_eq!(g.double_cosets(&[0], &[0]).len(), g.order());
    }

    proptest! {
        #[test]
        fn associativity_and_inverses(a in 0usize..32, b in 0usize..32, c in 0usize..32) {
            let g = imprimitive(4, 1, 2);
            prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            prop_assert_eq!(g.mul(a, g.inv(a)), 0);
            let prod = g.element(a).matrix.mul(&g.element(b).matrix);
            prop_assert_eq!(&g.element(g.mul(a, b)).matrix, &prod);
        }
    }
}
