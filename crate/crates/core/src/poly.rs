//! Polynomials in S(V) over Q(ζ_m), the linear G-action, quantum partial
//! derivatives, reduction modulo the ideal of a perp space, and the skew
//! group algebra S(V)#G.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::Value;

use crate::cyclotomic::{quantum_integer, rational, CycNum};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Mat;

/// Largest supported dimension of V.
pub const MAX_VARS: usize = 8;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u8]) -> Monomial {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    /// All monomials of total degree `d` in `n` variables, ascending.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = [0u8; MAX_VARS];
        fn rec(i: usize, n: usize, left: u32, cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
            if i + 1 == n {
                cur[i] = left as u8;
                out.push(Monomial(*cur));
                cur[i] = 0;
                return;
            }
            for e in 0..=left {
                cur[i] = e as u8;
                rec(i + 1, n, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one());
            }
            return out;
        }
        rec(0, n, d, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Number of monomials of degree `d` in `n` variables, `C(n+d-1, d)`.
pub fn monomial_count(n: usize, d: u32) -> usize {
    if n == 0 {
        return (d == 0) as usize;
    }
    binomial(n + d as usize - 1, d as usize)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A polynomial in `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    m: u32,
    terms: BTreeMap<Monomial, CycNum>,
}

impl Poly {
    pub fn zero(n: usize, m: u32) -> Poly {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Poly {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: CycNum) -> Poly {
        Poly::term(n, Monomial::one(), c)
    }

    pub fn one(n: usize, m: u32) -> Poly {
        Poly::constant(n, CycNum::one(m))
    }

    pub fn var(n: usize, m: u32, i: usize) -> Poly {
        Poly::term(n, Monomial::var(i), CycNum::one(m))
    }

    pub fn term(n: usize, mono: Monomial, c: CycNum) -> Poly {
        let mut p = Poly::zero(n, c.modulus());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// The linear form `Σ c_i v_i`.
    pub fn linear(n: usize, m: u32, coeffs: &[CycNum]) -> Poly {
        let mut p = Poly::zero(n, m);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i), c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CycNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> CycNum {
        self.terms.get(mono).cloned().unwrap_or_else(|| CycNum::zero(self.m))
    }

    /// Maximal total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Common total degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, mono: Monomial, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (k, c) in &other.terms {
            self.add_term(*k, c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &-c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&CycNum::from_integer(self.m, -1))
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n, self.m);
        }
        Poly {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n, self.m);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.n, self.m), |acc, _| acc.mul(self))
    }

    /// Part of total degree `d`.
    pub fn graded_part(&self, d: u32) -> Poly {
        Poly {
            n: self.n,
            m: self.m,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (mono, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for i in 0..self.n {
                let e = mono.exp(i);
                let name = names.get(i).cloned().unwrap_or_else(|| format!("v{}", i + 1));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let body = factors.join("*");
            let s = if body.is_empty() {
                c.to_string()
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{body}")
            } else {
                format!("{c}*{body}")
            };
            parts.push(s);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }

    /// Parse a polynomial from JSON: a scalar, a monomial string such as
    /// `"2*v1^2*v3"`, an object `{"c": scalar, "exp": [..]}`, or a list of
    /// these (summed).
    pub fn parse(v: &Value, n: usize, m: u32, names: &[String]) -> Result<Poly> {
        match v {
            Value::Array(items) => {
                let mut acc = Poly::zero(n, m);
                for (i, item) in items.iter().enumerate() {
                    let p = Poly::parse(item, n, m, names)
                        .map_err(|e| crate::group::relocate(e, &format!("[{i}]")))?;
                    acc.add_assign(&p);
                }
                Ok(acc)
            }
            Value::Object(obj) => {
                let c = match obj.get("c") {
                    Some(c) => CycNum::parse_value(c, m)?,
                    None => CycNum::one(m),
                };
                let exps = obj
                    .get("exp")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::malformed("exp", "expected an exponent list"))?;
                if exps.len() != n {
                    return Err(Error::malformed("exp", format!("expected {n} exponents")));
                }
                let mut e = [0u8; MAX_VARS];
                for (i, x) in exps.iter().enumerate() {
                    e[i] = x
                        .as_u64()
                        .filter(|&k| k < 256)
                        .ok_or_else(|| Error::malformed(format!("exp[{i}]"), "bad exponent"))?
                        as u8;
                }
                Ok(Poly::term(n, Monomial(e), c))
            }
            Value::String(s) => parse_monomial_str(s, n, m, names),
            Value::Number(_) => Ok(Poly::constant(n, CycNum::parse_value(v, m)?)),
            other => Err(Error::malformed("", format!("not a polynomial: {other}"))),
        }
    }
}

fn parse_monomial_str(s: &str, n: usize, m: u32, names: &[String]) -> Result<Poly> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let mut coef = CycNum::one(m);
    let mut mono = Monomial::one();
    for factor in body.split('*') {
        let f = factor.trim();
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) => (
                b.trim(),
                e.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::malformed("", format!("bad exponent in {s:?}")))?,
            ),
            None => (f, 1),
        };
        let var = names
            .iter()
            .position(|x| x == base)
            .or_else(|| {
                base.strip_prefix('v')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= n && names.len() < n)
                    .map(|i| i - 1)
            });
        match var {
            Some(i) if i < n => {
                let mut e = mono.0;
                e[i] += exp;
                mono = Monomial(e);
            }
            _ => {
                let c = CycNum::parse_value(&Value::String(f.to_string()), m)
                    .map_err(|_| Error::malformed("", format!("unknown factor {f:?} in {s:?}")))?;
                coef = &coef * &c;
            }
        }
    }
    if neg {
        coef = -coef;
    }
    Ok(Poly::term(n, mono, coef))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The algebra endomorphism of S(V) sending `x_k` to `Σ_i M[i][k] x_i`
/// (the k-th column of `M`).
#[derive(Clone, Debug)]
pub struct LinearSubst {
    n: usize,
    m: u32,
    images: Vec<Poly>,
    /// When every image is `c_k · x_{π(k)}`.
    monomial: Option<Vec<(usize, CycNum)>>,
}

impl LinearSubst {
    pub fn from_columns(mat: &Mat) -> LinearSubst {
        let n = mat.rows();
        let m = mat.modulus();
        let images: Vec<Poly> = (0..mat.cols())
            .map(|k| Poly::linear(n, m, &mat.column(k)))
            .collect();
        let monomial = images
            .iter()
            .map(|p| {
                if p.terms.len() == 1 {
                    let (mono, c) = p.terms.iter().next().unwrap();
                    let i = (0..n).find(|&i| mono.exp(i) == 1)?;
                    Some((i, c.clone()))
                } else {
                    None
                }
            })
            .collect();
        LinearSubst {
            n,
            m,
            images,
            monomial,
        }
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.n, self.m);
        if let Some(mon) = &self.monomial {
            for (mono, c) in &f.terms {
                let mut e = [0u8; MAX_VARS];
                let mut coef = c.clone();
                for (k, (i, ck)) in mon.iter().enumerate() {
                    let a = mono.exp(k);
                    if a > 0 {
                        e[*i] += a;
                        coef = &coef * &ck.pow(a as i64).expect("nonnegative power");
                    }
                }
                out.add_term(Monomial(e), &coef);
            }
            return out;
        }
        let mut cache: HashMap<(usize, u8), Poly> = HashMap::new();
        for (mono, c) in &f.terms {
            let mut acc = Poly::constant(self.n, c.clone());
            for k in 0..self.images.len() {
                let a = mono.exp(k);
                if a == 0 {
                    continue;
                }
                let p = cache
                    .entry((k, a))
                    .or_insert_with(|| self.images[k].pow(a as u32));
                acc = acc.mul(p);
            }
            out.add_assign(&acc);
        }
        out
    }
}

/// `^h f`, where `^h v_k = Σ_i h[i][k] v_i`.
pub fn poly_action(group: &FiniteGroup, h: usize, f: &Poly) -> Poly {
    if h == 0 {
        return f.clone();
    }
    LinearSubst::from_columns(&group.element(h).matrix).apply(f)
}

/// Quantum partial derivative in direction `i` with parameter `eps`: on a
/// monomial of degree k in `x_i`, multiply by `[k]_eps` and lower that
/// exponent by one. With `eps = 1` this is the ordinary partial derivative.
pub fn quantum_partial(f: &Poly, i: usize, eps: &CycNum) -> Poly {
    let mut out = Poly::zero(f.n, f.m);
    for (mono, c) in &f.terms {
        let k = mono.exp(i);
        if k == 0 {
            continue;
        }
        let mut e = mono.0;
        e[i] -= 1;
        out.add_term(Monomial(e), &(c * &quantum_integer(k as u32, eps)));
    }
    out
}

/// The projector `P = (1/|g|) Σ_k g^k` onto V^g along Im(1 - g).
pub fn fixed_projector(group: &FiniteGroup, g: usize) -> Mat {
    let e = group.element(g);
    let n = group.n();
    let m = group.modulus();
    let mut acc = Mat::zeros(n, n, m);
    let mut p = Mat::identity(n, m);
    for _ in 0..e.order {
        acc = acc.add(&p);
        p = p.mul(&e.matrix);
    }
    acc.scale(&CycNum::from_rational(m, rational(1, e.order as i64)))
}

/// Reduction S(V) → S(V)/I(perp) ≅ S(V^g), realized as the substitution
/// `v ↦ P v` with P the projector onto V^g along the perp space.
pub fn reduce_mod_perp(group: &FiniteGroup, g: usize, f: &Poly) -> Poly {
    if group.element(g).codim == 0 {
        return f.clone();
    }
    LinearSubst::from_columns(&fixed_projector(group, g)).apply(f)
}

/// `Σ f_g ⊗ g` in S(V)#G.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SkewElem {
    pub comps: BTreeMap<usize, Poly>,
}

impl SkewElem {
    pub fn zero() -> SkewElem {
        SkewElem::default()
    }

    pub fn single(f: Poly, g: usize) -> SkewElem {
        let mut s = SkewElem::zero();
        s.add(g, &f);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&mut self, g: usize, f: &Poly) {
        if f.is_zero() {
            return;
        }
        match self.comps.get_mut(&g) {
            Some(p) => {
                p.add_assign(f);
                if p.is_zero() {
                    self.comps.remove(&g);
                }
            }
            None => {
                self.comps.insert(g, f.clone());
            }
        }
    }

    pub fn add_elem(&mut self, other: &SkewElem) {
        for (g, f) in &other.comps {
            self.add(*g, f);
        }
    }

    pub fn scale(&self, c: &CycNum) -> SkewElem {
        let mut out = SkewElem::zero();
        for (g, f) in &self.comps {
            out.add(*g, &f.scale(c));
        }
        out
    }
}

/// `(a⊗g)(b⊗h) = a·(^g b) ⊗ gh`, extended bilinearly.
pub fn skew_multiply(group: &FiniteGroup, x: &SkewElem, y: &SkewElem) -> SkewElem {
    let mut out = SkewElem::zero();
    for (&g, a) in &x.comps {
        let sub = (g != 0).then(|| LinearSubst::from_columns(&group.element(g).matrix));
        for (&h, b) in &y.comps {
            let gb = match &sub {
                Some(s) => s.apply(b),
                None => b.clone(),
            };
            out.add(group.mul(g, h), &a.mul(&gb));
        }
    }
    out
}
