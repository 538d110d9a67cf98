//! Exact arithmetic in the cyclotomic field Q(ζ_m).
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` modulo the
//! m-th cyclotomic polynomial, so two values are equal iff their coordinate
//! vectors are equal. All computations in one context share a single modulus.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Static data for Q(ζ_m): the cyclotomic polynomial and the reduced
/// coordinates of every power ζ^k, 0 ≤ k < m.
#[derive(Debug)]
pub struct CycField {
    m: u32,
    phi: usize,
    cyclotomic: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();

impl CycField {
    /// Shared field descriptor for modulus `m` (built once per process).
    pub fn get(m: u32) -> Arc<CycField> {
        assert!(m >= 1, "cyclotomic modulus must be positive");
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        guard
            .entry(m)
            .or_insert_with(|| Arc::new(CycField::build(m)))
            .clone()
    }

    fn build(m: u32) -> CycField {
        let cyclotomic = cyclotomic_polynomial(m);
        let phi = cyclotomic.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic relation
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * cyclotomic[i];
                }
            }
        }
        CycField {
            m,
            phi,
            cyclotomic,
            powers,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    /// Euler φ(m), the degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Integer coefficients of Φ_m, constant term first.
    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.cyclotomic
    }
}

/// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    let m = m as usize;
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d as u32);
            num = exact_poly_div(&num, &div);
        }
    }
    num
}

fn exact_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of Q(ζ_m) in canonical power-basis coordinates.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero(m: u32) -> Self {
        let field = CycField::get(m);
        let coeffs = vec![BigRational::zero(); field.phi];
        CycNum { field, coeffs }
    }

    pub fn one(m: u32) -> Self {
        Self::from_integer(m, 1)
    }

    pub fn from_integer(m: u32, value: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_ratio(m: u32, num: i64, den: i64) -> Self {
        Self::from_rational(m, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(m: u32, value: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = value;
        z
    }

    /// ζ_m^k for any integer k.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        let field = CycField::get(m);
        let idx = k.rem_euclid(m as i64) as usize;
        let coeffs = field.powers[idx]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        CycNum { field, coeffs }
    }

    pub fn zeta(m: u32) -> Self {
        Self::root_of_unity(m, 1)
    }

    /// Reduce `Σ c_k ζ^k` to canonical coordinates.
    pub fn canonicalize(m: u32, raw: &[(i64, BigRational)]) -> Self {
        let mut out = Self::zero(m);
        for (k, c) in raw {
            if c.is_zero() {
                continue;
            }
            let idx = k.rem_euclid(m as i64) as usize;
            for (slot, &p) in out.coeffs.iter_mut().zip(&out.field.powers[idx]) {
                if p != 0 {
                    *slot += c * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        out
    }

    pub fn modulus(&self) -> u32 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn same_field(&self, other: &CycNum) {
        assert_eq!(
            self.field.m, other.field.m,
            "cyclotomic modulus mismatch in arithmetic"
        );
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self * &other.inv()?)
    }

    /// Multiplicative inverse; solves `a·x = 1` in the power basis.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = self.field.phi;
        if phi == 1 {
            return Ok(CycNum {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // column j holds the coordinates of a·ζ^j
        let mut cols: Vec<CycNum> = Vec::with_capacity(phi);
        for j in 0..phi {
            cols.push(self * &CycNum::root_of_unity(self.field.m, j as i64));
        }
        let mut aug: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for v in aug[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..phi {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=phi {
                        let t = &f * &aug[col][c];
                        aug[r][c] -= t;
                    }
                }
            }
        }
        Ok(CycNum {
            field: self.field.clone(),
            coeffs: aug.into_iter().map(|r| r[phi].clone()).collect(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one(self.field.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Re-express this value in Q(ζ_target); requires `m | target`.
    pub fn embed(&self, target: u32) -> Result<CycNum> {
        let m = self.field.m;
        if !target.is_multiple_of(m) {
            return Err(Error::ModulusMismatch(m, target));
        }
        if target == m {
            return Ok(self.clone());
        }
        let step = (target / m) as i64;
        let raw: Vec<(i64, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 * step, c.clone()))
            .collect();
        Ok(CycNum::canonicalize(target, &raw))
    }

    /// If this value is ζ_m^k, return k in `0..m`.
    pub fn root_exponent(&self) -> Option<u32> {
        let field = &self.field;
        (0..field.m).find(|&k| {
            field.powers[k as usize]
                .iter()
                .zip(&self.coeffs)
                .all(|(&p, c)| c == &BigRational::from_integer(BigInt::from(p)))
        })
    }

    /// Complex conjugate (ζ ↦ ζ^{-1}).
    pub fn conj(&self) -> CycNum {
        let raw: Vec<(i64, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (-(k as i64), c.clone()))
            .collect();
        CycNum::canonicalize(self.field.m, &raw)
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Parse a scalar written by hand: an integer, `"p/q"`, `"z"`, `"z^k"`,
    /// `"-z^k"`, `"c*z^k"`, or the canonical `{"m":..,"c":[..]}` object.
    pub fn parse_value(value: &serde_json::Value, m: u32) -> Result<CycNum> {
        match value {
            serde_json::Value::Number(n) => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| Error::malformed("", format!("non-integer number {n}")))?;
                Ok(CycNum::from_integer(m, i))
            }
            serde_json::Value::String(s) => parse_scalar_str(s, m),
            serde_json::Value::Object(_) => {
                let raw: CycJson = serde_json::from_value(value.clone())?;
                raw.into_cyc()?.embed(m)
            }
            other => Err(Error::malformed("", format!("not a scalar: {other}"))),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::malformed("", format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_scalar_str(s: &str, m: u32) -> Result<CycNum> {
    let t = s.trim();
    if !t.contains('z') {
        return Ok(CycNum::from_rational(m, parse_rational(t)?));
    }
    let (coef, root) = match t.split_once('*') {
        Some((c, r)) => (parse_rational(c)?, r.trim()),
        None if t.starts_with('-') => (-BigRational::one(), t[1..].trim()),
        None => (BigRational::one(), t),
    };
    let exp = match root.strip_prefix('z') {
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.trim().parse::<i64>().ok())
            .ok_or_else(|| Error::malformed("", format!("bad root of unity {s:?}")))?,
        None => return Err(Error::malformed("", format!("bad scalar {s:?}"))),
    };
    Ok(CycNum::canonicalize(m, &[(exp, coef)]))
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m.hash(state);
        self.coeffs.hash(state);
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.same_field(rhs);
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.same_field(rhs);
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.same_field(rhs);
        let field = &self.field;
        let phi = field.phi;
        if phi == 1 {
            return CycNum {
                field: field.clone(),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut conv = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<BigRational> = conv.drain(..phi).collect();
        for (off, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (phi + off) % field.m as usize;
            for (slot, &p) in coeffs.iter_mut().zip(&field.powers[k]) {
                if p != 0 {
                    *slot += &c * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        CycNum {
            field: field.clone(),
            coeffs,
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: CycNum) -> CycNum {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: &CycNum) -> CycNum {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.same_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        self.same_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = match k {
                0 => fmt_rational(c),
                _ => {
                    let root = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if c.is_one() {
                        root
                    } else if (-c).is_one() {
                        format!("-{root}")
                    } else {
                        format!("{}*{root}", fmt_rational(c))
                    }
                }
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return write!(f, "0");
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
        if parts.len() > 1 {
            write!(f, "({out})")
        } else {
            write!(f, "{out}")
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[m={}]", self.field.m)
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    m: u32,
    c: Vec<String>,
}

impl CycJson {
    fn into_cyc(self) -> Result<CycNum> {
        if self.m == 0 {
            return Err(Error::malformed("m", "modulus must be positive"));
        }
        let field = CycField::get(self.m);
        if self.c.len() > field.phi {
            return Err(Error::malformed(
                "c",
                format!("expected at most {} coefficients", field.phi),
            ));
        }
        let mut raw = Vec::with_capacity(self.c.len());
        for (k, s) in self.c.iter().enumerate() {
            raw.push((k as i64, parse_rational(s)?));
        }
        Ok(CycNum::canonicalize(self.m, &raw))
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson {
            m: self.field.m,
            c: self.coeffs.iter().map(fmt_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        CycJson::deserialize(deserializer)?
            .into_cyc()
            .map_err(D::Error::custom)
    }
}

/// `[k]_ε = 1 + ε + … + ε^{k-1}`.
pub fn quantum_integer(k: u32, eps: &CycNum) -> CycNum {
    let mut acc = CycNum::zero(eps.modulus());
    let mut p = CycNum::one(eps.modulus());
    for _ in 0..k {
        acc += &p;
        p = &p * eps;
    }
    acc
}

/// Least common multiple for moduli.
pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Rational helper used by callers that average over groups.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
    }

    #[test]
    fn canonicalize_examples() {
        let z2 = CycNum::canonicalize(4, &[(2, q(1, 1))]);
        assert_eq!(z2, CycNum::from_integer(4, -1));
        let s = CycNum::canonicalize(3, &[(0, q(1, 1)), (1, q(1, 1)), (2, q(1, 1))]);
        assert!(s.is_zero());
        let r = CycNum::canonicalize(1, &[(0, q(5, 3))]);
        assert_eq!(r.coeffs(), &[q(5, 3)]);
    }

    #[test]
    fn arithmetic_examples() {
        let z8 = CycNum::zeta(8);
        assert!((&z8 * &CycNum::root_of_unity(8, 7)).is_one());

        let z4 = CycNum::zeta(4);
        let one = CycNum::one(4);
        assert_eq!(&(&one + &z4) * &(&one - &z4), CycNum::from_integer(4, 2));

        let z3 = CycNum::zeta(3);
        let inv = CycNum::one(3).checked_div(&(&CycNum::one(3) + &z3)).unwrap();
        assert_eq!(inv, -&z3);
        assert!((&inv * &(&CycNum::one(3) + &z3)).is_one());
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(
            CycNum::one(5).checked_div(&CycNum::zero(5)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn zeta_has_exact_order() {
        for m in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let z = CycNum::zeta(m);
            for k in 1..m {
                assert!(!z.pow(k as i64).unwrap().is_one(), "m={m} k={k}");
            }
            assert!(z.pow(m as i64).unwrap().is_one());
        }
    }

    #[test]
    fn embed_and_root_exponent() {
        let i = CycNum::zeta(4);
        let e = i.embed(8).unwrap();
        assert_eq!(e, CycNum::root_of_unity(8, 2));
        assert_eq!(e.root_exponent(), Some(2));
        assert_eq!(CycNum::from_integer(8, 2).root_exponent(), None);
        assert!(i.embed(6).is_err());
    }

    #[test]
    fn json_roundtrip_and_parse() {
        let z = CycNum::zeta(4);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"m":4,"c":["0","1"]}"#);
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let v: serde_json::Value = serde_json::json!("-z^3");
        assert_eq!(
            CycNum::parse_value(&v, 8).unwrap(),
            -CycNum::root_of_unity(8, 3)
        );
        let v: serde_json::Value = serde_json::json!("3/2*z");
        assert_eq!(
            CycNum::parse_value(&v, 3).unwrap(),
            CycNum::zeta(3).scale(&q(3, 2))
        );
        assert_eq!(
            CycNum::parse_value(&serde_json::json!(-2), 1).unwrap(),
            CycNum::from_integer(1, -2)
        );
    }

    #[test]
    fn quantum_integers() {
        let w = CycNum::zeta(3);
        assert!(quantum_integer(3, &w).is_zero());
        assert_eq!(quantum_integer(3, &CycNum::one(3)), CycNum::from_integer(3, 3));
        assert_eq!(quantum_integer(2, &CycNum::from_integer(2, -1)), CycNum::zero(2));
    }

    fn arb_cyc(m: u32) -> impl Strategy<Value = CycNum> {
        let phi = CycField::get(m).degree();
        proptest::collection::vec((-6i64..6, 1i64..4), phi).prop_map(move |cs| {
            let raw: Vec<(i64, BigRational)> = cs
                .into_iter()
                .enumerate()
                .map(|(k, (n, d))| (k as i64, rational(n, d)))
                .collect();
            CycNum::canonicalize(m, &raw)
        })
    }

    fn arb_triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
        prop::sample::select(vec![3u32, 4, 5, 8, 12])
            .prop_flat_map(|m| (arb_cyc(m), arb_cyc(m), arb_cyc(m)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(a.is_zero(), a.coeffs().iter().all(|c| c.is_zero()));
        }
    }
}
