//! Exact arithmetic in `ℚ(ζ_M)`.
//!
//! An element is a polynomial in `ζ_M` of degree below `φ(M)`, stored as an
//! integer numerator vector over a positive common denominator. Products are
//! reduced modulo the monic integer polynomial `Φ_M`, so reduction never
//! introduces new denominators.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// `ℚ(ζ_M)` with `Φ_M` cached.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    /// Coefficients of `Φ_M`, lowest degree first. Monic of degree `φ(M)`.
    phi_poly: Vec<i64>,
    zeta_powers: OnceLock<Vec<CycloNum>>,
}

fn registry() -> &'static Mutex<HashMap<u64, Arc<CyclotomicField>>> {
    static REG: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Exact division by a monic polynomial.
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (dd..num.len()).rev() {
        let c = r[k];
        q[k - dd] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[k - dd + i] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Coefficients of the cyclotomic polynomial `Φ_M`, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = poly_divexact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

/// Shared handle to `ℚ(ζ_M)`.
pub fn field(conductor: u64) -> Result<Arc<CyclotomicField>> {
    if conductor == 0 {
        return invalid("conductor must be ≥ 1");
    }
    if conductor > 4096 {
        return invalid(format!("conductor {conductor} is beyond the supported range"));
    }
    let mut reg = registry().lock().expect("field registry poisoned");
    Ok(reg
        .entry(conductor)
        .or_insert_with(|| {
            Arc::new(CyclotomicField {
                conductor,
                phi_poly: cyclotomic_polynomial(conductor),
                zeta_powers: OnceLock::new(),
            })
        })
        .clone())
}

impl CyclotomicField {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `φ(M)`, the degree of the field.
    pub fn degree(&self) -> usize {
        self.phi_poly.len() - 1
    }

    pub fn phi_poly(&self) -> &[i64] {
        &self.phi_poly
    }

    fn reduce(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for k in (d..p.len()).rev() {
            if p[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut p[k]);
            for i in 0..d {
                let f = self.phi_poly[i];
                if f != 0 {
                    p[k - d + i] -= &c * f;
                }
            }
        }
        p.truncate(d);
        p.resize(d, BigInt::zero());
        p
    }
}

/// An element of `ℚ(ζ_M)`.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.den == other.den && self.num == other.num
    }
}
impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{q}")?,
                1 => write!(f, "{q}·z{}", self.field.conductor)?,
                _ => write!(f, "{q}·z{}^{k}", self.field.conductor)?,
            }
        }
        Ok(())
    }
}

/// Serializable form: conductor plus reduced rational coefficients as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloRepr {
    pub conductor: u64,
    pub coeffs: Vec<String>,
}

impl CycloNum {
    fn normalized(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        Self { field, num, den }
    }

    pub fn zero(conductor: u64) -> Result<Self> {
        let f = field(conductor)?;
        Ok(Self::zero_in(&f))
    }

    pub fn zero_in(f: &Arc<CyclotomicField>) -> Self {
        Self { field: f.clone(), num: vec![BigInt::zero(); f.degree()], den: BigInt::one() }
    }

    pub fn one_in(f: &Arc<CyclotomicField>) -> Self {
        Self::from_int_in(f, 1)
    }

    pub fn from_int_in(f: &Arc<CyclotomicField>, k: i64) -> Self {
        let mut num = vec![BigInt::zero(); f.degree()];
        num[0] = BigInt::from(k);
        Self { field: f.clone(), num, den: BigInt::one() }
    }

    pub fn one(conductor: u64) -> Result<Self> {
        Self::from_rational(conductor, BigRational::one())
    }

    pub fn from_int(conductor: u64, k: i64) -> Result<Self> {
        Self::from_rational(conductor, BigRational::from_integer(k.into()))
    }

    pub fn from_rational(conductor: u64, q: BigRational) -> Result<Self> {
        let f = field(conductor)?;
        let mut num = vec![BigInt::zero(); f.degree()];
        num[0] = q.numer().clone();
        Ok(Self::normalized(f, num, q.denom().clone()))
    }

    /// `Σ_k counts[k]·ζ^k / den` with exponents read mod `M`.
    pub fn from_root_counts(f: &Arc<CyclotomicField>, counts: &[i64], den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero("zero denominator".into()));
        }
        let m = f.conductor as usize;
        let mut p = vec![BigInt::zero(); m.max(f.degree())];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                p[k % m] += c;
            }
        }
        let num = f.reduce(p);
        Ok(Self::normalized(f.clone(), num, BigInt::from(den)))
    }

    /// `ζ_M^k`.
    pub fn zeta_pow(conductor: u64, k: i64) -> Result<Self> {
        let f = field(conductor)?;
        Ok(Self::zeta_pow_in(&f, k))
    }

    pub fn zeta_pow_in(f: &Arc<CyclotomicField>, k: i64) -> Self {
        let m = f.conductor as i64;
        let powers = f.zeta_powers.get_or_init(|| {
            (0..f.conductor as usize)
                .map(|e| {
                    let mut counts = vec![0i64; e + 1];
                    counts[e] = 1;
                    Self::from_root_counts(f, &counts, 1).expect("nonzero denominator")
                })
                .collect()
        });
        powers[k.rem_euclid(m) as usize].clone()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Rational coefficients in the power basis `1, ζ, …, ζ^{φ(M)-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    /// The rational value if the element lies in `ℚ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn repr(&self) -> CycloRepr {
        CycloRepr { conductor: self.conductor(), coeffs: self.coeffs().iter().map(|q| q.to_string()).collect() }
    }

    fn same_field(&self, other: &Self, op: &str) -> Result<()> {
        if self.field.conductor != other.field.conductor {
            return invalid(format!(
                "{op}: conductor mismatch {} vs {} (lift explicitly first)",
                self.field.conductor, other.field.conductor
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other, "add")?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other, "sub")?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other, "mul")?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other, "div")?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let sign = if negate { -BigInt::one() } else { BigInt::one() };
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + &sign * b).collect();
            return Self::normalized(self.field.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + &sign * b * &self.den)
            .collect();
        Self::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero_in(&self.field);
        }
        let d = self.field.degree();
        let mut p = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(p);
        Self::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::normalized(self.field.clone(), unit_vec(self.field.degree()), BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_M`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        let to_q = |v: &[BigInt], den: &BigInt| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::new(c.clone(), den.clone())).collect()
        };
        let modulus: Vec<BigRational> =
            self.field.phi_poly.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let (g, s) = ext_gcd(to_q(&self.num, &self.den), modulus);
        // g is a nonzero constant because Φ_M is irreducible.
        let g0 = g
            .first()
            .cloned()
            .filter(|_| g.len() == 1)
            .ok_or_else(|| Error::InternalInconsistency("Φ_M shares a factor with a nonzero element".into()))?;
        let mut coeffs: Vec<BigRational> = s.into_iter().map(|c| c / &g0).collect();
        coeffs.resize(self.field.degree(), BigRational::zero());
        Ok(Self::from_rational_coeffs(&self.field, &coeffs))
    }

    fn from_rational_coeffs(f: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut p: Vec<BigInt> = coeffs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        if p.len() < f.degree() {
            p.resize(f.degree(), BigInt::zero());
        }
        let num = f.reduce(p);
        Self::normalized(f.clone(), num, den)
    }

    /// Embeds `ℚ(ζ_M)` into `ℚ(ζ_{cM})` through `ζ_M ↦ ζ_{cM}^c`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let m = self.conductor();
        if target == 0 || target % m != 0 {
            return invalid(format!("cannot lift conductor {m} to {target}"));
        }
        let c = (target / m) as usize;
        let f = field(target)?;
        let mut p = vec![BigInt::zero(); (c * self.num.len()).max(f.degree())];
        for (k, a) in self.num.iter().enumerate() {
            p[c * k] = a.clone();
        }
        let num = f.reduce(p);
        Ok(Self::normalized(f, num, self.den.clone()))
    }
}

fn unit_vec(d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d];
    v[0] = BigInt::one();
    v
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(q.len() + b.len() - 1);
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = &r[k] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k - db + i] -= &c * bi;
        }
        q[k - db] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)`.
fn ext_gcd(mut a: Vec<BigRational>, mut m: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    trim(&mut a);
    trim(&mut m);
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![BigRational::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:ident, $name:literal) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            /// Panics on a conductor mismatch; use the `try_` variant to get an error.
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                self.same_field(rhs, $name).unwrap_or_else(|e| panic!("{e}"));
                self.$body(rhs)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    };
}

impl CycloNum {
    fn add_op(&self, rhs: &Self) -> Self {
        self.add_unchecked(rhs, false)
    }
    fn sub_op(&self, rhs: &Self) -> Self {
        self.add_unchecked(rhs, true)
    }
}

binop!(Add, add, add_op, "add");
binop!(Sub, sub, sub_op, "sub");
binop!(Mul, mul, mul_unchecked, "mul");

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn zeta_identities() {
        let z = CycloNum::zeta_pow(4, 1).unwrap();
        assert_eq!(&z * &z, CycloNum::from_int(4, -1).unwrap());
        let w = CycloNum::zeta_pow(3, 1).unwrap();
        let one = CycloNum::one(3).unwrap();
        assert!((&(&one + &w) + &(&w * &w)).is_zero());
        assert_eq!(CycloNum::zeta_pow(6, 3).unwrap(), CycloNum::from_int(6, -1).unwrap());
    }

    #[test]
    fn zeta_orders_up_to_64() {
        for m in 1u64..=64 {
            let f = field(m).unwrap();
            let one = CycloNum::one(m).unwrap();
            for k in 0..m as i64 {
                let z = CycloNum::zeta_pow_in(&f, k);
                let ord = m / (k as u64).gcd(&m);
                assert!(z.pow(ord).is_one(), "M={m} k={k}");
                for p in (2..=ord).filter(|p| ord % p == 0 && (2..*p).all(|d| p % d != 0)) {
                    assert!(z.pow(ord / p) != one, "M={m} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn inverse_and_errors() {
        let a = &CycloNum::from_int(8, 2).unwrap() + &CycloNum::zeta_pow(8, 3).unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(matches!(CycloNum::zero(8).unwrap().inverse(), Err(Error::DivisionByZero(_))));
        let b = CycloNum::one(4).unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn rational_scaling() {
        let a = CycloNum::zeta_pow(5, 2).unwrap().scale(&q(3, 4));
        let b = a.scale(&q(4, 3));
        assert_eq!(b, CycloNum::zeta_pow(5, 2).unwrap());
    }

    #[test]
    fn lift_is_a_ring_map() {
        let a = &CycloNum::zeta_pow(4, 1).unwrap() + &CycloNum::from_rational(4, q(1, 3)).unwrap();
        let b = CycloNum::zeta_pow(4, 3).unwrap().scale(&q(-2, 5));
        for target in [8u64, 12, 20] {
            let la = a.lift(target).unwrap();
            let lb = b.lift(target).unwrap();
            assert_eq!((&a * &b).lift(target).unwrap(), &la * &lb);
            assert_eq!((&a + &b).lift(target).unwrap(), &la + &lb);
        }
        assert_eq!(CycloNum::zeta_pow(4, 1).unwrap().lift(12).unwrap(), CycloNum::zeta_pow(12, 3).unwrap());
        assert!(a.lift(6).is_err());
    }

    fn elem_strategy(m: u64) -> impl Strategy<Value = CycloNum> {
        let d = totient(m) as usize;
        (prop::collection::vec(-6i64..7, d), 1i64..5).prop_map(move |(cs, den)| {
            let f = field(m).unwrap();
            let coeffs: Vec<BigRational> = cs.iter().map(|&c| BigRational::new(c.into(), den.into())).collect();
            CycloNum::from_rational_coeffs(&f, &coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in elem_strategy(12), b in elem_strategy(12), c in elem_strategy(12)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn inverse_in_prime_power_field(a in elem_strategy(9)) {
            if !a.is_zero() {
                prop_assert!((&a.inverse().unwrap() * &a).is_one());
            }
        }
    }
}
