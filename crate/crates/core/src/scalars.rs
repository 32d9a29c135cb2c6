//! Exact arithmetic in the cyclotomic field Q(zeta_m).
//!
//! Elements are stored as rational polynomials of degree below phi(m) in the
//! power basis, reduced modulo the m-th cyclotomic polynomial. Numerators share
//! one denominator. Values that fit in `i64` take a fast path; anything larger
//! falls back to `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("zero has no multiplicative order")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live in different fields: zeta_order {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("zeta_order {0} does not divide {1}")]
    NotASubfield(u64, u64),
}

/// The field Q(zeta_m) with its cyclotomic polynomial and a table of powers of zeta.
pub struct CyclotomicField {
    m: u64,
    phi: usize,
    /// Monic Phi_m, lowest degree first, length phi + 1.
    poly: Vec<i64>,
    zeta_table: Vec<Repr>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.m)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}
impl Eq for CyclotomicField {}

pub type Field = Arc<CyclotomicField>;

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided exactly by Phi_d for every proper divisor d.
    let mut num: Vec<i128> = vec![0; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = poly_exact_div(&num, &div);
        }
    }
    num.into_iter().map(|c| c as i64).collect()
}

fn poly_exact_div(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn euler_phi(m: u64) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

impl CyclotomicField {
    pub fn new(m: u64) -> Field {
        assert!(m >= 1, "zeta_order must be positive");
        let poly = cyclotomic_polynomial(m);
        let phi = euler_phi(m);
        debug_assert_eq!(poly.len(), phi + 1);
        let mut field = CyclotomicField {
            m,
            phi,
            poly,
            zeta_table: Vec::new(),
        };
        let mut table = Vec::with_capacity(m as usize);
        for k in 0..m as usize {
            let mut v = vec![BigInt::zero(); k.max(phi) + 1];
            v[k] = BigInt::one();
            table.push(field.reduce_big(v, BigInt::one()));
        }
        field.zeta_table = table;
        Arc::new(field)
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    fn reduce_big(&self, mut v: Vec<BigInt>, den: BigInt) -> Repr {
        let phi = self.phi;
        if v.len() > phi {
            for k in (phi..v.len()).rev() {
                let c = std::mem::take(&mut v[k]);
                if !c.is_zero() {
                    for j in 0..phi {
                        let pj = self.poly[j];
                        if pj != 0 {
                            v[k - phi + j] -= &c * pj;
                        }
                    }
                }
            }
            v.truncate(phi);
        } else {
            v.resize(phi, BigInt::zero());
        }
        Repr::normalize_big(v, den)
    }

    fn reduce_small(&self, mut v: Vec<i128>, den: i128) -> Option<Repr> {
        let phi = self.phi;
        if v.len() > phi {
            for k in (phi..v.len()).rev() {
                let c = v[k];
                v[k] = 0;
                if c != 0 {
                    for j in 0..phi {
                        let pj = self.poly[j] as i128;
                        if pj != 0 {
                            let t = c.checked_mul(pj)?;
                            v[k - phi + j] = v[k - phi + j].checked_sub(t)?;
                        }
                    }
                }
            }
            v.truncate(phi);
        } else {
            v.resize(phi, 0);
        }
        Some(Repr::normalize_i128(v, den))
    }

    pub fn zero(self: &Arc<Self>) -> CycScalar {
        CycScalar {
            field: self.clone(),
            repr: Repr::Small {
                num: vec![0; self.phi].into_boxed_slice(),
                den: 1,
            },
        }
    }

    pub fn one(self: &Arc<Self>) -> CycScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self: &Arc<Self>, c: i64) -> CycScalar {
        let mut num = vec![0i64; self.phi];
        num[0] = c;
        CycScalar {
            field: self.clone(),
            repr: Repr::Small {
                num: num.into_boxed_slice(),
                den: 1,
            },
        }
    }

    pub fn from_rational(self: &Arc<Self>, r: &BigRational) -> CycScalar {
        let mut num = vec![BigInt::zero(); self.phi];
        num[0] = r.numer().clone();
        CycScalar {
            field: self.clone(),
            repr: Repr::normalize_big(num, r.denom().clone()),
        }
    }

    pub fn from_frac(self: &Arc<Self>, p: i64, q: i64) -> CycScalar {
        self.from_rational(&BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// zeta_m^k for any integer k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycScalar {
        let k = k.rem_euclid(self.m as i64) as usize;
        CycScalar {
            field: self.clone(),
            repr: self.zeta_table[k].clone(),
        }
    }

    pub fn zeta(self: &Arc<Self>) -> CycScalar {
        self.zeta_pow(1)
    }

    /// Builds an element from power-basis coefficients of arbitrary length.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[BigRational]) -> CycScalar {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        // x^m = 1 first so that long inputs stay short.
        if v.len() > self.m as usize {
            let m = self.m as usize;
            let mut w = vec![BigInt::zero(); m];
            for (k, c) in v.into_iter().enumerate() {
                w[k % m] += c;
            }
            v = w;
        }
        CycScalar {
            field: self.clone(),
            repr: self.reduce_big(v, den),
        }
    }

    /// Parses "a0 + a1*z + 3/4*z^2 - z^5".
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<CycScalar, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let chars: Vec<char> = compact.chars().collect();
        for (idx, &ch) in chars.iter().enumerate() {
            if (ch == '+' || ch == '-') && !(idx > 0 && chars[idx - 1] == '^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if idx > 0 {
                    return Err(err());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (neg, t) in terms {
            let (coef_str, power) = if let Some(pos) = t.find('z') {
                let (c, rest) = t.split_at(pos);
                let c = c.strip_suffix('*').unwrap_or(c);
                let p = if rest == "z" {
                    1i64
                } else {
                    let e = rest.strip_prefix("z^").ok_or_else(err)?;
                    e.parse::<i64>().map_err(|_| err())?
                };
                (c.to_string(), p)
            } else {
                (t.clone(), 0)
            };
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(&coef_str).ok_or_else(err)?
            };
            let coef = if neg { -coef } else { coef };
            let idx = power.rem_euclid(self.m as i64) as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, BigRational::zero());
            }
            coeffs[idx] += coef;
        }
        Ok(self.from_coeffs(&coeffs))
    }

    /// Image of x under the embedding Q(zeta_m) -> Q(zeta_M), zeta_m -> zeta_M^(M/m).
    pub fn embed(self: &Arc<Self>, x: &CycScalar) -> Result<CycScalar, ScalarError> {
        let m = x.field.m;
        if self.m % m != 0 {
            return Err(ScalarError::NotASubfield(m, self.m));
        }
        let step = (self.m / m) as usize;
        if step == 1 {
            return Ok(CycScalar {
                field: self.clone(),
                repr: x.repr.clone(),
            });
        }
        let (num, den) = x.repr.to_big();
        let mut v = vec![BigInt::zero(); (num.len().saturating_sub(1)) * step + 1];
        for (k, c) in num.into_iter().enumerate() {
            v[k * step] = c;
        }
        Ok(CycScalar {
            field: self.clone(),
            repr: self.reduce_big(v, den),
        })
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: Box<[i64]>, den: i64 },
    Big { num: Box<[BigInt]>, den: BigInt },
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

impl Repr {
    fn normalize_i128(mut v: Vec<i128>, mut den: i128) -> Repr {
        debug_assert!(den != 0);
        if v.iter().all(|&c| c == 0) {
            return Repr::Small {
                num: vec![0; v.len()].into_boxed_slice(),
                den: 1,
            };
        }
        let mut g = den;
        for &c in &v {
            if g == 1 {
                break;
            }
            if c != 0 {
                g = gcd_i128(g, c);
            }
        }
        let mut g = g.abs();
        if den < 0 {
            g = -g;
        }
        if g != 1 {
            for c in v.iter_mut() {
                *c /= g;
            }
            den /= g;
        }
        let fits = den <= i64::MAX as i128 && v.iter().all(|&c| c >= i64::MIN as i128 && c <= i64::MAX as i128);
        if fits {
            Repr::Small {
                num: v.into_iter().map(|c| c as i64).collect(),
                den: den as i64,
            }
        } else {
            Repr::Big {
                num: v.into_iter().map(BigInt::from).collect(),
                den: BigInt::from(den),
            }
        }
    }

    fn normalize_big(mut v: Vec<BigInt>, mut den: BigInt) -> Repr {
        debug_assert!(!den.is_zero());
        if v.iter().all(|c| c.is_zero()) {
            return Repr::Small {
                num: vec![0; v.len()].into_boxed_slice(),
                den: 1,
            };
        }
        let mut g = den.abs();
        for c in &v {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        let small_den = den.to_i64();
        let small: Option<Vec<i64>> = v.iter().map(|c| c.to_i64()).collect();
        match (small, small_den) {
            (Some(num), Some(den)) => Repr::Small {
                num: num.into_boxed_slice(),
                den,
            },
            _ => Repr::Big {
                num: v.into_boxed_slice(),
                den,
            },
        }
    }

    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Repr::Small { num, den } => (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.to_vec(), den.clone()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num.iter().all(|c| c.is_zero()),
        }
    }

    fn coeff(&self, k: usize) -> BigRational {
        match self {
            Repr::Small { num, den } => BigRational::new(BigInt::from(num[k]), BigInt::from(*den)),
            Repr::Big { num, den } => BigRational::new(num[k].clone(), den.clone()),
        }
    }
}

/// An element of Q(zeta_m).
#[derive(Clone)]
pub struct CycScalar {
    field: Field,
    repr: Repr,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.repr == other.repr
    }
}
impl Eq for CycScalar {}

impl Hash for CycScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m.hash(state);
        self.repr.hash(state);
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in 0..self.field.phi {
            let c = self.repr.coeff(k);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            match k {
                0 => write!(f, "{}", coef)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", coef)?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycScalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    /// Power-basis coefficient of zeta^k, k < phi(m).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.repr.coeff(k)
    }

    /// The value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        let phi = self.field.phi;
        let rational = match &self.repr {
            Repr::Small { num, .. } => num[1..phi].iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num[1..phi].iter().all(|c| c.is_zero()),
        };
        if rational {
            Some(self.repr.coeff(0))
        } else {
            None
        }
    }

    fn check(&self, other: &CycScalar) {
        assert_eq!(
            self.field.m, other.field.m,
            "scalar arithmetic across fields Q(zeta_{}) and Q(zeta_{})",
            self.field.m, other.field.m
        );
    }

    pub fn try_add(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if self.field.m != other.field.m {
            return Err(ScalarError::FieldMismatch(self.field.m, other.field.m));
        }
        Ok(self.add_ref(other))
    }

    pub fn try_mul(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if self.field.m != other.field.m {
            return Err(ScalarError::FieldMismatch(self.field.m, other.field.m));
        }
        Ok(self.mul_ref(other))
    }

    fn add_ref(&self, other: &CycScalar) -> CycScalar {
        self.check(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            let (da, db) = (*da as i128, *db as i128);
            let v: Vec<i128> = if da == db {
                a.iter().zip(b.iter()).map(|(&x, &y)| x as i128 + y as i128).collect()
            } else {
                a.iter()
                    .zip(b.iter())
                    .map(|(&x, &y)| x as i128 * db + y as i128 * da)
                    .collect()
            };
            let den = if da == db { da } else { da * db };
            return CycScalar {
                field: self.field.clone(),
                repr: Repr::normalize_i128(v, den),
            };
        }
        let (a, da) = self.repr.to_big();
        let (b, db) = other.repr.to_big();
        let v: Vec<BigInt> = if da == db {
            a.into_iter().zip(b).map(|(x, y)| x + y).collect()
        } else {
            a.into_iter().zip(b).map(|(x, y)| x * &db + y * &da).collect()
        };
        let den = if da == db { da } else { da * db };
        CycScalar {
            field: self.field.clone(),
            repr: Repr::normalize_big(v, den),
        }
    }

    fn mul_ref(&self, other: &CycScalar) -> CycScalar {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let phi = self.field.phi;
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if let Some(r) = mul_small(a, *da, b, *db, &self.field) {
                return CycScalar {
                    field: self.field.clone(),
                    repr: r,
                };
            }
        }
        let (a, da) = self.repr.to_big();
        let (b, db) = other.repr.to_big();
        let mut v = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycScalar {
            field: self.field.clone(),
            repr: self.field.reduce_big(v, da * db),
        }
    }

    pub fn neg_ref(&self) -> CycScalar {
        let repr = match &self.repr {
            Repr::Small { num, den } if num.iter().all(|&c| c != i64::MIN) => Repr::Small {
                num: num.iter().map(|&c| -c).collect(),
                den: *den,
            },
            _ => {
                let (n, d) = self.repr.to_big();
                Repr::normalize_big(n.into_iter().map(|c| -c).collect(), d)
            }
        };
        CycScalar {
            field: self.field.clone(),
            repr,
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo Phi_m.
    pub fn inv(&self) -> Result<CycScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(&r.recip()));
        }
        let phi = self.field.phi;
        let a: Vec<BigRational> = (0..phi).map(|k| self.repr.coeff(k)).collect();
        let p: Vec<BigRational> = self
            .field
            .poly
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        // Invariant: r0 = s0 * a (mod p), r1 = s1 * a (mod p).
        let mut r0 = trim(p);
        let mut s0: Vec<BigRational> = vec![];
        let mut r1 = trim(a);
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s2;
        }
        // r1 is a nonzero constant since Phi_m is irreducible.
        let c = r1[0].clone();
        let coeffs: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(self.field.from_coeffs(&coeffs))
    }

    pub fn div(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<CycScalar, ScalarError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Multiplicative order, or `None` when the element is not a root of unity.
    pub fn multiplicative_order(&self) -> Result<Option<u64>, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInput);
        }
        let m = self.field.m;
        let big = if m % 2 == 0 { m } else { 2 * m };
        let mut divisors: Vec<u64> = (1..=big).filter(|d| big % d == 0).collect();
        divisors.sort_unstable();
        // Cheap rejection: roots of unity have all coefficients bounded and integral.
        if let Repr::Big { .. } = self.repr {
            return Ok(None);
        }
        if let Repr::Small { den, .. } = self.repr {
            if den != 1 {
                return Ok(None);
            }
        }
        for d in divisors {
            if self.pow(d as i64)?.is_one() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Exponent k with self = zeta_m^k, if any.
    pub fn zeta_exponent(&self) -> Option<u64> {
        (0..self.field.m).find(|&k| self.field.zeta_pow(k as i64) == *self)
    }

    /// Writes self = r * zeta_m^k with r rational, if possible.
    pub fn as_rational_times_root(&self) -> Option<(BigRational, u64)> {
        if self.is_zero() {
            return None;
        }
        for k in 0..self.field.m {
            let y = self.mul_ref(&self.field.zeta_pow(-(k as i64)));
            if let Some(r) = y.as_rational() {
                return Some((r, k));
            }
        }
        None
    }
}

fn mul_small(a: &[i64], da: i64, b: &[i64], db: i64, field: &CyclotomicField) -> Option<Repr> {
    let phi = field.phi;
    let mut v = vec![0i128; 2 * phi - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                v[i + j] = v[i + j].checked_add(x.checked_mul(y as i128)?)?;
            }
        }
    }
    let den = (da as i128).checked_mul(db as i128)?;
    field.reduce_small(v, den)
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(v)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut v = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        v[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        v[i] -= y;
    }
    trim(v)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                let f: fn(&CycScalar, &CycScalar) -> CycScalar = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                std::ops::$tr::$m(&self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| a.add_ref(b));
impl_binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
impl_binop!(Mul, mul, |a, b| a.mul_ref(b));

impl std::ops::Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.neg_ref()
    }
}

impl std::ops::Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.neg_ref()
    }
}

impl std::ops::AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_ref(rhs);
    }
}

impl std::ops::SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}
