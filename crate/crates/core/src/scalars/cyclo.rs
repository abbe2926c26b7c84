//! `Q(ζ_p)` in the power basis `1, ζ, …, ζ^{p-2}`, and Laurent polynomials
//! in `λ` over it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Prime, QLPoly, ScalarError};

/// An element of the cyclotomic field `Q(ζ_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    p: Prime,
    // p-1 coordinates; ζ^{p-1} is always rewritten as -(1 + ζ + … + ζ^{p-2})
    coords: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(p: Prime) -> Self {
        CycloNumber {
            p,
            coords: vec![BigRational::zero(); p.get() as usize - 1],
        }
    }

    pub fn from_rational(p: Prime, r: BigRational) -> Self {
        let mut out = Self::zero(p);
        out.coords[0] = r;
        out
    }

    pub fn from_int(p: Prime, c: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(c)))
    }

    /// `ζ_p^k` for any integer `k`.
    pub fn zeta_pow(p: Prime, k: i64) -> Self {
        let k = p.reduce(k) as usize;
        let m = p.get() as usize;
        let mut out = Self::zero(p);
        if k == m - 1 {
            for c in &mut out.coords {
                *c = -BigRational::one();
            }
        } else {
            out.coords[k] = BigRational::one();
        }
        out
    }

    pub fn from_coords(p: Prime, coords: Vec<BigRational>) -> Result<Self, ScalarError> {
        if coords.len() != p.get() as usize - 1 {
            return Err(ScalarError::CoordinateCount {
                p: p.get(),
                found: coords.len(),
            });
        }
        Ok(CycloNumber { p, coords })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.p != other.p {
            Err(ScalarError::PrimeMismatch(self.p.get(), other.p.get()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(CycloNumber {
            p: self.p,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(CycloNumber {
            p: self.p,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let m = self.p.get() as usize;
        // multiply in Q[x]/(x^p - 1), then fold the ζ^{p-1} coordinate away
        let mut acc = vec![BigRational::zero(); m];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % m] += a * b;
            }
        }
        let top = acc.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in &mut acc {
                *c -= &top;
            }
        }
        Ok(CycloNumber { p: self.p, coords: acc })
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ => {
                    let z = if k == 1 { "ζ".to_string() } else { format!("ζ^{k}") };
                    if c.is_one() {
                        z
                    } else if (-c).is_one() {
                        format!("-{z}")
                    } else {
                        format!("{c}*{z}")
                    }
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

/// A Laurent polynomial in the formal `λ` with coefficients in `Q(ζ_p)`.
///
/// Arithmetic operators panic when the operands were built over different
/// primes; the `checked_*` methods report that case as an error instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    p: Prime,
    terms: BTreeMap<i64, CycloNumber>,
}

impl CycloScalar {
    pub fn zero(p: Prime) -> Self {
        CycloScalar {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::from_number(CycloNumber::from_int(p, 1), 0)
    }

    /// `x · λ^b`.
    pub fn from_number(x: CycloNumber, lambda_exp: i64) -> Self {
        let p = x.prime();
        let mut terms = BTreeMap::new();
        if !x.is_zero() {
            terms.insert(lambda_exp, x);
        }
        CycloScalar { p, terms }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloNumber)> {
        self.terms.iter().map(|(&b, x)| (b, x))
    }

    pub fn coeff(&self, lambda_exp: i64) -> CycloNumber {
        self.terms
            .get(&lambda_exp)
            .cloned()
            .unwrap_or_else(|| CycloNumber::zero(self.p))
    }

    fn insert_add(&mut self, b: i64, x: CycloNumber) {
        let merged = match self.terms.remove(&b) {
            Some(old) => old.checked_add(&x).expect("prime checked by caller"),
            None => x,
        };
        if !merged.is_zero() {
            self.terms.insert(b, merged);
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.p != other.p {
            Err(ScalarError::PrimeMismatch(self.p.get(), other.p.get()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&b, x) in &other.terms {
            out.insert_add(b, x.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&b, x) in &other.terms {
            out.insert_add(b, x.neg());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = CycloScalar::zero(self.p);
        for (&b1, x1) in &self.terms {
            for (&b2, x2) in &other.terms {
                out.insert_add(b1 + b2, x1.checked_mul(x2)?);
            }
        }
        Ok(out)
    }

    /// Serialized form: `{"p": p, "terms": [[b, ["num/den", …]], …]}`.
    pub fn to_json(&self) -> CycloScalarJson {
        CycloScalarJson {
            p: self.p.get(),
            terms: self
                .terms
                .iter()
                .map(|(&b, x)| (b, x.coords.iter().map(rational_to_string).collect()))
                .collect(),
        }
    }

    pub fn from_json(j: &CycloScalarJson) -> Result<Self, ScalarError> {
        let p = Prime::new(j.p)?;
        let mut out = CycloScalar::zero(p);
        for (b, coords) in &j.terms {
            let coords = coords
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?;
            out.insert_add(*b, CycloNumber::from_coords(p, coords)?);
        }
        Ok(out)
    }
}

impl Add<&CycloScalar> for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&CycloScalar> for &CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&CycloScalar> for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            p: self.p,
            terms: self.terms.iter().map(|(&b, x)| (b, x.neg())).collect(),
        }
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&b, x)| match b {
                0 => format!("({x})"),
                1 => format!("({x})*λ"),
                _ => format!("({x})*λ^{b}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycloScalarJson {
    pub p: u32,
    pub terms: Vec<(i64, Vec<String>)>,
}

impl Serialize for CycloScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloScalarJson::deserialize(d)?;
        CycloScalar::from_json(&j).map_err(D::Error::custom)
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Ring homomorphism `Z[q^{±1}, λ^{±1}] → Q(ζ_p)[λ^{±1}]` sending `q ↦ p`.
pub fn specialize(x: &QLPoly, p: Prime) -> CycloScalar {
    let base = BigInt::from(p.get());
    let mut out = CycloScalar::zero(p);
    for ((a, b), c) in x.terms() {
        let pow = num_traits::pow(base.clone(), a.unsigned_abs() as usize);
        let r = if a >= 0 {
            BigRational::from_integer(pow * c)
        } else {
            BigRational::new(BigInt::from(c), pow)
        };
        out.insert_add(b, CycloNumber::from_rational(p, r));
    }
    out
}

/// The fixed nontrivial additive character `ψ(x) = ζ_p^x` of `F_p`.
///
/// `x` is reduced mod `p` first.
pub fn psi_char(p: Prime, x: i64) -> CycloScalar {
    CycloScalar::from_number(CycloNumber::zeta_pow(p, x), 0)
}
