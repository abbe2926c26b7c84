//! Integer Laurent polynomials in the residue cardinality `q` and the
//! Steinberg twist `λ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `Σ c · q^a · λ^b` with integer coefficients, stored canonically
/// (no zero coefficients), so structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QLPoly {
    terms: BTreeMap<(i64, i64), i64>,
}

impl QLPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c · q^a · λ^b`.
    pub fn monomial(c: i64, q_exp: i64, lambda_exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((q_exp, lambda_exp), c);
        }
        QLPoly { terms }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(a: i64) -> Self {
        Self::monomial(1, a, 0)
    }

    pub fn lambda() -> Self {
        Self::lambda_pow(1)
    }

    pub fn lambda_pow(b: i64) -> Self {
        Self::monomial(1, 0, b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `((q_exp, lambda_exp), coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, q_exp: i64, lambda_exp: i64) -> i64 {
        self.terms.get(&(q_exp, lambda_exp)).copied().unwrap_or(0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64, i64)>>(triples: I) -> Self {
        let mut out = QLPoly::zero();
        for (a, b, c) in triples {
            out.add_term(a, b, c);
        }
        out
    }

    fn add_term(&mut self, a: i64, b: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert(0);
        *slot = slot.checked_add(c).expect("QLPoly coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QLPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[a, b, c]` triples, sorted by exponent pair.
    pub fn to_triples(&self) -> Vec<[i64; 3]> {
        self.terms.iter().map(|(&(a, b), &c)| [a, b, c]).collect()
    }
}

impl Add<&QLPoly> for &QLPoly {
    type Output = QLPoly;
    fn add(self, rhs: &QLPoly) -> QLPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&QLPoly> for QLPoly {
    fn add_assign(&mut self, rhs: &QLPoly) {
        for (&(a, b), &c) in &rhs.terms {
            self.add_term(a, b, c);
        }
    }
}

impl SubAssign<&QLPoly> for QLPoly {
    fn sub_assign(&mut self, rhs: &QLPoly) {
        for (&(a, b), &c) in &rhs.terms {
            self.add_term(a, b, c.checked_neg().expect("QLPoly coefficient overflow"));
        }
    }
}

impl Sub<&QLPoly> for &QLPoly {
    type Output = QLPoly;
    fn sub(self, rhs: &QLPoly) -> QLPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &QLPoly {
    type Output = QLPoly;
    fn neg(self) -> QLPoly {
        QLPoly {
            terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }
}

impl Mul<&QLPoly> for &QLPoly {
    type Output = QLPoly;
    fn mul(self, rhs: &QLPoly) -> QLPoly {
        let mut out = QLPoly::zero();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &rhs.terms {
                let c = c1.checked_mul(c2).expect("QLPoly coefficient overflow");
                out.add_term(a1 + a2, b1 + b2, c);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QLPoly> for QLPoly {
            type Output = QLPoly;
            fn $m(self, rhs: QLPoly) -> QLPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QLPoly> for QLPoly {
            type Output = QLPoly;
            fn $m(self, rhs: &QLPoly) -> QLPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QLPoly {
    type Output = QLPoly;
    fn neg(self) -> QLPoly {
        -&self
    }
}

impl fmt::Display for QLPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest λ-power first, then highest q-power
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|x, y| (y.0 .1, y.0 .0).cmp(&(x.0 .1, x.0 .0)));
        for (idx, (&(a, b), &c)) in items.into_iter().enumerate() {
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if mag != 1 || (a == 0 && b == 0) {
                factors.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => factors.push("q".into()),
                _ => factors.push(format!("q^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("λ".into()),
                _ => factors.push(format!("λ^{b}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for QLPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_triples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let triples: Vec<[i64; 3]> = Vec::deserialize(d)?;
        Ok(QLPoly::from_terms(triples.into_iter().map(|[a, b, c]| (a, b, c))))
    }
}
