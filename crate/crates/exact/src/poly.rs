//! Sparse multivariate polynomials over the rationals in the four local
//! indeterminates Q = p⁻¹, U = p^{−μ}, V = p^{−μ̄} and λ = λ_g(p).
//!
//! All local Euler-factor objects are built from monomials in these four
//! variables (the combination T := QUV appears so often it gets helpers).
//! Canonical form: no zero coefficient is ever stored, so structural equality
//! is semantic equality.

use crate::rational::Rational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub type Mono = [u16; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q = 0,
    U = 1,
    V = 2,
    Lambda = 3,
}

const VAR_NAMES: [&str; 4] = ["Q", "U", "V", "lam"];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalPolynomial {
    terms: BTreeMap<Mono, Rational>,
}

impl LocalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0, 0], c);
        }
        Self { terms }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(&[(v, 1)], Rational::one())
    }

    pub fn monomial(powers: &[(Var, u16)], coeff: Rational) -> Self {
        let mut mono = [0u16; 4];
        for &(v, e) in powers {
            mono[v as usize] += e;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Self { terms }
    }

    /// T^k = (QUV)^k.
    pub fn t_power(k: u16) -> Self {
        Self::monomial(&[(Var::Q, k), (Var::U, k), (Var::V, k)], Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&[0, 0, 0, 0])
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m[v as usize]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn insert_term(&mut self, mono: Mono, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn pow(&self, n: u16) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, r)| (*m, r * c)).collect(),
        }
    }

    /// Evaluates at an exact rational point (Q, U, V, λ).
    pub fn eval(&self, point: &[Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Sets one variable to zero (keeps only terms it does not divide).
    pub fn set_var_zero(&self, v: Var) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[v as usize] == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitutes V := U (collapses μ̄ onto μ, i.e. μ real).
    pub fn subst_v_to_u(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.insert_term([m[0], m[1] + m[2], 0, m[3]], c.clone());
        }
        out
    }

    /// True when every term is divisible by `v`.
    pub fn divisible_by(&self, v: Var) -> bool {
        self.terms.keys().all(|m| m[v as usize] >= 1)
    }
}

impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            let mut parts: Vec<String> = Vec::new();
            let abs = coeff.abs();
            let is_bare_mono = mono.iter().any(|&e| e > 0);
            if !is_bare_mono || !abs.is_one() {
                parts.push(crate::rational::format_rational(&abs));
            }
            for (i, &e) in mono.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(VAR_NAMES[i].to_string()),
                    _ => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
                }
            }
            let term = parts.join("*");
            if first {
                if coeff.is_negative() {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl Add for &LocalPolynomial {
    type Output = LocalPolynomial;
    fn add(self, rhs: &LocalPolynomial) -> LocalPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &LocalPolynomial {
    type Output = LocalPolynomial;
    fn sub(self, rhs: &LocalPolynomial) -> LocalPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &LocalPolynomial {
    type Output = LocalPolynomial;
    fn mul(self, rhs: &LocalPolynomial) -> LocalPolynomial {
        let mut out = LocalPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                out.insert_term(mono, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LocalPolynomial {
    type Output = LocalPolynomial;
    fn neg(self) -> LocalPolynomial {
        LocalPolynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<LocalPolynomial> for LocalPolynomial {
            type Output = LocalPolynomial;
            fn $method(self, rhs: LocalPolynomial) -> LocalPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LocalPolynomial> for LocalPolynomial {
            type Output = LocalPolynomial;
            fn $method(self, rhs: &LocalPolynomial) -> LocalPolynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<LocalPolynomial> for &LocalPolynomial {
            type Output = LocalPolynomial;
            fn $method(self, rhs: LocalPolynomial) -> LocalPolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LocalPolynomial {
    type Output = LocalPolynomial;
    fn neg(self) -> LocalPolynomial {
        -&self
    }
}

impl AddAssign<LocalPolynomial> for LocalPolynomial {
    fn add_assign(&mut self, rhs: LocalPolynomial) {
        for (m, c) in rhs.terms {
            self.insert_term(m, c);
        }
    }
}
