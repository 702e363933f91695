//! Ratios of [`LocalPolynomial`]s. No multivariate gcd is attempted; instead
//! the denominator (and the numerator's product part) is kept as a multiset of
//! factors, and structurally equal factors cancel. The local-factor algebra
//! reuses the same handful of building blocks everywhere, so this cheap
//! cancellation keeps intermediate expressions small where a fully expanded
//! representation explodes. Equality is decided by cross-multiplication after
//! cancelling common factors, which stays exact.

use crate::poly::{LocalPolynomial, Var};
use crate::rational::Rational;
use num::Zero;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone)]
pub struct LocalRationalFunction {
    /// Expanded "sum" part of the numerator.
    num_poly: LocalPolynomial,
    /// Product part of the numerator, kept factored.
    num_factors: Vec<LocalPolynomial>,
    /// Denominator, kept factored; factors are nonzero.
    den_factors: Vec<LocalPolynomial>,
}

fn product(factors: &[LocalPolynomial]) -> LocalPolynomial {
    let mut acc = LocalPolynomial::one();
    // smallest factors first keeps the intermediate products lean
    let mut sorted: Vec<&LocalPolynomial> = factors.iter().collect();
    sorted.sort_by_key(|f| f.num_terms());
    for f in sorted {
        acc = &acc * f;
    }
    acc
}

/// Removes structurally equal factor pairs from the two multisets.
fn cancel(a: &mut Vec<LocalPolynomial>, b: &mut Vec<LocalPolynomial>) {
    let mut i = 0;
    while i < a.len() {
        if let Some(j) = b.iter().position(|f| f == &a[i]) {
            a.swap_remove(i);
            b.swap_remove(j);
        } else {
            i += 1;
        }
    }
}

impl LocalRationalFunction {
    pub fn new(num: LocalPolynomial, den: LocalPolynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let den_factors = if den.is_one() { vec![] } else { vec![den] };
        Self {
            num_poly: num,
            num_factors: vec![],
            den_factors,
        }
        .normalized()
    }

    pub fn from_poly(p: LocalPolynomial) -> Self {
        Self::new(p, LocalPolynomial::one())
    }

    pub fn one() -> Self {
        Self::from_poly(LocalPolynomial::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(LocalPolynomial::zero())
    }

    fn normalized(mut self) -> Self {
        if self.num_poly.is_zero() || self.num_factors.iter().any(|f| f.is_zero()) {
            self.num_poly = LocalPolynomial::zero();
            self.num_factors.clear();
            self.den_factors.clear();
            return self;
        }
        self.num_factors.retain(|f| !f.is_one());
        self.den_factors.retain(|f| !f.is_one());
        cancel(&mut self.num_factors, &mut self.den_factors);
        self
    }

    /// Fully expanded numerator.
    pub fn num(&self) -> LocalPolynomial {
        if self.num_factors.is_empty() {
            return self.num_poly.clone();
        }
        &self.num_poly * &product(&self.num_factors)
    }

    /// Fully expanded denominator.
    pub fn den(&self) -> LocalPolynomial {
        product(&self.den_factors)
    }

    pub fn is_zero(&self) -> bool {
        self.num_poly.is_zero()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverting zero");
        let mut den_factors = self.num_factors.clone();
        if !self.num_poly.is_one() {
            den_factors.push(self.num_poly.clone());
        }
        Self {
            num_poly: LocalPolynomial::one(),
            num_factors: self.den_factors.clone(),
            den_factors,
        }
        .normalized()
    }

    /// num·den′ − num′·den after cancelling shared factors across the cross
    /// products; zero exactly when the two functions are equal.
    pub fn cross_difference(&self, other: &Self) -> LocalPolynomial {
        // left side: self.num * other.den ; right side: other.num * self.den
        let mut left: Vec<LocalPolynomial> = self.num_factors.clone();
        left.extend(other.den_factors.iter().cloned());
        let mut right: Vec<LocalPolynomial> = other.num_factors.clone();
        right.extend(self.den_factors.iter().cloned());
        cancel(&mut left, &mut right);
        left.push(self.num_poly.clone());
        right.push(other.num_poly.clone());
        product(&left) - product(&right)
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.cross_difference(other).is_zero()
    }

    pub fn eval(&self, point: &[Rational; 4]) -> Option<Rational> {
        let mut den = Rational::from_integer(1.into());
        for f in &self.den_factors {
            den *= f.eval(point);
        }
        if den.is_zero() {
            return None;
        }
        let mut num = self.num_poly.eval(point);
        for f in &self.num_factors {
            num *= f.eval(point);
        }
        Some(num / den)
    }

    /// Value at Q = 0 when no denominator factor vanishes there.
    pub fn at_q_zero(&self) -> Option<Self> {
        let den_factors: Vec<LocalPolynomial> = self
            .den_factors
            .iter()
            .map(|f| f.set_var_zero(Var::Q))
            .collect();
        if den_factors.iter().any(|f| f.is_zero()) {
            return None;
        }
        Some(
            Self {
                num_poly: self.num_poly.set_var_zero(Var::Q),
                num_factors: self
                    .num_factors
                    .iter()
                    .map(|f| f.set_var_zero(Var::Q))
                    .collect(),
                den_factors,
            }
            .normalized(),
        )
    }

    pub fn subst_v_to_u(&self) -> Self {
        Self {
            num_poly: self.num_poly.subst_v_to_u(),
            num_factors: self.num_factors.iter().map(|f| f.subst_v_to_u()).collect(),
            den_factors: self.den_factors.iter().map(|f| f.subst_v_to_u()).collect(),
        }
        .normalized()
    }

    pub fn max_degree(&self, v: Var) -> u16 {
        let num: u16 =
            self.num_poly.degree(v) + self.num_factors.iter().map(|f| f.degree(v)).sum::<u16>();
        let den: u16 = self.den_factors.iter().map(|f| f.degree(v)).sum();
        num.max(den)
    }

    pub fn num_total_degree(&self) -> u32 {
        self.num_poly.total_degree()
            + self
                .num_factors
                .iter()
                .map(|f| f.total_degree())
                .sum::<u32>()
    }

    pub fn den_total_degree(&self) -> u32 {
        self.den_factors.iter().map(|f| f.total_degree()).sum()
    }
}

impl PartialEq for LocalRationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

impl fmt::Display for LocalRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &LocalPolynomial| -> String {
            if p.num_terms() <= 24 {
                format!("({p})")
            } else {
                format!("[{}-term polynomial]", p.num_terms())
            }
        };
        let mut num_parts: Vec<String> = Vec::new();
        if !self.num_poly.is_one() || self.num_factors.is_empty() {
            num_parts.push(show(&self.num_poly));
        }
        num_parts.extend(self.num_factors.iter().map(&show));
        write!(f, "{}", num_parts.join("*"))?;
        if !self.den_factors.is_empty() {
            let den: Vec<String> = self.den_factors.iter().map(&show).collect();
            write!(f, " / {}", den.join("*"))?;
        }
        Ok(())
    }
}

impl Mul for &LocalRationalFunction {
    type Output = LocalRationalFunction;
    fn mul(self, rhs: &LocalRationalFunction) -> LocalRationalFunction {
        let mut num_factors = self.num_factors.clone();
        num_factors.extend(rhs.num_factors.iter().cloned());
        if !self.num_poly.is_one() {
            num_factors.push(self.num_poly.clone());
        }
        if !rhs.num_poly.is_one() {
            num_factors.push(rhs.num_poly.clone());
        }
        let mut den_factors = self.den_factors.clone();
        den_factors.extend(rhs.den_factors.iter().cloned());
        LocalRationalFunction {
            num_poly: LocalPolynomial::one(),
            num_factors,
            den_factors,
        }
        .normalized()
    }
}

impl Div for &LocalRationalFunction {
    type Output = LocalRationalFunction;
    // division is multiplication by the reciprocal here
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &LocalRationalFunction) -> LocalRationalFunction {
        self * &rhs.inv()
    }
}

impl Add for &LocalRationalFunction {
    type Output = LocalRationalFunction;
    fn add(self, rhs: &LocalRationalFunction) -> LocalRationalFunction {
        // least common denominator as a factor multiset
        let mut lcd = self.den_factors.clone();
        let mut rhs_extra = rhs.den_factors.clone();
        {
            let mut pool = lcd.clone();
            let mut i = 0;
            while i < rhs_extra.len() {
                if let Some(j) = pool.iter().position(|f| f == &rhs_extra[i]) {
                    pool.swap_remove(j);
                    i += 1;
                } else {
                    lcd.push(rhs_extra.swap_remove(i));
                }
            }
        }
        let cof = |own: &[LocalPolynomial]| -> Vec<LocalPolynomial> {
            let mut rem = lcd.clone();
            for f in own {
                if let Some(j) = rem.iter().position(|g| g == f) {
                    rem.swap_remove(j);
                }
            }
            rem
        };
        let mut left = self.num_factors.clone();
        left.extend(cof(&self.den_factors));
        left.push(self.num_poly.clone());
        let mut right = rhs.num_factors.clone();
        right.extend(cof(&rhs.den_factors));
        right.push(rhs.num_poly.clone());
        LocalRationalFunction {
            num_poly: product(&left) + product(&right),
            num_factors: vec![],
            den_factors: lcd,
        }
        .normalized()
    }
}

impl Sub for &LocalRationalFunction {
    type Output = LocalRationalFunction;
    fn sub(self, rhs: &LocalRationalFunction) -> LocalRationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &LocalRationalFunction {
    type Output = LocalRationalFunction;
    fn neg(self) -> LocalRationalFunction {
        LocalRationalFunction {
            num_poly: -&self.num_poly,
            num_factors: self.num_factors.clone(),
            den_factors: self.den_factors.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<LocalRationalFunction> for LocalRationalFunction {
            type Output = LocalRationalFunction;
            fn $method(self, rhs: LocalRationalFunction) -> LocalRationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LocalRationalFunction> for LocalRationalFunction {
            type Output = LocalRationalFunction;
            fn $method(self, rhs: &LocalRationalFunction) -> LocalRationalFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<LocalRationalFunction> for &LocalRationalFunction {
            type Output = LocalRationalFunction;
            fn $method(self, rhs: LocalRationalFunction) -> LocalRationalFunction {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for LocalRationalFunction {
    type Output = LocalRationalFunction;
    fn neg(self) -> LocalRationalFunction {
        -&self
    }
}
