use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Dense exponent vector, one entry per variable.
pub type Exponent = Vec<i32>;

/// A multivariate Laurent polynomial with arbitrary-precision integer
/// coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent tuple, so iteration order is
/// lexicographic in the exponents and two polynomials over the same variable
/// list are equal exactly when their term maps are. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: &[String]) -> Self {
        LaurentPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: &[String], c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    /// `c * X^exp`. Panics if `exp` has the wrong length.
    pub fn monomial(vars: &[String], exp: Exponent, c: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length must match variable count");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { vars: vars.to_vec(), terms }
    }

    /// The variable `vars[i]` as a polynomial.
    pub fn var(vars: &[String], i: usize) -> Self {
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        Self::monomial(vars, exp, 1)
    }

    pub fn from_terms<I>(vars: &[String], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return invalid(format!(
                    "exponent {:?} has length {}, expected {}",
                    e,
                    e.len(),
                    vars.len()
                ));
            }
            accumulate(&mut map, e, c);
        }
        Ok(LaurentPoly { vars: vars.to_vec(), terms: map })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn coeff(&self, exp: &[i32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `Some((exp, coef))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Exponent, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// All coefficients strictly positive (vacuously true for zero).
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Sum of all coefficients: the value at the all-ones point.
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// gcd of the coefficients, zero for the zero polynomial.
    pub fn coeff_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Componentwise minimum exponent, i.e. the monomial content.
    pub fn min_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn max_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.max(b)).collect()))
    }

    /// Re-express over `vars`, which must contain every variable of `self`
    /// that occurs with a nonzero exponent.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut index = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = vars.iter().position(|w| w == v);
            if pos.is_none() && self.terms.keys().any(|e| e[i] != 0) {
                return invalid(format!("variable {v} is not in the target variable list"));
            }
            index.push(pos);
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = index[i] {
                    ne[j] += x;
                }
            }
            (ne, c.clone())
        });
        Self::from_terms(vars, terms)
    }

    /// Bring two polynomials onto a common variable list: the variables of
    /// `self` in order, followed by those only in `other`.
    pub fn align(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = union_vars(&self.vars, &other.vars);
        (
            self.with_vars(&vars).expect("union contains all variables"),
            other.with_vars(&vars).expect("union contains all variables"),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &[i32]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact division of every coefficient by `c`; `None` if some coefficient
    /// is not a multiple.
    pub fn div_coeff(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Inverse of a unit of the Laurent ring (`±X^a`).
    pub fn inverse_monomial(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        if !(c.is_one() || (-c).is_one()) {
            return None;
        }
        Some(Self::monomial(&self.vars, e.iter().map(|x| -x).collect(), c.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power, negative exponents allowed for units only.
    pub fn powi(&self, k: i64) -> Option<Self> {
        if k >= 0 {
            Some(self.pow(k as u32))
        } else {
            Some(self.inverse_monomial()?.pow((-k) as u32))
        }
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (n, d) = self.align(d);
        if d.is_zero() {
            return None;
        }
        if n.is_zero() {
            return Some(n);
        }
        let dm = d.min_exponents()?;
        let nm = n.min_exponents()?;
        let neg = |e: &[i32]| e.iter().map(|x| -x).collect::<Vec<_>>();
        let d0 = d.mul_monomial(&neg(&dm));
        let n0 = n.mul_monomial(&neg(&nm));
        let q0 = poly_div_exact(&n0, &d0)?;
        let shift: Vec<i32> = nm.iter().zip(&dm).map(|(a, b)| a - b).collect();
        Some(q0.mul_monomial(&shift))
    }

    /// Evaluate at a rational point; `None` when a zero coordinate meets a
    /// negative exponent.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        assert_eq!(point.len(), self.vars.len());
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                if k == 0 {
                    continue;
                }
                if x.is_zero() {
                    if k < 0 {
                        return None;
                    }
                    t = BigRational::zero();
                    break;
                }
                t *= pow_rational(x, k);
            }
            total += t;
        }
        Some(total)
    }

    /// `ln Σ c_a exp(C⟨a, x⟩)` for a polynomial with positive coefficients,
    /// accumulated in log space. `None` for the zero polynomial.
    pub fn log_eval_scaled(&self, x: &[f64], scale: f64) -> Option<f64> {
        debug_assert!(self.is_positive());
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let lin: f64 = e.iter().zip(x).map(|(&a, &xi)| a as f64 * xi).sum();
                ln_bigint(c) + scale * lin
            })
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !m.is_finite() {
            return None;
        }
        Some(m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln())
    }
}

fn pow_rational(x: &BigRational, k: i32) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

/// Natural log of a positive big integer without overflowing `f64`.
pub(crate) fn ln_bigint(c: &BigInt) -> f64 {
    if let Some(f) = c.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    let bits = c.bits();
    let shift = bits.saturating_sub(64);
    let top: BigInt = c >> shift;
    top.to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

fn accumulate(map: &mut BTreeMap<Exponent, BigInt>, e: Exponent, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Exact division in `Z[X]` for polynomials (nonnegative exponents) by
/// repeated removal of lex-leading terms.
fn poly_div_exact(n: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    let (ld_e, ld_c) = d.terms.iter().next_back()?;
    let mut rem = n.clone();
    let mut quot = LaurentPoly::zero(&n.vars);
    while let Some((le, lc)) = rem.terms.iter().next_back() {
        let qe: Exponent = le.iter().zip(ld_e).map(|(a, b)| a - b).collect();
        if qe.iter().any(|&x| x < 0) {
            return None;
        }
        let (qc, r) = lc.div_rem(ld_c);
        if !r.is_zero() {
            return None;
        }
        for (e, c) in &d.terms {
            let ne: Exponent = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
            accumulate(&mut rem.terms, ne, -(c * &qc));
        }
        accumulate(&mut quot.terms, qe, qc);
    }
    Some(quot)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            accumulate(&mut a.terms, e, c);
        }
        a
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            accumulate(&mut a.terms, e, -c);
        }
        a
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (a, b) = self.align(rhs);
        let mut out = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                accumulate(&mut out, e, ca * cb);
            }
        }
        LaurentPoly { vars: a.vars, terms: out }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Which ring operation `lp_arith` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn lp_arith(a: &LaurentPoly, b: &LaurentPoly, op: ArithOp) -> LaurentPoly {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in lexicographic exponent order joined by `" + "`, each written
    /// as a signed coefficient followed by `*Var^e` factors, e.g.
    /// `-1*X1^-1*X2^2 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &x) in self.vars.iter().zip(e) {
                match x {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{x}")?,
                }
            }
        }
        Ok(())
    }
}

/// Default variable names `X1..Xn`.
pub fn standard_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars2() -> Vec<String> {
        standard_vars(2)
    }

    fn lp(terms: &[(&[i32], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            &vars2(),
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn cancellation_to_two_x1() {
        let a = lp(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = lp(&[(&[1, 0], 1), (&[0, 1], -1)]);
        assert_eq!(lp_arith(&a, &b, ArithOp::Add), lp(&[(&[1, 0], 2)]));
    }

    #[test]
    fn monomial_times_inverse_is_one() {
        let x = LaurentPoly::var(&vars2(), 0);
        let xi = x.inverse_monomial().unwrap();
        assert!((&x * &xi).is_one());
    }

    #[test]
    fn product_against_hand_expansion() {
        // (1+X1)(1+X1^-1): the four cross terms are X1^0, X1^-1, X1^1, X1^0.
        let a = lp(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let b = lp(&[(&[0, 0], 1), (&[-1, 0], 1)]);
        let expected = lp(&[(&[-1, 0], 1), (&[0, 0], 2), (&[1, 0], 1)]);
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn display_matches_canonical_form() {
        let p = lp(&[(&[0, 0], 3), (&[-1, 2], -1)]);
        assert_eq!(p.to_string(), "-1*X1^-1*X2^2 + 3");
        assert_eq!(LaurentPoly::zero(&vars2()).to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let n = lp(&[(&[2, 0], 1), (&[0, 2], -1)]);
        let d = lp(&[(&[1, 0], 1), (&[0, 1], -1)]);
        assert_eq!(n.div_exact(&d).unwrap(), lp(&[(&[1, 0], 1), (&[0, 1], 1)]));
        let n = lp(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let d = lp(&[(&[0, 0], 1), (&[0, 1], 1)]);
        assert!(n.div_exact(&d).is_none());
        let d = lp(&[(&[1, 0], 1)]);
        assert_eq!(n.div_exact(&d).unwrap(), lp(&[(&[-1, 0], 1), (&[0, 0], 1)]));
    }

    #[test]
    fn auto_union_of_variables() {
        let x = LaurentPoly::var(&["A".to_string()], 0);
        let y = LaurentPoly::var(&["B".to_string()], 0);
        let s = &x + &y;
        assert_eq!(s.vars(), &["A".to_string(), "B".to_string()]);
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn eval_rejects_pole() {
        let p = lp(&[(&[-1, 0], 1)]);
        assert!(p.eval(&[BigRational::zero(), BigRational::one()]).is_none());
    }

    #[test]
    fn ln_of_huge_integer() {
        let c = BigInt::from(10).pow(400);
        let expected = 400.0 * 10f64.ln();
        assert!((ln_bigint(&c) - expected).abs() < 1e-9 * expected);
    }
}
