use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{union_vars, LaurentPoly};
use crate::error::{invalid, Error, Result};

/// A ratio of two Laurent polynomials with positive coefficients.
///
/// The presentation is kept as given apart from removing a common monomial
/// factor and a common integer factor, so the subtraction-free shape of the
/// numerator and denominator survives for tropicalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosRational {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl PosRational {
    /// Build from numerator and denominator. The numerator may be zero; every
    /// stored coefficient must be positive.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !num.is_positive() || !den.is_positive() {
            return invalid(format!(
                "not subtraction-free: ({num}) / ({den}) has a negative coefficient"
            ));
        }
        let (num, den) = num.align(&den);
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Result<Self> {
        let one = LaurentPoly::one(p.vars());
        Self::new(p, one)
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        PosRational { num: LaurentPoly::var(vars, i), den: LaurentPoly::one(vars) }
    }

    pub fn one(vars: &[String]) -> Self {
        PosRational { num: LaurentPoly::one(vars), den: LaurentPoly::one(vars) }
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let (num, den) = reduce_content(num, den);
        PosRational { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        Ok(PosRational { num: self.num.with_vars(vars)?, den: self.den.with_vars(vars)? })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::normalized(num, &self.den * &other.den)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Ok(Self::normalized(base.num.pow(k), base.den.pow(k)))
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// The Laurent polynomial this ratio equals, if there is one.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        is_laurent(&self.num, &self.den)
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Divide out the shared monomial factor and the shared integer content.
/// The denominator ends up with minimum exponent zero in every variable.
pub(crate) fn reduce_content(num: LaurentPoly, den: LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let Some(dm) = den.min_exponents() else {
        return (num, den);
    };
    let shift: Vec<i32> = dm.iter().map(|x| -x).collect();
    let (mut num, mut den) = if shift.iter().any(|&x| x != 0) {
        (num.mul_monomial(&shift), den.mul_monomial(&shift))
    } else {
        (num, den)
    };
    if num.is_zero() {
        return (num, LaurentPoly::one(den.vars()));
    }
    let g = num.coeff_content().gcd(&den.coeff_content());
    if !g.is_one() && !g.is_zero() {
        num = num.div_coeff(&g).expect("gcd divides");
        den = den.div_coeff(&g).expect("gcd divides");
    }
    (num, den)
}

/// Single-chart Laurent test: `num / den` as a Laurent polynomial when the
/// division is exact in the Laurent ring. Signs are unrestricted.
pub fn is_laurent(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    num.div_exact(den)
}

/// Substitute rational images for the variables of `f`. The images may have
/// any signs; the result is returned as a numerator and denominator over the
/// union of the images' variables, reduced by monomial and integer content.
pub fn substitute_general(
    f: &LaurentPoly,
    subs: &BTreeMap<String, (LaurentPoly, LaurentPoly)>,
) -> Result<(LaurentPoly, LaurentPoly)> {
    let mut target: Vec<String> = Vec::new();
    for (n, d) in subs.values() {
        target = union_vars(&target, n.vars());
        target = union_vars(&target, d.vars());
    }
    let lo = f.min_exponents().unwrap_or_else(|| vec![0; f.nvars()]);
    let hi = f.max_exponents().unwrap_or_else(|| vec![0; f.nvars()]);
    let mut images = Vec::with_capacity(f.nvars());
    for (i, v) in f.vars().iter().enumerate() {
        let used = lo[i] != 0 || hi[i] != 0;
        match subs.get(v) {
            Some((n, d)) => {
                let n = n.with_vars(&target)?;
                let d = d.with_vars(&target)?;
                if used && d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                if lo[i] < 0 && n.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                images.push((n, d));
            }
            None if !used => {
                images.push((LaurentPoly::one(&target), LaurentPoly::one(&target)));
            }
            None => return invalid(format!("variable {v} has no image")),
        }
    }
    // Clear denominators: X_i^a -> P_i^(a + l_i) Q_i^(h_i - a) with
    // l_i = max(-lo_i, 0) and h_i = max(hi_i, 0), over the common factor
    // prod P_i^l_i Q_i^h_i.
    let lift: Vec<u32> = lo.iter().map(|&x| (-x).max(0) as u32).collect();
    let top: Vec<u32> = hi.iter().map(|&x| x.max(0) as u32).collect();
    let mut p_pows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut q_pows: Vec<Vec<LaurentPoly>> = Vec::new();
    for (i, (p, q)) in images.iter().enumerate() {
        let p_top = (hi[i] + lift[i] as i32).max(lift[i] as i32) as u32;
        let q_top = (top[i] as i32 - lo[i]).max(top[i] as i32) as u32;
        p_pows.push(power_table(p, p_top, &target));
        q_pows.push(power_table(q, q_top, &target));
    }
    let mut num = LaurentPoly::zero(&target);
    for (e, c) in f.terms() {
        let mut t = LaurentPoly::constant(&target, c.clone());
        for i in 0..e.len() {
            let pe = (e[i] + lift[i] as i32) as usize;
            let qe = (top[i] as i32 - e[i]) as usize;
            if pe > 0 {
                t = &t * &p_pows[i][pe];
            }
            if qe > 0 {
                t = &t * &q_pows[i][qe];
            }
        }
        num = &num + &t;
    }
    let mut den = LaurentPoly::one(&target);
    for i in 0..images.len() {
        if lift[i] > 0 {
            den = &den * &p_pows[i][lift[i] as usize];
        }
        if top[i] > 0 {
            den = &den * &q_pows[i][top[i] as usize];
        }
    }
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    // Keep the denominator's lex-leading coefficient positive.
    if den.terms().next_back().is_some_and(|(_, c)| c < &BigInt::zero()) {
        num = -&num;
        den = -&den;
    }
    Ok(reduce_content(num, den))
}

fn power_table(p: &LaurentPoly, k: u32, vars: &[String]) -> Vec<LaurentPoly> {
    let mut out = Vec::with_capacity(k as usize + 1);
    out.push(LaurentPoly::one(vars));
    for j in 1..=k as usize {
        let next = &out[j - 1] * p;
        out.push(next);
    }
    out
}

/// Compose a Laurent polynomial with subtraction-free images. `f` itself must
/// have positive coefficients for the result to stay subtraction-free.
pub fn lp_substitute(f: &LaurentPoly, subs: &BTreeMap<String, PosRational>) -> Result<PosRational> {
    if !f.is_positive() {
        return invalid(format!("{f} has a negative coefficient"));
    }
    let pairs = subs
        .iter()
        .map(|(k, v)| (k.clone(), (v.num.clone(), v.den.clone())))
        .collect();
    let (num, den) = substitute_general(f, &pairs)?;
    Ok(PosRational { num, den })
}

/// Compose a rational function with subtraction-free images.
pub fn rational_substitute(
    f: &PosRational,
    subs: &BTreeMap<String, PosRational>,
) -> Result<PosRational> {
    let n = lp_substitute(&f.num, subs)?;
    let d = lp_substitute(&f.den, subs)?;
    n.div(&d)
}
