use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::{ln_bigint, LaurentPoly};
use super::rational::PosRational;

/// Piecewise-linear expression tree in a fixed list of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TropNode {
    Const(BigRational),
    /// Integer linear form, one coefficient per variable.
    Linear(Vec<i64>),
    Sum(Vec<TropNode>),
    Scale(i64, Box<TropNode>),
    Max(Vec<TropNode>),
    Min(Vec<TropNode>),
}

/// A piecewise-linear function on rational points, such as the
/// tropicalization of a subtraction-free rational function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropExpr {
    vars: Vec<String>,
    node: TropNode,
}

impl TropExpr {
    pub fn new(vars: Vec<String>, node: TropNode) -> Self {
        TropExpr { vars, node }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn node(&self) -> &TropNode {
        &self.node
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.vars.len(), "point has wrong dimension");
        eval_node(&self.node, x)
    }

    pub fn eval_int(&self, x: &[i64]) -> BigRational {
        let x: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        self.eval(&x)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        eval_node_f64(&self.node, x)
    }

    /// Pointwise `self + other` (tropical product).
    pub fn plus(&self, other: &Self) -> Self {
        TropExpr::new(self.vars.clone(), TropNode::Sum(vec![self.node.clone(), other.node.clone()]))
    }

    /// Pointwise `max(self, other)` (tropical sum).
    pub fn max(&self, other: &Self) -> Self {
        TropExpr::new(self.vars.clone(), TropNode::Max(vec![self.node.clone(), other.node.clone()]))
    }
}

fn eval_node(n: &TropNode, x: &[BigRational]) -> BigRational {
    match n {
        TropNode::Const(c) => c.clone(),
        TropNode::Linear(a) => a
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .map(|(c, v)| v * BigRational::from_integer(BigInt::from(*c)))
            .sum(),
        TropNode::Sum(v) => v.iter().map(|t| eval_node(t, x)).sum(),
        TropNode::Scale(k, t) => eval_node(t, x) * BigRational::from_integer(BigInt::from(*k)),
        TropNode::Max(v) => v.iter().map(|t| eval_node(t, x)).max().expect("max of nothing"),
        TropNode::Min(v) => v.iter().map(|t| eval_node(t, x)).min().expect("min of nothing"),
    }
}

fn eval_node_f64(n: &TropNode, x: &[f64]) -> f64 {
    match n {
        TropNode::Const(c) => c.to_f64().unwrap_or(f64::NAN),
        TropNode::Linear(a) => a.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum(),
        TropNode::Sum(v) => v.iter().map(|t| eval_node_f64(t, x)).sum(),
        TropNode::Scale(k, t) => *k as f64 * eval_node_f64(t, x),
        TropNode::Max(v) => v.iter().map(|t| eval_node_f64(t, x)).fold(f64::NEG_INFINITY, f64::max),
        TropNode::Min(v) => v.iter().map(|t| eval_node_f64(t, x)).fold(f64::INFINITY, f64::min),
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, a: &[i64], vars: &[String]) -> fmt::Result {
    let mut first = true;
    for (c, v) in a.iter().zip(vars) {
        if *c == 0 {
            continue;
        }
        let name = v.to_lowercase();
        let mag = c.unsigned_abs();
        let coef = if mag == 1 { String::new() } else { mag.to_string() };
        match (first, *c < 0) {
            (true, false) => write!(f, "{coef}{name}")?,
            (true, true) => write!(f, "-{coef}{name}")?,
            (false, false) => write!(f, " + {coef}{name}")?,
            (false, true) => write!(f, " - {coef}{name}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn write_node(f: &mut fmt::Formatter<'_>, n: &TropNode, vars: &[String]) -> fmt::Result {
    match n {
        TropNode::Const(c) => write!(f, "{c}"),
        TropNode::Linear(a) => write_linear(f, a, vars),
        TropNode::Sum(v) => {
            for (i, t) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write_node(f, t, vars)?;
            }
            Ok(())
        }
        TropNode::Scale(k, t) => {
            if *k == -1 {
                write!(f, "-(")?;
            } else {
                write!(f, "{k}*(")?;
            }
            write_node(f, t, vars)?;
            write!(f, ")")
        }
        TropNode::Max(v) | TropNode::Min(v) => {
            write!(f, "{}(", if matches!(n, TropNode::Max(_)) { "max" } else { "min" })?;
            for (i, t) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_node(f, t, vars)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for TropExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.node, &self.vars)
    }
}

/// Tropical form of a positive polynomial: its monomial content as a linear
/// part plus the max over the remaining exponents, so `X2(1+X1)` becomes
/// `x2 + max(0, x1)`.
fn tropicalize_poly(p: &LaurentPoly) -> TropNode {
    let Some(m) = p.min_exponents() else {
        // The zero function tropicalizes to minus infinity; callers never
        // evaluate it, and a zero numerator is represented by an empty max.
        return TropNode::Max(Vec::new());
    };
    let content = TropNode::Linear(m.iter().map(|&x| x as i64).collect());
    if p.num_terms() == 1 {
        return content;
    }
    let rest: Vec<TropNode> = p
        .terms()
        .map(|(e, _)| TropNode::Linear(e.iter().zip(&m).map(|(a, b)| (a - b) as i64).collect()))
        .collect();
    let max = TropNode::Max(rest);
    if m.iter().all(|&x| x == 0) {
        max
    } else {
        TropNode::Sum(vec![content, max])
    }
}

/// Replace `+` by max, `*` by `+` and division by subtraction; positive
/// integer coefficients contribute nothing in the limit.
pub fn tropicalize(f: &PosRational) -> TropExpr {
    let vars = f.vars().to_vec();
    let num = tropicalize_poly(f.numerator());
    if f.denominator().is_one() {
        return TropExpr::new(vars, num);
    }
    let den = tropicalize_poly(f.denominator());
    let node = match den {
        TropNode::Linear(a) if a.iter().all(|&x| x == 0) => num,
        TropNode::Linear(a) => {
            TropNode::Sum(vec![num, TropNode::Linear(a.iter().map(|x| -x).collect())])
        }
        other => TropNode::Sum(vec![num, TropNode::Scale(-1, Box::new(other))]),
    };
    TropExpr::new(vars, node)
}

pub fn tropicalize_poly_expr(p: &LaurentPoly) -> TropExpr {
    TropExpr::new(p.vars().to_vec(), tropicalize_poly(p))
}

/// `log f(e^{C x_1}, ..., e^{C x_n}) / C` for each scaling constant, computed
/// by log-sum-exp so large `C` cannot overflow.
pub fn numeric_limit_check(f: &PosRational, x: &[BigRational], cs: &[f64]) -> Vec<f64> {
    let xf: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    cs.iter()
        .map(|&c| {
            let n = f.numerator().log_eval_scaled(&xf, c).unwrap_or(f64::NEG_INFINITY);
            let d = f.denominator().log_eval_scaled(&xf, c).unwrap_or(f64::NEG_INFINITY);
            (n - d) / c
        })
        .collect()
}

/// Upper bound on `|numeric_limit_check - tropicalize|` at scale `c`.
///
/// For a polynomial with positive coefficients, `log P(e^{Cx})/C` exceeds its
/// tropical value by at most `ln(sum of coefficients)/C` and never falls
/// below it by more than `ln(min coefficient)/C <= 0`.
pub fn limit_error_bound(f: &PosRational, c: f64) -> f64 {
    let s = |p: &LaurentPoly| {
        let sum = p.coeff_sum();
        if sum.is_zero() {
            0.0
        } else {
            ln_bigint(&sum)
        }
    };
    (s(f.numerator()) + s(f.denominator())) / c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::poly::standard_vars;

    fn x(i: usize) -> LaurentPoly {
        LaurentPoly::var(&standard_vars(2), i)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one(&standard_vars(2))
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn exchange_tropicalizes_to_shifted_max() {
        let f = PosRational::from_poly(&x(1) * &(&one() + &x(0))).unwrap();
        let t = tropicalize(&f);
        assert_eq!(t.to_string(), "x2 + max(0, x1)");
        assert_eq!(t.eval_int(&[2, 0]), q(2));
        assert_eq!(t.eval_int(&[-3, 1]), q(1));
    }

    #[test]
    fn monomial_is_linear() {
        let p = LaurentPoly::monomial(&standard_vars(2), vec![3, -1], 1);
        let t = tropicalize(&PosRational::from_poly(p).unwrap());
        assert_eq!(t.to_string(), "3x1 - x2");
        assert_eq!(t.eval_int(&[2, 5]), q(1));
    }

    #[test]
    fn ratio_matches_direct_rule() {
        let f = PosRational::new(&x(0) + &x(1), &one() + &(&x(0) * &x(1))).unwrap();
        let t = tropicalize(&f);
        for a in -4..=4 {
            for b in -4..=4 {
                let expected = a.max(b) - 0.max(a + b);
                assert_eq!(t.eval_int(&[a, b]), q(expected));
            }
        }
    }

    #[test]
    fn log_sum_exp_limit() {
        let f = PosRational::from_poly(&x(0) + &x(1)).unwrap();
        let v = numeric_limit_check(&f, &[q(3), q(5)], &[40.0]);
        let oracle = ((120f64 - 200.0).exp() + 1.0).ln() / 40.0 + 5.0;
        assert!((v[0] - oracle).abs() < 1e-12);
        assert!((v[0] - 5.0).abs() < 0.1);

        let sq = PosRational::from_poly(&x(0) * &x(0)).unwrap();
        let v = numeric_limit_check(&sq, &[q(7), q(1)], &[3.0, 40.0, 1000.0]);
        assert!(v.iter().all(|&r| r == 14.0));

        let vars1 = standard_vars(1);
        let g = PosRational::from_poly(&LaurentPoly::one(&vars1) + &LaurentPoly::var(&vars1, 0))
            .unwrap();
        let v = numeric_limit_check(&g, &[q(0)], &[40.0, 400.0]);
        assert!((v[0] - 2f64.ln() / 40.0).abs() < 1e-12);
        assert!(v[1] < v[0]);
    }
}
