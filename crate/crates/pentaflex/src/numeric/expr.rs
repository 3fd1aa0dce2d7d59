//! Expression DAGs behind certified scalars.
//!
//! A certified value remembers how it was computed, so its enclosure can
//! be re-evaluated at any working precision. Nodes also carry an exact
//! rational value whenever one is symbolically available (rational
//! subtrees, square roots of perfect squares); this is the only route to
//! a provable zero.

use super::dyadic::Dyadic;
use super::interval::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Debug)]
pub enum Op {
    Const(BigRational),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Sqrt(Expr),
    Min(Expr, Expr),
    Max(Expr, Expr),
}

#[derive(Debug)]
pub struct Node {
    pub op: Op,
    /// Exact rational value of this subtree, when symbolically known.
    pub exact: Option<BigRational>,
    /// Best enclosure computed so far, with the precision it was computed
    /// at. A tighter enclosure stays valid at any lower precision, so
    /// shared subtrees are never re-evaluated below their cached level.
    cache: Mutex<Option<(u32, Interval)>>,
}

#[derive(Debug, Clone)]
pub struct Expr(Arc<Node>);

/// Evaluation can fail transiently when a divisor's enclosure straddles
/// zero at the current precision; the caller refines and retries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    DivisorStraddlesZero,
    NegativeRadicand,
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Expr {
    fn node(op: Op, exact: Option<BigRational>) -> Expr {
        Expr(Arc::new(Node { op, exact, cache: Mutex::new(None) }))
    }

    pub fn constant(r: BigRational) -> Expr {
        let e = r.clone();
        Expr::node(Op::Const(r), Some(e))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.0.exact.as_ref()
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Expr::node(Op::Add(self.clone(), other.clone()), exact)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        Expr::node(Op::Sub(self.clone(), other.clone()), exact)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Expr::node(Op::Mul(self.clone(), other.clone()), exact)
    }

    /// Caller must have certified the divisor nonzero.
    pub fn div(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) if !b.is_zero() => Some(a / b),
            _ => None,
        };
        Expr::node(Op::Div(self.clone(), other.clone()), exact)
    }

    pub fn neg(&self) -> Expr {
        let exact = self.exact().map(|a| -a);
        Expr::node(Op::Neg(self.clone()), exact)
    }

    /// Caller must have certified the radicand nonnegative.
    pub fn sqrt(&self) -> Expr {
        let exact = self.exact().and_then(exact_sqrt);
        Expr::node(Op::Sqrt(self.clone()), exact)
    }

    pub fn min(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            _ => None,
        };
        Expr::node(Op::Min(self.clone(), other.clone()), exact)
    }

    pub fn max(&self, other: &Expr) -> Expr {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            _ => None,
        };
        Expr::node(Op::Max(self.clone(), other.clone()), exact)
    }

    /// Evaluate the DAG at the given working precision. Shared nodes are
    /// evaluated once, so evaluation is deterministic and linear in the
    /// number of distinct nodes.
    pub fn eval(&self, precision: u32) -> Result<Interval, EvalError> {
        let mut memo: HashMap<*const Node, Interval> = HashMap::new();
        self.eval_memo(precision, &mut memo)
    }

    fn eval_memo(
        &self,
        p: u32,
        memo: &mut HashMap<*const Node, Interval>,
    ) -> Result<Interval, EvalError> {
        let key = Arc::as_ptr(&self.0);
        if let Some(iv) = memo.get(&key) {
            return Ok(iv.clone());
        }
        if let Some((cached_p, iv)) = self.0.cache.lock().unwrap().as_ref() {
            if *cached_p >= p {
                memo.insert(key, iv.clone());
                return Ok(iv.clone());
            }
        }
        let iv = match &self.0.op {
            Op::Const(r) => Interval::from_rational(r, p),
            Op::Add(a, b) => a.eval_memo(p, memo)?.add(&b.eval_memo(p, memo)?, p),
            Op::Sub(a, b) => a.eval_memo(p, memo)?.sub(&b.eval_memo(p, memo)?, p),
            Op::Mul(a, b) => a.eval_memo(p, memo)?.mul(&b.eval_memo(p, memo)?, p),
            Op::Div(a, b) => a
                .eval_memo(p, memo)?
                .div(&b.eval_memo(p, memo)?, p)
                .ok_or(EvalError::DivisorStraddlesZero)?,
            Op::Neg(a) => a.eval_memo(p, memo)?.neg(),
            Op::Sqrt(a) => a.eval_memo(p, memo)?.sqrt(p).ok_or(EvalError::NegativeRadicand)?,
            Op::Min(a, b) => a.eval_memo(p, memo)?.min(&b.eval_memo(p, memo)?),
            Op::Max(a, b) => a.eval_memo(p, memo)?.max(&b.eval_memo(p, memo)?),
        };
        memo.insert(key, iv.clone());
        {
            let mut cache = self.0.cache.lock().unwrap();
            let stale = cache.as_ref().map(|(cp, _)| *cp < p).unwrap_or(true);
            if stale {
                *cache = Some((p, iv.clone()));
            }
        }
        Ok(iv)
    }
}

pub fn rational_from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[allow(dead_code)]
pub fn dyadic_bound(log2: i64) -> Dyadic {
    Dyadic::pow2(log2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_propagation_and_cancellation() {
        let four = Expr::constant(rat(4, 1));
        let two = four.sqrt();
        assert_eq!(two.exact(), Some(&rat(2, 1)));
        let diff = two.sub(&Expr::constant(rat(2, 1)));
        assert_eq!(diff.exact(), Some(&rat(0, 1)));
    }

    #[test]
    fn non_square_sqrt_has_no_exact() {
        let two = Expr::constant(rat(2, 1)).sqrt();
        assert!(two.exact().is_none());
        let iv = two.eval(64).unwrap();
        assert!(iv.lo.as_rational().pow(2) <= rat(2, 1));
        assert!(iv.hi.as_rational().pow(2) >= rat(2, 1));
    }

    #[test]
    fn deterministic_eval() {
        let e = Expr::constant(rat(1, 3)).sqrt().mul(&Expr::constant(rat(7, 5)).sqrt());
        assert_eq!(e.eval(100).unwrap(), e.eval(100).unwrap());
    }
}
