//! Integer polynomials over `Z_p`: evaluation, Taylor shifts, and root
//! isolation by residue-class refinement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{int_valuation, ExactRational};

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators and removes the integer content, so the result
    /// has coprime integer coefficients and the same roots.
    pub fn from_rationals(coeffs: &[ExactRational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        Self::new(ints).primitive()
    }

    pub fn primitive(&self) -> Self {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| {
                &(&acc * x) + &ExactRational::from_integer(c.clone())
            })
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients of `f(x + r)`, lowest degree first.
    pub fn taylor_shift(&self, r: &BigInt) -> Vec<BigInt> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * r;
                c[j] += t;
            }
        }
        c
    }

    /// Divides by `(x - r)` assuming `r` is a root; returns the quotient.
    pub fn deflate(&self, r: &BigInt) -> Self {
        let n = self.coeffs.len();
        let mut q = vec![BigInt::zero(); n.saturating_sub(1)];
        let mut carry = BigInt::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * r;
            q[i - 1] = carry.clone();
        }
        IntPoly::new(q)
    }
}

/// `v_p(n)`, with `None` standing for `+infinity` at zero.
pub(crate) fn val(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        Some(int_valuation(&n.abs(), p))
    }
}

/// A residue class `center + p^depth Z_p` known to hold exactly one root.
///
/// `deriv_val` is `v_p(f'(center))`; `v_p(f(center)) > 2 deriv_val` and
/// `depth > deriv_val`, so Hensel's lemma applies at `center` with
/// `i = deriv_val`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub center: BigInt,
    pub depth: u32,
    pub deriv_val: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Isolation {
    pub roots: Vec<IsolatedRoot>,
    /// Classes still undecided at the depth cap (repeated or very close roots).
    pub unresolved: usize,
}

/// Finds every root of `f` in `start + p^depth Z_p` by refining residue
/// classes digit by digit.
///
/// A class is discarded once the Taylor expansion at its center shows that
/// `v_p(f)` is constant on it, and accepted once Hensel's condition holds
/// and isolates a unique root. Classes reaching `max_depth` are counted as
/// unresolved.
pub fn isolate_roots(f: &IntPoly, p: u64, start: &BigInt, depth: u32, max_depth: u32) -> Isolation {
    let mut out = Isolation::default();
    if f.coeffs.iter().all(Zero::is_zero) {
        out.unresolved = 1;
        return out;
    }
    let pb = BigInt::from(p);
    let mut stack = vec![(start.clone(), depth)];
    while let Some((r, j)) = stack.pop() {
        let t = f.taylor_shift(&r);
        let f_r = val(&t[0], p);
        let d = t.get(1).and_then(|c| val(c, p));
        let spread = t
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(i, c)| val(c, p).map(|v| v + i as u64 * j as u64))
            .min();
        if let (Some(fr), Some(lb)) = (f_r, spread) {
            if fr < lb {
                continue;
            }
        }
        if let Some(d) = d {
            let hensel = match f_r {
                None => true,
                Some(fr) => fr > 2 * d,
            };
            if hensel && j as u64 > d {
                let inside = match f_r {
                    None => true,
                    Some(fr) => fr - d >= j as u64,
                };
                if inside {
                    out.roots.push(IsolatedRoot {
                        center: r,
                        depth: j,
                        deriv_val: d as u32,
                    });
                }
                continue;
            }
        }
        if j >= max_depth {
            out.unresolved += 1;
            continue;
        }
        let step = pb.pow(j);
        for digit in (0..p).rev() {
            stack.push((&r + &step * BigInt::from(digit), j + 1));
        }
    }
    out.roots.sort_by(|a, b| a.center.cmp(&b.center));
    out
}
