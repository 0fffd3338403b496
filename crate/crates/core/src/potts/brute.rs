//! Digit-by-digit search for solutions of the full `(q-1)`-variable system.
//!
//! Works with the denominator-cleared congruences
//! `z_i (θ + S)^k ≡ ((θ-1) z_i + S + 1)^k (mod p^D)`, `S = Σ_j z_j`, over
//! tuples with every `z_i ≡ 1` modulo `p` (modulo 4 when `p = 2`).

use serde::Serialize;

use super::PottsParameters;
use crate::error::{Error, Result};

/// Sorted solution tuples modulo `p^digits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceResult {
    pub p: u64,
    pub digits: u32,
    pub modulus: u64,
    pub tuples: Vec<Vec<u64>>,
}

impl BruteForceResult {
    /// Every tuple has all entries different from 1 equal to one value.
    pub fn all_have_form(&self) -> bool {
        self.tuples.iter().all(|t| has_form(t))
    }

    pub fn only_all_ones(&self) -> bool {
        self.tuples.len() == 1 && self.tuples[0].iter().all(|&z| z == 1)
    }
}

/// Tuple of the shape `(z, ..., z, 1, ..., 1)` up to reordering.
pub fn has_form(tuple: &[u64]) -> bool {
    let mut others = tuple.iter().filter(|&&z| z != 1);
    match others.next() {
        None => true,
        Some(first) => others.all(|z| z == first),
    }
}

const MAX_Q: u64 = 5;
const MAX_DIGITS: u32 = 5;

fn powmod(mut b: u128, mut e: u64, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

struct Search {
    p: u128,
    k: u64,
    theta: u128,
    full: u128,
    len: usize,
}

impl Search {
    fn consistent(&self, z: &[u128], modulus: u128) -> bool {
        let s = z.iter().sum::<u128>() % modulus;
        let theta = self.theta % modulus;
        let lhs_base = powmod(theta + s, self.k, modulus);
        let tm1 = (theta + modulus - 1) % modulus;
        z.iter().all(|&zi| {
            let lhs = zi * lhs_base % modulus;
            let rhs = powmod(tm1 * zi % modulus + s + 1, self.k, modulus);
            lhs == rhs
        })
    }

    fn run(&self, start_digits: u32) -> Vec<Vec<u128>> {
        let mut found = Vec::new();
        let start = vec![1u128; self.len];
        let m0 = self.p.pow(start_digits);
        if !self.consistent(&start, m0) {
            return found;
        }
        let mut stack = vec![(start, m0)];
        while let Some((z, modulus)) = stack.pop() {
            if modulus == self.full {
                found.push(z);
                continue;
            }
            let next = modulus * self.p;
            let combos = self.p.pow(self.len as u32);
            for c in 0..combos {
                let mut child = z.clone();
                let mut rest = c;
                for zi in child.iter_mut() {
                    *zi += (rest % self.p) * modulus;
                    rest /= self.p;
                }
                if self.consistent(&child, next) {
                    stack.push((child, next));
                }
            }
        }
        found
    }
}

/// All solution tuples `(z_1, ..., z_{q-1})` modulo `p^digits`.
///
/// Requires `q <= 5` and `digits <= 5`; digits fixed by the `E_p`
/// condition are not searched.
pub fn brute_force_system(params: &PottsParameters, digits: u32) -> Result<BruteForceResult> {
    if params.q > MAX_Q {
        return Err(Error::InvalidParameters(format!(
            "brute-force search supports q <= {MAX_Q}, got {}",
            params.q
        )));
    }
    let start_digits = if params.p == 2 { 2 } else { 1 };
    if digits > MAX_DIGITS || digits < start_digits {
        return Err(Error::InvalidParameters(format!(
            "digits must lie in {start_digits}..={MAX_DIGITS}, got {digits}"
        )));
    }
    let p = params.p as u128;
    let full = p
        .checked_pow(digits)
        .filter(|&m| m < 1 << 40)
        .ok_or_else(|| Error::InvalidParameters(format!("p^{digits} too large for the search")))?;
    let theta = params
        .theta
        .residue(params.p, digits)
        .expect("theta is a p-adic unit");
    let theta: u128 = theta.try_into().expect("residue below 2^40");
    let search = Search {
        p,
        k: params.k,
        theta,
        full,
        len: (params.q - 1) as usize,
    };
    let mut tuples: Vec<Vec<u64>> = search
        .run(start_digits)
        .into_iter()
        .map(|t| t.into_iter().map(|z| z as u64).collect())
        .collect();
    tuples.sort();
    Ok(BruteForceResult {
        p: params.p,
        digits,
        modulus: full as u64,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ExactRational;

    fn params(p: u64, q: u64, k: u64, theta: i64) -> PottsParameters {
        PottsParameters::new(p, q, k, ExactRational::from(theta)).unwrap()
    }

    #[test]
    fn form_predicate() {
        assert!(has_form(&[1, 1]));
        assert!(has_form(&[4, 1, 4]));
        assert!(!has_form(&[4, 7, 1]));
    }

    #[test]
    fn unique_solution_when_q_not_divisible() {
        let r = brute_force_system(&params(5, 3, 3, 6), 3).unwrap();
        assert!(r.only_all_ones());
        assert_eq!(r.modulus, 125);
    }

    #[test]
    fn finds_theta_one_minus_q_solution() {
        // p = 3, q = 3, θ = -2: z_3 = -8 solves with m = 1
        let r = brute_force_system(&params(3, 3, 3, -2), 3).unwrap();
        let z = (-8i64).rem_euclid(27) as u64;
        assert!(r.tuples.contains(&vec![z, 1]));
        assert!(r.tuples.contains(&vec![1, z]));
    }

    #[test]
    fn rejects_large_inputs() {
        assert!(brute_force_system(&params(3, 6, 3, 4), 3).is_err());
        assert!(brute_force_system(&params(3, 3, 3, 4), 6).is_err());
        assert!(brute_force_system(&params(2, 3, 3, 5), 1).is_err());
    }

    #[test]
    fn powmod_small() {
        assert_eq!(powmod(3, 4, 7), 81 % 7);
        assert_eq!(powmod(5, 0, 1), 0);
    }
}
