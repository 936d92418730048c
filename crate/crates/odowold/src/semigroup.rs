//! Exact arithmetic in the odometer semigroup `O_n`.
//!
//! `O_n` is the monoid generated by `w, v_1, ..., v_n` subject to
//! `w v_k = v_{k+1}` for `k < n` and `w v_n = v_1 w`; it is isomorphic to the
//! Baumslag–Solitar monoid `BS(1,n)^+` (identify `b` with `w` and `b^{k-1}a`
//! with `v_k`). Every element has a unique right normal form `v_μ w^N` and a
//! unique left normal form `w^p v_1^q`.
//!
//! Digit convention: `μ` is stored most-recently-applied-first, so
//! `v_μ = v_{μ_1} v_{μ_2} ··· v_{μ_m}` and position 1 is the least
//! significant digit of the add-one action of `w`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u8, u8),
    #[error("digit {digit} out of range for rank {rank}")]
    DigitOutOfRange { digit: u8, rank: u8 },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("cannot parse word token {0:?}")]
    BadToken(String),
}

/// A generator letter of `O_n`: the adding machine `w` or a free generator `v_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    W,
    V(u8),
}

/// A raw word over the generators, not yet reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    n: u8,
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(n: u8, letters: Vec<Letter>) -> Result<GeneratorWord, SemigroupError> {
        if n == 0 {
            return Err(SemigroupError::ZeroRank);
        }
        for l in &letters {
            if let Letter::V(d) = l {
                if *d < 1 || *d > n {
                    return Err(SemigroupError::DigitOutOfRange { digit: *d, rank: n });
                }
            }
        }
        Ok(GeneratorWord { n, letters })
    }

    /// Parses whitespace-separated tokens `w`, `v1`..`vN`.
    pub fn parse(text: &str, n: u8) -> Result<GeneratorWord, SemigroupError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "w" {
                letters.push(Letter::W);
            } else if let Some(num) = tok.strip_prefix('v') {
                let d: u8 = num
                    .parse()
                    .map_err(|_| SemigroupError::BadToken(tok.to_string()))?;
                letters.push(Letter::V(d));
            } else {
                return Err(SemigroupError::BadToken(tok.to_string()));
            }
        }
        GeneratorWord::new(n, letters)
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord, SemigroupError> {
        if self.n != other.n {
            return Err(SemigroupError::RankMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GeneratorWord {
            n: self.n,
            letters,
        })
    }

    /// Rewrites the word to its unique normal form `v_μ w^N`.
    ///
    /// Strategy: leftmost-innermost application of `w v_k → v_{k+1}` and
    /// `w v_n → v_1 w` until no `w` precedes a `v`. Each step moves a `w`
    /// strictly rightward, so the loop terminates.
    pub fn reduce(&self) -> OdometerElement {
        let n = self.n;
        let mut word = self.letters.clone();
        loop {
            let redex = word
                .windows(2)
                .position(|pair| matches!(pair, [Letter::W, Letter::V(_)]));
            let Some(i) = redex else { break };
            let Letter::V(d) = word[i + 1] else {
                unreachable!()
            };
            if d < n {
                // w v_d -> v_{d+1}
                word[i] = Letter::V(d + 1);
                word.remove(i + 1);
            } else {
                // w v_n -> v_1 w
                word[i] = Letter::V(1);
                word[i + 1] = Letter::W;
            }
        }
        let mut mu = Vec::new();
        let mut power = 0u64;
        for l in &word {
            match l {
                Letter::V(d) => mu.push(*d),
                Letter::W => power += 1,
            }
        }
        OdometerElement { n, mu, power }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match l {
                Letter::W => write!(f, "w")?,
                Letter::V(d) => write!(f, "v{}", d)?,
            }
        }
        Ok(())
    }
}

/// Normal form `v_μ w^N` of an element of `O_n`.
///
/// Two elements are equal iff `(n, mu, power)` agree componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OdometerElement {
    n: u8,
    mu: Vec<u8>,
    power: u64,
}

impl OdometerElement {
    pub fn new(n: u8, mu: Vec<u8>, power: u64) -> Result<OdometerElement, SemigroupError> {
        if n == 0 {
            return Err(SemigroupError::ZeroRank);
        }
        for d in &mu {
            if *d < 1 || *d > n {
                return Err(SemigroupError::DigitOutOfRange { digit: *d, rank: n });
            }
        }
        Ok(OdometerElement { n, mu, power })
    }

    pub fn identity(n: u8) -> OdometerElement {
        OdometerElement {
            n,
            mu: Vec::new(),
            power: 0,
        }
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn mu(&self) -> &[u8] {
        &self.mu
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    /// Generator count `|μ| + N` of the normal form.
    pub fn length(&self) -> u64 {
        self.mu.len() as u64 + self.power
    }

    pub fn is_identity(&self) -> bool {
        self.mu.is_empty() && self.power == 0
    }

    /// The element as a generator word `v_{μ_1} ... v_{μ_m} w^N`.
    pub fn to_word(&self) -> GeneratorWord {
        let mut letters: Vec<Letter> = self.mu.iter().map(|d| Letter::V(*d)).collect();
        letters.extend(std::iter::repeat_n(Letter::W, self.power as usize));
        GeneratorWord {
            n: self.n,
            letters,
        }
    }

    /// Semigroup product, computed arithmetically: `w^N v_ν = v_{ν+N} w^c`
    /// where `ν+N` is base-`n` addition on the digit word and `c` counts the
    /// wraparounds that escape to the right.
    pub fn multiply(&self, other: &OdometerElement) -> Result<OdometerElement, SemigroupError> {
        if self.n != other.n {
            return Err(SemigroupError::RankMismatch(self.n, other.n));
        }
        let (shifted, carry) = add_n(&other.mu, self.n, self.power);
        let mut mu = self.mu.clone();
        mu.extend_from_slice(&shifted);
        Ok(OdometerElement {
            n: self.n,
            mu,
            power: carry + other.power,
        })
    }

    /// Left normal form `w^p v_1^q`: shift every `w` leftward using
    /// `v_1 w = w^n v_1` and `v_k = w^{k-1} v_1`.
    pub fn to_left_form(&self) -> LeftForm {
        let n = self.n as u128;
        let mut p: u128 = self.power as u128;
        for d in self.mu.iter().rev() {
            p = (*d as u128 - 1) + n * p;
        }
        LeftForm {
            p,
            q: self.mu.len() as u64,
        }
    }

    /// Rebuilds the right normal form from a left form.
    pub fn from_left_form(n: u8, form: &LeftForm) -> OdometerElement {
        let base = n as u128;
        let mut p = form.p;
        let mut mu = Vec::with_capacity(form.q as usize);
        for _ in 0..form.q {
            mu.push((p % base) as u8 + 1);
            p /= base;
        }
        OdometerElement {
            n,
            mu,
            power: p as u64,
        }
    }

    /// Compact vertex-key rendering, e.g. `v[2,1]w^3`.
    pub fn key_string(&self) -> String {
        let digits: Vec<String> = self.mu.iter().map(|d| d.to_string()).collect();
        format!("v[{}]w^{}", digits.join(","), self.power)
    }

    /// Parses the compact `v[...]w^N` key rendering.
    pub fn parse_key(s: &str, n: u8) -> Option<OdometerElement> {
        let rest = s.strip_prefix("v[")?;
        let (digits, tail) = rest.split_once(']')?;
        let power: u64 = tail.strip_prefix("w^")?.parse().ok()?;
        let mut mu = Vec::new();
        if !digits.is_empty() {
            for part in digits.split(',') {
                mu.push(part.trim().parse().ok()?);
            }
        }
        OdometerElement::new(n, mu, power).ok()
    }
}

impl fmt::Display for OdometerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.mu.iter().map(|d| d.to_string()).collect();
        write!(f, "v[{}] w^{}", digits.join(","), self.power)
    }
}

/// Left normal form exponents: the element `w^p v_1^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeftForm {
    pub p: u128,
    pub q: u64,
}

impl fmt::Display for LeftForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} v1^{}", self.p, self.q)
    }
}

/// Adds `amount` to the digit word in base `n` (digit values `1..=n` stand
/// for `0..n-1`, position 1 least significant). Returns the new digits and
/// the number of carries that overflow past the last position.
///
/// This encodes `w^amount · V_μ = V_{μ'} · w^carry`.
pub fn add_n(mu: &[u8], n: u8, amount: u64) -> (Vec<u8>, u64) {
    let base = n as u64;
    let mut out = Vec::with_capacity(mu.len());
    let mut carry = amount;
    for d in mu {
        let total = (*d as u64 - 1) + carry;
        out.push((total % base) as u8 + 1);
        carry = total / base;
    }
    (out, carry)
}

/// Single add-one step: `W · V_μ = V_{μ'} · W^carry` with carry 0 or 1.
///
/// Digit `n` rolls to 1 with a carry to the next position; the carry escapes
/// (returns 1) exactly when `μ = n^m`, in which case the output is `1^m`.
pub fn add_one(mu: &[u8], n: u8) -> (Vec<u8>, u8) {
    let (out, carry) = add_n(mu, n, 1);
    debug_assert!(carry <= 1);
    (out, carry as u8)
}

/// Inverse of [`add_one`]: `μ' ↦ (μ, borrow)` with `add_one(μ) = (μ', borrow)`.
/// Borrow 1 means the input was `1^m` (value 0) and the output wraps to `n^m`.
pub fn sub_one(mu: &[u8], n: u8) -> (Vec<u8>, u8) {
    let mut out = Vec::with_capacity(mu.len());
    let mut borrow = 1u8;
    for d in mu {
        let val = *d as i32 - 1 - borrow as i32;
        if val < 0 {
            out.push((val + n as i32) as u8 + 1);
            borrow = 1;
        } else {
            out.push(val as u8 + 1);
            borrow = 0;
        }
    }
    (out, borrow)
}

/// Left-regular action of a raw generator word on a basis element, folding
/// letters right to left: `v_d` prepends a digit, `w` performs add-one.
///
/// This interprets the semigroup arithmetically without touching the
/// rewriting engine, so it can serve as an independent oracle for `reduce`.
pub fn left_regular_action(word: &GeneratorWord, x: &OdometerElement) -> OdometerElement {
    let n = word.n;
    debug_assert_eq!(n, x.n);
    let mut mu = x.mu.clone();
    let mut power = x.power;
    for l in word.letters.iter().rev() {
        match l {
            Letter::V(d) => mu.insert(0, *d),
            Letter::W => {
                let (next, carry) = add_one(&mu, n);
                mu = next;
                power += carry as u64;
            }
        }
    }
    OdometerElement { n, mu, power }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: u8, s: &str) -> GeneratorWord {
        GeneratorWord::parse(s, n).unwrap()
    }

    fn elem(n: u8, mu: &[u8], power: u64) -> OdometerElement {
        OdometerElement::new(n, mu.to_vec(), power).unwrap()
    }

    #[test]
    fn reduce_examples() {
        // w v_1 = v_2
        assert_eq!(word(2, "w v1").reduce(), elem(2, &[2], 0));
        // empty word is the identity
        assert_eq!(word(2, "").reduce(), OdometerElement::identity(2));
        // w w w v_2 = v_1 w^2
        assert_eq!(word(2, "w w w v2").reduce(), elem(2, &[1], 2));
    }

    #[test]
    fn reduce_idempotent() {
        for s in ["w w v2 w v1", "v1 v2 w", "w w w", "v2 v2 v1"] {
            let nf = word(2, s).reduce();
            assert_eq!(nf.to_word().reduce(), nf);
        }
    }

    #[test]
    fn multiply_examples() {
        // (v_2)(w) = v_2 w, no rule fires
        assert_eq!(
            elem(2, &[2], 0).multiply(&elem(2, &[], 1)).unwrap(),
            elem(2, &[2], 1)
        );
        // (w)(v_1) = v_2
        assert_eq!(
            elem(2, &[], 1).multiply(&elem(2, &[1], 0)).unwrap(),
            elem(2, &[2], 0)
        );
        // (v_1 w)(v_1) = v_1 v_2
        assert_eq!(
            elem(2, &[1], 1).multiply(&elem(2, &[1], 0)).unwrap(),
            elem(2, &[1, 2], 0)
        );
        assert_eq!(
            elem(2, &[], 0).multiply(&elem(3, &[], 0)),
            Err(SemigroupError::RankMismatch(2, 3))
        );
    }

    #[test]
    fn identity_is_neutral() {
        let x = elem(3, &[2, 3, 1], 4);
        let e = OdometerElement::identity(3);
        assert_eq!(x.multiply(&e).unwrap(), x);
        assert_eq!(e.multiply(&x).unwrap(), x);
    }

    #[test]
    fn left_form_examples() {
        // v_k = w^{k-1} v_1
        for k in 1..=3u8 {
            let f = elem(3, &[k], 0).to_left_form();
            assert_eq!((f.p, f.q), (k as u128 - 1, 1));
        }
        let id = OdometerElement::identity(2).to_left_form();
        assert_eq!((id.p, id.q), (0, 0));
        // v_1 w = w^2 v_1 at n = 2 (b^n a = a b)
        let f = elem(2, &[1], 1).to_left_form();
        assert_eq!((f.p, f.q), (2, 1));
    }

    #[test]
    fn left_form_round_trip() {
        for mu in [vec![], vec![1], vec![2, 1], vec![3, 3, 1], vec![1, 2, 3]] {
            for power in 0..4 {
                let x = elem(3, &mu, power);
                let back = OdometerElement::from_left_form(3, &x.to_left_form());
                assert_eq!(back, x);
            }
        }
    }

    #[test]
    fn add_one_examples() {
        assert_eq!(add_one(&[1], 2), (vec![2], 0));
        assert_eq!(add_one(&[2, 1], 2), (vec![1, 2], 0));
        assert_eq!(add_one(&[], 2), (vec![], 1));
        // all-n rolls to all-1 with escaping carry
        assert_eq!(add_one(&[2, 2, 2], 2), (vec![1, 1, 1], 1));
    }

    #[test]
    fn sub_one_inverts_add_one() {
        let n = 3;
        for mu in [vec![], vec![1], vec![3], vec![3, 3], vec![2, 1, 3]] {
            let (up, carry) = add_one(&mu, n);
            let (down, borrow) = sub_one(&up, n);
            assert_eq!(down, mu);
            assert_eq!(borrow, carry);
        }
    }

    #[test]
    fn action_matches_reduce_on_identity() {
        for s in ["w v1 w", "v2 w v1", "w w v2 v1", ""] {
            let w = word(2, s);
            assert_eq!(
                left_regular_action(&w, &OdometerElement::identity(2)),
                w.reduce()
            );
        }
    }

    #[test]
    fn n1_multiplication_commutes() {
        // O_1 is the free commutative monoid on {w, v_1}
        for a in 0..4u64 {
            for b in 0..4u64 {
                let x = elem(1, &vec![1; a as usize], b);
                let y = elem(1, &vec![1; b as usize], a);
                assert_eq!(
                    x.multiply(&y).unwrap(),
                    y.multiply(&x).unwrap()
                );
            }
        }
    }

    #[test]
    fn key_string_round_trip() {
        for x in [elem(2, &[2, 1], 3), OdometerElement::identity(2)] {
            assert_eq!(OdometerElement::parse_key(&x.key_string(), 2), Some(x));
        }
        assert_eq!(elem(2, &[2, 1], 3).key_string(), "v[2,1]w^3");
    }

    #[test]
    fn word_parse_errors() {
        assert!(GeneratorWord::parse("w v4", 3).is_err());
        assert!(GeneratorWord::parse("w x1", 3).is_err());
        assert!(GeneratorWord::parse("w v0", 3).is_err());
    }
}
