//! Reduced words in the free group on `a`, `b` and automorphisms given on generators.
//!
//! Letters are `1 = a`, `-1 = A = a⁻¹`, `2 = b`, `-2 = B = b⁻¹`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Letter = i8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

/// Shortlex letter order: a, A, b, B.
fn letter_rank(l: Letter) -> u8 {
    match l {
        1 => 0,
        -1 => 1,
        2 => 2,
        _ => 3,
    }
}

pub const LETTERS: [Letter; 4] = [1, -1, 2, -2];

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter with free reduction.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn times(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut w = Word::identity();
        for ch in s.trim().chars() {
            let l = match ch {
                'a' => 1,
                'A' => -1,
                'b' => 2,
                'B' => -2,
                '1' | 'e' if s.trim().len() == 1 => continue,
                _ => return Err(Error::Monodromy(s.to_string())),
            };
            w.push(l);
        }
        Ok(w)
    }

    fn shortlex_key(&self) -> (usize, Vec<u8>) {
        (self.0.len(), self.0.iter().map(|&l| letter_rank(l)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &l in &self.0 {
            let c = match l {
                1 => 'a',
                -1 => 'A',
                2 => 'b',
                _ => 'B',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// All reduced words of length at most `radius`, in shortlex order.
pub fn ball(radius: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for l in LETTERS {
                if w.0.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.0.push(l);
                    next.push(v);
                }
            }
        }
        next.sort_by_key(|w| w.shortlex_key());
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Index of every word of a ball.
pub fn ball_index(words: &[Word]) -> HashMap<Word, u32> {
    words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect()
}

/// An endomorphism of F(a, b) given by the images of `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub a: Word,
    pub b: Word,
}

impl Automorphism {
    pub fn identity() -> Automorphism {
        Automorphism { a: Word(vec![1]), b: Word(vec![2]) }
    }

    /// Parses `"a->ab,b->a"`. Missing generators map to themselves.
    pub fn parse(s: &str) -> Result<Automorphism> {
        let mut phi = Automorphism::identity();
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(phi);
        }
        for part in s.split(',') {
            let (lhs, rhs) = part.split_once("->").ok_or_else(|| Error::Monodromy(s.to_string()))?;
            let img = Word::parse(rhs).map_err(|_| Error::Monodromy(s.to_string()))?;
            match lhs.trim() {
                "a" => phi.a = img,
                "b" => phi.b = img,
                _ => return Err(Error::Monodromy(s.to_string())),
            }
        }
        Ok(phi)
    }

    pub fn image_of(&self, l: Letter) -> Word {
        match l {
            1 => self.a.clone(),
            -1 => self.a.inverse(),
            2 => self.b.clone(),
            _ => self.b.inverse(),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for &l in &w.0 {
            out = out.times(&self.image_of(l));
        }
        out
    }

    pub fn compose(&self, then: &Automorphism) -> Automorphism {
        Automorphism { a: then.apply(&self.a), b: then.apply(&self.b) }
    }

    /// Inverse found by searching preimages of `a` and `b` among words up to `max_len`.
    pub fn inverse(&self, max_len: usize) -> Result<Automorphism> {
        let mut ia = None;
        let mut ib = None;
        let (ta, tb) = (Word(vec![1]), Word(vec![2]));
        for w in ball(max_len) {
            let img = self.apply(&w);
            if ia.is_none() && img == ta {
                ia = Some(w.clone());
            }
            if ib.is_none() && img == tb {
                ib = Some(w);
            }
            if ia.is_some() && ib.is_some() {
                break;
            }
        }
        match (ia, ib) {
            (Some(a), Some(b)) => Ok(Automorphism { a, b }),
            _ => Err(Error::Monodromy(format!("{self}: no inverse with images of length <= {max_len}"))),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Automorphism::identity()
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a->{},b->{}", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(0).len(), 1);
        assert_eq!(ball(1).len(), 5);
        assert_eq!(ball(3).len(), 1 + 4 + 12 + 36);
        let b = ball(2);
        assert_eq!(b[1].to_string(), "a");
        assert_eq!(b[5].to_string(), "aa");
    }

    #[test]
    fn fibonacci_growth() {
        let phi = Automorphism::parse("a->ab,b->a").unwrap();
        let mut w = Word::parse("a").unwrap();
        let mut lens = Vec::new();
        for _ in 0..6 {
            lens.push(w.len());
            w = phi.apply(&w);
        }
        assert_eq!(lens, vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn inverse_roundtrip() {
        let phi = Automorphism::parse("a->ab,b->a").unwrap();
        let inv = phi.inverse(6).unwrap();
        assert_eq!(inv.to_string(), "a->b,b->Ba");
        for w in ball(4) {
            assert_eq!(inv.apply(&phi.apply(&w)), w);
            assert_eq!(phi.apply(&inv.apply(&w)), w);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(Automorphism::parse("a=>ab").is_err());
        assert!(Automorphism::parse("c->a").is_err());
        assert!(Automorphism::parse("a->ax").is_err());
        assert!(Automorphism::parse("id").unwrap().is_identity());
        assert!(Automorphism::parse("a->aa,b->b").unwrap().inverse(5).is_err());
    }
}
