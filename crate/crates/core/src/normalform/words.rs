use std::fmt;

use crate::freemodule::{Operator, Vector};
use crate::ring::{Ring, RingError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// acts as `U`
    X,
    /// acts as `D`
    Y,
}

/// A word over `{x, y}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

/// The rewrite normal form `x^a y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalWord {
    pub x: usize,
    pub y: usize,
}

/// Which `yx` occurrence gets rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Accepts `x`/`y` characters; whitespace is ignored, and `1` or an
    /// empty string is the empty word.
    pub fn parse(text: &str) -> Result<Word, RingError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "1" {
            return Ok(Word::empty());
        }
        t.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                other => Err(RingError::Parse(format!(
                    "`{other}` is not a letter of {{x, y}}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter, times: usize) {
        self.0.extend(std::iter::repeat_n(letter, times));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    /// The `y`-exponent of the normal form.
    pub fn nf_ydeg(&self) -> usize {
        word_nf(self).y
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            f.write_str(match l {
                Letter::X => "x",
                Letter::Y => "y",
            })?;
        }
        Ok(())
    }
}

impl NormalWord {
    pub fn to_word(self) -> Word {
        let mut w = Word::empty();
        w.push(Letter::X, self.x);
        w.push(Letter::Y, self.y);
        w
    }

    /// `{"x": a, "y": b}`
    pub fn to_json(self) -> serde_json::Value {
        serde_json::json!({ "x": self.x, "y": self.y })
    }
}

/// Normal form under `yx → ε`, in one left-to-right pass: each `x` cancels
/// a pending `y` if there is one.
pub fn word_nf(w: &Word) -> NormalWord {
    let (mut a, mut b) = (0, 0);
    for l in w.letters() {
        match l {
            Letter::Y => b += 1,
            Letter::X if b > 0 => b -= 1,
            Letter::X => a += 1,
        }
    }
    NormalWord { x: a, y: b }
}

/// Rewrites `yx → ε` one redex at a time with the given strategy until no
/// redex is left, then reads off the shape `x^a y^b`.
pub fn reduce(w: &Word, strategy: Strategy) -> NormalWord {
    let mut letters = w.letters().to_vec();
    loop {
        let mut redexes = letters
            .windows(2)
            .enumerate()
            .filter(|(_, pair)| pair == &[Letter::Y, Letter::X])
            .map(|(i, _)| i);
        let at = match strategy {
            Strategy::Leftmost => redexes.next(),
            Strategy::Rightmost => redexes.next_back(),
        };
        match at {
            Some(i) => {
                letters.drain(i..i + 2);
            }
            None => break,
        }
    }
    let a = letters.iter().take_while(|&&l| l == Letter::X).count();
    debug_assert!(letters[a..].iter().all(|&l| l == Letter::Y));
    NormalWord {
        x: a,
        y: letters.len() - a,
    }
}

/// `π̂(w)(v)`: `x ↦ U`, `y ↦ D`, multiplicative, so the last letter acts first.
pub fn word_apply(w: &Word, v: &Vector) -> Vector {
    w.letters().iter().rev().fold(v.clone(), |acc, l| match l {
        Letter::X => acc.raise(),
        Letter::Y => acc.lower(),
    })
}

pub fn word_operator(ring: Ring, w: &Word) -> Operator {
    let w = w.clone();
    let name = w.to_string();
    Operator::named_fn(ring, name, move |n| word_apply(&w, &Vector::basis(ring, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Ring = Ring::Rationals;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(word_nf(&w("yx")), NormalWord { x: 0, y: 0 });
        assert_eq!(word_nf(&w("xy")), NormalWord { x: 1, y: 1 });
        assert_eq!(word_nf(&w("yyxyxx")), NormalWord { x: 0, y: 0 });
        assert_eq!(word_nf(&w("xyyxxxy")), NormalWord { x: 2, y: 1 });
        for s in ["yx", "xy", "yyxyxx", "yxxyyy", "xxyyxy"] {
            assert_eq!(reduce(&w(s), Strategy::Leftmost), word_nf(&w(s)));
            assert_eq!(reduce(&w(s), Strategy::Rightmost), word_nf(&w(s)));
        }
    }

    #[test]
    fn nf_agrees_with_action() {
        let word = w("yyxyxx");
        for m in 0..=10 {
            let e = Vector::basis(Q, m);
            assert_eq!(word_apply(&word, &e), e);
        }
    }

    #[test]
    fn application_examples() {
        for m in 0..=8 {
            let e = Vector::basis(Q, m);
            assert_eq!(word_apply(&w("yx"), &e), e);
            assert_eq!(word_apply(&Word::empty(), &e), e);
        }
        assert!(word_apply(&w("xy"), &Vector::basis(Q, 0)).is_zero());
        // last letter acts first: xyy on e_2 is U(D(D(e_2))) = e_1
        assert_eq!(
            word_apply(&w("xyy"), &Vector::basis(Q, 2)),
            Vector::basis(Q, 1)
        );
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("x y y").to_string(), "xyy");
        assert_eq!(w("1"), Word::empty());
        assert_eq!(Word::empty().to_string(), "1");
        assert!(Word::parse("xz").is_err());
        assert_eq!(NormalWord { x: 2, y: 3 }.to_word(), w("xxyyy"));
        assert_eq!(
            NormalWord { x: 2, y: 3 }.to_json().to_string(),
            r#"{"x":2,"y":3}"#
        );
    }
}
