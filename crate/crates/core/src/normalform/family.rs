use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::series::{normalize, NormalSeries};
use super::words::{word_apply, word_nf, Letter, Word};
use crate::freemodule::{Operator, Vector};
use crate::ring::{Ring, RingError, RingValue};

type MemberFn = dyn Fn(usize) -> Vec<(RingValue, Word)> + Send + Sync;

/// A family of words `n ↦ Σ α w` in which every word of member `n` must
/// reduce to a normal form with exactly `n` letters `y`.
///
/// Such a family is summable: on `e_m` only members `0..=m` act nontrivially.
/// The grading is checked per index, never assumed for the whole family.
#[derive(Clone)]
pub struct GradedFamily {
    ring: Ring,
    members: Arc<MemberFn>,
    label: String,
}

/// Outcome of [`family_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyVerdict {
    Accepted {
        up_to: usize,
    },
    /// Member `index` contains a word whose normal form has `ydeg` letters `y`.
    Rejected {
        index: usize,
        ydeg: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("family is not graded at index {index}: normal form has y-degree {ydeg}")]
pub struct FamilyRejection {
    pub index: usize,
    pub ydeg: usize,
}

impl GradedFamily {
    pub fn from_fn<F>(ring: Ring, label: impl Into<String>, members: F) -> GradedFamily
    where
        F: Fn(usize) -> Vec<(RingValue, Word)> + Send + Sync + 'static,
    {
        GradedFamily {
            ring,
            members: Arc::new(members),
            label: label.into(),
        }
    }

    /// One word per index with coefficient 1.
    pub fn from_words<F>(ring: Ring, label: impl Into<String>, word: F) -> GradedFamily
    where
        F: Fn(usize) -> Word + Send + Sync + 'static,
    {
        GradedFamily::from_fn(ring, label, move |n| vec![(ring.one(), word(n))])
    }

    /// A finite linear combination of words, each placed at the index given
    /// by the `y`-degree of its normal form.
    pub fn finite(ring: Ring, terms: Vec<(RingValue, Word)>) -> Result<GradedFamily, RingError> {
        let mut by_grade: BTreeMap<usize, Vec<(RingValue, Word)>> = BTreeMap::new();
        let mut label = Vec::new();
        for (c, w) in terms {
            if c.ring() != ring {
                return Err(RingError::Mismatch {
                    left: ring,
                    right: c.ring(),
                });
            }
            label.push(format!("{c}*{w}"));
            by_grade.entry(w.nf_ydeg()).or_default().push((c, w));
        }
        Ok(GradedFamily::from_fn(ring, label.join(" + "), move |n| {
            by_grade.get(&n).cloned().unwrap_or_default()
        }))
    }

    pub fn from_pattern(ring: Ring, pattern: &FamilyPattern) -> GradedFamily {
        let p = pattern.clone();
        GradedFamily::from_words(ring, pattern.to_string(), move |n| p.word(n))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn member(&self, n: usize) -> Vec<(RingValue, Word)> {
        (self.members)(n)
    }

    fn check_index(&self, n: usize) -> Result<(), FamilyRejection> {
        for (_, w) in self.member(n) {
            let ydeg = word_nf(&w).y;
            if ydeg != n {
                return Err(FamilyRejection { index: n, ydeg });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedFamily")
            .field("ring", &self.ring)
            .field("label", &self.label)
            .finish()
    }
}

/// Verifies the grading for members `0..=up_to`, reporting the first violation.
pub fn family_check(family: &GradedFamily, up_to: usize) -> FamilyVerdict {
    match (0..=up_to).try_for_each(|n| family.check_index(n)) {
        Ok(()) => FamilyVerdict::Accepted { up_to },
        Err(r) => FamilyVerdict::Rejected {
            index: r.index,
            ydeg: r.ydeg,
        },
    }
}

/// The sum `Σ_n Σ α π̂(w)` as an operator.
///
/// On `e_m` only members `0..=m` are consulted. Panics if one of them
/// violates the grading; [`family_to_series`] checks a prefix up front.
pub fn family_operator(family: &GradedFamily) -> Operator {
    let fam = family.clone();
    let ring = family.ring;
    Operator::from_fn(ring, move |m| {
        let e = Vector::basis(ring, m);
        let mut out = Vector::zero(ring);
        for n in 0..=m {
            if let Err(r) = fam.check_index(n) {
                panic!("{r}");
            }
            for (c, w) in fam.member(n) {
                out.add_scaled(&c, &word_apply(&w, &e));
            }
        }
        out
    })
}

/// `N(F) = s(π̃(F))` for a graded family; coefficient `n` uses members
/// `0..=n` only. The grading is verified for `0..=checked_up_to` first.
pub fn family_to_series(
    family: &GradedFamily,
    checked_up_to: usize,
) -> Result<NormalSeries, FamilyRejection> {
    if let FamilyVerdict::Rejected { index, ydeg } = family_check(family, checked_up_to) {
        return Err(FamilyRejection { index, ydeg });
    }
    Ok(normalize(&family_operator(family)))
}

/// Exponent `a*n + b` of one block of a [`FamilyPattern`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: usize,
    pub b: usize,
}

impl Affine {
    pub fn at(self, n: usize) -> usize {
        self.a * n + self.b
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "n"),
            (a, 0) => write!(f, "{a}*n"),
            (1, b) => write!(f, "n+{b}"),
            (a, b) => write!(f, "{a}*n+{b}"),
        }
    }
}

/// Word family text such as `x^{n} y^{n}` or `y^{2*n+1} x^{n}`: blocks of a
/// single letter whose exponents are affine in `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPattern {
    pub blocks: Vec<(Letter, Affine)>,
}

impl FamilyPattern {
    pub fn word(&self, n: usize) -> Word {
        let mut w = Word::empty();
        for &(l, e) in &self.blocks {
            w.push(l, e.at(n));
        }
        w
    }

    pub fn parse(text: &str) -> Result<FamilyPattern, RingError> {
        let err = |m: &str| RingError::Parse(format!("family pattern `{text}`: {m}"));
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut blocks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let letter = match chars[i] {
                'x' => Letter::X,
                'y' => Letter::Y,
                c => return Err(err(&format!("expected `x` or `y`, found `{c}`"))),
            };
            i += 1;
            let exponent = if chars.get(i) == Some(&'^') {
                i += 1;
                if chars.get(i) == Some(&'{') {
                    let close = chars[i..]
                        .iter()
                        .position(|&c| c == '}')
                        .ok_or_else(|| err("unclosed `{`"))?;
                    let body: String = chars[i + 1..i + close].iter().collect();
                    i += close + 1;
                    parse_affine(&body).ok_or_else(|| err(&format!("bad exponent `{body}`")))?
                } else {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == 'n') {
                        i += 1;
                    }
                    let body: String = chars[start..i].iter().collect();
                    parse_affine(&body).ok_or_else(|| err(&format!("bad exponent `{body}`")))?
                }
            } else {
                Affine { a: 0, b: 1 }
            };
            blocks.push((letter, exponent));
        }
        if blocks.is_empty() {
            return Err(err("empty pattern"));
        }
        Ok(FamilyPattern { blocks })
    }
}

impl fmt::Display for FamilyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, e)) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let l = if *l == Letter::X { "x" } else { "y" };
            write!(f, "{l}^{{{e}}}")?;
        }
        Ok(())
    }
}

/// `a*n+b`, `a*n`, `an`, `n+b`, `n`, `b` with natural `a`, `b`.
fn parse_affine(text: &str) -> Option<Affine> {
    let mut aff = Affine { a: 0, b: 0 };
    for part in text.split('+') {
        if part.is_empty() {
            return None;
        }
        if let Some(coef) = part.strip_suffix('n') {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            aff.a += if coef.is_empty() {
                1
            } else {
                coef.parse().ok()?
            };
        } else {
            aff.b += part.parse::<usize>().ok()?;
        }
    }
    Some(aff)
}
