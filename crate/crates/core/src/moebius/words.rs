use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::{Mat2, MoebiusElement};

pub const DEFAULT_WORD_CAP: u64 = 5_000_000;

/// Class the user asserts for a group. Never verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertedClass {
    Schottky,
    CyclicLoxodromic,
    Fuchsian,
    Other,
}

impl AssertedClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AssertedClass::Schottky => "schottky",
            AssertedClass::CyclicLoxodromic => "cyclic_loxodromic",
            AssertedClass::Fuchsian => "fuchsian",
            AssertedClass::Other => "other",
        }
    }
}

impl fmt::Display for AssertedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssertedClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schottky" => Ok(AssertedClass::Schottky),
            "cyclic_loxodromic" => Ok(AssertedClass::CyclicLoxodromic),
            "fuchsian" => Ok(AssertedClass::Fuchsian),
            "other" => Ok(AssertedClass::Other),
            _ => Err(Error::PreconditionViolated(format!(
                "unknown asserted class `{s}`"
            ))),
        }
    }
}

/// Named generators of a finitely generated subgroup of PSL(2,C). Inverses are
/// computed on demand.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    names: Vec<String>,
    letters: Vec<MoebiusElement>,
    pub asserted_class: AssertedClass,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(
        generators: Vec<(String, MoebiusElement)>,
        asserted_class: AssertedClass,
        n: usize,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::PreconditionViolated(
                "a group needs at least one generator".into(),
            ));
        }
        let mut names = Vec::with_capacity(generators.len());
        let mut letters = Vec::with_capacity(2 * generators.len());
        for (name, g) in generators {
            if name.is_empty()
                || name.contains(|ch: char| ch.is_whitespace() || ch == '^')
                || names.contains(&name)
            {
                return Err(Error::PreconditionViolated(format!(
                    "invalid or duplicate generator name `{name}`"
                )));
            }
            let inv = g.inverse().with_label(format!("{name}^-1"));
            letters.push(g.with_label(name.clone()));
            letters.push(inv);
            names.push(name);
        }
        Ok(GroupSpec {
            names,
            letters,
            asserted_class,
            n,
        })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, i: usize) -> &MoebiusElement {
        &self.letters[2 * i]
    }

    /// Letter `2i` is generator `i`, letter `2i+1` its inverse.
    pub fn letter(&self, l: usize) -> &MoebiusElement {
        &self.letters[l]
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = &MoebiusElement> {
        self.letters.iter().step_by(2)
    }

    pub fn label(&self, letters: &[usize]) -> String {
        if letters.is_empty() {
            return "id".to_string();
        }
        letters
            .iter()
            .map(|&l| self.letters[l].label().unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Conjugated group `B G B^{-1}` with the same names.
    pub fn conjugated(&self, b: &MoebiusElement) -> Self {
        let gens = self
            .names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), self.generator(i).conjugate_by(b)))
            .collect();
        GroupSpec::new(gens, self.asserted_class, self.n).expect("names already validated")
    }
}

#[inline]
pub(crate) fn inverse_letter(l: usize) -> usize {
    l ^ 1
}

/// A freely reduced word with its evaluated matrix.
#[derive(Debug, Clone)]
pub struct GroupWord {
    pub letters: Vec<usize>,
    pub element: MoebiusElement,
}

impl GroupWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn label(&self) -> &str {
        self.element.label().unwrap_or("id")
    }

    pub fn inverse(&self, g: &GroupSpec) -> GroupWord {
        let letters: Vec<usize> = self.letters.iter().rev().map(|&l| inverse_letter(l)).collect();
        let label = g.label(&letters);
        GroupWord {
            letters,
            element: self.element.inverse().with_label(label),
        }
    }
}

/// Number of reduced words of length `1..=lmax` over `rank` generators.
pub fn count_reduced_words(rank: usize, lmax: usize) -> u128 {
    let k = 2 * rank as u128;
    let mut level = k;
    let mut total: u128 = 0;
    for _ in 0..lmax {
        total = total.saturating_add(level);
        level = level.saturating_mul(k - 1);
    }
    total
}

pub fn enumerate_words(g: &GroupSpec, lmax: usize) -> Result<Vec<GroupWord>> {
    enumerate_words_capped(g, lmax, DEFAULT_WORD_CAP)
}

/// All reduced words of length `1..=lmax` in shortlex order (letters ordered
/// `g1, g1^-1, g2, g2^-1, ...`).
pub fn enumerate_words_capped(g: &GroupSpec, lmax: usize, cap: u64) -> Result<Vec<GroupWord>> {
    if lmax == 0 {
        return Err(Error::PreconditionViolated("lmax must be at least 1".into()));
    }
    let count = count_reduced_words(g.rank(), lmax);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded { count, cap });
    }
    let mut out: Vec<GroupWord> = Vec::with_capacity(count as usize);
    let mut level: Vec<(Vec<usize>, Mat2)> = vec![(Vec::new(), Mat2::identity())];
    for _ in 0..lmax {
        let mut next = Vec::with_capacity(level.len() * g.num_letters());
        for (prefix, mat) in &level {
            for l in 0..g.num_letters() {
                if prefix.last().is_some_and(|&p| p == inverse_letter(l)) {
                    continue;
                }
                let mut letters = prefix.clone();
                letters.push(l);
                next.push((letters, mat * g.letter(l).mat()));
            }
        }
        out.extend(next.iter().map(|(letters, mat)| GroupWord {
            element: MoebiusElement::from_product(*mat, Some(g.label(letters))),
            letters: letters.clone(),
        }));
        level = next;
    }
    Ok(out)
}

/// Parses a word such as `"a b^-1 a^2"`; `"id"` or an empty string is the
/// identity. The result is freely reduced.
pub fn parse_word(g: &GroupSpec, text: &str) -> Result<GroupWord> {
    let mut letters: Vec<usize> = Vec::new();
    for token in text.split_whitespace() {
        if token == "id" {
            continue;
        }
        let (name, exp) = match token.split_once('^') {
            Some((name, e)) => {
                let exp: i64 = e.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column: text.find(token).unwrap_or(0) + name.len() + 2,
                    message: format!("bad exponent `{e}`"),
                })?;
                (name, exp)
            }
            None => (token, 1),
        };
        let idx = g
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let l = if exp < 0 { 2 * idx + 1 } else { 2 * idx };
        for _ in 0..exp.unsigned_abs() {
            if letters.last().is_some_and(|&p| p == inverse_letter(l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
    }
    let mat = letters
        .iter()
        .fold(Mat2::identity(), |acc, &l| acc * g.letter(l).mat());
    let label = g.label(&letters);
    Ok(GroupWord {
        element: MoebiusElement::from_product(mat, Some(label)),
        letters,
    })
}
