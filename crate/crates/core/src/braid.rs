//! Braid words, the free-group automorphisms they induce, permutations and
//! Markov moves.
//!
//! Letter `i` stands for `σ_i` and `-i` for `σ_i^{-1}`. Words are kept
//! exactly as written; nothing here ever decides braid equality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in the braid group on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

/// Sign of a stabilizing letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(Error::Domain(format!("sign must be +1 or -1, got {other}"))),
        }
    }
}

/// Which side the new generator is multiplied on during stabilization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StabilizeSide {
    #[default]
    Left,
    /// Experimental; the audits only exercise `Left`.
    Right,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Domain("a braid needs at least one strand".into()));
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::Parse {
                    token: g.to_string(),
                    reason: format!("letter must satisfy 1 <= |g| <= {}", strands - 1),
                });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands: strands.max(1),
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word for the inverse braid: reversed order, inverted letters.
    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|g| -g).collect(),
        }
    }

    /// Mirror image of the closure: every crossing flipped.
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|g| -g).collect(),
        }
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                expected: self.strands,
                found: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self {
            strands: self.strands,
            letters,
        })
    }

    /// Number of letters acting on column `col` (between strands `col` and `col + 1`).
    pub fn column_count(&self, col: usize) -> usize {
        self.letters
            .iter()
            .filter(|g| g.unsigned_abs() as usize == col)
            .count()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parses whitespace-separated nonzero integers. Without an explicit strand
/// count the smallest admissible one, `max|g| + 1`, is used.
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let g: i32 = tok.parse().map_err(|_| Error::Parse {
            token: tok.to_string(),
            reason: "not an integer".into(),
        })?;
        if g == 0 {
            return Err(Error::Parse {
                token: tok.to_string(),
                reason: "zero is not a braid generator".into(),
            });
        }
        letters.push(g);
    }
    let needed = letters
        .iter()
        .map(|g| g.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(1);
    let n = strands.unwrap_or(needed);
    if n == 0 {
        return Err(Error::Parse {
            token: "0".into(),
            reason: "strand count must be positive".into(),
        });
    }
    if let Some(bad) = letters.iter().find(|g| g.unsigned_abs() as usize >= n) {
        return Err(Error::Parse {
            token: bad.to_string(),
            reason: format!("|g| must be at most {} for {} strands", n - 1, n),
        });
    }
    BraidWord::new(n, letters)
}

/// A permutation of `{1..n}` stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::Domain(format!("{image:?} is not a permutation")));
            }
            seen[i - 1] = true;
        }
        Ok(Self { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// Cycle lengths, sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.image.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i] - 1;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn is_full_cycle(&self) -> bool {
        self.cycle_type().len() == 1
    }
}

/// Image of the braid in the symmetric group: the transpositions `(i, i+1)`
/// of the letters composed in word order.
pub fn permutation(b: &BraidWord) -> Permutation {
    // position[s] = current position of the strand that started at s
    let n = b.strands();
    let mut at: Vec<usize> = (0..n).collect();
    for &g in b.letters() {
        let i = g.unsigned_abs() as usize - 1;
        at.swap(i, i + 1);
    }
    // at[p] = starting strand now sitting at position p; invert to strand -> position
    let mut image = vec![0; n];
    for (pos, &strand) in at.iter().enumerate() {
        image[strand] = pos + 1;
    }
    Permutation { image }
}

pub fn is_knot_closure(b: &BraidWord) -> bool {
    permutation(b).is_full_cycle()
}

/// Fails with [`Error::NotAKnot`] unless the closure has one component.
pub fn require_knot(b: &BraidWord) -> Result<()> {
    let p = permutation(b);
    if p.is_full_cycle() {
        Ok(())
    } else {
        Err(Error::NotAKnot {
            cycle_type: p.cycle_type(),
        })
    }
}

/// Freely reduced word over the generators `x_1..x_n`, stored as
/// `(index, exponent)` syllables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FreeWord {
    syllables: Vec<(usize, i32)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self {
            syllables: vec![(index, 1)],
        }
    }

    pub fn from_syllables<I: IntoIterator<Item = (usize, i32)>>(it: I) -> Self {
        let mut w = Self::identity();
        for (i, e) in it {
            w.push(i, e);
        }
        w
    }

    /// `x_1 x_2 ⋯ x_n`, the boundary word every braid preserves.
    pub fn boundary(n: usize) -> Self {
        Self::from_syllables((1..=n).map(|i| (i, 1)))
    }

    pub fn syllables(&self) -> &[(usize, i32)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.syllables.iter().map(|s| s.0).max().unwrap_or(0)
    }

    fn push(&mut self, index: usize, exp: i32) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == index {
                last.1 += exp;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((index, exp));
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(i, e) in &other.syllables {
            w.push(i, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord::from_syllables(self.syllables.iter().rev().map(|&(i, e)| (i, -e)))
    }

    pub fn pow(&self, e: i32) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    fn substitute<F: Fn(usize) -> FreeWord>(&self, image: F) -> FreeWord {
        let mut out = FreeWord::identity();
        for &(i, e) in &self.syllables {
            out = out.mul(&image(i).pow(e));
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// One generator automorphism: `σ_i: x_i ↦ x_i x_{i+1} x_i^{-1}, x_{i+1} ↦ x_i`.
fn letter_automorphism(g: i32, w: &FreeWord) -> FreeWord {
    let i = g.unsigned_abs() as usize;
    w.substitute(|j| {
        if g > 0 {
            if j == i {
                FreeWord::from_syllables([(i, 1), (i + 1, 1), (i, -1)])
            } else if j == i + 1 {
                FreeWord::generator(i)
            } else {
                FreeWord::generator(j)
            }
        } else if j == i {
            FreeWord::generator(i + 1)
        } else if j == i + 1 {
            FreeWord::from_syllables([(i + 1, -1), (i, 1), (i + 1, 1)])
        } else {
            FreeWord::generator(j)
        }
    })
}

/// Action of the braid on the free group.
///
/// Composition is arranged so that evaluating `free_action(b, x_i)` on a
/// tuple of group elements gives the `i`-th entry of the Hurwitz action of
/// `b` on that tuple (letters applied to the tuple left to right).
pub fn free_action(b: &BraidWord, w: &FreeWord) -> Result<FreeWord> {
    if w.max_index() > b.strands() {
        return Err(Error::GeneratorOutOfRange {
            index: w.max_index(),
            strands: b.strands(),
        });
    }
    let mut out = w.clone();
    for &g in b.letters().iter().rev() {
        out = letter_automorphism(g, &out);
    }
    Ok(out)
}

/// Type I Markov move: the word `ξ^{-1} · b · ξ`, unreduced.
pub fn markov_conjugate(b: &BraidWord, xi: &BraidWord) -> Result<BraidWord> {
    xi.inverse().concat(b)?.concat(xi)
}

/// Type II Markov move: `σ_n^{±1} · b` in `B_{n+1}`.
pub fn markov_stabilize(b: &BraidWord, sign: Sign) -> BraidWord {
    markov_stabilize_on(b, sign, StabilizeSide::Left)
}

pub fn markov_stabilize_on(b: &BraidWord, sign: Sign, side: StabilizeSide) -> BraidWord {
    let n = b.strands();
    let g = sign.as_i32() * n as i32;
    let mut letters = Vec::with_capacity(b.len() + 1);
    match side {
        StabilizeSide::Left => {
            letters.push(g);
            letters.extend_from_slice(b.letters());
        }
        StabilizeSide::Right => {
            letters.extend_from_slice(b.letters());
            letters.push(g);
        }
    }
    BraidWord {
        strands: n + 1,
        letters,
    }
}

/// Result of removing the last strand from a word that uses the last
/// column exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Destabilization {
    /// Letters before the unique last-column letter; conjugating by this
    /// prefix brings that letter to the front.
    pub prefix: BraidWord,
    pub sign: Sign,
    /// The braid on one fewer strand.
    pub reduced: BraidWord,
}

/// Inverse type II move, attempted only when column `n - 1` occurs once.
pub fn destabilize(b: &BraidWord) -> Option<Destabilization> {
    let n = b.strands();
    if n < 2 {
        return None;
    }
    let last = (n - 1) as i32;
    let hits: Vec<usize> = b
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.abs() == last)
        .map(|(k, _)| k)
        .collect();
    if hits.len() != 1 {
        return None;
    }
    let k = hits[0];
    let sign = if b.letters()[k] > 0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    let prefix = BraidWord {
        strands: n,
        letters: b.letters()[..k].to_vec(),
    };
    // cyclic rotation: rest · prefix, all in columns < n - 1
    let mut letters = b.letters()[k + 1..].to_vec();
    letters.extend_from_slice(&b.letters()[..k]);
    Some(Destabilization {
        prefix,
        sign,
        reduced: BraidWord {
            strands: n - 1,
            letters,
        },
    })
}
