//! Permutations of `[n]` in one-line notation, transposition generators and
//! Lehmer-code ranking.
//!
//! Points are 1-based. Composition follows `(στ)(i) = σ(τ(i))`, so right
//! multiplication by a transposition `(i j)` swaps the entries at positions
//! `i` and `j` of the one-line form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PermError;

/// Largest degree accepted anywhere in the crate (8! = 40320 vertices).
pub const MAX_DEGREE: usize = 8;

/// Smallest degree accepted for any permutation.
pub const MIN_DEGREE: usize = 3;

/// A permutation stored as its images `σ(1), …, σ(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

fn check_degree(n: usize) -> Result<(), PermError> {
    if n < MIN_DEGREE {
        return Err(PermError::DegreeTooSmall(n));
    }
    if n > MAX_DEGREE {
        return Err(PermError::DegreeTooLarge(n));
    }
    Ok(())
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self, PermError> {
        check_degree(n)?;
        Ok(Permutation {
            images: (1..=n as u8).collect(),
        })
    }

    /// Builds a permutation from its one-line images, rejecting anything
    /// that is not a bijection on `[n]`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n + 1];
        for &v in images {
            if v == 0 || v > n {
                return Err(PermError::ImageOutOfRange { value: v, degree: n });
            }
            if seen[v] {
                return Err(PermError::DuplicateImage(v));
            }
            seen[v] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&v| v as u8).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for a 1-based point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `(self · other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other
                .images
                .iter()
                .map(|&t| self.images[t as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation { images: inv }
    }

    /// Right multiplication by a transposition: the neighbour of `self`
    /// along the edge labelled `t`.
    pub fn apply(&self, t: Transposition) -> Result<Permutation, PermError> {
        if t.j() > self.degree() {
            return Err(PermError::TranspositionOutOfRange {
                i: t.i(),
                j: t.j(),
                degree: self.degree(),
            });
        }
        let mut images = self.images.clone();
        images.swap(t.i() - 1, t.j() - 1);
        Ok(Permutation { images })
    }

    /// Lexicographic rank via the Lehmer code; the identity has rank 0.
    pub fn rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller_after = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            rank = rank * (n - i) + smaller_after;
        }
        rank
    }

    pub fn unrank(rank: usize, n: usize) -> Result<Permutation, PermError> {
        check_degree(n)?;
        let total = factorial(n);
        if rank >= total {
            return Err(PermError::RankOutOfRange { rank, degree: n });
        }
        let mut digits = vec![0usize; n];
        let mut r = rank;
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = r % base;
            r /= base;
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Permutation { images })
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PermError::Syntax(s.to_string()))?;
        let images = body
            .split(',')
            .map(|tok| tok.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PermError::Syntax(s.to_string()))?;
        Permutation::from_images(&images)
    }
}

impl Permutation {
    /// Parses one-line form `[2,3,1,4]`, the identity `e`, or cycle
    /// notation such as `(1 2 3)(4 5)`, at degree `n`.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Permutation, PermError> {
        let t = s.trim();
        if t.starts_with('[') {
            let p: Permutation = t.parse()?;
            if p.degree() != n {
                return Err(PermError::DegreeMismatch(p.degree(), n));
            }
            return Ok(p);
        }
        if t == "e" || t == "id" || t == "()" {
            return Permutation::identity(n);
        }
        if !t.starts_with('(') {
            return Err(PermError::Syntax(s.to_string()));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        for cycle in t.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let body = cycle.strip_prefix('(').ok_or_else(|| PermError::Syntax(s.to_string()))?;
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().map_err(|_| PermError::Syntax(s.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if pts.iter().any(|&x| x == 0 || x > n) {
                return Err(PermError::Syntax(s.to_string()));
            }
            // Cycles compose right to left.
            let mut cyc: Vec<usize> = (1..=n).collect();
            for (i, &x) in pts.iter().enumerate() {
                cyc[x - 1] = pts[(i + 1) % pts.len()];
            }
            let before = images.clone();
            for i in 0..n {
                images[i] = before[cyc[i] - 1];
            }
        }
        Permutation::from_images(&images)
    }
}

/// A transposition `(i j)` with `1 <= i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transposition {
    i: u8,
    j: u8,
}

impl Transposition {
    pub fn new(i: usize, j: usize) -> Result<Self, PermError> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        if lo == hi || lo == 0 || hi > MAX_DEGREE {
            return Err(PermError::InvalidTransposition { i, j });
        }
        Ok(Transposition {
            i: lo as u8,
            j: hi as u8,
        })
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    /// The transposition as a permutation of degree `n`.
    pub fn to_permutation(self, n: usize) -> Result<Permutation, PermError> {
        Permutation::identity(n)?.apply(self)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.i, self.j)
    }
}

impl FromStr for Transposition {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| PermError::Syntax(s.to_string()))?;
        let pts: Vec<usize> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| PermError::Syntax(s.to_string()))?;
        match pts.as_slice() {
            [i, j] => Transposition::new(*i, *j),
            _ => Err(PermError::Syntax(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Star transpositions `(1 j)` plus adjacent transpositions `(j j+1)`, `j >= 2`.
    BubbleSortStar,
    /// The bubble-sort star generators plus `(2 n)`: the edges of the wheel on `[n]`.
    Wheel,
}

impl Family {
    pub fn min_degree(self) -> usize {
        match self {
            Family::BubbleSortStar => 3,
            Family::Wheel => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::BubbleSortStar => "bubble-sort-star",
            Family::Wheel => "wheel",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wheel" | "cw" => Ok(Family::Wheel),
            "bubble-sort-star" | "bss" | "bs" => Ok(Family::BubbleSortStar),
            other => Err(PermError::UnknownFamily(other.to_string())),
        }
    }
}

/// Ordered generating set of a Cayley graph on `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    family: Family,
    n: usize,
    members: Vec<Transposition>,
}

impl GeneratorSet {
    pub fn new(family: Family, n: usize) -> Result<Self, PermError> {
        check_degree(n)?;
        if n < family.min_degree() {
            return Err(PermError::FamilyDegree { family, degree: n });
        }
        let mut members = Vec::with_capacity(2 * n - 2);
        for j in 2..=n {
            members.push(Transposition::new(1, j)?);
        }
        for j in 2..n {
            members.push(Transposition::new(j, j + 1)?);
        }
        if family == Family::Wheel {
            members.push(Transposition::new(2, n)?);
        }
        Ok(GeneratorSet { family, n, members })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Transposition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
