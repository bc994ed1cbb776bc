//! Permutations on `{0, .., n-1}` with a right action.
//!
//! Products are read left to right: `p.compose(&q)` applies `p` first and
//! then `q`, so `(5 4 3 2 1)(2 4 3 5 1) = (5 3 4)`. Conjugation `c g c^-1`
//! is the word `c`, then `g`, then `c^-1`. Cycle notation is 1-based.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images)
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} exceeds degree {degree}",
                        a + 1
                    )));
                }
                if touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} repeated in cycle notation",
                        a + 1
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"`. Commas are
    /// accepted as separators and `"()"` is the identity.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        Self::from_cycles(degree, &cycles)
    }

    /// Parses cycle notation, taking the degree to be the largest point named.
    pub fn parse_auto(s: &str) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        let degree = cycles.iter().flatten().map(|&a| a + 1).max().unwrap_or(0);
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`: the result sends `x` to `other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked form of [`compose`](Self::compose).
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// The word `c · self · c^-1`.
    pub fn conjugate(&self, c: &Permutation) -> Result<Permutation> {
        if self.degree() != c.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: c.degree(),
            });
        }
        Ok(c.then(self).then(&c.inverse()))
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles (0-based), each starting at its least point, including fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in nonincreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Degree minus number of orbits.
    pub fn index(&self) -> usize {
        self.degree() - self.cycles().len()
    }

    pub fn is_even(&self) -> bool {
        self.index().is_multiple_of(2)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    /// 1-based cycle notation, omitting fixed points.
    pub fn to_cycle_string(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            s.push('(');
            let parts: Vec<String> = cycle.iter().map(|a| (a + 1).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.to_cycle_string(), self.degree())
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut number = String::new();
    let flush = |number: &mut String, current: &mut Option<Vec<usize>>| -> Result<()> {
        if number.is_empty() {
            return Ok(());
        }
        let v: usize = number
            .parse()
            .map_err(|_| Error::Parse(format!("bad point '{number}'")))?;
        if v == 0 {
            return Err(Error::Parse("points are 1-based".into()));
        }
        match current {
            Some(c) => c.push(v - 1),
            None => return Err(Error::Parse(format!("point {v} outside parentheses"))),
        }
        number.clear();
        Ok(())
    };
    for ch in s.chars() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(Error::Parse("nested '('".into()));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut number, &mut current)?;
                match current.take() {
                    Some(c) => {
                        if !c.is_empty() {
                            cycles.push(c);
                        }
                    }
                    None => return Err(Error::Parse("unbalanced ')'".into())),
                }
            }
            d if d.is_ascii_digit() => number.push(d),
            c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current)?,
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    if current.is_some() {
        return Err(Error::Parse("unterminated cycle".into()));
    }
    if !number.is_empty() {
        return Err(Error::Parse("trailing characters".into()));
    }
    if cycles.is_empty() && !s.contains('(') {
        return Err(Error::Parse(format!("no cycles in '{s}'")));
    }
    Ok(cycles)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// True when `n` is a (possibly trivial) power of `p`.
pub fn is_power_of(n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Checks the left-to-right composition convention against the reference
/// product `(5 4 3 2 1)(2 4 3 5 1) = (5 3 4)`.
pub fn convention_self_test() -> Result<()> {
    let a = Permutation::parse("(5 4 3 2 1)", 5)?;
    let b = Permutation::parse("(2 4 3 5 1)", 5)?;
    let expected = Permutation::parse("(5 3 4)", 5)?;
    if a.compose(&b)? != expected {
        return Err(Error::BadParameters("composition convention self-test failed".into()));
    }
    Ok(())
}
