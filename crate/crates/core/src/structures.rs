//! Ground structures, elements and principal subgroups.
//!
//! Four structures are modelled: the integers, residues modulo `n`, integer
//! polynomials `Z[x]` and free semigroups over a finite alphabet. Every
//! structure has a canonical enumeration which the greedy constructions use
//! whenever they need to "pick some element".

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordered list of distinct symbols generating a free semigroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<char>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet(symbols))
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn position(&self, c: char) -> Option<usize> {
        self.0.iter().position(|&s| s == c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundStructure {
    Integers,
    Modular(u64),
    Polynomials,
    FreeSemigroup(Alphabet),
}

impl fmt::Display for GroundStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundStructure::Integers => write!(f, "Z"),
            GroundStructure::Modular(n) => write!(f, "Z/{n}Z"),
            GroundStructure::Polynomials => write!(f, "Z[x]"),
            GroundStructure::FreeSemigroup(a) => {
                let s: String = a.symbols().iter().collect();
                write!(f, "F{{{s}}}")
            }
        }
    }
}

/// Dense integer polynomial, lowest degree first, no trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::new(vec![c.into()])
    }

    /// `c * x^degree`
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut v = vec![BigInt::zero(); degree + 1];
        v[degree] = c.into();
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Degree `sum |c_i|`-graded weight used by the canonical enumeration.
    pub fn weight(&self) -> BigInt {
        match self.degree() {
            None => BigInt::zero(),
            Some(d) => self.0.iter().map(|c| c.abs()).sum::<BigInt>() + BigInt::from(d),
        }
    }

    /// Quotient `q` with `self = divisor * q` in `Z[x]`, if one exists.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?;
        let mut rem = self.0.clone();
        let Some(sd) = self.degree() else {
            return Some(Poly::zero());
        };
        if sd < dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for shift in (0..=sd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (k, c) in divisor.0.iter().enumerate() {
                rem[shift + k] -= &q * c;
            }
            quot[shift] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Poly::new(quot))
    }

    /// Remainder of division by a divisor whose leading coefficient is a unit.
    pub fn rem_unit_lead(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?;
        if !lead.abs().is_one() {
            return None;
        }
        let mut rem = self.0.clone();
        while rem.len() > dd {
            let top_idx = rem.len() - 1;
            let top = rem[top_idx].clone();
            if !top.is_zero() {
                let q = &top * lead; // lead is ±1, so top/lead == top*lead
                let shift = top_idx - dd;
                for (k, c) in divisor.0.iter().enumerate() {
                    rem[shift + k] -= &q * c;
                }
            }
            rem.pop();
        }
        Some(Poly::new(rem))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Accepts forms like `2x^3 - x + 1`, `2*x^2`, `-x`, `7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = Poly::zero();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let term = match body.find('x') {
                None => Poly::constant(BigInt::from_str(body).map_err(|_| bad())?),
                Some(pos) => {
                    let coef_part = body[..pos].trim_end_matches('*');
                    let coef = if coef_part.is_empty() {
                        BigInt::one()
                    } else {
                        BigInt::from_str(coef_part).map_err(|_| bad())?
                    };
                    let rest = &body[pos + 1..];
                    let deg = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(bad)?
                    };
                    Poly::monomial(coef, deg)
                }
            };
            acc = acc.add(&term.scale(&BigInt::from(sign)));
        }
        Ok(acc)
    }
}

/// Nonempty word over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(String);

impl Word {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.is_empty() {
            return Err(Error::InvalidParameter("words in a free semigroup are nonempty".into()));
        }
        Ok(Word(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut s = self.0.clone();
        s.push_str(&other.0);
        Word(s)
    }

    pub fn ends_with(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix)
    }

    /// `w` such that `self = prefix · w`, if `w` is nonempty.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0
            .strip_prefix(prefix.as_str())
            .filter(|rest| !rest.is_empty())
            .map(|rest| Word(rest.to_string()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Int(BigInt),
    Residue(u64),
    Poly(Poly),
    Word(Word),
}

impl Element {
    pub fn int(n: impl Into<BigInt>) -> Self {
        Element::Int(n.into())
    }

    pub fn poly(coeffs: &[i64]) -> Self {
        Element::Poly(Poly::from_i64s(coeffs))
    }

    pub fn word(s: &str) -> Result<Self> {
        Word::new(s).map(Element::Word)
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Element::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        match self {
            Element::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Element::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Int(n) => n.is_zero(),
            Element::Residue(r) => *r == 0,
            Element::Poly(p) => p.is_zero(),
            Element::Word(_) => false,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Residue(r) => write!(f, "{r}"),
            Element::Poly(p) => write!(f, "{p}"),
            Element::Word(w) => write!(f, "{w}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Int(n) => match n.to_i64() {
                Some(v) => serializer.serialize_i64(v),
                None => serializer.serialize_str(&n.to_string()),
            },
            Element::Residue(r) => serializer.serialize_u64(*r),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

impl From<i64> for Element {
    fn from(n: i64) -> Self {
        Element::Int(BigInt::from(n))
    }
}

impl From<Poly> for Element {
    fn from(p: Poly) -> Self {
        Element::Poly(p)
    }
}

/// Position of an integer in the order 0, 1, -1, 2, -2, ...
pub fn int_rank(n: &BigInt) -> BigInt {
    if n.is_positive() {
        n * 2 - 1
    } else {
        -n * 2
    }
}

pub fn int_from_rank(rank: u64) -> BigInt {
    if rank % 2 == 1 {
        BigInt::from(rank.div_ceil(2))
    } else {
        -BigInt::from(rank / 2)
    }
}

impl GroundStructure {
    pub fn modular(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("modulus must be >= 2, got {n}")));
        }
        Ok(GroundStructure::Modular(n))
    }

    pub fn free_semigroup(symbols: &str) -> Result<Self> {
        Alphabet::new(symbols.chars()).map(GroundStructure::FreeSemigroup)
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, GroundStructure::FreeSemigroup(_))
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (GroundStructure::Integers, Element::Int(_)) => true,
            (GroundStructure::Modular(n), Element::Residue(r)) => r < n,
            (GroundStructure::Polynomials, Element::Poly(_)) => true,
            (GroundStructure::FreeSemigroup(a), Element::Word(w)) => {
                w.as_str().chars().all(|c| a.position(c).is_some())
            }
            _ => false,
        }
    }

    pub(crate) fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::KindMismatch(format!("{e} is not an element of {self}")))
        }
    }

    fn require_additive(&self) -> Result<()> {
        if self.is_additive() {
            Ok(())
        } else {
            Err(Error::NotAdditive(self.to_string()))
        }
    }

    pub fn zero(&self) -> Result<Element> {
        match self {
            GroundStructure::Integers => Ok(Element::Int(BigInt::zero())),
            GroundStructure::Modular(_) => Ok(Element::Residue(0)),
            GroundStructure::Polynomials => Ok(Element::Poly(Poly::zero())),
            GroundStructure::FreeSemigroup(_) => Err(Error::NotAdditive(self.to_string())),
        }
    }

    pub fn one(&self) -> Result<Element> {
        match self {
            GroundStructure::Integers => Ok(Element::int(1)),
            GroundStructure::Modular(_) => Ok(Element::Residue(1)),
            GroundStructure::Polynomials => Ok(Element::Poly(Poly::constant(1))),
            GroundStructure::FreeSemigroup(_) => Err(Error::Unsupported("free semigroups have no identity".into())),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.require_additive()?;
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (Element::Residue(x), Element::Residue(y)) => {
                let n = self.modulus();
                Element::Residue(((*x as u128 + *y as u128) % n as u128) as u64)
            }
            (Element::Poly(p), Element::Poly(q)) => Element::Poly(p.add(q)),
            _ => unreachable!("checked membership"),
        })
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.require_additive()?;
        self.check(a)?;
        Ok(match a {
            Element::Int(x) => Element::Int(-x),
            Element::Residue(x) => {
                let n = self.modulus();
                Element::Residue(if *x == 0 { 0 } else { n - x })
            }
            Element::Poly(p) => Element::Poly(p.neg()),
            Element::Word(_) => unreachable!("checked additivity"),
        })
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Element::Int(x), Element::Int(y)) => Element::Int(x * y),
            (Element::Residue(x), Element::Residue(y)) => {
                let n = self.modulus();
                Element::Residue(((*x as u128 * *y as u128) % n as u128) as u64)
            }
            (Element::Poly(p), Element::Poly(q)) => Element::Poly(p.mul(q)),
            (Element::Word(u), Element::Word(v)) => Element::Word(u.concat(v)),
            _ => unreachable!("checked membership"),
        })
    }

    /// Unique `q` with `divisor * q == e` (integral domains, and left factors
    /// in free semigroups). `Ok(None)` when no such `q` exists.
    pub fn div_exact(&self, e: &Element, divisor: &Element) -> Result<Option<Element>> {
        self.check(e)?;
        self.check(divisor)?;
        Ok(match (e, divisor) {
            (Element::Int(x), Element::Int(d)) => {
                if d.is_zero() {
                    None
                } else {
                    let (q, r) = x.div_rem(d);
                    r.is_zero().then_some(Element::Int(q))
                }
            }
            (Element::Poly(p), Element::Poly(d)) => p.div_exact(d).map(Element::Poly),
            (Element::Word(w), Element::Word(prefix)) => w.strip_prefix(prefix).map(Element::Word),
            (Element::Residue(_), Element::Residue(_)) => {
                return Err(Error::Unsupported(
                    "Z/nZ is not a domain; quotients are not unique".into(),
                ))
            }
            _ => unreachable!("checked membership"),
        })
    }

    fn modulus(&self) -> u64 {
        match self {
            GroundStructure::Modular(n) => *n,
            _ => unreachable!("modulus of non-modular structure"),
        }
    }

    /// Lazy canonical enumeration (see [`GroundStructure::enumerate`]).
    pub fn canonical_iter(&self) -> CanonicalIter {
        CanonicalIter::new(self.clone())
    }

    /// First `count` elements of the canonical order.
    ///
    /// Integers run 0, 1, -1, 2, -2, ...; residues 0..n-1; words by length,
    /// then lexicographically in alphabet order. Polynomials are graded by
    /// weight `deg + sum |c_i|`, then by degree, then coefficientwise in the
    /// integer order starting from the leading coefficient; each grade is
    /// finite so every polynomial has a finite position.
    pub fn enumerate(&self, count: usize) -> Vec<Element> {
        self.canonical_iter().take(count).collect()
    }

    pub fn canonical_cmp(&self, a: &Element, b: &Element) -> Ordering {
        match (a, b) {
            (Element::Int(x), Element::Int(y)) => int_rank(x).cmp(&int_rank(y)),
            (Element::Residue(x), Element::Residue(y)) => x.cmp(y),
            (Element::Poly(p), Element::Poly(q)) => p
                .weight()
                .cmp(&q.weight())
                .then(p.degree().cmp(&q.degree()))
                .then_with(|| {
                    for (c, d) in p.coeffs().iter().rev().zip(q.coeffs().iter().rev()) {
                        let o = int_rank(c).cmp(&int_rank(d));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    Ordering::Equal
                }),
            (Element::Word(u), Element::Word(v)) => {
                let alpha = match self {
                    GroundStructure::FreeSemigroup(a) => a,
                    _ => return u.cmp(v),
                };
                u.len().cmp(&v.len()).then_with(|| {
                    let key =
                        |w: &Word| -> Vec<Option<usize>> { w.as_str().chars().map(|c| alpha.position(c)).collect() };
                    key(u).cmp(&key(v))
                })
            }
            _ => a.cmp(b),
        }
    }
}

/// Unbounded canonical enumeration of a ground structure.
pub struct CanonicalIter {
    structure: GroundStructure,
    next_rank: u64,
    grade: usize,
    buffer: VecDeque<Element>,
}

impl CanonicalIter {
    fn new(structure: GroundStructure) -> Self {
        CanonicalIter {
            structure,
            next_rank: 0,
            grade: 0,
            buffer: VecDeque::new(),
        }
    }

    fn refill(&mut self) -> bool {
        match &self.structure {
            GroundStructure::Polynomials => {
                let w = self.grade;
                self.grade += 1;
                self.buffer.extend(polys_of_weight(w).into_iter().map(Element::Poly));
                true
            }
            GroundStructure::FreeSemigroup(a) => {
                self.grade += 1;
                let len = self.grade;
                let k = a.len();
                let mut digits = vec![0usize; len];
                loop {
                    let s: String = digits.iter().map(|&d| a.symbols()[d]).collect();
                    self.buffer.push_back(Element::Word(Word(s)));
                    let mut i = len;
                    loop {
                        if i == 0 {
                            return true;
                        }
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < k {
                            break;
                        }
                        digits[i] = 0;
                    }
                }
            }
            _ => false,
        }
    }
}

impl Iterator for CanonicalIter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        match &self.structure {
            GroundStructure::Integers => {
                let r = self.next_rank;
                self.next_rank += 1;
                Some(Element::Int(int_from_rank(r)))
            }
            GroundStructure::Modular(n) => {
                let r = self.next_rank;
                if r >= *n {
                    return None;
                }
                self.next_rank += 1;
                Some(Element::Residue(r))
            }
            _ => {
                while self.buffer.is_empty() {
                    self.refill();
                }
                self.buffer.pop_front()
            }
        }
    }
}

/// All polynomials of weight exactly `w`, in canonical order.
fn polys_of_weight(w: usize) -> Vec<Poly> {
    if w == 0 {
        return vec![Poly::zero()];
    }
    let mut out = Vec::new();
    for degree in 0..w {
        let budget = (w - degree) as i64;
        let mut coeffs = vec![0i64; degree + 1];
        fill_coeffs(degree, degree, budget, &mut coeffs, &mut out);
    }
    out
}

fn fill_coeffs(top: usize, pos: usize, remaining: i64, coeffs: &mut [i64], out: &mut Vec<Poly>) {
    if pos == 0 {
        let choices: &[i64] = if remaining == 0 { &[0] } else { &[remaining, -remaining] };
        for &c in choices {
            if top == 0 && c == 0 {
                continue;
            }
            coeffs[0] = c;
            out.push(Poly::from_i64s(coeffs));
        }
        return;
    }
    // integer order 0, 1, -1, 2, -2, ... bounded by the remaining budget
    for rank in 0..=(2 * remaining) as u64 {
        let c = int_from_rank(rank).to_i64().expect("small coefficient");
        if pos == top && c == 0 {
            continue;
        }
        coeffs[pos] = c;
        fill_coeffs(top, pos - 1, remaining - c.abs(), coeffs, out);
    }
    coeffs[pos] = 0;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Additive,
    MultiplicativeDilation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Finite(u64),
    Infinite,
}

/// Identifier of an additive coset `g + H`.
///
/// `Exact` labels are canonical representatives and compare by equality.
/// `Representative` labels are the raw element; compare them with
/// [`SubgroupSpec::labels_match`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CosetLabel {
    Exact(Element),
    Representative(Element),
}

impl CosetLabel {
    pub fn element(&self) -> &Element {
        match self {
            CosetLabel::Exact(e) | CosetLabel::Representative(e) => e,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CosetLabel::Exact(_))
    }
}

/// How the ideal `generator * R` is recognized and labelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum IdealShape {
    Zero,
    IntMultiples(BigInt),
    ResidueMultiples(u64),
    PolyWhole,
    PolyConstant(BigInt),
    PolyUnitLead(Poly),
    PolyGeneral(Poly),
}

/// Principal ideal `generator * R` of an additive ground structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    structure: GroundStructure,
    generator: Element,
    direction: Direction,
    shape: IdealShape,
}

impl SubgroupSpec {
    pub fn new(structure: GroundStructure, generator: Element, direction: Direction) -> Result<Self> {
        structure.require_additive()?;
        structure.check(&generator)?;
        let shape = match (&structure, &generator) {
            (GroundStructure::Integers, Element::Int(k)) => {
                if k.is_zero() {
                    IdealShape::Zero
                } else {
                    IdealShape::IntMultiples(k.abs())
                }
            }
            (GroundStructure::Modular(n), Element::Residue(a)) => {
                let d = a.gcd(n);
                if d == *n {
                    IdealShape::Zero
                } else {
                    IdealShape::ResidueMultiples(d)
                }
            }
            (GroundStructure::Polynomials, Element::Poly(p)) => match p.degree() {
                None => IdealShape::Zero,
                Some(0) if p.coeff(0).abs().is_one() => IdealShape::PolyWhole,
                Some(0) => IdealShape::PolyConstant(p.coeff(0).abs()),
                Some(_) if p.leading().is_some_and(|c| c.abs().is_one()) => IdealShape::PolyUnitLead(p.clone()),
                Some(_) => IdealShape::PolyGeneral(p.clone()),
            },
            _ => unreachable!("checked membership"),
        };
        Ok(SubgroupSpec {
            structure,
            generator,
            direction,
            shape,
        })
    }

    /// `k Z`
    pub fn int_multiples(k: i64) -> Result<Self> {
        SubgroupSpec::new(GroundStructure::Integers, Element::int(k), Direction::Additive)
    }

    /// `alpha Z[x]`
    pub fn poly_multiples(alpha: Poly) -> Result<Self> {
        SubgroupSpec::new(GroundStructure::Polynomials, Element::Poly(alpha), Direction::Additive)
    }

    pub fn structure(&self) -> &GroundStructure {
        &self.structure
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_trivial(&self) -> bool {
        self.shape == IdealShape::Zero
    }

    pub fn contains(&self, g: &Element) -> Result<bool> {
        self.structure.check(g)?;
        Ok(match (&self.shape, g) {
            (IdealShape::Zero, _) => g.is_zero(),
            (IdealShape::IntMultiples(k), Element::Int(n)) => n.is_multiple_of(k),
            (IdealShape::ResidueMultiples(d), Element::Residue(r)) => r % d == 0,
            (IdealShape::PolyWhole, _) => true,
            (IdealShape::PolyConstant(k), Element::Poly(p)) => p.coeffs().iter().all(|c| c.is_multiple_of(k)),
            (IdealShape::PolyUnitLead(a), Element::Poly(p)) => {
                p.rem_unit_lead(a).expect("unit leading coefficient").is_zero()
            }
            (IdealShape::PolyGeneral(a), Element::Poly(p)) => p.div_exact(a).is_some(),
            _ => unreachable!("checked membership"),
        })
    }

    pub fn coset_label(&self, g: &Element) -> Result<CosetLabel> {
        self.structure.check(g)?;
        Ok(match (&self.shape, g) {
            (IdealShape::Zero, _) => return Err(Error::TrivialSubgroup),
            (IdealShape::IntMultiples(k), Element::Int(n)) => CosetLabel::Exact(Element::Int(n.mod_floor(k))),
            (IdealShape::ResidueMultiples(d), Element::Residue(r)) => CosetLabel::Exact(Element::Residue(r % d)),
            (IdealShape::PolyWhole, _) => CosetLabel::Exact(Element::Poly(Poly::zero())),
            (IdealShape::PolyConstant(k), Element::Poly(p)) => CosetLabel::Exact(Element::Poly(Poly::new(
                p.coeffs().iter().map(|c| c.mod_floor(k)).collect(),
            ))),
            (IdealShape::PolyUnitLead(a), Element::Poly(p)) => {
                CosetLabel::Exact(Element::Poly(p.rem_unit_lead(a).expect("unit lead")))
            }
            (IdealShape::PolyGeneral(_), _) => CosetLabel::Representative(g.clone()),
            _ => unreachable!("checked membership"),
        })
    }

    pub fn labels_match(&self, a: &CosetLabel, b: &CosetLabel) -> Result<bool> {
        match (a, b) {
            (CosetLabel::Exact(x), CosetLabel::Exact(y)) => Ok(x == y),
            _ => self.contains(&self.structure.sub(a.element(), b.element())?),
        }
    }

    pub fn same_coset(&self, a: &Element, b: &Element) -> Result<bool> {
        if self.is_trivial() {
            return Err(Error::TrivialSubgroup);
        }
        self.contains(&self.structure.sub(a, b)?)
    }

    pub fn index(&self) -> Result<Index> {
        Ok(match &self.shape {
            IdealShape::Zero => return Err(Error::TrivialSubgroup),
            IdealShape::IntMultiples(k) => Index::Finite(
                k.to_u64()
                    .ok_or_else(|| Error::Unsupported(format!("index {k} exceeds 64 bits")))?,
            ),
            IdealShape::ResidueMultiples(d) => Index::Finite(*d),
            IdealShape::PolyWhole => Index::Finite(1),
            IdealShape::PolyConstant(_) | IdealShape::PolyUnitLead(_) | IdealShape::PolyGeneral(_) => Index::Infinite,
        })
    }

    pub fn describe(&self) -> String {
        match &self.generator {
            Element::Poly(p)
                if p.degree().unwrap_or(0) > 0 && p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 =>
            {
                format!("({p}){}", self.structure)
            }
            g => format!("{g}{}", self.structure),
        }
    }
}

/// Sorted nonempty set of 1-based sequence positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.is_empty() || positions[0] == 0 {
            return Err(Error::InvalidParameter(
                "index sets are nonempty sets of positive positions".into(),
            ));
        }
        Ok(IndexSet(positions))
    }

    /// Bit `i` of `mask` selects position `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        assert!(mask != 0, "empty mask");
        IndexSet((0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &p| m | 1 << (p - 1))
    }

    pub fn contiguous(start: usize, end: usize) -> Result<Self> {
        IndexSet::new((start..=end).collect())
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("nonempty")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Finite sequence `x_1, ..., x_m` over a structure; repeats are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteSequence {
    #[serde(skip)]
    structure: GroundStructure,
    terms: Vec<Element>,
}

impl FiniteSequence {
    pub fn new(structure: GroundStructure, terms: Vec<Element>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("sequences have at least one term".into()));
        }
        for t in &terms {
            structure.check(t)?;
        }
        Ok(FiniteSequence { structure, terms })
    }

    pub fn ints(terms: &[i64]) -> Result<Self> {
        FiniteSequence::new(
            GroundStructure::Integers,
            terms.iter().map(|&t| Element::int(t)).collect(),
        )
    }

    pub fn structure(&self) -> &GroundStructure {
        &self.structure
    }

    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// 1-based term access.
    pub fn term(&self, position: usize) -> &Element {
        &self.terms[position - 1]
    }

    pub fn sum_over(&self, h: &IndexSet) -> Result<Element> {
        let mut acc = self.structure.zero()?;
        for &p in h.positions() {
            acc = self.structure.add(&acc, self.term(p))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for FiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
