//! Membership oracles, finite sums/products, and window-scale largeness checks.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::sieve::PrimeSieve;
use crate::structures::{Element, FiniteSequence, GroundStructure, IndexSet, SubgroupSpec};

/// Longest sequence accepted by the finite-sums enumerators.
pub const MAX_FS_LEN: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSet {
    structure: GroundStructure,
    elements: BTreeSet<Element>,
}

/// Which differences `s - t` a difference set realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DifferenceSign {
    Signed,
    /// Only `s > t`, as in the definition of a Delta_r set.
    Positive,
}

#[derive(Debug)]
enum DiffRepr {
    /// `A - A = A` for a subgroup.
    Subgroup(SubgroupSpec),
    /// Bit `d` set iff `d` or `-d` is a realized difference, `0 <= d <= bound`.
    Table(Vec<bool>),
}

#[derive(Debug)]
pub struct DifferenceSet {
    inner: SetSpec,
    bound: u64,
    sign: DifferenceSign,
    repr: DiffRepr,
}

#[derive(Debug)]
enum ProductRepr {
    Divisors,
    Table(HashSet<Element>),
}

#[derive(Debug)]
pub struct ProductSet {
    left: SetSpec,
    right: SetSpec,
    bound: u64,
    repr: ProductRepr,
}

/// Composable membership oracle with a declared evaluable support.
///
/// Queries outside the support return [`Error::SupportExceeded`] rather
/// than `false`.
#[derive(Clone, Debug)]
pub enum SetSpec {
    Explicit(Arc<ExplicitSet>),
    Ideal(SubgroupSpec),
    /// Primes up to the sieve limit; integers above the limit are outside the support.
    Primes(Arc<PrimeSieve>),
    /// Integers in `[lo, hi]`, either side optionally unbounded.
    Interval {
        lo: Option<BigInt>,
        hi: Option<BigInt>,
    },
    Difference(Arc<DifferenceSet>),
    Product(Arc<ProductSet>),
    /// `factor * inner`
    Dilation {
        factor: Element,
        inner: Box<SetSpec>,
    },
    /// `universe \ inner`; the whole structure when `universe` is `None`.
    Complement {
        inner: Box<SetSpec>,
        universe: Option<Arc<BTreeSet<Element>>>,
    },
    Union(Vec<SetSpec>),
    Intersection(Vec<SetSpec>),
}

impl SetSpec {
    pub fn explicit(structure: GroundStructure, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let elements: BTreeSet<Element> = elements.into_iter().collect();
        for e in &elements {
            structure.check(e)?;
        }
        Ok(SetSpec::Explicit(Arc::new(ExplicitSet { structure, elements })))
    }

    pub fn ints(values: impl IntoIterator<Item = i64>) -> Self {
        SetSpec::explicit(GroundStructure::Integers, values.into_iter().map(Element::int)).expect("integers")
    }

    pub fn ideal(h: SubgroupSpec) -> Self {
        SetSpec::Ideal(h)
    }

    /// `k Z`
    pub fn multiples(k: i64) -> Result<Self> {
        SubgroupSpec::int_multiples(k).map(SetSpec::Ideal)
    }

    /// The whole of `Z`.
    pub fn all_integers() -> Self {
        SetSpec::multiples(1).expect("1 Z")
    }

    pub fn primes(sieve: Arc<PrimeSieve>) -> Self {
        SetSpec::Primes(sieve)
    }

    pub fn interval(lo: Option<i64>, hi: Option<i64>) -> Self {
        SetSpec::Interval {
            lo: lo.map(BigInt::from),
            hi: hi.map(BigInt::from),
        }
    }

    pub fn dilation(factor: Element, inner: SetSpec) -> Result<Self> {
        inner.structure().check(&factor)?;
        Ok(SetSpec::Dilation {
            factor,
            inner: Box::new(inner),
        })
    }

    pub fn complement(inner: SetSpec, universe: Option<Vec<Element>>) -> Result<Self> {
        let universe = match universe {
            Some(u) => {
                for e in &u {
                    inner.structure().check(e)?;
                }
                Some(Arc::new(u.into_iter().collect()))
            }
            None => None,
        };
        Ok(SetSpec::Complement {
            inner: Box::new(inner),
            universe,
        })
    }

    pub fn union(parts: Vec<SetSpec>) -> Result<Self> {
        Self::check_same_structure(&parts)?;
        Ok(SetSpec::Union(parts))
    }

    pub fn intersection(parts: Vec<SetSpec>) -> Result<Self> {
        Self::check_same_structure(&parts)?;
        Ok(SetSpec::Intersection(parts))
    }

    fn check_same_structure(parts: &[SetSpec]) -> Result<()> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty union/intersection".into()))?;
        for p in parts {
            if p.structure() != first.structure() {
                return Err(Error::KindMismatch(format!(
                    "{} and {} live in different structures",
                    first, p
                )));
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> GroundStructure {
        match self {
            SetSpec::Explicit(e) => e.structure.clone(),
            SetSpec::Ideal(h) => h.structure().clone(),
            SetSpec::Primes(_) | SetSpec::Interval { .. } => GroundStructure::Integers,
            SetSpec::Difference(d) => d.inner.structure(),
            SetSpec::Product(p) => p.left.structure(),
            SetSpec::Dilation { inner, .. } | SetSpec::Complement { inner, .. } => inner.structure(),
            SetSpec::Union(v) | SetSpec::Intersection(v) => v[0].structure(),
        }
    }

    fn outside(&self, e: &Element) -> Error {
        Error::SupportExceeded {
            set: self.to_string(),
            element: e.to_string(),
        }
    }

    pub fn contains(&self, e: &Element) -> Result<bool> {
        match self {
            SetSpec::Explicit(x) => {
                x.structure.check(e)?;
                Ok(x.elements.contains(e))
            }
            SetSpec::Ideal(h) => h.contains(e),
            SetSpec::Primes(sieve) => {
                let n = int_of(e)?;
                if n > &BigInt::from(sieve.limit()) {
                    return Err(self.outside(e));
                }
                Ok(n.to_u64().and_then(|v| sieve.is_prime(v)).unwrap_or(false))
            }
            SetSpec::Interval { lo, hi } => {
                let n = int_of(e)?;
                Ok(lo.as_ref().is_none_or(|l| n >= l) && hi.as_ref().is_none_or(|h| n <= h))
            }
            SetSpec::Difference(d) => d.contains(e).map_err(|err| match err {
                Error::SupportExceeded { .. } => self.outside(e),
                other => other,
            }),
            SetSpec::Product(p) => p.contains(e, self),
            SetSpec::Dilation { factor, inner } => {
                let s = inner.structure();
                s.check(e)?;
                if factor.is_zero() {
                    return Ok(e.is_zero() && inner.is_nonempty()?);
                }
                match s {
                    GroundStructure::Modular(n) => {
                        for a in 0..n {
                            let a = Element::Residue(a);
                            if s.mul(factor, &a)? == *e && inner.contains(&a)? {
                                return Ok(true);
                            }
                        }
                        Ok(false)
                    }
                    _ => match s.div_exact(e, factor)? {
                        Some(q) => inner.contains(&q),
                        None => Ok(false),
                    },
                }
            }
            SetSpec::Complement { inner, universe } => {
                if let Some(u) = universe {
                    if !u.contains(e) {
                        self.structure().check(e)?;
                        return Ok(false);
                    }
                }
                Ok(!inner.contains(e)?)
            }
            SetSpec::Union(parts) => {
                let mut deferred = None;
                for p in parts {
                    match p.contains(e) {
                        Ok(true) => return Ok(true),
                        Ok(false) => {}
                        Err(err) => {
                            deferred.get_or_insert(err);
                        }
                    }
                }
                deferred.map_or(Ok(false), Err)
            }
            SetSpec::Intersection(parts) => {
                let mut deferred = None;
                for p in parts {
                    match p.contains(e) {
                        Ok(false) => return Ok(false),
                        Ok(true) => {}
                        Err(err) => {
                            deferred.get_or_insert(err);
                        }
                    }
                }
                deferred.map_or(Ok(true), Err)
            }
        }
    }

    pub fn is_nonempty(&self) -> Result<bool> {
        match self {
            SetSpec::Explicit(x) => Ok(!x.elements.is_empty()),
            SetSpec::Ideal(_) => Ok(true),
            SetSpec::Primes(s) => Ok(s.limit() >= 2),
            SetSpec::Interval { lo, hi } => Ok(match (lo, hi) {
                (Some(l), Some(h)) => l <= h,
                _ => true,
            }),
            SetSpec::Difference(d) => d.inner.is_nonempty(),
            SetSpec::Product(p) => Ok(p.left.is_nonempty()? && p.right.is_nonempty()?),
            SetSpec::Dilation { inner, .. } => inner.is_nonempty(),
            SetSpec::Union(parts) => {
                for p in parts {
                    if p.is_nonempty()? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            _ => match self.finite_members()? {
                Some(m) => Ok(!m.is_empty()),
                None => Err(Error::Unsupported(format!("emptiness of {self} is not decidable here"))),
            },
        }
    }

    /// Every member, when the set is finite and enumerable.
    pub fn finite_members(&self) -> Result<Option<Vec<Element>>> {
        Ok(match self {
            SetSpec::Explicit(x) => Some(x.elements.iter().cloned().collect()),
            SetSpec::Primes(s) => Some(s.primes().map(|p| Element::int(p as i64)).collect()),
            SetSpec::Interval {
                lo: Some(l),
                hi: Some(h),
            } => {
                let (l, h) = (
                    l.to_i64().ok_or_else(|| Error::Unsupported("huge interval".into()))?,
                    h.to_i64().ok_or_else(|| Error::Unsupported("huge interval".into()))?,
                );
                Some((l..=h).map(Element::int).collect())
            }
            SetSpec::Difference(d) => d.members(),
            SetSpec::Complement { universe: Some(u), .. } => {
                let mut out = Vec::new();
                for e in u.iter() {
                    if self.contains(e)? {
                        out.push(e.clone());
                    }
                }
                Some(out)
            }
            SetSpec::Dilation { factor, inner } => match inner.finite_members()? {
                Some(m) => {
                    let s = inner.structure();
                    let mut out = BTreeSet::new();
                    for a in m {
                        out.insert(s.mul(factor, &a)?);
                    }
                    Some(out.into_iter().collect())
                }
                None => None,
            },
            SetSpec::Union(parts) => {
                let mut out = BTreeSet::new();
                for p in parts {
                    match p.finite_members()? {
                        Some(m) => out.extend(m),
                        None => return Ok(None),
                    }
                }
                Some(out.into_iter().collect())
            }
            SetSpec::Intersection(parts) => {
                let Some(base) = parts.iter().find_map(|p| p.finite_members().ok().flatten()) else {
                    return Ok(None);
                };
                let mut out = Vec::new();
                for e in base {
                    if self.contains(&e)? {
                        out.push(e);
                    }
                }
                Some(out)
            }
            _ => None,
        })
    }

    /// Members of `window`, in window order.
    pub fn members_in(&self, window: &[Element]) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for e in window {
            if self.contains(e)? {
                out.push(e.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Explicit(x) => {
                let shown: Vec<String> = x.elements.iter().take(8).map(|e| e.to_string()).collect();
                let more = if x.elements.len() > 8 { ", ..." } else { "" };
                write!(f, "{{{}{more}}}", shown.join(", "))
            }
            SetSpec::Ideal(h) => write!(f, "{}", h.describe()),
            SetSpec::Primes(s) => write!(f, "P(<={})", s.limit()),
            SetSpec::Interval { lo, hi } => {
                let l = lo.as_ref().map_or("-inf".to_string(), |v| v.to_string());
                let h = hi.as_ref().map_or("inf".to_string(), |v| v.to_string());
                write!(f, "[{l}..{h}]")
            }
            SetSpec::Difference(d) => write!(f, "({})-({})|<={}", d.inner, d.inner, d.bound),
            SetSpec::Product(p) => write!(f, "({})({})|<={}", p.left, p.right, p.bound),
            SetSpec::Dilation { factor, inner } => write!(f, "{factor}*({inner})"),
            SetSpec::Complement { inner, universe } => match universe {
                None => write!(f, "{} \\ ({inner})", inner.structure()),
                Some(u) => write!(f, "window[{}] \\ ({inner})", u.len()),
            },
            SetSpec::Union(v) => {
                let parts: Vec<String> = v.iter().map(|p| format!("({p})")).collect();
                write!(f, "{}", parts.join(" u "))
            }
            SetSpec::Intersection(v) => {
                let parts: Vec<String> = v.iter().map(|p| format!("({p})")).collect();
                write!(f, "{}", parts.join(" n "))
            }
        }
    }
}

fn int_of(e: &Element) -> Result<&BigInt> {
    e.as_int()
        .ok_or_else(|| Error::KindMismatch(format!("{e} is not an integer")))
}

impl DifferenceSet {
    fn build(inner: SetSpec, bound: u64, sign: DifferenceSign, exec: Exec) -> Result<Self> {
        let repr = match &inner {
            SetSpec::Ideal(h) => DiffRepr::Subgroup(h.clone()),
            SetSpec::Primes(sieve) => DiffRepr::Table(prime_difference_table(sieve, bound, exec)),
            other => {
                if other.structure() != GroundStructure::Integers {
                    return Err(Error::Unsupported(format!(
                        "difference sets of {other} (only integers or subgroups)"
                    )));
                }
                let Some(members) = other.finite_members()? else {
                    return Err(Error::Unsupported(format!(
                        "difference set of {other}: members are not enumerable"
                    )));
                };
                let mut ints: Vec<i128> = Vec::with_capacity(members.len());
                for m in &members {
                    ints.push(
                        int_of(m)?
                            .to_i128()
                            .ok_or_else(|| Error::Unsupported("member exceeds 128 bits".into()))?,
                    );
                }
                let mut table = vec![false; bound as usize + 1];
                for &s in &ints {
                    for &t in &ints {
                        let d = (s - t).unsigned_abs();
                        if d <= bound as u128 {
                            table[d as usize] = true;
                        }
                    }
                }
                DiffRepr::Table(table)
            }
        };
        Ok(DifferenceSet {
            inner,
            bound,
            sign,
            repr,
        })
    }

    fn contains(&self, e: &Element) -> Result<bool> {
        if let DiffRepr::Subgroup(h) = &self.repr {
            if let Some(n) = e.as_int() {
                if n.abs() > BigInt::from(self.bound) {
                    return Err(Error::SupportExceeded {
                        set: String::new(),
                        element: e.to_string(),
                    });
                }
                if self.sign == DifferenceSign::Positive && !n.is_positive() {
                    return Ok(false);
                }
            }
            return h.contains(e);
        }
        let n = int_of(e)?;
        if n.abs() > BigInt::from(self.bound) {
            return Err(Error::SupportExceeded {
                set: String::new(),
                element: e.to_string(),
            });
        }
        if self.sign == DifferenceSign::Positive && !n.is_positive() {
            return Ok(false);
        }
        let DiffRepr::Table(t) = &self.repr else { unreachable!() };
        Ok(t[n.abs().to_usize().expect("bounded")])
    }

    fn members(&self) -> Option<Vec<Element>> {
        let DiffRepr::Table(t) = &self.repr else {
            return None;
        };
        let mut out: Vec<i64> = Vec::new();
        for (d, &hit) in t.iter().enumerate() {
            if hit {
                out.push(d as i64);
                if d > 0 && self.sign == DifferenceSign::Signed {
                    out.push(-(d as i64));
                }
            }
        }
        if self.sign == DifferenceSign::Positive {
            out.retain(|&d| d > 0);
        }
        out.sort_unstable();
        Some(out.into_iter().map(Element::int).collect())
    }
}

/// `table[d]` iff some primes `p, p + d <= limit` exist.
fn prime_difference_table(sieve: &PrimeSieve, bound: u64, exec: Exec) -> Vec<bool> {
    let limit = sieve.limit();
    let primes: Vec<u64> = sieve.primes().collect();
    par::map_range(exec, bound as usize + 1, |d| {
        let d = d as u64;
        if d == 0 {
            return !primes.is_empty();
        }
        if d % 2 == 1 {
            // an odd gap needs the even prime
            return d + 2 <= limit && sieve.is_prime(d + 2) == Some(true);
        }
        primes
            .iter()
            .take_while(|&&p| p + d <= limit)
            .any(|&p| sieve.is_prime(p + d) == Some(true))
    })
}

impl ProductSet {
    fn contains(&self, e: &Element, outer: &SetSpec) -> Result<bool> {
        match &self.repr {
            ProductRepr::Table(t) => {
                self.left.structure().check(e)?;
                Ok(t.contains(e))
            }
            ProductRepr::Divisors => {
                let n = int_of(e)?;
                if n.abs() > BigInt::from(self.bound) {
                    return Err(outer.outside(e));
                }
                if n.is_zero() {
                    let zero = Element::int(0);
                    return Ok((self.left.contains(&zero)? && self.right.is_nonempty()?)
                        || (self.right.contains(&zero)? && self.left.is_nonempty()?));
                }
                let m = n.abs().to_u64().expect("bounded by u64");
                let mut d = 1u64;
                while d * d <= m {
                    if m % d == 0 {
                        for f in [d, m / d] {
                            for sign in [1i64, -1] {
                                let left = BigInt::from(f) * sign;
                                let right = n / &left;
                                if self.left.contains(&Element::Int(left))?
                                    && self.right.contains(&Element::Int(right))?
                                {
                                    return Ok(true);
                                }
                            }
                        }
                    }
                    d += 1;
                }
                Ok(false)
            }
        }
    }
}

/// Finite sums of a sequence keyed by index set, in binary-counter order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsTable {
    entries: Vec<(IndexSet, Element)>,
}

impl FsTable {
    pub fn entries(&self) -> &[(IndexSet, Element)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, h: &IndexSet) -> Option<&Element> {
        self.entries.get(h.to_mask() as usize - 1).map(|(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = &Element> {
        self.entries.iter().map(|(_, v)| v)
    }
}

fn check_fs_len(len: usize) -> Result<()> {
    if len > MAX_FS_LEN {
        return Err(Error::LengthGuard { len, max: MAX_FS_LEN });
    }
    Ok(())
}

/// Subset sums indexed by `mask - 1`, bit `i` selecting `terms[i]`.
pub(crate) fn fs_values(s: &GroundStructure, terms: &[Element]) -> Result<Vec<Element>> {
    check_fs_len(terms.len())?;
    let n = 1usize << terms.len();
    let mut out: Vec<Element> = Vec::with_capacity(n - 1);
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let v = if rest == 0 {
            terms[low].clone()
        } else {
            s.add(&out[rest - 1], &terms[low])?
        };
        out.push(v);
    }
    Ok(out)
}

pub fn fs_enumerate(seq: &FiniteSequence) -> Result<FsTable> {
    let s = seq.structure();
    if !s.is_additive() {
        return Err(Error::NotAdditive(s.to_string()));
    }
    let values = fs_values(s, seq.terms())?;
    Ok(FsTable {
        entries: values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (IndexSet::from_mask(i as u64 + 1), v))
            .collect(),
    })
}

/// Finite products taken in increasing index order.
pub fn fp_ordered_enumerate(seq: &FiniteSequence) -> Result<FsTable> {
    check_fs_len(seq.len())?;
    let s = seq.structure();
    let terms = seq.terms();
    let n = 1usize << terms.len();
    let mut values: Vec<Element> = Vec::with_capacity(n - 1);
    for mask in 1..n {
        let high = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        let rest = mask & !(1 << high);
        let v = if rest == 0 {
            terms[high].clone()
        } else {
            // appending the highest index on the right keeps t(1) < ... < t(m)
            s.mul(&values[rest - 1], &terms[high])?
        };
        values.push(v);
    }
    Ok(FsTable {
        entries: values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (IndexSet::from_mask(i as u64 + 1), v))
            .collect(),
    })
}

/// Positive pairwise differences `{s - t : s > t}` of a finite set of integers.
pub fn delta_set(set: &[Element]) -> Result<SetSpec> {
    if set.len() < 2 {
        return Err(Error::InvalidParameter("delta sets need at least 2 elements".into()));
    }
    let ints: Vec<&BigInt> = set
        .iter()
        .map(|e| e.as_int().ok_or(Error::NotOrdered))
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<&BigInt> = ints.iter().copied().collect();
    if distinct.len() != ints.len() {
        return Err(Error::InvalidParameter("delta set elements must be distinct".into()));
    }
    let mut diffs = BTreeSet::new();
    for s in &ints {
        for t in &ints {
            if s > t {
                diffs.insert(Element::Int(*s - *t));
            }
        }
    }
    SetSpec::explicit(GroundStructure::Integers, diffs)
}

/// Signed difference set `A - A`, evaluable on `[-bound, bound]`.
pub fn difference_set(a: &SetSpec, bound: u64) -> Result<SetSpec> {
    difference_set_with(a, bound, DifferenceSign::Signed)
}

pub fn difference_set_with(a: &SetSpec, bound: u64, sign: DifferenceSign) -> Result<SetSpec> {
    difference_set_exec(a, bound, sign, Exec::default())
}

pub fn difference_set_exec(a: &SetSpec, bound: u64, sign: DifferenceSign, exec: Exec) -> Result<SetSpec> {
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    Ok(SetSpec::Difference(Arc::new(DifferenceSet::build(
        a.clone(),
        bound,
        sign,
        exec,
    )?)))
}

/// Product set `A * B`, evaluable on `[-bound, bound]` over the integers.
///
/// Integer membership is decided by divisor enumeration. Other structures
/// need both factors to be finite and materialize all pairwise products.
pub fn product_set(a: &SetSpec, b: &SetSpec, bound: u64) -> Result<SetSpec> {
    let s = a.structure();
    if s != b.structure() {
        return Err(Error::KindMismatch(format!("{a} and {b} live in different structures")));
    }
    let repr = if s == GroundStructure::Integers {
        ProductRepr::Divisors
    } else {
        let (Some(left), Some(right)) = (a.finite_members()?, b.finite_members()?) else {
            return Err(Error::Unsupported(format!(
                "product of infinite sets in {s} needs explicit windows"
            )));
        };
        let mut table = HashSet::new();
        for x in &left {
            for y in &right {
                table.insert(s.mul(x, y)?);
            }
        }
        ProductRepr::Table(table)
    };
    Ok(SetSpec::Product(Arc::new(ProductSet {
        left: a.clone(),
        right: b.clone(),
        bound,
        repr,
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    #[serde(rename = "certified-on-window")]
    CertifiedOnWindow,
    #[serde(rename = "falsified")]
    Falsified,
}

/// Outcome of an exhaustive IP_r search. Certification is relative to the
/// recorded window and `r` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowVerdict {
    pub status: VerdictStatus,
    pub counterexample: Option<FiniteSequence>,
    pub window: Vec<Element>,
    pub r: usize,
}

impl WindowVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::CertifiedOnWindow
    }

    /// Re-verifies a falsification from scratch: the counterexample has `r`
    /// terms drawn from the window and none of its finite sums lie in `a`.
    /// A certification is re-run sequentially.
    pub fn recheck(&self, a: &SetSpec, cfg: &SearchConfig) -> Result<bool> {
        match (&self.status, &self.counterexample) {
            (VerdictStatus::Falsified, Some(seq)) => {
                if seq.len() != self.r || !seq.terms().iter().all(|t| self.window.contains(t)) {
                    return Ok(false);
                }
                for v in fs_enumerate(seq)?.values() {
                    if a.contains(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (VerdictStatus::CertifiedOnWindow, None) => {
                let seq_cfg = SearchConfig {
                    exec: Exec::Sequential,
                    ..cfg.clone()
                };
                Ok(certify_ipr_star_window(a, self.r, &self.window, &seq_cfg)?.is_certified())
            }
            _ => Ok(false),
        }
    }
}

pub fn ipr_search_cost(window_len: usize, r: usize) -> f64 {
    (window_len as f64).powi(r as i32) * ((1u64 << r.min(63)) as f64 - 1.0)
}

/// Exhaustively searches length-`r` sequences (repetition allowed) over
/// `window` for one whose finite sums all avoid `a`.
///
/// Returns the least counterexample in lexicographic window order, so the
/// result is independent of parallelism. Prefixes whose sums already meet
/// `a` are pruned since every extension inherits those sums.
pub fn certify_ipr_star_window(a: &SetSpec, r: usize, window: &[Element], cfg: &SearchConfig) -> Result<WindowVerdict> {
    let g = &cfg.guards;
    if r == 0 || window.is_empty() {
        return Err(Error::InvalidParameter("r and the window must be nonempty".into()));
    }
    if r > g.max_r || window.len() > g.max_window {
        return Err(Error::GuardExceeded {
            what: "IP_r window certification".into(),
            detail: format!(
                "r = {r} (max {}), |window| = {} (max {})",
                g.max_r,
                window.len(),
                g.max_window
            ),
            cost_estimate: ipr_search_cost(window.len(), r),
        });
    }
    let s = a.structure();
    if !s.is_additive() {
        return Err(Error::NotAdditive(s.to_string()));
    }
    for w in window {
        s.check(w)?;
    }
    // the largest sums the search can produce must be inside the support
    if s == GroundStructure::Integers {
        let m = window
            .iter()
            .map(|w| w.as_int().expect("checked").abs())
            .max()
            .expect("nonempty");
        let extreme = m * BigInt::from(r);
        a.contains(&Element::Int(extreme.clone()))?;
        a.contains(&Element::Int(-extreme))?;
    }

    let found = par::find_map_first(cfg.exec, window.len(), |first| {
        let x = &window[first];
        match a.contains(x) {
            Ok(true) => return None,
            Ok(false) => {}
            Err(e) => return Some(Err(e)),
        }
        let mut picks = vec![first];
        let mut sums = vec![x.clone()];
        match extend_avoiding(a, &s, window, r, &mut picks, &mut sums) {
            Ok(true) => Some(Ok(picks)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    })
    .transpose()?;

    Ok(match found {
        Some(picks) => WindowVerdict {
            status: VerdictStatus::Falsified,
            counterexample: Some(FiniteSequence::new(
                s,
                picks.iter().map(|&i| window[i].clone()).collect(),
            )?),
            window: window.to_vec(),
            r,
        },
        None => WindowVerdict {
            status: VerdictStatus::CertifiedOnWindow,
            counterexample: None,
            window: window.to_vec(),
            r,
        },
    })
}

fn extend_avoiding(
    a: &SetSpec,
    s: &GroundStructure,
    window: &[Element],
    r: usize,
    picks: &mut Vec<usize>,
    sums: &mut Vec<Element>,
) -> Result<bool> {
    if picks.len() == r {
        return Ok(true);
    }
    let base = sums.len();
    'candidates: for (i, x) in window.iter().enumerate() {
        if a.contains(x)? {
            continue;
        }
        for j in 0..base {
            let v = s.add(&sums[j], x)?;
            if a.contains(&v)? {
                sums.truncate(base);
                continue 'candidates;
            }
            sums.push(v);
        }
        sums.push(x.clone());
        picks.push(i);
        if extend_avoiding(a, s, window, r, picks, sums)? {
            return Ok(true);
        }
        picks.pop();
        sums.truncate(base);
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub k: Element,
    pub bound: u64,
    pub multiples_checked: u64,
    pub missing: Vec<Element>,
}

impl CoverageReport {
    pub fn is_covered(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Multiples `j * k <= bound` (`j >= 1`) that are missing from `s`.
pub fn dilation_coverage(k: &Element, s: &SetSpec, bound: u64, exec: Exec) -> Result<CoverageReport> {
    let kv = int_of(k)?
        .to_u64()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("k must be a positive integer, got {k}")))?;
    let count = bound / kv;
    let results = par::map_range(exec, count as usize, |j| {
        let m = Element::int(((j as u64 + 1) * kv) as i64);
        s.contains(&m).map(|hit| (!hit).then_some(m))
    });
    let mut missing = Vec::new();
    for r in results {
        if let Some(m) = r? {
            missing.push(m);
        }
    }
    Ok(CoverageReport {
        k: k.clone(),
        bound,
        multiples_checked: count,
        missing,
    })
}

/// First `a` in window order with `f * a` in `set` for every `f` in `factors`.
pub fn mult_thick_check(set: &SetSpec, factors: &[Element], window: &[Element], exec: Exec) -> Result<Option<Element>> {
    let s = set.structure();
    par::find_map_first(exec, window.len(), |i| {
        let a = &window[i];
        for f in factors {
            match s.mul(f, a).and_then(|fa| set.contains(&fa)) {
                Ok(true) => {}
                Ok(false) => return None,
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(a.clone()))
    })
    .transpose()
}

/// A factor that makes `mult_thick_check` fail on every window: when `set`
/// is the complement of an ideal `I` and some `f` lies in `I`, then `f * a`
/// lies in `I` for every `a`.
pub fn thick_obstruction(set: &SetSpec, factors: &[Element]) -> Result<Option<Element>> {
    if let SetSpec::Complement { inner, universe: None } = set {
        if let SetSpec::Ideal(h) = inner.as_ref() {
            for f in factors {
                if h.contains(f)? {
                    return Ok(Some(f.clone()));
                }
            }
        }
    }
    Ok(None)
}
