//! Executable constructive arguments, each returning a re-checkable result.
//!
//! Every search here scans in a fixed order (canonical enumeration, window
//! order, binary-counter subset order) so outputs are reproducible
//! bit-for-bit whether or not the parallel path is used.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::certificate::Certificate;
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::largeness::{fs_enumerate, fs_values, SetSpec};
use crate::par;
use crate::structures::{CosetLabel, Element, FiniteSequence, GroundStructure, Index, IndexSet, SubgroupSpec, Word};

/// Contiguous block `start..=end` (1-based) whose sum lies in the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeBlock {
    pub start: usize,
    pub end: usize,
    pub sum: Element,
}

impl PigeonholeBlock {
    pub fn recheck(&self, h: &SubgroupSpec, seq: &FiniteSequence) -> Result<bool> {
        if self.start == 0 || self.start > self.end || self.end > seq.len() {
            return Ok(false);
        }
        let block = IndexSet::contiguous(self.start, self.end)?;
        Ok(seq.sum_over(&block)? == self.sum && h.contains(&self.sum)?)
    }

    pub fn certificate(&self, h: &SubgroupSpec, seq: &FiniteSequence) -> Result<Certificate> {
        Ok(Certificate::new(
            "pigeonhole_extract",
            serde_json::json!({ "subgroup": h.describe(), "sequence": seq.terms() }),
            self,
            self.recheck(h, seq)?,
        ))
    }
}

/// Extracts a contiguous block with sum in `h` from the first `r + 1`
/// terms, where `r` is the index of `h`.
///
/// If some prefix sum already lies in `h` the block is that prefix;
/// otherwise the first repeated coset label among the prefix sums
/// `p_{k1}, p_{k2}` gives the block `k1+1..=k2`.
pub fn pigeonhole_extract(h: &SubgroupSpec, seq: &FiniteSequence) -> Result<PigeonholeBlock> {
    let r = match h.index()? {
        Index::Finite(r) => r as usize,
        Index::Infinite => return Err(Error::InfiniteIndex),
    };
    if seq.structure() != h.structure() {
        return Err(Error::KindMismatch(format!(
            "sequence over {} but subgroup of {}",
            seq.structure(),
            h.structure()
        )));
    }
    if seq.len() < r + 1 {
        return Err(Error::SequenceTooShort {
            got: seq.len(),
            need: r + 1,
        });
    }
    let s = h.structure();
    let mut prefix = Vec::with_capacity(r + 1);
    let mut acc = s.zero()?;
    for t in &seq.terms()[..=r] {
        acc = s.add(&acc, t)?;
        prefix.push(acc.clone());
    }
    for (k, p) in prefix.iter().enumerate() {
        if h.contains(p)? {
            return Ok(PigeonholeBlock {
                start: 1,
                end: k + 1,
                sum: p.clone(),
            });
        }
    }
    let labels: Vec<CosetLabel> = prefix.iter().map(|p| h.coset_label(p)).collect::<Result<_>>()?;
    for k2 in 1..labels.len() {
        for k1 in 0..k2 {
            if h.labels_match(&labels[k1], &labels[k2])? {
                return Ok(PigeonholeBlock {
                    start: k1 + 2,
                    end: k2 + 1,
                    sum: s.sub(&prefix[k2], &prefix[k1])?,
                });
            }
        }
    }
    // r + 1 prefix sums in r cosets always collide
    Err(Error::RecheckFailed(format!(
        "no collision among {} prefix sums for a subgroup of index {r}",
        r + 1
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidingSequence {
    pub sequence: FiniteSequence,
    /// Finite sums checked against the subgroup after construction.
    pub sums_checked: usize,
}

impl AvoidingSequence {
    pub fn recheck(&self, h: &SubgroupSpec) -> Result<bool> {
        for v in fs_enumerate(&self.sequence)?.values() {
            if h.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn certificate(&self, h: &SubgroupSpec) -> Result<Certificate> {
        Ok(Certificate::new(
            "avoid_sequence",
            serde_json::json!({ "subgroup": h.describe(), "n": self.sequence.len() }),
            self,
            self.recheck(h)?,
        ))
    }
}

/// Greedy sequence with no finite sum in an infinite-index subgroup `h`.
///
/// Each `x_m` is the least nonzero element in canonical order with
/// `y + x_m` outside `h` for every `y` in `FS(x_1..x_{m-1}) ∪ {0}`, that is
/// `x_m` avoids every coset `-y + h`. The result is verified exhaustively
/// before it is returned.
pub fn avoid_sequence(h: &SubgroupSpec, n: usize, cfg: &SearchConfig) -> Result<AvoidingSequence> {
    match h.index()? {
        Index::Finite(r) => return Err(Error::FiniteIndex(r)),
        Index::Infinite => {}
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > cfg.guards.max_avoid_len {
        return Err(Error::LengthGuard {
            len: n,
            max: cfg.guards.max_avoid_len,
        });
    }
    let s = h.structure().clone();
    // FS(x_1..x_{m-1}) ∪ {0}
    let mut reachable = vec![s.zero()?];
    let mut terms = Vec::with_capacity(n);
    for position in 1..=n {
        let negs: Vec<Element> = reachable.iter().map(|y| s.neg(y)).collect::<Result<_>>()?;
        let forbidden_exact: Option<HashSet<CosetLabel>> = negs
            .iter()
            .map(|y| h.coset_label(y))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|l| l.is_exact().then_some(l))
            .collect();
        let mut chosen = None;
        for cand in s
            .canonical_iter()
            .filter(|e| !e.is_zero())
            .take(cfg.guards.avoid_budget)
        {
            let ok = match &forbidden_exact {
                Some(forbidden) => !forbidden.contains(&h.coset_label(&cand)?),
                None => {
                    let mut ok = true;
                    for y in &reachable {
                        if h.contains(&s.add(y, &cand)?)? {
                            ok = false;
                            break;
                        }
                    }
                    ok
                }
            };
            if ok {
                chosen = Some(cand);
                break;
            }
        }
        let x = chosen.ok_or(Error::SearchExhausted {
            position,
            candidates: cfg.guards.avoid_budget,
        })?;
        let shifted: Vec<Element> = reachable.iter().map(|y| s.add(y, &x)).collect::<Result<_>>()?;
        reachable.extend(shifted);
        terms.push(x);
    }
    let out = AvoidingSequence {
        sequence: FiniteSequence::new(s, terms)?,
        sums_checked: (1usize << n) - 1,
    };
    if !out.recheck(h)? {
        return Err(Error::RecheckFailed(format!(
            "avoiding sequence {} has a finite sum in {}",
            out.sequence,
            h.describe()
        )));
    }
    Ok(out)
}

/// `a + sum_{n in H} f(n)` lands in the set for every `f` in the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JWitness {
    pub a: Element,
    pub h: IndexSet,
    pub images: Vec<Element>,
}

impl JWitness {
    pub fn recheck(&self, set: &SetSpec, family: &[FiniteSequence]) -> Result<bool> {
        if family.len() != self.images.len() || IndexSet::max(&self.h) > family[0].len() {
            return Ok(false);
        }
        let s = set.structure();
        for (f, img) in family.iter().zip(&self.images) {
            let v = s.add(&self.a, &f.sum_over(&self.h)?)?;
            if &v != img || !set.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn certificate(&self, set: &SetSpec, family: &[FiniteSequence]) -> Result<Certificate> {
        let seqs: Vec<&[Element]> = family.iter().map(|f| f.terms()).collect();
        Ok(Certificate::new(
            "j_witness_search",
            serde_json::json!({ "set": set.to_string(), "family": seqs }),
            self,
            self.recheck(set, family)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum JSearch {
    Found(JWitness),
    /// No witness inside the searched grid. This is not evidence that the
    /// set fails to be a J-set beyond the grid.
    Exhausted {
        a_count: usize,
        subsets: usize,
    },
}

impl JSearch {
    pub fn witness(&self) -> Option<&JWitness> {
        match self {
            JSearch::Found(w) => Some(w),
            JSearch::Exhausted { .. } => None,
        }
    }
}

/// First `(H, a)` with `a + sum_{n in H} f(n)` in `set` for every `f`.
///
/// The scan is H-major: index sets in binary-counter order, and for each
/// one the shifts `a` in window order.
pub fn j_witness_search(
    set: &SetSpec,
    family: &[FiniteSequence],
    a_window: &[Element],
    cfg: &SearchConfig,
) -> Result<JSearch> {
    let s = set.structure();
    if !s.is_additive() {
        return Err(Error::NotAdditive(s.to_string()));
    }
    let len = family
        .first()
        .ok_or_else(|| Error::InvalidParameter("family must be nonempty".into()))?
        .len();
    if family.iter().any(|f| f.len() != len) {
        return Err(Error::InvalidParameter("family sequences must share one length".into()));
    }
    if len > cfg.guards.max_j_len {
        return Err(Error::LengthGuard {
            len,
            max: cfg.guards.max_j_len,
        });
    }
    for a in a_window {
        s.check(a)?;
    }
    let tables: Vec<Vec<Element>> = family.iter().map(|f| fs_values(&s, f.terms())).collect::<Result<_>>()?;
    let subsets = (1usize << len) - 1;
    let w = a_window.len();
    let found = par::find_map_first(cfg.exec, subsets * w, |idx| {
        let (m, ai) = (idx / w, idx % w);
        let a = &a_window[ai];
        let mut images = Vec::with_capacity(tables.len());
        for t in &tables {
            let v = match s.add(a, &t[m]) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            match set.contains(&v) {
                Ok(true) => images.push(v),
                Ok(false) => return None,
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(JWitness {
            a: a.clone(),
            h: IndexSet::from_mask(m as u64 + 1),
            images,
        }))
    })
    .transpose()?;
    Ok(match found {
        Some(wit) => JSearch::Found(wit),
        None => JSearch::Exhausted { a_count: w, subsets },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KcrProbe {
    pub k: usize,
    pub r: usize,
    pub witnesses: Vec<JWitness>,
    /// First family (by sample index) with no witness in the grid.
    pub failure: Option<KcrFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KcrFailure {
    pub family_index: usize,
    pub a_count: usize,
    pub subsets: usize,
}

/// Runs the J-witness search with `H ⊆ {1..r}` over sampled families of at
/// most `k` sequences of length `r`, stopping at the first failure.
pub fn k_cr_probe(
    set: &SetSpec,
    k: usize,
    r: usize,
    families: &[Vec<FiniteSequence>],
    a_window: &[Element],
    cfg: &SearchConfig,
) -> Result<KcrProbe> {
    let mut witnesses = Vec::with_capacity(families.len());
    for (i, fam) in families.iter().enumerate() {
        if fam.is_empty() || fam.len() > k || fam.iter().any(|f| f.len() != r) {
            return Err(Error::InvalidParameter(format!(
                "family {i} must hold 1..={k} sequences of length {r}"
            )));
        }
        match j_witness_search(set, fam, a_window, cfg)? {
            JSearch::Found(w) => witnesses.push(w),
            JSearch::Exhausted { a_count, subsets } => {
                return Ok(KcrProbe {
                    k,
                    r,
                    witnesses,
                    failure: Some(KcrFailure {
                        family_index: i,
                        a_count,
                        subsets,
                    }),
                })
            }
        }
    }
    Ok(KcrProbe {
        k,
        r,
        witnesses,
        failure: None,
    })
}

/// `sum_{n in H} x_n = upper - lower` with `upper, lower` in the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffWitness {
    pub h: IndexSet,
    pub a: Element,
    pub y: Element,
    pub sum: Element,
    pub upper: Element,
    pub lower: Element,
}

impl DiffWitness {
    pub fn recheck(&self, set: &SetSpec, x_seq: &FiniteSequence) -> Result<bool> {
        let s = set.structure();
        if IndexSet::max(&self.h) > x_seq.len() {
            return Ok(false);
        }
        let sum = x_seq.sum_over(&self.h)?;
        Ok(sum == self.sum
            && s.sub(&self.upper, &self.lower)? == sum
            && set.contains(&self.upper)?
            && set.contains(&self.lower)?)
    }

    pub fn certificate(&self, set: &SetSpec, x_seq: &FiniteSequence) -> Result<Certificate> {
        Ok(Certificate::new(
            "diff_ipstar_demo",
            serde_json::json!({ "set": set.to_string(), "x": x_seq.terms() }),
            self,
            self.recheck(set, x_seq)?,
        ))
    }
}

/// Finds `H` with `sum_{n in H} x_n` in `A - A` through the two-sequence
/// family `f(n) = y_n`, `g(n) = x_n + y_n`.
///
/// `y_n` is the least element of `y_window` in canonical order, for every
/// `n`; the shift `a` ranges over `a_window`.
pub fn diff_ipstar_demo(
    set: &SetSpec,
    x_seq: &FiniteSequence,
    y_window: &[Element],
    a_window: &[Element],
    cfg: &SearchConfig,
) -> Result<DiffWitness> {
    if x_seq.len() > cfg.guards.max_demo_len {
        return Err(Error::LengthGuard {
            len: x_seq.len(),
            max: cfg.guards.max_demo_len,
        });
    }
    let s = set.structure();
    let y = y_window
        .iter()
        .min_by(|a, b| s.canonical_cmp(a, b))
        .ok_or_else(|| Error::InvalidParameter("y window must be nonempty".into()))?
        .clone();
    let f = FiniteSequence::new(s.clone(), vec![y.clone(); x_seq.len()])?;
    let g = FiniteSequence::new(
        s.clone(),
        x_seq.terms().iter().map(|x| s.add(x, &y)).collect::<Result<_>>()?,
    )?;
    match j_witness_search(set, &[f, g], a_window, cfg)? {
        JSearch::Found(w) => Ok(DiffWitness {
            sum: x_seq.sum_over(&w.h)?,
            lower: w.images[0].clone(),
            upper: w.images[1].clone(),
            h: w.h,
            a: w.a,
            y,
        }),
        JSearch::Exhausted { a_count, subsets } => Err(Error::GridExhausted { a_count, subsets }),
    }
}

/// `D = {d in window : d in A and d in yA for all y in FS(b)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoswamiD {
    pub fs_b: Vec<Element>,
    pub members: Vec<Element>,
}

impl GoswamiD {
    pub fn as_set(&self, structure: GroundStructure) -> Result<SetSpec> {
        SetSpec::explicit(structure, self.members.iter().cloned())
    }
}

/// `d` is in `yA` iff `d = y * a'` for some `a'` in `A`; in a domain `a'` is unique.
fn in_dilate(set: &SetSpec, y: &Element, d: &Element) -> Result<Option<Element>> {
    let s = set.structure();
    match s.div_exact(d, y)? {
        Some(q) if set.contains(&q)? => Ok(Some(q)),
        _ => Ok(None),
    }
}

pub fn goswami_d(set: &SetSpec, b: &FiniteSequence, window: &[Element], cfg: &SearchConfig) -> Result<GoswamiD> {
    let s = set.structure();
    let fs_b = fs_values(&s, b.terms())?;
    if let Some(pos) = fs_b.iter().position(Element::is_zero) {
        return Err(Error::ZeroInFiniteSums(format!(
            "sum over {} of {b} is 0",
            IndexSet::from_mask(pos as u64 + 1)
        )));
    }
    let keep = par::map_range(cfg.exec, window.len(), |i| -> Result<bool> {
        let d = &window[i];
        if !set.contains(d)? {
            return Ok(false);
        }
        for y in &fs_b {
            if in_dilate(set, y, d)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let mut members = Vec::new();
    for (d, k) in window.iter().zip(keep) {
        if k? {
            members.push(d.clone());
        }
    }
    Ok(GoswamiD { fs_b, members })
}

/// `r * x = s * a'` with `s = sum_{i in H} x b_i` in `B` and `a'` in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCertificate {
    pub x: Element,
    pub h: IndexSet,
    pub scaled_sum: Element,
    pub r: Element,
    pub a_prime: Element,
    pub product: Element,
}

impl ProductCertificate {
    pub fn recheck(&self, a: &SetSpec, b_set: &SetSpec, b: &FiniteSequence) -> Result<bool> {
        let s = a.structure();
        let mut scaled = s.zero()?;
        for &i in self.h.positions() {
            if i > b.len() {
                return Ok(false);
            }
            scaled = s.add(&scaled, &s.mul(&self.x, b.term(i))?)?;
        }
        Ok(scaled == self.scaled_sum
            && b_set.contains(&self.scaled_sum)?
            && a.contains(&self.a_prime)?
            && s.mul(&self.r, &self.x)? == self.product
            && s.mul(&self.scaled_sum, &self.a_prime)? == self.product)
    }

    pub fn certificate(&self, a: &SetSpec, b_set: &SetSpec, b: &FiniteSequence) -> Result<Certificate> {
        Ok(Certificate::new(
            "goswami_product_check",
            serde_json::json!({ "A": a.to_string(), "B": b_set.to_string(), "b": b.terms() }),
            self,
            self.recheck(a, b_set, b)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoswamiProduct {
    pub d: GoswamiD,
    /// `H(x)` for every nonzero `x` of the window, in window order.
    pub index_sets: Vec<(Element, IndexSet)>,
    pub certificates: Vec<ProductCertificate>,
}

/// For every nonzero `x` finds `H(x)` with `sum_{i in H(x)} x b_i` in `B`,
/// then factors `r x` through it for every `r` in `D ∩ r_window`.
pub fn goswami_product_check(
    a: &SetSpec,
    b_set: &SetSpec,
    b: &FiniteSequence,
    x_window: &[Element],
    r_window: &[Element],
    cfg: &SearchConfig,
) -> Result<GoswamiProduct> {
    let s = a.structure();
    if b_set.structure() != s {
        return Err(Error::KindMismatch(format!(
            "{a} and {b_set} live in different structures"
        )));
    }
    let d = goswami_d(a, b, r_window, cfg)?;
    let b_sums = fs_values(&s, b.terms())?;
    let mut index_sets = Vec::new();
    let mut certificates = Vec::new();
    for x in x_window.iter().filter(|x| !x.is_zero()) {
        let scaled_sums: Vec<Element> = b_sums.iter().map(|y| s.mul(x, y)).collect::<Result<_>>()?;
        let mut hit = None;
        for (m, v) in scaled_sums.iter().enumerate() {
            if b_set.contains(v)? {
                hit = Some(m);
                break;
            }
        }
        let m = hit.ok_or_else(|| Error::NoIndexSetFound { x: x.to_string() })?;
        let h = IndexSet::from_mask(m as u64 + 1);
        for r in &d.members {
            let a_prime = in_dilate(a, &b_sums[m], r)?
                .ok_or_else(|| Error::RecheckFailed(format!("{r} in D but not in ({})A", b_sums[m])))?;
            certificates.push(ProductCertificate {
                x: x.clone(),
                h: h.clone(),
                scaled_sum: scaled_sums[m].clone(),
                r: r.clone(),
                product: s.mul(r, x)?,
                a_prime,
            });
        }
        index_sets.push((x.clone(), h));
    }
    Ok(GoswamiProduct {
        d,
        index_sets,
        certificates,
    })
}

/// Noncommutative J-witness `a(1) f(t(1)) a(2) ... f(t(m)) a(m+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcJWitness {
    pub h: IndexSet,
    pub a: Vec<Word>,
    pub images: Vec<Word>,
}

impl NcJWitness {
    pub fn recheck(&self, family: &[Vec<Word>], in_set: impl Fn(&Word) -> bool) -> bool {
        if self.a.len() != self.h.len() + 1 || family.len() != self.images.len() {
            return false;
        }
        family
            .iter()
            .zip(&self.images)
            .all(|(f, img)| IndexSet::max(&self.h) <= f.len() && interleave(&self.a, f, &self.h) == *img && in_set(img))
    }
}

fn interleave(a: &[Word], f: &[Word], h: &IndexSet) -> Word {
    let mut out = a[0].clone();
    for (i, &t) in h.positions().iter().enumerate() {
        out = out.concat(&f[t - 1]).concat(&a[i + 1]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeSemigroupReport {
    pub max_len: usize,
    /// Number of words of each length `1..=max_len - 2` in the restricted quotient.
    pub quotient_counts: BTreeMap<usize, usize>,
    pub quotient_size: usize,
    pub b_powers_checked: usize,
    /// `b^n` found in the quotient; empty when the counterexample holds.
    pub b_power_hits: Vec<usize>,
    pub pairs_checked: u64,
    pub j_witnesses: Vec<NcJWitness>,
}

/// Membership in `A = F a`: words of length at least 2 ending in `a`.
pub fn in_fa(w: &Word) -> bool {
    w.len() >= 2 && w.ends_with("a")
}

/// Free semigroup on `{a, b}` with `A = F a`: computes the quotient
/// `A^{-1}A = {w : u w in A for some u in A}` restricted to `|u w| <= max_len`
/// and checks that it misses every `b^n`. Also finds J-witnesses for the
/// sampled `families` by scanning `H ⊆ {1, 2}` and separators from the
/// first `witness_window` words.
pub fn freesemigroup_counterexample(
    max_len: usize,
    families: &[Vec<Vec<Word>>],
    witness_window: usize,
    cfg: &SearchConfig,
) -> Result<FreeSemigroupReport> {
    if max_len > cfg.guards.max_word_len {
        return Err(Error::GuardExceeded {
            what: "free semigroup counterexample".into(),
            detail: format!("max word length {max_len} exceeds {}", cfg.guards.max_word_len),
            cost_estimate: max_len as f64 * 2f64.powi(max_len as i32),
        });
    }
    if max_len < 3 {
        return Err(Error::InvalidParameter("max_len must be at least 3".into()));
    }
    let fs = GroundStructure::free_semigroup("ab")?;
    let total_words = (1usize << (max_len + 1)) - 2;
    let words: Vec<Word> = fs
        .canonical_iter()
        .take(total_words)
        .map(|e| e.as_word().expect("word").clone())
        .collect();
    let left: Vec<&Word> = words.iter().filter(|u| in_fa(u) && u.len() < max_len).collect();
    let per_u = par::map_range(cfg.exec, left.len(), |i| {
        let u = left[i];
        let room = max_len - u.len();
        let mut hits = Vec::new();
        let mut pairs = 0u64;
        for w in words.iter().take_while(|w| w.len() <= room) {
            pairs += 1;
            if in_fa(&u.concat(w)) {
                hits.push(w.clone());
            }
        }
        (hits, pairs)
    });
    let mut quotient = BTreeSet::new();
    let mut pairs_checked = 0;
    for (hits, pairs) in per_u {
        quotient.extend(hits);
        pairs_checked += pairs;
    }
    let mut quotient_counts = BTreeMap::new();
    for w in &quotient {
        *quotient_counts.entry(w.len()).or_insert(0) += 1;
    }
    let max_w = max_len - 2;
    let b_power_hits: Vec<usize> = (1..=max_w)
        .filter(|&n| quotient.contains(&Word::new("b".repeat(n)).expect("nonempty")))
        .collect();

    let separators = &words[..witness_window.min(words.len())];
    let mut j_witnesses = Vec::with_capacity(families.len());
    for (i, fam) in families.iter().enumerate() {
        let w = nc_j_witness(fam, separators, in_fa).ok_or(Error::GridExhausted {
            a_count: separators.len(),
            subsets: 3,
        })?;
        if !w.recheck(fam, in_fa) {
            return Err(Error::RecheckFailed(format!("J-witness for family {i}")));
        }
        j_witnesses.push(w);
    }

    Ok(FreeSemigroupReport {
        max_len,
        quotient_size: quotient.len(),
        quotient_counts,
        b_powers_checked: max_w,
        b_power_hits,
        pairs_checked,
        j_witnesses,
    })
}

/// Scans `H` in binary order over the first two positions, then separator
/// tuples lexicographically over `separators`.
fn nc_j_witness(family: &[Vec<Word>], separators: &[Word], in_set: impl Fn(&Word) -> bool) -> Option<NcJWitness> {
    let len = family.iter().map(Vec::len).min()?.min(2);
    for mask in 1..(1u64 << len) {
        let h = IndexSet::from_mask(mask);
        let slots = h.len() + 1;
        let mut idx = vec![0usize; slots];
        loop {
            let a: Vec<Word> = idx.iter().map(|&i| separators[i].clone()).collect();
            let images: Vec<Word> = family.iter().map(|f| interleave(&a, f, &h)).collect();
            if images.iter().all(&in_set) {
                return Some(NcJWitness { h, a, images });
            }
            let mut j = slots;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < separators.len() {
                    break;
                }
                idx[j] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    None
}
