//! Følner-window densities.
//!
//! Every ratio is an exact [`Rational64`]. Estimates are maxima over the
//! windows actually scanned, so they bound the true upper densities from
//! below and are labeled as estimates.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::largeness::SetSpec;
use crate::par::{self, Exec};
use crate::structures::{Element, GroundStructure};

/// How a group element acts on windows of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    /// `g + F`
    Shift,
    /// `g * F`
    Dilate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolnerFamily {
    /// `F_n = {1, ..., n}` in `Z`.
    Intervals,
    /// `F_n = {p * factor^i : p in seed, 0 <= i < n}`.
    Dilation {
        structure: GroundStructure,
        seed: Vec<Element>,
        factor: Element,
    },
    /// Explicit windows `F_1, F_2, ...`.
    Custom {
        structure: GroundStructure,
        windows: Vec<Vec<Element>>,
        action: Action,
    },
}

impl FolnerFamily {
    pub fn dilation(structure: GroundStructure, seed: Vec<Element>, factor: Element) -> Result<Self> {
        if seed.is_empty() {
            return Err(Error::InvalidParameter("dilation seed must be nonempty".into()));
        }
        for e in seed.iter().chain([&factor]) {
            structure.check(e)?;
        }
        if seed.iter().any(Element::is_zero) || factor.is_zero() {
            return Err(Error::InvalidParameter(
                "dilation seed and factor must be nonzero".into(),
            ));
        }
        Ok(FolnerFamily::Dilation {
            structure,
            seed,
            factor,
        })
    }

    pub fn custom(structure: GroundStructure, windows: Vec<Vec<Element>>, action: Action) -> Result<Self> {
        let mut prev = 0;
        for (i, w) in windows.iter().enumerate() {
            for e in w {
                structure.check(e)?;
            }
            let size = w.iter().collect::<BTreeSet<_>>().len();
            if size == 0 || size < prev {
                return Err(Error::InvalidParameter(format!(
                    "window {} must be nonempty and no smaller than the previous one",
                    i + 1
                )));
            }
            prev = size;
        }
        Ok(FolnerFamily::Custom {
            structure,
            windows,
            action,
        })
    }

    pub fn structure(&self) -> GroundStructure {
        match self {
            FolnerFamily::Intervals => GroundStructure::Integers,
            FolnerFamily::Dilation { structure, .. } | FolnerFamily::Custom { structure, .. } => structure.clone(),
        }
    }

    pub fn action(&self) -> Action {
        match self {
            FolnerFamily::Intervals => Action::Shift,
            FolnerFamily::Dilation { .. } => Action::Dilate,
            FolnerFamily::Custom { action, .. } => *action,
        }
    }

    fn max_index(&self) -> Option<usize> {
        match self {
            FolnerFamily::Custom { windows, .. } => Some(windows.len()),
            _ => None,
        }
    }

    fn check_index(&self, n: usize) -> Result<()> {
        let max = self.max_index().unwrap_or(usize::MAX);
        if n == 0 || n > max {
            return Err(Error::WindowOutOfRange { n, min: 1, max });
        }
        Ok(())
    }

    /// The distinct elements of `F_n`.
    pub fn window(&self, n: usize) -> Result<BTreeSet<Element>> {
        self.check_index(n)?;
        match self {
            FolnerFamily::Intervals => Ok((1..=n as i64).map(Element::int).collect()),
            FolnerFamily::Dilation { .. } => Ok(self.dilation_layers(n)?.into_iter().flatten().collect()),
            FolnerFamily::Custom { windows, .. } => Ok(windows[n - 1].iter().cloned().collect()),
        }
    }

    /// Elements new at each of `F_1, ..., F_n` for the nested dilation family.
    fn dilation_layers(&self, n: usize) -> Result<Vec<Vec<Element>>> {
        let FolnerFamily::Dilation {
            structure,
            seed,
            factor,
        } = self
        else {
            unreachable!("dilation_layers on a non-dilation family");
        };
        let mut seen = BTreeSet::new();
        let mut layers = Vec::with_capacity(n);
        let mut power = structure.one()?;
        for _ in 0..n {
            let mut layer = Vec::new();
            for p in seed {
                let e = structure.mul(p, &power)?;
                if seen.insert(e.clone()) {
                    layer.push(e);
                }
            }
            layers.push(layer);
            power = structure.mul(&power, factor)?;
        }
        Ok(layers)
    }
}

impl fmt::Display for FolnerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolnerFamily::Intervals => write!(f, "intervals [1..n] in Z"),
            FolnerFamily::Dilation {
                structure,
                seed,
                factor,
            } => {
                let seed: Vec<String> = seed.iter().map(|e| e.to_string()).collect();
                write!(
                    f,
                    "dilations {{p*({factor})^i : p in {{{}}}, i < n}} in {structure}",
                    seed.join(", ")
                )
            }
            FolnerFamily::Custom {
                structure,
                windows,
                action,
            } => {
                write!(f, "{} custom windows in {structure} ({action:?})", windows.len())
            }
        }
    }
}

fn act(s: &GroundStructure, action: Action, g: &Element, e: &Element) -> Result<Element> {
    match action {
        Action::Shift => s.add(g, e),
        Action::Dilate => s.mul(g, e),
    }
}

fn ratio(num: usize, den: usize) -> Rational64 {
    Rational64::new(num as i64, den as i64)
}

/// `|g F_n ∩ F_n| / |F_n|`.
pub fn folner_defect(family: &FolnerFamily, g: &Element, n: usize) -> Result<Rational64> {
    family.check_index(n)?;
    let s = family.structure();
    s.check(g)?;
    if let (FolnerFamily::Intervals, Some(g)) = (family, g.as_int()) {
        let shift = g.abs().to_usize().unwrap_or(usize::MAX);
        return Ok(ratio(n.saturating_sub(shift), n));
    }
    let window = family.window(n)?;
    let mut hits = 0;
    for e in &window {
        if window.contains(&act(&s, family.action(), g, e)?) {
            hits += 1;
        }
    }
    Ok(ratio(hits, window.len()))
}

fn serialize_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    /// Maximum of window ratios over `n_min..=n_max`.
    UpperDensityEstimate,
    /// Maximum over intervals of a fixed length; a lower bound for the
    /// upper Banach density.
    BanachLowerBound,
}

/// Ratio at one window together with the running maximum up to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub n: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: Rational64,
    #[serde(serialize_with = "serialize_ratio")]
    pub running_max: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityEstimate {
    #[serde(serialize_with = "serialize_ratio")]
    pub value: Rational64,
    pub n_range: (usize, usize),
    /// Window index (or interval start for Banach estimates) attaining the value.
    pub argmax: usize,
    pub family: String,
    pub kind: EstimateKind,
    /// Checkpoints at `n_min * 2^j` and at `n_max`.
    pub refinements: Vec<Refinement>,
}

impl DensityEstimate {
    pub fn as_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// Hit counts `|A ∩ F_n|` and sizes `|F_n|` for `n` in `1..=n_max`.
fn window_counts(set: &SetSpec, family: &FolnerFamily, n_max: usize, exec: Exec) -> Result<Vec<(usize, usize)>> {
    let member_flags = |elems: &[Element]| -> Result<Vec<bool>> {
        par::map_range(exec, elems.len(), |i| set.contains(&elems[i]))
            .into_iter()
            .collect()
    };
    match family {
        FolnerFamily::Intervals | FolnerFamily::Dilation { .. } => {
            // nested families: count each new layer once
            let layers: Vec<Vec<Element>> = match family {
                FolnerFamily::Intervals => (1..=n_max as i64).map(|k| vec![Element::int(k)]).collect(),
                _ => family.dilation_layers(n_max)?,
            };
            let flat: Vec<Element> = layers.iter().flatten().cloned().collect();
            let flags = member_flags(&flat)?;
            let mut out = Vec::with_capacity(n_max);
            let (mut hits, mut size, mut at) = (0, 0, 0);
            for layer in &layers {
                for f in &flags[at..at + layer.len()] {
                    hits += *f as usize;
                }
                at += layer.len();
                size += layer.len();
                out.push((hits, size));
            }
            Ok(out)
        }
        FolnerFamily::Custom { windows, .. } => par::map_range(exec, n_max, |i| {
            let w: Vec<Element> = windows[i]
                .iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .cloned()
                .collect();
            let flags = member_flags(&w)?;
            Ok((flags.iter().filter(|f| **f).count(), w.len()))
        })
        .into_iter()
        .collect(),
    }
}

fn checkpoints(n_min: usize, n_max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(n_min), |&n| n.checked_mul(2))
        .take_while(|&n| n < n_max)
        .collect();
    out.push(n_max);
    out
}

/// `max_{n_min <= n <= n_max} |A ∩ F_n| / |F_n|`.
pub fn upper_density(
    set: &SetSpec,
    family: &FolnerFamily,
    n_min: usize,
    n_max: usize,
    exec: Exec,
) -> Result<DensityEstimate> {
    if set.structure() != family.structure() {
        return Err(Error::KindMismatch(format!(
            "{set} is not a subset of {}",
            family.structure()
        )));
    }
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    family.check_index(n_max)?;
    let counts = window_counts(set, family, n_max, exec)?;
    let ratios: Vec<Rational64> = counts.iter().map(|&(h, s)| ratio(h, s)).collect();
    let mut value = ratios[n_min - 1];
    let mut argmax = n_min;
    let mut running = Vec::with_capacity(n_max - n_min + 1);
    for n in n_min..=n_max {
        if ratios[n - 1] > value {
            value = ratios[n - 1];
            argmax = n;
        }
        running.push(value);
    }
    let refinements = checkpoints(n_min, n_max)
        .into_iter()
        .map(|n| Refinement {
            n,
            ratio: ratios[n - 1],
            running_max: running[n - n_min],
        })
        .collect();
    Ok(DensityEstimate {
        value,
        n_range: (n_min, n_max),
        argmax,
        family: family.to_string(),
        kind: EstimateKind::UpperDensityEstimate,
        refinements,
    })
}

/// `max |A ∩ I| / len` over intervals `I ⊆ [1..n]` of length `len`.
pub fn banach_upper_density_est(set: &SetSpec, n: usize, len: usize, exec: Exec) -> Result<DensityEstimate> {
    if set.structure() != GroundStructure::Integers {
        return Err(Error::NotOrdered);
    }
    if len == 0 || len > n {
        return Err(Error::InvalidParameter(format!(
            "window length {len} must lie in 1..={n}"
        )));
    }
    let flags: Vec<bool> = par::map_range(exec, n, |i| set.contains(&Element::int(i as i64 + 1)))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut count = flags[..len].iter().filter(|f| **f).count();
    let (mut best, mut argmax) = (count, 1);
    let mut refinements = Vec::new();
    for start in 2..=n - len + 1 {
        count = count + flags[start + len - 2] as usize - flags[start - 2] as usize;
        if count > best {
            best = count;
            argmax = start;
        }
    }
    for c in checkpoints(len, n) {
        let hits = flags[c - len..c].iter().filter(|f| **f).count();
        refinements.push(Refinement {
            n: c,
            ratio: ratio(hits, len),
            running_max: ratio(best, len),
        });
    }
    Ok(DensityEstimate {
        value: ratio(best, len),
        n_range: (1, n),
        argmax,
        family: format!("intervals of length {len} inside [1..{n}]"),
        kind: EstimateKind::BanachLowerBound,
        refinements,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilationProbe {
    pub factor: Element,
    pub base: DensityEstimate,
    pub dilated: DensityEstimate,
    /// `dilated - base`
    #[serde(serialize_with = "serialize_ratio")]
    pub difference: Rational64,
}

/// Estimates for `A` and `factor * A` under the same family.
pub fn dilation_invariance_probe(
    set: &SetSpec,
    factor: &Element,
    family: &FolnerFamily,
    n_min: usize,
    n_max: usize,
    exec: Exec,
) -> Result<DilationProbe> {
    let dilated_set = SetSpec::dilation(factor.clone(), set.clone())?;
    let base = upper_density(set, family, n_min, n_max, exec)?;
    let dilated = upper_density(&dilated_set, family, n_min, n_max, exec)?;
    Ok(DilationProbe {
        factor: factor.clone(),
        difference: dilated.value - base.value,
        base,
        dilated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Poly, SubgroupSpec};

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn interval_defects() {
        let f = FolnerFamily::Intervals;
        assert_eq!(folner_defect(&f, &Element::int(1), 100).unwrap(), r(99, 100));
        assert_eq!(folner_defect(&f, &Element::int(-3), 10).unwrap(), r(7, 10));
        assert_eq!(folner_defect(&f, &Element::int(0), 7).unwrap(), r(1, 1));
        assert_eq!(folner_defect(&f, &Element::int(50), 10).unwrap(), r(0, 1));
        assert!(matches!(
            folner_defect(&f, &Element::int(1), 0),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn dilation_defect_counts_layers() {
        let zx = GroundStructure::Polynomials;
        let seed = vec![Element::poly(&[1]), Element::poly(&[1, 1])];
        let f = FolnerFamily::dilation(zx, seed, Element::poly(&[0, 1])).unwrap();
        // F_4 has 8 elements; x F_4 ∩ F_4 loses the top layer
        assert_eq!(f.window(4).unwrap().len(), 8);
        assert_eq!(folner_defect(&f, &Element::poly(&[0, 1]), 4).unwrap(), r(6, 8));
        assert_eq!(folner_defect(&f, &Element::poly(&[1]), 4).unwrap(), r(1, 1));
    }

    #[test]
    fn custom_window_range() {
        let f = FolnerFamily::custom(GroundStructure::Integers, vec![vec![Element::int(0)]], Action::Shift).unwrap();
        assert!(matches!(
            folner_defect(&f, &Element::int(0), 2),
            Err(Error::WindowOutOfRange { n: 2, .. })
        ));
        let bad = FolnerFamily::custom(
            GroundStructure::Integers,
            vec![vec![Element::int(0), Element::int(1)], vec![Element::int(5)]],
            Action::Shift,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn even_integers_have_density_half() {
        let even = SetSpec::multiples(2).unwrap();
        let est = upper_density(&even, &FolnerFamily::Intervals, 10, 1000, Exec::default()).unwrap();
        assert_eq!(est.value, r(1, 2));
        let all = upper_density(
            &SetSpec::all_integers(),
            &FolnerFamily::Intervals,
            1,
            50,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(all.value, r(1, 1));
        // odd n_min: floor(n/2)/n, the max over odd n alone is (n-1)/2n
        let est = upper_density(&even, &FolnerFamily::Intervals, 11, 11, Exec::default()).unwrap();
        assert_eq!(est.value, r(5, 11));
        assert_eq!(est.refinements.last().unwrap().n, 11);
    }

    #[test]
    fn banach_estimates() {
        let even = SetSpec::multiples(2).unwrap();
        let est = banach_upper_density_est(&even, 500, 10, Exec::default()).unwrap();
        assert_eq!(est.value, r(1, 2));
        assert_eq!(est.kind, EstimateKind::BanachLowerBound);

        let thick = SetSpec::union(vec![
            SetSpec::interval(Some(1), Some(100)),
            SetSpec::ints([150, 300, 450]),
        ])
        .unwrap();
        let est = banach_upper_density_est(&thick, 500, 100, Exec::default()).unwrap();
        assert_eq!(est.value, r(1, 1));
        assert_eq!(est.argmax, 1);
        assert!(banach_upper_density_est(&thick, 50, 100, Exec::default()).is_err());
    }

    #[test]
    fn dilation_probes() {
        let p = dilation_invariance_probe(
            &SetSpec::all_integers(),
            &Element::int(2),
            &FolnerFamily::Intervals,
            100,
            100,
            Exec::default(),
        )
        .unwrap();
        assert_eq!((p.base.value, p.dilated.value), (r(1, 1), r(1, 2)));

        let zx = GroundStructure::Polynomials;
        let x = Element::poly(&[0, 1]);
        let seed = zx.enumerate(20).into_iter().filter(|e| !e.is_zero()).collect();
        let fam = FolnerFamily::dilation(zx, seed, x.clone()).unwrap();
        let xzx = SetSpec::ideal(SubgroupSpec::poly_multiples(Poly::x()).unwrap());
        let p = dilation_invariance_probe(&xzx, &x, &fam, 40, 40, Exec::default()).unwrap();
        assert!(p.base.as_f64() > 0.9 && p.dilated.as_f64() > 0.9, "{p:?}");

        let p = dilation_invariance_probe(&xzx, &Element::poly(&[1]), &fam, 5, 20, Exec::default()).unwrap();
        assert_eq!(p.base, p.dilated);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let s = SetSpec::ints([1, 4, 9, 16, 25, 36, 49]);
        let a = upper_density(&s, &FolnerFamily::Intervals, 1, 60, Exec::Sequential).unwrap();
        let b = upper_density(&s, &FolnerFamily::Intervals, 1, 60, Exec::default()).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["value"], "1/1");
    }
}
