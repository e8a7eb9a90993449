use std::sync::Arc;

use ipstar_core::constructions::{
    avoid_sequence, diff_ipstar_demo, freesemigroup_counterexample, goswami_product_check, in_fa, k_cr_probe,
};
use ipstar_core::density::{dilation_invariance_probe, FolnerFamily};
use ipstar_core::largeness::{
    certify_ipr_star_window, delta_set, difference_set, dilation_coverage, ipr_search_cost, mult_thick_check,
    product_set, thick_obstruction,
};
use ipstar_core::sieve::PrimeSieve;
use ipstar_core::structures::Word;
use ipstar_core::{
    Certificate, Element, Error as CoreError, FiniteSequence, GroundStructure, Poly, SearchConfig, SetSpec,
    SubgroupSpec,
};
use serde_json::{json, Value};

use crate::config::*;
use crate::error::{LabError, Result};
use crate::report::{Outcome, Table};
use crate::rng::SampleRng;

fn js(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// `[-radius..radius]` without 0, in canonical order `1, -1, 2, -2, ...`.
fn signed_window(radius: i64) -> Vec<Element> {
    GroundStructure::Integers
        .enumerate(2 * radius as usize + 1)
        .split_off(1)
}

fn int_range(lo: i64, hi: i64) -> Vec<Element> {
    (lo..=hi).map(Element::int).collect()
}

fn positive_multiples(m: i64) -> Result<SetSpec> {
    Ok(SetSpec::intersection(vec![
        SetSpec::multiples(m)?,
        SetSpec::interval(Some(1), None),
    ])?)
}

pub fn run(cfg: &ExperimentConfig, search: &SearchConfig) -> Result<Outcome> {
    match &cfg.params {
        Params::IpstarSubgroup(p) => ipstar_subgroup(p, search),
        Params::AvoidZx(p) => avoid_zx(p, search),
        Params::Jdiff(p) => jdiff(p, cfg.seed, search),
        Params::CrDiff(p) => cr_diff(p, cfg.seed, search),
        Params::GoswamiPrimes(p) => goswami_primes(p, cfg, search),
        Params::GoswamiGeneric(p) => goswami_generic(p, search),
        Params::FreeSemigroup(p) => free_semigroup(p, search),
        Params::ZxPartition(p) => zx_partition(p, search),
        Params::DeltaRPrimes(p) => delta_r_primes(p, cfg),
    }
}

fn window_row(
    table: &mut Table,
    out: &mut Outcome,
    a: &SetSpec,
    r: usize,
    window: &[Element],
    search: &SearchConfig,
) -> Result<bool> {
    let v = certify_ipr_star_window(a, r, window, search)?;
    out.certificates.push(Certificate::new(
        "certify_ipr_star_window",
        json!({ "set": a.to_string(), "r": r, "window": window }),
        &v,
        v.recheck(a, search)?,
    ));
    table.push(vec![
        js(r),
        js(v.status),
        v.counterexample.as_ref().map(|c| js(c.terms())).unwrap_or(Value::Null),
        js(ipr_search_cost(window.len(), r)),
    ]);
    Ok(v.is_certified())
}

fn ipstar_subgroup(p: &IpstarSubgroupParams, search: &SearchConfig) -> Result<Outcome> {
    let a = SetSpec::multiples(p.k)?;
    let window = signed_window(p.window);
    let k = p.k as usize;
    let rs: Vec<usize> = if p.scan_min_r {
        (1..=k + 1).collect()
    } else {
        vec![k - 1, k + 1]
    };
    let mut out = Outcome::default();
    let mut table = Table::new("verdicts", &["r", "status", "counterexample", "search_cost"]);
    let (mut certified, mut falsified) = (Vec::new(), Vec::new());
    for r in rs.into_iter().filter(|&r| r >= 1) {
        if window_row(&mut table, &mut out, &a, r, &window, search)? {
            certified.push(r);
        } else {
            falsified.push(r);
        }
    }
    out.set("set", a.to_string());
    out.set("window", format!("[-{0}..{0}] without 0", p.window));
    out.set("certified_r", &certified);
    out.set("falsified_r", &falsified);
    if p.scan_min_r {
        out.set("minimal_certified_r", certified.first());
    }
    out.tables.push(table);
    out.notes
        .push("certification holds for the recorded window and r only".into());
    Ok(out)
}

fn avoid_zx(p: &AvoidZxParams, search: &SearchConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut table = Table::new("sequences", &["subgroup", "position", "term"]);
    let mut checked = serde_json::Map::new();
    for g in &p.generators {
        let alpha: Poly = g
            .parse()
            .map_err(|e: CoreError| LabError::InvalidConfig(format!("avoid-zx: generator `{g}`: {e}")))?;
        let h = SubgroupSpec::poly_multiples(alpha)?;
        let seq = avoid_sequence(&h, p.n, search)?;
        for (i, t) in seq.sequence.terms().iter().enumerate() {
            table.push(vec![js(h.describe()), js(i + 1), js(t)]);
        }
        checked.insert(h.describe(), js(seq.sums_checked));
        out.certificates.push(seq.certificate(&h)?);
    }
    out.set("finite_sums_checked", checked);
    out.tables.push(table);
    Ok(out)
}

fn jdiff(p: &JdiffParams, seed: u64, search: &SearchConfig) -> Result<Outcome> {
    let a = positive_multiples(p.modulus)?;
    let mut rng = SampleRng::new(seed);
    let y_window = int_range(1, p.y_max);
    let a_window = int_range(0, p.a_max);
    let mut out = Outcome::default();
    let mut table = Table::new(
        "samples",
        &["sample", "x", "found", "h", "a", "y", "sum", "lower", "upper"],
    );
    let mut found = 0;
    for i in 0..p.samples {
        let x = rng.vec_i64(p.length, p.term_min, p.term_max);
        let seq = FiniteSequence::ints(&x)?;
        match diff_ipstar_demo(&a, &seq, &y_window, &a_window, search) {
            Ok(w) => {
                found += 1;
                table.push(vec![
                    js(i),
                    js(&x),
                    js(true),
                    js(w.h.positions()),
                    js(&w.a),
                    js(&w.y),
                    js(&w.sum),
                    js(&w.lower),
                    js(&w.upper),
                ]);
                out.certificates.push(w.certificate(&a, &seq)?);
            }
            Err(CoreError::GridExhausted { .. }) => {
                let mut row = vec![js(i), js(&x), js(false)];
                row.resize(9, Value::Null);
                table.push(row);
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.set("set", a.to_string());
    out.set("found", found);
    out.set("samples", p.samples);
    out.tables.push(table);
    Ok(out)
}

fn cr_diff(p: &CrDiffParams, seed: u64, search: &SearchConfig) -> Result<Outcome> {
    let a = positive_multiples(p.modulus)?;
    let mut rng = SampleRng::new(seed);
    let families: Vec<Vec<FiniteSequence>> = (0..p.samples)
        .map(|_| {
            (0..p.k)
                .map(|_| FiniteSequence::ints(&rng.vec_i64(p.r, 1, p.term_max)))
                .collect::<std::result::Result<_, _>>()
        })
        .collect::<std::result::Result<_, _>>()?;
    let probe = k_cr_probe(&a, p.k, p.r, &families, &int_range(0, p.a_max), search)?;
    let mut out = Outcome::default();
    let mut table = Table::new("families", &["sample", "family", "a", "h", "images"]);
    for (i, w) in probe.witnesses.iter().enumerate() {
        let fam: Vec<String> = families[i].iter().map(|f| f.to_string()).collect();
        table.push(vec![js(i), js(fam), js(&w.a), js(w.h.positions()), js(&w.images)]);
        out.certificates.push(w.certificate(&a, &families[i])?);
    }
    out.tables.push(table);
    out.set("set", a.to_string());
    out.set("families_with_witness", probe.witnesses.len());
    out.set("first_failure", &probe.failure);

    let truncated = SetSpec::explicit(
        GroundStructure::Integers,
        (1..=p.bound as i64).filter(|n| n % p.modulus == 0).map(Element::int),
    )?;
    let diff = difference_set(&truncated, p.bound)?;
    let window = signed_window(p.window);
    let mut verdicts = Table::new("difference_verdicts", &["r", "status", "counterexample", "search_cost"]);
    let mut certified = Vec::new();
    for r in [p.r - 1, p.r].into_iter().filter(|&r| r >= 1) {
        if window_row(&mut verdicts, &mut out, &diff, r, &window, search)? {
            certified.push(r);
        }
    }
    out.set("difference_certified_r", certified);
    out.tables.push(verdicts);
    Ok(out)
}

pub fn sieve_primes(limit: u64, cfg: &ExperimentConfig) -> Result<Arc<PrimeSieve>> {
    let (sieve, _) = PrimeSieve::load_or_compute(limit, &cfg.cache_dir, cfg.guards.max_sieve_limit)?;
    Ok(Arc::new(sieve))
}

/// First `(d1, d2)` with `d1 * d2 = n` and both factors in `d`, divisors increasing.
fn factor_through(d: &SetSpec, n: i64) -> Result<Option<(i64, i64)>> {
    let mut e = 1i64;
    while e * e <= n.abs() {
        if n % e == 0 {
            let f = n / e;
            for (x, y) in [(e, f), (f, e), (-e, -f), (-f, -e)] {
                if d.contains(&Element::int(x))? && d.contains(&Element::int(y))? {
                    return Ok(Some((x, y)));
                }
            }
        }
        e += 1;
    }
    Ok(None)
}

fn goswami_primes(p: &GoswamiPrimesParams, cfg: &ExperimentConfig, search: &SearchConfig) -> Result<Outcome> {
    let sieve = sieve_primes(p.prime_limit, cfg)?;
    let primes = SetSpec::primes(sieve.clone());
    let d = difference_set(&primes, p.m)?;
    let pd = product_set(&d, &d, p.m)?;
    let mut out = Outcome::default();
    let mut pi = Table::new("prime_count", &["limit", "pi"]);
    pi.push(vec![js(p.prime_limit), js(sieve.count())]);
    out.tables.push(pi);
    let mut table = Table::new("coverage", &["k", "multiples_checked", "missing_count", "missing"]);
    let mut covering = Vec::new();
    for k in 1..=p.k_max {
        let rep = dilation_coverage(&Element::int(k as i64), &pd, p.m, search.exec)?;
        if rep.is_covered() {
            covering.push(k);
        }
        table.push(vec![
            js(k),
            js(rep.multiples_checked),
            js(rep.missing.len()),
            js(&rep.missing),
        ]);
    }
    out.tables.push(table);
    let min_k = covering.first().copied();
    if let Some(k) = min_k {
        let mut pairs = Vec::new();
        let mut ok = true;
        for j in 1..=p.m / k {
            let n = (j * k) as i64;
            match factor_through(&d, n)? {
                Some((x, y)) => {
                    ok &= x * y == n;
                    pairs.push([n, x, y]);
                }
                None => ok = false,
            }
        }
        out.certificates.push(Certificate::new(
            "dilation_coverage",
            json!({ "k": k, "M": p.m, "prime_limit": p.prime_limit }),
            json!({ "factorizations": pairs }),
            ok,
        ));
    }
    out.set("prime_count", sieve.count());
    out.set("covering_k", &covering);
    out.set("min_covering_k", min_k);
    out.notes.push(format!(
        "min_covering_k is the least k <= {} covering every multiple up to {}; it is not a claim about the global minimum",
        p.k_max, p.m
    ));
    Ok(out)
}

fn goswami_generic(p: &GoswamiGenericParams, search: &SearchConfig) -> Result<Outcome> {
    let a = SetSpec::multiples(p.a_mod)?;
    let b_set = SetSpec::multiples(p.b_mod)?;
    let b = FiniteSequence::ints(&p.b)?;
    let res = goswami_product_check(
        &a,
        &b_set,
        &b,
        &signed_window(p.x_window),
        &int_range(-p.r_window, p.r_window),
        search,
    )?;
    let mut out = Outcome::default();
    let mut table = Table::new("products", &["x", "h", "scaled_sum", "r", "a_prime", "product"]);
    for c in &res.certificates {
        table.push(vec![
            js(&c.x),
            js(c.h.positions()),
            js(&c.scaled_sum),
            js(&c.r),
            js(&c.a_prime),
            js(&c.product),
        ]);
        out.certificates.push(c.certificate(&a, &b_set, &b)?);
    }
    out.tables.push(table);
    out.set("A", a.to_string());
    out.set("B", b_set.to_string());
    out.set("fs_b", &res.d.fs_b);
    out.set("d_members", &res.d.members);
    out.set("x_checked", res.index_sets.len());
    Ok(out)
}

fn words(items: &[&str]) -> Vec<Word> {
    items.iter().map(|s| Word::new(*s).expect("nonempty")).collect()
}

fn free_semigroup(p: &FreeSemigroupParams, search: &SearchConfig) -> Result<Outcome> {
    let families = vec![
        vec![words(&["b", "bb", "bbb"]), words(&["ab", "abab", "ababab"])],
        vec![words(&["ab", "aab", "aaab"])],
        vec![
            words(&["b", "b", "b"]),
            words(&["ba", "ba", "ba"]),
            words(&["bab", "bab", "bab"]),
        ],
    ];
    let rep = freesemigroup_counterexample(p.max_len, &families, p.witness_window, search)?;
    let mut out = Outcome::default();
    let mut quotient = Table::new("quotient", &["length", "count", "words_of_length"]);
    for (len, count) in &rep.quotient_counts {
        quotient.push(vec![js(len), js(count), js(1u64 << len)]);
    }
    out.tables.push(quotient);
    let mut powers = Table::new("b_powers", &["n", "in_quotient"]);
    for n in 1..=rep.b_powers_checked {
        powers.push(vec![js(n), js(rep.b_power_hits.contains(&n))]);
    }
    out.tables.push(powers);
    let mut wt = Table::new("j_witnesses", &["family", "h", "separators", "images"]);
    for (i, w) in rep.j_witnesses.iter().enumerate() {
        wt.push(vec![js(i), js(w.h.positions()), js(&w.a), js(&w.images)]);
        out.certificates.push(Certificate::new(
            "nc_j_witness",
            json!({ "family": &families[i] }),
            w,
            w.recheck(&families[i], in_fa),
        ));
    }
    out.tables.push(wt);
    out.certificates.push(Certificate::new(
        "quotient_scan",
        json!({ "max_len": p.max_len }),
        json!({ "pairs_checked": rep.pairs_checked, "b_power_hits": &rep.b_power_hits }),
        rep.b_power_hits.is_empty(),
    ));
    out.set("set", "words of length >= 2 ending in a");
    out.set("quotient_size", rep.quotient_size);
    out.set("max_quotient_word_len", rep.b_powers_checked);
    out.set("b_power_hits", &rep.b_power_hits);
    out.set("pairs_checked", rep.pairs_checked);
    Ok(out)
}

fn zx_partition(p: &ZxPartitionParams, search: &SearchConfig) -> Result<Outcome> {
    let zx = GroundStructure::Polynomials;
    let x = Element::poly(&[0, 1]);
    let h = SubgroupSpec::poly_multiples(Poly::x())?;
    let cell = SetSpec::ideal(h.clone());
    let complement = SetSpec::complement(cell.clone(), None)?;
    let mut out = Outcome::default();

    let seq = avoid_sequence(&h, p.n, search)?;
    let mut avoid = Table::new("avoiding_sequence", &["position", "term"]);
    for (i, t) in seq.sequence.terms().iter().enumerate() {
        avoid.push(vec![js(i + 1), js(t)]);
    }
    out.certificates.push(seq.certificate(&h)?);
    out.tables.push(avoid);

    let factors = vec![Element::poly(&[1]), x.clone()];
    let flag = thick_obstruction(&complement, &factors)?;
    let mut thick = Table::new("thickness", &["window", "witness", "analytic_flag"]);
    let mut any_witness = false;
    for &w in &p.windows {
        let found = mult_thick_check(&complement, &factors, &zx.enumerate(w), search.exec)?;
        any_witness |= found.is_some();
        thick.push(vec![js(w), js(&found), js(flag.is_some())]);
    }
    out.tables.push(thick);
    out.certificates.push(Certificate::new(
        "thick_obstruction",
        json!({ "set": complement.to_string(), "factors": &factors }),
        json!({ "factor_in_ideal": &flag }),
        match &flag {
            Some(f) => h.contains(f)?,
            None => true,
        },
    ));

    let seed: Vec<Element> = zx
        .enumerate(p.seed_size + 1)
        .into_iter()
        .filter(|e| !e.is_zero())
        .collect();
    let family = FolnerFamily::dilation(zx, seed, x.clone())?;
    let mut dens = Table::new(
        "dilation_density",
        &["cell", "density", "dilated_density", "difference"],
    );
    for (name, set) in [("xZ[x]", &cell), ("complement", &complement)] {
        let probe = dilation_invariance_probe(set, &x, &family, p.density_n, p.density_n, search.exec)?;
        let v = js(&probe);
        dens.push(vec![
            js(name),
            v["base"]["value"].clone(),
            v["dilated"]["value"].clone(),
            v["difference"].clone(),
        ]);
    }
    out.tables.push(dens);
    out.set("avoiding_sequence_verified", true);
    out.set("thick_witness_found", any_witness);
    out.set("analytic_flag", flag.is_some());
    out.set("dilation_family", family.to_string());
    out.notes.push("diagnostics are necessary-condition checks only".into());
    Ok(out)
}

fn binomial(n: u64, r: u64) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn delta_r_primes(p: &DeltaRPrimesParams, cfg: &ExperimentConfig) -> Result<Outcome> {
    let sieve = sieve_primes(p.prime_limit, cfg)?;
    let d = difference_set(&SetSpec::primes(sieve), p.bound)?;
    let in_d: Vec<bool> = (0..=p.bound as i64)
        .map(|k| d.contains(&Element::int(k)))
        .collect::<std::result::Result<_, _>>()?;
    let mut out = Outcome::default();
    let mut table = Table::new("scan", &["r", "subsets_checked", "counterexamples", "examples"]);
    let mut survivors = Vec::new();
    for &r in &p.rs {
        let count = binomial(p.bound, r as u64);
        if count > p.max_subsets as u128 {
            return Err(CoreError::GuardExceeded {
                what: "delta-r scan".into(),
                detail: format!("C({}, {r}) subsets exceeds max_subsets {}", p.bound, p.max_subsets),
                cost_estimate: count as f64,
            }
            .into());
        }
        if r as u64 > p.bound {
            continue;
        }
        let mut idx: Vec<u64> = (1..=r as u64).collect();
        let (mut checked, mut bad) = (0u64, 0u64);
        let mut examples = Vec::new();
        loop {
            checked += 1;
            let hit = idx
                .iter()
                .enumerate()
                .any(|(i, s)| idx[..i].iter().any(|t| in_d[(s - t) as usize]));
            if !hit {
                bad += 1;
                if examples.len() < p.max_examples {
                    let elems: Vec<Element> = idx.iter().map(|&v| Element::int(v as i64)).collect();
                    let delta = delta_set(&elems)?;
                    let members = delta.finite_members()?.unwrap_or_default();
                    let mut ok = true;
                    for m in &members {
                        ok &= !d.contains(m)?;
                    }
                    out.certificates.push(Certificate::new(
                        "delta_r_counterexample",
                        json!({ "r": r, "subset": &idx }),
                        json!({ "differences": members }),
                        ok,
                    ));
                    examples.push(format!(
                        "{{{}}}",
                        idx.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    ));
                }
            }
            // next r-subset in lexicographic order
            let Some(i) = (0..r).rev().find(|&i| idx[i] < p.bound - (r - 1 - i) as u64) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
        if bad == 0 {
            survivors.push(r);
        }
        table.push(vec![js(r), js(checked), js(bad), js(examples)]);
    }
    out.tables.push(table);
    out.set("bound", p.bound);
    out.set("surviving_r", survivors);
    out.notes
        .push("survival is relative to subsets of the scanned range only".into());
    Ok(out)
}
