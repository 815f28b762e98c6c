//! Stratification of the compactified Picard variety.
//!
//! A stratum is a pair `(S, deg_hat)`: a set of nodes together with a
//! strictly balanced multidegree on the blow-up of the curve at `S`. The
//! stratum is isomorphic to the Picard variety of the partial normalization
//! at `S` in the restricted multidegree; its dimension is the sum of the
//! arithmetic genera of the connected components of that normalization.
//! The limit-effective locus is the union of the strata whose multidegree
//! is non-negative.

use crate::error::Error;
use crate::graph::{DualGraph, NodeSet, DEFAULT_GAMMA_CAP};
use crate::multidegree::{self, div_ceil, div_floor, Filter, Multidegree};
use crate::Result;

/// One stratum `(S, deg_hat)` of the compactified Picard variety.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    /// The blown-up node set on the base curve.
    pub nodes: NodeSet,
    /// Strictly balanced multidegree on the blow-up (exceptional entries 1).
    pub deg_hat: Multidegree,
    /// Restriction of `deg_hat` to the strict transform.
    pub deg_restr: Multidegree,
    /// Dimension of the stratum.
    pub dim: i64,
    /// Whether `deg_hat >= 0`.
    pub nonneg: bool,
}

impl Stratum {
    /// Identity of the stratum for census comparisons.
    pub fn key(&self) -> (&NodeSet, &Multidegree) {
        (&self.nodes, &self.deg_hat)
    }
}

/// Dimension of the stratum with node set `s`: the total arithmetic genus of
/// the normalization of the curve at `s`.
pub fn stratum_dimension(x: &DualGraph, s: &NodeSet) -> Result<i64> {
    Ok(x.normalize(s)?.component_genera().iter().sum())
}

/// Every stratum `(S, deg_hat)` of total degree `d`, ordered by `|S|`, then
/// `S` lexicographically, then `deg_hat` lexicographically.
pub fn enumerate_strata(x: &DualGraph, d: i64) -> Result<Vec<Stratum>> {
    enumerate_strata_with_cap(x, d, DEFAULT_GAMMA_CAP)
}

pub fn enumerate_strata_with_cap(x: &DualGraph, d: i64, cap: usize) -> Result<Vec<Stratum>> {
    let class = x.classify();
    if !class.stable {
        return Err(Error::InvalidInput(
            "stratification requires a stable curve".into(),
        ));
    }
    let delta = x.delta();
    if delta > cap {
        return Err(Error::CapExceeded {
            what: "nodes (2^delta blow-up sets)",
            size: delta,
            cap,
        });
    }
    let g = x.genus()?;
    let mut out = Vec::new();
    for k in 0..=delta {
        for combo in combinations(delta, k) {
            let s = NodeSet::new(combo);
            let dim = stratum_dimension(x, &s)?;
            let deg_hats = if class.binary {
                binary_blowup_strict(g, d, k as i64, delta as i64)
            } else {
                let blowup = x.blow_up(&s)?;
                multidegree::enumerate_multidegrees_with_cap(&blowup.graph, d, Filter::Strict, cap)?
            };
            for deg_hat in deg_hats {
                let base = x.gamma();
                let deg_restr = Multidegree::new(deg_hat.entries()[..base].to_vec());
                let nonneg = deg_hat.is_nonneg();
                out.push(Stratum {
                    nodes: s.clone(),
                    deg_hat,
                    deg_restr,
                    dim,
                    nonneg,
                });
            }
        }
    }
    Ok(out)
}

/// Strictly balanced multidegrees on the blow-up of a binary curve of genus
/// `g` at `k` of its `delta` nodes, in lexicographic order.
///
/// On such blow-ups the subcurve inequalities collapse to
/// `m(d,g) <= d_i <= M(d,g) - k` for the two strict-transform entries, with
/// strict inequalities required unless every node was blown up (then every
/// subcurve boundary lies on exceptional components and nothing is strict).
fn binary_blowup_strict(g: i64, d: i64, k: i64, delta: i64) -> Vec<Multidegree> {
    let total_restr = d - k;
    let strict = k < delta;
    let (lo1, hi1) = if strict {
        (
            div_floor(d - g - 1, 2) + 1,
            div_ceil(d + g + 1 - 2 * k, 2) - 1,
        )
    } else {
        (div_ceil(d - g - 1, 2), div_floor(d + g + 1 - 2 * k, 2))
    };
    let lo = lo1.max(total_restr - hi1);
    let hi = hi1.min(total_restr - lo1);
    let mut out = Vec::new();
    let mut d1 = lo;
    while d1 <= hi {
        let mut entries = vec![d1, total_restr - d1];
        entries.extend(std::iter::repeat(1).take(k as usize));
        out.push(Multidegree::new(entries));
        d1 += 1;
    }
    out
}

/// The strata of the limit-effective locus: the non-negative sub-census.
pub fn wtilde_census(x: &DualGraph, d: i64) -> Result<Vec<Stratum>> {
    wtilde_census_with_cap(x, d, DEFAULT_GAMMA_CAP)
}

pub fn wtilde_census_with_cap(x: &DualGraph, d: i64, cap: usize) -> Result<Vec<Stratum>> {
    Ok(enumerate_strata_with_cap(x, d, cap)?
        .into_iter()
        .filter(|s| s.nonneg)
        .collect())
}

/// Whether the stratum refines the coarse multidegree `deg` on a binary curve.
///
/// Each exceptional component carries degree 1 and every node of a binary
/// curve meets both components, so the stratum refines `deg` exactly when the
/// per-component gaps `d_i - d_i^S` are non-negative and sum to `|S|`.
pub fn refines_binary(x: &DualGraph, deg: &Multidegree, stratum: &Stratum) -> Result<bool> {
    if !x.classify().binary {
        return Err(Error::NotBinary);
    }
    if deg.len() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            got: deg.len(),
        });
    }
    let gap0 = deg[0] - stratum.deg_restr[0];
    let gap1 = deg[1] - stratum.deg_restr[1];
    Ok(gap0 >= 0 && gap1 >= 0 && gap0 + gap1 == stratum.nodes.len() as i64)
}

/// Closure strata of a single coarse multidegree: the non-negative strata
/// refining `deg`.
pub fn closure_census(x: &DualGraph, deg: &Multidegree) -> Result<Vec<Stratum>> {
    closure_census_with_cap(x, deg, DEFAULT_GAMMA_CAP)
}

pub fn closure_census_with_cap(
    x: &DualGraph,
    deg: &Multidegree,
    cap: usize,
) -> Result<Vec<Stratum>> {
    if !x.classify().binary {
        return Err(Error::NotBinary);
    }
    let report = multidegree::check_balanced_with_cap(x, deg, cap)?;
    if !report.strictly_balanced || !deg.is_nonneg() {
        return Err(Error::InvalidMultidegree(format!(
            "{deg} is not a non-negative strictly balanced multidegree"
        )));
    }
    let mut out = Vec::new();
    for stratum in wtilde_census_with_cap(x, deg.total(), cap)? {
        if refines_binary(x, deg, &stratum)? {
            out.push(stratum);
        }
    }
    Ok(out)
}

/// Degree-1 census of a stable curve.
#[derive(Debug, Clone)]
pub struct DegreeOneReport {
    /// Strictly balanced non-negative multidegrees of total degree 1.
    pub b1_nonneg: Vec<Multidegree>,
    /// The limit-effective strata in degree 1.
    pub strata: Vec<Stratum>,
    /// Whether any strictly balanced multidegree of total degree 1 exists.
    pub one_general: bool,
}

pub fn degree_one_report(x: &DualGraph) -> Result<DegreeOneReport> {
    degree_one_report_with_cap(x, DEFAULT_GAMMA_CAP)
}

pub fn degree_one_report_with_cap(x: &DualGraph, cap: usize) -> Result<DegreeOneReport> {
    if !x.classify().stable {
        return Err(Error::InvalidInput(
            "degree-1 census requires a stable curve".into(),
        ));
    }
    let b1_nonneg = multidegree::enumerate_multidegrees_with_cap(x, 1, Filter::StrictNonneg, cap)?;
    let strata = wtilde_census_with_cap(x, 1, cap)?;
    let one_general =
        !multidegree::enumerate_multidegrees_with_cap(x, 1, Filter::Strict, cap)?.is_empty();
    Ok(DegreeOneReport {
        b1_nonneg,
        strata,
        one_general,
    })
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use std::collections::BTreeSet;

    fn md(entries: &[i64]) -> Multidegree {
        Multidegree::new(entries.to_vec())
    }

    #[test]
    fn binary_g3_d2_census() {
        let x = corpus::binary(3);
        let census = wtilde_census(&x, 2).unwrap();
        assert_eq!(census.len(), 17);
        let by_size = |k: usize| census.iter().filter(|s| s.nodes.len() == k).count();
        assert_eq!(by_size(0), 3);
        assert_eq!(by_size(1), 8);
        assert_eq!(by_size(2), 6);
    }

    #[test]
    fn binary_g3_d1_census() {
        let x = corpus::binary(3);
        let census = wtilde_census(&x, 1).unwrap();
        assert_eq!(census.len(), 6);
        assert_eq!(census.iter().filter(|s| s.nodes.is_empty()).count(), 2);
        assert_eq!(census.iter().filter(|s| s.nodes.len() == 1).count(), 4);
        for s in census.iter().filter(|s| s.nodes.len() == 1) {
            assert_eq!(s.deg_restr, md(&[0, 0]));
        }
    }

    #[test]
    fn binary_g2_d1_census() {
        let census = wtilde_census(&corpus::binary(2), 1).unwrap();
        assert_eq!(census.len(), 5);
    }

    #[test]
    fn degree_zero_single_stratum() {
        let census = wtilde_census(&corpus::binary(3), 0).unwrap();
        assert_eq!(census.len(), 1);
        assert!(census[0].nodes.is_empty());
        assert_eq!(census[0].deg_hat, md(&[0, 0]));
    }

    #[test]
    fn stratum_dimensions() {
        let x = corpus::binary(3);
        assert_eq!(stratum_dimension(&x, &NodeSet::empty()).unwrap(), 3);
        assert_eq!(stratum_dimension(&x, &NodeSet::new(vec![0])).unwrap(), 2);
        let y = corpus::chain(&[1, 1]);
        assert_eq!(stratum_dimension(&y, &NodeSet::new(vec![0])).unwrap(), 2);
    }

    #[test]
    fn strata_order_is_canonical() {
        let x = corpus::binary(2);
        let strata = enumerate_strata(&x, 1).unwrap();
        let keys: Vec<(usize, Vec<usize>, Vec<i64>)> = strata
            .iter()
            .map(|s| {
                (
                    s.nodes.len(),
                    s.nodes.indices().to_vec(),
                    s.deg_hat.entries().to_vec(),
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn binary_fast_path_matches_general_checker() {
        for g in 2..=5 {
            let x = corpus::binary(g);
            let delta = x.delta();
            for d in -2..=(g + 2) {
                for mask in 0u32..1 << delta {
                    let s = NodeSet::new((0..delta).filter(|e| mask >> e & 1 == 1).collect());
                    let blowup = x.blow_up(&s).unwrap();
                    let fast = binary_blowup_strict(g, d, s.len() as i64, delta as i64);
                    let general =
                        multidegree::enumerate_multidegrees(&blowup.graph, d, Filter::Strict)
                            .unwrap();
                    assert_eq!(fast, general, "g={g} d={d} S={s:?}");
                }
            }
        }
    }

    #[test]
    fn irreducible_census_counts() {
        // One rational component with delta0 loops: the effective strata are
        // in bijection with node subsets of size at most d.
        fn choose(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for delta0 in 2..=8usize {
            let x = corpus::irreducible(0, delta0);
            for d in 0..=(delta0 as i64 + 2) {
                let census = wtilde_census(&x, d).unwrap();
                let expected: u64 = (0..=(d.max(0) as u64).min(delta0 as u64))
                    .map(|k| choose(delta0 as u64, k))
                    .sum();
                assert_eq!(census.len() as u64, expected, "delta0={delta0} d={d}");
            }
        }
        // A positive-genus component does not change the census shape.
        let x = corpus::irreducible(2, 3);
        assert_eq!(wtilde_census(&x, 2).unwrap().len(), 1 + 3 + 3);
    }

    #[test]
    fn refinement_examples() {
        let x = corpus::binary(3);
        let strata = wtilde_census(&x, 2).unwrap();
        let pick = |k: usize, restr: &[i64]| {
            strata
                .iter()
                .find(|s| s.nodes.len() == k && s.deg_restr.entries() == restr)
                .unwrap()
                .clone()
        };
        let s01 = pick(1, &[0, 1]);
        assert!(refines_binary(&x, &md(&[1, 1]), &s01).unwrap());
        assert!(!refines_binary(&x, &md(&[2, 0]), &s01).unwrap());
        let top = pick(0, &[1, 1]);
        assert!(refines_binary(&x, &md(&[1, 1]), &top).unwrap());
    }

    #[test]
    fn refinement_rejects_non_binary() {
        let x = corpus::chain(&[1, 1]);
        let stratum = Stratum {
            nodes: NodeSet::empty(),
            deg_hat: md(&[1, 0]),
            deg_restr: md(&[1, 0]),
            dim: 2,
            nonneg: true,
        };
        assert_eq!(
            refines_binary(&x, &md(&[1, 0]), &stratum).unwrap_err(),
            Error::NotBinary
        );
    }

    #[test]
    fn closure_census_binary_g3() {
        let x = corpus::binary(3);
        assert_eq!(closure_census(&x, &md(&[1, 1])).unwrap().len(), 15);
        assert_eq!(closure_census(&x, &md(&[2, 0])).unwrap().len(), 11);
        assert_eq!(closure_census(&x, &md(&[0, 2])).unwrap().len(), 11);

        let mut union: BTreeSet<(NodeSet, Multidegree)> = BTreeSet::new();
        for deg in [[0, 2], [1, 1], [2, 0]] {
            for s in closure_census(&x, &md(&deg)).unwrap() {
                union.insert((s.nodes.clone(), s.deg_hat.clone()));
            }
        }
        let wtilde: BTreeSet<(NodeSet, Multidegree)> = wtilde_census(&x, 2)
            .unwrap()
            .into_iter()
            .map(|s| (s.nodes, s.deg_hat))
            .collect();
        assert_eq!(union, wtilde);
    }

    #[test]
    fn closure_census_rejects_invalid_multidegree() {
        let x = corpus::binary(3);
        assert!(matches!(
            closure_census(&x, &md(&[-1, 3])).unwrap_err(),
            Error::InvalidMultidegree(_)
        ));
    }

    #[test]
    fn closure_identity_small_genera() {
        for g in 2..=6 {
            let x = corpus::binary(g);
            for d in 1..=(g - 1) {
                let wtilde: BTreeSet<(NodeSet, Multidegree)> = wtilde_census(&x, d)
                    .unwrap()
                    .into_iter()
                    .map(|s| (s.nodes, s.deg_hat))
                    .collect();
                let mut union = BTreeSet::new();
                for deg in
                    multidegree::enumerate_multidegrees(&x, d, Filter::StrictNonneg).unwrap()
                {
                    for s in closure_census(&x, &deg).unwrap() {
                        union.insert((s.nodes, s.deg_hat));
                    }
                }
                assert_eq!(union, wtilde, "g={g} d={d}");
            }
        }
    }

    #[test]
    fn degree_one_report_examples() {
        let x = corpus::binary(3);
        let r = degree_one_report(&x).unwrap();
        assert_eq!(r.b1_nonneg, vec![md(&[0, 1]), md(&[1, 0])]);
        assert!(r.one_general);
        assert!(r.strata.iter().all(|s| s.nodes.len() <= 1));

        // Two elliptic components, one separating node: no balanced
        // multidegree on the curve itself, but blowing up the node yields the
        // one effective stratum (strictness is vacuous across the
        // exceptional component).
        let y = corpus::chain(&[1, 1]);
        let r = degree_one_report(&y).unwrap();
        assert!(r.b1_nonneg.is_empty());
        assert!(!r.one_general);
        assert_eq!(r.strata.len(), 1);
        assert_eq!(r.strata[0].nodes.len(), 1);
        assert_eq!(r.strata[0].deg_hat, md(&[0, 0, 1]));
        assert_eq!(r.strata[0].dim, 2);

        let z = corpus::irreducible(2, 1);
        let r = degree_one_report(&z).unwrap();
        assert_eq!(r.b1_nonneg, vec![md(&[1])]);
    }

    #[test]
    fn dimension_consistency() {
        // dim = g - |S| + (#components of the normalization - 1), and the
        // maximum g is attained exactly at S = empty.
        for x in [
            corpus::binary(5),
            corpus::chain(&[1, 1, 1]),
            corpus::irreducible(1, 3),
        ] {
            let g = x.genus().unwrap();
            let strata = enumerate_strata(&x, 1).unwrap();
            let mut max_dim = i64::MIN;
            for s in &strata {
                let n = x.normalize(&s.nodes).unwrap();
                let expected =
                    g - s.nodes.len() as i64 + n.connected_components().len() as i64 - 1;
                assert_eq!(s.dim, expected);
                max_dim = max_dim.max(s.dim);
                if s.dim == g {
                    assert!(s.nodes.is_empty());
                }
            }
            if strata.iter().any(|s| s.nodes.is_empty()) {
                assert_eq!(max_dim, g);
            }
        }
    }

    #[test]
    fn nonneg_degree_one_strata_have_small_node_sets() {
        for x in corpus::stable_corpus(4, 2, 25) {
            let census = wtilde_census(&x, 1).unwrap();
            for s in &census {
                assert!(
                    s.nodes.len() <= 1,
                    "counterexample: {} stratum {:?}",
                    x.to_curve_string(),
                    s
                );
            }
        }
    }

    #[test]
    fn refinement_reflexive_and_monotone() {
        for g in 2..=6 {
            let x = corpus::binary(g);
            for d in 1..=(g - 1) {
                let degs =
                    multidegree::enumerate_multidegrees(&x, d, Filter::StrictNonneg).unwrap();
                let strata = wtilde_census(&x, d).unwrap();
                for deg in &degs {
                    // Reflexivity at S = empty.
                    let top = strata
                        .iter()
                        .find(|s| s.nodes.is_empty() && &s.deg_hat == deg)
                        .unwrap();
                    assert!(refines_binary(&x, deg, top).unwrap());
                    // Monotonicity: dropping one node from a refining stratum
                    // leaves some intermediate refining stratum that the finer
                    // one still refines within one unit of degree.
                    for s in &strata {
                        if !refines_binary(&x, deg, s).unwrap() || s.nodes.is_empty() {
                            continue;
                        }
                        let smaller: Vec<usize> = s.nodes.indices()[1..].to_vec();
                        let found = strata
                            .iter()
                            .filter(|t| t.nodes == NodeSet::new(smaller.clone()))
                            .any(|t| {
                                refines_binary(&x, deg, t).unwrap()
                                    && gaps_refine(&t.deg_restr, &s.deg_restr, 1)
                            });
                        assert!(found, "g={g} d={d} deg={deg} stratum {s:?}");
                    }
                }
            }
        }
    }

    fn gaps_refine(coarse: &Multidegree, fine: &Multidegree, nodes: i64) -> bool {
        let gap0 = coarse[0] - fine[0];
        let gap1 = coarse[1] - fine[1];
        gap0 >= 0 && gap1 >= 0 && gap0 + gap1 == nodes
    }
}
