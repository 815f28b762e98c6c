//! Component census for effective loci on curves of compact type.
//!
//! On a curve of compact type (tree dual graph) the effective locus in a
//! non-negative multidegree splits along sign patterns recording which
//! components carry sections. Each admissible pattern other than the
//! all-plus one contributes as many irreducible components as it has plus
//! signs, giving the census
//!
//! ```text
//! N = 1 + sum over admissible I != (+,...,+) of |I+|
//! ```
//!
//! A pattern is inadmissible when it puts a minus on a component whose
//! degree already reaches its genus (such restrictions always have
//! sections). Only the census is computed here; the loci themselves are out
//! of reach without rank computations on positive-genus components.

use std::fmt;

use crate::error::Error;
use crate::graph::{DualGraph, DEFAULT_GAMMA_CAP};
use crate::multidegree::Multidegree;
use crate::Result;

/// A vector of signs over the components, `+` marking components whose
/// restriction has a section.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern {
    plus: Vec<bool>,
}

impl SignPattern {
    pub fn new(plus: Vec<bool>) -> Self {
        SignPattern { plus }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn is_plus(&self, v: usize) -> bool {
        self.plus[v]
    }

    /// Indices carrying `+`.
    pub fn i_plus(&self) -> Vec<usize> {
        (0..self.plus.len()).filter(|&v| self.plus[v]).collect()
    }

    /// Indices carrying `-`.
    pub fn i_minus(&self) -> Vec<usize> {
        (0..self.plus.len()).filter(|&v| !self.plus[v]).collect()
    }

    pub fn plus_count(&self) -> usize {
        self.plus.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.plus {
            write!(f, "{}", if b { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// The sign-pattern census of a compact-type effective locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCensus {
    /// Number of irreducible components.
    pub n: i64,
    /// The admissible patterns other than all-plus, with their contributions.
    pub patterns: Vec<(SignPattern, usize)>,
}

/// Counts the irreducible components of the effective locus on a curve of
/// compact type in multidegree `deg`.
pub fn component_count(x: &DualGraph, deg: &Multidegree) -> Result<PatternCensus> {
    component_count_with_cap(x, deg, DEFAULT_GAMMA_CAP)
}

pub fn component_count_with_cap(
    x: &DualGraph,
    deg: &Multidegree,
    cap: usize,
) -> Result<PatternCensus> {
    if !x.classify().compact_type {
        return Err(Error::NotCompactType);
    }
    let gamma = x.gamma();
    if deg.len() != gamma {
        return Err(Error::LengthMismatch {
            expected: gamma,
            got: deg.len(),
        });
    }
    if !deg.is_nonneg() {
        return Err(Error::RangeViolation(format!(
            "multidegree {deg} has a negative entry"
        )));
    }
    if gamma > cap.min(31) {
        return Err(Error::CapExceeded {
            what: "components (2^gamma sign patterns)",
            size: gamma,
            cap: cap.min(31),
        });
    }
    // A minus on a component with d_k >= g_k never occurs.
    let forced_plus: Vec<bool> = (0..gamma).map(|v| deg[v] >= x.vertex_genus(v)).collect();
    let mut patterns = Vec::new();
    let mut n: i64 = 1;
    let all = (1u32 << gamma) - 1;
    for minus_mask in 1..=all {
        if minus_mask == all {
            // The all-minus pattern contributes |I+| = 0; dropped.
            continue;
        }
        if (0..gamma).any(|v| minus_mask >> v & 1 == 1 && forced_plus[v]) {
            continue;
        }
        let plus: Vec<bool> = (0..gamma).map(|v| minus_mask >> v & 1 == 0).collect();
        let pattern = SignPattern::new(plus);
        let contribution = pattern.plus_count();
        n += contribution as i64;
        patterns.push((pattern, contribution));
    }
    Ok(PatternCensus { n, patterns })
}

/// Parameter regime of a two-component compact-type curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoComponentCase {
    /// `d_1 <= g_1 - 1` and `d_2 <= g_2 - 1`: three components.
    BothSmall,
    /// `d_1 >= g_1`, `d_2 <= g_2 - 1`: two components.
    FirstLarge,
    /// `d_2 >= g_2`, `d_1 <= g_1 - 1`: two components.
    SecondLarge,
    /// `d_1 >= g_1` and `d_2 >= g_2`: the effective locus is everything.
    AllEffective,
}

/// Component labels and dimensions for the two-component case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComponentReport {
    pub case: TwoComponentCase,
    /// `(label, dimension)` per irreducible component.
    pub components: Vec<(String, i64)>,
    /// Dimension of the pairwise intersection, when two or more components
    /// exist.
    pub intersection_dim: Option<i64>,
}

/// Dimensions of the effective-locus components for a curve with two smooth
/// components of genera `g1`, `g2` meeting at one node, in multidegree
/// `(d1, d2)`.
pub fn two_component_report(g1: i64, g2: i64, d1: i64, d2: i64) -> Result<TwoComponentReport> {
    if g1 < 0 || g2 < 0 {
        return Err(Error::RangeViolation(format!("negative genus ({g1},{g2})")));
    }
    if d1 < 0 || d2 < 0 {
        return Err(Error::RangeViolation(format!("negative degree ({d1},{d2})")));
    }
    let d = d1 + d2;
    let g = g1 + g2;
    if d < 1 {
        return Err(Error::RangeViolation("total degree must be at least 1".into()));
    }
    if d1 >= g1 && d2 >= g2 {
        return Ok(TwoComponentReport {
            case: TwoComponentCase::AllEffective,
            components: vec![("W+".into(), g)],
            intersection_dim: None,
        });
    }
    if d > g - 1 {
        return Err(Error::RangeViolation(format!(
            "total degree {d} exceeds g - 1 = {}",
            g - 1
        )));
    }
    if d1 <= g1 - 1 && d2 <= g2 - 1 {
        Ok(TwoComponentReport {
            case: TwoComponentCase::BothSmall,
            components: vec![
                ("W+".into(), d),
                ("W+-".into(), d1 + g2 - 1),
                ("W-+".into(), d2 + g1 - 1),
            ],
            intersection_dim: Some(d - 2),
        })
    } else if d1 >= g1 {
        Ok(TwoComponentReport {
            case: TwoComponentCase::FirstLarge,
            components: vec![("W+".into(), g1 + d2), ("W+-".into(), d1 + g2 - 1)],
            intersection_dim: Some(d1 - 1),
        })
    } else {
        Ok(TwoComponentReport {
            case: TwoComponentCase::SecondLarge,
            components: vec![("W+".into(), d1 + g2), ("W-+".into(), d2 + g1 - 1)],
            intersection_dim: Some(d2 - 1),
        })
    }
}
