//! Exact Brill-Noether ranks on curves with rational components.
//!
//! A line bundle on a curve all of whose components are rational is modelled
//! by a degree vector together with one gluing unit per node. A section is a
//! tuple of polynomials, one of degree at most `d_i` per component in an
//! affine coordinate, subject to one linear condition per node:
//!
//! ```text
//! s_u(x_{e,u}) = c_e * s_v(x_{e,v})
//! ```
//!
//! where `x_{e,u}`, `x_{e,v}` are the branch coordinates of the node on the
//! two components. `h0` is the kernel dimension of this system over a prime
//! field, computed by exact Gaussian elimination. Components of negative
//! degree contribute the zero space, turning their node conditions into
//! vanishing conditions on the other branch.
//!
//! Branch coordinates are affine field elements only, so the point at
//! infinity is never a branch point.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{DualGraph, Subcurve, DEFAULT_GAMMA_CAP};
use crate::multidegree::Multidegree;
use crate::Result;

/// Largest accepted modulus; keeps products inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Modulus plus seed: everything downstream is deterministic given these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeFieldConfig {
    pub p: u64,
    pub seed: u64,
}

impl PrimeFieldConfig {
    pub fn new(p: u64, seed: u64) -> Result<Self> {
        PrimeField::new(p)?;
        Ok(PrimeFieldConfig { p, seed })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(self.seed)
    }
}

/// Arithmetic in the prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "prime {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A rational-component curve realized over a prime field: the dual graph
/// plus one affine branch coordinate per node on each of its two components.
#[derive(Debug, Clone)]
pub struct RationalCurveModel {
    graph: DualGraph,
    field: PrimeField,
    /// Per edge: coordinate of the branch on `ends.0`, then on `ends.1`.
    branch: Vec<(u64, u64)>,
}

/// A line bundle on a [`RationalCurveModel`]: component degrees plus one
/// nonzero gluing constant per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleModel {
    pub deg: Multidegree,
    pub gluing: Vec<u64>,
}

impl LineBundleModel {
    pub fn new(deg: Multidegree, gluing: Vec<u64>) -> Self {
        LineBundleModel { deg, gluing }
    }

    /// The trivial bundle: degree zero, every gluing constant 1.
    pub fn trivial(gamma: usize, delta: usize) -> Self {
        LineBundleModel {
            deg: Multidegree::zero(gamma),
            gluing: vec![1; delta],
        }
    }
}

/// Count of gluing vectors with a section, out of all vectors enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeReport {
    pub total: u64,
    pub positive: u64,
}

/// Histogram of observed `h0` values.
pub type H0Histogram = BTreeMap<usize, usize>;

impl RationalCurveModel {
    /// Samples distinct branch coordinates for every component.
    pub fn sample(graph: &DualGraph, config: &PrimeFieldConfig) -> Result<Self> {
        let mut rng = config.rng();
        Self::sample_with_rng(graph, config.field(), &mut rng)
    }

    pub fn sample_with_rng<R: Rng>(
        graph: &DualGraph,
        field: PrimeField,
        rng: &mut R,
    ) -> Result<Self> {
        check_rational(graph)?;
        for v in 0..graph.gamma() {
            let needed = graph.vertex_degree(v);
            // Distinctness must be satisfiable: p >= branch points on the
            // component. At equality the component is saturated and has no
            // smooth affine points left.
            if field.p < needed as u64 {
                return Err(Error::PrimeTooSmall {
                    p: field.p,
                    component: v,
                    needed,
                });
            }
        }
        let mut used: Vec<Vec<u64>> = vec![Vec::new(); graph.gamma()];
        let mut fresh = |comp: usize, rng: &mut R| -> u64 {
            loop {
                let x = field.sample(rng);
                if !used[comp].contains(&x) {
                    used[comp].push(x);
                    return x;
                }
            }
        };
        let branch = graph
            .edges()
            .iter()
            .map(|e| {
                let a = fresh(e.ends.0, rng);
                let b = fresh(e.ends.1, rng);
                (a, b)
            })
            .collect();
        Ok(RationalCurveModel {
            graph: graph.clone(),
            field,
            branch,
        })
    }

    /// Builds a model from explicit branch coordinates.
    pub fn with_branch_points(
        graph: &DualGraph,
        field: PrimeField,
        branch: Vec<(u64, u64)>,
    ) -> Result<Self> {
        check_rational(graph)?;
        if branch.len() != graph.delta() {
            return Err(Error::LengthMismatch {
                expected: graph.delta(),
                got: branch.len(),
            });
        }
        let model = RationalCurveModel {
            graph: graph.clone(),
            field,
            branch: branch
                .into_iter()
                .map(|(a, b)| (a % field.p, b % field.p))
                .collect(),
        };
        for v in 0..model.graph.gamma() {
            let pts = model.branch_points_on(v);
            for (i, a) in pts.iter().enumerate() {
                if pts[i + 1..].contains(a) {
                    return Err(Error::BranchPointCollision {
                        component: v,
                        point: *a,
                    });
                }
            }
        }
        Ok(model)
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn branch(&self) -> &[(u64, u64)] {
        &self.branch
    }

    /// All branch coordinates lying on component `v`.
    pub fn branch_points_on(&self, v: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.graph.edges().iter().zip(&self.branch) {
            if e.ends.0 == v {
                out.push(a);
            }
            if e.ends.1 == v {
                out.push(b);
            }
        }
        out
    }

    fn check_bundle(&self, l: &LineBundleModel) -> Result<()> {
        if l.deg.len() != self.graph.gamma() {
            return Err(Error::LengthMismatch {
                expected: self.graph.gamma(),
                got: l.deg.len(),
            });
        }
        if l.gluing.len() != self.graph.delta() {
            return Err(Error::LengthMismatch {
                expected: self.graph.delta(),
                got: l.gluing.len(),
            });
        }
        if l.gluing.iter().any(|&c| c % self.field.p == 0) {
            return Err(Error::InvalidInput("gluing constants must be nonzero".into()));
        }
        Ok(())
    }

    /// Kernel dimension of the gluing system: the exact `h0` of the bundle.
    pub fn h0(&self, l: &LineBundleModel) -> Result<usize> {
        self.check_bundle(l)?;
        let full = Subcurve::full(self.graph.gamma());
        let h0 = self.restricted_h0(l, full);
        if self.graph.is_connected() {
            let g = self.graph.genus()?;
            let chi = l.deg.total() - g + 1;
            assert!(
                h0 as i64 >= chi.max(0),
                "h0={h0} below the Riemann-Roch bound {chi} (deg {}, genus {g})",
                l.deg
            );
        }
        Ok(h0)
    }

    /// `h0` of the system restricted to the components in `z` and the nodes
    /// internal to `z`.
    fn restricted_h0(&self, l: &LineBundleModel, z: Subcurve) -> usize {
        let f = &self.field;
        let deg = l.deg.entries();
        let mut offset = vec![usize::MAX; self.graph.gamma()];
        let mut cols = 0usize;
        for v in z.indices() {
            if deg[v] >= 0 {
                offset[v] = cols;
                cols += deg[v] as usize + 1;
            }
        }
        if cols == 0 {
            return 0;
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (i, e) in self.graph.edges().iter().enumerate() {
            let (u, v) = e.ends;
            if !z.contains(u) || !z.contains(v) {
                continue;
            }
            if deg[u] < 0 && deg[v] < 0 {
                continue;
            }
            let (a, b) = self.branch[i];
            let c = l.gluing[i] % f.p;
            let mut row = vec![0u64; cols];
            if deg[u] >= 0 {
                let mut power = 1u64;
                for j in 0..=deg[u] as usize {
                    row[offset[u] + j] = f.add(row[offset[u] + j], power);
                    power = f.mul(power, a);
                }
            }
            if deg[v] >= 0 {
                let mut power = c;
                for j in 0..=deg[v] as usize {
                    row[offset[v] + j] = f.sub(row[offset[v] + j], power);
                    power = f.mul(power, b);
                }
            }
            rows.push(row);
        }
        cols - rank(f, &mut rows, cols)
    }

    /// Membership in the effective locus: `h0 > 0`.
    pub fn in_w(&self, l: &LineBundleModel) -> Result<bool> {
        Ok(self.h0(l)? > 0)
    }

    /// Whether every non-empty subcurve restriction has a section.
    pub fn in_w_plus(&self, l: &LineBundleModel) -> Result<bool> {
        self.in_w_plus_with_cap(l, DEFAULT_GAMMA_CAP)
    }

    pub fn in_w_plus_with_cap(&self, l: &LineBundleModel, cap: usize) -> Result<bool> {
        self.check_bundle(l)?;
        let gamma = self.graph.gamma();
        if gamma > cap.min(31) {
            return Err(Error::CapExceeded {
                what: "components (2^gamma subcurves)",
                size: gamma,
                cap: cap.min(31),
            });
        }
        for mask in 1..(1u32 << gamma) {
            if self.restricted_h0(l, Subcurve(mask)) == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The bundle of the effective divisor given by smooth points, one pair
    /// `(component, coordinate)` per point with multiplicity.
    ///
    /// The section with that zero divisor is `s_i = prod (x - r)` over the
    /// points on component `i`; the gluing constants are whatever makes the
    /// tuple glue, so the result has `h0 >= 1` by construction.
    pub fn effective_model(&self, points: &[(usize, u64)]) -> Result<LineBundleModel> {
        let f = self.field;
        let gamma = self.graph.gamma();
        let mut divisor: Vec<Vec<u64>> = vec![Vec::new(); gamma];
        for &(comp, coord) in points {
            if comp >= gamma {
                return Err(Error::VertexOutOfRange(comp));
            }
            let coord = coord % f.p;
            if self.branch_points_on(comp).contains(&coord) {
                return Err(Error::BranchPointCollision {
                    component: comp,
                    point: coord,
                });
            }
            divisor[comp].push(coord);
        }
        let eval = |comp: usize, x: u64| -> u64 {
            divisor[comp]
                .iter()
                .fold(1u64, |acc, &r| f.mul(acc, f.sub(x, r)))
        };
        let gluing = self
            .graph
            .edges()
            .iter()
            .zip(&self.branch)
            .map(|(e, &(a, b))| f.mul(eval(e.ends.0, a), f.inv(eval(e.ends.1, b))))
            .collect();
        let deg = Multidegree::new((0..gamma).map(|v| divisor[v].len() as i64).collect());
        Ok(LineBundleModel { deg, gluing })
    }

    /// The twist `L(q)` by one smooth point `q` on a component: degree goes
    /// up by one there and each gluing constant picks up the factor
    /// `(x_{e,u} - q) / (x_{e,v} - q)` over the branches lying on that
    /// component, mirroring multiplication of sections by `(x - q)`.
    pub fn twist(&self, l: &LineBundleModel, comp: usize, q: u64) -> Result<LineBundleModel> {
        self.check_bundle(l)?;
        let f = self.field;
        if comp >= self.graph.gamma() {
            return Err(Error::VertexOutOfRange(comp));
        }
        let q = q % f.p;
        if self.branch_points_on(comp).contains(&q) {
            return Err(Error::BranchPointCollision {
                component: comp,
                point: q,
            });
        }
        let mut entries = l.deg.entries().to_vec();
        entries[comp] += 1;
        let gluing = self
            .graph
            .edges()
            .iter()
            .zip(&self.branch)
            .zip(&l.gluing)
            .map(|((e, &(a, b)), &c)| {
                let mut c = c % f.p;
                if e.ends.0 == comp {
                    c = f.mul(c, f.sub(a, q));
                }
                if e.ends.1 == comp {
                    c = f.mul(c, f.inv(f.sub(b, q)));
                }
                c
            })
            .collect();
        Ok(LineBundleModel {
            deg: Multidegree::new(entries),
            gluing,
        })
    }

    /// Counts, over every gluing vector in `(F_p^*)^delta`, how many give a
    /// bundle with a section.
    pub fn exhaustive_w_probe(&self, deg: &Multidegree, cap: u64) -> Result<ProbeReport> {
        let f = self.field;
        let delta = self.graph.delta();
        let total = (f.p - 1).checked_pow(delta as u32).map(u128::from);
        match total {
            Some(t) if t <= cap as u128 => {}
            Some(t) => return Err(Error::GluingCapExceeded(t, cap)),
            None => return Err(Error::GluingCapExceeded(u128::MAX, cap)),
        }
        let mut gluing = vec![1u64; delta];
        let mut l = LineBundleModel::new(deg.clone(), gluing.clone());
        self.check_bundle(&l)?;
        let full = Subcurve::full(self.graph.gamma());
        let mut positive = 0u64;
        let mut count = 0u64;
        loop {
            l.gluing.copy_from_slice(&gluing);
            if self.restricted_h0(&l, full) > 0 {
                positive += 1;
            }
            count += 1;
            let mut i = 0;
            while i < delta {
                if gluing[i] < f.p - 1 {
                    gluing[i] += 1;
                    break;
                }
                gluing[i] = 1;
                i += 1;
            }
            if i == delta {
                break;
            }
        }
        Ok(ProbeReport {
            total: count,
            positive,
        })
    }

    /// Samples `trials` uniform gluing vectors and histograms the observed
    /// `h0` values. Deterministic given the generator state.
    pub fn generic_h0_estimate<R: Rng>(
        &self,
        deg: &Multidegree,
        trials: usize,
        rng: &mut R,
    ) -> Result<H0Histogram> {
        let f = self.field;
        let delta = self.graph.delta();
        let mut histogram = H0Histogram::new();
        for _ in 0..trials {
            let gluing = (0..delta).map(|_| f.sample_nonzero(rng)).collect();
            let l = LineBundleModel::new(deg.clone(), gluing);
            let h0 = self.h0(&l)?;
            *histogram.entry(h0).or_insert(0) += 1;
        }
        Ok(histogram)
    }

    /// Samples a uniform gluing vector for the given degrees.
    pub fn random_bundle<R: Rng>(&self, deg: &Multidegree, rng: &mut R) -> LineBundleModel {
        let gluing = (0..self.graph.delta())
            .map(|_| self.field.sample_nonzero(rng))
            .collect();
        LineBundleModel::new(deg.clone(), gluing)
    }

    /// Samples a point on `comp` distinct from every branch point there.
    pub fn random_smooth_point<R: Rng>(&self, comp: usize, rng: &mut R) -> u64 {
        let taken = self.branch_points_on(comp);
        loop {
            let x = self.field.sample(rng);
            if !taken.contains(&x) {
                return x;
            }
        }
    }
}

fn check_rational(graph: &DualGraph) -> Result<()> {
    if let Some(v) = graph.vertices().iter().position(|v| v.genus != 0) {
        return Err(Error::InvalidInput(format!(
            "component {v} has positive genus; the rank model needs rational components"
        )));
    }
    Ok(())
}

/// Row rank by Gaussian elimination over `F_p`.
fn rank(f: &PrimeField, rows: &mut [Vec<u64>], cols: usize) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]);
        for r in rank + 1..rows.len() {
            if rows[r][col] == 0 {
                continue;
            }
            let factor = f.mul(rows[r][col], inv);
            for c in col..cols {
                let sub = f.mul(factor, rows[rank][c]);
                rows[r][c] = f.sub(rows[r][c], sub);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
