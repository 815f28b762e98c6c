//! Small curve generators shared by the verification suites and tests.

use rand::Rng;

use crate::graph::DualGraph;

/// Binary curve of genus `g`: two rational components meeting at `g + 1` nodes.
pub fn binary(g: i64) -> DualGraph {
    assert!(g >= 0, "binary curve needs g + 1 >= 1 nodes");
    let edges = (0..=g).map(|_| (0, 1)).collect();
    let mut x = DualGraph::new(vec![0, 0], edges).unwrap();
    x = DualGraph::parse(&format!("curve binary{g}\n{}", x.to_curve_string())).unwrap();
    x
}

/// Irreducible curve: one component of geometric genus `genus0` with `loops`
/// self-nodes; arithmetic genus `genus0 + loops`.
pub fn irreducible(genus0: i64, loops: usize) -> DualGraph {
    let edges = (0..loops).map(|_| (0, 0)).collect();
    DualGraph::new(vec![genus0], edges).unwrap()
}

/// Chain of components with the given genera, consecutive ones joined by one node.
pub fn chain(genera: &[i64]) -> DualGraph {
    let edges = (1..genera.len()).map(|i| (i - 1, i)).collect();
    DualGraph::new(genera.to_vec(), edges).unwrap()
}

/// Random connected multigraph: a random spanning tree plus `extra` random
/// edges (loops and parallels allowed), genera uniform in `0..=max_genus`.
pub fn random_connected<R: Rng>(
    rng: &mut R,
    max_gamma: usize,
    extra: usize,
    max_genus: i64,
) -> DualGraph {
    let gamma = rng.gen_range(1..=max_gamma);
    let genera = (0..gamma).map(|_| rng.gen_range(0..=max_genus)).collect();
    let mut edges = Vec::new();
    for v in 1..gamma {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..rng.gen_range(0..=extra) {
        edges.push((rng.gen_range(0..gamma), rng.gen_range(0..gamma)));
    }
    DualGraph::new(genera, edges).unwrap()
}

/// Deterministic grab-bag of small graphs exercising loops, parallel edges,
/// bridges and disconnected inputs.
pub fn assorted_small_graphs() -> Vec<DualGraph> {
    let mut out = vec![
        binary(2),
        binary(3),
        irreducible(0, 3),
        irreducible(1, 1),
        irreducible(2, 0),
        chain(&[1, 1]),
        chain(&[1, 0, 1]),
        chain(&[0, 1, 0, 1]),
        DualGraph::new(vec![0; 4], vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
        DualGraph::new(vec![0, 0, 1], vec![(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap(),
        DualGraph::new(vec![1, 1], vec![]).unwrap(),
        DualGraph::new(vec![0, 2], vec![(0, 0), (0, 1)]).unwrap(),
        DualGraph::new(vec![1, 0, 0], vec![(0, 1), (1, 2), (2, 0)]).unwrap(),
    ];
    out.push(binary(3).blow_up(&crate::graph::NodeSet::new(vec![0])).unwrap().graph);
    out
}

/// Exhaustive stable curves with at most `gamma_max <= 3` components,
/// at most `delta_max` nodes and genera up to `genus_max`, together with a
/// seeded sample of stable 4-component curves. Used as the degree-1 corpus.
pub fn stable_corpus(delta_max: usize, genus_max: i64, four_component_samples: usize) -> Vec<DualGraph> {
    let mut out = Vec::new();
    for gamma in 1..=3usize {
        // Edge slot per unordered vertex pair, loops included.
        let mut slots = Vec::new();
        for i in 0..gamma {
            for j in i..gamma {
                slots.push((i, j));
            }
        }
        let mut counts = vec![0usize; slots.len()];
        loop {
            let delta: usize = counts.iter().sum();
            if delta <= delta_max {
                let mut edges = Vec::new();
                for (slot, &c) in counts.iter().enumerate() {
                    for _ in 0..c {
                        edges.push(slots[slot]);
                    }
                }
                let mut genera = vec![0i64; gamma];
                loop {
                    let x = DualGraph::new(genera.clone(), edges.clone()).unwrap();
                    if x.classify().stable {
                        out.push(x);
                    }
                    if !next_vector(&mut genera, genus_max) {
                        break;
                    }
                }
            }
            if !next_counts(&mut counts, delta_max) {
                break;
            }
        }
    }
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(crate::DEFAULT_SEED);
    let mut found = 0;
    while found < four_component_samples {
        let genera: Vec<i64> = (0..4).map(|_| rng.gen_range(0..=genus_max)).collect();
        let mut edges = Vec::new();
        for v in 1..4 {
            edges.push((rng.gen_range(0..v), v));
        }
        for _ in 0..rng.gen_range(0..=delta_max.saturating_sub(3)) {
            let a = rng.gen_range(0..4);
            edges.push((a, rng.gen_range(0..4).max(a).min(3)));
        }
        if edges.len() > delta_max {
            continue;
        }
        let x = DualGraph::new(genera, edges).unwrap();
        if x.classify().stable {
            out.push(x);
            found += 1;
        }
    }
    out
}

fn next_vector(v: &mut [i64], max: i64) -> bool {
    for entry in v.iter_mut() {
        if *entry < max {
            *entry += 1;
            return true;
        }
        *entry = 0;
    }
    false
}

fn next_counts(v: &mut [usize], max_total: usize) -> bool {
    // Odometer over bounded count vectors; total re-checked by the caller.
    for entry in v.iter_mut() {
        if *entry < max_total {
            *entry += 1;
            return true;
        }
        *entry = 0;
    }
    false
}
