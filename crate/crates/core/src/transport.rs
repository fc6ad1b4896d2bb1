//! Wasserstein distances between uniform measures with the same number of
//! atoms, where optimal couplings are permutations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equilibria::{shell_proxy, SimplexConfig};
use crate::error::{Error, Result};
use crate::measure::{dist, DiscreteMeasure};
use crate::potential::Kernel;
use crate::special::shell_radius_closed_form;
use crate::sum::CompensatedSum;

/// Largest N accepted by the O(N³) assignment solver.
pub const MAX_ASSIGNMENT: usize = 2048;
/// Rotations sampled when minimizing over a simplex orbit.
pub const ORBIT_SAMPLES: usize = 64;

const NONE: usize = usize::MAX;

/// A permutation coupling: atom i of the source is sent to atom `perm[i]`
/// of the target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coupling {
    pub perm: Vec<usize>,
    /// Cost exponent; `f64::INFINITY` for the bottleneck cost.
    pub p: f64,
    /// d_p of the coupling (the L^p norm of the displacement).
    pub cost: f64,
}

fn check_pair(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Unsupported("measures live in different dimensions".into()));
    }
    if a.len() != b.len() {
        return Err(Error::Unsupported(format!("cardinalities differ: {} vs {}", a.len(), b.len())));
    }
    if !a.is_uniform() || !b.is_uniform() {
        return Err(Error::Unsupported("only uniform weights are supported".into()));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(Error::Domain(format!("need finite p >= 1, got {p}")));
    }
    Ok(())
}

/// (mean of d_k^p)^{1/p}, summed in increasing order so that equal
/// multisets of distances give bit-identical results.
fn canonical_cost(mut dists: Vec<f64>, p: f64) -> f64 {
    let n = dists.len() as f64;
    for d in dists.iter_mut() {
        *d = d.powf(p);
    }
    dists.sort_by(f64::total_cmp);
    let s: CompensatedSum = dists.into_iter().collect();
    (s.value() / n).powf(1.0 / p)
}

fn sorted_order(m: &DiscreteMeasure) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m.len()).collect();
    idx.sort_by(|&i, &j| m.point(i)[0].total_cmp(&m.point(j)[0]).then(i.cmp(&j)));
    idx
}

/// Monotone rearrangement on the line: the k-th smallest atom of `a` goes
/// to the k-th smallest of `b`.
fn sorted_coupling(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Vec<usize> {
    let (ia, ib) = (sorted_order(a), sorted_order(b));
    let mut perm = vec![0; a.len()];
    for (i, j) in ia.into_iter().zip(ib) {
        perm[i] = j;
    }
    perm
}

fn coupling_distances(a: &DiscreteMeasure, b: &DiscreteMeasure, perm: &[usize]) -> Vec<f64> {
    perm.iter().enumerate().map(|(i, &j)| dist(a.point(i), b.point(j))).collect()
}

/// Minimum-cost perfect matching for a dense square cost matrix
/// (shortest augmenting paths with potentials).
pub fn hungarian(n: usize, cost: &[f64]) -> Vec<usize> {
    assert_eq!(cost.len(), n * n);
    // 1-based rows and columns; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[row_of[j] - 1] = j - 1;
    }
    perm
}

/// Optimal coupling for the cost |x − y|^p found by the assignment solver,
/// regardless of dimension.
pub fn assignment_coupling(a: &DiscreteMeasure, b: &DiscreteMeasure, p: f64) -> Result<Coupling> {
    check_pair(a, b)?;
    check_p(p)?;
    let n = a.len();
    if n > MAX_ASSIGNMENT {
        return Err(Error::Unsupported(format!("assignment limited to N <= {MAX_ASSIGNMENT}, got {n}")));
    }
    let mut cost = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cost.push(dist(a.point(i), b.point(j)).powf(p));
        }
    }
    let perm = hungarian(n, &cost);
    let cost = canonical_cost(coupling_distances(a, b, &perm), p);
    Ok(Coupling { perm, p, cost })
}

/// Optimal coupling for |x − y|^p: sorting on the line, assignment otherwise.
pub fn optimal_coupling(a: &DiscreteMeasure, b: &DiscreteMeasure, p: f64) -> Result<Coupling> {
    check_pair(a, b)?;
    check_p(p)?;
    if a.dim() == 1 {
        let perm = sorted_coupling(a, b);
        let cost = canonical_cost(coupling_distances(a, b, &perm), p);
        return Ok(Coupling { perm, p, cost });
    }
    assignment_coupling(a, b, p)
}

/// d_p(a, b) for uniform measures with equally many atoms.
pub fn wasserstein_p(a: &DiscreteMeasure, b: &DiscreteMeasure, p: f64) -> Result<f64> {
    Ok(optimal_coupling(a, b, p)?.cost)
}

/// Bipartite graph {(i, j) : d(i, j) ≤ t} in compressed row form.
struct ThresholdGraph {
    start: Vec<usize>,
    adj: Vec<u32>,
}

impl ThresholdGraph {
    fn build(a: &DiscreteMeasure, b: &DiscreteMeasure, t: f64) -> Self {
        let n = a.len();
        let mut start = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        start.push(0);
        for i in 0..n {
            let x = a.point(i);
            for j in 0..n {
                if dist(x, b.point(j)) <= t {
                    adj.push(j as u32);
                }
            }
            start.push(adj.len());
        }
        Self { start, adj }
    }

    fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[self.start[i]..self.start[i + 1]]
    }
}

/// Maximum bipartite matching (Hopcroft–Karp). Returns left-to-right matches.
fn hopcroft_karp(n: usize, g: &ThresholdGraph) -> (usize, Vec<usize>) {
    let mut match_l = vec![NONE; n];
    let mut match_r = vec![NONE; n];
    let mut size = 0;
    // Greedy warm start.
    for i in 0..n {
        for &j in g.neighbors(i) {
            let j = j as usize;
            if match_r[j] == NONE {
                match_l[i] = j;
                match_r[j] = i;
                size += 1;
                break;
            }
        }
    }
    let mut layer = vec![0usize; n];
    let mut cursor = vec![0usize; n];
    let mut queue = Vec::with_capacity(n);
    loop {
        // BFS from free left vertices.
        queue.clear();
        for i in 0..n {
            if match_l[i] == NONE {
                layer[i] = 0;
                queue.push(i);
            } else {
                layer[i] = NONE;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            for &j in g.neighbors(i) {
                let k = match_r[j as usize];
                if k == NONE {
                    found = true;
                } else if layer[k] == NONE {
                    layer[k] = layer[i] + 1;
                    queue.push(k);
                }
            }
        }
        if !found {
            break;
        }
        cursor.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            if match_l[i] == NONE && augment(i, g, &mut match_l, &mut match_r, &mut layer, &mut cursor) {
                size += 1;
            }
        }
    }
    (size, match_l)
}

fn augment(
    i: usize,
    g: &ThresholdGraph,
    match_l: &mut [usize],
    match_r: &mut [usize],
    layer: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    let nbrs = g.neighbors(i);
    while cursor[i] < nbrs.len() {
        let j = nbrs[cursor[i]] as usize;
        cursor[i] += 1;
        let k = match_r[j];
        let ok = if k == NONE {
            true
        } else if layer[k] == layer[i].wrapping_add(1) {
            augment(k, g, match_l, match_r, layer, cursor)
        } else {
            false
        };
        if ok {
            match_l[i] = j;
            match_r[j] = i;
            return true;
        }
    }
    layer[i] = NONE;
    false
}

fn perfect_matching_within(a: &DiscreteMeasure, b: &DiscreteMeasure, t: f64) -> Option<Vec<usize>> {
    let n = a.len();
    let g = ThresholdGraph::build(a, b, t);
    let (size, perm) = hopcroft_karp(n, &g);
    (size == n).then_some(perm)
}

/// Candidate thresholds above which the search switches from bisecting
/// values to sorting the remaining pairwise distances.
const CANDIDATE_LIMIT: usize = 1 << 16;

/// Bottleneck coupling: minimizes the largest matched distance.
pub fn bottleneck_coupling(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<Coupling> {
    check_pair(a, b)?;
    let n = a.len();
    if a.dim() == 1 {
        let perm = sorted_coupling(a, b);
        let cost = coupling_distances(a, b, &perm).into_iter().fold(0.0, f64::max);
        return Ok(Coupling { perm, p: f64::INFINITY, cost });
    }
    // Every atom must reach its nearest partner: a lower bound.
    let mut lb = 0.0f64;
    let mut ub = 0.0f64;
    let mut col_min = vec![f64::INFINITY; n];
    for i in 0..n {
        let mut row_min = f64::INFINITY;
        for j in 0..n {
            let d = dist(a.point(i), b.point(j));
            row_min = row_min.min(d);
            col_min[j] = col_min[j].min(d);
            ub = ub.max(d);
        }
        lb = lb.max(row_min);
    }
    lb = col_min.into_iter().fold(lb, f64::max);
    if let Some(perm) = perfect_matching_within(a, b, lb) {
        return Ok(Coupling { perm, p: f64::INFINITY, cost: lb });
    }
    let (mut lo, mut hi) = (lb, ub);
    loop {
        let mut cands = Vec::new();
        let mut overflow = false;
        'scan: for i in 0..n {
            for j in 0..n {
                let d = dist(a.point(i), b.point(j));
                if d > lo && d <= hi {
                    if cands.len() == CANDIDATE_LIMIT {
                        overflow = true;
                        break 'scan;
                    }
                    cands.push(d);
                }
            }
        }
        if overflow {
            let mid = 0.5 * (lo + hi);
            if perfect_matching_within(a, b, mid).is_some() {
                hi = mid;
            } else {
                lo = mid;
            }
            continue;
        }
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        // Smallest feasible candidate; the last one (≥ answer) is feasible.
        let (mut l, mut h) = (0usize, cands.len() - 1);
        let mut best = perfect_matching_within(a, b, cands[h]).expect("upper threshold is feasible");
        while l < h {
            let m = (l + h) / 2;
            match perfect_matching_within(a, b, cands[m]) {
                Some(perm) => {
                    h = m;
                    best = perm;
                }
                None => l = m + 1,
            }
        }
        return Ok(Coupling { perm: best, p: f64::INFINITY, cost: cands[h] });
    }
}

/// d_∞(a, b), the bottleneck matching distance.
pub fn wasserstein_inf(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<f64> {
    Ok(bottleneck_coupling(a, b)?.cost)
}

/// d_p for p in [1, ∞], dispatching to [`wasserstein_inf`] for p = ∞.
pub fn wasserstein(a: &DiscreteMeasure, b: &DiscreteMeasure, p: f64) -> Result<f64> {
    if p == f64::INFINITY {
        wasserstein_inf(a, b)
    } else {
        wasserstein_p(a, b, p)
    }
}

/// The family of energy minimizers a kernel is known to have, up to
/// translation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum MinimizerFamily {
    /// The shell σ_R (rotation invariant).
    Shell { radius: f64 },
    /// Rotations of the unit-edge simplex.
    SimplexOrbit,
}

impl MinimizerFamily {
    pub fn for_kernel(kernel: &Kernel) -> Result<Self> {
        let p = kernel.params();
        if p.in_shell_window() {
            return Ok(Self::Shell { radius: shell_radius_closed_form(p)? });
        }
        if p.beta == 2.0 && p.alpha > 4.0 {
            return Ok(Self::SimplexOrbit);
        }
        Err(Error::Unsupported(format!(
            "no known minimizer family for (alpha, beta, n) = ({}, {}, {})",
            p.alpha, p.beta, p.dim
        )))
    }
}

/// A rotation of R^n: angles 2πs/(n+1) spread over the symmetry period in
/// the plane, the reflection in one dimension, seeded QR factors otherwise.
fn orbit_rotation(n: usize, s: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    if s == 0 {
        return DMatrix::identity(n, n);
    }
    match n {
        1 => DMatrix::from_element(1, 1, if s % 2 == 0 { 1.0 } else { -1.0 }),
        2 => {
            let t = 2.0 * PI / 3.0 * s as f64 / ORBIT_SAMPLES as f64;
            let (sn, c) = t.sin_cos();
            DMatrix::from_row_slice(2, 2, &[c, -sn, sn, c])
        }
        _ => {
            let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let qr = g.qr();
            let mut q = qr.q();
            let r = qr.r();
            for k in 0..n {
                if r[(k, k)] < 0.0 {
                    q.column_mut(k).neg_mut();
                }
            }
            if q.determinant() < 0.0 {
                q.column_mut(0).neg_mut();
            }
            q
        }
    }
}

fn replicate(m: &DiscreteMeasure, copies: usize) -> Result<DiscreteMeasure> {
    let coords: Vec<f64> = m.points().flat_map(|x| (0..copies).flat_map(move |_| x.iter().copied())).collect();
    DiscreteMeasure::from_flat(m.dim(), coords, None)
}

/// d_p from the centered measure to the kernel's minimizer family, using a
/// same-cardinality proxy for the shell and a minimum over sampled
/// rotations for the simplex orbit. `p` may be `f64::INFINITY`.
pub fn distance_to_minimizer(m: &DiscreteMeasure, kernel: &Kernel, p: f64) -> Result<f64> {
    if m.dim() != kernel.params().dim {
        return Err(Error::Domain("measure and kernel dimensions differ".into()));
    }
    let centered = m.centered();
    match MinimizerFamily::for_kernel(kernel)? {
        MinimizerFamily::Shell { radius } => {
            let proxy = shell_proxy(radius, m.dim(), m.len())?;
            wasserstein(&centered, &proxy, p)
        }
        MinimizerFamily::SimplexOrbit => {
            let n = m.dim();
            if m.len() % (n + 1) != 0 {
                return Err(Error::Unsupported(format!(
                    "simplex orbit needs a multiple of {} atoms, got {}",
                    n + 1,
                    m.len()
                )));
            }
            let base = replicate(&SimplexConfig::unit(n).measure(), m.len() / (n + 1))?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x0b17);
            let samples = if n == 1 { 2 } else { ORBIT_SAMPLES };
            let mut best = f64::INFINITY;
            for s in 0..samples {
                let rot = orbit_rotation(n, s, &mut rng);
                best = best.min(wasserstein(&centered, &base.linear_map(&rot), p)?);
            }
            Ok(best)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{ring_measure, RingConfig};
    use proptest::prelude::*;
    use rand::Rng;

    fn cloud(dim: usize, n: usize, seed: u64) -> DiscreteMeasure {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..dim * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        DiscreteMeasure::from_flat(dim, coords, None).unwrap()
    }

    fn rotate(m: &DiscreteMeasure, t: f64) -> DiscreteMeasure {
        let (s, c) = t.sin_cos();
        m.linear_map(&DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    #[test]
    fn distance_examples() {
        let m = cloud(2, 10, 1);
        assert_eq!(wasserstein_p(&m, &m, 2.0).unwrap(), 0.0);
        assert_eq!(wasserstein_inf(&m, &m).unwrap(), 0.0);
        let a = DiscreteMeasure::uniform(1, vec![vec![0.0]]).unwrap();
        let b = DiscreteMeasure::uniform(1, vec![vec![1.0]]).unwrap();
        assert_eq!(wasserstein_p(&a, &b, 1.0).unwrap(), 1.0);

        let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 });
        let turned = rotate(&ring, PI / 4.0);
        let chord = 2.0 * (PI / 8.0).sin();
        assert!((wasserstein_p(&ring, &turned, 2.0).unwrap() - chord).abs() < 1e-12);

        let r8 = ring_measure(&RingConfig { k: 8, radius: 1.0 });
        let r8b = ring_measure(&RingConfig { k: 8, radius: 1.1 });
        assert!((wasserstein_inf(&r8, &r8b).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let a = cloud(2, 4, 1);
        let b = cloud(2, 5, 2);
        assert!(matches!(wasserstein_p(&a, &b, 2.0), Err(Error::Unsupported(_))));
        let w = DiscreteMeasure::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]], Some(vec![0.3, 0.7])).unwrap();
        let u = cloud(2, 2, 3);
        assert!(matches!(wasserstein_inf(&w, &u), Err(Error::Unsupported(_))));
        assert!(wasserstein_p(&u, &u, 0.5).is_err());
    }

    #[test]
    fn ring_to_fine_proxy_bottleneck() {
        let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 });
        let rep = replicate(&ring, 64).unwrap();
        let proxy = shell_proxy(1.0, 2, 256).unwrap();
        let d = wasserstein_inf(&rep, &proxy).unwrap();
        assert!((d - 2.0 * (PI / 8.0).sin()).abs() < 1e-3);
    }

    #[test]
    fn bottleneck_matches_brute_force() {
        for seed in 0..20 {
            let a = cloud(2, 6, 100 + seed);
            let b = cloud(2, 6, 200 + seed);
            let mut best = f64::INFINITY;
            let mut perm: Vec<usize> = (0..6).collect();
            permutations(&mut perm, 0, &mut |p| {
                let c = p.iter().enumerate().map(|(i, &j)| dist(a.point(i), b.point(j))).fold(0.0, f64::max);
                best = best.min(c);
            });
            assert_eq!(wasserstein_inf(&a, &b).unwrap(), best);
        }
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn hungarian_matches_brute_force() {
        for seed in 0..20 {
            let a = cloud(3, 6, 300 + seed);
            let b = cloud(3, 6, 400 + seed);
            let mut best = f64::INFINITY;
            let mut perm: Vec<usize> = (0..6).collect();
            permutations(&mut perm, 0, &mut |p| {
                let c: f64 = p.iter().enumerate().map(|(i, &j)| dist(a.point(i), b.point(j)).powi(2)).sum();
                best = best.min(c);
            });
            let d = wasserstein_p(&a, &b, 2.0).unwrap();
            assert!((d * d * 6.0 - best).abs() < 1e-12);
        }
    }

    #[test]
    fn sorted_equals_assignment_on_the_line() {
        for seed in 0..64u64 {
            let n = 2 + (seed as usize * 7) % 63;
            let a = cloud(1, n, 500 + seed);
            let b = cloud(1, n, 600 + seed);
            for p in [1.5, 2.0, 2.5, 3.0] {
                assert_eq!(optimal_coupling(&a, &b, p).unwrap().cost, assignment_coupling(&a, &b, p).unwrap().cost);
            }
            let d1 = optimal_coupling(&a, &b, 1.0).unwrap().cost;
            assert!((d1 - assignment_coupling(&a, &b, 1.0).unwrap().cost).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_to_minimizer_examples() {
        let k = Kernel::from_exponents(3.0, 2.0, 2).unwrap();
        let r = shell_radius_closed_form(k.params()).unwrap();
        let proxy = shell_proxy(r, 2, 64).unwrap();
        assert!(distance_to_minimizer(&proxy, &k, 3.0).unwrap() < 1e-12);
        let moved = proxy.translated(&[5.0, 0.0]);
        let d0 = distance_to_minimizer(&proxy, &k, f64::INFINITY).unwrap();
        let d5 = distance_to_minimizer(&moved, &k, f64::INFINITY).unwrap();
        assert!((d0 - d5).abs() < 1e-12);
        let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 / 3f64.sqrt() });
        let d = distance_to_minimizer(&ring, &k, f64::INFINITY).unwrap();
        assert!((d - (1.0 / 3f64.sqrt() - r).abs()).abs() < 1e-12);

        let k6 = Kernel::from_exponents(6.0, 2.0, 2).unwrap();
        let tri = crate::equilibria::simplex_measure(2);
        assert!(distance_to_minimizer(&tri, &k6, 2.0).unwrap() < 1e-12);
        let turned = rotate(&tri, 0.3).translated(&[1.0, -2.0]);
        assert!(distance_to_minimizer(&turned, &k6, 2.0).unwrap() < 0.02);
        let bad = Kernel::from_exponents(3.0, 1.0, 2).unwrap();
        assert!(matches!(distance_to_minimizer(&tri, &bad, 2.0), Err(Error::Unsupported(_))));
    }

    fn triple() -> impl Strategy<Value = (u64, usize, usize)> {
        (0u64..1000, 1usize..4, 2usize..9)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn metric_axioms((seed, dim, n) in triple(), p in 1.0f64..4.0) {
            let a = cloud(dim, n, seed);
            let b = cloud(dim, n, seed + 1);
            let c = cloud(dim, n, seed + 2);
            let ab = wasserstein(&a, &b, p).unwrap();
            let ba = wasserstein(&b, &a, p).unwrap();
            let bc = wasserstein(&b, &c, p).unwrap();
            let ac = wasserstein(&a, &c, p).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!(ac <= ab + bc + 1e-12);
            let ai = wasserstein_inf(&a, &b).unwrap();
            let bi = wasserstein_inf(&b, &c).unwrap();
            let ci = wasserstein_inf(&a, &c).unwrap();
            prop_assert!(ci <= ai + bi + 1e-12);
            prop_assert!((ai - wasserstein_inf(&b, &a).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn monotone_in_p((seed, dim, n) in triple()) {
            let a = cloud(dim, n, seed);
            let b = cloud(dim, n, seed + 7);
            let mut prev = 0.0;
            for p in [1.0, 1.5, 2.0, 3.0, 5.0, f64::INFINITY] {
                let d = wasserstein(&a, &b, p).unwrap();
                prop_assert!(d + 1e-12 >= prev);
                prev = d;
            }
        }
    }
}
