#![allow(dead_code)]

use ldsolve_core::{Cost, CostMatrix, Domains, Instance, TimeWindow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, max: Cost) -> CostMatrix {
    CostMatrix::from_fn(n, |_, _| rng.gen_range(0..=max))
}

pub fn random_tsp(rng: &mut impl Rng, n: usize, max: Cost) -> Instance {
    let c = CostMatrix::from_fn(n, |i, j| if i == j { 0 } else { rng.gen_range(1..=max) });
    Instance::tsp("random", c).unwrap()
}

/// Windows built around a random route so that at least one feasible route exists.
pub fn random_tsptw(rng: &mut impl Rng, n: usize, max: Cost, slack: Cost) -> Instance {
    let c = CostMatrix::from_fn(n, |i, j| if i == j { 0 } else { rng.gen_range(1..=max) });
    let mut order: Vec<usize> = (1..n - 1).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    order.insert(0, 0);
    order.push(n - 1);
    let mut windows = vec![TimeWindow::new(0, 0); n];
    let mut t = 0;
    for w in order.windows(2) {
        t += c[(w[0], w[1])];
        let lo = (t - rng.gen_range(0..=slack)).max(0);
        let hi = t + rng.gen_range(0..=slack);
        windows[w[1]] = TimeWindow::new(lo, hi);
    }
    windows[0] = TimeWindow::new(0, 0);
    windows[n - 1] = TimeWindow::new(0, t + 10 * slack);
    Instance::tsptw("random", c, windows).unwrap()
}

/// Random sub-mask of the complete domains that keeps at least one permutation.
pub fn random_domains(rng: &mut impl Rng, n: usize, keep: f64) -> Domains {
    let mut d = Domains::empty(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    for (i, &p) in perm.iter().enumerate() {
        d.insert(i, p);
        for j in 0..n {
            if rng.gen_bool(keep) {
                d.insert(i, j);
            }
        }
    }
    d
}

/// Every Hamiltonian cycle of `n` nodes as a successor vector, starting from node 0.
pub fn all_tours(n: usize) -> Vec<Vec<usize>> {
    fn go(path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if path.len() == n {
            let mut succ = vec![0; n];
            for w in path.windows(2) {
                succ[w[0]] = w[1];
            }
            succ[path[n - 1]] = path[0];
            out.push(succ);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                go(path, used, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, &mut out);
    out
}

pub fn tour_cost(c: &CostMatrix, succ: &[usize]) -> Cost {
    succ.iter().enumerate().map(|(i, &j)| c[(i, j)]).sum()
}
