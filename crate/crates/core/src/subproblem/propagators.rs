use alloc::vec;
use alloc::vec::Vec;

use super::store::{DomainStore, Failure, Propagation};
use crate::ap::ApResult;
use crate::cost::Cost;
use crate::model::Model;

/// A value taken by a bound variable leaves every other domain.
pub fn propagate_alldiff(store: &mut DomainStore) -> Propagation {
    let n = store.n();
    let mut taken = vec![usize::MAX; n];
    for i in 0..n {
        if let Some(j) = store.value(i) {
            if taken[j] != usize::MAX {
                return Err(Failure);
            }
            taken[j] = i;
        }
    }
    for (j, &owner) in taken.iter().enumerate() {
        if owner == usize::MAX {
            continue;
        }
        for k in 0..n {
            if k != owner {
                store.remove(k, j)?;
            }
        }
    }
    Ok(())
}

/// Forbids closing a chain of bound `Next` variables into a cycle shorter than `n`.
pub fn propagate_nocycle(store: &mut DomainStore) -> Propagation {
    let n = store.n();
    let succ: Vec<Option<usize>> = (0..n).map(|i| store.value(i)).collect();
    let mut has_pred = vec![false; n];
    for &j in succ.iter().flatten() {
        has_pred[j] = true;
    }
    let mut on_chain = vec![false; n];
    for head in 0..n {
        if has_pred[head] || succ[head].is_none() {
            continue;
        }
        let mut len = 1;
        let mut node = head;
        on_chain[node] = true;
        while let Some(next) = succ[node] {
            node = next;
            on_chain[node] = true;
            len += 1;
            if len > n {
                return Err(Failure);
            }
        }
        if len < n {
            store.remove(node, head)?;
        }
    }
    // bound nodes not reached from a head lie on closed cycles
    for start in 0..n {
        if on_chain[start] || succ[start].is_none() {
            continue;
        }
        let mut len = 0;
        let mut node = start;
        loop {
            on_chain[node] = true;
            len += 1;
            match succ[node] {
                Some(next) if next == start => break,
                Some(next) if !on_chain[next] => node = next,
                _ => return Err(Failure),
            }
        }
        if len < n {
            return Err(Failure);
        }
    }
    Ok(())
}

/// Deadline-based arc elimination and `[est, lst]` tightening, to fixpoint.
///
/// Early arrival waits, so only `est_i + c_ij > lst_j` removes an arc. No-op without windows.
pub fn propagate_time_windows(store: &mut DomainStore, model: &Model) -> Propagation {
    let Some(depot) = model.depot() else {
        return Ok(());
    };
    if model.windows().is_none() {
        return Ok(());
    }
    let n = store.n();
    let cost = model.cost();
    let mut arcs: Vec<usize> = Vec::with_capacity(n);
    loop {
        let before = store.changes();
        for i in 0..n {
            if i == depot.end {
                continue;
            }
            arcs.clear();
            arcs.extend(store.domains().iter(i));
            let est_i = store.earliest(i);
            for &j in &arcs {
                if est_i + cost[(i, j)] > store.latest(j) {
                    store.remove(i, j)?;
                }
            }
            // departure from i must still reach some successor by its deadline
            let latest_departure = store
                .domains()
                .iter(i)
                .map(|j| store.latest(j) - cost[(i, j)])
                .max()
                .ok_or(Failure)?;
            store.lower_latest(i, latest_departure)?;
        }
        for j in 0..n {
            if j == depot.start {
                continue;
            }
            let mut earliest_arrival: Option<Cost> = None;
            for i in 0..n {
                if i != depot.end && store.contains(i, j) {
                    let t = store.earliest(i) + cost[(i, j)];
                    earliest_arrival = Some(earliest_arrival.map_or(t, |e| e.min(t)));
                }
            }
            match earliest_arrival {
                Some(t) => {
                    store.raise_earliest(j, t)?;
                }
                None => return Err(Failure),
            }
        }
        if store.changes() == before {
            return Ok(());
        }
    }
}

/// Removes every arc whose reduced-cost bound reaches `ub`.
pub fn cost_filter(store: &mut DomainStore, ap: &ApResult, ub: Cost) -> Propagation {
    filter_scaled(store, ap, 0, 1, ub)
}

/// As [`cost_filter`] for a bound in fixed-point units: the bound of arc `(i, j)` is
/// `ceil((lb + offset + rc_ij) / scale)`.
pub(crate) fn filter_scaled(
    store: &mut DomainStore,
    ap: &ApResult,
    offset: Cost,
    scale: Cost,
    ub: Cost,
) -> Propagation {
    let Some(limit) = prune_limit(ub, scale) else {
        return Ok(());
    };
    let base = ap.lower_bound() + offset;
    let n = store.n();
    let mut doomed: Vec<usize> = Vec::new();
    for i in 0..n {
        doomed.clear();
        doomed.extend(
            store
                .domains()
                .iter(i)
                .filter(|&j| ap.reduced(i, j).is_some_and(|rc| base + rc > limit)),
        );
        for &j in &doomed {
            store.remove(i, j)?;
        }
    }
    Ok(())
}

/// Largest fixed-point value still compatible with a solution of cost below `ub`.
pub(crate) fn prune_limit(ub: Cost, scale: Cost) -> Option<Cost> {
    if ub >= crate::cost::SENTINEL {
        return None;
    }
    Some((ub - 1).saturating_mul(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::solve_ap;
    use crate::cost::CostMatrix;
    use crate::instance::{Instance, TimeWindow};

    fn tsp(n: usize) -> Model {
        Model::new(&Instance::tsp("t", CostMatrix::filled(n, 1)).unwrap())
    }

    #[test]
    fn short_path_cannot_close() {
        let m = tsp(4);
        let mut s = DomainStore::new(&m);
        s.assign(0, 1).unwrap();
        s.assign(1, 2).unwrap();
        propagate_nocycle(&mut s).unwrap();
        assert!(!s.contains(2, 0));
    }

    #[test]
    fn full_length_closure_allowed() {
        let m = tsp(3);
        let mut s = DomainStore::new(&m);
        s.assign(0, 1).unwrap();
        propagate_nocycle(&mut s).unwrap();
        s.assign(1, 2).unwrap();
        propagate_nocycle(&mut s).unwrap();
        assert!(s.contains(2, 0));
    }

    #[test]
    fn closed_subtour_fails() {
        let m = tsp(4);
        let mut s = DomainStore::new(&m);
        s.assign(0, 1).unwrap();
        s.assign(1, 0).unwrap();
        assert_eq!(propagate_nocycle(&mut s), Err(Failure));
    }

    #[test]
    fn alldiff_removes_taken_values() {
        let m = tsp(4);
        let mut s = DomainStore::new(&m);
        s.assign(0, 2).unwrap();
        propagate_alldiff(&mut s).unwrap();
        assert!(!s.contains(1, 2));
        assert!(!s.contains(3, 2));
    }

    fn tw_model(cost: CostMatrix, windows: Vec<TimeWindow>) -> Model {
        Model::new(&Instance::tsptw("t", cost, windows).unwrap())
    }

    #[test]
    fn deadline_removes_arc() {
        // nodes: 0 start depot, 1, 2, 3 end depot
        let mut c = CostMatrix::filled(4, 1);
        c[(1, 2)] = 8;
        let w = vec![
            TimeWindow::new(0, 100),
            TimeWindow::new(0, 10),
            TimeWindow::new(0, 5),
            TimeWindow::new(0, 100),
        ];
        let m = tw_model(c, w);
        let mut s = DomainStore::new(&m);
        propagate_time_windows(&mut s, &m).unwrap();
        assert!(!s.contains(1, 2));
        assert!(s.contains(2, 1));
    }

    #[test]
    fn waiting_raises_earliest() {
        let mut c = CostMatrix::filled(3, 4);
        c[(0, 1)] = 4;
        let w = vec![
            TimeWindow::new(0, 0),
            TimeWindow::new(9, 30),
            TimeWindow::new(0, 100),
        ];
        let m = tw_model(c, w);
        let mut s = DomainStore::new(&m);
        s.assign(0, 1).unwrap();
        propagate_time_windows(&mut s, &m).unwrap();
        assert_eq!(s.earliest(1), 9);
        assert_eq!(s.earliest(2), 13);
    }

    #[test]
    fn cost_filter_uses_reduced_costs() {
        let mut c = CostMatrix::filled(3, 10);
        c[(0, 1)] = 1;
        c[(1, 2)] = 1;
        c[(2, 0)] = 1;
        let m = Model::new(&Instance::tsp("t", c).unwrap());
        let mut s = DomainStore::new(&m);
        let ap = solve_ap(m.cost(), s.domains()).unwrap();
        assert_eq!(ap.lower_bound(), 3);
        cost_filter(&mut s, &ap, crate::cost::SENTINEL).unwrap();
        assert_eq!(s.domains().arc_count(), 6);
        let rc = ap.reduced(0, 2).unwrap();
        // 3 + rc >= ub removes (0, 2)
        cost_filter(&mut s, &ap, 3 + rc).unwrap();
        assert!(!s.contains(0, 2));
        assert!(s.contains(0, 1));
    }
}
