//! Realization search: a pruned backtracking enumerator and a brute-force oracle.

use std::collections::BTreeSet;

use super::{verify_realization, OpenDynamic, Realization};
use crate::error::{Error, Result};

/// Refusal threshold for [`brute_force_realizations`], in candidate assignments.
pub const DEFAULT_ORACLE_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub total_only: bool,
    pub maximal_only: bool,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub realizations: Vec<Realization>,
    pub truncated: bool,
}

/// One backward-closure constraint: if `succ` is defined then `pred` is, and
/// `σ(succ) ∈ allowed[σ(pred)]`. Values are indices into `st(α)`.
struct Link {
    pred: usize,
    succ: usize,
    allowed: Vec<BTreeSet<usize>>,
}

struct Problem {
    times: Vec<String>,
    states: Vec<String>,
    domains: Vec<BTreeSet<usize>>,
    links: Vec<Link>,
    as_pred: Vec<Vec<usize>>,
    as_succ: Vec<Vec<usize>>,
}

impl Problem {
    fn new(a: &OpenDynamic, lam: &str) -> Problem {
        let clock = a.clock();
        let alpha = a.alpha();
        let times: Vec<String> = clock.total_state_set().elements().to_vec();
        let states: Vec<String> = alpha.total_state_set().elements().to_vec();
        let time_index = |t: &str| times.binary_search_by(|x| x.as_str().cmp(t)).expect("known time");
        let state_index = |u: &str| states.binary_search_by(|x| x.as_str().cmp(u)).expect("known state");

        let mut domains = vec![BTreeSet::new(); times.len()];
        for (i, u) in states.iter().enumerate() {
            let t = a.date(u).expect("ρ is total");
            if clock.owner(t) == alpha.owner(u) {
                domains[time_index(t)].insert(i);
            }
        }

        let mut links = Vec::new();
        for d in alpha.engine().arrows() {
            let step = alpha.transition(&d.id, lam).expect("validated");
            for t in clock.states(&d.dom).expect("validated").iter() {
                let next = clock.apply(&d.id, t).expect("validated");
                let mut allowed = vec![BTreeSet::new(); states.len()];
                for (u, v) in step.pairs() {
                    allowed[state_index(u)].insert(state_index(v));
                }
                links.push(Link {
                    pred: time_index(t),
                    succ: time_index(next),
                    allowed,
                });
            }
        }
        let mut as_pred = vec![Vec::new(); times.len()];
        let mut as_succ = vec![Vec::new(); times.len()];
        for (k, link) in links.iter().enumerate() {
            as_pred[link.pred].push(k);
            as_succ[link.succ].push(k);
        }
        Problem {
            times,
            states,
            domains,
            links,
            as_pred,
            as_succ,
        }
    }

    /// Shrinks value domains until every link is arc-consistent on defined values.
    fn propagate(&mut self) {
        let mut changed = true;
        while changed {
            changed = false;
            for link in &self.links {
                let narrowed: BTreeSet<usize> = if link.pred == link.succ {
                    self.domains[link.succ]
                        .iter()
                        .copied()
                        .filter(|&u| link.allowed[u].contains(&u))
                        .collect()
                } else {
                    let reachable: BTreeSet<usize> = self.domains[link.pred]
                        .iter()
                        .flat_map(|&u| link.allowed[u].iter().copied())
                        .collect();
                    self.domains[link.succ].intersection(&reachable).copied().collect()
                };
                if narrowed.len() != self.domains[link.succ].len() {
                    self.domains[link.succ] = narrowed;
                    changed = true;
                }
            }
        }
    }

    /// Reverse postorder along links, so predecessors come first on acyclic clocks.
    fn order(&self) -> Vec<usize> {
        let n = self.times.len();
        let mut seen = vec![false; n];
        let mut post = Vec::with_capacity(n);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((x, next)) = stack.pop() {
                if let Some(&k) = self.as_pred[x].get(next) {
                    stack.push((x, next + 1));
                    let y = self.links[k].succ;
                    if !seen[y] {
                        seen[y] = true;
                        stack.push((y, 0));
                    }
                } else {
                    post.push(x);
                }
            }
        }
        post.reverse();
        post
    }

    fn consistent(&self, x: usize, value: Option<usize>, assignment: &[Option<Option<usize>>]) -> bool {
        for &k in &self.as_succ[x] {
            let link = &self.links[k];
            let pred = if link.pred == x {
                Some(value)
            } else {
                assignment[link.pred]
            };
            if let (Some(v), Some(p)) = (value, pred) {
                match p {
                    None => return false,
                    Some(u) if !link.allowed[u].contains(&v) => return false,
                    _ => {}
                }
            }
        }
        for &k in &self.as_pred[x] {
            let link = &self.links[k];
            if link.succ == x {
                continue;
            }
            if let Some(Some(v)) = assignment[link.succ] {
                match value {
                    None => return false,
                    Some(u) if !link.allowed[u].contains(&v) => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn solve(&self, lam: &str, total_only: bool, cap: Option<usize>, out: &mut Vec<Realization>) {
        let order = self.order();
        let mut assignment: Vec<Option<Option<usize>>> = vec![None; self.times.len()];
        self.descend(lam, &order, 0, total_only, cap, &mut assignment, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        lam: &str,
        order: &[usize],
        depth: usize,
        total_only: bool,
        cap: Option<usize>,
        assignment: &mut Vec<Option<Option<usize>>>,
        out: &mut Vec<Realization>,
    ) -> bool {
        if cap.is_some_and(|c| out.len() >= c) {
            return false;
        }
        let Some(&x) = order.get(depth) else {
            out.push(Realization::new(
                lam,
                assignment
                    .iter()
                    .enumerate()
                    .filter_map(|(t, v)| v.flatten().map(|u| (self.times[t].clone(), self.states[u].clone()))),
            ));
            return !cap.is_some_and(|c| out.len() >= c);
        };
        let mut candidates: Vec<Option<usize>> = Vec::new();
        if !total_only {
            candidates.push(None);
        }
        candidates.extend(self.domains[x].iter().map(|&u| Some(u)));
        for value in candidates {
            if !self.consistent(x, value, assignment) {
                continue;
            }
            assignment[x] = Some(value);
            let go_on = self.descend(lam, order, depth + 1, total_only, cap, assignment, out);
            assignment[x] = None;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// All realizations of `a` under `options`, in canonical order.
///
/// With a `limit`, at most that many are returned and `truncated` reports
/// whether more exist. `maximal_only` keeps the realizations that are not a
/// strict restriction of another realization with the same parameter.
pub fn enumerate_realizations(a: &OpenDynamic, options: &EnumerateOptions) -> Enumeration {
    let cap = match (options.limit, options.maximal_only) {
        (Some(n), false) => Some(n.saturating_add(1)),
        _ => None,
    };
    let mut found = Vec::new();
    for lam in a.alpha().params().iter() {
        let mut problem = Problem::new(a, lam);
        problem.propagate();
        if options.total_only && problem.domains.iter().any(BTreeSet::is_empty) {
            continue;
        }
        let mut here = Vec::new();
        let remaining = cap.map(|c| c.saturating_sub(found.len()));
        problem.solve(lam, options.total_only, remaining, &mut here);
        if options.maximal_only {
            here = keep_maximal(here);
        }
        found.extend(here);
        if cap.is_some_and(|c| found.len() >= c) {
            break;
        }
    }
    found.sort();
    let mut truncated = false;
    if let Some(n) = options.limit {
        if found.len() > n {
            found.truncate(n);
            truncated = true;
        }
    }
    Enumeration {
        realizations: found,
        truncated,
    }
}

fn keep_maximal(all: Vec<Realization>) -> Vec<Realization> {
    all.iter()
        .filter(|r| !all.iter().any(|s| s.len() > r.len() && r.is_restriction_of(s)))
        .cloned()
        .collect()
}

/// `|L| · ∏_t (1 + |ρ⁻¹(t)|)`, saturating.
pub fn candidate_count(a: &OpenDynamic) -> u128 {
    let per_lambda = a
        .clock()
        .total_state_set()
        .iter()
        .fold(1u128, |acc, t| acc.saturating_mul(1 + a.fiber(t).len() as u128));
    per_lambda.saturating_mul(a.alpha().params().len() as u128)
}

pub fn brute_force_realizations(a: &OpenDynamic) -> Result<Vec<Realization>> {
    brute_force_realizations_bounded(a, DEFAULT_ORACLE_BOUND)
}

/// Tries every partial assignment of each clock state into its `ρ`-fiber and
/// keeps those accepted by [`verify_realization`].
pub fn brute_force_realizations_bounded(a: &OpenDynamic, bound: u128) -> Result<Vec<Realization>> {
    let candidates = candidate_count(a);
    if candidates > bound {
        return Err(Error::OracleBound { candidates, bound });
    }
    let times = a.clock().total_state_set();
    let choices: Vec<Vec<Option<&str>>> = times
        .iter()
        .map(|t| std::iter::once(None).chain(a.fiber(t).into_iter().map(Some)).collect())
        .collect();
    let mut out = Vec::new();
    for lam in a.alpha().params().iter() {
        let mut digits = vec![0usize; choices.len()];
        loop {
            let r = Realization::new(
                lam,
                times
                    .iter()
                    .zip(&digits)
                    .zip(&choices)
                    .filter_map(|((t, &i), c)| c[i].map(|u| (t, u))),
            );
            if verify_realization(a, &r)?.is_clean() {
                out.push(r);
            }
            let mut pos = 0;
            while pos < digits.len() {
                digits[pos] += 1;
                if digits[pos] < choices[pos].len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}
