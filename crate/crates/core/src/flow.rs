//! Conditional choice systems from max-flow.
//!
//! Given weights `mu(y)` on an index set, a choice distribution `lambda` and a
//! map `h(y)` of allowed alternatives, either build `pi(. | y)` supported in
//! `h(y)` with `lambda(a) = sum_y mu(y) pi(a | y)`, or exhibit a set `A` with
//! `lambda(A) < mu({y : h(y) ⊆ A})`.
//!
//! The network is `s -> a` (capacity `lambda(a)`), `a -> y` when `a ∈ h(y)`
//! (capacity 1), `y -> t` (capacity `mu(y)`). The system exists iff the max
//! flow is 1.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};

use crate::domain::{ChoiceDistribution, MarginalDataset, Menu, StochasticChoiceFunction};
use crate::rational::{one, zero};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowProblem {
    /// `(mu(y), h(y))` for each index `y`.
    pub sources: Vec<(Rational, Menu)>,
    pub sinks: ChoiceDistribution,
}

impl FlowProblem {
    pub fn new(sources: Vec<(Rational, Menu)>, sinks: ChoiceDistribution) -> Result<Self> {
        let n = sinks.n();
        let mut total = zero();
        for (weight, allowed) in &sources {
            if *weight < zero() {
                return Err(Error::NegativeProbability {
                    what: format!("index with allowed set {allowed:?}"),
                    value: weight.clone(),
                });
            }
            if !allowed.within(n) {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: 32 - allowed.bits().leading_zeros() as usize,
                });
            }
            total += weight;
        }
        if !total.is_one() {
            return Err(Error::SumNotOne {
                what: "index weights".into(),
                deviation: crate::rational::abs(&(&total - one())),
                sum: total,
            });
        }
        Ok(FlowProblem { sources, sinks })
    }

    pub fn n(&self) -> usize {
        self.sinks.n()
    }
}

/// A set `A` with `lambda(A) < mu({y : h(y) ⊆ A})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub set: Menu,
    pub choice_mass: Rational,
    pub forced_mass: Rational,
}

impl Cut {
    pub fn deficit(&self) -> Rational {
        &self.forced_mass - &self.choice_mass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub feasible: bool,
    pub max_flow: Rational,
    /// `pi(. | y)` for each index, present iff feasible.
    pub pi: Option<Vec<ChoiceDistribution>>,
    /// Violated inequality, present iff infeasible.
    pub cut: Option<Cut>,
}

impl FlowResult {
    /// Re-keys `pi` by menu, for problems whose indices are menus.
    pub fn choice_function(&self, n: usize, menus: &[Menu]) -> Option<StochasticChoiceFunction> {
        let pi = self.pi.as_ref()?;
        let map: BTreeMap<Menu, ChoiceDistribution> =
            menus.iter().copied().zip(pi.iter().cloned()).collect();
        StochasticChoiceFunction::new(n, map).ok()
    }
}

struct Edge {
    to: usize,
    cap: Rational,
    rev: usize,
}

struct Network {
    adj: Vec<Vec<Edge>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            adj: (0..nodes).map(|_| Vec::new()).collect(),
        }
    }

    /// Returns the position of the forward edge in `adj[from]`.
    fn add_edge(&mut self, from: usize, to: usize, cap: Rational) -> usize {
        let fwd = self.adj[from].len();
        let back = self.adj[to].len();
        self.adj[from].push(Edge { to, cap, rev: back });
        self.adj[to].push(Edge {
            to: from,
            cap: zero(),
            rev: fwd,
        });
        fwd
    }

    /// Shortest augmenting path by BFS; returns the parent edges.
    fn bfs(&self, s: usize, t: usize) -> Option<Vec<(usize, usize)>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
        let mut visited = vec![false; self.adj.len()];
        visited[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for (i, e) in self.adj[u].iter().enumerate() {
                if !visited[e.to] && e.cap > zero() {
                    visited[e.to] = true;
                    parent[e.to] = Some((u, i));
                    if e.to == t {
                        let mut path = Vec::new();
                        let mut v = t;
                        while let Some((u, i)) = parent[v] {
                            path.push((u, i));
                            v = u;
                        }
                        return Some(path);
                    }
                    queue.push_back(e.to);
                }
            }
        }
        None
    }

    fn max_flow(&mut self, s: usize, t: usize) -> Rational {
        let mut total = zero();
        while let Some(path) = self.bfs(s, t) {
            let bottleneck = path
                .iter()
                .map(|&(u, i)| &self.adj[u][i].cap)
                .min()
                .expect("nonempty path")
                .clone();
            for &(u, i) in &path {
                self.adj[u][i].cap -= &bottleneck;
                let (to, rev) = (self.adj[u][i].to, self.adj[u][i].rev);
                self.adj[to][rev].cap += &bottleneck;
            }
            total += bottleneck;
        }
        total
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for e in &self.adj[u] {
                if !seen[e.to] && e.cap > zero() {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }
}

/// Solves the feasibility problem by Edmonds-Karp max-flow in exact
/// arithmetic. Indices with zero weight get the uniform conditional on their
/// allowed set.
pub fn solve_flow(problem: &FlowProblem) -> FlowResult {
    let n = problem.n();
    let m = problem.sources.len();
    let (s, t) = (0, n + m + 1);
    let alt = |a: usize| 1 + a;
    let idx = |y: usize| 1 + n + y;

    let mut net = Network::new(n + m + 2);
    for a in 0..n {
        net.add_edge(s, alt(a), problem.sinks[a].clone());
    }
    // (alternative, y, edge position) for reading flows back.
    let mut middle = Vec::new();
    for (y, (weight, allowed)) in problem.sources.iter().enumerate() {
        for a in allowed.indices() {
            let pos = net.add_edge(alt(a), idx(y), one());
            middle.push((a, y, pos));
        }
        net.add_edge(idx(y), t, weight.clone());
    }

    let max_flow = net.max_flow(s, t);
    if max_flow.is_one() {
        let mut pi = vec![vec![zero(); n]; m];
        for &(a, y, pos) in &middle {
            let e = &net.adj[alt(a)][pos];
            let flow = &net.adj[e.to][e.rev].cap;
            pi[y][a] = flow.clone();
        }
        let pi = pi
            .into_iter()
            .zip(&problem.sources)
            .map(|(flows, (weight, allowed))| {
                if weight.is_zero() {
                    ChoiceDistribution::uniform_on(n, *allowed)
                } else {
                    let cond = flows.into_iter().map(|f| f / weight).collect();
                    ChoiceDistribution::new(cond).expect("flow out of y equals mu(y)")
                }
            })
            .collect();
        FlowResult {
            feasible: true,
            max_flow,
            pi: Some(pi),
            cut: None,
        }
    } else {
        let seen = net.reachable(s);
        let set_bits = (0..n)
            .filter(|&a| !seen[alt(a)])
            .fold(0u32, |acc, a| acc | 1 << a);
        let set = Menu::new(set_bits).expect("a deficient flow leaves some alternative unreachable");
        let choice_mass = problem.sinks.mass(set_bits);
        let forced_mass: Rational = problem
            .sources
            .iter()
            .filter(|(_, allowed)| allowed.is_subset_of(set))
            .map(|(w, _)| w)
            .sum();
        debug_assert!(choice_mass < forced_mass);
        FlowResult {
            feasible: false,
            max_flow,
            pi: None,
            cut: Some(Cut {
                set,
                choice_mass,
                forced_mass,
            }),
        }
    }
}

/// Unrestricted rationalization: indices are the support menus of `mu` and
/// each menu allows its own alternatives.
pub fn rationalize(data: &MarginalDataset) -> FlowResult {
    let sources = data.mu.iter().map(|(m, w)| (w.clone(), m)).collect();
    let problem = FlowProblem::new(sources, data.lambda.clone()).expect("validated dataset");
    solve_flow(&problem)
}

/// Support menus of `mu` in the order used by [`rationalize`].
pub fn rationalize_menus(data: &MarginalDataset) -> Vec<Menu> {
    data.mu.support().collect()
}

/// The conditional system from [`rationalize`], keyed by menu.
pub fn rationalizing_system(data: &MarginalDataset) -> Option<StochasticChoiceFunction> {
    rationalize(data).choice_function(data.n(), &rationalize_menus(data))
}
