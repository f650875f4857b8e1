//! Dinic max-flow on floating capacities.

use std::collections::VecDeque;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
struct Edge<T> {
    to: usize,
    cap: T,
    rev: usize,
}

pub struct MaxFlow<T> {
    graph: Vec<Vec<Edge<T>>>,
    level: Vec<i32>,
    iter: Vec<usize>,
    /// Residual capacities at or below this are treated as saturated.
    tiny: T,
}

impl<T: Scalar> MaxFlow<T> {
    pub fn new(n: usize, tiny: T) -> Self {
        Self { graph: vec![Vec::new(); n], level: vec![-1; n], iter: vec![0; n], tiny }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: T) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(Edge { to, cap, rev: rev_from });
        self.graph[to].push(Edge { to: from, cap: T::zero(), rev: rev_to });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut q = VecDeque::new();
        self.level[s] = 0;
        q.push_back(s);
        while let Some(v) = q.pop_front() {
            for e in &self.graph[v] {
                if e.cap > self.tiny && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    q.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: T) -> T {
        if v == t {
            return f;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let e = self.graph[v][i];
            if e.cap > self.tiny && self.level[v] < self.level[e.to] {
                let d = self.dfs(e.to, t, f.min(e.cap));
                if d > T::zero() {
                    self.graph[v][i].cap -= d;
                    self.graph[e.to][e.rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        T::zero()
    }

    pub fn run(&mut self, s: usize, t: usize) -> T {
        let mut flow = T::zero();
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, T::infinity());
                if f <= T::zero() {
                    break;
                }
                flow += f;
            }
        }
    }
}
