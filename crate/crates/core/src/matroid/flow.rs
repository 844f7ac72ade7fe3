//! Densest sets of graphic matroids by minimum cuts.
//!
//! `D(S, p/q)` is the maximal minimizer of `p·r(U) + q·|S ∖ U|`, which is
//! the largest `x(S)` over `x ≤ q` in the polymatroid of `p·r`. A greedy
//! fill reaches a maximal such `x`, and the densest set is the union of the
//! sets tight for `x`. For an edge `uv` the residual capacity
//! `min_{T ∋ uv} p·r(T) − x(T)` is `min_{W ⊇ {u,v}} p(|W| − 1) − x(E(W))`,
//! a minimum cut.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::set::ElementSet;

const INF: i64 = i64::MAX / 4;

struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<u32>,
    next: Vec<usize>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            adj: alloc::vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: alloc::vec![0; n],
            next: alloc::vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, forward: i64, backward: i64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(forward);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(backward);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.next[u] < self.adj[u].len() {
            let a = self.adj[u][self.next[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

struct Fill<'a> {
    ends: &'a [(usize, usize)],
    incident: Vec<Vec<usize>>,
    x: Vec<i64>,
    p: i64,
}

impl Fill<'_> {
    /// `min_{W ⊇ {u,v}} p(|W| − 1) − x(E(W))` for edge `i = uv`.
    fn residual(&self, i: usize) -> i64 {
        // Vertices outside the support component of u and v never help:
        // each such block of W adds at least p.
        let (u, v) = self.ends[i];
        let mut local = alloc::vec![usize::MAX; self.incident.len()];
        let mut verts = Vec::new();
        let mut stack = alloc::vec![u, v];
        while let Some(w) = stack.pop() {
            if local[w] != usize::MAX {
                continue;
            }
            local[w] = verts.len();
            verts.push(w);
            for &j in &self.incident[w] {
                if self.x[j] > 0 {
                    let (a, b) = self.ends[j];
                    stack.push(if a == w { b } else { a });
                }
            }
        }
        let k = verts.len();
        let (s, t) = (k, k + 1);
        let mut net = Network::new(k + 2);
        let mut degree = alloc::vec![0i64; k];
        let mut seen = Vec::new();
        for &w in &verts {
            for &j in &self.incident[w] {
                if self.x[j] > 0 && self.ends[j].0 == w {
                    seen.push(j);
                }
            }
        }
        for &j in &seen {
            let (a, b) = (local[self.ends[j].0], local[self.ends[j].1]);
            degree[a] += self.x[j];
            degree[b] += self.x[j];
            net.add(a, b, self.x[j], self.x[j]);
        }
        // Cut value is 2(p|W| − x(E(W))) plus the total degree.
        let total: i64 = degree.iter().sum();
        for (w, &d) in degree.iter().enumerate() {
            if d > 0 {
                net.add(s, w, d, 0);
            }
            net.add(w, t, 2 * self.p, 0);
        }
        net.add(s, local[u], INF, 0);
        net.add(s, local[v], INF, 0);
        let cut = net.max_flow(s, t);
        (cut - total) / 2 - self.p
    }
}

/// `D(S, p/q)` on the cycle matroid of `edges`, for `p > q > 0`.
pub(crate) fn graph_densest(vertices: usize, edges: &[(usize, usize)], subset: &ElementSet, p: usize, q: usize) -> ElementSet {
    let ids = subset.to_vec();
    let ends: Vec<(usize, usize)> = ids.iter().map(|&e| edges[e]).collect();
    let mut incident = alloc::vec![Vec::new(); vertices];
    for (i, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    let mut fill = Fill {
        ends: &ends,
        incident,
        x: alloc::vec![0; ids.len()],
        p: p as i64,
    };
    for i in 0..ids.len() {
        fill.x[i] = (q as i64).min(fill.residual(i));
    }
    let mut out = ElementSet::new(subset.universe());
    for (i, &e) in ids.iter().enumerate() {
        if fill.residual(i) == 0 {
            out.insert(e);
        }
    }
    out
}
