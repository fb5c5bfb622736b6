//! Independent oracles shared by the integration tests. Nothing here calls the
//! library algorithm it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use contractible::contraction::{PathGenerator, Segment, Slot};
use contractible::random::{generate_passing, generate_random, RandomSpec};
use contractible::{Graph, Multiplicity, VertexRef, VertexSet};

/// Core adjacency of a rayless graph as `src -> [(dst, mult)]`.
pub fn adjacency(g: &Graph) -> BTreeMap<String, Vec<(String, Multiplicity)>> {
    let mut adj: BTreeMap<String, Vec<(String, Multiplicity)>> = g
        .vertices()
        .iter()
        .map(|v| (v.clone(), Vec::new()))
        .collect();
    for (s, d, m) in g.edges() {
        adj.get_mut(s).unwrap().push((d.to_string(), m));
    }
    adj
}

/// Number of paths `u -> … -> w` with interior vertices outside `g0`, in a
/// rayless graph whose complement of `g0` is acyclic. Memoized on the start.
pub fn contracted_counts(
    g: &Graph,
    g0: &BTreeSet<String>,
) -> BTreeMap<(String, String), Multiplicity> {
    let adj = adjacency(g);
    let mut memo: BTreeMap<String, BTreeMap<String, Multiplicity>> = BTreeMap::new();
    fn from(
        x: &str,
        adj: &BTreeMap<String, Vec<(String, Multiplicity)>>,
        g0: &BTreeSet<String>,
        memo: &mut BTreeMap<String, BTreeMap<String, Multiplicity>>,
    ) -> BTreeMap<String, Multiplicity> {
        // paths from x (x's own membership ignored) ending at the first g0 vertex
        if let Some(m) = memo.get(x) {
            return m.clone();
        }
        let mut out: BTreeMap<String, Multiplicity> = BTreeMap::new();
        for (d, m) in &adj[x] {
            if g0.contains(d) {
                let e = out.entry(d.clone()).or_default();
                *e = *e + *m;
            } else {
                for (w, k) in from(d, adj, g0, memo) {
                    let e = out.entry(w).or_default();
                    *e = *e + *m * k;
                }
            }
        }
        memo.insert(x.to_string(), out.clone());
        out
    }
    let mut res = BTreeMap::new();
    for u in g0 {
        for (w, m) in from(u, &adj, g0, &mut memo) {
            if !m.is_zero() {
                res.insert((u.clone(), w), m);
            }
        }
    }
    res
}

/// Hereditary and saturated, straight from the definitions on a rayless graph.
pub fn is_sh_brute(g: &Graph, h: &BTreeSet<String>) -> bool {
    let adj = adjacency(g);
    for v in h {
        if adj[v].iter().any(|(d, _)| !h.contains(d)) {
            return false;
        }
    }
    for (v, out) in &adj {
        if h.contains(v) || out.is_empty() {
            continue;
        }
        let total: Multiplicity = out.iter().map(|(_, m)| *m).sum();
        if !total.is_omega() && out.iter().all(|(d, _)| h.contains(d)) {
            return false;
        }
    }
    true
}

/// All saturated hereditary subsets of a rayless graph by filtering `2^n` subsets.
pub fn sh_brute(g: &Graph) -> BTreeSet<BTreeSet<String>> {
    let ids: Vec<&String> = g.vertices().iter().collect();
    let n = ids.len();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let h: BTreeSet<String> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ids[i].clone())
            .collect();
        if is_sh_brute(g, &h) {
            out.insert(h);
        }
    }
    out
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k−1}` with
/// `D_k` the gcd of all `k×k` minors.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let r = m.len();
    let c = m.first().map_or(0, Vec::len);
    let mut divisors = vec![1i64];
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                    .collect();
                g = gcd(g, det(&minor));
            }
        }
        divisors.push(g);
    }
    (1..divisors.len())
        .map(|k| {
            if divisors[k] == 0 {
                0
            } else {
                divisors[k] / divisors[k - 1]
            }
        })
        .collect()
}

/// All paths of a finite rayless graph from `v` whose later vertices avoid
/// `g0` except the last, which is in `g0`. Parallel copies are distinct.
pub fn b_paths_dfs(g: &Graph, g0: &BTreeSet<String>, v: &str) -> Vec<String> {
    let adj = adjacency(g);
    let mut out = Vec::new();
    fn go(
        at: &str,
        text: String,
        adj: &BTreeMap<String, Vec<(String, Multiplicity)>>,
        g0: &BTreeSet<String>,
        out: &mut Vec<String>,
    ) {
        for (d, m) in &adj[at] {
            let n = m.finite().expect("finite graph");
            for slot in 0..n {
                let mut t = format!("{text} -> {d}");
                if slot > 0 {
                    t.push_str(&format!("#{slot}"));
                }
                if g0.contains(d) {
                    out.push(t);
                } else {
                    go(d, t, adj, g0, out);
                }
            }
        }
    }
    go(v, v.to_string(), &adj, g0, &mut out);
    out.sort();
    out
}

/// Every member of a generator that stays within spine positions `≤ depth`,
/// rendered as text. `Any` slots are not supported.
pub fn instances_up_to(gen: &PathGenerator, depth: usize) -> Vec<String> {
    let mut out = Vec::new();
    fn go(segs: &[Segment], text: String, depth: usize, out: &mut Vec<String>) {
        let Some((first, rest)) = segs.split_first() else {
            out.push(text);
            return;
        };
        match first {
            Segment::Edge { to, slot } => {
                let Slot::Index(i) = slot else {
                    panic!("unbounded slot")
                };
                if let VertexRef::Ray { pos, .. } = to {
                    if *pos > depth {
                        return;
                    }
                }
                let mut t = format!("{text} -> {to}");
                if *i > 0 {
                    t.push_str(&format!("#{i}"));
                }
                go(rest, t, depth, out);
            }
            Segment::PeriodicExit {
                ray,
                from,
                first,
                period,
                target,
                slot,
            } => {
                let mut exit = *first;
                while exit <= depth {
                    let mut t = text.clone();
                    for k in from + 1..=exit {
                        t.push_str(&format!(" -> {ray}.x{k}"));
                    }
                    t.push_str(&format!(" -> {target}"));
                    if *slot > 0 {
                        t.push_str(&format!("#{slot}"));
                    }
                    go(rest, t, depth, out);
                    exit += period;
                }
            }
        }
    }
    go(&gen.segments, gen.start.to_string(), depth, &mut out);
    out
}

pub fn core_set(g0: &VertexSet) -> BTreeSet<String> {
    g0.core().clone()
}

/// Random instances for the checker comparison: plain draws plus passing draws.
pub fn checker_instances(plain: u64, passing: u64) -> Vec<(Graph, VertexSet)> {
    let spec = RandomSpec::default();
    let mut out: Vec<(Graph, VertexSet)> = (0..plain)
        .map(|s| generate_random(&spec.with_seed(s)))
        .collect();
    for s in 0..passing {
        let (g, g0, _) =
            generate_passing(&spec.with_seed(10_000 + s), 2000).expect("passing instance");
        out.push((g, g0));
    }
    out
}

/// Passing instances without `ω` edges, so every generator can be expanded.
pub fn passing_finite_mult(n: u64) -> Vec<(Graph, VertexSet)> {
    let spec = RandomSpec {
        omega_prob: 0.0,
        ..Default::default()
    };
    (0..n)
        .map(|s| {
            let (g, g0, _) =
                generate_passing(&spec.with_seed(20_000 + s), 2000).expect("passing instance");
            (g, g0)
        })
        .collect()
}

/// Fixtures paired with the `G⁰` each is studied with.
pub fn fixture_cases() -> Vec<(&'static str, Graph, VertexSet)> {
    use contractible::fixtures;
    let vw = || VertexSet::from_core(["v", "w"]);
    vec![
        (
            "FIX-LOOP",
            fixtures::loop_graph(),
            VertexSet::from_core(["u"]),
        ),
        ("FIX-LOOP/empty", fixtures::loop_graph(), VertexSet::new()),
        ("FIX-B2", fixtures::b2(), vw()),
        ("FIX-B2/all", fixtures::b2(), fixtures::b2().all_vertices()),
        ("FIX-INF", fixtures::inf(), vw()),
        ("FIX-VI-E", fixtures::vi_e(), vw()),
        ("FIX-VI-F", fixtures::vi_f(), vw()),
        ("FIX-ESSE/a", fixtures::esse(), VertexSet::from_core(["a"])),
        ("FIX-ESSE/x", fixtures::esse(), VertexSet::from_core(["x"])),
        (
            "FIX-ESSE/all",
            fixtures::esse(),
            fixtures::esse().all_vertices(),
        ),
        ("tree3", fixtures::tree(3), vw()),
    ]
}
