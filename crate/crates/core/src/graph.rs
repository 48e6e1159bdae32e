//! The upper accessibility graph, its communication-class decomposition, and
//! the two accessibility conditions (top class regular / top class absorbing)
//! that decide ergodicity and weak ergodicity.

use crate::gamble::StateSpace;
use crate::operator::UpperTransitionOperator;

/// Directed graph with an edge `x -> y` whenever the upper probability of
/// moving from `x` to `y` in one step is strictly positive.
///
/// Edges are decided by structural predicates on each row representation
/// rather than by thresholding envelope values, so the topology cannot flip
/// on rounding noise.
#[derive(Clone, Debug)]
pub struct AccessibilityGraph {
    space: StateSpace,
    adjacency: Vec<Vec<bool>>,
}

/// Builds the upper accessibility graph of an operator.
pub fn build_upper_graph(op: &UpperTransitionOperator) -> AccessibilityGraph {
    let n = op.len();
    let adjacency = op
        .rows()
        .iter()
        .map(|row| (0..n).map(|j| row.edge_positive(j)).collect())
        .collect();
    AccessibilityGraph { space: op.space().clone(), adjacency }
}

impl AccessibilityGraph {
    /// Builds a graph directly from an adjacency matrix; useful in tests.
    pub fn from_adjacency(space: StateSpace, adjacency: Vec<Vec<bool>>) -> Self {
        assert_eq!(adjacency.len(), space.len());
        assert!(adjacency.iter().all(|r| r.len() == space.len()));
        Self { space, adjacency }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to]
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }

    /// Splits the states into communication classes, orders the classes by
    /// accessibility, and identifies the maximal ones and the top class.
    pub fn decompose(&self) -> ClassDecomposition {
        let n = self.len();
        let succs: Vec<Vec<usize>> = self
            .adjacency
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &e)| e).map(|(j, _)| j).collect())
            .collect();
        let mut classes = tarjan_scc(&succs);
        for class in &mut classes {
            class.sort_unstable();
        }
        classes.sort_by_key(|class| class[0]);

        let mut class_of = vec![usize::MAX; n];
        for (id, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x] = id;
            }
        }

        // Reflexive-transitive closure of the condensation.
        let ncls = classes.len();
        let mut reach = vec![vec![false; ncls]; ncls];
        for (id, row) in reach.iter_mut().enumerate() {
            row[id] = true;
        }
        for x in 0..n {
            for &y in &succs[x] {
                reach[class_of[x]][class_of[y]] = true;
            }
        }
        for via in 0..ncls {
            for a in 0..ncls {
                if reach[a][via] {
                    let through = reach[via].clone();
                    for (b, r) in reach[a].iter_mut().enumerate() {
                        *r = *r || through[b];
                    }
                }
            }
        }

        let maximal: Vec<usize> = (0..ncls)
            .filter(|&c| (0..ncls).all(|d| d == c || !reach[c][d]))
            .collect();
        // A single maximal class is reachable from everywhere and hence is
        // the top class; with two or more maximal classes none exists.
        let top = if maximal.len() == 1 { Some(maximal[0]) } else { None };
        if let Some(t) = top {
            debug_assert!((0..ncls).all(|c| reach[c][t]));
        }

        ClassDecomposition { classes, class_of, reach, maximal, top }
    }

    /// Whether a directed path of exactly `k >= 1` edges leads from `x` to
    /// `y`, via boolean matrix powers.
    pub fn path_of_length_exists(&self, x: usize, y: usize, k: usize) -> bool {
        assert!(k >= 1, "path length must be at least 1");
        self.power(k)[x][y]
    }

    /// The boolean k-th power of the adjacency matrix (k >= 1).
    pub(crate) fn power(&self, k: usize) -> Vec<Vec<bool>> {
        let mut result: Option<Vec<Vec<bool>>> = None;
        let mut base = self.adjacency.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => bool_mat_mul(&r, &base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = bool_mat_mul(&base, &base);
            }
        }
        result.expect("k >= 1")
    }

    /// The period of a communication class: the gcd of all cycle lengths
    /// through any fixed vertex of the class. Returns 0 for a class without
    /// internal edges (a transient singleton), whose period is undefined.
    pub fn class_period(&self, class: &[usize]) -> usize {
        let member = |x: usize| class.contains(&x);
        let internal_edges: Vec<(usize, usize)> = class
            .iter()
            .flat_map(|&u| {
                self.adjacency[u]
                    .iter()
                    .enumerate()
                    .filter(move |(v, &e)| e && member(*v))
                    .map(move |(v, _)| (u, v))
            })
            .collect();
        if internal_edges.is_empty() {
            return 0;
        }

        // BFS levels inside the class; every internal edge contributes
        // |level(u) + 1 - level(v)| to the gcd.
        let root = class[0];
        let mut level = vec![usize::MAX; self.len()];
        level[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (v, &e) in self.adjacency[u].iter().enumerate() {
                if e && member(v) && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g: i64 = 0;
        for (u, v) in internal_edges {
            let d = level[u] as i64 + 1 - level[v] as i64;
            g = gcd(g, d.abs());
        }
        g as usize
    }
}

/// Partition of the states into communication classes together with the
/// accessibility partial order between them.
#[derive(Clone, Debug)]
pub struct ClassDecomposition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    reach: Vec<Vec<bool>>,
    maximal: Vec<usize>,
    top: Option<usize>,
}

impl ClassDecomposition {
    /// All communication classes, each sorted by state index, ordered by
    /// their smallest state.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// The class id a state belongs to.
    pub fn class_of(&self, state: usize) -> usize {
        self.class_of[state]
    }

    /// The accessibility partial order lifted to classes (reflexive).
    pub fn accessible(&self, from_class: usize, to_class: usize) -> bool {
        self.reach[from_class][to_class]
    }

    /// Ids of the maximal (undominated) classes.
    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_classes(&self) -> impl Iterator<Item = &[usize]> {
        self.maximal.iter().map(|&id| self.classes[id].as_slice())
    }

    /// The top class, present exactly when there is a single maximal class.
    pub fn top_class(&self) -> Option<&[usize]> {
        self.top.map(|id| self.classes[id].as_slice())
    }

    pub fn has_top_class(&self) -> bool {
        self.top.is_some()
    }
}

fn bool_mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    if b[k][j] {
                        out[i][j] = true;
                    }
                }
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn tarjan_scc(succs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        succs: &'a [Vec<usize>],
        index: usize,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }

    fn connect(v: usize, st: &mut State<'_>) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;

        for &w in &st.succs[v] {
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }

        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }

    let n = succs.len();
    let mut st = State {
        succs,
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}

/// Top class regularity: a top class exists and is aperiodic. Period 1 is
/// equivalent to the eventual all-`k` reachability that regularity demands;
/// [`verify_tcr_by_powers`] checks that characterisation constructively.
pub fn is_tcr(op: &UpperTransitionOperator) -> bool {
    let graph = build_upper_graph(op);
    let decomposition = graph.decompose();
    tcr_from_parts(&graph, &decomposition)
}

pub(crate) fn tcr_from_parts(graph: &AccessibilityGraph, decomposition: &ClassDecomposition) -> bool {
    match decomposition.top_class() {
        Some(top) => graph.class_period(top) == 1,
        None => false,
    }
}

/// Constructive regularity check: at the Wielandt bound `(n-1)^2 + 1` and the
/// step after it, every state must reach every top-class state by a path of
/// that exact length. Agrees with [`is_tcr`] on every graph.
pub fn verify_tcr_by_powers(op: &UpperTransitionOperator) -> bool {
    let graph = build_upper_graph(op);
    let decomposition = graph.decompose();
    let Some(top) = decomposition.top_class() else {
        return false;
    };
    let n = graph.len();
    let k_star = (n - 1) * (n - 1) + 1;
    let all_reach = |power: &[Vec<bool>]| {
        top.iter().all(|&x| (0..n).all(|from| power[from][x]))
    };
    all_reach(&graph.power(k_star)) && all_reach(&graph.power(k_star + 1))
}

/// Top class absorption, decided by the lower-reachability fixed point: grow
/// `B` from the top class by adding every state whose one-step lower
/// probability of entering `B` is positive; absorption holds iff `B` reaches
/// the whole space. The iteration stabilises within `n` sweeps because `B`
/// only grows.
pub fn is_tca(op: &UpperTransitionOperator) -> bool {
    let decomposition = build_upper_graph(op).decompose();
    tca_from_parts(op, &decomposition)
}

pub(crate) fn tca_from_parts(op: &UpperTransitionOperator, decomposition: &ClassDecomposition) -> bool {
    match decomposition.top_class() {
        Some(top) => absorption_basin(op, top).iter().all(|&b| b),
        None => false,
    }
}

/// The stable set of the lower-reachability iteration started from `seed`:
/// all states with a strictly positive lower probability of ever entering
/// `seed`. With the top class as seed, the complement is exactly the witness
/// set on which the upper expected time average of its indicator stays 1.
pub fn absorption_basin(op: &UpperTransitionOperator, seed: &[usize]) -> Vec<bool> {
    let n = op.len();
    let mut basin = vec![false; n];
    for &x in seed {
        basin[x] = true;
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            if !basin[x] && op.rows()[x].lower_indicator_positive(&basin) {
                basin[x] = true;
                changed = true;
            }
        }
        if !changed {
            return basin;
        }
    }
}
