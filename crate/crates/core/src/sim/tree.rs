//! Search-tree nodes, the fractional bound, and the open-node pool shared by
//! the sequential solver and the parallel simulator.

use std::collections::{BTreeMap, BinaryHeap};

use ordered_float::OrderedFloat;

use super::{KnapsackInstance, SearchOrder};

/// Relative slack below which a node's bound cannot beat the incumbent.
const PRUNE_REL: f64 = 1e-9;

pub(crate) fn cannot_improve(bound: f64, incumbent: f64) -> bool {
    bound <= incumbent + PRUNE_REL * incumbent.abs().max(1.0)
}

/// splitmix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Items sorted by non-increasing value/weight ratio.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    /// Original item index for each sorted position.
    pub order: Vec<usize>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub capacity: f64,
}

impl Prepared {
    pub fn new(inst: &KnapsackInstance) -> Self {
        let mut order: Vec<usize> = (0..inst.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = inst.values[a] / inst.weights[a];
            let rb = inst.values[b] / inst.weights[b];
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        Self {
            values: order.iter().map(|&i| inst.values[i]).collect(),
            weights: order.iter().map(|&i| inst.weights[i]).collect(),
            order,
            capacity: inst.capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Original item indices of a sorted-position selection.
    pub fn original_items(&self, taken: &[bool]) -> Vec<usize> {
        let mut items: Vec<usize> = taken
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(pos, _)| self.order[pos])
            .collect();
        items.sort_unstable();
        items
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Fix {
    Free,
    In,
    Out,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    /// Structural id: a seeded hash of the branching path.
    pub key: u64,
    pub depth: u32,
    /// Upper bound known when the node was created (the parent's bound).
    pub bound: f64,
    pub fixed: Vec<Fix>,
}

impl Node {
    pub fn root(n: usize, tie_break_seed: u64) -> Self {
        Self {
            key: mix64(tie_break_seed),
            depth: 0,
            bound: f64::INFINITY,
            fixed: vec![Fix::Free; n],
        }
    }
}

/// Result of solving a node's bounding problem.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    /// Fractional (Dantzig) bound, or `-inf` if the fixings are infeasible.
    pub bound: f64,
    /// Items examined, counted as bounding iterations (at least 1).
    pub iterations: u64,
    /// Greedy completion of the fixings: a feasible solution.
    pub heuristic: Option<(f64, Vec<bool>)>,
    /// Children to explore when the bound is not attained by the heuristic.
    pub children: Vec<Node>,
}

/// Solves the node's relaxation and, unless the node cannot improve on
/// `incumbent`, branches on the critical item.
pub(crate) fn evaluate(prep: &Prepared, node: &Node, incumbent: f64) -> Evaluation {
    let n = prep.len();
    let mut taken = vec![false; n];
    let mut value = 0.0;
    let mut weight = 0.0;
    for (pos, f) in node.fixed.iter().enumerate() {
        if *f == Fix::In {
            taken[pos] = true;
            value += prep.values[pos];
            weight += prep.weights[pos];
        }
    }
    if weight > prep.capacity {
        return Evaluation {
            bound: f64::NEG_INFINITY,
            iterations: 1,
            heuristic: None,
            children: Vec::new(),
        };
    }

    let mut iterations = 0u64;
    let mut remaining = prep.capacity - weight;
    let mut bound = value;
    let mut critical = None;
    let mut pos = 0;
    while pos < n {
        if node.fixed[pos] == Fix::Free {
            iterations += 1;
            if prep.weights[pos] <= remaining {
                remaining -= prep.weights[pos];
                value += prep.values[pos];
                taken[pos] = true;
            } else {
                critical = Some(pos);
                bound = value + prep.values[pos] * remaining / prep.weights[pos];
                pos += 1;
                break;
            }
        }
        pos += 1;
    }
    let Some(critical) = critical else {
        // Every free item fits: the relaxation is integral.
        return Evaluation {
            bound: value.min(node.bound),
            iterations: iterations.max(1),
            heuristic: Some((value, taken)),
            children: Vec::new(),
        };
    };
    // Greedy fill past the critical item for the heuristic solution.
    let mut heur_value = value;
    while pos < n {
        if node.fixed[pos] == Fix::Free {
            iterations += 1;
            if prep.weights[pos] <= remaining {
                remaining -= prep.weights[pos];
                heur_value += prep.values[pos];
                taken[pos] = true;
            }
        }
        pos += 1;
    }
    let bound = bound.min(node.bound);
    let best_known = incumbent.max(heur_value);
    let mut children = Vec::new();
    if !cannot_improve(bound, best_known) {
        for (branch, fix) in [(1u64, Fix::In), (2u64, Fix::Out)] {
            if fix == Fix::In && weight + prep.weights[critical] > prep.capacity {
                continue;
            }
            let mut fixed = node.fixed.clone();
            fixed[critical] = fix;
            children.push(Node {
                key: mix64(node.key ^ branch.wrapping_mul(0xA24B_AED4_963E_E407)),
                depth: node.depth + 1,
                bound,
                fixed,
            });
        }
    }
    Evaluation {
        bound,
        iterations: iterations.max(1),
        heuristic: Some((heur_value, taken)),
        children,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Priority(OrderedFloat<f64>, OrderedFloat<f64>, u64);

impl Priority {
    pub fn of(order: SearchOrder, node: &Node) -> Self {
        match order {
            SearchOrder::BestFirst => Priority(OrderedFloat(node.bound), OrderedFloat(0.0), node.key),
            SearchOrder::DepthFirst => Priority(
                OrderedFloat(f64::from(node.depth)),
                OrderedFloat(node.bound),
                node.key,
            ),
        }
    }

    /// First-in, first-out order over sequence numbers.
    pub fn fifo(seq: u64) -> Self {
        Priority(OrderedFloat(0.0), OrderedFloat(0.0), u64::MAX - seq)
    }
}

struct Entry<T> {
    priority: Priority,
    bound: f64,
    item: T,
}

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<T> Eq for Entry<T> {}
impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.priority.cmp(&other.priority)
    }
}

/// Multiset of bounds, for the maximum over open and in-flight work.
#[derive(Debug, Default)]
pub(crate) struct BoundSet(BTreeMap<OrderedFloat<f64>, usize>);

impl BoundSet {
    pub fn insert(&mut self, b: f64) {
        *self.0.entry(OrderedFloat(b)).or_default() += 1;
    }

    pub fn remove(&mut self, b: f64) {
        let key = OrderedFloat(b);
        let count = self.0.get_mut(&key).expect("bound present in set");
        *count -= 1;
        if *count == 0 {
            self.0.remove(&key);
        }
    }

    pub fn max(&self) -> Option<f64> {
        self.0.keys().next_back().map(|k| k.0)
    }
}

/// Priority queue of open work items.
pub(crate) struct Pool<T> {
    heap: BinaryHeap<Entry<T>>,
}

impl<T> Pool<T> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
        }
    }

    pub fn push(&mut self, priority: Priority, bound: f64, item: T) {
        self.heap.push(Entry {
            priority,
            bound,
            item,
        });
    }

    pub fn pop(&mut self) -> Option<(f64, T)> {
        self.heap.pop().map(|e| (e.bound, e.item))
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
