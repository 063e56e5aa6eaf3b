//! Minimum distance of a fixed channel by uniform-cost search over the error
//! trellis.
//!
//! Nodes are the last `L - 1` error symbols. An event leaves the all-zero
//! state with a positive symbol (negation symmetry) and closes when the
//! memory returns to all zeros; the `L - 1` trailing zero symbols that
//! bring it back account for the tail energy. Every branch adds the squared
//! noiseless difference output, so costs are nondecreasing along a path and
//! the first closed event popped is the minimum.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use crate::channel::energy;
use crate::error::{input, Result};
use crate::events::{canonicalize, ErrorEvent};

/// Default ceiling: the matched-filter bound plus slack.
pub const DEFAULT_CEILING: f64 = 1.0 + 1e-9;
const ENERGY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct DistanceResult {
    /// Minimum squared distance; `None` when the ceiling cut the search off.
    pub d2_min: Option<f64>,
    pub achieving_event: Option<ErrorEvent>,
    pub nodes_expanded: u64,
    pub cap_hit: bool,
}

#[derive(Clone, Copy, PartialEq)]
struct Cost(f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Node {
    /// Memory `(ε_{k-L+2}, ..., ε_k)` encoded in base `2M - 1`.
    State(u64),
    Closed,
}

struct Trellis<'a> {
    taps: &'a [f64],
    /// `M - 1`.
    max_symbol: i32,
    memory: usize,
}

impl Trellis<'_> {
    fn base(&self) -> u64 {
        (2 * self.max_symbol + 1) as u64
    }

    /// Memory symbols, oldest first.
    fn decode(&self, mut code: u64) -> Vec<i32> {
        let mut s = vec![0; self.memory];
        for slot in s.iter_mut().rev() {
            *slot = (code % self.base()) as i32 - self.max_symbol;
            code /= self.base();
        }
        s
    }

    fn encode(&self, s: &[i32]) -> u64 {
        s.iter().fold(0, |acc, &x| {
            acc * self.base() + (x + self.max_symbol) as u64
        })
    }

    /// Append `e` to `memory`: returns the branch cost and the next node.
    fn step(&self, memory: &[i32], e: i32) -> (f64, Node) {
        // y_k = f_0 ε_k + Σ_{i≥1} f_i ε_{k-i}; memory[memory.len() - i] is ε_{k-i}.
        let mut y = self.taps[0] * e as f64;
        for i in 1..self.taps.len() {
            y += self.taps[i] * memory[self.memory - i] as f64;
        }
        let mut next = memory.to_vec();
        if self.memory > 0 {
            next.remove(0);
            next.push(e);
        }
        let node = if next.iter().all(|&x| x == 0) {
            Node::Closed
        } else {
            Node::State(self.encode(&next))
        };
        (y * y, node)
    }
}

/// Minimum squared distance of `channel` over all error events of an
/// M-PAM alphabet, searching no further than `d2_ceiling`.
pub fn min_distance(channel: &[f64], levels: u32, d2_ceiling: f64) -> Result<DistanceResult> {
    if channel.is_empty() {
        return input("channel needs at least one tap");
    }
    let e = energy(channel);
    if (e - 1.0).abs() > ENERGY_TOLERANCE {
        return input(format!("channel energy {e} is not normalized"));
    }
    if levels < 2 {
        return input("alphabet needs at least 2 levels");
    }
    if !(d2_ceiling > 0.0) {
        return input("distance ceiling must be positive");
    }

    let trellis = Trellis {
        taps: channel,
        max_symbol: levels as i32 - 1,
        memory: channel.len() - 1,
    };
    let alphabet: Vec<i32> = (-trellis.max_symbol..=trellis.max_symbol).collect();

    let mut best: HashMap<Node, f64> = HashMap::new();
    // Predecessor node and the symbol taken from it; `None` marks the start.
    let mut parent: HashMap<Node, (Option<Node>, i32)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;

    let zero_memory = vec![0; trellis.memory];
    for e in 1..=trellis.max_symbol {
        let (cost, node) = trellis.step(&zero_memory, e);
        if cost <= d2_ceiling && best.get(&node).is_none_or(|&c| cost < c) {
            best.insert(node, cost);
            parent.insert(node, (None, e));
            heap.push(Reverse((Cost(cost), order, node)));
            order += 1;
        }
    }

    let mut nodes_expanded = 0u64;
    let mut last_popped = 0.0f64;
    let mut done: HashMap<Node, ()> = HashMap::new();
    while let Some(Reverse((Cost(cost), _, node))) = heap.pop() {
        if done.contains_key(&node) || best.get(&node).is_some_and(|&c| c < cost) {
            continue;
        }
        debug_assert!(cost >= last_popped, "frontier popped out of order");
        last_popped = cost;
        done.insert(node, ());
        nodes_expanded += 1;

        let code = match node {
            Node::Closed => {
                let event = trace(&parent, node);
                return Ok(DistanceResult {
                    d2_min: Some(cost),
                    achieving_event: Some(canonicalize(&event)?),
                    nodes_expanded,
                    cap_hit: false,
                });
            }
            Node::State(code) => code,
        };
        let memory = trellis.decode(code);
        for &e in &alphabet {
            let (inc, next) = trellis.step(&memory, e);
            let total = cost + inc;
            if total > d2_ceiling || done.contains_key(&next) {
                continue;
            }
            if best.get(&next).is_none_or(|&c| total < c) {
                best.insert(next, total);
                parent.insert(next, (Some(node), e));
                heap.push(Reverse((Cost(total), order, next)));
                order += 1;
            }
        }
    }

    Ok(DistanceResult {
        d2_min: None,
        achieving_event: None,
        nodes_expanded,
        cap_hit: true,
    })
}

/// Symbols along the path to `node`, with the closing zeros stripped.
fn trace(parent: &HashMap<Node, (Option<Node>, i32)>, node: Node) -> Vec<i32> {
    let mut symbols = Vec::new();
    let mut cur = Some(node);
    while let Some(n) = cur {
        let (prev, e) = parent[&n];
        symbols.push(e);
        cur = prev;
    }
    symbols.reverse();
    while symbols.last() == Some(&0) {
        symbols.pop();
    }
    symbols
}
