// SPDX-License-Identifier: Apache-2.0
use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::{HomogeneousNfa, StartKind, StateId};

/// A weakly-connected component, as ascending state ids of the parent NFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub states: Vec<StateId>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Weakly-connected components, ordered by their smallest state id.
pub fn connected_components(nfa: &HomogeneousNfa) -> Vec<Component> {
    let n = nfa.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in nfa.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            // smaller root wins so roots are the minimum id of their set
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let mut slot = alloc::vec![usize::MAX; n];
    let mut out: Vec<Component> = Vec::new();
    for s in 0..n {
        let r = find(&mut parent, s);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Component { states: Vec::new() });
        }
        out[slot[r]].states.push(s);
    }
    out
}

/// BFS order over one component: starts (ascending id) seed the queue,
/// successors are visited in ascending id, unreached states are appended in
/// id order.
pub fn bfs_order(nfa: &HomogeneousNfa, cc: &Component) -> Vec<StateId> {
    let mut seen = alloc::vec![false; nfa.len()];
    let mut order = Vec::with_capacity(cc.len());
    let mut queue = VecDeque::new();
    for &s in &cc.states {
        if nfa.state(s).start != StartKind::None {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for &d in nfa.successors(s) {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    order.extend(cc.states.iter().copied().filter(|&s| !seen[s]));
    order
}
