//! Generalized Büchi automata, degeneralization, and emptiness search.
//!
//! The two automaton constructions (from a formula, from a clause set) both
//! produce a [`Gba`]; everything after that — counter-based degeneralization,
//! nested depth-first search for an accepting cycle, breadth-first shortening
//! of the witness lasso — is shared and lives here.

use super::{EngineError, Limits};

/// A generalized Büchi automaton. States are dense indices; `labels` carries
/// an arbitrary payload per state (a valuation, a model state, ...).
#[derive(Debug)]
pub(crate) struct Gba<L> {
    pub labels: Vec<L>,
    /// Sorted successor lists.
    pub succs: Vec<Vec<usize>>,
    /// Sorted initial states.
    pub initial: Vec<usize>,
    /// `acceptance[i][q]`: state `q` belongs to acceptance set `i`. A run is
    /// accepting when it visits every set infinitely often; with no sets at
    /// all, every run is accepting.
    pub acceptance: Vec<Vec<bool>>,
}

/// A plain Büchi automaton (single acceptance set).
#[derive(Debug)]
pub(crate) struct Buchi<L> {
    pub labels: Vec<L>,
    pub succs: Vec<Vec<usize>>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
}

/// Counter construction: state `(q, i)` waits for acceptance set `i`; seeing
/// a state of set `i` advances the counter, and completing a full round is
/// the single remaining acceptance condition.
pub(crate) fn degeneralize<L: Clone>(g: &Gba<L>, limits: &Limits) -> Result<Buchi<L>, EngineError> {
    let n = g.labels.len();
    let k = g.acceptance.len();
    if k == 0 {
        return Ok(Buchi {
            labels: g.labels.clone(),
            succs: g.succs.clone(),
            initial: g.initial.clone(),
            accepting: vec![true; n],
        });
    }
    let total = n.saturating_mul(k);
    if total > limits.max_nodes {
        return Err(EngineError::ResourceLimit {
            nodes: total,
            limit: limits.max_nodes,
        });
    }
    let id = |q: usize, layer: usize| q * k + layer;
    let mut labels = Vec::with_capacity(total);
    let mut succs = Vec::with_capacity(total);
    let mut accepting = vec![false; total];
    for q in 0..n {
        for layer in 0..k {
            labels.push(g.labels[q].clone());
            let advanced = if g.acceptance[layer][q] {
                (layer + 1) % k
            } else {
                layer
            };
            succs.push(g.succs[q].iter().map(|&t| id(t, advanced)).collect());
            if layer == 0 && g.acceptance[0][q] {
                accepting[id(q, 0)] = true;
            }
        }
    }
    Ok(Buchi {
        labels,
        succs,
        initial: g.initial.iter().map(|&q| id(q, 0)).collect(),
        accepting,
    })
}

const WHITE: u8 = 0;
const CYAN: u8 = 1; // on the outer DFS stack
const BLUE: u8 = 2; // outer DFS finished

/// Nested depth-first search for an accepting cycle. On success the witness
/// is re-shortened: breadth-first shortest prefix to the accepting state the
/// search found, then shortest cycle back through it. Returns
/// `(prefix states, cycle states)`; the cycle is nonempty and closes on its
/// first state.
pub(crate) fn find_accepting_lasso<L>(b: &Buchi<L>) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = b.labels.len();
    let mut color = vec![WHITE; n];
    let mut red = vec![false; n];
    let mut seed = None;

    'roots: for &root in &b.initial {
        if color[root] != WHITE {
            continue;
        }
        color[root] = CYAN;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (q, ref mut next_edge)) = stack.last_mut() {
            if *next_edge < b.succs[q].len() {
                let t = b.succs[q][*next_edge];
                *next_edge += 1;
                if color[t] == WHITE {
                    color[t] = CYAN;
                    stack.push((t, 0));
                }
            } else {
                // post-order: hunt for a cycle through accepting q while the
                // path to q is still on the stack
                if b.accepting[q] && red_search(b, q, &color, &mut red) {
                    seed = Some(q);
                    break 'roots;
                }
                color[q] = BLUE;
                stack.pop();
            }
        }
    }

    let seed = seed?;
    let prefix_to_seed = shortest_path(b, &b.initial, seed).expect("seed is reachable");
    let cycle = shortest_cycle(b, seed).expect("seed lies on a cycle");
    let mut prefix = prefix_to_seed;
    prefix.pop(); // the seed itself opens the cycle
    Some((prefix, cycle))
}

/// Inner search: can `seed` reach a state on the outer stack (cyan)? Any such
/// state closes a cycle back through `seed`.
fn red_search<L>(b: &Buchi<L>, seed: usize, color: &[u8], red: &mut [bool]) -> bool {
    let mut stack = vec![seed];
    while let Some(q) = stack.pop() {
        for &t in &b.succs[q] {
            if color[t] == CYAN {
                return true;
            }
            if !red[t] {
                red[t] = true;
                stack.push(t);
            }
        }
    }
    false
}

/// Shortest path from any source to `target`, inclusive on both ends.
fn shortest_path<L>(b: &Buchi<L>, sources: &[usize], target: usize) -> Option<Vec<usize>> {
    let n = b.labels.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(q) = queue.pop_front() {
        if q == target {
            let mut path = vec![q];
            let mut cur = q;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &t in &b.succs[q] {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(q);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Shortest nonempty cycle through `anchor`, returned as the state sequence
/// starting at `anchor`; the last state has an edge back to `anchor`.
fn shortest_cycle<L>(b: &Buchi<L>, anchor: usize) -> Option<Vec<usize>> {
    let n = b.labels.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[anchor] = true;
    queue.push_back(anchor);
    while let Some(q) = queue.pop_front() {
        for &t in &b.succs[q] {
            if t == anchor {
                let mut path = vec![q];
                let mut cur = q;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse(); // anchor .. q
                return Some(path);
            }
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(q);
                queue.push_back(t);
            }
        }
    }
    None
}
