use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use super::SoficError;
use crate::betamap::interval::{intersect, normalize};
use crate::betamap::{BetaTransform, IntervalQB};
use crate::numfield::{PisotField, QBeta};

/// Deterministic automaton of the finite factors of the T-expansions.
/// A state is the follower interval set T^n(C_u) of the words u leading to
/// it; reading a maps I to β(I ∩ X_a) − a.
#[derive(Clone, Debug)]
pub struct ShiftAutomaton {
    pub n_digits: usize,
    /// one representative interval set per (minimized) state
    pub states: Vec<Vec<IntervalQB>>,
    /// trans[q][a]
    pub trans: Vec<Vec<Option<usize>>>,
    pub initial: usize,
}

type Key = Vec<(QBeta, QBeta)>;

fn key(s: &[IntervalQB]) -> Key {
    s.iter().map(|iv| (iv.lo.clone(), iv.hi.clone())).collect()
}

pub(crate) fn follow(f: &PisotField, parts: &[Vec<IntervalQB>], digits: &[QBeta], s: &[IntervalQB], a: usize) -> Vec<IntervalQB> {
    let cut = intersect(f, s, &parts[a]);
    normalize(f, cut.iter().map(|iv| iv.affine(f, &digits[a])).collect())
}

pub fn build_automaton(t: &BetaTransform, max_states: usize) -> Result<ShiftAutomaton, SoficError> {
    let f = t.field();
    let parts: Vec<Vec<IntervalQB>> = t.parts().iter().map(|p| normalize(f, p.clone())).collect();
    let n = t.digits().len();
    let start = t.components().to_vec();
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
    index.insert(key(&start), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let mut row = vec![None; n];
        for (a, slot) in row.iter_mut().enumerate() {
            let next = follow(f, &parts, t.digits(), &states[q], a);
            if next.is_empty() {
                continue;
            }
            let k = key(&next);
            let id = match index.get(&k) {
                Some(&id) => id,
                None => {
                    if states.len() >= max_states {
                        return Err(SoficError::NotSofic(format!("more than {} follower sets", max_states)));
                    }
                    let id = states.len();
                    index.insert(k, id);
                    states.push(next);
                    queue.push_back(id);
                    id
                }
            };
            *slot = Some(id);
        }
        if trans.len() <= q {
            trans.resize(q + 1, Vec::new());
        }
        trans[q] = row;
    }
    Ok(minimize(ShiftAutomaton { n_digits: n, states, trans, initial: 0 }))
}

/// Moore partition refinement; every state is accepting.
fn minimize(a: ShiftAutomaton) -> ShiftAutomaton {
    let n = a.states.len();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for q in 0..n {
            let sig = (class[q], a.trans[q].iter().map(|t| t.map(|r| class[r])).collect());
            let l = ids.len();
            next[q] = *ids.entry(sig).or_insert(l);
        }
        let c = ids.len();
        class = next;
        if c == count {
            break;
        }
        count = c;
    }
    let mut rep = vec![usize::MAX; count];
    for q in 0..n {
        if rep[class[q]] == usize::MAX {
            rep[class[q]] = q;
        }
    }
    ShiftAutomaton {
        n_digits: a.n_digits,
        states: rep.iter().map(|&q| a.states[q].clone()).collect(),
        trans: rep.iter().map(|&q| a.trans[q].iter().map(|t| t.map(|r| class[r])).collect()).collect(),
        initial: class[a.initial],
    }
}

impl ShiftAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn run(&self, from: usize, w: &[usize]) -> Option<usize> {
        w.iter().try_fold(from, |q, &a| self.trans[q][a])
    }

    /// w is a factor of some T-expansion.
    pub fn accepts(&self, w: &[usize]) -> bool {
        self.run(self.initial, w).is_some()
    }

    /// Words of the language up to length n.
    fn words(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![(vec![], self.initial)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, q) in frontier {
                for a in 0..self.n_digits {
                    if let Some(r) = self.trans[q][a] {
                        let mut v: Vec<usize> = w.clone();
                        v.push(a);
                        out.push(v.clone());
                        next.push((v, r));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Words aub outside the language with au and ub inside, up to length n.
    pub fn minimal_forbidden_words(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for u in self.words(n.saturating_sub(1)) {
            for b in 0..self.n_digits {
                let mut w = u.clone();
                w.push(b);
                if self.accepts(&w) {
                    continue;
                }
                if w.len() == 1 || self.accepts(&w[1..]) {
                    out.push(w);
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Smallest m such that every word of length m leads all states where it
    /// is defined to one state; None if no such m exists (not of finite type).
    pub fn sft_memory(&self) -> Option<usize> {
        let mut memo: HashMap<Vec<usize>, Option<usize>> = HashMap::new();
        let all: Vec<usize> = (0..self.len()).collect();
        self.sync_depth(all, &mut memo)
    }

    fn sync_depth(&self, s: Vec<usize>, memo: &mut HashMap<Vec<usize>, Option<usize>>) -> Option<usize> {
        if s.len() <= 1 {
            return Some(0);
        }
        if let Some(v) = memo.get(&s) {
            // None while on the stack: a cycle of unsynchronized sets
            return *v;
        }
        memo.insert(s.clone(), None);
        let mut best = 0;
        for a in 0..self.n_digits {
            let mut next: Vec<usize> = s.iter().filter_map(|&q| self.trans[q][a]).collect();
            next.sort_unstable();
            next.dedup();
            best = best.max(self.sync_depth(next, memo)? + 1);
        }
        memo.insert(s, Some(best));
        Some(best)
    }

    /// Complete minimal forbidden word list when the shift is of finite type.
    pub fn forbidden_words(&self) -> Option<Vec<Vec<usize>>> {
        self.sft_memory().map(|m| self.minimal_forbidden_words(m + 1))
    }

    pub fn to_json(&self, t: &BetaTransform) -> Value {
        let digits: Vec<String> = t.digits().iter().map(|d| d.to_string()).collect();
        json!({
            "initial": self.initial,
            "states": self.states.iter().map(|s| s.iter().map(|iv| json!([iv.lo.to_string(), iv.hi.to_string()])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "transitions": self.trans.iter().enumerate().flat_map(|(q, row)| {
                let digits = &digits;
                row.iter().enumerate().filter_map(move |(a, r)| r.map(|r| json!({"from": q, "to": r, "digit": digits[a]})))
            }).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self, t: &BetaTransform) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n");
        s.push_str(&format!("  init [shape=point];\n  init -> q{};\n", self.initial));
        for (q, row) in self.trans.iter().enumerate() {
            for (a, r) in row.iter().enumerate() {
                if let Some(r) = r {
                    s.push_str(&format!("  q{} -> q{} [label=\"{}\"];\n", q, r, t.digits()[a]));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// The cylinder {x ∈ X : b_1…b_n(x) = w}, computed backwards from X.
pub fn cylinder(t: &BetaTransform, w: &[usize]) -> Vec<IntervalQB> {
    let f = t.field();
    let mut s = t.components().to_vec();
    for &a in w.iter().rev() {
        let pre: Vec<IntervalQB> = s
            .iter()
            .map(|iv| IntervalQB::new(f.div_beta(&(&iv.lo + &t.digits()[a])), f.div_beta(&(&iv.hi + &t.digits()[a]))))
            .collect();
        s = intersect(f, &normalize(f, t.parts()[a].clone()), &normalize(f, pre));
    }
    s
}
