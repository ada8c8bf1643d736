//! Top-nets: frames containing a truth node ⊤ that every extension must label 1,
//! under four readings of what an attack on ⊤ means.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    complete_labellings_with, enumerate_complete_labellings, scc_levels, ArgFrame, Assignment, Labelling,
};
use crate::solve::{Dom, Graph, FULL};
use crate::tri::Tri;
use crate::TOP;

/// A frame with a designated truth node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopNet {
    frame: ArgFrame,
    top: String,
}

impl TopNet {
    pub fn new(frame: ArgFrame, top: impl Into<String>) -> Result<TopNet> {
        let top = top.into();
        if !frame.contains(&top) {
            return Err(Error::UnknownNode(top));
        }
        if frame.has_attack(&top, &top) {
            return Err(Error::Construction(format!("`{top}` attacks itself")));
        }
        Ok(TopNet { frame, top })
    }

    pub fn frame(&self) -> &ArgFrame {
        &self.frame
    }

    pub fn top(&self) -> &str {
        &self.top
    }
}

/// What to do with a candidate labelling in which some attacker of ⊤ is in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    /// Discard such labellings (strict) instead of also disconnecting the
    /// in-attackers (lenient).
    pub give_up_on_in_attacker: bool,
}

impl Policy {
    pub const STRICT: Policy = Policy { give_up_on_in_attacker: true };
    pub const LENIENT: Policy = Policy { give_up_on_in_attacker: false };
}

/// Legitimate labellings with ⊤ in.
pub fn option_i_extensions(net: &TopNet) -> Vec<Labelling> {
    complete_labellings_with(&net.frame, &[(net.top.as_str(), Tri::One)]).expect("top is a node")
}

/// ⊤ counter-attacks each of its attackers; labellings with ⊤ in.
pub fn option_ii_extensions(net: &TopNet) -> Vec<Labelling> {
    let f = &net.frame;
    let back: Vec<(String, String)> =
        f.attackers_of(&net.top).into_iter().map(|z| (net.top.clone(), z.to_string())).collect();
    let attacks = f.attacks().map(|(a, b)| (a.to_string(), b.to_string())).chain(back);
    let g = ArgFrame::new(f.nodes().iter().cloned(), attacks).expect("same nodes");
    complete_labellings_with(&g, &[(net.top.as_str(), Tri::One)]).expect("top is a node")
}

/// The frame obtained by removing ⊤ and letting a fresh `STAR` attack every
/// node ⊤ attacked or was attacked by.
pub fn star_frame(net: &TopNet) -> ArgFrame {
    let f = &net.frame;
    let top = net.top.as_str();
    let touched: BTreeSet<&str> = f
        .attacks()
        .filter_map(|(a, b)| match (a == top, b == top) {
            (true, false) => Some(b),
            (false, true) => Some(a),
            _ => None,
        })
        .collect();
    let star = fresh_name(f, "STAR");
    let nodes = f.nodes().iter().filter(|n| *n != top).cloned().chain([star.clone()]);
    let attacks = f
        .attacks()
        .filter(|&(a, b)| a != top && b != top)
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .chain(touched.into_iter().map(|y| (star.clone(), y.to_string())));
    ArgFrame::new(nodes, attacks).expect("endpoints are nodes")
}

/// Extensions of the star frame, read back with ⊤ in place of the star.
pub fn option_iii_extensions(net: &TopNet) -> Vec<Labelling> {
    let star_net = star_frame(net);
    let star = star_net.nodes().iter().find(|n| !net.frame.contains(n)).cloned().expect("fresh star");
    let mut out: Vec<Labelling> = enumerate_complete_labellings(&star_net)
        .into_iter()
        .map(|lam| {
            let mut l = lam.restrict(|n| n != star);
            l.insert(net.top.clone(), Tri::One);
            l
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Maximal non-toxic extensions.
pub fn option_iv_extensions(net: &TopNet, policy: Policy) -> Vec<Labelling> {
    let keys: BTreeSet<String> = net.frame.nodes().iter().cloned().collect();
    option_iv_projected(net, policy, &keys).expect("keys are nodes")
}

/// Option-iv extensions projected onto `keys`, each distinct projection once.
pub fn option_iv_projected(net: &TopNet, policy: Policy, keys: &BTreeSet<String>) -> Result<Vec<Assignment>> {
    option_iv_projected_with(net, policy, keys, &[])
}

/// Option iv over the labellings that agree with `fixed`: the fixed values
/// are part of the candidate, so toxicity is judged among those labellings only.
pub fn option_iv_projected_with(
    net: &TopNet,
    policy: Policy,
    keys: &BTreeSet<String>,
    fixed: &[(&str, Tri)],
) -> Result<Vec<Assignment>> {
    let f = &net.frame;
    let key_idx: Vec<usize> = keys.iter().map(|k| f.idx(k)).collect::<Result<_>>()?;
    let top = f.idx(&net.top)?;
    let mut start = vec![FULL; f.len()];
    for &(n, v) in fixed {
        start[f.idx(n)?] &= v.bit();
    }
    let levels = scc_levels(f);
    let n_level: Vec<usize> = f.nodes().iter().map(|x| levels[x].n).collect();
    let rows = non_toxic(&f.graph(), top, policy, &key_idx, &n_level, &start);
    Ok(rows
        .into_iter()
        .map(|vals| {
            key_idx
                .iter()
                .zip(vals)
                .map(|(&i, v)| (f.name(i).to_string(), if i == top { Tri::One } else { v }))
                .collect()
        })
        .collect())
}

/// Priority of a disconnected attacker set: fewer members first, then a
/// larger maximal `n` level. Smaller compares better.
type Profile = (usize, Reverse<usize>);

/// Core of option iv over an index graph. Returns the distinct projections
/// onto `keys` of the winning labellings, in canonical order.
pub(crate) fn non_toxic(
    g: &Graph,
    top: usize,
    policy: Policy,
    keys: &[usize],
    n_level: &[usize],
    start: &[Dom],
) -> BTreeSet<Vec<Tri>> {
    let mut out = BTreeSet::new();

    // Steps 1-3: ⊤ renamed τ; labellings with τ in, if any.
    let mut dom = start.to_vec();
    dom[top] &= Tri::One.bit();
    let _ = g.project(&dom, keys, &mut |w| {
        out.insert(keys.iter().map(|&i| w[i]).collect());
        ControlFlow::Continue(())
    });
    if !out.is_empty() {
        return out;
    }

    // Step 4: a fresh ∞ takes over the attacks emanating from ⊤.
    let mut inf_g = g.clone();
    let targets = g.targets[top].clone();
    if !targets.is_empty() {
        let inf = inf_g.add_node();
        for t in targets {
            inf_g.remove_edge(top, t);
            inf_g.add_edge(inf, t);
        }
    }
    let t0: Vec<usize> = g.attackers[top].clone();
    let mut dom = start.to_vec();
    dom.resize(inf_g.len(), FULL);
    if policy.give_up_on_in_attacker {
        for &x in &t0 {
            dom[x] &= !Tri::One.bit();
        }
    }
    if !inf_g.propagate(&mut dom, 0..inf_g.len()) {
        return out;
    }

    // Step 5: the winning profile over all candidates.
    let Some(best) = best_profile(&inf_g, &dom, &t0, n_level, None) else {
        return out;
    };
    // Every key projection that admits a candidate with the winning profile.
    let _ = descend_keys(&inf_g, &mut dom.clone(), keys, &mut |fixed| {
        if let Some(w) = best_profile_witness(&inf_g, fixed, &t0, n_level, best) {
            out.insert(keys.iter().map(|&i| w[i]).collect());
        }
        ControlFlow::Continue(())
    });
    out
}

fn profile_of(vals: &[Dom], t0: &[usize], n_level: &[usize]) -> Profile {
    let d: Vec<usize> = t0.iter().copied().filter(|&x| vals[x] != Tri::Zero.bit()).collect();
    (d.len(), Reverse(d.iter().map(|&x| n_level[x]).max().unwrap_or(0)))
}

/// Lower bound on the number of attackers of ⊤ that cannot be out.
fn forced_count(dom: &[Dom], t0: &[usize]) -> usize {
    t0.iter().filter(|&&x| dom[x] & Tri::Zero.bit() == 0).count()
}

/// The best profile reachable from `dom`, optionally stopping at `target`.
fn best_profile(g: &Graph, dom: &[Dom], t0: &[usize], n_level: &[usize], target: Option<Profile>) -> Option<Profile> {
    let mut best: Option<(Profile, Vec<Tri>)> = None;
    let _ = branch_and_bound(g, &mut dom.to_vec(), t0, n_level, &mut best, target);
    best.map(|(p, _)| p)
}

/// A full labelling from `dom` with profile `target`, if one exists.
fn best_profile_witness(g: &Graph, dom: &[Dom], t0: &[usize], n_level: &[usize], target: Profile) -> Option<Vec<Tri>> {
    let mut best: Option<(Profile, Vec<Tri>)> = None;
    let _ = branch_and_bound(g, &mut dom.to_vec(), t0, n_level, &mut best, Some(target));
    best.filter(|(p, _)| *p == target).map(|(_, w)| w)
}

fn branch_and_bound(
    g: &Graph,
    dom: &mut [Dom],
    t0: &[usize],
    n_level: &[usize],
    best: &mut Option<(Profile, Vec<Tri>)>,
    target: Option<Profile>,
) -> ControlFlow<()> {
    let lb = forced_count(dom, t0);
    let bound = match (best.as_ref(), target) {
        (Some((p, _)), _) => Some(p.0),
        (None, Some(t)) => Some(t.0),
        (None, None) => None,
    };
    if bound.is_some_and(|b| lb > b) {
        return ControlFlow::Continue(());
    }
    let next = t0.iter().copied().find(|&x| dom[x].count_ones() > 1);
    let Some(x) = next else {
        let p = profile_of(dom, t0, n_level);
        let improves = match best.as_ref() {
            Some((b, _)) => p < *b,
            None => target.is_none_or(|t| p >= t),
        };
        if improves {
            if let Some(w) = g.find(dom) {
                *best = Some((p, w));
                if target == Some(p) {
                    return ControlFlow::Break(());
                }
            }
        }
        return ControlFlow::Continue(());
    };
    for v in Tri::ALL {
        if dom[x] & v.bit() == 0 {
            continue;
        }
        let mut next = dom.to_vec();
        if g.assign(&mut next, x, v.bit()) {
            branch_and_bound(g, &mut next, t0, n_level, best, target)?;
        }
    }
    ControlFlow::Continue(())
}

/// Depth-first enumeration of every propagated assignment of `keys`.
fn descend_keys(
    g: &Graph,
    dom: &mut [Dom],
    keys: &[usize],
    visit: &mut dyn FnMut(&[Dom]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some(&i) = keys.iter().find(|&&i| dom[i].count_ones() > 1) else {
        return visit(dom);
    };
    for v in Tri::ALL {
        if dom[i] & v.bit() == 0 {
            continue;
        }
        let mut next = dom.to_vec();
        if g.assign(&mut next, i, v.bit()) {
            descend_keys(g, &mut next, keys, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// The target value an intervention forces on a node.
pub type ForceTarget = Tri;

/// Result of an intervention: a plain frame, or a top-net when forcing in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intervened {
    Frame(ArgFrame),
    Net(TopNet),
}

/// Adds the standard forcing pattern for node `a` with a fresh helper node.
pub fn intervene(frame: &ArgFrame, a: &str, target: ForceTarget) -> Result<Intervened> {
    frame.idx(a)?;
    let x = fresh_name(frame, &format!("{a}.force"));
    let mut attacks: Vec<(String, String)> = frame.attacks().map(|(p, q)| (p.to_string(), q.to_string())).collect();
    let mut nodes: Vec<String> = frame.nodes().to_vec();
    nodes.push(x.clone());
    match target {
        Tri::Zero => attacks.push((x, a.to_string())),
        Tri::Half => {
            attacks.push((x.clone(), a.to_string()));
            attacks.push((x.clone(), x));
        }
        Tri::One => {
            nodes.push(TOP.to_string());
            attacks.push((a.to_string(), x.clone()));
            attacks.push((x, TOP.to_string()));
            return Ok(Intervened::Net(TopNet::new(ArgFrame::new(nodes, attacks)?, TOP)?));
        }
    }
    Ok(Intervened::Frame(ArgFrame::new(nodes, attacks)?))
}

/// `base`, or `base` with the smallest numeric suffix that is not a node.
pub(crate) fn fresh_name(frame: &ArgFrame, base: &str) -> String {
    if !frame.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}.{i}")).find(|n| !frame.contains(n)).unwrap()
}

/// Levels of the attackers of ⊤, keyed by name.
pub fn top_attacker_levels(net: &TopNet) -> BTreeMap<String, crate::frames::Level> {
    let levels = scc_levels(&net.frame);
    net.frame.attackers_of(&net.top).into_iter().map(|x| (x.to_string(), levels[x])).collect()
}
