//! Argumentation frames, Caminada labellings, complete extensions, SCCs and levels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solve::{Dom, Graph, FULL};
use crate::tri::Tri;
use crate::RESERVED;

/// A total map from names to truth values, ordered by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Assignment(BTreeMap<String, Tri>);

/// Node labelling of a frame.
pub type Labelling = Assignment;
/// Truth-value assignment to atoms.
pub type Valuation = Assignment;
/// Set of nodes.
pub type Extension = BTreeSet<String>;

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn get(&self, name: &str) -> Option<Tri> {
        self.0.get(name).copied()
    }

    /// Value of `name`; panics when absent.
    pub fn at(&self, name: &str) -> Tri {
        self.0[name]
    }

    pub fn insert(&mut self, name: impl Into<String>, v: Tri) {
        self.0.insert(name.into(), v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Tri)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Names mapped to 1.
    pub fn ins(&self) -> Extension {
        self.0.iter().filter(|(_, &v)| v == Tri::One).map(|(k, _)| k.clone()).collect()
    }

    /// Restriction to the names satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> Assignment {
        Assignment(self.0.iter().filter(|(k, _)| keep(k)).map(|(k, &v)| (k.clone(), v)).collect())
    }

    pub fn as_map(&self) -> &BTreeMap<String, Tri> {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<(S, Tri)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Tri)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

/// Whether `name` may appear in user input: non-empty, made of
/// `[A-Za-z0-9_()']`, balanced parentheses, and not reserved.
pub fn check_user_name(name: &str) -> Result<()> {
    if RESERVED.contains(&name) {
        return Err(Error::ReservedName(name.to_string()));
    }
    let mut depth = 0i32;
    let ok_chars = !name.is_empty()
        && name.chars().all(|c| {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            depth >= 0 && (c.is_ascii_alphanumeric() || "_()'".contains(c))
        });
    if ok_chars && depth == 0 && !name.starts_with('(') {
        Ok(())
    } else {
        Err(Error::InvalidName(name.to_string()))
    }
}

/// A finite attack graph over named nodes. Nodes are kept in name order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgFrame {
    names: Vec<String>,
    index: HashMap<String, usize>,
    attacks: BTreeSet<(usize, usize)>,
}

impl ArgFrame {
    /// Builds a frame. Attack endpoints must be listed among `nodes`.
    pub fn new<N, A, S>(nodes: N, attacks: A) -> Result<ArgFrame>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        A: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if set.contains("") {
            return Err(Error::InvalidName(String::new()));
        }
        let names: Vec<String> = set.into_iter().collect();
        let index: HashMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut att = BTreeSet::new();
        for (a, b) in attacks {
            let ia = *index.get(a.as_ref()).ok_or_else(|| Error::UnknownNode(a.as_ref().into()))?;
            let ib = *index.get(b.as_ref()).ok_or_else(|| Error::UnknownNode(b.as_ref().into()))?;
            att.insert((ia, ib));
        }
        Ok(ArgFrame { names, index, attacks: att })
    }

    /// Builds a frame whose nodes are the attack endpoints plus `extra`.
    pub fn from_attacks<S: AsRef<str>>(
        extra: impl IntoIterator<Item = S>,
        attacks: impl IntoIterator<Item = (S, S)>,
    ) -> Result<ArgFrame> {
        let attacks: Vec<(S, S)> = attacks.into_iter().collect();
        let mut nodes: BTreeSet<String> = extra.into_iter().map(|s| s.as_ref().to_string()).collect();
        for (a, b) in &attacks {
            nodes.insert(a.as_ref().to_string());
            nodes.insert(b.as_ref().to_string());
        }
        ArgFrame::new(nodes, attacks)
    }

    pub fn nodes(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn idx(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Attacks as name pairs, in index order.
    pub fn attacks(&self) -> impl Iterator<Item = (&str, &str)> {
        self.attacks.iter().map(|&(a, b)| (self.names[a].as_str(), self.names[b].as_str()))
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    pub fn attacks_idx(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.attacks.iter().copied()
    }

    pub fn has_attack(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(a), Some(b)) => self.attacks.contains(&(a, b)),
            _ => false,
        }
    }

    pub fn attackers_of(&self, x: &str) -> Vec<&str> {
        self.attacks().filter(|&(_, b)| b == x).map(|(a, _)| a).collect()
    }

    pub fn targets_of(&self, x: &str) -> Vec<&str> {
        self.attacks().filter(|&(a, _)| a == x).map(|(_, b)| b).collect()
    }

    pub fn is_unattacked(&self, x: &str) -> bool {
        !self.attacks().any(|(_, b)| b == x)
    }

    pub(crate) fn graph(&self) -> Graph {
        Graph::new(self.len(), self.attacks.iter().copied())
    }

    /// Values of `lam` in node order; `lam` must cover exactly the nodes.
    pub fn values_of(&self, lam: &Labelling) -> Result<Vec<Tri>> {
        if let Some(extra) = lam.names().find(|n| !self.contains(n)) {
            return Err(Error::Extraneous(extra.to_string()));
        }
        self.names.iter().map(|n| lam.get(n).ok_or_else(|| Error::Unvalued(n.clone()))).collect()
    }

    pub fn labelling_from(&self, vals: &[Tri]) -> Labelling {
        self.names.iter().cloned().zip(vals.iter().copied()).collect()
    }

    fn check_members(&self, e: &Extension) -> Result<()> {
        match e.iter().find(|x| !self.contains(x)) {
            Some(x) => Err(Error::UnknownNode(x.clone())),
            None => Ok(()),
        }
    }
}

/// Whether `e` is conflict-free, protects its members and contains every node it protects.
pub fn is_complete_extension(frame: &ArgFrame, e: &Extension) -> Result<bool> {
    frame.check_members(e)?;
    let conflict = frame.attacks().any(|(a, b)| e.contains(a) && e.contains(b));
    if conflict {
        return Ok(false);
    }
    let protects = |x: &str| frame.attackers_of(x).iter().all(|y| frame.attackers_of(y).iter().any(|z| e.contains(*z)));
    Ok(frame.nodes().iter().all(|x| protects(x) == e.contains(x)))
}

/// Whether `lam` satisfies the four Caminada clauses at every node.
pub fn is_legitimate_labelling(frame: &ArgFrame, lam: &Labelling) -> Result<bool> {
    let vals = frame.values_of(lam)?;
    Ok(frame.graph().is_legitimate(&vals))
}

/// All legitimate labellings in canonical order.
pub fn enumerate_complete_labellings(frame: &ArgFrame) -> Vec<Labelling> {
    let mut out = BTreeSet::new();
    let g = frame.graph();
    let _ = g.search(&mut vec![FULL; frame.len()], &mut |vals| {
        out.insert(frame.labelling_from(vals));
        ControlFlow::Continue(())
    });
    out.into_iter().collect()
}

/// Legitimate labellings agreeing with `fixed` on the named nodes.
pub fn complete_labellings_with(frame: &ArgFrame, fixed: &[(&str, Tri)]) -> Result<Vec<Labelling>> {
    let mut dom: Vec<Dom> = vec![FULL; frame.len()];
    for &(n, v) in fixed {
        dom[frame.idx(n)?] &= v.bit();
    }
    let mut out = BTreeSet::new();
    let _ = frame.graph().search(&mut dom, &mut |vals| {
        out.insert(frame.labelling_from(vals));
        ControlFlow::Continue(())
    });
    Ok(out.into_iter().collect())
}

/// `{x | λ(x) = 1}`.
pub fn extension_of(lam: &Labelling) -> Extension {
    lam.ins()
}

/// The labelling induced by a complete extension.
pub fn labelling_of(frame: &ArgFrame, e: &Extension) -> Result<Labelling> {
    if !is_complete_extension(frame, e)? {
        return Err(Error::Contract("extension is not complete".into()));
    }
    Ok(frame
        .nodes()
        .iter()
        .map(|x| {
            let v = if e.contains(x) {
                Tri::One
            } else if frame.attackers_of(x).iter().any(|y| e.contains(*y)) {
                Tri::Zero
            } else {
                Tri::Half
            };
            (x.clone(), v)
        })
        .collect())
}

/// The least complete labelling.
pub fn grounded_labelling(frame: &ArgFrame) -> Labelling {
    let g = frame.graph();
    let mut vals = vec![Tri::Half; frame.len()];
    loop {
        let mut changed = false;
        for x in 0..frame.len() {
            if vals[x] != Tri::Half {
                continue;
            }
            let att = &g.attackers[x];
            if att.iter().all(|&y| vals[y] == Tri::Zero) {
                vals[x] = Tri::One;
                changed = true;
            } else if att.iter().any(|&y| vals[y] == Tri::One) {
                vals[x] = Tri::Zero;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    frame.labelling_from(&vals)
}

/// Strongly connected components and the edges of their condensation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccPartition {
    pub components: Vec<BTreeSet<String>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
}

impl SccPartition {
    pub fn component_of(&self, x: &str) -> Option<usize> {
        self.components.iter().position(|c| c.contains(x))
    }

    /// Whether the condensation has no cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self.components.len();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &self.dag_edges {
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(c) = stack.pop() {
            seen += 1;
            for &(a, b) in &self.dag_edges {
                if a == c {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        seen == n && self.dag_edges.iter().all(|(a, b)| a != b)
    }
}

/// Maximal SCCs, ordered by their least member name.
pub fn scc_decompose(frame: &ArgFrame) -> SccPartition {
    let mut g = DiGraph::<usize, ()>::new();
    let ids: Vec<_> = (0..frame.len()).map(|i| g.add_node(i)).collect();
    for (a, b) in frame.attacks_idx() {
        g.add_edge(ids[a], ids[b], ());
    }
    let mut comps: Vec<BTreeSet<String>> =
        tarjan_scc(&g).into_iter().map(|c| c.into_iter().map(|v| frame.name(g[v]).to_string()).collect()).collect();
    comps.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
    let mut of = vec![0; frame.len()];
    for (ci, c) in comps.iter().enumerate() {
        for x in c {
            of[frame.index_of(x).unwrap()] = ci;
        }
    }
    let dag_edges = frame.attacks_idx().map(|(a, b)| (of[a], of[b])).filter(|(a, b)| a != b).collect();
    SccPartition { components: comps, dag_edges }
}

/// Minimal and maximal distance `(k, n)` of an SCC from the sources of the condensation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Level {
    pub k: usize,
    pub n: usize,
}

/// The level of every node, inherited from its component.
pub fn scc_levels(frame: &ArgFrame) -> BTreeMap<String, Level> {
    let p = scc_decompose(frame);
    let levels = component_levels(&p);
    let mut out = BTreeMap::new();
    for (ci, c) in p.components.iter().enumerate() {
        for x in c {
            out.insert(x.clone(), levels[ci]);
        }
    }
    out
}

fn component_levels(p: &SccPartition) -> Vec<Level> {
    let n = p.components.len();
    let mut level: Vec<Option<Level>> = vec![None; n];
    // The condensation is acyclic, so n rounds settle every component.
    for _ in 0..=n {
        for c in 0..n {
            if level[c].is_some() {
                continue;
            }
            let preds: Vec<usize> = p.dag_edges.iter().filter(|&&(_, b)| b == c).map(|&(a, _)| a).collect();
            if preds.is_empty() {
                level[c] = Some(Level { k: 1, n: 1 });
            } else if preds.iter().all(|&q| level[q].is_some()) {
                let k = preds.iter().map(|&q| level[q].unwrap().k).min().unwrap();
                let m = preds.iter().map(|&q| level[q].unwrap().n).max().unwrap();
                level[c] = Some(Level { k: k + 1, n: m + 1 });
            }
        }
    }
    level.into_iter().map(|l| l.expect("condensation is acyclic")).collect()
}
