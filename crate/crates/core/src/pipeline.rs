//! Instantiated frames `(S, R, I)`: the model-based semantics, the two-state
//! transformation, pattern networks, and the syntactic route through a master
//! top-net built from attack formations.

use std::collections::{BTreeMap, BTreeSet};

use crate::baf::{baf_compose, check_legitimate_embedding, neg_node, Baf};
use crate::error::{Error, Result};
use crate::frames::{is_legitimate_labelling, ArgFrame, Labelling, Valuation};
use crate::kleene::{enumerate_valuations, to_full_dnf, Formula};
use crate::monadic::{self, MFormula};
use crate::topnet::{option_iv_projected, option_iv_projected_with, Policy, TopNet};
use crate::tri::Tri;
use crate::TOP;

/// A frame whose nodes carry propositional formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantiatedFrame {
    frame: ArgFrame,
    inst: BTreeMap<String, Formula>,
}

impl InstantiatedFrame {
    /// Requires a formula for every node and atoms disjoint from node names.
    pub fn new(frame: ArgFrame, inst: BTreeMap<String, Formula>) -> Result<InstantiatedFrame> {
        if let Some(x) = frame.nodes().iter().find(|x| !inst.contains_key(*x)) {
            return Err(Error::Unvalued(x.clone()));
        }
        if let Some(x) = inst.keys().find(|x| !frame.contains(x)) {
            return Err(Error::Extraneous(x.clone()));
        }
        let out = InstantiatedFrame { frame, inst };
        if let Some(a) = out.atoms().into_iter().find(|a| out.frame.contains(a)) {
            return Err(Error::Input(format!("atom `{a}` is also a node name")));
        }
        Ok(out)
    }

    /// Each node `x` instantiated by its own atom `v_x`.
    pub fn identity(frame: ArgFrame) -> Result<InstantiatedFrame> {
        let inst = frame.nodes().iter().map(|x| (x.clone(), Formula::atom(format!("v_{x}")))).collect();
        InstantiatedFrame::new(frame, inst)
    }

    pub fn frame(&self) -> &ArgFrame {
        &self.frame
    }

    pub fn formula(&self, x: &str) -> &Formula {
        &self.inst[x]
    }

    pub fn instantiation(&self) -> &BTreeMap<String, Formula> {
        &self.inst
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.inst.values().flat_map(Formula::atoms).collect()
    }

    /// `λ_m(x) = m(I(x))`.
    pub fn labelling_under(&self, m: &Valuation) -> Result<Labelling> {
        self.inst.iter().map(|(x, f)| Ok((x.clone(), f.eval(m)?))).collect()
    }
}

/// The model-based semantics: every three-valued valuation whose induced
/// labelling is legitimate.
pub fn oracle_extensions(inst: &InstantiatedFrame) -> Vec<(Valuation, Labelling)> {
    enumerate_valuations(&inst.atoms())
        .filter_map(|m| {
            let lam = inst.labelling_under(&m).ok()?;
            is_legitimate_labelling(&inst.frame, &lam).ok()?.then_some((m, lam))
        })
        .collect()
}

/// The distinct labellings among valuation/labelling pairs.
pub fn distinct_labellings(pairs: &[(Valuation, Labelling)]) -> Vec<Labelling> {
    let set: BTreeSet<Labelling> = pairs.iter().map(|(_, l)| l.clone()).collect();
    set.into_iter().collect()
}

/// The two-state frame: `~x` for every node, `x ↔ ~x`, and ⊤ attacking `~x`
/// for every originally unattacked `x`; `I(~x) = ¬I(x)`, `I(⊤) = ⊤`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStateFrame {
    inner: InstantiatedFrame,
    base: Vec<String>,
}

impl TwoStateFrame {
    pub fn frame(&self) -> &ArgFrame {
        self.inner.frame()
    }

    pub fn instantiated(&self) -> &InstantiatedFrame {
        &self.inner
    }

    /// The nodes of the original frame.
    pub fn base_nodes(&self) -> &[String] {
        &self.base
    }
}

/// The node standing for the negation of node `x`.
pub fn neg_of(x: &str) -> String {
    format!("~{x}")
}

/// The two-state frame: `x ↔ ~x` for every node and `⊤ ↠ ~x` for the unattacked ones.
pub fn two_state_frame(frame: &ArgFrame) -> ArgFrame {
    let mut nodes: Vec<String> = frame.nodes().to_vec();
    nodes.extend(frame.nodes().iter().map(|x| neg_of(x)));
    nodes.push(TOP.to_string());
    let mut attacks: Vec<(String, String)> = frame.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for x in frame.nodes() {
        attacks.push((x.clone(), neg_of(x)));
        attacks.push((neg_of(x), x.clone()));
        if frame.is_unattacked(x) {
            attacks.push((TOP.to_string(), neg_of(x)));
        }
    }
    ArgFrame::new(nodes, attacks).expect("fresh names")
}

/// `(S*, R*)`: `R` plus `x ↔ ~x` and `⊤ ↠ ~x` for every node. Its complete
/// extensions are those of `(S, R)` with ⊤ added.
pub fn negation_embedding(frame: &ArgFrame) -> ArgFrame {
    let mut nodes: Vec<String> = frame.nodes().to_vec();
    nodes.extend(frame.nodes().iter().map(|x| neg_of(x)));
    nodes.push(TOP.to_string());
    let mut attacks: Vec<(String, String)> = frame.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for x in frame.nodes() {
        attacks.push((x.clone(), neg_of(x)));
        attacks.push((neg_of(x), x.clone()));
        attacks.push((TOP.to_string(), neg_of(x)));
    }
    ArgFrame::new(nodes, attacks).expect("fresh names")
}

pub fn to_two_state(inst: &InstantiatedFrame) -> Result<TwoStateFrame> {
    let frame = two_state_frame(inst.frame());
    let mut map = inst.inst.clone();
    for (x, f) in &inst.inst {
        map.insert(neg_of(x), f.clone().not());
    }
    map.insert(TOP.to_string(), Formula::Top);
    Ok(TwoStateFrame { inner: InstantiatedFrame::new(frame, map)?, base: inst.frame.nodes().to_vec() })
}

/// The two-state frame plus mutual attacks between non-⊤ nodes whose full
/// DNFs over all instantiation atoms share no conjunct.
pub fn dnf_pattern_network(ts: &TwoStateFrame) -> Result<ArgFrame> {
    let inst = &ts.inner;
    let atoms = inst.atoms();
    let mut dnfs = BTreeMap::new();
    for x in inst.frame.nodes().iter().filter(|x| *x != TOP) {
        dnfs.insert(x.clone(), to_full_dnf(inst.formula(x), &atoms)?);
    }
    let mut attacks: Vec<(String, String)> =
        inst.frame.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for (x, dx) in &dnfs {
        for (y, dy) in &dnfs {
            if x != y && !dx.shares_conjunct(dy) {
                attacks.push((x.clone(), y.clone()));
            }
        }
    }
    ArgFrame::new(inst.frame.nodes().iter().cloned(), attacks)
}

/// The abstract instantiation of `f1` by `f2` along `map`: the image of the
/// nodes, carrying the transported attacks of `f1` and the attacks of `f2`
/// among them.
pub fn frame_instantiation(f1: &ArgFrame, f2: &ArgFrame, map: &BTreeMap<String, String>) -> Result<ArgFrame> {
    for x in f1.nodes() {
        let y = map.get(x).ok_or_else(|| Error::Unvalued(x.clone()))?;
        if !f2.contains(y) {
            return Err(Error::UnknownNode(y.clone()));
        }
    }
    let image: BTreeSet<&String> = f1.nodes().iter().map(|x| &map[x]).collect();
    let moved = f1.attacks().map(|(a, b)| (map[a].clone(), map[b].clone()));
    let kept = f2
        .attacks()
        .filter(|(a, b)| image.contains(&a.to_string()) && image.contains(&b.to_string()))
        .map(|(a, b)| (a.to_string(), b.to_string()));
    let attacks: Vec<(String, String)> = moved.chain(kept).collect();
    ArgFrame::new(image.into_iter().cloned(), attacks)
}

/// The master top-net: one formation per non-⊤ node of the two-state frame,
/// host atoms `q ↔ ~q`, `out_x ↠ in_y` along the two-state attacks and a
/// single shared ⊤.
#[derive(Clone, Debug)]
pub struct Master {
    pub net: TopNet,
    pub bafs: BTreeMap<String, Baf>,
    pub atoms: BTreeSet<String>,
}

pub fn assemble_master(ts: &TwoStateFrame) -> Result<Master> {
    let inst = &ts.inner;
    let atoms = inst.atoms();
    let mut nodes: BTreeSet<String> = BTreeSet::from([TOP.to_string()]);
    let mut attacks: BTreeSet<(String, String)> = BTreeSet::new();
    for q in &atoms {
        nodes.insert(q.clone());
        nodes.insert(neg_node(q));
        attacks.insert((q.clone(), neg_node(q)));
        attacks.insert((neg_node(q), q.clone()));
    }
    let mut bafs = BTreeMap::new();
    for x in inst.frame.nodes().iter().filter(|x| *x != TOP) {
        let b = baf_compose(x, inst.formula(x))?;
        nodes.extend(b.nodes());
        attacks.extend(b.attacks().iter().cloned());
        bafs.insert(x.clone(), b);
    }
    for (x, y) in inst.frame.attacks() {
        let target = bafs[y].in_node().to_string();
        let source = if x == TOP { TOP.to_string() } else { bafs[x].out_node().to_string() };
        attacks.insert((source, target));
    }
    let frame = ArgFrame::new(nodes, attacks)?;
    let list: Vec<Baf> = bafs.values().cloned().collect();
    check_legitimate_embedding(&frame, &list).map_err(|v| Error::Construction(v.to_string()))?;
    Ok(Master { net: TopNet::new(frame, TOP)?, bafs, atoms })
}

/// The syntactic route: each valuation of the atoms is a candidate, kept when
/// the master net has an option-iv extension agreeing with it and its reading
/// through `I` is legitimate on `(S, R)`.
pub fn pipeline_extensions(inst: &InstantiatedFrame, policy: Policy) -> Result<Vec<(Valuation, Labelling)>> {
    let ts = to_two_state(inst)?;
    let master = assemble_master(&ts)?;
    let mut out = BTreeSet::new();
    for v in enumerate_valuations(&master.atoms) {
        let fixed: Vec<(&str, Tri)> = v.iter().collect();
        if option_iv_projected_with(&master.net, policy, &master.atoms, &fixed)?.is_empty() {
            continue;
        }
        let lam = inst.labelling_under(&v)?;
        if is_legitimate_labelling(&inst.frame, &lam)? {
            out.insert((v, lam));
        }
    }
    Ok(out.into_iter().collect())
}

/// The master's option-iv extensions taken over the whole net at once, then
/// read back as in [`pipeline_extensions`]. A single non-toxic candidate
/// anywhere suppresses every valuation that needs a toxic formation.
pub fn pipeline_extensions_global(inst: &InstantiatedFrame, policy: Policy) -> Result<Vec<(Valuation, Labelling)>> {
    let ts = to_two_state(inst)?;
    let master = assemble_master(&ts)?;
    let mut out = BTreeSet::new();
    for v in option_iv_projected(&master.net, policy, &master.atoms)? {
        let lam = inst.labelling_under(&v)?;
        if is_legitimate_labelling(&inst.frame, &lam)? {
            out.insert((v, lam));
        }
    }
    Ok(out.into_iter().collect())
}

/// Monadic instantiations are reduced to propositional ones over type atoms,
/// then run through the pipeline.
pub fn monadic_pipeline(
    frame: &ArgFrame,
    inst: &BTreeMap<String, MFormula>,
    policy: Policy,
) -> Result<Vec<(Valuation, Labelling)>> {
    let prop = monadic::propositionalize_instantiation(inst)?;
    pipeline_extensions(&InstantiatedFrame::new(frame.clone(), prop)?, policy)
}

/// The model-based semantics of a monadic instantiation over its type atoms.
pub fn monadic_oracle(frame: &ArgFrame, inst: &BTreeMap<String, MFormula>) -> Result<Vec<(Valuation, Labelling)>> {
    let prop = monadic::propositionalize_instantiation(inst)?;
    Ok(oracle_extensions(&InstantiatedFrame::new(frame.clone(), prop)?))
}

/// The two-state frame of a monadic instantiation with the purely syntactic
/// attacks added: a node carrying `¬∃v P(v)` attacks every node carrying
/// `P(c)`, and a node carrying `∀v P(v)` attacks every node carrying `¬P(c)`.
/// Returns the frame and the formula of each node.
pub fn monadic_pattern_network(
    frame: &ArgFrame,
    inst: &BTreeMap<String, MFormula>,
) -> Result<(ArgFrame, BTreeMap<String, MFormula>)> {
    if let Some(x) = frame.nodes().iter().find(|x| !inst.contains_key(*x)) {
        return Err(Error::Unvalued(x.clone()));
    }
    let ts = two_state_frame(frame);
    let mut map: BTreeMap<String, MFormula> = BTreeMap::new();
    for x in frame.nodes() {
        map.insert(x.clone(), inst[x].clone());
        map.insert(neg_of(x), inst[x].clone().not());
    }
    map.insert(TOP.to_string(), MFormula::Top);
    let mut attacks: Vec<(String, String)> = ts.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for (x, fx) in &map {
        for (y, fy) in &map {
            if x != y && monadic::pattern_attacks(fx, fy) {
                attacks.push((x.clone(), y.clone()));
            }
        }
    }
    Ok((ArgFrame::new(ts.nodes().iter().cloned(), attacks)?, map))
}
