//! Conjunctive-disjunctive attack networks and their reductions to plain frames.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::frames::{ArgFrame, Labelling};
use crate::limits::limits;
use crate::tri::Tri;

pub type NodeSet = BTreeSet<String>;
/// `X ↠ z`: the members of `X` jointly attack `z`.
pub type JointAttack = (NodeSet, String);

/// Nodes plus generating set attacks `X ↠ Y` (conjunctive `X`, disjunctive `Y`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CDNetwork {
    nodes: NodeSet,
    attacks: Vec<(NodeSet, NodeSet)>,
}

impl CDNetwork {
    pub fn new<S: Into<String>>(
        nodes: impl IntoIterator<Item = S>,
        attacks: impl IntoIterator<Item = (NodeSet, NodeSet)>,
    ) -> Result<CDNetwork> {
        let nodes: NodeSet = nodes.into_iter().map(Into::into).collect();
        if nodes.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let mut gens = Vec::new();
        for (x, y) in attacks {
            if x.is_empty() || y.is_empty() {
                return Err(Error::Input("set attacks need non-empty sides".into()));
            }
            if let Some(bad) = x.iter().chain(&y).find(|n| !nodes.contains(*n)) {
                return Err(Error::UnknownNode(bad.clone()));
            }
            if !gens.contains(&(x.clone(), y.clone())) {
                gens.push((x, y));
            }
        }
        gens.sort();
        Ok(CDNetwork { nodes, attacks: gens })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn attacks(&self) -> &[(NodeSet, NodeSet)] {
        &self.attacks
    }

    /// Whether `x ↠ y` holds in the monotone closure of the generators.
    pub fn attacks_in_closure(&self, x: &NodeSet, y: &NodeSet) -> bool {
        self.attacks.iter().any(|(gx, gy)| gx.is_subset(x) && gy.is_subset(y))
    }

    /// Generators whose target is a subset of `y`: the attackers of `y` up to closure.
    fn attackers_of<'a>(&'a self, y: &'a NodeSet) -> impl Iterator<Item = &'a NodeSet> + 'a {
        self.attacks.iter().filter(move |(_, gy)| gy.is_subset(y)).map(|(gx, _)| gx)
    }
}

/// `λ(X)`: the minimum over the members of `X`.
pub fn set_value(lam: &Labelling, x: &NodeSet) -> Tri {
    x.iter().map(|n| lam.at(n)).min().unwrap_or(Tri::One)
}

/// The CD-extension conditions. Conditions on sets `Y` are checked for every
/// target set of a generator, with the attackers of `Y` taken up to closure.
pub fn is_cd_extension(net: &CDNetwork, lam: &Labelling) -> Result<bool> {
    for n in &net.nodes {
        lam.get(n).ok_or_else(|| Error::Unvalued(n.clone()))?;
    }
    let targeted: NodeSet = net.attacks.iter().flat_map(|(_, y)| y.iter().cloned()).collect();
    // (a) nodes in no target set are in.
    if net.nodes.iter().any(|z| !targeted.contains(z) && lam.at(z) != Tri::One) {
        return Ok(false);
    }
    // (b) an in attacker puts some target out.
    if net.attacks.iter().any(|(x, y)| set_value(lam, x) == Tri::One && set_value(lam, y) != Tri::Zero) {
        return Ok(false);
    }
    let targets: BTreeSet<&NodeSet> = net.attacks.iter().map(|(_, y)| y).collect();
    for y in targets {
        let vals: Vec<Tri> = net.attackers_of(y).map(|x| set_value(lam, x)).collect();
        // (c) all attackers out puts every target in.
        if vals.iter().all(|&v| v == Tri::Zero) && y.iter().any(|n| lam.at(n) != Tri::One) {
            return Ok(false);
        }
        // (d) no attacker in, some undecided: the target set is undecided.
        if vals.iter().all(|&v| v < Tri::One) && vals.contains(&Tri::Half) && set_value(lam, y) != Tri::Half {
            return Ok(false);
        }
    }
    Ok(true)
}

fn all_labellings(nodes: &NodeSet) -> impl Iterator<Item = Labelling> + '_ {
    crate::kleene::enumerate_valuations(nodes)
}

/// Every CD-extension, by filtering all labellings.
pub fn enumerate_cd_extensions(net: &CDNetwork) -> Vec<Labelling> {
    all_labellings(&net.nodes).filter(|l| is_cd_extension(net, l).unwrap_or(false)).collect()
}

/// Each `X ↠ {y_1..y_k}` becomes `X ∪ {y_j | j ≠ i} ↠ y_i` for every `i`.
pub fn rcd_expand(net: &CDNetwork) -> Vec<JointAttack> {
    let mut out = BTreeSet::new();
    for (x, y) in &net.attacks {
        for yi in y {
            let mut src = x.clone();
            src.extend(y.iter().filter(|o| *o != yi).cloned());
            out.insert((src, yi.clone()));
        }
    }
    out.into_iter().collect()
}

/// Direct joint-attack condition: `z` is out iff some attacking set is in,
/// in iff every attacking set is out, undecided otherwise.
pub fn is_joint_labelling(nodes: &NodeSet, attacks: &[JointAttack], lam: &Labelling) -> bool {
    nodes.iter().all(|z| {
        let m = attacks.iter().filter(|(_, t)| t == z).map(|(x, _)| set_value(lam, x)).max().unwrap_or(Tri::Zero);
        lam.get(z) == Some(m.not())
    })
}

/// Fresh-auxiliary reduction of joint attacks added to `base`. Attack number
/// `i` with sources `x_1..x_n` and target `z` gets nodes `#i.y1..#i.yn, #i.y`
/// and edges `x_k ↠ #i.yk ↠ #i.y ↠ z`.
pub fn eliminate_joint_attacks(base: &ArgFrame, joint: &[JointAttack]) -> Result<ArgFrame> {
    let mut nodes: BTreeSet<String> = base.nodes().iter().cloned().collect();
    let mut edges: Vec<(String, String)> = base.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let mint = |name: String, nodes: &mut BTreeSet<String>| -> Result<String> {
        if !nodes.insert(name.clone()) {
            return Err(Error::Construction(format!("auxiliary name `{name}` already in use")));
        }
        Ok(name)
    };
    for (i, (xs, z)) in joint.iter().enumerate() {
        if let Some(bad) = xs.iter().chain([z]).find(|n| !base.contains(n)) {
            return Err(Error::UnknownNode(bad.clone()));
        }
        let y = mint(format!("#{i}.y"), &mut nodes)?;
        for (k, x) in xs.iter().enumerate() {
            let yk = mint(format!("#{i}.y{}", k + 1), &mut nodes)?;
            edges.push((x.clone(), yk.clone()));
            edges.push((yk, y.clone()));
        }
        edges.push((y, z.clone()));
    }
    ArgFrame::new(nodes, edges)
}

/// Labellings of a joint-attack net, computed through the fresh-auxiliary
/// reduction and projected back onto the base nodes.
pub fn joint_labellings(nodes: &NodeSet, attacks: &[JointAttack]) -> Result<Vec<Labelling>> {
    let base = ArgFrame::new(nodes.iter().cloned(), std::iter::empty::<(String, String)>())?;
    let reduced = eliminate_joint_attacks(&base, attacks)?;
    let keys: Vec<usize> = nodes.iter().map(|n| reduced.index_of(n).unwrap()).collect();
    let g = reduced.graph();
    let mut out = BTreeSet::new();
    let _ = g.project(&vec![crate::solve::FULL; reduced.len()], &keys, &mut |w| {
        out.insert(nodes.iter().cloned().zip(keys.iter().map(|&i| w[i])).collect::<Labelling>());
        ControlFlow::Continue(())
    });
    Ok(out.into_iter().collect())
}

/// Single attacks `X' ↠ y` (`∅ ≠ X' ⊆ X`, `y ∈ Y`) whose monotone closure
/// contains `X ↠ Y`.
pub fn np_realizations(x: &NodeSet, y: &NodeSet) -> Vec<JointAttack> {
    let members: Vec<&String> = x.iter().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << members.len()) {
        let src: NodeSet =
            members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| (*m).clone()).collect();
        for t in y {
            out.push((src.clone(), t.clone()));
        }
    }
    out.sort();
    out
}

/// Union over all ways of realizing every set attack by one single attack
/// (see [`np_realizations`]) of the labellings of the induced joint-attack nets.
pub fn np_extensions(net: &CDNetwork) -> Result<Vec<Labelling>> {
    let choices: Vec<Vec<JointAttack>> = net.attacks.iter().map(|(x, y)| np_realizations(x, y)).collect();
    let branching = choices.iter().filter(|c| c.len() > 1).count();
    let cap = limits().np_disjunctive;
    if branching > cap {
        return Err(Error::Limit(format!("{branching} set attacks with several realizations exceed the cap of {cap}")));
    }
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let joint: Vec<JointAttack> = choices.iter().zip(&pick).map(|(c, &k)| c[k].clone()).collect();
        out.extend(joint_labellings(&net.nodes, &joint)?);
        // Odometer over realization indices.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out.into_iter().collect());
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// The labellings without undecided nodes.
pub fn stable_only(labellings: &[Labelling]) -> Vec<Labelling> {
    labellings.iter().filter(|l| l.iter().all(|(_, v)| v.is_crisp())).cloned().collect()
}

/// Joint attacks of a CD network with only singleton targets.
pub fn as_joint(net: &CDNetwork) -> Option<Vec<JointAttack>> {
    net.attacks.iter().map(|(x, y)| (y.len() == 1).then(|| (x.clone(), y.iter().next().unwrap().clone()))).collect()
}
