//! Two-state networks with strict and defeasible attacks, compiled from
//! defeasible theories; defeasibility indices and the labellings built on them.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{check_user_name, Labelling};
use crate::tri::Tri;
use crate::TOP;

/// An atom or its negation; `¬¬b` is `b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: impl Into<String>) -> Literal {
        Literal { atom: atom.into(), positive: true }
    }

    pub fn neg(atom: impl Into<String>) -> Literal {
        Literal { atom: atom.into(), positive: false }
    }

    pub fn negate(&self) -> Literal {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }

    /// The network node of the literal: `b` or `~b`.
    pub fn node(&self) -> String {
        if self.positive {
            self.atom.clone()
        } else {
            format!("~{}", self.atom)
        }
    }

    /// Parses `b`, `~b`, `¬b`, `!b`, with any number of negations.
    pub fn parse(s: &str) -> Result<Literal> {
        let mut rest = s.trim();
        let mut positive = true;
        while let Some(r) = rest.strip_prefix(['~', '¬', '!']) {
            positive = !positive;
            rest = r.trim_start();
        }
        check_user_name(rest)?;
        Ok(Literal { atom: rest.to_string(), positive })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        f.write_str(&self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    Strict,
    Defeasible,
}

/// `body ⇝ head`; an empty body makes the head an assumption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub body: Vec<Literal>,
    pub head: Literal,
    pub kind: Kind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefeasibleTheory {
    pub rules: Vec<Rule>,
}

impl DefeasibleTheory {
    /// Lines `strict: a, b -> c`, `defeasible: a => b`, `fact: a`, `dfact: a`;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<DefeasibleTheory> {
        let mut rules = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let (tag, rest) = line.split_once(':').ok_or_else(|| err("expected `kind: rule`".into()))?;
            let lit = |s: &str| Literal::parse(s).map_err(|e| err(e.to_string()));
            let rule = |arrow: &str, kind: Kind| -> Result<Rule> {
                let (body, head) = rest.split_once(arrow).ok_or_else(|| err(format!("expected `{arrow}`")))?;
                let body = body.split(',').map(str::trim).filter(|s| !s.is_empty()).map(lit).collect::<Result<_>>()?;
                Ok(Rule { body, head: lit(head)?, kind })
            };
            rules.push(match tag.trim() {
                "strict" => rule("->", Kind::Strict)?,
                "defeasible" => rule("=>", Kind::Defeasible)?,
                "fact" => Rule { body: vec![], head: lit(rest)?, kind: Kind::Strict },
                "dfact" => Rule { body: vec![], head: lit(rest)?, kind: Kind::Defeasible },
                other => return Err(err(format!("unknown rule kind `{other}`"))),
            });
        }
        Ok(DefeasibleTheory { rules })
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.rules.iter().flat_map(|r| r.body.iter().chain([&r.head]).map(|l| l.atom.clone())).collect()
    }
}

/// Nodes in negation pairs plus ⊤, with strict and defeasible attacks.
/// Auxiliary pairs take their value from their attackers outside the pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipolarNet {
    nodes: BTreeSet<String>,
    strict: BTreeSet<(String, String)>,
    defeasible: BTreeSet<(String, String)>,
    pairs: BTreeMap<String, String>,
    aux: BTreeSet<String>,
}

impl BipolarNet {
    /// `pairs` maps the positive node of each pair to its negation; `aux`
    /// lists the positive nodes of auxiliary pairs. Nodes in no pair are plain.
    pub fn new(
        nodes: impl IntoIterator<Item = String>,
        strict: impl IntoIterator<Item = (String, String)>,
        defeasible: impl IntoIterator<Item = (String, String)>,
        pairs: BTreeMap<String, String>,
        aux: BTreeSet<String>,
    ) -> Result<BipolarNet> {
        let mut nodes: BTreeSet<String> = nodes.into_iter().collect();
        nodes.insert(TOP.to_string());
        let mut strict: BTreeSet<(String, String)> = strict.into_iter().collect();
        let defeasible: BTreeSet<(String, String)> = defeasible.into_iter().collect();
        for (a, b) in strict.iter().chain(&defeasible) {
            for n in [a, b] {
                if !nodes.contains(n) {
                    return Err(Error::UnknownNode(n.clone()));
                }
            }
            if b == TOP {
                return Err(Error::Input(format!("`{a}` attacks the truth node")));
            }
        }
        for (x, nx) in &pairs {
            for n in [x, nx] {
                if !nodes.contains(n) {
                    return Err(Error::UnknownNode(n.clone()));
                }
            }
            strict.insert((x.clone(), nx.clone()));
            strict.insert((nx.clone(), x.clone()));
        }
        if let Some(z) = aux.iter().find(|z| !pairs.contains_key(*z)) {
            return Err(Error::Input(format!("auxiliary `{z}` is not a pair")));
        }
        Ok(BipolarNet { nodes, strict, defeasible, pairs, aux })
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn strict(&self) -> &BTreeSet<(String, String)> {
        &self.strict
    }

    pub fn defeasible(&self) -> &BTreeSet<(String, String)> {
        &self.defeasible
    }

    pub fn pairs(&self) -> &BTreeMap<String, String> {
        &self.pairs
    }

    pub fn aux(&self) -> &BTreeSet<String> {
        &self.aux
    }

    /// The other member of `x`'s pair.
    pub fn partner(&self, x: &str) -> Option<&str> {
        if let Some(n) = self.pairs.get(x) {
            return Some(n);
        }
        self.pairs.iter().find(|(_, n)| *n == x).map(|(p, _)| p.as_str())
    }

    /// Attackers of `x` with the kind of each attack.
    pub fn attackers(&self, x: &str) -> Vec<(&str, Kind)> {
        let s = self.strict.iter().filter(|(_, t)| t == x).map(|(a, _)| (a.as_str(), Kind::Strict));
        let d = self.defeasible.iter().filter(|(_, t)| t == x).map(|(a, _)| (a.as_str(), Kind::Defeasible));
        s.chain(d).collect()
    }

    /// Targets of `x` with the kind of each attack.
    pub fn targets(&self, x: &str) -> Vec<(&str, Kind)> {
        let s = self.strict.iter().filter(|(a, _)| a == x).map(|(_, t)| (t.as_str(), Kind::Strict));
        let d = self.defeasible.iter().filter(|(a, _)| a == x).map(|(_, t)| (t.as_str(), Kind::Defeasible));
        s.chain(d).collect()
    }

    /// Attackers of `x` from outside its pair.
    fn outside_attackers(&self, x: &str) -> Vec<(&str, Kind)> {
        let p = self.partner(x);
        self.attackers(x).into_iter().filter(|(a, _)| Some(*a) != p).collect()
    }

    /// The positive members of the literal (non-auxiliary) pairs.
    pub fn literal_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().filter(|(x, _)| !self.aux.contains(*x)).map(|(x, n)| (x.as_str(), n.as_str()))
    }
}

/// The network of a theory: literal pairs; assumptions become attacks of ⊤
/// on the negated head; `x ⇝ y` becomes `x ⇝ ¬y`; a rule with body
/// `x_1..x_n` (`n ≥ 2`) gets an auxiliary pair `z`/`~z` with `¬x_i ↠ z` and
/// `z ⇝ ¬head`.
pub fn compile_theory(th: &DefeasibleTheory) -> Result<BipolarNet> {
    let mut nodes = BTreeSet::new();
    let mut pairs = BTreeMap::new();
    let mut aux = BTreeSet::new();
    let mut strict = BTreeSet::new();
    let mut defeasible = BTreeSet::new();
    for a in th.atoms() {
        check_user_name(&a)?;
        let (p, n) = (Literal::pos(&a).node(), Literal::neg(&a).node());
        nodes.insert(p.clone());
        nodes.insert(n.clone());
        pairs.insert(p, n);
    }
    let mut add = |kind: Kind, a: String, b: String| {
        match kind {
            Kind::Strict => strict.insert((a, b)),
            Kind::Defeasible => defeasible.insert((a, b)),
        };
    };
    for (i, r) in th.rules.iter().enumerate() {
        let target = r.head.negate().node();
        match r.body.as_slice() {
            [] => add(r.kind, TOP.to_string(), target),
            [x] => add(r.kind, x.node(), target),
            body => {
                let z = format!("r{}.z", i + 1);
                let nz = format!("~{z}");
                nodes.insert(z.clone());
                nodes.insert(nz.clone());
                pairs.insert(z.clone(), nz);
                aux.insert(z.clone());
                for x in body {
                    add(Kind::Strict, x.negate().node(), z.clone());
                }
                add(r.kind, z, target);
            }
        }
    }
    BipolarNet::new(nodes, strict, defeasible, pairs, aux)
}

// ---------------------------------------------------------------------------
// Ground propagation

/// One step of the propagation from ⊤.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub assigned: Vec<(String, Tri)>,
    pub d: usize,
    pub from: Vec<String>,
    /// The step lost against an earlier one with a lower index.
    pub overridden: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ground {
    pub labelling: Labelling,
    /// The index recorded when each node was decided.
    pub d: BTreeMap<String, usize>,
    pub trace: Vec<TraceStep>,
}

/// Propagates attacks from ⊤ in order of defeasible index: an attack from an
/// in node carries its index, plus one if defeasible. The first (lowest) claims
/// on a pair decide it; claims against both members at once leave both
/// undecided; later claims are recorded as overridden. Auxiliary pairs follow
/// their outside attackers, with the largest index among them. Nodes never
/// reached are undecided.
pub fn ground_labelling(net: &BipolarNet) -> Ground {
    let mut value: BTreeMap<String, Tri> = BTreeMap::new();
    let mut d: BTreeMap<String, usize> = BTreeMap::new();
    let mut trace = Vec::new();
    let mut heap: BinaryHeap<Reverse<(usize, String, String)>> = BinaryHeap::new();
    let fire = |u: &str, du: usize, heap: &mut BinaryHeap<Reverse<(usize, String, String)>>| {
        for (t, k) in net.targets(u) {
            let cost = du + usize::from(k == Kind::Defeasible);
            heap.push(Reverse((cost, t.to_string(), u.to_string())));
        }
    };
    value.insert(TOP.to_string(), Tri::One);
    d.insert(TOP.to_string(), 0);
    trace.push(TraceStep { assigned: vec![(TOP.to_string(), Tri::One)], d: 0, from: vec![], overridden: false });
    fire(TOP, 0, &mut heap);
    let key = |x: &str| -> String {
        match net.partner(x) {
            Some(p) if !net.pairs.contains_key(x) => p.to_string(),
            _ => x.to_string(),
        }
    };
    while let Some(Reverse((cost, first_t, first_s))) = heap.pop() {
        let mut batch = vec![(first_t, first_s)];
        while let Some(Reverse((c, _, _))) = heap.peek() {
            if *c != cost {
                break;
            }
            let Reverse((_, t, s)) = heap.pop().unwrap();
            batch.push((t, s));
        }
        let mut groups: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for (t, s) in batch {
            if net.aux.contains(&key(&t)) || net.partner(&t).is_none() {
                continue;
            }
            groups.entry(key(&t)).or_default().push((t, s));
        }
        for (x, claims) in groups {
            let nx = net.pairs[&x].clone();
            let killed: BTreeSet<&String> = claims.iter().map(|(t, _)| t).collect();
            let from: Vec<String> =
                claims.iter().map(|(_, s)| s.clone()).collect::<BTreeSet<_>>().into_iter().collect();
            let (vx, vn) = if killed.len() == 2 {
                (Tri::Half, Tri::Half)
            } else if killed.contains(&x) {
                (Tri::Zero, Tri::One)
            } else {
                (Tri::One, Tri::Zero)
            };
            let overridden = value.contains_key(&x);
            trace.push(TraceStep { assigned: vec![(nx.clone(), vn), (x.clone(), vx)], d: cost, from, overridden });
            if overridden {
                continue;
            }
            for (n, v) in [(&x, vx), (&nx, vn)] {
                value.insert(n.clone(), v);
                d.insert(n.clone(), cost);
                if v == Tri::One {
                    fire(n, cost, &mut heap);
                }
            }
        }
        // Auxiliary pairs whose outside attackers are all decided.
        loop {
            let ready = net.aux.iter().find(|z| {
                !value.contains_key(*z) && net.outside_attackers(z).iter().all(|(a, _)| value.contains_key(*a))
            });
            let Some(z) = ready.cloned() else { break };
            let att = net.outside_attackers(&z);
            let m = att.iter().map(|(a, _)| value[*a]).max().unwrap_or(Tri::Zero);
            let dz = att.iter().map(|(a, _)| d[*a]).max().unwrap_or(0);
            let nz = net.pairs[&z].clone();
            let from = att.iter().map(|(a, _)| a.to_string()).collect();
            trace.push(TraceStep {
                assigned: vec![(z.clone(), m.not()), (nz.clone(), m)],
                d: dz,
                from,
                overridden: false,
            });
            for (n, v) in [(&z, m.not()), (&nz, m)] {
                value.insert(n.clone(), v);
                d.insert(n.clone(), dz);
                if v == Tri::One {
                    fire(n, dz, &mut heap);
                }
            }
        }
    }
    let labelling = net.nodes.iter().map(|n| (n.clone(), value.get(n).copied().unwrap_or(Tri::Half))).collect();
    Ground { labelling, d, trace }
}

// ---------------------------------------------------------------------------
// Defeasibility index

/// `(D1, D2)`: the fewest defeasible links on a path from ⊤ and the number of
/// simple paths achieving it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DIndex {
    pub d1: usize,
    pub d2: usize,
}

fn forward(net: &BipolarNet) -> BTreeMap<&str, Vec<(&str, usize)>> {
    let mut adj: BTreeMap<&str, Vec<(&str, usize)>> = BTreeMap::new();
    for (a, b) in &net.strict {
        adj.entry(a).or_default().push((b, 0));
    }
    for (a, b) in &net.defeasible {
        adj.entry(a).or_default().push((b, 1));
    }
    adj
}

/// Fewest defeasible links from ⊤ to every reachable node (0-1 BFS).
pub fn d1_all(net: &BipolarNet) -> BTreeMap<String, usize> {
    let adj = forward(net);
    let mut dist: BTreeMap<&str, usize> = BTreeMap::from([(TOP, 0)]);
    let mut dq = VecDeque::from([TOP]);
    while let Some(u) = dq.pop_front() {
        let du = dist[u];
        for &(v, w) in adj.get(u).map(Vec::as_slice).unwrap_or(&[]) {
            if dist.get(v).is_none_or(|&dv| du + w < dv) {
                dist.insert(v, du + w);
                if w == 0 {
                    dq.push_front(v);
                } else {
                    dq.push_back(v);
                }
            }
        }
    }
    dist.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// The index of `x`, or `None` when no path from ⊤ reaches it.
pub fn d_index(net: &BipolarNet, x: &str) -> Option<DIndex> {
    let d1 = *d1_all(net).get(x)?;
    if x == TOP {
        return Some(DIndex { d1: 0, d2: 1 });
    }
    let adj = forward(net);
    let mut count = 0;
    let mut on_path = BTreeSet::from([TOP]);
    fn go<'a>(
        u: &'a str,
        cost: usize,
        x: &str,
        d1: usize,
        adj: &BTreeMap<&'a str, Vec<(&'a str, usize)>>,
        on_path: &mut BTreeSet<&'a str>,
        count: &mut usize,
    ) {
        if u == x {
            if cost == d1 {
                *count += 1;
            }
            return;
        }
        for &(v, w) in adj.get(u).map(Vec::as_slice).unwrap_or(&[]) {
            if cost + w <= d1 && on_path.insert(v) {
                go(v, cost + w, x, d1, adj, on_path, count);
                on_path.remove(v);
            }
        }
    }
    go(TOP, 0, x, d1, &adj, &mut on_path, &mut count);
    Some(DIndex { d1, d2: count })
}

/// Number of paths from ⊤ to `x` by length in nodes, with every node
/// occurring at most `max_occurrences` times.
pub fn d_table(net: &BipolarNet, x: &str, max_occurrences: usize) -> BTreeMap<usize, usize> {
    let adj = forward(net);
    let mut table = BTreeMap::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::from([(TOP, 1)]);
    fn go<'a>(
        u: &'a str,
        len: usize,
        x: &str,
        cap: usize,
        adj: &BTreeMap<&'a str, Vec<(&'a str, usize)>>,
        seen: &mut BTreeMap<&'a str, usize>,
        table: &mut BTreeMap<usize, usize>,
    ) {
        if u == x {
            *table.entry(len).or_default() += 1;
            return;
        }
        for &(v, _) in adj.get(u).map(Vec::as_slice).unwrap_or(&[]) {
            let c = seen.entry(v).or_default();
            if *c < cap {
                *c += 1;
                go(v, len + 1, x, cap, adj, seen, table);
                *seen.get_mut(v).unwrap() -= 1;
            }
        }
    }
    go(TOP, 1, x, max_occurrences, &adj, &mut seen, &mut table);
    table
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Priority {
    Stronger,
    Weaker,
    Indifferent,
}

/// Lexicographic comparison: fewer defeasible links, then more paths.
pub fn priority(x: DIndex, y: DIndex) -> Priority {
    match (x.d1.cmp(&y.d1), x.d2.cmp(&y.d2)) {
        (std::cmp::Ordering::Less, _) | (std::cmp::Ordering::Equal, std::cmp::Ordering::Greater) => Priority::Stronger,
        (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => Priority::Indifferent,
        _ => Priority::Weaker,
    }
}

/// Priority of node `x` over node `y`; an error when either index is undefined.
pub fn compare_nodes(net: &BipolarNet, x: &str, y: &str) -> Result<Priority> {
    let dx = d_index(net, x).ok_or_else(|| Error::Input(format!("`{x}` is not reachable from the truth node")))?;
    let dy = d_index(net, y).ok_or_else(|| Error::Input(format!("`{y}` is not reachable from the truth node")))?;
    Ok(priority(dx, dy))
}

// ---------------------------------------------------------------------------
// Case-table labellings

/// The value the case table gives `x` for the pair `(x, ¬x)`, or `None` when
/// strict attackers on both sides are in (the labelling is then rejected).
fn pair_value(net: &BipolarNet, lam: &Labelling, x: &str, nx: &str, prio: Priority) -> Option<Tri> {
    let split = |y: &str| {
        let mut s = Vec::new();
        let mut d = Vec::new();
        for (a, k) in net.outside_attackers(y) {
            match k {
                Kind::Strict => s.push(lam.at(a)),
                Kind::Defeasible => d.push(lam.at(a)),
            }
        }
        (s, d)
    };
    let (a, b) = split(nx);
    let (c, d) = split(x);
    let one = |v: &[Tri]| v.contains(&Tri::One);
    let half = |v: &[Tri]| v.contains(&Tri::Half);
    if one(&a) && one(&c) {
        return None;
    }
    Some(if one(&a) {
        Tri::One
    } else if one(&c) {
        Tri::Zero
    } else if half(&a) || half(&c) {
        Tri::Half
    } else {
        match prio {
            Priority::Stronger => {
                if one(&d) {
                    Tri::Zero
                } else if half(&d) {
                    Tri::Half
                } else if one(&b) {
                    Tri::One
                } else {
                    Tri::Half
                }
            }
            Priority::Weaker => {
                if one(&b) {
                    Tri::One
                } else if half(&b) {
                    Tri::Half
                } else if one(&d) {
                    Tri::Zero
                } else {
                    Tri::Half
                }
            }
            Priority::Indifferent => match (one(&b), one(&d)) {
                (true, false) => Tri::One,
                (false, true) => Tri::Zero,
                _ => Tri::Half,
            },
        }
    })
}

/// Priority within a pair; an unreachable member is weaker than a reachable one.
fn pair_priority(net: &BipolarNet, x: &str, nx: &str) -> Priority {
    match (d_index(net, x), d_index(net, nx)) {
        (Some(dx), Some(dn)) => priority(dx, dn),
        (Some(_), None) => Priority::Stronger,
        (None, Some(_)) => Priority::Weaker,
        (None, None) => Priority::Indifferent,
    }
}

/// Whether `lam` satisfies the case table at every pair, with ⊤ in, partners
/// summing to 1, auxiliary pairs following their outside attackers and plain
/// nodes following the usual labelling rule.
pub fn is_cg_labelling(net: &BipolarNet, lam: &Labelling) -> bool {
    if lam.get(TOP) != Some(Tri::One) || net.nodes.iter().any(|n| lam.get(n).is_none()) {
        return false;
    }
    for (x, nx) in &net.pairs {
        if lam.at(x) != lam.at(nx).not() {
            return false;
        }
        let want = if net.aux.contains(x) {
            net.outside_attackers(x).iter().map(|(a, _)| lam.at(a)).max().unwrap_or(Tri::Zero).not()
        } else {
            match pair_value(net, lam, x, nx, pair_priority(net, x, nx)) {
                Some(v) => v,
                None => return false,
            }
        };
        if lam.at(x) != want {
            return false;
        }
    }
    let paired: BTreeSet<&String> = net.pairs.iter().flat_map(|(x, n)| [x, n]).collect();
    net.nodes
        .iter()
        .filter(|n| *n != TOP && !paired.contains(n))
        .all(|n| lam.at(n) == net.attackers(n).iter().map(|(a, _)| lam.at(a)).max().unwrap_or(Tri::Zero).not())
}

/// All labellings passing [`is_cg_labelling`], enumerated one value per pair
/// (the partner follows) and per plain node.
pub fn cg_labellings(net: &BipolarNet) -> Vec<Labelling> {
    let paired: BTreeSet<&String> = net.pairs.iter().flat_map(|(x, n)| [x, n]).collect();
    let free: Vec<&String> =
        net.pairs.keys().chain(net.nodes.iter().filter(|n| *n != TOP && !paired.contains(n))).collect();
    let mut out = Vec::new();
    let mut code = vec![0usize; free.len()];
    loop {
        let mut lam = Labelling::new();
        lam.insert(TOP, Tri::One);
        for (n, &c) in free.iter().zip(&code) {
            lam.insert((*n).clone(), Tri::ALL[c]);
            if let Some(p) = net.pairs.get(*n) {
                lam.insert(p.clone(), Tri::ALL[c].not());
            }
        }
        if is_cg_labelling(net, &lam) {
            out.push(lam);
        }
        let mut i = 0;
        while i < code.len() {
            code[i] += 1;
            if code[i] < 3 {
                break;
            }
            code[i] = 0;
            i += 1;
        }
        if i == code.len() {
            break;
        }
    }
    out.sort();
    out
}
