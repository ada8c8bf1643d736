//! Boolean attack formations: sub-networks whose out node carries the Kleene
//! value of a formula over interface nodes.
//!
//! Interface nodes are host literal nodes: an atom `q` or its partner `~q`.
//! Formations for conjunctions contain the shared truth node [`TOP`], which
//! is not an auxiliary node of any formation.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::frames::{ArgFrame, Labelling};
use crate::kleene::{to_kleene_dnf, Formula, LiteralSet};
use crate::tri::Tri;
use crate::TOP;

/// The host node carrying the negation of atom `q`.
pub fn neg_node(q: &str) -> String {
    format!("~{q}")
}

/// The host node carrying literal `q` (positive) or `¬q`.
pub fn literal_node(q: &str, positive: bool) -> String {
    if positive {
        q.to_string()
    } else {
        neg_node(q)
    }
}

/// A formation together with the formula it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Baf {
    id: String,
    formula: Formula,
    literal_formula: Formula,
    input: String,
    output: String,
    aux: BTreeSet<String>,
    interface: BTreeSet<String>,
    attacks: BTreeSet<(String, String)>,
}

impl Baf {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Ψ over the atoms of the host.
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Ψ over interface node names, negative literals read through `~q`.
    pub fn literal_formula(&self) -> &Formula {
        &self.literal_formula
    }

    pub fn in_node(&self) -> &str {
        &self.input
    }

    pub fn out_node(&self) -> &str {
        &self.output
    }

    pub fn aux_nodes(&self) -> &BTreeSet<String> {
        &self.aux
    }

    pub fn interface(&self) -> &BTreeSet<String> {
        &self.interface
    }

    pub fn attacks(&self) -> &BTreeSet<(String, String)> {
        &self.attacks
    }

    /// Whether the formation attacks the shared truth node.
    pub fn uses_top(&self) -> bool {
        self.attacks.iter().any(|(_, t)| t == TOP)
    }

    /// Auxiliary, interface and (if used) truth nodes.
    pub fn nodes(&self) -> BTreeSet<String> {
        let mut all: BTreeSet<String> = self.aux.union(&self.interface).cloned().collect();
        if self.uses_top() {
            all.insert(TOP.to_string());
        }
        all
    }

    /// The value Ψ should give `out` under `lam`.
    pub fn psi(&self, lam: &Labelling) -> Result<Tri> {
        self.literal_formula.eval(lam)
    }

    /// The formation as a stand-alone frame, interface nodes left unattacked.
    pub fn to_frame(&self) -> Result<ArgFrame> {
        ArgFrame::new(self.nodes(), self.attacks.iter().cloned())
    }
}

impl fmt::Display for Baf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# formation {} for {}", self.id, self.formula)?;
        writeln!(f, "# in {} out {}", self.input, self.output)?;
        for n in self.nodes() {
            writeln!(f, "node {n}")?;
        }
        for (a, b) in &self.attacks {
            writeln!(f, "att {a} {b}")?;
        }
        Ok(())
    }
}

/// Mints `<id>.<role>` auxiliary nodes and collects edges.
struct Builder {
    id: String,
    aux: BTreeSet<String>,
    interface: BTreeSet<String>,
    attacks: BTreeSet<(String, String)>,
}

impl Builder {
    fn new(id: &str) -> Builder {
        Builder { id: id.to_string(), aux: BTreeSet::new(), interface: BTreeSet::new(), attacks: BTreeSet::new() }
    }

    fn node(&mut self, role: &str) -> String {
        let name = format!("{}.{role}", self.id);
        self.aux.insert(name.clone());
        name
    }

    fn host(&mut self, name: String) -> String {
        self.interface.insert(name.clone());
        name
    }

    fn att(&mut self, a: &str, b: &str) {
        self.attacks.insert((a.to_string(), b.to_string()));
    }

    fn absorb(&mut self, other: Baf) {
        self.aux.extend(other.aux);
        self.interface.extend(other.interface);
        self.attacks.extend(other.attacks);
    }

    fn finish(self, formula: Formula, literal_formula: Formula, input: String, output: String) -> Baf {
        Baf {
            id: self.id,
            formula,
            literal_formula,
            input,
            output,
            aux: self.aux,
            interface: self.interface,
            attacks: self.attacks,
        }
    }
}

/// `in ↠ x ↠ a ↠ y ↠ out`.
pub fn baf_atom(id: &str, a: &str) -> Baf {
    let mut b = Builder::new(id);
    let (i, x, y, o) = (b.node("in"), b.node("x"), b.node("y"), b.node("out"));
    let a = b.host(a.to_string());
    b.att(&i, &x);
    b.att(&x, &a);
    b.att(&a, &y);
    b.att(&y, &o);
    b.finish(Formula::atom(&a), Formula::atom(&a), i, o)
}

/// `in ↠ a ↠ out`.
pub fn baf_neg_literal(id: &str, a: &str) -> Baf {
    let mut b = Builder::new(id);
    let (i, o) = (b.node("in"), b.node("out"));
    let a = b.host(a.to_string());
    b.att(&i, &a);
    b.att(&a, &o);
    b.finish(Formula::atom(&a).not(), Formula::atom(&a).not(), i, o)
}

/// The conjunction formation over literal nodes (atom, polarity); the out
/// node is the minimum of the literal nodes.
pub fn baf_conj(id: &str, literals: &[(String, bool)]) -> Result<Baf> {
    if literals.is_empty() {
        return Err(Error::Input("a conjunction formation needs at least one literal".into()));
    }
    let mut b = Builder::new(id);
    let inp = b.node("in");
    let inn = b.node("inn");
    let v = b.node("v");
    let x = b.node("x");
    let xb = b.node("xb");
    let e = b.node("e");
    let u = b.node("u");
    let w = b.node("out");
    b.att(&inp, &inn);
    b.att(&inp, &v);
    b.att(&inn, &v);
    b.att(&inn, &x);
    b.att(&x, &xb);
    b.att(&x, &e);
    b.att(&e, &x);
    b.att(&xb, &e);
    b.att(&e, &xb);
    b.att(&e, TOP);
    b.att(&u, &xb);
    b.att(&v, &u);
    let mut lits = Vec::new();
    for (i, (q, positive)) in literals.iter().enumerate() {
        let k = i + 1;
        let a = b.host(literal_node(q, *positive));
        let na = b.node(&format!("na{k}"));
        let p = b.node(&format!("p{k}"));
        let bi = b.node(&format!("b{k}"));
        let nb = b.node(&format!("nb{k}"));
        b.att(&na, &u);
        b.att(&a, &na);
        b.att(&a, &p);
        b.att(&p, &bi);
        b.att(&bi, &nb);
        b.att(&nb, &a);
        b.att(&inp, &nb);
        b.att(&p, &w);
        lits.push(a);
    }
    let formula = Formula::and_all(literals.iter().map(|(q, pos)| {
        let f = Formula::atom(q);
        if *pos {
            f
        } else {
            f.not()
        }
    }));
    let literal_formula = Formula::and_all(lits.iter().map(Formula::atom));
    Ok(b.finish(formula, literal_formula, inp, w))
}

/// `k ↠ in`, `k ↠ out`: out is always 0.
fn baf_bot(id: &str) -> Baf {
    let mut b = Builder::new(id);
    let (i, k, o) = (b.node("in"), b.node("k"), b.node("out"));
    b.att(&k, &i);
    b.att(&k, &o);
    b.finish(Formula::Bot, Formula::Bot, i, o)
}

/// `in ↠ f ↠ ⊤`, out unattacked: attacking the formation is toxic.
fn baf_top(id: &str) -> Baf {
    let mut b = Builder::new(id);
    let (i, f, o) = (b.node("in"), b.node("f"), b.node("out"));
    b.att(&i, &f);
    b.att(&f, TOP);
    b.finish(Formula::Top, Formula::Top, i, o)
}

/// A formation for one conjunct. Inside a disjunction a lone negative literal
/// reads the host's `~q` node, so that an unattacked `in` leaves it free.
fn conjunct_baf(id: &str, c: &LiteralSet, top_level: bool) -> Result<Baf> {
    let lits: Vec<(String, bool)> = c.iter().map(|(q, p)| (q.clone(), *p)).collect();
    match lits.as_slice() {
        [] => Ok(baf_top(id)),
        [(q, true)] => Ok(baf_atom(id, q)),
        [(q, false)] if top_level => Ok(baf_neg_literal(id, q)),
        [(q, false)] => {
            let mut b = baf_atom(id, &neg_node(q));
            b.formula = Formula::atom(q).not();
            Ok(b)
        }
        _ => baf_conj(id, &lits),
    }
}

/// A stable identifier for a formula.
pub fn formula_id(phi: &Formula) -> String {
    let mut h = DefaultHasher::new();
    phi.to_string().hash(&mut h);
    format!("f{:08x}", h.finish() as u32)
}

/// A formation for any formula, through a Kleene-equivalent disjunctive
/// normal form. Several conjuncts are joined by `in ↠ m ↠ in_j` and
/// `out_j ↠ n ↠ out`.
pub fn baf_compose(id: &str, phi: &Formula) -> Result<Baf> {
    let dnf = to_kleene_dnf(phi)?;
    let mut baf = match dnf.as_slice() {
        [] => baf_bot(id),
        [c] => conjunct_baf(id, c, true)?,
        many => {
            let mut b = Builder::new(id);
            let (i, m, n, o) = (b.node("in"), b.node("m"), b.node("n"), b.node("out"));
            b.att(&i, &m);
            b.att(&n, &o);
            let mut parts = Vec::new();
            for (j, c) in many.iter().enumerate() {
                let sub = conjunct_baf(&format!("{id}.c{}", j + 1), c, false)?;
                b.att(&m, sub.in_node());
                b.att(sub.out_node(), &n);
                parts.push(sub.literal_formula.clone());
                b.absorb(sub);
            }
            b.finish(Formula::Top, Formula::or_all(parts), i, o)
        }
    };
    baf.formula = phi.clone();
    Ok(baf)
}

/// A breach of legitimate embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An auxiliary node other than `in` is attacked from outside its formation.
    ForeignAttack { from: String, to: String },
    /// An auxiliary node other than `out` attacks outside its formation.
    AttackOutward { from: String, to: String },
    /// `out` attacks a node of its own formation other than its `in`.
    OutAttacksInside { from: String, to: String },
    /// Two formations share an auxiliary node.
    SharedAux(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForeignAttack { from, to } => write!(f, "foreign attack {from} -> {to}"),
            Violation::AttackOutward { from, to } => write!(f, "auxiliary node attacks outside: {from} -> {to}"),
            Violation::OutAttacksInside { from, to } => write!(f, "out attacks inside: {from} -> {to}"),
            Violation::SharedAux(n) => write!(f, "auxiliary node {n} shared"),
        }
    }
}

/// Checks that every formation sits legitimately in `host`. An `out` node may
/// attack the `in` of its own formation (a self-attack of the instantiated node).
pub fn check_legitimate_embedding(host: &ArgFrame, bafs: &[Baf]) -> std::result::Result<(), Violation> {
    let mut seen = BTreeSet::new();
    for b in bafs {
        for n in &b.aux {
            if !seen.insert(n.as_str()) {
                return Err(Violation::SharedAux(n.clone()));
            }
        }
    }
    for (s, t) in host.attacks() {
        let edge = (s.to_string(), t.to_string());
        for b in bafs {
            let own = b.attacks.contains(&edge);
            if b.aux.contains(t) && t != b.input && !own {
                return Err(Violation::ForeignAttack { from: edge.0, to: edge.1 });
            }
            if b.aux.contains(s) && s != b.output && !own {
                return Err(Violation::AttackOutward { from: edge.0, to: edge.1 });
            }
            if s == b.output && t != b.input && (b.aux.contains(t) || b.interface.contains(t)) {
                return Err(Violation::OutAttacksInside { from: edge.0, to: edge.1 });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::enumerate_complete_labellings;
    use crate::kleene::parse_formula;
    use Tri::{Half, One, Zero};

    fn s(x: &str) -> String {
        x.to_string()
    }

    /// The formation with each interface atom paired with its negation and
    /// `in` attacked by a driver `alpha` carrying `alpha`'s value.
    fn hosted(baf: &Baf, alpha: Option<Tri>) -> ArgFrame {
        let mut nodes = baf.nodes();
        let mut attacks = baf.attacks().clone();
        for a in baf.interface() {
            let q = a.trim_start_matches('~');
            for n in [s(q), neg_node(q)] {
                nodes.insert(n);
            }
            attacks.insert((s(q), neg_node(q)));
            attacks.insert((neg_node(q), s(q)));
        }
        if let Some(v) = alpha {
            nodes.insert(s("alpha"));
            attacks.insert((s("alpha"), s(baf.in_node())));
            match v {
                Zero => {
                    nodes.insert(s("kill"));
                    attacks.insert((s("kill"), s("alpha")));
                }
                Half => {
                    attacks.insert((s("alpha"), s("alpha")));
                }
                One => {}
            }
        }
        ArgFrame::new(nodes, attacks).unwrap()
    }

    #[test]
    fn atom_chain() {
        let b = baf_atom("f", "a");
        assert_eq!(b.aux_nodes().len(), 4);
        assert_eq!(b.interface().iter().collect::<Vec<_>>(), vec!["a"]);
        assert!(!b.uses_top());
        let outs = |alpha| -> BTreeSet<(Tri, Tri)> {
            enumerate_complete_labellings(&hosted(&b, alpha)).iter().map(|l| (l.at("a"), l.at("f.out"))).collect()
        };
        assert_eq!(outs(None), [(Zero, Zero), (Half, Half), (One, One)].into());
        assert_eq!(outs(Some(One)), [(Zero, Zero)].into());
        assert!(outs(Some(Half)).iter().all(|&(a, o)| a == o && o < One));
    }

    #[test]
    fn negative_literal_chain() {
        let b = baf_neg_literal("f", "a");
        assert_eq!(b.formula(), &Formula::atom("a").not());
        let labs = enumerate_complete_labellings(&hosted(&b, None));
        assert!(labs.iter().all(|l| l.at("a") == Zero && l.at("f.out") == One));
        let labs = enumerate_complete_labellings(&hosted(&b, Some(One)));
        assert_eq!(labs.len(), 3);
        assert!(labs.iter().all(|l| l.at("f.out") == l.at("a").not()));
    }

    #[test]
    fn conjunction_size() {
        for n in 1..=4 {
            let lits: Vec<(String, bool)> = (1..=n).map(|i| (format!("a{i}"), i % 2 == 0)).collect();
            let b = baf_conj("c", &lits).unwrap();
            assert_eq!(b.nodes().len(), 9 + 5 * n);
            assert!(b.uses_top());
            assert!(b.interface().contains("~a1"));
        }
        assert!(baf_conj("c", &[]).is_err());
    }

    #[test]
    fn conjunction_out_is_a_minimum() {
        let b = baf_conj("c", &[(s("p"), true), (s("q"), false)]).unwrap();
        let lam: Labelling = [("p", One), ("~q", Half)].into_iter().map(|(n, v)| (s(n), v)).collect();
        assert_eq!(b.psi(&lam).unwrap(), Half);
        assert_eq!(b.formula().to_string(), "p ∧ ¬q");
    }

    #[test]
    fn compose_picks_the_smallest_shape() {
        let a = baf_compose("f", &Formula::atom("a")).unwrap();
        assert_eq!(a, baf_atom("f", "a"));
        let n = baf_compose("f", &parse_formula("~a").unwrap()).unwrap();
        assert_eq!(n.attacks(), baf_neg_literal("f", "a").attacks());
        let d = baf_compose("f", &parse_formula("a | ~b").unwrap()).unwrap();
        for (x, y) in [("f.in", "f.m"), ("f.m", "f.c1.in"), ("f.m", "f.c2.in"), ("f.c1.out", "f.n"), ("f.n", "f.out")] {
            assert!(d.attacks().contains(&(s(x), s(y))), "missing {x} -> {y}");
        }
        assert!(d.interface().contains("~b"));
        let bot = baf_compose("f", &parse_formula("a & ~a & false").unwrap()).unwrap();
        assert!(bot.attacks().contains(&(s("f.k"), s("f.out"))));
    }

    #[test]
    fn disjunction_tracks_the_maximum() {
        let d = baf_compose("f", &parse_formula("a | b").unwrap()).unwrap();
        let labs = enumerate_complete_labellings(&hosted(&d, None));
        assert_eq!(labs.len(), 9);
        assert!(labs.iter().all(|l| l.at("f.out") == l.at("a").max(l.at("b"))));
    }

    #[test]
    fn ids_are_stable() {
        let f = parse_formula("a & b").unwrap();
        assert_eq!(formula_id(&f), formula_id(&f.clone()));
        assert_ne!(formula_id(&f), formula_id(&parse_formula("a | b").unwrap()));
    }

    #[test]
    fn embedding_violations() {
        let b = baf_atom("f", "a");
        let host = |extra: &[(&str, &str)]| {
            let mut nodes = b.nodes();
            nodes.insert(s("h"));
            let attacks = b.attacks().iter().cloned().chain(extra.iter().map(|&(x, y)| (s(x), s(y))));
            ArgFrame::new(nodes, attacks).unwrap()
        };
        let bs = std::slice::from_ref(&b);
        assert_eq!(check_legitimate_embedding(&host(&[("h", "f.in"), ("h", "a"), ("f.out", "h")]), bs), Ok(()));
        assert_eq!(check_legitimate_embedding(&host(&[("f.out", "f.in")]), bs), Ok(()));
        assert_eq!(
            check_legitimate_embedding(&host(&[("h", "f.x")]), bs),
            Err(Violation::ForeignAttack { from: s("h"), to: s("f.x") })
        );
        assert_eq!(
            check_legitimate_embedding(&host(&[("f.y", "h")]), bs),
            Err(Violation::AttackOutward { from: s("f.y"), to: s("h") })
        );
        assert_eq!(
            check_legitimate_embedding(&host(&[("f.out", "a")]), bs),
            Err(Violation::OutAttacksInside { from: s("f.out"), to: s("a") })
        );
        let twin = baf_atom("f", "c");
        assert_eq!(check_legitimate_embedding(&host(&[]), &[b.clone(), twin]), Err(Violation::SharedAux(s("f.in"))));
    }
}
