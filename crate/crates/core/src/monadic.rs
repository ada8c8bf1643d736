//! Monadic predicate logic without equality, and modal S5: finite models,
//! quotients by type, type-set normal forms and their propositional images
//! over the type atoms `q_<bits>`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kleene::{lex, parse_binary, parse_unary, Connectives, Cursor, Formula, Tok};
use crate::limits::limits;

/// A term of a predicate application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

/// A monadic first-order formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MFormula {
    Top,
    Bot,
    Pred(String, Term),
    Not(Box<MFormula>),
    And(Box<MFormula>, Box<MFormula>),
    Or(Box<MFormula>, Box<MFormula>),
    Imp(Box<MFormula>, Box<MFormula>),
    Exists(String, Box<MFormula>),
    Forall(String, Box<MFormula>),
}

impl MFormula {
    pub fn pred(p: impl Into<String>, t: Term) -> MFormula {
        MFormula::Pred(p.into(), t)
    }

    pub fn not(self) -> MFormula {
        MFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: MFormula) -> MFormula {
        MFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: MFormula) -> MFormula {
        MFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn exists(v: impl Into<String>, body: MFormula) -> MFormula {
        MFormula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: MFormula) -> MFormula {
        MFormula::Forall(v.into(), Box::new(body))
    }

    fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a MFormula)) {
        f(self);
        match self {
            MFormula::Not(a) | MFormula::Exists(_, a) | MFormula::Forall(_, a) => a.walk(f),
            MFormula::And(a, b) | MFormula::Or(a, b) | MFormula::Imp(a, b) => {
                a.walk(f);
                b.walk(f)
            }
            _ => {}
        }
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |g| {
            if let MFormula::Pred(p, _) = g {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |g| {
            if let MFormula::Pred(_, Term::Const(c)) = g {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Variables occurring outside the scope of a binding quantifier.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &MFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                MFormula::Pred(_, Term::Var(v)) if !bound.contains(v) => {
                    out.insert(v.clone());
                }
                MFormula::Not(a) => go(a, bound, out),
                MFormula::And(a, b) | MFormula::Or(a, b) | MFormula::Imp(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out)
                }
                MFormula::Exists(v, a) | MFormula::Forall(v, a) => {
                    bound.push(v.clone());
                    go(a, bound, out);
                    bound.pop();
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
        }
    }
}

impl fmt::Display for MFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(g: &MFormula) -> u8 {
            match g {
                MFormula::Imp(..) => 1,
                MFormula::Or(..) => 2,
                MFormula::And(..) => 3,
                _ => 4,
            }
        }
        fn sub(f: &mut fmt::Formatter<'_>, g: &MFormula, min: u8) -> fmt::Result {
            if prec(g) < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        }
        match self {
            MFormula::Top => f.write_str("⊤"),
            MFormula::Bot => f.write_str("⊥"),
            MFormula::Pred(p, t) => write!(f, "{p}({t})"),
            MFormula::Not(a) => {
                f.write_str("¬")?;
                sub(f, a, 4)
            }
            MFormula::Exists(v, a) => {
                write!(f, "∃{v} ")?;
                sub(f, a, 4)
            }
            MFormula::Forall(v, a) => {
                write!(f, "∀{v} ")?;
                sub(f, a, 4)
            }
            MFormula::And(a, b) => {
                sub(f, a, 3)?;
                f.write_str(" ∧ ")?;
                sub(f, b, 4)
            }
            MFormula::Or(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" ∨ ")?;
                sub(f, b, 3)
            }
            MFormula::Imp(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" → ")?;
                sub(f, b, 1)
            }
        }
    }
}

impl Connectives for MFormula {
    fn not(a: Self) -> Self {
        a.not()
    }
    fn and(a: Self, b: Self) -> Self {
        a.and(b)
    }
    fn or(a: Self, b: Self) -> Self {
        a.or(b)
    }
    fn imp(a: Self, b: Self) -> Self {
        MFormula::Imp(Box::new(a), Box::new(b))
    }
}

/// Splits `P(t)` into predicate and term name.
fn split_application(word: &str) -> Result<(String, String)> {
    let err = || Error::Parse { line: 1, msg: format!("`{word}` is not a predicate application `P(t)`") };
    let open = word.find('(').ok_or_else(err)?;
    let inner = &word[open + 1..word.len() - 1];
    if open == 0 || !word.ends_with(')') || inner.is_empty() || inner.contains([',', '(', ')']) {
        return Err(err());
    }
    Ok((word[..open].to_string(), inner.to_string()))
}

/// A quantifier prefix: `∃x`, `∀x`, `E x.`, `A x.`, `exists x.`, `forall x.`.
fn quantifier(c: &mut Cursor) -> Option<(bool, String)> {
    let existential = match c.peek()? {
        Tok::Exists => true,
        Tok::Forall => false,
        Tok::Ident(w) if matches!(w.as_str(), "E" | "exists") => {
            if !matches!((c.peek_at(1), c.peek_at(2)), (Some(Tok::Ident(_)), Some(Tok::Dot))) {
                return None;
            }
            true
        }
        Tok::Ident(w) if matches!(w.as_str(), "A" | "forall") => {
            if !matches!((c.peek_at(1), c.peek_at(2)), (Some(Tok::Ident(_)), Some(Tok::Dot))) {
                return None;
            }
            false
        }
        _ => return None,
    };
    c.next();
    let Some(Tok::Ident(v)) = c.next() else { return None };
    c.eat(&Tok::Dot);
    Some((existential, v))
}

/// Terms are parsed as constants and resolved against binders afterwards.
fn m_primary(c: &mut Cursor) -> Result<MFormula> {
    let save = c.clone();
    if let Some((existential, v)) = quantifier(c) {
        let body = parse_unary(c, &mut m_primary)?;
        return Ok(if existential { MFormula::exists(v, body) } else { MFormula::forall(v, body) });
    }
    *c = save;
    match c.next() {
        Some(Tok::Top) => Ok(MFormula::Top),
        Some(Tok::Bot) => Ok(MFormula::Bot),
        Some(Tok::Ident(w)) => {
            let (p, t) = split_application(&w)?;
            Ok(MFormula::Pred(p, Term::Const(t)))
        }
        Some(Tok::LParen) => {
            let f = parse_binary(c, &mut m_primary)?;
            c.expect(&Tok::RParen)?;
            Ok(f)
        }
        _ => Err(c.error("expected a monadic formula")),
    }
}

fn bind(f: MFormula, bound: &mut Vec<String>) -> MFormula {
    match f {
        MFormula::Pred(p, Term::Const(t)) if bound.contains(&t) => MFormula::Pred(p, Term::Var(t)),
        MFormula::Not(a) => bind(*a, bound).not(),
        MFormula::And(a, b) => bind(*a, bound).and(bind(*b, bound)),
        MFormula::Or(a, b) => bind(*a, bound).or(bind(*b, bound)),
        MFormula::Imp(a, b) => MFormula::Imp(Box::new(bind(*a, bound)), Box::new(bind(*b, bound))),
        MFormula::Exists(v, a) => {
            bound.push(v.clone());
            let body = bind(*a, bound);
            bound.pop();
            MFormula::exists(v, body)
        }
        MFormula::Forall(v, a) => {
            bound.push(v.clone());
            let body = bind(*a, bound);
            bound.pop();
            MFormula::forall(v, body)
        }
        other => other,
    }
}

/// Parses a monadic formula. Quantifiers bind as tightly as `¬`; a term is a
/// variable when an enclosing quantifier binds it and a constant otherwise.
pub fn parse_monadic(s: &str) -> Result<MFormula> {
    let mut c = Cursor::new(lex(s)?);
    let f = parse_binary(&mut c, &mut m_primary)?;
    if !c.done() {
        return Err(c.error("trailing input"));
    }
    Ok(bind(f, &mut Vec::new()))
}

impl FromStr for MFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<MFormula> {
        parse_monadic(s)
    }
}

// ---------------------------------------------------------------------------
// Models

/// A bit per predicate, in predicate order.
pub type TypeVector = Vec<bool>;
/// A set of realized types.
pub type TypeSet = BTreeSet<TypeVector>;

/// A finite model: a domain, the extension of each predicate, and the
/// element each constant names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    pub domain: BTreeSet<String>,
    pub preds: BTreeMap<String, BTreeSet<String>>,
    pub constants: BTreeMap<String, String>,
}

impl FiniteModel {
    pub fn new(
        domain: BTreeSet<String>,
        preds: BTreeMap<String, BTreeSet<String>>,
        constants: BTreeMap<String, String>,
    ) -> Result<FiniteModel> {
        if domain.is_empty() {
            return Err(Error::Input("a model needs a non-empty domain".into()));
        }
        if let Some(e) = preds.values().flatten().chain(constants.values()).find(|e| !domain.contains(*e)) {
            return Err(Error::UnknownNode(e.clone()));
        }
        Ok(FiniteModel { domain, preds, constants })
    }

    /// The type of element `e` over `preds`.
    pub fn type_of(&self, e: &str, preds: &[String]) -> TypeVector {
        preds.iter().map(|p| self.preds.get(p).is_some_and(|s| s.contains(e))).collect()
    }

    /// The types realized in the model.
    pub fn realized(&self, preds: &[String]) -> TypeSet {
        self.domain.iter().map(|e| self.type_of(e, preds)).collect()
    }
}

/// Classical truth of a closed formula.
pub fn eval_model(m: &FiniteModel, phi: &MFormula) -> Result<bool> {
    fn go(m: &FiniteModel, f: &MFormula, env: &mut Vec<(String, String)>) -> Result<bool> {
        Ok(match f {
            MFormula::Top => true,
            MFormula::Bot => false,
            MFormula::Pred(p, t) => {
                let e = match t {
                    Term::Var(v) => env
                        .iter()
                        .rev()
                        .find(|(w, _)| w == v)
                        .map(|(_, e)| e.clone())
                        .ok_or_else(|| Error::Input(format!("free variable `{v}`")))?,
                    Term::Const(c) => m.constants.get(c).cloned().ok_or_else(|| Error::Unvalued(c.clone()))?,
                };
                m.preds.get(p).is_some_and(|s| s.contains(&e))
            }
            MFormula::Not(a) => !go(m, a, env)?,
            MFormula::And(a, b) => go(m, a, env)? && go(m, b, env)?,
            MFormula::Or(a, b) => go(m, a, env)? || go(m, b, env)?,
            MFormula::Imp(a, b) => !go(m, a, env)? || go(m, b, env)?,
            MFormula::Exists(v, a) | MFormula::Forall(v, a) => {
                let want = matches!(f, MFormula::Exists(..));
                for e in &m.domain {
                    env.push((v.clone(), e.clone()));
                    let r = go(m, a, env);
                    env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
    go(m, phi, &mut Vec::new())
}

/// The quotient by sameness of type: one element per realized type (the least
/// name of its class); constants follow their elements.
pub fn quotient(m: &FiniteModel) -> FiniteModel {
    let preds: Vec<String> = m.preds.keys().cloned().collect();
    let mut rep: BTreeMap<TypeVector, String> = BTreeMap::new();
    for e in &m.domain {
        rep.entry(m.type_of(e, &preds)).or_insert_with(|| e.clone());
    }
    let class = |e: &str| rep[&m.type_of(e, &preds)].clone();
    let domain: BTreeSet<String> = rep.values().cloned().collect();
    let ext = m.preds.iter().map(|(p, s)| (p.clone(), s.iter().map(|e| class(e)).collect())).collect();
    let constants = m.constants.iter().map(|(c, e)| (c.clone(), class(e))).collect();
    FiniteModel { domain, preds: ext, constants }
}

/// `0`/`1` string of a type vector.
pub fn bits(t: &[bool]) -> String {
    t.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The type atom `q_<bits>` standing for `∃x α_ε(x)`.
pub fn type_atom(t: &[bool]) -> String {
    format!("q_{}", bits(t))
}

/// All `2^n` type vectors in counting order.
pub fn all_types(n: usize) -> Vec<TypeVector> {
    (0..1usize << n).map(|k| (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect()).collect()
}

/// All non-empty sets of types over `n` predicates.
pub fn all_type_sets(n: usize) -> Vec<TypeSet> {
    let types = all_types(n);
    (1..1usize << types.len())
        .map(|mask| types.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect())
        .collect()
}

/// The canonical model of `gamma`: the types themselves, `ε ∈ D_i` iff `e_i`.
pub fn canonical_model(preds: &[String], gamma: &TypeSet, constants: &BTreeMap<String, TypeVector>) -> FiniteModel {
    let domain = gamma.iter().map(|t| bits(t)).collect();
    let ext = preds
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), gamma.iter().filter(|t| t[i]).map(|t| bits(t)).collect()))
        .collect();
    let constants = constants.iter().map(|(c, t)| (c.clone(), bits(t))).collect();
    FiniteModel { domain, preds: ext, constants }
}

fn check_preds(n: usize) -> Result<()> {
    let cap = limits().monadic_preds;
    if n > cap {
        return Err(Error::Limit(format!("{n} predicates exceed the cap of {cap}")));
    }
    Ok(())
}

/// The type sets whose canonical models satisfy the closed, constant-free
/// formula `phi`, over predicates `preds` (which must cover those of `phi`).
pub fn normal_form(phi: &MFormula, preds: &[String]) -> Result<Vec<TypeSet>> {
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(Error::Input(format!("free variable `{v}`; declare it as a constant")));
    }
    if let Some(c) = phi.constants().into_iter().next() {
        return Err(Error::Input(format!("constant `{c}`; use the normal form with constants")));
    }
    Ok(normal_form_with_constants(phi, preds, &[])?.into_iter().map(|(g, _)| g).collect())
}

/// Truth values of the constant atoms `P(c)`.
pub type ConstantLiterals = BTreeMap<String, bool>;

/// Pairs `(Γ, β)` such that `Φ_Γ ∧ β` implies `phi`, where `β` fixes every
/// `P(c)`. Together they cover exactly the models of `phi`.
pub fn normal_form_with_constants(
    phi: &MFormula,
    preds: &[String],
    constants: &[String],
) -> Result<Vec<(TypeSet, ConstantLiterals)>> {
    check_preds(preds.len())?;
    if let Some(p) = phi.predicates().into_iter().find(|p| !preds.contains(p)) {
        return Err(Error::Input(format!("predicate `{p}` not declared")));
    }
    if let Some(c) = phi.constants().into_iter().find(|c| !constants.contains(c)) {
        return Err(Error::Input(format!("constant `{c}` not declared")));
    }
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(Error::Input(format!("free variable `{v}`; declare it as a constant")));
    }
    let mut out = Vec::new();
    for gamma in all_type_sets(preds.len()) {
        let members: Vec<&TypeVector> = gamma.iter().collect();
        // Odometer over the type of each constant.
        let mut pick = vec![0usize; constants.len()];
        loop {
            let assign: BTreeMap<String, TypeVector> =
                constants.iter().zip(&pick).map(|(c, &k)| (c.clone(), members[k].clone())).collect();
            let m = canonical_model(preds, &gamma, &assign);
            if eval_model(&m, phi)? {
                let beta = assign
                    .iter()
                    .flat_map(|(c, t)| preds.iter().zip(t).map(move |(p, &b)| (format!("{p}({c})"), b)))
                    .collect();
                out.push((gamma.clone(), beta));
            }
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < members.len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// `Φ*_Γ = ⋀_{ε∈Γ} q_ε ∧ ⋀_{ε∉Γ} ¬q_ε`.
pub fn type_set_formula(gamma: &TypeSet, n: usize) -> Formula {
    Formula::and_all(all_types(n).into_iter().map(|t| {
        let q = Formula::atom(type_atom(&t));
        if gamma.contains(&t) {
            q
        } else {
            q.not()
        }
    }))
}

fn literals(beta: &ConstantLiterals) -> impl Iterator<Item = Formula> + '_ {
    beta.iter().map(|(a, &b)| if b { Formula::atom(a.clone()) } else { Formula::atom(a.clone()).not() })
}

/// `⋁ (Φ*_Γ ∧ β)` over the normal form.
pub fn propositionalize(nf: &[(TypeSet, ConstantLiterals)], n: usize) -> Formula {
    Formula::or_all(
        nf.iter().map(|(g, beta)| Formula::and_all(std::iter::once(type_set_formula(g, n)).chain(literals(beta)))),
    )
}

/// `⋁_ε q_ε`: some type is realized.
pub fn domain_nonempty(n: usize) -> Formula {
    Formula::or_all(all_types(n).iter().map(|t| Formula::atom(type_atom(t))))
}

/// Propositional images of a family of formulas over their joint predicates
/// and constants, so type atoms mean the same thing at every node.
pub fn propositionalize_instantiation(inst: &BTreeMap<String, MFormula>) -> Result<BTreeMap<String, Formula>> {
    let preds: Vec<String> =
        inst.values().flat_map(MFormula::predicates).collect::<BTreeSet<_>>().into_iter().collect();
    let consts: Vec<String> =
        inst.values().flat_map(MFormula::constants).collect::<BTreeSet<_>>().into_iter().collect();
    check_preds(preds.len())?;
    inst.iter()
        .map(|(x, f)| Ok((x.clone(), propositionalize(&normal_form_with_constants(f, &preds, &consts)?, preds.len()))))
        .collect()
}

/// Whether `a` attacks `b` by the syntactic monadic pattern: `¬∃v P(v)`
/// against `P(c)`, and `∀v P(v)` against `¬P(c)`.
pub fn pattern_attacks(a: &MFormula, b: &MFormula) -> bool {
    let plain = |v: &str, body: &MFormula| matches!(body, MFormula::Pred(_, Term::Var(w)) if w == v);
    match a {
        MFormula::Not(inner) => match inner.as_ref() {
            MFormula::Exists(v, body) if plain(v, body) => {
                let MFormula::Pred(p, _) = body.as_ref() else { return false };
                matches!(b, MFormula::Pred(q, Term::Const(_)) if q == p)
            }
            _ => false,
        },
        MFormula::Forall(v, body) if plain(v, body) => {
            let MFormula::Pred(p, _) = body.as_ref() else { return false };
            matches!(b, MFormula::Not(nb) if matches!(nb.as_ref(), MFormula::Pred(q, Term::Const(_)) if q == p))
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// S5

/// A modal formula over propositional atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum S5Formula {
    Top,
    Bot,
    Atom(String),
    Not(Box<S5Formula>),
    And(Box<S5Formula>, Box<S5Formula>),
    Or(Box<S5Formula>, Box<S5Formula>),
    Imp(Box<S5Formula>, Box<S5Formula>),
    Dia(Box<S5Formula>),
    Box(Box<S5Formula>),
}

impl S5Formula {
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &S5Formula, out: &mut BTreeSet<String>) {
            match f {
                S5Formula::Atom(a) => {
                    out.insert(a.clone());
                }
                S5Formula::Not(a) | S5Formula::Dia(a) | S5Formula::Box(a) => go(a, out),
                S5Formula::And(a, b) | S5Formula::Or(a, b) | S5Formula::Imp(a, b) => {
                    go(a, out);
                    go(b, out)
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }
}

impl Connectives for S5Formula {
    fn not(a: Self) -> Self {
        S5Formula::Not(Box::new(a))
    }
    fn and(a: Self, b: Self) -> Self {
        S5Formula::And(Box::new(a), Box::new(b))
    }
    fn or(a: Self, b: Self) -> Self {
        S5Formula::Or(Box::new(a), Box::new(b))
    }
    fn imp(a: Self, b: Self) -> Self {
        S5Formula::Imp(Box::new(a), Box::new(b))
    }
}

fn s5_primary(c: &mut Cursor) -> Result<S5Formula> {
    match c.next() {
        Some(Tok::Top) => Ok(S5Formula::Top),
        Some(Tok::Bot) => Ok(S5Formula::Bot),
        Some(Tok::Ident(a)) => Ok(S5Formula::Atom(a)),
        Some(Tok::Diamond) => Ok(S5Formula::Dia(Box::new(parse_unary(c, &mut s5_primary)?))),
        Some(Tok::Box) => Ok(S5Formula::Box(Box::new(parse_unary(c, &mut s5_primary)?))),
        Some(Tok::LParen) => {
            let f = parse_binary(c, &mut s5_primary)?;
            c.expect(&Tok::RParen)?;
            Ok(f)
        }
        _ => Err(c.error("expected a modal formula")),
    }
}

/// Parses `◇`/`<>` and `□`/`[]` as unary operators over the propositional grammar.
pub fn parse_s5(s: &str) -> Result<S5Formula> {
    let mut c = Cursor::new(lex(s)?);
    let f = parse_binary(&mut c, &mut s5_primary)?;
    if !c.done() {
        return Err(c.error("trailing input"));
    }
    Ok(f)
}

impl FromStr for S5Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<S5Formula> {
        parse_s5(s)
    }
}

/// Truth at world `w` of the universal S5 frame on the worlds `gamma`; worlds
/// are valuations of `atoms` in order.
pub fn eval_s5(phi: &S5Formula, atoms: &[String], gamma: &TypeSet, w: &TypeVector) -> Result<bool> {
    Ok(match phi {
        S5Formula::Top => true,
        S5Formula::Bot => false,
        S5Formula::Atom(a) => {
            let i = atoms.iter().position(|b| b == a).ok_or_else(|| Error::Unvalued(a.clone()))?;
            w[i]
        }
        S5Formula::Not(a) => !eval_s5(a, atoms, gamma, w)?,
        S5Formula::And(a, b) => eval_s5(a, atoms, gamma, w)? && eval_s5(b, atoms, gamma, w)?,
        S5Formula::Or(a, b) => eval_s5(a, atoms, gamma, w)? || eval_s5(b, atoms, gamma, w)?,
        S5Formula::Imp(a, b) => !eval_s5(a, atoms, gamma, w)? || eval_s5(b, atoms, gamma, w)?,
        S5Formula::Dia(a) => {
            for v in gamma {
                if eval_s5(a, atoms, gamma, v)? {
                    return Ok(true);
                }
            }
            false
        }
        S5Formula::Box(a) => {
            for v in gamma {
                if !eval_s5(a, atoms, gamma, v)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Pairs `(ε, Γ)`, `ε ∈ Γ`, at which `phi` holds.
pub fn s5_normal_form(phi: &S5Formula, atoms: &[String]) -> Result<Vec<(TypeVector, TypeSet)>> {
    check_preds(atoms.len())?;
    if let Some(a) = phi.atoms().into_iter().find(|a| !atoms.contains(a)) {
        return Err(Error::Unvalued(a));
    }
    let mut out = Vec::new();
    for gamma in all_type_sets(atoms.len()) {
        for w in &gamma {
            if eval_s5(phi, atoms, &gamma, w)? {
                out.push((w.clone(), gamma.clone()));
            }
        }
    }
    Ok(out)
}

/// `⋁ (β'_ε ∧ Φ*_Γ)`, where `β'_ε` fixes the atoms at the actual world.
pub fn propositionalize_s5(nf: &[(TypeVector, TypeSet)], atoms: &[String]) -> Formula {
    Formula::or_all(nf.iter().map(|(w, g)| {
        let actual = atoms
            .iter()
            .zip(w)
            .map(|(a, &b)| if b { Formula::atom(a.clone()) } else { Formula::atom(a.clone()).not() });
        Formula::and_all(actual.chain(std::iter::once(type_set_formula(g, atoms.len()))))
    }))
}

/// Propositional images of a family of S5 formulas over their joint atoms.
pub fn propositionalize_s5_instantiation(inst: &BTreeMap<String, S5Formula>) -> Result<BTreeMap<String, Formula>> {
    let atoms: Vec<String> = inst.values().flat_map(S5Formula::atoms).collect::<BTreeSet<_>>().into_iter().collect();
    inst.iter().map(|(x, f)| Ok((x.clone(), propositionalize_s5(&s5_normal_form(f, &atoms)?, &atoms)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::Var("x".into())
    }

    fn model(domain: &[&str], p: &[&str], consts: &[(&str, &str)]) -> FiniteModel {
        FiniteModel::new(
            domain.iter().map(|s| s.to_string()).collect(),
            BTreeMap::from([("P".to_string(), p.iter().map(|s| s.to_string()).collect())]),
            consts.iter().map(|(c, e)| (c.to_string(), e.to_string())).collect(),
        )
        .unwrap()
    }

    fn preds(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_binds_variables() {
        assert_eq!(parse_monadic("∃xP(x)").unwrap(), MFormula::exists("x", MFormula::pred("P", x())));
        assert_eq!(parse_monadic("P(c)").unwrap(), MFormula::pred("P", Term::Const("c".into())));
        let f = parse_monadic("∀x (P(x) -> Q(x)) & Q(d)").unwrap();
        assert_eq!(f.predicates(), ["P", "Q"].map(String::from).into());
        assert_eq!(f.constants(), ["d".to_string()].into());
        assert!(f.free_vars().is_empty());
        assert!(parse_monadic("∃x").is_err());
    }

    #[test]
    fn evaluation() {
        let m = model(&["e0", "e1"], &["e0"], &[("c", "e1")]);
        let t = |s: &str| eval_model(&m, &parse_monadic(s).unwrap()).unwrap();
        assert!(t("∃xP(x)"));
        assert!(!t("∀xP(x)"));
        assert!(!t("P(c)"));
        assert!(t("∃x(P(x) & ~P(c))"));
        assert!(FiniteModel::new(BTreeSet::new(), BTreeMap::new(), BTreeMap::new()).is_err());
    }

    #[test]
    fn quotient_keeps_one_element_per_type() {
        let m = model(&["a", "b", "c"], &["a", "b"], &[("k", "b")]);
        let q = quotient(&m);
        assert_eq!(q.domain, ["a", "c"].map(String::from).into());
        assert_eq!(q.constants["k"], "a");
        assert_eq!(q.realized(&preds(&["P"])), m.realized(&preds(&["P"])));
    }

    #[test]
    fn types_and_atoms() {
        assert_eq!(all_types(2), vec![vec![false, false], vec![false, true], vec![true, false], vec![true, true]]);
        assert_eq!(all_type_sets(2).len(), 15);
        assert_eq!(type_atom(&[true, false]), "q_10");
        assert_eq!(domain_nonempty(1).to_string(), "q_0 ∨ q_1");
    }

    #[test]
    fn normal_forms() {
        let p = preds(&["P"]);
        let some = normal_form(&parse_monadic("∃xP(x)").unwrap(), &p).unwrap();
        assert_eq!(some.len(), 2);
        assert!(some.iter().all(|g| g.contains(&vec![true])));
        let all = normal_form(&parse_monadic("∀xP(x)").unwrap(), &p).unwrap();
        assert_eq!(all, vec![TypeSet::from([vec![true]])]);
        assert!(normal_form(&parse_monadic("P(c)").unwrap(), &p).is_err());
        let nf = normal_form_with_constants(&parse_monadic("P(c)").unwrap(), &p, &["c".to_string()]).unwrap();
        assert!(nf.iter().all(|(_, beta)| beta["P(c)"]));
        assert_eq!(nf.len(), 2);
    }

    #[test]
    fn predicate_cap() {
        let names: Vec<String> = (0..=limits().monadic_preds).map(|i| format!("P{i}")).collect();
        assert!(matches!(normal_form(&MFormula::Top, &names), Err(Error::Limit(_))));
    }

    #[test]
    fn syntactic_patterns() {
        let f = |s: &str| parse_monadic(s).unwrap();
        assert!(pattern_attacks(&f("¬∃xP(x)"), &f("P(c)")));
        assert!(pattern_attacks(&f("∀xP(x)"), &f("¬P(c)")));
        assert!(!pattern_attacks(&f("∃xP(x)"), &f("P(c)")));
        assert!(!pattern_attacks(&f("¬∃xP(x)"), &f("Q(c)")));
    }

    #[test]
    fn s5_worlds() {
        let atoms = preds(&["p"]);
        let dia = parse_s5("<>p").unwrap();
        assert_eq!(dia, S5Formula::Dia(Box::new(S5Formula::Atom("p".into()))));
        assert_eq!(s5_normal_form(&dia, &atoms).unwrap().len(), 3);
        let nec = parse_s5("[]p").unwrap();
        assert_eq!(s5_normal_form(&nec, &atoms).unwrap(), vec![(vec![true], TypeSet::from([vec![true]]))]);
        let both = TypeSet::from([vec![false], vec![true]]);
        assert!(eval_s5(&parse_s5("~p & ◇p").unwrap(), &atoms, &both, &vec![false]).unwrap());
        assert!(s5_normal_form(&parse_s5("q").unwrap(), &atoms).is_err());
    }
}
