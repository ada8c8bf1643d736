//! Three-valued Kleene propositional logic: formulas, parsing, evaluation,
//! valuation enumeration, equation solving and disjunctive normal forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frames::Valuation;
use crate::limits::limits;
use crate::pipeline::InstantiatedFrame;
use crate::tri::Tri;

/// A propositional formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn imp(self, rhs: Formula) -> Formula {
        Formula::Imp(Box::new(self), Box::new(rhs))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Kleene value under `v`; every atom must be valued.
    pub fn eval(&self, v: &Valuation) -> Result<Tri> {
        match self {
            Formula::Top => Ok(Tri::One),
            Formula::Bot => Ok(Tri::Zero),
            Formula::Atom(a) => v.get(a).ok_or_else(|| Error::Unvalued(a.clone())),
            Formula::Not(a) => Ok(a.eval(v)?.not()),
            Formula::And(a, b) => Ok(a.eval(v)?.min(b.eval(v)?)),
            Formula::Or(a, b) => Ok(a.eval(v)?.max(b.eval(v)?)),
            Formula::Imp(a, b) => Ok(a.eval(v)?.not().max(b.eval(v)?)),
        }
    }

    /// Kleene value with atoms looked up through `f`.
    pub fn eval_with(&self, f: &dyn Fn(&str) -> Tri) -> Tri {
        match self {
            Formula::Top => Tri::One,
            Formula::Bot => Tri::Zero,
            Formula::Atom(a) => f(a),
            Formula::Not(a) => a.eval_with(f).not(),
            Formula::And(a, b) => a.eval_with(f).min(b.eval_with(f)),
            Formula::Or(a, b) => a.eval_with(f).max(b.eval_with(f)),
            Formula::Imp(a, b) => a.eval_with(f).not().max(b.eval_with(f)),
        }
    }

    /// Replaces atoms by formulas; unmapped atoms stay.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Not(a) => a.substitute(map).not(),
            Formula::And(a, b) => a.substitute(map).and(b.substitute(map)),
            Formula::Or(a, b) => a.substitute(map).or(b.substitute(map)),
            Formula::Imp(a, b) => a.substitute(map).imp(b.substitute(map)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, c: &Formula, min: u8| {
            if c.prec() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            Formula::Top => f.write_str("⊤"),
            Formula::Bot => f.write_str("⊥"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(a) => {
                f.write_str("¬")?;
                sub(f, a, 4)
            }
            Formula::And(a, b) => {
                sub(f, a, 3)?;
                f.write_str(" ∧ ")?;
                sub(f, b, 4)
            }
            Formula::Or(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" ∨ ")?;
                sub(f, b, 3)
            }
            Formula::Imp(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" → ")?;
                sub(f, b, 1)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse_formula(s)
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Dot,
    Top,
    Bot,
    Exists,
    Forall,
    Diamond,
    Box,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(s: &str) -> Result<Vec<Tok>> {
    let err = |msg: String| Error::Parse { line: 1, msg };
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let two: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match c {
            _ if c.is_whitespace() => i += 1,
            '¬' | '~' | '!' => {
                out.push(Tok::Not);
                i += 1
            }
            '∧' | '&' => {
                out.push(Tok::And);
                i += 1
            }
            '∨' | '|' => {
                out.push(Tok::Or);
                i += 1
            }
            '→' => {
                out.push(Tok::Imp);
                i += 1
            }
            '↔' => {
                out.push(Tok::Iff);
                i += 1
            }
            '⊤' => {
                out.push(Tok::Top);
                i += 1
            }
            '⊥' => {
                out.push(Tok::Bot);
                i += 1
            }
            '∃' | '∀' => {
                out.push(if c == '∃' { Tok::Exists } else { Tok::Forall });
                i += 1;
                // The bound variable: one letter and optional digits, so `∃xA(x)` splits.
                while i < chars.len() && chars[i].is_whitespace() {
                    i += 1;
                }
                if i < chars.len() && chars[i].is_ascii_alphabetic() {
                    let start = i;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push(Tok::Ident(chars[start..i].iter().collect()));
                }
            }
            '◇' => {
                out.push(Tok::Diamond);
                i += 1
            }
            '□' => {
                out.push(Tok::Box);
                i += 1
            }
            '.' => {
                out.push(Tok::Dot);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '<' if two.starts_with("<->") => {
                out.push(Tok::Iff);
                i += 3
            }
            '<' if two.starts_with("<>") => {
                out.push(Tok::Diamond);
                i += 2
            }
            '-' if two.starts_with("->") => {
                out.push(Tok::Imp);
                i += 2
            }
            '[' if two.starts_with("[]") => {
                out.push(Tok::Box);
                i += 2
            }
            _ if ident_char(c) => {
                let start = i;
                while i < chars.len() && ident_char(chars[i]) {
                    i += 1;
                }
                // A parenthesised suffix directly attached to a name belongs to it: `A(J)`.
                if i < chars.len() && chars[i] == '(' {
                    let mut depth = 0;
                    let mut j = i;
                    while j < chars.len() {
                        match chars[j] {
                            '(' => depth += 1,
                            ')' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            ch if ident_char(ch) || ch == ',' => {}
                            ch => return Err(err(format!("unexpected `{ch}` inside atom"))),
                        }
                        j += 1;
                    }
                    if depth != 0 {
                        return Err(err("unbalanced parentheses in atom".into()));
                    }
                    i = j + 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(match word.as_str() {
                    "true" => Tok::Top,
                    "false" => Tok::Bot,
                    _ => Tok::Ident(word),
                });
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

#[derive(Clone)]
pub(crate) struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Tok>) -> Cursor {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {t:?}")))
        }
    }

    pub fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, what: &str) -> Error {
        let found = match self.peek() {
            Some(t) => format!("{t:?}"),
            None => "end of input".into(),
        };
        Error::Parse { line: 1, msg: format!("{what}, found {found}") }
    }
}

/// Generic precedence-climbing parser shared by the propositional and
/// first-order grammars. `primary` parses unary-level items.
pub(crate) trait Connectives: Sized {
    fn not(a: Self) -> Self;
    fn and(a: Self, b: Self) -> Self;
    fn or(a: Self, b: Self) -> Self;
    fn imp(a: Self, b: Self) -> Self;
}

pub(crate) fn parse_binary<T: Connectives + Clone>(
    c: &mut Cursor,
    primary: &mut dyn FnMut(&mut Cursor) -> Result<T>,
) -> Result<T> {
    let lhs = parse_imp(c, primary)?;
    if c.eat(&Tok::Iff) {
        let rhs = parse_binary(c, primary)?;
        return Ok(T::and(T::imp(lhs.clone(), rhs.clone()), T::imp(rhs, lhs)));
    }
    Ok(lhs)
}

fn parse_imp<T: Connectives + Clone>(c: &mut Cursor, primary: &mut dyn FnMut(&mut Cursor) -> Result<T>) -> Result<T> {
    let lhs = parse_or(c, primary)?;
    if c.eat(&Tok::Imp) {
        let rhs = parse_imp(c, primary)?;
        return Ok(T::imp(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or<T: Connectives + Clone>(c: &mut Cursor, primary: &mut dyn FnMut(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut lhs = parse_and(c, primary)?;
    while c.eat(&Tok::Or) {
        lhs = T::or(lhs, parse_and(c, primary)?);
    }
    Ok(lhs)
}

fn parse_and<T: Connectives + Clone>(c: &mut Cursor, primary: &mut dyn FnMut(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut lhs = parse_unary(c, primary)?;
    while c.eat(&Tok::And) {
        lhs = T::and(lhs, parse_unary(c, primary)?);
    }
    Ok(lhs)
}

pub(crate) fn parse_unary<T: Connectives + Clone>(
    c: &mut Cursor,
    primary: &mut dyn FnMut(&mut Cursor) -> Result<T>,
) -> Result<T> {
    if c.eat(&Tok::Not) {
        return Ok(T::not(parse_unary(c, primary)?));
    }
    primary(c)
}

impl Connectives for Formula {
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
        a.imp(b)
    }
}

fn prop_primary(c: &mut Cursor) -> Result<Formula> {
    match c.next() {
        Some(Tok::Top) => Ok(Formula::Top),
        Some(Tok::Bot) => Ok(Formula::Bot),
        Some(Tok::Ident(a)) => Ok(Formula::Atom(a)),
        Some(Tok::LParen) => {
            let f = parse_binary(c, &mut prop_primary)?;
            c.expect(&Tok::RParen)?;
            Ok(f)
        }
        _ => {
            c.pos -= 1;
            Err(c.error("expected a formula"))
        }
    }
}

/// Parses infix syntax with precedence `¬ > ∧ > ∨ > →` (and `↔` loosest).
pub fn parse_formula(s: &str) -> Result<Formula> {
    let mut c = Cursor::new(lex(s)?);
    let f = parse_binary(&mut c, &mut prop_primary)?;
    if !c.done() {
        return Err(c.error("trailing input"));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Valuations and equations

/// Which truth values valuations range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    TwoValued,
    ThreeValued,
}

impl Domain {
    pub fn values(self) -> &'static [Tri] {
        match self {
            Domain::TwoValued => &Tri::CRISP,
            Domain::ThreeValued => &Tri::ALL,
        }
    }
}

/// All valuations of `atoms` over `domain`, in canonical order.
pub fn valuations(atoms: &BTreeSet<String>, domain: Domain) -> impl Iterator<Item = Valuation> {
    let names: Vec<String> = atoms.iter().cloned().collect();
    let vals = domain.values();
    let total = vals.len().pow(names.len() as u32);
    (0..total).map(move |mut code| {
        let mut digits = vec![0; names.len()];
        for d in digits.iter_mut().rev() {
            *d = code % vals.len();
            code /= vals.len();
        }
        names.iter().cloned().zip(digits.into_iter().map(|d| vals[d])).collect()
    })
}

/// All three-valued valuations of `atoms`, in canonical order.
pub fn enumerate_valuations(atoms: &BTreeSet<String>) -> impl Iterator<Item = Valuation> {
    valuations(atoms, Domain::ThreeValued)
}

/// Equalities of truth value between formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquationSystem {
    pub equations: Vec<(Formula, Formula)>,
}

impl EquationSystem {
    pub fn new(equations: Vec<(Formula, Formula)>) -> Self {
        EquationSystem { equations }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.equations.iter().flat_map(|(l, r)| l.atoms().into_iter().chain(r.atoms())).collect()
    }

    /// Parses `lhs == rhs` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut eqs = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let relocate = |e: Error| match e {
                Error::Parse { msg, .. } => Error::Parse { line: no + 1, msg },
                other => other,
            };
            let (l, r) =
                line.split_once("==").ok_or(Error::Parse { line: no + 1, msg: "expected `lhs == rhs`".into() })?;
            eqs.push((parse_formula(l).map_err(relocate)?, parse_formula(r).map_err(relocate)?));
        }
        Ok(EquationSystem::new(eqs))
    }

    pub fn holds(&self, v: &Valuation) -> bool {
        self.equations.iter().all(|(l, r)| l.eval(v).ok() == r.eval(v).ok())
    }
}

/// Every valuation over `domain` satisfying all equations.
pub fn solve_equations(sys: &EquationSystem, domain: Domain) -> Vec<Valuation> {
    valuations(&sys.atoms(), domain).filter(|v| sys.holds(v)).collect()
}

/// The equations `I(x) = ⋀ ¬I(y)` over the attackers `y` of each node.
pub fn node_equations(inst: &InstantiatedFrame) -> EquationSystem {
    let frame = inst.frame();
    let eqs = frame
        .nodes()
        .iter()
        .map(|x| {
            let rhs = Formula::and_all(frame.attackers_of(x).into_iter().map(|y| inst.formula(y).clone().not()));
            (inst.formula(x).clone(), rhs)
        })
        .collect();
    EquationSystem::new(eqs)
}

/// Three-valued solutions of the node equations.
pub fn equational_extensions(inst: &InstantiatedFrame) -> Vec<Valuation> {
    solve_equations(&node_equations(inst), Domain::ThreeValued)
}

/// Two-valued models of `s ≡ F(s)`.
pub fn adf_models(conditions: &BTreeMap<String, Formula>) -> Vec<Valuation> {
    let sys = EquationSystem::new(conditions.iter().map(|(s, f)| (Formula::atom(s.clone()), f.clone())).collect());
    let mut atoms = sys.atoms();
    atoms.extend(conditions.keys().cloned());
    valuations(&atoms, Domain::TwoValued).filter(|v| sys.holds(v)).collect()
}

/// Valuations solving `I(s) = C_s(y / I(y))` for every node `s`.
pub fn di_models(
    inst: &BTreeMap<String, Formula>,
    conditions: &BTreeMap<String, Formula>,
    domain: Domain,
) -> Vec<Valuation> {
    let sys = EquationSystem::new(
        conditions
            .iter()
            .map(|(s, c)| {
                let lhs = inst.get(s).cloned().unwrap_or_else(|| Formula::atom(s.clone()));
                (lhs, c.substitute(inst))
            })
            .collect(),
    );
    let mut atoms = sys.atoms();
    for f in inst.values() {
        atoms.extend(f.atoms());
    }
    valuations(&atoms, domain).filter(|v| sys.holds(v)).collect()
}

// ---------------------------------------------------------------------------
// Disjunctive normal form

/// A consistent conjunction of literals: atom → polarity.
pub type Conjunct = BTreeMap<String, bool>;

/// A disjunction of consistent conjuncts. `[]` is `⊥`; `[{}]` is `⊤`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dnf {
    pub conjuncts: Vec<Conjunct>,
}

impl Dnf {
    fn from_vec(mut conjuncts: Vec<Conjunct>) -> Dnf {
        conjuncts.sort();
        conjuncts.dedup();
        Dnf { conjuncts }
    }

    pub fn is_bot(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.conjuncts.iter().any(Conjunct::is_empty)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or_all(self.conjuncts.iter().map(conjunct_formula))
    }

    pub fn eval(&self, v: &Valuation) -> Result<Tri> {
        self.to_formula().eval(v)
    }

    /// Whether some conjunct appears in both.
    pub fn shares_conjunct(&self, other: &Dnf) -> bool {
        self.conjuncts.iter().any(|c| other.conjuncts.contains(c))
    }
}

pub fn conjunct_formula(c: &Conjunct) -> Formula {
    Formula::and_all(c.iter().map(|(a, &pos)| {
        let f = Formula::atom(a.clone());
        if pos {
            f
        } else {
            f.not()
        }
    }))
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

fn check_atom_limit(atoms: usize) -> Result<()> {
    let cap = limits().dnf_atoms;
    if atoms > cap {
        return Err(Error::Limit(format!("{atoms} atoms exceed the DNF cap of {cap}")));
    }
    Ok(())
}

/// Classically equivalent DNF with contradictory conjuncts dropped.
pub fn to_dnf(phi: &Formula) -> Result<Dnf> {
    check_atom_limit(phi.atoms().len())?;
    Ok(Dnf::from_vec(dnf_of(phi, true)))
}

fn dnf_of(phi: &Formula, positive: bool) -> Vec<Conjunct> {
    match (phi, positive) {
        (Formula::Top, true) | (Formula::Bot, false) => vec![Conjunct::new()],
        (Formula::Top, false) | (Formula::Bot, true) => vec![],
        (Formula::Atom(a), pol) => vec![Conjunct::from([(a.clone(), pol)])],
        (Formula::Not(a), pol) => dnf_of(a, !pol),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => product(&dnf_of(a, positive), &dnf_of(b, positive)),
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            let mut v = dnf_of(a, positive);
            v.extend(dnf_of(b, positive));
            v
        }
        (Formula::Imp(a, b), true) => {
            let mut v = dnf_of(a, false);
            v.extend(dnf_of(b, true));
            v
        }
        (Formula::Imp(a, b), false) => product(&dnf_of(a, true), &dnf_of(b, false)),
    }
}

fn product(xs: &[Conjunct], ys: &[Conjunct]) -> Vec<Conjunct> {
    let mut out = Vec::new();
    for x in xs {
        'pair: for y in ys {
            let mut c = x.clone();
            for (a, &p) in y {
                if let Some(&q) = c.get(a) {
                    if q != p {
                        continue 'pair;
                    }
                }
                c.insert(a.clone(), p);
            }
            out.push(c);
        }
    }
    out
}

/// The full DNF of `phi` over `atoms`: one complete conjunct per satisfying
/// two-valued valuation.
pub fn to_full_dnf(phi: &Formula, atoms: &BTreeSet<String>) -> Result<Dnf> {
    check_atom_limit(atoms.len())?;
    if let Some(a) = phi.atoms().iter().find(|a| !atoms.contains(*a)) {
        return Err(Error::Unvalued(a.clone()));
    }
    let rows = valuations(atoms, Domain::TwoValued)
        .filter(|v| phi.eval(v).ok() == Some(Tri::One))
        .map(|v| v.iter().map(|(a, t)| (a.to_string(), t == Tri::One)).collect())
        .collect();
    Ok(Dnf::from_vec(rows))
}

/// A conjunction of literals that may contain both `q` and `¬q`.
pub type LiteralSet = BTreeSet<(String, bool)>;

/// A DNF equivalent to `phi` in three-valued Kleene logic: distribution and
/// De Morgan only, so complementary literals are kept.
pub fn to_kleene_dnf(phi: &Formula) -> Result<Vec<LiteralSet>> {
    check_atom_limit(phi.atoms().len())?;
    let mut v = kdnf(phi, true);
    v.sort();
    v.dedup();
    Ok(v)
}

fn kdnf(phi: &Formula, positive: bool) -> Vec<LiteralSet> {
    match (phi, positive) {
        (Formula::Top, true) | (Formula::Bot, false) => vec![LiteralSet::new()],
        (Formula::Top, false) | (Formula::Bot, true) => vec![],
        (Formula::Atom(a), pol) => vec![LiteralSet::from([(a.clone(), pol)])],
        (Formula::Not(a), pol) => kdnf(a, !pol),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => kproduct(&kdnf(a, positive), &kdnf(b, positive)),
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            let mut v = kdnf(a, positive);
            v.extend(kdnf(b, positive));
            v
        }
        (Formula::Imp(a, b), true) => {
            let mut v = kdnf(a, false);
            v.extend(kdnf(b, true));
            v
        }
        (Formula::Imp(a, b), false) => kproduct(&kdnf(a, true), &kdnf(b, false)),
    }
}

fn kproduct(xs: &[LiteralSet], ys: &[LiteralSet]) -> Vec<LiteralSet> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| x.union(y).cloned().collect())).collect()
}
