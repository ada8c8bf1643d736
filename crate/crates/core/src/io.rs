//! The directive-line text format shared by every network kind.
//!
//! ```text
//! # comment
//! node x
//! att x y
//! top                 # declares the truth node TOP
//! att TOP y
//! jatt a,b -> c       # joint attack
//! datt a -> b,c       # disjunctive attack
//! inst x := A(J) & ~B
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::cdnet::{CDNetwork, NodeSet};
use crate::error::{Error, Result};
use crate::frames::{check_user_name, ArgFrame, Labelling};
use crate::kleene::{parse_formula, Formula};
use crate::monadic::{parse_monadic, parse_s5, MFormula, S5Formula};
use crate::pipeline::InstantiatedFrame;
use crate::topnet::TopNet;
use crate::TOP;

/// A parsed network file; instantiation formulas are kept as text until the
/// logic is known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub nodes: BTreeSet<String>,
    pub attacks: Vec<(String, String)>,
    pub set_attacks: Vec<(NodeSet, NodeSet)>,
    pub has_top: bool,
    pub inst: BTreeMap<String, String>,
}

fn names(s: &str, has_top: bool, line: usize) -> Result<NodeSet> {
    s.split(',').map(|n| name(n.trim(), has_top, line)).collect::<Result<NodeSet>>().and_then(|set| {
        if set.is_empty() {
            Err(Error::Parse { line, msg: "empty node list".into() })
        } else {
            Ok(set)
        }
    })
}

fn name(n: &str, has_top: bool, line: usize) -> Result<String> {
    if has_top && n == TOP {
        return Ok(n.to_string());
    }
    check_user_name(n).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    Ok(n.to_string())
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut doc = Document::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = match raw.trim().split_once('#') {
                Some((b, _)) => b.trim(),
                None => raw.trim(),
            };
            if body.is_empty() {
                continue;
            }
            let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            match kw {
                "node" => {
                    doc.nodes.insert(name(rest, false, line)?);
                }
                "top" if rest.is_empty() => {
                    doc.has_top = true;
                    doc.nodes.insert(TOP.to_string());
                }
                "att" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [a, b] = parts[..] else { return Err(err("expected `att <from> <to>`")) };
                    let (a, b) = (name(a, doc.has_top, line)?, name(b, doc.has_top, line)?);
                    doc.nodes.insert(a.clone());
                    doc.nodes.insert(b.clone());
                    doc.attacks.push((a, b));
                }
                "jatt" | "datt" => {
                    let (l, r) = rest.split_once("->").ok_or_else(|| err("expected `->`"))?;
                    let (x, y) = (names(l, doc.has_top, line)?, names(r, doc.has_top, line)?);
                    if kw == "jatt" && y.len() != 1 {
                        return Err(err("a joint attack has one target"));
                    }
                    if kw == "datt" && x.len() != 1 {
                        return Err(err("a disjunctive attack has one source"));
                    }
                    doc.nodes.extend(x.iter().chain(&y).cloned());
                    doc.set_attacks.push((x, y));
                }
                "inst" => {
                    let (x, phi) = rest.split_once(":=").ok_or_else(|| err("expected `inst <node> := <formula>`"))?;
                    let x = name(x.trim(), doc.has_top, line)?;
                    if doc.inst.insert(x.clone(), phi.trim().to_string()).is_some() {
                        return Err(err(&format!("`{x}` instantiated twice")));
                    }
                }
                _ => return Err(err(&format!("unknown directive `{kw}`"))),
            }
        }
        Ok(doc)
    }

    /// The plain frame; set attacks are rejected.
    pub fn frame(&self) -> Result<ArgFrame> {
        if !self.set_attacks.is_empty() {
            return Err(Error::Input("set attacks need the `cd` commands".into()));
        }
        ArgFrame::new(self.nodes.iter().cloned(), self.attacks.clone())
    }

    pub fn topnet(&self) -> Result<TopNet> {
        if !self.has_top {
            return Err(Error::Input("a top-net needs the `top` directive".into()));
        }
        TopNet::new(self.frame()?, TOP)
    }

    /// Single attacks become singleton set attacks.
    pub fn cd_network(&self) -> Result<CDNetwork> {
        let single = self.attacks.iter().map(|(a, b)| (NodeSet::from([a.clone()]), NodeSet::from([b.clone()])));
        CDNetwork::new(self.nodes.iter().cloned(), single.chain(self.set_attacks.iter().cloned()))
    }

    fn parsed<F>(&self, parse: impl Fn(&str) -> Result<F>) -> Result<BTreeMap<String, F>> {
        self.inst.iter().map(|(x, s)| Ok((x.clone(), parse(s)?))).collect()
    }

    /// Propositional instantiation; nodes without `inst` lines get `v_<x>`.
    pub fn instantiated(&self) -> Result<InstantiatedFrame> {
        let frame = self.frame()?;
        let mut map = self.parsed(parse_formula)?;
        for x in frame.nodes() {
            map.entry(x.clone()).or_insert_with(|| Formula::atom(format!("v_{x}")));
        }
        InstantiatedFrame::new(frame, map)
    }

    pub fn monadic(&self) -> Result<BTreeMap<String, MFormula>> {
        self.parsed(parse_monadic)
    }

    pub fn s5(&self) -> Result<BTreeMap<String, S5Formula>> {
        self.parsed(parse_s5)
    }
}

/// A frame in directive form; `parse` reads it back to the same frame.
pub fn frame_text(frame: &ArgFrame) -> String {
    let mut out = String::new();
    if frame.contains(TOP) {
        out.push_str("top\n");
    }
    for x in frame.nodes().iter().filter(|x| *x != TOP) {
        let _ = writeln!(out, "node {x}");
    }
    let mut atts: Vec<(&str, &str)> = frame.attacks().collect();
    atts.sort();
    for (a, b) in atts {
        let _ = writeln!(out, "att {a} {b}");
    }
    out
}

/// One `{"node", "value"}` entry of a labelling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub node: String,
    pub value: &'static str,
}

/// Entries sorted by node name.
pub fn labelling_entries(lam: &Labelling) -> Vec<Entry> {
    lam.iter().map(|(n, v)| Entry { node: n.to_string(), value: v.label() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_directive() {
        let d = Document::parse(
            "# sample\nnode w\natt x y  # trailing\ntop\natt TOP y\njatt a,b -> c\ndatt a -> b,c\ninst x := A(J) & ~B\n",
        )
        .unwrap();
        assert!(d.has_top);
        assert_eq!(d.nodes.len(), 7);
        assert_eq!(d.attacks, vec![("x".into(), "y".into()), (TOP.into(), "y".into())]);
        assert_eq!(d.set_attacks.len(), 2);
        assert_eq!(d.inst["x"], "A(J) & ~B");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |text: &str| match Document::parse(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(line("node a\nfrob a"), 2);
        assert_eq!(line("att a"), 1);
        assert_eq!(line("node a\n\njatt a,b -> c,d"), 3);
        assert_eq!(line("datt a,b -> c"), 1);
        assert_eq!(line("inst a := p\ninst a := q"), 2);
        assert_eq!(line("inst a p"), 1);
    }

    #[test]
    fn top_needs_the_directive() {
        assert!(Document::parse("att TOP a").is_err());
        assert!(Document::parse("node STAR").is_err());
        assert!(Document::parse("att a b").unwrap().topnet().is_err());
    }

    #[test]
    fn set_attacks_need_cd() {
        let d = Document::parse("jatt a,b -> c").unwrap();
        assert!(d.frame().is_err());
        assert_eq!(d.cd_network().unwrap().attacks().len(), 1);
    }

    #[test]
    fn identity_atoms_fill_gaps() {
        let d = Document::parse("att x y\ninst x := p").unwrap();
        let inst = d.instantiated().unwrap();
        assert_eq!(inst.formula("x"), &Formula::atom("p"));
        assert_eq!(inst.formula("y"), &Formula::atom("v_y"));
    }

    #[test]
    fn frame_text_reads_back() {
        let f = Document::parse("top\natt b a\natt a TOP\nnode c").unwrap().frame().unwrap();
        let text = frame_text(&f);
        assert_eq!(text, "top\nnode a\nnode b\nnode c\natt a TOP\natt b a\n");
        assert_eq!(Document::parse(&text).unwrap().frame().unwrap(), f);
    }

    #[test]
    fn entries_are_sorted() {
        let lam: Labelling = [("b", crate::tri::Tri::Half), ("a", crate::tri::Tri::One)]
            .into_iter()
            .map(|(n, v)| (n.to_string(), v))
            .collect();
        let e = labelling_entries(&lam);
        assert_eq!(e[0], Entry { node: "a".into(), value: crate::tri::Tri::One.label() });
        assert_eq!(e[1].node, "b");
    }
}
