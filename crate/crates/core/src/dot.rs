//! Graphviz export: strict attacks solid, defeasible dashed, ⊤ double-circled.

use std::fmt::Write as _;

use crate::bipolar::{BipolarNet, Kind};
use crate::frames::ArgFrame;
use crate::TOP;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render<'a>(nodes: impl Iterator<Item = &'a String>, edges: Vec<(&'a str, &'a str, Kind)>) -> String {
    let mut out = String::from("digraph G {\n");
    for n in nodes {
        if n == TOP {
            let _ = writeln!(out, "  {} [shape=doublecircle, label=\"⊤\"];", quote(n));
        } else {
            let _ = writeln!(out, "  {};", quote(n));
        }
    }
    let mut edges = edges;
    edges.sort();
    for (a, b, k) in edges {
        let style = match k {
            Kind::Strict => "",
            Kind::Defeasible => " [style=dashed]",
        };
        let _ = writeln!(out, "  {} -> {}{};", quote(a), quote(b), style);
    }
    out.push_str("}\n");
    out
}

pub fn frame_dot(frame: &ArgFrame) -> String {
    render(frame.nodes().iter(), frame.attacks().map(|(a, b)| (a, b, Kind::Strict)).collect())
}

pub fn bipolar_dot(net: &BipolarNet) -> String {
    let s = net.strict().iter().map(|(a, b)| (a.as_str(), b.as_str(), Kind::Strict));
    let d = net.defeasible().iter().map(|(a, b)| (a.as_str(), b.as_str(), Kind::Defeasible));
    render(net.nodes().iter(), s.chain(d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipolar::{compile_theory, DefeasibleTheory};

    #[test]
    fn top_is_double_circled() {
        let f = ArgFrame::new(["a", TOP], [("a", TOP)]).unwrap();
        let d = frame_dot(&f);
        assert!(d.starts_with("digraph G {\n"));
        assert!(d.contains("\"TOP\" [shape=doublecircle, label=\"⊤\"];"));
        assert!(d.contains("\"a\" -> \"TOP\";"));
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }

    #[test]
    fn defeasible_edges_are_dashed() {
        let net = compile_theory(&DefeasibleTheory::parse("dfact: a").unwrap()).unwrap();
        let d = bipolar_dot(&net);
        assert!(d.contains("[style=dashed]"));
        assert!(d.ends_with("}\n"));
    }
}
