//! Graphviz output. Only cover edges are drawn, bottom to top.

use std::fmt::Write;

use crate::bohr::BohrOpen;
use crate::cstar::ContextPoset;
use crate::order::{FinLattice, FinPoset};
use crate::state::TruthValue;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render(name: &str, p: &FinPoset, node: impl Fn(usize) -> (String, bool)) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for i in 0..p.len() {
        let (label, hl) = node(i);
        let style = if hl { ", style=filled, fillcolor=\"#9ecae1\"" } else { "" };
        writeln!(out, "  n{i} [label={}{style}];", quote(&label)).unwrap();
    }
    for (a, b) in p.hasse_edges() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn poset_dot(name: &str, p: &FinPoset) -> String {
    render(name, p, |i| (p.label(i).to_string(), false))
}

pub fn lattice_dot(name: &str, l: &FinLattice) -> String {
    poset_dot(name, l.poset())
}

/// The context poset with each node labelled by the atoms the open assigns it.
pub fn open_dot(name: &str, g: &BohrOpen) -> String {
    let p = g.poset();
    render(name, p.order(), |i| {
        let atoms: Vec<String> =
            (0..p.context(i).len()).filter(|a| g.value(i) >> a & 1 == 1).map(|a| a.to_string()).collect();
        (format!("{}\n[{}]", p.label(i), atoms.join(",")), g.value(i) != 0)
    })
}

/// The context poset with the contexts of a truth value filled.
pub fn truth_dot(name: &str, p: &ContextPoset, t: &TruthValue) -> String {
    render(name, p.order(), |i| (p.label(i).to_string(), t.contexts.contains(&i)))
}
