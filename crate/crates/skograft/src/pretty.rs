//! Text renderings for reading proofs by eye.
//!
//! Tableaux are drawn top-down, one line per rule with the formulas it
//! adds. GS3 proofs are drawn as stacked inferences: premises above a rule
//! line, the conclusion below it, branches side by side.

use std::fmt::Write;

use skograft_core::formula::Formula;
use skograft_core::gs3::{GsProof, GsRule, NodeId};
use skograft_core::tableau::{ClosedTableau, RuleKind, Tableau};
use skograft_core::Path;

fn list(fs: &[Formula]) -> String {
    fs.iter().map(Formula::print).collect::<Vec<_>>().join(", ")
}

fn tableau_lines(t: &Tableau, p: &Path, indent: &str, out: &mut String) {
    let node = t.node(p).expect("node of the tree");
    let Some(rule) = node.rule() else {
        let _ = writeln!(out, "{indent}(open)");
        return;
    };
    match rule.kind {
        RuleKind::Closure => {
            let (a, b) = rule.closure_pair.as_ref().expect("closure pair");
            let _ = writeln!(out, "{indent}closed on {a} and {b}");
        }
        RuleKind::Beta => {
            let _ = writeln!(out, "{indent}beta on {}", rule.principal);
            for (i, added) in rule.introduced.iter().enumerate() {
                let last = i + 1 == rule.introduced.len();
                let _ = writeln!(out, "{indent}{} {}", if last { "`--" } else { "|--" }, list(added));
                let deeper = format!("{indent}{}", if last { "    " } else { "|   " });
                tableau_lines(t, &p.child(i as u8), &deeper, out);
            }
        }
        kind => {
            let mut extra = String::new();
            if let Some(m) = rule.meta {
                extra = format!(" with {m}");
            }
            if let Some(s) = &rule.skolem {
                extra = format!(" with {s}");
            }
            let _ = writeln!(out, "{indent}{kind}{extra}: {}", list(&rule.introduced[0]));
            tableau_lines(t, &p.child(0), indent, out);
        }
    }
}

/// The tableau from the root down, then the store and the unifier.
pub fn render_tableau(closed: &ClosedTableau) -> String {
    let t = closed.tableau();
    let mut out = String::new();
    let _ = writeln!(out, "{}", list(t.root().formulas()));
    tableau_lines(t, &Path::root(), "  ", &mut out);
    for c in closed.store().iter() {
        let _ = writeln!(out, "constraint {c}");
    }
    for line in closed.unifier().to_lines() {
        let _ = writeln!(out, "unifier {line}");
    }
    out
}

/// A rectangle of text lines, all of the same width.
struct Block {
    lines: Vec<String>,
    width: usize,
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, left: usize, total: usize) -> String {
    let mut out = " ".repeat(left);
    out.push_str(s);
    let w = width(&out);
    out.push_str(&" ".repeat(total.saturating_sub(w)));
    out
}

fn side_by_side(blocks: Vec<Block>) -> Block {
    const GAP: usize = 3;
    let height = blocks.iter().map(|b| b.lines.len()).max().unwrap_or(0);
    let width = blocks.iter().map(|b| b.width).sum::<usize>() + GAP * blocks.len().saturating_sub(1);
    let mut lines = vec![String::new(); height];
    for (i, b) in blocks.iter().enumerate() {
        let offset = height - b.lines.len();
        for (row, line) in lines.iter_mut().enumerate() {
            if i > 0 {
                line.push_str(&" ".repeat(GAP));
            }
            match row.checked_sub(offset) {
                Some(k) => line.push_str(&b.lines[k]),
                None => line.push_str(&" ".repeat(b.width)),
            }
        }
    }
    Block { lines, width }
}

fn label(rule: &GsRule) -> String {
    match rule {
        GsRule::Weaken { dropped } => format!("w {}", list(dropped)),
        r => match r.witness() {
            Some(w) => format!("{} {w}", r.name()),
            None => r.name().to_string(),
        },
    }
}

fn gs3_block(proof: &GsProof, id: NodeId) -> Block {
    let node = proof.node(id);
    let conclusion = format!("{} |-", list(node.sequent()));
    let Some(inf) = node.inference() else {
        let w = width(&conclusion);
        return Block { lines: vec![conclusion], width: w };
    };
    let above = side_by_side(node.children().iter().map(|&c| gs3_block(proof, c)).collect());
    let bar = above.width.max(width(&conclusion));
    let tag = format!(" {}", label(&inf.rule));
    let total = bar + width(&tag);
    let mut lines: Vec<String> = above.lines.iter().map(|l| pad(l, (bar - above.width) / 2, total)).collect();
    lines.push(pad(&format!("{}{tag}", "-".repeat(bar)), 0, total));
    lines.push(pad(&conclusion, (bar - width(&conclusion)) / 2, total));
    Block { lines, width: total }
}

/// The proof in stacked form, root at the bottom.
pub fn render_gs3(proof: &GsProof) -> String {
    let mut out = String::new();
    for line in gs3_block(proof, proof.root()).lines {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
