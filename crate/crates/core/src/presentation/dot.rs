use std::fmt::Write as _;

use super::GradedPresentation;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of the quiver. Arrows of degree 1 are drawn bold; all
/// other degrees use a plain stroke and carry the degree in the label when it
/// is not 0.
pub fn export_dot(pres: &GradedPresentation) -> String {
    let q = pres.quiver();
    let mut out = String::from("digraph presentation {\n");
    for v in q.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (i, a) in q.arrows().iter().enumerate() {
        let deg = pres.degree_of(i);
        let style = match deg {
            1 => ", style=bold, penwidth=2.5".to_string(),
            0 => String::new(),
            d => format!(", xlabel={}", quote(&format!("@{d}"))),
        };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, id={}{}];",
            quote(&q.vertices()[a.source]),
            quote(&q.vertices()[a.target]),
            quote(&a.label),
            quote(&a.id),
            style
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Quiver;

    #[test]
    fn degree_one_arrows_are_bold() {
        let q = Quiver::from_names(&["0", "1"], &[("a", "x1", "0", "1"), ("b", "x2", "0", "1")]).unwrap();
        let p = GradedPresentation::new(q, vec![1, 0], vec![]).unwrap();
        let dot = export_dot(&p);
        assert!(dot.contains("\"0\" -> \"1\" [label=\"x1\", id=\"a\", style=bold, penwidth=2.5];"));
        assert!(dot.contains("\"0\" -> \"1\" [label=\"x2\", id=\"b\"];"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
