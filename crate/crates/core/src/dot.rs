//! Graphviz output for covers.

use std::fmt::Write;

use crate::realtrop::{Colour, Colouring};
use crate::tropical::TropicalCover;

/// DOT source for a cover, drawn left to right. With a colouring, even
/// edges are red or blue and the pairs in `T` are dotted.
pub fn to_dot(c: &TropicalCover, name: &str, colouring: Option<&Colouring>) -> String {
    let r = c.r();
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
    s.push_str("  rankdir=LR;\n  node [shape=point];\n");
    for v in 1..=r {
        let _ = writeln!(s, "  x{v} [shape=circle, width=0.3, label=\"x{v}\"];");
    }
    for (i, e) in c.edges().iter().enumerate() {
        let from = if e.from == 0 {
            let _ = writeln!(s, "  l{i} [xlabel=\"λ {}\"];", e.weight);
            format!("l{i}")
        } else {
            format!("x{}", e.from)
        };
        let to = if e.to == r + 1 {
            let _ = writeln!(s, "  m{i} [xlabel=\"μ {}\"];", e.weight);
            format!("m{i}")
        } else {
            format!("x{}", e.to)
        };
        let mut attrs = vec![format!("label=\"{}\"", e.weight)];
        if let Some(rho) = colouring {
            match rho.edge_colour(i) {
                Some(Colour::Red) => attrs.push("color=red".into()),
                Some(Colour::Blue) => attrs.push("color=blue".into()),
                None => {}
            }
            if rho.in_t(i) {
                attrs.push("style=dotted".into());
            }
        }
        let _ = writeln!(s, "  {from} -> {to} [{}];", attrs.join(", "));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realtrop::enumerate_colourings;
    use crate::tropical::Edge;

    #[test]
    fn cycle_cover_dot() {
        // (6) -> (3,3) cycle -> (6)
        let c = TropicalCover::new(
            2,
            vec![Edge::new(0, 1, 6), Edge::new(1, 2, 3), Edge::new(1, 2, 3), Edge::new(2, 3, 6)],
        )
        .unwrap();
        let plain = to_dot(&c, "c", None);
        assert!(plain.starts_with("digraph \"c\" {"));
        assert_eq!(plain.matches("->").count(), 4);
        assert!(plain.contains("λ 6") && plain.contains("μ 6"));
        let rho = enumerate_colourings(&c)
            .into_iter()
            .find(|rho| !rho.t_rho.is_empty())
            .unwrap();
        let coloured = to_dot(&c, "c", Some(&rho));
        assert_eq!(coloured.matches("style=dotted").count(), 2);
        assert!(coloured.contains("color=red") || coloured.contains("color=blue"));
    }
}
