//! Dynkin-style diagrams: one vertex per simple root, an arrow `i -> j`
//! labelled `a_ij` whenever that entry is nonzero.

use std::fmt::Write;

use num_traits::Zero;
use serde::Serialize;

use crate::cartan::{normalize, CartanDatum};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// even, `a_ii = 2`
    Circle,
    /// odd, `a_ii = 2`
    Bullet,
    /// odd, `a_ii = 0`
    Otimes,
    /// even, `a_ii = 0`
    Heisenberg,
}

impl VertexKind {
    pub fn of(d: &CartanDatum, i: usize) -> Self {
        match (d.p(i), d.entry(i, i).is_zero()) {
            (0, false) => VertexKind::Circle,
            (1, false) => VertexKind::Bullet,
            (1, true) => VertexKind::Otimes,
            _ => VertexKind::Heisenberg,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            VertexKind::Circle => "o",
            VertexKind::Bullet => "*",
            VertexKind::Otimes => "(x)",
            VertexKind::Heisenberg => "[]",
        }
    }

    fn dot_shape(self) -> &'static str {
        match self {
            VertexKind::Circle => "circle",
            VertexKind::Bullet => "point",
            VertexKind::Otimes => "doublecircle",
            VertexKind::Heisenberg => "square",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramDoc {
    pub vertices: Vec<(usize, VertexKind)>,
    pub edges: Vec<(usize, usize, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Dot,
}

pub fn diagram(d: &CartanDatum) -> DiagramDoc {
    let d = normalize(d);
    let n = d.n();
    let vertices = (0..n).map(|i| (i, VertexKind::of(&d, i))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !d.entry(i, j).is_zero() {
                edges.push((i, j, d.entry(i, j).clone()));
            }
        }
    }
    DiagramDoc { vertices, edges }
}

pub fn to_diagram(d: &CartanDatum, format: Format) -> String {
    let doc = diagram(d);
    match format {
        Format::Text => doc.to_text(),
        Format::Dot => doc.to_dot(),
    }
}

impl DiagramDoc {
    /// Vertices are numbered from 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(i, kind) in &self.vertices {
            let _ = write!(out, "{} {}", i + 1, kind.symbol());
            let arrows: Vec<String> = self
                .edges
                .iter()
                .filter(|e| e.0 == i)
                .map(|(_, j, a)| format!("{}:{}", j + 1, rational::format(a)))
                .collect();
            if !arrows.is_empty() {
                let _ = write!(out, " -> {}", arrows.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cartan {\n");
        for &(i, kind) in &self.vertices {
            let _ = writeln!(out, "  v{} [label=\"{}\", shape={}];", i + 1, i + 1, kind.dot_shape());
        }
        for (i, j, a) in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", i + 1, j + 1, rational::format(a));
        }
        out.push_str("}\n");
        out
    }

    pub fn kinds(&self) -> Vec<VertexKind> {
        self.vertices.iter().map(|v| v.1).collect()
    }

    pub fn label(&self, i: usize, j: usize) -> Rational {
        self.edges
            .iter()
            .find(|e| e.0 == i && e.1 == j)
            .map_or_else(|| int(0), |e| e.2.clone())
    }
}
