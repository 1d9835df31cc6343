use std::fmt::Write as _;

use serde::Serialize;

use super::Graph;

/// A partial colouring with colours in `1..=q`; `None` means uncoloured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    q: usize,
    colors: Vec<u32>,
}

impl PartialColoring {
    pub fn new(n: usize, q: usize) -> Self {
        PartialColoring { q, colors: vec![0; n] }
    }

    pub fn from_vec(q: usize, colors: Vec<Option<u32>>) -> Self {
        PartialColoring { q, colors: colors.into_iter().map(|c| c.unwrap_or(0)).collect() }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        match self.colors[v] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, v: usize, c: u32) {
        assert!(c >= 1, "colours are 1-based");
        self.colors[v] = c;
    }

    pub fn clear(&mut self, v: usize) {
        self.colors[v] = 0;
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }

    /// Text format: one `v color` line per vertex, `-` when uncoloured.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.colors.len() * 8);
        for (v, &c) in self.colors.iter().enumerate() {
            if c == 0 {
                let _ = writeln!(s, "{v} -");
            } else {
                let _ = writeln!(s, "{v} {c}");
            }
        }
        s
    }

    pub fn from_text(text: &str, n: usize, q: usize) -> Result<Self, String> {
        let mut out = PartialColoring::new(n, q);
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut it = line.split_whitespace();
            let (Some(v), Some(c), None) = (it.next(), it.next(), it.next()) else {
                return Err(format!("line {}: expected `v color`", i + 1));
            };
            let v: usize = v.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
            if v >= n {
                return Err(format!("line {}: vertex {v} out of range", i + 1));
            }
            if c != "-" {
                let c: u32 = c.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
                if c == 0 {
                    return Err(format!("line {}: colour 0 is not a colour", i + 1));
                }
                out.colors[v] = c;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub proper: bool,
    pub colors_used: usize,
    pub max_color: u32,
    pub uncolored_count: usize,
    pub first_violation: Option<(usize, usize)>,
    /// Every colour lies in `1..=q`.
    pub within_budget: bool,
}

impl ColoringReport {
    /// A complete, proper colouring inside the budget.
    pub fn is_valid_total(&self) -> bool {
        self.proper && self.within_budget && self.uncolored_count == 0
    }
}

pub fn verify_coloring(g: &Graph, c: &PartialColoring, q: usize) -> ColoringReport {
    assert_eq!(c.len(), g.n(), "colouring must be indexed over the graph's vertices");
    let first_violation = g.edges().find(|&(u, v)| matches!((c.get(u), c.get(v)), (Some(a), Some(b)) if a == b));
    let mut used: Vec<u32> = c.colors.iter().copied().filter(|&x| x != 0).collect();
    used.sort_unstable();
    used.dedup();
    let max_color = used.last().copied().unwrap_or(0);
    ColoringReport {
        proper: first_violation.is_none(),
        colors_used: used.len(),
        max_color,
        uncolored_count: c.len() - c.colored_count(),
        first_violation,
        within_budget: max_color as usize <= q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, 2, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_reports() {
        let ok = PartialColoring::from_vec(3, vec![Some(1), Some(2), Some(3)]);
        let r = verify_coloring(&triangle(), &ok, 3);
        assert!(r.proper && r.is_valid_total());
        assert_eq!(r.colors_used, 3);

        let bad = PartialColoring::from_vec(3, vec![Some(1), Some(1), Some(2)]);
        let r = verify_coloring(&triangle(), &bad, 3);
        assert!(!r.proper);
        assert_eq!(r.first_violation, Some((0, 1)));

        let over = PartialColoring::from_vec(2, vec![Some(1), Some(2), Some(3)]);
        assert!(!verify_coloring(&triangle(), &over, 2).within_budget);
    }

    #[test]
    fn text_round_trip() {
        let c = PartialColoring::from_vec(4, vec![Some(1), None, Some(4)]);
        let back = PartialColoring::from_text(&c.to_text(), 3, 4).unwrap();
        assert_eq!(back, c);
        assert!(PartialColoring::from_text("0 0\n", 1, 4).is_err());
    }
}
