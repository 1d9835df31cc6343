//! Provenance audit of a serene colouring.

use serde::Serialize;

use crate::pipeline::{Provenance, SereneColoring};
use crate::stream::StreamSummary;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SereneCheck {
    pub ok: bool,
    pub checked: usize,
    /// First offending vertex and what was wrong with it.
    pub first_violation: Option<(usize, String)>,
}

pub fn check_serene(phi: &SereneColoring, summary: &StreamSummary) -> SereneCheck {
    let mut checked = 0;
    for v in 0..phi.len() {
        let Some(c) = phi.get(v) else { continue };
        checked += 1;
        let problem = match phi.provenance(v) {
            None => Some(format!("colour {c} carries no provenance")),
            Some(Provenance::FromList(l)) => {
                (!summary.palettes.contains(l, v, c)).then(|| format!("colour {c} is not in {l:?}"))
            }
            Some(Provenance::NeighborhoodKnown) => (!summary.fallback && !summary.known.is_known(v))
                .then(|| format!("colour {c} claims a known neighbourhood that was never recovered")),
        };
        if let Some(p) = problem {
            return SereneCheck { ok: false, checked, first_violation: Some((v, p)) };
        }
    }
    SereneCheck { ok: true, checked, first_violation: None }
}
