//! Moving between an undirected graph and its orientations.

use super::{external_difference, verify_h_edf, SetFamily, VerificationReport, VerifyOptions};
use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::Group;

fn require_symmetric(h: &LabelledDigraph) -> Result<()> {
    if !h.is_symmetric() {
        return Err(Error::InvalidDigraph(
            "expected an undirected (edge-symmetric) graph".into(),
        ));
    }
    Ok(())
}

/// Whether `Delta(A_i, A_j) = Delta(A_j, A_i)` for every edge `{i, j}`.
pub fn check_symmetric_pairs(g: &Group, h: &LabelledDigraph, fam: &SetFamily) -> Result<bool> {
    require_symmetric(h)?;
    if fam.len() != h.vertex_count() {
        return Err(Error::SizeMismatch {
            family: fam.len(),
            digraph: h.vertex_count(),
        });
    }
    for &(i, j) in h.edges().iter().filter(|(i, j)| i < j) {
        if external_difference(g, fam.set(i), fam.set(j))? != external_difference(g, fam.set(j), fam.set(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies `orientation` of the undirected `h` at half the lambda that `h`
/// itself verifies with. When `h` fails, or its lambda is odd, the returned
/// report is the orientation checked with an inferred lambda.
pub fn orient_halving(
    g: &Group,
    h: &LabelledDigraph,
    fam: &SetFamily,
    orientation: &LabelledDigraph,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    require_symmetric(h)?;
    if !orientation.is_oriented() || !orientation.underlying_undirected().same_edges(h) {
        return Err(Error::InvalidDigraph("not an orientation of the given graph".into()));
    }
    let undirected = verify_h_edf(
        g,
        h,
        fam,
        &VerifyOptions {
            expected_lambda: None,
            ..opts.clone()
        },
    )?;
    let half = undirected.verified_lambda().filter(|l| l % 2 == 0).map(|l| l / 2);
    verify_h_edf(
        g,
        orientation,
        fam,
        &VerifyOptions {
            expected_lambda: half,
            ..opts.clone()
        },
    )
}

/// Verifies the underlying graph of an oriented `h_star`, at twice the
/// oriented lambda when the oriented check passes.
pub fn double_to_undirected(
    g: &Group,
    h_star: &LabelledDigraph,
    fam: &SetFamily,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if !h_star.is_oriented() {
        return Err(Error::InvalidDigraph("expected an oriented digraph".into()));
    }
    let oriented = verify_h_edf(g, h_star, fam, opts)?;
    let doubled = oriented.verified_lambda().map(|l| 2 * l);
    verify_h_edf(
        g,
        &h_star.underlying_undirected(),
        fam,
        &VerifyOptions {
            expected_lambda: doubled,
            ..opts.clone()
        },
    )
}
