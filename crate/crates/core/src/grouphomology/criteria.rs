use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::h2::h2_group;
use crate::config::Config;
use crate::error::Result;
use crate::groups::{normal_closure, weight_le_one, AbelianQuotient, FiniteGroup, FinitePresentation, GroupHom, Subgroup, Word};
use crate::ring::RingSpec;

/// A Moore space `M(G,1)` exists iff `H_2(G;Z) = 0`.
pub fn moore_criterion(g: &Arc<FiniteGroup>, cfg: &Config) -> Result<bool> {
    let h = h2_group(g, &RingSpec::Integers, cfg)?;
    Ok(h.is_zero() && !h.partial)
}

/// `H_1(G) = 0` and `H_2(G) = 0`.
pub fn homology_sphere_criterion(g: &Arc<FiniteGroup>, cfg: &Config) -> Result<bool> {
    if AbelianQuotient::of(g)?.order() != 1 {
        return Ok(false);
    }
    moore_criterion(g, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotVerdictKind {
    Refuted,
    PassNecessary,
    PassWithCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    pub index: usize,
    pub image_order: usize,
    /// An element of the image normally generating it, if any.
    pub weight_one_element: Option<usize>,
    /// Whether the witness image normally generates the probe image.
    pub witness_kills: Option<bool>,
    /// `H_2` of the image; informational, since a finite quotient's
    /// multiplier does not bound that of the group.
    pub image_h2: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KnotVerdict {
    pub verdict: KnotVerdictKind,
    pub h1: String,
    pub probes: Vec<ProbeResult>,
    /// Generators in the order the witness kills them.
    pub certificate: Option<Vec<String>>,
    pub notes: Vec<String>,
}

/// Letters of `w` with killed generators deleted, cyclically reduced.
fn strip(w: &Word, killed: &[bool]) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::new();
    for &(g, e) in w.letters() {
        if killed[g] {
            continue;
        }
        match out.last() {
            Some(&(h, f)) if h == g && f == -e => {
                out.pop();
            }
            _ => out.push((g, e)),
        }
    }
    while out.len() >= 2 && out[0].0 == out[out.len() - 1].0 && out[0].1 == -out[out.len() - 1].1 {
        out.pop();
        out.remove(0);
    }
    out
}

/// Tietze-style check that adding `witness` as a relator kills the group:
/// a relator reduced to one letter kills that generator.
pub fn witness_kills_presentation(p: &FinitePresentation, witness: &Word) -> Option<Vec<usize>> {
    let n = p.generator_count();
    let mut killed = vec![false; n];
    let mut order = Vec::new();
    let rels: Vec<&Word> = p.relators().iter().chain(std::iter::once(witness)).collect();
    loop {
        let mut progress = false;
        for r in &rels {
            if let [(g, _)] = strip(r, &killed)[..] {
                killed[g] = true;
                order.push(g);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    killed.iter().all(|&k| k).then_some(order)
}

/// Necessary conditions for `G` to be a knot group: `H_1 = Z`, weight one
/// and `H_2 = 0`. Refutations are sound; a witness that Tietze-kills the
/// presentation certifies weight one. `H_2 = 0` is not decided.
pub fn knot_group_criterion(
    p: &FinitePresentation,
    witness: Option<&Word>,
    probes: &[GroupHom],
    cfg: &Config,
) -> Result<KnotVerdict> {
    let h1 = p.abelianization(cfg.bit_bound)?;
    let h1_text = describe_h1(&h1);
    let mut notes = Vec::new();
    if h1 != [BigInt::from(0)] {
        notes.push(format!("H_1 = {h1_text}, not Z"));
        return Ok(KnotVerdict { verdict: KnotVerdictKind::Refuted, h1: h1_text, probes: Vec::new(), certificate: None, notes });
    }
    let mut results = Vec::new();
    let mut refuted = false;
    let mut witness_fails = false;
    for (index, hom) in probes.iter().enumerate() {
        let g = hom.target();
        let image = Subgroup::generated(g, hom.images());
        let (img, incl) = image.realize();
        let mut back = vec![usize::MAX; g.order()];
        for (i, &x) in incl.map().iter().enumerate() {
            back[x] = i;
        }
        let weight_one_element = weight_le_one(&img).map(|x| incl.apply(x));
        if weight_one_element.is_none() {
            refuted = true;
            notes.push(format!("probe {index}: image of order {} needs more than one normal generator", img.order()));
        }
        let witness_kills = witness.map(|w| normal_closure(&img, &[back[hom.eval(w)]]).is_whole());
        if witness_kills == Some(false) {
            witness_fails = true;
            notes.push(format!("probe {index}: witness does not normally generate the image"));
        }
        let image_h2 = h2_group(&img, &RingSpec::Integers, cfg).ok().map(|h| h.description);
        results.push(ProbeResult { index, image_order: img.order(), weight_one_element, witness_kills, image_h2 });
    }
    if refuted {
        return Ok(KnotVerdict { verdict: KnotVerdictKind::Refuted, h1: h1_text, probes: results, certificate: None, notes });
    }
    let certificate = match witness {
        Some(w) if !witness_fails => witness_kills_presentation(p, w),
        _ => None,
    };
    let verdict = if certificate.is_some() {
        KnotVerdictKind::PassWithCertificate
    } else {
        if witness.is_some() && !witness_fails {
            notes.push("witness did not reduce the presentation to the trivial group".into());
        }
        KnotVerdictKind::PassNecessary
    };
    notes.push("H_2 = 0 is not decided for infinite groups".into());
    let names = p.generator_names();
    let certificate = certificate.map(|c| c.into_iter().map(|g| names[g].clone()).collect());
    Ok(KnotVerdict { verdict, h1: h1_text, probes: results, certificate, notes })
}

fn describe_h1(factors: &[BigInt]) -> String {
    let free = factors.iter().filter(|d| **d == BigInt::from(0)).count();
    let torsion: Vec<BigInt> = factors.iter().filter(|d| **d != BigInt::from(0)).cloned().collect();
    crate::linalg::lattice::describe_group(free, &torsion, &RingSpec::Integers)
}
