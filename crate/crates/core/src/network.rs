//! Matching three six-qubit network states to the networks that produced
//! them, using producibility bounds to lower-bound each state's depth.
//!
//! The networks share resources among at most 3 (net 1), 2 (net 2) and
//! 4 (net 3) nodes, so their states are 3-, 2- and 4-producible.

use std::fmt::Write as _;

use serde::Serialize;

use crate::collective::lhs_sum;
use crate::criteria::{depth_from_lhs, kprod_bound};
use crate::error::Result;
use crate::mum::mum_from_kappa;
use crate::skew::SParameter;
use crate::states::example37_states;

const NUM_SITES: usize = 6;

/// `(name, depth)` of each candidate network.
pub const NETWORKS: [(&str, usize); 3] = [("net1", 3), ("net2", 2), ("net3", 4)];

#[derive(Clone, Debug, Serialize)]
pub struct StateFinding {
    pub label: char,
    pub lhs: f64,
    /// Smallest `k` with `lhs ≤ I_k`.
    pub certified_depth: usize,
    /// Human-readable inequality chain, e.g. `I_1 < I_2 < I_b <= I_3`.
    pub chain: String,
    pub network: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NetworkDemoReport {
    pub kappa: f64,
    pub s: SParameter,
    /// `(k, I_k)` for `k = 1..5`.
    pub thresholds: Vec<(usize, f64)>,
    pub findings: Vec<StateFinding>,
}

impl NetworkDemoReport {
    pub fn network_of(&self, label: char) -> Option<&str> {
        self.findings.iter().find(|f| f.label == label).map(|f| f.network.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kappa = {}, s = {}", self.kappa, self.s);
        let ks: Vec<String> = self.thresholds.iter().map(|(k, v)| format!("I_{k} = {v}")).collect();
        let _ = writeln!(out, "thresholds: {}", ks.join(", "));
        for f in &self.findings {
            let _ = writeln!(
                out,
                "I_{} = {:.6}: {} => not {}-producible, depth >= {} => {}",
                f.label,
                f.lhs,
                f.chain,
                f.certified_depth.saturating_sub(1),
                f.certified_depth,
                f.network
            );
        }
        out
    }
}

fn chain(label: char, depth: usize) -> String {
    let mut parts: Vec<String> = (1..depth).map(|k| format!("I_{k}")).collect();
    parts.push(format!("I_{label}"));
    format!("{} <= I_{depth}", parts.join(" < "))
}

/// Computes `I_a, I_b, I_c` at `κ = 1`, certifies a depth lower bound for
/// each, and assigns networks: states are taken in order of decreasing
/// certified depth and each gets the shallowest unused network deep enough
/// to produce it.
pub fn network_depth_demo(s: SParameter) -> Result<NetworkDemoReport> {
    let kappa = 1.0;
    let mum = mum_from_kappa(2, kappa)?;
    let thresholds = (1..NUM_SITES)
        .map(|k| Ok((k, kprod_bound(NUM_SITES, 2, kappa, k)?)))
        .collect::<Result<Vec<_>>>()?;

    let (a, b, c) = example37_states();
    let mut findings = Vec::new();
    for (label, state) in [('a', a), ('b', b), ('c', c)] {
        let lhs = lhs_sum(&state.density()?, &mum, s, NUM_SITES)?;
        let cert = depth_from_lhs(lhs, NUM_SITES, 2, kappa)?;
        findings.push(StateFinding {
            label,
            lhs,
            certified_depth: cert.depth,
            chain: chain(label, cert.depth),
            network: String::new(),
        });
    }

    let mut order: Vec<usize> = (0..findings.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(findings[i].certified_depth));
    let mut used = [false; NETWORKS.len()];
    for i in order {
        let need = findings[i].certified_depth;
        let pick = NETWORKS
            .iter()
            .enumerate()
            .filter(|(j, (_, depth))| !used[*j] && *depth >= need)
            .min_by_key(|(_, (_, depth))| *depth);
        findings[i].network = match pick {
            Some((j, (name, _))) => {
                used[j] = true;
                (*name).to_owned()
            }
            None => "unassigned".to_owned(),
        };
    }

    Ok(NetworkDemoReport { kappa, s, thresholds, findings })
}
