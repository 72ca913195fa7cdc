//! Exact posteriors by enumeration under hard and virtual evidence.
//!
//! A virtual finding is a likelihood vector over one variable's states. The
//! unnormalized weight of a full assignment is its chain-product joint times
//! every applicable likelihood entry; hard findings zero out contradicting
//! assignments. Posteriors are ratios of such weights, so likelihood vectors
//! only matter up to a positive scale.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::{self, Projection, Strategy};
use crate::error::{Error, Result};
use crate::model::{Assignment, Network};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardFinding {
    pub var: String,
    pub state: String,
}

impl HardFinding {
    pub fn new(var: impl Into<String>, state: impl Into<String>) -> Self {
        HardFinding {
            var: var.into(),
            state: state.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirtualFinding {
    pub var: String,
    pub likelihood: BTreeMap<String, f64>,
}

impl VirtualFinding {
    pub fn new<K: Into<String>>(
        var: impl Into<String>,
        likelihood: impl IntoIterator<Item = (K, f64)>,
    ) -> Self {
        VirtualFinding {
            var: var.into(),
            likelihood: likelihood.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if let Some((s, w)) = self.likelihood.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidEvidence(format!(
                "likelihood of `{}` = {s} is {w}, weights must be finite and nonnegative",
                self.var
            )));
        }
        if self.likelihood.values().all(|&w| w == 0.0) {
            return Err(Error::InvalidEvidence(format!(
                "likelihood vector of `{}` is all zero",
                self.var
            )));
        }
        Ok(())
    }

    /// Likelihood weights in the variable's declared state order. Every
    /// state must be covered.
    pub fn weights(&self, net: &Network) -> Result<Vec<f64>> {
        let v = net.var_index(&self.var)?;
        let var = net.variable(v);
        for s in self.likelihood.keys() {
            var.require_state(s)?;
        }
        var.states()
            .iter()
            .map(|s| {
                self.likelihood.get(s).copied().ok_or_else(|| {
                    Error::InvalidEvidence(format!(
                        "likelihood of `{}` has no weight for state `{s}`",
                        self.var
                    ))
                })
            })
            .collect()
    }
}

#[derive(Debug, Default, Deserialize)]
struct EvidenceDoc {
    #[serde(default)]
    hard: Vec<HardFinding>,
    #[serde(default, rename = "virtual")]
    virtual_findings: Vec<VirtualFinding>,
}

/// Hard findings plus virtual findings. A variable carries at most one of
/// either kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EvidenceDoc")]
pub struct EvidenceSet {
    hard: Vec<HardFinding>,
    #[serde(rename = "virtual")]
    virtual_findings: Vec<VirtualFinding>,
}

impl TryFrom<EvidenceDoc> for EvidenceSet {
    type Error = Error;

    fn try_from(doc: EvidenceDoc) -> Result<Self> {
        let mut e = EvidenceSet::new();
        for h in doc.hard {
            e.add_hard(h)?;
        }
        for v in doc.virtual_findings {
            e.add_virtual(v)?;
        }
        Ok(e)
    }
}

impl EvidenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn hard(&self) -> &[HardFinding] {
        &self.hard
    }

    pub fn virtual_findings(&self) -> &[VirtualFinding] {
        &self.virtual_findings
    }

    pub fn is_empty(&self) -> bool {
        self.hard.is_empty() && self.virtual_findings.is_empty()
    }

    pub fn hard_state(&self, var: &str) -> Option<&str> {
        self.hard.iter().find(|h| h.var == var).map(|h| h.state.as_str())
    }

    pub fn virtual_finding(&self, var: &str) -> Option<&VirtualFinding> {
        self.virtual_findings.iter().find(|v| v.var == var)
    }

    /// Repeating an identical hard finding is a no-op.
    pub fn add_hard(&mut self, finding: HardFinding) -> Result<()> {
        if self.virtual_finding(&finding.var).is_some() {
            return Err(Error::InvalidEvidence(format!(
                "`{}` has both a hard and a virtual finding",
                finding.var
            )));
        }
        match self.hard_state(&finding.var) {
            Some(s) if s == finding.state => Ok(()),
            Some(s) => Err(Error::InvalidEvidence(format!(
                "`{}` observed as both `{s}` and `{}`",
                finding.var, finding.state
            ))),
            None => {
                self.hard.push(finding);
                Ok(())
            }
        }
    }

    /// A second virtual finding on the same variable is combined with the
    /// first by multiplying likelihoods state by state.
    pub fn add_virtual(&mut self, finding: VirtualFinding) -> Result<()> {
        finding.check()?;
        if self.hard_state(&finding.var).is_some() {
            return Err(Error::InvalidEvidence(format!(
                "`{}` has both a hard and a virtual finding",
                finding.var
            )));
        }
        match self.virtual_findings.iter_mut().find(|v| v.var == finding.var) {
            Some(existing) => {
                let keys: Vec<String> = existing
                    .likelihood
                    .keys()
                    .chain(finding.likelihood.keys())
                    .cloned()
                    .collect();
                let combined = VirtualFinding {
                    var: finding.var.clone(),
                    likelihood: keys
                        .into_iter()
                        .map(|k| {
                            let a = existing.likelihood.get(&k).copied().unwrap_or(0.0);
                            let b = finding.likelihood.get(&k).copied().unwrap_or(0.0);
                            (k, a * b)
                        })
                        .collect(),
                };
                combined.check()?;
                *existing = combined;
            }
            None => self.virtual_findings.push(finding),
        }
        Ok(())
    }

    pub fn remove_virtual(&mut self, var: &str) -> Option<VirtualFinding> {
        let pos = self.virtual_findings.iter().position(|v| v.var == var)?;
        Some(self.virtual_findings.remove(pos))
    }

    /// Checks every finding against `net`.
    pub fn resolve(&self, net: &Network) -> Result<Weighting> {
        let mut hard = Vec::with_capacity(self.hard.len());
        for h in &self.hard {
            let v = net.var_index(&h.var)?;
            hard.push((v, net.variable(v).require_state(&h.state)?));
        }
        let mut soft = Vec::with_capacity(self.virtual_findings.len());
        for f in &self.virtual_findings {
            soft.push((net.var_index(&f.var)?, f.weights(net)?));
        }
        soft.sort_by(|a, b| net.variable(a.0).name().cmp(net.variable(b.0).name()));
        Ok(Weighting { hard, soft })
    }
}

/// Evidence resolved against a network, ready to weight state vectors.
#[derive(Debug, Clone)]
pub struct Weighting {
    hard: Vec<(usize, usize)>,
    // ascending variable-name order
    soft: Vec<(usize, Vec<f64>)>,
}

impl Weighting {
    /// `(variable, state)` index pairs.
    pub fn hard_findings(&self) -> &[(usize, usize)] {
        &self.hard
    }

    pub fn virtual_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.soft.iter().map(|(v, _)| *v)
    }

    pub fn is_hard_observed(&self, var: usize) -> bool {
        self.hard.iter().any(|&(v, _)| v == var)
    }

    pub fn has_virtual(&self, var: usize) -> bool {
        self.soft.iter().any(|(v, _)| *v == var)
    }

    /// Joint probability times virtual likelihoods; zero when a hard finding
    /// is contradicted.
    #[inline]
    pub fn weight(&self, net: &Network, states: &[usize]) -> f64 {
        if self.hard.iter().any(|&(v, s)| states[v] != s) {
            return 0.0;
        }
        let mut w = net.joint_of_states(states);
        for (v, lik) in &self.soft {
            w *= lik[states[*v]];
        }
        w
    }

    pub fn project(&self, net: &Network, vars: &[usize], strategy: Strategy) -> Result<Projection> {
        enumerate::project(net, vars, strategy, |s| self.weight(net, s))
    }
}

/// Posterior over one or more variables.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    variables: Vec<String>,
    entries: Vec<(Vec<String>, f64)>,
}

impl StateDistribution {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// `(state combination, mass)` pairs, first variable varying slowest.
    pub fn entries(&self) -> &[(Vec<String>, f64)] {
        &self.entries
    }

    pub fn prob(&self, states: &[&str]) -> Option<f64> {
        self.entries
            .iter()
            .find(|(s, _)| s.iter().map(String::as_str).eq(states.iter().copied()))
            .map(|(_, m)| *m)
    }

    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, m)| *m)
    }
}

pub fn evidence_weight(net: &Network, assignment: &Assignment, evidence: &EvidenceSet) -> Result<f64> {
    let states = assignment.resolve_full(net)?;
    Ok(evidence.resolve(net)?.weight(net, &states))
}

/// Sum of evidence weights over all assignments. With virtual findings this
/// is only defined up to the scale of their likelihood vectors.
pub fn probability_of_evidence(net: &Network, evidence: &EvidenceSet) -> Result<f64> {
    Ok(evidence
        .resolve(net)?
        .project(net, &[], Strategy::default())?
        .total)
}

pub fn posterior(net: &Network, evidence: &EvidenceSet, query: &str) -> Result<StateDistribution> {
    posterior_joint(net, evidence, &[query])
}

pub fn posterior_joint(net: &Network, evidence: &EvidenceSet, vars: &[&str]) -> Result<StateDistribution> {
    posterior_joint_with(net, evidence, vars, Strategy::default())
}

pub fn posterior_joint_with(
    net: &Network,
    evidence: &EvidenceSet,
    vars: &[&str],
    strategy: Strategy,
) -> Result<StateDistribution> {
    if vars.is_empty() {
        return Err(Error::InvalidQuery("no query variables".into()));
    }
    let idx = vars
        .iter()
        .map(|v| net.var_index(v))
        .collect::<Result<Vec<_>>>()?;
    for (k, v) in idx.iter().enumerate() {
        if idx[..k].contains(v) {
            return Err(Error::InvalidQuery(format!("`{}` queried twice", vars[k])));
        }
    }
    let p = evidence.resolve(net)?.project(net, &idx, strategy)?;
    if p.total <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    let entries = p
        .cells
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let states = p
                .cell_states(i)
                .into_iter()
                .zip(&idx)
                .map(|(s, &v)| net.variable(v).states()[s].clone())
                .collect();
            (states, w / p.total)
        })
        .collect();
    Ok(StateDistribution {
        variables: vars.iter().map(|v| v.to_string()).collect(),
        entries,
    })
}

/// `BEL(target = state | c, evidence)`.
pub fn conditional_belief(
    net: &Network,
    evidence: &EvidenceSet,
    target: &str,
    target_state: &str,
    condition: &Assignment,
) -> Result<f64> {
    if condition.get(target).is_some() {
        return Err(Error::InvalidQuery(format!(
            "condition binds the target `{target}`"
        )));
    }
    let t = net.var_index(target)?;
    let ts = net.variable(t).require_state(target_state)?;
    let bound = condition.resolve(net)?;

    let mut vars: Vec<usize> = bound.iter().map(|&(v, _)| v).collect();
    vars.push(t);
    let p = evidence.resolve(net)?.project(net, &vars, Strategy::default())?;
    if p.total <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    let mut states: Vec<usize> = bound.iter().map(|&(_, s)| s).collect();
    states.push(0);
    let base = p.cell_index(&states);
    let row = &p.cells[base..base + net.variable(t).cardinality()];
    let mass: f64 = row.iter().sum();
    if mass <= 0.0 {
        return Err(Error::ZeroMassCondition);
    }
    Ok(row[ts] / mass)
}
