//! Replays an ordered evidence narrative and snapshots belief and
//! confidence after every step.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::confidence::{
    belief_distribution, derive_contingency_set, refine_virtual_finding, summarize, top_k_distribution,
    BeliefDistribution, ConfidenceSummary, ContingencySet, Refinement, Target,
};
use crate::error::{Error, Result};
use crate::inference::{posterior, EvidenceSet, HardFinding, StateDistribution, VirtualFinding};
use crate::model::{Network, NetworkDoc, NodeDoc, VariableDoc};

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    ObserveHard(Vec<HardFinding>),
    ObserveVirtual(Vec<VirtualFinding>),
    Refine(Refinement),
    /// Snapshot only the `k` most probable contingency combinations.
    QueryTopK(usize),
    /// Adds a node that is not observed.
    AddNode {
        variable: VariableDoc,
        node: NodeDoc,
    },
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::ObserveHard(_) => "observe-hard",
            Step::ObserveVirtual(_) => "observe-virtual",
            Step::Refine(_) => "refine",
            Step::QueryTopK(_) => "query-topk",
            Step::AddNode { .. } => "add-node",
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum StepDoc {
    ObserveHard {
        var: Option<String>,
        state: Option<String>,
        #[serde(default)]
        findings: Vec<HardFinding>,
    },
    ObserveVirtual {
        var: Option<String>,
        likelihood: Option<BTreeMap<String, f64>>,
        #[serde(default)]
        findings: Vec<VirtualFinding>,
    },
    Refine(Refinement),
    #[serde(rename = "query-topk")]
    QueryTopK {
        k: usize,
    },
    AddNode {
        name: String,
        states: Vec<String>,
        #[serde(default)]
        parents: Vec<String>,
        cpt: Vec<Vec<f64>>,
    },
}

impl TryFrom<StepDoc> for Step {
    type Error = String;

    fn try_from(doc: StepDoc) -> std::result::Result<Self, String> {
        Ok(match doc {
            StepDoc::ObserveHard {
                var,
                state,
                mut findings,
            } => {
                match (var, state) {
                    (Some(var), Some(state)) => findings.push(HardFinding { var, state }),
                    (None, None) => {}
                    _ => return Err("observe-hard needs both `var` and `state`".into()),
                }
                if findings.is_empty() {
                    return Err("observe-hard step has no findings".into());
                }
                Step::ObserveHard(findings)
            }
            StepDoc::ObserveVirtual {
                var,
                likelihood,
                mut findings,
            } => {
                match (var, likelihood) {
                    (Some(var), Some(likelihood)) => findings.push(VirtualFinding { var, likelihood }),
                    (None, None) => {}
                    _ => return Err("observe-virtual needs both `var` and `likelihood`".into()),
                }
                if findings.is_empty() {
                    return Err("observe-virtual step has no findings".into());
                }
                Step::ObserveVirtual(findings)
            }
            StepDoc::Refine(r) => Step::Refine(r),
            StepDoc::QueryTopK { k: 0 } => return Err("query-topk needs k >= 1".into()),
            StepDoc::QueryTopK { k } => Step::QueryTopK(k),
            StepDoc::AddNode {
                name,
                states,
                parents,
                cpt,
            } => Step::AddNode {
                variable: VariableDoc {
                    name: name.clone(),
                    states,
                },
                node: NodeDoc {
                    var: name,
                    parents,
                    cpt,
                },
            },
        })
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        StepDoc::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NetworkRef {
    Path(String),
    Inline(NetworkDoc),
}

#[derive(Deserialize)]
struct ScenarioDoc {
    network: NetworkRef,
    target: Target,
    #[serde(default)]
    steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub network: Network,
    pub target: Target,
    pub steps: Vec<Step>,
}

impl Scenario {
    /// Reads a scenario file. A network given by path is resolved relative
    /// to the scenario file.
    pub fn load(path: &Path, max_variables: usize) -> Result<Scenario> {
        let text = read(path)?;
        Scenario::from_json(&text, path.parent().unwrap_or(Path::new("")), max_variables)
    }

    pub fn from_json(text: &str, base_dir: &Path, max_variables: usize) -> Result<Scenario> {
        let doc: ScenarioDoc = serde_json::from_str(text)?;
        let network = match doc.network {
            NetworkRef::Path(p) => Network::from_json(&read(&base_dir.join(p))?, max_variables)?,
            NetworkRef::Inline(d) => Network::from_doc(&d, max_variables)?,
        };
        let t = network.var_index(&doc.target.var)?;
        if network.variable(t).state_index(&doc.target.state).is_none() {
            return Err(Error::UnknownState {
                var: doc.target.var,
                state: doc.target.state,
            });
        }
        Ok(Scenario {
            network,
            target: doc.target,
            steps: doc.steps,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// 0 for the evidence-free starting point, otherwise the 1-based step.
    pub step: usize,
    pub kind: Option<&'static str>,
    pub contingency_set: ContingencySet,
    pub distribution: BeliefDistribution,
    pub summary: ConfidenceSummary,
    pub posterior: StateDistribution,
    /// Posterior probability of the target state.
    pub belief: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub target: Target,
    pub snapshots: Vec<Snapshot>,
}

/// Applies the steps cumulatively to a working copy of the network and
/// evidence, snapshotting after each one.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioReport> {
    let mut net = scenario.network.clone();
    let mut evidence = EvidenceSet::new();
    let mut snapshots = Vec::with_capacity(scenario.steps.len() + 1);

    let at = |step: usize| {
        move |e: Error| Error::Step {
            step,
            source: Box::new(e),
        }
    };

    snapshots.push(snapshot(&net, &evidence, &scenario.target, 0, None, None).map_err(at(0))?);
    for (i, step) in scenario.steps.iter().enumerate() {
        let n = i + 1;
        let mut top_k = None;
        match step {
            Step::ObserveHard(findings) => {
                for f in findings {
                    evidence.add_hard(f.clone()).map_err(at(n))?;
                }
            }
            Step::ObserveVirtual(findings) => {
                for f in findings {
                    evidence.add_virtual(f.clone()).map_err(at(n))?;
                }
            }
            Step::Refine(r) => {
                let (refined, refined_evidence) =
                    refine_virtual_finding(&net, &evidence, r).map_err(at(n))?;
                net = refined;
                evidence = refined_evidence;
            }
            Step::QueryTopK(k) => top_k = Some(*k),
            Step::AddNode { variable, node } => {
                net = net
                    .with_node(variable.clone(), node.clone())
                    .map_err(|e| at(n)(e.into()))?;
            }
        }
        snapshots
            .push(snapshot(&net, &evidence, &scenario.target, n, Some(step.kind()), top_k).map_err(at(n))?);
    }
    Ok(ScenarioReport {
        target: scenario.target.clone(),
        snapshots,
    })
}

fn snapshot(
    net: &Network,
    evidence: &EvidenceSet,
    target: &Target,
    step: usize,
    kind: Option<&'static str>,
    top_k: Option<usize>,
) -> Result<Snapshot> {
    let contingency_set = derive_contingency_set(net, evidence, &target.var)?;
    let distribution = match top_k {
        Some(k) => top_k_distribution(net, evidence, target, &contingency_set, k)?,
        None => belief_distribution(net, evidence, target, &contingency_set)?,
    };
    let summary = summarize(&distribution);
    let posterior = posterior(net, evidence, &target.var)?;
    let belief = posterior
        .prob(&[target.state.as_str()])
        .ok_or_else(|| Error::UnknownState {
            var: target.var.clone(),
            state: target.state.clone(),
        })?;
    Ok(Snapshot {
        step,
        kind,
        contingency_set,
        distribution,
        summary,
        posterior,
        belief,
    })
}
