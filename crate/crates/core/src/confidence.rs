//! Network-induced confidence measures.
//!
//! Confidence in `BEL(E)` is read off the distribution of `BEL(E | c)` as
//! `c` ranges over the combinations of a contingency set `C`, each weighted
//! by its current belief `BEL(c)`. `C` is structural: the direct parents of
//! the target and of every evidence-bearing node, minus the target, its
//! descendants, and anything observed outright. The mean of the resulting
//! distribution is always `BEL(E)`; its spread is the confidence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::Strategy;
use crate::error::{Error, Result};
use crate::inference::{EvidenceSet, HardFinding, VirtualFinding};
use crate::model::{Network, NodeDoc, Variable, VariableDoc};

/// Conditional beliefs closer than this are reported as one point.
pub const MERGE_TOLERANCE: f64 = 1e-9;

/// Combinations whose posterior mass is at or below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Relative tolerance of the refinement mixture check.
pub const MIXTURE_TOLERANCE: f64 = 1e-6;

/// The event `var = state` whose belief is being assessed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub var: String,
    pub state: String,
}

impl Target {
    pub fn new(var: impl Into<String>, state: impl Into<String>) -> Self {
        Target {
            var: var.into(),
            state: state.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContingencySet {
    variables: Vec<String>,
}

impl ContingencySet {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        ContingencySet {
            variables: variables.into_iter().map(Into::into).collect(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }
}

/// One combination `c` of the contingency set and its contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    /// Position in the lexicographic enumeration of `C` (first variable
    /// slowest).
    pub index: usize,
    pub states: Vec<String>,
    /// `BEL(target | c)`.
    pub value: f64,
    /// `BEL(c)`, renormalized over the retained combinations.
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefPoint {
    pub value: f64,
    pub mass: f64,
    pub combos: Vec<Combination>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefDistribution {
    pub target: Target,
    pub contingency_set: ContingencySet,
    /// Ascending by value.
    pub points: Vec<BeliefPoint>,
    /// Fraction of the posterior mass represented; 1 unless truncated.
    pub coverage: f64,
}

impl BeliefDistribution {
    /// Retained combinations in enumeration order.
    pub fn combinations(&self) -> Vec<&Combination> {
        let mut all: Vec<&Combination> = self.points.iter().flat_map(|p| &p.combos).collect();
        all.sort_by_key(|c| c.index);
        all
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub support_size: usize,
    pub coverage: f64,
}

pub fn derive_contingency_set(net: &Network, evidence: &EvidenceSet, target: &str) -> Result<ContingencySet> {
    let t = net.var_index(target)?;
    let weighting = evidence.resolve(net)?;
    let mut member = vec![false; net.len()];
    for &p in net.node(t).parents() {
        member[p] = true;
    }
    for &(h, _) in weighting.hard_findings() {
        for &p in net.node(h).parents() {
            member[p] = true;
        }
    }
    // a virtual finding is an implicit observation whose only parent is the
    // variable it is attached to
    for v in weighting.virtual_vars() {
        member[v] = true;
    }

    member[t] = false;
    for (m, d) in member.iter_mut().zip(net.descendant_mask(t)) {
        *m &= !d;
    }
    for &(h, _) in weighting.hard_findings() {
        member[h] = false;
    }

    Ok(ContingencySet::new(
        (0..net.len())
            .filter(|&i| member[i])
            .map(|i| net.variable(i).name().to_owned()),
    ))
}

pub fn belief_distribution(
    net: &Network,
    evidence: &EvidenceSet,
    target: &Target,
    contingencies: &ContingencySet,
) -> Result<BeliefDistribution> {
    belief_distribution_with(net, evidence, target, contingencies, Strategy::default())
}

pub fn belief_distribution_with(
    net: &Network,
    evidence: &EvidenceSet,
    target: &Target,
    contingencies: &ContingencySet,
    strategy: Strategy,
) -> Result<BeliefDistribution> {
    let combos = contributions(net, evidence, target, contingencies, strategy)?;
    Ok(assemble(target, contingencies, combos, None))
}

/// Keeps only the `k` most probable combinations. Ties go to the
/// lexicographically first combination.
pub fn top_k_distribution(
    net: &Network,
    evidence: &EvidenceSet,
    target: &Target,
    contingencies: &ContingencySet,
    k: usize,
) -> Result<BeliefDistribution> {
    if k == 0 {
        return Err(Error::InvalidQuery("top-k needs k >= 1".into()));
    }
    let combos = contributions(net, evidence, target, contingencies, Strategy::default())?;
    if k >= combos.len() {
        return Ok(assemble(target, contingencies, combos, None));
    }
    let mut ranked: Vec<usize> = (0..combos.len()).collect();
    ranked.sort_by(|&a, &b| combos[b].mass.total_cmp(&combos[a].mass).then(a.cmp(&b)));
    let mut keep = vec![false; combos.len()];
    for &i in &ranked[..k] {
        keep[i] = true;
    }
    let retained: Vec<Combination> = combos
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();
    let coverage = retained.iter().map(|c| c.mass).sum();
    Ok(assemble(target, contingencies, retained, Some(coverage)))
}

pub fn summarize(dist: &BeliefDistribution) -> ConfidenceSummary {
    let min = dist.points.first().map_or(0.0, |p| p.value);
    let max = dist.points.last().map_or(0.0, |p| p.value);
    let (mean, variance) = if dist.points.len() <= 1 {
        (min, 0.0)
    } else {
        let mean = dist
            .points
            .iter()
            .map(|p| p.value * p.mass)
            .sum::<f64>()
            .clamp(min, max);
        let var = dist
            .points
            .iter()
            .map(|p| (p.value - mean).powi(2) * p.mass)
            .sum::<f64>();
        (mean, var)
    };
    ConfidenceSummary {
        mean,
        std_dev: variance.sqrt(),
        variance,
        min,
        max,
        support_size: dist.points.len(),
        coverage: dist.coverage,
    }
}

/// Every combination of `C` with posterior mass above the prune threshold,
/// in enumeration order. Masses are normalized by the evidence total.
fn contributions(
    net: &Network,
    evidence: &EvidenceSet,
    target: &Target,
    contingencies: &ContingencySet,
    strategy: Strategy,
) -> Result<Vec<Combination>> {
    let t = net.var_index(&target.var)?;
    let ts = net.variable(t).require_state(&target.state)?;
    let mut vars = Vec::with_capacity(contingencies.len() + 1);
    for name in contingencies.variables() {
        let v = net.var_index(name)?;
        if v == t {
            return Err(Error::InvalidQuery(format!(
                "contingency set contains the target `{name}`"
            )));
        }
        if vars.contains(&v) {
            return Err(Error::InvalidQuery(format!(
                "`{name}` listed twice in contingency set"
            )));
        }
        vars.push(v);
    }
    vars.push(t);

    let projection = evidence.resolve(net)?.project(net, &vars, strategy)?;
    if projection.total <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    let width = net.variable(t).cardinality();
    let combos = projection
        .cells
        .chunks_exact(width)
        .enumerate()
        .filter_map(|(index, row)| {
            let weight: f64 = row.iter().sum();
            let mass = weight / projection.total;
            (mass > PRUNE_THRESHOLD).then(|| {
                let cell = projection.cell_states(index * width);
                let states = cell[..cell.len() - 1]
                    .iter()
                    .zip(&vars)
                    .map(|(&s, &v)| net.variable(v).states()[s].clone())
                    .collect();
                Combination {
                    index,
                    states,
                    value: row[ts] / weight,
                    mass,
                }
            })
        })
        .collect();
    Ok(combos)
}

/// Renormalizes the retained masses, then merges equal values into points.
fn assemble(
    target: &Target,
    contingencies: &ContingencySet,
    mut combos: Vec<Combination>,
    coverage: Option<f64>,
) -> BeliefDistribution {
    let retained: f64 = combos.iter().map(|c| c.mass).sum();
    for c in &mut combos {
        c.mass /= retained;
    }
    combos.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)));

    let mut points: Vec<BeliefPoint> = Vec::new();
    for c in combos {
        match points.last_mut() {
            Some(p) if c.value - p.combos[0].value <= MERGE_TOLERANCE => p.combos.push(c),
            _ => points.push(BeliefPoint {
                value: c.value,
                mass: 0.0,
                combos: vec![c],
            }),
        }
    }
    for p in &mut points {
        p.mass = p.combos.iter().map(|c| c.mass).sum();
        if p.combos.len() > 1 {
            p.value = p.combos.iter().map(|c| c.value * c.mass).sum::<f64>() / p.mass;
        }
    }

    BeliefDistribution {
        target: target.clone(),
        contingency_set: contingencies.clone(),
        points,
        coverage: coverage.unwrap_or(1.0),
    }
}

fn default_check() -> bool {
    true
}

/// Replaces the virtual finding on `var` by an explicit observation node
/// whose parents are `var` and a new root contingency.
///
/// Under each state `w` of the new contingency the observation has
/// likelihood `likelihoods[w]` over the states of `var`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub var: String,
    pub contingency: VariableDoc,
    pub prior: Vec<f64>,
    pub likelihoods: BTreeMap<String, BTreeMap<String, f64>>,
    /// Name of the observation node; defaults to `<var>-report`.
    #[serde(default)]
    pub observation: Option<String>,
    /// Require the prior-weighted mixture of the conditional likelihoods to
    /// reproduce the original likelihood ratio.
    #[serde(default = "default_check")]
    pub check: bool,
}

/// State of the observation node that is recorded as observed.
pub const OBSERVED_STATE: &str = "observed";

pub fn refine_virtual_finding(
    net: &Network,
    evidence: &EvidenceSet,
    refinement: &Refinement,
) -> Result<(Network, EvidenceSet)> {
    let invalid = |msg: String| Error::InvalidRefinement(msg);

    let original = evidence
        .virtual_finding(&refinement.var)
        .ok_or_else(|| Error::UnknownFinding(refinement.var.clone()))?;
    let original = original.weights(net)?;

    let w = Variable::new(
        refinement.contingency.name.clone(),
        refinement.contingency.states.iter().cloned(),
    )?;
    if net.var_index(w.name()).is_ok() {
        return Err(invalid(format!("variable `{}` already exists", w.name())));
    }
    let observation = refinement
        .observation
        .clone()
        .unwrap_or_else(|| format!("{}-report", refinement.var));
    if net.var_index(&observation).is_ok() || observation == w.name() {
        return Err(invalid(format!("variable `{observation}` already exists")));
    }
    if refinement.prior.len() != w.cardinality() {
        return Err(invalid(format!(
            "prior has {} entries, `{}` has {} states",
            refinement.prior.len(),
            w.name(),
            w.cardinality()
        )));
    }
    if let Some(extra) = refinement.likelihoods.keys().find(|k| w.state_index(k).is_none()) {
        return Err(Error::UnknownState {
            var: w.name().to_owned(),
            state: extra.clone(),
        });
    }

    let mut conditional = Vec::with_capacity(w.cardinality());
    for state in w.states() {
        let lik = refinement
            .likelihoods
            .get(state)
            .ok_or_else(|| invalid(format!("no likelihood given for `{}` = {state}", w.name())))?;
        let finding = VirtualFinding {
            var: refinement.var.clone(),
            likelihood: lik.clone(),
        };
        finding.check()?;
        conditional.push(finding.weights(net)?);
    }

    let mixture: Vec<f64> = (0..original.len())
        .map(|x| {
            refinement
                .prior
                .iter()
                .zip(&conditional)
                .map(|(p, l)| p * l[x])
                .sum()
        })
        .collect();
    if refinement.check && !proportional(&original, &mixture) {
        return Err(Error::InconsistentMixture { original, mixture });
    }

    let scale = conditional.iter().flatten().copied().fold(0.0, f64::max);
    let x = net.var_index(&refinement.var)?;
    let mut rows = Vec::with_capacity(original.len() * w.cardinality());
    for xs in 0..net.variable(x).cardinality() {
        for l in &conditional {
            let p = l[xs] / scale;
            rows.push(vec![p, 1.0 - p]);
        }
    }

    let refined = net
        .with_node(
            w.to_doc(),
            NodeDoc {
                var: w.name().to_owned(),
                parents: vec![],
                cpt: vec![refinement.prior.clone()],
            },
        )?
        .with_node(
            VariableDoc {
                name: observation.clone(),
                states: vec![OBSERVED_STATE.into(), "unobserved".into()],
            },
            NodeDoc {
                var: observation.clone(),
                parents: vec![refinement.var.clone(), w.name().to_owned()],
                cpt: rows,
            },
        )?;

    let mut refined_evidence = evidence.clone();
    refined_evidence.remove_virtual(&refinement.var);
    refined_evidence.add_hard(HardFinding::new(observation, OBSERVED_STATE))?;
    Ok((refined, refined_evidence))
}

fn proportional(a: &[f64], b: &[f64]) -> bool {
    let sa: f64 = a.iter().sum();
    let sb: f64 = b.iter().sum();
    if sb <= 0.0 {
        return false;
    }
    a.iter()
        .zip(b)
        .all(|(x, y)| (x / sa - y / sb).abs() <= MIXTURE_TOLERANCE)
}
