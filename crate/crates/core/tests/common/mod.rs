#![allow(dead_code)]

use std::path::Path;

use credence::{EvidenceSet, HardFinding, Network, NetworkDoc, NodeDoc, VariableDoc, VirtualFinding};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

pub fn fixture(name: &str) -> Network {
    credence::load_network(&fixture_text(name)).unwrap()
}

pub fn evidence(name: &str) -> EvidenceSet {
    EvidenceSet::from_json(&fixture_text(name)).unwrap()
}

const NAMES: [&str; 12] = [
    "kappa", "Alpha", "zeta", "Mu", "beta", "Omega", "delta", "Pi", "eta", "Sigma", "iota", "Rho",
];

fn random_row(rng: &mut ChaCha8Rng, width: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..width)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    0.0
                } else {
                    rng.gen_range(0.01..1.0)
                }
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        if sum > 0.0 {
            return raw.iter().map(|x| x / sum).collect();
        }
    }
}

/// Random valid network with at most `max_vars` variables of 2 or 3 states.
/// Declaration order is shuffled and names do not sort in declaration
/// order.
pub fn random_network(seed: u64, max_vars: usize) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vars);
    let mut names: Vec<&str> = NAMES[..].to_vec();
    names.shuffle(&mut rng);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();

    let mut variables = Vec::new();
    let mut nodes = Vec::new();
    for i in 0..n {
        let mut parents: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.4)).collect();
        parents.shuffle(&mut rng);
        parents.truncate(3);
        let rows: usize = parents.iter().map(|&p| cards[p]).product();
        variables.push(VariableDoc {
            name: names[i].to_string(),
            states: (0..cards[i]).map(|s| format!("s{s}")).collect(),
        });
        nodes.push(NodeDoc {
            var: names[i].to_string(),
            parents: parents.iter().map(|&p| names[p].to_string()).collect(),
            cpt: (0..rows).map(|_| random_row(&mut rng, cards[i])).collect(),
        });
    }
    variables.shuffle(&mut rng);
    nodes.shuffle(&mut rng);
    Network::from_doc(&NetworkDoc { variables, nodes }, 24).unwrap()
}

/// Samples a full assignment ancestrally, so every sampled state has
/// positive probability.
pub fn sample(net: &Network, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let order: Vec<usize> = net
        .topological_order()
        .iter()
        .map(|n| net.var_index(n).unwrap())
        .collect();
    let mut states = vec![0; net.len()];
    for v in order {
        let node = net.node(v);
        let row = node.row_index(&states);
        let probs = node.cpt().row(row);
        let mut u: f64 = rng.gen();
        let mut pick = probs.iter().rposition(|&p| p > 0.0).unwrap();
        for (s, &p) in probs.iter().enumerate() {
            if p > 0.0 && u < p {
                pick = s;
                break;
            }
            u -= p;
        }
        states[v] = pick;
    }
    states
}

/// Random evidence consistent with an ancestral sample, hence possible.
pub fn random_evidence(net: &Network, seed: u64) -> EvidenceSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let truth = sample(net, &mut rng);
    let mut e = EvidenceSet::new();
    for (v, var) in net.variables().iter().enumerate() {
        let roll: f64 = rng.gen();
        if roll < 0.2 {
            e.add_hard(HardFinding::new(var.name(), &var.states()[truth[v]]))
                .unwrap();
        } else if roll < 0.45 {
            let lik: Vec<(String, f64)> = var
                .states()
                .iter()
                .enumerate()
                .map(|(s, name)| {
                    let w = if s == truth[v] {
                        rng.gen_range(0.1..5.0)
                    } else if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        rng.gen_range(0.0..5.0)
                    };
                    (name.clone(), w)
                })
                .collect();
            e.add_virtual(VirtualFinding::new(var.name(), lik)).unwrap();
        }
    }
    e
}

pub fn random_target(net: &Network, seed: u64) -> (String, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a59);
    let v = rng.gen_range(0..net.len());
    let var = net.variable(v);
    (
        var.name().to_string(),
        var.states()[rng.gen_range(0..var.cardinality())].clone(),
    )
}

/// Independent reference: materializes the whole joint table cell by cell
/// from the CPTs, weights each cell by the evidence, and marginalizes.
pub struct JointTable {
    pub cards: Vec<usize>,
    pub cells: Vec<(Vec<usize>, f64)>,
}

impl JointTable {
    pub fn build(net: &Network) -> JointTable {
        let cards: Vec<usize> = net.variables().iter().map(|v| v.cardinality()).collect();
        let mut cells = Vec::new();
        let mut states = vec![0usize; cards.len()];
        loop {
            let mut p = 1.0;
            for (v, node) in net.nodes().iter().enumerate() {
                let row = node
                    .parents()
                    .iter()
                    .fold(0, |acc, &q| acc * cards[q] + states[q]);
                p *= node.cpt().row(row)[states[v]];
            }
            cells.push((states.clone(), p));

            let mut k = cards.len();
            loop {
                if k == 0 {
                    return JointTable { cards, cells };
                }
                k -= 1;
                states[k] += 1;
                if states[k] < cards[k] {
                    break;
                }
                states[k] = 0;
            }
        }
    }

    pub fn weighted(&self, net: &Network, e: &EvidenceSet) -> Vec<(Vec<usize>, f64)> {
        self.cells
            .iter()
            .map(|(s, p)| {
                let mut w = *p;
                for h in e.hard() {
                    let v = net.var_index(&h.var).unwrap();
                    if net.variable(v).states()[s[v]] != h.state {
                        w = 0.0;
                    }
                }
                for f in e.virtual_findings() {
                    let v = net.var_index(&f.var).unwrap();
                    w *= f.likelihood[&net.variable(v).states()[s[v]]];
                }
                (s.clone(), w)
            })
            .collect()
    }

    /// Normalized posterior over `vars`, first variable slowest.
    pub fn posterior(&self, net: &Network, e: &EvidenceSet, vars: &[&str]) -> Vec<f64> {
        let idx: Vec<usize> = vars.iter().map(|v| net.var_index(v).unwrap()).collect();
        let width: usize = idx.iter().map(|&v| self.cards[v]).product();
        let mut out = vec![0.0; width];
        let mut total = 0.0;
        for (s, w) in self.weighted(net, e) {
            let cell = idx.iter().fold(0, |acc, &v| acc * self.cards[v] + s[v]);
            out[cell] += w;
            total += w;
        }
        out.iter().map(|w| w / total).collect()
    }
}

/// Adds an unobserved node with the given parents and a random CPT.
pub fn with_random_child(net: &Network, name: &str, parents: &[&str], seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: usize = parents
        .iter()
        .map(|p| net.variable(net.var_index(p).unwrap()).cardinality())
        .product();
    net.with_node(
        VariableDoc {
            name: name.into(),
            states: vec!["a".into(), "b".into(), "c".into()],
        },
        NodeDoc {
            var: name.into(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            cpt: (0..rows).map(|_| random_row(&mut rng, 3)).collect(),
        },
    )
    .unwrap()
}

pub fn points(d: &credence::BeliefDistribution) -> Vec<(f64, f64)> {
    d.points.iter().map(|p| (p.value, p.mass)).collect()
}

pub fn max_point_gap(a: &credence::BeliefDistribution, b: &credence::BeliefDistribution) -> Option<f64> {
    if a.points.len() != b.points.len() {
        return None;
    }
    Some(
        points(a)
            .iter()
            .zip(points(b))
            .map(|((v1, m1), (v2, m2))| (v1 - v2).abs().max((m1 - m2).abs()))
            .fold(0.0, f64::max),
    )
}

/// `|actual - expected| <= tol`, allowing for the representation error of
/// the decimal literals involved.
pub fn within(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol + 1e-12
}
