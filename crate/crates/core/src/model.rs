//! Causal-network data model: discrete variables, their parents and
//! conditional probability tables, and the chain-product joint.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// Enumeration is exponential in the variable count; larger networks are
/// refused unless the caller raises the cap.
pub const DEFAULT_MAX_VARIABLES: usize = 24;

/// CPT rows whose sum is off by at most this much are renormalized on load.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// `{"name": ..., "states": [...]}` entry of a network document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub states: Vec<String>,
}

/// `{"var": ..., "parents": [...], "cpt": [[...], ...]}` entry of a network
/// document. Rows run over parent state combinations with the first parent
/// varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub var: String,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
}

/// Serialized form of a [`Network`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub variables: Vec<VariableDoc>,
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    name: String,
    states: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        states: impl IntoIterator<Item = S>,
    ) -> Result<Self, ValidationError> {
        let name = name.into();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if name.is_empty() {
            return Err(ValidationError::EmptyName);
        }
        if states.len() < 2 {
            return Err(ValidationError::TooFewStates { var: name });
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if s.is_empty() {
                return Err(ValidationError::EmptyState { var: name });
            }
            if !seen.insert(s.as_str()) {
                return Err(ValidationError::DuplicateState {
                    var: name.clone(),
                    state: s.clone(),
                });
            }
        }
        Ok(Variable { name, states })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    pub(crate) fn require_state(&self, state: &str) -> Result<usize> {
        self.state_index(state).ok_or_else(|| Error::UnknownState {
            var: self.name.clone(),
            state: state.to_owned(),
        })
    }

    pub fn to_doc(&self) -> VariableDoc {
        VariableDoc {
            name: self.name.clone(),
            states: self.states.clone(),
        }
    }
}

/// Row-major table of `P(child | parents)`; one row per parent combination.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    width: usize,
    entries: Vec<f64>,
}

impl ConditionalTable {
    pub fn num_rows(&self) -> usize {
        self.entries.len() / self.width
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.width..(row + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.width)
    }

    #[inline]
    pub fn entry(&self, row: usize, state: usize) -> f64 {
        self.entries[row * self.width + state]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    parents: Vec<usize>,
    parent_names: Vec<String>,
    // mixed-radix strides over parent states, first parent slowest
    strides: Vec<usize>,
    cpt: ConditionalTable,
}

impl Node {
    /// Parent variable indices in declared order.
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent_names(&self) -> &[String] {
        &self.parent_names
    }

    pub fn cpt(&self) -> &ConditionalTable {
        &self.cpt
    }

    /// CPT row selected by a full state vector (indexed by variable).
    #[inline]
    pub fn row_index(&self, states: &[usize]) -> usize {
        self.parents
            .iter()
            .zip(&self.strides)
            .map(|(&p, &s)| states[p] * s)
            .sum()
    }
}

/// Validated, immutable DAG of discrete variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    variables: Vec<Variable>,
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
    // factor multiplication order: ascending variable name
    name_order: Vec<usize>,
    max_variables: usize,
}

/// Parses and validates a network document with the default size cap.
pub fn load_network(text: &str) -> Result<Network> {
    Network::from_json(text, DEFAULT_MAX_VARIABLES)
}

impl Network {
    pub fn from_json(text: &str, max_variables: usize) -> Result<Network> {
        let doc: NetworkDoc = serde_json::from_str(text)?;
        Ok(Network::from_doc(&doc, max_variables)?)
    }

    pub fn from_doc(doc: &NetworkDoc, max_variables: usize) -> Result<Network, ValidationError> {
        if doc.variables.len() > max_variables {
            return Err(ValidationError::TooManyVariables {
                count: doc.variables.len(),
                max: max_variables,
            });
        }

        let mut variables = Vec::with_capacity(doc.variables.len());
        let mut index = HashMap::new();
        for v in &doc.variables {
            let var = Variable::new(v.name.clone(), v.states.iter().cloned())?;
            if index.insert(var.name.clone(), variables.len()).is_some() {
                return Err(ValidationError::DuplicateVariable(var.name));
            }
            variables.push(var);
        }

        let mut node_docs: Vec<Option<&NodeDoc>> = vec![None; variables.len()];
        for n in &doc.nodes {
            let i = *index
                .get(&n.var)
                .ok_or_else(|| ValidationError::UndeclaredNode(n.var.clone()))?;
            if node_docs[i].replace(n).is_some() {
                return Err(ValidationError::DuplicateNode(n.var.clone()));
            }
        }

        let mut parents = Vec::with_capacity(variables.len());
        for (i, slot) in node_docs.iter().enumerate() {
            let n = slot.ok_or_else(|| ValidationError::MissingNode(variables[i].name.clone()))?;
            let mut ps = Vec::with_capacity(n.parents.len());
            for p in &n.parents {
                let pi = *index.get(p).ok_or_else(|| ValidationError::UnknownParent {
                    node: n.var.clone(),
                    parent: p.clone(),
                })?;
                if ps.contains(&pi) {
                    return Err(ValidationError::DuplicateParent {
                        node: n.var.clone(),
                        parent: p.clone(),
                    });
                }
                ps.push(pi);
            }
            parents.push(ps);
        }

        let topo = topological_sort(&parents).map_err(|cycle| {
            ValidationError::Cycle(cycle.into_iter().map(|i| variables[i].name.clone()).collect())
        })?;

        let mut nodes = Vec::with_capacity(variables.len());
        for (i, ps) in parents.into_iter().enumerate() {
            let n = node_docs[i].expect("checked above");
            let mut strides = vec![0; ps.len()];
            let mut stride = 1;
            for (k, &p) in ps.iter().enumerate().rev() {
                strides[k] = stride;
                stride *= variables[p].cardinality();
            }
            let cpt = build_table(&variables[i], n, stride)?;
            nodes.push(Node {
                parent_names: ps.iter().map(|&p| variables[p].name.clone()).collect(),
                parents: ps,
                strides,
                cpt,
            });
        }

        let mut children = vec![Vec::new(); variables.len()];
        for (i, node) in nodes.iter().enumerate() {
            for &p in &node.parents {
                children[p].push(i);
            }
        }

        let mut name_order: Vec<usize> = (0..variables.len()).collect();
        name_order.sort_by(|&a, &b| variables[a].name.cmp(&variables[b].name));

        Ok(Network {
            variables,
            nodes,
            index,
            children,
            topo,
            name_order,
            max_variables,
        })
    }

    pub fn to_doc(&self) -> NetworkDoc {
        NetworkDoc {
            variables: self.variables.iter().map(Variable::to_doc).collect(),
            nodes: self
                .nodes
                .iter()
                .zip(&self.variables)
                .map(|(n, v)| NodeDoc {
                    var: v.name.clone(),
                    parents: n.parent_names.clone(),
                    cpt: n.cpt.rows().map(<[f64]>::to_vec).collect(),
                })
                .collect(),
        }
    }

    /// Returns a copy of this network with one more variable and its node.
    pub fn with_node(&self, variable: VariableDoc, node: NodeDoc) -> Result<Network, ValidationError> {
        let mut doc = self.to_doc();
        doc.variables.push(variable);
        doc.nodes.push(node);
        Network::from_doc(&doc, self.max_variables)
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn max_variables(&self) -> usize {
        self.max_variables
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    /// Variable names such that every variable follows all of its parents.
    /// Ties are broken by declaration order.
    pub fn topological_order(&self) -> Vec<&str> {
        self.topo.iter().map(|&i| self.variables[i].name()).collect()
    }

    /// Chain-product probability of a full assignment.
    pub fn joint_probability(&self, assignment: &Assignment) -> Result<f64> {
        let states = assignment.resolve_full(self)?;
        Ok(self.joint_of_states(&states))
    }

    /// Product of CPT entries for a full state vector, multiplied in
    /// ascending variable-name order.
    #[inline]
    pub(crate) fn joint_of_states(&self, states: &[usize]) -> f64 {
        let mut p = 1.0;
        for &v in &self.name_order {
            let node = &self.nodes[v];
            p *= node.cpt.entry(node.row_index(states), states[v]);
        }
        p
    }

    /// Transitive children of `name`, excluding `name` itself.
    pub fn descendants(&self, name: &str) -> Result<BTreeSet<String>> {
        let v = self.var_index(name)?;
        Ok(self
            .descendant_mask(v)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d)
            .map(|(i, _)| self.variables[i].name.clone())
            .collect())
    }

    pub(crate) fn descendant_mask(&self, v: usize) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut stack = self.children[v].clone();
        while let Some(c) = stack.pop() {
            if !mask[c] {
                mask[c] = true;
                stack.extend_from_slice(&self.children[c]);
            }
        }
        mask
    }

    /// Number of full assignments, or an error if it does not fit in `usize`.
    pub fn assignment_count(&self) -> Result<usize> {
        self.variables
            .iter()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.cardinality()))
            .ok_or(Error::EnumerationOverflow(self.len()))
    }
}

fn build_table(var: &Variable, doc: &NodeDoc, rows: usize) -> Result<ConditionalTable, ValidationError> {
    if doc.cpt.len() != rows {
        return Err(ValidationError::RowCount {
            node: var.name.clone(),
            expected: rows,
            found: doc.cpt.len(),
        });
    }
    let width = var.cardinality();
    let mut entries = Vec::with_capacity(rows * width);
    for (r, row) in doc.cpt.iter().enumerate() {
        if row.len() != width {
            return Err(ValidationError::RowWidth {
                node: var.name.clone(),
                row: r,
                expected: width,
                found: row.len(),
            });
        }
        if let Some(&value) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(ValidationError::BadProbability {
                node: var.name.clone(),
                row: r,
                value,
            });
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(ValidationError::RowSum {
                node: var.name.clone(),
                row: r,
                sum,
            });
        }
        if sum == 1.0 {
            entries.extend_from_slice(row);
        } else {
            entries.extend(row.iter().map(|p| p / sum));
        }
    }
    Ok(ConditionalTable { width, entries })
}

/// Kahn's algorithm, always releasing the lowest-declared ready variable.
/// On failure returns one cycle as a closed path.
fn topological_sort(parents: &[Vec<usize>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (i, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(i);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // every unplaced variable has an unplaced parent; walk parents until one repeats
    let placed: BTreeSet<usize> = order.into_iter().collect();
    let start = (0..n).find(|i| !placed.contains(i)).expect("unplaced variable");
    let mut path = vec![start];
    let mut seen = BTreeMap::from([(start, 0usize)]);
    let mut cur = start;
    loop {
        let next = *parents[cur]
            .iter()
            .find(|p| !placed.contains(p))
            .expect("unplaced variable has an unplaced parent");
        if let Some(&pos) = seen.get(&next) {
            let mut cycle: Vec<usize> = path[pos..].to_vec();
            // report in parent -> child direction
            cycle.reverse();
            cycle.push(cycle[0]);
            return Err(cycle);
        }
        seen.insert(next, path.len());
        path.push(next);
        cur = next;
    }
}

/// Variable-to-state bindings, keyed by name. May be partial.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    bindings: BTreeMap<String, String>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: impl Into<String>, state: impl Into<String>) -> Self {
        self.bind(var, state);
        self
    }

    pub fn bind(&mut self, var: impl Into<String>, state: impl Into<String>) -> Option<String> {
        self.bindings.insert(var.into(), state.into())
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.bindings.get(var).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Resolves to `(variable index, state index)` pairs, checking every
    /// binding against the network.
    pub fn resolve(&self, net: &Network) -> Result<Vec<(usize, usize)>> {
        self.bindings
            .iter()
            .map(|(var, state)| {
                let v = net.var_index(var)?;
                Ok((v, net.variable(v).require_state(state)?))
            })
            .collect()
    }

    pub(crate) fn resolve_full(&self, net: &Network) -> Result<Vec<usize>> {
        let mut states = vec![usize::MAX; net.len()];
        for (v, s) in self.resolve(net)? {
            states[v] = s;
        }
        if let Some(v) = states.iter().position(|&s| s == usize::MAX) {
            return Err(Error::IncompleteAssignment(net.variable(v).name().to_owned()));
        }
        Ok(states)
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        Assignment {
            bindings: iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn football() -> Network {
        load_network(include_str!("../fixtures/football.json")).unwrap()
    }

    fn coin() -> Network {
        load_network(include_str!("../fixtures/coin.json")).unwrap()
    }

    fn football_nocall() -> Network {
        load_network(include_str!("../fixtures/football_nocall.json")).unwrap()
    }

    fn doc(text: &str) -> NetworkDoc {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn football_priors() {
        let net = football();
        assert_eq!(net.len(), 4);
        let sus = net.var_index("Sus").unwrap();
        assert_eq!(net.variable(sus).states(), ["no-sus", "sus"]);
        assert_eq!(net.node(sus).cpt().row(0), [0.4, 0.6]);
        let field = net.var_index("Field").unwrap();
        assert_eq!(net.node(field).cpt().row(0)[0], 0.7);
        let bonus = net.var_index("Bonus").unwrap();
        assert_eq!(net.node(bonus).cpt().row(0)[0], 0.2);
    }

    #[test]
    fn single_root() {
        let net = load_network(
            r#"{"variables":[{"name":"A","states":["t","f"]}],
                "nodes":[{"var":"A","parents":[],"cpt":[[0.5,0.5]]}]}"#,
        )
        .unwrap();
        assert_eq!(net.topological_order(), ["A"]);
    }

    #[test]
    fn self_parent_is_a_cycle() {
        let mut d = football().to_doc();
        d.nodes[3].parents.push("Win".into());
        d.nodes[3].cpt = d.nodes[3]
            .cpt
            .iter()
            .flat_map(|r| [r.clone(), r.clone()])
            .collect();
        let err = Network::from_doc(&d, DEFAULT_MAX_VARIABLES).unwrap_err();
        assert_eq!(err, ValidationError::Cycle(vec!["Win".into(), "Win".into()]));
    }

    #[test]
    fn longer_cycle_is_named() {
        let d = doc(
            r#"{"variables":[{"name":"A","states":["0","1"]},{"name":"B","states":["0","1"]},
                             {"name":"C","states":["0","1"]}],
                "nodes":[{"var":"A","parents":["C"],"cpt":[[1,0],[0,1]]},
                         {"var":"B","parents":["A"],"cpt":[[1,0],[0,1]]},
                         {"var":"C","parents":["B"],"cpt":[[1,0],[0,1]]}]}"#,
        );
        match Network::from_doc(&d, 24).unwrap_err() {
            ValidationError::Cycle(path) => {
                assert_eq!(path.len(), 4);
                assert_eq!(path.first(), path.last());
                let msg = ValidationError::Cycle(path).to_string();
                assert!(msg.contains("A") && msg.contains("B") && msg.contains("C"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let base = football().to_doc();

        let mut d = base.clone();
        d.nodes[3].parents[0] = "Weather".into();
        assert!(matches!(
            Network::from_doc(&d, 24),
            Err(ValidationError::UnknownParent { .. })
        ));

        let mut d = base.clone();
        d.variables.push(d.variables[0].clone());
        assert_eq!(
            Network::from_doc(&d, 24).unwrap_err(),
            ValidationError::DuplicateVariable("Sus".into())
        );

        let mut d = base.clone();
        d.nodes.pop();
        assert_eq!(
            Network::from_doc(&d, 24).unwrap_err(),
            ValidationError::MissingNode("Win".into())
        );

        let mut d = base.clone();
        d.variables[1].states = vec!["dry".into(), "dry".into()];
        assert!(matches!(
            Network::from_doc(&d, 24),
            Err(ValidationError::DuplicateState { .. })
        ));

        let mut d = base.clone();
        d.variables[1].name.clear();
        assert_eq!(Network::from_doc(&d, 24).unwrap_err(), ValidationError::EmptyName);

        assert!(matches!(
            Network::from_doc(&base, 3),
            Err(ValidationError::TooManyVariables { count: 4, max: 3 })
        ));
    }

    #[test]
    fn row_sum_tolerance() {
        let mut d = football().to_doc();
        d.nodes[0].cpt[0] = vec![0.6, 0.4000005];
        let net = Network::from_doc(&d, 24).unwrap();
        let row = net.node(0).cpt().row(0);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);

        d.nodes[3].cpt[2] = vec![0.5, 0.4];
        assert_eq!(
            Network::from_doc(&d, 24).unwrap_err(),
            ValidationError::RowSum {
                node: "Win".into(),
                row: 2,
                sum: 0.9
            }
        );

        let mut d = football().to_doc();
        d.nodes[3].cpt.pop();
        assert!(matches!(
            Network::from_doc(&d, 24),
            Err(ValidationError::RowCount {
                expected: 8,
                found: 7,
                ..
            })
        ));

        let mut d = football().to_doc();
        d.nodes[0].cpt[0] = vec![1.2, -0.2];
        assert!(matches!(
            Network::from_doc(&d, 24),
            Err(ValidationError::BadProbability { .. })
        ));
    }

    #[test]
    fn parse_error() {
        assert!(matches!(load_network("{\"variables\": ["), Err(Error::Parse(_))));
    }

    #[test]
    fn topological_orders() {
        assert_eq!(football().topological_order(), ["Sus", "Field", "Bonus", "Win"]);
        assert_eq!(coin().topological_order(), ["C", "E2"]);

        // declared child-first: parents must still precede
        let d = doc(
            r#"{"variables":[{"name":"Z","states":["0","1"]},{"name":"A","states":["0","1"]}],
                "nodes":[{"var":"Z","parents":["A"],"cpt":[[1,0],[0,1]]},
                         {"var":"A","parents":[],"cpt":[[0.5,0.5]]}]}"#,
        );
        assert_eq!(Network::from_doc(&d, 24).unwrap().topological_order(), ["A", "Z"]);
    }

    #[test]
    fn joint_examples() {
        let a: Assignment = [
            ("Sus", "no-sus"),
            ("Field", "dry"),
            ("Bonus", "bonus"),
            ("Win", "win"),
        ]
        .into_iter()
        .collect();
        let p = football().joint_probability(&a).unwrap();
        assert!((p - 0.4 * 0.7 * 0.2 * 0.7).abs() < 1e-15);
        assert!((p - 0.0392).abs() < 1e-12);

        let c = Assignment::new().with("C", "fair").with("E2", "head");
        assert!((coin().joint_probability(&c).unwrap() - 0.40).abs() < 1e-15);
    }

    #[test]
    fn joint_zero_factor() {
        let net = load_network(
            r#"{"variables":[{"name":"A","states":["t","f"]},{"name":"B","states":["t","f"]}],
                "nodes":[{"var":"A","parents":[],"cpt":[[0.3,0.7]]},
                         {"var":"B","parents":["A"],"cpt":[[1,0],[0.5,0.5]]}]}"#,
        )
        .unwrap();
        let a = Assignment::new().with("A", "t").with("B", "f");
        assert_eq!(net.joint_probability(&a).unwrap(), 0.0);
    }

    #[test]
    fn joint_errors() {
        let net = football();
        let partial = Assignment::new().with("Sus", "sus");
        assert!(matches!(
            net.joint_probability(&partial),
            Err(Error::IncompleteAssignment(_))
        ));
        let bad = Assignment::new()
            .with("Sus", "maybe")
            .with("Field", "dry")
            .with("Bonus", "bonus")
            .with("Win", "win");
        assert!(matches!(
            net.joint_probability(&bad),
            Err(Error::UnknownState { .. })
        ));
    }

    #[test]
    fn descendant_examples() {
        let net = football();
        assert!(net.descendants("Win").unwrap().is_empty());
        assert_eq!(
            net.descendants("Sus").unwrap(),
            BTreeSet::from(["Win".to_string()])
        );

        let nc = football_nocall();
        assert_eq!(
            nc.descendants("Win").unwrap(),
            BTreeSet::from(["NoCall".to_string()])
        );
        assert_eq!(
            nc.descendants("Sus").unwrap(),
            BTreeSet::from(["Win".to_string(), "NoCall".to_string()])
        );
        assert!(matches!(net.descendants("Rain"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn doc_round_trip() {
        let net = football();
        assert_eq!(Network::from_doc(&net.to_doc(), 24).unwrap(), net);
    }
}
