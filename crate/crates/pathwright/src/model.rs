//! Recursive causal diagrams and their structural equations.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Directed acyclic causal diagram over named variables, with optional
/// two-headed covariance arcs between exogenous variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    variables: Vec<String>,
    /// (cause, effect) index pairs.
    edges: Vec<(usize, usize)>,
    /// Unordered exogenous pairs, stored with the smaller index first.
    covary: Vec<(usize, usize)>,
}

/// One regression skeleton: an endogenous outcome on all its graph parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralEquation {
    pub outcome: String,
    pub predictors: Vec<String>,
}

impl CausalGraph {
    pub fn new(
        variables: Vec<String>,
        edge_names: &[(String, String)],
        covary_names: &[(String, String)],
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &variables {
            if v.is_empty() || v.chars().any(char::is_whitespace) {
                return Err(Error::InvalidName(v.clone()));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateName(v.clone()));
            }
        }
        let index = |name: &String| -> Result<usize> {
            variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))
        };
        let mut edges = Vec::new();
        for (from, to) in edge_names {
            let (a, b) = (index(from)?, index(to)?);
            if a == b {
                return Err(Error::SelfLoop(from.clone()));
            }
            if edges.contains(&(a, b)) {
                return Err(Error::DuplicateEdge(from.clone(), to.clone()));
            }
            edges.push((a, b));
        }
        let mut covary = Vec::new();
        for (x, y) in covary_names {
            let (a, b) = (index(x)?, index(y)?);
            if a == b {
                return Err(Error::SelfLoop(x.clone()));
            }
            let pair = (a.min(b), a.max(b));
            if !covary.contains(&pair) {
                covary.push(pair);
            }
        }
        let g = Self {
            variables,
            edges,
            covary,
        };
        g.check_acyclic()?;
        for &(a, b) in &g.covary {
            for &v in &[a, b] {
                if !g.is_exogenous(v) {
                    return Err(Error::CovaryOnEndogenous(g.variables[v].clone()));
                }
            }
        }
        Ok(g)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm; leftover nodes sit on a cycle
        let p = self.variables.len();
        let mut indeg = vec![0usize; p];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..p).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if seen < p {
            let culprit = (0..p).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::CycleDetected(self.variables[culprit].clone()));
        }
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn p(&self) -> usize {
        self.variables.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn covary(&self) -> &[(usize, usize)] {
        &self.covary
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.variables[a].clone(), self.variables[b].clone()))
            .collect()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parents(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|&&(_, b)| b == v)
            .map(|&(a, _)| a)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|&&(a, _)| a == v)
            .map(|&(_, b)| b)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_exogenous(&self, v: usize) -> bool {
        self.edges.iter().all(|&(_, b)| b != v)
    }

    /// All strict ancestors of `v`, in declaration order.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut marked = vec![false; self.p()];
        let mut stack = vec![v];
        while let Some(cur) = stack.pop() {
            for a in self.parents(cur) {
                if !marked[a] {
                    marked[a] = true;
                    stack.push(a);
                }
            }
        }
        (0..self.p()).filter(|&i| marked[i]).collect()
    }

    /// Endogenous variables in topological order; ties broken by declaration
    /// order so the output is deterministic.
    pub fn topological_endogenous(&self) -> Vec<usize> {
        let p = self.p();
        let mut indeg = vec![0usize; p];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let mut order = Vec::new();
        let mut done = vec![false; p];
        for _ in 0..p {
            let v = (0..p)
                .find(|&v| !done[v] && indeg[v] == 0)
                .expect("graph validated acyclic");
            done[v] = true;
            order.push(v);
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                }
            }
        }
        order
            .into_iter()
            .filter(|&v| !self.is_exogenous(v))
            .collect()
    }

    /// All variables, exogenous first (declaration order), then endogenous in
    /// topological order.
    pub fn topological_all(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.p()).filter(|&v| self.is_exogenous(v)).collect();
        out.extend(self.topological_endogenous());
        out
    }

    /// One structural equation per endogenous variable, predictors in
    /// declaration order.
    pub fn equations(&self) -> Vec<StructuralEquation> {
        self.topological_endogenous()
            .into_iter()
            .map(|v| StructuralEquation {
                outcome: self.variables[v].clone(),
                predictors: self
                    .parents(v)
                    .into_iter()
                    .map(|a| self.variables[a].clone())
                    .collect(),
            })
            .collect()
    }

    /// Variables with no edge or covary arc touching them.
    pub fn isolated(&self) -> Vec<String> {
        (0..self.p())
            .filter(|&v| {
                self.edges.iter().all(|&(a, b)| a != v && b != v)
                    && self.covary.iter().all(|&(a, b)| a != v && b != v)
            })
            .map(|v| self.variables[v].clone())
            .collect()
    }

    /// Model text serialization; `parse_model` of the output reproduces the
    /// graph exactly.
    pub fn to_model_text(&self) -> String {
        let mut out = format!("var {}\n", self.variables.join(" "));
        for (a, b) in self.edge_names() {
            out.push_str(&format!("path {a} -> {b}\n"));
        }
        for &(a, b) in &self.covary {
            out.push_str(&format!(
                "covary {} <-> {}\n",
                self.variables[a], self.variables[b]
            ));
        }
        out
    }
}

/// Parses the line-based model format:
///
/// ```text
/// var X1 X2 X3 Y
/// path X1 -> X2
/// covary A <-> B
/// ```
pub fn parse_model(path: impl AsRef<Path>) -> Result<CausalGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model_text(&text)
}

pub fn parse_model_text(text: &str) -> Result<CausalGraph> {
    let mut variables: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut covary: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "var" => {
                if toks.len() < 2 {
                    return Err(err("'var' line names no variables".into()));
                }
                variables.extend(toks[1..].iter().map(|s| s.to_string()));
            }
            "path" => {
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(err("expected 'path A -> B'".into()));
                }
                edges.push((toks[1].to_string(), toks[3].to_string()));
            }
            "covary" => {
                if toks.len() != 4 || toks[2] != "<->" {
                    return Err(err("expected 'covary A <-> B'".into()));
                }
                covary.push((toks[1].to_string(), toks[3].to_string()));
            }
            other => return Err(err(format!("unknown directive '{other}'"))),
        }
    }
    CausalGraph::new(variables, &edges, &covary).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => other,
    })
}

/// A 4-variable saturated demo model: every earlier variable feeds every
/// later one.
pub fn demo_full_text() -> &'static str {
    "var X1 X2 X3 Y\n\
     path X1 -> X2\n\
     path X1 -> X3\n\
     path X2 -> X3\n\
     path X1 -> Y\n\
     path X2 -> Y\n\
     path X3 -> Y\n"
}

/// The trimmed chain model X1 -> X2 -> X3 -> Y.
pub fn demo_chain_text() -> &'static str {
    "var X1 X2 X3 Y\n\
     path X1 -> X2\n\
     path X2 -> X3\n\
     path X3 -> Y\n"
}
