//! Finite Markov chains with exact transition probabilities and an integer
//! score on states or on edges.

use std::collections::{BTreeMap, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::{self, Rational};

/// Score function `g`: either `g(j)` on the state entered, or `g(i, j)` on
/// the edge taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Score {
    State(Vec<i64>),
    Edge(BTreeMap<(usize, usize), i64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    states: Vec<String>,
    transition: RationalMatrix,
    score: Score,
    successors: Vec<Vec<usize>>,
}

impl ChainSpec {
    pub fn new(states: Vec<String>, transition: RationalMatrix, score: Score) -> Result<Self> {
        let m = states.len();
        if m == 0 {
            return Err(Error::InvalidChain("no states".into()));
        }
        if transition.rows() != m || transition.cols() != m {
            return Err(Error::InvalidChain(format!(
                "transition matrix is {}x{} but there are {m} states",
                transition.rows(),
                transition.cols()
            )));
        }
        for (i, a) in states.iter().enumerate() {
            if states[..i].contains(a) {
                return Err(Error::InvalidChain(format!("duplicate state label `{a}`")));
            }
        }
        for (i, label) in states.iter().enumerate() {
            let row = transition.row(i);
            if let Some(v) = row.iter().find(|v| v.is_negative()) {
                return Err(Error::InvalidChain(format!("negative entry {v} in row `{label}`")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::InvalidChain(format!("row `{label}` sums to {sum}, not 1")));
            }
        }
        match &score {
            Score::State(g) if g.len() != m => {
                return Err(Error::InvalidChain(format!("{} state scores for {m} states", g.len())));
            }
            Score::Edge(map) => {
                for &(i, j) in map.keys() {
                    if i >= m || j >= m || transition[(i, j)].is_zero() {
                        return Err(Error::InvalidChain(format!("edge score on ({i},{j}) which is not an edge")));
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        if !transition[(i, j)].is_zero() && !map.contains_key(&(i, j)) {
                            return Err(Error::InvalidChain(format!(
                                "missing edge score for ({},{})",
                                states[i], states[j]
                            )));
                        }
                    }
                }
            }
            Score::State(_) => {}
        }
        let successors = (0..m).map(|i| (0..m).filter(|&j| !transition[(i, j)].is_zero()).collect()).collect();
        Ok(ChainSpec { states, transition, score, successors })
    }

    pub fn with_state_scores(states: Vec<String>, transition: RationalMatrix, g: Vec<i64>) -> Result<Self> {
        Self::new(states, transition, Score::State(g))
    }

    /// Unlabelled states `0..m`.
    pub fn from_matrix(transition: RationalMatrix, g: Vec<i64>) -> Result<Self> {
        let states = (0..transition.rows()).map(|i| i.to_string()).collect();
        Self::with_state_scores(states, transition, g)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transition(&self) -> &RationalMatrix {
        &self.transition
    }

    pub fn score(&self) -> &Score {
        &self.score
    }

    pub fn state_scores(&self) -> Option<&[i64]> {
        match &self.score {
            Score::State(g) => Some(g),
            Score::Edge(_) => None,
        }
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    /// All `(i, j)` with `P_ij > 0`, row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors.iter().enumerate().flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
    }

    /// Score collected when stepping `i -> j`.
    pub fn step_score(&self, i: usize, j: usize) -> i64 {
        match &self.score {
            Score::State(g) => g[j],
            Score::Edge(map) => map.get(&(i, j)).copied().unwrap_or(0),
        }
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.states.iter().position(|s| s == label).ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn replace_score(&self, score: Score) -> Result<Self> {
        Self::new(self.states.clone(), self.transition.clone(), score)
    }

    fn reach(&self, start: usize, reverse: bool) -> Vec<bool> {
        let m = self.len();
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            let next: Box<dyn Iterator<Item = usize>> = if reverse {
                Box::new((0..m).filter(move |&k| !self.transition[(k, i)].is_zero()))
            } else {
                Box::new(self.successors[i].iter().copied())
            };
            for j in next {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }

    /// Strong connectivity of the positive-entry digraph.
    pub fn check_irreducible(&self) -> Result<()> {
        for reverse in [false, true] {
            if let Some(miss) = self.reach(0, reverse).iter().position(|&s| !s) {
                let label = if reverse { &self.states[miss] } else { &self.states[0] };
                return Err(Error::NotIrreducible(label.clone()));
            }
        }
        Ok(())
    }

    /// Period of an irreducible chain: gcd over edges of
    /// `level(i) + 1 - level(j)` for BFS levels from state 0.
    pub fn period(&self) -> Result<u64> {
        self.check_irreducible()?;
        let levels = bfs_levels(self.len(), 0, |i| self.successors[i].clone());
        let d = self.edges().fold(0i64, |acc, (i, j)| acc.gcd(&(levels[i] as i64 + 1 - levels[j] as i64)));
        Ok(d.unsigned_abs())
    }

    pub fn check_aperiodic(&self) -> Result<()> {
        match self.period()? {
            1 => Ok(()),
            d => Err(Error::NotAperiodic(d)),
        }
    }

    pub fn to_file(&self) -> ChainFile {
        let (g, g_edges) = match &self.score {
            Score::State(g) => (Some(g.clone()), None),
            Score::Edge(map) => (None, Some(map.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect())),
        };
        ChainFile { states: self.states.clone(), p: self.transition.to_strings(), g, g_edges }
    }
}

pub(crate) fn bfs_levels(m: usize, start: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut level = vec![usize::MAX; m];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for j in next(i) {
            if level[j] == usize::MAX {
                level[j] = level[i] + 1;
                queue.push_back(j);
            }
        }
    }
    level
}

/// On-disk chain description (JSON).
///
/// Transition entries are rational strings (`"9/20"`) or decimals
/// (`"0.45"`); `g_edges` keys are `"i,j"` with state indices or labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    pub states: Vec<String>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_edges: Option<BTreeMap<String, i64>>,
}

impl ChainFile {
    pub fn parse(text: &str) -> Result<ChainSpec> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let file = Self::from_value(value)?;
        file.into_chain()
    }

    fn from_value(mut value: serde_json::Value) -> Result<ChainFile> {
        // numbers in P are accepted and re-read from their decimal text
        if let Some(rows) = value.get_mut("P").and_then(|p| p.as_array_mut()) {
            for row in rows.iter_mut() {
                if let Some(entries) = row.as_array_mut() {
                    for e in entries.iter_mut() {
                        if e.is_number() {
                            *e = serde_json::Value::String(e.to_string());
                        }
                    }
                }
            }
        }
        serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_chain(self) -> Result<ChainSpec> {
        let rows = self
            .p
            .iter()
            .map(|row| row.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = self.states.len();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidChain(format!("P must be {m}x{m}")));
        }
        let transition = RationalMatrix::from_rows(rows);
        let score = match (self.g, self.g_edges) {
            (Some(g), None) => Score::State(g),
            (None, Some(edges)) => {
                let lookup = |key: &str| -> Result<usize> {
                    let key = key.trim();
                    match self.states.iter().position(|s| s == key) {
                        Some(i) => Ok(i),
                        None => key
                            .parse::<usize>()
                            .ok()
                            .filter(|&i| i < m)
                            .ok_or_else(|| Error::UnknownState(key.to_string())),
                    }
                };
                let mut map = BTreeMap::new();
                for (key, v) in edges {
                    let (a, b) = key
                        .split_once(',')
                        .ok_or_else(|| Error::Parse(format!("edge key `{key}` is not of the form \"i,j\"")))?;
                    map.insert((lookup(a)?, lookup(b)?), v);
                }
                Score::Edge(map)
            }
            (None, None) => return Err(Error::InvalidChain("one of `g` or `g_edges` is required".into())),
            (Some(_), Some(_)) => return Err(Error::InvalidChain("give either `g` or `g_edges`, not both".into())),
        };
        ChainSpec::new(self.states, transition, score)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn cycle3() -> ChainSpec {
        let z = int(0);
        let o = int(1);
        let p = RationalMatrix::from_rows(vec![
            vec![z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone()],
            vec![o, z.clone(), z],
        ]);
        ChainSpec::from_matrix(p, vec![0, 0, 0]).unwrap()
    }

    #[test]
    fn rows_must_sum_to_one() {
        let p = RationalMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 3)], vec![frac(1, 2), frac(1, 2)]]);
        assert!(matches!(ChainSpec::from_matrix(p, vec![0, 0]), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn negative_entries_rejected() {
        let p = RationalMatrix::from_rows(vec![vec![frac(3, 2), frac(-1, 2)], vec![frac(1, 2), frac(1, 2)]]);
        assert!(matches!(ChainSpec::from_matrix(p, vec![0, 0]), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn reducible_chain_detected() {
        let p = RationalMatrix::from_rows(vec![vec![int(1), int(0)], vec![frac(1, 2), frac(1, 2)]]);
        let c = ChainSpec::from_matrix(p, vec![0, 0]).unwrap();
        assert!(matches!(c.check_irreducible(), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn cycle_has_period_three() {
        assert_eq!(cycle3().period().unwrap(), 3);
        assert_eq!(cycle3().check_aperiodic(), Err(Error::NotAperiodic(3)));
    }

    #[test]
    fn edge_scores_must_cover_edges_exactly() {
        let p = RationalMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 2)], vec![int(1), int(0)]]);
        let states = vec!["a".to_string(), "b".to_string()];
        let mut map = BTreeMap::from([((0, 0), 1), ((0, 1), 0)]);
        assert!(ChainSpec::new(states.clone(), p.clone(), Score::Edge(map.clone())).is_err());
        map.insert((1, 0), 2);
        assert!(ChainSpec::new(states.clone(), p.clone(), Score::Edge(map.clone())).is_ok());
        map.insert((1, 1), 2);
        assert!(ChainSpec::new(states, p, Score::Edge(map)).is_err());
    }

    #[test]
    fn parses_chain_file() {
        let text = r#"{
            "states": ["a", "b", "c", "d"],
            "P": [["0.45", "0.45", "0.1", "0"], ["9/20", "9/20", "1/10", "0"], [0, 0, 0, 1], ["1/2", "1/2", "0", "0"]],
            "g": [1, -1, 0, 0]
        }"#;
        let c = ChainFile::parse(text).unwrap();
        assert_eq!(c.transition()[(0, 0)], frac(9, 20));
        assert_eq!(c.transition()[(2, 3)], int(1));
        assert_eq!(c.state_scores().unwrap(), &[1, -1, 0, 0]);
        let round = ChainFile::parse(&serde_json::to_string(&c.to_file()).unwrap()).unwrap();
        assert_eq!(round, c);
    }

    #[test]
    fn parses_edge_scores_by_label() {
        let text = r#"{"states": ["H", "T"], "P": [["1/2", "1/2"], ["1/2", "1/2"]],
            "g_edges": {"H,H": 1, "H,T": 0, "T,H": 0, "1,1": -1}}"#;
        let c = ChainFile::parse(text).unwrap();
        assert_eq!(c.step_score(0, 0), 1);
        assert_eq!(c.step_score(1, 1), -1);
    }
}
