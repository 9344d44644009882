//! The interleaved two-basis clock register.
//!
//! A clock string of odd length `T = 2τ + 1` has symbols from `{0, 1}` at odd
//! positions and from `{+, −}` at even positions (positions are 1-based).
//! Strings are packed one bit per position with position `p` at bit `T − p`,
//! so `1` and `−` are set bits and numeric order is lexicographic order with
//! `0 < 1` and `+ < −`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::registry::{Named, Registry};

/// Largest clock length for exhaustive graph work.
pub const MAX_GRAPH_T: usize = 25;
/// Largest clock length a packed string can hold.
pub const MAX_T: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClockError {
    #[error("clock length {0} must be odd and at least 3")]
    BadLength(usize),
    #[error("clock length {t} exceeds the limit {max}")]
    TooLong { t: usize, max: usize },
    #[error("symbol {symbol:?} not allowed at position {position}")]
    Symbol { position: usize, symbol: char },
    #[error("time step {t} out of range 0..={max}")]
    TimeOutOfRange { t: usize, max: usize },
    #[error("position {k} needs a following position in a clock of length {t}")]
    PositionOutOfRange { k: usize, t: usize },
    #[error("{0} is a good string")]
    Good(ClockString),
    #[error("{s} has neither \"+1\" nor \"0-\" at positions ({k}, {})", k + 1)]
    NotLocked { s: ClockString, k: usize },
}

pub fn validate_length(t: usize, max: usize) -> Result<(), ClockError> {
    if t < 3 || t.is_multiple_of(2) {
        return Err(ClockError::BadLength(t));
    }
    if t > max {
        return Err(ClockError::TooLong { t, max });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockClass {
    Good,
    Fake,
    Bad,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockString {
    t: usize,
    bits: u64,
}

impl ClockString {
    pub fn from_bits(t: usize, bits: u64) -> Result<Self, ClockError> {
        validate_length(t, MAX_T)?;
        Ok(ClockString {
            t,
            bits: bits & Self::mask(t),
        })
    }

    fn mask(t: usize) -> u64 {
        if t == 64 {
            u64::MAX
        } else {
            (1u64 << t) - 1
        }
    }

    fn bit(t: usize, p: usize) -> u64 {
        1u64 << (t - p)
    }

    /// Length `T`.
    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tau(&self) -> usize {
        self.t / 2
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Whether position `p` (1-based) holds `1` or `−`.
    pub fn is_set(&self, p: usize) -> bool {
        self.bits & Self::bit(self.t, p) != 0
    }

    pub fn symbol(&self, p: usize) -> char {
        match (p % 2 == 1, self.is_set(p)) {
            (true, false) => '0',
            (true, true) => '1',
            (false, false) => '+',
            (false, true) => '-',
        }
    }

    pub fn flip(&self, p: usize) -> Self {
        ClockString {
            t: self.t,
            bits: self.bits ^ Self::bit(self.t, p),
        }
    }

    /// `(t_Z, t_X)` when both words have the prefix form `1^a 0^b` and
    /// `−^c +^d`.
    pub fn format_counts(&self) -> Option<(usize, usize)> {
        fn prefix_len(set: impl Iterator<Item = bool>) -> Option<usize> {
            let mut count = 0;
            let mut ended = false;
            for s in set {
                match (s, ended) {
                    (true, false) => count += 1,
                    (true, true) => return None,
                    (false, _) => ended = true,
                }
            }
            Some(count)
        }
        let tz = prefix_len((1..=self.t).step_by(2).map(|p| self.is_set(p)))?;
        let tx = prefix_len((2..self.t).step_by(2).map(|p| self.is_set(p)))?;
        Some((tz, tx))
    }

    pub fn classify(&self) -> ClockClass {
        match self.format_counts() {
            None => ClockClass::Bad,
            Some((tz, tx)) if tz == tx || tz == tx + 1 => ClockClass::Good,
            Some(_) => ClockClass::Fake,
        }
    }

    pub fn is_good(&self) -> bool {
        self.classify() == ClockClass::Good
    }

    /// Whether the clock-graph edge condition for time step `t` holds
    /// at this string (the condition only inspects positions other than `t`,
    /// so it holds at both endpoints of an edge or at neither).
    pub fn edge_condition(&self, t: usize) -> bool {
        let tt = self.t;
        if t == 1 {
            !self.is_set(2)
        } else if t == tt {
            self.is_set(tt - 1)
        } else {
            // even t: 1 before, 0 after; odd t: − before, + after
            self.is_set(t - 1) && !self.is_set(t + 1)
        }
    }

    /// Neighbours in `G` with their time-step labels, in increasing `t`.
    pub fn neighbors(&self) -> Vec<(ClockString, usize)> {
        if self.is_good() {
            return Vec::new();
        }
        (1..=self.t)
            .filter(|&t| self.edge_condition(t))
            .map(|t| (self.flip(t), t))
            .filter(|(v, _)| !v.is_good())
            .collect()
    }
}

impl fmt::Display for ClockString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (1..=self.t).try_for_each(|p| write!(f, "{}", self.symbol(p)))
    }
}

impl fmt::Debug for ClockString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClockString({self})")
    }
}

impl FromStr for ClockString {
    type Err = ClockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols: Vec<char> = s.trim().chars().collect();
        let t = symbols.len();
        validate_length(t, MAX_T)?;
        let mut bits = 0u64;
        for (i, &c) in symbols.iter().enumerate() {
            let p = i + 1;
            let set = match (p % 2 == 1, c) {
                (true, '0') | (false, '+') => false,
                (true, '1') | (false, '-' | '−') => true,
                _ => return Err(ClockError::Symbol { position: p, symbol: c }),
            };
            if set {
                bits |= Self::bit(t, p);
            }
        }
        Ok(ClockString { t, bits })
    }
}

pub fn classify(s: &ClockString) -> ClockClass {
    s.classify()
}

/// The good string `|t̂⟩`: `t_Z = ⌈t/2⌉` ones and `t_X = ⌊t/2⌋` minus signs.
pub fn good_clock_state(t: usize, big_t: usize) -> Result<ClockString, ClockError> {
    validate_length(big_t, MAX_T)?;
    if t > big_t {
        return Err(ClockError::TimeOutOfRange { t, max: big_t });
    }
    // the good string for time t has exactly positions 1..=t set
    let bits = (1..=t).fold(0u64, |b, p| b | ClockString::bit(big_t, p));
    Ok(ClockString { t: big_t, bits })
}

/// All `2^T` strings in lexicographic order.
pub fn all_strings(t: usize) -> Result<impl Iterator<Item = ClockString>, ClockError> {
    validate_length(t, MAX_GRAPH_T)?;
    Ok((0..1u64 << t).map(move |bits| ClockString { t, bits }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClockCounts {
    pub total: usize,
    pub format: usize,
    pub good: usize,
    pub fake: usize,
    pub bad: usize,
}

pub fn clock_counts(t: usize) -> Result<ClockCounts, ClockError> {
    validate_length(t, MAX_GRAPH_T)?;
    let (good, fake, bad) = (0..1u64 << t)
        .into_par_iter()
        .map(|bits| match (ClockString { t, bits }).classify() {
            ClockClass::Good => (1, 0, 0),
            ClockClass::Fake => (0, 1, 0),
            ClockClass::Bad => (0, 0, 1),
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(ClockCounts {
        total: 1 << t,
        format: good + fake,
        good,
        fake,
        bad,
    })
}

/// The coupling graph on fake and bad strings.
#[derive(Debug, Clone)]
pub struct ClockGraph {
    t: usize,
    vertices: Vec<ClockString>,
    edges: Vec<(ClockString, ClockString, usize)>,
}

impl ClockGraph {
    pub fn t(&self) -> usize {
        self.t
    }

    /// Fake and bad strings in lexicographic order.
    pub fn vertices(&self) -> &[ClockString] {
        &self.vertices
    }

    /// Edges `(u, v, t)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(ClockString, ClockString, usize)] {
        &self.edges
    }

    /// Connected components in order of their smallest vertex; each
    /// component's vertices are sorted.
    pub fn components(&self) -> Vec<Vec<ClockString>> {
        let n = 1usize << self.t;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for &v in &self.vertices {
            if seen[v.bits as usize] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([v]);
            seen[v.bits as usize] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for (w, _) in u.neighbors() {
                    if !seen[w.bits as usize] {
                        seen[w.bits as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

pub fn clock_edges(t: usize) -> Result<ClockGraph, ClockError> {
    validate_length(t, MAX_GRAPH_T)?;
    let vertices: Vec<ClockString> = (0..1u64 << t)
        .into_par_iter()
        .map(|bits| ClockString { t, bits })
        .filter(|s| !s.is_good())
        .collect();
    let mut edges: Vec<_> = vertices
        .par_iter()
        .flat_map_iter(|&u| {
            u.neighbors()
                .into_iter()
                .filter(move |(v, _)| u < *v)
                .map(move |(v, step)| (u, v, step))
        })
        .collect();
    edges.sort_unstable();
    Ok(ClockGraph { t, vertices, edges })
}

/// The bad neighbour the constructive argument picks for a fake string.
pub fn constructive_bad_neighbor(f: &ClockString) -> Option<(ClockString, usize)> {
    let (tz, tx) = f.format_counts()?;
    if tz == tx || tz == tx + 1 {
        return None;
    }
    let tau = f.tau();
    let step = if tx == 0 {
        1
    } else if tx == tau {
        f.len()
    } else {
        2 * tx + 1
    };
    Some((f.flip(step), step))
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    #[serde(rename = "T")]
    pub t: usize,
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone)]
pub struct FakeBadReport {
    pub report: LemmaReport,
    /// Each fake string with one bad neighbour and the edge's time step.
    pub witnesses: BTreeMap<ClockString, (ClockString, usize)>,
}

pub fn check_lemma_comp_fb(t: usize) -> Result<FakeBadReport, ClockError> {
    validate_length(t, MAX_GRAPH_T)?;
    let mut witnesses = BTreeMap::new();
    let mut checked = 0;
    let mut counterexample = None;
    for f in all_strings(t)?.filter(|s| s.classify() == ClockClass::Fake) {
        checked += 1;
        let found = f.neighbors().into_iter().find(|(v, _)| v.classify() == ClockClass::Bad);
        let constructive = constructive_bad_neighbor(&f);
        let constructive_ok =
            constructive.is_some_and(|(v, step)| v.classify() == ClockClass::Bad && f.neighbors().contains(&(v, step)));
        match found {
            Some(w) if constructive_ok => {
                witnesses.insert(f, w);
            }
            Some(_) => {
                counterexample.get_or_insert_with(|| format!("{f}: constructive neighbour is not a bad neighbour"));
            }
            None => {
                counterexample.get_or_insert_with(|| format!("{f}: no bad neighbour"));
            }
        }
    }
    Ok(FakeBadReport {
        report: LemmaReport {
            lemma: "comp_fb",
            t,
            passed: counterexample.is_none(),
            checked,
            counterexample,
        },
        witnesses,
    })
}

fn locked_pair(s: &ClockString, k: usize) -> Option<(char, char)> {
    let pair = (s.symbol(k), s.symbol(k + 1));
    matches!(pair, ('+', '1') | ('0', '-')).then_some(pair)
}

/// Checks that the pair at `(k, k+1)` of `s` is shared by its whole
/// component.
pub fn check_lemma_lock(s: &ClockString, k: usize) -> Result<LemmaReport, ClockError> {
    validate_length(s.len(), MAX_GRAPH_T)?;
    if k == 0 || k >= s.len() {
        return Err(ClockError::PositionOutOfRange { k, t: s.len() });
    }
    if s.is_good() {
        return Err(ClockError::Good(*s));
    }
    let pair = locked_pair(s, k).ok_or(ClockError::NotLocked { s: *s, k })?;
    let mut seen = std::collections::HashSet::from([*s]);
    let mut queue = VecDeque::from([*s]);
    let mut counterexample = None;
    while let Some(u) = queue.pop_front() {
        if (u.symbol(k), u.symbol(k + 1)) != pair {
            counterexample.get_or_insert_with(|| format!("{u} reachable from {s} breaks positions ({k}, {})", k + 1));
        }
        for (w, _) in u.neighbors() {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    Ok(LemmaReport {
        lemma: "lock",
        t: s.len(),
        passed: counterexample.is_none(),
        checked: seen.len(),
        counterexample,
    })
}

/// Every qualifying `(s, k)` at once, one pass per component.
pub fn check_lemma_lock_all(t: usize) -> Result<LemmaReport, ClockError> {
    let graph = clock_edges(t)?;
    let mut checked = 0;
    let mut counterexample = None;
    for comp in graph.components() {
        for k in 1..t {
            let Some(first) = comp.iter().find(|s| locked_pair(s, k).is_some()) else {
                continue;
            };
            let pair = locked_pair(first, k);
            checked += 1;
            if let Some(bad) = comp.iter().find(|u| Some((u.symbol(k), u.symbol(k + 1))) != pair) {
                counterexample.get_or_insert_with(|| {
                    format!(
                        "{bad} shares a component with {first} but not positions ({k}, {})",
                        k + 1
                    )
                });
            }
        }
    }
    Ok(LemmaReport {
        lemma: "lock",
        t,
        passed: counterexample.is_none(),
        checked,
        counterexample,
    })
}

pub fn check_lemma_comp_onef(t: usize) -> Result<LemmaReport, ClockError> {
    let graph = clock_edges(t)?;
    let components = graph.components();
    let counterexample = components.iter().find_map(|comp| {
        let fakes: Vec<_> = comp.iter().filter(|s| s.classify() == ClockClass::Fake).collect();
        (fakes.len() > 1).then(|| format!("component holds fakes {} and {}", fakes[0], fakes[1]))
    });
    Ok(LemmaReport {
        lemma: "comp_onef",
        t,
        passed: counterexample.is_none(),
        checked: components.len(),
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub id: usize,
    pub fake: Option<String>,
    pub bad_count: usize,
}

impl fmt::Display for ComponentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "component {}: fake={} bad_count={}",
            self.id,
            self.fake.as_deref().unwrap_or("none"),
            self.bad_count
        )
    }
}

/// One summary per component, ids in order of smallest vertex. Components
/// with several fake strings list the first.
pub fn component_census(t: usize) -> Result<Vec<ComponentSummary>, ClockError> {
    Ok(clock_edges(t)?
        .components()
        .into_iter()
        .enumerate()
        .map(|(id, comp)| ComponentSummary {
            id,
            fake: comp
                .iter()
                .find(|s| s.classify() == ClockClass::Fake)
                .map(ToString::to_string),
            bad_count: comp.iter().filter(|s| s.classify() == ClockClass::Bad).count(),
        })
        .collect())
}

/// An exhaustive structural check on the clock graph for a given `T`.
pub trait ClockLemma: Named + Send + Sync {
    fn check(&self, t: usize) -> Result<LemmaReport, ClockError>;
}

struct CompFb;
struct Lock;
struct CompOnef;

impl Named for CompFb {
    fn name(&self) -> &'static str {
        "comp_fb"
    }
}
impl ClockLemma for CompFb {
    fn check(&self, t: usize) -> Result<LemmaReport, ClockError> {
        check_lemma_comp_fb(t).map(|r| r.report)
    }
}

impl Named for Lock {
    fn name(&self) -> &'static str {
        "lock"
    }
}
impl ClockLemma for Lock {
    fn check(&self, t: usize) -> Result<LemmaReport, ClockError> {
        check_lemma_lock_all(t)
    }
}

impl Named for CompOnef {
    fn name(&self) -> &'static str {
        "comp_onef"
    }
}
impl ClockLemma for CompOnef {
    fn check(&self, t: usize) -> Result<LemmaReport, ClockError> {
        check_lemma_comp_onef(t)
    }
}

pub fn lemma_registry() -> Registry<dyn ClockLemma> {
    Registry::<dyn ClockLemma>::new("clock lemma")
        .with(Box::new(CompFb))
        .with(Box::new(Lock))
        .with(Box::new(CompOnef))
}
