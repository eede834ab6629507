//! Cancellation of adjacent opposite turns in a cyclic word over {L, R}.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::CanonicalIndex;
use crate::error::{CurveError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn opposite(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    /// +1 for a counterclockwise turn, −1 for a clockwise one.
    pub fn sign(self) -> f64 {
        match self {
            Letter::L => 1.0,
            Letter::R => -1.0,
        }
    }
}

/// A cyclic word of even length ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.len() < 2 || !letters.len().is_multiple_of(2) {
            return Err(CurveError::InvalidArgument(format!(
                "cyclic words have even length >= 2, got {}",
                letters.len()
            )));
        }
        Ok(CyclicWord(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// `(#L − #R) / 2`; always an integer for even-length words.
    pub fn balance(&self) -> i64 {
        (self.count(Letter::L) as i64 - self.count(Letter::R) as i64) / 2
    }

    /// Terminal words are constant, or the two-letter word with opposite
    /// letters.
    pub fn is_terminal(&self) -> bool {
        find_cancellable(self).is_none()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::L => "L",
                Letter::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for CyclicWord {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'L' | 'l' => Ok(Letter::L),
                'R' | 'r' => Ok(Letter::R),
                other => Err(CurveError::InvalidArgument(format!("not a turn letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        CyclicWord::new(letters)
    }
}

/// First cyclically adjacent pair of opposite letters, scanning from index 0.
/// The two-letter word `LR` has none: its two ends cannot be pulled apart.
pub fn find_cancellable(word: &CyclicWord) -> Option<(usize, usize)> {
    let n = word.len();
    if n <= 2 {
        return None;
    }
    (0..n)
        .map(|i| (i, (i + 1) % n))
        .find(|&(i, j)| word.0[i] != word.0[j])
}

/// All cancellable pairs, in scan order.
pub fn cancellable_pairs(word: &CyclicWord) -> Vec<(usize, usize)> {
    let n = word.len();
    if n <= 2 {
        return Vec::new();
    }
    (0..n)
        .map(|i| (i, (i + 1) % n))
        .filter(|&(i, j)| word.0[i] != word.0[j])
        .collect()
}

/// Removes the adjacent opposite pair `(i, i + 1 mod n)`.
pub fn cancel_step(word: &CyclicWord, pair: (usize, usize)) -> Result<CyclicWord> {
    let n = word.len();
    let (i, j) = pair;
    if n <= 2 || i >= n || j != (i + 1) % n || word.0[i] == word.0[j] {
        return Err(CurveError::InvalidArgument(format!(
            "({i}, {j}) is not a cancellable pair of {word}"
        )));
    }
    let letters = word
        .0
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, &l)| l)
        .collect();
    CyclicWord::new(letters)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    PullEnds,
    Cancel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub kind: EventKind,
    pub positions: (usize, usize),
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceEvent>,
    pub terminal: CanonicalIndex,
    /// Set to `gamma0-or-primed` when the letters end at `LR`.
    pub note: Option<String>,
}

pub const GAMMA0_AMBIGUOUS: &str = "gamma0-or-primed";

impl ReductionTrace {
    pub fn cancel_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|e| e.kind == EventKind::Cancel)
            .count()
    }

    /// One JSON object per event, then a terminal line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.steps {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        let mut terminal = serde_json::json!({
            "kind": "terminal",
            "index": self.terminal.to_string(),
        });
        if let Some(note) = &self.note {
            terminal["note"] = note.clone().into();
        }
        out.push_str(&terminal.to_string());
        out.push('\n');
        out
    }
}

/// Cancels leftmost opposite pairs until the word is terminal.
pub fn reduce(word: &CyclicWord) -> (CanonicalIndex, ReductionTrace) {
    let mut current = word.clone();
    let mut steps = Vec::new();
    while let Some(pair) = find_cancellable(&current) {
        let next = cancel_step(&current, pair).expect("pair came from find_cancellable");
        let before = current.to_string();
        steps.push(TraceEvent {
            kind: EventKind::PullEnds,
            positions: pair,
            before: before.clone(),
            after: before.clone(),
        });
        steps.push(TraceEvent {
            kind: EventKind::Cancel,
            positions: pair,
            before,
            after: next.to_string(),
        });
        current = next;
    }
    let terminal = CanonicalIndex::GammaK(current.balance());
    let note = (current.len() == 2 && current.0[0] != current.0[1])
        .then(|| GAMMA0_AMBIGUOUS.to_string());
    (
        terminal,
        ReductionTrace {
            steps,
            terminal,
            note,
        },
    )
}
