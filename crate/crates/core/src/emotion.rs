use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The seven emotional states, in the canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Boredom,
    Disgust,
    Happiness,
    Anxiety,
    Neutral,
    Anger,
    Sadness,
}

impl Emotion {
    pub const COUNT: usize = 7;

    pub const ALL: [Emotion; Emotion::COUNT] = [
        Emotion::Boredom,
        Emotion::Disgust,
        Emotion::Happiness,
        Emotion::Anxiety,
        Emotion::Neutral,
        Emotion::Anger,
        Emotion::Sadness,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Emotion> {
        Emotion::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Boredom => "boredom",
            Emotion::Disgust => "disgust",
            Emotion::Happiness => "happiness",
            Emotion::Anxiety => "anxiety",
            Emotion::Neutral => "neutral",
            Emotion::Anger => "anger",
            Emotion::Sadness => "sadness",
        }
    }

    /// Capitalized name used in rendered tables.
    pub fn title(self) -> &'static str {
        match self {
            Emotion::Boredom => "Boredom",
            Emotion::Disgust => "Disgust",
            Emotion::Happiness => "Happiness",
            Emotion::Anxiety => "Anxiety",
            Emotion::Neutral => "Neutral",
            Emotion::Anger => "Anger",
            Emotion::Sadness => "Sadness",
        }
    }

    /// All 21 unordered pairs `(a, b)` with `a` before `b` in canonical order.
    pub fn pairs() -> Vec<(Emotion, Emotion)> {
        let mut out = Vec::with_capacity(21);
        for (i, &a) in Emotion::ALL.iter().enumerate() {
            for &b in &Emotion::ALL[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Emotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Emotion::ALL
            .iter()
            .copied()
            .find(|e| e.as_str() == lower)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Formats a pair as `a-b`.
pub fn pair_name(pair: (Emotion, Emotion)) -> String {
    format!("{}-{}", pair.0, pair.1)
}
