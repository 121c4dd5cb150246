//! Open-access status types and multi-status resolution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// One of the three open-access routes a record can be flagged with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OaType {
    Gold,
    Bronze,
    Green,
}

impl OaType {
    pub const ALL: [OaType; 3] = [OaType::Gold, OaType::Bronze, OaType::Green];

    pub fn as_str(self) -> &'static str {
        match self {
            OaType::Gold => "gold",
            OaType::Bronze => "bronze",
            OaType::Green => "green",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    fn bit(self) -> u8 {
        1 << self.index()
    }
}

impl fmt::Display for OaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OaType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gold" => Ok(OaType::Gold),
            "bronze" => Ok(OaType::Bronze),
            "green" => Ok(OaType::Green),
            other => Err(ModelError::UnknownOaType(other.to_string())),
        }
    }
}

/// Resolved status of a record. `Closed` means no open-access route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OaStatus {
    Gold,
    Bronze,
    Green,
    Closed,
}

impl OaStatus {
    pub fn oa_type(self) -> Option<OaType> {
        match self {
            OaStatus::Gold => Some(OaType::Gold),
            OaStatus::Bronze => Some(OaType::Bronze),
            OaStatus::Green => Some(OaType::Green),
            OaStatus::Closed => None,
        }
    }

    pub fn is_open(self) -> bool {
        self != OaStatus::Closed
    }
}

impl From<OaType> for OaStatus {
    fn from(t: OaType) -> Self {
        match t {
            OaType::Gold => OaStatus::Gold,
            OaType::Bronze => OaStatus::Bronze,
            OaType::Green => OaStatus::Green,
        }
    }
}

/// Raw set of statuses attached to a record, stored as a 3-bit mask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct StatusSet(u8);

impl StatusSet {
    pub const fn empty() -> Self {
        StatusSet(0)
    }

    pub fn insert(&mut self, t: OaType) {
        self.0 |= t.bit();
    }

    pub fn with(mut self, t: OaType) -> Self {
        self.insert(t);
        self
    }

    pub fn contains(self, t: OaType) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = OaType> {
        OaType::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    /// All eight subsets of {gold, bronze, green}.
    pub fn all_subsets() -> impl Iterator<Item = StatusSet> {
        (0u8..8).map(StatusSet)
    }
}

impl FromIterator<OaType> for StatusSet {
    fn from_iter<I: IntoIterator<Item = OaType>>(iter: I) -> Self {
        let mut set = StatusSet::empty();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

impl Serialize for StatusSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for StatusSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let types = Vec::<OaType>::deserialize(deserializer)?;
        Ok(types.into_iter().collect())
    }
}

/// Order in which statuses win when a record carries several of them.
///
/// The default is gold, then bronze, then green: a record that is both gold
/// and green counts as gold only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatusPriority([OaType; 3]);

impl Default for StatusPriority {
    fn default() -> Self {
        StatusPriority([OaType::Gold, OaType::Bronze, OaType::Green])
    }
}

impl StatusPriority {
    pub fn new(order: [OaType; 3]) -> Result<Self, ModelError> {
        let set: StatusSet = order.into_iter().collect();
        if set.len() != 3 {
            return Err(ModelError::InvalidPriority(
                order
                    .iter()
                    .map(|t| t.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        Ok(StatusPriority(order))
    }

    pub fn order(&self) -> [OaType; 3] {
        self.0
    }

    /// Position of `t` in the order; 0 is the highest priority.
    pub fn rank_of(&self, t: OaType) -> usize {
        self.0
            .iter()
            .position(|&o| o == t)
            .expect("priority is a permutation")
    }

    pub fn resolve(&self, raw: StatusSet) -> OaStatus {
        self.0
            .iter()
            .copied()
            .find(|t| raw.contains(*t))
            .map(OaStatus::from)
            .unwrap_or(OaStatus::Closed)
    }
}

impl fmt::Display for StatusPriority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for StatusPriority {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<OaType> = s.split(',').map(str::parse).collect::<Result<_, _>>()?;
        let order: [OaType; 3] = parts
            .try_into()
            .map_err(|_| ModelError::InvalidPriority(s.to_string()))?;
        StatusPriority::new(order).map_err(|_| ModelError::InvalidPriority(s.to_string()))
    }
}

/// Resolves a raw status set with the default gold > bronze > green order.
pub fn resolve_status(raw: StatusSet) -> OaStatus {
    StatusPriority::default().resolve(raw)
}
