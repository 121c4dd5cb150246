use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActorKind {
    Country,
    Institution,
}

impl ActorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActorKind::Country => "country",
            ActorKind::Institution => "institution",
        }
    }
}

impl fmt::Display for ActorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActorKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "country" | "countries" => Ok(ActorKind::Country),
            "institution" | "institutions" => Ok(ActorKind::Institution),
            other => Err(ModelError::UnknownActorKind(other.to_string())),
        }
    }
}

/// Institution size/orientation group. Reporting metadata only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    G1,
    G2,
    G3,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::G1 => "G1",
            Group::G2 => "G2",
            Group::G3 => "G3",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "G1" => Ok(Group::G1),
            "G2" => Ok(Group::G2),
            "G3" => Ok(Group::G3),
            _ => Err(ModelError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Actor {
    pub id: String,
    pub kind: ActorKind,
    pub group: Option<Group>,
    pub display_name: String,
}

impl Actor {
    pub fn new(
        id: impl Into<String>,
        kind: ActorKind,
        group: Option<Group>,
        display_name: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        if group.is_some() && kind != ActorKind::Institution {
            return Err(ModelError::GroupOnNonInstitution(id));
        }
        Ok(Actor {
            id,
            kind,
            group,
            display_name: display_name.into(),
        })
    }
}

/// Known actors keyed by id. Actors absent from the registry are still
/// counted; they simply have no display name or group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActorRegistry {
    actors: BTreeMap<String, Actor>,
}

impl ActorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, actor: Actor) -> Result<(), ModelError> {
        if self.actors.contains_key(&actor.id) {
            return Err(ModelError::DuplicateActor(actor.id));
        }
        self.actors.insert(actor.id.clone(), actor);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Actor> {
        self.actors.get(id)
    }

    pub fn len(&self) -> usize {
        self.actors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Actor> {
        self.actors.values()
    }
}
