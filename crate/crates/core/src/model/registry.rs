//! Classification levels, the reference nomenclatures and the
//! subject-category registry.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Granularity at which publications are assigned to fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    SubjectCategory,
    OstDiscipline,
    ErcSubfield,
}

impl Level {
    pub const ALL: [Level; 3] = [
        Level::SubjectCategory,
        Level::OstDiscipline,
        Level::ErcSubfield,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::SubjectCategory => "subject-category",
            Level::OstDiscipline => "ost-discipline",
            Level::ErcSubfield => "erc-subfield",
        }
    }

    /// Column-name friendly form, e.g. `ost_discipline`.
    pub fn snake(self) -> &'static str {
        match self {
            Level::SubjectCategory => "subject_category",
            Level::OstDiscipline => "ost_discipline",
            Level::ErcSubfield => "erc_subfield",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "subject-category" | "category" | "sc" => Ok(Level::SubjectCategory),
            "ost-discipline" | "discipline" | "ost" => Ok(Level::OstDiscipline),
            "erc-subfield" | "erc" => Ok(Level::ErcSubfield),
            _ => Err(ModelError::UnknownLevel(s.to_string())),
        }
    }
}

/// Dense index of a field within one level of a registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldId(pub u32);

impl FieldId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The 11 OST disciplines with their abbreviations.
pub const OST_DISCIPLINES: [(&str, &str); 11] = [
    ("Applied biology - Ecology", "App. Bio. - Eco."),
    ("Fundamental biology", "Fund. bio."),
    ("Chemistry", "Chemistry"),
    ("Computer science", "Comp. Sc."),
    ("Mathematics", "Maths"),
    ("Physics", "Physics"),
    ("Medical research", "Medical R."),
    ("Engineering", "Engineering"),
    (
        "Earth sciences - Astronomy - Astrophysics",
        "Earth sc., Astro.",
    ),
    ("Humanities", "Humanities"),
    ("Social sciences", "Soc. Sc."),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErcPanel {
    /// Life Sciences
    LS,
    /// Physical Sciences and Engineering
    PE,
    /// Social Sciences and Humanities
    SH,
}

/// The 25 ERC sub-fields: (id, panel, wording).
pub const ERC_SUBFIELDS: [(&str, ErcPanel, &str); 25] = [
    (
        "SH1",
        ErcPanel::SH,
        "Individuals, Markets and Organizations",
    ),
    (
        "SH2",
        ErcPanel::SH,
        "Institutions, Values, Environment and Space",
    ),
    (
        "SH3",
        ErcPanel::SH,
        "The Social World, Diversity, Population",
    ),
    ("SH4", ErcPanel::SH, "The Human Mind and Its Complexity"),
    ("SH5", ErcPanel::SH, "Cultures and Cultural Production"),
    ("SH6", ErcPanel::SH, "The Study of the Human Past"),
    ("PE1", ErcPanel::PE, "Mathematics"),
    ("PE2", ErcPanel::PE, "Fundamental Constituents of Matter"),
    ("PE3", ErcPanel::PE, "Condensed Matter Physics"),
    (
        "PE4",
        ErcPanel::PE,
        "Physical and Analytical Chemical Sciences",
    ),
    ("PE5", ErcPanel::PE, "Synthetic Chemistry and Materials"),
    ("PE6", ErcPanel::PE, "Computer Science and Informatics"),
    ("PE7", ErcPanel::PE, "Systems and Communication Engineering"),
    ("PE8", ErcPanel::PE, "Products and Processes Engineering"),
    ("PE9", ErcPanel::PE, "Universe Sciences"),
    ("PE10", ErcPanel::PE, "Earth System Science"),
    (
        "LS1",
        ErcPanel::LS,
        "Molecular Biology, Biochemistry, Structural Biology and Molecular Biophysics",
    ),
    (
        "LS2",
        ErcPanel::LS,
        "Genetics, 'Omics', Bioinformatics and Systems Biology",
    ),
    ("LS3", ErcPanel::LS, "Cellular and Developmental Biology"),
    (
        "LS4",
        ErcPanel::LS,
        "Physiology, Pathophysiology and Endocrinology",
    ),
    ("LS5", ErcPanel::LS, "Neuroscience and Neural Disorders"),
    ("LS6", ErcPanel::LS, "Immunity and Infection"),
    (
        "LS7",
        ErcPanel::LS,
        "Applied Medical Technologies, Diagnostics, Therapies and Public Health",
    ),
    (
        "LS8",
        ErcPanel::LS,
        "Ecology, Evolution and Environmental Biology",
    ),
    (
        "LS9",
        ErcPanel::LS,
        "Applied Life Sciences, Biotechnology, and Molecular and Biosystems Engineering",
    ),
];

fn fold(s: &str) -> String {
    s.trim()
        .replace(['\u{2013}', '\u{2014}'], "-")
        .to_lowercase()
}

/// Maps a discipline name or abbreviation to its canonical full name.
pub fn canonical_ost_discipline(name: &str) -> Option<&'static str> {
    let needle = fold(name);
    OST_DISCIPLINES
        .iter()
        .find(|(full, abbr)| fold(full) == needle || fold(abbr) == needle)
        .map(|(full, _)| *full)
}

/// Maps an ERC sub-field id (`PE6`) or its wording to the canonical id.
pub fn canonical_erc_subfield(name: &str) -> Option<&'static str> {
    let needle = fold(name);
    ERC_SUBFIELDS
        .iter()
        .find(|(id, _, wording)| fold(id) == needle || fold(wording) == needle)
        .map(|(id, _, _)| *id)
}

pub fn erc_panel(id: &str) -> Option<ErcPanel> {
    ERC_SUBFIELDS
        .iter()
        .find(|(i, _, _)| *i == id)
        .map(|(_, p, _)| *p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CategoryEntry {
    name: String,
    ost: FieldId,
    erc: FieldId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct NameTable {
    names: Vec<String>,
    index: HashMap<String, FieldId>,
}

impl NameTable {
    fn intern(&mut self, name: &str) -> FieldId {
        if let Some(id) = self.index.get(name) {
            return *id;
        }
        let id = FieldId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }
}

/// Subject-category registry: each category maps to exactly one OST
/// discipline and one ERC sub-field.
///
/// Field ids are dense per level. At the subject-category level the field id
/// of a category is its insertion index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassificationRegistry {
    categories: Vec<CategoryEntry>,
    category_index: HashMap<String, FieldId>,
    ost: NameTable,
    erc: NameTable,
}

impl ClassificationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        category: &str,
        ost_discipline: &str,
        erc_subfield: &str,
    ) -> Result<(), ModelError> {
        if self.category_index.contains_key(category) {
            return Err(ModelError::DuplicateCategory(category.to_string()));
        }
        let ost = self.ost.intern(ost_discipline);
        let erc = self.erc.intern(erc_subfield);
        let id = FieldId(self.categories.len() as u32);
        self.categories.push(CategoryEntry {
            name: category.to_string(),
            ost,
            erc,
        });
        self.category_index.insert(category.to_string(), id);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn contains(&self, category: &str) -> bool {
        self.category_index.contains_key(category)
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.categories.iter().map(|c| {
            (
                c.name.as_str(),
                self.ost.names[c.ost.index()].as_str(),
                self.erc.names[c.erc.index()].as_str(),
            )
        })
    }

    pub fn category_id(&self, category: &str) -> Option<FieldId> {
        self.category_index.get(category).copied()
    }

    /// Field of an already-resolved category at `level`.
    pub fn field_of_id(&self, category: FieldId, level: Level) -> FieldId {
        match level {
            Level::SubjectCategory => category,
            Level::OstDiscipline => self.categories[category.index()].ost,
            Level::ErcSubfield => self.categories[category.index()].erc,
        }
    }

    pub fn field_of(&self, category: &str, level: Level) -> Result<FieldId, ModelError> {
        let id = self
            .category_id(category)
            .ok_or_else(|| ModelError::UnknownCategory(category.to_string()))?;
        Ok(self.field_of_id(id, level))
    }

    pub fn field_count(&self, level: Level) -> usize {
        match level {
            Level::SubjectCategory => self.categories.len(),
            Level::OstDiscipline => self.ost.names.len(),
            Level::ErcSubfield => self.erc.names.len(),
        }
    }

    pub fn field_name(&self, level: Level, field: FieldId) -> &str {
        match level {
            Level::SubjectCategory => &self.categories[field.index()].name,
            Level::OstDiscipline => &self.ost.names[field.index()],
            Level::ErcSubfield => &self.erc.names[field.index()],
        }
    }

    pub fn field_id(&self, level: Level, name: &str) -> Option<FieldId> {
        match level {
            Level::SubjectCategory => self.category_index.get(name).copied(),
            Level::OstDiscipline => self.ost.index.get(name).copied(),
            Level::ErcSubfield => self.erc.index.get(name).copied(),
        }
    }

    pub fn field_names(&self, level: Level) -> impl Iterator<Item = &str> {
        (0..self.field_count(level) as u32).map(move |i| self.field_name(level, FieldId(i)))
    }
}

/// Name of the field `category` belongs to at `level`. Identity at the
/// subject-category level.
pub fn classify<'r>(
    registry: &'r ClassificationRegistry,
    category: &str,
    level: Level,
) -> Result<&'r str, ModelError> {
    let field = registry.field_of(category, level)?;
    Ok(registry.field_name(level, field))
}
