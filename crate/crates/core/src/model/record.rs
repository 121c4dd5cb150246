use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ActorKind, ModelError, StatusSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Article,
    Letter,
    Review,
    Proceeding,
}

impl DocType {
    pub const ALL: [DocType; 4] = [
        DocType::Article,
        DocType::Letter,
        DocType::Review,
        DocType::Proceeding,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Letter => "letter",
            DocType::Review => "review",
            DocType::Proceeding => "proceeding",
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "article" => Ok(DocType::Article),
            "letter" => Ok(DocType::Letter),
            "review" => Ok(DocType::Review),
            "proceeding" | "proceedings" => Ok(DocType::Proceeding),
            other => Err(ModelError::UnknownDocType(other.to_string())),
        }
    }
}

/// Inclusive range of publication years, written `Y1:Y2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YearWindow {
    pub start: i32,
    pub end: i32,
}

impl YearWindow {
    pub fn new(start: i32, end: i32) -> Result<Self, ModelError> {
        if start > end {
            return Err(ModelError::InvalidWindow(format!("{start}:{end}")));
        }
        Ok(YearWindow { start, end })
    }

    pub fn single(year: i32) -> Self {
        YearWindow {
            start: year,
            end: year,
        }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start..=self.end
    }
}

impl fmt::Display for YearWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for YearWindow {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidWindow(s.to_string());
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        YearWindow::new(start, end).map_err(|_| bad())
    }
}

/// One indexed publication, in the line-delimited wire layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub year: i32,
    pub doc_type: DocType,
    #[serde(rename = "oa", default)]
    pub raw_statuses: StatusSet,
    #[serde(rename = "categories")]
    pub subject_categories: Vec<String>,
    #[serde(rename = "doi", default)]
    pub has_doi: bool,
    #[serde(default)]
    pub countries: Vec<String>,
    #[serde(default)]
    pub institutions: Vec<String>,
}

impl PublicationRecord {
    pub fn actors(&self, kind: ActorKind) -> &[String] {
        match kind {
            ActorKind::Country => &self.countries,
            ActorKind::Institution => &self.institutions,
        }
    }

    /// Removes repeated categories and actors, keeping first occurrences.
    pub fn dedup(&mut self) {
        dedup_in_order(&mut self.subject_categories);
        dedup_in_order(&mut self.countries);
        dedup_in_order(&mut self.institutions);
    }
}

fn dedup_in_order(items: &mut Vec<String>) {
    if items.len() < 2 {
        return;
    }
    let mut seen = std::collections::HashSet::with_capacity(items.len());
    items.retain(|s| seen.insert(s.clone()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parse() {
        assert_eq!(
            "2015:2017".parse::<YearWindow>().unwrap(),
            YearWindow {
                start: 2015,
                end: 2017
            }
        );
        assert_eq!(
            "2016".parse::<YearWindow>().unwrap(),
            YearWindow::single(2016)
        );
        assert!("2017:2015".parse::<YearWindow>().is_err());
        assert!("a:b".parse::<YearWindow>().is_err());
        let w = YearWindow::new(2015, 2017).unwrap();
        assert!(w.contains(2015) && w.contains(2017) && !w.contains(2018));
    }

    #[test]
    fn record_wire_names() {
        let line = r#"{"id":"p1","year":2016,"doc_type":"proceeding","oa":["green","gold"],
            "categories":["A","B","A"],"doi":true,"countries":["FRA","FRA","NLD"],"institutions":[],"extra":1}"#;
        let mut rec: PublicationRecord = serde_json::from_str(line).unwrap();
        rec.dedup();
        assert_eq!(rec.doc_type, DocType::Proceeding);
        assert_eq!(rec.raw_statuses.len(), 2);
        assert_eq!(rec.subject_categories, vec!["A", "B"]);
        assert_eq!(rec.countries, vec!["FRA", "NLD"]);
    }
}
