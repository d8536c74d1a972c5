//! Published cubic forms kept as fixtures: the F_5 classes, the F_11
//! classes per quadric, and the representatives over the closure.

use serde::{Deserialize, Serialize};

use crate::families::{CaseTag, QuadricCase};
use crate::field::FiniteField;
use crate::poly::{MPoly, PolyRing};

pub const PUBLISHED_JSON: &str = include_str!("../fixtures/published.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedCubic {
    pub label: String,
    pub cubic: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedSet {
    pub name: String,
    pub case: CaseTag,
    pub q: u32,
    pub epsilon: u32,
    pub quadric: String,
    pub cubics: Vec<PublishedCubic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PublishedFile {
    version: String,
    sets: Vec<PublishedSet>,
}

pub fn published_sets() -> Vec<PublishedSet> {
    let file: PublishedFile = serde_json::from_str(PUBLISHED_JSON).expect("fixture file parses");
    file.sets
}

/// The set named e.g. `"n1-q11"` or `"alc-dege-q11"`.
pub fn published_set(name: &str) -> Option<PublishedSet> {
    published_sets().into_iter().find(|s| s.name == name)
}

impl PublishedSet {
    pub fn quadric_case(&self) -> QuadricCase {
        match self.case {
            CaseTag::N1 => QuadricCase::n1(),
            CaseTag::N2 => QuadricCase::n2(self.epsilon),
            CaseTag::Dege => QuadricCase::dege(),
        }
    }

    /// The cubics parsed over `F`, which must have order `q`.
    pub fn cubics<F: FiniteField>(&self) -> Vec<MPoly<F>> {
        assert_eq!(F::ORDER, self.q, "fixture set {} lives over F_{}", self.name, self.q);
        let ring = PolyRing::xyzw();
        self.cubics
            .iter()
            .map(|c| ring.parse(&c.cubic).expect("fixture cubic parses"))
            .collect()
    }
}
