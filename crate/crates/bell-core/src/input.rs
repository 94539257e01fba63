//! JSON input documents for algebras, compatibility relations, and triad
//! systems.
//!
//! Schemas (all fields strict, unknown keys rejected):
//!
//! ```json
//! {"space_size": 4, "generators": [[0,1],[0,2]],
//!  "tags": [["y"],["z"]], "weights": ["1/2","1/3","1/12","1/12"]}
//! ```
//!
//! ```json
//! {"observables": ["y","z"], "compatible": [["y","z"]]}
//! ```
//!
//! ```json
//! {"directions": ["x","y","z","y2","z2"],
//!  "triads": [["x","y","z"],["x","y2","z2"]]}
//! ```
//!
//! Tags are optional and parallel to the generators; weights are
//! optional, exact rationals, one per atom of the generated algebra.

use serde::Deserialize;

use crate::contextuality::TriadSystem;
use crate::error::{Error, Result};
use crate::measure::{
    generate_algebra, parse_weight, CompatibilityRelation, Event, ProbabilityMeasure, SampleSpace,
    SigmaAlgebra,
};

/// Generator-set document, optionally with tags and atom weights.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraInputDoc {
    pub space_size: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub tags: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub weights: Option<Vec<String>>,
}

impl AlgebraInputDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Generates the algebra and, when weights are present, the measure.
    pub fn build(&self) -> Result<(SigmaAlgebra, Option<ProbabilityMeasure>)> {
        let space = SampleSpace::new(self.space_size)?;
        if let Some(tags) = &self.tags {
            if tags.len() != self.generators.len() {
                return Err(Error::TagListCount {
                    expected: self.generators.len(),
                    got: tags.len(),
                });
            }
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for (index, members) in self.generators.iter().enumerate() {
            let mut event = Event::from_members(&space, members.iter().copied())?;
            if let Some(tags) = &self.tags {
                event = event.with_tags(tags[index].iter().cloned());
            }
            generators.push(event);
        }
        let algebra = generate_algebra(space, &generators)?;
        let measure = match &self.weights {
            Some(weights) => {
                let parsed: Result<Vec<_>> = weights.iter().map(|w| parse_weight(w)).collect();
                Some(ProbabilityMeasure::new(algebra.clone(), parsed?)?)
            }
            None => None,
        };
        Ok((algebra, measure))
    }
}

/// Observable list plus the compatible pairs among them.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompatibilityDoc {
    pub observables: Vec<String>,
    #[serde(default)]
    pub compatible: Vec<[String; 2]>,
}

impl CompatibilityDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<CompatibilityRelation> {
        CompatibilityRelation::new(
            self.observables.iter().cloned(),
            self.compatible
                .iter()
                .map(|pair| (pair[0].clone(), pair[1].clone())),
        )
    }
}

/// Named directions plus the orthogonal triads over them.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriadDoc {
    pub directions: Vec<String>,
    pub triads: Vec<[String; 3]>,
}

impl TriadDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<TriadSystem> {
        TriadSystem::new(self.directions.clone(), self.triads.clone())
    }
}
