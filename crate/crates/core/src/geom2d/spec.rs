use serde::{Deserialize, Serialize};

use super::{BoundaryPiece, Domain, GeomError, DEFAULT_N_POLY};

/// JSON form of a domain: `{"pieces": [...], "n_poly": 512}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub pieces: Vec<BoundaryPiece>,
    #[serde(default = "default_n_poly")]
    pub n_poly: usize,
}

fn default_n_poly() -> usize {
    DEFAULT_N_POLY
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Domain, GeomError> {
        Domain::new(self.pieces.clone(), self.n_poly)
    }
}

impl From<&Domain> for DomainSpec {
    fn from(d: &Domain) -> Self {
        DomainSpec {
            pieces: d.pieces().to_vec(),
            n_poly: d.n_poly(),
        }
    }
}
