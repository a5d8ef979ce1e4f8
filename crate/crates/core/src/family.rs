use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The four weight families carried through the whole chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Spg,
    Df,
    Gj,
    Jc,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Spg, Family::Df, Family::Gj, Family::Jc];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Spg => "spg",
            Family::Df => "df",
            Family::Gj => "gj",
            Family::Jc => "jc",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family, Error> {
        match s.to_ascii_lowercase().as_str() {
            "spg" => Ok(Family::Spg),
            "df" => Ok(Family::Df),
            "gj" => Ok(Family::Gj),
            "jc" => Ok(Family::Jc),
            other => Err(Error::InvalidFamily(other.to_string())),
        }
    }
}
