//! Verdicts and the typed certificates they carry.

use crate::dual::{DualPair, SeparationValue};
use crate::geometry::{CoverCertificate, EmptinessCertificate};
use crate::num::{serde_opt_scalar, serde_scalar, serde_vector, Scalar};
use crate::primal::{Level, ShiftWitness};
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    /// Grid-based answer for oracle regions at the given resolution.
    Likely {
        holds: bool,
        #[serde(with = "serde_scalar")]
        resolution: Scalar,
    },
    Unknown,
}

impl Status {
    pub fn is_proved(&self) -> bool {
        matches!(self, Status::Proved)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Status::Refuted)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Likely { .. } => "likely",
            Status::Unknown => "unknown",
        }
    }
}

/// Farkas certificate for one pair of pieces of a shifted system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecePairCertificate {
    pub a_piece: usize,
    pub b_piece: usize,
    pub certificate: EmptinessCertificate,
}

/// A shift witness together with the emptiness proofs that make it checkable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedShift {
    pub level: Level,
    #[serde(with = "serde_scalar")]
    pub eps: Scalar,
    pub witness: ShiftWitness,
    pub pairs: Vec<PiecePairCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    Emptiness {
        certificate: EmptinessCertificate,
    },
    CommonPoint {
        #[serde(with = "serde_vector")]
        point: Vector,
    },
    /// Shift witnesses on a schedule; `escape` is the boundary direction of
    /// the (local) difference set that generates them.
    Shifts {
        witnesses: Vec<CertifiedShift>,
        #[serde(default, with = "crate::num::serde_opt_vector", skip_serializing_if = "Option::is_none")]
        escape: Option<Vector>,
    },
    /// A point on the boundary of a set, with a direction leaving it.
    Boundary {
        #[serde(with = "serde_vector")]
        escape: Vector,
        #[serde(with = "serde_opt_scalar")]
        reach: Option<Scalar>,
    },
    /// Zero lies in the interior of the (local) difference set.
    Interior {
        #[serde(with = "serde_opt_scalar")]
        radius: Option<Scalar>,
        cover: CoverCertificate,
    },
    Dual {
        pair: DualPair,
    },
    Separation {
        value: SeparationValue,
        #[serde(default)]
        witnesses: Vec<CertifiedShift>,
    },
    Grid {
        #[serde(with = "serde_scalar")]
        resolution: Scalar,
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status, certificate: Option<Certificate>) -> Self {
        Verdict { status, certificate, notes: Vec::new() }
    }

    pub fn proved(c: Certificate) -> Self {
        Verdict::new(Status::Proved, Some(c))
    }

    pub fn refuted(c: Certificate) -> Self {
        Verdict::new(Status::Refuted, Some(c))
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Verdict { status: Status::Unknown, certificate: None, notes: vec![note.into()] }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
