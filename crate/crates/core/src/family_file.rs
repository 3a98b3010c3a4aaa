//! On-disk form of a constructed family. Loading re-checks the structural
//! invariants and refuses inconsistent files; numerical identities are left
//! to the checkers so that a corrupted family can still be diagnosed.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{IntervalSet, PiRational, PiecewiseLinear, SqrtProfile};
use crate::construction::{
    build_scaling, build_wavelets, check_dilation, IndexedProfile, PartitionRule, ScalingFamily, SpectralSpec,
    WaveletFamily,
};
use crate::error::{Error, Result};
use crate::folding::per_multiplicity;

pub const FORMAT_VERSION: &str = "framesmith-family/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// sha256 of the canonical JSON of (dilation, sigma, partition rule).
    pub input_digest: String,
    pub tool_version: String,
    /// How σ was obtained, e.g. an example name or an input path.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub version: String,
    pub dilation: i64,
    pub sigma: PiecewiseLinear,
    pub partition_rule: PartitionRule,
    pub partition: Vec<IntervalSet>,
    pub psis: Vec<SqrtProfile>,
    pub phis: Vec<IndexedProfile>,
    pub provenance: Provenance,
}

pub fn input_digest(spec: &SpectralSpec, rule: PartitionRule) -> String {
    let canonical = serde_json::json!({ "dilation": spec.dilation, "sigma": spec.sigma, "partition_rule": rule });
    let bytes = serde_json::to_vec(&canonical).expect("plain JSON values serialize");
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl FamilyFile {
    /// Builds Φ and Ψ from σ and records where they came from.
    pub fn construct(spec: &SpectralSpec, rule: PartitionRule, source: impl Into<String>) -> Result<Self> {
        let phi = build_scaling(spec)?;
        let psi = build_wavelets(spec, rule)?;
        Ok(FamilyFile::from_parts(spec, rule, phi, psi, source))
    }

    pub fn from_parts(
        spec: &SpectralSpec,
        rule: PartitionRule,
        phi: ScalingFamily,
        psi: WaveletFamily,
        source: impl Into<String>,
    ) -> Self {
        FamilyFile {
            version: FORMAT_VERSION.to_string(),
            dilation: spec.dilation,
            sigma: spec.sigma.clone(),
            partition_rule: rule,
            partition: psi.partition,
            psis: psi.psis,
            phis: phi.phis,
            provenance: Provenance {
                input_digest: input_digest(spec, rule),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                source: source.into(),
            },
        }
    }

    pub fn spec(&self) -> SpectralSpec {
        SpectralSpec {
            dilation: self.dilation,
            sigma: self.sigma.clone(),
        }
    }

    pub fn scaling(&self) -> ScalingFamily {
        ScalingFamily {
            dilation: self.dilation,
            phis: self.phis.clone(),
        }
    }

    pub fn wavelets(&self) -> WaveletFamily {
        WaveletFamily {
            dilation: self.dilation,
            sigma: self.sigma.clone(),
            partition: self.partition.clone(),
            psis: self.psis.clone(),
        }
    }

    /// Structural invariants: format version, dilation, digest, disjoint
    /// partition pieces that are injective modulo 2, one wavelet profile
    /// per nonempty piece living on it, and scaling profiles on their
    /// windows [2k−1, 2k+1).
    pub fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::validation(
                "format version",
                format!("expected {FORMAT_VERSION:?}, found {:?}", self.version),
            ));
        }
        check_dilation(self.dilation)?;
        let digest = input_digest(&self.spec(), self.partition_rule);
        if digest != self.provenance.input_digest {
            return Err(Error::validation(
                "provenance digest matches sigma, dilation and partition rule",
                format!("recorded {}, recomputed {digest}", self.provenance.input_digest),
            ));
        }
        for (i, p) in self.partition.iter().enumerate() {
            if per_multiplicity(p).max() > 1 {
                return Err(Error::validation(
                    "partition pieces are injective modulo 2",
                    format!("piece {i} overlaps one of its 2k-translates"),
                ));
            }
            for (j, q) in self.partition.iter().enumerate().skip(i + 1) {
                if !p.intersect(q).is_empty() {
                    return Err(Error::validation(
                        "partition pieces are disjoint",
                        format!("pieces {i} and {j} overlap"),
                    ));
                }
            }
        }
        for (i, psi) in self.psis.iter().enumerate() {
            if !self.partition.iter().any(|p| psi.domain() == p) {
                return Err(Error::validation(
                    "each wavelet profile lives on a partition piece",
                    format!("psi {i} has domain {:?}", psi.domain()),
                ));
            }
        }
        for phi in &self.phis {
            let window = IntervalSet::interval(PiRational::integer(2 * phi.k - 1), PiRational::integer(2 * phi.k + 1));
            if !phi.profile.domain().difference(&window).is_empty() {
                return Err(Error::validation(
                    "scaling profile k lives on [2k-1, 2k+1)",
                    format!("phi {} has domain {:?}", phi.k, phi.profile.domain()),
                ));
            }
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline; deterministic for equal inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("family serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: FamilyFile = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("family JSON line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        f.validate()?;
        Ok(f)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        FamilyFile::from_json(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::construction::examples::example_pwl;

    fn eta() -> FamilyFile {
        let spec = SpectralSpec::new(example_pwl(&rat(1, 2), &rat(1, 2)), 2).unwrap();
        FamilyFile::construct(&spec, PartitionRule::Layered, "pwl:a=1/2,b=1/2").unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let f = eta();
        let text = f.to_json();
        let back = FamilyFile::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
        assert_eq!(f.provenance.input_digest.len(), 64);
    }

    #[test]
    fn tampering_is_refused() {
        let f = eta();
        let mut v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        v["sigma"][0]["beta"] = "2".into();
        let err = FamilyFile::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("digest"), "{err}");

        let mut g = f.clone();
        g.partition.push(g.partition[0].clone());
        assert!(g.validate().unwrap_err().to_string().contains("disjoint"));

        let mut h = f.clone();
        h.version = "other".into();
        assert!(h.validate().is_err());

        let err = FamilyFile::from_json("{\"version\": 3").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn rescaled_profiles_still_load() {
        // scaling ψ̂ keeps the structure; the checkers report the damage
        let mut f = eta();
        f.psis = f.wavelets().scaled(&rat(101, 100)).psis;
        assert!(FamilyFile::from_json(&f.to_json()).is_ok());
    }
}
