use super::{gen_no_lip, gen_no_qc, gen_no_uc, gen_non_rotund, ForcingCertificate, NoLipCertificate, NoUCCertificate};
use crate::geometry::{asymptotic_directions, rotundity_probe, Body2};
use crate::levelset::QCFunction;
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExtClass {
    Trivial,
    UcExtendable,
    CExtendable,
    QcExtendable,
    NotQcExtendable,
}

impl ExtClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtClass::Trivial => "TRIVIAL",
            ExtClass::UcExtendable => "UC_EXTENDABLE",
            ExtClass::CExtendable => "C_EXTENDABLE",
            ExtClass::QcExtendable => "QC_EXTENDABLE",
            ExtClass::NotQcExtendable => "NOT_QC_EXTENDABLE",
        }
    }
}

impl fmt::Display for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Regularity grades asked of a quasiconvex extension of a function with the same grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Lipschitz,
    UniformlyContinuous,
    Continuous,
    Quasiconvex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    NoQc,
    NonRotund,
    NoUc,
    NoLip,
}

/// Certificate produced by one of the generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    Forcing(ForcingCertificate),
    NoUc(NoUCCertificate),
    NoLip(NoLipCertificate),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::NoQc => "no-qc",
            Generator::NonRotund => "non-rotund",
            Generator::NoUc => "no-uc",
            Generator::NoLip => "no-lip",
        }
    }

    pub fn from_name(s: &str) -> Option<Generator> {
        [Generator::NoQc, Generator::NonRotund, Generator::NoUc, Generator::NoLip]
            .into_iter()
            .find(|g| g.name() == s)
    }

    pub fn run(&self, c: &Body2, settings: &Settings) -> Result<(QCFunction, Certificate)> {
        Ok(match self {
            Generator::NoQc => {
                let (f, cert) = gen_no_qc(c, settings)?;
                (f, Certificate::Forcing(cert))
            }
            Generator::NonRotund => {
                let (f, cert) = gen_non_rotund(c, settings)?;
                (f, Certificate::Forcing(cert))
            }
            Generator::NoUc => {
                let (f, cert) = gen_no_uc(c, settings)?;
                (f, Certificate::NoUc(cert))
            }
            Generator::NoLip => {
                let (f, cert) = gen_no_lip(c, settings)?;
                (f, Certificate::NoLip(cert))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Predicates {
    pub affine: bool,
    pub dim_le_1: bool,
    pub bounded: bool,
    pub rotund: bool,
    pub has_asymptotic_direction: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: ExtClass,
    pub predicates: Predicates,
    pub granted: Vec<Grade>,
    /// Each denied grade with the generator that produces its witness.
    pub denied: Vec<(Grade, Generator)>,
}

impl Classification {
    pub fn grants(&self, g: Grade) -> bool {
        self.granted.contains(&g)
    }

    pub fn witness_for(&self, g: Grade) -> Option<Generator> {
        self.denied.iter().find(|(d, _)| *d == g).map(|(_, w)| *w)
    }
}

/// Sorts a body into the strongest extension grade it supports, with the generator
/// that witnesses each failure.
pub fn characterize(c: &Body2, settings: &Settings) -> Classification {
    // a body always has interior, so it is affine only when it is the whole plane
    let affine = c.base().is_none() && c.cuts().is_empty();
    let bounded = c.is_bounded();
    let rotund = rotundity_probe(c, settings).rotund;
    let asym = !bounded && !asymptotic_directions(c, settings).is_empty();
    let predicates = Predicates { affine, dim_le_1: false, bounded, rotund, has_asymptotic_direction: asym };
    if affine {
        let granted = vec![Grade::Lipschitz, Grade::UniformlyContinuous, Grade::Continuous, Grade::Quasiconvex];
        return Classification { class: ExtClass::Trivial, predicates, granted, denied: vec![] };
    }
    let flat_or_asym = |flat| if asym { Generator::NoQc } else { flat };
    let mut granted = Vec::new();
    let mut denied = vec![(Grade::Lipschitz, Generator::NoLip)];
    if bounded && rotund {
        granted.push(Grade::UniformlyContinuous);
    } else {
        let w = if !rotund { flat_or_asym(Generator::NonRotund) } else { flat_or_asym(Generator::NoUc) };
        denied.push((Grade::UniformlyContinuous, w));
    }
    if rotund && !asym {
        granted.push(Grade::Continuous);
    } else {
        denied.push((Grade::Continuous, flat_or_asym(Generator::NonRotund)));
    }
    if !asym {
        granted.push(Grade::Quasiconvex);
    } else {
        denied.push((Grade::Quasiconvex, Generator::NoQc));
    }
    let class = if granted.contains(&Grade::UniformlyContinuous) {
        ExtClass::UcExtendable
    } else if granted.contains(&Grade::Continuous) {
        ExtClass::CExtendable
    } else if granted.contains(&Grade::Quasiconvex) {
        ExtClass::QcExtendable
    } else {
        ExtClass::NotQcExtendable
    };
    Classification { class, predicates, granted, denied }
}

/// Runs the generator for every denied grade; the first failure is returned.
pub fn witness_all(c: &Body2, cls: &Classification, settings: &Settings) -> Result<Vec<(Grade, Certificate)>> {
    cls.denied
        .iter()
        .map(|(g, w)| {
            w.run(c, settings)
                .map(|(_, cert)| (*g, cert))
                .map_err(|e| Error::Hypothesis(format!("{} for {:?}: {e}", w.name(), g)))
        })
        .collect()
}
