use std::path::PathBuf;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fga::{Backend, Fga, Law};
use crate::root_system::{Lattice, RootDatum, WeylGroup};
use crate::twisted::{Family, WordPolicy, ZBasis};

#[derive(Clone, Debug)]
pub enum DatumSpec {
    Type(String),
    CartanFile(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Everything needed to reproduce a computation: datum, law, family and word choice.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub datum: DatumSpec,
    pub lattice: Lattice,
    /// `None` lets the family pick (`t` needs additive, `tau` multiplicative; otherwise additive).
    pub law: Option<Law>,
    pub family: String,
    pub words: String,
    pub output: OutputFormat,
    pub jobs: Option<usize>,
}

impl Default for SessionConfig {
    fn default() -> SessionConfig {
        SessionConfig {
            datum: DatumSpec::Type("A2".into()),
            lattice: Lattice::SimplyConnected,
            law: None,
            family: "x".into(),
            words: "lexmin".into(),
            output: OutputFormat::Text,
            jobs: None,
        }
    }
}

pub struct Session {
    pub config: SessionConfig,
    pub fga: Arc<Fga>,
    pub family: Arc<Family>,
    pub basis: ZBasis,
}

impl SessionConfig {
    pub fn datum(&self) -> Result<RootDatum> {
        match &self.datum {
            DatumSpec::Type(t) => RootDatum::from_type(t, self.lattice),
            DatumSpec::CartanFile(p) => {
                let text = std::fs::read_to_string(p)?;
                let mut d = RootDatum::from_cartan_file(&text)?;
                if d.lattice() != self.lattice {
                    d = RootDatum::from_cartan(d.cartan().to_vec(), self.lattice)?;
                }
                Ok(d)
            }
        }
    }

    /// The backend implied by the family: `t` brings in `h`, `tau` and `custom` bring in the
    /// extra central variable of their law.
    pub fn backend(&self) -> Result<Backend> {
        let fam = self.family.as_str();
        let law = match (fam, self.law) {
            ("t" | "T", Some(Law::Multiplicative)) => {
                return Err(Error::Config("family t requires the additive law".into()))
            }
            ("tau", Some(Law::Additive)) => return Err(Error::Config("family tau requires the multiplicative law".into())),
            ("su" | "sigma", Some(Law::Multiplicative)) => {
                return Err(Error::Config("family su requires the additive law".into()))
            }
            ("tau", None) => Law::Multiplicative,
            (_, Some(l)) => l,
            (_, None) => Law::Additive,
        };
        let extra = matches!(fam, "t" | "T" | "tau") || fam.starts_with("custom:");
        Backend::new(law, extra && law == Law::Additive, extra && law == Law::Multiplicative)
    }

    pub fn build(&self) -> Result<Session> {
        let datum = Arc::new(self.datum()?);
        let group = Arc::new(WeylGroup::new(&datum)?);
        let fga = Arc::new(Fga::new(datum, group.clone(), self.backend()?));
        let family = Arc::new(Family::from_token(&fga, &self.family)?);
        let policy = WordPolicy::parse(&self.words, &group)?;
        let basis = ZBasis::with_policy(fga.clone(), family.clone(), &policy)?;
        Ok(Session { config: self.clone(), fga, family, basis })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_picks_backend() {
        let mut c = SessionConfig { family: "t".into(), ..Default::default() };
        assert_eq!(c.backend().unwrap(), Backend::ADDITIVE_H);
        c.family = "tau".into();
        assert_eq!(c.backend().unwrap(), Backend::MULTIPLICATIVE_V);
        c.law = Some(Law::Additive);
        assert!(matches!(c.backend(), Err(Error::Config(_))));
        c.family = "y".into();
        c.law = Some(Law::Multiplicative);
        assert_eq!(c.backend().unwrap(), Backend::MULTIPLICATIVE);
        let s = SessionConfig { words: "jcompat:1".into(), ..Default::default() }.build().unwrap();
        assert_eq!(s.basis.words().len(), 6);
    }
}
