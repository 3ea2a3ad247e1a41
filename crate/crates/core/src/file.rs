//! JSON instance files: a format version, a problem key and a tagged
//! description.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::problems::{Catalog, Problem};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub problem: String,
    pub instance: Instance,
}

impl InstanceFile {
    pub fn new(problem: Catalog, instance: Instance) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            problem: problem.key().to_string(),
            instance,
        }
    }

    /// Parses and checks version, problem key, variant and description
    /// invariants.
    pub fn parse(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format version {}", f.version)));
        }
        f.problem()?.check_variant(&f.instance)?;
        f.instance.validate()?;
        Ok(f)
    }

    pub fn problem(&self) -> Result<Catalog> {
        Catalog::parse(&self.problem)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{generate, GeneratorProfile};
    use crate::instance::{Tail, Variant};
    use proptest::prelude::*;

    #[test]
    fn seq_file_shape() {
        let f = InstanceFile::new(Catalog::Fin, Instance::seq(vec![1], Tail::Const(0)));
        let json = f.to_json();
        assert!(json.contains("\"kind\": \"seq\""));
        assert_eq!(InstanceFile::parse(&json).unwrap(), f);
    }

    #[test]
    fn rejects_unknown_fields_versions_and_variants() {
        let ok = r#"{"version":1,"problem":"fin","instance":{"kind":"seq","data":{"prefix":[1],"tail":{"const":0}}}}"#;
        InstanceFile::parse(ok).unwrap();
        let extra = ok.replace("\"version\":1", "\"version\":1,\"colour\":2");
        assert!(matches!(InstanceFile::parse(&extra), Err(Error::Parse(_))));
        let inner = ok.replace("\"prefix\":[1]", "\"prefix\":[1],\"x\":0");
        assert!(matches!(InstanceFile::parse(&inner), Err(Error::Parse(_))));
        let version = ok.replace("\"version\":1", "\"version\":2");
        assert!(matches!(InstanceFile::parse(&version), Err(Error::Parse(_))));
        let variant = ok.replace("\"fin\"", "\"potop\"");
        assert!(matches!(InstanceFile::parse(&variant), Err(Error::VariantMismatch { .. })));
        let problem = ok.replace("\"fin\"", "\"nope\"");
        assert!(matches!(InstanceFile::parse(&problem), Err(Error::Unknown { .. })));
    }

    fn profiles() -> Vec<GeneratorProfile> {
        let mut out: Vec<GeneratorProfile> = Catalog::ALL
            .iter()
            .map(|&c| GeneratorProfile::new(c, GeneratorProfile::default_variant(c), 0, 256))
            .collect();
        out.push(GeneratorProfile::new(Catalog::BddSeq, Variant::RatSeq, 0, 256));
        out.push(GeneratorProfile::new(Catalog::BddSeq, Variant::RealSeq, 0, 256));
        out
    }

    proptest! {
        #[test]
        fn generated_files_round_trip(seed in 0u64..1000, k in 0u64..50) {
            for p in profiles() {
                let p = GeneratorProfile { seed, ..p };
                let f = InstanceFile::new(p.problem, generate(&p, k));
                prop_assert_eq!(InstanceFile::parse(&f.to_json()).unwrap(), f);
            }
        }
    }
}
