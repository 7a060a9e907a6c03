//! The scenario file format: a strict TOML document with a version field,
//! a kind tag, sampling parameters, optional expected-verdict annotations,
//! and a kind-specific payload. Unknown fields anywhere are rejected.

use std::collections::BTreeMap;

use serde::Deserialize;

pub const SCENARIO_VERSION: u64 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u64,
    pub name: String,
    pub kind: String,
    pub sample: SampleConfig,
    #[serde(default)]
    pub conventions: Option<ConventionsConfig>,
    /// check name -> expected verdict ("PASS", "FAIL", "WARN")
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
    pub payload: toml::Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    #[serde(rename = "box")]
    pub box_bound: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionsConfig {
    pub symplectic_sign: String,
    pub coadjoint_sign: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    /// coordinate names of the wedge factors, e.g. ["x", "y"]
    pub on: Vec<String>,
    pub coeff: String,
}

/// One slot of a 2-form: a list of wedge terms.
pub type FormSlot = Vec<FormTerm>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum PolysympPayload {
    Covelocities {
        nq: usize,
        k: usize,
    },
    Explicit {
        vars: Vec<String>,
        k: usize,
        omega: Vec<FormSlot>,
    },
    Product {
        total_vars: Vec<String>,
        factors: Vec<ProductFactor>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductFactor {
    pub form: Box<PolysympPayload>,
    /// components of the projection from the total chart
    pub projection: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum AlgebraConfig {
    Heisenberg,
    So3,
    Filiform4,
    Abelian { dim: usize },
    Custom { dim: usize, brackets: Vec<BracketEntry> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    /// 1-based basis indices i < j and target l with coefficient c:
    /// [e_i, e_j] += c e_l
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub c: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum PolypoissonPayload {
    FromPolysymplectic {
        form: Box<PolysympPayload>,
    },
    DirectSum {
        algebra: AlgebraConfig,
        k: usize,
    },
    ProductOfPoisson {
        factors: Vec<PoissonFactorConfig>,
    },
    Explicit {
        vars: Vec<String>,
        k: usize,
        /// each frame element is a k x n grid of coefficient strings
        frame: Vec<Vec<Vec<String>>>,
        /// each anchor is an n-vector of coefficient strings
        anchors: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonFactorConfig {
    pub vars: Vec<String>,
    pub pi: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum AvcourantPayload {
    GraphOf {
        structure: Box<PolypoissonPayload>,
    },
    Explicit {
        vars: Vec<String>,
        k: usize,
        sections: Vec<AvSectionConfig>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvSectionConfig {
    pub x: Vec<String>,
    pub eta: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationPayload {
    pub vars: Vec<String>,
    pub k: usize,
    pub gens: Vec<Vec<String>>,
    pub omega: Vec<FormSlot>,
    #[serde(default)]
    pub complement: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum GroupoidPayload {
    Pair {
        form: Box<PolysympPayload>,
        #[serde(default)]
        corrupt: Option<String>,
    },
    Covelocity {
        nq: usize,
        k: usize,
        #[serde(default)]
        corrupt: Option<String>,
    },
    Coadjoint {
        algebra: AlgebraConfig,
        k: usize,
        #[serde(default)]
        corrupt: Option<String>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum ReductionPayload {
    CotangentTranslation {
        nq: usize,
        k: usize,
        axis: usize,
    },
    NilpotentGroup {
        algebra: AlgebraConfig,
        k: usize,
        level: Vec<String>,
        residual_axes: Vec<usize>,
    },
    ProductPlanes {},
    DegenerateLevel {},
    CovelocityGroupoid {
        nq: usize,
        k: usize,
        axis: usize,
    },
    PairGroupoid {},
    TrivialGroupoid {
        nq: usize,
        k: usize,
    },
}

#[derive(Debug)]
pub enum Payload {
    Polysymplectic(PolysympPayload),
    Polypoisson(PolypoissonPayload),
    Avcourant(AvcourantPayload),
    Foliation(FoliationPayload),
    Groupoid(GroupoidPayload),
    Reduction(ReductionPayload),
}

#[derive(Debug)]
pub struct Scenario {
    pub name: String,
    pub sample: SampleConfig,
    pub expect: BTreeMap<String, String>,
    pub payload: Payload,
}

/// Parse and validate scenario bytes. Errors carry the line/column of the
/// first syntactic problem or the path of the offending field.
pub fn parse_scenario(text: &str) -> Result<Scenario, String> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| format!("scenario parse error: {e}"))?;
    if file.version != SCENARIO_VERSION {
        return Err(format!(
            "unsupported scenario version {} (this build reads version {SCENARIO_VERSION})",
            file.version
        ));
    }
    if let Some(conv) = &file.conventions {
        let builtin = polysym_core::report::Conventions::default();
        if conv.symplectic_sign != builtin.symplectic_sign
            || conv.coadjoint_sign != builtin.coadjoint_sign
        {
            return Err(format!(
                "unsupported conventions; this build uses '{}' and '{}'",
                builtin.symplectic_sign, builtin.coadjoint_sign
            ));
        }
    }
    for verdict in file.expect.values() {
        if !matches!(verdict.as_str(), "PASS" | "FAIL" | "WARN" | "ERROR") {
            return Err(format!("invalid expected verdict '{verdict}'"));
        }
    }
    let payload = match file.kind.as_str() {
        "polysymplectic" => Payload::Polysymplectic(sub_payload(file.payload)?),
        "polypoisson" => Payload::Polypoisson(sub_payload(file.payload)?),
        "avcourant" => Payload::Avcourant(sub_payload(file.payload)?),
        "foliation" => Payload::Foliation(sub_payload(file.payload)?),
        "groupoid" => Payload::Groupoid(sub_payload(file.payload)?),
        "reduction" => Payload::Reduction(sub_payload(file.payload)?),
        other => {
            return Err(format!(
                "unknown kind '{other}' (expected polysymplectic, polypoisson, avcourant, foliation, groupoid, or reduction)"
            ))
        }
    };
    Ok(Scenario {
        name: file.name,
        sample: file.sample,
        expect: file.expect,
        payload,
    })
}

fn sub_payload<T: serde::de::DeserializeOwned>(value: toml::Value) -> Result<T, String> {
    T::deserialize(value).map_err(|e| format!("payload error: {e}"))
}
