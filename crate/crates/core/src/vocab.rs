//! Fixed vocabulary: namespaces, classes and properties used by pattern
//! templates, system descriptions and queries.

use crate::graph::{Iri, PrefixMap, Term};

pub const SWEMLS_NS: &str = "https://w3id.org/semsys/ns/swemls#";
pub const RES_NS: &str = "http://semantic-systems.net/swemls/";
pub const PPLAN_NS: &str = "http://purl.org/net/p-plan#";
pub const OPMW_NS: &str = "http://www.opmw.org/ontology/";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const SKOS_NS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const TERMS_NS: &str = "http://purl.org/dc/terms/";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
pub const SKOS_BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
pub const TERMS_TITLE: &str = "http://purl.org/dc/terms/title";

// Classes.
pub const SYSTEM: &str = "https://w3id.org/semsys/ns/swemls#System";
pub const PAPER: &str = "https://w3id.org/semsys/ns/swemls#Paper";
pub const SEMANTIC_WEB_RESOURCE: &str = "https://w3id.org/semsys/ns/swemls#SemanticWebResource";
pub const DATA_RESOURCE: &str = "https://w3id.org/semsys/ns/swemls#DataResource";
pub const STATISTICAL_MODEL: &str = "https://w3id.org/semsys/ns/swemls#StatisticalModel";
pub const SEMANTIC_MODEL: &str = "https://w3id.org/semsys/ns/swemls#SemanticModel";
pub const TASK: &str = "https://w3id.org/semsys/ns/swemls#Task";
pub const APPLICATION_DOMAIN: &str = "https://w3id.org/semsys/ns/swemls#ApplicationDomain";
pub const MATURITY_LEVEL: &str = "https://w3id.org/semsys/ns/swemls#MaturityLevel";
pub const TRAINING_TYPE: &str = "https://w3id.org/semsys/ns/swemls#TrainingType";
pub const SYMBOL_USAGE: &str = "https://w3id.org/semsys/ns/swemls#SymbolUsage";
pub const COUNTRY: &str = "https://w3id.org/semsys/ns/swemls#Country";
pub const WORKFLOW_TEMPLATE_PROCESS_ML: &str = "https://w3id.org/semsys/ns/swemls#WorkflowTemplateProcessML";
pub const WORKFLOW_TEMPLATE_PROCESS_KR: &str = "https://w3id.org/semsys/ns/swemls#WorkflowTemplateProcessKR";
pub const TEMPLATE_ARTIFACT_SW: &str = "https://w3id.org/semsys/ns/swemls#TemplateArtifactSW";
pub const TEMPLATE_ARTIFACT_DATA: &str = "https://w3id.org/semsys/ns/swemls#TemplateArtifactData";
pub const OPMW_WORKFLOW_TEMPLATE: &str = "http://www.opmw.org/ontology/WorkflowTemplate";

// Template properties.
pub const OPMW_IS_STEP_OF_TEMPLATE: &str = "http://www.opmw.org/ontology/isStepOfTemplate";
pub const OPMW_USES: &str = "http://www.opmw.org/ontology/uses";
pub const OPMW_IS_GENERATED_BY: &str = "http://www.opmw.org/ontology/isGeneratedBy";
pub const OPMW_IS_VARIABLE_OF_TEMPLATE: &str = "http://www.opmw.org/ontology/isVariableOfTemplate";
/// Spelled as in the published T-3 template; the upstream P-Plan vocabulary
/// uses `isPrecededBy`. Change here to switch every producer and consumer.
pub const PPLAN_IS_PRECEEDED_BY: &str = "http://purl.org/net/p-plan#isPreceededBy";

// System description properties.
pub const REPORTS: &str = "https://w3id.org/semsys/ns/swemls#reports";
pub const YEAR: &str = "https://w3id.org/semsys/ns/swemls#year";
pub const VENUE: &str = "https://w3id.org/semsys/ns/swemls#venue";
pub const PUBLICATION_TYPE: &str = "https://w3id.org/semsys/ns/swemls#publicationType";
pub const AUTHOR_COUNTRY: &str = "https://w3id.org/semsys/ns/swemls#authorCountry";
pub const KEYWORD: &str = "https://w3id.org/semsys/ns/swemls#keyword";
pub const SUMMARY: &str = "https://w3id.org/semsys/ns/swemls#summary";
pub const LINK: &str = "https://w3id.org/semsys/ns/swemls#link";
pub const HAS_APPLICATION_DOMAIN: &str = "https://w3id.org/semsys/ns/swemls#hasApplicationDomain";
pub const HAS_TASK: &str = "https://w3id.org/semsys/ns/swemls#hasTask";
pub const HAS_MATURITY_LEVEL: &str = "https://w3id.org/semsys/ns/swemls#hasMaturityLevel";
pub const HAS_TRAINING_TYPE: &str = "https://w3id.org/semsys/ns/swemls#hasTrainingType";
pub const HAS_SYMBOL_USAGE: &str = "https://w3id.org/semsys/ns/swemls#hasSymbolUsage";
pub const HAS_SYMBOL_IO: &str = "https://w3id.org/semsys/ns/swemls#hasSymbolIO";
pub const HAS_STATISTICAL_MODEL: &str = "https://w3id.org/semsys/ns/swemls#hasStatisticalModel";
pub const HAS_CORRESPONDING_PATTERN: &str = "https://w3id.org/semsys/ns/swemls#hasCorrespondingPattern";
pub const HAS_STEP_ML: &str = "https://w3id.org/semsys/ns/swemls#hasStepML";
pub const HAS_STEP_KR: &str = "https://w3id.org/semsys/ns/swemls#hasStepKR";
pub const STEP_ORDINAL: &str = "https://w3id.org/semsys/ns/swemls#stepOrdinal";
pub const HAS_SOURCE_VARIABLE: &str = "https://w3id.org/semsys/ns/swemls#hasSourceVariable";
pub const HAS_INTERMEDIATE_VARIABLE: &str = "https://w3id.org/semsys/ns/swemls#hasIntermediateVariable";
pub const HAS_OUTPUT_VARIABLE: &str = "https://w3id.org/semsys/ns/swemls#hasOutputVariable";
pub const COMPONENT_INPUT: &str = "https://w3id.org/semsys/ns/swemls#componentInput";
pub const COMPONENT_OUTPUT: &str = "https://w3id.org/semsys/ns/swemls#componentOutput";
pub const COMPONENT_MODEL: &str = "https://w3id.org/semsys/ns/swemls#componentModel";
pub const HAS_COMPOUND_ELEMENT: &str = "https://w3id.org/semsys/ns/swemls#hasCompoundElement";
pub const HAS_SOURCE_CODE: &str = "https://w3id.org/semsys/ns/swemls#hasSourceCode";
pub const HAS_INFRASTRUCTURE_DESCRIPTION: &str = "https://w3id.org/semsys/ns/swemls#hasInfrastructureDescription";
pub const HAS_EVALUATION_SETUP: &str = "https://w3id.org/semsys/ns/swemls#hasEvaluationSetup";
pub const HAS_PROVENANCE_CAPTURE: &str = "https://w3id.org/semsys/ns/swemls#hasProvenanceCapture";

/// Every property a mapping config may target.
pub const PROPERTIES: &[&str] = &[
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_COMMENT,
    SKOS_BROADER,
    TERMS_TITLE,
    OPMW_IS_STEP_OF_TEMPLATE,
    OPMW_USES,
    OPMW_IS_GENERATED_BY,
    OPMW_IS_VARIABLE_OF_TEMPLATE,
    PPLAN_IS_PRECEEDED_BY,
    REPORTS,
    YEAR,
    VENUE,
    PUBLICATION_TYPE,
    AUTHOR_COUNTRY,
    KEYWORD,
    SUMMARY,
    LINK,
    HAS_APPLICATION_DOMAIN,
    HAS_TASK,
    HAS_MATURITY_LEVEL,
    HAS_TRAINING_TYPE,
    HAS_SYMBOL_USAGE,
    HAS_SYMBOL_IO,
    HAS_STATISTICAL_MODEL,
    HAS_CORRESPONDING_PATTERN,
    HAS_STEP_ML,
    HAS_STEP_KR,
    STEP_ORDINAL,
    HAS_SOURCE_VARIABLE,
    HAS_INTERMEDIATE_VARIABLE,
    HAS_OUTPUT_VARIABLE,
    COMPONENT_INPUT,
    COMPONENT_OUTPUT,
    COMPONENT_MODEL,
    HAS_COMPOUND_ELEMENT,
    HAS_SOURCE_CODE,
    HAS_INFRASTRUCTURE_DESCRIPTION,
    HAS_EVALUATION_SETUP,
    HAS_PROVENANCE_CAPTURE,
];

/// Documentation properties; a missing one is a warning, not a violation.
pub const DOCUMENTATION_PROPERTIES: &[&str] =
    &[HAS_SOURCE_CODE, HAS_INFRASTRUCTURE_DESCRIPTION, HAS_EVALUATION_SETUP, HAS_PROVENANCE_CAPTURE];

pub fn is_known_property(iri: &str) -> bool {
    PROPERTIES.contains(&iri)
}

pub fn iri(constant: &'static str) -> Iri {
    Iri::from_static(constant)
}

pub fn term(constant: &'static str) -> Term {
    Term::Iri(Iri::from_static(constant))
}

/// Named individual under the `res:` namespace, e.g. `res:Domain.Medicine_Health`.
pub fn res(local: &str) -> Iri {
    Iri::new(format!("{RES_NS}{local}")).expect("res: local names are sanitized by callers")
}

pub fn default_prefixes() -> PrefixMap {
    let mut map = PrefixMap::new();
    for (prefix, ns) in [
        ("opmw", OPMW_NS),
        ("p-plan", PPLAN_NS),
        ("rdf", RDF_NS),
        ("rdfs", RDFS_NS),
        ("res", RES_NS),
        ("skos", SKOS_NS),
        ("swemls", SWEMLS_NS),
        ("terms", TERMS_NS),
        ("xsd", XSD_NS),
    ] {
        map.insert(prefix, ns);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn namespaces_match_published_prefix_block() {
        let p = default_prefixes();
        assert_eq!(p.get("swemls"), Some("https://w3id.org/semsys/ns/swemls#"));
        assert_eq!(p.get("res"), Some("http://semantic-systems.net/swemls/"));
        assert_eq!(p.get("p-plan"), Some("http://purl.org/net/p-plan#"));
        assert_eq!(p.get("opmw"), Some("http://www.opmw.org/ontology/"));
    }

    #[test]
    fn constants_are_valid_iris_in_their_namespace() {
        for p in PROPERTIES {
            assert!(Iri::new(*p).is_ok(), "{p}");
        }
        assert!(PPLAN_IS_PRECEEDED_BY.starts_with(PPLAN_NS));
        assert!(PPLAN_IS_PRECEEDED_BY.ends_with("isPreceededBy"));
    }
}
