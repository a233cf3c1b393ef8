//! Workflow templates compiled from boxology notation, and the on-disk
//! pattern library.

mod library;
mod template;

pub use library::{load_library, LibraryError, LookupError, PatternLibrary};
pub use template::{
    build_template, compile_template, normalize_id, template_iri, CompileError, TemplateError, TemplateStep,
    TemplateVariable, VariableRole, WorkflowTemplate,
};
