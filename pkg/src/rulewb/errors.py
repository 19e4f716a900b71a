"""Exception hierarchy shared by all rulewb modules."""


class RulewbError(Exception):
    """Base class for all workbench errors."""

    code = "error"

    def __init__(self, message, location=None):
        super().__init__(message)
        self.message = message
        self.location = location  # (line, column) or a field path, when known


class CsvParseError(RulewbError):
    code = "csv_parse_error"


class DatasetSchemaError(RulewbError):
    code = "dataset_schema_error"


class EmptyDatasetError(RulewbError):
    code = "empty_dataset"


class UnknownAttributeError(RulewbError):
    code = "unknown_attribute"


class OntologyError(RulewbError):
    code = "ontology_error"


class OntologyCycleError(OntologyError):
    code = "ontology_cycle"


class UnknownConceptError(OntologyError):
    code = "unknown_concept"


class ScriptSyntaxError(RulewbError):
    code = "script_syntax_error"


class SchemaValidityError(RulewbError):
    code = "schema_validity_error"


class RuleFileError(RulewbError):
    code = "rule_file_error"


class NothingToUndoError(RulewbError):
    code = "nothing_to_undo"


class SessionError(RulewbError):
    code = "session_error"
