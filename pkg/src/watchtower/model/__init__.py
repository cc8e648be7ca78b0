"""Component model: type-level specs, instance-level composition, validation."""

from watchtower.model.components import (
    Constraint,
    DataTypeDescriptor,
    DaoPackageSpec,
    FieldSpec,
    FunctionSpec,
    ParameterSpec,
    Port,
    SlotSpec,
    ViewSpec,
    WebFormSpec,
    validate_body,
)
from watchtower.model.registry import ComponentRegistry, RegisteredComponent
from watchtower.model.instances import (
    Catena,
    DaoSource,
    DataEntry,
    DerivedSource,
    FormSource,
    FunctionInstance,
    ViewInstance,
    WebFormInstance,
)
from watchtower.model.validation import Diagnostic, ValidationReport, validate_catena
from watchtower.model.binding import BoundFunction, bind_function_instance
from watchtower.model.documents import (
    catena_from_json,
    catena_to_json,
    parse_catena,
    serialize_catena,
)

__all__ = [
    "BoundFunction",
    "Catena",
    "ComponentRegistry",
    "Constraint",
    "DaoPackageSpec",
    "DaoSource",
    "DataEntry",
    "DataTypeDescriptor",
    "DerivedSource",
    "Diagnostic",
    "FieldSpec",
    "FormSource",
    "FunctionInstance",
    "FunctionSpec",
    "ParameterSpec",
    "Port",
    "RegisteredComponent",
    "SlotSpec",
    "ValidationReport",
    "ViewInstance",
    "ViewSpec",
    "WebFormInstance",
    "WebFormSpec",
    "bind_function_instance",
    "catena_from_json",
    "catena_to_json",
    "parse_catena",
    "serialize_catena",
    "validate_body",
    "validate_catena",
]
