"""
Input validation utilities for dflcarbon.

This module provides the small checks used when scenario files and profile
registries are ingested. Type problems raise SchemaError, range problems
raise ValidationError; both carry the offending field's location.
"""

import math
from typing import Any, Mapping

from dflcarbon.core.exceptions import SchemaError, ValidationError
from dflcarbon.core.field_location import FieldLocation


def require_field(mapping: Any, key: str, location: FieldLocation) -> Any:
    """Fetch a required key from a JSON object.

    Args:
        mapping: The decoded JSON object
        key: Field name
        location: Location of the object itself

    Returns:
        The field value

    Raises:
        SchemaError: If the object is not a mapping or the key is absent
    """
    if not isinstance(mapping, Mapping):
        raise SchemaError(
            f"Expected an object, got {type(mapping).__name__}",
            location=location,
            error_code="C002"
        )
    if key not in mapping:
        raise SchemaError(
            f"Missing required field '{key}'",
            location=location.child(key),
            error_code="C001"
        )
    return mapping[key]


def validate_number(value: Any, location: FieldLocation) -> float:
    """Validate a JSON number (booleans are rejected).

    Raises:
        SchemaError: If value is not an int or float
        ValidationError: If value is NaN, infinite or overflows a float
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(
            f"Expected a number, got {type(value).__name__}",
            location=location,
            error_code="C002"
        )
    try:
        number = float(value)
    except OverflowError:
        raise ValidationError(
            "Value must be finite, got an integer too large for a float",
            location=location,
            error_code="V008"
        )
    if not math.isfinite(number):
        raise ValidationError(
            f"Value must be finite, got {value}",
            location=location,
            error_code="V008"
        )
    return number


def validate_integer(value: Any, location: FieldLocation) -> int:
    """Validate a JSON integer (booleans and floats are rejected)."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(
            f"Expected an integer, got {type(value).__name__}",
            location=location,
            error_code="C002"
        )
    return value


def validate_string(value: Any, location: FieldLocation) -> str:
    """Validate a JSON string."""
    if not isinstance(value, str):
        raise SchemaError(
            f"Expected a string, got {type(value).__name__}",
            location=location,
            error_code="C002"
        )
    return value


def validate_fraction(value: Any, location: FieldLocation) -> float:
    """Validate a number in the closed interval [0, 1]."""
    number = validate_number(value, location)
    if not 0.0 <= number <= 1.0:
        raise ValidationError(
            f"Value must lie in [0, 1], got {number}",
            location=location,
            error_code="V001"
        )
    return number


def validate_positive(value: Any, location: FieldLocation) -> float:
    """Validate a strictly positive number."""
    number = validate_number(value, location)
    if number <= 0.0:
        raise ValidationError(
            f"Value must be > 0, got {number}",
            location=location,
            error_code="V002"
        )
    return number


def validate_non_negative(value: Any, location: FieldLocation) -> float:
    """Validate a number >= 0."""
    number = validate_number(value, location)
    if number < 0.0:
        raise ValidationError(
            f"Value must be >= 0, got {number}",
            location=location,
            error_code="V003"
        )
    return number


def validate_min_int(value: Any, minimum: int, location: FieldLocation) -> int:
    """Validate an integer no smaller than `minimum`."""
    number = validate_integer(value, location)
    if number < minimum:
        raise ValidationError(
            f"Value must be >= {minimum}, got {number}",
            location=location,
            error_code="V004"
        )
    return number


def validate_open_interval(
    value: Any, low: float, high: float, location: FieldLocation
) -> float:
    """Validate low < value < high."""
    number = validate_number(value, location)
    if not low < number < high:
        raise ValidationError(
            f"Value must lie in ({low:g}, {high:g}), got {number}",
            location=location,
            error_code="V005"
        )
    return number


def validate_pue(value: Any, location: FieldLocation) -> float:
    """Validate a Power Usage Effectiveness ratio (>= 1)."""
    number = validate_number(value, location)
    if number < 1.0:
        raise ValidationError(
            f"PUE must be >= 1.0, got {number}",
            location=location,
            error_code="V006"
        )
    return number


def validate_seed(value: Any, location: FieldLocation) -> int:
    """Validate a 64-bit unsigned seed."""
    number = validate_integer(value, location)
    if not 0 <= number < 2 ** 64:
        raise ValidationError(
            f"Seed must be a 64-bit unsigned integer, got {number}",
            location=location,
            error_code="V007"
        )
    return number

