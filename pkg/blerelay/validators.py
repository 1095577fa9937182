# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Validators and field definitions for scenario documents.

A validator is a callable that accepts a raw JSON value and either returns
the converted value or raises :class:`TypeError` / :class:`ValueError`. The
:func:`parse_fields` helper applies a table of :class:`Field` definitions to
one JSON object and reports every violation as a
:class:`~.errors.ScenarioError` naming the offending path.
"""
from collections.abc import Mapping
import numbers

from .errors import ScenarioError


class _OnlyType:
    def __init__(self, type_, preprocess=None, postprocess=None, strict=False):
        def identity(v):
            return v

        self.type = type_
        self.strict = strict
        self.preprocess = identity if preprocess is None else preprocess
        self.postprocess = identity if postprocess is None else postprocess

    def __call__(self, v):
        return self.postprocess(self._validate(self.preprocess(v)))

    def _validate(self, v):
        if isinstance(v, bool) and self.type is not bool:
            raise TypeError(f"Expected an object of type {self.type.__name__}. Received {v}.")
        if isinstance(v, self.type):
            return v
        if self.strict:
            raise TypeError(f"Expected an object of type {self.type.__name__}. "
                            f"Received {v!r} of type {type(v).__name__}.")
        try:
            return self.type(v)
        except Exception:
            raise TypeError(f"Expected an object of type {self.type.__name__}. "
                            f"Received {v!r} of type {type(v).__name__}.")


def _integral(v):
    if isinstance(v, numbers.Real) and not isinstance(v, bool) and int(v) == v:
        return int(v)
    raise TypeError(f"Expected an integer. Received {v!r}.")


def _raise_below(value):
    def is_greater_or_equal(v):
        try:
            if v < value:
                raise ValueError
        except (TypeError, ValueError):
            raise ValueError(f"Expected a number greater than or equal to {value}. "
                             f"Received {v}.")
        return v

    return is_greater_or_equal


def _raise_at_or_below(value):
    def is_greater(v):
        if not v > value:
            raise ValueError(f"Expected a number greater than {value}. Received {v}.")
        return v

    return is_greater


def _is_fraction(value):
    if 0 <= value <= 1:
        return value
    else:
        raise ValueError("Value must be between 0 and 1.")


def _is_duty(value):
    if 0 < value <= 1:
        return value
    else:
        raise ValueError("Value must be in the range (0, 1].")


def _one_of(*choices):
    def is_choice(v):
        if v not in choices:
            raise ValueError("Expected one of {}. Received {!r}.".format(
                ', '.join(repr(c) for c in choices), v))
        return v

    return is_choice


def _optional(validator):
    def none_or_valid(v):
        return None if v is None else validator(v)

    return none_or_valid


_boolean = _OnlyType(bool, strict=True)
_string = _OnlyType(str, strict=True)
_natural_number = _OnlyType(int, preprocess=_integral, postprocess=_raise_below(1))
_nonnegative_int = _OnlyType(int, preprocess=_integral, postprocess=_raise_below(0))
_nonnegative_real = _OnlyType(float, postprocess=_raise_below(0))
_positive_real = _OnlyType(float, postprocess=_raise_at_or_below(0))
_fraction = _OnlyType(float, postprocess=_is_fraction)
_duty = _OnlyType(float, postprocess=_is_duty)


def _identifier(v):
    v = _OnlyType(str, strict=True)(v)
    if not v or any(c.isspace() for c in v):
        raise ValueError(f"Expected a non-empty identifier without whitespace. Received {v!r}.")
    return v


class Field:
    """The definition of a single document field.

    :param name:
        The key of the field in its JSON object.
    :param validator:
        A callable that converts the raw value or raises TypeError/ValueError.
    :param default:
        The value used when the key is absent; ignored if required.
    :param required:
        Whether the key must be present.
    """

    def __init__(self, name, validator=None, default=None, required=False):
        def identity(v):
            return v

        self.name = name
        self.validator = identity if validator is None else validator
        self.default = default
        self.required = required

    def __call__(self, value, path):
        try:
            return self.validator(value)
        except (TypeError, ValueError) as error:
            raise ScenarioError(path, str(error)) from error


def join_path(path, key):
    return key if not path else '{}.{}'.format(path, key)


def expect_mapping(doc, path):
    if not isinstance(doc, Mapping):
        raise ScenarioError(path, "Expected an object, received {!r}.".format(doc))
    return doc


def expect_list(doc, path):
    if not isinstance(doc, list):
        raise ScenarioError(path, "Expected a list, received {!r}.".format(doc))
    return doc


def parse_fields(doc, fields, path, extra=()):
    """Validate one JSON object against a table of fields.

    :param doc:
        The JSON object.
    :param fields:
        A sequence of :class:`Field` definitions.
    :param path:
        The dotted path of doc, used in error messages.
    :param extra:
        Additional keys that are accepted but handled by the caller.
    :returns:
        A dict of validated values for all fields.
    :raises ScenarioError:
        On unknown keys, missing required keys or invalid values.
    """
    expect_mapping(doc, path)
    known = {field.name for field in fields}.union(extra)
    for key in doc:
        if key not in known:
            raise ScenarioError(join_path(path, key), "Unknown key.")
    values = dict()
    for field in fields:
        if field.name in doc:
            values[field.name] = field(doc[field.name], join_path(path, field.name))
        elif field.required:
            raise ScenarioError(join_path(path, field.name), "Missing required key.")
        else:
            values[field.name] = field.default
    return values
