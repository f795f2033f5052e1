# -*- coding: utf-8 -*-
# Copyright (c) 2026  The cqrel developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
marshmallow schemas for every document read from or written to disk.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional

from marshmallow import (
    Schema,
    ValidationError as MarshmallowValidationError,
    fields,
    post_load,
    validate,
    validates_schema,
)

from cqrel.errors import ParseError, ValidationError

UINT64_MAX = 2**64 - 1


class ExtendedFloat(fields.Field):
    """Float that serializes +/- infinity as the "inf"/"-inf" tokens."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str) and value in ("inf", "-inf"):
            return float(value)
        try:
            return float(value)
        except (TypeError, ValueError):
            raise MarshmallowValidationError("Not a valid number.")


class ComplexVectorSchema(Schema):
    re = fields.List(fields.Float(allow_nan=False), required=True)
    im = fields.List(fields.Float(allow_nan=False), load_default=None)

    @validates_schema
    def validate_lengths(self, data, **kwargs):
        if data.get("im") is not None and len(data["im"]) != len(data["re"]):
            raise MarshmallowValidationError("re and im differ in length", "im")


class StatesSchema(Schema):
    dim = fields.Integer(strict=True, required=True, validate=validate.Range(min=1))
    vectors = fields.List(
        fields.Nested(ComplexVectorSchema),
        required=True,
        validate=validate.Length(min=1),
    )

    @validates_schema
    def validate_dims(self, data, **kwargs):
        for index, vector in enumerate(data["vectors"]):
            if len(vector["re"]) != data["dim"]:
                raise MarshmallowValidationError(
                    "vector %d has %d components, expected %d"
                    % (index, len(vector["re"]), data["dim"]),
                    "vectors",
                )


class ComplexMatrixSchema(Schema):
    re = fields.List(
        fields.List(fields.Float(allow_nan=False)),
        required=True,
        validate=validate.Length(min=1),
    )
    im = fields.List(fields.List(fields.Float(allow_nan=False)), load_default=None)

    @validates_schema
    def validate_square(self, data, **kwargs):
        size = len(data["re"])
        for part in ("re", "im"):
            rows = data.get(part)
            if rows is None:
                continue
            if len(rows) != size or any(len(row) != size for row in rows):
                raise MarshmallowValidationError(
                    "matrix must be %dx%d" % (size, size), part
                )


class ChannelFileSchema(Schema):
    """Schema for the channel file (pure signal states)."""

    format = fields.String(required=True, validate=validate.OneOf(["states", "gram"]))
    states = fields.Nested(StatesSchema, load_default=None)
    gram = fields.Nested(ComplexMatrixSchema, load_default=None)
    prior = fields.List(fields.Float(allow_nan=False), load_default=None)

    @validates_schema
    def validate_representation(self, data, **kwargs):
        fmt = data["format"]
        if data.get(fmt) is None:
            raise MarshmallowValidationError(
                'format "%s" requires the "%s" field' % (fmt, fmt), fmt
            )


class ClassicalChannelFileSchema(Schema):
    """Schema for the classical (commuting) channel file."""

    rows = fields.List(
        fields.List(fields.Float(allow_nan=False), validate=validate.Length(min=1)),
        required=True,
        validate=validate.Length(min=1),
    )
    prior = fields.List(fields.Float(allow_nan=False), load_default=None)

    @validates_schema
    def validate_rows(self, data, **kwargs):
        widths = set(len(row) for row in data["rows"])
        if len(widths) != 1:
            raise MarshmallowValidationError("rows differ in length", "rows")


class PriorFileSchema(Schema):
    prior = fields.List(
        fields.Float(allow_nan=False), required=True, validate=validate.Length(min=1)
    )


def parse_document(document, schema):
    """
    Loads a JSON document (text, bytes or an already decoded dict) with the
    marshmallow `schema`.

    :raises ParseError: if the text is not JSON or the schema rejects it.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except ValueError as e:
            raise ParseError("Document is not valid JSON: %s" % e)
    if not isinstance(document, dict):
        raise ParseError("Document must be a JSON object")
    try:
        return schema.load(document)
    except MarshmallowValidationError as e:
        raise ParseError("Invalid document: %s" % e.messages)


@dataclass
class RunConfig:
    """Validated parameters of one CLI command."""

    command: str
    channel_path: Optional[str] = None
    prior: Optional[str] = None
    r_min: float = 0.0
    r_max: float = 1.0
    points: int = 101
    s_grid: str = "0.1:1.0:0.1"
    sx_grid: str = "1:8:0.25"
    codewords: int = 4
    n: int = 6
    samples: int = 1000
    seed: Optional[int] = None
    r: float = 1.0
    epsilon: Optional[float] = None
    check: str = "all"
    out: Optional[str] = None
    format: str = "structured"
    bits: bool = False
    threads: Optional[int] = None
    pure_states: Optional[str] = None


class RunConfigSchema(Schema):
    command = fields.String(
        required=True,
        validate=validate.OneOf(
            ["capacity", "curve", "zero-rate", "binary", "verify", "classical"]
        ),
    )
    channel_path = fields.String(allow_none=True)
    prior = fields.String(allow_none=True)
    r_min = fields.Float(allow_nan=False)
    r_max = fields.Float(allow_nan=False)
    points = fields.Integer(validate=validate.Range(min=2))
    s_grid = fields.String()
    sx_grid = fields.String()
    codewords = fields.Integer(validate=validate.Range(min=1))
    n = fields.Integer(validate=validate.Range(min=1))
    samples = fields.Integer(validate=validate.Range(min=1))
    seed = fields.Integer(
        allow_none=True, validate=validate.Range(min=0, max=UINT64_MAX)
    )
    r = fields.Float(validate=validate.Range(min=0.0, max=1.0, min_inclusive=False))
    epsilon = fields.Float(allow_none=True)
    check = fields.String(validate=validate.OneOf(["random", "expurgation", "all"]))
    out = fields.String(allow_none=True)
    format = fields.String(validate=validate.OneOf(["csv", "structured"]))
    bits = fields.Boolean()
    threads = fields.Integer(allow_none=True, validate=validate.Range(min=1))
    pure_states = fields.String(allow_none=True)

    @validates_schema
    def validate_ranges(self, data, **kwargs):
        if "r_min" in data and "r_max" in data and not data["r_min"] < data["r_max"]:
            raise MarshmallowValidationError("rmin must be below rmax", "r_min")
        if data.get("r_min", 0.0) < 0.0:
            raise MarshmallowValidationError("rmin must be nonnegative", "r_min")

    @post_load
    def make_config(self, data, **kwargs):
        return RunConfig(**data)


def load_run_config(**options):
    """
    Validates CLI options into a RunConfig.

    :raises ValidationError: naming the offending option.
    """
    options = {k: v for k, v in options.items() if v is not None or k == "seed"}
    try:
        return RunConfigSchema().load(options)
    except MarshmallowValidationError as e:
        raise ValidationError("Invalid options: %s" % e.messages)


class OptimumSchema(Schema):
    value = ExtendedFloat()
    point = fields.List(fields.Float(), allow_none=True)
    grid_step = fields.Float()
    lattice_size = fields.Integer()
    refined = fields.Boolean()


class CapacityReportSchema(Schema):
    """Schema for the capacity report."""

    capacity = ExtendedFloat()
    unit = fields.String()
    prior = fields.List(fields.Float())
    optimizer = fields.Nested(OptimumSchema)


class ZeroRateReportSchema(Schema):
    """Schema for the zero-rate exponent report."""

    zero_rate_exponent = ExtendedFloat()
    unit = fields.String()
    prior = fields.List(fields.Float(), allow_none=True)
    witness = fields.List(fields.Integer(), allow_none=True)


class BinaryScalarsSchema(Schema):
    mu1 = fields.Float()
    mut_prime1 = fields.Float()
    mu_prime1 = fields.Float()
    capacity = fields.Float()
    zero_rate_exponent = fields.Float()


class MonotonicitySchema(Schema):
    reference_epsilon = fields.Float()
    reference_capacity = fields.Float()
    consistent = fields.Boolean()


class BinaryReportSchema(Schema):
    """Schema for the closed-form binary channel report."""

    epsilon = fields.Float()
    unit = fields.String()
    scalars = fields.Nested(BinaryScalarsSchema)
    prior_grid = fields.List(fields.Float())
    lambda1 = fields.List(fields.Float())
    lambda2 = fields.List(fields.Float())
    s_grid = fields.List(fields.Float())
    mu = fields.List(fields.Float())
    st_grid = fields.List(fields.Float())
    mu_tilde = fields.List(fields.Float())
    cross_check_deviation = fields.Float()
    monotonicity = fields.Nested(MonotonicitySchema)


class BoundRowSchema(Schema):
    s = fields.Float()
    rhs = ExtendedFloat()
    passed = fields.Boolean()


class ViolationsSchema(Schema):
    eq6 = fields.Integer()
    union = fields.Integer()
    helstrom = fields.Integer()


class RandomCodingReportSchema(Schema):
    """Schema for the random-coding verification report."""

    kind = fields.String()
    channel_alphabet = fields.Integer()
    prior = fields.List(fields.Float())
    codewords = fields.Integer()
    n = fields.Integer()
    samples = fields.Integer()
    seed = fields.Integer()
    mean_error = fields.Float()
    stderr = fields.Float()
    max_error = fields.Float()
    margin = fields.Float()
    bounds = fields.List(fields.Nested(BoundRowSchema))
    best_rhs = ExtendedFloat()
    violations = fields.Nested(ViolationsSchema)
    passed = fields.Boolean()


class ExpurgationReportSchema(Schema):
    """Schema for the expurgation verification report."""

    kind = fields.String()
    channel_alphabet = fields.Integer()
    prior = fields.List(fields.Float())
    codewords = fields.Integer()
    ensemble_codewords = fields.Integer()
    n = fields.Integer()
    samples = fields.Integer()
    seed = fields.Integer()
    r = fields.Float()
    mean_error_power = fields.Float()
    threshold = fields.Float()
    fraction_clean = fields.Float()
    best_kept_max = fields.Float()
    worst_kept_max = fields.Float()
    expurgated_rhs = ExtendedFloat()
    violations = fields.Nested(ViolationsSchema)
    passed = fields.Boolean()


class ClassicalRowSchema(Schema):
    s = fields.Float()
    rhs = ExtendedFloat()


class ClassicalReportSchema(Schema):
    """Schema for the commuting-case bound report."""

    codewords = fields.Integer()
    n = fields.Integer()
    prior = fields.List(fields.Float())
    random_coding = fields.List(fields.Nested(ClassicalRowSchema))
    random_coding_min = fields.Nested(ClassicalRowSchema)
    expurgated = fields.List(fields.Nested(ClassicalRowSchema))
    expurgated_min = fields.Nested(ClassicalRowSchema)
    cross_check_deviation = fields.Float(allow_none=True)


class CurvePointSchema(Schema):
    R = fields.Float()
    e_r = ExtendedFloat()
    e_ex = ExtendedFloat()
    region = fields.String()
    e_ex_at_limit = fields.Boolean()


class CurveReportSchema(Schema):
    """Schema for the structured exponent curve."""

    unit = fields.String()
    envelope = fields.Boolean()
    prior = fields.List(fields.Float(), allow_none=True)
    points = fields.List(fields.Nested(CurvePointSchema))


class VerifyReportSchema(Schema):
    """Schema for the verification document written by the verify command."""

    passed = fields.Boolean()
    random = fields.Nested(RandomCodingReportSchema, allow_none=True)
    expurgation = fields.Nested(ExpurgationReportSchema, allow_none=True)
