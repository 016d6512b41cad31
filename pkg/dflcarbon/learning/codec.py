"""
Model wire format.

    magic     4 bytes  b"GDFL"
    version   u16 LE   1
    layers    u16 LE   L
    per layer u32 LE   rows, cols, bias length
    values    f32 LE   P parameters in layer order

Total length is 8 + 12 * L + 4 * P.
"""

import struct

import numpy as np

from dflcarbon.core.exceptions import BadMagic, LengthMismatch, VersionMismatch
from dflcarbon.learning.mlp import ModelParams, param_count

MAGIC = b"GDFL"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHH")
_LAYER = struct.Struct("<III")


def serialized_length(model: ModelParams) -> int:
    """Byte length of serialize_model(model) without building it."""
    return _HEADER.size + _LAYER.size * len(model.layer_shapes) + 4 * model.size


def serialize_model(model: ModelParams) -> bytes:
    """Encode a model deterministically."""
    parts = [_HEADER.pack(MAGIC, FORMAT_VERSION, len(model.layer_shapes))]
    for rows, cols in model.layer_shapes:
        parts.append(_LAYER.pack(rows, cols, cols))
    parts.append(model.values.astype("<f4").tobytes())
    return b"".join(parts)


def deserialize_model(payload: bytes) -> ModelParams:
    """Decode bytes written by serialize_model.

    Raises:
        BadMagic: Payload does not start with b"GDFL"
        VersionMismatch: Unsupported format version
        LengthMismatch: Truncated or over-long payload, or inconsistent bias length
    """
    if len(payload) < _HEADER.size:
        raise LengthMismatch(f"Payload of {len(payload)} bytes is shorter than the header",
                             error_code="L009")
    magic, version, layers = _HEADER.unpack_from(payload, 0)
    if magic != MAGIC:
        raise BadMagic(f"Bad magic bytes {magic!r}", error_code="L007")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"Unsupported model format version {version}", error_code="L008")

    offset = _HEADER.size
    if len(payload) < offset + _LAYER.size * layers:
        raise LengthMismatch("Payload truncated inside the layer table", error_code="L009")
    shapes = []
    for _ in range(layers):
        rows, cols, bias = _LAYER.unpack_from(payload, offset)
        offset += _LAYER.size
        if bias != cols:
            raise LengthMismatch(f"Bias length {bias} does not match {cols} columns",
                                 error_code="L009")
        shapes.append((rows, cols))

    expected = offset + 4 * param_count(shapes)
    if len(payload) != expected:
        raise LengthMismatch(f"Expected {expected} bytes, got {len(payload)}", error_code="L009")
    values = np.frombuffer(payload, dtype="<f4", offset=offset)
    return ModelParams(tuple(shapes), values.astype(np.float32))
