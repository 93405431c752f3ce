"""JSON file formats for matrices, tuples, pencils, certificates, and
representations.

Complex entries are two-element arrays [re, im]; matrices are row-major
nested lists.  Finite doubles round-trip bit-exactly through json's repr
encoding, and NaN/Inf are rejected in both directions.  Every file is an
envelope {"schema_version": "1", "kind": ..., "payload": ...}.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Any

import numpy as np

from .cert import CertReport
from .errors import DataError
from .pencil import LinearPencil, pencil_new
from .represent import PencilRepresentation, SupportCertificate
from .schur import PivotSubspace

__all__ = [
    "SCHEMA_VERSION",
    "encode_matrix",
    "decode_matrix",
    "encode_tuple",
    "decode_tuple",
    "encode_vector",
    "decode_vector",
    "envelope",
    "parse_envelope",
    "pencil_payload",
    "pencil_from_payload",
    "certificate_payload",
    "certificate_from_payload",
    "representation_payload",
    "representation_from_payload",
    "report_payload",
    "dumps",
    "save",
    "load",
]

SCHEMA_VERSION = "1"
KINDS = ("matrix", "tuple", "pencil", "certificate", "representation", "report")


def _check_finite(x: float) -> float:
    if not np.isfinite(x):
        raise DataError("NaN/Inf are not permitted in data files")
    return float(x)


def encode_matrix(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[_check_finite(z.real), _check_finite(z.imag)] for z in row] for row in m]


def decode_matrix(obj: Any) -> np.ndarray:
    try:
        rows = [
            [complex(_check_finite(z[0]), _check_finite(z[1])) for z in row] for row in obj
        ]
    except (TypeError, IndexError) as exc:
        raise DataError(f"malformed matrix payload: {exc}") from exc
    out = np.array(rows, dtype=complex)
    if out.ndim != 2:
        raise DataError("matrix payload must be two-dimensional")
    return out


def encode_vector(v: np.ndarray) -> list:
    return [[_check_finite(z.real), _check_finite(z.imag)] for z in np.asarray(v, dtype=complex)]


def decode_vector(obj: Any) -> np.ndarray:
    return np.array([complex(_check_finite(z[0]), _check_finite(z[1])) for z in obj])


def encode_tuple(x: tuple[np.ndarray, ...]) -> list:
    return [encode_matrix(m) for m in x]


def decode_tuple(obj: Any) -> tuple[np.ndarray, ...]:
    return tuple(decode_matrix(m) for m in obj)


def pencil_payload(p: LinearPencil) -> dict:
    return {"coefficients": [encode_matrix(b) for b in p.coeffs]}


def pencil_from_payload(obj: Any) -> LinearPencil:
    return pencil_new([decode_matrix(b) for b in obj["coefficients"]])


def certificate_payload(cert: SupportCertificate) -> dict:
    return {
        "function": cert.function,
        "base_point": encode_tuple(cert.base_point),
        "v": encode_vector(cert.v),
        "pencil": pencil_payload(cert.pencil),
        "c": _check_finite(cert.c),
        "gradients": [encode_matrix(g) for g in cert.gradients],
        "interval": [cert.interval[0], cert.interval[1]],
        "support_margin": _check_finite(cert.support_margin),
        "scalar_margin": _check_finite(cert.scalar_margin),
        "trace_bound": _check_finite(cert.trace_bound),
        "trace_slack": _check_finite(cert.trace_slack),
        "samples": cert.samples,
        "seed": cert.seed,
    }


def certificate_from_payload(obj: Any) -> SupportCertificate:
    return SupportCertificate(
        function=obj["function"],
        base_point=decode_tuple(obj["base_point"]),
        v=decode_vector(obj["v"]),
        pencil=pencil_from_payload(obj["pencil"]),
        c=float(obj["c"]),
        gradients=tuple(decode_matrix(g) for g in obj["gradients"]),
        interval=(float(obj["interval"][0]), float(obj["interval"][1])),
        support_margin=float(obj["support_margin"]),
        scalar_margin=float(obj["scalar_margin"]),
        trace_bound=float(obj["trace_bound"]),
        trace_slack=float(obj["trace_slack"]),
        samples=int(obj["samples"]),
        seed=int(obj["seed"]),
    )


def representation_payload(rep: PencilRepresentation) -> dict:
    return {
        "pencil": pencil_payload(rep.pencil),
        "pivot_basis": encode_matrix(rep.pivot.basis),
        "state": encode_matrix(rep.state),
        "meta": {k: v for k, v in rep.meta.items() if isinstance(v, (str, int, float))},
    }


def representation_from_payload(obj: Any) -> PencilRepresentation:
    pencil = pencil_from_payload(obj["pencil"])
    basis = decode_matrix(obj["pivot_basis"])
    return PencilRepresentation(
        pencil=pencil,
        pivot=PivotSubspace.from_basis(basis),
        state=decode_matrix(obj["state"]),
        meta=dict(obj.get("meta", {})),
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return encode_matrix(np.atleast_2d(value))
    if isinstance(value, (np.floating, float)):
        return float(value) if np.isfinite(value) else None
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def report_payload(report: CertReport) -> dict:
    return _jsonable(asdict(report))


def envelope(kind: str, payload: Any) -> dict:
    if kind not in KINDS:
        raise DataError(f"unknown file kind {kind!r}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": payload}


def parse_envelope(obj: Any, expect: str | None = None) -> tuple[str, Any]:
    try:
        version = obj["schema_version"]
        kind = obj["kind"]
        payload = obj["payload"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"not a valid data file: {exc}") from exc
    if version != SCHEMA_VERSION:
        raise DataError(f"unsupported schema version {version!r}")
    if kind not in KINDS:
        raise DataError(f"unknown file kind {kind!r}")
    if expect is not None and kind != expect:
        raise DataError(f"expected a {expect} file, found {kind}")
    return kind, payload


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, compact separators, no NaN."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def save(path: str, kind: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(envelope(kind, payload)))
        fh.write("\n")


def _reject_constant(token: str) -> float:
    raise DataError(f"non-finite constant {token!r} is not permitted in data files")


def load(path: str, expect: str | None = None) -> tuple[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise DataError(f"cannot parse {path}: {exc}") from exc
    return parse_envelope(obj, expect)
