"""ChannelSpec files and deterministic JSON output.

A spec is a JSON object::

    {"format": "tempocorr-spec/1", "name": ..., "d_in": 2, "d_out": 2,
     "kind": "kraus" | "unitary" | "coherence_destroying" | "depolarized_unitary",
     "payload": ...}

with payloads ``kraus``: list of matrices; ``unitary``: one matrix;
``coherence_destroying``: rows ``p[i][j]``; ``depolarized_unitary``:
``{"matrix": M, "eps": e}``. Matrices are nested lists of ``[re, im]``
pairs.
"""
import json
import math
from dataclasses import dataclass

import numpy as np

from . import channels
from .errors import TempoCorrError

SPEC_FORMAT = "tempocorr-spec/1"
KINDS = ("kraus", "unitary", "coherence_destroying", "depolarized_unitary")


class SpecError(TempoCorrError):
    """Malformed or inconsistent ChannelSpec."""


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    name: str
    d_in: int
    d_out: int
    kind: str
    payload: object

    def to_dict(self):
        return {
            "format": SPEC_FORMAT,
            "name": self.name,
            "d_in": self.d_in,
            "d_out": self.d_out,
            "kind": self.kind,
            "payload": self.payload,
        }

    def to_channel(self):
        """Build the KrausChannel; raises SpecError on inconsistent payloads."""
        try:
            if self.kind == "kraus":
                ops = [decode_matrix(m) for m in self.payload]
                ch = channels.KrausChannel(tuple(ops), name=self.name)
            elif self.kind == "unitary":
                ch = channels.unitary_channel(decode_matrix(self.payload), name=self.name)
            elif self.kind == "coherence_destroying":
                ch = channels.coherence_destroying(np.asarray(self.payload, dtype=float), name=self.name)
            elif self.kind == "depolarized_unitary":
                ch = channels.depolarized_unitary(decode_matrix(self.payload["matrix"]),
                                                  self.payload["eps"], name=self.name)
            else:
                raise SpecError(f"unknown kind {self.kind!r}")
        except SpecError:
            raise
        except (TempoCorrError, KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"invalid {self.kind} payload: {exc}") from exc
        if (ch.d_in, ch.d_out) != (self.d_in, self.d_out):
            raise SpecError(f"payload acts {ch.d_in} -> {ch.d_out}, spec declares {self.d_in} -> {self.d_out}")
        return ch


def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise SpecError("matrices must be nested lists of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def spec_from_dict(data):
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object")
    if data.get("format", SPEC_FORMAT) != SPEC_FORMAT:
        raise SpecError(f"unsupported spec format {data.get('format')!r}")
    try:
        spec = ChannelSpec(str(data["name"]), int(data["d_in"]), int(data["d_out"]),
                           str(data["kind"]), data["payload"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"missing or malformed field: {exc}") from exc
    if spec.kind not in KINDS:
        raise SpecError(f"unknown kind {spec.kind!r}")
    return spec


def load_spec(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    return spec_from_dict(data)


def spec_for_channel(name, ch):
    """Kraus-kind spec of an arbitrary channel."""
    return ChannelSpec(name, ch.d_in, ch.d_out, "kraus", [encode_matrix(k) for k in ch.kraus])


# ---------------------------------------------------------------------------
# deterministic JSON
# ---------------------------------------------------------------------------

def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if all(c not in text for c in ".eEn"):
        text += ".0"
    return text


def dumps(obj, indent=2):
    """JSON text with fixed key order and floats at 17 significant digits."""
    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _fmt_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            seq = list(o)
            if not seq:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
                return "[" + ", ".join(enc(v, level + 1) for v in seq) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in seq) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0) + "\n"


def write_spec(spec, path):
    with open(path, "w") as fh:
        fh.write(dumps(spec.to_dict()))
