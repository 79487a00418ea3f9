"""JSON/CSV serialization with bit-stable output.

Floats are written with 17 significant digits so they round-trip exactly.
Non-finite floats (an infinite distance bound, say) are written as
``null``. CSV uses commas, a header row and LF line endings.
"""
import csv
import io as _io
import json
import math
from importlib import resources

import numpy as np

from ncdist.causet import CausalSet, Event, order_violations, transitive_closure, links
from ncdist.errors import InvalidInput
from ncdist.krein import fundamental_symmetry
from ncdist.order import FinitePoset
from ncdist.spectral import FiniteSpectralTriple

SCHEMA_VERSION = "1.0"


def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def _encode(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON text (single line, trailing newline)."""
    out = []
    _encode(obj, out)
    return "".join(out) + "\n"


def csv_text(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def load_schema(name):
    text = resources.files("ncdist").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


# -- spectral triples ---------------------------------------------------------


def triple_to_dict(triple):
    d = triple.dirac
    return {
        "n": triple.n,
        "dirac": [[float(z.real), float(z.imag)] for z in d.ravel()],
        "labels": list(triple.labels),
    }


def triple_from_dict(data):
    try:
        n = int(data["n"])
        flat = np.array(data["dirac"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed triple: {exc}") from exc
    if flat.shape != (n * n, 2):
        raise InvalidInput(f"dirac must hold {n * n} [re, im] pairs")
    dirac = (flat[:, 0] + 1j * flat[:, 1]).reshape(n, n)
    return FiniteSpectralTriple(dirac, tuple(data.get("labels") or ()))


# -- causal sets ---------------------------------------------------------------


def causet_to_dict(cs):
    ids = cs.ids
    return {
        "events": [{"id": e.id, "t": e.t, "x": e.x} for e in cs.events],
        "relations": [[ids[i], ids[j]] for i, j in np.argwhere(links(cs))],
    }


def causet_from_dict(data):
    """Rebuild the order as the closure of the listed covering pairs."""
    try:
        events = [Event(int(e["id"]), float(e["t"]), float(e["x"])) for e in data["events"]]
        pairs = [(int(a), int(b)) for a, b in data.get("relations", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed causal set: {exc}") from exc
    pos = {e.id: i for i, e in enumerate(events)}
    if len(pos) != len(events):
        raise InvalidInput("event ids must be unique")
    n = len(events)
    rel = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        if a not in pos or b not in pos:
            raise InvalidInput(f"relation ({a}, {b}) names an unknown event")
        rel[pos[a], pos[b]] = True
    rel = transitive_closure(rel)
    bad = order_violations(rel)
    if bad:
        raise InvalidInput(f"relations violate: {', '.join(bad)}")
    return CausalSet(events, rel)


# -- posets and Krein spaces ---------------------------------------------------


def poset_to_dict(poset):
    return {"n": poset.n, "leq_pairs": [[int(i), int(j)] for i, j in np.argwhere(poset.covers())]}


def poset_from_dict(data):
    try:
        return FinitePoset.from_covers(int(data["n"]), [(int(a), int(b)) for a, b in data["leq_pairs"]])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed poset: {exc}") from exc


def krein_to_dict(space):
    return {
        "dim": space.dim,
        "gram": [[float(z.real), float(z.imag)] for z in space.gram.ravel()],
        "signature": list(space.signature),
    }


def krein_from_dict(data):
    try:
        dim = int(data["dim"])
        flat = np.array(data["gram"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed Krein space: {exc}") from exc
    if flat.shape != (dim * dim, 2):
        raise InvalidInput(f"gram must hold {dim * dim} [re, im] pairs")
    space = fundamental_symmetry((flat[:, 0] + 1j * flat[:, 1]).reshape(dim, dim))
    if "signature" in data and list(data["signature"]) != list(space.signature):
        raise InvalidInput(f"declared signature {data['signature']} != computed {list(space.signature)}")
    return space


def weights_from_dict(cs, data):
    """``{"weights": [[id_a, id_b, w], ...]}`` -> dense matrix (NaN = absent)."""
    w = np.full((cs.n, cs.n), np.nan)
    pos = {e.id: i for i, e in enumerate(cs.events)}
    try:
        for a, b, val in data["weights"]:
            w[pos[int(a)], pos[int(b)]] = float(val)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed weights: {exc}") from exc
    return w
