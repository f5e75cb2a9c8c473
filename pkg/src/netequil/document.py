"""NetworkDocument: the JSON interchange format used by the CLI.

A document carries either an explicit ``(W, shock, functions)`` triple or a
``model`` block naming one of the built-in families; exactly one of the two.
``schema_version`` is ``"1"``.  NaN and infinities are rejected; unbounded
clamps are written as ``null``.
"""

import json
import math

import numpy as np

from .errors import UsageError
from .netmodel import (
    BankruptcyCost,
    ClampedAffine,
    CrossHoldings,
    EisenbergNoe,
    GeneralizedEN,
    GlobalLocalGame,
    InputOutput,
    InterbankGame,
    MaturityEN,
    Network,
    Production,
    RogersVeraart,
    RogersVeraartNet,
    SimpleGame,
    build_network,
)

SCHEMA_VERSION = "1"


class DocumentError(UsageError):
    pass


def _reject_constant(token):
    raise DocumentError(f"non-finite JSON constant {token!r} is not allowed")


def loads_document(text):
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return parse_document(data)


def load_document_file(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads_document(text)


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise DocumentError(f"{where}: must be finite")
    return float(value)


def _vector(value, where):
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list of numbers")
    return [_number(v, f"{where}[{k}]") for k, v in enumerate(value)]


def _matrix(value, where):
    if not isinstance(value, list) or not value:
        raise DocumentError(f"{where}: expected a list of rows")
    rows = [_vector(row, f"{where}[{k}]") for k, row in enumerate(value)]
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DocumentError(f"{where}: ragged rows")
    return rows


def _bound(entry, key, default):
    value = entry.get(key)
    if value is None:
        return default
    return _number(value, f"functions.{key}")


def _parse_function(entry, index):
    if not isinstance(entry, dict) or "kind" not in entry:
        raise DocumentError(f"functions[{index}]: expected an object with 'kind'")
    kind = entry["kind"]
    if kind == "clamped_affine":
        return ClampedAffine(
            offset=_bound(entry, "offset", 0.0),
            gain=_bound(entry, "gain", 1.0),
            lower=_bound(entry, "lower", -math.inf),
            upper=_bound(entry, "upper", math.inf),
        )
    if kind == "rogers_veraart":
        for key in ("beta", "threshold", "cap"):
            if key not in entry:
                raise DocumentError(f"functions[{index}]: missing {key!r}")
        return RogersVeraart(
            beta=_number(entry["beta"], "functions.beta"),
            threshold=_number(entry["threshold"], "functions.threshold"),
            cap=_number(entry["cap"], "functions.cap"),
        )
    raise DocumentError(f"functions[{index}]: unknown kind {kind!r}")


_MODEL_FIELDS = {
    "input_output": ("W", "final_demand"),
    "production": ("alpha", "W"),
    "simple_game": ("phi", "G", "alpha"),
    "global_local_game": ("eta", "gamma", "phi", "G", "alpha"),
    "interbank_game": ("theta", "c0", "phi", "G"),
    "cross_holdings": ("W", "prices", "holdings"),
    "eisenberg_noe": ("liabilities", "cash"),
    "generalized_en": ("W", "pbar", "shock"),
    "bankruptcy_cost": ("W", "alpha", "pbar", "shock"),
    "rogers_veraart": ("W", "alpha", "beta", "pbar", "shock"),
    "maturity_en": ("W", "pbar", "remainder", "shock"),
}


def parse_model(block):
    """A ``model`` block into its ModelSpec."""
    if not isinstance(block, dict) or "family" not in block:
        raise DocumentError("model: expected an object with 'family'")
    family = block["family"]
    if family not in _MODEL_FIELDS:
        raise DocumentError(f"model: unknown family {family!r}")
    required = [f for f in _MODEL_FIELDS[family]
                if not (family == "production" and f == "shock")]
    for key in required:
        if key not in block:
            raise DocumentError(f"model[{family}]: missing {key!r}")
    if family == "input_output":
        return InputOutput(w=_matrix(block["W"], "W"),
                           final_demand=_vector(block["final_demand"],
                                                "final_demand"))
    if family == "production":
        if ("shock" in block) == ("log_productivity" in block):
            raise DocumentError("model[production]: give exactly one of "
                                "'shock' or 'log_productivity'")
        return Production(
            alpha=_number(block["alpha"], "alpha"),
            w=_matrix(block["W"], "W"),
            shock=_vector(block["shock"], "shock") if "shock" in block else None,
            log_productivity=(_vector(block["log_productivity"],
                                      "log_productivity")
                              if "log_productivity" in block else None),
        )
    if family == "simple_game":
        return SimpleGame(phi=_number(block["phi"], "phi"),
                          g=_matrix(block["G"], "G"),
                          alpha=_vector(block["alpha"], "alpha"))
    if family == "global_local_game":
        return GlobalLocalGame(eta=_number(block["eta"], "eta"),
                               gamma=_number(block["gamma"], "gamma"),
                               phi=_number(block["phi"], "phi"),
                               g=_matrix(block["G"], "G"),
                               alpha=_vector(block["alpha"], "alpha"))
    if family == "interbank_game":
        return InterbankGame(theta=_number(block["theta"], "theta"),
                             c0=_vector(block["c0"], "c0"),
                             phi=_vector(block["phi"], "phi"),
                             g=_matrix(block["G"], "G"))
    if family == "cross_holdings":
        return CrossHoldings(w=_matrix(block["W"], "W"),
                             prices=_vector(block["prices"], "prices"),
                             holdings=_matrix(block["holdings"], "holdings"))
    if family == "eisenberg_noe":
        return EisenbergNoe(liabilities=_matrix(block["liabilities"],
                                                "liabilities"),
                            cash=_vector(block["cash"], "cash"))
    if family == "generalized_en":
        return GeneralizedEN(w=_matrix(block["W"], "W"),
                             pbar=_vector(block["pbar"], "pbar"),
                             shock=_vector(block["shock"], "shock"))
    if family == "bankruptcy_cost":
        return BankruptcyCost(w=_matrix(block["W"], "W"),
                              alpha=_vector(block["alpha"], "alpha"),
                              pbar=_vector(block["pbar"], "pbar"),
                              shock=_vector(block["shock"], "shock"))
    if family == "rogers_veraart":
        return RogersVeraartNet(w=_matrix(block["W"], "W"),
                                alpha=_number(block["alpha"], "alpha"),
                                beta=_number(block["beta"], "beta"),
                                pbar=_vector(block["pbar"], "pbar"),
                                shock=_vector(block["shock"], "shock"))
    return MaturityEN(w=_matrix(block["W"], "W"),
                      pbar=_vector(block["pbar"], "pbar"),
                      remainder=_vector(block["remainder"], "remainder"),
                      shock=_vector(block["shock"], "shock"))


def parse_document(data):
    """Validate a document dict and build its Network."""
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}; "
                            f"expected {SCHEMA_VERSION!r}")
    explicit = [k for k in ("W", "shock", "functions") if k in data]
    has_model = "model" in data
    if has_model and explicit:
        raise DocumentError("give either a model block or W/shock/functions, "
                            "not both")
    if not has_model and len(explicit) != 3:
        raise DocumentError("document needs W, shock and functions "
                            "(or a model block)")
    if has_model:
        net = build_network(parse_model(data["model"]))
        if "n" in data and data["n"] != net.n:
            raise DocumentError(f"n = {data['n']} disagrees with the model "
                                f"dimension {net.n}")
        return net
    w = _matrix(data["W"], "W")
    n = len(w)
    if "n" in data and data["n"] != n:
        raise DocumentError(f"n = {data['n']} disagrees with W ({n} rows)")
    shock = _vector(data["shock"], "shock")
    if len(shock) != n:
        raise DocumentError(f"shock must have length {n}")
    funcs = data["functions"]
    if not isinstance(funcs, list) or len(funcs) != n:
        raise DocumentError(f"functions must list {n} entries")
    functions = tuple(_parse_function(entry, k) for k, entry in enumerate(funcs))
    return Network(w=np.array(w), functions=functions, shock=np.array(shock))


def _bound_out(value):
    return None if math.isinf(value) else value


def network_to_document(net):
    """Serialise a Network into a document dict (round-trips exactly)."""
    functions = []
    for f in net.functions:
        if isinstance(f, ClampedAffine):
            functions.append({
                "kind": "clamped_affine",
                "offset": f.offset,
                "gain": f.gain,
                "lower": _bound_out(f.lower),
                "upper": _bound_out(f.upper),
            })
        else:
            functions.append({
                "kind": "rogers_veraart",
                "beta": f.beta,
                "threshold": f.threshold,
                "cap": f.cap,
            })
    return {
        "schema_version": SCHEMA_VERSION,
        "n": net.n,
        "W": net.w.tolist(),
        "shock": net.shock.tolist(),
        "functions": functions,
    }


def dumps_document(doc):
    return json.dumps(doc, indent=2, allow_nan=False)
