"""Campaign configuration, per-trial records and CSV/JSON emission."""

import configparser
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

SUITES = ("bound-sweep", "invariance", "counterexamples", "entropy", "appendix", "envariance", "mixture")
FORMATS = ("csv", "json")

BOUND_FIELDS = (
    "trial", "n", "q", "channel_kind", "d_alpha", "d_alphabeta",
    "bound", "margin_ab", "margin_a", "beta_trace", "seed",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    suite: str
    n_min: int = 2
    n_max: int = 6
    trials: int = 1000
    seed: int = 0
    tol: float = 1e-9
    out_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not 2 <= self.n_min <= self.n_max <= 64:
            raise ConfigError(f"need 2 <= n_min <= n_max <= 64, got {self.n_min}..{self.n_max}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ConfigError("tol must be a positive finite number")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")


_CASTS = {"n_min": int, "n_max": int, "trials": int, "seed": int, "tol": float,
          "out_path": str, "format": str, "suite": str}
_ALIASES = {"out": "out_path"}


def read_config_file(path) -> dict:
    """Parse a ``key = value`` file whose keys mirror the CLI flags."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_string("[verify]\n" + fh.read())
    out = {}
    for key, raw in parser["verify"].items():
        name = key.strip().lstrip("-").replace("-", "_")
        name = _ALIASES.get(name, name)
        if name not in _CASTS:
            raise ConfigError(f"{path}: unknown key {key!r}")
        try:
            out[name] = _CASTS[name](raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}: bad value for {key}: {raw!r}") from exc
    return out


@dataclass(frozen=True)
class BoundRecord:
    trial: int
    n: int
    q: float
    channel_kind: str
    d_alpha: float
    d_alphabeta: float
    bound: float
    margin_ab: float
    margin_a: float
    beta_trace: float
    seed: int


@dataclass(frozen=True)
class CheckRecord:
    """One numerical check: ``residual <= tol`` means it passed.

    For equalities the residual is |value - reference|; for inequalities
    value <= reference it is value - reference.
    """

    check: str
    trial: int
    n: int
    value: float
    reference: float
    residual: float
    tol: float
    passed: bool


@dataclass
class SuiteReport:
    suite: str
    records: list = field(default_factory=list)
    violations: int = 0
    warnings: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def add_check(self, check, trial, n, value, reference, tol, kind="eq"):
        value = float(value)
        reference = float(reference)
        residual = abs(value - reference) if kind == "eq" else value - reference
        passed = residual <= tol
        if not passed:
            self.violations += 1
        self.records.append(CheckRecord(check, trial, n, value, reference, residual, tol, passed))
        return passed


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _header(records, cls):
    if records:
        cls = type(records[0])
    if cls is BoundRecord:
        return BOUND_FIELDS
    return tuple(f.name for f in fields(cls))


def render(records, fmt: str = "csv", cls=BoundRecord) -> str:
    header = _header(records, cls)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in records:
            w.writerow([_fmt(getattr(r, h)) for h in header])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(r) for r in records], indent=1) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def emit(records, path, fmt: str = "csv", cls=BoundRecord) -> None:
    """Write records to ``path``; OSError messages carry the path."""
    text = render(records, fmt, cls)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc


def _parse_value(kind, raw):
    if kind is bool:
        return raw == "true"
    return kind(raw)


def load_csv(path, cls=BoundRecord) -> list:
    types = {f.name: f.type for f in fields(cls)}
    conv = {"int": int, "float": float, "str": str, "bool": bool, int: int, float: float, str: str, bool: bool}
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [cls(**{k: _parse_value(conv[types[k]], v) for k, v in row.items()}) for row in rows]


def load_json(path, cls=BoundRecord) -> list:
    with open(path, encoding="utf-8") as fh:
        return [cls(**obj) for obj in json.load(fh)]
